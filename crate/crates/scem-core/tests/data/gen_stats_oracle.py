#!/usr/bin/env python3
"""Regenerates stats_oracle.json.

The JSON file freezes high-precision reference values for the statistics
kernels (spearman, pearson, loglinear_fit, ks_two_sample). Values are
computed with mpmath at 60 decimal digits from the exact binary64 inputs,
then rounded once to binary64 for storage, so any implementation that is
accurate to ~1e-12 will match the stored values well below the 1e-9 test
tolerance.

Requires: numpy, mpmath. Run from anywhere:

    python3 gen_stats_oracle.py > stats_oracle.json
"""

import json
import sys
from fractions import Fraction

import numpy as np
from mpmath import mp, mpf, exp, sqrt, betainc, nsum, inf

mp.dps = 60


def f(x):
    """Exact binary64 -> mpf (no decimal round trip)."""
    return mpf(x)


def out(x):
    """mpf -> nearest binary64, as a Python float for JSON."""
    return float(x)


def midranks(values):
    """1-based fractional ranks with ties averaged, as exact Fractions."""
    order = sorted(range(len(values)), key=lambda i: values[i])
    ranks = [Fraction(0)] * len(values)
    i = 0
    while i < len(values):
        j = i
        while j + 1 < len(values) and values[order[j + 1]] == values[order[i]]:
            j += 1
        avg = Fraction((i + 1) + (j + 1), 2)
        for k in range(i, j + 1):
            ranks[order[k]] = avg
        i = j + 1
    return ranks


def mp_pearson_r(x, y):
    n = len(x)
    xs = [f(v) for v in x]
    ys = [f(v) for v in y]
    mx = sum(xs) / n
    my = sum(ys) / n
    sxy = sum((a - mx) * (b - my) for a, b in zip(xs, ys))
    sxx = sum((a - mx) ** 2 for a in xs)
    syy = sum((b - my) ** 2 for b in ys)
    return sxy / sqrt(sxx * syy)


def mp_pearson_p(r, n):
    """Two-sided p for H0: rho=0, via the exact Student-t relation."""
    nu = mpf(n - 2)
    r2 = r * r
    if r2 >= 1:
        return mpf(0)
    t2 = r2 * nu / (1 - r2)
    # P(|T| >= t) = I_{nu/(nu+t^2)}(nu/2, 1/2), regularized incomplete beta.
    xbeta = nu / (nu + t2)
    return betainc(nu / 2, mpf(1) / 2, 0, xbeta, regularized=True)


def mp_spearman(x, y):
    rx = [mpf(r.numerator) / r.denominator for r in midranks(x)]
    ry = [mpf(r.numerator) / r.denominator for r in midranks(y)]
    return mp_pearson_r(rx, ry)


def mp_ols(x, y):
    """OLS slope/intercept of y on x plus Pearson r and p of (x, y)."""
    n = len(x)
    xs = [f(v) for v in x]
    ys = [f(v) for v in y]
    mx = sum(xs) / n
    my = sum(ys) / n
    sxy = sum((a - mx) * (b - my) for a, b in zip(xs, ys))
    sxx = sum((a - mx) ** 2 for a in xs)
    slope = sxy / sxx
    intercept = my - slope * mx
    r = mp_pearson_r(xs, ys)
    p = mp_pearson_p(r, n)
    return slope, intercept, r, p


def ks_d_exact(a, b):
    """sup |ECDF_a - ECDF_b| evaluated at every sample point, exact."""
    n1, n2 = len(a), len(b)
    sa, sb = sorted(a), sorted(b)
    best = Fraction(0)
    for t in sorted(set(a) | set(b)):
        f1 = Fraction(sum(1 for v in sa if v <= t), n1)
        f2 = Fraction(sum(1 for v in sb if v <= t), n2)
        best = max(best, abs(f1 - f2))
    return best


def mp_ks_p(d, n1, n2):
    ne = mpf(n1) * n2 / (n1 + n2)
    lam = sqrt(ne) * mpf(d.numerator) / d.denominator
    if lam == 0:
        return mpf(1)
    q = 2 * nsum(lambda k: (-1) ** (k - 1) * exp(-2 * k * k * lam * lam), [1, inf])
    return min(max(q, mpf(0)), mpf(1))


def main():
    rng = np.random.RandomState(20240917)
    doc = {"spearman": [], "pearson": [], "loglinear": [], "ks": []}

    # --- spearman: mixed lengths, heavy tie coverage ---------------------
    for i in range(22):
        n = int(rng.randint(4, 40))
        x = rng.normal(0, 3, n)
        y = 0.4 * x + rng.normal(0, 2, n)
        if i % 3 == 0:
            x = np.round(x)          # many ties in x
        if i % 3 == 1:
            y = np.round(y * 2) / 2  # ties in y
        if i % 5 == 0:
            y = np.round(y)          # ties in both
        x = [float(v) for v in x]
        y = [float(v) for v in y]
        if len(set(x)) < 2 or len(set(y)) < 2:
            continue
        doc["spearman"].append({"x": x, "y": y, "rho": out(mp_spearman(x, y))})

    # --- pearson: r and two-sided p over a range of n and effect sizes --
    specs = [(3, 0.0), (4, 0.9), (5, 0.2), (6, -0.7), (8, 0.5), (10, -0.3),
             (12, 0.8), (14, 0.1), (16, -0.9), (18, 0.4), (20, -0.1),
             (22, 0.6), (25, -0.5), (28, 0.3), (28, 0.0), (30, 0.95),
             (33, -0.8), (36, 0.05), (40, 0.7), (45, -0.2), (50, 0.45),
             (60, -0.6), (7, 0.99), (9, -0.99)]
    for n, rho in specs:
        x = rng.normal(0, 1, n)
        y = rho * x + np.sqrt(max(1 - rho * rho, 1e-6)) * rng.normal(0, 1, n)
        x = [float(v) for v in x]
        y = [float(v) for v in y]
        r = mp_pearson_r(x, y)
        p = mp_pearson_p(r, n)
        doc["pearson"].append({"x": x, "y": y, "r": out(r), "p": out(p)})

    # --- loglinear: (fraction, positive rank) points ---------------------
    for i in range(21):
        n = int(rng.randint(3, 30))
        xs = np.sort(rng.uniform(0, 1, n))
        slope_true = rng.uniform(-3, 1)
        logy = slope_true * xs + rng.uniform(0.5, 3) + rng.normal(0, 0.4, n)
        ys = np.power(10.0, logy)
        if i % 4 == 0:
            ys = np.maximum(np.round(ys), 1.0)  # integer ranks, possible ties
        xs = [float(v) for v in xs]
        ys = [float(v) for v in ys]
        logys = [f(v) for v in ys]
        ly = [mp.log(v, 10) for v in logys]
        if len(set(xs)) < 2 or len(set([out(v) for v in ly])) < 2:
            continue
        slope, intercept, r, p = mp_ols(xs, [out(v) for v in ly])
        doc["loglinear"].append({
            "x": xs, "y": ys,
            "slope": out(slope), "intercept": out(intercept),
            "r": out(r), "p": out(p),
        })

    # --- ks: varied sizes, shifts, and tie structure ---------------------
    for i in range(22):
        n1 = int(rng.randint(3, 60))
        n2 = int(rng.randint(3, 60))
        a = rng.normal(0, 1, n1)
        b = rng.normal(0.2 + 0.1 * i, 1 + 0.05 * i, n2)
        if i % 3 == 0:
            a = np.round(a * 2) / 2  # ties within a
        if i % 4 == 0:
            b = np.round(b * 2) / 2  # ties within b, and across when i%12==0
        a = [float(v) for v in a]
        b = [float(v) for v in b]
        d = ks_d_exact(a, b)
        p = mp_ks_p(d, n1, n2)
        doc["ks"].append({
            "a": a, "b": b,
            "d": float(d.numerator) / float(d.denominator),
            "p": out(p),
        })

    for key, need in [("spearman", 20), ("pearson", 20), ("loglinear", 20), ("ks", 20)]:
        if len(doc[key]) < need:
            raise SystemExit(f"only {len(doc[key])} {key} fixtures, need {need}")

    json.dump(doc, sys.stdout, indent=1)
    sys.stdout.write("\n")


if __name__ == "__main__":
    main()
