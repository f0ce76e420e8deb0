//! The floating-point abstraction used by the numeric pipelines.
//!
//! Training and factorization code is generic over [`Scalar`] so the same
//! kernels run in `f32` (throughput) or `f64` (the precision the test
//! tolerances are stated in). Statistics stay `f64`-only; see `stats`.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use ndarray::LinalgScalar;
use num_traits::{Float, FromPrimitive, NumAssign, ToPrimitive};
use rand_core::RngCore;

/// Draws a uniform value in [0, 1) with exactly one `next_u64` call.
///
/// The top 53 bits of the draw are used so the result is an exact multiple
/// of 2^-53; both scalar widths derive their samples from this one f64
/// value, keeping RNG consumption identical across instantiations.
pub fn unit_f64<R: RngCore + ?Sized>(rng: &mut R) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Draws a standard normal deviate via Box-Muller, consuming exactly two
/// `next_u64` calls. The sine branch is discarded; predictable consumption
/// matters more here than halving the draw count.
pub fn normal_f64<R: RngCore + ?Sized>(rng: &mut R) -> f64 {
    // u1 lies in (0, 1] so the logarithm is finite.
    let u1 = ((rng.next_u64() >> 11) + 1) as f64 * (1.0 / (1u64 << 53) as f64);
    let u2 = unit_f64(rng);
    (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
}

/// Floating-point element type for matrices and embeddings.
///
/// All random sampling routes through f64 (`unit_f64` / `normal_f64`) and
/// converts afterwards, so an `f32` run consumes the identical RNG stream
/// as an `f64` run with the same seed.
pub trait Scalar:
    Float
    + NumAssign
    + FromPrimitive
    + ToPrimitive
    + Sum
    + LinalgScalar
    + Display
    + Debug
    + Default
    + Send
    + Sync
    + 'static
{
    /// Converts from f64, rounding to the nearest representable value.
    fn of(v: f64) -> Self;

    fn as_f64(self) -> f64;

    fn as_f32(self) -> f32;

    fn widen_f32(v: f32) -> Self;

    /// Bit pattern widened to u64, used by the lock-free parameter store.
    /// `from_bits64(to_bits64(x)) == x` exactly for both widths.
    fn to_bits64(self) -> u64;

    fn from_bits64(bits: u64) -> Self;

    fn sample_unit<R: RngCore + ?Sized>(rng: &mut R) -> Self {
        Self::of(unit_f64(rng))
    }

    fn sample_standard_normal<R: RngCore + ?Sized>(rng: &mut R) -> Self {
        Self::of(normal_f64(rng))
    }
}

impl Scalar for f32 {
    fn of(v: f64) -> Self {
        v as f32
    }

    fn as_f64(self) -> f64 {
        f64::from(self)
    }

    fn as_f32(self) -> f32 {
        self
    }

    fn widen_f32(v: f32) -> Self {
        v
    }

    fn to_bits64(self) -> u64 {
        u64::from(self.to_bits())
    }

    fn from_bits64(bits: u64) -> Self {
        f32::from_bits(bits as u32)
    }
}

impl Scalar for f64 {
    fn of(v: f64) -> Self {
        v
    }

    fn as_f64(self) -> f64 {
        self
    }

    fn as_f32(self) -> f32 {
        self as f32
    }

    fn widen_f32(v: f32) -> Self {
        f64::from(v)
    }

    fn to_bits64(self) -> u64 {
        self.to_bits()
    }

    fn from_bits64(bits: u64) -> Self {
        f64::from_bits(bits)
    }
}
