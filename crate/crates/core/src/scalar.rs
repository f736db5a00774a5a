//! Real scalar abstraction shared by every numerical routine in the crate.

use nalgebra::RealField;
use num_traits::ToPrimitive;

/// Complex number over a [`Real`] scalar.
pub type Complex<T> = nalgebra::Complex<T>;

/// Floating-point scalar the kernel is generic over. Implemented for `f32`
/// and `f64`.
///
/// Tolerances throughout the crate are written as nominal `f64` values and
/// mapped through [`Real::tol`], which floors them at a small multiple of the
/// scalar's machine epsilon so that single precision stays usable.
pub trait Real:
    RealField + Copy + Default + ToPrimitive + std::fmt::Display + Send + Sync + 'static
{
    /// Converts an `f64` literal into this scalar.
    fn lit(x: f64) -> Self {
        nalgebra::convert(x)
    }

    /// Nominal tolerance `nominal`, never below `8 * epsilon`.
    fn tol(nominal: f64) -> Self {
        let floor = Self::default_epsilon() * Self::lit(8.0);
        let nominal = Self::lit(nominal);
        if nominal > floor {
            nominal
        } else {
            floor
        }
    }

    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Real for f32 {}
impl Real for f64 {}

pub(crate) fn czero<T: Real>() -> Complex<T> {
    Complex::new(T::zero(), T::zero())
}
