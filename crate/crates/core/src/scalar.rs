//! Floating-point scalar abstraction for the numeric layer.

use std::fmt::Debug;

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive};

/// Real floating-point type usable by the quadrature and evaluation code.
pub trait Real:
    Float + FloatConst + FromPrimitive + Debug + Default + Send + Sync + 'static
{
    /// Machine epsilon as `f64`, used to size noise floors.
    const EPS: f64;

    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable")
    }

    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Real for f32 {
    const EPS: f64 = f32::EPSILON as f64;
}

impl Real for f64 {
    const EPS: f64 = f64::EPSILON;
}

pub fn cplx<T: Real>(z: Complex<f64>) -> Complex<T> {
    Complex::new(T::lit(z.re), T::lit(z.im))
}

pub fn to_c64<T: Real>(z: Complex<T>) -> Complex<f64> {
    Complex::new(z.re.to_f64_lossy(), z.im.to_f64_lossy())
}

/// Principal logarithm for the holomorphic carrier and its mirror for the
/// anti-holomorphic one, so that `exp(a·log f + a·log_anti(conj f)) = |f|^{2a}`
/// everywhere off the zero set, including on the negative real axis.
pub fn log_holo<T: Real>(z: Complex<T>) -> Complex<T> {
    z.ln()
}

pub fn log_anti<T: Real>(zbar: Complex<T>) -> Complex<T> {
    zbar.conj().ln().conj()
}
