//! Scalar field abstraction and the shared rank cutoff.

use std::fmt;

use nalgebra::ComplexField;
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};

/// The ground field of a space.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Field {
    Real,
    Complex,
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Field::Real => "real",
            Field::Complex => "complex",
        })
    }
}

impl std::str::FromStr for Field {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "real" => Ok(Field::Real),
            "complex" => Ok(Field::Complex),
            other => Err(Error::Parse(format!("unknown field `{other}`"))),
        }
    }
}

/// Entry type of all matrices: `f64` or `Complex64`.
pub trait Scalar: ComplexField<RealField = f64> + Copy + Send + Sync + fmt::Debug {
    const FIELD: Field;

    fn to_c64(self) -> Complex64;
    /// Real part only when `Self` is real.
    fn from_c64(z: Complex64) -> Self;
    /// Standard Gaussian sample (circular for complex, unit total variance per component).
    fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> Self;
}

impl Scalar for f64 {
    const FIELD: Field = Field::Real;

    fn to_c64(self) -> Complex64 {
        Complex64::new(self, 0.0)
    }
    fn from_c64(z: Complex64) -> Self {
        z.re
    }
    fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> Self {
        rng.sample(StandardNormal)
    }
}

impl Scalar for Complex64 {
    const FIELD: Field = Field::Complex;

    fn to_c64(self) -> Complex64 {
        self
    }
    fn from_c64(z: Complex64) -> Self {
        z
    }
    fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> Self {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        Complex64::new(re, im)
    }
}

/// Relative rank tolerance.
///
/// Every rank or sign decision in the crate goes through [`Tolerance::cutoff`]:
/// a singular value or eigenvalue counts as zero when its magnitude is at most
/// `rel * scale * max(dim, 1)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tolerance(f64);

impl Tolerance {
    pub const DEFAULT_REL: f64 = 1e-10;

    pub fn new(rel: f64) -> Result<Self> {
        if !(rel.is_finite() && rel >= 0.0) {
            return Err(Error::InvalidArgument(format!(
                "tolerance must be finite and nonnegative, got {rel}"
            )));
        }
        Ok(Tolerance(rel))
    }

    pub fn rel(self) -> f64 {
        self.0
    }

    pub fn cutoff(self, scale: f64, dim: usize) -> f64 {
        self.0 * scale * dim.max(1) as f64
    }

    /// Looser of two tolerances, used when combining subspaces.
    pub fn max(self, other: Tolerance) -> Tolerance {
        Tolerance(self.0.max(other.0))
    }

    /// Threshold used for comparisons of quantities that are O(1) by construction,
    /// such as gaps between subspaces given by orthonormal bases.
    pub(crate) fn unit_cutoff(self, dim: usize) -> f64 {
        // An orthonormal basis carries rounding of order eps * dim; never compare
        // tighter than that or equal subspaces would be reported as different.
        self.cutoff(1.0, dim).max(64.0 * f64::EPSILON * dim.max(1) as f64)
    }
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance(Self::DEFAULT_REL)
    }
}

/// Checks that `h` has modulus one.
pub fn check_unit<T: Scalar>(h: T, tol: Tolerance) -> Result<()> {
    let m = h.modulus();
    if (m - 1.0).abs() > tol.unit_cutoff(1) {
        return Err(Error::InvalidScalar(format!("|h| = {m}, expected 1")));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cutoff_scales_linearly() {
        let t = Tolerance::new(1e-10).unwrap();
        assert_eq!(t.cutoff(2.0, 3), 6e-10);
        assert_eq!(t.cutoff(2.0, 0), 2e-10);
    }

    #[test]
    fn rejects_negative_tolerance() {
        assert!(Tolerance::new(-1.0).is_err());
        assert!(Tolerance::new(f64::NAN).is_err());
    }

    #[test]
    fn unit_check() {
        let t = Tolerance::default();
        assert!(check_unit(-1.0, t).is_ok());
        assert!(check_unit(Complex64::new(0.6, 0.8), t).is_ok());
        assert!(matches!(check_unit(2.0, t), Err(Error::InvalidScalar(_))));
    }
}
