//! Scalar abstraction for the geometry and raster layers.

use std::fmt;

use num_traits::Float;

/// Absolute tolerance used for coincidence tests in geometry predicates
/// (points considered equal, distances considered zero). Coordinates are
/// planar meters, so this is one nanometer.
pub const COINCIDENCE_EPS: f64 = 1e-9;

/// Absolute area below which two-dimensional pieces are treated as
/// degenerate slivers and dropped by the regularized set operations.
pub const SLIVER_AREA_EPS: f64 = 1e-9;

/// Floating point scalar usable as coordinate and raster cell type.
pub trait Scalar: Float + fmt::Debug + fmt::Display + 'static {
    /// Smallest representable value strictly greater than `self`.
    fn next_up_value(self) -> Self;

    /// Coincidence tolerance, [`COINCIDENCE_EPS`] by default. A scalar
    /// newtype may override this to tune the predicate tolerance.
    fn eps() -> Self {
        Self::from(COINCIDENCE_EPS).unwrap()
    }

    /// Default sliver area tolerance ([`SLIVER_AREA_EPS`]) in this type.
    fn sliver_eps() -> Self {
        Self::from(SLIVER_AREA_EPS).unwrap()
    }

    fn two() -> Self {
        Self::one() + Self::one()
    }

    fn half() -> Self {
        Self::one() / Self::two()
    }

    fn from_usize(n: usize) -> Self {
        Self::from(n).unwrap()
    }

    fn from_f64(v: f64) -> Self {
        Self::from(v).unwrap()
    }
}

impl Scalar for f64 {
    fn next_up_value(self) -> Self {
        if self.is_nan() || self == f64::INFINITY {
            return self;
        }
        if self == 0.0 {
            return f64::from_bits(1);
        }
        let bits = self.to_bits();
        if self > 0.0 {
            f64::from_bits(bits + 1)
        } else {
            f64::from_bits(bits - 1)
        }
    }
}

impl Scalar for f32 {
    fn next_up_value(self) -> Self {
        if self.is_nan() || self == f32::INFINITY {
            return self;
        }
        if self == 0.0 {
            return f32::from_bits(1);
        }
        let bits = self.to_bits();
        if self > 0.0 {
            f32::from_bits(bits + 1)
        } else {
            f32::from_bits(bits - 1)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn next_up_is_strictly_greater() {
        for v in [-1.5f64, 0.0, 1.0, 12345.678] {
            assert!(v.next_up_value() > v);
        }
        assert_eq!(1.0f64.next_up_value(), f64::from_bits(1.0f64.to_bits() + 1));
    }

    #[test]
    fn next_up_f32() {
        assert!(0.0f32.next_up_value() > 0.0);
        assert!((-2.0f32).next_up_value() > -2.0);
    }
}
