//! Dual numbers `p_s + p_i ε` with `ε² = 0`.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use nalgebra::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Absolute tolerance on `|standard|` below which a dual number counts as
/// infinitesimal.
pub const APPRECIABLE_TOL: f64 = 1e-12;

/// A real dual number.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct DualScalar {
    pub standard: f64,
    pub infinitesimal: f64,
}

impl DualScalar {
    pub const ZERO: Self = Self {
        standard: 0.0,
        infinitesimal: 0.0,
    };
    pub const ONE: Self = Self {
        standard: 1.0,
        infinitesimal: 0.0,
    };
    pub const EPSILON: Self = Self {
        standard: 0.0,
        infinitesimal: 1.0,
    };

    /// Panics if either part is NaN or infinite; use [`DualScalar::try_new`]
    /// for untrusted input.
    pub fn new(standard: f64, infinitesimal: f64) -> Self {
        Self::try_new(standard, infinitesimal).expect("dual number parts must be finite")
    }

    pub fn try_new(standard: f64, infinitesimal: f64) -> Result<Self> {
        if standard.is_finite() && infinitesimal.is_finite() {
            Ok(Self {
                standard,
                infinitesimal,
            })
        } else {
            Err(Error::InvalidParameter(format!(
                "non-finite dual number {standard} + {infinitesimal}ε"
            )))
        }
    }

    pub fn real(standard: f64) -> Self {
        Self::new(standard, 0.0)
    }

    pub fn is_appreciable(self) -> bool {
        self.is_appreciable_with(APPRECIABLE_TOL)
    }

    pub fn is_appreciable_with(self, tol: f64) -> bool {
        self.standard.abs() > tol
    }

    /// `0 < self` under the total order.
    pub fn is_positive(self) -> bool {
        Self::ZERO.less_than(self)
    }

    /// Strict lexicographic order: standard parts first, then infinitesimal.
    pub fn less_than(self, other: Self) -> bool {
        self.standard < other.standard
            || (self.standard == other.standard && self.infinitesimal < other.infinitesimal)
    }

    /// `self ≤ other` in the total order, treating parts that differ by at
    /// most `tol` as equal.
    pub fn le_with_tol(self, other: Self, tol: f64) -> bool {
        if (self.standard - other.standard).abs() <= tol {
            self.infinitesimal <= other.infinitesimal + tol
        } else {
            self.standard < other.standard
        }
    }

    pub fn total_cmp(&self, other: &Self) -> Ordering {
        self.standard
            .total_cmp(&other.standard)
            .then(self.infinitesimal.total_cmp(&other.infinitesimal))
    }

    pub fn recip(self) -> Result<Self> {
        if self.standard == 0.0 {
            return Err(Error::InfinitesimalDivisor(self.to_string()));
        }
        let inv = 1.0 / self.standard;
        Ok(Self::new(inv, -self.infinitesimal * inv * inv))
    }

    pub fn checked_div(self, rhs: Self) -> Result<Self> {
        Ok(self * rhs.recip()?)
    }

    /// `self²` without going through the general product.
    pub fn square(self) -> Self {
        Self::new(
            self.standard * self.standard,
            2.0 * self.standard * self.infinitesimal,
        )
    }

    /// The 2×2 lower-triangular matrix `[[s, 0], [i, s]]`, row-major.
    pub fn representative(self) -> [[f64; 2]; 2] {
        [[self.standard, 0.0], [self.infinitesimal, self.standard]]
    }
}

impl Add for DualScalar {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self {
            standard: self.standard + rhs.standard,
            infinitesimal: self.infinitesimal + rhs.infinitesimal,
        }
    }
}

impl Sub for DualScalar {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self {
            standard: self.standard - rhs.standard,
            infinitesimal: self.infinitesimal - rhs.infinitesimal,
        }
    }
}

impl Neg for DualScalar {
    type Output = Self;
    fn neg(self) -> Self {
        Self {
            standard: -self.standard,
            infinitesimal: -self.infinitesimal,
        }
    }
}

impl Mul for DualScalar {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        Self {
            standard: self.standard * rhs.standard,
            infinitesimal: self.standard * rhs.infinitesimal + self.infinitesimal * rhs.standard,
        }
    }
}

impl Mul<f64> for DualScalar {
    type Output = Self;
    fn mul(self, rhs: f64) -> Self {
        Self {
            standard: self.standard * rhs,
            infinitesimal: self.infinitesimal * rhs,
        }
    }
}

impl PartialOrd for DualScalar {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        match (
            self.standard.partial_cmp(&other.standard)?,
            self.infinitesimal.partial_cmp(&other.infinitesimal)?,
        ) {
            (Ordering::Equal, o) => Some(o),
            (o, _) => Some(o),
        }
    }
}

impl fmt::Display for DualScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = if self.infinitesimal.is_sign_negative() {
            '-'
        } else {
            '+'
        };
        match f.precision() {
            Some(p) => write!(
                f,
                "{:.*}{sign}{:.*}ε",
                p,
                self.standard,
                p,
                self.infinitesimal.abs()
            ),
            None => write!(f, "{}{sign}{}ε", self.standard, self.infinitesimal.abs()),
        }
    }
}

impl FromStr for DualScalar {
    type Err = Error;

    /// Accepts `a+bε`, `a - bε`, a bare real `a`, or a bare `bε`.
    fn from_str(s: &str) -> Result<Self> {
        let err = || Error::ParseDual(s.to_string());
        let t = s.trim();
        let Some(body) = t.strip_suffix('ε') else {
            let v: f64 = t.parse().map_err(|_| err())?;
            return DualScalar::try_new(v, 0.0).map_err(|_| err());
        };
        // Split at the last sign that is not part of an exponent and not leading.
        let bytes = body.as_bytes();
        let mut split = None;
        for i in (1..bytes.len()).rev() {
            if (bytes[i] == b'+' || bytes[i] == b'-')
                && !matches!(bytes[i - 1], b'e' | b'E')
            {
                split = Some(i);
                break;
            }
        }
        let (std_part, inf_part) = match split {
            Some(i) => (body[..i].trim(), body[i..].trim()),
            None => ("0", body.trim()),
        };
        let inf_part = inf_part.replace(' ', "");
        let inf_part = match inf_part.as_str() {
            "" | "+" => "1".to_string(),
            "-" => "-1".to_string(),
            other => other.to_string(),
        };
        let standard: f64 = std_part.parse().map_err(|_| err())?;
        let infinitesimal: f64 = inf_part.parse().map_err(|_| err())?;
        DualScalar::try_new(standard, infinitesimal).map_err(|_| err())
    }
}

/// A dual number with complex parts. `ε` commutes with complex scalars.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct DualComplex {
    pub standard: Complex<f64>,
    pub infinitesimal: Complex<f64>,
}

impl DualComplex {
    pub fn new(standard: Complex<f64>, infinitesimal: Complex<f64>) -> Self {
        assert!(
            standard.re.is_finite()
                && standard.im.is_finite()
                && infinitesimal.re.is_finite()
                && infinitesimal.im.is_finite(),
            "dual number parts must be finite"
        );
        Self {
            standard,
            infinitesimal,
        }
    }

    pub fn conj(self) -> Self {
        Self {
            standard: self.standard.conj(),
            infinitesimal: self.infinitesimal.conj(),
        }
    }

    pub fn is_appreciable(self) -> bool {
        self.standard.norm() > APPRECIABLE_TOL
    }

    pub fn recip(self) -> Result<Self> {
        if self.standard == Complex::new(0.0, 0.0) {
            return Err(Error::InfinitesimalDivisor(format!(
                "{}+({})ε",
                self.standard, self.infinitesimal
            )));
        }
        let inv = self.standard.inv();
        Ok(Self::new(inv, -self.infinitesimal * inv * inv))
    }
}

impl From<DualScalar> for DualComplex {
    fn from(d: DualScalar) -> Self {
        Self::new(Complex::new(d.standard, 0.0), Complex::new(d.infinitesimal, 0.0))
    }
}

impl Add for DualComplex {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self {
            standard: self.standard + rhs.standard,
            infinitesimal: self.infinitesimal + rhs.infinitesimal,
        }
    }
}

impl Sub for DualComplex {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self {
            standard: self.standard - rhs.standard,
            infinitesimal: self.infinitesimal - rhs.infinitesimal,
        }
    }
}

impl Mul for DualComplex {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        Self {
            standard: self.standard * rhs.standard,
            infinitesimal: self.standard * rhs.infinitesimal + self.infinitesimal * rhs.standard,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn d(s: f64, i: f64) -> DualScalar {
        DualScalar::new(s, i)
    }

    #[test]
    fn product_drops_epsilon_squared() {
        assert_eq!(d(1.0, 2.0) * d(3.0, 4.0), d(3.0, 10.0));
        assert_eq!(DualScalar::EPSILON * DualScalar::EPSILON, DualScalar::ZERO);
    }

    #[test]
    fn scaling_by_real_dual_matches_representative_product() {
        let mut rng = rand::rng();
        for _ in 0..50 {
            let x = d(rand::Rng::random_range(&mut rng, -5.0..5.0), rand::Rng::random_range(&mut rng, -5.0..5.0));
            let two = d(2.0, 0.0);
            let got = two * x;
            // column 0 of R(two)·R(x)
            let (a, b) = (two.representative(), x.representative());
            let c00 = a[0][0] * b[0][0] + a[0][1] * b[1][0];
            let c10 = a[1][0] * b[0][0] + a[1][1] * b[1][0];
            assert_eq!(got, d(c00, c10));
            assert_eq!(got, d(2.0 * x.standard, 2.0 * x.infinitesimal));
        }
    }

    #[test]
    fn order_examples() {
        assert!(d(1.0, 100.0).less_than(d(2.0, 0.0)));
        assert!(d(2.0, 1.0).less_than(d(2.0, 3.0)));
        assert!(!d(2.0, 3.0).less_than(d(2.0, 3.0)));
    }

    #[test]
    fn tolerant_order() {
        assert!(d(1.0, 5.0).le_with_tol(d(1.0 + 1e-14, 4.0), 1e-12) == false);
        assert!(d(1.0, 4.0).le_with_tol(d(1.0 + 1e-14, 4.0), 1e-12));
        assert!(d(1.0, 9.0).le_with_tol(d(2.0, 0.0), 1e-12));
    }

    #[test]
    fn appreciability() {
        assert!(d(3.0, 0.0).is_appreciable());
        assert!(!d(0.0, 5.0).is_appreciable());
        assert!(!d(1e-30, 1.0).is_appreciable());
    }

    #[test]
    fn positivity() {
        assert!(d(0.0, 2.0).is_positive());
        assert!(!d(-1.0, 9.0).is_positive());
        assert!(!DualScalar::ZERO.is_positive());
    }

    #[test]
    fn reciprocal_of_infinitesimal_is_an_error() {
        assert!(matches!(
            DualScalar::EPSILON.recip(),
            Err(Error::InfinitesimalDivisor(_))
        ));
        let r = d(2.0, 1.0).recip().unwrap();
        assert_eq!(r, d(0.5, -0.25));
        assert_eq!(r * d(2.0, 1.0), DualScalar::ONE);
    }

    #[test]
    fn non_finite_rejected() {
        assert!(DualScalar::try_new(f64::NAN, 0.0).is_err());
        assert!(DualScalar::try_new(0.0, f64::INFINITY).is_err());
    }

    #[test]
    fn text_form() {
        assert_eq!(d(1.5, -2.0).to_string(), "1.5-2ε");
        assert_eq!(d(1.5, 2.0).to_string(), "1.5+2ε");
        assert_eq!("1.5-2ε".parse::<DualScalar>().unwrap(), d(1.5, -2.0));
        assert_eq!("1.5 + 2ε".parse::<DualScalar>().unwrap(), d(1.5, 2.0));
        assert_eq!("-1e-3 - 2.5e2ε".parse::<DualScalar>().unwrap(), d(-1e-3, -250.0));
        assert_eq!("3".parse::<DualScalar>().unwrap(), d(3.0, 0.0));
        assert_eq!("-4ε".parse::<DualScalar>().unwrap(), d(0.0, -4.0));
        assert!("1+xε".parse::<DualScalar>().is_err());
    }

    #[test]
    fn complex_dual_product() {
        let a = DualComplex::new(Complex::new(1.0, 1.0), Complex::new(0.0, 2.0));
        let b = DualComplex::new(Complex::new(2.0, 0.0), Complex::new(1.0, -1.0));
        let p = a * b;
        assert_eq!(p.standard, Complex::new(2.0, 2.0));
        // (1+i)(1-i) + 2i·2 = 2 + 4i
        assert_eq!(p.infinitesimal, Complex::new(2.0, 4.0));
        let r = a.recip().unwrap() * a;
        assert!((r.standard - Complex::new(1.0, 0.0)).norm() < 1e-15);
        assert!(r.infinitesimal.norm() < 1e-15);
    }

    fn small_int() -> impl Strategy<Value = f64> {
        (-1000i32..1000).prop_map(f64::from)
    }

    fn any_dual() -> impl Strategy<Value = DualScalar> {
        (small_int(), small_int()).prop_map(|(s, i)| d(s, i))
    }

    proptest! {
        #[test]
        fn ring_laws_exact_on_integers(a in any_dual(), b in any_dual(), c in any_dual()) {
            prop_assert_eq!(a * b, b * a);
            prop_assert_eq!((a * b) * c, a * (b * c));
            prop_assert_eq!(a * (b + c), a * b + a * c);
        }

        #[test]
        fn order_is_strict_total(a in any_dual(), b in any_dual()) {
            let n = [a.less_than(b), b.less_than(a), a == b].iter().filter(|x| **x).count();
            prop_assert_eq!(n, 1);
        }

        #[test]
        fn display_parse_roundtrip(s in -1e6f64..1e6, i in -1e6f64..1e6) {
            let x = d(s, i);
            prop_assert_eq!(x.to_string().parse::<DualScalar>().unwrap(), x);
        }
    }
}
