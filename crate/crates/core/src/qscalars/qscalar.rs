//! Elements of `Q(v)`, `v = q^(1/d)`, as reduced fractions of Laurent polynomials.

use super::laurent::{poly_gcd, Laurent};
use num_integer::Integer;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};

/// A reduced fraction `num / den`.
///
/// Canonical form: `den` has lowest exponent 0, a nonzero constant term and a
/// positive leading coefficient, and `gcd(num, den) = 1` in `Z[v]` (contents
/// included). Equality is therefore structural.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QScalar {
    num: Laurent,
    den: Laurent,
}

impl Default for QScalar {
    fn default() -> Self {
        Self::zero()
    }
}

impl QScalar {
    pub fn zero() -> Self {
        QScalar { num: Laurent::zero(), den: Laurent::one() }
    }

    pub fn one() -> Self {
        Self::int(1)
    }

    pub fn int(a: i128) -> Self {
        QScalar { num: Laurent::constant(a), den: Laurent::one() }
    }

    /// `v^e`
    pub fn v_pow(e: i32) -> Self {
        Self::monomial(1, e)
    }

    pub fn monomial(a: i128, e: i32) -> Self {
        QScalar { num: Laurent::monomial(a, e), den: Laurent::one() }
    }

    pub fn from_laurent(p: Laurent) -> Self {
        QScalar { num: p, den: Laurent::one() }
    }

    /// Builds and reduces `num / den`. Panics on a zero denominator.
    pub fn new(num: Laurent, den: Laurent) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        if num.is_zero() {
            return Self::zero();
        }
        let (e, mut d) = den.split_monomial();
        let (a, n0) = num.split_monomial();
        let shift = a - e;
        let mut n = n0;
        if !d.is_constant() || d.coeffs()[0].abs() != 1 {
            let g = poly_gcd(&n, &d);
            if !g.is_one() {
                n = n.div_exact(&g).expect("gcd divides numerator");
                d = d.div_exact(&g).expect("gcd divides denominator");
            }
        }
        if d.leading() < 0 {
            n = n.neg();
            d = d.neg();
        }
        QScalar { num: n.shift(shift), den: d }
    }

    pub fn num(&self) -> &Laurent {
        &self.num
    }

    pub fn den(&self) -> &Laurent {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    /// True when the value lies in `Z[v, v^-1]`.
    pub fn is_laurent(&self) -> bool {
        self.den.is_one()
    }

    pub fn inv(&self) -> Self {
        assert!(!self.is_zero(), "inverse of zero");
        Self::new(self.den.clone(), self.num.clone())
    }

    pub fn pow(&self, n: i32) -> Self {
        let b = if n < 0 { self.inv() } else { self.clone() };
        let mut r = Self::one();
        for _ in 0..n.unsigned_abs() {
            r = &r * &b;
        }
        r
    }

    /// `v -> v^-1`.
    pub fn bar(&self) -> Self {
        Self::new(self.num.bar(), self.den.bar())
    }

    /// `v -> v^m` for a nonzero integer `m`.
    pub fn substitute_power(&self, m: i32) -> Self {
        Self::new(self.num.substitute_power(m), self.den.substitute_power(m))
    }

    /// Value at `v = 1` if defined.
    pub fn at_one(&self) -> Option<num_rational::BigRational> {
        let x = num_rational::BigRational::from_integer(1.into());
        let d = self.den.eval_rational(&x);
        if num_traits::Zero::is_zero(&d) {
            return None;
        }
        Some(self.num.eval_rational(&x) / d)
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        self.num.eval_f64(x) / self.den.eval_f64(x)
    }

    fn add_impl(&self, o: &Self) -> Self {
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        if self.den == o.den {
            let n = self.num.add(&o.num);
            if self.den.is_one() {
                return QScalar { num: n, den: Laurent::one() };
            }
            return Self::new(n, self.den.clone());
        }
        let n = self.num.mul(&o.den).add(&o.num.mul(&self.den));
        Self::new(n, self.den.mul(&o.den))
    }

    fn mul_impl(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero();
        }
        if self.den.is_one() && o.den.is_one() {
            return QScalar { num: self.num.mul(&o.num), den: Laurent::one() };
        }
        if self.num.is_monomial() && self.num.coeffs()[0].abs() == 1 {
            // unit times reduced fraction stays reduced up to the sign of the unit
            let (e, _) = self.num.split_monomial();
            let s = self.num.coeffs()[0];
            if self.den.is_one() {
                return QScalar { num: o.num.shift(e).scale(s), den: o.den.clone() };
            }
        }
        if o.num.is_monomial() && o.num.coeffs()[0].abs() == 1 && o.den.is_one() {
            let (e, _) = o.num.split_monomial();
            let s = o.num.coeffs()[0];
            return QScalar { num: self.num.shift(e).scale(s), den: self.den.clone() };
        }
        Self::new(self.num.mul(&o.num), self.den.mul(&o.den))
    }

    /// Multiply by `v^e`.
    pub fn shift(&self, e: i32) -> Self {
        QScalar { num: self.num.shift(e), den: self.den.clone() }
    }

    pub fn scale_int(&self, a: i128) -> Self {
        if a == 0 {
            return Self::zero();
        }
        let g = a.gcd(&self.den.content());
        if g == 1 {
            return QScalar { num: self.num.scale(a), den: self.den.clone() };
        }
        Self::new(self.num.scale(a), self.den.clone())
    }
}

impl Add for &QScalar {
    type Output = QScalar;
    fn add(self, o: &QScalar) -> QScalar {
        self.add_impl(o)
    }
}

impl Add for QScalar {
    type Output = QScalar;
    fn add(self, o: QScalar) -> QScalar {
        self.add_impl(&o)
    }
}

impl Sub for &QScalar {
    type Output = QScalar;
    fn sub(self, o: &QScalar) -> QScalar {
        self.add_impl(&-o)
    }
}

impl Sub for QScalar {
    type Output = QScalar;
    fn sub(self, o: QScalar) -> QScalar {
        self.add_impl(&-&o)
    }
}

impl Mul for &QScalar {
    type Output = QScalar;
    fn mul(self, o: &QScalar) -> QScalar {
        self.mul_impl(o)
    }
}

impl Mul for QScalar {
    type Output = QScalar;
    fn mul(self, o: QScalar) -> QScalar {
        self.mul_impl(&o)
    }
}

impl Neg for &QScalar {
    type Output = QScalar;
    fn neg(self) -> QScalar {
        QScalar { num: self.num.neg(), den: self.den.clone() }
    }
}

impl Neg for QScalar {
    type Output = QScalar;
    fn neg(self) -> QScalar {
        -&self
    }
}

impl AddAssign<&QScalar> for QScalar {
    fn add_assign(&mut self, o: &QScalar) {
        *self = self.add_impl(o);
    }
}

impl SubAssign<&QScalar> for QScalar {
    fn sub_assign(&mut self, o: &QScalar) {
        *self = self.add_impl(&-o);
    }
}

impl MulAssign<&QScalar> for QScalar {
    fn mul_assign(&mut self, o: &QScalar) {
        *self = self.mul_impl(o);
    }
}

impl fmt::Display for QScalar {
    /// `p` or `(p)/(d)`; parenthesized only when needed.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            return write!(f, "{}", self.num);
        }
        // balance the denominator's exponent range around 0 when possible
        let h = self.den.high();
        let s = -(h / 2);
        let n = self.num.shift(s).to_string();
        let d = self.den.shift(s).to_string();
        let wrap = |s: &str, always: bool| {
            if always || s.contains(' ') || s.starts_with('-') {
                format!("({})", s)
            } else {
                s.to_string()
            }
        };
        write!(f, "{}/{}", wrap(&n, false), wrap(&d, self.den.terms().count() > 1 || d.contains('*')))
    }
}

impl fmt::Debug for QScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl Serialize for QScalar {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for QScalar {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        super::parse::parse_scalar(&s).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(e: i32) -> QScalar {
        QScalar::v_pow(e)
    }

    #[test]
    fn reduction_is_canonical() {
        // (v^2 - v^-2)/(v - v^-1) = v + v^-1
        let a = QScalar::new(
            Laurent::from_coeffs(-2, vec![-1, 0, 0, 0, 1]),
            Laurent::from_coeffs(-1, vec![-1, 0, 1]),
        );
        assert_eq!(a, &v(1) + &v(-1));
        assert!(a.is_laurent());
        let b = QScalar::new(Laurent::constant(2), Laurent::from_coeffs(0, vec![-2, 2]));
        assert_eq!(b.den(), &Laurent::from_coeffs(0, vec![-1, 1]));
    }

    #[test]
    fn field_operations() {
        let x = &v(1) - &v(-1);
        let y = x.inv();
        assert!((&x * &y).is_one());
        assert_eq!((&y + &y) - y.scale_int(2), QScalar::zero());
        assert_eq!(y.bar(), -&y);
    }

    #[test]
    fn display() {
        let x = (&v(2) - &v(-2)).inv();
        assert_eq!(x.to_string(), "1/(v^2 - v^-2)");
        assert_eq!(QScalar::int(-3).to_string(), "-3");
    }
}
