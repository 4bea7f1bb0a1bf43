//! Integer Laurent polynomials in `v`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::cmp::Ordering;
use std::fmt;

/// `Σ c[j] v^(low + j)` with `i128` coefficients.
///
/// Normalized: no zero coefficient at either end, and the zero polynomial has
/// no coefficients and `low == 0`.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Laurent {
    low: i32,
    c: Vec<i128>,
}

fn ck_add(a: i128, b: i128) -> i128 {
    a.checked_add(b).expect("Laurent coefficient overflow")
}

fn ck_mul(a: i128, b: i128) -> i128 {
    a.checked_mul(b).expect("Laurent coefficient overflow")
}

impl Laurent {
    pub fn zero() -> Self {
        Laurent { low: 0, c: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(1)
    }

    pub fn constant(a: i128) -> Self {
        Self::monomial(a, 0)
    }

    /// `a v^e`
    pub fn monomial(a: i128, e: i32) -> Self {
        if a == 0 {
            return Self::zero();
        }
        Laurent { low: e, c: vec![a] }
    }

    pub fn from_coeffs(low: i32, c: Vec<i128>) -> Self {
        let mut p = Laurent { low, c };
        p.normalize();
        p
    }

    fn normalize(&mut self) {
        while let Some(&0) = self.c.last() {
            self.c.pop();
        }
        let lead_zeros = self.c.iter().take_while(|&&x| x == 0).count();
        if lead_zeros > 0 {
            self.c.drain(..lead_zeros);
            self.low += lead_zeros as i32;
        }
        if self.c.is_empty() {
            self.low = 0;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.low == 0 && self.c.len() == 1 && self.c[0] == 1
    }

    /// Lowest exponent present (0 for the zero polynomial).
    pub fn low(&self) -> i32 {
        self.low
    }

    /// Highest exponent present.
    pub fn high(&self) -> i32 {
        self.low + self.c.len() as i32 - 1
    }

    pub fn coeffs(&self) -> &[i128] {
        &self.c
    }

    pub fn coeff(&self, e: i32) -> i128 {
        let j = e - self.low;
        if j < 0 || j as usize >= self.c.len() {
            0
        } else {
            self.c[j as usize]
        }
    }

    /// Nonzero terms `(exponent, coefficient)` in increasing exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (i32, i128)> + '_ {
        self.c
            .iter()
            .enumerate()
            .filter(|(_, &a)| a != 0)
            .map(move |(j, &a)| (self.low + j as i32, a))
    }

    pub fn leading(&self) -> i128 {
        self.c.last().copied().unwrap_or(0)
    }

    pub fn is_monomial(&self) -> bool {
        self.c.len() == 1
    }

    pub fn is_constant(&self) -> bool {
        self.is_zero() || (self.low == 0 && self.c.len() == 1)
    }

    pub fn shift(&self, e: i32) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        Laurent { low: self.low + e, c: self.c.clone() }
    }

    pub fn scale(&self, a: i128) -> Self {
        if a == 0 {
            return Self::zero();
        }
        Laurent { low: self.low, c: self.c.iter().map(|&x| ck_mul(x, a)).collect() }
    }

    pub fn add(&self, o: &Self) -> Self {
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        let low = self.low.min(o.low);
        let high = self.high().max(o.high());
        let mut c = vec![0i128; (high - low + 1) as usize];
        for (j, &a) in self.c.iter().enumerate() {
            let k = (self.low - low) as usize + j;
            c[k] = a;
        }
        for (j, &a) in o.c.iter().enumerate() {
            let k = (o.low - low) as usize + j;
            c[k] = ck_add(c[k], a);
        }
        Self::from_coeffs(low, c)
    }

    pub fn neg(&self) -> Self {
        Laurent { low: self.low, c: self.c.iter().map(|&x| -x).collect() }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero();
        }
        let mut c = vec![0i128; self.c.len() + o.c.len() - 1];
        for (i, &a) in self.c.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in o.c.iter().enumerate() {
                c[i + j] = ck_add(c[i + j], ck_mul(a, b));
            }
        }
        Self::from_coeffs(self.low + o.low, c)
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut r = Self::one();
        for _ in 0..n {
            r = r.mul(self);
        }
        r
    }

    /// Substitute `v -> v^m` (m may be negative).
    pub fn substitute_power(&self, m: i32) -> Self {
        let mut r = Self::zero();
        for (e, a) in self.terms() {
            r = r.add(&Self::monomial(a, e * m));
        }
        r
    }

    /// gcd of the coefficients, nonnegative.
    pub fn content(&self) -> i128 {
        self.c.iter().fold(0i128, |g, &a| g.gcd(&a))
    }

    /// Exact division by an integer; panics when inexact.
    pub fn div_exact_int(&self, a: i128) -> Self {
        Laurent {
            low: self.low,
            c: self
                .c
                .iter()
                .map(|&x| {
                    assert!(x % a == 0, "inexact integer division");
                    x / a
                })
                .collect(),
        }
    }

    /// Exact division by `d`; `None` if `d` does not divide `self` in `Z[v, v^-1]`.
    pub fn div_exact(&self, d: &Self) -> Option<Self> {
        if d.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(Self::zero());
        }
        let lc = d.leading();
        let dl = d.c.len();
        let mut rem = self.c.clone();
        if rem.len() < dl {
            return None;
        }
        let qlen = rem.len() - dl + 1;
        let mut q = vec![0i128; qlen];
        for k in (0..qlen).rev() {
            let top = rem[k + dl - 1];
            if top == 0 {
                continue;
            }
            if top % lc != 0 {
                return None;
            }
            let f = top / lc;
            q[k] = f;
            for (j, &b) in d.c.iter().enumerate() {
                rem[k + j] = rem[k + j].checked_sub(ck_mul(f, b)).expect("Laurent coefficient overflow");
            }
        }
        if rem.iter().any(|&x| x != 0) {
            return None;
        }
        Some(Self::from_coeffs(self.low - d.low, q))
    }

    /// Remove the monomial factor: returns `(e, p)` with `self = v^e p` and `p(0) != 0`.
    pub fn split_monomial(&self) -> (i32, Self) {
        (self.low, Laurent { low: 0, c: self.c.clone() })
    }

    /// Bar involution `v -> v^-1`.
    pub fn bar(&self) -> Self {
        self.substitute_power(-1)
    }

    /// Value at a nonzero rational point.
    pub fn eval_rational(&self, x: &num_rational::BigRational) -> num_rational::BigRational {
        let mut acc = num_rational::BigRational::zero();
        for (e, a) in self.terms() {
            acc += num_rational::BigRational::from_integer(BigInt::from(a)) * pow_rat(x, e);
        }
        acc
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        self.terms().map(|(e, a)| a as f64 * x.powi(e)).sum()
    }

    pub(crate) fn to_big(&self) -> Vec<BigInt> {
        self.c.iter().map(|&a| BigInt::from(a)).collect()
    }

    pub(crate) fn from_big(low: i32, c: &[BigInt]) -> Self {
        Self::from_coeffs(
            low,
            c.iter().map(|a| a.to_i128().expect("Laurent coefficient overflow")).collect(),
        )
    }

    pub fn max_abs_coeff(&self) -> i128 {
        self.c.iter().map(|a| a.abs()).max().unwrap_or(0)
    }
}

fn pow_rat(x: &num_rational::BigRational, e: i32) -> num_rational::BigRational {
    let mut r = num_rational::BigRational::one();
    for _ in 0..e.unsigned_abs() {
        r *= x;
    }
    if e < 0 {
        r = r.recip();
    }
    r
}

impl Ord for Laurent {
    fn cmp(&self, o: &Self) -> Ordering {
        (self.low, &self.c).cmp(&(o.low, &o.c))
    }
}

impl PartialOrd for Laurent {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

impl fmt::Display for Laurent {
    /// Terms in decreasing exponent order, e.g. `v^2 + 1 + v^-2`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        let terms: Vec<_> = self.terms().collect();
        for &(e, a) in terms.iter().rev() {
            let (sign, mag) = if a < 0 { ("-", -a) } else { ("+", a) };
            if first {
                if sign == "-" {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", sign)?;
            }
            first = false;
            match (e, mag) {
                (0, m) => write!(f, "{}", m)?,
                (1, 1) => write!(f, "v")?,
                (_, 1) => write!(f, "v^{}", e)?,
                (1, m) => write!(f, "{}*v", m)?,
                (_, m) => write!(f, "{}*v^{}", m, e)?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Laurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

// ---- big-integer polynomial helpers used by gcd ----

fn big_trim(p: &mut Vec<BigInt>) {
    while p.last().is_some_and(|a| a.is_zero()) {
        p.pop();
    }
}

fn big_content(p: &[BigInt]) -> BigInt {
    p.iter().fold(BigInt::zero(), |g, a| g.gcd(a))
}

fn big_primitive(p: &[BigInt]) -> Vec<BigInt> {
    let c = big_content(p);
    if c.is_zero() || c.is_one() {
        return p.to_vec();
    }
    p.iter().map(|a| a / &c).collect()
}

/// Pseudo-remainder of `a` by `b` (both dense, low exponent 0).
fn big_prem(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let mut r = a.to_vec();
    let db = b.len() - 1;
    let lb = b[db].clone();
    while r.len() > db && !r.is_empty() {
        let dr = r.len() - 1;
        let lr = r[dr].clone();
        let shift = dr - db;
        for x in r.iter_mut() {
            *x *= &lb;
        }
        for (j, bj) in b.iter().enumerate() {
            r[shift + j] -= &lr * bj;
        }
        big_trim(&mut r);
    }
    r
}

/// Primitive gcd of two nonzero polynomials in `Z[v]` (dense, low exponent 0),
/// normalized with positive leading coefficient. Contents are ignored.
fn big_poly_gcd(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let mut x = big_primitive(a);
    let mut y = big_primitive(b);
    if x.len() < y.len() {
        std::mem::swap(&mut x, &mut y);
    }
    while !y.is_empty() {
        if y.len() == 1 {
            return vec![BigInt::one()];
        }
        let r = big_prem(&x, &y);
        x = y;
        y = big_primitive(&r);
    }
    if x.last().is_some_and(|a| a.is_negative()) {
        x = x.iter().map(|a| -a).collect();
    }
    x
}

/// gcd in `Z[v]` of two polynomials with nonzero constant terms, including
/// contents; result has positive leading coefficient.
pub(crate) fn poly_gcd(a: &Laurent, b: &Laurent) -> Laurent {
    debug_assert!(a.low == 0 && b.low == 0);
    if a.is_zero() {
        return b.clone();
    }
    if b.is_zero() {
        return a.clone();
    }
    let cont = a.content().gcd(&b.content());
    if a.c.len() == 1 || b.c.len() == 1 {
        return Laurent::constant(cont);
    }
    // Cheap divisibility checks first: the common case is that one divides the other.
    if b.c.len() <= a.c.len() {
        if a.div_exact(&b.div_exact_int(b.content())).is_some() {
            let bp = b.div_exact_int(b.content());
            let bp = if bp.leading() < 0 { bp.neg() } else { bp };
            return bp.scale(cont);
        }
    } else if b.div_exact(&a.div_exact_int(a.content())).is_some() {
        let ap = a.div_exact_int(a.content());
        let ap = if ap.leading() < 0 { ap.neg() } else { ap };
        return ap.scale(cont);
    }
    let g = big_poly_gcd(&a.to_big(), &b.to_big());
    Laurent::from_big(0, &g).scale(cont)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic_basics() {
        let v = Laurent::monomial(1, 1);
        let vi = Laurent::monomial(1, -1);
        let s = v.add(&vi);
        assert_eq!(s.mul(&s).to_string(), "v^2 + 2 + v^-2");
        assert_eq!(s.sub(&s), Laurent::zero());
        assert!(s.sub(&s).is_zero());
    }

    #[test]
    fn exact_division() {
        // (v^4 - 1) / (v - 1) = v^3 + v^2 + v + 1
        let a = Laurent::from_coeffs(0, vec![-1, 0, 0, 0, 1]);
        let b = Laurent::from_coeffs(0, vec![-1, 1]);
        assert_eq!(a.div_exact(&b).unwrap(), Laurent::from_coeffs(0, vec![1, 1, 1, 1]));
        let c = Laurent::from_coeffs(0, vec![1, 1]);
        assert!(Laurent::from_coeffs(0, vec![1, 0, 1]).div_exact(&c).is_none());
    }

    #[test]
    fn gcd_cases() {
        let a = Laurent::from_coeffs(0, vec![-1, 0, 1]); // v^2 - 1
        let b = Laurent::from_coeffs(0, vec![1, 2, 1]); // (v+1)^2
        assert_eq!(poly_gcd(&a, &b), Laurent::from_coeffs(0, vec![1, 1]));
        let c = Laurent::from_coeffs(0, vec![2, 4]);
        let d = Laurent::from_coeffs(0, vec![6, 6]);
        assert_eq!(poly_gcd(&c, &d), Laurent::constant(2));
        let e = Laurent::from_coeffs(0, vec![1, 1, 1]);
        let f = Laurent::from_coeffs(0, vec![1, -1, 1]);
        assert_eq!(poly_gcd(&e.mul(&b), &f.mul(&a)), Laurent::from_coeffs(0, vec![1, 1]));
    }
}
