//! Exact arithmetic in cyclotomic fields `Q[x]/Phi_n(x)`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Serialize, Serializer};
use std::cell::RefCell;
use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::rc::Rc;

thread_local! {
    static CYCLOTOMIC: RefCell<HashMap<u32, Rc<Vec<i64>>>> = RefCell::new(HashMap::new());
}

/// Integer coefficients (constant term first) of the `n`-th cyclotomic polynomial.
pub fn cyclotomic_poly(n: u32) -> Rc<Vec<i64>> {
    assert!(n >= 1);
    if let Some(p) = CYCLOTOMIC.with(|c| c.borrow().get(&n).cloned()) {
        return p;
    }
    // x^n - 1 divided by Phi_d for every proper divisor d
    let mut p = vec![0i64; n as usize + 1];
    p[0] = -1;
    p[n as usize] = 1;
    for d in 1..n {
        if n.is_multiple_of(d) {
            let q = cyclotomic_poly(d);
            p = div_monic_int(&p, &q);
        }
    }
    let p = Rc::new(p);
    CYCLOTOMIC.with(|c| c.borrow_mut().insert(n, p.clone()));
    p
}

fn div_monic_int(a: &[i64], b: &[i64]) -> Vec<i64> {
    let mut r = a.to_vec();
    let db = b.len() - 1;
    let mut q = vec![0i64; a.len() - db];
    for k in (0..q.len()).rev() {
        let c = r[k + db];
        q[k] = c;
        for (j, &bj) in b.iter().enumerate() {
            r[k + j] -= c * bj;
        }
    }
    debug_assert!(r.iter().all(|&x| x == 0));
    q
}

/// Euler's totient.
pub fn totient(n: u32) -> usize {
    (1..=n).filter(|&k| num_integer::gcd(k, n) == 1).count()
}

/// Element of `Q(zeta_n)` in the power basis `1, x, ..., x^(phi(n)-1)`.
///
/// `n == 0` marks a rational constant that coerces into any cyclotomic field.
#[derive(Clone)]
pub struct CycScalar {
    n: u32,
    c: Vec<BigRational>,
}

impl CycScalar {
    pub fn rational(a: BigRational) -> Self {
        CycScalar { n: 0, c: vec![a] }
    }

    pub fn int(a: i64) -> Self {
        Self::rational(BigRational::from_integer(BigInt::from(a)))
    }

    pub fn zero() -> Self {
        Self::int(0)
    }

    pub fn one() -> Self {
        Self::int(1)
    }

    /// `x^k` in `Q(zeta_n)`, `k` any integer.
    pub fn root_pow(n: u32, k: i64) -> Self {
        assert!(n >= 1);
        let e = k.rem_euclid(n as i64) as usize;
        let mut c = vec![BigRational::zero(); e + 1];
        c[e] = BigRational::one();
        Self::reduce(n, c)
    }

    /// Builds `Σ c[j] x^j` reduced modulo `Phi_n`.
    pub fn from_coeffs(n: u32, c: Vec<BigRational>) -> Self {
        Self::reduce(n, c)
    }

    pub fn index(&self) -> u32 {
        self.n
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.c
    }

    fn reduce(n: u32, mut c: Vec<BigRational>) -> Self {
        if n == 0 {
            let a = c.into_iter().next().unwrap_or_else(BigRational::zero);
            return Self::rational(a);
        }
        let phi = cyclotomic_poly(n);
        let deg = phi.len() - 1;
        while c.len() > deg {
            let top = c.pop().unwrap();
            if top.is_zero() {
                continue;
            }
            let k = c.len() - deg;
            for (j, &pj) in phi[..deg].iter().enumerate() {
                if pj != 0 {
                    c[k + j] -= &top * BigRational::from_integer(BigInt::from(pj));
                }
            }
        }
        c.resize(deg, BigRational::zero());
        CycScalar { n, c }
    }

    fn lift(&self, n: u32) -> Vec<BigRational> {
        if self.n == n {
            return self.c.clone();
        }
        assert_eq!(self.n, 0, "mixing cyclotomic fields of different index");
        let mut v = vec![BigRational::zero(); totient(n).max(1)];
        v[0] = self.c[0].clone();
        v
    }

    fn common(&self, o: &Self) -> u32 {
        match (self.n, o.n) {
            (0, m) => m,
            (m, 0) => m,
            (a, b) => {
                assert_eq!(a, b, "mixing cyclotomic fields of different index");
                a
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(|a| a.is_zero())
    }

    pub fn is_one(&self) -> bool {
        self.c[0].is_one() && self.c[1..].iter().all(|a| a.is_zero())
    }

    /// Rational value if the element lies in `Q`.
    pub fn as_rational(&self) -> Option<BigRational> {
        if self.c[1..].iter().all(|a| a.is_zero()) {
            Some(self.c[0].clone())
        } else {
            None
        }
    }

    pub fn inv(&self) -> Self {
        assert!(!self.is_zero(), "inverse of zero");
        if self.n == 0 {
            return Self::rational(self.c[0].recip());
        }
        // extended Euclid: find s with s*a = 1 mod Phi_n
        let phi: Vec<BigRational> =
            cyclotomic_poly(self.n).iter().map(|&x| BigRational::from_integer(BigInt::from(x))).collect();
        let mut r0 = phi;
        let mut r1 = trim(self.c.clone());
        let mut s0: Vec<BigRational> = vec![];
        let mut s1: Vec<BigRational> = vec![BigRational::one()];
        while !(r1.len() == 1) {
            let (q, r) = poly_divmod(&r0, &r1);
            let s2 = poly_sub(&s0, &poly_mul(&q, &s1));
            r0 = r1;
            r1 = r;
            s0 = s1;
            s1 = s2;
            assert!(!r1.is_empty(), "non-invertible cyclotomic element");
        }
        let c = r1[0].recip();
        Self::reduce(self.n, s1.into_iter().map(|a| a * &c).collect())
    }

    pub fn pow(&self, k: i64) -> Self {
        let b = if k < 0 { self.inv() } else { self.clone() };
        let mut r = Self::one();
        for _ in 0..k.unsigned_abs() {
            r = &r * &b;
        }
        r
    }

    /// Complex value under `x -> exp(2 pi i / n)`.
    pub fn to_complex(&self) -> (f64, f64) {
        if self.n == 0 {
            return (self.c[0].to_f64().unwrap_or(f64::NAN), 0.0);
        }
        let t = 2.0 * std::f64::consts::PI / self.n as f64;
        let mut re = 0.0;
        let mut im = 0.0;
        for (j, a) in self.c.iter().enumerate() {
            let a = a.to_f64().unwrap_or(f64::NAN);
            re += a * (t * j as f64).cos();
            im += a * (t * j as f64).sin();
        }
        (re, im)
    }
}

fn trim(mut p: Vec<BigRational>) -> Vec<BigRational> {
    while p.last().is_some_and(|a| a.is_zero()) {
        p.pop();
    }
    p
}

fn poly_mul(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut c = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            c[i + j] += x * y;
        }
    }
    trim(c)
}

fn poly_sub(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let n = a.len().max(b.len());
    let mut c = vec![BigRational::zero(); n];
    for (i, x) in a.iter().enumerate() {
        c[i] += x;
    }
    for (i, x) in b.iter().enumerate() {
        c[i] -= x;
    }
    trim(c)
}

fn poly_divmod(a: &[BigRational], b: &[BigRational]) -> (Vec<BigRational>, Vec<BigRational>) {
    let mut r = trim(a.to_vec());
    let db = b.len() - 1;
    if r.len() < b.len() {
        return (vec![], r);
    }
    let mut q = vec![BigRational::zero(); r.len() - db];
    let lb = b[db].clone();
    while r.len() >= b.len() {
        let k = r.len() - b.len();
        let f = r.last().unwrap() / &lb;
        for (j, bj) in b.iter().enumerate() {
            r[k + j] -= &f * bj;
        }
        q[k] = f;
        r.pop();
        r = trim(r);
    }
    (trim(q), r)
}

impl PartialEq for CycScalar {
    fn eq(&self, o: &Self) -> bool {
        let n = self.common(o);
        self.lift(n) == o.lift(n)
    }
}

impl Eq for CycScalar {}

impl Add for &CycScalar {
    type Output = CycScalar;
    fn add(self, o: &CycScalar) -> CycScalar {
        let n = self.common(o);
        let mut a = self.lift(n);
        for (x, y) in a.iter_mut().zip(o.lift(n)) {
            *x += y;
        }
        CycScalar { n, c: a }
    }
}

impl Sub for &CycScalar {
    type Output = CycScalar;
    fn sub(self, o: &CycScalar) -> CycScalar {
        self + &(-o)
    }
}

impl Neg for &CycScalar {
    type Output = CycScalar;
    fn neg(self) -> CycScalar {
        CycScalar { n: self.n, c: self.c.iter().map(|a| -a).collect() }
    }
}

impl Mul for &CycScalar {
    type Output = CycScalar;
    fn mul(self, o: &CycScalar) -> CycScalar {
        if self.n == 0 {
            return CycScalar { n: o.n, c: o.c.iter().map(|a| a * &self.c[0]).collect() };
        }
        if o.n == 0 {
            return CycScalar { n: self.n, c: self.c.iter().map(|a| a * &o.c[0]).collect() };
        }
        let n = self.common(o);
        let mut c = vec![BigRational::zero(); self.c.len() + o.c.len() - 1];
        for (i, x) in self.c.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in o.c.iter().enumerate() {
                if !y.is_zero() {
                    c[i + j] += x * y;
                }
            }
        }
        CycScalar::reduce(n, c)
    }
}

macro_rules! owned_ops {
    ($t:ty) => {
        impl Add for $t {
            type Output = $t;
            fn add(self, o: $t) -> $t {
                &self + &o
            }
        }
        impl Sub for $t {
            type Output = $t;
            fn sub(self, o: $t) -> $t {
                &self - &o
            }
        }
        impl Mul for $t {
            type Output = $t;
            fn mul(self, o: $t) -> $t {
                &self * &o
            }
        }
        impl Neg for $t {
            type Output = $t;
            fn neg(self) -> $t {
                -&self
            }
        }
    };
}
owned_ops!(CycScalar);

impl fmt::Display for CycScalar {
    /// Power-basis expansion in `z` (the chosen primitive root).
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (j, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            let mag = a.abs();
            let coef = if mag.is_one() && j > 0 { String::new() } else { mag.to_string() };
            let mono = match j {
                0 => String::new(),
                1 => "z".to_string(),
                _ => format!("z^{}", j),
            };
            let sep = if !coef.is_empty() && !mono.is_empty() { "*" } else { "" };
            parts.push((a.is_negative(), format!("{}{}{}", coef, sep, mono)));
        }
        if parts.is_empty() {
            return write!(f, "0");
        }
        for (k, (neg, s)) in parts.iter().enumerate() {
            match (k, neg) {
                (0, true) => write!(f, "-{}", s)?,
                (0, false) => write!(f, "{}", s)?,
                (_, true) => write!(f, " - {}", s)?,
                (_, false) => write!(f, " + {}", s)?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for CycScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl Serialize for CycScalar {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cyclotomic_polynomials() {
        assert_eq!(*cyclotomic_poly(3), vec![1, 1, 1]);
        assert_eq!(*cyclotomic_poly(6), vec![1, -1, 1]);
        assert_eq!(*cyclotomic_poly(12), vec![1, 0, -1, 0, 1]);
        assert_eq!(totient(15), 8);
    }

    #[test]
    fn roots_of_unity() {
        for n in [3u32, 5, 7, 9] {
            let z = CycScalar::root_pow(n, 1);
            assert!(z.pow(n as i64).is_one());
            for k in 1..n as i64 {
                assert!(!z.pow(k).is_one());
            }
            let s = (0..n as i64).fold(CycScalar::zero(), |acc, k| &acc + &z.pow(k));
            assert!(s.is_zero());
        }
    }

    #[test]
    fn inverses() {
        let z = CycScalar::root_pow(5, 1);
        let a = &(&z + &CycScalar::int(2)) * &z;
        assert!((&a * &a.inv()).is_one());
        assert_eq!(z.inv(), z.pow(4));
    }
}
