//! Quantum integers, factorials and binomials, and specialization at a root of unity.

use super::cyc::{cyclotomic_poly, CycScalar};
use super::laurent::Laurent;
use super::qscalar::QScalar;
use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// `[n]_t` with `t = v^s`: the balanced polynomial `(t^n - t^-n)/(t - t^-1)`.
pub fn qint(n: i64, s: i32) -> QScalar {
    QScalar::from_laurent(qint_laurent(n, s))
}

pub fn qint_laurent(n: i64, s: i32) -> Laurent {
    if n < 0 {
        return qint_laurent(-n, s).neg();
    }
    let mut p = Laurent::zero();
    for j in 0..n {
        p = p.add(&Laurent::monomial(1, s * (n - 1 - 2 * j) as i32));
    }
    p
}

/// `[n]_t!` with `t = v^s`; panics for negative `n`.
pub fn qfact(n: i64, s: i32) -> QScalar {
    assert!(n >= 0, "negative quantum factorial");
    let mut p = Laurent::one();
    for k in 1..=n {
        p = p.mul(&qint_laurent(k, s));
    }
    QScalar::from_laurent(p)
}

/// Gaussian binomial `[n choose k]_t`, `t = v^s`, `0 <= k <= n`; zero otherwise.
pub fn qbinom(n: i64, k: i64, s: i32) -> QScalar {
    QScalar::from_laurent(qbinom_laurent(n, k, s))
}

pub fn qbinom_laurent(n: i64, k: i64, s: i32) -> Laurent {
    if k < 0 || k > n || n < 0 {
        return Laurent::zero();
    }
    // Pascal rule: [n,k] = t^{-k}[n-1,k] + t^{n-k}[n-1,k-1]
    let n = n as usize;
    let k = k as usize;
    let mut row = vec![Laurent::one()];
    for m in 1..=n {
        let mut next = vec![Laurent::zero(); m + 1];
        for j in 0..=m {
            let mut acc = Laurent::zero();
            if j < m {
                acc = acc.add(&row[j].shift(-s * j as i32));
            }
            if j >= 1 {
                acc = acc.add(&row[j - 1].shift(s * (m - j) as i32));
            }
            next[j] = acc;
        }
        row = next;
    }
    row[k].clone()
}

/// Validation failure of a root-of-unity configuration, naming the violated condition.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RootConfigError {
    #[error("condition (a) violated: ell = {0} must be odd and greater than 1")]
    NotOdd(u32),
    #[error("condition (b) violated: ell = {0} must be prime to 3 for type G2")]
    DivisibleByThree(u32),
    #[error("condition (c) violated: ell = {ell} must be prime to d = {d}")]
    NotPrimeToIndex { ell: u32, d: u32 },
}

/// A primitive `ell`-th root of unity `zeta'` as the image of `v = q^(1/d)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RootOfUnityConfig {
    pub ell: u32,
    pub d: u32,
}

impl RootOfUnityConfig {
    /// Checks conditions (a), (b), (c). `is_g2` is never true for the supported types.
    pub fn new(ell: u32, d: u32, is_g2: bool) -> Result<Self, RootConfigError> {
        if ell < 3 || ell.is_multiple_of(2) {
            return Err(RootConfigError::NotOdd(ell));
        }
        if is_g2 && ell.is_multiple_of(3) {
            return Err(RootConfigError::DivisibleByThree(ell));
        }
        if num_integer::gcd(ell, d) != 1 {
            return Err(RootConfigError::NotPrimeToIndex { ell, d });
        }
        Ok(RootOfUnityConfig { ell, d })
    }

    /// `zeta = zeta'^d`, the image of `q`.
    pub fn zeta(&self) -> CycScalar {
        CycScalar::root_pow(self.ell, self.d as i64)
    }

    /// `zeta'^k`
    pub fn zeta_prime_pow(&self, k: i64) -> CycScalar {
        CycScalar::root_pow(self.ell, k)
    }

    /// Order of vanishing of `p` along `Phi_ell`.
    pub fn laurent_valuation(&self, p: &Laurent) -> u32 {
        assert!(!p.is_zero());
        let phi = Laurent::from_coeffs(0, cyclotomic_poly(self.ell).iter().map(|&c| c as i128).collect());
        let (_, mut r) = p.split_monomial();
        let mut k = 0;
        while let Some(q) = r.div_exact(&phi) {
            r = q;
            k += 1;
        }
        k
    }

    /// Valuation of `f` in the discrete valuation ring `A` (uniformizer `Phi_ell(v)`).
    pub fn valuation(&self, f: &QScalar) -> Option<i32> {
        if f.is_zero() {
            return None;
        }
        Some(self.laurent_valuation(f.num()) as i32 - self.laurent_valuation(f.den()) as i32)
    }

    /// Membership in `A`: the reduced denominator does not vanish at `zeta'`.
    pub fn regular_at_root(&self, f: &QScalar) -> bool {
        self.laurent_valuation(f.den()) == 0
    }

    pub fn specialize_laurent(&self, p: &Laurent) -> CycScalar {
        let n = self.ell as usize;
        let mut c = vec![BigRational::from_integer(BigInt::from(0)); n];
        for (e, a) in p.terms() {
            let j = (e as i64).rem_euclid(n as i64) as usize;
            c[j] += BigRational::from_integer(BigInt::from(a));
        }
        CycScalar::from_coeffs(self.ell, c)
    }

    /// Ring map `A -> Q(zeta')`, `v -> zeta'`.
    pub fn specialize(&self, f: &QScalar) -> Result<CycScalar, SpecializeError> {
        let d = self.specialize_laurent(f.den());
        if d.is_zero() {
            return Err(SpecializeError::Pole(f.to_string()));
        }
        Ok(&self.specialize_laurent(f.num()) * &d.inv())
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SpecializeError {
    #[error("scalar {0} has a pole at the chosen root of unity")]
    Pole(String),
}

#[cfg(test)]
mod tests {
    use super::*;

    // A1 has d = 2, so q = v^2 and [n]_q uses step s = 2.
    #[test]
    fn quantum_integers() {
        assert_eq!(qint(3, 1).to_string(), "v^2 + 1 + v^-2");
        assert_eq!(qbinom(4, 2, 1).to_string(), "v^4 + v^2 + 2 + v^-2 + v^-4");
        assert!(qfact(0, 1).is_one());
        assert_eq!(qint(-2, 1), -qint(2, 1));
        // binomial against the factorial quotient
        for n in 0..7 {
            for k in 0..=n {
                let f = &qfact(n, 2) * &(&qfact(k, 2) * &qfact(n - k, 2)).inv();
                assert_eq!(qbinom(n, k, 2), f);
            }
        }
    }

    #[test]
    fn regularity_examples() {
        let cfg = RootOfUnityConfig::new(3, 2, false).unwrap();
        let q = QScalar::v_pow(2);
        assert!(cfg.regular_at_root(&(&q - &QScalar::one()).inv()));
        assert!(!cfg.regular_at_root(&qint(3, 2).inv()));
        let f = &QScalar::v_pow(1) * &(&q + &QScalar::int(2)).inv();
        assert!(cfg.regular_at_root(&f));
    }

    #[test]
    fn specialization_kills_binomials() {
        for ell in [3u32, 5, 7] {
            let cfg = RootOfUnityConfig::new(ell, 2, false).unwrap();
            let z = cfg.specialize(&QScalar::v_pow(2)).unwrap();
            assert_eq!(z, cfg.zeta());
            assert!(z.pow(ell as i64).is_one());
            assert!(cfg.specialize(&qint(ell as i64, 2)).unwrap().is_zero());
            for k in 1..ell as i64 {
                assert!(cfg.specialize(&qbinom(ell as i64, k, 2)).unwrap().is_zero());
            }
        }
    }

    #[test]
    fn config_conditions() {
        assert_eq!(RootOfUnityConfig::new(2, 3, false), Err(RootConfigError::NotOdd(2)));
        assert!(matches!(RootOfUnityConfig::new(3, 3, false), Err(RootConfigError::NotPrimeToIndex { .. })));
        assert_eq!(RootOfUnityConfig::new(9, 3, true), Err(RootConfigError::DivisibleByThree(9)));
    }

    #[test]
    fn valuations() {
        let cfg = RootOfUnityConfig::new(3, 2, false).unwrap();
        let f = &qfact(3, 2) * &qfact(3, 2);
        assert_eq!(cfg.valuation(&f), Some(2));
        assert_eq!(cfg.valuation(&f.inv()), Some(-2));
    }
}
