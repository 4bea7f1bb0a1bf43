//! Lusztig's Frobenius map `pi: U^L_zeta -> U(g)` on PBW monomials and the
//! classical enveloping algebras `U(n^-)`, `U(n^+)` it lands in.
//!
//! Classical root vectors are the `v = 1` limits of the quantum root vectors;
//! classical structure constants are read off the plain-power PBW products at `v = 1`.

use super::algebra::{Uq, UqError};
use super::elem::{Tensor, TermKey, UElem};
use super::pbw::{Form, Mono, PbwKey};
use super::specialize::ZElem;
use crate::qscalars::{CycScalar, QScalar, RootOfUnityConfig};
use crate::rootdata::Weight;
use num_bigint::BigInt;
use num_rational::BigRational;
use std::collections::BTreeMap;

/// Element of `U(n^-) (x) U(n^+)` in classical PBW monomials `fbar^M ebar^N`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ClassicalElem {
    pub terms: BTreeMap<(Mono, Mono), CycScalar>,
}

/// Classical two-fold tensors.
pub type ClassicalTensor = BTreeMap<((Mono, Mono), (Mono, Mono)), CycScalar>;

fn add_to<K: Ord>(m: &mut BTreeMap<K, CycScalar>, k: K, c: CycScalar) {
    let e = m.entry(k).or_insert_with(CycScalar::zero);
    *e = &*e + &c;
}

fn prune<K: Ord + Clone>(m: BTreeMap<K, CycScalar>) -> BTreeMap<K, CycScalar> {
    m.into_iter().filter(|(_, c)| !c.is_zero()).collect()
}

fn factorial(n: u32) -> BigInt {
    (1..=n).fold(BigInt::from(1), |a, k| a * BigInt::from(k))
}

fn binomial(n: u32, k: u32) -> BigInt {
    factorial(n) / (factorial(k) * factorial(n - k))
}

fn rat(a: BigInt) -> CycScalar {
    CycScalar::rational(BigRational::from_integer(a))
}

/// All exponent vectors `a <= m` componentwise.
fn sub_monos(m: &Mono) -> Vec<Mono> {
    let mut out = vec![vec![]];
    for &mk in m {
        let mut next = Vec::new();
        for p in &out {
            for a in 0..=mk {
                let mut q = p.clone();
                q.push(a);
                next.push(q);
            }
        }
        out = next;
    }
    out
}

impl ClassicalElem {
    pub fn is_zero(&self) -> bool {
        self.terms.values().all(|c| c.is_zero())
    }

    /// Coproduct with primitive root vectors.
    pub fn coproduct(&self) -> ClassicalTensor {
        let mut out = ClassicalTensor::new();
        for ((fm, em), c) in &self.terms {
            for a in sub_monos(fm) {
                for b in sub_monos(em) {
                    let mut coef = BigInt::from(1);
                    for k in 0..fm.len() {
                        coef *= binomial(fm[k], a[k]);
                    }
                    for k in 0..em.len() {
                        coef *= binomial(em[k], b[k]);
                    }
                    let fa: Mono = fm.iter().zip(&a).map(|(m, x)| m - x).collect();
                    let eb: Mono = em.iter().zip(&b).map(|(m, x)| m - x).collect();
                    add_to(&mut out, ((a.clone(), b.clone()), (fa, eb)), c * &rat(coef));
                }
            }
        }
        prune(out)
    }
}

impl Uq {
    /// Classical product of two PBW monomials on one side, from the `v = 1`
    /// limit of the quantum plain-power product.
    pub fn classical_pbw_product(&self, positive: bool, a: &Mono, b: &Mono) -> Result<BTreeMap<Mono, BigRational>, UqError> {
        let x = self.mul(&self.pbw_element(positive, a), &self.pbw_element(positive, b));
        let mut out = BTreeMap::new();
        for (k, c) in self.pbw_readout(&x, Form::DK) {
            let m = if positive { k.e } else { k.f };
            let r = c.at_one().ok_or_else(|| UqError::NotIntegral(c.to_string()))?;
            if r != BigRational::from_integer(BigInt::from(0)) {
                out.insert(m, r);
            }
        }
        Ok(out)
    }

    /// Product in `U(n^-) U(n^+)`; defined when no `ebar` has to pass an `fbar`.
    pub fn classical_mul(&self, a: &ClassicalElem, b: &ClassicalElem) -> Result<ClassicalElem, UqError> {
        let n = self.rd.n_pos();
        let zero: Mono = vec![0; n];
        let mut out = BTreeMap::new();
        for ((fa, ea), ca) in &a.terms {
            for ((fb, eb), cb) in &b.terms {
                if *ea != zero && *fb != zero {
                    return Err(UqError::WrongSubalgebra("classical product needs the Cartan part".into()));
                }
                let fp = self.classical_pbw_product(false, fa, fb)?;
                let ep = self.classical_pbw_product(true, ea, eb)?;
                for (fm, x) in &fp {
                    for (em, y) in &ep {
                        add_to(&mut out, (fm.clone(), em.clone()), &(ca * cb) * &CycScalar::rational(x * y));
                    }
                }
            }
        }
        Ok(ClassicalElem { terms: prune(out) })
    }

    fn pi_key(&self, k: &PbwKey, ell: u32) -> Option<((Mono, Mono), BigInt)> {
        let mut den = BigInt::from(1);
        let mut fm = Vec::new();
        let mut em = Vec::new();
        for (src, dst) in [(&k.f, &mut fm), (&k.e, &mut em)] {
            for &m in src.iter() {
                if m % ell != 0 {
                    return None;
                }
                den *= factorial(m / ell);
                dst.push(m / ell);
            }
        }
        Some(((fm, em), den))
    }

    /// `pi(f^(M) k_lambda e^(N)) = fbar^(M/ell) ebar^(N/ell)` when `ell` divides
    /// every exponent, and `0` otherwise.
    pub fn frobenius_pi(&self, z: &ZElem, ell: u32) -> Result<ClassicalElem, UqError> {
        if z.form != Form::L {
            return Err(UqError::WrongSubalgebra("Frobenius map needs divided-power coordinates".into()));
        }
        let mut out = BTreeMap::new();
        for (k, c) in &z.terms {
            if let Some((key, den)) = self.pi_key(k, ell) {
                add_to(&mut out, key, c * &rat(den).inv());
            }
        }
        Ok(ClassicalElem { terms: prune(out) })
    }

    /// `(pi (x) pi)(Delta x)` for `x` in `U^L_A`, specialized at `zeta`.
    pub fn frobenius_pi_coproduct(&self, x: &UElem, cfg: &RootOfUnityConfig) -> Result<ClassicalTensor, UqError> {
        let t: Tensor = self.coproduct(x);
        // group the L-readouts of both slots over Q(v) before specializing
        let mut acc: BTreeMap<(PbwKey, PbwKey), QScalar> = BTreeMap::new();
        let mut cache: BTreeMap<TermKey, Vec<(PbwKey, QScalar)>> = BTreeMap::new();
        let mut read = |k: &TermKey| -> Vec<(PbwKey, QScalar)> {
            cache
                .entry(k.clone())
                .or_insert_with(|| self.pbw_readout(&UElem::term(k.clone(), QScalar::one()), Form::L).into_iter().collect())
                .clone()
        };
        for (ks, c) in &t.terms {
            let l = read(&ks[0]);
            let r = read(&ks[1]);
            for (a, ca) in &l {
                for (b, cb) in &r {
                    let e = acc.entry((a.clone(), b.clone())).or_insert_with(QScalar::zero);
                    *e = &*e + &(&(c * ca) * cb);
                }
            }
        }
        let mut out = ClassicalTensor::new();
        for ((a, b), c) in acc {
            if c.is_zero() {
                continue;
            }
            if !cfg.regular_at_root(&c) {
                return Err(UqError::NotIntegral(c.to_string()));
            }
            let z = cfg.specialize(&c).expect("regular");
            if let (Some((ka, da)), Some((kb, db))) = (self.pi_key(&a, cfg.ell), self.pi_key(&b, cfg.ell)) {
                add_to(&mut out, (ka, kb), &z * &rat(da * db).inv());
            }
        }
        Ok(prune(out))
    }

    /// `pi` applied to the specialization of `x`.
    pub fn frobenius_of(&self, x: &UElem, cfg: &RootOfUnityConfig) -> Result<ClassicalElem, UqError> {
        self.frobenius_pi(&self.specialize_u(x, cfg, Form::L)?, cfg.ell)
    }

    /// Checks `pi(xy) = pi(x) pi(y)` and `Delta pi(x) = (pi (x) pi) Delta x`.
    pub fn frobenius_defects(&self, x: &UElem, y: &UElem, cfg: &RootOfUnityConfig) -> Result<(bool, bool), UqError> {
        let px = self.frobenius_of(x, cfg)?;
        let py = self.frobenius_of(y, cfg)?;
        let pxy = self.frobenius_of(&self.mul(x, y), cfg)?;
        let alg = pxy == self.classical_mul(&px, &py)?;
        let coalg = px.coproduct() == self.frobenius_pi_coproduct(x, cfg)?;
        Ok((alg, coalg))
    }

    /// The `ell`-fold divided power of the `k`-th root vector as a classical root vector.
    pub fn classical_root_vector(&self, positive: bool, k: usize) -> ClassicalElem {
        let n = self.rd.n_pos();
        let mut m = vec![0; n];
        m[k] = 1;
        let key = if positive { (vec![0; n], m) } else { (m, vec![0; n]) };
        ClassicalElem { terms: [(key, CycScalar::one())].into_iter().collect() }
    }

    /// `k_lambda` maps to `1`.
    pub fn frobenius_torus_is_trivial(&self, l: Weight, cfg: &RootOfUnityConfig) -> bool {
        let n = self.rd.n_pos();
        let one = ClassicalElem { terms: [((vec![0; n], vec![0; n]), CycScalar::one())].into_iter().collect() };
        self.frobenius_of(&self.k(l), cfg).map(|p| p == one).unwrap_or(false)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rootdata::RootDatum;

    #[test]
    fn generator_images() {
        let u = Uq::new(RootDatum::a1());
        let cfg = RootOfUnityConfig::new(3, 2, false).unwrap();
        assert_eq!(u.frobenius_of(&u.e_div(0, 3), &cfg).unwrap(), u.classical_root_vector(true, 0));
        assert!(u.frobenius_of(&u.e(0), &cfg).unwrap().is_zero());
        // pi(f^(6)) = fbar^2 / 2
        let p = u.frobenius_of(&u.f_div(0, 6), &cfg).unwrap();
        let half = CycScalar::rational(BigRational::new(1.into(), 2.into()));
        assert_eq!(p.terms.get(&(vec![2], vec![0])), Some(&half));
        assert!(u.frobenius_torus_is_trivial(Weight::new(&[1]), &cfg));
    }

    #[test]
    fn bialgebra_map_on_divided_powers_a1() {
        let u = Uq::new(RootDatum::a1());
        let cfg = RootOfUnityConfig::new(3, 2, false).unwrap();
        for a in 0..=6 {
            for b in 0..=(6 - a) {
                for positive in [true, false] {
                    let (x, y) = if positive { (u.e_div(0, a), u.e_div(0, b)) } else { (u.f_div(0, a), u.f_div(0, b)) };
                    assert_eq!(u.frobenius_defects(&x, &y, &cfg).unwrap(), (true, true), "{} {}", a, b);
                }
            }
        }
    }

    #[test]
    fn classical_commutator_a2() {
        // [ebar_1, ebar_2] is the middle root vector
        let u = Uq::new(RootDatum::a2());
        let e1 = u.classical_root_vector(true, 0);
        let e2 = u.classical_root_vector(true, 2);
        let a = u.classical_mul(&e1, &e2).unwrap();
        let b = u.classical_mul(&e2, &e1).unwrap();
        let mut diff = a.terms.clone();
        for (k, c) in b.terms {
            add_to(&mut diff, k, -&c);
        }
        let diff = prune(diff);
        assert_eq!(diff.len(), 1);
        assert_eq!(diff.get(&(vec![0, 0, 0], vec![0, 1, 0])), Some(&CycScalar::one()));
    }
}
