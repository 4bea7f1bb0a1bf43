//! The algebra context: generators, straightening and multiplication.

use super::elem::{TermKey, UElem};
use super::words::{word_gamma, word_weight, WeightSpace, Word, WordEngine};
use crate::qscalars::QScalar;
use crate::rootdata::{RootDatum, Weight};
use std::collections::HashMap;
use std::sync::{Arc, RwLock};
use thiserror::Error;

/// Default bound on the height of each triangular side.
pub const DEFAULT_HT_BOUND: i32 = 8;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum UqError {
    #[error("degree bound exceeded: height {0} > {1}")]
    DegreeBound(i32, i32),
    #[error("element is not in the required subalgebra: {0}")]
    WrongSubalgebra(String),
    #[error("coefficient {0} is not regular at the root of unity")]
    NotIntegral(String),
}

type Straightened = Arc<Vec<(TermKey, QScalar)>>;

/// `U_q(g)` over `Q(v)` for a fixed root datum, with memo tables.
pub struct Uq {
    pub rd: RootDatum,
    pub ht_bound: i32,
    words: WordEngine,
    ef_memo: RwLock<HashMap<(Word, Word), Straightened>>,
    pub(crate) braid_memo: RwLock<HashMap<(usize, bool, bool, Word), UElem>>,
    pub(crate) pbw_memo: RwLock<HashMap<(bool, [i32; 2]), Arc<super::pbw::PbwSpace>>>,
}

impl Uq {
    pub fn new(rd: RootDatum) -> Self {
        Self::with_bound(rd, DEFAULT_HT_BOUND)
    }

    pub fn with_bound(rd: RootDatum, ht_bound: i32) -> Self {
        Uq {
            rd,
            ht_bound,
            words: WordEngine::new(),
            ef_memo: RwLock::new(HashMap::new()),
            braid_memo: RwLock::new(HashMap::new()),
            pbw_memo: RwLock::new(HashMap::new()),
        }
    }

    pub fn rank(&self) -> usize {
        self.rd.rank
    }

    /// `q^(lambda, mu)` as a power of `v`.
    pub fn qform(&self, l: Weight, m: Weight) -> QScalar {
        QScalar::v_pow(self.rd.form_v(l, m))
    }

    /// `q_i - q_i^-1`
    pub fn qi_diff(&self, i: usize) -> QScalar {
        let e = self.rd.qi_exp(i);
        &QScalar::v_pow(e) - &QScalar::v_pow(-e)
    }

    pub fn alpha(&self, i: usize) -> Weight {
        self.rd.simple_root(i)
    }

    pub fn space(&self, g: [i32; 2]) -> Arc<WeightSpace> {
        let ht = g[0] + g[1];
        if ht > self.ht_bound {
            panic!("{}", UqError::DegreeBound(ht, self.ht_bound));
        }
        self.words.space(&self.rd, g)
    }

    pub fn check_bound(&self, u: &UElem) -> Result<(), UqError> {
        for k in u.terms.keys() {
            for w in [&k.f, &k.e] {
                if w.len() as i32 > self.ht_bound {
                    return Err(UqError::DegreeBound(w.len() as i32, self.ht_bound));
                }
            }
        }
        Ok(())
    }

    /// Basis-word expansion of an arbitrary word (same coefficients for `e` and `f` words).
    pub fn reduce_word(&self, w: &[u8]) -> Vec<(Word, QScalar)> {
        let s = self.space(word_gamma(w));
        if let Some(b) = s.basis_index(w) {
            let _ = b;
            return vec![(w.to_vec(), QScalar::one())];
        }
        s.reduce(w)
            .into_iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| (s.basis[k].clone(), c))
            .collect()
    }

    pub fn e(&self, i: usize) -> UElem {
        UElem::term(TermKey::new(vec![], Weight::ZERO, vec![i as u8]), QScalar::one())
    }

    pub fn f(&self, i: usize) -> UElem {
        UElem::term(TermKey::new(vec![i as u8], Weight::ZERO, vec![]), QScalar::one())
    }

    pub fn k(&self, l: Weight) -> UElem {
        UElem::k(l)
    }

    /// `k_i = k_{alpha_i}`
    pub fn ki(&self, i: usize) -> UElem {
        UElem::k(self.alpha(i))
    }

    /// `e_{w_1} ... e_{w_n}` in normal form.
    pub fn e_word(&self, w: &[u8]) -> UElem {
        let mut u = UElem::zero();
        for (b, c) in self.reduce_word(w) {
            u.add_term(TermKey::new(vec![], Weight::ZERO, b), c);
        }
        u
    }

    pub fn f_word(&self, w: &[u8]) -> UElem {
        let mut u = UElem::zero();
        for (b, c) in self.reduce_word(w) {
            u.add_term(TermKey::new(b, Weight::ZERO, vec![]), c);
        }
        u
    }

    /// `e_u f_w` straightened into triangular form.
    fn ef(&self, u: &[u8], w: &[u8]) -> Straightened {
        if let Some(r) = self.ef_memo.read().unwrap().get(&(u.to_vec(), w.to_vec())) {
            return r.clone();
        }
        let result: Vec<(TermKey, QScalar)> = if u.is_empty() {
            vec![(TermKey::new(w.to_vec(), Weight::ZERO, vec![]), QScalar::one())]
        } else if w.is_empty() {
            self.reduce_word(u).into_iter().map(|(b, c)| (TermKey::new(vec![], Weight::ZERO, b), c)).collect()
        } else {
            let i = u[0] as usize;
            let inner = self.ef(&u[1..], w);
            let mut acc = UElem::zero();
            for (t, c) in inner.iter() {
                self.push_e(i, t, c, &mut acc);
            }
            acc.terms.into_iter().collect()
        };
        let r = Arc::new(result);
        self.ef_memo.write().unwrap().insert((u.to_vec(), w.to_vec()), r.clone());
        r
    }

    /// Adds `e_i * (c f_F k_mu e_E)` to `acc`.
    fn push_e(&self, i: usize, t: &TermKey, c: &QScalar, acc: &mut UElem) {
        let ai = self.alpha(i);
        // f_F e_i k_mu e_E part: e_i k_mu = q^{-(mu, alpha_i)} k_mu e_i
        let c0 = c * &QScalar::v_pow(-self.rd.form_v(t.k, ai));
        let mut ie = vec![i as u8];
        ie.extend(&t.e);
        for (b, d) in self.reduce_word(&ie) {
            acc.add_term(TermKey::new(t.f.clone(), t.k, b), &c0 * &d);
        }
        // commutator [e_i, f_F] = P_i(F) k_i + Q_i(F) k_i^{-1}
        let inv = self.qi_diff(i).inv();
        let mut suffix = Weight::ZERO;
        for s in (0..t.f.len()).rev() {
            if t.f[s] as usize == i {
                let mut rest = t.f.clone();
                rest.remove(s);
                let e = self.rd.form_v(ai, suffix);
                let p = &(c * &inv) * &QScalar::v_pow(-e);
                let q = -&(&(c * &inv) * &QScalar::v_pow(e));
                for (b, d) in self.reduce_word(&rest) {
                    acc.add_term(TermKey::new(b.clone(), t.k + ai, t.e.clone()), &p * &d);
                    acc.add_term(TermKey::new(b, t.k - ai, t.e.clone()), &q * &d);
                }
            }
            suffix += self.alpha(t.f[s] as usize);
        }
    }

    /// Product of two monomials with coefficients.
    fn mul_terms(&self, a: &TermKey, ca: &QScalar, b: &TermKey, cb: &QScalar, acc: &mut UElem) {
        let c = ca * cb;
        let mid = self.ef(&a.e, &b.f);
        for (t, d) in mid.iter() {
            let wf = word_weight(&self.rd, &t.f);
            let we = word_weight(&self.rd, &t.e);
            let e = -self.rd.form_v(a.k, wf) - self.rd.form_v(b.k, we);
            let coef = &(&c * d) * &QScalar::v_pow(e);
            let mut fw = a.f.clone();
            fw.extend(&t.f);
            let mut ew = t.e.clone();
            ew.extend(&b.e);
            let lam = a.k + t.k + b.k;
            let fr = self.reduce_word(&fw);
            let er = self.reduce_word(&ew);
            for (fb, x) in &fr {
                let cx = &coef * x;
                for (eb, y) in &er {
                    acc.add_term(TermKey::new(fb.clone(), lam, eb.clone()), &cx * y);
                }
            }
        }
    }

    pub fn mul(&self, a: &UElem, b: &UElem) -> UElem {
        let mut acc = UElem::zero();
        for (ka, ca) in &a.terms {
            for (kb, cb) in &b.terms {
                self.mul_terms(ka, ca, kb, cb, &mut acc);
            }
        }
        acc
    }

    pub fn mul_all(&self, xs: &[&UElem]) -> UElem {
        xs.iter().fold(UElem::one(), |acc, x| self.mul(&acc, x))
    }

    pub fn pow(&self, a: &UElem, n: u32) -> UElem {
        (0..n).fold(UElem::one(), |acc, _| self.mul(&acc, a))
    }

    pub fn commutator(&self, a: &UElem, b: &UElem) -> UElem {
        self.mul(a, b).sub(&self.mul(b, a))
    }

    /// `e_i^(n) = e_i^n / [n]_{q_i}!`
    pub fn e_div(&self, i: usize, n: u32) -> UElem {
        let w = vec![i as u8; n as usize];
        self.e_word(&w).scale(&crate::qscalars::qfact(n as i64, self.rd.qi_exp(i)).inv())
    }

    pub fn f_div(&self, i: usize, n: u32) -> UElem {
        let w = vec![i as u8; n as usize];
        self.f_word(&w).scale(&crate::qscalars::qfact(n as i64, self.rd.qi_exp(i)).inv())
    }

    /// Weight of a homogeneous element (`None` for zero or inhomogeneous input).
    pub fn weight_of(&self, u: &UElem) -> Option<Weight> {
        let mut w = None;
        for k in u.terms.keys() {
            let x = word_weight(&self.rd, &k.e) - word_weight(&self.rd, &k.f);
            match w {
                None => w = Some(x),
                Some(y) if y != x => return None,
                _ => {}
            }
        }
        w
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qscalars::qint;

    #[test]
    fn ef_relation_a1() {
        let u = Uq::new(RootDatum::a1());
        let ef = u.mul(&u.e(0), &u.f(0));
        let expected = u.mul(&u.f(0), &u.e(0)).add(&u.ki(0).sub(&u.k(-u.alpha(0))).scale(&u.qi_diff(0).inv()));
        assert_eq!(ef, expected);
    }

    #[test]
    fn torus_conjugation() {
        let u = Uq::new(RootDatum::a2());
        let l = Weight::new(&[1, -2]);
        for i in 0..2 {
            let lhs = u.mul_all(&[&u.k(l), &u.e(i), &u.k(-l)]);
            assert_eq!(lhs, u.e(i).scale(&u.qform(l, u.alpha(i))));
            let lhs = u.mul_all(&[&u.k(l), &u.f(i), &u.k(-l)]);
            assert_eq!(lhs, u.f(i).scale(&u.qform(l, -u.alpha(i))));
        }
    }

    #[test]
    fn serre_a2() {
        let u = Uq::new(RootDatum::a2());
        let two = qint(2, u.rd.qi_exp(0));
        let r = u
            .mul_all(&[&u.e(0), &u.e(0), &u.e(1)])
            .sub(&u.mul_all(&[&u.e(0), &u.e(1), &u.e(0)]).scale(&two))
            .add(&u.mul_all(&[&u.e(1), &u.e(0), &u.e(0)]));
        assert!(r.is_zero());
    }

    #[test]
    fn f_squared_times_e() {
        // e f^2 = f^2 e + [2] f (q^-1 k - q k^-1)/(q - q^-1) in A1
        let u = Uq::new(RootDatum::a1());
        let (e, f) = (u.e(0), u.f(0));
        let q = QScalar::v_pow(2);
        let lhs = u.mul_all(&[&e, &f, &f]);
        let mid = u.ki(0).scale(&q.inv()).sub(&u.k(-u.alpha(0)).scale(&q));
        let rhs = u
            .mul_all(&[&f, &f, &e])
            .add(&u.mul(&f, &mid).scale(&(&qint(2, 2) * &u.qi_diff(0).inv())));
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn associativity_sample() {
        let u = Uq::new(RootDatum::a2());
        let x = u.mul(&u.e(0), &u.f(1)).add(&u.k(Weight::new(&[1, 0])));
        let y = u.mul(&u.f(0), &u.e(1)).add(&u.e(0));
        let z = u.mul(&u.f(0), &u.f(1));
        assert_eq!(u.mul(&u.mul(&x, &y), &z), u.mul(&x, &u.mul(&y, &z)));
    }
}
