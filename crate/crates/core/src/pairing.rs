//! The Drinfeld pairing `tau: U^{>=0} x U^{<=0} -> F` and dual bases of the
//! positive and negative parts.
//!
//! `tau` is evaluated straight from its defining identities: a negative word is
//! split off one letter at a time and paired against the coproduct of the
//! positive argument.

use crate::qscalars::field::{determinant, inverse, Mat};
use crate::qscalars::{QScalar, RootOfUnityConfig};
use crate::uqalg::{Form, Gamma, Tensor, TermKey, UElem, Uq, Word};
use crate::rootdata::Weight;
use std::collections::HashMap;
use std::sync::RwLock;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PairingError {
    #[error("first argument is not in U^{{>=0}}")]
    NotNonNegative,
    #[error("second argument is not in U^{{<=0}}")]
    NotNonPositive,
    #[error("Gram matrix of weight {0:?} is singular")]
    Singular(Gamma),
}

/// Integral normalization of a pair of dual bases.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DualNorm {
    /// `y_p` plain PBW monomials, `x_p` the dual basis.
    Plain,
    /// `x_p` an `A`-basis of the divided-power positive part, `y_p` plain powers.
    XDivided,
    /// `x_p` plain powers, `y_p` divided powers.
    YDivided,
}

/// Dual bases of `U^+_gamma` and `U^-_{-gamma}` with `tau(x_p, y_r) = delta_{pr}`.
#[derive(Debug, Clone)]
pub struct DualBases {
    pub gamma: Gamma,
    pub xs: Vec<UElem>,
    pub ys: Vec<UElem>,
}

/// Memoized pairing on words over a fixed algebra.
pub struct Pairing<'a> {
    pub u: &'a Uq,
    memo: RwLock<HashMap<(Word, Word), QScalar>>,
    dual_memo: RwLock<HashMap<(Gamma, u8), DualBases>>,
}

impl<'a> Pairing<'a> {
    pub fn new(u: &'a Uq) -> Self {
        Pairing { u, memo: RwLock::new(HashMap::new()), dual_memo: RwLock::new(HashMap::new()) }
    }

    /// `tau(e_i, f_i) = 1/(q_i^-1 - q_i)`
    fn tau_simple(&self, i: usize) -> QScalar {
        (-self.u.qi_diff(i)).inv()
    }

    /// `tau(e_E, f_F)` for arbitrary words, through `tau(x, y_1 y_2) = (tau (x) tau)(Delta x, y_1 (x) y_2)`.
    pub fn tau_words(&self, e: &[u8], f: &[u8]) -> QScalar {
        if crate::uqalg::words::word_gamma(e) != crate::uqalg::words::word_gamma(f) {
            return QScalar::zero();
        }
        if e.is_empty() {
            return QScalar::one();
        }
        let key = (e.to_vec(), f.to_vec());
        if let Some(c) = self.memo.read().unwrap().get(&key) {
            return c.clone();
        }
        let j = f[0];
        let rest = &f[1..];
        let delta = self.u.coproduct_key(&TermKey::new(vec![], Weight::ZERO, e.to_vec()));
        let mut acc = QScalar::zero();
        for (ks, c) in &delta.terms {
            let (left, right) = (&ks[0], &ks[1]);
            if left.e.as_slice() != [j] {
                continue;
            }
            // tau(k_b e_j, f_j) = q^{(b, alpha_j)} tau(e_j, f_j)
            let lv = &self.u.qform(left.k, self.u.alpha(j as usize)) * &self.tau_simple(j as usize);
            // right slot is e_{E2} k_0
            let rv = self.tau_words(&right.e, rest);
            acc += &(&(c * &lv) * &rv);
        }
        self.memo.write().unwrap().insert(key, acc.clone());
        acc
    }

    /// `tau` on monomials `k_lambda e_E` and `f_F k_mu`.
    pub fn tau_key(&self, x: &TermKey, y: &TermKey) -> QScalar {
        assert!(x.f.is_empty() && y.e.is_empty());
        let rd = &self.u.rd;
        let we = crate::uqalg::words::word_weight(rd, &x.e);
        // k_lambda e_E = q^{(lambda, wt E)} e_E k_lambda
        let exp = rd.form_v(x.k, we) - rd.form_v(x.k, y.k);
        let t = self.tau_words(&x.e, &y.f);
        if t.is_zero() {
            return t;
        }
        &t * &QScalar::v_pow(exp)
    }

    pub fn tau(&self, x: &UElem, y: &UElem) -> Result<QScalar, PairingError> {
        if !x.in_positive_borel() {
            return Err(PairingError::NotNonNegative);
        }
        if !y.in_negative_borel() {
            return Err(PairingError::NotNonPositive);
        }
        let mut acc = QScalar::zero();
        for (a, ca) in &x.terms {
            for (b, cb) in &y.terms {
                let t = self.tau_key(a, b);
                if !t.is_zero() {
                    acc += &(&(ca * cb) * &t);
                }
            }
        }
        Ok(acc)
    }

    /// `(tau (x) tau)(a_1 (x) a_2, b_1 (x) b_2)` for two-slot tensors.
    pub fn tau2(&self, a: &Tensor, b: &Tensor) -> QScalar {
        let mut acc = QScalar::zero();
        for (ka, ca) in &a.terms {
            for (kb, cb) in &b.terms {
                let t1 = self.tau_key(&ka[0], &kb[0]);
                if t1.is_zero() {
                    continue;
                }
                let t2 = self.tau_key(&ka[1], &kb[1]);
                acc += &(&(&(ca * cb) * &t1) * &t2);
            }
        }
        acc
    }

    /// Gram matrix `tau(X_a, Y_b)` between two bases.
    pub fn gram(&self, xs: &[UElem], ys: &[UElem]) -> Mat<QScalar> {
        xs.iter().map(|x| ys.iter().map(|y| self.tau(x, y).unwrap()).collect()).collect()
    }

    fn pbw_basis(&self, positive: bool, g: Gamma, form: Form) -> Vec<UElem> {
        self.u
            .pbw_monos(g)
            .iter()
            .map(|m| match form {
                Form::DK => self.u.pbw_element(positive, m),
                Form::L => self.u.pbw_element_divided(positive, m),
            })
            .collect()
    }

    /// Dual bases of weight `gamma` in the requested normalization; the
    /// normalizing scalars are absorbed on the `x` side.
    pub fn dual_bases(&self, g: Gamma, norm: DualNorm) -> Result<DualBases, PairingError> {
        let tag = norm as u8;
        if let Some(d) = self.dual_memo.read().unwrap().get(&(g, tag)) {
            return Ok(d.clone());
        }
        let (yform, xform) = match norm {
            DualNorm::Plain | DualNorm::XDivided => (Form::DK, Form::DK),
            DualNorm::YDivided => (Form::L, Form::DK),
        };
        let ys = self.pbw_basis(false, g, yform);
        let xb = self.pbw_basis(true, g, xform);
        let gm = self.gram(&xb, &ys);
        let inv = inverse(&gm).ok_or(PairingError::Singular(g))?;
        // x_p = sum_a inv[p][a] X_a gives tau(x_p, y_r) = (inv G)_{pr}
        let xs: Vec<UElem> = inv
            .iter()
            .map(|row| {
                let mut x = UElem::zero();
                for (a, c) in row.iter().enumerate() {
                    x.add_assign(&xb[a].scale(c));
                }
                x
            })
            .collect();
        let d = DualBases { gamma: g, xs, ys };
        self.dual_memo.write().unwrap().insert((g, tag), d.clone());
        Ok(d)
    }

    /// All dual basis pairs with `ht(beta_p) <= max_ht`, as `(beta_p, x_p, y_p)`.
    pub fn dual_pairs(&self, max_ht: i32, norm: DualNorm) -> Vec<(Gamma, UElem, UElem)> {
        let mut out = Vec::new();
        for h in 0..=max_ht {
            for a in 0..=h {
                let g = [a, h - a];
                if self.u.rank() == 1 && g[1] != 0 {
                    continue;
                }
                let d = self.dual_bases(g, norm).expect("Gram matrices are nondegenerate");
                for (x, y) in d.xs.into_iter().zip(d.ys) {
                    out.push((g, x, y));
                }
            }
        }
        out
    }

    /// Checks the defining identity `tau(x_1 x_2, y) = (tau (x) tau)(x_2 (x) x_1, Delta y)`
    /// on monomials; returns the difference.
    pub fn second_axiom_defect(&self, x1: &UElem, x2: &UElem, y: &UElem) -> QScalar {
        let lhs = self.tau(&self.u.mul(x1, x2), y).unwrap();
        let rhs = self.tau2(&Tensor::pure(&[x2, x1]), &self.u.coproduct(y));
        &lhs - &rhs
    }

    /// Identity `yx = sum tau(x_(0), S y_(0)) tau(x_(2), y_(2)) x_(1) y_(1)`; returns the difference.
    pub fn commutation_defect_yx(&self, x: &UElem, y: &UElem) -> UElem {
        let u = self.u;
        let dx = self.delta2(x);
        let dy = self.delta2(y);
        let mut rhs = UElem::zero();
        for (kx, cx) in &dx.terms {
            for (ky, cy) in &dy.terms {
                let sy0 = u.antipode_key(&ky[0]);
                let t0 = self.tau(&UElem::term(kx[0].clone(), QScalar::one()), &sy0).unwrap();
                if t0.is_zero() {
                    continue;
                }
                let t2 = self.tau_key(&kx[2], &ky[2]);
                if t2.is_zero() {
                    continue;
                }
                let m = u.mul_key(&kx[1], &ky[1]);
                rhs.add_assign(&m.scale(&(&(&(cx * cy) * &t0) * &t2)));
            }
        }
        u.mul(y, x).sub(&rhs)
    }

    /// Identity `xy = sum tau(x_(0), y_(0)) tau(x_(2), S y_(2)) y_(1) x_(1)`; returns the difference.
    pub fn commutation_defect_xy(&self, x: &UElem, y: &UElem) -> UElem {
        let u = self.u;
        let dx = self.delta2(x);
        let dy = self.delta2(y);
        let mut rhs = UElem::zero();
        for (kx, cx) in &dx.terms {
            for (ky, cy) in &dy.terms {
                let t0 = self.tau_key(&kx[0], &ky[0]);
                if t0.is_zero() {
                    continue;
                }
                let sy2 = u.antipode_key(&ky[2]);
                let t2 = self.tau(&UElem::term(kx[2].clone(), QScalar::one()), &sy2).unwrap();
                if t2.is_zero() {
                    continue;
                }
                let m = u.mul_key(&ky[1], &kx[1]);
                rhs.add_assign(&m.scale(&(&(&(cx * cy) * &t0) * &t2)));
            }
        }
        u.mul(x, y).sub(&rhs)
    }

    /// `(Delta (x) id) Delta`
    pub fn delta2(&self, x: &UElem) -> Tensor {
        let d = self.u.coproduct(x);
        self.u.tensor_map_slot(&d, 0, |k| self.u.coproduct_key(k))
    }

    /// Integrality of the pairing between divided powers on one side and plain
    /// powers on the other: every entry lies in `A` and the determinant is a unit.
    pub fn pm_duality_holds(&self, g: Gamma, cfg: &RootOfUnityConfig) -> bool {
        for (xf, yf) in [(Form::L, Form::DK), (Form::DK, Form::L)] {
            let gm = self.gram(&self.pbw_basis(true, g, xf), &self.pbw_basis(false, g, yf));
            if !gm.iter().flatten().all(|c| c.is_zero() || cfg.regular_at_root(c)) {
                return false;
            }
            if cfg.valuation(&determinant(&gm)) != Some(0) {
                return false;
            }
        }
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qscalars::qint;
    use crate::rootdata::{CartanType, RootDatum};
    use crate::uqalg::words::words_of;

    #[test]
    fn generator_values() {
        let u = Uq::new(RootDatum::a2());
        let p = Pairing::new(&u);
        for i in 0..2 {
            for j in 0..2 {
                let t = p.tau(&u.e(i), &u.f(j)).unwrap();
                let exp = if i == j { (&QScalar::v_pow(-3) - &QScalar::v_pow(3)).inv() } else { QScalar::zero() };
                assert_eq!(t, exp);
            }
        }
        let l = Weight::new(&[1, 0]);
        let m = Weight::new(&[2, -1]);
        assert_eq!(p.tau(&u.k(l), &u.k(m)).unwrap(), QScalar::v_pow(-u.rd.form_v(l, m)));
        assert!(p.tau(&u.k(l), &u.f(0)).unwrap().is_zero());
        assert!(p.tau(&u.e(0), &u.k(l)).unwrap().is_zero());
        assert!(p.tau(&u.f(0), &u.f(0)).is_err());
    }

    #[test]
    fn e_squared_against_f_squared() {
        // (1 + q^2) / (q^-1 - q)^2 with q = v^2
        let u = Uq::new(RootDatum::a1());
        let p = Pairing::new(&u);
        let e2 = u.mul(&u.e(0), &u.e(0));
        let f2 = u.mul(&u.f(0), &u.f(0));
        let t = p.tau(&e2, &f2).unwrap();
        let d = &QScalar::v_pow(-2) - &QScalar::v_pow(2);
        assert_eq!(t, &(&QScalar::one() + &QScalar::v_pow(4)) * &(&d * &d).inv());
        // equivalently q [2]_q tau(e,f)^2
        assert_eq!(t, &(&QScalar::v_pow(2) * &qint(2, 2)) * &(&d * &d).inv());
    }

    #[test]
    fn agrees_with_word_engine_pairing() {
        for rd in [RootDatum::a2(), RootDatum::new(CartanType::B2, None).unwrap()] {
            let u = Uq::new(rd);
            let p = Pairing::new(&u);
            for g in [[1, 1], [2, 1], [1, 2], [2, 2]] {
                let s = u.space(g);
                let mut scale = QScalar::one();
                for (i, &n) in g.iter().enumerate() {
                    scale = &scale * &(-u.qi_diff(i)).inv().pow(n);
                }
                let ws = words_of(g);
                for a in &ws {
                    for b in &ws {
                        let phi = QScalar::from_laurent(s.row(a)[s.word_index(b).unwrap()].clone());
                        assert_eq!(p.tau_words(a, b), &phi * &scale);
                    }
                }
            }
        }
    }

    #[test]
    fn second_axiom_and_lemma_parts() {
        let u = Uq::new(RootDatum::a2());
        let p = Pairing::new(&u);
        let x1 = u.mul(&u.e(0), &u.k(Weight::new(&[0, 1])));
        let x2 = u.mul(&u.e(1), &u.e(0));
        for y in [u.f_word(&[0, 1, 0]), u.f_word(&[0, 0, 1]), u.mul(&u.f_word(&[1, 0, 0]), &u.k(Weight::new(&[1, 1])))] {
            assert!(p.second_axiom_defect(&x1, &x2, &y).is_zero());
            let x = u.mul(&x1, &x2);
            assert_eq!(p.tau(&u.antipode(&x), &u.antipode(&y)).unwrap(), p.tau(&x, &y).unwrap());
        }
        let x = u.e(0);
        let y = u.f_word(&[0, 1]);
        assert!(p.commutation_defect_yx(&x, &y).is_zero());
        assert!(p.commutation_defect_xy(&x, &y).is_zero());
    }

    #[test]
    fn dual_bases_are_dual() {
        let u = Uq::new(RootDatum::a2());
        let p = Pairing::new(&u);
        let cfg = RootOfUnityConfig::new(5, 3, false).unwrap();
        for norm in [DualNorm::Plain, DualNorm::XDivided, DualNorm::YDivided] {
            let d = p.dual_bases([2, 1], norm).unwrap();
            let gm = p.gram(&d.xs, &d.ys);
            assert_eq!(gm, crate::qscalars::field::identity(d.xs.len()));
        }
        // A1, gamma = alpha: x = (q^-1 - q) e, y = f
        let u1 = Uq::new(RootDatum::a1());
        let p1 = Pairing::new(&u1);
        let d = p1.dual_bases([1, 0], DualNorm::Plain).unwrap();
        assert_eq!(d.xs[0], u1.e(0).scale(&(&QScalar::v_pow(-2) - &QScalar::v_pow(2))));
        assert_eq!(d.ys[0], u1.f(0));
        assert!(p.pm_duality_holds([1, 1], &cfg));
        assert!(p.pm_duality_holds([2, 1], &cfg));
        let cfg3 = RootOfUnityConfig::new(3, 2, false).unwrap();
        for n in 1..=4 {
            assert!(p1.pm_duality_holds([n, 0], &cfg3));
        }
    }

    #[test]
    fn plain_powers_are_not_self_dual_at_the_root() {
        // tau(e^3, f^3) carries [3]_q!, which vanishes at a cube root of unity
        let u = Uq::new(RootDatum::a1());
        let p = Pairing::new(&u);
        let cfg = RootOfUnityConfig::new(3, 2, false).unwrap();
        let m = vec![3];
        let t = p.tau(&u.pbw_element(true, &m), &u.pbw_element(false, &m)).unwrap();
        assert!(cfg.valuation(&t).unwrap() > 0);
    }
}
