//! Lusztig's braid group automorphisms `T_i^{\pm 1}` and root vectors.

use super::algebra::Uq;
use super::elem::{TermKey, UElem};
use crate::qscalars::QScalar;

impl Uq {
    /// `T_i(x)` for `inverse == false`, `T_i^{-1}(x)` otherwise.
    pub fn braid(&self, i: usize, inverse: bool, x: &UElem) -> UElem {
        let mut out = UElem::zero();
        for (t, c) in &x.terms {
            let f = self.braid_word(i, inverse, false, &t.f);
            let k = self.k(self.rd.reflect(i, t.k));
            let e = self.braid_word(i, inverse, true, &t.e);
            out.add_assign(&self.mul_all(&[&f, &k, &e]).scale(c));
        }
        out
    }

    /// `T_{w_1} ... T_{w_n}(x)`; the rightmost factor acts first.
    pub fn braid_seq(&self, word: &[usize], inverse: bool, x: &UElem) -> UElem {
        word.iter().rev().fold(x.clone(), |acc, &i| self.braid(i, inverse, &acc))
    }

    fn braid_word(&self, i: usize, inverse: bool, is_e: bool, w: &[u8]) -> UElem {
        if w.is_empty() {
            return UElem::one();
        }
        let key = (i, inverse, is_e, w.to_vec());
        if let Some(r) = self.braid_memo.read().unwrap().get(&key) {
            return r.clone();
        }
        let n = w.len();
        let r = if n == 1 {
            self.braid_generator(i, inverse, is_e, w[0] as usize)
        } else {
            let head = self.braid_word(i, inverse, is_e, &w[..n - 1]);
            let last = self.braid_word(i, inverse, is_e, &w[n - 1..]);
            self.mul(&head, &last)
        };
        self.braid_memo.write().unwrap().insert(key, r.clone());
        r
    }

    fn braid_generator(&self, i: usize, inverse: bool, is_e: bool, j: usize) -> UElem {
        let ki = self.ki(i);
        let kim = self.k(-self.alpha(i));
        if i == j {
            return match (inverse, is_e) {
                (false, true) => self.mul(&self.f(i), &ki).neg(),
                (false, false) => self.mul(&kim, &self.e(i)).neg(),
                (true, true) => self.mul(&kim, &self.f(i)).neg(),
                (true, false) => self.mul(&self.e(i), &ki).neg(),
            };
        }
        let a = -self.rd.cartan[i][j];
        let qi = self.rd.qi_exp(i);
        let mut out = UElem::zero();
        for k in 0..=a {
            let sign = if k % 2 == 0 { 1 } else { -1 };
            let (left, right, gen, qexp) = if is_e {
                let (l, r) = if inverse { (k, a - k) } else { (a - k, k) };
                (self.e_div(i, l as u32), self.e_div(i, r as u32), self.e(j), -qi * k)
            } else {
                let (l, r) = if inverse { (a - k, k) } else { (k, a - k) };
                (self.f_div(i, l as u32), self.f_div(i, r as u32), self.f(j), qi * k)
            };
            let term = self.mul_all(&[&left, &gen, &right]);
            out.add_assign(&term.scale(&QScalar::monomial(sign, qexp)));
        }
        out
    }

    /// Root vector `e_{beta_k}` (0-based `k`) for the datum's reduced word.
    pub fn root_vector_e(&self, k: usize) -> UElem {
        let w = &self.rd.w0_word;
        self.braid_seq(&w[..k], false, &self.e(w[k]))
    }

    /// Root vector `f_{beta_k}` (0-based `k`).
    pub fn root_vector_f(&self, k: usize) -> UElem {
        let w = &self.rd.w0_word;
        self.braid_seq(&w[..k], false, &self.f(w[k]))
    }

    /// Checks that a root vector lies in `U^+` (resp. `U^-`) with no torus part.
    pub fn is_pure_positive(&self, x: &UElem) -> bool {
        x.terms.keys().all(|t: &TermKey| t.f.is_empty() && t.k.is_zero())
    }

    pub fn is_pure_negative(&self, x: &UElem) -> bool {
        x.terms.keys().all(|t: &TermKey| t.e.is_empty() && t.k.is_zero())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rootdata::{CartanType, RootDatum, Weight};

    fn gens(u: &Uq) -> Vec<UElem> {
        let mut g = Vec::new();
        for i in 0..u.rank() {
            g.push(u.e(i));
            g.push(u.f(i));
            g.push(u.k(Weight::unit(i)));
        }
        g
    }

    #[test]
    fn inverse_undoes() {
        for rd in [RootDatum::a1(), RootDatum::a2(), RootDatum::new(CartanType::B2, None).unwrap()] {
            let u = Uq::new(rd);
            for i in 0..u.rank() {
                for g in gens(&u) {
                    assert_eq!(u.braid(i, true, &u.braid(i, false, &g)), g);
                    assert_eq!(u.braid(i, false, &u.braid(i, true, &g)), g);
                }
            }
        }
    }

    #[test]
    fn braid_relation_a2() {
        let u = Uq::new(RootDatum::a2());
        for g in gens(&u) {
            assert_eq!(u.braid_seq(&[0, 1, 0], false, &g), u.braid_seq(&[1, 0, 1], false, &g));
        }
    }

    #[test]
    fn generator_images() {
        let u = Uq::new(RootDatum::a2());
        assert_eq!(u.braid(0, false, &u.e(0)), u.mul(&u.f(0), &u.ki(0)).neg());
        assert_eq!(u.braid(0, false, &u.f(0)), u.mul(&u.k(-u.alpha(0)), &u.e(0)).neg());
        // T_1(e_2) = e_1 e_2 - q^-1 e_2 e_1
        let expected = u.mul(&u.e(0), &u.e(1)).sub(&u.mul(&u.e(1), &u.e(0)).scale(&QScalar::v_pow(-3)));
        assert_eq!(u.braid(0, false, &u.e(1)), expected);
        assert_eq!(u.root_vector_e(1), expected);
        assert_eq!(u.root_vector_e(0), u.e(0));
        assert_eq!(u.root_vector_e(2), u.e(1));
    }
}
