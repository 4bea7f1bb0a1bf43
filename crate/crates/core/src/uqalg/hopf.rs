//! Coproduct, counit and antipode on triangular monomials, and tensor utilities.

use super::algebra::Uq;
use super::elem::{Tensor, TermKey, UElem};
use super::words::word_weight;
use crate::qscalars::QScalar;

impl Uq {
    /// Splits a word by a subset mask: (letters in the subset, letters outside).
    fn split_word(w: &[u8], mask: u32) -> (Vec<u8>, Vec<u8>) {
        let mut a = Vec::new();
        let mut b = Vec::new();
        for (t, &x) in w.iter().enumerate() {
            if mask >> t & 1 == 1 {
                a.push(x);
            } else {
                b.push(x);
            }
        }
        (a, b)
    }

    /// `sum_{t in S, s not in S, t < s} (alpha_{w_t}, alpha_{w_s})` as a power of `v`.
    fn cross_exp(&self, w: &[u8], mask: u32, left_in: bool) -> i32 {
        let mut e = 0;
        for t in 0..w.len() {
            let tin = mask >> t & 1 == 1;
            if tin != left_in {
                continue;
            }
            for s in t + 1..w.len() {
                let sin = mask >> s & 1 == 1;
                if sin == left_in {
                    continue;
                }
                e += self.rd.form_v(self.alpha(w[t] as usize), self.alpha(w[s] as usize));
            }
        }
        e
    }

    pub fn coproduct_key(&self, t: &TermKey) -> Tensor {
        let mut out = Tensor::zero();
        let nf = t.f.len();
        let ne = t.e.len();
        for sf in 0..1u32 << nf {
            let (f1, f2) = Self::split_word(&t.f, sf);
            let ef = self.cross_exp(&t.f, sf, true);
            let a = word_weight(&self.rd, &f1);
            let f1r = self.reduce_word(&f1);
            let f2r = self.reduce_word(&f2);
            for se in 0..1u32 << ne {
                let (e1, e2) = Self::split_word(&t.e, se);
                let ee = self.cross_exp(&t.e, se, false);
                let b = word_weight(&self.rd, &e2);
                let we1 = word_weight(&self.rd, &e1);
                let c = QScalar::v_pow(ef + ee - self.rd.form_v(b, we1));
                let e1r = self.reduce_word(&e1);
                let e2r = self.reduce_word(&e2);
                for (x1, c1) in &f1r {
                    for (y1, d1) in &e1r {
                        let c1d1 = &(&c * c1) * d1;
                        for (x2, c2) in &f2r {
                            for (y2, d2) in &e2r {
                                out.add_term(
                                    vec![
                                        TermKey::new(x1.clone(), t.k + b, y1.clone()),
                                        TermKey::new(x2.clone(), t.k - a, y2.clone()),
                                    ],
                                    &(&c1d1 * c2) * d2,
                                );
                            }
                        }
                    }
                }
            }
        }
        out
    }

    pub fn coproduct(&self, x: &UElem) -> Tensor {
        let mut out = Tensor::zero();
        for (t, c) in &x.terms {
            for (k, d) in self.coproduct_key(t).terms {
                out.add_term(k, c * &d);
            }
        }
        out
    }

    pub fn counit(&self, x: &UElem) -> QScalar {
        x.terms
            .iter()
            .filter(|(t, _)| t.f.is_empty() && t.e.is_empty())
            .fold(QScalar::zero(), |acc, (_, c)| &acc + c)
    }

    /// Sum over pairs `j < m` of `(alpha_{w_j}, alpha_{w_m})` as a power of `v`.
    fn pair_exp(&self, w: &[u8]) -> i32 {
        let mut e = 0;
        for j in 0..w.len() {
            for m in j + 1..w.len() {
                e += self.rd.form_v(self.alpha(w[j] as usize), self.alpha(w[m] as usize));
            }
        }
        e
    }

    pub fn antipode_key(&self, t: &TermKey) -> UElem {
        let sign: i128 = if (t.e.len() + t.f.len()).is_multiple_of(2) { 1 } else { -1 };
        let mut re = t.e.clone();
        re.reverse();
        let mut rf = t.f.clone();
        rf.reverse();
        let se = self.mul(&self.k(-word_weight(&self.rd, &t.e)), &self.e_word(&re));
        let sf = self.mul(&self.f_word(&rf), &self.k(word_weight(&self.rd, &t.f)));
        let c = QScalar::monomial(sign, self.pair_exp(&t.e) - self.pair_exp(&t.f));
        self.mul_all(&[&se, &self.k(-t.k), &sf]).scale(&c)
    }

    pub fn antipode(&self, x: &UElem) -> UElem {
        let mut out = UElem::zero();
        for (t, c) in &x.terms {
            out.add_assign(&self.antipode_key(t).scale(c));
        }
        out
    }

    /// Inverse antipode via `S^2(x) = k_{-2rho} x k_{2rho}`.
    pub fn antipode_inv(&self, x: &UElem) -> UElem {
        let two_rho = self.rd.rho * 2;
        let y = self.mul_all(&[&self.k(two_rho), x, &self.k(-two_rho)]);
        self.antipode(&y)
    }

    pub fn mul_key(&self, a: &TermKey, b: &TermKey) -> UElem {
        self.mul(&UElem::term(a.clone(), QScalar::one()), &UElem::term(b.clone(), QScalar::one()))
    }

    /// Slotwise product of two tensors with the same number of slots.
    pub fn tensor_mul(&self, a: &Tensor, b: &Tensor) -> Tensor {
        let mut out = Tensor::zero();
        for (ka, ca) in &a.terms {
            for (kb, cb) in &b.terms {
                let mut partial: Vec<(Vec<TermKey>, QScalar)> = vec![(vec![], ca * cb)];
                for (x, y) in ka.iter().zip(kb) {
                    let p = self.mul_key(x, y);
                    let mut next = Vec::new();
                    for (ks, c) in &partial {
                        for (k, d) in &p.terms {
                            let mut nk = ks.clone();
                            nk.push(k.clone());
                            next.push((nk, c * d));
                        }
                    }
                    partial = next;
                }
                for (k, c) in partial {
                    out.add_term(k, c);
                }
            }
        }
        out
    }

    /// Applies a linear map to one slot of a tensor; the map returns a tensor
    /// that replaces that slot (possibly with several slots).
    pub fn tensor_map_slot(&self, t: &Tensor, slot: usize, f: impl Fn(&TermKey) -> Tensor) -> Tensor {
        let mut out = Tensor::zero();
        for (ks, c) in &t.terms {
            let img = f(&ks[slot]);
            for (ik, d) in img.terms {
                let mut nk: Vec<TermKey> = ks[..slot].to_vec();
                nk.extend(ik);
                nk.extend(ks[slot + 1..].iter().cloned());
                out.add_term(nk, c * &d);
            }
        }
        out
    }

    /// Multiplies all slots together in order.
    pub fn tensor_contract(&self, t: &Tensor) -> UElem {
        let mut out = UElem::zero();
        for (ks, c) in &t.terms {
            let mut acc = UElem::one();
            for k in ks {
                acc = self.mul(&acc, &UElem::term(k.clone(), QScalar::one()));
            }
            out.add_assign(&acc.scale(c));
        }
        out
    }

    /// A single-slot tensor from an element.
    pub fn as_tensor(x: &UElem) -> Tensor {
        Tensor::pure(&[x])
    }

    /// Hopf axiom defects for `x`: coassociativity, both antipode identities and
    /// both counit identities. Every entry is zero when the axioms hold.
    pub fn hopf_defects(&self, x: &UElem) -> (Tensor, UElem, UElem, UElem, UElem) {
        let d = self.coproduct(x);
        let left = self.tensor_map_slot(&d, 0, |k| self.coproduct_key(k));
        let right = self.tensor_map_slot(&d, 1, |k| self.coproduct_key(k));
        let eps = self.counit(x);
        let s_left = self.tensor_map_slot(&d, 0, |k| Self::as_tensor(&self.antipode_key(k)));
        let s_right = self.tensor_map_slot(&d, 1, |k| Self::as_tensor(&self.antipode_key(k)));
        let unit = UElem::scalar(eps);
        let c_left = self.tensor_map_slot(&d, 0, |k| {
            let mut t = Tensor::zero();
            let e = self.counit(&UElem::term(k.clone(), QScalar::one()));
            t.add_term(vec![], e);
            t
        });
        let c_right = self.tensor_map_slot(&d, 1, |k| {
            let mut t = Tensor::zero();
            let e = self.counit(&UElem::term(k.clone(), QScalar::one()));
            t.add_term(vec![], e);
            t
        });
        (
            left.sub(&right),
            self.tensor_contract(&s_left).sub(&unit),
            self.tensor_contract(&s_right).sub(&unit),
            self.tensor_contract(&c_left).sub(x),
            self.tensor_contract(&c_right).sub(x),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qscalars::qint;
    use crate::rootdata::RootDatum;

    #[test]
    fn generator_formulas() {
        let u = Uq::new(RootDatum::a2());
        for i in 0..2 {
            let kim = u.k(-u.alpha(i));
            let exp = Tensor::pure(&[&u.f(i), &kim]);
            let mut exp = exp;
            exp.add_assign(&Tensor::pure(&[&UElem::one(), &u.f(i)]));
            assert_eq!(u.coproduct(&u.f(i)), exp);
            assert_eq!(u.antipode(&u.e(i)), u.mul(&kim, &u.e(i)).neg());
            assert_eq!(u.antipode(&u.f(i)), u.mul(&u.f(i), &u.ki(i)).neg());
        }
    }

    #[test]
    fn coproduct_of_e_squared() {
        // Delta(e^2) = e^2 (x) 1 + (1 + q^2) e k (x) e + k^2 (x) e^2
        let u = Uq::new(RootDatum::a1());
        let e = u.e(0);
        let k = u.ki(0);
        let e2 = u.mul(&e, &e);
        let mut exp = Tensor::pure(&[&e2, &UElem::one()]);
        let ek = u.mul(&e, &k).scale(&(&QScalar::one() + &QScalar::v_pow(4)));
        exp.add_assign(&Tensor::pure(&[&ek, &e]));
        exp.add_assign(&Tensor::pure(&[&u.mul(&k, &k), &e2]));
        assert_eq!(u.coproduct(&e2), exp);
        // (1 + q^2) = q [2]_q
        assert_eq!(&QScalar::one() + &QScalar::v_pow(4), &QScalar::v_pow(2) * &qint(2, 2));
    }

    #[test]
    fn hopf_axioms_on_mixed_element() {
        let u = Uq::new(RootDatum::a2());
        let x = u.mul_all(&[&u.f(1), &u.e(0), &u.e(1), &u.k(crate::rootdata::Weight::new(&[1, -1]))]);
        let (a, b, c, d, e) = u.hopf_defects(&x);
        assert!(a.is_zero() && b.is_zero() && c.is_zero() && d.is_zero() && e.is_zero());
    }

    #[test]
    fn coproduct_is_multiplicative() {
        let u = Uq::new(RootDatum::a2());
        let x = u.mul(&u.e(0), &u.f(1));
        let y = u.mul(&u.f(0), &u.e(1));
        let lhs = u.coproduct(&u.mul(&x, &y));
        let rhs = u.tensor_mul(&u.coproduct(&x), &u.coproduct(&y));
        assert_eq!(lhs, rhs);
        assert_eq!(u.antipode(&u.mul(&x, &y)), u.mul(&u.antipode(&y), &u.antipode(&x)));
        assert_eq!(u.antipode_inv(&u.antipode(&x)), x);
        let z = u.mul(&u.e(0), &u.e(1));
        assert_eq!(u.antipode_inv(&u.antipode(&z)), z);
        assert_eq!(u.antipode(&u.antipode_inv(&z)), z);
    }
}
