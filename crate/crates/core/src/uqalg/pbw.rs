//! PBW monomials in root vectors and coordinate readouts in the plain (De
//! Concini-Kac) and divided-power (Lusztig) normalizations.

use super::algebra::Uq;
use super::elem::{TermKey, UElem};
use super::words::{word_gamma, Gamma};
use crate::qscalars::field::{inverse, vec_mat, Mat};
use crate::qscalars::{qfact, QScalar};
use crate::rootdata::Weight;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::sync::Arc;

/// Which integral normalization a PBW readout uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Form {
    /// Plain powers `e_beta^m`.
    DK,
    /// Divided powers `e_beta^(m)`.
    L,
}

/// Exponent vector indexed by `k = 0..N` (exponent of `beta_{k+1}`).
pub type Mono = Vec<u32>;

/// PBW monomials of one weight of `U^+` or `U^-` and the change of basis to words.
pub struct PbwSpace {
    pub monos: Vec<Mono>,
    /// rows: PBW monomial (plain powers) in word-basis coordinates
    pub to_words: Mat<QScalar>,
    pub from_words: Mat<QScalar>,
}

/// Key of a triangular PBW monomial `f^F k_lambda e^E`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
pub struct PbwKey {
    pub f: Mono,
    pub k: Weight,
    pub e: Mono,
}

/// An element written in a PBW basis.
pub type PbwElem = BTreeMap<PbwKey, QScalar>;

impl Uq {
    /// Exponent vectors with `sum m_k beta_k = gamma`.
    pub fn pbw_monos(&self, g: Gamma) -> Vec<Mono> {
        let n = self.rd.n_pos();
        let betas: Vec<Gamma> = self.rd.betas.iter().map(|b| self.rd.alpha_coords(*b).unwrap()).collect();
        let mut out = Vec::new();
        fn rec(k: usize, betas: &[Gamma], rem: Gamma, cur: &mut Mono, out: &mut Vec<Mono>) {
            if k == betas.len() {
                if rem == [0, 0] {
                    out.push(cur.clone());
                }
                return;
            }
            let b = betas[k];
            let mut m = 0;
            let mut r = rem;
            loop {
                cur[k] = m;
                rec(k + 1, betas, r, cur, out);
                r = [r[0] - b[0], r[1] - b[1]];
                if r[0] < 0 || r[1] < 0 {
                    break;
                }
                m += 1;
            }
            cur[k] = 0;
        }
        rec(0, &betas, g, &mut vec![0; n], &mut out);
        out.sort();
        out
    }

    /// `[m]_{q_beta}!` products for a monomial: the divided-power normalization factor.
    pub fn mono_factorial(&self, m: &Mono) -> QScalar {
        let mut r = QScalar::one();
        for (k, &mk) in m.iter().enumerate() {
            if mk > 1 {
                r = &r * &qfact(mk as i64, self.rd.qbeta_exp(self.rd.betas[k]));
            }
        }
        r
    }

    /// The plain PBW monomial `x_{beta_N}^{m_N} ... x_{beta_1}^{m_1}` on the chosen side.
    pub fn pbw_element(&self, positive: bool, m: &Mono) -> UElem {
        let mut acc = UElem::one();
        for k in (0..m.len()).rev() {
            if m[k] == 0 {
                continue;
            }
            let r = if positive { self.root_vector_e(k) } else { self.root_vector_f(k) };
            for _ in 0..m[k] {
                acc = self.mul(&acc, &r);
            }
        }
        acc
    }

    pub fn pbw_space(&self, positive: bool, g: Gamma) -> Arc<PbwSpace> {
        if let Some(s) = self.pbw_memo.read().unwrap().get(&(positive, g)) {
            return s.clone();
        }
        let ws = self.space(g);
        let monos = self.pbw_monos(g);
        assert_eq!(monos.len(), ws.dim(), "PBW monomial count differs from dimension");
        let to_words: Mat<QScalar> = monos
            .iter()
            .map(|m| {
                let x = self.pbw_element(positive, m);
                let mut row = vec![QScalar::zero(); ws.dim()];
                for (t, c) in &x.terms {
                    let w = if positive { &t.e } else { &t.f };
                    row[ws.basis_index(w).unwrap()] = c.clone();
                }
                row
            })
            .collect();
        let from_words = inverse(&to_words).expect("PBW monomials are a basis");
        let s = Arc::new(PbwSpace { monos, to_words, from_words });
        self.pbw_memo.write().unwrap().insert((positive, g), s.clone());
        s
    }

    /// Coordinates of `x` in the PBW basis of the given form.
    pub fn pbw_readout(&self, x: &UElem, form: Form) -> PbwElem {
        // group by (gamma_F, lambda, gamma_E) and convert each block
        let mut blocks: BTreeMap<(Gamma, Weight, Gamma), BTreeMap<(Vec<u8>, Vec<u8>), QScalar>> = BTreeMap::new();
        for (t, c) in &x.terms {
            blocks
                .entry((word_gamma(&t.f), t.k, word_gamma(&t.e)))
                .or_default()
                .insert((t.f.clone(), t.e.clone()), c.clone());
        }
        let mut out = PbwElem::new();
        for ((gf, lam, ge), entries) in blocks {
            let sf = self.space(gf);
            let se = self.space(ge);
            let pf = self.pbw_space(false, gf);
            let pe = self.pbw_space(true, ge);
            // matrix of coefficients C[f_basis][e_basis]; PBW = Pf^T-side transform
            let mut cm: Mat<QScalar> = vec![vec![QScalar::zero(); se.dim()]; sf.dim()];
            for ((fw, ew), c) in entries {
                cm[sf.basis_index(&fw).unwrap()][se.basis_index(&ew).unwrap()] = c;
            }
            // x = sum_{a,b} C[a][b] f_a k e_b ; f_a = sum_m from_words[a]... in PBW coords
            // word-basis vector w maps to PBW coords w * from_words
            let left: Mat<QScalar> = crate::qscalars::field::transpose(&cm)
                .iter()
                .map(|col| vec_mat(col, &pf.from_words))
                .collect(); // left[b][mf]
            let full: Mat<QScalar> = crate::qscalars::field::transpose(&left)
                .iter()
                .map(|row| vec_mat(row, &pe.from_words))
                .collect(); // full[mf][me]
            for (a, row) in full.iter().enumerate() {
                for (b, c) in row.iter().enumerate() {
                    if c.is_zero() {
                        continue;
                    }
                    let mf = &pf.monos[a];
                    let me = &pe.monos[b];
                    let c = match form {
                        Form::DK => c.clone(),
                        Form::L => &(c * &self.mono_factorial(mf)) * &self.mono_factorial(me),
                    };
                    out.insert(PbwKey { f: mf.clone(), k: lam, e: me.clone() }, c);
                }
            }
        }
        out
    }

    /// Inverse of `pbw_readout`.
    pub fn from_pbw(&self, p: &PbwElem, form: Form) -> UElem {
        let mut out = UElem::zero();
        for (key, c) in p {
            let gf = self.mono_gamma(&key.f);
            let ge = self.mono_gamma(&key.e);
            let pf = self.pbw_space(false, gf);
            let pe = self.pbw_space(true, ge);
            let sf = self.space(gf);
            let se = self.space(ge);
            let ia = pf.monos.iter().position(|m| m == &key.f).unwrap();
            let ib = pe.monos.iter().position(|m| m == &key.e).unwrap();
            let c = match form {
                Form::DK => c.clone(),
                Form::L => &(c * &self.mono_factorial(&key.f).inv()) * &self.mono_factorial(&key.e).inv(),
            };
            for (a, x) in pf.to_words[ia].iter().enumerate() {
                if x.is_zero() {
                    continue;
                }
                for (b, y) in pe.to_words[ib].iter().enumerate() {
                    if y.is_zero() {
                        continue;
                    }
                    out.add_term(TermKey::new(sf.basis[a].clone(), key.k, se.basis[b].clone()), &(&c * x) * y);
                }
            }
        }
        out
    }

    pub fn mono_gamma(&self, m: &Mono) -> Gamma {
        let mut g = [0, 0];
        for (k, &mk) in m.iter().enumerate() {
            let b = self.rd.alpha_coords(self.rd.betas[k]).unwrap();
            g[0] += b[0] * mk as i32;
            g[1] += b[1] * mk as i32;
        }
        g
    }

    /// Divided-power PBW monomial `x_{beta_N}^{(m_N)} ... x_{beta_1}^{(m_1)}`.
    pub fn pbw_element_divided(&self, positive: bool, m: &Mono) -> UElem {
        self.pbw_element(positive, m).scale(&self.mono_factorial(m).inv())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rootdata::RootDatum;

    #[test]
    fn readout_round_trip() {
        let u = Uq::new(RootDatum::a2());
        let x = u.mul_all(&[&u.e(1), &u.f(0), &u.e(0), &u.f(1), &u.e(0)]);
        for form in [Form::DK, Form::L] {
            let p = u.pbw_readout(&x, form);
            assert_eq!(u.from_pbw(&p, form), x);
        }
    }

    #[test]
    fn root_vectors_are_unit_monomials() {
        let u = Uq::new(RootDatum::a2());
        for k in 0..3 {
            let mut m = vec![0; 3];
            m[k] = 1;
            let p = u.pbw_readout(&u.root_vector_e(k), Form::DK);
            assert_eq!(p.len(), 1);
            assert_eq!(p.get(&PbwKey { f: vec![0; 3], k: Weight::ZERO, e: m }), Some(&QScalar::one()));
        }
    }
}
