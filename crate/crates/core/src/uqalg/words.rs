//! Weight spaces of the positive part, realized through words in the Chevalley
//! generators and the pairing against all words of the same weight.
//!
//! For a word `u` of weight `gamma` the row `Phi(e_u)` lists the normalized
//! pairings `c(gamma) tau(e_u, f_w)` over all words `w` of weight `gamma`. The
//! pairing is nondegenerate, so `Phi` is injective on `U^+_gamma`: a word
//! reduces to a basis of words by solving against the rows of the basis.

use crate::qscalars::field::{independent_rows, inverse, rref, vec_mat, Mat};
use crate::qscalars::{Laurent, QScalar};
use crate::rootdata::{RootDatum, Weight};
use std::collections::HashMap;
use std::sync::RwLock;

/// A word in the simple indices (0-based).
pub type Word = Vec<u8>;

/// Simple-root coordinates of an element of `Q^+`.
pub type Gamma = [i32; 2];

pub fn word_gamma(w: &[u8]) -> Gamma {
    let mut g = [0; 2];
    for &i in w {
        g[i as usize] += 1;
    }
    g
}

pub fn word_weight(rd: &RootDatum, w: &[u8]) -> Weight {
    w.iter().fold(Weight::ZERO, |acc, &i| acc + rd.simple_root(i as usize))
}

/// All words with the given letter multiplicities, in lexicographic order.
pub fn words_of(g: Gamma) -> Vec<Word> {
    fn rec(g: &mut Gamma, cur: &mut Word, out: &mut Vec<Word>) {
        if g.iter().all(|&x| x == 0) {
            out.push(cur.clone());
            return;
        }
        for i in 0..2 {
            if g[i] > 0 {
                g[i] -= 1;
                cur.push(i as u8);
                rec(g, cur, out);
                cur.pop();
                g[i] += 1;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut g.clone(), &mut Vec::new(), &mut out);
    out
}

/// One weight space `U^+_gamma` with its chosen word basis.
pub struct WeightSpace {
    pub gamma: Gamma,
    pub words: Vec<Word>,
    index: HashMap<Word, usize>,
    /// `rows[u][w] = Phi(e_u)_w`
    rows: Vec<Vec<Laurent>>,
    /// Basis words (a subset of `words`, lexicographically first independent rows).
    pub basis: Vec<Word>,
    basis_index: HashMap<Word, usize>,
    pivots: Vec<usize>,
    inv: Mat<QScalar>,
    cache: RwLock<HashMap<Word, Vec<QScalar>>>,
}

impl WeightSpace {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn word_index(&self, w: &[u8]) -> Option<usize> {
        self.index.get(w).copied()
    }

    pub fn basis_index(&self, w: &[u8]) -> Option<usize> {
        self.basis_index.get(w).copied()
    }

    /// `Phi(e_u)` over all words of this weight.
    pub fn row(&self, u: &[u8]) -> &[Laurent] {
        &self.rows[self.index[u]]
    }

    /// The pairing matrix between basis words: `Phi(e_b)_{b'}`.
    pub fn basis_gram(&self) -> Mat<QScalar> {
        self.basis
            .iter()
            .map(|b| self.basis.iter().map(|c| QScalar::from_laurent(self.row(b)[self.index[c]].clone())).collect())
            .collect()
    }

    /// Coordinates of the word `w` in the word basis.
    pub fn reduce(&self, w: &[u8]) -> Vec<QScalar> {
        if let Some(&b) = self.basis_index.get(w) {
            let mut v = vec![QScalar::zero(); self.dim()];
            v[b] = QScalar::one();
            return v;
        }
        if let Some(v) = self.cache.read().unwrap().get(w) {
            return v.clone();
        }
        let row = self.row(w);
        let x: Vec<QScalar> = self.pivots.iter().map(|&p| QScalar::from_laurent(row[p].clone())).collect();
        let v = vec_mat(&x, &self.inv);
        self.cache.write().unwrap().insert(w.to_vec(), v.clone());
        v
    }

    /// Coordinates of an arbitrary vector of pairings `Phi(x)` (pivot entries suffice).
    pub fn reduce_phi(&self, phi: &[QScalar]) -> Vec<QScalar> {
        let x: Vec<QScalar> = self.pivots.iter().map(|&p| phi[p].clone()).collect();
        vec_mat(&x, &self.inv)
    }
}

/// Builds weight spaces on demand, bottom-up.
pub struct WordEngine {
    spaces: RwLock<HashMap<Gamma, std::sync::Arc<WeightSpace>>>,
}

impl Default for WordEngine {
    fn default() -> Self {
        Self::new()
    }
}

impl WordEngine {
    pub fn new() -> Self {
        WordEngine { spaces: RwLock::new(HashMap::new()) }
    }

    pub fn space(&self, rd: &RootDatum, g: Gamma) -> std::sync::Arc<WeightSpace> {
        assert!(g[0] >= 0 && g[1] >= 0, "negative weight {:?}", g);
        if let Some(s) = self.spaces.read().unwrap().get(&g) {
            return s.clone();
        }
        let s = std::sync::Arc::new(self.build(rd, g));
        self.spaces.write().unwrap().entry(g).or_insert(s).clone()
    }

    fn build(&self, rd: &RootDatum, g: Gamma) -> WeightSpace {
        let words = if rd.rank == 1 && g[1] != 0 { vec![] } else { words_of(g) };
        let index: HashMap<Word, usize> = words.iter().enumerate().map(|(k, w)| (w.clone(), k)).collect();
        let n = words.len();
        let mut rows = vec![vec![Laurent::zero(); n]; n];
        if g == [0, 0] {
            rows[0][0] = Laurent::one();
        } else {
            // Phi(e_i e_u')_w = sum_{t: w_t = i} q^{(alpha_i, wt(w_<t))} Phi(e_u')_{w minus t}
            let subs: Vec<Option<std::sync::Arc<WeightSpace>>> = (0..2)
                .map(|i| {
                    if g[i] > 0 {
                        let mut h = g;
                        h[i] -= 1;
                        Some(self.space(rd, h))
                    } else {
                        None
                    }
                })
                .collect();
            for (ui, u) in words.iter().enumerate() {
                let i = u[0] as usize;
                let sub = subs[i].as_ref().unwrap();
                let sub_row = sub.row(&u[1..]);
                let ai = rd.simple_root(i);
                for (wi, w) in words.iter().enumerate() {
                    let mut acc = Laurent::zero();
                    let mut prefix = Weight::ZERO;
                    for t in 0..w.len() {
                        if w[t] as usize == i {
                            let mut rest = w.clone();
                            rest.remove(t);
                            let c = &sub_row[sub.index[&rest]];
                            if !c.is_zero() {
                                acc = acc.add(&c.shift(rd.form_v(ai, prefix)));
                            }
                        }
                        prefix += rd.simple_root(w[t] as usize);
                    }
                    rows[ui][wi] = acc;
                }
            }
        }
        let qrows: Mat<QScalar> = rows.iter().map(|r| r.iter().map(|x| QScalar::from_laurent(x.clone())).collect()).collect();
        let chosen = independent_rows(&qrows);
        let mut mb: Mat<QScalar> = chosen.iter().map(|&k| qrows[k].clone()).collect();
        let pivots = rref(&mut mb);
        let square: Mat<QScalar> = chosen.iter().map(|&k| pivots.iter().map(|&p| qrows[k][p].clone()).collect()).collect();
        let inv = inverse(&square).expect("pivot block is invertible");
        let basis: Vec<Word> = chosen.iter().map(|&k| words[k].clone()).collect();
        let basis_index = basis.iter().enumerate().map(|(k, w)| (w.clone(), k)).collect();
        WeightSpace { gamma: g, words, index, rows, basis, basis_index, pivots, inv, cache: RwLock::new(HashMap::new()) }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Kostant partition function: number of ways to write `g` as a sum of positive roots.
    fn kostant(rd: &RootDatum, g: Gamma) -> usize {
        fn rec(roots: &[Gamma], g: Gamma) -> usize {
            if g == [0, 0] {
                return 1;
            }
            let Some((r, rest)) = roots.split_first() else { return 0 };
            let mut total = 0;
            let mut h = g;
            loop {
                total += rec(rest, h);
                h = [h[0] - r[0], h[1] - r[1]];
                if h[0] < 0 || h[1] < 0 {
                    break;
                }
            }
            total
        }
        let roots: Vec<Gamma> = rd.positive_roots.iter().map(|b| rd.alpha_coords(*b).unwrap()).collect();
        rec(&roots, g)
    }

    #[test]
    fn dimensions_match_partition_counts() {
        for rd in [RootDatum::a1(), RootDatum::a2(), RootDatum::new(crate::rootdata::CartanType::B2, None).unwrap()] {
            let eng = WordEngine::new();
            for a in 0..4 {
                for b in 0..4 {
                    if rd.rank == 1 && b > 0 {
                        continue;
                    }
                    let s = eng.space(&rd, [a, b]);
                    assert_eq!(s.dim(), kostant(&rd, [a, b]), "{:?} {:?}", rd.cartan_type, [a, b]);
                }
            }
        }
    }

    #[test]
    fn serre_relation_reduces_to_zero() {
        // e1^2 e2 - [2] e1 e2 e1 + e2 e1^2 = 0 in A2
        let rd = RootDatum::a2();
        let eng = WordEngine::new();
        let s = eng.space(&rd, [2, 1]);
        let two = crate::qscalars::qint(2, rd.qi_exp(0));
        let a = s.reduce(&[0, 0, 1]);
        let b = s.reduce(&[0, 1, 0]);
        let c = s.reduce(&[1, 0, 0]);
        for k in 0..s.dim() {
            assert!((&(&a[k] - &(&two * &b[k])) + &c[k]).is_zero());
        }
    }
}
