//! Root data of rank at most 2: Cartan matrices, weights, the invariant form,
//! Weyl group words and the positive roots attached to a reduced word of `w0`.
//!
//! Weights are stored in the basis of fundamental weights. Indices are 0-based
//! in the API and 1-based in text (configuration files and printed words).

use num_rational::Ratio;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};
use thiserror::Error;

/// Largest supported rank.
pub const MAX_RANK: usize = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CartanType {
    A1,
    A2,
    B2,
}

impl CartanType {
    pub fn parse(s: &str) -> Result<Self, RootDataError> {
        match s.trim() {
            "A1" | "a1" => Ok(CartanType::A1),
            "A2" | "a2" => Ok(CartanType::A2),
            "B2" | "b2" => Ok(CartanType::B2),
            other => Err(RootDataError::Unsupported(other.to_string())),
        }
    }
}

impl fmt::Display for CartanType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            CartanType::A1 => "A1",
            CartanType::A2 => "A2",
            CartanType::B2 => "B2",
        };
        write!(f, "{}", s)
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RootDataError {
    #[error("unsupported Cartan type '{0}'")]
    Unsupported(String),
    #[error("word {0:?} is not a reduced expression of the longest Weyl group element")]
    NotReducedW0(Vec<usize>),
    #[error("index {0} out of range for rank {1}")]
    IndexOutOfRange(usize, usize),
}

/// An integral weight in fundamental-weight coordinates.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
pub struct Weight(pub [i32; MAX_RANK]);

impl Weight {
    pub const ZERO: Weight = Weight([0; MAX_RANK]);

    pub fn new(c: &[i32]) -> Self {
        let mut w = [0; MAX_RANK];
        w[..c.len()].copy_from_slice(c);
        Weight(w)
    }

    pub fn unit(i: usize) -> Self {
        let mut w = [0; MAX_RANK];
        w[i] = 1;
        Weight(w)
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&x| x == 0)
    }

    pub fn is_dominant(&self) -> bool {
        self.0.iter().all(|&x| x >= 0)
    }

    pub fn get(&self, i: usize) -> i32 {
        self.0[i]
    }
}

impl Add for Weight {
    type Output = Weight;
    fn add(self, o: Weight) -> Weight {
        Weight([self.0[0] + o.0[0], self.0[1] + o.0[1]])
    }
}

impl Sub for Weight {
    type Output = Weight;
    fn sub(self, o: Weight) -> Weight {
        Weight([self.0[0] - o.0[0], self.0[1] - o.0[1]])
    }
}

impl Neg for Weight {
    type Output = Weight;
    fn neg(self) -> Weight {
        Weight([-self.0[0], -self.0[1]])
    }
}

impl Mul<i32> for Weight {
    type Output = Weight;
    fn mul(self, k: i32) -> Weight {
        Weight([self.0[0] * k, self.0[1] * k])
    }
}

impl AddAssign for Weight {
    fn add_assign(&mut self, o: Weight) {
        *self = *self + o;
    }
}

impl SubAssign for Weight {
    fn sub_assign(&mut self, o: Weight) {
        *self = *self - o;
    }
}

impl fmt::Debug for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.0[0], self.0[1])
    }
}

/// Cartan data for one supported type together with a chosen reduced word of `w0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootDatum {
    pub cartan_type: CartanType,
    pub rank: usize,
    /// `a_ij = <alpha_j, alpha_i^vee>`
    pub cartan: [[i32; MAX_RANK]; MAX_RANK],
    /// `d_i = (alpha_i, alpha_i) / 2`
    pub sym: [i32; MAX_RANK],
    /// `|Lambda / Q|`, also the denominator of the form on `Lambda`.
    pub index: i32,
    /// `index * (w_i, w_k)`, an integer matrix.
    gram: [[i32; MAX_RANK]; MAX_RANK],
    pub w0_word: Vec<usize>,
    /// Positive roots `beta_k` in the order given by `w0_word`.
    pub betas: Vec<Weight>,
    pub positive_roots: Vec<Weight>,
    pub rho: Weight,
}

impl RootDatum {
    /// Builds the datum; `w0_word` (0-based) defaults to the lexicographically
    /// smallest reduced word.
    pub fn new(t: CartanType, w0_word: Option<Vec<usize>>) -> Result<Self, RootDataError> {
        let (rank, cartan, sym) = match t {
            CartanType::A1 => (1, [[2, 0], [0, 2]], [1, 1]),
            CartanType::A2 => (2, [[2, -1], [-1, 2]], [1, 1]),
            // alpha_1 long
            CartanType::B2 => (2, [[2, -1], [-2, 2]], [2, 1]),
        };
        let index = if rank == 1 { 2 } else { cartan[0][0] * cartan[1][1] - cartan[0][1] * cartan[1][0] };
        // adjugate of the Cartan matrix gives index * C^-1
        let adj = if rank == 1 { [[1, 0], [0, 0]] } else { [[cartan[1][1], -cartan[0][1]], [-cartan[1][0], cartan[0][0]]] };
        let mut gram = [[0; MAX_RANK]; MAX_RANK];
        for i in 0..rank {
            for k in 0..rank {
                gram[i][k] = adj[i][k] * sym[i];
            }
        }
        let rho = Weight::new(&vec![1; rank]);
        let mut rd = RootDatum {
            cartan_type: t,
            rank,
            cartan,
            sym,
            index,
            gram,
            w0_word: vec![],
            betas: vec![],
            positive_roots: vec![],
            rho,
        };
        rd.positive_roots = rd.enumerate_positive_roots();
        let n = rd.positive_roots.len();
        let word = match w0_word {
            Some(w) => {
                if let Some(&i) = w.iter().find(|&&i| i >= rank) {
                    return Err(RootDataError::IndexOutOfRange(i + 1, rank));
                }
                if w.len() != n || rd.apply_word(&w, rho) != -rho {
                    return Err(RootDataError::NotReducedW0(w.iter().map(|i| i + 1).collect()));
                }
                w
            }
            None => rd.default_w0_word(n),
        };
        rd.betas = (0..n)
            .map(|k| rd.apply_word(&word[..k], rd.simple_root(word[k])))
            .collect();
        rd.w0_word = word;
        Ok(rd)
    }

    pub fn a1() -> Self {
        Self::new(CartanType::A1, None).unwrap()
    }

    pub fn a2() -> Self {
        Self::new(CartanType::A2, None).unwrap()
    }

    /// Lexicographically smallest word of length `n` sending `rho` to `-rho`.
    fn default_w0_word(&self, n: usize) -> Vec<usize> {
        let total = self.rank.pow(n as u32);
        for code in 0..total {
            let mut w = vec![0; n];
            let mut c = code;
            for k in (0..n).rev() {
                w[k] = c % self.rank;
                c /= self.rank;
            }
            if self.apply_word(&w, self.rho) == -self.rho {
                return w;
            }
        }
        unreachable!("w0 always has a reduced word")
    }

    fn enumerate_positive_roots(&self) -> Vec<Weight> {
        // Weyl orbit of the simple roots, keeping the positive ones
        let mut roots: Vec<Weight> = (0..self.rank).map(|i| self.simple_root(i)).collect();
        let mut k = 0;
        while k < roots.len() {
            for i in 0..self.rank {
                let r = self.reflect(i, roots[k]);
                if !roots.contains(&r) {
                    roots.push(r);
                }
            }
            k += 1;
        }
        let mut pos: Vec<Weight> = roots
            .into_iter()
            .filter(|r| self.alpha_coords(*r).is_some_and(|c| c.iter().all(|&x| x >= 0)))
            .collect();
        pos.sort_by_key(|r| (self.height(*r), self.alpha_coords(*r)));
        pos
    }

    /// Number of positive roots.
    pub fn n_pos(&self) -> usize {
        self.positive_roots.len()
    }

    /// `alpha_i` in fundamental-weight coordinates (column `i` of the Cartan matrix).
    pub fn simple_root(&self, i: usize) -> Weight {
        let mut w = [0; MAX_RANK];
        for (k, wk) in w.iter_mut().enumerate().take(self.rank) {
            *wk = self.cartan[k][i];
        }
        Weight(w)
    }

    pub fn fundamental_weight(&self, i: usize) -> Weight {
        Weight::unit(i)
    }

    /// `index * (lambda, mu)`: the exponent of `v` in `q^(lambda, mu)`.
    pub fn form_v(&self, l: Weight, m: Weight) -> i32 {
        let mut s = 0;
        for i in 0..self.rank {
            for k in 0..self.rank {
                s += l.0[i] * self.gram[i][k] * m.0[k];
            }
        }
        s
    }

    /// The invariant form `(lambda, mu)` as an exact rational.
    pub fn form(&self, l: Weight, m: Weight) -> Ratio<i64> {
        Ratio::new(self.form_v(l, m) as i64, self.index as i64)
    }

    /// `v`-exponent of `q_i = q^(d_i)`.
    pub fn qi_exp(&self, i: usize) -> i32 {
        self.sym[i] * self.index
    }

    /// `v`-exponent of `q_beta` for a root `beta`.
    pub fn qbeta_exp(&self, beta: Weight) -> i32 {
        self.form_v(beta, beta) / 2
    }

    /// `<lambda, alpha_i^vee>`
    pub fn coroot_pairing(&self, l: Weight, i: usize) -> i32 {
        l.0[i]
    }

    pub fn reflect(&self, i: usize, l: Weight) -> Weight {
        l - self.simple_root(i) * l.0[i]
    }

    /// Applies `s_{w[0]} ... s_{w[k-1]}` to `l`; the rightmost reflection acts first.
    pub fn apply_word(&self, w: &[usize], l: Weight) -> Weight {
        w.iter().rev().fold(l, |acc, &i| self.reflect(i, acc))
    }

    /// Twisted action exponent `(w lambda - lambda, rho)` and image `w lambda`.
    pub fn dot_twist(&self, w: &[usize], l: Weight) -> (Ratio<i64>, Weight) {
        let img = self.apply_word(w, l);
        (self.form(img - l, self.rho), img)
    }

    /// Same exponent scaled to a power of `v`.
    pub fn dot_twist_v(&self, w: &[usize], l: Weight) -> (i32, Weight) {
        let img = self.apply_word(w, l);
        (self.form_v(img - l, self.rho), img)
    }

    /// Two words give the same Weyl group element iff they agree on `rho`.
    pub fn weyl_equal(&self, w1: &[usize], w2: &[usize]) -> bool {
        self.apply_word(w1, self.rho) == self.apply_word(w2, self.rho)
    }

    /// A shortest word for every Weyl group element, in breadth-first order.
    pub fn weyl_group(&self) -> Vec<Vec<usize>> {
        let mut words: Vec<Vec<usize>> = vec![vec![]];
        let mut images = vec![self.rho];
        let mut k = 0;
        while k < words.len() {
            for i in 0..self.rank {
                let mut w = vec![i];
                w.extend(&words[k]);
                let img = self.apply_word(&w, self.rho);
                if !images.contains(&img) {
                    images.push(img);
                    words.push(w);
                }
            }
            k += 1;
        }
        words
    }

    /// Coordinates of a root-lattice element in the simple-root basis.
    pub fn alpha_coords(&self, l: Weight) -> Option<[i32; MAX_RANK]> {
        if self.rank == 1 {
            return if l.0[0] % 2 == 0 { Some([l.0[0] / 2, 0]) } else { None };
        }
        // alpha coords c solve C c = l; c = adj(C) l / det
        let c = &self.cartan;
        let det = self.index;
        let x = c[1][1] * l.0[0] - c[0][1] * l.0[1];
        let y = -c[1][0] * l.0[0] + c[0][0] * l.0[1];
        if x % det != 0 || y % det != 0 {
            None
        } else {
            Some([x / det, y / det])
        }
    }

    pub fn from_alpha_coords(&self, c: [i32; MAX_RANK]) -> Weight {
        (0..self.rank).fold(Weight::ZERO, |acc, j| acc + self.simple_root(j) * c[j])
    }

    pub fn in_root_lattice(&self, l: Weight) -> bool {
        self.alpha_coords(l).is_some()
    }

    /// `ht(gamma)` for `gamma` in the root lattice.
    pub fn height(&self, l: Weight) -> i32 {
        self.alpha_coords(l).expect("height of a non-root-lattice weight").iter().sum()
    }

    /// True for nonzero `gamma` in `Q^+`; zero counts as well when `allow_zero`.
    pub fn in_positive_cone(&self, l: Weight, allow_zero: bool) -> bool {
        match self.alpha_coords(l) {
            Some(c) => c.iter().all(|&x| x >= 0) && (allow_zero || !l.is_zero()),
            None => false,
        }
    }

    /// Weyl dimension formula for a dominant weight.
    pub fn weyl_dimension(&self, l: Weight) -> i64 {
        let mut num = Ratio::from_integer(1i64);
        for &b in &self.positive_roots {
            num *= self.form(l + self.rho, b) / self.form(self.rho, b);
        }
        assert!(num.is_integer());
        num.to_integer()
    }

    /// Formats a weight as a combination of `w1`, `w2`.
    pub fn fmt_weight(&self, l: Weight) -> String {
        let mut s = String::new();
        for i in 0..self.rank {
            let c = l.0[i];
            if c == 0 {
                continue;
            }
            let sign = if c < 0 { "-" } else if s.is_empty() { "" } else { "+" };
            let mag = c.abs();
            if mag == 1 {
                s += &format!("{}w{}", sign, i + 1);
            } else {
                s += &format!("{}{}w{}", sign, mag, i + 1);
            }
        }
        if s.is_empty() {
            "0".into()
        } else {
            s
        }
    }

    /// Parses `-w1+2w2`, `a1+a2`, `2*w1`, `0`; `a_i` denotes simple roots.
    pub fn parse_weight(&self, s: &str) -> Result<Weight, String> {
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if t == "0" {
            return Ok(Weight::ZERO);
        }
        let mut acc = Weight::ZERO;
        let bytes = t.as_bytes();
        let mut p = 0;
        while p < bytes.len() {
            let mut sign = 1;
            if bytes[p] == b'+' {
                p += 1;
            } else if bytes[p] == b'-' {
                sign = -1;
                p += 1;
            }
            let start = p;
            while p < bytes.len() && bytes[p].is_ascii_digit() {
                p += 1;
            }
            let coef: i32 = if start == p { 1 } else { t[start..p].parse().map_err(|_| "bad coefficient")? };
            if p < bytes.len() && bytes[p] == b'*' {
                p += 1;
            }
            if p >= bytes.len() {
                if start != p {
                    return Err(format!("bare integer in weight '{}'", s));
                }
                return Err(format!("dangling sign in weight '{}'", s));
            }
            let kind = bytes[p];
            p += 1;
            let istart = p;
            while p < bytes.len() && bytes[p].is_ascii_digit() {
                p += 1;
            }
            let idx: usize = t[istart..p].parse().map_err(|_| format!("missing index in weight '{}'", s))?;
            if idx == 0 || idx > self.rank {
                return Err(format!("index {} out of range in weight '{}'", idx, s));
            }
            let basis = match kind {
                b'w' => Weight::unit(idx - 1),
                b'a' => self.simple_root(idx - 1),
                _ => return Err(format!("unknown weight symbol '{}' in '{}'", kind as char, s)),
            };
            acc += basis * (sign * coef);
        }
        Ok(acc)
    }

    /// JSON summary: type, 1-based `w0` word, positive roots in simple-root coordinates.
    pub fn summary(&self) -> RootDatumSummary {
        RootDatumSummary {
            cartan_type: self.cartan_type.to_string(),
            w0_word: self.w0_word.iter().map(|i| i + 1).collect(),
            positive_roots: self
                .betas
                .iter()
                .map(|b| self.alpha_coords(*b).unwrap()[..self.rank].to_vec())
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RootDatumSummary {
    #[serde(rename = "type")]
    pub cartan_type: String,
    pub w0_word: Vec<usize>,
    pub positive_roots: Vec<Vec<i32>>,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_one() {
        let rd = RootDatum::a1();
        assert_eq!(rd.n_pos(), 1);
        assert_eq!(rd.index, 2);
        assert_eq!(rd.betas, vec![rd.simple_root(0)]);
        assert_eq!(rd.rho, Weight::unit(0));
        assert_eq!(rd.form(Weight::unit(0), Weight::unit(0)), Ratio::new(1, 2));
    }

    #[test]
    fn a2_betas_and_form() {
        let rd = RootDatum::new(CartanType::A2, Some(vec![0, 1, 0])).unwrap();
        let (a1, a2) = (rd.simple_root(0), rd.simple_root(1));
        assert_eq!(rd.betas, vec![a1, a1 + a2, a2]);
        let w1 = Weight::unit(0);
        assert_eq!(rd.form(w1, w1), Ratio::new(2, 3));
        assert_eq!(rd.form(w1, a1), Ratio::from_integer(1));
        assert_eq!(rd.form(a1, a2), Ratio::from_integer(-1));
        let other = RootDatum::new(CartanType::A2, Some(vec![1, 0, 1])).unwrap();
        assert_eq!(other.betas, vec![a2, a1 + a2, a1]);
    }

    #[test]
    fn rejects_bad_words() {
        assert!(matches!(RootDatum::new(CartanType::A2, Some(vec![0, 0, 1])), Err(RootDataError::NotReducedW0(_))));
        assert!(matches!(RootDatum::new(CartanType::A2, Some(vec![0, 1])), Err(RootDataError::NotReducedW0(_))));
        assert!(matches!(RootDatum::new(CartanType::A1, Some(vec![1])), Err(RootDataError::IndexOutOfRange(2, 1))));
        assert!(CartanType::parse("G2").is_err());
    }

    #[test]
    fn b2_data() {
        let rd = RootDatum::new(CartanType::B2, None).unwrap();
        assert_eq!(rd.n_pos(), 4);
        assert_eq!(rd.w0_word, vec![0, 1, 0, 1]);
        let (w1, w2) = (Weight::unit(0), Weight::unit(1));
        assert_eq!(rd.form(w1, w1), Ratio::from_integer(2));
        assert_eq!(rd.form(w1, w2), Ratio::from_integer(1));
        assert_eq!(rd.form(w2, w2), Ratio::from_integer(1));
        // short roots have length 2
        assert_eq!(rd.form(rd.simple_root(1), rd.simple_root(1)), Ratio::from_integer(2));
        let mut b = rd.betas.clone();
        b.sort_by_key(|r| (rd.height(*r), rd.alpha_coords(*r)));
        assert_eq!(b, rd.positive_roots);
    }

    #[test]
    fn dot_twist_examples() {
        let rd = RootDatum::a1();
        let (e, img) = rd.dot_twist(&[0], Weight::new(&[2]));
        assert_eq!((e, img), (Ratio::from_integer(-2), Weight::new(&[-2])));
        assert_eq!(rd.dot_twist(&[], Weight::new(&[5])), (Ratio::from_integer(0), Weight::new(&[5])));
        let rd = RootDatum::a2();
        let l = Weight::new(&[2, 0]);
        let (e, img) = rd.dot_twist(&[0], l);
        assert_eq!(e, Ratio::from_integer(-2));
        assert_eq!(img, l - rd.simple_root(0) * 2);
    }

    #[test]
    fn weyl_groups_and_dimensions() {
        assert_eq!(RootDatum::a1().weyl_group().len(), 2);
        assert_eq!(RootDatum::a2().weyl_group().len(), 6);
        assert_eq!(RootDatum::new(CartanType::B2, None).unwrap().weyl_group().len(), 8);
        let rd = RootDatum::a2();
        assert_eq!(rd.weyl_dimension(Weight::new(&[1, 0])), 3);
        assert_eq!(rd.weyl_dimension(Weight::new(&[1, 1])), 8);
        assert_eq!(RootDatum::a1().weyl_dimension(Weight::new(&[3])), 4);
    }

    #[test]
    fn weight_text() {
        let rd = RootDatum::a2();
        assert_eq!(rd.parse_weight("-w1+w2").unwrap(), Weight::new(&[-1, 1]));
        assert_eq!(rd.parse_weight("a1").unwrap(), Weight::new(&[2, -1]));
        assert_eq!(rd.parse_weight("2*w2 - a2").unwrap(), Weight::new(&[1, 0]));
        assert_eq!(rd.fmt_weight(Weight::new(&[-1, 2])), "-w1+2w2");
        assert!(rd.parse_weight("w3").is_err());
    }
}
