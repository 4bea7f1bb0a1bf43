//! A minimal field interface and exact dense linear algebra over it.

use super::cyc::CycScalar;
use super::qscalar::QScalar;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use std::fmt::Debug;

/// Exact field operations used by the generic linear algebra.
pub trait Field: Clone + PartialEq + Debug {
    fn zero() -> Self;
    fn one() -> Self;
    fn from_i64(a: i64) -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    fn inv(&self) -> Self;
    fn is_one(&self) -> bool {
        *self == Self::one()
    }
}

impl Field for QScalar {
    fn zero() -> Self {
        QScalar::zero()
    }
    fn one() -> Self {
        QScalar::one()
    }
    fn from_i64(a: i64) -> Self {
        QScalar::int(a as i128)
    }
    fn is_zero(&self) -> bool {
        QScalar::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn inv(&self) -> Self {
        QScalar::inv(self)
    }
}

impl Field for CycScalar {
    fn zero() -> Self {
        CycScalar::zero()
    }
    fn one() -> Self {
        CycScalar::one()
    }
    fn from_i64(a: i64) -> Self {
        CycScalar::int(a)
    }
    fn is_zero(&self) -> bool {
        CycScalar::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn inv(&self) -> Self {
        CycScalar::inv(self)
    }
}

impl Field for BigRational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn from_i64(a: i64) -> Self {
        BigRational::from_integer(BigInt::from(a))
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn inv(&self) -> Self {
        self.recip()
    }
}

/// Dense row-major matrix.
pub type Mat<F> = Vec<Vec<F>>;

pub fn zeros<F: Field>(r: usize, c: usize) -> Mat<F> {
    vec![vec![F::zero(); c]; r]
}

pub fn identity<F: Field>(n: usize) -> Mat<F> {
    let mut m = zeros(n, n);
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = F::one();
    }
    m
}

pub fn mat_mul<F: Field>(a: &Mat<F>, b: &Mat<F>) -> Mat<F> {
    let r = a.len();
    let c = if b.is_empty() { 0 } else { b[0].len() };
    let mut out: Mat<F> = zeros(r, c);
    for i in 0..r {
        for (k, aik) in a[i].iter().enumerate() {
            if aik.is_zero() {
                continue;
            }
            for j in 0..c {
                if !b[k][j].is_zero() {
                    out[i][j] = out[i][j].add(&aik.mul(&b[k][j]));
                }
            }
        }
    }
    out
}

pub fn mat_vec<F: Field>(a: &Mat<F>, x: &[F]) -> Vec<F> {
    a.iter()
        .map(|row| {
            row.iter().zip(x).fold(F::zero(), |acc, (p, q)| {
                if p.is_zero() || q.is_zero() {
                    acc
                } else {
                    acc.add(&p.mul(q))
                }
            })
        })
        .collect()
}

/// Row vector times matrix.
pub fn vec_mat<F: Field>(x: &[F], a: &Mat<F>) -> Vec<F> {
    let c = if a.is_empty() { 0 } else { a[0].len() };
    let mut out = vec![F::zero(); c];
    for (k, xk) in x.iter().enumerate() {
        if xk.is_zero() {
            continue;
        }
        for j in 0..c {
            if !a[k][j].is_zero() {
                out[j] = out[j].add(&xk.mul(&a[k][j]));
            }
        }
    }
    out
}

pub fn transpose<F: Field>(a: &Mat<F>) -> Mat<F> {
    if a.is_empty() {
        return vec![];
    }
    (0..a[0].len()).map(|j| a.iter().map(|r| r[j].clone()).collect()).collect()
}

/// Reduced row echelon form in place; returns pivot columns.
pub fn rref<F: Field>(m: &mut Mat<F>) -> Vec<usize> {
    let rows = m.len();
    if rows == 0 {
        return vec![];
    }
    let cols = m[0].len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].inv();
        for j in c..cols {
            m[r][j] = m[r][j].mul(&inv);
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in c..cols {
                    if !m[r][j].is_zero() {
                        let t = f.mul(&m[r][j]);
                        m[i][j] = m[i][j].sub(&t);
                    }
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank<F: Field>(m: &Mat<F>) -> usize {
    let mut a = m.clone();
    rref(&mut a).len()
}

/// Inverse of a square matrix, `None` if singular.
pub fn inverse<F: Field>(m: &Mat<F>) -> Option<Mat<F>> {
    let n = m.len();
    let mut a: Mat<F> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { F::one() } else { F::zero() }));
            r
        })
        .collect();
    let piv = rref(&mut a);
    if n > 0 && (piv.len() < n || piv[n - 1] != n - 1) {
        return None;
    }
    Some(a.into_iter().map(|r| r[n..].to_vec()).collect())
}

pub fn determinant<F: Field>(m: &Mat<F>) -> F {
    let n = m.len();
    let mut a = m.clone();
    let mut det = F::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !a[i][c].is_zero()) else {
            return F::zero();
        };
        if p != c {
            a.swap(p, c);
            det = det.neg();
        }
        det = det.mul(&a[c][c]);
        let inv = a[c][c].inv();
        for i in c + 1..n {
            if a[i][c].is_zero() {
                continue;
            }
            let f = a[i][c].mul(&inv);
            for j in c..n {
                let t = f.mul(&a[c][j]);
                a[i][j] = a[i][j].sub(&t);
            }
        }
    }
    det
}

/// Basis of the right kernel `{x : m x = 0}` with `ncols` unknowns.
pub fn nullspace<F: Field>(m: &Mat<F>, ncols: usize) -> Vec<Vec<F>> {
    let mut a = m.clone();
    let piv = rref(&mut a);
    let free: Vec<usize> = (0..ncols).filter(|c| !piv.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut x = vec![F::zero(); ncols];
            x[f] = F::one();
            for (r, &p) in piv.iter().enumerate() {
                x[p] = a[r][f].neg();
            }
            x
        })
        .collect()
}

/// Solves `x m = b` for a row vector `x`; `None` if inconsistent.
pub fn solve_left<F: Field>(m: &Mat<F>, b: &[F]) -> Option<Vec<F>> {
    let mt = transpose(m);
    solve(&mt, b, m.len())
}

/// Solves `m x = b` with `ncols` unknowns; `None` if inconsistent.
pub fn solve<F: Field>(m: &Mat<F>, b: &[F], ncols: usize) -> Option<Vec<F>> {
    let mut a: Mat<F> = m
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut r = row.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    let piv = rref(&mut a);
    if piv.last() == Some(&ncols) {
        return None;
    }
    let mut x = vec![F::zero(); ncols];
    for (r, &p) in piv.iter().enumerate() {
        x[p] = a[r][ncols].clone();
    }
    Some(x)
}

/// Indices of a maximal set of linearly independent rows, chosen greedily in order.
pub fn independent_rows<F: Field>(m: &Mat<F>) -> Vec<usize> {
    let mut basis: Vec<(usize, Vec<F>)> = Vec::new(); // (pivot col, reduced row)
    let mut chosen = Vec::new();
    for (i, row) in m.iter().enumerate() {
        let mut r = row.clone();
        for (pc, b) in &basis {
            if !r[*pc].is_zero() {
                let f = r[*pc].clone();
                for j in 0..r.len() {
                    if !b[j].is_zero() {
                        r[j] = r[j].sub(&f.mul(&b[j]));
                    }
                }
            }
        }
        if let Some(pc) = r.iter().position(|x| !x.is_zero()) {
            let inv = r[pc].inv();
            for x in r.iter_mut() {
                *x = x.mul(&inv);
            }
            basis.push((pc, r));
            chosen.push(i);
        }
    }
    chosen
}

pub fn map_mat<F, G>(m: &Mat<F>, f: impl Fn(&F) -> G) -> Mat<G> {
    m.iter().map(|r| r.iter().map(&f).collect()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(a: i64) -> BigRational {
        BigRational::from_i64(a)
    }

    #[test]
    fn inverse_and_rank() {
        let m = vec![vec![q(2), q(1)], vec![q(1), q(1)]];
        let inv = inverse(&m).unwrap();
        assert_eq!(mat_mul(&m, &inv), identity(2));
        let s = vec![vec![q(1), q(2)], vec![q(2), q(4)]];
        assert!(inverse(&s).is_none());
        assert_eq!(rank(&s), 1);
        assert_eq!(determinant(&m), q(1));
        let ns = nullspace(&s, 2);
        assert_eq!(ns.len(), 1);
        assert!(mat_vec(&s, &ns[0]).iter().all(Field::is_zero));
    }

    #[test]
    fn independent_row_selection() {
        let m = vec![vec![q(1), q(1)], vec![q(2), q(2)], vec![q(0), q(1)]];
        assert_eq!(independent_rows(&m), vec![0, 2]);
        let x = solve_left(&vec![vec![q(1), q(1)], vec![q(0), q(1)]], &[q(3), q(5)]).unwrap();
        assert_eq!(x, vec![q(3), q(2)]);
    }
}
