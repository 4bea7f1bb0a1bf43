//! The algebra `E = A (x) U (x) K[Lambda]`, the elements `Omega_1`, `Omega_2`,
//! their operator realization on windows of `A`, the braid action `T star`
//! and membership in the `Omega`-ideal that defines `D'`.
//!
//! The `A`-factor of a term is a basis vector of some `A(lambda)` in module
//! coordinates, so every computation here is exact over `Q(v)`. Statements at
//! `zeta` are certified by checking that all coefficients involved are regular
//! at the root, for lattice bases of `A_A` and the integral dual bases.

use crate::pairing::{DualNorm, Pairing, PairingError};
use crate::qcoord::{CoordRing, FElem, Level, QcoordError};
use crate::qreps::gammas_up_to;
use crate::qscalars::field::{inverse, mat_mul, solve, zeros};
use crate::qscalars::{qfact, CycScalar, Mat, QScalar};
use crate::rootdata::Weight;
use crate::uqalg::{Gamma, TermKey, UElem, Uq};
use std::collections::{BTreeMap, BTreeSet};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DiffError {
    #[error(transparent)]
    Coord(#[from] QcoordError),
    #[error(transparent)]
    Pairing(#[from] PairingError),
    #[error(transparent)]
    Module(#[from] crate::qreps::QrepsError),
    #[error("window: {0}")]
    Window(String),
}

/// One normally ordered term `phi_{grade, idx} u e(e)`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct EKey {
    pub grade: Weight,
    pub idx: usize,
    pub u: TermKey,
    pub e: Weight,
}

#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct EElem {
    pub terms: BTreeMap<EKey, QScalar>,
}

impl EElem {
    pub fn zero() -> Self {
        EElem { terms: BTreeMap::new() }
    }

    pub fn add_term(&mut self, k: EKey, c: QScalar) {
        if c.is_zero() {
            return;
        }
        let s = match self.terms.get(&k) {
            Some(x) => x + &c,
            None => c,
        };
        if s.is_zero() {
            self.terms.remove(&k);
        } else {
            self.terms.insert(k, s);
        }
    }

    pub fn add(&self, o: &EElem) -> EElem {
        let mut r = self.clone();
        for (k, c) in &o.terms {
            r.add_term(k.clone(), c.clone());
        }
        r
    }

    pub fn scale(&self, c: &QScalar) -> EElem {
        let mut r = EElem::zero();
        for (k, x) in &self.terms {
            r.add_term(k.clone(), x * c);
        }
        r
    }

    pub fn sub(&self, o: &EElem) -> EElem {
        self.add(&o.scale(&-QScalar::one()))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// `sum_j vec_j phi_{grade, j} * u * e(e)`.
    pub fn from_parts(grade: Weight, vec: &[QScalar], u: &UElem, e: Weight) -> EElem {
        let mut r = EElem::zero();
        for (j, x) in vec.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (t, c) in &u.terms {
                r.add_term(EKey { grade, idx: j, u: t.clone(), e }, x * c);
            }
        }
        r
    }

    pub fn from_a(phi: &FElem) -> EElem {
        let mut r = EElem::zero();
        for (l, v) in &phi.comps {
            r = r.add(&Self::from_parts(*l, v, &UElem::one(), Weight::ZERO));
        }
        r
    }

    pub fn from_u(u: &UElem) -> EElem {
        Self::from_parts(Weight::ZERO, &[QScalar::one()], u, Weight::ZERO)
    }

    /// `e(mu)`
    pub fn from_e(mu: Weight) -> EElem {
        Self::from_parts(Weight::ZERO, &[QScalar::one()], &UElem::one(), mu)
    }

    pub fn one() -> EElem {
        Self::from_e(Weight::ZERO)
    }
}

/// An operator on a window of `A`: blocks `A(mu) -> A(nu)` indexed by `(mu, nu)`.
pub type DOp = BTreeMap<(Weight, Weight), Mat<QScalar>>;

fn prune_op(mut d: DOp) -> DOp {
    d.retain(|_, m| m.iter().any(|r| r.iter().any(|x| !x.is_zero())));
    d
}

fn unit(n: usize, j: usize) -> Vec<QScalar> {
    let mut v = vec![QScalar::zero(); n];
    v[j] = QScalar::one();
    v
}

/// Which `Omega`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Which {
    One,
    Two,
    Difference,
}

/// Result of the membership test in the `Omega`-ideal.
#[derive(Debug, Clone, PartialEq)]
pub struct Membership {
    pub in_ideal: bool,
    /// Number of generators `a Omega(psi) k e(mu)` tried.
    pub generators: usize,
    /// Every coefficient of the found combination is regular at the root.
    pub integral: Option<bool>,
}

/// Outcome of a localized identity check.
#[derive(Debug, Clone, PartialEq)]
pub struct LocalReport {
    /// Both sides, after left multiplication by `s`, are integral.
    pub sides_integral: bool,
    pub membership: Membership,
}

impl LocalReport {
    pub fn holds(&self) -> bool {
        self.sides_integral && self.membership.in_ideal && self.membership.integral != Some(false)
    }
}

/// `E` over a coordinate ring.
pub struct EAlgebra<'r, 'a> {
    pub ring: &'r CoordRing<'a>,
    pub pairing: Pairing<'a>,
}

impl<'r, 'a> EAlgebra<'r, 'a> {
    pub fn new(ring: &'r CoordRing<'a>) -> Self {
        EAlgebra { ring, pairing: Pairing::new(ring.u) }
    }

    fn u(&self) -> &'a Uq {
        self.ring.u
    }

    fn vp(&self, a: Weight, b: Weight) -> QScalar {
        QScalar::v_pow(self.u().rd.form_v(a, b))
    }

    /// `t . v` for `v in A(grade)`.
    fn act_vec(&self, t: &UElem, grade: Weight, v: &[QScalar]) -> Result<Vec<QScalar>, DiffError> {
        let c = self.ring.component(grade)?;
        Ok(c.module.act(self.u(), t, v))
    }

    fn basis(&self, grade: Weight, j: usize) -> Result<FElem, DiffError> {
        Ok(self.ring.basis_f(grade, j)?)
    }

    /// Product in `E` using `u phi = sum (u_(0) . phi) u_(1)` and
    /// `e(lambda) phi = q^{(lambda, mu)} phi e(lambda)`.
    pub fn mul(&self, a: &EElem, b: &EElem) -> Result<EElem, DiffError> {
        let u = self.u();
        let mut out = EElem::zero();
        for (ka, ca) in &a.terms {
            let dx = u.coproduct_key(&ka.u);
            let phi = self.basis(ka.grade, ka.idx)?;
            for (kb, cb) in &b.terms {
                let c0 = &(ca * cb) * &self.vp(ka.e, kb.grade);
                let dim = self.ring.component(kb.grade)?.dim();
                let psi = unit(dim, kb.idx);
                for (keys, d) in &dx.terms {
                    let v0 = self.act_vec(&UElem::term(keys[0].clone(), QScalar::one()), kb.grade, &psi)?;
                    if v0.iter().all(|x| x.is_zero()) {
                        continue;
                    }
                    let prod = self.ring.multiply_a(&phi, &FElem::homogeneous(kb.grade, v0))?;
                    let up = u.mul_key(&keys[1], &kb.u);
                    let c1 = &c0 * d;
                    for (g, vec) in &prod.comps {
                        for (j, x) in vec.iter().enumerate() {
                            if x.is_zero() {
                                continue;
                            }
                            for (t, y) in &up.terms {
                                out.add_term(EKey { grade: *g, idx: j, u: t.clone(), e: ka.e + kb.e }, &(&c1 * x) * y);
                            }
                        }
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn mul_all(&self, xs: &[&EElem]) -> Result<EElem, DiffError> {
        let mut r = EElem::one();
        for x in xs {
            r = self.mul(&r, x)?;
        }
        Ok(r)
    }

    fn depth(&self, lambda: Weight) -> i32 {
        let rd = &self.u().rd;
        rd.height(lambda - rd.apply_word(&rd.w0_word, lambda))
    }

    /// `Omega_1`, `Omega_2` or their difference, extended linearly over weight vectors.
    pub fn omega(&self, phi: &FElem, which: Which) -> Result<EElem, DiffError> {
        match which {
            Which::Difference => Ok(self.omega(phi, Which::One)?.sub(&self.omega(phi, Which::Two)?)),
            _ => {
                let mut r = EElem::zero();
                for (l, v) in &phi.comps {
                    for (j, c) in v.iter().enumerate() {
                        if !c.is_zero() {
                            r = r.add(&self.omega_basis(*l, j, which)?.scale(c));
                        }
                    }
                }
                Ok(r)
            }
        }
    }

    /// `Omega_1(phi) = sum_p (y_p . phi) x_p k_{-xi} e(lambda)` and
    /// `Omega_2(phi) = sum_p ((S x_p) . phi) y_p k_{beta_p} k_xi e(-lambda)`
    /// for the basis vector `j` of `A(lambda)` of weight `xi`.
    fn omega_basis(&self, lambda: Weight, j: usize, which: Which) -> Result<EElem, DiffError> {
        let u = self.u();
        let rd = &u.rd;
        let c = self.ring.component(lambda)?;
        let xi = c.weights()[j];
        let phi = unit(c.dim(), j);
        let mut r = EElem::zero();
        for g in gammas_up_to(rd, self.depth(lambda)) {
            let beta = rd.from_alpha_coords(g);
            let norm = if which == Which::One { DualNorm::YDivided } else { DualNorm::XDivided };
            let db = self.pairing.dual_bases(g, norm)?;
            for (x, y) in db.xs.iter().zip(&db.ys) {
                let (v, upart, e) = if which == Which::One {
                    (c.module.act(u, y, &phi), u.mul(x, &u.k(-xi)), lambda)
                } else {
                    (c.module.act(u, &u.antipode(x), &phi), u.mul_all(&[y, &u.k(beta), &u.k(xi)]), -lambda)
                };
                if v.iter().all(|x| x.is_zero()) {
                    continue;
                }
                r = r.add(&EElem::from_parts(lambda, &v, &upart, e));
            }
        }
        Ok(r)
    }

    /// Image of `a` in `End(A)` restricted to the grades `window`.
    pub fn as_operator(&self, a: &EElem, window: &[Weight]) -> Result<DOp, DiffError> {
        let mut out: DOp = BTreeMap::new();
        for &mu in window {
            let dmu = self.ring.component(mu)?.dim();
            for b in 0..dmu {
                for (k, c) in &a.terms {
                    let target = mu + k.grade;
                    let dt = self.ring.component(target)?.dim();
                    let w = self.act_vec(&UElem::term(k.u.clone(), QScalar::one()), mu, &unit(dmu, b))?;
                    if w.iter().all(|x| x.is_zero()) {
                        continue;
                    }
                    let p = self.ring.multiply_a(&self.basis(k.grade, k.idx)?, &FElem::homogeneous(mu, w))?;
                    let s = c * &self.vp(k.e, mu);
                    let block = out.entry((mu, target)).or_insert_with(|| zeros(dt, dmu));
                    if let Some(col) = p.comps.get(&target) {
                        for (r, x) in col.iter().enumerate() {
                            if !x.is_zero() {
                                block[r][b] = &block[r][b] + &(&s * x);
                            }
                        }
                    }
                }
            }
        }
        Ok(prune_op(out))
    }

    /// `r_phi(psi) = psi phi` on the window.
    pub fn r_operator(&self, phi: &FElem, window: &[Weight]) -> Result<DOp, DiffError> {
        let mut out: DOp = BTreeMap::new();
        for &mu in window {
            let dmu = self.ring.component(mu)?.dim();
            for b in 0..dmu {
                let p = self.ring.multiply_a(&self.basis(mu, b)?, phi)?;
                for (g, col) in &p.comps {
                    let dt = col.len();
                    let block = out.entry((mu, *g)).or_insert_with(|| zeros(dt, dmu));
                    for (r, x) in col.iter().enumerate() {
                        block[r][b] = &block[r][b] + x;
                    }
                }
            }
        }
        Ok(prune_op(out))
    }

    /// Both expressions for `r_phi` agree with right multiplication on the window.
    pub fn r_phi_agreement(&self, phi: &FElem, window: &[Weight]) -> Result<bool, DiffError> {
        let r = self.r_operator(phi, window)?;
        let o1 = self.as_operator(&self.omega(phi, Which::One)?, window)?;
        let o2 = self.as_operator(&self.omega(phi, Which::Two)?, window)?;
        Ok(r == o1 && r == o2)
    }

    /// The four identities relating `Omega_i(phi)` to `e(nu)`, `psi`, `u` and
    /// products, each decided exactly in `E`.
    pub fn omega_identities(&self, which: Which, phi: &FElem, psi: &FElem, x: &UElem, nu: Weight) -> Result<[bool; 4], DiffError> {
        let u = self.u();
        let om = self.omega(phi, which)?;
        let lambda = *phi.comps.keys().next().ok_or_else(|| DiffError::Window("phi is zero".into()))?;
        let en = EElem::from_e(nu);
        let first = self.mul(&en, &om)? == self.mul(&om, &en)?.scale(&self.vp(lambda, nu));
        let pe = EElem::from_a(psi);
        let second = self.mul(&pe, &om)? == self.mul(&om, &pe)?;
        let lhs3 = self.mul(&EElem::from_u(x), &om)?;
        let mut rhs3 = EElem::zero();
        for (keys, c) in &u.coproduct(x).terms {
            let moved = self.ring.act(&UElem::term(keys[1].clone(), QScalar::one()), phi)?;
            let t = self.mul(&self.omega(&moved, which)?, &EElem::from_u(&UElem::term(keys[0].clone(), QScalar::one())))?;
            rhs3 = rhs3.add(&t.scale(c));
        }
        let third = lhs3 == rhs3;
        let prod = self.ring.multiply_a(phi, psi)?;
        let fourth = self.omega(&prod, which)? == self.mul(&self.omega(psi, which)?, &om)?;
        Ok([first, second, third, fourth])
    }

    /// `T_i` on `A(lambda)`, corrected by `(-1)^{<mu, alpha_i^vee>}` on weight
    /// `mu` so that it intertwines the algebra automorphism exactly.
    pub fn module_braid(&self, i: usize, inverse_op: bool, phi: &FElem) -> Result<FElem, DiffError> {
        let rd = &self.u().rd;
        let mut r = FElem::zero();
        for (l, v) in &phi.comps {
            let c = self.ring.component(*l)?;
            let mut m = c.module.braid_matrix(i, false)?;
            for row in m.iter_mut() {
                for (col, x) in row.iter_mut().enumerate() {
                    if rd.coroot_pairing(c.weights()[col], i) % 2 != 0 {
                        *x = -&*x;
                    }
                }
            }
            if inverse_op {
                m = inverse(&m).ok_or_else(|| DiffError::Window("braid operator is singular".into()))?;
            }
            let w: Vec<QScalar> = m.iter().map(|row| row.iter().zip(v).fold(QScalar::zero(), |s, (a, b)| if a.is_zero() || b.is_zero() { s } else { &s + &(a * b) })).collect();
            r = r.add(&FElem::homogeneous(*l, w));
        }
        Ok(r)
    }

    /// Pairs `(a_n, b_n)` of the exponential factor of `Delta T_i^{+-1}`.
    fn exp_pair(&self, i: usize, inverse_op: bool, n: u32) -> (UElem, UElem) {
        let u = self.u();
        let qi = u.rd.qi_exp(i);
        let ai = u.rd.simple_root(i);
        let diff = &QScalar::v_pow(qi) - &QScalar::v_pow(-qi);
        let nn = n as i32;
        if !inverse_op {
            let c = &(&QScalar::v_pow(qi * nn * (nn - 1) / 2) * &diff.pow(nn)) * &qfact(n as i64, qi).inv();
            let a = u.pow(&u.mul(&u.k(-ai), &u.e(i)), n).scale(&c);
            let b = u.pow(&u.mul(&u.f(i), &u.k(ai)), n);
            (a, b)
        } else {
            let c = &(&QScalar::v_pow(-qi * nn * (nn - 1) / 2) * &(-&diff).pow(nn)) * &qfact(n as i64, qi).inv();
            (u.pow(&u.f(i), n).scale(&c), u.pow(&u.e(i), n))
        }
    }

    /// `T_i star a` (or `T_i^-1 star a`): `phi u e(mu)` goes to
    /// `sum_n (a_n . T(phi)) b_n T(u) e(mu)`.
    pub fn braid_star(&self, i: usize, inverse_op: bool, a: &EElem) -> Result<EElem, DiffError> {
        let u = self.u();
        let mut out = EElem::zero();
        for (k, c) in &a.terms {
            let tphi = self.module_braid(i, inverse_op, &self.basis(k.grade, k.idx)?)?;
            let tu = u.braid(i, inverse_op, &UElem::term(k.u.clone(), QScalar::one()));
            let dim = self.ring.component(k.grade)?.dim();
            for n in 0..=dim as u32 {
                let (an, bn) = self.exp_pair(i, inverse_op, n);
                let v = self.ring.act(&an, &tphi)?;
                if v.is_zero() {
                    break;
                }
                let upart = u.mul(&bn, &tu);
                let vec = v.comps.get(&k.grade).cloned().unwrap_or_else(|| vec![QScalar::zero(); dim]);
                out = out.add(&EElem::from_parts(k.grade, &vec, &upart, k.e).scale(c));
            }
        }
        Ok(out)
    }

    /// `T star` along a word, rightmost letter first.
    pub fn braid_star_word(&self, word: &[usize], inverse_op: bool, a: &EElem) -> Result<EElem, DiffError> {
        let mut r = a.clone();
        for &i in word.iter().rev() {
            r = self.braid_star(i, inverse_op, &r)?;
        }
        Ok(r)
    }

    /// `T_i star Omega(phi) = sum_n Omega(b_n . T_i(phi)) a_n`, exactly in `E`.
    pub fn braid_star_omega(&self, i: usize, inverse_op: bool, phi: &FElem) -> Result<bool, DiffError> {
        let lhs = self.braid_star(i, inverse_op, &self.omega(phi, Which::Difference)?)?;
        let tphi = self.module_braid(i, inverse_op, phi)?;
        let dim = phi.comps.keys().map(|l| self.ring.component(*l).map(|c| c.dim())).sum::<Result<usize, _>>()?;
        let mut rhs = EElem::zero();
        for n in 0..=dim as u32 {
            let (an, bn) = self.exp_pair(i, inverse_op, n);
            let moved = self.ring.act(&bn, &tphi)?;
            if moved.is_zero() {
                continue;
            }
            rhs = rhs.add(&self.mul(&self.omega(&moved, Which::Difference)?, &EElem::from_u(&an))?);
        }
        Ok(lhs == rhs)
    }

    /// Decides whether `d` lies in the span of `a Omega(psi) k_kappa e(mu)`
    /// with `a` running over bases of `A(nu)` for `nu in a_grades`, `psi` over
    /// bases of `A(kappa)` for `kappa in psi_grades` (lattice bases when a root
    /// is configured), and torus factors read off from the terms of `d`.
    pub fn ideal_membership(&self, d: &EElem, a_grades: &[Weight], psi_grades: &[Weight]) -> Result<Membership, DiffError> {
        if d.is_zero() {
            return Ok(Membership { in_ideal: true, generators: 0, integral: self.ring.cfg.map(|_| true) });
        }
        let mut bases: Vec<EElem> = Vec::new();
        for &nu in a_grades {
            let da = self.ring.component(nu)?.dim();
            for &kappa in psi_grades {
                let c = self.ring.component(kappa)?;
                let psis: Vec<Vec<QScalar>> = match &c.lattice {
                    Some(l) => (0..c.dim()).map(|j| l.iter().map(|r| r[j].clone()).collect()).collect(),
                    None => (0..c.dim()).map(|j| unit(c.dim(), j)).collect(),
                };
                for psi in psis {
                    let om = self.omega(&FElem::homogeneous(kappa, psi), Which::Difference)?;
                    for j in 0..da {
                        bases.push(self.mul(&EElem::from_a(&self.basis(nu, j)?), &om)?);
                    }
                }
            }
        }
        // right torus factors that can match a term of d
        let mut shifts: BTreeSet<(Weight, Weight)> = BTreeSet::new();
        for b in &bases {
            for kb in b.terms.keys() {
                for kd in d.terms.keys() {
                    if kd.grade == kb.grade && kd.u.f == kb.u.f && kd.u.e == kb.u.e {
                        shifts.insert((kd.u.k - kb.u.k, kd.e - kb.e));
                    }
                }
            }
        }
        let mut gens = Vec::new();
        for b in &bases {
            for &(kappa, mu) in &shifts {
                let t = self.mul(b, &EElem::from_parts(Weight::ZERO, &[QScalar::one()], &self.u().k(kappa), mu))?;
                if !t.is_zero() {
                    gens.push(t);
                }
            }
        }
        let mut keys: BTreeMap<EKey, usize> = BTreeMap::new();
        for g in gens.iter().chain(std::iter::once(d)) {
            for k in g.terms.keys() {
                let n = keys.len();
                keys.entry(k.clone()).or_insert(n);
            }
        }
        let mut m: Mat<QScalar> = zeros(keys.len(), gens.len());
        for (c, g) in gens.iter().enumerate() {
            for (k, x) in &g.terms {
                m[keys[k]][c] = x.clone();
            }
        }
        let mut rhs = vec![QScalar::zero(); keys.len()];
        for (k, x) in &d.terms {
            rhs[keys[k]] = x.clone();
        }
        let sol = solve(&m, &rhs, gens.len());
        let integral = match (&sol, &self.ring.cfg) {
            (Some(s), Some(cfg)) => Some(s.iter().all(|x| x.is_zero() || cfg.regular_at_root(x))),
            _ => None,
        };
        Ok(Membership { in_ideal: sol.is_some(), generators: gens.len(), integral })
    }

    /// The localized identity for `phi` the lattice basis vector `j` of
    /// `A(lambda)`, of weight `lambda - gamma`, and `s` the highest weight
    /// vector: both sides are multiplied by `s` on the left, which turns them
    /// into elements of `E`, and their difference is tested against the
    /// `Omega`-ideal. With `j` the highest weight vector this is the identity
    /// `k_{2 lambda} = sum_p s^-1 (y_p . s) x_p e(2 lambda)`.
    pub fn local_formula_check(&self, lambda: Weight, j: usize) -> Result<LocalReport, DiffError> {
        let u = self.u();
        let rd = &u.rd;
        let c = self.ring.component(lambda)?;
        let lat = c.lattice.clone().ok_or(QcoordError::NoRoot)?;
        let cfg = self.ring.cfg.ok_or(QcoordError::NoRoot)?;
        let phi_vec: Vec<QScalar> = lat.iter().map(|r| r[j].clone()).collect();
        let xi = c.weights()[j];
        let gamma = lambda - xi;
        let s = FElem::homogeneous(lambda, unit(c.dim(), c.top));
        // s psi_m = c_m psi_m s on basis vectors
        let mut comm = Vec::with_capacity(c.dim());
        for m in 0..c.dim() {
            let psi = self.basis(lambda, m)?;
            let left = self.ring.multiply_a(&s, &psi)?;
            let right = self.ring.multiply_a(&psi, &s)?;
            let (l, r) = (&left.comps[&(lambda * 2)], &right.comps[&(lambda * 2)]);
            let p = r.iter().position(|x| !x.is_zero()).unwrap();
            let cm = &l[p] * &r[p].inv();
            if l.iter().zip(r).any(|(a, b)| *a != b * &cm) {
                return Err(DiffError::Window("s does not q-commute".into()));
            }
            comm.push(cm);
        }
        let mut lhs = EElem::zero();
        let mut rhs = EElem::zero();
        for g in gammas_up_to(rd, self.depth(lambda)) {
            let beta = rd.from_alpha_coords(g);
            // s (S x^L_p . (phi s^-1)) y_p k_{beta_p}
            let da = self.pairing.dual_bases(g, DualNorm::XDivided)?;
            for (x, y) in da.xs.iter().zip(&da.ys) {
                for (keys, cx) in &u.coproduct(&u.antipode(x)).terms {
                    let t1 = &keys[1];
                    if !t1.f.is_empty() {
                        return Err(DiffError::Window("antipode of U^+ left U^{>=0}".into()));
                    }
                    if !t1.e.is_empty() {
                        continue;
                    }
                    let on_sinv = &QScalar::v_pow(-rd.form_v(t1.k, lambda)) * cx;
                    let v = c.module.act(u, &UElem::term(keys[0].clone(), QScalar::one()), &phi_vec);
                    let twisted: Vec<QScalar> = v.iter().zip(&comm).map(|(a, cm)| &(a * cm) * &on_sinv).collect();
                    lhs = lhs.add(&EElem::from_parts(lambda, &twisted, &u.mul(y, &u.k(beta)), Weight::ZERO));
                }
            }
            // q^{(lambda, gamma)} (y^L_p . phi) x_p k_{-2(lambda - gamma)} e(2 lambda)
            let db = self.pairing.dual_bases(g, DualNorm::YDivided)?;
            for (x, y) in db.xs.iter().zip(&db.ys) {
                let v = c.module.act(u, y, &phi_vec);
                if v.iter().all(|a| a.is_zero()) {
                    continue;
                }
                let upart = u.mul(x, &u.k(-(lambda - gamma) * 2));
                rhs = rhs.add(&EElem::from_parts(lambda, &v, &upart, lambda * 2).scale(&self.vp(lambda, gamma)));
            }
        }
        let integral = |e: &EElem| e.terms.values().all(|x| cfg.regular_at_root(x));
        let lat_inv = c.lattice_inv.clone().unwrap();
        // A-parts are read in module coordinates; integrality is judged in lattice coordinates
        let to_lattice = |e: &EElem| -> EElem {
            let mut r = EElem::zero();
            for (k, x) in &e.terms {
                if k.grade != lambda {
                    r.add_term(k.clone(), x.clone());
                    continue;
                }
                for (row, li) in lat_inv.iter().enumerate() {
                    let y = &li[k.idx] * x;
                    r.add_term(EKey { idx: row, ..k.clone() }, y);
                }
            }
            r
        };
        let sides_integral = integral(&to_lattice(&lhs)) && integral(&to_lattice(&rhs));
        let membership = self.ideal_membership(&lhs.sub(&rhs), &[Weight::ZERO], &[lambda])?;
        Ok(LocalReport { sides_integral, membership })
    }

    /// Image of `a` at `zeta`: `A`-parts in lattice coordinates, `U`-parts in
    /// the word basis, which is an `A`-basis of `U_A` in rank one. Fails when a
    /// coefficient has a pole.
    pub fn specialize(&self, a: &EElem) -> Result<BTreeMap<(Weight, usize, TermKey, Weight), CycScalar>, DiffError> {
        let cfg = self.ring.cfg.ok_or(QcoordError::NoRoot)?;
        let mut grouped: BTreeMap<(Weight, TermKey, Weight), Vec<QScalar>> = BTreeMap::new();
        for (k, x) in &a.terms {
            let dim = self.ring.component(k.grade)?.dim();
            let v = grouped.entry((k.grade, k.u.clone(), k.e)).or_insert_with(|| vec![QScalar::zero(); dim]);
            v[k.idx] += x;
        }
        let mut out = BTreeMap::new();
        for ((grade, t, e), v) in grouped {
            let c = self.ring.a_component(grade, Level::A)?;
            let lat_inv = c.lattice_inv.as_ref().ok_or(QcoordError::NoRoot)?;
            for (row, li) in lat_inv.iter().enumerate() {
                let y = li.iter().zip(&v).fold(QScalar::zero(), |acc, (p, q)| if q.is_zero() { acc } else { &acc + &(p * q) });
                let z = cfg.specialize(&y).map_err(|err| DiffError::Window(err.to_string()))?;
                if !z.is_zero() {
                    out.insert((grade, row, t.clone(), e), z);
                }
            }
        }
        Ok(out)
    }

    /// `partial_z` equals `sum a_mu sigma_mu` on the window, for
    /// `iota(z) = sum a_mu e(mu)`.
    pub fn hc_collapse(&self, z: &UElem, iota: &BTreeMap<Weight, QScalar>, window: &[Weight]) -> Result<bool, DiffError> {
        let lhs = self.as_operator(&EElem::from_u(z), window)?;
        let mut e = EElem::zero();
        for (mu, a) in iota {
            e = e.add(&EElem::from_e(*mu).scale(a));
        }
        Ok(lhs == self.as_operator(&e, window)?)
    }
}

/// Composition of window operators, `a` after `b`.
pub fn compose(a: &DOp, b: &DOp) -> DOp {
    let mut out: DOp = BTreeMap::new();
    for (&(m0, m1), mb) in b {
        for (&(n0, n1), ma) in a {
            if n0 != m1 {
                continue;
            }
            let p = mat_mul(ma, mb);
            match out.get_mut(&(m0, n1)) {
                Some(acc) => {
                    for (r, row) in acc.iter_mut().enumerate() {
                        for (c, x) in row.iter_mut().enumerate() {
                            *x = &*x + &p[r][c];
                        }
                    }
                }
                None => {
                    out.insert((m0, n1), p);
                }
            }
        }
    }
    prune_op(out)
}

/// `gamma` coordinates for display.
pub fn gamma_label(g: Gamma) -> String {
    format!("{}a1+{}a2", g[0], g[1])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qscalars::RootOfUnityConfig;
    use crate::rootdata::RootDatum;

    fn w1(a: i32) -> Weight {
        Weight::new(&[a])
    }

    #[test]
    fn commutation_rules() {
        let u = Uq::new(RootDatum::a1());
        let r = CoordRing::new(&u, None);
        let e = EAlgebra::new(&r);
        let phi = r.basis_f(w1(1), 1).unwrap();
        let ep = EElem::from_a(&phi);
        // e(lambda) phi = q^{(lambda, mu)} phi e(lambda)
        let el = EElem::from_e(w1(2));
        assert_eq!(e.mul(&el, &ep).unwrap(), e.mul(&ep, &el).unwrap().scale(&QScalar::v_pow(u.rd.form_v(w1(2), w1(1)))));
        // u phi = sum (u_(0) . phi) u_(1)
        let x = u.e(0);
        let lhs = e.mul(&EElem::from_u(&x), &ep).unwrap();
        let mut rhs = EElem::zero();
        for (keys, c) in &u.coproduct(&x).terms {
            let a = r.act(&UElem::term(keys[0].clone(), QScalar::one()), &phi).unwrap();
            rhs = rhs.add(&e.mul(&EElem::from_a(&a), &EElem::from_u(&UElem::term(keys[1].clone(), QScalar::one()))).unwrap().scale(c));
        }
        assert_eq!(lhs, rhs);
        assert_eq!(e.mul(&EElem::one(), &ep).unwrap(), ep);
        // restriction to A recovers the product of A
        let psi = r.basis_f(w1(1), 0).unwrap();
        assert_eq!(e.mul(&ep, &EElem::from_a(&psi)).unwrap(), EElem::from_a(&r.multiply_a(&phi, &psi).unwrap()));
    }

    #[test]
    fn omega_examples() {
        let u = Uq::new(RootDatum::a1());
        let r = CoordRing::new(&u, None);
        let e = EAlgebra::new(&r);
        let one = r.one_f();
        assert_eq!(e.omega(&one, Which::One).unwrap(), EElem::one());
        assert!(e.omega(&one, Which::Difference).unwrap().is_zero());
        // highest weight s: Omega_2(s) = s k_lambda e(-lambda)
        let s = r.theta_vector(&[], w1(1)).unwrap();
        let expect = EElem::from_parts(w1(1), &s.comps[&w1(1)], &u.k(w1(1)), w1(-1));
        assert_eq!(e.omega(&s, Which::Two).unwrap(), expect);
        // U^- moves s once, the lower vector not at all
        assert_eq!(e.omega(&s, Which::One).unwrap().terms.len(), 2);
        let low = r.theta_vector(&[0], w1(1)).unwrap();
        assert_eq!(e.omega(&low, Which::One).unwrap().terms.len(), 1);
    }

    #[test]
    fn r_phi_both_expressions() {
        let u = Uq::new(RootDatum::a1());
        let r = CoordRing::new(&u, None);
        let e = EAlgebra::new(&r);
        let window = [w1(0), w1(1), w1(2)];
        for l in [1, 2] {
            for j in 0..=l as usize {
                assert!(e.r_phi_agreement(&r.basis_f(w1(l), j).unwrap(), &window).unwrap());
            }
        }
        let u2 = Uq::new(RootDatum::a2());
        let r2 = CoordRing::new(&u2, None);
        let e2 = EAlgebra::new(&r2);
        let window = [Weight::new(&[0, 0]), Weight::new(&[1, 0]), Weight::new(&[0, 1])];
        for j in 0..3 {
            assert!(e2.r_phi_agreement(&r2.basis_f(Weight::new(&[1, 0]), j).unwrap(), &window).unwrap());
        }
    }

    #[test]
    fn omega_identities_hold_in_e() {
        let u = Uq::new(RootDatum::a1());
        let r = CoordRing::new(&u, None);
        let e = EAlgebra::new(&r);
        for which in [Which::One, Which::Two] {
            for j in 0..2 {
                let phi = r.basis_f(w1(1), j).unwrap();
                let psi = r.basis_f(w1(1), 1 - j).unwrap();
                for x in [u.e(0), u.f(0), u.k(w1(1))] {
                    assert_eq!(e.omega_identities(which, &phi, &psi, &x, w1(1)).unwrap(), [true; 4]);
                }
            }
        }
    }

    #[test]
    fn braid_star_properties() {
        let u = Uq::new(RootDatum::a1());
        let r = CoordRing::new(&u, None);
        let e = EAlgebra::new(&r);
        // T star u = T(u)
        let x = EElem::from_u(&u.e(0));
        assert_eq!(e.braid_star(0, false, &x).unwrap(), EElem::from_u(&u.braid(0, false, &u.e(0))));
        assert_eq!(e.braid_star(0, false, &EElem::from_e(w1(1))).unwrap(), EElem::from_e(w1(1)));
        let phi = EElem::from_a(&r.basis_f(w1(1), 0).unwrap());
        let psi = EElem::from_a(&r.basis_f(w1(1), 1).unwrap());
        for inv in [false, true] {
            let back = e.braid_star(0, !inv, &e.braid_star(0, inv, &phi).unwrap()).unwrap();
            assert_eq!(back, phi);
            let ab = e.mul(&phi, &x).unwrap();
            assert_eq!(e.braid_star(0, inv, &ab).unwrap(), e.mul(&e.braid_star(0, inv, &phi).unwrap(), &e.braid_star(0, inv, &x).unwrap()).unwrap());
            let pp = e.mul(&psi, &phi).unwrap();
            assert_eq!(e.braid_star(0, inv, &pp).unwrap(), e.mul(&e.braid_star(0, inv, &psi).unwrap(), &e.braid_star(0, inv, &phi).unwrap()).unwrap());
            for j in 0..2 {
                assert!(e.braid_star_omega(0, inv, &r.basis_f(w1(1), j).unwrap()).unwrap());
            }
        }
    }

    #[test]
    fn braid_star_relation_a2() {
        let u = Uq::new(RootDatum::a2());
        let r = CoordRing::new(&u, None);
        let e = EAlgebra::new(&r);
        let phi = EElem::from_a(&r.basis_f(Weight::new(&[1, 0]), 1).unwrap());
        let a = e.mul(&phi, &EElem::from_u(&u.f(1))).unwrap();
        assert_eq!(e.braid_star_word(&[0, 1, 0], false, &a).unwrap(), e.braid_star_word(&[1, 0, 1], false, &a).unwrap());
    }

    #[test]
    fn local_formulas_at_root() {
        let u = Uq::new(RootDatum::a1());
        let r = CoordRing::new(&u, Some(RootOfUnityConfig::new(3, 2, false).unwrap()));
        let e = EAlgebra::new(&r);
        let c = r.component(w1(1)).unwrap();
        for j in 0..2 {
            let rep = e.local_formula_check(w1(1), j).unwrap();
            assert!(rep.holds(), "{j}: {rep:?}");
        }
        assert!(e.local_formula_check(w1(1), c.top).unwrap().holds());
        assert!(e.local_formula_check(w1(0), 0).unwrap().holds());
        // the ideal is proper
        assert!(!e.ideal_membership(&EElem::one(), &[w1(0)], &[w1(1)]).unwrap().in_ideal);
        let s = EElem::from_a(&r.theta_vector(&[], w1(1)).unwrap());
        assert!(!e.ideal_membership(&s, &[w1(0)], &[w1(1)]).unwrap().in_ideal);
    }

    #[test]
    fn casimir_collapses_to_torus() {
        let u = Uq::new(RootDatum::a1());
        let r = CoordRing::new(&u, None);
        let e = EAlgebra::new(&r);
        let q = QScalar::v_pow(2);
        let d = (&q - &q.inv()).pow(2).inv();
        let ka = u.rd.simple_root(0);
        let z = u.mul(&u.f(0), &u.e(0)).add(&u.k(ka).scale(&(&q * &d))).add(&u.k(-ka).scale(&(&q.inv() * &d)));
        let iota = BTreeMap::from([(ka, &q * &d), (-ka, &q.inv() * &d)]);
        assert!(e.hc_collapse(&z, &iota, &[w1(0), w1(1), w1(2)]).unwrap());
    }
}
