//! The center of `E^(ell)` and the Azumaya property in rank one.
//!
//! Group-side objects for `SL_2` are 2x2 matrices over `Q(zeta')`:
//! `K = {(n_1 h, n_2 h^-1)}` with `n_1 = [[1,a],[0,1]]`, `n_2 = [[1,0],[b,1]]`,
//! `h = diag(h, 1/h)`, the map `kappa(k_1, k_2) = k_1 k_2^-1` and the variety
//! `V` of triples `(N^- g, k, t)` with `g kappa g^-1 in diag(t^2ell, t^-2ell) N^-`.
//! A classical coordinate of `A_1(m varpi)` is a homogeneous polynomial of
//! degree `m` in the first row `(x, y)` of `g`.
//!
//! The Frobenius center is evaluated at `k in K` by `e^ell -> c_e b`,
//! `f^ell -> c_f a h^-2`, `k_{ell mu} -> theta_mu(h)`, where `c_e`, `c_f`
//! are the pairing constants that turn `e^ell`, `f^ell` into the duals of the
//! divided powers, and `e(mu) -> theta_mu(t)`.

use crate::diffops::{DiffError, EAlgebra, EElem, Which};
use crate::pairing::{Pairing, PairingError};
use crate::qcoord::{ChartAlgebra, ChartElem, FElem, Level, QcoordError, ZetaElem};
use crate::qreps::gammas_up_to;
use crate::qscalars::field::{nullspace, rank, solve};
use crate::qscalars::cyc::cyclotomic_poly;
use crate::qscalars::{CycScalar, Laurent, QScalar, RootOfUnityConfig};
use crate::rootdata::{RootDatum, Weight};
use crate::uqalg::{Form, Mono, TermKey, UElem, Uq, UqError, ZElem};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::collections::{BTreeMap, BTreeSet};
use thiserror::Error;

type C = CycScalar;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CenterError {
    #[error(transparent)]
    Uq(#[from] UqError),
    #[error(transparent)]
    Coord(#[from] QcoordError),
    #[error(transparent)]
    Diff(#[from] DiffError),
    #[error(transparent)]
    Pairing(#[from] PairingError),
    #[error("a root of unity is required")]
    NoRoot,
    #[error("only rank one is modelled")]
    Rank,
    #[error("element is not central: {0}")]
    NotCentral(String),
    #[error("term {0} is not in the Frobenius center")]
    NotFrobenius(String),
    #[error("coefficient {0} has a pole at the root")]
    NotRegular(String),
    #[error("no solution: {0}")]
    NoSolution(String),
    #[error("point is off the chart")]
    OffChart,
}

// ---------------------------------------------------------------- 2x2 matrices

pub type M2 = [[C; 2]; 2];

fn ci(a: i64) -> C {
    C::int(a)
}

fn rat(p: i64, q: i64) -> C {
    C::rational(BigRational::new(BigInt::from(p), BigInt::from(q)))
}

pub fn m2(a: C, b: C, c: C, d: C) -> M2 {
    [[a, b], [c, d]]
}

pub fn m2_id() -> M2 {
    m2(ci(1), ci(0), ci(0), ci(1))
}

pub fn m2_mul(x: &M2, y: &M2) -> M2 {
    let e = |i: usize, j: usize| &(&x[i][0] * &y[0][j]) + &(&x[i][1] * &y[1][j]);
    m2(e(0, 0), e(0, 1), e(1, 0), e(1, 1))
}

pub fn m2_add(x: &M2, y: &M2) -> M2 {
    m2(&x[0][0] + &y[0][0], &x[0][1] + &y[0][1], &x[1][0] + &y[1][0], &x[1][1] + &y[1][1])
}

pub fn m2_sub(x: &M2, y: &M2) -> M2 {
    m2(&x[0][0] - &y[0][0], &x[0][1] - &y[0][1], &x[1][0] - &y[1][0], &x[1][1] - &y[1][1])
}

pub fn m2_scale(x: &M2, c: &C) -> M2 {
    m2(&x[0][0] * c, &x[0][1] * c, &x[1][0] * c, &x[1][1] * c)
}

pub fn m2_det(x: &M2) -> C {
    &(&x[0][0] * &x[1][1]) - &(&x[0][1] * &x[1][0])
}

pub fn m2_inv(x: &M2) -> M2 {
    let d = m2_det(x).inv();
    m2(&x[1][1] * &d, &(-&x[0][1]) * &d, &(-&x[1][0]) * &d, &x[0][0] * &d)
}

pub fn m2_trace(x: &M2) -> C {
    &x[0][0] + &x[1][1]
}

/// `diag(x, 1/x)`
pub fn torus(x: &C) -> M2 {
    m2(x.clone(), ci(0), ci(0), x.inv())
}

/// `Ad(g) x = g x g^-1`
pub fn adjoint(g: &M2, x: &M2) -> M2 {
    m2_mul(&m2_mul(g, x), &m2_inv(g))
}

fn upper(a: &C) -> M2 {
    m2(ci(1), a.clone(), ci(0), ci(1))
}

fn lower(b: &C) -> M2 {
    m2(ci(1), ci(0), b.clone(), ci(1))
}

fn e_mat() -> M2 {
    m2(ci(0), ci(1), ci(0), ci(0))
}

fn h_mat() -> M2 {
    m2(ci(1), ci(0), ci(0), ci(-1))
}

fn f_mat() -> M2 {
    m2(ci(0), ci(0), ci(1), ci(0))
}

// ------------------------------------------------------------- K, kappa and V

/// A point `(n_1 h, n_2 h^-1)` of `K`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KPoint {
    pub a: C,
    pub b: C,
    pub h: C,
}

impl KPoint {
    pub fn first(&self) -> M2 {
        m2_mul(&upper(&self.a), &torus(&self.h))
    }

    pub fn second(&self) -> M2 {
        m2_mul(&lower(&self.b), &torus(&self.h.inv()))
    }

    pub fn kappa(&self) -> M2 {
        m2_mul(&self.first(), &m2_inv(&self.second()))
    }

    /// Componentwise product in `K`.
    pub fn mul(&self, o: &KPoint) -> KPoint {
        let f = m2_mul(&self.first(), &o.first());
        let s = m2_mul(&self.second(), &o.second());
        let h = f[0][0].clone();
        KPoint { a: &f[0][1] * &h, b: &s[1][0] * &h, h }
    }
}

/// A point `(N^- g, k, t)` of `(N^- \ G) x K x H`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VPoint {
    pub g: M2,
    pub k: KPoint,
    pub t: C,
}

impl VPoint {
    /// First row of `g`, the coordinates `(x, y)` of `N^- g`.
    pub fn row(&self) -> (C, C) {
        (self.g[0][0].clone(), self.g[0][1].clone())
    }
}

/// Membership in `V`: `g kappa(k) g^-1 = diag(t^2ell, t^-2ell) n` with `n in N^-`.
pub fn v_contains(p: &VPoint, ell: u32) -> bool {
    let x = adjoint(&p.g, &p.k.kappa());
    x[0][1].is_zero() && x[0][0] == p.t.pow(2 * ell as i64)
}

/// Points of `V` with rational coordinates: `g`, `t`, `h` are drawn from a
/// seeded generator and `(a, b)` solve `kappa = g^-1 diag(T, 1/T) n_c g`.
pub fn sample_v_points(ell: u32, n: usize, seed: u64) -> Vec<VPoint> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let nonzero = |rng: &mut ChaCha8Rng| loop {
        let p: i64 = rng.gen_range(-3..=3);
        if p != 0 {
            return rat(p, rng.gen_range(1..=2));
        }
    };
    let mut out = Vec::new();
    while out.len() < n {
        let u = rat(rng.gen_range(-3..=3), rng.gen_range(1..=2));
        let r = rat(rng.gen_range(-2..=2), 1);
        let t = nonzero(&mut rng);
        let h = nonzero(&mut rng);
        let g = m2(ci(1), u.clone(), r.clone(), &ci(1) + &(&r * &u));
        let gi = m2_inv(&g);
        let d = torus(&t.pow(2 * ell as i64));
        let m0 = m2_mul(&m2_mul(&gi, &d), &g);
        let m1 = m2_mul(&m2_mul(&gi, &m2_mul(&d, &f_mat())), &g);
        if m1[1][1].is_zero() {
            continue;
        }
        let c = &(&h.pow(-2) - &m0[1][1]) * &m1[1][1].inv();
        let m = m2_add(&m0, &m2_scale(&m1, &c));
        let w = m[1][1].inv();
        let k = KPoint { a: &m[0][1] * &w, b: &(-&m[1][0]) * &w, h };
        out.push(VPoint { g, k, t });
    }
    out
}

/// The same point with `b` moved off `V`.
pub fn perturb_off_v(p: &VPoint) -> VPoint {
    let mut q = p.clone();
    q.k.b = &q.k.b + &ci(1);
    q
}

// ------------------------------------------------------------ classical side

/// `sum_n c_n x^{m-n} y^n`, a classical coordinate of `A_1(m varpi)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ClassicalFn {
    pub m: u32,
    pub coeffs: Vec<BigRational>,
}

impl ClassicalFn {
    /// `x^{m-n} y^n`
    pub fn monomial(m: u32, n: u32) -> Self {
        let mut coeffs = vec![BigRational::zero(); m as usize + 1];
        coeffs[n as usize] = BigRational::one();
        ClassicalFn { m, coeffs }
    }

    pub fn eval(&self, x: &C, y: &C) -> C {
        let mut s = C::zero();
        for (n, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let t = &(&C::rational(c.clone()) * &x.pow((self.m as usize - n) as i64)) * &y.pow(n as i64);
            s = &s + &t;
        }
        s
    }

    /// `<phi, e^(n)>` for each monomial `e^(n)`.
    pub fn values(&self) -> BTreeMap<Mono, BigRational> {
        self.coeffs.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(n, c)| (vec![n as u32], c.clone())).collect()
    }
}

/// Both sides of the `Omega` evaluation, at one point.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OmegaValue {
    pub algebraic: C,
    pub geometric: C,
}

impl OmegaValue {
    pub fn agrees(&self) -> bool {
        self.algebraic == self.geometric
    }
}

/// `Omega_1(phi)(p) = phi(N^- t^ell g n_2 h^-1)` and
/// `Omega_2(phi)(p) = phi(N^- t^-ell g n_1 h)`.
pub fn omega_geometric(phi: &ClassicalFn, which: Which, p: &VPoint, ell: u32) -> C {
    let te = p.t.pow(ell as i64);
    let x = match which {
        Which::One => m2_mul(&m2_mul(&torus(&te), &p.g), &m2_mul(&lower(&p.k.b), &torus(&p.k.h.inv()))),
        Which::Two => m2_mul(&m2_mul(&torus(&te.inv()), &p.g), &m2_mul(&upper(&p.k.a), &torus(&p.k.h))),
        Which::Difference => {
            return &omega_geometric(phi, Which::One, p, ell) - &omega_geometric(phi, Which::Two, p, ell);
        }
    };
    phi.eval(&x[0][0], &x[0][1])
}

// ---------------------------------------------------------- Frobenius center

/// Constants of the evaluation `Z_Fr -> O(K)` in rank one.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FrobeniusConvention {
    pub ell: u32,
    /// `e^ell -> e_scale * b`
    pub e_scale: C,
    /// `f^ell -> f_scale * a * h^-2`
    pub f_scale: C,
}

impl FrobeniusConvention {
    /// `e_scale = tau(e^ell, f^(ell))` and `f_scale = tau(e^(ell), f^ell) / c`
    /// with `S(f^ell) = c f^ell k_{ell alpha}`, both at `zeta`.
    pub fn new(u: &Uq, cfg: &RootOfUnityConfig) -> Result<Self, CenterError> {
        if u.rank() != 1 {
            return Err(CenterError::Rank);
        }
        let ell = cfg.ell;
        let pairing = Pairing::new(u);
        let fl = u.pow(&u.f(0), ell);
        let te = pairing.tau(&u.pow(&u.e(0), ell), &u.f_div(0, ell))?;
        let tf = pairing.tau(&u.e_div(0, ell), &fl)?;
        let s = u.antipode(&fl);
        let key = TermKey::new(vec![0; ell as usize], u.alpha(0) * ell as i32, vec![]);
        let c = match (s.terms.len(), s.terms.get(&key)) {
            (1, Some(c)) => c.clone(),
            _ => return Err(CenterError::NoSolution("antipode of f^ell is not a monomial".into())),
        };
        Ok(FrobeniusConvention { ell, e_scale: at_root(cfg, &te)?, f_scale: at_root(cfg, &(&tf * &c.inv()))? })
    }

    /// Value of one word-basis monomial `f^i k_mu e^j` at `k`.
    pub fn evaluate_key(&self, t: &TermKey, k: &KPoint) -> Result<C, CenterError> {
        let l = self.ell as usize;
        let kc = t.k.0[0];
        if !t.f.len().is_multiple_of(l) || !t.e.len().is_multiple_of(l) || kc % self.ell as i32 != 0 {
            return Err(CenterError::NotFrobenius(format!("{t:?}")));
        }
        let fv = &(&self.f_scale * &k.a) * &k.h.pow(-2);
        let ev = &self.e_scale * &k.b;
        let tv = k.h.pow((kc / self.ell as i32) as i64);
        Ok(&(&fv.pow((t.f.len() / l) as i64) * &tv) * &ev.pow((t.e.len() / l) as i64))
    }

    /// Value of `z in Z_Fr` at `k`, read termwise in the word basis.
    pub fn evaluate(&self, cfg: &RootOfUnityConfig, z: &UElem, k: &KPoint) -> Result<C, CenterError> {
        let mut s = C::zero();
        for (t, c) in &z.terms {
            let cz = at_root(cfg, c)?;
            if cz.is_zero() {
                continue;
            }
            s = &s + &(&cz * &self.evaluate_key(t, k)?);
        }
        Ok(s)
    }
}

fn at_root(cfg: &RootOfUnityConfig, x: &QScalar) -> Result<C, CenterError> {
    cfg.specialize(x).map_err(|_| CenterError::NotRegular(x.to_string()))
}

/// `sum_i c_i v^i` for an element of `Q(zeta')` given in the power basis.
pub fn lift_cyc(c: &C) -> QScalar {
    let cs = c.coeffs();
    let den = cs.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let nums: Vec<i128> = cs
        .iter()
        .map(|x| {
            let n = x.numer() * (&den / x.denom());
            i128::try_from(n).expect("coefficient fits in i128")
        })
        .collect();
    let d = i128::try_from(den).expect("denominator fits in i128");
    QScalar::new(Laurent::from_coeffs(0, nums), Laurent::from_coeffs(0, vec![d]))
}

/// `Omega_i(phi~)` evaluated on `V` through `E`: the `A`-parts are read as
/// classical coordinates, the `U`-parts through the Frobenius evaluation and
/// `e(mu) -> theta_mu(t)`. `phi~` is the image of `phi` in `A_zeta(ell m varpi)`.
pub fn omega_algebraic(ea: &EAlgebra, conv: &FrobeniusConvention, phi: &ClassicalFn, which: Which, p: &VPoint) -> Result<C, CenterError> {
    let ring = ea.ring;
    let u = ring.u;
    let cfg = ring.cfg.ok_or(CenterError::NoRoot)?;
    let ell = cfg.ell;
    let lam = u.rd.fundamental_weight(0) * phi.m as i32;
    let big = lam * ell as i32;
    let tilde = ring.a1_embed(lam, &phi.values())?;
    let comp = ring.a_component(big, Level::Zeta)?;
    let lat = comp.lattice.as_ref().ok_or(CenterError::NoRoot)?;
    let lat_inv = comp.lattice_inv.as_ref().ok_or(CenterError::NoRoot)?;
    let lifted: Vec<QScalar> = tilde.comps[&big].iter().map(lift_cyc).collect();
    let module: Vec<QScalar> = lat.iter().map(|row| row.iter().zip(&lifted).fold(QScalar::zero(), |acc, (a, b)| &acc + &(a * b))).collect();
    let om = ea.omega(&FElem::homogeneous(big, module), which)?;
    let mut grouped: BTreeMap<(TermKey, Weight), Vec<QScalar>> = BTreeMap::new();
    for (k, c) in &om.terms {
        let v = grouped.entry((k.u.clone(), k.e)).or_insert_with(|| vec![QScalar::zero(); comp.dim()]);
        v[k.idx] += c;
    }
    let (x, y) = p.row();
    let mut total = C::zero();
    for ((key, e), v) in grouped {
        let latc: Vec<C> = lat_inv
            .iter()
            .map(|row| at_root(&cfg, &row.iter().zip(&v).fold(QScalar::zero(), |acc, (a, b)| &acc + &(a * b))))
            .collect::<Result<_, _>>()?;
        if latc.iter().all(|c| c.is_zero()) {
            continue;
        }
        let psi = ZetaElem::homogeneous(big, latc);
        let mut coeffs = Vec::new();
        for kk in 0..=ell * phi.m {
            let c = ring.hopf_pair_zeta(&psi, &u.e_div(0, kk))?;
            if kk % ell != 0 {
                if !c.is_zero() {
                    return Err(CenterError::NotFrobenius(format!("A-part pairs with e^({kk})")));
                }
                continue;
            }
            coeffs.push(c);
        }
        let mut classical = C::zero();
        for (n, c) in coeffs.iter().enumerate() {
            classical = &classical + &(&(c * &x.pow((phi.m as usize - n) as i64)) * &y.pow(n as i64));
        }
        let tv = p.t.pow(e.0[0] as i64);
        total = &total + &(&(&classical * &conv.evaluate_key(&key, &p.k)?) * &tv);
    }
    Ok(total)
}

/// Both routes at one point.
pub fn omega_on_variety(ea: &EAlgebra, conv: &FrobeniusConvention, phi: &ClassicalFn, which: Which, p: &VPoint) -> Result<OmegaValue, CenterError> {
    let algebraic = match which {
        Which::Difference => &omega_algebraic(ea, conv, phi, Which::One, p)? - &omega_algebraic(ea, conv, phi, Which::Two, p)?,
        w => omega_algebraic(ea, conv, phi, w, p)?,
    };
    Ok(OmegaValue { algebraic, geometric: omega_geometric(phi, which, p, conv.ell) })
}

// ---------------------------------------------------- Harish-Chandra center

/// `iota(z)`, the torus part of a central `z`, after checking centrality over `Q(v)`.
pub fn hc_iota(u: &Uq, z: &UElem) -> Result<BTreeMap<Weight, QScalar>, CenterError> {
    for (name, g) in u.chevalley_generators() {
        if !u.commutator(z, &g).is_zero() {
            return Err(CenterError::NotCentral(name));
        }
    }
    Ok(z.terms.iter().filter(|(k, _)| k.f.is_empty() && k.e.is_empty()).map(|(k, c)| (k.k, c.clone())).collect())
}

/// Invariance of `sum a_mu e(mu)` under `w o e(mu) = q^{(w mu - mu, rho)} e(w mu)`.
pub fn dot_invariant(rd: &RootDatum, iota: &BTreeMap<Weight, QScalar>) -> bool {
    rd.weyl_group().iter().all(|w| {
        let mut img: BTreeMap<Weight, QScalar> = BTreeMap::new();
        for (mu, a) in iota {
            let (ex, wm) = rd.dot_twist_v(w, *mu);
            *img.entry(wm).or_default() += &(a * &QScalar::v_pow(ex));
        }
        img.retain(|_, c| !c.is_zero());
        img == *iota
    })
}

/// Every weight of `iota(z)` lies in `2 Lambda`.
pub fn in_twice_lattice(iota: &BTreeMap<Weight, QScalar>) -> bool {
    iota.keys().all(|mu| mu.0.iter().all(|c| c % 2 == 0))
}

/// `iota(m(lambda)) = sum_{w in W / W_lambda} w o e(-2 lambda)`.
pub fn m_lambda_iota(rd: &RootDatum, lambda: Weight) -> BTreeMap<Weight, QScalar> {
    let mut out: BTreeMap<Weight, QScalar> = BTreeMap::new();
    let mut seen = BTreeSet::new();
    for w in rd.weyl_group() {
        let (ex, wm) = rd.dot_twist_v(&w, -lambda * 2);
        if seen.insert(wm) {
            *out.entry(wm).or_default() += &QScalar::v_pow(ex);
        }
    }
    out
}

/// The central element with `iota = m_lambda_iota(lambda)`, found by solving
/// centrality and the prescribed torus part over `f^F k_mu e^E` with
/// `|F| = |E| <= ht(lambda - w_0 lambda)`.
pub fn m_lambda(u: &Uq, lambda: Weight) -> Result<UElem, CenterError> {
    let rd = &u.rd;
    let depth = rd.height(lambda - rd.apply_word(&rd.w0_word, lambda));
    let target = m_lambda_iota(rd, lambda);
    let mut tori = BTreeSet::new();
    for mu in target.keys() {
        for g in gammas_up_to(rd, depth) {
            let b = rd.from_alpha_coords(g);
            tori.insert(*mu + b);
            tori.insert(*mu - b);
        }
    }
    let mut cands = Vec::new();
    for g in gammas_up_to(rd, depth) {
        for fm in u.pbw_monos(g) {
            let fe = u.pbw_element(false, &fm);
            for em in u.pbw_monos(g) {
                let ee = u.pbw_element(true, &em);
                for mu in &tori {
                    cands.push(u.mul_all(&[&fe, &u.k(*mu), &ee]));
                }
            }
        }
    }
    let gens = u.chevalley_generators();
    let mut rows: BTreeMap<(usize, TermKey), Vec<QScalar>> = BTreeMap::new();
    let n = cands.len();
    for (j, c) in cands.iter().enumerate() {
        for (gi, (_, g)) in gens.iter().enumerate() {
            for (t, x) in &u.commutator(c, g).terms {
                rows.entry((gi + 1, t.clone())).or_insert_with(|| vec![QScalar::zero(); n])[j] = x.clone();
            }
        }
        for (t, x) in &c.terms {
            if t.f.is_empty() && t.e.is_empty() {
                rows.entry((0, t.clone())).or_insert_with(|| vec![QScalar::zero(); n])[j] = x.clone();
            }
        }
    }
    for mu in target.keys() {
        rows.entry((0, TermKey::torus(*mu))).or_insert_with(|| vec![QScalar::zero(); n]);
    }
    let (m, b): (Vec<Vec<QScalar>>, Vec<QScalar>) = rows
        .into_iter()
        .map(|((tag, t), r)| {
            let rhs = if tag == 0 { target.get(&t.k).cloned().unwrap_or_default() } else { QScalar::zero() };
            (r, rhs)
        })
        .unzip();
    let x = solve(&m, &b, n).ok_or_else(|| CenterError::NoSolution(format!("m({})", rd.fmt_weight(lambda))))?;
    let mut z = UElem::zero();
    for (c, xi) in cands.iter().zip(&x) {
        if !xi.is_zero() {
            z = z.add(&c.scale(xi));
        }
    }
    Ok(z)
}

/// `C = f e + (q k_alpha + q^-1 k_-alpha) / (q - q^-1)^2` in rank one.
pub fn casimir_a1(u: &Uq) -> UElem {
    let q = QScalar::v_pow(u.rd.qi_exp(0));
    let qq = &q - &q.inv();
    let den = (&qq * &qq).inv();
    let a = u.alpha(0);
    let t = u.k(a).scale(&(&q * &den)).add(&u.k(-a).scale(&(&q.inv() * &den)));
    u.mul(&u.f(0), &u.e(0)).add(&t)
}

// -------------------------------------------------------- Poisson structure

/// `[a, b] / (ell (q^ell - q^-ell))` over `Q(v)`.
pub fn poisson_lift(u: &Uq, cfg: &RootOfUnityConfig, a: &UElem, b: &UElem) -> UElem {
    let qe = u.rd.index * cfg.ell as i32;
    let n = (&QScalar::v_pow(qe) - &QScalar::v_pow(-qe)).scale_int(cfg.ell as i128);
    u.commutator(a, b).scale(&n.inv())
}

/// `{a, b}` in `U_zeta`; fails when the quotient is not integral.
pub fn poisson_bracket(u: &Uq, cfg: &RootOfUnityConfig, a: &UElem, b: &UElem) -> Result<ZElem, CenterError> {
    Ok(u.specialize_u(&poisson_lift(u, cfg, a, b), cfg, Form::DK)?)
}

/// Checks of the bracket on the generators of `Z_Fr`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PoissonReport {
    pub pairs: usize,
    pub integral: bool,
    pub central: bool,
    pub antisymmetric: bool,
    pub leibniz: bool,
    pub lift_independent: bool,
    /// A bracket between generators is nonzero.
    pub nontrivial: bool,
}

impl PoissonReport {
    pub fn holds(&self) -> bool {
        self.integral && self.central && self.antisymmetric && self.leibniz && self.lift_independent && self.nontrivial
    }
}

/// Brackets between the generators of `Z_Fr`: integrality, centrality of
/// the result, antisymmetry, the Leibniz rule on products of two generators
/// and independence of the lift `a + Phi_ell(v) x`.
pub fn poisson_checks(u: &Uq, cfg: &RootOfUnityConfig) -> Result<PoissonReport, CenterError> {
    if u.ht_bound < 3 * cfg.ell as i32 {
        return Err(CenterError::Uq(UqError::DegreeBound(3 * cfg.ell as i32, u.ht_bound)));
    }
    let gens: Vec<UElem> = u.zfr_generators(cfg.ell).into_iter().map(|(_, g)| g).collect();
    let phi_l = QScalar::from_laurent(Laurent::from_coeffs(0, cyclotomic_poly(cfg.ell).iter().map(|&c| c as i128).collect()));
    let noise = u.mul(&u.f(0), &u.e(0)).add(&u.e(0));
    let mut r = PoissonReport { pairs: 0, integral: true, central: true, antisymmetric: true, leibniz: true, lift_independent: true, nontrivial: false };
    let zero = |x: &UElem| -> Result<bool, CenterError> { Ok(u.specialize_u(x, cfg, Form::DK)?.is_zero()) };
    for (i, a) in gens.iter().enumerate() {
        for (j, b) in gens.iter().enumerate() {
            r.pairs += 1;
            let ab = poisson_lift(u, cfg, a, b);
            if u.specialize_u(&ab, cfg, Form::DK).is_err() {
                r.integral = false;
                continue;
            }
            r.nontrivial |= !zero(&ab)?;
            r.central &= u.central_at_root(&ab, cfg)?;
            r.antisymmetric &= zero(&ab.add(&poisson_lift(u, cfg, b, a)))?;
            let a2 = a.add(&noise.scale(&phi_l));
            r.lift_independent &= zero(&poisson_lift(u, cfg, &a2, b).sub(&ab))?;
            if j >= i {
                for c in &gens {
                    let bc = u.mul(b, c);
                    let lhs = poisson_lift(u, cfg, a, &bc);
                    let rhs = u.mul(&ab, c).add(&u.mul(b, &poisson_lift(u, cfg, a, c)));
                    r.leibniz &= zero(&lhs.sub(&rhs))?;
                }
            }
        }
    }
    Ok(r)
}

/// A covector at `(N^- g, k, t)`: `Lbar*_eta + R*_xi + L*_lambda` with
/// `eta in k_{N^- g}`, `xi in g` and `lambda = lam varpi`.
#[derive(Debug, Clone, PartialEq)]
pub struct Covector {
    pub eta: (M2, M2),
    pub xi: M2,
    pub lam: C,
}

fn eps(x: &M2, y: &M2) -> C {
    m2_trace(&m2_mul(x, y))
}

/// The form on `g + g`, `eps(x_1, y_1) - eps(x_2, y_2)`.
fn eps2(x: &(M2, M2), y: &(M2, M2)) -> C {
    &eps(&x.0, &y.0) - &eps(&x.1, &y.1)
}

fn diag_pair(x: &M2) -> (M2, M2) {
    (x.clone(), x.clone())
}

/// Components along `k = {(h + a, -h + b)}` and the diagonal `s`.
fn split_ks(x: &(M2, M2)) -> ((M2, M2), (M2, M2)) {
    let d = m2_sub(&x.0, &x.1);
    let half = rat(1, 2);
    let hm = m2_scale(&h_mat(), &(&d[0][0] * &half));
    let am = m2_scale(&e_mat(), &d[0][1]);
    let bm = m2_scale(&f_mat(), &(-&d[1][0]));
    let k1 = m2_add(&hm, &am);
    let k2 = m2_add(&m2_scale(&hm, &ci(-1)), &bm);
    let s = m2_sub(&x.0, &k1);
    ((k1, k2), diag_pair(&s))
}

fn ad2(g: &(M2, M2), x: &(M2, M2)) -> (M2, M2) {
    (adjoint(&g.0, &x.0), adjoint(&g.1, &x.1))
}

/// The Poisson tensor at a point on a pair of covectors.
pub fn poisson_tensor(p: &VPoint, ell: u32, x: &Covector, y: &Covector) -> C {
    let g2 = diag_pair(&p.g);
    let kinv = (m2_inv(&p.k.first()), m2_inv(&p.k.second()));
    let two_l = ci(2 * ell as i64);
    let c_lam = |lam: &C| m2_scale(&h_mat(), &(lam * &rat(1, 2)));
    let gi = m2_inv(&p.g);
    // eta, eta'
    let t1 = eps2(&split_ks(&ad2(&g2, &x.eta)).1, &ad2(&g2, &y.eta));
    // xi, xi'
    let t2 = -&eps2(&split_ks(&ad2(&kinv, &diag_pair(&x.xi))).0, &ad2(&kinv, &diag_pair(&y.xi)));
    // mixed eta, xi
    let t3 = &eps2(&diag_pair(&y.xi), &x.eta) - &eps2(&diag_pair(&x.xi), &y.eta);
    // mixed eta, lambda
    let cy = diag_pair(&adjoint(&gi, &c_lam(&y.lam)));
    let cx = diag_pair(&adjoint(&gi, &c_lam(&x.lam)));
    let t4 = &(&eps2(&cx, &y.eta) - &eps2(&cy, &x.eta)) * &two_l.inv();
    &(&(&t1 + &t2) + &t3) + &t4
}

/// A basis of `k_{N^- g}`: pairs `(h + a, -h + b)` whose difference is
/// conjugated by `g` into `b^-`.
pub fn k_basis(g: &M2) -> Vec<(M2, M2)> {
    let mk = |c: &[C]| (m2_add(&m2_scale(&e_mat(), &c[0]), &m2_scale(&h_mat(), &c[1])), m2_add(&m2_scale(&h_mat(), &(-&c[1])), &m2_scale(&f_mat(), &c[2])));
    let row: Vec<C> = (0..3)
        .map(|i| {
            let mut c = vec![C::zero(); 3];
            c[i] = C::one();
            let (a, b) = mk(&c);
            adjoint(g, &m2_sub(&a, &b))[0][1].clone()
        })
        .collect();
    nullspace(&vec![row], 3).iter().map(|c| mk(c)).collect()
}

/// The six covectors `Lbar*_{eta_1}, Lbar*_{eta_2}, R*_E, R*_H, R*_F, L*_varpi`.
pub fn covector_basis(g: &M2) -> Vec<Covector> {
    let z = m2(ci(0), ci(0), ci(0), ci(0));
    let mut out: Vec<Covector> = k_basis(g).into_iter().map(|eta| Covector { eta, xi: z.clone(), lam: C::zero() }).collect();
    for xi in [e_mat(), h_mat(), f_mat()] {
        out.push(Covector { eta: (z.clone(), z.clone()), xi, lam: C::zero() });
    }
    out.push(Covector { eta: (z.clone(), z.clone()), xi: z, lam: C::one() });
    out
}

/// Rank and radical of the Poisson tensor at a point.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TensorReport {
    pub size: usize,
    pub antisymmetric: bool,
    pub rank: usize,
    /// The covectors `y(lambda, z)` are independent, lie in the radical and
    /// annihilate the tangent space of `V~`.
    pub radical_dim: usize,
    pub radical_in_kernel: bool,
    pub tangent_dim: usize,
    pub radical_annihilates_tangent: bool,
    /// The kernel of the tensor equals the annihilator of the tangent space.
    pub kernel_is_annihilator: bool,
}

impl TensorReport {
    pub fn holds(&self) -> bool {
        self.antisymmetric && self.rank + self.radical_dim == self.size && self.radical_in_kernel && self.radical_annihilates_tangent && self.kernel_is_annihilator
    }
}

/// `y(lambda, z)` for `lambda = lam varpi` and `z = zc F` in `n^-`.
pub fn radical_vector(p: &VPoint, ell: u32, lam: &C, zc: &C) -> Covector {
    let u = m2_add(&m2_scale(&h_mat(), &(&(lam * &rat(1, 2)) * &ci(2 * ell as i64).inv())), &m2_scale(&f_mat(), zc));
    let gi = m2_inv(&p.g);
    let mk = m2_mul(&m2_mul(&p.g, &m2_inv(&p.k.kappa())), &gi);
    let d = adjoint(&gi, &m2_sub(&adjoint(&mk, &u), &u));
    let half = rat(1, 2);
    let hm = m2_scale(&h_mat(), &(&d[0][0] * &half));
    let eta1 = m2_add(&hm, &m2_scale(&e_mat(), &d[0][1]));
    let eta2 = m2_add(&m2_scale(&hm, &ci(-1)), &m2_scale(&f_mat(), &(-&d[1][0])));
    let xi = m2_add(&eta1, &adjoint(&gi, &u));
    Covector { eta: (eta1, eta2), xi, lam: lam.clone() }
}

/// Tangent vectors `Lbar_a + R_b + L_c` of `V~` as `(a, (b_1, b_2), c)`,
/// for `g -> g exp(a)`, `k -> exp(-b) k`, `t -> t exp(c H)`: the solutions of
/// `Ad(g)(a - Ad(kappa) a - b_1 + Ad(kappa) b_2) - 2 ell c H in n^-`.
fn tangent_vectors(p: &VPoint, ell: u32) -> Vec<(M2, (M2, M2), C)> {
    let z = m2(ci(0), ci(0), ci(0), ci(0));
    let kap = p.k.kappa();
    let sl2 = [e_mat(), h_mat(), f_mat()];
    let kb = |c: &[C]| (m2_add(&m2_scale(&e_mat(), &c[0]), &m2_scale(&h_mat(), &c[1])), m2_add(&m2_scale(&h_mat(), &(-&c[1])), &m2_scale(&f_mat(), &c[2])));
    let mut cols: Vec<M2> = Vec::new();
    for x in &sl2 {
        cols.push(adjoint(&p.g, &m2_sub(x, &adjoint(&kap, x))));
    }
    for i in 0..3 {
        let mut c = vec![C::zero(); 3];
        c[i] = C::one();
        let (b1, b2) = kb(&c);
        cols.push(adjoint(&p.g, &m2_sub(&adjoint(&kap, &b2), &b1)));
    }
    cols.push(m2_scale(&h_mat(), &ci(-2 * ell as i64)));
    let m: Vec<Vec<C>> = [(0, 0), (0, 1)].iter().map(|&(i, j)| cols.iter().map(|c| c[i][j].clone()).collect()).collect();
    nullspace(&m, 7)
        .into_iter()
        .map(|s| {
            let a = (0..3).fold(z.clone(), |acc, i| m2_add(&acc, &m2_scale(&sl2[i], &s[i])));
            (a, kb(&s[3..6]), s[6].clone())
        })
        .collect()
}

fn pair_tangent(y: &Covector, t: &(M2, (M2, M2), C)) -> C {
    let a = &t.0;
    let (b1, b2) = &t.1;
    let v1 = eps(a, &m2_sub(&y.eta.0, &y.eta.1));
    let v2 = eps(&m2_sub(b1, b2), &y.xi);
    &(&v1 + &v2) + &(&y.lam * &t.2)
}

/// Rank of the tensor on the six covectors, its radical at the point and the
/// tangent space of `V~`.
pub fn tensor_report(p: &VPoint, ell: u32) -> TensorReport {
    let basis = covector_basis(&p.g);
    let n = basis.len();
    let m: Vec<Vec<C>> = basis.iter().map(|x| basis.iter().map(|y| poisson_tensor(p, ell, x, y)).collect()).collect();
    let antisymmetric = (0..n).all(|i| (0..n).all(|j| (&m[i][j] + &m[j][i]).is_zero()));
    let ys = [radical_vector(p, ell, &ci(1), &ci(0)), radical_vector(p, ell, &ci(0), &ci(1))];
    let flat = |y: &Covector| {
        let mut v = Vec::new();
        for x in [&y.eta.0, &y.eta.1, &y.xi] {
            v.extend([x[0][0].clone(), x[0][1].clone(), x[1][0].clone(), x[1][1].clone()]);
        }
        v.push(y.lam.clone());
        v
    };
    let radical_dim = rank(&ys.iter().map(flat).collect());
    // membership in the covector span: eta in k_{N^- g} and pairing with the basis
    let in_k = |y: &Covector| adjoint(&p.g, &m2_sub(&y.eta.0, &y.eta.1))[0][1].is_zero();
    let radical_in_kernel = ys.iter().all(|y| in_k(y) && basis.iter().all(|b| poisson_tensor(p, ell, y, b).is_zero()));
    let tv = tangent_vectors(p, ell);
    let tangent_dim = rank(&tv.iter().map(|t| basis.iter().map(|b| pair_tangent(b, t)).collect()).collect());
    let radical_annihilates_tangent = ys.iter().all(|y| tv.iter().all(|t| pair_tangent(y, t).is_zero()));
    let pm: Vec<Vec<C>> = tv.iter().map(|t| basis.iter().map(|b| pair_tangent(b, t)).collect()).collect();
    let (ker, ann) = (nullspace(&m, n), nullspace(&pm, n));
    let joint: Vec<Vec<C>> = ker.iter().chain(&ann).cloned().collect();
    let kernel_is_annihilator = ker.len() == ann.len() && rank(&joint) == ker.len();
    TensorReport { size: n, antisymmetric, rank: rank(&m), radical_dim, radical_in_kernel, tangent_dim, radical_annihilates_tangent, kernel_is_annihilator }
}

// -------------------------------------------------------------------- fibers

/// A finite-dimensional algebra by structure constants: `basis_i basis_j =
/// sum_k table[i][j][k] basis_k`.
#[derive(Debug, Clone, PartialEq)]
pub struct FiberAlgebra {
    pub labels: Vec<String>,
    pub table: Vec<Vec<Vec<C>>>,
    pub unit: Vec<C>,
}

impl FiberAlgebra {
    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn mul(&self, x: &[C], y: &[C]) -> Vec<C> {
        let n = self.dim();
        let mut out = vec![C::zero(); n];
        for (i, a) in x.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in y.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                let ab = a * b;
                for (k, c) in self.table[i][j].iter().enumerate() {
                    if !c.is_zero() {
                        out[k] = &out[k] + &(&ab * c);
                    }
                }
            }
        }
        out
    }

    fn unit_vec(&self, i: usize) -> Vec<C> {
        let mut v = vec![C::zero(); self.dim()];
        v[i] = C::one();
        v
    }

    pub fn is_associative(&self) -> bool {
        let n = self.dim();
        (0..n).all(|i| {
            (0..n).all(|j| {
                let ij = &self.table[i][j];
                (0..n).all(|k| {
                    let ek = self.unit_vec(k);
                    self.mul(ij, &ek) == self.mul(&self.unit_vec(i), &self.table[j][k])
                })
            })
        })
    }

    /// Matrix `M_2` over `Q`, for controls.
    pub fn matrices2() -> Self {
        let idx = |i: usize, j: usize| 2 * i + j;
        let mut table = vec![vec![vec![C::zero(); 4]; 4]; 4];
        for i in 0..2 {
            for j in 0..2 {
                for k in 0..2 {
                    table[idx(i, j)][idx(j, k)][idx(i, k)] = C::one();
                }
            }
        }
        let mut unit = vec![C::zero(); 4];
        unit[0] = C::one();
        unit[3] = C::one();
        FiberAlgebra { labels: ["e11", "e12", "e21", "e22"].map(String::from).to_vec(), table, unit }
    }

    /// `Q[x] / (x^2)`, a commutative control.
    pub fn dual_numbers() -> Self {
        let one = C::one();
        let z = C::zero();
        let table = vec![vec![vec![one.clone(), z.clone()], vec![z.clone(), one.clone()]], vec![vec![z.clone(), one.clone()], vec![z.clone(), z.clone()]]];
        FiberAlgebra { labels: vec!["1".into(), "x".into()], table, unit: vec![one, z] }
    }
}

/// The tests behind `is_full_matrix_algebra`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FullMatrixReport {
    pub dim: usize,
    /// `n` with `dim = n^2`, when it exists.
    pub n: Option<usize>,
    pub associative: bool,
    pub center_dim: usize,
    pub trace_form_rank: usize,
    pub full: bool,
}

/// Central simple of dimension `n^2`: the center is the scalars and the trace
/// form of the regular representation is nondegenerate, so the algebra is
/// `M_n` over an algebraic closure.
pub fn is_full_matrix_algebra(a: &FiberAlgebra) -> FullMatrixReport {
    let d = a.dim();
    let n = (0..=d).find(|k| k * k == d);
    let associative = a.is_associative();
    // x central iff sum_i x_i (t[i][j] - t[j][i]) = 0 for all j
    let mut rows = Vec::new();
    for j in 0..d {
        for k in 0..d {
            rows.push((0..d).map(|i| &a.table[i][j][k] - &a.table[j][i][k]).collect::<Vec<_>>());
        }
    }
    let center_dim = nullspace(&rows, d).len();
    // tr(L_{b_i b_j}) = sum_k c_ij^k tr(L_{b_k})
    let tr_l: Vec<C> = (0..d).map(|k| (0..d).fold(C::zero(), |acc, m| &acc + &a.table[k][m][m])).collect();
    let form: Vec<Vec<C>> = (0..d).map(|i| (0..d).map(|j| a.table[i][j].iter().zip(&tr_l).fold(C::zero(), |acc, (c, t)| &acc + &(c * t))).collect()).collect();
    let trace_form_rank = rank(&form);
    FullMatrixReport { dim: d, n, associative, center_dim, trace_form_rank, full: n.is_some() && associative && center_dim == 1 && trace_form_rank == d }
}

/// Data of the fiber of `D^(ell)` over a point in the chart `s != 0`: the
/// basis is `z^i e^j`, `i, j < ell`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FiberData {
    pub ell: u32,
    /// `k_alpha z = p z k_alpha`
    pub p: C,
    /// `e . z^i = sum_j e_on_z[i][j] z^j` at the point.
    pub e_on_z: Vec<Vec<C>>,
    /// Value of `z^ell`.
    pub z_ell: C,
    /// Value of `e^ell`.
    pub e_ell: C,
}

/// Value of the classical coordinate `xbar` and the constants relating `s^ell`
/// and `z^ell` to it: returns `(xbar(p), z^ell / xbar)`.
fn xbar_at(chart: &ChartAlgebra, p: &VPoint) -> Result<(C, C), CenterError> {
    let ring = chart.ring;
    let cfg = ring.cfg.ok_or(CenterError::NoRoot)?;
    let ell = cfg.ell;
    let varpi = chart.varpi;
    // s^ell = r a1_embed(x)
    let mut sl = chart.one();
    for _ in 0..ell {
        sl = chart.raise(&sl)?;
    }
    let mut vals = BTreeMap::new();
    vals.insert(vec![0u32], BigRational::one());
    let ax = ring.a1_embed(varpi, &vals)?.comps[&(varpi * ell as i32)].clone();
    let r = ratio(&sl.num, &ax).ok_or_else(|| CenterError::NoSolution("s^ell is not classical".into()))?;
    let (x, y) = p.row();
    if x.is_zero() {
        return Err(CenterError::OffChart);
    }
    let xb = &y * &(&r * &x).inv();
    let zl = chart.pow(&chart.z()?, ell)?;
    let xbar = chart.xbar()?;
    let d = zl.den.max(xbar.den);
    let c = ratio(&chart.raise_to(&zl, d)?.num, &chart.raise_to(&xbar, d)?.num).ok_or_else(|| CenterError::NoSolution("z^ell is not a multiple of xbar".into()))?;
    Ok((xb, c))
}

/// `c` with `a = c b`, for `b != 0`.
fn ratio(a: &[C], b: &[C]) -> Option<C> {
    let i = b.iter().position(|x| !x.is_zero())?;
    let c = &a[i] * &b[i].inv();
    a.iter().zip(b).all(|(x, y)| *x == y * &c).then_some(c)
}

/// Fiber data at a point for the chart `s = theta_varpi`.
pub fn fiber_data(chart: &ChartAlgebra, conv: &FrobeniusConvention, p: &VPoint) -> Result<FiberData, CenterError> {
    if !chart.w.is_empty() {
        return Err(CenterError::OffChart);
    }
    let ring = chart.ring;
    let u = ring.u;
    let cfg = ring.cfg.ok_or(CenterError::NoRoot)?;
    let ell = cfg.ell;
    let l = ell as usize;
    let (xb, c) = xbar_at(chart, p)?;
    let z = chart.z()?;
    let xbar = chart.xbar()?;
    // basis of the level-ell space: z^j (j < ell) and xbar
    let mut basis = Vec::new();
    for j in 0..ell {
        basis.push(chart.raise_to(&chart.pow(&z, j)?, ell)?.num);
    }
    basis.push(xbar.num.clone());
    let cols: Vec<Vec<C>> = (0..basis[0].len()).map(|r| basis.iter().map(|b| b[r].clone()).collect()).collect();
    let e = u.e_div(0, 1);
    let mut e_on_z = Vec::new();
    for a in 0..ell {
        let za = chart.pow(&z, a)?;
        let ez = ring.act_zeta(&e, &ZetaElem::homogeneous(chart.varpi * za.den as i32, za.num.clone()))?;
        let num = ez.comps.get(&(chart.varpi * za.den as i32)).cloned().unwrap_or_else(|| vec![C::zero(); za.num.len()]);
        let lifted = chart.raise_to(&ChartElem { den: za.den, num }, ell)?;
        let sol = solve(&cols, &lifted.num, l + 1).ok_or_else(|| CenterError::NoSolution("e . z^a outside the chart basis".into()))?;
        let mut row = sol[..l].to_vec();
        row[0] = &row[0] + &(&sol[l] * &xb);
        e_on_z.push(row);
    }
    let zw = u.rd.simple_root(0);
    let pz = cfg.zeta_prime_pow(u.rd.form_v(u.alpha(0), -zw) as i64);
    Ok(FiberData { ell, p: pz, e_on_z, z_ell: &c * &xb, e_ell: &conv.e_scale * &p.k.b })
}

impl FiberData {
    fn idx(&self, a: usize, b: usize) -> usize {
        a * self.ell as usize + b
    }

    /// Left multiplication by `e` on the basis `z^a e^b`.
    fn left_e(&self, v: &[C]) -> Vec<C> {
        let l = self.ell as usize;
        let mut out = vec![C::zero(); l * l];
        for a in 0..l {
            for b in 0..l {
                let x = &v[self.idx(a, b)];
                if x.is_zero() {
                    continue;
                }
                for (j, c) in self.e_on_z[a].iter().enumerate() {
                    out[self.idx(j, b)] = &out[self.idx(j, b)] + &(x * c);
                }
                let pa = self.p.pow(a as i64);
                let (b2, w) = if b + 1 == l { (0, &self.e_ell * &pa) } else { (b + 1, pa) };
                out[self.idx(a, b2)] = &out[self.idx(a, b2)] + &(x * &w);
            }
        }
        out
    }

    /// Left multiplication by `z`.
    fn left_z(&self, v: &[C]) -> Vec<C> {
        let l = self.ell as usize;
        let mut out = vec![C::zero(); l * l];
        for a in 0..l {
            for b in 0..l {
                let x = &v[self.idx(a, b)];
                if x.is_zero() {
                    continue;
                }
                let (a2, w) = if a + 1 == l { (0, self.z_ell.clone()) } else { (a + 1, C::one()) };
                out[self.idx(a2, b)] = &out[self.idx(a2, b)] + &(x * &w);
            }
        }
        out
    }

    pub fn algebra(&self) -> FiberAlgebra {
        let l = self.ell as usize;
        let n = l * l;
        let unit_vec = |i: usize| {
            let mut v = vec![C::zero(); n];
            v[i] = C::one();
            v
        };
        let mut table = vec![vec![Vec::new(); n]; n];
        for a in 0..l {
            for b in 0..l {
                for j in 0..n {
                    let mut v = unit_vec(j);
                    for _ in 0..b {
                        v = self.left_e(&v);
                    }
                    for _ in 0..a {
                        v = self.left_z(&v);
                    }
                    table[self.idx(a, b)][j] = v;
                }
            }
        }
        let labels = (0..l).flat_map(|a| (0..l).map(move |b| format!("z^{a} e^{b}"))).collect();
        FiberAlgebra { labels, table, unit: unit_vec(0) }
    }

    /// `omega = e z - z e` and the scalar `omega^ell`, `None` when that power
    /// is not a multiple of the unit.
    pub fn omega_power(&self) -> Option<C> {
        let l = self.ell as usize;
        let n = l * l;
        let mut one = vec![C::zero(); n];
        one[0] = C::one();
        let ez = self.left_e(&self.left_z(&one));
        let ze = self.left_z(&self.left_e(&one));
        let om: Vec<C> = ez.iter().zip(&ze).map(|(a, b)| a - b).collect();
        let alg = self.algebra();
        let mut pw = one.clone();
        for _ in 0..l {
            pw = alg.mul(&pw, &om);
        }
        let s = pw[0].clone();
        pw.iter().skip(1).all(|x| x.is_zero()).then_some(s)
    }
}

/// The fiber of `D^(ell)` at a point of the chart.
pub fn fiber_at(chart: &ChartAlgebra, conv: &FrobeniusConvention, p: &VPoint) -> Result<FiberAlgebra, CenterError> {
    Ok(fiber_data(chart, conv, p)?.algebra())
}

/// The action of `c = theta_varpi` by conjugation on the generators.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TwistReport {
    /// `c` commutes with `Z_Fr` at `zeta`.
    pub fixes_frobenius: bool,
    /// `c` commutes with the classical coordinate `xbar`.
    pub fixes_classical: bool,
    /// `e(lambda) c = q^{(lambda, varpi)} c e(lambda)`.
    pub scales_sigma: bool,
    /// Image of `sigma_{ell varpi}` under the twist, `zeta^{(ell varpi, varpi)}`.
    pub sigma_factor: C,
    /// The twisted point `(g, k, t t_varpi)` is in `V`.
    pub twisted_in_v: bool,
    /// The fibers over the point and its twist are both full of the same size.
    pub fibers_match: bool,
}

/// Conjugation by `theta_varpi` and the translation it induces on `V`.
pub fn xi_twist(ea: &EAlgebra, chart: &ChartAlgebra, conv: &FrobeniusConvention, p: &VPoint) -> Result<TwistReport, CenterError> {
    let ring = ea.ring;
    let u = ring.u;
    let cfg = ring.cfg.ok_or(CenterError::NoRoot)?;
    let ell = cfg.ell;
    let varpi = u.rd.fundamental_weight(0);
    let s = EElem::from_a(&ring.theta_vector(&[], varpi)?);
    let mut fixes_frobenius = true;
    for (_, z) in u.zfr_generators(ell) {
        let zu = EElem::from_u(&z);
        let d = ea.mul(&zu, &s)?.sub(&ea.mul(&s, &zu)?);
        fixes_frobenius &= ea.specialize(&d)?.is_empty();
    }
    let mut vals = BTreeMap::new();
    vals.insert(vec![1u32], BigRational::one());
    let xb = ring.a1_embed(varpi, &vals)?;
    let sz = ring.theta_vector_zeta(&[], varpi)?;
    let fixes_classical = ring.multiply_zeta(&sz, &xb)? == ring.multiply_zeta(&xb, &sz)?;
    let mut scales_sigma = true;
    for lam in [varpi * ell as i32, -varpi * ell as i32, varpi] {
        let e = EElem::from_e(lam);
        scales_sigma &= ea.mul(&e, &s)? == ea.mul(&s, &e)?.scale(&QScalar::v_pow(u.rd.form_v(lam, varpi)));
    }
    let sigma_factor = cfg.zeta_prime_pow(u.rd.form_v(varpi * ell as i32, varpi) as i64);
    let tw = cfg.zeta_prime_pow(u.rd.form_v(varpi, varpi) as i64);
    let q = VPoint { t: &p.t * &tw, ..p.clone() };
    let twisted_in_v = v_contains(&q, ell);
    let (a, b) = (is_full_matrix_algebra(&fiber_at(chart, conv, p)?), is_full_matrix_algebra(&fiber_at(chart, conv, &q)?));
    Ok(TwistReport { fixes_frobenius, fixes_classical, scales_sigma, sigma_factor, twisted_in_v, fibers_match: a.full && b.full && a.dim == b.dim })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcoord::CoordRing;
    use crate::rootdata::CartanType;

    fn a1() -> (Uq, RootOfUnityConfig) {
        let rd = RootDatum::new(CartanType::A1, None).unwrap();
        let cfg = RootOfUnityConfig::new(3, rd.index as u32, false).unwrap();
        (Uq::new(rd), cfg)
    }

    #[test]
    fn sampled_points_lie_on_v() {
        let pts = sample_v_points(3, 6, 7);
        for p in &pts {
            assert!(v_contains(p, 3));
            assert!(!v_contains(&perturb_off_v(p), 3));
        }
        let id = VPoint { g: m2_id(), k: KPoint { a: ci(0), b: ci(0), h: rat(8, 1) }, t: ci(2) };
        assert!(v_contains(&id, 3));
        let off = VPoint { k: KPoint { a: ci(1), ..id.k.clone() }, ..id };
        assert!(!v_contains(&off, 3));
    }

    #[test]
    fn k_product_matches_matrices() {
        let x = KPoint { a: rat(1, 2), b: ci(3), h: ci(2) };
        let y = KPoint { a: ci(-1), b: rat(2, 3), h: rat(1, 3) };
        let z = x.mul(&y);
        assert_eq!(z.first(), m2_mul(&x.first(), &y.first()));
        assert_eq!(z.second(), m2_mul(&x.second(), &y.second()));
    }

    #[test]
    fn frobenius_evaluation_is_multiplicative() {
        let (u, cfg) = a1();
        let conv = FrobeniusConvention::new(&u, &cfg).unwrap();
        let k = KPoint { a: rat(2, 3), b: ci(-2), h: ci(3) };
        let gens = u.zfr_generators(3);
        for (_, x) in &gens {
            for (_, y) in &gens {
                let xy = conv.evaluate(&cfg, &u.mul(x, y), &k).unwrap();
                let prod = &conv.evaluate(&cfg, x, &k).unwrap() * &conv.evaluate(&cfg, y, &k).unwrap();
                assert_eq!(xy, prod);
            }
        }
        assert_eq!(conv.evaluate(&cfg, &u.k(u.alpha(0) * 3), &k).unwrap(), ci(9));
        assert!(conv.evaluate(&cfg, &u.e(0), &k).is_err());
    }

    #[test]
    fn omega_routes_agree_on_v() {
        let (u, cfg) = a1();
        let ring = CoordRing::new(&u, Some(cfg));
        let ea = EAlgebra::new(&ring);
        let conv = FrobeniusConvention::new(&u, &cfg).unwrap();
        for p in sample_v_points(3, 2, 11) {
            for phi in [ClassicalFn::monomial(1, 0), ClassicalFn::monomial(1, 1)] {
                for w in [Which::One, Which::Two, Which::Difference] {
                    let r = omega_on_variety(&ea, &conv, &phi, w, &p).unwrap();
                    assert!(r.agrees(), "{w:?} {phi:?}: {r:?}");
                }
                let d = omega_on_variety(&ea, &conv, &phi, Which::Difference, &p).unwrap();
                assert!(d.geometric.is_zero());
            }
        }
    }

    #[test]
    fn casimir_and_m_varpi() {
        let (u, _) = a1();
        let c = casimir_a1(&u);
        let iota = hc_iota(&u, &c).unwrap();
        assert!(dot_invariant(&u.rd, &iota));
        assert!(in_twice_lattice(&iota));
        let varpi = u.rd.fundamental_weight(0);
        let m = m_lambda(&u, varpi).unwrap();
        assert_eq!(hc_iota(&u, &m).unwrap(), m_lambda_iota(&u.rd, varpi));
        let q = QScalar::v_pow(2);
        let qq = &q - &q.inv();
        assert_eq!(m, c.scale(&(&q * &(&qq * &qq))));
        assert!(hc_iota(&u, &u.e(0)).is_err());
    }

    #[test]
    fn poisson_on_frobenius_generators() {
        let (u, cfg) = a1();
        assert!(poisson_checks(&u, &cfg).is_err());
        let u = Uq::with_bound(u.rd.clone(), 9);
        let r = poisson_checks(&u, &cfg).unwrap();
        assert!(r.holds(), "{r:?}");
        // the raw commutator is not divisible by the normalization for non-central inputs
        assert!(poisson_bracket(&u, &cfg, &u.e(0), &u.f(0)).is_err());
    }

    #[test]
    fn tensor_rank_and_radical() {
        for p in sample_v_points(3, 3, 5) {
            let r = tensor_report(&p, 3);
            assert!(r.antisymmetric);
            assert_eq!((r.size, r.rank, r.radical_dim, r.tangent_dim), (6, 4, 2, 4), "{r:?}");
            assert!(r.holds(), "{r:?}");
            // off V the tensor is nondegenerate on the six covectors
            let off = tensor_report(&perturb_off_v(&p), 3);
            assert_eq!(off.rank, 6, "{off:?}");
        }
    }

    #[test]
    fn matrix_controls() {
        assert!(is_full_matrix_algebra(&FiberAlgebra::matrices2()).full);
        let d = is_full_matrix_algebra(&FiberAlgebra::dual_numbers());
        assert!(!d.full && d.n.is_none());
    }

    #[test]
    fn fibers_are_full_matrix_algebras() {
        let (u, cfg) = a1();
        let ring = CoordRing::new(&u, Some(cfg));
        let chart = ChartAlgebra::new(&ring, &[], 1).unwrap();
        let conv = FrobeniusConvention::new(&u, &cfg).unwrap();
        let pts = sample_v_points(3, 3, 19);
        let mut ratios = Vec::new();
        for p in &pts {
            let fd = fiber_data(&chart, &conv, p).unwrap();
            let rep = is_full_matrix_algebra(&fd.algebra());
            assert!(rep.full, "{rep:?}");
            assert_eq!(rep.n, Some(3));
            let w = fd.omega_power().unwrap();
            ratios.push(&w * &(&p.k.h.pow(-2) * &p.t.pow(6)));
        }
        assert!(ratios.windows(2).all(|w| w[0] == w[1]), "{ratios:?}");
    }

    #[test]
    fn twist_by_theta_varpi() {
        let (u, cfg) = a1();
        let ring = CoordRing::new(&u, Some(cfg));
        let ea = EAlgebra::new(&ring);
        let chart = ChartAlgebra::new(&ring, &[], 1).unwrap();
        let conv = FrobeniusConvention::new(&u, &cfg).unwrap();
        let p = &sample_v_points(3, 1, 23)[0];
        let r = xi_twist(&ea, &chart, &conv, p).unwrap();
        assert!(r.fixes_frobenius && r.fixes_classical && r.scales_sigma && r.twisted_in_v && r.fibers_match, "{r:?}");
    }

    #[test]
    fn degenerate_fiber_off_v() {
        let (u, cfg) = a1();
        let ring = CoordRing::new(&u, Some(cfg));
        let chart = ChartAlgebra::new(&ring, &[], 1).unwrap();
        let conv = FrobeniusConvention::new(&u, &cfg).unwrap();
        let p = &sample_v_points(3, 1, 29)[0];
        let mut fd = fiber_data(&chart, &conv, p).unwrap();
        let mut vals = Vec::new();
        for e in 0..3 {
            fd.e_ell = ci(e);
            vals.push(fd.omega_power().unwrap());
        }
        // omega^ell is affine in e^ell
        assert_eq!(&vals[2] - &vals[1], &vals[1] - &vals[0]);
        fd.e_ell = -&(&vals[0] * &(&vals[1] - &vals[0]).inv());
        assert!(fd.omega_power().unwrap().is_zero());
        let r = is_full_matrix_algebra(&fd.algebra());
        assert!(r.associative && !r.full, "{r:?}");
    }
}
