//! Graded coordinate rings `A = sum_lambda A(lambda)` over `Q(v)`, their
//! `A`-forms and specializations at `zeta`, the classical subring `A_1`,
//! extremal elements and the degree-zero chart of a localization.
//!
//! `A(lambda)` is realized by matrix coefficients: a vector `m` of the simple
//! module `L_-(lambda)` gives the function `phi_m(u) = <v_lambda^*, u m>`.
//! Left multiplication by `U` is `u . phi_m = phi_{u m}`, and products are
//! read off inside `L_-(lambda) (x) L_-(mu)`.

use crate::qreps::{simple_fd, specialize_module, kron, lattice_span, QrepsError, WeightModule};
use crate::qscalars::field::{independent_rows, inverse, mat_mul, mat_vec, rank, solve, vec_mat, zeros};
use crate::qscalars::{CycScalar, Field, Mat, QScalar, RootOfUnityConfig};
use crate::rootdata::Weight;
use crate::uqalg::{Gamma, Mono, Tensor, UElem, Uq};
use num_rational::BigRational;
use serde::Serialize;
use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, RwLock};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum QcoordError {
    #[error("weight {0} is not dominant")]
    NotDominant(String),
    #[error(transparent)]
    Module(#[from] QrepsError),
    #[error("no root of unity configured")]
    NoRoot,
    #[error("coefficient is not in A: {0}")]
    NotIntegral(String),
    #[error("extremal weight space of {0} is not one-dimensional")]
    Extremal(String),
    #[error("product is inconsistent in grade {0}")]
    Product(String),
    #[error("classical values admit no lift: {0}")]
    NoLift(String),
    #[error("chart: {0}")]
    Chart(String),
}

/// Which ring a computation lives in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Level {
    F,
    A,
    Zeta,
}

/// Sum of homogeneous components; `comps[lambda]` holds coordinates in the
/// basis of `A(lambda)` at the element's level.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct AElem<F> {
    pub comps: BTreeMap<Weight, Vec<F>>,
}

/// Coordinates in the module basis of `L_-(lambda)`.
pub type FElem = AElem<QScalar>;
/// Coordinates in the lattice basis, specialized at `zeta`.
pub type ZetaElem = AElem<CycScalar>;

impl<F: Field> AElem<F> {
    pub fn zero() -> Self {
        AElem { comps: BTreeMap::new() }
    }

    pub fn homogeneous(lambda: Weight, v: Vec<F>) -> Self {
        let mut a = Self::zero();
        a.comps.insert(lambda, v);
        a.prune();
        a
    }

    fn prune(&mut self) {
        self.comps.retain(|_, v| v.iter().any(|x| !x.is_zero()));
    }

    pub fn is_zero(&self) -> bool {
        self.comps.values().all(|v| v.iter().all(|x| x.is_zero()))
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut r = self.clone();
        for (l, v) in &o.comps {
            match r.comps.get_mut(l) {
                Some(w) => {
                    for (a, b) in w.iter_mut().zip(v) {
                        *a = a.add(b);
                    }
                }
                None => {
                    r.comps.insert(*l, v.clone());
                }
            }
        }
        r.prune();
        r
    }

    pub fn scale(&self, c: &F) -> Self {
        let mut r = AElem { comps: self.comps.iter().map(|(l, v)| (*l, v.iter().map(|x| x.mul(c)).collect())).collect() };
        r.prune();
        r
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.scale(&F::one().neg()))
    }
}

/// One grade `A(lambda)` at all available levels.
#[derive(Debug, Clone)]
pub struct Component {
    pub lambda: Weight,
    /// `L_-(lambda)` over `Q(v)`.
    pub module: WeightModule<QScalar>,
    /// Index of the highest weight vector.
    pub top: usize,
    /// Columns: an `A`-basis of `A_A(lambda)` in module coordinates.
    pub lattice: Option<Mat<QScalar>>,
    pub lattice_inv: Option<Mat<QScalar>>,
    /// `A_zeta(lambda)` with its `U_zeta^L`-action.
    pub zeta: Option<WeightModule<CycScalar>>,
}

impl Component {
    pub fn dim(&self) -> usize {
        self.module.dim()
    }

    pub fn weights(&self) -> &[Weight] {
        &self.module.weights
    }
}

struct ProductTable {
    f: Mat<QScalar>,
    zeta: Option<Mat<CycScalar>>,
}

/// The graded ring together with its caches.
pub struct CoordRing<'a> {
    pub u: &'a Uq,
    pub cfg: Option<RootOfUnityConfig>,
    comps: RwLock<HashMap<Weight, Arc<Component>>>,
    products: RwLock<HashMap<(Weight, Weight), Arc<ProductTable>>>,
    emonos: RwLock<HashMap<Gamma, Arc<Vec<(Mono, UElem)>>>>,
}

/// `t . x` for a covector `t` on a module over `Q(v)`.
pub fn covector_act(m: &WeightModule<QScalar>, x: &UElem, t: &[QScalar]) -> Vec<QScalar> {
    let rank = m.rd.rank;
    let es: Vec<Mat<QScalar>> = (0..rank).map(|i| m.e(i)).collect();
    let fs: Vec<Mat<QScalar>> = (0..rank).map(|i| m.f(i)).collect();
    let mut out = vec![QScalar::zero(); m.dim()];
    for (key, c) in &x.terms {
        let mut w = t.to_vec();
        for &i in &key.f {
            w = vec_mat(&w, &fs[i as usize]);
        }
        for (j, x) in w.iter_mut().enumerate() {
            if !x.is_zero() {
                *x = &*x * &QScalar::v_pow(m.rd.form_v(m.weights[j], key.k));
            }
        }
        for &i in &key.e {
            w = vec_mat(&w, &es[i as usize]);
        }
        for (o, x) in out.iter_mut().zip(&w) {
            if !x.is_zero() {
                *o = &*o + &(c * x);
            }
        }
    }
    out
}

fn unit<F: Field>(n: usize, j: usize) -> Vec<F> {
    let mut v = vec![F::zero(); n];
    v[j] = F::one();
    v
}

fn at_root(cfg: &RootOfUnityConfig, x: &QScalar) -> Result<CycScalar, QcoordError> {
    if x.is_zero() {
        return Ok(CycScalar::zero());
    }
    cfg.specialize(x).map_err(|_| QcoordError::NotIntegral(x.to_string()))
}

fn spec_mat(cfg: &RootOfUnityConfig, m: &Mat<QScalar>) -> Result<Mat<CycScalar>, QcoordError> {
    m.iter().map(|r| r.iter().map(|x| at_root(cfg, x)).collect()).collect()
}

impl<'a> CoordRing<'a> {
    pub fn new(u: &'a Uq, cfg: Option<RootOfUnityConfig>) -> Self {
        CoordRing { u, cfg, comps: RwLock::new(HashMap::new()), products: RwLock::new(HashMap::new()), emonos: RwLock::new(HashMap::new()) }
    }

    fn cfg(&self) -> Result<&RootOfUnityConfig, QcoordError> {
        self.cfg.as_ref().ok_or(QcoordError::NoRoot)
    }

    /// Divided PBW monomials of `U^+` of weight `gamma`.
    fn e_monos(&self, g: Gamma) -> Arc<Vec<(Mono, UElem)>> {
        if let Some(v) = self.emonos.read().unwrap().get(&g) {
            return v.clone();
        }
        let v: Arc<Vec<(Mono, UElem)>> = Arc::new(self.u.pbw_monos(g).into_iter().map(|m| {
            let x = self.u.pbw_element_divided(true, &m);
            (m, x)
        }).collect());
        self.emonos.write().unwrap().insert(g, v.clone());
        v
    }

    /// `A(lambda)`, computing the lattice and the `zeta`-form when a root is configured.
    pub fn component(&self, lambda: Weight) -> Result<Arc<Component>, QcoordError> {
        if let Some(c) = self.comps.read().unwrap().get(&lambda) {
            return Ok(c.clone());
        }
        if !lambda.is_dominant() {
            return Err(QcoordError::NotDominant(self.u.rd.fmt_weight(lambda)));
        }
        let (module, _) = simple_fd(self.u, lambda)?;
        let top = module.weight_space(lambda)[0];
        let mut c = Component { lambda, module, top, lattice: None, lattice_inv: None, zeta: None };
        if let Some(cfg) = self.cfg {
            let lat = self.dual_lattice(&c, &cfg)?;
            let inv = inverse(&lat).expect("lattice basis is invertible");
            let mut conj = c.module.clone();
            for g in conj.gens.values_mut() {
                *g = mat_mul(&mat_mul(&inv, g), &lat);
            }
            c.zeta = Some(specialize_module(&conj, &cfg)?);
            c.lattice = Some(lat);
            c.lattice_inv = Some(inv);
        }
        let c = Arc::new(c);
        self.comps.write().unwrap().insert(lambda, c.clone());
        Ok(c)
    }

    /// Same as [`component`](Self::component), named by level; the `A` and
    /// `zeta` levels require a configured root.
    pub fn a_component(&self, lambda: Weight, level: Level) -> Result<Arc<Component>, QcoordError> {
        let c = self.component(lambda)?;
        if level != Level::F && c.zeta.is_none() {
            return Err(QcoordError::NoRoot);
        }
        Ok(c)
    }

    /// `{m : <v^*, e^(E) m> in A for all divided monomials E}`, one weight at a time.
    fn dual_lattice(&self, c: &Component, cfg: &RootOfUnityConfig) -> Result<Mat<QScalar>, QcoordError> {
        let n = c.dim();
        let t = unit::<QScalar>(n, c.top);
        let mut lat = zeros(n, n);
        for (nu, _) in c.module.character() {
            let idx = c.module.weight_space(nu);
            let g = self.u.rd.alpha_coords(c.lambda - nu).expect("weights lie below lambda");
            let rows: Vec<Vec<QScalar>> = self
                .e_monos(g)
                .iter()
                .map(|(_, x)| {
                    let r = covector_act(&c.module, x, &t);
                    idx.iter().map(|&j| r[j].clone()).collect()
                })
                .collect();
            let b = lattice_span(&rows, cfg);
            if b.len() != idx.len() {
                return Err(QrepsError::Window(format!("dual lattice rank {} at weight {}", b.len(), self.u.rd.fmt_weight(nu))).into());
            }
            let binv = inverse(&b).expect("lattice rows are independent");
            for (a, &r) in idx.iter().enumerate() {
                for (bcol, &cidx) in idx.iter().enumerate() {
                    lat[r][cidx] = binv[a][bcol].clone();
                }
            }
        }
        Ok(lat)
    }

    /// Basis vector `j` of `A(lambda)` over `Q(v)`.
    pub fn basis_f(&self, lambda: Weight, j: usize) -> Result<FElem, QcoordError> {
        let c = self.component(lambda)?;
        Ok(AElem::homogeneous(lambda, unit(c.dim(), j)))
    }

    /// Lattice basis vector `j` of `A_zeta(lambda)`.
    pub fn basis_zeta(&self, lambda: Weight, j: usize) -> Result<ZetaElem, QcoordError> {
        let c = self.a_component(lambda, Level::Zeta)?;
        Ok(AElem::homogeneous(lambda, unit(c.dim(), j)))
    }

    /// `1 in A(0)`.
    pub fn one_f(&self) -> FElem {
        AElem::homogeneous(Weight::ZERO, vec![QScalar::one()])
    }

    /// `<phi, u>`.
    pub fn hopf_pair(&self, phi: &FElem, u: &UElem) -> Result<QScalar, QcoordError> {
        let mut s = QScalar::zero();
        for (l, m) in &phi.comps {
            let c = self.component(*l)?;
            s = &s + &c.module.act(self.u, u, m)[c.top];
        }
        Ok(s)
    }

    /// `<a, u>` for `a` at `zeta` and `u` in the divided-power form `U_A^L`.
    pub fn hopf_pair_zeta(&self, a: &ZetaElem, u: &UElem) -> Result<CycScalar, QcoordError> {
        let cfg = *self.cfg()?;
        let mut s = CycScalar::zero();
        for (l, v) in &a.comps {
            let c = self.a_component(*l, Level::Zeta)?;
            let lat = c.lattice.as_ref().unwrap();
            let row = covector_act(&c.module, u, &unit(c.dim(), c.top));
            for (j, aj) in v.iter().enumerate() {
                if aj.is_zero() {
                    continue;
                }
                let val = row.iter().zip(lat.iter()).fold(QScalar::zero(), |acc, (r, lr)| if r.is_zero() { acc } else { &acc + &(r * &lr[j]) });
                s = &s + &(aj * &at_root(&cfg, &val)?);
            }
        }
        Ok(s)
    }

    /// `<phi (x) psi, t>` for a two-fold tensor.
    pub fn hopf_pair_tensor(&self, phi: &FElem, psi: &FElem, t: &Tensor) -> Result<QScalar, QcoordError> {
        let mut s = QScalar::zero();
        for (keys, c) in &t.terms {
            let a = self.hopf_pair(phi, &UElem::term(keys[0].clone(), QScalar::one()))?;
            if a.is_zero() {
                continue;
            }
            let b = self.hopf_pair(psi, &UElem::term(keys[1].clone(), QScalar::one()))?;
            s = &s + &(&(c * &a) * &b);
        }
        Ok(s)
    }

    /// Left action `u . phi`.
    pub fn act(&self, u: &UElem, phi: &FElem) -> Result<FElem, QcoordError> {
        let mut r = AElem::zero();
        for (l, m) in &phi.comps {
            let c = self.component(*l)?;
            r = r.add(&AElem::homogeneous(*l, c.module.act(self.u, u, m)));
        }
        Ok(r)
    }

    /// Left action of `u in U_A^L` on `A_zeta`.
    pub fn act_zeta(&self, u: &UElem, a: &ZetaElem) -> Result<ZetaElem, QcoordError> {
        let cfg = *self.cfg()?;
        let mut r = AElem::zero();
        for (l, v) in &a.comps {
            let c = self.a_component(*l, Level::Zeta)?;
            let m = mat_mul(&mat_mul(c.lattice_inv.as_ref().unwrap(), &c.module.act_matrix(self.u, u)), c.lattice.as_ref().unwrap());
            r = r.add(&AElem::homogeneous(*l, mat_vec(&spec_mat(&cfg, &m)?, v)));
        }
        Ok(r)
    }

    /// Structure constants `A(lambda) (x) A(mu) -> A(lambda + mu)`.
    fn product_table(&self, lambda: Weight, mu: Weight) -> Result<Arc<ProductTable>, QcoordError> {
        if let Some(p) = self.products.read().unwrap().get(&(lambda, mu)) {
            return Ok(p.clone());
        }
        let (cl, cm) = (self.component(lambda)?, self.component(mu)?);
        let cs = self.component(lambda + mu)?;
        let tens = cl.module.tensor(&cm.module);
        let t_tens = unit::<QScalar>(tens.dim(), cl.top * cm.dim() + cm.top);
        let t_sum = unit::<QScalar>(cs.dim(), cs.top);
        let mut table = zeros(cs.dim(), tens.dim());
        for (nu, _) in cs.module.character() {
            let idx = cs.module.weight_space(nu);
            let g = self.u.rd.alpha_coords(lambda + mu - nu).unwrap();
            let monos = self.e_monos(g);
            let mut p = Vec::new();
            let mut r = Vec::new();
            for (_, x) in monos.iter() {
                let row = covector_act(&cs.module, x, &t_sum);
                p.push(idx.iter().map(|&j| row[j].clone()).collect::<Vec<_>>());
                r.push(covector_act(&tens, x, &t_tens));
            }
            let chosen = independent_rows(&p);
            if chosen.len() != idx.len() {
                return Err(QcoordError::Product(self.u.rd.fmt_weight(nu)));
            }
            let psq: Mat<QScalar> = chosen.iter().map(|&i| p[i].clone()).collect();
            let rsq: Mat<QScalar> = chosen.iter().map(|&i| r[i].clone()).collect();
            let block = mat_mul(&inverse(&psq).unwrap(), &rsq);
            // the remaining functionals must agree as well
            if mat_mul(&p, &block) != r {
                return Err(QcoordError::Product(self.u.rd.fmt_weight(nu)));
            }
            for (a, &row) in idx.iter().enumerate() {
                table[row] = block[a].clone();
            }
        }
        let zeta = match self.cfg {
            Some(cfg) => {
                let lat = kron(cl.lattice.as_ref().unwrap(), cm.lattice.as_ref().unwrap());
                let m = mat_mul(&mat_mul(cs.lattice_inv.as_ref().unwrap(), &table), &lat);
                Some(spec_mat(&cfg, &m)?)
            }
            None => None,
        };
        let pt = Arc::new(ProductTable { f: table, zeta });
        self.products.write().unwrap().insert((lambda, mu), pt.clone());
        Ok(pt)
    }

    /// Structure constants of the `A`-form in lattice coordinates; every entry lies in `A`.
    pub fn lattice_structure_constants(&self, lambda: Weight, mu: Weight) -> Result<Mat<QScalar>, QcoordError> {
        let (cl, cm, cs) = (self.a_component(lambda, Level::A)?, self.component(mu)?, self.component(lambda + mu)?);
        let t = self.product_table(lambda, mu)?;
        let lat = kron(cl.lattice.as_ref().unwrap(), cm.lattice.as_ref().unwrap());
        Ok(mat_mul(&mat_mul(cs.lattice_inv.as_ref().unwrap(), &t.f), &lat))
    }

    pub fn multiply_a(&self, phi: &FElem, psi: &FElem) -> Result<FElem, QcoordError> {
        let mut r = AElem::zero();
        for (l, a) in &phi.comps {
            for (m, b) in &psi.comps {
                let t = self.product_table(*l, *m)?;
                r = r.add(&AElem::homogeneous(*l + *m, mat_vec(&t.f, &kron_vec(a, b))));
            }
        }
        Ok(r)
    }

    pub fn multiply_zeta(&self, phi: &ZetaElem, psi: &ZetaElem) -> Result<ZetaElem, QcoordError> {
        self.cfg()?;
        let mut r = AElem::zero();
        for (l, a) in &phi.comps {
            for (m, b) in &psi.comps {
                let t = self.product_table(*l, *m)?;
                r = r.add(&AElem::homogeneous(*l + *m, mat_vec(t.zeta.as_ref().unwrap(), &kron_vec(a, b))));
            }
        }
        Ok(r)
    }

    /// Image in `A_zeta` of an element of the `A`-form given in module coordinates.
    pub fn to_zeta(&self, phi: &FElem) -> Result<ZetaElem, QcoordError> {
        let cfg = *self.cfg()?;
        let mut r = AElem::zero();
        for (l, m) in &phi.comps {
            let c = self.a_component(*l, Level::Zeta)?;
            let coords = mat_vec(c.lattice_inv.as_ref().unwrap(), m);
            let z: Result<Vec<CycScalar>, _> = coords.iter().map(|x| at_root(&cfg, x)).collect();
            r = r.add(&AElem::homogeneous(*l, z?));
        }
        Ok(r)
    }

    /// Weight (under the left action) of basis vector `j` of `A(lambda)`.
    pub fn weight_of(&self, lambda: Weight, j: usize) -> Result<Weight, QcoordError> {
        Ok(self.component(lambda)?.weights()[j])
    }

    fn extremal_index(&self, w: &[usize], lambda: Weight) -> Result<(Arc<Component>, usize), QcoordError> {
        let rd = &self.u.rd;
        let inv: Vec<usize> = w.iter().rev().copied().collect();
        let xi = rd.apply_word(&inv, lambda);
        let c = self.component(lambda)?;
        let sp = c.module.weight_space(xi);
        if sp.len() != 1 {
            return Err(QcoordError::Extremal(rd.fmt_weight(xi)));
        }
        Ok((c.clone(), sp[0]))
    }

    /// Basis vector of the extremal weight space `A(lambda)_{w^-1 lambda}`.
    pub fn theta_vector(&self, w: &[usize], lambda: Weight) -> Result<FElem, QcoordError> {
        let (c, j) = self.extremal_index(w, lambda)?;
        Ok(AElem::homogeneous(lambda, unit(c.dim(), j)))
    }

    /// Lattice basis vector of `A_zeta(lambda)_{w^-1 lambda}`.
    pub fn theta_vector_zeta(&self, w: &[usize], lambda: Weight) -> Result<ZetaElem, QcoordError> {
        let (c, j) = self.extremal_index(w, lambda)?;
        if c.zeta.is_none() {
            return Err(QcoordError::NoRoot);
        }
        Ok(AElem::homogeneous(lambda, unit(c.dim(), j)))
    }

    /// The `U_zeta^L`-submodule of `A_zeta(ell lambda)` generated by its highest
    /// weight vector; this is the image of `A_1(lambda)`.
    pub fn a1_image(&self, lambda: Weight) -> Result<Vec<Vec<CycScalar>>, QcoordError> {
        let ell = self.cfg()?.ell as i32;
        let c = self.a_component(lambda * ell, Level::Zeta)?;
        let z = c.zeta.as_ref().unwrap();
        let mut span: Vec<Vec<CycScalar>> = vec![unit(c.dim(), c.top)];
        let mut frontier = span.clone();
        while let Some(v) = frontier.pop() {
            for ((positive, _, _), g) in &z.gens {
                if *positive {
                    continue;
                }
                let w = mat_vec(g, &v);
                let mut trial = span.clone();
                trial.push(w.clone());
                if rank(&trial) > span.len() {
                    span.push(w.clone());
                    frontier.push(w);
                }
            }
        }
        Ok(span)
    }

    /// The element of `A_zeta(ell lambda)` pairing with `e^(ell M)` as the
    /// classical coordinate pairs with `e^(M)`, and with every other divided
    /// PBW monomial of `U^+` by zero. `values` maps monomials `M` to
    /// `<phi, e^(M)>`.
    pub fn a1_embed(&self, lambda: Weight, values: &BTreeMap<Mono, BigRational>) -> Result<ZetaElem, QcoordError> {
        let cfg = *self.cfg()?;
        let ell = cfg.ell as i32;
        let big = lambda * ell;
        let c = self.a_component(big, Level::Zeta)?;
        let lat = c.lattice.as_ref().unwrap();
        let t = unit::<QScalar>(c.dim(), c.top);
        let mut by_gamma: BTreeMap<Gamma, Vec<(&Mono, &BigRational)>> = BTreeMap::new();
        for (m, x) in values {
            by_gamma.entry(self.u.mono_gamma(m)).or_default().push((m, x));
        }
        let mut out = vec![CycScalar::zero(); c.dim()];
        for (g, vals) in by_gamma {
            let nu = big - self.u.rd.from_alpha_coords([g[0] * ell, g[1] * ell]);
            let idx = c.module.weight_space(nu);
            if idx.is_empty() {
                if vals.iter().all(|(_, x)| num_traits::Zero::is_zero(*x)) {
                    continue;
                }
                return Err(QcoordError::NoLift(self.u.rd.fmt_weight(nu)));
            }
            let mut rows = Vec::new();
            let mut rhs = Vec::new();
            for (m, x) in self.e_monos([g[0] * ell, g[1] * ell]).iter() {
                let r = covector_act(&c.module, x, &t);
                let full: Vec<QScalar> = idx
                    .iter()
                    .map(|&j| r.iter().zip(lat.iter()).fold(QScalar::zero(), |acc, (a, lr)| if a.is_zero() { acc } else { &acc + &(a * &lr[j]) }))
                    .collect();
                rows.push(full.iter().map(|q| at_root(&cfg, q)).collect::<Result<Vec<_>, _>>()?);
                let target = if m.iter().all(|&k| k % cfg.ell == 0) {
                    let small: Mono = m.iter().map(|&k| k / cfg.ell).collect();
                    vals.iter().find(|(mm, _)| **mm == small).map_or(CycScalar::zero(), |(_, x)| CycScalar::rational((*x).clone()))
                } else {
                    CycScalar::zero()
                };
                rhs.push(target);
            }
            let sol = solve(&rows, &rhs, idx.len()).ok_or_else(|| QcoordError::NoLift(self.u.rd.fmt_weight(nu)))?;
            for (a, &j) in idx.iter().enumerate() {
                out[j] = sol[a].clone();
            }
        }
        Ok(AElem::homogeneous(big, out))
    }
}

fn kron_vec<F: Field>(a: &[F], b: &[F]) -> Vec<F> {
    let mut out = Vec::with_capacity(a.len() * b.len());
    for x in a {
        for y in b {
            out.push(x.mul(y));
        }
    }
    out
}

/// A fraction `num * s^{-den}` with `num in A_zeta(den * lambda_s)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ChartElem {
    pub den: u32,
    pub num: Vec<CycScalar>,
}

/// Degree-zero part of the localization of `A_zeta` at powers of an extremal
/// element `s in A_zeta(varpi)_{w^-1 varpi}`, for a rank-one root datum.
pub struct ChartAlgebra<'r, 'a> {
    pub ring: &'r CoordRing<'a>,
    pub w: Vec<usize>,
    pub level: u32,
    pub varpi: Weight,
    pub s: ZetaElem,
    /// `s psi_j = c_j psi_j s` for lattice basis vectors of `A_zeta(m varpi)`.
    qcomm: RwLock<HashMap<u32, Arc<Vec<CycScalar>>>>,
}

/// Outcome of the freeness check of a chart.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChartReport {
    pub ell: u32,
    pub level: u32,
    /// Number of monomials `xbar^i z^j` with `j < ell` tested at each level.
    pub counts: Vec<usize>,
    pub ranks: Vec<usize>,
    pub dims: Vec<usize>,
    pub xbar_central: bool,
    pub z_pow_ell_is_xbar: bool,
    /// Free rank over the classical sub-chart; `ell` when every check passes.
    pub free_rank: usize,
}

impl<'r, 'a> ChartAlgebra<'r, 'a> {
    pub fn new(ring: &'r CoordRing<'a>, w: &[usize], level: u32) -> Result<Self, QcoordError> {
        let rd = &ring.u.rd;
        if rd.rank != 1 {
            return Err(QcoordError::Chart("charts are built for rank one".into()));
        }
        ring.cfg()?;
        let varpi = rd.fundamental_weight(0);
        let s = ring.theta_vector_zeta(w, varpi)?;
        Ok(ChartAlgebra { ring, w: w.to_vec(), level, varpi, s, qcomm: RwLock::new(HashMap::new()) })
    }

    fn grade(&self, den: u32) -> Weight {
        self.varpi * den as i32
    }

    fn comp(&self, den: u32) -> Result<Arc<Component>, QcoordError> {
        self.ring.a_component(self.grade(den), Level::Zeta)
    }

    pub fn one(&self) -> ChartElem {
        ChartElem { den: 0, num: vec![CycScalar::one()] }
    }

    fn s_vec(&self) -> &Vec<CycScalar> {
        &self.s.comps[&self.varpi]
    }

    /// `num * s`, same fraction with denominator raised by one.
    pub fn raise(&self, x: &ChartElem) -> Result<ChartElem, QcoordError> {
        let a = AElem::homogeneous(self.grade(x.den), x.num.clone());
        let p = self.ring.multiply_zeta(&a, &self.s)?;
        let dim = self.comp(x.den + 1)?.dim();
        Ok(ChartElem { den: x.den + 1, num: p.comps.get(&self.grade(x.den + 1)).cloned().unwrap_or_else(|| vec![CycScalar::zero(); dim]) })
    }

    pub fn raise_to(&self, x: &ChartElem, den: u32) -> Result<ChartElem, QcoordError> {
        let mut y = x.clone();
        while y.den < den {
            y = self.raise(&y)?;
        }
        Ok(y)
    }

    /// Constants `c_j` with `s psi_j = c_j psi_j s`, checked exactly.
    fn commutation(&self, den: u32) -> Result<Arc<Vec<CycScalar>>, QcoordError> {
        if let Some(c) = self.qcomm.read().unwrap().get(&den) {
            return Ok(c.clone());
        }
        let l = self.grade(den);
        let dim = self.comp(den)?.dim();
        let mut cs = Vec::with_capacity(dim);
        for j in 0..dim {
            let psi = self.ring.basis_zeta(l, j)?;
            let left = self.ring.multiply_zeta(&self.s, &psi)?;
            let right = self.ring.multiply_zeta(&psi, &self.s)?;
            let key = l + self.varpi;
            let (a, b) = (left.comps.get(&key), right.comps.get(&key));
            let c = match (a, b) {
                (Some(a), Some(b)) => {
                    let p = b.iter().position(|x| !x.is_zero()).unwrap();
                    let c = a[p].mul(&b[p].inv());
                    if a.iter().zip(b).any(|(x, y)| *x != y.mul(&c)) {
                        return Err(QcoordError::Chart(format!("s does not q-commute with basis vector {j} of grade {den}")));
                    }
                    c
                }
                _ => return Err(QcoordError::Chart("zero product with s".into())),
            };
            cs.push(c);
        }
        let cs = Arc::new(cs);
        self.qcomm.write().unwrap().insert(den, cs.clone());
        Ok(cs)
    }

    /// `(phi s^-a)(psi s^-b) = phi (s^-a psi s^a) s^-(a+b)`.
    pub fn mul(&self, x: &ChartElem, y: &ChartElem) -> Result<ChartElem, QcoordError> {
        let c = self.commutation(y.den)?;
        let twisted: Vec<CycScalar> = y.num.iter().zip(c.iter()).map(|(p, cj)| p.mul(&cj.pow(-(x.den as i64)))).collect();
        let a = AElem::homogeneous(self.grade(x.den), x.num.clone());
        let b = AElem::homogeneous(self.grade(y.den), twisted);
        let den = x.den + y.den;
        let dim = self.comp(den)?.dim();
        let p = self.ring.multiply_zeta(&a, &b)?;
        Ok(ChartElem { den, num: p.comps.get(&self.grade(den)).cloned().unwrap_or_else(|| vec![CycScalar::zero(); dim]) })
    }

    pub fn pow(&self, x: &ChartElem, n: u32) -> Result<ChartElem, QcoordError> {
        let mut r = self.one();
        for _ in 0..n {
            r = self.mul(&r, x)?;
        }
        Ok(r)
    }

    /// Equality of fractions after clearing to a common denominator.
    pub fn equal(&self, x: &ChartElem, y: &ChartElem) -> Result<bool, QcoordError> {
        let d = x.den.max(y.den);
        Ok(self.raise_to(x, d)?.num == self.raise_to(y, d)?.num)
    }

    /// `z = y s^-1` with `y` the basis vector of `A_zeta(varpi)` other than `s`.
    pub fn z(&self) -> Result<ChartElem, QcoordError> {
        let sv = self.s_vec();
        let j = sv.iter().position(|x| x.is_zero()).ok_or_else(|| QcoordError::Chart("A(varpi) is one-dimensional".into()))?;
        Ok(ChartElem { den: 1, num: unit(sv.len(), j) })
    }

    /// The classical coordinate `xbar = a1_embed(ybar) s^-ell`, `ybar` the
    /// classical extremal coordinate opposite to `s`.
    pub fn xbar(&self) -> Result<ChartElem, QcoordError> {
        let ell = self.ring.cfg()?.ell;
        let mut vals = BTreeMap::new();
        // the weight of s decides which classical extremal coordinate is the numerator
        let s_is_top = self.s_vec()[self.comp(1)?.top] != CycScalar::zero();
        vals.insert(vec![if s_is_top { 1 } else { 0 }], BigRational::from_integer(1.into()));
        let a = self.ring.a1_embed(self.varpi, &vals)?;
        Ok(ChartElem { den: ell, num: a.comps[&self.grade(ell)].clone() })
    }

    /// Checks that `xbar^i z^j` (`j < ell`, `i ell + j <= k ell`) is a basis of
    /// the level-`k` space `A_zeta(k ell varpi) s^{-k ell}` for `k <= level`,
    /// that `xbar` is central and that `z^ell` is a nonzero multiple of `xbar`.
    pub fn freeness(&self) -> Result<ChartReport, QcoordError> {
        let ell = self.ring.cfg()?.ell;
        let z = self.z()?;
        let xb = self.xbar()?;
        let zl = self.pow(&z, ell)?;
        let d = zl.den.max(xb.den);
        let (zl_r, xb_r) = (self.raise_to(&zl, d)?, self.raise_to(&xb, d)?);
        let z_pow_ell_is_xbar = rank(&vec![zl_r.num.clone(), xb_r.num.clone()]) == 1 && zl_r.num.iter().any(|x| !x.is_zero());
        let xbar_central = self.equal(&self.mul(&xb, &z)?, &self.mul(&z, &xb)?)?;
        let (mut counts, mut ranks, mut dims) = (Vec::new(), Vec::new(), Vec::new());
        let mut ok = xbar_central && z_pow_ell_is_xbar;
        for k in 0..=self.level {
            let top = k * ell;
            let mut rows = Vec::new();
            for i in 0..=k {
                for j in 0..ell {
                    if i * ell + j > top {
                        continue;
                    }
                    let m = self.mul(&self.pow(&xb, i)?, &self.pow(&z, j)?)?;
                    rows.push(self.raise_to(&m, top)?.num);
                }
            }
            let dim = self.comp(top)?.dim();
            let r = rank(&rows);
            ok &= r == rows.len() && r == dim;
            counts.push(rows.len());
            ranks.push(r);
            dims.push(dim);
        }
        Ok(ChartReport { ell, level: self.level, counts, ranks, dims, xbar_central, z_pow_ell_is_xbar, free_rank: if ok { ell as usize } else { 0 } })
    }

    /// Left multiplication by `z` and by `xbar` on the level-`k` basis, as
    /// matrices into level `k + 1`, with entries rendered as strings.
    pub fn table_json(&self) -> Result<serde_json::Value, QcoordError> {
        let ell = self.ring.cfg()?.ell;
        let k = self.level;
        let (z, xb) = (self.z()?, self.xbar()?);
        let dim = self.comp(k * ell)?.dim();
        let mut out = serde_json::Map::new();
        for (name, g) in [("z", &z), ("xbar", &xb)] {
            let mut cols = Vec::new();
            for j in 0..dim {
                let b = ChartElem { den: k * ell, num: unit(dim, j) };
                let p = self.raise_to(&self.mul(g, &b)?, (k + 1) * ell)?;
                cols.push(p.num.iter().map(|x| x.to_string()).collect::<Vec<_>>());
            }
            out.insert(name.to_string(), serde_json::json!(cols));
        }
        out.insert("ell".into(), serde_json::json!(ell));
        out.insert("level".into(), serde_json::json!(k));
        out.insert("w".into(), serde_json::json!(self.w));
        Ok(serde_json::Value::Object(out))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rootdata::RootDatum;

    fn cfg3() -> RootOfUnityConfig {
        RootOfUnityConfig::new(3, 2, false).unwrap()
    }

    #[test]
    fn component_dimensions() {
        let u = Uq::new(RootDatum::a1());
        let r = CoordRing::new(&u, Some(cfg3()));
        let w = Weight::new(&[1]);
        let c = r.a_component(w, Level::F).unwrap();
        assert_eq!(c.dim(), 2);
        let mut ws: Vec<Weight> = c.weights().to_vec();
        ws.sort();
        assert_eq!(ws, vec![Weight::new(&[-1]), Weight::new(&[1])]);
        assert_eq!(r.component(Weight::ZERO).unwrap().dim(), 1);
        let c3 = r.a_component(Weight::new(&[3]), Level::Zeta).unwrap();
        assert_eq!(c3.zeta.as_ref().unwrap().dim(), 4);
    }

    #[test]
    fn products_span_degree_two() {
        let u = Uq::new(RootDatum::a1());
        let r = CoordRing::new(&u, None);
        let w = Weight::new(&[1]);
        let mut rows = Vec::new();
        for a in 0..2 {
            for b in 0..2 {
                let p = r.multiply_a(&r.basis_f(w, a).unwrap(), &r.basis_f(w, b).unwrap()).unwrap();
                rows.push(p.comps.get(&(w * 2)).cloned().unwrap_or(vec![QScalar::zero(); 3]));
            }
        }
        assert_eq!(rank(&rows), 3);
    }

    #[test]
    fn highest_vectors_multiply_to_highest() {
        let u = Uq::new(RootDatum::a2());
        let r = CoordRing::new(&u, None);
        let (l, m) = (Weight::new(&[1, 0]), Weight::new(&[0, 1]));
        let p = r.multiply_a(&r.theta_vector(&[], l).unwrap(), &r.theta_vector(&[], m).unwrap()).unwrap();
        assert_eq!(p, r.theta_vector(&[], l + m).unwrap());
    }

    // s in A(lambda)_lambda and psi in A(mu)_eta satisfy s psi = q^{(lambda, mu - eta)} psi s
    #[test]
    fn highest_vector_q_commutes() {
        let u = Uq::new(RootDatum::a2());
        let r = CoordRing::new(&u, None);
        let (l, m) = (Weight::new(&[1, 0]), Weight::new(&[1, 1]));
        let s = r.theta_vector(&[], l).unwrap();
        for j in 0..r.component(m).unwrap().dim() {
            let psi = r.basis_f(m, j).unwrap();
            let eta = r.weight_of(m, j).unwrap();
            let c = QScalar::v_pow(u.rd.form_v(l, m - eta));
            assert_eq!(r.multiply_a(&s, &psi).unwrap(), r.multiply_a(&psi, &s).unwrap().scale(&c));
        }
    }

    #[test]
    fn pairing_axioms() {
        let u = Uq::new(RootDatum::a2());
        let r = CoordRing::new(&u, None);
        let samples = [UElem::one(), u.e(0), u.mul(&u.f(1), &u.k(Weight::new(&[1, -1]))), u.mul_all(&[&u.e(0), &u.e(1), &u.f(0)])];
        for x in &samples {
            assert_eq!(r.hopf_pair(&r.one_f(), x).unwrap(), u.counit(x));
        }
        let (l, m) = (Weight::new(&[1, 0]), Weight::new(&[0, 1]));
        let xs = [u.mul(&u.e(0), &u.e(1)), u.mul_all(&[&u.e(1), &u.e(0), &u.k(Weight::new(&[0, 1]))]), u.mul(&u.f(0), &u.e(0))];
        for a in 0..3 {
            for b in 0..3 {
                let (phi, psi) = (r.basis_f(l, a).unwrap(), r.basis_f(m, b).unwrap());
                let prod = r.multiply_a(&phi, &psi).unwrap();
                for x in &xs {
                    let lhs = r.hopf_pair(&prod, x).unwrap();
                    let rhs = r.hopf_pair_tensor(&phi, &psi, &u.coproduct(x)).unwrap();
                    assert_eq!(lhs, rhs);
                    // <u1 . phi, u> = <phi, u u1>
                    let y = u.f(1);
                    assert_eq!(r.hopf_pair(&r.act(&y, &phi).unwrap(), x).unwrap(), r.hopf_pair(&phi, &u.mul(x, &y)).unwrap());
                }
            }
        }
    }

    #[test]
    fn module_algebra_law() {
        let u = Uq::new(RootDatum::new(crate::rootdata::CartanType::B2, None).unwrap());
        let r = CoordRing::new(&u, None);
        let (l, m) = (Weight::new(&[1, 0]), Weight::new(&[0, 1]));
        for x in [u.e(0), u.f(1), u.mul(&u.e(1), &u.f(0))] {
            let dx = u.coproduct(&x);
            for a in 0..r.component(l).unwrap().dim() {
                let phi = r.basis_f(l, a).unwrap();
                let psi = r.theta_vector(&[1], m).unwrap();
                let lhs = r.act(&x, &r.multiply_a(&phi, &psi).unwrap()).unwrap();
                let mut rhs = AElem::zero();
                for (keys, c) in &dx.terms {
                    let p0 = r.act(&UElem::term(keys[0].clone(), QScalar::one()), &phi).unwrap();
                    let p1 = r.act(&UElem::term(keys[1].clone(), QScalar::one()), &psi).unwrap();
                    rhs = rhs.add(&r.multiply_a(&p0, &p1).unwrap().scale(c));
                }
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn lattice_constants_are_integral() {
        let u = Uq::new(RootDatum::a1());
        let cfg = cfg3();
        let r = CoordRing::new(&u, Some(cfg));
        for (a, b) in [(1, 1), (1, 2), (3, 3), (2, 4)] {
            let t = r.lattice_structure_constants(Weight::new(&[a]), Weight::new(&[b])).unwrap();
            assert!(t.iter().flatten().all(|x| cfg.regular_at_root(x)));
        }
    }

    #[test]
    fn zeta_pairing_matches_lattice() {
        let u = Uq::new(RootDatum::a1());
        let r = CoordRing::new(&u, Some(cfg3()));
        let l = Weight::new(&[3]);
        // e^(3) pairs the lowest lattice vector of A_zeta(3 varpi) with a unit
        let c = r.component(l).unwrap();
        let low = c.module.weight_space(Weight::new(&[-3]))[0];
        let a = r.basis_zeta(l, low).unwrap();
        let val = r.hopf_pair_zeta(&a, &u.e_div(0, 3)).unwrap();
        assert!(!val.is_zero());
        assert!(r.hopf_pair_zeta(&a, &u.e_div(0, 2)).unwrap().is_zero());
    }

    #[test]
    fn a1_embedding_is_central() {
        let u = Uq::new(RootDatum::a1());
        let r = CoordRing::new(&u, Some(cfg3()));
        let w = Weight::new(&[1]);
        let image = r.a1_image(w).unwrap();
        assert_eq!(image.len() as i64, u.rd.weyl_dimension(w));
        for m in [vec![0u32], vec![1]] {
            let mut vals = BTreeMap::new();
            vals.insert(m, BigRational::from_integer(1.into()));
            let a = r.a1_embed(w, &vals).unwrap();
            let mut trial = image.clone();
            trial.push(a.comps[&(w * 3)].clone());
            assert_eq!(rank(&trial), image.len());
            for j in 0..2 {
                let psi = r.basis_zeta(w, j).unwrap();
                assert_eq!(r.multiply_zeta(&a, &psi).unwrap(), r.multiply_zeta(&psi, &a).unwrap());
            }
        }
        let one = r.a1_embed(Weight::ZERO, &BTreeMap::from([(vec![0u32], BigRational::from_integer(1.into()))])).unwrap();
        assert_eq!(one, AElem::homogeneous(Weight::ZERO, vec![CycScalar::one()]));
    }

    #[test]
    fn theta_power_is_classical() {
        let u = Uq::new(RootDatum::a1());
        let r = CoordRing::new(&u, Some(cfg3()));
        let w = Weight::new(&[1]);
        let s = r.theta_vector_zeta(&[], w).unwrap();
        let s3 = r.multiply_zeta(&r.multiply_zeta(&s, &s).unwrap(), &s).unwrap();
        let top = r.a1_embed(w, &BTreeMap::from([(vec![0u32], BigRational::from_integer(1.into()))])).unwrap();
        assert_eq!(s3, top);
        let low = r.theta_vector(&[0], w).unwrap();
        assert_eq!(r.weight_of(w, low.comps[&w].iter().position(|x| !x.is_zero()).unwrap()).unwrap(), Weight::new(&[-1]));
    }

    #[test]
    fn chart_is_free_of_rank_ell() {
        let u = Uq::new(RootDatum::a1());
        let r = CoordRing::new(&u, Some(cfg3()));
        for w in [vec![], vec![0usize]] {
            let ch = ChartAlgebra::new(&r, &w, 2).unwrap();
            let rep = ch.freeness().unwrap();
            assert_eq!(rep.dims, vec![1, 4, 7]);
            assert_eq!(rep.counts, rep.dims);
            assert!(rep.xbar_central && rep.z_pow_ell_is_xbar, "{rep:?}");
            assert_eq!(rep.free_rank, 3);
        }
    }
}
