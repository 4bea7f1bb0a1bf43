//! Specialization `U_A -> U_zeta` (plain powers) and `U^L_A -> U^L_zeta`
//! (divided powers), the Frobenius center generators and centrality at `zeta`.

use super::algebra::{Uq, UqError};
use super::elem::UElem;
use super::pbw::{Form, PbwKey};
use crate::qscalars::{CycScalar, RootOfUnityConfig};
use crate::rootdata::Weight;
use std::collections::BTreeMap;

/// An element of `U_zeta` or `U^L_zeta` in PBW coordinates over `Q(zeta')`.
#[derive(Debug, Clone, PartialEq)]
pub struct ZElem {
    pub form: Form,
    pub terms: BTreeMap<PbwKey, CycScalar>,
}

impl ZElem {
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

impl Uq {
    /// Reads `a` in the PBW basis of `form`, checks every coordinate lies in `A`
    /// and sends `v` to `zeta'`.
    pub fn specialize_u(&self, a: &UElem, cfg: &RootOfUnityConfig, form: Form) -> Result<ZElem, UqError> {
        let mut terms = BTreeMap::new();
        for (k, c) in self.pbw_readout(a, form) {
            if !cfg.regular_at_root(&c) {
                return Err(UqError::NotIntegral(c.to_string()));
            }
            let z = cfg.specialize(&c).expect("regular scalar specializes");
            if !z.is_zero() {
                terms.insert(k, z);
            }
        }
        Ok(ZElem { form, terms })
    }

    /// `e_beta^ell`, `f_beta^ell` for every positive root and `k_{+-ell w_i}`.
    pub fn zfr_generators(&self, ell: u32) -> Vec<(String, UElem)> {
        let n = self.rd.n_pos();
        let mut out = Vec::new();
        for k in 0..n {
            out.push((format!("e[b{}]^{}", k + 1, ell), self.pow(&self.root_vector_e(k), ell)));
        }
        for k in 0..n {
            out.push((format!("f[b{}]^{}", k + 1, ell), self.pow(&self.root_vector_f(k), ell)));
        }
        for i in 0..self.rank() {
            for s in [1, -1] {
                let l = Weight::unit(i) * (s * ell as i32);
                out.push((format!("k[{}]", self.rd.fmt_weight(l)), self.k(l)));
            }
        }
        out
    }

    /// Chevalley generators `e_i`, `f_i`, `k_{w_i}` of `U_zeta`.
    pub fn chevalley_generators(&self) -> Vec<(String, UElem)> {
        let mut out = Vec::new();
        for i in 0..self.rank() {
            out.push((format!("e{}", i + 1), self.e(i)));
            out.push((format!("f{}", i + 1), self.f(i)));
            out.push((format!("k[w{}]", i + 1), self.k(Weight::unit(i))));
        }
        out
    }

    /// True when `[z, g]` vanishes in `U_zeta` for every Chevalley generator `g`.
    pub fn central_at_root(&self, z: &UElem, cfg: &RootOfUnityConfig) -> Result<bool, UqError> {
        for (_, g) in self.chevalley_generators() {
            if !self.specialize_u(&self.commutator(z, &g), cfg, Form::DK)?.is_zero() {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qscalars::qbinom;
    use crate::rootdata::RootDatum;

    #[test]
    fn frobenius_generators_are_central_a1() {
        let u = Uq::new(RootDatum::a1());
        let cfg = RootOfUnityConfig::new(3, 2, false).unwrap();
        let gens = u.zfr_generators(3);
        assert_eq!(gens.len(), 4);
        for (_, z) in &gens {
            assert!(u.central_at_root(z, &cfg).unwrap());
        }
        // e^2 is not central
        assert!(!u.central_at_root(&u.pow(&u.e(0), 2), &cfg).unwrap());
    }

    #[test]
    fn divided_powers_at_the_root() {
        let u = Uq::new(RootDatum::a1());
        let cfg = RootOfUnityConfig::new(3, 2, false).unwrap();
        let e3 = u.pow(&u.e(0), 3);
        // nonzero in U_zeta, zero in U^L_zeta coordinates
        assert!(!u.specialize_u(&e3, &cfg, Form::DK).unwrap().is_zero());
        assert!(u.specialize_u(&e3, &cfg, Form::L).unwrap().is_zero());
        let ed = u.e_div(0, 3);
        let z = u.specialize_u(&ed, &cfg, Form::L).unwrap();
        assert_eq!(z.terms.len(), 1);
        assert!(z.terms.values().next().unwrap().is_one());
        assert!(u.specialize_u(&ed, &cfg, Form::DK).is_err());
        for k in 1..3 {
            assert!(cfg.specialize(&qbinom(3, k, 2)).unwrap().is_zero());
        }
    }
}
