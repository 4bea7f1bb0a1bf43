//! Elements of `U` in triangular form `sum c * f_F k_lambda e_E` over basis words.

use super::words::Word;
use crate::qscalars::QScalar;
use crate::rootdata::Weight;
use std::collections::BTreeMap;

/// One triangular monomial `f_F k_lambda e_E` with `F`, `E` basis words.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct TermKey {
    pub f: Word,
    pub k: Weight,
    pub e: Word,
}

impl TermKey {
    pub fn new(f: Word, k: Weight, e: Word) -> Self {
        TermKey { f, k, e }
    }

    pub fn torus(k: Weight) -> Self {
        TermKey { f: vec![], k, e: vec![] }
    }
}

/// A finite linear combination of triangular monomials; zero coefficients are dropped.
#[derive(Clone, PartialEq, Eq, Default, Debug)]
pub struct UElem {
    pub terms: BTreeMap<TermKey, QScalar>,
}

impl UElem {
    pub fn zero() -> Self {
        UElem { terms: BTreeMap::new() }
    }

    pub fn one() -> Self {
        Self::scalar(QScalar::one())
    }

    pub fn scalar(c: QScalar) -> Self {
        Self::term(TermKey::torus(Weight::ZERO), c)
    }

    pub fn term(k: TermKey, c: QScalar) -> Self {
        let mut u = Self::zero();
        u.add_term(k, c);
        u
    }

    pub fn k(l: Weight) -> Self {
        Self::term(TermKey::torus(l), QScalar::one())
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, k: TermKey, c: QScalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(k) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = o.get() + &c;
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn add_assign(&mut self, o: &UElem) {
        for (k, c) in &o.terms {
            self.add_term(k.clone(), c.clone());
        }
    }

    pub fn add(&self, o: &UElem) -> UElem {
        let mut r = self.clone();
        r.add_assign(o);
        r
    }

    pub fn sub(&self, o: &UElem) -> UElem {
        self.add(&o.scale(&-QScalar::one()))
    }

    pub fn scale(&self, c: &QScalar) -> UElem {
        if c.is_zero() {
            return UElem::zero();
        }
        UElem { terms: self.terms.iter().map(|(k, x)| (k.clone(), x * c)).collect() }
    }

    pub fn neg(&self) -> UElem {
        self.scale(&-QScalar::one())
    }

    /// Coefficient of the unit monomial.
    pub fn constant_term(&self) -> QScalar {
        self.terms.get(&TermKey::torus(Weight::ZERO)).cloned().unwrap_or_else(QScalar::zero)
    }

    /// True when every term has no `f` and no `e` letters.
    pub fn in_torus(&self) -> bool {
        self.terms.keys().all(|k| k.f.is_empty() && k.e.is_empty())
    }

    pub fn in_positive_borel(&self) -> bool {
        self.terms.keys().all(|k| k.f.is_empty())
    }

    pub fn in_negative_borel(&self) -> bool {
        self.terms.keys().all(|k| k.e.is_empty())
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Applies `f` to every coefficient, dropping zeros.
    pub fn map_coeffs(&self, f: impl Fn(&QScalar) -> QScalar) -> UElem {
        let mut r = UElem::zero();
        for (k, c) in &self.terms {
            r.add_term(k.clone(), f(c));
        }
        r
    }
}

/// Tensor products of `UElem`s as combinations of tuples of monomials.
#[derive(Clone, PartialEq, Eq, Default, Debug)]
pub struct Tensor {
    pub terms: BTreeMap<Vec<TermKey>, QScalar>,
}

impl Tensor {
    pub fn zero() -> Self {
        Tensor { terms: BTreeMap::new() }
    }

    pub fn add_term(&mut self, k: Vec<TermKey>, c: QScalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(k) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = o.get() + &c;
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn add_assign(&mut self, o: &Tensor) {
        for (k, c) in &o.terms {
            self.add_term(k.clone(), c.clone());
        }
    }

    pub fn sub(&self, o: &Tensor) -> Tensor {
        let mut r = self.clone();
        for (k, c) in &o.terms {
            r.add_term(k.clone(), -c);
        }
        r
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Pure tensor of elements.
    pub fn pure(parts: &[&UElem]) -> Tensor {
        let mut acc: Vec<(Vec<TermKey>, QScalar)> = vec![(vec![], QScalar::one())];
        for p in parts {
            let mut next = Vec::new();
            for (ks, c) in &acc {
                for (k, d) in &p.terms {
                    let mut nk = ks.clone();
                    nk.push(k.clone());
                    next.push((nk, c * d));
                }
            }
            acc = next;
        }
        let mut t = Tensor::zero();
        for (k, c) in acc {
            t.add_term(k, c);
        }
        t
    }
}
