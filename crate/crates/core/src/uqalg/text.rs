//! Text form of elements of `U`.
//!
//! ```text
//! f[b2]^2 * k[-w1+w2] * e[b1]      root vectors by 1-based position in the w0 word
//! e1, f2                           Chevalley generators
//! e, f, k                          rank one shorthands (k = k[a1])
//! E(3), E1(2), F[b2](2)            divided powers
//! k[w1], k[a1], k[0]               torus, weights in w_i or a_i coordinates
//! ```
//! Scalars use `v` (and `q = v^d`). Printing uses the plain-power PBW readout,
//! so `parse(print(x)) == x`.

use super::algebra::Uq;
use super::elem::UElem;
use super::pbw::{Form, PbwElem};
use crate::expr::{parse_expr, Cursor, ExprValue, ParseError};
use crate::qscalars::parse::scalar_atom;
use crate::qscalars::QScalar;
use crate::rootdata::Weight;

#[derive(Clone)]
enum Val<'a> {
    Scalar(QScalar),
    Elem(&'a Uq, UElem),
}

impl<'a> Val<'a> {
    fn into_elem(self) -> UElem {
        match self {
            Val::Scalar(c) => UElem::scalar(c),
            Val::Elem(_, x) => x,
        }
    }

    fn ctx(&self, o: &Self) -> Option<&'a Uq> {
        match (self, o) {
            (Val::Elem(u, _), _) | (_, Val::Elem(u, _)) => Some(u),
            _ => None,
        }
    }

    fn as_elem(&self) -> UElem {
        match self {
            Val::Scalar(c) => UElem::scalar(c.clone()),
            Val::Elem(_, x) => x.clone(),
        }
    }
}

impl<'a> ExprValue for Val<'a> {
    fn from_int(a: i128) -> Self {
        Val::Scalar(QScalar::int(a))
    }
    fn add(&self, o: &Self) -> Self {
        match (self, o, self.ctx(o)) {
            (Val::Scalar(a), Val::Scalar(b), _) => Val::Scalar(a + b),
            (_, _, Some(u)) => Val::Elem(u, self.as_elem().add(&o.as_elem())),
            _ => unreachable!(),
        }
    }
    fn sub(&self, o: &Self) -> Self {
        match (self, o, self.ctx(o)) {
            (Val::Scalar(a), Val::Scalar(b), _) => Val::Scalar(a - b),
            (_, _, Some(u)) => Val::Elem(u, self.as_elem().sub(&o.as_elem())),
            _ => unreachable!(),
        }
    }
    fn mul(&self, o: &Self) -> Result<Self, String> {
        Ok(match (self, o) {
            (Val::Scalar(a), Val::Scalar(b)) => Val::Scalar(a * b),
            (Val::Scalar(a), Val::Elem(u, x)) | (Val::Elem(u, x), Val::Scalar(a)) => Val::Elem(u, x.scale(a)),
            (Val::Elem(u, x), Val::Elem(_, y)) => Val::Elem(u, u.mul(x, y)),
        })
    }
    fn div(&self, o: &Self) -> Result<Self, String> {
        match o {
            Val::Scalar(b) if !b.is_zero() => self.mul(&Val::Scalar(b.inv())),
            Val::Scalar(_) => Err("division by zero".into()),
            Val::Elem(_, _) => Err("division by an algebra element".into()),
        }
    }
    fn pow(&self, n: i64) -> Result<Self, String> {
        match self {
            Val::Scalar(a) => Ok(Val::Scalar(a.pow(n as i32))),
            Val::Elem(u, x) => {
                if n < 0 {
                    // only torus monomials are invertible
                    if x.len() == 1 {
                        let (k, c) = x.terms.iter().next().unwrap();
                        if k.f.is_empty() && k.e.is_empty() {
                            return Ok(Val::Elem(u, UElem::k(k.k * (n as i32)).scale(&c.pow(n as i32))));
                        }
                    }
                    return Err("negative power of a non-invertible element".into());
                }
                Ok(Val::Elem(u, u.pow(x, n as u32)))
            }
        }
    }
}

/// Parses `[...]` after `e`/`f`/`E`/`F`: `b<k>` or a simple index.
fn root_index(u: &Uq, s: &str, c: &Cursor) -> Result<usize, ParseError> {
    let t = s.trim();
    let k: usize = t
        .strip_prefix('b')
        .and_then(|r| r.parse().ok())
        .ok_or_else(|| c.err(format!("expected b<k>, got '{}'", t)))?;
    if k == 0 || k > u.rd.n_pos() {
        return Err(c.err(format!("root index {} out of range 1..{}", k, u.rd.n_pos())));
    }
    Ok(k - 1)
}

fn atom<'a>(u: &'a Uq, id: &str, c: &mut Cursor) -> Result<Val<'a>, ParseError> {
    if id == "v" || id == "q" {
        return scalar_atom(id, Some(u.rd.index as u32), c).map(Val::Scalar);
    }
    let mut chars = id.chars();
    let head = chars.next().unwrap();
    let rest: String = chars.collect();
    if !matches!(head, 'e' | 'f' | 'E' | 'F' | 'k') {
        return Err(c.err(format!("unknown symbol '{}'", id)));
    }
    if head == 'k' {
        if !rest.is_empty() {
            return Err(c.err(format!("unknown symbol '{}'", id)));
        }
        let l = if c.peek_raw() == Some(b'[') {
            c.pos += 1;
            let body = c.until(b']')?;
            u.rd.parse_weight(&body).map_err(|m| c.err(m))?
        } else if u.rank() == 1 {
            u.alpha(0)
        } else {
            return Err(c.err("k needs a weight in brackets"));
        };
        return Ok(Val::Elem(u, u.k(l)));
    }
    let positive = head == 'e' || head == 'E';
    let divided = head.is_ascii_uppercase();
    // which root vector
    let k = if !rest.is_empty() {
        let i: usize = rest.parse().map_err(|_| c.err(format!("unknown symbol '{}'", id)))?;
        if i == 0 || i > u.rank() {
            return Err(c.err(format!("simple index {} out of range", i)));
        }
        let simple = u.alpha(i - 1);
        u.rd.betas.iter().position(|b| *b == simple).unwrap()
    } else if c.peek_raw() == Some(b'[') {
        c.pos += 1;
        let body = c.until(b']')?;
        root_index(u, &body, c)?
    } else if u.rank() == 1 {
        0
    } else {
        return Err(c.err(format!("'{}' needs an index in rank {}", head, u.rank())));
    };
    let base = if positive { u.root_vector_e(k) } else { u.root_vector_f(k) };
    if !divided {
        return Ok(Val::Elem(u, base));
    }
    c.expect(b'(')?;
    let n = c.int()?;
    c.expect(b')')?;
    let n = u32::try_from(n).map_err(|_| c.err("divided power too large"))?;
    let mut m = vec![0; u.rd.n_pos()];
    m[k] = n;
    Ok(Val::Elem(u, u.pbw_element_divided(positive, &m)))
}

impl Uq {
    /// Parses an element in the text grammar.
    pub fn parse_elem(&self, s: &str) -> Result<UElem, ParseError> {
        let v = parse_expr(s, &|id, c| atom(self, id, c))?;
        Ok(v.into_elem())
    }

    fn fmt_side(&self, positive: bool, m: &[u32], form: Form) -> Vec<String> {
        let mut parts = Vec::new();
        for k in (0..m.len()).rev() {
            if m[k] == 0 {
                continue;
            }
            let sym = match (positive, form) {
                (true, Form::DK) => "e",
                (false, Form::DK) => "f",
                (true, Form::L) => "E",
                (false, Form::L) => "F",
            };
            let base = if self.rank() == 1 { sym.to_string() } else { format!("{}[b{}]", sym, k + 1) };
            parts.push(match form {
                // E(1) = e
                Form::L if m[k] == 1 => base.to_lowercase(),
                Form::L => format!("{}({})", base, m[k]),
                Form::DK if m[k] == 1 => base,
                Form::DK => format!("{}^{}", base, m[k]),
            });
        }
        parts
    }

    /// Prints a plain-power PBW expansion in the same grammar.
    pub fn format_pbw(&self, p: &PbwElem) -> String {
        self.format_pbw_in(p, Form::DK)
    }

    /// Prints PBW coordinates of the given form; divided powers print as `E(n)`.
    pub fn format_pbw_in(&self, p: &PbwElem, form: Form) -> String {
        if p.is_empty() {
            return "0".into();
        }
        let mut out = String::new();
        for (key, c) in p {
            let mut parts = self.fmt_side(false, &key.f, form);
            if key.k != Weight::ZERO {
                parts.push(format!("k[{}]", self.rd.fmt_weight(key.k)));
            }
            parts.extend(self.fmt_side(true, &key.e, form));
            let mono = parts.join("*");
            let (neg, mag) = if c.is_laurent() && c.num().leading() < 0 && c.num().is_monomial() {
                (true, -c)
            } else {
                (false, c.clone())
            };
            let coef = if mag.is_one() {
                String::new()
            } else if mag.is_laurent() && mag.num().is_monomial() {
                mag.to_string()
            } else {
                format!("({})", mag)
            };
            let body = match (coef.is_empty(), mono.is_empty()) {
                (true, true) => "1".to_string(),
                (true, false) => mono,
                (false, true) => coef,
                (false, false) => format!("{}*{}", coef, mono),
            };
            if out.is_empty() {
                out = if neg { format!("-{}", body) } else { body };
            } else {
                out += if neg { " - " } else { " + " };
                out += &body;
            }
        }
        out
    }

    /// Canonical printout: plain-power PBW coordinates.
    pub fn format_elem(&self, x: &UElem) -> String {
        self.format_pbw(&self.pbw_readout(x, Form::DK))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rootdata::RootDatum;

    #[test]
    fn prints_commutator_relation() {
        let u = Uq::new(RootDatum::a1());
        let x = u.parse_elem("e*f").unwrap();
        let s = u.format_elem(&x);
        assert_eq!(u.parse_elem(&s).unwrap(), x);
        assert_eq!(u.format_elem(&u.parse_elem("k[0]").unwrap()), "1");
        assert_eq!(u.parse_elem("e*f - f*e").unwrap(), u.parse_elem("(k - k^-1)/(q - q^-1)").unwrap());
    }

    #[test]
    fn round_trip_rank_two() {
        let u = Uq::new(RootDatum::a2());
        for s in ["f[b2]^2 * k[-w1+w2] * e[b1]", "E1(2)*F2(2) + v^3*e2*e1", "E[b2](2) - 3", "(e1 + f2)^3"] {
            let x = u.parse_elem(s).unwrap();
            let p = u.format_elem(&x);
            assert_eq!(u.parse_elem(&p).unwrap(), x, "{} -> {}", s, p);
            assert_eq!(u.format_elem(&u.parse_elem(&p).unwrap()), p);
        }
    }

    #[test]
    fn errors_carry_positions() {
        let u = Uq::new(RootDatum::a2());
        let e = u.parse_elem("e1 * g").unwrap_err();
        assert_eq!(e.pos, 6);
        assert!(u.parse_elem("e[b4]").is_err());
        assert!(u.parse_elem("e").is_err());
    }
}
