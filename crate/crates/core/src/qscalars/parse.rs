//! Text form of scalars: integers, `v^k`, `q^k` (when `d` is known), `+ - * /` and parentheses.

use super::qscalar::QScalar;
use crate::expr::{parse_expr, Cursor, ExprValue, ParseError};

impl ExprValue for QScalar {
    fn from_int(a: i128) -> Self {
        QScalar::int(a)
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Result<Self, String> {
        Ok(self * o)
    }
    fn div(&self, o: &Self) -> Result<Self, String> {
        if o.is_zero() {
            return Err("division by zero".into());
        }
        Ok(self * &o.inv())
    }
    fn pow(&self, n: i64) -> Result<Self, String> {
        if n < 0 && self.is_zero() {
            return Err("negative power of zero".into());
        }
        Ok(QScalar::pow(self, n as i32))
    }
}

/// Resolves the scalar identifiers `v` and, when `d` is given, `q = v^d`.
pub fn scalar_atom(id: &str, d: Option<u32>, c: &Cursor) -> Result<QScalar, ParseError> {
    match (id, d) {
        ("v", _) => Ok(QScalar::v_pow(1)),
        ("q", Some(d)) => Ok(QScalar::v_pow(d as i32)),
        _ => Err(c.err(format!("unknown scalar symbol '{}'", id))),
    }
}

/// Parses a scalar in the variable `v`.
pub fn parse_scalar(s: &str) -> Result<QScalar, ParseError> {
    parse_expr(s, &|id, c| scalar_atom(id, None, c))
}

/// Parses a scalar where `q` denotes `v^d`.
pub fn parse_scalar_with_q(s: &str, d: u32) -> Result<QScalar, ParseError> {
    parse_expr(s, &|id, c| scalar_atom(id, Some(d), c))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qscalars::qnum::qint;

    #[test]
    fn parses_quotients() {
        let a = parse_scalar("(v^2 - v^-2)/(v - v^-1)").unwrap();
        assert_eq!(a, qint(2, 1));
        let b = parse_scalar_with_q("q^2 + 1 + q^-2", 2).unwrap();
        assert_eq!(b, qint(3, 2));
        assert_eq!(parse_scalar("-3*v^-1 + 2").unwrap().to_string(), "2 - 3*v^-1");
    }

    #[test]
    fn round_trip() {
        for s in ["1/(v^2 - v^-2)", "(v + 1)/(2*v^2 + 3)", "-v^3", "0", "7/3"] {
            let a = parse_scalar(s).unwrap();
            assert_eq!(parse_scalar(&a.to_string()).unwrap(), a, "{}", s);
        }
    }

    #[test]
    fn errors_report_position() {
        let e = parse_scalar("v + x").unwrap_err();
        assert_eq!(e.pos, 5);
        assert!(parse_scalar("1/0").is_err());
    }
}
