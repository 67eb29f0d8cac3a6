//! Text and JSON forms of field elements, polynomials and field declarations.
//!
//! The expression syntax accepts `x`, `y`, integer literals, `+ - * / ^`,
//! parentheses, `s` or `sqrt(d)` for the square root generating ℚ(√d), `t`
//! for the generator of 𝔽_p[t]/(m), and coefficient lists `[c0,c1,...]` for
//! extension-field elements. Division is only allowed by nonzero constants.

use num_bigint::BigInt;
use serde_json::{json, Value};

use super::field::{Field, FieldElem, FieldSpec};
use super::poly::BivarPoly;
use super::univariate::UniPoly;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(BigInt),
    Ident(String),
    Sym(char),
}

fn tokenize(src: &str) -> Result<Vec<Tok>> {
    let mut out = Vec::new();
    let chars: Vec<char> = src.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let s: String = chars[start..i].iter().collect();
            out.push(Tok::Num(s.parse().expect("digits")));
        } else if c.is_ascii_alphabetic() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_alphanumeric() {
                i += 1;
            }
            out.push(Tok::Ident(chars[start..i].iter().collect()));
        } else if "+-*/^()[],".contains(c) {
            out.push(Tok::Sym(c));
            i += 1;
        } else {
            return Err(Error::parse(src, format!("unexpected character '{c}'")));
        }
    }
    Ok(out)
}

struct Parser<'a> {
    src: &'a str,
    toks: Vec<Tok>,
    pos: usize,
    field: &'a Field,
}

impl<'a> Parser<'a> {
    fn err(&self, msg: impl Into<String>) -> Error {
        Error::parse(self.src, msg)
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Sym(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.err(format!("expected '{c}'")))
        }
    }

    fn expr(&mut self) -> Result<BivarPoly> {
        let mut acc = self.term()?;
        loop {
            if self.eat('+') {
                acc = &acc + &self.term()?;
            } else if self.eat('-') {
                acc = &acc - &self.term()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<BivarPoly> {
        let mut acc = self.unary()?;
        loop {
            if self.eat('*') {
                acc = &acc * &self.unary()?;
            } else if self.eat('/') {
                let d = self.unary()?;
                if !d.is_constant() || d.is_zero() {
                    return Err(self.err("division only by nonzero constants"));
                }
                let inv = d.coeff(0, 0).inv().ok_or(Error::DivisionByZero)?;
                acc = acc.scale(&inv);
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<BivarPoly> {
        if self.eat('-') {
            return Ok(-self.unary()?);
        }
        if self.eat('+') {
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> Result<BivarPoly> {
        let base = self.atom()?;
        if self.eat('^') {
            let e = match self.toks.get(self.pos) {
                Some(Tok::Num(n)) => n.clone(),
                _ => return Err(self.err("exponent must be a nonnegative integer")),
            };
            self.pos += 1;
            let e: u32 = e
                .try_into()
                .ok()
                .filter(|e| *e <= 1 << 16)
                .ok_or_else(|| self.err("exponent too large"))?;
            if base.is_constant() {
                return Ok(BivarPoly::constant(base.coeff(0, 0).pow(e as u64)));
            }
            return Ok(base.pow(e));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<BivarPoly> {
        let tok = self
            .peek()
            .cloned()
            .ok_or_else(|| self.err("unexpected end of input"))?;
        self.pos += 1;
        match tok {
            Tok::Num(n) => Ok(BivarPoly::constant(self.field.from_bigint(&n))),
            Tok::Sym('(') => {
                let e = self.expr()?;
                self.expect(')')?;
                Ok(e)
            }
            Tok::Sym('[') => {
                let mut coeffs = Vec::new();
                if !self.eat(']') {
                    loop {
                        let neg = self.eat('-');
                        match self.peek().cloned() {
                            Some(Tok::Num(n)) => {
                                self.pos += 1;
                                coeffs.push(if neg { -n } else { n });
                            }
                            _ => return Err(self.err("expected integer in coefficient list")),
                        }
                        if self.eat(']') {
                            break;
                        }
                        self.expect(',')?;
                    }
                }
                let e = ext_from_ints(self.field, &coeffs).map_err(|m| self.err(m))?;
                Ok(BivarPoly::constant(e))
            }
            Tok::Ident(name) => match name.as_str() {
                "x" => Ok(BivarPoly::x(self.field)),
                "y" => Ok(BivarPoly::y(self.field)),
                "s" => self
                    .field
                    .sqrt_generator()
                    .map(BivarPoly::constant)
                    .ok_or_else(|| self.err("'s' requires a quadratic field")),
                "t" => self
                    .field
                    .ext_generator()
                    .map(BivarPoly::constant)
                    .ok_or_else(|| self.err("'t' requires an extension of F_p")),
                "sqrt" => {
                    self.expect('(')?;
                    let neg = self.eat('-');
                    let n = match self.peek().cloned() {
                        Some(Tok::Num(n)) => n,
                        _ => return Err(self.err("sqrt expects an integer")),
                    };
                    self.pos += 1;
                    self.expect(')')?;
                    let n = if neg { -n } else { n };
                    match self.field.spec() {
                        FieldSpec::QuadExt { d } if BigInt::from(*d) == n => {
                            Ok(BivarPoly::constant(self.field.sqrt_generator().unwrap()))
                        }
                        _ => Err(self.err(format!("sqrt({n}) is not the generator of {}", self.field))),
                    }
                }
                other => Err(self.err(format!("unknown identifier '{other}'"))),
            },
            Tok::Sym(c) => Err(self.err(format!("unexpected '{c}'"))),
        }
    }
}

fn ext_from_ints(field: &Field, coeffs: &[BigInt]) -> std::result::Result<FieldElem, String> {
    if !matches!(field.spec(), FieldSpec::FiniteExt { .. }) {
        return Err(format!("coefficient lists need an extension field, not {field}"));
    }
    let k = field.base_degree();
    if coeffs.len() > k {
        return Err(format!("coefficient list longer than extension degree {k}"));
    }
    let base = field.base();
    let mut c: Vec<FieldElem> = coeffs.iter().map(|n| base.from_bigint(n)).collect();
    c.resize(k, base.zero());
    field.from_base_coords(&c).map_err(|e| e.to_string())
}

/// Parses a polynomial expression in x, y over `field`.
pub fn parse_poly(field: &Field, src: &str) -> Result<BivarPoly> {
    let toks = tokenize(src)?;
    if toks.is_empty() {
        return Err(Error::parse(src, "empty expression"));
    }
    let mut p = Parser {
        src,
        toks,
        pos: 0,
        field,
    };
    let out = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(p.err("trailing input"));
    }
    Ok(out)
}

/// Parses a field element (an expression without x and y).
pub fn parse_elem(field: &Field, src: &str) -> Result<FieldElem> {
    let p = parse_poly(field, src)?;
    if !p.is_constant() {
        return Err(Error::parse(src, "expected a constant"));
    }
    Ok(p.coeff(0, 0))
}

/// Parses a polynomial in x only.
pub fn parse_univariate(field: &Field, src: &str) -> Result<UniPoly> {
    parse_poly(field, src)?
        .to_univariate_x()
        .ok_or_else(|| Error::parse(src, "expected a polynomial in x only"))
}

/// JSON form: a string for ℚ, ℚ(√d) and 𝔽_p; a coefficient list for 𝔽_p[t]/(m).
pub fn elem_to_json(e: &FieldElem) -> Value {
    match e.field().spec() {
        FieldSpec::FiniteExt { .. } => {
            Value::Array(e.base_coords().iter().map(|c| json!(c.to_residue().unwrap())).collect())
        }
        _ => Value::String(e.to_string()),
    }
}

pub fn elem_from_json(field: &Field, v: &Value) -> Result<FieldElem> {
    match v {
        Value::String(s) => parse_elem(field, s),
        Value::Number(n) => {
            let i = n
                .as_i64()
                .ok_or_else(|| Error::parse(n.to_string(), "numbers must be integers; write fractions as strings"))?;
            Ok(field.int(i))
        }
        Value::Array(items) => {
            let ints = items
                .iter()
                .map(|x| x.as_i64().map(BigInt::from))
                .collect::<Option<Vec<_>>>()
                .ok_or_else(|| Error::parse(v.to_string(), "coefficient list must hold integers"))?;
            ext_from_ints(field, &ints).map_err(|m| Error::parse(v.to_string(), m))
        }
        _ => Err(Error::parse(v.to_string(), "expected a field element")),
    }
}

/// Term list `[[i, j, coeff], ...]`, leading term first.
pub fn poly_to_json(p: &BivarPoly) -> Value {
    Value::Array(
        p.terms()
            .rev()
            .map(|(m, c)| json!([m.i, m.j, elem_to_json(c)]))
            .collect(),
    )
}

/// Accepts either an expression string or a term list.
pub fn poly_from_json(field: &Field, v: &Value) -> Result<BivarPoly> {
    match v {
        Value::String(s) => parse_poly(field, s),
        Value::Array(items) => {
            let mut terms = Vec::with_capacity(items.len());
            for item in items {
                let bad = || Error::parse(item.to_string(), "expected [i, j, coeff]");
                let arr = item.as_array().filter(|a| a.len() == 3).ok_or_else(bad)?;
                let i = arr[0].as_u64().ok_or_else(bad)? as u32;
                let j = arr[1].as_u64().ok_or_else(bad)? as u32;
                terms.push((i, j, elem_from_json(field, &arr[2])?));
            }
            Ok(BivarPoly::from_terms(field, terms))
        }
        _ => Err(Error::parse(v.to_string(), "expected a polynomial")),
    }
}

/// `[[exponent, coeff], ...]` in increasing exponent order.
pub fn unipoly_to_json(p: &UniPoly) -> Value {
    Value::Array(p.pairs().iter().map(|(e, c)| json!([e, elem_to_json(c)])).collect())
}

/// Accepts an expression in x or a list of `[exponent, coeff]` pairs (the
/// exponent may be a number or a numeric string).
pub fn unipoly_from_json(field: &Field, v: &Value) -> Result<UniPoly> {
    match v {
        Value::String(s) => parse_univariate(field, s),
        Value::Array(items) => {
            let mut pairs = Vec::with_capacity(items.len());
            for item in items {
                let bad = || Error::parse(item.to_string(), "expected [exponent, coeff]");
                let arr = item.as_array().filter(|a| a.len() == 2).ok_or_else(bad)?;
                let e = match &arr[0] {
                    Value::Number(n) => n.as_u64().ok_or_else(bad)?,
                    Value::String(s) => s.trim().parse::<u64>().map_err(|_| bad())?,
                    _ => return Err(bad()),
                };
                if e > 1 << 16 {
                    return Err(Error::parse(item.to_string(), "exponent too large"));
                }
                pairs.push((e as usize, elem_from_json(field, &arr[1])?));
            }
            Ok(UniPoly::from_pairs(field, pairs))
        }
        _ => Err(Error::parse(v.to_string(), "expected a univariate polynomial")),
    }
}

pub fn field_to_json(field: &Field) -> Value {
    match field.spec() {
        FieldSpec::Rationals => json!({"kind": "rationals"}),
        FieldSpec::QuadExt { d } => json!({"kind": "quadratic", "d": d}),
        FieldSpec::PrimeField { p } => json!({"kind": "prime", "p": p}),
        FieldSpec::FiniteExt { p, modulus } => {
            json!({"kind": "extension", "p": p, "modulus": modulus})
        }
    }
}

/// Field declarations: `{"kind": "rationals"}`, `{"kind": "quadratic", "d": 2}`,
/// `{"kind": "prime", "p": 5}`, `{"kind": "extension", "p": 2, "modulus": [1,1,1]}`
/// (modulus low to high) or `{"kind": "finite", "q": 4}`.
pub fn field_from_json(v: &Value) -> Result<Field> {
    let ctx = "field";
    let kind = v
        .get("kind")
        .and_then(Value::as_str)
        .ok_or_else(|| Error::parse(ctx, "missing \"kind\""))?;
    let int = |key: &str| {
        v.get(key)
            .and_then(Value::as_i64)
            .ok_or_else(|| Error::parse(ctx, format!("missing integer \"{key}\"")))
    };
    let nonneg = |key: &str| {
        int(key).and_then(|n| u64::try_from(n).map_err(|_| Error::parse(ctx, format!("\"{key}\" must be positive"))))
    };
    match kind {
        "rationals" => Ok(Field::rationals()),
        "quadratic" => Field::quadratic(int("d")?),
        "prime" => Field::prime(nonneg("p")?),
        "finite" => Field::finite(nonneg("q")?),
        "extension" => {
            let p = nonneg("p")?;
            let modulus = v
                .get("modulus")
                .and_then(Value::as_array)
                .and_then(|a| a.iter().map(Value::as_u64).collect::<Option<Vec<_>>>())
                .ok_or_else(|| Error::parse(ctx, "\"modulus\" must be a list of residues"))?;
            Field::extension(p, modulus)
        }
        other => Err(Error::parse(ctx, format!("unknown field kind \"{other}\""))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_expressions() {
        let k = Field::rationals();
        let p = parse_poly(&k, "x^2*y - 2*x + 1/2").unwrap();
        assert_eq!(p.to_string(), "x^2*y - 2*x + 1/2");
        let q = parse_poly(&k, "(x - 1)*(x + 1)").unwrap();
        assert_eq!(q.to_string(), "x^2 - 1");
        assert!(parse_poly(&k, "x/y").is_err());
        assert!(parse_poly(&k, "s").is_err());
        assert!(parse_poly(&k, "x +").is_err());
    }

    #[test]
    fn quadratic_elements() {
        let k = Field::quadratic(2).unwrap();
        let a = parse_elem(&k, "sqrt(2)").unwrap();
        assert_eq!(a, k.sqrt_generator().unwrap());
        let b = parse_elem(&k, "3/4 - 2*s").unwrap();
        assert_eq!(b.to_string(), "3/4-2*s");
        assert_eq!(parse_elem(&k, &b.to_string()).unwrap(), b);
        assert!(parse_elem(&k, "sqrt(3)").is_err());
    }

    #[test]
    fn extension_elements_round_trip() {
        let k = Field::finite(4).unwrap();
        let t = parse_elem(&k, "t").unwrap();
        assert_eq!(parse_elem(&k, "[0,1]").unwrap(), t);
        let v = elem_to_json(&(&t + &k.one()));
        assert_eq!(v, json!([1, 1]));
        assert_eq!(elem_from_json(&k, &v).unwrap(), &t + &k.one());
    }

    #[test]
    fn term_lists_round_trip() {
        let k = Field::quadratic(2).unwrap();
        let p = parse_poly(&k, "x^2 - 2 + s*y").unwrap();
        let v = poly_to_json(&p);
        assert_eq!(v, json!([[2, 0, "1"], [0, 1, "s"], [0, 0, "-2"]]));
        assert_eq!(poly_from_json(&k, &v).unwrap(), p);
    }

    #[test]
    fn field_declarations() {
        for v in [
            json!({"kind": "rationals"}),
            json!({"kind": "quadratic", "d": -1}),
            json!({"kind": "prime", "p": 7}),
            json!({"kind": "extension", "p": 2, "modulus": [1, 1, 1]}),
        ] {
            let f = field_from_json(&v).unwrap();
            assert_eq!(field_to_json(&f), v);
        }
        assert!(field_from_json(&json!({"kind": "quadratic", "d": 4})).is_err());
    }
}
