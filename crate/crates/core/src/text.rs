//! Line-oriented text formats for fields, polynomials, curves, divisors and codes.

use crate::codes::LinearCode;
use crate::curve::{Curve, Divisor, MPoly, Place};
use crate::error::{Error, Result};
use crate::ff::{Fe, Field};
use crate::polymat::Poly;

fn perr(msg: impl Into<String>) -> Error {
    Error::Parse(msg.into())
}

fn key_values(s: &str) -> Vec<(&str, &str)> {
    s.split_whitespace().filter_map(|t| t.split_once('=')).collect()
}

/// Parses `field p=2 m=3 modulus=1,1,0,1 gen=w`; `m`, `modulus` and `gen` are optional.
pub fn parse_field(line: &str) -> Result<Field> {
    let line = line.trim();
    let rest = line.strip_prefix("field").ok_or_else(|| perr("field line must start with `field`"))?;
    let mut p = None;
    let mut m = 1u32;
    let mut modulus: Option<Vec<u32>> = None;
    let mut gen = "w".to_string();
    for (k, v) in key_values(rest) {
        match k {
            "p" => p = Some(v.parse::<u32>().map_err(|_| perr(format!("bad p `{v}`")))?),
            "m" => m = v.parse().map_err(|_| perr(format!("bad m `{v}`")))?,
            "modulus" => {
                modulus = Some(
                    v.split(',')
                        .map(|c| c.trim().parse::<u32>().map_err(|_| perr(format!("bad modulus `{v}`"))))
                        .collect::<Result<_>>()?,
                )
            }
            "gen" => gen = v.to_string(),
            _ => return Err(perr(format!("unknown field key `{k}`"))),
        }
    }
    let p = p.ok_or_else(|| perr("field line needs p="))?;
    Field::new(p, m, modulus.as_deref(), &gen)
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(u64),
    Ident(String),
    Sym(char),
}

fn tokenize(s: &str) -> Result<Vec<Tok>> {
    let mut out = Vec::new();
    let cs: Vec<char> = s.chars().collect();
    let mut i = 0;
    while i < cs.len() {
        let c = cs[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let st = i;
            while i < cs.len() && cs[i].is_ascii_digit() {
                i += 1;
            }
            let t: String = cs[st..i].iter().collect();
            out.push(Tok::Num(t.parse().map_err(|_| perr(format!("number too large `{t}`")))?));
        } else if c.is_alphabetic() || c == '_' {
            let st = i;
            while i < cs.len() && (cs[i].is_alphanumeric() || cs[i] == '_') {
                i += 1;
            }
            out.push(Tok::Ident(cs[st..i].iter().collect()));
        } else if "+-*^()".contains(c) {
            out.push(Tok::Sym(c));
            i += 1;
        } else {
            return Err(perr(format!("unexpected character `{c}`")));
        }
    }
    Ok(out)
}

struct ExprParser<'a> {
    field: &'a Field,
    toks: Vec<Tok>,
    pos: usize,
    vars: &'a [&'a str],
}

impl ExprParser<'_> {
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

    fn sum(&mut self) -> Result<MPoly> {
        let neg = self.eat('-');
        let mut acc = self.product()?;
        if neg {
            acc = acc.neg();
        }
        loop {
            if self.eat('+') {
                acc = acc.add(&self.product()?);
            } else if self.eat('-') {
                acc = acc.sub(&self.product()?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn product(&mut self) -> Result<MPoly> {
        let mut acc = self.power()?;
        while self.eat('*') {
            acc = acc.mul(&self.power()?);
        }
        Ok(acc)
    }

    fn power(&mut self) -> Result<MPoly> {
        let base = self.atom()?;
        if self.eat('^') {
            match self.peek().cloned() {
                Some(Tok::Num(e)) => {
                    self.pos += 1;
                    if base.total_degree() > 0 && e > 1000 {
                        return Err(perr("exponent too large"));
                    }
                    if base.total_degree() <= 0 {
                        let c = base.coeff([0, 0, 0]);
                        return Ok(MPoly::constant(self.field, self.field.pow(c, e)));
                    }
                    Ok(base.pow(e as u32))
                }
                _ => Err(perr("expected an exponent after `^`")),
            }
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<MPoly> {
        let k = self.field;
        match self.peek().cloned() {
            Some(Tok::Num(n)) => {
                self.pos += 1;
                Ok(MPoly::constant(k, k.from_int((n % k.p() as u64) as i64)))
            }
            Some(Tok::Ident(s)) => {
                self.pos += 1;
                if let Some(i) = self.vars.iter().position(|v| *v == s) {
                    return Ok(MPoly::var(k, i));
                }
                if s == k.gen_name() && k.m() > 1 {
                    return Ok(MPoly::constant(k, k.gen()));
                }
                Err(perr(format!("unknown identifier `{s}`")))
            }
            Some(Tok::Sym('(')) => {
                self.pos += 1;
                let e = self.sum()?;
                if !self.eat(')') {
                    return Err(perr("missing `)`"));
                }
                Ok(e)
            }
            Some(t) => Err(perr(format!("unexpected token {t:?}"))),
            None => Err(perr("unexpected end of expression")),
        }
    }
}

fn parse_expr(field: &Field, s: &str, vars: &[&str]) -> Result<MPoly> {
    let toks = tokenize(s)?;
    if toks.is_empty() {
        return Err(perr("empty expression"));
    }
    let mut p = ExprParser { field, toks, pos: 0, vars };
    let e = p.sum()?;
    if p.pos != p.toks.len() {
        return Err(perr(format!("trailing input in `{s}`")));
    }
    Ok(e)
}

/// A polynomial in `x, y, z` with coefficients written in the generator.
pub fn parse_mpoly(field: &Field, s: &str) -> Result<MPoly> {
    parse_expr(field, s, &["x", "y", "z"])
}

/// A field element such as `w^2+w` or `3`.
pub fn parse_element(field: &Field, s: &str) -> Result<Fe> {
    let e = parse_expr(field, s, &[])?;
    Ok(e.coeff([0, 0, 0]))
}

/// A univariate polynomial in `var`.
pub fn parse_poly(field: &Field, s: &str, var: &str) -> Result<Poly> {
    let e = parse_expr(field, s, &[var])?;
    let d = e.total_degree().max(0) as usize;
    Ok(Poly::new(field, (0..=d).map(|i| e.coeff([i as u32, 0, 0])).collect()))
}

/// Comma-separated elements.
pub fn parse_element_list(field: &Field, s: &str) -> Result<Vec<Fe>> {
    s.split(',').map(|t| parse_element(field, t.trim())).collect()
}

/// `curve field=<field line> poly=<form>`; `poly=P1` is the projective line.
pub fn parse_curve(line: &str) -> Result<Curve> {
    let line = line.trim();
    let rest = line.strip_prefix("curve").ok_or_else(|| perr("curve line must start with `curve`"))?.trim();
    let rest = rest.strip_prefix("field=").ok_or_else(|| perr("curve line needs field="))?;
    let (fline, poly) = rest.split_once("poly=").ok_or_else(|| perr("curve line needs poly="))?;
    let k = parse_field(fline)?;
    let poly = poly.trim();
    if poly == "P1" {
        return Ok(Curve::projective_line(&k));
    }
    Curve::plane(parse_mpoly(&k, poly)?)
}

pub fn format_curve(c: &Curve) -> String {
    format!("curve field={} poly={}", c.field().describe(), c.format())
}

/// A place written as `(a:b:c)`, `degR(a:b:c)` over `E_R`, or an ideal
/// pair `<g1, g2>`.
pub fn parse_place(curve: &Curve, s: &str) -> Result<Place> {
    let s = s.trim();
    if let Some(inner) = s.strip_prefix('<').and_then(|t| t.strip_suffix('>')) {
        let gens = inner.split(',').map(|g| parse_mpoly(curve.field(), g)).collect::<Result<Vec<_>>>()?;
        return curve.place_from_ideal(&gens);
    }
    let (r, body) = match s.strip_prefix("deg") {
        Some(t) => {
            let open = t.find('(').ok_or_else(|| perr(format!("bad place `{s}`")))?;
            let r: u32 = t[..open].parse().map_err(|_| perr(format!("bad place degree in `{s}`")))?;
            (r, &t[open..])
        }
        None => (1, s),
    };
    let body = body
        .strip_prefix('(')
        .and_then(|t| t.strip_suffix(')'))
        .ok_or_else(|| perr(format!("bad place `{s}`")))?;
    let e = curve.tower(r)?.ext().clone();
    let coords = body.split(':').map(|c| parse_element(&e, c.trim())).collect::<Result<Vec<_>>>()?;
    if !curve.contains_point(r, &coords)? {
        return Err(perr(format!("point `{s}` is not on the curve")));
    }
    curve.place_of_point(r, &coords)?.ok_or_else(|| perr(format!("point `{s}` is defined over a smaller field")))
}

/// One `place ±multiplicity` per line; `#` starts a comment.
pub fn parse_divisor(curve: &Curve, text: &str) -> Result<Divisor> {
    let mut d = Divisor::zero();
    for raw in text.lines() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (place, mult) = line.rsplit_once(char::is_whitespace).ok_or_else(|| perr(format!("bad divisor line `{line}`")))?;
        let mult = mult.trim();
        let n: i64 = mult.trim_start_matches('+').parse().map_err(|_| perr(format!("bad multiplicity `{mult}`")))?;
        d.add_at(parse_place(curve, place)?, n);
    }
    Ok(d)
}

pub fn format_divisor(curve: &Curve, d: &Divisor) -> String {
    let mut s = String::new();
    for (p, n) in d.iter() {
        s.push_str(&format!("{} {n:+}\n", curve.format_place(p)));
    }
    s
}

/// Inverse of [`LinearCode::to_text`].
pub fn parse_code(text: &str) -> Result<LinearCode> {
    let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty());
    let k = parse_field(lines.next().ok_or_else(|| perr("empty code file"))?)?;
    let header = lines.next().ok_or_else(|| perr("missing code header"))?;
    let kv = key_values(header.strip_prefix("code").ok_or_else(|| perr("expected `code` header"))?);
    let get = |key: &str| -> Result<usize> {
        kv.iter()
            .find(|(a, _)| *a == key)
            .and_then(|(_, v)| v.parse().ok())
            .ok_or_else(|| perr(format!("code header needs {key}=")))
    };
    let n = get("n")?;
    let rows = lines
        .map(|l| l.split_whitespace().map(|t| parse_element(&k, t)).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    if rows.iter().any(|r| r.len() != n) {
        return Err(Error::LengthMismatch("code row length differs from n".into()));
    }
    let c = LinearCode::from_rows(&k, n, &rows)?;
    if c.k() != get("k")? {
        return Err(perr("code header dimension does not match the rows"));
    }
    Ok(c)
}
