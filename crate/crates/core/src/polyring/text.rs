//! Text format: `3*x0^2*x1 - x1^3`.
//!
//! Terms are joined by `+`/`-`. A term is an optional coefficient followed by
//! `*`-separated factors `x<i>` or `x<i>^<e>`. Whitespace is ignored.
//! Coefficients are integers or decimals; fractions `a/b` are also accepted,
//! and complex forms write coefficients as `(a+bi)`.

use std::fmt;

use super::basis::rank_unchecked;
use super::form::Form;
use crate::domain::Domain;
use crate::error::{Error, Result};

impl<D: Domain> fmt::Display for Form<D> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let dom = self.domain();
        let terms = self.terms();
        if terms.is_empty() {
            return f.write_str("0");
        }
        for (idx, (expo, c)) in terms.iter().enumerate() {
            let (negative, mag) = dom.split_sign(c);
            match (idx, negative) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let has_vars = expo.iter().any(|&e| e > 0);
            let mut first = true;
            if !has_vars || mag != dom.one() {
                f.write_str(&dom.format_coeff(&mag))?;
                first = false;
            }
            for (i, &e) in expo.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                if !first {
                    f.write_str("*")?;
                }
                first = false;
                if e == 1 {
                    write!(f, "x{i}")?;
                } else {
                    write!(f, "x{i}^{e}")?;
                }
            }
        }
        Ok(())
    }
}

fn perr(position: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        position,
        message: message.into(),
    }
}

/// Split at top-level `+`/`-`, keeping each term's sign. Positions are byte
/// offsets into the whitespace-free text.
fn split_terms(s: &str) -> Result<Vec<(usize, bool, &str)>> {
    let bytes = s.as_bytes();
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    let mut negative = false;
    let mut i = 0;
    if matches!(bytes.first(), Some(b'+') | Some(b'-')) {
        negative = bytes[0] == b'-';
        start = 1;
        i = 1;
    }
    while i < bytes.len() {
        match bytes[i] {
            b'(' => depth += 1,
            b')' => {
                depth -= 1;
                if depth < 0 {
                    return Err(perr(i, "unbalanced ')'"));
                }
            }
            b'+' | b'-' if depth == 0 => {
                if i == start {
                    return Err(perr(i, "empty term"));
                }
                out.push((start, negative, &s[start..i]));
                negative = bytes[i] == b'-';
                start = i + 1;
            }
            _ => {}
        }
        i += 1;
    }
    if depth != 0 {
        return Err(perr(s.len(), "unbalanced '('"));
    }
    if start >= s.len() {
        return Err(perr(s.len(), "empty term"));
    }
    out.push((start, negative, &s[start..]));
    Ok(out)
}

/// Parse a form in `num_vars` variables. The degree is read off the terms,
/// which must all share it; a lone `0` parses as the zero constant.
pub fn parse_form<D: Domain>(domain: &D, num_vars: usize, text: &str) -> Result<Form<D>> {
    let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    if s.is_empty() {
        return Err(perr(0, "empty input"));
    }
    let mut parsed: Vec<(usize, Vec<u32>, D::Elem)> = Vec::new();
    for (pos, negative, term) in split_terms(&s)? {
        let mut coeff = domain.one();
        let mut expo = vec![0u32; num_vars];
        let mut offset = pos;
        for factor in term.split('*') {
            if factor.is_empty() {
                return Err(perr(offset, "empty factor"));
            }
            if let Some(rest) = factor.strip_prefix('x') {
                let (idx, e) = match rest.split_once('^') {
                    Some((i, e)) => (
                        i,
                        e.parse::<u32>()
                            .map_err(|_| perr(offset, format!("bad exponent in {factor:?}")))?,
                    ),
                    None => (rest, 1),
                };
                let idx: usize = idx
                    .parse()
                    .map_err(|_| perr(offset, format!("bad variable {factor:?}")))?;
                if idx >= num_vars {
                    return Err(perr(offset, format!("variable x{idx} outside x0..x{}", num_vars - 1)));
                }
                expo[idx] += e;
            } else {
                let c = domain.parse_coeff(factor).map_err(|e| match e {
                    Error::Parse { message, .. } => perr(offset, message),
                    other => other,
                })?;
                coeff = domain.mul(&coeff, &c);
            }
            offset += factor.len() + 1;
        }
        if negative {
            coeff = domain.neg(&coeff);
        }
        parsed.push((pos, expo, coeff));
    }
    let degree: u32 = parsed[0].1.iter().sum();
    for (pos, e, _) in &parsed {
        let d: u32 = e.iter().sum();
        if d != degree {
            return Err(perr(
                *pos,
                format!("form is not homogeneous: term of degree {d}, expected {degree}"),
            ));
        }
    }
    let mut coeffs = Form::zero(domain, num_vars, degree)?.into_coeffs();
    for (_, e, c) in parsed {
        let r = rank_unchecked(&e);
        coeffs[r] = domain.add(&coeffs[r], &c);
    }
    Form::from_coeffs(domain, num_vars, degree, coeffs)
}

impl<D: Domain> Form<D> {
    pub fn parse(domain: &D, num_vars: usize, text: &str) -> Result<Self> {
        parse_form(domain, num_vars, text)
    }

    pub fn to_text(&self) -> String {
        self.to_string()
    }
}
