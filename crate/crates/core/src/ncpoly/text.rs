//! Human-readable polynomial syntax, e.g. `1/4*x1*x2 + 1/2*x3^2 - 1/8`.
//!
//! Each summand is an optional fraction `a/p^e` followed by factors `xi` or
//! `xi^k`, where `xi` stands for the integer lift `|x_i|` in `{0, ..., p-1}`.
//! A summand without a fraction has coefficient `1/p`.

use crate::algebra::field::{max_exponent, pow_u64, valuation};
use crate::algebra::space::Space;
use crate::error::{Error, Result};

use super::canonical::CanonicalForm;
use super::poly::NCPoly;

struct Summand {
    num: i64,
    exp: u32,
    factors: Vec<(usize, u32)>,
}

fn parse_err(msg: impl Into<String>) -> Error {
    Error::Parse(msg.into())
}

fn parse_fraction(p: u32, s: &str) -> Result<(i64, u32)> {
    let (a, b) = match s.split_once('/') {
        Some((a, b)) => (a.trim(), b.trim()),
        None => (s.trim(), "1"),
    };
    let num: i64 = a.parse().map_err(|_| parse_err(format!("bad numerator `{a}`")))?;
    let den: u64 = b.parse().map_err(|_| parse_err(format!("bad denominator `{b}`")))?;
    if den == 0 {
        return Err(parse_err("zero denominator"));
    }
    let exp = valuation(p, den);
    if exp > max_exponent(p) || pow_u64(p, exp) != den {
        return Err(parse_err(format!("denominator {den} is not a power of {p}")));
    }
    Ok((num, exp))
}

fn parse_summand(space: &Space, s: &str) -> Result<Summand> {
    let p = space.p();
    let mut num = 1;
    let mut exp = 1;
    let mut factors = Vec::new();
    for (k, part) in s.split('*').map(str::trim).enumerate() {
        if let Some(rest) = part.strip_prefix('x') {
            let (idx, power) = match rest.split_once('^') {
                Some((i, k)) => (i, k.trim().parse::<u32>().map_err(|_| parse_err(format!("bad power in `{part}`")))?),
                None => (rest, 1),
            };
            let i: usize = idx.trim().parse().map_err(|_| parse_err(format!("bad variable `{part}`")))?;
            if i == 0 || i > space.n() {
                return Err(parse_err(format!("variable x{i} outside 1..={}", space.n())));
            }
            factors.push((i - 1, power));
        } else if k == 0 {
            (num, exp) = parse_fraction(p, part)?;
        } else {
            return Err(parse_err(format!("unexpected factor `{part}`")));
        }
    }
    Ok(Summand { num, exp, factors })
}

/// Parses the text syntax into a polynomial on `space`.
pub fn parse_poly(space: &Space, text: &str) -> Result<NCPoly> {
    let mut summands = Vec::new();
    let mut sign = 1i64;
    let mut current = String::new();
    let flush = |current: &mut String, sign: i64, out: &mut Vec<Summand>| -> Result<()> {
        let body = current.trim();
        if body.is_empty() {
            return Err(parse_err("empty summand"));
        }
        let mut s = parse_summand(space, body)?;
        s.num *= sign;
        out.push(s);
        current.clear();
        Ok(())
    };
    let mut dangling = false;
    for ch in text.chars() {
        match ch {
            '+' | '-' => {
                if !current.trim().is_empty() {
                    flush(&mut current, sign, &mut summands)?;
                    sign = 1;
                }
                if ch == '-' {
                    sign = -sign;
                }
                dangling = true;
            }
            _ => {
                current.push(ch);
                dangling &= ch.is_whitespace();
            }
        }
    }
    if !current.trim().is_empty() {
        flush(&mut current, sign, &mut summands)?;
    } else if dangling || summands.is_empty() {
        return Err(parse_err("expected a summand"));
    }

    let p = space.p();
    let exp = summands.iter().map(|s| s.exp).max().unwrap_or(0);
    if exp > max_exponent(p) {
        return Err(Error::ExponentOverflow { p, exp });
    }
    let modulus = pow_u64(p, exp) as i128;
    let mut table = vec![0i128; space.size()];
    for s in &summands {
        let scale = pow_u64(p, exp - s.exp) as i128;
        let c = (s.num as i128 * scale).rem_euclid(modulus.max(1));
        for (x, v) in table.iter_mut().enumerate() {
            let mut m = c;
            for &(i, k) in &s.factors {
                let d = space.digit(x, i) as i128;
                for _ in 0..k {
                    m = m * d % modulus.max(1);
                }
            }
            *v = (*v + m) % modulus.max(1);
        }
    }
    NCPoly::from_table(*space, exp, table.into_iter().map(|v| v as u64).collect())
}

/// Renders a canonical form in the text syntax.
pub fn format_form(form: &CanonicalForm) -> String {
    let p = form.p() as u64;
    let mut parts = Vec::new();
    for t in form.terms() {
        let mut s = format!("{}/{}", t.coeff, p.pow(t.depth + 1));
        for (i, &e) in form.exps(t).iter().enumerate() {
            match e {
                0 => {}
                1 => s.push_str(&format!("*x{}", i + 1)),
                _ => s.push_str(&format!("*x{}^{}", i + 1, e)),
            }
        }
        parts.push(s);
    }
    let alpha = form.alpha();
    if !alpha.is_zero() {
        parts.push(alpha.to_string());
    }
    if parts.is_empty() {
        "0".to_string()
    } else {
        parts.join(" + ")
    }
}
