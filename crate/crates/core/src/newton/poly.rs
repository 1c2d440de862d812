use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::algebra::{GaussianRational, QPoly, ZwPoly};
use crate::overlap::parse_rational;
use crate::{Error, Result};

/// A polynomial `f(z, w) = sum a_lm z^l w^m` with Gaussian-rational
/// coefficients.
///
/// Floating coefficients are stored by their exact dyadic values and the
/// polynomial is marked inexact, which switches numerical fallbacks on.
#[derive(Clone, PartialEq, Eq)]
pub struct BivarPolynomial {
    terms: BTreeMap<(u32, u32), GaussianRational>,
    exact: bool,
}

impl BivarPolynomial {
    pub fn from_terms(terms: impl IntoIterator<Item = ((u32, u32), GaussianRational)>) -> Self {
        let mut map: BTreeMap<(u32, u32), GaussianRational> = BTreeMap::new();
        for (e, c) in terms {
            let slot = map.entry(e).or_insert_with(GaussianRational::zero);
            *slot = &*slot + &c;
        }
        map.retain(|_, c| !c.is_zero());
        Self { terms: map, exact: true }
    }

    pub fn from_complex_terms(terms: impl IntoIterator<Item = ((u32, u32), Complex64)>) -> Self {
        let mut p = Self::from_terms(terms.into_iter().map(|(e, c)| (e, GaussianRational::from_complex(c))));
        p.exact = false;
        p
    }

    pub fn parse(text: &str) -> Result<Self> {
        Parser { src: text.as_bytes(), pos: 0 }.poly()
    }

    /// Nonzero coefficients keyed by `(z exponent, w exponent)`.
    pub fn terms(&self) -> &BTreeMap<(u32, u32), GaussianRational> {
        &self.terms
    }

    pub fn coeff(&self, l: u32, m: u32) -> GaussianRational {
        self.terms.get(&(l, m)).cloned().unwrap_or_else(GaussianRational::zero)
    }

    pub fn support(&self) -> Vec<(i64, i64)> {
        self.terms.keys().map(|&(l, m)| (l as i64, m as i64)).collect()
    }

    pub fn is_exact(&self) -> bool {
        self.exact
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|&e| e == (0, 0))
    }

    pub fn degree_z(&self) -> u32 {
        self.terms.keys().map(|e| e.0).max().unwrap_or(0)
    }

    pub fn degree_w(&self) -> u32 {
        self.terms.keys().map(|e| e.1).max().unwrap_or(0)
    }

    pub fn eval(&self, z: Complex64, w: Complex64) -> Complex64 {
        self.terms.iter().map(|(&(l, m), c)| c.to_complex() * z.powu(l) * w.powu(m)).sum()
    }

    /// `sum |a_lm| |z|^l |w|^m`, the scale for relative residuals.
    pub fn abs_eval(&self, z: Complex64, w: Complex64) -> f64 {
        let (az, aw) = (z.norm(), w.norm());
        self.terms
            .iter()
            .map(|(&(l, m), c)| c.to_complex().norm() * libm::pow(az, l as f64) * libm::pow(aw, m as f64))
            .sum()
    }

    /// `f - c`.
    pub fn minus_constant(&self, c: &GaussianRational) -> Self {
        let mut out = Self::from_terms(self.terms.clone().into_iter().chain([((0, 0), -c)]));
        out.exact = self.exact;
        out
    }

    /// `c * f`.
    pub fn scaled(&self, c: &GaussianRational) -> Self {
        let mut out = Self::from_terms(self.terms.iter().map(|(&e, a)| (e, a * c)));
        out.exact = self.exact;
        out
    }

    /// `f(w, z)`.
    pub fn swapped(&self) -> Self {
        let mut out = Self::from_terms(self.terms.iter().map(|(&(l, m), a)| ((m, l), a.clone())));
        out.exact = self.exact;
        out
    }

    pub fn partial_z(&self) -> Self {
        let mut out = Self::from_terms(
            self.terms
                .iter()
                .filter(|(e, _)| e.0 > 0)
                .map(|(&(l, m), a)| ((l - 1, m), a * &GaussianRational::from_int(l as i64))),
        );
        out.exact = self.exact;
        out
    }

    pub fn partial_w(&self) -> Self {
        self.swapped().partial_z().swapped()
    }

    /// As a polynomial in `w` with coefficients in `Q(i)[z]`.
    pub fn to_zw(&self) -> ZwPoly {
        let dw = self.degree_w() as usize;
        let mut rows: Vec<Vec<GaussianRational>> =
            (0..=dw).map(|_| alloc::vec![GaussianRational::zero(); self.degree_z() as usize + 1]).collect();
        for (&(l, m), a) in &self.terms {
            rows[m as usize][l as usize] = a.clone();
        }
        ZwPoly::new(rows.into_iter().map(QPoly::new).collect())
    }
}

fn fmt_rational(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for BivarPolynomial {
    /// Canonical text, parseable by [`BivarPolynomial::parse`].
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (idx, (&(l, m), c)) in self.terms.iter().enumerate() {
            let (neg, mag) = if c.im.is_zero() && c.re.is_negative() { (true, -c) } else { (false, c.clone()) };
            if idx == 0 {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            let mut factors: Vec<String> = Vec::new();
            let unit = mag.im.is_zero() && mag.re.is_one();
            if !unit || (l == 0 && m == 0) {
                factors.push(if mag.im.is_zero() {
                    fmt_rational(&mag.re)
                } else {
                    let sign = if mag.im.is_negative() { '-' } else { '+' };
                    format!("({}{}{}i)", fmt_rational(&mag.re), sign, fmt_rational(&mag.im.abs()))
                });
            }
            for (v, e) in [("z", l), ("w", m)] {
                match e {
                    0 => {}
                    1 => factors.push(v.into()),
                    _ => factors.push(format!("{v}^{e}")),
                }
            }
            f.write_str(&factors.join("*"))?;
        }
        Ok(())
    }
}

impl fmt::Debug for BivarPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::PolySyntax { pos: self.pos, msg: msg.into() })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn poly(mut self) -> Result<BivarPolynomial> {
        let mut terms = Vec::new();
        let mut sign = match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                -1
            }
            Some(b'+') => {
                self.pos += 1;
                1
            }
            None => return self.err("empty polynomial"),
            _ => 1,
        };
        loop {
            let (e, c) = self.term()?;
            terms.push((e, if sign < 0 { -c } else { c }));
            match self.peek() {
                None => break,
                Some(b'+') => sign = 1,
                Some(b'-') => sign = -1,
                Some(ch) => return self.err(format!("unexpected '{}'", ch as char)),
            }
            self.pos += 1;
        }
        Ok(BivarPolynomial::from_terms(terms))
    }

    fn term(&mut self) -> Result<((u32, u32), GaussianRational)> {
        let mut coeff = GaussianRational::one();
        let mut exps = (0u32, 0u32);
        self.factor(&mut coeff, &mut exps)?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    self.factor(&mut coeff, &mut exps)?;
                }
                // juxtaposition such as `3z^2`
                Some(b'z' | b'w' | b'(' | b'0'..=b'9' | b'.') => self.factor(&mut coeff, &mut exps)?,
                _ => break,
            }
        }
        Ok((exps, coeff))
    }

    fn factor(&mut self, coeff: &mut GaussianRational, exps: &mut (u32, u32)) -> Result<()> {
        match self.peek() {
            Some(v @ (b'z' | b'w')) => {
                self.pos += 1;
                let e = self.exponent()?;
                let slot = if v == b'z' { &mut exps.0 } else { &mut exps.1 };
                *slot =
                    slot.checked_add(e).ok_or(Error::PolySyntax { pos: self.pos, msg: "exponent overflow".into() })?;
                Ok(())
            }
            Some(b'(') => {
                let c = self.complex()?;
                *coeff = &*coeff * &c;
                Ok(())
            }
            Some(b'0'..=b'9' | b'.') => {
                let r = self.number()?;
                *coeff = coeff.scale(&r);
                Ok(())
            }
            Some(ch) => self.err(format!("expected a coefficient, 'z' or 'w', found '{}'", ch as char)),
            None => self.err("unexpected end of input"),
        }
    }

    fn exponent(&mut self) -> Result<u32> {
        if self.peek() != Some(b'^') {
            return Ok(1);
        }
        self.pos += 1;
        match self.peek() {
            Some(b'-') => return self.err("negative exponents are not allowed"),
            Some(b'0'..=b'9') => {}
            _ => return self.err("expected an exponent"),
        }
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        let text = core::str::from_utf8(&self.src[start..self.pos]).unwrap();
        text.parse().or_else(|_| {
            self.pos = start;
            self.err("exponent too large")
        })
    }

    fn number(&mut self) -> Result<BigRational> {
        let start = self.pos;
        let src = self.src;
        let digits = |p: &mut usize| {
            while *p < src.len() && (src[*p].is_ascii_digit() || src[*p] == b'.') {
                *p += 1;
            }
        };
        digits(&mut self.pos);
        if self.pos < src.len() && matches!(src[self.pos], b'e' | b'E') {
            let mut p = self.pos + 1;
            if p < src.len() && matches!(src[p], b'+' | b'-') {
                p += 1;
            }
            if p < src.len() && src[p].is_ascii_digit() {
                self.pos = p;
                digits(&mut self.pos);
            }
        }
        if self.pos < src.len() && src[self.pos] == b'/' {
            self.pos += 1;
            digits(&mut self.pos);
        }
        let text = core::str::from_utf8(&src[start..self.pos]).unwrap();
        parse_rational(text).ok_or(Error::PolySyntax { pos: start, msg: format!("bad number '{text}'") })
    }

    /// `(re+im i)`, `(re-im i)`, `(im i)` or `(re)`.
    fn complex(&mut self) -> Result<GaussianRational> {
        let open = self.pos;
        let close = match self.src[open..].iter().position(|&b| b == b')') {
            Some(k) => open + k,
            None => return self.err("unclosed parenthesis"),
        };
        let inner: String =
            core::str::from_utf8(&self.src[open + 1..close]).unwrap().chars().filter(|c| !c.is_whitespace()).collect();
        if inner.contains(['z', 'w', '(']) {
            return self.err("parenthesized expressions are not supported; expand the polynomial");
        }
        let bad = || Error::PolySyntax { pos: open, msg: format!("bad complex literal '({inner})'") };
        let value = match inner.strip_suffix('i') {
            None => GaussianRational::from_real(parse_rational(&inner).ok_or_else(bad)?),
            Some(body) => {
                // split at the last sign that is not a leading sign or an exponent sign
                let b = body.as_bytes();
                let split =
                    (1..b.len()).rev().find(|&k| matches!(b[k], b'+' | b'-') && !matches!(b[k - 1], b'e' | b'E'));
                let (re, im) = match split {
                    Some(k) => (&body[..k], &body[k..]),
                    None => ("0", body),
                };
                let im = match im {
                    "" | "+" => BigRational::one(),
                    "-" => -BigRational::one(),
                    s => parse_rational(s).ok_or_else(bad)?,
                };
                GaussianRational::new(parse_rational(re).ok_or_else(bad)?, im)
            }
        };
        self.pos = close + 1;
        Ok(value)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn q(p: i64, d: i64) -> BigRational {
        BigRational::new(p.into(), d.into())
    }

    #[test]
    fn parses_examples() {
        let f = BivarPolynomial::parse("z^3 + w^2 + 1").unwrap();
        assert_eq!(f.support(), vec![(0, 0), (0, 2), (3, 0)]);
        let f = BivarPolynomial::parse("2/3*z*w - (0+1i)").unwrap();
        assert_eq!(f.support(), vec![(0, 0), (1, 1)]);
        assert_eq!(f.coeff(0, 0), GaussianRational::new(q(0, 1), q(-1, 1)));
        assert_eq!(f.coeff(1, 1), GaussianRational::from_real(q(2, 3)));
        let f = BivarPolynomial::parse("-0.5*w + (1.5-2i)*z^2*w + 3z").unwrap();
        assert_eq!(f.coeff(0, 1), GaussianRational::from_real(q(-1, 2)));
        assert_eq!(f.coeff(2, 1), GaussianRational::new(q(3, 2), q(-2, 1)));
        assert_eq!(f.coeff(1, 0), GaussianRational::from_int(3));
    }

    #[test]
    fn rejects_bad_input() {
        for bad in ["(1+z^2)*(1+w^2)", "z^-1", "", "z +", "x", "z^", "(1+2i"] {
            assert!(matches!(BivarPolynomial::parse(bad), Err(Error::PolySyntax { .. })), "{bad}");
        }
    }

    #[test]
    fn cancellation_and_round_trip() {
        let f = BivarPolynomial::parse("z*w + 1 - w*z").unwrap();
        assert!(f.is_constant());
        let f = BivarPolynomial::parse("1 + 2*z^2*w - (0.25-1i)*w^2 + z^4").unwrap();
        let g = BivarPolynomial::parse(&f.to_string()).unwrap();
        assert_eq!(f, g);
    }

    #[test]
    fn derivatives() {
        let f = BivarPolynomial::parse("z^3*w^2 + 5*w + z").unwrap();
        assert_eq!(f.partial_z(), BivarPolynomial::parse("3*z^2*w^2 + 1").unwrap());
        assert_eq!(f.partial_w(), BivarPolynomial::parse("2*z^3*w + 5").unwrap());
    }
}
