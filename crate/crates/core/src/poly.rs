//! Homogeneous polynomials in `x0..xn` with integer coefficients and a small
//! expression parser (`*`, `+`, `-`, `^`, integer literals, variables `xK`).

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{input_err, Result};
use crate::field::PrimeField;

/// Sparse polynomial: exponent vector (indexed by variable) to coefficient.
/// Exponent vectors carry no trailing zeros so equal monomials compare equal.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct Polynomial {
    terms: BTreeMap<Vec<u32>, i64>,
}

fn trim(mut e: Vec<u32>) -> Vec<u32> {
    while e.last() == Some(&0) {
        e.pop();
    }
    e
}

impl Polynomial {
    pub fn zero() -> Self {
        Polynomial::default()
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (i64, Vec<u32>)>) -> Self {
        let mut p = Polynomial::zero();
        for (c, e) in terms {
            p.add_term(c, e);
        }
        p
    }

    fn add_term(&mut self, c: i64, e: Vec<u32>) {
        let e = trim(e);
        let slot = self.terms.entry(e.clone()).or_insert(0);
        *slot += c;
        if *slot == 0 {
            self.terms.remove(&e);
        }
    }

    /// Terms as (coefficient, exponent vector).
    pub fn terms(&self) -> impl Iterator<Item = (i64, &[u32])> {
        self.terms.iter().map(|(e, &c)| (c, e.as_slice()))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Number of variables actually used (highest index + 1).
    pub fn num_vars(&self) -> usize {
        self.terms.keys().map(|e| e.len()).max().unwrap_or(0)
    }

    /// Degree if every term has the same total degree.
    pub fn homogeneous_degree(&self) -> Option<u32> {
        let mut degs = self.terms.keys().map(|e| e.iter().sum::<u32>());
        let first = degs.next()?;
        degs.all(|d| d == first).then_some(first)
    }

    /// Same terms with coefficients reduced mod p; zero terms dropped.
    pub fn reduce_mod(&self, field: PrimeField) -> Vec<(u32, Vec<u32>)> {
        self.terms
            .iter()
            .map(|(e, &c)| (field.elem(c), e.clone()))
            .filter(|(c, _)| *c != 0)
            .collect()
    }

    pub fn eval(&self, field: PrimeField, point: &[u32]) -> u32 {
        let mut acc = 0u32;
        for (e, &c) in &self.terms {
            let mut t = field.elem(c);
            for (i, &k) in e.iter().enumerate() {
                let x = point.get(i).copied().unwrap_or(0);
                t = field.mul(t, field.pow(x, k as u64));
            }
            acc = field.add(acc, t);
        }
        acc
    }

    pub fn parse(src: &str) -> Result<Self> {
        Parser::new(src).parse()
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (e, &c)) in self.terms.iter().enumerate() {
            let mut factors: Vec<String> = Vec::new();
            for (i, &pow) in e.iter().enumerate() {
                match pow {
                    0 => {}
                    1 => factors.push(format!("x{i}")),
                    _ => factors.push(format!("x{i}^{pow}")),
                }
            }
            let mag = c.unsigned_abs();
            let sign = if c < 0 { "-" } else { "+" };
            if k == 0 {
                if c < 0 {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            if factors.is_empty() {
                write!(f, "{mag}")?;
            } else if mag == 1 {
                write!(f, "{}", factors.join("*"))?;
            } else {
                write!(f, "{mag}*{}", factors.join("*"))?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Polynomial({self})")
    }
}

struct Parser<'a> {
    src: &'a str,
    chars: Vec<char>,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn new(src: &'a str) -> Self {
        Parser {
            src,
            chars: src.chars().filter(|c| !c.is_whitespace()).collect(),
            pos: 0,
        }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn number(&mut self) -> Result<u64> {
        let start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(input_err!("expected a number in polynomial {:?}", self.src));
        }
        let s: String = self.chars[start..self.pos].iter().collect();
        s.parse()
            .map_err(|_| input_err!("number {s} too large in polynomial {:?}", self.src))
    }

    fn parse(mut self) -> Result<Polynomial> {
        let mut poly = Polynomial::zero();
        if self.chars.is_empty() {
            return Err(input_err!("empty polynomial"));
        }
        let mut first = true;
        while self.pos < self.chars.len() || first {
            let sign = match self.peek() {
                Some('+') => {
                    self.pos += 1;
                    1
                }
                Some('-') => {
                    self.pos += 1;
                    -1
                }
                _ if first => 1,
                Some(c) => {
                    return Err(input_err!(
                        "unexpected {c:?} in polynomial {:?}",
                        self.src
                    ))
                }
                None => break,
            };
            first = false;
            let (c, e) = self.term()?;
            poly.add_term(sign * c, e);
        }
        Ok(poly)
    }

    fn term(&mut self) -> Result<(i64, Vec<u32>)> {
        let mut coeff: i64 = 1;
        let mut exps: Vec<u32> = Vec::new();
        loop {
            match self.peek() {
                Some('x') => {
                    self.pos += 1;
                    let idx = self.number()? as usize;
                    let pow = self.power()?;
                    if exps.len() <= idx {
                        exps.resize(idx + 1, 0);
                    }
                    exps[idx] += pow;
                }
                Some(c) if c.is_ascii_digit() => {
                    let n = self.number()? as i64;
                    let pow = self.power()?;
                    coeff = coeff
                        .checked_mul(n.checked_pow(pow).ok_or_else(|| {
                            input_err!("coefficient overflow in {:?}", self.src)
                        })?)
                        .ok_or_else(|| input_err!("coefficient overflow in {:?}", self.src))?;
                }
                Some(c) => {
                    return Err(input_err!(
                        "unexpected {c:?} at offset {} in polynomial {:?}",
                        self.pos,
                        self.src
                    ))
                }
                None => return Err(input_err!("polynomial {:?} ends after an operator", self.src)),
            }
            if self.peek() == Some('*') {
                self.pos += 1;
            } else {
                break;
            }
        }
        Ok((coeff, exps))
    }

    fn power(&mut self) -> Result<u32> {
        if self.peek() == Some('^') {
            self.pos += 1;
            let n = self.number()?;
            u32::try_from(n).map_err(|_| input_err!("exponent too large in {:?}", self.src))
        } else {
            Ok(1)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_conic() {
        let p = Polynomial::parse("x0*x2 - x1^2").unwrap();
        assert_eq!(p.homogeneous_degree(), Some(2));
        assert_eq!(p.num_vars(), 3);
        let q = Polynomial::parse(" - x1 ^ 2+x2*x0 ").unwrap();
        assert_eq!(p, q);
        assert_eq!(p.to_string(), "-x1^2 + x0*x2");
    }

    #[test]
    fn parses_coefficients_and_cancellation() {
        let p = Polynomial::parse("2*x0 + 3*x0 - 5*x0 + x1").unwrap();
        assert_eq!(p, Polynomial::parse("x1").unwrap());
        assert!(Polynomial::parse("x0 - x0").unwrap().is_zero());
    }

    #[test]
    fn rejects_garbage() {
        for bad in ["", "x", "x0 +", "y1", "x0**x1", "x0 x1"] {
            assert!(Polynomial::parse(bad).is_err(), "{bad:?}");
        }
    }

    #[test]
    fn non_homogeneous_detected() {
        assert_eq!(Polynomial::parse("x0^2 + x1").unwrap().homogeneous_degree(), None);
    }

    #[test]
    fn eval_mod_p() {
        let f = PrimeField::new(3).unwrap();
        let p = Polynomial::parse("x0*x2 - x1^2").unwrap();
        assert_eq!(p.eval(f, &[1, 1, 1]), 0);
        assert_eq!(p.eval(f, &[1, 0, 1]), 1);
    }
}
