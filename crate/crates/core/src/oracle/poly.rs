use std::collections::BTreeMap;
use std::fmt;
use std::io::{BufRead, Write};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use super::OracleError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Variable {
    X,
    Y,
}

/// Sparse polynomial in `x, y` with exact rational coefficients.
///
/// Keys are exponent pairs `(i, j)` for `x^i y^j`; zero coefficients are
/// never stored.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct LocalPolynomial {
    terms: BTreeMap<(u32, u32), BigRational>,
}

impl LocalPolynomial {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds `coeff * x^i y^j`, merging with an existing term.
    pub fn add_term(&mut self, i: u32, j: u32, coeff: BigRational) {
        let slot = self.terms.entry((i, j)).or_insert_with(BigRational::zero);
        *slot += coeff;
        if slot.is_zero() {
            self.terms.remove(&(i, j));
        }
    }

    pub fn with_term(mut self, i: u32, j: u32, coeff: i64) -> Self {
        self.add_term(i, j, BigRational::from_integer(BigInt::from(coeff)));
        self
    }

    /// `y^n - x^m`.
    pub fn initial_term(n: u32, m: u32) -> Self {
        Self::new().with_term(0, n, 1).with_term(m, 0, -1)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(u32, u32), &BigRational)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, i: u32, j: u32) -> Option<&BigRational> {
        self.terms.get(&(i, j))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Lowest total degree of a term; `None` for the zero polynomial.
    pub fn order(&self) -> Option<u32> {
        self.terms.keys().map(|(i, j)| i + j).min()
    }

    pub fn vanishes_at_origin(&self) -> bool {
        !self.terms.contains_key(&(0, 0))
    }

    pub fn partial_derivative(&self, var: Variable) -> Self {
        let mut out = Self::new();
        for (&(i, j), c) in &self.terms {
            let (e, key) = match var {
                Variable::X if i > 0 => (i, (i - 1, j)),
                Variable::Y if j > 0 => (j, (i, j - 1)),
                _ => continue,
            };
            out.add_term(key.0, key.1, c * BigRational::from_integer(BigInt::from(e)));
        }
        out
    }

    /// Reads the `numerator denominator i j` line format; `#` lines are skipped.
    pub fn read_from(reader: impl BufRead) -> Result<Self, OracleError> {
        let mut poly = Self::new();
        for (idx, line) in reader.lines().enumerate() {
            let line = line?;
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let err = |msg: String| OracleError::Parse { line: idx + 1, msg };
            let fields: Vec<&str> = line.split_whitespace().collect();
            if fields.len() != 4 {
                return Err(err(format!("expected 4 fields, found {}", fields.len())));
            }
            let num: BigInt = fields[0]
                .parse()
                .map_err(|_| err(format!("bad numerator {:?}", fields[0])))?;
            let den: BigInt = fields[1]
                .parse()
                .map_err(|_| err(format!("bad denominator {:?}", fields[1])))?;
            if den.is_zero() {
                return Err(err("zero denominator".into()));
            }
            let exp = |s: &str| s.parse::<u32>().map_err(|_| err(format!("bad exponent {s:?}")));
            let (i, j) = (exp(fields[2])?, exp(fields[3])?);
            poly.add_term(i, j, BigRational::new(num, den));
        }
        Ok(poly)
    }

    pub fn write_to(&self, mut w: impl Write) -> std::io::Result<()> {
        for (&(i, j), c) in &self.terms {
            writeln!(w, "{} {} {i} {j}", c.numer(), c.denom())?;
        }
        Ok(())
    }
}

impl fmt::Display for LocalPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        // graded order, lowest degree first
        let mut keys: Vec<&(u32, u32)> = self.terms.keys().collect();
        keys.sort_by_key(|(i, j)| (i + j, std::cmp::Reverse(*i)));
        for (n, key) in keys.into_iter().enumerate() {
            let c = &self.terms[key];
            let neg = c.is_negative();
            let abs = c.abs();
            match (n, neg) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let (i, j) = *key;
            let mut factors = Vec::new();
            if !abs.is_one() || (i == 0 && j == 0) {
                factors.push(abs.to_string());
            }
            for (var, e) in [("x", i), ("y", j)] {
                match e {
                    0 => {}
                    1 => factors.push(var.to_string()),
                    _ => factors.push(format!("{var}^{e}")),
                }
            }
            f.write_str(&factors.join("*"))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    #[test]
    fn derivatives() {
        let cusp = LocalPolynomial::initial_term(2, 3);
        assert_eq!(cusp.partial_derivative(Variable::X), LocalPolynomial::new().with_term(2, 0, -3));
        assert_eq!(cusp.partial_derivative(Variable::Y), LocalPolynomial::new().with_term(0, 1, 2));
        let mono = LocalPolynomial::new().with_term(2, 3, 1);
        assert_eq!(mono.partial_derivative(Variable::X), LocalPolynomial::new().with_term(1, 3, 2));
    }

    #[test]
    fn zero_terms_dropped() {
        let mut p = LocalPolynomial::new().with_term(1, 1, 2);
        p.add_term(1, 1, q(-2));
        assert!(p.is_zero());
        assert_eq!(p.order(), None);
    }

    #[test]
    fn file_format_round_trip() {
        let text = "# cusp\n1 1 0 2\n-1 1 3 0\n\n1 2 2 2\n";
        let p = LocalPolynomial::read_from(text.as_bytes()).unwrap();
        assert_eq!(p.len(), 3);
        assert_eq!(p.coefficient(2, 2), Some(&BigRational::new(1.into(), 2.into())));
        let mut out = Vec::new();
        p.write_to(&mut out).unwrap();
        assert_eq!(LocalPolynomial::read_from(out.as_slice()).unwrap(), p);
        assert_eq!(p.to_string(), "y^2 - x^3 + 1/2*x^2*y^2");
    }

    #[test]
    fn file_format_errors() {
        for bad in ["1 1 0", "1 0 0 2", "a 1 0 2", "1 1 -1 2"] {
            assert!(matches!(
                LocalPolynomial::read_from(bad.as_bytes()),
                Err(OracleError::Parse { line: 1, .. })
            ));
        }
    }
}
