//! Sparse polynomials in the homogeneous coordinates `x_rho`, with exact
//! rational coefficients.
//!
//! Text form: sums of products of rational literals (`3`, `-2/5`) and
//! variables raised to non-negative integer powers, e.g.
//! `x^2*z^2 + 7*x*y*z*w - 1/2*y^4`. Printing lists terms in descending
//! lexicographic order of exponent vectors with explicit `*` and `^`.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::lattice::{DegreeClass, EulerField, Fan, FanError};
use crate::linalg::{rat, Rational};

/// Exponent vector indexed by the rays of a fan. Ordered lexicographically.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    pub fn from_exponents(e: &[i64]) -> Self {
        Monomial(e.iter().map(|&x| u32::try_from(x).expect("non-negative exponent")).collect())
    }

    pub fn exponents_i64(&self) -> Vec<i64> {
        self.0.iter().map(|&x| x as i64).collect()
    }

    pub fn total_degree(&self) -> u32 {
        self.0.iter().sum()
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// `self / other` when `other` divides `self`.
    pub fn checked_div(&self, other: &Monomial) -> Option<Monomial> {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| a.checked_sub(*b))
            .collect::<Option<Vec<_>>>()
            .map(Monomial)
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseError {
    #[error("unknown variable '{name}' at offset {offset}")]
    UnknownVariable { name: String, offset: usize },
    #[error("syntax error at offset {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error("negative exponent at offset {offset}")]
    NegativeExponent { offset: usize },
}

/// A polynomial as a map from monomials to non-zero rational coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Polynomial {
    nvars: usize,
    terms: BTreeMap<Monomial, Rational>,
}

impl Polynomial {
    pub fn zero(nvars: usize) -> Self {
        Polynomial {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: Rational) -> Self {
        Self::term(Monomial::one(nvars), c)
    }

    pub fn term(m: Monomial, c: Rational) -> Self {
        let mut p = Self::zero(m.0.len());
        if !c.is_zero() {
            p.terms.insert(m, c);
        }
        p
    }

    pub fn monomial(exponents: &[i64]) -> Self {
        Self::term(Monomial::from_exponents(exponents), Rational::one())
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Self::term(Monomial(e), Rational::one())
    }

    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (Monomial, Rational)>) -> Self {
        let mut p = Self::zero(nvars);
        for (m, c) in terms {
            assert_eq!(m.0.len(), nvars, "monomial length");
            p.add_term(m, c);
        }
        p
    }

    fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in ascending lexicographic order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn add(&self, other: &Polynomial) -> Polynomial {
        assert_eq!(self.nvars, other.nvars);
        let mut p = self.clone();
        for (m, c) in &other.terms {
            p.add_term(m.clone(), c.clone());
        }
        p
    }

    pub fn sub(&self, other: &Polynomial) -> Polynomial {
        self.add(&other.scale(&-Rational::one()))
    }

    pub fn scale(&self, k: &Rational) -> Polynomial {
        if k.is_zero() {
            return Self::zero(self.nvars);
        }
        Polynomial {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c * k)).collect(),
        }
    }

    pub fn mul(&self, other: &Polynomial) -> Polynomial {
        assert_eq!(self.nvars, other.nvars);
        let mut p = Self::zero(self.nvars);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                p.add_term(m1.mul(m2), c1 * c2);
            }
        }
        p
    }

    pub fn mul_monomial(&self, m: &Monomial) -> Polynomial {
        Polynomial {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(k, c)| (k.mul(m), c.clone())).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Polynomial {
        let mut acc = Self::constant(self.nvars, Rational::one());
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Formal partial derivative with respect to `x_i`.
    pub fn partial(&self, i: usize) -> Polynomial {
        let mut p = Self::zero(self.nvars);
        for (m, c) in &self.terms {
            let e = m.0[i];
            if e > 0 {
                let mut m2 = m.clone();
                m2.0[i] -= 1;
                p.add_term(m2, c * rat(e as i64));
            }
        }
        p
    }

    /// `sum_rho b_rho x_rho df/dx_rho`.
    pub fn euler_apply(&self, theta: &EulerField) -> Polynomial {
        let mut p = Self::zero(self.nvars);
        for (m, c) in &self.terms {
            let weight = m
                .0
                .iter()
                .zip(&theta.b)
                .fold(Rational::zero(), |acc, (&e, b)| acc + b * rat(e as i64));
            p.add_term(m.clone(), c * weight);
        }
        p
    }

    /// Exact division by a monomial, `None` if some term is not divisible.
    pub fn div_monomial(&self, m: &Monomial) -> Option<Polynomial> {
        let terms = self
            .terms
            .iter()
            .map(|(k, c)| k.checked_div(m).map(|q| (q, c.clone())))
            .collect::<Option<BTreeMap<_, _>>>()?;
        Some(Polynomial {
            nvars: self.nvars,
            terms,
        })
    }

    /// The common degree of all terms, if the polynomial is homogeneous. The
    /// zero polynomial has no well-defined degree and yields `None`.
    pub fn homogeneous_degree(&self, fan: &Fan) -> Result<Option<DegreeClass>, FanError> {
        let mut degree: Option<DegreeClass> = None;
        for m in self.terms.keys() {
            let d = fan.degree_of(&m.exponents_i64())?;
            match &degree {
                None => degree = Some(d),
                Some(prev) if *prev != d => return Ok(None),
                Some(_) => {}
            }
        }
        Ok(degree)
    }

    /// Evaluates at a complex point (coefficients rounded to `f64`).
    pub fn eval_complex(&self, x: &[Complex64]) -> Complex64 {
        self.terms
            .iter()
            .map(|(m, c)| {
                m.0.iter()
                    .zip(x)
                    .fold(Complex64::new(to_f64(c), 0.0), |acc, (&e, &v)| acc * v.powu(e))
            })
            .sum()
    }

    /// Parses text in the given variables.
    pub fn parse(text: &str, variables: &[impl AsRef<str>]) -> Result<Polynomial, ParseError> {
        let names: Vec<&str> = variables.iter().map(|v| v.as_ref()).collect();
        let mut parser = Parser {
            src: text.as_bytes(),
            pos: 0,
            names: &names,
        };
        let p = parser.expr()?;
        parser.skip_ws();
        if parser.pos != parser.src.len() {
            return Err(parser.syntax("unexpected trailing input"));
        }
        Ok(p)
    }

    /// Renders with the given variable names.
    pub fn display<'a>(&'a self, names: &'a [impl AsRef<str>]) -> impl fmt::Display + 'a {
        Rendered { p: self, names }
    }
}

pub(crate) fn to_f64(c: &Rational) -> f64 {
    c.to_f64().unwrap_or(f64::NAN)
}

struct Rendered<'a, S> {
    p: &'a Polynomial,
    names: &'a [S],
}

impl<S: AsRef<str>> fmt::Display for Rendered<'_, S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.p.is_zero() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.p.terms.iter().rev().enumerate() {
            let negative = c.is_negative();
            match (k, negative) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let abs = c.abs();
            let mut factors: Vec<String> = Vec::new();
            let is_constant = m.0.iter().all(|&e| e == 0);
            if !abs.is_one() || is_constant {
                factors.push(abs.to_string());
            }
            for (i, &e) in m.0.iter().enumerate() {
                let name = self.names[i].as_ref();
                match e {
                    0 => {}
                    1 => factors.push(name.to_string()),
                    _ => factors.push(format!("{name}^{e}")),
                }
            }
            write!(f, "{}", factors.join("*"))?;
        }
        Ok(())
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    names: &'a [&'a str],
}

impl Parser<'_> {
    fn nvars(&self) -> usize {
        self.names.len()
    }

    fn syntax(&self, message: &str) -> ParseError {
        ParseError::Syntax {
            offset: self.pos,
            message: message.to_string(),
        }
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

    // expr := term (('+'|'-') term)*
    fn expr(&mut self) -> Result<Polynomial, ParseError> {
        let mut acc = self.term()?;
        loop {
            let negate = match self.peek() {
                Some(b'+') => false,
                Some(b'-') => true,
                _ => return Ok(acc),
            };
            self.pos += 1;
            let t = self.term()?;
            acc = if negate { acc.sub(&t) } else { acc.add(&t) };
        }
    }

    // term := unary ('*' unary)*
    fn term(&mut self) -> Result<Polynomial, ParseError> {
        let mut acc = self.unary()?;
        while self.peek() == Some(b'*') {
            self.pos += 1;
            acc = acc.mul(&self.unary()?);
        }
        Ok(acc)
    }

    // unary := ('+'|'-') unary | power
    fn unary(&mut self) -> Result<Polynomial, ParseError> {
        match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                Ok(self.unary()?.scale(&-Rational::one()))
            }
            Some(b'+') => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    // power := atom ['^' integer]
    fn power(&mut self) -> Result<Polynomial, ParseError> {
        let base = self.atom()?;
        if self.peek() != Some(b'^') {
            return Ok(base);
        }
        self.pos += 1;
        let at = {
            self.skip_ws();
            self.pos
        };
        match self.peek() {
            Some(b'-') => return Err(ParseError::NegativeExponent { offset: at }),
            Some(c) if c.is_ascii_digit() => {}
            _ => return Err(self.syntax("expected an exponent")),
        }
        let e = self.integer()?;
        let e = e
            .to_u32()
            .ok_or_else(|| ParseError::Syntax {
                offset: at,
                message: "exponent too large".into(),
            })?;
        Ok(base.pow(e))
    }

    // atom := number | variable | '(' expr ')'
    fn atom(&mut self) -> Result<Polynomial, ParseError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let p = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.syntax("expected ')'"));
                }
                self.pos += 1;
                Ok(p)
            }
            Some(c) if c.is_ascii_digit() => {
                let num = self.integer()?;
                let mut value = Rational::from_integer(num);
                if self.src.get(self.pos) == Some(&b'/') {
                    self.pos += 1;
                    if !self.src.get(self.pos).is_some_and(u8::is_ascii_digit) {
                        return Err(self.syntax("expected a denominator"));
                    }
                    let den = self.integer()?;
                    if den.is_zero() {
                        return Err(self.syntax("zero denominator"));
                    }
                    value /= Rational::from_integer(den);
                }
                Ok(Polynomial::constant(self.nvars(), value))
            }
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                let start = self.pos;
                while self
                    .src
                    .get(self.pos)
                    .is_some_and(|c| c.is_ascii_alphanumeric() || *c == b'_')
                {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
                match self.names.iter().position(|n| *n == name) {
                    Some(i) => Ok(Polynomial::var(self.nvars(), i)),
                    None => Err(ParseError::UnknownVariable {
                        name: name.to_string(),
                        offset: start,
                    }),
                }
            }
            Some(_) => Err(self.syntax("unexpected character")),
            None => Err(self.syntax("unexpected end of input")),
        }
    }

    fn integer(&mut self) -> Result<BigInt, ParseError> {
        let start = self.pos;
        while self.src.get(self.pos).is_some_and(u8::is_ascii_digit) {
            self.pos += 1;
        }
        let digits = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
        digits.parse().map_err(|_| self.syntax("expected an integer"))
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ChartError {
    #[error(transparent)]
    Fan(#[from] FanError),
    #[error("chart rays {0:?} are linearly dependent")]
    DependentRays(Vec<usize>),
}

/// A polynomial restricted to the chart where `x_rho = 1` for the rays
/// outside a cone `I`; the chart variables are the `x_rho`, `rho in I`, in
/// increasing index order.
#[derive(Clone, Debug)]
pub struct ChartPolynomial {
    pub chart: Vec<usize>,
    pub exact: Polynomial,
    compiled: Vec<(Vec<u32>, f64)>,
    max_exponent: Vec<u32>,
}

impl ChartPolynomial {
    fn new(chart: Vec<usize>, exact: Polynomial) -> Self {
        let k = exact.nvars();
        let compiled: Vec<(Vec<u32>, f64)> =
            exact.terms().map(|(m, c)| (m.0.clone(), to_f64(c))).collect();
        let max_exponent = (0..k)
            .map(|i| compiled.iter().map(|(e, _)| e[i]).max().unwrap_or(0))
            .collect();
        ChartPolynomial {
            chart,
            exact,
            compiled,
            max_exponent,
        }
    }

    pub fn partial(&self, k: usize) -> ChartPolynomial {
        ChartPolynomial::new(self.chart.clone(), self.exact.partial(k))
    }

    /// Evaluates at `u` (one complex value per chart variable).
    pub fn eval(&self, u: &[Complex64]) -> Complex64 {
        let powers: Vec<Vec<Complex64>> = u
            .iter()
            .zip(&self.max_exponent)
            .map(|(&z, &top)| {
                let mut v = Vec::with_capacity(top as usize + 1);
                let mut acc = Complex64::new(1.0, 0.0);
                for _ in 0..=top {
                    v.push(acc);
                    acc *= z;
                }
                v
            })
            .collect();
        self.compiled
            .iter()
            .map(|(e, c)| {
                e.iter()
                    .enumerate()
                    .fold(Complex64::new(*c, 0.0), |acc, (i, &k)| acc * powers[i][k as usize])
            })
            .sum()
    }
}

/// Restricts `p` to the chart of the `n`-subset `chart` of rays.
pub fn dehomogenize(fan: &Fan, p: &Polynomial, chart: &[usize]) -> Result<ChartPolynomial, ChartError> {
    if fan.det_n(chart)? == 0 {
        return Err(ChartError::DependentRays(chart.to_vec()));
    }
    let mut sorted = chart.to_vec();
    sorted.sort_unstable();
    let exact = Polynomial::from_terms(
        sorted.len(),
        p.terms()
            .map(|(m, c)| (Monomial(sorted.iter().map(|&r| m.0[r]).collect()), c.clone())),
    );
    Ok(ChartPolynomial::new(sorted, exact))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::standard::*;
    use crate::linalg::ratio;

    const XYZW: [&str; 4] = ["x", "y", "z", "w"];

    fn lambda_f(lambda: i64) -> Polynomial {
        Polynomial::parse(
            &format!("x^2*z^2 + x^2*w^2 + y^2*z^2 + y^2*w^2 + {lambda}*x*y*z*w"),
            &XYZW,
        )
        .unwrap()
    }

    #[test]
    fn parse_examples() {
        assert_eq!(lambda_f(7).num_terms(), 5);
        assert!(Polynomial::parse("0", &XYZW).unwrap().is_zero());
        assert!(Polynomial::parse("x - x", &XYZW).unwrap().is_zero());
        let p = Polynomial::parse("(x+y)^2 - 2*x*y", &XYZW).unwrap();
        assert_eq!(p, Polynomial::parse("x^2+y^2", &XYZW).unwrap());
        let p = Polynomial::parse("-3/6*z + 1/2*z", &XYZW).unwrap();
        assert!(p.is_zero());
        let p = Polynomial::parse("x + -2*y - -y", &XYZW).unwrap();
        assert_eq!(p, Polynomial::parse("x - y", &XYZW).unwrap());
        assert_eq!(
            Polynomial::parse("2/4", &XYZW).unwrap(),
            Polynomial::constant(4, ratio(1, 2))
        );
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(
            Polynomial::parse("x + q", &XYZW),
            Err(ParseError::UnknownVariable { ref name, offset: 4 }) if name == "q"
        ));
        assert!(matches!(
            Polynomial::parse("x^-1", &XYZW),
            Err(ParseError::NegativeExponent { .. })
        ));
        for bad in ["x +", "x ** y", "(x", "x y", "1/0", "", "x^y", "3/"] {
            assert!(
                matches!(Polynomial::parse(bad, &XYZW), Err(ParseError::Syntax { .. })),
                "{bad}"
            );
        }
    }

    #[test]
    fn printing() {
        let p = Polynomial::parse("y - 1/2*x^2*z + 3 - x", &XYZW).unwrap();
        assert_eq!(p.display(&XYZW).to_string(), "-1/2*x^2*z - x + y + 3");
        assert_eq!(Polynomial::zero(4).display(&XYZW).to_string(), "0");
    }

    #[test]
    fn homogeneity() {
        let fan = p1_times_p1();
        let p = Polynomial::parse("x^2*z^2 + y^2*w^2", &XYZW).unwrap();
        let d = p.homogeneous_degree(&fan).unwrap().unwrap();
        assert_eq!(d, fan.degree_of(&[2, 0, 2, 0]).unwrap());
        let q = Polynomial::parse("x + z", &XYZW).unwrap();
        assert!(q.homogeneous_degree(&fan).unwrap().is_none());
        let one = Polynomial::constant(4, rat(1));
        assert!(one.homogeneous_degree(&fan).unwrap().unwrap().is_zero());
    }

    #[test]
    fn derivatives() {
        let d = Polynomial::parse("x^2*z^2", &XYZW).unwrap().partial(0);
        assert_eq!(d, Polynomial::parse("2*x*z^2", &XYZW).unwrap());
        let d = lambda_f(5).partial(0);
        assert_eq!(d, Polynomial::parse("2*x*z^2 + 2*x*w^2 + 5*y*z*w", &XYZW).unwrap());
        assert!(Polynomial::parse("y^2", &XYZW).unwrap().partial(0).is_zero());
    }

    #[test]
    fn euler_formulas() {
        let theta = EulerField {
            b: vec![rat(1), rat(1), rat(0), rat(0)],
        };
        let f = lambda_f(3);
        assert_eq!(f.euler_apply(&theta), f.scale(&rat(2)));
        assert!(Polynomial::constant(4, rat(1)).euler_apply(&theta).is_zero());
        let p2 = projective_space(2);
        let g = Polynomial::parse("a^3 + 2*a*b*c - c^2*b", &["a", "b", "c"]).unwrap();
        for theta in p2.euler_basis().unwrap() {
            assert_eq!(g.euler_apply(&theta), g.scale(&rat(3)));
        }
    }

    #[test]
    fn charts() {
        let p1 = projective_space(1);
        let f = Polynomial::parse("a^2", &["a", "b"]).unwrap();
        // chart of the ray for b: a = 1
        let c = dehomogenize(&p1, &f, &[1]).unwrap();
        assert_eq!(c.exact, Polynomial::constant(1, rat(1)));
        let c = dehomogenize(&p1, &f, &[0]).unwrap();
        assert_eq!(c.exact, Polynomial::parse("u^2", &["u"]).unwrap());
        let z = Complex64::new(0.5, -2.0);
        assert!((c.eval(&[z]) - z * z).norm() < 1e-12);

        let q = p1_times_p1();
        let c = dehomogenize(&q, &lambda_f(7), &[0, 2]).unwrap();
        let expected = Polynomial::parse("u^2*v^2 + u^2 + v^2 + 1 + 7*u*v", &["u", "v"]).unwrap();
        assert_eq!(c.exact, expected);
        assert!(matches!(
            dehomogenize(&q, &lambda_f(7), &[0, 1]),
            Err(ChartError::DependentRays(_))
        ));
    }

    #[test]
    fn complex_evaluation_matches_chart() {
        let q = p1_times_p1();
        let f = lambda_f(2);
        let c = dehomogenize(&q, &f, &[1, 3]).unwrap();
        let (u, v) = (Complex64::new(0.3, 0.1), Complex64::new(-1.2, 0.7));
        let one = Complex64::new(1.0, 0.0);
        let full = f.eval_complex(&[one, u, one, v]);
        assert!((c.eval(&[u, v]) - full).norm() < 1e-12);
    }
}
