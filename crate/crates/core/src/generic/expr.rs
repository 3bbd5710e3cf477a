//! Affine expressions `c + a*x + b*y + ...` with integer coefficients over
//! single-letter variables.
//!
//! Grammar:
//!
//! ```text
//! EXPR := TERM (('+' | '-') TERM)*
//! TERM := INT | [INT '*'] VAR
//! VAR  := 'a'..='z'
//! ```
//!
//! The first term may carry a leading `-`. Printing is canonical: a bare
//! variable part when the constant is zero (`x`, `-x`), the variable part
//! first when its leading coefficient is positive (`x+3`, `y-6`), and the
//! constant first otherwise (`1-x`).

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};
use std::str::FromStr;

use num_rational::Ratio;
use thiserror::Error;

pub type Rational = Ratio<i64>;
pub type Variable = char;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExprError {
    #[error("empty expression")]
    Empty,
    #[error("unexpected {found:?} at position {position}")]
    Syntax { position: usize, found: String },
    #[error("non-integer coefficient {token:?} at position {position}")]
    NonInteger { position: usize, token: String },
    #[error("integer {token:?} at position {position} is out of range")]
    Overflow { position: usize, token: String },
}

/// Integer constant plus integer multiples of variables. Zero coefficients
/// are never stored, so equality is structural equality.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AffineExpr {
    constant: i64,
    terms: BTreeMap<Variable, i64>,
}

impl AffineExpr {
    pub fn constant(value: i64) -> Self {
        Self {
            constant: value,
            terms: BTreeMap::new(),
        }
    }

    pub fn var(name: Variable) -> Self {
        Self::term(name, 1)
    }

    pub fn term(name: Variable, coefficient: i64) -> Self {
        let mut e = Self::constant(0);
        e.add_term(name, coefficient);
        e
    }

    pub fn constant_part(&self) -> i64 {
        self.constant
    }

    pub fn terms(&self) -> &BTreeMap<Variable, i64> {
        &self.terms
    }

    pub fn coefficient(&self, name: Variable) -> i64 {
        self.terms.get(&name).copied().unwrap_or(0)
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn as_constant(&self) -> Option<i64> {
        self.is_constant().then_some(self.constant)
    }

    pub fn variables(&self) -> impl Iterator<Item = Variable> + '_ {
        self.terms.keys().copied()
    }

    /// The expression with its constant dropped.
    pub fn variable_part(&self) -> AffineExpr {
        Self {
            constant: 0,
            terms: self.terms.clone(),
        }
    }

    pub fn scaled(&self, factor: i64) -> AffineExpr {
        if factor == 0 {
            return Self::constant(0);
        }
        Self {
            constant: self.constant * factor,
            terms: self.terms.iter().map(|(&v, &c)| (v, c * factor)).collect(),
        }
    }

    /// Value under `assignment`; `None` when a variable is unassigned.
    pub fn evaluate(&self, assignment: &BTreeMap<Variable, Rational>) -> Option<Rational> {
        self.terms
            .iter()
            .try_fold(Rational::from(self.constant), |acc, (v, &c)| {
                assignment.get(v).map(|x| acc + x * c)
            })
    }

    fn add_term(&mut self, name: Variable, coefficient: i64) {
        let c = self.terms.entry(name).or_insert(0);
        *c += coefficient;
        if *c == 0 {
            self.terms.remove(&name);
        }
    }
}

impl From<i64> for AffineExpr {
    fn from(value: i64) -> Self {
        Self::constant(value)
    }
}

impl Add for &AffineExpr {
    type Output = AffineExpr;

    fn add(self, rhs: &AffineExpr) -> AffineExpr {
        let mut out = self.clone();
        out.constant += rhs.constant;
        for (&v, &c) in &rhs.terms {
            out.add_term(v, c);
        }
        out
    }
}

impl Sub for &AffineExpr {
    type Output = AffineExpr;

    fn sub(self, rhs: &AffineExpr) -> AffineExpr {
        self + &(-rhs)
    }
}

impl Neg for &AffineExpr {
    type Output = AffineExpr;

    fn neg(self) -> AffineExpr {
        self.scaled(-1)
    }
}

impl std::iter::Sum for AffineExpr {
    fn sum<I: Iterator<Item = AffineExpr>>(iter: I) -> Self {
        iter.fold(AffineExpr::constant(0), |acc, e| &acc + &e)
    }
}

fn write_term(f: &mut fmt::Formatter<'_>, var: Variable, coef: i64, leading: bool) -> fmt::Result {
    let sign = match (coef < 0, leading) {
        (true, _) => "-",
        (false, true) => "",
        (false, false) => "+",
    };
    match coef.unsigned_abs() {
        1 => write!(f, "{sign}{var}"),
        m => write!(f, "{sign}{m}*{var}"),
    }
}

impl fmt::Display for AffineExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let Some((_, &lead)) = self.terms.iter().next() else {
            return write!(f, "{}", self.constant);
        };
        let terms_first = self.constant == 0 || lead > 0;
        if !terms_first {
            write!(f, "{}", self.constant)?;
        }
        for (i, (&v, &c)) in self.terms.iter().enumerate() {
            write_term(f, v, c, terms_first && i == 0)?;
        }
        if terms_first && self.constant != 0 {
            write!(f, "{:+}", self.constant)?;
        }
        Ok(())
    }
}

struct Parser<'a> {
    text: &'a str,
    pos: usize,
}

impl Parser<'_> {
    fn peek(&self) -> Option<char> {
        self.text[self.pos..].chars().next()
    }

    fn unexpected(&self) -> ExprError {
        ExprError::Syntax {
            position: self.pos,
            found: self
                .peek()
                .map_or_else(|| "end of input".into(), String::from),
        }
    }

    fn integer(&mut self) -> Result<Option<i64>, ExprError> {
        let start = self.pos;
        let digits = self.text[start..]
            .find(|ch: char| !ch.is_ascii_digit())
            .unwrap_or(self.text.len() - start);
        if digits == 0 {
            return Ok(None);
        }
        self.pos += digits;
        if self.peek() == Some('.') {
            let rest = self.text[self.pos + 1..]
                .find(|ch: char| !ch.is_ascii_digit())
                .map_or(self.text.len(), |i| self.pos + 1 + i);
            return Err(ExprError::NonInteger {
                position: start,
                token: self.text[start..rest].to_string(),
            });
        }
        let token = &self.text[start..self.pos];
        token.parse().map(Some).map_err(|_| ExprError::Overflow {
            position: start,
            token: token.to_string(),
        })
    }

    fn variable(&mut self) -> Option<Variable> {
        match self.peek() {
            Some(ch @ 'a'..='z') => {
                self.pos += 1;
                Some(ch)
            }
            _ => None,
        }
    }

    fn term(&mut self, sign: i64, out: &mut AffineExpr) -> Result<(), ExprError> {
        match self.integer()? {
            Some(k) => {
                if self.peek() == Some('*') {
                    self.pos += 1;
                    let var = self.variable().ok_or_else(|| self.unexpected())?;
                    out.add_term(var, sign * k);
                } else {
                    out.constant += sign * k;
                }
            }
            None => {
                let var = self.variable().ok_or_else(|| self.unexpected())?;
                out.add_term(var, sign);
            }
        }
        Ok(())
    }
}

impl FromStr for AffineExpr {
    type Err = ExprError;

    fn from_str(text: &str) -> Result<Self, Self::Err> {
        if text.is_empty() {
            return Err(ExprError::Empty);
        }
        let mut p = Parser { text, pos: 0 };
        let mut out = AffineExpr::constant(0);
        let mut sign = 1;
        if p.peek() == Some('-') {
            p.pos += 1;
            sign = -1;
        }
        p.term(sign, &mut out)?;
        while let Some(op) = p.peek() {
            sign = match op {
                '+' => 1,
                '-' => -1,
                _ => return Err(p.unexpected()),
            };
            p.pos += 1;
            p.term(sign, &mut out)?;
        }
        Ok(out)
    }
}

/// Parses one expression.
pub fn parse_expr(text: &str) -> Result<AffineExpr, ExprError> {
    text.parse()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn e(text: &str) -> AffineExpr {
        text.parse().unwrap()
    }

    #[test]
    fn parses_cell_forms() {
        let one_minus_x = e("1-x");
        assert_eq!(one_minus_x.constant_part(), 1);
        assert_eq!(one_minus_x.coefficient('x'), -1);
        assert_eq!(e("7"), AffineExpr::constant(7));
        let y6 = e("y-6");
        assert_eq!(y6.constant_part(), -6);
        assert_eq!(y6.coefficient('y'), 1);
        assert_eq!(e("-x"), AffineExpr::term('x', -1));
        assert_eq!(e("2*x-3").coefficient('x'), 2);
        assert_eq!(e("3+x"), e("x+3"));
        assert_eq!(e("x-x"), AffineExpr::constant(0));
    }

    #[test]
    fn canonical_printing() {
        for (input, printed) in [
            ("x", "x"),
            ("-x", "-x"),
            ("3+x", "x+3"),
            ("y-6", "y-6"),
            ("1-x", "1-x"),
            ("-2-x", "-2-x"),
            ("7-y", "7-y"),
            ("-2*x+5", "5-2*x"),
            ("2*x-3", "2*x-3"),
            ("-7", "-7"),
            ("0", "0"),
            ("y+x", "x+y"),
            ("1-x+y", "1-x+y"),
        ] {
            assert_eq!(e(input).to_string(), printed, "{input}");
        }
    }

    #[test]
    fn syntax_errors_carry_positions() {
        assert_eq!(parse_expr(""), Err(ExprError::Empty));
        assert!(matches!(
            parse_expr("1-"),
            Err(ExprError::Syntax { position: 2, .. })
        ));
        assert!(matches!(
            parse_expr("x*2"),
            Err(ExprError::Syntax { position: 1, .. })
        ));
        assert!(matches!(
            parse_expr("--x"),
            Err(ExprError::Syntax { position: 1, .. })
        ));
        assert!(matches!(
            parse_expr("X"),
            Err(ExprError::Syntax { position: 0, .. })
        ));
        assert!(matches!(
            parse_expr("1.5*x"),
            Err(ExprError::NonInteger { position: 0, .. })
        ));
    }

    #[test]
    fn arithmetic_and_evaluation() {
        let sum: AffineExpr = [e("1-x"), e("x"), e("y-6"), e("7-y")].into_iter().sum();
        assert_eq!(sum, AffineExpr::constant(2));
        let assignment = BTreeMap::from([('x', Rational::new(1, 2))]);
        assert_eq!(e("1-x").evaluate(&assignment), Some(Rational::new(1, 2)));
        assert_eq!(e("y").evaluate(&assignment), None);
    }

    fn arb_expr() -> impl Strategy<Value = AffineExpr> {
        (
            -50i64..50,
            proptest::collection::btree_map(
                prop::sample::select(vec!['x', 'y', 'z']),
                -4i64..5,
                0..3,
            ),
        )
            .prop_map(|(c, terms)| {
                terms
                    .into_iter()
                    .fold(AffineExpr::constant(c), |acc, (v, k)| {
                        &acc + &AffineExpr::term(v, k)
                    })
            })
    }

    proptest! {
        #[test]
        fn print_parse_round_trip(expr in arb_expr()) {
            let printed = expr.to_string();
            prop_assert_eq!(parse_expr(&printed).unwrap(), expr);
        }

        #[test]
        fn no_zero_coefficients(a in arb_expr(), b in arb_expr()) {
            let d = &a - &b;
            prop_assert!(d.terms().values().all(|&c| c != 0));
            prop_assert_eq!(&(&d + &b), &a);
        }
    }
}
