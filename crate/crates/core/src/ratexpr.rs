//! Rational expressions: quotients of multivariate polynomials, kept in
//! lowest terms with a monic denominator under the graded-lex order.
//! Structural equality is therefore equality of rational functions.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::poly::{poly_from_str, MPoly};
use crate::scalar::{int, Scalar};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RatExpr {
    num: MPoly,
    den: MPoly,
}

impl RatExpr {
    /// Build `num/den` in canonical form. Errors on a zero denominator.
    pub fn new(num: MPoly, den: MPoly) -> Result<RatExpr> {
        if den.is_zero() {
            return Err(Error::DivisionByZero(format!("{num} / 0")));
        }
        Ok(Self::normalized(num, den))
    }

    fn normalized(num: MPoly, den: MPoly) -> RatExpr {
        if num.is_zero() {
            return RatExpr {
                num: MPoly::zero(),
                den: MPoly::one(),
            };
        }
        let (mut num, mut den) = (num, den);
        if !den.is_one() {
            let g = MPoly::gcd(&num, &den);
            if !g.is_one() {
                num = num.div_exact(&g).expect("gcd divides numerator");
                den = den.div_exact(&g).expect("gcd divides denominator");
            }
        }
        // Monic denominator pins the representative (and its sign).
        let lc = den.leading_coeff();
        if lc != int(1) {
            let inv = int(1) / lc;
            num = num.mul_scalar(&inv);
            den = den.mul_scalar(&inv);
        }
        RatExpr { num, den }
    }

    pub fn from_poly(p: MPoly) -> RatExpr {
        RatExpr {
            num: p,
            den: MPoly::one(),
        }
    }

    pub fn var(name: &str) -> RatExpr {
        Self::from_poly(MPoly::var(name))
    }

    pub fn from_int(n: i64) -> RatExpr {
        Self::from_poly(MPoly::from_int(n))
    }

    pub fn from_scalar(c: Scalar) -> RatExpr {
        Self::from_poly(MPoly::constant(c))
    }

    pub fn zero() -> RatExpr {
        Self::from_int(0)
    }

    pub fn one() -> RatExpr {
        Self::from_int(1)
    }

    pub fn num(&self) -> &MPoly {
        &self.num
    }

    pub fn den(&self) -> &MPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    /// `Some(c)` if the expression is the constant `c`.
    pub fn as_constant(&self) -> Option<Scalar> {
        if self.den.is_one() {
            self.num.is_constant()
        } else {
            None
        }
    }

    /// Union of variables in numerator and denominator.
    pub fn variables(&self) -> Vec<String> {
        let mut vars: Vec<String> = self.num.vars().to_vec();
        for v in self.den.vars() {
            if !vars.contains(v) {
                vars.push(v.clone());
            }
        }
        vars.sort();
        vars
    }

    pub fn add(&self, other: &RatExpr) -> RatExpr {
        if self.den == other.den {
            return Self::normalized(self.num.add(&other.num), self.den.clone());
        }
        let num = self
            .num
            .mul(&other.den)
            .add(&other.num.mul(&self.den));
        Self::normalized(num, self.den.mul(&other.den))
    }

    pub fn neg(&self) -> RatExpr {
        RatExpr {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn sub(&self, other: &RatExpr) -> RatExpr {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &RatExpr) -> RatExpr {
        Self::normalized(self.num.mul(&other.num), self.den.mul(&other.den))
    }

    pub fn div(&self, other: &RatExpr) -> Result<RatExpr> {
        if other.is_zero() {
            return Err(Error::DivisionByZero(format!("{self} / 0")));
        }
        Ok(Self::normalized(
            self.num.mul(&other.den),
            self.den.mul(&other.num),
        ))
    }

    pub fn inverse(&self) -> Result<RatExpr> {
        RatExpr::one().div(self)
    }

    pub fn pow(&self, n: i32) -> Result<RatExpr> {
        let base = if n < 0 { self.inverse()? } else { self.clone() };
        let mut acc = RatExpr::one();
        for _ in 0..n.unsigned_abs() {
            acc = acc.mul(&base);
        }
        Ok(acc)
    }

    /// Partial derivative by the quotient rule.
    pub fn derivative(&self, var: &str) -> RatExpr {
        let dn = self.num.derivative(var);
        let dd = self.den.derivative(var);
        let num = dn.mul(&self.den).sub(&self.num.mul(&dd));
        Self::normalized(num, self.den.mul(&self.den))
    }

    /// Exact substitution of variables by rational expressions.
    /// Unbound variables are left in place.
    pub fn substitute(&self, bindings: &BTreeMap<String, RatExpr>) -> Result<RatExpr> {
        let sub_poly = |p: &MPoly| -> Result<RatExpr> {
            let mut acc = RatExpr::zero();
            for (mono, coeff) in p.terms() {
                let mut term = RatExpr::from_scalar(coeff.clone());
                for (i, &e) in mono.0.iter().enumerate() {
                    if e == 0 {
                        continue;
                    }
                    let name = &p.vars()[i];
                    let factor = match bindings.get(name) {
                        Some(r) => r.clone(),
                        None => RatExpr::var(name),
                    };
                    term = term.mul(&factor.pow(e as i32)?);
                }
                acc = acc.add(&term);
            }
            Ok(acc)
        };
        let num = sub_poly(&self.num)?;
        let den = sub_poly(&self.den)?;
        if den.is_zero() {
            return Err(Error::PoleEvaluation(self.den.to_string()));
        }
        num.div(&den)
    }

    /// Double-precision evaluation; every variable must be bound.
    pub fn eval_f64(&self, bind: &dyn Fn(&str) -> Option<f64>) -> Result<f64> {
        let den = self.den.eval_f64(bind)?;
        if den == 0.0 {
            return Err(Error::PoleEvaluation(self.den.to_string()));
        }
        Ok(self.num.eval_f64(bind)? / den)
    }

    /// Exact rational evaluation; every variable must be bound.
    pub fn eval_scalar(&self, bind: &dyn Fn(&str) -> Option<Scalar>) -> Result<Scalar> {
        let den = self.den.eval_scalar(bind)?;
        if den.is_zero() {
            return Err(Error::PoleEvaluation(self.den.to_string()));
        }
        Ok(self.num.eval_scalar(bind)? / den)
    }
}

impl fmt::Display for RatExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

/// Parse the canonical form produced by `Display`.
pub fn ratexpr_from_str(text: &str) -> Result<RatExpr> {
    let text = text.trim();
    if let Some(rest) = text.strip_prefix('(') {
        // "(num)/(den)" with no nested parentheses in the poly syntax.
        let close = rest
            .find(')')
            .ok_or_else(|| Error::Parse("unbalanced parenthesis".into()))?;
        let num = poly_from_str(&rest[..close])?;
        let tail = rest[close + 1..].trim_start();
        let tail = tail
            .strip_prefix('/')
            .ok_or_else(|| Error::Parse("expected '/' between parts".into()))?
            .trim_start();
        let den_part = tail
            .strip_prefix('(')
            .and_then(|t| t.strip_suffix(')'))
            .ok_or_else(|| Error::Parse("expected parenthesized denominator".into()))?;
        let den = poly_from_str(den_part)?;
        RatExpr::new(num, den)
    } else {
        Ok(RatExpr::from_poly(poly_from_str(text)?))
    }
}

/// Convenience: parse, panicking on error. For tests and fixed formulas.
pub fn rex(text: &str) -> RatExpr {
    ratexpr_from_str(text).unwrap_or_else(|e| panic!("bad expression '{text}': {e}"))
}
