//! Sparse multivariate polynomials over exact rationals.
//!
//! Variables are named; every polynomial carries its own sorted variable
//! list and is kept trimmed (no variable column with all-zero exponents),
//! so structural equality is semantic equality. The monomial order is
//! graded lexicographic over the sorted variable names, which fixes
//! leading terms, normalization, and printed output once and for all.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::scalar::{int, scalar_from_str, scalar_to_f64, scalar_to_string, Scalar};

pub type VarSet = Arc<[String]>;

/// Exponent vector; ordered by total degree, ties broken lexicographically.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Mono(pub Vec<u16>);

impl Mono {
    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&e| e as u32).sum()
    }

    fn mul(&self, other: &Mono) -> Mono {
        Mono(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| a.checked_add(*b).expect("exponent overflow"))
                .collect(),
        )
    }

    fn divides(&self, other: &Mono) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    fn div(&self, other: &Mono) -> Mono {
        Mono(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }
}

impl PartialOrd for Mono {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Mono {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MPoly {
    vars: VarSet,
    terms: BTreeMap<Mono, Scalar>,
}

fn empty_vars() -> VarSet {
    Arc::from(Vec::<String>::new())
}

impl MPoly {
    pub fn zero() -> MPoly {
        MPoly {
            vars: empty_vars(),
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(c: Scalar) -> MPoly {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Mono(vec![]), c);
        }
        MPoly {
            vars: empty_vars(),
            terms,
        }
    }

    pub fn one() -> MPoly {
        Self::constant(int(1))
    }

    pub fn from_int(n: i64) -> MPoly {
        Self::constant(int(n))
    }

    pub fn var(name: &str) -> MPoly {
        let vars: VarSet = Arc::from(vec![name.to_string()]);
        let mut terms = BTreeMap::new();
        terms.insert(Mono(vec![1]), int(1));
        MPoly { vars, terms }
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.is_constant()
            .map(|c| c.is_one())
            .unwrap_or(false)
    }

    /// `Some(c)` if the polynomial is the constant `c`.
    pub fn is_constant(&self) -> Option<Scalar> {
        if self.terms.is_empty() {
            return Some(int(0));
        }
        if self.terms.len() == 1 {
            let (m, c) = self.terms.iter().next().unwrap();
            if m.degree() == 0 {
                return Some(c.clone());
            }
        }
        None
    }

    /// Single-term polynomial?
    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Mono, &Scalar)> {
        self.terms.iter()
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|m| m.degree()).max().unwrap_or(0)
    }

    /// Leading (monomial, coefficient) under graded lex.
    pub fn leading(&self) -> Option<(&Mono, &Scalar)> {
        self.terms.iter().next_back()
    }

    pub fn leading_coeff(&self) -> Scalar {
        self.leading().map(|(_, c)| c.clone()).unwrap_or_else(|| int(0))
    }

    /// All coefficients nonnegative? (Subtraction-freeness witness.)
    pub fn has_nonneg_coeffs(&self) -> bool {
        self.terms.values().all(|c| !c.is_negative())
    }

    /// Drop variable columns that no longer occur.
    fn trim(mut self) -> MPoly {
        if self.terms.is_empty() {
            self.vars = empty_vars();
            return self;
        }
        let n = self.vars.len();
        let mut used = vec![false; n];
        for m in self.terms.keys() {
            for (i, &e) in m.0.iter().enumerate() {
                if e > 0 {
                    used[i] = true;
                }
            }
        }
        if used.iter().all(|&u| u) {
            return self;
        }
        let keep: Vec<usize> = (0..n).filter(|&i| used[i]).collect();
        let vars: VarSet = Arc::from(
            keep.iter()
                .map(|&i| self.vars[i].clone())
                .collect::<Vec<_>>(),
        );
        let terms = self
            .terms
            .into_iter()
            .map(|(m, c)| (Mono(keep.iter().map(|&i| m.0[i]).collect()), c))
            .collect();
        MPoly { vars, terms }
    }

    /// Rewrite both polynomials over the union of their variable sets.
    pub fn align(a: &MPoly, b: &MPoly) -> (MPoly, MPoly) {
        if Arc::ptr_eq(&a.vars, &b.vars) || a.vars == b.vars {
            return (a.clone(), b.clone());
        }
        let mut union: Vec<String> = a.vars.to_vec();
        for v in b.vars.iter() {
            if !union.contains(v) {
                union.push(v.clone());
            }
        }
        union.sort();
        let vars: VarSet = Arc::from(union);
        (a.remap(&vars), b.remap(&vars))
    }

    fn remap(&self, vars: &VarSet) -> MPoly {
        let map: Vec<usize> = self
            .vars
            .iter()
            .map(|v| vars.iter().position(|w| w == v).expect("var lost in remap"))
            .collect();
        let n = vars.len();
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| {
                let mut e = vec![0u16; n];
                for (i, &x) in m.0.iter().enumerate() {
                    e[map[i]] = x;
                }
                (Mono(e), c.clone())
            })
            .collect();
        MPoly {
            vars: vars.clone(),
            terms,
        }
    }

    fn add_term(terms: &mut BTreeMap<Mono, Scalar>, m: Mono, c: Scalar) {
        if c.is_zero() {
            return;
        }
        match terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = e.get() + &c;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    pub fn add(&self, other: &MPoly) -> MPoly {
        let (a, b) = MPoly::align(self, other);
        let mut terms = a.terms;
        for (m, c) in b.terms {
            Self::add_term(&mut terms, m, c);
        }
        MPoly { vars: a.vars, terms }.trim()
    }

    pub fn neg(&self) -> MPoly {
        MPoly {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }

    pub fn sub(&self, other: &MPoly) -> MPoly {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &MPoly) -> MPoly {
        if self.is_zero() || other.is_zero() {
            return MPoly::zero();
        }
        let (a, b) = MPoly::align(self, other);
        let mut terms = BTreeMap::new();
        for (ma, ca) in &a.terms {
            for (mb, cb) in &b.terms {
                Self::add_term(&mut terms, ma.mul(mb), ca * cb);
            }
        }
        MPoly { vars: a.vars, terms }.trim()
    }

    pub fn mul_scalar(&self, c: &Scalar) -> MPoly {
        if c.is_zero() {
            return MPoly::zero();
        }
        MPoly {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(m, k)| (m.clone(), k * c)).collect(),
        }
    }

    pub fn pow(&self, n: u32) -> MPoly {
        let mut acc = MPoly::one();
        for _ in 0..n {
            acc = acc.mul(self);
        }
        acc
    }

    /// Exact quotient `self / divisor`, or `None` if not exactly divisible.
    pub fn div_exact(&self, divisor: &MPoly) -> Option<MPoly> {
        if divisor.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(MPoly::zero());
        }
        if let Some(c) = divisor.is_constant() {
            return Some(self.mul_scalar(&(int(1) / c)));
        }
        let (mut rem, div) = MPoly::align(self, divisor);
        let (dm, dc) = {
            let (m, c) = div.leading().unwrap();
            (m.clone(), c.clone())
        };
        let mut quot = BTreeMap::new();
        while !rem.terms.is_empty() {
            let (rm, rc) = {
                let (m, c) = rem.leading().unwrap();
                (m.clone(), c.clone())
            };
            if !dm.divides(&rm) {
                return None;
            }
            let qm = rm.div(&dm);
            let qc = rc / &dc;
            // rem -= (qc * qm) * div
            for (m, c) in &div.terms {
                Self::add_term(&mut rem.terms, m.mul(&qm), -(c * &qc));
            }
            Self::add_term(&mut quot, qm, qc);
        }
        Some(
            MPoly {
                vars: div.vars,
                terms: quot,
            }
            .trim(),
        )
    }

    pub fn degree_in_var(&self, name: &str) -> u16 {
        match self.vars.iter().position(|v| v == name) {
            Some(i) => self.degree_in(i),
            None => 0,
        }
    }

    pub fn degree_in(&self, var_idx: usize) -> u16 {
        self.terms
            .keys()
            .map(|m| m.0.get(var_idx).copied().unwrap_or(0))
            .max()
            .unwrap_or(0)
    }

    /// Coefficients as a univariate polynomial in variable `var_idx`;
    /// index k holds the coefficient of x^k (with x's column zeroed).
    fn univariate_in(&self, var_idx: usize) -> Vec<MPoly> {
        let deg = self.degree_in(var_idx) as usize;
        let mut coeffs = vec![
            MPoly {
                vars: self.vars.clone(),
                terms: BTreeMap::new()
            };
            deg + 1
        ];
        for (m, c) in &self.terms {
            let k = m.0[var_idx] as usize;
            let mut e = m.clone();
            e.0[var_idx] = 0;
            Self::add_term(&mut coeffs[k].terms, e, c.clone());
        }
        coeffs
    }

    fn from_univariate(coeffs: Vec<MPoly>, var_idx: usize, vars: &VarSet) -> MPoly {
        let mut terms = BTreeMap::new();
        for (k, p) in coeffs.into_iter().enumerate() {
            // Arithmetic on coefficients may have trimmed their variable sets.
            let p = if p.vars == *vars { p } else { p.remap(vars) };
            for (m, c) in p.terms {
                let mut e = m;
                e.0[var_idx] += k as u16;
                Self::add_term(&mut terms, e, c);
            }
        }
        // Deliberately not trimmed: callers rely on `var_idx` staying valid.
        MPoly {
            vars: vars.clone(),
            terms,
        }
    }

    /// Greatest common divisor, normalized monic under graded lex.
    pub fn gcd(a: &MPoly, b: &MPoly) -> MPoly {
        let g = Self::gcd_inner(a, b);
        g.make_monic()
    }

    fn make_monic(&self) -> MPoly {
        if self.is_zero() {
            return MPoly::zero();
        }
        let lc = self.leading_coeff();
        self.mul_scalar(&(int(1) / lc))
    }

    fn gcd_inner(a: &MPoly, b: &MPoly) -> MPoly {
        if a.is_zero() {
            return b.clone();
        }
        if b.is_zero() {
            return a.clone();
        }
        if a.is_constant().is_some() || b.is_constant().is_some() {
            return MPoly::one();
        }
        // Monomial fast path: gcd with a single term is the entrywise-min monomial.
        if a.is_monomial() || b.is_monomial() {
            let (a, b) = MPoly::align(a, b);
            let n = a.vars.len();
            let mono_min = |p: &MPoly| -> Vec<u16> {
                let mut e = vec![u16::MAX; n];
                for m in p.terms.keys() {
                    for i in 0..n {
                        e[i] = e[i].min(m.0[i]);
                    }
                }
                e
            };
            let ea = mono_min(&a);
            let eb = mono_min(&b);
            let e: Vec<u16> = ea.iter().zip(&eb).map(|(x, y)| *x.min(y)).collect();
            let mut terms = BTreeMap::new();
            terms.insert(Mono(e), int(1));
            return MPoly { vars: a.vars, terms }.trim();
        }
        let (a, b) = MPoly::align(a, b);
        // Pick a main variable present in both if possible.
        let n = a.vars.len();
        let mut both: Option<usize> = None;
        let mut best = u32::MAX;
        for i in 0..n {
            let da = a.degree_in(i) as u32;
            let db = b.degree_in(i) as u32;
            if da > 0 && db > 0 && da.max(db) < best {
                best = da.max(db);
                both = Some(i);
            }
        }
        let x = match both {
            Some(x) => x,
            None => {
                // Some variable lives in only one of them; recurse on its content.
                let i = (0..n).find(|&i| a.degree_in(i) > 0).unwrap();
                if b.degree_in(i) == 0 {
                    let cont = Self::content_in(&a, i);
                    return Self::gcd_inner(&cont, &b);
                }
                let cont = Self::content_in(&b, i);
                return Self::gcd_inner(&a, &cont);
            }
        };
        let cont_a = Self::content_in(&a, x);
        let cont_b = Self::content_in(&b, x);
        let pp_a = a.div_exact(&cont_a).expect("content divides");
        let pp_b = b.div_exact(&cont_b).expect("content divides");
        let c = Self::gcd_inner(&cont_a, &cont_b);
        let pp = Self::gcd_primitive(&pp_a, &pp_b, &a.vars[x].clone());
        c.mul(&pp)
    }

    /// Content of `self` viewed as univariate in `var_idx`.
    fn content_in(&self, var_idx: usize) -> MPoly {
        let coeffs = self.univariate_in(var_idx);
        let mut g = MPoly::zero();
        for c in coeffs.iter().filter(|c| !c.is_zero()) {
            g = Self::gcd_inner(&g, &c.clone().trim());
            if g.is_one() {
                break;
            }
        }
        g.make_monic()
    }

    /// Primitive PRS on two primitive polynomials in main variable `x_name`.
    /// Both must have positive degree in it.
    fn gcd_primitive(a: &MPoly, b: &MPoly, x_name: &str) -> MPoly {
        let (a, b) = MPoly::align(a, b);
        let x = a
            .vars
            .iter()
            .position(|v| v == x_name)
            .expect("main variable survives content removal");
        let mut f = Self::trim_uni(a.univariate_in(x));
        let mut g = Self::trim_uni(b.univariate_in(x));
        if f.len() < g.len() {
            std::mem::swap(&mut f, &mut g);
        }
        loop {
            if g.len() == 1 && g[0].is_zero() {
                let p = MPoly::from_univariate(f, x, &a.vars);
                let cont = p.content_in(x);
                return p.div_exact(&cont).expect("content divides");
            }
            if g.len() == 1 {
                // Nonzero in the coefficient ring: primitive parts coprime in x.
                return MPoly::one();
            }
            let r = Self::pseudo_rem(&f, &g);
            f = g;
            g = Self::primitive_uni(r, x, &a.vars);
        }
    }

    fn trim_uni(mut coeffs: Vec<MPoly>) -> Vec<MPoly> {
        while coeffs.len() > 1 && coeffs.last().map(|c| c.is_zero()).unwrap_or(false) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(MPoly::zero());
        }
        coeffs
    }

    fn primitive_uni(coeffs: Vec<MPoly>, x: usize, vars: &VarSet) -> Vec<MPoly> {
        let coeffs = Self::trim_uni(coeffs);
        if coeffs.len() == 1 && coeffs[0].is_zero() {
            return coeffs;
        }
        let p = MPoly::from_univariate(coeffs, x, vars);
        let cont = p.content_in(x);
        let pp = p.div_exact(&cont).expect("content divides");
        Self::trim_uni(pp.remap(vars).univariate_in(x))
    }

    /// Pseudo-remainder of coefficient vectors (`f` mod `g` up to powers of lc(g)).
    fn pseudo_rem(f: &[MPoly], g: &[MPoly]) -> Vec<MPoly> {
        let dg = g.len() - 1;
        let lg = g[dg].clone();
        let mut r: Vec<MPoly> = f.to_vec();
        loop {
            r = Self::trim_uni(r);
            let dr = r.len() - 1;
            if (r.len() == 1 && r[0].is_zero()) || dr < dg {
                return r;
            }
            // r = lg*r - lc(r)*x^(dr-dg)*g
            let lr = r[dr].clone();
            for c in r.iter_mut() {
                *c = c.mul(&lg);
            }
            for (i, gc) in g.iter().enumerate() {
                let idx = dr - dg + i;
                r[idx] = r[idx].sub(&lr.mul(gc));
            }
        }
    }

    pub fn derivative(&self, var: &str) -> MPoly {
        let Some(idx) = self.vars.iter().position(|v| v == var) else {
            return MPoly::zero();
        };
        let mut terms = BTreeMap::new();
        for (m, c) in &self.terms {
            let e = m.0[idx];
            if e == 0 {
                continue;
            }
            let mut me = m.clone();
            me.0[idx] = e - 1;
            Self::add_term(&mut terms, me, c * int(e as i64));
        }
        MPoly {
            vars: self.vars.clone(),
            terms,
        }
        .trim()
    }

    pub fn eval_f64(&self, bind: &dyn Fn(&str) -> Option<f64>) -> Result<f64> {
        let vals: Vec<f64> = self
            .vars
            .iter()
            .map(|v| bind(v).ok_or_else(|| Error::UnboundVariable(v.clone())))
            .collect::<Result<_>>()?;
        let mut acc = 0.0;
        for (m, c) in &self.terms {
            let mut t = scalar_to_f64(c);
            for (i, &e) in m.0.iter().enumerate() {
                t *= vals[i].powi(e as i32);
            }
            acc += t;
        }
        Ok(acc)
    }

    pub fn eval_scalar(&self, bind: &dyn Fn(&str) -> Option<Scalar>) -> Result<Scalar> {
        let vals: Vec<Scalar> = self
            .vars
            .iter()
            .map(|v| bind(v).ok_or_else(|| Error::UnboundVariable(v.clone())))
            .collect::<Result<_>>()?;
        let mut acc = int(0);
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (i, &e) in m.0.iter().enumerate() {
                for _ in 0..e {
                    t *= &vals[i];
                }
            }
            acc += t;
        }
        Ok(acc)
    }
}

impl fmt::Display for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        // Leading term first: iterate descending.
        for (m, c) in self.terms.iter().rev() {
            let neg = c.is_negative();
            let mag = if neg { -c } else { c.clone() };
            if first {
                if neg {
                    write!(f, "-")?;
                }
                first = false;
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let mut factors: Vec<String> = Vec::new();
            if !mag.is_one() || m.degree() == 0 {
                factors.push(scalar_to_string(&mag));
            }
            for (i, &e) in m.0.iter().enumerate() {
                match e {
                    0 => {}
                    1 => factors.push(self.vars[i].clone()),
                    _ => factors.push(format!("{}^{}", self.vars[i], e)),
                }
            }
            write!(f, "{}", factors.join("*"))?;
        }
        Ok(())
    }
}

/// Parse the canonical form produced by `Display`.
pub fn poly_from_str(text: &str) -> Result<MPoly> {
    let text = text.trim();
    if text.is_empty() {
        return Err(Error::Parse("empty polynomial".into()));
    }
    let mut acc = MPoly::zero();
    // Split into signed terms at top level (no parentheses in poly syntax).
    let mut terms: Vec<(bool, String)> = Vec::new();
    let chars: Vec<char> = text.chars().collect();
    let mut i = 0;
    let mut neg = false;
    if chars[0] == '-' {
        neg = true;
        i = 1;
    }
    let mut cur = String::new();
    while i < chars.len() {
        let c = chars[i];
        if (c == '+' || c == '-') && i + 1 < chars.len() && chars[i - 1] == ' ' && chars[i + 1] == ' '
        {
            terms.push((neg, cur.trim().to_string()));
            cur = String::new();
            neg = c == '-';
            i += 2;
            continue;
        }
        cur.push(c);
        i += 1;
    }
    terms.push((neg, cur.trim().to_string()));
    for (neg, term) in terms {
        let mut poly = MPoly::one();
        for factor in term.split('*') {
            let factor = factor.trim();
            if factor.is_empty() {
                return Err(Error::Parse(format!("empty factor in '{term}'")));
            }
            let first = factor.chars().next().unwrap();
            if first.is_ascii_digit() {
                let c = scalar_from_str(factor)
                    .ok_or_else(|| Error::Parse(format!("bad coefficient '{factor}'")))?;
                poly = poly.mul_scalar(&c);
            } else {
                let (name, exp) = match factor.split_once('^') {
                    Some((n, e)) => (
                        n,
                        e.parse::<u32>()
                            .map_err(|_| Error::Parse(format!("bad exponent '{e}'")))?,
                    ),
                    None => (factor, 1),
                };
                if !name
                    .chars()
                    .all(|ch| ch.is_ascii_alphanumeric() || ch == '_')
                {
                    return Err(Error::Parse(format!("bad variable name '{name}'")));
                }
                poly = poly.mul(&MPoly::var(name).pow(exp));
            }
        }
        if neg {
            poly = poly.neg();
        }
        acc = acc.add(&poly);
    }
    Ok(acc)
}
