//! Tropicalization: subtraction-free expressions become min-plus
//! expressions, and the chart of the geometric crystal becomes the set of
//! Gelfand-Tsetlin patterns with its piecewise-linear crystal operators.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::{Mutex, OnceLock};

use num_traits::Signed;

use crate::crystal::{build_point, e_action, standard_word, HighestWeight};
use crate::error::{Error, Result};
use crate::lie::RankSpec;
use crate::poly::MPoly;
use crate::ratexpr::RatExpr;
use crate::scalar::Scalar;

/// Subtraction-free expression tree.
#[derive(Clone, Debug, PartialEq)]
pub enum PosExpr {
    Var(String),
    Const(Scalar),
    Add(Box<PosExpr>, Box<PosExpr>),
    Mul(Box<PosExpr>, Box<PosExpr>),
    Div(Box<PosExpr>, Box<PosExpr>),
}

impl PosExpr {
    pub fn var(name: &str) -> PosExpr {
        PosExpr::Var(name.to_string())
    }

    pub fn constant(c: Scalar) -> Result<PosExpr> {
        if !c.is_positive() {
            return Err(Error::NotSubtractionFree(format!(
                "constant {c} is not positive"
            )));
        }
        Ok(PosExpr::Const(c))
    }

    /// View a normalized rational expression as subtraction-free, failing
    /// if either the numerator or denominator has a negative coefficient.
    pub fn from_ratexpr(r: &RatExpr) -> Result<PosExpr> {
        let num = Self::from_poly(r.num())?;
        if r.den().is_one() {
            return Ok(num);
        }
        let den = Self::from_poly(r.den())?;
        Ok(PosExpr::Div(Box::new(num), Box::new(den)))
    }

    fn from_poly(p: &MPoly) -> Result<PosExpr> {
        if p.is_zero() {
            return Err(Error::NotSubtractionFree("zero polynomial".into()));
        }
        if !p.has_nonneg_coeffs() {
            return Err(Error::NotSubtractionFree(format!(
                "negative coefficient in {p}"
            )));
        }
        let mut acc: Option<PosExpr> = None;
        for (mono, coeff) in p.terms() {
            let mut term = PosExpr::Const(coeff.clone());
            let mut pure_vars: Option<PosExpr> = None;
            for (i, &e) in mono.0.iter().enumerate() {
                for _ in 0..e {
                    let v = PosExpr::var(&p.vars()[i]);
                    pure_vars = Some(match pure_vars {
                        None => v,
                        Some(t) => PosExpr::Mul(Box::new(t), Box::new(v)),
                    });
                }
            }
            if let Some(vs) = pure_vars {
                term = if coeff == &crate::scalar::int(1) {
                    vs
                } else {
                    PosExpr::Mul(Box::new(term), Box::new(vs))
                };
            }
            acc = Some(match acc {
                None => term,
                Some(t) => PosExpr::Add(Box::new(t), Box::new(term)),
            });
        }
        Ok(acc.expect("nonzero polynomial has terms"))
    }
}

/// Min-plus expression tree over integer-valued variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TropExpr {
    Var(String),
    Const(i64),
    Min(Box<TropExpr>, Box<TropExpr>),
    Add(Box<TropExpr>, Box<TropExpr>),
    Sub(Box<TropExpr>, Box<TropExpr>),
}

/// Tropical name of a chart variable: uppercase, so that `a` becomes `A`
/// and the action parameter `p` becomes `P`.
pub fn trop_name(name: &str) -> String {
    name.to_uppercase()
}

/// Structural substitution (+, x, /) -> (min, +, -); positive constants
/// collapse to 0.
pub fn tropicalize(e: &PosExpr) -> TropExpr {
    match e {
        PosExpr::Var(v) => TropExpr::Var(trop_name(v)),
        PosExpr::Const(_) => TropExpr::Const(0),
        PosExpr::Add(a, b) => TropExpr::Min(
            Box::new(tropicalize(a)),
            Box::new(tropicalize(b)),
        ),
        PosExpr::Mul(a, b) => TropExpr::Add(
            Box::new(tropicalize(a)),
            Box::new(tropicalize(b)),
        ),
        PosExpr::Div(a, b) => TropExpr::Sub(
            Box::new(tropicalize(a)),
            Box::new(tropicalize(b)),
        ),
    }
}

impl TropExpr {
    pub fn eval(&self, bind: &dyn Fn(&str) -> Option<i64>) -> Result<i64> {
        Ok(match self {
            TropExpr::Var(v) => {
                bind(v).ok_or_else(|| Error::UnboundVariable(v.clone()))?
            }
            TropExpr::Const(c) => *c,
            TropExpr::Min(a, b) => a.eval(bind)?.min(b.eval(bind)?),
            TropExpr::Add(a, b) => a.eval(bind)? + b.eval(bind)?,
            TropExpr::Sub(a, b) => a.eval(bind)? - b.eval(bind)?,
        })
    }

    /// Specialize one variable to a constant.
    pub fn specialize(&self, name: &str, value: i64) -> TropExpr {
        match self {
            TropExpr::Var(v) if v == name => TropExpr::Const(value),
            TropExpr::Var(_) | TropExpr::Const(_) => self.clone(),
            TropExpr::Min(a, b) => TropExpr::Min(
                Box::new(a.specialize(name, value)),
                Box::new(b.specialize(name, value)),
            ),
            TropExpr::Add(a, b) => TropExpr::Add(
                Box::new(a.specialize(name, value)),
                Box::new(b.specialize(name, value)),
            ),
            TropExpr::Sub(a, b) => TropExpr::Sub(
                Box::new(a.specialize(name, value)),
                Box::new(b.specialize(name, value)),
            ),
        }
    }
}

/// Affine form: integer coefficients plus a constant.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Affine {
    pub coeffs: BTreeMap<String, i64>,
    pub constant: i64,
}

impl Affine {
    pub fn build(pairs: &[(&str, i64)], constant: i64) -> Affine {
        let mut coeffs = BTreeMap::new();
        for (v, c) in pairs {
            if *c != 0 {
                *coeffs.entry(v.to_string()).or_insert(0) += c;
            }
        }
        coeffs.retain(|_, c| *c != 0);
        Affine {
            coeffs,
            constant,
        }
    }

    fn add(&self, other: &Affine) -> Affine {
        let mut coeffs = self.coeffs.clone();
        for (v, c) in &other.coeffs {
            *coeffs.entry(v.clone()).or_insert(0) += c;
        }
        coeffs.retain(|_, c| *c != 0);
        Affine {
            coeffs,
            constant: self.constant + other.constant,
        }
    }

    fn negate(&self) -> Affine {
        Affine {
            coeffs: self.coeffs.iter().map(|(v, c)| (v.clone(), -c)).collect(),
            constant: -self.constant,
        }
    }
}

impl fmt::Display for Affine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (v, c) in &self.coeffs {
            if first {
                match *c {
                    1 => write!(f, "{v}")?,
                    -1 => write!(f, "-{v}")?,
                    c => write!(f, "{c}*{v}")?,
                }
                first = false;
            } else if *c > 0 {
                if *c == 1 {
                    write!(f, " + {v}")?;
                } else {
                    write!(f, " + {c}*{v}")?;
                }
            } else if *c == -1 {
                write!(f, " - {v}")?;
            } else {
                write!(f, " - {}*{v}", -c)?;
            }
        }
        if first {
            write!(f, "{}", self.constant)?;
        } else if self.constant > 0 {
            write!(f, " + {}", self.constant)?;
        } else if self.constant < 0 {
            write!(f, " - {}", -self.constant)?;
        }
        Ok(())
    }
}

/// Canonical "min of affine forms minus min of affine forms". Defined for
/// expressions built from min, +, and - where subtraction only meets a
/// single affine form on the right (the case for tropicalized positive
/// expressions with monomial denominators, and their differences).
pub fn min_diff_form(t: &TropExpr) -> Result<(Vec<Affine>, Vec<Affine>)> {
    let (num, den) = min_diff_inner(t)?;
    Ok((canonical_list(num), canonical_list(den)))
}

fn canonical_list(mut v: Vec<Affine>) -> Vec<Affine> {
    v.sort();
    v.dedup();
    // Drop terms dominated by another everywhere (equal coefficients,
    // larger constant).
    let keep: Vec<bool> = v
        .iter()
        .map(|a| {
            !v.iter().any(|b| {
                b != a && b.coeffs == a.coeffs && b.constant <= a.constant
                    && (b.constant < a.constant || b < a)
            })
        })
        .collect();
    v.into_iter()
        .zip(keep)
        .filter_map(|(a, k)| k.then_some(a))
        .collect()
}

fn min_diff_inner(t: &TropExpr) -> Result<(Vec<Affine>, Vec<Affine>)> {
    match t {
        TropExpr::Var(v) => Ok((vec![Affine::build(&[(v, 1)], 0)], vec![Affine::build(&[], 0)])),
        TropExpr::Const(c) => Ok((vec![Affine::build(&[], *c)], vec![Affine::build(&[], 0)])),
        TropExpr::Min(a, b) => {
            let (na, da) = min_diff_inner(a)?;
            let (nb, db) = min_diff_inner(b)?;
            if da.len() == 1 && db.len() == 1 && da == db {
                let mut n = na;
                n.extend(nb);
                return Ok((n, da));
            }
            // Rebase both onto a common denominator sum.
            if da.len() == 1 && db.len() == 1 {
                let shift_a = db[0].clone();
                let shift_b = da[0].clone();
                let n: Vec<Affine> = na
                    .iter()
                    .map(|x| x.add(&shift_a))
                    .chain(nb.iter().map(|x| x.add(&shift_b)))
                    .collect();
                return Ok((n, vec![da[0].add(&db[0])]));
            }
            Err(Error::Unsupported(
                "min over non-monomial denominators has no canonical form here".into(),
            ))
        }
        TropExpr::Add(a, b) => {
            let (na, da) = min_diff_inner(a)?;
            let (nb, db) = min_diff_inner(b)?;
            let n: Vec<Affine> = na
                .iter()
                .flat_map(|x| nb.iter().map(move |y| x.add(y)))
                .collect();
            let d: Vec<Affine> = da
                .iter()
                .flat_map(|x| db.iter().map(move |y| x.add(y)))
                .collect();
            Ok((n, d))
        }
        TropExpr::Sub(a, b) => {
            let (na, da) = min_diff_inner(a)?;
            let (nb, db) = min_diff_inner(b)?;
            if nb.len() == 1 && db.len() == 1 {
                let shift = nb[0].negate().add(&db[0]);
                Ok((na.iter().map(|x| x.add(&shift)).collect(), da))
            } else if da.len() == 1 && db.len() == 1 {
                let n: Vec<Affine> = na.iter().map(|x| x.add(&db[0])).collect();
                let d: Vec<Affine> = nb.iter().map(|x| x.add(&da[0])).collect();
                Ok((n, d))
            } else {
                Err(Error::Unsupported(
                    "difference of general min-plus fractions".into(),
                ))
            }
        }
    }
}

/// Gelfand-Tsetlin pattern, rows in display order (row 0 = top, length
/// n+1; entries weakly decreasing left to right).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GTPattern {
    pub rows: Vec<Vec<i64>>,
}

impl GTPattern {
    pub fn n(&self) -> usize {
        self.rows.len() - 1
    }

    pub fn interlaces(&self) -> bool {
        for k in 1..self.rows.len() {
            let upper = &self.rows[k - 1];
            let lower = &self.rows[k];
            for j in 0..lower.len() {
                if !(upper[j] >= lower[j] && lower[j] >= upper[j + 1]) {
                    return false;
                }
            }
        }
        true
    }

    /// Weight: position p gets (sum of row with n+2-p entries) minus
    /// (sum of row with n+1-p entries).
    pub fn weight(&self) -> Vec<i64> {
        let m = self.rows.len();
        let sums: Vec<i64> = (0..=m)
            .map(|len| {
                if len == 0 {
                    0
                } else {
                    self.rows[m - len].iter().sum()
                }
            })
            .collect();
        (0..m).map(|p| sums[m - p] - sums[m - p - 1]).collect()
    }
}

/// Chart coordinates A_{r,m} of a pattern (ordered like the standard
/// word's parameters).
fn pattern_to_chart(p: &GTPattern, pairs: &[(usize, usize)]) -> Vec<i64> {
    let m = p.rows.len();
    let z = |i: usize, j: usize| -> i64 {
        // z_{i,j} sits in display row m - i at display column i - j.
        p.rows[m - i][i - j]
    };
    pairs
        .iter()
        .map(|&(r, mm)| z(m + 1 - r, mm - r + 1) - z(m - r, mm - r))
        .collect()
}

fn chart_to_pattern(top: &[i64], avals: &[i64], pairs: &[(usize, usize)]) -> GTPattern {
    let m = top.len();
    let n = m - 1;
    let a = |r: usize, mm: usize| -> i64 {
        avals[pairs.iter().position(|&p| p == (r, mm)).expect("pair")]
    };
    let mut rows = vec![top.to_vec()];
    for row_i in (1..=n).rev() {
        // row with row_i entries: z_{row_i, j} for j = row_i..1.
        let mut row = Vec::with_capacity(row_i);
        for j in (1..=row_i).rev() {
            let mm = j + m - row_i;
            let mut v = top[m - mm]; // positional T_{n+2-mm}: display index m-mm
            for k in 1..=m - row_i {
                v -= a(k, mm);
            }
            row.push(v);
        }
        rows.push(row);
    }
    GTPattern { rows }
}

/// A finite crystal of Gelfand-Tsetlin patterns.
#[derive(Clone, Debug)]
pub struct CombCrystal {
    pub rank: RankSpec,
    pub top: Vec<i64>,
    pub vertices: Vec<GTPattern>,
    /// raise\[i-1\]\[v\] and lower\[i-1\]\[v\]: target vertex index, if any.
    pub raise: Vec<Vec<Option<usize>>>,
    pub lower: Vec<Vec<Option<usize>>>,
    pub weights: Vec<Vec<i64>>,
}

fn trop_rule_cache() -> &'static Mutex<BTreeMap<(usize, usize), Vec<TropExpr>>> {
    static CACHE: OnceLock<Mutex<BTreeMap<(usize, usize), Vec<TropExpr>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(BTreeMap::new()))
}

/// Tropicalized update rules for e_i on the standard chart: one min-plus
/// expression per chart coordinate, in variables A0..A{l-1}, T1..T{n+1},
/// and the action parameter P.
pub fn trop_e_rules(rank: RankSpec, i: usize) -> Result<Vec<TropExpr>> {
    if let Some(rules) = trop_rule_cache().lock().unwrap().get(&(rank.n, i)) {
        return Ok(rules.clone());
    }
    let (word, _) = standard_word(rank);
    let params: Vec<RatExpr> = (0..word.len())
        .map(|k| RatExpr::var(&format!("a{k}")))
        .collect();
    let hw = HighestWeight::symbolic(rank);
    let point = build_point(rank, &hw, &word, &params)?;
    let acted = e_action(&point, i, &RatExpr::var("p"))?;
    let rules: Vec<TropExpr> = acted
        .params
        .iter()
        .map(|r| Ok(tropicalize(&PosExpr::from_ratexpr(r)?)))
        .collect::<Result<_>>()?;
    trop_rule_cache()
        .lock()
        .unwrap()
        .insert((rank.n, i), rules.clone());
    Ok(rules)
}

/// Tropicalized decoration for the standard chart, as a min-plus
/// expression in A0..A{l-1} and T1..T{n+1}.
pub fn trop_decoration(rank: RankSpec) -> Result<TropExpr> {
    let l = rank.longest_length();
    let params: Vec<RatExpr> = (0..l).map(|k| RatExpr::var(&format!("a{k}"))).collect();
    let hw = HighestWeight::symbolic(rank);
    let f = crate::crystal::decoration_closed_form(rank, &params, &hw)?;
    Ok(tropicalize(&PosExpr::from_ratexpr(&f)?))
}

/// Enumerate all interlacing patterns with the given top row.
pub fn enumerate_patterns(top: &[i64]) -> Vec<GTPattern> {
    fn extend(rows: &mut Vec<Vec<i64>>, out: &mut Vec<GTPattern>) {
        let prev = rows.last().unwrap().clone();
        if prev.len() == 1 {
            out.push(GTPattern { rows: rows.clone() });
            return;
        }
        let len = prev.len() - 1;
        let mut row = vec![0i64; len];
        fn fill(
            j: usize,
            len: usize,
            prev: &[i64],
            row: &mut Vec<i64>,
            rows: &mut Vec<Vec<i64>>,
            out: &mut Vec<GTPattern>,
        ) {
            if j == len {
                rows.push(row.clone());
                extend(rows, out);
                rows.pop();
                return;
            }
            // prev[j] >= row[j] >= prev[j+1], and rows stay decreasing.
            let hi = prev[j];
            let lo = prev[j + 1];
            for v in (lo..=hi).rev() {
                if j > 0 && row[j - 1] < v {
                    continue;
                }
                row[j] = v;
                fill(j + 1, len, prev, row, rows, out);
            }
        }
        fill(0, len, &prev, &mut row, rows, out);
    }
    let mut rows = vec![top.to_vec()];
    let mut out = Vec::new();
    extend(&mut rows, &mut out);
    out
}

/// Build the combinatorial crystal with highest weight `top` (a weakly
/// decreasing integer vector): vertices are the integer points of
/// trop(F) >= 0, edges the tropical operators where the image stays in
/// the vertex set.
pub fn build_crystal(rank: RankSpec, top: &[i64]) -> Result<CombCrystal> {
    if top.len() != rank.matrix_size() {
        return Err(Error::LengthMismatch(top.len(), rank.matrix_size()));
    }
    if top.windows(2).any(|w| w[0] < w[1]) {
        return Err(Error::NotDominant(top.to_vec()));
    }
    let (_, pairs) = standard_word(rank);
    let vertices = enumerate_patterns(top);
    let index: BTreeMap<GTPattern, usize> = vertices
        .iter()
        .cloned()
        .enumerate()
        .map(|(k, v)| (v, k))
        .collect();
    let weights: Vec<Vec<i64>> = vertices.iter().map(|v| v.weight()).collect();
    let mut raise = vec![vec![None; vertices.len()]; rank.n];
    let mut lower = vec![vec![None; vertices.len()]; rank.n];
    for i in 1..=rank.n {
        let rules = trop_e_rules(rank, i)?;
        for (vi, v) in vertices.iter().enumerate() {
            let avals = pattern_to_chart(v, &pairs);
            for (p_val, slot) in [(1i64, &mut raise), (-1, &mut lower)] {
                let bind = |name: &str| -> Option<i64> {
                    if name == "P" {
                        return Some(p_val);
                    }
                    if let Some(k) = name.strip_prefix('A') {
                        return k.parse::<usize>().ok().map(|k| avals[k]);
                    }
                    if let Some(j) = name.strip_prefix('T') {
                        return j.parse::<usize>().ok().map(|j| top[j - 1]);
                    }
                    None
                };
                let new_avals: Result<Vec<i64>> =
                    rules.iter().map(|r| r.eval(&bind)).collect();
                let Ok(new_avals) = new_avals else { continue };
                let img = chart_to_pattern(top, &new_avals, &pairs);
                if img.interlaces() {
                    if let Some(&target) = index.get(&img) {
                        slot[i - 1][vi] = Some(target);
                    }
                }
            }
        }
    }
    Ok(CombCrystal {
        rank,
        top: top.to_vec(),
        vertices,
        raise,
        lower,
        weights,
    })
}

impl CombCrystal {
    /// Indices of vertices on which every raising operator is undefined.
    pub fn highest_weight_vertices(&self) -> Vec<usize> {
        (0..self.vertices.len())
            .filter(|&v| self.raise.iter().all(|r| r[v].is_none()))
            .collect()
    }

    pub fn is_connected(&self) -> bool {
        if self.vertices.is_empty() {
            return true;
        }
        let mut seen = vec![false; self.vertices.len()];
        let mut stack = vec![0usize];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for maps in [&self.raise, &self.lower] {
                for color in maps.iter() {
                    if let Some(w) = color[v] {
                        if !seen[w] {
                            seen[w] = true;
                            stack.push(w);
                        }
                    }
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    /// Weight generating polynomial over variables `x1..x{n+1}`.
    pub fn character(&self) -> Result<MPoly> {
        let mut acc = MPoly::zero();
        for wt in &self.weights {
            let mut term = MPoly::one();
            for (j, &e) in wt.iter().enumerate() {
                if e < 0 {
                    return Err(Error::Unsupported(
                        "character needs nonnegative weights; shift the top row".into(),
                    ));
                }
                term = term.mul(&MPoly::var(&format!("x{}", j + 1)).pow(e as u32));
            }
            acc = acc.add(&term);
        }
        Ok(acc)
    }

    pub fn to_dot(&self) -> String {
        let mut s = String::from("digraph crystal {\n  rankdir=TB;\n");
        for (k, v) in self.vertices.iter().enumerate() {
            let label: Vec<String> = v
                .rows
                .iter()
                .map(|r| {
                    r.iter()
                        .map(|x| x.to_string())
                        .collect::<Vec<_>>()
                        .join(" ")
                })
                .collect();
            s.push_str(&format!(
                "  v{k} [shape=box, label=\"{}\"];\n",
                label.join("\\n")
            ));
        }
        let palette = ["red", "blue", "green", "orange"];
        for (ci, color) in self.lower.iter().enumerate() {
            for (v, tgt) in color.iter().enumerate() {
                if let Some(w) = tgt {
                    s.push_str(&format!(
                        "  v{v} -> v{w} [color={}, label=\"{}\"];\n",
                        palette[ci % palette.len()],
                        ci + 1
                    ));
                }
            }
        }
        s.push_str("}\n");
        s
    }

    pub fn to_json(&self) -> serde_json::Value {
        let vertices: Vec<serde_json::Value> = self
            .vertices
            .iter()
            .zip(&self.weights)
            .map(|(v, w)| {
                serde_json::json!({
                    "rows": v.rows,
                    "weight": w,
                })
            })
            .collect();
        let mut edges = Vec::new();
        for (ci, color) in self.lower.iter().enumerate() {
            for (v, tgt) in color.iter().enumerate() {
                if let Some(w) = tgt {
                    edges.push(serde_json::json!({
                        "from": v,
                        "to": w,
                        "color": ci + 1,
                        "direction": "lower",
                    }));
                }
            }
        }
        serde_json::json!({
            "schema": "geomcrystal.crystal.v1",
            "n": self.rank.n,
            "highest_weight": self.top,
            "vertices": vertices,
            "edges": edges,
        })
    }
}

/// Schur polynomial via the bialternant formula, as an exact polynomial
/// in x1..x{m}: det(x_i^{lambda_j + m - j}) / det(x_i^{m - j}).
pub fn schur_oracle(lambda: &[i64], m: usize) -> Result<MPoly> {
    if lambda.len() > m || lambda.windows(2).any(|w| w[0] < w[1]) {
        return Err(Error::NotDominant(lambda.to_vec()));
    }
    if lambda.iter().any(|&l| l < 0) {
        return Err(Error::NotDominant(lambda.to_vec()));
    }
    let mut lam = lambda.to_vec();
    lam.resize(m, 0);
    let power = |i: usize, e: i64| -> RatExpr {
        RatExpr::from_poly(MPoly::var(&format!("x{}", i + 1)).pow(e as u32))
    };
    let build = |exps: &[i64]| -> crate::matrix::SqMatrix {
        let mut mm = crate::matrix::SqMatrix::zeros(m);
        for i in 0..m {
            for j in 0..m {
                *mm.at_mut(i, j) = power(i, exps[j]);
            }
        }
        mm
    };
    let num_exps: Vec<i64> = (0..m).map(|j| lam[j] + (m - 1 - j) as i64).collect();
    let den_exps: Vec<i64> = (0..m).map(|j| (m - 1 - j) as i64).collect();
    let num = build(&num_exps).det();
    let den = build(&den_exps).det();
    let q = num.div(&den)?;
    if !q.den().is_one() {
        return Err(Error::Unsupported(
            "bialternant quotient was not polynomial".into(),
        ));
    }
    Ok(q.num().clone())
}
