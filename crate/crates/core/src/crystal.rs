//! The decorated geometric crystal of highest weight t.
//!
//! A point is cut out of B_- by the chart (t, a_1..a_l) -> pi^-(u t w0bar)
//! with u the x-word product of the chart parameters. The structure maps
//! gamma, phi_i, eps_i, the decoration, and the e_i^c action are all exact
//! rational-expression computations on the cached matrix; chart parameters
//! are re-solved after each action and certified by reconstruction.
//!
//! Torus entries are indexed positionally: `hw.entries[p]` is the (p+1)-st
//! diagonal entry of t. The product u t w0bar reverses the torus, so the
//! weight gamma picks up t in reversed order; golden tests pin this.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::lie::{
    beta_root, coroot_elt, gauss_project, gen, w0bar, word_product, GenKind, GroupElt, RankSpec,
    ReducedWord,
};
use crate::matrix::SqMatrix;
use crate::ratexpr::{ratexpr_from_str, RatExpr};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HighestWeight {
    pub entries: Vec<RatExpr>,
}

impl HighestWeight {
    pub fn new(entries: Vec<RatExpr>) -> Result<HighestWeight> {
        if entries.iter().any(|e| e.is_zero()) {
            return Err(Error::SingularChart("highest weight entry is zero".into()));
        }
        Ok(HighestWeight { entries })
    }

    pub fn symbolic(rank: RankSpec) -> HighestWeight {
        HighestWeight {
            entries: (1..=rank.matrix_size())
                .map(|j| RatExpr::var(&format!("t{j}")))
                .collect(),
        }
    }

    pub fn torus_elt(&self, rank: RankSpec) -> GroupElt {
        GroupElt::from_matrix(rank, SqMatrix::diagonal(self.entries.clone()))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CrystalPoint {
    pub rank: RankSpec,
    pub hw: HighestWeight,
    pub word: ReducedWord,
    pub params: Vec<RatExpr>,
    /// Cached matrix of the point: lower triangular with nonzero diagonal.
    pub matrix: SqMatrix,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CrystalMaps {
    /// Diagonal of the point, position by position.
    pub gamma: Vec<RatExpr>,
    /// phi\[i-1\] and eps\[i-1\] for Dynkin index i.
    pub phi: Vec<RatExpr>,
    pub eps: Vec<RatExpr>,
    pub decoration: RatExpr,
}

/// alpha_i evaluated on a torus element given by its diagonal.
pub fn alpha_char(diag: &[RatExpr], i: usize) -> Result<RatExpr> {
    diag[i - 1].div(&diag[i])
}

/// The standard reduced word (n, n-1, .., 1, n, .., 2, .., n) together
/// with the (row, column) pair labelling each chart parameter.
pub fn standard_word(rank: RankSpec) -> (ReducedWord, Vec<(usize, usize)>) {
    let n = rank.n;
    let mut letters = Vec::new();
    let mut pairs = Vec::new();
    for k in 1..=n {
        for v in (k..=n).rev() {
            letters.push(v);
            pairs.push((v - k + 1, n + 2 - k));
        }
    }
    (
        ReducedWord::new(rank, letters).expect("standard word is reduced"),
        pairs,
    )
}

/// Build the point pi^-(u t w0bar) from chart data.
pub fn build_point(
    rank: RankSpec,
    hw: &HighestWeight,
    word: &ReducedWord,
    params: &[RatExpr],
) -> Result<CrystalPoint> {
    if params.iter().any(|p| p.is_zero()) {
        return Err(Error::SingularChart("chart parameter is zero".into()));
    }
    let u = word_product(rank, GenKind::X, word, params)?;
    let g = u.mul(&hw.torus_elt(rank))?.mul(&w0bar(rank))?;
    let (x, _) = gauss_project(&g).map_err(|e| match e {
        Error::NotInBorelCell(k) => {
            Error::SingularChart(format!("principal minor {k} vanishes"))
        }
        other => other,
    })?;
    Ok(CrystalPoint {
        rank,
        hw: hw.clone(),
        word: word.clone(),
        params: params.to_vec(),
        matrix: x.mat,
    })
}

/// Recover the unipotent chart element u from a point matrix:
/// u = pi^+(t w0bar x^{-1})^{-1}.
fn unipotent_of_matrix(rank: RankSpec, hw: &HighestWeight, x: &SqMatrix) -> Result<GroupElt> {
    let xg = GroupElt::from_matrix(rank, x.clone());
    let g = hw
        .torus_elt(rank)
        .mul(&w0bar(rank))?
        .mul(&xg.inverse()?)?;
    let (_, u_inv) = gauss_project(&g)?;
    u_inv.inverse()
}

/// The two unipotent factors of x = u1 t w0bar u2.
fn factorization_parts(p: &CrystalPoint) -> Result<(GroupElt, GroupElt)> {
    let u1 = word_product(p.rank, GenKind::X, &p.word, &p.params)?;
    let g = u1.mul(&p.hw.torus_elt(p.rank))?.mul(&w0bar(p.rank))?;
    let (_, ustar) = gauss_project(&g)?;
    Ok((u1, ustar.inverse()?))
}

/// Structure maps at a point.
pub fn maps_of(p: &CrystalPoint) -> Result<CrystalMaps> {
    let n = p.rank.n;
    let gamma = p.matrix.diag();
    let mut phi = Vec::with_capacity(n);
    let mut eps = Vec::with_capacity(n);
    for i in 1..=n {
        // phi_i = chi_i^-(x): subdiagonal over diagonal entry.
        let phi_i = p.matrix.at(i, i - 1).div(p.matrix.at(i - 1, i - 1))?;
        let eps_i = phi_i.mul(&alpha_char(&gamma, i)?);
        phi.push(phi_i);
        eps.push(eps_i);
    }
    let (u1, u2) = factorization_parts(p)?;
    let decoration = crate::lie::chi(&u1)?.add(&crate::lie::chi(&u2)?);
    Ok(CrystalMaps {
        gamma,
        phi,
        eps,
        decoration,
    })
}

/// Closed-form weight: the diagonal of t w0-reversed times the product of
/// coroots beta_k^vee(a_k). Must agree with the cached matrix diagonal.
pub fn weight_formula(
    rank: RankSpec,
    word: &ReducedWord,
    params: &[RatExpr],
    hw: &HighestWeight,
) -> Result<Vec<RatExpr>> {
    if params.len() != word.len() {
        return Err(Error::LengthMismatch(params.len(), word.len()));
    }
    let m = rank.matrix_size();
    let mut diag: Vec<RatExpr> = (0..m).map(|p| hw.entries[m - 1 - p].clone()).collect();
    for k in 1..=word.len() {
        let (r, s) = beta_root(rank, word, k);
        diag[r] = diag[r].mul(&params[k - 1]);
        diag[s] = diag[s].div(&params[k - 1])?;
    }
    Ok(diag)
}

/// The crystal action e_i^c. Exact on the matrix; chart parameters are
/// re-solved against the same reduced word and certified by rebuilding.
pub fn e_action(p: &CrystalPoint, i: usize, c: &RatExpr) -> Result<CrystalPoint> {
    if c.is_zero() {
        return Err(Error::ZeroParameter);
    }
    let maps = maps_of(p)?;
    let phi = &maps.phi[i - 1];
    let eps = &maps.eps[i - 1];
    if phi.is_zero() || eps.is_zero() {
        return Err(Error::SingularChart(format!(
            "phi_{i} or eps_{i} vanishes; action undefined"
        )));
    }
    let left = gen(
        p.rank,
        GenKind::X,
        i,
        &c.sub(&RatExpr::one()).div(phi)?,
    )?;
    let right = gen(
        p.rank,
        GenKind::X,
        i,
        &c.inverse()?.sub(&RatExpr::one()).div(eps)?,
    )?;
    let x_new = left
        .mat
        .mul(&p.matrix)?
        .mul(&right.mat)?;
    let u_new = unipotent_of_matrix(p.rank, &p.hw, &x_new)?;
    let params_new = factorize_in_word(p.rank, &u_new, &p.word)?;
    let rebuilt = build_point(p.rank, &p.hw, &p.word, &params_new)?;
    if rebuilt.matrix != x_new {
        return Err(Error::ChartInversion(
            "re-solved parameters do not reproduce the acted matrix".into(),
        ));
    }
    Ok(rebuilt)
}

/// Solve u = x_word(params) for the parameters. Tries entrywise linear
/// extraction first; words whose entries do not triangularize are reached
/// by transporting the standard-word solution along a braid-move path.
/// Either route is certified by exact reconstruction.
pub fn factorize_in_word(
    rank: RankSpec,
    u: &GroupElt,
    word: &ReducedWord,
) -> Result<Vec<RatExpr>> {
    match factorize_direct(rank, u, word) {
        Ok(params) => Ok(params),
        Err(_) => {
            let (std_word, _) = standard_word(rank);
            let mut params = factorize_direct(rank, u, &std_word)?;
            let path = crate::lie::braid_path(&std_word, word)?;
            let mut cur = std_word;
            for pos in path {
                let (next, next_params) =
                    crate::lie::braid_move(GenKind::X, rank, &cur, &params, pos)?;
                cur = next;
                params = next_params;
            }
            debug_assert_eq!(cur.letters(), word.letters());
            let check = word_product(rank, GenKind::X, word, &params)?;
            if check.mat != u.mat {
                return Err(Error::ChartInversion(
                    "braid-transported parameters fail exact reconstruction".into(),
                ));
            }
            Ok(params)
        }
    }
}

fn factorize_direct(rank: RankSpec, u: &GroupElt, word: &ReducedWord) -> Result<Vec<RatExpr>> {
    let l = word.len();
    let m = rank.matrix_size();
    let pvars: Vec<String> = (0..l).map(|k| format!("__p{k}")).collect();
    let template_params: Vec<RatExpr> = pvars.iter().map(|v| RatExpr::var(v)).collect();
    let template = word_product(rank, GenKind::X, word, &template_params)?;
    let mut solved: BTreeMap<String, RatExpr> = BTreeMap::new();
    let mut progress = true;
    while solved.len() < l && progress {
        progress = false;
        for row in 0..m {
            for col in row + 1..m {
                if solved.len() == l {
                    break;
                }
                let lhs = template.mat.at(row, col).substitute(&solved)?;
                let eq = lhs.sub(u.mat.at(row, col));
                if eq.is_zero() {
                    continue;
                }
                let unknowns: Vec<String> = eq
                    .variables()
                    .into_iter()
                    .filter(|v| v.starts_with("__p") && !solved.contains_key(v))
                    .collect();
                if unknowns.len() != 1 {
                    continue;
                }
                let pv = &unknowns[0];
                // eq.num = A + B*pv with A, B free of pv  =>  pv = -A/B.
                let num = eq.num();
                if eq.den().vars().iter().any(|v| v == pv) {
                    continue;
                }
                let pv_idx = num.vars().iter().position(|v| v == pv).unwrap();
                let mut a = crate::poly::MPoly::zero();
                let mut b = crate::poly::MPoly::zero();
                let mut linear = true;
                for (mono, coeff) in num.terms() {
                    match mono.0[pv_idx] {
                        0 => a = a.add(&monomial_poly(num.vars(), &mono.0, coeff)),
                        1 => {
                            let mut e = mono.clone();
                            e.0[pv_idx] = 0;
                            b = b.add(&monomial_poly(num.vars(), &e.0, coeff));
                        }
                        _ => {
                            linear = false;
                            break;
                        }
                    }
                }
                if !linear || b.is_zero() {
                    continue;
                }
                let value = RatExpr::new(a.neg(), b)?;
                solved.insert(pv.clone(), value);
                progress = true;
            }
        }
    }
    if solved.len() < l {
        return Err(Error::ChartInversion(format!(
            "could only solve {} of {} parameters for word {:?}",
            solved.len(),
            l,
            word.letters()
        )));
    }
    let params: Vec<RatExpr> = pvars
        .iter()
        .map(|v| solved.get(v).cloned().unwrap())
        .collect();
    let check = word_product(rank, GenKind::X, word, &params)?;
    if check.mat != u.mat {
        return Err(Error::ChartInversion(
            "solved parameters fail exact reconstruction".into(),
        ));
    }
    Ok(params)
}

fn monomial_poly(vars: &[String], exps: &[u16], coeff: &crate::scalar::Scalar) -> crate::poly::MPoly {
    let mut p = crate::poly::MPoly::constant(coeff.clone());
    for (i, &e) in exps.iter().enumerate() {
        if e > 0 {
            p = p.mul(&crate::poly::MPoly::var(&vars[i]).pow(e as u32));
        }
    }
    p
}

/// Closed-form decoration for the standard word.
pub fn decoration_closed_form(
    rank: RankSpec,
    params: &[RatExpr],
    hw: &HighestWeight,
) -> Result<RatExpr> {
    let (word, pairs) = standard_word(rank);
    if params.len() != word.len() {
        return Err(Error::Unsupported(
            "closed form requires standard-word parameters".into(),
        ));
    }
    let n = rank.n;
    let at = |i: usize, j: usize| -> Result<&RatExpr> {
        pairs
            .iter()
            .position(|&p| p == (i, j))
            .map(|k| &params[k])
            .ok_or_else(|| Error::Unsupported(format!("no parameter pair ({i},{j})")))
    };
    let mut f = RatExpr::zero();
    for a in params {
        f = f.add(a);
    }
    for j in 2..=n + 1 {
        for i in 1..j {
            // t_{n+2-j} / (t_{n+3-j} * a_{i,j}) * prod_{k<i} a_{k,j-1}/a_{k,j}
            let mut term = hw.entries[n + 1 - j]
                .div(&hw.entries[n + 2 - j])?
                .div(at(i, j)?)?;
            for k in 1..i {
                term = term.mul(at(k, j - 1)?).div(at(k, j)?)?;
            }
            f = f.add(&term);
        }
    }
    Ok(f)
}

/// Gelfand-Tsetlin change of variables for the standard word:
/// z[i-1][j-1] = z_{i,j} for 1 <= j <= i <= n+1, top row z_{n+1,j} given
/// by the reversed torus entries.
pub fn gt_change_of_variables(
    rank: RankSpec,
    params: &[RatExpr],
    hw: &HighestWeight,
) -> Result<Vec<Vec<RatExpr>>> {
    let (word, pairs) = standard_word(rank);
    if params.len() != word.len() {
        return Err(Error::Unsupported(
            "z-coordinates require standard-word parameters".into(),
        ));
    }
    let n = rank.n;
    let at = |i: usize, j: usize| -> &RatExpr {
        &params[pairs.iter().position(|&p| p == (i, j)).expect("pair")]
    };
    let mut rows = Vec::with_capacity(n + 1);
    for i in 1..=n + 1 {
        let mut row = Vec::with_capacity(i);
        for j in 1..=i {
            let m = j + n + 1 - i;
            // t'_m = positional entry n+2-m (1-based) = hw.entries[n+1-m].
            let mut z = hw.entries[n + 1 - m].clone();
            for k in 1..=n + 1 - i {
                z = z.div(at(k, m))?;
            }
            row.push(z);
        }
        rows.push(row);
    }
    Ok(rows)
}

/// Decoration in z-coordinates: sum over 1 <= b <= a <= n of
/// z_{a+1,b+1}/z_{a,b} + z_{a,b}/z_{a+1,b}.
pub fn decoration_z_form(z: &[Vec<RatExpr>]) -> Result<RatExpr> {
    let n = z.len() - 1;
    let mut f = RatExpr::zero();
    for a in 1..=n {
        for b in 1..=a {
            let za_b = &z[a - 1][b - 1];
            f = f.add(&z[a][b].div(za_b)?);
            f = f.add(&za_b.div(&z[a][b - 1])?);
        }
    }
    Ok(f)
}

/// Weight in z-coordinates, positionally: gamma_p = (prod of row n+2-p) /
/// (prod of row n+1-p), rows indexed by their length.
pub fn weight_z_form(z: &[Vec<RatExpr>]) -> Result<Vec<RatExpr>> {
    let m = z.len();
    let row_prod = |len: usize| -> RatExpr {
        if len == 0 {
            return RatExpr::one();
        }
        let mut acc = RatExpr::one();
        for e in &z[len - 1] {
            acc = acc.mul(e);
        }
        acc
    };
    (0..m)
        .map(|p| row_prod(m - p).div(&row_prod(m - p - 1)))
        .collect()
}

/// Determinant of the matrix d(log out_k)/d(log in_l); equals +-1 for
/// volume-preserving monomial-like maps.
pub fn dlog_jacobian(outputs: &[RatExpr], inputs: &[&str]) -> Result<RatExpr> {
    if outputs.len() != inputs.len() {
        return Err(Error::NotSquareMap(outputs.len(), inputs.len()));
    }
    let k = outputs.len();
    let mut m = SqMatrix::zeros(k);
    for (row, y) in outputs.iter().enumerate() {
        for (col, x) in inputs.iter().enumerate() {
            let entry = RatExpr::var(x).mul(&y.derivative(x)).div(y)?;
            *m.at_mut(row, col) = entry;
        }
    }
    Ok(m.det())
}

/// The rational U-action x_i(a)(x) = x_i(a) x x_i(a') with
/// a' = -a / ((1 + a phi_i(x)) alpha_i(gamma(x))).
pub fn u_action(p: &CrystalPoint, i: usize, a: &RatExpr) -> Result<SqMatrix> {
    let maps = maps_of(p)?;
    let phi = &maps.phi[i - 1];
    let denom = RatExpr::one()
        .add(&a.mul(phi))
        .mul(&alpha_char(&maps.gamma, i)?);
    let a_prime = a.neg().div(&denom)?;
    let left = gen(p.rank, GenKind::X, i, a)?;
    let right = gen(p.rank, GenKind::X, i, &a_prime)?;
    left.mat.mul(&p.matrix)?.mul(&right.mat)
}

/// Canonical JSON-form serialization of a point.
pub fn point_to_canonical(p: &CrystalPoint) -> String {
    let params: Vec<String> = p.params.iter().map(|x| x.to_string()).collect();
    let hw: Vec<String> = p.hw.entries.iter().map(|x| x.to_string()).collect();
    serde_json::json!({
        "schema": "geomcrystal.point.v1",
        "n": p.rank.n,
        "word": p.word.letters(),
        "params": params,
        "hw": hw,
    })
    .to_string()
}

/// Parse the canonical form back into a point (rebuilding the matrix).
pub fn point_from_canonical(text: &str) -> Result<CrystalPoint> {
    let v: serde_json::Value =
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    let n = v["n"]
        .as_u64()
        .ok_or_else(|| Error::Parse("missing rank".into()))? as usize;
    let rank = RankSpec::new(n);
    let letters: Vec<usize> = v["word"]
        .as_array()
        .ok_or_else(|| Error::Parse("missing word".into()))?
        .iter()
        .map(|x| x.as_u64().unwrap_or(0) as usize)
        .collect();
    let word = ReducedWord::new(rank, letters)?;
    let parse_list = |key: &str| -> Result<Vec<RatExpr>> {
        v[key]
            .as_array()
            .ok_or_else(|| Error::Parse(format!("missing {key}")))?
            .iter()
            .map(|x| {
                ratexpr_from_str(
                    x.as_str()
                        .ok_or_else(|| Error::Parse("non-string entry".into()))?,
                )
            })
            .collect()
    };
    let params = parse_list("params")?;
    let hw = HighestWeight::new(parse_list("hw")?)?;
    build_point(rank, &hw, &word, &params)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::mat;
    use crate::ratexpr::rex;

    fn r(n: usize) -> RankSpec {
        RankSpec::new(n)
    }

    fn abc() -> Vec<RatExpr> {
        ["a", "b", "c"].iter().map(|s| rex(s)).collect()
    }

    fn gl4_params() -> Vec<RatExpr> {
        ["a", "b", "c", "d", "e", "f"].iter().map(|s| rex(s)).collect()
    }

    fn gl4_point() -> CrystalPoint {
        let rank = r(3);
        let (word, _) = standard_word(rank);
        assert_eq!(word.letters(), &[3, 2, 1, 3, 2, 3]);
        build_point(rank, &HighestWeight::symbolic(rank), &word, &gl4_params()).unwrap()
    }

    #[test]
    fn gl4_matrix_matches_display() {
        let p = gl4_point();
        let expected = mat(&[
            &["c*e*f*t4", "0", "0", "0"],
            &["b*d*t4 + b*f*t4 + e*f*t4", "(b*d*t3)/(f)", "0", "0"],
            &["a*t4 + d*t4 + f*t4", "(a*t3 + d*t3)/(f)", "(a*t2)/(d*e)", "0"],
            &["t4", "(t3)/(f)", "(t2)/(d*e)", "(t1)/(a*b*c)"],
        ]);
        assert_eq!(p.matrix, expected);
    }

    #[test]
    fn gl4_u_prime_matches_display() {
        let p = gl4_point();
        let (_, u2) = factorization_parts(&p).unwrap();
        let expected = mat(&[
            &["1", "(t3)/(f*t4)", "(t2)/(d*e*t4)", "(t1)/(a*b*c*t4)"],
            &["0", "1", "(d*t2 + f*t2)/(d*e*t3)", "(a*t1 + d*t1 + f*t1)/(a*b*c*t3)"],
            &["0", "0", "1", "(a*b*t1 + a*e*t1 + d*e*t1)/(a*b*c*t2)"],
            &["0", "0", "0", "1"],
        ]);
        assert_eq!(u2.mat, expected);
    }

    #[test]
    fn gl4_structure_maps_match_display() {
        let p = gl4_point();
        let maps = maps_of(&p).unwrap();
        assert_eq!(maps.phi[1], rex("(a + d)/(b*d)"));
        assert_eq!(maps.eps[1], rex("(a*d*e*t3 + d^2*e*t3)/(a*f*t2)"));
        let gamma_expected = [
            rex("c*e*f*t4"),
            rex("(b*d*t3)/(f)"),
            rex("(a*t2)/(d*e)"),
            rex("(t1)/(a*b*c)"),
        ];
        assert_eq!(maps.gamma, gamma_expected.to_vec());
        let f_expected = rex("a + b + c + d + e + f")
            .add(&rex("(t3)/(f*t4)"))
            .add(&rex("(d*t2 + f*t2)/(d*e*t3)"))
            .add(&rex("(a*b*t1 + a*e*t1 + d*e*t1)/(a*b*c*t2)"));
        assert_eq!(maps.decoration, f_expected);
    }

    #[test]
    fn gl4_e2_action_matches_display() {
        let p = gl4_point();
        let q = e_action(&p, 2, &rex("p")).unwrap();
        let expected = mat(&[
            &["c*e*f*t4", "0", "0", "0"],
            &[
                "(a*b*d*p*t4 + b*d^2*p*t4 + b*d*f*p*t4 + a*b*f*t4 + a*e*f*t4 + d*e*f*t4)/(a + d)",
                "(b*d*p*t3)/(f)",
                "0",
                "0",
            ],
            &["a*t4 + d*t4 + f*t4", "(a*t3 + d*t3)/(f)", "(a*t2)/(d*e*p)", "0"],
            &["t4", "(t3)/(f)", "(a*t2 + d*p*t2)/(a*d*e*p + d^2*e*p)", "(t1)/(a*b*c)"],
        ]);
        assert_eq!(q.matrix, expected);
        // Coordinate updates: a' = a(a+d)/(a+dp), b' = b(a+dp)/(a+d),
        // d' = d(a+d)p/(a+dp); c, e, f fixed.
        assert_eq!(q.params[0], rex("(a^2 + a*d)/(a + d*p)"));
        assert_eq!(q.params[1], rex("(a*b + b*d*p)/(a + d)"));
        assert_eq!(q.params[2], rex("c"));
        assert_eq!(q.params[3], rex("(a*d*p + d^2*p)/(a + d*p)"));
        assert_eq!(q.params[4], rex("e"));
        assert_eq!(q.params[5], rex("f"));
    }

    #[test]
    fn gl2_point_diagonal() {
        let rank = r(1);
        let word = ReducedWord::new(rank, vec![1]).unwrap();
        let hw = HighestWeight::symbolic(rank);
        let p = build_point(rank, &hw, &word, &[rex("a")]).unwrap();
        assert_eq!(p.matrix, mat(&[&["a*t2", "0"], &["t2", "(t1)/(a)"]]));
    }

    #[test]
    fn all_ones_point_is_totally_nonnegative() {
        let rank = r(2);
        let word = ReducedWord::new(rank, vec![2, 1, 2]).unwrap();
        let hw = HighestWeight::new(vec![rex("1"), rex("1"), rex("1")]).unwrap();
        let ones = vec![rex("1"), rex("1"), rex("1")];
        let p = build_point(rank, &hw, &word, &ones).unwrap();
        // All square minors of the 3x3 matrix are nonnegative rationals.
        let m = &p.matrix;
        for rows in [[0, 1], [0, 2], [1, 2]] {
            for cols in [[0, 1], [0, 2], [1, 2]] {
                let det = m
                    .at(rows[0], cols[0])
                    .mul(m.at(rows[1], cols[1]))
                    .sub(&m.at(rows[0], cols[1]).mul(m.at(rows[1], cols[0])));
                let v = det.as_constant().unwrap();
                assert!(v >= crate::scalar::int(0));
            }
        }
        assert!(m.det().as_constant().unwrap() >= crate::scalar::int(0));
    }

    #[test]
    fn weight_formula_matches_diagonal() {
        for (n, letters) in [(2usize, vec![2usize, 1, 2]), (2, vec![1, 2, 1])] {
            let rank = r(n);
            let word = ReducedWord::new(rank, letters).unwrap();
            let hw = HighestWeight::symbolic(rank);
            let p = build_point(rank, &hw, &word, &abc()).unwrap();
            let wf = weight_formula(rank, &word, &abc(), &hw).unwrap();
            assert_eq!(wf, p.matrix.diag());
        }
        let p = gl4_point();
        let wf = weight_formula(p.rank, &p.word, &p.params, &p.hw).unwrap();
        assert_eq!(wf, p.matrix.diag());
    }

    #[test]
    fn weight_telescopes_to_torus() {
        let p = gl4_point();
        let wf = weight_formula(p.rank, &p.word, &p.params, &p.hw).unwrap();
        let prod = wf.iter().fold(RatExpr::one(), |acc, g| acc.mul(g));
        let t_prod = rex("t1*t2*t3*t4");
        assert_eq!(prod, t_prod);
        // All parameters 1: gamma is the reversed torus.
        let ones: Vec<RatExpr> = (0..6).map(|_| RatExpr::one()).collect();
        let wf1 = weight_formula(p.rank, &p.word, &ones, &p.hw).unwrap();
        assert_eq!(wf1, vec![rex("t4"), rex("t3"), rex("t2"), rex("t1")]);
    }

    #[test]
    fn e_action_at_one_is_identity() {
        let p = gl4_point();
        let q = e_action(&p, 2, &RatExpr::one()).unwrap();
        assert_eq!(q.matrix, p.matrix);
        assert_eq!(q.params, p.params);
    }

    #[test]
    fn e_action_composition_law() {
        // e_i^{c1} . e_i^{c2} = e_i^{c1 c2} on a generic GL_3 point.
        let rank = r(2);
        let word = ReducedWord::new(rank, vec![2, 1, 2]).unwrap();
        let hw = HighestWeight::symbolic(rank);
        let p = build_point(rank, &hw, &word, &abc()).unwrap();
        for i in 1..=2usize {
            let one_step = e_action(&p, i, &rex("c1*c2")).unwrap();
            let two_step = e_action(&e_action(&p, i, &rex("c2")).unwrap(), i, &rex("c1")).unwrap();
            assert_eq!(one_step.matrix, two_step.matrix, "i = {i}");
        }
    }

    #[test]
    fn e_action_preserves_highest_weight() {
        let rank = r(2);
        let word = ReducedWord::new(rank, vec![2, 1, 2]).unwrap();
        let hw = HighestWeight::symbolic(rank);
        let p = build_point(rank, &hw, &word, &abc()).unwrap();
        let q = e_action(&p, 1, &rex("c")).unwrap();
        // hw is recovered from the matrix: u_new t w0 u2' with the same t.
        assert_eq!(q.hw, p.hw);
        // and the acted matrix still factorizes through t.
        let u = unipotent_of_matrix(rank, &hw, &q.matrix).unwrap();
        assert!(u.is_upper_unipotent());
    }

    #[test]
    fn decoration_closed_form_agrees() {
        let p = gl4_point();
        let f = decoration_closed_form(p.rank, &p.params, &p.hw).unwrap();
        assert_eq!(f, maps_of(&p).unwrap().decoration);

        // GL_2 case: F = a + t1/(a t2) positionally.
        let rank = r(1);
        let hw = HighestWeight::symbolic(rank);
        let f2 = decoration_closed_form(rank, &[rex("a")], &hw).unwrap();
        assert_eq!(f2, rex("a").add(&rex("(t1)/(a*t2)")));
    }

    #[test]
    fn decoration_at_ones_counts_terms() {
        for n in [1usize, 2, 3] {
            let rank = r(n);
            let ones: Vec<RatExpr> = (0..rank.longest_length()).map(|_| RatExpr::one()).collect();
            let hw =
                HighestWeight::new(vec![RatExpr::one(); rank.matrix_size()]).unwrap();
            let f = decoration_closed_form(rank, &ones, &hw).unwrap();
            let expected = (n * (n + 1)) as i64; // two sums of n(n+1)/2 terms
            assert_eq!(f, RatExpr::from_int(expected));
        }
    }

    #[test]
    fn z_coordinates_rewrite_decoration_and_weight() {
        for n in [1usize, 2, 3] {
            let rank = r(n);
            let l = rank.longest_length();
            let params: Vec<RatExpr> = (0..l).map(|k| rex(&format!("a{k}"))).collect();
            let hw = HighestWeight::symbolic(rank);
            let z = gt_change_of_variables(rank, &params, &hw).unwrap();
            let f_z = decoration_z_form(&z).unwrap();
            let f = decoration_closed_form(rank, &params, &hw).unwrap();
            assert_eq!(f_z, f, "decoration in z-form, n = {n}");
            let (word, _) = standard_word(rank);
            let wf = weight_formula(rank, &word, &params, &hw).unwrap();
            let wz = weight_z_form(&z).unwrap();
            assert_eq!(wz, wf, "weight in z-form, n = {n}");
        }
    }

    #[test]
    fn z_map_is_unimodular() {
        // The exponent matrix of (a_{i,j}) -> (z_{i,j}) is integer with det +-1.
        let rank = r(3);
        let l = rank.longest_length();
        let params: Vec<RatExpr> = (0..l).map(|k| rex(&format!("a{k}"))).collect();
        let hw = HighestWeight::symbolic(rank);
        let z = gt_change_of_variables(rank, &params, &hw).unwrap();
        let entries: Vec<&RatExpr> = z
            .iter()
            .take(rank.n)
            .flat_map(|row| row.iter())
            .collect();
        assert_eq!(entries.len(), l);
        let mut m = SqMatrix::zeros(l);
        for (row, zz) in entries.iter().enumerate() {
            // z is t-monomial / a-monomial: exponent of a{k} is in the denominator.
            for k in 0..l {
                let name = format!("a{k}");
                let e_num = zz.num().degree_in_var(&name) as i64;
                let e_den = zz.den().degree_in_var(&name) as i64;
                *m.at_mut(row, k) = RatExpr::from_int(e_num - e_den);
            }
        }
        let det = m.det().as_constant().unwrap();
        assert!(det == crate::scalar::int(1) || det == crate::scalar::int(-1));
    }

    #[test]
    fn gl4_z_form_has_twelve_ratio_terms() {
        let n = 3usize;
        // count of pairs 1 <= b <= a <= n is 6; two ratios each.
        let count = (1..=n).map(|a| a).sum::<usize>() * 2;
        assert_eq!(count, 12);
    }

    #[test]
    fn dlog_jacobian_of_braid_moves() {
        // m = 3 move for the x chart.
        let outs = [
            rex("(b*c)/(a + c)"),
            rex("a + c"),
            rex("(a*b)/(a + c)"),
        ];
        let d = dlog_jacobian(&outs, &["a", "b", "c"]).unwrap();
        let dc = d.as_constant().unwrap();
        assert!(dc == crate::scalar::int(1) || dc == crate::scalar::int(-1));

        // m = 3 move for the x_neg chart, and the raw-Jacobian determinant
        // equals efg/(abc) after substituting e, f, g.
        let e = rex("(b*c)/(a*c + b)");
        let f = rex("a*c");
        let g = rex("(a*c + b)/(c)");
        let outs = [e.clone(), f.clone(), g.clone()];
        let d = dlog_jacobian(&outs, &["a", "b", "c"]).unwrap();
        let dc = d.as_constant().unwrap();
        assert!(dc == crate::scalar::int(1) || dc == crate::scalar::int(-1));
        let mut jac = SqMatrix::zeros(3);
        for (row, y) in outs.iter().enumerate() {
            for (col, x) in ["a", "b", "c"].iter().enumerate() {
                *jac.at_mut(row, col) = y.derivative(x);
            }
        }
        let raw_det = jac.det();
        let efg_over_abc = e.mul(&f).mul(&g).div(&rex("a*b*c")).unwrap();
        assert_eq!(raw_det, efg_over_abc);

        // identity map
        let outs = [rex("a"), rex("b")];
        assert!(dlog_jacobian(&outs, &["a", "b"]).unwrap().is_one());
    }

    #[test]
    fn dlog_jacobian_of_e_action_chart_map() {
        let rank = r(2);
        let word = ReducedWord::new(rank, vec![2, 1, 2]).unwrap();
        let hw = HighestWeight::symbolic(rank);
        let p = build_point(rank, &hw, &word, &abc()).unwrap();
        for i in 1..=2usize {
            let q = e_action(&p, i, &rex("c0")).unwrap();
            let d = dlog_jacobian(&q.params, &["a", "b", "c"]).unwrap();
            let dc = d.as_constant().unwrap_or_else(|| panic!("nonconstant dlog det {d}"));
            assert!(
                dc == crate::scalar::int(1) || dc == crate::scalar::int(-1),
                "i = {i}"
            );
        }
    }

    #[test]
    fn chart_inversion_works_for_all_gl4_words() {
        let rank = r(3);
        let params: Vec<RatExpr> = ["a", "b", "c", "d", "e", "f"].iter().map(|s| rex(s)).collect();
        for word in crate::lie::all_longest_words(rank) {
            let u = word_product(rank, GenKind::X, &word, &params).unwrap();
            let solved = factorize_in_word(rank, &u, &word).unwrap();
            assert_eq!(solved, params, "word {:?}", word.letters());
        }
    }

    #[test]
    fn point_serialization_round_trip() {
        let rank = r(2);
        let word = ReducedWord::new(rank, vec![2, 1, 2]).unwrap();
        let hw = HighestWeight::new(vec![rex("2"), rex("1/3"), rex("1")]).unwrap();
        let p = build_point(rank, &hw, &word, &abc()).unwrap();
        let text = point_to_canonical(&p);
        let q = point_from_canonical(&text).unwrap();
        assert_eq!(p, q);
        assert_eq!(point_to_canonical(&q), text);
    }

    #[test]
    fn degenerate_points_are_rejected() {
        let rank = r(1);
        let word = ReducedWord::new(rank, vec![1]).unwrap();
        let hw = HighestWeight::symbolic(rank);
        assert!(matches!(
            build_point(rank, &hw, &word, &[RatExpr::zero()]),
            Err(Error::SingularChart(_))
        ));
        let p = build_point(rank, &hw, &word, &[rex("a")]).unwrap();
        assert!(matches!(
            e_action(&p, 1, &RatExpr::zero()),
            Err(Error::ZeroParameter)
        ));
    }
}
