//! Type-A group toolkit for GL_{n+1}: one-parameter generators, reduced
//! words, characters, Gauss-type projections, braid moves on factorization
//! parameters, and the twist map between the two unipotent charts.

use crate::error::{Error, Result};
use crate::matrix::SqMatrix;
use crate::ratexpr::RatExpr;

/// The group is GL_{n+1}; Dynkin indices run through 1..=n.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RankSpec {
    pub n: usize,
}

impl RankSpec {
    pub fn new(n: usize) -> RankSpec {
        assert!(n >= 1, "rank must be at least 1");
        RankSpec { n }
    }

    pub fn matrix_size(&self) -> usize {
        self.n + 1
    }

    /// Number of positive roots = length of the longest element.
    pub fn longest_length(&self) -> usize {
        self.n * (self.n + 1) / 2
    }

    fn check_index(&self, i: usize) -> Result<()> {
        if i == 0 || i > self.n {
            return Err(Error::IndexOutOfRange(i, self.n));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GenKind {
    X,
    Y,
    AlphaCheck,
    XNeg,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupElt {
    pub rank: RankSpec,
    pub mat: SqMatrix,
}

impl GroupElt {
    pub fn identity(rank: RankSpec) -> GroupElt {
        GroupElt {
            rank,
            mat: SqMatrix::identity(rank.matrix_size()),
        }
    }

    pub fn from_matrix(rank: RankSpec, mat: SqMatrix) -> GroupElt {
        assert_eq!(mat.size(), rank.matrix_size());
        GroupElt { rank, mat }
    }

    pub fn mul(&self, other: &GroupElt) -> Result<GroupElt> {
        Ok(GroupElt {
            rank: self.rank,
            mat: self.mat.mul(&other.mat)?,
        })
    }

    pub fn inverse(&self) -> Result<GroupElt> {
        Ok(GroupElt {
            rank: self.rank,
            mat: self.mat.inverse()?,
        })
    }

    pub fn transpose(&self) -> GroupElt {
        GroupElt {
            rank: self.rank,
            mat: self.mat.transpose(),
        }
    }

    pub fn is_upper_unipotent(&self) -> bool {
        self.mat.is_upper_unitriangular()
    }

    pub fn is_lower_triangular(&self) -> bool {
        self.mat.is_lower_triangular()
    }

    pub fn is_torus(&self) -> bool {
        self.mat.is_diagonal()
    }
}

/// One-parameter generator matrices.
pub fn gen(rank: RankSpec, kind: GenKind, i: usize, a: &RatExpr) -> Result<GroupElt> {
    rank.check_index(i)?;
    let mut m = SqMatrix::identity(rank.matrix_size());
    let r = i - 1; // block sits at rows/cols (r, r+1)
    match kind {
        GenKind::X => {
            *m.at_mut(r, r + 1) = a.clone();
        }
        GenKind::Y => {
            *m.at_mut(r + 1, r) = a.clone();
        }
        GenKind::AlphaCheck => {
            if a.is_zero() {
                return Err(Error::ZeroParameter);
            }
            *m.at_mut(r, r) = a.clone();
            *m.at_mut(r + 1, r + 1) = a.inverse()?;
        }
        GenKind::XNeg => {
            // x_{-i}(a) = y_i(a) * alpha_i^vee(1/a)
            if a.is_zero() {
                return Err(Error::ZeroParameter);
            }
            *m.at_mut(r, r) = a.inverse()?;
            *m.at_mut(r + 1, r) = RatExpr::one();
            *m.at_mut(r + 1, r + 1) = a.clone();
        }
    }
    Ok(GroupElt { rank, mat: m })
}

/// Reduced word in the Dynkin indices; reducedness is validated against
/// the inversion count of the induced permutation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReducedWord {
    letters: Vec<usize>,
}

impl ReducedWord {
    pub fn new(rank: RankSpec, letters: Vec<usize>) -> Result<ReducedWord> {
        for &i in &letters {
            rank.check_index(i)?;
        }
        let perm = permutation_of_word(rank, &letters);
        if inversions(&perm) != letters.len() {
            return Err(Error::NotReduced(letters));
        }
        Ok(ReducedWord { letters })
    }

    pub fn letters(&self) -> &[usize] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn reversed(&self) -> ReducedWord {
        let mut letters = self.letters.clone();
        letters.reverse();
        ReducedWord { letters }
    }
}

/// The permutation s_{i1}∘s_{i2}∘⋯∘s_{ik} as a 0-based image array.
pub fn permutation_of_word(rank: RankSpec, letters: &[usize]) -> Vec<usize> {
    let m = rank.matrix_size();
    let mut perm: Vec<usize> = (0..m).collect();
    for &i in letters.iter().rev() {
        // perm := s_i ∘ perm
        for v in perm.iter_mut() {
            if *v == i - 1 {
                *v = i;
            } else if *v == i {
                *v = i - 1;
            }
        }
    }
    perm
}

pub fn inversions(perm: &[usize]) -> usize {
    let mut count = 0;
    for i in 0..perm.len() {
        for j in i + 1..perm.len() {
            if perm[i] > perm[j] {
                count += 1;
            }
        }
    }
    count
}

/// Lexicographically smallest reduced word of the longest element.
pub fn longest_word(rank: RankSpec) -> ReducedWord {
    let m = rank.matrix_size();
    let mut w: Vec<usize> = (0..m).rev().collect(); // w0 as image array
    let mut letters = Vec::with_capacity(rank.longest_length());
    loop {
        // Smallest i with length(s_i ∘ w) < length(w): w^{-1}(i-1) > w^{-1}(i).
        let mut inv = vec![0usize; m];
        for (p, &v) in w.iter().enumerate() {
            inv[v] = p;
        }
        let mut found = None;
        for i in 1..=rank.n {
            if inv[i - 1] > inv[i] {
                found = Some(i);
                break;
            }
        }
        let Some(i) = found else { break };
        letters.push(i);
        for v in w.iter_mut() {
            if *v == i - 1 {
                *v = i;
            } else if *v == i {
                *v = i - 1;
            }
        }
    }
    ReducedWord::new(rank, letters).expect("greedy construction is reduced")
}

/// All reduced words of the longest element (small ranks only).
pub fn all_longest_words(rank: RankSpec) -> Vec<ReducedWord> {
    fn go(rank: RankSpec, w: &[usize], acc: &mut Vec<Vec<usize>>, cur: &mut Vec<usize>) {
        if inversions(w) == 0 {
            acc.push(cur.clone());
            return;
        }
        let m = w.len();
        let mut inv = vec![0usize; m];
        for (p, &v) in w.iter().enumerate() {
            inv[v] = p;
        }
        for i in 1..m {
            if inv[i - 1] > inv[i] {
                let mut next = w.to_vec();
                for v in next.iter_mut() {
                    if *v == i - 1 {
                        *v = i;
                    } else if *v == i {
                        *v = i - 1;
                    }
                }
                cur.push(i);
                go(rank, &next, acc, cur);
                cur.pop();
            }
        }
    }
    let m = rank.matrix_size();
    let w0: Vec<usize> = (0..m).rev().collect();
    let mut acc = Vec::new();
    go(rank, &w0, &mut acc, &mut Vec::new());
    acc.into_iter()
        .map(|letters| ReducedWord::new(rank, letters).expect("enumeration is reduced"))
        .collect()
}

/// Ordered product x_{i1}(a1)⋯x_{ik}(ak) (or the x_{-i} version).
pub fn word_product(
    rank: RankSpec,
    kind: GenKind,
    word: &ReducedWord,
    params: &[RatExpr],
) -> Result<GroupElt> {
    if params.len() != word.len() {
        return Err(Error::LengthMismatch(params.len(), word.len()));
    }
    let mut acc = GroupElt::identity(rank);
    for (&i, a) in word.letters().iter().zip(params) {
        acc = acc.mul(&gen(rank, kind, i, a)?)?;
    }
    Ok(acc)
}

/// The lift s̄_i = x_i(-1) y_i(1) x_i(-1).
pub fn sbar(rank: RankSpec, i: usize) -> Result<GroupElt> {
    let m1 = RatExpr::from_int(-1);
    let p1 = RatExpr::from_int(1);
    gen(rank, GenKind::X, i, &m1)?
        .mul(&gen(rank, GenKind::Y, i, &p1)?)?
        .mul(&gen(rank, GenKind::X, i, &m1)?)
}

/// The lift of the longest element, from its lex-smallest reduced word.
pub fn w0bar(rank: RankSpec) -> GroupElt {
    let word = longest_word(rank);
    let mut acc = GroupElt::identity(rank);
    for &i in word.letters() {
        acc = acc.mul(&sbar(rank, i).expect("valid index")).expect("size ok");
    }
    acc
}

/// Gauss projections: g = b·u with b lower triangular and u unit upper.
/// Errors (naming the minor) when g is outside B_-·U.
pub fn gauss_project(g: &GroupElt) -> Result<(GroupElt, GroupElt)> {
    let (b, u) = g.mat.gauss_lu()?;
    Ok((
        GroupElt::from_matrix(g.rank, b),
        GroupElt::from_matrix(g.rank, u),
    ))
}

/// χ(u): sum of the superdiagonal entries of the unit-upper factor,
/// extended to B_-·U through the Gauss projection.
pub fn chi(g: &GroupElt) -> Result<RatExpr> {
    let u = if g.is_upper_unipotent() {
        g.mat.clone()
    } else {
        g.mat.gauss_lu()?.1
    };
    let mut acc = RatExpr::zero();
    for i in 0..u.size() - 1 {
        acc = acc.add(u.at(i, i + 1));
    }
    Ok(acc)
}

/// χ_i^-: the (i+1, i) entry of the unit-lower factor of g = u_- t u_+.
pub fn chi_minus(g: &GroupElt, i: usize) -> Result<RatExpr> {
    g.rank.check_index(i)?;
    let b = if g.is_lower_triangular() {
        g.mat.clone()
    } else {
        g.mat.gauss_lu()?.0
    };
    b.at(i, i - 1).div(b.at(i - 1, i - 1))
}

/// One braid move at `position` (0-based), rewriting the word and its
/// parameters without changing the product. `m = 2` swaps commuting
/// letters; `m = 3` applies the exchange with subtraction-free parameters.
pub fn braid_move(
    kind: GenKind,
    rank: RankSpec,
    word: &ReducedWord,
    params: &[RatExpr],
    position: usize,
) -> Result<(ReducedWord, Vec<RatExpr>)> {
    if params.len() != word.len() {
        return Err(Error::LengthMismatch(params.len(), word.len()));
    }
    if !matches!(kind, GenKind::X | GenKind::XNeg) {
        return Err(Error::InvalidBraid(position, "kind must be x or x_neg".into()));
    }
    let l = word.letters();
    if position + 1 < l.len() && l[position].abs_diff(l[position + 1]) >= 2 {
        // m = 2
        let mut letters = l.to_vec();
        letters.swap(position, position + 1);
        let mut new_params = params.to_vec();
        new_params.swap(position, position + 1);
        return Ok((ReducedWord::new(rank, letters)?, new_params));
    }
    if position + 2 < l.len()
        && l[position] == l[position + 2]
        && l[position].abs_diff(l[position + 1]) == 1
    {
        // m = 3
        let (i, j) = (l[position], l[position + 1]);
        let (a, b, c) = (
            &params[position],
            &params[position + 1],
            &params[position + 2],
        );
        let (e, f, g) = match kind {
            GenKind::X => {
                // x_i(a)x_j(b)x_i(c) = x_j(bc/(a+c)) x_i(a+c) x_j(ab/(a+c))
                let s = a.add(c);
                (b.mul(c).div(&s)?, s.clone(), a.mul(b).div(&s)?)
            }
            GenKind::XNeg => {
                // x_{-i}(a)x_{-j}(b)x_{-i}(c)
                //   = x_{-j}(bc/(b+ac)) x_{-i}(ac) x_{-j}((ac+b)/c)
                let s = b.add(&a.mul(c));
                (
                    b.mul(c).div(&s)?,
                    a.mul(c),
                    s.div(c)?,
                )
            }
            _ => unreachable!(),
        };
        let mut letters = l.to_vec();
        letters[position] = j;
        letters[position + 1] = i;
        letters[position + 2] = j;
        let mut new_params = params.to_vec();
        new_params[position] = e;
        new_params[position + 1] = f;
        new_params[position + 2] = g;
        return Ok((ReducedWord::new(rank, letters)?, new_params));
    }
    Err(Error::InvalidBraid(
        position,
        format!("letters {:?} do not form a braid pattern", l),
    ))
}

/// Neighbors of a word in the braid-move graph, as (position, new word).
fn braid_neighbors(letters: &[usize]) -> Vec<(usize, Vec<usize>)> {
    let mut out = Vec::new();
    for p in 0..letters.len().saturating_sub(1) {
        if letters[p].abs_diff(letters[p + 1]) >= 2 {
            let mut w = letters.to_vec();
            w.swap(p, p + 1);
            out.push((p, w));
        }
        if p + 2 < letters.len()
            && letters[p] == letters[p + 2]
            && letters[p].abs_diff(letters[p + 1]) == 1
        {
            let mut w = letters.to_vec();
            w[p] = letters[p + 1];
            w[p + 1] = letters[p];
            w[p + 2] = letters[p + 1];
            out.push((p, w));
        }
    }
    out
}

/// Breadth-first braid-move path between two reduced words of the same
/// element, as the list of positions at which to apply moves.
pub fn braid_path(from: &ReducedWord, to: &ReducedWord) -> Result<Vec<usize>> {
    if from.letters() == to.letters() {
        return Ok(Vec::new());
    }
    use std::collections::{HashMap, VecDeque};
    let mut prev: HashMap<Vec<usize>, (Vec<usize>, usize)> = HashMap::new();
    let mut queue = VecDeque::new();
    queue.push_back(from.letters().to_vec());
    prev.insert(from.letters().to_vec(), (Vec::new(), usize::MAX));
    while let Some(w) = queue.pop_front() {
        if w == to.letters() {
            let mut path = Vec::new();
            let mut cur = w;
            while let Some((p, pos)) = prev.get(&cur) {
                if *pos == usize::MAX {
                    break;
                }
                path.push(*pos);
                cur = p.clone();
            }
            path.reverse();
            return Ok(path);
        }
        for (pos, nb) in braid_neighbors(&w) {
            if !prev.contains_key(&nb) {
                prev.insert(nb.clone(), (w.clone(), pos));
                queue.push_back(nb);
            }
        }
    }
    Err(Error::InvalidBraid(
        0,
        "words are not connected by braid moves".into(),
    ))
}

/// Twist map: η(u) = π^-(u w̄_0) together with the companion τ(u) defined
/// by u w̄_0 τ(u) = η(u).
pub fn twist(u: &GroupElt) -> Result<(GroupElt, GroupElt)> {
    let g = u.mul(&w0bar(u.rank))?;
    let (eta, u2) = gauss_project(&g)?;
    let tau = u2.inverse()?;
    Ok((eta, tau))
}

/// Inverse twist: η^{-1}(x) = π^+(w̄_0 x^{-1})^{-1}.
pub fn twist_inverse(x: &GroupElt) -> Result<GroupElt> {
    let g = w0bar(x.rank).mul(&x.inverse()?)?;
    let (_, u) = gauss_project(&g)?;
    u.inverse()
}

/// Type-A Cartan matrix entry a_{ij} = <alpha_j, alpha_i^vee>.
pub fn cartan(i: usize, j: usize) -> i32 {
    if i == j {
        2
    } else if i.abs_diff(j) == 1 {
        -1
    } else {
        0
    }
}

/// β_k = s_{i1}⋯s_{i_{k-1}} α_{i_k} as a pair of coordinate indices
/// (0-based): the root e_r - e_s.
pub fn beta_root(rank: RankSpec, word: &ReducedWord, k: usize) -> (usize, usize) {
    let prefix = &word.letters()[..k - 1];
    let v = permutation_of_word(rank, prefix);
    let i = word.letters()[k - 1];
    (v[i - 1], v[i])
}

/// The coroot value β^∨(a) for the root e_r - e_s.
pub fn coroot_elt(rank: RankSpec, root: (usize, usize), a: &RatExpr) -> Result<GroupElt> {
    if a.is_zero() {
        return Err(Error::ZeroParameter);
    }
    let mut m = SqMatrix::identity(rank.matrix_size());
    *m.at_mut(root.0, root.0) = a.clone();
    *m.at_mut(root.1, root.1) = a.inverse()?;
    Ok(GroupElt::from_matrix(rank, m))
}

/// Monomial relation between the two charts:
/// x_𝐢(a_1..a_k) = torus · x_{-𝐢ᵒᵖ}(b_k,…,b_1)^T, with b related to a by
/// an invertible monomial transformation and torus = ∏ β_k^∨(a_k).
pub fn monomial_split(
    rank: RankSpec,
    word: &ReducedWord,
    params: &[RatExpr],
) -> Result<(GroupElt, Vec<RatExpr>)> {
    if params.len() != word.len() {
        return Err(Error::LengthMismatch(params.len(), word.len()));
    }
    let l = word.letters();
    let k = l.len();
    // a_r = b_r * prod_{m>r} b_m^{cartan(i_m, i_r)}, solved back to front.
    let mut b: Vec<RatExpr> = vec![RatExpr::zero(); k];
    for r in (0..k).rev() {
        let mut val = params[r].clone();
        for m in r + 1..k {
            let c = cartan(l[m], l[r]);
            if c != 0 {
                val = val.mul(&b[m].pow(-c)?);
            }
        }
        b[r] = val;
    }
    let mut torus = GroupElt::identity(rank);
    for r in 1..=k {
        let root = beta_root(rank, word, r);
        torus = torus.mul(&coroot_elt(rank, root, &params[r - 1])?)?;
    }
    Ok((torus, b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::mat;
    use crate::ratexpr::rex;

    fn r(n: usize) -> RankSpec {
        RankSpec::new(n)
    }

    fn word(rank: RankSpec, letters: &[usize]) -> ReducedWord {
        ReducedWord::new(rank, letters.to_vec()).unwrap()
    }

    #[test]
    fn generator_patterns_gl4() {
        let g = gen(r(3), GenKind::X, 2, &rex("a")).unwrap();
        let expected = mat(&[
            &["1", "0", "0", "0"],
            &["0", "1", "a", "0"],
            &["0", "0", "1", "0"],
            &["0", "0", "0", "1"],
        ]);
        assert_eq!(g.mat, expected);

        let g = gen(r(3), GenKind::XNeg, 3, &rex("a")).unwrap();
        let expected = mat(&[
            &["1", "0", "0", "0"],
            &["0", "1", "0", "0"],
            &["0", "0", "(1)/(a)", "0"],
            &["0", "0", "1", "a"],
        ]);
        assert_eq!(g.mat, expected);
    }

    #[test]
    fn x_at_zero_is_identity() {
        let g = gen(r(2), GenKind::X, 1, &RatExpr::zero()).unwrap();
        assert_eq!(g, GroupElt::identity(r(2)));
    }

    #[test]
    fn one_parameter_subgroup_law() {
        let ga = gen(r(2), GenKind::X, 1, &rex("a")).unwrap();
        let gb = gen(r(2), GenKind::X, 1, &rex("b")).unwrap();
        let gab = gen(r(2), GenKind::X, 1, &rex("a + b")).unwrap();
        assert_eq!(ga.mul(&gb).unwrap(), gab);
        let inv = gen(r(2), GenKind::X, 1, &rex("-a")).unwrap();
        assert_eq!(ga.inverse().unwrap(), inv);
    }

    #[test]
    fn index_out_of_range() {
        assert!(matches!(
            gen(r(2), GenKind::X, 3, &rex("a")),
            Err(Error::IndexOutOfRange(3, 2))
        ));
        assert!(matches!(
            gen(r(2), GenKind::XNeg, 1, &RatExpr::zero()),
            Err(Error::ZeroParameter)
        ));
    }

    #[test]
    fn sl3_word_product_display() {
        // x_{(2,1,2)}(a,b,c) = [[1, b, bc], [0, 1, a+c], [0, 0, 1]]
        let w = word(r(2), &[2, 1, 2]);
        let u = word_product(r(2), GenKind::X, &w, &[rex("a"), rex("b"), rex("c")]).unwrap();
        let expected = mat(&[
            &["1", "b", "b*c"],
            &["0", "1", "a + c"],
            &["0", "0", "1"],
        ]);
        assert_eq!(u.mat, expected);
    }

    #[test]
    fn empty_word_gives_identity() {
        let w = ReducedWord::new(r(2), vec![]).unwrap();
        let u = word_product(r(2), GenKind::X, &w, &[]).unwrap();
        assert_eq!(u, GroupElt::identity(r(2)));
    }

    #[test]
    fn non_reduced_word_rejected() {
        assert!(matches!(
            ReducedWord::new(r(2), vec![1, 1]),
            Err(Error::NotReduced(_))
        ));
        assert!(ReducedWord::new(r(2), vec![1, 2, 1]).is_ok());
        assert!(matches!(
            ReducedWord::new(r(2), vec![1, 2, 1, 2]),
            Err(Error::NotReduced(_))
        ));
    }

    #[test]
    fn chi_of_unitriangular() {
        let g = GroupElt::from_matrix(
            r(3),
            mat(&[
                &["1", "a", "u", "v"],
                &["0", "1", "b", "w"],
                &["0", "0", "1", "c"],
                &["0", "0", "0", "1"],
            ]),
        );
        assert_eq!(chi(&g).unwrap(), rex("a + b + c"));
        assert!(chi(&GroupElt::identity(r(3))).unwrap().is_zero());
    }

    #[test]
    fn gauss_project_basics() {
        let g = GroupElt::from_matrix(r(1), mat(&[&["0", "1"], &["1", "0"]]));
        assert_eq!(gauss_project(&g).unwrap_err(), Error::NotInBorelCell(1));
        let lower = GroupElt::from_matrix(r(1), mat(&[&["a", "0"], &["1", "b"]]));
        let (b, u) = gauss_project(&lower).unwrap();
        assert_eq!(b, lower);
        assert!(u.is_upper_unipotent());
    }

    #[test]
    fn w0bar_matches_sl3_display() {
        let w0 = w0bar(r(2));
        let expected = mat(&[
            &["0", "0", "1"],
            &["0", "-1", "0"],
            &["1", "0", "0"],
        ]);
        assert_eq!(w0.mat, expected);
        assert!(w0.mat.det().is_one());
        // Inverse equals the transpose-with-signs (here: itself).
        assert_eq!(w0.inverse().unwrap().mat, expected);
    }

    #[test]
    fn w0bar_is_word_independent() {
        for n in [2usize, 3] {
            let rank = r(n);
            let reference = w0bar(rank);
            for w in all_longest_words(rank) {
                let mut acc = GroupElt::identity(rank);
                for &i in w.letters() {
                    acc = acc.mul(&sbar(rank, i).unwrap()).unwrap();
                }
                assert_eq!(acc, reference, "word {:?}", w.letters());
            }
        }
    }

    #[test]
    fn sbar_satisfies_braid_relations() {
        let rank = r(3);
        let s1 = sbar(rank, 1).unwrap();
        let s2 = sbar(rank, 2).unwrap();
        let s3 = sbar(rank, 3).unwrap();
        let lhs = s1.mul(&s2).unwrap().mul(&s1).unwrap();
        let rhs = s2.mul(&s1).unwrap().mul(&s2).unwrap();
        assert_eq!(lhs, rhs);
        assert_eq!(
            s1.mul(&s3).unwrap(),
            s3.mul(&s1).unwrap()
        );
    }

    #[test]
    fn xy_relation_holds() {
        // x_i(a) y_i(b) = y_i(b/(1+ab)) alpha_i^vee(1+ab) x_i(a/(1+ab))
        for n in [2usize, 3] {
            let rank = r(n);
            for i in 1..=n {
                let lhs = gen(rank, GenKind::X, i, &rex("a"))
                    .unwrap()
                    .mul(&gen(rank, GenKind::Y, i, &rex("b")).unwrap())
                    .unwrap();
                let rhs = gen(rank, GenKind::Y, i, &rex("(b)/(a*b + 1)"))
                    .unwrap()
                    .mul(&gen(rank, GenKind::AlphaCheck, i, &rex("a*b + 1")).unwrap())
                    .unwrap()
                    .mul(&gen(rank, GenKind::X, i, &rex("(a)/(a*b + 1)")).unwrap())
                    .unwrap();
                assert_eq!(lhs, rhs, "rank {n}, i {i}");
            }
        }
    }

    #[test]
    fn x_and_y_commute_for_distinct_indices() {
        let rank = r(3);
        for i in 1..=3usize {
            for j in 1..=3usize {
                if i == j {
                    continue;
                }
                let xi = gen(rank, GenKind::X, i, &rex("a")).unwrap();
                let yj = gen(rank, GenKind::Y, j, &rex("b")).unwrap();
                assert_eq!(xi.mul(&yj).unwrap(), yj.mul(&xi).unwrap());
            }
        }
    }

    #[test]
    fn braid_move_m3_x_matches_golden() {
        let rank = r(2);
        let w = word(rank, &[1, 2, 1]);
        let params = [rex("a"), rex("b"), rex("c")];
        let (nw, np) = braid_move(GenKind::X, rank, &w, &params, 0).unwrap();
        assert_eq!(nw.letters(), &[2, 1, 2]);
        assert_eq!(np[0], rex("(b*c)/(a + c)"));
        assert_eq!(np[1], rex("a + c"));
        assert_eq!(np[2], rex("(a*b)/(a + c)"));
        let before = word_product(rank, GenKind::X, &w, &params).unwrap();
        let after = word_product(rank, GenKind::X, &nw, &np).unwrap();
        assert_eq!(before, after);
    }

    #[test]
    fn braid_move_m3_xneg_matches_golden() {
        let rank = r(2);
        let w = word(rank, &[1, 2, 1]);
        let params = [rex("a"), rex("b"), rex("c")];
        let (nw, np) = braid_move(GenKind::XNeg, rank, &w, &params, 0).unwrap();
        assert_eq!(nw.letters(), &[2, 1, 2]);
        assert_eq!(np[0], rex("(b*c)/(a*c + b)"));
        assert_eq!(np[1], rex("a*c"));
        assert_eq!(np[2], rex("(a*c + b)/(c)"));
        let before = word_product(rank, GenKind::XNeg, &w, &params).unwrap();
        let after = word_product(rank, GenKind::XNeg, &nw, &np).unwrap();
        assert_eq!(before, after);
    }

    #[test]
    fn braid_move_m2_swaps() {
        let rank = r(3);
        let w = word(rank, &[1, 3]);
        let params = [rex("a"), rex("b")];
        let (nw, np) = braid_move(GenKind::X, rank, &w, &params, 0).unwrap();
        assert_eq!(nw.letters(), &[3, 1]);
        assert_eq!(np, vec![rex("b"), rex("a")]);
        assert_eq!(
            word_product(rank, GenKind::X, &w, &params).unwrap(),
            word_product(rank, GenKind::X, &nw, &np).unwrap()
        );
    }

    #[test]
    fn braid_move_invalid_pattern() {
        let rank = r(2);
        let w = word(rank, &[1, 2]);
        assert!(matches!(
            braid_move(GenKind::X, rank, &w, &[rex("a"), rex("b")], 0),
            Err(Error::InvalidBraid(0, _))
        ));
    }

    #[test]
    fn twist_golden_sl3() {
        let rank = r(2);
        let w = word(rank, &[2, 1, 2]);
        let u = word_product(rank, GenKind::X, &w, &[rex("a"), rex("b"), rex("c")]).unwrap();
        let (eta, tau) = twist(&u).unwrap();
        let eta_expected = mat(&[
            &["b*c", "0", "0"],
            &["a + c", "(a)/(c)", "0"],
            &["1", "(1)/(c)", "(1)/(a*b)"],
        ]);
        let tau_expected = mat(&[
            &["1", "(1)/(c)", "(1)/(a*b)"],
            &["0", "1", "(a + c)/(a*b)"],
            &["0", "0", "1"],
        ]);
        assert_eq!(eta.mat, eta_expected);
        assert_eq!(tau.mat, tau_expected);
        // u w0 tau(u) = eta(u), exactly.
        assert_eq!(
            u.mul(&w0bar(rank)).unwrap().mul(&tau).unwrap(),
            eta
        );
        // chi(tau(u)) = 1/c + (a+c)/(ab)
        assert_eq!(chi(&tau).unwrap(), rex("(a*b + a*c + c^2)/(a*b*c)"));
        // eta(u) refactors in the lower chart with e = 1/b, f = 1/(ab), g = 1/c.
        let lower = word_product(
            rank,
            GenKind::XNeg,
            &word(rank, &[1, 2, 1]),
            &[rex("(1)/(b)"), rex("(1)/(a*b)"), rex("(1)/(c)")],
        )
        .unwrap();
        assert_eq!(lower, eta);
    }

    #[test]
    fn twist_round_trip() {
        let rank = r(2);
        for letters in [[2usize, 1, 2], [1, 2, 1]] {
            let w = word(rank, &letters);
            let u =
                word_product(rank, GenKind::X, &w, &[rex("a"), rex("b"), rex("c")]).unwrap();
            let (eta, _) = twist(&u).unwrap();
            assert_eq!(twist_inverse(&eta).unwrap(), u);
            let (eta_again, _) = twist(&twist_inverse(&eta).unwrap()).unwrap();
            assert_eq!(eta_again, eta);
        }
    }

    #[test]
    fn monomial_split_gl2() {
        let rank = r(1);
        let w = word(rank, &[1]);
        let (torus, b) = monomial_split(rank, &w, &[rex("a")]).unwrap();
        assert_eq!(b, vec![rex("a")]);
        let alpha = gen(rank, GenKind::AlphaCheck, 1, &rex("a")).unwrap();
        assert_eq!(torus, alpha);
        let lhs = word_product(rank, GenKind::X, &w, &[rex("a")]).unwrap();
        let rhs = torus
            .mul(
                &word_product(rank, GenKind::XNeg, &w, &[rex("a")])
                    .unwrap()
                    .transpose(),
            )
            .unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn monomial_split_identity_on_longest_words() {
        for n in [2usize, 3] {
            let rank = r(n);
            let w = longest_word(rank);
            let params: Vec<RatExpr> = (0..w.len())
                .map(|k| rex(&format!("a{k}")))
                .collect();
            let (torus, b) = monomial_split(rank, &w, &params).unwrap();
            let lhs = word_product(rank, GenKind::X, &w, &params).unwrap();
            let mut rev_b = b.clone();
            rev_b.reverse();
            let rhs = torus
                .mul(
                    &word_product(rank, GenKind::XNeg, &w.reversed(), &rev_b)
                        .unwrap()
                        .transpose(),
                )
                .unwrap();
            assert_eq!(lhs, rhs, "rank {n}");
        }
    }

    #[test]
    fn monomial_split_all_ones_torus_is_identity() {
        let rank = r(2);
        let w = longest_word(rank);
        let ones: Vec<RatExpr> = (0..w.len()).map(|_| RatExpr::one()).collect();
        let (torus, _) = monomial_split(rank, &w, &ones).unwrap();
        assert_eq!(torus, GroupElt::identity(rank));
    }

    #[test]
    fn lex_smallest_longest_word() {
        assert_eq!(longest_word(r(2)).letters(), &[1, 2, 1]);
        assert_eq!(longest_word(r(3)).letters(), &[1, 2, 1, 3, 2, 1]);
        assert_eq!(all_longest_words(r(2)).len(), 2);
        assert_eq!(all_longest_words(r(3)).len(), 16);
    }
}
