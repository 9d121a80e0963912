//! Constant-dimension subspace codes over `F_q` and the lifting of matrix
//! codes: a codeword `A` becomes the row space of the `l x (l+m)` matrix that
//! carries `I_l` in the pivot columns and the columns of `A` elsewhere.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::sync::Arc;

use crate::codes::{parse_shape, MatrixCode};
use crate::error::{Error, Result};
use crate::field::Tower;
use crate::matrix::{FieldTag, Mat};

/// A subspace of `F_q^n`, stored as its unique RREF basis.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Subspace {
    basis: Mat,
    pivots: Vec<usize>,
}

impl Subspace {
    /// Row space of `gens`.
    pub fn new(t: &Tower, gens: &Mat) -> Subspace {
        let r = gens.rref(t);
        let basis = gens.row_basis(t).with_tag(FieldTag::Base);
        Subspace { basis, pivots: r.pivots }
    }

    pub fn ambient(&self) -> usize {
        self.basis.cols()
    }
    pub fn dim(&self) -> usize {
        self.basis.rows()
    }
    /// RREF basis, one row per dimension.
    pub fn matrix(&self) -> &Mat {
        &self.basis
    }
    /// 1-based pivot columns of the RREF basis.
    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }
}

/// `d_S(U, V) = 2 dim(U + V) - dim U - dim V`.
pub fn subspace_distance(t: &Tower, u: &Subspace, v: &Subspace) -> Result<usize> {
    if u.ambient() != v.ambient() {
        return Err(Error::AmbientMismatch);
    }
    let sum = u.basis.vstack(&v.basis)?.rank(t);
    Ok(2 * sum - u.dim() - v.dim())
}

/// A set of `l`-dimensional subspaces of `F_q^n`, kept sorted.
#[derive(Clone, Debug)]
pub struct SubspaceCode {
    tower: Arc<Tower>,
    n: usize,
    l: usize,
    words: Vec<Subspace>,
}

impl SubspaceCode {
    pub fn new(tower: Arc<Tower>, n: usize, l: usize, mut words: Vec<Subspace>) -> Result<SubspaceCode> {
        for w in &words {
            if w.ambient() != n {
                return Err(Error::AmbientMismatch);
            }
            if w.dim() != l {
                return Err(Error::NotConstantDimension);
            }
        }
        words.sort();
        words.dedup();
        Ok(SubspaceCode { tower, n, l, words })
    }

    pub fn tower(&self) -> &Arc<Tower> {
        &self.tower
    }
    pub fn ambient(&self) -> usize {
        self.n
    }
    pub fn word_dim(&self) -> usize {
        self.l
    }
    pub fn words(&self) -> &[Subspace] {
        &self.words
    }
    pub fn len(&self) -> usize {
        self.words.len()
    }
    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    /// Minimum subspace distance; `None` with fewer than two words.
    pub fn min_distance(&self) -> Result<Option<usize>> {
        let mut best = None;
        for (i, u) in self.words.iter().enumerate() {
            for v in &self.words[i + 1..] {
                let d = subspace_distance(&self.tower, u, v)?;
                best = Some(best.map_or(d, |b: usize| b.min(d)));
            }
        }
        Ok(best)
    }

    /// Multiset of `d_S` over unordered pairs of distinct words.
    pub fn distance_multiset(&self) -> Result<BTreeMap<usize, usize>> {
        let mut out = BTreeMap::new();
        for (i, u) in self.words.iter().enumerate() {
            for v in &self.words[i + 1..] {
                *out.entry(subspace_distance(&self.tower, u, v)?).or_insert(0) += 1;
            }
        }
        Ok(out)
    }

    /// `subspace`, the field spec, `n=..,l=..`, then one RREF basis per line.
    pub fn to_text(&self) -> String {
        let t = &self.tower;
        let mut s = String::new();
        let _ = writeln!(s, "subspace\n{t}\nn={},l={}", self.n, self.l);
        for w in &self.words {
            let _ = writeln!(s, "{}", w.matrix().format(t));
        }
        s
    }

    pub fn parse(text: &str) -> Result<SubspaceCode> {
        let mut lines = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'));
        if lines.next() != Some("subspace") {
            return Err(Error::Parse("subspace files start with `subspace`".into()));
        }
        let tower: Tower = lines
            .next()
            .ok_or_else(|| Error::Parse("missing field spec line".into()))?
            .parse()?;
        let shape = parse_shape(lines.next().ok_or_else(|| Error::Parse("missing shape line".into()))?)?;
        let get = |key: &str| {
            shape
                .iter()
                .find(|(k, _)| k == key)
                .map(|&(_, v)| v)
                .ok_or_else(|| Error::Parse(format!("shape line lacks `{key}`")))
        };
        let (n, l) = (get("n")?, get("l")?);
        let words = lines
            .map(|r| Mat::parse(&tower, r, FieldTag::Base).map(|m| Subspace::new(&tower, &m)))
            .collect::<Result<Vec<_>>>()?;
        SubspaceCode::new(Arc::new(tower), n, l, words)
    }
}

fn check_pivots(pivots: &[usize], l: usize, n: usize) -> Result<()> {
    if pivots.len() != l {
        return Err(Error::BadPivots(format!("need {l} pivots, got {}", pivots.len())));
    }
    if pivots.iter().any(|&p| p == 0 || p > n) {
        return Err(Error::BadPivots(format!("pivots must lie in 1..={n}")));
    }
    if pivots.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::BadPivots("pivots must be strictly increasing".into()));
    }
    Ok(())
}

/// The `l x (l+m)` matrix with `I_l` in the (1-based) pivot columns and the
/// columns of `a` in the remaining positions, in order.
pub fn lift_matrix(a: &Mat, pivots: &[usize]) -> Result<Mat> {
    let (l, m) = (a.rows(), a.cols());
    let n = l + m;
    check_pivots(pivots, l, n)?;
    let mut out = Mat::zeros(l, n, FieldTag::Base);
    let mut next_pivot = 0;
    let mut next_col = 0;
    for c in 0..n {
        if next_pivot < l && pivots[next_pivot] == c + 1 {
            out.set(next_pivot, c, crate::field::Elem::ONE);
            next_pivot += 1;
        } else {
            for r in 0..l {
                out.set(r, c, a.get(r, next_col));
            }
            next_col += 1;
        }
    }
    Ok(out)
}

pub fn lift_word(t: &Tower, a: &Mat, pivots: &[usize]) -> Result<Subspace> {
    Ok(Subspace::new(t, &lift_matrix(a, pivots)?))
}

/// Lifts every codeword of `mc`.
pub fn lift(mc: &MatrixCode, pivots: &[usize], guard: u128) -> Result<SubspaceCode> {
    let t = mc.tower();
    let (l, m) = mc.shape();
    check_pivots(pivots, l, l + m)?;
    let words = mc
        .codewords(guard)?
        .map(|a| lift_word(t, &a, pivots))
        .collect::<Result<Vec<_>>>()?;
    SubspaceCode::new(t.clone(), l + m, l, words)
}

/// Auxiliary matrix of `u` relative to the given pivots: `G^{-1} B` restricted
/// to the non-pivot columns, where `B` is the basis of `u` and `G` its pivot
/// columns.
pub fn auxiliary_at(t: &Tower, u: &Subspace, pivots: &[usize]) -> Result<Mat> {
    let (l, n) = (u.dim(), u.ambient());
    check_pivots(pivots, l, n)?;
    let b = u.matrix();
    let mut g = Mat::zeros(l, l, FieldTag::Base);
    let mut rest = Mat::zeros(l, n - l, FieldTag::Base);
    let (mut gi, mut ri) = (0, 0);
    for c in 0..n {
        if gi < l && pivots[gi] == c + 1 {
            for r in 0..l {
                g.set(r, gi, b.get(r, c));
            }
            gi += 1;
        } else {
            for r in 0..l {
                rest.set(r, ri, b.get(r, c));
            }
            ri += 1;
        }
    }
    let ginv = g
        .inverse(t)
        .map_err(|_| Error::BadPivots(format!("word is not a lift at pivots {pivots:?}")))?;
    Ok(ginv.mul(t, &rest)?.with_tag(FieldTag::Base))
}

fn matrix_code_from_aux(sc: &SubspaceCode, aux: Vec<Mat>) -> Result<MatrixCode> {
    let (l, m) = (sc.l, sc.n - sc.l);
    let mc = MatrixCode::from_spanning(sc.tower.clone(), l, m, &aux)?;
    if mc.size() != aux.len() as u128 {
        return Err(Error::NotLinear);
    }
    Ok(mc)
}

/// Recovers the pivot set shared by every word (RREF pivots) and the matrix
/// code of auxiliary matrices.
pub fn unlift(sc: &SubspaceCode) -> Result<(Vec<usize>, MatrixCode)> {
    let Some(first) = sc.words.first() else {
        return Err(Error::CodeParams("empty subspace code".into()));
    };
    let pivots = first.pivots().to_vec();
    if sc.words.iter().any(|w| w.pivots() != pivots.as_slice()) {
        return Err(Error::MixedPivots);
    }
    let mc = unlift_at(sc, &pivots)?;
    Ok((pivots, mc))
}

/// Inverse of [`lift`] for a known pivot set, which need not match the RREF
/// pivots of the words.
pub fn unlift_at(sc: &SubspaceCode, pivots: &[usize]) -> Result<MatrixCode> {
    let aux = sc
        .words
        .iter()
        .map(|w| auxiliary_at(&sc.tower, w, pivots))
        .collect::<Result<Vec<_>>>()?;
    matrix_code_from_aux(sc, aux)
}

/// Outcome of checking `d_S(lift A, lift B) = 2 d_R(A, B)` over all pairs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DistanceLawReport {
    pub pairs: usize,
    pub violations: usize,
    pub d_s_min: Option<usize>,
    pub d_r_min: Option<usize>,
}

impl DistanceLawReport {
    pub fn holds(&self) -> bool {
        self.violations == 0 && self.d_s_min == self.d_r_min.map(|d| 2 * d)
    }
}

pub fn verify_distance_law(mc: &MatrixCode, pivots: &[usize], guard: u128) -> Result<DistanceLawReport> {
    let t = mc.tower();
    let words: Vec<Mat> = mc.codewords(guard)?.collect();
    let lifted = words
        .iter()
        .map(|a| lift_word(t, a, pivots))
        .collect::<Result<Vec<_>>>()?;
    let mut report = DistanceLawReport { pairs: 0, violations: 0, d_s_min: None, d_r_min: None };
    for i in 0..words.len() {
        for j in i + 1..words.len() {
            let dr = words[i].sub(t, &words[j])?.rank(t);
            let ds = subspace_distance(t, &lifted[i], &lifted[j])?;
            report.pairs += 1;
            if ds != 2 * dr {
                report.violations += 1;
            }
            report.d_r_min = Some(report.d_r_min.map_or(dr, |d| d.min(dr)));
            report.d_s_min = Some(report.d_s_min.map_or(ds, |d| d.min(ds)));
        }
    }
    Ok(report)
}
