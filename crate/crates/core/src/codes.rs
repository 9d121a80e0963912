//! Linear rank-metric codes over `F_{q^m}`, Gabidulin codes, and `F_q`-linear
//! matrix codes, with exhaustive minimum-distance computation and the
//! expansion of one kind into the other.

use std::fmt::Write as _;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::expansion::{compress, expand, IndependentTuple, OrderedBasis};
use crate::field::{Elem, Tower};
use crate::matrix::{FieldTag, Mat};

/// Default bound on the number of codewords an exhaustive routine will visit.
pub const DEFAULT_GUARD: u128 = 1 << 20;

/// `F_{q^m}`-linear code of length `l`, stored by a full-rank generator matrix.
#[derive(Clone, Debug)]
pub struct RankMetricCode {
    tower: Arc<Tower>,
    gen: Mat,
    checker: Mat,
}

impl RankMetricCode {
    pub fn new(tower: Arc<Tower>, gen: Mat) -> Result<RankMetricCode> {
        if gen.rows() == 0 || gen.cols() == 0 {
            return Err(Error::CodeParams("empty generator matrix".into()));
        }
        if gen.data().iter().any(|&x| !tower.contains(x)) {
            return Err(Error::TowerMismatch);
        }
        if gen.rank(&tower) != gen.rows() {
            return Err(Error::RankDeficient);
        }
        let gen = gen.with_tag(FieldTag::Top);
        let checker = gen.null_space(&tower);
        Ok(RankMetricCode { tower, gen, checker })
    }

    /// Code spanned by arbitrary rows; the stored generator is their RREF basis.
    pub fn from_spanning(tower: Arc<Tower>, rows: &Mat) -> Result<RankMetricCode> {
        let basis = rows.row_basis(&tower);
        RankMetricCode::new(tower, basis)
    }

    pub fn tower(&self) -> &Arc<Tower> {
        &self.tower
    }
    pub fn length(&self) -> usize {
        self.gen.cols()
    }
    pub fn dimension(&self) -> usize {
        self.gen.rows()
    }
    pub fn generator(&self) -> &Mat {
        &self.gen
    }
    /// Rows span the dual code; `v` is a codeword iff `H v^T = 0`.
    pub fn checker(&self) -> &Mat {
        &self.checker
    }

    /// `(q^m)^k`, saturating.
    pub fn size(&self) -> u128 {
        (self.tower.size() as u128).saturating_pow(self.dimension() as u32)
    }

    pub fn contains(&self, v: &[Elem]) -> bool {
        v.len() == self.length()
            && v.iter().all(|&x| self.tower.contains(x))
            && self
                .checker
                .mul_vec(&self.tower, v)
                .map(|s| s.iter().all(|x| x.is_zero()))
                .unwrap_or(false)
    }

    /// Equality of codeword sets.
    pub fn same_code(&self, other: &RankMetricCode) -> bool {
        self.length() == other.length()
            && self.dimension() == other.dimension()
            && (0..other.dimension()).all(|i| self.contains(other.gen.row(i)))
    }

    /// Every codeword, ranging over messages in `F_{q^m}^k`.
    pub fn codewords(&self, guard: u128) -> Result<impl Iterator<Item = Vec<Elem>> + '_> {
        if self.size() > guard {
            return Err(Error::TooLarge(format!("code has {} codewords", self.size())));
        }
        let coeffs: Vec<Elem> = self.tower.elements().collect();
        let t = &self.tower;
        Ok(Combinations::new(coeffs, self.dimension()).map(move |msg| {
            self.gen.left_mul_vec(t, &msg).expect("message length matches")
        }))
    }

    pub fn min_rank_distance(&self) -> Result<usize> {
        self.min_rank_distance_with_guard(DEFAULT_GUARD)
    }

    pub fn min_rank_distance_with_guard(&self, guard: u128) -> Result<usize> {
        let b = OrderedBasis::power(&self.tower);
        let t = &self.tower;
        self.codewords(guard)?
            .filter(|c| c.iter().any(|x| !x.is_zero()))
            .map(|c| rank_weight(t, &c, &b))
            .min()
            .ok_or_else(|| Error::CodeParams("code has no nonzero codeword".into()))
    }
}

/// `C_{k,g}`: generator rows `g^{[0]}, ..., g^{[k-1]}` with `g^{[j]} = g^{q^j}`.
#[derive(Clone, Debug)]
pub struct GabidulinCode {
    code: RankMetricCode,
    g: IndependentTuple,
    k: usize,
}

pub fn gabidulin(tower: Arc<Tower>, k: usize, g: IndependentTuple) -> Result<GabidulinCode> {
    let l = g.len();
    if k == 0 || k > l || l >= tower.m() as usize {
        return Err(Error::BadParams(format!(
            "Gabidulin codes need 1 <= k <= l < m, got k={k}, l={l}, m={}",
            tower.m()
        )));
    }
    let gen = frobenius_rows(&tower, g.elems(), 0, k as i64);
    let code = RankMetricCode::new(tower, gen)?;
    Ok(GabidulinCode { code, g, k })
}

/// Rows `x^{[j]}` for `from <= j < to`.
fn frobenius_rows(t: &Tower, x: &[Elem], from: i64, to: i64) -> Mat {
    let rows = (from..to)
        .map(|j| x.iter().map(|&xi| t.frobenius_q(xi, j)).collect())
        .collect();
    Mat::from_rows(rows, FieldTag::Top).expect("equal row lengths")
}

impl GabidulinCode {
    pub fn code(&self) -> &RankMetricCode {
        &self.code
    }
    pub fn tower(&self) -> &Arc<Tower> {
        self.code.tower()
    }
    pub fn g(&self) -> &IndependentTuple {
        &self.g
    }
    pub fn k(&self) -> usize {
        self.k
    }
    pub fn length(&self) -> usize {
        self.g.len()
    }
    /// Designed minimum distance `l - k + 1`.
    pub fn designed_distance(&self) -> usize {
        self.length() - self.k + 1
    }

    /// The dual code in Gabidulin form: `H` has rows `h^{[j]}`, `0 <= j < l - k`.
    ///
    /// `h` spans the one-dimensional solution space of
    /// `sum_i g_i^{[j]} h_i = 0` for `-(l-k-1) <= j <= k-1`, scaled so its
    /// first nonzero entry is one.
    pub fn parity_check(&self) -> Mat {
        let t = self.tower();
        let (l, k) = (self.length() as i64, self.k as i64);
        if l == k {
            return Mat::zeros(0, l as usize, FieldTag::Top);
        }
        let system = frobenius_rows(t, self.g.elems(), -(l - k - 1), k);
        let kernel = system.null_space(t);
        debug_assert_eq!(kernel.rows(), 1);
        let (h, _) = crate::matrix::normalize_first_nonzero(t, &kernel);
        frobenius_rows(t, h.row(0), 0, l - k)
    }

    /// The `h` vector of [`GabidulinCode::parity_check`].
    pub fn parity_vector(&self) -> Option<Vec<Elem>> {
        let h = self.parity_check();
        (h.rows() > 0).then(|| h.row(0).to_vec())
    }
}

/// `F_q`-linear space of `l x m` matrices, stored by a basis and its RREF.
#[derive(Clone, Debug)]
pub struct MatrixCode {
    tower: Arc<Tower>,
    l: usize,
    m: usize,
    basis: Vec<Mat>,
    checker: Mat,
}

impl MatrixCode {
    pub fn new(tower: Arc<Tower>, l: usize, m: usize, basis: Vec<Mat>) -> Result<MatrixCode> {
        let stacked = stack_vec_rows(&tower, l, m, &basis)?;
        if stacked.rank(&tower) != basis.len() {
            return Err(Error::RankDeficient);
        }
        let checker = stacked.null_space(&tower);
        Ok(MatrixCode { tower, l, m, basis, checker })
    }

    /// The span of `mats`; the stored basis is the RREF of their vec-rows.
    pub fn from_spanning(tower: Arc<Tower>, l: usize, m: usize, mats: &[Mat]) -> Result<MatrixCode> {
        let stacked = stack_vec_rows(&tower, l, m, mats)?;
        let rb = stacked.row_basis(&tower);
        let basis = (0..rb.rows())
            .map(|i| Mat::from_vec_row(l, m, FieldTag::Base, rb.row(i)))
            .collect::<Result<Vec<_>>>()?;
        MatrixCode::new(tower, l, m, basis)
    }

    pub fn tower(&self) -> &Arc<Tower> {
        &self.tower
    }
    pub fn shape(&self) -> (usize, usize) {
        (self.l, self.m)
    }
    pub fn l(&self) -> usize {
        self.l
    }
    pub fn m(&self) -> usize {
        self.m
    }
    pub fn basis(&self) -> &[Mat] {
        &self.basis
    }
    pub fn dimension(&self) -> usize {
        self.basis.len()
    }
    /// `q^{k'}`, saturating.
    pub fn size(&self) -> u128 {
        (self.tower.q() as u128).saturating_pow(self.dimension() as u32)
    }

    pub fn contains(&self, a: &Mat) -> bool {
        a.rows() == self.l
            && a.cols() == self.m
            && a.check_base(&self.tower).is_ok()
            && self
                .checker
                .mul_vec(&self.tower, a.data())
                .map(|s| s.iter().all(|x| x.is_zero()))
                .unwrap_or(false)
    }

    pub fn same_code(&self, other: &MatrixCode) -> bool {
        self.shape() == other.shape()
            && self.dimension() == other.dimension()
            && other.basis.iter().all(|b| self.contains(b))
    }

    pub fn codewords(&self, guard: u128) -> Result<impl Iterator<Item = Mat> + '_> {
        if self.size() > guard {
            return Err(Error::TooLarge(format!("code has {} codewords", self.size())));
        }
        let t = &self.tower;
        let coeffs = t.base_field().to_vec();
        Ok(Combinations::new(coeffs, self.dimension()).map(move |c| {
            let mut acc = Mat::zeros(self.l, self.m, FieldTag::Base);
            for (&a, b) in c.iter().zip(&self.basis) {
                if !a.is_zero() {
                    acc = acc.add(t, &b.scale(t, a)).expect("same shape");
                }
            }
            acc
        }))
    }

    pub fn min_rank_distance(&self) -> Result<usize> {
        self.min_rank_distance_with_guard(DEFAULT_GUARD)
    }

    pub fn min_rank_distance_with_guard(&self, guard: u128) -> Result<usize> {
        let t = &self.tower;
        self.codewords(guard)?
            .filter(|c| !c.is_zero())
            .map(|c| c.rank(t))
            .min()
            .ok_or_else(|| Error::CodeParams("code has no nonzero codeword".into()))
    }
}

fn stack_vec_rows(t: &Tower, l: usize, m: usize, mats: &[Mat]) -> Result<Mat> {
    let mut data = Vec::with_capacity(mats.len() * l * m);
    for a in mats {
        if a.rows() != l || a.cols() != m {
            return Err(Error::ShapeMismatch(format!(
                "expected {l}x{m} matrices, got {}x{}",
                a.rows(),
                a.cols()
            )));
        }
        a.check_base(t)?;
        data.extend(a.vec_row());
    }
    Mat::from_vec(mats.len(), l * m, FieldTag::Base, data)
}

/// `rank ε_b(x)`, the dimension of the `F_q`-span of the entries of `x`.
pub fn rank_weight(t: &Tower, x: &[Elem], b: &OrderedBasis) -> usize {
    if x.iter().all(|v| v.is_zero()) {
        return 0;
    }
    expand(t, x, b).rank(t)
}

pub fn rank_distance(t: &Tower, x: &[Elem], y: &[Elem], b: &OrderedBasis) -> usize {
    let diff: Vec<Elem> = x.iter().zip(y).map(|(&a, &c)| t.sub(a, c)).collect();
    rank_weight(t, &diff, b)
}

/// `ε_b(C)`: expansions of the `F_q`-basis `{b_j * row_i}` of `C`.
pub fn expand_code(c: &RankMetricCode, b: &OrderedBasis) -> MatrixCode {
    let t = c.tower();
    let mut mats = Vec::with_capacity(c.dimension() * b.len());
    for i in 0..c.dimension() {
        for &bj in b.elems() {
            let v: Vec<Elem> = c.generator().row(i).iter().map(|&x| t.mul(bj, x)).collect();
            mats.push(expand(t, &v, b));
        }
    }
    MatrixCode::from_spanning(t.clone(), c.length(), b.len(), &mats)
        .expect("expansions of a code basis have a consistent shape")
}

/// Compressions of the basis matrices of `mc`, one vector per basis element.
pub fn compress_basis(mc: &MatrixCode, b: &OrderedBasis) -> Result<Mat> {
    let t = mc.tower();
    if b.len() != mc.m() {
        return Err(Error::ShapeMismatch("basis length differs from m".into()));
    }
    let rows = mc
        .basis()
        .iter()
        .map(|a| compress(t, a, b))
        .collect::<Result<Vec<_>>>()?;
    if rows.is_empty() {
        return Ok(Mat::zeros(0, mc.l(), FieldTag::Top));
    }
    Mat::from_rows(rows, FieldTag::Top)
}

/// `|span_{F_{q^m}} ε_b^{-1}(mc)|`, saturating.
pub fn extension_span_size(mc: &MatrixCode, b: &OrderedBasis) -> Result<u128> {
    let t = mc.tower();
    let r = compress_basis(mc, b)?.rank(t);
    Ok((t.size() as u128).saturating_pow(r as u32))
}

/// True iff the compressed code is closed under `F_{q^m}` scalars.
pub fn is_extension_linear(mc: &MatrixCode, b: &OrderedBasis) -> Result<bool> {
    Ok(extension_span_size(mc, b)? == mc.size())
}

/// `ε_b^{-1}(mc)` as a rank-metric code, when it is `F_{q^m}`-linear.
pub fn compress_code(mc: &MatrixCode, b: &OrderedBasis) -> Result<RankMetricCode> {
    if !is_extension_linear(mc, b)? {
        return Err(Error::NotLinear);
    }
    RankMetricCode::from_spanning(mc.tower().clone(), &compress_basis(mc, b)?)
}

/// Odometer over `coeffs^len`, first position most significant.
pub(crate) struct Combinations {
    coeffs: Vec<Elem>,
    idx: Vec<usize>,
    done: bool,
}

impl Combinations {
    pub(crate) fn new(coeffs: Vec<Elem>, len: usize) -> Combinations {
        let done = coeffs.is_empty();
        Combinations { coeffs, idx: vec![0; len], done }
    }
}

impl Iterator for Combinations {
    type Item = Vec<Elem>;

    fn next(&mut self) -> Option<Vec<Elem>> {
        if self.done {
            return None;
        }
        let out = self.idx.iter().map(|&i| self.coeffs[i]).collect();
        let mut pos = self.idx.len();
        loop {
            if pos == 0 {
                self.done = true;
                break;
            }
            pos -= 1;
            self.idx[pos] += 1;
            if self.idx[pos] < self.coeffs.len() {
                break;
            }
            self.idx[pos] = 0;
        }
        Some(out)
    }
}

/// A code together with the tower it lives in, as read from or written to
/// the text code-file format.
#[derive(Clone, Debug)]
pub enum CodeFile {
    RankMetric(RankMetricCode),
    Gabidulin(GabidulinCode),
    Matrix(MatrixCode),
}

impl CodeFile {
    pub fn tower(&self) -> &Arc<Tower> {
        match self {
            CodeFile::RankMetric(c) => c.tower(),
            CodeFile::Gabidulin(c) => c.tower(),
            CodeFile::Matrix(c) => c.tower(),
        }
    }

    /// The underlying rank-metric code, if any.
    pub fn rank_metric(&self) -> Option<&RankMetricCode> {
        match self {
            CodeFile::RankMetric(c) => Some(c),
            CodeFile::Gabidulin(c) => Some(c.code()),
            CodeFile::Matrix(_) => None,
        }
    }

    /// Header, field spec, shape line, then rows:
    ///
    /// ```text
    /// gabidulin
    /// gf(2,1,4;modulus=[1,1,0,0,1])
    /// l=2,m=4,k=1
    /// 1,g^5
    /// ```
    ///
    /// Rank-metric files list `k` generator rows, Gabidulin files the single
    /// vector `g`, matrix files one basis matrix per line.
    pub fn to_text(&self) -> String {
        let t = self.tower();
        let mut s = String::new();
        match self {
            CodeFile::RankMetric(c) => {
                let _ = writeln!(s, "rankmetric\n{t}\nl={},m={},k={}", c.length(), t.m(), c.dimension());
                for i in 0..c.dimension() {
                    let _ = writeln!(s, "{}", t.fmt_vector(c.generator().row(i)));
                }
            }
            CodeFile::Gabidulin(c) => {
                let _ = writeln!(s, "gabidulin\n{t}\nl={},m={},k={}", c.length(), t.m(), c.k());
                let _ = writeln!(s, "{}", t.fmt_vector(c.g().elems()));
            }
            CodeFile::Matrix(c) => {
                let _ = writeln!(s, "matrix\n{t}\nl={},m={},k={}", c.l(), c.m(), c.dimension());
                for a in c.basis() {
                    let _ = writeln!(s, "{}", a.format(t));
                }
            }
        }
        s
    }

    pub fn parse(text: &str) -> Result<CodeFile> {
        let mut lines = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'));
        let header = lines.next().ok_or_else(|| Error::Parse("empty code file".into()))?;
        let tower: Tower = lines
            .next()
            .ok_or_else(|| Error::Parse("missing field spec line".into()))?
            .parse()?;
        let tower = Arc::new(tower);
        let shape = parse_shape(lines.next().ok_or_else(|| Error::Parse("missing shape line".into()))?)?;
        let get = |key: &str| {
            shape
                .iter()
                .find(|(k, _)| k == key)
                .map(|&(_, v)| v)
                .ok_or_else(|| Error::Parse(format!("shape line lacks `{key}`")))
        };
        let (l, m, k) = (get("l")?, get("m")?, get("k")?);
        if m != tower.m() as usize {
            return Err(Error::Parse(format!("shape says m={m} but the field has m={}", tower.m())));
        }
        let rows: Vec<&str> = lines.collect();
        match header {
            "rankmetric" => {
                let vecs = rows
                    .iter()
                    .map(|r| tower.parse_vector(r))
                    .collect::<Result<Vec<_>>>()?;
                if vecs.len() != k || vecs.iter().any(|v| v.len() != l) {
                    return Err(Error::Parse(format!("expected {k} rows of length {l}")));
                }
                let gen = Mat::from_rows(vecs, FieldTag::Top)?;
                Ok(CodeFile::RankMetric(RankMetricCode::new(tower, gen)?))
            }
            "gabidulin" => {
                let [row] = rows.as_slice() else {
                    return Err(Error::Parse("gabidulin files hold exactly one vector g".into()));
                };
                let g = tower.parse_vector(row)?;
                if g.len() != l {
                    return Err(Error::Parse(format!("g has length {} but l={l}", g.len())));
                }
                let g = IndependentTuple::new(&tower, g)?;
                Ok(CodeFile::Gabidulin(gabidulin(tower, k, g)?))
            }
            "matrix" => {
                let mats = rows
                    .iter()
                    .map(|r| Mat::parse(&tower, r, FieldTag::Base))
                    .collect::<Result<Vec<_>>>()?;
                if mats.len() != k {
                    return Err(Error::Parse(format!("expected {k} basis matrices, found {}", mats.len())));
                }
                Ok(CodeFile::Matrix(MatrixCode::new(tower, l, m, mats)?))
            }
            other => Err(Error::Parse(format!("unknown code kind `{other}`"))),
        }
    }
}

pub(crate) fn parse_shape(line: &str) -> Result<Vec<(String, usize)>> {
    line.split(',')
        .map(|kv| {
            let (k, v) = kv
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("bad shape entry `{kv}`")))?;
            let v = v
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad number in `{kv}`")))?;
            Ok((k.trim().to_string(), v))
        })
        .collect()
}
