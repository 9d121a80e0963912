//! Equivalence maps of rank-metric and matrix codes.
//!
//! Rank-metric maps `[α, L; γ]` act on row vectors as `x -> (α x L)^{σ_p^γ}`;
//! matrix maps `(T?, L, M; γ)` act as `A -> (L A^{T?} M)^{σ_p^γ}`. Both are
//! stored as canonical coset representatives: `L` is scaled so that its first
//! nonzero entry in row-major order is one. Composition `f.then(g)` means
//! "apply `f`, then `g`".

use std::fmt::Debug;
use std::hash::Hash;

use rayon::prelude::*;

use crate::codes::{MatrixCode, RankMetricCode};
use crate::error::{Error, Result};
use crate::expansion::{frobenius_matrix, mult_matrix, semilinear_matrix, OrderedBasis};
use crate::field::{split_top_level, Elem, Tower};
use crate::matrix::{enumerate_gl_filtered, gl_order, normalize_first_nonzero, FieldTag, Mat};

/// Common interface of [`RmMap`] and [`MatMap`].
pub trait EquivMap: Clone + Ord + Hash + Debug + Send + Sync {
    /// `self` followed by `other`.
    fn then(&self, t: &Tower, other: &Self) -> Self;
    fn inverse(&self, t: &Tower) -> Self;
    fn is_identity(&self) -> bool;
    fn format(&self, t: &Tower) -> String;

    /// Least `k >= 1` with `self^k` the identity.
    fn order(&self, t: &Tower) -> u64 {
        let mut cur = self.clone();
        let mut k = 1;
        while !cur.is_identity() {
            cur = cur.then(t, self);
            k += 1;
        }
        k
    }
}

/// `[α, L; γ]`: `x -> (α x L)^{σ_p^γ}` with `γ` modulo `em`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RmMap {
    gamma: u32,
    l: Mat,
    alpha: Elem,
}

impl RmMap {
    pub fn new(t: &Tower, alpha: Elem, l: Mat, gamma: i64) -> Result<RmMap> {
        if alpha.is_zero() || !t.contains(alpha) {
            return Err(Error::BadParams("alpha must be a nonzero field element".into()));
        }
        l.check_base(t)?;
        if !l.is_invertible(t) {
            return Err(Error::Singular);
        }
        Ok(RmMap::canonical(t, alpha, l, gamma))
    }

    pub fn linear(t: &Tower, alpha: Elem, l: Mat) -> Result<RmMap> {
        RmMap::new(t, alpha, l, 0)
    }

    pub fn identity(l: usize) -> RmMap {
        RmMap { gamma: 0, l: Mat::identity(l, FieldTag::Base), alpha: Elem::ONE }
    }

    fn canonical(t: &Tower, alpha: Elem, l: Mat, gamma: i64) -> RmMap {
        let (l, lead) = normalize_first_nonzero(t, &l.with_tag(FieldTag::Base));
        RmMap {
            gamma: gamma.rem_euclid(t.degree() as i64) as u32,
            l,
            alpha: t.mul(alpha, lead),
        }
    }

    pub fn alpha(&self) -> Elem {
        self.alpha
    }
    pub fn l(&self) -> &Mat {
        &self.l
    }
    pub fn gamma(&self) -> u32 {
        self.gamma
    }
    pub fn len(&self) -> usize {
        self.l.rows()
    }
    pub fn is_empty(&self) -> bool {
        self.l.rows() == 0
    }
    pub fn is_linear(&self) -> bool {
        self.gamma == 0
    }

    pub fn apply(&self, t: &Tower, x: &[Elem]) -> Result<Vec<Elem>> {
        let scaled: Vec<Elem> = x.iter().map(|&v| t.mul(self.alpha, v)).collect();
        let y = self.l.left_mul_vec(t, &scaled)?;
        Ok(y.into_iter().map(|v| t.frobenius(v, self.gamma as i64)).collect())
    }

    pub fn apply_code(&self, c: &RankMetricCode) -> Result<RankMetricCode> {
        let t = c.tower();
        let rows = (0..c.dimension())
            .map(|i| self.apply(t, c.generator().row(i)))
            .collect::<Result<Vec<_>>>()?;
        RankMetricCode::new(t.clone(), Mat::from_rows(rows, FieldTag::Top)?)
    }

    /// True when the map sends `c` onto itself.
    pub fn fixes(&self, c: &RankMetricCode) -> bool {
        self.maps_into(c, c)
    }

    /// True when `f(c1) = c2`, given `dim c1 = dim c2`.
    pub fn maps_into(&self, c1: &RankMetricCode, c2: &RankMetricCode) -> bool {
        let t = c1.tower();
        c1.dimension() == c2.dimension()
            && (0..c1.dimension()).all(|i| {
                self.apply(t, c1.generator().row(i))
                    .map(|y| c2.contains(&y))
                    .unwrap_or(false)
            })
    }

    /// Parses `rm[alpha=..; L=row;row; gamma=..]`.
    pub fn parse(t: &Tower, s: &str) -> Result<RmMap> {
        let fields = parse_map_fields(s, "rm")?;
        if fields.transpose {
            return Err(Error::Parse("rank-metric maps have no transpose flag".into()));
        }
        let alpha = t.parse_elem(fields.get("alpha")?)?;
        let l = Mat::parse(t, fields.get("L")?, FieldTag::Base)?;
        let gamma = fields.gamma()?;
        RmMap::new(t, alpha, l, gamma)
    }
}

impl EquivMap for RmMap {
    fn then(&self, t: &Tower, other: &RmMap) -> RmMap {
        let back = -(self.gamma as i64);
        let alpha = t.mul(self.alpha, t.frobenius(other.alpha, back));
        let l = self
            .l
            .mul(t, &other.l.frobenius(t, back))
            .expect("maps act on the same length");
        RmMap::canonical(t, alpha, l, self.gamma as i64 + other.gamma as i64)
    }

    fn inverse(&self, t: &Tower) -> RmMap {
        let g = self.gamma as i64;
        let alpha = t.frobenius(t.inv(self.alpha).expect("alpha is nonzero"), g);
        let l = self.l.inverse(t).expect("L is invertible").frobenius(t, g);
        RmMap::canonical(t, alpha, l, -g)
    }

    fn is_identity(&self) -> bool {
        self.gamma == 0 && self.alpha == Elem::ONE && self.l.is_identity()
    }

    fn format(&self, t: &Tower) -> String {
        format!("rm[alpha={}; L={}; gamma={}]", t.fmt_elem(self.alpha), self.l.format(t), self.gamma)
    }
}

/// `(T?, L, M; γ)`: `A -> (L A^{T?} M)^{σ_p^γ}` with `γ` modulo `e`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MatMap {
    gamma: u32,
    transpose: bool,
    l: Mat,
    m: Mat,
}

impl MatMap {
    pub fn new(t: &Tower, transpose: bool, l: Mat, m: Mat, gamma: i64) -> Result<MatMap> {
        l.check_base(t)?;
        m.check_base(t)?;
        if !l.is_invertible(t) || !m.is_invertible(t) {
            return Err(Error::Singular);
        }
        if transpose && l.rows() != m.rows() {
            return Err(Error::IllegalTranspose);
        }
        Ok(MatMap::canonical(t, transpose, l, m, gamma))
    }

    pub fn linear(t: &Tower, l: Mat, m: Mat) -> Result<MatMap> {
        MatMap::new(t, false, l, m, 0)
    }

    pub fn identity(l: usize, m: usize) -> MatMap {
        MatMap {
            gamma: 0,
            transpose: false,
            l: Mat::identity(l, FieldTag::Base),
            m: Mat::identity(m, FieldTag::Base),
        }
    }

    fn canonical(t: &Tower, transpose: bool, l: Mat, m: Mat, gamma: i64) -> MatMap {
        let (l, lead) = normalize_first_nonzero(t, &l.with_tag(FieldTag::Base));
        let m = m.scale(t, lead).with_tag(FieldTag::Base);
        let transpose = transpose && !(l.rows() == 1 && m.rows() == 1);
        MatMap { gamma: gamma.rem_euclid(t.e() as i64) as u32, transpose, l, m }
    }

    pub fn transpose(&self) -> bool {
        self.transpose
    }
    pub fn l(&self) -> &Mat {
        &self.l
    }
    pub fn m(&self) -> &Mat {
        &self.m
    }
    pub fn gamma(&self) -> u32 {
        self.gamma
    }
    pub fn shape(&self) -> (usize, usize) {
        (self.l.rows(), self.m.rows())
    }
    pub fn is_linear(&self) -> bool {
        self.gamma == 0
    }

    pub fn apply(&self, t: &Tower, a: &Mat) -> Result<Mat> {
        if (a.rows(), a.cols()) != self.shape() {
            return Err(Error::ShapeMismatch(format!(
                "map acts on {}x{} matrices, got {}x{}",
                self.l.rows(),
                self.m.rows(),
                a.rows(),
                a.cols()
            )));
        }
        let a = if self.transpose { a.transpose() } else { a.clone() };
        Ok(self.l.mul(t, &a)?.mul(t, &self.m)?.frobenius(t, self.gamma as i64))
    }

    pub fn apply_code(&self, c: &MatrixCode) -> Result<MatrixCode> {
        let t = c.tower();
        let imgs = c.basis().iter().map(|a| self.apply(t, a)).collect::<Result<Vec<_>>>()?;
        MatrixCode::new(t.clone(), c.l(), c.m(), imgs)
    }

    pub fn fixes(&self, c: &MatrixCode) -> bool {
        self.maps_into(c, c)
    }

    pub fn maps_into(&self, c1: &MatrixCode, c2: &MatrixCode) -> bool {
        let t = c1.tower();
        c1.dimension() == c2.dimension()
            && c1
                .basis()
                .iter()
                .all(|a| self.apply(t, a).map(|b| c2.contains(&b)).unwrap_or(false))
    }

    /// The `lm x lm` matrix `X` with `vec_row(L A^{T?} M) = vec_row(A) X`;
    /// the Frobenius part is not linear and is ignored.
    pub fn vec_matrix(&self, t: &Tower) -> Mat {
        let k = self.l.transpose().kronecker(t, &self.m);
        if !self.transpose {
            return k;
        }
        let n = self.l.rows();
        let mut perm = Mat::zeros(n * n, n * n, FieldTag::Base);
        for i in 0..n {
            for j in 0..n {
                // entry (i,j) of A lands at (j,i) of A^T
                perm.set(i * n + j, j * n + i, Elem::ONE);
            }
        }
        perm.mul(t, &k).expect("square")
    }

    /// Parses `mat[T; L=..; M=..; gamma=..]` (the `T` token is optional).
    pub fn parse(t: &Tower, s: &str) -> Result<MatMap> {
        let fields = parse_map_fields(s, "mat")?;
        let l = Mat::parse(t, fields.get("L")?, FieldTag::Base)?;
        let m = Mat::parse(t, fields.get("M")?, FieldTag::Base)?;
        MatMap::new(t, fields.transpose, l, m, fields.gamma()?)
    }
}

impl EquivMap for MatMap {
    fn then(&self, t: &Tower, other: &MatMap) -> MatMap {
        let back = -(self.gamma as i64);
        let l2 = other.l.frobenius(t, back);
        let m2 = other.m.frobenius(t, back);
        let gamma = self.gamma as i64 + other.gamma as i64;
        if other.transpose {
            let l = l2.mul(t, &self.m.transpose()).expect("l = m");
            let m = self.l.transpose().mul(t, &m2).expect("l = m");
            MatMap::canonical(t, !self.transpose, l, m, gamma)
        } else {
            let l = l2.mul(t, &self.l).expect("same shape");
            let m = self.m.mul(t, &m2).expect("same shape");
            MatMap::canonical(t, self.transpose, l, m, gamma)
        }
    }

    fn inverse(&self, t: &Tower) -> MatMap {
        let g = self.gamma as i64;
        let li = self.l.inverse(t).expect("invertible");
        let mi = self.m.inverse(t).expect("invertible");
        if self.transpose {
            MatMap::canonical(t, true, mi.transpose().frobenius(t, g), li.transpose().frobenius(t, g), -g)
        } else {
            MatMap::canonical(t, false, li.frobenius(t, g), mi.frobenius(t, g), -g)
        }
    }

    fn is_identity(&self) -> bool {
        self.gamma == 0 && !self.transpose && self.l.is_identity() && self.m.is_identity()
    }

    fn format(&self, t: &Tower) -> String {
        format!(
            "mat[{}L={}; M={}; gamma={}]",
            if self.transpose { "T; " } else { "" },
            self.l.format(t),
            self.m.format(t),
            self.gamma
        )
    }
}

struct MapFields {
    transpose: bool,
    entries: Vec<(String, String)>,
}

impl MapFields {
    fn get(&self, key: &str) -> Result<&str> {
        self.entries
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
            .ok_or_else(|| Error::Parse(format!("map lacks `{key}=`")))
    }

    fn gamma(&self) -> Result<i64> {
        match self.get("gamma") {
            Ok(g) => g.trim().parse().map_err(|_| Error::Parse(format!("bad gamma `{g}`"))),
            Err(_) => Ok(0),
        }
    }
}

/// Splits `kind[...]` on `;`; a token with `key=` opens a field, any other
/// token continues the previous field as another matrix row.
fn parse_map_fields(s: &str, kind: &str) -> Result<MapFields> {
    let s = s.trim();
    let inner = s
        .strip_prefix(kind)
        .and_then(|r| r.trim_start().strip_prefix('['))
        .and_then(|r| r.strip_suffix(']'))
        .ok_or_else(|| Error::Parse(format!("expected `{kind}[...]`, got `{s}`")))?;
    let mut out = MapFields { transpose: false, entries: Vec::new() };
    for tok in split_top_level(inner, ';') {
        let tok = tok.trim();
        if tok.is_empty() {
            continue;
        }
        if tok == "T" && out.entries.is_empty() {
            out.transpose = true;
            continue;
        }
        match tok.split_once('=') {
            Some((k, v)) if k.trim().chars().all(|c| c.is_ascii_alphabetic()) => {
                out.entries.push((k.trim().to_string(), v.trim().to_string()));
            }
            _ => {
                let (_, last) = out
                    .entries
                    .last_mut()
                    .ok_or_else(|| Error::Parse(format!("stray token `{tok}`")))?;
                last.push(';');
                last.push_str(tok);
            }
        }
    }
    Ok(out)
}

/// `[α, L; γ]` translated to the matrix map with the same action on
/// expansions: `(Lᵀ, M_α Q^j P_r; r)` for `γ = ej + r`.
pub fn rm_to_mat(t: &Tower, f: &RmMap, b: &OrderedBasis) -> MatMap {
    let e = t.e() as i64;
    let (j, r) = (f.gamma as i64 / e, f.gamma as i64 % e);
    let q = frobenius_matrix(t, b).pow(t, j).expect("square");
    let m = mult_matrix(t, f.alpha, b)
        .mul(t, &q)
        .and_then(|x| x.mul(t, &semilinear_matrix(t, b, r)))
        .expect("m x m");
    MatMap::canonical(t, false, f.l.transpose(), m, r)
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Mode {
    RmLinear,
    RmSemilinear,
    MatLinear,
    MatSemilinear,
}

impl Mode {
    pub fn is_semilinear(self) -> bool {
        matches!(self, Mode::RmSemilinear | Mode::MatSemilinear)
    }
}

impl std::str::FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Mode> {
        match s {
            "rm-linear" => Ok(Mode::RmLinear),
            "rm-semilinear" => Ok(Mode::RmSemilinear),
            "mat-linear" => Ok(Mode::MatLinear),
            "mat-semilinear" => Ok(Mode::MatSemilinear),
            _ => Err(Error::Parse(format!("unknown mode `{s}`"))),
        }
    }
}

/// Size of the equivalence group acting on `F_{q^m}^l` or `F_q^{l x m}`.
pub fn group_order(q: u64, e: u32, l: u32, m: u32, mode: Mode) -> u128 {
    let q128 = q as u128;
    match mode {
        Mode::RmLinear | Mode::RmSemilinear => {
            let base = (q128.pow(m) - 1) * gl_order(q, l) / (q128 - 1);
            if mode == Mode::RmSemilinear {
                base * (e as u128 * m as u128)
            } else {
                base
            }
        }
        Mode::MatLinear | Mode::MatSemilinear => {
            let flip = if l == m && l >= 2 { 2 } else { 1 };
            let base = flip * gl_order(q, l) * gl_order(q, m) / (q128 - 1);
            if mode == Mode::MatSemilinear {
                base * e as u128
            } else {
                base
            }
        }
    }
}

/// Invertible matrices whose first nonzero entry is one: one representative
/// per scalar class.
pub fn canonical_gl(t: &Tower, n: usize) -> Result<Vec<Mat>> {
    enumerate_gl_filtered(t, n, |m| m.data().iter().find(|x| !x.is_zero()) == Some(&Elem::ONE))
}

/// Indexable enumeration of canonical rank-metric maps, ordered by
/// `(γ, L, α)` with `α` running over powers of the generator.
pub struct RmMaps {
    gl: Vec<Mat>,
    gammas: u32,
    nonzero: u32,
}

impl RmMaps {
    pub fn new(t: &Tower, l: usize, semilinear: bool, guard: u128) -> Result<RmMaps> {
        let mode = if semilinear { Mode::RmSemilinear } else { Mode::RmLinear };
        let total = group_order(t.q() as u64, t.e(), l as u32, t.m(), mode);
        if total > guard {
            return Err(Error::TooLarge(format!("{total} rank-metric maps exceed the guard {guard}")));
        }
        Ok(RmMaps {
            gl: canonical_gl(t, l)?,
            gammas: if semilinear { t.degree() } else { 1 },
            nonzero: t.group_order(),
        })
    }

    pub fn len(&self) -> usize {
        self.gl.len() * self.gammas as usize * self.nonzero as usize
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn get(&self, t: &Tower, i: usize) -> RmMap {
        let per_gamma = self.gl.len() * self.nonzero as usize;
        let gamma = (i / per_gamma) as u32;
        let rest = i % per_gamma;
        let l = self.gl[rest / self.nonzero as usize].clone();
        let alpha = t.gen_pow((rest % self.nonzero as usize) as i64);
        RmMap { gamma, l, alpha }
    }
}

/// Indexable enumeration of canonical matrix maps, ordered by
/// `(γ, T, L, M)`.
pub struct MatMaps {
    ls: Vec<Mat>,
    ms: Vec<Mat>,
    flips: usize,
    gammas: u32,
}

impl MatMaps {
    pub fn new(t: &Tower, l: usize, m: usize, semilinear: bool, guard: u128) -> Result<MatMaps> {
        let mode = if semilinear { Mode::MatSemilinear } else { Mode::MatLinear };
        let total = group_order(t.q() as u64, t.e(), l as u32, m as u32, mode);
        if total > guard {
            return Err(Error::TooLarge(format!("{total} matrix maps exceed the guard {guard}")));
        }
        Ok(MatMaps {
            ls: canonical_gl(t, l)?,
            ms: crate::matrix::enumerate_gl(t, m)?,
            flips: if l == m && l >= 2 { 2 } else { 1 },
            gammas: if semilinear { t.e() } else { 1 },
        })
    }

    pub fn len(&self) -> usize {
        self.ls.len() * self.ms.len() * self.flips * self.gammas as usize
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn get(&self, i: usize) -> MatMap {
        let per_flip = self.ls.len() * self.ms.len();
        let per_gamma = per_flip * self.flips;
        let gamma = (i / per_gamma) as u32;
        let rest = i % per_gamma;
        let transpose = rest / per_flip == 1;
        let rest = rest % per_flip;
        MatMap {
            gamma,
            transpose,
            l: self.ls[rest / self.ms.len()].clone(),
            m: self.ms[rest % self.ms.len()].clone(),
        }
    }
}

/// Result of an exhaustive equivalence search.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Equivalence<M> {
    /// The first map, in enumeration order, sending the first code onto the second.
    Equivalent(M),
    /// No map works; `maps_checked` is zero when an invariant already differs.
    NotEquivalent { reason: String, maps_checked: usize },
}

impl<M> Equivalence<M> {
    pub fn witness(&self) -> Option<&M> {
        match self {
            Equivalence::Equivalent(m) => Some(m),
            Equivalence::NotEquivalent { .. } => None,
        }
    }
}

fn not_equivalent<M>(reason: impl Into<String>) -> Result<Equivalence<M>> {
    Ok(Equivalence::NotEquivalent { reason: reason.into(), maps_checked: 0 })
}

pub fn rm_equivalent(
    c1: &RankMetricCode,
    c2: &RankMetricCode,
    semilinear: bool,
    guard: u128,
) -> Result<Equivalence<RmMap>> {
    let t = c1.tower();
    if **t != **c2.tower() {
        return Err(Error::TowerMismatch);
    }
    if c1.length() != c2.length() || c1.dimension() != c2.dimension() {
        return not_equivalent("lengths or dimensions differ");
    }
    let maps = RmMaps::new(t, c1.length(), semilinear, guard)?;
    if c1.size() <= guard && c1.min_rank_distance_with_guard(guard)? != c2.min_rank_distance_with_guard(guard)? {
        return not_equivalent("minimum rank distances differ");
    }
    let hit = (0..maps.len())
        .into_par_iter()
        .find_first(|&i| maps.get(t, i).maps_into(c1, c2));
    Ok(match hit {
        Some(i) => Equivalence::Equivalent(maps.get(t, i)),
        None => Equivalence::NotEquivalent { reason: "exhaustive search".into(), maps_checked: maps.len() },
    })
}

pub fn mat_equivalent(c1: &MatrixCode, c2: &MatrixCode, semilinear: bool, guard: u128) -> Result<Equivalence<MatMap>> {
    let t = c1.tower();
    if **t != **c2.tower() {
        return Err(Error::TowerMismatch);
    }
    if c1.shape() != c2.shape() || c1.dimension() != c2.dimension() {
        return not_equivalent("shapes or dimensions differ");
    }
    let (l, m) = c1.shape();
    let maps = MatMaps::new(t, l, m, semilinear, guard)?;
    if c1.size() <= guard && c1.min_rank_distance_with_guard(guard)? != c2.min_rank_distance_with_guard(guard)? {
        return not_equivalent("minimum rank distances differ");
    }
    let hit = (0..maps.len())
        .into_par_iter()
        .find_first(|&i| maps.get(i).maps_into(c1, c2));
    Ok(match hit {
        Some(i) => Equivalence::Equivalent(maps.get(i)),
        None => Equivalence::NotEquivalent { reason: "exhaustive search".into(), maps_checked: maps.len() },
    })
}

/// Either kind of code, for [`are_equivalent`].
#[derive(Clone, Copy, Debug)]
pub enum CodeRef<'a> {
    Rm(&'a RankMetricCode),
    Mat(&'a MatrixCode),
}

/// Either kind of map.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AnyMap {
    Rm(RmMap),
    Mat(MatMap),
}

impl AnyMap {
    pub fn format(&self, t: &Tower) -> String {
        match self {
            AnyMap::Rm(f) => f.format(t),
            AnyMap::Mat(f) => f.format(t),
        }
    }

    pub fn parse(t: &Tower, s: &str) -> Result<AnyMap> {
        if s.trim_start().starts_with("rm") {
            RmMap::parse(t, s).map(AnyMap::Rm)
        } else {
            MatMap::parse(t, s).map(AnyMap::Mat)
        }
    }
}

fn wrap<M>(e: Equivalence<M>, f: fn(M) -> AnyMap) -> Equivalence<AnyMap> {
    match e {
        Equivalence::Equivalent(m) => Equivalence::Equivalent(f(m)),
        Equivalence::NotEquivalent { reason, maps_checked } => Equivalence::NotEquivalent { reason, maps_checked },
    }
}

/// Dispatches on `mode`; both codes must be of the matching species.
pub fn are_equivalent(c1: CodeRef, c2: CodeRef, mode: Mode, guard: u128) -> Result<Equivalence<AnyMap>> {
    let semi = mode.is_semilinear();
    match (c1, c2, mode) {
        (CodeRef::Rm(a), CodeRef::Rm(b), Mode::RmLinear | Mode::RmSemilinear) => {
            Ok(wrap(rm_equivalent(a, b, semi, guard)?, AnyMap::Rm))
        }
        (CodeRef::Mat(a), CodeRef::Mat(b), Mode::MatLinear | Mode::MatSemilinear) => {
            Ok(wrap(mat_equivalent(a, b, semi, guard)?, AnyMap::Mat))
        }
        _ => Err(Error::Unsupported("mode does not match the code species".into())),
    }
}
