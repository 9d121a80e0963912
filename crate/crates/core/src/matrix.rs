//! Dense matrices over a tower's base field `F_q` or top field `F_{q^m}`.
//!
//! Entries are always stored as top-field [`Elem`]s; the [`FieldTag`] records
//! which field the entries are meant to live in and is checked at parse time.

use std::collections::HashSet;
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::field::{split_top_level, Elem, Tower};

#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum FieldTag {
    /// Entries in `F_q`.
    Base,
    /// Entries in `F_{q^m}`.
    Top,
}

impl FieldTag {
    fn join(self, other: FieldTag) -> FieldTag {
        if self == FieldTag::Base && other == FieldTag::Base {
            FieldTag::Base
        } else {
            FieldTag::Top
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Mat {
    rows: usize,
    cols: usize,
    tag: FieldTag,
    data: Vec<Elem>,
}

/// Reduced row echelon form with the rank and 1-based pivot columns.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RrefResult {
    pub matrix: Mat,
    pub rank: usize,
    pub pivots: Vec<usize>,
}

impl Mat {
    pub fn zeros(rows: usize, cols: usize, tag: FieldTag) -> Mat {
        Mat { rows, cols, tag, data: vec![Elem::ZERO; rows * cols] }
    }

    pub fn identity(n: usize, tag: FieldTag) -> Mat {
        let mut out = Mat::zeros(n, n, tag);
        for i in 0..n {
            out.set(i, i, Elem::ONE);
        }
        out
    }

    pub fn from_vec(rows: usize, cols: usize, tag: FieldTag, data: Vec<Elem>) -> Result<Mat> {
        if data.len() != rows * cols {
            return Err(Error::ShapeMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(Mat { rows, cols, tag, data })
    }

    pub fn from_rows(rows: Vec<Vec<Elem>>, tag: FieldTag) -> Result<Mat> {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::ShapeMismatch("ragged rows".into()));
        }
        Ok(Mat { rows: r, cols: c, tag, data: rows.into_iter().flatten().collect() })
    }

    /// Builds a base-field matrix from prime-field integers.
    pub fn from_ints(t: &Tower, rows: &[&[i64]]) -> Mat {
        let data: Vec<Vec<Elem>> = rows
            .iter()
            .map(|r| r.iter().map(|&c| t.constant(c)).collect())
            .collect();
        Mat::from_rows(data, FieldTag::Base).expect("rectangular literal")
    }

    pub fn rows(&self) -> usize {
        self.rows
    }
    pub fn cols(&self) -> usize {
        self.cols
    }
    pub fn tag(&self) -> FieldTag {
        self.tag
    }
    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }
    pub fn data(&self) -> &[Elem] {
        &self.data
    }

    pub fn with_tag(mut self, tag: FieldTag) -> Mat {
        self.tag = tag;
        self
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Elem {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, x: Elem) {
        self.data[i * self.cols + j] = x;
    }

    pub fn row(&self, i: usize) -> &[Elem] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vec<Elem>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn column(&self, j: usize) -> Vec<Elem> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| (0..self.cols).all(|j| self.get(i, j) == Elem((i == j) as u32)))
    }

    /// Fails with `NotInBaseField` unless every entry lies in `F_q`.
    pub fn check_base(&self, t: &Tower) -> Result<()> {
        if self.data.iter().all(|&x| t.in_base_field(x)) {
            Ok(())
        } else {
            Err(Error::NotInBaseField)
        }
    }

    pub fn transpose(&self) -> Mat {
        let mut out = Mat::zeros(self.cols, self.rows, self.tag);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j));
            }
        }
        out
    }

    pub fn mul(&self, t: &Tower, other: &Mat) -> Result<Mat> {
        if self.cols != other.rows {
            return Err(Error::ShapeMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Mat::zeros(self.rows, other.cols, self.tag.join(other.tag));
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let idx = i * out.cols + j;
                    out.data[idx] = t.add(out.data[idx], t.mul(a, other.get(k, j)));
                }
            }
        }
        Ok(out)
    }

    /// Row vector times matrix, `v * self`.
    pub fn left_mul_vec(&self, t: &Tower, v: &[Elem]) -> Result<Vec<Elem>> {
        if v.len() != self.rows {
            return Err(Error::ShapeMismatch(format!(
                "vector of length {} times {}x{} matrix",
                v.len(),
                self.rows,
                self.cols
            )));
        }
        let mut out = vec![Elem::ZERO; self.cols];
        for (k, &a) in v.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, o) in out.iter_mut().enumerate() {
                *o = t.add(*o, t.mul(a, self.get(k, j)));
            }
        }
        Ok(out)
    }

    /// Matrix times column vector, `self * v`.
    pub fn mul_vec(&self, t: &Tower, v: &[Elem]) -> Result<Vec<Elem>> {
        if v.len() != self.cols {
            return Err(Error::ShapeMismatch(format!(
                "{}x{} matrix times vector of length {}",
                self.rows,
                self.cols,
                v.len()
            )));
        }
        Ok((0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(Elem::ZERO, |acc, (&a, &b)| t.add(acc, t.mul(a, b)))
            })
            .collect())
    }

    fn zip_with(&self, other: &Mat, f: impl Fn(Elem, Elem) -> Elem) -> Result<Mat> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::ShapeMismatch(format!(
                "{}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(Mat {
            rows: self.rows,
            cols: self.cols,
            tag: self.tag.join(other.tag),
            data: self.data.iter().zip(&other.data).map(|(&a, &b)| f(a, b)).collect(),
        })
    }

    pub fn add(&self, t: &Tower, other: &Mat) -> Result<Mat> {
        self.zip_with(other, |a, b| t.add(a, b))
    }

    pub fn sub(&self, t: &Tower, other: &Mat) -> Result<Mat> {
        self.zip_with(other, |a, b| t.sub(a, b))
    }

    pub fn scale(&self, t: &Tower, c: Elem) -> Mat {
        let tag = if t.in_base_field(c) { self.tag } else { FieldTag::Top };
        Mat {
            rows: self.rows,
            cols: self.cols,
            tag,
            data: self.data.iter().map(|&a| t.mul(a, c)).collect(),
        }
    }

    /// Applies `x -> x^{p^r}` to every entry.
    pub fn frobenius(&self, t: &Tower, r: i64) -> Mat {
        Mat {
            rows: self.rows,
            cols: self.cols,
            tag: self.tag,
            data: self.data.iter().map(|&a| t.frobenius(a, r)).collect(),
        }
    }

    /// Stacks `other` below `self`.
    pub fn vstack(&self, other: &Mat) -> Result<Mat> {
        if self.cols != other.cols && self.rows > 0 && other.rows > 0 {
            return Err(Error::ShapeMismatch("column counts differ".into()));
        }
        let cols = if self.rows > 0 { self.cols } else { other.cols };
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Ok(Mat { rows: self.rows + other.rows, cols, tag: self.tag.join(other.tag), data })
    }

    /// Places `other` to the right of `self`.
    pub fn hstack(&self, other: &Mat) -> Result<Mat> {
        if self.rows != other.rows {
            return Err(Error::ShapeMismatch("row counts differ".into()));
        }
        let cols = self.cols + other.cols;
        let mut data = Vec::with_capacity(self.rows * cols);
        for i in 0..self.rows {
            data.extend_from_slice(self.row(i));
            data.extend_from_slice(other.row(i));
        }
        Ok(Mat { rows: self.rows, cols, tag: self.tag.join(other.tag), data })
    }

    pub fn rref(&self, t: &Tower) -> RrefResult {
        let mut a = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..a.cols {
            if r == a.rows {
                break;
            }
            let Some(pr) = (r..a.rows).find(|&i| !a.get(i, c).is_zero()) else {
                continue;
            };
            if pr != r {
                for j in 0..a.cols {
                    a.data.swap(pr * a.cols + j, r * a.cols + j);
                }
            }
            let inv = t.inv(a.get(r, c)).expect("pivot is nonzero");
            for j in c..a.cols {
                let v = t.mul(a.get(r, j), inv);
                a.set(r, j, v);
            }
            for i in 0..a.rows {
                if i == r {
                    continue;
                }
                let f = a.get(i, c);
                if f.is_zero() {
                    continue;
                }
                for j in c..a.cols {
                    let v = t.sub(a.get(i, j), t.mul(f, a.get(r, j)));
                    a.set(i, j, v);
                }
            }
            pivots.push(c + 1);
            r += 1;
        }
        RrefResult { matrix: a, rank: r, pivots }
    }

    pub fn rank(&self, t: &Tower) -> usize {
        self.rref(t).rank
    }

    /// The nonzero rows of the RREF: a canonical basis of the row space.
    pub fn row_basis(&self, t: &Tower) -> Mat {
        let r = self.rref(t);
        Mat {
            rows: r.rank,
            cols: self.cols,
            tag: self.tag,
            data: r.matrix.data[..r.rank * self.cols].to_vec(),
        }
    }

    /// Rows form a basis of `{x : self * x^T = 0}`.
    pub fn null_space(&self, t: &Tower) -> Mat {
        let r = self.rref(t);
        let pivots0: Vec<usize> = r.pivots.iter().map(|p| p - 1).collect();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots0.contains(c)).collect();
        let mut out = Mat::zeros(free.len(), self.cols, self.tag);
        for (k, &f) in free.iter().enumerate() {
            out.set(k, f, Elem::ONE);
            for (i, &pc) in pivots0.iter().enumerate() {
                out.set(k, pc, t.neg(r.matrix.get(i, f)));
            }
        }
        out
    }

    pub fn inverse(&self, t: &Tower) -> Result<Mat> {
        if !self.is_square() {
            return Err(Error::ShapeMismatch("inverse of a non-square matrix".into()));
        }
        let n = self.rows;
        let aug = self.hstack(&Mat::identity(n, self.tag))?;
        let r = aug.rref(t);
        if r.pivots.iter().take(n).copied().ne(1..=n) {
            return Err(Error::Singular);
        }
        let mut out = Mat::zeros(n, n, self.tag);
        for i in 0..n {
            for j in 0..n {
                out.set(i, j, r.matrix.get(i, n + j));
            }
        }
        Ok(out)
    }

    pub fn is_invertible(&self, t: &Tower) -> bool {
        self.is_square() && self.rank(t) == self.rows
    }

    /// `self^k`, negative `k` through the inverse.
    pub fn pow(&self, t: &Tower, k: i64) -> Result<Mat> {
        if !self.is_square() {
            return Err(Error::ShapeMismatch("power of a non-square matrix".into()));
        }
        let mut base = if k < 0 { self.inverse(t)? } else { self.clone() };
        let mut e = k.unsigned_abs();
        let mut acc = Mat::identity(self.rows, self.tag);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(t, &base)?;
            }
            base = base.mul(t, &base)?;
            e >>= 1;
        }
        Ok(acc)
    }

    /// Multiplicative order of an invertible matrix.
    pub fn element_order(&self, t: &Tower) -> Result<u64> {
        if !self.is_invertible(t) {
            return Err(Error::Singular);
        }
        let id = Mat::identity(self.rows, self.tag);
        let mut cur = self.clone();
        let mut k = 1u64;
        while cur != id {
            cur = cur.mul(t, self)?;
            k += 1;
        }
        Ok(k)
    }

    /// Kronecker product `self ⊗ other`.
    pub fn kronecker(&self, t: &Tower, other: &Mat) -> Mat {
        let (r, c) = (self.rows * other.rows, self.cols * other.cols);
        let mut out = Mat::zeros(r, c, self.tag.join(other.tag));
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.get(i, j);
                for k in 0..other.rows {
                    for l in 0..other.cols {
                        out.set(i * other.rows + k, j * other.cols + l, t.mul(a, other.get(k, l)));
                    }
                }
            }
        }
        out
    }

    /// Row-major flattening into a `1 x rows*cols` vector.
    pub fn vec_row(&self) -> Vec<Elem> {
        self.data.clone()
    }

    pub fn from_vec_row(rows: usize, cols: usize, tag: FieldTag, v: &[Elem]) -> Result<Mat> {
        Mat::from_vec(rows, cols, tag, v.to_vec())
    }

    /// Text form: rows separated by `;`, entries by `,`.
    pub fn format(&self, t: &Tower) -> String {
        let mut s = String::new();
        for i in 0..self.rows {
            if i > 0 {
                s.push(';');
            }
            let _ = write!(s, "{}", t.fmt_vector(self.row(i)));
        }
        s
    }

    pub fn parse(t: &Tower, s: &str, tag: FieldTag) -> Result<Mat> {
        let rows: Vec<Vec<Elem>> = split_top_level(s.trim(), ';')
            .into_iter()
            .filter(|r| !r.trim().is_empty())
            .map(|r| t.parse_vector(&r))
            .collect::<Result<_>>()?;
        let m = Mat::from_rows(rows, tag)?;
        if tag == FieldTag::Base {
            m.check_base(t)?;
        }
        Ok(m)
    }
}

/// `|GL_n(F_q)| = prod_{i<n} (q^n - q^i)`.
pub fn gl_order(q: u64, n: u32) -> u128 {
    let qn = (q as u128).pow(n);
    (0..n).map(|i| qn - (q as u128).pow(i)).product()
}

/// Largest group [`enumerate_gl`] will materialize.
pub const GL_GUARD: u128 = 1 << 24;

/// Every invertible `n x n` matrix over `F_q`, in row-major lexicographic order
/// with respect to the sorted base-field element list.
pub fn enumerate_gl(t: &Tower, n: usize) -> Result<Vec<Mat>> {
    enumerate_gl_filtered(t, n, |_| true)
}

/// Like [`enumerate_gl`] but keeps only matrices accepted by `keep`.
pub fn enumerate_gl_filtered(t: &Tower, n: usize, keep: impl Fn(&Mat) -> bool) -> Result<Vec<Mat>> {
    let q = t.q() as u64;
    let order = gl_order(q, n as u32);
    if order > GL_GUARD {
        return Err(Error::TooLarge(format!("|GL_{n}(F_{q})| = {order}")));
    }
    let base = t.base_field();
    let vectors: Vec<Vec<Elem>> = (0..(q as usize).pow(n as u32))
        .map(|mut code| {
            let mut v = vec![Elem::ZERO; n];
            for slot in v.iter_mut().rev() {
                *slot = base[code % q as usize];
                code /= q as usize;
            }
            v
        })
        .collect();
    let mut out = Vec::new();
    let mut chosen: Vec<usize> = Vec::with_capacity(n);
    let mut spans: Vec<HashSet<Vec<Elem>>> = vec![std::iter::once(vec![Elem::ZERO; n]).collect()];
    gl_dfs(t, n, &vectors, &mut chosen, &mut spans, &mut out, &keep);
    Ok(out)
}

fn gl_dfs(
    t: &Tower,
    n: usize,
    vectors: &[Vec<Elem>],
    chosen: &mut Vec<usize>,
    spans: &mut Vec<HashSet<Vec<Elem>>>,
    out: &mut Vec<Mat>,
    keep: &impl Fn(&Mat) -> bool,
) {
    if chosen.len() == n {
        let data = chosen.iter().flat_map(|&c| vectors[c].iter().copied()).collect();
        let m = Mat { rows: n, cols: n, tag: FieldTag::Base, data };
        if keep(&m) {
            out.push(m);
        }
        return;
    }
    for (idx, v) in vectors.iter().enumerate() {
        let span = spans.last().expect("span stack is never empty");
        if span.contains(v) {
            continue;
        }
        let mut next = HashSet::with_capacity(span.len() * t.q() as usize);
        for s in span {
            for &c in t.base_field() {
                next.insert(s.iter().zip(v).map(|(&a, &b)| t.add(a, t.mul(c, b))).collect::<Vec<_>>());
            }
        }
        chosen.push(idx);
        spans.push(next);
        gl_dfs(t, n, vectors, chosen, spans, out, keep);
        spans.pop();
        chosen.pop();
    }
}

/// Scales so the first nonzero entry (row-major) equals one; returns the
/// scaled matrix and the scalar that was divided out.
pub fn normalize_first_nonzero(t: &Tower, m: &Mat) -> (Mat, Elem) {
    let lead = m.data.iter().copied().find(|x| !x.is_zero()).unwrap_or(Elem::ONE);
    let inv = t.inv(lead).expect("lead is nonzero");
    (m.scale(t, inv).with_tag(m.tag), lead)
}
