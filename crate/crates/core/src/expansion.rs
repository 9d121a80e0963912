//! Coordinates over `F_q`: the expansion `ε_b : F_{q^m}^l -> F_q^{l x m}` with
//! respect to an ordered basis, its inverse, and the matrices that realize
//! field multiplication and Frobenius on coordinate rows.
//!
//! Coordinates are found by inverting a Moore matrix `[b_j^{q^i}]`, which works
//! for any basis and any extension degree of `F_q` over `F_p`.

use crate::error::{Error, Result};
use crate::field::{moore_matrix, Elem, Tower};
use crate::matrix::{FieldTag, Mat};

/// An `F_q`-linearly independent tuple `(g_1, ..., g_l)` of top-field elements.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IndependentTuple {
    elems: Vec<Elem>,
    inv_moore: Mat,
}

impl IndependentTuple {
    pub fn new(t: &Tower, elems: Vec<Elem>) -> Result<IndependentTuple> {
        let l = elems.len();
        if l == 0 || l > t.m() as usize || elems.iter().any(|&x| !t.contains(x)) {
            return Err(Error::DependentVector);
        }
        let inv_moore = moore_matrix(t, &elems, l)
            .inverse(t)
            .map_err(|_| Error::DependentVector)?;
        Ok(IndependentTuple { elems, inv_moore })
    }

    pub fn elems(&self) -> &[Elem] {
        &self.elems
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    /// `a in F_q^l` with `w = sum a_j g_j`, or `NotInSpan`.
    pub fn coords(&self, t: &Tower, w: Elem) -> Result<Vec<Elem>> {
        let l = self.elems.len();
        let rhs: Vec<Elem> = (0..l).map(|i| t.frobenius_q(w, i as i64)).collect();
        let a = self.inv_moore.mul_vec(t, &rhs)?;
        if a.iter().all(|&x| t.in_base_field(x)) {
            Ok(a)
        } else {
            Err(Error::NotInSpan)
        }
    }

    pub fn combine(&self, t: &Tower, coords: &[Elem]) -> Elem {
        self.elems
            .iter()
            .zip(coords)
            .fold(Elem::ZERO, |acc, (&g, &a)| t.add(acc, t.mul(a, g)))
    }
}

/// An ordered basis of `F_{q^m}` over `F_q`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrderedBasis {
    tuple: IndependentTuple,
    digits_fast: bool,
}

impl OrderedBasis {
    pub fn new(t: &Tower, elems: Vec<Elem>) -> Result<OrderedBasis> {
        if elems.len() != t.m() as usize {
            return Err(Error::DependentVector);
        }
        let digits_fast = t.e() == 1
            && elems.iter().enumerate().all(|(i, &b)| b == t.from_digits(&unit(i)).unwrap_or(Elem::ZERO));
        Ok(OrderedBasis { tuple: IndependentTuple::new(t, elems)?, digits_fast })
    }

    /// `1, g, g^2, ..., g^{m-1}` for the tower generator `g`.
    pub fn power(t: &Tower) -> OrderedBasis {
        let elems = (0..t.m() as i64).map(|i| t.gen_pow(i)).collect();
        OrderedBasis::new(t, elems).expect("powers of a primitive element form a basis")
    }

    /// `x, x^q, ..., x^{q^{m-1}}` for the first normal element `x`.
    pub fn normal(t: &Tower) -> OrderedBasis {
        OrderedBasis::normal_from(t, t.find_normal_element()).expect("normal element")
    }

    pub fn normal_from(t: &Tower, x: Elem) -> Result<OrderedBasis> {
        let elems = (0..t.m() as i64).map(|j| t.frobenius_q(x, j)).collect();
        OrderedBasis::new(t, elems)
    }

    pub fn elems(&self) -> &[Elem] {
        self.tuple.elems()
    }

    pub fn len(&self) -> usize {
        self.tuple.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tuple.is_empty()
    }

    pub fn as_tuple(&self) -> &IndependentTuple {
        &self.tuple
    }

    /// Coordinates of `x`, a length-`m` row over `F_q`.
    pub fn coords(&self, t: &Tower, x: Elem) -> Vec<Elem> {
        if self.digits_fast {
            return t.digits(x).into_iter().map(|d| t.constant(d as i64)).collect();
        }
        self.tuple.coords(t, x).expect("a basis spans the whole field")
    }

    pub fn combine(&self, t: &Tower, coords: &[Elem]) -> Elem {
        self.tuple.combine(t, coords)
    }

    /// Parses a comma-separated list of `m` elements.
    pub fn parse(t: &Tower, s: &str) -> Result<OrderedBasis> {
        OrderedBasis::new(t, t.parse_vector(s)?)
    }

    /// `power`, `normal`, or an explicit element list.
    pub fn from_name(t: &Tower, s: &str) -> Result<OrderedBasis> {
        match s.trim() {
            "power" => Ok(OrderedBasis::power(t)),
            "normal" => Ok(OrderedBasis::normal(t)),
            other => OrderedBasis::parse(t, other),
        }
    }
}

fn unit(i: usize) -> Vec<u32> {
    let mut v = vec![0; i + 1];
    v[i] = 1;
    v
}

/// `ε_b(x)`: row `i` holds the coordinates of `x_i`.
pub fn expand(t: &Tower, x: &[Elem], b: &OrderedBasis) -> Mat {
    let rows = x.iter().map(|&xi| b.coords(t, xi)).collect();
    Mat::from_rows(rows, FieldTag::Base).unwrap_or_else(|_| Mat::zeros(0, b.len(), FieldTag::Base))
}

/// Inverse of [`expand`].
pub fn compress(t: &Tower, x: &Mat, b: &OrderedBasis) -> Result<Vec<Elem>> {
    if x.cols() != b.len() {
        return Err(Error::ShapeMismatch(format!("{} columns for a basis of length {}", x.cols(), b.len())));
    }
    x.check_base(t)?;
    Ok((0..x.rows()).map(|i| b.combine(t, x.row(i))).collect())
}

/// `ε_g(w)` for an independent tuple: row `i` holds the coordinates of `w_i`.
pub fn coords(t: &Tower, w: &[Elem], g: &IndependentTuple) -> Result<Mat> {
    let rows = w.iter().map(|&x| g.coords(t, x)).collect::<Result<Vec<_>>>()?;
    if rows.is_empty() {
        return Ok(Mat::zeros(0, g.len(), FieldTag::Base));
    }
    Mat::from_rows(rows, FieldTag::Base)
}

/// `M_α` with `ε_b(αx) = ε_b(x) M_α`.
pub fn mult_matrix(t: &Tower, alpha: Elem, b: &OrderedBasis) -> Mat {
    let prod: Vec<Elem> = b.elems().iter().map(|&bi| t.mul(alpha, bi)).collect();
    expand(t, &prod, b)
}

/// `Q` with `ε_b(x^q) = ε_b(x) Q`.
pub fn frobenius_matrix(t: &Tower, b: &OrderedBasis) -> Mat {
    let conj: Vec<Elem> = b.elems().iter().map(|&bi| t.frobenius_q(bi, 1)).collect();
    expand(t, &conj, b)
}

/// `P_r` with `ε_b(x^{p^r}) = (ε_b(x) P_r)^{σ_p^r}`, `r` taken modulo `e`
/// (the `σ_q` part is carried by `Q`), so `P_0 = I`.
pub fn semilinear_matrix(t: &Tower, b: &OrderedBasis, r: i64) -> Mat {
    let r = r.rem_euclid(t.e() as i64);
    let conj: Vec<Elem> = b.elems().iter().map(|&bi| t.frobenius(bi, r)).collect();
    expand(t, &conj, b).frobenius(t, -r)
}

/// The subgroup `K = <M_α><Q>` of `GL_m(F_q)`, of order `m(q^m - 1)`.
#[derive(Clone, Debug)]
pub struct KSubgroup {
    basis: OrderedBasis,
    alpha: Elem,
    m_alpha: Mat,
    q_mat: Mat,
    q_inv_powers: Vec<Mat>,
}

impl KSubgroup {
    /// Built from the tower generator.
    pub fn new(t: &Tower, b: &OrderedBasis) -> KSubgroup {
        KSubgroup::with_primitive(t, b, t.generator()).expect("tower generator is primitive")
    }

    pub fn with_primitive(t: &Tower, b: &OrderedBasis, alpha: Elem) -> Result<KSubgroup> {
        if t.log(alpha).is_none_or(|l| gcd(l as u64, t.group_order() as u64) != 1) {
            return Err(Error::BadParams("element is not primitive".into()));
        }
        let q_mat = frobenius_matrix(t, b);
        let q_inv = q_mat.inverse(t)?;
        let mut q_inv_powers = vec![Mat::identity(b.len(), FieldTag::Base)];
        for j in 1..t.m() as usize {
            let next = q_inv_powers[j - 1].mul(t, &q_inv)?;
            q_inv_powers.push(next);
        }
        Ok(KSubgroup { basis: b.clone(), alpha, m_alpha: mult_matrix(t, alpha, b), q_mat, q_inv_powers })
    }

    pub fn m_alpha(&self) -> &Mat {
        &self.m_alpha
    }

    pub fn q_matrix(&self) -> &Mat {
        &self.q_mat
    }

    pub fn order(&self, t: &Tower) -> u64 {
        t.m() as u64 * t.group_order() as u64
    }

    /// `M_α^i Q^j` for `0 <= i < q^m - 1`, `0 <= j < m`.
    pub fn elements(&self, t: &Tower) -> Result<Vec<Mat>> {
        if self.order(t) > 1 << 20 {
            return Err(Error::TooLarge(format!("|K| = {}", self.order(t))));
        }
        let mut out = Vec::with_capacity(self.order(t) as usize);
        let mut qj = Mat::identity(self.basis.len(), FieldTag::Base);
        for _ in 0..t.m() {
            for i in 0..t.group_order() as i64 {
                let ma = mult_matrix(t, t.pow(self.alpha, i).expect("nonzero"), &self.basis);
                out.push(ma.mul(t, &qj).expect("square"));
            }
            qj = qj.mul(t, &self.q_mat).expect("square");
        }
        Ok(out)
    }

    pub fn contains(&self, t: &Tower, m: &Mat) -> bool {
        let n = self.basis.len();
        if m.rows() != n || m.cols() != n {
            return false;
        }
        for qj in &self.q_inv_powers {
            let x = m.mul(t, qj).expect("square");
            let Ok(first) = compress(t, &Mat::from_vec(1, n, FieldTag::Base, x.row(0).to_vec()).expect("row"), &self.basis)
            else {
                return false;
            };
            let Ok(beta) = t.div(first[0], self.basis.elems()[0]) else {
                continue;
            };
            if !beta.is_zero() && mult_matrix(t, beta, &self.basis) == x {
                return true;
            }
        }
        false
    }
}

pub(crate) fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let r = a % b;
        a = b;
        b = r;
    }
    a
}
