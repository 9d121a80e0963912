//! Finite-field towers `F_p ⊆ F_q ⊆ F_{q^m}` realized as a single extension
//! `F_p[t]/(f)` of degree `em`, with `F_q` and every intermediate field
//! `F_{q^d}` (`d | m`) identified as Frobenius fixed sets.
//!
//! Elements are packed base-`p` integers (`c0 + c1 p + c2 p^2 + ...`), so the
//! zero and one elements are the same value in every tower. Multiplication goes
//! through discrete log / antilog tables built from the tower generator.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::matrix::{FieldTag, Mat};

/// Largest field the tower will build tables for.
pub const MAX_FIELD_SIZE: u64 = 1 << 20;

/// An element of the top field of some [`Tower`], stored as its packed
/// coefficient vector over `F_p`.
#[derive(Copy, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default)]
pub struct Elem(pub(crate) u32);

impl Elem {
    pub const ZERO: Elem = Elem(0);
    pub const ONE: Elem = Elem(1);

    /// The packed integer `sum c_i p^i`.
    pub fn packed(self) -> u32 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

/// Field operations accepted by [`Tower::arith`].
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Op {
    Add,
    Sub,
    Mul,
    Div,
    Pow(i64),
    Inv,
}

/// The chain `F_p ⊆ F_q = F_{p^e} ⊆ F_{q^m}` with a fixed irreducible modulus
/// of degree `em` and a primitive generator of the top field.
#[derive(Clone)]
pub struct Tower {
    p: u32,
    e: u32,
    m: u32,
    n: u32,
    size: u32,
    modulus: Vec<u32>,
    generator: Elem,
    /// `exp[i] = generator^i` for `0 <= i < size - 1`.
    exp: Vec<u32>,
    /// `log[x]` for nonzero `x`; `log[0]` is unused.
    log: Vec<u32>,
    place: Vec<u32>,
    add_table: Option<Vec<u32>>,
    base: Vec<Elem>,
}

impl fmt::Debug for Tower {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Tower({})", self.spec_string())
    }
}

impl PartialEq for Tower {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p
            && self.e == other.e
            && self.m == other.m
            && self.modulus == other.modulus
            && self.generator == other.generator
    }
}

impl Eq for Tower {}

/// Builds a tower: the given modulus when present (any irreducible one), else
/// the least primitive polynomial.
pub fn make_tower(p: u32, e: u32, m: u32, modulus: Option<&[u32]>) -> Result<Tower> {
    match modulus {
        Some(f) => Tower::with_modulus(p, e, m, f),
        None => Tower::new(p, e, m),
    }
}

impl Tower {
    /// Tower over the least monic primitive polynomial of degree `em`, where
    /// polynomials are ordered by the integer `sum c_i p^i`.
    pub fn new(p: u32, e: u32, m: u32) -> Result<Tower> {
        let n = check_params(p, e, m)?;
        let bound = (p as u64).pow(n);
        // Lower coefficients range over [0, p^n); the leading 1 is implicit.
        for low in 1..bound {
            let mut f = to_digits(low, p, n as usize);
            if f[0] == 0 {
                continue;
            }
            f.push(1);
            if poly::is_irreducible(&f, p) && poly::x_is_primitive(&f, p) {
                return Tower::build(p, e, m, f, true);
            }
        }
        // A primitive polynomial of every degree exists.
        unreachable!("no primitive polynomial of degree {n} over F_{p}")
    }

    /// Tower over an explicit monic irreducible modulus (ascending coefficients,
    /// length `em + 1`). If `t` is not primitive, the least primitive element
    /// becomes the generator.
    pub fn with_modulus(p: u32, e: u32, m: u32, modulus: &[u32]) -> Result<Tower> {
        let f = check_modulus(p, e, m, modulus)?;
        let primitive = poly::x_is_primitive(&f, p);
        Tower::build(p, e, m, f, primitive)
    }

    /// Like [`Tower::with_modulus`] but insists that `t` itself is primitive.
    pub fn with_primitive_modulus(p: u32, e: u32, m: u32, modulus: &[u32]) -> Result<Tower> {
        let f = check_modulus(p, e, m, modulus)?;
        if !poly::x_is_primitive(&f, p) {
            return Err(Error::NotPrimitiveModulus);
        }
        Tower::build(p, e, m, f, true)
    }

    fn build(p: u32, e: u32, m: u32, modulus: Vec<u32>, x_primitive: bool) -> Result<Tower> {
        let n = e * m;
        let size = p.pow(n);
        let order = (size - 1) as u64;
        let nu = n as usize;

        let generator_poly: Vec<u32> = if x_primitive {
            let mut t = vec![0; nu];
            if nu > 1 {
                t[1] = 1;
            } else {
                // Degree-one modulus t + c: the root is -c.
                t[0] = (p - modulus[0]) % p;
            }
            t
        } else {
            let mut found = None;
            for v in 2..size as u64 {
                let cand = to_digits(v, p, nu);
                if poly::has_order(&cand, &modulus, p, order) {
                    found = Some(cand);
                    break;
                }
            }
            found.expect("multiplicative group of a finite field is cyclic")
        };
        // Degree-one towers: the root above may still fail to be primitive.
        let generator_poly = if nu == 1 && !poly::has_order(&generator_poly, &modulus, p, order) {
            (1..p as u64)
                .map(|v| to_digits(v, p, 1))
                .find(|c| poly::has_order(c, &modulus, p, order))
                .expect("F_p^* is cyclic")
        } else {
            generator_poly
        };

        let mut exp = Vec::with_capacity(order as usize);
        let mut log = vec![u32::MAX; size as usize];
        let mut cur = vec![0u32; nu];
        cur[0] = 1;
        let shift_only = nu > 1 && generator_poly.iter().enumerate().all(|(i, &c)| c == (i == 1) as u32);
        for i in 0..order {
            let packed = from_digits(&cur, p);
            if log[packed as usize] != u32::MAX {
                return Err(Error::NotPrimitiveModulus);
            }
            log[packed as usize] = i as u32;
            exp.push(packed);
            cur = if shift_only {
                poly::mul_by_x(&cur, &modulus, p)
            } else {
                poly::mulmod(&cur, &generator_poly, &modulus, p)
            };
        }

        let place: Vec<u32> = (0..n).map(|i| p.pow(i)).collect();
        let add_table = if p != 2 && size <= 1024 {
            let s = size as usize;
            let mut t = vec![0u32; s * s];
            for a in 0..s {
                for b in 0..s {
                    t[a * s + b] = digit_add(a as u32, b as u32, p, &place);
                }
            }
            Some(t)
        } else {
            None
        };

        let generator = Elem(from_digits(&generator_poly, p));
        let mut tower = Tower {
            p,
            e,
            m,
            n,
            size,
            modulus,
            generator,
            exp,
            log,
            place,
            add_table,
            base: Vec::new(),
        };
        tower.base = tower.subfield_of_degree(e);
        Ok(tower)
    }

    pub fn p(&self) -> u32 {
        self.p
    }
    pub fn e(&self) -> u32 {
        self.e
    }
    pub fn m(&self) -> u32 {
        self.m
    }
    /// `q = p^e`.
    pub fn q(&self) -> u32 {
        self.p.pow(self.e)
    }
    /// Degree `em` of the top field over `F_p`.
    pub fn degree(&self) -> u32 {
        self.n
    }
    /// `q^m`, the number of elements of the top field.
    pub fn size(&self) -> u32 {
        self.size
    }
    /// Order of the multiplicative group, `q^m - 1`.
    pub fn group_order(&self) -> u32 {
        self.size - 1
    }
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }
    pub fn generator(&self) -> Elem {
        self.generator
    }

    /// Elements of `F_q`, sorted by packed value.
    pub fn base_field(&self) -> &[Elem] {
        &self.base
    }

    pub fn contains(&self, x: Elem) -> bool {
        x.0 < self.size
    }

    /// Prime-field constant `c mod p`.
    pub fn constant(&self, c: i64) -> Elem {
        Elem(c.rem_euclid(self.p as i64) as u32)
    }

    /// `generator^k`, any integer `k`.
    pub fn gen_pow(&self, k: i64) -> Elem {
        let ord = self.group_order() as i64;
        Elem(self.exp[k.rem_euclid(ord) as usize])
    }

    /// Discrete log base the generator; `None` for zero.
    pub fn log(&self, x: Elem) -> Option<u32> {
        if x.0 == 0 {
            None
        } else {
            Some(self.log[x.0 as usize])
        }
    }

    /// Coefficients of `x` over `F_p`, ascending degree.
    pub fn digits(&self, x: Elem) -> Vec<u32> {
        to_digits(x.0 as u64, self.p, self.n as usize)
    }

    pub fn from_digits(&self, coeffs: &[u32]) -> Result<Elem> {
        if coeffs.len() > self.n as usize || coeffs.iter().any(|&c| c >= self.p) {
            return Err(Error::Parse(format!(
                "coefficient vector {coeffs:?} is not an element of F_{}^{}",
                self.p, self.n
            )));
        }
        Ok(Elem(from_digits(coeffs, self.p)))
    }

    #[inline]
    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        if self.p == 2 {
            return Elem(a.0 ^ b.0);
        }
        if let Some(t) = &self.add_table {
            return Elem(t[(a.0 * self.size + b.0) as usize]);
        }
        Elem(digit_add(a.0, b.0, self.p, &self.place))
    }

    #[inline]
    pub fn neg(&self, a: Elem) -> Elem {
        if self.p == 2 || a.0 == 0 {
            return a;
        }
        let mut out = 0;
        let mut v = a.0;
        for &pl in &self.place {
            let d = v % self.p;
            v /= self.p;
            out += ((self.p - d) % self.p) * pl;
        }
        Elem(out)
    }

    #[inline]
    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        if a.0 == 0 || b.0 == 0 {
            return Elem::ZERO;
        }
        let ord = self.size - 1;
        let s = self.log[a.0 as usize] + self.log[b.0 as usize];
        Elem(self.exp[(if s >= ord { s - ord } else { s }) as usize])
    }

    pub fn inv(&self, a: Elem) -> Result<Elem> {
        if a.0 == 0 {
            return Err(Error::DivisionByZero);
        }
        let ord = self.size - 1;
        let l = self.log[a.0 as usize];
        Ok(Elem(self.exp[((ord - l) % ord) as usize]))
    }

    pub fn div(&self, a: Elem, b: Elem) -> Result<Elem> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// `a^k` for any integer `k`; negative exponents need `a != 0`.
    pub fn pow(&self, a: Elem, k: i64) -> Result<Elem> {
        if a.0 == 0 {
            return match k.signum() {
                1 => Ok(Elem::ZERO),
                0 => Ok(Elem::ONE),
                _ => Err(Error::DivisionByZero),
            };
        }
        let ord = (self.size - 1) as i64;
        let l = self.log[a.0 as usize] as i64;
        let exp = ((l as i128 * k as i128).rem_euclid(ord as i128)) as usize;
        Ok(Elem(self.exp[exp]))
    }

    /// Checked dispatch over [`Op`]; `y` is ignored for unary operations.
    pub fn arith(&self, x: Elem, y: Elem, op: Op) -> Result<Elem> {
        if !self.contains(x) || !self.contains(y) {
            return Err(Error::TowerMismatch);
        }
        match op {
            Op::Add => Ok(self.add(x, y)),
            Op::Sub => Ok(self.sub(x, y)),
            Op::Mul => Ok(self.mul(x, y)),
            Op::Div => self.div(x, y),
            Op::Pow(k) => self.pow(x, k),
            Op::Inv => self.inv(x),
        }
    }

    /// `x^{p^r}`; `r` is taken modulo `em`.
    pub fn frobenius(&self, x: Elem, r: i64) -> Elem {
        if x.0 == 0 {
            return x;
        }
        let r = r.rem_euclid(self.n as i64) as u32;
        if r == 0 {
            return x;
        }
        let ord = (self.size - 1) as u64;
        let factor = modpow(self.p as u64, r as u64, ord);
        let l = self.log[x.0 as usize] as u64;
        Elem(self.exp[((l * factor) % ord) as usize])
    }

    /// `x^{q^j}` (the bracket power `x^{[j]}`).
    pub fn frobenius_q(&self, x: Elem, j: i64) -> Elem {
        self.frobenius(x, j * self.e as i64)
    }

    /// Generator of `F_{q^d}^*`, namely `generator^{(q^m-1)/(q^d-1)}`.
    pub fn subfield_generator(&self, d: u32) -> Result<Elem> {
        if d == 0 || !self.m.is_multiple_of(d) {
            return Err(Error::DoesNotDivide { d, m: self.m });
        }
        let sub = self.q().pow(d) - 1;
        Ok(self.gen_pow(((self.size - 1) / sub) as i64))
    }

    /// The subfield `F_{q^d}`, sorted by packed value.
    pub fn subfield(&self, d: u32) -> Result<Vec<Elem>> {
        if d == 0 || !self.m.is_multiple_of(d) {
            return Err(Error::DoesNotDivide { d, m: self.m });
        }
        Ok(self.subfield_of_degree(self.e * d))
    }

    /// Subfield of degree `k | em` over `F_p`.
    fn subfield_of_degree(&self, k: u32) -> Vec<Elem> {
        let sub = self.p.pow(k) - 1;
        let step = (self.size - 1) / sub;
        let mut out: Vec<Elem> = std::iter::once(Elem::ZERO)
            .chain((0..sub).map(|i| Elem(self.exp[(i * step) as usize])))
            .collect();
        out.sort();
        out
    }

    /// True when `x` lies in `F_{q^d}`.
    pub fn in_subfield(&self, x: Elem, d: u32) -> bool {
        self.frobenius(x, (self.e * d) as i64) == x
    }

    pub fn in_base_field(&self, x: Elem) -> bool {
        self.in_subfield(x, 1)
    }

    /// All elements of the top field in packed order.
    pub fn elements(&self) -> impl Iterator<Item = Elem> {
        (0..self.size).map(Elem)
    }

    /// Nonzero elements as `generator^0, generator^1, ...`.
    pub fn nonzero_by_log(&self) -> impl Iterator<Item = Elem> + '_ {
        self.exp.iter().map(|&v| Elem(v))
    }

    /// True when `xs` are linearly independent over `F_q`, decided by the rank
    /// of the Moore matrix `[x_j^{q^i}]`.
    pub fn independent_over_base(&self, xs: &[Elem]) -> bool {
        let k = xs.len();
        if k > self.m as usize {
            return false;
        }
        if k == 0 {
            return true;
        }
        moore_matrix(self, xs, k).rank(self) == k
    }

    /// First power of the generator whose conjugates `x, x^q, ..., x^{q^{m-1}}`
    /// form a basis of the top field over `F_q`.
    pub fn find_normal_element(&self) -> Elem {
        self.nonzero_by_log()
            .find(|&x| self.is_normal(x))
            .expect("normal elements exist in every finite extension")
    }

    pub fn is_normal(&self, x: Elem) -> bool {
        let conj: Vec<Elem> = (0..self.m as i64).map(|j| self.frobenius_q(x, j)).collect();
        self.independent_over_base(&conj)
    }

    /// Text form `gf(p,e,m;modulus=[c0,...])`.
    pub fn spec_string(&self) -> String {
        let coeffs: Vec<String> = self.modulus.iter().map(|c| c.to_string()).collect();
        format!("gf({},{},{};modulus=[{}])", self.p, self.e, self.m, coeffs.join(","))
    }

    /// Renders `0`, prime-field constants as integers, everything else as `g^k`.
    pub fn fmt_elem(&self, x: Elem) -> String {
        if x.0 < self.p {
            return x.0.to_string();
        }
        format!("g^{}", self.log[x.0 as usize])
    }

    /// Parses `0`, an integer constant below `p`, `g`, `g^k` (negative `k`
    /// allowed) or `poly:[c0,c1,...]`.
    pub fn parse_elem(&self, s: &str) -> Result<Elem> {
        let s = s.trim();
        if let Some(rest) = s.strip_prefix("poly:") {
            let coeffs = parse_int_list(rest)?;
            let coeffs: Vec<u32> = coeffs.iter().map(|&c| c as u32).collect();
            return self.from_digits(&coeffs);
        }
        if s == "g" {
            return Ok(self.generator);
        }
        if let Some(k) = s.strip_prefix("g^") {
            let k: i64 = k
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad exponent in element `{s}`")))?;
            return Ok(self.gen_pow(k));
        }
        match s.parse::<u32>() {
            Ok(c) if c < self.p => Ok(Elem(c)),
            _ => Err(Error::Parse(format!("cannot parse field element `{s}`"))),
        }
    }

    /// Parses a comma-separated vector of elements.
    pub fn parse_vector(&self, s: &str) -> Result<Vec<Elem>> {
        split_top_level(s, ',')
            .into_iter()
            .filter(|t| !t.trim().is_empty())
            .map(|t| self.parse_elem(&t))
            .collect()
    }

    pub fn fmt_vector(&self, v: &[Elem]) -> String {
        v.iter().map(|&x| self.fmt_elem(x)).collect::<Vec<_>>().join(",")
    }
}

impl fmt::Display for Tower {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.spec_string())
    }
}

impl FromStr for Tower {
    type Err = Error;

    /// Parses `gf(p,e,m)` or `gf(p,e,m;modulus=[c0,...])`.
    fn from_str(s: &str) -> Result<Tower> {
        let s = s.trim();
        let inner = s
            .strip_prefix("gf(")
            .and_then(|r| r.strip_suffix(')'))
            .ok_or_else(|| Error::Parse(format!("field spec `{s}` must look like gf(p,e,m;modulus=[...])")))?;
        let (params, modulus) = match inner.split_once(';') {
            Some((a, b)) => (a, Some(b.trim())),
            None => (inner, None),
        };
        let nums = parse_int_list(&format!("[{params}]"))?;
        if nums.len() != 3 || nums.iter().any(|&v| v <= 0 || v > u32::MAX as i64) {
            return Err(Error::Parse(format!("field spec `{s}` needs three positive integers p,e,m")));
        }
        let (p, e, m) = (nums[0] as u32, nums[1] as u32, nums[2] as u32);
        match modulus {
            None | Some("") => Tower::new(p, e, m),
            Some(mstr) => {
                let list = mstr
                    .strip_prefix("modulus=")
                    .ok_or_else(|| Error::Parse(format!("expected modulus=[...] in `{s}`")))?;
                let coeffs = parse_int_list(list)?;
                if coeffs.iter().any(|&c| c < 0) {
                    return Err(Error::Parse("negative modulus coefficient".into()));
                }
                let coeffs: Vec<u32> = coeffs.iter().map(|&c| c as u32).collect();
                Tower::with_modulus(p, e, m, &coeffs)
            }
        }
    }
}

/// The `k x l` Moore matrix `[x_j^{q^i}]` over the top field.
pub(crate) fn moore_matrix(t: &Tower, xs: &[Elem], rows: usize) -> Mat {
    let mut out = Mat::zeros(rows, xs.len(), FieldTag::Top);
    for i in 0..rows {
        for (j, &x) in xs.iter().enumerate() {
            out.set(i, j, t.frobenius_q(x, i as i64));
        }
    }
    out
}

pub fn is_prime(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u32;
    while (d as u64) * (d as u64) <= p as u64 {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Distinct prime factors, ascending.
pub fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

fn check_params(p: u32, e: u32, m: u32) -> Result<u32> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if e == 0 || m == 0 {
        return Err(Error::BadParams("e and m must be positive".into()));
    }
    let n = e
        .checked_mul(m)
        .ok_or_else(|| Error::BadParams("degree overflow".into()))?;
    let size = (p as u64).checked_pow(n).unwrap_or(u64::MAX);
    if size > MAX_FIELD_SIZE {
        return Err(Error::TooLarge(format!(
            "F_{p}^{n} has {size} elements, above the {MAX_FIELD_SIZE}-element table limit"
        )));
    }
    Ok(n)
}

fn check_modulus(p: u32, e: u32, m: u32, modulus: &[u32]) -> Result<Vec<u32>> {
    let n = check_params(p, e, m)? as usize;
    if modulus.len() != n + 1 || modulus[n] != 1 || modulus.iter().any(|&c| c >= p) {
        return Err(Error::BadParams(format!(
            "modulus must be monic of degree {n} with coefficients below {p}"
        )));
    }
    let f = modulus.to_vec();
    if !poly::is_irreducible(&f, p) {
        return Err(Error::ReducibleModulus);
    }
    Ok(f)
}

fn to_digits(mut v: u64, p: u32, n: usize) -> Vec<u32> {
    let mut out = vec![0; n];
    for d in out.iter_mut() {
        *d = (v % p as u64) as u32;
        v /= p as u64;
    }
    out
}

fn from_digits(d: &[u32], p: u32) -> u32 {
    d.iter().rev().fold(0u32, |acc, &c| acc * p + c)
}

fn digit_add(mut a: u32, mut b: u32, p: u32, place: &[u32]) -> u32 {
    let mut out = 0;
    for &pl in place {
        let s = (a % p + b % p) % p;
        a /= p;
        b /= p;
        out += s * pl;
    }
    out
}

fn modpow(base: u64, mut exp: u64, modulus: u64) -> u64 {
    if modulus == 1 {
        return 0;
    }
    let mut result = 1u64;
    let mut b = base % modulus;
    while exp > 0 {
        if exp & 1 == 1 {
            result = (result as u128 * b as u128 % modulus as u128) as u64;
        }
        b = (b as u128 * b as u128 % modulus as u128) as u64;
        exp >>= 1;
    }
    result
}

/// Parses `[a,b,c]` (brackets optional) into integers.
pub(crate) fn parse_int_list(s: &str) -> Result<Vec<i64>> {
    let t = s.trim();
    let t = t.strip_prefix('[').unwrap_or(t);
    let t = t.strip_suffix(']').unwrap_or(t);
    if t.trim().is_empty() {
        return Ok(Vec::new());
    }
    t.split(',')
        .map(|x| {
            x.trim()
                .parse::<i64>()
                .map_err(|_| Error::Parse(format!("bad integer `{}`", x.trim())))
        })
        .collect()
}

/// Splits on `sep` outside of square brackets.
pub(crate) fn split_top_level(s: &str, sep: char) -> Vec<String> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut cur = String::new();
    for ch in s.chars() {
        match ch {
            '[' => depth += 1,
            ']' => depth -= 1,
            _ => {}
        }
        if ch == sep && depth == 0 {
            out.push(std::mem::take(&mut cur));
        } else {
            cur.push(ch);
        }
    }
    out.push(cur);
    out
}

/// Dense polynomial arithmetic over `F_p`, used only while building towers.
mod poly {
    use super::{prime_factors, to_digits};

    fn trim(mut a: Vec<u32>) -> Vec<u32> {
        while a.last() == Some(&0) {
            a.pop();
        }
        a
    }

    fn inv_mod(a: u32, p: u32) -> u32 {
        super::modpow(a as u64, (p - 2) as u64, p as u64) as u32
    }

    /// Remainder of `a` modulo `f`.
    fn rem(a: &[u32], f: &[u32], p: u32) -> Vec<u32> {
        let f = trim(f.to_vec());
        let mut r = trim(a.to_vec());
        let df = f.len() - 1;
        let lead_inv = inv_mod(f[df], p);
        while r.len() > df {
            let shift = r.len() - 1 - df;
            let c = r[r.len() - 1] as u64 * lead_inv as u64 % p as u64;
            for (i, &fc) in f.iter().enumerate() {
                let sub = c * fc as u64 % p as u64;
                let idx = i + shift;
                r[idx] = ((r[idx] as u64 + p as u64 - sub) % p as u64) as u32;
            }
            r = trim(r);
        }
        r
    }

    fn mul(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![0u64; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                out[i + j] = (out[i + j] + x as u64 * y as u64) % p as u64;
            }
        }
        out.into_iter().map(|v| v as u32).collect()
    }

    /// `a * b mod f`, padded to `deg f` coefficients.
    pub(super) fn mulmod(a: &[u32], b: &[u32], f: &[u32], p: u32) -> Vec<u32> {
        let n = f.len() - 1;
        let mut r = rem(&mul(a, b, p), f, p);
        r.resize(n, 0);
        r
    }

    /// `a * t mod f`, padded.
    pub(super) fn mul_by_x(a: &[u32], f: &[u32], p: u32) -> Vec<u32> {
        let n = f.len() - 1;
        let top = a[n - 1];
        let mut out = vec![0u32; n];
        out[1..n].copy_from_slice(&a[..(n - 1)]);
        if top != 0 {
            // f is monic: t^n = -(f_0 + ... + f_{n-1} t^{n-1}).
            for i in 0..n {
                let sub = (top as u64 * f[i] as u64 % p as u64) as u32;
                out[i] = (out[i] + p - sub) % p;
            }
        }
        out
    }

    fn powmod(a: &[u32], mut k: u64, f: &[u32], p: u32) -> Vec<u32> {
        let n = f.len() - 1;
        let mut result = vec![0u32; n];
        result[0] = 1;
        let mut base = rem(a, f, p);
        base.resize(n, 0);
        while k > 0 {
            if k & 1 == 1 {
                result = mulmod(&result, &base, f, p);
            }
            base = mulmod(&base, &base, f, p);
            k >>= 1;
        }
        result
    }

    fn gcd(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
        let mut a = trim(a.to_vec());
        let mut b = trim(b.to_vec());
        while !b.is_empty() {
            let r = rem(&a, &b, p);
            a = b;
            b = r;
        }
        a
    }

    /// Ben-Or test: `gcd(f, t^{p^k} - t mod f) = 1` for `1 <= k <= deg f / 2`.
    pub(super) fn is_irreducible(f: &[u32], p: u32) -> bool {
        let n = f.len() - 1;
        if n == 0 {
            return false;
        }
        if n == 1 {
            return true;
        }
        let mut x = vec![0u32; n];
        x[1] = 1;
        let mut h = x.clone();
        for _ in 1..=n / 2 {
            h = powmod(&h, p as u64, f, p);
            let mut diff = h.clone();
            diff[1] = (diff[1] + p - 1) % p;
            let g = gcd(f, &diff, p);
            if g.len() != 1 {
                return false;
            }
        }
        true
    }

    /// True when `a` has multiplicative order exactly `order` modulo `f`.
    pub(super) fn has_order(a: &[u32], f: &[u32], p: u32, order: u64) -> bool {
        let n = f.len() - 1;
        let mut one = vec![0u32; n];
        one[0] = 1;
        if trim(a.to_vec()).is_empty() {
            return false;
        }
        if powmod(a, order, f, p) != one {
            return false;
        }
        prime_factors(order)
            .into_iter()
            .all(|l| powmod(a, order / l, f, p) != one)
    }

    /// True when the class of `t` generates `(F_p[t]/f)^*`.
    pub(super) fn x_is_primitive(f: &[u32], p: u32) -> bool {
        let n = f.len() - 1;
        let order = (p as u64).pow(n as u32) - 1;
        if n == 1 {
            let root = to_digits(((p - f[0]) % p) as u64, p, 1);
            return has_order(&root, f, p, order);
        }
        let mut x = vec![0u32; n];
        x[1] = 1;
        has_order(&x, f, p, order)
    }

}
