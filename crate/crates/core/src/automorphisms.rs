//! Automorphism groups of rank-metric and matrix codes.
//!
//! For a Gabidulin code `C_{k,g}` with `k < l`, the linear rank-metric
//! automorphisms are exactly the cosets `[α, M_β]` with `α ∈ F_{q^m}^*` and
//! `β ∈ F_{q^d}^*`, where `d` is the largest degree for which
//! `W = span_{F_q}(g)` is an `F_{q^d}`-space and `g M_β = β g`. The brute-force
//! routines filter the full equivalence group and serve as oracles.

use std::collections::{BTreeSet, HashSet, VecDeque};

use rayon::prelude::*;

use crate::codes::{expand_code, Combinations, GabidulinCode, MatrixCode, RankMetricCode};
use crate::equivalence::{rm_to_mat, EquivMap, MatMap, MatMaps, RmMap, RmMaps};
use crate::error::{Error, Result};
use crate::matrix::{FieldTag, Mat};
use crate::expansion::{coords, gcd, IndependentTuple, OrderedBasis};
use crate::field::{Elem, Tower};

/// Largest rank-metric group the brute-force stabilizer will scan.
pub const RM_BRUTE_GUARD: u128 = 1 << 20;
/// Largest matrix group the brute-force stabilizer will scan.
pub const MAT_BRUTE_GUARD: u128 = 1 << 22;

/// The largest `d | gcd(l, m)` with `β W ⊆ W`, and a generator `β` of `F_{q^d}^*`.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct StabilizerDegree {
    pub d: u32,
    pub beta: Elem,
}

/// Tries the divisors of `gcd(l, m)` from the top. Closure of the
/// `F_q`-space `W` under a generator of `F_{q^d}^*` gives closure under all of
/// `F_{q^d}`, since every element is a power of it or zero.
pub fn stabilizer_degree(t: &Tower, g: &IndependentTuple) -> StabilizerDegree {
    let n = gcd(g.len() as u64, t.m() as u64) as u32;
    for d in (1..=n).rev().filter(|d| n.is_multiple_of(*d)) {
        let beta = t.subfield_generator(d).expect("d divides m");
        if g.elems().iter().all(|&x| g.coords(t, t.mul(beta, x)).is_ok()) {
            return StabilizerDegree { d, beta };
        }
    }
    unreachable!("W is an F_q-space, so d = 1 always succeeds")
}

/// `M_β = (ε_g(β g))ᵀ`, so that `g M_β = β g`.
pub fn m_beta(t: &Tower, g: &IndependentTuple, beta: Elem) -> Result<Mat> {
    let bg: Vec<Elem> = g.elems().iter().map(|&x| t.mul(beta, x)).collect();
    Ok(coords(t, &bg, g)?.transpose())
}

/// `(q^m - 1)(q^d - 1)/(q - 1)`.
pub fn analytic_order(q: u64, m: u32, d: u32) -> u128 {
    let q = q as u128;
    (q.pow(m) - 1) * (q.pow(d) - 1) / (q - 1)
}

/// A finite group of equivalence maps stored as a sorted element list.
#[derive(Clone, Debug)]
pub struct AutGroup<M> {
    elements: Vec<M>,
    generators: Vec<M>,
    /// False when only a subgroup of the full automorphism group is claimed.
    pub complete: bool,
}

impl<M: EquivMap> AutGroup<M> {
    /// Sorts and deduplicates `elements`; a generating set is picked greedily.
    pub fn from_elements(t: &Tower, elements: impl IntoIterator<Item = M>, complete: bool) -> AutGroup<M> {
        let elements: Vec<M> = elements.into_iter().collect::<BTreeSet<_>>().into_iter().collect();
        let generators = greedy_generators(t, &elements);
        AutGroup { elements, generators, complete }
    }

    pub fn with_generators(mut self, generators: Vec<M>) -> AutGroup<M> {
        self.generators = generators;
        self
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }
    pub fn elements(&self) -> &[M] {
        &self.elements
    }
    pub fn generators(&self) -> &[M] {
        &self.generators
    }
    pub fn contains(&self, f: &M) -> bool {
        self.elements.binary_search(f).is_ok()
    }

    /// Closure under composition and inversion; all pairs when the group is
    /// small, otherwise every element against every generator.
    pub fn is_closed(&self, t: &Tower) -> bool {
        if self.elements.is_empty() {
            return false;
        }
        let inverses = self.elements.par_iter().all(|f| self.contains(&f.inverse(t)));
        let right: &[M] = if self.elements.len() <= 2000 { &self.elements } else { &self.generators };
        inverses
            && self
                .elements
                .par_iter()
                .all(|f| right.iter().all(|g| self.contains(&f.then(t, g))))
            && self.subgroup_generated_by_generators(t) == self.elements.len()
    }

    fn subgroup_generated_by_generators(&self, t: &Tower) -> usize {
        closure(t, &self.generators, self.elements.len()).len()
    }
}

/// BFS closure of `gens` under right multiplication, stopping past `cap`.
fn closure<M: EquivMap>(t: &Tower, gens: &[M], cap: usize) -> HashSet<M> {
    let Some(first) = gens.first() else {
        return HashSet::new();
    };
    let id = first.then(t, &first.inverse(t));
    let mut seen: HashSet<M> = HashSet::from([id.clone()]);
    let mut queue = VecDeque::from([id]);
    while let Some(x) = queue.pop_front() {
        for g in gens {
            let y = x.then(t, g);
            if seen.insert(y.clone()) {
                if seen.len() > cap {
                    return seen;
                }
                queue.push_back(y);
            }
        }
    }
    seen
}

fn greedy_generators<M: EquivMap>(t: &Tower, elements: &[M]) -> Vec<M> {
    let mut gens: Vec<M> = Vec::new();
    let mut span: HashSet<M> = HashSet::new();
    for f in elements {
        if f.is_identity() || span.contains(f) {
            continue;
        }
        gens.push(f.clone());
        span = closure(t, &gens, elements.len());
        if span.len() >= elements.len() {
            break;
        }
    }
    gens
}

/// The group `{[α, M_β]}` for a Gabidulin code with `k < l`; for `k = l` the
/// code is the whole space and the brute-force stabilizer is returned.
pub fn rm_aut_group(c: &GabidulinCode) -> Result<AutGroup<RmMap>> {
    let t = c.tower();
    if c.k() == c.length() {
        return rm_aut_brute(c.code(), false, RM_BRUTE_GUARD);
    }
    let sd = stabilizer_degree(t, c.g());
    let mb = m_beta(t, c.g(), sd.beta)?;
    let qd1 = t.q().pow(sd.d) - 1;
    let mut elems = BTreeSet::new();
    let mut mpow = Mat::identity(c.length(), FieldTag::Base);
    for _ in 0..qd1 {
        for alpha in t.nonzero_by_log() {
            elems.insert(RmMap::linear(t, alpha, mpow.clone())?);
        }
        mpow = mpow.mul(t, &mb)?;
    }
    let gens = vec![
        RmMap::linear(t, t.generator(), Mat::identity(c.length(), FieldTag::Base))?,
        RmMap::linear(t, Elem::ONE, mb)?,
    ];
    let group = AutGroup { elements: elems.into_iter().collect(), generators: gens, complete: true };
    debug_assert_eq!(group.order() as u128, analytic_order(t.q() as u64, t.m(), sd.d));
    Ok(group)
}

/// True when every analytic element actually fixes the code.
pub fn verify_fixes_rm(group: &AutGroup<RmMap>, c: &RankMetricCode) -> bool {
    group.elements().par_iter().all(|f| f.fixes(c))
}

pub fn verify_fixes_mat(group: &AutGroup<MatMap>, c: &MatrixCode) -> bool {
    group.elements().par_iter().all(|f| f.fixes(c))
}

/// Exact stabilizer of `c` by scanning every canonical map.
pub fn rm_aut_brute(c: &RankMetricCode, semilinear: bool, guard: u128) -> Result<AutGroup<RmMap>> {
    let t = c.tower();
    let maps = RmMaps::new(t, c.length(), semilinear, guard)?;
    let elems: Vec<RmMap> = (0..maps.len())
        .into_par_iter()
        .map(|i| maps.get(t, i))
        .filter(|f| f.fixes(c))
        .collect();
    Ok(AutGroup::from_elements(t, elems, true))
}

/// Image of [`rm_aut_group`] under `rm_to_mat`: a subgroup of the matrix
/// automorphism group of `ε_b(C)`, not claimed to be all of it.
pub fn mat_aut_subgroup(c: &GabidulinCode, b: &OrderedBasis) -> Result<AutGroup<MatMap>> {
    let t = c.tower();
    let rm = rm_aut_group(c)?;
    let elems: Vec<MatMap> = rm.elements().iter().map(|f| rm_to_mat(t, f, b)).collect();
    let gens: Vec<MatMap> = rm.generators().iter().map(|f| rm_to_mat(t, f, b)).collect();
    Ok(AutGroup::from_elements_with(elems, gens, false))
}

impl<M: EquivMap> AutGroup<M> {
    fn from_elements_with(elements: Vec<M>, generators: Vec<M>, complete: bool) -> AutGroup<M> {
        let elements = elements.into_iter().collect::<BTreeSet<_>>().into_iter().collect();
        AutGroup { elements, generators, complete }
    }
}

/// Exact stabilizer of a matrix code by scanning every canonical matrix map.
pub fn mat_aut_brute(mc: &MatrixCode, semilinear: bool, guard: u128) -> Result<AutGroup<MatMap>> {
    let t = mc.tower();
    let maps = MatMaps::new(t, mc.l(), mc.m(), semilinear, guard)?;
    let elems: Vec<MatMap> = (0..maps.len())
        .into_par_iter()
        .map(|i| maps.get(i))
        .filter(|f| f.fixes(mc))
        .collect();
    Ok(AutGroup::from_elements(t, elems, true))
}

/// `ε_b(C)` for a Gabidulin code.
pub fn expanded(c: &GabidulinCode, b: &OrderedBasis) -> MatrixCode {
    expand_code(c.code(), b)
}

/// Every invertible `M` with `[L, M]` fixing `mc`, found by solving the
/// linear system `L B_i M ∈ mc` for the basis matrices `B_i`.
pub fn right_partners(mc: &MatrixCode, l: &Mat, guard: u128) -> Result<Vec<Mat>> {
    let t = mc.tower();
    let cols = mc.m();
    let span = Mat::from_rows(mc.basis().iter().map(|b| b.vec_row()).collect(), FieldTag::Base)?;
    let checker = span.null_space(t);
    let lb: Vec<Mat> = mc.basis().iter().map(|b| l.mul(t, b)).collect::<Result<_>>()?;
    let mut system = Mat::zeros(cols * cols, lb.len() * checker.rows(), FieldTag::Base);
    for r in 0..cols {
        for s in 0..cols {
            let mut e = Mat::zeros(cols, cols, FieldTag::Base);
            e.set(r, s, Elem::ONE);
            let mut out = Vec::with_capacity(system.cols());
            for x in &lb {
                out.extend(checker.mul_vec(t, &x.mul(t, &e)?.vec_row())?);
            }
            for (j, v) in out.into_iter().enumerate() {
                system.set(r * cols + s, j, v);
            }
        }
    }
    let sols = system.transpose().null_space(t);
    let count = (t.q() as u128).checked_pow(sols.rows() as u32).unwrap_or(u128::MAX);
    if count > guard {
        return Err(Error::TooLarge(format!("{count} candidate matrices")));
    }
    let mut out = Vec::new();
    for c in Combinations::new(t.base_field().to_vec(), sols.rows()) {
        let v = sols.left_mul_vec(t, &c)?;
        let m = Mat::from_vec_row(cols, cols, FieldTag::Base, &v)?;
        if m.is_invertible(t) {
            out.push(m);
        }
    }
    out.sort();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codes::gabidulin;
    use rand::{Rng, SeedableRng};
    use std::sync::Arc;

    fn f16() -> Arc<Tower> {
        Arc::new(Tower::with_primitive_modulus(2, 1, 4, &[1, 1, 0, 0, 1]).unwrap())
    }

    fn f16_gab() -> GabidulinCode {
        let t = f16();
        let g = IndependentTuple::new(&t, vec![Elem::ONE, t.gen_pow(5)]).unwrap();
        gabidulin(t, 1, g).unwrap()
    }

    #[test]
    fn stabilizer_degree_examples() {
        let t = f16();
        let g = IndependentTuple::new(&t, vec![Elem::ONE, t.gen_pow(5)]).unwrap();
        let sd = stabilizer_degree(&t, &g);
        assert_eq!(sd.d, 2);
        assert_eq!(sd.beta, t.gen_pow(5));
        let g = IndependentTuple::new(&t, vec![Elem::ONE, t.generator()]).unwrap();
        assert_eq!(stabilizer_degree(&t, &g).d, 1);
        // Oracle: enumerate the span {0, 1, w, 1+w} and test w^5 * 1 against it.
        let span = [Elem::ZERO, Elem::ONE, t.generator(), t.add(Elem::ONE, t.generator())];
        assert!(!span.contains(&t.gen_pow(5)));
        let t3 = Tower::new(2, 1, 3).unwrap();
        let g = IndependentTuple::new(&t3, vec![Elem::ONE, t3.generator()]).unwrap();
        assert_eq!(stabilizer_degree(&t3, &g).d, 1);
    }

    #[test]
    fn m_beta_examples() {
        let t = f16();
        let g = IndependentTuple::new(&t, vec![Elem::ONE, t.gen_pow(5)]).unwrap();
        assert!(m_beta(&t, &g, Elem::ONE).unwrap().is_identity());
        assert_eq!(m_beta(&t, &g, t.gen_pow(5)).unwrap(), Mat::from_ints(&t, &[&[0, 1], &[1, 1]]));
        for beta in t.subfield(2).unwrap().into_iter().filter(|b| !b.is_zero()) {
            let mb = m_beta(&t, &g, beta).unwrap();
            let lhs = mb.left_mul_vec(&t, g.elems()).unwrap();
            let rhs: Vec<Elem> = g.elems().iter().map(|&x| t.mul(beta, x)).collect();
            assert_eq!(lhs, rhs);
            assert!(mb.is_invertible(&t));
        }
        assert!(m_beta(&t, &g, t.generator()).is_err());
    }

    #[test]
    fn f16_group_is_45_and_matches_brute() {
        let c = f16_gab();
        let t = c.tower().clone();
        let a = rm_aut_group(&c).unwrap();
        assert_eq!(a.order(), 45);
        assert!(verify_fixes_rm(&a, c.code()));
        let ex = RmMap::linear(&t, Elem::ONE, Mat::from_ints(&t, &[&[0, 1], &[1, 1]])).unwrap();
        assert!(a.contains(&ex));
        let b = rm_aut_brute(c.code(), false, RM_BRUTE_GUARD).unwrap();
        assert_eq!(a.elements(), b.elements());
        assert!(a.is_closed(&t));
        assert!(b.is_closed(&t));
    }

    #[test]
    fn d1_group_is_scalars() {
        let t = f16();
        let g = IndependentTuple::new(&t, vec![Elem::ONE, t.generator()]).unwrap();
        let c = gabidulin(t.clone(), 1, g).unwrap();
        let a = rm_aut_group(&c).unwrap();
        assert_eq!(a.order(), 15);
        assert!(a.elements().iter().all(|f| f.l().is_identity()));
        assert_eq!(a.elements(), rm_aut_brute(c.code(), false, RM_BRUTE_GUARD).unwrap().elements());
    }

    #[test]
    fn full_space_stabilizer_is_whole_group() {
        let t = Arc::new(Tower::new(2, 1, 3).unwrap());
        let c = RankMetricCode::new(t.clone(), Mat::identity(2, FieldTag::Top)).unwrap();
        let b = rm_aut_brute(&c, false, RM_BRUTE_GUARD).unwrap();
        assert_eq!(b.order(), 42);
        let bs = rm_aut_brute(&c, true, RM_BRUTE_GUARD).unwrap();
        assert_eq!(bs.order(), 42 * 3);
        assert!(bs.is_closed(&t));
    }

    #[test]
    fn q3_random_vectors_match_brute() {
        let t = Arc::new(Tower::new(3, 1, 4).unwrap());
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0);
        let mut done = 0;
        while done < 3 {
            let g = vec![Elem(rng.gen_range(1..81)), Elem(rng.gen_range(1..81))];
            let Ok(g) = IndependentTuple::new(&t, g) else { continue };
            let c = gabidulin(t.clone(), 1, g).unwrap();
            let a = rm_aut_group(&c).unwrap();
            let b = rm_aut_brute(c.code(), false, RM_BRUTE_GUARD).unwrap();
            assert_eq!(a.elements(), b.elements());
            done += 1;
        }
    }

    #[test]
    fn mat_subgroup_inside_brute() {
        let t = Arc::new(Tower::new(2, 1, 3).unwrap());
        let g = IndependentTuple::new(&t, vec![Elem::ONE, t.generator()]).unwrap();
        let c = gabidulin(t.clone(), 1, g).unwrap();
        let b = OrderedBasis::power(&t);
        let sub = mat_aut_subgroup(&c, &b).unwrap();
        let rm = rm_aut_group(&c).unwrap();
        assert_eq!(sub.order(), rm.order());
        assert!(!sub.complete);
        let mc = expanded(&c, &b);
        assert!(verify_fixes_mat(&sub, &mc));
        let full = mat_aut_brute(&mc, false, MAT_BRUTE_GUARD).unwrap();
        assert!(sub.elements().iter().all(|f| full.contains(f)));
        assert!(full.is_closed(&t));
        assert!(sub.is_closed(&t));
    }

    #[test]
    fn e11_stabilizer() {
        let t = Arc::new(Tower::new(2, 1, 2).unwrap());
        let mc = MatrixCode::new(t.clone(), 2, 2, vec![Mat::from_ints(&t, &[&[1, 0], &[0, 0]])]).unwrap();
        let s = mat_aut_brute(&mc, false, MAT_BRUTE_GUARD).unwrap();
        assert!(s.is_closed(&t));
        // L e_1 = e_1 up to scalar and e_1 M = e_1: 2 choices each for L and M, plus the transpose of each.
        assert_eq!(s.order(), 8);
        let zero = MatrixCode::from_spanning(t.clone(), 2, 2, &[Mat::zeros(2, 2, FieldTag::Base)]).unwrap();
        assert_eq!(mat_aut_brute(&zero, false, MAT_BRUTE_GUARD).unwrap().order(), 72);
    }

    #[test]
    fn stabilizer_degree_divides_gcd() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0);
        let towers = [Tower::new(2, 1, 4).unwrap(), Tower::new(2, 1, 6).unwrap(), Tower::new(3, 1, 4).unwrap()];
        let mut count = 0;
        while count < 200 {
            let t = &towers[count % towers.len()];
            let l = rng.gen_range(1..t.m() as usize);
            let g: Vec<Elem> = (0..l).map(|_| Elem(rng.gen_range(1..t.size()))).collect();
            let Ok(g) = IndependentTuple::new(t, g) else { continue };
            let sd = stabilizer_degree(t, &g);
            assert_eq!(gcd(l as u64, t.m() as u64) % sd.d as u64, 0);
            // Oracle: every element of F_{q^d} keeps every g_i inside W.
            for beta in t.subfield(sd.d).unwrap() {
                for &x in g.elems() {
                    assert!(beta.is_zero() || g.coords(t, t.mul(beta, x)).is_ok());
                }
            }
            count += 1;
        }
    }
}
