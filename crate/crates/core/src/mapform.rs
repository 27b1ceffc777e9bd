//! Degree decomposition of a map pair, the scattered-degrees test, and
//! normalization of the linear part.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use num_traits::Zero;

use crate::error::Error;
use crate::poly::{BivarPoly, Rational};

/// A pair (f, g) split into homogeneous components, indexed by the degrees
/// where at least one of the two components is nonzero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegreeDecomposition {
    degrees: Vec<u32>,
    components: BTreeMap<u32, (BivarPoly, BivarPoly)>,
}

impl DegreeDecomposition {
    /// Ascending, distinct.
    pub fn degrees(&self) -> &[u32] {
        &self.degrees
    }

    pub fn component(&self, d: u32) -> Option<(&BivarPoly, &BivarPoly)> {
        self.components.get(&d).map(|(p, q)| (p, q))
    }

    pub fn max_degree(&self) -> Option<u32> {
        self.degrees.last().copied()
    }

    pub fn has_linear(&self) -> bool {
        self.components.contains_key(&1)
    }

    /// Degrees other than 1, ascending.
    pub fn nonlinear_degrees(&self) -> impl Iterator<Item = u32> + '_ {
        self.degrees.iter().copied().filter(|&d| d != 1)
    }

    /// Reassemble (f, g) from the components.
    pub fn resum(&self) -> (BivarPoly, BivarPoly) {
        let mut f = BivarPoly::zero();
        let mut g = BivarPoly::zero();
        for (fp, gp) in self.components.values() {
            f = f.add(fp);
            g = g.add(gp);
        }
        (f, g)
    }
}

/// Split (f, g) by total degree. The listed degrees are exactly those where
/// (f_d, g_d) != (0, 0). Rejects maps with constant terms.
pub fn decompose(f: &BivarPoly, g: &BivarPoly) -> Result<DegreeDecomposition, Error> {
    let fc = f.constant_term();
    let gc = g.constant_term();
    if !fc.is_zero() || !gc.is_zero() {
        return Err(Error::ConstantTermPresent { f_constant: fc, g_constant: gc });
    }
    let mut components: BTreeMap<u32, (BivarPoly, BivarPoly)> = BTreeMap::new();
    for (d, comp) in f.homogeneous_components() {
        components.entry(d).or_insert_with(|| (BivarPoly::zero(), BivarPoly::zero())).0 = comp;
    }
    for (d, comp) in g.homogeneous_components() {
        components.entry(d).or_insert_with(|| (BivarPoly::zero(), BivarPoly::zero())).1 = comp;
    }
    let degrees = components.keys().copied().collect();
    Ok(DegreeDecomposition { degrees, components })
}

/// A repeated pairwise sum: d_i + d_j = d_p + d_q with {d_i,d_j} != {d_p,d_q}.
/// Both pairs are sorted and the quadruple is the first violation in the
/// lexicographic order of sorted pairs.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ScatterWitness {
    pub d_i: u32,
    pub d_j: u32,
    pub d_p: u32,
    pub d_q: u32,
}

/// Test whether all pairwise sums (with repetition) of the degree set are
/// distinct. `Ok(())` means scattered; the empty set is vacuously scattered.
///
/// The scan is O(n^2) via a sum table; only when a collision exists does it
/// fall back to the quadratic pair enumeration that pins the canonical
/// (lexicographically first) witness.
pub fn is_scattered(degrees: &[u32]) -> Result<(), ScatterWitness> {
    let mut ds: Vec<u32> = degrees.to_vec();
    ds.sort_unstable();
    ds.dedup();

    let mut seen: BTreeMap<u64, (u32, u32)> = BTreeMap::new();
    let mut collision = false;
    'scan: for (ai, &a) in ds.iter().enumerate() {
        for &b in &ds[ai..] {
            let s = a as u64 + b as u64;
            if seen.insert(s, (a, b)).is_some() {
                collision = true;
                break 'scan;
            }
        }
    }
    if !collision {
        return Ok(());
    }

    // Canonical witness: enumerate sorted pairs in lexicographic order and
    // return the first equal-sum pair of pairs.
    let mut pairs: Vec<(u32, u32)> = Vec::new();
    for (ai, &a) in ds.iter().enumerate() {
        for &b in &ds[ai..] {
            pairs.push((a, b));
        }
    }
    pairs.sort_unstable();
    for (pi, &(a, b)) in pairs.iter().enumerate() {
        for &(c, d) in &pairs[pi + 1..] {
            if a as u64 + b as u64 == c as u64 + d as u64 {
                return Err(ScatterWitness { d_i: a, d_j: b, d_p: c, d_q: d });
            }
        }
    }
    unreachable!("sum table found a collision the pair scan missed");
}

/// An invertible change of the output coordinates, row-major:
/// (p, q) -> (m11 p + m12 q, m21 p + m22 q).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearChange {
    pub m11: Rational,
    pub m12: Rational,
    pub m21: Rational,
    pub m22: Rational,
}

impl LinearChange {
    pub fn new(m11: Rational, m12: Rational, m21: Rational, m22: Rational) -> Self {
        LinearChange { m11, m12, m21, m22 }
    }

    pub fn identity() -> Self {
        let one = || Rational::from_integer(1.into());
        let zero = || Rational::zero();
        LinearChange::new(one(), zero(), zero(), one())
    }

    pub fn is_identity(&self) -> bool {
        self == &LinearChange::identity()
    }

    pub fn det(&self) -> Rational {
        &(&self.m11 * &self.m22) - &(&self.m12 * &self.m21)
    }

    pub fn inverse(&self) -> Option<LinearChange> {
        let det = self.det();
        if det.is_zero() {
            return None;
        }
        Some(LinearChange::new(
            &self.m22 / &det,
            -(&self.m12 / &det),
            -(&self.m21 / &det),
            &self.m11 / &det,
        ))
    }

    /// The two rows as linear polynomials (m11 x + m12 y, m21 x + m22 y).
    pub fn forms(&self) -> (BivarPoly, BivarPoly) {
        (
            BivarPoly::from_terms([(1, 0, self.m11.clone()), (0, 1, self.m12.clone())]),
            BivarPoly::from_terms([(1, 0, self.m21.clone()), (0, 1, self.m22.clone())]),
        )
    }

    /// Apply to a pair of values: (m11 p + m12 q, m21 p + m22 q).
    pub fn apply_pair(&self, p: &BivarPoly, q: &BivarPoly) -> (BivarPoly, BivarPoly) {
        (
            p.scale(&self.m11).add(&q.scale(&self.m12)),
            p.scale(&self.m21).add(&q.scale(&self.m22)),
        )
    }

    /// Substitute this change's rows for the variables of `p`:
    /// p(m11 x + m12 y, m21 x + m22 y).
    pub fn pullback(&self, p: &BivarPoly) -> BivarPoly {
        let (u, v) = self.forms();
        p.compose(&u, &v)
    }
}

/// Replace (f, g) by L^-1 (f, g) where L is the degree-1 part, so the result
/// has linear part exactly (x, y). Returns the normalized pair and L;
/// L.apply_pair recovers the input.
pub fn normalize_linear(
    f: &BivarPoly,
    g: &BivarPoly,
) -> Result<(BivarPoly, BivarPoly, LinearChange), Error> {
    let a = f.coefficient(1, 0);
    let b = f.coefficient(0, 1);
    let c = g.coefficient(1, 0);
    let d = g.coefficient(0, 1);
    if a.is_zero() && b.is_zero() && c.is_zero() && d.is_zero() {
        return Err(Error::NoLinearPart);
    }
    let l = LinearChange::new(a, b, c, d);
    let inv = l.inverse().ok_or(Error::SingularLinearPart)?;
    let (fn_, gn) = inv.apply_pair(f, g);
    Ok((fn_, gn, l))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn rat(n: i64) -> Rational {
        Rational::from_integer(BigInt::from(n))
    }

    fn p(terms: &[(u32, u32, i64)]) -> BivarPoly {
        BivarPoly::from_terms(terms.iter().map(|&(a, b, c)| (a, b, rat(c))))
    }

    #[test]
    fn decompose_collects_union_of_degrees() {
        // f = x + 3y^2, g = y - x^3
        let f = p(&[(1, 0, 1), (0, 2, 3)]);
        let g = p(&[(0, 1, 1), (3, 0, -1)]);
        let dec = decompose(&f, &g).unwrap();
        assert_eq!(dec.degrees(), &[1, 2, 3]);
        let (f2, g2) = dec.component(2).unwrap();
        assert_eq!(*f2, p(&[(0, 2, 3)]));
        assert!(g2.is_zero());
        assert_eq!(dec.resum(), (f, g));
        assert_eq!(dec.max_degree(), Some(3));
        assert_eq!(dec.nonlinear_degrees().collect::<Vec<_>>(), [2, 3]);
    }

    #[test]
    fn decompose_rejects_constant_terms() {
        let f = p(&[(0, 0, 1), (1, 0, 1)]);
        let g = p(&[(0, 1, 1)]);
        match decompose(&f, &g) {
            Err(Error::ConstantTermPresent { f_constant, g_constant }) => {
                assert_eq!(f_constant, rat(1));
                assert_eq!(g_constant, rat(0));
            }
            other => panic!("expected ConstantTermPresent, got {:?}", other),
        }
    }

    #[test]
    fn scattered_examples() {
        assert!(is_scattered(&[1]).is_ok());
        assert!(is_scattered(&[1, 2]).is_ok());
        assert!(is_scattered(&[1, 2, 5, 11]).is_ok());
        assert!(is_scattered(&[]).is_ok());
        assert!(is_scattered(&[1, 2, 5, 12]).is_ok());
    }

    #[test]
    fn scattered_violation_has_canonical_witness() {
        let w = is_scattered(&[1, 2, 3]).unwrap_err();
        assert_eq!(w, ScatterWitness { d_i: 1, d_j: 3, d_p: 2, d_q: 2 });

        let w = is_scattered(&[2, 4, 6]).unwrap_err();
        assert_eq!(w, ScatterWitness { d_i: 2, d_j: 6, d_p: 4, d_q: 4 });

        // {1,2,3,4}: earliest violation in pair order is (1,3) vs (2,2).
        let w = is_scattered(&[4, 3, 2, 1]).unwrap_err();
        assert_eq!(w, ScatterWitness { d_i: 1, d_j: 3, d_p: 2, d_q: 2 });
    }

    #[test]
    fn witness_is_lexicographically_first() {
        // {1,3,4,6,7}: violations include ((1,6),(3,4)) and ((1,7),(4,4)).
        let w = is_scattered(&[1, 3, 4, 6, 7]).unwrap_err();
        assert_eq!(w, ScatterWitness { d_i: 1, d_j: 6, d_p: 3, d_q: 4 });
    }

    #[test]
    fn normalize_swaps_and_scales() {
        // f = y, g = -x - y^3: linear part [[0,1],[-1,0]]
        let f = p(&[(0, 1, 1)]);
        let g = p(&[(1, 0, -1), (0, 3, -1)]);
        let (fn_, gn, l) = normalize_linear(&f, &g).unwrap();
        assert_eq!(fn_, p(&[(1, 0, 1), (0, 3, 1)]));
        assert_eq!(gn, p(&[(0, 1, 1)]));
        assert_eq!(l, LinearChange::new(rat(0), rat(1), rat(-1), rat(0)));
        // round trip
        assert_eq!(l.apply_pair(&fn_, &gn), (f, g));
    }

    #[test]
    fn normalize_errors() {
        assert_eq!(
            normalize_linear(&p(&[(2, 0, 1)]), &p(&[(0, 2, 1)])),
            Err(Error::NoLinearPart)
        );
        assert_eq!(
            normalize_linear(&p(&[(1, 0, 1), (0, 1, 1)]), &p(&[(1, 0, 2), (0, 1, 2)])),
            Err(Error::SingularLinearPart)
        );
    }

    #[test]
    fn linear_change_inverse_and_pullback() {
        let l = LinearChange::new(rat(2), rat(1), rat(1), rat(1));
        let inv = l.inverse().unwrap();
        let q = p(&[(1, 1, 1)]);
        // pullback through l then inv is identity
        assert_eq!(inv.pullback(&l.pullback(&q)), q);
        assert!(LinearChange::new(rat(1), rat(2), rat(2), rat(4)).inverse().is_none());
    }
}
