//! Sparse bivariate polynomials over arbitrary-precision rationals.
//!
//! Terms live in a `BTreeMap` keyed by [`Monomial`], ordered by total degree
//! and then x-before-y within a degree. That order is the canonical one used
//! everywhere: iteration, printing, and witness selection all agree on it.
//! The map never stores a zero coefficient, so `==` is structural equality of
//! canonical forms.

use alloc::collections::btree_map::Entry;
use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// Exact rational coefficient. Always in reduced form with positive
/// denominator; zero is 0/1.
pub type Rational = num_rational::BigRational;

/// A power product `x^xexp * y^yexp`.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Monomial {
    pub xexp: u32,
    pub yexp: u32,
}

impl Monomial {
    pub fn new(xexp: u32, yexp: u32) -> Self {
        Monomial { xexp, yexp }
    }

    pub fn degree(&self) -> u32 {
        self.xexp + self.yexp
    }
}

impl Ord for Monomial {
    // Graded order, x before y: x^2 < xy < y^2, and lower total degree first.
    fn cmp(&self, other: &Self) -> Ordering {
        (self.degree(), self.yexp).cmp(&(other.degree(), other.yexp))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x^{}*y^{}", self.xexp, self.yexp)
    }
}

/// Sparse polynomial in x and y with [`Rational`] coefficients.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct BivarPoly {
    terms: BTreeMap<Monomial, Rational>,
}

impl BivarPoly {
    pub fn zero() -> Self {
        BivarPoly::default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn constant(c: Rational) -> Self {
        Self::term(0, 0, c)
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn var_x() -> Self {
        Self::term(1, 0, Rational::one())
    }

    pub fn var_y() -> Self {
        Self::term(0, 1, Rational::one())
    }

    /// Single term `c * x^xexp * y^yexp`; the zero polynomial when c = 0.
    pub fn term(xexp: u32, yexp: u32, c: Rational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Monomial::new(xexp, yexp), c);
        }
        BivarPoly { terms }
    }

    /// Sums duplicate monomials and drops zero coefficients.
    pub fn from_terms<I>(it: I) -> Self
    where
        I: IntoIterator<Item = (u32, u32, Rational)>,
    {
        let mut p = BivarPoly::zero();
        for (xe, ye, c) in it {
            p.add_term(Monomial::new(xe, ye), c);
        }
        p
    }

    fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    /// Coefficient of `x^xexp * y^yexp` (zero if absent).
    pub fn coefficient(&self, xexp: u32, yexp: u32) -> Rational {
        self.terms
            .get(&Monomial::new(xexp, yexp))
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    pub fn constant_term(&self) -> Rational {
        self.coefficient(0, 0)
    }

    /// Terms in canonical order (graded, x before y).
    pub fn terms(&self) -> impl Iterator<Item = (Monomial, &Rational)> + '_ {
        self.terms.iter().map(|(m, c)| (*m, c))
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().next_back().map(|m| m.degree())
    }

    /// Smallest total degree among the terms; `None` for zero.
    pub fn min_degree(&self) -> Option<u32> {
        self.terms.keys().next().map(|m| m.degree())
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(*m, c.clone());
        }
        out
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(*m, -c.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        BivarPoly {
            terms: self.terms.iter().map(|(m, c)| (*m, -c.clone())).collect(),
        }
    }

    pub fn scale(&self, k: &Rational) -> Self {
        if k.is_zero() {
            return BivarPoly::zero();
        }
        BivarPoly {
            terms: self.terms.iter().map(|(m, c)| (*m, c * k)).collect(),
        }
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        let mut out = BivarPoly::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(Monomial::new(ma.xexp + mb.xexp, ma.yexp + mb.yexp), ca * cb);
            }
        }
        out
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut base = self.clone();
        let mut out = BivarPoly::one();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                out = out.mul(&base);
            }
            n >>= 1;
            if n > 0 {
                base = base.mul(&base);
            }
        }
        out
    }

    pub fn partial_x(&self) -> Self {
        let mut out = BivarPoly::zero();
        for (m, c) in &self.terms {
            if m.xexp > 0 {
                out.add_term(
                    Monomial::new(m.xexp - 1, m.yexp),
                    c * Rational::from_integer(BigInt::from(m.xexp)),
                );
            }
        }
        out
    }

    pub fn partial_y(&self) -> Self {
        let mut out = BivarPoly::zero();
        for (m, c) in &self.terms {
            if m.yexp > 0 {
                out.add_term(
                    Monomial::new(m.xexp, m.yexp - 1),
                    c * Rational::from_integer(BigInt::from(m.yexp)),
                );
            }
        }
        out
    }

    /// Terms of total degree exactly `d`.
    pub fn homogeneous_component(&self, d: u32) -> Self {
        BivarPoly {
            terms: self
                .terms
                .range(Monomial::new(d, 0)..=Monomial::new(0, d))
                .map(|(m, c)| (*m, c.clone()))
                .collect(),
        }
    }

    /// Split into homogeneous components, keyed by total degree.
    /// Only degrees that actually occur appear in the result.
    pub fn homogeneous_components(&self) -> BTreeMap<u32, BivarPoly> {
        let mut out: BTreeMap<u32, BivarPoly> = BTreeMap::new();
        for (m, c) in &self.terms {
            out.entry(m.degree())
                .or_insert_with(BivarPoly::zero)
                .add_term(*m, c.clone());
        }
        out
    }

    /// Drop every term of total degree above `bound`.
    pub fn truncated(&self, bound: u32) -> Self {
        BivarPoly {
            terms: self
                .terms
                .iter()
                .take_while(|(m, _)| m.degree() <= bound)
                .map(|(m, c)| (*m, c.clone()))
                .collect(),
        }
    }

    /// Substitute `x -> u, y -> v`. Exact; no truncation.
    pub fn compose(&self, u: &Self, v: &Self) -> Self {
        compose_many(&[self], u, v, None).pop().unwrap()
    }

    /// Substitute `x -> u, y -> v`, discarding all terms of total degree
    /// above `bound` along the way. Requires `u` and `v` to have zero
    /// constant term: then discarded terms can never influence kept ones,
    /// and the result equals `compose(u, v).truncated(bound)`.
    pub fn compose_truncated(&self, u: &Self, v: &Self, bound: u32) -> Self {
        assert!(
            u.constant_term().is_zero() && v.constant_term().is_zero(),
            "truncated composition requires constant-free substituents"
        );
        compose_many(&[self], u, v, Some(bound)).pop().unwrap()
    }
}

impl core::ops::Add for &BivarPoly {
    type Output = BivarPoly;
    fn add(self, rhs: &BivarPoly) -> BivarPoly {
        BivarPoly::add(self, rhs)
    }
}

impl core::ops::Sub for &BivarPoly {
    type Output = BivarPoly;
    fn sub(self, rhs: &BivarPoly) -> BivarPoly {
        BivarPoly::sub(self, rhs)
    }
}

impl core::ops::Mul for &BivarPoly {
    type Output = BivarPoly;
    fn mul(self, rhs: &BivarPoly) -> BivarPoly {
        BivarPoly::mul(self, rhs)
    }
}

impl core::ops::Neg for &BivarPoly {
    type Output = BivarPoly;
    fn neg(self) -> BivarPoly {
        BivarPoly::neg(self)
    }
}

// ---------------------------------------------------------------------------
// Composition engine.
//
// Composition dominates the pipeline's running time (inverse verification
// substitutes degree-12 pairs into degree-12 witnesses). Rational arithmetic
// reduces by gcd on every operation, which is ruinous in the inner loop, so
// the engine clears denominators once, runs a scaled Horner scheme over
// BigInt, and divides back exactly at the end:
//
//   p(u,v) = [ sum_i uh^i du^(imax-i) * R_i ] / (dp * du^imax * dv^jmax)
//   R_i    = sum_j ph[i,j] * vh^j * dv^(jmax-j)
//
// where ph = dp*p, uh = du*u, vh = dv*v are integer polynomials.
// ---------------------------------------------------------------------------

// Integer terms kept sorted by (xexp, yexp): the sweep order of the
// accumulation grid below, so products come out pre-sorted for merging.
type IntTerms = Vec<(Monomial, BigInt)>;

fn xy_key(m: &Monomial) -> (u32, u32) {
    (m.xexp, m.yexp)
}

fn cleared(p: &BivarPoly) -> (IntTerms, BigInt) {
    let mut den = BigInt::one();
    for (_, c) in &p.terms {
        den = den.lcm(c.denom());
    }
    let mut terms: IntTerms = p
        .terms
        .iter()
        .map(|(m, c)| (*m, c.numer() * (&den / c.denom())))
        .collect();
    terms.sort_unstable_by_key(|(m, _)| xy_key(m));
    (terms, den)
}

// Scratch space for sparse products. Accumulating through a tree is ruinous
// in the inner loop (a tree-node walk plus allocator traffic per term), so
// products accumulate into a dense exponent grid in O(1) per term and an
// ordered sweep over the touched rectangle collects the result, leaving every
// cell zero again for reuse.
struct MulGrid {
    width: usize,
    cells: Vec<BigInt>,
}

impl MulGrid {
    // Callers must never produce an exponent above max_exp in either
    // variable; compose_many sizes this from the degrees it substitutes.
    fn new(max_exp: u32) -> MulGrid {
        let width = max_exp as usize + 1;
        MulGrid {
            width,
            cells: alloc::vec![BigInt::zero(); width * width],
        }
    }

    fn mul(&mut self, a: &IntTerms, b: &IntTerms, bound: Option<u32>) -> IntTerms {
        if a.is_empty() || b.is_empty() {
            return IntTerms::new();
        }
        let (outer, inner) = if a.len() <= b.len() { (a, b) } else { (b, a) };
        let mut xlo = u32::MAX;
        let mut xhi = 0;
        let mut ylo = u32::MAX;
        let mut yhi = 0;
        for (ma, ca) in outer {
            for (mb, cb) in inner {
                let xe = ma.xexp + mb.xexp;
                let ye = ma.yexp + mb.yexp;
                if let Some(bnd) = bound {
                    if xe + ye > bnd {
                        continue;
                    }
                }
                self.cells[xe as usize * self.width + ye as usize] += ca * cb;
                xlo = xlo.min(xe);
                xhi = xhi.max(xe);
                ylo = ylo.min(ye);
                yhi = yhi.max(ye);
            }
        }
        let mut out = IntTerms::new();
        if xlo == u32::MAX {
            return out;
        }
        for xe in xlo..=xhi {
            let base = xe as usize * self.width;
            for ye in ylo..=yhi {
                let cell = &mut self.cells[base + ye as usize];
                if !cell.is_zero() {
                    out.push((Monomial::new(xe, ye), core::mem::take(cell)));
                }
            }
        }
        out
    }
}

// acc + k * p as a sorted merge
fn int_axpy(acc: IntTerms, p: &IntTerms, k: &BigInt) -> IntTerms {
    if k.is_zero() || p.is_empty() {
        return acc;
    }
    let mut out = IntTerms::with_capacity(acc.len() + p.len());
    let mut ai = acc.into_iter().peekable();
    let mut pi = p.iter().peekable();
    loop {
        match (ai.peek(), pi.peek()) {
            (Some((am, _)), Some((pm, _))) => match xy_key(am).cmp(&xy_key(pm)) {
                core::cmp::Ordering::Less => out.push(ai.next().unwrap()),
                core::cmp::Ordering::Greater => {
                    let (m, c) = pi.next().unwrap();
                    out.push((*m, c * k));
                }
                core::cmp::Ordering::Equal => {
                    let (m, c) = ai.next().unwrap();
                    let (_, pc) = pi.next().unwrap();
                    let sum = c + pc * k;
                    if !sum.is_zero() {
                        out.push((m, sum));
                    }
                }
            },
            (Some(_), None) => out.push(ai.next().unwrap()),
            (None, Some(_)) => {
                let (m, c) = pi.next().unwrap();
                out.push((*m, c * k));
            }
            (None, None) => break,
        }
    }
    out
}

fn int_powers(base: &IntTerms, up_to: u32, bound: Option<u32>, grid: &mut MulGrid) -> Vec<IntTerms> {
    let mut pows = Vec::with_capacity(up_to as usize + 1);
    pows.push(alloc::vec![(Monomial::new(0, 0), BigInt::one())]);
    for j in 1..=up_to {
        pows.push(grid.mul(&pows[(j - 1) as usize], base, bound));
    }
    pows
}

fn scalar_powers(base: &BigInt, up_to: u32) -> Vec<BigInt> {
    let mut pows = Vec::with_capacity(up_to as usize + 1);
    pows.push(BigInt::one());
    for j in 1..=up_to {
        pows.push(&pows[(j - 1) as usize] * base);
    }
    pows
}

/// Substitute the same pair `(u, v)` into several polynomials, sharing the
/// power tables. With `bound` set, all arithmetic is truncated to that total
/// degree (callers must guarantee `u`, `v` have no constant term).
pub fn compose_many(ps: &[&BivarPoly], u: &BivarPoly, v: &BivarPoly, bound: Option<u32>) -> Vec<BivarPoly> {
    let (uh, du) = cleared(u);
    let (vh, dv) = cleared(v);
    let deg_u = u.total_degree().unwrap_or(0);
    let deg_v = v.total_degree().unwrap_or(0);

    // Every intermediate the Horner scheme forms has total degree at most
    // max over input terms x^i y^j of i*deg(u) + j*deg(v), so truncating all
    // products there is exact; a caller bound below it truncates for real.
    let mut jmax_all = 0;
    let mut cap = 0;
    for p in ps {
        for m in p.terms.keys() {
            jmax_all = jmax_all.max(m.yexp);
            cap = cap.max(m.xexp * deg_u + m.yexp * deg_v);
        }
    }
    let cap = bound.map_or(cap, |b| cap.min(b));
    let mut grid = MulGrid::new(cap);
    let vpow = int_powers(&vh, jmax_all, Some(cap), &mut grid);
    let dvpow = scalar_powers(&dv, jmax_all);

    ps.iter()
        .map(|p| {
            if p.is_zero() {
                return BivarPoly::zero();
            }
            let (ph, dp) = cleared(p);
            let imax = ph.iter().map(|(m, _)| m.xexp).max().unwrap();
            let jmax = ph.iter().map(|(m, _)| m.yexp).max().unwrap();
            let dupow = scalar_powers(&du, imax);

            // R_i = sum_j ph[i,j] * vh^j * dv^(jmax-j), grouped by x-exponent
            let mut rows: BTreeMap<u32, IntTerms> = BTreeMap::new();
            for (m, c) in &ph {
                let k = c * &dvpow[(jmax - m.yexp) as usize];
                let row = rows.entry(m.xexp).or_default();
                *row = int_axpy(core::mem::take(row), &vpow[m.yexp as usize], &k);
            }

            let mut acc = IntTerms::new();
            for i in (0..=imax).rev() {
                if !acc.is_empty() {
                    acc = grid.mul(&acc, &uh, Some(cap));
                }
                if let Some(r) = rows.get(&i) {
                    acc = int_axpy(acc, r, &dupow[(imax - i) as usize]);
                }
            }

            let denom = &dp * &dupow[imax as usize] * &dvpow[jmax as usize];
            BivarPoly {
                terms: acc
                    .into_iter()
                    .map(|(m, c)| (m, Rational::new(c, denom.clone())))
                    .filter(|(_, c)| !c.is_zero())
                    .collect(),
            }
        })
        .collect()
}

// ---------------------------------------------------------------------------
// Printing. Canonical form: terms ascending in the graded order, "*" between
// factors, "^" for exponents, coefficient 1 elided, e.g. "x - 3*y^2 + 1/2*x*y".
// ---------------------------------------------------------------------------

fn fmt_term(f: &mut fmt::Formatter<'_>, m: &Monomial, c: &Rational) -> fmt::Result {
    let is_const = m.xexp == 0 && m.yexp == 0;
    if is_const || !c.is_one() {
        write!(f, "{}", c)?;
        if !is_const {
            write!(f, "*")?;
        }
    }
    if m.xexp > 0 {
        write!(f, "x")?;
        if m.xexp > 1 {
            write!(f, "^{}", m.xexp)?;
        }
        if m.yexp > 0 {
            write!(f, "*")?;
        }
    }
    if m.yexp > 0 {
        write!(f, "y")?;
        if m.yexp > 1 {
            write!(f, "^{}", m.yexp)?;
        }
    }
    Ok(())
}

impl fmt::Display for BivarPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (idx, (m, c)) in self.terms.iter().enumerate() {
            if idx == 0 {
                fmt_term(f, m, c)?;
            } else if c.is_negative() {
                write!(f, " - ")?;
                fmt_term(f, m, &-c.clone())?;
            } else {
                write!(f, " + ")?;
                fmt_term(f, m, c)?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for BivarPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}
