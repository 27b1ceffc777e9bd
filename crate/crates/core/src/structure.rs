//! The coefficient table of a normalized map, the 2 x (d+1) structure
//! matrices built from it, their 2 x 2 minors, and the algebraic identities
//! tying those minors to Jacobian coefficients.
//!
//! For a degree-d homogeneous pair written as f_d = sum s_{a,b} x^a y^b,
//! g_d = sum t_{a,b} x^a y^b on top of linear part (x, y), a constant
//! Jacobian forces (d-j+1) s_{d-j+1,j-1} + j t_{d-j,j} = 0 for 1 <= j <= d.
//! Those constraints are solved once and for all by a single row of values
//! c[0..=d+1], where c[b] stands for c_{d+1-b,b}:
//!
//!   s_{d-j+1,j-1} =  j * c[j]            (j = 1..=d+1)
//!   t_{d-j,j}     = -(d-j+1) * c[j]      (j = 0..=d)
//!
//! Everything downstream is a statement about these c values.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::error::Error;
use crate::jacobian::jacobian;
use crate::mapform::DegreeDecomposition;
use crate::poly::{BivarPoly, Rational};

fn int(n: u32) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// One row of c values per nonlinear degree. Row d has d+2 entries indexed
/// by b = 0..=d+1, with c[b] denoting c_{d+1-b,b}.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoefficientTable {
    rows: BTreeMap<u32, Vec<Rational>>,
}

impl CoefficientTable {
    /// Build from explicit rows. Each degree must be at least 2 and carry
    /// exactly d+2 values.
    pub fn from_rows<I>(rows: I) -> Result<CoefficientTable, Error>
    where
        I: IntoIterator<Item = (u32, Vec<Rational>)>,
    {
        let mut map = BTreeMap::new();
        for (d, row) in rows {
            if d < 2 {
                return Err(Error::InvalidSpec(String::from(
                    "coefficient rows exist for degrees >= 2 only",
                )));
            }
            if row.len() != d as usize + 2 {
                return Err(Error::InvalidSpec(String::from(
                    "coefficient row for degree d must have d+2 entries",
                )));
            }
            map.insert(d, row);
        }
        Ok(CoefficientTable { rows: map })
    }

    /// Ascending degrees present in the table.
    pub fn degrees(&self) -> impl Iterator<Item = u32> + '_ {
        self.rows.keys().copied()
    }

    pub fn row(&self, d: u32) -> Option<&[Rational]> {
        self.rows.get(&d).map(|r| r.as_slice())
    }

    /// c_{d+1-b,b}. Panics when the degree is absent or b > d+1; checking
    /// membership is the caller's job.
    pub fn value(&self, d: u32, b: u32) -> &Rational {
        &self.rows[&d][b as usize]
    }

    /// f_d = sum_{b=1}^{d+1} b * c[b] * x^{d+1-b} y^{b-1}.
    pub fn reconstruct_f(&self, d: u32) -> BivarPoly {
        let row = &self.rows[&d];
        BivarPoly::from_terms(
            (1..=d + 1).map(|b| (d + 1 - b, b - 1, &int(b) * &row[b as usize])),
        )
    }

    /// g_d = -sum_{b=0}^{d} (d+1-b) * c[b] * x^{d-b} y^b.
    pub fn reconstruct_g(&self, d: u32) -> BivarPoly {
        let row = &self.rows[&d];
        BivarPoly::from_terms(
            (0..=d).map(|b| (d - b, b, -(&int(d + 1 - b) * &row[b as usize]))),
        )
    }

    /// (x + sum_d f_d, y + sum_d g_d) over every degree in the table.
    pub fn reconstruct_map(&self) -> (BivarPoly, BivarPoly) {
        let mut f = BivarPoly::var_x();
        let mut g = BivarPoly::var_y();
        for d in self.degrees() {
            f = f.add(&self.reconstruct_f(d));
            g = g.add(&self.reconstruct_g(d));
        }
        (f, g)
    }
}

/// Read the c table off a decomposition whose linear part is exactly (x, y).
///
/// For each nonlinear degree, c[b] is divided out of the f-side coefficient
/// (b >= 1) or the g-side boundary (b = 0), and every interior position is
/// cross-checked against the g side: a nonzero residual
/// (d-j+1) s_{d-j+1,j-1} + j t_{d-j,j} is exactly a nonzero forced Jacobian
/// coefficient and aborts extraction. Degrees ascend and j ascends within a
/// degree, so the reported failure is the first one.
pub fn extract_c_table(dec: &DegreeDecomposition) -> Result<CoefficientTable, Error> {
    match dec.component(1) {
        Some((f1, g1)) if *f1 == BivarPoly::var_x() && *g1 == BivarPoly::var_y() => {}
        _ => {
            return Err(Error::StructureInconsistent(String::from(
                "coefficient extraction needs the linear part normalized to (x, y)",
            )))
        }
    }
    let mut rows: BTreeMap<u32, Vec<Rational>> = BTreeMap::new();
    for d in dec.nonlinear_degrees() {
        let (fd, gd) = dec.component(d).expect("listed degree has a component");
        let mut row = vec![Rational::zero(); d as usize + 2];
        row[0] = -(&gd.coefficient(d, 0) / &int(d + 1));
        for b in 1..=d + 1 {
            let s = fd.coefficient(d + 1 - b, b - 1);
            if b <= d {
                let t = gd.coefficient(d - b, b);
                let residual = &(&int(d + 1 - b) * &s) + &(&int(b) * &t);
                if !residual.is_zero() {
                    return Err(Error::InconsistentCoefficients { degree: d, j: b, residual });
                }
            }
            row[b as usize] = &s / &int(b);
        }
        rows.insert(d, row);
    }
    Ok(CoefficientTable { rows })
}

/// The 2 x (d+1) matrix attached to degree d:
///
///   row 1:  1*c[1]      2*c[2]    ...  (d+1)*c[d+1]
///   row 2:  (d+1)*c[0]  d*c[1]    ...  1*c[d]
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StructureMatrix {
    pub degree: u32,
    row1: Vec<Rational>,
    row2: Vec<Rational>,
}

impl StructureMatrix {
    pub fn columns(&self) -> usize {
        self.row1.len()
    }

    /// Column i (1-based) as (row-1 entry, row-2 entry).
    pub fn column(&self, i: usize) -> (&Rational, &Rational) {
        (&self.row1[i - 1], &self.row2[i - 1])
    }

    pub fn rows(&self) -> (&[Rational], &[Rational]) {
        (&self.row1, &self.row2)
    }

    pub fn is_zero(&self) -> bool {
        self.row1.iter().chain(&self.row2).all(Rational::is_zero)
    }
}

/// Assemble the structure matrix for a degree present in the table.
pub fn build_structure_matrix(d: u32, table: &CoefficientTable) -> StructureMatrix {
    let row = table.row(d).expect("degree must be present in the table");
    let row1 = (1..=d + 1).map(|i| &int(i) * &row[i as usize]).collect();
    let row2 = (1..=d + 1).map(|i| &int(d + 2 - i) * &row[i as usize - 1]).collect();
    StructureMatrix { degree: d, row1, row2 }
}

/// Determinant of columns i and j (1-based) of one matrix.
pub fn minor_a(a: &StructureMatrix, i: usize, j: usize) -> Rational {
    let (ai1, ai2) = a.column(i);
    let (aj1, aj2) = a.column(j);
    &(ai1 * aj2) - &(aj1 * ai2)
}

/// Determinant of [column i of Ap | column j of Aq]. With Ap = Aq this is
/// minor_a.
pub fn minor_b(ap: &StructureMatrix, aq: &StructureMatrix, i: usize, j: usize) -> Rational {
    let (pi1, pi2) = ap.column(i);
    let (qj1, qj2) = aq.column(j);
    &(pi1 * qj2) - &(qj1 * pi2)
}

/// One same-degree minor value: columns (i, j) of the degree-d matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AMinor {
    pub degree: u32,
    pub i: usize,
    pub j: usize,
    pub value: Rational,
}

/// One cross-degree minor value: column i of the degree-d matrix against
/// column j of the degree-e matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BMinor {
    pub degrees: (u32, u32),
    pub i: usize,
    pub j: usize,
    pub value: Rational,
}

/// Every A- and B-minor of a table, in deterministic order (degree
/// ascending, then i, then j), plus the joint vanishing flag.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MinorReport {
    pub a_minors: Vec<AMinor>,
    pub b_minors: Vec<BMinor>,
    pub all_vanish: bool,
}

impl MinorReport {
    /// First nonzero value in report order, as (label data, value):
    /// a-minors first, then b-minors.
    pub fn first_nonzero(&self) -> Option<(u32, u32, usize, usize, &Rational)> {
        for m in &self.a_minors {
            if !m.value.is_zero() {
                return Some((m.degree, m.degree, m.i, m.j, &m.value));
            }
        }
        for m in &self.b_minors {
            if !m.value.is_zero() {
                return Some((m.degrees.0, m.degrees.1, m.i, m.j, &m.value));
            }
        }
        None
    }
}

/// Compute every same-degree minor (i < j within each degree) and every
/// cross-degree minor (all column pairs for each degree pair d < e).
pub fn verify_minors(table: &CoefficientTable) -> MinorReport {
    let degrees: Vec<u32> = table.degrees().collect();
    let matrices: BTreeMap<u32, StructureMatrix> =
        degrees.iter().map(|&d| (d, build_structure_matrix(d, table))).collect();

    let mut a_minors = Vec::new();
    for &d in &degrees {
        let a = &matrices[&d];
        let n = a.columns();
        for i in 1..=n {
            for j in i + 1..=n {
                a_minors.push(AMinor { degree: d, i, j, value: minor_a(a, i, j) });
            }
        }
    }

    let mut b_minors = Vec::new();
    for (di, &d) in degrees.iter().enumerate() {
        for &e in &degrees[di + 1..] {
            let ap = &matrices[&d];
            let aq = &matrices[&e];
            for i in 1..=ap.columns() {
                for j in 1..=aq.columns() {
                    b_minors.push(BMinor {
                        degrees: (d, e),
                        i,
                        j,
                        value: minor_b(ap, aq, i, j),
                    });
                }
            }
        }
    }

    let all_vanish = a_minors.iter().map(|m| &m.value).all(Rational::is_zero)
        && b_minors.iter().map(|m| &m.value).all(Rational::is_zero);
    MinorReport { a_minors, b_minors, all_vanish }
}

/// Both sides of the same-degree band expansion, for 2 <= m <= d+1:
///
///   J_{2d-m, m-2}  vs  -sum_{i=1}^{m-1} (d-i+1)(m-i) A_{(i, m-i+1)}
///
/// where J is the Jacobian of the pure pair (x + f_d, y + g_d) rebuilt from
/// the table. The two sides agree for every table, whatever the c values.
pub fn check_lemma_identity(table: &CoefficientTable, d: u32, m: u32) -> (Rational, Rational) {
    assert!((2..=d + 1).contains(&m), "band index m must lie in 2..=d+1");
    let f = BivarPoly::var_x().add(&table.reconstruct_f(d));
    let g = BivarPoly::var_y().add(&table.reconstruct_g(d));
    let lhs = jacobian(&f, &g).coefficient(2 * d - m, m - 2);

    let a = build_structure_matrix(d, table);
    let mut rhs = Rational::zero();
    for i in 1..=m - 1 {
        let weight = int((d - i + 1) * (m - i));
        rhs = &rhs - &(&weight * &minor_a(&a, i as usize, (m - i + 1) as usize));
    }
    (lhs, rhs)
}

/// Both sides of the squared cross-minor expansion for distinct degrees
/// d, e >= 2:
///
///   B_{(d+1,e+1)}^2  vs  A^e_{(e,e+1)} (d+1)^2/e c_{0,d+1}^2
///                      + A^d_{(d,d+1)} (e+1)^2/d c_{0,e+1}^2
///                      + J_{0,d+e-2} (d+1)(e+1)/(de) c_{0,d+1} c_{0,e+1}
///
/// with J read from the Jacobian of the two-component map
/// (x + f_d + f_e, y + g_d + g_e). Holds for every table.
pub fn check_bsquare_identity(
    table: &CoefficientTable,
    d: u32,
    e: u32,
) -> Result<(Rational, Rational), Error> {
    if d < 2 {
        return Err(Error::DegreeTooSmall { degree: d });
    }
    if e < 2 {
        return Err(Error::DegreeTooSmall { degree: e });
    }
    assert!(d != e, "cross-minor identity needs distinct degrees");

    let ad = build_structure_matrix(d, table);
    let ae = build_structure_matrix(e, table);
    let b = minor_b(&ad, &ae, d as usize + 1, e as usize + 1);
    let lhs = &b * &b;

    let c0d = table.value(d, d + 1);
    let c0e = table.value(e, e + 1);
    let j0 = cross_jacobian_coefficient(table, d, e);

    let term1 = &(&minor_a(&ae, e as usize, e as usize + 1) * &(&(&int(d + 1) * &int(d + 1)) / &int(e)))
        * &(c0d * c0d);
    let term2 = &(&minor_a(&ad, d as usize, d as usize + 1) * &(&(&int(e + 1) * &int(e + 1)) / &int(d)))
        * &(c0e * c0e);
    let term3 = &(&j0 * &(&(&int(d + 1) * &int(e + 1)) / &int(d * e))) * &(c0d * c0e);
    let rhs = &(&term1 + &term2) + &term3;
    Ok((lhs, rhs))
}

/// Both sides of the cross-band ladder for distinct degrees in the table:
///
///   J_{0, d+e-2}  vs  d B_{(d+1,e)} - e B_{(d,e+1)}
///
/// the bottom rung of the cross-degree band of the Jacobian, expressed in
/// the two cross minors that involve a boundary column. Holds for every
/// table.
pub fn check_ladder_identity(table: &CoefficientTable, d: u32, e: u32) -> (Rational, Rational) {
    assert!(d != e, "cross-band ladder needs distinct degrees");
    let lhs = cross_jacobian_coefficient(table, d, e);
    let ad = build_structure_matrix(d, table);
    let ae = build_structure_matrix(e, table);
    let rhs = &(&int(d) * &minor_b(&ad, &ae, d as usize + 1, e as usize))
        - &(&int(e) * &minor_b(&ad, &ae, d as usize, e as usize + 1));
    (lhs, rhs)
}

/// J_{0, d+e-2} of (x + f_d + f_e, y + g_d + g_e). Only the cross products
/// of the two degrees can land on total degree d+e-2 when d != e and both
/// exceed 1, so this isolates the mixed band.
fn cross_jacobian_coefficient(table: &CoefficientTable, d: u32, e: u32) -> Rational {
    let f = BivarPoly::var_x().add(&table.reconstruct_f(d)).add(&table.reconstruct_f(e));
    let g = BivarPoly::var_y().add(&table.reconstruct_g(d)).add(&table.reconstruct_g(e));
    jacobian(&f, &g).coefficient(0, d + e - 2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mapform::decompose;

    fn rat(n: i64) -> Rational {
        Rational::from_integer(BigInt::from(n))
    }

    fn p(terms: &[(u32, u32, i64)]) -> BivarPoly {
        BivarPoly::from_terms(terms.iter().map(|&(a, b, c)| (a, b, rat(c))))
    }

    fn row(vals: &[i64]) -> Vec<Rational> {
        vals.iter().map(|&v| rat(v)).collect()
    }

    fn table(rows: &[(u32, &[i64])]) -> CoefficientTable {
        CoefficientTable::from_rows(rows.iter().map(|&(d, vals)| (d, row(vals)))).unwrap()
    }

    fn shear_pair() -> (BivarPoly, BivarPoly) {
        // f = x + 3(x+y)^2, g = y - 3(x+y)^2
        let u2 = p(&[(2, 0, 1), (1, 1, 2), (0, 2, 1)]);
        (
            p(&[(1, 0, 1)]).add(&u2.scale(&rat(3))),
            p(&[(0, 1, 1)]).sub(&u2.scale(&rat(3))),
        )
    }

    #[test]
    fn extract_single_boundary_coefficient() {
        // f = x + 3y^2, g = y: only c_{0,3} = 1 survives
        let dec = decompose(&p(&[(1, 0, 1), (0, 2, 3)]), &p(&[(0, 1, 1)])).unwrap();
        let t = extract_c_table(&dec).unwrap();
        assert_eq!(t.row(2).unwrap(), row(&[0, 0, 0, 1]).as_slice());
    }

    #[test]
    fn extract_shear_row_and_reconstruct() {
        let (f, g) = shear_pair();
        let dec = decompose(&f, &g).unwrap();
        let t = extract_c_table(&dec).unwrap();
        assert_eq!(t.row(2).unwrap(), row(&[1, 3, 3, 1]).as_slice());
        let (fd, gd) = dec.component(2).unwrap();
        assert_eq!(&t.reconstruct_f(2), fd);
        assert_eq!(&t.reconstruct_g(2), gd);
        assert_eq!(t.reconstruct_map(), (f, g));
    }

    #[test]
    fn extract_flags_first_residual() {
        // f = x + x^2, g = y: 2*s_{2,0} + 1*t_{1,1} = 2
        let dec = decompose(&p(&[(1, 0, 1), (2, 0, 1)]), &p(&[(0, 1, 1)])).unwrap();
        match extract_c_table(&dec) {
            Err(Error::InconsistentCoefficients { degree, j, residual }) => {
                assert_eq!((degree, j), (2, 1));
                assert_eq!(residual, rat(2));
            }
            other => panic!("expected InconsistentCoefficients, got {:?}", other),
        }
    }

    #[test]
    fn extract_requires_normalized_linear_part() {
        let dec = decompose(&p(&[(0, 1, 1)]), &p(&[(1, 0, -1)])).unwrap();
        assert!(matches!(extract_c_table(&dec), Err(Error::StructureInconsistent(_))));
        let dec = decompose(&p(&[(2, 0, 1)]), &p(&[(0, 2, 1)])).unwrap();
        assert!(matches!(extract_c_table(&dec), Err(Error::StructureInconsistent(_))));
    }

    #[test]
    fn matrix_from_shear_table() {
        let t = table(&[(2, &[1, 3, 3, 1])]);
        let a = build_structure_matrix(2, &t);
        assert_eq!(a.rows(), (row(&[3, 6, 3]).as_slice(), row(&[3, 6, 3]).as_slice()));
        assert_eq!(minor_a(&a, 1, 2), rat(0));
    }

    #[test]
    fn matrix_edge_patterns() {
        let zero = table(&[(2, &[0, 0, 0, 0])]);
        assert!(build_structure_matrix(2, &zero).is_zero());

        let boundary = table(&[(2, &[0, 0, 0, 1])]);
        let a = build_structure_matrix(2, &boundary);
        assert_eq!(a.rows(), (row(&[0, 0, 3]).as_slice(), row(&[0, 0, 0]).as_slice()));
        assert_eq!(minor_a(&a, 1, 3), rat(0));
    }

    #[test]
    fn nonvanishing_minor_detected() {
        // c_{2,1} = c_{1,2} = 1 at d = 2: A = [[1,2,0],[0,2,1]]
        let t = table(&[(2, &[0, 1, 1, 0])]);
        let a = build_structure_matrix(2, &t);
        assert_eq!(a.rows(), (row(&[1, 2, 0]).as_slice(), row(&[0, 2, 1]).as_slice()));
        assert_eq!(minor_a(&a, 1, 2), rat(2));
        let report = verify_minors(&t);
        assert!(!report.all_vanish);
        assert_eq!(report.first_nonzero().unwrap(), (2, 2, 1, 2, &rat(2)));
    }

    #[test]
    fn cross_minor_flags_mixed_case_rows() {
        // shear row at d=2 against a boundary-only row at e=3
        let t = table(&[(2, &[1, 3, 3, 1]), (3, &[0, 0, 0, 0, 1])]);
        let ap = build_structure_matrix(2, &t);
        let aq = build_structure_matrix(3, &t);
        assert_eq!(aq.rows(), (row(&[0, 0, 0, 4]).as_slice(), row(&[0, 0, 0, 0]).as_slice()));
        assert_eq!(minor_b(&ap, &aq, 1, 4), rat(-12));
        assert_eq!(minor_b(&ap, &ap, 1, 2), minor_a(&ap, 1, 2));
        assert!(!verify_minors(&t).all_vanish);
    }

    #[test]
    fn minor_report_shape_and_order() {
        let t = table(&[(2, &[1, 3, 3, 1]), (3, &[0, 0, 0, 0, 1])]);
        let report = verify_minors(&t);
        assert_eq!(report.a_minors.len(), 3 + 6);
        assert_eq!(report.b_minors.len(), 3 * 4);
        assert_eq!(
            report.a_minors.iter().map(|m| (m.degree, m.i, m.j)).take(4).collect::<Vec<_>>(),
            [(2, 1, 2), (2, 1, 3), (2, 2, 3), (3, 1, 2)]
        );
        assert_eq!(report.b_minors[0].degrees, (2, 3));
        assert_eq!((report.b_minors[0].i, report.b_minors[0].j), (1, 1));
        assert_eq!(
            (report.b_minors.last().unwrap().i, report.b_minors.last().unwrap().j),
            (3, 4)
        );
    }

    #[test]
    fn proportional_rows_make_all_minors_vanish() {
        let (f, g) = shear_pair();
        let t = extract_c_table(&decompose(&f, &g).unwrap()).unwrap();
        assert!(verify_minors(&t).all_vanish);

        let t = extract_c_table(
            &decompose(&p(&[(1, 0, 1), (0, 2, 3)]), &p(&[(0, 1, 1)])).unwrap(),
        )
        .unwrap();
        assert!(verify_minors(&t).all_vanish);
    }

    #[test]
    fn band_expansion_holds_for_generic_tables() {
        // no constraint on the c values: both sides must agree identically
        let t = table(&[(2, &[5, -3, 7, 2]), (3, &[1, 4, -2, 6, -5]), (4, &[2, 0, 3, -1, 4, 9])]);
        for d in [2u32, 3, 4] {
            for m in 2..=d + 1 {
                let (lhs, rhs) = check_lemma_identity(&t, d, m);
                assert_eq!(lhs, rhs, "band mismatch at d={}, m={}", d, m);
            }
        }
        let zero = table(&[(2, &[0, 0, 0, 0])]);
        assert_eq!(check_lemma_identity(&zero, 2, 2), (rat(0), rat(0)));
        let shear = table(&[(2, &[1, 3, 3, 1])]);
        assert_eq!(check_lemma_identity(&shear, 2, 2), (rat(0), rat(0)));
    }

    #[test]
    fn squared_cross_minor_holds_for_generic_tables() {
        let t = table(&[(2, &[5, -3, 7, 2]), (3, &[1, 4, -2, 6, -5])]);
        let (lhs, rhs) = check_bsquare_identity(&t, 2, 3).unwrap();
        assert_eq!(lhs, rhs);
        assert!(!lhs.is_zero(), "generic values should exercise a nonzero case");

        let zero = table(&[(2, &[0, 0, 0, 0]), (3, &[0, 0, 0, 0, 0])]);
        assert_eq!(check_bsquare_identity(&zero, 2, 3).unwrap(), (rat(0), rat(0)));

        assert_eq!(
            check_bsquare_identity(&t, 1, 3),
            Err(Error::DegreeTooSmall { degree: 1 })
        );
    }

    #[test]
    fn cross_band_ladder_holds_for_generic_tables() {
        let t = table(&[(2, &[5, -3, 7, 2]), (3, &[1, 4, -2, 6, -5]), (5, &[1, 2, 3, 4, 5, 6, 7])]);
        for (d, e) in [(2u32, 3u32), (2, 5), (3, 5)] {
            let (lhs, rhs) = check_ladder_identity(&t, d, e);
            assert_eq!(lhs, rhs, "ladder mismatch at ({}, {})", d, e);
        }
    }

    #[test]
    fn table_shape_is_validated() {
        assert!(matches!(
            CoefficientTable::from_rows([(1u32, row(&[1, 2, 3]))]),
            Err(Error::InvalidSpec(_))
        ));
        assert!(matches!(
            CoefficientTable::from_rows([(2u32, row(&[1, 2, 3]))]),
            Err(Error::InvalidSpec(_))
        ));
    }
}
