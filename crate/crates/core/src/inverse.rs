//! Case classification of a vanishing-minor coefficient table, closed-form
//! inverse synthesis, exact composition verification, and the full
//! input-to-witness pipeline.

use alloc::format;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::error::Error;
use crate::jacobian::ensure_unit_jacobian;
use crate::mapform::{decompose, is_scattered, normalize_linear, DegreeDecomposition};
use crate::poly::{compose_many, BivarPoly, Rational};
use crate::structure::{extract_c_table, verify_minors, CoefficientTable};

fn int(n: u32) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Which normal form the nonlinear rows follow. The signals are the two
/// leading entries of each row: c_{d+1,0} (zero or not) and c_{d,1} (zero or
/// not), and vanishing minors force the same signal on every degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CaseTag {
    /// No nonlinear degrees at all.
    Linear,
    /// c_{d+1,0} = 0 everywhere; each row carries only c_{0,d+1}.
    Case1,
    /// c_{d+1,0} != 0 and c_{d,1} = 0 everywhere; each row carries only
    /// c_{d+1,0}.
    Case2,
    /// c_{d+1,0} != 0 and c_{d,1} != 0 everywhere; the rows share the ratio
    /// r = c_{d,1} / ((d+1) c_{d+1,0}) and the map collapses along x + r y.
    Case3 { ratio: Rational },
}

/// An explicit inverse candidate: substituting (f, g) into (x, y) of these
/// polynomials gives back the coordinates, and vice versa.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InverseWitness {
    pub x: BivarPoly,
    pub y: BivarPoly,
    pub verified: bool,
    pub case: CaseTag,
}

/// Decide the case from the leading-entry signals of every nonlinear row,
/// and assert the rest of the pattern each case promises. Expects a table
/// whose minors all vanish; any deviation from the promised patterns is an
/// internal inconsistency, not an input property.
pub fn classify_case(
    table: &CoefficientTable,
    dec: &DegreeDecomposition,
) -> Result<CaseTag, Error> {
    let degrees: Vec<u32> = dec.nonlinear_degrees().collect();
    if degrees.is_empty() {
        return Ok(CaseTag::Linear);
    }

    let first = degrees[0];
    let lead_zero = table.value(first, 0).is_zero();
    for &d in &degrees[1..] {
        if table.value(d, 0).is_zero() != lead_zero {
            return Err(Error::StructureInconsistent(format!(
                "degrees {} and {} disagree on whether c_{{d+1,0}} vanishes",
                first, d
            )));
        }
    }

    if lead_zero {
        for &d in &degrees {
            for b in 1..=d {
                if !table.value(d, b).is_zero() {
                    return Err(Error::StructureInconsistent(format!(
                        "degree {} has c_{{d+1,0}} = 0 but interior entry b = {} is nonzero",
                        d, b
                    )));
                }
            }
            if table.value(d, d + 1).is_zero() {
                return Err(Error::StructureInconsistent(format!(
                    "degree {} has an all-zero coefficient row",
                    d
                )));
            }
        }
        return Ok(CaseTag::Case1);
    }

    let next_zero = table.value(first, 1).is_zero();
    for &d in &degrees[1..] {
        if table.value(d, 1).is_zero() != next_zero {
            return Err(Error::StructureInconsistent(format!(
                "degrees {} and {} disagree on whether c_{{d,1}} vanishes",
                first, d
            )));
        }
    }

    if next_zero {
        for &d in &degrees {
            for b in 1..=d + 1 {
                if !table.value(d, b).is_zero() {
                    return Err(Error::StructureInconsistent(format!(
                        "degree {} has c_{{d,1}} = 0 but entry b = {} is nonzero",
                        d, b
                    )));
                }
            }
        }
        return Ok(CaseTag::Case2);
    }

    let ratio_of = |d: u32| table.value(d, 1) / &(&int(d + 1) * table.value(d, 0));
    let ratio = ratio_of(first);
    for &d in &degrees[1..] {
        let other = ratio_of(d);
        if other != ratio {
            return Err(Error::StructureInconsistent(format!(
                "collapse ratio differs between degrees {} ({}) and {} ({})",
                first, ratio, d, other
            )));
        }
    }
    Ok(CaseTag::Case3 { ratio })
}

/// Build the closed-form inverse for the classified case and verify it by
/// exact composition against the decomposition's own map. A nonzero
/// residual is an internal failure carried out in the error.
pub fn synthesize_inverse(
    dec: &DegreeDecomposition,
    table: &CoefficientTable,
    tag: CaseTag,
) -> Result<InverseWitness, Error> {
    let x = BivarPoly::var_x();
    let y = BivarPoly::var_y();
    let (xw, yw) = match &tag {
        CaseTag::Linear => (x, y),
        CaseTag::Case1 => {
            // X = x - sum (d+1) c_{0,d+1} y^d, Y = y
            let mut xw = x;
            for d in dec.nonlinear_degrees() {
                let coeff = &int(d + 1) * table.value(d, d + 1);
                xw = xw.sub(&BivarPoly::term(0, d, coeff));
            }
            (xw, y)
        }
        CaseTag::Case2 => {
            // X = x, Y = y + sum (d+1) c_{d+1,0} x^d
            let mut yw = y;
            for d in dec.nonlinear_degrees() {
                let coeff = &int(d + 1) * table.value(d, 0);
                yw = yw.add(&BivarPoly::term(d, 0, coeff));
            }
            (x, yw)
        }
        CaseTag::Case3 { ratio } => {
            // X = x - sum c_{d,1} u^d, Y = y + sum (d+1) c_{d+1,0} u^d,
            // with u = x + r y shared across degrees.
            let u = BivarPoly::var_x().add(&BivarPoly::term(0, 1, ratio.clone()));
            let maxd = dec.max_degree().expect("nonlinear degree present") as usize;
            let mut upow = Vec::with_capacity(maxd + 1);
            upow.push(BivarPoly::constant(int(1)));
            for _ in 1..=maxd {
                upow.push(upow.last().unwrap() * &u);
            }
            let mut xw = x;
            let mut yw = y;
            for d in dec.nonlinear_degrees() {
                xw = xw.sub(&upow[d as usize].scale(table.value(d, 1)));
                yw = yw.add(&upow[d as usize].scale(&(&int(d + 1) * table.value(d, 0))));
            }
            (xw, yw)
        }
    };

    let (f, g) = dec.resum();
    match verification_residual(&f, &g, &xw, &yw) {
        None => Ok(InverseWitness { x: xw, y: yw, verified: true, case: tag }),
        Some((identity, residual)) => Err(Error::VerificationFailed { identity, residual }),
    }
}

/// The first failing composition among X(f,g) = x, Y(f,g) = y, f(X,Y) = x,
/// g(X,Y) = y, with its residual. `None` means the witness is exact both
/// ways. The two compositions per direction share substituent power tables.
pub(crate) fn verification_residual(
    f: &BivarPoly,
    g: &BivarPoly,
    xw: &BivarPoly,
    yw: &BivarPoly,
) -> Option<(&'static str, BivarPoly)> {
    let x = BivarPoly::var_x();
    let y = BivarPoly::var_y();
    let forward = compose_many(&[xw, yw], f, g, None);
    if forward[0] != x {
        return Some(("X(f, g) - x", forward[0].sub(&x)));
    }
    if forward[1] != y {
        return Some(("Y(f, g) - y", forward[1].sub(&y)));
    }
    let backward = compose_many(&[f, g], xw, yw, None);
    if backward[0] != x {
        return Some(("f(X, Y) - x", backward[0].sub(&x)));
    }
    if backward[1] != y {
        return Some(("g(X, Y) - y", backward[1].sub(&y)));
    }
    None
}

/// True iff the witness inverts (f, g) exactly, compositions in both orders.
pub fn verify_inverse(f: &BivarPoly, g: &BivarPoly, w: &InverseWitness) -> bool {
    verification_residual(f, g, &w.x, &w.y).is_none()
}

/// Full pipeline: decompose, check the degree set, check the Jacobian,
/// normalize the linear part, extract coefficients, check minors, classify,
/// synthesize, and undo the normalization. On success the witness is
/// verified against the original pair by exact composition and its total
/// degree equals the input's maximum degree.
pub fn invert_map(f: &BivarPoly, g: &BivarPoly) -> Result<InverseWitness, Error> {
    let dec = decompose(f, g)?;
    is_scattered(dec.degrees()).map_err(Error::NotScattered)?;
    ensure_unit_jacobian(f, g)?;

    let (fn_, gn, l) = normalize_linear(f, g)?;
    let ndec = decompose(&fn_, &gn)?;
    let table = extract_c_table(&ndec)?;

    let minors = verify_minors(&table);
    if !minors.all_vanish {
        let (d, e, i, j, value) = minors.first_nonzero().expect("non-vanishing report");
        return Err(Error::StructureInconsistent(format!(
            "minor ({}, {}) of degrees ({}, {}) equals {} despite a unit Jacobian and scattered degrees",
            i, j, d, e, value
        )));
    }

    let tag = classify_case(&table, &ndec)?;
    let normalized = synthesize_inverse(&ndec, &table, tag)?;

    let witness = if l.is_identity() {
        normalized
    } else {
        // X = Xn(L^-1 applied to the coordinates), same for Y; re-verify
        // against the original pair so the returned flag never relies on
        // the normalization algebra being right.
        let linv = l.inverse().expect("normalization rejected singular linear parts");
        let xw = linv.pullback(&normalized.x);
        let yw = linv.pullback(&normalized.y);
        if let Some((identity, residual)) = verification_residual(f, g, &xw, &yw) {
            return Err(Error::VerificationFailed { identity, residual });
        }
        InverseWitness { x: xw, y: yw, verified: true, case: normalized.case }
    };

    let input_degree = dec.max_degree().expect("decomposition is nonempty");
    let witness_degree = witness.x.total_degree().max(witness.y.total_degree());
    if witness_degree != Some(input_degree) {
        return Err(Error::StructureInconsistent(format!(
            "inverse degree {:?} differs from input degree {}",
            witness_degree, input_degree
        )));
    }
    Ok(witness)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64) -> Rational {
        Rational::from_integer(BigInt::from(n))
    }

    fn p(terms: &[(u32, u32, i64)]) -> BivarPoly {
        BivarPoly::from_terms(terms.iter().map(|&(a, b, c)| (a, b, rat(c))))
    }

    fn table_and_dec(f: &BivarPoly, g: &BivarPoly) -> (CoefficientTable, DegreeDecomposition) {
        let dec = decompose(f, g).unwrap();
        let table = extract_c_table(&dec).unwrap();
        (table, dec)
    }

    fn shear_pair() -> (BivarPoly, BivarPoly) {
        let u2 = p(&[(2, 0, 1), (1, 1, 2), (0, 2, 1)]);
        (
            p(&[(1, 0, 1)]).add(&u2.scale(&rat(3))),
            p(&[(0, 1, 1)]).sub(&u2.scale(&rat(3))),
        )
    }

    #[test]
    fn classify_all_three_cases() {
        let (t, dec) = table_and_dec(&p(&[(1, 0, 1), (0, 2, 3)]), &p(&[(0, 1, 1)]));
        assert_eq!(classify_case(&t, &dec), Ok(CaseTag::Case1));

        let (t, dec) = table_and_dec(&p(&[(1, 0, 1)]), &p(&[(0, 1, 1), (2, 0, -3)]));
        assert_eq!(*t.value(2, 0), rat(1));
        assert_eq!(classify_case(&t, &dec), Ok(CaseTag::Case2));

        let (f, g) = shear_pair();
        let (t, dec) = table_and_dec(&f, &g);
        assert_eq!(classify_case(&t, &dec), Ok(CaseTag::Case3 { ratio: rat(1) }));

        let (t, dec) = table_and_dec(&p(&[(1, 0, 1)]), &p(&[(0, 1, 1)]));
        assert_eq!(classify_case(&t, &dec), Ok(CaseTag::Linear));
    }

    #[test]
    fn classify_rejects_pattern_violations() {
        // f = x + 3y^2, g = y - 3x^2 extracts to row [1, 0, 0, 1]: the
        // Case-2 signal with a Case-1 tail.
        let (t, dec) = table_and_dec(&p(&[(1, 0, 1), (0, 2, 3)]), &p(&[(0, 1, 1), (2, 0, -3)]));
        assert_eq!(t.row(2).unwrap(), &[rat(1), rat(0), rat(0), rat(1)]);
        assert!(matches!(classify_case(&t, &dec), Err(Error::StructureInconsistent(_))));
    }

    #[test]
    fn classify_rejects_mixed_signals_across_degrees() {
        // degree 2 Case-1 shaped, degree 5 Case-2 shaped
        let f = p(&[(1, 0, 1), (0, 2, 3)]);
        let g = p(&[(0, 1, 1), (5, 0, 2)]);
        let (t, dec) = table_and_dec(&f, &g);
        assert!(matches!(classify_case(&t, &dec), Err(Error::StructureInconsistent(_))));
    }

    #[test]
    fn synthesize_case1_and_linear() {
        let f = p(&[(1, 0, 1), (0, 2, 3)]);
        let g = p(&[(0, 1, 1)]);
        let (t, dec) = table_and_dec(&f, &g);
        let w = synthesize_inverse(&dec, &t, CaseTag::Case1).unwrap();
        assert_eq!(w.x, p(&[(1, 0, 1), (0, 2, -3)]));
        assert_eq!(w.y, p(&[(0, 1, 1)]));
        assert!(w.verified);

        let (t, dec) = table_and_dec(&p(&[(1, 0, 1)]), &p(&[(0, 1, 1)]));
        let w = synthesize_inverse(&dec, &t, CaseTag::Linear).unwrap();
        assert_eq!((w.x, w.y), (p(&[(1, 0, 1)]), p(&[(0, 1, 1)])));
    }

    #[test]
    fn synthesize_case3_collapses_along_shared_line() {
        let (f, g) = shear_pair();
        let (t, dec) = table_and_dec(&f, &g);
        let tag = classify_case(&t, &dec).unwrap();
        let w = synthesize_inverse(&dec, &t, tag).unwrap();
        // X = x - 3(x+y)^2, Y = y + 3(x+y)^2
        let u2 = p(&[(2, 0, 1), (1, 1, 2), (0, 2, 1)]);
        assert_eq!(w.x, p(&[(1, 0, 1)]).sub(&u2.scale(&rat(3))));
        assert_eq!(w.y, p(&[(0, 1, 1)]).add(&u2.scale(&rat(3))));
        assert!(w.verified);
        assert_eq!(w.case, CaseTag::Case3 { ratio: rat(1) });
    }

    #[test]
    fn verify_inverse_examples() {
        let f = p(&[(1, 0, 1), (0, 2, 3)]);
        let g = p(&[(0, 1, 1)]);
        let good = InverseWitness {
            x: p(&[(1, 0, 1), (0, 2, -3)]),
            y: p(&[(0, 1, 1)]),
            verified: true,
            case: CaseTag::Case1,
        };
        assert!(verify_inverse(&f, &g, &good));

        let bad = InverseWitness {
            x: p(&[(1, 0, 1), (0, 2, -3)]),
            y: p(&[(0, 1, 1), (1, 0, 1)]),
            verified: false,
            case: CaseTag::Case1,
        };
        assert!(!verify_inverse(&f, &g, &bad));

        let id = InverseWitness {
            x: p(&[(1, 0, 1)]),
            y: p(&[(0, 1, 1)]),
            verified: true,
            case: CaseTag::Linear,
        };
        assert!(verify_inverse(&p(&[(1, 0, 1)]), &p(&[(0, 1, 1)]), &id));
    }

    #[test]
    fn invert_map_undoes_a_twisted_input() {
        // f = y, g = -x - y^3: linear part [[0,1],[-1,0]]
        let f = p(&[(0, 1, 1)]);
        let g = p(&[(1, 0, -1), (0, 3, -1)]);
        let w = invert_map(&f, &g).unwrap();
        assert!(w.verified);
        assert_eq!(w.x, p(&[(0, 1, -1), (3, 0, -1)]));
        assert_eq!(w.y, p(&[(1, 0, 1)]));
        assert_eq!(w.case, CaseTag::Case1);
        assert!(verify_inverse(&f, &g, &w));
    }

    #[test]
    fn invert_map_on_normal_forms() {
        let w = invert_map(&p(&[(1, 0, 1), (0, 2, 3)]), &p(&[(0, 1, 1)])).unwrap();
        assert_eq!(w.x, p(&[(1, 0, 1), (0, 2, -3)]));
        assert_eq!(w.y, p(&[(0, 1, 1)]));

        let (f, g) = shear_pair();
        let w = invert_map(&f, &g).unwrap();
        assert!(w.verified);
        assert!(verify_inverse(&f, &g, &w));
        let deg = w.x.total_degree().max(w.y.total_degree());
        assert_eq!(deg, Some(2));
    }

    #[test]
    fn invert_map_error_paths_fire_in_pipeline_order() {
        // constant term first
        assert!(matches!(
            invert_map(&p(&[(0, 0, 1), (1, 0, 1)]), &p(&[(0, 1, 1)])),
            Err(Error::ConstantTermPresent { .. })
        ));
        // degree set {1,2,3} beats the (also broken) Jacobian
        let f = p(&[(1, 0, 1), (0, 2, 1)]);
        let g = p(&[(0, 1, 1), (0, 3, 1)]);
        match invert_map(&f, &g) {
            Err(Error::NotScattered(w)) => {
                assert_eq!((w.d_i, w.d_j, w.d_p, w.d_q), (1, 3, 2, 2));
            }
            other => panic!("expected NotScattered, got {:?}", other),
        }
        // unit-Jacobian failure with the first bad coefficient
        match invert_map(&p(&[(1, 0, 1), (2, 0, 1)]), &p(&[(0, 1, 1)])) {
            Err(Error::JacobianNotUnit(r)) => {
                assert_eq!(r.nonconstant_witness, Some((1, 0, rat(2))));
            }
            other => panic!("expected JacobianNotUnit, got {:?}", other),
        }
    }

    #[test]
    fn invert_map_handles_general_linear_twists() {
        // shear pair post-composed with [[2,1],[1,1]]
        let (f0, g0) = shear_pair();
        let f = f0.scale(&rat(2)).add(&g0);
        let g = f0.add(&g0);
        let w = invert_map(&f, &g).unwrap();
        assert!(w.verified);
        assert!(verify_inverse(&f, &g, &w));
        assert_eq!(w.case, CaseTag::Case3 { ratio: rat(1) });
    }
}
