//! The Jacobian determinant of a map pair and its classification as a unit.

use num_traits::Zero;

use crate::error::Error;
use crate::poly::{BivarPoly, Rational};

/// f_x g_y - f_y g_x.
pub fn jacobian(f: &BivarPoly, g: &BivarPoly) -> BivarPoly {
    let fx = f.partial_x();
    let fy = f.partial_y();
    let gx = g.partial_x();
    let gy = g.partial_y();
    &(&fx * &gy) - &(&fy * &gx)
}

/// Coefficient of x^a y^b in the Jacobian of (f, g).
pub fn jacobian_coefficient(f: &BivarPoly, g: &BivarPoly, a: u32, b: u32) -> Rational {
    jacobian(f, g).coefficient(a, b)
}

/// The Jacobian together with its constancy verdict.
///
/// `constant_value` is `Some` exactly when the Jacobian is a constant
/// polynomial (zero included); `nonconstant_witness` is the first
/// positive-degree term in canonical monomial order, as
/// (x-exponent, y-exponent, coefficient).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JacobianReport {
    pub jacobian: BivarPoly,
    pub constant_value: Option<Rational>,
    pub nonconstant_witness: Option<(u32, u32, Rational)>,
}

impl JacobianReport {
    /// True when the Jacobian is a nonzero constant.
    pub fn is_unit(&self) -> bool {
        match &self.constant_value {
            Some(c) => !c.is_zero(),
            None => false,
        }
    }
}

/// Compute the Jacobian and classify it.
pub fn classify_jacobian(f: &BivarPoly, g: &BivarPoly) -> JacobianReport {
    let j = jacobian(f, g);
    let witness = j
        .terms()
        .find(|(m, _)| m.degree() > 0)
        .map(|(m, c)| (m.xexp, m.yexp, c.clone()));
    let constant_value = if witness.is_none() { Some(j.constant_term()) } else { None };
    JacobianReport { jacobian: j, constant_value, nonconstant_witness: witness }
}

/// Classify and demand a unit; the error carries the full report.
pub fn ensure_unit_jacobian(f: &BivarPoly, g: &BivarPoly) -> Result<JacobianReport, Error> {
    let report = classify_jacobian(f, g);
    if report.is_unit() {
        Ok(report)
    } else {
        Err(Error::JacobianNotUnit(report))
    }
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
    fn identity_map_has_unit_jacobian() {
        let report = classify_jacobian(&p(&[(1, 0, 1)]), &p(&[(0, 1, 1)]));
        assert_eq!(report.constant_value, Some(rat(1)));
        assert!(report.is_unit());
        assert_eq!(report.nonconstant_witness, None);
    }

    #[test]
    fn shear_pair_cancels_to_constant() {
        // f = x + 3(x+y)^2, g = y - 3(x+y)^2
        let u2 = p(&[(2, 0, 1), (1, 1, 2), (0, 2, 1)]);
        let f = p(&[(1, 0, 1)]).add(&u2.scale(&rat(3)));
        let g = p(&[(0, 1, 1)]).sub(&u2.scale(&rat(3)));
        assert_eq!(jacobian(&f, &g), BivarPoly::constant(rat(1)));
        assert!(classify_jacobian(&f, &g).is_unit());
    }

    #[test]
    fn nonconstant_jacobian_reports_first_term() {
        // (x + x^2, y): J = 1 + 2x
        let f = p(&[(1, 0, 1), (2, 0, 1)]);
        let g = p(&[(0, 1, 1)]);
        let report = classify_jacobian(&f, &g);
        assert_eq!(report.jacobian, p(&[(0, 0, 1), (1, 0, 2)]));
        assert_eq!(report.constant_value, None);
        assert_eq!(report.nonconstant_witness, Some((1, 0, rat(2))));
        assert!(!report.is_unit());
        assert!(matches!(
            ensure_unit_jacobian(&f, &g),
            Err(Error::JacobianNotUnit(r)) if r.nonconstant_witness == Some((1, 0, rat(2)))
        ));
    }

    #[test]
    fn degenerate_pair_is_zero() {
        let f = p(&[(1, 0, 1)]);
        let report = classify_jacobian(&f, &f);
        assert_eq!(report.constant_value, Some(rat(0)));
        assert_eq!(report.nonconstant_witness, None);
        assert!(!report.is_unit());
    }

    #[test]
    fn jacobian_is_multiplicative_under_composition() {
        // F = (x + y^2, y), G = (x, y + x^2); J(F o G) = (JF o G) * JG
        let (f1, f2) = (p(&[(1, 0, 1), (0, 2, 1)]), p(&[(0, 1, 1)]));
        let (g1, g2) = (p(&[(1, 0, 1)]), p(&[(0, 1, 1), (2, 0, 1)]));
        let c1 = f1.compose(&g1, &g2);
        let c2 = f2.compose(&g1, &g2);
        let lhs = jacobian(&c1, &c2);
        let rhs = &jacobian(&f1, &f2).compose(&g1, &g2) * &jacobian(&g1, &g2);
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn coefficient_lookup_matches_full_jacobian() {
        let f = p(&[(1, 0, 1), (0, 3, 2), (2, 1, -1)]);
        let g = p(&[(0, 1, 1), (3, 0, 5)]);
        let j = jacobian(&f, &g);
        for (m, c) in j.terms() {
            assert_eq!(jacobian_coefficient(&f, &g, m.xexp, m.yexp), *c);
        }
        assert!(jacobian_coefficient(&f, &g, 9, 9).is_zero());
    }
}
