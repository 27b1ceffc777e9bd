//! The four subcommands, as pure functions from arguments to [`Report`].
//! File reading happens here; rendering and exit codes happen in `main`.

use crate::parse::{parse_document, print_poly};
use crate::report::{
    CheckDetails, Details, ErrorEcho, FirstNonzeroEcho, GenerateDetails, InputEcho, InverseEcho,
    JacobianEcho, LinearEcho, MinorsEcho, NonconstantWitness, Report, ScatterEcho, SelftestDetails,
    TableRowEcho, TrialEcho, Verdict,
};
use num_bigint::BigInt;
use num_traits::Zero;
use planeinv_core::inverse::invert_map;
use planeinv_core::jacobian::{classify_jacobian, ensure_unit_jacobian};
use planeinv_core::mapform::{decompose, is_scattered, normalize_linear};
use planeinv_core::oracle::power_series_inverse;
use planeinv_core::structure::{
    check_bsquare_identity, check_ladder_identity, check_lemma_identity, extract_c_table,
    verify_minors, CoefficientTable,
};
use planeinv_core::{
    BivarPoly, CaseTag, Error, GeneratorCase, GeneratorSpec, InverseWitness, JacobianReport,
    LinearChange, MinorReport, Rational,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeSet;
use std::fs;

fn verdict_for(e: &Error) -> Verdict {
    match e {
        Error::NotScattered(_) => Verdict::NotScattered,
        // A missing or singular linear part forces J(0,0) = 0.
        Error::JacobianNotUnit(_) | Error::NoLinearPart | Error::SingularLinearPart => {
            Verdict::JacobianNotUnit
        }
        Error::ConstantTermPresent { .. } | Error::InvalidSpec(_) => Verdict::InvalidSpec,
        Error::InconsistentCoefficients { .. }
        | Error::DegreeTooSmall { .. }
        | Error::StructureInconsistent(_)
        | Error::VerificationFailed { .. } => Verdict::InternalError,
    }
}

fn error_echo(e: &Error) -> ErrorEcho {
    ErrorEcho { message: e.to_string(), line: None, col: None }
}

fn jacobian_echo(rep: &JacobianReport) -> JacobianEcho {
    JacobianEcho {
        unit: rep.is_unit(),
        constant: rep.constant_value.as_ref().map(|c| c.to_string()),
        nonconstant_witness: rep.nonconstant_witness.as_ref().map(|(a, b, c)| {
            NonconstantWitness { a: *a, b: *b, coefficient: c.to_string() }
        }),
    }
}

fn table_echo(table: &CoefficientTable) -> Vec<TableRowEcho> {
    table
        .degrees()
        .map(|d| TableRowEcho {
            degree: d,
            entries: table.row(d).expect("listed degree").iter().map(|c| c.to_string()).collect(),
        })
        .collect()
}

fn minors_echo(rep: &MinorReport) -> MinorsEcho {
    MinorsEcho {
        same_degree_checked: rep.a_minors.len(),
        cross_degree_checked: rep.b_minors.len(),
        all_vanish: rep.all_vanish,
        first_nonzero: rep.first_nonzero().map(|(d, e, i, j, v)| FirstNonzeroEcho {
            degrees: [d, e],
            i,
            j,
            value: v.to_string(),
        }),
    }
}

fn case_echo(case: &CaseTag) -> (String, Option<String>) {
    match case {
        CaseTag::Linear => ("linear".into(), None),
        CaseTag::Case1 => ("1".into(), None),
        CaseTag::Case2 => ("2".into(), None),
        CaseTag::Case3 { ratio } => ("3".into(), Some(ratio.to_string())),
    }
}

fn inverse_echo(w: &InverseWitness) -> InverseEcho {
    let (case, ratio) = case_echo(&w.case);
    InverseEcho {
        x: print_poly(&w.x),
        y: print_poly(&w.y),
        case,
        ratio,
        verified: w.verified,
        total_degree: w.x.total_degree().unwrap_or(0).max(w.y.total_degree().unwrap_or(0)),
    }
}

fn file_report_error(command: &'static str, path: &str, message: String) -> Report {
    Report {
        command,
        input: InputEcho::File { path: path.into(), f: None, g: None },
        verdict: Verdict::ParseError,
        error: Some(ErrorEcho { message, line: None, col: None }),
        details: Details::None {},
    }
}

/// Run the shared stage sequence, filling `stages` as far as it gets.
/// `Err` carries the verdict and error echo for the first failure.
fn run_stages(
    f: &BivarPoly,
    g: &BivarPoly,
    stages: &mut CheckDetails,
) -> Result<(), (Verdict, ErrorEcho)> {
    let dec = decompose(f, g).map_err(|e| (verdict_for(&e), error_echo(&e)))?;
    stages.degrees = Some(dec.degrees().to_vec());

    match is_scattered(dec.degrees()) {
        Ok(()) => stages.scattered = Some(true),
        Err(w) => {
            stages.scattered = Some(false);
            stages.scatter_witness =
                Some(ScatterEcho { d_i: w.d_i, d_j: w.d_j, d_p: w.d_p, d_q: w.d_q });
            let e = Error::NotScattered(w);
            return Err((verdict_for(&e), error_echo(&e)));
        }
    }

    match ensure_unit_jacobian(f, g) {
        Ok(rep) => stages.jacobian = Some(jacobian_echo(&rep)),
        Err(e) => {
            if let Error::JacobianNotUnit(rep) = &e {
                stages.jacobian = Some(jacobian_echo(rep));
            }
            return Err((verdict_for(&e), error_echo(&e)));
        }
    }

    // Everything below is guaranteed by the theory once the two hypotheses
    // hold, so failures map to the internal-error verdict.
    let internal = |e: Error| (verdict_for(&e), error_echo(&e));
    let (fn_, gn, l) = normalize_linear(f, g).map_err(internal)?;
    if !l.is_identity() {
        stages.linear_change = Some(LinearEcho {
            m11: l.m11.to_string(),
            m12: l.m12.to_string(),
            m21: l.m21.to_string(),
            m22: l.m22.to_string(),
        });
    }
    let ndec = decompose(&fn_, &gn).map_err(internal)?;
    let table = extract_c_table(&ndec).map_err(internal)?;
    stages.coefficient_table = Some(table_echo(&table));
    let minors = verify_minors(&table);
    stages.minors = Some(minors_echo(&minors));
    if !minors.all_vanish {
        return Err((
            Verdict::InternalError,
            ErrorEcho {
                message: "a structure-matrix minor is nonzero on a unit-Jacobian scattered map"
                    .into(),
                line: None,
                col: None,
            },
        ));
    }
    Ok(())
}

fn load(command: &'static str, path: &str) -> Result<(crate::parse::MapDocument, InputEcho), Report> {
    let text = match fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) => return Err(file_report_error(command, path, format!("cannot read {}: {}", path, e))),
    };
    match parse_document(&text) {
        Ok(doc) => {
            let input = InputEcho::File {
                path: path.into(),
                f: Some(doc.f_source.clone()),
                g: Some(doc.g_source.clone()),
            };
            Ok((doc, input))
        }
        Err(pe) => Err(Report {
            command,
            input: InputEcho::File { path: path.into(), f: None, g: None },
            verdict: Verdict::ParseError,
            error: Some(ErrorEcho {
                message: format!("found {}, expected {}", pe.found, pe.expected),
                line: Some(pe.line),
                col: Some(pe.col),
            }),
            details: Details::None {},
        }),
    }
}

pub fn cmd_check(path: &str) -> Report {
    let (doc, input) = match load("check", path) {
        Ok(v) => v,
        Err(r) => return r,
    };
    let mut stages = CheckDetails::default();
    let (verdict, error) = match run_stages(&doc.f, &doc.g, &mut stages) {
        Ok(()) => (Verdict::Pass, None),
        Err((v, e)) => (v, Some(e)),
    };
    Report { command: "check", input, verdict, error, details: Details::Check(stages) }
}

pub fn cmd_invert(path: &str) -> Report {
    let (doc, input) = match load("invert", path) {
        Ok(v) => v,
        Err(r) => return r,
    };
    let mut stages = CheckDetails::default();
    let mut inverse = None;
    let (verdict, error) = match run_stages(&doc.f, &doc.g, &mut stages) {
        Err((v, e)) => (v, Some(e)),
        Ok(()) => match invert_map(&doc.f, &doc.g) {
            Ok(w) => {
                inverse = Some(inverse_echo(&w));
                (Verdict::Pass, None)
            }
            Err(e) => (verdict_for(&e), Some(error_echo(&e))),
        },
    };
    Report { command: "invert", input, verdict, error, details: Details::Invert { stages, inverse } }
}

#[derive(Clone, Debug)]
pub struct GenerateArgs {
    pub degrees: Vec<u32>,
    pub case: u8,
    pub coefficient_bound: u32,
    pub seed: u64,
    pub twist: Option<[Rational; 4]>,
}

fn generator_case(n: u8) -> Option<GeneratorCase> {
    match n {
        1 => Some(GeneratorCase::Case1),
        2 => Some(GeneratorCase::Case2),
        3 => Some(GeneratorCase::Case3),
        _ => None,
    }
}

pub fn cmd_generate(args: &GenerateArgs) -> Report {
    let input = InputEcho::Generator {
        degrees: args.degrees.clone(),
        case: args.case,
        coefficient_bound: args.coefficient_bound,
        seed: args.seed,
        twist: args.twist.as_ref().map(|t| {
            [t[0].to_string(), t[1].to_string(), t[2].to_string(), t[3].to_string()]
        }),
    };
    let fail = |message: String| Report {
        command: "generate",
        input: input.clone(),
        verdict: Verdict::InvalidSpec,
        error: Some(ErrorEcho { message, line: None, col: None }),
        details: Details::None {},
    };
    let case = match generator_case(args.case) {
        Some(c) => c,
        None => return fail(format!("case must be 1, 2, or 3, not {}", args.case)),
    };
    let spec = GeneratorSpec {
        degrees: args.degrees.clone(),
        case,
        coefficient_bound: args.coefficient_bound,
        linear_twist: args
            .twist
            .as_ref()
            .map(|t| LinearChange::new(t[0].clone(), t[1].clone(), t[2].clone(), t[3].clone())),
        seed: args.seed,
    };
    let (f, g, w) = match planeinv_core::generate_map(&spec) {
        Ok(v) => v,
        Err(e) => return fail(e.to_string()),
    };
    let inv = inverse_echo(&w);
    let degree_list =
        args.degrees.iter().map(|d| d.to_string()).collect::<Vec<_>>().join(",");
    let mut document = String::new();
    document.push_str(&format!(
        "# degrees {}, case {}, coefficient bound {}, seed {}\n",
        degree_list, args.case, args.coefficient_bound, args.seed
    ));
    if let Some(t) = &args.twist {
        document.push_str(&format!("# twist [{}, {}; {}, {}]\n", t[0], t[1], t[2], t[3]));
    }
    document.push_str(&format!("f = {}\n", print_poly(&f)));
    document.push_str(&format!("g = {}\n", print_poly(&g)));
    document.push_str(&format!("# expected inverse (case {})\n", inv.case));
    document.push_str(&format!("# X = {}\n", inv.x));
    document.push_str(&format!("# Y = {}\n", inv.y));
    Report {
        command: "generate",
        input,
        verdict: Verdict::Pass,
        error: None,
        details: Details::Generate(GenerateDetails {
            f: print_poly(&f),
            g: print_poly(&g),
            inverse: inv,
            document,
        }),
    }
}

#[derive(Clone, Debug)]
pub struct SelftestArgs {
    pub count: u32,
    pub max_degree: u32,
    pub coefficient_bound: u32,
    pub seed: u64,
    pub series_bound: Option<u32>,
}

fn draw_rational(rng: &mut ChaCha8Rng, bound: u32, nonzero: bool) -> Rational {
    let b = i64::from(bound);
    let num = loop {
        let n = rng.gen_range(-b..=b);
        if n != 0 || !nonzero {
            break n;
        }
    };
    let den = rng.gen_range(1..=b);
    Rational::new(BigInt::from(num), BigInt::from(den))
}

fn random_twist(rng: &mut ChaCha8Rng, bound: u32) -> LinearChange {
    loop {
        let l = LinearChange::new(
            draw_rational(rng, bound, false),
            draw_rational(rng, bound, false),
            draw_rational(rng, bound, false),
            draw_rational(rng, bound, false),
        );
        if !l.det().is_zero() {
            return l;
        }
    }
}

fn sample_scattered_degrees(rng: &mut ChaCha8Rng, max_degree: u32) -> Vec<u32> {
    let max_n = 4.min(max_degree);
    loop {
        let n = rng.gen_range(1..=max_n) as usize;
        let mut set = BTreeSet::from([1u32]);
        while set.len() < n {
            set.insert(rng.gen_range(1..=max_degree));
        }
        let v: Vec<u32> = set.into_iter().collect();
        if is_scattered(&v).is_ok() {
            return v;
        }
    }
}

/// One generation / inversion / oracle / identity round; `None` means pass.
fn run_trial(spec: &GeneratorSpec, series_bound: Option<u32>, rng: &mut ChaCha8Rng) -> Option<String> {
    let (f, g, w) = match planeinv_core::generate_map(spec) {
        Ok(v) => v,
        Err(e) => return Some(format!("generate: {}", e)),
    };
    if !w.verified {
        return Some("generator returned an unverified witness".into());
    }
    if !classify_jacobian(&f, &g).is_unit() {
        return Some("generated map has a non-unit Jacobian".into());
    }

    let inv = match invert_map(&f, &g) {
        Ok(v) => v,
        Err(e) => return Some(format!("invert: {}", e)),
    };
    // The inverse of an automorphism is unique, so the pipeline must
    // reproduce the generator's witness exactly.
    if inv.x != w.x || inv.y != w.y {
        return Some("closed-form inverse differs from the generator witness".into());
    }
    let maxd = *spec.degrees.iter().max().expect("nonempty degrees");
    let inv_deg = inv.x.total_degree().unwrap_or(0).max(inv.y.total_degree().unwrap_or(0));
    if inv_deg != maxd.max(1) {
        return Some(format!("inverse degree {} differs from max map degree {}", inv_deg, maxd));
    }

    let minors = (|| {
        let (fn_, gn, _) = normalize_linear(&f, &g)?;
        let ndec = decompose(&fn_, &gn)?;
        let table = extract_c_table(&ndec)?;
        Ok::<_, Error>(verify_minors(&table))
    })();
    match minors {
        Ok(rep) if rep.all_vanish => {}
        Ok(_) => return Some("a structure-matrix minor is nonzero".into()),
        Err(e) => return Some(format!("table extraction: {}", e)),
    }

    let bound = series_bound.map(|b| b.max(maxd + 1)).unwrap_or(maxd + 2);
    match power_series_inverse(&f, &g, bound) {
        Ok(sr) => {
            if !sr.is_polynomial {
                return Some("series inverse does not truncate to a polynomial".into());
            }
            if sr.x != inv.x || sr.y != inv.y {
                return Some("series inverse differs from the closed form".into());
            }
        }
        Err(e) => return Some(format!("series inverse: {}", e)),
    }

    // Identity checks run on an unconstrained random table over the same
    // nonlinear degrees; they must hold with no structure assumed.
    let tdegs: Vec<u32> = spec.degrees.iter().copied().filter(|d| *d >= 2).collect();
    if !tdegs.is_empty() {
        let rows = tdegs.iter().map(|&d| {
            let row = (0..=d + 1)
                .map(|_| draw_rational(rng, spec.coefficient_bound.max(1), false))
                .collect();
            (d, row)
        });
        let table = match CoefficientTable::from_rows(rows) {
            Ok(t) => t,
            Err(e) => return Some(format!("random table: {}", e)),
        };
        for &d in &tdegs {
            for m in 2..=d + 1 {
                let (lhs, rhs) = check_lemma_identity(&table, d, m);
                if lhs != rhs {
                    return Some(format!("lemma identity fails at d = {}, m = {}", d, m));
                }
            }
        }
        for (ai, &d) in tdegs.iter().enumerate() {
            for &e in &tdegs[ai + 1..] {
                match check_bsquare_identity(&table, d, e) {
                    Ok((lhs, rhs)) if lhs == rhs => {}
                    Ok(_) => return Some(format!("B-square identity fails at ({}, {})", d, e)),
                    Err(err) => return Some(format!("B-square identity: {}", err)),
                }
                let (lhs, rhs) = check_ladder_identity(&table, d, e);
                if lhs != rhs {
                    return Some(format!("ladder identity fails at ({}, {})", d, e));
                }
            }
        }
    }
    None
}

pub fn cmd_selftest(args: &SelftestArgs) -> Report {
    let input = InputEcho::Selftest {
        count: args.count,
        max_degree: args.max_degree,
        coefficient_bound: args.coefficient_bound,
        seed: args.seed,
        series_bound: args.series_bound,
    };
    if args.max_degree < 1 || args.coefficient_bound < 1 {
        return Report {
            command: "selftest",
            input,
            verdict: Verdict::InvalidSpec,
            error: Some(ErrorEcho {
                message: "max degree and coefficient bound must be at least 1".into(),
                line: None,
                col: None,
            }),
            details: Details::None {},
        };
    }
    let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
    let mut trials = Vec::with_capacity(args.count as usize);
    let mut failed = 0u32;
    for index in 0..args.count {
        let degrees = sample_scattered_degrees(&mut rng, args.max_degree);
        let case: u8 = rng.gen_range(1..=3);
        let twisted = index % 2 == 1;
        let spec = GeneratorSpec {
            degrees: degrees.clone(),
            case: generator_case(case).expect("case in range"),
            coefficient_bound: args.coefficient_bound,
            linear_twist: twisted.then(|| random_twist(&mut rng, args.coefficient_bound)),
            seed: rng.gen(),
        };
        let failure = run_trial(&spec, args.series_bound, &mut rng);
        if failure.is_some() {
            failed += 1;
        }
        trials.push(TrialEcho {
            index,
            degrees,
            case,
            twisted,
            ok: failure.is_none(),
            failure,
        });
    }
    let passed = args.count - failed;
    Report {
        command: "selftest",
        input,
        verdict: if failed == 0 { Verdict::Pass } else { Verdict::InternalError },
        error: None,
        details: Details::Selftest(SelftestDetails { passed, failed, trials }),
    }
}
