//! Structured reports with a fixed exit-code map.
//!
//! Every command yields a [`Report`]; `--format structured` serializes it as
//! JSON with keys in declaration order, `--format text` renders the same data
//! for reading. Reports carry no clocks or paths to temporary state, so equal
//! inputs (and seeds) give byte-identical output.

use serde::Serialize;
use std::fmt::Write as _;

/// Exit-code map. Scripts can tell hypothesis failures (2, 3) from bad input
/// (4) and from violations of the library's own guarantees (5).
pub const EXIT_PASS: i32 = 0;
pub const EXIT_NOT_SCATTERED: i32 = 2;
pub const EXIT_JACOBIAN_NOT_UNIT: i32 = 3;
pub const EXIT_INVALID_INPUT: i32 = 4;
pub const EXIT_INTERNAL: i32 = 5;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    NotScattered,
    JacobianNotUnit,
    ParseError,
    InvalidSpec,
    InternalError,
}

impl Verdict {
    pub fn exit_code(self) -> i32 {
        match self {
            Verdict::Pass => EXIT_PASS,
            Verdict::NotScattered => EXIT_NOT_SCATTERED,
            Verdict::JacobianNotUnit => EXIT_JACOBIAN_NOT_UNIT,
            Verdict::ParseError | Verdict::InvalidSpec => EXIT_INVALID_INPUT,
            Verdict::InternalError => EXIT_INTERNAL,
        }
    }

    fn label(self) -> &'static str {
        match self {
            Verdict::Pass => "pass",
            Verdict::NotScattered => "not scattered",
            Verdict::JacobianNotUnit => "Jacobian is not a nonzero constant",
            Verdict::ParseError => "parse error",
            Verdict::InvalidSpec => "invalid spec",
            Verdict::InternalError => "internal error",
        }
    }
}

#[derive(Clone, Debug, Serialize)]
#[serde(untagged)]
pub enum InputEcho {
    File {
        path: String,
        #[serde(skip_serializing_if = "Option::is_none")]
        f: Option<String>,
        #[serde(skip_serializing_if = "Option::is_none")]
        g: Option<String>,
    },
    Generator {
        degrees: Vec<u32>,
        case: u8,
        coefficient_bound: u32,
        seed: u64,
        #[serde(skip_serializing_if = "Option::is_none")]
        twist: Option<[String; 4]>,
    },
    Selftest {
        count: u32,
        max_degree: u32,
        coefficient_bound: u32,
        seed: u64,
        series_bound: Option<u32>,
    },
}

/// What went wrong, for non-pass verdicts. `line`/`col` are set for parse
/// errors; witnesses live in the per-command details instead.
#[derive(Clone, Debug, Serialize)]
pub struct ErrorEcho {
    pub message: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub line: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub col: Option<u32>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ScatterEcho {
    pub d_i: u32,
    pub d_j: u32,
    pub d_p: u32,
    pub d_q: u32,
}

#[derive(Clone, Debug, Serialize)]
pub struct JacobianEcho {
    pub unit: bool,
    /// Set when the Jacobian is constant (possibly zero).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub constant: Option<String>,
    /// First positive-degree term when it is not: J_{a,b} = coefficient.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub nonconstant_witness: Option<NonconstantWitness>,
}

#[derive(Clone, Debug, Serialize)]
pub struct NonconstantWitness {
    pub a: u32,
    pub b: u32,
    pub coefficient: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct LinearEcho {
    pub m11: String,
    pub m12: String,
    pub m21: String,
    pub m22: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct TableRowEcho {
    pub degree: u32,
    pub entries: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct FirstNonzeroEcho {
    pub degrees: [u32; 2],
    pub i: usize,
    pub j: usize,
    pub value: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct MinorsEcho {
    pub same_degree_checked: usize,
    pub cross_degree_checked: usize,
    pub all_vanish: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub first_nonzero: Option<FirstNonzeroEcho>,
}

#[derive(Clone, Debug, Serialize)]
pub struct InverseEcho {
    pub x: String,
    pub y: String,
    pub case: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ratio: Option<String>,
    pub verified: bool,
    pub total_degree: u32,
}

/// Pipeline stages shared by `check` and `invert`; every field is filled as
/// far as the run got.
#[derive(Clone, Debug, Default, Serialize)]
pub struct CheckDetails {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub degrees: Option<Vec<u32>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub scattered: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub scatter_witness: Option<ScatterEcho>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub jacobian: Option<JacobianEcho>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub linear_change: Option<LinearEcho>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub coefficient_table: Option<Vec<TableRowEcho>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub minors: Option<MinorsEcho>,
}

#[derive(Clone, Debug, Serialize)]
pub struct GenerateDetails {
    pub f: String,
    pub g: String,
    pub inverse: InverseEcho,
    /// The emitted document, exactly as `--format text` prints it.
    pub document: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct TrialEcho {
    pub index: u32,
    pub degrees: Vec<u32>,
    pub case: u8,
    pub twisted: bool,
    pub ok: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub failure: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SelftestDetails {
    pub passed: u32,
    pub failed: u32,
    pub trials: Vec<TrialEcho>,
}

#[derive(Clone, Debug, Serialize)]
#[serde(untagged)]
pub enum Details {
    Check(CheckDetails),
    Invert {
        #[serde(flatten)]
        stages: CheckDetails,
        #[serde(skip_serializing_if = "Option::is_none")]
        inverse: Option<InverseEcho>,
    },
    Generate(GenerateDetails),
    Selftest(SelftestDetails),
    None {},
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub command: &'static str,
    pub input: InputEcho,
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<ErrorEcho>,
    pub details: Details,
}

impl Report {
    pub fn exit_code(&self) -> i32 {
        self.verdict.exit_code()
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serialization");
        s.push('\n');
        s
    }

    pub fn to_text(&self) -> String {
        // A successful generate run prints only the document, so the text
        // output is itself a valid input file for check and invert.
        if let Details::Generate(gen) = &self.details {
            return gen.document.clone();
        }
        let mut out = String::new();
        let w = &mut out;
        match &self.input {
            InputEcho::File { path, f, g } => {
                let _ = writeln!(w, "{}: {}", self.command, path);
                if let (Some(f), Some(g)) = (f, g) {
                    let _ = writeln!(w, "  f = {}", f);
                    let _ = writeln!(w, "  g = {}", g);
                }
            }
            InputEcho::Generator { degrees, case, coefficient_bound, seed, twist } => {
                let _ = writeln!(
                    w,
                    "{}: degrees {}, case {}, coefficient bound {}, seed {}{}",
                    self.command,
                    join(degrees),
                    case,
                    coefficient_bound,
                    seed,
                    if twist.is_some() { ", twisted" } else { "" }
                );
            }
            InputEcho::Selftest { count, max_degree, coefficient_bound, seed, series_bound } => {
                let _ = writeln!(
                    w,
                    "{}: {} trials, max degree {}, coefficient bound {}, seed {}{}",
                    self.command,
                    count,
                    max_degree,
                    coefficient_bound,
                    seed,
                    match series_bound {
                        Some(b) => format!(", series bound {}", b),
                        None => String::new(),
                    }
                );
            }
        }
        if let Some(e) = &self.error {
            match (e.line, e.col) {
                (Some(l), Some(c)) => {
                    let _ = writeln!(w, "error at line {}, column {}: {}", l, c, e.message);
                }
                _ => {
                    let _ = writeln!(w, "error: {}", e.message);
                }
            }
        }
        match &self.details {
            Details::Check(stages) => render_stages(w, stages),
            Details::Invert { stages, inverse } => {
                render_stages(w, stages);
                if let Some(inv) = inverse {
                    render_inverse(w, inv);
                }
            }
            Details::Generate(gen) => {
                let _ = write!(w, "{}", gen.document);
            }
            Details::Selftest(s) => {
                for t in &s.trials {
                    let _ = writeln!(
                        w,
                        "  trial {:>3}: degrees {{{}}}, case {}{} ... {}",
                        t.index,
                        join(&t.degrees),
                        t.case,
                        if t.twisted { ", twisted" } else { "" },
                        if t.ok { "ok" } else { "FAILED" }
                    );
                    if let Some(f) = &t.failure {
                        let _ = writeln!(w, "    {}", f);
                    }
                }
                let _ = writeln!(w, "  passed {}, failed {}", s.passed, s.failed);
            }
            Details::None {} => {}
        }
        let _ = writeln!(w, "verdict: {}", self.verdict.label());
        out
    }
}

fn join(ns: &[u32]) -> String {
    ns.iter().map(|n| n.to_string()).collect::<Vec<_>>().join(", ")
}

fn render_stages(w: &mut String, s: &CheckDetails) {
    if let Some(d) = &s.degrees {
        let _ = writeln!(w, "  degrees: {{{}}}", join(d));
    }
    match (&s.scattered, &s.scatter_witness) {
        (Some(true), _) => {
            let _ = writeln!(w, "  scattered: yes");
        }
        (Some(false), Some(sw)) => {
            let _ = writeln!(
                w,
                "  scattered: no ({} + {} = {} + {})",
                sw.d_i, sw.d_j, sw.d_p, sw.d_q
            );
        }
        _ => {}
    }
    if let Some(j) = &s.jacobian {
        match (&j.constant, &j.nonconstant_witness) {
            (Some(c), _) => {
                let _ = writeln!(w, "  jacobian: constant {}", c);
            }
            (None, Some(nw)) => {
                let _ = writeln!(
                    w,
                    "  jacobian: not constant, J_{{{},{}}} = {}",
                    nw.a, nw.b, nw.coefficient
                );
            }
            _ => {}
        }
    }
    if let Some(l) = &s.linear_change {
        let _ = writeln!(
            w,
            "  linear change applied: [{}, {}; {}, {}]",
            l.m11, l.m12, l.m21, l.m22
        );
    }
    if let Some(rows) = &s.coefficient_table {
        let _ = writeln!(w, "  coefficient table:");
        for r in rows {
            let _ = writeln!(w, "    degree {}: [{}]", r.degree, r.entries.join(", "));
        }
    }
    if let Some(m) = &s.minors {
        let _ = writeln!(
            w,
            "  minors: {} same-degree and {} cross-degree checked, {}",
            m.same_degree_checked,
            m.cross_degree_checked,
            if m.all_vanish { "all vanish" } else { "NONZERO FOUND" }
        );
        if let Some(fz) = &m.first_nonzero {
            let _ = writeln!(
                w,
                "    first nonzero: degrees ({}, {}), columns ({}, {}), value {}",
                fz.degrees[0], fz.degrees[1], fz.i, fz.j, fz.value
            );
        }
    }
}

fn render_inverse(w: &mut String, inv: &InverseEcho) {
    let _ = writeln!(w, "  case: {}", inv.case);
    if let Some(r) = &inv.ratio {
        let _ = writeln!(w, "  collapse ratio: {}", r);
    }
    let _ = writeln!(w, "  X = {}", inv.x);
    let _ = writeln!(w, "  Y = {}", inv.y);
    let _ = writeln!(
        w,
        "  verified: {} (total degree {})",
        if inv.verified { "yes" } else { "NO" },
        inv.total_degree
    );
}
