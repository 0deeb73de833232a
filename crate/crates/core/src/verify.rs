//! Identity checks over corpus germs and oracle replay of every finite
//! colength a report relies on.

use serde::Serialize;

use crate::corpus::{Germ, TAG_WEIGHTED_HOMOGENEOUS};
use crate::invariants::{
    report_with, ColengthRecord, GermPair, HypersurfaceData, InvariantError, InvariantReport,
    ReportOptions, Value,
};
use crate::oracle::{
    jet_module_colength, replay_certificate, JetColength, OracleError, DEFAULT_CAP,
};
use crate::poly::{Coeff, Monomial, Polynomial};
use crate::sbasis::Colength;

#[derive(Debug, Clone, Copy)]
pub struct VerifyOptions {
    pub report: ReportOptions,
    /// Jet-oracle degree cap; `None` skips the replay.
    pub oracle_cap: Option<u32>,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            report: ReportOptions::default(),
            oracle_cap: Some(DEFAULT_CAP),
        }
    }
}

/// Outcome of one identity assertion.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    /// The `f` the check is about, if any.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub f: Option<String>,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    fn new(name: impl Into<String>, f: Option<&str>, passed: bool, detail: String) -> Self {
        Check {
            name: name.into(),
            f: f.map(str::to_string),
            passed,
            detail,
        }
    }

    fn eq(name: impl Into<String>, f: Option<&str>, got: Value, want: Value) -> Self {
        Check::new(name, f, got == want, format!("got {got}, want {want}"))
    }
}

/// Jet-oracle replay of one recorded colength.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleCheck {
    pub label: String,
    pub rank: usize,
    pub engine: u64,
    pub oracle: Result<JetColength, OracleError>,
    /// Fresh re-check of the returned certificate.
    pub replayed: bool,
}

impl OracleCheck {
    pub fn passed(&self) -> bool {
        self.replayed && matches!(&self.oracle, Ok(j) if j.colength == self.engine)
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, serde::Deserialize)]
pub struct OracleSummary {
    pub checked: usize,
    pub agreed: usize,
    pub certificates_replayed: usize,
}

impl OracleSummary {
    pub fn of(checks: &[OracleCheck]) -> Self {
        OracleSummary {
            checked: checks.len(),
            agreed: checks
                .iter()
                .filter(|c| matches!(&c.oracle, Ok(j) if j.colength == c.engine))
                .count(),
            certificates_replayed: checks.iter().filter(|c| c.replayed).count(),
        }
    }

    pub fn all_passed(&self) -> bool {
        self.agreed == self.checked && self.certificates_replayed == self.checked
    }
}

/// Replays every finite record through the jet oracle, skipping exact
/// duplicates.
pub fn replay_records<'a, I>(records: I, cap: u32) -> Vec<OracleCheck>
where
    I: IntoIterator<Item = &'a ColengthRecord>,
{
    let mut seen: Vec<&ColengthRecord> = Vec::new();
    let mut out = Vec::new();
    for r in records {
        let Colength::Finite(engine) = r.value else {
            continue;
        };
        if seen
            .iter()
            .any(|s| s.rank == r.rank && s.generators == r.generators)
        {
            continue;
        }
        seen.push(r);
        let oracle = jet_module_colength(&r.generators, r.rank, cap);
        let replayed = match &oracle {
            Ok(j) => replay_certificate(&r.generators, r.rank, j.certificate),
            Err(_) => false,
        };
        out.push(OracleCheck {
            label: r.label.clone(),
            rank: r.rank,
            engine,
            oracle,
            replayed,
        });
    }
    out
}

/// Linear forms on which the Tjurina route is tested: every coordinate,
/// the sum of the first two, and the sum of all when there are more.
pub fn linear_test_forms(vars: &[String]) -> Vec<(String, Polynomial)> {
    let n = vars.len();
    let form = |idx: &[usize]| {
        Polynomial::from_terms(
            n,
            idx.iter().map(|&i| {
                let mut e = vec![0u32; n];
                e[i] = 1;
                (Coeff::from_integer(1.into()), Monomial::from_exponents(&e))
            }),
        )
    };
    let mut out: Vec<Vec<usize>> = (0..n).map(|i| vec![i]).collect();
    if n >= 2 {
        out.push(vec![0, 1]);
    }
    if n >= 3 {
        out.push((0..n).collect());
    }
    out.into_iter()
        .map(|idx| {
            let p = form(&idx);
            (p.render(vars), p)
        })
        .collect()
}

/// Everything verified for one germ.
#[derive(Debug, Clone)]
pub struct GermVerification {
    pub name: String,
    /// `(f source, report)` in f-list order.
    pub reports: Vec<(String, InvariantReport)>,
    pub checks: Vec<Check>,
    pub oracle: Vec<OracleCheck>,
}

impl GermVerification {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed) && self.oracle.iter().all(OracleCheck::passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

/// Looks up a report field by its JSON key.
pub fn report_value(r: &InvariantReport, key: &str) -> Option<Value> {
    Some(match key {
        "mu_f" => r.mu_f,
        "mu_X" => r.mu_x,
        "tau_X" => r.tau_x,
        "mu_icis" => r.mu_icis,
        "br_direct" => r.br_direct,
        "br_trivial" => r.br_trivial,
        "br_formula" => r.br_formula,
        "br_section" => r.br_section,
        "theta_quotient" => r.theta_quotient,
        "polar_mult" => r.polar_mult,
        "euler_obstruction" => r.euler_obstruction,
        "N" => r.morsification_n,
        _ => return None,
    })
}

fn add(a: Value, b: Value) -> Value {
    match (a, b) {
        (Value::Finite(x), Value::Finite(y)) => Value::Finite(x + y),
        (Value::Undefined, _) | (_, Value::Undefined) => Value::Undefined,
        _ => Value::Infinite,
    }
}

/// Identities that concern a single pair.
pub fn pair_checks(r: &InvariantReport, f: &str, weighted_homogeneous: bool) -> Vec<Check> {
    let f = Some(f);
    let mut out = vec![Check::new(
        "finitely_determined",
        f,
        r.finitely_determined == matches!(r.br_direct, Value::Finite(_)),
        format!("flag {}, br_direct {}", r.finitely_determined, r.br_direct),
    )];
    if !r.finitely_determined {
        return out;
    }
    let brs = [r.br_direct, r.br_trivial, r.br_formula, r.br_section];
    out.push(Check::new(
        "routes_agree",
        f,
        r.routes_agree,
        format!(
            "direct {}, trivial {}, formula {}, section {}, theta_quotient {}, tau_X {}",
            brs[0], brs[1], brs[2], brs[3], r.theta_quotient, r.tau_x
        ),
    ));
    out.push(Check::eq(
        "trivial_identity",
        f,
        r.trivial_colength,
        add(add(r.mu_f, r.mu_icis), r.mu_x),
    ));
    out.push(Check::eq("f_independence", f, r.df_quotient, r.tau_x));
    out.push(Check::new(
        "morsification_nonnegative",
        f,
        matches!(r.morsification_n, Value::Finite(n) if n >= 0),
        format!("N = {}", r.morsification_n),
    ));
    if weighted_homogeneous {
        out.push(Check::eq("weighted_homogeneous_mu_tau", f, r.mu_x, r.tau_x));
        out.push(Check::eq(
            "weighted_homogeneous_br",
            f,
            r.br_direct,
            add(r.mu_f, r.mu_icis),
        ));
    }
    out
}

/// Runs every identity on one germ and replays the colengths.
pub fn verify_germ(germ: &Germ, opts: &VerifyOptions) -> Result<GermVerification, InvariantError> {
    let data = HypersurfaceData::new(&germ.phi, opts.report)?;
    let vars = germ.vars();
    let wh = germ.spec.has_tag(TAG_WEIGHTED_HOMOGENEOUS);
    let mut checks = Vec::new();
    let mut records: Vec<ColengthRecord> = data.records().to_vec();
    let base = data.records().len();
    let tau: Value = data.tau.into();

    checks.push(Check::eq(
        "theta_quotient",
        None,
        data.theta_quotient.clone().into(),
        tau,
    ));
    for (src, p) in linear_test_forms(vars) {
        let got = match data.tjurina_via_linear(&p) {
            Ok((c, rec)) => {
                records.push(rec);
                c.into()
            }
            Err(_) => Value::Undefined,
        };
        let fd = GermPair::new(vars.to_vec(), germ.phi.clone(), p.clone())
            .map(|g| crate::invariants::is_finitely_determined(&g))
            .unwrap_or(false);
        checks.push(Check::new(
            format!("tjurina_linear[{src}]"),
            None,
            got == tau,
            format!(
                "got {got}, want {tau}{}",
                if fd {
                    ""
                } else {
                    " (p not finitely determined)"
                }
            ),
        ));
    }

    let mut reports = Vec::new();
    for (src, pair) in germ.pairs() {
        let r = report_with(&data, &pair);
        checks.extend(pair_checks(&r, &src, wh));
        if let Some(exp) = &germ.spec.expected {
            for (k, v) in exp {
                let got = report_value(&r, k).unwrap_or(Value::Undefined);
                checks.push(Check::eq(
                    format!("expected[{k}]"),
                    Some(&src),
                    got,
                    Value::Finite(*v),
                ));
            }
        }
        records.extend(r.records[base..].iter().cloned());
        reports.push((src, r));
    }

    match &data.polar {
        Ok(pm) => {
            let pair = GermPair::new(vars.to_vec(), germ.phi.clone(), pm.p.clone())?;
            let r = report_with(&data, &pair);
            checks.push(Check::eq(
                format!("generic_morsification[{}]", pm.p.render(vars)),
                None,
                r.morsification_n,
                Value::Finite(0),
            ));
            records.extend(r.records[base..].iter().cloned());
        }
        Err(e) => checks.push(Check::new(
            "generic_morsification",
            None,
            false,
            e.to_string(),
        )),
    }

    if germ.nvars() == 2 {
        let order = germ
            .phi
            .order()
            .map_or(Value::Undefined, |o| Value::Finite(o as i64));
        checks.push(Check::eq(
            "curve_euler_obstruction",
            None,
            data.euler_obstruction().into(),
            order,
        ));
    }

    let oracle = match opts.oracle_cap {
        Some(cap) => replay_records(&records, cap),
        None => Vec::new(),
    };
    Ok(GermVerification {
        name: germ.name().to_string(),
        reports,
        checks,
        oracle,
    })
}

/// `μ_BR(f, X) - μ_BR(φ, Y) = τ(Y) - τ(X)` for `X = {φ = 0}`, `Y = {f = 0}`.
/// Both directions must be finitely determined.
pub fn symmetry_check(
    vars: &[String],
    f: &str,
    phi: &str,
    opts: ReportOptions,
) -> Result<(Check, Vec<ColengthRecord>), InvariantError> {
    let fx = GermPair::parse(vars, phi, f)?;
    let py = GermPair::parse(vars, f, phi)?;
    let rx = crate::invariants::full_report(&fx, opts);
    let ry = crate::invariants::full_report(&py, opts);
    let name = format!("symmetry[{f} | {phi}]");
    if !rx.finitely_determined || !ry.finitely_determined {
        let detail = format!(
            "finitely determined: (f, X) {}, (φ, Y) {}",
            rx.finitely_determined, ry.finitely_determined
        );
        return Ok((Check::new(name, None, false, detail), Vec::new()));
    }
    let diff = |a: Value, b: Value| match (a, b) {
        (Value::Finite(x), Value::Finite(y)) => Value::Finite(x - y),
        _ => Value::Undefined,
    };
    let lhs = diff(rx.br_direct, ry.br_direct);
    let rhs = diff(ry.tau_x, rx.tau_x);
    let check = Check::new(
        name,
        None,
        lhs == rhs && lhs != Value::Undefined,
        format!(
            "μ_BR(f,X) = {}, μ_BR(φ,Y) = {}, τ(Y) = {}, τ(X) = {}",
            rx.br_direct, ry.br_direct, ry.tau_x, rx.tau_x
        ),
    );
    let mut records = rx.records;
    records.extend(ry.records);
    Ok((check, records))
}
