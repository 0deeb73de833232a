//! Machine-readable and aligned-text rendering of an [`InvariantReport`].

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::invariants::{GermPair, InvariantReport, ReportOptions, Value};
use crate::verify::OracleSummary;

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

/// One report as emitted by the command-line tool.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportDocument {
    pub version: String,
    pub name: String,
    pub vars: Vec<String>,
    pub phi: String,
    pub f: String,
    pub mu_f: Value,
    #[serde(rename = "mu_X")]
    pub mu_x: Value,
    #[serde(rename = "tau_X")]
    pub tau_x: Value,
    pub mu_icis: Value,
    pub br_direct: Value,
    pub br_trivial: Value,
    pub br_formula: Value,
    pub br_section: Value,
    pub theta_quotient: Value,
    pub polar_mult: Value,
    pub euler_obstruction: Value,
    #[serde(rename = "N")]
    pub morsification_n: Value,
    pub finitely_determined: bool,
    pub routes_agree: bool,
    pub weighted_homogeneous_hint: bool,
    pub seed: u64,
    pub draws: usize,
    /// The generic linear form behind `polar_mult`.
    pub polar_p: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub oracle: Option<OracleSummary>,
    /// Microseconds per colength label.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timings_us: Option<BTreeMap<String, u64>>,
}

impl ReportDocument {
    pub fn new(name: &str, g: &GermPair, r: &InvariantReport, opts: ReportOptions) -> Self {
        ReportDocument {
            version: TOOL_VERSION.to_string(),
            name: name.to_string(),
            vars: g.vars.clone(),
            phi: g.phi.render(&g.vars),
            f: g.f.render(&g.vars),
            mu_f: r.mu_f,
            mu_x: r.mu_x,
            tau_x: r.tau_x,
            mu_icis: r.mu_icis,
            br_direct: r.br_direct,
            br_trivial: r.br_trivial,
            br_formula: r.br_formula,
            br_section: r.br_section,
            theta_quotient: r.theta_quotient,
            polar_mult: r.polar_mult,
            euler_obstruction: r.euler_obstruction,
            morsification_n: r.morsification_n,
            finitely_determined: r.finitely_determined,
            routes_agree: r.routes_agree,
            weighted_homogeneous_hint: r.weighted_homogeneous_hint,
            seed: opts.seed,
            draws: r.draws_used,
            polar_p: r.polar_p.as_ref().map(|p| p.render(&g.vars)),
            oracle: None,
            timings_us: None,
        }
    }

    pub fn with_timings(mut self, r: &InvariantReport) -> Self {
        self.timings_us = Some(
            r.timings()
                .into_iter()
                .map(|(k, d)| (k, d.as_micros() as u64))
                .collect(),
        );
        self
    }

    pub fn with_oracle(mut self, s: OracleSummary) -> Self {
        self.oracle = Some(s);
        self
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn from_json(s: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(s)
    }

    /// `key  value` lines with the values aligned in one column.
    pub fn to_text(&self) -> String {
        let mut rows: Vec<(&str, String)> = vec![
            ("name", self.name.clone()),
            ("vars", self.vars.join(",")),
            ("phi", self.phi.clone()),
            ("f", self.f.clone()),
            ("mu_f", self.mu_f.to_string()),
            ("mu_X", self.mu_x.to_string()),
            ("tau_X", self.tau_x.to_string()),
            ("mu_icis", self.mu_icis.to_string()),
            ("br_direct", self.br_direct.to_string()),
            ("br_trivial", self.br_trivial.to_string()),
            ("br_formula", self.br_formula.to_string()),
            ("br_section", self.br_section.to_string()),
            ("theta_quotient", self.theta_quotient.to_string()),
            ("polar_mult", self.polar_mult.to_string()),
            (
                "polar_p",
                self.polar_p.clone().unwrap_or_else(|| "-".into()),
            ),
            ("euler_obstruction", self.euler_obstruction.to_string()),
            ("N", self.morsification_n.to_string()),
            ("finitely_determined", self.finitely_determined.to_string()),
            ("routes_agree", self.routes_agree.to_string()),
            (
                "weighted_homogeneous_hint",
                self.weighted_homogeneous_hint.to_string(),
            ),
            ("seed", self.seed.to_string()),
            ("draws", self.draws.to_string()),
            ("version", self.version.clone()),
        ];
        if let Some(o) = &self.oracle {
            rows.push((
                "oracle",
                format!(
                    "{}/{} agree, {} certificates replayed",
                    o.agreed, o.checked, o.certificates_replayed
                ),
            ));
        }
        let mut timing_rows = Vec::new();
        if let Some(t) = &self.timings_us {
            for (k, v) in t {
                timing_rows.push((format!("time[{k}]"), format!("{v} us")));
            }
        }
        let width = rows
            .iter()
            .map(|(k, _)| k.len())
            .chain(timing_rows.iter().map(|(k, _)| k.chars().count()))
            .max()
            .unwrap_or(0);
        let mut out = String::new();
        for (k, v) in rows {
            let _ = writeln!(out, "{k:<width$}  {v}");
        }
        for (k, v) in timing_rows {
            let _ = writeln!(out, "{k:<width$}  {v}");
        }
        out
    }
}
