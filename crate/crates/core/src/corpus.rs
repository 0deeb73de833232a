//! Germ specifications, JSON corpus files and the built-in corpus.

use std::collections::BTreeMap;
use std::path::Path;

use num_traits::Zero;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::invariants::GermPair;
use crate::parse::{parse_polynomial, validate_vars, ParseError};
use crate::poly::Polynomial;

/// Report fields that may appear in `expected`.
pub const EXPECTABLE_KEYS: [&str; 12] = [
    "mu_f",
    "mu_X",
    "tau_X",
    "mu_icis",
    "br_direct",
    "br_trivial",
    "br_formula",
    "br_section",
    "theta_quotient",
    "polar_mult",
    "euler_obstruction",
    "N",
];

pub const TAG_WEIGHTED_HOMOGENEOUS: &str = "weighted-homogeneous";
pub const TAG_ADE: &str = "ADE";
pub const TAG_CURVE: &str = "curve";

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("cannot read corpus file: {0}")]
    Io(#[from] std::io::Error),
    #[error("malformed corpus JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("germ `{name}`: {reason}")]
    Invalid { name: String, reason: String },
    #[error("germ `{name}`: {source}")]
    Parse {
        name: String,
        #[source]
        source: ParseError,
    },
}

/// One corpus entry as written in JSON.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GermSpec {
    pub name: String,
    pub vars: Vec<String>,
    pub phi: String,
    pub f_list: Vec<String>,
    /// Expected invariant values; they apply to every `f` of the germ.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expected: Option<BTreeMap<String, i64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tags: Option<Vec<String>>,
}

impl GermSpec {
    pub fn has_tag(&self, tag: &str) -> bool {
        self.tags
            .as_ref()
            .is_some_and(|t| t.iter().any(|x| x == tag))
    }
}

/// A validated germ with parsed polynomials.
#[derive(Debug, Clone)]
pub struct Germ {
    pub spec: GermSpec,
    pub phi: Polynomial,
    pub fs: Vec<Polynomial>,
}

impl Germ {
    pub fn from_spec(spec: GermSpec) -> Result<Self, CorpusError> {
        let name = spec.name.clone();
        let invalid = |reason: String| CorpusError::Invalid {
            name: name.clone(),
            reason,
        };
        let parse_err = |source| CorpusError::Parse {
            name: name.clone(),
            source,
        };
        validate_vars(&spec.vars).map_err(parse_err)?;
        if let Some(exp) = &spec.expected {
            if let Some(k) = exp.keys().find(|k| !EXPECTABLE_KEYS.contains(&k.as_str())) {
                return Err(invalid(format!("unknown expected key `{k}`")));
            }
        }
        let phi = parse_polynomial(&spec.phi, &spec.vars).map_err(parse_err)?;
        let fs = spec
            .f_list
            .iter()
            .map(|s| parse_polynomial(s, &spec.vars))
            .collect::<Result<Vec<_>, _>>()
            .map_err(parse_err)?;
        if !phi.constant_term().is_zero() {
            return Err(invalid("φ has a nonzero constant term".into()));
        }
        if let Some(i) = fs.iter().position(|f| !f.constant_term().is_zero()) {
            return Err(invalid(format!(
                "f `{}` has a nonzero constant term",
                spec.f_list[i]
            )));
        }
        Ok(Germ { spec, phi, fs })
    }

    pub fn name(&self) -> &str {
        &self.spec.name
    }

    pub fn vars(&self) -> &[String] {
        &self.spec.vars
    }

    pub fn nvars(&self) -> usize {
        self.spec.vars.len()
    }

    /// `(f source, pair)` for every `f` in the list.
    pub fn pairs(&self) -> Vec<(String, GermPair)> {
        self.spec
            .f_list
            .iter()
            .zip(&self.fs)
            .map(|(src, f)| {
                let pair = GermPair::new(self.spec.vars.clone(), self.phi.clone(), f.clone())
                    .expect("validated germ");
                (src.clone(), pair)
            })
            .collect()
    }
}

pub fn parse_corpus(json: &str) -> Result<Vec<Germ>, CorpusError> {
    let specs: Vec<GermSpec> = serde_json::from_str(json)?;
    specs.into_iter().map(Germ::from_spec).collect()
}

pub fn load_corpus(path: &Path) -> Result<Vec<Germ>, CorpusError> {
    parse_corpus(&std::fs::read_to_string(path)?)
}

fn spec(name: &str, vars: &[&str], phi: &str, tags: &[&str], expected: &[(&str, i64)]) -> GermSpec {
    let f_list: &[&str] = match vars.len() {
        2 => &["x+2*y", "y", "x^2+3*y^2"],
        _ => &["x+2*y+3*z", "z", "x^2+2*y^2+3*z^2"],
    };
    GermSpec {
        name: name.into(),
        vars: vars.iter().map(|v| v.to_string()).collect(),
        phi: phi.into(),
        f_list: f_list.iter().map(|f| f.to_string()).collect(),
        expected: (!expected.is_empty())
            .then(|| expected.iter().map(|(k, v)| (k.to_string(), *v)).collect()),
        tags: Some(tags.iter().map(|t| t.to_string()).collect()),
    }
}

pub fn builtin_specs() -> Vec<GermSpec> {
    const XY: &[&str] = &["x", "y"];
    const XYZ: &[&str] = &["x", "y", "z"];
    let wh_curve: &[&str] = &[TAG_WEIGHTED_HOMOGENEOUS, TAG_ADE, TAG_CURVE];
    let wh_surface: &[&str] = &[TAG_WEIGHTED_HOMOGENEOUS, TAG_ADE];
    let mut out = Vec::new();
    for k in 1..=6i64 {
        out.push(spec(
            &format!("A{k}"),
            XY,
            &format!("x^{}+y^2", k + 1),
            wh_curve,
            &[("mu_X", k), ("tau_X", k)],
        ));
    }
    for k in 4..=6i64 {
        out.push(spec(
            &format!("D{k}"),
            XY,
            &format!("x^{}+x*y^2", k - 1),
            wh_curve,
            &[("mu_X", k), ("tau_X", k)],
        ));
    }
    out.push(spec(
        "E6",
        XY,
        "x^3+y^4",
        wh_curve,
        &[("mu_X", 6), ("tau_X", 6)],
    ));
    out.push(spec(
        "E7",
        XY,
        "x^3+x*y^3",
        wh_curve,
        &[("mu_X", 7), ("tau_X", 7)],
    ));
    out.push(spec(
        "E8",
        XY,
        "x^3+y^5",
        wh_curve,
        &[("mu_X", 8), ("tau_X", 8)],
    ));
    out.push(spec(
        "normal-crossing",
        XY,
        "x*y",
        wh_curve,
        &[
            ("mu_X", 1),
            ("tau_X", 1),
            ("polar_mult", 2),
            ("euler_obstruction", 2),
        ],
    ));
    out.push(spec(
        "A1-surface",
        XYZ,
        "x^2+y^2+z^2",
        wh_surface,
        &[
            ("mu_X", 1),
            ("tau_X", 1),
            ("polar_mult", 2),
            ("euler_obstruction", 0),
        ],
    ));
    // x^2*y - z^2 itself is singular along the y-axis; the y^4 term isolates it
    out.push(spec(
        "umbrella-D5",
        XYZ,
        "x^2*y-z^2+y^4",
        wh_surface,
        &[("mu_X", 5), ("tau_X", 5)],
    ));
    let mut t = spec(
        "Y-1-1",
        XY,
        "x^5+y^5+x^2*y^2",
        &[TAG_CURVE],
        &[("mu_X", 11), ("tau_X", 10)],
    );
    t.f_list = ["x+2*y", "x-y", "y+x^2", "y", "x^2+3*y^2"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    out.push(t);
    out.push(spec(
        "W12",
        XY,
        "x^4+y^5+x^2*y^3",
        &[TAG_CURVE],
        &[("mu_X", 12), ("tau_X", 11)],
    ));
    out
}

pub fn builtin_corpus() -> Vec<Germ> {
    builtin_specs()
        .into_iter()
        .map(|s| Germ::from_spec(s).expect("built-in corpus is valid"))
        .collect()
}

/// `(vars, f, φ)` triples on which the symmetry identity is checked.
pub fn symmetry_pairs() -> Vec<(Vec<String>, String, String)> {
    vec![
        (
            vec!["x".into(), "y".into()],
            "x^3+y^2".into(),
            "x^2+y^3".into(),
        ),
        (
            vec!["x".into(), "y".into()],
            "x^5+y^5+x^2*y^2".into(),
            "x^2+y^3".into(),
        ),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_corpus_parses() {
        let c = builtin_corpus();
        assert_eq!(c.len(), 17);
        assert!(c.iter().all(|g| g.fs.len() >= 3));
        assert!(c.iter().any(|g| g.nvars() == 3));
    }

    #[test]
    fn specs_round_trip_through_json() {
        let specs = builtin_specs();
        let json = serde_json::to_string_pretty(&specs).unwrap();
        let back: Vec<GermSpec> = serde_json::from_str(&json).unwrap();
        assert_eq!(back, specs);
        assert_eq!(parse_corpus(&json).unwrap().len(), specs.len());
    }

    #[test]
    fn minimal_entry() {
        let c =
            parse_corpus(r#"[{"name":"cusp","vars":["x","y"],"phi":"x^3+y^2","f_list":["y"]}]"#)
                .unwrap();
        assert_eq!(c[0].pairs().len(), 1);
        assert!(!c[0].spec.has_tag(TAG_ADE));
    }

    #[test]
    fn invalid_entries() {
        let bad_key =
            r#"[{"name":"a","vars":["x","y"],"phi":"x*y","f_list":["x"],"expected":{"mu":1}}]"#;
        assert!(matches!(
            parse_corpus(bad_key),
            Err(CorpusError::Invalid { .. })
        ));
        let bad_var = r#"[{"name":"a","vars":["x"],"phi":"x*y","f_list":["x"]}]"#;
        assert!(matches!(
            parse_corpus(bad_var),
            Err(CorpusError::Parse { .. })
        ));
        let dup = r#"[{"name":"a","vars":["x","x"],"phi":"x","f_list":["x"]}]"#;
        assert!(matches!(parse_corpus(dup), Err(CorpusError::Parse { .. })));
        let unit = r#"[{"name":"a","vars":["x"],"phi":"1+x","f_list":["x"]}]"#;
        assert!(matches!(
            parse_corpus(unit),
            Err(CorpusError::Invalid { .. })
        ));
        assert!(matches!(parse_corpus("{"), Err(CorpusError::Json(_))));
    }
}
