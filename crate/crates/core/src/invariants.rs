//! Singularity invariants of a pair `(X = {φ = 0}, f)` and the Bruce-Roberts
//! number computed along four independent routes.
//!
//! Every colength that goes into a report is logged as a [`ColengthRecord`]
//! so that it can be replayed through the jet oracle.

use std::fmt;
use std::time::{Duration, Instant};

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::parse::ParseError;
use crate::poly::{jacobian_minors, AlgebraError, Coeff, Monomial, PolyVector, Polynomial};
use crate::sbasis::{self, Colength, IdealPresentation, SbError, SubmodulePresentation};
use crate::tangent::{self, TangentError, VectorField};

pub const DEFAULT_SEED: u64 = 42;
pub const DEFAULT_DRAWS: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InvariantError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    StandardBasis(#[from] SbError),
    #[error(transparent)]
    Tangent(#[from] TangentError),
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("{0} has a nonzero constant term")]
    NonzeroConstant(&'static str),
    #[error("φ and f have different variable counts ({0} vs {1})")]
    VariableCount(usize, usize),
    #[error("φ does not define an isolated singularity")]
    NonIsolated,
    #[error("(φ, f) is not an isolated complete intersection")]
    NotIcis,
    #[error("f is not finitely determined with respect to X")]
    NotFinitelyDetermined,
    #[error("{0} is infinite")]
    InfiniteSummand(&'static str),
    #[error("p is not a nonzero linear form")]
    NotLinear,
    #[error("at least two draws are required")]
    TooFewDraws,
    #[error("every drawn linear form gave an infinite polar colength")]
    AllDrawsInfinite,
}

/// An invariant value as it appears in a report.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Value {
    Finite(i64),
    Infinite,
    /// A precondition failed upstream.
    Undefined,
}

impl Value {
    pub fn finite(self) -> Option<i64> {
        match self {
            Value::Finite(v) => Some(v),
            _ => None,
        }
    }
}

impl From<Colength> for Value {
    fn from(c: Colength) -> Self {
        match c {
            Colength::Finite(v) => Value::Finite(v as i64),
            Colength::Infinite => Value::Infinite,
        }
    }
}

impl<E> From<Result<Colength, E>> for Value {
    fn from(r: Result<Colength, E>) -> Self {
        r.map_or(Value::Undefined, Value::from)
    }
}

impl<E> From<Result<i64, E>> for Value {
    fn from(r: Result<i64, E>) -> Self {
        r.map_or(Value::Undefined, Value::Finite)
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Finite(v) => write!(f, "{v}"),
            Value::Infinite => f.write_str("INFINITE"),
            Value::Undefined => f.write_str("UNDEFINED"),
        }
    }
}

impl Serialize for Value {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Value::Finite(v) => s.serialize_i64(*v),
            Value::Infinite => s.serialize_str("INFINITE"),
            Value::Undefined => s.serialize_str("UNDEFINED"),
        }
    }
}

impl<'de> Deserialize<'de> for Value {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Num(i64),
            Tag(String),
        }
        match Repr::deserialize(d)? {
            Repr::Num(v) => Ok(Value::Finite(v)),
            Repr::Tag(t) if t == "INFINITE" => Ok(Value::Infinite),
            Repr::Tag(t) if t == "UNDEFINED" => Ok(Value::Undefined),
            Repr::Tag(t) => Err(serde::de::Error::custom(format!("unknown value `{t}`"))),
        }
    }
}

/// One problem instance: the hypersurface `φ = 0` and the function `f`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GermPair {
    pub vars: Vec<String>,
    pub phi: Polynomial,
    pub f: Polynomial,
}

impl GermPair {
    pub fn new(vars: Vec<String>, phi: Polynomial, f: Polynomial) -> Result<Self, InvariantError> {
        check_germ(&phi, "φ")?;
        check_germ(&f, "f")?;
        if phi.nvars() != f.nvars() {
            return Err(InvariantError::VariableCount(phi.nvars(), f.nvars()));
        }
        if vars.len() != phi.nvars() {
            return Err(InvariantError::VariableCount(vars.len(), phi.nvars()));
        }
        Ok(GermPair { vars, phi, f })
    }

    pub fn parse(vars: &[String], phi: &str, f: &str) -> Result<Self, InvariantError> {
        let phi = crate::parse::parse_polynomial(phi, vars)?;
        let f = crate::parse::parse_polynomial(f, vars)?;
        GermPair::new(vars.to_vec(), phi, f)
    }

    pub fn nvars(&self) -> usize {
        self.phi.nvars()
    }
}

fn check_germ(p: &Polynomial, name: &'static str) -> Result<(), InvariantError> {
    if p.constant_term().is_zero() {
        Ok(())
    } else {
        Err(InvariantError::NonzeroConstant(name))
    }
}

/// A colength computed during a report, in a form the oracle can replay:
/// the colength of the submodule of `O^rank` spanned by `generators`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColengthRecord {
    pub label: String,
    pub rank: usize,
    pub generators: Vec<PolyVector>,
    pub value: Colength,
    pub elapsed: Duration,
}

#[derive(Debug, Default)]
struct Recorder {
    log: Vec<ColengthRecord>,
}

impl Recorder {
    fn ideal(
        &mut self,
        label: &str,
        nvars: usize,
        gens: Vec<Polynomial>,
    ) -> Result<Colength, InvariantError> {
        let start = Instant::now();
        let i = IdealPresentation::new(nvars, gens)?;
        let value = i.colength();
        self.log.push(ColengthRecord {
            label: label.to_string(),
            rank: 1,
            generators: i
                .generators()
                .iter()
                .cloned()
                .map(PolyVector::from_poly)
                .collect(),
            value,
            elapsed: start.elapsed(),
        });
        Ok(value)
    }

    fn quotient(
        &mut self,
        label: &str,
        numer: &[PolyVector],
        denom: &[PolyVector],
    ) -> Result<Colength, InvariantError> {
        let start = Instant::now();
        let value = sbasis::quotient_dimension(numer, denom)?;
        let pre: SubmodulePresentation = sbasis::preimage(numer, denom)?;
        self.log.push(ColengthRecord {
            label: label.to_string(),
            rank: pre.rank(),
            generators: pre.generators().to_vec(),
            value,
            elapsed: start.elapsed(),
        });
        Ok(value)
    }
}

fn as_vectors(ps: &[Polynomial]) -> Vec<PolyVector> {
    ps.iter().cloned().map(PolyVector::from_poly).collect()
}

fn applied(fields: &[VectorField], f: &Polynomial) -> Result<Vec<Polynomial>, InvariantError> {
    Ok(fields
        .iter()
        .map(|xi| xi.apply(f))
        .collect::<Result<Vec<_>, _>>()?)
}

fn with_phi(phi: &Polynomial, mut gens: Vec<Polynomial>) -> Vec<Polynomial> {
    gens.insert(0, phi.clone());
    gens
}

/// Options controlling the random choice of a generic linear form.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ReportOptions {
    pub seed: u64,
    pub draws: usize,
}

impl Default for ReportOptions {
    fn default() -> Self {
        ReportOptions {
            seed: DEFAULT_SEED,
            draws: DEFAULT_DRAWS,
        }
    }
}

/// Result of the generic-projection search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolarMultiplicity {
    pub value: u64,
    /// A linear form attaining the minimum (the first one drawn).
    pub p: Polynomial,
    pub draws_used: usize,
    pub attained: usize,
}

/// Random nonzero linear form with coefficients in `[-9, 9]`.
fn draw_linear_form(rng: &mut ChaCha8Rng, nvars: usize) -> Polynomial {
    loop {
        let coeffs: Vec<i64> = (0..nvars).map(|_| rng.gen_range(-9..=9)).collect();
        if coeffs.iter().all(|&c| c == 0) {
            continue;
        }
        return Polynomial::from_terms(
            nvars,
            coeffs.iter().enumerate().map(|(i, &c)| {
                let mut e = vec![0u32; nvars];
                e[i] = 1;
                (Coeff::from_integer(c.into()), Monomial::from_exponents(&e))
            }),
        );
    }
}

/// Per-hypersurface data shared by all reports on the same `φ`.
#[derive(Debug, Clone)]
pub struct HypersurfaceData {
    pub phi: Polynomial,
    pub mu: Colength,
    pub tau: Colength,
    /// `None` when `φ` is not an isolated singularity.
    pub theta: Option<tangent::TangentModulePair>,
    pub theta_quotient: Result<Colength, InvariantError>,
    pub polar: Result<PolarMultiplicity, InvariantError>,
    records: Vec<ColengthRecord>,
}

impl HypersurfaceData {
    pub fn new(phi: &Polynomial, opts: ReportOptions) -> Result<Self, InvariantError> {
        check_germ(phi, "φ")?;
        let n = phi.nvars();
        let mut rec = Recorder::default();
        let mu = rec.ideal("mu_X", n, phi.gradient())?;
        let tau = rec.ideal("tau_X", n, with_phi(phi, phi.gradient()))?;
        let theta = if mu.is_finite() {
            Some(tangent::TangentModulePair::new(phi)?)
        } else {
            None
        };
        let theta_quotient = match &theta {
            Some(t) => rec.quotient("theta_quotient", &t.full_vectors(), &t.trivial_vectors()),
            None => Err(InvariantError::NonIsolated),
        };
        let polar = if mu.is_finite() {
            polar_search(phi, opts, &mut rec)
        } else {
            Err(InvariantError::NonIsolated)
        };
        Ok(HypersurfaceData {
            phi: phi.clone(),
            mu,
            tau,
            theta,
            theta_quotient,
            polar,
            records: rec.log,
        })
    }

    pub fn records(&self) -> &[ColengthRecord] {
        &self.records
    }

    fn theta(&self) -> Result<&tangent::TangentModulePair, InvariantError> {
        self.theta.as_ref().ok_or(InvariantError::NonIsolated)
    }

    fn mu_tau(&self) -> Result<(i64, i64), InvariantError> {
        match (self.mu.finite(), self.tau.finite()) {
            (Some(m), Some(t)) => Ok((m as i64, t as i64)),
            _ => Err(InvariantError::NonIsolated),
        }
    }

    /// Euler obstruction `m_{n-1} - μ + (-1)^n`.
    pub fn euler_obstruction(&self) -> Result<i64, InvariantError> {
        let (mu, tau) = self.mu_tau()?;
        let m = self.polar.clone()?.value as i64;
        let br_p = m - tau;
        let sign = if self.phi.nvars().is_multiple_of(2) {
            1
        } else {
            -1
        };
        Ok(br_p + tau - mu + sign)
    }

    /// `dim dp(Θ_X) / dp(Θ_X^T)` reusing `Θ_X`, with the record of the
    /// preimage module.
    pub fn tjurina_via_linear(
        &self,
        p: &Polynomial,
    ) -> Result<(Colength, ColengthRecord), InvariantError> {
        if !p.is_linear_form() || p.is_zero() {
            return Err(InvariantError::NotLinear);
        }
        if p.nvars() != self.phi.nvars() {
            return Err(InvariantError::VariableCount(self.phi.nvars(), p.nvars()));
        }
        let mut rec = Recorder::default();
        let c = self.df_quotient(p, &mut rec, "tjurina_linear")?;
        Ok((c, rec.log.pop().expect("recorded")))
    }

    /// `dim df(Θ_X) / df(Θ_X^T)` for any function `f`.
    fn df_quotient(
        &self,
        f: &Polynomial,
        rec: &mut Recorder,
        label: &str,
    ) -> Result<Colength, InvariantError> {
        let t = self.theta()?;
        let numer = as_vectors(&applied(&t.full_gens, f)?);
        let denom = as_vectors(&applied(&t.trivial_gens, f)?);
        rec.quotient(label, &numer, &denom)
    }
}

fn polar_search(
    phi: &Polynomial,
    opts: ReportOptions,
    rec: &mut Recorder,
) -> Result<PolarMultiplicity, InvariantError> {
    if opts.draws < 2 {
        return Err(InvariantError::TooFewDraws);
    }
    let n = phi.nvars();
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut results: Vec<(Polynomial, Colength)> = Vec::new();
    let mut target = opts.draws;
    loop {
        while results.len() < target {
            let p = draw_linear_form(&mut rng, n);
            let c = polar_colength(phi, &p, rec)?;
            results.push((p, c));
        }
        let min = results.iter().filter_map(|(_, c)| c.finite()).min();
        let Some(min) = min else {
            if target == opts.draws {
                target *= 2;
                continue;
            }
            return Err(InvariantError::AllDrawsInfinite);
        };
        let attained = results
            .iter()
            .filter(|(_, c)| *c == Colength::Finite(min))
            .count();
        if attained < 2 && target == opts.draws {
            log::warn!("polar minimum {min} attained once in {target} draws; doubling");
            target *= 2;
            continue;
        }
        let p = results
            .iter()
            .find(|(_, c)| *c == Colength::Finite(min))
            .map(|(p, _)| p.clone())
            .unwrap();
        return Ok(PolarMultiplicity {
            value: min,
            p,
            draws_used: results.len(),
            attained,
        });
    }
}

fn polar_colength(
    phi: &Polynomial,
    p: &Polynomial,
    rec: &mut Recorder,
) -> Result<Colength, InvariantError> {
    rec.ideal(
        "polar",
        phi.nvars(),
        with_phi(phi, jacobian_minors(p, phi)?),
    )
}

pub fn milnor_number(f: &Polynomial) -> Result<Colength, InvariantError> {
    check_germ(f, "f")?;
    Ok(IdealPresentation::new(f.nvars(), f.gradient())?.colength())
}

pub fn tjurina_number(phi: &Polynomial) -> Result<Colength, InvariantError> {
    check_germ(phi, "φ")?;
    Ok(IdealPresentation::new(phi.nvars(), with_phi(phi, phi.gradient()))?.colength())
}

/// `μ(φ, f) = colength(⟨φ⟩ + J(f, φ)) - μ(φ)`.
pub fn icis_milnor(phi: &Polynomial, f: &Polynomial) -> Result<u64, InvariantError> {
    check_germ(phi, "φ")?;
    let mu = milnor_number(phi)?
        .finite()
        .ok_or(InvariantError::NonIsolated)?;
    icis_from(phi, f, mu, &mut Recorder::default())
}

fn icis_from(
    phi: &Polynomial,
    f: &Polynomial,
    mu_phi: u64,
    rec: &mut Recorder,
) -> Result<u64, InvariantError> {
    let c = rec.ideal("icis", phi.nvars(), with_phi(phi, jacobian_minors(f, phi)?))?;
    let c = c.finite().ok_or(InvariantError::NotIcis)?;
    c.checked_sub(mu_phi).ok_or(InvariantError::NotIcis)
}

pub fn br_direct(g: &GermPair) -> Result<Colength, InvariantError> {
    let theta = tangent::theta_x(&g.phi)?;
    Ok(tangent::df_ideal(&g.f, &theta)?.colength())
}

/// `colength(df(Θ_X^T)) - τ(X)`.
pub fn br_via_trivial(g: &GermPair) -> Result<i64, InvariantError> {
    let t = tjurina_number(&g.phi)?
        .finite()
        .ok_or(InvariantError::NonIsolated)?;
    let c = tangent::df_trivial_ideal(&g.f, &g.phi)?.colength();
    let c = c.finite().ok_or(InvariantError::NotFinitelyDetermined)?;
    Ok(c as i64 - t as i64)
}

/// `μ(f) + μ(φ, f) + μ(X) - τ(X)`.
pub fn br_via_formula(g: &GermPair) -> Result<i64, InvariantError> {
    let mu_f = milnor_number(&g.f)?
        .finite()
        .ok_or(InvariantError::InfiniteSummand("μ(f)"))?;
    let mu_x = milnor_number(&g.phi)?
        .finite()
        .ok_or(InvariantError::InfiniteSummand("μ(X)"))?;
    let tau = tjurina_number(&g.phi)?
        .finite()
        .ok_or(InvariantError::InfiniteSummand("τ(X)"))?;
    let icis = icis_milnor(&g.phi, &g.f)?;
    Ok(mu_f as i64 + icis as i64 + mu_x as i64 - tau as i64)
}

/// `colength(⟨f⟩ + J(f, φ)) + μ(X) - τ(X)`.
pub fn br_via_section(g: &GermPair) -> Result<i64, InvariantError> {
    let mu_x = milnor_number(&g.phi)?
        .finite()
        .ok_or(InvariantError::InfiniteSummand("μ(X)"))?;
    let tau = tjurina_number(&g.phi)?
        .finite()
        .ok_or(InvariantError::InfiniteSummand("τ(X)"))?;
    let mut gens = jacobian_minors(&g.f, &g.phi)?;
    gens.insert(0, g.f.clone());
    let c = IdealPresentation::new(g.nvars(), gens)?.colength();
    let c = c
        .finite()
        .ok_or(InvariantError::InfiniteSummand("colength(⟨f⟩ + J(f, φ))"))?;
    Ok(c as i64 + mu_x as i64 - tau as i64)
}

/// `dim Θ_X / Θ_X^T`.
pub fn theta_quotient_dim(phi: &Polynomial) -> Result<Colength, InvariantError> {
    check_germ(phi, "φ")?;
    Ok(tangent::TangentModulePair::new(phi)?.quotient_dimension()?)
}

/// `dim dp(Θ_X) / dp(Θ_X^T)` for a nonzero linear form `p`.
pub fn tjurina_via_linear(phi: &Polynomial, p: &Polynomial) -> Result<Colength, InvariantError> {
    if !p.is_linear_form() || p.is_zero() {
        return Err(InvariantError::NotLinear);
    }
    if p.nvars() != phi.nvars() {
        return Err(InvariantError::VariableCount(phi.nvars(), p.nvars()));
    }
    df_quotient_dim(phi, p)
}

/// `dim df(Θ_X) / df(Θ_X^T)`.
pub fn df_quotient_dim(phi: &Polynomial, f: &Polynomial) -> Result<Colength, InvariantError> {
    check_germ(phi, "φ")?;
    let pair = tangent::TangentModulePair::new(phi)?;
    let numer = as_vectors(&applied(&pair.full_gens, f)?);
    let denom = as_vectors(&applied(&pair.trivial_gens, f)?);
    Ok(sbasis::quotient_dimension(&numer, &denom)?)
}

pub fn polar_multiplicity(
    phi: &Polynomial,
    opts: ReportOptions,
) -> Result<PolarMultiplicity, InvariantError> {
    check_germ(phi, "φ")?;
    if !milnor_number(phi)?.is_finite() {
        return Err(InvariantError::NonIsolated);
    }
    polar_search(phi, opts, &mut Recorder::default())
}

pub fn euler_obstruction(phi: &Polynomial, opts: ReportOptions) -> Result<i64, InvariantError> {
    HypersurfaceData::new(phi, opts)?.euler_obstruction()
}

/// `N = μ_BR(f, X) - μ(f) - m_{n-1}(X) + τ(X)`, not clamped.
pub fn morsification_count(g: &GermPair, opts: ReportOptions) -> Result<i64, InvariantError> {
    if !is_finitely_determined(g) {
        return Err(InvariantError::NotFinitelyDetermined);
    }
    let data = HypersurfaceData::new(&g.phi, opts)?;
    let br = br_direct(g)?
        .finite()
        .ok_or(InvariantError::NotFinitelyDetermined)?;
    let mu_f = milnor_number(&g.f)?
        .finite()
        .ok_or(InvariantError::InfiniteSummand("μ(f)"))?;
    let (_, tau) = data.mu_tau()?;
    let m = data.polar?.value as i64;
    Ok(br as i64 - mu_f as i64 - m + tau)
}

pub fn is_finitely_determined(g: &GermPair) -> bool {
    tangent::df_trivial_ideal(&g.f, &g.phi)
        .map(|i| i.colength().is_finite())
        .unwrap_or(false)
}

/// Everything computed for one pair.
#[derive(Debug, Clone)]
pub struct InvariantReport {
    pub mu_f: Value,
    pub mu_x: Value,
    pub tau_x: Value,
    pub mu_icis: Value,
    pub br_direct: Value,
    pub br_trivial: Value,
    pub br_formula: Value,
    pub br_section: Value,
    pub theta_quotient: Value,
    pub polar_mult: Value,
    pub euler_obstruction: Value,
    pub morsification_n: Value,
    pub finitely_determined: bool,
    pub routes_agree: bool,
    pub weighted_homogeneous_hint: bool,
    pub polar_p: Option<Polynomial>,
    pub draws_used: usize,
    /// Colength of `df(Θ_X^T)`.
    pub trivial_colength: Value,
    /// `dim df(Θ_X) / df(Θ_X^T)`.
    pub df_quotient: Value,
    pub records: Vec<ColengthRecord>,
}

impl InvariantReport {
    /// Total time spent per colength label, in first-seen order.
    pub fn timings(&self) -> Vec<(String, Duration)> {
        let mut out: Vec<(String, Duration)> = Vec::new();
        for r in &self.records {
            match out.iter_mut().find(|(l, _)| *l == r.label) {
                Some((_, d)) => *d += r.elapsed,
                None => out.push((r.label.clone(), r.elapsed)),
            }
        }
        out
    }
}

pub fn full_report(g: &GermPair, opts: ReportOptions) -> InvariantReport {
    match HypersurfaceData::new(&g.phi, opts) {
        Ok(data) => report_with(&data, g),
        // only reachable through an invalid φ, which GermPair rules out
        Err(_) => undefined_report(),
    }
}

fn undefined_report() -> InvariantReport {
    let u = Value::Undefined;
    InvariantReport {
        mu_f: u,
        mu_x: u,
        tau_x: u,
        mu_icis: u,
        br_direct: u,
        br_trivial: u,
        br_formula: u,
        br_section: u,
        theta_quotient: u,
        polar_mult: u,
        euler_obstruction: u,
        morsification_n: u,
        finitely_determined: false,
        routes_agree: false,
        weighted_homogeneous_hint: false,
        polar_p: None,
        draws_used: 0,
        trivial_colength: u,
        df_quotient: u,
        records: Vec::new(),
    }
}

/// Report for `g` reusing precomputed data for `g.phi`.
pub fn report_with(data: &HypersurfaceData, g: &GermPair) -> InvariantReport {
    let n = g.nvars();
    let (phi, f) = (&g.phi, &g.f);
    let mut rec = Recorder {
        log: data.records.clone(),
    };
    let mu_tau = data.mu_tau();

    let mu_f = rec.ideal("mu_f", n, f.gradient());
    let icis = match data.mu.finite() {
        Some(m) => icis_from(phi, f, m, &mut rec),
        None => Err(InvariantError::NonIsolated),
    };

    let minors = jacobian_minors(f, phi).unwrap();
    let mut trivial_gens: Vec<Polynomial> = f.gradient().iter().map(|d| phi * d).collect();
    trivial_gens.extend(minors.iter().cloned());
    let trivial = rec.ideal("df_trivial", n, trivial_gens);
    let finitely_determined = matches!(trivial, Ok(Colength::Finite(_)));

    let direct = data
        .theta()
        .and_then(|t| applied(&t.full_gens, f))
        .and_then(|gens| rec.ideal("br_direct", n, gens));

    let br_trivial = match (&trivial, &mu_tau) {
        (Ok(Colength::Finite(c)), Ok((_, tau))) => Ok(*c as i64 - tau),
        (Ok(Colength::Infinite), _) => Err(InvariantError::NotFinitelyDetermined),
        (Err(e), _) | (_, Err(e)) => Err(e.clone()),
    };

    let br_formula = (|| {
        let mu_f = mu_f
            .clone()?
            .finite()
            .ok_or(InvariantError::InfiniteSummand("μ(f)"))?;
        let (mu, tau) = mu_tau.clone()?;
        Ok::<i64, InvariantError>(mu_f as i64 + icis.clone()? as i64 + mu - tau)
    })();

    let br_section = (|| {
        let (mu, tau) = mu_tau.clone()?;
        let mut gens = minors.clone();
        gens.insert(0, f.clone());
        let c = rec
            .ideal("section", n, gens)?
            .finite()
            .ok_or(InvariantError::InfiniteSummand("colength(⟨f⟩ + J(f, φ))"))?;
        Ok::<i64, InvariantError>(c as i64 + mu - tau)
    })();

    let df_quotient = if finitely_determined {
        data.df_quotient(f, &mut rec, "df_quotient")
    } else {
        Err(InvariantError::NotFinitelyDetermined)
    };

    let morsification = (|| {
        if !finitely_determined {
            return Err(InvariantError::NotFinitelyDetermined);
        }
        let br = direct
            .clone()?
            .finite()
            .ok_or(InvariantError::NotFinitelyDetermined)?;
        let mu_f = mu_f
            .clone()?
            .finite()
            .ok_or(InvariantError::InfiniteSummand("μ(f)"))?;
        let (_, tau) = mu_tau.clone()?;
        let m = data.polar.clone()?.value as i64;
        Ok::<i64, InvariantError>(br as i64 - mu_f as i64 - m + tau)
    })();

    let br_values: [Value; 4] = [
        direct.clone().into(),
        br_trivial.clone().into(),
        br_formula.clone().into(),
        br_section.clone().into(),
    ];
    let theta_quotient: Value = data.theta_quotient.clone().into();
    let tau_x: Value = data.tau.into();
    let routes_agree = br_values
        .iter()
        .all(|v| *v != Value::Undefined && *v == br_values[0])
        && theta_quotient != Value::Undefined
        && theta_quotient == tau_x;

    let (polar_mult, polar_p, draws_used) = match &data.polar {
        Ok(p) => (
            Value::Finite(p.value as i64),
            Some(p.p.clone()),
            p.draws_used,
        ),
        Err(_) => (Value::Undefined, None, 0),
    };

    InvariantReport {
        mu_f: mu_f.into(),
        mu_x: data.mu.into(),
        tau_x,
        mu_icis: icis.map(|v| v as i64).into(),
        br_direct: br_values[0],
        br_trivial: br_values[1],
        br_formula: br_values[2],
        br_section: br_values[3],
        theta_quotient,
        polar_mult,
        euler_obstruction: data.euler_obstruction().into(),
        morsification_n: morsification.into(),
        finitely_determined,
        routes_agree,
        weighted_homogeneous_hint: data.mu.is_finite() && data.mu == data.tau,
        polar_p,
        draws_used,
        trivial_colength: trivial.into(),
        df_quotient: df_quotient.into(),
        records: rec.log,
    }
}
