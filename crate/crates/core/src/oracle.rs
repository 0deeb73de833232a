//! Dense-in-spirit, sparse-in-storage exact linear algebra on jet spaces.
//!
//! This is the independent cross-check for the standard-basis engine. For a
//! truncation degree `N` it spans `{x^a g mod m^{N+1}}` and asks whether
//! every monomial of degree `N` is reached. If so, `m^N ⊆ I + m^{N+1}`, hence
//! `m^N ⊆ I` by Nakayama, and the colength is the codimension of the image
//! of `I` in `O/m^N`. No standard bases and no monomial orders are involved.

use std::collections::{BTreeMap, HashMap};

use num_traits::Zero;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::poly::{Coeff, Monomial, PolyVector, Polynomial};

pub const DEFAULT_CAP: u32 = 40;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("no Nakayama certificate up to degree {cap} (colength infinite or cap too small)")]
    NoCertificate { cap: u32 },
    #[error("generators disagree on rank or variable count")]
    Shape,
}

/// Degree `N` with `m^N ⊆ I + m^{N+1}`, verified by elimination.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct NakayamaCertificate {
    pub degree: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct JetColength {
    pub colength: u64,
    pub certificate: NakayamaCertificate,
}

/// All monomials of total degree `<= degree` in `nvars` variables, ordered
/// by degree and then lexicographically.
#[derive(Debug, Clone)]
pub struct JetSpace {
    nvars: usize,
    degree: u32,
    basis: Vec<Monomial>,
    index: HashMap<Monomial, usize>,
}

impl JetSpace {
    pub fn new(nvars: usize, degree: u32) -> Self {
        let mut basis = Vec::new();
        for d in 0..=degree {
            let mut exps = vec![0u32; nvars];
            monomials_of_degree(&mut exps, 0, d, &mut basis);
        }
        let index = basis
            .iter()
            .cloned()
            .enumerate()
            .map(|(i, m)| (m, i))
            .collect();
        JetSpace {
            nvars,
            degree,
            basis,
            index,
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn basis(&self) -> &[Monomial] {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    fn column(&self, m: &Monomial, pos: usize) -> Option<usize> {
        self.index.get(m).map(|i| pos * self.basis.len() + i)
    }
}

fn monomials_of_degree(exps: &mut Vec<u32>, i: usize, left: u32, out: &mut Vec<Monomial>) {
    if i + 1 == exps.len() {
        exps[i] = left;
        out.push(Monomial::from_exponents(exps));
        exps[i] = 0;
        return;
    }
    if exps.is_empty() {
        out.push(Monomial::from_exponents(exps));
        return;
    }
    for e in (0..=left).rev() {
        exps[i] = e;
        monomials_of_degree(exps, i + 1, left - e, out);
    }
    exps[i] = 0;
}

type Row = Vec<(usize, Coeff)>;

/// Row echelon form with normalized pivots, keyed by leading column.
#[derive(Default)]
struct Echelon {
    pivots: BTreeMap<usize, Row>,
}

impl Echelon {
    fn reduce(&self, mut row: Row) -> Row {
        loop {
            let Some((lead, c)) = row.first().cloned() else {
                return row;
            };
            let Some(p) = self.pivots.get(&lead) else {
                return row;
            };
            row = axpy(&row, &c, p);
        }
    }

    fn insert(&mut self, row: Row) {
        let row = self.reduce(row);
        if let Some((lead, c)) = row.first().cloned() {
            let inv = c.recip();
            let normalized = row.into_iter().map(|(j, v)| (j, v * &inv)).collect();
            self.pivots.insert(lead, normalized);
        }
    }

    fn contains(&self, row: Row) -> bool {
        self.reduce(row).is_empty()
    }

    fn rank(&self) -> usize {
        self.pivots.len()
    }
}

/// `a - c * b` for sorted sparse rows.
fn axpy(a: &Row, c: &Coeff, b: &Row) -> Row {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        if j == b.len() || (i < a.len() && a[i].0 < b[j].0) {
            out.push(a[i].clone());
            i += 1;
        } else if i == a.len() || b[j].0 < a[i].0 {
            out.push((b[j].0, -(c * &b[j].1)));
            j += 1;
        } else {
            let v = &a[i].1 - c * &b[j].1;
            if !v.is_zero() {
                out.push((a[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

fn shape(gens: &[PolyVector]) -> Result<(usize, usize), OracleError> {
    let first = gens.first().ok_or(OracleError::Shape)?;
    let (n, r) = (first.nvars(), first.rank());
    if gens.iter().any(|g| g.nvars() != n || g.rank() != r) {
        return Err(OracleError::Shape);
    }
    Ok((n, r))
}

/// Row of `x^a * g` truncated to the jet space.
fn jet_row(space: &JetSpace, g: &PolyVector, shift: &Monomial) -> Row {
    let mut row: Row = Vec::new();
    for (pos, comp) in g.components().iter().enumerate() {
        for (m, c) in comp.terms() {
            let prod = m.mul(shift);
            if let Some(col) = space.column(&prod, pos) {
                row.push((col, c.clone()));
            }
        }
    }
    row.sort_by_key(|e| e.0);
    row
}

/// Span of `{x^a g : |a| <= shift_degree}` inside `space`.
fn span(space: &JetSpace, gens: &[PolyVector], shift_degree: u32) -> Echelon {
    let mut ech = Echelon::default();
    let shifts: Vec<&Monomial> = space
        .basis()
        .iter()
        .filter(|m| m.degree() <= shift_degree)
        .collect();
    for g in gens {
        for s in &shifts {
            let row = jet_row(space, g, s);
            if !row.is_empty() {
                ech.insert(row);
            }
        }
    }
    ech
}

fn certifies(gens: &[PolyVector], nvars: usize, rank: usize, degree: u32) -> bool {
    let space = JetSpace::new(nvars, degree);
    let ech = span(&space, gens, degree);
    for (i, m) in space.basis().iter().enumerate() {
        if m.degree() != degree {
            continue;
        }
        for pos in 0..rank {
            let col = pos * space.dim() + i;
            if !ech.contains(vec![(col, Coeff::from_integer(1.into()))]) {
                return false;
            }
        }
    }
    true
}

/// Colength of the submodule of `O^rank` generated by `gens`.
pub fn jet_module_colength(
    gens: &[PolyVector],
    rank: usize,
    cap: u32,
) -> Result<JetColength, OracleError> {
    if rank == 0 {
        return Ok(JetColength {
            colength: 0,
            certificate: NakayamaCertificate { degree: 0 },
        });
    }
    let nonzero: Vec<PolyVector> = gens.iter().filter(|g| !g.is_zero()).cloned().collect();
    if nonzero.is_empty() {
        return Err(OracleError::NoCertificate { cap });
    }
    let (nvars, r) = shape(&nonzero)?;
    if r != rank {
        return Err(OracleError::Shape);
    }
    for degree in 1..=cap {
        if !certifies(&nonzero, nvars, rank, degree) {
            continue;
        }
        let below = JetSpace::new(nvars, degree - 1);
        let ech = span(&below, &nonzero, degree - 1);
        let total = (below.dim() * rank) as u64;
        return Ok(JetColength {
            colength: total - ech.rank() as u64,
            certificate: NakayamaCertificate { degree },
        });
    }
    Err(OracleError::NoCertificate { cap })
}

/// Colength of the ideal of `O_n` generated by `gens`.
pub fn jet_colength(gens: &[Polynomial], cap: u32) -> Result<JetColength, OracleError> {
    let vs: Vec<PolyVector> = gens.iter().cloned().map(PolyVector::from_poly).collect();
    jet_module_colength(&vs, 1, cap)
}

/// Re-checks a certificate from scratch.
pub fn replay_certificate(gens: &[PolyVector], rank: usize, cert: NakayamaCertificate) -> bool {
    if rank == 0 {
        return true;
    }
    let nonzero: Vec<PolyVector> = gens.iter().filter(|g| !g.is_zero()).cloned().collect();
    match shape(&nonzero) {
        Ok((nvars, r)) if r == rank && cert.degree >= 1 => {
            certifies(&nonzero, nvars, rank, cert.degree)
        }
        _ => false,
    }
}

/// Membership `f ∈ I`, decided in `O/m^N` for a certified `N`.
pub fn jet_membership(
    f: &Polynomial,
    gens: &[Polynomial],
    cert: NakayamaCertificate,
) -> Result<bool, OracleError> {
    let vs: Vec<PolyVector> = gens.iter().cloned().map(PolyVector::from_poly).collect();
    if cert.degree == 0 {
        return Ok(true);
    }
    let space = JetSpace::new(f.nvars(), cert.degree - 1);
    let ech = span(&space, &vs, cert.degree - 1);
    let row = jet_row(
        &space,
        &PolyVector::from_poly(f.clone()),
        &Monomial::one(f.nvars()),
    );
    Ok(ech.contains(row))
}
