//! Standard bases in the local ring `O_n` and in free modules `O_n^r`.
//!
//! Everything here works over the localization at the origin: membership,
//! colength and syzygies are those of the ideal or submodule generated by
//! the given polynomials *in the local ring*, computed with Mora's normal
//! form under the negative-degree order.

mod mora;
mod vector;

use std::fmt;
use std::sync::{Arc, OnceLock};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::poly::{AlgebraError, LocalOrder, Monomial, PolyVector, Polynomial};

pub use vector::ModuleOrder;
pub(crate) use vector::SVec;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SbError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("generator rank mismatch: expected {expected}, got {got}")]
    RankMismatch { expected: usize, got: usize },
    #[error("denominator generator {0} is not contained in the numerator module")]
    NotContained(usize),
}

/// `dim_C` of a quotient of the local ring or of a free module over it.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Colength {
    Finite(u64),
    Infinite,
}

impl Colength {
    pub fn finite(self) -> Option<u64> {
        match self {
            Colength::Finite(v) => Some(v),
            Colength::Infinite => None,
        }
    }

    pub fn is_finite(self) -> bool {
        matches!(self, Colength::Finite(_))
    }
}

impl fmt::Display for Colength {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Colength::Finite(v) => write!(f, "{v}"),
            Colength::Infinite => f.write_str("INFINITE"),
        }
    }
}

/// Counts the standard monomials `x^a e_p` outside the leading module
/// spanned by `leads`. Infinite as soon as some position lacks a pure power
/// of some variable.
pub(crate) fn staircase_colength<'a, I>(leads: I, nvars: usize, rank: usize) -> Colength
where
    I: IntoIterator<Item = (&'a Monomial, usize)>,
{
    staircase_stats(leads, nvars, rank).map_or(Colength::Infinite, |(n, _)| Colength::Finite(n))
}

/// Number of standard monomials and their largest degree, or `None` for an
/// infinite staircase.
pub(crate) fn staircase_stats<'a, I>(
    leads: I,
    nvars: usize,
    rank: usize,
) -> Option<(u64, Option<u32>)>
where
    I: IntoIterator<Item = (&'a Monomial, usize)>,
{
    let mut per_pos: Vec<Vec<&Monomial>> = vec![Vec::new(); rank];
    for (m, p) in leads {
        per_pos[p].push(m);
    }
    let mut total = 0u64;
    let mut top: Option<u32> = None;
    for lms in per_pos {
        if lms.iter().any(|m| m.is_one()) {
            continue;
        }
        let mut bounds = vec![u32::MAX; nvars];
        for m in &lms {
            if let Some(i) = m.pure_power_of() {
                bounds[i] = bounds[i].min(m.exponents()[i]);
            }
        }
        if bounds.contains(&u32::MAX) {
            return None;
        }
        // odometer over the box below the pure powers
        let mut exps = vec![0u32; nvars];
        'outer: loop {
            let cand = Monomial::from_exponents(&exps);
            if !lms.iter().any(|m| m.divides(&cand)) {
                total += 1;
                top = top.max(Some(cand.degree()));
            }
            for i in 0..nvars {
                exps[i] += 1;
                if exps[i] < bounds[i] {
                    continue 'outer;
                }
                exps[i] = 0;
            }
            break;
        }
    }
    Some((total, top))
}

/// Weak normal form of `f` against `gens` (see [`mora_nf`](mora::mora_nf)).
/// Zero iff `f` lies in the local ideal generated by `gens`, provided `gens`
/// is a standard basis.
pub fn mora_reduce(
    f: &Polynomial,
    gens: &[Polynomial],
    _ord: &LocalOrder,
) -> Result<Polynomial, SbError> {
    for g in gens {
        if g.nvars() != f.nvars() {
            return Err(AlgebraError::DimensionMismatch(f.nvars(), g.nvars()).into());
        }
    }
    let ord = ModuleOrder::term_over_position();
    let basis: Vec<SVec> = gens
        .iter()
        .filter(|g| !g.is_zero())
        .map(|g| SVec::from_poly(g, &ord))
        .collect();
    let h = mora::mora_nf(
        SVec::from_poly(f, &ord),
        &basis,
        &ord,
        &mora::Cut::default(),
    );
    Ok(h.to_components(f.nvars(), 0, 1).pop().unwrap())
}

#[derive(Debug)]
struct Basis {
    elements: Vec<SVec>,
    reducers: Vec<SVec>,
    cut: mora::Cut,
}

impl Basis {
    fn new(done: mora::Completed) -> Arc<Basis> {
        Arc::new(Basis {
            elements: done.elements,
            reducers: done.reducers,
            cut: done.cut,
        })
    }

    fn reduce(&self, f: SVec, ord: &ModuleOrder) -> SVec {
        mora::mora_nf(f, &self.reducers, ord, &self.cut)
    }
}

/// An ideal of `O_n` given by generators, with a lazily computed standard
/// basis.
#[derive(Debug, Clone)]
pub struct IdealPresentation {
    nvars: usize,
    generators: Vec<Polynomial>,
    order: LocalOrder,
    cache: OnceLock<Arc<Basis>>,
}

impl IdealPresentation {
    pub fn new(nvars: usize, generators: Vec<Polynomial>) -> Result<Self, SbError> {
        for g in &generators {
            if g.nvars() != nvars {
                return Err(AlgebraError::DimensionMismatch(nvars, g.nvars()).into());
            }
        }
        Ok(IdealPresentation {
            nvars,
            generators,
            order: LocalOrder,
            cache: OnceLock::new(),
        })
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn generators(&self) -> &[Polynomial] {
        &self.generators
    }

    pub fn order(&self) -> LocalOrder {
        self.order
    }

    fn basis(&self) -> &Basis {
        self.cache.get_or_init(|| {
            let ord = ModuleOrder::term_over_position();
            let gens = self
                .generators
                .iter()
                .filter(|g| !g.is_zero())
                .map(|g| SVec::from_poly(g, &ord))
                .collect();
            Basis::new(mora::standard_basis(
                gens,
                &ord,
                &mora::SbParams {
                    ideal_case: true,
                    nvars: self.nvars,
                    rank: 1,
                    bound: None,
                    kernel: false,
                },
            ))
        })
    }

    /// A minimal standard basis with monic leading terms.
    pub fn standard_basis(&self) -> Vec<Polynomial> {
        self.basis()
            .elements
            .iter()
            .map(|g| g.to_components(self.nvars, 0, 1).pop().unwrap())
            .collect()
    }

    /// Leading monomials of the standard basis; they generate the leading
    /// ideal.
    pub fn staircase(&self) -> Vec<Monomial> {
        self.basis()
            .elements
            .iter()
            .map(|g| g.lead().mon.clone())
            .collect()
    }

    pub fn colength(&self) -> Colength {
        let b = self.basis();
        staircase_colength(b.elements.iter().map(|g| (&g.lead().mon, 0)), self.nvars, 1)
    }

    pub fn contains(&self, f: &Polynomial) -> Result<bool, SbError> {
        if f.nvars() != self.nvars {
            return Err(AlgebraError::DimensionMismatch(self.nvars, f.nvars()).into());
        }
        let ord = ModuleOrder::term_over_position();
        let h = self.basis().reduce(SVec::from_poly(f, &ord), &ord);
        Ok(h.is_zero())
    }

    /// Sum of two ideals.
    pub fn plus(&self, other: &IdealPresentation) -> Result<IdealPresentation, SbError> {
        let mut gens = self.generators.clone();
        gens.extend(other.generators.iter().cloned());
        IdealPresentation::new(self.nvars, gens)
    }
}

/// `f ∈ I` in the local ring.
pub fn ideal_membership(f: &Polynomial, ideal: &IdealPresentation) -> Result<bool, SbError> {
    ideal.contains(f)
}

/// A submodule of `O_n^r` given by generators, with a lazily computed
/// term-over-position standard basis.
#[derive(Debug, Clone)]
pub struct SubmodulePresentation {
    nvars: usize,
    rank: usize,
    generators: Vec<PolyVector>,
    /// Known `N` with `m^N O^rank` inside the module.
    bound: Option<u32>,
    cache: OnceLock<Arc<Basis>>,
}

impl SubmodulePresentation {
    pub fn new(nvars: usize, rank: usize, generators: Vec<PolyVector>) -> Result<Self, SbError> {
        for g in &generators {
            if g.rank() != rank {
                return Err(SbError::RankMismatch {
                    expected: rank,
                    got: g.rank(),
                });
            }
            if rank > 0 && g.nvars() != nvars {
                return Err(AlgebraError::DimensionMismatch(nvars, g.nvars()).into());
            }
        }
        Ok(SubmodulePresentation {
            nvars,
            rank,
            generators,
            bound: None,
            cache: OnceLock::new(),
        })
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn generators(&self) -> &[PolyVector] {
        &self.generators
    }

    fn basis(&self) -> &Basis {
        self.cache.get_or_init(|| {
            let ord = ModuleOrder::term_over_position();
            let gens = self
                .generators
                .iter()
                .map(|g| SVec::from_vector(g, &ord))
                .filter(|g| !g.is_zero())
                .collect();
            Basis::new(mora::standard_basis(
                gens,
                &ord,
                &mora::SbParams {
                    ideal_case: self.rank == 1,
                    nvars: self.nvars,
                    rank: self.rank,
                    bound: self.bound,
                    kernel: false,
                },
            ))
        })
    }

    pub fn standard_basis(&self) -> Vec<PolyVector> {
        self.basis()
            .elements
            .iter()
            .map(|g| PolyVector::new(g.to_components(self.nvars, 0, self.rank)).unwrap())
            .collect()
    }

    /// Leading terms `(monomial, position)` of the standard basis.
    pub fn staircase(&self) -> Vec<(Monomial, usize)> {
        self.basis()
            .elements
            .iter()
            .map(|g| (g.lead().mon.clone(), g.lead().pos))
            .collect()
    }

    /// `dim_C O^r / M`.
    pub fn colength(&self) -> Colength {
        let b = self.basis();
        staircase_colength(
            b.elements.iter().map(|g| (&g.lead().mon, g.lead().pos)),
            self.nvars,
            self.rank,
        )
    }

    /// Smallest `N` with `m^N O^r` inside the leading module, when the
    /// colength is finite.
    fn corner(&self) -> Option<u32> {
        let b = self.basis();
        mora::corner(
            b.elements.iter().map(|g| (&g.lead().mon, g.lead().pos)),
            self.nvars,
            self.rank,
        )
    }

    pub fn contains(&self, v: &PolyVector) -> Result<bool, SbError> {
        if v.rank() != self.rank {
            return Err(SbError::RankMismatch {
                expected: self.rank,
                got: v.rank(),
            });
        }
        let ord = ModuleOrder::term_over_position();
        let h = self.basis().reduce(SVec::from_vector(v, &ord), &ord);
        Ok(h.is_zero())
    }
}

pub fn module_colength(m: &SubmodulePresentation) -> Colength {
    m.colength()
}

fn common_shape(vs: &[PolyVector]) -> Result<Option<(usize, usize)>, SbError> {
    let Some(first) = vs.first() else {
        return Ok(None);
    };
    let (nvars, rank) = (first.nvars(), first.rank());
    for v in vs {
        if v.rank() != rank {
            return Err(SbError::RankMismatch {
                expected: rank,
                got: v.rank(),
            });
        }
        if v.nvars() != nvars {
            return Err(AlgebraError::DimensionMismatch(nvars, v.nvars()).into());
        }
    }
    Ok(Some((nvars, rank)))
}

/// Generators (in tag coordinates) of
/// `{h ∈ O^k : Σ h_i v_i ∈ ⟨v_k, v_{k+1}, ...⟩}` where `k = tagged`.
///
/// Each of the first `tagged` values is extended by a unit vector in extra
/// tag positions; a standard basis under the order eliminating the value
/// positions then carries the kernel in its elements with zero value part.
/// Only the value-led part is completed: by Schreyer's theorem the
/// remainders with zero value part already generate the kernel.
///
/// `bound = Some(N)` asserts `m^N O^rank ⊆ ⟨values[tagged..]⟩`; then the
/// tagged module contains `m^N` in every position and all work is done
/// modulo `m^N`.
fn tagged_kernel(
    values: &[PolyVector],
    tagged: usize,
    nvars: usize,
    rank: usize,
    bound: Option<u32>,
) -> Vec<PolyVector> {
    let ord = ModuleOrder::elimination(rank);
    let gens: Vec<SVec> = values
        .iter()
        .enumerate()
        .map(|(i, v)| {
            let mut comps = v.components().to_vec();
            comps.extend((0..tagged).map(|t| {
                if t == i {
                    Polynomial::one(nvars)
                } else {
                    Polynomial::zero(nvars)
                }
            }));
            SVec::from_components(&comps, 0, &ord)
        })
        .filter(|g| !g.is_zero())
        .collect();
    let params = mora::SbParams {
        ideal_case: false,
        nvars,
        rank: rank + tagged,
        bound,
        kernel: true,
    };
    mora::standard_basis(gens, &ord, &params)
        .tail
        .into_iter()
        .map(|g| PolyVector::new(g.to_components(nvars, rank, rank + tagged)).unwrap())
        .collect()
}

/// Generators of the syzygy module `{h : Σ h_i g_i = 0}` of a list of
/// polynomials.
pub fn syzygies(g: &[Polynomial]) -> Result<Vec<PolyVector>, SbError> {
    let vs: Vec<PolyVector> = g.iter().cloned().map(PolyVector::from_poly).collect();
    module_syzygies(&vs)
}

/// Syzygies of a list of module elements.
pub fn module_syzygies(g: &[PolyVector]) -> Result<Vec<PolyVector>, SbError> {
    let Some((nvars, rank)) = common_shape(g)? else {
        return Ok(Vec::new());
    };
    Ok(tagged_kernel(g, g.len(), nvars, rank, None))
}

/// Preimage of `⟨denom⟩` under `O^k → O^r, e_i ↦ numer_i`.
pub fn preimage(
    numer: &[PolyVector],
    denom: &[PolyVector],
) -> Result<SubmodulePresentation, SbError> {
    let mut all = numer.to_vec();
    all.extend(denom.iter().cloned());
    let Some((nvars, rank)) = common_shape(&all)? else {
        return SubmodulePresentation::new(0, 0, Vec::new());
    };
    let k = numer.len();
    let d_mod = SubmodulePresentation::new(nvars, rank, denom.to_vec())?;
    let bound = d_mod.corner();
    let gens = tagged_kernel(&all, k, nvars, rank, bound);
    // m^N O^r ⊆ ⟨denom⟩ puts m^N O^k in the preimage
    let mut p = SubmodulePresentation::new(nvars, k, gens)?;
    p.bound = bound;
    Ok(p)
}

/// `dim_C ⟨numer⟩ / ⟨denom⟩`, computed as the colength of the preimage of
/// `⟨denom⟩` in `O^k`. Requires `⟨denom⟩ ⊆ ⟨numer⟩`.
pub fn quotient_dimension(numer: &[PolyVector], denom: &[PolyVector]) -> Result<Colength, SbError> {
    let mut all = numer.to_vec();
    all.extend(denom.iter().cloned());
    let Some((nvars, rank)) = common_shape(&all)? else {
        return Ok(Colength::Finite(0));
    };
    let n_mod = SubmodulePresentation::new(nvars, rank, numer.to_vec())?;
    for (i, d) in denom.iter().enumerate() {
        if !n_mod.contains(d)? {
            return Err(SbError::NotContained(i));
        }
    }
    Ok(preimage(numer, denom)?.colength())
}

/// Rank-1 convenience wrapper around [`quotient_dimension`].
pub fn ideal_quotient_dimension(
    numer: &[Polynomial],
    denom: &[Polynomial],
) -> Result<Colength, SbError> {
    let n: Vec<PolyVector> = numer.iter().cloned().map(PolyVector::from_poly).collect();
    let d: Vec<PolyVector> = denom.iter().cloned().map(PolyVector::from_poly).collect();
    quotient_dimension(&n, &d)
}

/// A local division witness: `unit * f = Σ cofactors_i * gens_i` exactly as
/// polynomials, with `unit(0) = 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lift {
    pub unit: Polynomial,
    pub cofactors: Vec<Polynomial>,
}

/// Expresses `f` through `gens` in the local ring, or `None` if `f` is not
/// in the ideal they generate.
pub fn lift(f: &Polynomial, gens: &[Polynomial]) -> Result<Option<Lift>, SbError> {
    let nvars = f.nvars();
    for g in gens {
        if g.nvars() != nvars {
            return Err(AlgebraError::DimensionMismatch(nvars, g.nvars()).into());
        }
    }
    // layout: [value | tag of f | tags of gens]
    let k = gens.len();
    let ord = ModuleOrder::elimination(1);
    let tagged = |value: &Polynomial, slot: usize| {
        let mut comps = vec![value.clone()];
        comps.extend((0..=k).map(|t| {
            if t == slot {
                Polynomial::one(nvars)
            } else {
                Polynomial::zero(nvars)
            }
        }));
        SVec::from_components(&comps, 0, &ord)
    };
    let gens_sv: Vec<SVec> = gens
        .iter()
        .enumerate()
        .filter(|(_, g)| !g.is_zero())
        .map(|(i, g)| tagged(g, i + 1))
        .collect();
    let params = mora::SbParams {
        ideal_case: false,
        nvars,
        rank: k + 2,
        bound: None,
        kernel: true,
    };
    let basis = mora::standard_basis(gens_sv, &ord, &params).reducers;
    let h = mora::mora_nf(tagged(f, 0), &basis, &ord, &mora::Cut::default());
    if !h.is_zero() && h.lead().pos == 0 {
        return Ok(None);
    }
    let mut comps = h.to_components(nvars, 1, k + 2);
    let unit = comps.remove(0);
    let cofactors = comps.iter().map(|c| -c).collect();
    Ok(Some(Lift { unit, cofactors }))
}
