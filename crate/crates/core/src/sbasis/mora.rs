//! Mora's tangent cone normal form and the standard-basis completion built
//! on top of it.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashMap};

use num_traits::One;

use super::vector::{ModuleOrder, STerm, SVec};
use crate::poly::{Coeff, Monomial};

/// Weak normal form of `f` with respect to `basis`.
///
/// Only the leading term is cleared. Reducers are chosen with minimal ecart;
/// whenever the chosen reducer has larger ecart than the current remainder,
/// the remainder joins the reducer set. The result `h` satisfies
/// `u f = Σ a_i g_i + h` with `u` a polynomial of constant term 1.
///
/// Terms the module is known to contain by `cut` are dropped as they
/// appear.
pub(crate) fn mora_nf(f: SVec, basis: &[SVec], ord: &ModuleOrder, cut: &Cut) -> SVec {
    let mut h = f;
    cut.apply(&mut h);
    let mut extra: Vec<SVec> = Vec::new();
    while !h.is_zero() {
        let lead = h.lead();
        let mut best: Option<&SVec> = None;
        for g in basis.iter().chain(extra.iter()) {
            let lg = g.lead();
            if lg.pos == lead.pos
                && lg.mon.divides(&lead.mon)
                && best.is_none_or(|b| g.ecart() < b.ecart())
            {
                best = Some(g);
                if g.ecart() == 0 {
                    break;
                }
            }
        }
        let Some(g) = best else { break };
        let lg = g.lead();
        let m = lg.mon.quotient_of(&lead.mon);
        let c = &lead.coeff / &lg.coeff;
        let mut next = h.sub_scaled(&c, &m, g, ord);
        cut.apply(&mut next);
        if g.ecart() > h.ecart() {
            extra.push(h);
        }
        h = next;
    }
    h
}

/// Reduction of `f` by elements of ecart at most the current ecart of the
/// remainder; stops at the first leading term that needs more.
///
/// This is the dehomogenized form of a homogeneous reduction: the degree of
/// the remainder never grows, so the loop is finite, and a completion built
/// on it terminates since the leading terms of the homogenized elements form
/// an ascending chain.
pub(crate) fn ecart_nf(f: SVec, basis: &[SVec], ord: &ModuleOrder, cut: &Cut) -> SVec {
    let mut h = f;
    cut.apply(&mut h);
    while !h.is_zero() {
        let lead = h.lead();
        let e = h.ecart();
        let mut best: Option<&SVec> = None;
        for g in basis {
            let lg = g.lead();
            if lg.pos == lead.pos
                && g.ecart() <= e
                && lg.mon.divides(&lead.mon)
                && best.is_none_or(|b| g.ecart() < b.ecart())
            {
                best = Some(g);
                if g.ecart() == 0 {
                    break;
                }
            }
        }
        let Some(g) = best else { break };
        let lg = g.lead();
        let m = lg.mon.quotient_of(&lead.mon);
        let c = &lead.coeff / &lg.coeff;
        h = h.sub_scaled(&c, &m, g, ord);
        cut.apply(&mut h);
    }
    h
}

/// All monomials of total degree `d` in `nvars` variables.
pub(crate) fn monomials_of_degree(nvars: usize, d: u32) -> Vec<Monomial> {
    fn rec(i: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Monomial>) {
        if i + 1 == cur.len() {
            cur[i] = left;
            out.push(Monomial::from_exponents(cur));
            return;
        }
        for e in (0..=left).rev() {
            cur[i] = e;
            rec(i + 1, left - e, cur, out);
        }
    }
    let mut out = Vec::new();
    if nvars == 0 {
        if d == 0 {
            out.push(Monomial::from_exponents(&[]));
        }
        return out;
    }
    rec(0, d, &mut vec![0; nvars], &mut out);
    out
}

/// `max degree of a standard monomial + 1` for the monomial module spanned
/// by `leads` in `O^rank`, or `None` if the staircase is infinite.
pub(crate) fn corner<'a, I>(leads: I, nvars: usize, rank: usize) -> Option<u32>
where
    I: IntoIterator<Item = (&'a Monomial, usize)>,
{
    super::staircase_stats(leads, nvars, rank).map(|(_, top)| top.map_or(0, |d| d + 1))
}

#[derive(Debug, PartialEq, Eq, PartialOrd, Ord)]
struct PairKey {
    sugar: u32,
    seq: u64,
    i: usize,
    j: usize,
}

/// Degrees from which on every term is known to lie in the module.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub(crate) struct Cut {
    /// For every position.
    pub global: Option<u32>,
    /// For positions `>= start`, the last block of the order.
    pub tail: Option<u32>,
    pub start: usize,
}

impl Cut {
    pub fn apply(&self, v: &mut SVec) {
        if let Some(n) = self.global {
            v.truncate(n, 0);
        }
        if let Some(n) = self.tail {
            v.truncate(n, self.start);
        }
    }
}

pub(crate) struct SbParams {
    pub ideal_case: bool,
    pub nvars: usize,
    /// Number of positions of the ambient free module.
    pub rank: usize,
    /// Degree `N` with `m^N O^rank` contained in the module.
    pub bound: Option<u32>,
    /// Only the part of the module led before the last block is completed;
    /// remainders led in the last block are collected as they come. For an
    /// elimination order they generate the intersection of the module with
    /// the last block (Schreyer).
    pub kernel: bool,
}

/// Result of a completion: a minimal standard basis, the full list of
/// elements found (better reducers, as they include low-ecart ones) and the
/// truncation in force at the end.
pub(crate) struct Completed {
    pub elements: Vec<SVec>,
    pub reducers: Vec<SVec>,
    /// Kernel mode: generators led in the last block.
    pub tail: Vec<SVec>,
    pub cut: Cut,
}

struct Pairs {
    queue: BinaryHeap<Reverse<PairKey>>,
    alive: HashMap<(usize, usize), (Monomial, usize)>,
    seq: u64,
}

/// Standard basis of the submodule generated by `gens` under `ord`.
///
/// Pairs are processed by increasing ecart-sugar (degree of the lcm of the
/// leading monomials plus the larger ecart), ties first-in-first-out, and
/// reduced with [`ecart_nf`]; a remainder whose leading term needs a reducer
/// of larger ecart simply joins the basis. The
/// product criterion is only applied in the ideal case; the chain criterion
/// always. Elements led in the last block of the order have no terms in
/// earlier blocks, so once their leading terms have a finite staircase a
/// truncation degree for that block follows (the whole module for
/// term-over-position orders).
pub(crate) fn standard_basis(gens: Vec<SVec>, ord: &ModuleOrder, params: &SbParams) -> Completed {
    let mut cut = Cut {
        global: params.bound,
        tail: None,
        start: if ord.split() >= params.rank {
            0
        } else {
            ord.split()
        },
    };
    let kernel = params.kernel && cut.start > 0;
    let split = cut.start;
    let mut basis: Vec<SVec> = Vec::new();
    let mut tail: Vec<SVec> = Vec::new();
    let mut pairs = Pairs {
        queue: BinaryHeap::new(),
        alive: HashMap::new(),
        seq: 0,
    };

    let add =
        |basis: &mut Vec<SVec>, tail: &mut Vec<SVec>, pairs: &mut Pairs, h: SVec, cut: &Cut| {
            if kernel && h.lead().pos >= split {
                // drop remainders already generated by the collected ones
                let mut h = ecart_nf(h, tail, ord, cut);
                if !h.is_zero() {
                    h.make_monic();
                    tail.push(h);
                }
            } else {
                push(basis, pairs, h, params.ideal_case);
            }
        };
    for mut g in gens {
        cut.apply(&mut g);
        if !g.is_zero() {
            add(&mut basis, &mut tail, &mut pairs, g, &cut);
        }
    }
    if let Some(n) = cut.global {
        // the monomials of m^N are generators themselves; truncation below
        // is reduction by them
        for p in 0..params.rank {
            for m in monomials_of_degree(params.nvars, n) {
                let term = STerm {
                    mon: m,
                    pos: p,
                    coeff: Coeff::one(),
                };
                add(
                    &mut basis,
                    &mut tail,
                    &mut pairs,
                    SVec::from_terms(vec![term], ord),
                    &cut,
                );
            }
        }
    }
    tighten(&mut basis, &mut tail, &mut cut, params);
    while let Some(Reverse(pair)) = pairs.queue.pop() {
        if pairs.alive.remove(&(pair.i, pair.j)).is_none() {
            continue;
        }
        let s = SVec::spoly(&basis[pair.i], &basis[pair.j], ord);
        let h = ecart_nf(s, &basis, ord, &cut);
        if h.is_zero() {
            continue;
        }
        let lh = h.lead();
        let in_tail = lh.pos >= cut.start && (lh.mon.pure_power_of().is_some() || lh.mon.is_one());
        add(&mut basis, &mut tail, &mut pairs, h, &cut);
        if in_tail {
            tighten(&mut basis, &mut tail, &mut cut, params);
        }
    }
    if cut.global.is_none() {
        if let Some(n) = cut.tail {
            // make the implicit m^N explicit so the result stands on its own
            for p in cut.start..params.rank {
                for m in monomials_of_degree(params.nvars, n) {
                    let covered = |v: &[SVec]| {
                        v.iter()
                            .any(|g| g.lead().pos == p && g.lead().mon.divides(&m))
                    };
                    if !covered(&basis) && !covered(&tail) {
                        let term = STerm {
                            mon: m,
                            pos: p,
                            coeff: Coeff::one(),
                        };
                        let v = SVec::from_terms(vec![term], ord);
                        if kernel {
                            tail.push(v);
                        } else {
                            basis.push(v);
                        }
                    }
                }
            }
        }
    }
    Completed {
        elements: minimize(basis.clone()),
        reducers: basis,
        tail,
        cut,
    }
}

fn push(basis: &mut Vec<SVec>, pairs: &mut Pairs, mut h: SVec, ideal_case: bool) {
    h.make_monic();
    let j = basis.len();
    let lh = h.lead();
    // chain criterion: drop (i, k) when lead(h) divides their lcm strictly
    pairs.alive.retain(|&(i, k), (lcm, pos)| {
        if *pos != lh.pos || !lh.mon.divides(lcm) {
            return true;
        }
        let li = &basis[i].lead().mon;
        let lk = &basis[k].lead().mon;
        li.lcm(&lh.mon) == *lcm || lk.lcm(&lh.mon) == *lcm
    });
    for (i, g) in basis.iter().enumerate() {
        let lg = g.lead();
        if lg.pos != lh.pos {
            continue;
        }
        if ideal_case && lg.mon.is_coprime(&lh.mon) {
            continue;
        }
        let lcm = lg.mon.lcm(&lh.mon);
        let sugar = lcm.degree() + g.ecart().max(h.ecart());
        pairs.queue.push(Reverse(PairKey {
            sugar,
            seq: pairs.seq,
            i,
            j,
        }));
        pairs.alive.insert((i, j), (lcm, lh.pos));
        pairs.seq += 1;
    }
    basis.push(h);
}

/// Lowers the truncation degree of the last block from the current leading
/// terms and truncates everything accordingly.
fn tighten(basis: &mut [SVec], tail: &mut [SVec], cut: &mut Cut, params: &SbParams) {
    let start = cut.start;
    let Some(n) = corner(
        basis
            .iter()
            .chain(tail.iter())
            .filter(|g| g.lead().pos >= start)
            .map(|g| (&g.lead().mon, g.lead().pos - start)),
        params.nvars,
        params.rank - start,
    ) else {
        return;
    };
    if cut.global.is_some_and(|b| b <= n) || cut.tail.is_some_and(|b| b <= n) {
        return;
    }
    cut.tail = Some(n);
    for g in basis.iter_mut().chain(tail.iter_mut()) {
        // inside a block the order is degree-compatible, so an element led
        // in the last block keeps its lead unless the lead itself goes
        let lead = g.lead().clone();
        cut.apply(g);
        if g.is_zero() || *g.lead() != lead {
            // lead in m^N: the element is implied by the explicit monomials
            // appended at the end; keep a monomial stand-in for the pairs
            *g = SVec::from_terms(vec![lead], &ModuleOrder::term_over_position());
        }
    }
}

fn minimize(basis: Vec<SVec>) -> Vec<SVec> {
    let n = basis.len();
    let mut keep = vec![true; n];
    for i in 0..n {
        let li = basis[i].lead();
        for j in 0..n {
            if i == j || !keep[j] {
                continue;
            }
            let lj = basis[j].lead();
            if lj.pos == li.pos && lj.mon.divides(&li.mon) && (lj.mon != li.mon || j < i) {
                keep[i] = false;
                break;
            }
        }
    }
    basis
        .into_iter()
        .zip(keep)
        .filter_map(|(g, k)| k.then_some(g))
        .collect()
}
