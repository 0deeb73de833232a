//! Sorted sparse module elements used inside the standard-basis engine.

use std::cmp::Ordering;

use num_traits::{One, Zero};

use crate::poly::{Coeff, LocalOrder, Monomial, PolyVector, Polynomial};

/// Order on the terms `x^a e_i` of a free module.
///
/// Positions `< split` form the first block, the rest the second block. A
/// term of the first block is larger than every term of the second; inside
/// a block the order is term-over-position: compare monomials by the local
/// order, then prefer the lower position index. `split >= rank` gives plain
/// term-over-position.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ModuleOrder {
    local: LocalOrder,
    split: usize,
}

impl ModuleOrder {
    pub fn term_over_position() -> Self {
        ModuleOrder {
            local: LocalOrder,
            split: usize::MAX,
        }
    }

    /// Elimination order for the first `split` positions.
    pub fn elimination(split: usize) -> Self {
        ModuleOrder {
            local: LocalOrder,
            split,
        }
    }

    pub fn split(&self) -> usize {
        self.split
    }

    pub fn cmp(&self, a: (&Monomial, usize), b: (&Monomial, usize)) -> Ordering {
        let (ba, bb) = (a.1 >= self.split, b.1 >= self.split);
        if ba != bb {
            return bb.cmp(&ba);
        }
        self.local.cmp(a.0, b.0).then(b.1.cmp(&a.1))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct STerm {
    pub mon: Monomial,
    pub pos: usize,
    pub coeff: Coeff,
}

/// Module element with terms sorted decreasingly by a [`ModuleOrder`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct SVec {
    terms: Vec<STerm>,
    max_deg: u32,
}

impl SVec {
    pub fn from_terms(mut terms: Vec<STerm>, ord: &ModuleOrder) -> SVec {
        terms.retain(|t| !t.coeff.is_zero());
        terms.sort_by(|a, b| ord.cmp((&b.mon, b.pos), (&a.mon, a.pos)));
        // merge duplicates (callers normally hand in distinct terms)
        let mut merged: Vec<STerm> = Vec::with_capacity(terms.len());
        for t in terms {
            match merged.last_mut() {
                Some(last) if last.pos == t.pos && last.mon == t.mon => last.coeff += t.coeff,
                _ => merged.push(t),
            }
        }
        merged.retain(|t| !t.coeff.is_zero());
        Self::from_sorted(merged)
    }

    fn from_sorted(terms: Vec<STerm>) -> SVec {
        let max_deg = terms.iter().map(|t| t.mon.degree()).max().unwrap_or(0);
        SVec { terms, max_deg }
    }

    pub fn from_components(comps: &[Polynomial], offset: usize, ord: &ModuleOrder) -> SVec {
        let mut terms = Vec::new();
        for (i, p) in comps.iter().enumerate() {
            for (m, c) in p.terms() {
                terms.push(STerm {
                    mon: m.clone(),
                    pos: i + offset,
                    coeff: c.clone(),
                });
            }
        }
        Self::from_terms(terms, ord)
    }

    pub fn from_vector(v: &PolyVector, ord: &ModuleOrder) -> SVec {
        Self::from_components(v.components(), 0, ord)
    }

    pub fn from_poly(p: &Polynomial, ord: &ModuleOrder) -> SVec {
        Self::from_components(std::slice::from_ref(p), 0, ord)
    }

    /// Components `lo..hi` shifted down to start at 0.
    pub fn to_components(&self, nvars: usize, lo: usize, hi: usize) -> Vec<Polynomial> {
        let mut buckets: Vec<Vec<(Coeff, Monomial)>> = vec![Vec::new(); hi - lo];
        for t in &self.terms {
            if t.pos >= lo && t.pos < hi {
                buckets[t.pos - lo].push((t.coeff.clone(), t.mon.clone()));
            }
        }
        buckets
            .into_iter()
            .map(|b| Polynomial::from_terms(nvars, b))
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn lead(&self) -> &STerm {
        &self.terms[0]
    }

    pub fn ecart(&self) -> u32 {
        self.max_deg - self.lead().mon.degree()
    }

    /// Drops every term of degree `>= n` in a position `>= start`.
    pub fn truncate(&mut self, n: u32, start: usize) {
        if self.max_deg < n {
            return;
        }
        self.terms.retain(|t| t.pos < start || t.mon.degree() < n);
        self.max_deg = self.terms.iter().map(|t| t.mon.degree()).max().unwrap_or(0);
    }

    pub fn make_monic(&mut self) {
        if self.is_zero() || self.terms[0].coeff.is_one() {
            return;
        }
        let inv = self.terms[0].coeff.recip();
        for t in &mut self.terms {
            t.coeff *= &inv;
        }
    }

    /// `self - c * m * other`; the order is multiplicative so scaling
    /// `other` by `m` keeps it sorted and a merge suffices.
    pub fn sub_scaled(&self, c: &Coeff, m: &Monomial, other: &SVec, ord: &ModuleOrder) -> SVec {
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let mut a = self.terms.iter().peekable();
        let mut b = other
            .terms
            .iter()
            .map(|t| STerm {
                mon: t.mon.mul(m),
                pos: t.pos,
                coeff: -(c * &t.coeff),
            })
            .peekable();
        loop {
            let ord_ab = match (a.peek(), b.peek()) {
                (None, None) => break,
                (Some(_), None) => Ordering::Greater,
                (None, Some(_)) => Ordering::Less,
                (Some(x), Some(y)) => ord.cmp((&x.mon, x.pos), (&y.mon, y.pos)),
            };
            match ord_ab {
                Ordering::Greater => out.push(a.next().unwrap().clone()),
                Ordering::Less => out.push(b.next().unwrap()),
                Ordering::Equal => {
                    let x = a.next().unwrap();
                    let mut y = b.next().unwrap();
                    y.coeff += &x.coeff;
                    if !y.coeff.is_zero() {
                        out.push(y);
                    }
                }
            }
        }
        SVec::from_sorted(out)
    }

    /// S-vector of two elements whose leading terms share a position.
    pub fn spoly(f: &SVec, g: &SVec, ord: &ModuleOrder) -> SVec {
        let (lf, lg) = (f.lead(), g.lead());
        debug_assert_eq!(lf.pos, lg.pos);
        let lcm = lf.mon.lcm(&lg.mon);
        let mf = lf.mon.quotient_of(&lcm);
        let mg = lg.mon.quotient_of(&lcm);
        let scaled_f = SVec::zero().sub_scaled(&(-lf.coeff.recip()), &mf, f, ord);
        scaled_f.sub_scaled(&lg.coeff.recip(), &mg, g, ord)
    }

    pub fn zero() -> SVec {
        SVec {
            terms: Vec::new(),
            max_deg: 0,
        }
    }
}
