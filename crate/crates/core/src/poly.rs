//! Exact sparse multivariate polynomials over the rationals.
//!
//! Polynomials are stored in canonical form: a map from exponent vector to a
//! nonzero [`BigRational`]. Storage order of the map is plain lexicographic
//! on exponents and carries no mathematical meaning; every order-dependent
//! question (leading term, rendering) goes through a [`LocalOrder`].

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use smallvec::SmallVec;
use thiserror::Error;

pub type Coeff = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("variable count mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("variable index {index} out of range for {nvars} variables")]
    IndexOutOfRange { index: usize, nvars: usize },
    #[error("jacobian minor needs two distinct indices, got {0} twice")]
    EqualIndices(usize),
    #[error("the zero polynomial has no leading term")]
    ZeroPolynomial,
}

/// Exponent vector `x_0^e_0 * ... * x_{n-1}^e_{n-1}`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Monomial(SmallVec<[u32; 4]>);

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial(SmallVec::from_elem(0, nvars))
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut m = Self::one(nvars);
        m.0[i] = 1;
        m
    }

    pub fn from_exponents(exps: &[u32]) -> Self {
        Monomial(SmallVec::from_slice(exps))
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn nvars(&self) -> usize {
        self.0.len()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// `other / self`, assuming `self` divides `other`.
    pub fn quotient_of(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| b - a).collect())
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        Monomial(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| *a.max(b))
                .collect(),
        )
    }

    pub fn is_coprime(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| *a == 0 || *b == 0)
    }

    /// `Some(i)` if this is `x_i^k` with `k >= 1`.
    pub fn pure_power_of(&self) -> Option<usize> {
        let mut found = None;
        for (i, &e) in self.0.iter().enumerate() {
            if e > 0 {
                if found.is_some() {
                    return None;
                }
                found = Some(i);
            }
        }
        found
    }
}

/// Negative-degree reverse-lexicographic order (`ds`): a monomial of lower
/// total degree is larger, so `1 > x_i` for every variable; ties are broken
/// reverse-lexicographically with `x_0 > x_1 > ... > x_{n-1}`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct LocalOrder;

impl LocalOrder {
    pub fn cmp(&self, a: &Monomial, b: &Monomial) -> Ordering {
        let (da, db) = (a.degree(), b.degree());
        if da != db {
            return db.cmp(&da);
        }
        for (ea, eb) in a.0.iter().zip(&b.0).rev() {
            if ea != eb {
                return eb.cmp(ea);
            }
        }
        Ordering::Equal
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Polynomial {
    nvars: usize,
    terms: BTreeMap<Monomial, Coeff>,
}

impl Polynomial {
    pub fn zero(nvars: usize) -> Self {
        Polynomial {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: Coeff) -> Self {
        Self::term(c, Monomial::one(nvars))
    }

    pub fn from_int(nvars: usize, c: i64) -> Self {
        Self::constant(nvars, Coeff::from_integer(BigInt::from(c)))
    }

    pub fn one(nvars: usize) -> Self {
        Self::from_int(nvars, 1)
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        Self::term(Coeff::one(), Monomial::var(nvars, i))
    }

    pub fn term(c: Coeff, m: Monomial) -> Self {
        let mut p = Self::zero(m.nvars());
        if !c.is_zero() {
            p.terms.insert(m, c);
        }
        p
    }

    /// Builds a polynomial from `(coefficient, exponents)` pairs, merging
    /// duplicates.
    pub fn from_terms<I>(nvars: usize, terms: I) -> Self
    where
        I: IntoIterator<Item = (Coeff, Monomial)>,
    {
        let mut p = Self::zero(nvars);
        for (c, m) in terms {
            assert_eq!(m.nvars(), nvars, "monomial arity");
            p.add_term(c, m);
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Coeff)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &Monomial) -> Coeff {
        self.terms.get(m).cloned().unwrap_or_else(Coeff::zero)
    }

    pub fn constant_term(&self) -> Coeff {
        self.coefficient(&Monomial::one(self.nvars))
    }

    /// Highest total degree among the terms; 0 for the zero polynomial.
    pub fn degree(&self) -> u32 {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    /// Lowest total degree among the terms (the multiplicity at the origin
    /// when the constant term vanishes). `None` for zero.
    pub fn order(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).min()
    }

    /// True when every term has total degree exactly 1.
    pub fn is_linear_form(&self) -> bool {
        !self.is_zero() && self.terms.keys().all(|m| m.degree() == 1)
    }

    fn add_term(&mut self, c: Coeff, m: Monomial) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    fn check_dims(&self, other: &Polynomial) -> Result<(), AlgebraError> {
        if self.nvars != other.nvars {
            Err(AlgebraError::DimensionMismatch(self.nvars, other.nvars))
        } else {
            Ok(())
        }
    }

    pub fn try_add(&self, other: &Polynomial) -> Result<Polynomial, AlgebraError> {
        self.check_dims(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(c.clone(), m.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &Polynomial) -> Result<Polynomial, AlgebraError> {
        self.check_dims(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(-c.clone(), m.clone());
        }
        Ok(out)
    }

    pub fn try_mul(&self, other: &Polynomial) -> Result<Polynomial, AlgebraError> {
        self.check_dims(other)?;
        let mut out = Polynomial::zero(self.nvars);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.add_term(ca * cb, ma.mul(mb));
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Coeff) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(self.nvars);
        }
        Polynomial {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect(),
        }
    }

    pub fn mul_monomial(&self, m: &Monomial) -> Polynomial {
        Polynomial {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(t, a)| (t.mul(m), a.clone()))
                .collect(),
        }
    }

    pub fn pow(&self, k: u32) -> Polynomial {
        let mut acc = Polynomial::one(self.nvars);
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// Formal partial derivative with respect to `x_i` (0-based).
    pub fn partial_derivative(&self, i: usize) -> Result<Polynomial, AlgebraError> {
        if i >= self.nvars {
            return Err(AlgebraError::IndexOutOfRange {
                index: i,
                nvars: self.nvars,
            });
        }
        let mut out = Polynomial::zero(self.nvars);
        for (m, c) in &self.terms {
            let e = m.0[i];
            if e == 0 {
                continue;
            }
            let mut d = m.clone();
            d.0[i] -= 1;
            out.add_term(c * Coeff::from_integer(BigInt::from(e)), d);
        }
        Ok(out)
    }

    /// All partial derivatives, i.e. the generators of the Jacobian ideal.
    pub fn gradient(&self) -> Vec<Polynomial> {
        (0..self.nvars)
            .map(|i| self.partial_derivative(i).expect("index in range"))
            .collect()
    }

    /// Largest term under `ord`; for a local order, a term of minimal
    /// total degree.
    pub fn leading_term(&self, ord: &LocalOrder) -> Result<(Coeff, Monomial), AlgebraError> {
        self.terms
            .iter()
            .max_by(|a, b| ord.cmp(a.0, b.0))
            .map(|(m, c)| (c.clone(), m.clone()))
            .ok_or(AlgebraError::ZeroPolynomial)
    }

    /// `deg(f) - deg(LM(f))`.
    pub fn ecart(&self, ord: &LocalOrder) -> Result<u32, AlgebraError> {
        let (_, lm) = self.leading_term(ord)?;
        Ok(self.degree() - lm.degree())
    }

    /// Renders with the given variable names, terms sorted by the local
    /// order (largest first).
    pub fn render(&self, vars: &[impl AsRef<str>]) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let ord = LocalOrder;
        let mut terms: Vec<_> = self.terms.iter().collect();
        terms.sort_by(|a, b| ord.cmp(b.0, a.0));
        let mut out = String::new();
        for (k, (m, c)) in terms.into_iter().enumerate() {
            let neg = c.is_negative();
            if k == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { "-" } else { "+" });
            }
            let abs = c.abs();
            let mut factors: Vec<String> = Vec::new();
            if !abs.is_one() || m.is_one() {
                factors.push(render_coeff(&abs));
            }
            for (i, &e) in m.0.iter().enumerate() {
                match e {
                    0 => {}
                    1 => factors.push(vars[i].as_ref().to_string()),
                    _ => factors.push(format!("{}^{}", vars[i].as_ref(), e)),
                }
            }
            out.push_str(&factors.join("*"));
        }
        out
    }
}

fn render_coeff(c: &Coeff) -> String {
    if c.is_integer() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = (0..self.nvars).map(|i| format!("x{}", i + 1)).collect();
        f.write_str(&self.render(&names))
    }
}

// Operator impls panic on a variable-count mismatch; use the `try_*`
// methods where the inputs are not already known to agree.
impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        self.try_add(rhs).expect("polynomial add")
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        self.try_sub(rhs).expect("polynomial sub")
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        self.try_mul(rhs).expect("polynomial mul")
    }
}

impl Mul for Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: Polynomial) -> Polynomial {
        &self * &rhs
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), -c.clone()))
                .collect(),
        }
    }
}

/// `(∂f/∂x_i)(∂g/∂x_j) - (∂f/∂x_j)(∂g/∂x_i)`.
pub fn jacobian_minor(
    f: &Polynomial,
    g: &Polynomial,
    i: usize,
    j: usize,
) -> Result<Polynomial, AlgebraError> {
    f.check_dims(g)?;
    if i == j {
        return Err(AlgebraError::EqualIndices(i));
    }
    let (fi, fj) = (f.partial_derivative(i)?, f.partial_derivative(j)?);
    let (gi, gj) = (g.partial_derivative(i)?, g.partial_derivative(j)?);
    Ok(&(&fi * &gj) - &(&fj * &gi))
}

/// All minors `jacobian_minor(f, g, i, j)` for `i < j`, in lexicographic
/// order of `(i, j)`.
pub fn jacobian_minors(f: &Polynomial, g: &Polynomial) -> Result<Vec<Polynomial>, AlgebraError> {
    f.check_dims(g)?;
    let n = f.nvars();
    let mut out = Vec::with_capacity(n * n.saturating_sub(1) / 2);
    for i in 0..n {
        for j in i + 1..n {
            out.push(jacobian_minor(f, g, i, j)?);
        }
    }
    Ok(out)
}

/// Element of the free module `O^r`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PolyVector {
    nvars: usize,
    components: Vec<Polynomial>,
}

impl PolyVector {
    pub fn new(components: Vec<Polynomial>) -> Result<Self, AlgebraError> {
        let nvars = components.first().map(Polynomial::nvars).unwrap_or(0);
        for c in &components {
            if c.nvars() != nvars {
                return Err(AlgebraError::DimensionMismatch(nvars, c.nvars()));
            }
        }
        Ok(PolyVector { nvars, components })
    }

    pub fn zero(nvars: usize, rank: usize) -> Self {
        PolyVector {
            nvars,
            components: vec![Polynomial::zero(nvars); rank],
        }
    }

    /// The `i`-th unit vector `e_i` of rank `rank`.
    pub fn unit(nvars: usize, rank: usize, i: usize) -> Self {
        let mut v = Self::zero(nvars, rank);
        v.components[i] = Polynomial::one(nvars);
        v
    }

    pub fn from_poly(p: Polynomial) -> Self {
        PolyVector {
            nvars: p.nvars(),
            components: vec![p],
        }
    }

    pub fn rank(&self) -> usize {
        self.components.len()
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn components(&self) -> &[Polynomial] {
        &self.components
    }

    pub fn into_components(self) -> Vec<Polynomial> {
        self.components
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(Polynomial::is_zero)
    }

    /// `Σ self_i * other_i`.
    pub fn dot(&self, other: &[Polynomial]) -> Result<Polynomial, AlgebraError> {
        if self.rank() != other.len() {
            return Err(AlgebraError::DimensionMismatch(self.rank(), other.len()));
        }
        let mut acc = Polynomial::zero(self.nvars);
        for (a, b) in self.components.iter().zip(other) {
            acc = acc.try_add(&a.try_mul(b)?)?;
        }
        Ok(acc)
    }

    pub fn scale_poly(&self, p: &Polynomial) -> PolyVector {
        PolyVector {
            nvars: self.nvars,
            components: self.components.iter().map(|c| c * p).collect(),
        }
    }

    pub fn try_add(&self, other: &PolyVector) -> Result<PolyVector, AlgebraError> {
        if self.rank() != other.rank() {
            return Err(AlgebraError::DimensionMismatch(self.rank(), other.rank()));
        }
        let components = self
            .components
            .iter()
            .zip(&other.components)
            .map(|(a, b)| a.try_add(b))
            .collect::<Result<_, _>>()?;
        Ok(PolyVector {
            nvars: self.nvars,
            components,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x() -> Polynomial {
        Polynomial::var(2, 0)
    }
    fn y() -> Polynomial {
        Polynomial::var(2, 1)
    }
    fn c(k: i64) -> Polynomial {
        Polynomial::from_int(2, k)
    }
    fn mono(e: &[u32]) -> Monomial {
        Monomial::from_exponents(e)
    }

    #[test]
    fn add_cancels_and_doubles() {
        assert_eq!(&(&x() + &y()) + &(-&x()), y());
        let f = &x().pow(3) + &y().pow(2);
        assert_eq!(&f + &Polynomial::zero(2), f);
        assert_eq!(&f + &f, &(&c(2) * &x().pow(3)) + &(&c(2) * &y().pow(2)));
    }

    #[test]
    fn mul_examples() {
        let lhs = &(&x() + &y()) * &(&x() - &y());
        assert_eq!(lhs, &x().pow(2) - &y().pow(2));
        let f = &x().pow(3) + &y().pow(2);
        assert_eq!(&f * &Polynomial::one(2), f);
        assert_eq!(&(&x() + &c(1)) * &x(), &x().pow(2) + &x());
    }

    #[test]
    fn dimension_mismatch_is_an_error() {
        let a = Polynomial::var(2, 0);
        let b = Polynomial::var(3, 0);
        assert_eq!(a.try_add(&b), Err(AlgebraError::DimensionMismatch(2, 3)));
        assert!(a.try_mul(&b).is_err());
    }

    #[test]
    fn derivatives() {
        let f = &x().pow(3) + &y().pow(2);
        assert_eq!(f.partial_derivative(0).unwrap(), &c(3) * &x().pow(2));
        assert_eq!(f.partial_derivative(1).unwrap(), &c(2) * &y());
        assert!(c(7).partial_derivative(0).unwrap().is_zero());
        assert!(matches!(
            f.partial_derivative(2),
            Err(AlgebraError::IndexOutOfRange { index: 2, nvars: 2 })
        ));
    }

    #[test]
    fn minors() {
        let phi = &x().pow(3) + &y().pow(2);
        assert_eq!(
            jacobian_minor(&y(), &phi, 0, 1).unwrap(),
            &c(-3) * &x().pow(2)
        );
        assert!(jacobian_minor(&phi, &phi, 0, 1).unwrap().is_zero());
        let f = &x() + &y();
        let g = &x() * &y();
        assert_eq!(jacobian_minor(&f, &g, 0, 1).unwrap(), &x() - &y());
        assert_eq!(
            jacobian_minor(&f, &g, 1, 0).unwrap(),
            -&jacobian_minor(&f, &g, 0, 1).unwrap()
        );
        assert_eq!(
            jacobian_minor(&f, &g, 1, 1),
            Err(AlgebraError::EqualIndices(1))
        );
    }

    #[test]
    fn leading_terms_are_local() {
        let ord = LocalOrder;
        let (_, m) = (&x() + &x().pow(2)).leading_term(&ord).unwrap();
        assert_eq!(m, mono(&[1, 0]));
        let (_, m) = (&c(1) + &x()).leading_term(&ord).unwrap();
        assert!(m.is_one());
        // 3x^2y + 2xy^2: degree tie, reverse-lex puts x^2y first.
        let f = &(&c(3) * &(&x().pow(2) * &y())) + &(&c(2) * &(&x() * &y().pow(2)));
        let (co, m) = f.leading_term(&ord).unwrap();
        assert_eq!(m, mono(&[2, 1]));
        assert_eq!(co, Coeff::from_integer(3.into()));
        assert_eq!(
            Polynomial::zero(2).leading_term(&ord),
            Err(AlgebraError::ZeroPolynomial)
        );
    }

    #[test]
    fn local_order_basics() {
        let ord = LocalOrder;
        assert_eq!(ord.cmp(&mono(&[0, 0]), &mono(&[1, 0])), Ordering::Greater);
        assert_eq!(ord.cmp(&mono(&[1, 0]), &mono(&[0, 1])), Ordering::Greater);
        assert_eq!(ord.cmp(&mono(&[0, 2]), &mono(&[3, 0])), Ordering::Greater);
        assert_eq!(
            ord.cmp(&mono(&[1, 1, 0]), &mono(&[0, 0, 2])),
            Ordering::Greater
        );
    }

    #[test]
    fn rendering() {
        let f = &x().pow(3) + &y().pow(2);
        assert_eq!(f.render(&["x", "y"]), "y^2+x^3");
        let g =
            &(&c(-3) * &(&x() * &y())) + &Polynomial::constant(2, Coeff::new(1.into(), 2.into()));
        assert_eq!(g.render(&["x", "y"]), "1/2-3*x*y");
        assert_eq!(Polynomial::zero(2).render(&["x", "y"]), "0");
        assert_eq!((-&x()).render(&["a", "b"]), "-a");
    }

    #[test]
    fn vector_dot() {
        let v = PolyVector::new(vec![c(2) * x(), c(3) * y()].into_iter().collect()).unwrap();
        let grad = (&x().pow(3) + &y().pow(2)).gradient();
        // Euler field of the cusp: 2x*3x^2 + 3y*2y = 6(x^3+y^2)
        assert_eq!(v.dot(&grad).unwrap(), &c(6) * &(&x().pow(3) + &y().pow(2)));
    }
}
