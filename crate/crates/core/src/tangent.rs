//! Vector fields tangent to a hypersurface `X = {φ = 0}`.
//!
//! `Θ_X` is computed as the projection of the syzygies of
//! `(∂φ/∂x_1, ..., ∂φ/∂x_n, φ)`: a field `ξ` is tangent iff
//! `dφ(ξ) ∈ ⟨φ⟩`. The trivial submodule `Θ_X^T` has the explicit generators
//! `φ ∂/∂x_i` and the Hamiltonian fields `∂φ/∂x_k ∂/∂x_j - ∂φ/∂x_j ∂/∂x_k`.

use thiserror::Error;

use crate::poly::{jacobian_minors, AlgebraError, PolyVector, Polynomial};
use crate::sbasis::{self, Colength, IdealPresentation, SbError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TangentError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    StandardBasis(#[from] SbError),
    #[error("φ does not define an isolated singularity (infinite Milnor number)")]
    NonIsolated,
    #[error("φ is the zero polynomial")]
    ZeroHypersurface,
    #[error("vector field is not tangent to the hypersurface")]
    NotTangent,
    #[error("local division produced no unit witness")]
    WitnessNotFound,
}

/// `Σ ξ_i ∂/∂x_i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VectorField(PolyVector);

impl VectorField {
    pub fn new(components: Vec<Polynomial>) -> Result<Self, AlgebraError> {
        Ok(VectorField(PolyVector::new(components)?))
    }

    pub fn from_vector(v: PolyVector) -> Self {
        VectorField(v)
    }

    pub fn components(&self) -> &[Polynomial] {
        self.0.components()
    }

    pub fn as_vector(&self) -> &PolyVector {
        &self.0
    }

    /// `df(ξ) = Σ ξ_i ∂f/∂x_i`.
    pub fn apply(&self, f: &Polynomial) -> Result<Polynomial, AlgebraError> {
        if self.0.rank() != f.nvars() {
            return Err(AlgebraError::DimensionMismatch(self.0.rank(), f.nvars()));
        }
        self.0.dot(&f.gradient())
    }
}

pub fn trivial_generators(phi: &Polynomial) -> Vec<VectorField> {
    let n = phi.nvars();
    let grad = phi.gradient();
    let zero = Polynomial::zero(n);
    let mut out = Vec::with_capacity(n + n * n.saturating_sub(1) / 2);
    for i in 0..n {
        let mut c = vec![zero.clone(); n];
        c[i] = phi.clone();
        out.push(VectorField(PolyVector::new(c).unwrap()));
    }
    for j in 0..n {
        for k in j + 1..n {
            let mut c = vec![zero.clone(); n];
            c[j] = grad[k].clone();
            c[k] = -&grad[j];
            out.push(VectorField(PolyVector::new(c).unwrap()));
        }
    }
    out
}

fn check_isolated(phi: &Polynomial) -> Result<(), TangentError> {
    if phi.is_zero() {
        return Err(TangentError::ZeroHypersurface);
    }
    let jac = IdealPresentation::new(phi.nvars(), phi.gradient())?;
    match jac.colength() {
        Colength::Finite(_) => Ok(()),
        Colength::Infinite => Err(TangentError::NonIsolated),
    }
}

/// Generators of `Θ_X` (a standard basis of the projected syzygy module,
/// not minimalized further).
pub fn theta_x(phi: &Polynomial) -> Result<Vec<VectorField>, TangentError> {
    check_isolated(phi)?;
    let grad: Vec<PolyVector> = phi
        .gradient()
        .into_iter()
        .map(PolyVector::from_poly)
        .collect();
    let pre = sbasis::preimage(&grad, &[PolyVector::from_poly(phi.clone())])?;
    Ok(pre.generators().iter().cloned().map(VectorField).collect())
}

/// The ideal generated by `{df(ξ) : ξ ∈ fields}`.
pub fn df_ideal(f: &Polynomial, fields: &[VectorField]) -> Result<IdealPresentation, TangentError> {
    let gens = fields
        .iter()
        .map(|xi| xi.apply(f))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(IdealPresentation::new(f.nvars(), gens)?)
}

/// `df(Θ_X^T) = ⟨φ ∂f/∂x_i⟩ + J(f, φ)` in closed form.
pub fn df_trivial_ideal(
    f: &Polynomial,
    phi: &Polynomial,
) -> Result<IdealPresentation, TangentError> {
    let mut gens: Vec<Polynomial> = f.gradient().iter().map(|d| phi * d).collect();
    gens.extend(jacobian_minors(f, phi)?);
    Ok(IdealPresentation::new(f.nvars(), gens)?)
}

/// For `ξ ∈ Θ_X` with `dφ(ξ) = λφ`: trivial iff `λ ∈ Jφ`.
pub fn is_trivial_field(xi: &VectorField, phi: &Polynomial) -> Result<bool, TangentError> {
    if phi.is_zero() {
        return Err(TangentError::ZeroHypersurface);
    }
    let d = xi.apply(phi)?;
    let lift = sbasis::lift(&d, std::slice::from_ref(phi))?.ok_or(TangentError::NotTangent)?;
    if lift.unit.constant_term() == num_traits::Zero::zero() {
        return Err(TangentError::WitnessNotFound);
    }
    // λ = a / u with u a unit, so λ ∈ Jφ iff a ∈ Jφ
    let a = &lift.cofactors[0];
    let jac = IdealPresentation::new(phi.nvars(), phi.gradient())?;
    Ok(jac.contains(a)?)
}

/// `Θ_X` and `Θ_X^T` for one hypersurface.
#[derive(Debug, Clone)]
pub struct TangentModulePair {
    pub phi: Polynomial,
    pub trivial_gens: Vec<VectorField>,
    pub full_gens: Vec<VectorField>,
}

impl TangentModulePair {
    pub fn new(phi: &Polynomial) -> Result<Self, TangentError> {
        Ok(TangentModulePair {
            phi: phi.clone(),
            trivial_gens: trivial_generators(phi),
            full_gens: theta_x(phi)?,
        })
    }

    pub fn trivial_vectors(&self) -> Vec<PolyVector> {
        self.trivial_gens.iter().map(|v| v.0.clone()).collect()
    }

    pub fn full_vectors(&self) -> Vec<PolyVector> {
        self.full_gens.iter().map(|v| v.0.clone()).collect()
    }

    /// `dim Θ_X / Θ_X^T`.
    pub fn quotient_dimension(&self) -> Result<Colength, TangentError> {
        Ok(sbasis::quotient_dimension(
            &self.full_vectors(),
            &self.trivial_vectors(),
        )?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::{jet_colength, jet_module_colength, DEFAULT_CAP};
    use crate::parse::parse_polynomial;
    use crate::sbasis::SubmodulePresentation;

    fn vars(n: usize) -> Vec<String> {
        ["x", "y", "z"][..n].iter().map(|s| s.to_string()).collect()
    }

    fn p(s: &str) -> Polynomial {
        parse_polynomial(s, &vars(2)).unwrap()
    }

    fn field(a: &str, b: &str) -> VectorField {
        VectorField::new(vec![p(a), p(b)]).unwrap()
    }

    fn span(fields: &[VectorField]) -> SubmodulePresentation {
        let n = fields[0].components().len();
        SubmodulePresentation::new(
            fields[0].as_vector().nvars(),
            n,
            fields.iter().map(|f| f.as_vector().clone()).collect(),
        )
        .unwrap()
    }

    #[test]
    fn trivial_generator_lists() {
        assert_eq!(
            trivial_generators(&p("x^3+y^2")),
            vec![
                field("x^3+y^2", "0"),
                field("0", "x^3+y^2"),
                field("2*y", "-3*x^2")
            ]
        );
        assert_eq!(
            trivial_generators(&p("x*y")),
            vec![field("x*y", "0"), field("0", "x*y"), field("x", "-y")]
        );
        let one = parse_polynomial("x^2", &vars(1)).unwrap();
        assert_eq!(trivial_generators(&one).len(), 1);
        let three = parse_polynomial("x^2+y^2+z^2", &vars(3)).unwrap();
        assert_eq!(trivial_generators(&three).len(), 6);
    }

    #[test]
    fn trivial_generators_are_tangent() {
        for s in ["x^3+y^2", "x*y", "x^5+y^5+x^2*y^2"] {
            let phi = p(s);
            for xi in trivial_generators(&phi) {
                let d = xi.apply(&phi).unwrap();
                assert!(IdealPresentation::new(2, vec![phi.clone()])
                    .unwrap()
                    .contains(&d)
                    .unwrap());
            }
        }
    }

    #[test]
    fn normal_crossing_fields() {
        let theta = theta_x(&p("x*y")).unwrap();
        let m = span(&theta);
        assert!(m.contains(field("x", "0").as_vector()).unwrap());
        assert!(m.contains(field("0", "y").as_vector()).unwrap());
        let expected = span(&[field("x", "0"), field("0", "y")]);
        for xi in &theta {
            assert!(expected.contains(xi.as_vector()).unwrap());
        }
    }

    #[test]
    fn cusp_fields() {
        let phi = p("x^3+y^2");
        let theta = theta_x(&phi).unwrap();
        let m = span(&theta);
        let euler = field("2*x", "3*y");
        assert_eq!(euler.apply(&phi).unwrap(), &p("6") * &phi);
        assert!(m.contains(euler.as_vector()).unwrap());
        assert!(m.contains(field("2*y", "-3*x^2").as_vector()).unwrap());
        for xi in &theta {
            let d = xi.apply(&phi).unwrap();
            assert!(IdealPresentation::new(2, vec![phi.clone()])
                .unwrap()
                .contains(&d)
                .unwrap());
        }
        for xi in trivial_generators(&phi) {
            assert!(m.contains(xi.as_vector()).unwrap());
        }
    }

    #[test]
    fn smooth_and_degenerate_hypersurfaces() {
        let smooth = p("x+x^2");
        let theta = theta_x(&smooth).unwrap();
        let ideal = df_ideal(&p("x+2*y"), &theta).unwrap();
        assert_eq!(ideal.colength(), Colength::Finite(0));

        let umbrella = parse_polynomial("x^2*y-z^2", &vars(3)).unwrap();
        assert_eq!(theta_x(&umbrella).unwrap_err(), TangentError::NonIsolated);
        assert_eq!(
            theta_x(&p("0")).unwrap_err(),
            TangentError::ZeroHypersurface
        );
    }

    #[test]
    fn df_ideal_examples() {
        let i = df_ideal(&p("y"), &trivial_generators(&p("x^3+y^2"))).unwrap();
        let expected = IdealPresentation::new(2, vec![p("x^3+y^2"), p("3*x^2")]).unwrap();
        for g in i.generators() {
            assert!(expected.contains(g).unwrap());
        }
        for g in expected.generators() {
            assert!(i.contains(g).unwrap());
        }
        assert!(df_ideal(&p("x"), &[]).unwrap().generators().is_empty());

        let j = df_ideal(&p("x+y"), &theta_x(&p("x*y")).unwrap()).unwrap();
        assert_eq!(j.colength(), Colength::Finite(1));
        assert!(j.contains(&p("x")).unwrap() && j.contains(&p("y")).unwrap());
    }

    #[test]
    fn df_trivial_ideal_examples() {
        let cases = [("y", "x^3+y^2"), ("x+y", "x*y")];
        let expected = [4u64, 2];
        for ((f, phi), want) in cases.iter().zip(expected) {
            let i = df_trivial_ideal(&p(f), &p(phi)).unwrap();
            let jet = jet_colength(i.generators(), DEFAULT_CAP).unwrap().colength;
            assert_eq!(jet, want);
            assert_eq!(i.colength(), Colength::Finite(want));
        }
        let phi = p("x^3+y^2");
        assert_eq!(
            df_trivial_ideal(&phi, &phi).unwrap().colength(),
            Colength::Infinite
        );
    }

    #[test]
    fn trivial_closed_form_matches_field_route() {
        for (f, phi) in [
            ("y", "x^3+y^2"),
            ("x+2*y", "x^5+y^5+x^2*y^2"),
            ("x^2+3*y^2", "x*y"),
        ] {
            let a = df_trivial_ideal(&p(f), &p(phi)).unwrap();
            let b = df_ideal(&p(f), &trivial_generators(&p(phi))).unwrap();
            for g in a.generators() {
                assert!(b.contains(g).unwrap());
            }
            for g in b.generators() {
                assert!(a.contains(g).unwrap());
            }
        }
    }

    #[test]
    fn triviality_of_fields() {
        let phi = p("x^3+y^2");
        assert!(!is_trivial_field(&field("2*x", "3*y"), &phi).unwrap());
        assert!(is_trivial_field(&field("2*y", "-3*x^2"), &phi).unwrap());
        assert!(is_trivial_field(&field("x^3+y^2", "0"), &phi).unwrap());
        assert_eq!(
            is_trivial_field(&field("1", "0"), &phi),
            Err(TangentError::NotTangent)
        );
        let t = p("x^5+y^5+x^2*y^2");
        for xi in trivial_generators(&t) {
            assert!(is_trivial_field(&xi, &t).unwrap());
        }
    }

    #[test]
    fn theta_quotient_matches_oracle() {
        for (phi, tau) in [("x^3+y^2", 2u64), ("x*y", 1)] {
            let pair = TangentModulePair::new(&p(phi)).unwrap();
            assert_eq!(pair.quotient_dimension().unwrap(), Colength::Finite(tau));
            let pre = sbasis::preimage(&pair.full_vectors(), &pair.trivial_vectors()).unwrap();
            let jet = jet_module_colength(pre.generators(), pre.rank(), DEFAULT_CAP).unwrap();
            assert_eq!(jet.colength, tau);
        }
    }
}
