use brcalc::corpus::{builtin_corpus, TAG_WEIGHTED_HOMOGENEOUS};
use brcalc::invariants::{full_report, GermPair, ReportOptions, Value};
use brcalc::oracle::{jet_module_colength, replay_certificate, NakayamaCertificate, DEFAULT_CAP};
use brcalc::report::ReportDocument;
use brcalc::sbasis::{module_syzygies, quotient_dimension, syzygies};
use brcalc::tangent::{
    df_ideal, df_trivial_ideal, is_trivial_field, theta_x, trivial_generators, VectorField,
};
use brcalc::verify::{pair_checks, replay_records};
use brcalc::{
    Coeff, IdealPresentation, LocalOrder, Monomial, PolyVector, Polynomial, SubmodulePresentation,
};
use proptest::prelude::*;

fn xy() -> Vec<String> {
    vec!["x".into(), "y".into()]
}

fn mono_strategy(nvars: usize, max: u32) -> impl Strategy<Value = Monomial> {
    prop::collection::vec(0..=max, nvars).prop_map(|e| Monomial::from_exponents(&e))
}

fn poly_strategy(nvars: usize) -> impl Strategy<Value = Polynomial> {
    prop::collection::vec((-4i64..=4, mono_strategy(nvars, 3)), 0..5).prop_map(move |ts| {
        Polynomial::from_terms(
            nvars,
            ts.into_iter()
                .map(|(c, m)| (Coeff::from_integer(c.into()), m)),
        )
    })
}

/// `x^a + y^b + c x^i y^j`, filtered to isolated singularities.
fn plane_germ() -> impl Strategy<Value = Polynomial> {
    (2u32..=5, 2u32..=5, -3i64..=3, 1u32..=3, 1u32..=3).prop_map(|(a, b, c, i, j)| {
        let x = Polynomial::var(2, 0);
        let y = Polynomial::var(2, 1);
        let mixed = (&x.pow(i) * &y.pow(j)).scale(&Coeff::from_integer(c.into()));
        &(&x.pow(a) + &y.pow(b)) + &mixed
    })
}

/// Vanishing at the origin, linear part possibly degenerate.
fn function_germ() -> impl Strategy<Value = Polynomial> {
    (-3i64..=3, -3i64..=3, poly_strategy(2)).prop_map(|(a, b, rest)| {
        let lin = Polynomial::from_terms(
            2,
            [
                (Coeff::from_integer(a.into()), Monomial::var(2, 0)),
                (Coeff::from_integer(b.into()), Monomial::var(2, 1)),
            ],
        );
        let high = Polynomial::from_terms(
            2,
            rest.terms()
                .filter(|(m, _)| m.degree() >= 2)
                .map(|(m, c)| (c.clone(), m.clone())),
        );
        &lin + &high
    })
}

fn isolated(phi: &Polynomial) -> bool {
    IdealPresentation::new(phi.nvars(), phi.gradient())
        .map(|i| i.colength().is_finite())
        .unwrap_or(false)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ring_axioms(a in poly_strategy(2), b in poly_strategy(2), c in poly_strategy(2)) {
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a * &b, &b * &a);
    }

    #[test]
    fn leibniz_rule(f in poly_strategy(2), g in poly_strategy(2), i in 0usize..2) {
        let lhs = (&f * &g).partial_derivative(i).unwrap();
        let rhs = &(&f * &g.partial_derivative(i).unwrap()) + &(&g * &f.partial_derivative(i).unwrap());
        prop_assert_eq!(lhs, rhs);
        let sum = (&f + &g).partial_derivative(i).unwrap();
        prop_assert_eq!(sum, &f.partial_derivative(i).unwrap() + &g.partial_derivative(i).unwrap());
    }

    #[test]
    fn local_order_is_multiplicative(
        m in mono_strategy(3, 4), a in mono_strategy(3, 4), b in mono_strategy(3, 4),
    ) {
        let ord = LocalOrder;
        prop_assert_eq!(ord.cmp(&a, &b), ord.cmp(&m.mul(&a), &m.mul(&b)));
    }

    #[test]
    fn ecart_is_nonnegative(f in poly_strategy(3)) {
        prop_assume!(!f.is_zero());
        let ord = LocalOrder;
        let (_, lm) = f.leading_term(&ord).unwrap();
        prop_assert_eq!(f.ecart(&ord).unwrap(), f.degree() - lm.degree());
        prop_assert!(f.terms().all(|(m, _)| m.degree() >= lm.degree()));
    }

    #[test]
    fn syzygies_expand_to_zero(gens in prop::collection::vec(poly_strategy(2), 1..4)) {
        prop_assume!(gens.iter().any(|g| !g.is_zero()));
        for s in syzygies(&gens).unwrap() {
            prop_assert!(s.dot(&gens).unwrap().is_zero());
        }
    }

    #[test]
    fn invariant_identities_on_random_pairs(phi in plane_germ(), f in function_germ()) {
        prop_assume!(isolated(&phi));
        prop_assume!(!f.is_zero());
        let g = GermPair::new(xy(), phi, f).unwrap();
        let r = full_report(&g, ReportOptions::default());
        if r.finitely_determined {
            for v in [r.br_direct, r.br_trivial, r.br_formula, r.br_section] {
                prop_assert!(matches!(v, Value::Finite(_)));
            }
        }
        let brs = [r.br_direct, r.br_trivial, r.br_formula, r.br_section];
        let agree = brs.iter().all(|v| *v != Value::Undefined && *v == brs[0])
            && r.theta_quotient != Value::Undefined
            && r.theta_quotient == r.tau_x;
        prop_assert_eq!(r.routes_agree, agree);
        for c in pair_checks(&r, "f", false) {
            prop_assert!(c.passed, "{}: {}", c.name, c.detail);
        }
        for c in replay_records(&r.records, DEFAULT_CAP) {
            prop_assert!(c.passed(), "{} {:?}", c.label, c.oracle);
        }
    }

    #[test]
    fn report_documents_round_trip(phi in plane_germ(), f in function_germ(), seed in 0u64..1000) {
        prop_assume!(isolated(&phi));
        let g = GermPair::new(xy(), phi, f).unwrap();
        let opts = ReportOptions { seed, draws: 4 };
        let d = ReportDocument::new("p", &g, &full_report(&g, opts), opts);
        prop_assert_eq!(ReportDocument::from_json(&d.to_json()).unwrap(), d);
    }

    #[test]
    fn certificates_are_monotone(gens in prop::collection::vec(poly_strategy(2), 0..3), a in 1u32..5, b in 1u32..5) {
        let mut gens = gens;
        gens.push(Polynomial::term(Coeff::from_integer(1.into()), Monomial::from_exponents(&[a, 0])));
        gens.push(Polynomial::term(Coeff::from_integer(1.into()), Monomial::from_exponents(&[0, b])));
        let vs: Vec<PolyVector> = gens.into_iter().map(PolyVector::from_poly).collect();
        let j = jet_module_colength(&vs, 1, DEFAULT_CAP).unwrap();
        prop_assert!(replay_certificate(&vs, 1, j.certificate));
        let next = NakayamaCertificate { degree: j.certificate.degree + 1 };
        prop_assert!(replay_certificate(&vs, 1, next));
    }
}

#[test]
fn module_syzygies_expand_to_zero() {
    let x = Polynomial::var(2, 0);
    let y = Polynomial::var(2, 1);
    let gens = vec![
        PolyVector::new(vec![x.clone(), y.clone()]).unwrap(),
        PolyVector::new(vec![y.pow(2), x.pow(2)]).unwrap(),
        PolyVector::new(vec![&x * &y, Polynomial::zero(2)]).unwrap(),
    ];
    let syz = module_syzygies(&gens).unwrap();
    assert!(!syz.is_empty());
    for s in syz {
        let mut total = PolyVector::zero(2, 2);
        for (c, g) in s.components().iter().zip(&gens) {
            total = total.try_add(&g.scale_poly(c)).unwrap();
        }
        assert!(total.is_zero());
    }
}

#[test]
fn quotient_dimension_additivity_on_corpus() {
    for g in builtin_corpus() {
        let full: Vec<PolyVector> = theta_x(&g.phi)
            .unwrap()
            .iter()
            .map(|f| f.as_vector().clone())
            .collect();
        let triv: Vec<PolyVector> = trivial_generators(&g.phi)
            .iter()
            .map(|f| f.as_vector().clone())
            .collect();
        // Θ_X^T ⊆ Θ_X^T + ⟨ξ_1⟩ ⊆ Θ_X
        let mut mid = triv.clone();
        mid.push(full[0].clone());
        let whole = quotient_dimension(&full, &triv).unwrap();
        let upper = quotient_dimension(&full, &mid).unwrap();
        let lower = quotient_dimension(&mid, &triv).unwrap();
        assert_eq!(
            whole.finite().unwrap(),
            upper.finite().unwrap() + lower.finite().unwrap(),
            "{}",
            g.name()
        );

        // rank 1, where both colengths are finite: df(Θ_X^T) ⊆ df(Θ_X)
        let fields = theta_x(&g.phi).unwrap();
        for f in &g.fs {
            let n_ideal = df_ideal(f, &fields).unwrap();
            let d_ideal = df_trivial_ideal(f, &g.phi).unwrap();
            let (Some(cn), Some(cd)) = (n_ideal.colength().finite(), d_ideal.colength().finite())
            else {
                continue;
            };
            let as_vecs = |i: &IdealPresentation| -> Vec<PolyVector> {
                i.generators()
                    .iter()
                    .cloned()
                    .map(PolyVector::from_poly)
                    .collect()
            };
            let q = quotient_dimension(&as_vecs(&n_ideal), &as_vecs(&d_ideal)).unwrap();
            assert_eq!(q.finite().unwrap() + cn, cd, "{} f = {f:?}", g.name());
        }
    }
}

#[test]
fn tangent_properties_on_corpus() {
    for g in builtin_corpus() {
        let phi = &g.phi;
        let n = g.nvars();
        let phi_ideal = IdealPresentation::new(n, vec![phi.clone()]).unwrap();
        let theta = theta_x(phi).unwrap();
        for xi in &theta {
            assert!(
                phi_ideal.contains(&xi.apply(phi).unwrap()).unwrap(),
                "{}",
                g.name()
            );
        }
        let theta_module =
            SubmodulePresentation::new(n, n, theta.iter().map(|f| f.as_vector().clone()).collect())
                .unwrap();
        let triv = trivial_generators(phi);
        for xi in &triv {
            assert!(
                theta_module.contains(xi.as_vector()).unwrap(),
                "{}",
                g.name()
            );
            assert!(is_trivial_field(xi, phi).unwrap(), "{}", g.name());
        }
        for f in &g.fs {
            let a = df_trivial_ideal(f, phi).unwrap();
            let b = df_ideal(f, &triv).unwrap();
            assert!(
                a.generators().iter().all(|p| b.contains(p).unwrap()),
                "{}",
                g.name()
            );
            assert!(
                b.generators().iter().all(|p| a.contains(p).unwrap()),
                "{}",
                g.name()
            );
        }
        if g.spec.has_tag(TAG_WEIGHTED_HOMOGENEOUS) {
            let q = brcalc::invariants::theta_quotient_dim(phi).unwrap();
            if q.finite().is_some_and(|q| q > 0) {
                let euler = euler_field(&g.phi, &g.spec.phi, g.vars());
                let witness = euler.apply(phi).unwrap();
                assert!(phi_ideal.contains(&witness).unwrap(), "{}", g.name());
                assert!(!is_trivial_field(&euler, phi).unwrap(), "{}", g.name());
            }
        }
    }
}

/// `Σ w_i x_i ∂/∂x_i` with weights making every monomial of `φ` the same
/// weighted degree; corpus entries are quasi-homogeneous in their
/// coordinates.
fn euler_field(phi: &Polynomial, src: &str, vars: &[String]) -> VectorField {
    let n = phi.nvars();
    let mons: Vec<Vec<i64>> = phi
        .terms()
        .map(|(m, _)| m.exponents().iter().map(|&e| e as i64).collect())
        .collect();
    let w = integer_weights(&mons, n)
        .unwrap_or_else(|| panic!("{src} over {vars:?} is not quasi-homogeneous"));
    VectorField::new(
        (0..n)
            .map(|i| Polynomial::var(n, i).scale(&Coeff::from_integer(w[i].into())))
            .collect(),
    )
    .unwrap()
}

/// Small positive integer weights with `<w, a> = <w, b>` for all exponent
/// vectors, found by search.
fn integer_weights(mons: &[Vec<i64>], n: usize) -> Option<Vec<i64>> {
    let mut w = vec![1i64; n];
    loop {
        let d: Vec<i64> = mons
            .iter()
            .map(|m| m.iter().zip(&w).map(|(a, b)| a * b).sum())
            .collect();
        if d.iter().all(|&x| x == d[0]) {
            return Some(w);
        }
        let mut i = 0;
        loop {
            if i == n {
                return None;
            }
            w[i] += 1;
            if w[i] <= 30 {
                break;
            }
            w[i] = 1;
            i += 1;
        }
    }
}
