use kernel_repr::hilbert_schmidt::hs_norm_kernel;
use kernel_repr::kernels::{kernel_to_operator, operator_to_kernel, random_kernel};
use kernel_repr::multiplication::{extract_multiplier, is_local, random_multiplier};
use kernel_repr::operators::{apply, operator_norm, random_operator};
use kernel_repr::order::{modulus, regular_norm};
use kernel_repr::sample;
use kernel_repr::tensor::{pi_norm, random_element, Factor, TensorElement};
use kernel_repr::{Endpoint, Exponent, Kernel, MeasureSpace, SpaceSpec};
use nalgebra::DMatrix;
use proptest::prelude::*;

fn exponent() -> impl Strategy<Value = Exponent> {
    prop_oneof![Just(Exponent::P1), Just(Exponent::P2), Just(Exponent::Pinf)]
}

fn measure_space(max_atoms: usize) -> impl Strategy<Value = MeasureSpace> {
    prop::collection::vec(0.05f64..4.0, 1..=max_atoms).prop_map(|w| MeasureSpace::from_weights(&w).unwrap())
}

fn spec(max_dim: usize) -> impl Strategy<Value = SpaceSpec> {
    (1..=max_dim, exponent()).prop_map(|(d, p)| SpaceSpec::new(d, p, true).unwrap())
}

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(1.0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn kernel_operator_round_trip(s1 in measure_space(4), s2 in measure_space(4), e in spec(3), f in spec(3), seed: u64) {
        let mut rng = sample::rng(seed);
        let k = random_kernel(&mut rng, &s1, &s2, e, f);
        let back = operator_to_kernel(&kernel_to_operator(&k)).unwrap();
        prop_assert!(k.max_rel_diff(&back) <= 1e-15);
    }

    #[test]
    fn application_is_linear(s1 in measure_space(4), s2 in measure_space(4), e in spec(3), f in spec(3),
                             p in exponent(), q in exponent(), alpha in -3.0f64..3.0, seed: u64) {
        let mut rng = sample::rng(seed);
        let t = random_operator(&mut rng, Endpoint::new(s1.clone(), e, p), Endpoint::new(s2, f, q));
        let u = sample::function(&mut rng, &s1, e, p);
        let v = sample::function(&mut rng, &s1, e, p);
        let lhs = apply(&t, &u.axpy(alpha, &v).unwrap()).unwrap();
        let rhs = apply(&t, &u).unwrap().axpy(alpha, &apply(&t, &v).unwrap()).unwrap();
        prop_assert!(lhs.max_abs_diff(&rhs) <= 1e-12);
    }

    #[test]
    fn norm_bounds_every_image(s1 in measure_space(4), s2 in measure_space(4), e in spec(3), f in spec(3),
                               p in exponent(), q in exponent(), seed: u64) {
        let mut rng = sample::rng(seed);
        let t = random_operator(&mut rng, Endpoint::new(s1.clone(), e, p), Endpoint::new(s2, f, q));
        let n = operator_norm(&t);
        prop_assert!(n.lower <= n.value + 1e-12 && n.value <= n.upper + 1e-12);
        for _ in 0..20 {
            let g = sample::unit_function(&mut rng, &s1, e, p);
            prop_assert!(apply(&t, &g).unwrap().norm() <= n.upper * (1.0 + 1e-12) + 1e-15);
        }
    }

    #[test]
    fn operator_norm_triangle_inequality(s1 in measure_space(4), s2 in measure_space(4), e in spec(3), f in spec(3),
                                         seed: u64) {
        let mut rng = sample::rng(seed);
        let (d, c) = (Endpoint::new(s1, e, Exponent::P1), Endpoint::new(s2, f, Exponent::Pinf));
        let a = random_operator(&mut rng, d.clone(), c.clone());
        let b = random_operator(&mut rng, d, c);
        let sum = operator_norm(&a.linear_combination(1.0, &b, 1.0).unwrap());
        prop_assert!(sum.lower <= operator_norm(&a).upper + operator_norm(&b).upper + 1e-12);
    }

    #[test]
    fn pi_norm_is_a_cross_norm(d0 in 1usize..=4, d1 in 1usize..=4, p in exponent(), seed: u64) {
        let mut rng = sample::rng(seed);
        let f0 = Factor::Space(SpaceSpec::new(d0, Exponent::P1, true).unwrap());
        let f1 = Factor::Space(SpaceSpec::new(d1, p, true).unwrap());
        let (u, v) = (sample::vector(&mut rng, d0), sample::vector(&mut rng, d1));
        let z = TensorElement::simple(f0.clone(), u.as_slice(), f1.clone(), v.as_slice()).unwrap();
        let expected = f0.norm(u.as_slice()).unwrap().value * f1.norm(v.as_slice()).unwrap().value;
        prop_assert!(close(pi_norm(&z).unwrap().value, expected, 1e-12));
    }

    #[test]
    fn pi_norm_triangle_inequality(s in measure_space(4), d in 1usize..=4, p in exponent(), seed: u64) {
        let mut rng = sample::rng(seed);
        let f0 = Factor::lp(s, Exponent::P1);
        let f1 = Factor::Space(SpaceSpec::new(d, p, true).unwrap());
        let a = random_element(&mut rng, f0.clone(), f1.clone());
        let b = random_element(&mut rng, f0, f1);
        let sum = pi_norm(&a.add(&b).unwrap()).unwrap().value;
        prop_assert!(sum <= pi_norm(&a).unwrap().value + pi_norm(&b).unwrap().value + 1e-12);
    }

    #[test]
    fn local_operators_are_closed_under_sums_and_products(s in measure_space(5), sp in spec(3), p in exponent(), seed: u64) {
        let mut rng = sample::rng(seed);
        let a = random_multiplier(&mut rng, &s, sp, 0.2).to_operator(p);
        let b = random_multiplier(&mut rng, &s, sp, 0.2).to_operator(p);
        prop_assert!(is_local(&a.linear_combination(2.0, &b, -1.0).unwrap()).unwrap().0);
        let ab = a.compose(&b).unwrap();
        prop_assert!(is_local(&ab).unwrap().0);
        prop_assert!(extract_multiplier(&ab).is_ok());
    }

    #[test]
    fn hs_norm_is_additive_on_disjoint_supports(s1 in measure_space(4), s2 in measure_space(4),
                                                d1 in 1usize..=3, d2 in 1usize..=3, seed: u64) {
        let mut rng = sample::rng(seed);
        let (e, f) = (SpaceSpec::new(d1, Exponent::P2, true).unwrap(), SpaceSpec::new(d2, Exponent::P2, true).unwrap());
        let k = random_kernel(&mut rng, &s1, &s2, e, f);
        let split = |keep: bool| {
            Kernel::from_fn(s1.clone(), s2.clone(), e, f, |a, b| {
                if ((a + b) % 2 == 0) == keep { k.block(a, b).clone() } else { DMatrix::zeros(d2, d1) }
            })
            .unwrap()
        };
        let (h, h1, h2) = (hs_norm_kernel(&k).unwrap(), hs_norm_kernel(&split(true)).unwrap(), hs_norm_kernel(&split(false)).unwrap());
        prop_assert!(close(h * h, h1 * h1 + h2 * h2, 1e-12));
    }

    #[test]
    fn norm_never_exceeds_regular_norm(s1 in measure_space(4), s2 in measure_space(4), e in spec(3), f in spec(3),
                                       p in exponent(), q in exponent(), seed: u64) {
        let mut rng = sample::rng(seed);
        let t = random_operator(&mut rng, Endpoint::new(s1, e, p), Endpoint::new(s2, f, q));
        let (n, m) = (operator_norm(&t), operator_norm(&modulus(&t).unwrap()));
        prop_assert!(n.lower <= m.upper * (1.0 + 1e-12) + 1e-15);
        if let Ok(r) = regular_norm(&t) {
            prop_assert!(r.operator_norm <= r.regular_norm * (1.0 + 1e-12) + 1e-15);
        }
    }
}
