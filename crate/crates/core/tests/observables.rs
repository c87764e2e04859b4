use hamiltonian_hierarchy::observables::*;
use hamiltonian_hierarchy::random::{random_poly, random_sym, Shape};
use hamiltonian_hierarchy::scalar::{int, rat, Rational};
use hamiltonian_hierarchy::Error;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn sym(s: &str, k: usize, d: usize) -> SymObservable {
    sym_canonicalize(&parse_poly(s, k, d).unwrap()).unwrap()
}

fn poly(s: &str, k: usize, d: usize) -> Poly {
    parse_poly(s, k, d).unwrap()
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

#[test]
fn symmetrization_examples() {
    assert_eq!(sym("x1_1*v2_1", 2, 1).poly(), &poly("1/2*x1_1*v2_1 + 1/2*x2_1*v1_1", 2, 1));
    assert_eq!(sym("v1_1^2", 1, 1).poly(), &poly("v1_1^2", 1, 1));
    assert_eq!(sym("x1_1^2", 3, 1).poly(), &poly("1/3*x1_1^2 + 1/3*x2_1^2 + 1/3*x3_1^2", 3, 1));
}

#[test]
fn symmetrization_matches_permutation_average() {
    // Independent route: average the six relabelings of a three-particle polynomial.
    let perms = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
    let mut r = rng(11);
    for _ in 0..10 {
        let p = random_poly(&mut r, 3, 1, &Shape::default());
        let mut acc = Poly::zero(3, 1);
        for perm in perms {
            acc = &acc + &p.embed(&perm, 3).unwrap();
        }
        assert_eq!(sym_canonicalize(&p).unwrap().poly(), &acc.scale(&rat(1, 6)));
    }
}

#[test]
fn standard_bracket_examples() {
    let x = sym("x1_1", 1, 1);
    let v = sym("v1_1", 1, 1);
    assert_eq!(poisson_bracket_standard(&x, &v).unwrap(), SymObservable::constant(1, 1, int(1)));
    let kinetic = sym("1/2*v1_1^2", 1, 1);
    assert_eq!(poisson_bracket_standard(&kinetic, &x).unwrap(), sym("-v1_1", 1, 1));
    let f = sym("x1_1^2*v1_1 + x2_1", 2, 1);
    assert!(poisson_bracket_standard(&f, &f).unwrap().is_zero());
}

#[test]
fn lie_bracket_examples() {
    let f = sym("x1_1 + x2_1", 2, 1);
    let g = sym("v1_1 + v2_1", 2, 1);
    assert_eq!(lie_bracket_gk(&f, &g).unwrap(), SymObservable::constant(2, 1, int(4)));
    let a = sym("x1_1*v1_1^2", 1, 1);
    let b = sym("x1_1^3 + v1_1", 1, 1);
    assert_eq!(lie_bracket_gk(&a, &b).unwrap(), poisson_bracket_standard(&a, &b).unwrap());
}

#[test]
fn bracket_rejects_mismatched_shapes() {
    let a = sym("x1_1", 1, 1);
    let b = sym("x1_1 + x2_1", 2, 1);
    assert!(matches!(lie_bracket_gk(&a, &b), Err(Error::ParticleMismatch(1, 2))));
    let c = sym("x1_2", 1, 2);
    assert!(matches!(poisson_bracket_standard(&a, &c), Err(Error::DimensionMismatch(1, 2))));
}

#[test]
fn extend_to_tuple_examples() {
    let x = sym("x1_1", 1, 1);
    assert_eq!(x.extend_to_tuple(&[2], 3).unwrap(), poly("x2_1", 3, 1));
    let f = sym("x1_1*v2_1", 2, 1);
    assert_eq!(f.extend_to_tuple(&[3, 1], 3).unwrap(), poly("1/2*x3_1*v1_1 + 1/2*x1_1*v3_1", 3, 1));
    assert!(matches!(f.extend_to_tuple(&[1, 1], 3), Err(Error::RepeatedIndex(_))));
    assert!(f.extend_to_tuple(&[1, 4], 3).is_err());
    assert!(f.extend_to_tuple(&[1], 3).is_err());
}

#[test]
fn evaluation_examples() {
    let kinetic = sym("1/2*v1_1^2", 1, 1);
    assert_eq!(kinetic.evaluate(&[vec![int(0), int(2)]]).unwrap(), int(2));
    let antisym = sym("x1_1 - x2_1", 2, 1);
    assert!(antisym.is_zero());
    let square = sym("(x1_1 - x2_1)^2", 2, 1);
    let z = [vec![int(0), int(0)], vec![int(3), int(0)]];
    assert_eq!(square.evaluate(&z).unwrap(), int(9));
    let zf = [vec![0.0, 0.0], vec![3.0, 0.0]];
    assert_eq!(square.evaluate::<f64, _>(&zf).unwrap(), 9.0);
    assert!(matches!(square.evaluate(&z[..1]), Err(Error::Arity { .. })));
}

#[test]
fn partial_derivative_examples() {
    let xv = sym("x1_1*v1_1", 1, 1);
    assert_eq!(xv.partial_derivative(1, 1, Kind::Position).unwrap(), poly("v1_1", 1, 1));
    let x2 = sym("x1_1^2", 1, 1);
    assert!(x2.partial_derivative(1, 1, Kind::Velocity).unwrap().is_zero());
    let s = sym("x1_1^2", 2, 1);
    assert_eq!(s.partial_derivative(1, 1, Kind::Position).unwrap(), poly("x1_1", 2, 1));
    assert!(s.partial_derivative(3, 1, Kind::Position).is_err());
    assert!(s.partial_derivative(1, 2, Kind::Position).is_err());
}

#[test]
fn parser_rejects_unknown_identifiers() {
    assert!(matches!(parse_poly("x1_1 + y", 1, 1), Err(Error::Parse(_))));
    assert!(parse_poly("x3_1", 2, 1).is_err());
    assert!(parse_poly("x1_2", 1, 1).is_err());
    assert_eq!(parse_poly("(x1_1 + 1)^2", 1, 1).unwrap(), poly("x1_1^2 + 2*x1_1 + 1", 1, 1));
}

#[test]
fn degree_cap_is_enforced() {
    let high = poly("x1_1^5*v1_1^4", 1, 1);
    assert!(matches!(sym_canonicalize(&high), Err(Error::DegreeCap { degree: 9, cap: 8 })));
    assert!(sym_canonicalize_with_cap(&high, 9).is_ok());
}

#[test]
fn symmetric_storage_has_no_zero_coefficients() {
    let mut r = rng(5);
    for _ in 0..20 {
        let f = random_sym(&mut r, 2, 2, &Shape::default()).unwrap();
        assert!(f.poly().terms().values().all(|c| c != &Rational::from_integer(0.into())));
        assert!(f.poly().is_symmetric());
    }
}

fn triple(seed: u64, k: usize, d: usize) -> [SymObservable; 3] {
    let mut r = rng(seed);
    let shape = Shape::default();
    [0, 1, 2].map(|_| random_sym(&mut r, k, d, &shape).unwrap())
}

fn dims() -> impl Strategy<Value = (u64, usize, usize)> {
    (any::<u64>(), 1usize..=3, 1usize..=2)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn lie_bracket_is_antisymmetric((seed, k, d) in dims()) {
        let [f, g, _] = triple(seed, k, d);
        prop_assert_eq!(lie_bracket_gk(&f, &g).unwrap(), -&lie_bracket_gk(&g, &f).unwrap());
    }

    #[test]
    fn lie_bracket_is_bilinear((seed, k, d) in dims(), a in -5i64..=5, b in 1i64..=4) {
        let [f, g, h] = triple(seed, k, d);
        let (ca, cb) = (rat(a, b), rat(b, 3));
        let combo = &f.scale(&ca) + &g.scale(&cb);
        let lhs = lie_bracket_gk(&combo, &h).unwrap();
        let rhs = &lie_bracket_gk(&f, &h).unwrap().scale(&ca) + &lie_bracket_gk(&g, &h).unwrap().scale(&cb);
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn lie_bracket_satisfies_jacobi((seed, k, d) in dims()) {
        let [f, g, h] = triple(seed, k, d);
        let b = |p: &SymObservable, q: &SymObservable| lie_bracket_gk(p, q).unwrap();
        let total = &(&b(&f, &b(&g, &h)) + &b(&g, &b(&h, &f))) + &b(&h, &b(&f, &g));
        prop_assert!(total.is_zero());
    }

    #[test]
    fn bracket_output_is_canonical((seed, k, d) in dims()) {
        let [f, g, _] = triple(seed, k, d);
        let out = lie_bracket_gk(&f, &g).unwrap();
        let again = sym_canonicalize_with_cap(out.poly(), 16).unwrap();
        prop_assert_eq!(again, out);
    }

    #[test]
    fn poisson_bracket_obeys_leibniz((seed, k, d) in dims()) {
        let [f, g, h] = triple(seed, k, d);
        let (f, g, h) = (f.poly(), g.poly(), h.poly());
        let lhs = f.poisson_bracket(&(g * h)).unwrap();
        let rhs = &(g * &f.poisson_bracket(h).unwrap()) + &(h * &f.poisson_bracket(g).unwrap());
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn canonical_form_is_permutation_invariant((seed, k, d) in dims(), shift in 0usize..3) {
        let mut r = rng(seed);
        let f = random_sym(&mut r, k, d, &Shape::default()).unwrap();
        let perm: Vec<usize> = (0..k).map(|i| (i + shift) % k).collect();
        prop_assert_eq!(f.poly().embed(&perm, k).unwrap(), f.poly().clone());
    }

    #[test]
    fn symmetrization_is_idempotent((seed, k, d) in dims()) {
        let mut r = rng(seed);
        let p = random_poly(&mut r, k, d, &Shape::default());
        let once = sym_canonicalize(&p).unwrap();
        prop_assert_eq!(sym_canonicalize(once.poly()).unwrap(), once);
    }
}
