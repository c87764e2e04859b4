use hamiltonian_hierarchy::hierarchy::ObservableHierarchy;
use hamiltonian_hierarchy::lie_poisson::*;
use hamiltonian_hierarchy::observables::{parse_poly, sym_canonicalize, Configuration, SymObservable};
use hamiltonian_hierarchy::random::{random_configuration, random_dirac, random_functional, Shape};
use hamiltonian_hierarchy::scalar::{int, rat, Rational};
use hamiltonian_hierarchy::states::{iota_em, iota_factorize, iota_lio, iota_mar, DiracState, StateHierarchy};
use num::traits::{Signed, Zero};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn sym(s: &str, k: usize, d: usize) -> SymObservable {
    sym_canonicalize(&parse_poly(s, k, d).unwrap()).unwrap()
}

fn expectation(s: &str, k: usize, d: usize) -> Functional {
    Functional::expectation_of(sym(s, k, d), None).unwrap()
}

fn rq(n: i64, d: i64) -> Rational {
    rat(n, d)
}

fn config(points: &[[i64; 2]]) -> Configuration<Rational> {
    Configuration::new(1, points.iter().map(|p| vec![int(p[0]), int(p[1])]).collect()).unwrap()
}

fn quadratic() -> hamiltonian_hierarchy::observables::Poly {
    parse_poly("x1_1^2", 1, 1).unwrap()
}

#[test]
fn constant_functional_evaluates_to_its_value() {
    let gamma = StateHierarchy::single(iota_em(&config(&[[1, 2]])).unwrap());
    assert_eq!(Functional::Constant(rq(7, 3)).eval(&gamma).unwrap(), rq(7, 3));
}

#[test]
fn product_of_expectations_is_product_of_values() {
    let z = config(&[[1, 2], [3, -1]]);
    let gamma = StateHierarchy::single(iota_em(&z).unwrap());
    let fx = expectation("x1_1", 1, 1);
    let fv = expectation("v1_1", 1, 1);
    let p = Functional::Product(vec![fx.clone(), fv.clone()]);
    assert_eq!(p.eval(&gamma).unwrap(), fx.eval(&gamma).unwrap() * fv.eval(&gamma).unwrap());
    assert_eq!(p.eval(&gamma).unwrap(), int(2) * rq(1, 2));
}

#[test]
fn derivative_of_expectation_is_its_generator() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let shape = Shape::default();
    let h = ObservableHierarchy::single(sym("x1_1*v1_1 + x1_1^2", 1, 1), None).unwrap();
    for _ in 0..5 {
        let gamma = StateHierarchy::single(random_dirac(&mut rng, 1, 1, 3, &shape).unwrap());
        let d = gateaux_derivative(&Functional::Expectation(h.clone()), &gamma).unwrap();
        assert_eq!(d, h);
    }
    let gamma = StateHierarchy::single(random_dirac(&mut rng, 1, 1, 3, &shape).unwrap());
    assert!(gateaux_derivative(&Functional::Constant(int(4)), &gamma).unwrap().is_zero());
}

#[test]
fn derivative_of_product_follows_leibniz() {
    let z = config(&[[1, 2], [3, -1]]);
    let gamma = StateHierarchy::single(iota_em(&z).unwrap());
    let f = Functional::Product(vec![expectation("x1_1", 1, 1), expectation("v1_1", 1, 1)]);
    let d = gateaux_derivative(&f, &gamma).unwrap();
    // <v, γ> x + <x, γ> v with <x, γ> = 2 and <v, γ> = 1/2.
    let expected = ObservableHierarchy::single(sym("1/2*x1_1 + 2*v1_1", 1, 1), None).unwrap();
    assert_eq!(d, expected);
}

#[test]
fn product_derivative_matches_difference_quotient() {
    let z = config(&[[1, 2], [3, -1]]);
    let base = iota_em(&z).unwrap();
    let nu = iota_em(&config(&[[-2, 1], [0, 3], [5, 5]])).unwrap();
    let f = Functional::Product(vec![expectation("x1_1", 1, 1), expectation("v1_1", 1, 1)]);
    let d = gateaux_derivative(&f, &StateHierarchy::single(base.clone())).unwrap();
    let directional = StateHierarchy::single(nu.clone()).pair_hierarchy(&d).unwrap();
    let mut errors = Vec::new();
    for h in [rq(1, 10), rq(1, 100), rq(1, 1000)] {
        let mut atoms = base.atoms().to_vec();
        for a in nu.atoms() {
            let mut a = a.clone();
            a.weight = &a.weight * &h;
            atoms.push(a);
        }
        let shifted = DiracState::from_atoms(1, 1, atoms).unwrap();
        let quotient = (f.eval(&StateHierarchy::single(shifted)).unwrap()
            - f.eval(&StateHierarchy::single(base.clone())).unwrap())
            / &h;
        errors.push((quotient - &directional).abs());
    }
    // First-order agreement: the error is exactly proportional to h for a quadratic functional.
    assert_eq!(&errors[0] / &errors[1], int(10));
    assert_eq!(&errors[1] / &errors[2], int(10));
}

#[test]
fn canonical_pair_bracket_is_unit_mass() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let gamma = StateHierarchy::single(random_dirac(&mut rng, 1, 1, 4, &Shape::default()).unwrap());
    let f = expectation("x1_1", 1, 1);
    let g = expectation("v1_1", 1, 1);
    assert_eq!(lie_poisson_bracket(&f, &g, &gamma, Algebra::Level(1)).unwrap(), int(1));
    assert_eq!(lie_poisson_bracket(&g, &f, &gamma, Algebra::Level(1)).unwrap(), int(-1));
}

#[test]
fn lie_poisson_jacobi_and_leibniz_on_each_algebra() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let shape = Shape { degree: 2, terms: 2, ..Shape::default() };
    for (algebra, levels, bound) in [
        (Algebra::Level(2), vec![2], None),
        (Algebra::Bounded(3), vec![1, 2], Some(3)),
        (Algebra::Unbounded, vec![1, 2], None),
    ] {
        for _ in 0..3 {
            let f = random_functional(&mut rng, 1, &levels, bound, &shape).unwrap();
            let g = random_functional(&mut rng, 1, &levels, bound, &shape).unwrap();
            let h = random_functional(&mut rng, 1, &levels, bound, &shape).unwrap();
            let gamma = match algebra {
                Algebra::Level(k) => StateHierarchy::single(random_dirac(&mut rng, k, 1, 2, &shape).unwrap()),
                Algebra::Bounded(n) => iota_mar(&random_dirac(&mut rng, n, 1, 2, &shape).unwrap()).unwrap(),
                Algebra::Unbounded => iota_factorize(&random_dirac(&mut rng, 1, 1, 3, &shape).unwrap()).unwrap(),
            };
            let fg = bracket_functional(&f, &g, algebra).unwrap();
            let gh = bracket_functional(&g, &h, algebra).unwrap();
            let hf = bracket_functional(&h, &f, algebra).unwrap();
            let jacobi = lie_poisson_bracket(&f, &gh, &gamma, algebra).unwrap()
                + lie_poisson_bracket(&g, &hf, &gamma, algebra).unwrap()
                + lie_poisson_bracket(&h, &fg, &gamma, algebra).unwrap();
            assert!(jacobi.is_zero(), "{algebra:?}");
            let gh_prod = Functional::Product(vec![g.clone(), h.clone()]);
            let lhs = lie_poisson_bracket(&f, &gh_prod, &gamma, algebra).unwrap();
            let rhs = h.eval(&gamma).unwrap() * lie_poisson_bracket(&f, &g, &gamma, algebra).unwrap()
                + g.eval(&gamma).unwrap() * lie_poisson_bracket(&f, &h, &gamma, algebra).unwrap();
            assert_eq!(lhs, rhs, "{algebra:?}");
        }
    }
}

#[test]
fn bounded_bracket_rejects_levels_above_bound() {
    let z = config(&[[1, 2], [3, -1]]);
    let gamma = iota_mar(&iota_lio(&z)).unwrap();
    let f = expectation("x1_1*x2_1*x3_1", 3, 1);
    let g = expectation("v1_1", 1, 1);
    assert!(lie_poisson_bracket(&f, &g, &gamma, Algebra::Bounded(2)).is_err());
}

#[test]
fn newton_energy_examples() {
    let w = quadratic();
    let z = config(&[[0, 1], [1, -1]]);
    assert_eq!(hamiltonian_new(&z, &w).unwrap(), int(1));
    let single = config(&[[3, 4]]);
    let w2 = parse_poly("x1_1^2 + 5", 1, 1).unwrap();
    assert_eq!(hamiltonian_new(&single, &w2).unwrap(), int(8) + int(5));
    let zero = parse_poly("0", 1, 1).unwrap();
    let z3 = config(&[[0, 1], [2, 2], [1, -3]]);
    assert_eq!(hamiltonian_new(&z3, &zero).unwrap(), rq(1 + 4 + 9, 6));
}

#[test]
fn newton_energy_hand_expansion() {
    // W(x) = x^2 + 2, N = 3, d = 1: (1/N)(1/2 Σ v^2 + (1/N) Σ_{i≠j} W + W(0)).
    let w = parse_poly("x1_1^2 + 2", 1, 1).unwrap();
    let z = config(&[[0, 1], [1, 2], [3, -1]]);
    let kinetic = rq(1 + 4 + 1, 2);
    let pair = int(2 * (1 + 9 + 4) + 6 * 2);
    let expected = (kinetic + pair / int(3) + int(2)) / int(3);
    assert_eq!(hamiltonian_new(&z, &w).unwrap(), expected);
}

#[test]
fn liouville_and_vlasov_energies_agree_with_newton() {
    let w = quadratic();
    let z = config(&[[0, 1], [1, -1]]);
    assert_eq!(hamiltonian_lio(&iota_lio(&z), &w).unwrap(), int(1));
    let em = StateHierarchy::single(iota_em(&z).unwrap());
    assert_eq!(ham_vl(&w).unwrap().eval(&em).unwrap(), int(1));
    let lio = StateHierarchy::single(iota_lio(&z));
    assert_eq!(ham_lio(&w, 2).unwrap().eval(&lio).unwrap(), int(1));
}

#[test]
fn bbgky_weights_tend_to_vlasov_weights() {
    let w = parse_poly("x1_1^2 + 3", 1, 1).unwrap();
    let limit = w_vlh(&w).unwrap();
    let mut previous: Option<Rational> = None;
    for n in [10usize, 100, 1000] {
        let bbgky = w_bbgky(&w, n).unwrap();
        assert_eq!(bbgky.get(1), limit.get(1));
        let gap = bbgky.get(2).unwrap().poly() - limit.get(2).unwrap().poly();
        let max = gap.terms().values().map(Signed::abs).max().unwrap();
        if let Some(p) = previous {
            assert_eq!(p / &max, int(10));
        }
        previous = Some(max);
    }
}

#[test]
fn bbgky_single_particle_folds_constant() {
    let w = parse_poly("x1_1^2 + 3", 1, 1).unwrap();
    let h = w_bbgky(&w, 1).unwrap();
    assert_eq!(h.levels().len(), 1);
    assert_eq!(h.get(1).unwrap(), &sym("1/2*v1_1^2 + 3", 1, 1));
}

#[test]
fn vlasov_energy_binomial_route_matches_factorized_pairing() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let w = parse_poly("x1_1^4 - 2*x1_1^2 + 1/3*x1_2^2*x1_1^2 + 1", 1, 2).unwrap();
    for _ in 0..5 {
        let gamma = random_dirac(&mut rng, 1, 2, 3, &Shape::default()).unwrap();
        let lhs = ham_vl(&w).unwrap().eval(&StateHierarchy::single(gamma.clone())).unwrap();
        let rhs = ham_vlh(&w).unwrap().eval(&iota_factorize(&gamma).unwrap()).unwrap();
        assert_eq!(lhs, rhs);
    }
}

#[test]
fn odd_or_velocity_dependent_potentials_are_rejected() {
    assert!(check_pair_potential(&parse_poly("x1_1^3", 1, 1).unwrap()).is_err());
    assert!(check_pair_potential(&parse_poly("v1_1^2", 1, 1).unwrap()).is_err());
    assert!(check_pair_potential(&parse_poly("x1_1^2", 2, 1).unwrap()).is_err());
}

#[test]
fn vector_field_contract_on_all_algebras() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    let shape = Shape { degree: 3, terms: 2, ..Shape::default() };
    for (algebra, levels, bound) in [
        (Algebra::Level(2), vec![2], None),
        (Algebra::Bounded(3), vec![1, 2], Some(3)),
        (Algebra::Unbounded, vec![1, 2], None),
    ] {
        for _ in 0..4 {
            let f = random_functional(&mut rng, 1, &levels, bound, &shape).unwrap();
            let g = random_functional(&mut rng, 1, &levels, bound, &shape).unwrap();
            let gamma = match algebra {
                Algebra::Level(k) => StateHierarchy::single(random_dirac(&mut rng, k, 1, 2, &shape).unwrap()),
                Algebra::Bounded(n) => {
                    let states = (1..=n).map(|k| random_dirac(&mut rng, k, 1, 2, &shape).unwrap()).collect::<Vec<_>>();
                    StateHierarchy::from_levels(states).unwrap()
                }
                Algebra::Unbounded => {
                    let states = (1..=3).map(|k| random_dirac(&mut rng, k, 1, 2, &shape).unwrap()).collect::<Vec<_>>();
                    StateHierarchy::from_levels(states).unwrap()
                }
            };
            let (paired, bracket) = vf_contract(&f, &g, &gamma, algebra).unwrap();
            assert_eq!(paired, bracket, "{algebra:?}");
        }
    }
}

#[test]
fn bbgky_field_matches_case_formulas() {
    let w = parse_poly("x1_1^2 - 1/2*x1_1^4 + 2", 1, 1).unwrap();
    let z = config(&[[0, 1], [1, -1], [2, 3], [-1, 1]]);
    for n in 1..=4 {
        let gamma = iota_mar(&iota_lio(&Configuration::new(1, z.points()[..n].to_vec()).unwrap())).unwrap();
        let generated = bbgky_field(&w, n, &gamma).unwrap();
        let cases = bbgky_case_fields(&w, n).unwrap();
        for l in 1..=n {
            assert!(generated.equivalent(&cases, l), "N = {n}, level {l}");
        }
    }
}

#[test]
fn case_formulas_detect_a_wrong_coupling() {
    let w = quadratic();
    let n = 3;
    let gamma = iota_mar(&iota_lio(&config(&[[0, 1], [1, -1], [2, 3]]))).unwrap();
    let generated = bbgky_field(&w, n, &gamma).unwrap();
    let wrong = vlh_case_fields(&w, n).unwrap();
    assert!(!generated.equivalent(&wrong, 1));
}

#[test]
fn vlasov_hierarchy_field_matches_direct_weak_form() {
    let w = parse_poly("x1_1^2 + x1_1^4", 1, 1).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let shape = Shape::default();
    let states = (1..=3).map(|k| random_dirac(&mut rng, k, 1, 2, &shape).unwrap()).collect::<Vec<_>>();
    let gamma = StateHierarchy::from_levels(states).unwrap();
    let generated = vlh_field(&w, &gamma, 2).unwrap();
    let cases = vlh_case_fields(&w, 2).unwrap();
    for l in 1..=2 {
        assert!(generated.equivalent(&cases, l));
        let phi = sym(if l == 1 { "x1_1^2*v1_1 + v1_1^3" } else { "x1_1*v2_1 + v1_1^2*v2_1" }, l, 1);
        // Σ_a <v_a ∂_{x_a} φ, γ^l> - 2 <W'(x_a - x_{l+1}) ∂_{v_a} φ, γ^{l+1}>.
        let mut direct = Rational::zero();
        for a in 0..l {
            let transport = &phi.poly().partial(a, hamiltonian_hierarchy::observables::Kind::Position, 0).unwrap()
                * &parse_poly(&format!("v{}_1", a + 1), l, 1).unwrap();
            direct += gamma.pair_raw(&transport).unwrap();
            let force = pair_potential(&w, l + 1, a, l)
                .unwrap()
                .partial(a, hamiltonian_hierarchy::observables::Kind::Position, 0)
                .unwrap();
            let dv = phi.poly().partial(a, hamiltonian_hierarchy::observables::Kind::Velocity, 0).unwrap();
            direct -= int(2) * gamma.pair_raw(&(&force * &dv.pad_to(l + 1).unwrap())).unwrap();
        }
        assert_eq!(generated.pair(&phi, &gamma).unwrap(), direct);
    }
}

#[test]
fn morphism_examples_are_exact() {
    let z = config(&[[0, 1], [1, -1], [4, 2]]);
    let f = expectation("x1_1", 1, 1);
    let g = expectation("v1_1", 1, 1);
    let sides = morphism_sides(StructureMap::Em, &f, &g, &MorphismInput::Configuration(z)).unwrap();
    assert_eq!(sides.domain, int(1));
    assert_eq!(sides.codomain, int(1));

    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let shape = Shape { degree: 2, terms: 2, ..Shape::default() };
    for map in StructureMap::ALL {
        for _ in 0..3 {
            let (f, g, input) = match map {
                StructureMap::Em => (
                    random_functional(&mut rng, 1, &[1], None, &shape).unwrap(),
                    random_functional(&mut rng, 1, &[1], None, &shape).unwrap(),
                    MorphismInput::Configuration(random_configuration(&mut rng, 3, 1, &shape).unwrap()),
                ),
                StructureMap::Lio => (
                    random_functional(&mut rng, 1, &[2], None, &shape).unwrap(),
                    random_functional(&mut rng, 1, &[2], None, &shape).unwrap(),
                    MorphismInput::Configuration(random_configuration(&mut rng, 2, 1, &shape).unwrap()),
                ),
                StructureMap::Mar => (
                    random_functional(&mut rng, 1, &[1, 2], Some(3), &shape).unwrap(),
                    random_functional(&mut rng, 1, &[1, 2], Some(3), &shape).unwrap(),
                    MorphismInput::State(random_dirac(&mut rng, 3, 1, 2, &shape).unwrap()),
                ),
                StructureMap::Factorize => (
                    random_functional(&mut rng, 1, &[1, 2], None, &shape).unwrap(),
                    random_functional(&mut rng, 1, &[1, 2], None, &shape).unwrap(),
                    MorphismInput::State(random_dirac(&mut rng, 1, 1, 3, &shape).unwrap()),
                ),
            };
            let residual = morphism_check(map, &f, &g, &input).unwrap();
            assert!(residual.is_zero(), "{}", map.name());
        }
    }
}

#[test]
fn morphism_rejects_mismatched_input() {
    let f = expectation("x1_1", 1, 1);
    let z = MorphismInput::Configuration(config(&[[0, 1]]));
    assert!(morphism_check(StructureMap::Mar, &f, &f, &z).is_err());
}

#[test]
fn functional_json_round_trip() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let f = random_functional(&mut rng, 2, &[1, 2], Some(4), &Shape::default()).unwrap();
    assert_eq!(Functional::from_json(&f.to_json()).unwrap(), f);
    assert!(Functional::from_json(r#"{"mystery": 1}"#).is_err());
}

fn random_gamma(rng: &mut ChaCha8Rng, algebra: Algebra, shape: &Shape) -> StateHierarchy<Rational> {
    match algebra {
        Algebra::Level(k) => StateHierarchy::single(random_dirac(rng, k, 1, 2, shape).unwrap()),
        Algebra::Bounded(n) => iota_mar(&random_dirac(rng, n, 1, 2, shape).unwrap()).unwrap(),
        Algebra::Unbounded => iota_factorize(&random_dirac(rng, 1, 1, 3, shape).unwrap()).unwrap(),
    }
}

fn algebra_case(which: usize) -> (Algebra, Vec<usize>, Option<usize>) {
    match which {
        0 => (Algebra::Level(1), vec![1], None),
        1 => (Algebra::Level(2), vec![2], None),
        2 => (Algebra::Bounded(2), vec![1, 2], Some(2)),
        3 => (Algebra::Bounded(3), vec![1, 2], Some(3)),
        _ => (Algebra::Unbounded, vec![1, 2], None),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn lie_poisson_bracket_is_antisymmetric_and_leibniz(seed in any::<u64>(), which in 0usize..5) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let shape = Shape { degree: 3, terms: 2, ..Shape::default() };
        let (algebra, levels, bound) = algebra_case(which);
        let [f, g, h] = [0, 1, 2].map(|_| random_functional(&mut rng, 1, &levels, bound, &shape).unwrap());
        let gamma = random_gamma(&mut rng, algebra, &shape);
        let fg = lie_poisson_bracket(&f, &g, &gamma, algebra).unwrap();
        let gf = lie_poisson_bracket(&g, &f, &gamma, algebra).unwrap();
        prop_assert!((fg.clone() + gf).is_zero());
        let gh = Functional::Product(vec![g.clone(), h.clone()]);
        let lhs = lie_poisson_bracket(&f, &gh, &gamma, algebra).unwrap();
        let rhs = h.eval(&gamma).unwrap() * fg + g.eval(&gamma).unwrap() * lie_poisson_bracket(&f, &h, &gamma, algebra).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn vector_field_contract_reproduces_bracket(seed in any::<u64>(), which in 2usize..5) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let shape = Shape { degree: 3, terms: 2, ..Shape::default() };
        let (algebra, levels, bound) = algebra_case(which);
        let f = random_functional(&mut rng, 1, &levels, bound, &shape).unwrap();
        let g = random_functional(&mut rng, 1, &levels, bound, &shape).unwrap();
        let gamma = random_gamma(&mut rng, algebra, &shape);
        let (paired, bracket) = vf_contract(&f, &g, &gamma, algebra).unwrap();
        prop_assert_eq!(paired, bracket);
    }

    #[test]
    fn structure_maps_have_zero_residual(seed in any::<u64>(), which in 0usize..4, n in 1usize..=3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let shape = Shape { degree: 3, terms: 2, ..Shape::default() };
        let map = StructureMap::ALL[which];
        let (levels, input) = match map {
            StructureMap::Em => (vec![1], MorphismInput::Configuration(random_configuration(&mut rng, n, 1, &shape).unwrap())),
            StructureMap::Lio => (vec![n], MorphismInput::Configuration(random_configuration(&mut rng, n, 1, &shape).unwrap())),
            StructureMap::Mar => ((1..=n.min(2)).collect(), MorphismInput::State(random_dirac(&mut rng, n, 1, 2, &shape).unwrap())),
            StructureMap::Factorize => (vec![1, 2], MorphismInput::State(random_dirac(&mut rng, 1, 1, 2, &shape).unwrap())),
        };
        let bound = (map == StructureMap::Mar).then_some(n);
        let f = random_functional(&mut rng, 1, &levels, bound, &shape).unwrap();
        let g = random_functional(&mut rng, 1, &levels, bound, &shape).unwrap();
        prop_assert!(morphism_check(map, &f, &g, &input).unwrap().is_zero());
    }
}
