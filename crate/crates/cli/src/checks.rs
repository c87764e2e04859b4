//! Exact identity suites behind `algebra-check` and `morphism-check`.

use hamiltonian_hierarchy::hierarchy::{
    bracket_coefficient, bracket_ginf, bracket_gn_definitional, bracket_gn_with, embedding_rank, epsilon_compose_check,
    epsilon_embed, filtration_h_with, CoefficientRule, ObservableHierarchy,
};
use hamiltonian_hierarchy::lie_poisson::{
    ham_bbgky, ham_lio, ham_vl, ham_vlh, hamiltonian_lio, hamiltonian_new, morphism_sides, Functional, MorphismInput,
    StructureMap,
};
use hamiltonian_hierarchy::observables::{lie_bracket_gk, Monomial, Poly, SymObservable, DEFAULT_DEGREE_CAP};
use hamiltonian_hierarchy::random::{
    random_configuration, random_dirac, random_functional, random_hierarchy_upto, random_rational, random_sym, Shape,
};
use hamiltonian_hierarchy::scalar::{rat, Rational};
use hamiltonian_hierarchy::states::{iota_em, iota_factorize, iota_lio, iota_mar, Atom, DiracState, StateHierarchy};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Map, Value};

use crate::config::RunConfig;
use crate::CliError;

/// Largest generator degree whose doubly nested brackets stay within the canonical cap.
pub const MAX_CHECK_DEGREE: usize = (DEFAULT_DEGREE_CAP as usize + 4) / 3;

/// Result of a suite run: counts per suite, and the first counterexample if any.
pub struct SuiteReport {
    pub counts: Map<String, Value>,
    pub counterexample: Option<Value>,
}

impl SuiteReport {
    fn new() -> Self {
        SuiteReport { counts: Map::new(), counterexample: None }
    }

    fn count(&mut self, suite: &str, n: usize) {
        self.counts.insert(suite.to_string(), json!(n));
    }
}

fn compute(e: hamiltonian_hierarchy::Error) -> CliError {
    CliError::Compute(e.to_string())
}

fn sym_json(f: &SymObservable) -> Value {
    json!({ "k": f.k(), "d": f.d(), "poly": f.to_string() })
}

/// The true contraction weights, or weights with the single-contraction term off by 1/7.
fn coefficient_rule(inject_fault: bool) -> Box<CoefficientRule> {
    if inject_fault {
        Box::new(|l, j, n, r| Ok(bracket_coefficient(l, j, n, r)? + if r == 1 { rat(1, 7) } else { rat(0, 1) }))
    } else {
        Box::new(bracket_coefficient)
    }
}

pub struct AlgebraSettings {
    pub triples: usize,
    pub d_max: usize,
    pub max_n: usize,
    pub max_level: usize,
    pub pairs: usize,
    pub shape: Shape,
    pub inject_fault: bool,
}

pub const ALGEBRA_KEYS: &[&str] =
    &["seed", "triples", "d_max", "degree", "terms", "max_n", "max_level", "pairs", "inject_fault"];

impl AlgebraSettings {
    pub fn from_config(cfg: &RunConfig) -> Result<Self, CliError> {
        cfg.check_keys(ALGEBRA_KEYS)?;
        let degree = cfg.get_range("degree", 3, 1, MAX_CHECK_DEGREE)?;
        Ok(AlgebraSettings {
            triples: cfg.get_range("triples", 100, 1, 100_000)?,
            d_max: cfg.get_range("d_max", 2, 1, 2)?,
            max_n: cfg.get_range("max_n", 4, 1, 5)?,
            max_level: cfg.get_range("max_level", 2, 1, 3)?,
            pairs: cfg.get_range("pairs", 20, 1, 100_000)?,
            shape: Shape { degree: degree as u32, terms: cfg.get_range("terms", 3, 1, 8)?, ..Shape::default() },
            inject_fault: cfg.get("inject_fault", false)?,
        })
    }
}

type HierBracket<'a> = dyn Fn(&ObservableHierarchy, &ObservableHierarchy) -> Result<ObservableHierarchy, CliError> + 'a;

/// Antisymmetry, bilinearity and Jacobi of one triple; the name of the first failure.
fn axioms(
    f: &ObservableHierarchy,
    g: &ObservableHierarchy,
    h: &ObservableHierarchy,
    b: &HierBracket<'_>,
) -> Result<Option<&'static str>, CliError> {
    if !b(f, g)?.add(&b(g, f)?).map_err(compute)?.is_zero() {
        return Ok(Some("antisymmetry"));
    }
    let (a, c) = (rat(3, 2), rat(-2, 5));
    let lhs = b(&f.scale(&a).add(&g.scale(&c)).map_err(compute)?, h)?;
    let rhs = b(f, h)?.scale(&a).add(&b(g, h)?.scale(&c)).map_err(compute)?;
    if !lhs.sub(&rhs).map_err(compute)?.is_zero() {
        return Ok(Some("bilinearity"));
    }
    let jacobi = b(f, &b(g, h)?)?.add(&b(g, &b(h, f)?)?).map_err(compute)?.add(&b(h, &b(f, g)?)?).map_err(compute)?;
    Ok(if jacobi.is_zero() { None } else { Some("jacobi") })
}

fn triple_json(algebra: String, property: &str, t: [&ObservableHierarchy; 3]) -> Value {
    json!({
        "suite": algebra,
        "property": property,
        "f": t[0].to_json_value(),
        "g": t[1].to_json_value(),
        "h": t[2].to_json_value(),
    })
}

pub fn algebra_check(s: &AlgebraSettings, seed: u64) -> Result<SuiteReport, CliError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let rule = coefficient_rule(s.inject_fault);
    let mut report = SuiteReport::new();
    let dims = |i: usize| 1 + i % s.d_max;

    for i in 0..s.triples {
        let (k, d) = (1 + i % 3, dims(i / 3));
        let t = [0, 1, 2].map(|_| random_sym(&mut rng, k, d, &s.shape));
        let [f, g, h] =
            t.map(|x| x.map_err(compute).and_then(|x| ObservableHierarchy::single(x, None).map_err(compute)));
        let (f, g, h) = (f?, g?, h?);
        let bracket = |a: &ObservableHierarchy, b: &ObservableHierarchy| -> Result<ObservableHierarchy, CliError> {
            let (a, b) = (a.level_or_zero(k), b.level_or_zero(k));
            ObservableHierarchy::single(lie_bracket_gk(&a, &b).map_err(compute)?, None).map_err(compute)
        };
        if let Some(p) = axioms(&f, &g, &h, &bracket)? {
            report.counterexample = Some(triple_json(format!("g_{k}"), p, [&f, &g, &h]));
            return Ok(report);
        }
    }
    report.count("level_triples", s.triples);

    for i in 0..s.triples {
        let (n, d) = (1 + i % s.max_n, dims(i / s.max_n));
        let top = n.min(s.max_level);
        let t = [0, 1, 2].map(|_| random_hierarchy_upto(&mut rng, d, top, Some(n), &s.shape));
        let [f, g, h] = t.map(|x| x.map_err(compute));
        let (f, g, h) = (f?, g?, h?);
        let bracket =
            |a: &ObservableHierarchy, b: &ObservableHierarchy| bracket_gn_with(a, b, n, &*rule).map_err(compute);
        if let Some(p) = axioms(&f, &g, &h, &bracket)? {
            report.counterexample = Some(triple_json(format!("G_{n}"), p, [&f, &g, &h]));
            return Ok(report);
        }
    }
    report.count("bounded_triples", s.triples);

    for i in 0..s.triples {
        let d = dims(i);
        let t = [0, 1, 2].map(|_| random_hierarchy_upto(&mut rng, d, s.max_level, None, &s.shape));
        let [f, g, h] = t.map(|x| x.map_err(compute));
        let (f, g, h) = (f?, g?, h?);
        let bracket = |a: &ObservableHierarchy, b: &ObservableHierarchy| bracket_ginf(a, b).map_err(compute);
        if let Some(p) = axioms(&f, &g, &h, &bracket)? {
            report.counterexample = Some(triple_json("G_inf".into(), p, [&f, &g, &h]));
            return Ok(report);
        }
    }
    report.count("unbounded_triples", s.triples);

    let mut filtrations = 0;
    for n in 1..=s.max_n {
        for l in 1..=n.min(3) {
            for j in 1..=n.min(3) {
                let f = random_sym(&mut rng, l, 1, &s.shape).map_err(compute)?;
                let g = random_sym(&mut rng, j, 1, &s.shape).map_err(compute)?;
                let lhs = epsilon_embed(&filtration_h_with(&f, &g, n, &*rule).map_err(compute)?, n).map_err(compute)?;
                let rhs =
                    lie_bracket_gk(&epsilon_embed(&f, n).map_err(compute)?, &epsilon_embed(&g, n).map_err(compute)?)
                        .map_err(compute)?;
                if lhs != rhs {
                    report.counterexample = Some(json!({
                        "suite": "filtration", "n": n, "f": sym_json(&f), "g": sym_json(&g),
                        "expected": sym_json(&rhs), "got": sym_json(&lhs),
                    }));
                    return Ok(report);
                }
                filtrations += 1;
            }
        }
    }
    report.count("filtration", filtrations);

    let mut compositions = 0;
    for n in 1..=s.max_n {
        for b in 1..=n {
            for a in 1..=b {
                let f = random_sym(&mut rng, a, dims(compositions), &s.shape).map_err(compute)?;
                if !epsilon_compose_check(a, b, n, &f).map_err(compute)? {
                    report.counterexample =
                        Some(json!({ "suite": "composition", "a": a, "b": b, "n": n, "f": sym_json(&f) }));
                    return Ok(report);
                }
                compositions += 1;
            }
        }
    }
    report.count("composition", compositions);

    let mut ranks = 0;
    for n in 1..=s.max_n {
        for k in 1..=n.min(3) {
            let degree = if n >= 4 { 2 } else { 3 };
            let (rank, dim) = embedding_rank(k, n, 1, degree).map_err(compute)?;
            if rank != dim {
                report.counterexample =
                    Some(json!({ "suite": "injectivity", "k": k, "n": n, "degree": degree, "rank": rank, "dim": dim }));
                return Ok(report);
            }
            ranks += 1;
        }
    }
    report.count("injectivity", ranks);

    for i in 0..s.pairs {
        let n = 1 + i % s.max_n;
        let top = n.min(s.max_level);
        let f = random_hierarchy_upto(&mut rng, 1, top, Some(n), &s.shape).map_err(compute)?;
        let g = random_hierarchy_upto(&mut rng, 1, top, Some(n), &s.shape).map_err(compute)?;
        let explicit = bracket_gn_with(&f, &g, n, &*rule).map_err(compute)?;
        let definitional = bracket_gn_definitional(&f, &g, n).map_err(compute)?;
        if explicit != definitional {
            report.counterexample = Some(json!({
                "suite": "explicit_vs_definitional", "n": n, "f": f.to_json_value(), "g": g.to_json_value(),
                "explicit": explicit.to_json_value(), "definitional": definitional.to_json_value(),
            }));
            return Ok(report);
        }
    }
    report.count("explicit_vs_definitional", s.pairs);
    Ok(report)
}

pub struct MorphismSettings {
    pub triples: usize,
    pub maps: Vec<StructureMap>,
    pub pullbacks: usize,
    pub shape: Shape,
    pub inject_fault: bool,
}

pub const MORPHISM_KEYS: &[&str] = &["seed", "triples", "maps", "pullbacks", "degree", "terms", "inject_fault"];

impl MorphismSettings {
    pub fn from_config(cfg: &RunConfig) -> Result<Self, CliError> {
        cfg.check_keys(MORPHISM_KEYS)?;
        let names = cfg.get_list::<String>("maps", &StructureMap::ALL.map(|m| m.name().to_string()))?;
        let maps = names
            .iter()
            .map(|n| StructureMap::parse(n).ok_or_else(|| CliError::Config(format!("`maps`: unknown map `{n}`"))))
            .collect::<Result<Vec<_>, _>>()?;
        let degree = cfg.get_range("degree", 3, 1, 3)?;
        Ok(MorphismSettings {
            triples: cfg.get_range("triples", 50, 1, 100_000)?,
            maps,
            pullbacks: cfg.get_range("pullbacks", 50, 0, 100_000)?,
            shape: Shape { degree: degree as u32, terms: cfg.get_range("terms", 3, 1, 8)?, ..Shape::default() },
            inject_fault: cfg.get("inject_fault", false)?,
        })
    }
}

fn morphism_triple(
    rng: &mut ChaCha8Rng,
    map: StructureMap,
    i: usize,
    s: &Shape,
) -> hamiltonian_hierarchy::Result<(Functional, Functional, MorphismInput)> {
    Ok(match map {
        StructureMap::Em => {
            let d = 1 + i % 2;
            (
                random_functional(rng, d, &[1], None, s)?,
                random_functional(rng, d, &[1], None, s)?,
                MorphismInput::Configuration(random_configuration(rng, 1 + i % 4, d, s)?),
            )
        }
        StructureMap::Lio => {
            let n = 1 + i % 2;
            (
                random_functional(rng, 1, &[n], None, s)?,
                random_functional(rng, 1, &[n], None, s)?,
                MorphismInput::Configuration(random_configuration(rng, n, 1, s)?),
            )
        }
        StructureMap::Mar => {
            let n = 2 + i % 2;
            (
                random_functional(rng, 1, &[1, 2], Some(n), s)?,
                random_functional(rng, 1, &[1, 2], Some(n), s)?,
                MorphismInput::State(random_dirac(rng, n, 1, 2, s)?),
            )
        }
        StructureMap::Factorize => (
            random_functional(rng, 1, &[1, 2], None, s)?,
            random_functional(rng, 1, &[1, 2], None, s)?,
            MorphismInput::State(random_dirac(rng, 1, 1, 3, s)?),
        ),
    })
}

/// The same input with its first coordinate moved by one: the image of a faulty map.
fn shifted(input: &MorphismInput) -> hamiltonian_hierarchy::Result<MorphismInput> {
    Ok(match input {
        MorphismInput::Configuration(z) => {
            let mut z = z.clone();
            z.points_mut()[0][0] += rat(1, 1);
            MorphismInput::Configuration(z)
        }
        MorphismInput::State(gamma) => {
            let mut atoms: Vec<Atom<Rational>> = gamma.atoms().to_vec();
            atoms[0].points[0][0] += rat(1, 1);
            MorphismInput::State(DiracState::from_atoms(gamma.k(), gamma.d(), atoms)?)
        }
    })
}

fn input_json(input: &MorphismInput) -> Value {
    match input {
        MorphismInput::Configuration(z) => {
            let pts: Vec<Vec<String>> = z.points().iter().map(|p| p.iter().map(|c| c.to_string()).collect()).collect();
            json!({ "configuration": pts })
        }
        MorphismInput::State(gamma) => {
            serde_json::from_str(&gamma.to_json()).map(|v: Value| json!({ "dirac": v })).unwrap_or(Value::Null)
        }
    }
}

/// An even, velocity-free pair potential of degree at most four.
fn random_potential(rng: &mut ChaCha8Rng, d: usize, shape: &Shape) -> Poly {
    let mut w = Poly::zero(1, d);
    w.add_term(Monomial::one(2 * d), random_rational(rng, shape));
    for _ in 0..3 {
        let mut exps = vec![0u8; 2 * d];
        for _ in 0..2 * rng.gen_range(1..=2) {
            exps[rng.gen_range(0..d)] += 1;
        }
        w.add_term(Monomial::from_exponents(&exps), random_rational(rng, shape));
    }
    w
}

fn pullback_pair(
    rng: &mut ChaCha8Rng,
    identity: usize,
    i: usize,
    shape: &Shape,
) -> hamiltonian_hierarchy::Result<(Poly, Rational, Rational)> {
    let d = 1 + i % 2;
    let w = random_potential(rng, d, shape);
    let (lhs, rhs) = match identity {
        0 => {
            let gamma = random_dirac(rng, 1, d, 3, shape)?;
            (ham_vlh(&w)?.eval(&iota_factorize(&gamma)?)?, ham_vl(&w)?.eval(&StateHierarchy::single(gamma))?)
        }
        1 => {
            let z = random_configuration(rng, 1 + i % 4, d, shape)?;
            (ham_vl(&w)?.eval(&StateHierarchy::single(iota_em(&z)?))?, hamiltonian_new(&z, &w)?)
        }
        2 => {
            let gamma = random_dirac(rng, 1 + i % 4, d, 2, shape)?;
            let n = gamma.k();
            (ham_bbgky(&w, n)?.eval(&iota_mar(&gamma)?)?, ham_lio(&w, n)?.eval(&StateHierarchy::single(gamma))?)
        }
        _ => {
            let z = random_configuration(rng, 1 + i % 4, d, shape)?;
            (hamiltonian_lio(&iota_lio(&z), &w)?, hamiltonian_new(&z, &w)?)
        }
    };
    Ok((w, lhs, rhs))
}

const PULLBACK_NAMES: [&str; 4] = ["vlh_to_vl", "vl_to_newton", "bbgky_to_liouville", "liouville_to_newton"];

pub fn morphism_check(s: &MorphismSettings, seed: u64) -> Result<SuiteReport, CliError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = SuiteReport::new();
    for &map in &s.maps {
        for i in 0..s.triples {
            let (f, g, input) = morphism_triple(&mut rng, map, i, &s.shape).map_err(compute)?;
            let mut sides = morphism_sides(map, &f, &g, &input).map_err(compute)?;
            if s.inject_fault {
                sides.codomain =
                    morphism_sides(map, &f, &g, &shifted(&input).map_err(compute)?).map_err(compute)?.codomain;
            }
            let residual = sides.residual();
            if residual != rat(0, 1) {
                report.counterexample = Some(json!({
                    "suite": map.name(),
                    "f": f.to_json_value(),
                    "g": g.to_json_value(),
                    "input": input_json(&input),
                    "domain": sides.domain.to_string(),
                    "codomain": sides.codomain.to_string(),
                    "residual": residual.to_string(),
                }));
                return Ok(report);
            }
        }
        report.count(map.name(), s.triples);
    }
    for (identity, name) in PULLBACK_NAMES.iter().enumerate() {
        for i in 0..s.pullbacks {
            let (w, lhs, rhs) = pullback_pair(&mut rng, identity, i, &s.shape).map_err(compute)?;
            if lhs != rhs {
                report.counterexample = Some(json!({
                    "suite": name, "potential": w.to_string(), "pulled_back": lhs.to_string(), "direct": rhs.to_string(),
                }));
                return Ok(report);
            }
        }
        report.count(name, s.pullbacks);
    }
    Ok(report)
}
