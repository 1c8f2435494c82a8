//! End-to-end acceptance suite. Each test covers one numbered criterion and
//! prints a single pass/fail line (visible with `--nocapture`); the assert
//! carries the same verdict for CI.

use std::collections::BTreeSet;

use nashmult::arc::{monomial_arc, Arc, PersistenceOutcome};
use nashmult::field::{Coeff, Field, Rational};
use nashmult::hickel::{persistence_oracle, OracleConfig, OracleOutcome};
use nashmult::morphism::{
    arcwise_order_equality, persistence_compare, transversality_check, zariski_fiber_check,
    FiniteMorphismSpec, TriangularPresentation, Verdict,
};
use nashmult::order::{ArcOrder, OrderValue};
use nashmult::poly::{Polynomial, Ring};
use nashmult::rees::{EnumBudget, ReesAlgebra};

fn report(criterion: u32, desc: &str, pass: bool) {
    println!(
        "criterion {criterion}: {} - {desc}",
        if pass { "PASS" } else { "FAIL" }
    );
    assert!(pass, "criterion {criterion} failed: {desc}");
}

fn ring(characteristic: u32, vars: &[&str]) -> Ring {
    Ring::new(
        vars.iter().map(|s| s.to_string()).collect(),
        Field::new(characteristic).unwrap(),
    )
    .unwrap()
}

fn hypersurface(r: &Ring, poly: &str, weight: u32) -> ReesAlgebra {
    ReesAlgebra::new(r.clone(), vec![(Polynomial::parse(r, poly).unwrap(), weight)])
        .unwrap()
        .diff_saturate()
}

fn origin(r: &Ring) -> Vec<Coeff> {
    vec![r.field().zero(); r.dim()]
}

struct Case {
    name: &'static str,
    algebra: ReesAlgebra,
    arcs: Vec<Arc>,
}

fn cusp_tower(characteristic: u32) -> TriangularPresentation {
    TriangularPresentation::new(
        Field::new(characteristic).unwrap(),
        vec!["s".into()],
        vec![("x".into(), "x^2 - s^3".into())],
        vec![],
    )
    .unwrap()
}

fn quadratic_tower(characteristic: u32) -> TriangularPresentation {
    TriangularPresentation::new(
        Field::new(characteristic).unwrap(),
        vec!["s".into()],
        vec![
            ("x".into(), "x^2 - s^3".into()),
            ("z".into(), "z^2 - s x".into()),
        ],
        vec![],
    )
    .unwrap()
}

/// The curated flagship suite: 11 cases, each with a base arc and its
/// reparametrizations (n = 2, 3; plus n = 8 on the first cusp).
fn flagship_suite() -> Vec<Case> {
    let mut cases = Vec::new();
    let mut push = |name: &'static str, algebra: ReesAlgebra, base: Arc, extra_n: &[u32]| {
        let mut arcs = vec![base.clone(), base.reparametrize(2).unwrap(), base.reparametrize(3).unwrap()];
        for &n in extra_n {
            arcs.push(base.reparametrize(n).unwrap());
        }
        cases.push(Case { name, algebra, arcs });
    };

    for (name, ch) in [("cusp char 0", 0u32), ("cusp char 2", 2), ("cusp char 3", 3)] {
        let r = ring(ch, &["x", "y"]);
        let base = monomial_arc(&r, &[3, 2], 12);
        let extra: &[u32] = if ch == 0 { &[8] } else { &[] };
        push(name, hypersurface(&r, "x^2 - y^3", 2), base, extra);
    }
    let ak: &[(&str, &str, &[u32])] = &[
        ("a1 curve", "x^2 - y^2", &[1, 1]),
        ("a2 curve", "x^2 - y^3", &[3, 2]),
        ("a3 curve", "x^2 - y^4", &[2, 1]),
        ("a4 curve", "x^2 - y^5", &[5, 2]),
        ("a5 curve", "x^2 - y^6", &[3, 1]),
    ];
    for (name, poly, powers) in ak {
        let r = ring(0, &["x", "y"]);
        push(name, hypersurface(&r, poly, 2), monomial_arc(&r, powers, 12), &[]);
    }
    {
        let r = ring(0, &["x", "y", "z"]);
        push(
            "whitney umbrella",
            hypersurface(&r, "x^2 - z y^2", 2),
            monomial_arc(&r, &[3, 2, 2], 12),
            &[],
        );
    }
    {
        let tower = cusp_tower(0);
        let alg = tower.local_presentation().unwrap();
        let base = monomial_arc(tower.ring(), &[2, 3], 12);
        push("tower (one layer)", alg, base, &[]);
    }
    {
        let tower = quadratic_tower(0);
        let alg = tower.local_presentation().unwrap();
        let base = monomial_arc(tower.ring(), &[4, 6, 5], 12);
        push("tower (two layers)", alg, base, &[]);
    }
    cases
}

#[test]
fn criterion_1_flagship_identity() {
    let start = std::time::Instant::now();
    let cfg = OracleConfig { max_steps: 64, precision_floor: 4 };
    let mut pass = true;
    let mut checked = 0usize;
    let suite = flagship_suite();
    assert!(suite.len() >= 10, "flagship suite needs at least 10 scenarios");
    for case in &suite {
        assert!(case.arcs.len() >= 3, "{}: needs at least 3 arcs", case.name);
        for (i, arc) in case.arcs.iter().enumerate() {
            let xi = arc.center();
            let inv = arc.persistence_invariants(&case.algebra, &xi).unwrap();
            let oracle = persistence_oracle(arc, &case.algebra, &xi, &cfg).unwrap();
            let ok = match (inv.rho(), &oracle) {
                (Some(rho), OracleOutcome::Dropped(k)) => rho == *k as i64,
                _ => false,
            };
            if !ok {
                eprintln!(
                    "{} arc #{i}: formula {:?} vs oracle {:?}",
                    case.name,
                    inv.rho(),
                    oracle
                );
                pass = false;
            }
            checked += 1;
        }
    }
    let elapsed = start.elapsed();
    let in_time = elapsed.as_secs_f64() < 10.0;
    report(
        1,
        &format!(
            "oracle persistence equals floor of the arc order on {checked} scenario arcs in {:.2}s",
            elapsed.as_secs_f64()
        ),
        pass && in_time,
    );
}

#[test]
fn criterion_2_cusp_anchor() {
    let r = ring(0, &["x", "y"]);
    let alg = hypersurface(&r, "x^2 - y^3", 2);
    let phi = monomial_arc(&r, &[3, 2], 16);
    let xi = origin(&r);
    let inv = phi.persistence_invariants(&alg, &xi).unwrap();
    let oracle = persistence_oracle(&phi, &alg, &xi, &OracleConfig::default()).unwrap();
    let formula_ok = inv.nu_t == OrderValue::Finite(2)
        && inv.ord == ArcOrder::Finite(Rational::new(3, 1))
        && matches!(
            inv.outcome,
            PersistenceOutcome::Conclusive { rho: 3, r_bar, .. } if r_bar == Rational::new(3, 2)
        );
    let oracle_ok = oracle == OracleOutcome::Dropped(3);
    report(
        2,
        "cusp anchor r=3, rho=3, nu_t=2, r_bar=3/2 by both pipelines",
        formula_ok && oracle_ok,
    );
}

#[test]
fn criterion_3_reparametrization_law() {
    let mut pass = true;

    // exact homogeneity of the arc order across the whole suite
    for case in &flagship_suite() {
        let base = &case.arcs[0];
        let base_ord = match base.ord_rees(&case.algebra).unwrap() {
            ArcOrder::Finite(r) => r,
            other => {
                eprintln!("{}: base order inconclusive: {other:?}", case.name);
                pass = false;
                continue;
            }
        };
        for n in 1..=16u32 {
            let scaled = base.reparametrize(n).unwrap().ord_rees(&case.algebra).unwrap();
            if scaled != ArcOrder::Finite(base_ord * Rational::new(n as i64, 1)) {
                eprintln!("{}: order did not scale by n={n}: {scaled:?}", case.name);
                pass = false;
            }
        }
    }

    // |rho(phi_n)/n - r| < 1/n with rho from the independent oracle
    let cfg = OracleConfig { max_steps: 128, precision_floor: 4 };
    let oracle_cases: Vec<(&str, ReesAlgebra, Arc)> = vec![
        (
            "cusp",
            hypersurface(&ring(0, &["x", "y"]), "x^2 - y^3", 2),
            monomial_arc(&ring(0, &["x", "y"]), &[3, 2], 8),
        ),
        (
            "a3 curve",
            hypersurface(&ring(0, &["x", "y"]), "x^2 - y^4", 2),
            monomial_arc(&ring(0, &["x", "y"]), &[2, 1], 8),
        ),
        (
            "whitney umbrella",
            hypersurface(&ring(0, &["x", "y", "z"]), "x^2 - z y^2", 2),
            monomial_arc(&ring(0, &["x", "y", "z"]), &[3, 2, 2], 8),
        ),
    ];
    for (name, alg, base) in &oracle_cases {
        let r = match base.ord_rees(alg).unwrap() {
            ArcOrder::Finite(r) => r,
            _ => unreachable!(),
        };
        for n in 1..=16u32 {
            let phi_n = base.reparametrize(n).unwrap();
            let rho_n = match persistence_oracle(&phi_n, alg, &phi_n.center(), &cfg).unwrap() {
                OracleOutcome::Dropped(k) => k as i64,
                other => {
                    eprintln!("{name} n={n}: oracle inconclusive: {other:?}");
                    pass = false;
                    continue;
                }
            };
            let gap = Rational::new(rho_n, n as i64) - r;
            let bound = Rational::new(1, n as i64);
            if gap < -bound || gap > bound || gap == bound || gap == -bound {
                eprintln!("{name} n={n}: |rho/n - r| = {gap} not below 1/{n}");
                pass = false;
            }
        }
    }
    report(
        3,
        "ord scales exactly by n and oracle rho(phi_n)/n converges to r at rate 1/n, n=1..16",
        pass,
    );
}

#[test]
fn criterion_4_saturation_invariance() {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(42);
    let budget = EnumBudget::default();
    let mut pass = true;
    let mut count = 0usize;
    for p in [2u32, 3, 5] {
        let field = Field::prime(p).unwrap();
        for dim in 1usize..=3 {
            let names = ["x", "y", "z"];
            let r = Ring::new(names[..dim].iter().map(|s| s.to_string()).collect(), field).unwrap();
            for _ in 0..3 {
                let n_gens = rng.gen_range(1..=2);
                let mut gens = Vec::new();
                for _ in 0..n_gens {
                    let mut f = Polynomial::zero(&r);
                    while f.is_zero() {
                        f = Polynomial::zero(&r);
                        for _ in 0..rng.gen_range(2..=4) {
                            let coeff = field.from_i64(rng.gen_range(1..p as i64 + 1));
                            let mut mono = Polynomial::constant(&r, coeff);
                            for v in 0..dim {
                                let e = rng.gen_range(0..=2u32);
                                if e > 0 {
                                    mono = mono.mul(&Polynomial::variable(&r, v).pow(e));
                                }
                            }
                            f = f.add(&mono);
                        }
                    }
                    gens.push((f, rng.gen_range(1..=2u32)));
                }
                let g = ReesAlgebra::new(r.clone(), gens).unwrap();
                let saturated = g.diff_saturate();
                let locus: BTreeSet<Vec<Coeff>> =
                    g.singular_locus_enumerate(&budget).unwrap().into_iter().collect();
                let locus_sat: BTreeSet<Vec<Coeff>> =
                    saturated.singular_locus_enumerate(&budget).unwrap().into_iter().collect();
                if locus != locus_sat {
                    eprintln!("p={p} dim={dim}: Sing changed under saturation");
                    pass = false;
                }
                for point in &locus {
                    let a = g.order_at_point(point).unwrap();
                    let b = saturated.order_at_point(point).unwrap();
                    if a != b {
                        eprintln!("p={p} dim={dim}: order changed at {point:?}: {a:?} vs {b:?}");
                        pass = false;
                    }
                }
                count += 1;
            }
        }
    }
    report(
        4,
        &format!("Sing and order invariant under differential saturation on {count} random algebras over F_2/F_3/F_5"),
        pass && count >= 20,
    );
}

#[test]
fn criterion_5_nu_t_preservation() {
    let mut pass = true;
    let mut checked = 0usize;

    let redundant_source = TriangularPresentation::new(
        Field::rationals(),
        vec!["s".into()],
        vec![
            ("x".into(), "x^2 - s^3".into()),
            ("z".into(), "z - s".into()),
        ],
        vec![],
    )
    .unwrap();
    let specs: Vec<(&str, FiniteMorphismSpec, Arc)> = vec![
        (
            "identity",
            FiniteMorphismSpec::new(cusp_tower(0), cusp_tower(0), 1).unwrap(),
            monomial_arc(cusp_tower(0).ring(), &[2, 3], 16),
        ),
        (
            "redundant layer",
            FiniteMorphismSpec::new(cusp_tower(0), redundant_source.clone(), 1).unwrap(),
            monomial_arc(redundant_source.ring(), &[2, 3, 2], 16),
        ),
        (
            "quadratic layer",
            FiniteMorphismSpec::new(cusp_tower(0), quadratic_tower(0), 2).unwrap(),
            monomial_arc(quadratic_tower(0).ring(), &[4, 6, 5], 24),
        ),
    ];
    for (name, spec, base) in &specs {
        let arcs = [base.clone(), base.reparametrize(2).unwrap(), base.reparametrize(3).unwrap()];
        // membership stage must hold for the declared top point
        let top = vec![spec.source().ring().field().zero(); spec.source().ring().dim()];
        let labelled: Vec<(String, Arc)> = arcs
            .iter()
            .enumerate()
            .map(|(i, a)| (format!("arc{i}"), a.clone()))
            .collect();
        let check = transversality_check(spec, &[top], &labelled).unwrap();
        if !check.all_pass() {
            eprintln!("{name}: transversality membership/nu_t stage failed");
            pass = false;
        }
        for arc in &arcs {
            let nu_up = arc.nu_t(&arc.center()).unwrap();
            let pushed = spec.pushforward(arc).unwrap();
            let nu_down = pushed.nu_t(&pushed.center()).unwrap();
            if nu_up != nu_down {
                eprintln!("{name}: nu_t {nu_up:?} vs pushforward {nu_down:?}");
                pass = false;
            }
            checked += 1;
        }
    }
    report(
        5,
        &format!("nu_t preserved under pushforward on {checked} arcs across the morphism specs"),
        pass,
    );
}

#[test]
fn criterion_6_zariski_sweep() {
    let start = std::time::Instant::now();
    let mut pass = true;
    let mut count = 0usize;
    for p in [2u32, 3, 5] {
        let field = Field::prime(p).unwrap();
        let r = Ring::new(vec!["x".into(), "y".into()], field).unwrap();
        // every possible monic fiber polynomial of degree <= 4
        for deg in 1u32..=4 {
            let combos = (p as u64).pow(deg);
            for code in 0..combos {
                let mut f = Polynomial::variable(&r, 1).pow(deg);
                let mut c = code;
                for j in 0..deg {
                    let coeff = field.from_i64((c % p as u64) as i64);
                    c /= p as u64;
                    let term = Polynomial::constant(&r, coeff).mul(&Polynomial::variable(&r, 1).pow(j));
                    f = f.add(&term);
                }
                let z = zariski_fiber_check(&f, &field.zero()).unwrap();
                if !z.pass {
                    eprintln!("p={p}: fiber identity failed for {f}");
                    pass = false;
                }
                count += 1;
            }
        }
        // a genuinely bivariate curve, over every fiber of the line
        let curve = Polynomial::parse(&r, "y^2 - x^3 - x").unwrap();
        for a in field.elements() {
            let z = zariski_fiber_check(&curve, &a).unwrap();
            if !z.pass {
                eprintln!("p={p}: fiber identity failed for y^2 - x^3 - x at {a}");
                pass = false;
            }
            count += 1;
        }
    }
    let elapsed = start.elapsed();
    report(
        6,
        &format!(
            "sum of e_i*[k_i:k] equals deg_y f on {count} fibers over F_2/F_3/F_5 in {:.2}s",
            elapsed.as_secs_f64()
        ),
        pass && elapsed.as_secs_f64() < 30.0,
    );
}

#[test]
fn criterion_7_main_theorem_harness() {
    let mut pass = true;

    let identity = FiniteMorphismSpec::new(cusp_tower(0), cusp_tower(0), 1).unwrap();
    let base = monomial_arc(identity.source().ring(), &[2, 3], 16);
    let arcs: Vec<(String, Arc)> = (1..=3u32)
        .map(|n| (format!("n{n}"), base.reparametrize(n).unwrap()))
        .collect();
    let cmp = persistence_compare(&identity, &arcs, Some(&OracleConfig::default())).unwrap();
    if cmp.verdict != Verdict::AllEqual {
        eprintln!("identity spec verdict: {:?}", cmp.verdict);
        pass = false;
    }

    let redundant_source = TriangularPresentation::new(
        Field::rationals(),
        vec!["s".into()],
        vec![
            ("x".into(), "x^2 - s^3".into()),
            ("z".into(), "z - s".into()),
        ],
        vec![],
    )
    .unwrap();
    let redundant = FiniteMorphismSpec::new(cusp_tower(0), redundant_source, 1).unwrap();
    let base_r = monomial_arc(redundant.source().ring(), &[2, 3, 2], 16);
    let arcs_r: Vec<(String, Arc)> = (1..=3u32)
        .map(|n| (format!("n{n}"), base_r.reparametrize(n).unwrap()))
        .collect();
    let cmp_r = persistence_compare(&redundant, &arcs_r, Some(&OracleConfig::default())).unwrap();
    if cmp_r.verdict != Verdict::AllEqual {
        eprintln!("redundant-layer spec verdict: {:?}", cmp_r.verdict);
        pass = false;
    }

    // strict-inequality witness against integrality of the larger algebra
    let r = ring(0, &["x", "y"]);
    let g1 = ReesAlgebra::new(r.clone(), vec![(Polynomial::parse(&r, "x^2").unwrap(), 2)]).unwrap();
    let g2 = ReesAlgebra::new(
        r.clone(),
        vec![
            (Polynomial::parse(&r, "x^2").unwrap(), 2),
            (Polynomial::parse(&r, "y").unwrap(), 1),
        ],
    )
    .unwrap();
    let witness_arc = monomial_arc(&r, &[3, 1], 12);
    let eq = arcwise_order_equality(&g1, &g2, &[("witness".to_string(), witness_arc)]).unwrap();
    let witness_ok = matches!(eq.verdict, Verdict::Mismatch { .. })
        && eq.rows[0].ord_small == ArcOrder::Finite(Rational::new(3, 1))
        && eq.rows[0].ord_large == ArcOrder::Finite(Rational::new(1, 1));
    if !witness_ok {
        eprintln!("order-equality witness not detected: {:?}", eq.rows[0]);
        pass = false;
    }

    report(
        7,
        "persistence equal across identity and redundant-layer specs; strict order-drop witness detected",
        pass,
    );
}

#[test]
fn criterion_8_inconclusive_discipline() {
    use nashmult::series::TruncatedSeries;

    let r = ring(0, &["x", "y"]);
    let alg = hypersurface(&r, "x^2", 2);
    let field = *r.field();
    let phi = Arc::new(
        r.clone(),
        vec![
            TruncatedSeries::zero(field, 32),
            TruncatedSeries::identity(field, 32),
        ],
    )
    .unwrap();
    let xi = origin(&r);
    let inv = phi.persistence_invariants(&alg, &xi).unwrap();
    let undefined = matches!(inv.outcome, PersistenceOutcome::Undefined { .. });
    let cfg = OracleConfig { max_steps: 8, precision_floor: 4 };
    let oracle = persistence_oracle(&phi, &alg, &xi, &cfg).unwrap();
    let did_not_drop = matches!(oracle, OracleOutcome::DidNotDrop { .. });

    // the CLI must surface the same outcome as exit code 3
    let scenario = concat!(env!("CARGO_MANIFEST_DIR"), "/scenarios/degenerate.scn");
    let status = std::process::Command::new(env!("CARGO_BIN_EXE_nashmult"))
        .args(["persist", scenario])
        .output()
        .expect("failed to spawn the binary");
    let exit3 = status.status.code() == Some(3);

    report(
        8,
        "top-stratum arc yields Undefined/DidNotDrop and CLI exit code 3, never a finite rho",
        undefined && did_not_drop && exit3,
    );
}
