//! Scenario-driven command-line runner.
//!
//! Exit codes: 0 success, 1 mathematical mismatch, 2 usage or parse error,
//! 3 inconclusive (truncation-limited) outcome.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use nashmult::arc::Arc;
use nashmult::error::Error;
use nashmult::field::{Coeff, Rational};
use nashmult::hickel::{
    nash_sequence_hypersurface, persistence_oracle, persistence_trace, OracleConfig, OracleOutcome,
};
use nashmult::morphism::{persistence_compare, transversality_check, zariski_fiber_check, Verdict};
use nashmult::order::OrderValue;
use nashmult::poly::{Polynomial, Ring};
use nashmult::rees::{EnumBudget, ReesAlgebra};
use nashmult::report::{Cell, ExitStatus, Item, OutputMode, Provenance, Report};
use nashmult::scenario::Scenario;
use nashmult::arc::PersistenceOutcome;

#[derive(Parser)]
#[command(name = "nashmult", version, about = "Arc-space invariants of singular varieties")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    Table,
    Json,
}

#[derive(Args)]
struct CommonArgs {
    /// Scenario file (strict JSON)
    scenario: PathBuf,
    /// Truncate every arc to this precision before running
    #[arg(long)]
    precision: Option<u32>,
    /// Cap on directed blow-up steps
    #[arg(long)]
    max_steps: Option<usize>,
    #[arg(long, value_enum, default_value = "table")]
    output: Mode,
    /// Cross-check formula results with the blow-up oracle
    #[arg(long)]
    oracle: bool,
    /// Override the scenario's coefficient field characteristic
    #[arg(long = "char")]
    characteristic: Option<u32>,
}

#[derive(Subcommand)]
enum Command {
    /// Order of each algebra at each declared point
    Order(CommonArgs),
    /// Singular locus: F_p enumeration, or membership of declared points
    Sing(CommonArgs),
    /// Differential saturation of each algebra
    Diff(CommonArgs),
    /// Nash multiplicity sequence of each polynomial along each arc
    Nash(CommonArgs),
    /// Persistence invariants of each arc for each algebra
    Persist(CommonArgs),
    /// Persistence comparison across the scenario's finite morphism
    Compare(CommonArgs),
    /// Fiber multiplicity formula for plane curves over a line
    Zariski(CommonArgs),
    /// Built-in agreement suite: oracle persistence equals floor of the order
    Selftest {
        #[arg(long, value_enum, default_value = "table")]
        output: Mode,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (result, mode) = match &cli.command {
        Command::Order(a) => (with_scenario(a, cmd_order), a.output),
        Command::Sing(a) => (with_scenario(a, cmd_sing), a.output),
        Command::Diff(a) => (with_scenario(a, cmd_diff), a.output),
        Command::Nash(a) => (with_scenario(a, cmd_nash), a.output),
        Command::Persist(a) => (with_scenario(a, cmd_persist), a.output),
        Command::Compare(a) => (with_scenario(a, cmd_compare), a.output),
        Command::Zariski(a) => (with_scenario(a, cmd_zariski), a.output),
        Command::Selftest { output } => (cmd_selftest(), *output),
    };
    match result {
        Ok(report) => {
            print!("{}", report.emit(match mode {
                Mode::Table => OutputMode::Table,
                Mode::Json => OutputMode::Json,
            }));
            ExitCode::from(report.exit.code() as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            let code = match e {
                Error::PrecisionExhausted { .. } => 3,
                _ => 2,
            };
            ExitCode::from(code)
        }
    }
}

struct Context {
    scenario: Scenario,
    config: OracleConfig,
    oracle: bool,
}

fn with_scenario(
    args: &CommonArgs,
    f: fn(&Context) -> Result<Report, Error>,
) -> Result<Report, Error> {
    let mut scenario = Scenario::from_path_with_char(&args.scenario, args.characteristic)?;
    if let Some(p) = args.precision {
        if p == 0 {
            return Err(Error::Scenario("--precision must be at least 1".into()));
        }
        for arc in scenario.arcs.values_mut() {
            if p < arc.precision() {
                let series = arc.series().iter().map(|s| s.truncate(p)).collect();
                *arc = Arc::new(arc.ring().clone(), series)?;
            }
        }
        if let Some(m) = scenario.morphism.as_mut() {
            for (_, arc) in m.arcs.iter_mut() {
                if p < arc.precision() {
                    let series = arc.series().iter().map(|s| s.truncate(p)).collect();
                    *arc = Arc::new(arc.ring().clone(), series)?;
                }
            }
        }
    }
    let config = OracleConfig {
        max_steps: args.max_steps.unwrap_or(scenario.defaults.max_steps),
        precision_floor: OracleConfig::default().precision_floor,
    };
    let ctx = Context { scenario, config, oracle: args.oracle };
    f(&ctx)
}

fn point_cell(p: &[Coeff]) -> Cell {
    let coords: Vec<String> = p.iter().map(|c| c.to_string()).collect();
    Cell::Text(format!("({})", coords.join(",")))
}

fn origin(ring: &Ring) -> Vec<Coeff> {
    vec![ring.field().zero(); ring.dim()]
}

/// Declared points, or the origin when none are declared.
fn points_or_origin(ctx: &Context) -> Vec<(String, Vec<Coeff>)> {
    if ctx.scenario.points.is_empty() {
        vec![("origin".to_string(), origin(&ctx.scenario.ring))]
    } else {
        ctx.scenario.points.iter().map(|(n, p)| (n.clone(), p.clone())).collect()
    }
}

fn cmd_order(ctx: &Context) -> Result<Report, Error> {
    let mut report = Report::new("order");
    for (aname, alg) in &ctx.scenario.algebras {
        for (pname, point) in points_or_origin(ctx) {
            let ord = alg.order_at_point(&point)?;
            let mut item = Item::new(format!("{aname}@{pname}"));
            item.push("point", point_cell(&point), Provenance::Input);
            item.push("ord", Cell::from_rees_order(&ord), Provenance::Formula);
            report.items.push(item);
        }
    }
    Ok(report)
}

fn cmd_sing(ctx: &Context) -> Result<Report, Error> {
    let mut report = Report::new("sing");
    let budget = EnumBudget::default();
    for (aname, alg) in &ctx.scenario.algebras {
        let mut item = Item::new(aname.clone());
        if ctx.scenario.field.characteristic() > 0 {
            let locus = alg.singular_locus_enumerate(&budget)?;
            item.push("count", Cell::Int(locus.len() as i64), Provenance::BruteForce);
            let rendered: Vec<String> = locus
                .iter()
                .map(|p| match point_cell(p) {
                    Cell::Text(s) => s,
                    _ => unreachable!(),
                })
                .collect();
            item.push("points", Cell::Text(rendered.join(" ")), Provenance::BruteForce);
        } else {
            for (pname, point) in points_or_origin(ctx) {
                let member = alg.in_singular_locus(&point)?;
                item.push(format!("in_sing@{pname}"), Cell::Bool(member), Provenance::Formula);
            }
        }
        report.items.push(item);
    }
    Ok(report)
}

fn cmd_diff(ctx: &Context) -> Result<Report, Error> {
    let mut report = Report::new("diff");
    for (aname, alg) in &ctx.scenario.algebras {
        let saturated = alg.diff_saturate();
        let mut item = Item::new(aname.clone());
        for (i, (f, w)) in saturated.generators().iter().enumerate() {
            item.push(format!("g{i}"), Cell::Text(format!("{f} | weight {w}")), Provenance::Formula);
        }
        report.items.push(item);
    }
    Ok(report)
}

fn cmd_nash(ctx: &Context) -> Result<Report, Error> {
    if ctx.scenario.polynomials.is_empty() {
        return Err(Error::Scenario("nash needs at least one named polynomial".into()));
    }
    if ctx.scenario.arcs.is_empty() {
        return Err(Error::Scenario("nash needs at least one named arc".into()));
    }
    let mut report = Report::new("nash");
    for (fname, f) in &ctx.scenario.polynomials {
        for (arcname, phi) in &ctx.scenario.arcs {
            let xi = phi.center();
            let seq = nash_sequence_hypersurface(phi, f, &xi, &ctx.config)?;
            let m0 = match f.order_at(&xi)? {
                OrderValue::Finite(m) => m,
                _ => unreachable!("nash_sequence_hypersurface checked this"),
            };
            let algebra = ReesAlgebra::new(f.ring().clone(), vec![(f.clone(), m0)])?.diff_saturate();
            // same arc directs both sequences, so chart/center rows line up
            let trace = persistence_trace(phi, &algebra, &xi, &ctx.config).ok();
            for (step, m) in seq.values.iter().enumerate() {
                let mut item = Item::new(format!("{fname}:{arcname} step {step}"));
                item.push("mult", Cell::Int(*m as i64), Provenance::Oracle);
                if let Some((rows, _)) = &trace {
                    if let Some(row) = rows.get(step) {
                        item.push(
                            "chart",
                            Cell::Text(row.chart.clone().unwrap_or_else(|| "-".to_string())),
                            Provenance::Oracle,
                        );
                        item.push("center", point_cell(&row.center), Provenance::Oracle);
                        let orders: Vec<String> =
                            row.generator_orders.iter().map(|o| o.to_string()).collect();
                        item.push("gen_orders", Cell::Text(orders.join(" ")), Provenance::Oracle);
                    }
                }
                report.items.push(item);
            }
            let mut summary = Item::new(format!("{fname}:{arcname}"));
            match seq.dropped_at {
                Some(k) => summary.push("dropped_at", Cell::Int(k as i64), Provenance::Oracle),
                None => {
                    summary.push(
                        "dropped_at",
                        Cell::Inconclusive(Rational::new(ctx.config.max_steps as i64, 1)),
                        Provenance::Oracle,
                    );
                    report.exit = report.exit.combine(ExitStatus::Inconclusive);
                }
            }
            report.items.push(summary);
        }
    }
    Ok(report)
}

fn cmd_persist(ctx: &Context) -> Result<Report, Error> {
    if ctx.scenario.algebras.is_empty() {
        return Err(Error::Scenario("persist needs at least one algebra".into()));
    }
    if ctx.scenario.arcs.is_empty() {
        return Err(Error::Scenario("persist needs at least one named arc".into()));
    }
    let mut report = Report::new("persist");
    for (aname, alg) in &ctx.scenario.algebras {
        let saturated = alg.diff_saturate();
        for (arcname, phi) in &ctx.scenario.arcs {
            let xi = phi.center();
            let inv = phi.persistence_invariants(&saturated, &xi)?;
            let mut item = Item::new(format!("{aname}:{arcname}"));
            item.push("nu_t", Cell::from_order(&inv.nu_t), Provenance::Formula);
            item.push("r", Cell::from_arc_order(&inv.ord), Provenance::Formula);
            match &inv.outcome {
                PersistenceOutcome::Conclusive { rho, r_bar, rho_bar, .. } => {
                    item.push("rho", Cell::Int(*rho), Provenance::Formula);
                    item.push("r_bar", Cell::Rational(*r_bar), Provenance::Formula);
                    item.push("rho_bar", Cell::Rational(*rho_bar), Provenance::Formula);
                }
                PersistenceOutcome::Undefined { retry_precision, .. } => {
                    item.push("rho", Cell::Text("undefined".to_string()), Provenance::Formula);
                    item.push(
                        "retry_precision",
                        Cell::Int(*retry_precision as i64),
                        Provenance::Formula,
                    );
                    report.exit = report.exit.combine(ExitStatus::Inconclusive);
                }
            }
            if ctx.oracle {
                match persistence_oracle(phi, &saturated, &xi, &ctx.config)? {
                    OracleOutcome::Dropped(k) => {
                        item.push("rho_oracle", Cell::Int(k as i64), Provenance::Oracle);
                        if let PersistenceOutcome::Conclusive { rho, .. } = &inv.outcome {
                            if *rho != k as i64 {
                                report.exit = report.exit.combine(ExitStatus::Mismatch);
                            }
                        }
                    }
                    OracleOutcome::DidNotDrop { max_steps } => {
                        item.push(
                            "rho_oracle",
                            Cell::Inconclusive(Rational::new(max_steps as i64, 1)),
                            Provenance::Oracle,
                        );
                        report.exit = report.exit.combine(ExitStatus::Inconclusive);
                    }
                }
            }
            report.items.push(item);
            if let Ok((rows, _)) = persistence_trace(phi, &saturated, &xi, &ctx.config) {
                for row in rows {
                    let mut titem = Item::new(format!("{aname}:{arcname} step {}", row.step));
                    titem.push(
                        "chart",
                        Cell::Text(row.chart.clone().unwrap_or_else(|| "-".to_string())),
                        Provenance::Oracle,
                    );
                    titem.push("center", point_cell(&row.center), Provenance::Oracle);
                    titem.push("in_sing", Cell::Bool(row.in_singular_locus), Provenance::Oracle);
                    let orders: Vec<String> =
                        row.generator_orders.iter().map(|o| o.to_string()).collect();
                    titem.push("gen_orders", Cell::Text(orders.join(" ")), Provenance::Oracle);
                    report.items.push(titem);
                }
            }
        }
    }
    Ok(report)
}

fn cmd_compare(ctx: &Context) -> Result<Report, Error> {
    let m = ctx
        .scenario
        .morphism
        .as_ref()
        .ok_or_else(|| Error::Scenario("compare needs a morphism section".into()))?;
    let mut report = Report::new("compare");

    let mut titem = Item::new("generic_rank");
    titem.push("rank", Cell::Int(m.spec.generic_rank() as i64), Provenance::Input);
    report.items.push(titem);

    let point_values: Vec<Vec<Coeff>> = m.points.iter().map(|(_, p)| p.clone()).collect();
    let trans = transversality_check(&m.spec, &point_values, &m.arcs)?;
    for check in &trans.items {
        let mut item = Item::new(format!("transversality: {}", check.label));
        let prov = if check.label.contains("grid") {
            Provenance::BruteForce
        } else {
            Provenance::Formula
        };
        item.push("pass", Cell::Bool(check.pass), prov);
        item.push("detail", Cell::Text(check.detail.clone()), prov);
        report.items.push(item);
    }
    if !trans.all_pass() {
        report.exit = report.exit.combine(ExitStatus::Mismatch);
    }

    let oracle_cfg = ctx.oracle.then_some(&ctx.config);
    let cmp = persistence_compare(&m.spec, &m.arcs, oracle_cfg)?;
    for row in &cmp.rows {
        let mut item = Item::new(format!("arc {}", row.arc_label));
        item.push("nu_t_source", Cell::from_order(&row.nu_source), Provenance::Formula);
        item.push("nu_t_target", Cell::from_order(&row.nu_target), Provenance::Formula);
        item.push("r_source", Cell::from_arc_order(&row.report_source.ord), Provenance::Formula);
        item.push("r_target", Cell::from_arc_order(&row.report_target.ord), Provenance::Formula);
        let rho_cell = |rho: Option<i64>| match rho {
            Some(n) => Cell::Int(n),
            None => Cell::Text("undefined".to_string()),
        };
        item.push("rho_source", rho_cell(row.report_source.rho()), Provenance::Formula);
        item.push("rho_target", rho_cell(row.report_target.rho()), Provenance::Formula);
        let oracle_cell = |o: &Option<OracleOutcome>| {
            o.as_ref().map(|out| match out {
                OracleOutcome::Dropped(k) => Cell::Int(*k as i64),
                OracleOutcome::DidNotDrop { max_steps } => {
                    Cell::Inconclusive(Rational::new(*max_steps as i64, 1))
                }
            })
        };
        if let Some(c) = oracle_cell(&row.oracle_source) {
            item.push("rho_oracle_source", c, Provenance::Oracle);
        }
        if let Some(c) = oracle_cell(&row.oracle_target) {
            item.push("rho_oracle_target", c, Provenance::Oracle);
        }
        item.push("verdict", Cell::Text(format!("{:?}", row.verdict)), Provenance::Formula);
        report.items.push(item);
    }
    let mut verdict = Item::new("verdict");
    match &cmp.verdict {
        Verdict::AllEqual => {
            verdict.push("result", Cell::Text("all-equal".to_string()), Provenance::Formula);
        }
        Verdict::Mismatch { witness } => {
            verdict.push("result", Cell::Text("mismatch".to_string()), Provenance::Formula);
            verdict.push("witness", Cell::Text(witness.clone()), Provenance::Formula);
            report.exit = report.exit.combine(ExitStatus::Mismatch);
        }
        Verdict::Inconclusive => {
            verdict.push("result", Cell::Text("inconclusive".to_string()), Provenance::Formula);
            report.exit = report.exit.combine(ExitStatus::Inconclusive);
        }
    }
    report.items.push(verdict);
    Ok(report)
}

fn cmd_zariski(ctx: &Context) -> Result<Report, Error> {
    if ctx.scenario.polynomials.is_empty() {
        return Err(Error::Scenario("zariski needs at least one named polynomial".into()));
    }
    if ctx.scenario.points.is_empty() {
        return Err(Error::Scenario(
            "zariski needs named points; the first coordinate picks the fiber".into(),
        ));
    }
    let mut report = Report::new("zariski");
    for (fname, f) in &ctx.scenario.polynomials {
        for (pname, point) in &ctx.scenario.points {
            let a = &point[0];
            let z = zariski_fiber_check(f, a)?;
            let mut item = Item::new(format!("{fname}@{pname}"));
            item.push("fiber", Cell::Text(format!("x = {}", z.fiber_point)), Provenance::Input);
            item.push("fiber_poly", Cell::Text(z.fiber_polynomial.clone()), Provenance::Formula);
            let factors: Vec<String> = z
                .factors
                .iter()
                .map(|(p, e, d)| format!("({p})^{e} [deg {d}]"))
                .collect();
            item.push("factors", Cell::Text(factors.join(" ")), Provenance::BruteForce);
            item.push("sum_e_times_deg", Cell::Int(z.weighted_sum as i64), Provenance::BruteForce);
            item.push("deg_y", Cell::Int(z.expected_degree as i64), Provenance::Input);
            item.push("pass", Cell::Bool(z.pass), Provenance::BruteForce);
            if !z.pass {
                report.exit = report.exit.combine(ExitStatus::Mismatch);
            }
            report.items.push(item);
        }
    }
    Ok(report)
}

/// One built-in agreement case: a hypersurface, an arc through the origin,
/// and the two persistence pipelines that must agree.
fn selftest_case(
    report: &mut Report,
    label: &str,
    characteristic: u32,
    vars: &[&str],
    poly: &str,
    weight: u32,
    powers: &[u32],
    precision: u32,
) -> Result<(), Error> {
    use nashmult::arc::monomial_arc;
    use nashmult::field::Field;

    let field = Field::new(characteristic)?;
    let ring = Ring::new(vars.iter().map(|s| s.to_string()).collect(), field)?;
    let f = Polynomial::parse(&ring, poly)?;
    let algebra = ReesAlgebra::new(ring.clone(), vec![(f, weight)])?.diff_saturate();
    let phi = monomial_arc(&ring, powers, precision);
    let xi = origin(&ring);
    let inv = phi.persistence_invariants(&algebra, &xi)?;
    let oracle = persistence_oracle(&phi, &algebra, &xi, &OracleConfig::default())?;
    let mut item = Item::new(label.to_string());
    item.push("r", Cell::from_arc_order(&inv.ord), Provenance::Formula);
    match (inv.rho(), oracle) {
        (Some(rho), OracleOutcome::Dropped(k)) => {
            item.push("rho", Cell::Int(rho), Provenance::Formula);
            item.push("rho_oracle", Cell::Int(k as i64), Provenance::Oracle);
            let agree = rho == k as i64;
            item.push("agree", Cell::Bool(agree), Provenance::Oracle);
            if !agree {
                report.exit = report.exit.combine(ExitStatus::Mismatch);
            }
        }
        _ => {
            item.push("agree", Cell::Text("inconclusive".to_string()), Provenance::Oracle);
            report.exit = report.exit.combine(ExitStatus::Inconclusive);
        }
    }
    report.items.push(item);
    Ok(())
}

fn cmd_selftest() -> Result<Report, Error> {
    let mut report = Report::new("selftest");
    let cases: &[(&str, u32, &[&str], &str, u32, &[u32], u32)] = &[
        ("cusp char 0", 0, &["x", "y"], "x^2 - y^3", 2, &[3, 2], 32),
        ("cusp char 0, n=2", 0, &["x", "y"], "x^2 - y^3", 2, &[6, 4], 48),
        ("cusp char 0, n=3", 0, &["x", "y"], "x^2 - y^3", 2, &[9, 6], 64),
        ("cusp char 2", 2, &["x", "y"], "x^2 - y^3", 2, &[3, 2], 32),
        ("cusp char 3", 3, &["x", "y"], "x^2 - y^3", 2, &[3, 2], 32),
        ("a1 curve", 0, &["x", "y"], "x^2 - y^2", 2, &[1, 1], 24),
        ("a3 curve", 0, &["x", "y"], "x^2 - y^4", 2, &[2, 1], 24),
        ("a4 curve", 0, &["x", "y"], "x^2 - y^5", 2, &[5, 2], 40),
        ("a5 curve", 0, &["x", "y"], "x^2 - y^6", 2, &[3, 1], 32),
        ("whitney umbrella", 0, &["x", "y", "z"], "x^2 - z y^2", 2, &[3, 2, 2], 40),
    ];
    for (label, ch, vars, poly, weight, powers, precision) in cases {
        selftest_case(&mut report, label, *ch, vars, poly, *weight, powers, *precision)?;
    }
    Ok(report)
}
