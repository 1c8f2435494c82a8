//! Triangular presentations of finite morphisms, local presentations of the
//! multiplicity, transversality and Zariski-formula checks, and the
//! persistence-comparison harness for the finiteness criterion.

use crate::arc::{Arc, PersistenceReport};
use crate::error::Error;
use crate::field::{Coeff, Field};
use crate::hickel::{persistence_oracle, OracleConfig, OracleOutcome};
use crate::order::{ArcOrder, OrderValue};
use crate::poly::{Polynomial, Ring};
use crate::rees::{EnumBudget, ReesAlgebra};

/// S[x_1,...,x_n] with a tower of monic relations f_i(x_i) over the base:
/// the shape produced by minimal polynomials of a finite extension.
#[derive(Clone, Debug)]
pub struct TriangularPresentation {
    base_vars: Vec<String>,
    tower: Vec<(String, Polynomial)>,
    extra_relations: Vec<Polynomial>,
    ring: Ring,
}

impl TriangularPresentation {
    /// `tower` entries are (new variable, defining polynomial source text).
    pub fn new(
        field: Field,
        base_vars: Vec<String>,
        tower_decls: Vec<(String, String)>,
        extra_relation_decls: Vec<String>,
    ) -> Result<TriangularPresentation, Error> {
        let mut vars = base_vars.clone();
        for (v, _) in &tower_decls {
            vars.push(v.clone());
        }
        let ring = Ring::new(vars, field)?;
        let d = base_vars.len();
        let mut tower = Vec::with_capacity(tower_decls.len());
        for (i, (var, text)) in tower_decls.iter().enumerate() {
            let f = Polynomial::parse(&ring, text)?;
            let var_idx = d + i;
            let deg = f.degree_in(var_idx).unwrap_or(0);
            if deg < 1 {
                return Err(Error::NotMonic(var.clone()));
            }
            let lead = f.coefficient_of(var_idx, deg);
            if !lead.is_constant() || lead.leading_coeff().map(|c| !c.is_one()).unwrap_or(true) {
                return Err(Error::NotMonic(var.clone()));
            }
            // f_i may involve the base and tower variables up to x_i only
            for (m, _) in f.terms() {
                for (j, &e) in m.0.iter().enumerate() {
                    if e > 0 && j > var_idx {
                        return Err(Error::Scenario(format!(
                            "tower polynomial for {var} involves tower variable {}",
                            ring.vars()[j]
                        )));
                    }
                }
            }
            tower.push((var.clone(), f));
        }
        let extra_relations = extra_relation_decls
            .iter()
            .map(|t| Polynomial::parse(&ring, t))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(TriangularPresentation { base_vars, tower, extra_relations, ring })
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn base_vars(&self) -> &[String] {
        &self.base_vars
    }

    pub fn tower(&self) -> &[(String, Polynomial)] {
        &self.tower
    }

    pub fn tower_degrees(&self) -> Vec<u32> {
        let d = self.base_vars.len();
        self.tower
            .iter()
            .enumerate()
            .map(|(i, (_, f))| f.degree_in(d + i).unwrap_or(0))
            .collect()
    }

    pub fn defining_polynomials(&self) -> Vec<Polynomial> {
        let mut out: Vec<Polynomial> = self.tower.iter().map(|(_, f)| f.clone()).collect();
        out.extend(self.extra_relations.iter().cloned());
        out
    }

    /// The differentially saturated presentation algebra
    /// Diff(R[f_1 W^{l_1}, ..., f_n W^{l_n}]).
    pub fn local_presentation(&self) -> Result<ReesAlgebra, Error> {
        let d = self.base_vars.len();
        let gens = self
            .tower
            .iter()
            .enumerate()
            .map(|(i, (_, f))| (f.clone(), f.degree_in(d + i).unwrap_or(0)))
            .collect();
        Ok(ReesAlgebra::new(self.ring.clone(), gens)?.diff_saturate())
    }
}

/// Triangular tower over the same base, extending the target's tower;
/// beta is the coordinate projection dropping the extra tower variables.
#[derive(Clone, Debug)]
pub struct FiniteMorphismSpec {
    target: TriangularPresentation,
    source: TriangularPresentation,
    declared_rank: u64,
}

impl FiniteMorphismSpec {
    pub fn new(
        target: TriangularPresentation,
        source: TriangularPresentation,
        declared_rank: u64,
    ) -> Result<FiniteMorphismSpec, Error> {
        if source.base_vars != target.base_vars {
            return Err(Error::Scenario("source and target base variables differ".into()));
        }
        if source.tower.len() < target.tower.len() {
            return Err(Error::Scenario("source tower is shorter than the target tower".into()));
        }
        for (i, (var, f)) in target.tower.iter().enumerate() {
            let (svar, sf) = &source.tower[i];
            if var != svar || &f.lift_to(&source.ring) != sf {
                return Err(Error::Scenario(format!(
                    "source tower entry {i} does not extend the target tower ({var})"
                )));
            }
        }
        let spec = FiniteMorphismSpec { target, source, declared_rank };
        let computed = spec.computed_rank();
        if computed != declared_rank {
            return Err(Error::RankMismatch { declared: declared_rank, computed });
        }
        Ok(spec)
    }

    pub fn target(&self) -> &TriangularPresentation {
        &self.target
    }

    pub fn source(&self) -> &TriangularPresentation {
        &self.source
    }

    fn computed_rank(&self) -> u64 {
        self.source.tower_degrees()[self.target.tower.len()..]
            .iter()
            .map(|&d| d as u64)
            .product()
    }

    /// Generic rank of beta: product of the extra tower degrees.
    pub fn generic_rank(&self) -> u64 {
        self.declared_rank
    }

    /// beta on points: drop the extra tower coordinates.
    pub fn project_point(&self, xi: &[Coeff]) -> Result<Vec<Coeff>, Error> {
        let n = self.target.ring.dim();
        if xi.len() != self.source.ring.dim() {
            return Err(Error::VariableMismatch { expected: self.source.ring.dim(), got: xi.len() });
        }
        Ok(xi[..n].to_vec())
    }

    /// beta_infty on arcs: validate on X' then drop the extra coordinates.
    pub fn pushforward(&self, phi: &Arc) -> Result<Arc, Error> {
        phi.validate_on_variety(&self.source.defining_polynomials())?;
        phi.project(&self.target.ring)
    }
}

/// One labelled pass/fail line of a structured check.
#[derive(Clone, Debug)]
pub struct CheckItem {
    pub label: String,
    pub pass: bool,
    pub detail: String,
}

#[derive(Clone, Debug)]
pub struct TransversalityReport {
    pub items: Vec<CheckItem>,
}

impl TransversalityReport {
    pub fn all_pass(&self) -> bool {
        self.items.iter().all(|i| i.pass)
    }
}

fn point_display(p: &[Coeff]) -> String {
    let coords: Vec<String> = p.iter().map(|c| c.to_string()).collect();
    format!("({})", coords.join(","))
}

/// Checks the finite evidence for transversality: Sing membership of the
/// declared top points on both sides, nu_t preservation along the supplied
/// arcs, and (over F_p, within budget) the projected-locus comparison
/// beta(Sing(G')) = Sing(G).
pub fn transversality_check(
    spec: &FiniteMorphismSpec,
    points: &[Vec<Coeff>],
    arcs: &[(String, Arc)],
) -> Result<TransversalityReport, Error> {
    let g_source = spec.source().local_presentation()?;
    let g_target = spec.target().local_presentation()?;
    let mut items = Vec::new();

    for xi in points {
        let in_source = g_source.in_singular_locus(xi)?;
        let down = spec.project_point(xi)?;
        let in_target = g_target.in_singular_locus(&down)?;
        items.push(CheckItem {
            label: format!("top point {}", point_display(xi)),
            pass: in_source && in_target,
            detail: format!(
                "in Sing(G_source): {in_source}; beta(point) {} in Sing(G_target): {in_target}",
                point_display(&down)
            ),
        });
    }

    for (label, phi) in arcs {
        phi.validate_on_variety(&spec.source().defining_polynomials())?;
        let center = phi.center();
        let nu_source = phi.nu_t(&center)?;
        let pushed = spec.pushforward(phi)?;
        let nu_target = pushed.nu_t(&pushed.center())?;
        items.push(CheckItem {
            label: format!("arc {label}: nu_t preserved"),
            pass: nu_source == nu_target,
            detail: format!("nu_t(phi') = {nu_source}, nu_t(beta(phi')) = {nu_target}"),
        });
    }

    let field = spec.source().ring().field();
    if field.characteristic() > 0 {
        let budget = EnumBudget::default();
        let enum_source = g_source.singular_locus_enumerate(&budget);
        let enum_target = g_target.singular_locus_enumerate(&budget);
        if let (Ok(top_source), Ok(top_target)) = (enum_source, enum_target) {
            let mut projected: Vec<Vec<Coeff>> = top_source
                .iter()
                .map(|p| spec.project_point(p))
                .collect::<Result<_, _>>()?;
            projected.sort();
            projected.dedup();
            let pass = projected == top_target;
            items.push(CheckItem {
                label: "projected top locus equals target top locus (F_p grid)".into(),
                pass,
                detail: format!(
                    "beta(Sing(G_source)) has {} point(s), Sing(G_target) has {}",
                    projected.len(),
                    top_target.len()
                ),
            });
        }
    }

    Ok(TransversalityReport { items })
}

// ---------------------------------------------------------------------------
// Zariski's multiplicity formula on fibers of a plane curve over a line.

/// Dense univariate polynomial over a field, for fiber factorization.
#[derive(Clone, PartialEq, Debug)]
struct UniPoly {
    field: Field,
    coeffs: Vec<Coeff>, // ascending, trimmed
}

impl UniPoly {
    fn new(field: Field, mut coeffs: Vec<Coeff>) -> UniPoly {
        while coeffs.len() > 1 && field.is_zero(coeffs.last().unwrap()) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(field.zero());
        }
        UniPoly { field, coeffs }
    }

    fn degree(&self) -> usize {
        if self.coeffs.len() == 1 && self.field.is_zero(&self.coeffs[0]) {
            0
        } else {
            self.coeffs.len() - 1
        }
    }

    fn is_constant(&self) -> bool {
        self.degree() == 0
    }

    /// Remainder-checked exact division; None when not divisible.
    fn divide_exact(&self, den: &UniPoly) -> Option<UniPoly> {
        let f = self.field;
        let dn = den.degree();
        if self.degree() < dn {
            return None;
        }
        let mut rem = self.coeffs.clone();
        let mut quot = vec![f.zero(); self.degree() - dn + 1];
        let lead_inv = f.inv(den.coeffs.last().unwrap()).ok()?;
        for k in (0..quot.len()).rev() {
            let c = f.mul(&rem[k + dn], &lead_inv);
            if !f.is_zero(&c) {
                for (j, dc) in den.coeffs.iter().enumerate() {
                    rem[k + j] = f.sub(&rem[k + j], &f.mul(&c, dc));
                }
            }
            quot[k] = c;
        }
        if rem.iter().any(|c| !f.is_zero(c)) {
            return None;
        }
        Some(UniPoly::new(f, quot))
    }

    fn eval(&self, x: &Coeff) -> Coeff {
        let f = self.field;
        let mut acc = f.zero();
        for c in self.coeffs.iter().rev() {
            acc = f.add(&f.mul(&acc, x), c);
        }
        acc
    }

    fn display(&self, var: &str) -> String {
        let f = self.field;
        let mut parts = Vec::new();
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if f.is_zero(c) {
                continue;
            }
            let body = match i {
                0 => c.to_string(),
                1 if c.is_one() => var.to_string(),
                1 => format!("{c}*{var}"),
                _ if c.is_one() => format!("{var}^{i}"),
                _ => format!("{c}*{var}^{i}"),
            };
            parts.push(body);
        }
        if parts.is_empty() {
            "0".to_string()
        } else {
            parts.join(" + ")
        }
    }
}

/// Monic irreducible factorization over F_p (p small) by trial division in
/// increasing degree, or rational-root extraction over Q.
fn factor_fiber(g: &UniPoly) -> Result<Vec<(UniPoly, u32)>, Error> {
    let field = g.field;
    match field.characteristic() {
        0 => factor_rational_roots(g),
        p if p <= 7 => Ok(factor_brute_force(g, p)),
        p => Err(Error::FactorBudget(format!("brute-force factorization limited to p <= 7, got {p}"))),
    }
}

fn factor_brute_force(g: &UniPoly, p: u32) -> Vec<(UniPoly, u32)> {
    let field = g.field;
    let mut rem = g.clone();
    let mut out: Vec<(UniPoly, u32)> = Vec::new();
    let mut d = 1usize;
    while !rem.is_constant() {
        // monic candidates of degree d, lexicographic in low coefficients
        let count = (p as u64).pow(d as u32);
        for code in 0..count {
            let mut coeffs = Vec::with_capacity(d + 1);
            let mut c = code;
            for _ in 0..d {
                coeffs.push(field.from_i64((c % p as u64) as i64));
                c /= p as u64;
            }
            coeffs.push(field.one());
            let cand = UniPoly::new(field, coeffs);
            let mut mult = 0u32;
            while let Some(q) = rem.divide_exact(&cand) {
                rem = q;
                mult += 1;
            }
            if mult > 0 {
                out.push((cand, mult));
            }
            if rem.is_constant() {
                break;
            }
        }
        d += 1;
    }
    out
}

fn factor_rational_roots(g: &UniPoly) -> Result<Vec<(UniPoly, u32)>, Error> {
    use num::bigint::BigInt;
    use num::rational::BigRational;
    use num::traits::Signed;

    let field = g.field;
    let mut rem = g.clone();
    let mut out: Vec<(UniPoly, u32)> = Vec::new();

    // root 0 first
    let mut mult0 = 0u32;
    while !rem.is_constant() && field.is_zero(&rem.coeffs[0]) {
        rem = UniPoly::new(field, rem.coeffs[1..].to_vec());
        mult0 += 1;
    }
    if mult0 > 0 {
        out.push((UniPoly::new(field, vec![field.zero(), field.one()]), mult0));
    }

    while !rem.is_constant() {
        // clear denominators and enumerate rational-root candidates
        let rats: Vec<BigRational> = rem
            .coeffs
            .iter()
            .map(|c| match c {
                Coeff::Q(q) => q.clone(),
                Coeff::Fp(_) => unreachable!(),
            })
            .collect();
        let mut denom_lcm = BigInt::from(1);
        for q in &rats {
            let d = q.denom();
            denom_lcm = num::integer::lcm(denom_lcm.clone(), d.clone());
        }
        let ints: Vec<BigInt> = rats
            .iter()
            .map(|q| (q * BigRational::from_integer(denom_lcm.clone())).to_integer())
            .collect();
        let lead = ints.last().unwrap().abs();
        let constant = ints.first().unwrap().abs();
        let mut found = None;
        'search: for pnum in divisors(&constant) {
            for qden in divisors(&lead) {
                for sign in [1i32, -1] {
                    let cand = BigRational::new(BigInt::from(sign) * pnum.clone(), qden.clone());
                    let c = Coeff::Q(cand);
                    if field.is_zero(&rem.eval(&c)) {
                        found = Some(c);
                        break 'search;
                    }
                }
            }
        }
        let root = found.ok_or_else(|| {
            Error::FactorBudget(format!(
                "fiber polynomial has an irrational factor of degree {}; only rational-root fibers are supported over Q",
                rem.degree()
            ))
        })?;
        let factor = UniPoly::new(field, vec![field.neg(&root), field.one()]);
        let mut mult = 0u32;
        while let Some(q) = rem.divide_exact(&factor) {
            rem = q;
            mult += 1;
        }
        out.push((factor, mult));
    }
    Ok(out)
}

fn divisors(n: &num::bigint::BigInt) -> Vec<num::bigint::BigInt> {
    use num::bigint::BigInt;
    use num::traits::Zero;
    if n.is_zero() {
        return vec![BigInt::from(1)];
    }
    let mut out = Vec::new();
    let mut d = BigInt::from(1);
    while &d * &d <= *n {
        if (n % &d).is_zero() {
            out.push(d.clone());
            let other = n / &d;
            if other != d {
                out.push(other);
            }
        }
        d += 1;
    }
    out.sort();
    out
}

#[derive(Clone, Debug)]
pub struct ZariskiReport {
    pub fiber_point: String,
    pub fiber_polynomial: String,
    /// (printed factor, exponent e_i, residue degree [k_i : k])
    pub factors: Vec<(String, u32, u32)>,
    pub weighted_sum: u32,
    pub expected_degree: u32,
    pub pass: bool,
}

/// Zariski's multiplicity formula for a plane curve finite over the x-line,
/// at the fiber x = a: sum of e_i * [k_i : k] must equal deg_y f.
pub fn zariski_fiber_check(f: &Polynomial, a: &Coeff) -> Result<ZariskiReport, Error> {
    let ring = f.ring();
    if ring.dim() != 2 {
        return Err(Error::Scenario("Zariski fiber check needs a plane curve in two variables".into()));
    }
    let field = *ring.field();
    let y = 1usize;
    let deg = f.degree_in(y).unwrap_or(0);
    let lead = f.coefficient_of(y, deg);
    if deg < 1 || !lead.is_constant() || lead.leading_coeff().map(|c| !c.is_one()).unwrap_or(true) {
        return Err(Error::NotMonic(ring.vars()[y].clone()));
    }
    let fiber = f.eval_var(0, a);
    let coeffs: Vec<Coeff> = (0..=deg).map(|k| {
        let c = fiber.coefficient_of(y, k);
        c.leading_coeff().cloned().unwrap_or_else(|| field.zero())
    }).collect();
    let g = UniPoly::new(field, coeffs);
    let factors = factor_fiber(&g)?;
    let weighted_sum: u32 = factors.iter().map(|(p, e)| e * p.degree() as u32).sum();
    let yname = &ring.vars()[y];
    Ok(ZariskiReport {
        fiber_point: a.to_string(),
        fiber_polynomial: g.display(yname),
        factors: factors
            .iter()
            .map(|(p, e)| (p.display(yname), *e, p.degree() as u32))
            .collect(),
        weighted_sum,
        expected_degree: deg,
        pass: weighted_sum == deg,
    })
}

// ---------------------------------------------------------------------------
// The main-theorem harness.

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RowVerdict {
    Equal,
    Mismatch,
    Inconclusive,
}

#[derive(Clone, Debug)]
pub struct ComparisonRow {
    pub arc_label: String,
    pub nu_source: OrderValue,
    pub nu_target: OrderValue,
    pub report_source: PersistenceReport,
    pub report_target: PersistenceReport,
    pub oracle_source: Option<OracleOutcome>,
    pub oracle_target: Option<OracleOutcome>,
    pub verdict: RowVerdict,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Verdict {
    AllEqual,
    Mismatch { witness: String },
    Inconclusive,
}

#[derive(Clone, Debug)]
pub struct ComparisonReport {
    pub rows: Vec<ComparisonRow>,
    pub verdict: Verdict,
}

/// Samples the main persistence-equality criterion: for each arc on X',
/// compares rho against rho of the pushforward on X, by the formula and
/// optionally by the directed blow-up oracle. AllEqual is sampled evidence
/// for finiteness of G_X in G_X'; a mismatch row is a disproof.
pub fn persistence_compare(
    spec: &FiniteMorphismSpec,
    arcs: &[(String, Arc)],
    oracle: Option<&OracleConfig>,
) -> Result<ComparisonReport, Error> {
    let g_source = spec.source().local_presentation()?;
    let g_target = spec.target().local_presentation()?;
    let mut rows = Vec::new();
    for (label, phi) in arcs {
        phi.validate_on_variety(&spec.source().defining_polynomials())?;
        let center_source = phi.center();
        if !g_source.in_singular_locus(&center_source)? {
            return Err(Error::CenterNotSingular);
        }
        let report_source = phi.persistence_invariants(&g_source, &center_source)?;
        let pushed = spec.pushforward(phi)?;
        let center_target = pushed.center();
        let report_target = pushed.persistence_invariants(&g_target, &center_target)?;

        let (oracle_source, oracle_target) = match oracle {
            Some(cfg) => (
                Some(persistence_oracle(phi, &g_source, &center_source, cfg)?),
                Some(persistence_oracle(&pushed, &g_target, &center_target, cfg)?),
            ),
            None => (None, None),
        };

        let verdict = match (report_source.rho(), report_target.rho()) {
            (Some(a), Some(b)) if a == b => RowVerdict::Equal,
            (Some(_), Some(_)) => RowVerdict::Mismatch,
            _ => RowVerdict::Inconclusive,
        };
        rows.push(ComparisonRow {
            arc_label: label.clone(),
            nu_source: report_source.nu_t,
            nu_target: report_target.nu_t,
            report_source,
            report_target,
            oracle_source,
            oracle_target,
            verdict,
        });
    }
    let verdict = if rows.iter().any(|r| r.verdict == RowVerdict::Mismatch) {
        let w = rows.iter().find(|r| r.verdict == RowVerdict::Mismatch).unwrap();
        Verdict::Mismatch { witness: w.arc_label.clone() }
    } else if rows.iter().any(|r| r.verdict == RowVerdict::Inconclusive) {
        Verdict::Inconclusive
    } else {
        Verdict::AllEqual
    };
    Ok(ComparisonReport { rows, verdict })
}

#[derive(Clone, Debug)]
pub struct OrderEqualityRow {
    pub arc_label: String,
    pub ord_small: ArcOrder,
    pub ord_large: ArcOrder,
    pub verdict: RowVerdict,
}

#[derive(Clone, Debug)]
pub struct OrderEqualityReport {
    pub rows: Vec<OrderEqualityRow>,
    pub verdict: Verdict,
    /// This is a sampled necessary condition for integral/finite extension,
    /// not a decision procedure.
    pub note: &'static str,
}

/// Compares ord_t(phi(G1)) against ord_t(phi(G2)) where G1's generators are
/// a subset of G2's. Equality across the family is consistent with an
/// integral extension; any strict drop is a witness against it.
pub fn arcwise_order_equality(
    g1: &ReesAlgebra,
    g2: &ReesAlgebra,
    arcs: &[(String, Arc)],
) -> Result<OrderEqualityReport, Error> {
    for gen in g1.generators() {
        if !g2.generators().contains(gen) {
            return Err(Error::Scenario(
                "the smaller algebra's generators must be a subset of the larger's".into(),
            ));
        }
    }
    let mut rows = Vec::new();
    for (label, phi) in arcs {
        let ord_small = phi.ord_rees(g1)?;
        let ord_large = phi.ord_rees(g2)?;
        let verdict = match (ord_small, ord_large) {
            (ArcOrder::Finite(a), ArcOrder::Finite(b)) if a == b => RowVerdict::Equal,
            (ArcOrder::Finite(_), ArcOrder::Finite(_)) => RowVerdict::Mismatch,
            _ => RowVerdict::Inconclusive,
        };
        rows.push(OrderEqualityRow { arc_label: label.clone(), ord_small, ord_large, verdict });
    }
    let verdict = if rows.iter().any(|r| r.verdict == RowVerdict::Mismatch) {
        let w = rows.iter().find(|r| r.verdict == RowVerdict::Mismatch).unwrap();
        Verdict::Mismatch { witness: w.arc_label.clone() }
    } else if rows.iter().any(|r| r.verdict == RowVerdict::Inconclusive) {
        Verdict::Inconclusive
    } else {
        Verdict::AllEqual
    };
    Ok(OrderEqualityReport {
        rows,
        verdict,
        note: "sampled necessary condition for integral/finite extension, not a decision procedure",
    })
}
