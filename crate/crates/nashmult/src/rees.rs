//! Rees algebras on smooth ambient space, presented by weighted generators:
//! order function, singular locus, differential saturation and the weighted
//! blow-up transform.

use crate::error::Error;
use crate::field::{Coeff, Rational};
use crate::order::{OrderValue, ReesOrder};
use crate::poly::{Polynomial, Ring};

/// Budget for brute-force singular-locus enumeration over F_p grids.
#[derive(Clone, Copy, Debug)]
pub struct EnumBudget {
    pub max_dim: usize,
    pub max_points: u64,
}

impl Default for EnumBudget {
    fn default() -> Self {
        let max_points = std::env::var("NASHMULT_SING_BUDGET")
            .ok()
            .and_then(|v| v.parse().ok())
            .unwrap_or(1_000_000);
        EnumBudget { max_dim: 4, max_points }
    }
}

/// G = R[f_1 W^{n_1}, ..., f_r W^{n_r}]: a finite list of weighted
/// generators over a fixed ambient ring.
#[derive(Clone, PartialEq, Debug)]
pub struct ReesAlgebra {
    ring: Ring,
    gens: Vec<(Polynomial, u32)>,
}

impl ReesAlgebra {
    pub fn new(ring: Ring, gens: Vec<(Polynomial, u32)>) -> Result<ReesAlgebra, Error> {
        for (f, n) in &gens {
            if *n == 0 {
                return Err(Error::ZeroWeight);
            }
            if f.is_zero() {
                return Err(Error::ZeroGenerator);
            }
            if f.ring() != &ring {
                return Err(Error::Scenario("generator ambient differs from algebra ambient".into()));
            }
        }
        Ok(ReesAlgebra { ring, gens })
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn generators(&self) -> &[(Polynomial, u32)] {
        &self.gens
    }

    /// Hironaka order at a rational point: min_i nu_xi(f_i)/n_i.
    pub fn order_at_point(&self, xi: &[Coeff]) -> Result<ReesOrder, Error> {
        let mut best: Option<Rational> = None;
        for (f, n) in &self.gens {
            match f.order_at(xi)? {
                OrderValue::Finite(v) => {
                    let q = Rational::new(v as i64, *n as i64);
                    best = Some(match best {
                        Some(b) if b <= q => b,
                        _ => q,
                    });
                }
                OrderValue::Infinity => {}
                OrderValue::Inconclusive(_) => unreachable!("polynomial orders are decidable"),
            }
        }
        Ok(match best {
            Some(q) => ReesOrder::Finite(q),
            None => ReesOrder::Infinity,
        })
    }

    /// Generator criterion for Sing(G): nu_xi(f_i) >= n_i for every i.
    pub fn in_singular_locus(&self, xi: &[Coeff]) -> Result<bool, Error> {
        for (f, n) in &self.gens {
            match f.order_at(xi)? {
                OrderValue::Finite(v) if v < *n => return Ok(false),
                _ => {}
            }
        }
        Ok(true)
    }

    /// All F_p-rational points of Sing(G), by exhaustive grid search.
    pub fn singular_locus_enumerate(&self, budget: &EnumBudget) -> Result<Vec<Vec<Coeff>>, Error> {
        let field = self.ring.field();
        let p = field.characteristic();
        if p == 0 {
            return Err(Error::BudgetExceeded("enumeration needs a finite field".into()));
        }
        let dim = self.ring.dim();
        if dim > budget.max_dim {
            return Err(Error::BudgetExceeded(format!(
                "ambient dimension {dim} exceeds bound {}",
                budget.max_dim
            )));
        }
        let total = (p as u64).checked_pow(dim as u32);
        match total {
            Some(t) if t <= budget.max_points => {}
            _ => {
                return Err(Error::BudgetExceeded(format!(
                    "{p}^{dim} exceeds point budget {}",
                    budget.max_points
                )))
            }
        }
        let elems = field.elements();
        let mut out = Vec::new();
        let mut idx = vec![0usize; dim];
        loop {
            let point: Vec<Coeff> = idx.iter().map(|&i| elems[i].clone()).collect();
            if self.in_singular_locus(&point)? {
                out.push(point);
            }
            // odometer over the grid
            let mut k = dim;
            loop {
                if k == 0 {
                    return Ok(out);
                }
                k -= 1;
                idx[k] += 1;
                if idx[k] < elems.len() {
                    break;
                }
                idx[k] = 0;
            }
        }
    }

    /// Differential saturation with divided-power (Hasse) operators: for
    /// each generator (f, n) and each multi-index of total order a < n,
    /// adds (D^{(a)}f, n - a), dropping zero results.
    pub fn diff_saturate(&self) -> ReesAlgebra {
        let dim = self.ring.dim();
        let mut gens: Vec<(Polynomial, u32)> = Vec::new();
        let push = |f: Polynomial, n: u32, gens: &mut Vec<(Polynomial, u32)>| {
            if !f.is_zero() && n >= 1 && !gens.iter().any(|(g, m)| g == &f && *m == n) {
                gens.push((f, n));
            }
        };
        for (f, n) in &self.gens {
            let mut index = vec![0u32; dim];
            loop {
                let total: u32 = index.iter().sum();
                if total < *n {
                    let mut d = f.clone();
                    for (var, &a) in index.iter().enumerate() {
                        if a > 0 && !d.is_zero() {
                            d = d.hasse_derivative(var, a);
                        }
                    }
                    push(d, n - total, &mut gens);
                }
                // next multi-index with entries bounded by n-1
                let mut k = dim;
                let mut done = false;
                loop {
                    if k == 0 {
                        done = true;
                        break;
                    }
                    k -= 1;
                    index[k] += 1;
                    if index[k] < *n {
                        break;
                    }
                    index[k] = 0;
                }
                if done {
                    break;
                }
            }
        }
        ReesAlgebra { ring: self.ring.clone(), gens }
    }

    /// Generator set up to scaling: monic representatives, sorted, deduped.
    pub fn canonical_generators(&self) -> Vec<(String, u32)> {
        let mut out: Vec<(String, u32)> = self
            .gens
            .iter()
            .map(|(f, n)| (f.monic().to_string(), *n))
            .collect();
        out.sort();
        out.dedup();
        out
    }

    /// Same generators over the ambient extended by one fresh variable
    /// (the affine-line factor of Hickel's construction).
    pub fn extend_with_line(&self, name: &str) -> Result<ReesAlgebra, Error> {
        let ring = self.ring.extend(name)?;
        let gens = self
            .gens
            .iter()
            .map(|(f, n)| (f.lift_to(&ring), *n))
            .collect();
        Ok(ReesAlgebra { ring, gens })
    }

    /// Weighted transform under the blow-up at a rational point center, in
    /// the chart of the given variable: pull back each generator and divide
    /// exactly by chart^weight.
    pub fn transform_blowup(&self, center: &[Coeff], chart: usize) -> Result<ReesAlgebra, Error> {
        if !self.in_singular_locus(center)? {
            return Err(Error::CenterNotSingular);
        }
        let mut gens = Vec::with_capacity(self.gens.len());
        for (f, n) in &self.gens {
            let pulled = f.translate(center)?.blowup_substitute(chart);
            let transformed = pulled.divide_by_var_power(chart, *n)?;
            if transformed.is_zero() {
                return Err(Error::ZeroGenerator);
            }
            gens.push((transformed, *n));
        }
        Ok(ReesAlgebra { ring: self.ring.clone(), gens })
    }
}
