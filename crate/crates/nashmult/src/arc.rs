//! Arcs in ambient coordinates, evaluation of Rees algebras along arcs,
//! reparametrization, and the persistence invariants computed by the
//! closed formula r = ord_t(phi(G)), rho = floor(r).


use crate::error::Error;
use crate::field::{Coeff, Rational};
use crate::order::{ArcOrder, OrderValue};
use crate::poly::{Polynomial, Ring};
use crate::rees::ReesAlgebra;
use crate::series::{eval_poly, TruncatedSeries};

/// One truncated series per ambient coordinate, all at a common precision.
#[derive(Clone, PartialEq, Debug)]
pub struct Arc {
    ring: Ring,
    series: Vec<TruncatedSeries>,
}

impl Arc {
    pub fn new(ring: Ring, series: Vec<TruncatedSeries>) -> Result<Arc, Error> {
        if series.len() != ring.dim() {
            return Err(Error::VariableMismatch { expected: ring.dim(), got: series.len() });
        }
        if let Some(first) = series.first() {
            if first.field() != ring.field() {
                return Err(Error::Scenario("arc series field differs from ambient field".into()));
            }
            for s in &series {
                if s.precision() != first.precision() {
                    return Err(Error::PrecisionMismatch(first.precision(), s.precision()));
                }
            }
        }
        Ok(Arc { ring, series })
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn series(&self) -> &[TruncatedSeries] {
        &self.series
    }

    pub fn precision(&self) -> u32 {
        self.series.first().map(|s| s.precision()).unwrap_or(1)
    }

    /// Constant terms: the image of the closed point.
    pub fn center(&self) -> Vec<Coeff> {
        self.series.iter().map(|s| s.constant_term().clone()).collect()
    }

    /// Checks that every defining polynomial evaluates to zero up to the
    /// arc's precision; reports the first violation.
    pub fn validate_on_variety(&self, defining: &[Polynomial]) -> Result<(), Error> {
        let field = self.ring.field();
        for f in defining {
            let v = eval_poly(f, &self.series)?;
            for i in 0..v.precision() {
                if !field.is_zero(v.coeff(i)) {
                    return Err(Error::ArcOffVariety { poly: f.to_string(), index: i });
                }
            }
        }
        Ok(())
    }

    pub fn is_on_variety(&self, defining: &[Polynomial]) -> bool {
        self.validate_on_variety(defining).is_ok()
    }

    /// Order nu_t of the arc at its center: least order among the
    /// recentered coordinate series.
    pub fn nu_t(&self, xi: &[Coeff]) -> Result<OrderValue, Error> {
        if self.center() != xi {
            return Err(Error::CenterMismatch);
        }
        let mut best: Option<u32> = None;
        for (s, c) in self.series.iter().zip(xi) {
            if let OrderValue::Finite(v) = s.sub_constant(c).order() {
                best = Some(best.map_or(v, |b| b.min(v)));
            }
        }
        Ok(match best {
            Some(v) => OrderValue::Finite(v),
            None => OrderValue::Inconclusive(self.precision()),
        })
    }

    /// phi_n = phi composed with t -> t^n.
    pub fn reparametrize(&self, n: u32) -> Result<Arc, Error> {
        let series = self
            .series
            .iter()
            .map(|s| s.reparametrize(n))
            .collect::<Result<Vec<_>, _>>()?;
        Arc::new(self.ring.clone(), series)
    }

    /// ord_t(phi(G)) = min_i nu_t(phi(g_i)) / b_i. Inconclusive when the
    /// witnessed minimum cannot be certified at the arc's precision.
    pub fn ord_rees(&self, algebra: &ReesAlgebra) -> Result<ArcOrder, Error> {
        if algebra.ring() != &self.ring {
            return Err(Error::Scenario("algebra ambient differs from arc ambient".into()));
        }
        let mut best_finite: Option<Rational> = None;
        let mut best_bound: Option<Rational> = None;
        for (g, b) in algebra.generators() {
            let v = eval_poly(g, &self.series)?;
            match v.order() {
                OrderValue::Finite(k) => {
                    let q = Rational::new(k as i64, *b as i64);
                    best_finite = Some(best_finite.map_or(q, |x| x.min(q)));
                }
                OrderValue::Inconclusive(n) => {
                    let q = Rational::new(n as i64, *b as i64);
                    best_bound = Some(best_bound.map_or(q, |x| x.min(q)));
                }
                OrderValue::Infinity => unreachable!(),
            }
        }
        Ok(match (best_finite, best_bound) {
            (Some(f), Some(bound)) if f <= bound => ArcOrder::Finite(f),
            (Some(f), None) => ArcOrder::Finite(f),
            (Some(f), Some(bound)) => ArcOrder::Inconclusive { bound: bound.min(f) },
            (None, Some(bound)) => ArcOrder::Inconclusive { bound },
            (None, None) => ArcOrder::Inconclusive { bound: Rational::new(0, 1) },
        })
    }

    /// Keeps the series for the variables of `ring`, which must be a prefix
    /// of this arc's ambient (the coordinate-projection pushforward).
    pub fn project(&self, ring: &Ring) -> Result<Arc, Error> {
        let n = ring.dim();
        if n > self.ring.dim()
            || ring.vars() != &self.ring.vars()[..n]
            || ring.field() != self.ring.field()
        {
            return Err(Error::Scenario(
                "projection target is not a coordinate prefix of the arc ambient".into(),
            ));
        }
        Arc::new(ring.clone(), self.series[..n].to_vec())
    }

    /// Appends one coordinate series (used to form phi x id on X x A^1).
    pub fn extend_with_series(&self, name: &str, s: TruncatedSeries) -> Result<Arc, Error> {
        if s.precision() != self.precision() {
            return Err(Error::PrecisionMismatch(self.precision(), s.precision()));
        }
        let ring = self.ring.extend(name)?;
        let mut series = self.series.clone();
        series.push(s);
        Arc::new(ring, series)
    }

    /// Persistence invariants by the closed formula. The caller supplies a
    /// differentially saturated algebra and the arc's center, which must be
    /// a singular point of it.
    pub fn persistence_invariants(
        &self,
        algebra: &ReesAlgebra,
        xi: &[Coeff],
    ) -> Result<PersistenceReport, Error> {
        if !algebra.in_singular_locus(xi)? {
            return Err(Error::CenterNotSingular);
        }
        let nu_t = self.nu_t(xi)?;
        let ord = self.ord_rees(algebra)?;
        let outcome = match (ord, nu_t) {
            (ArcOrder::Finite(r), OrderValue::Finite(nu)) => {
                let rho = r.floor().to_integer();
                PersistenceOutcome::Conclusive {
                    r,
                    rho,
                    r_bar: r / Rational::new(nu as i64, 1),
                    rho_bar: Rational::new(rho, nu as i64),
                }
            }
            _ => PersistenceOutcome::Undefined {
                witnessed_precision: self.precision(),
                retry_precision: self.precision() * 2,
            },
        };
        Ok(PersistenceReport { nu_t, ord, outcome })
    }
}

/// Result of the formula pipeline for one arc.
#[derive(Clone, Debug, PartialEq)]
pub struct PersistenceReport {
    pub nu_t: OrderValue,
    pub ord: ArcOrder,
    pub outcome: PersistenceOutcome,
}

#[derive(Clone, Debug, PartialEq)]
pub enum PersistenceOutcome {
    Conclusive {
        r: Rational,
        rho: i64,
        r_bar: Rational,
        rho_bar: Rational,
    },
    /// All inspected data vanish to precision: the generic point of the arc
    /// may lie in the top multiplicity stratum.
    Undefined {
        witnessed_precision: u32,
        retry_precision: u32,
    },
}

impl PersistenceReport {
    pub fn rho(&self) -> Option<i64> {
        match &self.outcome {
            PersistenceOutcome::Conclusive { rho, .. } => Some(*rho),
            PersistenceOutcome::Undefined { .. } => None,
        }
    }

    pub fn r(&self) -> Option<Rational> {
        match &self.outcome {
            PersistenceOutcome::Conclusive { r, .. } => Some(*r),
            PersistenceOutcome::Undefined { .. } => None,
        }
    }
}

/// Convenience constructor: an arc whose i-th coordinate is c_i * t^{k_i}.
pub fn monomial_arc(ring: &Ring, powers: &[u32], precision: u32) -> Arc {
    let field = *ring.field();
    let series = powers
        .iter()
        .map(|&k| TruncatedSeries::monomial(field, field.one(), k, precision))
        .collect();
    Arc::new(ring.clone(), series).expect("monomial arc construction")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Field;

    fn qring(vars: &[&str]) -> Ring {
        Ring::new(vars.iter().map(|s| s.to_string()).collect(), Field::rationals()).unwrap()
    }

    fn origin(r: &Ring) -> Vec<Coeff> {
        vec![r.field().zero(); r.dim()]
    }

    #[test]
    fn validate_on_variety_examples() {
        let r = qring(&["x", "y"]);
        let cusp = Polynomial::parse(&r, "x^2 - y^3").unwrap();
        let phi = monomial_arc(&r, &[3, 2], 12);
        assert!(phi.validate_on_variety(&[cusp.clone()]).is_ok());

        let bad = monomial_arc(&r, &[3, 3], 12);
        assert!(matches!(
            bad.validate_on_variety(&[cusp]),
            Err(Error::ArcOffVariety { index: 6, .. })
        ));

        let r3 = qring(&["x", "y", "z"]);
        let umbrella = Polynomial::parse(&r3, "x^2 - z y^2").unwrap();
        let phi3 = monomial_arc(&r3, &[3, 2, 2], 12);
        assert!(phi3.validate_on_variety(&[umbrella]).is_ok());
    }

    #[test]
    fn nu_t_examples() {
        let r = qring(&["x", "y"]);
        let phi = monomial_arc(&r, &[3, 2], 12);
        assert_eq!(phi.nu_t(&origin(&r)).unwrap(), OrderValue::Finite(2));

        let r3 = qring(&["x", "y", "z"]);
        let phi3 = monomial_arc(&r3, &[3, 2, 2], 12);
        assert_eq!(phi3.nu_t(&origin(&r3)).unwrap(), OrderValue::Finite(2));

        let phi_n = phi.reparametrize(2).unwrap();
        assert_eq!(phi_n.nu_t(&origin(&r)).unwrap(), OrderValue::Finite(4));

        let one = r.field().one();
        assert!(matches!(phi.nu_t(&[one, r.field().zero()]), Err(Error::CenterMismatch)));
    }

    #[test]
    fn ord_rees_examples() {
        let r = qring(&["x", "y"]);
        let cusp = ReesAlgebra::new(
            r.clone(),
            vec![(Polynomial::parse(&r, "x^2 - y^3").unwrap(), 2)],
        )
        .unwrap()
        .diff_saturate();
        let phi = monomial_arc(&r, &[3, 2], 12);
        assert_eq!(phi.ord_rees(&cusp).unwrap(), ArcOrder::Finite(Rational::new(3, 1)));

        let r1 = qring(&["x"]);
        let line = ReesAlgebra::new(r1.clone(), vec![(Polynomial::parse(&r1, "x").unwrap(), 1)]).unwrap();
        let t = monomial_arc(&r1, &[1], 8);
        assert_eq!(t.ord_rees(&line).unwrap(), ArcOrder::Finite(Rational::new(1, 1)));
    }

    #[test]
    fn ord_rees_char2_cusp() {
        let f2 = Field::prime(2).unwrap();
        let r = Ring::new(vec!["x".into(), "y".into()], f2).unwrap();
        let cusp = ReesAlgebra::new(
            r.clone(),
            vec![(Polynomial::parse(&r, "x^2 - y^3").unwrap(), 2)],
        )
        .unwrap()
        .diff_saturate();
        let phi = monomial_arc(&r, &[3, 2], 12);
        // only the surviving Hasse generator y^2 contributes: order 4
        assert_eq!(phi.ord_rees(&cusp).unwrap(), ArcOrder::Finite(Rational::new(4, 1)));
    }

    #[test]
    fn reparametrization_scales_ord() {
        let r1 = qring(&["x"]);
        let line = ReesAlgebra::new(r1.clone(), vec![(Polynomial::parse(&r1, "x").unwrap(), 1)]).unwrap();
        let phi = monomial_arc(&r1, &[1], 8);
        let phi2 = phi.reparametrize(2).unwrap();
        assert_eq!(phi2.ord_rees(&line).unwrap(), ArcOrder::Finite(Rational::new(2, 1)));
    }

    #[test]
    fn persistence_cusp_anchor() {
        let r = qring(&["x", "y"]);
        let cusp = ReesAlgebra::new(
            r.clone(),
            vec![(Polynomial::parse(&r, "x^2 - y^3").unwrap(), 2)],
        )
        .unwrap()
        .diff_saturate();
        let phi = monomial_arc(&r, &[3, 2], 12);
        let report = phi.persistence_invariants(&cusp, &origin(&r)).unwrap();
        assert_eq!(report.nu_t, OrderValue::Finite(2));
        match report.outcome {
            PersistenceOutcome::Conclusive { r, rho, r_bar, rho_bar } => {
                assert_eq!(r, Rational::new(3, 1));
                assert_eq!(rho, 3);
                assert_eq!(r_bar, Rational::new(3, 2));
                assert_eq!(rho_bar, Rational::new(3, 2));
            }
            _ => panic!("expected conclusive report"),
        }
    }

    #[test]
    fn persistence_degenerate_arc_is_undefined() {
        let r = qring(&["x", "y"]);
        let g = ReesAlgebra::new(r.clone(), vec![(Polynomial::parse(&r, "x^2").unwrap(), 2)])
            .unwrap()
            .diff_saturate();
        // the arc (0, t) lies inside the multiplicity-2 locus x = 0
        let field = *r.field();
        let phi = Arc::new(
            r.clone(),
            vec![
                TruncatedSeries::zero(field, 12),
                TruncatedSeries::identity(field, 12),
            ],
        )
        .unwrap();
        let report = phi.persistence_invariants(&g, &origin(&r)).unwrap();
        assert!(matches!(report.outcome, PersistenceOutcome::Undefined { retry_precision: 24, .. }));
    }

    #[test]
    fn persistence_rejects_nonsingular_center() {
        let r = qring(&["x", "y"]);
        let g = ReesAlgebra::new(
            r.clone(),
            vec![(Polynomial::parse(&r, "x^2 - y^3").unwrap(), 2)],
        )
        .unwrap();
        let field = *r.field();
        let one = field.one();
        let phi = Arc::new(
            r.clone(),
            vec![
                TruncatedSeries::monomial(field, one.clone(), 0, 8),
                TruncatedSeries::monomial(field, one.clone(), 0, 8),
            ],
        )
        .unwrap();
        assert!(matches!(
            phi.persistence_invariants(&g, &[one.clone(), one]),
            Err(Error::CenterNotSingular)
        ));
    }

    #[test]
    fn projection_drops_trailing_coordinates() {
        let r3 = qring(&["x", "y", "z"]);
        let r2 = qring(&["x", "y"]);
        let phi = monomial_arc(&r3, &[3, 2, 1], 8);
        let pushed = phi.project(&r2).unwrap();
        assert_eq!(pushed, monomial_arc(&r2, &[3, 2], 8));
        assert_eq!(pushed.center(), phi.center()[..2].to_vec());
    }
}
