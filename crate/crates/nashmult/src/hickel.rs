//! The independent oracle: persistence and Nash multiplicity sequences
//! computed by the sequence of point blow-ups directed by an arc on
//! X x A^1, following Hickel's construction.

use crate::arc::Arc;
use crate::error::Error;
use crate::field::Coeff;
use crate::order::OrderValue;
use crate::poly::Polynomial;
use crate::rees::ReesAlgebra;
use crate::series::TruncatedSeries;

#[derive(Clone, Copy, Debug)]
pub struct OracleConfig {
    pub max_steps: usize,
    pub precision_floor: u32,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig { max_steps: 64, precision_floor: 4 }
    }
}

/// One node of the directed blow-up diagram: the transformed algebra, the
/// lifted arc, its center and the chart trace so far.
#[derive(Clone, Debug)]
pub struct DirectedBlowupState {
    pub algebra: ReesAlgebra,
    pub arc: Arc,
    pub center: Vec<Coeff>,
    pub step: usize,
    pub trace: Vec<usize>,
}

impl DirectedBlowupState {
    pub fn at_maximal_multiplicity(&self) -> Result<bool, Error> {
        self.algebra.in_singular_locus(&self.center)
    }
}

/// Builds the step-0 state: algebra on V x A^1, arc phi x t, center (xi, 0).
pub fn init_state(phi: &Arc, algebra: &ReesAlgebra, xi: &[Coeff]) -> Result<DirectedBlowupState, Error> {
    if phi.center() != xi {
        return Err(Error::CenterMismatch);
    }
    if !algebra.in_singular_locus(xi)? {
        return Err(Error::CenterNotSingular);
    }
    let line = algebra.ring().fresh_var();
    let extended_algebra = algebra.extend_with_line(&line)?;
    let field = *algebra.ring().field();
    let arc = phi.extend_with_series(&line, TruncatedSeries::identity(field, phi.precision()))?;
    let center = arc.center();
    Ok(DirectedBlowupState { algebra: extended_algebra, arc, center, step: 0, trace: Vec::new() })
}

/// Chart choice: coordinate of minimal positive order of the recentered
/// arc, ties broken by lowest variable index.
fn select_chart(recentered: &[TruncatedSeries], step: usize) -> Result<(usize, u32), Error> {
    let mut best: Option<(usize, u32)> = None;
    for (i, s) in recentered.iter().enumerate() {
        if let OrderValue::Finite(d) = s.order() {
            debug_assert!(d >= 1, "recentered series has a constant term");
            if best.map_or(true, |(_, bd)| d < bd) {
                best = Some((i, d));
            }
        }
    }
    best.ok_or_else(|| Error::PrecisionExhausted {
        step,
        retry: recentered.first().map(|s| s.precision() * 2).unwrap_or(2),
    })
}

/// One blow-up of the directed sequence: transform the algebra at the
/// center, lift the arc by exact truncated division, recenter.
pub fn directed_step(
    state: &DirectedBlowupState,
    config: &OracleConfig,
) -> Result<DirectedBlowupState, Error> {
    let recentered: Vec<TruncatedSeries> = state
        .arc
        .series()
        .iter()
        .zip(&state.center)
        .map(|(s, c)| s.sub_constant(c))
        .collect();
    let (chart, d) = select_chart(&recentered, state.step)?;
    let precision = state.arc.precision();
    if precision <= d || precision - d < config.precision_floor {
        return Err(Error::PrecisionExhausted { step: state.step, retry: precision * 2 });
    }

    let algebra = state.algebra.transform_blowup(&state.center, chart)?;

    let pivot = &recentered[chart];
    let mut lifted = Vec::with_capacity(recentered.len());
    for (i, s) in recentered.iter().enumerate() {
        if i == chart {
            lifted.push(pivot.truncate(precision - d));
        } else {
            lifted.push(s.div_exact(pivot)?);
        }
    }
    let arc = Arc::new(state.arc.ring().clone(), lifted)?;
    let center = arc.center();
    let mut trace = state.trace.clone();
    trace.push(chart);
    Ok(DirectedBlowupState { algebra, arc, center, step: state.step + 1, trace })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OracleOutcome {
    /// Least i >= 1 with the lifted center outside Sing of the transform.
    Dropped(usize),
    DidNotDrop { max_steps: usize },
}

/// Persistence by the directed blow-up sequence at Rees-algebra level.
/// The caller passes a differentially saturated algebra.
pub fn persistence_oracle(
    phi: &Arc,
    algebra: &ReesAlgebra,
    xi: &[Coeff],
    config: &OracleConfig,
) -> Result<OracleOutcome, Error> {
    let mut state = init_state(phi, algebra, xi)?;
    for i in 1..=config.max_steps {
        state = directed_step(&state, config)?;
        if !state.at_maximal_multiplicity()? {
            return Ok(OracleOutcome::Dropped(i));
        }
    }
    Ok(OracleOutcome::DidNotDrop { max_steps: config.max_steps })
}

/// A step-by-step trace row for reporting.
#[derive(Clone, Debug)]
pub struct TraceRow {
    pub step: usize,
    pub chart: Option<String>,
    pub center: Vec<Coeff>,
    pub in_singular_locus: bool,
    pub generator_orders: Vec<OrderValue>,
}

/// Runs the directed sequence and records one row per state, stopping at
/// the first drop or after max_steps.
pub fn persistence_trace(
    phi: &Arc,
    algebra: &ReesAlgebra,
    xi: &[Coeff],
    config: &OracleConfig,
) -> Result<(Vec<TraceRow>, OracleOutcome), Error> {
    let mut rows = Vec::new();
    let mut state = init_state(phi, algebra, xi)?;
    let record = |state: &DirectedBlowupState, chart: Option<usize>| -> Result<TraceRow, Error> {
        let orders = state
            .algebra
            .generators()
            .iter()
            .map(|(f, _)| f.order_at(&state.center))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(TraceRow {
            step: state.step,
            chart: chart.map(|c| state.algebra.ring().vars()[c].clone()),
            center: state.center.clone(),
            in_singular_locus: state.at_maximal_multiplicity()?,
            generator_orders: orders,
        })
    };
    rows.push(record(&state, None)?);
    for i in 1..=config.max_steps {
        state = directed_step(&state, config)?;
        rows.push(record(&state, state.trace.last().copied())?);
        if !state.at_maximal_multiplicity()? {
            return Ok((rows, OracleOutcome::Dropped(i)));
        }
    }
    Ok((rows, OracleOutcome::DidNotDrop { max_steps: config.max_steps }))
}

/// Nash multiplicity sequence for a hypersurface: multiplicities of the
/// strict transforms of F along the directed sequence, up to the first
/// strict drop.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NashSequence {
    pub values: Vec<u32>,
    /// Step index of the first strict drop, when one was reached.
    pub dropped_at: Option<usize>,
}

pub fn nash_sequence_hypersurface(
    phi: &Arc,
    f: &Polynomial,
    xi: &[Coeff],
    config: &OracleConfig,
) -> Result<NashSequence, Error> {
    if phi.center() != xi {
        return Err(Error::CenterMismatch);
    }
    phi.validate_on_variety(std::slice::from_ref(f))?;
    let m0 = match f.order_at(xi)? {
        OrderValue::Finite(m) if m >= 2 => m,
        OrderValue::Finite(m) => return Err(Error::SmoothPoint(m as u64)),
        _ => return Err(Error::ZeroGenerator),
    };

    let line = f.ring().fresh_var();
    let ring = f.ring().extend(&line)?;
    let field = *ring.field();
    let mut strict = f.lift_to(&ring);
    let mut arc = phi.extend_with_series(&line, TruncatedSeries::identity(field, phi.precision()))?;
    let mut center = arc.center();

    let mut values = vec![m0];
    for step in 0..config.max_steps {
        let recentered: Vec<TruncatedSeries> = arc
            .series()
            .iter()
            .zip(&center)
            .map(|(s, c)| s.sub_constant(c))
            .collect();
        let (chart, d) = select_chart(&recentered, step)?;
        let precision = arc.precision();
        if precision <= d || precision - d < config.precision_floor {
            return Err(Error::PrecisionExhausted { step, retry: precision * 2 });
        }

        // full strict transform: divide by the maximal exact power
        let pulled = strict.translate(&center)?.blowup_substitute(chart);
        let exact_power = pulled.min_exponent(chart).unwrap_or(0);
        strict = pulled.divide_by_var_power(chart, exact_power)?;

        let pivot = &recentered[chart];
        let mut lifted = Vec::with_capacity(recentered.len());
        for (i, s) in recentered.iter().enumerate() {
            if i == chart {
                lifted.push(pivot.truncate(precision - d));
            } else {
                lifted.push(s.div_exact(pivot)?);
            }
        }
        arc = Arc::new(ring.clone(), lifted)?;
        center = arc.center();

        let m = match strict.order_at(&center)? {
            OrderValue::Finite(m) => m,
            _ => return Err(Error::ZeroGenerator),
        };
        if m > *values.last().unwrap() {
            return Err(Error::Scenario(format!(
                "Nash sequence increased from {} to {m} at step {}",
                values.last().unwrap(),
                step + 1
            )));
        }
        values.push(m);
        if m < m0 {
            return Ok(NashSequence { values, dropped_at: Some(step + 1) });
        }
    }
    Ok(NashSequence { values, dropped_at: None })
}
