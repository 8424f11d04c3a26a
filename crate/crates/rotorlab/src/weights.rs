//! Weight accounting for the P-machine: `W_t`, the quasi-martingale `X_t`,
//! single-chip weight changes `T^j`, per-site contributions `Delta_w`, and
//! the exact telescoping decomposition `sum_w Delta_w = X_n - X_0`.
//!
//! All values are exact rationals; the decomposition is an algebraic
//! identity and is checked with zero tolerance.

use crate::kernel::Kernel;
use crate::lattice::{direction_vector, DirectionIndex, LatticePoint};
use crate::machine::{run, ChipConfig, RationalConfig, RotorField, RunTrace};
use crate::{ExactRational, Result, RotorError};
use num_bigint::BigInt;
use num_traits::Zero;
use rayon::prelude::*;
use std::collections::BTreeMap;

/// `W_t(v, chi) = sum_w chi(w) S_t(v - w)`: the expected number of chips at
/// `v` if the remaining `t` steps were taken by independent random walks.
pub fn weight(kernel: &dyn Kernel, t: u64, v: &LatticePoint, chips: &ChipConfig) -> Result<ExactRational> {
    let mut total = ExactRational::zero();
    for (w, c) in chips.iter() {
        total += kernel.s(t, &v.sub(w))? * ExactRational::from(BigInt::from(c));
    }
    Ok(total)
}

/// `W_t` for signed rational configurations (conjecture scans).
pub fn weight_signed(kernel: &dyn Kernel, t: u64, v: &LatticePoint, xi: &RationalConfig) -> Result<ExactRational> {
    let mut total = ExactRational::zero();
    for (w, mass) in xi.iter() {
        total += kernel.s(t, &v.sub(w))? * mass;
    }
    Ok(total)
}

/// The sequence `X_t = W_t(v, chi_t)` for `t = n, n-1, ..., 0`.
pub fn martingale_sequence(kernel: &dyn Kernel, trace: &RunTrace, v: &LatticePoint) -> Result<Vec<ExactRational>> {
    let n = trace.total_time();
    let mut xs = Vec::with_capacity(n as usize + 1);
    for i in 0..=n {
        let t = n - i;
        xs.push(weight(kernel, t, v, trace.config_at(t))?);
    }
    Ok(xs)
}

/// `T^j(w, t) = S_t(w) - S_{t-1}(w - e_j)`: the weight change of a single
/// chip at offset `w` sent in direction `j` with `t` steps remaining.
pub fn t_step(kernel: &dyn Kernel, j: DirectionIndex, w: &LatticePoint, t: u64) -> Result<ExactRational> {
    assert!(t >= 1, "T^j needs at least one step remaining");
    let d = kernel.dim();
    Ok(kernel.s(t, w)? - kernel.s(t - 1, &w.sub(&direction_vector(j, d)))?)
}

/// Total weight contribution from all chips fired out of `v + w`:
/// for each firing event, one `T` term per chip in rotor order.
///
/// A chip fed from rotor state `j` moves to `v + w + e_j`, so its weight
/// change is `S_t(w) - S_{t-1}(w + e_j)`, which is `T` at the paired
/// opposite index (`e_j = -e_{j XOR 1}`). Using `T^j` directly here would
/// mirror the chip's destination and break the telescoping identity.
pub fn delta_w(kernel: &dyn Kernel, trace: &RunTrace, v: &LatticePoint, w: &LatticePoint) -> Result<ExactRational> {
    let d = trace.dim();
    let vertex = v.add(w);
    let m = 2 * d as u64;
    let mut total = ExactRational::zero();
    for ev in trace.events().iter().filter(|e| e.vertex == vertex) {
        for i in 0..ev.chips_fed {
            let j = DirectionIndex(((ev.start_state as u64 + i) % m) as usize);
            total += t_step(kernel, j.opposite(), w, ev.time_remaining)?;
        }
    }
    Ok(total)
}

/// All `Delta_w` for one trace and target, with the verified identity
/// `sum_w Delta_w = X_n - X_0`.
#[derive(Debug, Clone)]
pub struct DeltaReport {
    pub target: LatticePoint,
    pub deltas: BTreeMap<LatticePoint, ExactRational>,
    /// `X_n - X_0`, equal to the sum of all deltas.
    pub weight_change: ExactRational,
}

/// Computes `Delta_w` over every fired vertex and asserts the exact
/// telescoping identity. A failure here is an implementation bug.
pub fn decomposition_check(kernel: &dyn Kernel, trace: &RunTrace, v: &LatticePoint) -> Result<DeltaReport> {
    let n = trace.total_time();
    let offsets: Vec<LatticePoint> = trace
        .fired_vertices()
        .into_iter()
        .map(|u| u.sub(v))
        .collect();
    let deltas: BTreeMap<LatticePoint, ExactRational> = offsets
        .into_par_iter()
        .map(|w| delta_w(kernel, trace, v, &w).map(|dw| (w, dw)))
        .collect::<Result<_>>()?;
    let x_n = weight(kernel, n, v, trace.initial_config())?;
    let x_0 = ExactRational::from(BigInt::from(trace.final_config().count(v)));
    let weight_change = x_n - x_0;
    let sum: ExactRational = deltas.values().fold(ExactRational::zero(), |a, b| a + b);
    if sum != weight_change {
        return Err(RotorError::IdentityViolation);
    }
    Ok(DeltaReport { target: v.clone(), deltas, weight_change })
}

/// Theorem 1 discrepancy `W_0(v, chi_0) - W_n(v, chi_n)` for one scenario;
/// `W_0(v, chi_0)` is just the final chip count at `v`.
pub fn discrepancy(
    kernel: &dyn Kernel,
    chips: &ChipConfig,
    rotors: &RotorField,
    n: u64,
    v: &LatticePoint,
) -> Result<ExactRational> {
    let trace = run(chips, rotors, n);
    let actual = ExactRational::from(BigInt::from(trace.final_config().count(v)));
    let expected = weight(kernel, n, v, chips)?;
    Ok(actual - expected)
}

/// The d=1 closed form for `T^1`:
/// `T^1(w,t) = 2^{-t+1} C(t-1, (t+w)/2 - 1) * (-w/(t+w))` for `w >= 1`,
/// `t <-> w`, `t >= w`; zero off the light cone.
pub fn t1_closed_form_1d(w: u64, t: u64) -> ExactRational {
    assert!(w >= 1);
    if t < w || (t + w) % 2 != 0 {
        return crate::kernel::closed_form_1d(t, w as i64)
            - crate::kernel::closed_form_1d(t - 1, w as i64 - 1);
    }
    let binom = crate::kernel::binomial(t - 1, (t + w) / 2 - 1);
    let num = binom * BigInt::from(-(w as i64)) * 2;
    let den = (BigInt::from(1) << t) * BigInt::from((t + w) as i64);
    ExactRational::new(num, den)
}
