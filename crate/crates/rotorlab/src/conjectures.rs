//! Empirical testers for the sign-change, decay, and unimodality conjectures
//! and the extrema/maximum claims about the Gaussian difference f(t).
//!
//! Exact arithmetic is used wherever the underlying sequence is a kernel
//! weight; floating point appears only for Gaussian-based sequences and
//! least-squares fits. Unimodality is *asserted* only for d=1,2 where the
//! ratio arguments prove it; elsewhere these are reporters.

use crate::kernel::{gaussian_p_norm_sq, Kernel};
use crate::lattice::{direction_vector, DirectionIndex, LatticePoint};
use crate::machine::{RationalConfig, RunTrace};
use crate::weights::{delta_w, weight_signed};
use crate::{ExactRational, Result};
use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};

/// Shape summary of a sampled sequence.
#[derive(Debug, Clone, PartialEq)]
pub struct SequenceProfile {
    pub len: usize,
    /// Index stride of the underlying arithmetic progression (1 or 2).
    pub stride: usize,
    pub sign_changes: usize,
    pub local_extrema: usize,
    /// Index of the (first) maximum value, when the sequence is nonempty.
    pub mode_index: Option<usize>,
}

/// Count adjacent strict sign flips after deleting zeros.
pub fn sign_changes<T, F: Fn(&T) -> i8>(values: &[T], sign_of: F) -> usize {
    let mut count = 0;
    let mut last: i8 = 0;
    for v in values {
        let s = sign_of(v);
        if s == 0 {
            continue;
        }
        if last != 0 && s != last {
            count += 1;
        }
        last = s;
    }
    count
}

pub fn sign_changes_exact(values: &[ExactRational]) -> usize {
    sign_changes(values, |v| {
        if v.is_zero() {
            0
        } else if v.is_positive() {
            1
        } else {
            -1
        }
    })
}

pub fn sign_changes_f64(values: &[f64]) -> usize {
    sign_changes(values, |v| {
        if *v == 0.0 {
            0
        } else if *v > 0.0 {
            1
        } else {
            -1
        }
    })
}

/// Strict local extrema of a stride-sampled sequence: index i counts when
/// f(i) > max(neighbors) or f(i) < min(neighbors). Floating-point ties
/// within `rel_tol` are not strict.
pub fn local_extrema_f64(values: &[f64], rel_tol: f64) -> usize {
    let gt = |a: f64, b: f64| a > b + rel_tol * a.abs().max(b.abs());
    let mut count = 0;
    for i in 1..values.len().saturating_sub(1) {
        let (prev, cur, next) = (values[i - 1], values[i], values[i + 1]);
        if (gt(cur, prev) && gt(cur, next)) || (gt(prev, cur) && gt(next, cur)) {
            count += 1;
        }
    }
    count
}

pub fn local_extrema_exact(values: &[ExactRational]) -> usize {
    let mut count = 0;
    for i in 1..values.len().saturating_sub(1) {
        let (prev, cur, next) = (&values[i - 1], &values[i], &values[i + 1]);
        if (cur > prev && cur > next) || (cur < prev && cur < next) {
            count += 1;
        }
    }
    count
}

/// No strict increase after a strict decrease; plateaus are allowed.
pub fn is_unimodal_exact(values: &[ExactRational]) -> bool {
    let mut decreased = false;
    for pair in values.windows(2) {
        if pair[1] > pair[0] {
            if decreased {
                return false;
            }
        } else if pair[1] < pair[0] {
            decreased = true;
        }
    }
    true
}

pub fn profile_exact(values: &[ExactRational], stride: usize) -> SequenceProfile {
    SequenceProfile {
        len: values.len(),
        stride,
        sign_changes: sign_changes_exact(values),
        local_extrema: local_extrema_exact(values),
        mode_index: values
            .iter()
            .enumerate()
            .max_by(|(_, a), (_, b)| a.partial_cmp(b).unwrap())
            .map(|(i, _)| i),
    }
}

/// Conjecture 1 scan: the sequence `W_{2n}(v, xi)` for `2n <= n_max`,
/// exact, with its sign-change profile.
pub fn conj1_scan(
    kernel: &dyn Kernel,
    xi: &RationalConfig,
    v: &LatticePoint,
    n_max: u64,
) -> Result<(Vec<ExactRational>, SequenceProfile)> {
    let mut values = Vec::new();
    let mut t = 0;
    while t <= n_max {
        values.push(weight_signed(kernel, t, v, xi)?);
        t += 2;
    }
    let profile = profile_exact(&values, 2);
    Ok((values, profile))
}

/// The two-step harmonic difference `xi'` with
/// `W_{2n+2}(v, xi) - W_{2n}(v, xi) = W_{2n}(v, xi')`.
pub fn harmonic_difference(xi: &RationalConfig) -> RationalConfig {
    let d = xi.dim();
    let mut out = RationalConfig::new(d);
    let split = ExactRational::new(BigInt::from(1), BigInt::from((2 * d * 2 * d) as i64));
    for (w, mass) in xi.iter() {
        for j in DirectionIndex::all(d) {
            for k in DirectionIndex::all(d) {
                let u = w.add(&direction_vector(j, d)).add(&direction_vector(k, d));
                out.add_mass(u, mass * &split);
            }
        }
        out.add_mass(w.clone(), -mass.clone());
    }
    out
}

/// Conjecture 3 scan: `S_n(v)` over `n <-> v`, `n <= n_max`, exact.
pub fn conj3_profile(
    kernel: &dyn Kernel,
    v: &LatticePoint,
    n_max: u64,
) -> Result<(Vec<ExactRational>, SequenceProfile)> {
    let mut values = Vec::new();
    let mut n = v.parity() as u64;
    while n <= n_max {
        values.push(kernel.s(n, v)?);
        n += 2;
    }
    let profile = profile_exact(&values, 2);
    Ok((values, profile))
}

/// Exact unimodality certificate for d=1 via the consecutive-term ratio
/// `p(n,x)/p(n-2,x) = n(n-1)/(n^2 - x^2)`: the sequence increases strictly
/// for `n < x^2`, plateaus exactly at `n = x^2`, and decreases after.
/// Returns the mode `n = x^2` on success.
pub fn unimodal_certificate_1d(x: u64, n_max: u64) -> Option<u64> {
    let x = x as i128;
    let mode = x * x;
    let mut n = x + 2;
    while n as u64 <= n_max {
        let num = n * (n - 1);
        let den = n * n - x * x;
        // ratio > 1 iff n < x^2; == 1 iff n == x^2; < 1 iff n > x^2
        let expected = if n < mode {
            num > den
        } else if n == mode {
            num == den
        } else {
            num < den
        };
        if !expected || den <= 0 {
            return None;
        }
        n += 2;
    }
    Some(mode as u64)
}

/// The cubic from the d=2 ratio argument: `g(n) = 2n^3 - rn^2 + s` with
/// `r = 2x^2 + 2y^2 + 1`, `s = (x^2 - y^2)^2`. For `n > x+y`,
/// `p(n,(x,y))/p(n-2,(x,y)) <= 1` exactly when `g(n) >= 0`.
pub fn g_cubic(n: i128, x: i128, y: i128) -> i128 {
    let r = 2 * x * x + 2 * y * y + 1;
    let s = (x * x - y * y) * (x * x - y * y);
    2 * n * n * n - r * n * n + s
}

/// Exact unimodality certificate for d=2 over `0 <= y <= x`: checks on each
/// `n <-> x+y` in `(x+y, n_max]` that the ratio comparison agrees with the
/// sign of `g(n)` (algebraic identity `g(n) = prod - n^2(n-1)^2`) and that
/// the ratio never strictly rises above 1 after having dropped below it.
pub fn unimodal_certificate_2d(x: u64, y: u64, n_max: u64) -> bool {
    assert!(y <= x);
    let (x, y) = (x as i128, y as i128);
    let mut seen_decrease = false;
    let mut n = x + y + 2;
    while n as u64 <= n_max {
        let num = n * n * (n - 1) * (n - 1);
        let den = (n + x + y) * (n + x - y) * (n - x + y) * (n - x - y);
        if den != num + g_cubic(n, x, y) {
            return false; // identity violated: bug
        }
        if num > den {
            if seen_decrease {
                return false;
            }
        } else if num < den {
            seen_decrease = true;
        }
        n += 2;
    }
    true
}

/// Least-squares fit of `log|value|` against `log(scale)`.
#[derive(Debug, Clone)]
pub struct DecayFit {
    pub points: Vec<(f64, f64)>,
    pub slope: f64,
    pub intercept: f64,
    /// Root mean square residual of the fit.
    pub residual: f64,
}

/// Fits a line through `(log scale, log |value|)` points; `None` with
/// fewer than 3 usable points (e.g. when every delta vanished).
pub fn fit_loglog(points: &[(f64, f64)]) -> Option<DecayFit> {
    if points.len() < 3 {
        return None;
    }
    let n = points.len() as f64;
    let sx: f64 = points.iter().map(|p| p.0).sum();
    let sy: f64 = points.iter().map(|p| p.1).sum();
    let sxx: f64 = points.iter().map(|p| p.0 * p.0).sum();
    let sxy: f64 = points.iter().map(|p| p.0 * p.1).sum();
    let denom = n * sxx - sx * sx;
    if denom == 0.0 {
        return None;
    }
    let slope = (n * sxy - sx * sy) / denom;
    let intercept = (sy - slope * sx) / n;
    let residual = (points
        .iter()
        .map(|p| {
            let e = p.1 - (slope * p.0 + intercept);
            e * e
        })
        .sum::<f64>()
        / n)
        .sqrt();
    Some(DecayFit { points: points.to_vec(), slope, intercept, residual })
}

/// Conjecture 2 measurement: fit `log|Delta_w|` against `log|w|` over the
/// given offsets, skipping offsets whose delta is exactly zero.
pub fn delta_decay_fit(
    kernel: &dyn Kernel,
    trace: &RunTrace,
    v: &LatticePoint,
    offsets: &[LatticePoint],
) -> Result<Option<DecayFit>> {
    let mut points = Vec::new();
    for w in offsets {
        let dw = delta_w(kernel, trace, v, w)?;
        if dw.is_zero() {
            continue;
        }
        let mag = dw.abs().to_f64().unwrap_or(f64::MIN_POSITIVE);
        points.push((w.l2_norm().ln(), mag.ln()));
    }
    Ok(fit_loglog(&points))
}

/// One row of a Claim 4 scan: the maximum of `|f(t)| = |p(t,x) - p(t,x+z)|`
/// over a stride-2 grid, its argmax, and the predicted maximizer
/// `t = d|x|^2/(d+2)`.
#[derive(Debug, Clone)]
pub struct Claim4Row {
    pub x: LatticePoint,
    pub max_abs: f64,
    pub argmax_t: u64,
    pub predicted_t: f64,
}

/// Gaussian difference sequence `f(t) = p(t,x) - p(t,x+z)` on the stride-2
/// grid `t = t_start, t_start+2, ..., t_end`.
pub fn gaussian_diff_sequence(
    d: usize,
    x: &LatticePoint,
    z: &LatticePoint,
    t_start: u64,
    t_end: u64,
) -> Vec<f64> {
    let x2 = x.l2_norm_sq() as f64;
    let xz2 = x.add(z).l2_norm_sq() as f64;
    let mut vals = Vec::new();
    let mut t = t_start.max(2);
    while t <= t_end {
        vals.push(gaussian_p_norm_sq(d, t, x2) - gaussian_p_norm_sq(d, t, xz2));
        t += 2;
    }
    vals
}

/// The default f(t) grid: from `max(2, ceil(|x|/2))` (rounded up to even)
/// to `40 |x|^2`, stride 2.
pub fn default_t_grid(x: &LatticePoint) -> (u64, u64) {
    let start = ((x.l2_norm() / 2.0).ceil() as u64).max(2);
    (start + start % 2, 40 * x.l2_norm_sq())
}

/// Claim 4 scan over a family of x with one fixed offset z != 0.
pub fn claim4_max_scan(d: usize, xs: &[LatticePoint], z: &LatticePoint) -> Vec<Claim4Row> {
    assert!(z.l1_norm() > 0, "z = 0 is degenerate: f is identically zero");
    xs.iter()
        .map(|x| {
            let (t_start, t_end) = default_t_grid(x);
            let vals = gaussian_diff_sequence(d, x, z, t_start, t_end);
            let (idx, max_abs) = vals
                .iter()
                .map(|v| v.abs())
                .enumerate()
                .max_by(|a, b| a.1.partial_cmp(&b.1).unwrap())
                .unwrap();
            Claim4Row {
                x: x.clone(),
                max_abs,
                argmax_t: t_start + 2 * idx as u64,
                predicted_t: d as f64 * x.l2_norm_sq() as f64 / (d as f64 + 2.0),
            }
        })
        .collect()
}
