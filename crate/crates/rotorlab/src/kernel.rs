//! Exact simple-random-walk kernels `S_t(v)` and their approximations.
//!
//! `S_t(v)` is held as an arbitrary-precision path count `N_t(v)` over the
//! implicit denominator `(2d)^t`, so every probability is exact. Tables can
//! be built in full or reduced to canonical orbit representatives (sorted
//! absolute coordinates), which cuts memory by up to `2^d * d!`.
//!
//! For long-horizon scans where a table would not fit, [`LevelStream`]
//! yields one time level at a time, and [`ClosedFormKernel`] evaluates the
//! d=1 and d=2 binomial closed forms directly.

use crate::lattice::{direction_vector, DirectionIndex, LatticePoint};
use crate::{ExactRational, Result, RotorError};
use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};
use std::collections::HashMap;

/// Exact binomial coefficient by the multiplicative formula.
pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 1..=k {
        acc = acc * BigInt::from(n - k + i) / BigInt::from(i);
    }
    acc
}

/// Incrementally maintained Pascal row, for bulk closed-form comparisons.
pub struct PascalRow {
    n: u64,
    row: Vec<BigInt>,
}

impl PascalRow {
    pub fn new() -> Self {
        PascalRow { n: 0, row: vec![BigInt::one()] }
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn advance(&mut self) {
        let mut next = Vec::with_capacity(self.row.len() + 1);
        next.push(BigInt::one());
        for i in 1..self.row.len() {
            next.push(&self.row[i - 1] + &self.row[i]);
        }
        next.push(BigInt::one());
        self.n += 1;
        self.row = next;
    }

    pub fn choose(&self, k: u64) -> BigInt {
        if k > self.n {
            BigInt::zero()
        } else {
            self.row[k as usize].clone()
        }
    }
}

impl Default for PascalRow {
    fn default() -> Self {
        Self::new()
    }
}

/// Orbit size of a canonical point under coordinate sign flips and
/// permutations: `2^{#nonzero} * d! / prod(multiplicities!)`.
pub fn orbit_size(canonical: &LatticePoint) -> u64 {
    let d = canonical.dim();
    let nonzero = canonical.0.iter().filter(|&&c| c != 0).count() as u32;
    let mut perms: u64 = (1..=d as u64).product();
    let mut i = 0;
    while i < d {
        let mut j = i;
        while j < d && canonical.0[j] == canonical.0[i] {
            j += 1;
        }
        let mult = (j - i) as u64;
        perms /= (1..=mult).product::<u64>();
        i = j;
    }
    perms * 2u64.pow(nonzero)
}

type Level = HashMap<LatticePoint, BigInt>;

/// Streaming iterator over path-count levels `N_t`, holding only the
/// current level in memory.
pub struct LevelStream {
    dim: usize,
    symmetric: bool,
    t: u64,
    level: Level,
}

impl LevelStream {
    pub fn new(dim: usize, symmetric: bool) -> Self {
        assert!(dim >= 1);
        let mut level = Level::new();
        level.insert(LatticePoint::origin(dim), BigInt::one());
        LevelStream { dim, symmetric, t: 0, level }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn t(&self) -> u64 {
        self.t
    }

    pub fn level(&self) -> &Level {
        &self.level
    }

    /// `sum_v N_t(v)` over the full lattice, weighting orbits when reduced.
    pub fn total_paths(&self) -> BigInt {
        let mut total = BigInt::zero();
        for (v, n) in &self.level {
            if self.symmetric {
                total += n * BigInt::from(orbit_size(v));
            } else {
                total += n;
            }
        }
        total
    }

    pub fn advance(&mut self) {
        let d = self.dim;
        let mut next = Level::with_capacity(self.level.len() * 2);
        if self.symmetric {
            // candidate canonical supports, then gather from neighbors
            let mut candidates: Vec<LatticePoint> = Vec::new();
            for v in self.level.keys() {
                for j in DirectionIndex::all(d) {
                    candidates.push(v.add(&direction_vector(j, d)).canonical());
                }
            }
            candidates.sort();
            candidates.dedup();
            for cand in candidates {
                let mut sum = BigInt::zero();
                for j in DirectionIndex::all(d) {
                    let nb = cand.sub(&direction_vector(j, d)).canonical();
                    if let Some(n) = self.level.get(&nb) {
                        sum += n;
                    }
                }
                if !sum.is_zero() {
                    next.insert(cand, sum);
                }
            }
        } else {
            for (v, n) in &self.level {
                for j in DirectionIndex::all(d) {
                    let u = v.add(&direction_vector(j, d));
                    *next.entry(u).or_insert_with(BigInt::zero) += n;
                }
            }
        }
        self.level = next;
        self.t += 1;
    }
}

/// Path counts `N_t(v)` for all `t <= t_max`.
pub struct PathCountTable {
    dim: usize,
    t_max: u64,
    symmetric: bool,
    levels: Vec<Level>,
}

impl PathCountTable {
    pub fn build(dim: usize, t_max: u64) -> Self {
        Self::build_inner(dim, t_max, false)
    }

    /// Store only canonical orbit representatives. Lookups canonicalize.
    pub fn build_symmetric(dim: usize, t_max: u64) -> Self {
        Self::build_inner(dim, t_max, true)
    }

    fn build_inner(dim: usize, t_max: u64, symmetric: bool) -> Self {
        let mut stream = LevelStream::new(dim, symmetric);
        let mut levels = Vec::with_capacity(t_max as usize + 1);
        levels.push(stream.level().clone());
        for _ in 0..t_max {
            stream.advance();
            levels.push(stream.level().clone());
        }
        PathCountTable { dim, t_max, symmetric, levels }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn t_max(&self) -> u64 {
        self.t_max
    }

    pub fn level(&self, t: u64) -> &Level {
        &self.levels[t as usize]
    }

    pub fn count(&self, t: u64, v: &LatticePoint) -> Result<BigInt> {
        if t > self.t_max {
            return Err(RotorError::TableTooShort { t, t_max: self.t_max });
        }
        if v.dim() != self.dim {
            return Err(RotorError::DimensionMismatch { expected: self.dim, got: v.dim() });
        }
        let key = if self.symmetric { v.canonical() } else { v.clone() };
        Ok(self.levels[t as usize].get(&key).cloned().unwrap_or_else(BigInt::zero))
    }

    /// `S_t(v) = N_t(v) / (2d)^t`, in lowest terms.
    pub fn s_exact(&self, t: u64, v: &LatticePoint) -> Result<ExactRational> {
        let num = self.count(t, v)?;
        Ok(ExactRational::new(num, BigInt::from(2 * self.dim as u64).pow(t as u32)))
    }

    /// `sum_v N_t(v)`; equals `(2d)^t` exactly.
    pub fn total_paths(&self, t: u64) -> Result<BigInt> {
        if t > self.t_max {
            return Err(RotorError::TableTooShort { t, t_max: self.t_max });
        }
        let mut total = BigInt::zero();
        for (v, n) in &self.levels[t as usize] {
            if self.symmetric {
                total += n * BigInt::from(orbit_size(v));
            } else {
                total += n;
            }
        }
        Ok(total)
    }
}

/// Uniform access to exact kernels, table-backed or closed-form.
pub trait Kernel: Sync {
    fn dim(&self) -> usize;
    fn s(&self, t: u64, v: &LatticePoint) -> Result<ExactRational>;
}

impl Kernel for PathCountTable {
    fn dim(&self) -> usize {
        self.dim
    }

    fn s(&self, t: u64, v: &LatticePoint) -> Result<ExactRational> {
        self.s_exact(t, v)
    }
}

/// Binomial closed forms for d=1 and d=2; no time horizon.
pub struct ClosedFormKernel {
    dim: usize,
}

impl ClosedFormKernel {
    pub fn new(dim: usize) -> Self {
        assert!(dim == 1 || dim == 2, "closed forms exist only for d=1,2");
        ClosedFormKernel { dim }
    }
}

impl Kernel for ClosedFormKernel {
    fn dim(&self) -> usize {
        self.dim
    }

    fn s(&self, t: u64, v: &LatticePoint) -> Result<ExactRational> {
        if v.dim() != self.dim {
            return Err(RotorError::DimensionMismatch { expected: self.dim, got: v.dim() });
        }
        Ok(match self.dim {
            1 => closed_form_1d(t, v.0[0]),
            _ => closed_form_2d(t, v.0[0], v.0[1]),
        })
    }
}

/// `S_t(w) = 2^{-t} C(t, (t+w)/2)` for d=1; zero off the light cone or
/// off parity.
pub fn closed_form_1d(t: u64, w: i64) -> ExactRational {
    let aw = w.unsigned_abs();
    if aw > t || (t + aw) % 2 != 0 {
        return ExactRational::zero();
    }
    ExactRational::new(binomial(t, (t + aw) / 2), BigInt::one() << t)
}

/// `S_n((x,y)) = 4^{-n} C(n,(n+x+y)/2) C(n,(n+x-y)/2)` for d=2, via the
/// independent diagonal decomposition.
pub fn closed_form_2d(n: u64, x: i64, y: i64) -> ExactRational {
    let s = x + y;
    let dif = x - y;
    let n_i = n as i64;
    if (n_i + s) % 2 != 0 || s.abs() > n_i || dif.abs() > n_i {
        return ExactRational::zero();
    }
    let a = ((n_i + s) / 2) as u64;
    let b = ((n_i + dif) / 2) as u64;
    ExactRational::new(
        binomial(n, a) * binomial(n, b),
        BigInt::from(4u64).pow(n as u32),
    )
}

/// The parity-adjusted Gaussian kernel `p(t,x) = 2 (d/2 pi t)^{d/2} e^{-d|x|^2/2t}`.
pub fn gaussian_p(d: usize, t: u64, x: &LatticePoint) -> f64 {
    gaussian_p_norm_sq(d, t, x.l2_norm_sq() as f64)
}

pub fn gaussian_p_norm_sq(d: usize, t: u64, norm_sq: f64) -> f64 {
    let df = d as f64;
    let tf = t as f64;
    2.0 * (df / (2.0 * std::f64::consts::PI * tf)).powf(df / 2.0)
        * (-df * norm_sq / (2.0 * tf)).exp()
}

/// Discrete gradient `grad_z(x,t) = S_t(x+z) - S_t(x)`, exact.
/// Requires an even offset `z <-> 0`.
pub fn grad_z(kernel: &dyn Kernel, x: &LatticePoint, z: &LatticePoint, t: u64) -> Result<ExactRational> {
    if z.parity() != 0 {
        return Err(RotorError::ParityMismatch(format!("offset z={z} must be even")));
    }
    Ok(kernel.s(t, &x.add(z))? - kernel.s(t, x)?)
}

/// `| grad_z(x,t) - (p(t,x+z) - p(t,x)) |` against the Gaussian kernel.
/// Requires `t <-> x` and even `z`.
pub fn lclt_error(kernel: &dyn Kernel, x: &LatticePoint, z: &LatticePoint, t: u64) -> Result<f64> {
    if x.parity() != (t % 2) as u8 {
        return Err(RotorError::ParityMismatch(format!("t={t} must match parity of x={x}")));
    }
    let d = kernel.dim();
    let exact = grad_z(kernel, x, z, t)?;
    let approx = gaussian_p(d, t, &x.add(z)) - gaussian_p(d, t, x);
    let exact_f = exact.to_f64().unwrap_or_else(|| {
        // fall back through the reduced parts when the rational overflows f64
        exact.numer().to_f64().unwrap() / exact.denom().to_f64().unwrap()
    });
    Ok((exact_f - approx).abs())
}
