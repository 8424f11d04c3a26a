//! Scenario files: the JSON description of one P-machine experiment, plus
//! deterministic seeded generation for property suites.
//!
//! Schema:
//! ```json
//! {
//!   "d": 2,
//!   "n": 16,
//!   "chips": [[[0,0], 5], [[2,0], 3]],
//!   "rotors": { "default": 0, "overrides": [[[0,0], 2]] },
//!   "targets": [[0,0]],
//!   "seed": 1
//! }
//! ```
//! `targets` and `seed` are optional.

use crate::lattice::LatticePoint;
use crate::machine::{ChipConfig, RotorField};
use crate::{Result, RotorError};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RotorSpec {
    pub default: u8,
    #[serde(default)]
    pub overrides: Vec<(LatticePoint, u8)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Scenario {
    pub d: usize,
    pub n: u64,
    pub chips: Vec<(LatticePoint, u64)>,
    pub rotors: RotorSpec,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub targets: Vec<LatticePoint>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

impl Scenario {
    pub fn validate(&self) -> Result<()> {
        if self.d == 0 || self.d > 4 {
            return Err(RotorError::InvalidScenario(format!(
                "dimension {} unsupported (need 1 <= d <= 4)",
                self.d
            )));
        }
        for (p, _) in &self.chips {
            if p.dim() != self.d {
                return Err(RotorError::InvalidScenario(format!(
                    "chip point {p} has dimension {}, scenario has d={}",
                    p.dim(),
                    self.d
                )));
            }
        }
        if (self.rotors.default as usize) >= 2 * self.d {
            return Err(RotorError::InvalidScenario(format!(
                "default rotor state {} out of range for d={}",
                self.rotors.default, self.d
            )));
        }
        for (p, s) in &self.rotors.overrides {
            if p.dim() != self.d || (*s as usize) >= 2 * self.d {
                return Err(RotorError::InvalidScenario(format!(
                    "rotor override ({p}, {s}) invalid for d={}",
                    self.d
                )));
            }
        }
        for t in &self.targets {
            if t.dim() != self.d {
                return Err(RotorError::InvalidScenario(format!(
                    "target {t} has wrong dimension"
                )));
            }
        }
        Ok(())
    }

    pub fn chip_config(&self) -> ChipConfig {
        ChipConfig::from_entries(self.d, self.chips.iter().cloned())
    }

    pub fn rotor_field(&self) -> RotorField {
        let mut field = RotorField::new(self.d, self.rotors.default);
        for (p, s) in &self.rotors.overrides {
            field.set(p.clone(), *s);
        }
        field
    }

    /// `Some(parity)` when every chip placement shares one parity.
    pub fn parity_class(&self) -> Option<u8> {
        self.chip_config().parity_class()
    }

    pub fn from_json(json: &str) -> Result<Scenario> {
        let sc: Scenario = serde_json::from_str(json)?;
        sc.validate()?;
        Ok(sc)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("scenario serialization cannot fail")
    }
}

/// Deterministic parity-pure (even) scenario from a 64-bit seed. The same
/// seed always produces the identical scenario, byte for byte.
pub fn generate(seed: u64, d: usize, n: u64, chip_budget: u64) -> Scenario {
    assert!((1..=4).contains(&d));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let radius: i64 = 6;
    let mut chips: Vec<(LatticePoint, u64)> = Vec::new();
    let mut remaining = chip_budget;
    while remaining > 0 {
        let mut coords: Vec<i64> = (0..d).map(|_| rng.gen_range(-radius..=radius)).collect();
        // force even coordinate-sum parity
        if coords.iter().sum::<i64>().rem_euclid(2) == 1 {
            coords[0] += if coords[0] < radius { 1 } else { -1 };
        }
        let count = rng.gen_range(1..=remaining.min(12));
        let p = LatticePoint::new(coords);
        match chips.iter_mut().find(|(q, _)| *q == p) {
            Some((_, c)) => *c += count,
            None => chips.push((p, count)),
        }
        remaining -= count;
    }
    chips.sort();
    let default = rng.gen_range(0..2 * d as u8);
    let n_overrides = rng.gen_range(0..=6usize);
    let mut overrides: Vec<(LatticePoint, u8)> = Vec::new();
    for _ in 0..n_overrides {
        let coords: Vec<i64> = (0..d).map(|_| rng.gen_range(-radius..=radius)).collect();
        let p = LatticePoint::new(coords);
        let s = rng.gen_range(0..2 * d as u8);
        if !overrides.iter().any(|(q, _)| *q == p) {
            overrides.push((p, s));
        }
    }
    overrides.sort();
    let targets: Vec<LatticePoint> = (0..3)
        .map(|_| LatticePoint::new((0..d).map(|_| rng.gen_range(-4i64..=4)).collect()))
        .collect();
    Scenario {
        d,
        n,
        chips,
        rotors: RotorSpec { default, overrides },
        targets,
        seed: Some(seed),
    }
}
