//! The deterministic P-machine and its linear (even-split) relaxation.
//!
//! Each time unit every occupied vertex feeds all of its chips to its rotor:
//! a rotor in state `j` sends one chip along `e_j` and advances to `j+1`.
//! All vertices fire against the pre-step configuration; chips routed into a
//! vertex this step are not re-fed until the next step.
//!
//! Feeding `c` chips from state `s` is computed in O(2d) rather than chip by
//! chip: each direction receives `floor(c/2d)` chips plus one extra for the
//! `c mod 2d` directions in the cyclic window starting at `s`.

use crate::lattice::{direction_vector, DirectionIndex, LatticePoint};
use crate::{ExactRational, Result, RotorError};
use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// Sparse chip counts per vertex; zero entries are never stored.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ChipConfig {
    entries: BTreeMap<LatticePoint, u64>,
    dim: usize,
}

impl ChipConfig {
    pub fn new(dim: usize) -> Self {
        ChipConfig { entries: BTreeMap::new(), dim }
    }

    pub fn from_entries(dim: usize, entries: impl IntoIterator<Item = (LatticePoint, u64)>) -> Self {
        let mut cfg = ChipConfig::new(dim);
        for (v, c) in entries {
            cfg.add_chips(v, c);
        }
        cfg
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn add_chips(&mut self, v: LatticePoint, c: u64) {
        assert_eq!(v.dim(), self.dim, "point dimension mismatch");
        if c > 0 {
            *self.entries.entry(v).or_insert(0) += c;
        }
    }

    pub fn count(&self, v: &LatticePoint) -> u64 {
        self.entries.get(v).copied().unwrap_or(0)
    }

    pub fn total(&self) -> u64 {
        self.entries.values().sum()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&LatticePoint, u64)> {
        self.entries.iter().map(|(v, &c)| (v, c))
    }

    pub fn support(&self) -> impl Iterator<Item = &LatticePoint> {
        self.entries.keys()
    }

    /// `Some(0)` / `Some(1)` if every support point shares that parity,
    /// `None` for mixed-parity configurations. Empty configs count as even.
    pub fn parity_class(&self) -> Option<u8> {
        let mut class = None;
        for v in self.entries.keys() {
            let p = v.parity();
            match class {
                None => class = Some(p),
                Some(q) if q != p => return None,
                _ => {}
            }
        }
        class.or(Some(0))
    }
}

/// Rotor states in `Z_{2d}`, sparse over a configurable default.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RotorField {
    overrides: BTreeMap<LatticePoint, u8>,
    default_state: u8,
    dim: usize,
}

impl RotorField {
    pub fn new(dim: usize, default_state: u8) -> Self {
        assert!((default_state as usize) < 2 * dim);
        RotorField { overrides: BTreeMap::new(), default_state, dim }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn default_state(&self) -> u8 {
        self.default_state
    }

    pub fn state_of(&self, v: &LatticePoint) -> u8 {
        self.overrides.get(v).copied().unwrap_or(self.default_state)
    }

    pub fn set(&mut self, v: LatticePoint, state: u8) {
        assert!((state as usize) < 2 * self.dim);
        self.overrides.insert(v, state);
    }

    pub fn overrides(&self) -> impl Iterator<Item = (&LatticePoint, u8)> {
        self.overrides.iter().map(|(v, &s)| (v, s))
    }
}

/// One vertex firing during one step.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct MoveEvent {
    pub vertex: LatticePoint,
    /// Time remaining when the firing happened (n, n-1, ..., 1).
    pub time_remaining: u64,
    pub start_state: u8,
    pub chips_fed: u64,
}

/// Complete record of one P-machine run.
#[derive(Clone, Debug)]
pub struct RunTrace {
    initial_rotors: RotorField,
    final_rotors: RotorField,
    total_time: u64,
    /// Configurations chi_t for t = n, n-1, ..., 0 (index i holds chi_{n-i}).
    configs: Vec<ChipConfig>,
    events: Vec<MoveEvent>,
}

impl RunTrace {
    pub fn dim(&self) -> usize {
        self.initial_rotors.dim()
    }

    pub fn total_time(&self) -> u64 {
        self.total_time
    }

    pub fn initial_config(&self) -> &ChipConfig {
        &self.configs[0]
    }

    pub fn final_config(&self) -> &ChipConfig {
        self.configs.last().unwrap()
    }

    /// chi_t, the configuration with `t` steps remaining.
    pub fn config_at(&self, t: u64) -> &ChipConfig {
        assert!(t <= self.total_time);
        &self.configs[(self.total_time - t) as usize]
    }

    pub fn initial_rotors(&self) -> &RotorField {
        &self.initial_rotors
    }

    pub fn final_rotors(&self) -> &RotorField {
        &self.final_rotors
    }

    pub fn events(&self) -> &[MoveEvent] {
        &self.events
    }

    /// Vertices that fired at least once.
    pub fn fired_vertices(&self) -> Vec<LatticePoint> {
        let mut vs: Vec<LatticePoint> = self.events.iter().map(|e| e.vertex.clone()).collect();
        vs.sort();
        vs.dedup();
        vs
    }
}

/// Feed `c` chips to a rotor in state `s`. Returns the new state and the
/// number of chips sent in each of the `2d` directions.
pub fn feed_vertex(c: u64, s: u8, d: usize) -> (u8, Vec<u64>) {
    let m = 2 * d as u64;
    debug_assert!((s as u64) < m);
    let base = c / m;
    let rem = c % m;
    let mut out = vec![base; m as usize];
    for i in 0..rem {
        out[((s as u64 + i) % m) as usize] += 1;
    }
    let new_state = ((s as u64 + c) % m) as u8;
    (new_state, out)
}

/// One synchronous step: every occupied vertex fires against the pre-step
/// configuration. `time_remaining` is recorded verbatim into the events.
pub fn step(chips: &ChipConfig, rotors: &RotorField, time_remaining: u64) -> (ChipConfig, RotorField, Vec<MoveEvent>) {
    let d = chips.dim();
    let mut next = ChipConfig::new(d);
    let mut new_rotors = rotors.clone();
    let mut events = Vec::new();
    for (v, c) in chips.iter() {
        let s = rotors.state_of(v);
        let (new_state, out) = feed_vertex(c, s, d);
        events.push(MoveEvent {
            vertex: v.clone(),
            time_remaining,
            start_state: s,
            chips_fed: c,
        });
        new_rotors.set(v.clone(), new_state);
        for (j, &cnt) in out.iter().enumerate() {
            if cnt > 0 {
                next.add_chips(v.add(&direction_vector(DirectionIndex(j), d)), cnt);
            }
        }
    }
    (next, new_rotors, events)
}

/// Run the P-machine for `n` steps, recording every configuration and event.
pub fn run(initial: &ChipConfig, rotors: &RotorField, n: u64) -> RunTrace {
    assert_eq!(initial.dim(), rotors.dim(), "config/rotor dimension mismatch");
    let mut configs = Vec::with_capacity(n as usize + 1);
    let mut events = Vec::new();
    let mut chips = initial.clone();
    let mut sigma = rotors.clone();
    configs.push(chips.clone());
    let mut t = n;
    while t > 0 {
        let (next, next_rotors, mut evs) = step(&chips, &sigma, t);
        events.append(&mut evs);
        chips = next;
        sigma = next_rotors;
        configs.push(chips.clone());
        t -= 1;
    }
    RunTrace {
        initial_rotors: rotors.clone(),
        final_rotors: sigma,
        total_time: n,
        configs,
        events,
    }
}

/// Exact-rational chip mass per vertex, for the linear machine.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RationalConfig {
    entries: BTreeMap<LatticePoint, ExactRational>,
    dim: usize,
}

impl RationalConfig {
    pub fn new(dim: usize) -> Self {
        RationalConfig { entries: BTreeMap::new(), dim }
    }

    pub fn from_chips(chips: &ChipConfig) -> Self {
        let mut cfg = RationalConfig::new(chips.dim());
        for (v, c) in chips.iter() {
            cfg.add_mass(v.clone(), ExactRational::from(BigInt::from(c)));
        }
        cfg
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn add_mass(&mut self, v: LatticePoint, mass: ExactRational) {
        if mass.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.entries.entry(v) {
            Entry::Occupied(mut e) => {
                *e.get_mut() += mass;
                if e.get().is_zero() {
                    e.remove();
                }
            }
            Entry::Vacant(e) => {
                e.insert(mass);
            }
        }
    }

    pub fn mass(&self, v: &LatticePoint) -> ExactRational {
        self.entries.get(v).cloned().unwrap_or_else(ExactRational::zero)
    }

    pub fn total(&self) -> ExactRational {
        self.entries.values().fold(ExactRational::zero(), |a, b| a + b)
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&LatticePoint, &ExactRational)> {
        self.entries.iter()
    }
}

/// One even-split step: each pile sends exactly `c/2d` mass in each direction.
pub fn linear_step(cfg: &RationalConfig) -> RationalConfig {
    let d = cfg.dim();
    let split = ExactRational::new(BigInt::from(1), BigInt::from(2 * d as i64));
    let mut next = RationalConfig::new(d);
    for (v, mass) in cfg.iter() {
        let share = mass * &split;
        for j in DirectionIndex::all(d) {
            next.add_mass(v.add(&direction_vector(j, d)), share.clone());
        }
    }
    next
}

pub fn linear_run(cfg: &RationalConfig, n: u64) -> RationalConfig {
    let mut cur = cfg.clone();
    for _ in 0..n {
        cur = linear_step(&cur);
    }
    cur
}

/// Replay a trace's events through `feed_vertex`, rebuilding the final
/// configuration from scratch. Used to validate trace integrity.
pub fn replay(trace: &RunTrace) -> Result<ChipConfig> {
    let d = trace.dim();
    let mut chips = trace.initial_config().clone();
    let mut t = trace.total_time();
    let mut idx = 0;
    while t > 0 {
        let mut next = ChipConfig::new(d);
        let occupied = chips.entries.len();
        for _ in 0..occupied {
            let ev = trace.events.get(idx).ok_or_else(|| {
                RotorError::InvalidScenario("trace ended before replay finished".into())
            })?;
            if ev.time_remaining != t || chips.count(&ev.vertex) != ev.chips_fed {
                return Err(RotorError::InvalidScenario(format!(
                    "event mismatch at t={t} vertex {}",
                    ev.vertex
                )));
            }
            let (_, out) = feed_vertex(ev.chips_fed, ev.start_state, d);
            for (j, &cnt) in out.iter().enumerate() {
                if cnt > 0 {
                    next.add_chips(ev.vertex.add(&direction_vector(DirectionIndex(j), d)), cnt);
                }
            }
            idx += 1;
        }
        chips = next;
        t -= 1;
    }
    Ok(chips)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn pt(coords: &[i64]) -> LatticePoint {
        LatticePoint::new(coords.to_vec())
    }

    #[test]
    fn feed_vertex_examples() {
        assert_eq!(feed_vertex(3, 0, 1), (1, vec![2, 1]));
        assert_eq!(feed_vertex(0, 2, 2), (2, vec![0, 0, 0, 0]));
        assert_eq!(feed_vertex(5, 2, 2), (3, vec![1, 1, 2, 1]));
    }

    #[test]
    fn feed_vertex_multiple_of_2d_splits_evenly() {
        for d in 1..=3 {
            let (s, out) = feed_vertex(6 * d as u64, 1.min(2 * d as u8 - 1), d);
            assert!(out.iter().all(|&c| c == 3));
            assert_eq!(s, 1.min(2 * d as u8 - 1));
        }
    }

    #[test]
    fn step_examples() {
        let chips = ChipConfig::from_entries(1, [(pt(&[0]), 2)]);
        let rotors = RotorField::new(1, 0);
        let (next, new_rotors, events) = step(&chips, &rotors, 1);
        assert_eq!(next.count(&pt(&[-1])), 1);
        assert_eq!(next.count(&pt(&[1])), 1);
        assert_eq!(new_rotors.state_of(&pt(&[0])), 0);
        assert_eq!(events.len(), 1);

        let chips = ChipConfig::from_entries(1, [(pt(&[0]), 1)]);
        let mut rotors = RotorField::new(1, 0);
        rotors.set(pt(&[0]), 1);
        let (next, new_rotors, _) = step(&chips, &rotors, 1);
        assert_eq!(next.count(&pt(&[1])), 1);
        assert_eq!(next.total(), 1);
        assert_eq!(new_rotors.state_of(&pt(&[0])), 0);

        let empty = ChipConfig::new(2);
        let rotors = RotorField::new(2, 0);
        let (next, new_rotors, events) = step(&empty, &rotors, 1);
        assert!(next.is_empty());
        assert_eq!(new_rotors, rotors);
        assert!(events.is_empty());
    }

    #[test]
    fn run_examples() {
        let chips = ChipConfig::from_entries(1, [(pt(&[0]), 2)]);
        let trace = run(&chips, &RotorField::new(1, 0), 1);
        assert_eq!(trace.final_config().count(&pt(&[-1])), 1);
        assert_eq!(trace.final_config().count(&pt(&[1])), 1);

        let trace0 = run(&chips, &RotorField::new(1, 0), 0);
        assert_eq!(trace0.final_config(), &chips);
        assert!(trace0.events().is_empty());

        let chips = ChipConfig::from_entries(2, [(pt(&[0, 0]), 4)]);
        let trace = run(&chips, &RotorField::new(2, 0), 1);
        for j in DirectionIndex::all(2) {
            assert_eq!(trace.final_config().count(&direction_vector(j, 2)), 1);
        }
    }

    #[test]
    fn linear_run_examples() {
        let one = ExactRational::from(BigInt::from(1));
        let mut cfg = RationalConfig::new(1);
        cfg.add_mass(pt(&[0]), one.clone());
        let after = linear_run(&cfg, 1);
        let half = ExactRational::new(BigInt::from(1), BigInt::from(2));
        assert_eq!(after.mass(&pt(&[-1])), half);
        assert_eq!(after.mass(&pt(&[1])), half);

        let after2 = linear_run(&cfg, 2);
        let quarter = ExactRational::new(BigInt::from(1), BigInt::from(4));
        assert_eq!(after2.mass(&pt(&[-2])), quarter);
        assert_eq!(after2.mass(&pt(&[0])), half);
        assert_eq!(after2.mass(&pt(&[2])), quarter);

        assert!(linear_run(&RationalConfig::new(2), 5).is_empty());
    }

    #[test]
    fn event_bookkeeping_is_consistent() {
        let chips = ChipConfig::from_entries(2, [(pt(&[0, 0]), 7), (pt(&[1, 1]), 3)]);
        let trace = run(&chips, &RotorField::new(2, 1), 6);
        // per-vertex: strictly decreasing time_remaining, rotor recurrence
        for v in trace.fired_vertices() {
            let evs: Vec<&MoveEvent> = trace.events().iter().filter(|e| e.vertex == v).collect();
            for pair in evs.windows(2) {
                assert!(pair[0].time_remaining > pair[1].time_remaining);
                assert_eq!(
                    pair[1].start_state as u64,
                    (pair[0].start_state as u64 + pair[0].chips_fed) % 4
                );
            }
        }
        assert_eq!(&replay(&trace).unwrap(), trace.final_config());
    }

    fn arb_config(d: usize) -> impl Strategy<Value = ChipConfig> {
        prop::collection::vec(
            (prop::collection::vec(-5i64..5, d..=d), 1u64..20),
            1..6,
        )
        .prop_map(move |entries| {
            ChipConfig::from_entries(
                d,
                entries.into_iter().map(|(c, n)| (LatticePoint::new(c), n)),
            )
        })
    }

    proptest! {
        #[test]
        fn chips_are_conserved(cfg in arb_config(2), n in 0u64..12, default in 0u8..4) {
            let trace = run(&cfg, &RotorField::new(2, default), n);
            let total = cfg.total();
            for t in 0..=n {
                prop_assert_eq!(trace.config_at(t).total(), total);
            }
        }

        #[test]
        fn parity_alternates(coords in prop::collection::vec(-4i64..4, 2..=2), c in 1u64..30, n in 0u64..10) {
            let mut v = LatticePoint::new(coords);
            if v.parity() == 1 {
                v = v.add(&direction_vector(DirectionIndex(1), 2));
            }
            let cfg = ChipConfig::from_entries(2, [(v, c)]);
            let trace = run(&cfg, &RotorField::new(2, 0), n);
            for t in 0..=n {
                let expect = ((n - t) % 2) as u8;
                prop_assert_eq!(trace.config_at(t).parity_class(), Some(expect));
            }
        }

        #[test]
        fn replay_reproduces_final_config(cfg in arb_config(1), n in 0u64..16, default in 0u8..2) {
            let trace = run(&cfg, &RotorField::new(1, default), n);
            prop_assert_eq!(&replay(&trace).unwrap(), trace.final_config());
        }

        #[test]
        fn feed_vertex_conserves_and_advances(c in 0u64..500, s in 0u8..6, d in 1usize..4) {
            let s = s % (2 * d as u8);
            let (ns, out) = feed_vertex(c, s, d);
            prop_assert_eq!(out.iter().sum::<u64>(), c);
            prop_assert_eq!(ns as u64, (s as u64 + c) % (2 * d as u64));
            if c % (2 * d as u64) == 0 {
                prop_assert!(out.iter().all(|&x| x == c / (2 * d as u64)));
            }
        }
    }
}
