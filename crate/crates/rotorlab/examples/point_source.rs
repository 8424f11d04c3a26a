//! Fire n chips from the origin and watch the rotor-router spread them out.
//!
//! With all rotors starting in state 0, the d=1 machine splits an even pile
//! almost perfectly in half at every step; the final configuration is a
//! near-binomial profile whose deviation from the linear machine is what
//! `rotor_vs_linear` quantifies.

use rotorlab::machine::{run, RationalConfig};
use rotorlab::{ChipConfig, LatticePoint, RotorField};

fn main() {
    for d in [1usize, 2] {
        let n = 16u64;
        let chips = ChipConfig::from_entries(d, [(LatticePoint::origin(d), 64)]);
        let rotors = RotorField::new(d, 0);
        let trace = run(&chips, &rotors, n);

        println!("d = {d}, 64 chips at the origin, n = {n} time units");
        println!("  vertices fired: {}", trace.fired_vertices().len());
        println!("  rotor moves logged: {}", trace.events().len());

        let final_cfg = trace.final_config();
        assert_eq!(final_cfg.total(), 64, "chips are conserved");

        let linear = rotorlab::machine::linear_run(&RationalConfig::from_chips(&chips), n);
        let mut rows: Vec<_> = final_cfg.iter().collect();
        rows.sort_by(|a, b| a.0.cmp(b.0));
        println!("  {:<12} {:>6} {:>12}", "vertex", "chips", "linear mass");
        for (v, c) in rows.iter().take(12) {
            let m = linear.mass(v);
            println!("  {:<12} {:>6} {:>12.4}", format!("{v}"), c, rational(&m));
        }
        if final_cfg.iter().count() > 12 {
            println!("  ... {} more vertices", final_cfg.iter().count() - 12);
        }
        println!();
    }
}

fn rational(r: &rotorlab::ExactRational) -> f64 {
    use num_traits::ToPrimitive;
    r.to_f64().unwrap()
}
