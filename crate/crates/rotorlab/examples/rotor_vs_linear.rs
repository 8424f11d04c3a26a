//! The headline bound: the rotor-router machine tracks the linear machine to
//! O(1) error, uniformly in the number of chips and the run length.
//!
//! For a point source of n chips run for n time units, the exact discrepancy
//! |chips at v - n S_n(v)| stays bounded by a small constant while the chip
//! count grows without limit.

use num_traits::ToPrimitive;
use rotorlab::kernel::PathCountTable;
use rotorlab::weights::discrepancy;
use rotorlab::{ChipConfig, LatticePoint, RotorField};

fn main() {
    let d = 1;
    let v = LatticePoint::origin(d);
    let table = PathCountTable::build_symmetric(d, 256);

    println!("point source, d = 1, target v = 0");
    println!("{:>6} {:>14} {:>10}", "n", "discrepancy", "float");
    let mut max_abs: f64 = 0.0;
    for n in [2u64, 4, 8, 16, 32, 64, 128, 256] {
        let chips = ChipConfig::from_entries(d, [(LatticePoint::origin(d), n)]);
        let rotors = RotorField::new(d, 0);
        let disc = discrepancy(&table, &chips, &rotors, n, &v).unwrap();
        let f = disc.to_f64().unwrap();
        max_abs = max_abs.max(f.abs());
        println!("{:>6} {:>14} {:>10.5}", n, format!("{disc}"), f);
    }
    println!("max |discrepancy| = {max_abs:.5} -- no growth with n");
    assert!(max_abs < 5.0);
}
