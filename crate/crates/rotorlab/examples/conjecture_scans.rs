//! Empirical scanners: sign changes of W_{2n}(v, xi), unimodality of
//! S_n(v) in n, and the decay exponent of the per-site contributions.

use rotorlab::conjectures::{
    conj1_scan, delta_decay_fit, harmonic_difference, unimodal_certificate_1d,
    unimodal_certificate_2d,
};
use rotorlab::kernel::PathCountTable;
use rotorlab::machine::{run, RationalConfig};
use rotorlab::{ChipConfig, ExactRational, LatticePoint, RotorField};

fn one() -> ExactRational {
    ExactRational::from(num_bigint::BigInt::from(1))
}

fn main() {
    // Sign changes of n -> W_{2n}(v, xi) for a dipole xi: conjecturally at
    // most (a constant times) the number of sign changes in xi itself.
    let d = 1;
    let mut xi = RationalConfig::new(d);
    xi.add_mass(LatticePoint::new(vec![0]), one());
    xi.add_mass(LatticePoint::new(vec![2]), -one());
    let table = PathCountTable::build_symmetric(d, 80);
    println!("dipole xi = delta_0 - delta_2, d = 1:");
    let mut max_changes = 0;
    for v0 in -6i64..=6 {
        let v = LatticePoint::new(vec![v0]);
        let (_, profile) = conj1_scan(&table, &xi, &v, 80).unwrap();
        max_changes = max_changes.max(profile.sign_changes);
        println!("  v = {v0:>3}: {} sign change(s) over 2n <= 80", profile.sign_changes);
    }
    println!("  max = {max_changes} (xi itself changes sign once)\n");

    // The two-step difference W_{2n+2} - W_{2n} = W_{2n}(v, xi') with xi'
    // the discrete-heat increment of xi; its total mass is zero.
    let xi_prime = harmonic_difference(&xi);
    assert!(xi_prime.total() == ExactRational::from(num_bigint::BigInt::from(0)));
    println!("xi' = heat increment of xi, support size {}\n", xi_prime.iter().count());

    // Unimodality of n -> S_n(v): certified exactly through the term ratio.
    for x in [1u64, 3, 7] {
        let mode = unimodal_certificate_1d(x, 400).unwrap();
        println!("d=1, v = {x}: S_n(v) unimodal, mode at n = {mode} (= v^2)");
    }
    for (x, y) in [(2u64, 1u64), (5, 3), (8, 0)] {
        assert!(unimodal_certificate_2d(x, y, 400));
        println!("d=2, v = ({x},{y}): S_n(v) unimodal through n = 400 (certified)");
    }

    // Decay of |Delta_w| in |w| for a point-source run: the fitted log-log
    // slope is steeper than the guaranteed -(d+1).
    let d = 1;
    let n = 64u64;
    let chips = ChipConfig::from_entries(d, [(LatticePoint::origin(d), n)]);
    let trace = run(&chips, &RotorField::new(d, 0), n);
    let table = PathCountTable::build_symmetric(d, n);
    let offsets: Vec<LatticePoint> = (4i64..=20).map(|w| LatticePoint::new(vec![w])).collect();
    let fit = delta_decay_fit(&table, &trace, &LatticePoint::origin(d), &offsets)
        .unwrap()
        .expect("nonzero deltas");
    println!("\n|Delta_w| ~ |w|^slope for a 64-chip point source, d = 1:");
    println!("  fitted slope = {:.3} (guaranteed <= -(d+1) = -2)", fit.slope);
    assert!(fit.slope <= -2.0 + 0.5);
}
