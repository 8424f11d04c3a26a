//! The weight function W_t(v, chi_t) as a quasi-martingale X_t, and the exact
//! per-site decomposition X_n - X_0 = sum over offsets w of Delta_w.
//!
//! Each rotor move at v + w contributes a signed kernel difference to the
//! target's weight; a vertex that fires a multiple of 2d chips contributes
//! nothing at all. The sum telescopes exactly, in BigRational arithmetic.

use num_traits::{Signed, ToPrimitive, Zero};
use rotorlab::kernel::PathCountTable;
use rotorlab::machine::run;
use rotorlab::scenario::generate;
use rotorlab::weights::{decomposition_check, martingale_sequence};

fn main() {
    let sc = generate(7, 2, 24, 40);
    println!("seeded scenario: d = {}, n = {}, {} chips", sc.d, sc.n, sc.chip_config().total());

    let table = PathCountTable::build_symmetric(sc.d, sc.n);
    let trace = run(&sc.chip_config(), &sc.rotor_field(), sc.n);
    // A target whose parity mismatches the chips sees identically-zero
    // weights, so prefer one in the same parity class.
    let parity = sc.parity_class().unwrap();
    let v = sc
        .targets
        .iter()
        .find(|t| (t.parity() + (sc.n % 2) as u8) % 2 == parity)
        .cloned()
        .unwrap_or_else(|| rotorlab::LatticePoint::origin(sc.d));

    // X_t = W_t(v, chi_t) for t = n down to 0; X_0 is the final chip count.
    let xs = martingale_sequence(&table, &trace, &v).unwrap();
    println!("target v = {v}");
    println!("X_n = {} ({:.5})", xs[0], xs[0].to_f64().unwrap());
    println!("X_0 = {} (final chips at v)", xs[xs.len() - 1]);

    let report = decomposition_check(&table, &trace, &v).unwrap();
    let recomposed: rotorlab::ExactRational = report.deltas.values().sum();
    let change = &xs[0] - &xs[xs.len() - 1];
    assert_eq!(recomposed, change, "sum of Delta_w telescopes to X_n - X_0");
    assert_eq!(report.weight_change, change);
    println!("sum of Delta_w = {recomposed} = X_n - X_0  (exact)");

    let mut rows: Vec<_> = report
        .deltas
        .iter()
        .filter(|(_, d)| !d.is_zero())
        .collect();
    rows.sort_by(|a, b| b.1.abs().cmp(&a.1.abs()));
    println!("\nlargest per-site contributions:");
    println!("{:>10} {:>8} {:>12}", "w", "|w|", "Delta_w");
    for (w, delta) in rows.iter().take(8) {
        println!(
            "{:>10} {:>8.3} {:>12.6}",
            format!("{w}"),
            w.l2_norm(),
            delta.to_f64().unwrap()
        );
    }
    println!("({} offsets contributed, {} were exact zeros)",
        rows.len(), report.deltas.len() - rows.len());
}
