//! The Gaussian picture: discrete gradients of the kernel against gradients
//! of the Gaussian density, and the shape of f(t) = p(t, x-z) - p(t, x).

use num_traits::ToPrimitive;
use rotorlab::conjectures::{
    claim4_max_scan, default_t_grid, gaussian_diff_sequence, local_extrema_f64, sign_changes_f64,
};
use rotorlab::kernel::{grad_z, lclt_error, ClosedFormKernel};
use rotorlab::LatticePoint;

fn main() {
    let d = 2;
    let kernel = ClosedFormKernel::new(d);
    let x = LatticePoint::new(vec![6, 2]);
    let z = LatticePoint::new(vec![1, 1]);

    // grad_z S_t(x) = S_t(x - z) - S_t(x), and its Gaussian prediction.
    println!("discrete gradient along z = {z} at x = {x}:");
    println!("{:>6} {:>14} {:>14}", "t", "grad_z S_t(x)", "lclt error");
    for t in [16u64, 32, 64, 128] {
        let g = grad_z(&kernel, &x, &z, t).unwrap().to_f64().unwrap();
        let err = lclt_error(&kernel, &x, &z, t).unwrap();
        println!("{:>6} {:>14.3e} {:>14.3e}", t, g, err);
    }

    // f(t) = p(t, x-z) - p(t, x) for the Gaussian density itself: one sign
    // change and a handful of local extrema over the relevant t-range.
    let x = LatticePoint::new(vec![10, 0]);
    let (t0, t1) = default_t_grid(&x);
    let f = gaussian_diff_sequence(d, &x, &z, t0, t1);
    println!(
        "\nf(t) = p(t, x-z) - p(t, x) for x = {x}, z = {z}, t in [{t0}, {t1}]:"
    );
    println!("  sign changes: {}", sign_changes_f64(&f));
    println!("  local extrema: {}", local_extrema_f64(&f, 1e-12));

    // The maximizer of |f| sits near t = d|x|^2 / (d+2).
    let xs: Vec<LatticePoint> = [10i64, 14, 20, 28, 40]
        .iter()
        .map(|&a| LatticePoint::new(vec![a, 0]))
        .collect();
    println!("\nargmax_t |f(t)| against the prediction d|x|^2/(d+2):");
    println!("{:>8} {:>10} {:>12} {:>14}", "|x|", "argmax", "predicted", "max|f|*|x|^3");
    for row in claim4_max_scan(d, &xs, &z) {
        println!(
            "{:>8.1} {:>10} {:>12.1} {:>14.5}",
            row.x.l2_norm(),
            row.argmax_t,
            row.predicted_t,
            row.max_abs * row.x.l2_norm().powi(3)
        );
    }
}
