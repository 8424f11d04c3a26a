//! Exact heat kernels on Z^d: big-integer path counting, closed forms for
//! d = 1 and d = 2, and the Gaussian limit.

use num_traits::ToPrimitive;
use rotorlab::kernel::{
    closed_form_1d, closed_form_2d, gaussian_p, Kernel, PathCountTable,
};
use rotorlab::LatticePoint;

fn main() {
    // d = 1: S_t(w) = 2^{-t} C(t, (t+w)/2), checked against raw path counts.
    let table = PathCountTable::build(1, 20);
    for (t, w) in [(4u64, 0i64), (10, 2), (20, -6)] {
        let counted = table.s(t, &LatticePoint::new(vec![w])).unwrap();
        let closed = closed_form_1d(t, w);
        assert_eq!(counted, closed);
        println!("d=1  S_{t}({w:>2}) = {counted}");
    }

    // d = 2: the kernel factors into two binomials after a 45-degree rotation.
    let table2 = PathCountTable::build(2, 12);
    for (n, x, y) in [(2u64, 0i64, 0i64), (8, 2, 2), (12, 4, 0)] {
        let counted = table2.s(n, &LatticePoint::new(vec![x, y])).unwrap();
        let closed = closed_form_2d(n, x, y);
        assert_eq!(counted, closed);
        println!("d=2  S_{n}(({x},{y})) = {counted}");
    }

    // Discrete harmonicity: S_{t+1}(v) equals the average of S_t over the
    // 2d neighbors, which is exactly how the levels are built.
    let v = LatticePoint::new(vec![1, 1]);
    let avg: rotorlab::ExactRational = rotorlab::DirectionIndex::all(2)
        .map(|j| {
            table2
                .s(7, &v.sub(&rotorlab::lattice::direction_vector(j, 2)))
                .unwrap()
        })
        .sum::<rotorlab::ExactRational>()
        / rotorlab::ExactRational::from(num_bigint::BigInt::from(4));
    assert_eq!(avg, table2.s(8, &v).unwrap());
    println!("harmonic: S_8((1,1)) = avg of S_7 over neighbors = {avg}");

    // Gaussian limit: S_t(x) -> 2 (d/2 pi t)^{d/2} exp(-d|x|^2 / 2t).
    println!("\n{:>6} {:>14} {:>14} {:>10}", "t", "S_t(0)", "Gaussian", "ratio");
    let origin = LatticePoint::origin(2);
    let big = PathCountTable::build_symmetric(2, 256);
    for t in [16u64, 64, 256] {
        let exact = big.s(t, &origin).unwrap().to_f64().unwrap();
        let gauss = gaussian_p(2, t, &origin);
        println!("{:>6} {:>14.8} {:>14.8} {:>10.6}", t, exact, gauss, exact / gauss);
    }
}
