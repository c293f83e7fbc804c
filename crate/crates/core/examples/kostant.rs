//! Nilpotent cohomology `H^•(ñ₊; L(λ))` at the dot orbit of `λ` and at a few
//! control weights, with both degree indexings side by side.
//!
//!     cargo run --release --example kostant -- A1~ 1,0 2

use affine_km::affine_roots::AffineWeight;
use affine_km::finite_cartan::FiniteCartan;
use affine_km::nilpotent_cohomology::{default_controls, kostant_verify};

fn main() {
    let mut args = std::env::args().skip(1);
    let fc = FiniteCartan::new(args.next().unwrap_or_else(|| "A1~".into()).parse().unwrap());
    let labels: Vec<i64> = match args.next() {
        Some(s) => s.split(',').map(|x| x.parse().unwrap()).collect(),
        None => {
            let mut v = vec![0; fc.rank() + 1];
            v[0] = 1;
            v
        }
    };
    let max_len: usize = args.next().map_or(1, |s| s.parse().unwrap());
    let lambda = AffineWeight::from_dynkin_ints(&fc, &labels).unwrap();
    let controls = default_controls(&fc, &lambda, 3).unwrap();

    let t = std::time::Instant::now();
    let report = kostant_verify(&fc, &lambda, max_len, &controls).unwrap();
    print!("{}", report.to_tsv());
    println!(
        "module depth {}, {:?}; d² = 0 and Euler checks {}; uniform indexing: {}",
        report.module_depth,
        t.elapsed(),
        if report.structural_ok() {
            "hold"
        } else {
            "FAIL"
        },
        report.matching().name()
    );
}
