//! Checks the affine denominator identity term by term.
//!
//!     cargo run --release --example denominator -- A2~ 5

use affine_km::affine_roots::AffineWeight;
use affine_km::characters::{denominator_identity_check, sufficient_max_len};
use affine_km::finite_cartan::FiniteCartan;

fn main() {
    let mut args = std::env::args().skip(1);
    let fc = FiniteCartan::new(args.next().unwrap_or_else(|| "A1~".into()).parse().unwrap());
    let depth: u32 = args.next().map_or(8, |s| s.parse().unwrap());
    let max_len = sufficient_max_len(&fc, &AffineWeight::zero(fc.rank()), depth);
    let t = std::time::Instant::now();
    let report = denominator_identity_check(&fc, depth, max_len).unwrap();
    println!(
        "{}~ to degree {depth}: {} nonzero product terms, {} Weyl terms (length ≤ {max_len}) in {:?}",
        fc.ty,
        report.terms,
        report.weyl_terms,
        t.elapsed()
    );
    match &report.mismatch {
        None => println!("identity holds"),
        Some((beta, p, w)) => println!("mismatch at {beta}: product {p}, Weyl sum {w}"),
    }
}
