//! Irreducible and Verma characters: Freudenthal against Weyl–Kac, and the
//! partition-function Verma character.
//!
//!     cargo run --release --example characters -- 1,0 6

use affine_km::affine_roots::AffineWeight;
use affine_km::characters::{
    freudenthal_character, partition_fn, sufficient_max_len, verma_character, weyl_kac_character,
};
use affine_km::finite_cartan::FiniteCartan;
use affine_km::lattice::RootVec;

fn main() {
    let mut args = std::env::args().skip(1);
    let labels: Vec<i64> = args
        .next()
        .unwrap_or_else(|| "1,0".into())
        .split(',')
        .map(|s| s.parse().unwrap())
        .collect();
    let depth: u32 = args.next().map_or(6, |s| s.parse().unwrap());
    let fc = FiniteCartan::new("A1".parse().unwrap());
    let lambda = AffineWeight::from_dynkin_ints(&fc, &labels).unwrap();

    let f = freudenthal_character(&fc, &lambda, depth).unwrap();
    let max_len = sufficient_max_len(&fc, &lambda, depth);
    let wk = weyl_kac_character(&fc, &lambda, depth, max_len).unwrap();
    println!("L({lambda}) to depth {depth}, Weyl–Kac with words up to length {max_len}");
    println!("  along λ − nδ: {:?}", f.delta_string(&fc));
    println!(
        "  Freudenthal and Weyl–Kac agree: {}",
        f.coeffs == wk.coeffs
    );
    for (beta, m) in f.sorted_entries().into_iter().take(12) {
        println!("  {:<20} {m}", lambda.sub_root(&fc, beta).to_string());
    }

    let verma = verma_character(&fc, &lambda, 3);
    println!("M({lambda}) along λ − nδ: {:?}", verma.delta_string(&fc));
    println!("P(δ) = {}", partition_fn(&fc, &RootVec(vec![1, 1])));
}
