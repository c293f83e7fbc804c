//! Realizes a Verma module by PBW monomials, prints a few Shapovalov Gram
//! matrices and compares the radical quotient with Freudenthal multiplicities.
//!
//!     cargo run --release --example shapovalov -- 1,1 4

use std::time::Instant;

use affine_km::affine_roots::AffineWeight;
use affine_km::characters::{freudenthal_character, irreducible_window};
use affine_km::finite_cartan::FiniteCartan;
use affine_km::highest_weight_modules::{build_verma_in, irreducible_quotient, shapovalov_gram};
use affine_km::lattice::RootVec;

fn main() {
    let mut args = std::env::args().skip(1);
    let labels: Vec<i64> = args
        .next()
        .unwrap_or_else(|| "1,0".into())
        .split(',')
        .map(|s| s.trim().parse().expect("labels are integers"))
        .collect();
    let depth: u32 = args
        .next()
        .map_or(3, |s| s.parse().expect("depth is an integer"));

    let fc = FiniteCartan::new("A1".parse().unwrap());
    let lambda = AffineWeight::from_dynkin_ints(&fc, &labels).unwrap();

    let t = Instant::now();
    let window = irreducible_window(&fc, &lambda, depth);
    let verma = build_verma_in(&fc, &lambda, &window).unwrap();
    println!(
        "M({lambda}) on the box β ≤ {window}: {} weight spaces in {:?}",
        verma.spaces.len(),
        t.elapsed()
    );

    for beta in [vec![0, 0], vec![0, 1], vec![1, 0], vec![1, 1]] {
        let beta = RootVec(beta);
        if let Ok(g) = shapovalov_gram(&verma, &beta) {
            println!("Gram at λ − {beta}: {g:?}");
        }
    }

    let t = Instant::now();
    let quotient = irreducible_quotient(&fc, &verma).unwrap();
    println!("radical quotient in {:?}", t.elapsed());

    let ch = freudenthal_character(&fc, &lambda, depth).unwrap();
    let mut agree = true;
    for (beta, &m) in &ch.coeffs {
        if quotient.dim(beta) as u64 != m {
            println!(
                "mismatch at {beta}: quotient {} vs Freudenthal {m}",
                quotient.dim(beta)
            );
            agree = false;
        }
    }
    agree &= quotient.sorted_spaces().iter().all(|(b, _)| ch.mult(b) > 0);
    println!(
        "quotient dims {} Freudenthal",
        if agree { "match" } else { "differ from" }
    );
    print!("{}", quotient.dims_tsv(&fc));
}
