//! Enumerates the affine Weyl group by length, with `l(w)`, `s(w)` and the
//! dot action on `Λ̃_0`.
//!
//!     cargo run --example weyl_group -- A1~ 4

use affine_km::affine_roots::fundamental_weight;
use affine_km::affine_weyl::{classify_weight, enumerate};
use affine_km::finite_cartan::FiniteCartan;

fn main() {
    let mut args = std::env::args().skip(1);
    let fc = FiniteCartan::new(args.next().unwrap_or_else(|| "A1~".into()).parse().unwrap());
    let max_len: usize = args.next().map_or(3, |s| s.parse().unwrap());
    let lam0 = fundamental_weight(&fc, 0).unwrap();

    let words = enumerate(&fc, max_len);
    let mut counts = vec![0; max_len + 1];
    for w in &words {
        counts[w.length()] += 1;
        let nu = w.dot(&fc, &lam0);
        let back = classify_weight(&fc, &nu, &lam0, max_len).unwrap();
        assert_eq!(back.as_ref(), Some(w));
        println!(
            "{:<14} l={} s={} {}  w·Λ̃_0 = {}",
            w.to_string(),
            w.length(),
            w.s_index(&fc),
            if w.negates_alpha0(&fc) {
                "wα₀=−α₀"
            } else {
                "       "
            },
            nu
        );
    }
    println!("elements by length: {counts:?}");
}
