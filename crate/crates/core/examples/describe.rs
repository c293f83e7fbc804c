//! Affine Cartan data for a few algebras.
//!
//!     cargo run --example describe -- A2~

use affine_km::affine_roots::{
    affine_cartan_matrix, affine_comarks, affine_marks, fundamental_weight, positive_roots_up_to,
    rho_tilde, simple_root,
};
use affine_km::finite_cartan::FiniteCartan;

fn main() {
    let names: Vec<String> = std::env::args().skip(1).collect();
    let names = if names.is_empty() {
        vec!["A1~".into(), "A2~".into(), "G2~".into()]
    } else {
        names
    };
    for name in names {
        let ty = match name.parse() {
            Ok(t) => t,
            Err(e) => {
                eprintln!("{name}: {e}");
                continue;
            }
        };
        let fc = FiniteCartan::new(ty);
        let l = fc.rank();
        println!(
            "{name}: dim g = {}, Coxeter number {}",
            fc.dim(),
            fc.coxeter_g
        );
        for row in affine_cartan_matrix(&fc) {
            println!("  {row:?}");
        }
        println!(
            "  marks {:?}, comarks {:?}",
            affine_marks(&fc),
            affine_comarks(&fc)
        );
        for i in 0..=l {
            println!(
                "  α_{i} = {}   Λ̃_{i} = {}",
                simple_root(&fc, i),
                fundamental_weight(&fc, i).unwrap()
            );
        }
        println!("  ρ̃ = {}", rho_tilde(&fc));
        let roots = positive_roots_up_to(&fc, 1);
        let imaginary: Vec<_> = roots.iter().filter(|r| !r.is_real()).collect();
        println!(
            "  {} positive roots of degree ≤ 1 ({} imaginary, multiplicity {})",
            roots.len(),
            imaginary.len(),
            imaginary.first().map_or(0, |r| r.multiplicity)
        );
    }
}
