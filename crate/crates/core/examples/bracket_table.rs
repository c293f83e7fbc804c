//! The loop algebra bracket: Chevalley generators of the affine algebra and
//! the structure constants of `ñ₊` in low degree.

use affine_km::finite_cartan::FiniteCartan;
use affine_km::loop_algebra::{
    bracket, chevalley_e, chevalley_f, chevalley_h, invariant_form, LoopElement, NTilde,
};
use affine_km::rational::fmt_q;

fn main() {
    let fc = FiniteCartan::new("A1".parse().unwrap());
    for i in 0..=fc.rank() {
        let h = bracket(&fc, &chevalley_e(&fc, i), &chevalley_f(&fc, i));
        println!("[e{i}, f{i}] = {h:?}   (h{i} = {:?})", chevalley_h(&fc, i));
    }
    let x = LoopElement::basis(1, 0);
    let y = LoopElement::basis(-1, 1);
    println!(
        "[z x0, z⁻¹ x1] = {:?}, (z x0 | z⁻¹ x1) = {}",
        bracket(&fc, &x, &y),
        fmt_q(&invariant_form(&fc, &x, &y))
    );

    let nt = NTilde::new(&fc, 2);
    for a in 0..nt.len() {
        for b in a + 1..nt.len() {
            let (ea, eb) = (&nt.elems[a], &nt.elems[b]);
            if ea.z_exp + eb.z_exp > 2 {
                continue;
            }
            let c = nt
                .coords(&bracket(&fc, &ea.element(), &eb.element()))
                .unwrap();
            if !c.is_empty() {
                let terms: Vec<String> = c
                    .iter()
                    .map(|(k, q)| format!("{}·{}", fmt_q(q), nt.elems[*k].label(&fc)))
                    .collect();
                println!(
                    "[{}, {}] = {}",
                    ea.label(&fc),
                    eb.label(&fc),
                    terms.join(" + ")
                );
            }
        }
    }
}
