//! Randomized checks of the structural properties every module promises.

use std::collections::BTreeMap;

use affine_km::affine_roots::{fundamental_weight, rho_tilde, weight_form, AffineWeight};
use affine_km::affine_weyl::{canonical_reduce, classify_weight, reflect};
use affine_km::characters::{
    freudenthal_character, partition_fn, partition_fn_brute, sufficient_max_len, times_denominator,
    verma_character, weyl_kac_character,
};
use affine_km::finite_cartan::FiniteCartan;
use affine_km::lattice::RootVec;
use affine_km::linalg::{QMatrix, SparseMatrix};
use affine_km::loop_algebra::{bracket, invariant_form, LoopElement};
use affine_km::nilpotent_cohomology::kostant_verify;
use affine_km::rational::{q, q_frac};
use proptest::prelude::*;

const TYPES: [&str; 8] = ["A1", "A2", "A3", "B2", "B3", "C3", "D4", "G2"];

fn fc(name: &str) -> FiniteCartan {
    FiniteCartan::new(name.parse().unwrap())
}

fn loop_element(f: &FiniteCartan, terms: &[(i64, usize, i64)], c: i64, d: i64) -> LoopElement {
    let mut x = LoopElement::zero();
    for &(n, a, k) in terms {
        x.add_term(n, a % f.dim(), &q(k));
    }
    x.c = q(c);
    x.d = q(d);
    x
}

fn terms() -> impl Strategy<Value = Vec<(i64, usize, i64)>> {
    prop::collection::vec((-2i64..=2, 0usize..64, -3i64..=3), 0..4)
}

type RawWeight = (Vec<(i64, i64)>, i64, i64);

fn raw_weight() -> impl Strategy<Value = RawWeight> {
    (
        prop::collection::vec((-6i64..=6, 1i64..=3), 8),
        -4i64..=4,
        -4i64..=4,
    )
}

fn weight(rank: usize, (fin, k, n): RawWeight) -> AffineWeight {
    AffineWeight::new(
        fin.into_iter()
            .take(rank)
            .map(|(a, b)| q_frac(a, b))
            .collect(),
        q(k),
        q(n),
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn finite_jacobi(t in 0usize..TYPES.len(), x in 0usize..64, y in 0usize..64, z in 0usize..64) {
        let f = fc(TYPES[t]);
        let (x, y, z) = (x % f.dim(), y % f.dim(), z % f.dim());
        let e = |a| LoopElement::basis(0, a);
        let (ex, ey, ez) = (e(x), e(y), e(z));
        let j = bracket(&f, &ex, &bracket(&f, &ey, &ez))
            .sum(&bracket(&f, &ey, &bracket(&f, &ez, &ex)))
            .sum(&bracket(&f, &ez, &bracket(&f, &ex, &ey)));
        prop_assert!(j.is_zero());
        // antisymmetry of the structure constants
        prop_assert_eq!(f.structure_constant(x, y), -f.structure_constant(y, x));
    }

    #[test]
    fn loop_jacobi_and_invariance(
        t in 0usize..3,
        a in terms(), b in terms(), c in terms(),
        cd in prop::array::uniform6(-2i64..=2),
    ) {
        let f = fc(["A1", "A2", "B2"][t]);
        let x = loop_element(&f, &a, cd[0], cd[1]);
        let y = loop_element(&f, &b, cd[2], cd[3]);
        let z = loop_element(&f, &c, cd[4], cd[5]);
        let j = bracket(&f, &x, &bracket(&f, &y, &z))
            .sum(&bracket(&f, &y, &bracket(&f, &z, &x)))
            .sum(&bracket(&f, &z, &bracket(&f, &x, &y)));
        prop_assert!(j.is_zero());
        prop_assert!(bracket(&f, &x, &y).sum(&bracket(&f, &y, &x)).is_zero());
        prop_assert_eq!(
            invariant_form(&f, &bracket(&f, &x, &y), &z),
            invariant_form(&f, &x, &bracket(&f, &y, &z))
        );
        prop_assert_eq!(invariant_form(&f, &x, &y), invariant_form(&f, &y, &x));
    }

    #[test]
    fn reflections_preserve_form_and_level(t in 0usize..TYPES.len(), a in raw_weight(), b in raw_weight(), i in 0usize..8) {
        let f = fc(TYPES[t]);
        let lam = weight(f.rank(), a);
        let mu = weight(f.rank(), b);
        let i = i % (f.rank() + 1);
        let (rl, rm) = (reflect(&f, &lam, i), reflect(&f, &mu, i));
        prop_assert_eq!(&reflect(&f, &rl, i), &lam);
        prop_assert_eq!(&rl.level, &lam.level);
        prop_assert_eq!(weight_form(&f, &rl, &rm), weight_form(&f, &lam, &mu));
        // printing and parsing round-trip
        prop_assert_eq!(&rl.to_string().parse::<AffineWeight>().unwrap(), &rl);
    }

    #[test]
    fn canonical_words_act_like_their_letters(t in 0usize..3, letters in prop::collection::vec(0usize..4, 0..9)) {
        let f = fc(["A1", "A2", "C3"][t]);
        let letters: Vec<usize> = letters.into_iter().map(|i| i % (f.rank() + 1)).collect();
        let w = canonical_reduce(&f, &letters);
        let lam = &rho_tilde(&f) + &fundamental_weight(&f, 0).unwrap();
        let mut direct = &lam + &rho_tilde(&f);
        for &i in letters.iter().rev() {
            direct = reflect(&f, &direct, i);
        }
        prop_assert_eq!(&w.dot(&f, &lam), &(&direct - &rho_tilde(&f)));
        prop_assert!(w.length() <= letters.len());
        prop_assert_eq!(w.length() % 2, letters.len() % 2);
        prop_assert_eq!(canonical_reduce(&f, &w.letters), w.clone());
        // dot is a group action
        let (u, v) = letters.split_at(letters.len() / 2);
        let (u, v) = (canonical_reduce(&f, u), canonical_reduce(&f, v));
        prop_assert_eq!(u.dot(&f, &v.dot(&f, &lam)), w.dot(&f, &lam));
        let found = classify_weight(&f, &w.dot(&f, &lam), &lam, 12).unwrap();
        prop_assert_eq!(found, Some(w));
    }

    #[test]
    fn partition_table_matches_brute_force(b0 in 0i64..=3, b1 in 0i64..=4) {
        let f = fc("A1");
        let beta = RootVec(vec![b0, b1]);
        prop_assert_eq!(partition_fn(&f, &beta), partition_fn_brute(&f, &beta));
    }

    #[test]
    fn sparse_rank_matches_dense(rows in prop::collection::vec(prop::collection::vec(-2i64..=2, 6), 1..7)) {
        let dense = QMatrix::from_rows(rows.iter().map(|r| r.iter().map(|&x| q(x)).collect()).collect());
        let mut sparse = SparseMatrix::new(rows.len(), 6);
        for (i, r) in rows.iter().enumerate() {
            for (j, &x) in r.iter().enumerate() {
                if x != 0 {
                    sparse.add_entry(i, j, &q(x));
                }
            }
        }
        prop_assert_eq!(sparse.rank(), dense.rank());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn irreducible_characters_are_weyl_invariant_and_match_weyl_kac(m0 in 0i64..=2, m1 in 0i64..=2) {
        prop_assume!(m0 + m1 > 0);
        let f = fc("A1");
        let lam = AffineWeight::from_dynkin_ints(&f, &[m0, m1]).unwrap();
        let depth = 3;
        let ch = freudenthal_character(&f, &lam, depth).unwrap();
        let wk = weyl_kac_character(&f, &lam, depth, sufficient_max_len(&f, &lam, depth)).unwrap();
        prop_assert_eq!(&ch.coeffs, &wk.coeffs);
        // the finite reflection preserves degree, so it stays inside the truncation
        for beta in ch.coeffs.keys() {
            let mu = lam.sub_root(&f, beta);
            prop_assert_eq!(ch.mult_of_weight(&f, &reflect(&f, &mu, 1)), ch.mult(beta));
        }
    }

    #[test]
    fn verma_truncation_is_stable_and_inverts_the_denominator(d in 0u32..=3) {
        let f = fc("A1");
        let lam = fundamental_weight(&f, 0).unwrap();
        let small = verma_character(&f, &lam, d);
        let big = verma_character(&f, &lam, d + 1);
        for (b, m) in &small.coeffs {
            prop_assert_eq!(big.mult(b), *m);
        }
        let window = affine_km::characters::verma_window(&f, d);
        let prod = times_denominator(&f, &small, d);
        let inside: BTreeMap<&RootVec, &i64> = prod.iter().filter(|(b, _)| (*b).le(&window)).collect();
        let zero = RootVec::zero(2);
        prop_assert_eq!(inside, BTreeMap::from([(&zero, &1)]));
    }

    #[test]
    fn cohomology_complexes_are_consistent(m0 in 0i64..=2, m1 in 0i64..=1) {
        let f = fc("A1");
        let lam = AffineWeight::from_dynkin_ints(&f, &[m0, m1]).unwrap();
        let rep = kostant_verify(&f, &lam, 1, &[]).unwrap();
        prop_assert!(rep.structural_ok());
        for r in &rep.records {
            prop_assert_eq!(r.complex.concentration(), Some((r.classify.as_ref().unwrap().length, 1)));
        }
    }
}

#[test]
fn fundamental_weights_are_dual_to_coroots() {
    for name in [
        "A1", "A2", "A4", "B3", "C4", "D5", "E6", "E7", "E8", "F4", "G2",
    ] {
        let f = fc(name);
        for i in 0..=f.rank() {
            let w = fundamental_weight(&f, i).unwrap();
            for j in 0..=f.rank() {
                assert_eq!(w.pair_coroot(&f, j), q(i64::from(i == j)), "{name} {i} {j}");
            }
        }
    }
}
