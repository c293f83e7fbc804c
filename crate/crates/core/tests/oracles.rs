//! Small worked examples, each checked against an independently computed value.

use std::collections::BTreeSet;

use affine_km::affine_roots::{
    affine_cartan_matrix, fundamental_weight, positive_roots_up_to, rho_tilde, root_multiplicity,
    simple_root, weight_form, AffineWeight,
};
use affine_km::affine_weyl::{canonical_reduce, classify_weight, enumerate, reflect};
use affine_km::characters::{
    denominator_identity_check, freudenthal_character, numerator_terms, partition_fn,
    sufficient_max_len, weyl_kac_character,
};
use affine_km::error::KmError;
use affine_km::finite_cartan::{CartanType, FiniteCartan};
use affine_km::highest_weight_modules::{build_verma, irreducible_module, shapovalov_gram};
use affine_km::lattice::RootVec;
use affine_km::loop_algebra::{
    bracket, chevalley_e, chevalley_f, invariant_form, ntilde_basis, LoopElement,
};
use affine_km::nilpotent_cohomology::{
    chain_space, cohomology_dims, kostant_verify, weight_complex, CohomologyContext,
};
use affine_km::rational::q;

fn fc(name: &str) -> FiniteCartan {
    FiniteCartan::new(name.parse().unwrap())
}

fn rv(v: &[i64]) -> RootVec {
    RootVec(v.to_vec())
}

fn lambda0(f: &FiniteCartan) -> AffineWeight {
    fundamental_weight(f, 0).unwrap()
}

/// Positive roots by closing the simple roots under the string rule, independent of the library's list.
fn root_closure(cartan: &[Vec<i64>]) -> BTreeSet<Vec<i64>> {
    let l = cartan.len();
    let mut roots: BTreeSet<Vec<i64>> = (0..l)
        .map(|i| (0..l).map(|j| i64::from(i == j)).collect())
        .collect();
    loop {
        let mut added = false;
        for r in roots.clone() {
            for i in 0..l {
                // α + α_i is a root iff p − q < 0 where q = ⟨α, α_i^∨⟩ and p the string length below
                let pair: i64 = (0..l).map(|j| r[j] * cartan[i][j]).sum();
                let mut p = 0;
                let mut down = r.clone();
                loop {
                    down[i] -= 1;
                    if roots.contains(&down) {
                        p += 1;
                    } else {
                        break;
                    }
                }
                if p - pair > 0 {
                    let mut up = r.clone();
                    up[i] += 1;
                    added |= roots.insert(up);
                }
            }
        }
        if !added {
            return roots;
        }
    }
}

#[test]
fn finite_root_systems() {
    let a1 = fc("A1");
    assert_eq!(
        (
            a1.num_positive(),
            a1.theta.clone(),
            a1.marks.clone(),
            a1.comarks.clone(),
            a1.coxeter_g
        ),
        (1, rv(&[1]), vec![1], vec![1], 2)
    );
    let a2 = fc("A2");
    assert_eq!(
        a2.positive_roots.iter().cloned().collect::<BTreeSet<_>>(),
        BTreeSet::from([rv(&[1, 0]), rv(&[0, 1]), rv(&[1, 1])])
    );
    assert_eq!((a2.theta.clone(), a2.coxeter_g), (rv(&[1, 1]), 3));
    let g2 = fc("G2");
    assert_eq!(g2.num_positive(), 6);
    assert!(g2.marks == vec![3, 2] || g2.marks == vec![2, 3]);
    assert_eq!(g2.coxeter_g, 4);
    let closed_form = [
        ("A1", 1),
        ("A2", 3),
        ("A3", 6),
        ("A5", 15),
        ("B2", 4),
        ("B3", 9),
        ("B4", 16),
        ("C3", 9),
        ("C4", 16),
        ("D4", 12),
        ("D5", 20),
        ("E6", 36),
        ("E7", 63),
        ("E8", 120),
        ("F4", 24),
        ("G2", 6),
    ];
    for (name, n) in closed_form {
        let f = fc(name);
        assert_eq!(f.num_positive(), n, "{name}");
        let closure = root_closure(&f.cartan);
        let ours: BTreeSet<Vec<i64>> = f.positive_roots.iter().map(|r| r.0.clone()).collect();
        assert_eq!(closure, ours, "{name}");
        assert_eq!(f.coxeter_g, 1 + f.comarks.iter().sum::<i64>(), "{name}");
    }
}

#[test]
fn a2_structure_constant_is_normalized() {
    let a2 = fc("A2");
    let (i, j) = (a2.e_index(0), a2.e_index(1));
    assert_eq!(a2.structure_constant(i, j).abs(), 1);
}

#[test]
fn loop_bracket_and_form() {
    let a1 = fc("A1");
    let (e, f, h) = (a1.e_index(0), a1.f_index(0), a1.h_index(0));
    let got = bracket(&a1, &LoopElement::basis(1, e), &LoopElement::basis(-1, f));
    let want = LoopElement::basis(0, h).sum(&LoopElement::central());
    assert_eq!(got, want);
    assert_eq!(
        invariant_form(&a1, &LoopElement::basis(2, e), &LoopElement::basis(-2, f)),
        q(1)
    );
    assert_eq!(
        invariant_form(&a1, &LoopElement::basis(2, e), &LoopElement::basis(-1, f)),
        q(0)
    );
    assert_eq!(ntilde_basis(&a1, 1).len(), 4);
    assert_eq!(ntilde_basis(&a1, 2).len(), 7);
    // e_0 and f_0 pair through the affine coroot
    let h0 = bracket(&a1, &chevalley_e(&a1, 0), &chevalley_f(&a1, 0));
    assert_eq!(invariant_form(&a1, &h0, &LoopElement::derivation()), q(1));
}

#[test]
fn affine_root_data() {
    assert_eq!(
        affine_cartan_matrix(&fc("A1")),
        vec![vec![2, -2], vec![-2, 2]]
    );
    assert_eq!(
        affine_cartan_matrix(&fc("A2")),
        vec![vec![2, -1, -1], vec![-1, 2, -1], vec![-1, -1, 2]]
    );
    let a1 = fc("A1");
    let roots = positive_roots_up_to(&a1, 1);
    assert_eq!(roots.iter().map(|r| r.multiplicity).sum::<usize>(), 4);
    let a2 = fc("A2");
    let roots = positive_roots_up_to(&a2, 1);
    assert_eq!(
        roots.iter().map(|r| r.multiplicity).sum::<usize>(),
        3 + 6 + 2
    );
    assert_eq!(roots.len(), 10);
    assert_eq!(root_multiplicity(&a2, &rv(&[1, 1, 1])), 2);
    let l0 = lambda0(&a1);
    assert_eq!(weight_form(&a1, &l0, &l0), q(0));
    let rho = rho_tilde(&a1);
    assert_eq!(weight_form(&a1, &rho, &AffineWeight::delta(1)), q(2));
    assert_eq!(rho, AffineWeight::from_ints(&[1], 2, 0));
    assert_eq!(rho_tilde(&a2).level, q(3));
    assert_eq!(simple_root(&a1, 0), AffineWeight::from_ints(&[-2], 0, 1));
}

#[test]
fn reflections_and_dot_action() {
    let a1 = fc("A1");
    let rho = rho_tilde(&a1);
    assert_eq!(reflect(&a1, &rho, 1), AffineWeight::from_ints(&[-1], 2, 0));
    assert_eq!(reflect(&a1, &rho, 0), AffineWeight::from_ints(&[3], 2, -1));
    let l0 = lambda0(&a1);
    let r1 = canonical_reduce(&a1, &[1]);
    let r0 = canonical_reduce(&a1, &[0]);
    assert_eq!(r1.dot(&a1, &l0), AffineWeight::from_ints(&[-2], 1, 0));
    assert_eq!(r0.dot(&a1, &l0), AffineWeight::from_ints(&[4], 1, -2));
    for k in 0..8 {
        let alternating: Vec<usize> = (0..k).map(|i| i % 2).collect();
        assert_eq!(canonical_reduce(&a1, &alternating).length(), k);
    }
    assert_eq!(r1.s_index(&a1), 1);
    assert_eq!(enumerate(&a1, 3).len(), 7);
    assert_eq!(enumerate(&fc("A2"), 2).len(), 10);
    assert_eq!(
        classify_weight(&a1, &AffineWeight::from_ints(&[-2], 1, 0), &l0, 6).unwrap(),
        Some(r1)
    );
    let minus_delta = AffineWeight::from_ints(&[0], 1, -1);
    assert_eq!(classify_weight(&a1, &minus_delta, &l0, 8).unwrap(), None);
}

#[test]
fn s_index_when_alpha0_is_negated() {
    let a1 = fc("A1");
    let found = enumerate(&a1, 8)
        .into_iter()
        .find(|w| w.negates_alpha0(&a1));
    if let Some(w) = found {
        assert_eq!(w.s_index(&a1), w.length() + 1);
    }
    assert_eq!(canonical_reduce(&a1, &[0]).s_index(&a1), 2);
}

#[test]
fn partition_and_character_values() {
    let a1 = fc("A1");
    assert_eq!(partition_fn(&a1, &rv(&[1, 1])), 2);
    let l0 = lambda0(&a1);
    let ch = freudenthal_character(&a1, &l0, 6).unwrap();
    assert_eq!(ch.delta_string(&a1), vec![1, 1, 2, 3, 5, 7, 11]);
    assert_eq!(ch.mult(&rv(&[0, 1])), 0);
    let wk = weyl_kac_character(&a1, &l0, 4, sufficient_max_len(&a1, &l0, 4)).unwrap();
    assert_eq!(
        wk.coeffs,
        freudenthal_character(&a1, &l0, 4).unwrap().coeffs
    );
    let trivial = weyl_kac_character(&a1, &AffineWeight::zero(1), 3, 6).unwrap();
    assert_eq!(trivial.coeffs.len(), 1);
    assert_eq!(trivial.mult(&rv(&[0, 0])), 1);
}

#[test]
fn denominator_identity() {
    let a1 = fc("A1");
    assert!(denominator_identity_check(&a1, 6, 12).unwrap().ok());
    assert!(denominator_identity_check(&fc("A2"), 4, 8).unwrap().ok());
    let at_zero = denominator_identity_check(&a1, 0, 2).unwrap();
    assert!(at_zero.ok());
    // only e and r_1 stay in degree 0: the finite A1 identity 1 − e^{−α_1}
    assert_eq!(at_zero.weyl_terms, 2);
}

#[test]
fn verma_and_shapovalov_examples() {
    let a1 = fc("A1");
    let l0 = lambda0(&a1);
    let verma = build_verma(&a1, &l0, 2).unwrap();
    assert_eq!(verma.dim(&rv(&[1, 1])), 2);
    assert_eq!(
        shapovalov_gram(&verma, &rv(&[0, 1])).unwrap().row(0),
        vec![q(0)]
    );
    assert_eq!(
        shapovalov_gram(&verma, &rv(&[1, 0])).unwrap().row(0),
        vec![q(1)]
    );
    let irr = irreducible_module(&a1, &l0, 4).unwrap();
    assert_eq!(irr.dim(&rv(&[0, 1])), 0);
    let string: Vec<usize> = (0..=4).map(|n| irr.dim(&rv(&[n, n]))).collect();
    assert_eq!(string, vec![1, 1, 2, 3, 5]);
}

#[test]
fn cohomology_examples() {
    let a1 = fc("A1");
    let l0 = lambda0(&a1);
    let module = irreducible_module(&a1, &l0, 3).unwrap();
    let ctx = CohomologyContext::new(&a1, &module).unwrap();
    let r1 = AffineWeight::from_ints(&[-2], 1, 0);
    assert_eq!(chain_space(&ctx, &r1, 1).unwrap().dim(), 1);

    assert_eq!(cohomology_dims(&ctx, &l0, 0..=2).unwrap(), vec![1, 0, 0]);
    assert_eq!(cohomology_dims(&ctx, &r1, 0..=2).unwrap(), vec![0, 1, 0]);
    let at_r0 = weight_complex(&ctx, &AffineWeight::from_ints(&[4], 1, -2)).unwrap();
    assert_eq!(at_r0.concentration(), Some((1, 1)));
    let off = cohomology_dims(&ctx, &AffineWeight::from_ints(&[0], 1, -1), 0..=3).unwrap();
    assert_eq!(off, vec![0; 4]);

    let rep = kostant_verify(&a1, &l0, 2, &[]).unwrap();
    assert_eq!(rep.records.len(), 5);
    assert!(rep
        .records
        .iter()
        .all(|r| r.complex.concentration().map(|c| c.1) == Some(1)));
    assert!(rep.all_l());
    assert!(!rep.all_s());

    let a2 = fc("A2");
    let rep = kostant_verify(&a2, &lambda0(&a2), 1, &[]).unwrap();
    let degree_one: Vec<_> = rep
        .records
        .iter()
        .filter(|r| r.classify.as_ref().unwrap().length == 1)
        .collect();
    assert_eq!(degree_one.len(), 3);
    assert!(degree_one
        .iter()
        .all(|r| r.complex.concentration() == Some((1, 1))));

    let trivial = kostant_verify(&a1, &AffineWeight::zero(1), 1, &[]).unwrap();
    let at_zero = trivial.records.iter().find(|r| r.beta.is_zero()).unwrap();
    assert_eq!(at_zero.complex.cohomology[0], 1);
    assert!(kostant_verify(
        &a1,
        &AffineWeight::from_dynkin_ints(&a1, &[1, 1]).unwrap(),
        1,
        &[]
    )
    .unwrap()
    .all_l());
}

#[test]
fn errors_are_reported() {
    let a1 = fc("A1");
    let l0 = lambda0(&a1);
    assert!(matches!(
        "Z9".parse::<CartanType>(),
        Err(KmError::InvalidType(_))
    ));
    assert!(matches!(
        fundamental_weight(&a1, 5),
        Err(KmError::IndexOutOfRange { index: 5, max: 1 })
    ));
    assert!(matches!(
        numerator_terms(&a1, &l0, 6, 1),
        Err(KmError::FrontierTooShallow { .. })
    ));
    let bad = AffineWeight::from_dynkin_ints(&a1, &[-3, 0]).unwrap();
    assert!(matches!(
        kostant_verify(&a1, &bad, 1, &[]),
        Err(KmError::NotRegularDominant(_))
    ));
    let verma = build_verma(&a1, &l0, 2).unwrap();
    assert!(matches!(
        CohomologyContext::new(&a1, &verma),
        Err(KmError::NotDominant(_))
    ));
    let module = irreducible_module(&a1, &l0, 1).unwrap();
    let ctx = CohomologyContext::new(&a1, &module).unwrap();
    let deep = AffineWeight::from_ints(&[0], 1, -3);
    assert!(matches!(
        weight_complex(&ctx, &deep),
        Err(KmError::DepthInsufficient {
            required: 3,
            available: 1
        })
    ));
}
