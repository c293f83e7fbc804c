//! The affine Weyl group `W̃` generated by `r_0, …, r_l`.
//!
//! Elements are identified by their image of `ρ̃`, which is regular
//! dominant, so the action on it is faithful. Words are kept in a canonical
//! form: the lexicographically least reduced word, obtained by repeatedly
//! peeling off the smallest left descent.

use std::collections::HashSet;
use std::fmt;

use num_traits::{Signed, Zero};
use serde::{Serialize, Serializer};

use crate::affine_roots::{displacement, rho_tilde, simple_root, AffineWeight};
use crate::error::Result;
use crate::finite_cartan::FiniteCartan;
use crate::lattice::RootVec;

/// `r_i(λ) = λ − λ(α̌_i) α_i`.
pub fn reflect(fc: &FiniteCartan, lambda: &AffineWeight, i: usize) -> AffineWeight {
    let k = lambda.pair_coroot(fc, i);
    if k.is_zero() {
        return lambda.clone();
    }
    lambda - &simple_root(fc, i).scaled(&k)
}

/// An element of `W̃` as its canonical reduced word.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct WeylWord {
    /// Generator indices; the word is `r_{letters[0]} r_{letters[1]} ⋯`.
    pub letters: Vec<usize>,
    /// `w(ρ̃)`.
    pub image: AffineWeight,
}

impl WeylWord {
    pub fn identity(fc: &FiniteCartan) -> Self {
        WeylWord {
            letters: Vec::new(),
            image: rho_tilde(fc),
        }
    }

    /// `l(w)`.
    pub fn length(&self) -> usize {
        self.letters.len()
    }

    pub fn is_identity(&self) -> bool {
        self.letters.is_empty()
    }

    /// `(−1)^{l(w)}`.
    pub fn sign(&self) -> i64 {
        if self.length() % 2 == 0 {
            1
        } else {
            -1
        }
    }

    /// `w(λ)`; the rightmost letter acts first.
    pub fn apply(&self, fc: &FiniteCartan, lambda: &AffineWeight) -> AffineWeight {
        apply_letters(fc, &self.letters, lambda)
    }

    /// `w·λ = w(λ + ρ̃) − ρ̃`.
    pub fn dot(&self, fc: &FiniteCartan, lambda: &AffineWeight) -> AffineWeight {
        let rho = rho_tilde(fc);
        &self.apply(fc, &(lambda + &rho)) - &rho
    }

    /// `r_i w`.
    pub fn left_mul(&self, fc: &FiniteCartan, i: usize) -> WeylWord {
        from_image(fc, reflect(fc, &self.image, i))
    }

    /// `w r_i`.
    pub fn right_mul(&self, fc: &FiniteCartan, i: usize) -> WeylWord {
        let mut letters = self.letters.clone();
        letters.push(i);
        canonical_reduce(fc, &letters)
    }

    pub fn inverse(&self, fc: &FiniteCartan) -> WeylWord {
        let letters: Vec<usize> = self.letters.iter().rev().copied().collect();
        canonical_reduce(fc, &letters)
    }

    /// `wα_0 = −α_0`.
    pub fn negates_alpha0(&self, fc: &FiniteCartan) -> bool {
        let a0 = simple_root(fc, 0);
        self.apply(fc, &a0) == -&a0
    }

    /// `s(w) = l(w)` if `wα_0 ≠ −α_0`, else `l(w) + l − 1 + Σ_i a_i`.
    pub fn s_index(&self, fc: &FiniteCartan) -> usize {
        if self.negates_alpha0(fc) {
            let marks: i64 = fc.marks.iter().sum();
            self.length() + fc.rank() - 1 + marks as usize
        } else {
            self.length()
        }
    }
}

impl fmt::Display for WeylWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return write!(f, "e");
        }
        let parts: Vec<String> = self.letters.iter().map(|i| format!("r{i}")).collect();
        write!(f, "{}", parts.join(" "))
    }
}

impl fmt::Debug for WeylWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "WeylWord({self})")
    }
}

impl Serialize for WeylWord {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.letters.serialize(s)
    }
}

fn apply_letters(fc: &FiniteCartan, letters: &[usize], lambda: &AffineWeight) -> AffineWeight {
    letters
        .iter()
        .rev()
        .fold(lambda.clone(), |acc, &i| reflect(fc, &acc, i))
}

/// Smallest `i` with `v(α̌_i) < 0`.
fn least_descent(fc: &FiniteCartan, v: &AffineWeight) -> Option<usize> {
    (0..=fc.rank()).find(|&i| v.pair_coroot(fc, i).is_negative())
}

/// The element `w` with `w(ρ̃) = image`.
fn from_image(fc: &FiniteCartan, image: AffineWeight) -> WeylWord {
    let mut letters = Vec::new();
    let mut v = image.clone();
    while let Some(i) = least_descent(fc, &v) {
        letters.push(i);
        v = reflect(fc, &v, i);
    }
    debug_assert_eq!(v, rho_tilde(fc));
    WeylWord { letters, image }
}

/// Lexicographically least reduced word for the product of the letters.
pub fn canonical_reduce(fc: &FiniteCartan, letters: &[usize]) -> WeylWord {
    from_image(fc, apply_letters(fc, letters, &rho_tilde(fc)))
}

/// Every element of length at most `max_len`, ordered by length and then by word.
pub fn enumerate(fc: &FiniteCartan, max_len: usize) -> Vec<WeylWord> {
    let mut out = vec![WeylWord::identity(fc)];
    let mut seen: HashSet<AffineWeight> = HashSet::from([rho_tilde(fc)]);
    let mut layer = out.clone();
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &layer {
            for i in 0..=fc.rank() {
                if w.image.pair_coroot(fc, i).is_positive() {
                    let img = reflect(fc, &w.image, i);
                    if seen.insert(img.clone()) {
                        next.push(from_image(fc, img));
                    }
                }
            }
        }
        next.sort_by(|a, b| a.letters.cmp(&b.letters));
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

/// Whether a weight is a non-negative combination of simple roots.
pub fn is_positive_root_lattice(fc: &FiniteCartan, x: &AffineWeight) -> bool {
    let zero = AffineWeight::zero(fc.rank());
    displacement(fc, x, &zero).is_ok_and(|b| b.is_nonneg())
}

/// The `w` with `w·λ = μ` and `l(w) ≤ max_len`, if any.
///
/// `λ` must be dominant integral, so that `λ + ρ̃` is regular dominant; the
/// answer is then unique. Returns `NotIntegral` if `μ − λ ∉ Q̃`.
pub fn classify_weight(
    fc: &FiniteCartan,
    mu: &AffineWeight,
    lambda: &AffineWeight,
    max_len: usize,
) -> Result<Option<WeylWord>> {
    displacement(fc, lambda, mu)?;
    let rho = rho_tilde(fc);
    let target = lambda + &rho;
    let mut v = mu + &rho;
    let mut letters = Vec::new();
    loop {
        let labels = v.dynkin_labels(fc);
        if labels.iter().any(Zero::is_zero) {
            return Ok(None);
        }
        match labels.iter().position(Signed::is_negative) {
            None => break,
            Some(i) => {
                if letters.len() == max_len {
                    return Ok(None);
                }
                letters.push(i);
                v = reflect(fc, &v, i);
            }
        }
    }
    if v != target {
        return Ok(None);
    }
    let w = canonical_reduce(fc, &letters);
    debug_assert_eq!(w.letters, letters);
    debug_assert_eq!(&w.dot(fc, lambda), mu);
    Ok(Some(w))
}

/// `λ − w·λ` in simple affine root coordinates.
pub fn dot_displacement(fc: &FiniteCartan, w: &WeylWord, lambda: &AffineWeight) -> RootVec {
    displacement(fc, lambda, &w.dot(fc, lambda)).expect("dot orbit stays in λ + Q̃")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::affine_roots::{fundamental_weight, weight_form};
    use crate::error::KmError;
    use crate::rational::q;

    fn fc(s: &str) -> FiniteCartan {
        FiniteCartan::new(s.parse().unwrap())
    }

    #[test]
    fn reflection_examples() {
        let a1 = fc("A1");
        let rho = rho_tilde(&a1);
        assert_eq!(reflect(&a1, &rho, 1), AffineWeight::from_ints(&[-1], 2, 0));
        assert_eq!(reflect(&a1, &rho, 0), AffineWeight::from_ints(&[3], 2, -1));
    }

    #[test]
    fn dot_examples() {
        let a1 = fc("A1");
        let lam0 = fundamental_weight(&a1, 0).unwrap();
        let r1 = canonical_reduce(&a1, &[1]);
        let r0 = canonical_reduce(&a1, &[0]);
        assert_eq!(WeylWord::identity(&a1).dot(&a1, &lam0), lam0);
        assert_eq!(r1.dot(&a1, &lam0), AffineWeight::from_ints(&[-2], 1, 0));
        assert_eq!(r0.dot(&a1, &lam0), AffineWeight::from_ints(&[4], 1, -2));
    }

    #[test]
    fn reduction_examples() {
        let a1 = fc("A1");
        assert!(canonical_reduce(&a1, &[1, 1]).is_identity());
        assert!(canonical_reduce(&a1, &[1, 0, 0, 1]).is_identity());
        for k in 1..8 {
            let word: Vec<usize> = (0..k).map(|j| j % 2).collect();
            assert_eq!(canonical_reduce(&a1, &word).letters, word);
        }
        let a2 = fc("A2");
        // braid relation r1 r2 r1 = r2 r1 r2; the least word starts with r1
        assert_eq!(canonical_reduce(&a2, &[2, 1, 2]).letters, vec![1, 2, 1]);
    }

    #[test]
    fn enumeration_counts() {
        assert_eq!(enumerate(&fc("A1"), 3).len(), 7);
        assert_eq!(enumerate(&fc("A1"), 0).len(), 1);
        assert_eq!(enumerate(&fc("A2"), 2).len(), 10);
        // Bott: (1+t+t²)/(1−t)² = 1 + 3t + 6t² + 9t³ + 12t⁴ + …
        let counts: Vec<usize> = {
            let e = enumerate(&fc("A2"), 4);
            (0..=4)
                .map(|k| e.iter().filter(|w| w.length() == k).count())
                .collect()
        };
        assert_eq!(counts, vec![1, 3, 6, 9, 12]);
    }

    #[test]
    fn s_index_examples() {
        let a1 = fc("A1");
        assert_eq!(WeylWord::identity(&a1).s_index(&a1), 0);
        assert_eq!(canonical_reduce(&a1, &[1]).s_index(&a1), 1);
        let r0 = canonical_reduce(&a1, &[0]);
        assert!(r0.negates_alpha0(&a1));
        assert_eq!(r0.s_index(&a1), 2);
    }

    #[test]
    fn classification() {
        let a1 = fc("A1");
        let lam0 = fundamental_weight(&a1, 0).unwrap();
        assert!(classify_weight(&a1, &lam0, &lam0, 4)
            .unwrap()
            .unwrap()
            .is_identity());
        let mu = AffineWeight::from_ints(&[-2], 1, 0);
        assert_eq!(
            classify_weight(&a1, &mu, &lam0, 4)
                .unwrap()
                .unwrap()
                .letters,
            vec![1]
        );
        let off = &lam0 - &AffineWeight::delta(1);
        assert_eq!(classify_weight(&a1, &off, &lam0, 8).unwrap(), None);
        let half = AffineWeight::new(vec![q(1)], q(1), q(0));
        assert_eq!(
            classify_weight(&a1, &half, &lam0, 2),
            Err(KmError::NotIntegral)
        );
        for w in enumerate(&a1, 5) {
            let mu = w.dot(&a1, &lam0);
            assert_eq!(
                classify_weight(&a1, &mu, &lam0, 5).unwrap(),
                Some(w.clone())
            );
            if w.length() > 0 {
                assert_eq!(
                    classify_weight(&a1, &mu, &lam0, w.length() - 1).unwrap(),
                    None
                );
            }
        }
    }

    #[test]
    fn form_invariance() {
        let a2 = fc("A2");
        let x = AffineWeight::from_ints(&[2, -1], 3, 1);
        let y = AffineWeight::from_ints(&[0, 5], -1, 2);
        for w in enumerate(&a2, 3) {
            assert_eq!(
                weight_form(&a2, &w.apply(&a2, &x), &w.apply(&a2, &y)),
                weight_form(&a2, &x, &y)
            );
        }
    }
}
