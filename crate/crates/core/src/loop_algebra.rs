//! The affine algebra `g̃ = C[z, z⁻¹] ⊗ g ⊕ Cc ⊕ Cd`.
//!
//! The bracket is
//!
//! ```text
//! [X + αc + βd, Y + α₁c + β₁d] = [X, Y] + β z(d/dz)Y − β₁ z(d/dz)X + Res_{z=0}⟨(d/dz)X | Y⟩ c
//! ```
//!
//! and the invariant form is `⟨X + αc + βd | Y + α₁c + β₁d⟩ = Res_{z=0} z⁻¹⟨X|Y⟩ + αβ₁ + α₁β`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_traits::Zero;

use crate::finite_cartan::{FiniteCartan, GBasis};
use crate::lattice::RootVec;
use crate::rational::{fmt_q, q, Q};

/// A finite linear combination of `zⁿ ⊗ x_a`, `c` and `d`.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct LoopElement {
    /// `(z exponent, basis index of g) → coefficient`; zero coefficients are never stored.
    pub terms: BTreeMap<(i64, usize), Q>,
    pub c: Q,
    pub d: Q,
}

impl fmt::Debug for LoopElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = self
            .terms
            .iter()
            .map(|((n, a), x)| format!("{}*z^{}[{}]", fmt_q(x), n, a))
            .collect();
        if !self.c.is_zero() {
            parts.push(format!("{}*c", fmt_q(&self.c)));
        }
        if !self.d.is_zero() {
            parts.push(format!("{}*d", fmt_q(&self.d)));
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

impl LoopElement {
    pub fn zero() -> Self {
        Self::default()
    }

    /// `zⁿ ⊗ x_a`.
    pub fn basis(n: i64, a: usize) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert((n, a), q(1));
        LoopElement {
            terms,
            ..Self::default()
        }
    }

    pub fn central() -> Self {
        LoopElement {
            c: q(1),
            ..Self::default()
        }
    }

    pub fn derivation() -> Self {
        LoopElement {
            d: q(1),
            ..Self::default()
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty() && self.c.is_zero() && self.d.is_zero()
    }

    pub fn add_term(&mut self, n: i64, a: usize, x: &Q) {
        if x.is_zero() {
            return;
        }
        let e = self.terms.entry((n, a)).or_insert_with(Q::zero);
        *e += x;
        if e.is_zero() {
            self.terms.remove(&(n, a));
        }
    }

    pub fn add_scaled(&mut self, other: &LoopElement, k: &Q) {
        for ((n, a), x) in &other.terms {
            self.add_term(*n, *a, &(x * k));
        }
        self.c += &other.c * k;
        self.d += &other.d * k;
    }

    pub fn scaled(&self, k: &Q) -> LoopElement {
        let mut out = LoopElement::zero();
        out.add_scaled(self, k);
        out
    }

    pub fn sum(&self, other: &LoopElement) -> LoopElement {
        let mut out = self.clone();
        out.add_scaled(other, &q(1));
        out
    }

    pub fn difference(&self, other: &LoopElement) -> LoopElement {
        let mut out = self.clone();
        out.add_scaled(other, &q(-1));
        out
    }
}

/// The Lie bracket of `g̃`.
pub fn bracket(fc: &FiniteCartan, x: &LoopElement, y: &LoopElement) -> LoopElement {
    let mut out = LoopElement::zero();
    for ((m, a), xa) in &x.terms {
        for ((n, b), yb) in &y.terms {
            let coeff = xa * yb;
            for (c, k) in fc.bracket(*a, *b) {
                out.add_term(m + n, *c, &(&coeff * q(*k)));
            }
            // Res_{z=0} ⟨m z^{m-1} x_a | zⁿ y_b⟩ = m δ_{m+n,0} (x_a|y_b)
            if m + n == 0 && *m != 0 {
                out.c += &coeff * q(*m) * fc.killing(*a, *b);
            }
        }
    }
    // β z(d/dz)Y − β₁ z(d/dz)X
    if !x.d.is_zero() {
        for ((n, b), yb) in &y.terms {
            out.add_term(*n, *b, &(&x.d * yb * q(*n)));
        }
    }
    if !y.d.is_zero() {
        for ((m, a), xa) in &x.terms {
            out.add_term(*m, *a, &(-(&y.d * xa * q(*m))));
        }
    }
    out
}

/// The invariant bilinear form on `g̃`.
pub fn invariant_form(fc: &FiniteCartan, x: &LoopElement, y: &LoopElement) -> Q {
    let mut acc = &x.c * &y.d + &y.c * &x.d;
    for ((m, a), xa) in &x.terms {
        for ((n, b), yb) in &y.terms {
            if m + n == 0 {
                acc += xa * yb * fc.killing(*a, *b);
            }
        }
    }
    acc
}

/// Affine root coordinates (`k_0 = n`, `k_i = c_i + n a_i`) of `zⁿ ⊗ x_a`.
pub fn affine_coords(fc: &FiniteCartan, n: i64, a: usize) -> RootVec {
    let w = fc.basis_weight(a);
    let mut k = Vec::with_capacity(fc.rank() + 1);
    k.push(n);
    for i in 0..fc.rank() {
        k.push(w.0[i] + n * fc.marks[i]);
    }
    RootVec(k)
}

/// A basis vector of `ñ₊ = n₊ ⊕ Σ_{n>0} zⁿ ⊗ g`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NBasisElement {
    pub z_exp: i64,
    /// Basis index in `g`.
    pub g_index: usize,
    /// Affine root spanned, in simple affine root coordinates.
    pub weight: RootVec,
}

impl NBasisElement {
    pub fn element(&self) -> LoopElement {
        LoopElement::basis(self.z_exp, self.g_index)
    }

    pub fn label(&self, fc: &FiniteCartan) -> String {
        format!("z^{} {}", self.z_exp, fc.basis_label(self.g_index))
    }
}

/// Ordered basis of `ñ₊` up to `δ`-degree `max_delta_degree`, sorted by
/// (degree, finite height, index in `g`).
pub fn ntilde_basis(fc: &FiniteCartan, max_delta_degree: u32) -> Vec<NBasisElement> {
    let mut out = Vec::new();
    for n in 0..=i64::from(max_delta_degree) {
        let mut layer: Vec<NBasisElement> = (0..fc.dim())
            .filter(|&a| n > 0 || matches!(fc.basis(a), GBasis::E(_)))
            .map(|a| NBasisElement {
                z_exp: n,
                g_index: a,
                weight: affine_coords(fc, n, a),
            })
            .collect();
        layer.sort_by_key(|e| (fc.basis_weight(e.g_index).height(), e.g_index));
        out.extend(layer);
    }
    out
}

/// An ordered basis of `ñ₊` with coordinate lookup.
#[derive(Clone, Debug)]
pub struct NTilde {
    pub elems: Vec<NBasisElement>,
    index: HashMap<(i64, usize), usize>,
}

impl NTilde {
    pub fn new(fc: &FiniteCartan, max_delta_degree: u32) -> Self {
        let elems = ntilde_basis(fc, max_delta_degree);
        let index = elems
            .iter()
            .enumerate()
            .map(|(k, e)| ((e.z_exp, e.g_index), k))
            .collect();
        NTilde { elems, index }
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    pub fn position(&self, z_exp: i64, g_index: usize) -> Option<usize> {
        self.index.get(&(z_exp, g_index)).copied()
    }

    /// Coordinates of an element of `ñ₊`; `None` if it has a component outside
    /// the truncated basis (including `c` or `d`).
    pub fn coords(&self, x: &LoopElement) -> Option<Vec<(usize, Q)>> {
        if !x.c.is_zero() || !x.d.is_zero() {
            return None;
        }
        x.terms
            .iter()
            .map(|((n, a), v)| self.position(*n, *a).map(|k| (k, v.clone())))
            .collect()
    }
}

/// Chevalley generator `e_i` of `g̃` (`e_0 = z ⊗ f_θ`).
pub fn chevalley_e(fc: &FiniteCartan, i: usize) -> LoopElement {
    if i == 0 {
        let theta = fc.root_index(&fc.theta).unwrap();
        LoopElement::basis(1, fc.f_index(theta))
    } else {
        let root = fc.root_index(&RootVec::unit(fc.rank(), i - 1)).unwrap();
        LoopElement::basis(0, fc.e_index(root))
    }
}

/// Chevalley generator `f_i` of `g̃` (`f_0 = z⁻¹ ⊗ e_θ`).
pub fn chevalley_f(fc: &FiniteCartan, i: usize) -> LoopElement {
    if i == 0 {
        let theta = fc.root_index(&fc.theta).unwrap();
        LoopElement::basis(-1, fc.e_index(theta))
    } else {
        let root = fc.root_index(&RootVec::unit(fc.rank(), i - 1)).unwrap();
        LoopElement::basis(0, fc.f_index(root))
    }
}

/// Simple coroot `α̌_i` (`α̌_0 = c − θ̌`).
pub fn chevalley_h(fc: &FiniteCartan, i: usize) -> LoopElement {
    if i == 0 {
        let mut h = LoopElement::central();
        for (j, a) in fc.comarks.iter().enumerate() {
            h.add_term(0, fc.h_index(j), &q(-a));
        }
        h
    } else {
        LoopElement::basis(0, fc.h_index(i - 1))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finite_cartan::FiniteCartan;

    fn a1() -> FiniteCartan {
        FiniteCartan::new("A1".parse().unwrap())
    }

    #[test]
    fn central_and_derivation() {
        let fc = a1();
        let x = LoopElement::basis(3, 0);
        assert!(bracket(&fc, &LoopElement::central(), &x).is_zero());
        assert_eq!(
            bracket(&fc, &LoopElement::derivation(), &x),
            LoopElement::basis(3, 0).scaled(&q(3))
        );
    }

    #[test]
    fn cocycle_example() {
        let fc = a1();
        // [z⊗e, z⁻¹⊗f] = h + c
        let got = bracket(&fc, &LoopElement::basis(1, 0), &LoopElement::basis(-1, 1));
        let mut want = LoopElement::basis(0, 2);
        want.c = q(1);
        assert_eq!(got, want);
    }

    #[test]
    fn form_values() {
        let fc = a1();
        let (c, d) = (LoopElement::central(), LoopElement::derivation());
        assert_eq!(invariant_form(&fc, &c, &d), q(1));
        assert_eq!(invariant_form(&fc, &c, &c), q(0));
        for n in -2..=2 {
            for m in -2..=2 {
                let v = invariant_form(&fc, &LoopElement::basis(n, 0), &LoopElement::basis(m, 1));
                assert_eq!(v, if n + m == 0 { q(1) } else { q(0) });
            }
        }
    }

    #[test]
    fn ntilde_counts() {
        let fc = a1();
        assert_eq!(ntilde_basis(&fc, 0).len(), 1);
        assert_eq!(ntilde_basis(&fc, 1).len(), 4);
        assert_eq!(ntilde_basis(&fc, 2).len(), 7);
        let a2 = FiniteCartan::new("A2".parse().unwrap());
        assert_eq!(ntilde_basis(&a2, 3).len(), 3 + 3 * 8);
    }

    #[test]
    fn ntilde_order_and_weights() {
        let fc = a1();
        let b = ntilde_basis(&fc, 1);
        let weights: Vec<RootVec> = b.iter().map(|e| e.weight.clone()).collect();
        // α1, then degree 1: δ-α1 = α0, δ, δ+α1
        assert_eq!(
            weights,
            vec![
                RootVec(vec![0, 1]),
                RootVec(vec![1, 0]),
                RootVec(vec![1, 1]),
                RootVec(vec![1, 2])
            ]
        );
    }

    #[test]
    fn affine_chevalley_relations() {
        let fc = FiniteCartan::new("A2".parse().unwrap());
        for i in 0..3 {
            for j in 0..3 {
                let got = bracket(&fc, &chevalley_e(&fc, i), &chevalley_f(&fc, j));
                let want = if i == j {
                    chevalley_h(&fc, i)
                } else {
                    LoopElement::zero()
                };
                assert_eq!(got, want, "[e{i}, f{j}]");
            }
        }
    }
}
