//! Irreducible highest weight modules over a (generalized) Cartan matrix,
//! built weight space by weight space from the contravariant form.
//!
//! Write `L` for the irreducible module of highest weight `λ` and index its
//! weight spaces by the displacement `β = λ - μ ∈ Q₊`. Every `L_β` with
//! `β ≠ 0` is spanned by the vectors `f_i b` with `b` in `L_{β-α_i}`. The
//! pairing of two such candidates is
//!
//! ```text
//! ⟨f_i b, f_j b'⟩ = ⟨b, e_i f_j b'⟩,   e_i f_j b' = f_j e_i b' + δ_ij ⟨μ', α̌_i⟩ b'
//! ```
//!
//! which only involves spaces of smaller height. The radical of this Gram
//! matrix is exactly the intersection of the candidate span with the maximal
//! submodule of the Verma module, so a maximal set of candidates with
//! independent Gram columns is a basis of `L_β`.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::Zero;

use crate::lattice::RootVec;
use crate::linalg::QMatrix;
use crate::rational::Q;

/// One weight space `L_β` with the simple generators around it.
#[derive(Clone, Debug)]
pub struct Layer {
    pub dim: usize,
    /// Contravariant form on the chosen basis (nondegenerate).
    pub gram: QMatrix,
    /// `raise[i]`: matrix of `e_i : L_β → L_{β-α_i}` (`None` if the target is zero).
    pub raise: Vec<Option<QMatrix>>,
    /// `lower[i]`: matrix of `f_i : L_{β-α_i} → L_β` (`None` if the source is zero).
    pub lower: Vec<Option<QMatrix>>,
    /// Basis vector `k` is `f_{reps[k].0}` applied to basis vector `reps[k].1` of `L_{β-α_i}`.
    pub reps: Vec<(usize, usize)>,
}

#[derive(Clone, Debug)]
pub struct SimpleModule {
    pub gcm: Vec<Vec<i64>>,
    pub hw_labels: Vec<Q>,
    pub spaces: BTreeMap<RootVec, Layer>,
}

impl SimpleModule {
    pub fn nodes(&self) -> usize {
        self.gcm.len()
    }

    pub fn dim(&self, beta: &RootVec) -> usize {
        self.spaces.get(beta).map_or(0, |l| l.dim)
    }

    /// `⟨λ - β, α̌_i⟩`.
    pub fn label(&self, beta: &RootVec, i: usize) -> Q {
        let shift: i64 = (0..self.nodes()).map(|m| self.gcm[i][m] * beta.0[m]).sum();
        &self.hw_labels[i] - Q::from_integer(shift.into())
    }

    pub fn total_dim(&self) -> usize {
        self.spaces.values().map(|l| l.dim).sum()
    }

    fn apply_raise(&self, beta: &RootVec, j: usize, v: &[Q]) -> Option<Vec<Q>> {
        let m = self.spaces.get(beta)?.raise[j].as_ref()?;
        Some(m.mul_vec(v))
    }

    fn apply_lower(&self, target: &RootVec, i: usize, v: &[Q]) -> Option<Vec<Q>> {
        let m = self.spaces.get(target)?.lower[i].as_ref()?;
        Some(m.mul_vec(v))
    }

    /// `e_j` applied to the candidate `f_i b_k` (with `b_k` in `L_{β-α_i}`),
    /// as a vector of `L_{β-α_j}`.
    fn raise_candidate(&self, beta: &RootVec, i: usize, k: usize, j: usize) -> Vec<Q> {
        let src = beta.minus_unit(i);
        let tgt = beta.minus_unit(j);
        let mut out = vec![Q::zero(); self.dim(&tgt)];
        if out.is_empty() {
            return out;
        }
        let mut b = vec![Q::zero(); self.dim(&src)];
        b[k] = Q::from_integer(1.into());
        // f_i (e_j b)
        if let Some(eb) = self.apply_raise(&src, j, &b) {
            if let Some(v) = self.apply_lower(&tgt, i, &eb) {
                out = v;
            }
        }
        if i == j {
            let h = self.label(&src, i);
            out[k] += h;
        }
        out
    }
}

/// Builds every weight space `L_β` with `admit(β)`.
///
/// `admit` must be closed downwards (if `β` is admitted, so is every
/// `0 ≤ β' ≤ β`); the result is then exact on the admitted set. For a finite
/// type Cartan matrix and `admit = |_| true` this is the whole
/// finite-dimensional module.
pub fn build_simple_module(
    gcm: &[Vec<i64>],
    hw_labels: &[Q],
    admit: impl Fn(&RootVec) -> bool,
) -> SimpleModule {
    let n = gcm.len();
    let mut module = SimpleModule {
        gcm: gcm.to_vec(),
        hw_labels: hw_labels.to_vec(),
        spaces: BTreeMap::new(),
    };
    let top = RootVec::zero(n);
    module.spaces.insert(
        top.clone(),
        Layer {
            dim: 1,
            gram: QMatrix::identity(1),
            raise: vec![None; n],
            lower: vec![None; n],
            reps: Vec::new(),
        },
    );
    let mut frontier: BTreeSet<RootVec> = BTreeSet::from([top]);
    while !frontier.is_empty() {
        let mut next = BTreeSet::new();
        for beta in &frontier {
            for i in 0..n {
                let cand = beta.plus_unit(i);
                if admit(&cand) {
                    next.insert(cand);
                }
            }
        }
        let mut built = BTreeSet::new();
        for beta in next {
            if let Some(layer) = build_layer(&module, &beta) {
                module.spaces.insert(beta.clone(), layer);
                built.insert(beta);
            }
        }
        frontier = built;
    }
    module
}

fn build_layer(module: &SimpleModule, beta: &RootVec) -> Option<Layer> {
    let n = module.nodes();
    let cands: Vec<(usize, usize)> = (0..n)
        .filter(|&i| beta.0[i] > 0)
        .flat_map(|i| (0..module.dim(&beta.minus_unit(i))).map(move |k| (i, k)))
        .collect();
    if cands.is_empty() {
        return None;
    }
    // raised[c][j] = e_j (candidate c) in L_{β-α_j}
    let raised: Vec<Vec<Vec<Q>>> = cands
        .iter()
        .map(|&(i, k)| {
            (0..n)
                .map(|j| {
                    if beta.0[j] > 0 {
                        module.raise_candidate(beta, i, k, j)
                    } else {
                        Vec::new()
                    }
                })
                .collect()
        })
        .collect();
    let m = cands.len();
    let mut gram = QMatrix::zeros(m, m);
    for (a, &(i, k)) in cands.iter().enumerate() {
        let g = &module.spaces[&beta.minus_unit(i)].gram;
        for b in 0..m {
            let v = &raised[b][i];
            let mut acc = Q::zero();
            for (t, x) in v.iter().enumerate() {
                if !x.is_zero() {
                    acc += g.get(k, t) * x;
                }
            }
            gram.set(a, b, acc);
        }
    }
    let (rref, pivots) = gram.rref();
    if pivots.is_empty() {
        return None;
    }
    let dim = pivots.len();
    let coords = |c: usize| -> Vec<Q> { (0..dim).map(|r| rref.get(r, c).clone()).collect() };

    let mut lower = vec![None; n];
    for i in 0..n {
        let cols: Vec<Vec<Q>> = cands
            .iter()
            .enumerate()
            .filter(|(_, &(ci, _))| ci == i)
            .map(|(c, _)| coords(c))
            .collect();
        if !cols.is_empty() {
            lower[i] = Some(QMatrix::from_columns(dim, &cols));
        }
    }
    let mut raise = vec![None; n];
    for j in 0..n {
        if beta.0[j] == 0 {
            continue;
        }
        let tdim = module.dim(&beta.minus_unit(j));
        if tdim == 0 {
            continue;
        }
        let cols: Vec<Vec<Q>> = pivots.iter().map(|&p| raised[p][j].clone()).collect();
        raise[j] = Some(QMatrix::from_columns(tdim, &cols));
    }
    Some(Layer {
        dim,
        gram: gram.select(&pivots, &pivots),
        raise,
        lower,
        reps: pivots.iter().map(|&p| cands[p]).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    fn sl2_irrep(m: i64) -> SimpleModule {
        build_simple_module(&[vec![2]], &[q(m)], |_| true)
    }

    #[test]
    fn sl2_irreps_have_dimension_m_plus_one() {
        for m in 0..6 {
            assert_eq!(sl2_irrep(m).total_dim(), (m + 1) as usize);
        }
    }

    #[test]
    fn sl3_adjoint_is_eight_dimensional() {
        let a2 = vec![vec![2, -1], vec![-1, 2]];
        let adj = build_simple_module(&a2, &[q(1), q(1)], |_| true);
        assert_eq!(adj.total_dim(), 8);
        assert_eq!(adj.dim(&RootVec(vec![1, 1])), 2);
    }

    #[test]
    fn g2_small_irrep_is_seven_dimensional() {
        // Bourbaki G2, α1 short: the 7-dimensional module has highest weight Λ1.
        let g2 = vec![vec![2, -3], vec![-1, 2]];
        let m = build_simple_module(&g2, &[q(1), q(0)], |_| true);
        assert_eq!(m.total_dim(), 7);
    }

    #[test]
    fn commutator_relations_hold() {
        let a2 = vec![vec![2, -1], vec![-1, 2]];
        let m = build_simple_module(&a2, &[q(2), q(1)], |_| true);
        for (beta, layer) in &m.spaces {
            for i in 0..2 {
                for j in 0..2 {
                    // [e_i, f_j] on L_β, landing in L_{β + α_j - α_i}
                    let up = beta.plus_unit(j);
                    let tgt = up.minus_unit(i);
                    if !tgt.is_nonneg() || m.dim(&tgt) == 0 {
                        continue;
                    }
                    let f_j = m.spaces.get(&up).and_then(|l| l.lower[j].clone());
                    let e_i_up = m.spaces.get(&up).and_then(|l| l.raise[i].clone());
                    let e_i = layer.raise[i].clone();
                    let f_j_tgt = m.spaces.get(&tgt).and_then(|l| l.lower[j].clone());
                    let mut lhs = QMatrix::zeros(m.dim(&tgt), layer.dim);
                    if let (Some(f), Some(e)) = (f_j, e_i_up) {
                        lhs.add_assign(&e.mul(&f));
                    }
                    if let (Some(e), Some(f)) = (e_i, f_j_tgt) {
                        lhs = lhs.sub(&f.mul(&e));
                    }
                    let mut rhs = QMatrix::zeros(m.dim(&tgt), layer.dim);
                    if i == j {
                        rhs = QMatrix::identity(layer.dim).scale(&m.label(beta, i));
                    }
                    assert_eq!(lhs, rhs, "β={beta:?} i={i} j={j}");
                }
            }
        }
    }
}
