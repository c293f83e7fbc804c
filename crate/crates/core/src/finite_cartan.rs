//! Finite-type root data: Cartan matrix, positive roots, highest root,
//! marks and comarks, the normalized invariant form and a Chevalley basis.
//!
//! Simple roots are numbered as in Bourbaki. The invariant form is
//! normalized by `(θ|θ) = 2`, so long roots have square length 2.
//!
//! Chevalley structure constants are fixed by the extraspecial pair
//! convention: for every non-simple positive root `ξ`, let `i` be the least
//! index with `ξ - α_i` a root; then `e_ξ = [e_{α_i}, e_{ξ-α_i}] / (p + 1)`
//! where `p` is the largest `k` with `ξ - α_i - kα_i` a root, so that
//! `N_{α_i, ξ-α_i} = p + 1 > 0`. The negative root vectors are
//! `f_ξ = -ω(e_ξ)` for the Chevalley involution `ω`. All constants are
//! read off from commutators in the adjoint module, which is itself built
//! from the Cartan matrix alone.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{KmError, Result};
use crate::lattice::RootVec;
use crate::linalg::{QMatrix, SparseMatrix};
use crate::rational::{q, to_i64, Q};
use crate::weight_module::build_simple_module;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Series {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CartanType {
    pub series: Series,
    pub rank: usize,
}

impl CartanType {
    pub fn new(series: Series, rank: usize) -> Result<Self> {
        let ok = match series {
            Series::A => rank >= 1,
            Series::B => rank >= 2,
            Series::C => rank >= 3,
            Series::D => rank >= 4,
            Series::E => (6..=8).contains(&rank),
            Series::F => rank == 4,
            Series::G => rank == 2,
        };
        if ok {
            Ok(CartanType { series, rank })
        } else {
            Err(KmError::InvalidType(format!("{series:?}{rank}")))
        }
    }
}

impl fmt::Display for CartanType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}{}", self.series, self.rank)
    }
}

/// Parses `A1`, `g2`, and the affine spelling `A1~`.
impl FromStr for CartanType {
    type Err = KmError;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        let t = t.strip_suffix('~').unwrap_or(t);
        let invalid = || KmError::InvalidType(s.to_string());
        let mut chars = t.chars();
        let series = match chars.next().map(|c| c.to_ascii_uppercase()) {
            Some('A') => Series::A,
            Some('B') => Series::B,
            Some('C') => Series::C,
            Some('D') => Series::D,
            Some('E') => Series::E,
            Some('F') => Series::F,
            Some('G') => Series::G,
            _ => return Err(invalid()),
        };
        let rank: usize = chars.as_str().parse().map_err(|_| invalid())?;
        CartanType::new(series, rank).map_err(|_| invalid())
    }
}

/// Cartan matrix `A_ij = α_j(α̌_i)` in Bourbaki numbering.
pub fn cartan_matrix(ty: CartanType) -> Vec<Vec<i64>> {
    let l = ty.rank;
    let mut a = vec![vec![0i64; l]; l];
    for (i, row) in a.iter_mut().enumerate() {
        row[i] = 2;
    }
    let mut link = |i: usize, j: usize| {
        a[i][j] = -1;
        a[j][i] = -1;
    };
    match ty.series {
        Series::A | Series::B | Series::C => {
            for i in 0..l - 1 {
                link(i, i + 1);
            }
        }
        Series::D => {
            for i in 0..l - 2 {
                link(i, i + 1);
            }
            link(l - 3, l - 1);
        }
        Series::E => {
            for (i, j) in [(0, 2), (2, 3), (3, 4), (1, 3), (4, 5), (5, 6), (6, 7)] {
                if j < l {
                    link(i, j);
                }
            }
        }
        Series::F => {
            link(0, 1);
            link(1, 2);
            link(2, 3);
        }
        Series::G => link(0, 1),
    }
    match ty.series {
        Series::B => a[l - 1][l - 2] = -2,
        Series::C => a[l - 2][l - 1] = -2,
        Series::F => a[2][1] = -2,
        Series::G => a[0][1] = -3,
        _ => {}
    }
    a
}

/// A basis element of the finite Lie algebra `g`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GBasis {
    /// `e_α` for the positive root with this index.
    E(usize),
    /// `f_α` for the positive root with this index.
    F(usize),
    /// The simple coroot `α̌_i`.
    H(usize),
}

/// Sparse linear combination over the basis of `g` with integer coefficients.
pub type GVec = Vec<(usize, i64)>;

pub struct FiniteCartan {
    pub ty: CartanType,
    pub cartan: Vec<Vec<i64>>,
    /// Positive roots in simple-root coordinates, by height then descending lexicographic.
    pub positive_roots: Vec<RootVec>,
    pub theta: RootVec,
    pub marks: Vec<i64>,
    pub comarks: Vec<i64>,
    pub coxeter_g: i64,
    /// `(α_i|α_j)`.
    pub sym_form: QMatrix,
    /// `(Λ_i|Λ_j)`.
    pub fund_form: QMatrix,
    /// Simple-root coordinates of the fundamental weights (columns).
    pub inv_cartan: QMatrix,
    root_index: HashMap<RootVec, usize>,
    chevalley: OnceLock<Chevalley>,
}

impl fmt::Debug for FiniteCartan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FiniteCartan")
            .field("ty", &self.ty)
            .field("cartan", &self.cartan)
            .field("positive_roots", &self.positive_roots.len())
            .finish()
    }
}

struct Chevalley {
    /// Bracket of basis elements, row-major `dim × dim`.
    table: Vec<GVec>,
}

pub fn build_finite_cartan(series: Series, rank: usize) -> Result<FiniteCartan> {
    Ok(FiniteCartan::new(CartanType::new(series, rank)?))
}

impl FiniteCartan {
    pub fn new(ty: CartanType) -> Self {
        let cartan = cartan_matrix(ty);
        let l = ty.rank;

        // Relative square lengths from the Dynkin diagram.
        let mut eps: Vec<Option<Q>> = vec![None; l];
        eps[0] = Some(Q::one());
        let mut stack = vec![0];
        while let Some(i) = stack.pop() {
            for j in 0..l {
                if i != j && cartan[i][j] != 0 && eps[j].is_none() {
                    let e = eps[i].clone().unwrap() * q(cartan[i][j]) / q(cartan[j][i]);
                    eps[j] = Some(e);
                    stack.push(j);
                }
            }
        }
        let eps: Vec<Q> = eps.into_iter().map(Option::unwrap).collect();

        let positive_roots = root_closure(&cartan);
        let theta = positive_roots.last().unwrap().clone();
        let raw = |i: usize, j: usize| q(cartan[i][j]) * &eps[i] / q(2);
        let theta_sq: Q = (0..l)
            .flat_map(|i| (0..l).map(move |j| (i, j)))
            .map(|(i, j)| raw(i, j) * q(theta.0[i] * theta.0[j]))
            .sum();
        let scale = q(2) / theta_sq;
        let eps: Vec<Q> = eps.iter().map(|e| e * &scale).collect();
        let mut sym_form = QMatrix::zeros(l, l);
        for i in 0..l {
            for j in 0..l {
                sym_form.set(i, j, q(cartan[i][j]) * &eps[i] / q(2));
            }
        }
        let marks = theta.0.clone();
        let comarks: Vec<i64> = (0..l)
            .map(|i| to_i64(&(q(marks[i]) * &eps[i] / q(2))).expect("integral comark"))
            .collect();
        let coxeter_g = 1 + comarks.iter().sum::<i64>();

        let a = QMatrix::from_rows(
            cartan
                .iter()
                .map(|r| r.iter().map(|&x| q(x)).collect())
                .collect(),
        );
        let inv_cartan = a.inverse().expect("finite Cartan matrices are invertible");
        let mut fund_form = QMatrix::zeros(l, l);
        for i in 0..l {
            for j in 0..l {
                fund_form.set(i, j, inv_cartan.get(i, j) * &eps[i] / q(2));
            }
        }
        let root_index = positive_roots
            .iter()
            .enumerate()
            .map(|(k, r)| (r.clone(), k))
            .collect();
        FiniteCartan {
            ty,
            cartan,
            positive_roots,
            theta,
            marks,
            comarks,
            coxeter_g,
            sym_form,
            fund_form,
            inv_cartan,
            root_index,
            chevalley: OnceLock::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.ty.rank
    }

    pub fn num_positive(&self) -> usize {
        self.positive_roots.len()
    }

    /// `dim g = 2|Δ₊| + l`.
    pub fn dim(&self) -> usize {
        2 * self.num_positive() + self.rank()
    }

    pub fn root_index(&self, root: &RootVec) -> Option<usize> {
        self.root_index.get(root).copied()
    }

    pub fn is_root(&self, v: &RootVec) -> bool {
        self.root_index.contains_key(v) || self.root_index.contains_key(&-v)
    }

    /// `(α|β)` for vectors in simple-root coordinates.
    pub fn form(&self, a: &RootVec, b: &RootVec) -> Q {
        let l = self.rank();
        let mut acc = Q::zero();
        for i in 0..l {
            if a.0[i] == 0 {
                continue;
            }
            for j in 0..l {
                if b.0[j] != 0 {
                    acc += self.sym_form.get(i, j) * q(a.0[i] * b.0[j]);
                }
            }
        }
        acc
    }

    /// `⟨β, α̌_i⟩` for `β` in simple-root coordinates.
    pub fn pair_coroot(&self, beta: &RootVec, i: usize) -> i64 {
        (0..self.rank())
            .map(|j| self.cartan[i][j] * beta.0[j])
            .sum()
    }

    /// Dynkin labels of a root-lattice vector.
    pub fn labels(&self, beta: &RootVec) -> Vec<i64> {
        (0..self.rank())
            .map(|i| self.pair_coroot(beta, i))
            .collect()
    }

    pub fn simple_square(&self, i: usize) -> Q {
        self.sym_form.get(i, i).clone()
    }

    /// Coroot `α̌ = 2α/(α|α)` written in the simple coroots (integral).
    pub fn coroot_coords(&self, alpha: &RootVec) -> Vec<i64> {
        let sq = self.form(alpha, alpha);
        (0..self.rank())
            .map(|i| to_i64(&(q(alpha.0[i]) * self.simple_square(i) / &sq)).expect("coroot"))
            .collect()
    }

    /// Simple reflection of a root-lattice vector.
    pub fn reflect(&self, beta: &RootVec, i: usize) -> RootVec {
        let mut v = beta.clone();
        v.0[i] -= self.pair_coroot(beta, i);
        v
    }

    pub fn basis(&self, idx: usize) -> GBasis {
        let n = self.num_positive();
        if idx < n {
            GBasis::E(idx)
        } else if idx < 2 * n {
            GBasis::F(idx - n)
        } else {
            GBasis::H(idx - 2 * n)
        }
    }

    pub fn e_index(&self, root: usize) -> usize {
        root
    }

    pub fn f_index(&self, root: usize) -> usize {
        self.num_positive() + root
    }

    pub fn h_index(&self, i: usize) -> usize {
        2 * self.num_positive() + i
    }

    /// Weight (in simple-root coordinates) of a basis element.
    pub fn basis_weight(&self, idx: usize) -> RootVec {
        match self.basis(idx) {
            GBasis::E(k) => self.positive_roots[k].clone(),
            GBasis::F(k) => -&self.positive_roots[k],
            GBasis::H(_) => RootVec::zero(self.rank()),
        }
    }

    pub fn basis_label(&self, idx: usize) -> String {
        match self.basis(idx) {
            GBasis::E(k) => format!("e{}", self.positive_roots[k]),
            GBasis::F(k) => format!("f{}", self.positive_roots[k]),
            GBasis::H(i) => format!("h{}", i + 1),
        }
    }

    /// Normalized invariant form on basis elements.
    pub fn killing(&self, a: usize, b: usize) -> Q {
        match (self.basis(a), self.basis(b)) {
            (GBasis::E(r), GBasis::F(s)) | (GBasis::F(r), GBasis::E(s)) if r == s => {
                let root = &self.positive_roots[r];
                q(2) / self.form(root, root)
            }
            (GBasis::H(i), GBasis::H(j)) => {
                q(4) * self.sym_form.get(i, j) / (self.simple_square(i) * self.simple_square(j))
            }
            _ => Q::zero(),
        }
    }

    /// `[x_a, x_b]` for basis elements, as an integer combination.
    pub fn bracket(&self, a: usize, b: usize) -> &GVec {
        let ch = self.chevalley.get_or_init(|| Chevalley::build(self));
        &ch.table[a * self.dim() + b]
    }

    /// `N_{α,β}` for signed roots with `α + β` a root (0 otherwise).
    pub fn structure_constant(&self, a: usize, b: usize) -> i64 {
        let target = &self.basis_weight(a) + &self.basis_weight(b);
        if target.is_zero() {
            return 0;
        }
        self.bracket(a, b)
            .iter()
            .find(|(idx, _)| self.basis_weight(*idx) == target)
            .map_or(0, |(_, c)| *c)
    }

    /// Largest `p` with `β - pα` a root (`α`, `β` signed roots, `β ≠ ±α`).
    pub fn string_below(&self, alpha: &RootVec, beta: &RootVec) -> i64 {
        let mut p = 0;
        let mut v = beta - alpha;
        while self.is_root(&v) {
            p += 1;
            v = &v - alpha;
        }
        p
    }
}

/// Positive roots generated by simple-root strings.
fn root_closure(cartan: &[Vec<i64>]) -> Vec<RootVec> {
    let l = cartan.len();
    let mut roots: Vec<RootVec> = (0..l).map(|i| RootVec::unit(l, i)).collect();
    let mut known: std::collections::HashSet<RootVec> = roots.iter().cloned().collect();
    let mut layer = roots.clone();
    while !layer.is_empty() {
        let mut next = Vec::new();
        for beta in &layer {
            for i in 0..l {
                let pairing: i64 = (0..l).map(|j| cartan[i][j] * beta.0[j]).sum();
                let mut p = 0;
                let mut v = beta.minus_unit(i);
                while known.contains(&v) {
                    p += 1;
                    v = v.minus_unit(i);
                }
                if p - pairing > 0 {
                    let up = beta.plus_unit(i);
                    if known.insert(up.clone()) {
                        next.push(up);
                    }
                }
            }
        }
        roots.extend(next.iter().cloned());
        layer = next;
    }
    roots.sort_by(|a, b| a.height().cmp(&b.height()).then_with(|| b.cmp(a)));
    roots
}

impl Chevalley {
    fn build(fc: &FiniteCartan) -> Self {
        let l = fc.rank();
        let n = fc.num_positive();
        let theta_labels: Vec<Q> = fc.labels(&fc.theta).into_iter().map(q).collect();
        let adj = build_simple_module(&fc.cartan, &theta_labels, |_| true);
        assert_eq!(
            adj.total_dim(),
            fc.dim(),
            "adjoint module has the wrong dimension"
        );

        let mut offset = HashMap::new();
        let mut total = 0;
        for (beta, layer) in &adj.spaces {
            offset.insert(beta.clone(), total);
            total += layer.dim;
        }
        let mut e_simple = vec![SparseMatrix::new(total, total); l];
        let mut f_simple = vec![SparseMatrix::new(total, total); l];
        for (beta, layer) in &adj.spaces {
            for i in 0..l {
                if let Some(m) = &layer.raise[i] {
                    let (r0, c0) = (offset[&beta.minus_unit(i)], offset[beta]);
                    copy_block(&mut e_simple[i], m, r0, c0);
                }
                if let Some(m) = &layer.lower[i] {
                    let (r0, c0) = (offset[beta], offset[&beta.minus_unit(i)]);
                    copy_block(&mut f_simple[i], m, r0, c0);
                }
            }
        }

        // Root vectors: index k < n is e_{root k}, n + k is f_{root k}.
        let mut vecs: Vec<Option<SparseMatrix>> = vec![None; 2 * n];
        for k in 0..n {
            let xi = &fc.positive_roots[k];
            if xi.height() == 1 {
                let i = xi.0.iter().position(|&c| c == 1).unwrap();
                vecs[k] = Some(e_simple[i].clone());
                vecs[n + k] = Some(f_simple[i].clone());
                continue;
            }
            let i = (0..l)
                .find(|&i| fc.root_index(&xi.minus_unit(i)).is_some())
                .expect("non-simple root has a simple predecessor");
            let beta = xi.minus_unit(i);
            let b = fc.root_index(&beta).unwrap();
            let p = fc.string_below(&RootVec::unit(l, i), &beta);
            let inv = Q::one() / q(p + 1);
            let e = commutator(&e_simple[i], vecs[b].as_ref().unwrap());
            let f = commutator(&f_simple[i], vecs[n + b].as_ref().unwrap());
            vecs[k] = Some(scaled(&e, &inv));
            vecs[n + k] = Some(scaled(&f, &(-inv)));
        }
        let vecs: Vec<SparseMatrix> = vecs.into_iter().map(Option::unwrap).collect();

        let dim = fc.dim();
        let mut table = vec![Vec::new(); dim * dim];
        let signed_root = |idx: usize| fc.basis_weight(idx);
        let root_slot = |v: &RootVec| -> Option<usize> {
            if let Some(k) = fc.root_index(v) {
                Some(k)
            } else {
                fc.root_index(&-v).map(|k| n + k)
            }
        };
        for a in 0..dim {
            for b in 0..dim {
                let entry: GVec = match (fc.basis(a), fc.basis(b)) {
                    (GBasis::H(_), GBasis::H(_)) => Vec::new(),
                    (GBasis::H(i), _) => {
                        let c = fc.pair_coroot(&signed_root(b), i);
                        if c == 0 {
                            Vec::new()
                        } else {
                            vec![(b, c)]
                        }
                    }
                    (_, GBasis::H(i)) => {
                        let c = -fc.pair_coroot(&signed_root(a), i);
                        if c == 0 {
                            Vec::new()
                        } else {
                            vec![(a, c)]
                        }
                    }
                    _ => {
                        let (ra, rb) = (signed_root(a), signed_root(b));
                        let sum = &ra + &rb;
                        if sum.is_zero() {
                            let (root, sign) = match fc.basis(a) {
                                GBasis::E(k) => (k, 1),
                                GBasis::F(k) => (k, -1),
                                GBasis::H(_) => unreachable!(),
                            };
                            fc.coroot_coords(&fc.positive_roots[root])
                                .into_iter()
                                .enumerate()
                                .filter(|(_, c)| *c != 0)
                                .map(|(i, c)| (fc.h_index(i), sign * c))
                                .collect()
                        } else if let Some(slot) = root_slot(&sum) {
                            let c = commutator(&vecs[a], &vecs[b]);
                            let ratio = proportionality(&c, &vecs[slot]);
                            let ratio = to_i64(&ratio).expect("integral structure constant");
                            vec![(slot, ratio)]
                        } else {
                            Vec::new()
                        }
                    }
                };
                table[a * dim + b] = entry;
            }
        }
        Chevalley { table }
    }
}

fn copy_block(target: &mut SparseMatrix, m: &QMatrix, r0: usize, c0: usize) {
    for r in 0..m.rows() {
        for c in 0..m.cols() {
            target.add_entry(r0 + r, c0 + c, m.get(r, c));
        }
    }
}

fn commutator(a: &SparseMatrix, b: &SparseMatrix) -> SparseMatrix {
    let ab = a.mul(b);
    let ba = b.mul(a);
    let mut out = ab;
    for r in 0..ba.nrows {
        for (c, x) in ba.row_entries(r) {
            out.add_entry(r, *c, &(-x.clone()));
        }
    }
    out
}

fn scaled(a: &SparseMatrix, k: &Q) -> SparseMatrix {
    let mut out = SparseMatrix::new(a.nrows, a.ncols);
    for r in 0..a.nrows {
        for (c, x) in a.row_entries(r) {
            out.add_entry(r, *c, &(x * k));
        }
    }
    out
}

/// The scalar `k` with `a = k·b`; panics if `a` is not a multiple of `b`.
fn proportionality(a: &SparseMatrix, b: &SparseMatrix) -> Q {
    let (r, c, x) = (0..b.nrows)
        .find_map(|r| b.row_entries(r).next().map(|(c, x)| (r, *c, x.clone())))
        .expect("root vectors are nonzero");
    let k = a.get(r, c) / x;
    assert!(
        (0..a.nrows).all(|r| {
            let ra: Vec<_> = a.row_entries(r).map(|(c, v)| (*c, v.clone())).collect();
            let rb: Vec<_> = b.row_entries(r).map(|(c, v)| (*c, v * &k)).collect();
            ra == rb
        }),
        "commutator is not a multiple of the root vector"
    );
    k
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q_frac;

    fn fc(s: &str) -> FiniteCartan {
        FiniteCartan::new(s.parse().unwrap())
    }

    #[test]
    fn rank_one() {
        let a1 = fc("A1");
        assert_eq!(a1.positive_roots, vec![RootVec(vec![1])]);
        assert_eq!(a1.theta, RootVec(vec![1]));
        assert_eq!((a1.marks.clone(), a1.comarks.clone()), (vec![1], vec![1]));
        assert_eq!(a1.coxeter_g, 2);
    }

    #[test]
    fn a2_roots_and_g() {
        let a2 = fc("a2");
        assert_eq!(
            a2.positive_roots,
            vec![
                RootVec(vec![1, 0]),
                RootVec(vec![0, 1]),
                RootVec(vec![1, 1])
            ]
        );
        assert_eq!(a2.theta, RootVec(vec![1, 1]));
        assert_eq!(a2.coxeter_g, 3);
    }

    #[test]
    fn g2_marks_follow_bourbaki_numbering() {
        let g2 = fc("G2");
        assert_eq!(g2.num_positive(), 6);
        assert_eq!(g2.marks, vec![3, 2]);
        assert_eq!(g2.comarks, vec![1, 2]);
        assert_eq!(g2.coxeter_g, 4);
        assert_eq!(g2.simple_square(0), q_frac(2, 3));
        assert_eq!(g2.simple_square(1), q(2));
    }

    #[test]
    fn dual_coxeter_numbers() {
        for (s, g) in [
            ("A4", 5),
            ("B3", 5),
            ("C3", 4),
            ("D4", 6),
            ("E6", 12),
            ("E7", 18),
            ("E8", 30),
            ("F4", 9),
        ] {
            assert_eq!(fc(s).coxeter_g, g, "{s}");
        }
    }

    #[test]
    fn invalid_types() {
        for s in [
            "Z9", "A0", "B1", "C2", "D3", "E5", "E9", "F3", "G3", "", "A",
        ] {
            assert!(s.parse::<CartanType>().is_err(), "{s}");
        }
        assert!("A1~".parse::<CartanType>().is_ok());
    }

    #[test]
    fn sl2_relations() {
        let a1 = fc("A1");
        let (e, f, h) = (0, 1, 2);
        assert_eq!(a1.bracket(e, f), &vec![(h, 1)]);
        assert_eq!(a1.bracket(h, e), &vec![(e, 2)]);
        assert_eq!(a1.bracket(h, f), &vec![(f, -2)]);
        assert_eq!(a1.killing(e, f), q(1));
    }

    #[test]
    fn a2_extraspecial_sign() {
        let a2 = fc("A2");
        assert_eq!(a2.structure_constant(0, 1), 1);
        assert_eq!(a2.structure_constant(1, 0), -1);
    }
}
