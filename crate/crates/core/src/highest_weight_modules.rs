//! Weight-graded realizations of Verma modules and their irreducible quotients.
//!
//! Weight spaces are indexed by displacement `β` (the weight is `λ − β`).
//! Every module stores, for each weight space, the matrices of the simple
//! generators `e_i : L_β → L_{β−α_i}` and `f_i : L_β → L_{β+α_i}`. Other
//! elements of `ñ₊` act through iterated brackets of the `e_i`
//! ([`IteratedAction`]).

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;
use std::sync::{Arc, Mutex};

use num_traits::Zero;

use crate::affine_roots::{affine_cartan_matrix, AffineWeight};
use crate::characters::{box_points, verma_window};
use crate::error::{KmError, Result};
use crate::finite_cartan::{FiniteCartan, GBasis};
use crate::lattice::RootVec;
use crate::linalg::{kernel_from_rref, QMatrix};
use crate::loop_algebra::{bracket, chevalley_e, chevalley_f, LoopElement, NTilde};
use crate::rational::{q, Q};
use crate::weight_module::build_simple_module;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ModuleKind {
    Verma,
    Irreducible,
}

/// One weight space with the simple generators leaving it.
#[derive(Clone, Debug)]
pub struct WeightSpace {
    pub dim: usize,
    /// Human-readable description of each basis vector.
    pub basis: Vec<String>,
    /// `e[i] : L_β → L_{β−α_i}`.
    pub e: Vec<Option<QMatrix>>,
    /// `f[i] : L_β → L_{β+α_i}` (absent if the target is outside the realization).
    pub f: Vec<Option<QMatrix>>,
    /// Contravariant form on the basis, when known.
    pub gram: Option<QMatrix>,
}

#[derive(Clone, Debug)]
pub struct GradedModule {
    pub hw: AffineWeight,
    pub depth: u32,
    pub kind: ModuleKind,
    /// For Verma modules: the box `0 ≤ β ≤ window` that is realized.
    pub window: Option<RootVec>,
    pub spaces: BTreeMap<RootVec, WeightSpace>,
    gcm: Vec<Vec<i64>>,
    hw_labels: Vec<Q>,
}

impl GradedModule {
    pub fn nodes(&self) -> usize {
        self.gcm.len()
    }

    pub fn dim(&self, beta: &RootVec) -> usize {
        self.spaces.get(beta).map_or(0, |s| s.dim)
    }

    /// Whether `β` lies in the realized range (it may still have dimension 0).
    pub fn covers(&self, beta: &RootVec) -> bool {
        beta.is_nonneg()
            && beta.degree() <= i64::from(self.depth)
            && self.window.as_ref().is_none_or(|w| beta.le(w))
    }

    /// `⟨λ − β, α̌_i⟩`.
    pub fn label(&self, beta: &RootVec, i: usize) -> Q {
        let shift: i64 = (0..self.nodes()).map(|m| self.gcm[i][m] * beta.0[m]).sum();
        &self.hw_labels[i] - q(shift)
    }

    pub fn e_matrix(&self, i: usize, beta: &RootVec) -> Option<&QMatrix> {
        self.spaces.get(beta)?.e[i].as_ref()
    }

    pub fn f_matrix(&self, i: usize, beta: &RootVec) -> Option<&QMatrix> {
        self.spaces.get(beta)?.f[i].as_ref()
    }

    /// `(displacement, weight, dim)` rows as TSV, ordered by degree and height.
    pub fn dims_tsv(&self, fc: &FiniteCartan) -> String {
        let mut out = String::from("beta\tweight\tdim\n");
        for (beta, space) in self.sorted_spaces() {
            let _ = writeln!(
                out,
                "{}\t{}\t{}",
                beta,
                self.hw.sub_root(fc, beta),
                space.dim
            );
        }
        out
    }

    pub fn sorted_spaces(&self) -> Vec<(&RootVec, &WeightSpace)> {
        let mut v: Vec<_> = self.spaces.iter().filter(|(_, s)| s.dim > 0).collect();
        v.sort_by(|a, b| (a.0.degree(), a.0.height(), a.0).cmp(&(b.0.degree(), b.0.height(), b.0)));
        v
    }

    /// Checks `[e_i, f_j] = δ_ij α̌_i` on every weight space where both
    /// composites are realized.
    pub fn check_commutation(&self) -> std::result::Result<usize, String> {
        let n = self.nodes();
        let mut checked = 0;
        for (beta, space) in &self.spaces {
            for i in 0..n {
                for j in 0..n {
                    let up = beta.plus_unit(j);
                    let tgt = up.minus_unit(i);
                    if !self.covers(&up) || !tgt.is_nonneg() {
                        continue;
                    }
                    let rows = self.dim(&tgt);
                    let mut lhs = QMatrix::zeros(rows, space.dim);
                    if let (Some(f), Some(e)) = (space.f[j].as_ref(), self.e_matrix(i, &up)) {
                        lhs.add_assign(&e.mul(f));
                    }
                    if let (Some(e), Some(f)) =
                        (space.e[i].as_ref(), self.f_matrix(j, &beta.minus_unit(i)))
                    {
                        lhs = lhs.sub(&f.mul(e));
                    }
                    let rhs = if i == j {
                        QMatrix::identity(space.dim).scale(&self.label(beta, i))
                    } else {
                        QMatrix::zeros(rows, space.dim)
                    };
                    if lhs != rhs {
                        return Err(format!("[e{i}, f{j}] fails at {beta}"));
                    }
                    checked += 1;
                }
            }
        }
        Ok(checked)
    }
}

/// Labels `[λ(α̌_0), …, λ(α̌_l)]` checked to be usable as highest weight data.
fn hw_labels(fc: &FiniteCartan, lambda: &AffineWeight) -> Result<Vec<Q>> {
    if lambda.rank() != fc.rank() {
        return Err(KmError::Parse(format!(
            "weight {lambda} has the wrong rank"
        )));
    }
    Ok(lambda.dynkin_labels(fc))
}

fn opposite(fc: &FiniteCartan, a: usize) -> usize {
    match fc.basis(a) {
        GBasis::E(k) => fc.f_index(k),
        GBasis::F(k) => fc.e_index(k),
        GBasis::H(_) => a,
    }
}

/// An ordered basis of `ñ₋` mirroring [`NTilde`]: element `k` is
/// `z^{−n} ⊗ x̄` where `zⁿ ⊗ x` is element `k` of `ñ₊` and `x̄` swaps `e_α`
/// and `f_α`. `weights[k]` is the positive root `γ` with `y_k` of weight `−γ`.
#[derive(Clone, Debug)]
pub struct NMinus {
    pub elems: Vec<(i64, usize)>,
    pub weights: Vec<RootVec>,
    index: HashMap<(i64, usize), usize>,
}

impl NMinus {
    pub fn new(fc: &FiniteCartan, cap: u32) -> Self {
        let plus = NTilde::new(fc, cap);
        let elems: Vec<(i64, usize)> = plus
            .elems
            .iter()
            .map(|e| (-e.z_exp, opposite(fc, e.g_index)))
            .collect();
        let weights = plus.elems.iter().map(|e| e.weight.clone()).collect();
        let index = elems.iter().enumerate().map(|(k, e)| (*e, k)).collect();
        NMinus {
            elems,
            weights,
            index,
        }
    }

    pub fn element(&self, k: usize) -> LoopElement {
        LoopElement::basis(self.elems[k].0, self.elems[k].1)
    }

    pub fn position(&self, z: i64, g: usize) -> Option<usize> {
        self.index.get(&(z, g)).copied()
    }
}

/// How a basis element is generated from the simple generators `g_i`.
#[derive(Clone, Debug, PartialEq)]
pub enum Recipe {
    /// The element is `g_i`.
    Simple(usize),
    /// The element is `Σ c [g_i, x_k]` over `(i, k, c)`.
    Bracket(Vec<(usize, usize, Q)>),
}

/// Expresses each basis element (ordered so that `x_k` with weight `γ − α_i`
/// precedes weight `γ`) through brackets with the generators.
pub fn generator_recipes(
    fc: &FiniteCartan,
    elems: &[LoopElement],
    weights: &[RootVec],
    gens: &[LoopElement],
) -> Vec<Recipe> {
    let n = gens.len();
    let mut by_weight: HashMap<&RootVec, Vec<usize>> = HashMap::new();
    for (k, w) in weights.iter().enumerate() {
        by_weight.entry(w).or_default().push(k);
    }
    let mut out = Vec::with_capacity(elems.len());
    for (k, x) in elems.iter().enumerate() {
        if let Some(i) = gens.iter().position(|g| g == x) {
            out.push(Recipe::Simple(i));
            continue;
        }
        let space = &by_weight[&weights[k]];
        let coord = |v: &LoopElement| -> Vec<Q> {
            let mut c = vec![Q::zero(); space.len()];
            for ((z, a), val) in &v.terms {
                let pos = space
                    .iter()
                    .position(|&s| elems[s].terms.contains_key(&(*z, *a)))
                    .expect("bracket leaves the root space");
                c[pos] += val;
            }
            c
        };
        let mut cands = Vec::new();
        let mut cols = Vec::new();
        for i in 0..n {
            if weights[k].0[i] == 0 {
                continue;
            }
            let lower = weights[k].minus_unit(i);
            for &kk in by_weight.get(&lower).map(Vec::as_slice).unwrap_or(&[]) {
                debug_assert!(kk < k);
                let v = bracket(fc, &gens[i], &elems[kk]);
                if !v.is_zero() {
                    cands.push((i, kk));
                    cols.push(coord(&v));
                }
            }
        }
        let mut target = vec![Q::zero(); space.len()];
        target[space.iter().position(|&s| s == k).unwrap()] = q(1);
        let mut aug_cols = cols.clone();
        aug_cols.push(target);
        let (rref, pivots) = QMatrix::from_columns(space.len(), &aug_cols).rref();
        assert!(
            !pivots.contains(&cols.len()),
            "basis element {k} is not generated"
        );
        let mut terms = Vec::new();
        for (r, &p) in pivots.iter().enumerate() {
            let c = rref.get(r, cols.len()).clone();
            if !c.is_zero() {
                terms.push((cands[p].0, cands[p].1, c));
            }
        }
        out.push(Recipe::Bracket(terms));
    }
    out
}

/// Matrices of iterated brackets acting on a module.
///
/// With `sign = 1` element `k` acts as `X_k = Σ c (E_i X_{k'} − X_{k'} E_i)`,
/// the action of `x_k ∈ ñ₊`. With `sign = −1` the recipes of `ñ₋` produce
/// the action of the anti-involution image `σ(y_k) ∈ ñ₊`.
pub struct IteratedAction<'m> {
    module: &'m GradedModule,
    recipes: Vec<Recipe>,
    weights: Vec<RootVec>,
    sign: i64,
    cache: Mutex<HashMap<(usize, RootVec), Option<Arc<QMatrix>>>>,
}

impl<'m> IteratedAction<'m> {
    /// Action of the `ñ₊` basis up to degree `cap`.
    pub fn ntilde(fc: &FiniteCartan, module: &'m GradedModule, cap: u32) -> Self {
        let basis = NTilde::new(fc, cap);
        let elems: Vec<LoopElement> = basis.elems.iter().map(|e| e.element()).collect();
        let weights: Vec<RootVec> = basis.elems.iter().map(|e| e.weight.clone()).collect();
        let gens: Vec<LoopElement> = (0..=fc.rank()).map(|i| chevalley_e(fc, i)).collect();
        let recipes = generator_recipes(fc, &elems, &weights, &gens);
        IteratedAction {
            module,
            recipes,
            weights,
            sign: 1,
            cache: Mutex::new(HashMap::new()),
        }
    }

    /// Action of `σ(y_k)` for the `ñ₋` basis up to degree `cap`.
    pub fn sigma_nminus(fc: &FiniteCartan, module: &'m GradedModule, cap: u32) -> Self {
        let minus = NMinus::new(fc, cap);
        let elems: Vec<LoopElement> = (0..minus.elems.len()).map(|k| minus.element(k)).collect();
        let gens: Vec<LoopElement> = (0..=fc.rank()).map(|i| chevalley_f(fc, i)).collect();
        let recipes = generator_recipes(fc, &elems, &minus.weights, &gens);
        IteratedAction {
            module,
            recipes,
            weights: minus.weights,
            sign: -1,
            cache: Mutex::new(HashMap::new()),
        }
    }

    pub fn len(&self) -> usize {
        self.recipes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.recipes.is_empty()
    }

    pub fn weight(&self, k: usize) -> &RootVec {
        &self.weights[k]
    }

    /// Matrix `L_β → L_{β−wt_k}`; `None` when either space is zero.
    pub fn matrix(&self, k: usize, beta: &RootVec) -> Option<Arc<QMatrix>> {
        let key = (k, beta.clone());
        if let Some(m) = self.cache.lock().unwrap().get(&key) {
            return m.clone();
        }
        let m = self.compute(k, beta).map(Arc::new);
        self.cache.lock().unwrap().insert(key, m.clone());
        m
    }

    fn compute(&self, k: usize, beta: &RootVec) -> Option<QMatrix> {
        let tgt = beta - &self.weights[k];
        let (src_dim, tgt_dim) = (self.module.dim(beta), self.module.dim(&tgt));
        if src_dim == 0 || tgt_dim == 0 {
            return None;
        }
        match &self.recipes[k] {
            Recipe::Simple(i) => self.module.e_matrix(*i, beta).cloned(),
            Recipe::Bracket(terms) => {
                let mut acc = QMatrix::zeros(tgt_dim, src_dim);
                for (i, kk, c) in terms {
                    let mid_a = beta - &self.weights[*kk];
                    let mid_b = beta.minus_unit(*i);
                    // E_i X_{k'} − X_{k'} E_i
                    let mut part = QMatrix::zeros(tgt_dim, src_dim);
                    if let (Some(x), Some(e)) =
                        (self.matrix(*kk, beta), self.module.e_matrix(*i, &mid_a))
                    {
                        part.add_assign(&e.mul(&x));
                    }
                    if let (Some(e), Some(x)) =
                        (self.module.e_matrix(*i, beta), self.matrix(*kk, &mid_b))
                    {
                        part = part.sub(&x.mul(e));
                    }
                    acc.add_assign(&part.scale(&(c * q(self.sign))));
                }
                if acc.is_zero() {
                    None
                } else {
                    Some(acc)
                }
            }
        }
    }
}

/// `L(λ)` up to `δ`-degree `depth`, built weight space by weight space from the
/// contravariant form. Requires `λ` dominant integral.
pub fn irreducible_module(
    fc: &FiniteCartan,
    lambda: &AffineWeight,
    depth: u32,
) -> Result<GradedModule> {
    if !lambda.is_dominant_integral(fc) {
        return Err(KmError::NotDominant(lambda.to_string()));
    }
    let labels = hw_labels(fc, lambda)?;
    let gcm = affine_cartan_matrix(fc);
    let simple = build_simple_module(&gcm, &labels, |b| b.degree() <= i64::from(depth));
    let n = gcm.len();
    let mut words: BTreeMap<RootVec, Vec<String>> = BTreeMap::new();
    for (beta, layer) in &simple.spaces {
        let names = if beta.is_zero() {
            vec!["v".to_string()]
        } else {
            layer
                .reps
                .iter()
                .map(|&(i, k)| format!("f{} {}", i, words[&beta.minus_unit(i)][k]))
                .collect()
        };
        words.insert(beta.clone(), names);
    }
    let mut spaces = BTreeMap::new();
    for (beta, layer) in &simple.spaces {
        let f = (0..n)
            .map(|i| {
                simple
                    .spaces
                    .get(&beta.plus_unit(i))
                    .and_then(|up| up.lower[i].clone())
            })
            .collect();
        spaces.insert(
            beta.clone(),
            WeightSpace {
                dim: layer.dim,
                basis: words[beta].clone(),
                e: layer.raise.clone(),
                f,
                gram: Some(layer.gram.clone()),
            },
        );
    }
    Ok(GradedModule {
        hw: lambda.clone(),
        depth,
        kind: ModuleKind::Irreducible,
        window: None,
        spaces,
        gcm,
        hw_labels: labels,
    })
}

type Elem = BTreeMap<Vec<usize>, Q>;

/// PBW straightening in `U(ñ₋)` for sorted monomials in the [`NMinus`] basis.
struct Pbw<'a> {
    fc: &'a FiniteCartan,
    minus: NMinus,
    memo: HashMap<(usize, Vec<usize>), Elem>,
}

impl<'a> Pbw<'a> {
    fn add_into(acc: &mut Elem, x: &Elem, c: &Q) {
        for (m, v) in x {
            let e = acc.entry(m.clone()).or_insert_with(Q::zero);
            *e += v * c;
            if e.is_zero() {
                acc.remove(m);
            }
        }
    }

    /// `[y_a, y_b]` in `ñ₋` coordinates.
    fn bracket_minus(&self, a: usize, b: usize) -> Vec<(usize, Q)> {
        let v = bracket(self.fc, &self.minus.element(a), &self.minus.element(b));
        debug_assert!(v.c.is_zero() && v.d.is_zero());
        v.terms
            .iter()
            .map(|((z, g), c)| {
                let k = self
                    .minus
                    .position(*z, *g)
                    .expect("bracket beyond the truncation");
                (k, c.clone())
            })
            .collect()
    }

    /// `y_k · m` for a sorted monomial `m`.
    fn mul_gen(&mut self, k: usize, m: &[usize]) -> Elem {
        if m.first().is_none_or(|&f| k <= f) {
            let mut mono = vec![k];
            mono.extend_from_slice(m);
            return BTreeMap::from([(mono, q(1))]);
        }
        let key = (k, m.to_vec());
        if let Some(v) = self.memo.get(&key) {
            return v.clone();
        }
        let (head, rest) = (m[0], &m[1..]);
        let mut out = Elem::new();
        // y_k y_h rest = y_h (y_k rest) + [y_k, y_h] rest; every index produced
        // is at least h, so prepending h keeps monomials sorted.
        for (mono, c) in self.mul_gen(k, rest) {
            let mut w = vec![head];
            w.extend(mono);
            Self::add_into(&mut out, &BTreeMap::from([(w, q(1))]), &c);
        }
        for (j, c) in self.bracket_minus(k, head) {
            let part = self.mul_gen(j, rest);
            Self::add_into(&mut out, &part, &c);
        }
        self.memo.insert(key, out.clone());
        out
    }

    fn mul_elem(&mut self, k: usize, x: &Elem) -> Elem {
        let mut out = Elem::new();
        for (m, c) in x {
            let part = self.mul_gen(k, m);
            Self::add_into(&mut out, &part, c);
        }
        out
    }

    fn weight_of(&self, m: &[usize]) -> RootVec {
        let n = self.fc.rank() + 1;
        m.iter()
            .fold(RootVec::zero(n), |acc, &k| &acc + &self.minus.weights[k])
    }

    /// `e_i · (m v)` in the Verma module of highest weight `λ`.
    fn apply_e(&mut self, lambda: &AffineWeight, i: usize, m: &[usize]) -> Elem {
        let ei = chevalley_e(self.fc, i);
        let mut out = Elem::new();
        for j in 0..m.len() {
            let br = bracket(self.fc, &ei, &self.minus.element(m[j]));
            if br.is_zero() {
                continue;
            }
            let suffix = &m[j + 1..];
            let mu = lambda.sub_root(self.fc, &self.weight_of(suffix));
            let mut scalar = &br.c * &mu.level;
            let mut x = Elem::new();
            for ((z, g), c) in &br.terms {
                match self.fc.basis(*g) {
                    GBasis::H(t) if *z == 0 => scalar += c * &mu.finite[t],
                    _ => {
                        let k = self
                            .minus
                            .position(*z, *g)
                            .expect("e_i maps ñ₋ into ñ₋ + h̃");
                        let part = self.mul_gen(k, suffix);
                        Self::add_into(&mut x, &part, c);
                    }
                }
            }
            if !scalar.is_zero() {
                let mut mono = m[..j].to_vec();
                mono.extend_from_slice(suffix);
                Self::add_into(&mut out, &BTreeMap::from([(mono, q(1))]), &scalar);
            }
            for &p in m[..j].iter().rev() {
                x = self.mul_elem(p, &x);
            }
            Self::add_into(&mut out, &x, &q(1));
        }
        out
    }
}

/// Sorted multisets of `ñ₋` basis elements with total weight `β`.
fn monomials(weights: &[RootVec], beta: &RootVec) -> Vec<Vec<usize>> {
    fn go(
        weights: &[RootVec],
        start: usize,
        rest: &RootVec,
        cur: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        if rest.is_zero() {
            out.push(cur.clone());
            return;
        }
        for k in start..weights.len() {
            let r = rest - &weights[k];
            if r.is_nonneg() {
                cur.push(k);
                go(weights, k, &r, cur, out);
                cur.pop();
            }
        }
    }
    let mut out = Vec::new();
    go(weights, 0, beta, &mut Vec::new(), &mut out);
    out
}

fn to_column(x: &Elem, index: &HashMap<Vec<usize>, usize>, dim: usize) -> Vec<Q> {
    let mut col = vec![Q::zero(); dim];
    for (m, c) in x {
        col[index[m]] += c;
    }
    col
}

/// The Verma module `M(λ)` with PBW basis on the box [`verma_window`]`(depth)`.
pub fn build_verma(fc: &FiniteCartan, lambda: &AffineWeight, depth: u32) -> Result<GradedModule> {
    build_verma_in(fc, lambda, &verma_window(fc, depth))
}

/// The Verma module on the box `0 ≤ β ≤ window`.
pub fn build_verma_in(
    fc: &FiniteCartan,
    lambda: &AffineWeight,
    window: &RootVec,
) -> Result<GradedModule> {
    let labels = hw_labels(fc, lambda)?;
    let gcm = affine_cartan_matrix(fc);
    let n = gcm.len();
    let depth = window.degree().max(0) as u32;
    let mut pbw = Pbw {
        fc,
        minus: NMinus::new(fc, depth.max(1)),
        memo: HashMap::new(),
    };
    let simple_f: Vec<usize> = (0..n)
        .map(|i| {
            let f = chevalley_f(fc, i);
            let (&(z, g), _) = f.terms.iter().next().unwrap();
            pbw.minus.position(z, g).unwrap()
        })
        .collect();
    let mut bases: BTreeMap<RootVec, Vec<Vec<usize>>> = BTreeMap::new();
    for beta in box_points(window) {
        bases.insert(beta.clone(), monomials(&pbw.minus.weights, &beta));
    }
    let indices: BTreeMap<RootVec, HashMap<Vec<usize>, usize>> = bases
        .iter()
        .map(|(b, ms)| {
            (
                b.clone(),
                ms.iter().enumerate().map(|(k, m)| (m.clone(), k)).collect(),
            )
        })
        .collect();
    let names = |m: &[usize], minus: &NMinus| -> String {
        if m.is_empty() {
            return "v".into();
        }
        let parts: Vec<String> = m
            .iter()
            .map(|&k| {
                let (z, g) = minus.elems[k];
                format!("z^{}{}", z, fc.basis_label(g))
            })
            .collect();
        parts.join(" ")
    };
    let mut spaces = BTreeMap::new();
    for (beta, ms) in &bases {
        let dim = ms.len();
        let mut e = vec![None; n];
        let mut f = vec![None; n];
        for i in 0..n {
            let down = beta.minus_unit(i);
            if down.is_nonneg() && !bases[&down].is_empty() {
                let cols: Vec<Vec<Q>> = ms
                    .iter()
                    .map(|m| {
                        to_column(
                            &pbw.apply_e(lambda, i, m),
                            &indices[&down],
                            bases[&down].len(),
                        )
                    })
                    .collect();
                e[i] = Some(QMatrix::from_columns(bases[&down].len(), &cols));
            }
            let up = beta.plus_unit(i);
            if let Some(up_basis) = bases.get(&up) {
                let cols: Vec<Vec<Q>> = ms
                    .iter()
                    .map(|m| to_column(&pbw.mul_gen(simple_f[i], m), &indices[&up], up_basis.len()))
                    .collect();
                f[i] = Some(QMatrix::from_columns(up_basis.len(), &cols));
            }
        }
        spaces.insert(
            beta.clone(),
            WeightSpace {
                dim,
                basis: ms.iter().map(|m| names(m, &pbw.minus)).collect(),
                e,
                f,
                gram: None,
            },
        );
    }
    let mut module = GradedModule {
        hw: lambda.clone(),
        depth,
        kind: ModuleKind::Verma,
        window: Some(window.clone()),
        spaces,
        gcm,
        hw_labels: labels,
    };
    let grams: Vec<(RootVec, QMatrix)> = {
        let sigma = IteratedAction::sigma_nminus(fc, &module, depth.max(1));
        bases
            .iter()
            .map(|(beta, ms)| (beta.clone(), gram_from_monomials(&sigma, beta, ms)))
            .collect()
    };
    for (beta, g) in grams {
        module.spaces.get_mut(&beta).unwrap().gram = Some(g);
    }
    Ok(module)
}

/// Row `a` is `⟨u_a v, ·⟩ = ⟨v, σ(y_{m_last}) ⋯ σ(y_{m_1}) ·⟩`, accumulated as a
/// row vector from the highest weight line upwards.
fn gram_from_monomials(sigma: &IteratedAction<'_>, beta: &RootVec, ms: &[Vec<usize>]) -> QMatrix {
    let dim = ms.len();
    let mut g = QMatrix::zeros(dim, dim);
    'rows: for (a, m) in ms.iter().enumerate() {
        let mut at = vec![beta.clone()];
        for &k in m {
            let next = at.last().unwrap() - sigma.weight(k);
            at.push(next);
        }
        debug_assert!(at.last().unwrap().is_zero());
        let mut row = vec![q(1)];
        for (j, &k) in m.iter().enumerate().rev() {
            let Some(s) = sigma.matrix(k, &at[j]) else {
                continue 'rows;
            };
            row = s.vec_mul(&row);
        }
        for (b, x) in row.into_iter().enumerate() {
            g.set(a, b, x);
        }
    }
    g
}

/// The contravariant form on the Verma weight space `M_{λ−β}`.
pub fn shapovalov_gram(m: &GradedModule, beta: &RootVec) -> Result<QMatrix> {
    if m.kind != ModuleKind::Verma {
        return Err(KmError::WeightOutOfRange(format!(
            "{beta} (module is not a Verma module)"
        )));
    }
    match m.spaces.get(beta).and_then(|s| s.gram.clone()) {
        Some(g) if m.covers(beta) => Ok(g),
        _ => Err(KmError::WeightOutOfRange(beta.to_string())),
    }
}

/// `M(λ)` modulo the radical of the contravariant form, weight space by
/// weight space. Checks that the radical is stable under every generator.
pub fn irreducible_quotient(fc: &FiniteCartan, m: &GradedModule) -> Result<GradedModule> {
    if m.kind != ModuleKind::Verma || !m.hw.is_dominant_integral(fc) {
        return Err(KmError::NotDominant(m.hw.to_string()));
    }
    let n = m.nodes();
    struct Quot {
        proj: QMatrix,
        kernel: Vec<Vec<Q>>,
        gram: QMatrix,
        pivots: Vec<usize>,
    }
    let mut quots: BTreeMap<RootVec, Quot> = BTreeMap::new();
    for (beta, space) in &m.spaces {
        let g = space
            .gram
            .as_ref()
            .expect("Verma spaces carry their Gram matrix");
        let (rref, pivots) = g.rref();
        let proj = QMatrix::from_rows((0..pivots.len()).map(|r| rref.row(r)).collect());
        quots.insert(
            beta.clone(),
            Quot {
                proj,
                kernel: kernel_from_rref(&rref, &pivots),
                gram: g.select(&pivots, &pivots),
                pivots,
            },
        );
    }
    // The rows of `proj` span the row space of the Gram matrix, so a vector
    // lies in the radical exactly when `proj` kills it.
    let induced = |op: &QMatrix, src: &Quot, tgt: &Quot, what: &str| -> QMatrix {
        let po = tgt.proj.mul(op);
        for k in &src.kernel {
            assert!(
                po.mul_vec(k).iter().all(Zero::is_zero),
                "radical is not stable under {what}"
            );
        }
        let rows: Vec<usize> = (0..po.rows()).collect();
        po.select(&rows, &src.pivots)
    };
    let mut spaces = BTreeMap::new();
    for (beta, space) in &m.spaces {
        let src = &quots[beta];
        let dim = src.pivots.len();
        if dim == 0 {
            continue;
        }
        let mut e = vec![None; n];
        let mut f = vec![None; n];
        for i in 0..n {
            let down = beta.minus_unit(i);
            if let (Some(op), Some(tgt)) = (space.e[i].as_ref(), quots.get(&down)) {
                if !tgt.pivots.is_empty() {
                    e[i] = Some(induced(op, src, tgt, &format!("e{i}")));
                }
            }
            let up = beta.plus_unit(i);
            if let (Some(op), Some(tgt)) = (space.f[i].as_ref(), quots.get(&up)) {
                if !tgt.pivots.is_empty() {
                    f[i] = Some(induced(op, src, tgt, &format!("f{i}")));
                }
            }
        }
        spaces.insert(
            beta.clone(),
            WeightSpace {
                dim,
                basis: src.pivots.iter().map(|&p| space.basis[p].clone()).collect(),
                e,
                f,
                gram: Some(src.gram.clone()),
            },
        );
    }
    Ok(GradedModule {
        hw: m.hw.clone(),
        depth: m.depth,
        kind: ModuleKind::Irreducible,
        window: m.window.clone(),
        spaces,
        gcm: m.gcm.clone(),
        hw_labels: m.hw_labels.clone(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::affine_roots::fundamental_weight;
    use crate::characters::{freudenthal_character, partition_fn};

    fn a1() -> FiniteCartan {
        FiniteCartan::new("A1".parse().unwrap())
    }

    #[test]
    fn verma_dims_are_partition_numbers() {
        let fc = a1();
        let lam = fundamental_weight(&fc, 0).unwrap();
        let m = build_verma(&fc, &lam, 2).unwrap();
        for (beta, s) in &m.spaces {
            assert_eq!(s.dim as u64, partition_fn(&fc, beta), "{beta}");
        }
        assert_eq!(m.dim(&RootVec(vec![1, 1])), 2);
        m.check_commutation().unwrap();
    }

    #[test]
    fn shapovalov_examples() {
        let fc = a1();
        let lam = fundamental_weight(&fc, 0).unwrap();
        let m = build_verma(&fc, &lam, 1).unwrap();
        assert_eq!(
            shapovalov_gram(&m, &RootVec(vec![0, 0])).unwrap(),
            QMatrix::identity(1)
        );
        assert!(shapovalov_gram(&m, &RootVec(vec![0, 1])).unwrap().is_zero());
        assert_eq!(
            shapovalov_gram(&m, &RootVec(vec![1, 0])).unwrap(),
            QMatrix::identity(1)
        );
        assert!(matches!(
            shapovalov_gram(&m, &RootVec(vec![5, 0])),
            Err(KmError::WeightOutOfRange(_))
        ));
        for s in m.spaces.values() {
            let g = s.gram.as_ref().unwrap();
            assert_eq!(g, &g.transpose());
        }
    }

    #[test]
    fn quotient_matches_layered_and_freudenthal() {
        let fc = a1();
        for labels in [[1, 0], [1, 1]] {
            let lam = AffineWeight::from_dynkin_ints(&fc, &labels).unwrap();
            let quot = irreducible_quotient(&fc, &build_verma(&fc, &lam, 2).unwrap()).unwrap();
            let layered = irreducible_module(&fc, &lam, 2).unwrap();
            let ch = freudenthal_character(&fc, &lam, 2).unwrap();
            for beta in box_points(quot.window.as_ref().unwrap()) {
                assert_eq!(quot.dim(&beta), layered.dim(&beta), "{beta}");
                assert_eq!(quot.dim(&beta) as u64, ch.mult(&beta), "{beta}");
            }
            quot.check_commutation().unwrap();
            layered.check_commutation().unwrap();
        }
    }

    #[test]
    fn ntilde_action_respects_brackets() {
        let fc = a1();
        let lam = AffineWeight::from_dynkin_ints(&fc, &[1, 1]).unwrap();
        let m = irreducible_module(&fc, &lam, 3).unwrap();
        let act = IteratedAction::ntilde(&fc, &m, 2);
        let basis = NTilde::new(&fc, 2);
        // X_a X_b − X_b X_a = X_{[a,b]} on every weight space
        for a in 0..basis.len() {
            for b in 0..basis.len() {
                let br = bracket(&fc, &basis.elems[a].element(), &basis.elems[b].element());
                let Some(coords) = basis.coords(&br) else {
                    continue;
                };
                for beta in m.spaces.keys() {
                    let wa = &basis.elems[a].weight;
                    let wb = &basis.elems[b].weight;
                    let tgt = &(beta - wa) - wb;
                    if !tgt.is_nonneg() || m.dim(&tgt) == 0 {
                        continue;
                    }
                    let (r, c) = (m.dim(&tgt), m.dim(beta));
                    let compose = |x: usize, y: usize, wy: &RootVec| -> QMatrix {
                        match (act.matrix(y, beta), act.matrix(x, &(beta - wy))) {
                            (Some(my), Some(mx)) => mx.mul(&my),
                            _ => QMatrix::zeros(r, c),
                        }
                    };
                    let lhs = compose(a, b, wb).sub(&compose(b, a, wa));
                    let mut rhs = QMatrix::zeros(r, c);
                    for (k, v) in &coords {
                        if let Some(mk) = act.matrix(*k, beta) {
                            rhs.add_assign(&mk.scale(v));
                        }
                    }
                    assert_eq!(lhs, rhs, "a={a} b={b} β={beta}");
                }
            }
        }
    }
}
