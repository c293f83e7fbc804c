//! Depth-truncated formal characters.
//!
//! A character of a highest weight module is stored by displacement: the
//! coefficient at `β ∈ Q̃₊` is the multiplicity of the weight `λ − β`.
//! Truncation is by `δ`-degree (`β_0 ≤ depth`) and exact below the cap.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use num_traits::{Signed, Zero};
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::affine_roots::{positive_root_coords, rho_tilde, root_form, AffineWeight};
use crate::affine_weyl::{dot_displacement, enumerate, WeylWord};
use crate::error::{KmError, Result};
use crate::finite_cartan::FiniteCartan;
use crate::lattice::RootVec;
use crate::rational::{q, to_i64, Q};

/// A truncated formal character `Σ_β mult(λ − β) e^{λ − β}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FormalCharacter {
    pub base: AffineWeight,
    pub depth: u32,
    /// Nonzero multiplicities by displacement.
    pub coeffs: BTreeMap<RootVec, u64>,
}

impl FormalCharacter {
    pub fn mult(&self, beta: &RootVec) -> u64 {
        self.coeffs.get(beta).copied().unwrap_or(0)
    }

    /// Multiplicity of an arbitrary weight (0 off the lattice `λ − Q̃₊`).
    pub fn mult_of_weight(&self, fc: &FiniteCartan, mu: &AffineWeight) -> u64 {
        crate::affine_roots::displacement(fc, &self.base, mu).map_or(0, |b| self.mult(&b))
    }

    /// Entries ordered by degree, then height, then coordinates.
    pub fn sorted_entries(&self) -> Vec<(&RootVec, u64)> {
        let mut v: Vec<(&RootVec, u64)> = self.coeffs.iter().map(|(b, m)| (b, *m)).collect();
        v.sort_by(|a, b| (a.0.degree(), a.0.height(), a.0).cmp(&(b.0.degree(), b.0.height(), b.0)));
        v
    }

    /// `{"hw": …, "depth": n, "coeffs": [[weight, mult], …]}`.
    pub fn to_json(&self, fc: &FiniteCartan) -> Value {
        let coeffs: Vec<Value> = self
            .sorted_entries()
            .into_iter()
            .map(|(b, m)| json!([self.base.sub_root(fc, b).to_string(), m]))
            .collect();
        json!({
            "hw": self.base.to_string(),
            "depth": self.depth,
            "coeffs": coeffs,
        })
    }

    /// Multiplicities along `λ − nδ` for `n = 0..=depth`.
    pub fn delta_string(&self, fc: &FiniteCartan) -> Vec<u64> {
        (0..=i64::from(self.depth))
            .map(|n| {
                let mut b = vec![n];
                b.extend(fc.marks.iter().map(|a| a * n));
                self.mult(&RootVec(b))
            })
            .collect()
    }
}

/// Kostant partition function values for every `0 ≤ γ ≤ bound`.
#[derive(Clone, Debug)]
pub struct PartitionTable {
    bound: RootVec,
    strides: Vec<usize>,
    values: Vec<u64>,
}

impl PartitionTable {
    pub fn new(fc: &FiniteCartan, bound: &RootVec) -> Self {
        let dims: Vec<usize> = bound.0.iter().map(|&b| (b.max(-1) + 1) as usize).collect();
        let mut strides = vec![1; dims.len()];
        for i in (0..dims.len().saturating_sub(1)).rev() {
            strides[i] = strides[i + 1] * dims[i + 1];
        }
        let size: usize = dims.iter().product();
        let mut values = vec![0u64; size];
        if size == 0 {
            return PartitionTable {
                bound: bound.clone(),
                strides,
                values,
            };
        }
        values[0] = 1;
        let cap = bound.degree().max(0) as u32;
        for (alpha, mult) in positive_root_coords(fc, cap) {
            if !alpha.le(bound) {
                continue;
            }
            let shift: usize = alpha
                .0
                .iter()
                .zip(&strides)
                .map(|(a, s)| *a as usize * s)
                .sum();
            for _ in 0..mult {
                // unbounded knapsack in increasing index order
                for idx in 0..size {
                    if fits(idx, &alpha, &dims, &strides) {
                        let add = values[idx - shift];
                        values[idx] = values[idx].checked_add(add).expect("partition overflow");
                    }
                }
            }
        }
        PartitionTable {
            bound: bound.clone(),
            strides,
            values,
        }
    }

    /// `P(γ)`, or `None` outside the table.
    pub fn get(&self, gamma: &RootVec) -> Option<u64> {
        if !gamma.is_nonneg() {
            return Some(0);
        }
        if !gamma.le(&self.bound) {
            return None;
        }
        let idx: usize = gamma
            .0
            .iter()
            .zip(&self.strides)
            .map(|(g, s)| *g as usize * s)
            .sum();
        Some(self.values[idx])
    }
}

/// Whether `γ − α ≥ 0` for the vector `γ` stored at `idx`.
fn fits(idx: usize, alpha: &RootVec, dims: &[usize], strides: &[usize]) -> bool {
    alpha
        .0
        .iter()
        .enumerate()
        .all(|(i, &a)| (idx / strides[i]) % dims[i] >= a as usize)
}

/// Number of ways to write `β` as a sum of positive affine roots, each root
/// `α` coming in `mult(α)` colors.
pub fn partition_fn(fc: &FiniteCartan, beta: &RootVec) -> u64 {
    if !beta.is_nonneg() {
        return 0;
    }
    PartitionTable::new(fc, beta).get(beta).unwrap()
}

/// Finite window used for Verma characters: `β_0 ≤ depth` and
/// `β_i ≤ (depth + 1)·a_i`. A Verma module has infinitely many weights of
/// each degree, so some such window is unavoidable.
pub fn verma_window(fc: &FiniteCartan, depth: u32) -> RootVec {
    let d = i64::from(depth);
    let mut b = vec![d];
    b.extend(fc.marks.iter().map(|a| (d + 1) * a));
    RootVec(b)
}

/// Character of the Verma module with highest weight `λ` on the default window.
pub fn verma_character(fc: &FiniteCartan, lambda: &AffineWeight, depth: u32) -> FormalCharacter {
    verma_character_in(fc, lambda, &verma_window(fc, depth))
}

/// Character of the Verma module on the box `0 ≤ β ≤ bound`.
pub fn verma_character_in(
    fc: &FiniteCartan,
    lambda: &AffineWeight,
    bound: &RootVec,
) -> FormalCharacter {
    let table = PartitionTable::new(fc, bound);
    let mut coeffs = BTreeMap::new();
    for beta in box_points(bound) {
        let p = table.get(&beta).unwrap();
        if p > 0 {
            coeffs.insert(beta, p);
        }
    }
    FormalCharacter {
        base: lambda.clone(),
        depth: bound.degree().max(0) as u32,
        coeffs,
    }
}

/// All `0 ≤ β ≤ bound`.
pub fn box_points(bound: &RootVec) -> Vec<RootVec> {
    let mut out = vec![Vec::new()];
    for &b in &bound.0 {
        out = out
            .into_iter()
            .flat_map(|v| {
                (0..=b).map(move |k| {
                    let mut w = v.clone();
                    w.push(k);
                    w
                })
            })
            .collect();
    }
    out.into_iter().map(RootVec).collect()
}

/// Inner products needed for the ρ̃-shifted norm of `λ − β`.
struct NormData {
    /// `(λ + ρ̃ | α_i)`.
    shifted: Vec<Q>,
    /// `(α_i | α_j)`.
    gram: Vec<Vec<Q>>,
}

impl NormData {
    fn new(fc: &FiniteCartan, lambda: &AffineWeight) -> Self {
        let n = fc.rank() + 1;
        let lr = lambda + &rho_tilde(fc);
        let units: Vec<RootVec> = (0..n).map(|i| RootVec::unit(n, i)).collect();
        let gram = units
            .iter()
            .map(|a| units.iter().map(|b| root_form(fc, a, b)).collect())
            .collect::<Vec<Vec<Q>>>();
        let shifted = (0..n)
            .map(|i| lr.pair_coroot(fc, i) * &gram[i][i] / q(2))
            .collect();
        NormData { shifted, gram }
    }

    fn form(&self, a: &RootVec, b: &RootVec) -> Q {
        let mut acc = Q::zero();
        for (i, x) in a.0.iter().enumerate() {
            if *x == 0 {
                continue;
            }
            for (j, y) in b.0.iter().enumerate() {
                if *y != 0 {
                    acc += &self.gram[i][j] * q(x * y);
                }
            }
        }
        acc
    }

    /// `|λ+ρ̃|² − |λ+ρ̃−β|² = 2(λ+ρ̃|β) − (β|β)`.
    fn norm_drop(&self, beta: &RootVec) -> Q {
        let lin: Q = beta
            .0
            .iter()
            .zip(&self.shifted)
            .map(|(k, s)| s * q(*k))
            .sum();
        lin * q(2) - self.form(beta, beta)
    }

    /// `(λ|α)` recovered from the shifted pairing.
    fn pair_lambda(&self, alpha: &RootVec) -> Q {
        // (λ|α) = (λ+ρ̃|α) − (ρ̃|α), and (ρ̃|α_i) = (α_i|α_i)/2
        alpha
            .0
            .iter()
            .enumerate()
            .map(|(i, k)| (&self.shifted[i] - &self.gram[i][i] / q(2)) * q(*k))
            .sum()
    }
}

fn require_dominant(fc: &FiniteCartan, lambda: &AffineWeight) -> Result<()> {
    if lambda.rank() != fc.rank() || !lambda.is_dominant_integral(fc) {
        return Err(KmError::NotDominant(lambda.to_string()));
    }
    Ok(())
}

/// Character of the irreducible module `L(λ)` by Freudenthal's recursion
///
/// ```text
/// (|λ+ρ̃|² − |μ+ρ̃|²) mult(μ) = 2 Σ_{α>0} mult(α) Σ_{k≥1} (μ+kα|α) mult(μ+kα)
/// ```
///
/// processed layer by layer in height.
pub fn freudenthal_character(
    fc: &FiniteCartan,
    lambda: &AffineWeight,
    depth: u32,
) -> Result<FormalCharacter> {
    require_dominant(fc, lambda)?;
    let n = fc.rank() + 1;
    let nd = NormData::new(fc, lambda);
    let roots: Vec<(RootVec, usize, Q)> = positive_root_coords(fc, depth)
        .into_iter()
        .map(|(a, m)| {
            let sq = nd.form(&a, &a);
            (a, m, sq)
        })
        .collect();
    let mut coeffs: BTreeMap<RootVec, u64> = BTreeMap::new();
    coeffs.insert(RootVec::zero(n), 1);
    let mut layer: BTreeSet<RootVec> = BTreeSet::from([RootVec::zero(n)]);
    while !layer.is_empty() {
        let candidates: BTreeSet<RootVec> = layer
            .iter()
            .flat_map(|b| (0..n).map(move |i| b.plus_unit(i)))
            .filter(|b| b.degree() <= i64::from(depth))
            .collect();
        let computed: Vec<(RootVec, u64)> = candidates
            .into_par_iter()
            .map(|beta| {
                let mut rhs = Q::zero();
                for (alpha, m, sq) in &roots {
                    if !alpha.le(&beta) {
                        continue;
                    }
                    // (λ − β + kα | α) = (λ|α) − (β|α) + k(α|α)
                    let base = nd.pair_lambda(alpha) - nd.form(&beta, alpha);
                    let mut k = 1;
                    loop {
                        let rest = &beta - &alpha.scaled(k);
                        if !rest.is_nonneg() {
                            break;
                        }
                        if let Some(&mu) = coeffs.get(&rest) {
                            rhs += (&base + sq * q(k)) * q(mu as i64) * q(*m as i64);
                        }
                        k += 1;
                    }
                }
                let denom = nd.norm_drop(&beta);
                if !denom.is_positive() {
                    // weights μ ≠ λ of L(λ) have |μ+ρ̃|² < |λ+ρ̃|², so μ is not a weight
                    assert!(rhs.is_zero(), "inconsistent Freudenthal data at {beta}");
                    return (beta, 0);
                }
                let mult = rhs * q(2) / denom;
                let m = to_i64(&mult).expect("integral multiplicity");
                assert!(m >= 0, "negative multiplicity at {beta}");
                (beta, m as u64)
            })
            .collect();
        layer = BTreeSet::new();
        for (beta, m) in computed {
            if m > 0 {
                coeffs.insert(beta.clone(), m);
                layer.insert(beta);
            }
        }
    }
    Ok(FormalCharacter {
        base: lambda.clone(),
        depth,
        coeffs,
    })
}

/// `(sign, λ − w·λ)` for every `w` with `l(w) ≤ max_len` whose displacement has
/// degree at most `depth`, after checking that longer elements only reach
/// beyond `depth`.
pub fn numerator_terms(
    fc: &FiniteCartan,
    lambda: &AffineWeight,
    depth: u32,
    max_len: usize,
) -> Result<Vec<(i64, RootVec, WeylWord)>> {
    let words = enumerate(fc, max_len + 1);
    // Along a reduced word the displacement only grows, so the elements of
    // length max_len + 1 bound everything longer from below.
    let reached = words
        .iter()
        .filter(|w| w.length() == max_len + 1)
        .map(|w| dot_displacement(fc, w, lambda).degree())
        .min()
        .unwrap_or(i64::MAX);
    if reached <= i64::from(depth) {
        return Err(KmError::FrontierTooShallow {
            max_len,
            depth,
            reached,
        });
    }
    Ok(words
        .into_iter()
        .filter(|w| w.length() <= max_len)
        .filter_map(|w| {
            let b = dot_displacement(fc, &w, lambda);
            (b.degree() <= i64::from(depth)).then(|| (w.sign(), b, w))
        })
        .collect())
}

/// Smallest `max_len` accepted by [`numerator_terms`] for this depth.
pub fn sufficient_max_len(fc: &FiniteCartan, lambda: &AffineWeight, depth: u32) -> usize {
    let mut len = 0;
    loop {
        let words = enumerate(fc, len + 1);
        let ok = words
            .iter()
            .filter(|w| w.length() == len + 1)
            .all(|w| dot_displacement(fc, w, lambda).degree() > i64::from(depth));
        if ok {
            return len;
        }
        len += 1;
    }
}

/// Displacements `β` (degree ≤ depth) with `|λ+ρ̃−β|² ≤ |λ+ρ̃|²` reachable from
/// 0 through such vectors. Contains the support of `L(λ)` within the depth.
fn norm_ball(fc: &FiniteCartan, lambda: &AffineWeight, depth: u32) -> BTreeSet<RootVec> {
    let n = fc.rank() + 1;
    let nd = NormData::new(fc, lambda);
    let mut all = BTreeSet::from([RootVec::zero(n)]);
    let mut layer = vec![RootVec::zero(n)];
    while !layer.is_empty() {
        let mut next = Vec::new();
        for b in &layer {
            for i in 0..n {
                let c = b.plus_unit(i);
                if c.degree() <= i64::from(depth)
                    && !nd.norm_drop(&c).is_negative()
                    && all.insert(c.clone())
                {
                    next.push(c);
                }
            }
        }
        layer = next;
    }
    all
}

/// Smallest box `0 ≤ β ≤ bound` containing every weight of `L(λ)` of degree
/// at most `depth`. A Verma module realized on this box has the whole
/// truncated `L(λ)` as the quotient by its radical.
pub fn irreducible_window(fc: &FiniteCartan, lambda: &AffineWeight, depth: u32) -> RootVec {
    let support = norm_ball(fc, lambda, depth);
    RootVec(
        (0..=fc.rank())
            .map(|i| support.iter().map(|b| b.0[i]).max().unwrap_or(0))
            .collect(),
    )
}

/// Character of `L(λ)` from the Weyl–Kac formula, expanded as
/// `Σ_w (−1)^{l(w)} e^{w·λ} · Σ_γ P(γ) e^{−γ}`.
pub fn weyl_kac_character(
    fc: &FiniteCartan,
    lambda: &AffineWeight,
    depth: u32,
    max_len: usize,
) -> Result<FormalCharacter> {
    require_dominant(fc, lambda)?;
    let terms = numerator_terms(fc, lambda, depth, max_len)?;
    let support = norm_ball(fc, lambda, depth);
    let bound = irreducible_window(fc, lambda, depth);
    let table = PartitionTable::new(fc, &bound);
    let mut coeffs = BTreeMap::new();
    for beta in support {
        let mut acc: i64 = 0;
        for (sign, bw, _) in &terms {
            let rest = &beta - bw;
            if rest.is_nonneg() {
                acc += sign * table.get(&rest).unwrap() as i64;
            }
        }
        assert!(acc >= 0, "negative Weyl–Kac coefficient at {beta}");
        if acc > 0 {
            coeffs.insert(beta, acc as u64);
        }
    }
    Ok(FormalCharacter {
        base: lambda.clone(),
        depth,
        coeffs,
    })
}

/// A truncated power series in `e^{−α_i}` with integer coefficients.
pub type Series = BTreeMap<RootVec, i64>;

/// `Π_{α>0, deg α ≤ depth} (1 − e^{−α})^{mult α}`, truncated at degree `depth`.
pub fn denominator_product(fc: &FiniteCartan, depth: u32) -> Series {
    let n = fc.rank() + 1;
    let mut p: Series = BTreeMap::from([(RootVec::zero(n), 1)]);
    for (alpha, mult) in positive_root_coords(fc, depth) {
        for _ in 0..mult {
            p = times_one_minus(&p, &alpha, depth);
        }
    }
    p
}

/// `s · (1 − e^{−α})`, dropping terms beyond `depth`.
pub fn times_one_minus(s: &Series, alpha: &RootVec, depth: u32) -> Series {
    let mut out = s.clone();
    for (b, c) in s {
        let t = b + alpha;
        if t.degree() > i64::from(depth) {
            continue;
        }
        let e = out.entry(t.clone()).or_insert(0);
        *e -= c;
        if *e == 0 {
            out.remove(&t);
        }
    }
    out
}

/// `ch · Π(1 − e^{−α})^{mult α}` truncated at degree `depth`.
pub fn times_denominator(fc: &FiniteCartan, ch: &FormalCharacter, depth: u32) -> Series {
    let mut p: Series = ch
        .coeffs
        .iter()
        .filter(|(b, _)| b.degree() <= i64::from(depth))
        .map(|(b, m)| (b.clone(), *m as i64))
        .collect();
    for (alpha, mult) in positive_root_coords(fc, depth) {
        for _ in 0..mult {
            p = times_one_minus(&p, &alpha, depth);
        }
    }
    p
}

/// Outcome of a denominator-identity comparison.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DenominatorReport {
    pub depth: u32,
    pub max_len: usize,
    /// Number of monomials compared (union of both supports).
    pub terms: usize,
    /// Number of Weyl group elements contributing.
    pub weyl_terms: usize,
    /// First disagreement as (displacement, product side, Weyl side).
    pub mismatch: Option<(RootVec, i64, i64)>,
}

impl DenominatorReport {
    pub fn ok(&self) -> bool {
        self.mismatch.is_none()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "depth": self.depth,
            "max_len": self.max_len,
            "terms": self.terms,
            "weyl_terms": self.weyl_terms,
            "ok": self.ok(),
            "mismatch": self.mismatch.as_ref().map(|(b, p, w)| json!({
                "beta": b.to_string(), "product": p, "weyl_sum": w
            })),
        })
    }
}

/// Compares `Π(1 − e^{−α})^{mult α}` with `Σ_w (−1)^{l(w)} e^{wρ̃ − ρ̃}` up to
/// degree `depth`.
pub fn denominator_identity_check(
    fc: &FiniteCartan,
    depth: u32,
    max_len: usize,
) -> Result<DenominatorReport> {
    let zero = AffineWeight::zero(fc.rank());
    let terms = numerator_terms(fc, &zero, depth, max_len)?;
    let mut weyl: Series = BTreeMap::new();
    for (sign, b, _) in &terms {
        *weyl.entry(b.clone()).or_insert(0) += sign;
    }
    let product = denominator_product(fc, depth);
    let keys: BTreeSet<&RootVec> = product.keys().chain(weyl.keys()).collect();
    let mismatch = keys.iter().find_map(|b| {
        let p = product.get(*b).copied().unwrap_or(0);
        let w = weyl.get(*b).copied().unwrap_or(0);
        (p != w).then(|| ((*b).clone(), p, w))
    });
    Ok(DenominatorReport {
        depth,
        max_len,
        terms: keys.len(),
        weyl_terms: terms.len(),
        mismatch,
    })
}

/// Counts multisets of positive roots (with colors) summing to `β` by direct
/// recursion; a slow reference for [`partition_fn`].
pub fn partition_fn_brute(fc: &FiniteCartan, beta: &RootVec) -> u64 {
    let cap = beta.degree().max(0) as u32;
    let colored: Vec<RootVec> = positive_root_coords(fc, cap)
        .into_iter()
        .filter(|(a, _)| a.le(beta))
        .flat_map(|(a, m)| std::iter::repeat(a).take(m))
        .collect();
    fn go(
        parts: &[RootVec],
        start: usize,
        rest: &RootVec,
        memo: &mut HashMap<(usize, RootVec), u64>,
    ) -> u64 {
        if rest.is_zero() {
            return 1;
        }
        if let Some(v) = memo.get(&(start, rest.clone())) {
            return *v;
        }
        let mut total = 0;
        for k in start..parts.len() {
            let r = rest - &parts[k];
            if r.is_nonneg() {
                // non-decreasing index sequence = multiset
                total += go(parts, k, &r, memo);
            }
        }
        memo.insert((start, rest.clone()), total);
        total
    }
    go(&colored, 0, beta, &mut HashMap::new())
}
