//! Chevalley–Eilenberg cohomology `H^•(ñ₊; L(λ))`, one `h̃`-weight at a time.
//!
//! A cochain of weight `ν` sends `x_{s_1} ∧ ⋯ ∧ x_{s_i}` (weights summing to
//! `γ_S`) into `L_{ν + γ_S}`. Writing `B = λ − ν`, only subsets with
//! `γ_S ≤ B` contribute and the module vector lives at displacement `B − γ_S`,
//! so every graded piece of the complex is finite and computed exactly.

use std::collections::{BTreeMap, HashMap};

use rayon::prelude::*;
use serde_json::{json, Value};

use crate::affine_roots::{displacement, AffineWeight};
use crate::affine_weyl::{classify_weight, enumerate, WeylWord};
use crate::characters::{freudenthal_character, times_denominator};
use crate::error::{KmError, Result};
use crate::finite_cartan::FiniteCartan;
use crate::highest_weight_modules::{irreducible_module, GradedModule, IteratedAction, ModuleKind};
use crate::lattice::RootVec;
use crate::linalg::SparseMatrix;
use crate::loop_algebra::{bracket, NTilde};
use crate::rational::{q, Q};

/// `ñ₊` acting on a fixed irreducible module, with the bracket table of `ñ₊`.
pub struct CohomologyContext<'m> {
    pub fc: &'m FiniteCartan,
    pub module: &'m GradedModule,
    pub basis: NTilde,
    action: IteratedAction<'m>,
    /// `structure[s]`: `(a, b, c)` with `a < b` and `[x_a, x_b] = c x_s + …`.
    structure: Vec<Vec<(usize, usize, Q)>>,
}

impl<'m> CohomologyContext<'m> {
    pub fn new(fc: &'m FiniteCartan, module: &'m GradedModule) -> Result<Self> {
        if module.kind != ModuleKind::Irreducible {
            return Err(KmError::NotDominant(format!(
                "{} (coefficients must be an irreducible module)",
                module.hw
            )));
        }
        let cap = module.depth;
        let basis = NTilde::new(fc, cap);
        let action = IteratedAction::ntilde(fc, module, cap);
        let mut structure = vec![Vec::new(); basis.len()];
        for a in 0..basis.len() {
            for b in a + 1..basis.len() {
                let (ea, eb) = (&basis.elems[a], &basis.elems[b]);
                if ea.z_exp + eb.z_exp > i64::from(cap) {
                    continue;
                }
                let br = bracket(fc, &ea.element(), &eb.element());
                let coords = basis.coords(&br).expect("ñ₊ is closed under brackets");
                for (s, c) in coords {
                    structure[s].push((a, b, c));
                }
            }
        }
        Ok(CohomologyContext {
            fc,
            module,
            basis,
            action,
            structure,
        })
    }

    pub fn hw(&self) -> &AffineWeight {
        &self.module.hw
    }

    fn weight(&self, k: usize) -> &RootVec {
        &self.basis.elems[k].weight
    }

    /// `B = λ − ν`, checking that the module is deep enough.
    pub fn displacement_of(&self, nu: &AffineWeight) -> Result<RootVec> {
        let b = displacement(self.fc, self.hw(), nu)?;
        if b.degree() > i64::from(self.module.depth) {
            return Err(KmError::DepthInsufficient {
                required: b.degree() as u32,
                available: self.module.depth,
            });
        }
        Ok(b)
    }

    /// Sorted `i`-subsets `S` of `ñ₊` with `γ_S ≤ B`, ignoring module dimensions.
    fn subsets(&self, b: &RootVec, i: usize) -> Vec<(Vec<usize>, RootVec)> {
        fn go(
            ctx: &CohomologyContext<'_>,
            start: usize,
            left: usize,
            rest: &RootVec,
            cur: &mut Vec<usize>,
            out: &mut Vec<(Vec<usize>, RootVec)>,
        ) {
            if left == 0 {
                out.push((cur.clone(), rest.clone()));
                return;
            }
            for k in start..ctx.basis.len() {
                let w = ctx.weight(k);
                if w.degree() > rest.degree() {
                    break;
                }
                let r = rest - w;
                if r.is_nonneg() {
                    cur.push(k);
                    go(ctx, k + 1, left - 1, &r, cur, out);
                    cur.pop();
                }
            }
        }
        let mut out = Vec::new();
        if b.is_nonneg() {
            go(self, 0, i, b, &mut Vec::new(), &mut out);
        }
        out
    }
}

/// One block of a cochain space: the subset `S` and `L_{B−γ_S}`.
#[derive(Clone, Debug)]
pub struct CochainBlock {
    pub subset: Vec<usize>,
    /// Displacement of the module weight space.
    pub module_beta: RootVec,
    pub offset: usize,
    pub dim: usize,
}

/// Basis of `C^i_ν`: pairs (subset, module basis vector), ordered by subset
/// and then module index.
#[derive(Clone, Debug)]
pub struct CochainSpace {
    pub target_weight: AffineWeight,
    pub degree: usize,
    pub blocks: Vec<CochainBlock>,
    /// Number of `i`-subsets with `γ_S ≤ B`, including those with `L_{B−γ_S} = 0`.
    pub subsets_considered: usize,
    index: HashMap<Vec<usize>, usize>,
}

impl CochainSpace {
    pub fn dim(&self) -> usize {
        self.blocks.last().map_or(0, |b| b.offset + b.dim)
    }

    pub fn block(&self, subset: &[usize]) -> Option<&CochainBlock> {
        self.index.get(subset).map(|&k| &self.blocks[k])
    }

    /// Basis labels `x*_{s_1} ∧ ⋯ ⊗ v_k`.
    pub fn labels(&self, ctx: &CohomologyContext<'_>) -> Vec<String> {
        let mut out = Vec::with_capacity(self.dim());
        for b in &self.blocks {
            let wedge: Vec<String> = b
                .subset
                .iter()
                .map(|&s| format!("({})*", ctx.basis.elems[s].label(ctx.fc)))
                .collect();
            let space = &ctx.module.spaces[&b.module_beta];
            for v in &space.basis {
                out.push(format!("{} ⊗ {}", wedge.join("∧"), v));
            }
        }
        out
    }
}

/// The cochain space `C^i` of weight `ν`.
pub fn chain_space(
    ctx: &CohomologyContext<'_>,
    nu: &AffineWeight,
    i: usize,
) -> Result<CochainSpace> {
    let b = ctx.displacement_of(nu)?;
    let subsets = ctx.subsets(&b, i);
    let mut blocks = Vec::new();
    let mut index = HashMap::new();
    let mut offset = 0;
    for (subset, module_beta) in subsets.iter().cloned() {
        let dim = ctx.module.dim(&module_beta);
        if dim == 0 {
            continue;
        }
        index.insert(subset.clone(), blocks.len());
        blocks.push(CochainBlock {
            subset,
            module_beta,
            offset,
            dim,
        });
        offset += dim;
    }
    Ok(CochainSpace {
        target_weight: nu.clone(),
        degree: i,
        blocks,
        subsets_considered: subsets.len(),
        index,
    })
}

/// Position of `x` in the sorted set `set ∪ {x}`.
fn insert_position(set: &[usize], x: usize) -> usize {
    set.iter().take_while(|&&s| s < x).count()
}

fn sign(k: usize) -> Q {
    if k % 2 == 0 {
        q(1)
    } else {
        q(-1)
    }
}

/// Matrix of `d : C^i → C^{i+1}` between two already built spaces.
///
/// `(dφ)(x_0,…,x_i) = Σ_j (−1)^j x_j·φ(…x̂_j…) + Σ_{j<k} (−1)^{j+k} φ([x_j,x_k], …x̂_j…x̂_k…)`.
pub fn differential_between(
    ctx: &CohomologyContext<'_>,
    src: &CochainSpace,
    tgt: &CochainSpace,
) -> SparseMatrix {
    let mut d = SparseMatrix::new(tgt.dim(), src.dim());
    for blk in &src.blocks {
        let s = &blk.subset;
        // action terms
        for t in 0..ctx.basis.len() {
            if s.contains(&t) {
                continue;
            }
            let mut tset = s.clone();
            let pos = insert_position(s, t);
            tset.insert(pos, t);
            let Some(tb) = tgt.block(&tset) else { continue };
            let Some(m) = ctx.action.matrix(t, &blk.module_beta) else {
                continue;
            };
            let sg = sign(pos);
            for col in 0..blk.dim {
                for row in 0..tb.dim {
                    let v = m.get(row, col);
                    if !num_traits::Zero::is_zero(v) {
                        d.add_entry(tb.offset + row, blk.offset + col, &(v * &sg));
                    }
                }
            }
        }
        // bracket terms
        for (p, &sx) in s.iter().enumerate() {
            let rest: Vec<usize> = s.iter().copied().filter(|&x| x != sx).collect();
            for (a, b, c) in &ctx.structure[sx] {
                if rest.contains(a) || rest.contains(b) {
                    continue;
                }
                let mut tset = rest.clone();
                tset.push(*a);
                tset.push(*b);
                tset.sort_unstable();
                let Some(tb) = tgt.block(&tset) else { continue };
                let j = tset.iter().position(|x| x == a).unwrap();
                let k = tset.iter().position(|x| x == b).unwrap();
                // φ(x_s, rest) = (−1)^p φ(S)
                let coeff = c * sign(j + k + p);
                debug_assert_eq!(tb.dim, blk.dim);
                for r in 0..blk.dim {
                    d.add_entry(tb.offset + r, blk.offset + r, &coeff);
                }
            }
        }
    }
    d
}

/// `d : C^i_ν → C^{i+1}_ν`.
pub fn differential(
    ctx: &CohomologyContext<'_>,
    nu: &AffineWeight,
    i: usize,
) -> Result<SparseMatrix> {
    let src = chain_space(ctx, nu, i)?;
    let tgt = chain_space(ctx, nu, i + 1)?;
    Ok(differential_between(ctx, &src, &tgt))
}

/// The full complex at one weight.
#[derive(Clone, Debug)]
pub struct WeightComplex {
    pub chain_dims: Vec<usize>,
    pub ranks: Vec<usize>,
    pub cohomology: Vec<usize>,
    pub d_squared_zero: bool,
}

impl WeightComplex {
    pub fn euler_chain(&self) -> i64 {
        alternating(&self.chain_dims)
    }

    pub fn euler_cohomology(&self) -> i64 {
        alternating(&self.cohomology)
    }

    /// The single nonzero degree and its dimension, if there is exactly one.
    pub fn concentration(&self) -> Option<(usize, usize)> {
        let nz: Vec<(usize, usize)> = self
            .cohomology
            .iter()
            .copied()
            .enumerate()
            .filter(|(_, d)| *d > 0)
            .collect();
        (nz.len() == 1).then(|| nz[0])
    }
}

fn alternating(v: &[usize]) -> i64 {
    v.iter()
        .enumerate()
        .map(|(i, &d)| if i % 2 == 0 { d as i64 } else { -(d as i64) })
        .sum()
}

/// Every nonzero degree of the complex at `ν`, with `dim H^i = dim C^i − rank d_i − rank d_{i−1}`.
pub fn weight_complex(ctx: &CohomologyContext<'_>, nu: &AffineWeight) -> Result<WeightComplex> {
    let mut spaces = vec![chain_space(ctx, nu, 0)?];
    loop {
        let next = chain_space(ctx, nu, spaces.len())?;
        if next.subsets_considered == 0 {
            break;
        }
        spaces.push(next);
    }
    // One more (empty) space so the top differential is zero.
    let ds: Vec<SparseMatrix> = (0..spaces.len())
        .map(|i| match spaces.get(i + 1) {
            Some(t) => differential_between(ctx, &spaces[i], t),
            None => SparseMatrix::new(0, spaces[i].dim()),
        })
        .collect();
    let mut d_squared_zero = true;
    for i in 0..ds.len().saturating_sub(1) {
        if !ds[i + 1].mul(&ds[i]).is_zero() {
            d_squared_zero = false;
        }
    }
    let ranks: Vec<usize> = ds.iter().map(SparseMatrix::rank).collect();
    let chain_dims: Vec<usize> = spaces.iter().map(CochainSpace::dim).collect();
    let cohomology = (0..chain_dims.len())
        .map(|i| chain_dims[i] - ranks[i] - if i > 0 { ranks[i - 1] } else { 0 })
        .collect();
    Ok(WeightComplex {
        chain_dims,
        ranks,
        cohomology,
        d_squared_zero,
    })
}

/// `dim H^i_ν` for each `i` in the range (zero beyond the complex).
pub fn cohomology_dims(
    ctx: &CohomologyContext<'_>,
    nu: &AffineWeight,
    i_range: std::ops::RangeInclusive<usize>,
) -> Result<Vec<usize>> {
    let wc = weight_complex(ctx, nu)?;
    Ok(i_range
        .map(|i| wc.cohomology.get(i).copied().unwrap_or(0))
        .collect())
}

/// The Weyl group element attached to an orbit weight.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Classification {
    pub word: WeylWord,
    pub length: usize,
    pub s_index: usize,
}

/// Everything computed at one weight `ν`.
#[derive(Clone, Debug)]
pub struct WeightRecord {
    pub weight: AffineWeight,
    pub beta: RootVec,
    pub classify: Option<Classification>,
    pub complex: WeightComplex,
    /// `ν`-coefficient of `ch L(λ) · Π(1 − e^{−α})^{mult α}`.
    pub euler_character: i64,
    pub verdict_l: bool,
    pub verdict_s: bool,
}

impl WeightRecord {
    /// `Σ_w (−1)^{l(w)} [ν = w·λ]`.
    pub fn expected_euler(&self) -> i64 {
        self.classify.as_ref().map_or(0, |c| c.word.sign())
    }

    pub fn euler_consistent(&self) -> bool {
        let e = self.complex.euler_chain();
        e == self.complex.euler_cohomology()
            && e == self.euler_character
            && e == self.expected_euler()
    }

    pub fn to_json(&self) -> Value {
        let dims: BTreeMap<String, usize> = self
            .complex
            .cohomology
            .iter()
            .enumerate()
            .map(|(i, d)| (i.to_string(), *d))
            .collect();
        let chain: BTreeMap<String, usize> = self
            .complex
            .chain_dims
            .iter()
            .enumerate()
            .map(|(i, d)| (i.to_string(), *d))
            .collect();
        json!({
            "weight": self.weight.to_string(),
            "beta": self.beta.to_string(),
            "classify": self.classify.as_ref().map(|c| json!({
                "word": c.word.letters,
                "l": c.length,
                "s": c.s_index,
            })),
            "dims": dims,
            "chain_dims": chain,
            "d_squared_zero": self.complex.d_squared_zero,
            "euler": {
                "chain": self.complex.euler_chain(),
                "cohomology": self.complex.euler_cohomology(),
                "character": self.euler_character,
                "weyl": self.expected_euler(),
            },
            "verdict_l": self.verdict_l,
            "verdict_s": self.verdict_s,
        })
    }
}

/// Which indexing of the Kostant-type decomposition the data supports.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Matching {
    Both,
    LengthOnly,
    SIndexOnly,
    Neither,
}

impl Matching {
    pub fn name(self) -> &'static str {
        match self {
            Matching::Both => "both",
            Matching::LengthOnly => "l",
            Matching::SIndexOnly => "s",
            Matching::Neither => "none",
        }
    }
}

#[derive(Clone, Debug)]
pub struct CohomologyReport {
    pub lambda: AffineWeight,
    pub max_len: usize,
    pub module_depth: u32,
    /// Sorted by degree, height and coordinates of `λ − ν`.
    pub records: Vec<WeightRecord>,
}

impl CohomologyReport {
    pub fn all_l(&self) -> bool {
        self.records.iter().all(|r| r.verdict_l)
    }

    pub fn all_s(&self) -> bool {
        self.records.iter().all(|r| r.verdict_s)
    }

    pub fn matching(&self) -> Matching {
        match (self.all_l(), self.all_s()) {
            (true, true) => Matching::Both,
            (true, false) => Matching::LengthOnly,
            (false, true) => Matching::SIndexOnly,
            (false, false) => Matching::Neither,
        }
    }

    pub fn structural_ok(&self) -> bool {
        self.records
            .iter()
            .all(|r| r.complex.d_squared_zero && r.euler_consistent())
    }

    pub fn to_json(&self) -> Value {
        json!({
            "lambda": self.lambda.to_string(),
            "max_len": self.max_len,
            "module_depth": self.module_depth,
            "records": self.records.iter().map(WeightRecord::to_json).collect::<Vec<_>>(),
            "all_l": self.all_l(),
            "all_s": self.all_s(),
            "matching_index": self.matching().name(),
            "structural_ok": self.structural_ok(),
        })
    }

    pub fn to_tsv(&self) -> String {
        let mut out = String::from("weight\tword\tl\ts\tdims\tverdict_l\tverdict_s\n");
        for r in &self.records {
            let (word, l, s) = match &r.classify {
                Some(c) => (
                    c.word.to_string(),
                    c.length.to_string(),
                    c.s_index.to_string(),
                ),
                None => ("-".into(), "-".into(), "-".into()),
            };
            let dims: Vec<String> = r.complex.cohomology.iter().map(usize::to_string).collect();
            out.push_str(&format!(
                "{}\t{}\t{}\t{}\t{}\t{}\t{}\n",
                r.weight,
                word,
                l,
                s,
                dims.join(","),
                r.verdict_l,
                r.verdict_s
            ));
        }
        out
    }
}

fn concentrated_at(wc: &WeightComplex, degree: usize) -> bool {
    wc.concentration() == Some((degree, 1))
}

fn require_regular(fc: &FiniteCartan, lambda: &AffineWeight) -> Result<()> {
    let shifted = lambda + &crate::affine_roots::rho_tilde(fc);
    if lambda.rank() != fc.rank() || !lambda.is_integral(fc) || !shifted.is_regular_dominant(fc) {
        return Err(KmError::NotRegularDominant(lambda.to_string()));
    }
    Ok(())
}

/// The first `count` displacements `β ∈ Q̃₊` (by height, then by decreasing
/// degree) such that `λ − β` is a weight of `L(λ)` but not in the dot orbit.
pub fn default_controls(
    fc: &FiniteCartan,
    lambda: &AffineWeight,
    count: usize,
) -> Result<Vec<AffineWeight>> {
    require_regular(fc, lambda)?;
    let n = fc.rank() + 1;
    let mut out = Vec::new();
    let mut height = 1;
    while out.len() < count {
        let mut layer: Vec<RootVec> = compositions(height, n);
        layer.sort_by(|a, b| b.degree().cmp(&a.degree()).then_with(|| a.cmp(b)));
        let depth = layer.iter().map(RootVec::degree).max().unwrap_or(0) as u32;
        let ch = freudenthal_character(fc, lambda, depth)?;
        for beta in layer {
            if out.len() == count {
                break;
            }
            let nu = lambda.sub_root(fc, &beta);
            if ch.mult(&beta) > 0 && classify_weight(fc, &nu, lambda, usize::MAX)?.is_none() {
                out.push(nu);
            }
        }
        height += 1;
    }
    Ok(out)
}

fn compositions(total: i64, parts: usize) -> Vec<RootVec> {
    if parts == 1 {
        return vec![RootVec(vec![total])];
    }
    (0..=total)
        .flat_map(|k| {
            compositions(total - k, parts - 1)
                .into_iter()
                .map(move |mut r| {
                    r.0.insert(0, k);
                    r
                })
        })
        .collect()
}

/// Computes `H^•(ñ₊; L(λ))` at every `w·λ` with `l(w) ≤ max_len` and at the
/// extra weights, and compares the concentration degree with `l(w)` and
/// with `s(w)`. Extra weights that turn out to lie in the orbit are treated
/// as orbit weights.
pub fn kostant_verify(
    fc: &FiniteCartan,
    lambda: &AffineWeight,
    max_len: usize,
    extra_weights: &[AffineWeight],
) -> Result<CohomologyReport> {
    require_regular(fc, lambda)?;
    let mut targets: Vec<(AffineWeight, RootVec, Option<WeylWord>)> = Vec::new();
    for w in enumerate(fc, max_len) {
        let nu = w.dot(fc, lambda);
        let b = displacement(fc, lambda, &nu)?;
        targets.push((nu, b, Some(w)));
    }
    for nu in extra_weights {
        let b = displacement(fc, lambda, nu)?;
        if targets.iter().any(|t| t.1 == b) {
            continue;
        }
        let w = classify_weight(fc, nu, lambda, usize::MAX)?;
        targets.push((nu.clone(), b, w));
    }
    targets.sort_by(|a, b| {
        (a.1.degree(), a.1.height(), &a.1).cmp(&(b.1.degree(), b.1.height(), &b.1))
    });
    let depth = targets
        .iter()
        .map(|t| t.1.degree().max(0))
        .max()
        .unwrap_or(0) as u32;
    let module = irreducible_module(fc, lambda, depth)?;
    let ctx = CohomologyContext::new(fc, &module)?;
    let ch = freudenthal_character(fc, lambda, depth)?;
    let euler_series = times_denominator(fc, &ch, depth);
    let records = targets
        .par_iter()
        .map(|(nu, b, w)| -> Result<WeightRecord> {
            let complex = weight_complex(&ctx, nu)?;
            let classify = w.as_ref().map(|w| Classification {
                word: w.clone(),
                length: w.length(),
                s_index: w.s_index(fc),
            });
            let (verdict_l, verdict_s) = match &classify {
                Some(c) => (
                    concentrated_at(&complex, c.length),
                    concentrated_at(&complex, c.s_index),
                ),
                None => {
                    let zero = complex.cohomology.iter().all(|&d| d == 0);
                    (zero, zero)
                }
            };
            Ok(WeightRecord {
                weight: nu.clone(),
                beta: b.clone(),
                classify,
                euler_character: euler_series.get(b).copied().unwrap_or(0),
                complex,
                verdict_l,
                verdict_s,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(CohomologyReport {
        lambda: lambda.clone(),
        max_len,
        module_depth: depth,
        records,
    })
}
