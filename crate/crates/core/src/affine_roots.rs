//! Affine roots, the generalized Cartan matrix and weights of `h̃*`.
//!
//! A weight is stored as (Dynkin labels of its finite part, level, degree),
//! so `λ = λ̄ + k Λ̃_0 + n δ` in the sense that `λ(c) = k` and `λ(d) = n`.
//! Root-lattice vectors are written in simple affine root coordinates
//! `β = Σ_{i=0}^{l} k_i α_i`, with `α_0 = δ − θ`.

use std::fmt;
use std::ops::{Add, Neg, Sub};
use std::str::FromStr;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{KmError, Result};
use crate::finite_cartan::FiniteCartan;
use crate::lattice::RootVec;
use crate::rational::{fmt_q, parse_q, q, to_i64, Q};

/// An element of `h̃*`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AffineWeight {
    /// Labels `λ(α̌_1), …, λ(α̌_l)` of the finite part.
    pub finite: Vec<Q>,
    /// Value on `c`.
    pub level: Q,
    /// Coefficient of `δ` (value on `d`).
    pub degree: Q,
}

impl AffineWeight {
    pub fn new(finite: Vec<Q>, level: Q, degree: Q) -> Self {
        AffineWeight {
            finite,
            level,
            degree,
        }
    }

    pub fn from_ints(finite: &[i64], level: i64, degree: i64) -> Self {
        AffineWeight::new(finite.iter().map(|&m| q(m)).collect(), q(level), q(degree))
    }

    pub fn zero(rank: usize) -> Self {
        AffineWeight::new(vec![Q::zero(); rank], Q::zero(), Q::zero())
    }

    pub fn delta(rank: usize) -> Self {
        AffineWeight::new(vec![Q::zero(); rank], Q::zero(), Q::one())
    }

    /// The weight with Dynkin labels `[m_0, m_1, …, m_l]` and degree 0.
    pub fn from_dynkin(fc: &FiniteCartan, labels: &[Q]) -> Result<Self> {
        if labels.len() != fc.rank() + 1 {
            return Err(KmError::Parse(format!(
                "expected {} Dynkin labels, got {}",
                fc.rank() + 1,
                labels.len()
            )));
        }
        let finite = labels[1..].to_vec();
        let level = fc
            .comarks
            .iter()
            .zip(&finite)
            .fold(labels[0].clone(), |acc, (a, m)| acc + q(*a) * m);
        Ok(AffineWeight::new(finite, level, Q::zero()))
    }

    pub fn from_dynkin_ints(fc: &FiniteCartan, labels: &[i64]) -> Result<Self> {
        let labels: Vec<Q> = labels.iter().map(|&m| q(m)).collect();
        Self::from_dynkin(fc, &labels)
    }

    pub fn rank(&self) -> usize {
        self.finite.len()
    }

    /// `λ(α̌_i)` for `i = 0..=l`, where `λ(α̌_0) = level − λ̄(θ̌)`.
    pub fn pair_coroot(&self, fc: &FiniteCartan, i: usize) -> Q {
        if i == 0 {
            fc.comarks
                .iter()
                .zip(&self.finite)
                .fold(self.level.clone(), |acc, (a, m)| acc - q(*a) * m)
        } else {
            self.finite[i - 1].clone()
        }
    }

    /// All labels `[λ(α̌_0), …, λ(α̌_l)]`.
    pub fn dynkin_labels(&self, fc: &FiniteCartan) -> Vec<Q> {
        (0..=fc.rank()).map(|i| self.pair_coroot(fc, i)).collect()
    }

    pub fn is_integral(&self, fc: &FiniteCartan) -> bool {
        self.dynkin_labels(fc).iter().all(|x| x.is_integer())
    }

    /// `λ(α̌_i) ≥ 0` for every `i`.
    pub fn is_dominant(&self, fc: &FiniteCartan) -> bool {
        self.dynkin_labels(fc).iter().all(|x| !x.is_negative())
    }

    pub fn is_dominant_integral(&self, fc: &FiniteCartan) -> bool {
        self.is_integral(fc) && self.is_dominant(fc)
    }

    /// `λ(α̌_i) > 0` for every `i`.
    pub fn is_regular_dominant(&self, fc: &FiniteCartan) -> bool {
        self.dynkin_labels(fc).iter().all(|x| x.is_positive())
    }

    pub fn scaled(&self, k: &Q) -> AffineWeight {
        AffineWeight::new(
            self.finite.iter().map(|x| x * k).collect(),
            &self.level * k,
            &self.degree * k,
        )
    }

    /// Adds `k·β` for a root-lattice vector `β`.
    pub fn add_root(&self, fc: &FiniteCartan, beta: &RootVec, k: i64) -> AffineWeight {
        self + &root_weight(fc, beta).scaled(&q(k))
    }

    /// `λ − β`.
    pub fn sub_root(&self, fc: &FiniteCartan, beta: &RootVec) -> AffineWeight {
        self.add_root(fc, beta, -1)
    }
}

impl fmt::Display for AffineWeight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let fin: Vec<String> = self.finite.iter().map(fmt_q).collect();
        write!(
            f,
            "({}; {}; {})",
            fin.join(","),
            fmt_q(&self.level),
            fmt_q(&self.degree)
        )
    }
}

impl fmt::Debug for AffineWeight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl FromStr for AffineWeight {
    type Err = KmError;

    /// Parses `"(m1,…,ml; k; n)"`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || {
            KmError::Parse(format!(
                "bad weight `{s}`; expected (m1,...,ml; level; degree)"
            ))
        };
        let inner = s
            .trim()
            .strip_prefix('(')
            .and_then(|t| t.strip_suffix(')'))
            .ok_or_else(bad)?;
        let parts: Vec<&str> = inner.split(';').map(str::trim).collect();
        if parts.len() != 3 {
            return Err(bad());
        }
        let finite = parts[0]
            .split(',')
            .map(|t| parse_q(t.trim()).ok_or_else(bad))
            .collect::<Result<Vec<Q>>>()?;
        let level = parse_q(parts[1]).ok_or_else(bad)?;
        let degree = parse_q(parts[2]).ok_or_else(bad)?;
        Ok(AffineWeight::new(finite, level, degree))
    }
}

impl Serialize for AffineWeight {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for AffineWeight {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

impl Add for &AffineWeight {
    type Output = AffineWeight;
    fn add(self, rhs: &AffineWeight) -> AffineWeight {
        AffineWeight::new(
            self.finite
                .iter()
                .zip(&rhs.finite)
                .map(|(a, b)| a + b)
                .collect(),
            &self.level + &rhs.level,
            &self.degree + &rhs.degree,
        )
    }
}

impl Sub for &AffineWeight {
    type Output = AffineWeight;
    fn sub(self, rhs: &AffineWeight) -> AffineWeight {
        AffineWeight::new(
            self.finite
                .iter()
                .zip(&rhs.finite)
                .map(|(a, b)| a - b)
                .collect(),
            &self.level - &rhs.level,
            &self.degree - &rhs.degree,
        )
    }
}

impl Neg for &AffineWeight {
    type Output = AffineWeight;
    fn neg(self) -> AffineWeight {
        self.scaled(&q(-1))
    }
}

/// A positive or negative affine root `α + nδ`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct AffineRoot {
    /// Finite part in simple-root coordinates (zero for imaginary roots).
    pub finite_part: RootVec,
    pub delta_mult: i64,
    pub multiplicity: usize,
}

impl AffineRoot {
    pub fn is_real(&self) -> bool {
        !self.finite_part.is_zero()
    }

    /// Coordinates in the simple affine roots `α_0, …, α_l`.
    pub fn coords(&self, fc: &FiniteCartan) -> RootVec {
        let n = self.delta_mult;
        let mut k = vec![n];
        k.extend((0..fc.rank()).map(|i| self.finite_part.0[i] + n * fc.marks[i]));
        RootVec(k)
    }

    pub fn weight(&self, fc: &FiniteCartan) -> AffineWeight {
        root_weight(fc, &self.coords(fc))
    }
}

/// `Ã = (α_j(α̌_i))_{i,j=0..l}`.
pub fn affine_cartan_matrix(fc: &FiniteCartan) -> Vec<Vec<i64>> {
    let l = fc.rank();
    let theta_labels = fc.labels(&fc.theta);
    let theta_coroot = &fc.comarks;
    let mut m = vec![vec![0; l + 1]; l + 1];
    m[0][0] = 2;
    for j in 1..=l {
        // α_j(α̌_0) = −α_j(θ̌),  α_0(α̌_i) = −θ(α̌_i)
        m[0][j] = -(0..l)
            .map(|i| theta_coroot[i] * fc.cartan[i][j - 1])
            .sum::<i64>();
        m[j][0] = -theta_labels[j - 1];
    }
    for i in 1..=l {
        for j in 1..=l {
            m[i][j] = fc.cartan[i - 1][j - 1];
        }
    }
    m
}

/// Marks `(a_0 = 1, a_1, …, a_l)`: the null vector of `Ã`.
pub fn affine_marks(fc: &FiniteCartan) -> Vec<i64> {
    std::iter::once(1).chain(fc.marks.iter().copied()).collect()
}

/// Comarks `(ǎ_0 = 1, ǎ_1, …, ǎ_l)`.
pub fn affine_comarks(fc: &FiniteCartan) -> Vec<i64> {
    std::iter::once(1)
        .chain(fc.comarks.iter().copied())
        .collect()
}

/// The weight `Σ k_i α_i` of a root-lattice vector.
pub fn root_weight(fc: &FiniteCartan, beta: &RootVec) -> AffineWeight {
    let l = fc.rank();
    let k0 = beta.0[0];
    let fin = RootVec((0..l).map(|i| beta.0[i + 1] - k0 * fc.theta.0[i]).collect());
    AffineWeight::new(
        fc.labels(&fin).into_iter().map(q).collect(),
        Q::zero(),
        q(k0),
    )
}

/// The simple root `α_i` as a weight.
pub fn simple_root(fc: &FiniteCartan, i: usize) -> AffineWeight {
    root_weight(fc, &RootVec::unit(fc.rank() + 1, i))
}

/// `β ∈ Q̃` with `μ = λ − β`, or `NotIntegral`.
pub fn displacement(
    fc: &FiniteCartan,
    lambda: &AffineWeight,
    mu: &AffineWeight,
) -> Result<RootVec> {
    let diff = lambda - mu;
    if !diff.level.is_zero() {
        return Err(KmError::NotIntegral);
    }
    let k0 = to_i64(&diff.degree).ok_or(KmError::NotIntegral)?;
    let l = fc.rank();
    let mut coords = vec![k0];
    for i in 0..l {
        let c: Q = (0..l)
            .map(|j| fc.inv_cartan.get(i, j) * &diff.finite[j])
            .sum::<Q>()
            + q(k0 * fc.theta.0[i]);
        coords.push(to_i64(&c).ok_or(KmError::NotIntegral)?);
    }
    Ok(RootVec(coords))
}

/// `(λ|μ) = (λ̄|μ̄) + level(λ)·degree(μ) + level(μ)·degree(λ)`.
pub fn weight_form(fc: &FiniteCartan, lambda: &AffineWeight, mu: &AffineWeight) -> Q {
    let l = fc.rank();
    let mut acc = &lambda.level * &mu.degree + &mu.level * &lambda.degree;
    for i in 0..l {
        if lambda.finite[i].is_zero() {
            continue;
        }
        for j in 0..l {
            if !mu.finite[j].is_zero() {
                acc += fc.fund_form.get(i, j) * &lambda.finite[i] * &mu.finite[j];
            }
        }
    }
    acc
}

/// `(β|γ)` for root-lattice vectors in simple affine root coordinates.
pub fn root_form(fc: &FiniteCartan, beta: &RootVec, gamma: &RootVec) -> Q {
    weight_form(fc, &root_weight(fc, beta), &root_weight(fc, gamma))
}

/// `Λ̃_i = Λ_i + ǎ_i Λ̃_0`.
pub fn fundamental_weight(fc: &FiniteCartan, i: usize) -> Result<AffineWeight> {
    let l = fc.rank();
    if i > l {
        return Err(KmError::IndexOutOfRange { index: i, max: l });
    }
    let mut labels = vec![0; l + 1];
    labels[i] = 1;
    AffineWeight::from_dynkin_ints(fc, &labels)
}

/// `ρ̃ = ρ + g Λ̃_0`, with degree 0.
pub fn rho_tilde(fc: &FiniteCartan) -> AffineWeight {
    AffineWeight::from_dynkin_ints(fc, &vec![1; fc.rank() + 1]).expect("rank + 1 labels")
}

/// Positive affine roots with `δ`-coefficient at most `max_delta_degree`,
/// ordered by degree and then by finite height.
pub fn positive_roots_up_to(fc: &FiniteCartan, max_delta_degree: u32) -> Vec<AffineRoot> {
    let l = fc.rank();
    let mut out: Vec<AffineRoot> = fc
        .positive_roots
        .iter()
        .map(|r| AffineRoot {
            finite_part: r.clone(),
            delta_mult: 0,
            multiplicity: 1,
        })
        .collect();
    for n in 1..=i64::from(max_delta_degree) {
        let mut layer: Vec<AffineRoot> = fc
            .positive_roots
            .iter()
            .flat_map(|r| [-r, r.clone()])
            .map(|r| AffineRoot {
                finite_part: r,
                delta_mult: n,
                multiplicity: 1,
            })
            .collect();
        layer.push(AffineRoot {
            finite_part: RootVec::zero(l),
            delta_mult: n,
            multiplicity: l,
        });
        layer.sort_by_key(|r| {
            (
                r.finite_part.height(),
                std::cmp::Reverse(r.finite_part.clone()),
            )
        });
        out.extend(layer);
    }
    out
}

/// Positive roots as `(coordinates, multiplicity)` pairs, the form used by the
/// character and partition-function code.
pub fn positive_root_coords(fc: &FiniteCartan, max_delta_degree: u32) -> Vec<(RootVec, usize)> {
    positive_roots_up_to(fc, max_delta_degree)
        .into_iter()
        .map(|r| (r.coords(fc), r.multiplicity))
        .collect()
}

/// Root multiplicity of a vector in `Q̃` (0 if it is not a root).
pub fn root_multiplicity(fc: &FiniteCartan, beta: &RootVec) -> usize {
    let n = beta.0[0];
    let fin = RootVec(
        (0..fc.rank())
            .map(|i| beta.0[i + 1] - n * fc.marks[i])
            .collect(),
    );
    if fin.is_zero() {
        if n == 0 {
            0
        } else {
            fc.rank()
        }
    } else if fc.is_root(&fin) {
        1
    } else {
        0
    }
}
