//! Integer vectors in simple-root coordinates.

use std::fmt;
use std::ops::{Add, Neg, Sub};

use serde::{Deserialize, Serialize};

/// A root-lattice vector `Σ k_i α_i`, stored as its coefficients.
///
/// For affine algebras index 0 is the coefficient of `α_0`, which is also the
/// `δ`-degree of the vector.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct RootVec(pub Vec<i64>);

impl RootVec {
    pub fn zero(n: usize) -> Self {
        RootVec(vec![0; n])
    }

    pub fn unit(n: usize, i: usize) -> Self {
        let mut v = vec![0; n];
        v[i] = 1;
        RootVec(v)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn height(&self) -> i64 {
        self.0.iter().sum()
    }

    /// Coefficient of `α_0`; the `δ`-degree for affine root coordinates.
    pub fn degree(&self) -> i64 {
        self.0[0]
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&k| k == 0)
    }

    pub fn is_nonneg(&self) -> bool {
        self.0.iter().all(|&k| k >= 0)
    }

    /// Componentwise `self <= other`.
    pub fn le(&self, other: &RootVec) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    pub fn scaled(&self, k: i64) -> RootVec {
        RootVec(self.0.iter().map(|x| x * k).collect())
    }

    pub fn plus_unit(&self, i: usize) -> RootVec {
        let mut v = self.clone();
        v.0[i] += 1;
        v
    }

    pub fn minus_unit(&self, i: usize) -> RootVec {
        let mut v = self.clone();
        v.0[i] -= 1;
        v
    }
}

impl fmt::Debug for RootVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

impl fmt::Display for RootVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(i64::to_string).collect();
        write!(f, "[{}]", parts.join(","))
    }
}

impl Add for &RootVec {
    type Output = RootVec;
    fn add(self, rhs: &RootVec) -> RootVec {
        RootVec(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &RootVec {
    type Output = RootVec;
    fn sub(self, rhs: &RootVec) -> RootVec {
        RootVec(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl Neg for &RootVec {
    type Output = RootVec;
    fn neg(self) -> RootVec {
        RootVec(self.0.iter().map(|a| -a).collect())
    }
}
