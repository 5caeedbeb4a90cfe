//! The linear and chained steering functionals and their exact LHS bounds.
//!
//! An LHS model assigns Alice a deterministic sign per setting and hands Bob a
//! fixed qubit state. For Pauli measurements along unit axes the model's best
//! value is the Bloch norm of the sign-weighted sum of Bob's axes, so the
//! exact bound is a maximum over all sign assignments; `lhs_bound` enumerates
//! them with the `s <-> -s` fold. `lhs_bound_oracle` replaces the norm step by
//! direct maximization over sampled hidden states and must never exceed it.

use nalgebra::Vector3;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::states::UnitVector3;

/// Largest setting count for exact sign enumeration (2^23 folded cases).
pub const MAX_ENUM_SETTINGS: usize = 24;

/// Axes closer than this (in |cos| distance from 1) count as repeated.
const REPEATED_AXIS_TOL: f64 = 1e-9;

/// The two coefficient structures a functional can carry.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    /// Each Alice setting weights a single Bob axis by 1/n.
    Linear,
    /// Adjacent settings pair up cyclically with one sign flip closing the
    /// cycle.
    Chained,
}

impl std::fmt::Display for Family {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Family::Linear => write!(f, "linear"),
            Family::Chained => write!(f, "chained"),
        }
    }
}

/// A functional instance: family plus the number of settings.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SteeringFunctional {
    family: Family,
    n: usize,
}

impl SteeringFunctional {
    pub fn new(family: Family, n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::TooFewSettings { n });
        }
        Ok(SteeringFunctional { family, n })
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn n(&self) -> usize {
        self.n
    }
}

/// Serialized shape of a [`DirectionSet`].
#[derive(Serialize, Deserialize)]
struct DirectionSetRepr {
    n: usize,
    directions: Vec<[f64; 3]>,
}

/// An ordered list of Bob measurement axes.
///
/// Serialized as `{"n": ..., "directions": [[x, y, z], ...]}`; rows must be
/// unit vectors within 1e-6 and are renormalized on load. Repeated or
/// antipodal axes are allowed but flagged by [`DirectionSet::has_repeated_axes`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "DirectionSetRepr", into = "DirectionSetRepr")]
pub struct DirectionSet {
    directions: Vec<UnitVector3>,
}

impl DirectionSet {
    pub fn new(directions: Vec<UnitVector3>) -> Result<Self> {
        if directions.len() < 2 {
            return Err(Error::TooFewSettings {
                n: directions.len(),
            });
        }
        Ok(DirectionSet { directions })
    }

    pub fn len(&self) -> usize {
        self.directions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.directions.is_empty()
    }

    pub fn directions(&self) -> &[UnitVector3] {
        &self.directions
    }

    /// Axes as plain vectors, the shape most numerics consume.
    pub fn vectors(&self) -> Vec<Vector3<f64>> {
        self.directions.iter().map(|d| d.as_vector()).collect()
    }

    /// True when two axes coincide or are antipodal within tolerance.
    pub fn has_repeated_axes(&self) -> bool {
        for i in 0..self.directions.len() {
            for j in (i + 1)..self.directions.len() {
                if self.directions[i].dot(&self.directions[j]).abs() > 1.0 - REPEATED_AXIS_TOL {
                    return true;
                }
            }
        }
        false
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(self).expect("direction set serializes infallibly")
    }
}

impl TryFrom<DirectionSetRepr> for DirectionSet {
    type Error = Error;

    fn try_from(repr: DirectionSetRepr) -> Result<Self> {
        if repr.n != repr.directions.len() {
            return Err(Error::LengthMismatch {
                expected: repr.n,
                got: repr.directions.len(),
            });
        }
        let directions = repr
            .directions
            .into_iter()
            .map(|[x, y, z]| UnitVector3::new(x, y, z))
            .collect::<Result<Vec<_>>>()?;
        DirectionSet::new(directions)
    }
}

impl From<DirectionSet> for DirectionSetRepr {
    fn from(set: DirectionSet) -> DirectionSetRepr {
        DirectionSetRepr {
            n: set.directions.len(),
            directions: set.directions.into_iter().map(Into::into).collect(),
        }
    }
}

/// Alice's deterministic declarations, one sign per setting.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Vec<i8>", into = "Vec<i8>")]
pub struct SignAssignment {
    s: Vec<i8>,
}

impl SignAssignment {
    pub fn new(s: Vec<i8>) -> Result<Self> {
        for (index, &v) in s.iter().enumerate() {
            if v != 1 && v != -1 {
                return Err(Error::BadSign { got: v, index });
            }
        }
        Ok(SignAssignment { s })
    }

    pub fn len(&self) -> usize {
        self.s.len()
    }

    pub fn is_empty(&self) -> bool {
        self.s.is_empty()
    }

    pub fn signs(&self) -> &[i8] {
        &self.s
    }

    pub fn negated(&self) -> SignAssignment {
        SignAssignment {
            s: self.s.iter().map(|v| -v).collect(),
        }
    }

    /// Assignment number `k` in the folded enumeration: the first sign is +1
    /// and bit `n-1-i` of `k` flips sign `i`, so `k = 0` is all-ones and
    /// ascending `k` walks assignments in lexicographic order with +1 ordered
    /// before -1.
    pub(crate) fn from_index(n: usize, k: u64) -> SignAssignment {
        let mut s = vec![1i8; n];
        for (i, si) in s.iter_mut().enumerate().skip(1) {
            if (k >> (n - 1 - i)) & 1 == 1 {
                *si = -1;
            }
        }
        SignAssignment { s }
    }
}

impl TryFrom<Vec<i8>> for SignAssignment {
    type Error = Error;

    fn try_from(s: Vec<i8>) -> Result<Self> {
        SignAssignment::new(s)
    }
}

impl From<SignAssignment> for Vec<i8> {
    fn from(a: SignAssignment) -> Vec<i8> {
        a.s
    }
}

fn check_len(expected: usize, got: usize) -> Result<()> {
    if expected != got {
        return Err(Error::LengthMismatch { expected, got });
    }
    Ok(())
}

/// Coefficient that the sign assignment induces on each Bob axis.
///
/// Linear: `c_i = s_i / n`. Chained: `c_i = s_i + s_{i+1}` for the first
/// `n - 1` axes and `c_n = s_n - s_1` closing the cycle.
pub fn bob_coefficients(f: &SteeringFunctional, s: &SignAssignment) -> Result<Vec<f64>> {
    check_len(f.n, s.len())?;
    let sv = s.signs();
    let coeffs = match f.family {
        Family::Linear => sv.iter().map(|&si| f64::from(si) / f.n as f64).collect(),
        Family::Chained => {
            let n = f.n;
            let mut c = Vec::with_capacity(n);
            for i in 0..n - 1 {
                c.push(f64::from(sv[i] + sv[i + 1]));
            }
            c.push(f64::from(sv[n - 1] - sv[0]));
            c
        }
    };
    Ok(coeffs)
}

/// Per-Alice-setting grouped Bob vectors.
///
/// Linear: `m_i = b_i / n`. Chained: `m_1 = b_1 - b_n` and
/// `m_i = b_{i-1} + b_i` for the rest, so that
/// `sum_i c_i(s) b_i = sum_k s_k m_k` for every sign assignment.
pub fn alice_group_vectors(f: &SteeringFunctional, b: &DirectionSet) -> Result<Vec<Vector3<f64>>> {
    check_len(f.n, b.len())?;
    let v = b.vectors();
    let groups = match f.family {
        Family::Linear => v.iter().map(|bi| bi / f.n as f64).collect(),
        Family::Chained => {
            let n = f.n;
            let mut m = Vec::with_capacity(n);
            m.push(v[0] - v[n - 1]);
            for i in 1..n {
                m.push(v[i - 1] + v[i]);
            }
            m
        }
    };
    Ok(groups)
}

/// Signed axis sum for folded assignment `k`, inlined for the enumeration hot
/// path (identical values to the `bob_coefficients` route).
fn signed_sum(family: Family, dirs: &[Vector3<f64>], k: u64) -> Vector3<f64> {
    let n = dirs.len();
    let sign = |i: usize| -> f64 {
        if i == 0 {
            1.0
        } else if (k >> (n - 1 - i)) & 1 == 1 {
            -1.0
        } else {
            1.0
        }
    };
    let mut w = Vector3::zeros();
    match family {
        Family::Linear => {
            for (i, bi) in dirs.iter().enumerate() {
                w += bi * (sign(i) / n as f64);
            }
        }
        Family::Chained => {
            for i in 0..n - 1 {
                w += dirs[i] * (sign(i) + sign(i + 1));
            }
            w += dirs[n - 1] * (sign(n - 1) - sign(0));
        }
    }
    w
}

/// Exact LHS bound: `C = max_s |sum_i c_i(s) b_i|` together with one
/// maximizing assignment.
///
/// Enumerates the 2^(n-1) folded assignments (negating every sign leaves the
/// value unchanged). Ties go to the lexicographically smallest assignment with
/// leading +1, ordering +1 before -1, so the all-ones assignment wins any tie
/// it participates in. Refuses `n > 24`.
pub fn lhs_bound(f: &SteeringFunctional, b: &DirectionSet) -> Result<(f64, SignAssignment)> {
    check_len(f.n, b.len())?;
    if f.n > MAX_ENUM_SETTINGS {
        return Err(Error::EnumerationTooLarge {
            n: f.n,
            max: MAX_ENUM_SETTINGS,
        });
    }
    let dirs = b.vectors();
    let total: u64 = 1 << (f.n - 1);

    // (value, k) pairs reduce identically in any association order: strictly
    // larger value wins, exact ties prefer the smaller index.
    let pick = |a: (f64, u64), c: (f64, u64)| -> (f64, u64) {
        if c.0 > a.0 || (c.0 == a.0 && c.1 < a.1) {
            c
        } else {
            a
        }
    };

    let family = f.family;
    let eval = |k: u64| (signed_sum(family, &dirs, k).norm(), k);

    let (best_val, best_k) = if f.n >= 17 {
        (0..total)
            .into_par_iter()
            .map(eval)
            .reduce(|| (f64::NEG_INFINITY, u64::MAX), pick)
    } else {
        (0..total)
            .map(eval)
            .fold((f64::NEG_INFINITY, u64::MAX), pick)
    };

    Ok((best_val, SignAssignment::from_index(f.n, best_k)))
}

/// Quasi-uniform point `k` of an `n_samples`-point Fibonacci sphere covering.
pub(crate) fn fibonacci_sphere_point(k: usize, n_samples: usize) -> Vector3<f64> {
    let golden_angle = std::f64::consts::PI * (3.0 - 5.0_f64.sqrt());
    let z = 1.0 - 2.0 * (k as f64 + 0.5) / n_samples as f64;
    let r = (1.0 - z * z).max(0.0).sqrt();
    let phi = golden_angle * k as f64;
    Vector3::new(r * phi.cos(), r * phi.sin(), z)
}

/// Sampling lower bound on [`lhs_bound`]: maximizes
/// `sum_i c_i(s) (b_i . r)` over all folded assignments and `samples`
/// Fibonacci-sphere hidden states `r`.
///
/// Converges to the exact bound from below as `samples` grows; accuracy
/// claims in the test suite assume at least 1000 samples.
pub fn lhs_bound_oracle(f: &SteeringFunctional, b: &DirectionSet, samples: usize) -> Result<f64> {
    check_len(f.n, b.len())?;
    if f.n > MAX_ENUM_SETTINGS {
        return Err(Error::EnumerationTooLarge {
            n: f.n,
            max: MAX_ENUM_SETTINGS,
        });
    }
    if samples == 0 {
        return Err(Error::TooFew {
            name: "samples",
            got: 0,
            min: 1,
        });
    }
    let dirs = b.vectors();
    let total: u64 = 1 << (f.n - 1);

    let best_for_assignment = |k: u64| -> f64 {
        let s = SignAssignment::from_index(f.n, k);
        let coeffs = bob_coefficients(f, &s).expect("assignment length matches by construction");
        let mut best = f64::NEG_INFINITY;
        for sample in 0..samples {
            let r = fibonacci_sphere_point(sample, samples);
            let mut value = 0.0;
            for (ci, bi) in coeffs.iter().zip(&dirs) {
                value += ci * bi.dot(&r);
            }
            best = best.max(value);
        }
        best
    };

    let work = total.saturating_mul(samples as u64);
    let best = if work >= 1 << 16 {
        (0..total)
            .into_par_iter()
            .map(best_for_assignment)
            .reduce(|| f64::NEG_INFINITY, f64::max)
    } else {
        (0..total).map(best_for_assignment).fold(f64::NEG_INFINITY, f64::max)
    };
    Ok(best)
}
