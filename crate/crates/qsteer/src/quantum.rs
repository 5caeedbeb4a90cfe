//! Quantum values of steering functionals for a fixed state and direction
//! set, and the visibility `V = C / Q`.
//!
//! Alice's side is already maximized analytically: grouping Bob's axes per
//! Alice setting yields vectors `m`, and the best projective axis for a term
//! is `T m` normalized, worth `|T m|`. The grid-search oracle redoes that
//! maximization by brute force on the dense matrix and must never win.

use nalgebra::Vector3;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::functionals::{
    alice_group_vectors, fibonacci_sphere_point, lhs_bound, DirectionSet, Family,
    SignAssignment, SteeringFunctional,
};
use crate::states::{dot_sigma, kron2, pauli, StateFamily, TwoQubitState, UnitVector3};

/// How far Alice's maximization may reach.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Strategy {
    /// Projective axes plus constant-outcome declarations
    /// (`max(|r_B . m|, |T m|)` per term).
    #[default]
    General,
    /// Projective axes only (`|T m|` per term).
    ProjectiveOnly,
}

/// One term of the quantum value: its value and Alice's best projective axis
/// (`T m` normalized; +z by convention when `|T m| = 0`, and also reported
/// when the constant-outcome branch of [`Strategy::General`] wins).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TermValue {
    pub value: f64,
    pub alice_axis: UnitVector3,
}

/// Evaluates one Alice-setting term for group vector `m`.
pub fn term_value(m: &Vector3<f64>, state: &TwoQubitState, strategy: Strategy) -> TermValue {
    let tm = state.t() * m;
    let correlation = tm.norm();
    let alice_axis = UnitVector3::normalized(tm).unwrap_or(UnitVector3::Z);
    let value = match strategy {
        Strategy::ProjectiveOnly => correlation,
        Strategy::General => correlation.max(state.r_b().dot(m).abs()),
    };
    TermValue { value, alice_axis }
}

/// Quantum value `Q = sum_i term_value(m_i)` with the per-term Alice axes.
pub fn quantum_value(
    f: &SteeringFunctional,
    b: &DirectionSet,
    state: &TwoQubitState,
    strategy: Strategy,
) -> Result<(f64, Vec<UnitVector3>)> {
    let groups = alice_group_vectors(f, b)?;
    let mut q = 0.0;
    let mut axes = Vec::with_capacity(groups.len());
    for m in &groups {
        let term = term_value(m, state, strategy);
        q += term.value;
        axes.push(term.alice_axis);
    }
    Ok((q, axes))
}

/// Brute-force quantum value: per Alice setting, maximizes the dense-trace
/// expression `Tr(rho (a.sigma) (x) B_i)` over `grid_resolution` sampled axes
/// `a`, with `B_i` the setting's Bob operator. Lower-bounds
/// `quantum_value(.., ProjectiveOnly)`, converging as the grid refines.
pub fn quantum_value_oracle(
    f: &SteeringFunctional,
    b: &DirectionSet,
    state: &TwoQubitState,
    grid_resolution: usize,
) -> Result<f64> {
    let Some(dense) = state.dense() else {
        return Err(Error::MissingDense);
    };
    if grid_resolution < 100 {
        return Err(Error::TooFew {
            name: "grid_resolution",
            got: grid_resolution,
            min: 100,
        });
    }
    let n = f.n();
    if b.len() != n {
        return Err(Error::LengthMismatch {
            expected: n,
            got: b.len(),
        });
    }
    let dirs = b.vectors();

    // Bob operator of setting i, written out per family rather than shared
    // with `alice_group_vectors` so the two routes stay independent.
    let bob_operator = |i: usize| match f.family() {
        Family::Linear => dot_sigma(&dirs[i]).map(|e| e / n as f64),
        Family::Chained => {
            if i == 0 {
                dot_sigma(&dirs[0]) - dot_sigma(&dirs[n - 1])
            } else {
                dot_sigma(&dirs[i - 1]) + dot_sigma(&dirs[i])
            }
        }
    };

    let mut total = 0.0;
    for i in 0..n {
        let bob = bob_operator(i);
        let mut g = Vector3::zeros();
        for k in 0..3 {
            g[k] = (dense * kron2(&pauli(k + 1), &bob)).trace().re;
        }
        let mut best = f64::NEG_INFINITY;
        for s in 0..grid_resolution {
            let a = fibonacci_sphere_point(s, grid_resolution);
            best = best.max(a.dot(&g));
        }
        total += best;
    }
    Ok(total)
}

/// Full evaluation of an inequality instance: LHS bound, quantum value at
/// family noise 1, and their ratio `V`.
///
/// Because every Bloch field of both families is linear in the noise, `V` is
/// exactly the noise threshold above which the inequality is violated.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    /// LHS bound.
    pub c: f64,
    /// Quantum value at family noise 1.
    pub q: f64,
    /// Visibility threshold `c / q`.
    pub v: f64,
    /// A sign assignment attaining the LHS bound.
    pub argmax_signs: SignAssignment,
    /// Alice's best projective axis per setting.
    pub alice_axes: Vec<UnitVector3>,
}

/// Computes an [`EvalReport`] for the family member at noise 1.
pub fn evaluate(
    f: &SteeringFunctional,
    b: &DirectionSet,
    family: &StateFamily,
    strategy: Strategy,
) -> Result<EvalReport> {
    let (c, argmax_signs) = lhs_bound(f, b)?;
    let state = family.state(1.0)?;
    let (q, alice_axes) = quantum_value(f, b, &state, strategy)?;
    if q == 0.0 {
        return Err(Error::Degenerate);
    }
    Ok(EvalReport {
        c,
        q,
        v: c / q,
        argmax_signs,
        alice_axes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::{make_generalized_werner, make_werner};
    use approx::assert_abs_diff_eq;
    use std::f64::consts::{FRAC_PI_3, FRAC_PI_6};

    fn axes(list: &[[f64; 3]]) -> DirectionSet {
        DirectionSet::new(
            list.iter()
                .map(|&[x, y, z]| UnitVector3::new(x, y, z).unwrap())
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn singlet_term_value_is_the_group_vector_norm() {
        let singlet = make_werner(1.0).unwrap();
        let m = Vector3::new(0.3, -1.2, 0.4);
        for strategy in [Strategy::General, Strategy::ProjectiveOnly] {
            let t = term_value(&m, &singlet, strategy);
            assert_abs_diff_eq!(t.value, m.norm(), epsilon = 1e-15);
        }
    }

    #[test]
    fn product_state_term_along_z_is_one() {
        let s = make_generalized_werner(1.0, 0.0).unwrap();
        let m = Vector3::z();
        for strategy in [Strategy::General, Strategy::ProjectiveOnly] {
            assert_abs_diff_eq!(term_value(&m, &s, strategy).value, 1.0, epsilon = 1e-15);
        }
    }

    #[test]
    fn partially_entangled_term_along_x_is_sin_two_theta() {
        let s = make_generalized_werner(1.0, FRAC_PI_6).unwrap();
        let t = term_value(&Vector3::x(), &s, Strategy::ProjectiveOnly);
        assert_abs_diff_eq!(t.value, FRAC_PI_3.sin(), epsilon = 1e-15);
        assert_abs_diff_eq!(t.alice_axis.x(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn general_strategy_dominates_projective() {
        let s = make_generalized_werner(1.0, 0.2).unwrap();
        for m in [
            Vector3::new(0.1, 0.0, 2.0),
            Vector3::new(1.0, 1.0, -0.5),
            Vector3::zeros(),
        ] {
            let g = term_value(&m, &s, Strategy::General).value;
            let p = term_value(&m, &s, Strategy::ProjectiveOnly).value;
            assert!(g >= p);
        }
    }

    #[test]
    fn zero_group_vector_reports_the_fallback_axis() {
        let s = make_werner(1.0).unwrap();
        let t = term_value(&Vector3::zeros(), &s, Strategy::General);
        assert_eq!(t.alice_axis, UnitVector3::Z);
        assert_eq!(t.value, 0.0);
    }

    #[test]
    fn coordinate_axes_chained_singlet_value() {
        let f = SteeringFunctional::new(Family::Chained, 3).unwrap();
        let b = axes(&[[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]]);
        let singlet = make_werner(1.0).unwrap();
        let (q, axes) = quantum_value(&f, &b, &singlet, Strategy::General).unwrap();
        assert_abs_diff_eq!(q, 3.0 * 2.0_f64.sqrt(), epsilon = 1e-12);
        assert_eq!(axes.len(), 3);
    }

    #[test]
    fn alternating_axes_make_a_degenerate_chained_instance() {
        let f = SteeringFunctional::new(Family::Chained, 3).unwrap();
        let b = axes(&[[0.0, 0.0, 1.0], [0.0, 0.0, -1.0], [0.0, 0.0, 1.0]]);
        let err = evaluate(&f, &b, &StateFamily::werner(), Strategy::General);
        assert!(matches!(err, Err(Error::Degenerate)));
    }

    #[test]
    fn report_ratio_is_consistent() {
        let f = SteeringFunctional::new(Family::Chained, 4).unwrap();
        let b = crate::presets::chained_reference(4).unwrap();
        let r = evaluate(&f, &b, &StateFamily::werner(), Strategy::General).unwrap();
        assert!((r.v * r.q - r.c).abs() <= 1e-12 * r.c.abs());
        assert!(r.q > 0.0);
        assert_eq!(r.alice_axes.len(), 4);
        assert_eq!(r.argmax_signs.signs(), &[1, 1, 1, 1]);
    }

    #[test]
    fn oracle_requires_dense_form_and_enough_resolution() {
        let f = SteeringFunctional::new(Family::Linear, 2).unwrap();
        let b = axes(&[[1.0, 0.0, 0.0], [0.0, 0.0, 1.0]]);
        let bloch_only = TwoQubitState::from_bloch(
            Vector3::zeros(),
            Vector3::zeros(),
            nalgebra::Matrix3::from_diagonal(&Vector3::new(-0.5, -0.5, -0.5)),
        )
        .unwrap();
        assert!(matches!(
            quantum_value_oracle(&f, &b, &bloch_only, 1000),
            Err(Error::MissingDense)
        ));
        let werner = make_werner(0.5).unwrap();
        assert!(quantum_value_oracle(&f, &b, &werner, 99).is_err());
        assert!(quantum_value_oracle(&f, &b, &werner, 100).is_ok());
    }

    #[test]
    fn oracle_never_beats_the_closed_form() {
        let f = SteeringFunctional::new(Family::Chained, 4).unwrap();
        let b = crate::presets::chained_reference(4).unwrap();
        let state = make_werner(1.0).unwrap();
        let oracle = quantum_value_oracle(&f, &b, &state, 2000).unwrap();
        let (q, _) = quantum_value(&f, &b, &state, Strategy::ProjectiveOnly).unwrap();
        assert!(oracle <= q + 1e-12);
        assert!(q - oracle < 0.05);
    }
}
