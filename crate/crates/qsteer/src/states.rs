//! Two-qubit states in Bloch/correlation form and the noisy-singlet state families.
//!
//! The canonical representation is the Bloch form: local vectors `r_a`, `r_b`
//! and the 3x3 correlation matrix `T` with `T[i][j] = <sigma_i (x) sigma_j>`.
//! Family constructors additionally carry the dense 4x4 density matrix, which
//! only the verification oracles consume. Pauli basis order is (x, y, z);
//! `|0>` and `|1>` are the +1 and -1 eigenstates of `sigma_z`.

use nalgebra::{Matrix2, Matrix3, Matrix4, Vector3, Vector4};
use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub(crate) type C64 = Complex<f64>;
pub(crate) type CMat2 = Matrix2<C64>;
pub(crate) type CMat4 = Matrix4<C64>;

/// Accepted deviation of an input vector's norm from 1; anything inside the
/// window is renormalized, anything outside is rejected.
pub const UNIT_NORM_TOL: f64 = 1e-6;

/// Hermiticity / trace / Bloch-consistency tolerance for dense forms.
const DENSE_TOL: f64 = 1e-12;

/// Eigenvalue floor absorbing floating-point noise in the PSD check.
const PSD_FLOOR: f64 = -1e-10;

/// Slack on the physicality bounds |r| <= 1 and singular values of T <= 1.
const BLOCH_SLACK: f64 = 1e-10;

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// Pauli matrix by index: 0 -> identity, 1..=3 -> x, y, z.
pub(crate) fn pauli(k: usize) -> CMat2 {
    match k {
        0 => CMat2::identity(),
        1 => CMat2::new(c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)),
        2 => CMat2::new(c(0.0, 0.0), c(0.0, -1.0), c(0.0, 1.0), c(0.0, 0.0)),
        3 => CMat2::new(c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(-1.0, 0.0)),
        _ => unreachable!("pauli index must be 0..=3"),
    }
}

/// `v . sigma` as a dense 2x2 matrix.
pub(crate) fn dot_sigma(v: &Vector3<f64>) -> CMat2 {
    let mut m = CMat2::zeros();
    for k in 0..3 {
        m += pauli(k + 1).map(|e| e * c(v[k], 0.0));
    }
    m
}

/// Kronecker product of two 2x2 blocks, Alice factor first.
pub(crate) fn kron2(a: &CMat2, b: &CMat2) -> CMat4 {
    a.kronecker(b)
}

fn real_trace(m: &CMat4) -> f64 {
    m.trace().re
}

/// A unit vector on the Bloch sphere.
///
/// After construction the components satisfy `x^2 + y^2 + z^2 = 1` to within
/// 1e-12. Serialized as a plain `[x, y, z]` triple.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "[f64; 3]", into = "[f64; 3]")]
pub struct UnitVector3 {
    x: f64,
    y: f64,
    z: f64,
}

impl UnitVector3 {
    /// The +z axis, also the conventional fallback Alice axis.
    pub const Z: UnitVector3 = UnitVector3 {
        x: 0.0,
        y: 0.0,
        z: 1.0,
    };

    /// Builds from components whose norm is within [`UNIT_NORM_TOL`] of 1,
    /// renormalizing the small residue away.
    pub fn new(x: f64, y: f64, z: f64) -> Result<Self> {
        let norm = (x * x + y * y + z * z).sqrt();
        if !norm.is_finite() || (norm - 1.0).abs() > UNIT_NORM_TOL {
            return Err(Error::NotUnit {
                norm,
                tol: UNIT_NORM_TOL,
            });
        }
        Ok(UnitVector3 {
            x: x / norm,
            y: y / norm,
            z: z / norm,
        })
    }

    /// Normalizes an arbitrary non-zero vector onto the sphere.
    pub fn normalized(v: Vector3<f64>) -> Result<Self> {
        let norm = v.norm();
        if !norm.is_finite() || norm < 1e-12 {
            return Err(Error::ZeroVector { norm });
        }
        Ok(UnitVector3 {
            x: v.x / norm,
            y: v.y / norm,
            z: v.z / norm,
        })
    }

    /// Spherical parametrization `(sin t cos p, sin t sin p, cos t)`.
    pub fn from_angles(theta: f64, phi: f64) -> Self {
        let (st, ct) = theta.sin_cos();
        let (sp, cp) = phi.sin_cos();
        UnitVector3 {
            x: st * cp,
            y: st * sp,
            z: ct,
        }
    }

    pub fn x(&self) -> f64 {
        self.x
    }

    pub fn y(&self) -> f64 {
        self.y
    }

    pub fn z(&self) -> f64 {
        self.z
    }

    pub fn as_vector(&self) -> Vector3<f64> {
        Vector3::new(self.x, self.y, self.z)
    }

    pub fn dot(&self, other: &UnitVector3) -> f64 {
        self.x * other.x + self.y * other.y + self.z * other.z
    }

    /// Polar and azimuthal angles `(theta, phi)` with `phi` in `(-pi, pi]`.
    pub fn to_angles(&self) -> (f64, f64) {
        (self.z.clamp(-1.0, 1.0).acos(), self.y.atan2(self.x))
    }
}

impl TryFrom<[f64; 3]> for UnitVector3 {
    type Error = Error;

    fn try_from(v: [f64; 3]) -> Result<Self> {
        UnitVector3::new(v[0], v[1], v[2])
    }
}

impl From<UnitVector3> for [f64; 3] {
    fn from(v: UnitVector3) -> [f64; 3] {
        [v.x, v.y, v.z]
    }
}

/// A two-qubit state: Bloch vectors, correlation matrix, and (for family
/// constructors and density-matrix input) the dense 4x4 form.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoQubitState {
    r_a: Vector3<f64>,
    r_b: Vector3<f64>,
    t: Matrix3<f64>,
    dense: Option<CMat4>,
}

impl TwoQubitState {
    /// Builds a Bloch-only state (no dense form; oracles will refuse it).
    pub fn from_bloch(r_a: Vector3<f64>, r_b: Vector3<f64>, t: Matrix3<f64>) -> Result<Self> {
        let state = TwoQubitState {
            r_a,
            r_b,
            t,
            dense: None,
        };
        state.check_bloch_bounds()?;
        Ok(state)
    }

    pub fn r_a(&self) -> &Vector3<f64> {
        &self.r_a
    }

    pub fn r_b(&self) -> &Vector3<f64> {
        &self.r_b
    }

    pub fn t(&self) -> &Matrix3<f64> {
        &self.t
    }

    pub fn dense(&self) -> Option<&CMat4> {
        self.dense.as_ref()
    }

    fn check_bloch_bounds(&self) -> Result<()> {
        for (name, r) in [("r_a", &self.r_a), ("r_b", &self.r_b)] {
            let n = r.norm();
            if n > 1.0 + BLOCH_SLACK {
                return Err(Error::OutOfDomain {
                    name,
                    value: n,
                    lo: 0.0,
                    hi: 1.0,
                });
            }
        }
        let svals = self.t.svd(false, false).singular_values;
        let max_sv = svals.iter().fold(0.0_f64, |a, &s| a.max(s));
        if max_sv > 1.0 + BLOCH_SLACK {
            return Err(Error::OutOfDomain {
                name: "singular value of T",
                value: max_sv,
                lo: 0.0,
                hi: 1.0,
            });
        }
        Ok(())
    }

    /// Re-checks every representation invariant; used by constructors that
    /// accept external data and by the test suite.
    pub fn validate(&self) -> Result<()> {
        self.check_bloch_bounds()?;
        let Some(dense) = &self.dense else {
            return Ok(());
        };
        check_density(dense)?;
        let extracted = extract_bloch(dense);
        let mut dev: f64 = 0.0;
        for k in 0..3 {
            dev = dev.max((extracted.0[k] - self.r_a[k]).abs());
            dev = dev.max((extracted.1[k] - self.r_b[k]).abs());
        }
        for i in 0..3 {
            for j in 0..3 {
                dev = dev.max((extracted.2[(i, j)] - self.t[(i, j)]).abs());
            }
        }
        if dev > DENSE_TOL {
            return Err(Error::Inconsistent { dev });
        }
        Ok(())
    }
}

fn check_density(dense: &CMat4) -> Result<()> {
    let herm_dev = (dense - dense.adjoint())
        .iter()
        .fold(0.0_f64, |a, e| a.max(e.norm()));
    if herm_dev > DENSE_TOL {
        return Err(Error::NotHermitian { dev: herm_dev });
    }
    let trace = real_trace(dense);
    if (trace - 1.0).abs() > DENSE_TOL {
        return Err(Error::BadTrace { trace });
    }
    let eigs: Vector4<f64> = dense.symmetric_eigen().eigenvalues;
    let min_eig = eigs.iter().fold(f64::INFINITY, |a, &e| a.min(e));
    if min_eig < PSD_FLOOR {
        return Err(Error::NotPositive { min_eig });
    }
    Ok(())
}

fn extract_bloch(dense: &CMat4) -> (Vector3<f64>, Vector3<f64>, Matrix3<f64>) {
    let mut r_a = Vector3::zeros();
    let mut r_b = Vector3::zeros();
    let mut t = Matrix3::zeros();
    for i in 0..3 {
        r_a[i] = real_trace(&(dense * kron2(&pauli(i + 1), &pauli(0))));
        r_b[i] = real_trace(&(dense * kron2(&pauli(0), &pauli(i + 1))));
        for j in 0..3 {
            t[(i, j)] = real_trace(&(dense * kron2(&pauli(i + 1), &pauli(j + 1))));
        }
    }
    (r_a, r_b, t)
}

/// Validates a density matrix and extracts its Bloch form.
pub fn bloch_from_density(dense: &CMat4) -> Result<TwoQubitState> {
    check_density(dense)?;
    let (r_a, r_b, t) = extract_bloch(dense);
    let state = TwoQubitState {
        r_a,
        r_b,
        t,
        dense: Some(*dense),
    };
    state.check_bloch_bounds()?;
    Ok(state)
}

fn check_param(name: &'static str, value: f64, lo: f64, hi: f64) -> Result<()> {
    if !value.is_finite() || value < lo || value > hi {
        return Err(Error::OutOfDomain {
            name,
            value,
            lo,
            hi,
        });
    }
    Ok(())
}

fn pure_dense(amplitudes: [C64; 4], noise: f64) -> CMat4 {
    let mut dense = CMat4::identity().map(|e| e * c((1.0 - noise) / 4.0, 0.0));
    for (i, ai) in amplitudes.iter().enumerate() {
        for (j, aj) in amplitudes.iter().enumerate() {
            dense[(i, j)] += c(noise, 0.0) * ai * aj.conj();
        }
    }
    dense
}

/// Noisy singlet: `v |psi-><psi-| + (1 - v) I/4`.
///
/// Bloch form: `r_a = r_b = 0`, `T = -v I`.
pub fn make_werner(v: f64) -> Result<TwoQubitState> {
    check_param("noise", v, 0.0, 1.0)?;
    let inv_sqrt2 = 1.0 / 2.0_f64.sqrt();
    let singlet = [
        c(0.0, 0.0),
        c(inv_sqrt2, 0.0),
        c(-inv_sqrt2, 0.0),
        c(0.0, 0.0),
    ];
    Ok(TwoQubitState {
        r_a: Vector3::zeros(),
        r_b: Vector3::zeros(),
        t: Matrix3::from_diagonal(&Vector3::new(-v, -v, -v)),
        dense: Some(pure_dense(singlet, v)),
    })
}

/// Noisy partially-entangled state: `v |psi(theta)><psi(theta)| + (1 - v) I/4`
/// with `|psi(theta)> = cos(theta)|00> + sin(theta)|11>`.
///
/// Bloch form: `r_a = r_b = (0, 0, v cos 2theta)`,
/// `T = v diag(sin 2theta, -sin 2theta, 1)`.
pub fn make_generalized_werner(v: f64, theta: f64) -> Result<TwoQubitState> {
    check_param("noise", v, 0.0, 1.0)?;
    check_param("theta", theta, 0.0, std::f64::consts::FRAC_PI_2)?;
    let psi = [
        c(theta.cos(), 0.0),
        c(0.0, 0.0),
        c(0.0, 0.0),
        c(theta.sin(), 0.0),
    ];
    let s2 = (2.0 * theta).sin();
    let c2 = (2.0 * theta).cos();
    Ok(TwoQubitState {
        r_a: Vector3::new(0.0, 0.0, v * c2),
        r_b: Vector3::new(0.0, 0.0, v * c2),
        t: Matrix3::from_diagonal(&Vector3::new(v * s2, -(v * s2), v * 1.0)),
        dense: Some(pure_dense(psi, v)),
    })
}

/// Which noisy family a computation targets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum FamilyKind {
    Werner,
    GeneralizedWerner,
}

/// A state family: the kind plus the entanglement angle (ignored for Werner).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StateFamily {
    kind: FamilyKind,
    theta: f64,
}

impl StateFamily {
    pub fn werner() -> Self {
        StateFamily {
            kind: FamilyKind::Werner,
            theta: std::f64::consts::FRAC_PI_4,
        }
    }

    pub fn generalized_werner(theta: f64) -> Result<Self> {
        check_param("theta", theta, 0.0, std::f64::consts::FRAC_PI_2)?;
        Ok(StateFamily {
            kind: FamilyKind::GeneralizedWerner,
            theta,
        })
    }

    pub fn kind(&self) -> FamilyKind {
        self.kind
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    /// The family member at noise level `v`.
    pub fn state(&self, v: f64) -> Result<TwoQubitState> {
        match self.kind {
            FamilyKind::Werner => make_werner(v),
            FamilyKind::GeneralizedWerner => make_generalized_werner(v, self.theta),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, FRAC_PI_6};

    #[test]
    fn unit_vector_accepts_and_renormalizes_near_unit_input() {
        let v = UnitVector3::new(1.0 + 5e-7, 0.0, 0.0).unwrap();
        assert!((v.as_vector().norm() - 1.0).abs() < 1e-12);
        assert_abs_diff_eq!(v.x(), 1.0, epsilon = 1e-6);
    }

    #[test]
    fn unit_vector_rejects_far_from_unit_input() {
        assert!(UnitVector3::new(1.0 + 2e-6, 0.0, 0.0).is_err());
        assert!(UnitVector3::new(0.5, 0.5, 0.5).is_err());
        assert!(UnitVector3::new(0.0, 0.0, 0.0).is_err());
        assert!(UnitVector3::new(f64::NAN, 0.0, 0.0).is_err());
    }

    #[test]
    fn normalized_rejects_zero_and_scales_rest() {
        assert!(UnitVector3::normalized(Vector3::zeros()).is_err());
        let v = UnitVector3::normalized(Vector3::new(3.0, 4.0, 0.0)).unwrap();
        assert_abs_diff_eq!(v.x(), 0.6, epsilon = 1e-15);
        assert_abs_diff_eq!(v.y(), 0.8, epsilon = 1e-15);
    }

    #[test]
    fn angles_round_trip() {
        let v = UnitVector3::from_angles(1.1, -2.3);
        assert!((v.as_vector().norm() - 1.0).abs() < 1e-12);
        let (theta, phi) = v.to_angles();
        let w = UnitVector3::from_angles(theta, phi);
        assert_abs_diff_eq!(v.dot(&w), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn unit_vector_serde_round_trip_and_gate() {
        let v: UnitVector3 = serde_json::from_str("[0.6, 0.8, 0.0]").unwrap();
        assert_abs_diff_eq!(v.y(), 0.8, epsilon = 1e-15);
        let back = serde_json::to_string(&v).unwrap();
        let again: UnitVector3 = serde_json::from_str(&back).unwrap();
        assert_eq!(v, again);
        assert!(serde_json::from_str::<UnitVector3>("[0.5, 0.5, 0.5]").is_err());
    }

    #[test]
    fn werner_zero_noise_is_maximally_mixed() {
        let s = make_werner(0.0).unwrap();
        assert_eq!(*s.t(), Matrix3::zeros());
        assert_eq!(*s.r_a(), Vector3::zeros());
        assert_eq!(*s.r_b(), Vector3::zeros());
        s.validate().unwrap();
    }

    #[test]
    fn werner_rejects_out_of_range_noise() {
        assert!(make_werner(-0.1).is_err());
        assert!(make_werner(1.1).is_err());
        assert!(make_werner(f64::NAN).is_err());
    }

    #[test]
    fn generalized_werner_product_limit() {
        let s = make_generalized_werner(1.0, 0.0).unwrap();
        assert_abs_diff_eq!(s.t()[(0, 0)], 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(s.t()[(2, 2)], 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(s.r_b()[2], 1.0, epsilon = 1e-15);
        s.validate().unwrap();
    }

    #[test]
    fn generalized_werner_rejects_bad_theta() {
        assert!(make_generalized_werner(0.5, -0.1).is_err());
        assert!(make_generalized_werner(0.5, FRAC_PI_2 + 0.1).is_err());
    }

    #[test]
    fn maximally_mixed_density_extracts_to_zero_bloch() {
        let mixed = CMat4::identity().map(|e| e * c(0.25, 0.0));
        let s = bloch_from_density(&mixed).unwrap();
        assert_eq!(*s.t(), Matrix3::zeros());
        assert_eq!(*s.r_a(), Vector3::zeros());
    }

    #[test]
    fn density_validation_rejects_bad_input() {
        let mut m = CMat4::identity().map(|e| e * c(0.25, 0.0));
        m[(0, 1)] = c(0.0, 0.3);
        assert!(matches!(
            bloch_from_density(&m),
            Err(Error::NotHermitian { .. })
        ));

        let half = CMat4::identity().map(|e| e * c(0.125, 0.0));
        assert!(matches!(bloch_from_density(&half), Err(Error::BadTrace { .. })));

        let indefinite = CMat4::from_diagonal(&Vector4::new(
            c(0.7, 0.0),
            c(0.5, 0.0),
            c(-0.1, 0.0),
            c(-0.1, 0.0),
        ));
        assert!(matches!(
            bloch_from_density(&indefinite),
            Err(Error::NotPositive { .. })
        ));
    }

    #[test]
    fn family_round_trip_matches_constructed_bloch_fields() {
        let s = make_generalized_werner(0.7, 0.3).unwrap();
        let round = bloch_from_density(s.dense().unwrap()).unwrap();
        assert!((round.t() - s.t()).norm() < 1e-12);
        assert!((round.r_a() - s.r_a()).norm() < 1e-12);
        assert!((round.r_b() - s.r_b()).norm() < 1e-12);
        s.validate().unwrap();
    }

    #[test]
    fn bloch_fields_scale_exactly_linearly_in_noise() {
        for &theta in &[0.0, 0.3, FRAC_PI_6, FRAC_PI_4, 1.4] {
            let v = 0.37;
            let at_v = make_generalized_werner(v, theta).unwrap();
            let at_one = make_generalized_werner(1.0, theta).unwrap();
            for i in 0..3 {
                assert_eq!(at_v.r_b()[i], v * at_one.r_b()[i]);
                for j in 0..3 {
                    assert_eq!(at_v.t()[(i, j)], v * at_one.t()[(i, j)]);
                }
            }
        }
        let w = make_werner(0.37).unwrap();
        let w1 = make_werner(1.0).unwrap();
        for i in 0..3 {
            assert_eq!(w.t()[(i, i)], 0.37 * w1.t()[(i, i)]);
        }
    }

    #[test]
    fn theta_reflection_fixes_t_and_flips_r_b() {
        for &theta in &[0.1, 0.4, FRAC_PI_4, 1.2] {
            let a = make_generalized_werner(1.0, theta).unwrap();
            let b = make_generalized_werner(1.0, FRAC_PI_2 - theta).unwrap();
            assert!((a.t() - b.t()).norm() < 1e-12);
            assert!((a.r_b() + b.r_b()).norm() < 1e-12);
            assert!((a.r_a() + b.r_a()).norm() < 1e-12);
        }
    }

    #[test]
    fn from_bloch_enforces_physical_bounds() {
        assert!(TwoQubitState::from_bloch(
            Vector3::new(0.0, 0.0, 1.5),
            Vector3::zeros(),
            Matrix3::zeros()
        )
        .is_err());
        let too_strong = Matrix3::from_diagonal(&Vector3::new(1.2, 0.0, 0.0));
        assert!(
            TwoQubitState::from_bloch(Vector3::zeros(), Vector3::zeros(), too_strong).is_err()
        );
        TwoQubitState::from_bloch(
            Vector3::zeros(),
            Vector3::zeros(),
            Matrix3::from_diagonal(&Vector3::new(-1.0, -1.0, -1.0)),
        )
        .unwrap();
    }

    #[test]
    fn family_dispatch_matches_direct_constructors() {
        let f = StateFamily::generalized_werner(0.9).unwrap();
        assert_eq!(f.state(0.4).unwrap(), make_generalized_werner(0.4, 0.9).unwrap());
        let w = StateFamily::werner();
        assert_eq!(w.state(0.4).unwrap(), make_werner(0.4).unwrap());
        assert!(StateFamily::generalized_werner(2.0).is_err());
    }
}
