//! Sweeps over the generalized-Werner entanglement angle: visibility curves,
//! violation-threshold angles, and linear/chained crossover angles.
//!
//! Across a sweep the LHS bound is a constant; only the quantum value moves
//! with theta, and it is symmetric about pi/4. Root finding therefore uses
//! plain bisection on each half interval, robust to the piecewise-smooth
//! objective; 60 fixed iterations resolve theta far below the 1e-8 contract.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::functionals::{lhs_bound, DirectionSet, Family, SteeringFunctional};
use crate::quantum::{quantum_value, Strategy};
use crate::states::StateFamily;

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

const BISECT_ITERS: usize = 60;

/// One sweep sample; a missing entry means the column was not scanned (or hit
/// a degenerate quantum value of 0).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScanRow {
    pub theta: f64,
    pub v_linear: Option<f64>,
    pub v_chained: Option<f64>,
}

/// What produced a scan: setting count, per-column direction-set labels, and
/// the grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanMeta {
    pub n: usize,
    pub linear_label: Option<String>,
    pub chained_label: Option<String>,
    pub grid_points: usize,
    pub theta_min: f64,
    pub theta_max: f64,
}

/// A visibility sweep over the entanglement angle.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanResult {
    pub meta: ScanMeta,
    pub rows: Vec<ScanRow>,
}

impl ScanResult {
    /// Renames the direction-set label of the populated column(s).
    pub fn with_label(mut self, label: &str) -> Self {
        if self.meta.linear_label.is_some() {
            self.meta.linear_label = Some(label.to_string());
        }
        if self.meta.chained_label.is_some() {
            self.meta.chained_label = Some(label.to_string());
        }
        self
    }

    /// CSV rendering: `theta,v_linear,v_chained` at 17 significant digits,
    /// `nan` for missing entries.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("theta,v_linear,v_chained\n");
        let cell = |v: Option<f64>| match v {
            Some(x) => format!("{x:.16e}"),
            None => "nan".to_string(),
        };
        for row in &self.rows {
            out.push_str(&format!(
                "{:.16e},{},{}\n",
                row.theta,
                cell(row.v_linear),
                cell(row.v_chained)
            ));
        }
        out
    }

    /// Combines a linear-column scan and a chained-column scan taken on the
    /// same grid into one table.
    pub fn merge(a: &ScanResult, b: &ScanResult) -> Result<ScanResult> {
        if a.meta.n != b.meta.n {
            return Err(Error::LengthMismatch {
                expected: a.meta.n,
                got: b.meta.n,
            });
        }
        if a.rows.len() != b.rows.len()
            || a.rows
                .iter()
                .zip(&b.rows)
                .any(|(ra, rb)| ra.theta != rb.theta)
        {
            return Err(Error::BadGrid {
                reason: "merge requires identical theta grids".into(),
            });
        }
        let pick = |name: &str, x: Option<f64>, y: Option<f64>| -> Result<Option<f64>> {
            match (x, y) {
                (Some(_), Some(_)) => Err(Error::BadGrid {
                    reason: format!("both scans populate the {name} column"),
                }),
                (x, y) => Ok(x.or(y)),
            }
        };
        let pick_label = |x: &Option<String>, y: &Option<String>| x.clone().or_else(|| y.clone());
        let mut rows = Vec::with_capacity(a.rows.len());
        for (ra, rb) in a.rows.iter().zip(&b.rows) {
            rows.push(ScanRow {
                theta: ra.theta,
                v_linear: pick("linear", ra.v_linear, rb.v_linear)?,
                v_chained: pick("chained", ra.v_chained, rb.v_chained)?,
            });
        }
        Ok(ScanResult {
            meta: ScanMeta {
                n: a.meta.n,
                linear_label: pick_label(&a.meta.linear_label, &b.meta.linear_label),
                chained_label: pick_label(&a.meta.chained_label, &b.meta.chained_label),
                grid_points: a.meta.grid_points,
                theta_min: a.meta.theta_min,
                theta_max: a.meta.theta_max,
            },
            rows,
        })
    }
}

/// Uniform grid of `points` angles covering [0, pi/2] inclusive.
pub fn uniform_grid(points: usize) -> Result<Vec<f64>> {
    if points < 2 {
        return Err(Error::TooFew {
            name: "grid points",
            got: points,
            min: 2,
        });
    }
    // Ratio first so the last point is exactly pi/2; multiplying first can
    // round one ulp past it and fail the range check.
    Ok((0..points)
        .map(|i| FRAC_PI_2 * (i as f64 / (points - 1) as f64))
        .collect())
}

fn check_grid(grid: &[f64]) -> Result<()> {
    if grid.is_empty() {
        return Err(Error::BadGrid {
            reason: "empty grid".into(),
        });
    }
    for w in grid.windows(2) {
        if !(w[1] > w[0]) {
            return Err(Error::BadGrid {
                reason: format!("not strictly increasing at {} -> {}", w[0], w[1]),
            });
        }
    }
    let (lo, hi) = (grid[0], grid[grid.len() - 1]);
    if !lo.is_finite() || !hi.is_finite() || lo < 0.0 || hi > FRAC_PI_2 {
        return Err(Error::BadGrid {
            reason: format!("grid range [{lo}, {hi}] leaves [0, pi/2]"),
        });
    }
    Ok(())
}

/// Visibility at one angle: the theta-independent LHS bound over the quantum
/// value of the generalized Werner member at noise 1. `None` when the
/// quantum value degenerates to 0.
fn visibility_at(
    f: &SteeringFunctional,
    b: &DirectionSet,
    c: f64,
    theta: f64,
    strategy: Strategy,
) -> Option<f64> {
    let state = StateFamily::generalized_werner(theta)
        .and_then(|fam| fam.state(1.0))
        .ok()?;
    let (q, _) = quantum_value(f, b, &state, strategy).ok()?;
    if q == 0.0 {
        None
    } else {
        Some(c / q)
    }
}

/// Sweeps the generalized-Werner angle over `grid` for one functional,
/// filling that family's visibility column.
pub fn scan_theta(
    f: &SteeringFunctional,
    b: &DirectionSet,
    grid: &[f64],
    strategy: Strategy,
) -> Result<ScanResult> {
    check_grid(grid)?;
    let (c, _) = lhs_bound(f, b)?;
    let rows: Vec<ScanRow> = grid
        .par_iter()
        .map(|&theta| {
            let v = visibility_at(f, b, c, theta, strategy);
            match f.family() {
                Family::Linear => ScanRow {
                    theta,
                    v_linear: v,
                    v_chained: None,
                },
                Family::Chained => ScanRow {
                    theta,
                    v_linear: None,
                    v_chained: v,
                },
            }
        })
        .collect();
    let label = Some("custom".to_string());
    let (linear_label, chained_label) = match f.family() {
        Family::Linear => (label, None),
        Family::Chained => (None, label),
    };
    Ok(ScanResult {
        meta: ScanMeta {
            n: f.n(),
            linear_label,
            chained_label,
            grid_points: grid.len(),
            theta_min: grid[0],
            theta_max: grid[grid.len() - 1],
        },
        rows,
    })
}

/// Closed-form linear-family visibility on the pole-oriented Platonic sets,
/// `n` in {4, 6, 10}, as a function of the entanglement angle.
pub fn linear_visibility_closed_form(n: usize, theta: f64) -> Result<f64> {
    let s2 = (2.0 * theta).sin().powi(2);
    let sqrt5 = 5.0_f64.sqrt();
    match n {
        4 => Ok(1.0 / (1.0 + 2.0 * s2).sqrt()),
        6 => Ok((1.0 + sqrt5) / (1.0 + sqrt5 * (1.0 + 4.0 * s2).sqrt())),
        10 => Ok((3.0 + sqrt5)
            / (1.0 + (5.0 + 4.0 * s2).sqrt() + 2.0 * (1.0 + 8.0 * s2).sqrt())),
        _ => Err(Error::UnsupportedN {
            n,
            supported: "4, 6, 10",
        }),
    }
}

/// Bisection helper: `g` changes sign from `g(lo)` (sign `sign_lo` > 0 means
/// positive) to the opposite at `hi`; returns the midpoint after a fixed
/// iteration count.
fn bisect(g: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, positive_at_lo: bool) -> f64 {
    for _ in 0..BISECT_ITERS {
        let mid = 0.5 * (lo + hi);
        let gm = g(mid);
        if (gm > 0.0) == positive_at_lo {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Angles bounding the violation window: `V(theta) <= 1` exactly on
/// `[theta_lo, theta_hi]`. Ends sitting at 0 or pi/2 mean the curve never
/// rises above 1 on that side.
///
/// Requires a violation at pi/4, where the curve is minimal.
pub fn threshold_angles(
    f: &SteeringFunctional,
    b: &DirectionSet,
    strategy: Strategy,
) -> Result<(f64, f64)> {
    let (c, _) = lhs_bound(f, b)?;
    let v_at = |theta: f64| -> f64 {
        visibility_at(f, b, c, theta, strategy).unwrap_or(f64::INFINITY)
    };
    let v_mid = v_at(FRAC_PI_4);
    if !(v_mid < 1.0) {
        return Err(Error::NoViolation { v_mid });
    }
    let g = |theta: f64| v_at(theta) - 1.0;

    let lo = if g(0.0) <= 0.0 {
        0.0
    } else {
        bisect(g, 0.0, FRAC_PI_4, true)
    };
    let hi = if g(FRAC_PI_2) <= 0.0 {
        FRAC_PI_2
    } else {
        bisect(g, FRAC_PI_4, FRAC_PI_2, false)
    };
    Ok((lo, hi))
}

/// Angles bounding the window where the chained set beats the linear
/// closed form of the same `n`: chained visibility < linear visibility
/// exactly on `(lo, hi)`.
pub fn crossover_angles(
    f: &SteeringFunctional,
    b: &DirectionSet,
    strategy: Strategy,
) -> Result<(f64, f64)> {
    if f.family() != Family::Chained {
        return Err(Error::WrongFamily { expected: "chained" });
    }
    let n = f.n();
    linear_visibility_closed_form(n, 0.0)?;
    let (c, _) = lhs_bound(f, b)?;
    let d = |theta: f64| -> f64 {
        let chained = visibility_at(f, b, c, theta, strategy).unwrap_or(f64::INFINITY);
        let linear = linear_visibility_closed_form(n, theta).expect("n validated above");
        chained - linear
    };
    let gap = d(FRAC_PI_4);
    if !(gap < 0.0) {
        return Err(Error::NoCrossing { gap });
    }
    let lo = if d(0.0) <= 0.0 {
        0.0
    } else {
        bisect(d, 0.0, FRAC_PI_4, true)
    };
    let hi = if d(FRAC_PI_2) <= 0.0 {
        FRAC_PI_2
    } else {
        bisect(d, FRAC_PI_4, FRAC_PI_2, false)
    };
    Ok((lo, hi))
}
