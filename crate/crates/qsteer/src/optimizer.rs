//! Multi-start derivative-free search over Bob's measurement directions,
//! minimizing the visibility `V = C / Q` for a fixed functional and family.
//!
//! Directions are parametrized by spherical angles, so every candidate is
//! structurally unit norm. The objective is piecewise smooth (the LHS argmax
//! switches create kinks), so each restart runs a ladder of Nelder-Mead
//! cycles with a decaying initial simplex scale instead of a gradient method.
//! The leading restarts then get a monotone basin-hopping pass: random
//! perturbations of the incumbent followed by a coarse ladder, accepted only
//! on strict improvement. Restarts and hop chains use per-index RNG streams
//! derived from one master seed; results are reduced deterministically, so
//! thread count never changes the reported best.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::functionals::{lhs_bound, DirectionSet, SteeringFunctional};
use crate::quantum::{evaluate, quantum_value, EvalReport, Strategy};
use crate::states::{FamilyKind, StateFamily, TwoQubitState, UnitVector3};

use std::cmp::Ordering;
use std::f64::consts::{FRAC_PI_4, TAU};

/// Largest setting count the optimizer accepts; the sign enumeration inside
/// the objective caps practical sizes well before memory does.
pub const MAX_OPT_SETTINGS: usize = 12;

/// Factor applied to the simplex scale between restart cycles.
const CYCLE_DECAY: f64 = 0.25;

/// Scale below which further cycles cannot move the simplex meaningfully.
const MIN_CYCLE_SCALE: f64 = 1e-8;

/// Restarts counting as "tied with the best" in the summary statistic.
const TIE_TOL: f64 = 1e-6;

/// Leading restarts (ranked after the first descent) that get a hop chain.
const ELITE_RESTARTS: usize = 10;

/// Perturbation rounds in one hop chain.
const HOP_ROUNDS: usize = 12;

/// Coordinate-wise uniform half-widths of hop proposals, cycled per round.
/// Sized to clear the kink walls between neighboring basins without losing
/// the incumbent's large-scale arrangement.
const HOP_WIDTHS: [f64; 3] = [0.2, 0.35, 0.5];

/// Starting simplex scale of the ladder run after a hop proposal.
const HOP_LADDER_SCALE: f64 = 0.15;

/// Scale floor of post-hop ladders; the final refinement ladder still
/// descends to `MIN_CYCLE_SCALE`.
const HOP_LADDER_FLOOR: f64 = 1e-4;

/// Multi-start search configuration.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OptimizerConfig {
    /// Independent random restarts.
    pub restarts: usize,
    /// Master seed; restart `i` uses stream `i` of this seed.
    pub seed: u64,
    /// Nelder-Mead iteration budget of each descent cycle within a restart.
    pub max_iters: usize,
    /// Simplex function-value spread that terminates a cycle.
    pub objective_tol: f64,
    /// Initial simplex edge length in radians.
    pub simplex_scale: f64,
    /// Quotient global rotations by pinning angles (see [`optimize_directions`]).
    pub gauge_fix: bool,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        OptimizerConfig {
            restarts: 200,
            seed: 42,
            max_iters: 2000,
            objective_tol: 1e-10,
            simplex_scale: 0.3,
            gauge_fix: true,
        }
    }
}

impl OptimizerConfig {
    pub fn validate(&self) -> Result<()> {
        if self.restarts < 1 {
            return Err(Error::TooFew {
                name: "restarts",
                got: self.restarts,
                min: 1,
            });
        }
        if self.max_iters < 1 {
            return Err(Error::TooFew {
                name: "max_iters",
                got: self.max_iters,
                min: 1,
            });
        }
        if !(self.objective_tol > 0.0) {
            return Err(Error::OutOfDomain {
                name: "objective_tol",
                value: self.objective_tol,
                lo: f64::MIN_POSITIVE,
                hi: f64::INFINITY,
            });
        }
        if !(self.simplex_scale > 0.0) {
            return Err(Error::OutOfDomain {
                name: "simplex_scale",
                value: self.simplex_scale,
                lo: f64::MIN_POSITIVE,
                hi: f64::INFINITY,
            });
        }
        Ok(())
    }
}

/// Outcome of a search: the best direction set, its independently recomputed
/// evaluation, how many restarts tied the best objective within 1e-6, and
/// (for multi-start runs) each restart's final objective.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OptimizerResult {
    pub best: DirectionSet,
    pub report: EvalReport,
    pub restarts_within_tol: usize,
    pub trace: Option<Vec<f64>>,
}

/// Which angles are pinned to quotient symmetries of the objective.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Gauge {
    /// `b_1 = z`, `b_2` in the xz half-plane: valid when the objective is
    /// invariant under all global rotations.
    Full,
    /// `phi_1 = 0`: valid when only rotations about z are symmetries.
    ZOnly,
    /// All `2n` angles free.
    Free,
}

impl Gauge {
    fn param_count(self, n: usize) -> usize {
        match self {
            Gauge::Full => 2 * n - 3,
            Gauge::ZOnly => 2 * n - 1,
            Gauge::Free => 2 * n,
        }
    }
}

/// The family's symmetries decide how much gauge can be fixed: the Werner
/// state (and the generalized Werner state at theta = pi/4, whose Bloch
/// content is rotation isotropic) allows the full quotient, other angles
/// only rotations about z.
fn gauge_for(family: &StateFamily, gauge_fix: bool) -> Gauge {
    if !gauge_fix {
        return Gauge::Free;
    }
    match family.kind() {
        FamilyKind::Werner => Gauge::Full,
        FamilyKind::GeneralizedWerner => {
            if (family.theta() - FRAC_PI_4).abs() <= 1e-12 {
                Gauge::Full
            } else {
                Gauge::ZOnly
            }
        }
    }
}

fn directions_from_params(gauge: Gauge, n: usize, p: &[f64]) -> DirectionSet {
    let mut dirs = Vec::with_capacity(n);
    match gauge {
        Gauge::Full => {
            dirs.push(UnitVector3::Z);
            dirs.push(UnitVector3::from_angles(p[0], 0.0));
            for i in 2..n {
                let off = 1 + 2 * (i - 2);
                dirs.push(UnitVector3::from_angles(p[off], p[off + 1]));
            }
        }
        Gauge::ZOnly => {
            dirs.push(UnitVector3::from_angles(p[0], 0.0));
            for i in 1..n {
                let off = 1 + 2 * (i - 1);
                dirs.push(UnitVector3::from_angles(p[off], p[off + 1]));
            }
        }
        Gauge::Free => {
            for i in 0..n {
                dirs.push(UnitVector3::from_angles(p[2 * i], p[2 * i + 1]));
            }
        }
    }
    DirectionSet::new(dirs).expect("parametrization always yields >= 2 axes")
}

/// Sphere-uniform initial angles: polar angles from the arccos of a uniform
/// cosine, azimuths uniform on the circle.
fn random_params(rng: &mut ChaCha8Rng, gauge: Gauge, n: usize) -> Vec<f64> {
    let polar = |rng: &mut ChaCha8Rng| rng.gen_range(-1.0_f64..=1.0).acos();
    let mut params = Vec::with_capacity(gauge.param_count(n));
    let pairs = match gauge {
        Gauge::Full => {
            params.push(polar(rng));
            n - 2
        }
        Gauge::ZOnly => {
            params.push(polar(rng));
            n - 1
        }
        Gauge::Free => n,
    };
    for _ in 0..pairs {
        params.push(polar(rng));
        params.push(rng.gen_range(0.0..TAU));
    }
    params
}

struct NmOutcome {
    x: Vec<f64>,
    f: f64,
}

/// One Nelder-Mead run from `x0` with an axis-aligned simplex of edge
/// `scale`. Returns the best vertex; `history` (when given) records the
/// running best value per iteration.
fn nelder_mead(
    obj: &(dyn Fn(&[f64]) -> f64 + Sync),
    x0: &[f64],
    scale: f64,
    max_iters: usize,
    tol: f64,
    history: Option<&mut Vec<f64>>,
) -> NmOutcome {
    let d = x0.len();
    let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(d + 1);
    simplex.push((x0.to_vec(), obj(x0)));
    for i in 0..d {
        let mut x = x0.to_vec();
        x[i] += scale;
        let fx = obj(&x);
        simplex.push((x, fx));
    }
    let mut hist = history;
    let mut iters = 0;
    while iters < max_iters {
        simplex.sort_by(|a, b| a.1.partial_cmp(&b.1).expect("objective is never NaN"));
        if let Some(h) = hist.as_deref_mut() {
            let running = h.last().copied().unwrap_or(f64::INFINITY);
            h.push(running.min(simplex[0].1));
        }
        if simplex[d].1 - simplex[0].1 < tol {
            break;
        }
        iters += 1;

        let centroid: Vec<f64> = (0..d)
            .map(|j| simplex[..d].iter().map(|(x, _)| x[j]).sum::<f64>() / d as f64)
            .collect();
        let worst = simplex[d].0.clone();
        let blend = |a: f64| -> Vec<f64> {
            (0..d)
                .map(|j| centroid[j] + a * (centroid[j] - worst[j]))
                .collect()
        };

        let reflected = blend(1.0);
        let fr = obj(&reflected);
        if fr < simplex[0].1 {
            let expanded = blend(2.0);
            let fe = obj(&expanded);
            simplex[d] = if fe < fr { (expanded, fe) } else { (reflected, fr) };
            continue;
        }
        if fr < simplex[d - 1].1 {
            simplex[d] = (reflected, fr);
            continue;
        }
        let contracted = if fr < simplex[d].1 {
            blend(0.5)
        } else {
            blend(-0.5)
        };
        let fc = obj(&contracted);
        if fc < simplex[d].1.min(fr) {
            simplex[d] = (contracted, fc);
            continue;
        }
        // Shrink toward the best vertex.
        let best = simplex[0].0.clone();
        for v in simplex.iter_mut().skip(1) {
            for j in 0..d {
                v.0[j] = best[j] + 0.5 * (v.0[j] - best[j]);
            }
            v.1 = obj(&v.0);
        }
    }
    simplex.sort_by(|a, b| a.1.partial_cmp(&b.1).expect("objective is never NaN"));
    NmOutcome {
        x: simplex[0].0.clone(),
        f: simplex[0].1,
    }
}

#[derive(Clone)]
struct RestartOutcome {
    x: Vec<f64>,
    f: f64,
}

/// Drives one descent ladder: repeated Nelder-Mead cycles from the incumbent
/// best, with the simplex scale decaying geometrically from `start_scale`
/// down to `floor`. Each cycle gets a fresh `cfg.max_iters` budget.
fn descend_ladder(
    obj: &(dyn Fn(&[f64]) -> f64 + Sync),
    x0: Vec<f64>,
    start_scale: f64,
    floor: f64,
    cfg: &OptimizerConfig,
    mut history: Option<&mut Vec<f64>>,
) -> RestartOutcome {
    let mut best_x = x0;
    let mut best_f = obj(&best_x);
    if let Some(h) = history.as_deref_mut() {
        h.push(best_f);
    }
    let mut scale = start_scale;
    while scale >= floor {
        let out = nelder_mead(
            obj,
            &best_x,
            scale,
            cfg.max_iters,
            cfg.objective_tol,
            history.as_deref_mut(),
        );
        if out.f < best_f {
            best_x = out.x;
            best_f = out.f;
        }
        scale *= CYCLE_DECAY;
    }
    RestartOutcome { x: best_x, f: best_f }
}

/// Monotone basin-hopping chain on top of a converged restart. Each round
/// perturbs the incumbent by coordinate-wise uniform offsets drawn from the
/// restart's dedicated stream, runs a coarse ladder from the proposal, and
/// keeps the result only on strict improvement, so the incumbent objective
/// never increases.
fn hop_refine(
    obj: &(dyn Fn(&[f64]) -> f64 + Sync),
    start: RestartOutcome,
    rng: &mut ChaCha8Rng,
    cfg: &OptimizerConfig,
) -> RestartOutcome {
    let mut incumbent = start;
    for round in 0..HOP_ROUNDS {
        let w = HOP_WIDTHS[round % HOP_WIDTHS.len()];
        let proposal: Vec<f64> = incumbent
            .x
            .iter()
            .map(|&v| v + rng.gen_range(-w..=w))
            .collect();
        let out = descend_ladder(obj, proposal, HOP_LADDER_SCALE, HOP_LADDER_FLOOR, cfg, None);
        if out.f < incumbent.f {
            incumbent = out;
        }
    }
    incumbent
}

/// Total order on restart outcomes: objective, then lexicographic angles,
/// then restart index, so reductions are deterministic on any thread count.
fn outcome_rank(a: &RestartOutcome, ia: usize, b: &RestartOutcome, ib: usize) -> Ordering {
    a.f.partial_cmp(&b.f)
        .expect("objective is never NaN")
        .then_with(|| {
            if lex_less(&a.x, &b.x) {
                Ordering::Less
            } else if lex_less(&b.x, &a.x) {
                Ordering::Greater
            } else {
                ia.cmp(&ib)
            }
        })
}

fn lex_less(a: &[f64], b: &[f64]) -> bool {
    for (x, y) in a.iter().zip(b) {
        if x < y {
            return true;
        }
        if x > y {
            return false;
        }
    }
    false
}

fn objective_for<'a>(
    f: &'a SteeringFunctional,
    state: &'a TwoQubitState,
    gauge: Gauge,
) -> impl Fn(&[f64]) -> f64 + Sync + 'a {
    let n = f.n();
    move |p: &[f64]| -> f64 {
        let dirs = directions_from_params(gauge, n, p);
        let Ok((c, _)) = lhs_bound(f, &dirs) else {
            return f64::INFINITY;
        };
        let Ok((q, _)) = quantum_value(f, &dirs, state, Strategy::General) else {
            return f64::INFINITY;
        };
        if q == 0.0 {
            f64::INFINITY
        } else {
            c / q
        }
    }
}

/// Multi-start minimization of the visibility over Bob's directions.
///
/// Each restart draws sphere-uniform starting angles from stream `i` of the
/// seeded generator and descends locally; the leading restarts then run a
/// hop chain (streams `restarts + i`, disjoint from the start streams) and a
/// final fine ladder. With `gauge_fix`, `b_1` is pinned to z and `b_2` to
/// the xz half-plane when the family is rotation isotropic (Werner, or
/// generalized Werner at theta = pi/4); otherwise only the first azimuth is
/// pinned. The reported best recomputes its evaluation independently; ties
/// between restarts break lexicographically on the angle vector, then on
/// restart index.
pub fn optimize_directions(
    f: &SteeringFunctional,
    family: &StateFamily,
    cfg: &OptimizerConfig,
) -> Result<OptimizerResult> {
    cfg.validate()?;
    if f.n() > MAX_OPT_SETTINGS {
        return Err(Error::OutOfDomain {
            name: "n",
            value: f.n() as f64,
            lo: 2.0,
            hi: MAX_OPT_SETTINGS as f64,
        });
    }
    let state = family.state(1.0)?;
    let gauge = gauge_for(family, cfg.gauge_fix);
    let objective = objective_for(f, &state, gauge);
    let n = f.n();

    let mut outcomes: Vec<RestartOutcome> = (0..cfg.restarts)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            rng.set_stream(i as u64);
            let x0 = random_params(&mut rng, gauge, n);
            descend_ladder(
                &objective,
                x0,
                cfg.simplex_scale,
                MIN_CYCLE_SCALE,
                cfg,
                None,
            )
        })
        .collect();

    let mut order: Vec<usize> = (0..outcomes.len()).collect();
    order.sort_by(|&a, &b| outcome_rank(&outcomes[a], a, &outcomes[b], b));
    let elite: Vec<usize> = order.into_iter().take(ELITE_RESTARTS).collect();
    let refined: Vec<(usize, RestartOutcome)> = elite
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            rng.set_stream((cfg.restarts + i) as u64);
            let hopped = hop_refine(&objective, outcomes[i].clone(), &mut rng, cfg);
            let out = descend_ladder(
                &objective,
                hopped.x,
                HOP_LADDER_SCALE,
                MIN_CYCLE_SCALE,
                cfg,
                None,
            );
            (i, out)
        })
        .collect();
    for (i, out) in refined {
        outcomes[i] = out;
    }

    let mut best = 0;
    for i in 1..outcomes.len() {
        if outcome_rank(&outcomes[i], i, &outcomes[best], best) == Ordering::Less {
            best = i;
        }
    }
    let best_f = outcomes[best].f;
    let best_dirs = directions_from_params(gauge, n, &outcomes[best].x);
    let report = evaluate(f, &best_dirs, family, Strategy::General)?;
    Ok(OptimizerResult {
        best: best_dirs,
        report,
        restarts_within_tol: outcomes.iter().filter(|o| o.f <= best_f + TIE_TOL).count(),
        trace: Some(outcomes.iter().map(|o| o.f).collect()),
    })
}

/// Single local descent from user-supplied axes.
///
/// All `2n` angles stay free regardless of `cfg.gauge_fix`, so the polished
/// set remains anchored to the input's orientation. The result's objective
/// never exceeds the starting visibility.
pub fn polish_directions(
    f: &SteeringFunctional,
    family: &StateFamily,
    b: &DirectionSet,
    cfg: &OptimizerConfig,
) -> Result<OptimizerResult> {
    cfg.validate()?;
    if b.len() != f.n() {
        return Err(Error::LengthMismatch {
            expected: f.n(),
            got: b.len(),
        });
    }
    let state = family.state(1.0)?;
    let objective = objective_for(f, &state, Gauge::Free);
    let x0: Vec<f64> = b
        .directions()
        .iter()
        .flat_map(|d| {
            let (theta, phi) = d.to_angles();
            [theta, phi]
        })
        .collect();
    let outcome = descend_ladder(
        &objective,
        x0,
        cfg.simplex_scale,
        MIN_CYCLE_SCALE,
        cfg,
        None,
    );
    let best_dirs = directions_from_params(Gauge::Free, f.n(), &outcome.x);
    let report = evaluate(f, &best_dirs, family, Strategy::General)?;
    Ok(OptimizerResult {
        best: best_dirs,
        report,
        restarts_within_tol: 1,
        trace: None,
    })
}
