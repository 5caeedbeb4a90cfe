//! Local-hidden-state (LHS) bounds, quantum values, and noise-visibility
//! thresholds for linear and chained steering functionals on two-qubit states.
//!
//! The crate is organized around one pipeline:
//!
//! 1. [`states`]: two-qubit states in Bloch/correlation form (Werner and
//!    generalized Werner families).
//! 2. [`functionals`]: the two functional families and exact LHS bounds over
//!    all deterministic sign assignments.
//! 3. [`quantum`]: quantum values for a fixed state and direction set, and the
//!    visibility `V = C / Q`.
//! 4. [`optimizer`]: multi-start derivative-free search over Bob's directions
//!    minimizing the visibility.
//! 5. [`scan`]: sweeps over the entanglement angle, violation-threshold angles,
//!    and linear/chained crossover angles.
//!
//! [`presets`] pins the direction sets used as regression anchors. Every
//! numerical routine has an independent oracle counterpart used by the test
//! suite (`lhs_bound_oracle`, `quantum_value_oracle`, `bloch_from_density`).

pub mod error;
pub mod functionals;
pub mod optimizer;
pub mod presets;
pub mod quantum;
pub mod scan;
pub mod states;

pub use error::{Error, Result};
pub use functionals::{DirectionSet, Family, SignAssignment, SteeringFunctional};
pub use optimizer::{OptimizerConfig, OptimizerResult};
pub use quantum::{EvalReport, Strategy};
pub use scan::{ScanResult, ScanRow};
pub use states::{FamilyKind, StateFamily, TwoQubitState, UnitVector3};
