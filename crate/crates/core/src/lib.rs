//! Constant-depth quantum circuits built from unbounded fan-out gates:
//! circuit IR, exact simulation, circuit families, a small discrete-log
//! pipeline and exhaustive verification.

pub mod angle;
pub mod builders;
pub mod circuit;
pub mod dlp;
pub mod error;
pub mod oracle;
pub mod sim;
pub mod verify;

pub use angle::PhaseAngle;
pub use circuit::{Circuit, CircuitBuilder, CircuitMetrics, Gate, GateKind};
pub use error::{Error, Result};
pub use oracle::{OracleAction, OracleResolver, OracleSpec};
