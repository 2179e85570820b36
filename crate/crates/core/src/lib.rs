//! Orthogonal polynomials for the Gaussian weight with two jump
//! discontinuities, the coupled Painlevé IV system they generate at finite
//! degree, the coupled Painlevé II system governing the edge limit, and
//! random-matrix oracles used to validate the limit laws.

pub mod airy;
pub mod cpii;
pub mod cpiv;
pub mod error;
pub mod op_engine;
pub mod quadrature;
pub mod rmt;
pub mod table;

pub use airy::{airy_ai, AiryValue};
pub use error::{Error, Result};
pub use cpii::{CpiiParams, CpiiTrajectory};
pub use cpiv::CpivState;
pub use op_engine::{JumpWeightSpec, QuadratureGrid, RecurrenceTable};
pub use rmt::{FredholmEstimate, MCEstimate, SpectrumSample};
pub use table::Table;
