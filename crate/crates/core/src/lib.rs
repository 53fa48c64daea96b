//! Conditional Markov Chain Search for the Generalised Travelling Salesman
//! Problem, aimed at warehouse order picking.
//!
//! - [`instance`] and [`solution`]: problem data and the linked-list tour with
//!   O(1) move evaluation.
//! - [`gen`] and [`gtsplib`]: warehouse instance generator, testbeds and the
//!   GTSP library file format.
//! - [`components`]: CO, IHC, OM and VM.
//! - [`cmcs`]: configurations and the executor.
//! - [`trainer`]: enumeration, evaluation and selection of configurations.
//! - [`oracle`]: exhaustive solvers for small instances.
//! - [`harness`] and [`verify`]: benchmark tables and self-checks.

pub mod cmcs;
pub mod components;
pub mod error;
pub mod gen;
pub mod gtsplib;
pub mod harness;
pub mod instance;
pub mod oracle;
pub mod seed;
pub mod solution;
pub mod trainer;
pub mod verify;

pub use cmcs::{conf1, conf2, Budget, Configuration, RunResult, Transition};
pub use components::{ComponentKind, ComponentOutcome};
pub use error::{
    ConfigError, FormatError, GenError, InstanceError, OracleError, SolutionError, Violation,
};
pub use gen::{GeneratorParams, TestbedKind, TestbedSpec};
pub use instance::{manhattan_distance, EdgeWeightType, Instance, Point};
pub use solution::Solution;
