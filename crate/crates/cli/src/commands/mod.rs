pub mod classify;
pub mod cohort;
pub mod infer;
pub mod simulate;
pub mod verify;

pub use classify::run_classify;
pub use cohort::{make_cohort, write_cohort, CohortSpec};
pub use infer::run_infer;
pub use simulate::{run_simulate, SimulateRequest};
pub use verify::{run_checks, VerifyOptions};
