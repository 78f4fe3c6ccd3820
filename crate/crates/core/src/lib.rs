pub mod cauchy;
pub mod error;
pub mod excursions;
pub mod experiments;
pub mod local_time;
pub mod oracles;
pub mod projections;
pub mod stats;
pub mod subsets;
pub mod walk;

pub use error::{Error, Result};
pub use local_time::LocalTimeLedger;
pub use subsets::SubsetSpec;
pub use walk::{LatticeSite, Step, StepLaw, WalkPath};
