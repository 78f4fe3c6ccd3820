//! Exact and numerical reference values.

pub mod bounds;
pub mod escape;
pub mod excursion;
pub mod green;
pub mod quadrature;
pub mod renewal;
pub mod returns;

pub use bounds::{BoundCheck, Estimate, Verdict};
pub use escape::{escape_constants, green_total, EscapeConstants};
pub use excursion::{excursion_mgf_at_zstar, ExcursionLaw};
pub use green::{
    green_truncated, hit_before_return, potential_kernel, potential_tables, HitEstimate,
    PotentialTables,
};
pub use renewal::renewal_xi_law;
pub use returns::{first_return_law, return_prob, ReturnLaw};
