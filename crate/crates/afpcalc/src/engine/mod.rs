//! The rewrite engine: dispatch, rewrite routes, certificates, locators.

pub mod certificate;
pub mod closed_form;
pub mod dispatch;
pub mod locator;
pub mod peel;
pub mod problem;
pub mod recursion;
pub mod report;
pub mod scalars;
pub mod strip;

pub use certificate::{verify_certificate, CertRule, CertStep};
pub use closed_form::single_factor_closed_form;
pub use dispatch::{amalgamated_free_product, compute, free_product_over_scalars};
pub use locator::{Locator, TrackedId};
pub use problem::Problem;
pub use recursion::single_factor_recursion;
pub use report::{OutputPart, ResultReport, Status};
pub use strip::tensor_strip;
