//! Extended reals, points, compact domains, objectives and sample clouds.

mod cloud;
mod domain;
mod ext_real;
mod objective;
mod point;

pub use cloud::{fmt_num, SampleCloud, DUPLICATE_TOL};
pub use domain::{Domain, DomainKind, DEFAULT_MEMBERSHIP_TOL};
pub use ext_real::ExtReal;
pub use objective::{EvalFn, Objective, SubgradientFn};
pub use point::Point;
