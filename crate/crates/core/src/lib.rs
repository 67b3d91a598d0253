#![no_std]
//! Exact computations with preprojective algebras of type A over a base
//! algebra: their module categories, the six gluing functors, the
//! period-four adjoint cycle, perfect complexes, and a rule engine that
//! derives ladder heights from facts about recollements.

extern crate alloc;

pub mod error;
pub mod algcore;
pub mod category;
pub mod exactlin;
pub mod laddercalc;
pub mod perfcx;
pub mod pimod;
pub mod recfun;
pub mod report;
pub mod rng;

pub use error::{Error, Result};
