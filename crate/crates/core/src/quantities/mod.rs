//! Derived functionals of finite sets.

pub mod checks;
pub mod doubling;
pub mod magnification;
pub mod solymosi;
pub mod szt;

pub use checks::{
    d_product_bound_check, katz_koester_check, katz_koester_sweep, petridis_check,
    ruzsa_triangle_check,
};
pub use doubling::{d_upper, doubling_quotient, CandidateFamily, DoublingWitness, FiberChoice};
pub use magnification::{magnification_ratio, MagnificationResult, DEFAULT_SUBSET_CAP};
pub use solymosi::{
    solymosi_chain, solymosi_pair_chain, tau_popularity_count, ChainMode, ChainOutcome,
    SlopeFilter, TauCount,
};
pub use szt::{szt_constant_report, szt_level_sets, SzTConstantReport, SzTReport};
