//! Check registry and suite runner.

pub mod checks;
pub mod ids;
pub mod registry;
pub mod suite;

pub use registry::{all_ids, resolve_filter, CheckEntry, REGISTRY};
pub use suite::{default_corpus, run_suite, CorpusEntry, SuiteConfig, SuiteResult};
