//! Interchange documents, module expressions and command reports.

pub mod commands;
pub mod doc;
pub mod expr;

pub use commands::{
    cmd_catalog_entry, cmd_catalog_list, cmd_cohomology, cmd_extract, cmd_lemmas, cmd_reconstruct, cmd_verify,
    error_exit_code, CommandOutput, Format, RunManifest, Status, DEFAULT_SEED, ENGINE_VERSION,
};
pub use doc::{input_from_json, load_input, payload_to_json, AlgebraDoc, Input, IsotropyDoc};
pub use expr::ModuleExpr;
