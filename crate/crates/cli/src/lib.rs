//! The `cdsite` command-line tool: parses `.site` files describing a
//! finite category with a cd-structure (plus optional density,
//! presheaf and chunky data) and runs verification commands against
//! them.

pub mod bundled;
pub mod commands;
pub mod format;
pub mod report;

pub use commands::{run, CheckKind, Command, Options};
pub use format::{parse, serialize, SiteDocument};
pub use report::{Check, Report, Status};
