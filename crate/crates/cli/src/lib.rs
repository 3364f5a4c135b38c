//! Power sweeps, caching, CSV/SVG export and the verification suite for the
//! `fibercap` command line tool.

pub mod cache;
pub mod checks;
pub mod config;
pub mod curve;
pub mod model;
pub mod svg;
pub mod sweep;
pub mod verify;

pub use cache::Cache;
pub use config::{ConfigFile, SweepConfig};
pub use curve::{BoundCurve, Row};
pub use model::Model;
pub use sweep::run_sweep;
