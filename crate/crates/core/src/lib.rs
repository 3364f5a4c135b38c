pub mod error;
pub mod lpc;
pub mod mathkit;
pub mod mnc;
pub mod par;
pub mod params;
pub mod rpc;

pub use error::{Error, Result};
pub use params::{derive_discrete, DiscreteChannelParams, PhysicalParams};
