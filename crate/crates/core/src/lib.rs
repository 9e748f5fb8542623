pub mod cuspidal;
pub mod error;
pub mod foliation;
pub mod formparse;
pub mod newton;
pub mod numfield;
pub mod polyring;
pub mod reduction;

pub use error::{Error, Result};
