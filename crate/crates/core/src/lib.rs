#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod deviation;
pub mod directions;
pub mod error;
pub mod fields;
pub mod forms;
pub mod frames;
pub mod jets;
pub mod linalg;
pub mod oracle;
pub mod surface;
pub mod vector;

pub use error::{Error, Result};
pub use jets::Jet3;
pub use vector::Vector;
