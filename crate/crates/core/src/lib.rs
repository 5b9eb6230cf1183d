//! Solomon elements and ideals of real abelian fields in which a prime `p`
//! splits totally, together with the numerical checks built on them:
//! class-group annihilation, the index of the Solomon ideal, the
//! character/L-value identity, and the Greenberg criterion arithmetic.

pub mod cyclo;
pub mod error;
pub mod fields;
pub mod groupring;
pub mod solomon;
pub mod padic;
pub mod regulators;
pub mod report;
pub mod classgrp;
pub mod verify;

pub use error::{Error, Result};
