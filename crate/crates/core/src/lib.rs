//! Analysis of mass-action reaction networks: structure, steady states, absolute
//! concentration robustness, and exhaustive audits over small networks.

pub mod acr;
pub mod atlas;
pub mod dsl;
pub mod error;
pub mod families;
pub mod linalg;
pub mod massaction;
pub mod network;
pub mod par;
pub mod poly;
pub mod rational;
pub mod realize;
pub mod steady;
pub mod structural;
