//! Spiral and ring partition detection for finite patches of plane tilings.

pub mod classify;
pub mod corpus;
pub mod detect;
pub mod geometry;
pub mod patch;
pub mod thread;
