//! Exact-arithmetic engine for inflation tilings of the plane.

pub mod analysis;
pub mod engine;
pub mod geom;
pub mod rules;
pub mod space;
