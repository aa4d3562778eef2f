//! Concrete actions and slices.

pub mod classify;
pub mod grassmann;
pub mod kontsevich;
pub mod ordered_points;
