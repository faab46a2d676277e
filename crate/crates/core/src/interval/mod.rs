//! Outward-rounded interval arithmetic: scalars, boxes and interval matrices.

mod boxes;
mod elem;
mod matrix;
mod round;
mod scalar;

pub use boxes::IntervalBox;
pub use elem::{HALF_PI_IV, PI_IV, TWO_PI_IV};
pub use matrix::IntervalMatrix;
pub use scalar::{extended_divide, ExtendedQuotient, Interval};


/// Raised when a width or midpoint is requested of an interval that has none.
#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
pub enum IntervalError {
    #[error("operation undefined on the empty interval")]
    Empty,
    #[error("operation needs a bounded interval; bound the domain first")]
    Unbounded,
}
