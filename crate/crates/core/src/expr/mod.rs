//! System text format, expression trees and their interval extensions.

mod extensions;
mod flat;
mod parse;
mod system;
mod tree;

pub use extensions::{eval_horner, eval_mean_value, ExtensionError, Polynomial};
pub use flat::{Expression, Node, Op};
pub use parse::{parse_system, ParseError};
pub use system::{Constraint, Relation, System};
pub use tree::{fmt_f64, Expr, ExprDisplay, Func};

pub(crate) use flat::pow_forward;
