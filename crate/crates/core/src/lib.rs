//! Exact dynamics of piecewise-linear graph maps on the hyperspace of
//! subcontinua.
//!
//! All geometry is computed over arbitrary-precision rationals: points on
//! unit-edge graphs ([`metric_graph`]), continuous piecewise-linear maps
//! ([`pl_map`]), subcontinua with the Hausdorff metric ([`hyperspace`]),
//! orbit classification of continua under the induced map ([`dynamics`]),
//! and brute-force checkers for structural properties of tree maps
//! ([`checkers`]).

pub mod catalog;
pub mod checkers;
pub mod dynamics;
pub mod error;
pub mod formats;
pub mod hyperspace;
pub mod metric_graph;
pub mod pl_map;
pub mod rational;

pub use error::{Error, Result};
pub use hyperspace::{Continuum, Interval};
pub use metric_graph::{EdgeId, Graph, Point, VertexId};
pub use pl_map::PLMap;
pub use rational::Rational;
