//! Structure learning for high-dimensional undirected graphical models.
//!
//! The crate selects graphical models over discrete, continuous, and mixed
//! datasets in two stages:
//!
//! - [`search::min_forest`] finds the spanning forest minimising LR, AIC, BIC
//!   or a user-supplied edge score (Chow-Liu style, with forbidden-path
//!   control for mixed data).
//! - [`search::stepw`] grows a decomposable model by forward selection over
//!   add-eligible edges.
//!
//! Alongside the searches it offers the chordal machinery they rely on
//! ([`chordal`]), likelihood evaluation for multinomial, Gaussian and
//! conditional Gaussian decomposable models ([`stats`]), and plumbing for
//! CSV ingestion, simulation, layout and export.
//!
//! Vertices are numbered from 1 in every public interface.
//!
//! ```
//! use hdgm::{chordal, GraphModel};
//!
//! let g = GraphModel::from_edges(5, &[(1, 2), (1, 3), (2, 3), (3, 4), (3, 5), (4, 5)]).unwrap();
//! let seq = chordal::perf_sets(&g, false).unwrap().expect("triangulated");
//! assert_eq!(seq.cliques, vec![vec![1, 2, 3], vec![3, 4, 5]]);
//! ```

#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod chordal;
pub mod data;
mod error;
pub mod export;
pub mod graph;
pub mod ingest;
pub mod layout;
mod linalg;
mod parallel;
pub mod report;
pub mod search;
pub mod simulate;
pub mod stats;
mod union_find;

pub use data::{Column, Dataset};
pub use error::{Error, Result};
pub use graph::{Edge, GraphModel, MeasureKind};
pub use search::{as_graphd, min_forest, stepw, MAX_VARIABLES};
pub use stats::{fit, FitResult, Measure};
