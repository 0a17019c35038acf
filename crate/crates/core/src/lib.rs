//! Exact solver for the forced traveling salesman problem on multigraphs of
//! maximum degree 3.
//!
//! An instance is a multigraph with exact rational edge weights and a set of
//! forced edges that every tour must use. The solver reduces the instance
//! with polynomial-time rules, then branches on circuits of its unforced
//! subgraph. A measure over vertices and unforced components can be tracked
//! along the search to check the running-time analysis empirically.
//!
//! ```
//! use cubic_tsp::toolkit::{named, Named};
//! use cubic_tsp::search::solve;
//!
//! let k33 = named(Named::K33);
//! let tour = solve(&k33).unwrap();
//! assert_eq!(tour.cost().unwrap().to_string(), "6");
//! ```

pub mod analysis;
pub mod connectivity;
pub mod error;
pub mod graph;
pub mod log;
pub mod reductions;
pub mod search;
pub mod toolkit;

pub use error::{Error, Result};
pub use graph::{Edge, EdgeId, Instance, Multigraph, Sign, VertexId, Weight};
pub use log::{LogEntry, ReductionLog};
pub use search::{solve, solve_with, SolveOptions, Strategy, TourResult};
