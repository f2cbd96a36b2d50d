//! Minimum clique partition of unit disk graphs.
//!
//! Exact subset DP for small instances, exact strip solving, randomly shifted
//! strips (3-approximation and the `1 + 2/√3 + ε` scheme), a shifted-grid
//! approximation scheme, and an uncrossing procedure producing partitions
//! with pairwise non-overlapping convex hulls.

pub mod exact;
pub mod geometry;
pub mod graph;
pub mod grid;
pub mod harness;
pub mod rng;
pub mod strip;
pub mod strips;
pub mod uncross;
pub mod width;

pub use exact::{exact_mcp, exact_mcp_count, exact_mcp_with_limit, ExactError};
pub use geometry::{convex_hull, ConvexPolygon, GeometryError, Point};
pub use graph::{
    build_graph, is_clique, validate_partition, CliquePartition, GraphError, PointSet,
    UnitDiskGraph, Violation,
};
pub use grid::{ptas_solve, CellSolver, GridError, PtasConfig};
pub use strip::{solve_strip, StripError, StripInstance, SQRT3_HALF};
pub use strips::{
    deterministic_3approx, one_round, randomized_solve, RandomizedConfig, StripWidth, StripsError,
    Variant, XI,
};
pub use uncross::{psi, uncross_partition, UncrossError, UncrossOutcome};
pub use width::{select_width, xi_convergent, xi_convergents, Convergent, RationalWidth};
