//! Construction of trajectoids: bodies that roll down a slope along a
//! prescribed periodic path.
//!
//! The pipeline is
//!
//! 1. [`path`]: a planar path given by its curvature over one period,
//! 2. [`trace`]: the contact curve on a rolling sphere of inverse radius `K`,
//! 3. [`sphere`] and [`solver`]: the scale `Q_x` at which `n` copies of the
//!    trace close up under rotations by `2π/n`,
//! 4. [`mesh`]: the convex body bounded by the tangent planes along the closed
//!    curve, exported as STL or OBJ.

pub mod corpus;
pub mod hull;
pub mod mesh;
pub mod path;
pub mod solver;
pub mod sphere;
pub mod svg;
pub mod trace;
pub mod verify;

pub use path::{path_from_curvature, path_from_polyline, resample, PathError, PathOptions, PathSpec, PlanarPath};
pub use solver::{solve, SolveError, SolveResult, SolverConfig};
pub use sphere::{Apex, GeometryError};
pub use mesh::{assemble_closed_curve, build_mesh, ClosedSphericalCurve, MeshError, MeshFormat, TrajectoidMesh};
pub use trace::{net_rotation, trace, SphericalTrace, TraceError, TraceOptions};
pub use verify::{verify, VerificationReport, VerifyOptions};
