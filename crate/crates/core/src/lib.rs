//! Forward and inverse solvers for the first-order area measure of a convex
//! body taken with a disk reference body.
//!
//! For a convex body `K ⊂ R^n` and the unit disk `D = B^n ∩ e_n^⊥`, the
//! measure `S₁(K, D; ·)` on the unit sphere localizes the mixed volume
//! `V(·, K, D^{[n-2]})`. This crate computes it (the *forward* problem) and
//! reconstructs `K` up to translation from a given measure (the *inverse*
//! problem), or produces a quantitative certificate that no body exists.
//!
//! The structure mirrors the mathematics:
//!
//! - [`sphere_geom`]: directions, axial planes, circle and plane grids, and
//!   the cylinder-coordinate quadrature that underlies every integral here.
//! - [`bodies`]: support-function representations, projections onto axial
//!   planes, Steiner points, pole faces, and the convexity battery.
//! - [`measures`]: circle measures, sphere densities, the plane-indexed
//!   disintegration, and the solvability condition checks.
//! - [`christoffel2d`]: the complete planar solver (forward measures of
//!   smooth bodies and polygons, inversion through the planar kernel).
//! - [`disk_forward`]: `K ↦ S₁(K, D; ·)` as a plane-indexed family, with
//!   pole-mass accounting and independent mixed-volume oracles.
//! - [`inverse_solver`]: condition verification, per-plane inversion, pole
//!   consistency, convexity of the assembled candidate, and certificates.
//! - [`io`] and [`cli`]: text formats and the command-line workflows.
//!
//! See the `examples/` directory for one runnable program per capability.

pub mod bodies;
pub mod christoffel2d;
pub mod cli;
pub mod disk_forward;
pub mod error;
pub mod inverse_solver;
pub mod io;
pub mod measures;
pub mod sphere_geom;
pub mod zoo;

pub use bodies::{
    check_support_function, planar_v1, pole_faces, project, steiner_point, ConvexityReport,
    PlanarBody, SampledSupport, SupportFunction,
};
pub use christoffel2d::{berg_invert, forward_polygon, forward_smooth, steiner_2d, BergKernel};
pub use disk_forward::{
    forward, forward_density, mixed_volume_oracle, pair_mixed_volume, pole_mass, ForwardResult,
    PoleMass,
};
pub use error::{Error, Result};
pub use inverse_solver::{
    invert, invert_density, invert_even, invert_with_poles, uniqueness_check, Certificate,
    ConditionId, SolveReport, SolveTolerances, UniquenessReport, Verdict,
};
pub use measures::{
    check_conditions, density_to_family, family_to_density, Atom, CircleMeasure, ConditionReport,
    DisintegratedMeasure, SphereDensity,
};
pub use sphere_geom::{
    embed, integrate_circle, integrate_grassmannian, integrate_sphere_cylindrical, plane_of,
    polar_angle, AxialPlane, CircleGrid, DimensionConstants, PlaneGrid, ProductGrid, UnitVector,
};
