//! A small zoo of bodies and measures used by the examples and the test
//! suites.

use crate::bodies::{SampledSupport, SupportFunction};
use crate::disk_forward::forward;
use crate::error::Result;
use crate::measures::DisintegratedMeasure;
use crate::sphere_geom::ProductGrid;

pub fn unit_ball(dim: usize) -> SupportFunction {
    SupportFunction::Ball {
        radius: 1.0,
        center: vec![0.0; dim],
    }
}

pub fn ball(radius: f64, center: Vec<f64>) -> SupportFunction {
    SupportFunction::Ball { radius, center }
}

/// The standard off-center test ball.
pub fn translated_unit_ball() -> SupportFunction {
    ball(1.0, vec![0.3, -0.2, 0.7])
}

pub fn ellipsoid_112() -> SupportFunction {
    SupportFunction::Ellipsoid {
        semi_axes: vec![1.0, 1.0, 2.0],
        center: vec![0.0; 3],
    }
}

/// The cube `[-half, half]^3`.
pub fn cube(half: f64) -> SupportFunction {
    let mut vertices = Vec::with_capacity(8);
    for &x in &[-half, half] {
        for &y in &[-half, half] {
            for &z in &[-half, half] {
                vertices.push(vec![x, y, z]);
            }
        }
    }
    SupportFunction::Polytope { vertices }
}

/// Disk of radius 1 thickened by the unit axial segment: every projection
/// is the square `[-1, 1]²`, and both pole faces are unit disks.
pub fn cylinder() -> SupportFunction {
    SupportFunction::MinkowskiSum {
        parts: vec![
            SupportFunction::DiskBody { radius: 1.0, dim: 3 },
            SupportFunction::AxialSegment { half_length: 1.0, dim: 3 },
        ],
    }
}

/// Zonal profile `1 + ε P₃(cos θ)` with the degree-3 Legendre polynomial:
/// a smooth body of revolution that is not centrally symmetric and not a
/// translate of one. Convex for `ε ≤ 1/5` (both principal curvature radii
/// stay positive).
pub fn zonal_p3_profile(eps: f64) -> impl Fn(f64) -> f64 {
    move |theta: f64| {
        let t = theta.cos();
        1.0 + eps * 0.5 * (5.0 * t * t * t - 3.0 * t)
    }
}

/// The zonal body sampled on a product grid.
pub fn zonal_p3(eps: f64, grid: &ProductGrid) -> Result<SupportFunction> {
    let profile = zonal_p3_profile(eps);
    let sampled = SampledSupport::from_fn(grid.clone(), |u| {
        profile(crate::sphere_geom::polar_angle(u))
    })?;
    Ok(SupportFunction::Sampled(sampled))
}

/// Fibers taken alternately from the forward families of the unit ball and
/// of the 1:1:2 ellipsoid: per plane each fiber is a perfectly valid planar
/// measure, but the pushforward jumps and the axial widths disagree (2
/// versus 4), so the family is not the forward measure of any body.
pub fn spliced_ball_ellipsoid(grid: &ProductGrid) -> Result<DisintegratedMeasure> {
    let a = forward(&unit_ball(3), grid)?;
    let b = forward(&ellipsoid_112(), grid)?;
    let fibers = a
        .family
        .fibers()
        .iter()
        .zip(b.family.fibers())
        .enumerate()
        .map(|(j, (fa, fb))| if j % 2 == 0 { fa.clone() } else { fb.clone() })
        .collect();
    DisintegratedMeasure::new(grid.plane_grid().clone(), fibers)
}
