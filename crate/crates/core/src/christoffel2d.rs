//! The complete planar solver: forward first-order area measures of 2D
//! bodies and their inversion through the planar kernel
//! `g(t) = √(1-t²)(π - arccos t) + c·t`.
//!
//! Angles follow the chart of the measure's grid: `u(θ) = (cos θ, sin θ)`
//! in the plane's basis. For a smooth body the measure has density
//! `h'' + h`; for a polygon it is a sum of atoms (outer normal angle, edge
//! length).
//!
//! The kernel normalization is fixed to `1/(2π)` by the calibration
//! identity: inverting the uniform measure `dθ` must return the constant 1
//! (the support function of the unit disk). The linear coefficient `c`
//! defaults to 0 because inputs are required to be centered, and for a
//! centered measure the `c`-term integrates to zero.

use std::f64::consts::{PI, TAU};

use crate::error::{Error, Result};
use crate::measures::{Atom, CircleMeasure};
use crate::sphere_geom::CircleGrid;

/// Inputs to inversion must satisfy `|first moment| <= 1e-8 · mass`.
pub const CENTERING_REL_TOL: f64 = 1e-8;

/// The planar inversion kernel.
#[derive(Debug, Clone, Copy)]
pub struct BergKernel {
    pub normalization: f64,
    pub c_coefficient: f64,
}

impl Default for BergKernel {
    fn default() -> Self {
        Self {
            normalization: 1.0 / TAU,
            c_coefficient: 0.0,
        }
    }
}

impl BergKernel {
    /// `g(t) = √(1-t²)(π - arccos t) + c·t`, with `t` clamped to `[-1, 1]`
    /// since dot products of unit vectors can exceed 1 by ulps.
    pub fn eval(&self, t: f64) -> f64 {
        let t = t.clamp(-1.0, 1.0);
        (1.0 - t * t).max(0.0).sqrt() * (PI - t.acos()) + self.c_coefficient * t
    }

    /// Sup distance of `invert(uniform dθ)` from the constant 1 at `m`
    /// samples; the calibration identity of the normalization.
    pub fn calibration_residual(&self, m: usize) -> f64 {
        let grid = CircleGrid::new(crate::sphere_geom::AxialPlane::planar(), m)
            .expect("calibration grid");
        let mu = CircleMeasure::from_density(grid, vec![1.0; m]).expect("uniform measure");
        let h = berg_invert(&mu, self).expect("uniform measure is centered");
        h.iter().map(|v| (v - 1.0).abs()).fold(0.0, f64::max)
    }
}

/// Forward measure of a smooth planar body from support samples: density
/// `h'' + h` via periodic central second differences.
///
/// Fails with [`Error::NegativeCurvature`] when the density dips below
/// `-tol` (the samples are not a support function); values in `[-tol, 0)`
/// are clamped to zero. The default tolerance is `10 · (2π/m)² · max|h|`.
pub fn forward_smooth(grid: &CircleGrid, h: &[f64], tol: Option<f64>) -> Result<CircleMeasure> {
    let m = grid.len();
    if m < 16 {
        return Err(Error::InvalidGrid(format!(
            "forward differencing needs at least 16 samples, got {m}"
        )));
    }
    if h.len() != m {
        return Err(Error::InvalidGrid("sample count mismatch".into()));
    }
    let step = grid.step();
    let max_abs = h.iter().fold(0.0f64, |a, v| a.max(v.abs()));
    let tol = tol.unwrap_or(10.0 * step * step * max_abs);
    let inv_h2 = 1.0 / (step * step);
    let mut density = Vec::with_capacity(m);
    for k in 0..m {
        let prev = h[(k + m - 1) % m];
        let next = h[(k + 1) % m];
        let d = (prev - 2.0 * h[k] + next) * inv_h2 + h[k];
        if d < -tol {
            return Err(Error::NegativeCurvature {
                angle: grid.angle(k),
                value: d,
                tol,
            });
        }
        density.push(d.max(0.0));
    }
    CircleMeasure::from_density(grid.clone(), density)
}

/// Forward measure of a convex polygon: one atom per edge at the outer
/// normal angle with mass equal to the edge length. A segment yields two
/// atoms of mass equal to its length at the two normals. Vertices may be
/// listed in either orientation.
pub fn forward_polygon(grid: &CircleGrid, vertices: &[[f64; 2]]) -> Result<CircleMeasure> {
    let scale = vertices
        .iter()
        .flat_map(|v| v.iter())
        .fold(1.0f64, |a, x| a.max(x.abs()));
    let eps = 1e-12 * scale;

    // Drop consecutive duplicates (closed loop).
    let mut pts: Vec<[f64; 2]> = Vec::with_capacity(vertices.len());
    for &v in vertices {
        if pts
            .last()
            .is_none_or(|p| (p[0] - v[0]).abs() > eps || (p[1] - v[1]).abs() > eps)
        {
            pts.push(v);
        }
    }
    while pts.len() > 1 {
        let first = pts[0];
        let last = *pts.last().unwrap();
        if (first[0] - last[0]).abs() <= eps && (first[1] - last[1]).abs() <= eps {
            pts.pop();
        } else {
            break;
        }
    }
    if pts.len() < 2 {
        return Err(Error::DegenerateInput);
    }
    if pts.len() == 2 {
        return segment_atoms(grid, pts[0], pts[1]);
    }

    let area2: f64 = pts
        .iter()
        .zip(pts.iter().cycle().skip(1))
        .map(|(a, b)| a[0] * b[1] - b[0] * a[1])
        .sum();
    if area2.abs() <= eps * scale {
        // Collinear: collapse to the extreme points of the segment.
        let dir = [pts[1][0] - pts[0][0], pts[1][1] - pts[0][1]];
        let proj = |p: &[f64; 2]| p[0] * dir[0] + p[1] * dir[1];
        let lo = pts
            .iter()
            .min_by(|a, b| proj(a).partial_cmp(&proj(b)).unwrap())
            .unwrap();
        let hi = pts
            .iter()
            .max_by(|a, b| proj(a).partial_cmp(&proj(b)).unwrap())
            .unwrap();
        return segment_atoms(grid, *lo, *hi);
    }
    if area2 < 0.0 {
        pts.reverse();
    }

    let mut atoms = Vec::with_capacity(pts.len());
    for i in 0..pts.len() {
        let a = pts[i];
        let b = pts[(i + 1) % pts.len()];
        let e = [b[0] - a[0], b[1] - a[1]];
        let len = (e[0] * e[0] + e[1] * e[1]).sqrt();
        if len <= eps {
            continue;
        }
        // Outer normal of a counterclockwise edge.
        let angle = (-e[0]).atan2(e[1]);
        atoms.push(Atom { angle, mass: len });
    }
    CircleMeasure::with_atoms(grid.clone(), vec![0.0; grid.len()], atoms)
}

fn segment_atoms(grid: &CircleGrid, a: [f64; 2], b: [f64; 2]) -> Result<CircleMeasure> {
    let e = [b[0] - a[0], b[1] - a[1]];
    let len = (e[0] * e[0] + e[1] * e[1]).sqrt();
    let angle = (-e[0]).atan2(e[1]);
    let atoms = vec![
        Atom { angle, mass: len },
        Atom {
            angle: angle + PI,
            mass: len,
        },
    ];
    CircleMeasure::with_atoms(grid.clone(), vec![0.0; grid.len()], atoms)
}

/// Inverts a centered circle measure: support samples on the measure's grid
/// of the body (centered at its Steiner point) whose forward measure is μ.
///
/// The density part is integrated by the rectangle rule using a precomputed
/// kernel table over angle differences (the grid is uniform); atoms are
/// summed exactly. The output's Steiner linear part is removed in closed
/// form: the kernel's Steiner contribution is `normalization·(1/2 + c)`
/// times the first moment of the measure, so no extra quadrature enters and
/// the inversion is exactly linear and rotation equivariant.
pub fn berg_invert(mu: &CircleMeasure, kernel: &BergKernel) -> Result<Vec<f64>> {
    check_centered(mu)?;
    Ok(invert_values(mu, kernel, mu.grid().angles()))
}

/// Inversion evaluated at arbitrary query angles (same centering contract
/// as [`berg_invert`]).
pub fn berg_invert_at(mu: &CircleMeasure, kernel: &BergKernel, angles: &[f64]) -> Result<Vec<f64>> {
    check_centered(mu)?;
    Ok(invert_values(mu, kernel, angles))
}

fn check_centered(mu: &CircleMeasure) -> Result<()> {
    let mass = mu.total_mass();
    let m = mu.first_moment();
    let norm = (m[0] * m[0] + m[1] * m[1]).sqrt();
    let limit = CENTERING_REL_TOL * mass;
    if mass > 0.0 && norm > limit {
        return Err(Error::NotCentered {
            moment: norm,
            limit,
        });
    }
    Ok(())
}

fn invert_values(mu: &CircleMeasure, kernel: &BergKernel, angles: &[f64]) -> Vec<f64> {
    let raw = raw_invert_values(mu, kernel, angles);
    let fm = mu.first_moment();
    let c = kernel.normalization * (0.5 + kernel.c_coefficient);
    let s = [c * fm[0], c * fm[1]];
    raw.iter()
        .zip(angles)
        .map(|(v, t)| v - s[0] * t.cos() - s[1] * t.sin())
        .collect()
}

fn raw_invert_values(mu: &CircleMeasure, kernel: &BergKernel, angles: &[f64]) -> Vec<f64> {
    let grid = mu.grid();
    let m = grid.len();
    let step = grid.step();
    let norm = kernel.normalization;

    let on_grid = std::ptr::eq(angles, grid.angles())
        || (angles.len() == m
            && angles
                .iter()
                .zip(grid.angles())
                .all(|(a, b)| a == b));

    let mut out = vec![0.0; angles.len()];
    let has_density = mu.density().iter().any(|d| *d != 0.0);
    if has_density {
        if on_grid {
            // Angle differences are exact multiples of the step.
            let table: Vec<f64> = (0..m)
                .map(|d| kernel.eval((d as f64 * step).cos()))
                .collect();
            for (i, o) in out.iter_mut().enumerate() {
                let mut acc = 0.0;
                for (k, dens) in mu.density().iter().enumerate() {
                    let d = (i + m - k) % m;
                    acc += table[d] * dens;
                }
                *o += norm * step * acc;
            }
        } else {
            for (i, &t) in angles.iter().enumerate() {
                let mut acc = 0.0;
                for (k, dens) in mu.density().iter().enumerate() {
                    acc += kernel.eval((t - grid.angle(k)).cos()) * dens;
                }
                out[i] += norm * step * acc;
            }
        }
    }
    for (i, &t) in angles.iter().enumerate() {
        let mut acc = 0.0;
        for a in mu.atoms() {
            acc += kernel.eval((t - a.angle).cos()) * a.mass;
        }
        out[i] += norm * acc;
    }
    out
}

/// Discrete Steiner point `(1/π) ∫ h(θ) (cos θ, sin θ) dθ` of support
/// samples.
pub fn steiner_2d(grid: &CircleGrid, h: &[f64]) -> [f64; 2] {
    assert_eq!(h.len(), grid.len());
    let step = grid.step();
    let mut sx = 0.0;
    let mut sy = 0.0;
    for (v, t) in h.iter().zip(grid.angles()) {
        sx += v * t.cos();
        sy += v * t.sin();
    }
    [sx * step / PI, sy * step / PI]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sphere_geom::AxialPlane;
    use approx::assert_abs_diff_eq;

    fn grid(m: usize) -> CircleGrid {
        CircleGrid::new(AxialPlane::planar(), m).unwrap()
    }

    fn ellipse_support(a: f64, b: f64, t: f64) -> f64 {
        (a * a * t.cos().powi(2) + b * b * t.sin().powi(2)).sqrt()
    }

    #[test]
    fn kernel_symmetrization_identity() {
        // g(t) + g(-t) = π √(1-t²) via arccos(t) + arccos(-t) = π.
        let k = BergKernel::default();
        for &t in &[-0.99, -0.5, 0.0, 0.3, 0.999] {
            assert_abs_diff_eq!(
                k.eval(t) + k.eval(-t),
                PI * (1.0 - t * t).sqrt(),
                epsilon = 1e-14
            );
        }
    }

    #[test]
    fn kernel_integral_oracle() {
        // ∫_0^{2π} g(cos ψ) dψ = 2π, checked by an independent fine
        // trapezoid rule; this is what pins the normalization 1/(2π).
        let k = BergKernel::default();
        let n = 1 << 16;
        let step = TAU / n as f64;
        let integral: f64 = (0..n)
            .map(|i| k.eval(((i as f64 + 0.5) * step).cos()))
            .sum::<f64>()
            * step;
        assert_abs_diff_eq!(integral, TAU, epsilon = 1e-7);
        assert!(k.calibration_residual(512) < 1e-4);
    }

    #[test]
    fn forward_smooth_examples() {
        let g = grid(512);
        let ones = vec![1.0; 512];
        let mu = forward_smooth(&g, &ones, None).unwrap();
        for d in mu.density() {
            assert_abs_diff_eq!(*d, 1.0, epsilon = 1e-12);
        }

        // A pure translation carries no measure (up to O(step²)).
        let trans: Vec<f64> = g.angles().iter().map(|t| 0.7 * t.cos()).collect();
        let mu = forward_smooth(&g, &trans, None).unwrap();
        let step = g.step();
        for d in mu.density() {
            assert!(d.abs() <= 0.7 * step * step);
        }

        // Ellipse: density is the radius of curvature a²b²/h³.
        let g = grid(2048);
        let h: Vec<f64> = g.angles().iter().map(|t| ellipse_support(1.0, 2.0, *t)).collect();
        let mu = forward_smooth(&g, &h, None).unwrap();
        for (k, d) in mu.density().iter().enumerate() {
            let t = g.angle(k);
            let expect = 4.0 / ellipse_support(1.0, 2.0, t).powi(3);
            assert_abs_diff_eq!(*d, expect, epsilon = 1e-4);
        }

        // Non-convex samples are rejected.
        let bad: Vec<f64> = g.angles().iter().map(|t| 1.0 + 0.9 * (3.0 * t).cos()).collect();
        assert!(matches!(
            forward_smooth(&g, &bad, None),
            Err(Error::NegativeCurvature { .. })
        ));
    }

    #[test]
    fn forward_polygon_examples() {
        let g = grid(64);

        // Segment [-e1, e1]: two atoms of mass 2 at ±e2.
        let mu = forward_polygon(&g, &[[-1.0, 0.0], [1.0, 0.0]]).unwrap();
        assert_eq!(mu.atoms().len(), 2);
        let mut angles: Vec<f64> = mu.atoms().iter().map(|a| a.angle).collect();
        angles.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert_abs_diff_eq!(angles[0], PI / 2.0, epsilon = 1e-15);
        assert_abs_diff_eq!(angles[1], 3.0 * PI / 2.0, epsilon = 1e-15);
        for a in mu.atoms() {
            assert_abs_diff_eq!(a.mass, 2.0, epsilon = 1e-15);
        }

        // Square of side s: four atoms of mass s at the axis normals.
        let s = 1.5;
        let sq = [[-s / 2.0, -s / 2.0], [s / 2.0, -s / 2.0], [s / 2.0, s / 2.0], [-s / 2.0, s / 2.0]];
        let mu = forward_polygon(&g, &sq).unwrap();
        assert_eq!(mu.atoms().len(), 4);
        assert_abs_diff_eq!(mu.total_mass(), 4.0 * s, epsilon = 1e-12);
        for a in mu.atoms() {
            assert_abs_diff_eq!(a.mass, s, epsilon = 1e-15);
            let snapped = (a.angle / (PI / 2.0)).round() * (PI / 2.0);
            assert_abs_diff_eq!(a.angle, snapped, epsilon = 1e-15);
        }

        // Triangle (0,0), (1,0), (0,1): masses 1, 1, √2.
        let mu = forward_polygon(&g, &[[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]]).unwrap();
        let mut entries: Vec<(f64, f64)> = mu.atoms().iter().map(|a| (a.angle, a.mass)).collect();
        entries.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
        assert_abs_diff_eq!(entries[0].0, PI / 4.0, epsilon = 1e-15);
        assert_abs_diff_eq!(entries[0].1, 2.0f64.sqrt(), epsilon = 1e-15);
        assert_abs_diff_eq!(entries[1].0, PI, epsilon = 1e-15); // normal -e1
        assert_abs_diff_eq!(entries[1].1, 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(entries[2].0, 3.0 * PI / 2.0, epsilon = 1e-15); // normal -e2
        assert_abs_diff_eq!(entries[2].1, 1.0, epsilon = 1e-15);

        assert!(matches!(
            forward_polygon(&g, &[[0.3, 0.4]]),
            Err(Error::DegenerateInput)
        ));
    }

    #[test]
    fn invert_uniform_measure_is_unit_disk() {
        let g = grid(512);
        let mu = CircleMeasure::from_density(g, vec![1.0; 512]).unwrap();
        let h = berg_invert(&mu, &BergKernel::default()).unwrap();
        for v in &h {
            assert_abs_diff_eq!(*v, 1.0, epsilon = 1e-4);
        }
    }

    #[test]
    fn invert_segment_closed_form() {
        let g = grid(256);
        let mu = CircleMeasure::with_atoms(
            g.clone(),
            vec![0.0; 256],
            vec![
                Atom { angle: PI / 2.0, mass: 2.0 },
                Atom { angle: 3.0 * PI / 2.0, mass: 2.0 },
            ],
        )
        .unwrap();
        let h = berg_invert(&mu, &BergKernel::default()).unwrap();
        for (k, v) in h.iter().enumerate() {
            assert_abs_diff_eq!(*v, g.angle(k).cos().abs(), epsilon = 1e-13);
        }
    }

    #[test]
    fn invert_requires_centered_input() {
        let g = grid(64);
        let mu = CircleMeasure::with_atoms(
            g,
            vec![0.0; 64],
            vec![Atom { angle: 0.4, mass: 1.0 }],
        )
        .unwrap();
        assert!(matches!(
            berg_invert(&mu, &BergKernel::default()),
            Err(Error::NotCentered { .. })
        ));
    }

    #[test]
    fn smooth_roundtrip_ellipse() {
        let g = grid(2048);
        let h_true: Vec<f64> = g.angles().iter().map(|t| ellipse_support(1.0, 2.0, *t)).collect();
        let mu = forward_smooth(&g, &h_true, None).unwrap();
        let h = berg_invert(&mu, &BergKernel::default()).unwrap();
        let sup = h
            .iter()
            .zip(&h_true)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        assert!(sup < 1e-3, "sup error {sup}");
    }

    #[test]
    fn polygon_roundtrip_recovers_centered_support() {
        let g = grid(8192);
        let tri = [[0.0, 0.0], [2.0, 0.0], [0.0, 1.0]];
        let mu = forward_polygon(&g, &tri).unwrap();
        let h = berg_invert(&mu, &BergKernel::default()).unwrap();

        // Independent Steiner point of the polygon from the normal-cone
        // decomposition of (1/π) ∫ h(θ) u(θ) dθ.
        let s = polygon_steiner_oracle(&tri);
        let support = |t: f64| -> f64 {
            tri.iter()
                .map(|v| v[0] * t.cos() + v[1] * t.sin())
                .fold(f64::NEG_INFINITY, f64::max)
        };
        let sup = h
            .iter()
            .enumerate()
            .map(|(k, v)| {
                let t = g.angle(k);
                (v - (support(t) - s[0] * t.cos() - s[1] * t.sin())).abs()
            })
            .fold(0.0, f64::max);
        assert!(sup < 1e-6, "sup error {sup}");
    }

    // Exact Steiner point of a convex polygon: on each vertex's normal cone
    // [α, β], ∫ (v·u) u dθ has a closed form.
    fn polygon_steiner_oracle(vertices: &[[f64; 2]]) -> [f64; 2] {
        let n = vertices.len();
        // Outer normal angles of the (assumed CCW) edges.
        let mut normals: Vec<f64> = Vec::with_capacity(n);
        let mut pts = vertices.to_vec();
        let area2: f64 = pts
            .iter()
            .zip(pts.iter().cycle().skip(1))
            .map(|(a, b)| a[0] * b[1] - b[0] * a[1])
            .sum();
        if area2 < 0.0 {
            pts.reverse();
        }
        for i in 0..n {
            let a = pts[i];
            let b = pts[(i + 1) % n];
            let e = [b[0] - a[0], b[1] - a[1]];
            normals.push((-e[0]).atan2(e[1]));
        }
        let mut s = [0.0f64; 2];
        for i in 0..n {
            // Vertex pts[(i+1) % n] is supported on [normals[i], normals[i+1]].
            let v = pts[(i + 1) % n];
            let a = normals[i];
            let mut b = normals[(i + 1) % n];
            if b < a {
                b += TAU;
            }
            let ixx = (b - a) / 2.0 + ((2.0 * b).sin() - (2.0 * a).sin()) / 4.0;
            let iyy = (b - a) / 2.0 - ((2.0 * b).sin() - (2.0 * a).sin()) / 4.0;
            let ixy = -((2.0 * b).cos() - (2.0 * a).cos()) / 4.0;
            s[0] += v[0] * ixx + v[1] * ixy;
            s[1] += v[0] * ixy + v[1] * iyy;
        }
        [s[0] / PI, s[1] / PI]
    }

    #[test]
    fn linearity_in_the_measure() {
        let g = grid(128);
        let d1: Vec<f64> = g.angles().iter().map(|t| 1.0 + 0.2 * (2.0 * t).cos()).collect();
        let d2: Vec<f64> = g.angles().iter().map(|t| 0.5 + 0.1 * (3.0 * t).sin()).collect();
        let m1 = CircleMeasure::from_density(g.clone(), d1.clone()).unwrap();
        let m2 = CircleMeasure::from_density(g.clone(), d2.clone()).unwrap();
        let combo_density: Vec<f64> = d1.iter().zip(&d2).map(|(a, b)| 2.0 * a + 0.5 * b).collect();
        let combo = CircleMeasure::from_density(g, combo_density).unwrap();
        let k = BergKernel::default();
        let h1 = berg_invert(&m1, &k).unwrap();
        let h2 = berg_invert(&m2, &k).unwrap();
        let hc = berg_invert(&combo, &k).unwrap();
        for ((a, b), c) in h1.iter().zip(&h2).zip(&hc) {
            assert_abs_diff_eq!(2.0 * a + 0.5 * b, *c, epsilon = 1e-12);
        }
    }

    #[test]
    fn rotation_equivariance() {
        let g = grid(256);
        let psi = PI / 7.0;
        let atoms = vec![
            Atom { angle: 0.3, mass: 1.0 },
            Atom { angle: 0.3 + 2.0 * PI / 3.0, mass: 1.0 },
            Atom { angle: 0.3 + 4.0 * PI / 3.0, mass: 1.0 },
        ];
        let rotated: Vec<Atom> = atoms
            .iter()
            .map(|a| Atom { angle: a.angle + psi, mass: a.mass })
            .collect();
        let mu = CircleMeasure::with_atoms(g.clone(), vec![0.0; 256], atoms).unwrap();
        let mu_rot = CircleMeasure::with_atoms(g.clone(), vec![0.0; 256], rotated).unwrap();
        let k = BergKernel::default();
        let shifted: Vec<f64> = g.angles().iter().map(|t| t - psi).collect();
        let h_at = berg_invert_at(&mu, &k, &shifted).unwrap();
        let h_rot = berg_invert(&mu_rot, &k).unwrap();
        for (a, b) in h_at.iter().zip(&h_rot) {
            assert_abs_diff_eq!(a, b, epsilon = 1e-10);
        }
    }

    #[test]
    fn steiner_2d_examples() {
        let g = grid(256);
        let ones = vec![1.0; 256];
        let s = steiner_2d(&g, &ones);
        assert_abs_diff_eq!(s[0], 0.0, epsilon = 1e-14);
        assert_abs_diff_eq!(s[1], 0.0, epsilon = 1e-14);

        let x0 = [0.4, -0.9];
        let translated: Vec<f64> = g
            .angles()
            .iter()
            .map(|t| 1.0 + x0[0] * t.cos() + x0[1] * t.sin())
            .collect();
        let s = steiner_2d(&g, &translated);
        assert_abs_diff_eq!(s[0], x0[0], epsilon = 1e-8);
        assert_abs_diff_eq!(s[1], x0[1], epsilon = 1e-8);

        let seg: Vec<f64> = g.angles().iter().map(|t| t.cos().abs()).collect();
        let s = steiner_2d(&g, &seg);
        assert_abs_diff_eq!(s[0], 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(s[1], 0.0, epsilon = 1e-12);
    }
}
