//! The forward operator `K ↦ S₁(K, D; ·)`, realized as a plane-indexed
//! family: for every axial plane `E` the projection `K|E` is run through the
//! planar forward solver and scaled by `κ_{n-1}/2`; the pushforward density
//! is `ρ(E) = κ_{n-1} V₁(K|E)` minus whatever the projection deposits at the
//! poles.
//!
//! Atoms produced at the poles (flat caps of `K|E` in the axis directions)
//! are routed to a separate pole-mass account and never enter the family:
//! the fibers carry the measure restricted to the off-pole sphere, which is
//! what the solvability theory consumes, and the solver must see pole mass
//! explicitly to reject it.

use rayon::prelude::*;

use crate::bodies::{
    pole_face_support, pole_faces, project, PlanarBody, SupportFunction,
};
use crate::christoffel2d::{forward_polygon, forward_smooth, steiner_2d};
use crate::error::{Error, Result};
use crate::measures::{
    family_to_density, Atom, CircleMeasure, DisintegratedMeasure, SphereDensity, POLE_ANGLE_TOL,
};
use crate::sphere_geom::{unit_ball_volume, CircleGrid, ProductGrid, UnitVector};

/// Mass assigned to the two poles.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct PoleMass {
    pub north: f64,
    pub south: f64,
}

impl PoleMass {
    pub const ZERO: PoleMass = PoleMass { north: 0.0, south: 0.0 };

    pub fn max(&self) -> f64 {
        self.north.max(self.south)
    }
}

/// The forward measure of a body: the off-pole family, the extracted sphere
/// density when the family is atom-free, and the pole masses (Grassmannian
/// averages of the per-plane pole deposits).
#[derive(Debug, Clone)]
pub struct ForwardResult {
    pub family: DisintegratedMeasure,
    pub density: Option<SphereDensity>,
    pub pole_mass: PoleMass,
    pub per_plane_pole: Vec<PoleMass>,
}

/// Computes `S₁(K, D; ·)` on the given grids for `n ∈ {2, 3}`.
///
/// Dispatch is per summand: polytopes, disks, and axial segments take the
/// exact polygon path (atoms), everything else is sampled and differenced.
/// Minkowski sums use additivity of the measure in `K`. Each sampled
/// projection is centered at its planar Steiner point before differencing,
/// which makes the result exactly translation invariant at any resolution.
pub fn forward(body: &SupportFunction, grid: &ProductGrid) -> Result<ForwardResult> {
    body.validate()?;
    let n = grid.dim();
    if !(2..=3).contains(&n) {
        return Err(Error::UnsupportedDimension(n));
    }
    if body.dim() != n {
        return Err(Error::InvalidBody(format!(
            "body dimension {} does not match grid dimension {n}",
            body.dim()
        )));
    }
    let mut parts = Vec::new();
    flatten(body, &mut parts);

    let scale = unit_ball_volume(n - 1) / 2.0;
    let p = grid.plane_len();
    let per_plane: Vec<(CircleMeasure, PoleMass)> = (0..p)
        .into_par_iter()
        .map(|j| plane_forward(&parts, grid, j, scale))
        .collect::<Result<Vec<_>>>()?;

    let mut fibers = Vec::with_capacity(p);
    let mut per_plane_pole = Vec::with_capacity(p);
    let mut pole = PoleMass::ZERO;
    for (j, (fiber, pm)) in per_plane.into_iter().enumerate() {
        let w = grid.plane_grid().weights()[j];
        pole.north += w * pm.north;
        pole.south += w * pm.south;
        per_plane_pole.push(pm);
        fibers.push(fiber);
    }
    let family = DisintegratedMeasure::new(grid.plane_grid().clone(), fibers)?;
    let density = if family.has_atoms() {
        None
    } else {
        Some(family_to_density(&family)?)
    };
    Ok(ForwardResult {
        family,
        density,
        pole_mass: pole,
        per_plane_pole,
    })
}

fn flatten<'a>(body: &'a SupportFunction, out: &mut Vec<&'a SupportFunction>) {
    match body {
        SupportFunction::MinkowskiSum { parts } => {
            for p in parts {
                flatten(p, out);
            }
        }
        other => out.push(other),
    }
}

fn plane_forward(
    parts: &[&SupportFunction],
    grid: &ProductGrid,
    j: usize,
    scale: f64,
) -> Result<(CircleMeasure, PoleMass)> {
    let cg = grid.circle_grid(j);
    let m = cg.len();
    let mut density = vec![0.0; m];
    let mut atoms: Vec<Atom> = Vec::new();
    let mut pole = PoleMass::ZERO;

    for part in parts {
        match part {
            SupportFunction::Polytope { .. }
            | SupportFunction::DiskBody { .. }
            | SupportFunction::AxialSegment { .. } => {
                let polygon = match project(part, &cg)? {
                    PlanarBody::Polygon(vs) => vs,
                    PlanarBody::Sampled { .. } => unreachable!("exact projection path"),
                };
                let mu = forward_polygon(&cg, &polygon)?;
                for a in mu.atoms() {
                    let mass = scale * a.mass;
                    let d0 = a.angle.min(std::f64::consts::TAU - a.angle);
                    let dpi = (a.angle - std::f64::consts::PI).abs();
                    if d0 < POLE_ANGLE_TOL {
                        pole.north += mass;
                    } else if dpi < POLE_ANGLE_TOL {
                        pole.south += mass;
                    } else {
                        atoms.push(Atom {
                            angle: a.angle,
                            mass,
                        });
                    }
                }
            }
            smooth => {
                let mut row = sample_row(smooth, &cg, grid, j);
                let s = steiner_2d(&cg, &row);
                for (v, t) in row.iter_mut().zip(cg.angles()) {
                    *v -= s[0] * t.cos() + s[1] * t.sin();
                }
                let mu = forward_smooth(&cg, &row, None)?;
                for (d, src) in density.iter_mut().zip(mu.density()) {
                    *d += scale * src;
                }
            }
        }
    }
    let fiber = CircleMeasure::with_atoms(cg, density, atoms)?;
    Ok((fiber, pole))
}

fn sample_row(
    body: &SupportFunction,
    cg: &CircleGrid,
    grid: &ProductGrid,
    j: usize,
) -> Vec<f64> {
    if let SupportFunction::Sampled(s) = body {
        // Row extraction is exact when the body lives on the forward grid.
        if grids_match(s.grid(), grid) {
            return s.row(j).to_vec();
        }
    }
    cg.angles()
        .iter()
        .map(|&t| body.support(&crate::sphere_geom::embed(t, cg.plane())))
        .collect()
}

fn grids_match(a: &ProductGrid, b: &ProductGrid) -> bool {
    a.dim() == b.dim()
        && a.plane_len() == b.plane_len()
        && a.circle_len() == b.circle_len()
        && a.plane_grid()
            .planes()
            .iter()
            .zip(b.plane_grid().planes())
            .all(|(x, y)| (x.w().dot(y.w()) - 1.0).abs() < 1e-12)
}

/// The sphere density of the forward measure of a smooth body; errors with
/// [`Error::AtomsPresent`] for bodies whose projections have edges. The
/// density behaves like `1/sin θ` towards the poles and is reported at the
/// offset grid points only.
pub fn forward_density(body: &SupportFunction, grid: &ProductGrid) -> Result<SphereDensity> {
    forward(body, grid)?.density.ok_or(Error::AtomsPresent)
}

const POLE_QUADRATURE_SAMPLES: usize = 4096;

/// Mass of `S₁(K, D; ·)` at each pole: the mixed volume of the pole face
/// with the disk inside `e_n^⊥`. For n = 3 this is `(1/2)∫ h_F dθ` (the
/// first intrinsic volume of the face), evaluated by quadrature on the
/// face's exact support function; for n = 2 it is the face length.
pub fn pole_mass(body: &SupportFunction) -> Result<PoleMass> {
    let n = body.dim();
    match n {
        2 => {
            let (north, south) = pole_faces(body)?;
            Ok(PoleMass { north, south })
        }
        3 => {
            let m = POLE_QUADRATURE_SAMPLES;
            let step = std::f64::consts::TAU / m as f64;
            let mut out = [0.0f64; 2];
            for (slot, north) in [(0usize, true), (1usize, false)] {
                let mut acc = 0.0;
                for k in 0..m {
                    let t = (k as f64 + 0.5) * step;
                    acc += pole_face_support(body, north, t)?;
                }
                out[slot] = 0.5 * acc * step;
            }
            Ok(PoleMass {
                north: out[0],
                south: out[1],
            })
        }
        d => Err(Error::UnsupportedDimension(d)),
    }
}

/// Independent total-mass oracle for smooth bodies of revolution about the
/// axis (n = 3): the mass of `S₁(K, D; ·)` equals
/// `∫_{S²} sin θ · (1/2)(Δ_S h + 2h) dσ`, which reduces to the 1D integral
/// `π ∫₀^π sin²θ (h'' + cot θ · h' + 2h) dθ` for a zonal profile `h(θ)`.
/// Derivatives are taken by central differences of the analytic profile.
pub fn mixed_volume_oracle(body: &SupportFunction, samples: usize) -> Result<f64> {
    if body.dim() != 3 {
        return Err(Error::UnsupportedDimension(body.dim()));
    }
    let profile = zonal_profile(body)?;
    let step = std::f64::consts::PI / samples as f64;
    let delta = 1e-4;
    let mut acc = 0.0;
    for i in 0..samples {
        let t = (i as f64 + 0.5) * step;
        let h0 = eval_profile(&profile, t);
        let hp = eval_profile(&profile, t + delta);
        let hm = eval_profile(&profile, t - delta);
        let d1 = (hp - hm) / (2.0 * delta);
        let d2 = (hp - 2.0 * h0 + hm) / (delta * delta);
        let lap = d2 + d1 / t.tan();
        acc += t.sin().powi(2) * (lap + 2.0 * h0);
    }
    Ok(std::f64::consts::PI * acc * step)
}

enum ZonalTerm {
    /// `r + c·cos θ`.
    Ball { radius: f64, axis_center: f64 },
    /// `sqrt(a² sin²θ + c² cos²θ) + z·cos θ`.
    Spheroid { equatorial: f64, polar: f64, axis_center: f64 },
}

fn zonal_profile(body: &SupportFunction) -> Result<Vec<ZonalTerm>> {
    let mut terms = Vec::new();
    collect_zonal(body, &mut terms)?;
    Ok(terms)
}

fn collect_zonal(body: &SupportFunction, out: &mut Vec<ZonalTerm>) -> Result<()> {
    match body {
        SupportFunction::Ball { radius, center } => {
            if center[..center.len() - 1].iter().any(|x| x.abs() > 1e-12) {
                return Err(Error::UnsupportedBody(
                    "oracle needs the center on the axis of revolution",
                ));
            }
            out.push(ZonalTerm::Ball {
                radius: *radius,
                axis_center: center[center.len() - 1],
            });
            Ok(())
        }
        SupportFunction::Ellipsoid { semi_axes, center } => {
            if (semi_axes[0] - semi_axes[1]).abs() > 1e-12 {
                return Err(Error::UnsupportedBody(
                    "oracle needs an ellipsoid of revolution (equal equatorial semi-axes)",
                ));
            }
            if center[..center.len() - 1].iter().any(|x| x.abs() > 1e-12) {
                return Err(Error::UnsupportedBody(
                    "oracle needs the center on the axis of revolution",
                ));
            }
            out.push(ZonalTerm::Spheroid {
                equatorial: semi_axes[0],
                polar: semi_axes[2],
                axis_center: center[center.len() - 1],
            });
            Ok(())
        }
        SupportFunction::MinkowskiSum { parts } => {
            for p in parts {
                collect_zonal(p, out)?;
            }
            Ok(())
        }
        _ => Err(Error::UnsupportedBody(
            "oracle handles smooth bodies of revolution (balls, spheroids, sums)",
        )),
    }
}

fn eval_profile(terms: &[ZonalTerm], theta: f64) -> f64 {
    let (s, c) = theta.sin_cos();
    terms
        .iter()
        .map(|t| match t {
            ZonalTerm::Ball { radius, axis_center } => radius + axis_center * c,
            ZonalTerm::Spheroid { equatorial, polar, axis_center } => {
                ((equatorial * s).powi(2) + (polar * c).powi(2)).sqrt() + axis_center * c
            }
        })
        .sum()
}

/// Mixed volume `V(A, B, D^{[n-2]}) = (1/n) ∫ h_A dS₁(B, D; ·)` by pairing
/// a body's support function against a forward result (pole atoms included).
pub fn pair_mixed_volume(body: &SupportFunction, fwd: &ForwardResult) -> f64 {
    let fam = &fwd.family;
    let n = fam.dim();
    let pg = fam.plane_grid();
    let mut acc = 0.0;
    for (j, fiber) in fam.fibers().iter().enumerate() {
        let cg = fiber.grid();
        let mut plane_int = 0.0;
        for (d, &t) in fiber.density().iter().zip(cg.angles()) {
            plane_int += d * body.support(&crate::sphere_geom::embed(t, cg.plane()));
        }
        plane_int *= cg.step();
        for a in fiber.atoms() {
            plane_int += a.mass * body.support(&crate::sphere_geom::embed(a.angle, cg.plane()));
        }
        acc += pg.weights()[j] * plane_int;
    }
    let north = UnitVector::axis(n);
    let mut south_coords = vec![0.0; n];
    south_coords[n - 1] = -1.0;
    let south = UnitVector::new(south_coords).expect("south pole");
    acc += body.support(&north) * fwd.pole_mass.north;
    acc += body.support(&south) * fwd.pole_mass.south;
    acc / n as f64
}
