//! Measures on circles and spheres, and the plane-indexed disintegration.
//!
//! A [`CircleMeasure`] is a finite non-negative measure on one circle: a
//! density sampled on a [`CircleGrid`] plus a list of atoms. Angles follow
//! the grid's chart, `u(θ) = cos θ · b_1 + sin θ · b_2`; for an axial plane
//! the first basis vector is `e_n`, so the poles sit at angles 0 and π.
//!
//! A [`DisintegratedMeasure`] is a family of circle measures, one per plane
//! of a [`PlaneGrid`], together with the density `ρ(E)` of the pushforward
//! under `u ↦ e_n ∨ u`. Fibers with atoms at the poles are rejected at
//! family construction: such mass belongs to `{±e_n}` and is handled by the
//! dedicated pole-mass accounting, never by a fiber. Sphere-level input
//! measures are accepted either as a [`SphereDensity`] or directly as a
//! family; off-pole sphere atoms are not representable because they would
//! make the pushforward atomic.

use crate::error::{Error, Result};
use crate::sphere_geom::{
    integrate_grassmannian, sphere_surface, CircleGrid, PlaneGrid, ProductGrid,
};

/// Fiber atoms closer than this (radians) to {0, π} count as pole atoms.
pub const POLE_ANGLE_TOL: f64 = 1e-7;

const RHO_CONSISTENCY_TOL: f64 = 1e-10;

/// Fraction of the observed `ρ` range that one adjacent-plane jump may take
/// before the pushforward is flagged as discontinuous. A smooth profile
/// sampled on p >= 8 planes moves at most ~π/p of its range per step; a
/// splice of two distinct bodies moves the full range in one step.
const JUMP_RANGE_FRACTION: f64 = 0.5;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Atom {
    pub angle: f64,
    pub mass: f64,
}

/// A non-negative measure on a circle: density samples plus atoms.
#[derive(Debug, Clone)]
pub struct CircleMeasure {
    grid: CircleGrid,
    density: Vec<f64>,
    atoms: Vec<Atom>,
}

impl CircleMeasure {
    pub fn from_density(grid: CircleGrid, density: Vec<f64>) -> Result<Self> {
        Self::with_atoms(grid, density, Vec::new())
    }

    pub fn with_atoms(grid: CircleGrid, density: Vec<f64>, mut atoms: Vec<Atom>) -> Result<Self> {
        if density.len() != grid.len() {
            return Err(Error::InvalidMeasure(format!(
                "density has {} samples, grid has {}",
                density.len(),
                grid.len()
            )));
        }
        if density.iter().any(|d| !d.is_finite() || *d < 0.0) {
            return Err(Error::InvalidMeasure(
                "density samples must be finite and non-negative".into(),
            ));
        }
        for a in &mut atoms {
            if !a.mass.is_finite() || a.mass <= 0.0 {
                return Err(Error::InvalidMeasure(format!(
                    "atom mass {} must be positive",
                    a.mass
                )));
            }
            a.angle = a.angle.rem_euclid(std::f64::consts::TAU);
        }
        atoms.sort_by(|a, b| a.angle.partial_cmp(&b.angle).unwrap());
        Ok(Self {
            grid,
            density,
            atoms,
        })
    }

    pub fn zero(grid: CircleGrid) -> Self {
        let m = grid.len();
        Self {
            grid,
            density: vec![0.0; m],
            atoms: Vec::new(),
        }
    }

    pub fn grid(&self) -> &CircleGrid {
        &self.grid
    }

    pub fn density(&self) -> &[f64] {
        &self.density
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn has_atoms(&self) -> bool {
        !self.atoms.is_empty()
    }

    pub fn total_mass(&self) -> f64 {
        let dens: f64 = self.density.iter().sum::<f64>() * self.grid.step();
        dens + self.atoms.iter().map(|a| a.mass).sum::<f64>()
    }

    /// First moment `∫ v dμ(v)` in chart coordinates (components along the
    /// two basis vectors of the circle's plane).
    pub fn first_moment(&self) -> [f64; 2] {
        let step = self.grid.step();
        let mut mx = 0.0;
        let mut my = 0.0;
        for (d, t) in self.density.iter().zip(self.grid.angles()) {
            mx += d * t.cos();
            my += d * t.sin();
        }
        mx *= step;
        my *= step;
        for a in &self.atoms {
            mx += a.mass * a.angle.cos();
            my += a.mass * a.angle.sin();
        }
        [mx, my]
    }

    pub fn scaled(&self, factor: f64) -> Result<Self> {
        if factor < 0.0 {
            return Err(Error::InvalidMeasure("scale factor must be >= 0".into()));
        }
        let density = self.density.iter().map(|d| d * factor).collect();
        let atoms = if factor == 0.0 {
            Vec::new()
        } else {
            self.atoms
                .iter()
                .map(|a| Atom {
                    angle: a.angle,
                    mass: a.mass * factor,
                })
                .collect()
        };
        CircleMeasure::with_atoms(self.grid.clone(), density, atoms)
    }

    fn atom_pole_distance(angle: f64) -> f64 {
        use std::f64::consts::{PI, TAU};
        let d0 = angle.min(TAU - angle); // distance to θ = 0
        let dpi = (angle - PI).abs(); // distance to θ = π
        d0.min(dpi)
    }

    pub fn has_pole_atoms(&self) -> bool {
        self.atoms
            .iter()
            .any(|a| Self::atom_pole_distance(a.angle) < POLE_ANGLE_TOL)
    }

    /// Splits atoms within [`POLE_ANGLE_TOL`] of the poles out of the
    /// measure; returns the off-pole remainder and the (north, south) masses.
    pub fn split_pole_atoms(&self) -> (CircleMeasure, f64, f64) {
        use std::f64::consts::{PI, TAU};
        let mut north = 0.0;
        let mut south = 0.0;
        let mut rest = Vec::new();
        for a in &self.atoms {
            let d0 = a.angle.min(TAU - a.angle);
            let dpi = (a.angle - PI).abs();
            if d0 < POLE_ANGLE_TOL {
                north += a.mass;
            } else if dpi < POLE_ANGLE_TOL {
                south += a.mass;
            } else {
                rest.push(*a);
            }
        }
        let off_pole = CircleMeasure {
            grid: self.grid.clone(),
            density: self.density.clone(),
            atoms: rest,
        };
        (off_pole, north, south)
    }

    /// Deviation from evenness under `v ↦ -v` (angle shift by π), as mass.
    pub fn even_deviation(&self) -> f64 {
        let m = self.grid.len();
        let half = m / 2;
        let step = self.grid.step();
        let mut dev = 0.0;
        for k in 0..half {
            dev += (self.density[k] - self.density[(k + half) % m]).abs() * step;
        }
        // Atoms: every atom needs a partner of equal mass at angle + π.
        let mut unmatched: Vec<Atom> = Vec::new();
        for a in &self.atoms {
            let target = (a.angle + std::f64::consts::PI).rem_euclid(std::f64::consts::TAU);
            if let Some(pos) = unmatched
                .iter()
                .position(|b| (b.angle - target).abs() < 1e-9)
            {
                let b = unmatched.remove(pos);
                dev += (a.mass - b.mass).abs();
            } else {
                unmatched.push(*a);
            }
        }
        dev + unmatched.iter().map(|a| a.mass).sum::<f64>()
    }
}

/// A non-negative density sampled on a product grid.
#[derive(Debug, Clone)]
pub struct SphereDensity {
    grid: ProductGrid,
    values: Vec<f64>,
}

impl SphereDensity {
    pub fn new(grid: ProductGrid, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::InvalidMeasure(format!(
                "density has {} samples, grid has {}",
                values.len(),
                grid.len()
            )));
        }
        if values.iter().any(|v| !v.is_finite() || *v < 0.0) {
            return Err(Error::InvalidMeasure(
                "sphere density must be finite and non-negative".into(),
            ));
        }
        Ok(Self { grid, values })
    }

    pub fn from_fn(grid: ProductGrid, q: impl Fn(usize, f64) -> f64) -> Result<Self> {
        let mut values = Vec::with_capacity(grid.len());
        for j in 0..grid.plane_len() {
            for &t in grid.circle_angles() {
                values.push(q(j, t));
            }
        }
        Self::new(grid, values)
    }

    pub fn grid(&self) -> &ProductGrid {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn value(&self, j: usize, k: usize) -> f64 {
        self.values[self.grid.index(j, k)]
    }
}

/// A plane-indexed family `{μ_E}` with the pushforward density `ρ(E)`.
#[derive(Debug, Clone)]
pub struct DisintegratedMeasure {
    planes: PlaneGrid,
    family: Vec<CircleMeasure>,
    rho: Vec<f64>,
}

impl DisintegratedMeasure {
    /// Builds a family and derives `ρ` from the per-plane total masses.
    pub fn new(planes: PlaneGrid, family: Vec<CircleMeasure>) -> Result<Self> {
        let rho = family.iter().map(|f| f.total_mass()).collect();
        Self::with_rho(planes, family, rho)
    }

    /// Builds a family with explicit `ρ`, checking consistency with the
    /// per-plane masses to 1e-10 (relative to the mass scale).
    pub fn with_rho(planes: PlaneGrid, family: Vec<CircleMeasure>, rho: Vec<f64>) -> Result<Self> {
        if family.len() != planes.len() || rho.len() != planes.len() {
            return Err(Error::InvalidMeasure(
                "family must provide one fiber and one rho value per plane".into(),
            ));
        }
        let m = family.first().map(|f| f.grid().len()).unwrap_or(0);
        for (j, fiber) in family.iter().enumerate() {
            if fiber.grid().len() != m {
                return Err(Error::InvalidMeasure(
                    "all fibers must share one circle sample count".into(),
                ));
            }
            if fiber.has_pole_atoms() {
                return Err(Error::InvalidMeasure(format!(
                    "fiber {j} carries an atom at a pole; pole mass is not representable in a family"
                )));
            }
            let wdot = fiber.grid().plane().w().dot(planes.plane(j).w());
            if (wdot.abs() - 1.0).abs() > 1e-9 {
                return Err(Error::InvalidMeasure(format!(
                    "fiber {j} is sampled on a different plane than the grid lists"
                )));
            }
        }
        let scale = rho.iter().fold(1.0f64, |a, r| a.max(r.abs()));
        for (j, (fiber, r)) in family.iter().zip(&rho).enumerate() {
            if (fiber.total_mass() - r).abs() > RHO_CONSISTENCY_TOL * scale {
                return Err(Error::InvalidMeasure(format!(
                    "rho[{j}] = {r} does not match the fiber mass {}",
                    fiber.total_mass()
                )));
            }
        }
        Ok(Self {
            planes,
            family,
            rho,
        })
    }

    pub fn dim(&self) -> usize {
        self.planes.dim()
    }

    pub fn plane_grid(&self) -> &PlaneGrid {
        &self.planes
    }

    pub fn fibers(&self) -> &[CircleMeasure] {
        &self.family
    }

    pub fn fiber(&self, j: usize) -> &CircleMeasure {
        &self.family[j]
    }

    pub fn rho(&self) -> &[f64] {
        &self.rho
    }

    pub fn circle_len(&self) -> usize {
        self.family[0].grid().len()
    }

    pub fn product_grid(&self) -> ProductGrid {
        ProductGrid::new(self.planes.clone(), self.circle_len())
            .expect("fiber grids are valid by construction")
    }

    /// Grassmannian average of `ρ`: the total mass of the measure.
    pub fn total_mass(&self) -> f64 {
        integrate_grassmannian(&self.planes, &self.rho)
    }

    pub fn scaled(&self, factor: f64) -> Result<Self> {
        let family = self
            .family
            .iter()
            .map(|f| f.scaled(factor))
            .collect::<Result<Vec<_>>>()?;
        DisintegratedMeasure::new(self.planes.clone(), family)
    }

    pub fn has_atoms(&self) -> bool {
        self.family.iter().any(|f| f.has_atoms())
    }

    /// Sphere-level first moment `∫ u dμ(u)` assembled from the per-plane
    /// moments: the chart components are carried to ambient coordinates by
    /// each plane's basis `(e_n, w)`.
    pub fn sphere_first_moment(&self) -> Vec<f64> {
        let n = self.planes.dim();
        let mut out = vec![0.0; n];
        for (j, fiber) in self.family.iter().enumerate() {
            let w = self.planes.weights()[j];
            let [m_axis, m_w] = fiber.first_moment();
            let wc = self.planes.plane(j).w().coords();
            for i in 0..n - 1 {
                out[i] += w * m_w * wc[i];
            }
            out[n - 1] += w * m_axis;
        }
        out
    }
}

/// Converts a sphere density into its plane-indexed family. Per plane the
/// fiber density is `(ω_{n-1}/2) · q(v) · sin^{n-2}(θ_v)`, the cylinder
/// Jacobian; the Grassmannian average of `ρ` then reproduces `∫ q du`.
pub fn density_to_family(q: &SphereDensity) -> Result<DisintegratedMeasure> {
    let grid = q.grid();
    let n = grid.dim();
    if !(2..=3).contains(&n) {
        return Err(Error::UnsupportedDimension(n));
    }
    let half_omega = sphere_surface(n - 1) / 2.0;
    let m = grid.circle_len();
    let sin_pow: Vec<f64> = grid
        .circle_angles()
        .iter()
        .map(|&t| t.sin().abs().powi(n as i32 - 2))
        .collect();
    let mut family = Vec::with_capacity(grid.plane_len());
    for j in 0..grid.plane_len() {
        let density: Vec<f64> = (0..m)
            .map(|k| half_omega * q.value(j, k) * sin_pow[k])
            .collect();
        family.push(CircleMeasure::from_density(grid.circle_grid(j), density)?);
    }
    DisintegratedMeasure::new(grid.plane_grid().clone(), family)
}

/// Inverse of [`density_to_family`]; requires an atom-free family.
pub fn family_to_density(fam: &DisintegratedMeasure) -> Result<SphereDensity> {
    if fam.has_atoms() {
        return Err(Error::AtomsPresent);
    }
    let grid = fam.product_grid();
    let n = grid.dim();
    if !(2..=3).contains(&n) {
        return Err(Error::UnsupportedDimension(n));
    }
    let half_omega = sphere_surface(n - 1) / 2.0;
    let sin_pow: Vec<f64> = grid
        .circle_angles()
        .iter()
        .map(|&t| t.sin().abs().powi(n as i32 - 2))
        .collect();
    let mut values = Vec::with_capacity(grid.len());
    for fiber in fam.fibers() {
        for (k, d) in fiber.density().iter().enumerate() {
            values.push(d / (half_omega * sin_pow[k]));
        }
    }
    SphereDensity::new(grid, values)
}

#[derive(Debug, Clone)]
pub struct PlaneConditions {
    pub azimuth: f64,
    pub rho: f64,
    pub moment: [f64; 2],
}

/// Quantitative verdict on the solvability conditions of a family: the
/// pushforward must look continuous across adjacent planes and every fiber
/// must be centered.
#[derive(Debug, Clone)]
pub struct ConditionReport {
    pub pushforward_ok: bool,
    /// Largest adjacent-plane jump of `ρ`.
    pub continuity_modulus: f64,
    pub continuity_threshold: f64,
    /// Plane index at which the largest jump starts.
    pub worst_jump_plane: usize,
    pub centering_ok: bool,
    /// Largest per-plane first-moment norm.
    pub worst_moment: f64,
    pub worst_moment_plane: usize,
    pub centering_threshold: f64,
    /// Mass at the poles: zero by construction for a family.
    pub pole_mass: f64,
    pub per_plane: Vec<PlaneConditions>,
}

/// Runs the condition battery with a relative tolerance `tol` (scaled by the
/// mass scale of the family).
///
/// Continuity is a discrete modulus-of-continuity test: a jump is flagged
/// when it exceeds both the absolute floor `tol · scale` and a quarter of the
/// observed `ρ` range, so smoothly varying pushforwards pass at any finite
/// plane count while splices of distinct bodies fail.
pub fn check_conditions(fam: &DisintegratedMeasure, tol: f64) -> ConditionReport {
    let p = fam.plane_grid().len();
    let rho = fam.rho();
    let scale = rho.iter().fold(f64::MIN_POSITIVE, |a, r| a.max(r.abs()));

    let mut modulus = 0.0;
    let mut worst_jump_plane = 0;
    if p > 1 {
        for j in 0..p {
            let jump = (rho[(j + 1) % p] - rho[j]).abs();
            if jump > modulus {
                modulus = jump;
                worst_jump_plane = j;
            }
        }
    }
    let range = rho.iter().cloned().fold(f64::NEG_INFINITY, f64::max)
        - rho.iter().cloned().fold(f64::INFINITY, f64::min);
    let continuity_threshold = (tol * scale).max(JUMP_RANGE_FRACTION * range);
    let pushforward_ok = modulus <= continuity_threshold;

    let centering_threshold = tol * scale;
    let mut worst_moment = 0.0;
    let mut worst_moment_plane = 0;
    let mut per_plane = Vec::with_capacity(p);
    for (j, fiber) in fam.fibers().iter().enumerate() {
        let m = fiber.first_moment();
        let norm = (m[0] * m[0] + m[1] * m[1]).sqrt();
        if norm > worst_moment {
            worst_moment = norm;
            worst_moment_plane = j;
        }
        per_plane.push(PlaneConditions {
            azimuth: fam.plane_grid().azimuths()[j],
            rho: rho[j],
            moment: m,
        });
    }
    let centering_ok = worst_moment <= centering_threshold;

    ConditionReport {
        pushforward_ok,
        continuity_modulus: modulus,
        continuity_threshold,
        worst_jump_plane,
        centering_ok,
        worst_moment,
        worst_moment_plane,
        centering_threshold,
        pole_mass: 0.0,
        per_plane,
    }
}
