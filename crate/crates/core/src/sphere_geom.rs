//! Spherical and Grassmannian parametrizations, grids, and quadrature rules.
//!
//! Directions live on the unit sphere of `R^n` with a distinguished axis
//! `e_n` (the last coordinate). Planes through the axis are parametrized by
//! a unit vector `w` orthogonal to `e_n`, with `w` and `-w` identified.
//! Circle grids on those planes are offset by half a step so that no sample
//! hits the poles; integrands singular at `±e_n` (like `1/sin θ`) stay
//! finite at every sample, and `plane_of` is defined everywhere on the grid.
//!
//! All quadrature reductions use a fixed left-to-right summation order so
//! results are bit-reproducible regardless of caller-side parallelism.

use std::f64::consts::{PI, TAU};

use crate::error::{Error, Result};

/// Directions closer than this to `±e_n` are treated as poles.
pub const POLE_TOL: f64 = 1e-9;

/// Coordinates below this magnitude count as zero when canonicalizing planes.
const CANON_EPS: f64 = 1e-12;

const UNIT_TOL: f64 = 1e-12;

/// Volume `κ_j` of the unit ball in `R^j` (`κ_0 = 1`, `κ_1 = 2`, `κ_2 = π`).
pub fn unit_ball_volume(j: usize) -> f64 {
    match j {
        0 => 1.0,
        1 => 2.0,
        _ => unit_ball_volume(j - 2) * TAU / j as f64,
    }
}

/// Surface area `ω_j` of the unit sphere `S^{j-1}` in `R^j`; `ω_j = j·κ_j`.
///
/// For `j = 1` this is the counting measure of `S^0`, namely 2.
pub fn sphere_surface(j: usize) -> f64 {
    if j == 0 {
        0.0
    } else {
        j as f64 * unit_ball_volume(j)
    }
}

/// Unit-ball volumes `κ_0..κ_n` and sphere surface areas `ω_0..ω_n` for one
/// ambient dimension.
#[derive(Debug, Clone)]
pub struct DimensionConstants {
    pub n: usize,
    pub kappa: Vec<f64>,
    pub omega: Vec<f64>,
}

impl DimensionConstants {
    pub fn new(n: usize) -> Self {
        Self {
            n,
            kappa: (0..=n).map(unit_ball_volume).collect(),
            omega: (0..=n).map(sphere_surface).collect(),
        }
    }
}

/// A point of the unit sphere `S^{n-1}`.
#[derive(Debug, Clone)]
pub struct UnitVector(Vec<f64>);

impl UnitVector {
    /// Wraps coordinates that are already unit length (within 1e-12).
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        let norm = coords.iter().map(|x| x * x).sum::<f64>().sqrt();
        if !norm.is_finite() || (norm - 1.0).abs() > UNIT_TOL {
            return Err(Error::InvalidDirection(format!(
                "norm {norm} is not 1 within {UNIT_TOL:e}"
            )));
        }
        Ok(Self(coords))
    }

    /// Normalizes arbitrary nonzero coordinates to a direction.
    pub fn normalized(coords: Vec<f64>) -> Result<Self> {
        let norm = coords.iter().map(|x| x * x).sum::<f64>().sqrt();
        if !norm.is_finite() || norm < 1e-300 {
            return Err(Error::InvalidDirection("zero or non-finite vector".into()));
        }
        Ok(Self(coords.into_iter().map(|x| x / norm).collect()))
    }

    /// The i-th coordinate axis of `R^n` (zero based).
    pub fn coordinate_axis(n: usize, i: usize) -> Self {
        let mut c = vec![0.0; n];
        c[i] = 1.0;
        Self(c)
    }

    /// The distinguished axis `e_n`.
    pub fn axis(n: usize) -> Self {
        Self::coordinate_axis(n, n - 1)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[f64] {
        &self.0
    }

    pub fn dot(&self, other: &UnitVector) -> f64 {
        dot(&self.0, &other.0)
    }

    /// Component along the distinguished axis `e_n`.
    pub fn axis_component(&self) -> f64 {
        self.0[self.0.len() - 1]
    }
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// A 2-plane through the `e_n` axis, represented by a canonical unit vector
/// `w ⊥ e_n`. The representatives `w` and `-w` denote the same plane; the
/// sign is fixed so that the first coordinate of `w` larger than 1e-12 in
/// magnitude is positive. All angular data is stored relative to this
/// canonical `w`.
#[derive(Debug, Clone)]
pub struct AxialPlane {
    w: UnitVector,
}

impl AxialPlane {
    pub fn new(w: UnitVector) -> Result<Self> {
        let n = w.dim();
        if n < 2 {
            return Err(Error::UnsupportedDimension(n));
        }
        if w.coords()[n - 1].abs() > UNIT_TOL {
            return Err(Error::InvalidDirection(
                "plane representative is not orthogonal to the axis".into(),
            ));
        }
        let mut c = w.0;
        // Force the axis component to exactly zero so that embed() puts the
        // full cos θ weight on the axis coordinate.
        c[n - 1] = 0.0;
        let norm = c.iter().map(|x| x * x).sum::<f64>().sqrt();
        for x in &mut c {
            *x /= norm;
        }
        if let Some(&lead) = c.iter().find(|x| x.abs() > CANON_EPS) {
            if lead < 0.0 {
                for x in &mut c {
                    *x = -*x;
                }
            }
        }
        Ok(Self { w: UnitVector(c) })
    }

    /// The plane at a given azimuth in `R^3`: `w = (cos φ, sin φ, 0)`.
    pub fn from_azimuth(phi: f64) -> Self {
        let (s, c) = phi.sin_cos();
        Self::new(UnitVector(vec![c, s, 0.0])).expect("azimuth plane is valid")
    }

    /// The unique plane for `n = 2` (`w = e_1`).
    pub fn planar() -> Self {
        Self {
            w: UnitVector(vec![1.0, 0.0]),
        }
    }

    pub fn w(&self) -> &UnitVector {
        &self.w
    }

    pub fn dim(&self) -> usize {
        self.w.dim()
    }

    /// Azimuth of the plane in `[0, π)` for `n = 3`.
    pub fn azimuth(&self) -> f64 {
        let c = self.w.coords();
        let mut a = c[1].atan2(c[0]).rem_euclid(PI);
        if a >= PI {
            a -= PI;
        }
        a
    }
}

/// Realizes the point of `S^1(E)` with polar angle `theta` from `e_n`:
/// `cos θ · e_n + sin θ · w`.
pub fn embed(theta: f64, plane: &AxialPlane) -> UnitVector {
    let n = plane.dim();
    let (s, c) = theta.sin_cos();
    let mut out: Vec<f64> = plane.w().coords().iter().map(|wi| s * wi).collect();
    out[n - 1] = c;
    UnitVector(out)
}

/// The plane `e_n ∨ u` spanned by the axis and an off-pole direction.
pub fn plane_of(u: &UnitVector) -> Result<AxialPlane> {
    let n = u.dim();
    let mut c = u.0.clone();
    c[n - 1] = 0.0;
    let norm = c.iter().map(|x| x * x).sum::<f64>().sqrt();
    if norm <= POLE_TOL {
        return Err(Error::PoleInput { tol: POLE_TOL });
    }
    for x in &mut c {
        *x /= norm;
    }
    AxialPlane::new(UnitVector(c))
}

/// Polar angle `θ = arccos⟨u, e_n⟩ ∈ [0, π]`.
pub fn polar_angle(u: &UnitVector) -> f64 {
    u.axis_component().clamp(-1.0, 1.0).acos()
}

/// A uniform periodic grid of `m` angles on a circle `S^1(E)`, offset by
/// half a step so that `θ ∈ {0, π}` is never sampled (`m` must be even).
#[derive(Debug, Clone)]
pub struct CircleGrid {
    plane: AxialPlane,
    angles: Vec<f64>,
}

impl CircleGrid {
    pub fn new(plane: AxialPlane, m: usize) -> Result<Self> {
        if m < 4 || !m.is_multiple_of(2) {
            return Err(Error::InvalidGrid(format!(
                "circle grid needs an even sample count >= 4, got {m}"
            )));
        }
        let step = TAU / m as f64;
        let angles = (0..m).map(|k| (k as f64 + 0.5) * step).collect();
        Ok(Self { plane, angles })
    }

    pub fn plane(&self) -> &AxialPlane {
        &self.plane
    }

    pub fn len(&self) -> usize {
        self.angles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.angles.is_empty()
    }

    pub fn step(&self) -> f64 {
        TAU / self.angles.len() as f64
    }

    pub fn angles(&self) -> &[f64] {
        &self.angles
    }

    pub fn angle(&self, k: usize) -> f64 {
        self.angles[k]
    }

    /// The sphere point of sample `k`.
    pub fn point(&self, k: usize) -> UnitVector {
        embed(self.angles[k], &self.plane)
    }
}

/// Rectangle rule on the uniform periodic grid; spectrally accurate for
/// smooth periodic integrands.
pub fn integrate_circle(grid: &CircleGrid, samples: &[f64]) -> f64 {
    assert_eq!(samples.len(), grid.len(), "sample count mismatch");
    grid.step() * samples.iter().sum::<f64>()
}

/// A finite set of axial planes with probability weights realizing the
/// rotation-invariant measure on the planes through `e_n`.
///
/// For `n = 2` there is a single plane; for `n = 3` the uniform rule places
/// `p` equally spaced azimuths on `[0, π)` with weight `1/p` each. Higher
/// dimensions can be driven through [`PlaneGrid::from_parts`] with a custom
/// rule.
#[derive(Debug, Clone)]
pub struct PlaneGrid {
    dim: usize,
    planes: Vec<AxialPlane>,
    weights: Vec<f64>,
    azimuths: Vec<f64>,
}

impl PlaneGrid {
    pub fn uniform(dim: usize, p: usize) -> Result<Self> {
        match dim {
            2 => Ok(Self {
                dim: 2,
                planes: vec![AxialPlane::planar()],
                weights: vec![1.0],
                azimuths: vec![0.0],
            }),
            3 => Self::uniform_rotated(p, 0.0),
            n => Err(Error::UnsupportedDimension(n)),
        }
    }

    /// Uniform azimuth rule for `n = 3`, shifted by a constant offset.
    pub fn uniform_rotated(p: usize, offset: f64) -> Result<Self> {
        if p == 0 {
            return Err(Error::InvalidGrid("plane grid needs p >= 1".into()));
        }
        let mut azimuths: Vec<f64> = (0..p)
            .map(|j| (offset + j as f64 * PI / p as f64).rem_euclid(PI))
            .collect();
        azimuths.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let planes = azimuths.iter().map(|&a| AxialPlane::from_azimuth(a)).collect();
        Ok(Self {
            dim: 3,
            planes,
            weights: vec![1.0 / p as f64; p],
            azimuths,
        })
    }

    /// Assembles a grid from explicit parts (used by the file formats and by
    /// custom quadrature rules in higher dimensions).
    pub fn from_parts(
        dim: usize,
        planes: Vec<AxialPlane>,
        weights: Vec<f64>,
        azimuths: Vec<f64>,
    ) -> Result<Self> {
        if planes.is_empty() || planes.len() != weights.len() || planes.len() != azimuths.len() {
            return Err(Error::InvalidGrid("inconsistent plane grid parts".into()));
        }
        let total: f64 = weights.iter().sum();
        if weights.iter().any(|w| *w < 0.0) || (total - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidGrid(format!(
                "plane weights must be non-negative and sum to 1 (sum {total})"
            )));
        }
        if planes.iter().any(|pl| pl.dim() != dim) {
            return Err(Error::InvalidGrid("plane dimension mismatch".into()));
        }
        Ok(Self {
            dim,
            planes,
            weights,
            azimuths,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.planes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.planes.is_empty()
    }

    pub fn planes(&self) -> &[AxialPlane] {
        &self.planes
    }

    pub fn plane(&self, j: usize) -> &AxialPlane {
        &self.planes[j]
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn azimuths(&self) -> &[f64] {
        &self.azimuths
    }
}

/// Weighted sum of per-plane values with the grid's probability weights.
pub fn integrate_grassmannian(grid: &PlaneGrid, values: &[f64]) -> f64 {
    assert_eq!(values.len(), grid.len(), "value count mismatch");
    grid.weights
        .iter()
        .zip(values)
        .map(|(w, v)| w * v)
        .sum()
}

/// The product of a plane grid with a shared circle grid; the sampling
/// domain for sphere densities and sampled support functions. Values are
/// stored row major, index `j * m + k` for plane `j` and angle `k`.
#[derive(Debug, Clone)]
pub struct ProductGrid {
    planes: PlaneGrid,
    circle_angles: Vec<f64>,
}

impl ProductGrid {
    pub fn new(planes: PlaneGrid, circle_m: usize) -> Result<Self> {
        if circle_m < 4 || !circle_m.is_multiple_of(2) {
            return Err(Error::InvalidGrid(format!(
                "circle grid needs an even sample count >= 4, got {circle_m}"
            )));
        }
        let step = TAU / circle_m as f64;
        Ok(Self {
            planes,
            circle_angles: (0..circle_m).map(|k| (k as f64 + 0.5) * step).collect(),
        })
    }

    /// Uniform grid of `p` planes and `m` circle samples in dimension `dim`.
    pub fn standard(dim: usize, p: usize, m: usize) -> Result<Self> {
        Self::new(PlaneGrid::uniform(dim, p)?, m)
    }

    pub fn dim(&self) -> usize {
        self.planes.dim()
    }

    pub fn plane_grid(&self) -> &PlaneGrid {
        &self.planes
    }

    pub fn plane_len(&self) -> usize {
        self.planes.len()
    }

    pub fn circle_len(&self) -> usize {
        self.circle_angles.len()
    }

    pub fn circle_step(&self) -> f64 {
        TAU / self.circle_angles.len() as f64
    }

    pub fn circle_angles(&self) -> &[f64] {
        &self.circle_angles
    }

    pub fn circle_grid(&self, j: usize) -> CircleGrid {
        CircleGrid {
            plane: self.planes.plane(j).clone(),
            angles: self.circle_angles.clone(),
        }
    }

    pub fn len(&self) -> usize {
        self.plane_len() * self.circle_len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn index(&self, j: usize, k: usize) -> usize {
        j * self.circle_len() + k
    }

    pub fn point(&self, j: usize, k: usize) -> UnitVector {
        embed(self.circle_angles[k], self.planes.plane(j))
    }
}

/// Integrates a function over `S^{n-1}` in cylinder coordinates:
/// `(ω_{n-1}/2) · E_E [ ∫_{S^1(E)} q(v) sin^{n-2}(θ_v) dv ]`,
/// where `θ_v` is the polar angle of `v`. Converges to `∫ q du` for
/// continuous `q` as the grids refine.
pub fn integrate_sphere_cylindrical(grid: &ProductGrid, values: &[f64]) -> f64 {
    assert_eq!(values.len(), grid.len(), "value count mismatch");
    let n = grid.dim();
    let m = grid.circle_len();
    let step = grid.circle_step();
    let sin_pow: Vec<f64> = grid
        .circle_angles
        .iter()
        .map(|&t| t.sin().abs().powi(n as i32 - 2))
        .collect();
    let half_omega = sphere_surface(n - 1) / 2.0;
    let mut total = 0.0;
    for (j, w) in grid.planes.weights().iter().enumerate() {
        let row = &values[j * m..(j + 1) * m];
        let acc: f64 = row.iter().zip(&sin_pow).map(|(q, s)| q * s).sum();
        total += w * acc * step;
    }
    half_omega * total
}

/// Samples `f` on the product grid and integrates in cylinder coordinates.
pub fn integrate_sphere_fn(grid: &ProductGrid, f: impl Fn(&UnitVector) -> f64) -> f64 {
    let mut values = Vec::with_capacity(grid.len());
    for j in 0..grid.plane_len() {
        for k in 0..grid.circle_len() {
            values.push(f(&grid.point(j, k)));
        }
    }
    integrate_sphere_cylindrical(grid, &values)
}
