//! Convex bodies represented by their support functions: analytic variants,
//! grid-sampled variants, projections onto axial planes, Steiner points,
//! first intrinsic volumes, pole faces, and the support-function verifier.
//!
//! The planar chart of an axial plane `E = e_n ∨ w` uses the basis
//! `(e_n, w)`: a point at chart angle θ is `cos θ · e_n + sin θ · w`, so the
//! poles sit at chart angles 0 and π. Projections, planar bodies, and circle
//! measures all follow this convention.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sphere_geom::{
    dot, embed, integrate_circle, unit_ball_volume, CircleGrid, ProductGrid, UnitVector,
};

fn default_dim() -> usize {
    3
}

/// A convex body given by its support function.
///
/// Analytic variants evaluate exactly; `Sampled` carries values on a
/// (plane × circle) product grid and interpolates bilinearly in
/// (azimuth, angle).
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum SupportFunction {
    Ball {
        radius: f64,
        center: Vec<f64>,
    },
    Ellipsoid {
        semi_axes: Vec<f64>,
        center: Vec<f64>,
    },
    Polytope {
        vertices: Vec<Vec<f64>>,
    },
    /// The set `r · (B^n ∩ e_n^⊥)`: a disk (n = 3) or segment (n = 2)
    /// orthogonal to the axis.
    #[serde(rename = "disk")]
    DiskBody {
        radius: f64,
        #[serde(default = "default_dim")]
        dim: usize,
    },
    /// The segment from `-ℓ e_n` to `ℓ e_n`.
    #[serde(rename = "segment")]
    AxialSegment {
        half_length: f64,
        #[serde(default = "default_dim")]
        dim: usize,
    },
    #[serde(rename = "sum")]
    MinkowskiSum {
        parts: Vec<SupportFunction>,
    },
    #[serde(skip)]
    Sampled(SampledSupport),
}

impl SupportFunction {
    pub fn dim(&self) -> usize {
        match self {
            Self::Ball { center, .. } => center.len(),
            Self::Ellipsoid { semi_axes, .. } => semi_axes.len(),
            Self::Polytope { vertices } => vertices.first().map_or(0, |v| v.len()),
            Self::DiskBody { dim, .. } | Self::AxialSegment { dim, .. } => *dim,
            Self::MinkowskiSum { parts } => parts.first().map_or(0, |p| p.dim()),
            Self::Sampled(s) => s.grid.dim(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            Self::Ball { radius, center } => {
                if !radius.is_finite() || *radius <= 0.0 {
                    return Err(Error::InvalidBody("ball radius must be positive".into()));
                }
                if center.len() < 2 {
                    return Err(Error::InvalidBody("center needs dimension >= 2".into()));
                }
            }
            Self::Ellipsoid { semi_axes, center } => {
                if semi_axes.len() < 2 || semi_axes.len() != center.len() {
                    return Err(Error::InvalidBody(
                        "ellipsoid needs matching semi-axis and center dimensions >= 2".into(),
                    ));
                }
                if semi_axes.iter().any(|a| !a.is_finite() || *a <= 0.0) {
                    return Err(Error::InvalidBody("semi-axes must be positive".into()));
                }
            }
            Self::Polytope { vertices } => {
                if vertices.is_empty() {
                    return Err(Error::InvalidBody("polytope needs at least one vertex".into()));
                }
                let d = vertices[0].len();
                if d < 2 || vertices.iter().any(|v| v.len() != d) {
                    return Err(Error::InvalidBody(
                        "polytope vertices need one common dimension >= 2".into(),
                    ));
                }
                if vertices.iter().flatten().any(|x| !x.is_finite()) {
                    return Err(Error::InvalidBody("polytope vertices must be finite".into()));
                }
            }
            Self::DiskBody { radius, dim } => {
                if !radius.is_finite() || *radius <= 0.0 {
                    return Err(Error::InvalidBody("disk radius must be positive".into()));
                }
                if *dim < 2 {
                    return Err(Error::InvalidBody("disk needs dimension >= 2".into()));
                }
            }
            Self::AxialSegment { half_length, dim } => {
                if !half_length.is_finite() || *half_length <= 0.0 {
                    return Err(Error::InvalidBody("segment half length must be positive".into()));
                }
                if *dim < 2 {
                    return Err(Error::InvalidBody("segment needs dimension >= 2".into()));
                }
            }
            Self::MinkowskiSum { parts } => {
                if parts.is_empty() {
                    return Err(Error::InvalidBody("sum needs at least one part".into()));
                }
                let d = parts[0].dim();
                for p in parts {
                    p.validate()?;
                    if p.dim() != d {
                        return Err(Error::InvalidBody("sum parts must share one dimension".into()));
                    }
                }
            }
            Self::Sampled(s) => {
                if s.values.iter().any(|v| !v.is_finite()) {
                    return Err(Error::InvalidBody("sampled values must be finite".into()));
                }
            }
        }
        Ok(())
    }

    /// Support value `h_K(u) = max{⟨x, u⟩ : x ∈ K}`.
    pub fn support(&self, u: &UnitVector) -> f64 {
        let c = u.coords();
        match self {
            Self::Ball { radius, center } => radius + dot(center, c),
            Self::Ellipsoid { semi_axes, center } => {
                let quad: f64 = semi_axes
                    .iter()
                    .zip(c)
                    .map(|(a, x)| (a * x) * (a * x))
                    .sum();
                quad.sqrt() + dot(center, c)
            }
            Self::Polytope { vertices } => vertices
                .iter()
                .map(|v| dot(v, c))
                .fold(f64::NEG_INFINITY, f64::max),
            Self::DiskBody { radius, dim } => {
                let axis = c[dim - 1];
                radius * (1.0 - axis * axis).max(0.0).sqrt()
            }
            Self::AxialSegment { half_length, dim } => half_length * c[dim - 1].abs(),
            Self::MinkowskiSum { parts } => parts.iter().map(|p| p.support(u)).sum(),
            Self::Sampled(s) => s.interpolate(c),
        }
    }

    /// The 1-homogeneous extension `H(x) = ‖x‖ h(x/‖x‖)` at an arbitrary
    /// nonzero point.
    pub fn extension(&self, x: &[f64]) -> f64 {
        let norm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
        if norm == 0.0 {
            return 0.0;
        }
        let u = UnitVector::new(x.iter().map(|v| v / norm).collect())
            .expect("normalized input");
        norm * self.support(&u)
    }

    /// Translate by a vector (exact for analytic variants).
    pub fn translated(&self, x: &[f64]) -> Result<SupportFunction> {
        Ok(match self {
            Self::Ball { radius, center } => Self::Ball {
                radius: *radius,
                center: add(center, x),
            },
            Self::Ellipsoid { semi_axes, center } => Self::Ellipsoid {
                semi_axes: semi_axes.clone(),
                center: add(center, x),
            },
            Self::Polytope { vertices } => Self::Polytope {
                vertices: vertices.iter().map(|v| add(v, x)).collect(),
            },
            Self::DiskBody { .. } | Self::AxialSegment { .. } => {
                return Err(Error::UnsupportedVariant(
                    "translate a disk or segment by wrapping it in a polytope sum",
                ))
            }
            Self::MinkowskiSum { parts } => Self::MinkowskiSum {
                parts: parts
                    .iter()
                    .map(|p| p.translated(x))
                    .collect::<Result<Vec<_>>>()?,
            },
            Self::Sampled(_) => {
                return Err(Error::UnsupportedVariant("translate a sampled body"))
            }
        })
    }

    /// Scale by `λ > 0` (exact for analytic variants).
    pub fn scaled(&self, lambda: f64) -> Result<SupportFunction> {
        if lambda <= 0.0 {
            return Err(Error::InvalidBody("scale factor must be positive".into()));
        }
        Ok(match self {
            Self::Ball { radius, center } => Self::Ball {
                radius: radius * lambda,
                center: center.iter().map(|x| x * lambda).collect(),
            },
            Self::Ellipsoid { semi_axes, center } => Self::Ellipsoid {
                semi_axes: semi_axes.iter().map(|a| a * lambda).collect(),
                center: center.iter().map(|x| x * lambda).collect(),
            },
            Self::Polytope { vertices } => Self::Polytope {
                vertices: vertices
                    .iter()
                    .map(|v| v.iter().map(|x| x * lambda).collect())
                    .collect(),
            },
            Self::DiskBody { radius, dim } => Self::DiskBody {
                radius: radius * lambda,
                dim: *dim,
            },
            Self::AxialSegment { half_length, dim } => Self::AxialSegment {
                half_length: half_length * lambda,
                dim: *dim,
            },
            Self::MinkowskiSum { parts } => Self::MinkowskiSum {
                parts: parts
                    .iter()
                    .map(|p| p.scaled(lambda))
                    .collect::<Result<Vec<_>>>()?,
            },
            Self::Sampled(s) => Self::Sampled(SampledSupport {
                grid: s.grid.clone(),
                values: s.values.iter().map(|v| v * lambda).collect(),
            }),
        })
    }
}

fn add(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

/// Support values sampled on a (plane × circle) product grid.
#[derive(Debug, Clone)]
pub struct SampledSupport {
    grid: ProductGrid,
    values: Vec<f64>,
}

impl SampledSupport {
    pub fn new(grid: ProductGrid, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::InvalidBody(format!(
                "sampled support has {} values, grid has {}",
                values.len(),
                grid.len()
            )));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidBody("sampled values must be finite".into()));
        }
        let az = grid.plane_grid().azimuths();
        if az.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidBody(
                "sampled support needs strictly increasing plane azimuths".into(),
            ));
        }
        Ok(Self { grid, values })
    }

    pub fn from_rows(grid: ProductGrid, rows: Vec<Vec<f64>>) -> Result<Self> {
        let values = rows.into_iter().flatten().collect();
        Self::new(grid, values)
    }

    pub fn from_fn(grid: ProductGrid, f: impl Fn(&UnitVector) -> f64) -> Result<Self> {
        let mut values = Vec::with_capacity(grid.len());
        for j in 0..grid.plane_len() {
            for k in 0..grid.circle_len() {
                values.push(f(&grid.point(j, k)));
            }
        }
        Self::new(grid, values)
    }

    pub fn from_body(grid: ProductGrid, body: &SupportFunction) -> Result<Self> {
        Self::from_fn(grid, |u| body.support(u))
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

    pub fn row(&self, j: usize) -> &[f64] {
        let m = self.grid.circle_len();
        &self.values[j * m..(j + 1) * m]
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0f64, |a, v| a.max(v.abs()))
    }

    /// Periodic linear interpolation along one circle row.
    fn row_interp(&self, j: usize, theta: f64) -> f64 {
        let m = self.grid.circle_len();
        let step = self.grid.circle_step();
        let x = theta.rem_euclid(std::f64::consts::TAU) / step - 0.5;
        let k0 = x.floor();
        let frac = x - k0;
        let k0 = (k0 as i64).rem_euclid(m as i64) as usize;
        let k1 = (k0 + 1) % m;
        let row = self.row(j);
        (1.0 - frac) * row[k0] + frac * row[k1]
    }

    /// Chart angle of a direction in plane `j`'s canonical basis, from the
    /// normalized projection of the direction onto the plane.
    fn chart_angle(&self, j: usize, coords: &[f64]) -> f64 {
        let w = self.grid.plane_grid().plane(j).w().coords();
        let n = coords.len();
        let along_w = dot(&coords[..n - 1], &w[..n - 1]);
        along_w.atan2(coords[n - 1])
    }

    /// Bilinear interpolation in (plane azimuth, circle angle). The circle
    /// angle is taken against each neighboring plane's own canonical basis,
    /// which keeps the interpolation consistent across the `w ∼ -w`
    /// canonicalization boundary.
    pub fn interpolate(&self, coords: &[f64]) -> f64 {
        let n = self.grid.dim();
        debug_assert_eq!(coords.len(), n);
        if n == 2 {
            return self.row_interp(0, self.chart_angle(0, coords));
        }
        let p = self.grid.plane_len();
        if p == 1 {
            return self.row_interp(0, self.chart_angle(0, coords));
        }
        let az = self.grid.plane_grid().azimuths();
        let beta = coords[1].atan2(coords[0]).rem_euclid(std::f64::consts::PI);
        // Locate the azimuth interval containing beta (cyclic with period π).
        let (j0, j1, t) = if beta < az[0] {
            let lo = az[p - 1] - std::f64::consts::PI;
            (p - 1, 0, (beta - lo) / (az[0] - lo))
        } else if beta >= az[p - 1] {
            let hi = az[0] + std::f64::consts::PI;
            (p - 1, 0, (beta - az[p - 1]) / (hi - az[p - 1]))
        } else {
            let j = az.partition_point(|a| *a <= beta) - 1;
            (j, j + 1, (beta - az[j]) / (az[j + 1] - az[j]))
        };
        let v0 = self.row_interp(j0, self.chart_angle(j0, coords));
        let v1 = self.row_interp(j1, self.chart_angle(j1, coords));
        (1.0 - t) * v0 + t * v1
    }
}

/// The projection of a body onto an axial plane, in the plane's chart.
#[derive(Debug, Clone)]
pub enum PlanarBody {
    /// Vertices in convex position, counterclockwise.
    Polygon(Vec<[f64; 2]>),
    Sampled { grid: CircleGrid, values: Vec<f64> },
}

impl PlanarBody {
    pub fn support(&self, theta: f64) -> f64 {
        match self {
            Self::Polygon(vs) => {
                let (s, c) = theta.sin_cos();
                vs.iter()
                    .map(|v| v[0] * c + v[1] * s)
                    .fold(f64::NEG_INFINITY, f64::max)
            }
            Self::Sampled { grid, values } => {
                // Periodic linear interpolation on the grid.
                let m = grid.len();
                let step = grid.step();
                let x = theta.rem_euclid(std::f64::consts::TAU) / step - 0.5;
                let k0 = x.floor();
                let frac = x - k0;
                let k0 = (k0 as i64).rem_euclid(m as i64) as usize;
                (1.0 - frac) * values[k0] + frac * values[(k0 + 1) % m]
            }
        }
    }
}

/// Monotone-chain convex hull; returns the hull counterclockwise with
/// collinear points dropped. A single point or a pair passes through.
pub fn convex_hull_2d(points: &[[f64; 2]]) -> Vec<[f64; 2]> {
    let mut pts: Vec<[f64; 2]> = points.to_vec();
    pts.sort_by(|a, b| a.partial_cmp(b).unwrap());
    pts.dedup_by(|a, b| a == b);
    if pts.len() <= 2 {
        return pts;
    }
    let cross = |o: &[f64; 2], a: &[f64; 2], b: &[f64; 2]| {
        (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
    };
    let mut lower: Vec<[f64; 2]> = Vec::new();
    for &p in &pts {
        while lower.len() >= 2 && cross(&lower[lower.len() - 2], &lower[lower.len() - 1], &p) <= 0.0
        {
            lower.pop();
        }
        lower.push(p);
    }
    let mut upper: Vec<[f64; 2]> = Vec::new();
    for &p in pts.iter().rev() {
        while upper.len() >= 2 && cross(&upper[upper.len() - 2], &upper[upper.len() - 1], &p) <= 0.0
        {
            upper.pop();
        }
        upper.push(p);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    if lower.len() < 2 {
        // All input points collinear; keep the extremes.
        return vec![pts[0], *pts.last().unwrap()];
    }
    lower
}

/// Projects a body onto the plane of `grid`. Polytopes, disks, and axial
/// segments take the exact path (planar hull of projected vertices); all
/// other variants are sampled as the restriction of the support function.
pub fn project(body: &SupportFunction, grid: &CircleGrid) -> Result<PlanarBody> {
    let n = grid.plane().dim();
    if body.dim() != n {
        return Err(Error::InvalidBody(format!(
            "body dimension {} does not match plane dimension {n}",
            body.dim()
        )));
    }
    match body {
        SupportFunction::Polytope { vertices } => {
            let w = grid.plane().w().coords();
            let pts: Vec<[f64; 2]> = vertices
                .iter()
                .map(|v| [v[n - 1], dot(&v[..n - 1], &w[..n - 1])])
                .collect();
            Ok(PlanarBody::Polygon(convex_hull_2d(&pts)))
        }
        SupportFunction::DiskBody { radius, .. } => Ok(PlanarBody::Polygon(vec![
            [0.0, -radius],
            [0.0, *radius],
        ])),
        SupportFunction::AxialSegment { half_length, .. } => Ok(PlanarBody::Polygon(vec![
            [-half_length, 0.0],
            [*half_length, 0.0],
        ])),
        _ => {
            let values: Vec<f64> = grid
                .angles()
                .iter()
                .map(|&t| body.support(&embed(t, grid.plane())))
                .collect();
            Ok(PlanarBody::Sampled {
                grid: grid.clone(),
                values,
            })
        }
    }
}

/// First intrinsic volume of a planar body: half the circle integral of the
/// support function, which is half the perimeter; exact for polygons.
pub fn planar_v1(body: &PlanarBody) -> f64 {
    match body {
        PlanarBody::Polygon(vs) => {
            if vs.len() < 2 {
                return 0.0;
            }
            let mut per = 0.0;
            for i in 0..vs.len() {
                let a = vs[i];
                let b = vs[(i + 1) % vs.len()];
                per += ((b[0] - a[0]).powi(2) + (b[1] - a[1]).powi(2)).sqrt();
            }
            if vs.len() == 2 {
                // The cyclic loop walks a segment twice.
                per /= 2.0;
                return per;
            }
            per / 2.0
        }
        PlanarBody::Sampled { grid, values } => 0.5 * integrate_circle(grid, values),
    }
}

/// Dedicated 2D Steiner point of a planar body via quadrature on the grid.
pub fn planar_steiner(body: &PlanarBody, grid: &CircleGrid) -> [f64; 2] {
    let values: Vec<f64> = grid.angles().iter().map(|&t| body.support(t)).collect();
    crate::christoffel2d::steiner_2d(grid, &values)
}

/// Steiner point `s(K) = (1/κ_n) ∫ h_K(u) u du` by cylinder-coordinate
/// quadrature on the product grid.
pub fn steiner_point(body: &SupportFunction, grid: &ProductGrid) -> Vec<f64> {
    let n = grid.dim();
    let mut out = vec![0.0; n];
    for (i, o) in out.iter_mut().enumerate() {
        *o = crate::sphere_geom::integrate_sphere_fn(grid, |u| {
            body.support(u) * u.coords()[i]
        });
    }
    let kn = unit_ball_volume(n);
    for x in &mut out {
        *x /= kn;
    }
    out
}

/// The support function of the pole face `F(K, ±e_n)`, translated into
/// `e_n^⊥` and evaluated at a chart angle of that hyperplane (basis
/// `(e_1, e_2)` for n = 3). Exact per variant; sampled bodies are not
/// supported because face structure is invisible at finite sampling.
pub fn pole_face_support(body: &SupportFunction, north: bool, theta: f64) -> Result<f64> {
    let (s, c) = theta.sin_cos();
    match body {
        SupportFunction::Ball { center, .. } | SupportFunction::Ellipsoid { center, .. } => {
            // Smooth variants touch the supporting hyperplane in one point,
            // whose horizontal coordinates are the center's.
            Ok(center[0] * c + center.get(1).copied().unwrap_or(0.0) * s)
        }
        SupportFunction::Polytope { vertices } => {
            let pts = pole_face_vertices(vertices, north);
            Ok(pts
                .iter()
                .map(|v| v[0] * c + v[1] * s)
                .fold(f64::NEG_INFINITY, f64::max))
        }
        SupportFunction::DiskBody { radius, .. } => Ok(*radius),
        SupportFunction::AxialSegment { .. } => Ok(0.0),
        SupportFunction::MinkowskiSum { parts } => {
            let mut acc = 0.0;
            for p in parts {
                acc += pole_face_support(p, north, theta)?;
            }
            Ok(acc)
        }
        SupportFunction::Sampled(_) => Err(Error::UnsupportedVariant(
            "pole faces of sampled bodies are not defined",
        )),
    }
}

fn pole_face_vertices(vertices: &[Vec<f64>], north: bool) -> Vec<[f64; 2]> {
    let n = vertices[0].len();
    let sign = if north { 1.0 } else { -1.0 };
    let best = vertices
        .iter()
        .map(|v| sign * v[n - 1])
        .fold(f64::NEG_INFINITY, f64::max);
    let scale = vertices
        .iter()
        .flat_map(|v| v.iter())
        .fold(1.0f64, |a, x| a.max(x.abs()));
    vertices
        .iter()
        .filter(|v| sign * v[n - 1] >= best - 1e-12 * scale)
        .map(|v| [v[0], v.get(1).copied().unwrap_or(0.0)])
        .collect()
}

/// First intrinsic volumes of the faces `F(K, e_n)` and `F(K, -e_n)`,
/// computed exactly per variant (0 for smooth bodies; perimeter/2, length
/// or 0 for polytope faces; additive over Minkowski sums).
pub fn pole_faces(body: &SupportFunction) -> Result<(f64, f64)> {
    Ok((face_v1(body, true)?, face_v1(body, false)?))
}

fn face_v1(body: &SupportFunction, north: bool) -> Result<f64> {
    let n = body.dim();
    match body {
        SupportFunction::Ball { .. } | SupportFunction::Ellipsoid { .. } => Ok(0.0),
        SupportFunction::AxialSegment { .. } => Ok(0.0),
        SupportFunction::DiskBody { radius, dim } => {
            // V1 of the (n-1)-ball of that radius.
            let j = dim - 1;
            Ok(radius * j as f64 * unit_ball_volume(j) / unit_ball_volume(j - 1))
        }
        SupportFunction::Polytope { vertices } => {
            if n == 2 {
                let pts = pole_face_vertices(vertices, north);
                let lo = pts.iter().map(|p| p[0]).fold(f64::INFINITY, f64::min);
                let hi = pts.iter().map(|p| p[0]).fold(f64::NEG_INFINITY, f64::max);
                return Ok(hi - lo);
            }
            if n != 3 {
                return Err(Error::UnsupportedDimension(n));
            }
            let hull = convex_hull_2d(&pole_face_vertices(vertices, north));
            Ok(planar_v1(&PlanarBody::Polygon(hull)))
        }
        SupportFunction::MinkowskiSum { parts } => {
            let mut acc = 0.0;
            for p in parts {
                acc += face_v1(p, north)?;
            }
            Ok(acc)
        }
        SupportFunction::Sampled(_) => Err(Error::UnsupportedVariant(
            "pole faces of sampled bodies are not defined",
        )),
    }
}

// ---------------------------------------------------------------------------
// Support-function verification
// ---------------------------------------------------------------------------

/// Where a convexity violation was observed.
#[derive(Debug, Clone)]
pub enum Witness {
    /// Negative second difference `h'' + h < -tol` on an axial circle.
    CircleKink { plane: usize, index: usize, angle: f64 },
    /// Sublinearity failure `H(x+y) > H(x) + H(y) + tol`.
    SublinearPair { x: Vec<f64>, y: Vec<f64> },
    /// The per-plane limits at a pole disagree.
    PoleSpread { north: bool },
}

/// Outcome of the support-function battery.
#[derive(Debug, Clone)]
pub struct ConvexityReport {
    pub pass: bool,
    /// Largest violation observed across all checks (may be negative when
    /// every check holds with slack).
    pub worst_violation: f64,
    pub tolerance: f64,
    pub witness: Option<Witness>,
}

impl ConvexityReport {
    /// Re-evaluates the cited violation on the given samples; deterministic,
    /// so it reproduces `worst_violation` exactly on unchanged input.
    pub fn recheck(&self, h: &SampledSupport) -> Option<f64> {
        match self.witness.as_ref()? {
            Witness::CircleKink { plane, index, .. } => {
                Some(-circle_density(h, *plane, *index))
            }
            Witness::SublinearPair { x, y } => {
                let z: Vec<f64> = x.iter().zip(y).map(|(a, b)| a + b).collect();
                Some(extension_of(h, &z) - extension_of(h, x) - extension_of(h, y))
            }
            Witness::PoleSpread { north } => {
                let (lo, hi) = pole_value_range(h, *north);
                Some(hi - lo)
            }
        }
    }
}

fn extension_of(h: &SampledSupport, x: &[f64]) -> f64 {
    let norm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
    if norm == 0.0 {
        return 0.0;
    }
    let unit: Vec<f64> = x.iter().map(|v| v / norm).collect();
    norm * h.interpolate(&unit)
}

fn circle_density(h: &SampledSupport, j: usize, k: usize) -> f64 {
    let m = h.grid().circle_len();
    let step = h.grid().circle_step();
    let row = h.row(j);
    (row[(k + m - 1) % m] - 2.0 * row[k] + row[(k + 1) % m]) / (step * step) + row[k]
}

/// One-sided quadratic extrapolations of every row to a pole; returns the
/// (min, max) over all planes and both approach sides.
fn pole_value_range(h: &SampledSupport, north: bool) -> (f64, f64) {
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for j in 0..h.grid().plane_len() {
        for v in pole_extrapolations(h.row(j), north) {
            lo = lo.min(v);
            hi = hi.max(v);
        }
    }
    (lo, hi)
}

/// Quadratic extrapolation through the three samples nearest the pole on
/// each side: with offsets Δ/2, 3Δ/2, 5Δ/2 the limit is
/// `(15 v0 - 10 v1 + 3 v2)/8`.
pub(crate) fn pole_extrapolations(row: &[f64], north: bool) -> [f64; 2] {
    let m = row.len();
    let ex = |a: f64, b: f64, c: f64| (15.0 * a - 10.0 * b + 3.0 * c) / 8.0;
    if north {
        [
            ex(row[0], row[1], row[2]),
            ex(row[m - 1], row[m - 2], row[m - 3]),
        ]
    } else {
        let h = m / 2;
        [
            ex(row[h - 1], row[h - 2], row[h - 3]),
            ex(row[h], row[h + 1], row[h + 2]),
        ]
    }
}

/// Default battery tolerance: `10 · (2π/m)² · max|h|`, tied to the grid
/// resolution so exact support functions pass with their discretization
/// error while genuine kinks (which scale like 1/Δθ in the second
/// difference) fail by orders of magnitude.
pub fn default_convexity_tol(h: &SampledSupport) -> f64 {
    let step = h.grid().circle_step();
    10.0 * step * step * h.max_abs()
}

pub const SUBLINEARITY_PAIRS: usize = 100_000;
const SUBLINEARITY_SEED: u64 = 0x5ca1_ab1e;

/// Necessary-condition battery for "these samples are a support function":
///
/// (a) per-axial-circle periodic second differences `h'' + h >= -tol`
///     (the planar characterization applied to every restriction),
/// (b) sublinearity `H(x+y) <= H(x) + H(y) + tol` of the 1-homogeneous
///     interpolated extension over a deterministic pseudo-random set of
///     direction pairs,
/// (c) agreement of the per-plane limits at both poles within tol.
///
/// Conclusive for rejection (the witness re-evaluates to the reported
/// violation); acceptance is calibrated on sampled exact support functions.
pub fn check_support_function(h: &SampledSupport, tol: Option<f64>) -> ConvexityReport {
    check_support_function_with(h, tol, SUBLINEARITY_PAIRS)
}

pub fn check_support_function_with(
    h: &SampledSupport,
    tol: Option<f64>,
    pairs: usize,
) -> ConvexityReport {
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    let tol = tol.unwrap_or_else(|| default_convexity_tol(h));
    let n = h.grid().dim();
    let p = h.grid().plane_len();
    let m = h.grid().circle_len();

    let mut worst = f64::NEG_INFINITY;
    let mut witness = None;

    // (a) circle second differences.
    for j in 0..p {
        for k in 0..m {
            let v = -circle_density(h, j, k);
            if v > worst {
                worst = v;
                witness = Some(Witness::CircleKink {
                    plane: j,
                    index: k,
                    angle: h.grid().circle_angles()[k],
                });
            }
        }
    }

    // (b) sublinearity of the interpolated extension. Pairs closer than two
    // grid steps (or nearly antipodal) are skipped: there the sublinearity
    // slack vanishes and interpolation noise dominates, while the local
    // behavior is already covered by (a).
    let mut rng = ChaCha8Rng::seed_from_u64(SUBLINEARITY_SEED);
    let min_sep = 2.0 * h.grid().circle_step();
    let cos_min = min_sep.cos();
    for _ in 0..pairs {
        let x = random_direction(&mut rng, n);
        let y = random_direction(&mut rng, n);
        let d = dot(&x, &y);
        if d > cos_min || d < -cos_min {
            continue;
        }
        let z: Vec<f64> = x.iter().zip(&y).map(|(a, b)| a + b).collect();
        let v = extension_of(h, &z) - extension_of(h, &x) - extension_of(h, &y);
        if v > worst {
            worst = v;
            witness = Some(Witness::SublinearPair { x, y });
        }
    }

    // (c) pole continuity across planes (void for a single plane: a planar
    // body may legitimately have corners at chart angles 0 and π).
    if n >= 3 && p > 1 {
        for &north in &[true, false] {
            let (lo, hi) = pole_value_range(h, north);
            let v = hi - lo;
            if v > worst {
                worst = v;
                witness = Some(Witness::PoleSpread { north });
            }
        }
    }

    ConvexityReport {
        pass: worst <= tol,
        worst_violation: worst,
        tolerance: tol,
        witness,
    }
}

fn random_direction(rng: &mut impl rand::Rng, n: usize) -> Vec<f64> {
    use rand_distr::{Distribution, StandardNormal};
    loop {
        let v: Vec<f64> = (0..n).map(|_| StandardNormal.sample(rng)).collect();
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > 1e-6 {
            return v.into_iter().map(|x| x / norm).collect();
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sphere_geom::{AxialPlane, PlaneGrid};
    use approx::assert_abs_diff_eq;
    use std::f64::consts::PI;

    fn unit_ball() -> SupportFunction {
        SupportFunction::Ball {
            radius: 1.0,
            center: vec![0.0, 0.0, 0.0],
        }
    }

    fn ellipsoid112() -> SupportFunction {
        SupportFunction::Ellipsoid {
            semi_axes: vec![1.0, 1.0, 2.0],
            center: vec![0.0, 0.0, 0.0],
        }
    }

    fn cube() -> SupportFunction {
        let mut vertices = Vec::new();
        for &x in &[-1.0, 1.0] {
            for &y in &[-1.0, 1.0] {
                for &z in &[-1.0, 1.0] {
                    vertices.push(vec![x, y, z]);
                }
            }
        }
        SupportFunction::Polytope { vertices }
    }

    fn cylinder() -> SupportFunction {
        SupportFunction::MinkowskiSum {
            parts: vec![
                SupportFunction::DiskBody { radius: 1.0, dim: 3 },
                SupportFunction::AxialSegment { half_length: 1.0, dim: 3 },
            ],
        }
    }

    #[test]
    fn support_values() {
        let u = UnitVector::normalized(vec![1.0, 1.0, 1.0]).unwrap();
        assert_abs_diff_eq!(unit_ball().support(&u), 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(
            ellipsoid112().support(&UnitVector::axis(3)),
            2.0,
            epsilon = 1e-15
        );
        assert_abs_diff_eq!(cube().support(&u), 3.0f64.sqrt(), epsilon = 1e-14);
        let e1 = UnitVector::coordinate_axis(3, 0);
        assert_abs_diff_eq!(
            SupportFunction::DiskBody { radius: 2.0, dim: 3 }.support(&e1),
            2.0,
            epsilon = 1e-15
        );
        assert_abs_diff_eq!(
            SupportFunction::AxialSegment { half_length: 1.5, dim: 3 }
                .support(&UnitVector::axis(3)),
            1.5,
            epsilon = 1e-15
        );
    }

    #[test]
    fn homogeneity_of_extension() {
        let bodies = [unit_ball(), ellipsoid112(), cube(), cylinder()];
        let x = [0.3, -0.8, 0.52];
        for body in &bodies {
            for lam in [0.5, 2.0] {
                let xs: Vec<f64> = x.iter().map(|v| v * lam).collect();
                assert_abs_diff_eq!(
                    body.extension(&xs),
                    lam * body.extension(&x),
                    epsilon = 1e-14
                );
            }
        }
    }

    #[test]
    fn minkowski_additivity() {
        let sum = SupportFunction::MinkowskiSum {
            parts: vec![unit_ball(), ellipsoid112(), cube()],
        };
        let u = UnitVector::normalized(vec![0.2, -0.5, 1.0]).unwrap();
        let total = unit_ball().support(&u) + ellipsoid112().support(&u) + cube().support(&u);
        assert_abs_diff_eq!(sum.support(&u), total, epsilon = 0.0);
    }

    #[test]
    fn projection_examples() {
        let grid = CircleGrid::new(AxialPlane::from_azimuth(0.7), 128).unwrap();
        // Ball projects to the unit disk in every plane.
        let disk = project(&unit_ball(), &grid).unwrap();
        assert_abs_diff_eq!(planar_v1(&disk), PI, epsilon = 1e-10);

        // Ellipsoid restriction: h(θ) = sqrt(sin²θ + 4 cos²θ) in the chart.
        let grid0 = CircleGrid::new(AxialPlane::from_azimuth(0.0), 128).unwrap();
        let proj = project(&ellipsoid112(), &grid0).unwrap();
        for &t in grid0.angles() {
            let expect = (t.sin().powi(2) + 4.0 * t.cos().powi(2)).sqrt();
            assert_abs_diff_eq!(proj.support(t), expect, epsilon = 1e-12);
        }

        // Cube at azimuth π/4: the hull degenerates to a rectangle of
        // width 2√2 (in the w direction) and height 2.
        let grid45 = CircleGrid::new(AxialPlane::from_azimuth(PI / 4.0), 64).unwrap();
        let proj = project(&cube(), &grid45).unwrap();
        match &proj {
            PlanarBody::Polygon(vs) => assert_eq!(vs.len(), 4),
            _ => panic!("expected exact polygon"),
        }
        assert_abs_diff_eq!(proj.support(0.0), 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(proj.support(PI / 2.0), 2.0f64.sqrt(), epsilon = 1e-12);
        assert_abs_diff_eq!(
            planar_v1(&proj),
            (4.0 + 4.0 * 2.0f64.sqrt()) / 2.0,
            epsilon = 1e-12
        );
    }

    #[test]
    fn planar_v1_examples() {
        let grid = CircleGrid::new(AxialPlane::planar(), 256).unwrap();
        let disk = PlanarBody::Sampled {
            grid: grid.clone(),
            values: vec![1.0; 256],
        };
        assert_abs_diff_eq!(planar_v1(&disk), PI, epsilon = 1e-10);

        let seg = PlanarBody::Polygon(vec![[-1.25, 0.0], [1.25, 0.0]]);
        assert_abs_diff_eq!(planar_v1(&seg), 2.5, epsilon = 1e-15);

        let s = 0.8;
        let square = PlanarBody::Polygon(convex_hull_2d(&[
            [0.0, 0.0],
            [s, 0.0],
            [s, s],
            [0.0, s],
        ]));
        assert_abs_diff_eq!(planar_v1(&square), 2.0 * s, epsilon = 1e-12);
    }

    #[test]
    fn steiner_point_examples() {
        let grid = ProductGrid::new(PlaneGrid::uniform(3, 16).unwrap(), 32768).unwrap();
        let s = steiner_point(&unit_ball(), &grid);
        for x in &s {
            assert_abs_diff_eq!(*x, 0.0, epsilon = 1e-8);
        }

        let x0 = [0.3, -0.2, 0.7];
        let moved = unit_ball().translated(&x0).unwrap();
        let s = steiner_point(&moved, &grid);
        for (a, b) in s.iter().zip(&x0) {
            assert_abs_diff_eq!(a, b, epsilon = 1e-8);
        }

        let s = steiner_point(&ellipsoid112(), &grid);
        for x in &s {
            assert_abs_diff_eq!(*x, 0.0, epsilon = 1e-8);
        }
    }

    #[test]
    fn steiner_equivariance_all_variants() {
        let grid = ProductGrid::new(PlaneGrid::uniform(3, 16).unwrap(), 32768).unwrap();
        let x0 = [0.15, 0.4, -0.33];
        for body in [unit_ball(), ellipsoid112(), cube()] {
            let a = steiner_point(&body, &grid);
            let b = steiner_point(&body.translated(&x0).unwrap(), &grid);
            for i in 0..3 {
                assert_abs_diff_eq!(b[i] - a[i], x0[i], epsilon = 1e-8);
            }
        }
    }

    #[test]
    fn steiner_commutes_with_projection() {
        let grid = ProductGrid::new(PlaneGrid::uniform(3, 16).unwrap(), 8192).unwrap();
        let body = SupportFunction::MinkowskiSum {
            parts: vec![
                ellipsoid112().translated(&[0.2, -0.1, 0.45]).unwrap(),
                cube().scaled(0.3).unwrap(),
            ],
        };
        let s3 = steiner_point(&body, &grid);
        for az in [0.0, 0.9, 2.2] {
            let plane = AxialPlane::from_azimuth(az);
            let cg = CircleGrid::new(plane.clone(), 8192).unwrap();
            let proj = project(&body, &cg).unwrap();
            let s2 = planar_steiner(&proj, &cg);
            let w = plane.w().coords();
            let expect_axis = s3[2];
            let expect_w = s3[0] * w[0] + s3[1] * w[1];
            assert_abs_diff_eq!(s2[0], expect_axis, epsilon = 1e-6);
            assert_abs_diff_eq!(s2[1], expect_w, epsilon = 1e-6);
        }
    }

    #[test]
    fn pole_faces_examples() {
        assert_eq!(pole_faces(&unit_ball()).unwrap(), (0.0, 0.0));
        let (n, s) = pole_faces(&cylinder()).unwrap();
        assert_abs_diff_eq!(n, PI, epsilon = 1e-15);
        assert_abs_diff_eq!(s, PI, epsilon = 1e-15);
        let (n, s) = pole_faces(&cube()).unwrap();
        assert_abs_diff_eq!(n, 4.0, epsilon = 1e-15);
        assert_abs_diff_eq!(s, 4.0, epsilon = 1e-15);
        let grid = ProductGrid::standard(3, 4, 64).unwrap();
        let sampled = SupportFunction::Sampled(SampledSupport::from_body(grid, &unit_ball()).unwrap());
        assert!(pole_faces(&sampled).is_err());
    }

    #[test]
    fn interpolation_matches_samples_and_analytic_values() {
        let grid = ProductGrid::standard(3, 64, 256).unwrap();
        let body = ellipsoid112();
        let sampled = SampledSupport::from_body(grid.clone(), &body).unwrap();
        // Exact at grid nodes.
        for &(j, k) in &[(0usize, 0usize), (5, 17), (63, 255), (31, 128)] {
            let u = grid.point(j, k);
            assert_abs_diff_eq!(
                sampled.interpolate(u.coords()),
                body.support(&u),
                epsilon = 1e-12
            );
        }
        // Close off the grid.
        let u = UnitVector::normalized(vec![0.4, 0.31, 0.86]).unwrap();
        assert_abs_diff_eq!(
            sampled.interpolate(u.coords()),
            body.support(&u),
            epsilon = 1e-3
        );
    }

    #[test]
    fn battery_accepts_the_zoo() {
        let grid = ProductGrid::standard(3, 32, 256).unwrap();
        for body in [
            unit_ball(),
            ellipsoid112(),
            cube(),
            cylinder(),
            SupportFunction::DiskBody { radius: 1.0, dim: 3 },
            SupportFunction::AxialSegment { half_length: 1.0, dim: 3 },
        ] {
            let h = SampledSupport::from_body(grid.clone(), &body).unwrap();
            let report = check_support_function_with(&h, None, 20_000);
            assert!(
                report.pass,
                "battery rejected a valid body: violation {} tol {}",
                report.worst_violation, report.tolerance
            );
        }
    }

    #[test]
    fn battery_rejects_kinked_witness() {
        // h(u) = 1 - 0.5 |u_1| has a downward kink; on the azimuth-0 plane
        // the restriction is 1 - 0.5 |sin θ| with the kink at the poles.
        let grid = ProductGrid::standard(3, 16, 128).unwrap();
        let h = SampledSupport::from_fn(grid, |u| 1.0 - 0.5 * u.coords()[0].abs()).unwrap();
        let report = check_support_function(&h, None);
        assert!(!report.pass);
        assert!(report.worst_violation > 1.0);
        // The witness reproduces the violation on re-evaluation.
        let again = report.recheck(&h).unwrap();
        assert_abs_diff_eq!(again, report.worst_violation, epsilon = 1e-12);
    }

    #[test]
    fn midpoint_probe_detects_equatorial_kink() {
        // Non-convexity along the equator: 2 H(0,1,0) > H(δ,1,0) + H(-δ,1,0).
        let grid = ProductGrid::standard(3, 64, 512).unwrap();
        let h = SampledSupport::from_fn(grid, |u| 1.0 - 0.5 * u.coords()[0].abs()).unwrap();
        let delta = 0.05;
        let lhs = 2.0 * extension_of(&h, &[0.0, 1.0, 0.0]);
        let rhs = extension_of(&h, &[delta, 1.0, 0.0]) + extension_of(&h, &[-delta, 1.0, 0.0]);
        assert!(lhs > rhs + 0.01);
    }
}
