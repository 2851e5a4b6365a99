//! Plain structured-text formats: body specifications (JSON), family files,
//! planar measure files, tabular exports, and report documents.
//!
//! Floats are written with 17 fractional digits in scientific notation, so
//! every emitted file re-parses to bit-identical values. All writers emit in
//! a canonical order; outputs are byte-identical across runs and thread
//! counts.

use std::fmt::Write as _;
use std::path::Path;

use crate::bodies::{SampledSupport, SupportFunction};
use crate::disk_forward::{ForwardResult, PoleMass};
use crate::error::{Error, Result};
use crate::inverse_solver::{SolveReport, Verdict};
use crate::measures::{Atom, CircleMeasure, ConditionReport, DisintegratedMeasure, SphereDensity};
use crate::sphere_geom::{polar_angle, AxialPlane, CircleGrid, PlaneGrid};

fn fmt(v: f64) -> String {
    format!("{v:.17e}")
}

// ---------------------------------------------------------------------------
// Body specifications (JSON)
// ---------------------------------------------------------------------------

pub fn parse_body(text: &str) -> Result<SupportFunction> {
    let body: SupportFunction = serde_json::from_str(text)?;
    body.validate()?;
    Ok(body)
}

pub fn read_body(path: &Path) -> Result<SupportFunction> {
    parse_body(&std::fs::read_to_string(path)?)
}

pub fn body_to_string(body: &SupportFunction) -> Result<String> {
    Ok(serde_json::to_string_pretty(body)?)
}

// ---------------------------------------------------------------------------
// Token stream with line tracking
// ---------------------------------------------------------------------------

struct Tokens {
    toks: Vec<(usize, String)>,
    pos: usize,
}

impl Tokens {
    fn new(text: &str) -> Self {
        let mut toks = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("");
            for t in line.split_whitespace() {
                toks.push((i + 1, t.to_string()));
            }
        }
        Self { toks, pos: 0 }
    }

    fn last_line(&self) -> usize {
        self.toks.last().map(|(l, _)| *l).unwrap_or(0)
    }

    fn next(&mut self) -> Result<(usize, &str)> {
        if self.pos >= self.toks.len() {
            return Err(Error::Parse {
                line: self.last_line(),
                msg: "unexpected end of file".into(),
            });
        }
        let (line, tok) = &self.toks[self.pos];
        self.pos += 1;
        Ok((*line, tok.as_str()))
    }

    fn expect(&mut self, keyword: &str) -> Result<usize> {
        let (line, tok) = self.next()?;
        if tok != keyword {
            return Err(Error::Parse {
                line,
                msg: format!("expected `{keyword}`, found `{tok}`"),
            });
        }
        Ok(line)
    }

    fn usize(&mut self) -> Result<usize> {
        let (line, tok) = self.next()?;
        tok.parse().map_err(|_| Error::Parse {
            line,
            msg: format!("expected an integer, found `{tok}`"),
        })
    }

    fn f64(&mut self) -> Result<f64> {
        let (line, tok) = self.next()?;
        tok.parse().map_err(|_| Error::Parse {
            line,
            msg: format!("expected a number, found `{tok}`"),
        })
    }

    fn at_end(&self) -> bool {
        self.pos >= self.toks.len()
    }
}

fn push_values(out: &mut String, values: &[f64]) {
    for chunk in values.chunks(4) {
        let row: Vec<String> = chunk.iter().map(|v| fmt(*v)).collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
}

// ---------------------------------------------------------------------------
// Family files
// ---------------------------------------------------------------------------

/// Serializes a family plus its pole masses.
///
/// Layout: a `family-format 1` header, `dimension`, `planes`, `circle`,
/// `pole-mass <north> <south>`, then per plane: `plane <j>`,
/// `azimuth <value>`, `weight <value>`, `rho <value>`,
/// `density <count>` followed by the samples, and `atoms <count>` followed
/// by `<angle> <mass>` pairs.
pub fn family_to_string(fam: &DisintegratedMeasure, pole: PoleMass) -> String {
    let mut out = String::new();
    let pg = fam.plane_grid();
    out.push_str("family-format 1\n");
    let _ = writeln!(out, "dimension {}", fam.dim());
    let _ = writeln!(out, "planes {}", pg.len());
    let _ = writeln!(out, "circle {}", fam.circle_len());
    let _ = writeln!(out, "pole-mass {} {}", fmt(pole.north), fmt(pole.south));
    for (j, fiber) in fam.fibers().iter().enumerate() {
        let _ = writeln!(out, "plane {j}");
        let _ = writeln!(out, "azimuth {}", fmt(pg.azimuths()[j]));
        let _ = writeln!(out, "weight {}", fmt(pg.weights()[j]));
        let _ = writeln!(out, "rho {}", fmt(fam.rho()[j]));
        let _ = writeln!(out, "density {}", fiber.density().len());
        push_values(&mut out, fiber.density());
        let _ = writeln!(out, "atoms {}", fiber.atoms().len());
        for a in fiber.atoms() {
            let _ = writeln!(out, "{} {}", fmt(a.angle), fmt(a.mass));
        }
    }
    out
}

pub fn parse_family(text: &str) -> Result<(DisintegratedMeasure, PoleMass)> {
    let mut t = Tokens::new(text);
    t.expect("family-format")?;
    let version = t.usize()?;
    if version != 1 {
        return Err(Error::Parse {
            line: 1,
            msg: format!("unsupported family format version {version}"),
        });
    }
    t.expect("dimension")?;
    let dim = t.usize()?;
    t.expect("planes")?;
    let p = t.usize()?;
    t.expect("circle")?;
    let m = t.usize()?;
    t.expect("pole-mass")?;
    let pole = PoleMass {
        north: t.f64()?,
        south: t.f64()?,
    };

    let mut planes = Vec::with_capacity(p);
    let mut weights = Vec::with_capacity(p);
    let mut azimuths = Vec::with_capacity(p);
    let mut fibers = Vec::with_capacity(p);
    let mut rho = Vec::with_capacity(p);
    for j in 0..p {
        let line = t.expect("plane")?;
        let index = t.usize()?;
        if index != j {
            return Err(Error::Parse {
                line,
                msg: format!("expected plane {j}, found {index}"),
            });
        }
        t.expect("azimuth")?;
        let azimuth = t.f64()?;
        t.expect("weight")?;
        weights.push(t.f64()?);
        t.expect("rho")?;
        rho.push(t.f64()?);
        t.expect("density")?;
        let count = t.usize()?;
        if count != m {
            return Err(Error::Parse {
                line,
                msg: format!("plane {j} lists {count} density samples, expected {m}"),
            });
        }
        let mut density = Vec::with_capacity(m);
        for _ in 0..m {
            density.push(t.f64()?);
        }
        t.expect("atoms")?;
        let n_atoms = t.usize()?;
        let mut atoms = Vec::with_capacity(n_atoms);
        for _ in 0..n_atoms {
            atoms.push(Atom {
                angle: t.f64()?,
                mass: t.f64()?,
            });
        }
        let plane = match dim {
            2 => AxialPlane::planar(),
            3 => AxialPlane::from_azimuth(azimuth),
            d => return Err(Error::UnsupportedDimension(d)),
        };
        azimuths.push(azimuth);
        planes.push(plane.clone());
        let grid = CircleGrid::new(plane, m)?;
        fibers.push(CircleMeasure::with_atoms(grid, density, atoms)?);
    }
    if !t.at_end() {
        let (line, tok) = t.next()?;
        return Err(Error::Parse {
            line,
            msg: format!("trailing content `{tok}`"),
        });
    }
    let plane_grid = PlaneGrid::from_parts(dim, planes, weights, azimuths)?;
    let fam = DisintegratedMeasure::with_rho(plane_grid, fibers, rho)?;
    Ok((fam, pole))
}

pub fn write_family(path: &Path, fam: &DisintegratedMeasure, pole: PoleMass) -> Result<()> {
    std::fs::write(path, family_to_string(fam, pole))?;
    Ok(())
}

pub fn read_family(path: &Path) -> Result<(DisintegratedMeasure, PoleMass)> {
    parse_family(&std::fs::read_to_string(path)?)
}

pub fn forward_result_to_string(fwd: &ForwardResult) -> String {
    family_to_string(&fwd.family, fwd.pole_mass)
}

// ---------------------------------------------------------------------------
// Planar measure files (2D workflows)
// ---------------------------------------------------------------------------

pub fn planar_measure_to_string(mu: &CircleMeasure) -> String {
    let mut out = String::new();
    out.push_str("measure-format 1\n");
    let _ = writeln!(out, "circle {}", mu.grid().len());
    let _ = writeln!(out, "density {}", mu.density().len());
    push_values(&mut out, mu.density());
    let _ = writeln!(out, "atoms {}", mu.atoms().len());
    for a in mu.atoms() {
        let _ = writeln!(out, "{} {}", fmt(a.angle), fmt(a.mass));
    }
    out
}

pub fn parse_planar_measure(text: &str) -> Result<CircleMeasure> {
    let mut t = Tokens::new(text);
    t.expect("measure-format")?;
    let version = t.usize()?;
    if version != 1 {
        return Err(Error::Parse {
            line: 1,
            msg: format!("unsupported measure format version {version}"),
        });
    }
    t.expect("circle")?;
    let m = t.usize()?;
    t.expect("density")?;
    let count = t.usize()?;
    if count != m {
        return Err(Error::Parse {
            line: 1,
            msg: format!("{count} density samples listed for a {m}-point grid"),
        });
    }
    let mut density = Vec::with_capacity(m);
    for _ in 0..m {
        density.push(t.f64()?);
    }
    t.expect("atoms")?;
    let n_atoms = t.usize()?;
    let mut atoms = Vec::with_capacity(n_atoms);
    for _ in 0..n_atoms {
        atoms.push(Atom {
            angle: t.f64()?,
            mass: t.f64()?,
        });
    }
    let grid = CircleGrid::new(AxialPlane::planar(), m)?;
    CircleMeasure::with_atoms(grid, density, atoms)
}

pub fn write_planar_measure(path: &Path, mu: &CircleMeasure) -> Result<()> {
    std::fs::write(path, planar_measure_to_string(mu))?;
    Ok(())
}

pub fn read_planar_measure(path: &Path) -> Result<CircleMeasure> {
    parse_planar_measure(&std::fs::read_to_string(path)?)
}

// ---------------------------------------------------------------------------
// Tabular exports
// ---------------------------------------------------------------------------

/// Support samples as rows of `azimuth polar value` (sphere coordinates of
/// each grid point).
pub fn h_table_to_string(h: &SampledSupport) -> String {
    let grid = h.grid();
    let mut out = String::from("# azimuth polar value\n");
    for j in 0..grid.plane_len() {
        for k in 0..grid.circle_len() {
            let u = grid.point(j, k);
            let c = u.coords();
            let azimuth = if c.len() >= 3 { c[1].atan2(c[0]) } else { 0.0 };
            let _ = writeln!(
                out,
                "{} {} {}",
                fmt(azimuth),
                fmt(polar_angle(&u)),
                fmt(h.value(j, k))
            );
        }
    }
    out
}

/// Sphere density as rows of `azimuth polar q`.
pub fn density_table_to_string(q: &SphereDensity) -> String {
    let grid = q.grid();
    let mut out = String::from("# azimuth polar q\n");
    for j in 0..grid.plane_len() {
        for k in 0..grid.circle_len() {
            let u = grid.point(j, k);
            let c = u.coords();
            let azimuth = if c.len() >= 3 { c[1].atan2(c[0]) } else { 0.0 };
            let _ = writeln!(
                out,
                "{} {} {}",
                fmt(azimuth),
                fmt(polar_angle(&u)),
                fmt(q.value(j, k))
            );
        }
    }
    out
}

/// Planar support samples as rows of `angle value`.
pub fn planar_h_table_to_string(grid: &CircleGrid, values: &[f64]) -> String {
    let mut out = String::from("# angle value\n");
    for (k, v) in values.iter().enumerate() {
        let _ = writeln!(out, "{} {}", fmt(grid.angle(k)), fmt(*v));
    }
    out
}

// ---------------------------------------------------------------------------
// Report documents
// ---------------------------------------------------------------------------

pub fn solve_report_to_string(report: &SolveReport) -> String {
    let mut out = String::from("report-format 1\n");
    let _ = writeln!(
        out,
        "verdict {}",
        match report.verdict {
            Verdict::Solvable => "solvable",
            Verdict::Rejected => "rejected",
        }
    );
    let _ = writeln!(out, "calibration {}", fmt(report.calibration));
    let _ = writeln!(out, "tolerance-condition {}", fmt(report.tolerances.condition_rel));
    let _ = writeln!(out, "tolerance-pole-mass {}", fmt(report.tolerances.pole_mass_abs));
    let _ = writeln!(out, "tolerance-pole {}", fmt(report.tolerances.pole_rel));
    let _ = writeln!(out, "tolerance-convexity {}", fmt(report.convexity_tol));
    let _ = writeln!(out, "self-check-tolerance {}", fmt(report.self_check_tol));
    let _ = writeln!(out, "certificates {}", report.certificates.len());
    for cert in &report.certificates {
        let plane = cert
            .plane
            .map(|j| j.to_string())
            .unwrap_or_else(|| "-".to_string());
        let values: Vec<String> = cert.values.iter().map(|v| fmt(*v)).collect();
        let _ = writeln!(
            out,
            "certificate {} plane {} magnitude {} values {} {}",
            cert.condition.name(),
            plane,
            fmt(cert.magnitude),
            cert.values.len(),
            values.join(" ")
        );
        let _ = writeln!(out, "note {}", cert.note);
    }
    if !report.widths.is_empty() {
        let _ = writeln!(out, "widths {}", report.widths.len());
        push_values(&mut out, &report.widths);
    }
    out
}

pub fn condition_report_to_string(report: &ConditionReport) -> String {
    let mut out = String::from("condition-report 1\n");
    let _ = writeln!(
        out,
        "pushforward {} modulus {} threshold {}",
        if report.pushforward_ok { "ok" } else { "fail" },
        fmt(report.continuity_modulus),
        fmt(report.continuity_threshold)
    );
    let _ = writeln!(
        out,
        "centering {} worst {} plane {} threshold {}",
        if report.centering_ok { "ok" } else { "fail" },
        fmt(report.worst_moment),
        report.worst_moment_plane,
        fmt(report.centering_threshold)
    );
    let _ = writeln!(out, "pole-mass {}", fmt(report.pole_mass));
    let _ = writeln!(out, "planes {}", report.per_plane.len());
    for (j, p) in report.per_plane.iter().enumerate() {
        let _ = writeln!(
            out,
            "plane {j} azimuth {} rho {} moment {} {}",
            fmt(p.azimuth),
            fmt(p.rho),
            fmt(p.moment[0]),
            fmt(p.moment[1])
        );
    }
    out
}
