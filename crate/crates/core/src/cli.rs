//! File-based command-line workflows: forward, inversion, round trips,
//! condition checks, and the standalone planar solver.
//!
//! Exit codes: 0 for success (or a solvable verdict), 2 for a rejection
//! with certificates, 1 for input or numerical errors.

use std::path::PathBuf;

use clap::Subcommand;

use crate::bodies::SupportFunction;
use crate::christoffel2d::{berg_invert, forward_polygon, forward_smooth, steiner_2d, BergKernel};
use crate::disk_forward::forward;
use crate::error::{Error, Result};
use crate::inverse_solver::{
    invert_even, invert_with_poles, self_certification_error, SolveReport, SolveTolerances,
    Verdict,
};
use crate::io;
use crate::measures::check_conditions;
use crate::sphere_geom::{AxialPlane, CircleGrid, ProductGrid, UnitVector};

const MIN_GRID: usize = 16;

/// One solver job; the variants mirror the subcommands.
#[derive(Debug, Clone, Subcommand)]
pub enum JobConfig {
    /// Compute the forward measure of a body and write the family file.
    Forward {
        /// Body specification (JSON).
        #[arg(long)]
        body: PathBuf,
        #[arg(long, default_value_t = 64)]
        planes: usize,
        #[arg(long, default_value_t = 256)]
        circle: usize,
        /// Family file to write.
        #[arg(long)]
        out: PathBuf,
        /// Optional sphere-density table (smooth bodies only).
        #[arg(long)]
        density_out: Option<PathBuf>,
    },
    /// Invert a family file; writes the reconstructed support table and a
    /// report document.
    Invert {
        #[arg(long)]
        family: PathBuf,
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Invert an even family through the symmetrized kernel.
    InvertEven {
        #[arg(long)]
        family: PathBuf,
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Forward then invert a body and summarize the reconstruction error.
    Roundtrip {
        #[arg(long)]
        body: PathBuf,
        #[arg(long, default_value_t = 64)]
        planes: usize,
        #[arg(long, default_value_t = 256)]
        circle: usize,
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
    },
    /// Run the solvability condition checks on a family file.
    Check {
        #[arg(long)]
        family: PathBuf,
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Planar forward measure of a 2D body (angles from the first axis).
    Body2dForward {
        #[arg(long)]
        body: PathBuf,
        #[arg(long, default_value_t = 256)]
        circle: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Invert a planar measure file back to support samples.
    Body2dInvert {
        #[arg(long)]
        measure: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
}

impl JobConfig {
    pub fn validate(&self) -> Result<()> {
        let check_counts = |planes: usize, circle: usize| -> Result<()> {
            if planes < MIN_GRID {
                return Err(Error::Config(format!(
                    "planes must be at least {MIN_GRID}, got {planes}"
                )));
            }
            if circle < MIN_GRID || !circle.is_multiple_of(2) {
                return Err(Error::Config(format!(
                    "circle must be an even count of at least {MIN_GRID}, got {circle}"
                )));
            }
            Ok(())
        };
        let check_tol = |tol: f64| -> Result<()> {
            if tol.is_nan() || tol <= 0.0 {
                return Err(Error::Config(format!("tol must be positive, got {tol}")));
            }
            Ok(())
        };
        match self {
            JobConfig::Forward { planes, circle, .. } => check_counts(*planes, *circle),
            JobConfig::Roundtrip { planes, circle, tol, .. } => {
                check_counts(*planes, *circle)?;
                check_tol(*tol)
            }
            JobConfig::Invert { tol, .. }
            | JobConfig::InvertEven { tol, .. }
            | JobConfig::Check { tol, .. } => check_tol(*tol),
            JobConfig::Body2dForward { circle, .. } => check_counts(MIN_GRID, *circle),
            JobConfig::Body2dInvert { .. } => Ok(()),
        }
    }
}

/// Runs a job and maps the outcome to an exit code.
pub fn run(job: &JobConfig) -> i32 {
    match run_inner(job) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            1
        }
    }
}

fn run_inner(job: &JobConfig) -> Result<i32> {
    job.validate()?;
    match job {
        JobConfig::Forward {
            body,
            planes,
            circle,
            out,
            density_out,
        } => {
            let body = io::read_body(body)?;
            let grid = ProductGrid::standard(body.dim(), *planes, *circle)?;
            let fwd = forward(&body, &grid)?;
            io::write_family(out, &fwd.family, fwd.pole_mass)?;
            println!(
                "forward: total mass {:.12}, pole mass ({:.6e}, {:.6e}), {} planes x {} samples -> {}",
                fwd.family.total_mass(),
                fwd.pole_mass.north,
                fwd.pole_mass.south,
                grid.plane_len(),
                grid.circle_len(),
                out.display()
            );
            if let Some(path) = density_out {
                match &fwd.density {
                    Some(q) => {
                        std::fs::write(path, io::density_table_to_string(q))?;
                        println!("density table -> {}", path.display());
                    }
                    None => {
                        return Err(Error::AtomsPresent);
                    }
                }
            }
            Ok(0)
        }
        JobConfig::Invert { family, tol, out, report } => {
            let (fam, pole) = io::read_family(family)?;
            let tols = SolveTolerances {
                condition_rel: *tol,
                ..SolveTolerances::default()
            };
            let rep = invert_with_poles(&fam, pole, tols)?;
            finish_inversion(&rep, out.as_deref(), report.as_deref())
        }
        JobConfig::InvertEven { family, tol, out, report } => {
            let (fam, pole) = io::read_family(family)?;
            if pole.max() > 0.0 {
                return Err(Error::InvalidMeasure(
                    "even inversion does not accept declared pole mass".into(),
                ));
            }
            let tols = SolveTolerances {
                condition_rel: *tol,
                ..SolveTolerances::default()
            };
            let rep = invert_even(&fam, tols)?;
            finish_inversion(&rep, out.as_deref(), report.as_deref())
        }
        JobConfig::Roundtrip { body, planes, circle, tol } => {
            let body = io::read_body(body)?;
            let grid = ProductGrid::standard(body.dim(), *planes, *circle)?;
            let fwd = forward(&body, &grid)?;
            if fwd.pole_mass.max() > 1e-12 {
                println!(
                    "note: body deposits pole mass ({:.6e}, {:.6e}); the inverse problem \
                     is posed for the off-pole part only",
                    fwd.pole_mass.north, fwd.pole_mass.south
                );
            }
            let tols = SolveTolerances {
                condition_rel: *tol,
                ..SolveTolerances::default()
            };
            let rep = invert_with_poles(&fwd.family, fwd.pole_mass, tols)?;
            if rep.verdict == Verdict::Rejected {
                print_certificates(&rep);
                return Ok(2);
            }
            let h = rep.h.as_ref().expect("solvable report carries h");
            let steiner = crate::bodies::steiner_point(&body, &grid);
            let mut sup_abs = 0.0f64;
            let mut sup_rel = 0.0f64;
            for j in 0..grid.plane_len() {
                for (k, &t) in grid.circle_angles().iter().enumerate() {
                    let u = crate::sphere_geom::embed(t, grid.plane_grid().plane(j));
                    let expected = body.support(&u)
                        - steiner
                            .iter()
                            .zip(u.coords())
                            .map(|(a, b)| a * b)
                            .sum::<f64>();
                    let diff = (h.value(j, k) - expected).abs();
                    sup_abs = sup_abs.max(diff);
                    sup_rel = sup_rel.max(diff / expected.abs().max(1e-12));
                }
            }
            let self_err = self_certification_error(&rep, &fwd.family)?;
            println!(
                "roundtrip: sup abs error {sup_abs:.6e}, sup rel error {sup_rel:.6e}, \
                 re-forward distance {self_err:.6e} (declared {:.6e})",
                rep.self_check_tol
            );
            Ok(0)
        }
        JobConfig::Check { family, tol, report } => {
            let (fam, pole) = io::read_family(family)?;
            let mut cond = check_conditions(&fam, *tol);
            cond.pole_mass = pole.max();
            let text = io::condition_report_to_string(&cond);
            if let Some(path) = report {
                std::fs::write(path, &text)?;
            }
            print!("{text}");
            let ok = cond.pushforward_ok && cond.centering_ok && pole.max() <= 1e-6;
            Ok(if ok { 0 } else { 2 })
        }
        JobConfig::Body2dForward { body, circle, out } => {
            let body = io::read_body(body)?;
            if body.dim() != 2 {
                return Err(Error::Config("body2d commands need a 2D body".into()));
            }
            let grid = CircleGrid::new(AxialPlane::planar(), *circle)?;
            let mu = match &body {
                SupportFunction::Polytope { vertices } => {
                    let pts: Vec<[f64; 2]> = vertices.iter().map(|v| [v[0], v[1]]).collect();
                    forward_polygon(&grid, &pts)?
                }
                smooth => {
                    let mut h: Vec<f64> = grid
                        .angles()
                        .iter()
                        .map(|&t| {
                            let u = UnitVector::new(vec![t.cos(), t.sin()]).expect("unit");
                            smooth.support(&u)
                        })
                        .collect();
                    // Center first so the emitted measure is ready for
                    // inversion (the measure itself is translation invariant).
                    let s = steiner_2d(&grid, &h);
                    for (v, t) in h.iter_mut().zip(grid.angles()) {
                        *v -= s[0] * t.cos() + s[1] * t.sin();
                    }
                    forward_smooth(&grid, &h, None)?
                }
            };
            io::write_planar_measure(out, &mu)?;
            println!(
                "planar forward: total mass {:.12} -> {}",
                mu.total_mass(),
                out.display()
            );
            Ok(0)
        }
        JobConfig::Body2dInvert { measure, out } => {
            let mu = io::read_planar_measure(measure)?;
            let h = berg_invert(&mu, &BergKernel::default())?;
            std::fs::write(out, io::planar_h_table_to_string(mu.grid(), &h))?;
            println!("planar inversion -> {}", out.display());
            Ok(0)
        }
    }
}

fn finish_inversion(
    rep: &SolveReport,
    out: Option<&std::path::Path>,
    report: Option<&std::path::Path>,
) -> Result<i32> {
    if let Some(path) = report {
        std::fs::write(path, io::solve_report_to_string(rep))?;
    }
    match rep.verdict {
        Verdict::Solvable => {
            if let Some(path) = out {
                let h = rep.h.as_ref().expect("solvable report carries h");
                std::fs::write(path, io::h_table_to_string(h))?;
            }
            println!("verdict: solvable (calibration {:.12e})", rep.calibration);
            Ok(0)
        }
        Verdict::Rejected => {
            print_certificates(rep);
            Ok(2)
        }
    }
}

fn print_certificates(rep: &SolveReport) {
    println!("verdict: rejected");
    for cert in &rep.certificates {
        println!(
            "certificate: {} magnitude {:.6e} ({})",
            cert.condition.name(),
            cert.magnitude,
            cert.note
        );
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::zoo;

    #[test]
    fn validation_names_the_field() {
        let bad = JobConfig::Forward {
            body: "b.json".into(),
            planes: 4,
            circle: 256,
            out: "f.txt".into(),
            density_out: None,
        };
        match bad.validate() {
            Err(Error::Config(msg)) => assert!(msg.contains("planes")),
            other => panic!("expected a config error, got {other:?}"),
        }

        let bad = JobConfig::Invert {
            family: "f.txt".into(),
            tol: -1.0,
            out: None,
            report: None,
        };
        match bad.validate() {
            Err(Error::Config(msg)) => assert!(msg.contains("tol")),
            other => panic!("expected a config error, got {other:?}"),
        }
    }

    #[test]
    fn forward_and_invert_through_files() {
        let dir = tempfile::tempdir().unwrap();
        let body_path = dir.path().join("ball.json");
        std::fs::write(
            &body_path,
            io::body_to_string(&zoo::unit_ball(3)).unwrap(),
        )
        .unwrap();
        let fam_path = dir.path().join("fam.txt");
        let code = run(&JobConfig::Forward {
            body: body_path,
            planes: 16,
            circle: 64,
            out: fam_path.clone(),
            density_out: Some(dir.path().join("q.txt")),
        });
        assert_eq!(code, 0);

        let h_path = dir.path().join("h.txt");
        let rep_path = dir.path().join("report.txt");
        let code = run(&JobConfig::Invert {
            family: fam_path,
            tol: 1e-6,
            out: Some(h_path.clone()),
            report: Some(rep_path.clone()),
        });
        assert_eq!(code, 0);
        assert!(std::fs::read_to_string(&h_path).unwrap().starts_with("# azimuth"));
        assert!(std::fs::read_to_string(&rep_path)
            .unwrap()
            .contains("verdict solvable"));
    }

    #[test]
    fn cylinder_family_is_rejected_for_pole_mass() {
        let dir = tempfile::tempdir().unwrap();
        let body_path = dir.path().join("cylinder.json");
        std::fs::write(
            &body_path,
            io::body_to_string(&zoo::cylinder()).unwrap(),
        )
        .unwrap();
        let fam_path = dir.path().join("fam.txt");
        assert_eq!(
            run(&JobConfig::Forward {
                body: body_path,
                planes: 16,
                circle: 64,
                out: fam_path.clone(),
                density_out: None,
            }),
            0
        );
        let code = run(&JobConfig::Invert {
            family: fam_path,
            tol: 1e-6,
            out: None,
            report: None,
        });
        assert_eq!(code, 2);
    }

    #[test]
    fn planar_commands_roundtrip() {
        let dir = tempfile::tempdir().unwrap();
        let body_path = dir.path().join("square.json");
        let square = SupportFunction::Polytope {
            vertices: vec![
                vec![-1.0, -1.0],
                vec![1.0, -1.0],
                vec![1.0, 1.0],
                vec![-1.0, 1.0],
            ],
        };
        std::fs::write(&body_path, io::body_to_string(&square).unwrap()).unwrap();
        let mu_path = dir.path().join("mu.txt");
        assert_eq!(
            run(&JobConfig::Body2dForward {
                body: body_path,
                circle: 64,
                out: mu_path.clone(),
            }),
            0
        );
        let h_path = dir.path().join("h2.txt");
        assert_eq!(
            run(&JobConfig::Body2dInvert {
                measure: mu_path,
                out: h_path.clone(),
            }),
            0
        );
        assert!(std::fs::read_to_string(&h_path).unwrap().starts_with("# angle"));
    }
}
