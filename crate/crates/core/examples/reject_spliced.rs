//! A certificate of non-solvability: fibers taken alternately from the
//! ball and the 1:1:2 ellipsoid form a perfectly valid measure per plane,
//! but no convex body produces the family, and the solver says why.

use christoffel_disk::inverse_solver::{invert, SolveTolerances, Verdict};
use christoffel_disk::sphere_geom::ProductGrid;
use christoffel_disk::{zoo, Result};

fn main() -> Result<()> {
    let grid = ProductGrid::standard(3, 32, 512)?;
    let fam = zoo::spliced_ball_ellipsoid(&grid)?;
    let report = invert(&fam, SolveTolerances::default())?;

    match report.verdict {
        Verdict::Solvable => println!("unexpectedly solvable"),
        Verdict::Rejected => {
            println!("verdict: rejected, {} certificates", report.certificates.len());
            for cert in &report.certificates {
                println!(
                    "  {:16} magnitude {:.6e}  values {:?}",
                    cert.condition.name(),
                    cert.magnitude,
                    cert.values
                );
                println!("    {}", cert.note);
            }
        }
    }
    Ok(())
}
