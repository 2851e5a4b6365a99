//! The quadratic mixed-volume relation behind uniqueness: translates and
//! dilates attain equality, distinct shapes leave a strict margin.

use christoffel_disk::inverse_solver::uniqueness_check;
use christoffel_disk::sphere_geom::ProductGrid;
use christoffel_disk::{zoo, Result};

fn main() -> Result<()> {
    let grid = ProductGrid::standard(3, 32, 512)?;
    let ball = zoo::unit_ball(3);

    let translated = ball.translated(&[0.4, -0.1, 0.25])?;
    let rep = uniqueness_check(&ball, &translated, &grid, 1e-8)?;
    println!(
        "ball vs translate : margin {:+.3e}, equality {}, families coincide {}",
        rep.margin, rep.equality, rep.families_coincide
    );

    let doubled = ball.scaled(2.0)?;
    let rep = uniqueness_check(&ball, &doubled, &grid, 1e-8)?;
    println!(
        "ball vs dilate    : margin {:+.3e}, equality {}",
        rep.margin, rep.equality
    );

    let rep = uniqueness_check(&ball, &zoo::ellipsoid_112(), &grid, 1e-8)?;
    println!(
        "ball vs ellipsoid : margin {:+.3e} (strict), mixed volumes {:.6} / {:.6} / {:.6}",
        rep.margin, rep.v_kk, rep.v_kl, rep.v_ll
    );
    Ok(())
}
