//! Pole-mass accounting: a cylinder has disk faces at both poles, which
//! carry mass π each; the family stores only the off-pole part and any
//! declared pole mass makes the inverse problem unsolvable.

use christoffel_disk::inverse_solver::{invert_with_poles, SolveTolerances, Verdict};
use christoffel_disk::sphere_geom::ProductGrid;
use christoffel_disk::{disk_forward, zoo, Result};

fn main() -> Result<()> {
    let cylinder = zoo::cylinder();
    let pm = disk_forward::pole_mass(&cylinder)?;
    println!(
        "pole mass of the cylinder: north {:.12}, south {:.12} (π = {:.12})",
        pm.north,
        pm.south,
        std::f64::consts::PI
    );

    let grid = ProductGrid::standard(3, 16, 128)?;
    let fwd = disk_forward::forward(&cylinder, &grid)?;
    println!(
        "family pole deposits match: ({:.12}, {:.12})",
        fwd.pole_mass.north, fwd.pole_mass.south
    );
    let fiber = fwd.family.fiber(0);
    println!(
        "equatorial atoms per plane: {} atoms of mass {:.12}",
        fiber.atoms().len(),
        fiber.atoms()[0].mass
    );

    let report = invert_with_poles(&fwd.family, fwd.pole_mass, SolveTolerances::default())?;
    assert_eq!(report.verdict, Verdict::Rejected);
    for cert in &report.certificates {
        println!("certificate: {} — {}", cert.condition.name(), cert.note);
    }
    Ok(())
}
