//! Forward measure of the unit ball: every fiber has constant density π/2,
//! the pushforward density is identically π², and the total mass matches
//! the independent mixed-volume oracle.

use christoffel_disk::sphere_geom::ProductGrid;
use christoffel_disk::{disk_forward, zoo, Result};

fn main() -> Result<()> {
    let grid = ProductGrid::standard(3, 32, 512)?;
    let ball = zoo::unit_ball(3);
    let fwd = disk_forward::forward(&ball, &grid)?;

    let fiber = fwd.family.fiber(0);
    println!(
        "fiber density at the first plane: {:.12} (expected π/2 = {:.12})",
        fiber.density()[0],
        std::f64::consts::PI / 2.0
    );
    println!(
        "pushforward density rho: {:.12} (expected π² = {:.12})",
        fwd.family.rho()[0],
        std::f64::consts::PI.powi(2)
    );
    println!("pole mass: ({:.3e}, {:.3e})", fwd.pole_mass.north, fwd.pole_mass.south);

    let mass = fwd.family.total_mass();
    let oracle = disk_forward::mixed_volume_oracle(&ball, 8192)?;
    println!("total mass: {mass:.12}");
    println!("mass oracle: {oracle:.12} (difference {:.3e})", (mass - oracle).abs());

    // The sphere density of the ball is 1/(2 sin θ).
    let q = fwd.density.expect("smooth body has a density");
    let theta = grid.circle_angles()[grid.circle_len() / 4];
    println!(
        "density at θ = {theta:.4}: {:.9} (expected {:.9})",
        q.value(0, grid.circle_len() / 4),
        1.0 / (2.0 * theta.sin())
    );
    Ok(())
}
