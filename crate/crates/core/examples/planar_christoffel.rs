//! The planar solver on its own: kernel calibration, the exact segment
//! closed form, and a smooth forward/inverse round trip on an ellipse.

use christoffel_disk::christoffel2d::{berg_invert, forward_smooth, BergKernel};
use christoffel_disk::measures::{Atom, CircleMeasure};
use christoffel_disk::sphere_geom::{AxialPlane, CircleGrid};
use christoffel_disk::Result;
use std::f64::consts::PI;

fn main() -> Result<()> {
    let kernel = BergKernel::default();
    println!(
        "calibration residual (uniform measure -> unit disk): {:.3e}",
        kernel.calibration_residual(2048)
    );

    // Two atoms of mass 2 at ±e2 are the measure of the segment [-e1, e1];
    // the inversion has the closed form |u·e1|.
    let m = 512;
    let grid = CircleGrid::new(AxialPlane::planar(), m)?;
    let segment = CircleMeasure::with_atoms(
        grid.clone(),
        vec![0.0; m],
        vec![
            Atom { angle: PI / 2.0, mass: 2.0 },
            Atom { angle: 3.0 * PI / 2.0, mass: 2.0 },
        ],
    )?;
    let h = berg_invert(&segment, &kernel)?;
    let sup = h
        .iter()
        .enumerate()
        .map(|(k, v)| (v - grid.angle(k).cos().abs()).abs())
        .fold(0.0, f64::max);
    println!("segment closed form sup error: {sup:.3e}");

    // Ellipse with semi-axes (1, 2): forward by differencing, then invert.
    let support = |t: f64| (t.cos().powi(2) + 4.0 * t.sin().powi(2)).sqrt();
    for m in [512usize, 1024, 2048] {
        let grid = CircleGrid::new(AxialPlane::planar(), m)?;
        let h_true: Vec<f64> = grid.angles().iter().map(|&t| support(t)).collect();
        let mu = forward_smooth(&grid, &h_true, None)?;
        let h = berg_invert(&mu, &kernel)?;
        let sup = h
            .iter()
            .zip(&h_true)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        println!("ellipse round trip at m = {m:5}: sup error {sup:.3e}");
    }
    Ok(())
}
