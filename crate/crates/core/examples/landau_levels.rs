// Landau levels: eigenvalues by finite differences, the ladder operators and
// the decomposition into levels.
//
// cargo run --example landau_levels

use std::f64::consts::PI;

use qptheta::landau::{
    basis_psi_mn, creation_fd, default_sample_points, eigen_residual, landau_norm, lower, project_level, raise,
    LandauElement, WirtingerStep,
};
use qptheta::{Complex64, Result, SpaceParams};

pub fn run_example() -> Result<()> {
    let params = SpaceParams::new(PI, 0.3)?;
    let step = WirtingerStep::default();
    let points = default_sample_points();

    println!("level  eigenvalue  residual (n = 0)");
    for m in 0..=4 {
        let r = eigen_residual(m, 0, &params, &points, step)?;
        println!("{m:>5}  {:>10.6}  {r:.1e}", params.nu() * m as f64);
    }

    let z = Complex64::new(0.3, -0.2);
    let i = Complex64::new(0.0, 1.0);
    let up = i * creation_fd(|w| basis_psi_mn(1, 0, w, &params), z, &params, step)? / (2.0 * params.nu()).sqrt();
    println!("i A* psi_(1,0) / sqrt(2 nu) = {up:.8}");
    println!("psi_(2,0)                   = {:.8}", basis_psi_mn(2, 0, z, &params)?);

    let e = LandauElement::new(params, [((0, 1), Complex64::new(0.6, 0.0)), ((2, -1), Complex64::new(0.0, 0.8))]);
    for m in e.levels() {
        println!("level {m} carries norm {:.3}", landau_norm(&project_level(&e, m)));
    }
    let raised = raise(&e);
    println!("raise keeps the norm: {} -> {}", landau_norm(&e), landau_norm(&raised));
    println!("lower(raise(e)) == e: {}", lower(&raised) == e);
    Ok(())
}

fn main() {
    run_example().expect("landau levels example failed");
}
