// The Bargmann transform from the quasi-periodic line space, by coefficients
// and by kernel quadrature, and its inverse.
//
// cargo run --example bargmann_transform

use std::f64::consts::PI;

use qptheta::bargmann::{
    bargmann_inverse, bargmann_kernel_a, bargmann_pointwise, bargmann_transform_coeffs, generating_kernel_g, LineElement,
};
use qptheta::fock::fock_norm;
use qptheta::{Complex64, Result, SpaceParams, TruncationBudget};

pub fn run_example() -> Result<()> {
    let params = SpaceParams::new(PI, 0.3)?;
    let budget = TruncationBudget::default();
    let line = LineElement::new(0.3, [(0, Complex64::new(1.0, 0.0)), (1, Complex64::new(0.0, 2.0))])?;

    let image = bargmann_transform_coeffs(&line, params.nu())?;
    println!("||phi|| = {:.12}, ||B phi|| = {:.12}", line.l2_norm(), fock_norm(&image)?);

    let z = Complex64::new(0.2, 0.3);
    let exact = image.evaluate(z)?;
    let quad = bargmann_pointwise(|q| Ok(line.evaluate(q)), z, &params, &budget)?;
    println!("B phi(z) by coefficients = {exact:.12}");
    println!("B phi(z) by quadrature   = {quad:.12}");

    let q = 0.4;
    let a = bargmann_kernel_a(z, q, &params, &budget)?;
    let g = generating_kernel_g(z, q, &params, &budget)?;
    println!("A(z; q) = {a:.12}\nG(z; q) = {g:.12}");

    let back = bargmann_inverse(&image, q, &budget)?;
    println!("B^-1 B phi(q) = {back:.10}, phi(q) = {:.10}", line.evaluate(q));
    Ok(())
}

fn main() {
    run_example().expect("bargmann transform example failed");
}
