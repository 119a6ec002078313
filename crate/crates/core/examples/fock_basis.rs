// The orthonormal basis of the holomorphic space, checked by strip quadrature.
//
// cargo run --example fock_basis

use std::f64::consts::PI;

use qptheta::fock::{basis_psi, e_norm, fock_norm, FockElement};
use qptheta::quadrature::{strip_inner_product, StripScheme};
use qptheta::{Complex64, Result, SpaceParams};

pub fn run_example() -> Result<()> {
    let params = SpaceParams::new(PI, 0.3)?;
    let scheme = StripScheme::spanning(&params, -2.0, 2.0);

    println!("Gram matrix <psi_n, psi_m>, n, m in -2..=2");
    for n in -2..=2 {
        let row: Vec<String> = (-2..=2)
            .map(|m| {
                strip_inner_product(|z| basis_psi(n, z, &params), |z| basis_psi(m, z, &params), params.nu(), &scheme)
                    .map(|g| format!("{:>9.2e}", g.norm()))
            })
            .collect::<Result<_>>()?;
        println!("  {}", row.join(" "));
    }

    for n in [-1, 0, 2] {
        println!("||e_{n}|| = {:.12}", e_norm(n, &params)?);
    }

    let f = FockElement::from_psi_coeffs(params, [(-1, Complex64::new(0.6, 0.0)), (1, Complex64::new(0.0, 0.8))])?;
    let q = strip_inner_product(|z| f.evaluate(z), |z| f.evaluate(z), params.nu(), &f.strip_scheme())?;
    println!("||f|| from coefficients = {:.12}, by quadrature = {:.12}", fock_norm(&f)?, q.re.sqrt());
    println!("element as JSON: {}", serde_json::to_string(&f)?);
    Ok(())
}

fn main() {
    run_example().expect("fock basis example failed");
}
