// The reproducing kernel as a theta function, the pointwise bound it gives,
// and the membership test for theta elements.
//
// cargo run --example reproducing_kernel

use std::f64::consts::PI;

use qptheta::fock::{
    basis_psi, certify_divergence, pointwise_bound, reproducing_kernel, reproducing_kernel_sum, theta_membership,
};
use qptheta::quadrature::{strip_inner_product, StripScheme};
use qptheta::theta::ThetaArgs;
use qptheta::{Complex64, Result, SpaceParams, TruncationBudget};

pub fn run_example() -> Result<()> {
    let params = SpaceParams::new(PI, 0.3)?;
    let budget = TruncationBudget::default();
    let (z, w) = (Complex64::new(0.2, 0.1), Complex64::new(-0.3, 0.4));

    let k = reproducing_kernel(z, w, &params, &budget)?;
    let s = reproducing_kernel_sum(z, w, &params, &budget)?;
    println!("K(z, w) theta form = {k:.12}");
    println!("K(z, w) basis sum  = {s:.12}");

    let reproduced = strip_inner_product(
        |u| basis_psi(0, u, &params),
        |u| reproducing_kernel(u, w, &params, &budget),
        params.nu(),
        &StripScheme::centered(&params, 0.0),
    )?;
    println!("<psi_0, K(., w)> = {reproduced:.12}, psi_0(w) = {:.12}", basis_psi(0, w, &params)?);
    println!("pointwise bound at z: |f(z)| <= {:.6} ||f||", pointwise_bound(z, &params, &budget)?);

    for im in [2.0, 1.0, 0.5] {
        let args = ThetaArgs::new(0.3, 0.1, Complex64::new(0.0, im))?;
        let m = theta_membership(&args, &params, &budget)?;
        match m.norm {
            Some(norm) => println!("Im tau = {im}: in the space, norm {norm:.10}"),
            None => {
                let cert = certify_divergence(&args, &params);
                println!("Im tau = {im}: not in the space (log partial sums {:?})", cert.log_partial_sums);
            }
        }
    }
    Ok(())
}

fn main() {
    run_example().expect("reproducing kernel example failed");
}
