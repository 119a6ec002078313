// Theta series: values, quasi-periodicity and the inversion formula.
//
// cargo run --example theta_series

use qptheta::scalar::character;
use qptheta::theta::{jacobi_theta3, riemann_theta_sum, theta3_inversion_rhs, ThetaArgs};
use qptheta::{Complex64, Result, TruncationBudget};

pub fn run_example() -> Result<()> {
    let budget = TruncationBudget::default();
    let i = Complex64::new(0.0, 1.0);

    let t = jacobi_theta3(Complex64::new(0.0, 0.0), i, &budget)?;
    println!("theta_3(0 | i)             = {:.15}", t.re);

    let args = ThetaArgs::new(0.3, 0.1, Complex64::new(0.2, 1.5))?;
    let z = Complex64::new(0.1, 0.05);
    let sum = riemann_theta_sum(&args, z, &budget)?;
    println!("theta_(0.3,0.1)(z | tau)   = {:.12} ({} terms, tail < {:.1e})", sum.value, sum.terms, sum.tail_bound);

    let shifted = riemann_theta_sum(&args, z + 1.0, &budget)?.value;
    let defect = (shifted - character(0.3, 1) * sum.value).norm();
    println!("quasi-periodicity defect   = {defect:.1e}");

    let tau = Complex64::new(1.0, 2.0);
    let w = Complex64::new(0.1, 0.1);
    let lhs = jacobi_theta3(w, tau, &budget)?;
    let rhs = theta3_inversion_rhs(w, tau, &budget)?;
    println!("inversion formula defect   = {:.1e}", (lhs - rhs).norm() / lhs.norm());
    Ok(())
}

fn main() {
    run_example().expect("theta series example failed");
}
