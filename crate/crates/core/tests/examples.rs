//! Every example runs to completion.

macro_rules! example {
    ($module:ident, $file:literal) => {
        #[allow(dead_code)]
        mod $module {
            include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/", $file));
        }

        #[test]
        fn $module() {
            $module::run_example().expect(concat!($file, " should run"));
        }
    };
}

example!(theta_series, "theta_series.rs");
example!(fock_basis, "fock_basis.rs");
example!(reproducing_kernel, "reproducing_kernel.rs");
example!(bargmann_transform, "bargmann_transform.rs");
example!(landau_levels, "landau_levels.rs");
example!(verify, "verify.rs");
