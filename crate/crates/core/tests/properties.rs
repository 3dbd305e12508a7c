//! Pipeline-level invariants on small grids.

use nvscatter::discretization::{make_grid, sample_potential, Potential, PotentialSpec};
use nvscatter::integral_solver::{assemble, det2_lu, fredholm_det2, LambdaSolve, SolverOptions};
use nvscatter::scattering::scattering_data;
use nvscatter::theorem_algebra::{evolve_data, obstruction_residuals, shift_data};
use nvscatter::verification::check_shift;
use nvscatter::Complex64;
use proptest::prelude::*;

fn gaussian(n: usize) -> Potential {
    sample_potential(&PotentialSpec::gaussian(1.0, 1.0), &make_grid(8.0, n).unwrap()).unwrap()
}

fn arb_lambda() -> impl Strategy<Value = Complex64> {
    (0.3..4.0f64, 0.0..std::f64::consts::TAU).prop_map(|(r, t)| Complex64::from_polar(r, t))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn shift_covariance_on_lattice_vectors(a in -2i32..=2, b in -2i32..=2, l in arb_lambda()) {
        let v = gaussian(16);
        let zeta = Complex64::new(a as f64, b as f64);
        for r in check_shift(&v, zeta, l, &SolverOptions::default()).unwrap() {
            prop_assert!(r.residual <= 1e-9, "{}", r.csv_line());
        }
    }

    #[test]
    fn determinant_is_real(l in arb_lambda()) {
        let s = LambdaSolve::new(&gaussian(16), l, &SolverOptions::default()).unwrap();
        prop_assert!(s.delta().im.abs() <= 1e-10 * s.delta().norm());
    }

    #[test]
    fn determinant_routes_agree(l in arb_lambda()) {
        let k = assemble(&gaussian(12), l, &SolverOptions::default()).unwrap();
        let a = fredholm_det2(&k).unwrap().delta;
        let b = det2_lu(&k).delta;
        prop_assert!((a - b).norm() <= 1e-11 * b.norm());
    }

    #[test]
    fn shift_commutes_with_evolution_on_pipeline_data(l in arb_lambda(), t in -0.5..0.5f64, zr in -2.0..2.0f64, zi in -2.0..2.0f64) {
        let s = scattering_data(&gaussian(12), l, &SolverOptions::default()).unwrap();
        let z = Complex64::new(zr, zi);
        let a = evolve_data(&shift_data(&s, z), l, t);
        let b = shift_data(&evolve_data(&s, l, t), z);
        // Translation and time evolution commute on the data.
        for (x, y) in a.components().iter().zip(b.components()) {
            prop_assert!((x - y).norm() <= 1e-10 * (1.0 + y.norm()), "{} vs {}", x, y);
        }
    }

    #[test]
    fn pipeline_data_trip_the_obstruction(c_re in -30.0..30.0f64, c_im in -30.0..30.0f64) {
        let v = gaussian(12);
        let data: Vec<_> = [Complex64::new(1.0, 0.0), Complex64::new(1.0, 1.0), Complex64::new(2.0, -1.0)]
            .iter()
            .map(|&l| scattering_data(&v, l, &SolverOptions::default()).unwrap())
            .collect();
        let rep = obstruction_residuals(&data, Complex64::new(c_re, c_im), 1.0).unwrap();
        prop_assert!(rep.residual_b > 0.0 && rep.residual_final > 0.0);
    }
}
