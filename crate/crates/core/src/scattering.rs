//! Scattering functionals of `v` and the Faddeev-type solutions `μ₁, μ₂, μ₃`.

use num_complex::Complex64;

use crate::discretization::{integrate_real, Potential, SampledField};
use crate::error::Result;
use crate::integral_solver::{LambdaSolve, SolverOptions};

pub const CSV_HEADER: &str = "lambda_re,lambda_im,a1_re,a1_im,b1_re,b1_im,c1_re,c1_im,d1_re,d1_im,a2_re,a2_im,b2_re,b2_im,c2_re,c2_im,a3_re,a3_im,b3_re,b3_im";

pub const COMPONENT_NAMES: [&str; 9] = ["a1", "b1", "c1", "d1", "a2", "b2", "c2", "a3", "b3"];

#[derive(Debug, Clone, PartialEq)]
pub struct ScatteringData {
    pub lambda: Complex64,
    pub a1: Complex64,
    pub b1: Complex64,
    pub c1: Complex64,
    pub d1: Complex64,
    pub a2: Complex64,
    pub b2: Complex64,
    pub c2: Complex64,
    pub a3: Complex64,
    pub b3: Complex64,
    pub potential_tag: String,
}

impl ScatteringData {
    pub fn zero(lambda: Complex64) -> Self {
        Self::from_components(lambda, [Complex64::new(0.0, 0.0); 9], "zero")
    }

    /// Components in the order of [`COMPONENT_NAMES`].
    pub fn components(&self) -> [Complex64; 9] {
        [self.a1, self.b1, self.c1, self.d1, self.a2, self.b2, self.c2, self.a3, self.b3]
    }

    pub fn from_components(lambda: Complex64, c: [Complex64; 9], tag: &str) -> Self {
        let [a1, b1, c1, d1, a2, b2, c2, a3, b3] = c;
        ScatteringData { lambda, a1, b1, c1, d1, a2, b2, c2, a3, b3, potential_tag: tag.to_string() }
    }

    pub fn is_finite(&self) -> bool {
        self.components().iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    pub fn csv_row(&self) -> String {
        let mut cols = vec![format!("{:.16e}", self.lambda.re), format!("{:.16e}", self.lambda.im)];
        for z in self.components() {
            cols.push(format!("{:.16e}", z.re));
            cols.push(format!("{:.16e}", z.im));
        }
        cols.join(",")
    }
}

/// `e^{iλz + iλ̄z̄} = exp(2i Re(λz))`, the conjugate of `X(z,λ)`.
pub fn conj_phase(z: Complex64, lambda: Complex64) -> Complex64 {
    Complex64::from_polar(1.0, 2.0 * (lambda * z).re)
}

/// The nine functionals from solved `μ₁, μ₂, μ₃` by the midpoint rule.
pub fn data_from_fields(v: &Potential, lambda: Complex64, mu: &[SampledField; 3]) -> ScatteringData {
    let grid = &v.grid;
    let mut acc = [Complex64::new(0.0, 0.0); 9];
    for (k, (&z, &vk)) in grid.nodes.iter().zip(&v.values).enumerate() {
        if vk == 0.0 {
            continue;
        }
        let e = conj_phase(z, lambda);
        let (m1, m2, m3) = (mu[0].values[k] * vk, mu[1].values[k] * vk, mu[2].values[k] * vk);
        acc[0] += m1;
        acc[1] += e * m1;
        acc[2] += z * m1;
        acc[3] += z.conj() * e * m1;
        acc[4] += m2;
        acc[5] += e * m2;
        acc[6] += z * m2;
        acc[7] += m3;
        acc[8] += e * m3;
    }
    let h2 = grid.cell_area();
    ScatteringData::from_components(lambda, acc.map(|x| x * h2), &v.family)
}

/// Δ, HS norm, condition estimate, the three μ fields and the data at one λ.
pub struct SpectralPoint {
    pub lambda: Complex64,
    pub delta: Complex64,
    pub hs_norm: f64,
    pub condest: f64,
    pub mu: [SampledField; 3],
    pub data: ScatteringData,
}

pub fn spectral_point(v: &Potential, lambda: Complex64, opts: &SolverOptions) -> Result<SpectralPoint> {
    let solve = LambdaSolve::new(v, lambda, opts)?;
    let mu = solve.mu_all()?;
    let data = data_from_fields(v, lambda, &mu);
    Ok(SpectralPoint { lambda, delta: solve.delta(), hs_norm: solve.hs_norm, condest: solve.condest(), mu, data })
}

pub fn scattering_data(v: &Potential, lambda: Complex64, opts: &SolverOptions) -> Result<ScatteringData> {
    Ok(spectral_point(v, lambda, opts)?.data)
}

/// `v̂(0) = ∬ v`.
pub fn vhat0(v: &Potential) -> f64 {
    integrate_real(&v.grid, &v.values)
}
