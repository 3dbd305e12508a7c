//! Nyström discretization of the weighted operator
//! `H(z,ξ,λ) = (1+|z|)^{-s} g^r(z-ξ,λ) v(ξ) (1+|ξ|)^{s}`,
//! solution of `μ_j = {1, z, z²} + ∬ g^r(z-ξ,λ) v(ξ) μ_j(ξ)` and the modified
//! Fredholm determinant `Δ(λ) = det₂(I - H)`.
//!
//! Only nodes where `v ≠ 0` carry unknowns; the remaining rows of the full
//! system decouple and are filled in afterwards by the quadrature formula.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use faer::linalg::solvers::{PartialPivLu, Solve};
use faer::Mat;
use num_complex::Complex64;
use rayon::prelude::*;

use crate::discretization::{cell_average, log_cell_average, Grid, Potential, SampledField};
use crate::error::{ensure_finite, Error, Result};
use crate::green_kernel::{green_reg, log_split};

/// Condition estimates above this mark `λ` as numerically exceptional.
pub const CONDITION_LIMIT: f64 = 1e12;
const CELL_QUADRATURE_ORDER: usize = 24;

/// How the singular self-interaction cell `g^r(0, λ)` is replaced.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DiagonalRule {
    /// `(1/8π)·log_cell_average(h) + remainder_at_zero(λ)`. Its `λ̄`-derivative
    /// equals the `z → 0` limit of `∂g^r/∂λ̄`, so the discrete operator obeys
    /// the same ∂̄ structure as the continuous one.
    #[default]
    LogSplit,
    /// Real part of the exact mean of `g^r(·, λ)` over the cell. Agrees with
    /// `LogSplit` to `O((|λ|h)²)` and stays accurate when `|λ|h` is large.
    CellAverage,
}

impl FromStr for DiagonalRule {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "split" | "log-split" => Ok(DiagonalRule::LogSplit),
            "cell" | "cell-average" => Ok(DiagonalRule::CellAverage),
            other => Err(Error::Parse(format!("unknown diagonal rule '{other}' (split|cell)"))),
        }
    }
}

impl fmt::Display for DiagonalRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DiagonalRule::LogSplit => "split",
            DiagonalRule::CellAverage => "cell",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverOptions {
    pub diagonal: DiagonalRule,
    pub condition_limit: f64,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions { diagonal: DiagonalRule::LogSplit, condition_limit: CONDITION_LIMIT }
    }
}

impl SolverOptions {
    pub fn with_diagonal(diagonal: DiagonalRule) -> Self {
        SolverOptions { diagonal, ..Default::default() }
    }
}

/// Value used in place of `g^r(0, λ)` on a cell of side `h`.
pub fn diagonal_value(lambda: Complex64, h: f64, rule: DiagonalRule) -> Result<f64> {
    let split = log_split(lambda)?;
    let base = split.log_coeff * log_cell_average(h) + split.remainder_at_zero.re;
    match rule {
        DiagonalRule::LogSplit => Ok(base),
        DiagonalRule::CellAverage => {
            if lambda == Complex64::new(0.0, 0.0) {
                return Ok(base);
            }
            let smooth = |w: Complex64| -> Complex64 {
                if w.norm() == 0.0 {
                    return Complex64::new(0.0, 0.0);
                }
                green_reg(w, lambda).map_or(Complex64::new(f64::NAN, 0.0), |g| {
                    g - split.log_coeff * w.norm().ln() - split.remainder_at_zero
                })
            };
            let correction = cell_average(h, CELL_QUADRATURE_ORDER, smooth);
            if !correction.re.is_finite() {
                return Err(Error::Domain(format!("cell average of the kernel failed at lambda = {lambda}")));
            }
            Ok(base + correction.re)
        }
    }
}

/// `g^r(z_j - z_k, λ)` for all lattice differences of a grid, with the
/// diagonal rule applied at the origin.
#[derive(Debug, Clone)]
pub struct KernelTable {
    n: usize,
    values: Vec<Complex64>,
}

impl KernelTable {
    pub fn new(grid: &Grid, lambda: Complex64, rule: DiagonalRule) -> Result<Self> {
        let n = grid.points_per_side;
        let h = grid.spacing;
        let side = 2 * n - 1;
        let values: Result<Vec<Complex64>> = (0..side * side)
            .into_par_iter()
            .map(|idx| {
                let dj = (idx % side) as f64 - (n - 1) as f64;
                let dk = (idx / side) as f64 - (n - 1) as f64;
                if dj == 0.0 && dk == 0.0 {
                    diagonal_value(lambda, h, rule).map(|d| Complex64::new(d, 0.0))
                } else {
                    green_reg(Complex64::new(dj * h, dk * h), lambda)
                }
            })
            .collect();
        Ok(KernelTable { n, values: values? })
    }

    /// Kernel between grid nodes `a` and `b` (grid indices).
    pub fn get(&self, a: usize, b: usize) -> Complex64 {
        let n = self.n as isize;
        let (ja, ka) = ((a % self.n) as isize, (a / self.n) as isize);
        let (jb, kb) = ((b % self.n) as isize, (b / self.n) as isize);
        let side = 2 * n - 1;
        self.values[((ka - kb + n - 1) * side + (ja - jb + n - 1)) as usize]
    }
}

#[derive(Debug, Clone)]
pub struct KernelMatrix {
    /// Weighted entries over the active nodes.
    pub entries: Mat<Complex64>,
    pub lambda: Complex64,
    pub weight_s: f64,
    pub grid: Option<Arc<Grid>>,
    /// Grid indices of the nodes carrying unknowns (`v ≠ 0`).
    pub active: Vec<usize>,
    pub diagonal: DiagonalRule,
    table: Option<KernelTable>,
}

fn weight(z: Complex64, s: f64) -> f64 {
    (1.0 + z.norm()).powf(-s)
}

pub fn assemble(v: &Potential, lambda: Complex64, opts: &SolverOptions) -> Result<KernelMatrix> {
    ensure_finite("lambda", lambda)?;
    let grid = v.grid.clone();
    let s = v.weight_s();
    let active: Vec<usize> = (0..grid.len()).filter(|&i| v.values[i] != 0.0).collect();
    let table = KernelTable::new(&grid, lambda, opts.diagonal)?;
    let h2 = grid.cell_area();
    let w: Vec<f64> = active.iter().map(|&i| weight(grid.nodes[i], s)).collect();
    let entries = Mat::from_fn(active.len(), active.len(), |a, b| {
        let (ia, ib) = (active[a], active[b]);
        table.get(ia, ib) * (h2 * w[a] / w[b] * v.values[ib])
    });
    Ok(KernelMatrix { entries, lambda, weight_s: s, grid: Some(grid), active, diagonal: opts.diagonal, table: Some(table) })
}

impl KernelMatrix {
    /// Bare matrix with no grid behind it, for determinant identities.
    pub fn from_entries(entries: Mat<Complex64>) -> Self {
        let n = entries.nrows();
        KernelMatrix {
            entries,
            lambda: Complex64::new(0.0, 0.0),
            weight_s: 0.0,
            grid: None,
            active: (0..n).collect(),
            diagonal: DiagonalRule::LogSplit,
            table: None,
        }
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim()).map(|i| self.entries[(i, i)]).sum()
    }
}

/// Frobenius norm of the weighted entries. With the `h²` quadrature weight
/// folded in, this is the discrete `L²(ℂ×ℂ)` norm of the weighted kernel.
pub fn hs_norm(k: &KernelMatrix) -> f64 {
    let mut acc = 0.0;
    for j in 0..k.entries.ncols() {
        for i in 0..k.entries.nrows() {
            acc += k.entries[(i, j)].norm_sqr();
        }
    }
    acc.sqrt()
}

/// `‖H(λ) - H(μ)‖_HS` for two kernels over the same active set.
pub fn hs_distance(a: &KernelMatrix, b: &KernelMatrix) -> Result<f64> {
    if a.active != b.active {
        return Err(Error::Parameter("kernels live on different node sets".into()));
    }
    let mut acc = 0.0;
    for j in 0..a.entries.ncols() {
        for i in 0..a.entries.nrows() {
            acc += (a.entries[(i, j)] - b.entries[(i, j)]).norm_sqr();
        }
    }
    Ok(acc.sqrt())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Det2Method {
    Eigenvalues,
    Lu,
}

#[derive(Debug, Clone)]
pub struct Det2Result {
    pub delta: Complex64,
    /// Empty unless computed through the eigenvalue route.
    pub eigenvalues: Vec<Complex64>,
    pub residual_imag: f64,
    pub method: Det2Method,
}

/// `Π(1 - νᵢ)e^{νᵢ}` over all eigenvalues of `K`.
pub fn fredholm_det2(k: &KernelMatrix) -> Result<Det2Result> {
    if k.dim() == 0 {
        return Ok(Det2Result { delta: Complex64::new(1.0, 0.0), eigenvalues: vec![], residual_imag: 0.0, method: Det2Method::Eigenvalues });
    }
    let eigenvalues = k.entries.eigenvalues().map_err(|e| Error::Eigen(format!("{e:?}")))?;
    let delta = eigenvalues.iter().fold(Complex64::new(1.0, 0.0), |acc, &nu| acc * (1.0 - nu) * nu.exp());
    Ok(Det2Result { delta, residual_imag: delta.im.abs(), eigenvalues, method: Det2Method::Eigenvalues })
}

/// LU factorization of `I - K` with the quantities every λ-evaluation needs.
pub struct Factored {
    lu: Option<PartialPivLu<Complex64>>,
    pub det2: Det2Result,
    pub condest: f64,
}

fn permutation_sign(fwd: &[usize]) -> f64 {
    let mut seen = vec![false; fwd.len()];
    let mut sign = 1.0;
    for start in 0..fwd.len() {
        if seen[start] {
            continue;
        }
        let mut len = 0;
        let mut i = start;
        while !seen[i] {
            seen[i] = true;
            i = fwd[i];
            len += 1;
        }
        if len % 2 == 0 {
            sign = -sign;
        }
    }
    sign
}

pub fn factor(k: &KernelMatrix) -> Factored {
    let n = k.dim();
    if n == 0 {
        return Factored {
            lu: None,
            det2: Det2Result { delta: Complex64::new(1.0, 0.0), eigenvalues: vec![], residual_imag: 0.0, method: Det2Method::Lu },
            condest: 1.0,
        };
    }
    let a = Mat::from_fn(n, n, |i, j| if i == j { 1.0 - k.entries[(i, j)] } else { -k.entries[(i, j)] });
    let lu = a.partial_piv_lu();
    let u = lu.U();
    let mut det = Complex64::new(permutation_sign(lu.P().arrays().0), 0.0);
    for i in 0..n {
        det *= u[(i, i)];
    }
    let delta = det * k.trace().exp();
    let condest = one_norm(&a) * inverse_one_norm_estimate(&lu, n);
    Factored {
        lu: Some(lu),
        det2: Det2Result { delta, eigenvalues: vec![], residual_imag: delta.im.abs(), method: Det2Method::Lu },
        condest,
    }
}

/// `det(I - K)·exp(tr K)` through an LU factorization.
pub fn det2_lu(k: &KernelMatrix) -> Det2Result {
    factor(k).det2
}

fn one_norm(a: &Mat<Complex64>) -> f64 {
    (0..a.ncols()).map(|j| (0..a.nrows()).map(|i| a[(i, j)].norm()).sum::<f64>()).fold(0.0, f64::max)
}

/// Hager–Higham estimate of `‖A^{-1}‖₁` from an LU factorization of `A`.
fn inverse_one_norm_estimate(lu: &PartialPivLu<Complex64>, n: usize) -> f64 {
    let one_norm_col = |m: &Mat<Complex64>| (0..n).map(|i| m[(i, 0)].norm()).sum::<f64>();
    let mut x = Mat::from_fn(n, 1, |_, _| Complex64::new(1.0 / n as f64, 0.0));
    let mut est = 0.0;
    let mut last_j = usize::MAX;
    for _ in 0..5 {
        let y = lu.solve(&x);
        est = one_norm_col(&y);
        let xi = Mat::from_fn(n, 1, |i, _| {
            let v = y[(i, 0)];
            if v.norm() == 0.0 {
                Complex64::new(1.0, 0.0)
            } else {
                v / v.norm()
            }
        });
        let z = lu.solve_adjoint(&xi);
        let (j, zmax) = (0..n).map(|i| (i, z[(i, 0)].norm())).fold((0, -1.0), |b, c| if c.1 > b.1 { c } else { b });
        let ztx: f64 = (0..n).map(|i| (z[(i, 0)].conj() * x[(i, 0)]).re).sum();
        if zmax <= ztx || j == last_j {
            break;
        }
        last_j = j;
        x = Mat::from_fn(n, 1, |i, _| Complex64::new(if i == j { 1.0 } else { 0.0 }, 0.0));
    }
    // Higham's alternating test vector guards against unlucky starts.
    let b = Mat::from_fn(n, 1, |i, _| {
        let sgn = if i % 2 == 0 { 1.0 } else { -1.0 };
        Complex64::new(sgn * (1.0 + i as f64 / (n.max(2) - 1) as f64), 0.0)
    });
    let alt = 2.0 * one_norm_col(&lu.solve(&b)) / (3.0 * n as f64);
    est.max(alt)
}

/// Right-hand side `{1, z, z²}` for `order ∈ {1, 2, 3}`.
pub fn mu_rhs(order: usize, z: Complex64) -> Complex64 {
    match order {
        1 => Complex64::new(1.0, 0.0),
        2 => z,
        _ => z * z,
    }
}

fn check_order(order: usize) -> Result<()> {
    if (1..=3).contains(&order) {
        Ok(())
    } else {
        Err(Error::Parameter(format!("mu order must be 1, 2 or 3, got {order}")))
    }
}

/// Everything computed for one potential at one `λ`: kernel, factorization,
/// determinant, HS norm and the three `μ` fields on demand.
pub struct LambdaSolve {
    pub lambda: Complex64,
    pub kernel: KernelMatrix,
    pub factored: Factored,
    pub hs_norm: f64,
    potential: Potential,
    condition_limit: f64,
}

impl LambdaSolve {
    pub fn new(v: &Potential, lambda: Complex64, opts: &SolverOptions) -> Result<Self> {
        let kernel = assemble(v, lambda, opts)?;
        let factored = factor(&kernel);
        let hs = hs_norm(&kernel);
        Ok(LambdaSolve { lambda, kernel, factored, hs_norm: hs, potential: v.clone(), condition_limit: opts.condition_limit })
    }

    pub fn delta(&self) -> Complex64 {
        self.factored.det2.delta
    }

    pub fn condest(&self) -> f64 {
        self.factored.condest
    }

    pub fn potential(&self) -> &Potential {
        &self.potential
    }

    fn check_conditioning(&self) -> Result<()> {
        if !(self.factored.condest <= self.condition_limit) {
            return Err(Error::NearSingular { lambda: self.lambda, condest: self.factored.condest });
        }
        Ok(())
    }

    /// `μ_order` on every grid node.
    pub fn mu(&self, order: usize) -> Result<SampledField> {
        check_order(order)?;
        Ok(self.solve_orders(&[order])?.remove(0))
    }

    /// `μ₁, μ₂, μ₃` from one multi-right-hand-side solve.
    pub fn mu_all(&self) -> Result<[SampledField; 3]> {
        let mut v = self.solve_orders(&[1, 2, 3])?;
        let m3 = v.pop().unwrap();
        let m2 = v.pop().unwrap();
        let m1 = v.pop().unwrap();
        Ok([m1, m2, m3])
    }

    fn solve_orders(&self, orders: &[usize]) -> Result<Vec<SampledField>> {
        self.check_conditioning()?;
        let grid = self.potential.grid.clone();
        let s = self.kernel.weight_s;
        let active = &self.kernel.active;
        let mut fields: Vec<Vec<Complex64>> = orders
            .iter()
            .map(|&o| grid.nodes.iter().map(|&z| mu_rhs(o, z)).collect())
            .collect();
        if let Some(lu) = &self.factored.lu {
            let w: Vec<f64> = active.iter().map(|&i| weight(grid.nodes[i], s)).collect();
            let rhs = Mat::from_fn(active.len(), orders.len(), |a, c| w[a] * mu_rhs(orders[c], grid.nodes[active[a]]));
            let m = lu.solve(&rhs);
            for (c, field) in fields.iter_mut().enumerate() {
                for (a, &i) in active.iter().enumerate() {
                    field[i] = m[(a, c)] / w[a];
                }
            }
            // Inactive nodes: μ = rhs + Σ_active h² g v μ.
            let table = self.kernel.table.as_ref().expect("assembled kernels carry their table");
            let h2 = grid.cell_area();
            let mut is_active = vec![false; grid.len()];
            for &i in active {
                is_active[i] = true;
            }
            for field in fields.iter_mut() {
                let src: Vec<Complex64> = active.iter().map(|&k| field[k] * (h2 * self.potential.values[k])).collect();
                for j in (0..grid.len()).filter(|&j| !is_active[j]) {
                    let mut acc = Complex64::new(0.0, 0.0);
                    for (a, &k) in active.iter().enumerate() {
                        acc += table.get(j, k) * src[a];
                    }
                    field[j] += acc;
                }
            }
        }
        fields.into_iter().map(|f| SampledField::new(grid.clone(), f)).collect()
    }
}

pub fn solve_mu(v: &Potential, lambda: Complex64, order: usize, opts: &SolverOptions) -> Result<SampledField> {
    check_order(order)?;
    LambdaSolve::new(v, lambda, opts)?.mu(order)
}

/// Relative residual of `μ - (rhs + Σ h² g v μ)` over the grid, evaluated
/// with the same diagonal rule used for the solve.
pub fn mu_residual(v: &Potential, lambda: Complex64, order: usize, mu: &SampledField, opts: &SolverOptions) -> Result<f64> {
    let grid = &v.grid;
    let table = KernelTable::new(grid, lambda, opts.diagonal)?;
    let h2 = grid.cell_area();
    let mut num: f64 = 0.0;
    let mut den: f64 = 0.0;
    for j in 0..grid.len() {
        let mut acc = mu_rhs(order, grid.nodes[j]);
        for k in 0..grid.len() {
            if v.values[k] != 0.0 {
                acc += table.get(j, k) * (h2 * v.values[k]) * mu.values[k];
            }
        }
        num = num.max((mu.values[j] - acc).norm());
        den = den.max(mu.values[j].norm());
    }
    Ok(num / den.max(1e-300))
}

/// `μ_order(z)` at an arbitrary point from the grid solution, by quadrature
/// of the integral equation. At a node the stored value is returned.
pub fn evaluate_mu(v: &Potential, lambda: Complex64, order: usize, mu: &SampledField, z: Complex64) -> Result<Complex64> {
    check_order(order)?;
    ensure_finite("z", z)?;
    let grid = &v.grid;
    let near = grid.nearest(z);
    if (grid.nodes[near] - z).norm() <= 1e-12 * grid.spacing {
        return Ok(mu.values[near]);
    }
    let h2 = grid.cell_area();
    let mut acc = mu_rhs(order, z);
    for k in 0..grid.len() {
        if v.values[k] != 0.0 {
            acc += green_reg(z - grid.nodes[k], lambda)? * (h2 * v.values[k]) * mu.values[k];
        }
    }
    Ok(acc)
}

#[derive(Debug, Clone, Copy)]
pub struct ScanRow {
    pub lambda: Complex64,
    pub delta: Complex64,
    pub hs_norm: f64,
    pub condest: f64,
}

pub fn scan_point(v: &Potential, lambda: Complex64, opts: &SolverOptions) -> Result<ScanRow> {
    let solve = LambdaSolve::new(v, lambda, opts)?;
    Ok(ScanRow { lambda, delta: solve.delta(), hs_norm: solve.hs_norm, condest: solve.condest() })
}

/// Determinant scan over a λ list; rows come back in input order.
pub fn det_scan(v: &Potential, lambdas: &[Complex64], opts: &SolverOptions) -> Result<Vec<ScanRow>> {
    lambdas.par_iter().map(|&l| scan_point(v, l, opts)).collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Flag {
    pub lambda: Complex64,
    pub delta: Complex64,
}

/// `λ` from the list with `|Δ(λ)| < τ`, duplicates kept.
pub fn exceptional_scan(v: &Potential, lambdas: &[Complex64], tau: f64, opts: &SolverOptions) -> Result<Vec<Flag>> {
    if !(tau.is_finite() && tau > 0.0) {
        return Err(Error::Parameter(format!("threshold must be positive, got {tau}")));
    }
    Ok(det_scan(v, lambdas, opts)?
        .into_iter()
        .filter(|r| r.delta.norm() < tau)
        .map(|r| Flag { lambda: r.lambda, delta: r.delta })
        .collect())
}

/// `h² Σ_k |g^r(z_j - z_k)| |v_k|` maximized over nodes: the first Neumann
/// term bound for `‖μ₁ - 1‖_∞`.
pub fn neumann_first_term(v: &Potential, lambda: Complex64, opts: &SolverOptions) -> Result<f64> {
    let grid = &v.grid;
    let table = KernelTable::new(grid, lambda, opts.diagonal)?;
    let h2 = grid.cell_area();
    let mut best: f64 = 0.0;
    for j in 0..grid.len() {
        let s: f64 = (0..grid.len()).filter(|&k| v.values[k] != 0.0).map(|k| table.get(j, k).norm() * v.values[k].abs()).sum();
        best = best.max(s * h2);
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::discretization::{make_grid, sample_potential, PotentialSpec};
    use crate::green_kernel::x_phase;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn gaussian(a: f64, n: usize) -> Potential {
        sample_potential(&PotentialSpec::gaussian(a, 1.0), &make_grid(8.0, n).unwrap()).unwrap()
    }

    #[test]
    fn table_lookup_matches_direct_evaluation() {
        let g = make_grid(4.0, 8).unwrap();
        let l = c(0.7, -0.4);
        let t = KernelTable::new(&g, l, DiagonalRule::LogSplit).unwrap();
        for a in [0, 5, 17, 63] {
            for b in [1, 9, 40, 62] {
                let want = green_reg(g.nodes[a] - g.nodes[b], l).unwrap();
                assert!((t.get(a, b) - want).norm() < 1e-15);
            }
        }
        assert_eq!(t.get(9, 9).re, diagonal_value(l, g.spacing, DiagonalRule::LogSplit).unwrap());
    }

    #[test]
    fn zero_potential_is_exact() {
        let v = Potential::zero(&make_grid(8.0, 16).unwrap());
        let opts = SolverOptions::default();
        let k = assemble(&v, c(1.0, 1.0), &opts).unwrap();
        assert_eq!(k.dim(), 0);
        assert_eq!(hs_norm(&k), 0.0);
        let s = LambdaSolve::new(&v, c(1.0, 1.0), &opts).unwrap();
        assert_eq!(s.delta(), c(1.0, 0.0));
        let [m1, m2, m3] = s.mu_all().unwrap();
        assert_eq!(m1.max_abs_diff(|_| c(1.0, 0.0)), 0.0);
        assert_eq!(m2.max_abs_diff(|z| z), 0.0);
        assert_eq!(m3.max_abs_diff(|z| z * z), 0.0);
        assert!(exceptional_scan(&v, &[c(1.0, 0.0), c(0.0, 2.0)], 0.5, &opts).unwrap().is_empty());
        assert_eq!(fredholm_det2(&k).unwrap().delta, c(1.0, 0.0));
    }

    #[test]
    fn kernel_is_linear_in_potential() {
        let v = gaussian(0.5, 16);
        let opts = SolverOptions::default();
        let k1 = assemble(&v, c(1.0, 0.5), &opts).unwrap();
        let k2 = assemble(&v.scaled(2.0).unwrap(), c(1.0, 0.5), &opts).unwrap();
        for i in 0..k1.dim() {
            for j in 0..k1.dim() {
                assert!((k2.entries[(i, j)] - 2.0 * k1.entries[(i, j)]).norm() <= 1e-15 * k1.entries[(i, j)].norm().max(1e-300));
            }
        }
    }

    #[test]
    fn entries_follow_conjugation_identity() {
        // conj(g)·X = g makes conj(H) = D_X̄ H D_X with real weights.
        let v = gaussian(1.0, 16);
        let l = c(1.3, -0.6);
        let k = assemble(&v, l, &SolverOptions::default()).unwrap();
        let g = v.grid.clone();
        for (a, b) in [(3, 17), (40, 41), (100, 7), (77, 77)] {
            let (za, zb) = (g.nodes[k.active[a]], g.nodes[k.active[b]]);
            let lhs = k.entries[(a, b)].conj() * x_phase(za, l) * x_phase(zb, l).conj();
            assert!((lhs - k.entries[(a, b)]).norm() <= 1e-12 * k.entries[(a, b)].norm());
        }
    }

    #[test]
    fn lu_and_eigen_determinants_agree() {
        let v = gaussian(1.0, 16);
        for l in [c(2.0, 1.0), c(-0.5, 0.3)] {
            let k = assemble(&v, l, &SolverOptions::default()).unwrap();
            let a = fredholm_det2(&k).unwrap().delta;
            let b = det2_lu(&k).delta;
            assert!((a - b).norm() < 1e-12, "{a} {b}");
        }
    }

    #[test]
    fn rank_one_closed_form() {
        let n = 6;
        let u: Vec<f64> = (0..n).map(|i| 0.1 * (i as f64 + 1.0)).collect();
        let norm: f64 = u.iter().map(|x| x * x).sum();
        let m = Mat::from_fn(n, n, |i, j| Complex64::new(0.3 * u[i] * u[j] / norm, 0.0));
        let k = KernelMatrix::from_entries(m);
        let want = 0.7 * 0.3f64.exp();
        assert!((fredholm_det2(&k).unwrap().delta - want).norm() <= 1e-15);
        assert!((det2_lu(&k).delta - want).norm() <= 1e-15);
    }

    #[test]
    fn permutation_signs() {
        assert_eq!(permutation_sign(&[0, 1, 2]), 1.0);
        assert_eq!(permutation_sign(&[1, 0, 2]), -1.0);
        assert_eq!(permutation_sign(&[1, 2, 0]), 1.0);
        assert_eq!(permutation_sign(&[3, 2, 1, 0]), 1.0);
    }

    #[test]
    fn solver_residual_is_small() {
        let v = gaussian(1.0, 16);
        let opts = SolverOptions::default();
        let l = c(1.0, 1.0);
        let s = LambdaSolve::new(&v, l, &opts).unwrap();
        for order in 1..=3 {
            let mu = s.mu(order).unwrap();
            assert!(mu_residual(&v, l, order, &mu, &opts).unwrap() <= 1e-10);
        }
    }

    #[test]
    fn condition_estimate_tracks_exact_value() {
        let n = 5;
        let m = Mat::from_fn(n, n, |i, j| Complex64::new(if i == j { 0.5 } else { 0.1 / (1.0 + (i + 2 * j) as f64) }, 0.05 * i as f64));
        let k = KernelMatrix::from_entries(m.clone());
        let f = factor(&k);
        let a = Mat::from_fn(n, n, |i, j| if i == j { 1.0 - m[(i, j)] } else { -m[(i, j)] });
        let inv = a.partial_piv_lu().solve(Mat::<Complex64>::identity(n, n));
        let exact = one_norm(&a) * one_norm(&inv);
        assert!(f.condest <= exact * (1.0 + 1e-12) && f.condest >= exact / 3.0, "{} {}", f.condest, exact);
    }

    #[test]
    fn near_singular_is_reported() {
        let n = 4;
        let m = Mat::from_fn(n, n, |i, j| Complex64::new(if i == j && i == 1 { 1.0 - 1e-14 } else { 0.0 }, 0.0));
        let f = factor(&KernelMatrix::from_entries(m));
        assert!(f.condest > CONDITION_LIMIT);
    }

    #[test]
    fn small_potential_obeys_neumann_bound() {
        let v = gaussian(0.05, 16);
        let opts = SolverOptions::default();
        let mu = solve_mu(&v, c(1.0, 0.0), 1, &opts).unwrap();
        let dev = mu.max_abs_diff(|_| c(1.0, 0.0));
        assert!(dev <= 1.2 * neumann_first_term(&v, c(1.0, 0.0), &opts).unwrap());
    }

    #[test]
    fn exterior_evaluation_reproduces_nodes() {
        let v = gaussian(1.0, 16);
        let opts = SolverOptions::default();
        let l = c(0.8, 0.2);
        let mu = solve_mu(&v, l, 1, &opts).unwrap();
        let j = v.grid.index(3, 12);
        assert_eq!(evaluate_mu(&v, l, 1, &mu, v.grid.nodes[j]).unwrap(), mu.values[j]);
        let a = evaluate_mu(&v, l, 1, &mu, c(20.0, 3.0)).unwrap();
        let b = evaluate_mu(&v, l, 1, &mu, c(20.0 + 1e-6, 3.0)).unwrap();
        assert!((a - b).norm() < 1e-5);
    }

    #[test]
    fn cell_rule_agrees_with_split_for_small_lambda_h() {
        for l in [c(0.01, 0.0), c(0.0, -0.02), c(0.05, 0.05)] {
            let a = diagonal_value(l, 0.25, DiagonalRule::LogSplit).unwrap();
            let b = diagonal_value(l, 0.25, DiagonalRule::CellAverage).unwrap();
            assert!((a - b).abs() < 1e-4, "{l}: {a} {b}");
        }
        assert_eq!(
            diagonal_value(c(0.0, 0.0), 0.5, DiagonalRule::CellAverage).unwrap(),
            diagonal_value(c(0.0, 0.0), 0.5, DiagonalRule::LogSplit).unwrap()
        );
        assert_eq!("cell".parse::<DiagonalRule>().unwrap(), DiagonalRule::CellAverage);
        assert!("x".parse::<DiagonalRule>().is_err());
    }
}
