//! Uniform cell-centred grids on `[-L, L]²`, sampled potentials with their
//! decay certificate, midpoint quadrature and product quadrature for the
//! logarithmic singularity.

use std::f64::consts::PI;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{ensure_finite, Error, Result};

/// Default decay exponent `ε`, giving weight exponent `s = 3 + ε/2 = 3.5`.
pub const DEFAULT_DECAY_EPS: f64 = 1.0;
/// Boundary ring values must not exceed this fraction of `max |v|`.
pub const BOUNDARY_SMALLNESS: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    pub half_width: f64,
    pub points_per_side: usize,
    pub spacing: f64,
    /// Cell centres, index `k·N + j` for the node `(−L + (j+½)h) + i(−L + (k+½)h)`.
    pub nodes: Vec<Complex64>,
}

pub fn make_grid(half_width: f64, points_per_side: usize) -> Result<Grid> {
    if !(half_width.is_finite() && half_width > 0.0) {
        return Err(Error::Parameter(format!("half width must be positive, got {half_width}")));
    }
    if points_per_side < 8 || points_per_side % 2 != 0 {
        return Err(Error::Parameter(format!("points per side must be even and at least 8, got {points_per_side}")));
    }
    let n = points_per_side;
    let h = 2.0 * half_width / n as f64;
    let coord = |j: usize| -half_width + (j as f64 + 0.5) * h;
    let mut nodes = Vec::with_capacity(n * n);
    for k in 0..n {
        for j in 0..n {
            nodes.push(Complex64::new(coord(j), coord(k)));
        }
    }
    Ok(Grid { half_width, points_per_side: n, spacing: h, nodes })
}

impl Grid {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn index(&self, j: usize, k: usize) -> usize {
        k * self.points_per_side + j
    }

    pub fn cell_area(&self) -> f64 {
        self.spacing * self.spacing
    }

    pub fn on_boundary(&self, idx: usize) -> bool {
        let n = self.points_per_side;
        let (j, k) = (idx % n, idx / n);
        j == 0 || k == 0 || j == n - 1 || k == n - 1
    }

    /// Index of the node closest to `z`.
    pub fn nearest(&self, z: Complex64) -> usize {
        let n = self.points_per_side as isize;
        let to_index = |x: f64| {
            let t = ((x + self.half_width) / self.spacing - 0.5).round() as isize;
            t.clamp(0, n - 1) as usize
        };
        self.index(to_index(z.re), to_index(z.im))
    }

    /// `ζ/h` as integer cell offsets, if `ζ` is a lattice vector.
    pub fn cell_offset(&self, zeta: Complex64) -> Option<(isize, isize)> {
        let a = zeta.re / self.spacing;
        let b = zeta.im / self.spacing;
        let (ra, rb) = (a.round(), b.round());
        if (a - ra).abs() < 1e-9 && (b - rb).abs() < 1e-9 {
            Some((ra as isize, rb as isize))
        } else {
            None
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianTerm {
    pub amplitude: f64,
    pub sigma: f64,
    pub center: Complex64,
}

impl GaussianTerm {
    fn eval(&self, z: Complex64) -> f64 {
        self.amplitude * (-(z - self.center).norm_sqr() / (self.sigma * self.sigma)).exp()
    }
}

/// Potential families. Descriptors parse from and print to strings such as
/// `gaussian:1,1`, `gaussian:0.5,1,2,1`, `gaussian_sum:1,1,0,0;0.5,2,3,0`,
/// `bump:1,3` and `file:path/to/v.txt`.
#[derive(Debug, Clone, PartialEq)]
pub enum PotentialSpec {
    /// `A·exp(-|z-c|²/σ²)`.
    Gaussian(GaussianTerm),
    GaussianSum(Vec<GaussianTerm>),
    /// `A·exp(1 - 1/(1 - |z-c|²/R²))` inside the disc of radius `R`, zero outside.
    Bump { amplitude: f64, radius: f64, center: Complex64 },
    File(PathBuf),
}

impl PotentialSpec {
    pub fn gaussian(amplitude: f64, sigma: f64) -> Self {
        PotentialSpec::Gaussian(GaussianTerm { amplitude, sigma, center: Complex64::new(0.0, 0.0) })
    }

    fn eval(&self, z: Complex64) -> f64 {
        match self {
            PotentialSpec::Gaussian(g) => g.eval(z),
            PotentialSpec::GaussianSum(list) => list.iter().map(|g| g.eval(z)).sum(),
            PotentialSpec::Bump { amplitude, radius, center } => {
                let t = (z - center).norm_sqr() / (radius * radius);
                if t < 1.0 {
                    amplitude * (1.0 - 1.0 / (1.0 - t)).exp()
                } else {
                    0.0
                }
            }
            PotentialSpec::File(_) => unreachable!("file potentials are read, not evaluated"),
        }
    }

    fn validate(&self) -> Result<()> {
        let check_term = |g: &GaussianTerm| {
            ensure_finite("center", g.center)?;
            if !g.amplitude.is_finite() || !(g.sigma.is_finite() && g.sigma > 0.0) {
                return Err(Error::Parameter(format!("bad gaussian parameters A={}, sigma={}", g.amplitude, g.sigma)));
            }
            Ok(())
        };
        match self {
            PotentialSpec::Gaussian(g) => check_term(g),
            PotentialSpec::GaussianSum(list) => {
                if list.is_empty() {
                    return Err(Error::Parameter("empty gaussian_sum".into()));
                }
                list.iter().try_for_each(check_term)
            }
            PotentialSpec::Bump { amplitude, radius, center } => {
                ensure_finite("center", *center)?;
                if !amplitude.is_finite() || !(radius.is_finite() && *radius > 0.0) {
                    return Err(Error::Parameter(format!("bad bump parameters A={amplitude}, R={radius}")));
                }
                Ok(())
            }
            PotentialSpec::File(_) => Ok(()),
        }
    }
}

fn parse_reals(s: &str) -> Result<Vec<f64>> {
    s.split(',')
        .map(|t| t.trim().parse::<f64>().map_err(|e| Error::Parse(format!("'{t}': {e}"))))
        .collect()
}

fn term_from(v: &[f64]) -> Result<GaussianTerm> {
    match v {
        [a, s] => Ok(GaussianTerm { amplitude: *a, sigma: *s, center: Complex64::new(0.0, 0.0) }),
        [a, s, cx, cy] => Ok(GaussianTerm { amplitude: *a, sigma: *s, center: Complex64::new(*cx, *cy) }),
        _ => Err(Error::Parse(format!("gaussian needs A,sigma[,cx,cy], got {} numbers", v.len()))),
    }
}

impl FromStr for PotentialSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (family, args) = s
            .split_once(':')
            .ok_or_else(|| Error::Parse(format!("potential descriptor '{s}' lacks 'family:'")))?;
        let spec = match family.trim() {
            "gaussian" => PotentialSpec::Gaussian(term_from(&parse_reals(args)?)?),
            "gaussian_sum" => PotentialSpec::GaussianSum(
                args.split(';').filter(|t| !t.trim().is_empty()).map(|t| term_from(&parse_reals(t)?)).collect::<Result<_>>()?,
            ),
            "bump" => match parse_reals(args)?.as_slice() {
                [a, r] => PotentialSpec::Bump { amplitude: *a, radius: *r, center: Complex64::new(0.0, 0.0) },
                [a, r, cx, cy] => PotentialSpec::Bump { amplitude: *a, radius: *r, center: Complex64::new(*cx, *cy) },
                _ => return Err(Error::Parse("bump needs A,R[,cx,cy]".into())),
            },
            "file" => PotentialSpec::File(PathBuf::from(args.trim())),
            other => return Err(Error::Parse(format!("unknown potential family '{other}'"))),
        };
        spec.validate()?;
        Ok(spec)
    }
}

impl fmt::Display for PotentialSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let term = |g: &GaussianTerm| {
            if g.center == Complex64::new(0.0, 0.0) {
                format!("{},{}", g.amplitude, g.sigma)
            } else {
                format!("{},{},{},{}", g.amplitude, g.sigma, g.center.re, g.center.im)
            }
        };
        match self {
            PotentialSpec::Gaussian(g) => write!(f, "gaussian:{}", term(g)),
            PotentialSpec::GaussianSum(list) => {
                write!(f, "gaussian_sum:{}", list.iter().map(term).collect::<Vec<_>>().join(";"))
            }
            PotentialSpec::Bump { amplitude, radius, center } => {
                if *center == Complex64::new(0.0, 0.0) {
                    write!(f, "bump:{amplitude},{radius}")
                } else {
                    write!(f, "bump:{amplitude},{radius},{},{}", center.re, center.im)
                }
            }
            PotentialSpec::File(p) => write!(f, "file:{}", p.display()),
        }
    }
}

/// Real potential sampled on a grid, with decay constant `q` such that
/// `|v(z)| ≤ q(1+|z|)^{-4-ε}` at every node.
#[derive(Debug, Clone)]
pub struct Potential {
    pub grid: Arc<Grid>,
    pub values: Vec<f64>,
    pub decay_q: f64,
    pub decay_eps: f64,
    pub family: String,
}

pub fn sample_potential(spec: &PotentialSpec, grid: &Grid) -> Result<Potential> {
    spec.validate()?;
    if let PotentialSpec::File(path) = spec {
        let v = read_potential_file(path)?;
        if v.grid.points_per_side != grid.points_per_side || (v.grid.half_width - grid.half_width).abs() > 1e-12 {
            return Err(Error::Parameter(format!(
                "potential file grid (L={}, N={}) does not match requested grid (L={}, N={})",
                v.grid.half_width, v.grid.points_per_side, grid.half_width, grid.points_per_side
            )));
        }
        return Ok(v);
    }
    let values = grid.nodes.iter().map(|&z| spec.eval(z)).collect();
    Potential::from_values(Arc::new(grid.clone()), values, DEFAULT_DECAY_EPS, spec.to_string())
}

impl Potential {
    pub fn from_values(grid: Arc<Grid>, values: Vec<f64>, decay_eps: f64, family: String) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::Parameter(format!("{} values for a grid of {} nodes", values.len(), grid.len())));
        }
        if let Some(bad) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::Parameter(format!("potential value at node {bad} is not a finite real")));
        }
        if !(decay_eps.is_finite() && decay_eps > 0.0) {
            return Err(Error::Parameter(format!("decay exponent must be positive, got {decay_eps}")));
        }
        let decay_q = values
            .iter()
            .zip(&grid.nodes)
            .map(|(v, z)| v.abs() * (1.0 + z.norm()).powf(4.0 + decay_eps))
            .fold(0.0, f64::max);
        let vmax = values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let ring = (0..grid.len()).filter(|&i| grid.on_boundary(i)).map(|i| values[i].abs()).fold(0.0, f64::max);
        if ring > BOUNDARY_SMALLNESS * vmax {
            return Err(Error::Certificate(format!(
                "boundary value {ring:.3e} exceeds {BOUNDARY_SMALLNESS:e}·max|v| = {:.3e}; enlarge L",
                BOUNDARY_SMALLNESS * vmax
            )));
        }
        Ok(Potential { grid, values, decay_q, decay_eps, family })
    }

    pub fn zero(grid: &Grid) -> Self {
        Potential { grid: Arc::new(grid.clone()), values: vec![0.0; grid.len()], decay_q: 0.0, decay_eps: DEFAULT_DECAY_EPS, family: "zero".into() }
    }

    /// Weight exponent `s = 3 + ε/2`.
    pub fn weight_s(&self) -> f64 {
        3.0 + self.decay_eps / 2.0
    }

    pub fn scaled(&self, factor: f64) -> Result<Self> {
        let values = self.values.iter().map(|v| v * factor).collect();
        Potential::from_values(self.grid.clone(), values, self.decay_eps, format!("{}*{}", factor, self.family))
    }

    /// `v_ζ(z) = v(z - ζ)` for a lattice vector `ζ`; cells entering from
    /// outside the box are zero.
    pub fn shifted(&self, zeta: Complex64) -> Result<Self> {
        ensure_finite("zeta", zeta)?;
        let (a, b) = self.grid.cell_offset(zeta).ok_or_else(|| {
            Error::Parameter(format!("shift {zeta} is not a multiple of the grid spacing {}", self.grid.spacing))
        })?;
        let n = self.grid.points_per_side as isize;
        let mut values = vec![0.0; self.grid.len()];
        for k in 0..n {
            for j in 0..n {
                let (sj, sk) = (j - a, k - b);
                if (0..n).contains(&sj) && (0..n).contains(&sk) {
                    values[(k * n + j) as usize] = self.values[(sk * n + sj) as usize];
                }
            }
        }
        Potential::from_values(self.grid.clone(), values, self.decay_eps, format!("shift({},{})[{}]", zeta.re, zeta.im, self.family))
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|&v| v == 0.0)
    }
}

pub fn write_potential_file(v: &Potential, path: &Path) -> Result<()> {
    use std::fmt::Write as _;
    let g = &v.grid;
    let mut out = format!("L={}\nN={}\neps={}\n", g.half_width, g.points_per_side, v.decay_eps);
    for row in v.values.chunks(g.points_per_side) {
        let line: Vec<String> = row.iter().map(|x| format!("{x:.16e}")).collect();
        let _ = writeln!(out, "{}", line.join(" "));
    }
    std::fs::write(path, out)?;
    Ok(())
}

pub fn read_potential_file(path: &Path) -> Result<Potential> {
    let text = std::fs::read_to_string(path)?;
    parse_potential_text(&text, &format!("file:{}", path.display()))
}

pub fn parse_potential_text(text: &str, family: &str) -> Result<Potential> {
    let mut l = None;
    let mut n = None;
    let mut eps = None;
    let mut values = Vec::new();
    for line in text.lines().map(str::trim).filter(|s| !s.is_empty() && !s.starts_with('#')) {
        if let Some((key, val)) = line.split_once('=') {
            let val = val.trim();
            match key.trim() {
                "L" => l = Some(val.parse::<f64>().map_err(|e| Error::Parse(format!("L: {e}")))?),
                "N" => n = Some(val.parse::<usize>().map_err(|e| Error::Parse(format!("N: {e}")))?),
                "eps" => eps = Some(val.parse::<f64>().map_err(|e| Error::Parse(format!("eps: {e}")))?),
                other => return Err(Error::Parse(format!("unknown header key '{other}'"))),
            }
            continue;
        }
        for tok in line.split_whitespace() {
            values.push(tok.parse::<f64>().map_err(|e| Error::Parse(format!("value '{tok}': {e}")))?);
        }
    }
    let (l, n) = match (l, n) {
        (Some(l), Some(n)) => (l, n),
        _ => return Err(Error::Parse("potential file needs L= and N= header lines".into())),
    };
    let grid = make_grid(l, n)?;
    if values.len() != n * n {
        return Err(Error::Parse(format!("expected {} values, found {}", n * n, values.len())));
    }
    Potential::from_values(Arc::new(grid), values, eps.unwrap_or(DEFAULT_DECAY_EPS), family.to_string())
}

/// Complex field on the nodes of a grid.
#[derive(Debug, Clone)]
pub struct SampledField {
    pub grid: Arc<Grid>,
    pub values: Vec<Complex64>,
}

impl SampledField {
    pub fn new(grid: Arc<Grid>, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::Parameter(format!("{} values for a grid of {} nodes", values.len(), grid.len())));
        }
        Ok(SampledField { grid, values })
    }

    pub fn from_fn(grid: Arc<Grid>, f: impl Fn(Complex64) -> Complex64) -> Self {
        let values = grid.nodes.iter().map(|&z| f(z)).collect();
        SampledField { grid, values }
    }

    pub fn max_abs_diff(&self, f: impl Fn(Complex64) -> Complex64) -> f64 {
        self.values.iter().zip(&self.grid.nodes).map(|(v, &z)| (v - f(z)).norm()).fold(0.0, f64::max)
    }
}

/// Midpoint rule `h² Σ f_k`.
pub fn integrate(f: &SampledField) -> Complex64 {
    f.values.iter().sum::<Complex64>() * f.grid.cell_area()
}

pub fn integrate_real(grid: &Grid, values: &[f64]) -> f64 {
    values.iter().sum::<f64>() * grid.cell_area()
}

/// Mean of `ln|w|` over the square cell `[-h/2, h/2]²`:
/// `ln h + π/4 - 3/2 - (ln 2)/2`.
pub fn log_cell_average(h: f64) -> f64 {
    h.ln() + PI / 4.0 - 1.5 - 0.5 * std::f64::consts::LN_2
}

/// Gauss-Legendre nodes and weights on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut t = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, t);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * t * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            let p = if n == 1 { t } else { p1 };
            let pm = if n == 1 { 1.0 } else { p0 };
            dp = n as f64 * (t * p - pm) / (t * t - 1.0);
            let dt = p / dp;
            t -= dt;
            if dt.abs() < 1e-16 {
                break;
            }
        }
        x[i] = -t;
        x[n - 1 - i] = t;
        w[i] = 2.0 / ((1.0 - t * t) * dp * dp);
        w[n - 1 - i] = w[i];
    }
    (x, w)
}

/// Mean of `f` over the square cell `[-h/2, h/2]²` for `f` with at most an
/// integrable singularity at the centre. Polar coordinates on each of the
/// eight octants, with `r = R(φ)s⁴` clustering nodes near the centre so
/// that `r ln r` singularities become smooth in `s`.
pub fn cell_average(h: f64, order: usize, f: impl Fn(Complex64) -> Complex64) -> Complex64 {
    let (x, w) = gauss_legendre(order);
    let mut total = Complex64::new(0.0, 0.0);
    for octant in 0..8 {
        let lo = octant as f64 * PI / 4.0;
        for (xp, wp) in x.iter().zip(&w) {
            let phi = lo + (xp + 1.0) * PI / 8.0;
            let reach = 0.5 * h / phi.cos().abs().max(phi.sin().abs());
            let dir = Complex64::from_polar(1.0, phi);
            let mut radial = Complex64::new(0.0, 0.0);
            for (xs, ws) in x.iter().zip(&w) {
                let s = 0.5 * (xs + 1.0);
                let s3 = s * s * s;
                let r = reach * s3 * s;
                // r dr = R s⁴ · 4 R s³ ds
                radial += f(dir * r) * (4.0 * reach * reach * s3 * s3 * s) * (0.5 * ws);
            }
            total += radial * (wp * PI / 8.0);
        }
    }
    total / (h * h)
}
