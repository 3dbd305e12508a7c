//! Independent oracles for the integration tests: a fixed-point big-integer
//! evaluation of the Ei series and adaptive Simpson quadrature.

#![allow(dead_code)]

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Fractional bits of the fixed-point format (about 96 decimal digits).
const FRAC: u32 = 320;

/// Euler's constant to 60 digits.
const GAMMA_DIGITS: &str = "0.577215664901532860606512090082402431042159335939923598805767";

#[derive(Clone, Debug, PartialEq)]
pub struct Fx(pub BigInt);

impl Fx {
    fn one() -> Fx {
        Fx(BigInt::one() << FRAC)
    }

    fn zero() -> Fx {
        Fx(BigInt::zero())
    }

    pub fn from_f64(x: f64) -> Fx {
        assert!(x.is_finite());
        if x == 0.0 {
            return Fx::zero();
        }
        let bits = x.to_bits();
        let sign = if bits >> 63 == 1 { -1 } else { 1 };
        let exp = ((bits >> 52) & 0x7ff) as i64;
        let mant = if exp == 0 { (bits & ((1 << 52) - 1)) << 1 } else { (bits & ((1 << 52) - 1)) | (1 << 52) };
        let shift = exp - 1075 + FRAC as i64;
        let m = BigInt::from(mant) * sign;
        Fx(if shift >= 0 { m << shift as usize } else { m >> (-shift) as usize })
    }

    fn from_int(n: i64) -> Fx {
        Fx(BigInt::from(n) << FRAC)
    }

    pub fn from_decimal(s: &str) -> Fx {
        let (neg, s) = s.strip_prefix('-').map_or((false, s), |r| (true, r));
        let (int, frac) = s.split_once('.').unwrap_or((s, ""));
        let digits: BigInt = format!("{int}{frac}").parse().unwrap();
        let den = num_traits::pow(BigInt::from(10), frac.len());
        let v = (digits << FRAC) / den;
        Fx(if neg { -v } else { v })
    }

    pub fn to_f64(&self) -> f64 {
        // Keep 64 significant bits before converting, then rescale exactly.
        let bits = self.0.bits() as i64;
        let drop = (bits - 64).max(0);
        let top = (&self.0 >> drop as usize).to_f64().unwrap();
        top * 2f64.powi((drop - FRAC as i64) as i32)
    }

    fn add(&self, o: &Fx) -> Fx {
        Fx(&self.0 + &o.0)
    }

    fn sub(&self, o: &Fx) -> Fx {
        Fx(&self.0 - &o.0)
    }

    fn mul(&self, o: &Fx) -> Fx {
        Fx((&self.0 * &o.0) >> FRAC)
    }

    fn div(&self, o: &Fx) -> Fx {
        Fx((&self.0 << FRAC) / &o.0)
    }

    fn div_int(&self, n: i64) -> Fx {
        Fx(&self.0 / BigInt::from(n))
    }

    fn mul_int(&self, n: i64) -> Fx {
        Fx(&self.0 * BigInt::from(n))
    }

    fn sqrt(&self) -> Fx {
        Fx((&self.0 << FRAC).sqrt())
    }

    fn is_negligible(&self) -> bool {
        self.0.abs() < BigInt::from(16)
    }
}

/// `atanh(t)` for `|t| < 1` by its power series.
fn atanh(t: &Fx) -> Fx {
    let t2 = t.mul(t);
    let mut pow = t.clone();
    let mut acc = Fx::zero();
    let mut k = 1;
    loop {
        let term = pow.div_int(k);
        if term.is_negligible() {
            return acc;
        }
        acc = acc.add(&term);
        pow = pow.mul(&t2);
        k += 2;
    }
}

/// `atan(t)` for `|t| ≤ 1`, with two half-angle reductions before the series.
fn atan(t: &Fx) -> Fx {
    let mut t = t.clone();
    for _ in 0..2 {
        let r = Fx::one().add(&t.mul(&t)).sqrt();
        t = t.div(&Fx::one().add(&r));
    }
    let t2 = t.mul(&t);
    let mut pow = t.clone();
    let mut acc = Fx::zero();
    let mut k = 1;
    loop {
        let term = pow.div_int(k);
        if term.is_negligible() {
            return acc.mul_int(4);
        }
        acc = if (k / 2) % 2 == 0 { acc.add(&term) } else { acc.sub(&term) };
        pow = pow.mul(&t2);
        k += 2;
    }
}

pub fn pi() -> Fx {
    // Machin: π = 16 atan(1/5) - 4 atan(1/239), with the plain series.
    let series = |inv: i64| {
        let x = Fx::one().div_int(inv);
        let x2 = x.mul(&x);
        let mut pow = x;
        let mut acc = Fx::zero();
        let mut k = 1;
        loop {
            let term = pow.div_int(k);
            if term.is_negligible() {
                return acc;
            }
            acc = if (k / 2) % 2 == 0 { acc.add(&term) } else { acc.sub(&term) };
            pow = pow.mul(&x2);
            k += 2;
        }
    };
    series(5).mul_int(16).sub(&series(239).mul_int(4))
}

fn ln2() -> Fx {
    atanh(&Fx::one().div_int(3)).mul_int(2)
}

/// Natural log of a positive fixed-point number.
pub fn ln(x: &Fx) -> Fx {
    assert!(x.0.is_positive());
    // x = m·2^k with m in [1, 2).
    let k = x.0.bits() as i64 - 1 - FRAC as i64;
    let m = if k >= 0 { Fx(&x.0 >> k as usize) } else { Fx(&x.0 << (-k) as usize) };
    let t = m.sub(&Fx::one()).div(&m.add(&Fx::one()));
    atanh(&t).mul_int(2).add(&ln2().mul_int(k))
}

/// `atan2(y, x)` in `(-π, π]`.
pub fn atan2(y: &Fx, x: &Fx) -> Fx {
    let p = pi();
    let half = p.div_int(2);
    if y.0.abs() <= x.0.abs() {
        if x.0.is_zero() {
            return Fx::zero();
        }
        let a = atan(&y.div(x));
        if x.0.is_positive() {
            a
        } else if y.0.is_negative() {
            a.sub(&p)
        } else {
            a.add(&p)
        }
    } else {
        let a = atan(&x.div(y));
        if y.0.is_positive() {
            half.sub(&a)
        } else {
            Fx(-half.0).sub(&a)
        }
    }
}

pub fn gamma() -> Fx {
    Fx::from_decimal(GAMMA_DIGITS)
}

/// `Σ_{n≥1} zⁿ/(n·n!)` in fixed point, returned as (re, im).
fn series(re: &Fx, im: &Fx) -> (Fx, Fx) {
    let (mut pr, mut pi_) = (Fx::one(), Fx::zero());
    let (mut sr, mut si) = (Fx::zero(), Fx::zero());
    let mut n: i64 = 1;
    loop {
        // p ← p·z/n gives zⁿ/n!
        let nr = pr.mul(re).sub(&pi_.mul(im)).div_int(n);
        let ni = pr.mul(im).add(&pi_.mul(re)).div_int(n);
        pr = nr;
        pi_ = ni;
        let (tr, ti) = (pr.div_int(n), pi_.div_int(n));
        if n > 8 && tr.is_negligible() && ti.is_negligible() {
            return (sr, si);
        }
        sr = sr.add(&tr);
        si = si.add(&ti);
        n += 1;
    }
}

/// `Ei(z) = γ + ln(−z) + Σ zⁿ/(n·n!)` with the principal logarithm.
pub fn ei_oracle(z: Complex64) -> Complex64 {
    let (re, im) = (Fx::from_f64(z.re), Fx::from_f64(z.im));
    let (sr, si) = series(&re, &im);
    let modsq = re.mul(&re).add(&im.mul(&im));
    let log_re = ln(&modsq).div_int(2);
    let (mre, mim) = (Fx(-re.0.clone()), Fx(-im.0.clone()));
    let arg = atan2(&mim, &mre);
    let out_re = gamma().add(&log_re).add(&sr);
    let out_im = arg.add(&si);
    Complex64::new(out_re.to_f64(), out_im.to_f64())
}

/// `Ei(z) + Ei(z̄) = 2γ + ln|z|² + 2 Re Σ zⁿ/(n·n!)`.
pub fn ei_sym_oracle(z: Complex64) -> f64 {
    let (re, im) = (Fx::from_f64(z.re), Fx::from_f64(z.im));
    let (sr, _) = series(&re, &im);
    let modsq = re.mul(&re).add(&im.mul(&im));
    gamma().mul_int(2).add(&ln(&modsq)).add(&sr.mul_int(2)).to_f64()
}

/// Adaptive Simpson on `[a, b]` to absolute tolerance `tol`.
pub fn simpson<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64) -> f64 {
    fn rec<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, fa: f64, fm: f64, fb: f64, whole: f64, tol: f64, depth: u32) -> f64 {
        let m = 0.5 * (a + b);
        let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
        let (flm, frm) = (f(lm), f(rm));
        let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
        let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
        let delta = left + right - whole;
        if depth == 0 || delta.abs() <= 15.0 * tol.max(4.0 * f64::EPSILON * (left + right).abs()) {
            return left + right + delta / 15.0;
        }
        rec(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1) + rec(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1)
    }
    let (fa, fb, fm) = (f(a), f(b), f(0.5 * (a + b)));
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    rec(f, a, b, fa, fm, fb, whole, tol, 30)
}

/// Piecewise adaptive Simpson over the breakpoints `xs`.
pub fn simpson_pieces<F: Fn(f64) -> f64>(f: &F, xs: &[f64], tol: f64) -> f64 {
    xs.windows(2).map(|w| simpson(f, w[0], w[1], tol / xs.len() as f64)).sum()
}

/// `γ = −∫₀^∞ e^{−x} ln x dx`, the part on `(0, 1)` taken through `x = e^{−u}`.
pub fn gamma_by_quadrature() -> f64 {
    let near = |u: f64| -u * (-u - (-u).exp()).exp();
    let far = |x: f64| (-x).exp() * x.ln();
    let bp: Vec<f64> = (0..=40).map(|k| k as f64).collect();
    let a = simpson_pieces(&near, &bp, 1e-17);
    let bp2: Vec<f64> = (1..=60).map(|k| k as f64).collect();
    let b = simpson_pieces(&far, &bp2, 1e-17);
    -(a + b)
}

/// `Ei(x₀ + iy) = ∫_{−∞}^{x₀} e^{t+iy}/(t+iy) dt` along a horizontal line,
/// valid for `y ≠ 0`.
pub fn ei_by_contour(z: Complex64) -> Complex64 {
    assert!(z.im != 0.0);
    let f = |t: f64| {
        let w = Complex64::new(t, z.im);
        w.exp() / w
    };
    let mut bp: Vec<f64> = (0..=80).map(|k| z.re - 80.0 + k as f64).collect();
    bp.dedup();
    let re = simpson_pieces(&|t| f(t).re, &bp, 1e-16);
    let im = simpson_pieces(&|t| f(t).im, &bp, 1e-16);
    Complex64::new(re, im)
}

/// Mean of `ln|w|` over the square `[−h/2, h/2]²`, with the inner integral in
/// closed form and the outer one by quadrature.
pub fn log_cell_average_by_quadrature(h: f64) -> f64 {
    let a = 0.5 * h;
    let inner = |y: f64| {
        if y == 0.0 {
            a * (a * a).ln() - 2.0 * a
        } else {
            a * (a * a + y * y).ln() - 2.0 * a + 2.0 * y * (a / y).atan()
        }
    };
    // (1/h²)·4·∫₀^a ½ F(y) dy
    2.0 * simpson(&inner, 0.0, a, 1e-16) / (h * h)
}
