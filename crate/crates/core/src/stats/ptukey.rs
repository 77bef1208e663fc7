//! Studentized range distribution by nested Gauss-Legendre quadrature.
//!
//! For `k` groups and `df` error degrees of freedom,
//!
//! ```text
//! P(Q <= q) = integral_0^inf f_df(s) W(q s) ds
//! W(w)      = k integral phi(z) [Phi(z) - Phi(z - w)]^(k-1) dz
//! ```
//!
//! where `f_df` is the density of `sqrt(chi^2_df / df)` and `W` is the CDF of
//! the range of `k` standard normals.

use crate::special::{ln_gamma, norm_cdf, norm_pdf};

// 16-point Gauss-Legendre nodes and weights on [-1, 1] (positive half).
const GL_NODES: [f64; 8] = [
    0.0950125098376374,
    0.2816035507792589,
    0.4580167776572274,
    0.6178762444026438,
    0.755404408355003,
    0.8656312023878318,
    0.9445750230732326,
    0.9894009349916499,
];
const GL_WEIGHTS: [f64; 8] = [
    0.1894506104550685,
    0.1826034150449236,
    0.1691565193950025,
    0.1495959888165767,
    0.1246289712555339,
    0.0951585116824928,
    0.0622535239386479,
    0.0271524594117541,
];

/// Composite 16-point Gauss-Legendre over `[a, b]` split into `panels` pieces.
fn integrate(a: f64, b: f64, panels: usize, f: impl Fn(f64) -> f64) -> f64 {
    let width = (b - a) / panels as f64;
    let mut total = 0.0;
    for p in 0..panels {
        let center = a + (p as f64 + 0.5) * width;
        let half = width / 2.0;
        for (x, w) in GL_NODES.iter().zip(GL_WEIGHTS) {
            total += w * (f(center - half * x) + f(center + half * x));
        }
    }
    total * width / 2.0
}

/// CDF of the range of `k` independent standard normals.
fn range_cdf(w: f64, k: usize) -> f64 {
    if w <= 0.0 {
        return 0.0;
    }
    let km1 = (k - 1) as i32;
    let inner = integrate(-8.5, 8.5 + w, 40, |z| {
        let diff = norm_cdf(z) - norm_cdf(z - w);
        norm_pdf(z) * diff.max(0.0).powi(km1)
    });
    (k as f64 * inner).clamp(0.0, 1.0)
}

/// `P(Q <= q)` for the studentized range with `k` groups and `df` degrees of freedom.
pub fn ptukey(q: f64, k: usize, df: f64) -> f64 {
    assert!(k >= 2, "studentized range needs at least two groups");
    if q <= 0.0 {
        return 0.0;
    }
    if q.is_infinite() {
        return 1.0;
    }
    if df > 25_000.0 {
        return range_cdf(q, k);
    }
    let (lo, hi) = scale_range(df);
    integrate(lo, hi, 24, |s| scale_density(s, df) * range_cdf(q * s, k)).clamp(0.0, 1.0)
}

/// Density of `s = sqrt(chi^2_df / df)`.
fn scale_density(s: f64, df: f64) -> f64 {
    if s <= 0.0 {
        return 0.0;
    }
    let half = df / 2.0;
    let ln_norm = std::f64::consts::LN_2 + half * half.ln() - ln_gamma(half);
    (ln_norm + (df - 1.0) * s.ln() - half * s * s).exp()
}

/// Interval holding all but a negligible part of the `s` density.
fn scale_range(df: f64) -> (f64, f64) {
    let spread = 12.0 / (2.0 * df).sqrt();
    ((1.0 - spread).max(0.0), 1.0 + spread.max(8.0 / df.sqrt()))
}

/// Upper-tail quantile: the `q` with `P(Q > q) = alpha`, by Illinois regula falsi.
pub fn qtukey(alpha: f64, k: usize, df: f64) -> f64 {
    let g = |q: f64| ptukey(q, k, df) - (1.0 - alpha);
    let (mut a, mut b) = (0.0, 4.0);
    let (mut ga, mut gb) = (g(a), g(b));
    while gb < 0.0 {
        (a, ga) = (b, gb);
        b *= 2.0;
        gb = g(b);
    }
    let mut side = 0;
    for _ in 0..100 {
        let c = (a * gb - b * ga) / (gb - ga);
        let gc = g(c);
        if gc.abs() < 1e-12 || (b - a).abs() < 1e-12 {
            return c;
        }
        if (gc < 0.0) == (ga < 0.0) {
            (a, ga) = (c, gc);
            if side == -1 {
                gb /= 2.0;
            }
            side = -1;
        } else {
            (b, gb) = (c, gc);
            if side == 1 {
                ga /= 2.0;
            }
            side = 1;
        }
    }
    0.5 * (a + b)
}
