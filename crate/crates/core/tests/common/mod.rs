//! Independent reference computations. Nothing here calls the closed forms
//! under test except `Profile::eval` and `metric_at`, which the oracles are
//! built from.

#![allow(dead_code)]

use neck_core::profiles::Profile;
use neck_core::surface::{metric_at, MetricPoint};

/// The transition template written directly from `φ(u) = e^(-1/u)`.
pub fn template(r: f64) -> f64 {
    let phi = |u: f64| if u > 0.0 { (-1.0 / u).exp() } else { 0.0 };
    let (a, b) = (phi(r - 1.0), phi(2.0 - r));
    if a + b == 0.0 {
        0.0
    } else {
        a / (a + b)
    }
}

#[allow(clippy::too_many_arguments)]
fn simpson_rec(
    f: &dyn Fn(f64) -> f64,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    eps: f64,
    depth: u32,
) -> f64 {
    let m = 0.5 * (a + b);
    let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
    let (flm, frm) = (f(lm), f(rm));
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let diff = left + right - whole;
    if depth == 0 || diff.abs() <= 15.0 * eps {
        left + right + diff / 15.0
    } else {
        simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * eps, depth - 1)
            + simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * eps, depth - 1)
    }
}

/// Adaptive Simpson quadrature with Richardson correction.
pub fn adaptive_simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, eps: f64) -> f64 {
    if a == b {
        return 0.0;
    }
    let (fa, fb, fm) = (f(a), f(b), f(0.5 * (a + b)));
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    simpson_rec(&f, a, b, fa, fm, fb, whole, eps, 50)
}

/// `f(x)` by integrating `delta * s` twice: first `f'` on a fine set of
/// nodes, then `f` from those.
pub fn base_oracle(delta: f64, x: f64) -> f64 {
    let r = x.abs();
    if r <= 1.0 {
        return 1.0;
    }
    let slope = |y: f64| adaptive_simpson(|u| delta * template(u), 1.0, y, 1e-14);
    1.0 + adaptive_simpson(slope, 1.0, r, 1e-12)
}

/// Same value through the repeated-integration kernel `(r - u)`.
pub fn base_oracle_kernel(delta: f64, x: f64) -> f64 {
    let r = x.abs();
    if r <= 1.0 {
        return 1.0;
    }
    let mut total = 0.0;
    // Split at 2 where the integrand stops being smooth in closed form.
    let knots: [f64; 5] = [1.0, 1.25, 1.5, 1.75, 2.0];
    for w in knots.windows(2) {
        let (a, b) = (w[0], w[1].min(r));
        if a < b {
            total += adaptive_simpson(|u| (r - u) * delta * template(u), a, b, 1e-15);
        }
    }
    if r > 2.0 {
        total += delta * (r - 2.0) * (r - 2.0) / 2.0;
    }
    1.0 + total
}

pub fn central_diff(f: impl Fn(f64) -> f64, x: f64, h: f64) -> f64 {
    (f(x + h) - f(x - h)) / (2.0 * h)
}

/// Five-point central difference, `O(h^4)`.
pub fn central_diff5(f: impl Fn(f64) -> f64, x: f64, h: f64) -> f64 {
    (f(x - 2.0 * h) - 8.0 * f(x - h) + 8.0 * f(x + h) - f(x + 2.0 * h)) / (12.0 * h)
}

pub fn second_diff(f: impl Fn(f64) -> f64, x: f64, h: f64) -> f64 {
    (f(x + h) - 2.0 * f(x) + f(x - h)) / (h * h)
}

/// First fundamental form of `(x, θ) ↦ (x, h cos θ, h sin θ)` from
/// finite-difference partials of the embedding. Returns `(E, F, G)`.
pub fn pullback_metric<P: Profile>(p: &P, x: f64, theta: f64, step: f64) -> (f64, f64, f64) {
    let embed = |x: f64, th: f64| {
        let h = p.eval(x);
        [x, h * th.cos(), h * th.sin()]
    };
    let partial = |dx: f64, dt: f64| {
        let a = embed(x + dx * step, theta + dt * step);
        let b = embed(x - dx * step, theta - dt * step);
        [
            (a[0] - b[0]) / (2.0 * step),
            (a[1] - b[1]) / (2.0 * step),
            (a[2] - b[2]) / (2.0 * step),
        ]
    };
    let (u, v) = (partial(1.0, 0.0), partial(0.0, 1.0));
    let dot = |a: [f64; 3], b: [f64; 3]| a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
    (dot(u, u), dot(u, v), dot(v, v))
}

/// Christoffel symbols `½ g^{-1}(∂g)` of a θ-invariant diagonal metric,
/// with the `x`-derivatives of `E` and `G` taken by central differences.
/// Returns `(Γ^x_xx, Γ^x_θθ, Γ^θ_xθ)`.
pub fn fd_christoffel<P: Profile>(p: &P, x: f64, step: f64) -> (f64, f64, f64) {
    let m: MetricPoint = metric_at(p, x);
    let ex = central_diff(|y| metric_at(p, y).e, x, step);
    let gx = central_diff(|y| metric_at(p, y).g, x, step);
    (ex / (2.0 * m.e), -gx / (2.0 * m.e), gx / (2.0 * m.g))
}

/// Brioschi's formula for `F = 0` and θ-independent `E, G`:
/// `K = -1/(2√(EG)) · d/dx (G_x / √(EG))`.
pub fn brioschi_curvature<P: Profile>(p: &P, x: f64, step: f64) -> f64 {
    let ratio = |y: f64| {
        let gx = central_diff(|z| metric_at(p, z).g, y, step);
        let m = metric_at(p, y);
        gx / (m.e * m.g).sqrt()
    };
    let m = metric_at(p, x);
    -central_diff(ratio, x, step) / (2.0 * (m.e * m.g).sqrt())
}

/// `argmin` of `p` on `[lo, hi]` by exhaustive scan.
pub fn brute_argmin<P: Profile>(p: &P, lo: f64, hi: f64, step: f64) -> (f64, f64) {
    let n = ((hi - lo) / step).round() as usize;
    (0..=n)
        .map(|i| lo + i as f64 * step)
        .map(|x| (x, p.excess(x)))
        .fold((f64::NAN, f64::INFINITY), |best, (x, e)| {
            if e < best.1 {
                (x, e)
            } else {
                best
            }
        })
}
