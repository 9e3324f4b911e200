//! Scalar root finding and maximization.

use crate::error::ModelError;

pub const MAX_BISECTION_ITERATIONS: usize = 200;

/// Bisection for an increasing function with `g(lo) < 0 <= g(hi)`.
///
/// The endpoints themselves are never evaluated, so callers may pass an
/// endpoint where `g` is singular. Runs until no midpoint strictly inside the
/// bracket is representable (well below 1e-12 in `x`), or for
/// [`MAX_BISECTION_ITERATIONS`].
pub fn bisect_increasing<G: Fn(f64) -> f64>(g: G, mut lo: f64, mut hi: f64) -> f64 {
    for _ in 0..MAX_BISECTION_ITERATIONS {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if g(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Root of an increasing `g` on `(lo, hi)` with a residual check.
pub fn root_increasing<G: Fn(f64) -> f64>(
    what: &'static str,
    g: G,
    lo: f64,
    hi: f64,
    residual_tol: f64,
) -> Result<f64, ModelError> {
    let x = bisect_increasing(&g, lo, hi);
    let residual = g(x).abs();
    if residual.is_finite() && residual <= residual_tol {
        Ok(x)
    } else {
        Err(ModelError::Convergence { what, residual, iterations: MAX_BISECTION_ITERATIONS })
    }
}

/// Largest `x` in `[ok, bad]` (either order) for which `pred` holds, given
/// `pred(ok)` and `!pred(bad)`.
pub fn bisect_boundary<P: Fn(f64) -> bool>(pred: P, mut ok: f64, mut bad: f64, x_tol: f64) -> f64 {
    for _ in 0..MAX_BISECTION_ITERATIONS {
        if (bad - ok).abs() <= x_tol {
            break;
        }
        let mid = 0.5 * (ok + bad);
        if mid == ok || mid == bad {
            break;
        }
        if pred(mid) {
            ok = mid;
        } else {
            bad = mid;
        }
    }
    ok
}

const INV_PHI: f64 = 0.618_033_988_749_894_8;

/// Golden-section search for the maximum of a unimodal `h` on `[a, b]`.
/// Returns `(argmax, max)`; endpoints are included as candidates.
pub fn golden_section_max<H: Fn(f64) -> f64>(h: H, a: f64, b: f64, x_tol: f64) -> (f64, f64) {
    if b <= a {
        return (a, h(a));
    }
    let (mut lo, mut hi) = (a, b);
    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let mut h1 = h(x1);
    let mut h2 = h(x2);
    for _ in 0..MAX_BISECTION_ITERATIONS {
        if hi - lo <= x_tol {
            break;
        }
        if h1 < h2 {
            lo = x1;
            x1 = x2;
            h1 = h2;
            x2 = lo + INV_PHI * (hi - lo);
            h2 = h(x2);
        } else {
            hi = x2;
            x2 = x1;
            h2 = h1;
            x1 = hi - INV_PHI * (hi - lo);
            h1 = h(x1);
        }
    }
    let mut best = if h1 >= h2 { (x1, h1) } else { (x2, h2) };
    for x in [a, b] {
        let v = h(x);
        if v > best.1 {
            best = (x, v);
        }
    }
    best
}

/// `n` evenly spaced points from `a` to `b` inclusive.
pub fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![a],
        _ => {
            let h = (b - a) / (n - 1) as f64;
            (0..n).map(|i| if i == n - 1 { b } else { a + h * i as f64 }).collect()
        }
    }
}
