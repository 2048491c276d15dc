//! One-dimensional minimization on an open interval: a log-spaced grid that
//! crowds both endpoints, then golden-section refinement around the best
//! grid point.

const GRID: usize = 64;
const INSET: f64 = 1e-6;
const REL_TOL: f64 = 1e-8;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Minimum {
    pub x: f64,
    pub value: f64,
}

fn grid(lo: f64, hi: f64) -> Vec<f64> {
    let len = hi - lo;
    let delta = INSET * len;
    let half = GRID / 2;
    let ratio = (0.5 * len / delta).powf(1.0 / (half - 1) as f64);
    let mut pts = Vec::with_capacity(GRID);
    let mut u = delta;
    for _ in 0..half {
        pts.push(lo + u);
        pts.push(hi - u);
        u *= ratio;
    }
    pts.sort_by(f64::total_cmp);
    pts.dedup();
    pts
}

/// Minimizes `f` over `(lo, hi)`. Non-finite objective values count as `+inf`.
pub fn minimize_open_interval(lo: f64, hi: f64, f: impl Fn(f64) -> f64) -> Minimum {
    let eval = |x: f64| {
        let v = f(x);
        if v.is_nan() { f64::INFINITY } else { v }
    };
    let pts = grid(lo, hi);
    let vals: Vec<f64> = pts.iter().map(|&x| eval(x)).collect();
    let best = (0..pts.len()).min_by(|&i, &j| vals[i].total_cmp(&vals[j])).unwrap_or(0);
    let mut out = Minimum {
        x: pts[best],
        value: vals[best],
    };
    let mut l = if best == 0 { lo + 0.5 * INSET * (hi - lo) } else { pts[best - 1] };
    let mut r = if best + 1 == pts.len() { hi - 0.5 * INSET * (hi - lo) } else { pts[best + 1] };
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let mut x1 = r - g * (r - l);
    let mut x2 = l + g * (r - l);
    let mut f1 = eval(x1);
    let mut f2 = eval(x2);
    for _ in 0..200 {
        if r - l <= REL_TOL * (0.5 * (l + r)).abs().max(f64::MIN_POSITIVE) {
            break;
        }
        if f1 <= f2 {
            r = x2;
            x2 = x1;
            f2 = f1;
            x1 = r - g * (r - l);
            f1 = eval(x1);
        } else {
            l = x1;
            x1 = x2;
            f1 = f2;
            x2 = l + g * (r - l);
            f2 = eval(x2);
        }
    }
    for (x, v) in [(x1, f1), (x2, f2)] {
        if v < out.value {
            out = Minimum { x, value: v };
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finds_interior_minimum() {
        let m = minimize_open_interval(0.0, 3.0, |x| (x - 1.234).powi(2) + 2.0);
        assert!((m.x - 1.234).abs() < 1e-6);
        assert!((m.value - 2.0).abs() < 1e-12);
    }

    #[test]
    fn finds_minimum_near_an_endpoint() {
        let m = minimize_open_interval(1.0, 2.0, |x| -((2.0 - x).ln()) + 50.0 * x);
        // derivative 1/(2-x) + 50 = 0 has no root; decreasing towards lo
        assert!(m.x - 1.0 < 1e-5);
        let m = minimize_open_interval(0.0, 1.0, |x| 1.0 / x + 1.0 / (1.0 - x) + 1e3 * (x - 0.999_9).powi(2));
        assert!(m.value.is_finite());
    }

    #[test]
    fn grid_is_inside_and_sorted() {
        let g = grid(1.0, 13.0 / 7.0);
        assert!(g.len() >= GRID - 1);
        assert!(g.windows(2).all(|w| w[0] < w[1]));
        assert!(g[0] > 1.0 && *g.last().unwrap() < 13.0 / 7.0);
    }
}
