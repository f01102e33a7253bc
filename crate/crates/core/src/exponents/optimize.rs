//! One-dimensional search: bisection for roots, grid scan plus golden-section
//! refinement for suprema of exponent functions on `(0, 1]`.

use rayon::prelude::*;
use serde::Serialize;

use super::ExtReal;

/// Smallest abscissa ever evaluated; stands in for `0+` on the open end.
pub const THETA_FLOOR: f64 = 1e-9;

const CHUNK: usize = 512;
const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// Root of `f` on `[lo, hi]` by bisection; `f(lo)` and `f(hi)` must differ in sign.
///
/// Runs until the bracket no longer shrinks in floating point or its width
/// drops below `tol`.
pub fn bisect<F: Fn(f64) -> f64>(f: F, mut lo: f64, mut hi: f64, tol: f64) -> f64 {
    let f_lo = f(lo);
    let f_hi = f(hi);
    assert!(
        f_lo.signum() != f_hi.signum() || f_lo == 0.0 || f_hi == 0.0,
        "root not bracketed: f({lo}) = {f_lo}, f({hi}) = {f_hi}"
    );
    if f_lo == 0.0 {
        return lo;
    }
    if f_hi == 0.0 {
        return hi;
    }
    let lo_positive = f_lo > 0.0;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi || hi - lo <= tol {
            break;
        }
        let v = f(mid);
        if v == 0.0 {
            return mid;
        }
        if (v > 0.0) == lo_positive {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Grid resolution and refinement passes for [`sup_unit_interval`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SupOptions {
    pub grid: usize,
    pub passes: usize,
}

impl SupOptions {
    pub const MIN_GRID: usize = 64;

    pub fn with_grid(grid: usize) -> Self {
        Self {
            grid,
            ..Self::default()
        }
    }
}

impl Default for SupOptions {
    fn default() -> Self {
        Self { grid: 4096, passes: 2 }
    }
}

/// Supremum estimate with its location.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SupEstimate {
    pub value: ExtReal,
    pub argmax: f64,
    /// Best value on the raw grid, before refinement.
    pub grid_value: ExtReal,
    /// Change in the estimate made by the last refinement pass.
    pub refinement_delta: f64,
}

/// Best grid point among `theta_i = i / grid`, `i = 1..=grid`; ties go to the smaller theta.
///
/// The scan runs in fixed-size chunks that are merged in index order, so the
/// result is the same for any number of worker threads.
pub fn grid_sup<F>(f: &F, grid: usize) -> (ExtReal, f64)
where
    F: Fn(f64) -> ExtReal + Sync + ?Sized,
{
    assert!(grid >= 1);
    let chunks = grid.div_ceil(CHUNK);
    let bests: Vec<(ExtReal, usize)> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut best = (ExtReal::NegInf, c * CHUNK + 1);
            for i in c * CHUNK + 1..=((c + 1) * CHUNK).min(grid) {
                let v = f(i as f64 / grid as f64);
                if v > best.0 {
                    best = (v, i);
                }
            }
            best
        })
        .collect();
    let (value, i) = bests
        .into_iter()
        .fold((ExtReal::NegInf, 1), |acc, b| if b.0 > acc.0 { b } else { acc });
    (value, i as f64 / grid as f64)
}

/// Golden-section maximization on `[a, b]`, seeded with a known good point.
/// Returns the best point evaluated.
fn golden_max<F>(f: &F, mut a: f64, mut b: f64, mut best: (ExtReal, f64)) -> (ExtReal, f64)
where
    F: Fn(f64) -> ExtReal + ?Sized,
{
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    for (v, x) in [(fc, c), (fd, d)] {
        if v > best.0 {
            best = (v, x);
        }
    }
    while b - a > 1e-14 * (1.0 + a.abs()) {
        let go_left = match (fc, fd) {
            (ExtReal::NegInf, ExtReal::NegInf) => best.1 < c,
            _ => fc >= fd,
        };
        if go_left {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
            if fc > best.0 {
                best = (fc, c);
            }
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
            if fd > best.0 {
                best = (fd, d);
            }
        }
    }
    best
}

/// `sup_{0 < theta <= 1} f(theta)`: grid scan, then golden-section passes on
/// brackets around the best point found so far, each pass 64x narrower.
///
/// The estimate never falls below the raw grid maximum.
pub fn sup_unit_interval<F>(f: &F, opts: SupOptions) -> SupEstimate
where
    F: Fn(f64) -> ExtReal + Sync + ?Sized,
{
    assert!(opts.grid >= SupOptions::MIN_GRID, "grid must have at least 64 points");
    let (grid_value, grid_arg) = grid_sup(f, opts.grid);
    let mut best = (grid_value, grid_arg);
    let mut delta = 0.0;
    if !grid_value.is_neg_inf() {
        let mut half = 1.0 / opts.grid as f64;
        for _ in 0..opts.passes {
            let before = best.0;
            let a = (best.1 - half).max(THETA_FLOOR);
            let b = (best.1 + half).min(1.0);
            best = golden_max(f, a, b, best);
            delta = match (best.0, before) {
                (ExtReal::Finite(x), ExtReal::Finite(y)) => x - y,
                _ => 0.0,
            };
            half /= 64.0;
        }
        // the open end: f may peak as theta -> 0+
        let edge = f(THETA_FLOOR);
        if edge > best.0 {
            best = (edge, THETA_FLOOR);
        }
    }
    SupEstimate {
        value: best.0,
        argmax: best.1,
        grid_value,
        refinement_delta: delta,
    }
}

/// `sup f(theta1, theta2)` over `(0, 1]^2` by grid scan plus alternating
/// coordinate golden-section refinement.
pub fn sup_unit_square<F>(f: &F, grid: usize) -> (ExtReal, (f64, f64))
where
    F: Fn(f64, f64) -> ExtReal + Sync + ?Sized,
{
    assert!(grid >= 2);
    let rows: Vec<(ExtReal, usize, usize)> = (1..=grid)
        .into_par_iter()
        .map(|i| {
            let t1 = i as f64 / grid as f64;
            let mut best = (ExtReal::NegInf, i, 1);
            for j in 1..=grid {
                let v = f(t1, j as f64 / grid as f64);
                if v > best.0 {
                    best = (v, i, j);
                }
            }
            best
        })
        .collect();
    let (value, i, j) = rows
        .into_iter()
        .fold((ExtReal::NegInf, 1, 1), |acc, r| if r.0 > acc.0 { r } else { acc });
    let mut best = (value, (i as f64 / grid as f64, j as f64 / grid as f64));
    if value.is_neg_inf() {
        return best;
    }
    let h = 1.0 / grid as f64;
    for _ in 0..8 {
        let (t1, t2) = best.1;
        let (v, x) = golden_max(
            &|x| f(x, t2),
            (t1 - h).max(THETA_FLOOR),
            (t1 + h).min(1.0),
            (best.0, t1),
        );
        best = (v, (x, t2));
        let (t1, t2) = best.1;
        let (v, y) = golden_max(
            &|y| f(t1, y),
            (t2 - h).max(THETA_FLOOR),
            (t2 + h).min(1.0),
            (best.0, t2),
        );
        best = (v, (t1, y));
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bisect_finds_sqrt_two() {
        let r = bisect(|x| x * x - 2.0, 0.0, 2.0, 1e-15);
        assert!((r - 2f64.sqrt()).abs() < 1e-14);
        let r = bisect(|x| 2.0 - x * x, 0.0, 2.0, 1e-15);
        assert!((r - 2f64.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn golden_refines_smooth_peak() {
        let f = |t: f64| ExtReal::Finite(-(t - 0.123_456_789).powi(2));
        let s = sup_unit_interval(&f, SupOptions::default());
        assert!((s.argmax - 0.123_456_789).abs() < 1e-7);
        assert!(s.value.finite().unwrap() > -1e-14);
        assert!(s.value >= s.grid_value);
    }

    #[test]
    fn boundary_of_finite_region_is_found() {
        let edge = 0.110_027_864_7;
        let f = |t: f64| if t < edge { ExtReal::NegInf } else { ExtReal::Finite(-t) };
        let s = sup_unit_interval(&f, SupOptions::default());
        assert!((s.value.finite().unwrap() + edge).abs() < 1e-12);
    }

    #[test]
    fn open_end_peak() {
        let f = |t: f64| ExtReal::Finite(-t);
        let s = sup_unit_interval(&f, SupOptions::default());
        assert!(s.value.finite().unwrap().abs() < 1e-8);
    }

    #[test]
    fn all_neg_inf() {
        let f = |_: f64| ExtReal::NegInf;
        assert_eq!(sup_unit_interval(&f, SupOptions::default()).value, ExtReal::NegInf);
    }

    #[test]
    fn grid_ties_prefer_smaller_theta() {
        let f = |_: f64| ExtReal::Finite(1.0);
        assert_eq!(grid_sup(&f, 2048), (ExtReal::Finite(1.0), 1.0 / 2048.0));
    }

    #[test]
    fn square_sup() {
        let f = |a: f64, b: f64| ExtReal::Finite(-(a - 0.3).powi(2) - (b - 0.7).powi(2));
        let (v, (a, b)) = sup_unit_square(&f, 256);
        assert!(v.finite().unwrap() > -1e-14);
        assert!((a - 0.3).abs() < 1e-6 && (b - 0.7).abs() < 1e-6);
    }
}
