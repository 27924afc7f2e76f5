//! Deterministic one-dimensional maximization: a fixed coarse grid locates the
//! best bracket, golden-section search refines it.

/// Coarse grid size for frequency and gauge searches.
pub const GRID_POINTS: usize = 256;
/// Coarse grid size per axis for the two-parameter strategy searches.
pub const STRATEGY_GRID: usize = 64;
/// Golden-section stopping width.
pub const GOLDEN_TOL: f64 = 1e-10;

const INV_PHI: f64 = 0.618_033_988_749_894_8;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Maximum {
    pub x: f64,
    pub value: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Spacing {
    Linear,
    Log,
}

pub fn grid(a: f64, b: f64, n: usize, spacing: Spacing) -> Vec<f64> {
    assert!(n >= 2, "grid needs at least two points");
    (0..n)
        .map(|i| {
            let s = i as f64 / (n - 1) as f64;
            match spacing {
                Spacing::Linear => a + (b - a) * s,
                Spacing::Log => (a.ln() + (b.ln() - a.ln()) * s).exp(),
            }
        })
        .collect()
}

/// Golden-section search for a maximum of a unimodal `f` on `[a, b]`.
pub fn golden_section_max<F: FnMut(f64) -> f64>(mut f: F, mut a: f64, mut b: f64, tol: f64) -> Maximum {
    let mut x1 = b - INV_PHI * (b - a);
    let mut x2 = a + INV_PHI * (b - a);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    while (b - a).abs() > tol * (1.0 + a.abs().max(b.abs())) {
        if f1 < f2 {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + INV_PHI * (b - a);
            f2 = f(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - INV_PHI * (b - a);
            f1 = f(x1);
        }
    }
    if f1 >= f2 {
        Maximum { x: x1, value: f1 }
    } else {
        Maximum { x: x2, value: f2 }
    }
}

/// Grid scan on `[a, b]` followed by golden-section refinement in the bracket
/// around the best grid point. Ties on the grid go to the smaller abscissa.
pub fn grid_then_golden_max<F: FnMut(f64) -> f64>(
    mut f: F,
    a: f64,
    b: f64,
    n: usize,
    spacing: Spacing,
    tol: f64,
) -> Maximum {
    let xs = grid(a, b, n, spacing);
    let values: Vec<f64> = xs.iter().map(|&x| f(x)).collect();
    let mut best = 0;
    for (i, &v) in values.iter().enumerate() {
        if v > values[best] {
            best = i;
        }
    }
    let lo = xs[best.saturating_sub(1)];
    let hi = xs[(best + 1).min(n - 1)];
    let refined = golden_section_max(&mut f, lo, hi, tol);
    if refined.value >= values[best] {
        refined
    } else {
        Maximum {
            x: xs[best],
            value: values[best],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Maximum2 {
    pub x: f64,
    pub y: f64,
    pub value: f64,
}

/// Nested maximization of `f(x, y)`: the outer search runs over `x`, and each
/// outer evaluation maximizes over `y` with its own grid and golden refinement.
pub fn nested_max<F: Fn(f64, f64) -> f64>(
    f: F,
    x_range: (f64, f64),
    y_range: (f64, f64),
    n: usize,
    tol: f64,
) -> Maximum2 {
    let inner = |x: f64| grid_then_golden_max(|y| f(x, y), y_range.0, y_range.1, n, Spacing::Linear, tol);
    let outer = grid_then_golden_max(|x| inner(x).value, x_range.0, x_range.1, n, Spacing::Linear, tol);
    let best = inner(outer.x);
    Maximum2 {
        x: outer.x,
        y: best.x,
        value: best.value,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn golden_finds_parabola_peak() {
        let m = golden_section_max(|x| -(x - 0.3) * (x - 0.3) + 2.0, -1.0, 1.0, 1e-12);
        assert!((m.x - 0.3).abs() < 1e-7);
        assert!((m.value - 2.0).abs() < 1e-14);
    }

    #[test]
    fn grid_picks_global_peak() {
        // two bumps, the right one higher
        let f = |x: f64| (-(x - 1.0).powi(2) * 50.0).exp() + 1.5 * (-(x - 3.0).powi(2) * 50.0).exp();
        let m = grid_then_golden_max(f, 0.0, 4.0, GRID_POINTS, Spacing::Linear, GOLDEN_TOL);
        assert!((m.x - 3.0).abs() < 1e-6);
    }

    #[test]
    fn log_grid_endpoints() {
        let g = grid(1e-3, 1.0, 4, Spacing::Log);
        assert!((g[0] - 1e-3).abs() < 1e-18);
        assert!((g[3] - 1.0).abs() < 1e-14);
        assert!((g[1] - 1e-2).abs() < 1e-15);
    }

    #[test]
    fn nested_two_dimensional_peak() {
        let m = nested_max(
            |x, y| -(x - 0.25).powi(2) - 2.0 * (y - 1.5).powi(2) - 0.5 * (x - 0.25) * (y - 1.5),
            (0.0, 1.0),
            (0.0, 3.0),
            STRATEGY_GRID,
            GOLDEN_TOL,
        );
        assert!((m.x - 0.25).abs() < 1e-6);
        assert!((m.y - 1.5).abs() < 1e-6);
    }

    #[test]
    fn boundary_maximum() {
        let m = grid_then_golden_max(|x| x, 0.0, 1.0, 16, Spacing::Linear, 1e-12);
        assert!((m.x - 1.0).abs() < 1e-9);
    }
}
