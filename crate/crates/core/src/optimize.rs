//! One-dimensional maximisation: uniform grid to find the basin, golden-section to polish.

const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// Golden-section search for a maximum of a unimodal `f` on `[a, b]`,
/// stopping once the bracket is narrower than `tol`. Returns `(x, f(x))`.
pub fn golden_section_max(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64, tol: f64) -> (f64, f64) {
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    // The bracket shrinks by 1/φ per step; the cap only guards tol = 0.
    for _ in 0..200 {
        if (b - a).abs() <= tol {
            break;
        }
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
    }
    if fc >= fd {
        (c, fc)
    } else {
        (d, fd)
    }
}

/// Maximum location and value of `f` on `[a, b]`.
///
/// `grid` uniformly spaced points (endpoints included) pick the best cell,
/// earliest on ties; golden-section then refines inside its neighbours.
pub fn grid_golden_max(f: impl Fn(f64) -> f64, a: f64, b: f64, grid: usize, tol: f64) -> (f64, f64) {
    let grid = grid.max(2);
    let h = (b - a) / (grid - 1) as f64;
    let at = |i: usize| if i + 1 == grid { b } else { a + h * i as f64 };
    let mut best = (0, f64::NEG_INFINITY);
    for i in 0..grid {
        let v = f(at(i));
        if v > best.1 {
            best = (i, v);
        }
    }
    let (i, fv) = best;
    let lo = at(i.saturating_sub(1));
    let hi = at((i + 1).min(grid - 1));
    let (x, fx) = golden_section_max(&f, lo, hi, tol);
    if fx > fv {
        (x, fx)
    } else {
        (at(i), fv)
    }
}
