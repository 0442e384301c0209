//! Scalar minimization on an interval.

const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// Golden-section search for a convex (unimodal) `f` on `[lo, hi]`, stopping
/// once the bracket is narrower than `tol`. Returns `(x, f(x))`.
pub fn golden_section(mut f: impl FnMut(f64) -> f64, lo: f64, hi: f64, tol: f64) -> (f64, f64) {
    let (mut a, mut b) = (lo, hi);
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    while b - a > tol {
        if fc <= fd {
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
    let x = 0.5 * (a + b);
    (x, f(x))
}

/// Evenly spaced `n + 1` points on `[lo, hi]`, endpoints exact.
pub fn linspace(lo: f64, hi: f64, n: usize) -> impl Iterator<Item = f64> {
    (0..=n).map(move |i| {
        if i == n {
            hi
        } else {
            lo + (hi - lo) * i as f64 / n as f64
        }
    })
}

/// Whether `f` passes the midpoint convexity test on `n` evenly spaced points.
pub fn looks_convex(f: &mut impl FnMut(f64) -> f64, lo: f64, hi: f64, n: usize) -> bool {
    let xs: Vec<f64> = linspace(lo, hi, n.max(2) - 1).collect();
    let ys: Vec<f64> = xs.iter().map(|&x| f(x)).collect();
    ys.windows(3).all(|w| {
        let scale = w.iter().fold(1.0_f64, |m, y| m.max(y.abs()));
        w[1] <= 0.5 * (w[0] + w[2]) + 1e-9 * scale
    })
}

/// Best of `candidates` under `f`, preferring the larger argument when values
/// agree to within `rel_tol`.
pub fn best_of(
    f: &mut impl FnMut(f64) -> f64,
    candidates: impl IntoIterator<Item = f64>,
    rel_tol: f64,
) -> Option<(f64, f64)> {
    let mut best: Option<(f64, f64)> = None;
    for x in candidates {
        let y = f(x);
        best = match best {
            None => Some((x, y)),
            Some((bx, by)) => {
                let slack = rel_tol * by.abs().max(1.0);
                if y < by - slack || (y <= by + slack && x > bx) {
                    Some((x, y))
                } else {
                    Some((bx, by))
                }
            }
        };
    }
    best
}
