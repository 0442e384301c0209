//! Exhaustive references, written without the library's optimizer.
//!
//! Mixing probabilities range over multiples of `1 / STEPS`. A group is one
//! conditioning event (an arrival count or a channel state) with weight `w`
//! and a handful of options, each an `(x, y, cost)` triple. The searches
//! minimize `sum_g w_g E[cost]` subject to `sum_g w_g E[x] <= bx` and
//! `sum_g w_g E[y] <= by`.

use rayon::prelude::*;

pub const STEPS: usize = 100;

pub type Point = [f64; 3];

#[derive(Debug, Clone)]
pub struct Group {
    pub weight: f64,
    pub options: Vec<Point>,
}

/// Every distribution over `n` options on the grid.
pub fn simplex_grid(n: usize) -> Vec<Vec<f64>> {
    fn fill(n: usize, left: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<f64>>) {
        if cur.len() + 1 == n {
            cur.push(left);
            out.push(cur.iter().map(|&c| c as f64 / STEPS as f64).collect());
            cur.pop();
            return;
        }
        for c in 0..=left {
            cur.push(c);
            fill(n, left - c, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    fill(n, STEPS, &mut Vec::new(), &mut out);
    out
}

/// Weighted `(x, y, cost)` of every grid mixture of the group's options.
fn mixtures(g: &Group) -> Vec<Point> {
    let first = g.options[0];
    if g.options.iter().all(|p| *p == first) {
        return vec![first.map(|v| g.weight * v)];
    }
    simplex_grid(g.options.len())
        .into_iter()
        .map(|q| {
            let mut acc = [0.0; 3];
            for (qi, p) in q.iter().zip(&g.options) {
                for d in 0..3 {
                    acc[d] += qi * p[d];
                }
            }
            acc.map(|v| g.weight * v)
        })
        .collect()
}

/// Least cost with `x <= bx` and `y <= by` over one group's mixtures.
struct Staircase {
    xs: Vec<f64>,
    /// `fronts[i]`: Pareto front in `(y, cost)` of the `i + 1` smallest-`x`
    /// points, sorted by `y` with strictly decreasing cost.
    fronts: Vec<Vec<(f64, f64)>>,
}

impl Staircase {
    fn new(mut points: Vec<Point>) -> Self {
        points.sort_by(|a, b| a[0].total_cmp(&b[0]));
        let mut fronts = Vec::with_capacity(points.len());
        let mut front: Vec<(f64, f64)> = Vec::new();
        for p in &points {
            let (y, c) = (p[1], p[2]);
            if !front.iter().any(|&(fy, fc)| fy <= y && fc <= c) {
                front.retain(|&(fy, fc)| !(fy >= y && fc >= c));
                let at = front.partition_point(|&(fy, _)| fy < y);
                front.insert(at, (y, c));
            }
            fronts.push(front.clone());
        }
        Staircase {
            xs: points.iter().map(|p| p[0]).collect(),
            fronts,
        }
    }

    fn query(&self, bx: f64, by: f64) -> f64 {
        let i = self.xs.partition_point(|&x| x <= bx);
        if i == 0 {
            return f64::INFINITY;
        }
        let front = &self.fronts[i - 1];
        let j = front.partition_point(|&(y, _)| y <= by);
        if j == 0 {
            f64::INFINITY
        } else {
            front[j - 1].1
        }
    }
}

fn slack(b: f64) -> f64 {
    b + 1e-9 * b.abs().max(1.0)
}

/// Grid minimum for each budget pair; `None` where no grid point is feasible.
///
/// All groups but the largest are enumerated jointly; the largest is answered
/// from its staircase, so the search stays exact on the grid.
pub fn grid_minimum(groups: &[Group], budgets: &[(f64, f64)]) -> Vec<Option<f64>> {
    let mut sets: Vec<Vec<Point>> = groups.iter().map(mixtures).collect();
    sets.sort_by_key(|s| s.len());
    let last = Staircase::new(sets.pop().unwrap_or_else(|| vec![[0.0; 3]]));
    let budgets: Vec<(f64, f64)> = budgets.iter().map(|&(x, y)| (slack(x), slack(y))).collect();

    fn walk(
        sets: &[Vec<Point>],
        acc: Point,
        last: &Staircase,
        budgets: &[(f64, f64)],
        best: &mut [f64],
    ) {
        match sets.split_first() {
            None => {
                for (b, (bx, by)) in best.iter_mut().zip(budgets) {
                    let c = acc[2] + last.query(bx - acc[0], by - acc[1]);
                    if c < *b {
                        *b = c;
                    }
                }
            }
            Some((head, rest)) => {
                for p in head {
                    let next = [acc[0] + p[0], acc[1] + p[1], acc[2] + p[2]];
                    walk(rest, next, last, budgets, best);
                }
            }
        }
    }

    let best = match sets.split_first() {
        None => {
            let mut best = vec![f64::INFINITY; budgets.len()];
            walk(&[], [0.0; 3], &last, &budgets, &mut best);
            best
        }
        Some((head, rest)) => head
            .par_iter()
            .map(|p| {
                let mut best = vec![f64::INFINITY; budgets.len()];
                walk(rest, *p, &last, &budgets, &mut best);
                best
            })
            .reduce(
                || vec![f64::INFINITY; budgets.len()],
                |a, b| a.iter().zip(&b).map(|(x, y)| x.min(*y)).collect(),
            ),
    };
    best.into_iter().map(|b| b.is_finite().then_some(b)).collect()
}

/// Grid minimum of `cost + f(x)` subject to `y <= by` and `x <= x_cap`, by
/// full enumeration. Meant for at most two nontrivial groups.
pub fn grid_minimum_coupled(
    groups: &[Group],
    by: f64,
    x_cap: f64,
    f: impl Fn(f64) -> f64 + Sync,
) -> Option<f64> {
    let sets: Vec<Vec<Point>> = groups.iter().map(mixtures).collect();
    let mut partial: Vec<Point> = vec![[0.0; 3]];
    for set in &sets[..sets.len().saturating_sub(1)] {
        partial = partial
            .iter()
            .flat_map(|a| set.iter().map(move |p| [a[0] + p[0], a[1] + p[1], a[2] + p[2]]))
            .collect();
    }
    let last = sets.last().cloned().unwrap_or_else(|| vec![[0.0; 3]]);
    let (by, x_cap) = (slack(by), slack(x_cap));
    let best = partial
        .par_iter()
        .map(|a| {
            last.iter()
                .filter_map(|p| {
                    let (x, y) = (a[0] + p[0], a[1] + p[1]);
                    (y <= by && x <= x_cap).then(|| a[2] + p[2] + f(x.max(0.0)))
                })
                .fold(f64::INFINITY, f64::min)
        })
        .reduce(|| f64::INFINITY, f64::min);
    best.is_finite().then_some(best)
}

/// Inverse of `alpha ln(1 + beta P)`: the power that delivers rate `r`.
pub fn log_inverse(r: f64, alpha: f64, beta: f64) -> f64 {
    (r / alpha).exp_m1() / beta
}

/// `arg max_P  u alpha ln(1 + beta P) - v P` on `[0, p_max]` by golden section
/// on the concave objective.
pub fn log_best_power(u: f64, v: f64, alpha: f64, beta: f64, p_max: f64) -> f64 {
    let f = |p: f64| u * alpha * (beta * p).ln_1p() - v * p;
    let (mut a, mut b) = (0.0, p_max);
    let g = 0.5 * (5f64.sqrt() - 1.0);
    for _ in 0..200 {
        let c = b - g * (b - a);
        let d = a + g * (b - a);
        if f(c) >= f(d) {
            b = d;
        } else {
            a = c;
        }
    }
    let mid = 0.5 * (a + b);
    [0.0, p_max, mid]
        .into_iter()
        .fold((0.0, f64::NEG_INFINITY), |best, p| {
            let y = f(p);
            if y > best.1 {
                (p, y)
            } else {
                best
            }
        })
        .0
}

/// Largest `U_thresh` that transmissions never dig below, by scanning
/// `U - mu*(U)` on `points` backlogs over the band where the power is
/// neither zero nor saturated (and a little beyond). Returns the threshold
/// and the grid step.
pub fn log_threshold_scan(v: f64, alpha: f64, beta: f64, p_max: f64, points: usize) -> (f64, f64) {
    let lo = v / (alpha * beta);
    let hi = lo + v * p_max / alpha;
    let top = hi + 0.1 * (hi - lo) + 1.0;
    let step = (top - lo) / points as f64;
    let theta = (0..=points)
        .map(|i| {
            let u = lo + step * i as f64;
            let p = log_best_power(u, v, alpha, beta, p_max);
            u - alpha * (beta * p).ln_1p()
        })
        .fold(f64::INFINITY, f64::min);
    (theta.max(0.0), step)
}
