//! Linear programs that are separable across groups with one coupling constraint:
//!
//! ```text
//! minimize    sum_g w_g sum_i x_gi cost_gi
//! subject to  sum_g w_g sum_i x_gi usage_gi <= budget,   x_g a distribution
//! ```
//!
//! Each group contributes the lower convex hull of its `(usage, cost)` points.
//! Starting from every group's cheapest point, hull segments are applied in
//! order of increasing cost per unit of usage removed until the budget holds.
//! This is the Lagrangian sweep over the multiplier on the coupling constraint,
//! with the last segment mixed to meet it with equality.

/// One group's mixture: `(option index, probability)` with at most two entries.
pub type Mix = Vec<(usize, f64)>;

#[derive(Debug, Clone)]
struct Segment {
    slope: f64,
    group: usize,
    /// Position along the group's chain after this segment.
    to: usize,
    /// Weighted usage removed, > 0.
    d_usage: f64,
    /// Weighted cost added, >= 0.
    d_cost: f64,
}

/// Parametric solution of a separable LP, valid for every budget.
#[derive(Debug, Clone)]
pub struct SeparableLp {
    /// Per group, option indices along the efficient hull chain, cheapest first.
    chains: Vec<Vec<usize>>,
    segments: Vec<Segment>,
    /// Usage and cost after applying the first `i` segments.
    usage: Vec<f64>,
    cost: Vec<f64>,
}

/// Optimal value and mixtures for one budget.
#[derive(Debug, Clone, PartialEq)]
pub struct LpSolution {
    pub value: f64,
    pub usage: f64,
    pub mixes: Vec<Mix>,
}

fn cross(o: (f64, f64), a: (f64, f64), b: (f64, f64)) -> f64 {
    (a.0 - o.0) * (b.1 - o.1) - (a.1 - o.1) * (b.0 - o.0)
}

/// Indices of the lower hull chain from the cheapest point toward the
/// least-usage point. Ties in cost go to the smaller usage.
fn efficient_chain(points: &[(f64, f64)]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..points.len()).collect();
    order.sort_by(|&i, &j| {
        points[i]
            .0
            .total_cmp(&points[j].0)
            .then(points[i].1.total_cmp(&points[j].1))
            .then(i.cmp(&j))
    });
    order.dedup_by(|j, i| points[*i].0 == points[*j].0);
    let mut hull: Vec<usize> = Vec::with_capacity(order.len());
    for &i in &order {
        while hull.len() >= 2 {
            let (o, a) = (hull[hull.len() - 2], hull[hull.len() - 1]);
            if cross(points[o], points[a], points[i]) <= 0.0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(i);
    }
    // `hull` runs left (least usage) to right; cut it at the first cheapest vertex.
    let cheapest = hull
        .iter()
        .enumerate()
        .min_by(|x, y| points[*x.1].1.total_cmp(&points[*y.1].1).then(x.0.cmp(&y.0)))
        .map_or(0, |(pos, _)| pos);
    hull.truncate(cheapest + 1);
    hull.reverse();
    hull
}

impl SeparableLp {
    /// `groups[g] = (weight, points)` with `points[i] = (usage, cost)`.
    pub fn new(groups: &[(f64, Vec<(f64, f64)>)]) -> Self {
        let mut chains = Vec::with_capacity(groups.len());
        let mut segments = Vec::new();
        let (mut base_usage, mut base_cost) = (0.0, 0.0);
        for (g, (w, points)) in groups.iter().enumerate() {
            let chain = efficient_chain(points);
            let start = points[chain[0]];
            base_usage += w * start.0;
            base_cost += w * start.1;
            if *w > 0.0 {
                for (pos, pair) in chain.windows(2).enumerate() {
                    let (from, to) = (points[pair[0]], points[pair[1]]);
                    let removed = from.0 - to.0;
                    let added = to.1 - from.1;
                    segments.push(Segment {
                        slope: added / removed,
                        group: g,
                        to: pos + 1,
                        d_usage: w * removed,
                        d_cost: w * added,
                    });
                }
            }
            chains.push(chain);
        }
        // Stable sort keeps each group's own segments in chain order on slope ties.
        segments.sort_by(|x, y| x.slope.total_cmp(&y.slope));
        let mut usage = vec![base_usage];
        let mut cost = vec![base_cost];
        for seg in &segments {
            usage.push(usage.last().unwrap() - seg.d_usage);
            cost.push(cost.last().unwrap() + seg.d_cost);
        }
        SeparableLp {
            chains,
            segments,
            usage,
            cost,
        }
    }

    /// Smallest achievable usage.
    pub fn min_usage(&self) -> f64 {
        *self.usage.last().unwrap()
    }

    /// Usage of the all-cheapest solution; larger budgets do not lower the cost.
    pub fn free_usage(&self) -> f64 {
        self.usage[0]
    }

    /// Minimum cost at the unconstrained budget.
    pub fn min_cost(&self) -> f64 {
        self.cost[0]
    }

    /// Usage values where the optimal value has a kink.
    pub fn breakpoints(&self) -> &[f64] {
        &self.usage
    }

    fn tolerance(&self) -> f64 {
        1e-9 * self.usage[0].abs().max(self.min_usage().abs()).max(1.0)
    }

    /// Number of fully applied segments and the fraction of the next one.
    fn locate(&self, budget: f64) -> Option<(usize, f64)> {
        if budget >= self.usage[0] {
            return Some((0, 0.0));
        }
        if budget < self.min_usage() - self.tolerance() {
            return None;
        }
        let n = self.segments.len();
        if n == 0 {
            return Some((0, 0.0));
        }
        // First index whose usage fits the budget.
        let i = self.usage.partition_point(|&u| u > budget).min(n);
        let full = i - 1;
        let seg = &self.segments[full];
        let frac = ((self.usage[full] - budget) / seg.d_usage).clamp(0.0, 1.0);
        Some((full, frac))
    }

    /// Optimal value for `budget`, or `None` when it is below [`min_usage`](Self::min_usage).
    pub fn value(&self, budget: f64) -> Option<f64> {
        self.locate(budget).map(|(full, frac)| {
            if frac == 0.0 {
                self.cost[full]
            } else {
                self.cost[full] + frac * self.segments[full].d_cost
            }
        })
    }

    /// Optimal value plus the achieving mixtures.
    pub fn solve(&self, budget: f64) -> Option<LpSolution> {
        let (full, frac) = self.locate(budget)?;
        let mut pos = vec![0usize; self.chains.len()];
        for seg in &self.segments[..full] {
            pos[seg.group] = seg.to;
        }
        let mut mixes: Vec<Mix> = self
            .chains
            .iter()
            .zip(&pos)
            .map(|(chain, &p)| vec![(chain[p], 1.0)])
            .collect();
        let (mut value, mut usage) = (self.cost[full], self.usage[full]);
        if frac > 0.0 {
            let seg = &self.segments[full];
            let chain = &self.chains[seg.group];
            let (from, to) = (chain[seg.to - 1], chain[seg.to]);
            mixes[seg.group] = if frac >= 1.0 {
                vec![(to, 1.0)]
            } else {
                vec![(from, 1.0 - frac), (to, frac)]
            };
            value += frac * seg.d_cost;
            usage -= frac * seg.d_usage;
        }
        Some(LpSolution {
            value,
            usage,
            mixes,
        })
    }
}
