//! Multi-instance checks shared by the acceptance target and the focused suites.

use linkopt::optimize::{CompressionFrontier, DistortionFrontier, TransmissionFrontier};
use linkopt::{
    distortion_optimum, g_star, h_star, p_av_star, ChannelSpec, PowerSet, RatePowerCurve,
};
use rand::Rng;

use super::gen;
use super::oracle::{self, Group};

/// Agreement demanded between the library and the grid search, in power units.
pub const ORACLE_TOL: f64 = 1e-2;

/// Largest gap seen per family, for the record.
#[derive(Debug, Default, Clone, Copy)]
pub struct OracleGaps {
    pub h_star: f64,
    pub h_d_star: f64,
    pub g_star: f64,
    pub g_star_log: f64,
    pub optimum: f64,
    pub instances: usize,
}

fn check(label: &str, ours: f64, grid: f64, gap: &mut f64) {
    assert!(
        ours <= grid + 1e-9,
        "{label}: {ours} above the grid minimum {grid}"
    );
    assert!(
        grid - ours <= ORACLE_TOL,
        "{label}: {ours} vs grid {grid} (gap {})",
        grid - ours
    );
    *gap = gap.max(grid - ours);
}

fn interior(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| lo + (hi - lo) * (i as f64 + 0.5) / n as f64).collect()
}

fn without_distortion(groups: &[Group]) -> Vec<Group> {
    groups
        .iter()
        .map(|g| Group {
            weight: g.weight,
            options: g.options.iter().map(|p| [p[0], 0.0, p[2]]).collect(),
        })
        .collect()
}

/// `h*`, `h_d*`, `g*` and both optima against exhaustive grid search on every
/// combination of up to three arrival values and up to two options.
pub fn oracle_equivalence() -> OracleGaps {
    let mut gaps = OracleGaps::default();
    let mut rng = gen::rng(0x0_1a_c1e);

    for n in 1..=3 {
        for options in 1..=2 {
            for _ in 0..2 {
                let bits = rng.gen_range(1.0..2.0);
                let arrivals = gen::arrivals(&mut rng, n, bits);
                let table = gen::table(&mut rng, &arrivals, options, 0.5, false);
                let groups = gen::compression_groups(&table, &arrivals, true);
                let frontier = CompressionFrontier::new(&table, &arrivals);
                let rates = interior(frontier.r_min(), arrivals.raw_rate(), 6);
                let budgets: Vec<_> = rates.iter().map(|&r| (r, f64::INFINITY)).collect();
                let grid = oracle::grid_minimum(&without_distortion(&groups), &budgets);
                for (&r, g) in rates.iter().zip(grid) {
                    let (ours, _) = h_star(r, &table, &arrivals).unwrap();
                    check(&format!("h*({r}), N={n}, K={options}"), ours, g.unwrap(), &mut gaps.h_star);
                }

                let worst: f64 = arrivals
                    .support()
                    .map(|(a, p)| {
                        p * (0..table.option_count())
                            .map(|k| table.mean_distortion(a, k))
                            .fold(0.0, f64::max)
                    })
                    .sum();
                let d_av = worst * rng.gen_range(0.1..0.6);
                let h_d = DistortionFrontier::new(&table, &arrivals, d_av).unwrap();
                let rates = interior(h_d.r_d_min(), arrivals.raw_rate(), 5);
                let budgets: Vec<_> = rates.iter().map(|&r| (r, d_av)).collect();
                let grid = oracle::grid_minimum(&groups, &budgets);
                for (&r, g) in rates.iter().zip(grid) {
                    let ours = h_d.value(r).unwrap();
                    let label = format!("h_d*({r}; d_av={d_av}), N={n}, K={options}");
                    check(&label, ours, g.expect("grid point within budget"), &mut gaps.h_d_star);
                }
                gaps.instances += 2;
            }
        }
    }

    for states in 1..=3 {
        for count in 2..=3 {
            let p_max: f64 = rng.gen_range(0.5..1.0);
            let levels = gen::levels(&mut rng, count, p_max);
            let channel = gen::channel(&mut rng, states);
            let peak = rng.gen_range(1.0..4.0);
            let curves = [
                gen::table_curve(&mut rng, states, &levels, peak),
                RatePowerCurve::Logarithmic {
                    alpha: rng.gen_range(1.0..3.0),
                    beta: rng.gen_range(1.0..3.0) / p_max,
                },
                RatePowerCurve::TwoLevel {
                    p_on: p_max,
                    rate_on: rng.gen_range(1.0..4.0),
                },
            ];
            let powers = PowerSet::Discrete { levels: levels.clone() };
            for curve in curves {
                check_g(&curve, &powers, &levels, &channel, &mut gaps.g_star);
                gaps.instances += 1;
            }
        }
    }

    for _ in 0..4 {
        let alpha = rng.gen_range(1.0..3.0);
        let beta = rng.gen_range(0.5..2.0);
        let p_max: f64 = rng.gen_range(0.5..1.0);
        let curve = RatePowerCurve::Logarithmic { alpha, beta };
        let channel = ChannelSpec::constant("ON");
        let frontier = TransmissionFrontier::new(&curve, &PowerSet::interval(p_max), &channel);
        for r in interior(0.0, frontier.r_max(), 8) {
            let (ours, _) = g_star(r, &curve, &PowerSet::interval(p_max), &channel).unwrap();
            let exact = oracle::log_inverse(r, alpha, beta);
            gaps.g_star_log = gaps.g_star_log.max((ours - exact).abs());
            assert!((ours - exact).abs() <= 1e-9 * exact.max(1.0), "log g*({r}) = {ours} vs {exact}");
        }
        gaps.instances += 1;
    }

    for n in 1..=2 {
        for options in 1..=2 {
            for distortion in [false, true] {
                let arrivals = gen::arrivals(&mut rng, n, 1.0);
                let table = gen::table(&mut rng, &arrivals, options, 0.5, false);
                let p_max: f64 = rng.gen_range(0.5..1.0);
                let beta: f64 = rng.gen_range(1.0..3.0) / p_max;
                let alpha = arrivals.raw_rate() * rng.gen_range(0.8..1.5) / (beta * p_max).ln_1p();
                let curve = RatePowerCurve::Logarithmic { alpha, beta };
                let powers = PowerSet::interval(p_max);
                let channel = ChannelSpec::constant("ON");
                let r_max = alpha * (beta * p_max).ln_1p();
                let g = |x: f64| oracle::log_inverse(x, alpha, beta);
                let groups = gen::compression_groups(&table, &arrivals, distortion);
                let (ours, d_av) = if distortion {
                    let d_av = rng.gen_range(0.05..0.4);
                    let report = distortion_optimum(&table, &arrivals, &curve, &powers, &channel, d_av);
                    (report.map(|r| r.p_av_star), d_av)
                } else {
                    let report = p_av_star(&table, &arrivals, &curve, &powers, &channel);
                    (report.map(|r| r.p_av_star), f64::INFINITY)
                };
                let grid = oracle::grid_minimum_coupled(&groups, d_av, r_max, g);
                match (ours, grid) {
                    (Ok(ours), Some(grid)) => check(
                        &format!("optimum N={n}, K={options}, d_av={d_av}"),
                        ours,
                        grid,
                        &mut gaps.optimum,
                    ),
                    (Err(_), None) => {}
                    (ours, grid) => panic!("feasibility disagrees: {ours:?} vs grid {grid:?}"),
                }
                gaps.instances += 1;
            }
        }
    }
    gaps
}

fn check_g(curve: &RatePowerCurve, powers: &PowerSet, levels: &[f64], channel: &ChannelSpec, gap: &mut f64) {
    let frontier = TransmissionFrontier::new(curve, powers, channel);
    let rates = interior(0.0, frontier.r_max(), 6);
    let budgets: Vec<_> = rates.iter().map(|&r| (-r, f64::INFINITY)).collect();
    let grid = oracle::grid_minimum(&gen::transmission_groups(curve, levels, channel), &budgets);
    for (&r, g) in rates.iter().zip(grid) {
        let (ours, _) = g_star(r, curve, powers, channel).unwrap();
        check(&format!("g*({r}) on {curve:?}"), ours, g.unwrap(), gap);
    }
}
