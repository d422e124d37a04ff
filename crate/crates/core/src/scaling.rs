//! Large-network behaviour of two-hop coding on uniform lines.
//!
//! On a line with unit spacing and equal power `P`, the out-of-view power
//! at any receiver is below `6 * sum_{k<=T} k^-eta * P < 6 zeta(eta) P`,
//! which for `eta >= 2` is at most `pi^2 P`. Each receiver therefore keeps a
//! rate of at least `1/2 log2(1 + P_sig / (pi^2 P + N))`, independent of `T`.

use std::f64::consts::PI;

use crate::channel::{uniform_line_config, ChannelConfig};
use crate::error::{Error, Result};
use crate::optimizer::{optimize_allocation, OptimizerOptions};
use crate::rates::{awgn_rate, end_to_end_rate, myopic_power_split};
use crate::scheme::{PowerAllocation, SchemeSpec};

/// Terms summed explicitly by [`zeta`].
pub const ZETA_TERMS: u64 = 1_000_000;

/// `sum_{k=1}^{terms} k^-eta`, summed smallest terms first.
pub fn zeta_partial(eta: f64, terms: u64) -> Result<f64> {
    if !(eta >= 2.0) {
        return Err(Error::invalid(format!("zeta exponent {eta} must be >= 2")));
    }
    if terms == 0 {
        return Err(Error::invalid("zeta partial sum needs at least one term"));
    }
    Ok((1..=terms).rev().map(|k| (k as f64).powf(-eta)).sum())
}

/// Riemann zeta with a certified error bound.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ZetaEstimate {
    pub value: f64,
    /// `|value - zeta(eta)|` is at most this, up to rounding in the sum.
    pub error_bound: f64,
}

/// `zeta(eta)` from [`ZETA_TERMS`] terms plus the midpoint of the integral
/// bounds on the tail: `(n+1)^(1-eta)/(eta-1) <= tail <= n^(1-eta)/(eta-1)`.
pub fn zeta(eta: f64) -> Result<ZetaEstimate> {
    let n = ZETA_TERMS as f64;
    let head = zeta_partial(eta, ZETA_TERMS)?;
    let lower = (n + 1.0).powf(1.0 - eta) / (eta - 1.0);
    let upper = n.powf(1.0 - eta) / (eta - 1.0);
    Ok(ZetaEstimate {
        value: head + 0.5 * (lower + upper),
        error_bound: 0.5 * (upper - lower),
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct BoundReport {
    pub node_count: usize,
    pub eta: f64,
    /// `(t, P_int(t) / P)` for every receiver.
    pub per_node: Vec<(usize, f64)>,
    /// `6 * sum_{k=1}^{T} k^-eta`.
    pub partial_bound: f64,
    /// `6 * zeta(2) = pi^2`, valid for every `eta >= 2`.
    pub limit_bound: f64,
}

impl BoundReport {
    pub fn worst_ratio(&self) -> f64 {
        self.per_node.iter().map(|(_, r)| *r).fold(0.0, f64::max)
    }

    pub fn passes(&self) -> bool {
        self.per_node
            .iter()
            .all(|(_, r)| *r < self.partial_bound && *r < self.limit_bound)
    }
}

/// Out-of-view power of two-hop coding relative to the transmit power, at
/// every receiver of a uniform unit-spaced equal-power line.
pub fn interference_bound_check(
    config: &ChannelConfig,
    alloc: &PowerAllocation,
) -> Result<BoundReport> {
    let n = config.node_count();
    let power = config.powers()[0];
    let uniform = config.kappa() == 1.0
        && config.powers().iter().all(|p| *p == power)
        && config
            .positions()
            .windows(2)
            .all(|w| ((w[1] - w[0]) - 1.0).abs() < 1e-12);
    if !uniform {
        return Err(Error::invalid(
            "bound check needs unit spacing, kappa = 1 and equal powers",
        ));
    }
    if !(power > 0.0) {
        return Err(Error::invalid("bound check needs positive power"));
    }
    if n < 3 || alloc.hops() != 2 {
        return Err(Error::invalid(
            "bound check is for two-hop coding with T >= 3",
        ));
    }
    let per_node = (2..=n)
        .map(|t| {
            Ok((
                t,
                myopic_power_split(config, alloc, 2, t)?.interference / power,
            ))
        })
        .collect::<Result<_>>()?;
    Ok(BoundReport {
        node_count: n,
        eta: config.eta(),
        per_node,
        partial_bound: 6.0 * zeta_partial(config.eta(), n as u64)?,
        limit_bound: PI * PI,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub enum AllocationPolicy {
    /// Half the power on the fresh stream; see [`PowerAllocation::fixed_half`].
    FixedHalf,
    Optimized(OptimizerOptions),
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ScalingPoint {
    pub node_count: usize,
    pub min_rate: f64,
    pub bottleneck: usize,
    /// `1/2 log2(1 + min_t P_sig(t) / (pi^2 P + N))` for the evaluated allocation.
    pub floor: f64,
}

/// Largest network used by [`asymptotic_rate_experiment`].
pub const MAX_EXPERIMENT_NODES: usize = 200;

/// End-to-end `k`-hop rate on unit-spaced uniform lines of each size in
/// `node_counts`.
pub fn asymptotic_rate_experiment(
    node_counts: &[usize],
    eta: f64,
    power: f64,
    noise: f64,
    hops: usize,
    policy: &AllocationPolicy,
) -> Result<Vec<ScalingPoint>> {
    node_counts
        .iter()
        .map(|&n| {
            if n > MAX_EXPERIMENT_NODES {
                return Err(Error::UnsupportedSize(format!(
                    "{n} nodes exceeds the experiment cap of {MAX_EXPERIMENT_NODES}"
                )));
            }
            if hops == 0 || hops >= n {
                return Err(Error::invalid(format!(
                    "hop depth {hops} invalid for {n} nodes"
                )));
            }
            let config = uniform_line_config(n, 1.0, power, noise, eta)?;
            let scheme = SchemeSpec::myopic(n, hops)?;
            let report = match policy {
                AllocationPolicy::FixedHalf => {
                    end_to_end_rate(&config, &PowerAllocation::fixed_half(n, hops)?, &scheme)?
                }
                AllocationPolicy::Optimized(opts) => {
                    optimize_allocation(&config, &scheme, opts)?.report
                }
            };
            let min_signal = (2..=n)
                .map(|t| myopic_power_split(&config, &report.allocation, hops, t).map(|s| s.signal))
                .collect::<Result<Vec<_>>>()?
                .into_iter()
                .fold(f64::INFINITY, f64::min);
            Ok(ScalingPoint {
                node_count: n,
                min_rate: report.end_to_end,
                bottleneck: report.bottleneck,
                floor: awgn_rate(min_signal / (PI * PI * power + noise)),
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zeta_values() {
        assert_eq!(zeta_partial(2.0, 1).unwrap(), 1.0);
        let ten: f64 = (1..=10).map(|k| 1.0 / (k * k) as f64).sum();
        assert!((zeta_partial(2.0, 10).unwrap() - ten).abs() < 1e-15);
        assert!((ten - 1.549_767_731_166_540_7).abs() < 1e-15);
        let z2 = zeta(2.0).unwrap();
        assert!((z2.value - PI * PI / 6.0).abs() < 1e-9);
        assert!(z2.error_bound < 1e-11);
        let z4 = zeta(4.0).unwrap();
        assert!((6.0 * z4.value - 6.0 * PI.powi(4) / 90.0).abs() < 1e-12);
        assert!(zeta_partial(1.5, 3).is_err());
        assert!(zeta_partial(2.0, 0).is_err());
    }

    #[test]
    fn zeta_monotone() {
        let mut prev = 0.0;
        for n in 1..50 {
            let z = zeta_partial(2.0, n).unwrap();
            assert!(z > prev);
            assert!(z < PI * PI / 6.0);
            prev = z;
        }
        assert!(zeta_partial(3.0, 20).unwrap() < zeta_partial(2.5, 20).unwrap());
    }

    #[test]
    fn bound_holds_for_half_split() {
        for n in [3, 5, 10, 50, 200] {
            let c = uniform_line_config(n, 1.0, 1.0, 1.0, 2.0).unwrap();
            let r =
                interference_bound_check(&c, &PowerAllocation::fixed_half(n, 2).unwrap()).unwrap();
            assert!(r.passes(), "T={n}: worst {}", r.worst_ratio());
        }
    }

    #[test]
    fn three_nodes_see_no_interference() {
        let c = uniform_line_config(3, 1.0, 1.0, 1.0, 2.0).unwrap();
        let r = interference_bound_check(&c, &PowerAllocation::fixed_half(3, 2).unwrap()).unwrap();
        assert_eq!(r.worst_ratio(), 0.0);
    }

    #[test]
    fn eta_four_tightens_the_bound() {
        let c = uniform_line_config(40, 1.0, 1.0, 1.0, 4.0).unwrap();
        let r = interference_bound_check(&c, &PowerAllocation::fixed_half(40, 2).unwrap()).unwrap();
        assert!(r.partial_bound < 6.0 * PI.powi(4) / 90.0);
        assert!(r.partial_bound > 6.49);
        assert!(r.passes());
    }

    #[test]
    fn bound_check_rejects_non_uniform_lines() {
        let c =
            ChannelConfig::new(vec![0.0, 1.0, 3.0], vec![1.0; 2], vec![1.0; 2], 1.0, 2.0).unwrap();
        assert!(interference_bound_check(&c, &PowerAllocation::fixed_half(3, 2).unwrap()).is_err());
    }

    #[test]
    fn rates_stay_positive_and_saturate() {
        let pts = asymptotic_rate_experiment(
            &[5, 10, 20, 50],
            2.0,
            1.0,
            1.0,
            2,
            &AllocationPolicy::FixedHalf,
        )
        .unwrap();
        for p in &pts {
            assert!(p.min_rate > 0.0);
            assert!(p.min_rate >= p.floor);
        }
        for w in pts.windows(2) {
            assert!(w[1].min_rate <= w[0].min_rate + 1e-12);
        }
    }

    #[test]
    fn zero_power_gives_zero_rates() {
        let pts =
            asymptotic_rate_experiment(&[5, 10], 2.0, 0.0, 1.0, 2, &AllocationPolicy::FixedHalf)
                .unwrap();
        assert!(pts.iter().all(|p| p.min_rate == 0.0 && p.floor == 0.0));
    }

    #[test]
    fn experiment_cap() {
        assert!(
            asymptotic_rate_experiment(&[201], 2.0, 1.0, 1.0, 2, &AllocationPolicy::FixedHalf)
                .is_err()
        );
    }
}
