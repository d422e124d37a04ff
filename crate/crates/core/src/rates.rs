//! Closed-form achievable rates on the Gaussian relay channel.
//!
//! Receiver `t` under `k`-hop coding decodes streams `U_{t-k}..U_{t-1}`
//! and already knows `U_t..U_{t+k-1}`. Each stream reaches `t` with the
//! coherent amplitude
//!
//! ```text
//! c_j(t) = sum over carriers i != t of sqrt(g_it * alpha[i][j-i] * P_i)
//! ```
//!
//! so the rate is `1/2 log2(1 + P_sig / (P_int + N_t))` with `P_sig` the
//! squared amplitudes of the decoded streams and `P_int` those of every
//! stream that is neither decoded nor known.

use std::fmt;

use crate::channel::{ChannelConfig, RelayNetwork};
use crate::error::{Error, Result};
use crate::oracle::check_shapes;
use crate::scheme::{PowerAllocation, SchemeSpec};

/// `1/2 log2(1 + snr)`.
pub fn awgn_rate(snr: f64) -> f64 {
    0.5 * snr.ln_1p() / std::f64::consts::LN_2
}

fn check_receiver(node_count: usize, t: usize) -> Result<()> {
    if t < 2 || t > node_count {
        return Err(Error::invalid(format!(
            "receiver index {t} outside 2..={node_count}"
        )));
    }
    Ok(())
}

fn check_alloc<N: RelayNetwork + ?Sized>(net: &N, alloc: &PowerAllocation, k: usize) -> Result<()> {
    if alloc.node_count() != net.node_count() {
        return Err(Error::DimensionMismatch {
            what: "allocation node count",
            expected: net.node_count(),
            got: alloc.node_count(),
        });
    }
    if alloc.hops() != k {
        return Err(Error::DimensionMismatch {
            what: "allocation hop depth",
            expected: k,
            got: alloc.hops(),
        });
    }
    Ok(())
}

/// Received power at `t` split by what the receiver does with each stream.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct PowerSplit {
    /// Streams being decoded.
    pub signal: f64,
    /// Streams outside the receiver's view.
    pub interference: f64,
    /// Streams the receiver already decoded earlier.
    pub known: f64,
}

fn power_split_rows<N: RelayNetwork + ?Sized>(
    net: &N,
    rows: &[Vec<f64>],
    k: usize,
    t: usize,
) -> PowerSplit {
    let streams = net.node_count() - 1;
    // Amplitude of each carrier at `t` before the split; `t` hears itself as 0.
    let carrier: Vec<f64> = (1..=streams)
        .map(|i| {
            if i == t {
                0.0
            } else {
                (net.link_gain(i, t) * net.tx_power(i)).sqrt()
            }
        })
        .collect();
    let mut split = PowerSplit::default();
    for j in 1..=streams {
        let first = j.saturating_sub(k - 1).max(1);
        let amp: f64 = (first..=j)
            .map(|i| carrier[i - 1] * rows[i - 1][j - i].sqrt())
            .sum();
        let p = amp * amp;
        if j + k >= t && j < t {
            split.signal += p;
        } else if j >= t && j < t + k {
            split.known += p;
        } else {
            split.interference += p;
        }
    }
    split
}

/// Signal, interference and known-stream power at receiver `t`.
pub fn myopic_power_split<N: RelayNetwork + ?Sized>(
    net: &N,
    alloc: &PowerAllocation,
    k: usize,
    t: usize,
) -> Result<PowerSplit> {
    check_alloc(net, alloc, k)?;
    check_receiver(net.node_count(), t)?;
    Ok(power_split_rows(net, alloc.rows(), k, t))
}

/// Power of the streams receiver `t` decodes under `k`-hop coding.
pub fn myopic_signal_power<N: RelayNetwork + ?Sized>(
    net: &N,
    alloc: &PowerAllocation,
    k: usize,
    t: usize,
) -> Result<f64> {
    Ok(myopic_power_split(net, alloc, k, t)?.signal)
}

/// Power of the streams outside receiver `t`'s view.
pub fn myopic_interference_power<N: RelayNetwork + ?Sized>(
    net: &N,
    alloc: &PowerAllocation,
    k: usize,
    t: usize,
) -> Result<f64> {
    Ok(myopic_power_split(net, alloc, k, t)?.interference)
}

/// Achievable reception rate of node `t` under `k`-hop coding, in bits.
pub fn myopic_node_rate<N: RelayNetwork + ?Sized>(
    net: &N,
    alloc: &PowerAllocation,
    k: usize,
    t: usize,
) -> Result<f64> {
    let split = myopic_power_split(net, alloc, k, t)?;
    Ok(awgn_rate(
        split.signal / (split.interference + net.rx_noise(t)),
    ))
}

/// Omniscient decode-forward rate of node `t`: the `k = T-1` case.
pub fn omniscient_node_rate<N: RelayNetwork + ?Sized>(
    net: &N,
    alloc: &PowerAllocation,
    t: usize,
) -> Result<f64> {
    myopic_node_rate(net, alloc, net.node_count() - 1, t)
}

/// One-hop rate of node `t`: decode node `t-1`, treat every other
/// transmitter except `t` itself as independent interference.
pub fn one_hop_node_rate<N: RelayNetwork + ?Sized>(net: &N, t: usize) -> Result<f64> {
    let n = net.node_count();
    check_receiver(n, t)?;
    let signal = net.link_gain(t - 1, t) * net.tx_power(t - 1);
    let interference: f64 = (1..n)
        .filter(|&i| i != t && i != t - 1)
        .map(|i| net.link_gain(i, t) * net.tx_power(i))
        .sum();
    Ok(awgn_rate(signal / (net.rx_noise(t) + interference)))
}

/// Rates of receivers `2..=T` written into `out`, straight from allocation rows.
pub(crate) fn node_rates_rows<N: RelayNetwork + ?Sized>(
    net: &N,
    rows: &[Vec<f64>],
    k: usize,
    out: &mut [f64],
) {
    for (slot, t) in out.iter_mut().zip(2..=net.node_count()) {
        let split = power_split_rows(net, rows, k, t);
        *slot = awgn_rate(split.signal / (split.interference + net.rx_noise(t)));
    }
}

/// Per-node rates and the end-to-end bottleneck of a scheme.
#[derive(Clone, Debug, PartialEq)]
pub struct RateReport {
    /// `(t, R_t)` for receivers `t = 2..=T`, in pipeline position order.
    pub per_node: Vec<(usize, f64)>,
    /// Receiver attaining the minimum; ties go to the smallest index.
    pub bottleneck: usize,
    pub end_to_end: f64,
    pub scheme: SchemeSpec,
    pub allocation: PowerAllocation,
}

impl RateReport {
    pub(crate) fn from_rates(
        rates: &[f64],
        scheme: SchemeSpec,
        allocation: PowerAllocation,
    ) -> Self {
        let per_node: Vec<(usize, f64)> =
            rates.iter().enumerate().map(|(i, &r)| (i + 2, r)).collect();
        let (bottleneck, end_to_end) =
            per_node
                .iter()
                .copied()
                .fold(
                    (0, f64::INFINITY),
                    |best, (t, r)| if r < best.1 { (t, r) } else { best },
                );
        Self {
            per_node,
            bottleneck,
            end_to_end,
            scheme,
            allocation,
        }
    }

    pub fn rate_at(&self, t: usize) -> Option<f64> {
        self.per_node.iter().find(|(n, _)| *n == t).map(|(_, r)| *r)
    }
}

impl fmt::Display for RateReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "scheme: {} (ordering {})",
            self.scheme,
            self.scheme.ordering()
        )?;
        for (t, r) in &self.per_node {
            let mark = if *t == self.bottleneck {
                "  <- bottleneck"
            } else {
                ""
            };
            writeln!(f, "  R_{t} = {r:.9} bits{mark}")?;
        }
        writeln!(f, "end-to-end: {:.9} bits", self.end_to_end)?;
        writeln!(f, "allocation:")?;
        for (i, row) in self.allocation.rows().iter().enumerate() {
            let cells: Vec<String> = row.iter().map(|a| format!("{a:.6}")).collect();
            writeln!(f, "  node {}: [{}]", i + 1, cells.join(", "))?;
        }
        Ok(())
    }
}

/// End-to-end rate of `scheme` with allocation `alloc`.
pub fn end_to_end_rate(
    config: &ChannelConfig,
    alloc: &PowerAllocation,
    scheme: &SchemeSpec,
) -> Result<RateReport> {
    check_shapes(config, alloc, scheme)?;
    let net = config.ordered(scheme.ordering())?;
    let mut rates = vec![0.0; config.node_count() - 1];
    node_rates_rows(&net, alloc.rows(), scheme.hops(), &mut rates);
    Ok(RateReport::from_rates(
        &rates,
        scheme.clone(),
        alloc.clone(),
    ))
}
