//! Line-geometry Gaussian multiple relay channel.
//!
//! Node 1 is the source, node `T` the destination and nodes `2..T-1` are
//! relays. Receiver `t` observes
//!
//! ```text
//! Y_t = sum_{i != t, i <= T-1} sqrt(kappa * d_it^-eta) X_i + Z_t,   Z_t ~ N(0, N_t)
//! ```
//!
//! All node indices in this crate are 1-based to match the usual relay
//! channel notation. Powers and noise variances are linear, never dB.

use crate::error::{Error, Result};
use crate::scheme::Ordering;

/// A `T`-node Gaussian multiple relay channel with nodes on a line.
#[derive(Clone, Debug, PartialEq)]
pub struct ChannelConfig {
    positions: Vec<f64>,
    powers: Vec<f64>,
    noise: Vec<f64>,
    kappa: f64,
    eta: f64,
}

impl ChannelConfig {
    /// `positions` has one entry per node (`T` entries), `powers` one per
    /// transmitter `1..T-1`, `noise` one per receiver `2..T`.
    pub fn new(
        positions: Vec<f64>,
        powers: Vec<f64>,
        noise: Vec<f64>,
        kappa: f64,
        eta: f64,
    ) -> Result<Self> {
        let nodes = positions.len();
        if nodes < 2 {
            return Err(Error::invalid(format!(
                "a relay channel needs at least 2 nodes, got {nodes}"
            )));
        }
        if powers.len() != nodes - 1 {
            return Err(Error::DimensionMismatch {
                what: "powers",
                expected: nodes - 1,
                got: powers.len(),
            });
        }
        if noise.len() != nodes - 1 {
            return Err(Error::DimensionMismatch {
                what: "noise",
                expected: nodes - 1,
                got: noise.len(),
            });
        }
        if positions.iter().any(|p| !p.is_finite()) {
            return Err(Error::invalid("positions must be finite"));
        }
        if let Some(w) = positions.windows(2).find(|w| w[1] <= w[0]) {
            return Err(Error::invalid(format!(
                "positions must be strictly increasing ({} then {})",
                w[0], w[1]
            )));
        }
        if let Some(p) = powers.iter().find(|p| !(p.is_finite() && **p >= 0.0)) {
            return Err(Error::invalid(format!("power {p} must be finite and >= 0")));
        }
        if let Some(n) = noise.iter().find(|n| !(n.is_finite() && **n > 0.0)) {
            return Err(Error::invalid(format!("noise {n} must be finite and > 0")));
        }
        if !(kappa.is_finite() && kappa > 0.0) {
            return Err(Error::invalid(format!("kappa {kappa} must be > 0")));
        }
        if !(eta.is_finite() && eta >= 2.0) {
            return Err(Error::invalid(format!(
                "path-loss exponent {eta} must be >= 2"
            )));
        }
        Ok(Self {
            positions,
            powers,
            noise,
            kappa,
            eta,
        })
    }

    pub fn node_count(&self) -> usize {
        self.positions.len()
    }

    pub fn positions(&self) -> &[f64] {
        &self.positions
    }

    pub fn powers(&self) -> &[f64] {
        &self.powers
    }

    pub fn noises(&self) -> &[f64] {
        &self.noise
    }

    pub fn kappa(&self) -> f64 {
        self.kappa
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }

    /// Power constraint `P_i` of transmitter `i` (1-based, `1..=T-1`).
    pub fn power(&self, i: usize) -> Result<f64> {
        self.check_transmitter(i)?;
        Ok(self.powers[i - 1])
    }

    /// Noise variance `N_t` of receiver `t` (1-based, `2..=T`).
    pub fn noise(&self, t: usize) -> Result<f64> {
        self.check_receiver(t)?;
        Ok(self.noise[t - 2])
    }

    pub fn distance(&self, i: usize, t: usize) -> f64 {
        (self.positions[t - 1] - self.positions[i - 1]).abs()
    }

    /// Linear power gain `kappa * d_it^-eta` from transmitter `i` to receiver `t`.
    pub fn gain(&self, i: usize, t: usize) -> Result<f64> {
        self.check_transmitter(i)?;
        self.check_receiver(t)?;
        if i == t {
            return Err(Error::invalid(format!(
                "gain undefined from node {i} to itself"
            )));
        }
        Ok(self.kappa * self.distance(i, t).powf(-self.eta))
    }

    /// Same channel with every power and noise variance multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Result<Self> {
        Self::new(
            self.positions.clone(),
            self.powers.iter().map(|p| p * factor).collect(),
            self.noise.iter().map(|n| n * factor).collect(),
            self.kappa,
            self.eta,
        )
    }

    /// Same geometry with every transmitter at power `power`.
    pub fn with_uniform_power(&self, power: f64) -> Result<Self> {
        Self::new(
            self.positions.clone(),
            vec![power; self.powers.len()],
            self.noise.clone(),
            self.kappa,
            self.eta,
        )
    }

    /// View of this channel with the relays visited in `ordering`.
    pub fn ordered<'a>(&'a self, ordering: &'a Ordering) -> Result<OrderedChannel<'a>> {
        if ordering.node_count() != self.node_count() {
            return Err(Error::DimensionMismatch {
                what: "ordering",
                expected: self.node_count(),
                got: ordering.node_count(),
            });
        }
        Ok(OrderedChannel {
            config: self,
            ordering,
        })
    }

    fn check_transmitter(&self, i: usize) -> Result<()> {
        if i == 0 || i >= self.node_count() {
            return Err(Error::invalid(format!(
                "transmitter index {i} outside 1..={}",
                self.node_count() - 1
            )));
        }
        Ok(())
    }

    fn check_receiver(&self, t: usize) -> Result<()> {
        if t < 2 || t > self.node_count() {
            return Err(Error::invalid(format!(
                "receiver index {t} outside 2..={}",
                self.node_count()
            )));
        }
        Ok(())
    }
}

/// `T` nodes at `0, spacing, 2*spacing, ...` with equal powers and noises and
/// `kappa = 1`.
pub fn uniform_line_config(
    nodes: usize,
    spacing: f64,
    power: f64,
    noise: f64,
    eta: f64,
) -> Result<ChannelConfig> {
    if nodes < 2 {
        return Err(Error::invalid(format!(
            "a relay channel needs at least 2 nodes, got {nodes}"
        )));
    }
    if !(spacing.is_finite() && spacing > 0.0) {
        return Err(Error::invalid(format!("spacing {spacing} must be > 0")));
    }
    ChannelConfig::new(
        (0..nodes).map(|i| i as f64 * spacing).collect(),
        vec![power; nodes - 1],
        vec![noise; nodes - 1],
        1.0,
        eta,
    )
}

/// Transmit power giving a per-node SNR of `snr_db` over noise `noise`.
pub fn snr_db_to_power(snr_db: f64, noise: f64) -> f64 {
    noise * 10f64.powf(snr_db / 10.0)
}

/// Channel quantities in pipeline position order.
///
/// Position `p` is the `p`-th node a message traverses. Indices follow the
/// same 1-based convention as [`ChannelConfig`]; callers guarantee they are
/// in range.
pub trait RelayNetwork {
    fn node_count(&self) -> usize;
    /// Power gain from transmitting position `i` to receiving position `t`.
    fn link_gain(&self, i: usize, t: usize) -> f64;
    fn tx_power(&self, i: usize) -> f64;
    fn rx_noise(&self, t: usize) -> f64;
}

impl RelayNetwork for ChannelConfig {
    fn node_count(&self) -> usize {
        self.positions.len()
    }

    fn link_gain(&self, i: usize, t: usize) -> f64 {
        self.kappa * self.distance(i, t).powf(-self.eta)
    }

    fn tx_power(&self, i: usize) -> f64 {
        self.powers[i - 1]
    }

    fn rx_noise(&self, t: usize) -> f64 {
        self.noise[t - 2]
    }
}

/// A channel whose relays are relabeled by a permutation before use.
#[derive(Clone, Copy, Debug)]
pub struct OrderedChannel<'a> {
    config: &'a ChannelConfig,
    ordering: &'a Ordering,
}

impl RelayNetwork for OrderedChannel<'_> {
    fn node_count(&self) -> usize {
        self.config.node_count()
    }

    fn link_gain(&self, i: usize, t: usize) -> f64 {
        self.config
            .link_gain(self.ordering.node_at(i), self.ordering.node_at(t))
    }

    fn tx_power(&self, i: usize) -> f64 {
        self.config.tx_power(self.ordering.node_at(i))
    }

    fn rx_noise(&self, t: usize) -> f64 {
        self.config.rx_noise(self.ordering.node_at(t))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn gain_examples() {
        let c = uniform_line_config(3, 1.0, 1.0, 1.0, 2.0).unwrap();
        assert_eq!(c.gain(1, 3).unwrap(), 0.25);
        let c = uniform_line_config(2, 1.0, 1.0, 1.0, 2.0).unwrap();
        assert_eq!(c.gain(1, 2).unwrap(), 1.0);
        let c = ChannelConfig::new(vec![0.0, 2.0], vec![1.0], vec![1.0], 2.0, 3.0).unwrap();
        assert_eq!(c.gain(1, 2).unwrap(), 0.25);
    }

    #[test]
    fn gain_rejects_bad_indices() {
        let c = uniform_line_config(4, 1.0, 1.0, 1.0, 2.0).unwrap();
        assert!(c.gain(2, 2).is_err());
        assert!(c.gain(0, 2).is_err());
        assert!(c.gain(4, 2).is_err());
        assert!(c.gain(1, 1).is_err());
        assert!(c.gain(1, 5).is_err());
    }

    #[test]
    fn uniform_constructor() {
        let c = uniform_line_config(5, 1.0, 1.0, 1.0, 2.0).unwrap();
        assert_eq!(c.positions(), &[0.0, 1.0, 2.0, 3.0, 4.0]);
        assert_eq!(c.kappa(), 1.0);
        assert_eq!(c.powers().len(), 4);

        let p2p = uniform_line_config(2, 1.0, 3.0, 0.5, 2.0).unwrap();
        assert_eq!(p2p.node_count(), 2);
        assert_eq!(p2p.power(1).unwrap(), 3.0);
        assert_eq!(p2p.noise(2).unwrap(), 0.5);

        let six = uniform_line_config(6, 1.0, 1.0, 1.0, 2.0).unwrap();
        assert_eq!(six.node_count(), 6);
    }

    #[test]
    fn constructor_rejects_invalid_input() {
        assert!(uniform_line_config(1, 1.0, 1.0, 1.0, 2.0).is_err());
        assert!(uniform_line_config(3, 0.0, 1.0, 1.0, 2.0).is_err());
        assert!(uniform_line_config(3, 1.0, -1.0, 1.0, 2.0).is_err());
        assert!(uniform_line_config(3, 1.0, 1.0, 0.0, 2.0).is_err());
        assert!(uniform_line_config(3, 1.0, 1.0, 1.0, 1.5).is_err());
        assert!(
            ChannelConfig::new(vec![0.0, 1.0, 1.0], vec![1.0; 2], vec![1.0; 2], 1.0, 2.0).is_err()
        );
        assert!(matches!(
            ChannelConfig::new(vec![0.0, 1.0, 2.0], vec![1.0; 3], vec![1.0; 2], 1.0, 2.0),
            Err(Error::DimensionMismatch { what: "powers", .. })
        ));
        assert!(ChannelConfig::new(vec![0.0, 1.0], vec![1.0], vec![1.0], 0.0, 2.0).is_err());
    }

    #[test]
    fn snr_conversion() {
        assert_eq!(snr_db_to_power(0.0, 1.0), 1.0);
        assert!((snr_db_to_power(10.0, 1.0) - 10.0).abs() < 1e-12);
        assert!((snr_db_to_power(-10.0, 2.0) - 0.2).abs() < 1e-12);
    }

    #[test]
    fn ordered_view_relabels_relays() {
        let c = ChannelConfig::new(
            vec![0.0, 1.0, 3.0, 4.0],
            vec![1.0, 2.0, 3.0],
            vec![0.5, 0.6, 0.7],
            1.0,
            2.0,
        )
        .unwrap();
        let swap = Ordering::new(vec![1, 3, 2, 4]).unwrap();
        let view = c.ordered(&swap).unwrap();
        assert_eq!(view.tx_power(2), 3.0);
        assert_eq!(view.rx_noise(2), 0.6);
        assert_eq!(view.link_gain(1, 2), c.gain(1, 3).unwrap());
        assert_eq!(view.link_gain(2, 4), c.gain(3, 4).unwrap());
    }

    proptest! {
        #[test]
        fn gain_decreasing_in_distance(d1 in 0.1f64..10.0, extra in 0.01f64..5.0, eta in 2.0f64..5.0) {
            let c = ChannelConfig::new(vec![0.0, d1, d1 + extra], vec![1.0; 2], vec![1.0; 2], 1.0, eta).unwrap();
            prop_assert!(c.gain(1, 3).unwrap() < c.gain(1, 2).unwrap());
        }

        #[test]
        fn gain_decreasing_in_eta_beyond_unit_distance(d in 1.01f64..20.0, eta in 2.0f64..5.0, de in 0.01f64..2.0) {
            let a = ChannelConfig::new(vec![0.0, d], vec![1.0], vec![1.0], 1.0, eta).unwrap();
            let b = ChannelConfig::new(vec![0.0, d], vec![1.0], vec![1.0], 1.0, eta + de).unwrap();
            prop_assert!(b.gain(1, 2).unwrap() < a.gain(1, 2).unwrap());
        }

        #[test]
        fn gain_depends_only_on_distance(x in -5.0f64..5.0, d in 0.1f64..4.0, eta in 2.0f64..4.0) {
            let a = ChannelConfig::new(vec![x, x + d, x + 2.0 * d, x + 3.0 * d], vec![1.0; 3], vec![1.0; 3], 1.0, eta).unwrap();
            let g12 = a.gain(1, 2).unwrap();
            let g23 = a.gain(2, 3).unwrap();
            let g21 = a.gain(3, 2).unwrap();
            prop_assert!((g12 - g23).abs() <= 1e-12 * g12);
            prop_assert!((g12 - g21).abs() <= 1e-12 * g12);
        }

        #[test]
        fn uniform_adjacent_gain(nodes in 2usize..12, s in 0.2f64..5.0, eta in 2.0f64..4.5) {
            let c = uniform_line_config(nodes, s, 1.0, 1.0, eta).unwrap();
            for i in 1..nodes {
                let g = c.gain(i, i + 1).unwrap();
                prop_assert!((g - s.powf(-eta)).abs() <= 1e-12 * g);
            }
        }
    }
}
