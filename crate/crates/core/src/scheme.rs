//! Coding scheme description: hop depth, relay ordering and the per-node
//! power split across superposed message streams.
//!
//! Node `i` transmits the Gaussian superposition
//! `X_i = sum_m sqrt(alpha[i][m] * P_i) * U_{i+m}` over `m = 0..k-1`, where
//! the `U_j` are independent unit-variance streams. Stream `U_i` carries the
//! message node `i` is sending fresh; `U_{i+m}` for `m >= 1` repeats messages
//! already handed to downstream nodes.

use std::fmt;

use rand::Rng;

use crate::error::{Error, Result};

/// Row-sum tolerance for allocation simplexes.
pub const SIMPLEX_TOLERANCE: f64 = 1e-12;

/// Permutation of pipeline positions onto physical nodes, fixing the source
/// (position 1) and the destination (position `T`).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Ordering {
    nodes: Vec<usize>,
}

impl Ordering {
    /// `nodes[p - 1]` is the physical node at pipeline position `p`.
    pub fn new(nodes: Vec<usize>) -> Result<Self> {
        let n = nodes.len();
        if n < 2 {
            return Err(Error::invalid("ordering needs at least 2 nodes"));
        }
        if nodes[0] != 1 || nodes[n - 1] != n {
            return Err(Error::invalid(format!(
                "ordering must fix source 1 and destination {n}, got {nodes:?}"
            )));
        }
        let mut seen = vec![false; n + 1];
        for &v in &nodes {
            if v == 0 || v > n || seen[v] {
                return Err(Error::invalid(format!(
                    "ordering {nodes:?} is not a permutation of 1..={n}"
                )));
            }
            seen[v] = true;
        }
        Ok(Self { nodes })
    }

    pub fn identity(node_count: usize) -> Self {
        Self {
            nodes: (1..=node_count).collect(),
        }
    }

    /// Builds the ordering from the relay visiting order alone.
    pub fn from_relays(node_count: usize, relays: &[usize]) -> Result<Self> {
        let mut nodes = Vec::with_capacity(node_count);
        nodes.push(1);
        nodes.extend_from_slice(relays);
        nodes.push(node_count);
        Self::new(nodes)
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn node_at(&self, position: usize) -> usize {
        self.nodes[position - 1]
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.nodes
    }

    pub fn is_identity(&self) -> bool {
        self.nodes.iter().enumerate().all(|(p, &v)| v == p + 1)
    }
}

impl fmt::Display for Ordering {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.nodes.iter().map(|v| v.to_string()).collect();
        write!(f, "{}", parts.join("-"))
    }
}

/// Hop depth plus relay ordering. `hops = T - 1` is omniscient coding.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SchemeSpec {
    hops: usize,
    ordering: Ordering,
}

impl SchemeSpec {
    pub fn new(hops: usize, ordering: Ordering) -> Result<Self> {
        let n = ordering.node_count();
        if hops == 0 || hops > n - 1 {
            return Err(Error::invalid(format!(
                "hop depth {hops} outside 1..={} for a {n}-node channel",
                n - 1
            )));
        }
        Ok(Self { hops, ordering })
    }

    /// `hops`-hop myopic coding along the identity ordering.
    pub fn myopic(node_count: usize, hops: usize) -> Result<Self> {
        Self::new(hops, Ordering::identity(node_count))
    }

    pub fn omniscient(node_count: usize) -> Self {
        Self {
            hops: node_count - 1,
            ordering: Ordering::identity(node_count),
        }
    }

    pub fn hops(&self) -> usize {
        self.hops
    }

    pub fn ordering(&self) -> &Ordering {
        &self.ordering
    }

    pub fn node_count(&self) -> usize {
        self.ordering.node_count()
    }

    pub fn is_omniscient(&self) -> bool {
        self.hops == self.node_count() - 1
    }

    pub fn with_ordering(&self, ordering: Ordering) -> Result<Self> {
        Self::new(self.hops, ordering)
    }

    pub fn with_hops(&self, hops: usize) -> Result<Self> {
        Self::new(hops, self.ordering.clone())
    }
}

impl fmt::Display for SchemeSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_omniscient() {
            write!(f, "omniscient")
        } else {
            write!(f, "k={}", self.hops)
        }
    }
}

/// Per-transmitter power split over the `k` streams it carries.
///
/// Row `i` (node `i`, 1-based) holds `alpha[i][0..k]`; entry `m` is the
/// fraction of `P_i` spent on `U_{i+m}`. Entries addressing streams past
/// `U_{T-1}` are zero.
#[derive(Clone, Debug, PartialEq)]
pub struct PowerAllocation {
    node_count: usize,
    hops: usize,
    rows: Vec<Vec<f64>>,
}

impl PowerAllocation {
    pub fn new(node_count: usize, hops: usize, rows: Vec<Vec<f64>>) -> Result<Self> {
        if node_count < 2 {
            return Err(Error::invalid("allocation needs at least 2 nodes"));
        }
        if hops == 0 || hops > node_count - 1 {
            return Err(Error::invalid(format!(
                "hop depth {hops} outside 1..={}",
                node_count - 1
            )));
        }
        if rows.len() != node_count - 1 {
            return Err(Error::DimensionMismatch {
                what: "allocation rows",
                expected: node_count - 1,
                got: rows.len(),
            });
        }
        for (idx, row) in rows.iter().enumerate() {
            let node = idx + 1;
            if row.len() != hops {
                return Err(Error::DimensionMismatch {
                    what: "allocation row length",
                    expected: hops,
                    got: row.len(),
                });
            }
            if let Some(a) = row
                .iter()
                .find(|a| !(a.is_finite() && (0.0..=1.0).contains(*a)))
            {
                return Err(Error::invalid(format!(
                    "node {node}: split {a} outside [0, 1]"
                )));
            }
            let valid = valid_streams(node_count, hops, node);
            if let Some(a) = row[valid..].iter().find(|a| **a != 0.0) {
                return Err(Error::invalid(format!(
                    "node {node}: split {a} on a stream beyond U_{}",
                    node_count - 1
                )));
            }
            let sum: f64 = row.iter().sum();
            if (sum - 1.0).abs() > SIMPLEX_TOLERANCE {
                return Err(Error::invalid(format!(
                    "node {node}: splits sum to {sum}, not 1"
                )));
            }
        }
        Ok(Self {
            node_count,
            hops,
            rows,
        })
    }

    /// Every node spends all power on its fresh stream.
    pub fn fresh_only(node_count: usize, hops: usize) -> Result<Self> {
        Self::from_row_fn(node_count, hops, |_, _| {
            let mut row = vec![0.0; hops];
            row[0] = 1.0;
            row
        })
    }

    /// Equal split over each node's valid streams.
    pub fn uniform(node_count: usize, hops: usize) -> Result<Self> {
        Self::from_row_fn(node_count, hops, |_, valid| {
            let mut row = vec![0.0; hops];
            row[..valid].fill(1.0 / valid as f64);
            row
        })
    }

    /// Half the power on the fresh stream, the other half shared equally by
    /// the repeated streams. Nodes with no repeated stream keep all power
    /// on the fresh one.
    pub fn fixed_half(node_count: usize, hops: usize) -> Result<Self> {
        Self::from_row_fn(node_count, hops, |_, valid| {
            let mut row = vec![0.0; hops];
            if valid == 1 {
                row[0] = 1.0;
            } else {
                row[0] = 0.5;
                row[1..valid].fill(0.5 / (valid - 1) as f64);
            }
            row
        })
    }

    /// Two-hop allocation from the fractions each node spends repeating the
    /// next node's stream: `repeat[i - 1]` belongs to node `i`, for nodes
    /// `1..=T-2`. Node `T-1` has nothing to repeat.
    pub fn two_hop(node_count: usize, repeat: &[f64]) -> Result<Self> {
        if node_count < 3 {
            return Err(Error::invalid("two-hop coding needs at least 3 nodes"));
        }
        if repeat.len() != node_count - 2 {
            return Err(Error::DimensionMismatch {
                what: "two-hop repeat fractions",
                expected: node_count - 2,
                got: repeat.len(),
            });
        }
        let mut rows: Vec<Vec<f64>> = repeat.iter().map(|&a| vec![1.0 - a, a]).collect();
        rows.push(vec![1.0, 0.0]);
        Self::new(node_count, 2, rows)
    }

    /// Independent uniform draws on each node's simplex.
    pub fn random<R: Rng + ?Sized>(node_count: usize, hops: usize, rng: &mut R) -> Result<Self> {
        let mut rows = Vec::with_capacity(node_count - 1);
        for node in 1..node_count {
            let valid = valid_streams(node_count, hops, node);
            let mut row = vec![0.0; hops];
            // Exponential spacings give a flat Dirichlet draw.
            for slot in row.iter_mut().take(valid) {
                let u: f64 = rng.random::<f64>();
                *slot = -(1.0 - u).ln();
            }
            normalize_row(&mut row[..valid]);
            rows.push(row);
        }
        Self::new(node_count, hops, rows)
    }

    fn from_row_fn(
        node_count: usize,
        hops: usize,
        mut f: impl FnMut(usize, usize) -> Vec<f64>,
    ) -> Result<Self> {
        if node_count < 2 || hops == 0 || hops > node_count - 1 {
            return Err(Error::invalid(format!(
                "hop depth {hops} invalid for {node_count} nodes"
            )));
        }
        let rows = (1..node_count)
            .map(|node| f(node, valid_streams(node_count, hops, node)))
            .collect();
        Self::new(node_count, hops, rows)
    }

    pub(crate) fn from_rows_unchecked(node_count: usize, hops: usize, rows: Vec<Vec<f64>>) -> Self {
        debug_assert!(Self::new(node_count, hops, rows.clone()).is_ok());
        Self {
            node_count,
            hops,
            rows,
        }
    }

    pub fn node_count(&self) -> usize {
        self.node_count
    }

    pub fn hops(&self) -> usize {
        self.hops
    }

    /// Fraction of node `i`'s power on stream `U_{i+m}`.
    pub fn split(&self, node: usize, m: usize) -> f64 {
        self.rows[node - 1][m]
    }

    pub fn row(&self, node: usize) -> &[f64] {
        &self.rows[node - 1]
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.rows
    }

    /// Number of streams node `node` may carry.
    pub fn valid_streams(&self, node: usize) -> usize {
        valid_streams(self.node_count, self.hops, node)
    }

    /// The same split padded with zero columns for a deeper scheme. Rates
    /// never decrease under this embedding.
    pub fn embed(&self, hops: usize) -> Result<Self> {
        if hops < self.hops {
            return Err(Error::invalid(format!(
                "cannot embed a {}-hop allocation into {hops} hops",
                self.hops
            )));
        }
        let rows = self
            .rows
            .iter()
            .map(|row| {
                let mut r = row.clone();
                r.resize(hops, 0.0);
                r
            })
            .collect();
        Self::new(self.node_count, hops, rows)
    }
}

pub(crate) fn valid_streams(node_count: usize, hops: usize, node: usize) -> usize {
    hops.min(node_count - node)
}

pub(crate) fn normalize_row(row: &mut [f64]) {
    let sum: f64 = row.iter().sum();
    if sum > 0.0 {
        row.iter_mut().for_each(|a| *a /= sum);
    } else {
        row.fill(0.0);
        row[0] = 1.0;
    }
    // Push any rounding residue onto the largest entry so the row sums to 1.
    let residue = 1.0 - row.iter().sum::<f64>();
    if residue != 0.0 {
        let (imax, _) =
            row.iter().enumerate().fold(
                (0, f64::MIN),
                |acc, (i, &a)| if a > acc.1 { (i, a) } else { acc },
            );
        row[imax] = (row[imax] + residue).clamp(0.0, 1.0);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn ordering_validation() {
        assert!(Ordering::new(vec![1, 3, 2, 4]).is_ok());
        assert!(Ordering::new(vec![2, 1, 3, 4]).is_err());
        assert!(Ordering::new(vec![1, 2, 2, 4]).is_err());
        assert!(Ordering::new(vec![1, 2, 4, 3]).is_err());
        assert!(Ordering::identity(5).is_identity());
        assert_eq!(
            Ordering::from_relays(5, &[4, 3, 2]).unwrap().to_string(),
            "1-4-3-2-5"
        );
    }

    #[test]
    fn scheme_bounds() {
        assert!(SchemeSpec::myopic(5, 0).is_err());
        assert!(SchemeSpec::myopic(5, 5).is_err());
        assert!(SchemeSpec::myopic(5, 4).unwrap().is_omniscient());
        assert_eq!(SchemeSpec::omniscient(5).hops(), 4);
        assert_eq!(SchemeSpec::myopic(5, 2).unwrap().to_string(), "k=2");
    }

    #[test]
    fn allocation_rejects_bad_rows() {
        assert!(PowerAllocation::new(3, 2, vec![vec![0.5, 0.5], vec![1.0, 0.0]]).is_ok());
        // node 2 cannot carry U_3
        assert!(PowerAllocation::new(3, 2, vec![vec![0.5, 0.5], vec![0.5, 0.5]]).is_err());
        assert!(PowerAllocation::new(3, 2, vec![vec![0.6, 0.5], vec![1.0, 0.0]]).is_err());
        assert!(PowerAllocation::new(3, 2, vec![vec![1.2, -0.2], vec![1.0, 0.0]]).is_err());
        assert!(PowerAllocation::new(3, 2, vec![vec![1.0, 0.0]]).is_err());
        assert!(PowerAllocation::new(3, 3, vec![vec![1.0, 0.0, 0.0]; 2]).is_err());
    }

    #[test]
    fn named_allocations() {
        let half = PowerAllocation::fixed_half(5, 2).unwrap();
        assert_eq!(half.row(1), &[0.5, 0.5]);
        assert_eq!(half.row(4), &[1.0, 0.0]);
        let three = PowerAllocation::fixed_half(6, 3).unwrap();
        assert_eq!(three.row(1), &[0.5, 0.25, 0.25]);
        assert_eq!(three.row(4), &[0.5, 0.5, 0.0]);
        let two = PowerAllocation::two_hop(4, &[0.3, 0.7]).unwrap();
        assert_eq!(two.row(1), &[0.7, 0.3]);
        assert_eq!(two.row(3), &[1.0, 0.0]);
        let uni = PowerAllocation::uniform(4, 3).unwrap();
        assert_eq!(uni.row(2), &[0.5, 0.5, 0.0]);
    }

    #[test]
    fn random_allocations_are_feasible() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for nodes in 2..9 {
            for hops in 1..nodes {
                let a = PowerAllocation::random(nodes, hops, &mut rng).unwrap();
                assert_eq!(a.rows().len(), nodes - 1);
            }
        }
    }

    #[test]
    fn embedding_pads_with_zeros() {
        let a = PowerAllocation::two_hop(5, &[0.2, 0.4, 0.6]).unwrap();
        let e = a.embed(4).unwrap();
        assert_eq!(e.row(1), &[0.8, 0.2, 0.0, 0.0]);
        assert!(e.embed(2).is_err());
    }
}
