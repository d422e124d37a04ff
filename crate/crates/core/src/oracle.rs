//! Exact mutual information for the jointly Gaussian system induced by a
//! coding scheme.
//!
//! The streams `U_j`, the inputs `X_i` and the received signals `Y_t` are all
//! linear images of the independent latent vector `(U, Z)`, so their joint
//! covariance is `L L^T` for a generator `L`. Conditional mutual information
//! follows from log-determinants of Schur complements:
//!
//! ```text
//! I(A; B | C) = 1/2 * log2( det S(B | C) / det S(B | A u C) )
//! S(B | S)    = Cov(B) - Cov(B, S) Cov(S)^+ Cov(S, B)
//! ```
//!
//! Nothing here shares code with the closed-form rates in [`crate::rates`];
//! the two are checked against each other.

use std::collections::HashMap;
use std::fmt;

use nalgebra::{DMatrix, SymmetricEigen};

use crate::channel::{ChannelConfig, RelayNetwork};
use crate::error::{Error, Result};
use crate::scheme::{PowerAllocation, SchemeSpec};

/// Eigenvalue floor below which a conditional covariance is ridged.
pub const RIDGE_TRIGGER: f64 = 1e-13;
/// Ridge strength relative to the mean eigenvalue.
pub const RIDGE_SCALE: f64 = 1e-12;

/// Coordinate of a [`GaussianSystem`]. Indices are pipeline positions.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Label {
    /// Auxiliary stream `U_j`, `j in 1..=T-1`.
    Stream(usize),
    /// Channel input `X_i`, `i in 1..=T-1`.
    Input(usize),
    /// Received signal `Y_t`, `t in 2..=T`.
    Received(usize),
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Label::Stream(j) => write!(f, "U{j}"),
            Label::Input(i) => write!(f, "X{i}"),
            Label::Received(t) => write!(f, "Y{t}"),
        }
    }
}

/// Labeled joint covariance of streams, optional inputs and received signals.
#[derive(Clone, Debug)]
pub struct GaussianSystem {
    labels: Vec<Label>,
    index: HashMap<Label, usize>,
    covariance: DMatrix<f64>,
}

/// Result of a conditional mutual information evaluation.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MutualInformation {
    pub bits: f64,
    /// True when a near-singular conditional covariance was ridged.
    pub regularized: bool,
}

impl GaussianSystem {
    /// Wraps an explicit covariance. Mostly useful for tests.
    pub fn from_parts(labels: Vec<Label>, covariance: DMatrix<f64>) -> Result<Self> {
        let n = labels.len();
        if covariance.nrows() != n || covariance.ncols() != n {
            return Err(Error::DimensionMismatch {
                what: "covariance",
                expected: n,
                got: covariance.nrows(),
            });
        }
        let index: HashMap<Label, usize> =
            labels.iter().enumerate().map(|(i, l)| (*l, i)).collect();
        if index.len() != n {
            return Err(Error::invalid("duplicate labels in Gaussian system"));
        }
        Ok(Self {
            labels,
            index,
            covariance,
        })
    }

    pub fn labels(&self) -> &[Label] {
        &self.labels
    }

    pub fn covariance(&self) -> &DMatrix<f64> {
        &self.covariance
    }

    pub fn contains(&self, label: Label) -> bool {
        self.index.contains_key(&label)
    }

    pub fn cov(&self, a: Label, b: Label) -> Result<f64> {
        Ok(self.covariance[(self.position(a)?, self.position(b)?)])
    }

    fn position(&self, label: Label) -> Result<usize> {
        self.index
            .get(&label)
            .copied()
            .ok_or_else(|| Error::invalid(format!("label {label} not in system")))
    }

    fn indices(&self, labels: &[Label]) -> Result<Vec<usize>> {
        let mut out: Vec<usize> = labels
            .iter()
            .map(|l| self.position(*l))
            .collect::<Result<_>>()?;
        out.sort_unstable();
        out.dedup();
        Ok(out)
    }

    /// `I(A; B | C)` in bits.
    ///
    /// Labels of `A` or `B` that also appear in `C` are dropped first
    /// (conditioning on a variable removes all information it carries).
    /// `A` and `B` must then be disjoint.
    pub fn conditional_mi(
        &self,
        a: &[Label],
        b: &[Label],
        c: &[Label],
    ) -> Result<MutualInformation> {
        let c_idx = self.indices(c)?;
        let a_idx: Vec<usize> = self
            .indices(a)?
            .into_iter()
            .filter(|i| !c_idx.contains(i))
            .collect();
        let b_idx: Vec<usize> = self
            .indices(b)?
            .into_iter()
            .filter(|i| !c_idx.contains(i))
            .collect();
        if let Some(i) = a_idx.iter().find(|i| b_idx.contains(i)) {
            return Err(Error::invalid(format!(
                "label {} appears on both sides of the mutual information",
                self.labels[*i]
            )));
        }
        if a_idx.is_empty() || b_idx.is_empty() {
            return Ok(MutualInformation {
                bits: 0.0,
                regularized: false,
            });
        }
        let mut ac_idx = a_idx.clone();
        ac_idx.extend_from_slice(&c_idx);

        let given_c = self.conditional_covariance(&b_idx, &c_idx);
        let given_ac = self.conditional_covariance(&b_idx, &ac_idx);
        let (ld_c, reg_c) = log_det_regularized(given_c)?;
        let (ld_ac, reg_ac) = log_det_regularized(given_ac)?;
        let bits = (0.5 * (ld_c - ld_ac) / std::f64::consts::LN_2).max(0.0);
        Ok(MutualInformation {
            bits,
            regularized: reg_c || reg_ac,
        })
    }

    fn submatrix(&self, rows: &[usize], cols: &[usize]) -> DMatrix<f64> {
        DMatrix::from_fn(rows.len(), cols.len(), |r, c| {
            self.covariance[(rows[r], cols[c])]
        })
    }

    /// Schur complement `Cov(B) - Cov(B,S) Cov(S)^+ Cov(S,B)`.
    fn conditional_covariance(&self, b: &[usize], s: &[usize]) -> DMatrix<f64> {
        let bb = self.submatrix(b, b);
        if s.is_empty() {
            return bb;
        }
        let bs = self.submatrix(b, s);
        let ss = self.submatrix(s, s);
        let ss_inv = psd_pseudo_inverse(ss);
        let mut out = bb - &bs * ss_inv * bs.transpose();
        symmetrize(&mut out);
        out
    }
}

fn symmetrize(m: &mut DMatrix<f64>) {
    let t = m.transpose();
    *m = (&*m + t) * 0.5;
}

/// Inverse of a PSD matrix, falling back to the Moore-Penrose inverse when
/// the conditioning set is linearly dependent (for example `X_i` together
/// with the streams it is built from).
fn psd_pseudo_inverse(m: DMatrix<f64>) -> DMatrix<f64> {
    if let Some(chol) = m.clone().cholesky() {
        let diag_min = chol.l().diagonal().min();
        let diag_max = chol.l().diagonal().max();
        if diag_min > 1e-7 * diag_max {
            return chol.inverse();
        }
    }
    let eig = SymmetricEigen::new(m);
    let max = eig.eigenvalues.amax();
    let tol = max * 1e-12 * eig.eigenvalues.len() as f64;
    let inv_vals = eig.eigenvalues.map(|v| if v > tol { 1.0 / v } else { 0.0 });
    &eig.eigenvectors * DMatrix::from_diagonal(&inv_vals) * eig.eigenvectors.transpose()
}

fn log_det_regularized(mut m: DMatrix<f64>) -> Result<(f64, bool)> {
    let dim = m.nrows();
    let eig = SymmetricEigen::new(m.clone());
    let mut regularized = false;
    let vals = if eig.eigenvalues.min() < RIDGE_TRIGGER {
        regularized = true;
        let ridge = RIDGE_SCALE * (m.trace() / dim as f64).max(f64::MIN_POSITIVE);
        for i in 0..dim {
            m[(i, i)] += ridge;
        }
        SymmetricEigen::new(m.clone()).eigenvalues
    } else {
        eig.eigenvalues
    };
    let min = vals.min();
    if !(min > 0.0) {
        return Err(Error::NumericalDegeneracy {
            min_eigenvalue: min,
            minor: m,
        });
    }
    Ok((vals.iter().map(|v| v.ln()).sum(), regularized))
}

/// Joint system over `U_1..U_{T-1}` and `Y_2..Y_T`.
pub fn build_system(
    config: &ChannelConfig,
    alloc: &PowerAllocation,
    scheme: &SchemeSpec,
) -> Result<GaussianSystem> {
    assemble(config, alloc, scheme, false)
}

/// Like [`build_system`] but also exposes the inputs `X_1..X_{T-1}`.
pub fn build_system_with_inputs(
    config: &ChannelConfig,
    alloc: &PowerAllocation,
    scheme: &SchemeSpec,
) -> Result<GaussianSystem> {
    assemble(config, alloc, scheme, true)
}

pub(crate) fn check_shapes(
    config: &ChannelConfig,
    alloc: &PowerAllocation,
    scheme: &SchemeSpec,
) -> Result<()> {
    let n = config.node_count();
    if scheme.node_count() != n {
        return Err(Error::DimensionMismatch {
            what: "scheme node count",
            expected: n,
            got: scheme.node_count(),
        });
    }
    if alloc.node_count() != n {
        return Err(Error::DimensionMismatch {
            what: "allocation node count",
            expected: n,
            got: alloc.node_count(),
        });
    }
    if alloc.hops() != scheme.hops() {
        return Err(Error::DimensionMismatch {
            what: "allocation hop depth",
            expected: scheme.hops(),
            got: alloc.hops(),
        });
    }
    Ok(())
}

fn assemble(
    config: &ChannelConfig,
    alloc: &PowerAllocation,
    scheme: &SchemeSpec,
    with_inputs: bool,
) -> Result<GaussianSystem> {
    check_shapes(config, alloc, scheme)?;
    let net = config.ordered(scheme.ordering())?;
    let n = net.node_count();
    let m = n - 1; // streams, transmitters and receivers each
    let k = alloc.hops();

    // X = mix * U
    let mix = DMatrix::from_fn(m, m, |i, j| {
        let (node, stream) = (i + 1, j + 1);
        if stream >= node && stream - node < k {
            (alloc.split(node, stream - node) * net.tx_power(node)).sqrt()
        } else {
            0.0
        }
    });
    // Y_t = sum_{i != t} h[t][i] X_i + Z_t
    let h = DMatrix::from_fn(m, m, |r, i| {
        let (t, node) = (r + 2, i + 1);
        if node == t {
            0.0
        } else {
            net.link_gain(node, t).sqrt()
        }
    });
    let noise_sd = DMatrix::from_fn(m, m, |r, c| {
        if r == c {
            net.rx_noise(r + 2).sqrt()
        } else {
            0.0
        }
    });

    let x_rows = if with_inputs { m } else { 0 };
    let mut generator = DMatrix::zeros(2 * m + x_rows, 2 * m);
    let mut labels = Vec::with_capacity(2 * m + x_rows);
    generator
        .view_mut((0, 0), (m, m))
        .copy_from(&DMatrix::identity(m, m));
    labels.extend((1..=m).map(Label::Stream));
    if with_inputs {
        generator.view_mut((m, 0), (m, m)).copy_from(&mix);
        labels.extend((1..=m).map(Label::Input));
    }
    let y0 = m + x_rows;
    generator.view_mut((y0, 0), (m, m)).copy_from(&(&h * &mix));
    generator.view_mut((y0, m), (m, m)).copy_from(&noise_sd);
    labels.extend((2..=n).map(Label::Received));

    let covariance = &generator * generator.transpose();
    GaussianSystem::from_parts(labels, covariance)
}

/// Stream labels `U_lo..=U_hi` clipped to `1..=T-1`.
fn stream_range(lo: isize, hi: isize, node_count: usize) -> Vec<Label> {
    let top = node_count as isize - 1;
    (lo.max(1)..=hi.min(top))
        .map(|j| Label::Stream(j as usize))
        .collect()
}

/// `I(U_{t-k..t-1}; Y_t | U_{t..t+k-1})` with out-of-range streams dropped.
pub fn node_rate_in_system(
    sys: &GaussianSystem,
    node_count: usize,
    hops: usize,
    t: usize,
) -> Result<MutualInformation> {
    if t < 2 || t > node_count {
        return Err(Error::invalid(format!(
            "receiver index {t} outside 2..={node_count}"
        )));
    }
    let (ti, k) = (t as isize, hops as isize);
    let decoded = stream_range(ti - k, ti - 1, node_count);
    let known = stream_range(ti, ti + k - 1, node_count);
    sys.conditional_mi(&decoded, &[Label::Received(t)], &known)
}

/// Per-node rate of receiver `t` evaluated on the exact joint Gaussian.
pub fn node_rate_oracle(
    config: &ChannelConfig,
    alloc: &PowerAllocation,
    scheme: &SchemeSpec,
    t: usize,
) -> Result<f64> {
    let sys = build_system(config, alloc, scheme)?;
    Ok(node_rate_in_system(&sys, config.node_count(), scheme.hops(), t)?.bits)
}

/// Oracle rates for every receiver `2..=T`, sharing one covariance assembly.
pub fn node_rates_oracle(
    config: &ChannelConfig,
    alloc: &PowerAllocation,
    scheme: &SchemeSpec,
) -> Result<Vec<f64>> {
    let sys = build_system(config, alloc, scheme)?;
    let n = config.node_count();
    (2..=n)
        .map(|t| node_rate_in_system(&sys, n, scheme.hops(), t).map(|mi| mi.bits))
        .collect()
}

/// Decode-forward cut rate written over channel inputs:
/// `I(X_1..X_cut; Y_{cut+1} | X_{cut+1}..X_{T-1})` for `cut in 1..=T-1`.
pub fn input_form_cut_rate(
    sys: &GaussianSystem,
    node_count: usize,
    cut: usize,
) -> Result<MutualInformation> {
    if cut == 0 || cut >= node_count {
        return Err(Error::invalid(format!(
            "cut {cut} outside 1..={}",
            node_count - 1
        )));
    }
    let sent: Vec<Label> = (1..=cut).map(Label::Input).collect();
    let known: Vec<Label> = (cut + 1..node_count).map(Label::Input).collect();
    sys.conditional_mi(&sent, &[Label::Received(cut + 1)], &known)
}
