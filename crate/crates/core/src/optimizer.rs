//! Max-min power allocation and relay ordering search.
//!
//! The end-to-end rate is the minimum of smooth per-node rates, so it is
//! nonsmooth and in general nonconcave in the splits. The search runs from
//! several starting points (warm starts, the centroid, simplex corners and
//! seeded random draws). From each start it does cyclic coordinate ascent
//! over the per-node simplexes: every move transfers power between two
//! streams of one node, chosen by a grid scan refined with golden-section
//! search. A soft-min continuation runs before the exact min so that the
//! ascent does not stall on ties between bottleneck nodes.

use itertools::Itertools;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::channel::{ChannelConfig, RelayNetwork};
use crate::error::{Error, Result};
use crate::rates::{node_rates_rows, RateReport};
use crate::scheme::{normalize_row, valid_streams, Ordering, PowerAllocation, SchemeSpec};

#[derive(Clone, Debug, PartialEq)]
pub struct OptimizerOptions {
    /// Grid points of the coarse scan in each line search.
    pub grid_points: usize,
    /// Golden-section refinements after the coarse scan.
    pub golden_iterations: usize,
    /// Cap on full coordinate sweeps per phase.
    pub max_iterations: usize,
    /// A sweep improving the objective by less than this (bits) ends a phase.
    pub tolerance: f64,
    /// Seeded random starting points in addition to the deterministic ones.
    pub random_starts: usize,
    pub seed: u64,
    /// Soft-min temperatures, relative to the current end-to-end rate, run
    /// before the exact max-min phase.
    pub smoothing: Vec<f64>,
    /// Largest node count for exhaustive ordering search.
    pub ordering_cap: usize,
}

impl Default for OptimizerOptions {
    fn default() -> Self {
        Self {
            grid_points: 9,
            golden_iterations: 24,
            max_iterations: 500,
            tolerance: 1e-9,
            random_starts: 3,
            seed: 0,
            smoothing: vec![0.05, 0.01, 0.002],
            ordering_cap: 8,
        }
    }
}

/// Best allocation found for one scheme.
#[derive(Clone, Debug, PartialEq)]
pub struct AllocationResult {
    pub report: RateReport,
    /// False when the exact phase stopped at the iteration cap.
    pub converged: bool,
    /// Total coordinate sweeps over all starts and phases.
    pub sweeps: usize,
}

impl AllocationResult {
    pub fn allocation(&self) -> &PowerAllocation {
        &self.report.allocation
    }

    pub fn rate(&self) -> f64 {
        self.report.end_to_end
    }
}

struct Objective<'a, N: RelayNetwork> {
    net: &'a N,
    hops: usize,
    rates: Vec<f64>,
}

impl<'a, N: RelayNetwork> Objective<'a, N> {
    fn new(net: &'a N, hops: usize) -> Self {
        Self {
            net,
            hops,
            rates: vec![0.0; net.node_count() - 1],
        }
    }

    fn min_rate(&mut self, rows: &[Vec<f64>]) -> f64 {
        node_rates_rows(self.net, rows, self.hops, &mut self.rates);
        self.rates.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// `-tau * ln(sum exp(-R_t / tau))`, or the exact min when `tau == 0`.
    fn value(&mut self, rows: &[Vec<f64>], tau: f64) -> f64 {
        let min = self.min_rate(rows);
        if tau <= 0.0 {
            return min;
        }
        let s: f64 = self.rates.iter().map(|r| (-(r - min) / tau).exp()).sum();
        min - tau * s.ln()
    }
}

struct StartOutcome {
    rows: Vec<Vec<f64>>,
    value: f64,
    converged: bool,
    sweeps: usize,
}

fn ascent_phase<N: RelayNetwork>(
    obj: &mut Objective<'_, N>,
    rows: &mut [Vec<f64>],
    tau: f64,
    opts: &OptimizerOptions,
) -> (bool, usize) {
    let n = obj.net.node_count();
    let k = obj.hops;
    let mut current = obj.value(rows, tau);
    for sweep in 1..=opts.max_iterations {
        let start = current;
        for node in 1..n {
            let valid = valid_streams(n, k, node);
            for (a, b) in (0..valid).tuple_combinations() {
                current = line_search(obj, rows, node - 1, a, b, tau, current, opts);
            }
        }
        if current - start < opts.tolerance {
            return (true, sweep);
        }
    }
    (false, opts.max_iterations)
}

/// Moves power between entries `a` and `b` of one row; keeps the move only
/// if it strictly improves the objective. Returns the objective afterwards.
#[allow(clippy::too_many_arguments)]
fn line_search<N: RelayNetwork>(
    obj: &mut Objective<'_, N>,
    rows: &mut [Vec<f64>],
    row: usize,
    a: usize,
    b: usize,
    tau: f64,
    current: f64,
    opts: &OptimizerOptions,
) -> f64 {
    let total = rows[row][a] + rows[row][b];
    if total <= 0.0 {
        return current;
    }
    let original = (rows[row][a], rows[row][b]);
    let mut eval = |rows: &mut [Vec<f64>], s: f64| {
        rows[row][a] = s;
        rows[row][b] = total - s;
        obj.value(rows, tau)
    };

    let g = opts.grid_points.max(3);
    let step = total / (g - 1) as f64;
    let (mut best_s, mut best_v) = (original.0, current);
    for idx in 0..g {
        let s = step * idx as f64;
        let v = eval(rows, s);
        if v > best_v {
            best_v = v;
            best_s = s;
        }
    }
    // Refine around the best grid point (or the current point).
    let (mut lo, mut hi) = ((best_s - step).max(0.0), (best_s + step).min(total));
    const INV_PHI: f64 = 0.618_033_988_749_894_8;
    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let mut f1 = eval(rows, x1);
    let mut f2 = eval(rows, x2);
    for _ in 0..opts.golden_iterations {
        if f1 >= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INV_PHI * (hi - lo);
            f1 = eval(rows, x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INV_PHI * (hi - lo);
            f2 = eval(rows, x2);
        }
    }
    for (s, v) in [(x1, f1), (x2, f2)] {
        if v > best_v {
            best_v = v;
            best_s = s;
        }
    }

    if best_v > current {
        let saved = rows[row].clone();
        rows[row][a] = best_s;
        rows[row][b] = total - best_s;
        normalize_row(&mut rows[row][..]);
        let v = obj.value(rows, tau);
        if v > current {
            return v;
        }
        rows[row] = saved;
    }
    rows[row][a] = original.0;
    rows[row][b] = original.1;
    current
}

fn run_start<N: RelayNetwork>(
    obj: &mut Objective<'_, N>,
    start: &[Vec<f64>],
    opts: &OptimizerOptions,
) -> StartOutcome {
    let start_value = obj.min_rate(start);
    let mut rows = start.to_vec();
    let mut sweeps = 0;
    for &rel in &opts.smoothing {
        let scale = obj.min_rate(&rows).max(1e-12);
        sweeps += ascent_phase(obj, &mut rows, rel * scale, opts).1;
    }
    if obj.min_rate(&rows) < start_value {
        rows = start.to_vec();
    }
    let (converged, s) = ascent_phase(obj, &mut rows, 0.0, opts);
    sweeps += s;
    let value = obj.min_rate(&rows);
    StartOutcome {
        rows,
        value,
        converged,
        sweeps,
    }
}

fn lexicographically_less(a: &[Vec<f64>], b: &[Vec<f64>]) -> bool {
    for (x, y) in a.iter().flatten().zip(b.iter().flatten()) {
        if x < y {
            return true;
        }
        if x > y {
            return false;
        }
    }
    false
}

fn starting_points(
    node_count: usize,
    hops: usize,
    warm: &[PowerAllocation],
    opts: &OptimizerOptions,
) -> Result<Vec<Vec<Vec<f64>>>> {
    let mut starts: Vec<Vec<Vec<f64>>> = Vec::new();
    for w in warm {
        if w.node_count() != node_count {
            return Err(Error::DimensionMismatch {
                what: "warm start node count",
                expected: node_count,
                got: w.node_count(),
            });
        }
        starts.push(w.embed(hops)?.rows().to_vec());
    }
    starts.push(PowerAllocation::uniform(node_count, hops)?.rows().to_vec());
    for corner in 0..hops {
        let rows = (1..node_count)
            .map(|node| {
                let mut row = vec![0.0; hops];
                row[corner.min(valid_streams(node_count, hops, node) - 1)] = 1.0;
                row
            })
            .collect();
        starts.push(rows);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    for _ in 0..opts.random_starts {
        starts.push(
            PowerAllocation::random(node_count, hops, &mut rng)?
                .rows()
                .to_vec(),
        );
    }
    starts.dedup();
    Ok(starts)
}

/// Maximizes the end-to-end rate of `scheme` over power allocations.
pub fn optimize_allocation(
    config: &ChannelConfig,
    scheme: &SchemeSpec,
    opts: &OptimizerOptions,
) -> Result<AllocationResult> {
    optimize_allocation_from(config, scheme, opts, &[])
}

/// As [`optimize_allocation`], additionally starting from each allocation in
/// `warm` (embedded into the scheme's hop depth). The result is never worse
/// than any starting point.
pub fn optimize_allocation_from(
    config: &ChannelConfig,
    scheme: &SchemeSpec,
    opts: &OptimizerOptions,
    warm: &[PowerAllocation],
) -> Result<AllocationResult> {
    let n = config.node_count();
    if scheme.node_count() != n {
        return Err(Error::DimensionMismatch {
            what: "scheme node count",
            expected: n,
            got: scheme.node_count(),
        });
    }
    let hops = scheme.hops();
    let net = config.ordered(scheme.ordering())?;
    let mut obj = Objective::new(&net, hops);

    let mut best: Option<StartOutcome> = None;
    let mut sweeps = 0;
    for start in starting_points(n, hops, warm, opts)? {
        let outcome = run_start(&mut obj, &start, opts);
        sweeps += outcome.sweeps;
        let better = match &best {
            None => true,
            Some(b) => {
                outcome.value > b.value
                    || (outcome.value == b.value && lexicographically_less(&outcome.rows, &b.rows))
            }
        };
        if better {
            best = Some(outcome);
        }
    }
    let best = best.expect("at least one starting point");
    let alloc = PowerAllocation::from_rows_unchecked(n, hops, best.rows);
    let mut rates = vec![0.0; n - 1];
    node_rates_rows(&net, alloc.rows(), hops, &mut rates);
    Ok(AllocationResult {
        report: RateReport::from_rates(&rates, scheme.clone(), alloc),
        converged: best.converged,
        sweeps,
    })
}

/// Optimizes each hop depth in `hops` (ascending) along one ordering, warm
/// starting every depth from the optimized allocations of the shallower ones.
/// Optimized rates are therefore non-decreasing along the ladder.
pub fn optimize_ladder(
    config: &ChannelConfig,
    ordering: &Ordering,
    hops: &[usize],
    opts: &OptimizerOptions,
) -> Result<Vec<AllocationResult>> {
    if hops.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::invalid(format!(
            "hop depths must be strictly increasing, got {hops:?}"
        )));
    }
    let mut out: Vec<AllocationResult> = Vec::with_capacity(hops.len());
    for &k in hops {
        let scheme = SchemeSpec::new(k, ordering.clone())?;
        let warm: Vec<PowerAllocation> = out.iter().map(|r| r.allocation().clone()).collect();
        out.push(optimize_allocation_from(config, &scheme, opts, &warm)?);
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OrderingSearch {
    /// Every relay permutation; refused above the ordering cap.
    Exhaustive,
    /// The scheme's own ordering only.
    Fixed,
}

#[derive(Clone, Debug, PartialEq)]
pub struct OrderingResult {
    pub ordering: Ordering,
    pub result: AllocationResult,
    /// `(ordering, optimized end-to-end rate)` for every candidate tried.
    pub candidates: Vec<(Ordering, f64)>,
}

/// Maximizes the optimized end-to-end rate over relay orderings. Ties keep
/// the earliest candidate in lexicographic order, so the identity wins ties.
pub fn optimize_ordering(
    config: &ChannelConfig,
    scheme: &SchemeSpec,
    opts: &OptimizerOptions,
    mode: OrderingSearch,
) -> Result<OrderingResult> {
    let n = config.node_count();
    let orderings: Vec<Ordering> = match mode {
        OrderingSearch::Fixed => vec![scheme.ordering().clone()],
        OrderingSearch::Exhaustive => {
            if n > opts.ordering_cap {
                return Err(Error::UnsupportedSize(format!(
                    "exhaustive ordering search over {n} nodes exceeds the cap of {}",
                    opts.ordering_cap
                )));
            }
            (2..n)
                .permutations(n.saturating_sub(2))
                .map(|relays| Ordering::from_relays(n, &relays))
                .collect::<Result<_>>()?
        }
    };
    let mut best: Option<(Ordering, AllocationResult)> = None;
    let mut candidates = Vec::with_capacity(orderings.len());
    for ordering in orderings {
        let result = optimize_allocation(config, &scheme.with_ordering(ordering.clone())?, opts)?;
        candidates.push((ordering.clone(), result.rate()));
        if best.as_ref().is_none_or(|(_, b)| result.rate() > b.rate()) {
            best = Some((ordering, result));
        }
    }
    let (ordering, result) = best.expect("at least one ordering");
    Ok(OrderingResult {
        ordering,
        result,
        candidates,
    })
}
