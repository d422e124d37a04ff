//! Rate-versus-SNR sweeps comparing coding schemes, with CSV output.

use std::fmt;
use std::fmt::Write as _;
use std::str::FromStr;

use rayon::prelude::*;

use crate::channel::{snr_db_to_power, ChannelConfig};
use crate::error::{Error, Result};
use crate::optimizer::{optimize_ladder, OptimizerOptions};
use crate::scheme::Ordering;

/// A coding scheme named on the command line.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SchemeChoice {
    Hops(usize),
    Omniscient,
}

impl SchemeChoice {
    pub fn hops(self, node_count: usize) -> usize {
        match self {
            SchemeChoice::Hops(k) => k,
            SchemeChoice::Omniscient => node_count - 1,
        }
    }
}

impl fmt::Display for SchemeChoice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SchemeChoice::Hops(k) => write!(f, "k={k}"),
            SchemeChoice::Omniscient => write!(f, "omniscient"),
        }
    }
}

impl FromStr for SchemeChoice {
    type Err = Error;

    /// Accepts `2`, `k=2`, `omni`, `omniscient` and `k=omni`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let v = s.strip_prefix("k=").unwrap_or(s);
        match v {
            "omni" | "omniscient" => Ok(SchemeChoice::Omniscient),
            _ => match v.parse::<usize>() {
                Ok(k) if k >= 1 => Ok(SchemeChoice::Hops(k)),
                _ => Err(Error::invalid(format!("unknown scheme '{s}'"))),
            },
        }
    }
}

/// Parses a comma-separated scheme list.
pub fn parse_schemes(s: &str) -> Result<Vec<SchemeChoice>> {
    let out: Vec<SchemeChoice> = s
        .split(',')
        .filter(|p| !p.trim().is_empty())
        .map(str::parse)
        .collect::<Result<_>>()?;
    if out.is_empty() {
        return Err(Error::invalid("scheme list is empty"));
    }
    Ok(out)
}

/// `from, from + step, ...` up to and including `to` (within 1e-9 of a step).
pub fn snr_grid(from: f64, to: f64, step: f64) -> Result<Vec<f64>> {
    if !(step > 0.0) || !from.is_finite() || !to.is_finite() || to < from {
        return Err(Error::invalid(format!(
            "invalid SNR range {from}..{to} step {step}"
        )));
    }
    let count = ((to - from) / step + 1e-9).floor() as usize + 1;
    Ok((0..count).map(|i| from + step * i as f64).collect())
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepRow {
    pub snr_db: f64,
    pub scheme: SchemeChoice,
    pub end_to_end: f64,
    pub bottleneck: usize,
    pub converged: bool,
}

/// Optimized end-to-end rate of every scheme at every SNR.
///
/// At each SNR all transmitters get power `N * 10^(snr/10)` with `N` the
/// noise variance of receiver 2. Schemes are optimized as one warm-started
/// ladder of increasing hop depth, so deeper schemes never report less.
/// SNR points run in parallel; rows come back ordered by SNR, then by the
/// order of `schemes`.
pub fn rate_sweep(
    template: &ChannelConfig,
    snrs: &[f64],
    schemes: &[SchemeChoice],
    opts: &OptimizerOptions,
) -> Result<Vec<SweepRow>> {
    let n = template.node_count();
    if schemes.is_empty() {
        return Err(Error::invalid("scheme list is empty"));
    }
    for s in schemes {
        let k = s.hops(n);
        if k == 0 || k > n - 1 {
            return Err(Error::invalid(format!(
                "scheme {s} needs a hop depth in 1..={} for {n} nodes",
                n - 1
            )));
        }
    }
    let mut ladder: Vec<usize> = schemes.iter().map(|s| s.hops(n)).collect();
    ladder.sort_unstable();
    ladder.dedup();
    let reference_noise = template.noises()[0];
    let ordering = Ordering::identity(n);

    let per_snr: Vec<Vec<SweepRow>> = snrs
        .par_iter()
        .map(|&snr| {
            let config = template.with_uniform_power(snr_db_to_power(snr, reference_noise))?;
            let results = optimize_ladder(&config, &ordering, &ladder, opts)?;
            Ok(schemes
                .iter()
                .map(|s| {
                    let idx = ladder
                        .binary_search(&s.hops(n))
                        .expect("hop depth on ladder");
                    let r = &results[idx];
                    SweepRow {
                        snr_db: snr,
                        scheme: *s,
                        end_to_end: r.rate(),
                        bottleneck: r.report.bottleneck,
                        converged: r.converged,
                    }
                })
                .collect())
        })
        .collect::<Result<_>>()?;
    Ok(per_snr.into_iter().flatten().collect())
}

/// Myopic-to-omniscient rate ratios at one SNR.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RhoPoint {
    pub snr_db: f64,
    pub one_hop: f64,
    pub two_hop: f64,
    pub omniscient: f64,
}

impl RhoPoint {
    pub fn rho1(&self) -> f64 {
        self.one_hop / self.omniscient
    }

    pub fn rho2(&self) -> f64 {
        self.two_hop / self.omniscient
    }
}

/// One-hop, two-hop and omniscient optimized rates at each SNR.
pub fn rho_curve(
    template: &ChannelConfig,
    snrs: &[f64],
    opts: &OptimizerOptions,
) -> Result<Vec<RhoPoint>> {
    if template.node_count() < 3 {
        return Err(Error::invalid("two-hop coding needs at least 3 nodes"));
    }
    let schemes = [
        SchemeChoice::Hops(1),
        SchemeChoice::Hops(2),
        SchemeChoice::Omniscient,
    ];
    let rows = rate_sweep(template, snrs, &schemes, opts)?;
    Ok(rows
        .chunks(3)
        .map(|c| RhoPoint {
            snr_db: c[0].snr_db,
            one_hop: c[0].end_to_end,
            two_hop: c[1].end_to_end,
            omniscient: c[2].end_to_end,
        })
        .collect())
}

/// Fixed-point rendering with `digits` significant digits.
pub fn format_significant(x: f64, digits: usize) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!(
            "{:.*}",
            digits.saturating_sub(1),
            if x.is_finite() { 0.0 } else { x }
        );
    }
    let magnitude = x.abs().log10().floor() as i64;
    let decimals = (digits as i64 - 1 - magnitude).max(0) as usize;
    format!("{x:.decimals$}")
}

const SIG: usize = 12;

pub fn sweep_csv(rows: &[SweepRow]) -> String {
    let mut out = String::from("snr_db,scheme,end_to_end_bits,bottleneck_node,converged_flag\n");
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{}",
            format_significant(r.snr_db, SIG),
            r.scheme,
            format_significant(r.end_to_end, SIG),
            r.bottleneck,
            u8::from(r.converged)
        );
    }
    out
}

pub fn rho_csv(points: &[RhoPoint]) -> String {
    let mut out = String::from("snr_db,one_hop_bits,two_hop_bits,omniscient_bits,rho1,rho2\n");
    for p in points {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{}",
            format_significant(p.snr_db, SIG),
            format_significant(p.one_hop, SIG),
            format_significant(p.two_hop, SIG),
            format_significant(p.omniscient, SIG),
            format_significant(p.rho1(), SIG),
            format_significant(p.rho2(), SIG)
        );
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::uniform_line_config;

    #[test]
    fn scheme_parsing() {
        assert_eq!("2".parse::<SchemeChoice>().unwrap(), SchemeChoice::Hops(2));
        assert_eq!(
            "k=1".parse::<SchemeChoice>().unwrap(),
            SchemeChoice::Hops(1)
        );
        assert_eq!(
            "omni".parse::<SchemeChoice>().unwrap(),
            SchemeChoice::Omniscient
        );
        assert_eq!(
            "k=omniscient".parse::<SchemeChoice>().unwrap(),
            SchemeChoice::Omniscient
        );
        assert!("0".parse::<SchemeChoice>().is_err());
        assert!("x".parse::<SchemeChoice>().is_err());
        assert_eq!(parse_schemes("1,2,omni").unwrap().len(), 3);
        assert!(parse_schemes("").is_err());
        assert!(parse_schemes(" , ").is_err());
    }

    #[test]
    fn grid_sizes() {
        assert_eq!(snr_grid(-10.0, 20.0, 1.0).unwrap().len(), 31);
        assert_eq!(snr_grid(0.0, 0.0, 1.0).unwrap(), vec![0.0]);
        assert_eq!(snr_grid(0.0, 1.0, 0.1).unwrap().len(), 11);
        assert!(snr_grid(1.0, 0.0, 1.0).is_err());
        assert!(snr_grid(0.0, 1.0, 0.0).is_err());
    }

    #[test]
    fn significant_digits() {
        assert_eq!(format_significant(0.5, 12), "0.500000000000");
        assert_eq!(format_significant(-10.0, 12), "-10.0000000000");
        assert_eq!(format_significant(0.0, 12), "0.00000000000");
        assert_eq!(format_significant(123.456, 4), "123.5");
        assert_eq!(format_significant(0.00123456, 3), "0.00123");
    }

    #[test]
    fn sweep_rows_and_csv() {
        let c = uniform_line_config(4, 1.0, 1.0, 1.0, 2.0).unwrap();
        let snrs = snr_grid(-2.0, 2.0, 2.0).unwrap();
        let schemes = parse_schemes("omni,1,2").unwrap();
        let rows = rate_sweep(&c, &snrs, &schemes, &OptimizerOptions::default()).unwrap();
        assert_eq!(rows.len(), 9);
        assert_eq!(rows[0].scheme, SchemeChoice::Omniscient);
        assert_eq!(rows[3].snr_db, 0.0);
        let csv = sweep_csv(&rows);
        assert_eq!(csv.lines().count(), 10);
        assert!(csv.starts_with("snr_db,scheme,end_to_end_bits,bottleneck_node,converged_flag\n"));
        let again =
            sweep_csv(&rate_sweep(&c, &snrs, &schemes, &OptimizerOptions::default()).unwrap());
        assert_eq!(csv, again);
    }

    #[test]
    fn sweep_rejects_bad_schemes() {
        let c = uniform_line_config(4, 1.0, 1.0, 1.0, 2.0).unwrap();
        let opts = OptimizerOptions::default();
        assert!(rate_sweep(&c, &[0.0], &[], &opts).is_err());
        assert!(rate_sweep(&c, &[0.0], &[SchemeChoice::Hops(4)], &opts).is_err());
    }
}
