// Where the received power goes under one-hop, two-hop and omniscient coding.

use myopic_relay::channel::uniform_line_config;
use myopic_relay::rates::{end_to_end_rate, myopic_power_split};
use myopic_relay::scheme::{PowerAllocation, SchemeSpec};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let n = 6;
    let config = uniform_line_config(n, 1.0, 1.0, 1.0, 2.0)?;
    for k in [1, 2, n - 1] {
        let alloc = PowerAllocation::fixed_half(n, k)?;
        let report = end_to_end_rate(&config, &alloc, &SchemeSpec::myopic(n, k)?)?;
        println!(
            "{}: end-to-end {:.6} bits at node {}",
            report.scheme, report.end_to_end, report.bottleneck
        );
        for t in 2..=n {
            let s = myopic_power_split(&config, &alloc, k, t)?;
            println!(
                "  node {t}: signal {:.4}  interference {:.4}  known {:.4}",
                s.signal, s.interference, s.known
            );
        }
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
