// Max-min power splits and relay ordering search.

use myopic_relay::channel::ChannelConfig;
use myopic_relay::optimizer::{
    optimize_allocation, optimize_ordering, OptimizerOptions, OrderingSearch,
};
use myopic_relay::scheme::SchemeSpec;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let config = ChannelConfig::new(
        vec![0.0, 0.4, 1.1, 1.5, 2.5],
        vec![1.0, 2.0, 1.0, 0.5],
        vec![1.0; 4],
        1.0,
        2.0,
    )?;
    let opts = OptimizerOptions::default();
    let best = optimize_allocation(&config, &SchemeSpec::myopic(5, 2)?, &opts)?;
    print!("{}", best.report);
    println!("converged: {}, sweeps: {}", best.converged, best.sweeps);

    let search = optimize_ordering(
        &config,
        &SchemeSpec::myopic(5, 2)?,
        &opts,
        OrderingSearch::Exhaustive,
    )?;
    for (ordering, rate) in &search.candidates {
        println!("ordering {ordering}: {rate:.6} bits");
    }
    println!("best ordering {}", search.ordering);
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
