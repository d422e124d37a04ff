// Two-hop coding keeps a positive rate however long the line gets.

use myopic_relay::channel::uniform_line_config;
use myopic_relay::scaling::{
    asymptotic_rate_experiment, interference_bound_check, zeta, AllocationPolicy,
};
use myopic_relay::scheme::PowerAllocation;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let z = zeta(2.0)?;
    println!(
        "zeta(2) = {:.12} (+/- {:.1e}), 6 zeta(2) = {:.6}",
        z.value,
        z.error_bound,
        6.0 * z.value
    );

    let n = 100;
    let config = uniform_line_config(n, 1.0, 1.0, 1.0, 2.0)?;
    let bound = interference_bound_check(&config, &PowerAllocation::fixed_half(n, 2)?)?;
    println!(
        "T = {n}: worst P_int/P = {:.4}, bounds {:.4} and {:.4}",
        bound.worst_ratio(),
        bound.partial_bound,
        bound.limit_bound
    );

    for p in asymptotic_rate_experiment(
        &[5, 10, 20, 50, 100, 200],
        2.0,
        1.0,
        1.0,
        2,
        &AllocationPolicy::FixedHalf,
    )? {
        println!(
            "T = {:>3}: rate {:.6} bits (node {}), floor {:.6}",
            p.node_count, p.min_rate, p.bottleneck, p.floor
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
