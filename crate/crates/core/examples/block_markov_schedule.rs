// Which letters each node sends per block, and when each message is decoded.

use myopic_relay::pipeline::{build_schedule, impact_of_change, throughput_factor, view_set};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let trace = build_schedule(5, 2, 3)?;
    print!("{trace}");
    trace.check_invariants()?;
    let (num, den) = throughput_factor(3, 5)?;
    println!("throughput {num}/{den}");
    println!("node 3 sees {:?}", view_set(3, 2, 5)?);
    println!("changing node 4 touches {:?}", impact_of_change(4, 2, 5)?);
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
