// Closed-form node rates against the log-det mutual-information oracle.

use myopic_relay::channel::uniform_line_config;
use myopic_relay::oracle::{build_system, Label};
use myopic_relay::rates::myopic_node_rate;
use myopic_relay::scheme::{PowerAllocation, SchemeSpec};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let config = uniform_line_config(5, 1.0, 1.0, 1.0, 2.0)?;
    let alloc = PowerAllocation::fixed_half(5, 2)?;
    let sys = build_system(&config, &alloc, &SchemeSpec::myopic(5, 2)?)?;

    // Receiver 4 decodes U2, U3 knowing its own streams U4 and beyond.
    let mi = sys.conditional_mi(
        &[Label::Stream(2), Label::Stream(3)],
        &[Label::Received(4)],
        &[Label::Stream(4)],
    )?;
    let closed = myopic_node_rate(&config, &alloc, 2, 4)?;
    println!("I(U2,U3; Y4 | U4) = {:.12} bits", mi.bits);
    println!("closed form R_4   = {closed:.12} bits");
    println!("difference        = {:.1e}", (mi.bits - closed).abs());
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
