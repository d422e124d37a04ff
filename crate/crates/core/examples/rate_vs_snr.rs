// Optimized rates of one-hop, two-hop and omniscient coding against SNR.

use myopic_relay::channel::uniform_line_config;
use myopic_relay::optimizer::OptimizerOptions;
use myopic_relay::sweep::{rho_csv, rho_curve, snr_grid};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    for n in [5, 6] {
        let template = uniform_line_config(n, 1.0, 1.0, 1.0, 2.0)?;
        let points = rho_curve(
            &template,
            &snr_grid(-10.0, 10.0, 5.0)?,
            &OptimizerOptions::default(),
        )?;
        println!("T = {n}");
        print!("{}", rho_csv(&points));
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
