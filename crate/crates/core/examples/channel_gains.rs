// Path-loss gains on a line of nodes and the SNR convention.

use myopic_relay::channel::{snr_db_to_power, uniform_line_config, ChannelConfig};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let line = uniform_line_config(5, 1.0, snr_db_to_power(0.0, 1.0), 1.0, 2.0)?;
    println!("uniform line, eta = {}:", line.eta());
    for t in 2..=line.node_count() {
        let gains: Vec<String> = (1..line.node_count())
            .filter(|&i| i != t)
            .map(|i| Ok(format!("g({i},{t})={:.4}", line.gain(i, t)?)))
            .collect::<Result<_, myopic_relay::error::Error>>()?;
        println!("  {}", gains.join("  "));
    }

    // A relay placed near the source, with a stronger path-loss exponent.
    let custom = ChannelConfig::new(
        vec![0.0, 0.3, 1.0],
        vec![2.0, 1.0],
        vec![1.0, 1.0],
        1.0,
        3.0,
    )?;
    println!(
        "custom: g(1,2) = {:.3}, g(2,3) = {:.3}",
        custom.gain(1, 2)?,
        custom.gain(2, 3)?
    );
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
