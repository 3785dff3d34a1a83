//! Path loss, received power and the MCS picked at increasing distances.

use apsel::radio::{LinkBudget, PathLossParams, RatePolicy};

fn main() -> apsel::Result<()> {
    let params = PathLossParams::default();
    let rates = RatePolicy::default();
    println!("{:>8} {:>10} {:>10} {:>8} {:>8}", "dist_m", "loss_dB", "rx_dBm", "bits/sym", "ack");
    for d in [1.0, 5.0, 10.0, 20.0, 30.0, 40.0, 50.0, 60.0] {
        // worst-case shadowing on the right, none on the left
        for gs in [0.0, params.gs_max] {
            let link = LinkBudget::compute(d, 20.0, &params, gs, &rates)?;
            match link.rates {
                Some(r) => println!(
                    "{d:>8.1} {:>10.2} {:>10.2} {:>8} {:>8}",
                    link.path_loss, link.received_power, r.bits_per_symbol, r.legacy_bits_per_symbol
                ),
                None => println!("{d:>8.1} {:>10.2} {:>10.2} {:>8}", link.path_loss, link.received_power, "-"),
            }
        }
    }
    Ok(())
}
