//! Required airtime per MCS for a few demands, and how an overloaded
//! neighborhood splits the channel.

use apsel::airtime::{exchange_duration, required_airtime, served_fraction, station_reward, Demand, MacParameters};
use apsel::radio::RatePolicy;

fn main() -> apsel::Result<()> {
    let mac = MacParameters::default();
    let table = RatePolicy::default();

    println!("{:>8} {:>10} {:>8} {:>8} {:>8}", "bits/sym", "exch_us", "u@2M", "u@4M", "u@8M");
    for entry in &table.entries {
        let r = entry.rates();
        let t = exchange_duration(r.bits_per_symbol, r.legacy_bits_per_symbol, &mac)?;
        let u: Vec<f64> = [2e6, 4e6, 8e6]
            .iter()
            .map(|&w| required_airtime(&Demand::new(w, mac.frame_bits)?, r.bits_per_symbol, r.legacy_bits_per_symbol, &mac))
            .collect::<apsel::Result<_>>()?;
        println!("{:>8} {:>10.0} {:>8.4} {:>8.4} {:>8.4}", r.bits_per_symbol, t * 1e6, u[0], u[1], u[2]);
    }

    let load = [0.5, 0.3, 0.4];
    println!("\nneighborhood airtime {:?}, total {:.1}", load, load.iter().sum::<f64>());
    for &u in &load {
        let zeta = station_reward(u, &load);
        println!("  u={u:.2} gets {zeta:.4} ({:.1}% of demand)", 100.0 * served_fraction(zeta, u));
    }
    Ok(())
}
