//! Builds the clustered 4x4-grid deployment and prints what each STA sees.
//! Pass `--json` to dump the whole scenario instead.

use apsel::experiments::presets::CLUSTERED_TOY_STAS;
use apsel::ScenarioSpec;

fn main() -> apsel::Result<()> {
    let scenario = ScenarioSpec::toy(CLUSTERED_TOY_STAS).build(7)?;
    if std::env::args().any(|a| a == "--json") {
        println!("{}", scenario.to_json()?);
        return Ok(());
    }
    for (j, ap) in scenario.aps.iter().enumerate() {
        println!(
            "AP {j:>2} at ({:>5.1}, {:>5.1}) ch {} co-channel neighbors {:?}",
            ap.position.x, ap.position.y, ap.channel, scenario.ap_neighbors[j]
        );
    }
    for (i, sta) in scenario.stas.iter().enumerate().take(12) {
        let best = scenario.detected[i]
            .iter()
            .map(|&j| (j, scenario.airtime[i][j].unwrap()))
            .min_by(|a, b| a.1.total_cmp(&b.1));
        println!(
            "STA {i:>2} at ({:>5.1}, {:>5.1}) detects {:>2} APs, cheapest {:?}",
            sta.position.x,
            sta.position.y,
            scenario.detected[i].len(),
            best
        );
    }
    Ok(())
}
