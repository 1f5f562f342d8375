// Scratch probe: run every preset across seeds and print the stats.
use egress::engine::simulate;
use egress::metrics::aggregate;
use egress::presets;

fn main() {
    let seeds: Vec<u64> = (1..=30).collect();
    let t0 = std::time::Instant::now();
    for name in presets::PRESET_NAMES {
        let scenario = presets::preset(name).unwrap();
        let summaries: Vec<_> = seeds
            .iter()
            .map(|&s| simulate(&scenario, s, |_| {}).unwrap().summary)
            .collect();
        let stats = aggregate(&summaries).unwrap();
        println!(
            "{name}: cwa {:6.2}% cwo {:6.2}% evac {:?}s incomplete {} obde {:?}",
            stats.mean_cwa_pct,
            stats.mean_cwo_pct,
            stats.mean_evac_s.map(|v| (v * 10.0).round() / 10.0),
            stats.incomplete_runs,
            stats.obde_union,
        );
    }
    println!("total {:.1?} for 12 x {} runs", t0.elapsed(), seeds.len());
}
