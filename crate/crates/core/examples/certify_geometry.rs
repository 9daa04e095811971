//! Samples the real variety `Q_r` and certifies its defining properties numerically.

use orbiconifold::geometry::{certify, SampleConfig};

fn main() -> orbiconifold::Result<()> {
    for (r, a) in [(1, 0), (2, 1), (3, 2)] {
        let report = certify(r, a, &SampleConfig::new(2024, 500))?;
        println!("r = {r}, a = {a}: all pass = {}", report.all_pass);
        for c in &report.checks {
            println!(
                "  {:<28} {}/{}  worst {:.3e} ({} {:e})",
                c.name, c.passed, c.total, c.worst, c.bound, c.tolerance
            );
        }
    }
    Ok(())
}
