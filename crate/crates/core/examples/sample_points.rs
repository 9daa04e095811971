//! Writes seeded sample points of `Q_r` and of a leaf `W_{r, lambda}` as CSV to stdout.

use orbiconifold::geometry::{sample_qr, sample_w_leaf, write_csv, SampleConfig};

fn main() -> orbiconifold::Result<()> {
    let cfg = SampleConfig::new(1, 5);
    let stdout = std::io::stdout();
    println!("# Q_2");
    write_csv(&sample_qr(2, &cfg)?, stdout.lock())?;
    println!("# W_(2, 0.5)");
    write_csv(&sample_w_leaf(2, 0.5, &cfg)?, stdout.lock())?;
    Ok(())
}
