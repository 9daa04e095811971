//! Enumerates the small resolutions of a multi-singularity conifold that carry a
//! symplectic structure. Pass a config path, or run on the bundled example.

use orbiconifold::resolution::{resolve, ConifoldConfig, DEFAULT_CAP};

fn main() -> orbiconifold::Result<()> {
    let path = std::env::args()
        .nth(1)
        .unwrap_or_else(|| concat!(env!("CARGO_MANIFEST_DIR"), "/examples/data/conifold.json").into());
    let text = std::fs::read_to_string(&path)
        .map_err(|e| orbiconifold::Error::Config(format!("{path}: {e}")))?;
    let config = ConifoldConfig::from_json(&text)?;
    let report = resolve(&config, DEFAULT_CAP)?;
    println!("{}", report.summary());
    Ok(())
}
