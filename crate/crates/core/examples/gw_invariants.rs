//! Multiple-cover Gromov-Witten invariants `N_d` of the local chart for a few orders.

use orbiconifold::local::{gw_invariant, validate_model, Side};

fn main() -> orbiconifold::Result<()> {
    for (r, a) in [(1, 0), (2, 1), (3, 1), (5, 2)] {
        let model = validate_model(r, a, Side::S)?;
        let row: Vec<String> = (1..=12)
            .map(|d| gw_invariant(&model, d).map(|n| n.to_string()))
            .collect::<orbiconifold::Result<_>>()?;
        println!("r = {r}, a = {a}: {}", row.join(" "));
    }
    Ok(())
}
