//! Checks that the local flop `W^sf_r -> W^s_r` preserves every basis three-point function.

use orbiconifold::flop::local_flop_check;
use orbiconifold::local::valid_weights;

fn main() -> orbiconifold::Result<()> {
    for r in 1..=5 {
        for a in valid_weights(r) {
            let report = local_flop_check(r, a)?;
            let failed = report.triples.iter().filter(|t| !t.pass).count();
            println!(
                "r = {r}, a = {a}: {} triples, {failed} failing",
                report.triples.len()
            );
        }
    }
    Ok(())
}
