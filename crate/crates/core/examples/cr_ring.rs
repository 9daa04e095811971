//! Chen-Ruan basis, degrees, and product table of the local chart `W^s_3`.

use orbiconifold::algebra::format_rational;
use orbiconifold::local::{cr_basis, product_table, validate_model, Side};

fn main() -> orbiconifold::Result<()> {
    let model = validate_model(3, 1, Side::S)?;
    println!("{model}");
    for (label, degree) in cr_basis(&model) {
        println!("  {label:>4}  degree {}", format_rational(&degree));
    }
    for (x, y, product) in product_table(&model) {
        match product {
            Some(p) => println!("{x} * {y} = {p}"),
            None => println!("{x} * {y} = (needs global pairing data)"),
        }
    }
    Ok(())
}
