//! Quantum-corrected three-point functions on both sides of the flop.

use orbiconifold::local::{quantum_three_point, validate_model, CRClass, Side};

fn main() -> orbiconifold::Result<()> {
    for side in [Side::S, Side::Sf] {
        let model = validate_model(2, 1, side)?;
        let h = CRClass::parse(&model, "H")?;
        let tp = quantum_three_point(&model, [&h, &h, &h])?;
        println!("{model}: Psi(H, H, H) = {} + {}", tp.classical, tp.quantum);
    }
    let model = validate_model(3, 1, Side::S)?;
    let p1 = CRClass::parse(&model, "p_1")?;
    let p2 = CRClass::parse(&model, "p_2")?;
    let one = CRClass::parse(&model, "1")?;
    let tp = quantum_three_point(&model, [&p1, &p2, &one])?;
    println!("{model}: Psi(p_1, p_2, 1) = {}", tp.classical);
    Ok(())
}
