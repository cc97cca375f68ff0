//! Products, commutation and conjugation of Pauli words.

use qcc_ilcap::pauli::{commutes, multiply, parse_word};
use qcc_ilcap::{PauliSum, ReferenceState};

fn main() -> qcc_ilcap::Result<()> {
    let n = 3;
    let w = |s: &str| parse_word(s, n).expect("valid word");

    let (p, phase) = multiply(&w("X0 Z1"), &w("Y0 Y2"))?;
    println!("(X0 Z1)(Y0 Y2) = {} * {p}", phase.to_complex());
    println!("X0 X1 commutes with Z0 Z1: {}", commutes(&w("X0 X1"), &w("Z0 Z1"))?);

    let h = PauliSum::from_terms(n, [(w("Z0"), 1.0), (w("Z1 Z2"), -0.5), (w("X0 X1"), 0.2)])?;
    let dressed = h.conjugate_by_word(&w("Y0 X1"), 0.3)?;
    print!("exp(i t G/2) H exp(-i t G/2) =\n{}", dressed.to_text());

    let state = ReferenceState::new(n, 1)?;
    println!("<0|H|0> = {}, after dressing {}", h.expectation(&state)?, dressed.expectation(&state)?);
    Ok(())
}
