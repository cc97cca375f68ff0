//! Anti-commuting generators for five X-words on four qubits.

use qcc_ilcap::acset::{build_anticommuting_set, XWord};
use qcc_ilcap::gf2::{rref_with_transform, BinaryMatrix};
use qcc_ilcap::BitVector;

fn main() -> qcc_ilcap::Result<()> {
    let n = 4;
    let masks: Vec<BitVector> = [&[0, 2][..], &[1, 3], &[0, 1, 2], &[1, 2, 3], &[0, 1, 2, 3]]
        .iter()
        .map(|idx| BitVector::from_indices(n, idx.iter().copied()))
        .collect();

    let reduced = rref_with_transform(&BinaryMatrix::from_columns(n, &masks)?);
    println!("M_rref =\n{}", reduced.rref);

    let set = build_anticommuting_set(&XWord::from_masks(masks), n)?;
    for ((g, kind), src) in set.generators.iter().zip(&set.kinds).zip(&set.x_sources) {
        println!("x-word {src}  {kind:<9}  {g}");
    }
    assert!(set.is_valid());
    Ok(())
}
