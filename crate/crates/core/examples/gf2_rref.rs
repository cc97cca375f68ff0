//! Gauss-Jordan elimination over GF(2) with the recorded row transform.

use qcc_ilcap::gf2::{classify_columns, rref_with_transform, BinaryMatrix};

fn main() -> qcc_ilcap::Result<()> {
    let m = BinaryMatrix::from_u8_rows(&[
        &[1, 0, 1, 0, 1, 1],
        &[0, 1, 1, 1, 1, 0],
        &[1, 0, 1, 1, 1, 1],
        &[0, 1, 0, 1, 1, 1],
    ])?;
    let r = rref_with_transform(&m);
    println!("M =\n{m}\nR =\n{}\nR M =\n{}", r.transform, r.rref);
    assert_eq!(r.transform.mul(&m)?, r.rref);

    let classes = classify_columns(&r);
    println!("rank {}", r.pivot_rows.len());
    println!("primary (column, row): {:?}", classes.primary);
    println!("secondary (column, partner): {:?}", classes.secondary);
    println!("unusable: {:?}", classes.unusable);
    Ok(())
}
