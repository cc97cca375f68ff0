//! Spin penalty (mu/2)(S^2 - S_z) on stretched H2: the triplet levels of
//! the two-electron block move up with mu while the singlet ground state
//! stays put.

use std::path::PathBuf;

use nalgebra::DMatrix;
use num_complex::Complex64;
use qcc_ilcap::chemio::{jw_transform, read_fcidump, spin_penalty, spin_squared};
use qcc_ilcap::oracle::to_dense;

/// Rows/columns of `m` whose basis index has `n_e` set bits.
fn block(m: &DMatrix<Complex64>, n_e: u32) -> DMatrix<Complex64> {
    let idx: Vec<usize> = (0..m.nrows()).filter(|b| b.count_ones() == n_e).collect();
    DMatrix::from_fn(idx.len(), idx.len(), |i, j| m[(idx[i], idx[j])])
}

fn main() -> qcc_ilcap::Result<()> {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data/h2_sto3g_r2.0.fcidump");
    let data = read_fcidump(&path)?;
    let h = jw_transform(&data)?;
    let n_e = data.n_elec as u32;
    let s2 = block(&to_dense(&spin_squared(data.n_orb)?)?, n_e);

    for mu in [0.0, 0.5, 2.0] {
        let penalty = spin_penalty(data.n_orb, mu)?;
        let reference = penalty.operator.expectation(&data.reference_state()?)?;
        let eig = block(&to_dense(&penalty.apply(&h)?)?, n_e).symmetric_eigen();
        let mut levels: Vec<(f64, f64)> = (0..eig.eigenvalues.len())
            .map(|k| {
                let v = eig.eigenvectors.column(k);
                (eig.eigenvalues[k], (v.adjoint() * &s2 * v)[(0, 0)].re)
            })
            .collect();
        levels.sort_by(|a, b| a.0.total_cmp(&b.0));
        let shown: Vec<String> = levels[..4]
            .iter()
            .map(|(e, s)| format!("{e:.6} (S^2 {s:.0})"))
            .collect();
        println!("mu = {mu:.1}  <0|W|0> = {reference:.0e}  lowest: {}", shown.join(", "));
    }
    Ok(())
}
