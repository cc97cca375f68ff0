//! Ising decomposition of the H2 Hamiltonian and gradient ranking of its
//! X-word sectors.

use std::path::PathBuf;

use qcc_ilcap::acset::canonical_generator;
use qcc_ilcap::chemio::{jw_transform, read_fcidump};
use qcc_ilcap::screen::{gradient_single, gradients, ising_decompose};

fn main() -> qcc_ilcap::Result<()> {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data/h2_sto3g_r1.4.fcidump");
    let data = read_fcidump(&path)?;
    let h = jw_transform(&data)?;
    let state = data.reference_state()?;
    println!("{} qubits, {} terms, <0|H|0> = {:.10}", h.n(), h.len(), h.expectation(&state)?);

    let d = ising_decompose(&h);
    println!("diagonal part: {} terms, {} X-sectors", d.diagonal.len(), d.sectors.len());
    for w in gradients(&d, &state)?.entries {
        let g = canonical_generator(&w.mask)?;
        println!(
            "{:<16} weight {:.6e}  gradient of {g}: {:.6e}",
            w.word().to_string(),
            w.weight,
            gradient_single(&h, &g, &state)?
        );
    }
    Ok(())
}
