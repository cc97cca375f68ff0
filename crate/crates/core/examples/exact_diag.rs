//! Dense and Lanczos ground states of a transverse-field Ising chain.

use qcc_ilcap::oracle::{ground_state_dense, ground_state_lanczos, LanczosOptions};
use qcc_ilcap::pauli::Pauli;
use qcc_ilcap::{PauliSum, PauliWord};

fn ising_chain(n: usize, field: f64) -> qcc_ilcap::Result<PauliSum> {
    let mut terms = Vec::new();
    for q in 0..n {
        terms.push((PauliWord::single(n, q, Pauli::X)?, -field));
        let zz = PauliWord::from_factors(n, &[(q, Pauli::Z), ((q + 1) % n, Pauli::Z)])?;
        terms.push((zz, -1.0));
    }
    PauliSum::from_terms(n, terms)
}

fn main() -> qcc_ilcap::Result<()> {
    for n in [6, 8, 10, 12] {
        let h = ising_chain(n, 1.0)?;
        let (lanczos, _) = ground_state_lanczos(&h, &LanczosOptions::default())?;
        let dense = if n <= 10 { Some(ground_state_dense(&h)?.0) } else { None };
        match dense {
            Some(d) => println!("n = {n:>2}  Lanczos {lanczos:.10}  dense {d:.10}"),
            None => println!("n = {n:>2}  Lanczos {lanczos:.10}"),
        }
    }
    Ok(())
}
