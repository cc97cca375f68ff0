//! Iterative QCC on a bundled FCIDUMP (H2 by default), compared with the
//! exact energy.

use std::path::PathBuf;

use qcc_ilcap::chemio::{jw_transform, read_fcidump};
use qcc_ilcap::oracle::sector_ground_energy;
use qcc_ilcap::qcc::{run_iqcc, IqccConfig, IqccState};
use qcc_ilcap::screen::GradientRanking;

fn main() -> qcc_ilcap::Result<()> {
    let file = std::env::args().nth(1).unwrap_or_else(|| "h2_sto3g_r1.4.fcidump".into());
    let data = read_fcidump(&PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data").join(&file))?;
    let h = jw_transform(&data)?;
    let exact = sector_ground_energy(&h, data.n_elec)?;

    let state = IqccState::new(h, data.reference_state()?, 1e-8)?;
    let config = IqccConfig {
        generators: 2,
        ..IqccConfig::default()
    };
    println!("{file}: E_exact = {exact:.10}");
    println!("iter  0  E = {:.10}", state.energy());
    let done = run_iqcc(state, &GradientRanking, &config, 10, 1e-10, |s| {
        println!(
            "iter {:>2}  E = {:.10}  error {:.2e}  {} terms",
            s.iteration,
            s.energy(),
            s.energy() - exact,
            s.hamiltonian.len()
        );
        Ok(())
    })?;
    println!("converged: {}", done.converged);
    Ok(())
}
