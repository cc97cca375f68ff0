//! ILCAP estimates with Brillouin-Wigner and Epstein-Nesbet corrections,
//! before and after two iQCC iterations.

use std::path::PathBuf;

use qcc_ilcap::cli::{exact_energy, load_problem, run_scheme, RunConfig, Scheme};

fn main() -> qcc_ilcap::Result<()> {
    let file = std::env::args().nth(1).unwrap_or_else(|| "h4_chain_sto3g_r1.8.fcidump".into());
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data").join(&file);
    let problem = load_problem(&path, None, 0.0)?;
    let exact = exact_energy(&problem)?;
    println!("{file}: E_exact = {exact:.10}");

    for scheme in [Scheme::IlcapPre, Scheme::IlcapPost] {
        let mut cfg = RunConfig {
            scheme,
            ..RunConfig::default()
        };
        cfg.iqcc.iterations = 2;
        let r = run_scheme(&problem, &cfg);
        for (label, e) in &r.estimates {
            println!("{label:<20} {e:.10}  error {:+.2e}", e - exact);
        }
        if let Some(err) = r.error {
            println!("{scheme} stopped: {err}");
        }
    }
    Ok(())
}
