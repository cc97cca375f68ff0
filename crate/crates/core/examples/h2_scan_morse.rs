//! Bond scan over the bundled H2 geometries and a Morse fit of the exact
//! curve.

use std::path::PathBuf;

use qcc_ilcap::cli::{csv_column, parse_scan_manifest, scan, RunConfig, Scheme};
use qcc_ilcap::morse::fit_morse;

const H2_REDUCED_MASS: f64 = 1.00782503223 / 2.0;

fn main() -> qcc_ilcap::Result<()> {
    let data = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data");
    let manifest = std::fs::read_to_string(data.join("h2_scan.txt")).expect("bundled manifest");
    let entries = parse_scan_manifest(&manifest, &data)?;

    let mut cfg = RunConfig {
        scheme: Scheme::IlcapPost,
        exact: true,
        ..RunConfig::default()
    };
    cfg.iqcc.iterations = 1;
    let csv = scan(&entries, &cfg)?;
    print!("{csv}");

    let fit = fit_morse(&csv_column(&csv, "E_exact")?, H2_REDUCED_MASS)?;
    println!(
        "Morse: D_e {:.5} Eh, r_e {:.4} bohr, a {:.4}/bohr, omega_e {:.0} cm^-1, omega_e x_e {:.1} cm^-1",
        fit.d_e, fit.r_e, fit.a, fit.omega_e, fit.omega_e_x_e
    );
    if fit.weak_d_e {
        println!("(five points near the minimum pin D_e only loosely)");
    }
    Ok(())
}
