//! Type-1 error and power of the four tests on simulated trivariate data.
//!
//! cargo run --release --example simulation -- [sims] [replicates]

use pdcor::simbench::{run_power, run_type1, write_csv, Generator, SimConfig};

fn main() -> pdcor::Result<()> {
    let mut args = std::env::args().skip(1).map(|a| a.parse::<usize>().expect("integer argument"));
    let sims = args.next().unwrap_or(1000);
    let replicates = args.next().unwrap_or(199);
    let base = SimConfig {
        sims,
        replicates,
        ..SimConfig::default()
    };

    let mut rows = Vec::new();
    for generator in [Generator::NormalIndep, Generator::LognormalIndep] {
        for n in [10, 20, 30] {
            rows.extend(run_type1(&SimConfig { n, generator, ..base.clone() })?);
        }
    }
    for generator in [Generator::NormalCorr, Generator::LognormalCorr] {
        let cfg = SimConfig {
            generator,
            correlations: [0.5, 0.5, 0.5],
            alphas: vec![0.10],
            ..base.clone()
        };
        rows.extend(run_power(&cfg, &[20, 50])?);
    }
    write_csv(&rows, std::io::stdout())
}
