//! Analytic survival against the frailty Monte Carlo oracle.

use tterel::generators::Generator;
use tterel::mc_oracle::{validate, DEFAULT_TIMES};
use tterel::structure::{BuiltinStructure, Structure};
use tterel::tte::{AgingFunction, Target, TteModel};

fn main() -> tterel::Result<()> {
    let seed = 20240917;
    for g in [
        Generator::independence(),
        Generator::clayton(2.0, 1.0)?,
        Generator::gumbel_hougaard(1.5)?,
    ] {
        let model = TteModel::identical(
            g,
            AgingFunction::exp_minus_one(1.0, 1.0)?,
            Structure::builtin(BuiltinStructure::KOutOfN(2), 3)?,
        );
        let report = validate(&model, &Target::System, &DEFAULT_TIMES, 100_000, seed)?;
        println!(
            "{} (within |z| <= {}: {})",
            g.family(),
            report.threshold,
            report.all_within
        );
        for p in &report.points {
            println!(
                "  t = {:<5} analytic {:.5} empirical {:.5} z {:+.2}",
                p.t, p.analytic, p.empirical, p.z
            );
        }
    }

    let frank = TteModel::identical(
        Generator::frank(-2.0)?,
        AgingFunction::linear(1.0)?,
        Structure::builtin(BuiltinStructure::Series, 2)?,
    );
    if let Err(e) = validate(&frank, &Target::System, &DEFAULT_TIMES, 1000, seed) {
        println!("frank: {e}");
    }
    Ok(())
}
