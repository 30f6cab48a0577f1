//! Survival, density and hazard of a system with dependent components,
//! evaluated both through the union terms and through the identically
//! distributed shortcut `phi_W(R(t))`.

use tterel::generators::Generator;
use tterel::structure::{BuiltinStructure, Structure};
use tterel::tte::{AgingFunction, Lifetime, Target, TteModel};

fn main() -> tterel::Result<()> {
    let model = TteModel::identical(
        Generator::clayton(1.0, 1.0)?,
        AgingFunction::linear(1.0)?,
        Structure::builtin(BuiltinStructure::Aircraft4, 4)?,
    );
    let system = model.system()?;
    let collapsed = model.id_lifetime()?;

    println!(
        "{:>6} {:>12} {:>12} {:>12} {:>10}",
        "t", "S(t)", "f(t)", "h(t)", "|diff|"
    );
    for t in [0.1, 0.5, 1.0, 2.0, 5.0] {
        let s = system.survival(t);
        println!(
            "{t:>6} {s:>12.8} {:>12.8} {:>12.8} {:>10.1e}",
            system.density(t),
            system.hazard(t),
            (s - collapsed.survival(t)).abs()
        );
    }

    let mixed = TteModel::new(
        Generator::gumbel_hougaard(2.0)?,
        vec![
            AgingFunction::linear(0.5)?,
            AgingFunction::exp_minus_one(1.0, 2.0)?,
            AgingFunction::power(1.0, 2.0)?,
        ],
        Structure::builtin(BuiltinStructure::KOutOfN(2), 3)?,
    )?;
    for target in ["system", "component:2", "series:1,3", "parallel"] {
        let t: Target = target.parse()?;
        let l = mixed.lifetime(&t)?;
        println!("{target:<12} S(1) = {:.6}", l.survival(1.0));
    }
    Ok(())
}
