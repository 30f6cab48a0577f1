//! Usual residual life `T_t` against the system-level residual `T*_t`.

use tterel::generators::Generator;
use tterel::residual::{compare_residuals, residual_series, ResidualKind};
use tterel::structure::Structure;
use tterel::tte::{AgingFunction, Lifetime, Target, TteModel};

fn main() -> tterel::Result<()> {
    let aging = vec![
        AgingFunction::exp_minus_one(1.0, 10.0)?,
        AgingFunction::exp_minus_one(1.0, 5.0)?,
        AgingFunction::linear(1.0)?,
    ];
    let series = Structure::new(3, &[vec![1, 2, 3]])?;
    let t = 1.0;

    for g in [
        Generator::gumbel_barnett(0.5)?,
        Generator::clayton(1.0, 1.0)?,
    ] {
        let model = TteModel::new(g, aging.clone(), series.clone())?;
        let usual = residual_series(&model, &[1, 2], t, ResidualKind::Usual)?;
        let star = residual_series(&model, &[1, 2], t, ResidualKind::SystemLevel)?;
        println!("{}", g.family());
        for x in [0.01, 0.05, 0.1, 0.2] {
            println!(
                "  x = {x:<5} T_t: {:.6}  T*_t: {:.6}",
                usual.survival(x),
                star.survival(x)
            );
        }
        let c = compare_residuals(&model, &Target::Series(vec![1, 2]), t, None)?;
        println!(
            "  prediction {:?}, T_t <=st T*_t {}, T*_t <=st T_t {}, agreement {}",
            c.prediction,
            c.usual_below_st(),
            c.usual_above_st(),
            c.agreement
        );
    }
    Ok(())
}
