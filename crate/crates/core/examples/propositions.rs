//! Sufficient conditions of the named propositions, evaluated on a grid and
//! compared with the order certificates they are meant to imply.

use tterel::generators::Generator;
use tterel::orders::{
    check_order, compared_lifetimes, evaluate_proposition, Grid, PropositionId, PropositionInput,
};
use tterel::structure::{BuiltinStructure, Structure};
use tterel::tte::{AgingFunction, TteModel};

fn main() -> tterel::Result<()> {
    let aircraft = Structure::builtin(BuiltinStructure::Aircraft4, 4)?;
    let r = AgingFunction::linear(1.0)?;
    let a = TteModel::identical(Generator::clayton(1.0, 1.0)?, r.clone(), aircraft.clone());
    let b = TteModel::identical(Generator::clayton(1.0, 3.0)?, r, aircraft);

    let id = PropositionId::CoherentCommonR;
    let input = PropositionInput::pair(&a, &b);
    let (la, lb) = compared_lifetimes(id, &input)?;
    let grid = Grid::auto_for(&[la.as_ref(), lb.as_ref()], 1024)?;
    let report = evaluate_proposition(id, &input, &grid)?;

    println!("{id}");
    for c in &report.subconditions {
        println!("  {:<40} {}", c.name, c.holds);
    }
    for part in &report.parts {
        let direct = check_order(part.order, la.as_ref(), lb.as_ref(), &grid)?;
        println!(
            "  {:<4} {:<16} conditions {:<5} certificate {:?}",
            part.name, part.claim, part.holds, direct.verdict
        );
    }
    Ok(())
}
