//! Grid certificates for the ST, HR, RHR and LR orders, plus the audit of
//! the implications between them.

use tterel::generators::Generator;
use tterel::orders::{check_orders, implication_audit, Grid, Order};
use tterel::structure::{BuiltinStructure, Structure};
use tterel::tte::{AgingFunction, TteModel};

fn main() -> tterel::Result<()> {
    let parallel = Structure::builtin(BuiltinStructure::Parallel, 2)?;
    let w = Generator::clayton(1.0, 1.0)?;
    let weak = TteModel::identical(w, AgingFunction::linear(2.0)?, parallel.clone());
    let strong = TteModel::identical(w, AgingFunction::linear(1.0)?, parallel);
    let (a, b) = (weak.system()?, strong.system()?);

    let grid = Grid::auto_for(&[&a, &b], 1024)?;
    println!("grid: {} points up to {:.3e}", grid.len(), grid.t_max());
    let reports = check_orders(&Order::ALL, &a, &b, &grid)?;
    for r in &reports {
        println!(
            "{:?}: {:?} ({} witnesses)",
            r.order,
            r.verdict,
            r.witnesses.len()
        );
    }
    let audit = implication_audit(&reports);
    println!("audit consistent: {}", audit.consistent);

    let reversed = check_orders(&[Order::ST], &b, &a, &grid)?;
    if let Some(w) = reversed[0].witnesses.first() {
        println!(
            "reverse ST fails at t = {:.4}: {:.6} > {:.6}",
            w.t0, w.f0, w.f1
        );
    }
    Ok(())
}
