//! Minimal path sets, signed union terms and the cardinality coefficients
//! of a few coherent structures.

use tterel::structure::{BuiltinStructure, Structure};

fn main() -> tterel::Result<()> {
    let bridge = Structure::new(5, &[vec![1, 4], vec![2, 5], vec![1, 3, 5], vec![2, 3, 4]])?;
    let cases = [
        (
            "series of 3",
            Structure::builtin(BuiltinStructure::Series, 3)?,
        ),
        (
            "parallel of 3",
            Structure::builtin(BuiltinStructure::Parallel, 3)?,
        ),
        (
            "2-out-of-3",
            Structure::builtin(BuiltinStructure::KOutOfN(2), 3)?,
        ),
        (
            "aircraft",
            Structure::builtin(BuiltinStructure::Aircraft4, 4)?,
        ),
        ("bridge", bridge),
    ];

    for (name, s) in &cases {
        println!("{name}: paths {:?}", s.path_sets_one_based());
        for term in s.signed_union_terms()? {
            println!("  {:+} x W(sum over {})", term.coefficient, term.indices);
        }
        let c = s.cardinality_coefficients()?;
        println!("  coefficients by |U|: {c:?}");
        let x: Vec<f64> = (1..=s.n()).map(|i| i as f64).collect();
        println!("  lifetime at x = {x:?}: {}", s.lifetime(&x));
    }
    Ok(())
}
