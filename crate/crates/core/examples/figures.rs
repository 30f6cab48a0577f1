//! Writes every reference figure as CSV into a directory (default `figures`).

use std::path::PathBuf;

use tterel::figures::{figure, write_figure, FigureName};

fn main() -> tterel::Result<()> {
    let dir = PathBuf::from(std::env::args().nth(1).unwrap_or_else(|| "figures".into()));
    std::fs::create_dir_all(&dir)?;
    for name in FigureName::ALL {
        println!("{name}: {}", name.description());
        for curve in figure(name)? {
            let last = curve.rows.last().expect("curves are non-empty");
            println!(
                "  {:<22} {} rows, last {:?}",
                curve.name,
                curve.rows.len(),
                last
            );
        }
        for path in write_figure(name, &dir)? {
            println!("  wrote {}", path.display());
        }
    }
    Ok(())
}
