//! Samples the Gieseking deformation curve with solver cross-checks and
//! prints the CSV table.
//!
//! ```bash
//! cargo run --release --example sweep_csv -- 21
//! ```

use cuspforge::cli::{gieseking_sweep, write_csv};

fn main() -> cuspforge::Result<()> {
    let n = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(21);
    let rows = gieseking_sweep(n)?;
    write_csv(&rows, std::io::stdout().lock())?;
    let worst = rows.iter().map(|r| r.crosscheck).fold(0.0, f64::max);
    eprintln!("worst cross-check {worst:.2e}");
    Ok(())
}
