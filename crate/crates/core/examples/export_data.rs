//! Writes the built-in triangulations as JSON documents.
//!
//! ```bash
//! cargo run --example export_data -- data
//! ```

use cuspforge::gieseking::{figure_eight_cover, gieseking_triangulation};

fn main() -> cuspforge::Result<()> {
    let dir = std::env::args().nth(1).unwrap_or_else(|| "data".into());
    std::fs::create_dir_all(&dir)?;
    let gieseking = gieseking_triangulation();
    let cover = figure_eight_cover().into_triangulation();
    for (file, tri) in [("gieseking.json", &gieseking), ("figure_eight.json", &cover)] {
        let path = std::path::Path::new(&dir).join(file);
        std::fs::write(&path, tri.to_json())?;
        println!("{}: {} tetrahedra -> {}", tri.name(), tri.tetrahedra_count(), path.display());
    }
    Ok(())
}
