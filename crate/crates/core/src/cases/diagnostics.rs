use std::fmt::Write as _;

use crate::analysis::{skewness_diagnostics, SkewnessDiagnostics};
use crate::field::DiffusionField;
use crate::mesh::Mesh;
use crate::Result;

pub const DIAGNOSTICS_HEADER: &str = "cell flT khat_max khat_min ratio factor";

pub fn analyze_mesh(mesh: &Mesh, diffusion: &DiffusionField) -> Result<SkewnessDiagnostics> {
    mesh.validate()?;
    skewness_diagnostics(mesh, diffusion)
}

/// Per-cell table followed by `#` summary lines.
pub fn diagnostics_text(d: &SkewnessDiagnostics) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "{DIAGNOSTICS_HEADER}");
    for c in &d.cells {
        let _ = writeln!(
            s,
            "{} {:.5e} {:.5e} {:.5e} {:.5e} {:.5e}",
            c.cell, c.flatness, c.khat_max, c.khat_min, c.ratio, c.factor
        );
    }
    let _ = writeln!(s, "# cells {}", d.cells.len());
    let _ = writeln!(s, "# fl_h {:.5e}", d.fl_h);
    let _ = writeln!(s, "# max_factor {:.5e}", d.max_factor);
    let _ = writeln!(s, "# max_scaled_factor {:.5e}", d.max_scaled_factor);
    match d.max_interplay {
        Some(v) => {
            let _ = writeln!(s, "# max_interplay {v:.5e}");
        }
        None => {
            let _ = writeln!(s, "# max_interplay nan");
        }
    }
    s
}
