//! Prints certified residual-kernel L¹ norms over the standard 1D test set.

use std::time::Instant;

use logdiss::grid::make_grid;
use logdiss::kernels::l1_norm_certified_with;
use logdiss::kernels::Refinement;
use logdiss::symbols::{residual_symbol_with, DissipationSpec, Evaluation};

fn main() -> logdiss::Result<()> {
    let grid = make_grid(1, 1 << 15, 200.0)?;
    for gamma in [0.25, 0.5, 0.75, 1.0, 1.25, 1.5, 2.0] {
        for beta in [0.5, 1.0, 2.0] {
            for lambda in [1.5, 2.0, 4.0] {
                let start = Instant::now();
                let spec = DissipationSpec::a(gamma, beta, lambda)?;
                let p = residual_symbol_with(&spec, Evaluation::ClosedForm)?;
                let (cert, history) = l1_norm_certified_with(&p, &grid, Refinement::for_dim(1))?;
                let trail: Vec<String> = history
                    .iter()
                    .map(|h| format!("{:.5}", h.l1_estimate))
                    .collect();
                println!(
                    "g={gamma:<5} b={beta:<4} l={lambda:<4} L1={:.6} converged={} levels=[{}] {:.2}s",
                    cert.estimate,
                    cert.converged,
                    trail.join(", "),
                    start.elapsed().as_secs_f64()
                );
            }
        }
    }
    Ok(())
}
