//! Zero crossings of the A-1 curve and of the entangled-helper SWAP^γ curve.

use envcap_core::capacity::{
    a1_spec, find_zero_crossing, swap_gamma_eh_max, two_copy_coherent_info, ZERO_CAPACITY_TOL,
};

use crate::config::{Experiment, ExperimentConfig};
use crate::error::{CliError, CliResult};

pub const DEFAULT_BRACKET: (f64, f64) = (0.5, 1.0);

/// Root of the selected curve in γ.
///
/// For `a1` the curve is the two-copy value at slope t = params[0] (default 0). The
/// entangled-helper curve is clamped at zero, so `eh_swap` bisects value − ZERO_CAPACITY_TOL.
pub fn locate(cfg: &ExperimentConfig, bracket: Option<(f64, f64)>) -> CliResult<f64> {
    cfg.validate()?;
    let (lo, hi) = bracket.unwrap_or(DEFAULT_BRACKET);
    if !(lo.is_finite() && hi.is_finite() && lo < hi) {
        return Err(CliError::Config(format!("bad bracket [{lo}, {hi}]")));
    }
    match cfg.experiment {
        Experiment::A1 => {
            let t = cfg.params.first().copied().unwrap_or(0.0);
            let spec = |g: f64| a1_spec(g, t).map(|s| two_copy_coherent_info(&s));
            spec(lo)?;
            Ok(find_zero_crossing(
                |g| spec(g).expect("valid A-1 spec"),
                lo,
                hi,
                cfg.tol,
            )?)
        }
        Experiment::EhSwap => {
            if lo < 0.0 || hi > 1.0 {
                return Err(CliError::Config(format!(
                    "eh_swap bracket must lie in [0, 1], got [{lo}, {hi}]"
                )));
            }
            let opts = cfg.optimizer();
            Ok(find_zero_crossing(
                |g| {
                    swap_gamma_eh_max(g, &opts)
                        .expect("gamma inside [0, 1]")
                        .value
                        - ZERO_CAPACITY_TOL
                },
                lo,
                hi,
                cfg.tol,
            )?)
        }
        other => Err(CliError::Config(format!(
            "locate works on a1 or eh_swap, not {other}"
        ))),
    }
}
