//! Shared inputs for the pipeline benchmarks.

use airy_resurgence::estimate::t_of_l;
use airy_resurgence::hyperasymptotics::{HyperConfig, HyperEngine};
use rug::Float;

/// `t_l` at `prec` bits.
pub fn t_for(l: u32, prec: u32) -> Float {
    t_of_l(l, prec)
}

/// Engine with a table deep enough for level 2 up to the third zero.
pub fn hyper_engine() -> HyperEngine {
    HyperEngine::for_zeros(3, 2).expect("table builds")
}

pub fn hyper_config(prec: u32, tol: f64) -> HyperConfig {
    HyperConfig::new(prec, tol).expect("tolerance fits the precision")
}
