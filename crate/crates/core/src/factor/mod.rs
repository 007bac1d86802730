//! Pre-processing maps, truncated root families, symmetric functions over
//! roots, and circuits for factors.

mod circuit;
mod esym;
mod preprocess;
mod rational;

pub use circuit::factor_circuit;
pub use esym::{esym_at_roots, newton_esym, root_power_sums, trace_mod};
pub use preprocess::{find_preprocessing, PreprocessMap};
pub use rational::{
    boundary, compose_y_t, embed_poly, lift_root_in_t, pullback_poly, rational_root_truncation, root_family,
    subset_product, RationalRoot, RootFamily,
};

#[cfg(test)]
mod tests;
