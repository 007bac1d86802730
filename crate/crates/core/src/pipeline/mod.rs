//! End-to-end factorization: variable reduction, bivariate factoring and
//! lifting of factors back through circuits.

mod bivariate;
mod full;
mod generator;

pub use bivariate::{bivariate_base_factorize, divisibility_test, irreducibility_preservation_check, PreservationReport};
pub use full::{
    factorize_full, oracle_irreducible, squarefree_part_pipeline, Certificate, Factor, FactorizationResult,
    PipelineConfig, SquarefreePart,
};
pub use generator::{variable_reduce, GeneratorKind, GeneratorSpec};

#[cfg(test)]
mod tests;
