//! Converts trained multilayer perceptrons into explicit multivariate
//! polynomials of their inputs.

pub mod error;
pub mod mlp;
pub mod multiset;
pub mod oracle;
pub mod polyalg;
pub mod taylor;
pub mod transform;

pub use error::{Error, Result};
pub use mlp::{
    generate_polynomial_data, l1_project, potential_diagnostics, random_constrained_init,
    random_init, train, Architecture, Dataset, GeneratorConfig, Layer, LayerSpec, MlpModel,
    PotentialStats, TrainConfig, TrainReport,
};
pub use multiset::{
    build_cache, canonicalize, enumerate_partitions, filter_partitions, Multiset,
    MultisetPartition, PartitionCache,
};
pub use oracle::{brute_force_partitions, symbolic_forward};
pub use polyalg::{count_terms, enumerate_monomials, ExponentVector, Polynomial};
pub use taylor::{taylor_coeffs, Activation, TaylorCoeffs};
pub use transform::{
    apply_activation, nn2poly, nn2poly_traced, nn2poly_with_cache, partition_weight, Mode,
    TransformConfig, TransformTrace,
};
