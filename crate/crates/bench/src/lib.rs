//! Fixtures shared by the benchmarks.

use nn2poly_core::{random_constrained_init, Activation, Architecture, MlpModel, Multiset};

/// Multiset with `distinct` labels, each repeated `repeat` times.
pub fn repeated_multiset(distinct: usize, repeat: u32) -> Multiset {
    Multiset::from_counts((1..=distinct).map(|label| (label, repeat)))
}

/// Constrained tanh regression network with equal-width hidden layers.
pub fn tanh_model(p: usize, depth: usize, width: usize, seed: u64) -> MlpModel {
    let arch = Architecture::regression(p, &vec![width; depth], Activation::Tanh);
    random_constrained_init(&arch, seed).expect("valid architecture")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixtures_have_requested_shape() {
        assert_eq!(repeated_multiset(3, 2).len(), 6);
        let model = tanh_model(4, 2, 8, 0);
        assert_eq!(model.p(), 4);
        assert_eq!(model.layers().len(), 3);
    }
}
