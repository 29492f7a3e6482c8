//! Dense finite-dimensional quantum-state primitives.

mod entropy;
mod majorisation;
mod operator;
mod random;

pub use entropy::{
    binary_entropy, min_entropy, mutual_information, relative_entropy, shannon_entropy,
    von_neumann_entropy,
};
pub use majorisation::{
    is_passive, majorised_by, max_extractable_work, passive_populations,
    rearrangement_bounds_check, MajorisationMode,
};
pub use operator::{
    eigh, gibbs_populations, gibbs_state, partial_trace, tensor_product, DensityOperator,
    HermitianOperator, Subsystem,
};
pub use random::{haar_unitary, random_density, random_probabilities};

/// Complex scalar used throughout.
pub type C64 = num_complex::Complex64;
/// Dense complex matrix.
pub type CMatrix = nalgebra::DMatrix<C64>;

/// Frobenius norm of `a - b`.
pub fn frobenius_distance(a: &CMatrix, b: &CMatrix) -> f64 {
    (a - b).norm()
}

/// Largest per-entry deviation from unitarity, `max |U†U - I|`.
pub fn unitarity_defect(u: &CMatrix) -> f64 {
    let n = u.nrows();
    let p = u.adjoint() * u;
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in 0..n {
            let target = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((p[(i, j)] - C64::new(target, 0.0)).norm());
        }
    }
    worst
}
