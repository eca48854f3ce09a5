//! The simplicial structures `𝒜^d(A)`, `ℬ^d(A)`, `ℳ^d(M)`, `𝒩_d(M)` and
//! the tensor product `M ⊗_{𝒜^d} ℬ^d` with its isomorphism onto the sphere
//! complex.

pub mod bar;
pub mod cohomology;
pub mod formal;
pub mod hypercube;
pub mod identities;
pub mod tensor;

pub use bar::{BarVector, ConcreteBar, PureBar};
pub use cohomology::{cohomology_coboundary, cohomology_complex};
pub use formal::{
    act_a_on_b, act_a_on_m, augmentation, delta_a, delta_b, delta_b_skip_merge, phi_inv, phi_inv_with, sigma_a,
    sigma_b, sigma_minus_one, sigma_minus_one_from_augmentation, FormalBoundaryTensor, FormalTensor,
    FormalTensorOverAn,
};
pub use hypercube::{
    boundary_positions, insert_map, interior_positions, is_boundary, merge_map, positions, InteriorBijection,
    LevelGeometry, Position,
};
pub use identities::{
    check_cosimplicial_identities, check_simplicial_identities, Constant, CosimplicialObject, FormalBar,
    FormalBoundary, FormalTensorProduct, IdentityFamily, IdentityReport, IdentityViolation, SimplicialObject,
};
pub use tensor::{verify_main_theorem, ConcreteTensorProduct, MainTheoremReport, SampledTensorProduct, TensorOverAn};
