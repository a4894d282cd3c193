//! The probabilistic engine: moment functionals, weighted moment-cumulant
//! transforms, independence products, the independence-of-constants
//! verifier, and central-limit moment tables.

pub mod clt;
pub mod constants;
pub mod functional;
pub mod matrix_domain;
pub mod products;
pub mod transform;
pub mod word;

pub use clt::{clt_moments, two_atom_moments, CltKind};
pub use constants::{
    constants_independence_matrix, constants_independence_poly, verify_cancellation,
    CancellationReport, ConstantsReport, ConstantsWitness,
};
pub use functional::{
    random_rational_functional, GenericFunctional, MomentSource, TableFunctional,
};
pub use matrix_domain::{
    balancedness_witness, matrix_moment, nested_extension, AttachSide, MatrixCumulants,
};
pub use products::{ProductFunctional, ProductKind};
pub use transform::{
    cumulants_to_moments, moebius_inversion_cumulant, mult_ext_commutative, mult_ext_nested,
    weighted_moment, CumulantSolver, CumulantTable,
};
pub use word::{words_of_length, words_up_to, Word, CONSTANT_SYMBOL};
