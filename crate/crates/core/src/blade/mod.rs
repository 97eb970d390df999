//! Core multivector arithmetic over a quadratic generator system:
//! wedge, contraction, the Clifford product, quantization/symbol maps,
//! exponentials, the canonical λ/γ maps, the star operator, and dense
//! operator oracles on the blade basis.

pub mod exp;
pub mod lambda;
pub mod multivector;
pub mod operator;
pub mod product;
pub mod quantize;
pub mod star;
pub mod system;

pub use lambda::{gamma_of, lambda_inv, lambda_of, lambda_of_block};
pub use multivector::{blade_grade, BladeMask, MultiVector};
pub use operator::{operator_of, OperatorMatrix};
pub use system::{GeneratorSystem, System};
