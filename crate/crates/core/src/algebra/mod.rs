//! Coefficient rings and linear algebra over F2 and `F2[u]`.

pub mod f2;
pub mod frobenius;
pub mod poly;
pub mod smith;

pub use f2::{f2_reduce, kernel_of_images, BitVec, Echelon, F2Matrix, F2Reduction, Subquotient};
pub use frobenius::Label;
pub use poly::{Monomial, Polynomial};
pub use smith::{homology_from_differential, module_decompose, smith_normal_form, ModuleDecomposition, MonomialMatrix};
