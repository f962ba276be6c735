//! Tropical roots of polynomials, tropical eigenvalues of matrices, and
//! log-majorization bounds relating them to classical roots and eigenvalues.
//!
//! Max-plus quantities are plain `f64` with `-inf` for the tropical zero.
//! Max-times quantities are their exponentials.
//!
//! ```
//! use tropspec::trop_poly::TropicalPolynomial;
//!
//! let p = TropicalPolynomial::new(vec![1.0, 2.0, 0.0, -1.0]).unwrap();
//! let roots = p.roots();
//! assert_eq!(roots.entries()[0].multiplicity, 2);
//! assert!((roots.entries()[0].value - 1.5).abs() < 1e-12);
//! ```

pub mod assignment;
pub mod bounds;
pub mod combinatorics;
pub mod compounds;
pub mod dense_eig;
pub mod error;
pub mod matrix;
pub mod serde_ext;
pub mod trop_poly;
pub mod trop_spectra;
pub mod verify;

pub use error::{Error, Result};
pub use matrix::{ComplexMatrix, NonnegMatrix};
pub use num_complex::Complex64;
