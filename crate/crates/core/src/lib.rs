//! Dirichlet eigenvalues of the logarithmic Laplacian on intervals, boxes and
//! balls.
//!
//! The numerical core is generic over the scalar type through [`Real`]; the
//! aliases at the crate root fix it to `f64`, which is what every accuracy
//! contract refers to.

pub mod bounds;
pub mod cli;
pub mod constants;
pub mod discretize;
pub mod error;
pub mod geometry;
pub mod quadrature;
pub mod roots;
pub mod scalar;
pub mod specfun;
pub mod spectrum;

pub use error::{Error, Result};
pub use scalar::Real;

pub type DimensionConstants = constants::DimensionConstants<f64>;
pub type Domain = geometry::Domain<f64>;
pub type TestFunctionSpec = geometry::TestFunctionSpec<f64>;
pub type Grid = discretize::Grid<f64>;
pub type QuadFormMatrix = discretize::QuadFormMatrix<f64>;
pub type FormOperator = discretize::FormOperator<f64>;
pub type Spectrum = spectrum::Spectrum<f64>;
pub type RootResult = roots::RootResult<f64>;
pub type SpecialValue = specfun::SpecialValue<f64>;
