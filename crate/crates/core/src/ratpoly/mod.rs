//! Exact arithmetic: rationals, sparse multivariate polynomials, Laurent
//! polynomials in one variable, bi-polynomials in `(x, t)` and Hilbert
//! series written over powers of `(1 - x)`.

mod bipoly;
mod laurent;
pub mod linalg;
mod monomial;
mod parse;
mod poly;
mod rational;
mod series;

pub use bipoly::BiPolynomial;
pub use laurent::LaurentPolynomial;
pub use monomial::{default_names, Monomial};
pub use poly::{determinant, Degree, Polynomial, TermJson};
pub use rational::{binomial, Rational};
pub use series::RationalSeries;
