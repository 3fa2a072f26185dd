//! Abstract monomials, polynomials and multi-polynomials.

mod amp;
mod monomial;
mod polynomial;

pub use amp::Amp;
pub use monomial::Monomial;
pub use polynomial::{AbsPoly, CapPolicy, Capper, DegreeCap};
