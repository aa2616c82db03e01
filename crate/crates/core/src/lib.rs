pub mod auxiliary;
pub mod coeff;
pub mod combinatorics;
pub mod dd;
pub mod error;
pub mod format;
pub mod integrals;
pub mod legendre;
pub mod oracle;
pub mod poly;
pub mod product;
pub mod quadrature;
pub mod stability;
pub mod sum;
pub mod validate;
