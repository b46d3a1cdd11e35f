//! Time-dependent generalized Pauli channels and Weyl channels.
//!
//! The symbolic, linear-algebra, basis and channel layers are generic over
//! the scalar type ([`scalar::Real`], implemented for `f32` and `f64`). The
//! [`analysis`] and [`io`] layers are `f64` only. The aliases below fix the
//! scalar for the common cases.

pub mod analysis;
pub mod catalog;
pub mod channels;
pub mod expr;
pub mod grid;
pub mod io;
pub mod mub;
pub mod qlinalg;
pub mod scalar;

pub use channels::{Channel, CpVerdict, EqualityMode};
pub use expr::{parse_expr, Expr};
pub use grid::TimeGrid;
pub use scalar::Real;

pub type TimeExpr = expr::Expr<f64>;
pub type CMatrix = qlinalg::CMat<f64>;
pub type SuperOp = qlinalg::SuperOperator<f64>;
pub type MubFamily = mub::Mubs<f64>;
pub type WeylSet = mub::WeylOps<f64>;
pub type GpcChannel = channels::GeneralizedPauli<f64>;
pub type WeylChannel = channels::Weyl<f64>;
pub type Spectrum = channels::GpcSpectrum<f64>;
pub type WeylEigenvalues = channels::WeylSpectrum<f64>;
pub type Grid = grid::TimeGrid<f64>;

pub type TimeExpr32 = expr::Expr<f32>;
pub type CMatrix32 = qlinalg::CMat<f32>;
pub type MubFamily32 = mub::Mubs<f32>;
pub type GpcChannel32 = channels::GeneralizedPauli<f32>;
