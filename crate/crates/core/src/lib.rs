//! Finite two-player stochastic games: exact discounted and limit-average
//! values, Nash verification, and Blackwell-Nash certification in discrete
//! and continuous time.

pub mod blackwell;
pub mod continuous;
pub mod equilibrium;
pub mod game;
pub mod gamefile;
pub mod mdp;
pub mod numerics;

pub use numerics::{Rational, RationalFunction};

pub type ExactMatrix = numerics::DenseMatrix<Rational>;
pub type FloatMatrix = numerics::DenseMatrix<f64>;
pub type ExactStrategy = game::StationaryStrategy<Rational>;
pub type FloatStrategy = game::StationaryStrategy<f64>;
pub type ExactMdp = mdp::Mdp<Rational>;
pub type FloatMdp = mdp::Mdp<f64>;
pub type ExactPolicy = mdp::Policy<Rational>;
pub type FloatPolicy = mdp::Policy<f64>;
pub type ExactCtmdp = continuous::Ctmdp<Rational>;
pub type FloatCtmdp = continuous::Ctmdp<f64>;
pub type ExactNashReport = equilibrium::NashReport<Rational>;
pub type FloatNashReport = equilibrium::NashReport<f64>;
