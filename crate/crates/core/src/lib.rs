//! Graphs with the random-like number of labeled cliques of every order that
//! still contain a linear-size independent set, built from the real roots of
//! the deformed exponential `f_p(x) = Σ x^j p^(j(j-1)/2) / j!`, together with
//! an auditor for the Chung–Graham–Wilson quasirandomness properties.

pub mod audit;
pub mod cli;
pub mod defexp;
pub mod ensemble;
pub mod ext_real;
pub mod graph;
pub mod interval;
pub mod spectrum;

pub use defexp::{CoefficientList, DensityParam};
pub use ext_real::{ExtReal, Round};
pub use graph::Graph;
pub use interval::Interval;
