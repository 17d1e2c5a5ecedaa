//! Simulation and verification toolkit for the chemotaxis system
//!
//! ```text
//! u_t = Δu − ∇·(f(u)∇v),   v_t = Δv − v + g(u)   (or 0 = Δv − v + g(u))
//! ```
//!
//! with `f(s) = K s^α`, `g(s) = K₀ s^l` and zero-flux boundaries.

pub mod certificate;
pub mod config;
pub mod diagnostics;
pub mod elliptic;
pub mod exact;
pub mod grid;
pub mod ineq;
pub mod model;
pub mod output;
pub mod region;
pub mod solver;
pub mod sweep;
