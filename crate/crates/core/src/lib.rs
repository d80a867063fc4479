//! Twisted Alexander polynomials of finitely presented groups, computed
//! exactly from Fox calculus, and their use as obstructions to algebraic
//! fibring.

pub mod alexander;
pub mod fibring;
pub mod fixtures;
pub mod foxcalc;
pub mod polyalg;
pub mod quotients;
pub mod reidschreier;
pub mod words;
