//! Beta-expansions, survivor sets of the β-transformation with a hole
//! `(0, t)`, their entropy and dimension, and the Lyndon/Farey interval
//! structure of the bifurcation sets.

pub mod bifurcation;
pub mod critical;
pub mod expansions;
pub mod interval;
pub mod survivor;
pub mod words;
