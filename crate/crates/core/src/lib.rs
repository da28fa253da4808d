//! Executable versions of the finite-field and Boolean-matrix factorisation
//! theorems around the Dual Ramsey Theorem, plus an exact rational toolkit for
//! polyhedral normed spaces and Lipschitz-free spaces over finite metrics.
//!
//! The combinatorial half ([`orders`], [`ffmat`], [`boolmat`], [`colorsearch`])
//! works over small prime fields and finite orders. The geometric half
//! ([`normgeo`], [`metricfree`]) uses [`Rational`] arithmetic throughout and
//! keeps irrational quantities (logarithms, Euclidean norms) at the edges.

pub mod boolmat;
pub mod colorsearch;
pub mod ffmat;
pub mod linalg;
pub mod lp;
pub mod metricfree;
pub mod normgeo;
pub mod orders;
pub mod polytope;
pub mod rational;

pub use rational::Rational;
