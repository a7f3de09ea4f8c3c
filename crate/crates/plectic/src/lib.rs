//! Exact symbolic computation for Lie 2-algebras and 2-plectic geometry.
//!
//! The crate is organised around an exact coefficient ring of
//! exponential polynomials ([`ring`]), multivector-field Cartan calculus on a
//! coordinate chart ([`calculus`]), finite-dimensional Lie 2-algebras and
//! their morphisms ([`lie2`]), the constructive skeletalization
//! quasi-isomorphism ([`skeletal`]), Chevalley-Eilenberg cohomology
//! ([`cohomology`]), observable Lie 2-algebras on a 2-plectic chart
//! ([`observables`]), 2-actions ([`action`]) and comomentum maps
//! ([`comoment`]).
//!
//! Every computation is exact over the rationals; there is no floating
//! point anywhere in the crate. Verification routines return structured
//! reports with symbolic witnesses instead of panicking, so that defective
//! input data can be inspected.
//!
//! The [`catalog`] module ships a collection of worked examples as data
//! files together with replay machinery that re-verifies all of them.

pub mod action;
pub mod calculus;
pub mod catalog;
pub mod cohomology;
pub mod comoment;
pub mod defs;
pub mod lie2;
pub mod linalg;
pub mod observables;
pub mod report;
pub mod ring;
pub mod skeletal;

pub use ring::{ExpPoly, Rational};
