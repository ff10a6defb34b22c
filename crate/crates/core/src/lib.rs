//! Exact-arithmetic and arbitrary-precision toolkit for the quasimodular
//! function chi = E2*E4*E6/Delta and its almost holomorphic companion
//! chi* = E2*(tau)*E4*E6/Delta.
//!
//! The crate constructs the classical modular polynomials Phi_N in Z[X,Y]
//! and the three-variable modular polynomials Psi_N in Q[X,Y,Z] satisfied by
//! (chi*(g tau), j(tau), chi*(tau)), evaluates all the relevant functions to
//! arbitrary precision on the upper half plane, computes special values at CM
//! points via Masser's Taylor-coefficient formulas, and ships a residual
//! verification harness for every identity involved.
//!
//! Start with the runnable examples (`cargo run --example ...`) or the
//! `chistar` binary; the modules below are layered bottom-up:
//!
//! - [`exactalg`]: rationals, cyclotomic fields, exact linear algebra
//! - [`qseries`]: truncated Puiseux series and Y-polynomial extensions
//! - [`modforms`]: exact q-expansions of E2, E4, E6, Delta, j, f, chi, chi*
//! - [`hecke`]: integer matrices, coset representatives, domain reduction
//! - [`modpoly`]: construction and persistence of Phi_N and Psi_N
//! - [`hp`], [`numeval`]: arbitrary-precision evaluation and verification
//! - [`cm`]: CM points, reduced forms, Masser's formulas
//! - [`special`]: geodesic descriptors and special-variety membership probes
//! - [`cli`]: the command-line front end

pub mod cli;
pub mod cm;
pub mod exactalg;
pub mod hecke;
pub mod hp;
pub mod modforms;
pub mod modpoly;
pub mod numeval;
pub mod qseries;
pub mod special;
