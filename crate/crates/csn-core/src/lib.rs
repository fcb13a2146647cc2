//! Causal scene narration and runtime safety supervision for driving scenes.
//!
//! The crate is organised around a shared world-state model ([`scene`]) and
//! four consumers of it:
//!
//! - [`narrator`] renders a scene into the three text conditions used for
//!   ablation (template / flat / causally structured),
//! - [`supervisor`] is a Simplex-style decision module that monitors waypoint
//!   trajectories against a semantic safety envelope and manages AC/BC
//!   switching,
//! - [`sim`] is a desk-scale closed-loop kinematic harness with scripted
//!   actors, perception-noise injection, a TTC baseline monitor, and
//!   driving-score metrics,
//! - [`pldpo`] evaluates the Plackett-Luce preference loss with NLL
//!   regularisation and its analytic gradient.
//!
//! [`report`] ties the harness together: utility decomposition, bootstrap
//! confidence intervals, and ablation-grid reports.
//!
//! Everything here is `no_std` + `alloc`; file IO and the CLI live in the
//! companion `csn-cli` crate.

#![cfg_attr(not(any(test, feature = "std")), no_std)]

extern crate alloc;

pub(crate) mod math;

pub mod narrator;
pub mod pldpo;
pub mod report;
pub mod scene;
pub mod sim;
pub mod supervisor;
