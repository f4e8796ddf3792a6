//! Root-lattice configurations, chart atlases and Riccati loci for Okamoto-Painleve pairs.
//!
//! [`rootlat`] classifies root sublattices of E8 and derives the possible
//! configurations of nodal curves. [`atlas`] holds explicit chart data for
//! the Painleve equations of type E7~, E6~ and D4~, [`flow`] integrates them
//! through poles by switching charts, and [`riccati`] catalogs the invariant
//! loci on which the equations reduce to Riccati equations.

pub mod atlas;
pub mod cli;
pub mod dual;
pub mod flow;
pub mod riccati;
pub mod rootlat;
pub mod symbolic;
pub mod verify;
