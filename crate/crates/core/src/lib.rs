//! Amplitudes for a quantum system interacting `n` times within a fixed
//! interval, in the limit of many repetitions.
//!
//! Exact chain integrals live in [`expsum`]. The bubble and open-oyster
//! processes are built on them in [`bubble`] and [`open_oyster`]. All-orders
//! sums are in [`resummation`] and frequency-domain poles and cuts in
//! [`spectral`]. Every closed form can be checked against the brute-force
//! quadrature in [`oracle`], and [`sweep`] turns it all into CSV/JSON tables.

pub mod bubble;
pub mod error;
pub mod expsum;
pub mod interaction;
pub mod open_oyster;
pub mod oracle;
pub mod propagator;
pub mod resummation;
pub mod spectral;
pub mod sweep;

pub use error::{Result, ZenoError};
pub use interaction::InteractionSpec;
pub use propagator::{free_propagator, point_correlator, ComplexAmplitude};
