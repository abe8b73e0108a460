//! Warped time-frequency filter banks.
//!
//! A warping function `F` turns a nonuniform frequency scale (logarithmic,
//! ERB, power law) into a uniform one. Translating a single prototype window
//! `theta` along the warped axis and pulling it back through `F` gives the
//! channel responses `theta(F(xi) - m)`. With compactly supported prototypes
//! and small enough downsampling factors the resulting bank is *painless*:
//! its frame operator is diagonal in frequency, the canonical dual is a
//! pointwise quotient, and cosine-sum windows make the bank tight.
//!
//! ```
//! use num_complex::Complex64;
//! use warpbank::{transform, Domain, GridSpec, WarpedBank, WarpingFunction};
//!
//! let grid = GridSpec::new(1024, 44100.0, Domain::FullLine).unwrap();
//! let bank = WarpedBank::design_tight(&WarpingFunction::erb(), &grid, &[0.5, 0.5], 3.0).unwrap();
//! let signal: Vec<Complex64> = (0..1024).map(|n| Complex64::new((n as f64).sin(), 0.0)).collect();
//! let coeffs = transform::analyze(&signal, &bank).unwrap();
//! let back = transform::synthesize(&coeffs, &bank).unwrap();
//! assert!((back[10] - signal[10]).norm() < 1e-10);
//! ```
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bank;
pub mod container;
pub mod diagnostics;
pub mod error;
pub mod prototypes;
pub mod spec_file;
pub mod spectrogram;
pub mod transform;
pub mod warping;

pub use bank::{BankKind, Channel, ChannelRole, FactorPolicy, GridSpec, WarpedBank};
pub use diagnostics::FrameReport;
pub use error::{Result, WarpError};
pub use prototypes::PrototypeWindow;
pub use spec_file::BankSpecFile;
pub use transform::CoefficientSet;
pub use warping::{Domain, Family, WarpingFunction};
