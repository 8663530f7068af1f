//! Evolutes and curvature of closed curves on the sphere, the plane and the hyperbolic plane.
//!
//! Points of a space form of curvature `c` live on the sphere or the upper hyperboloid
//! sheet `<u, u> = 1/c` in three-space, or in the plane for `c = 0`. Curves are sampled
//! periodically and differentiated spectrally; the [`theorems`] module checks the
//! integral identities and inequalities relating total curvature, enclosed area,
//! isoperimetric deficit and the area enclosed by the evolute.

pub mod catalog;
pub mod curve;
pub mod error;
pub mod evolute;
pub mod quadrature;
pub mod spaceform;
pub mod spectral;
pub mod theorems;
pub mod topology;

pub use curve::{ClosedCurve, FrameJet};
pub use error::{Error, Result};
pub use evolute::{evolute, EvolutePath};
pub use spaceform::{Model, SpaceForm, Vec3};
