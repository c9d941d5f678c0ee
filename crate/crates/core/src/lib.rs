//! Equivariant harmonic morphisms from ellipsoidal joins into the 2-sphere.
//!
//! The manifolds are tori bundles over an interval, parametrised inside
//! `C^4` by four angles and a join parameter `s`. Maps into `S^2` wind the
//! angles with integer weights and send `s` to a colatitude through a
//! profile function `alpha`. This crate evaluates the geometry, the map's
//! differential, the reduced harmonicity ODE, its conformal first integral,
//! and the closed-form, quadrature based and shooting based profiles.

mod ddouble;
pub mod error;
pub mod geometry;
pub mod hexfloat;
pub mod morphism;
pub mod profile;

pub use error::{Error, Result};
pub use geometry::{AmbientPoint, EllipsoidParams, Interval, JoinCoordinate, EPS_LOC};
pub use morphism::{MapFamily, MapSpec, SpherePoint, TangentVector, WindingNumbers};
pub use profile::{
    boundary_certificate, closed_form_alpha, coeff_d_general, coeff_d_simplified,
    coeff_g_general, coeff_g_simplified, harmonicity_residual, prime_integral_residual,
    q3_residual, quadrature_i, shoot, shoot_both, BoundaryCertificate, Jet, Profile,
    ProfileFile, ProfileForm, QuadratureTable,
};
