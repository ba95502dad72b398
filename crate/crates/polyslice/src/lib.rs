//! Hyperplane sections of the regular simplex, the cross-polytope and the cube.
//!
//! For a unit direction `a` and offset `t`, `A(a,t)` is the volume of the
//! section `{⟨a,x⟩ = t} ∩ K` and `P(a,t)` the volume of its relative boundary.
//! The crate evaluates both through product closed forms when the hyperplane
//! cuts off a single vertex, checks them against exact and Monte Carlo oracles,
//! and studies which directions maximise them.
//!
//! ```
//! use polyslice::{closed, Body, Functional, SectionQuery};
//!
//! let cube = Body::cube(3);
//! let q = SectionQuery::from_raw(cube, &[1.0, 1.0, 1.0], 0.7).unwrap();
//! let a = closed(&q, Functional::Volume).unwrap().value;
//! // a triangle: 3^{3/2}/2 · (√3/2 - t)²
//! assert!((a - 3f64.powf(1.5) / 2.0 * (3f64.sqrt() / 2.0 - 0.7).powi(2)).abs() < 1e-12);
//! ```
//!
//! Geometry, closed forms, oracles and integrals are generic over
//! [`Scalar`] (`f32` or `f64`); the `*64` aliases fix `f64`. The
//! [`extrema`] module is `f64` only.

pub mod bodies;
pub mod closed_form;
pub mod error;
pub mod extrema;
pub mod integral;
pub mod oracle;
pub mod quadrature;
pub mod scalar;

pub use bodies::{
    apex_frame, canonical_direction, extremal_direction, face_lattice, make_direction, regime_check, sample_direction,
    thresholds, ApexFrame, Body, BodyKind, Canonical, CubeThree, Direction, FaceDescriptor, FaceId, Regime, SectionQuery,
    Thresholds,
};
pub use closed_form::{
    analytic_a_integral, analytic_p_integral, closed, closed_a, closed_p, extremal_value, maximality_range, Functional, Method,
    SectionValue,
};
pub use error::{Result, SliceError};
pub use extrema::{
    canonicalize, classify, classify_with, hessian_eigenvalues, lagrange_residual, multistart_ascent, second_order_coefficient, section_value, sphere_maximize,
    structured_critical_points, threshold_scan, Classification, CriticalPoint, Objective, ThresholdReport,
};
pub use integral::{rational_product_integral, sinc_product_integral};
pub use oracle::{
    cap_volume, perimeter_by_facet, perimeter_exact, sample_body_point, section_vertices, section_volume_exact,
    section_volume_mc, Estimate, SectionPolytope,
};
pub use scalar::{factorial, Scalar};

pub type Direction64 = Direction<f64>;
pub type SectionQuery64 = SectionQuery<f64>;
pub type SectionValue64 = SectionValue<f64>;
pub type Regime64 = Regime<f64>;
pub type Thresholds64 = Thresholds<f64>;
pub type Estimate64 = Estimate<f64>;
pub type SectionPolytope64 = SectionPolytope<f64>;
