//! Exact characteristic-class arithmetic: truncated rings, Chern and Todd classes,
//! and the Riemann–Roch term split for Spencer bundles.

pub mod classes;
pub mod ring;
pub mod srr;

pub use classes::{
    ch_sym, chern_character, chern_from_curvature, cy_ring, todd_cy, todd_cy_coefficients, todd_cy_from,
    todd_from_roots, todd_series, ChernRoots,
};
pub use ring::{exp_series, invert_series, parse_rational, q, qi, CohomologyClass, GradedRing, Rational};
pub use srr::{
    euler_srr, k3_spencer_ch, srr_decomposition, CYManifoldData, LambdaTag, RiemannRochInput, SRRReport,
};
