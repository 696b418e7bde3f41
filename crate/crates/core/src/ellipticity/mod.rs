//! A uniformly elliptic functional `F` whose zero set contains the Hessians of
//! `w_δ`, built from the graph of sorted Hessian spectra.

pub mod cone;
pub mod functional;
pub mod graph;
pub mod viscosity;

pub use cone::LambdaCone;
pub use functional::{
    ellipticity_check, estimate_ellipticity, heldout_check, heldout_site, heldout_zero, refine, EllipticityEstimate, FValue,
    GraphPoint, HeldOutSummary, HessianFunctional, ON_GRAPH_TOL,
};
pub use graph::{
    build_graph, param_len, params_of, site_of, spectrum_of, ConeValidation, GraphSidecar, SampledGraph, GRAPH_FORMAT_VERSION,
    R_MIN,
};
pub use viscosity::{
    sign_change_check, sign_change_witness, touch_check, viscosity_touch_test, SignChangeSummary, TouchSummary, TOUCH_TOL,
};
