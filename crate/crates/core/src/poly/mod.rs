//! Exact univariate polynomial arithmetic over the rationals.

mod charpoly;
mod families;
mod resultant;
mod sturm;
mod unipoly;

pub use charpoly::{charpoly_exact, charpoly_square};
pub use families::{
    depressed_cubic_roots, labelled_roots, p1_delta, p1_delta_coeffs, p1_base, p2_delta, p2_delta_coeffs, p2_base, q1,
    q2_display, q2_sphere_split, r_closed, w0_root, CubicRoots, TrigLabels, W_MAX,
};
pub use resultant::{bareiss_det, resultant};
pub use sturm::{
    certify_simple_roots, count_roots, expand_multiplicities, real_roots, real_roots_hinted, root_bound, sign_variations, squarefree_decomposition, sturm_chain,
    sturm_real_roots, RealRoot, DEFAULT_ROOT_TOL,
};
pub use unipoly::UniPoly;
