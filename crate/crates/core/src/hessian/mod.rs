//! The cubic form `P`, the functions `w_δ`, and their Hessians.

mod block;
mod cubic;
mod eval;
mod group;
mod invariants;
mod point;
mod restricted;

pub use block::{block_decomposition, n6_display, n6_from_block, BlockDecomposition, COMPLEX_COORDS, J_COORDS};
pub use cubic::{cubic_form, cubic_form_via_product, gradient, gradient_w_delta, second_derivatives, w_delta};
pub use eval::{hessian, hessian_at_unit, hessian_f64, trace_closed_form, HessianEval};
pub use group::{factorwise_conjugation, group_act, random_unit_quaternion};
pub use invariants::{invariants, l_value, m_value, site_from_invariants, InvariantData};
pub use point::{
    random_rational_sphere_point, random_rational_sphere_vector, rational_sphere_point, rational_sphere_vector, Point12,
};
pub use restricted::{
    hessian_restricted, hessian_restricted_coordinate, restricted_lambda6, restricted_trace_closed_form,
    restricted_trace_correction, Hyperplane,
};
