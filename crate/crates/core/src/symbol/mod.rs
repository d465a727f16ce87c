//! Exact arithmetic for homogeneous matrix-valued polynomials `P(ξ)`.

mod charpoly;
mod mat;
mod multiindex;
mod poly;

pub use charpoly::{char_poly_coeffs, faddeev_leverrier, FaddeevLeverrier};
pub use mat::Mat;
pub use multiindex::{enumerate_multiindices, MultiIndex};
pub use poly::{power_table, MatPoly, RealMatPoly, ScalarPoly};
