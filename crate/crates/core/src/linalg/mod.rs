//! Dense linear algebra for `SL(d, R)`: norms, spectra, Cartan/Jordan/Iwasawa
//! projections, proximality and Gromov products.
//!
//! All functions are pure. Matrices are small (`d` up to a handful) and
//! evaluated millions of times, so the kernels avoid allocation where it
//! matters and use closed forms for `d = 2`.

mod cartan;
mod eigen;
mod iwasawa;
mod matrix;
mod projective;
mod proximal;

pub use cartan::{
    cartan_projection, cartan_projection_pair, jordan_projection, jordan_projection_pair, operator_norm_log,
    opposition_involution, spectral_radius_log, CartanVector, NormKind,
};
pub use eigen::{eigenvalue_moduli, eigenvalues, singular_values, top_singular_value, Eigenvalue};
pub use iwasawa::{iwasawa_cocycle, iwasawa_cocycle_pair, FlagFrame};
pub use matrix::{unimodularize, SquareMatrix};
pub use projective::{gromov_product, ProjectiveCovector, ProjectivePoint};
pub use proximal::{is_r_eps_proximal, proximal_parts, ProximalParts, DEFAULT_GAP_TOL};

pub(crate) use proximal::sphere_grid;
