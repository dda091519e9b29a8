//! Classical designs: finite fields, Latin squares and cubes, orthogonal arrays.

mod capability;
mod field;
mod latin;
mod oa;

pub use capability::{capability, in_e2, in_e3, in_e4, Bound, Capability};
pub use field::{factorize, gf_make, is_prime, prime_power, GaloisField, MAX_FIELD_ORDER};
pub use latin::{
    direct_product_ls, hmols_unit_holes, hsols_unit_holes, mols_prime_power, sols_prime_power,
    verify_classical, ClassicalProperty, LatinDesign,
};
pub(crate) use latin::{normalize_hole_list, plane_indices};
pub use oa::{
    molc_to_oa, mols_to_oa, oa_strength3_rs, oa_to_molc, oa_to_mols, verify_oa, OrthogonalArray,
};
