//! Matrix factorizations of `W = -z1 z2 z3`, their Z/2-graded endomorphism
//! algebra, explicit contractions, and the signed-algebra quasi-isomorphisms
//! onto the tropical pair-of-pants legs.

mod cohomology;
mod factorization;
mod ring;
mod signed;

pub use cohomology::{assemble_block_complex, interior_dims, BlockComplex, CohomologyDims};
pub use factorization::{
    compose, contraction_e3, differential, e_single, e_sum, end_identity, end_zero, verify_mf,
    EndEl, Mat, MfCheck, Parity, TwoPeriodicMF,
};
pub use ring::{Coefficient, El, Exp, RingSpec};
pub use signed::{
    cover_involution, phi_leg, restrict_to_tropical_pants, signed_basis, signed_mul, tau12_check,
    tau12_end, verify_phi3, LegModel, PantsModel, Phi3Report, SignedEl,
};
