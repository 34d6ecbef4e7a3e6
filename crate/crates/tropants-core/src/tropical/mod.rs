//! Lattice polytopes, integer lifts, regular unimodular triangulations and
//! discrete Legendre duality.

mod legendre;
mod lift;
mod polytope;
mod subdivision;

pub use legendre::{dual_cell, legendre_transform, AffineForm, DualCell, PLFunction};
pub use lift::{LiftFixture, LiftFunction};
pub use polytope::{lattice_points, point_in_hull, Halfspace, LatticePoints, Polytope};
pub(crate) use polytope::for_each_subset;
pub use subdivision::{
    check_unimodular_regular, induced_subdivision, induced_triangulation, normalized_volume,
    Cell, Simplex, Subdivision, Triangulation, ValidationReport,
};
