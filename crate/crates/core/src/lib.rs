//! Exact toric residues on complete toric varieties.

pub mod coxring;
pub mod differentials;
pub mod intmat;
pub mod lattice;
pub mod linalg;
pub mod numeric;
pub mod polytopes;
pub mod residue;
