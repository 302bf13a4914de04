//! Exact construction and verification of permutonestohedra for classical root systems.

pub mod exact;
pub mod root_system;
pub mod weyl;
pub mod flats;
pub mod nested;
pub mod halfspaces;
pub mod polytope;
pub mod face_poset;
pub mod fvector;
pub mod export;
