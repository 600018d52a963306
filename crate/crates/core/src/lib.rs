//! Generic local and global rigidity of graphs in lp-spaces for even p >= 4.
//!
//! Local rigidity is decided by the rank of the rigidity matrix at random
//! prime-field configurations and, in the plane, by packing two edge-disjoint
//! spanning trees. Global rigidity in the plane is decided both by
//! 2-connectivity plus redundant 2-tree-connectivity and by the rank of the
//! Laplacian weighted by a coordinated self-stress.

pub mod constructions;
pub mod experiments;
pub mod field;
pub mod global;
pub mod graph;
pub mod io;
pub mod linalg;
pub mod rigidity;
