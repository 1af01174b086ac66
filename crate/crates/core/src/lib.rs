//! Exact workbench for *-regular rings, their lattices of principal right
//! ideals, (n,k)-frames and frame coordinatization.

pub mod coord;
pub mod exactalg;
pub mod frames;
pub mod latcore;
pub mod starring;
pub mod subspace;
