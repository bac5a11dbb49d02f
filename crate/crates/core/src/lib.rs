//! Square-tiled surfaces, their cyclic covers, and the Kontsevich–Zorich cocycle over
//! their PSL(2,Z)-orbits: exact combinatorics, exact monodromy over Q(ζ₃), Lyapunov
//! exponent formulas and estimators, and a numerical Zariski-density certificate.

pub mod cover;
pub mod cyclotomic;
pub mod error;
pub mod homology;
pub mod lyapunov;
pub mod numeric;
pub mod surface;
pub mod zariski;

pub use cover::{cyclic_cover, BranchData, CoveringSurface};
pub use cyclotomic::{CycloMatrix, CycloNum, CycloPoly, IntPoly};
pub use error::{Error, Result};
pub use homology::{H1Basis, HomologyMap, IsotypicBasis, MonodromyRep};
pub use lyapunov::{RationalSum, SpectrumReport};
pub use surface::{
    CylinderDecomposition, OrbitGraph, Side, SquareTiledSurface, Stratum, StratumKind,
};
