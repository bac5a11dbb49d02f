//! Homology of square-tiled surfaces, deck eigenspaces, monodromy and its certificates.

mod basis;
mod certificate;
mod monodromy;

pub use basis::{
    automorphism_matrix, build_h1, induced_map, is_symplectic, to_cyclo, H1Basis, HomologyMap,
    IntMatrix,
};
pub use certificate::{
    conjugate_spectrum_test, irreducibility_certificate, match_spectrum_up_to_sixth_roots,
    ConjugateSpectrum, IrreducibilityReport,
};
pub use monodromy::{
    hermitian_form, hermitian_inertia, isotypic_basis, parse_word, EdgeExport, HomologyRep,
    IsotypicBasis, Letter, MonodromyRep,
};
