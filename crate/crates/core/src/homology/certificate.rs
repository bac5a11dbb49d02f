//! Irreducibility and spectral certificates for 4-dimensional monodromy matrices.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::cyclotomic::{galois_norm, CycloMatrix, CycloNum, CycloPoly, IntPoly};
use crate::error::{Error, Result};
use crate::numeric::{eigenvalues, multiset_distance};

/// Determinant magnitudes of the commutators of two generators and of their wedge squares.
#[derive(Clone, Debug, PartialEq)]
pub struct IrreducibilityReport {
    /// `|det(XY − YX)|²`.
    pub det1_squared: BigRational,
    /// `|det(UV − VU)|²` with `U, V` the wedge squares.
    pub det2_squared: BigRational,
    /// `|det(XY − YX)|` when it is rational.
    pub det1: Option<BigRational>,
    pub det2: Option<BigRational>,
    pub det1_value: CycloNum,
    pub det2_value: CycloNum,
    pub irreducible: bool,
}

fn rational_sqrt(q: &BigRational) -> Option<BigRational> {
    if q.is_negative() {
        return None;
    }
    let (n, d) = (q.numer(), q.denom());
    let (sn, sd): (BigInt, BigInt) = (n.sqrt(), d.sqrt());
    (&sn * &sn == *n && &sd * &sd == *d).then(|| BigRational::new(sn, sd))
}

fn commutator(x: &CycloMatrix, y: &CycloMatrix) -> CycloMatrix {
    &(x * y) - &(y * x)
}

/// No common invariant subspace of dimension 1 or 3 (commutator determinant) nor of
/// dimension 2 (wedge-square commutator determinant).
pub fn irreducibility_certificate(x: &CycloMatrix, y: &CycloMatrix) -> Result<IrreducibilityReport> {
    for m in [x, y] {
        if m.rows() != 4 || m.cols() != 4 {
            return Err(Error::Parameters("certificate expects 4×4 fibers".into()));
        }
    }
    let d1 = commutator(x, y).det()?;
    let d2 = commutator(&x.wedge_square()?, &y.wedge_square()?).det()?;
    let (n1, n2) = (d1.abs2(), d2.abs2());
    Ok(IrreducibilityReport {
        det1: rational_sqrt(&n1),
        det2: rational_sqrt(&n2),
        irreducible: !n1.is_zero() && !n2.is_zero(),
        det1_squared: n1,
        det2_squared: n2,
        det1_value: d1,
        det2_value: d2,
    })
}

/// Spectral comparison of a monodromy matrix with its complex conjugate.
#[derive(Clone, Debug)]
pub struct ConjugateSpectrum {
    /// The root of unity `±ζ^k` that is an eigenvalue of `C`.
    pub normalizer: CycloNum,
    /// Monic cubic with `char_poly(C/normalizer) = (T − 1)·cubic`.
    pub cubic: CycloPoly,
    pub min_poly: IntPoly,
    pub cyclotomic: bool,
    pub distinct_from_conjugate: bool,
    /// Distance between the spectra of `C⁶` and `conj(C)⁶`.
    pub gap: f64,
}

pub fn conjugate_spectrum_test(c: &CycloMatrix) -> Result<ConjugateSpectrum> {
    let p = c.char_poly()?;
    let units: Vec<CycloNum> = (0..3)
        .flat_map(|k| {
            let z = CycloNum::zeta_pow(k);
            [z.clone(), -z]
        })
        .collect();
    let normalizer = units
        .into_iter()
        .find(|u| p.eval(u).is_zero())
        .ok_or_else(|| Error::Parameters("no eigenvalue of the form ±ζ^k".into()))?;
    let scaled = p.scale_roots(&normalizer)?;
    let cubic = scaled.div_exact(&CycloPoly::from_ints(&[-1, 1]))?;
    let min_poly = galois_norm(&cubic)?;
    let cyclotomic = min_poly.is_cyclotomic()?;
    let e = c.embed();
    let e6 = e.pow(6);
    let c6 = e.map(|z| z.conj()).pow(6);
    let gap = multiset_distance(&eigenvalues(&e6), &eigenvalues(&c6));
    let distinct = if gap > 1e-6 {
        true
    } else if gap < 1e-9 {
        false
    } else {
        return Err(Error::DeadBand(format!("spectral gap {gap:e}")));
    };
    Ok(ConjugateSpectrum {
        normalizer,
        cubic,
        min_poly,
        cyclotomic,
        distinct_from_conjugate: distinct,
        gap,
    })
}

/// Best `j ∈ 0..6` with `spectrum(C) ≈ η^j·roots(P)`, `η = exp(iπ/3)`, and its distance.
pub fn match_spectrum_up_to_sixth_roots(c: &CycloMatrix, p: &CycloPoly) -> (usize, f64) {
    let ev = eigenvalues(&c.embed());
    let roots = p.roots();
    (0..6)
        .map(|j| {
            let eta = Complex64::from_polar(1.0, std::f64::consts::PI * j as f64 / 3.0);
            let rotated: Vec<Complex64> = roots.iter().map(|r| r * eta).collect();
            (j, multiset_distance(&ev, &rotated))
        })
        .fold((0, f64::INFINITY), |a, b| if b.1 < a.1 { b } else { a })
}
