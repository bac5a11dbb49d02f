//! Numerical certificate that a group generated by two pseudo-unitary matrices has a
//! Lie algebra of full dimension 15 in `su(3,1)`.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Serialize;

use crate::cyclotomic::{CycloMatrix, CycloNum};
use crate::error::{Error, Result};
use crate::numeric::{eigenvalues, norm, null_vector, projective_order, singular_values, CMatrix};

/// Eigenvalue moduli closer to 1 than this count as unimodular.
pub const UNIT_TOL: f64 = 1e-9;

/// Accept full rank when `σ_min / σ_max` exceeds this.
pub const ACCEPT_RATIO: f64 = 1e-6;
/// Reject full rank when `σ_min / σ_max` is below this.
pub const REJECT_RATIO: f64 = 1e-10;

/// Dimension of `su(3,1)`.
pub const SU31_DIM: usize = 15;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Classification {
    /// Some eigenvalue off the unit circle.
    Hyperbolic,
    /// Unimodular spectrum and a power that is scalar.
    Elliptic,
    /// Unimodular spectrum without a scalar power up to the search bound.
    Indeterminate,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HyperbolicityReport {
    /// Eigenvalue moduli, sorted descending.
    pub moduli: Vec<f64>,
    pub classification: Classification,
    /// Least power that is a scalar matrix, when found.
    pub projective_order: Option<u32>,
}

/// Classify by eigenvalue moduli, and for unimodular spectra search a scalar power up
/// to `bound`.
pub fn hyperbolicity_check(c: &CMatrix, bound: u32) -> Result<HyperbolicityReport> {
    if c.nrows() != c.ncols() || c.determinant().norm() < 1e-12 {
        return Err(Error::Singular);
    }
    let mut moduli: Vec<f64> = eigenvalues(c).iter().map(|z| z.norm()).collect();
    if moduli.iter().any(|m| !m.is_finite()) {
        return Err(Error::Numerical("eigenvalue solver failed".into()));
    }
    moduli.sort_by(|a, b| b.total_cmp(a));
    if moduli.iter().any(|&m| (m - 1.0).abs() > 1e-6) {
        return Ok(HyperbolicityReport {
            moduli,
            classification: Classification::Hyperbolic,
            projective_order: None,
        });
    }
    let order = projective_order(c, bound, 1e-8).map(|(k, _)| k);
    Ok(HyperbolicityReport {
        moduli,
        classification: if order.is_some() {
            Classification::Elliptic
        } else {
            Classification::Indeterminate
        },
        projective_order: order,
    })
}

/// How far a matrix is from being an element of `su` of a Hermitian form.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Residuals {
    /// `‖X*H + HX‖`.
    pub form: f64,
    /// `|tr X|`.
    pub trace: f64,
    /// `‖exp(X) − target‖` when `X` was produced as a logarithm.
    pub exp: Option<f64>,
}

/// A 4×4 complex matrix seen as a vector of 32 real coordinates.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LieVector {
    #[serde(skip)]
    pub matrix: CMatrix,
    pub residuals: Residuals,
}

impl LieVector {
    pub fn new(matrix: CMatrix, form: &CMatrix) -> Self {
        let residuals = Residuals {
            form: norm(&(matrix.adjoint() * form + form * &matrix)),
            trace: matrix.trace().norm(),
            exp: None,
        };
        LieVector { matrix, residuals }
    }

    /// Real and imaginary parts of the entries, row-major.
    pub fn coordinates(&self) -> Vec<f64> {
        let m = &self.matrix;
        let mut out = Vec::with_capacity(2 * m.len());
        for i in 0..m.nrows() {
            for j in 0..m.ncols() {
                out.push(m[(i, j)].re);
                out.push(m[(i, j)].im);
            }
        }
        out
    }

    /// Below `tol` in both the form and trace residuals.
    pub fn is_admissible(&self, tol: f64) -> bool {
        self.residuals.form < tol && self.residuals.trace < tol
    }
}

/// Logarithm of `C³` from its eigendecomposition, with the branch of the unimodular
/// eigenvalue farthest from 1 shifted so that the arguments sum to zero.
pub fn log_of_cube(c: &CMatrix, form: &CMatrix) -> Result<LieVector> {
    let n = c.nrows();
    let c3 = c * c * c;
    let lambdas = eigenvalues(&c3);
    for i in 0..n {
        for j in 0..i {
            if (lambdas[i] - lambdas[j]).norm() < 1e-8 * lambdas[i].norm().max(1.0) {
                return Err(Error::Numerical("repeated eigenvalues of C³".into()));
            }
        }
    }
    let mut logs: Vec<Complex64> = lambdas.iter().map(|z| z.ln()).collect();
    let total: f64 = logs.iter().map(|z| z.im).sum();
    let turns = (total / std::f64::consts::TAU).round();
    if (total - turns * std::f64::consts::TAU).abs() > 1e-8 {
        return Err(Error::Numerical(format!("det C³ is not 1: argument sum {total}")));
    }
    if turns != 0.0 {
        let pick = (0..n)
            .filter(|&i| (lambdas[i].norm() - 1.0).abs() < 1e-6)
            .max_by(|&a, &b| (lambdas[a] - 1.0).norm().total_cmp(&(lambdas[b] - 1.0).norm()))
            .ok_or_else(|| Error::Numerical("no unimodular eigenvalue to re-branch".into()))?;
        logs[pick].im -= turns * std::f64::consts::TAU;
    }
    let mut p = CMatrix::zeros(n, n);
    for (i, &l) in lambdas.iter().enumerate() {
        let v = null_vector(&(&c3 - CMatrix::identity(n, n) * l));
        p.set_column(i, &v);
    }
    let p_inv = p.clone().try_inverse().ok_or(Error::Singular)?;
    let x = &p * CMatrix::from_diagonal(&nalgebra::DVector::from_vec(logs)) * p_inv;
    let exp_res = norm(&(x.clone().exp() - &c3));
    let mut lie = LieVector::new(x, form);
    lie.residuals.exp = Some(exp_res);
    Ok(lie)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    FullRank,
    Deficient,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DensityCertificate {
    pub vectors: usize,
    /// Numerical rank: singular values above `tol_rank · σ_max`.
    pub rank: usize,
    pub singular_values: Vec<f64>,
    /// `σ_min / σ_max`.
    pub ratio: f64,
    /// Largest form and trace residual over the vectors.
    pub max_residual: f64,
    pub verdict: Verdict,
}

/// Conjugation indices `n` of the `AⁿXA⁻ⁿ` vectors.
pub const A_POWERS: [u32; 9] = [0, 1, 2, 3, 4, 5, 6, 7, 8];
/// Indices `n` of the further `B·AⁿXA⁻ⁿ·B⁻¹` vectors.
pub const B_CONJUGATED_POWERS: [u32; 6] = [0, 2, 3, 4, 5, 6];

/// Conjugates of `X` spanning (together with `X`) the candidate Lie algebra.
pub fn candidate_vectors(a: &CMatrix, b: &CMatrix, x: &CMatrix, with_b: bool) -> Result<Vec<CMatrix>> {
    let a_inv = a.clone().try_inverse().ok_or(Error::Singular)?;
    let b_inv = b.clone().try_inverse().ok_or(Error::Singular)?;
    let conj_a = |k: u32| -> CMatrix {
        let (mut m, mut mi) = (CMatrix::identity(a.nrows(), a.nrows()), CMatrix::identity(a.nrows(), a.nrows()));
        for _ in 0..k {
            m = &m * a;
            mi = &a_inv * mi;
        }
        m * x * mi
    };
    let mut out: Vec<CMatrix> = A_POWERS.iter().map(|&k| conj_a(k)).collect();
    if with_b {
        out.extend(B_CONJUGATED_POWERS.iter().map(|&k| b * conj_a(k) * &b_inv));
    }
    Ok(out)
}

/// Rank of the span of [`candidate_vectors`] in the 32-dimensional real space.
pub fn density_certificate(
    a: &CMatrix,
    b: &CMatrix,
    x: &CMatrix,
    form: &CMatrix,
    with_b: bool,
    tol_rank: f64,
) -> Result<DensityCertificate> {
    let vecs: Vec<LieVector> = candidate_vectors(a, b, x, with_b)?
        .into_iter()
        .map(|m| LieVector::new(m, form))
        .collect();
    let coords: Vec<Vec<f64>> = vecs.iter().map(LieVector::coordinates).collect();
    let m = DMatrix::from_fn(coords.len(), coords[0].len(), |i, j| coords[i][j]);
    let sv = singular_values(&m);
    let top = sv[0];
    let rank = sv.iter().filter(|&&s| s > tol_rank * top).count();
    let ratio = sv[sv.len() - 1] / top;
    let max_residual = vecs
        .iter()
        .map(|v| v.residuals.form.max(v.residuals.trace))
        .fold(0.0, f64::max);
    let verdict = if vecs.len() == SU31_DIM && ratio > ACCEPT_RATIO {
        Verdict::FullRank
    } else if vecs.len() < SU31_DIM || ratio < REJECT_RATIO {
        Verdict::Deficient
    } else {
        return Err(Error::DeadBand(format!("σ_min/σ_max = {ratio:e}")));
    };
    Ok(DensityCertificate {
        vectors: vecs.len(),
        rank,
        singular_values: sv,
        ratio,
        max_residual,
        verdict,
    })
}

/// Every Hermitian form `H` with `G*HG = H` for all generators, as a basis of the
/// rational solution space.
pub fn invariant_hermitian_forms(gens: &[CycloMatrix]) -> Result<Vec<CycloMatrix>> {
    let n = gens.first().map_or(0, CycloMatrix::rows);
    if n == 0 || gens.iter().any(|g| g.rows() != n || g.cols() != n) {
        return Err(Error::Shape("generators must be square of one size".into()));
    }
    // Unknowns: the rational coordinates (a, b) of every entry of H.
    let unknowns = 2 * n * n;
    let unit = |u: usize| -> CycloMatrix {
        let mut e = CycloMatrix::zeros(n, n);
        let entry = u / 2;
        e[(entry / n, entry % n)] = if u % 2 == 0 { CycloNum::one() } else { CycloNum::zeta() };
        e
    };
    let flatten = |m: &CycloMatrix| -> Vec<CycloNum> {
        let mut out = Vec::with_capacity(unknowns);
        for i in 0..n {
            for j in 0..n {
                out.push(CycloNum::from_rational(m[(i, j)].a.clone()));
                out.push(CycloNum::from_rational(m[(i, j)].b.clone()));
            }
        }
        out
    };
    let mut blocks: Vec<Box<dyn Fn(&CycloMatrix) -> CycloMatrix>> = gens
        .iter()
        .map(|g| {
            let (g, ga) = (g.clone(), g.adjoint());
            Box::new(move |h: &CycloMatrix| &(&(&ga * h) * &g) - h) as Box<dyn Fn(&CycloMatrix) -> CycloMatrix>
        })
        .collect();
    blocks.push(Box::new(|h: &CycloMatrix| h - &h.adjoint()));
    let mut rows: Vec<Vec<CycloNum>> = vec![Vec::with_capacity(unknowns); blocks.len() * unknowns];
    for u in 0..unknowns {
        let e = unit(u);
        for (bi, f) in blocks.iter().enumerate() {
            for (r, v) in flatten(&f(&e)).into_iter().enumerate() {
                rows[bi * unknowns + r].push(v);
            }
        }
    }
    let system = CycloMatrix::from_rows(rows)?;
    let kernel = system.kernel();
    Ok((0..kernel.cols())
        .map(|c| {
            let mut h = CycloMatrix::zeros(n, n);
            for i in 0..n {
                for j in 0..n {
                    let a = kernel[(2 * (i * n + j), c)].clone();
                    let b = kernel[(2 * (i * n + j) + 1, c)].clone();
                    h[(i, j)] = &a + &(&b * &CycloNum::zeta());
                }
            }
            h
        })
        .collect())
}
