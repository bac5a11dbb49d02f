//! Monte-Carlo estimation of Lyapunov exponents of a cocycle over an orbit graph, driven
//! by continued-fraction digits of Gauss-distributed points.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::cyclotomic::CycloMatrix;
use crate::error::{Error, Result};
use crate::homology::{to_cyclo, HomologyRep, MonodromyRep};
use crate::numeric::{eigenvalues, CMatrix};
use crate::surface::{origami_inverse, SquareTiledSurface};

/// Digits extracted from one Gauss sample before drawing a fresh one.
pub const RESAMPLE_DIGITS: usize = 40;

/// Samples closer to 0 than this are redrawn before a digit is read.
const MIN_SAMPLE: f64 = 1e-12;

/// Environment variable bounding the worker threads of the estimator.
pub const THREADS_ENV: &str = "FLATLYAP_THREADS";

/// Linear cocycle over the `h`/`r` orbit graph: a matrix per node and generator, with
/// an optional invariant Hermitian form per node.
#[derive(Clone, Debug)]
pub struct Cocycle {
    dim: usize,
    h: Vec<CMatrix>,
    h_target: Vec<usize>,
    /// `h_inv[n]`: fiber `n` to fiber `h_source[n]`.
    h_inv: Vec<CMatrix>,
    h_source: Vec<usize>,
    r: Vec<CMatrix>,
    r_target: Vec<usize>,
    /// Product of the `h` edges once around the `h`-cycle starting at each node.
    h_loop: Vec<CMatrix>,
    h_inv_loop: Vec<CMatrix>,
    cycle_len: Vec<usize>,
    forms: Option<Vec<CMatrix>>,
    signature: (usize, usize),
}

fn embed_int(m: &DMatrix<i64>) -> CMatrix {
    m.map(|x| Complex64::new(x as f64, 0.0))
}

fn check_invertible(m: &CMatrix) -> Result<()> {
    let det = m.determinant();
    if !det.norm().is_finite() || det.norm() < 1e-12 {
        return Err(Error::Singular);
    }
    Ok(())
}

impl Cocycle {
    /// Cocycle from explicit per-node matrices. `h_inv` is computed numerically.
    pub fn new(
        h: Vec<CMatrix>,
        h_target: Vec<usize>,
        r: Vec<CMatrix>,
        r_target: Vec<usize>,
        forms: Option<Vec<CMatrix>>,
        signature: (usize, usize),
    ) -> Result<Self> {
        let h_inv = h
            .iter()
            .map(|m| m.clone().try_inverse().ok_or(Error::Singular))
            .collect::<Result<Vec<_>>>()?;
        Self::with_inverses(h, h_target, h_inv, r, r_target, forms, signature)
    }

    fn with_inverses(
        h: Vec<CMatrix>,
        h_target: Vec<usize>,
        h_inv_at_source: Vec<CMatrix>,
        r: Vec<CMatrix>,
        r_target: Vec<usize>,
        forms: Option<Vec<CMatrix>>,
        signature: (usize, usize),
    ) -> Result<Self> {
        let n = h.len();
        if n == 0 || r.len() != n || h_target.len() != n || r_target.len() != n {
            return Err(Error::Shape("cocycle needs one h and one r matrix per node".into()));
        }
        let dim = h[0].nrows();
        if dim != signature.0 + signature.1 {
            return Err(Error::Shape(format!("signature {signature:?} does not match dimension {dim}")));
        }
        for m in h.iter().chain(&r) {
            if m.nrows() != dim || m.ncols() != dim {
                return Err(Error::Shape("edge matrices must share one square size".into()));
            }
            check_invertible(m)?;
        }
        let mut sorted = h_target.clone();
        sorted.sort_unstable();
        if sorted != (0..n).collect::<Vec<_>>() || r_target.iter().any(|&t| t >= n) {
            return Err(Error::Shape("h must permute the nodes".into()));
        }
        let h_source = origami_inverse(&h_target);
        // The inverse of the edge p → h(p) sits at node h(p).
        let mut h_inv = vec![CMatrix::zeros(dim, dim); n];
        for (p, m) in h_inv_at_source.into_iter().enumerate() {
            h_inv[h_target[p]] = m;
        }
        let mut cycle_len = vec![0; n];
        let mut h_loop = Vec::with_capacity(n);
        let mut h_inv_loop = Vec::with_capacity(n);
        for start in 0..n {
            let (mut node, mut acc, mut len) = (start, CMatrix::identity(dim, dim), 0);
            loop {
                acc = &h[node] * acc;
                node = h_target[node];
                len += 1;
                if node == start {
                    break;
                }
            }
            cycle_len[start] = len;
            h_loop.push(acc);
            let (mut node, mut acc) = (start, CMatrix::identity(dim, dim));
            loop {
                acc = &h_inv[node] * acc;
                node = h_source[node];
                if node == start {
                    break;
                }
            }
            h_inv_loop.push(acc);
        }
        Ok(Cocycle {
            dim,
            h,
            h_target,
            h_inv,
            h_source,
            r,
            r_target,
            h_loop,
            h_inv_loop,
            cycle_len,
            forms,
            signature,
        })
    }

    /// Deck-eigenspace monodromy, embedded into complex matrices, with its Hermitian forms.
    pub fn from_monodromy(m: &MonodromyRep) -> Result<Self> {
        let emb = |v: &[CycloMatrix]| v.iter().map(CycloMatrix::embed).collect::<Vec<_>>();
        let h_inv = m.h.iter().map(|x| x.inverse().map(|i| i.embed())).collect::<Result<Vec<_>>>()?;
        let forms = m.fibers.iter().map(|f| f.hermitian.embed()).collect();
        let signature = m
            .fibers
            .first()
            .map(|f| f.signature)
            .ok_or_else(|| Error::Parameters("empty representation".into()))?;
        Self::with_inverses(
            emb(&m.h),
            m.h_target.clone(),
            h_inv,
            emb(&m.r),
            m.r_target.clone(),
            Some(forms),
            signature,
        )
    }

    /// Action on the full first homology of every surface of the orbit.
    pub fn from_homology(rep: &HomologyRep) -> Result<Self> {
        let h_inv = rep
            .h
            .iter()
            .map(|m| to_cyclo(m).inverse().map(|i| i.embed()))
            .collect::<Result<Vec<_>>>()?;
        let rank = rep.bases.first().map_or(0, |b| b.rank());
        Self::with_inverses(
            rep.h.iter().map(embed_int).collect(),
            rep.graph.h_map(),
            h_inv,
            rep.r.iter().map(embed_int).collect(),
            rep.graph.r_map(),
            None,
            (rank / 2, rank / 2),
        )
    }

    /// The defining two-dimensional representation, realised as the homology of the torus.
    pub fn calibration() -> Result<Self> {
        Self::from_homology(&HomologyRep::from_surface(&SquareTiledSurface::torus(), 1)?)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.h.len()
    }

    pub fn is_empty(&self) -> bool {
        self.h.is_empty()
    }

    pub fn signature(&self) -> (usize, usize) {
        self.signature
    }

    pub fn form(&self, node: usize) -> Option<&CMatrix> {
        self.forms.as_ref().map(|f| &f[node])
    }

    /// Apply `h^a` (or `h^{−a}`) to `frame` starting at `node`; returns the end node.
    fn apply_h_power(&self, node: usize, a: u64, inverse: bool, frame: &mut CMatrix) -> usize {
        let len = self.cycle_len[node] as u64;
        let (loops, rest) = (a / len, a % len);
        if loops > 0 {
            let base = if inverse { &self.h_inv_loop[node] } else { &self.h_loop[node] };
            *frame = matrix_power(base, loops) * &*frame;
        }
        let mut node = node;
        for _ in 0..rest {
            if inverse {
                *frame = &self.h_inv[node] * &*frame;
                node = self.h_source[node];
            } else {
                *frame = &self.h[node] * &*frame;
                node = self.h_target[node];
            }
        }
        node
    }
}

fn matrix_power(m: &CMatrix, mut e: u64) -> CMatrix {
    let n = m.nrows();
    let mut acc = CMatrix::identity(n, n);
    let mut base = m.clone();
    while e > 0 {
        if e & 1 == 1 {
            acc = &acc * &base;
        }
        e >>= 1;
        if e > 0 {
            base = &base * &base;
        }
    }
    acc
}

/// Sample from the Gauss measure `dx / ((1+x)·ln 2)` on `(0,1)`.
fn gauss_sample<R: Rng>(rng: &mut R) -> f64 {
    loop {
        let u: f64 = rng.random();
        let x = u.exp2() - 1.0;
        if x > MIN_SAMPLE && x < 1.0 {
            return x;
        }
    }
}

/// Continued-fraction digit stream of a chain of fresh Gauss samples.
struct DigitStream<'a, R: Rng> {
    rng: &'a mut R,
    x: f64,
    used: usize,
}

impl<'a, R: Rng> DigitStream<'a, R> {
    fn new(rng: &'a mut R) -> Self {
        let x = gauss_sample(rng);
        DigitStream { rng, x, used: 0 }
    }

    fn next_digit(&mut self) -> u64 {
        if self.used == RESAMPLE_DIGITS || self.x < MIN_SAMPLE {
            self.x = gauss_sample(self.rng);
            self.used = 0;
        }
        let inv = 1.0 / self.x;
        let a = inv.floor();
        self.x = inv - a;
        self.used += 1;
        (a as u64).max(1)
    }
}

/// State at the end of one trajectory.
#[derive(Clone, Debug)]
pub struct TrialOutcome {
    /// Accumulated `log |R_ii|` per frame column.
    pub log_stretch: Vec<f64>,
    /// `log q_N` of the continuant of the digits read.
    pub time: f64,
    pub node: usize,
    /// Orthonormal frame at the final node; leading columns grow fastest.
    pub frame: CMatrix,
}

/// Follow the geodesic coded by `digits` continued-fraction digits: the word
/// `h^{a₁} r h^{−a₂} r h^{a₃} r …`, re-orthonormalising after every digit.
pub fn run_trial(cocycle: &Cocycle, digits: usize, rng: &mut ChaCha8Rng) -> TrialOutcome {
    let dim = cocycle.dim;
    let mut node = rng.random_range(0..cocycle.len());
    let mut frame = CMatrix::identity(dim, dim);
    let mut log_stretch = vec![0.0; dim];
    let mut time = 0.0;
    let mut ratio = f64::INFINITY;
    let mut stream = DigitStream::new(rng);
    for k in 0..digits {
        let a = stream.next_digit();
        node = cocycle.apply_h_power(node, a, k % 2 == 1, &mut frame);
        frame = &cocycle.r[node] * frame;
        node = cocycle.r_target[node];
        let (q, r) = frame.qr().unpack();
        for (i, s) in log_stretch.iter_mut().enumerate() {
            *s += r[(i, i)].norm().ln();
        }
        frame = q;
        // q_k / q_{k−1} = a_k + q_{k−2} / q_{k−1}
        ratio = a as f64 + 1.0 / ratio;
        time += ratio.ln();
    }
    TrialOutcome {
        log_stretch,
        time,
        node,
        frame,
    }
}

/// Trajectory length, repetition count and master seed of an estimate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct EstimateParams {
    /// Continued-fraction digits per trajectory.
    pub max_digits: usize,
    pub trials: usize,
    pub seed: u64,
}

impl EstimateParams {
    fn validate(&self) -> Result<()> {
        if self.max_digits == 0 || self.trials < 2 {
            return Err(Error::Parameters("need at least one digit and two trials".into()));
        }
        Ok(())
    }
}

/// Independent per-trial generator: the master seed with the trial index as stream.
pub fn trial_rng(seed: u64, trial: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial as u64);
    rng
}

/// Estimated exponents with standard errors and trajectory bookkeeping.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SpectrumReport {
    /// Sorted descending.
    pub exponents: Vec<f64>,
    pub stderr: Vec<f64>,
    pub signature: (usize, usize),
    /// Number of exponents forced to vanish by the signature, `|p − q|`.
    pub zero_count: usize,
    /// Top exponent of the defining representation under the same parameters.
    pub calibration: f64,
    /// Total digits consumed over all trials.
    pub digits: u64,
    pub digits_per_trial: usize,
    pub trials: usize,
    pub seed: u64,
    /// Mean `log q_N` per trial.
    pub mean_time: f64,
}

fn thread_pool() -> Result<rayon::ThreadPool> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Ok(v) = std::env::var(THREADS_ENV) {
        let n = v
            .parse::<usize>()
            .ok()
            .filter(|&n| n > 0)
            .ok_or_else(|| Error::Parameters(format!("{THREADS_ENV} must be a positive integer")))?;
        builder = builder.num_threads(n);
    }
    builder.build().map_err(|e| Error::Numerical(e.to_string()))
}

/// Per-trial exponent vectors (unsorted frame order) and times, in trial order.
fn trial_exponents(cocycle: &Cocycle, params: &EstimateParams) -> Result<Vec<(Vec<f64>, f64)>> {
    params.validate()?;
    let pool = thread_pool()?;
    Ok(pool.install(|| {
        (0..params.trials)
            .into_par_iter()
            .map(|t| {
                let out = run_trial(cocycle, params.max_digits, &mut trial_rng(params.seed, t));
                let ex = out.log_stretch.iter().map(|s| s / out.time).collect();
                (ex, out.time)
            })
            .collect()
    }))
}

fn mean_and_stderr(samples: &[Vec<f64>]) -> (Vec<f64>, Vec<f64>) {
    let n = samples.len() as f64;
    let dim = samples[0].len();
    let mean: Vec<f64> = (0..dim).map(|i| samples.iter().map(|s| s[i]).sum::<f64>() / n).collect();
    let se = (0..dim)
        .map(|i| {
            let var = samples.iter().map(|s| (s[i] - mean[i]).powi(2)).sum::<f64>() / (n - 1.0);
            (var / n).sqrt()
        })
        .collect();
    (mean, se)
}

/// Top exponent of the defining representation; 1 up to sampling error.
pub fn calibrate(params: &EstimateParams) -> Result<f64> {
    let samples = trial_exponents(&Cocycle::calibration()?, params)?;
    let tops: Vec<Vec<f64>> = samples.into_iter().map(|(e, _)| vec![e[0]]).collect();
    Ok(mean_and_stderr(&tops).0[0])
}

/// Estimate the whole spectrum. The calibration deviation from 1 is added, relative to
/// each exponent, to its standard error.
pub fn estimate_exponents(cocycle: &Cocycle, params: &EstimateParams) -> Result<SpectrumReport> {
    let samples = trial_exponents(cocycle, params)?;
    let calibration = calibrate(params)?;
    let times: Vec<f64> = samples.iter().map(|(_, t)| *t).collect();
    let exps: Vec<Vec<f64>> = samples.into_iter().map(|(e, _)| e).collect();
    let (mean, se) = mean_and_stderr(&exps);
    let mut pairs: Vec<(f64, f64)> = mean
        .iter()
        .zip(&se)
        .map(|(&m, &s)| (m, s.hypot((calibration - 1.0) * m)))
        .collect();
    pairs.sort_by(|a, b| b.0.total_cmp(&a.0));
    let (p, q) = cocycle.signature;
    Ok(SpectrumReport {
        exponents: pairs.iter().map(|x| x.0).collect(),
        stderr: pairs.iter().map(|x| x.1).collect(),
        signature: cocycle.signature,
        zero_count: p.abs_diff(q),
        calibration,
        digits: (params.max_digits * params.trials) as u64,
        digits_per_trial: params.max_digits,
        trials: params.trials,
        seed: params.seed,
        mean_time: times.iter().sum::<f64>() / times.len() as f64,
    })
}

/// Restriction of the invariant Hermitian form to the estimated neutral subspace.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NeutralProbe {
    pub neutral_dim: usize,
    /// Eigenvalues of the restricted form, in a Euclidean-orthonormal basis.
    pub form_eigenvalues: Vec<f64>,
    pub definite: bool,
}

/// Relative size below which an eigenvalue of the restricted form counts as zero.
const DEFINITE_TOL: f64 = 1e-3;

/// Replays trial 0 of `report` and evaluates the Hermitian form on the frame columns
/// between the expanding and contracting blocks. Those columns span a complement of the
/// unstable space inside its orthogonal, so the form there is the form on the neutral
/// Oseledets space.
pub fn neutral_isometry_probe(cocycle: &Cocycle, report: &SpectrumReport) -> Result<NeutralProbe> {
    let k0 = report.zero_count;
    let dim = cocycle.dim;
    if k0 == 0 {
        return Ok(NeutralProbe {
            neutral_dim: 0,
            form_eigenvalues: vec![],
            definite: true,
        });
    }
    let k_plus = (dim - k0) / 2;
    let out = run_trial(cocycle, report.digits_per_trial, &mut trial_rng(report.seed, 0));
    let h = cocycle
        .form(out.node)
        .ok_or_else(|| Error::Parameters("cocycle carries no Hermitian form".into()))?;
    let v = out.frame.columns(k_plus, k0).into_owned();
    let g = v.adjoint() * h * &v;
    let g = (&g + g.adjoint()).scale(0.5);
    if g.iter().any(|z| !z.norm().is_finite()) {
        return Err(Error::Numerical("ill-conditioned frame".into()));
    }
    let mut ev: Vec<f64> = eigenvalues(&g).iter().map(|z| z.re).collect();
    ev.sort_by(f64::total_cmp);
    let scale = h.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let all_pos = ev.iter().all(|&x| x > DEFINITE_TOL * scale);
    let all_neg = ev.iter().all(|&x| x < -DEFINITE_TOL * scale);
    Ok(NeutralProbe {
        neutral_dim: k0,
        form_eigenvalues: ev,
        definite: all_pos || all_neg,
    })
}
