//! Subcommand bodies. Each returns a [`Report`] carrying every output format.

use std::fmt::{self, Write as _};
use std::path::Path;

use serde::Deserialize;
use serde_json::{json, Value};

use flatlyap::cover::{carea_cover, cover_stratum, cyclic_cover, BranchData, CoveringSurface};
use flatlyap::homology::{irreducibility_certificate, HomologyRep, MonodromyRep};
use flatlyap::lyapunov::{
    carea_from_orbit, ekz_sum, estimate_exponents, local_term, neutral_isometry_probe, rational_string,
    sum_lambda_cover, validate_pu_spectrum, Cocycle, EstimateParams,
};
use flatlyap::surface::{psl2z_orbit, SquareTiledSurface};
use flatlyap::zariski::{
    density_certificate, hyperbolicity_check, invariant_hermitian_forms, log_of_cube, Verdict,
};
use flatlyap::CycloMatrix;

use crate::{Cli, Command, CoverInput};

/// Commutator loops based at the first node where both close.
pub const RHO1: &str = "h r H^3 r h r H^2 r";
pub const RHO2: &str = "r H r h^3 r H r";
/// Elliptic generator and its partner, based at the `h`-fixed node.
pub const MU1: &str = "h";
pub const MU2: &str = "(R H r)^2";

#[derive(Debug)]
pub enum CliError {
    Domain(flatlyap::Error),
    Io(String),
    Usage(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            _ => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Domain(e) => write!(f, "{e}"),
            CliError::Io(e) => write!(f, "{e}"),
            CliError::Usage(e) => write!(f, "{e}"),
        }
    }
}

impl From<flatlyap::Error> for CliError {
    fn from(e: flatlyap::Error) -> Self {
        CliError::Domain(e)
    }
}

type Result<T> = std::result::Result<T, CliError>;

/// One result in every format; `success` is false when a checked identity fails.
pub struct Report {
    pub json: Value,
    pub text: String,
    pub dot: Option<String>,
    pub success: bool,
}

impl Report {
    fn new(json: Value, text: String) -> Self {
        Report {
            json,
            text,
            dot: None,
            success: true,
        }
    }
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn load_surface(path: &Path) -> Result<SquareTiledSurface> {
    Ok(SquareTiledSurface::from_json(&read(path)?)?)
}

fn load_cover(input: &CoverInput) -> Result<CoveringSurface> {
    let text = read(&input.file)?;
    match input.d {
        Some(d) => Ok(cyclic_cover(&BranchData::at_singularities(SquareTiledSurface::from_json(&text)?, d))?),
        None => CoveringSurface::from_json(&text).map_err(|e| {
            CliError::Domain(flatlyap::Error::Parse(format!(
                "{}: not a cover file ({e}); pass --d to build a cover of a base surface",
                input.file.display()
            )))
        }),
    }
}

fn to_value<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("report serializes")
}

fn word_base(m: &MonodromyRep, words: &[&str], node: Option<usize>) -> Result<usize> {
    if let Some(n) = node {
        return Ok(n);
    }
    (0..m.len())
        .find(|&n| words.iter().all(|w| m.word(n, w).is_ok()))
        .ok_or_else(|| CliError::Domain(flatlyap::Error::OpenPath(0)))
}

pub fn run(cli: &Cli) -> Result<Report> {
    let cap = cli.cap;
    match &cli.command {
        Command::Validate { file } => validate(file),
        Command::Stratum { file } => {
            let s = load_surface(file)?;
            let st = s.stratum()?;
            let text = format!("{st}\ngenus {}\n", st.genus);
            Ok(Report::new(json!({"stratum": st.to_string(), "kind": st.kind, "orders": st.orders, "genus": st.genus}), text))
        }
        Command::Cylinders { file } => {
            let dec = load_surface(file)?.horizontal_cylinders()?;
            let mut text = String::new();
            for c in &dec.cylinders {
                let _ = writeln!(text, "width {} height {}", c.width, c.height);
            }
            Ok(Report::new(to_value(&dec), text))
        }
        Command::Orbit { file, dot } => {
            let g = psl2z_orbit(&load_surface(file)?, cap)?;
            let dot_text = g.to_dot();
            if let Some(path) = dot {
                std::fs::write(path, &dot_text).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
            }
            let cylinders: Vec<Vec<(usize, usize)>> =
                g.horizontal_cylinders()?.iter().map(|d| d.shape()).collect();
            let mut text = format!("{} nodes\n", g.len());
            let (h, r) = (g.h_map(), g.r_map());
            for n in 0..g.len() {
                let _ = writeln!(text, "node {n}: h -> {}, r -> {}, cylinders {:?}", h[n], r[n], cylinders[n]);
            }
            let mut report = Report::new(
                json!({"nodes": g.len(), "base": g.base, "h": h, "r": r, "cylinders": cylinders}),
                text,
            );
            report.dot = Some(dot_text);
            Ok(report)
        }
        Command::GraphReport { file } => {
            let rep = psl2z_orbit(&load_surface(file)?, cap)?.report();
            let text = format!(
                "degree {}\ncusp widths {:?}\nr-fixed {}\nhr-fixed {}\n",
                rep.degree, rep.cusp_widths, rep.r_fixed, rep.hr_fixed
            );
            Ok(Report::new(to_value(&rep), text))
        }
        Command::CyclicCover { file, d } => {
            let cov = cyclic_cover(&BranchData::at_singularities(load_surface(file)?, *d))?;
            let st = cov.total.stratum()?;
            let text = format!(
                "{} squares, genus {}, {st}, {} branch points\n",
                cov.total.n_squares(),
                cov.total.genus(),
                cov.branch_vertices.len()
            );
            let json: Value = serde_json::from_str(&cov.to_json()).expect("cover file is JSON");
            Ok(Report::new(json, text))
        }
        Command::LyapunovSum { file, cover, d } => {
            let surface = match (file, cover, d) {
                (_, Some(base), Some(d)) => {
                    cyclic_cover(&BranchData::at_singularities(load_surface(base)?, *d))?.total
                }
                (Some(f), None, _) => load_surface(f)?,
                _ => return Err(CliError::Usage("give a surface file or --cover with --d".into())),
            };
            let st = surface.stratum()?;
            let carea = carea_from_orbit(&psl2z_orbit(&surface, cap)?)?;
            let local = local_term(&st);
            let sum = ekz_sum(&st, &carea);
            let json = json!({
                "stratum": st.to_string(),
                "local_term": rational_string(&local),
                "carea_hat": rational_string(&carea),
                "value": rational_string(&sum),
                "tag": "ekz_sum",
            });
            Ok(Report::new(json, format!("{}\n", rational_string(&sum))))
        }
        Command::Monodromy { input, k } => {
            let m = MonodromyRep::restrict(&HomologyRep::from_cover(&load_cover(input)?, cap)?, *k)?;
            m.check_invariants()?;
            let forms: Vec<&CycloMatrix> = m.fibers.iter().map(|f| &f.hermitian).collect();
            let signature = m.fibers.first().map(|f| f.signature);
            let mut text = format!("k = {k}, {} nodes, fiber dimension {}, signature {signature:?}\n", m.len(), m.dim());
            for e in m.export() {
                let _ = writeln!(text, "{} {} -> {}: det {}", e.node, e.generator, e.target, e.matrix.det()?);
            }
            let json = json!({
                "k": k,
                "nodes": m.len(),
                "dim": m.dim(),
                "signature": signature,
                "forms": forms,
                "edges": m.export(),
            });
            Ok(Report::new(json, text))
        }
        Command::Irreducibility {
            input,
            k,
            rho1,
            rho2,
            node,
        } => {
            let m = MonodromyRep::restrict(&HomologyRep::from_cover(&load_cover(input)?, cap)?, *k)?;
            let base = word_base(&m, &[rho1, rho2], *node)?;
            let x = m.word(base, rho1)?;
            let y = m.word(base, rho2)?;
            let rep = irreducibility_certificate(&x, &y)?;
            let show = |q: &Option<num_rational::BigRational>, sq: &num_rational::BigRational| match q {
                Some(v) => rational_string(v),
                None => format!("sqrt({})", rational_string(sq)),
            };
            let (d1, d2) = (show(&rep.det1, &rep.det1_squared), show(&rep.det2, &rep.det2_squared));
            let verdict = if rep.irreducible { "irreducible" } else { "reducible" };
            let json = json!({
                "k": k,
                "node": base,
                "rho1": rho1,
                "rho2": rho2,
                "det1": d1,
                "det2": d2,
                "det1_value": rep.det1_value,
                "det2_value": rep.det2_value,
                "verdict": verdict,
            });
            let text = format!("|det(XY-YX)| = {d1}\n|det(UV-VU)| = {d2}\n{verdict}\n");
            Ok(Report::new(json, text))
        }
        Command::SpectrumEstimate {
            input,
            k,
            full,
            trials,
            digits,
        } => {
            let rep = HomologyRep::from_cover(&load_cover(input)?, cap)?;
            let cocycle = if *full {
                Cocycle::from_homology(&rep)?
            } else {
                Cocycle::from_monodromy(&MonodromyRep::restrict(&rep, *k)?)?
            };
            let params = EstimateParams {
                max_digits: *digits,
                trials: *trials,
                seed: cli.seed,
            };
            let report = estimate_exponents(&cocycle, &params)?;
            let se = report.stderr.iter().cloned().fold(0.0, f64::max);
            let (p, q) = report.signature;
            let pu = validate_pu_spectrum(&report.exponents, p, q, 3.0 * se)?;
            let probe = if cocycle.form(0).is_some() {
                Some(neutral_isometry_probe(&cocycle, &report)?)
            } else {
                None
            };
            let mut text = String::new();
            for (l, s) in report.exponents.iter().zip(&report.stderr) {
                let _ = writeln!(text, "{l:+.5} ± {s:.5}");
            }
            let _ = writeln!(text, "calibration {:.5}", report.calibration);
            let _ = writeln!(text, "digits {} (seed {})", report.digits, report.seed);
            let _ = writeln!(text, "pseudo-unitary check: {}", if pu.pass { "pass" } else { "fail" });
            if let Some(pr) = &probe {
                let _ = writeln!(text, "neutral form definite: {}", pr.definite);
            }
            let mut json = to_value(&report);
            json["pseudo_unitary"] = to_value(&pu);
            json["neutral"] = to_value(&probe);
            Ok(Report::new(json, text))
        }
        Command::Zariski {
            file,
            d,
            k,
            matrices,
            mu1,
            mu2,
            tol_rank,
            without_b,
        } => zariski(cli, file.as_deref(), *d, *k, matrices.as_deref(), mu1, mu2, *tol_rank, *without_b),
        Command::NonvaryingTable { n, d } => nonvarying(n, d),
    }
}

fn validate(file: &Path) -> Result<Report> {
    let text = read(file)?;
    let surface = SquareTiledSurface::from_json(&text)?;
    let st = surface.stratum()?;
    let is_cover = serde_json::from_str::<Value>(&text)
        .map(|v| v.get("deck").is_some())
        .unwrap_or(false);
    let cover = if is_cover {
        let cov = CoveringSurface::from_json(&text)?;
        Some(json!({"degree": cov.d, "branch_points": cov.branch_vertices.len(), "base_stratum": cov.base.stratum()?.to_string()}))
    } else {
        None
    };
    let out = format!(
        "ok: {} squares, {st}, genus {}{}\n",
        surface.n_squares(),
        st.genus,
        if is_cover { ", valid cyclic cover" } else { "" }
    );
    Ok(Report::new(
        json!({"valid": true, "squares": surface.n_squares(), "stratum": st.to_string(), "genus": st.genus, "cover": cover}),
        out,
    ))
}

#[derive(Deserialize)]
struct Generators {
    #[serde(rename = "A")]
    a: CycloMatrix,
    #[serde(rename = "B")]
    b: CycloMatrix,
}

#[allow(clippy::too_many_arguments)]
fn zariski(
    cli: &Cli,
    file: Option<&Path>,
    d: Option<usize>,
    k: usize,
    matrices: Option<&Path>,
    mu1: &str,
    mu2: &str,
    tol_rank: f64,
    without_b: bool,
) -> Result<Report> {
    if !(tol_rank > 0.0) {
        return Err(CliError::Usage("--tol-rank must be positive".into()));
    }
    let (source, node, a, b, form) = match (matrices, file) {
        (Some(path), _) => {
            let g: Generators = serde_json::from_str(&read(path)?)
                .map_err(|e| CliError::Domain(flatlyap::Error::Parse(e.to_string())))?;
            let forms = invariant_hermitian_forms(&[g.a.clone(), g.b.clone()])?;
            if forms.len() != 1 {
                return Err(CliError::Domain(flatlyap::Error::Invariant(format!(
                    "expected one invariant Hermitian form, found {}",
                    forms.len()
                ))));
            }
            let h = forms.into_iter().next().expect("one form");
            ("matrices", None, g.a, g.b, h)
        }
        (None, Some(f)) => {
            let input = CoverInput {
                file: f.to_path_buf(),
                d,
            };
            let m = MonodromyRep::restrict(&HomologyRep::from_cover(&load_cover(&input)?, cli.cap)?, k)?;
            let node = word_base(&m, &[mu1, mu2], None)?;
            let (a, b) = (m.word(node, mu1)?, m.word(node, mu2)?);
            ("monodromy", Some(node), a, b, m.fibers[node].hermitian.clone())
        }
        (None, None) => return Err(CliError::Usage("give a cover input or --matrices".into())),
    };
    let (ae, be, h) = (a.embed(), b.embed(), form.embed());
    let c = &be * &ae;
    let hyp_c = hyperbolicity_check(&c, 100)?;
    let hyp_a = hyperbolicity_check(&ae, 100)?;
    let x = log_of_cube(&c, &h)?;
    let cert = density_certificate(&ae, &be, &x.matrix, &h, !without_b, tol_rank)?;
    let verdict = match cert.verdict {
        Verdict::FullRank => "full rank",
        Verdict::Deficient => "deficient",
    };
    let text = format!(
        "C = BA: {:?}, moduli {:.4?}\nA: {:?}, projective order {:?}\nresiduals: exp {:.2e}, form {:.2e}, trace {:.2e}\nrank {} of {} (σ_min/σ_max = {:.3e}): {verdict}\n",
        hyp_c.classification,
        hyp_c.moduli,
        hyp_a.classification,
        hyp_a.projective_order,
        x.residuals.exp.unwrap_or(f64::NAN),
        x.residuals.form,
        x.residuals.trace,
        cert.rank,
        cert.vectors,
        cert.ratio
    );
    let mut json = to_value(&cert);
    json["source"] = json!(source);
    json["node"] = json!(node);
    json["residuals"] = to_value(&x.residuals);
    json["hyperbolicity"] = json!({"c": hyp_c, "a": hyp_a});
    Ok(Report::new(json, text))
}

fn nonvarying(ns: &[usize], ds: &[usize]) -> Result<Report> {
    let mut rows = Vec::new();
    let mut text = String::from("n  d  stratum            carea_hat   sum        closed form  equal\n");
    let mut all_equal = true;
    for &n in ns {
        for &d in ds {
            if d < 3 || n < 5 || n % d != 0 {
                continue;
            }
            let st = cover_stratum(n, d)?;
            let carea = carea_cover(n, d)?;
            let sum = ekz_sum(&st, &carea);
            let closed = sum_lambda_cover(n, d)?;
            let equal = sum == closed;
            all_equal &= equal;
            let _ = writeln!(
                text,
                "{n:<2} {d:<2} {:<18} {:<11} {:<10} {:<12} {equal}",
                st.to_string(),
                rational_string(&carea),
                rational_string(&sum),
                rational_string(&closed)
            );
            rows.push(json!({
                "n": n,
                "d": d,
                "stratum": st.to_string(),
                "carea_hat": rational_string(&carea),
                "sum": rational_string(&sum),
                "closed_form": rational_string(&closed),
                "equal": equal,
            }));
        }
    }
    if rows.is_empty() {
        return Err(CliError::Usage("no (n, d) pair with d ≥ 3, n ≥ 5 and d | n".into()));
    }
    let mut report = Report::new(json!({"rows": rows, "all_equal": all_equal}), text);
    report.success = all_equal;
    Ok(report)
}
