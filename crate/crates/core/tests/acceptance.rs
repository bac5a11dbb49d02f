//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any fails.

mod common;

use std::f64::consts::PI;
use std::process::ExitCode;
use std::time::Instant;

use common::*;
use flatlyap::cover::{carea_cover, cover_stratum, eigenspace_profile, sv_factor};
use flatlyap::cyclotomic::{CycloMatrix, CycloNum, CycloPoly, IntPoly};
use flatlyap::homology::*;
use flatlyap::lyapunov::*;
use flatlyap::surface::{count_cylinders_unit_area, psl2z_orbit, Stratum};
use flatlyap::zariski::*;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn e<E: std::fmt::Display>(err: E) -> String {
    err.to_string()
}

fn monodromy(k: usize) -> Result<MonodromyRep, String> {
    let rep = HomologyRep::from_cover(&cover18(), 100).map_err(e)?;
    MonodromyRep::restrict(&rep, k).map_err(e)
}

fn node_where(m: &MonodromyRep, words: &[&str]) -> Result<usize, String> {
    (0..m.len())
        .find(|&n| words.iter().all(|w| m.word(n, w).is_ok()))
        .ok_or_else(|| format!("no node closes {words:?}"))
}

fn orbit_combinatorics() -> Outcome {
    let s = psl2z_orbit(&basic6(), 100).map_err(e)?;
    let t = psl2z_orbit(&cover18().total, 100).map_err(e)?;
    ensure(s.len() == 3 && t.len() == 3, format!("orbit sizes {} and {}", s.len(), t.len()))?;
    let rep = t.report();
    ensure(rep.cusp_widths == vec![1, 2], format!("cusp widths {:?}", rep.cusp_widths))?;
    ensure(rep.r_fixed == 1, format!("{} r-fixed nodes", rep.r_fixed))?;
    s.check_relations().map_err(e)?;
    t.check_relations().map_err(e)?;
    Ok(format!("|orbit| = 3, 3; cusp widths {:?}; r-fixed {}", rep.cusp_widths, rep.r_fixed))
}

fn cover_construction() -> Outcome {
    let cov = cover18();
    let st = cov.total.stratum().map_err(e)?;
    ensure(cov.total.n_squares() == 18, "square count")?;
    ensure(cov.total.genus() == 4, "genus")?;
    ensure(st.to_string() == "Q(7,1^5)", format!("stratum {st}"))?;
    let t = &cov.deck;
    let free = (0..18).all(|i| t[i] != i && t[t[i]] != i && t[t[t[i]]] == i);
    ensure(free, "deck is not free of order 3")?;
    ensure(cov.riemann_hurwitz(), "Riemann-Hurwitz fails")?;
    Ok(format!("18 squares, genus 4, {st}, deck free of order 3"))
}

fn exact_sums() -> Outcome {
    let st = Stratum::quadratic(vec![7, 1, 1, 1, 1, 1]).map_err(e)?;
    let local = local_term(&st);
    let carea = carea_from_orbit(&psl2z_orbit(&cover18().total, 100).map_err(e)?).map_err(e)?;
    let sum = ekz_sum(&st, &carea);
    ensure(local == q(19, 27), format!("local term {local}"))?;
    ensure(carea == q(5, 27), format!("c_area {carea}"))?;
    ensure(sum == q(8, 9), format!("sum {sum}"))?;
    Ok(format!("local {local}, carea {carea}, sum {sum}"))
}

fn non_varying() -> Outcome {
    for n in [6usize, 9, 12] {
        let got = ekz_sum(&cover_stratum(n, 3).map_err(e)?, &carea_cover(n, 3).map_err(e)?);
        ensure(got == q(8 * (n as i64 - 2), 36), format!("n = {n}: {got}"))?;
    }
    let even = ekz_sum(&cover_stratum(8, 4).map_err(e)?, &carea_cover(8, 4).map_err(e)?);
    ensure(even == q(12, 5), format!("(8,4): {even}"))?;
    for (n, d) in [(6usize, 3usize), (9, 3), (12, 3), (8, 4)] {
        let mut orders = vec![n as i64 - 5];
        orders.extend(std::iter::repeat_n(-1, n - 1));
        let base = carea_genus0(&Stratum::quadratic(orders).map_err(e)?).map_err(e)?;
        let want = sv_factor(d).map_err(e)? * base;
        ensure(carea_cover(n, d).map_err(e)? == want, format!("carea_cover({n},{d})"))?;
    }
    Ok("n = 6, 9, 12 give (8/36)(n-2); (8,4) gives 12/5; carea_cover factorizes".into())
}

fn eigenspace_profiles() -> Outcome {
    let rep = HomologyRep::from_cover(&cover18(), 100).map_err(e)?;
    let mut exact = Vec::new();
    for k in [1, 2] {
        let closed = eigenspace_profile(6, 3, k).map_err(e)?;
        for (n, b) in rep.bases.iter().enumerate() {
            let t = &rep.deck.as_ref().ok_or("no deck")?[n];
            let iso = isotypic_basis(t, &b.omega, k).map_err(e)?;
            ensure(iso.basis.cols() == closed.dim, format!("dim at node {n}, k = {k}"))?;
            ensure(iso.signature == closed.signature, format!("signature at node {n}, k = {k}"))?;
        }
        exact.push(closed.signature);
    }
    let mut pair = exact.clone();
    pair.sort();
    ensure(pair == vec![(1, 3), (3, 1)], format!("signatures {exact:?}"))?;
    for n in 4..=12 {
        for d in 2..=6 {
            for k in 1..d {
                let p = eigenspace_profile(n, d, k).map_err(e)?;
                ensure(p.signature.0 + p.signature.1 == p.dim, format!("({n},{d},{k})"))?;
            }
        }
    }
    Ok(format!("dims (4,4), signatures {exact:?} closed form = exact; grid p+q = dim"))
}

fn random_invertible(rng: &mut ChaCha8Rng) -> CycloMatrix {
    loop {
        let m = CycloMatrix::from_fn(4, 4, |_, _| {
            CycloNum::from_ints(rng.random_range(-3..=3), rng.random_range(-3..=3))
        });
        if !m.det().map(|d| d.is_zero()).unwrap_or(true) {
            return m;
        }
    }
}

fn monodromy_certificates() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for k in [1, 2] {
        let m = monodromy(k)?;
        let start = node_where(&m, &[RHO1, RHO2])?;
        let x = m.word(start, RHO1).map_err(e)?;
        let y = m.word(start, RHO2).map_err(e)?;
        let rep = irreducibility_certificate(&x, &y).map_err(e)?;
        ensure(rep.det1 == Some(q(285, 1)), format!("k = {k}: det1² = {}", rep.det1_squared))?;
        ensure(rep.det2 == Some(q(5292, 1)), format!("k = {k}: det2² = {}", rep.det2_squared))?;
        ensure(rep.irreducible, "verdict")?;
        for trial in 0..4 {
            let p = random_invertible(&mut rng);
            let pi = p.inverse().map_err(e)?;
            let u = CycloNum::zeta_pow(trial);
            let x2 = (&(&pi * &x) * &p).scale(&u);
            let y2 = (&(&pi * &y) * &p).scale(&-u.clone());
            let r2 = irreducibility_certificate(&x2, &y2).map_err(e)?;
            ensure(r2.det1 == rep.det1 && r2.det2 == rep.det2, "basis change altered the certificate")?;
        }
    }
    Ok("|det(XY-YX)| = 285, |det(UV-VU)| = 5292 on k = 1, 2; stable under 4 random bases".into())
}

fn spectrum_algebra() -> Outcome {
    let m = monodromy(1)?;
    let s3 = (0..m.len()).find(|&n| m.h_target[n] == n).ok_or("no h-fixed node")?;
    let c = &m.word(s3, MU2).map_err(e)? * &m.word(s3, MU1).map_err(e)?;
    let z = |s: &str| zexpr(s);
    let published = CycloPoly::from_ints(&[-1, 1]).mul(&CycloPoly::new(vec![z("-z"), z("2"), z("-2z"), z("1")]));
    let (j, dist) = match_spectrum_up_to_sixth_roots(&c, &published);
    ensure(dist < 1e-8, format!("spectrum distance {dist:e}"))?;
    let cs = conjugate_spectrum_test(&c).map_err(e)?;
    let m_poly = IntPoly::from_i64(&[1, 2, 8, 5, 8, 2, 1]);
    ensure(cs.min_poly == m_poly, "galois norm differs from M(T)")?;
    ensure(!m_poly.is_cyclotomic().map_err(e)?, "M(T) reported cyclotomic")?;
    let q_poly = IntPoly::from_i64(&[-1, 0, -6, 8, -12, 12, -8, 6, 0, 1]);
    let product = IntPoly::from_i64(&[-1, 1]).mul(&IntPoly::from_i64(&[1, -1, 1])).mul(&m_poly);
    ensure(product == q_poly, "(T-1)(T^2-T+1)M(T) differs from Q(T)")?;
    ensure(cs.distinct_from_conjugate && cs.gap > 1e-6, format!("gap {:e}", cs.gap))?;
    Ok(format!("match at j = {j} (distance {dist:.1e}); M(T) exact, not cyclotomic; gap {:.3}", cs.gap))
}

fn zariski_certificate() -> Outcome {
    let (a, b) = (published_a(), published_b());
    let forms = invariant_hermitian_forms(&[a.clone(), b.clone()]).map_err(e)?;
    ensure(forms.len() == 1, format!("{} invariant forms", forms.len()))?;
    let h = forms[0].embed();
    let x = log_of_cube(&(&b * &a).embed(), &h).map_err(e)?;
    let r = &x.residuals;
    let exp = r.exp.ok_or("no exp residual")?;
    ensure(exp < 1e-8 && r.form < 1e-8 && r.trace < 1e-8, format!("residuals {r:?}"))?;
    let full = density_certificate(&a.embed(), &b.embed(), &x.matrix, &h, true, 1e-8).map_err(e)?;
    ensure(full.rank == 15 && full.ratio > 1e-8, format!("rank {} ratio {:e}", full.rank, full.ratio))?;
    let part = density_certificate(&a.embed(), &b.embed(), &x.matrix, &h, false, 1e-8).map_err(e)?;
    ensure(part.rank <= 9, format!("rank without B-conjugates {}", part.rank))?;
    Ok(format!(
        "residuals exp {exp:.1e} form {:.1e} trace {:.1e}; rank 15 (ratio {:.2e}); without B {}",
        r.form, r.trace, full.ratio, part.rank
    ))
}

fn monte_carlo() -> Outcome {
    let rep = HomologyRep::from_cover(&cover18(), 100).map_err(e)?;
    let m = MonodromyRep::restrict(&rep, 1).map_err(e)?;
    let cocycle = Cocycle::from_monodromy(&m).map_err(e)?;
    let params = EstimateParams {
        max_digits: 50_000,
        trials: 20,
        seed: 2024,
    };
    let r = estimate_exponents(&cocycle, &params).map_err(e)?;
    ensure(r.digits >= 1_000_000, format!("{} digits", r.digits))?;
    ensure((r.calibration - 1.0).abs() < 0.02, format!("calibration {}", r.calibration))?;
    let l = &r.exponents;
    ensure((l[0] - 4.0 / 9.0).abs() < 0.03, format!("λ1 = {}", l[0]))?;
    ensure(l[1].abs() < 0.02 && l[2].abs() < 0.02, format!("λ2, λ3 = {}, {}", l[1], l[2]))?;
    ensure((l[0] + l[3]).abs() < 0.02, format!("λ1 + λ4 = {}", l[0] + l[3]))?;
    let se = r.stderr.iter().cloned().fold(0.0, f64::max);
    let pu = validate_pu_spectrum(l, 3, 1, 3.0 * se).map_err(e)?;
    ensure(pu.pass, format!("pseudo-unitary check {pu:?}"))?;
    let probe = neutral_isometry_probe(&cocycle, &r).map_err(e)?;
    ensure(probe.definite, format!("neutral form eigenvalues {:?}", probe.form_eigenvalues))?;

    let full = Cocycle::from_homology(&rep).map_err(e)?;
    let fp = EstimateParams {
        max_digits: 25_000,
        trials: 20,
        seed: 2024,
    };
    let fr = estimate_exponents(&full, &fp).map_err(e)?;
    let f = &fr.exponents;
    let doubled = (f[0] - 4.0 / 9.0).abs() < 0.03
        && (f[1] - 4.0 / 9.0).abs() < 0.03
        && f[2..6].iter().all(|x| x.abs() < 0.02)
        && (0..4).all(|i| (f[i] + f[7 - i]).abs() < 0.02);
    ensure(doubled, format!("full spectrum {f:?}"))?;
    Ok(format!(
        "calibration {:.4}; E(ζ) [{:.4}, {:.4}, {:.4}, {:.4}] over {} digits; full H1 top pair {:.4}, {:.4}; neutral form {:?}",
        r.calibration,
        l[0],
        l[1],
        l[2],
        l[3],
        r.digits,
        f[0],
        f[1],
        probe.form_eigenvalues.iter().map(|x| (x * 100.0).round() / 100.0).collect::<Vec<_>>()
    ))
}

fn siegel_veech_counting() -> Outcome {
    let l = 100.0;
    let n = count_cylinders_unit_area(&basic6(), l).map_err(e)?;
    let measured = n.to_f64().ok_or("count overflow")? / (PI * l * l);
    let exact = 5.0 / 9.0 * 3.0 / (PI * PI);
    let rel = (measured - exact).abs() / exact;
    ensure(rel < 0.25, format!("measured {measured:.5}, exact {exact:.5}"))?;
    Ok(format!("N_area/(πL²) = {measured:.5} vs c_area = {exact:.5} ({:.2}% off)", 100.0 * rel))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("orbit combinatorics", orbit_combinatorics),
        ("cover construction", cover_construction),
        ("exact Lyapunov sums", exact_sums),
        ("non-varying identities", non_varying),
        ("eigenspace profile", eigenspace_profiles),
        ("monodromy certificates", monodromy_certificates),
        ("spectrum algebra", spectrum_algebra),
        ("Zariski certificate", zariski_certificate),
        ("Monte-Carlo estimation", monte_carlo),
        ("Siegel-Veech counting", siegel_veech_counting),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = check();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS {:>2} {name} ({secs:.1}s): {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {:>2} {name} ({secs:.1}s): {why}", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
