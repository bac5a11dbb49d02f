//! Exact Lyapunov-sum and Siegel–Veech formulas.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::surface::{OrbitGraph, Stratum, StratumKind};

/// Which quantity a [`RationalSum`] holds.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SumTag {
    /// `λ₁ + … + λ_g`.
    EkzSum,
    /// `(π²/3)·c_area`.
    CareaHat,
}

/// Exact rational value with its meaning; serialized as a `"p/q"` string.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RationalSum {
    #[serde(serialize_with = "ser_rational")]
    pub value: BigRational,
    pub tag: SumTag,
}

fn ser_rational<S: serde::Serializer>(q: &BigRational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&rational_string(q))
}

/// `"p/q"`, or `"p"` when the denominator is 1.
pub fn rational_string(q: &BigRational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Contribution of the zeros and poles to the sum of the positive exponents.
pub fn local_term(st: &Stratum) -> BigRational {
    match st.kind {
        StratumKind::Quadratic => {
            st.orders.iter().map(|&d| rat(d * (d + 4), d + 2)).sum::<BigRational>() / rat(24, 1)
        }
        StratumKind::Abelian => {
            st.orders.iter().map(|&m| rat(m * (m + 2), m + 1)).sum::<BigRational>() / rat(12, 1)
        }
    }
}

/// `λ₁ + … + λ_g = local_term + (π²/3)·c_area`.
pub fn ekz_sum(st: &Stratum, carea_hat: &BigRational) -> BigRational {
    local_term(st) + carea_hat
}

/// `(π²/3)·c_area` of an arithmetic Teichmüller curve: mean over the orbit of `Σ h/w`
/// over horizontal cylinders.
pub fn carea_from_orbit(g: &OrbitGraph) -> Result<BigRational> {
    if g.is_empty() {
        return Err(Error::Parameters("empty orbit".into()));
    }
    let mut total = BigRational::zero();
    for dec in g.horizontal_cylinders()? {
        for c in &dec.cylinders {
            total += rat(c.height as i64, c.width as i64);
        }
    }
    Ok(total / rat(g.len() as i64, 1))
}

/// `(π²/3)·c_area` for a genus-zero quadratic stratum, which depends only on the orders.
pub fn carea_genus0(st: &Stratum) -> Result<BigRational> {
    if st.genus != 0 || st.kind != StratumKind::Quadratic {
        return Err(Error::Parameters(format!("{st} is not a genus-zero quadratic stratum")));
    }
    Ok(-local_term(st))
}

/// Sum of the positive exponents over the locus of cyclic covers of degree `d` branched
/// at `n` points.
pub fn sum_lambda_cover(n: usize, d: usize) -> Result<BigRational> {
    if d < 3 || n < 5 || n % d != 0 {
        return Err(Error::Parameters(format!("need d ≥ 3, n ≥ 5 and d | n, got n={n}, d={d}")));
    }
    let (n, d) = (n as i64, d as i64);
    Ok(if d % 2 == 1 {
        rat((d * d - 1) * (n - 2), 12 * d)
    } else {
        rat((n - 2) * (d * d * (n - 3) + 2 * n), 12 * d * (n - 3))
    })
}

/// Outcome of [`validate_pu_spectrum`].
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PuVerdict {
    /// Largest `|λ_i + λ_{p+q+1−i}|` over the sorted spectrum.
    pub asymmetry: f64,
    pub zeros: usize,
    pub required_zeros: usize,
    pub pass: bool,
}

/// Spectrum of a cocycle preserving a form of signature `(p, q)`: symmetric under
/// `λ ↦ −λ` and with at least `|p − q|` zero exponents.
pub fn validate_pu_spectrum(spectrum: &[f64], p: usize, q: usize, tol: f64) -> Result<PuVerdict> {
    if spectrum.len() != p + q {
        return Err(Error::Shape(format!(
            "spectrum has {} entries, signature ({p},{q}) needs {}",
            spectrum.len(),
            p + q
        )));
    }
    let mut s = spectrum.to_vec();
    s.sort_by(|a, b| b.total_cmp(a));
    let n = s.len();
    let asymmetry = (0..n).map(|i| (s[i] + s[n - 1 - i]).abs()).fold(0.0, f64::max);
    let zeros = s.iter().filter(|x| x.abs() < tol).count();
    let required_zeros = p.abs_diff(q);
    Ok(PuVerdict {
        asymmetry,
        zeros,
        required_zeros,
        pass: asymmetry < tol && zeros >= required_zeros,
    })
}
