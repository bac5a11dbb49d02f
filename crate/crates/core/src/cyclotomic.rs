//! Exact arithmetic in Q(ζ), ζ = exp(2πi/3), with matrices and polynomials over it.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};
use std::str::FromStr;

use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// An element `a + b·ζ` of the cyclotomic field of cube roots of unity.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct CycloNum {
    pub a: BigRational,
    pub b: BigRational,
}

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

impl CycloNum {
    pub fn new(a: BigRational, b: BigRational) -> Self {
        CycloNum { a, b }
    }

    pub fn from_ints(a: i64, b: i64) -> Self {
        CycloNum::new(rat(a), rat(b))
    }

    pub fn from_rational(a: BigRational) -> Self {
        CycloNum::new(a, BigRational::zero())
    }

    pub fn zero() -> Self {
        CycloNum::from_ints(0, 0)
    }

    pub fn one() -> Self {
        CycloNum::from_ints(1, 0)
    }

    pub fn zeta() -> Self {
        CycloNum::from_ints(0, 1)
    }

    /// ζ² = −1 − ζ.
    pub fn zeta2() -> Self {
        CycloNum::from_ints(-1, -1)
    }

    /// ζ^k for any integer k.
    pub fn zeta_pow(k: i64) -> Self {
        match k.rem_euclid(3) {
            0 => CycloNum::one(),
            1 => CycloNum::zeta(),
            _ => CycloNum::zeta2(),
        }
    }

    /// √−3 = ζ − ζ² = 1 + 2ζ.
    pub fn sqrt_minus_three() -> Self {
        CycloNum::from_ints(1, 2)
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.a.is_one() && self.b.is_zero()
    }

    /// True when the value lies in Q.
    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    /// Complex conjugation: ζ ↦ ζ².
    pub fn conj(&self) -> Self {
        CycloNum::new(&self.a - &self.b, -&self.b)
    }

    /// |x|² = x·conj(x) = a² − ab + b².
    pub fn abs2(&self) -> BigRational {
        &self.a * &self.a - &self.a * &self.b + &self.b * &self.b
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let n = self.abs2();
        let c = self.conj();
        Ok(CycloNum::new(c.a / &n, c.b / n))
    }

    pub fn checked_div(&self, rhs: &Self) -> Result<Self> {
        Ok(self * &rhs.inv()?)
    }

    pub fn scale(&self, q: &BigRational) -> Self {
        CycloNum::new(&self.a * q, &self.b * q)
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = CycloNum::one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// Which `±ζ^k` this is, as `(sign, k)`, if it is a sixth root of unity.
    pub fn as_root_of_unity(&self) -> Option<(i8, u8)> {
        for k in 0..3u8 {
            let z = CycloNum::zeta_pow(k as i64);
            if *self == z {
                return Some((1, k));
            }
            if *self == -z {
                return Some((-1, k));
            }
        }
        None
    }

    /// Embedding with ζ ↦ −1/2 + i·√3/2.
    pub fn embed(&self) -> Complex64 {
        let a = rat_to_f64(&self.a);
        let b = rat_to_f64(&self.b);
        Complex64::new(a - 0.5 * b, b * (3f64.sqrt() / 2.0))
    }

    /// Integer coordinates `[a_num, a_den, b_num, b_den]`.
    pub fn to_array(&self) -> Result<[i64; 4]> {
        let f = |x: &BigInt| x.to_i64().ok_or(Error::Overflow);
        Ok([
            f(self.a.numer())?,
            f(self.a.denom())?,
            f(self.b.numer())?,
            f(self.b.denom())?,
        ])
    }

    pub fn from_array(v: [i64; 4]) -> Result<Self> {
        if v[1] == 0 || v[3] == 0 {
            return Err(Error::Parse("zero denominator".into()));
        }
        Ok(CycloNum::new(
            BigRational::new(v[0].into(), v[1].into()),
            BigRational::new(v[2].into(), v[3].into()),
        ))
    }
}

pub(crate) fn rat_to_f64(q: &BigRational) -> f64 {
    match (q.numer().to_f64(), q.denom().to_f64()) {
        (Some(n), Some(d)) if n.is_finite() && d.is_finite() => n / d,
        _ => q.to_f64().unwrap_or(f64::NAN),
    }
}

impl fmt::Display for CycloNum {
    /// Format `a/b+c/d*z`, always with both parts.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = if self.b.is_negative() { '-' } else { '+' };
        let b = self.b.abs();
        write!(
            f,
            "{}/{}{}{}/{}*z",
            self.a.numer(),
            self.a.denom(),
            sign,
            b.numer(),
            b.denom()
        )
    }
}

fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("bad rational '{s}'"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(BigRational::new(n, d))
        }
        None => Ok(BigRational::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

impl FromStr for CycloNum {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let Some(body) = s.strip_suffix("*z") else {
            return Ok(CycloNum::from_rational(parse_rational(&s)?));
        };
        // split at the last sign that is not leading and not an exponent of a fraction
        let bytes = body.as_bytes();
        let mut cut = None;
        for i in (1..bytes.len()).rev() {
            if (bytes[i] == b'+' || bytes[i] == b'-') && bytes[i - 1] != b'/' {
                cut = Some(i);
                break;
            }
        }
        match cut {
            Some(i) => {
                let a = parse_rational(&body[..i])?;
                let rest = &body[i..];
                let b = parse_rational(rest.strip_prefix('+').unwrap_or(rest))?;
                Ok(CycloNum::new(a, b))
            }
            None => Ok(CycloNum::new(BigRational::zero(), parse_rational(body)?)),
        }
    }
}

impl Serialize for CycloNum {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for CycloNum {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Text(String),
            Array([i64; 4]),
        }
        match Repr::deserialize(d)? {
            Repr::Text(t) => t.parse().map_err(serde::de::Error::custom),
            Repr::Array(v) => CycloNum::from_array(v).map_err(serde::de::Error::custom),
        }
    }
}

macro_rules! forward_binop {
    ($tr:ident, $m:ident) => {
        impl $tr<CycloNum> for CycloNum {
            type Output = CycloNum;
            fn $m(self, rhs: CycloNum) -> CycloNum {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a CycloNum> for CycloNum {
            type Output = CycloNum;
            fn $m(self, rhs: &'a CycloNum) -> CycloNum {
                (&self).$m(rhs)
            }
        }
    };
}

impl<'a> Add<&'a CycloNum> for &'a CycloNum {
    type Output = CycloNum;
    fn add(self, rhs: &CycloNum) -> CycloNum {
        CycloNum::new(&self.a + &rhs.a, &self.b + &rhs.b)
    }
}

impl<'a> Sub<&'a CycloNum> for &'a CycloNum {
    type Output = CycloNum;
    fn sub(self, rhs: &CycloNum) -> CycloNum {
        CycloNum::new(&self.a - &rhs.a, &self.b - &rhs.b)
    }
}

impl<'a> Mul<&'a CycloNum> for &'a CycloNum {
    type Output = CycloNum;
    fn mul(self, rhs: &CycloNum) -> CycloNum {
        // (a + bζ)(c + dζ) = ac − bd + (ad + bc − bd)ζ
        let bd = &self.b * &rhs.b;
        CycloNum::new(
            &self.a * &rhs.a - &bd,
            &self.a * &rhs.b + &self.b * &rhs.a - bd,
        )
    }
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);

impl Neg for CycloNum {
    type Output = CycloNum;
    fn neg(self) -> CycloNum {
        CycloNum::new(-self.a, -self.b)
    }
}

impl Neg for &CycloNum {
    type Output = CycloNum;
    fn neg(self) -> CycloNum {
        CycloNum::new(-&self.a, -&self.b)
    }
}

impl AddAssign<&CycloNum> for CycloNum {
    fn add_assign(&mut self, rhs: &CycloNum) {
        self.a += &rhs.a;
        self.b += &rhs.b;
    }
}

impl SubAssign<&CycloNum> for CycloNum {
    fn sub_assign(&mut self, rhs: &CycloNum) {
        self.a -= &rhs.a;
        self.b -= &rhs.b;
    }
}

impl From<i64> for CycloNum {
    fn from(n: i64) -> Self {
        CycloNum::from_ints(n, 0)
    }
}

/// Dense matrix over Q(ζ), row-major.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CycloMatrix {
    rows: usize,
    cols: usize,
    data: Vec<CycloNum>,
}

impl CycloMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        CycloMatrix {
            rows,
            cols,
            data: vec![CycloNum::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::scalar(n, &CycloNum::one())
    }

    pub fn scalar(n: usize, c: &CycloNum) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = c.clone();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<CycloNum>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        if rows.iter().any(|x| x.len() != c) {
            return Err(Error::Shape("ragged rows".into()));
        }
        Ok(CycloMatrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> CycloNum) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        CycloMatrix { rows, cols, data }
    }

    pub fn from_int_rows(rows: &[Vec<i64>]) -> Self {
        let c = rows.first().map_or(0, |x| x.len());
        Self::from_fn(rows.len(), c, |i, j| CycloNum::from(rows[i][j]))
    }

    /// Parse a row-major nested array of strings like `"1/1-1/1*z"`.
    pub fn parse_rows(rows: &[&[&str]]) -> Result<Self> {
        let parsed = rows
            .iter()
            .map(|r| r.iter().map(|s| s.parse()).collect::<Result<Vec<CycloNum>>>())
            .collect::<Result<Vec<_>>>()?;
        Self::from_rows(parsed)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn to_rows(&self) -> Vec<Vec<CycloNum>> {
        self.data.chunks(self.cols.max(1)).map(|c| c.to_vec()).take(self.rows).collect()
    }

    pub fn column(&self, j: usize) -> Vec<CycloNum> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn from_columns(cols: &[Vec<CycloNum>], rows: usize) -> Self {
        Self::from_fn(rows, cols.len(), |i, j| cols[j][i].clone())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn conj(&self) -> Self {
        CycloMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| x.conj()).collect(),
        }
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn scale(&self, c: &CycloNum) -> Self {
        CycloMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| x * c).collect(),
        }
    }

    pub fn trace(&self) -> CycloNum {
        let mut t = CycloNum::zero();
        for i in 0..self.rows.min(self.cols) {
            t += &self[(i, i)];
        }
        t
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    /// The scalar `c` if the matrix equals `c·I`.
    pub fn as_scalar(&self) -> Option<CycloNum> {
        if !self.is_square() || self.rows == 0 {
            return None;
        }
        let c = self[(0, 0)].clone();
        for i in 0..self.rows {
            for j in 0..self.cols {
                let want = if i == j { &c } else { &CycloNum::zero() };
                if self[(i, j)] != *want {
                    return None;
                }
            }
        }
        Some(c)
    }

    pub fn checked_mul(&self, rhs: &Self) -> Result<Self> {
        if self.cols != rhs.rows {
            return Err(Error::Shape(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = &rhs[(k, j)];
                    if !b.is_zero() {
                        let p = a * b;
                        out[(i, j)] += &p;
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::identity(self.rows);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// Reduced row echelon form in place; returns pivot columns.
    fn rref(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| !self[(i, c)].is_zero()) else {
                continue;
            };
            self.swap_rows(r, p);
            let inv = self[(r, c)].inv().expect("nonzero pivot");
            for j in c..self.cols {
                self[(r, j)] = &self[(r, j)] * &inv;
            }
            for i in 0..self.rows {
                if i != r && !self[(i, c)].is_zero() {
                    let f = self[(i, c)].clone();
                    for j in c..self.cols {
                        if !self[(r, j)].is_zero() {
                            let d = &f * &self[(r, j)];
                            self[(i, j)] -= &d;
                        }
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    pub fn rank(&self) -> usize {
        self.clone().rref().len()
    }

    /// Basis of the right kernel, as the columns of the returned matrix.
    pub fn kernel(&self) -> Self {
        let mut m = self.clone();
        let pivots = m.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut cols = Vec::with_capacity(free.len());
        for &f in &free {
            let mut v = vec![CycloNum::zero(); self.cols];
            v[f] = CycloNum::one();
            for (r, &p) in pivots.iter().enumerate() {
                v[p] = -&m[(r, f)];
            }
            cols.push(v);
        }
        Self::from_columns(&cols, self.cols)
    }

    pub fn det(&self) -> Result<CycloNum> {
        if !self.is_square() {
            return Err(Error::Shape("determinant of a non-square matrix".into()));
        }
        let n = self.rows;
        let mut m = self.clone();
        let mut det = CycloNum::one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&i| !m[(i, c)].is_zero()) else {
                return Ok(CycloNum::zero());
            };
            if p != c {
                m.swap_rows(p, c);
                det = -det;
            }
            let piv = m[(c, c)].clone();
            det = &det * &piv;
            let inv = piv.inv()?;
            for i in c + 1..n {
                if m[(i, c)].is_zero() {
                    continue;
                }
                let f = &m[(i, c)] * &inv;
                for j in c..n {
                    let d = &f * &m[(c, j)];
                    m[(i, j)] -= &d;
                }
            }
        }
        Ok(det)
    }

    pub fn inverse(&self) -> Result<Self> {
        if !self.is_square() {
            return Err(Error::Shape("inverse of a non-square matrix".into()));
        }
        let n = self.rows;
        let mut aug = Self::from_fn(n, 2 * n, |i, j| {
            if j < n {
                self[(i, j)].clone()
            } else if j - n == i {
                CycloNum::one()
            } else {
                CycloNum::zero()
            }
        });
        let piv = aug.rref();
        if piv.len() < n || piv[n - 1] != n - 1 {
            return Err(Error::Singular);
        }
        Ok(Self::from_fn(n, n, |i, j| aug[(i, j + n)].clone()))
    }

    /// Solve `self · X = rhs` for X, requiring an exact solution.
    pub fn solve(&self, rhs: &Self) -> Result<Self> {
        if rhs.rows != self.rows {
            return Err(Error::Shape("right-hand side row mismatch".into()));
        }
        let (r, c, k) = (self.rows, self.cols, rhs.cols);
        let mut aug = Self::from_fn(r, c + k, |i, j| {
            if j < c {
                self[(i, j)].clone()
            } else {
                rhs[(i, j - c)].clone()
            }
        });
        let piv = aug.rref();
        if piv.iter().any(|&p| p >= c) {
            return Err(Error::Singular);
        }
        let mut x = Self::zeros(c, k);
        for (row, &p) in piv.iter().enumerate() {
            for j in 0..k {
                x[(p, j)] = aug[(row, c + j)].clone();
            }
        }
        Ok(x)
    }

    /// Characteristic polynomial det(T·I − M) by Faddeev–LeVerrier.
    pub fn char_poly(&self) -> Result<CycloPoly> {
        if !self.is_square() {
            return Err(Error::Shape("characteristic polynomial of a non-square matrix".into()));
        }
        let n = self.rows;
        let mut coeffs = vec![CycloNum::zero(); n + 1];
        coeffs[n] = CycloNum::one();
        let mut mk = Self::zeros(n, n);
        for k in 1..=n {
            let mut next = self * &mk;
            for i in 0..n {
                next[(i, i)] += &coeffs[n - k + 1];
            }
            let am = self * &next;
            let t = am.trace().scale(&BigRational::new((-1).into(), (k as i64).into()));
            coeffs[n - k] = t;
            mk = next;
        }
        Ok(CycloPoly::new(coeffs))
    }

    /// Determinant and (projective) order up to `bound`.
    pub fn det_order(&self, bound: u32) -> Result<DetOrder> {
        let det = self.det()?;
        let mut order = None;
        let mut projective_order = None;
        let mut p = self.clone();
        for m in 1..=bound.max(1) {
            if let Some(c) = p.as_scalar() {
                if projective_order.is_none() {
                    projective_order = Some(m);
                }
                if c.is_one() {
                    order = Some(m);
                    break;
                }
            }
            p = &p * self;
        }
        Ok(DetOrder {
            det,
            order,
            projective_order,
        })
    }

    /// Action on the second exterior power, basis e_i∧e_j (i<j) in lexicographic order.
    pub fn wedge_square(&self) -> Result<Self> {
        if !self.is_square() || self.rows != 4 {
            return Err(Error::Shape("wedge square expects a 4x4 matrix".into()));
        }
        let pairs = wedge_pairs(4);
        Ok(Self::from_fn(6, 6, |r, c| {
            let (i, j) = pairs[r];
            let (k, l) = pairs[c];
            &self[(i, k)] * &self[(j, l)] - &self[(i, l)] * &self[(j, k)]
        }))
    }

    pub fn embed(&self) -> DMatrix<Complex64> {
        DMatrix::from_fn(self.rows, self.cols, |i, j| self[(i, j)].embed())
    }

    /// Entry-wise encoding as `"a/b+c/d*z"` strings.
    pub fn to_strings(&self) -> Vec<Vec<String>> {
        self.to_rows()
            .into_iter()
            .map(|r| r.into_iter().map(|x| x.to_string()).collect())
            .collect()
    }
}

pub(crate) fn wedge_pairs(n: usize) -> Vec<(usize, usize)> {
    let mut v = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            v.push((i, j));
        }
    }
    v
}

impl std::ops::Index<(usize, usize)> for CycloMatrix {
    type Output = CycloNum;
    fn index(&self, (i, j): (usize, usize)) -> &CycloNum {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for CycloMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut CycloNum {
        &mut self.data[i * self.cols + j]
    }
}

impl<'a> Mul<&'a CycloMatrix> for &'a CycloMatrix {
    type Output = CycloMatrix;
    fn mul(self, rhs: &CycloMatrix) -> CycloMatrix {
        self.checked_mul(rhs).expect("matrix shape mismatch")
    }
}

impl<'a> Add<&'a CycloMatrix> for &'a CycloMatrix {
    type Output = CycloMatrix;
    fn add(self, rhs: &CycloMatrix) -> CycloMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        CycloMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl<'a> Sub<&'a CycloMatrix> for &'a CycloMatrix {
    type Output = CycloMatrix;
    fn sub(self, rhs: &CycloMatrix) -> CycloMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        CycloMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Serialize for CycloMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_rows().serialize(s)
    }
}

impl<'de> Deserialize<'de> for CycloMatrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let rows = Vec::<Vec<CycloNum>>::deserialize(d)?;
        CycloMatrix::from_rows(rows).map_err(serde::de::Error::custom)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DetOrder {
    pub det: CycloNum,
    pub order: Option<u32>,
    pub projective_order: Option<u32>,
}

/// Polynomial over Q(ζ), coefficients lowest degree first.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CycloPoly {
    coeffs: Vec<CycloNum>,
}

impl CycloPoly {
    pub fn new(mut coeffs: Vec<CycloNum>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        CycloPoly { coeffs }
    }

    pub fn from_ints(c: &[i64]) -> Self {
        Self::new(c.iter().map(|&x| CycloNum::from(x)).collect())
    }

    pub fn coeffs(&self) -> &[CycloNum] {
        &self.coeffs
    }

    /// Degree; the zero polynomial reports `None`.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last().is_some_and(|c| c.is_one())
    }

    pub fn conj(&self) -> Self {
        Self::new(self.coeffs.iter().map(|c| c.conj()).collect())
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        if self.coeffs.is_empty() || rhs.coeffs.is_empty() {
            return Self::new(vec![]);
        }
        let mut out = vec![CycloNum::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                let p = a * b;
                out[i + j] += &p;
            }
        }
        Self::new(out)
    }

    pub fn eval(&self, x: &CycloNum) -> CycloNum {
        let mut acc = CycloNum::zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * x) + c;
        }
        acc
    }

    /// `P(c·T) / c^deg`, whose roots are the roots of `P` divided by `c`.
    pub fn scale_roots(&self, c: &CycloNum) -> Result<Self> {
        let n = self.coeffs.len();
        if n == 0 {
            return Ok(self.clone());
        }
        let mut pw = Vec::with_capacity(n);
        let mut f = CycloNum::one();
        for _ in 0..n {
            pw.push(f.clone());
            f = &f * c;
        }
        let lead_inv = pw[n - 1].inv()?;
        let out = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, p)| &(p * &pw[i]) * &lead_inv)
            .collect();
        Ok(Self::new(out))
    }

    /// Exact division; errors if the remainder is nonzero.
    pub fn div_exact(&self, d: &Self) -> Result<Self> {
        let (q, r) = self.div_rem(d)?;
        if r.coeffs.is_empty() {
            Ok(q)
        } else {
            Err(Error::NotDivisible)
        }
    }

    pub fn div_rem(&self, d: &Self) -> Result<(Self, Self)> {
        let dd = d.degree().ok_or(Error::DivisionByZero)?;
        let lead_inv = d.coeffs[dd].inv()?;
        let mut r = self.coeffs.clone();
        if r.len() <= dd {
            return Ok((Self::new(vec![]), self.clone()));
        }
        let mut q = vec![CycloNum::zero(); r.len() - dd];
        for i in (0..q.len()).rev() {
            let c = &r[i + dd] * &lead_inv;
            if c.is_zero() {
                continue;
            }
            for (j, dc) in d.coeffs.iter().enumerate() {
                let p = &c * dc;
                r[i + j] -= &p;
            }
            q[i] = c;
        }
        Ok((Self::new(q), Self::new(r)))
    }

    /// Coefficients as integers if all are rational integers.
    pub fn to_int_poly(&self) -> Option<IntPoly> {
        let mut out = Vec::with_capacity(self.coeffs.len());
        for c in &self.coeffs {
            if !c.is_rational() || !c.a.is_integer() {
                return None;
            }
            out.push(c.a.numer().clone());
        }
        Some(IntPoly::new(out))
    }

    /// Numerical roots via the companion matrix.
    pub fn roots(&self) -> Vec<Complex64> {
        let Some(n) = self.degree() else { return vec![] };
        if n == 0 {
            return vec![];
        }
        let lead = self.coeffs[n].embed();
        let mut comp = DMatrix::<Complex64>::zeros(n, n);
        for i in 1..n {
            comp[(i, i - 1)] = Complex64::new(1.0, 0.0);
        }
        for i in 0..n {
            comp[(i, n - 1)] = -self.coeffs[i].embed() / lead;
        }
        crate::numeric::eigenvalues(&comp)
    }
}

impl fmt::Display for CycloPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| format!("({c})*T^{i}"))
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// Polynomial with rational-integer coefficients, lowest degree first.
#[derive(Clone, PartialEq, Eq, Debug, Hash)]
pub struct IntPoly {
    coeffs: Vec<BigInt>,
}

impl IntPoly {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        IntPoly { coeffs }
    }

    pub fn from_i64(c: &[i64]) -> Self {
        Self::new(c.iter().map(|&x| BigInt::from(x)).collect())
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last().is_some_and(|c| c.is_one())
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        if self.coeffs.is_empty() || rhs.coeffs.is_empty() {
            return Self::new(vec![]);
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    /// Exact division by a monic divisor.
    fn div_monic(&self, d: &Self) -> Option<Self> {
        let dd = d.degree()?;
        if !d.is_monic() {
            return None;
        }
        let mut r = self.coeffs.clone();
        if r.len() <= dd {
            return if r.is_empty() { Some(Self::new(vec![])) } else { None };
        }
        let mut q = vec![BigInt::zero(); r.len() - dd];
        for i in (0..q.len()).rev() {
            let c = r[i + dd].clone();
            for (j, dc) in d.coeffs.iter().enumerate() {
                r[i + j] -= &c * dc;
            }
            q[i] = c;
        }
        if r.iter().all(|x| x.is_zero()) {
            Some(Self::new(q))
        } else {
            None
        }
    }

    pub fn to_cyclo(&self) -> CycloPoly {
        CycloPoly::new(
            self.coeffs
                .iter()
                .map(|c| CycloNum::from_rational(BigRational::from_integer(c.clone())))
                .collect(),
        )
    }

    /// True iff this polynomial equals Φ_n for some n.
    pub fn is_cyclotomic(&self) -> Result<bool> {
        if !self.is_monic() {
            return Err(Error::NotMonic);
        }
        let deg = self.degree().unwrap_or(0);
        if deg == 0 {
            return Ok(false);
        }
        // φ(n) ≥ √(n/2) gives n ≤ 2·deg²
        let bound = 2 * deg * deg;
        for n in 1..=bound.max(2) {
            if euler_phi(n) == deg && cyclotomic_poly(n) == *self {
                return Ok(true);
            }
        }
        Ok(false)
    }
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            let show_coeff = !mag.is_one() || i == 0;
            if show_coeff {
                write!(f, "{mag}")?;
            }
            match i {
                0 => {}
                1 => write!(f, "T")?,
                _ => write!(f, "T^{i}")?,
            }
        }
        Ok(())
    }
}

pub fn euler_phi(n: usize) -> usize {
    let mut result = n;
    let mut m = n;
    let mut p = 2;
    while p * p <= m {
        if m % p == 0 {
            while m % p == 0 {
                m /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if m > 1 {
        result -= result / m;
    }
    result
}

/// Φ_n via T^n − 1 = ∏_{d | n} Φ_d.
pub fn cyclotomic_poly(n: usize) -> IntPoly {
    let mut num = vec![BigInt::zero(); n + 1];
    num[0] = BigInt::from(-1);
    num[n] = BigInt::one();
    let mut p = IntPoly::new(num);
    for d in 1..n {
        if n % d == 0 {
            p = p.div_monic(&cyclotomic_poly(d)).expect("cyclotomic divisor");
        }
    }
    p
}

/// `P · conj(P)`, which has rational-integer coefficients for integral inputs.
pub fn galois_norm(p: &CycloPoly) -> Result<IntPoly> {
    p.mul(&p.conj()).to_int_poly().ok_or(Error::NonIntegral)
}
