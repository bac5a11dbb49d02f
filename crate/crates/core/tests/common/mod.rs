//! Shared fixtures: the base surface, its cover, and the published matrices written as
//! polynomials in `z = ζ`.
#![allow(dead_code)]

use flatlyap::cover::{cyclic_cover, BranchData, CoveringSurface};
use flatlyap::cyclotomic::{CycloMatrix, CycloNum};
use flatlyap::surface::SquareTiledSurface;

pub const BASIC6: &str = include_str!("../../../cli/data/basic6.json");

pub fn basic6() -> SquareTiledSurface {
    SquareTiledSurface::from_json(BASIC6).expect("shipped surface loads")
}

pub fn cover18() -> CoveringSurface {
    cyclic_cover(&BranchData::at_singularities(basic6(), 3)).expect("cover exists")
}

/// Parse an integer polynomial in `z` such as `"-z^2+6z-5"`, reducing with `z² = −1 − z`.
pub fn zexpr(s: &str) -> CycloNum {
    let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let mut coeff = [0i64; 3];
    let mut terms = Vec::new();
    let mut start = 0;
    for (i, ch) in s.char_indices() {
        if (ch == '+' || ch == '-') && i > start {
            terms.push(&s[start..i]);
            start = i;
        }
    }
    terms.push(&s[start..]);
    for t in terms {
        let (sign, body) = match t.strip_prefix('-') {
            Some(b) => (-1, b),
            None => (1, t.strip_prefix('+').unwrap_or(t)),
        };
        let (num, power) = match body.find('z') {
            None => (body, 0),
            Some(p) => {
                let pow = if body[p..].starts_with("z^2") { 2 } else { 1 };
                (&body[..p], pow)
            }
        };
        let c: i64 = if num.is_empty() { 1 } else { num.parse().expect("integer coefficient") };
        coeff[power] += sign * c;
    }
    CycloNum::from_ints(coeff[0] - coeff[2], coeff[1] - coeff[2])
}

pub fn zmatrix(rows: &[&[&str]]) -> CycloMatrix {
    CycloMatrix::from_rows(rows.iter().map(|r| r.iter().map(|e| zexpr(e)).collect()).collect())
        .expect("rectangular")
}

pub fn published_a() -> CycloMatrix {
    zmatrix(&[&["0", "0", "1", "z^2"], &["z", "0", "0", "z"], &["0", "z", "0", "z"], &["0", "0", "0", "-z^2"]])
}

pub fn published_b() -> CycloMatrix {
    zmatrix(&[
        &["0", "z^2-1", "z", "0"],
        &["0", "z", "0", "0"],
        &["z", "z-z^2", "1-z^2", "0"],
        &["1-z^2", "1-z^2", "1-z", "1"],
    ])
}

pub fn published_c() -> CycloMatrix {
    zmatrix(&[
        &["1-z", "z^2", "0", "-2z"],
        &["z^2", "0", "0", "z^2"],
        &["z^2-1", "z-1", "z", "-2"],
        &["z-1", "z-z^2", "1-z^2", "2z"],
    ])
}

pub fn published_x() -> CycloMatrix {
    zmatrix(&[
        &["z^2-z", "z^2+z-1", "z^2-1", "z"],
        &["3z^2-3", "-z^2+3z-2", "3z-2", "-z^2+z+1"],
        &["6z^2-5", "4z-4", "z^2+5z-6", "-3z^2+3z+1"],
        &["-z^2+6z-5", "-5z^2+4z+1", "-6z^2+5z+1", "-2z^2-2z+3"],
    ])
}

pub fn published_y() -> CycloMatrix {
    zmatrix(&[
        &["z^2-z", "z^2", "z^2-1", "z"],
        &["z^2-z+1", "2z^2-z-1", "z^2-1", "z"],
        &["z^2-2z+1", "2z^2-z-1", "2z^2-z", "z^2+z-1"],
        &["z^2-1", "z-1", "z-1", "-z^2"],
    ])
}

pub fn published_u() -> CycloMatrix {
    zmatrix(&[
        &["z^2+z-2", "z^2-z", "z-1", "2z^2-z", "z", "-z^2"],
        &["3z^2+3z-7", "z-1", "z-2z^2", "2z^2-6z+4", "3z^2-z-1", "1-z^2"],
        &["-5z^2+6z-1", "0", "1-z^2", "6z^2-z-5", "-z^2+2z-2", "1-z"],
        &["-5z^2+9z-4", "-9z^2+3z+5", "z^2-7z+5", "7z^2-9z+2", "6z^2-6", "3z^2-z-1"],
        &["-7z^2-z+8", "z^2-6z+5", "5z^2-2z-3", "4z^2+4z-8", "-3z^2+5z-2", "z-2"],
        &["3z^2-6z+3", "5z^2+z-6", "-4z^2+4z-1", "-7z^2+8z-1", "-4z^2-2z+6", "-z^2-z+2"],
    ])
}

pub fn published_v() -> CycloMatrix {
    zmatrix(&[
        &["-z^2+2z-2", "1-z^2", "-z", "2z^2-2z", "z^2+z-1", "0"],
        &["-z^2+2z-1", "z^2-z", "z-1", "3z^2-z-1", "2z-1", "-z^2"],
        &["1-z^2", "0", "0", "z-1", "-z^2", "0"],
        &["-z^2-z+2", "3z^2-2z", "z^2+2z-2", "2z^2+2z-4", "3z-3z^2", "-z^2"],
        &["z^2-z", "z-1", "-z^2", "-2z^2+z+1", "1-z", "0"],
        &["0", "1-z^2", "z^2-z", "1-z", "z^2-1", "-1"],
    ])
}

/// Word defining the first irreducibility loop, read left to right from the r-fixed node.
pub const RHO1: &str = "h r H^3 r h r H^2 r";
pub const RHO2: &str = "r H r h^3 r H r";
/// Loops at the h-fixed node whose product gives the hyperbolic element.
pub const MU1: &str = "h";
pub const MU2: &str = "(R H r)^2";
