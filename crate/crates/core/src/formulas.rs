//! Closed-form degrees: maps between modular curves, the `delta` lower bound,
//! and the odd-degree divisibility tables.

use alloc::format;
use alloc::string::String;

use crate::error::{Error, Result};
use crate::modmat::prime_divisors;

/// `deg(X1(ab) -> X1(a))`.
///
/// Equals `c * b^2 * prod_{p | b, p !| a} (1 - 1/p^2)` with `c = 1/2` when
/// `a <= 2 < ab` (the map stops identifying `P` with `-P`) and `c = 1` otherwise.
pub fn map_degree(a: u64, b: u64) -> Result<u64> {
    if a == 0 || b == 0 {
        return Err(Error::InvalidArgument("map_degree needs a, b >= 1"));
    }
    let mut num: u128 = (b as u128) * (b as u128);
    let mut den: u128 = 1;
    for p in prime_divisors(b) {
        if !a.is_multiple_of(p) {
            let p = p as u128;
            num *= p * p - 1;
            den *= p * p;
        }
    }
    if a <= 2 && (a as u128) * (b as u128) > 2 {
        den *= 2;
    }
    if !num.is_multiple_of(den) {
        return Err(Error::Internal("map degree is not integral"));
    }
    u64::try_from(num / den).map_err(|_| Error::Overflow("map degree"))
}

fn pow_clamped(ell: u32, e: i64) -> u128 {
    (ell as u128).pow(e.max(0) as u32)
}

/// `deg_x * l^max(0, 2k-2-d)` for odd `l`, `deg_x * 2^max(0, 2k-3-d)` for `l = 2`.
pub fn delta_lower_bound(deg_x: u64, d: u32, ell: u32, k: u32) -> u128 {
    let shift = if ell == 2 { 3 } else { 2 };
    deg_x as u128 * pow_clamped(ell, 2 * k as i64 - shift - d as i64)
}

/// Case conditions selecting a row of the divisibility tables. At most one
/// condition can be given, so inconsistent combinations are unrepresentable;
/// a condition that does not apply to the prime is rejected.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum CaseFlag {
    /// No extra information about the class.
    Generic,
    /// `l = 5`: some curve over `Q` in the class has a rational cyclic 25-isogeny.
    Cyclic25Isogeny,
    /// `l = 5`: no curve over `Q` in the class has one.
    NoCyclic25Isogeny,
    /// `l = 7`: the class has a curve with mod-7 image 7B.1.1, 7B.1.6 or 7B.6.1.
    Mod7TrivialCharacter,
    /// `l = 7`: the class has a curve with mod-7 image 7B.1.2, 7B.6.2, 7B.2.1 or 7B.
    Mod7CubicCharacter,
    /// `l = 7`: the class contains `j = 3^3 * 5 * 7^5 / 2^7`.
    ExceptionalJ,
    /// `l = 3`: the class has a curve over `Q` with this 3-adic image label.
    ThreeAdicImage(String),
}

impl CaseFlag {
    fn applies_to(&self, ell: u32) -> bool {
        match self {
            CaseFlag::Generic => true,
            CaseFlag::Cyclic25Isogeny | CaseFlag::NoCyclic25Isogeny => ell == 5,
            CaseFlag::Mod7TrivialCharacter
            | CaseFlag::Mod7CubicCharacter
            | CaseFlag::ExceptionalJ => ell == 7,
            CaseFlag::ThreeAdicImage(_) => ell == 3,
        }
    }

    /// Whether the table promises a point of degree exactly `delta` for every
    /// class satisfying this condition.
    pub fn promises_attainment(&self) -> bool {
        !matches!(self, CaseFlag::Generic)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ClassDescriptor {
    pub ell: u32,
    pub k: u32,
    pub flag: CaseFlag,
}

impl ClassDescriptor {
    pub fn new(ell: u32, k: u32, flag: CaseFlag) -> Self {
        ClassDescriptor { ell, k, flag }
    }

    pub fn generic(ell: u32, k: u32) -> Self {
        Self::new(ell, k, CaseFlag::Generic)
    }
}

/// `ord_3` of the index in a label `N.i.g.n`.
fn label_index_valuation(label: &str) -> Result<u32> {
    let mut parts = label.split('.');
    let index = parts
        .nth(1)
        .and_then(|s| s.parse::<u64>().ok())
        .filter(|&i| i > 0)
        .ok_or_else(|| {
            Error::InconsistentFlags(format!("cannot read an index from label '{label}'"))
        })?;
    Ok(crate::modmat::valuation(index as u128, 3))
}

/// Divisibility bound for odd-degree points on `X1(l^k)` in the described class.
pub fn theorem_delta(desc: &ClassDescriptor) -> Result<u128> {
    let ClassDescriptor { ell, k, flag } = desc;
    let (ell, k) = (*ell, *k);
    if k == 0 {
        return Err(Error::InvalidExponent(0));
    }
    if !matches!(ell, 2 | 3 | 5 | 7 | 11 | 13) || (ell == 2 && k > 3) {
        return Err(Error::NoOddDegreePoints { ell, k });
    }
    if !flag.applies_to(ell) {
        return Err(Error::InconsistentFlags(format!(
            "{flag:?} does not apply to l = {ell}"
        )));
    }
    let k = k as i64;
    let top = pow_clamped(ell, 2 * k - 2);
    let delta = match (ell, flag) {
        (2, _) => 1,
        (13, _) => 3 * top,
        (11, _) => 5 * top,
        (7, CaseFlag::Generic | CaseFlag::Mod7TrivialCharacter) => top,
        (7, CaseFlag::Mod7CubicCharacter) => 3 * top,
        (7, CaseFlag::ExceptionalJ) => 9 * pow_clamped(7, 2 * k - 3),
        (5, CaseFlag::Generic | CaseFlag::Cyclic25Isogeny) => pow_clamped(5, 2 * k - 3),
        (5, CaseFlag::NoCyclic25Isogeny) => top,
        (3, CaseFlag::Generic) => pow_clamped(3, 2 * k - 4),
        (3, CaseFlag::ThreeAdicImage(label)) => {
            let base = match label.as_str() {
                "9.36.0.6" | "9.36.0.8" => pow_clamped(3, 2 * k - 3),
                other => pow_clamped(3, 2 * k - 2 - label_index_valuation(other)? as i64),
            };
            let bump = match label.as_str() {
                "9.12.0.2" | "9.36.0.7" | "9.36.0.8" => k == 2,
                "9.36.0.2" => k == 2 || k == 3,
                _ => false,
            };
            if bump {
                3 * base
            } else {
                base
            }
        }
        _ => return Err(Error::Internal("unhandled table row")),
    };
    Ok(delta)
}
