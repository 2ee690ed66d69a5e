//! Imaginary quadratic orders, class numbers and least CM torsion degrees.

use crate::error::{Error, Result};
use crate::modmat::{gcd, is_prime, prime_divisors, valuation};

/// Reduced primitive positive definite forms of discriminant `delta`.
pub fn reduced_forms_count(delta: i64) -> Result<u64> {
    if delta >= 0 || delta.rem_euclid(4) > 1 {
        return Err(Error::InvalidDiscriminant(delta));
    }
    let d = delta.unsigned_abs();
    let mut count = 0;
    // a <= sqrt(|delta| / 3) for reduced forms.
    let mut a: u64 = 1;
    while 3 * a * a <= d {
        for b in -(a as i64)..=(a as i64) {
            let num = (b * b) as u64 + d;
            if !num.is_multiple_of(4 * a) {
                continue;
            }
            let c = num / (4 * a);
            if c < a || ((b.unsigned_abs() == a || a == c) && b < 0) {
                continue;
            }
            if gcd(gcd(a, b.unsigned_abs()), c) == 1 {
                count += 1;
            }
        }
        a += 1;
    }
    Ok(count)
}

fn is_squarefree(mut n: u64) -> bool {
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p * p) {
            return false;
        }
        if n.is_multiple_of(p) {
            n /= p;
        }
        p += 1;
    }
    true
}

/// Whether `d < 0` is the discriminant of an imaginary quadratic field.
pub fn is_fundamental(d: i64) -> bool {
    if d >= 0 {
        return false;
    }
    let m = d.unsigned_abs();
    match d.rem_euclid(4) {
        1 => is_squarefree(m),
        0 => {
            let q = d / 4;
            matches!(q.rem_euclid(4), 2 | 3) && is_squarefree(q.unsigned_abs())
        }
        _ => false,
    }
}

/// Kronecker symbol `(d / p)` for a prime `p`.
pub fn kronecker(d: i64, p: u64) -> i32 {
    if p == 2 {
        return match d.rem_euclid(8) {
            1 | 7 => 1,
            3 | 5 => -1,
            _ => 0,
        };
    }
    let p_i = p as i128;
    let a = (d as i128).rem_euclid(p_i);
    if a == 0 {
        return 0;
    }
    // Euler's criterion.
    let mut result: i128 = 1;
    let mut base = a;
    let mut e = (p - 1) / 2;
    while e > 0 {
        if e & 1 == 1 {
            result = result * base % p_i;
        }
        base = base * base % p_i;
        e >>= 1;
    }
    if result == 1 {
        1
    } else {
        -1
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Splitting {
    Split,
    Inert,
    Ramified,
}

impl Splitting {
    pub fn as_str(&self) -> &'static str {
        match self {
            Splitting::Split => "split",
            Splitting::Inert => "inert",
            Splitting::Ramified => "ramified",
        }
    }
}

/// Behaviour of `l` in the field of discriminant `delta_k`.
pub fn splitting_type(delta_k: i64, ell: u64) -> Result<Splitting> {
    if !is_fundamental(delta_k) {
        return Err(Error::NotFundamental(delta_k));
    }
    if !is_prime(ell) {
        return Err(Error::NotPrime(ell));
    }
    Ok(match kronecker(delta_k, ell) {
        1 => Splitting::Split,
        -1 => Splitting::Inert,
        _ => Splitting::Ramified,
    })
}

/// The order of conductor `f` in the field of discriminant `delta_k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct CMOrder {
    delta_k: i64,
    f: u64,
    h_k: u64,
}

impl CMOrder {
    /// Validates `delta_k`; computes `h_K` from reduced forms.
    pub fn new(delta_k: i64, f: u64) -> Result<Self> {
        if !is_fundamental(delta_k) {
            return Err(Error::NotFundamental(delta_k));
        }
        let h_k = reduced_forms_count(delta_k)?;
        Self::with_class_number(delta_k, f, h_k)
    }

    /// As [`CMOrder::new`] with `h_K` supplied by the caller.
    pub fn with_class_number(delta_k: i64, f: u64, h_k: u64) -> Result<Self> {
        if !is_fundamental(delta_k) {
            return Err(Error::NotFundamental(delta_k));
        }
        if f == 0 || h_k == 0 {
            return Err(Error::InvalidArgument(
                "conductor and class number must be >= 1",
            ));
        }
        Ok(CMOrder { delta_k, f, h_k })
    }

    pub fn delta_k(&self) -> i64 {
        self.delta_k
    }

    pub fn conductor(&self) -> u64 {
        self.f
    }

    /// `f^2 * delta_k`.
    pub fn delta(&self) -> i128 {
        (self.f as i128) * (self.f as i128) * self.delta_k as i128
    }

    pub fn w_k(&self) -> u64 {
        w_k(self.delta_k)
    }

    pub fn h_k(&self) -> u64 {
        self.h_k
    }
}

fn w_k(delta_k: i64) -> u64 {
    match delta_k {
        -3 => 6,
        -4 => 4,
        _ => 2,
    }
}

/// `h(O) = h_K (2 / w_K) f prod_{p | f} (1 - (delta_K / p) / p)`; `h_K` when `f = 1`.
pub fn cm_class_number(o: &CMOrder) -> Result<u64> {
    if o.f == 1 {
        return Ok(o.h_k);
    }
    let mut num: u128 = 2 * o.h_k as u128 * o.f as u128;
    let mut den: u128 = o.w_k() as u128;
    for p in prime_divisors(o.f) {
        let chi = kronecker(o.delta_k, p) as i128;
        num *= (p as i128 - chi) as u128;
        den *= p as u128;
    }
    if !num.is_multiple_of(den) {
        return Err(Error::Internal("class number formula is not integral"));
    }
    u64::try_from(num / den).map_err(|_| Error::Overflow("class number"))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CmMinDegree {
    pub delta: u64,
    /// Conductor of an order attaining `delta`.
    pub conductor: u64,
    pub splitting: Splitting,
    /// Set when the formula has a known ambiguity at these parameters.
    pub note: Option<&'static str>,
}

const INERT_TWO_NOTE: &str = "l = 2 inert with n = 1: the +1 exponent is applied as printed; \
                              an alternative reading drops it for n = 1";

/// Least degree of a point on `X1(l^n)` over a CM class with field `delta_k`.
/// `h_k` defaults to the reduced-forms count.
pub fn cm_min_degree(delta_k: i64, h_k: Option<u64>, ell: u64, n: u32) -> Result<CmMinDegree> {
    if n == 0 {
        return Err(Error::InvalidExponent(0));
    }
    let splitting = splitting_type(delta_k, ell)?;
    let h = match h_k {
        Some(h) => h,
        None => reduced_forms_count(delta_k)?,
    } as u128;
    let w = w_k(delta_k) as u128;
    let l = ell as u128;
    let n = n as i64;
    let pow = |e: i64| -> Result<u128> {
        if e < 0 {
            return Err(Error::Internal("negative exponent"));
        }
        l.checked_pow(e as u32)
            .ok_or(Error::Overflow("least CM degree"))
    };
    let prod = |xs: [u128; 3]| -> Result<u128> {
        xs.iter()
            .try_fold(1u128, |acc, x| acc.checked_mul(*x))
            .ok_or(Error::Overflow("least CM degree"))
    };
    let half = u64::try_from(pow(n / 2)?).map_err(|_| Error::Overflow("witness conductor"))?;
    let (num, conductor, note) = match splitting {
        Splitting::Split => (prod([2 * h, pow(n - 1)?, l - 1])?, 1, None),
        Splitting::Inert => {
            let mut e = 3 * (n - 1) / 2;
            if ell == 2 {
                e += 1;
            }
            let note = (ell == 2 && n == 1).then_some(INERT_TWO_NOTE);
            (prod([h, pow(e)?, l * l - 1])?, half, note)
        }
        Splitting::Ramified => {
            if pow(n)? <= 3 {
                (h * w, half, None)
            } else if ell == 2 && n > 1 && valuation(delta_k.unsigned_abs() as u128, 2) == 2 {
                (prod([h, pow(3 * (n - 1) / 2 + 1)?, l - 1])?, half, None)
            } else {
                (prod([h, pow(3 * n / 2 - 1)?, l - 1])?, half, None)
            }
        }
    };
    if num % w != 0 {
        return Err(Error::Internal("least CM degree is not integral"));
    }
    let delta = u64::try_from(num / w).map_err(|_| Error::Overflow("least CM degree"))?;
    Ok(CmMinDegree {
        delta,
        conductor,
        splitting,
        note,
    })
}
