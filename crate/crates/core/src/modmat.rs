//! Residues modulo a prime power `N = l^k` and invertible 2x2 matrices over `Z/NZ`.
//!
//! Residues are kept canonical in `[0, N)`, so two matrices are equal exactly
//! when their entry arrays are equal. All products go through 64-bit
//! intermediates; `N` is capped at `2^31`.

use core::fmt;

use crate::error::{Error, Result};

/// Largest supported modulus.
pub const MAX_MODULUS: u64 = 1 << 31;

/// Trial-division primality test.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n < 4 {
        return true;
    }
    if n.is_multiple_of(2) {
        return false;
    }
    let mut d = 3u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// `p`-adic valuation of a nonzero integer.
pub fn valuation(mut n: u128, p: u32) -> u32 {
    debug_assert!(n != 0 && p >= 2);
    let p = p as u128;
    let mut v = 0;
    while n.is_multiple_of(p) {
        n /= p;
        v += 1;
    }
    v
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Distinct prime divisors, ascending.
pub fn prime_divisors(mut n: u64) -> alloc::vec::Vec<u64> {
    let mut out = alloc::vec::Vec::new();
    let mut p = 2u64;
    while p * p <= n {
        if n.is_multiple_of(p) {
            out.push(p);
            while n.is_multiple_of(p) {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// The modulus `N = l^k` with `l` prime and `k >= 1`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Modulus {
    ell: u32,
    k: u32,
    n: u32,
}

impl Modulus {
    pub fn new(ell: u32, k: u32) -> Result<Self> {
        if !is_prime(ell as u64) {
            return Err(Error::NotPrime(ell as u64));
        }
        if k == 0 {
            return Err(Error::InvalidExponent(k));
        }
        let mut n: u64 = 1;
        for _ in 0..k {
            n *= ell as u64;
            if n > MAX_MODULUS {
                return Err(Error::ModulusTooLarge(n));
            }
        }
        Ok(Modulus {
            ell,
            k,
            n: n as u32,
        })
    }

    /// Factors `n` as a prime power.
    pub fn from_prime_power(n: u64) -> Result<Self> {
        if n < 2 {
            return Err(Error::NotPrimePower(n));
        }
        if n > MAX_MODULUS {
            return Err(Error::ModulusTooLarge(n));
        }
        let primes = prime_divisors(n);
        if primes.len() != 1 {
            return Err(Error::NotPrimePower(n));
        }
        let ell = primes[0] as u32;
        let k = valuation(n as u128, ell);
        Modulus::new(ell, k)
    }

    #[inline]
    pub fn ell(&self) -> u32 {
        self.ell
    }

    #[inline]
    pub fn k(&self) -> u32 {
        self.k
    }

    #[inline]
    pub fn n(&self) -> u32 {
        self.n
    }

    /// Same prime, exponent `k`.
    pub fn with_exponent(&self, k: u32) -> Result<Self> {
        Modulus::new(self.ell, k)
    }

    /// `l^e` as an integer (not necessarily a valid modulus, `e` may be 0).
    pub fn ell_pow(&self, e: u32) -> u64 {
        (self.ell as u64).pow(e)
    }

    #[inline]
    pub fn reduce(&self, x: u64) -> u32 {
        (x % self.n as u64) as u32
    }

    #[inline]
    pub fn reduce_signed(&self, x: i64) -> u32 {
        x.rem_euclid(self.n as i64) as u32
    }

    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        ((a as u64 + b as u64) % self.n as u64) as u32
    }

    #[inline]
    pub fn sub(&self, a: u32, b: u32) -> u32 {
        ((a as u64 + self.n as u64 - b as u64) % self.n as u64) as u32
    }

    #[inline]
    pub fn neg(&self, a: u32) -> u32 {
        if a == 0 {
            0
        } else {
            self.n - a
        }
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        ((a as u64 * b as u64) % self.n as u64) as u32
    }

    #[inline]
    pub fn is_unit(&self, a: u32) -> bool {
        !a.is_multiple_of(self.ell)
    }

    pub fn pow(&self, a: u32, mut e: u64) -> u32 {
        let mut base = a % self.n;
        let mut acc = 1 % self.n;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// Inverse of a unit, by the extended Euclidean algorithm.
    pub fn inv(&self, a: u32) -> Option<u32> {
        let (mut old_r, mut r) = (a as i64 % self.n as i64, self.n as i64);
        let (mut old_s, mut s) = (1i64, 0i64);
        while r != 0 {
            let q = old_r / r;
            (old_r, r) = (r, old_r - q * r);
            (old_s, s) = (s, old_s - q * s);
        }
        if old_r != 1 {
            return None;
        }
        Some(self.reduce_signed(old_s))
    }

    /// Euler phi of `N`.
    pub fn unit_count(&self) -> u64 {
        self.n as u64 / self.ell as u64 * (self.ell as u64 - 1)
    }

    /// Exact additive order of a vector in `(Z/NZ)^2`.
    pub fn vector_order(&self, v: [u32; 2]) -> u64 {
        let mut order = 1u64;
        let mut w = v;
        while w != [0, 0] {
            w = [self.mul(w[0], self.ell), self.mul(w[1], self.ell)];
            order *= self.ell as u64;
        }
        order
    }
}

impl fmt::Debug for Modulus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}^{}", self.ell, self.k)
    }
}

impl fmt::Display for Modulus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.n)
    }
}

/// Row-major entries `[n11, n12, n21, n22]`.
pub type Entries = [u32; 4];

#[inline]
pub(crate) fn mul_entries(m: &Modulus, a: &Entries, b: &Entries) -> Entries {
    let n = m.n() as u64;
    let (a0, a1, a2, a3) = (a[0] as u64, a[1] as u64, a[2] as u64, a[3] as u64);
    let (b0, b1, b2, b3) = (b[0] as u64, b[1] as u64, b[2] as u64, b[3] as u64);
    [
        ((a0 * b0 % n + a1 * b2 % n) % n) as u32,
        ((a0 * b1 % n + a1 * b3 % n) % n) as u32,
        ((a2 * b0 % n + a3 * b2 % n) % n) as u32,
        ((a2 * b1 % n + a3 * b3 % n) % n) as u32,
    ]
}

#[inline]
pub(crate) fn det_entries(m: &Modulus, a: &Entries) -> u32 {
    m.sub(m.mul(a[0], a[3]), m.mul(a[1], a[2]))
}

#[inline]
pub(crate) fn apply_entries(m: &Modulus, a: &Entries, v: [u32; 2]) -> [u32; 2] {
    [
        m.add(m.mul(a[0], v[0]), m.mul(a[1], v[1])),
        m.add(m.mul(a[2], v[0]), m.mul(a[3], v[1])),
    ]
}

pub(crate) fn inv_entries(m: &Modulus, a: &Entries) -> Option<Entries> {
    let det_inv = m.inv(det_entries(m, a))?;
    Some([
        m.mul(a[3], det_inv),
        m.mul(m.neg(a[1]), det_inv),
        m.mul(m.neg(a[2]), det_inv),
        m.mul(a[0], det_inv),
    ])
}

/// An element of `GL2(Z/NZ)`.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct GMat {
    entries: Entries,
    level: Modulus,
}

impl GMat {
    /// Builds a matrix from arbitrary integers, reducing them mod `N`.
    pub fn new(level: Modulus, entries: [i64; 4]) -> Result<Self> {
        let e = entries.map(|x| level.reduce_signed(x));
        Self::from_entries(level, e)
    }

    /// Builds a matrix from canonical residues; rejects entries `>= N`.
    pub fn from_entries(level: Modulus, entries: Entries) -> Result<Self> {
        if let Some(&bad) = entries.iter().find(|&&x| x >= level.n()) {
            return Err(Error::EntryOutOfRange {
                entry: bad as u64,
                modulus: level.n(),
            });
        }
        let det = det_entries(&level, &entries);
        if !level.is_unit(det) {
            return Err(Error::NonUnitDeterminant {
                det,
                modulus: level.n(),
            });
        }
        Ok(GMat { entries, level })
    }

    pub(crate) fn from_entries_unchecked(level: Modulus, entries: Entries) -> Self {
        debug_assert!(level.is_unit(det_entries(&level, &entries)));
        GMat { entries, level }
    }

    pub fn identity(level: Modulus) -> Self {
        GMat {
            entries: [1 % level.n(), 0, 0, 1 % level.n()],
            level,
        }
    }

    pub fn neg_identity(level: Modulus) -> Self {
        let m1 = level.neg(1 % level.n());
        GMat {
            entries: [m1, 0, 0, m1],
            level,
        }
    }

    pub fn diag(level: Modulus, a: i64, d: i64) -> Result<Self> {
        Self::new(level, [a, 0, 0, d])
    }

    #[inline]
    pub fn entries(&self) -> Entries {
        self.entries
    }

    #[inline]
    pub fn level(&self) -> Modulus {
        self.level
    }

    pub fn det(&self) -> u32 {
        det_entries(&self.level, &self.entries)
    }

    pub fn trace(&self) -> u32 {
        self.level.add(self.entries[0], self.entries[3])
    }

    pub fn is_identity(&self) -> bool {
        *self == GMat::identity(self.level)
    }

    pub fn mul(&self, other: &GMat) -> Result<GMat> {
        if self.level != other.level {
            return Err(Error::LevelMismatch {
                left: self.level.n(),
                right: other.level.n(),
            });
        }
        Ok(GMat {
            entries: mul_entries(&self.level, &self.entries, &other.entries),
            level: self.level,
        })
    }

    pub fn inv(&self) -> Result<GMat> {
        inv_entries(&self.level, &self.entries)
            .map(|entries| GMat {
                entries,
                level: self.level,
            })
            .ok_or(Error::NonUnitDeterminant {
                det: self.det(),
                modulus: self.level.n(),
            })
    }

    pub fn pow(&self, mut e: u64) -> GMat {
        let mut base = self.entries;
        let mut acc = GMat::identity(self.level).entries;
        while e > 0 {
            if e & 1 == 1 {
                acc = mul_entries(&self.level, &acc, &base);
            }
            base = mul_entries(&self.level, &base, &base);
            e >>= 1;
        }
        GMat {
            entries: acc,
            level: self.level,
        }
    }

    /// Multiplicative order.
    pub fn order(&self) -> u64 {
        let id = GMat::identity(self.level).entries;
        let mut x = self.entries;
        let mut n = 1u64;
        while x != id {
            x = mul_entries(&self.level, &x, &self.entries);
            n += 1;
        }
        n
    }

    /// `u * self * u^-1`.
    pub fn conjugate_by(&self, u: &GMat) -> Result<GMat> {
        u.mul(self)?.mul(&u.inv()?)
    }

    pub fn apply(&self, v: [u32; 2]) -> [u32; 2] {
        apply_entries(&self.level, &self.entries, v)
    }

    /// Entrywise reduction to a smaller exponent of the same prime.
    pub fn reduce_to(&self, target: Modulus) -> Result<GMat> {
        check_same_prime(self.level, target)?;
        if target.k() > self.level.k() {
            return Err(Error::InvalidTargetLevel {
                from: self.level.k(),
                to: target.k(),
            });
        }
        Ok(GMat {
            entries: self.entries.map(|x| x % target.n()),
            level: target,
        })
    }

    /// Reinterprets the same integer entries at a larger exponent.
    pub fn lift_to(&self, target: Modulus) -> Result<GMat> {
        check_same_prime(self.level, target)?;
        if target.k() < self.level.k() {
            return Err(Error::InvalidTargetLevel {
                from: self.level.k(),
                to: target.k(),
            });
        }
        Ok(GMat {
            entries: self.entries,
            level: target,
        })
    }
}

pub(crate) fn check_same_prime(a: Modulus, b: Modulus) -> Result<()> {
    if a.ell() != b.ell() {
        return Err(Error::IncompatiblePrime {
            expected: a.ell(),
            found: b.ell(),
        });
    }
    Ok(())
}

impl fmt::Debug for GMat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let e = self.entries;
        write!(
            f,
            "[[{},{}],[{},{}]] mod {}",
            e[0],
            e[1],
            e[2],
            e[3],
            self.level.n()
        )
    }
}

impl fmt::Display for GMat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// `|GL2(Z/l^kZ)| = l^(4k-3) (l-1) (l^2-1)`; exact for every modulus up to `2^31`.
pub fn gl2_order(m: Modulus) -> u128 {
    let l = m.ell() as u128;
    l.pow(4 * m.k() - 3) * (l - 1) * (l * l - 1)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(ell: u32, k: u32) -> Modulus {
        Modulus::new(ell, k).unwrap()
    }

    fn brute_force_gl2(n: u32) -> u128 {
        let modulus = Modulus::from_prime_power(n as u64).unwrap();
        let mut count = 0u128;
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    for d in 0..n {
                        if modulus.is_unit(det_entries(&modulus, &[a, b, c, d])) {
                            count += 1;
                        }
                    }
                }
            }
        }
        count
    }

    #[test]
    fn modulus_validation() {
        assert_eq!(Modulus::new(4, 1), Err(Error::NotPrime(4)));
        assert_eq!(Modulus::new(3, 0), Err(Error::InvalidExponent(0)));
        assert!(matches!(
            Modulus::new(2, 32),
            Err(Error::ModulusTooLarge(_))
        ));
        assert_eq!(Modulus::new(2, 31).unwrap().n(), 1 << 31);
        assert_eq!(Modulus::from_prime_power(49).unwrap(), m(7, 2));
        assert_eq!(Modulus::from_prime_power(12), Err(Error::NotPrimePower(12)));
        assert_eq!(Modulus::from_prime_power(1), Err(Error::NotPrimePower(1)));
    }

    #[test]
    fn residue_inverse() {
        let n = m(3, 4);
        for a in 0..n.n() {
            match n.inv(a) {
                Some(b) => assert_eq!(n.mul(a, b), 1),
                None => assert!(!n.is_unit(a)),
            }
        }
    }

    #[test]
    fn mat_mul_examples() {
        let n7 = m(7, 1);
        let swap = GMat::new(n7, [0, 1, 1, 0]).unwrap();
        let d = GMat::new(n7, [2, 0, 0, 1]).unwrap();
        assert_eq!(swap.mul(&d).unwrap().entries(), [0, 1, 2, 0]);
        assert_eq!(d.mul(&d).unwrap().entries(), [4, 0, 0, 1]);
        assert_eq!(GMat::identity(n7).mul(&swap).unwrap(), swap);
    }

    #[test]
    fn mat_mul_level_mismatch() {
        let a = GMat::identity(m(7, 1));
        let b = GMat::identity(m(7, 2));
        assert_eq!(a.mul(&b), Err(Error::LevelMismatch { left: 7, right: 49 }));
    }

    #[test]
    fn mat_inv_examples() {
        let n7 = m(7, 1);
        assert!(GMat::identity(n7).inv().unwrap().is_identity());
        let swap = GMat::new(n7, [0, 1, 1, 0]).unwrap();
        assert_eq!(swap.inv().unwrap(), swap);
        let d = GMat::new(n7, [2, 0, 0, 1]).unwrap();
        assert_eq!(d.inv().unwrap().entries(), [4, 0, 0, 1]);
    }

    #[test]
    fn non_unit_determinant_rejected() {
        let n9 = m(3, 2);
        assert_eq!(
            GMat::new(n9, [3, 0, 0, 1]),
            Err(Error::NonUnitDeterminant { det: 3, modulus: 9 })
        );
        assert!(matches!(
            GMat::from_entries(n9, [9, 0, 0, 1]),
            Err(Error::EntryOutOfRange { entry: 9, .. })
        ));
    }

    #[test]
    fn gl2_order_examples() {
        assert_eq!(gl2_order(m(7, 1)), 2016);
        assert_eq!(gl2_order(m(2, 1)), 6);
        assert_eq!(gl2_order(m(3, 2)), 3888);
    }

    #[test]
    fn gl2_order_matches_enumeration_up_to_16() {
        for n in [2u32, 3, 4, 5, 7, 8, 9, 11, 13, 16] {
            let modulus = Modulus::from_prime_power(n as u64).unwrap();
            assert_eq!(gl2_order(modulus), brute_force_gl2(n), "N = {n}");
        }
    }

    #[test]
    fn gl2_order_at_cap_fits() {
        let big = m(2, 31);
        assert_eq!(gl2_order(big), 2u128.pow(121) * 3);
    }

    #[test]
    fn element_order_and_pow() {
        let n7 = m(7, 1);
        let d = GMat::new(n7, [2, 0, 0, 1]).unwrap();
        assert_eq!(d.order(), 3);
        assert!(d.pow(3).is_identity());
        assert_eq!(GMat::neg_identity(m(2, 1)), GMat::identity(m(2, 1)));
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn any_gmat() -> impl Strategy<Value = GMat> {
            (prop_oneof![Just((2u32, 3u32)), Just((3, 2)), Just((5, 1)), Just((7, 2))])
                .prop_flat_map(|(ell, k)| {
                    let modulus = Modulus::new(ell, k).unwrap();
                    let n = modulus.n();
                    (Just(modulus), [0..n, 0..n, 0..n, 0..n])
                })
                .prop_filter_map("non-unit determinant", |(modulus, e)| {
                    GMat::from_entries(modulus, e).ok()
                })
        }

        proptest! {
            #[test]
            fn inverse_is_two_sided(a in any_gmat()) {
                let inv = a.inv().unwrap();
                prop_assert!(a.mul(&inv).unwrap().is_identity());
                prop_assert!(inv.mul(&a).unwrap().is_identity());
            }

            #[test]
            fn det_is_multiplicative(a in any_gmat(), e in 0u64..50) {
                let b = a.pow(e).mul(&GMat::new(a.level(), [1, 1, 0, 1]).unwrap()).unwrap();
                let m = a.level();
                prop_assert_eq!(a.mul(&b).unwrap().det(), m.mul(a.det(), b.det()));
            }
        }
    }
}
