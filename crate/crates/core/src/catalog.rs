//! Built-in subgroups of `GL2(Z/l^kZ)`.
//!
//! Structural groups (Borel, Cartan and their normalizers, the unipotent
//! column group) are defined by their conditions mod `l^k`. Groups given by
//! explicit mod-7 matrices are returned as the full preimage at level `7^k`.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use hashbrown::HashSet;

use crate::error::{Error, Result};
use crate::group::full_preimage_gens;
use crate::group::{closure, MatrixGroup};
use crate::modmat::{is_prime, prime_divisors, GMat, Modulus};

pub const BUILTIN_NAMES: [&str; 9] = [
    "full",
    "borel",
    "split_cartan",
    "split_cartan_normalizer",
    "nonsplit_cartan",
    "nonsplit_cartan_normalizer",
    "paper_7ns21",
    "paper_7ns21_index3",
    "unipotent_column",
];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Source {
    Builtin,
    File,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CatalogEntry {
    pub label: String,
    pub level: Modulus,
    pub generators: Vec<GMat>,
    pub index_claimed: Option<u128>,
    pub cm: bool,
    pub source: Source,
}

impl CatalogEntry {
    pub fn closure(&self) -> Result<MatrixGroup> {
        closure(&self.generators, self.level)
    }
}

/// Least primitive root mod an odd prime.
fn primitive_root(p: u32) -> u32 {
    let m = Modulus::new(p, 1).expect("prime");
    let factors = prime_divisors(p as u64 - 1);
    (2..p)
        .find(|&g| factors.iter().all(|&q| m.pow(g, (p as u64 - 1) / q) != 1))
        .unwrap_or(1)
}

/// Least quadratic non-residue mod an odd prime.
fn least_nonresidue(p: u32) -> u32 {
    let m = Modulus::new(p, 1).expect("prime");
    (2..p)
        .find(|&a| m.pow(a, (p as u64 - 1) / 2) == p - 1)
        .unwrap_or(2)
}

/// Generators of `(Z/l^k)^x`.
fn unit_generators(m: Modulus) -> Vec<u32> {
    let n = m.n();
    let mut out = if m.ell() == 2 {
        vec![n - 1, 5 % n]
    } else {
        vec![primitive_root(m.ell()) % n, (1 + m.ell()) % n]
    };
    out.retain(|&u| u != 1 % n);
    out.dedup();
    out
}

fn mat(m: Modulus, e: [i64; 4]) -> Result<GMat> {
    GMat::new(m, e)
}

/// Multiplication by `a + b t` on the unramified quadratic extension of
/// `Z/l^k`, in the basis `{1, t}`.
fn nonsplit_element(m: Modulus, a: i64, b: i64) -> Result<GMat> {
    if m.ell() == 2 {
        // t^2 = -t - 1.
        mat(m, [a, -b, b, a - b])
    } else {
        let eps = least_nonresidue(m.ell()) as i64;
        mat(m, [a, b * eps, b, a])
    }
}

/// Greedy generating set of the nonsplit Cartan at level `m`.
fn nonsplit_generators(m: Modulus) -> Result<Vec<GMat>> {
    let ell = m.ell() as u128;
    let target = ell.pow(2 * (m.k() - 1)) * (ell * ell - 1);
    let mut gens: Vec<GMat> = Vec::new();
    let mut elements: HashSet<[u32; 4]> = HashSet::new();
    elements.insert(GMat::identity(m).entries());
    let n = m.n() as i64;
    let candidates = (0..n).flat_map(|a| (0..n).map(move |b| (a, b)));
    for (a, b) in candidates {
        if elements.len() as u128 == target {
            break;
        }
        let Ok(x) = nonsplit_element(m, a, b) else {
            continue;
        };
        if elements.contains(&x.entries()) {
            continue;
        }
        gens.push(x);
        let group = closure(&gens, m)?;
        elements = group
            .elements()
            .into_iter()
            .flatten()
            .map(|g| g.entries())
            .collect();
    }
    if elements.len() as u128 != target {
        return Err(Error::Internal("nonsplit Cartan generators incomplete"));
    }
    Ok(gens)
}

/// Generators for a named group at level `l^k`.
pub fn builtin(name: &str, ell: u32, k: u32) -> Result<CatalogEntry> {
    if !is_prime(ell as u64) {
        return Err(Error::NotPrime(ell as u64));
    }
    let m = Modulus::new(ell, k)?;
    let units = unit_generators(m);
    let diag_left = |u: u32| GMat::diag(m, u as i64, 1);
    let diag_right = |u: u32| GMat::diag(m, 1, u as i64);
    let upper = mat(m, [1, 1, 0, 1])?;
    let lower = mat(m, [1, 0, 1, 1])?;
    let swap = mat(m, [0, 1, 1, 0])?;

    let mut gens: Vec<GMat> = Vec::new();
    match name {
        "full" => {
            gens.push(upper);
            gens.push(lower);
            for &u in &units {
                gens.push(diag_left(u)?);
            }
        }
        "borel" => {
            gens.push(upper);
            for &u in &units {
                gens.push(diag_left(u)?);
                gens.push(diag_right(u)?);
            }
        }
        "split_cartan" | "split_cartan_normalizer" => {
            for &u in &units {
                gens.push(diag_left(u)?);
                gens.push(diag_right(u)?);
            }
            if name == "split_cartan_normalizer" {
                gens.push(swap);
            }
        }
        "nonsplit_cartan" | "nonsplit_cartan_normalizer" => {
            gens = nonsplit_generators(m)?;
            if name == "nonsplit_cartan_normalizer" {
                gens.push(if ell == 2 {
                    mat(m, [1, -1, 0, -1])?
                } else {
                    GMat::diag(m, 1, -1)?
                });
            }
        }
        "unipotent_column" => {
            gens.push(upper);
            for &u in &units {
                gens.push(diag_right(u)?);
            }
        }
        "paper_7ns21" | "paper_7ns21_index3" => {
            if ell != 7 {
                return Err(Error::BuiltinRequiresPrime {
                    name: if name == "paper_7ns21" {
                        "paper_7ns21"
                    } else {
                        "paper_7ns21_index3"
                    },
                    ell: 7,
                });
            }
            let m7 = Modulus::new(7, 1)?;
            let base = if name == "paper_7ns21" {
                vec![mat(m7, [0, 1, 1, 0])?, mat(m7, [2, 0, 0, 1])?]
            } else {
                vec![mat(m7, [1, 0, 0, 6])?, mat(m7, [2, 0, 0, 2])?]
            };
            let group = closure(&base, m7)?;
            gens = full_preimage_gens(&group, m)?;
        }
        other => return Err(Error::UnknownBuiltin(String::from(other))),
    }
    Ok(CatalogEntry {
        label: String::from(name),
        level: m,
        generators: gens,
        index_claimed: None,
        cm: false,
        source: Source::Builtin,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modmat::gl2_order;

    fn order(name: &str, ell: u32, k: u32) -> u128 {
        builtin(name, ell, k).unwrap().closure().unwrap().order()
    }

    #[test]
    fn builtin_examples() {
        assert_eq!(order("full", 5, 1), 480);
        assert_eq!(order("nonsplit_cartan_normalizer", 5, 1), 48);
        let ns = builtin("paper_7ns21", 7, 1).unwrap();
        let entries: Vec<_> = ns.generators.iter().map(GMat::entries).collect();
        assert_eq!(entries, vec![[0, 1, 1, 0], [2, 0, 0, 1]]);
        assert_eq!(order("paper_7ns21", 7, 1), 18);
        assert_eq!(order("paper_7ns21_index3", 7, 1), 6);
        assert!(matches!(
            builtin("paper_7ns21", 5, 1),
            Err(Error::BuiltinRequiresPrime { .. })
        ));
        assert!(matches!(
            builtin("nope", 5, 1),
            Err(Error::UnknownBuiltin(_))
        ));
    }

    #[test]
    fn structural_orders() {
        for ell in [2u32, 3, 5, 7, 11, 13] {
            for k in 1..=3u32 {
                let m = Modulus::new(ell, k).unwrap();
                if gl2_order(m) > 3_000_000 {
                    continue;
                }
                let l = ell as u128;
                let phi = m.unit_count() as u128;
                let lk = m.n() as u128;
                assert_eq!(order("full", ell, k), gl2_order(m), "full {m:?}");
                assert_eq!(order("borel", ell, k), lk * phi * phi, "borel {m:?}");
                assert_eq!(order("split_cartan", ell, k), phi * phi);
                assert_eq!(order("split_cartan_normalizer", ell, k), 2 * phi * phi);
                let ns = l.pow(2 * (k - 1)) * (l * l - 1);
                assert_eq!(order("nonsplit_cartan", ell, k), ns, "nonsplit {m:?}");
                assert_eq!(order("nonsplit_cartan_normalizer", ell, k), 2 * ns);
                assert_eq!(order("unipotent_column", ell, k), lk * phi);
            }
        }
    }

    #[test]
    fn unit_generators_generate() {
        for (ell, k) in [(2, 1), (2, 2), (2, 5), (3, 3), (5, 2), (7, 2), (13, 1)] {
            let m = Modulus::new(ell, k).unwrap();
            let mut seen = vec![1 % m.n()];
            let gens = unit_generators(m);
            let mut head = 0;
            while head < seen.len() {
                let x = seen[head];
                head += 1;
                for &g in &gens {
                    let y = m.mul(x, g);
                    if !seen.contains(&y) {
                        seen.push(y);
                    }
                }
            }
            assert_eq!(seen.len() as u64, m.unit_count());
        }
    }
}
