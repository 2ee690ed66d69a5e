//! Isogeny pushforward and whole-class degree scans.
//!
//! For a cyclic kernel `C` of order `l^r`, the `l^k`-torsion of `E/C` is
//! modelled inside `M = (Z/l^(r+k))^2` as the cosets `w + C` with
//! `l^k w` in `C`. Writing `C = <l^k P>` and completing `P` to a basis
//! `{P, Q}` of `M`, those cosets are exactly `x P + l^r y Q + C` with
//! `(x, y)` in `(Z/l^k)^2`, which gives each pair `(C, +-(w + C))` a small
//! integer key. Degrees are orbit sizes of `<G, -I>` on these keys.

use alloc::vec;
use alloc::vec::Vec;

use hashbrown::HashMap;

use crate::error::{Error, Result};
use crate::group::{closure_with_cap, MatrixGroup, DEFAULT_CLOSURE_CAP};
use crate::modmat::{GMat, Modulus, MAX_MODULUS};
use crate::orbits::{is_primitive, line_canonical, line_orbits, pm_canonical, CyclicSubgroup};

/// Default bound on the ambient modulus `l^(r+k)`. It admits `2^9`, `3^6`,
/// `5^4` and `7^3`, and nothing above them.
pub const DEFAULT_AMBIENT_CAP: u64 = 729;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ScanLimits {
    pub ambient_cap: u64,
    pub closure_cap: usize,
}

impl Default for ScanLimits {
    fn default() -> Self {
        ScanLimits {
            ambient_cap: DEFAULT_AMBIENT_CAP,
            closure_cap: DEFAULT_CLOSURE_CAP,
        }
    }
}

/// A pair attaining the minimum of a scan.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Witness {
    pub orbit_id: usize,
    pub kernel: CyclicSubgroup,
    /// A representative `w` in `(Z/l^(r+k))^2` of the coset `w + C`.
    pub point: [u32; 2],
}

/// Degrees of all pairs whose kernel lies in one orbit of kernels.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KernelOrbitDegrees {
    pub orbit_id: usize,
    /// Smallest kernel of the orbit.
    pub kernel: CyclicSubgroup,
    pub orbit_size: u64,
    /// Sorted.
    pub degrees: Vec<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScanReport {
    pub ell: u32,
    pub k: u32,
    pub r: u32,
    pub ambient: u32,
    pub orbits: Vec<KernelOrbitDegrees>,
    pub min_degree: u64,
    pub witness: Witness,
}

impl ScanReport {
    /// Every degree of the scan, sorted.
    pub fn all_degrees(&self) -> Vec<u64> {
        let mut all: Vec<u64> = self.orbits.iter().flat_map(|o| o.degrees.clone()).collect();
        all.sort_unstable();
        all
    }

    pub fn min_odd_degree(&self) -> Option<u64> {
        self.orbits
            .iter()
            .flat_map(|o| o.degrees.iter().copied())
            .filter(|d| d % 2 == 1)
            .min()
    }
}

struct Basis {
    p: [u32; 2],
    q: [u32; 2],
    // Inverse of the matrix with columns P, Q.
    inv: GMat,
}

impl Basis {
    fn new(amb: Modulus, line: [u32; 2]) -> Result<Self> {
        let p = line;
        let q = if amb.is_unit(p[0]) { [0, 1] } else { [1, 0] };
        let b = GMat::from_entries(amb, [p[0], q[0], p[1], q[1]])?;
        Ok(Basis {
            p,
            q,
            inv: b.inv()?,
        })
    }

    fn matrix(&self, amb: Modulus) -> GMat {
        GMat::new(
            amb,
            [
                self.p[0] as i64,
                self.q[0] as i64,
                self.p[1] as i64,
                self.q[1] as i64,
            ],
        )
        .expect("basis matrix is invertible")
    }
}

fn ambient_for(ell: u32, k: u32, r: u32, cap: u64) -> Result<Modulus> {
    let ambient = (ell as u128).checked_pow(r + k).unwrap_or(u128::MAX);
    if ambient > cap as u128 || ambient > MAX_MODULUS as u128 {
        return Err(Error::AmbientTooLarge {
            ambient: ambient.min(u64::MAX as u128) as u64,
            cap,
        });
    }
    Modulus::new(ell, r + k)
}

/// Image of `h` on the `l^k`-torsion of `E/C`, `k = K - r`.
///
/// Each generator is conjugated into the basis `{P, Q}` adapted to `c`,
/// giving `(a, b; l^r c, d)`, and sent to `(a, l^r b; c, d)` mod `l^k`.
pub fn pushforward(h: &MatrixGroup, c: &CyclicSubgroup) -> Result<MatrixGroup> {
    pushforward_with_cap(h, c, DEFAULT_CLOSURE_CAP)
}

pub fn pushforward_with_cap(
    h: &MatrixGroup,
    c: &CyclicSubgroup,
    cap: usize,
) -> Result<MatrixGroup> {
    let amb = c.ambient();
    let r = c.r();
    if amb.k() <= r {
        return Err(Error::InvalidSubgroupOrder {
            r,
            level_k: amb.k(),
        });
    }
    let target = amb.with_exponent(amb.k() - r)?;
    let basis = Basis::new(amb, c.line())?;
    let b = basis.matrix(amb);
    let lr = amb.ell_pow(r) as u32;
    let mut gens = Vec::new();
    for u in h.generators_at(amb)? {
        let [a, bb, cc, d] = basis.inv.mul(&u)?.mul(&b)?.entries();
        if cc % lr != 0 {
            return Err(Error::NotStable);
        }
        let e = [a, amb.mul(lr, bb), cc / lr, d].map(|x| (x % target.n()) as i64);
        gens.push(GMat::new(target, e)?);
    }
    closure_with_cap(&gens, target, cap)
}

/// Degrees of closed points on `X1(l^k)` for curves `l^r`-isogenous to `E`,
/// grouped by orbit of the kernel.
pub fn isogeny_class_degrees(g: &MatrixGroup, ell: u32, k: u32, r: u32) -> Result<ScanReport> {
    isogeny_class_degrees_with_limits(g, ell, k, r, ScanLimits::default())
}

pub fn isogeny_class_degrees_with_limits(
    g: &MatrixGroup,
    ell: u32,
    k: u32,
    r: u32,
    limits: ScanLimits,
) -> Result<ScanReport> {
    if g.level().ell() != ell {
        return Err(Error::IncompatiblePrime {
            expected: g.level().ell(),
            found: ell,
        });
    }
    if k == 0 {
        return Err(Error::InvalidExponent(0));
    }
    let amb = ambient_for(ell, k, r, limits.ambient_cap)?;
    let km = amb.with_exponent(k)?;
    let gens = g.generators_at(amb)?;

    // Kernels are indexed by their canonical line mod l^r.
    let line_groups: Vec<Vec<[u32; 2]>> = if r == 0 {
        vec![vec![[1, 0]]]
    } else {
        let rm = amb.with_exponent(r)?;
        let reduced = gens
            .iter()
            .map(|u| u.reduce_to(rm))
            .collect::<Result<Vec<_>>>()?;
        line_orbits(&reduced, &rm)
    };
    let mut line_index: HashMap<[u32; 2], usize> = HashMap::new();
    let mut bases = Vec::new();
    for line in line_groups.iter().flatten() {
        line_index.insert(*line, bases.len());
        bases.push(Basis::new(amb, *line)?);
    }
    let line_of = |v: [u32; 2]| -> Result<usize> {
        if r == 0 {
            return Ok(0);
        }
        let rm = amb.ell_pow(r) as u32;
        let reduced = [v[0] % rm, v[1] % rm];
        let canon = line_canonical(&amb.with_exponent(r)?, reduced);
        line_index
            .get(&canon)
            .copied()
            .ok_or(Error::Internal("line missing from index"))
    };

    let kn = km.n() as usize;
    let fiber = kn * kn;
    let lr = amb.ell_pow(r) as u32;
    let key = |line: usize, xy: [u32; 2]| line * fiber + xy[0] as usize * kn + xy[1] as usize;
    let point = |line: usize, xy: [u32; 2]| -> [u32; 2] {
        let b = &bases[line];
        let y = amb.mul(lr, xy[1]);
        [
            amb.add(amb.mul(xy[0], b.p[0]), amb.mul(y, b.q[0])),
            amb.add(amb.mul(xy[0], b.p[1]), amb.mul(y, b.q[1])),
        ]
    };
    let step = |line: usize, xy: [u32; 2], u: &GMat| -> Result<(usize, [u32; 2])> {
        let w = u.apply(point(line, xy));
        let target = line_of(u.apply(bases[line].p))?;
        let [x, z] = bases[target].inv.apply(w);
        if z % lr != 0 {
            return Err(Error::Internal("image coset left the fiber"));
        }
        let xy = [x % km.n(), (z / lr) % km.n()];
        Ok((target, pm_canonical(&km, xy)))
    };

    let mut seen = vec![false; bases.len() * fiber];
    let mut orbits = Vec::new();
    let mut best: Option<(u64, Witness)> = None;
    let mut queue: Vec<(usize, [u32; 2])> = Vec::new();
    for (orbit_id, lines) in line_groups.iter().enumerate() {
        let seed_line = line_index[&lines[0]];
        let kernel = CyclicSubgroup::from_line(amb, r, lines[0])?;
        let mut degrees = Vec::new();
        for x in 0..km.n() {
            for y in 0..km.n() {
                let xy = [x, y];
                if !is_primitive(&km, xy) || pm_canonical(&km, xy) != xy {
                    continue;
                }
                if seen[key(seed_line, xy)] {
                    continue;
                }
                seen[key(seed_line, xy)] = true;
                queue.clear();
                queue.push((seed_line, xy));
                let mut head = 0;
                while head < queue.len() {
                    let (line, cur) = queue[head];
                    head += 1;
                    for u in &gens {
                        let next = step(line, cur, u)?;
                        if !seen[key(next.0, next.1)] {
                            seen[key(next.0, next.1)] = true;
                            queue.push(next);
                        }
                    }
                }
                let degree = queue.len() as u64;
                degrees.push(degree);
                if best.as_ref().is_none_or(|(d, _)| degree < *d) {
                    let witness = Witness {
                        orbit_id,
                        kernel,
                        point: point(seed_line, xy),
                    };
                    best = Some((degree, witness));
                }
            }
        }
        degrees.sort_unstable();
        orbits.push(KernelOrbitDegrees {
            orbit_id,
            kernel,
            orbit_size: lines.len() as u64,
            degrees,
        });
    }
    let (min_degree, witness) = best.ok_or(Error::Internal("empty scan"))?;
    Ok(ScanReport {
        ell,
        k,
        r,
        ambient: amb.n(),
        orbits,
        min_degree,
        witness,
    })
}

/// Least degree over `0 <= r <= r_max` and the first `r` attaining it.
pub fn class_min_degree(g: &MatrixGroup, ell: u32, k: u32, r_max: u32) -> Result<(u64, u32)> {
    class_min_degree_with_limits(g, ell, k, r_max, ScanLimits::default())
}

pub fn class_min_degree_with_limits(
    g: &MatrixGroup,
    ell: u32,
    k: u32,
    r_max: u32,
    limits: ScanLimits,
) -> Result<(u64, u32)> {
    scan_min(g, ell, k, r_max, limits, |report| Some(report.min_degree))?
        .ok_or(Error::Internal("empty range"))
}

/// Least odd degree over `0 <= r <= r_max`, if any degree is odd.
pub fn class_min_odd_degree(
    g: &MatrixGroup,
    ell: u32,
    k: u32,
    r_max: u32,
) -> Result<Option<(u64, u32)>> {
    class_min_odd_degree_with_limits(g, ell, k, r_max, ScanLimits::default())
}

pub fn class_min_odd_degree_with_limits(
    g: &MatrixGroup,
    ell: u32,
    k: u32,
    r_max: u32,
    limits: ScanLimits,
) -> Result<Option<(u64, u32)>> {
    scan_min(g, ell, k, r_max, limits, ScanReport::min_odd_degree)
}

fn scan_min(
    g: &MatrixGroup,
    ell: u32,
    k: u32,
    r_max: u32,
    limits: ScanLimits,
    pick: impl Fn(&ScanReport) -> Option<u64>,
) -> Result<Option<(u64, u32)>> {
    let mut best: Option<(u64, u32)> = None;
    for r in 0..=r_max {
        let report = isogeny_class_degrees_with_limits(g, ell, k, r, limits)?;
        if let Some(d) = pick(&report) {
            if best.is_none_or(|(b, _)| d < b) {
                best = Some((d, r));
            }
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::builtin;
    use crate::group::closure;
    use crate::orbits::{closed_point_degrees, cyclic_subgroup_orbits};

    fn m(ell: u32, k: u32) -> Modulus {
        Modulus::new(ell, k).unwrap()
    }

    fn group(name: &str, ell: u32, k: u32) -> MatrixGroup {
        let entry = builtin(name, ell, k).unwrap();
        closure(&entry.generators, entry.level).unwrap()
    }

    #[test]
    fn pushforward_transform_example() {
        let n9 = m(3, 2);
        let h = closure(&[GMat::new(n9, [1, 1, 3, 2]).unwrap()], n9).unwrap();
        let c = CyclicSubgroup::new(n9, [3, 0]).unwrap();
        let pushed = pushforward(&h, &c).unwrap();
        let expected = GMat::new(m(3, 1), [1, 0, 1, 2]).unwrap();
        assert!(pushed.contains(&expected).unwrap());
        assert_eq!(pushed.generators(), &[expected]);
        assert_eq!(pushed.generators()[0].det(), h.generators()[0].det() % 3);
    }

    #[test]
    fn pushforward_rejects_unstable_kernel() {
        let full = group("full", 3, 2);
        let c = CyclicSubgroup::new(m(3, 2), [3, 0]).unwrap();
        assert_eq!(pushforward(&full, &c).unwrap_err(), Error::NotStable);
    }

    #[test]
    fn pushforward_of_trivial_kernel_is_reduction() {
        let full = group("full", 3, 1).lift(m(3, 2)).unwrap();
        let c = CyclicSubgroup::from_line(m(3, 2), 0, [1, 0]).unwrap();
        assert_eq!(pushforward(&full, &c).unwrap().order(), 3888);
    }

    #[test]
    fn scan_r0_matches_point_degrees() {
        let ns = group("paper_7ns21", 7, 1);
        let report = isogeny_class_degrees(&ns, 7, 1, 0).unwrap();
        assert_eq!(report.all_degrees(), vec![6, 9, 9]);
        assert_eq!(report.min_degree, 6);
        let report = isogeny_class_degrees(&ns, 7, 2, 0).unwrap();
        assert_eq!(report.all_degrees(), vec![294, 441, 441]);
        let lifted = closure(&ns.generators_at(m(7, 2)).unwrap(), m(7, 2)).unwrap();
        assert_eq!(
            closed_point_degrees(&lifted, m(7, 2)).unwrap(),
            report.all_degrees()
        );
    }

    #[test]
    fn scan_headline() {
        let ns = group("paper_7ns21", 7, 1);
        // Overall least degree is l(l-1) = 42; the least odd degree is 9 * 7.
        assert_eq!(class_min_degree(&ns, 7, 2, 1).unwrap(), (42, 1));
        assert_eq!(class_min_odd_degree(&ns, 7, 2, 1).unwrap(), Some((63, 1)));
        assert_eq!(class_min_odd_degree(&ns, 7, 2, 0).unwrap(), Some((441, 0)));
        let report = isogeny_class_degrees(&ns, 7, 2, 1).unwrap();
        let sizes: Vec<u64> = report.orbits.iter().map(|o| o.orbit_size).collect();
        assert_eq!(sizes, vec![2, 3, 3]);
        assert_eq!(report.witness.kernel.r(), 1);
    }

    #[test]
    fn full_image_law() {
        for (ell, expected) in [(3u32, 36u64), (5, 300)] {
            let full = group("full", ell, 1);
            assert_eq!(
                isogeny_class_degrees(&full, ell, 2, 0).unwrap().min_degree,
                expected
            );
            assert_eq!(class_min_degree(&full, ell, 2, 2).unwrap(), (expected, 0));
        }
    }

    #[test]
    fn degenerate_class_min() {
        let neg = closure(&[GMat::new(m(3, 1), [2, 0, 0, 2]).unwrap()], m(3, 1)).unwrap();
        assert_eq!(class_min_degree(&neg, 3, 1, 0).unwrap(), (1, 0));
    }

    #[test]
    fn ambient_cap_enforced() {
        let ns = group("paper_7ns21", 7, 1);
        let err = isogeny_class_degrees(&ns, 7, 2, 2).unwrap_err();
        assert_eq!(
            err,
            Error::AmbientTooLarge {
                ambient: 2401,
                cap: 729
            }
        );
    }

    #[test]
    fn stable_kernels_agree_with_pushforward() {
        let borel = group("borel", 3, 1);
        let amb = m(3, 3);
        let h = borel.lift(amb).unwrap();
        let report = isogeny_class_degrees(&borel, 3, 2, 1).unwrap();
        for orbit in cyclic_subgroup_orbits(&h, 1).unwrap() {
            if orbit.size() != 1 {
                continue;
            }
            let c = *orbit.representative();
            let pushed = pushforward(&h, &c).unwrap();
            let scanned = report.orbits.iter().find(|o| o.kernel == c).unwrap();
            assert_eq!(
                closed_point_degrees(&pushed, m(3, 2)).unwrap(),
                scanned.degrees
            );
        }
    }
}
