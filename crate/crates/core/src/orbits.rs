//! Orbits on torsion points and cyclic subgroups.
//!
//! Degrees are orbit sizes under `<G, -I>`, so every computation here works
//! on `+-`-classes of vectors and never needs the element set of `G`.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::group::{MatrixGroup, DEFAULT_CLOSURE_CAP};
use crate::modmat::{valuation, GMat, Modulus};

/// A `+-`-class of vectors of exact order `N`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TorsionClass {
    rep: [u32; 2],
    level: Modulus,
}

impl TorsionClass {
    /// Canonical class of `v`; fails unless `v` has exact order `N`.
    pub fn new(level: Modulus, v: [i64; 2]) -> Result<Self> {
        let v = [level.reduce_signed(v[0]), level.reduce_signed(v[1])];
        if !is_primitive(&level, v) {
            return Err(Error::InvalidArgument("vector does not have exact order N"));
        }
        Ok(TorsionClass {
            rep: pm_canonical(&level, v),
            level,
        })
    }

    /// Lexicographically smaller of `v` and `-v`.
    pub fn rep(&self) -> [u32; 2] {
        self.rep
    }

    pub fn level(&self) -> Modulus {
        self.level
    }
}

pub(crate) fn is_primitive(m: &Modulus, v: [u32; 2]) -> bool {
    !v[0].is_multiple_of(m.ell()) || !v[1].is_multiple_of(m.ell())
}

pub(crate) fn pm_canonical(m: &Modulus, v: [u32; 2]) -> [u32; 2] {
    let neg = [m.neg(v[0]), m.neg(v[1])];
    if neg < v {
        neg
    } else {
        v
    }
}

/// All classes, sorted by representative.
pub fn torsion_classes(m: Modulus) -> Vec<TorsionClass> {
    let n = m.n();
    let mut out = Vec::new();
    for a in 0..n {
        for b in 0..n {
            let v = [a, b];
            if is_primitive(&m, v) && pm_canonical(&m, v) == v {
                out.push(TorsionClass { rep: v, level: m });
            }
        }
    }
    out
}

/// Orbits of `<G, -I>` on torsion classes at level `n`, as `(smallest class, size)`
/// sorted by class. `G` may sit at any exponent of the same prime; it is
/// reduced, or lifted as a full preimage, to `n`.
pub fn point_orbits(g: &MatrixGroup, n: Modulus) -> Result<Vec<(TorsionClass, u64)>> {
    let gens = g.generators_at(n)?;
    let size = n.n() as u64 * n.n() as u64;
    if size > DEFAULT_CLOSURE_CAP as u64 * 4 {
        return Err(Error::ClosureTooLarge {
            cap: DEFAULT_CLOSURE_CAP,
        });
    }
    let idx = |v: [u32; 2]| v[0] as usize * n.n() as usize + v[1] as usize;
    let mut seen = vec![false; size as usize];
    let mut out = Vec::new();
    let mut queue = Vec::new();
    for class in torsion_classes(n) {
        if seen[idx(class.rep)] {
            continue;
        }
        seen[idx(class.rep)] = true;
        queue.clear();
        queue.push(class.rep);
        let mut head = 0;
        while head < queue.len() {
            let v = queue[head];
            head += 1;
            for h in &gens {
                let w = pm_canonical(&n, h.apply(v));
                if !seen[idx(w)] {
                    seen[idx(w)] = true;
                    queue.push(w);
                }
            }
        }
        out.push((class, queue.len() as u64));
    }
    Ok(out)
}

/// Sorted orbit sizes of `<G, -I>` on the torsion classes at level `n`.
pub fn closed_point_degrees(g: &MatrixGroup, n: Modulus) -> Result<Vec<u64>> {
    let mut degrees: Vec<u64> = point_orbits(g, n)?.into_iter().map(|(_, s)| s).collect();
    degrees.sort_unstable();
    Ok(degrees)
}

/// A cyclic subgroup of order `l^r` in `(Z/l^K)^2`, `K >= r`.
///
/// It is stored through its line `v mod l^r`, with generator `l^(K-r) v`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CyclicSubgroup {
    gen: [u32; 2],
    line: [u32; 2],
    r: u32,
    ambient: Modulus,
}

impl CyclicSubgroup {
    /// The subgroup generated by `v`, which must have exact order `l^r`.
    pub fn new(ambient: Modulus, v: [i64; 2]) -> Result<Self> {
        let v = [ambient.reduce_signed(v[0]), ambient.reduce_signed(v[1])];
        let order = ambient.vector_order(v);
        let r = valuation(order as u128, ambient.ell());
        let shift = ambient.ell_pow(ambient.k() - r) as u32;
        Self::from_line(ambient, r, [v[0] / shift, v[1] / shift])
    }

    /// The subgroup `<l^(K-r) v>`; `v` must be primitive mod `l`.
    pub fn from_line(ambient: Modulus, r: u32, v: [u32; 2]) -> Result<Self> {
        if r > ambient.k() {
            return Err(Error::InvalidSubgroupOrder {
                r,
                level_k: ambient.k(),
            });
        }
        if r == 0 {
            return Ok(CyclicSubgroup {
                gen: [0, 0],
                line: [1, 0],
                r,
                ambient,
            });
        }
        let lm = ambient.with_exponent(r)?;
        let v = [v[0] % lm.n(), v[1] % lm.n()];
        if !is_primitive(&lm, v) {
            return Err(Error::InvalidArgument(
                "line representative is not primitive",
            ));
        }
        let line = line_canonical(&lm, v);
        let shift = ambient.ell_pow(ambient.k() - r) as u32;
        Ok(CyclicSubgroup {
            gen: [line[0] * shift, line[1] * shift],
            line,
            r,
            ambient,
        })
    }

    /// Canonical generator: the smallest unit multiple.
    pub fn gen(&self) -> [u32; 2] {
        self.gen
    }

    /// Primitive representative `v` with `gen = l^(K-r) v`, entries below `l^r`.
    pub fn line(&self) -> [u32; 2] {
        self.line
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    pub fn ambient(&self) -> Modulus {
        self.ambient
    }

    /// Whether `h` maps the subgroup into itself.
    pub fn is_stable_under(&self, h: &GMat) -> Result<bool> {
        if self.r == 0 {
            return Ok(true);
        }
        let lm = self.ambient.with_exponent(self.r)?;
        let h = if h.level().k() >= self.r {
            h.reduce_to(lm)?
        } else {
            return Err(Error::InvalidTargetLevel {
                from: h.level().k(),
                to: self.r,
            });
        };
        Ok(line_canonical(&lm, h.apply(self.line)) == self.line)
    }
}

/// Smallest unit multiple of a primitive `v` modulo `l^r`.
pub(crate) fn line_canonical(m: &Modulus, v: [u32; 2]) -> [u32; 2] {
    if m.is_unit(v[0]) {
        let inv = m.inv(v[0]).unwrap_or(1);
        return [1, m.mul(v[1], inv)];
    }
    if v[0] == 0 {
        return [0, 1];
    }
    let e = valuation(v[0] as u128, m.ell());
    let pe = m.ell_pow(e) as u32;
    let u = v[0] / pe;
    let inv = m.inv(u % m.n()).unwrap_or(1);
    let tail = m.ell_pow(m.k() - e) as u32;
    [pe, m.mul(v[1], inv) % tail]
}

/// Canonical lines mod `l^r`, sorted.
pub(crate) fn all_lines(m: &Modulus) -> Vec<[u32; 2]> {
    let n = m.n();
    let mut out = vec![[0, 1]];
    for y in 0..n {
        out.push([1, y]);
    }
    for e in 1..m.k() {
        let tail = m.ell_pow(m.k() - e) as u32;
        let pe = m.ell_pow(e) as u32;
        for s in 0..tail {
            if s % m.ell() != 0 {
                out.push([pe, s]);
            }
        }
    }
    out.sort_unstable();
    out
}

/// Orbits of `gens` (at level `m`) on lines mod `m`, each sorted, ordered by
/// smallest member.
pub(crate) fn line_orbits(gens: &[GMat], m: &Modulus) -> Vec<Vec<[u32; 2]>> {
    let lines = all_lines(m);
    let mut seen = hashbrown::HashSet::new();
    let mut out = Vec::new();
    for start in &lines {
        if !seen.insert(*start) {
            continue;
        }
        let mut orbit = vec![*start];
        let mut head = 0;
        while head < orbit.len() {
            let v = orbit[head];
            head += 1;
            for h in gens {
                let w = line_canonical(m, h.apply(v));
                if seen.insert(w) {
                    orbit.push(w);
                }
            }
        }
        orbit.sort_unstable();
        out.push(orbit);
    }
    out
}

/// One orbit of cyclic subgroups, members sorted.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KernelOrbit {
    pub members: Vec<CyclicSubgroup>,
}

impl KernelOrbit {
    pub fn size(&self) -> u64 {
        self.members.len() as u64
    }

    pub fn representative(&self) -> &CyclicSubgroup {
        &self.members[0]
    }
}

/// Orbits of `G` on cyclic subgroups of order `l^r` in `(Z/l^K)^2`, `K` the
/// level exponent of `G`.
pub fn cyclic_subgroup_orbits(g: &MatrixGroup, r: u32) -> Result<Vec<KernelOrbit>> {
    let ambient = g.level();
    if r > ambient.k() {
        return Err(Error::InvalidSubgroupOrder {
            r,
            level_k: ambient.k(),
        });
    }
    if r == 0 {
        return Ok(vec![KernelOrbit {
            members: vec![CyclicSubgroup::from_line(ambient, 0, [1, 0])?],
        }]);
    }
    let lm = ambient.with_exponent(r)?;
    let gens = g.generators_at(lm)?;
    line_orbits(&gens, &lm)
        .into_iter()
        .map(|orbit| {
            let members = orbit
                .into_iter()
                .map(|v| CyclicSubgroup::from_line(ambient, r, v))
                .collect::<Result<Vec<_>>>()?;
            Ok(KernelOrbit { members })
        })
        .collect()
}

/// Image of an isogeny character: a subgroup of `(Z/l^r)^x`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CharacterImage {
    values: Vec<u32>,
    modulus: Modulus,
}

impl CharacterImage {
    /// Subgroup generated by `gens`; every entry must be a unit.
    pub fn generated_by(modulus: Modulus, gens: &[u32]) -> Result<Self> {
        let mut gens: Vec<u32> = gens.iter().map(|&a| a % modulus.n()).collect();
        if gens.iter().any(|&a| !modulus.is_unit(a)) {
            return Err(Error::InvalidArgument("character value is not a unit"));
        }
        gens.retain(|&a| a != 1);
        let mut values = vec![1 % modulus.n()];
        let mut seen = hashbrown::HashSet::new();
        seen.insert(values[0]);
        let mut head = 0;
        while head < values.len() {
            let x = values[head];
            head += 1;
            for &a in &gens {
                let y = modulus.mul(x, a);
                if seen.insert(y) {
                    values.push(y);
                }
            }
        }
        values.sort_unstable();
        Ok(CharacterImage { values, modulus })
    }

    /// Sorted values.
    pub fn values(&self) -> &[u32] {
        &self.values
    }

    pub fn modulus(&self) -> Modulus {
        self.modulus
    }
}

/// Values `a` with `h(gen) = a gen` for `h` in `G`, for a `G`-stable `c`.
pub fn isogeny_character(g: &MatrixGroup, c: &CyclicSubgroup) -> Result<CharacterImage> {
    if c.r() == 0 {
        return Err(Error::InvalidSubgroupOrder {
            r: 0,
            level_k: c.ambient().k(),
        });
    }
    let lm = c.ambient().with_exponent(c.r())?;
    let v = c.line();
    let unit_coord = if lm.is_unit(v[0]) { 0 } else { 1 };
    let inv = lm
        .inv(v[unit_coord])
        .ok_or(Error::Internal("line without unit coordinate"))?;
    let mut alphas = Vec::new();
    for h in g.generators_at(lm)? {
        let w = h.apply(v);
        let alpha = lm.mul(w[unit_coord], inv);
        if [lm.mul(alpha, v[0]), lm.mul(alpha, v[1])] != w {
            return Err(Error::NotStable);
        }
        alphas.push(alpha);
    }
    CharacterImage::generated_by(lm, &alphas)
}

/// `|values / {+-1}|`: the degree over which some quadratic twist acquires a
/// rational point generating the kernel.
pub fn twisted_point_degree(ch: &CharacterImage) -> Result<u64> {
    let m = ch.modulus();
    if m.n() < 3 {
        return Err(Error::ModulusTooSmall {
            modulus: m.n(),
            minimum: 3,
        });
    }
    let mut all: Vec<u32> = ch.values.iter().flat_map(|&a| [a, m.neg(a)]).collect();
    all.sort_unstable();
    all.dedup();
    Ok(all.len() as u64 / 2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::builtin;
    use crate::group::closure;

    fn m(ell: u32, k: u32) -> Modulus {
        Modulus::new(ell, k).unwrap()
    }

    fn g(level: Modulus, e: [i64; 4]) -> GMat {
        GMat::new(level, e).unwrap()
    }

    fn group(name: &str, ell: u32, k: u32) -> MatrixGroup {
        let entry = builtin(name, ell, k).unwrap();
        closure(&entry.generators, entry.level).unwrap()
    }

    #[test]
    fn torsion_class_counts() {
        assert_eq!(torsion_classes(m(3, 1)).len(), 4);
        assert_eq!(torsion_classes(m(5, 1)).len(), 12);
        assert_eq!(torsion_classes(m(2, 1)).len(), 3);
        assert_eq!(torsion_classes(m(3, 2)).len(), 36);
        for class in torsion_classes(m(7, 1)) {
            let v = class.rep();
            assert!(v <= [(7 - v[0]) % 7, (7 - v[1]) % 7]);
        }
    }

    #[test]
    fn closed_point_degree_examples() {
        assert_eq!(
            closed_point_degrees(&group("full", 5, 1), m(5, 1)).unwrap(),
            vec![12]
        );
        let neg = closure(&[g(m(3, 1), [2, 0, 0, 2])], m(3, 1)).unwrap();
        assert_eq!(
            closed_point_degrees(&neg, m(3, 1)).unwrap(),
            vec![1, 1, 1, 1]
        );
        let ns = group("paper_7ns21", 7, 1);
        assert_eq!(closed_point_degrees(&ns, m(7, 1)).unwrap(), vec![6, 9, 9]);
    }

    #[test]
    fn canonical_line_is_smallest_unit_multiple() {
        for (ell, r) in [(2, 1), (2, 3), (3, 2), (5, 2), (7, 1), (2, 5)] {
            let lm = m(ell, r);
            let n = lm.n();
            for a in 0..n {
                for b in 0..n {
                    if !is_primitive(&lm, [a, b]) {
                        continue;
                    }
                    let best = (1..n)
                        .filter(|&u| lm.is_unit(u))
                        .map(|u| [lm.mul(u, a), lm.mul(u, b)])
                        .min()
                        .unwrap();
                    assert_eq!(line_canonical(&lm, [a, b]), best, "{a},{b} mod {n}");
                }
            }
            let count = all_lines(&lm).len() as u64;
            assert_eq!(count, (ell as u64).pow(r - 1) * (ell as u64 + 1));
        }
    }

    #[test]
    fn cyclic_subgroup_generator_is_canonical() {
        let amb = m(3, 3);
        let c = CyclicSubgroup::new(amb, [3 * 2, 3 * 5]).unwrap();
        assert_eq!(c.r(), 2);
        let n = amb.n();
        let best = (1..n)
            .filter(|&u| amb.is_unit(u))
            .map(|u| [amb.mul(u, 6), amb.mul(u, 15)])
            .min()
            .unwrap();
        assert_eq!(c.gen(), best);
        assert_eq!(c.line(), [1, 7]);
    }

    #[test]
    fn cyclic_orbit_examples() {
        for ell in [3, 5, 7] {
            let orbits = cyclic_subgroup_orbits(&group("full", ell, 1), 1).unwrap();
            assert_eq!(orbits.len(), 1);
            assert_eq!(orbits[0].size(), ell as u64 + 1);
        }
        let borel = cyclic_subgroup_orbits(&group("borel", 5, 1), 1).unwrap();
        let mut sizes: Vec<u64> = borel.iter().map(KernelOrbit::size).collect();
        sizes.sort_unstable();
        assert_eq!(sizes, vec![1, 5]);
        let stable = borel.iter().find(|o| o.size() == 1).unwrap();
        assert_eq!(stable.representative().gen(), [1, 0]);
        let trivial = closure(&[], m(3, 1)).unwrap();
        let orbits = cyclic_subgroup_orbits(&trivial, 1).unwrap();
        assert_eq!(
            orbits.iter().map(KernelOrbit::size).collect::<Vec<_>>(),
            vec![1; 4]
        );
    }

    #[test]
    fn character_examples() {
        let trivial = closure(&[], m(5, 1)).unwrap();
        let e1 = CyclicSubgroup::new(m(5, 1), [1, 0]).unwrap();
        assert_eq!(isogeny_character(&trivial, &e1).unwrap().values(), &[1]);

        let borel = group("borel", 5, 1);
        let ch = isogeny_character(&borel, &e1).unwrap();
        assert_eq!(ch.values(), &[1, 2, 3, 4]);
        assert_eq!(twisted_point_degree(&ch).unwrap(), 2);

        let n25 = m(5, 2);
        let grp = closure(
            &[
                g(n25, [6, 0, 0, 1]),
                g(n25, [1, 1, 0, 1]),
                g(n25, [1, 0, 0, 2]),
            ],
            n25,
        )
        .unwrap();
        let c = CyclicSubgroup::new(n25, [1, 0]).unwrap();
        let ch = isogeny_character(&grp, &c).unwrap();
        assert_eq!(ch.values(), &[1, 6, 11, 16, 21]);
        assert_eq!(twisted_point_degree(&ch).unwrap(), 5);

        let e2 = CyclicSubgroup::new(m(5, 1), [0, 1]).unwrap();
        assert_eq!(isogeny_character(&borel, &e2), Err(Error::NotStable));
    }

    #[test]
    fn twisted_degree_rejects_small_modulus() {
        let ch = CharacterImage::generated_by(m(2, 1), &[1]).unwrap();
        assert!(matches!(
            twisted_point_degree(&ch),
            Err(Error::ModulusTooSmall { .. })
        ));
        let ch = CharacterImage::generated_by(m(7, 1), &[1]).unwrap();
        assert_eq!(twisted_point_degree(&ch).unwrap(), 1);
    }
}
