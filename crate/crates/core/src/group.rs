//! Finite subgroups of `GL2(Z/l^kZ)`.
//!
//! A [`MatrixGroup`] always knows its generators, order and whether it
//! contains `-I`. The element set is materialized only when the group was
//! built by [`closure`]; full-preimage lifts to higher level carry their order
//! by formula and never enumerate elements, which is what lets orbit scans run
//! at level `7^3` and beyond.

use alloc::vec;
use alloc::vec::Vec;

use hashbrown::HashSet;

use crate::error::{Error, Result};
use crate::modmat::{
    check_same_prime, det_entries, gl2_order, inv_entries, mul_entries, valuation, Entries, GMat,
    Modulus,
};

/// Default element cap for closures and exhaustive enumerations.
pub const DEFAULT_CLOSURE_CAP: usize = 10_000_000;

#[derive(Clone, Debug)]
struct ElementSet {
    // BFS order; gives deterministic iteration.
    list: Vec<Entries>,
    index: HashSet<Entries>,
}

/// A subgroup of `GL2(Z/NZ)` given by generators.
#[derive(Clone, Debug)]
pub struct MatrixGroup {
    level: Modulus,
    generators: Vec<GMat>,
    elements: Option<ElementSet>,
    order: u128,
    has_neg_id: bool,
}

/// Closes `gens` under multiplication with the default cap.
pub fn closure(gens: &[GMat], level: Modulus) -> Result<MatrixGroup> {
    closure_with_cap(gens, level, DEFAULT_CLOSURE_CAP)
}

/// Breadth-first closure. Fails with [`Error::ClosureTooLarge`] as soon as
/// more than `cap` elements have been found.
pub fn closure_with_cap(gens: &[GMat], level: Modulus, cap: usize) -> Result<MatrixGroup> {
    for g in gens {
        if g.level() != level {
            return Err(Error::LevelMismatch {
                left: level.n(),
                right: g.level().n(),
            });
        }
    }
    let id = GMat::identity(level).entries();
    let gen_entries: Vec<Entries> = gens
        .iter()
        .map(GMat::entries)
        .filter(|e| *e != id)
        .collect();

    let mut list = vec![id];
    let mut index = HashSet::new();
    index.insert(id);
    let mut head = 0;
    while head < list.len() {
        let x = list[head];
        head += 1;
        for g in &gen_entries {
            let y = mul_entries(&level, &x, g);
            if index.insert(y) {
                if index.len() > cap {
                    return Err(Error::ClosureTooLarge { cap });
                }
                list.push(y);
            }
        }
    }
    let has_neg_id = index.contains(&GMat::neg_identity(level).entries());
    Ok(MatrixGroup {
        level,
        generators: gens.to_vec(),
        order: list.len() as u128,
        elements: Some(ElementSet { list, index }),
        has_neg_id,
    })
}

/// Generators whose closure at `target` is the full preimage of `g` under
/// reduction: lifts of `g`'s generators plus `I + l^m E_ij` for the four
/// matrix units, `m = g.level().k()`. For `l = 2, m = 1` the matrices
/// `I + 4 E_ij` are added as well.
pub fn full_preimage_gens(g: &MatrixGroup, target: Modulus) -> Result<Vec<GMat>> {
    check_same_prime(g.level, target)?;
    let m = g.level.k();
    if target.k() < m {
        return Err(Error::InvalidTargetLevel {
            from: m,
            to: target.k(),
        });
    }
    let mut out = g
        .generators
        .iter()
        .map(|x| x.lift_to(target))
        .collect::<Result<Vec<_>>>()?;
    let mut layers = vec![];
    if target.k() > m {
        layers.push(m);
    }
    // Over Z/2^k the four generators at 2^1 only reach determinants in <3>,
    // which misses 5 once k >= 3; the layer at 2^2 fills the gap.
    if target.ell() == 2 && m == 1 && target.k() >= 3 {
        layers.push(2);
    }
    for e in layers {
        let step = target.ell_pow(e) as i64;
        for [a, b, c, d] in [
            [step, 0, 0, 0],
            [0, step, 0, 0],
            [0, 0, step, 0],
            [0, 0, 0, step],
        ] {
            out.push(GMat::new(target, [1 + a, b, c, 1 + d])?);
        }
    }
    Ok(out)
}

/// Every element of `GL2(Z/NZ)` in lexicographic order of entries.
pub fn gl2_elements(level: Modulus) -> impl Iterator<Item = GMat> {
    let n = level.n();
    (0..n).flat_map(move |a| {
        (0..n).flat_map(move |b| {
            (0..n).flat_map(move |c| {
                (0..n).filter_map(move |d| {
                    let e = [a, b, c, d];
                    level
                        .is_unit(det_entries(&level, &e))
                        .then(|| GMat::from_entries_unchecked(level, e))
                })
            })
        })
    })
}

impl MatrixGroup {
    /// The full group `GL2(Z/NZ)`, without enumerating it.
    pub fn full(level: Modulus) -> Result<MatrixGroup> {
        let gens = crate::catalog::builtin("full", level.ell(), level.k())?.generators;
        Ok(MatrixGroup {
            level,
            generators: gens,
            elements: None,
            order: gl2_order(level),
            has_neg_id: true,
        })
    }

    pub fn level(&self) -> Modulus {
        self.level
    }

    pub fn generators(&self) -> &[GMat] {
        &self.generators
    }

    pub fn order(&self) -> u128 {
        self.order
    }

    pub fn has_neg_id(&self) -> bool {
        self.has_neg_id
    }

    /// Whether the element set has been materialized.
    pub fn is_enumerated(&self) -> bool {
        self.elements.is_some()
    }

    /// Elements in BFS order, if materialized.
    pub fn elements(&self) -> Option<impl Iterator<Item = GMat> + '_> {
        self.elements.as_ref().map(|set| {
            set.list
                .iter()
                .map(move |e| GMat::from_entries_unchecked(self.level, *e))
        })
    }

    /// Membership test; `None` when the element set is not materialized.
    pub fn contains(&self, x: &GMat) -> Option<bool> {
        let set = self.elements.as_ref()?;
        Some(x.level() == self.level && set.index.contains(&x.entries()))
    }

    /// Same generators, element set materialized.
    pub fn enumerate(&self, cap: usize) -> Result<MatrixGroup> {
        if self.is_enumerated() {
            return Ok(self.clone());
        }
        closure_with_cap(&self.generators, self.level, cap)
    }

    /// Image under entrywise reduction to `target`.
    pub fn reduce(&self, target: Modulus) -> Result<MatrixGroup> {
        self.reduce_with_cap(target, DEFAULT_CLOSURE_CAP)
    }

    pub fn reduce_with_cap(&self, target: Modulus, cap: usize) -> Result<MatrixGroup> {
        check_same_prime(self.level, target)?;
        if target.k() > self.level.k() {
            return Err(Error::InvalidTargetLevel {
                from: self.level.k(),
                to: target.k(),
            });
        }
        let gens = self
            .generators
            .iter()
            .map(|x| x.reduce_to(target))
            .collect::<Result<Vec<_>>>()?;
        closure_with_cap(&gens, target, cap)
    }

    /// The full preimage of `self` at `target`, with order known by formula.
    pub fn lift(&self, target: Modulus) -> Result<MatrixGroup> {
        let generators = full_preimage_gens(self, target)?;
        if target.k() == self.level.k() {
            return Ok(self.clone());
        }
        let factor = (target.ell() as u128).pow(4 * (target.k() - self.level.k()));
        Ok(MatrixGroup {
            level: target,
            generators,
            elements: None,
            order: self.order * factor,
            has_neg_id: self.has_neg_id,
        })
    }

    /// Generators reduced or lifted so the group acts on `(Z/l^k)^2` at `target`.
    /// Lifting treats `self` as a full preimage at its own level.
    pub fn generators_at(&self, target: Modulus) -> Result<Vec<GMat>> {
        check_same_prime(self.level, target)?;
        if target.k() >= self.level.k() {
            full_preimage_gens(self, target)
        } else {
            self.generators
                .iter()
                .map(|x| x.reduce_to(target))
                .collect()
        }
    }

    /// Whether `|self| = |reduce(self, l^m)| * l^(4(k-m))`.
    pub fn is_full_preimage(&self, m: u32) -> Result<bool> {
        self.is_full_preimage_with_cap(m, DEFAULT_CLOSURE_CAP)
    }

    pub fn is_full_preimage_with_cap(&self, m: u32, cap: usize) -> Result<bool> {
        if m == 0 || m > self.level.k() {
            return Err(Error::InvalidTargetLevel {
                from: self.level.k(),
                to: m,
            });
        }
        let reduced = self.reduce_with_cap(self.level.with_exponent(m)?, cap)?;
        let factor = (self.level.ell() as u128).pow(4 * (self.level.k() - m));
        Ok(self.order == reduced.order * factor)
    }

    /// Smallest `m` with `self` the full preimage of its reduction mod `l^m`.
    pub fn level_exponent(&self) -> Result<u32> {
        for m in 1..=self.level.k() {
            if self.is_full_preimage(m)? {
                return Ok(m);
            }
        }
        Err(Error::Internal("group is not the full preimage of itself"))
    }

    /// `(index in GL2(Z/NZ), l-adic valuation of the index)`.
    ///
    /// The group is read as the reduction of a full `l`-adic preimage at its
    /// own level, so this index is also the `l`-adic index.
    pub fn index_and_d(&self) -> (u128, u32) {
        let index = gl2_order(self.level) / self.order;
        (index, valuation(index, self.level.ell()))
    }

    /// Whether some element of `self` is conjugate in `GL2(Z/NZ)` to `target`.
    pub fn element_conjugate_in(&self, target: &GMat) -> Result<bool> {
        self.element_conjugate_in_with_cap(target, DEFAULT_CLOSURE_CAP)
    }

    pub fn element_conjugate_in_with_cap(&self, target: &GMat, cap: usize) -> Result<bool> {
        if target.level() != self.level {
            return Err(Error::LevelMismatch {
                left: self.level.n(),
                right: target.level().n(),
            });
        }
        if self.generators.contains(target) {
            return Ok(true);
        }
        let enumerated;
        let group = if self.is_enumerated() {
            self
        } else {
            enumerated = self.enumerate(cap)?;
            &enumerated
        };
        let set = group
            .elements
            .as_ref()
            .ok_or(Error::Internal("missing elements"))?;

        // Conjugacy invariants; a group with no matching element cannot contain a conjugate.
        let (det, trace, order) = (target.det(), target.trace(), target.order());
        let candidates = set
            .list
            .iter()
            .map(|e| GMat::from_entries_unchecked(self.level, *e))
            .any(|h| h.det() == det && h.trace() == trace && h.order() == order);
        if !candidates {
            return Ok(false);
        }
        if gl2_order(self.level) > cap as u128 {
            return Err(Error::ClosureTooLarge { cap });
        }
        let t = target.entries();
        for u in gl2_elements(self.level) {
            let u = u.entries();
            let u_inv = inv_entries(&self.level, &u).ok_or(Error::Internal("non-invertible"))?;
            let h = mul_entries(&self.level, &mul_entries(&self.level, &u_inv, &t), &u);
            if set.index.contains(&h) {
                return Ok(true);
            }
        }
        Ok(false)
    }

    /// `<self, -I>`.
    pub fn adjoin_neg_id(&self) -> MatrixGroup {
        if self.has_neg_id {
            return self.clone();
        }
        let neg = GMat::neg_identity(self.level);
        let mut generators = self.generators.clone();
        generators.push(neg);
        // -I is central and outside the group, so the new group is G u -G.
        let elements = self.elements.as_ref().map(|set| {
            let negated: Vec<Entries> = set
                .list
                .iter()
                .map(|e| mul_entries(&self.level, e, &neg.entries()))
                .collect();
            let mut list = set.list.clone();
            list.extend_from_slice(&negated);
            let index = list.iter().copied().collect();
            ElementSet { list, index }
        });
        MatrixGroup {
            level: self.level,
            generators,
            elements,
            order: self.order * 2,
            has_neg_id: true,
        }
    }

    /// `u G u^-1`, enumerated if `self` is.
    pub fn conjugate_by(&self, u: &GMat) -> Result<MatrixGroup> {
        let generators = self
            .generators
            .iter()
            .map(|g| g.conjugate_by(u))
            .collect::<Result<Vec<_>>>()?;
        let u_inv = u.inv()?;
        let elements = self.elements.as_ref().map(|set| {
            let list: Vec<Entries> = set
                .list
                .iter()
                .map(|e| {
                    mul_entries(
                        &self.level,
                        &mul_entries(&self.level, &u.entries(), e),
                        &u_inv.entries(),
                    )
                })
                .collect();
            let index = list.iter().copied().collect();
            ElementSet { list, index }
        });
        Ok(MatrixGroup {
            level: self.level,
            generators,
            elements,
            order: self.order,
            has_neg_id: self.has_neg_id,
        })
    }

    /// Sorted element entries, for set comparisons.
    pub fn sorted_elements(&self) -> Option<Vec<Entries>> {
        self.elements.as_ref().map(|set| {
            let mut v = set.list.clone();
            v.sort_unstable();
            v
        })
    }
}
