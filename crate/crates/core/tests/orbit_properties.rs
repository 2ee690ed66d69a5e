use proptest::prelude::*;
use std::collections::{BTreeMap, BTreeSet};

use torsion_scope_core::orbits::point_orbits;
use torsion_scope_core::{
    builtin, closed_point_degrees, closure, cyclic_subgroup_orbits, isogeny_character,
    torsion_classes, twisted_point_degree, GMat, MatrixGroup, Modulus,
};

fn m(ell: u32, k: u32) -> Modulus {
    Modulus::new(ell, k).unwrap()
}

fn gmat_at(level: Modulus) -> impl Strategy<Value = GMat> {
    let n = level.n() as i64;
    prop::array::uniform4(0..n)
        .prop_filter_map("unit determinant", move |e| GMat::new(level, e).ok())
}

fn group_at(levels: Vec<(u32, u32)>) -> impl Strategy<Value = MatrixGroup> {
    prop::sample::select(levels).prop_flat_map(|(l, k)| {
        let lv = m(l, k);
        prop::collection::vec(gmat_at(lv), 0..3).prop_map(move |gens| closure(&gens, lv).unwrap())
    })
}

fn pm_key(n: Modulus, v: [u32; 2]) -> [u32; 2] {
    let neg = [(n.n() - v[0]) % n.n(), (n.n() - v[1]) % n.n()];
    v.min(neg)
}

/// Orbit sizes by applying every element of `<G, -I>`; no generator BFS.
fn degrees_oracle(g: &MatrixGroup, n: Modulus) -> Vec<u64> {
    let full = g.adjoin_neg_id();
    let elems: Vec<GMat> = full.elements().unwrap().collect();
    let mut seen = BTreeSet::new();
    let mut out = vec![];
    for class in torsion_classes(n) {
        if seen.contains(&class.rep()) {
            continue;
        }
        let orbit: BTreeSet<[u32; 2]> = elems
            .iter()
            .map(|h| pm_key(n, h.apply(class.rep())))
            .collect();
        out.push(orbit.len() as u64);
        seen.extend(orbit);
    }
    out.sort_unstable();
    out
}

/// All cyclic subgroups of order `l^r` of `(Z/N)^2`, as element sets.
fn cyclic_subgroups_oracle(amb: Modulus, r: u32) -> BTreeSet<BTreeSet<[u32; 2]>> {
    let n = amb.n();
    let target = (amb.ell() as u64).pow(r);
    let mut out = BTreeSet::new();
    for a in 0..n {
        for b in 0..n {
            if amb.vector_order([a, b]) == target {
                let set = (0..target as u32)
                    .map(|j| [amb.mul(j, a), amb.mul(j, b)])
                    .collect::<BTreeSet<_>>();
                out.insert(set);
            }
        }
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn degrees_match_element_oracle(g in group_at(vec![(2, 2), (3, 1), (3, 2), (5, 1), (7, 1), (2, 3)])) {
        let n = g.level();
        let degrees = closed_point_degrees(&g, n).unwrap();
        prop_assert_eq!(&degrees, &degrees_oracle(&g, n));
        prop_assert_eq!(degrees.iter().sum::<u64>(), torsion_classes(n).len() as u64);
        let big = g.adjoin_neg_id().order();
        for d in &degrees {
            prop_assert_eq!(big % *d as u128, 0);
        }
    }

    #[test]
    fn degrees_invariant_under_conjugation_and_neg_id(
        (g, u) in prop::sample::select(vec![(3u32, 1u32), (5, 1), (2, 2), (3, 2)]).prop_flat_map(|(l, k)| {
            let lv = m(l, k);
            (prop::collection::vec(gmat_at(lv), 0..3).prop_map(move |gens| closure(&gens, lv).unwrap()), gmat_at(lv))
        })
    ) {
        let n = g.level();
        let base = closed_point_degrees(&g, n).unwrap();
        prop_assert_eq!(&base, &closed_point_degrees(&g.conjugate_by(&u).unwrap(), n).unwrap());
        prop_assert_eq!(&base, &closed_point_degrees(&g.adjoin_neg_id(), n).unwrap());
    }

    #[test]
    fn cyclic_orbits_partition_subgroups(
        (g, r) in prop::sample::select(vec![(2u32, 2u32, 1u32), (2, 3, 2), (3, 2, 1), (3, 2, 2), (5, 2, 1), (7, 2, 1), (3, 3, 2)])
            .prop_flat_map(|(l, k, r)| {
                let lv = m(l, k);
                (prop::collection::vec(gmat_at(lv), 0..3).prop_map(move |gens| closure(&gens, lv).unwrap()), Just(r))
            })
    ) {
        let amb = g.level();
        let orbits = cyclic_subgroup_orbits(&g, r).unwrap();
        let oracle = cyclic_subgroups_oracle(amb, r);
        let ell = amb.ell() as u64;
        prop_assert_eq!(oracle.len() as u64, ell.pow(r - 1) * (ell + 1));
        prop_assert_eq!(orbits.iter().map(|o| o.size()).sum::<u64>(), oracle.len() as u64);

        let as_set = |gen: [u32; 2]| -> BTreeSet<[u32; 2]> {
            (0..ell.pow(r) as u32).map(|j| [amb.mul(j, gen[0]), amb.mul(j, gen[1])]).collect()
        };
        let elems: Vec<GMat> = g.elements().unwrap().collect();
        let mut covered = BTreeSet::new();
        for orbit in &orbits {
            let start = as_set(orbit.representative().gen());
            let image: BTreeSet<BTreeSet<[u32; 2]>> = elems
                .iter()
                .map(|h| start.iter().map(|v| h.apply(*v)).collect())
                .collect();
            let members: BTreeSet<BTreeSet<[u32; 2]>> =
                orbit.members.iter().map(|c| as_set(c.gen())).collect();
            prop_assert_eq!(&image, &members);
            covered.extend(members);
        }
        prop_assert_eq!(covered, oracle);
    }

    #[test]
    fn character_is_closed_and_twist_divides(
        (g, r) in prop::sample::select(vec![(3u32, 2u32, 1u32), (3, 2, 2), (5, 2, 2), (7, 1, 1), (2, 3, 3), (2, 2, 2)])
            .prop_flat_map(|(l, k, r)| {
                let lv = m(l, k);
                (prop::collection::vec(gmat_at(lv), 0..3).prop_map(move |gens| closure(&gens, lv).unwrap()), Just(r))
            })
    ) {
        for orbit in cyclic_subgroup_orbits(&g, r).unwrap() {
            if orbit.size() != 1 {
                continue;
            }
            let ch = isogeny_character(&g, orbit.representative()).unwrap();
            let md = ch.modulus();
            let vals: BTreeSet<u32> = ch.values().iter().copied().collect();
            prop_assert!(vals.contains(&(1 % md.n())));
            for a in &vals {
                for b in &vals {
                    prop_assert!(vals.contains(&md.mul(*a, *b)));
                }
            }
            // Oracle: the character read off every element of the group.
            let gen = orbit.representative().line();
            let direct: BTreeSet<u32> = g
                .elements()
                .unwrap()
                .map(|h| {
                    let h = h.reduce_to(md).unwrap();
                    let w = h.apply(gen);
                    (1..md.n()).find(|&a| [md.mul(a, gen[0]), md.mul(a, gen[1])] == w).unwrap()
                })
                .collect();
            prop_assert_eq!(&vals, &direct);
            if md.n() >= 3 {
                let t = twisted_point_degree(&ch).unwrap();
                let phi = md.unit_count();
                prop_assert_eq!(phi % t, 0);
                if vals.contains(&(md.n() - 1)) {
                    prop_assert_eq!((phi / 2) % t, 0);
                }
            }
        }
    }
}

#[test]
fn point_orbit_representatives_are_minimal() {
    let g = closure(&builtin("borel", 5, 1).unwrap().generators, m(5, 1)).unwrap();
    let orbits = point_orbits(&g, m(5, 1)).unwrap();
    let mut by_rep = BTreeMap::new();
    for (class, size) in &orbits {
        by_rep.insert(class.rep(), *size);
    }
    assert_eq!(by_rep.values().sum::<u64>(), 12);
    assert_eq!(by_rep.get(&[0, 1]), Some(&10));
    assert_eq!(by_rep.get(&[1, 0]), Some(&2));
}
