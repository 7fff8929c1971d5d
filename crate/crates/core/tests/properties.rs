//! Invariants as properties over random inputs.

use std::collections::{BTreeSet, VecDeque};

use proptest::prelude::*;

use tamestab::intersections::{tube_intersect, valid_pairs, TubeThick};
use tamestab::quiver::{add, box_iter, is_nonneg, scale};
use tamestab::{Class, DimVec, EulerContext, Quiver};

fn ctx(name: &str) -> EulerContext {
    EulerContext::build(Quiver::named(name).unwrap()).unwrap()
}

const TAME: [&str; 8] = ["a2", "a3", "kronecker", "sq", "sq-alt", "d4tilde", "a2tilde21", "a3tilde31"];

fn tame_and_vec(max: i64, allow_negative: bool) -> impl Strategy<Value = (&'static str, DimVec)> {
    prop::sample::select(TAME.to_vec()).prop_flat_map(move |name| {
        let n = Quiver::named(name).unwrap().n();
        let lo = if allow_negative { -max } else { 0 };
        (Just(name), prop::collection::vec(lo..=max, n))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn hom_minus_ext_is_euler((name, a) in tame_and_vec(3, false), seed in 0u64..1000) {
        let c = ctx(name);
        let b: DimVec = a.iter().enumerate().map(|(i, x)| (x + seed as i64 + i as i64) % 4).collect();
        let hom = c.hom_generic(&a, &b).unwrap();
        let ext = c.ext_generic(&a, &b).unwrap();
        prop_assert!(hom >= 0 && ext >= 0);
        prop_assert_eq!(hom - ext, c.euler_form(&a, &b).unwrap());
    }

    #[test]
    fn canonical_decomposition_is_compatible((name, d) in tame_and_vec(4, false)) {
        let c = ctx(name);
        let cd = c.canonical_decomposition(&d).unwrap();
        let total = cd.summands.iter().fold(vec![0; d.len()], |acc, s| add(&acc, &scale(&s.root, s.mult)));
        prop_assert_eq!(total, d.clone());
        for s in &cd.summands {
            prop_assert!(c.is_schur_root(&s.root).unwrap());
            prop_assert!(s.mult > 0);
        }
        for s in &cd.summands {
            for t in &cd.summands {
                if s.root != t.root || c.quadratic_form(&s.root).unwrap() == 1 {
                    prop_assert_eq!(c.ext_generic(&s.root, &t.root).unwrap(), 0);
                }
            }
        }
    }

    #[test]
    fn canonical_presentation_sums_back((name, d) in tame_and_vec(5, true), m in 1i64..4) {
        let c = ctx(name);
        let p = c.canonical_presentation(&d).unwrap();
        prop_assert_eq!(p.total(d.len()), d.clone());
        prop_assert_eq!(add(&p.d_plus, &p.d_minus), d.clone());
        prop_assert!(is_nonneg(&p.d_plus));
        prop_assert!(c.cp_equivalent(&d, &scale(&d, m)).unwrap());
        prop_assert_eq!(c.verify_fan_point(&d).unwrap().cones_containing, 1);
    }

    #[test]
    fn semistable_regions_are_cones((name, d1) in tame_and_vec(3, true), d2 in prop::collection::vec(-3i64..=3, 5)) {
        let c = ctx(name);
        let n = c.n();
        let d2: DimVec = d2[..n].to_vec();
        let roots = c.exceptional_roots(&vec![2; n]).unwrap();
        for alpha in &roots {
            let h1 = c.hss_contains(alpha, &d1).unwrap();
            let h2 = c.hss_contains(alpha, &d2).unwrap();
            if h1 {
                prop_assert_eq!(c.euler_form(&d1, alpha).unwrap(), 0);
                prop_assert!(c.hss_contains(alpha, &scale(&d1, 3)).unwrap());
            }
            if h1 && h2 {
                prop_assert!(c.hss_contains(alpha, &add(&d1, &d2)).unwrap());
            }
        }
    }

    #[test]
    fn regular_cone_membership_agrees_with_solving(d in prop::collection::vec(-3i64..=4, 4)) {
        let c = ctx("sq");
        let s = c.regular_structure().unwrap();
        prop_assert_eq!(s.h_cone.contains(&d), s.h_cone.contains_by_solve(&d));
        for cone in &s.c_cones {
            prop_assert_eq!(cone.contains(&d), cone.contains_by_solve(&d));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn ss_equal_implies_equal_profiles((name, d1) in tame_and_vec(2, true), k in 1i64..3) {
        let c = ctx(name);
        let n = c.n();
        let roots = c.exceptional_roots(&vec![2; n]).unwrap();
        let d2 = scale(&d1, k);
        if c.ss_equivalent(&d1, &d2, 8).unwrap().is_equal() {
            prop_assert_eq!(c.hyp_profile(&d1, &roots).unwrap(), c.hyp_profile(&d2, &roots).unwrap());
        }
    }

    #[test]
    fn descriptor_variant_follows_null_root((name, d) in tame_and_vec(3, false)) {
        let c = ctx(name);
        let s = c.canonical_presentation(&d).unwrap().delta_mult();
        let desc = c.ss_descriptor(&d).unwrap();
        prop_assert_eq!(desc.variant(), if s > 0 { "Regular" } else { "FinGen" });
    }
}

fn tube_values(r: usize) -> Vec<TubeThick> {
    valid_pairs(0, r)
}

proptest! {
    #[test]
    fn tube_intersection_laws(r in 2usize..=3, i in any::<prop::sample::Index>(), j in any::<prop::sample::Index>(), k in any::<prop::sample::Index>()) {
        let vals = tube_values(r);
        let (a, b, c) = (i.get(&vals), j.get(&vals), k.get(&vals));
        let ab = tube_intersect(a, b).unwrap();
        prop_assert_eq!(&ab, &tube_intersect(b, a).unwrap());
        prop_assert_eq!(&tube_intersect(a, a).unwrap(), a);
        prop_assert_eq!(tube_intersect(&ab, c).unwrap(), tube_intersect(a, &tube_intersect(b, c).unwrap()).unwrap());
        prop_assert_eq!(&tube_intersect(&TubeThick::full(0, r), a).unwrap(), a);
        if !a.j.is_empty() && !b.j.is_empty() {
            prop_assert!(ab.f.iter().all(|x| x.len != r - 1));
        }
    }
}

/// Positive real roots by simple reflections, independent of the library.
fn reflection_roots(c: &EulerContext, max_l1: i64) -> BTreeSet<DimVec> {
    let n = c.n();
    let e = c.euler_matrix();
    let sym = |x: &[i64], i: usize| -> i64 { (0..n).map(|k| x[k] * (e[k][i] + e[i][k])).sum() };
    let mut seen = BTreeSet::new();
    let mut queue = VecDeque::new();
    for i in 0..n {
        let mut u = vec![0; n];
        u[i] = 1;
        seen.insert(u.clone());
        queue.push_back(u);
    }
    while let Some(x) = queue.pop_front() {
        for i in 0..n {
            let mut y = x.clone();
            y[i] -= sym(&x, i);
            if y.iter().all(|&v| v >= 0) && y.iter().sum::<i64>() <= max_l1 && seen.insert(y.clone()) {
                queue.push_back(y);
            }
        }
    }
    seen
}

#[test]
fn real_roots_match_reflection_orbits() {
    for name in ["a2", "a3", "kronecker", "sq", "d4tilde", "a2tilde21", "a3tilde31"] {
        let c = ctx(name);
        let n = c.n();
        let bound: DimVec = match c.delta() {
            Some(d) => scale(d, 2),
            None => vec![3; n],
        };
        let l1: i64 = bound.iter().sum();
        // reflections can leave the box on the way, so search a larger ball
        let orbit: BTreeSet<DimVec> =
            reflection_roots(&c, 3 * l1).into_iter().filter(|r| r.iter().zip(&bound).all(|(a, b)| a <= b)).collect();
        let tested: BTreeSet<DimVec> = box_iter(&bound)
            .filter(|d| d.iter().any(|&x| x != 0))
            .filter(|d| c.is_real_root(d).unwrap())
            .collect();
        assert_eq!(tested, orbit, "{name}");
        if c.class() == Class::Dynkin {
            let all: BTreeSet<DimVec> = c.dynkin_positive_roots().unwrap().into_iter().collect();
            assert_eq!(all, reflection_roots(&c, 100), "{name}");
        }
    }
}

/// Class of the underlying graph from the ADE and extended-ADE lists.
fn graph_class(n: usize, arrows: &[(usize, usize)]) -> Class {
    let mut mult = vec![vec![0usize; n]; n];
    for &(s, t) in arrows {
        mult[s][t] += 1;
        mult[t][s] += 1;
    }
    if mult.iter().flatten().any(|&m| m >= 3) {
        return Class::Wild;
    }
    if mult.iter().flatten().any(|&m| m == 2) {
        return if n == 2 && arrows.len() == 2 { Class::Euclidean } else { Class::Wild };
    }
    let deg: Vec<usize> = (0..n).map(|i| mult[i].iter().sum()).collect();
    let edges = arrows.len();
    if edges == n {
        return if deg.iter().all(|&d| d == 2) { Class::Euclidean } else { Class::Wild };
    }
    if edges > n {
        return Class::Wild;
    }
    let branch: Vec<usize> = (0..n).filter(|&i| deg[i] >= 3).collect();
    if branch.is_empty() {
        return Class::Dynkin;
    }
    if deg.iter().any(|&d| d >= 5) {
        return Class::Wild;
    }
    if let Some(&v) = branch.iter().find(|&&v| deg[v] == 4) {
        return if n == 5 && branch.len() == 1 && (0..n).all(|i| i == v || deg[i] == 1) {
            Class::Euclidean
        } else {
            Class::Wild
        };
    }
    let arm = |center: usize, start: usize| -> usize {
        let (mut prev, mut cur, mut len) = (center, start, 1);
        while deg[cur] == 2 {
            let next = (0..n).find(|&k| mult[cur][k] > 0 && k != prev).unwrap();
            prev = cur;
            cur = next;
            len += 1;
        }
        len
    };
    match branch.len() {
        1 => {
            let v = branch[0];
            let mut arms: Vec<usize> = (0..n).filter(|&k| mult[v][k] > 0).map(|k| arm(v, k)).collect();
            arms.sort();
            let (p, q, r) = (arms[0] as i64 + 1, arms[1] as i64 + 1, arms[2] as i64 + 1);
            let lhs = q * r + p * r + p * q;
            let rhs = p * q * r;
            if lhs > rhs {
                Class::Dynkin
            } else if lhs == rhs {
                Class::Euclidean
            } else {
                Class::Wild
            }
        }
        2 => {
            let leafy = |v: usize| (0..n).filter(|&k| mult[v][k] > 0 && deg[k] == 1).count() >= 2;
            if branch.iter().all(|&v| leafy(v)) {
                Class::Euclidean
            } else {
                Class::Wild
            }
        }
        _ => Class::Wild,
    }
}

fn connected(n: usize, arrows: &[(usize, usize)]) -> bool {
    let mut seen = vec![false; n];
    let mut stack = vec![0];
    seen[0] = true;
    while let Some(v) = stack.pop() {
        for &(s, t) in arrows {
            for (a, b) in [(s, t), (t, s)] {
                if a == v && !seen[b] {
                    seen[b] = true;
                    stack.push(b);
                }
            }
        }
    }
    seen.iter().all(|&x| x)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(400))]

    #[test]
    fn class_matches_diagram_lists(
        n in 2usize..=9,
        raw in prop::collection::vec((0usize..9, 0usize..9, any::<bool>()), 1..11),
    ) {
        let arrows: Vec<(usize, usize)> = raw
            .into_iter()
            .map(|(a, b, flip)| (a % n, b % n, flip))
            .filter(|(a, b, _)| a != b)
            .map(|(a, b, flip)| {
                let (lo, hi) = (a.min(b), a.max(b));
                if flip { (hi, lo) } else { (lo, hi) }
            })
            .collect();
        // per-edge orientation may still close a directed cycle
        prop_assume!(connected(n, &arrows));
        let Ok(q) = Quiver::new(n, arrows.clone()) else { return Ok(()) };
        let c = EulerContext::build(q).unwrap();
        prop_assert_eq!(c.class(), graph_class(n, &arrows), "{:?}", arrows);
    }
}

#[test]
fn builtin_classes() {
    for (name, class) in [
        ("a2", Class::Dynkin),
        ("a3", Class::Dynkin),
        ("kronecker", Class::Euclidean),
        ("sq", Class::Euclidean),
        ("d4tilde", Class::Euclidean),
        ("e6tilde", Class::Euclidean),
    ] {
        let c = ctx(name);
        assert_eq!(c.class(), class, "{name}");
        assert_eq!(graph_class(c.n(), c.quiver().arrows()), class, "{name}");
    }
}
