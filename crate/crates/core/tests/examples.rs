//! Worked examples across the modules, each value fixed by a hand
//! computation or by the sampled-module oracle.

use std::collections::BTreeSet;

use tamestab::candecomp::SummandKind;
use tamestab::intersections::{tube_intersect, valid_pairs, Subcategory, TubeThick};
use tamestab::oracle::{self, OracleConfig, SampleBank};
use tamestab::quiver::scale;
use tamestab::stability::SSDescriptor;
use tamestab::{DimVec, EulerContext, Quiver};

fn ctx(name: &str) -> EulerContext {
    EulerContext::build(Quiver::named(name).unwrap()).unwrap()
}

fn set(v: &[&[i64]]) -> BTreeSet<DimVec> {
    v.iter().map(|x| x.to_vec()).collect()
}

#[test]
fn generic_hom_and_ext() {
    let a2 = ctx("a2");
    assert_eq!(a2.ext_generic(&[1, 0], &[0, 1]).unwrap(), 1);
    assert_eq!(a2.ext_generic(&[0, 1], &[1, 1]).unwrap(), 0);
    assert_eq!(a2.ext_generic(&[1, 1], &[0, 0]).unwrap(), 0);
    assert_eq!(a2.hom_generic(&[0, 1], &[1, 1]).unwrap(), 1);
    assert_eq!(a2.hom_generic(&[1, 1], &[0, 1]).unwrap(), 0);
    assert_eq!(ctx("kronecker").hom_generic(&[1, 1], &[1, 1]).unwrap(), 0);
    assert!(a2.ext_generic(&[-1, 0], &[0, 1]).is_err());
}

#[test]
fn generic_subrepresentations() {
    let a2 = ctx("a2");
    let subs: BTreeSet<DimVec> = a2.generic_subs(&[1, 1]).unwrap().into_iter().collect();
    assert_eq!(subs, set(&[&[0, 0], &[0, 1], &[1, 1]]));
    assert_eq!(a2.generic_subs(&[0, 0]).unwrap(), vec![vec![0, 0]]);
    let k: BTreeSet<DimVec> = ctx("kronecker").generic_subs(&[1, 1]).unwrap().into_iter().collect();
    assert_eq!(k, set(&[&[0, 0], &[0, 1], &[1, 1]]));
}

#[test]
fn schur_roots() {
    let k = ctx("kronecker");
    assert!(k.is_schur_root(&[2, 1]).unwrap());
    assert!(!k.is_schur_root(&[2, 2]).unwrap());
    let sq = ctx("sq");
    assert!(sq.is_schur_root(&[0, 1, 0, 0]).unwrap());
    assert!(sq.is_schur_root(&[1, 1, 1, 1]).unwrap());
    assert_eq!(ctx("a2").enumerate_real_schur_roots(&[2, 2]).unwrap(), vec![vec![0, 1], vec![1, 0], vec![1, 1]]);
    assert_eq!(
        k.enumerate_real_schur_roots(&[2, 2]).unwrap(),
        vec![vec![0, 1], vec![1, 0], vec![1, 1], vec![1, 2], vec![2, 1]]
    );
    assert!(k.enumerate_real_schur_roots(&[0, 0]).unwrap().is_empty());
}

fn summary(c: &EulerContext, d: &[i64]) -> Vec<(DimVec, i64)> {
    c.canonical_decomposition(d).unwrap().summands.iter().map(|s| (s.root.clone(), s.mult)).collect()
}

#[test]
fn decompositions_and_presentations() {
    assert_eq!(summary(&ctx("a2"), &[1, 2]), vec![(vec![0, 1], 1), (vec![1, 1], 1)]);
    let k = ctx("kronecker");
    assert_eq!(summary(&k, &[3, 1]), vec![(vec![1, 0], 1), (vec![2, 1], 1)]);
    assert_eq!(summary(&k, &[2, 2]), vec![(vec![1, 1], 2)]);
    assert_eq!(k.canonical_decomposition(&[2, 2]).unwrap().summands[0].kind, SummandKind::IsotropicDelta);
    assert_eq!(summary(&ctx("sq"), &[1, 0, 0, 1]), vec![(vec![0, 0, 0, 1], 1), (vec![1, 0, 0, 0], 1)]);
    for name in ["a2", "a3", "kronecker", "sq", "d4tilde"] {
        let c = ctx(name);
        for i in 0..c.n() {
            let neg = scale(c.projective(i), -1);
            let p = c.canonical_presentation(&neg).unwrap();
            assert_eq!(p.summands.len(), 1, "{name} {i}");
            assert_eq!((p.summands[0].root.clone(), p.summands[0].mult), (neg.clone(), 1));
            assert_eq!(p.summands[0].kind, SummandKind::NegProjective);
        }
    }
}

#[test]
fn semistable_regions() {
    let a2 = ctx("a2");
    for a in -3..=3 {
        for b in -3..=3 {
            assert_eq!(a2.hss_contains(&[1, 1], &[a, b]).unwrap(), b == 0 && a >= 0, "({a},{b})");
            assert_eq!(a2.hss_contains(&[1, 0], &[a, b]).unwrap(), a == 0, "({a},{b})");
        }
    }
    assert!(ctx("sq").hss_contains(&[0, 1, 0, 0], &[1, 1, 5, 0]).unwrap());
    assert!(a2.hss_contains(&[1, 2], &[0, 0]).is_err());
}

#[test]
fn cones_through_the_null_root() {
    let sq = ctx("sq");
    let s = sq.regular_structure().unwrap();
    // drop (1,0,1,1) from the first tube and (1,1,0,1) from the second
    let drops = vec![1, 1];
    assert_eq!(s.tubes[0].quasi_simples[1], vec![1, 0, 1, 1]);
    assert_eq!(s.tubes[1].quasi_simples[1], vec![1, 1, 0, 1]);
    assert!(sq.in_c_i(&[1, 2, 2, 1], &drops).unwrap());
    assert!(!sq.in_c_i(&[2, 1, 1, 2], &drops).unwrap());
    for i in &s.drop_choices {
        assert!(sq.in_c_i(&[1, 1, 1, 1], i).unwrap());
    }
}

#[test]
fn descriptors() {
    let sq = ctx("sq");
    for name in ["sq", "kronecker", "d4tilde", "a2tilde21"] {
        let c = ctx(name);
        let delta = c.delta().unwrap().clone();
        match c.ss_descriptor(&delta).unwrap() {
            SSDescriptor::Regular { tube_parts } => {
                assert!(tube_parts.iter().all(|p| p.j.len() == p.rank && p.f.is_empty()), "{name}")
            }
            other => panic!("{name}: {other:?}"),
        }
    }
    assert_eq!(
        ctx("kronecker").ss_descriptor(&[1, 2]).unwrap(),
        SSDescriptor::FinGen { relative_simples: vec![vec![1, 2]], exact: false }
    );
    assert_eq!(
        ctx("a2").ss_descriptor(&[0, 0]).unwrap(),
        SSDescriptor::FinGen { relative_simples: vec![], exact: true }
    );
    assert_eq!(sq.ss_descriptor(&[1, 2, 1, 1]).unwrap().variant(), "Regular");
}

#[test]
fn profiles() {
    let k = ctx("kronecker");
    let roots = k.exceptional_roots(&[3, 3]).unwrap();
    let p = k.hyp_profile(&[1, 1], &roots).unwrap();
    assert!(p.cones.iter().any(|(i, member)| i.is_empty() && *member));
    assert!(p.hits.is_empty());
    let a2 = ctx("a2");
    let roots = a2.exceptional_roots(&[2, 2]).unwrap();
    assert_eq!(a2.hyp_profile(&[1, 0], &roots).unwrap().hits, vec![vec![1, 1]]);
    assert_eq!(a2.hyp_profile(&[0, 0], &roots).unwrap().hits.len(), roots.len());
}

#[test]
fn tube_calculus() {
    let zero_one = TubeThick { tube: 0, rank: 2, j: [0].into_iter().collect(), f: BTreeSet::new() };
    let one = TubeThick { tube: 0, rank: 2, j: [1].into_iter().collect(), f: BTreeSet::new() };
    let meet = tube_intersect(&zero_one, &one).unwrap();
    assert!(meet.j.is_empty() && meet.f.is_empty() && meet.is_zero());
    for r in 2..=3 {
        for t in valid_pairs(0, r) {
            assert_eq!(tube_intersect(&t, &t).unwrap(), t);
            assert_eq!(tube_intersect(&TubeThick::full(0, r), &t).unwrap(), t);
        }
    }
}

#[test]
fn intersections_of_semistable_subcategories() {
    let a2 = ctx("a2");
    let res = a2.intersect_ss(&[1, 0], &[2, 1]).unwrap();
    assert!(res.is_semistable);
    assert!(matches!(res.descriptor, Subcategory::FinGen { .. }));
    for name in ["sq", "kronecker", "a2"] {
        let c = ctx(name);
        for d in [vec![1; c.n()], {
            let mut e = vec![0; c.n()];
            e[0] = 1;
            e
        }] {
            let res = c.intersect_ss(&d, &d).unwrap();
            assert!(res.is_semistable, "{name} {d:?}");
            assert_eq!(res.descriptor, Subcategory::from(&c.ss_descriptor(&d).unwrap()), "{name} {d:?}");
        }
    }
    assert_eq!(ctx("kronecker").enumerate_nonss().unwrap().count, 0);
}

#[test]
fn sampled_modules() {
    let cfg = OracleConfig::default();
    let f = cfg.field();
    let a2 = ctx("a2");
    let mut bank = SampleBank::new(&a2, cfg.clone());
    assert_eq!(bank.summands(&[1, 2], 0).unwrap(), vec![vec![0, 1], vec![1, 1]]);
    assert_eq!(bank.hom(&[0, 1], &[1, 1]).unwrap(), 1);
    assert_eq!(bank.ext(&[1, 0], &[0, 1], 1).unwrap(), 1);
    for name in ["a2", "sq", "kronecker"] {
        let c = ctx(name);
        for i in 0..c.n() {
            let mut e = vec![0; c.n()];
            e[i] = 1;
            let m = oracle::sample_generic(&c, &e, &cfg, 3).unwrap();
            assert_eq!(oracle::module_hom_dim(&f, &m, &m), 1);
        }
    }
    let k = ctx("kronecker");
    let m = oracle::sample_generic(&k, &[1, 1], &cfg, 0).unwrap();
    assert_eq!(oracle::module_hom_dim(&f, &m, &m), 1);
    let mut kb = SampleBank::new(&k, cfg.clone());
    assert_eq!(kb.summands(&[2, 2], 0).unwrap(), vec![vec![1, 1], vec![1, 1]]);
}

#[test]
fn decompositions_do_not_depend_on_the_seed() {
    for name in ["a2", "a3", "kronecker", "sq"] {
        let c = ctx(name);
        let n = c.n();
        for d in tamestab::cli::grid(n, if n <= 3 { 2 } else { 1 }) {
            let runs: BTreeSet<Vec<DimVec>> = (0..3)
                .map(|seed| {
                    let cfg = OracleConfig { seed, ..OracleConfig::default() };
                    SampleBank::new(&c, cfg).summands(&d, 0).unwrap()
                })
                .collect();
            assert_eq!(runs.len(), 1, "{name} {d:?}");
        }
    }
}

#[test]
fn relative_simples() {
    let cfg = OracleConfig::default();
    let a2 = ctx("a2");
    assert_eq!(
        oracle::relative_simples(&a2, &[vec![1, 1], vec![0, 1]], &cfg).unwrap(),
        vec![vec![0, 1], vec![1, 0]]
    );
    assert_eq!(
        oracle::relative_simples(&a2, &[vec![0, 1], vec![1, 1]], &OracleConfig { seed: 9, ..cfg.clone() }).unwrap(),
        vec![vec![0, 1], vec![1, 0]]
    );
    let k = ctx("kronecker");
    assert_eq!(oracle::relative_simples(&k, &[vec![1, 2]], &cfg).unwrap(), vec![vec![1, 2]]);
    let sq = ctx("sq");
    for alpha in sq.exceptional_roots(&[2, 2, 2, 2]).unwrap() {
        assert_eq!(oracle::relative_simples(&sq, &[alpha.clone()], &cfg).unwrap(), vec![alpha]);
    }
}

#[test]
fn closure_matches_exact_simples_on_dynkin_quivers() {
    let cfg = OracleConfig::default();
    let quivers = [
        ("a2", Quiver::named("a2").unwrap()),
        ("a3", Quiver::named("a3").unwrap()),
        ("a4 zigzag", Quiver::new(4, vec![(0, 1), (2, 1), (2, 3)]).unwrap()),
        ("d4", Quiver::new(4, vec![(0, 3), (1, 3), (3, 2)]).unwrap()),
    ];
    for (name, q) in quivers {
        let c = EulerContext::build(q).unwrap();
        let roots = c.dynkin_positive_roots().unwrap();
        let orthogonal = |a: &DimVec, b: &DimVec| {
            c.ext_generic(a, b).unwrap() == 0 && c.ext_generic(b, a).unwrap() == 0
        };
        let mut families: Vec<Vec<DimVec>> = Vec::new();
        for (i, a) in roots.iter().enumerate() {
            families.push(vec![a.clone()]);
            for (j, b) in roots.iter().enumerate().skip(i + 1) {
                if !orthogonal(a, b) {
                    continue;
                }
                families.push(vec![a.clone(), b.clone()]);
                for c3 in roots.iter().skip(j + 1) {
                    if orthogonal(a, c3) && orthogonal(b, c3) {
                        families.push(vec![a.clone(), b.clone(), c3.clone()]);
                    }
                }
            }
        }
        for fam in &families {
            assert_eq!(
                oracle::relative_simples(&c, fam, &cfg).unwrap(),
                c.relative_simples_exact(fam).unwrap(),
                "{name} {fam:?}"
            );
        }
    }
}
