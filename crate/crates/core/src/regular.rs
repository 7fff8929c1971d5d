//! Regular combinatorics of a Euclidean quiver: tubes, arcs, the regular
//! cone with its facets, and the linear dependencies among quasi-simples.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Serialize;

use crate::cone::RationalCone;
use crate::error::{invariant, Error, Result};
use crate::linalg::{self, Rationals};
use crate::quiver::{add, box_iter, fmt_vec, DimVec, EulerContext};
use crate::tube::{self, ArcPos};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TubeModel {
    pub index: usize,
    pub rank: usize,
    /// quasi_simples[j + 1] = C quasi_simples[j], indices mod rank.
    pub quasi_simples: Vec<DimVec>,
}

impl TubeModel {
    pub fn arc_dim(&self, arc: ArcPos) -> DimVec {
        let n = self.quasi_simples[0].len();
        arc.factors(self.rank)
            .into_iter()
            .fold(vec![0; n], |acc, j| add(&acc, &self.quasi_simples[j]))
    }

    pub fn singular_isotropic(&self, socle: usize) -> ArcPos {
        ArcPos::new(self.rank, socle, self.rank)
    }

    pub fn orbit_ot(&self) -> Vec<ArcPos> {
        (0..self.rank).map(|a| ArcPos::new(self.rank, a, self.rank - 1)).collect()
    }

    /// All arcs of length at most rank - 1, by (length, socle).
    pub fn exceptional_arcs(&self) -> Vec<ArcPos> {
        let mut out = Vec::new();
        for len in 1..self.rank {
            for a in 0..self.rank {
                out.push(ArcPos::new(self.rank, a, len));
            }
        }
        out
    }

    pub fn arcs_up_to(&self, max_len: usize) -> Vec<ArcPos> {
        let mut out = Vec::new();
        for len in 1..=max_len {
            for a in 0..self.rank {
                out.push(ArcPos::new(self.rank, a, len));
            }
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct RegArc {
    pub tube: usize,
    pub socle: usize,
    pub len: usize,
}

impl RegArc {
    pub fn pos(&self) -> ArcPos {
        ArcPos { socle: self.socle, len: self.len }
    }
}

#[derive(Debug)]
pub struct RegularStructure {
    pub tubes: Vec<TubeModel>,
    /// One drop index per tube; the Kronecker-like case has the single empty tuple.
    pub drop_choices: Vec<Vec<usize>>,
    pub h_cone: RationalCone,
    pub f_cones: Vec<RationalCone>,
    pub c_cones: Vec<RationalCone>,
    pub dependencies: Vec<Vec<BigInt>>,
}

impl RegularStructure {
    pub fn quasi_simples(&self) -> Vec<DimVec> {
        self.tubes.iter().flat_map(|t| t.quasi_simples.iter().cloned()).collect()
    }

    pub fn choice_index(&self, drops: &[usize]) -> Result<usize> {
        self.drop_choices
            .iter()
            .position(|c| c.as_slice() == drops)
            .ok_or_else(|| Error::InvalidInput(format!("no facet index {drops:?}")))
    }
}

fn cartesian(ranks: &[usize]) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for &r in ranks {
        let mut next = Vec::new();
        for prefix in &out {
            for a in 0..r {
                let mut p = prefix.clone();
                p.push(a);
                next.push(p);
            }
        }
        out = next;
    }
    out
}

impl EulerContext {
    pub fn compute_tubes(&self) -> Result<Vec<TubeModel>> {
        let delta = self.require_euclidean()?.clone();
        let n = self.n();
        let candidates: BTreeSet<DimVec> = box_iter(&delta)
            .filter(|d| d.iter().any(|&x| x != 0) && *d != delta)
            .filter(|d| self.euler_unchecked(d, d) == 1 && self.euler_unchecked(&delta, d) == 0)
            .collect();
        let mut seen: BTreeSet<DimVec> = BTreeSet::new();
        let mut tubes = Vec::new();
        for start in &candidates {
            if seen.contains(start) {
                continue;
            }
            let mut orbit = vec![start.clone()];
            loop {
                let next = self.coxeter_apply(orbit.last().expect("nonempty"))?;
                if &next == start {
                    break;
                }
                invariant!(
                    candidates.contains(&next),
                    "Coxeter image {} leaves the regular roots below the null root",
                    fmt_vec(&next)
                );
                orbit.push(next);
            }
            seen.extend(orbit.iter().cloned());
            let sum = orbit.iter().fold(vec![0; n], |a, b| add(&a, b));
            if sum == delta {
                tubes.push(TubeModel { index: 0, rank: orbit.len(), quasi_simples: orbit });
            }
        }
        // lowest-dimensional quasi-simple first; among equals the larger
        // vector, so a tube holding e_i precedes one holding e_j for i < j
        let key = |t: &TubeModel| {
            t.quasi_simples
                .iter()
                .map(|q| (q.iter().sum::<i64>(), std::cmp::Reverse(q.clone())))
                .min()
                .expect("nonempty orbit")
        };
        tubes.sort_by_key(key);
        for (i, t) in tubes.iter_mut().enumerate() {
            t.index = i;
            invariant!(t.rank >= 2, "tube of rank {} among the non-homogeneous ones", t.rank);
        }
        let big_n = tubes.len() as i64;
        let rank_excess: i64 = tubes.iter().map(|t| t.rank as i64 - 1).sum();
        let qs: i64 = tubes.iter().map(|t| t.rank as i64).sum();
        invariant!(rank_excess == n as i64 - 2, "sum of (rank - 1) is {rank_excess}, expected {}", n - 2);
        invariant!(qs == n as i64 - 2 + big_n, "{qs} quasi-simples, expected {}", n as i64 - 2 + big_n);
        Ok(tubes)
    }

    pub fn regular_structure(&self) -> Result<Arc<RegularStructure>> {
        if let Some(s) = self.regular.get() {
            return Ok(s.clone());
        }
        let built = Arc::new(self.build_regular()?);
        Ok(self.regular.get_or_init(|| built).clone())
    }

    fn build_regular(&self) -> Result<RegularStructure> {
        let delta = self.require_euclidean()?.clone();
        let n = self.n();
        let tubes = self.compute_tubes()?;
        let ranks: Vec<usize> = tubes.iter().map(|t| t.rank).collect();
        let drop_choices = cartesian(&ranks);
        let all_qs: Vec<DimVec> = tubes.iter().flat_map(|t| t.quasi_simples.clone()).collect();
        let mut h_gens = all_qs.clone();
        h_gens.push(delta.clone());
        let h_cone = RationalCone::new(n, h_gens);
        let mut f_cones = Vec::new();
        let mut c_cones = Vec::new();
        for choice in &drop_choices {
            let gens = facet_generators(&tubes, choice);
            let mut cg = gens.clone();
            cg.push(delta.clone());
            f_cones.push(RationalCone::new(n, gens));
            c_cones.push(RationalCone::new(n, cg));
        }
        let dependencies = if all_qs.is_empty() {
            vec![]
        } else {
            let cols: Vec<Vec<BigRational>> =
                (0..n).map(|i| all_qs.iter().map(|q| linalg::q_int(q[i])).collect()).collect();
            linalg::nullspace(&Rationals, &cols, all_qs.len())
                .iter()
                .map(|v| linalg::primitive_integer(v))
                .collect()
        };
        let s = RegularStructure { tubes, drop_choices, h_cone, f_cones, c_cones, dependencies };
        self.check_regular_structure(&s)?;
        Ok(s)
    }

    fn check_regular_structure(&self, s: &RegularStructure) -> Result<()> {
        let big_n = s.tubes.len();
        for t in &s.tubes {
            for j in 0..t.rank {
                let next = self.coxeter_apply(&t.quasi_simples[j])?;
                invariant!(next == t.quasi_simples[(j + 1) % t.rank], "tube orientation is not the Coxeter order");
            }
            for arc in t.exceptional_arcs() {
                let d = t.arc_dim(arc);
                invariant!(
                    s.h_cone.on_boundary(&d),
                    "regular real Schur root {} is not on the boundary of the regular cone",
                    fmt_vec(&d)
                );
            }
        }
        // Facets of the regular cone are exactly the F_I.
        let qs_count: usize = s.tubes.iter().map(|t| t.rank).sum();
        let mut offsets = Vec::new();
        let mut acc = 0;
        for t in &s.tubes {
            offsets.push(acc);
            acc += t.rank;
        }
        let expected: BTreeSet<BTreeSet<usize>> = s
            .drop_choices
            .iter()
            .map(|choice| {
                (0..qs_count)
                    .filter(|&g| {
                        let t = offsets.iter().rposition(|&o| o <= g).expect("tube");
                        g - offsets[t] != choice[t]
                    })
                    .collect()
            })
            .collect();
        let actual: BTreeSet<BTreeSet<usize>> = s.h_cone.facet_generator_sets().into_iter().collect();
        invariant!(
            actual == expected && s.h_cone.facets().len() == s.drop_choices.len(),
            "boundary facets of the regular cone differ from the drop-one-per-tube sets"
        );
        // Simplicial join: every choice of proper subsets is a face whose
        // generators are independent and cut out exactly themselves.
        let facet_sets = s.h_cone.facet_generator_sets();
        let subset_choices = cartesian(&s.tubes.iter().map(|t| (1usize << t.rank) - 1).collect::<Vec<_>>());
        for masks in subset_choices {
            let mut face: BTreeSet<usize> = BTreeSet::new();
            for (t, &m) in masks.iter().enumerate() {
                for j in 0..s.tubes[t].rank {
                    if m >> j & 1 == 1 {
                        face.insert(offsets[t] + j);
                    }
                }
            }
            let gens: Vec<Vec<BigRational>> =
                face.iter().map(|&g| linalg::q_vec(&s.h_cone.generators()[g])).collect();
            if !gens.is_empty() {
                invariant!(
                    linalg::rank(&Rationals, &gens, self.n()) == gens.len(),
                    "boundary face generators are dependent"
                );
            }
            let mut cut: BTreeSet<usize> = (0..=qs_count).collect();
            for fs in facet_sets.iter().filter(|fs| face.is_subset(fs)) {
                cut = cut.intersection(fs).copied().collect();
            }
            invariant!(cut == face, "boundary face lattice is not the expected join");
        }
        let expected_dep = if big_n == 0 { 0 } else { big_n - 1 };
        invariant!(
            s.dependencies.len() == expected_dep,
            "dependency space has dimension {}, expected {}",
            s.dependencies.len(),
            expected_dep
        );
        // Each dependency is constant on tubes with total weight zero.
        for dep in &s.dependencies {
            let mut total = BigInt::from(0);
            for (t, tube) in s.tubes.iter().enumerate() {
                let c = &dep[offsets[t]];
                invariant!(
                    (0..tube.rank).all(|j| &dep[offsets[t] + j] == c),
                    "dependency is not a combination of tube sums"
                );
                total += c;
            }
            invariant!(total == BigInt::from(0), "dependency does not balance tube sums");
        }
        Ok(())
    }

    pub fn tube_hom(&self, x: RegArc, y: RegArc) -> Result<usize> {
        let s = self.regular_structure()?;
        let r = self.tube_rank(&s, x)?;
        self.tube_rank(&s, y)?;
        Ok(if x.tube != y.tube { 0 } else { tube::hom(r, x.pos(), y.pos()) })
    }

    pub fn tube_ext(&self, x: RegArc, y: RegArc) -> Result<usize> {
        let s = self.regular_structure()?;
        let r = self.tube_rank(&s, x)?;
        self.tube_rank(&s, y)?;
        Ok(if x.tube != y.tube { 0 } else { tube::ext(r, x.pos(), y.pos()) })
    }

    fn tube_rank(&self, s: &RegularStructure, x: RegArc) -> Result<usize> {
        let t = s
            .tubes
            .get(x.tube)
            .ok_or_else(|| Error::InvalidInput(format!("no tube {}", x.tube + 1)))?;
        if x.socle >= t.rank || x.len == 0 {
            return Err(Error::InvalidInput(format!("invalid arc {x:?}")));
        }
        Ok(t.rank)
    }

    pub fn arc_dim(&self, x: RegArc) -> Result<DimVec> {
        let s = self.regular_structure()?;
        self.tube_rank(&s, x)?;
        Ok(s.tubes[x.tube].arc_dim(x.pos()))
    }

    /// The exceptional regular arc with dimension vector d.
    pub fn root_to_arc(&self, d: &[i64]) -> Result<RegArc> {
        let s = self.regular_structure()?;
        self.check_len(d)?;
        for t in &s.tubes {
            for arc in t.exceptional_arcs() {
                if t.arc_dim(arc) == d {
                    return Ok(RegArc { tube: t.index, socle: arc.socle, len: arc.len });
                }
            }
        }
        Err(Error::InvalidInput(format!("{} is not a regular exceptional root", fmt_vec(d))))
    }

    pub fn orbit_ot(&self, tube: usize) -> Result<Vec<RegArc>> {
        let s = self.regular_structure()?;
        let t = s
            .tubes
            .get(tube)
            .ok_or_else(|| Error::InvalidInput(format!("no tube {}", tube + 1)))?;
        Ok(t.orbit_ot()
            .into_iter()
            .map(|a| RegArc { tube, socle: a.socle, len: a.len })
            .collect())
    }

    pub fn in_c_i(&self, d: &[i64], drops: &[usize]) -> Result<bool> {
        self.check_len(d)?;
        let s = self.regular_structure()?;
        let i = s.choice_index(drops)?;
        let inside = s.c_cones[i].contains(d);
        invariant!(inside == s.c_cones[i].contains_by_solve(d), "cone membership methods disagree");
        Ok(inside)
    }

    pub fn in_h_delta(&self, d: &[i64]) -> Result<bool> {
        self.check_len(d)?;
        Ok(self.regular_structure()?.h_cone.contains(d))
    }

    pub fn quasi_simple_dependencies(&self) -> Result<Vec<Vec<BigInt>>> {
        Ok(self.regular_structure()?.dependencies.clone())
    }

    /// Tube membership of each regular exceptional root, for reports.
    pub fn regular_exceptional_roots(&self) -> Result<BTreeMap<DimVec, RegArc>> {
        let s = self.regular_structure()?;
        let mut out = BTreeMap::new();
        for t in &s.tubes {
            for arc in t.exceptional_arcs() {
                out.insert(t.arc_dim(arc), RegArc { tube: t.index, socle: arc.socle, len: arc.len });
            }
        }
        Ok(out)
    }
}

fn facet_generators(tubes: &[TubeModel], choice: &[usize]) -> Vec<DimVec> {
    tubes
        .iter()
        .zip(choice)
        .flat_map(|(t, &drop)| {
            t.quasi_simples
                .iter()
                .enumerate()
                .filter(move |(j, _)| *j != drop)
                .map(|(_, q)| q.clone())
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quiver::Quiver;

    fn ctx(name: &str) -> EulerContext {
        EulerContext::build(Quiver::named(name).unwrap()).unwrap()
    }

    #[test]
    fn square_tubes() {
        let c = ctx("sq");
        let tubes = c.compute_tubes().unwrap();
        assert_eq!(tubes.len(), 2);
        assert_eq!(tubes[0].quasi_simples, vec![vec![0, 1, 0, 0], vec![1, 0, 1, 1]]);
        assert_eq!(tubes[1].quasi_simples, vec![vec![0, 0, 1, 0], vec![1, 1, 0, 1]]);
        let s = c.regular_structure().unwrap();
        assert_eq!(s.drop_choices.len(), 4);
        assert_eq!(s.h_cone.facets().len(), 4);
        assert!(!c.in_h_delta(&[1, 0, 0, 1]).unwrap());
        assert_eq!(s.dependencies.len(), 1);
        let a = c.root_to_arc(&[0, 1, 0, 0]).unwrap();
        assert_eq!((a.tube, a.len), (0, 1));
        assert_eq!(c.root_to_arc(&[1, 0, 1, 1]).unwrap().tube, 0);
        assert!(c.root_to_arc(&[1, 1, 1, 1]).is_err());
    }

    #[test]
    fn kronecker_has_no_tubes() {
        let c = ctx("kronecker");
        let s = c.regular_structure().unwrap();
        assert!(s.tubes.is_empty());
        assert_eq!(s.drop_choices, vec![Vec::<usize>::new()]);
        assert!(s.f_cones[0].generators().is_empty());
        assert!(c.in_c_i(&[3, 3], &[]).unwrap());
        assert!(!c.in_c_i(&[2, 1], &[]).unwrap());
        assert!(s.dependencies.is_empty());
    }

    #[test]
    fn d4_tilde_tubes() {
        let c = ctx("d4tilde");
        let tubes = c.compute_tubes().unwrap();
        assert_eq!(tubes.iter().map(|t| t.rank).collect::<Vec<_>>(), vec![2, 2, 2]);
        assert_eq!(c.quasi_simple_dependencies().unwrap().len(), 2);
    }

    #[test]
    fn membership_in_c_i() {
        let c = ctx("sq");
        let s = c.regular_structure().unwrap();
        // Drop (1,1,0,1) from the first tube and (1,0,1,1) from the second.
        let drops = vec![1, 1];
        let i = s.choice_index(&drops).unwrap();
        assert!(s.f_cones[i].generators().contains(&vec![0, 1, 0, 0]));
        assert!(c.in_c_i(&[1, 2, 2, 1], &drops).unwrap());
        assert!(!c.in_c_i(&[2, 1, 1, 2], &drops).unwrap());
        for choice in &s.drop_choices {
            assert!(c.in_c_i(&[1, 1, 1, 1], choice).unwrap());
        }
    }

    #[test]
    fn orbit_below_singular_isotropics() {
        let c = ctx("sq");
        assert_eq!(c.orbit_ot(0).unwrap().len(), 2);
        let c3 = ctx("a3tilde31");
        let t = c3.compute_tubes().unwrap();
        assert_eq!(t.len(), 1);
        assert_eq!(t[0].rank, 3);
        assert!(c3.orbit_ot(0).unwrap().iter().all(|a| a.len == 2));
    }

    #[test]
    fn tube_values_match_generic_values() {
        for name in ["sq", "d4tilde", "a2tilde21", "a3tilde31"] {
            let c = ctx(name);
            let s = c.regular_structure().unwrap();
            for t in &s.tubes {
                for x in t.exceptional_arcs() {
                    for y in t.exceptional_arcs() {
                        let (dx, dy) = (t.arc_dim(x), t.arc_dim(y));
                        assert_eq!(tube::hom(t.rank, x, y) as i64, c.hom_generic(&dx, &dy).unwrap(), "{name} {x:?} {y:?}");
                        assert_eq!(tube::ext(t.rank, x, y) as i64, c.ext_generic(&dx, &dy).unwrap(), "{name} {x:?} {y:?}");
                    }
                }
            }
        }
    }
}
