//! Thick subcategories S_{J,F} inside tubes, intersections of semi-stable
//! subcategories, and the finite list of intersections that are not
//! semi-stable.

use std::collections::BTreeSet;

use serde::Serialize;
use serde_json::json;

use crate::error::{invariant, Error, Result};
use crate::quiver::{add, Class, DimVec, EulerContext};
use crate::regular::TubeModel;
use crate::stability::SSDescriptor;
use crate::tube::{self, ArcPos};

/// The part of a subcategory of Reg lying in one non-homogeneous tube: the
/// arcs perpendicular to every quasi-simple outside J, together with F.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TubeThick {
    pub tube: usize,
    pub rank: usize,
    pub j: BTreeSet<usize>,
    pub f: BTreeSet<ArcPos>,
}

fn quasi_simple(r: usize, b: usize) -> ArcPos {
    ArcPos::new(r, b, 1)
}

/// Arc lies in the right perpendicular of the quasi-simples outside J.
pub fn in_e_j(r: usize, j: &BTreeSet<usize>, x: ArcPos) -> bool {
    (0..r)
        .filter(|b| !j.contains(b))
        .all(|b| tube::hom(r, quasi_simple(r, b), x) == 0 && tube::ext(r, quasi_simple(r, b), x) == 0)
}

fn perpendicular_both(r: usize, x: ArcPos, y: ArcPos) -> bool {
    tube::hom(r, x, y) == 0 && tube::ext(r, x, y) == 0 && tube::hom(r, y, x) == 0 && tube::ext(r, y, x) == 0
}

impl TubeThick {
    pub fn full(tube: usize, rank: usize) -> Self {
        TubeThick { tube, rank, j: (0..rank).collect(), f: BTreeSet::new() }
    }

    pub fn contains(&self, x: ArcPos) -> bool {
        in_e_j(self.rank, &self.j, x) || self.f.contains(&x)
    }

    pub fn is_zero(&self) -> bool {
        self.j.is_empty() && self.f.is_empty()
    }

    /// (E_J, F) is an orthogonal pair and F is thick; checked against arcs
    /// of length at most 2r.
    pub fn is_valid(&self) -> bool {
        let r = self.rank;
        if self.f.iter().any(|x| x.len >= r || in_e_j(r, &self.j, *x)) {
            return false;
        }
        let e_j: Vec<ArcPos> = arcs_up_to(r, 2 * r).into_iter().filter(|x| in_e_j(r, &self.j, *x)).collect();
        if !self.f.iter().all(|&x| e_j.iter().all(|&y| perpendicular_both(r, x, y))) {
            return false;
        }
        tube::is_thick(r, &self.f)
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "tube": self.tube + 1,
            "rank": self.rank,
            "J": self.j.iter().collect::<Vec<_>>(),
            "F": self.f.iter().map(|a| [a.socle, a.len]).collect::<Vec<_>>(),
        })
    }
}

pub fn arcs_up_to(r: usize, max_len: usize) -> Vec<ArcPos> {
    let mut out = Vec::new();
    for len in 1..=max_len {
        for a in 0..r {
            out.push(ArcPos::new(r, a, len));
        }
    }
    out
}

/// Every valid (J, F) in a tube of rank r, J and F both ordered.
pub fn valid_pairs(tube_index: usize, r: usize) -> Vec<TubeThick> {
    let mut out = Vec::new();
    for mask in 0u32..(1 << r) {
        let j: BTreeSet<usize> = (0..r).filter(|&a| mask >> a & 1 == 1).collect();
        let e_j: Vec<ArcPos> = arcs_up_to(r, 2 * r).into_iter().filter(|x| in_e_j(r, &j, *x)).collect();
        let candidates: Vec<ArcPos> = arcs_up_to(r, r - 1)
            .into_iter()
            .filter(|x| !in_e_j(r, &j, *x) && e_j.iter().all(|&y| perpendicular_both(r, *x, y)))
            .collect();
        for fmask in 0u64..(1 << candidates.len()) {
            let f: BTreeSet<ArcPos> =
                (0..candidates.len()).filter(|&i| fmask >> i & 1 == 1).map(|i| candidates[i]).collect();
            if tube::is_thick(r, &f) {
                out.push(TubeThick { tube: tube_index, rank: r, j: j.clone(), f });
            }
        }
    }
    out.sort();
    out
}

pub fn tube_intersect(t1: &TubeThick, t2: &TubeThick) -> Result<TubeThick> {
    if t1.tube != t2.tube || t1.rank != t2.rank {
        return Err(Error::InvalidInput("tube parts from different tubes".into()));
    }
    let r = t1.rank;
    let k: BTreeSet<usize> = t1.j.intersection(&t2.j).copied().collect();
    let g: BTreeSet<ArcPos> = arcs_up_to(r, r - 1)
        .into_iter()
        .filter(|&x| t1.contains(x) && t2.contains(x) && !in_e_j(r, &k, x))
        .collect();
    if !t1.j.is_empty() && !t2.j.is_empty() {
        invariant!(
            g.iter().all(|x| x.len != r - 1),
            "intersection of tube parts with nonempty J meets the orbit below the singular-isotropics"
        );
    }
    Ok(TubeThick { tube: t1.tube, rank: r, j: k, f: g })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Subcategory {
    /// Perpendicular category of the generator, described by the relative
    /// simples of its thick closure; `within_regular` restricts to Reg.
    FinGen { relative_simples: Vec<DimVec>, within_regular: bool },
    /// Subcategory of Reg; homogeneous tubes are always full.
    Regular { tube_parts: Vec<TubeThick> },
}

impl Subcategory {
    pub fn to_json(&self) -> serde_json::Value {
        match self {
            Subcategory::FinGen { relative_simples, within_regular } => json!({
                "variant": "FinGen",
                "relative_simples": relative_simples,
                "within_regular": within_regular,
            }),
            Subcategory::Regular { tube_parts } => json!({
                "variant": "Regular",
                "tube_parts": tube_parts.iter().map(|t| t.to_json()).collect::<Vec<_>>(),
                "homogeneous": "full",
            }),
        }
    }
}

impl From<&SSDescriptor> for Subcategory {
    fn from(d: &SSDescriptor) -> Self {
        match d {
            SSDescriptor::FinGen { relative_simples, .. } => {
                Subcategory::FinGen { relative_simples: relative_simples.clone(), within_regular: false }
            }
            SSDescriptor::Regular { tube_parts } => Subcategory::Regular { tube_parts: tube_parts.clone() },
        }
    }
}

#[derive(Debug, Clone)]
pub struct IntersectionResult {
    pub descriptor: Subcategory,
    pub is_semistable: bool,
    pub witnesses: Option<(SSDescriptor, SSDescriptor)>,
}

impl IntersectionResult {
    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "descriptor": self.descriptor.to_json(),
            "is_semistable": self.is_semistable,
            "witnesses": self.witnesses.as_ref().map(|(a, b)| vec![a.to_json(), b.to_json()]),
        })
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct NonSemistableList {
    pub count: usize,
    #[serde(skip)]
    pub items: Vec<IntersectionResult>,
}

fn parts_semistable(parts: &[TubeThick]) -> bool {
    parts.iter().all(|t| !t.j.is_empty())
}

fn intersect_parts(a: &[TubeThick], b: &[TubeThick]) -> Result<Vec<TubeThick>> {
    invariant!(a.len() == b.len(), "descriptors with different tube counts");
    a.iter().zip(b).map(|(x, y)| tube_intersect(x, y)).collect()
}

impl EulerContext {
    /// Per-tube options with F avoiding the orbit below the singular-isotropics.
    fn tube_options(&self, t: &TubeModel) -> Vec<TubeThick> {
        valid_pairs(t.index, t.rank)
            .into_iter()
            .filter(|p| p.f.iter().all(|x| x.len != t.rank - 1))
            .collect()
    }

    /// Two tube parts with nonempty J whose intersection is `target`.
    fn split_witness(&self, t: &TubeModel, target: &TubeThick) -> Result<(TubeThick, TubeThick)> {
        if !target.j.is_empty() {
            return Ok((target.clone(), target.clone()));
        }
        let r = t.rank;
        // Follow the singular-isotropic route first: J = {a}, complement.
        for a in 0..r {
            let z = t.singular_isotropic(a);
            if !target.f.iter().all(|&x| perpendicular_both(r, x, z)) {
                continue;
            }
            let w1 = TubeThick { tube: t.index, rank: r, j: [a].into_iter().collect(), f: target.f.clone() };
            let w2 = TubeThick { tube: t.index, rank: r, j: (0..r).filter(|&b| b != a).collect(), f: BTreeSet::new() };
            if w1.is_valid() && w2.is_valid() && tube_intersect(&w1, &w2)? == *target {
                return Ok((w1, w2));
            }
        }
        let options: Vec<TubeThick> = valid_pairs(t.index, r).into_iter().filter(|p| !p.j.is_empty()).collect();
        for w1 in &options {
            for w2 in &options {
                if tube_intersect(w1, w2)? == *target {
                    return Ok((w1.clone(), w2.clone()));
                }
            }
        }
        Err(Error::Invariant(format!("no semi-stable witnesses for tube part {:?}", target)))
    }

    pub fn enumerate_nonss(&self) -> Result<NonSemistableList> {
        let s = self.regular_structure()?;
        let options: Vec<Vec<TubeThick>> = s.tubes.iter().map(|t| self.tube_options(t)).collect();
        let mut tuples: Vec<Vec<TubeThick>> = vec![vec![]];
        for opts in &options {
            let mut next = Vec::new();
            for prefix in &tuples {
                for o in opts {
                    let mut p = prefix.clone();
                    p.push(o.clone());
                    next.push(p);
                }
            }
            tuples = next;
        }
        let mut items = Vec::new();
        let mut seen: BTreeSet<Vec<TubeThick>> = BTreeSet::new();
        for parts in tuples {
            if parts_semistable(&parts) {
                continue;
            }
            invariant!(seen.insert(parts.clone()), "duplicate non-semi-stable subcategory");
            let mut w1 = Vec::new();
            let mut w2 = Vec::new();
            for (t, part) in s.tubes.iter().zip(&parts) {
                let (a, b) = self.split_witness(t, part)?;
                w1.push(a);
                w2.push(b);
            }
            invariant!(intersect_parts(&w1, &w2)? == parts, "witnesses do not intersect back");
            invariant!(
                intersect_parts(&parts, &s.tubes.iter().map(|t| TubeThick::full(t.index, t.rank)).collect::<Vec<_>>())?
                    == parts,
                "intersection with the full regular category changes a subcategory"
            );
            items.push(IntersectionResult {
                descriptor: Subcategory::Regular { tube_parts: parts },
                is_semistable: false,
                witnesses: Some((SSDescriptor::Regular { tube_parts: w1 }, SSDescriptor::Regular { tube_parts: w2 })),
            });
        }
        Ok(NonSemistableList { count: items.len(), items })
    }

    pub fn intersect_ss(&self, d1: &[i64], d2: &[i64]) -> Result<IntersectionResult> {
        self.require_tame()?;
        let desc1 = self.ss_descriptor(d1)?;
        let desc2 = self.ss_descriptor(d2)?;
        if self.class() == Class::Dynkin {
            let w = [self.generator_roots(d1)?, self.generator_roots(d2)?].concat();
            let simples = self.relative_simples_exact(&w)?;
            return Ok(IntersectionResult {
                descriptor: Subcategory::FinGen { relative_simples: simples, within_regular: false },
                is_semistable: true,
                witnesses: None,
            });
        }
        let delta = self.require_euclidean()?.clone();
        let regular1 = matches!(desc1, SSDescriptor::Regular { .. });
        let regular2 = matches!(desc2, SSDescriptor::Regular { .. });
        let in_h1 = self.in_h_delta(d1)?;
        let in_h2 = self.in_h_delta(d2)?;
        let s = self.regular_structure()?;
        let common_c = s
            .drop_choices
            .iter()
            .enumerate()
            .any(|(i, _)| s.c_cones[i].contains(d1) && s.c_cones[i].contains(d2));
        let regular_case = (regular1 && regular2)
            || (regular1 && in_h2)
            || (regular2 && in_h1)
            || (in_h1 && in_h2 && !common_c);
        if regular_case {
            let r1 = if regular1 { desc1.clone() } else { self.ss_descriptor(&add(d1, &delta))? };
            let r2 = if regular2 { desc2.clone() } else { self.ss_descriptor(&add(d2, &delta))? };
            let (SSDescriptor::Regular { tube_parts: p1 }, SSDescriptor::Regular { tube_parts: p2 }) = (&r1, &r2)
            else {
                return Err(Error::Invariant("boundary weight plus the null root is not regular".into()));
            };
            let parts = intersect_parts(p1, p2)?;
            let semistable = parts_semistable(&parts);
            return Ok(IntersectionResult {
                descriptor: Subcategory::Regular { tube_parts: parts },
                is_semistable: semistable,
                witnesses: if semistable { None } else { Some((r1, r2)) },
            });
        }
        let w = [self.generator_roots(d1)?, self.generator_roots(d2)?].concat();
        let simples = self.relative_simples_for(&w)?;
        Ok(IntersectionResult {
            descriptor: Subcategory::FinGen { relative_simples: simples, within_regular: regular1 || regular2 },
            is_semistable: true,
            witnesses: None,
        })
    }
}
