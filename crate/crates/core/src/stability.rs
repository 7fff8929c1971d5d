//! King semi-stability, the regions H_α^ss, semi-stable subcategory
//! descriptors and ss-equivalence of weights.

use std::collections::BTreeSet;

use serde_json::json;

use crate::cone::RationalCone;
use crate::error::{invariant, Error, Result};
use crate::intersections::TubeThick;
use crate::quiver::{fmt_vec, is_nonneg, Class, DimVec, EulerContext};
use crate::tube::{self, ArcPos};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SSDescriptor {
    /// rep(Q)_d = W^⊥, stored as the relative simples of the thick closure
    /// of W. `exact` is false when the simples came from sampled modules.
    FinGen { relative_simples: Vec<DimVec>, exact: bool },
    /// Subcategory of Reg: one part per non-homogeneous tube, homogeneous
    /// tubes full.
    Regular { tube_parts: Vec<TubeThick> },
}

impl SSDescriptor {
    pub fn variant(&self) -> &'static str {
        match self {
            SSDescriptor::FinGen { .. } => "FinGen",
            SSDescriptor::Regular { .. } => "Regular",
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        match self {
            SSDescriptor::FinGen { relative_simples, exact } => json!({
                "variant": "FinGen",
                "relative_simples": relative_simples,
                "method": if *exact { "exact" } else { "closure" },
            }),
            SSDescriptor::Regular { tube_parts } => json!({
                "variant": "Regular",
                "tube_parts": tube_parts.iter().map(|t| t.to_json()).collect::<Vec<_>>(),
                "homogeneous": "full",
            }),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Witness {
    Root { beta: DimVec, in_first: bool, in_second: bool },
    Cone { drops: Vec<usize>, in_first: bool, in_second: bool },
}

impl Witness {
    pub fn to_json(&self) -> serde_json::Value {
        match self {
            Witness::Root { beta, in_first, in_second } => {
                json!({"kind": "root", "beta": beta, "in_d1": in_first, "in_d2": in_second})
            }
            Witness::Cone { drops, in_first, in_second } => {
                json!({"kind": "cone", "drops": drops, "in_d1": in_first, "in_d2": in_second})
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Equal,
    EqualModuloCertificates,
    Different { witness: Option<Witness> },
}

impl Verdict {
    pub fn to_json(&self) -> serde_json::Value {
        match self {
            Verdict::Equal => json!({"verdict": "equal"}),
            Verdict::EqualModuloCertificates => json!({"verdict": "equal_modulo_certificates"}),
            Verdict::Different { witness } => json!({
                "verdict": "different",
                "witness": witness.as_ref().map(|w| w.to_json()),
            }),
        }
    }

    pub fn is_equal(&self) -> bool {
        !matches!(self, Verdict::Different { .. })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HypProfile {
    /// (drop indices, membership) for every C_I; empty for Dynkin.
    pub cones: Vec<(Vec<usize>, bool)>,
    pub hits: Vec<DimVec>,
}

impl HypProfile {
    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "cones": self.cones.iter().map(|(i, b)| json!({"drops": i, "member": b})).collect::<Vec<_>>(),
            "hits": self.hits,
        })
    }
}

impl EulerContext {
    pub fn hss_contains(&self, alpha: &[i64], d: &[i64]) -> Result<bool> {
        self.check_len(d)?;
        if !self.is_real_root(alpha)? || !self.is_schur_root(alpha)? {
            return Err(Error::InvalidInput(format!("{} is not a real Schur root", fmt_vec(alpha))));
        }
        Ok(self.hss_unchecked(alpha, d))
    }

    pub(crate) fn hss_unchecked(&self, alpha: &[i64], d: &[i64]) -> bool {
        if self.euler_unchecked(d, alpha) != 0 {
            return false;
        }
        self.quotients(alpha).iter().all(|y| {
            let sub = crate::quiver::sub(alpha, y);
            self.euler_unchecked(d, &sub) <= 0
        })
    }

    /// Real Schur roots used to cross-validate descriptors: every positive
    /// root for Dynkin, those below 2δ (δ for more than five vertices) for
    /// Euclidean.
    pub fn scan_roots(&self) -> Result<&[DimVec]> {
        if let Some(v) = self.scan_roots.get() {
            return Ok(v);
        }
        let roots = match self.class() {
            Class::Dynkin => self.dynkin_positive_roots()?,
            _ => {
                let delta = self.require_euclidean()?.clone();
                let bound: DimVec = if self.n() <= 5 { delta.iter().map(|x| 2 * x).collect() } else { delta };
                self.exceptional_roots(&bound)?
            }
        };
        Ok(self.scan_roots.get_or_init(|| roots))
    }

    /// Real Schur summands of d_plus plus the projectives of the negative part.
    pub fn generator_roots(&self, d: &[i64]) -> Result<Vec<DimVec>> {
        let pres = self.canonical_presentation(d)?;
        let mut w: BTreeSet<DimVec> = pres.real_schur().into_iter().map(|(r, _)| r).collect();
        for (j, _) in pres.neg_projectives(self) {
            w.insert(self.projective(j).clone());
        }
        Ok(w.into_iter().collect())
    }

    fn right_perp(&self, w: &[DimVec], beta: &[i64]) -> bool {
        w.iter().all(|x| self.ext_unchecked(x, beta) == 0 && self.euler_unchecked(x, beta) == 0)
    }

    /// Dynkin: the roots of ^⊥(W^⊥) span a simplicial cone whose extreme
    /// rays are the relative simples.
    pub fn relative_simples_exact(&self, w: &[DimVec]) -> Result<Vec<DimVec>> {
        if self.class() != Class::Dynkin {
            return Err(Error::Unsupported("exact relative simples need a Dynkin quiver".into()));
        }
        let roots = self.dynkin_positive_roots()?;
        let perp: Vec<&DimVec> = roots.iter().filter(|b| self.right_perp(w, b)).collect();
        let closure: Vec<DimVec> = roots
            .iter()
            .filter(|g| perp.iter().all(|b| self.ext_unchecked(g, b) == 0 && self.euler_unchecked(g, b) == 0))
            .cloned()
            .collect();
        let mut simples: Vec<DimVec> = extreme_rays(self.n(), &closure);
        simples.sort();
        let total_rank = if simples.is_empty() {
            0
        } else {
            crate::linalg::rank(
                &crate::linalg::Rationals,
                &simples.iter().map(|s| crate::linalg::q_vec(s)).collect(),
                self.n(),
            )
        };
        invariant!(total_rank == simples.len(), "relative simples are linearly dependent");
        for a in &simples {
            for b in &simples {
                if a != b {
                    invariant!(
                        self.hom_generic(a, b)? == 0,
                        "relative simples {} and {} are not hom-orthogonal",
                        fmt_vec(a),
                        fmt_vec(b)
                    );
                }
            }
        }
        Ok(simples)
    }

    /// Relative simples of the thick closure of W: exact for Dynkin, by the
    /// sampled-module closure otherwise.
    pub fn relative_simples_for(&self, w: &[DimVec]) -> Result<Vec<DimVec>> {
        let mut key = w.to_vec();
        key.sort();
        key.dedup();
        if let Some(v) = self.simples_memo.read().expect("memo lock").get(&key) {
            return Ok(v.clone());
        }
        let simples = if self.class() == Class::Dynkin {
            self.relative_simples_exact(&key)?
        } else {
            let cfg = self.oracle_config().clone();
            crate::oracle::relative_simples(self, &key, &cfg)?
        };
        self.simples_memo.write().expect("memo lock").insert(key, simples.clone());
        Ok(simples)
    }

    fn regular_descriptor(&self, w: &[DimVec]) -> Result<SSDescriptor> {
        let s = self.regular_structure()?;
        let mut arcs = Vec::new();
        for x in w {
            invariant!(
                self.defect(x)? == 0,
                "non-regular summand {} next to the null root",
                fmt_vec(x)
            );
            arcs.push(self.root_to_arc(x)?);
        }
        let mut parts = Vec::new();
        for t in &s.tubes {
            let r = t.rank;
            let v: Vec<ArcPos> = arcs.iter().filter(|a| a.tube == t.index).map(|a| a.pos()).collect();
            let perp = |x: ArcPos| v.iter().all(|&y| tube::hom(r, y, x) == 0 && tube::ext(r, y, x) == 0);
            let j: BTreeSet<usize> = (0..r).filter(|&a| perp(t.singular_isotropic(a))).collect();
            let mut part = TubeThick { tube: t.index, rank: r, j, f: BTreeSet::new() };
            part.f = t.exceptional_arcs().into_iter().filter(|&x| perp(x) && !part.contains(x)).collect();
            for x in crate::intersections::arcs_up_to(r, 2 * r) {
                invariant!(part.contains(x) == perp(x), "tube part disagrees with the perpendicular at {:?}", x);
            }
            invariant!(!part.j.is_empty(), "semi-stable tube part with empty J");
            invariant!(part.is_valid(), "tube part is not a valid orthogonal pair");
            parts.push(part);
        }
        Ok(SSDescriptor::Regular { tube_parts: parts })
    }

    pub fn ss_descriptor(&self, d: &[i64]) -> Result<SSDescriptor> {
        self.require_tame()?;
        self.check_len(d)?;
        if let Some(v) = self.descriptor_memo.read().expect("memo lock").get(d) {
            return Ok(v.clone());
        }
        let pres = self.canonical_presentation(d)?;
        let w = self.generator_roots(d)?;
        let regular = pres.delta_mult() > 0;
        let desc = if regular {
            invariant!(pres.neg_projectives(self).is_empty(), "null root next to a negative projective");
            self.regular_descriptor(&w)?
        } else {
            SSDescriptor::FinGen {
                relative_simples: self.relative_simples_for(&w)?,
                exact: self.class() == Class::Dynkin,
            }
        };
        self.cross_validate(d, &w, &desc)?;
        self.descriptor_memo.write().expect("memo lock").insert(d.to_vec(), desc.clone());
        Ok(desc)
    }

    /// Whether the exceptional module of dimension beta lies in the
    /// subcategory a descriptor describes.
    pub fn descriptor_contains(&self, desc: &SSDescriptor, beta: &[i64]) -> Result<bool> {
        Ok(match desc {
            SSDescriptor::FinGen { relative_simples, .. } => self.right_perp(relative_simples, beta),
            SSDescriptor::Regular { tube_parts } => {
                if self.defect(beta)? != 0 {
                    false
                } else {
                    let a = self.root_to_arc(beta)?;
                    tube_parts[a.tube].contains(a.pos())
                }
            }
        })
    }

    fn cross_validate(&self, d: &[i64], w: &[DimVec], desc: &SSDescriptor) -> Result<()> {
        let regular = matches!(desc, SSDescriptor::Regular { .. });
        for beta in self.scan_roots()? {
            let mut expected = self.right_perp(w, beta);
            if regular {
                expected &= self.defect(beta)? == 0;
            }
            invariant!(
                self.hss_unchecked(beta, d) == expected,
                "King test and perpendicular disagree for {} at weight {}",
                fmt_vec(beta),
                fmt_vec(d)
            );
            invariant!(
                self.descriptor_contains(desc, beta)? == expected,
                "descriptor membership disagrees with the perpendicular for {} at weight {}",
                fmt_vec(beta),
                fmt_vec(d)
            );
        }
        Ok(())
    }

    pub fn hyp_profile(&self, d: &[i64], roots: &[DimVec]) -> Result<HypProfile> {
        self.require_tame()?;
        self.check_len(d)?;
        let mut cones = Vec::new();
        if self.class() == Class::Euclidean {
            let s = self.regular_structure()?;
            for (i, drops) in s.drop_choices.iter().enumerate() {
                cones.push((drops.clone(), s.c_cones[i].contains(d)));
            }
        }
        let mut hits = Vec::new();
        for a in roots {
            if self.hss_contains(a, d)? {
                hits.push(a.clone());
            }
        }
        Ok(HypProfile { cones, hits })
    }

    pub fn ss_equivalent(&self, d1: &[i64], d2: &[i64], witness_l1: i64) -> Result<Verdict> {
        if self.cp_equivalent(d1, d2)? {
            return Ok(Verdict::Equal);
        }
        let a = self.ss_descriptor(d1)?;
        let b = self.ss_descriptor(d2)?;
        let same = match (&a, &b) {
            (SSDescriptor::Regular { tube_parts: p }, SSDescriptor::Regular { tube_parts: q }) => p == q,
            (
                SSDescriptor::FinGen { relative_simples: p, exact: e1 },
                SSDescriptor::FinGen { relative_simples: q, exact: e2 },
            ) => {
                if p == q {
                    return Ok(if *e1 && *e2 { Verdict::Equal } else { Verdict::EqualModuloCertificates });
                }
                false
            }
            _ => false,
        };
        if same {
            return Ok(Verdict::Equal);
        }
        Ok(Verdict::Different { witness: self.find_witness(d1, d2, witness_l1)? })
    }

    /// First C_I membership mismatch, then the first root in (sum, lex)
    /// order whose H_α^ss membership differs, searching sums up to `max_l1`.
    pub fn find_witness(&self, d1: &[i64], d2: &[i64], max_l1: i64) -> Result<Option<Witness>> {
        if self.class() == Class::Euclidean {
            let s = self.regular_structure()?;
            for (i, drops) in s.drop_choices.iter().enumerate() {
                let (x, y) = (s.c_cones[i].contains(d1), s.c_cones[i].contains(d2));
                if x != y {
                    return Ok(Some(Witness::Cone { drops: drops.clone(), in_first: x, in_second: y }));
                }
            }
        }
        let mut l1 = 2;
        loop {
            let l = l1.min(max_l1);
            for beta in self.exceptional_roots_l1(l)? {
                let (x, y) = (self.hss_unchecked(&beta, d1), self.hss_unchecked(&beta, d2));
                if x != y {
                    return Ok(Some(Witness::Root { beta, in_first: x, in_second: y }));
                }
            }
            if l >= max_l1 {
                return Ok(None);
            }
            l1 *= 2;
        }
    }
}

/// Extreme rays among the given vectors of the cone they generate.
fn extreme_rays(n: usize, vectors: &[DimVec]) -> Vec<DimVec> {
    let mut out = Vec::new();
    for (i, v) in vectors.iter().enumerate() {
        let others: Vec<DimVec> = vectors
            .iter()
            .enumerate()
            .filter(|(j, u)| *j != i && !is_positive_multiple(u, v))
            .map(|(_, u)| u.clone())
            .collect();
        if !RationalCone::new(n, others).contains_by_solve(v) {
            out.push(v.clone());
        }
    }
    out
}

fn is_positive_multiple(u: &[i64], v: &[i64]) -> bool {
    // u = t v with t > 0
    let (Some(i), true) = (v.iter().position(|&x| x != 0), is_nonneg(u) == is_nonneg(v)) else {
        return false;
    };
    u.iter().zip(v).all(|(a, b)| a * v[i] == b * u[i]) && u[i] * v[i] > 0
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quiver::Quiver;

    fn ctx(name: &str) -> EulerContext {
        EulerContext::build(Quiver::named(name).unwrap()).unwrap()
    }

    #[test]
    fn king_examples() {
        let a2 = ctx("a2");
        assert!(a2.hss_contains(&[1, 1], &[3, 0]).unwrap());
        assert!(!a2.hss_contains(&[1, 1], &[-1, 0]).unwrap());
        assert!(a2.hss_contains(&[1, 0], &[0, -2]).unwrap());
        let sq = ctx("sq");
        assert!(sq.hss_contains(&[0, 1, 0, 0], &[1, 1, 5, 0]).unwrap());
        assert!(sq.hss_contains(&[1, 1, 1, 1], &[0, 0, 0, 0]).is_err());
    }

    #[test]
    fn descriptors() {
        let sq = ctx("sq");
        match sq.ss_descriptor(&[1, 1, 1, 1]).unwrap() {
            SSDescriptor::Regular { tube_parts } => {
                assert!(tube_parts.iter().all(|p| p.j.len() == 2 && p.f.is_empty()))
            }
            other => panic!("{other:?}"),
        }
        let a2 = ctx("a2");
        assert_eq!(
            a2.ss_descriptor(&[0, 0]).unwrap(),
            SSDescriptor::FinGen { relative_simples: vec![], exact: true }
        );
        assert_eq!(
            a2.relative_simples_exact(&[vec![1, 1], vec![0, 1]]).unwrap(),
            vec![vec![0, 1], vec![1, 0]]
        );
    }

    #[test]
    fn equivalences() {
        let a2 = ctx("a2");
        assert_eq!(a2.ss_equivalent(&[1, 2], &[2, 1], 8).unwrap(), Verdict::Equal);
        let k = ctx("kronecker");
        assert_eq!(k.ss_equivalent(&[1, 1], &[3, 3], 8).unwrap(), Verdict::Equal);
        match k.ss_equivalent(&[1, 2], &[0, 1], 8).unwrap() {
            Verdict::Different { witness: Some(Witness::Root { beta, .. }) } => assert_eq!(beta, vec![0, 1]),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn profiles() {
        let k = ctx("kronecker");
        let roots = k.exceptional_roots(&[3, 3]).unwrap();
        let p = k.hyp_profile(&[1, 1], &roots).unwrap();
        assert_eq!(p.cones, vec![(vec![], true)]);
        assert!(p.hits.is_empty());
        let a2 = ctx("a2");
        let roots = a2.exceptional_roots(&[2, 2]).unwrap();
        assert_eq!(a2.hyp_profile(&[1, 0], &roots).unwrap().hits, vec![vec![1, 1]]);
        assert_eq!(a2.hyp_profile(&[0, 0], &roots).unwrap().hits.len(), roots.len());
    }
}
