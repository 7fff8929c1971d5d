//! Canonical decompositions of dimension vectors and canonical presentations
//! of integer vectors.

use std::collections::BTreeSet;

use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::error::{invariant, Error, Result};
use crate::linalg::{self, q_int, q_to_i64, Rationals};
use crate::quiver::{add, is_nonneg, scale, DimVec, EulerContext};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub enum SummandKind {
    #[serde(rename = "REAL_SCHUR")]
    RealSchur,
    #[serde(rename = "ISOTROPIC_DELTA")]
    IsotropicDelta,
    #[serde(rename = "NEG_PROJECTIVE")]
    NegProjective,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Summand {
    /// For negative projective summands this is the vector -p_i itself.
    pub root: DimVec,
    pub mult: i64,
    pub kind: SummandKind,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CanonicalPresentation {
    pub summands: Vec<Summand>,
    pub d_plus: DimVec,
    pub d_minus: DimVec,
}

impl CanonicalPresentation {
    pub fn ray_set(&self) -> BTreeSet<DimVec> {
        self.summands.iter().map(|s| s.root.clone()).collect()
    }

    pub fn delta_mult(&self) -> i64 {
        self.summands
            .iter()
            .filter(|s| s.kind == SummandKind::IsotropicDelta)
            .map(|s| s.mult)
            .sum()
    }

    /// Real Schur summands of the positive part, with multiplicity.
    pub fn real_schur(&self) -> Vec<(DimVec, i64)> {
        self.summands
            .iter()
            .filter(|s| s.kind == SummandKind::RealSchur)
            .map(|s| (s.root.clone(), s.mult))
            .collect()
    }

    /// Vertices j whose projective enters negatively, with multiplicity.
    pub fn neg_projectives(&self, ctx: &EulerContext) -> Vec<(usize, i64)> {
        self.summands
            .iter()
            .filter(|s| s.kind == SummandKind::NegProjective)
            .map(|s| {
                let j = (0..ctx.n())
                    .find(|&j| scale(ctx.projective(j), -1) == s.root)
                    .expect("negative projective summand");
                (j, s.mult)
            })
            .collect()
    }

    pub fn total(&self, n: usize) -> DimVec {
        let mut t = vec![0; n];
        for s in &self.summands {
            t = add(&t, &scale(&s.root, s.mult));
        }
        t
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("serializable")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FanPointReport {
    pub cones_containing: usize,
    pub rays: Vec<DimVec>,
    pub coefficients: Vec<i64>,
}

/// Coefficients of d in the basis `rays` when d lies in the span.
fn solve_in_span(rays: &[DimVec], d: &[i64]) -> Option<Vec<BigRational>> {
    let f = Rationals;
    let n = d.len();
    let k = rays.len();
    let a: Vec<Vec<BigRational>> = (0..n).map(|i| (0..k).map(|j| q_int(rays[j][i])).collect()).collect();
    let b: Vec<BigRational> = d.iter().map(|&x| q_int(x)).collect();
    linalg::solve(&f, &a, &b, k)
}

fn independent(rays: &[DimVec]) -> bool {
    if rays.is_empty() {
        return true;
    }
    let n = rays[0].len();
    let m: Vec<Vec<BigRational>> = rays.iter().map(|r| linalg::q_vec(r)).collect();
    linalg::rank(&Rationals, &m, n) == rays.len()
}

impl EulerContext {
    pub(crate) fn compatible(&self, a: &[i64], b: &[i64]) -> bool {
        a == b || (self.ext_unchecked(a, b) == 0 && self.ext_unchecked(b, a) == 0)
    }

    /// Every compatible, linearly independent candidate set whose cone has
    /// `d` in its relative interior, with the coefficients.
    fn positive_cliques(&self, d: &[i64]) -> Result<Vec<(Vec<DimVec>, Vec<BigRational>)>> {
        let cands = self.enumerate_real_schur_roots(d)?;
        let c = cands.len();
        let mut compat = vec![vec![false; c]; c];
        for i in 0..c {
            for j in i..c {
                let ok = self.compatible(&cands[i], &cands[j]);
                compat[i][j] = ok;
                compat[j][i] = ok;
            }
        }
        let mut found = Vec::new();
        let mut stack: Vec<usize> = Vec::new();
        self.clique_search(&cands, &compat, 0, &mut stack, d, &mut found);
        Ok(found)
    }

    fn clique_search(
        &self,
        cands: &[DimVec],
        compat: &[Vec<bool>],
        start: usize,
        stack: &mut Vec<usize>,
        d: &[i64],
        found: &mut Vec<(Vec<DimVec>, Vec<BigRational>)>,
    ) {
        for i in start..cands.len() {
            if !stack.iter().all(|&j| compat[i][j]) {
                continue;
            }
            stack.push(i);
            let rays: Vec<DimVec> = stack.iter().map(|&j| cands[j].clone()).collect();
            if independent(&rays) {
                if let Some(t) = solve_in_span(&rays, d) {
                    if t.iter().all(|x| x.is_positive()) {
                        found.push((rays, t));
                    }
                }
                if stack.len() < d.len() {
                    self.clique_search(cands, compat, i + 1, stack, d, found);
                }
            }
            stack.pop();
        }
    }

    pub fn canonical_decomposition(&self, d: &[i64]) -> Result<CanonicalPresentation> {
        self.require_tame()?;
        self.check_len(d)?;
        if !is_nonneg(d) {
            return Err(Error::InvalidInput("canonical decomposition needs d >= 0".into()));
        }
        let n = self.n();
        if d.iter().all(|&x| x == 0) {
            return Ok(CanonicalPresentation { summands: vec![], d_plus: vec![0; n], d_minus: vec![0; n] });
        }
        let cliques = self.positive_cliques(d)?;
        invariant!(
            cliques.len() == 1,
            "{} fan cones contain {} in their relative interior",
            cliques.len(),
            crate::quiver::fmt_vec(d)
        );
        let (rays, coeffs) = &cliques[0];
        let mut summands = Vec::new();
        for (r, t) in rays.iter().zip(coeffs) {
            let m = q_to_i64(t);
            invariant!(m.is_some(), "non-integral multiplicity in canonical decomposition");
            let kind = if Some(r) == self.delta() {
                SummandKind::IsotropicDelta
            } else {
                SummandKind::RealSchur
            };
            summands.push(Summand { root: r.clone(), mult: m.unwrap(), kind });
        }
        summands.sort_by(|a, b| a.root.cmp(&b.root));
        Ok(CanonicalPresentation { summands, d_plus: d.to_vec(), d_minus: vec![0; n] })
    }

    /// Valid negative supports J (as bitmasks) with their multiplicities and
    /// resulting positive parts.
    fn negative_supports(&self, d: &[i64]) -> Vec<(Vec<usize>, Vec<i64>, DimVec)> {
        let n = self.n();
        let f = Rationals;
        let mut out = Vec::new();
        for mask in 0u32..(1u32 << n) {
            let js: Vec<usize> = (0..n).filter(|&j| mask >> j & 1 == 1).collect();
            let u: Vec<i64> = if js.is_empty() {
                vec![]
            } else {
                // d_i = -sum_j u_j p_j(i) for i in J.
                let a: Vec<Vec<BigRational>> = js
                    .iter()
                    .map(|&i| js.iter().map(|&j| q_int(-self.projective(j)[i])).collect())
                    .collect();
                let b: Vec<BigRational> = js.iter().map(|&i| q_int(d[i])).collect();
                let Some(sol) = linalg::solve(&f, &a, &b, js.len()) else { continue };
                match sol.iter().map(q_to_i64).collect::<Option<Vec<i64>>>() {
                    Some(u) => u,
                    None => continue,
                }
            };
            if u.iter().any(|&x| x <= 0) {
                continue;
            }
            let mut plus = d.to_vec();
            for (&j, &uj) in js.iter().zip(&u) {
                plus = add(&plus, &scale(self.projective(j), uj));
            }
            if is_nonneg(&plus) && js.iter().all(|&j| plus[j] == 0) {
                out.push((js, u, plus));
            }
        }
        out
    }

    pub fn canonical_presentation(&self, d: &[i64]) -> Result<CanonicalPresentation> {
        self.require_tame()?;
        self.check_len(d)?;
        let supports = self.negative_supports(d);
        invariant!(
            supports.len() == 1,
            "{} negative supports present {}",
            supports.len(),
            crate::quiver::fmt_vec(d)
        );
        let (js, u, plus) = &supports[0];
        let mut pres = self.canonical_decomposition(plus)?;
        let n = self.n();
        let mut minus = vec![0; n];
        for (&j, &uj) in js.iter().zip(u) {
            let neg = scale(self.projective(j), -1);
            for s in pres.summands.iter().filter(|s| s.kind != SummandKind::NegProjective) {
                invariant!(s.root[j] == 0, "negative projective at a vertex in the positive support");
            }
            minus = add(&minus, &scale(&neg, uj));
            pres.summands.push(Summand { root: neg, mult: uj, kind: SummandKind::NegProjective });
        }
        pres.summands.sort_by(|a, b| a.root.cmp(&b.root));
        pres.d_minus = minus;
        invariant!(pres.total(n) == d, "canonical presentation does not sum to its input");
        let rays: Vec<DimVec> = pres.summands.iter().map(|s| s.root.clone()).collect();
        invariant!(independent(&rays), "canonical presentation rays are dependent");
        Ok(pres)
    }

    pub fn cp_equivalent(&self, d1: &[i64], d2: &[i64]) -> Result<bool> {
        Ok(self.canonical_presentation(d1)?.ray_set() == self.canonical_presentation(d2)?.ray_set())
    }

    /// Counts every fan cone whose relative interior contains d; exactly one
    /// is required.
    pub fn verify_fan_point(&self, d: &[i64]) -> Result<FanPointReport> {
        self.require_tame()?;
        self.check_len(d)?;
        let mut hits: Vec<(Vec<DimVec>, Vec<BigRational>)> = Vec::new();
        for (js, u, plus) in self.negative_supports(d) {
            let mut cliques = if plus.iter().all(|&x| x == 0) {
                vec![(vec![], vec![])]
            } else {
                self.positive_cliques(&plus)?
            };
            for (rays, coeffs) in cliques.iter_mut() {
                for (&j, &uj) in js.iter().zip(&u) {
                    rays.push(scale(self.projective(j), -1));
                    coeffs.push(q_int(uj));
                }
            }
            hits.extend(cliques);
        }
        invariant!(
            hits.len() == 1,
            "{} fan cones contain {} in their relative interior",
            hits.len(),
            crate::quiver::fmt_vec(d)
        );
        let (rays, coeffs) = hits.pop().expect("one cone");
        let mut pairs: Vec<(DimVec, i64)> = rays
            .into_iter()
            .zip(coeffs.iter().map(|c| q_to_i64(c).unwrap_or(0)))
            .collect();
        invariant!(
            coeffs.iter().all(|c| c.is_integer() && !c.is_zero()),
            "fan coefficients are not positive integers"
        );
        pairs.sort();
        Ok(FanPointReport {
            cones_containing: 1,
            rays: pairs.iter().map(|p| p.0.clone()).collect(),
            coefficients: pairs.iter().map(|p| p.1).collect(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quiver::Quiver;

    fn ctx(name: &str) -> EulerContext {
        EulerContext::build(Quiver::named(name).unwrap()).unwrap()
    }

    fn summary(p: &CanonicalPresentation) -> Vec<(DimVec, i64, SummandKind)> {
        p.summands.iter().map(|s| (s.root.clone(), s.mult, s.kind)).collect()
    }

    #[test]
    fn decompositions() {
        let a2 = ctx("a2");
        assert_eq!(
            summary(&a2.canonical_decomposition(&[1, 2]).unwrap()),
            vec![(vec![0, 1], 1, SummandKind::RealSchur), (vec![1, 1], 1, SummandKind::RealSchur)]
        );
        let k = ctx("kronecker");
        assert_eq!(
            summary(&k.canonical_decomposition(&[3, 1]).unwrap()),
            vec![(vec![1, 0], 1, SummandKind::RealSchur), (vec![2, 1], 1, SummandKind::RealSchur)]
        );
        assert_eq!(
            summary(&k.canonical_decomposition(&[2, 2]).unwrap()),
            vec![(vec![1, 1], 2, SummandKind::IsotropicDelta)]
        );
    }

    #[test]
    fn presentations() {
        let a2 = ctx("a2");
        let p = a2.canonical_presentation(&[-1, 2]).unwrap();
        assert_eq!(
            summary(&p),
            vec![(vec![-1, -1], 1, SummandKind::NegProjective), (vec![0, 1], 3, SummandKind::RealSchur)]
        );
        assert_eq!(p.d_plus, vec![0, 3]);
        assert_eq!(p.d_minus, vec![-1, -1]);
        let p = a2.canonical_presentation(&[0, -1]).unwrap();
        assert_eq!(summary(&p), vec![(vec![0, -1], 1, SummandKind::NegProjective)]);
        let p = a2.canonical_presentation(&[-1, -2]).unwrap();
        assert_eq!(
            summary(&p),
            vec![(vec![-1, -1], 1, SummandKind::NegProjective), (vec![0, -1], 1, SummandKind::NegProjective)]
        );
        assert_eq!(p.d_plus, vec![0, 0]);
        let sq = ctx("sq");
        let p = sq.canonical_presentation(&[1, 0, 0, 1]).unwrap();
        assert_eq!(p.ray_set(), [vec![0, 0, 0, 1], vec![1, 0, 0, 0]].into_iter().collect());
    }

    #[test]
    fn cp_equivalence() {
        let k = ctx("kronecker");
        assert!(k.cp_equivalent(&[1, 2], &[2, 4]).unwrap());
        let a2 = ctx("a2");
        assert!(!a2.cp_equivalent(&[1, 2], &[2, 1]).unwrap());
        assert!(a2.cp_equivalent(&[-3, 5], &[-3, 5]).unwrap());
    }

    #[test]
    fn fan_points() {
        let k = ctx("kronecker");
        let r = k.verify_fan_point(&[1, 1]).unwrap();
        assert_eq!((r.rays, r.coefficients), (vec![vec![1, 1]], vec![1]));
        let a2 = ctx("a2");
        let r = a2.verify_fan_point(&[2, 3]).unwrap();
        assert_eq!((r.rays, r.coefficients), (vec![vec![0, 1], vec![1, 1]], vec![1, 2]));
        let sq = ctx("sq");
        let r = sq.verify_fan_point(&[1, 2, 2, 1]).unwrap();
        assert_eq!(r.rays, vec![vec![0, 0, 1, 0], vec![0, 1, 0, 0], vec![1, 1, 1, 1]]);
        assert_eq!(r.coefficients, vec![1, 1, 1]);
    }
}
