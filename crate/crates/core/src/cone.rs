//! Exact polyhedral cones over integer generators.
//!
//! Facet inequalities are obtained by Fourier–Motzkin elimination of the
//! combination coefficients from `x = G λ, λ >= 0`, pruned with Chernikov's
//! history rule.

use std::collections::{BTreeSet, HashSet};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::linalg::{self, gcd_normalize, q_vec, Rationals};
use crate::quiver::DimVec;

#[derive(Debug, Clone)]
pub struct RationalCone {
    dim: usize,
    generators: Vec<DimVec>,
    rank: usize,
    /// Basis of the orthogonal complement of the span.
    equalities: Vec<Vec<BigInt>>,
    /// Primitive normals lying in the span, one per facet.
    facets: Vec<Vec<BigInt>>,
}

#[derive(Clone)]
struct Row {
    coeffs: Vec<BigInt>,
    history: Vec<u64>,
}

fn dot_int(a: &[BigInt], x: &[i64]) -> BigInt {
    a.iter().zip(x).map(|(u, &v)| u * BigInt::from(v)).sum()
}

fn history_len(h: &[u64]) -> u32 {
    h.iter().map(|w| w.count_ones()).sum()
}

fn fourier_motzkin(dim: usize, gens: &[DimVec]) -> Vec<Vec<BigInt>> {
    let m = gens.len();
    let width = dim + m;
    let words = (2 * dim + m).div_ceil(64).max(1);
    let mut rows: Vec<Row> = Vec::new();
    let push_origin = |coeffs: Vec<BigInt>, idx: usize, rows: &mut Vec<Row>| {
        let mut history = vec![0u64; words];
        history[idx / 64] |= 1 << (idx % 64);
        rows.push(Row { coeffs, history });
    };
    // x_i - sum_j g_j(i) λ_j = 0 as two inequalities, then λ_j >= 0.
    for i in 0..dim {
        let mut c = vec![BigInt::zero(); width];
        c[i] = BigInt::from(1);
        for (j, g) in gens.iter().enumerate() {
            c[dim + j] = BigInt::from(-g[i]);
        }
        let neg: Vec<BigInt> = c.iter().map(|x| -x).collect();
        push_origin(c, 2 * i, &mut rows);
        push_origin(neg, 2 * i + 1, &mut rows);
    }
    for j in 0..m {
        let mut c = vec![BigInt::zero(); width];
        c[dim + j] = BigInt::from(1);
        push_origin(c, 2 * dim + j, &mut rows);
    }
    for step in 0..m {
        let col = dim + step;
        let (mut pos, mut neg, mut keep) = (Vec::new(), Vec::new(), Vec::new());
        for r in rows {
            if r.coeffs[col].is_positive() {
                pos.push(r);
            } else if r.coeffs[col].is_negative() {
                neg.push(r);
            } else {
                keep.push(r);
            }
        }
        let limit = step as u32 + 2;
        let mut seen: HashSet<Vec<BigInt>> = keep.iter().map(|r| r.coeffs.clone()).collect();
        for p in &pos {
            for q in &neg {
                let history: Vec<u64> = p.history.iter().zip(&q.history).map(|(a, b)| a | b).collect();
                if history_len(&history) > limit {
                    continue;
                }
                let a = p.coeffs[col].clone();
                let b = -q.coeffs[col].clone();
                let mut coeffs: Vec<BigInt> =
                    p.coeffs.iter().zip(&q.coeffs).map(|(x, y)| x * &b + y * &a).collect();
                gcd_normalize(&mut coeffs);
                if coeffs.iter().all(|x| x.is_zero()) {
                    continue;
                }
                if seen.insert(coeffs.clone()) {
                    keep.push(Row { coeffs, history });
                }
            }
        }
        rows = keep;
    }
    let mut out: Vec<Vec<BigInt>> = rows
        .into_iter()
        .map(|r| r.coeffs[..dim].to_vec())
        .filter(|c| c.iter().any(|x| !x.is_zero()))
        .collect();
    out.sort();
    out.dedup();
    out
}

fn rank_of(vectors: &[DimVec], dim: usize) -> usize {
    if vectors.is_empty() {
        return 0;
    }
    let m: Vec<Vec<BigRational>> = vectors.iter().map(|v| q_vec(v)).collect();
    linalg::rank(&Rationals, &m, dim)
}

/// Maximal independent subset, greedily in order.
fn basis_subset(vectors: &[DimVec], dim: usize) -> Vec<DimVec> {
    let mut basis: Vec<DimVec> = Vec::new();
    for v in vectors {
        let mut trial = basis.clone();
        trial.push(v.clone());
        if rank_of(&trial, dim) == trial.len() {
            basis = trial;
        }
    }
    basis
}

fn to_rationals(v: &[BigInt]) -> Vec<BigRational> {
    v.iter().map(|x| BigRational::from_integer(x.clone())).collect()
}

impl RationalCone {
    pub fn new(dim: usize, generators: Vec<DimVec>) -> Self {
        assert!(generators.iter().all(|g| g.len() == dim), "generator length");
        let generators: Vec<DimVec> = generators.into_iter().filter(|g| g.iter().any(|&x| x != 0)).collect();
        let f = Rationals;
        let rank = rank_of(&generators, dim);
        let gmat: Vec<Vec<BigRational>> = generators.iter().map(|g| q_vec(g)).collect();
        let equalities: Vec<Vec<BigInt>> = if generators.is_empty() {
            (0..dim)
                .map(|i| (0..dim).map(|j| BigInt::from((i == j) as i64)).collect())
                .collect()
        } else {
            linalg::nullspace(&f, &gmat, dim)
                .iter()
                .map(|v| linalg::primitive_integer(v))
                .collect()
        };
        let basis = basis_subset(&generators, dim);
        let mut facets: BTreeSet<Vec<BigInt>> = BTreeSet::new();
        if rank > 0 {
            for row in fourier_motzkin(dim, &generators) {
                let vals: Vec<BigInt> = generators.iter().map(|g| dot_int(&row, g)).collect();
                if vals.iter().any(|v| v.is_negative()) {
                    continue;
                }
                let zeros: Vec<DimVec> = generators
                    .iter()
                    .zip(&vals)
                    .filter(|(_, v)| v.is_zero())
                    .map(|(g, _)| g.clone())
                    .collect();
                if rank_of(&zeros, dim) + 1 != rank {
                    continue;
                }
                facets.insert(project_to_span(&basis, &row, dim));
            }
        }
        RationalCone { dim, generators, rank, equalities, facets: facets.into_iter().collect() }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn generators(&self) -> &[DimVec] {
        &self.generators
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn facets(&self) -> &[Vec<BigInt>] {
        &self.facets
    }

    pub fn equalities(&self) -> &[Vec<BigInt>] {
        &self.equalities
    }

    pub fn in_span(&self, x: &[i64]) -> bool {
        self.equalities.iter().all(|e| dot_int(e, x).is_zero())
    }

    pub fn contains(&self, x: &[i64]) -> bool {
        self.in_span(x) && self.facets.iter().all(|a| !dot_int(a, x).is_negative())
    }

    /// Membership by an exact nonnegative solve over independent generator
    /// subsets; the inequality description must agree.
    pub fn contains_by_solve(&self, x: &[i64]) -> bool {
        if x.iter().all(|&v| v == 0) {
            return true;
        }
        let m = self.generators.len();
        let mut found = false;
        subsets_up_to(m, self.rank, &mut |idx: &[usize]| {
            if found {
                return;
            }
            let sel: Vec<DimVec> = idx.iter().map(|&i| self.generators[i].clone()).collect();
            if rank_of(&sel, self.dim) != sel.len() {
                return;
            }
            let a: Vec<Vec<BigRational>> = (0..self.dim)
                .map(|r| sel.iter().map(|g| linalg::q_int(g[r])).collect())
                .collect();
            if let Some(t) = linalg::solve(&Rationals, &a, &q_vec(x), sel.len()) {
                if t.iter().all(|v| !v.is_negative()) {
                    found = true;
                }
            }
        });
        found
    }

    /// Contained and on at least one facet.
    pub fn on_boundary(&self, x: &[i64]) -> bool {
        self.contains(x) && self.facets.iter().any(|a| dot_int(a, x).is_zero())
    }

    pub fn in_relative_interior(&self, x: &[i64]) -> bool {
        self.in_span(x) && self.facets.iter().all(|a| dot_int(a, x).is_positive())
    }

    /// For each facet, the indices of generators lying on it.
    pub fn facet_generator_sets(&self) -> Vec<BTreeSet<usize>> {
        self.facets
            .iter()
            .map(|a| {
                (0..self.generators.len())
                    .filter(|&i| dot_int(a, &self.generators[i]).is_zero())
                    .collect()
            })
            .collect()
    }

    pub fn facet_strings(&self) -> Vec<String> {
        self.facets
            .iter()
            .map(|a| {
                let parts: Vec<String> = a.iter().map(|x| x.to_string()).collect();
                format!("[{}]", parts.join(","))
            })
            .collect()
    }
}

fn project_to_span(basis: &[DimVec], a: &[BigInt], dim: usize) -> Vec<BigInt> {
    let f = Rationals;
    let k = basis.len();
    let b: Vec<Vec<BigRational>> = basis.iter().map(|v| q_vec(v)).collect();
    let a_q = to_rationals(a);
    let gram: Vec<Vec<BigRational>> = (0..k)
        .map(|i| (0..k).map(|j| dot_q(&b[i], &b[j])).collect())
        .collect();
    let rhs: Vec<BigRational> = (0..k).map(|i| dot_q(&b[i], &a_q)).collect();
    let c = linalg::solve(&f, &gram, &rhs, k).expect("Gram matrix of a basis is invertible");
    let proj: Vec<BigRational> = (0..dim)
        .map(|r| (0..k).map(|i| &c[i] * &b[i][r]).sum())
        .collect();
    linalg::primitive_integer(&proj)
}

fn dot_q(a: &[BigRational], b: &[BigRational]) -> BigRational {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Calls `f` on every index subset of size 1..=k in lexicographic order.
pub(crate) fn subsets_up_to(m: usize, k: usize, f: &mut dyn FnMut(&[usize])) {
    fn rec(start: usize, m: usize, k: usize, cur: &mut Vec<usize>, f: &mut dyn FnMut(&[usize])) {
        for i in start..m {
            cur.push(i);
            f(cur);
            if cur.len() < k {
                rec(i + 1, m, k, cur, f);
            }
            cur.pop();
        }
    }
    rec(0, m, k, &mut Vec::new(), f);
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Independent facet oracle: normals orthogonal to rank-1 fewer
    /// generators inside the span, kept when one-signed.
    fn facets_by_subsets(c: &RationalCone) -> BTreeSet<Vec<BigInt>> {
        let dim = c.dim();
        let gens = c.generators().to_vec();
        let basis = basis_subset(&gens, dim);
        let mut out = BTreeSet::new();
        subsets_up_to(gens.len(), c.rank() - 1, &mut |idx: &[usize]| {
            let sel: Vec<DimVec> = idx.iter().map(|&i| gens[i].clone()).collect();
            if sel.len() + 1 != c.rank() || rank_of(&sel, dim) != sel.len() {
                return;
            }
            // Normal: element of span(basis) orthogonal to sel.
            let k = basis.len();
            let m: Vec<Vec<BigRational>> = sel
                .iter()
                .map(|s| (0..k).map(|i| dot_q(&q_vec(s), &q_vec(&basis[i]))).collect())
                .collect();
            let ns = linalg::nullspace(&Rationals, &m, k);
            if ns.len() != 1 {
                return;
            }
            let v: Vec<BigRational> = (0..dim).map(|r| (0..k).map(|i| &ns[0][i] * linalg::q_int(basis[i][r])).sum()).collect();
            let mut a = linalg::primitive_integer(&v);
            let vals: Vec<BigInt> = gens.iter().map(|g| dot_int(&a, g)).collect();
            if vals.iter().all(|x| !x.is_positive()) {
                a = a.iter().map(|x| -x).collect();
            } else if vals.iter().any(|x| x.is_negative()) {
                return;
            }
            out.insert(a);
        });
        out
    }

    #[test]
    fn square_cone() {
        let c = RationalCone::new(
            4,
            vec![vec![0, 1, 0, 0], vec![0, 0, 1, 0], vec![1, 0, 1, 1], vec![1, 1, 0, 1], vec![1, 1, 1, 1]],
        );
        assert_eq!(c.rank(), 3);
        assert_eq!(c.facets().len(), 4);
        assert_eq!(c.facets().iter().cloned().collect::<BTreeSet<_>>(), facets_by_subsets(&c));
        assert!(!c.contains(&[1, 0, 0, 1]));
        assert!(c.contains(&[1, 2, 2, 1]));
        assert!(c.on_boundary(&[0, 1, 0, 0]));
    }

    #[test]
    fn ray_cone() {
        let c = RationalCone::new(2, vec![vec![1, 1]]);
        assert!(c.contains(&[3, 3]));
        assert!(!c.contains(&[2, 1]));
        assert!(!c.contains(&[-1, -1]));
        assert!(c.contains_by_solve(&[3, 3]));
        assert!(!c.contains_by_solve(&[2, 1]));
    }

    #[test]
    fn zero_cone() {
        let c = RationalCone::new(3, vec![]);
        assert!(c.contains(&[0, 0, 0]));
        assert!(!c.contains(&[0, 1, 0]));
    }

    #[test]
    fn facets_agree_with_subset_oracle() {
        let gens = vec![
            vec![1, 0, 0, 2],
            vec![0, 1, 0, 1],
            vec![0, 0, 1, 1],
            vec![1, 1, 1, 0],
            vec![2, 1, 0, 1],
            vec![0, 1, 2, 3],
        ];
        let c = RationalCone::new(4, gens);
        assert_eq!(c.facets().iter().cloned().collect::<BTreeSet<_>>(), facets_by_subsets(&c));
        for x in crate::quiver::box_iter(&[2, 2, 2, 3]) {
            assert_eq!(c.contains(&x), c.contains_by_solve(&x), "{x:?}");
        }
    }
}
