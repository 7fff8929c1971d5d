//! King semi-stability on an explicit sample over F_3, where every
//! subrepresentation can be enumerated.

use std::collections::BTreeSet;

use super::{hom_basis, rng_for, sample_raw, SampledRep};
use crate::error::{Error, Result};
use crate::linalg::{self, Field, Mat, PrimeField};
use crate::quiver::{DimVec, EulerContext};

const KING_PRIME: u64 = 3;
const KING_ATTEMPTS: u64 = 200;
const KING_SAMPLES: u64 = 3;
/// Total dimension above which subspace enumeration is refused.
const KING_MAX_DIM: i64 = 8;

/// A sample of dimension alpha over F_3 with trivial endomorphisms.
pub fn brick_sample(ctx: &EulerContext, alpha: &[i64], seed: u64) -> Result<SampledRep> {
    let f = PrimeField::new(KING_PRIME);
    for attempt in 0..KING_ATTEMPTS {
        let mut rng = rng_for(seed ^ 0x6b69_6e67, alpha, attempt);
        let m = sample_raw(ctx, alpha, &f, &mut rng)?;
        if hom_basis(&f, &m, &m).len() == 1 {
            return Ok(m);
        }
    }
    Err(Error::Certification(format!("no brick of dimension {alpha:?} found over F_3")))
}

/// Every subspace of F_q^k, as row-reduced bases.
fn subspaces(f: &PrimeField, k: usize) -> Vec<Vec<Vec<u64>>> {
    let mut out = Vec::new();
    for r in 0..=k {
        for pivots in combinations(k, r) {
            // free slots: (row i, column c) with c > pivots[i], c not a pivot
            let free: Vec<(usize, usize)> = (0..r)
                .flat_map(|i| {
                    let pv = pivots.clone();
                    ((pivots[i] + 1)..k).filter(move |c| !pv.contains(c)).map(move |c| (i, c))
                })
                .collect();
            let count = (f.p as usize).pow(free.len() as u32);
            for mut code in 0..count {
                let mut rows = vec![vec![0u64; k]; r];
                for (i, &p) in pivots.iter().enumerate() {
                    rows[i][p] = 1;
                }
                for &(i, c) in &free {
                    rows[i][c] = (code % f.p as usize) as u64;
                    code /= f.p as usize;
                }
                out.push(rows);
            }
        }
    }
    out
}

fn combinations(k: usize, r: usize) -> Vec<Vec<usize>> {
    if r == 0 {
        return vec![vec![]];
    }
    if k < r {
        return vec![];
    }
    let mut out = combinations(k - 1, r);
    for mut c in combinations(k - 1, r - 1) {
        c.push(k - 1);
        out.push(c);
    }
    out
}

fn contains(f: &PrimeField, space: &[Vec<u64>], v: &[u64], dim: usize) -> bool {
    if v.iter().all(|&x| x == 0) {
        return true;
    }
    let mut m: Mat<u64> = space.to_vec();
    m.push(v.to_vec());
    linalg::rank(f, &m, dim) == space.len()
}

/// Dimension vectors of all subrepresentations of m.
pub fn subrep_dims(ctx: &EulerContext, m: &SampledRep) -> Result<BTreeSet<DimVec>> {
    let f = PrimeField::new(KING_PRIME);
    if m.dims.iter().sum::<i64>() > KING_MAX_DIM {
        return Err(Error::Unsupported(format!("subrepresentation enumeration for {:?}", m.dims)));
    }
    let order = ctx
        .quiver()
        .topological_order()
        .ok_or_else(|| Error::InvalidInput("quiver has an oriented cycle".into()))?;
    let spaces: Vec<Vec<Vec<Vec<u64>>>> = (0..m.n()).map(|v| subspaces(&f, m.dims[v] as usize)).collect();
    let mut out = BTreeSet::new();
    let mut chosen: Vec<Option<usize>> = vec![None; m.n()];
    search(&f, m, &order, 0, &spaces, &mut chosen, &mut out);
    Ok(out)
}

fn search(
    f: &PrimeField,
    m: &SampledRep,
    order: &[usize],
    depth: usize,
    spaces: &[Vec<Vec<Vec<u64>>>],
    chosen: &mut Vec<Option<usize>>,
    out: &mut BTreeSet<DimVec>,
) {
    if depth == order.len() {
        out.insert(chosen.iter().enumerate().map(|(v, c)| spaces[v][c.unwrap()].len() as i64).collect());
        return;
    }
    let t = order[depth];
    let dt = m.dims[t] as usize;
    'cand: for (idx, u) in spaces[t].iter().enumerate() {
        for (k, &(s, tt)) in m.arrows.iter().enumerate() {
            if tt != t {
                continue;
            }
            let us = &spaces[s][chosen[s].expect("sources precede targets")];
            for b in us {
                let img: Vec<u64> = m.mats[k]
                    .iter()
                    .map(|row| row.iter().zip(b).fold(0, |acc, (p, q)| f.add(&acc, &f.mul(p, q))))
                    .collect();
                if !contains(f, u, &img, dt) {
                    continue 'cand;
                }
            }
        }
        chosen[t] = Some(idx);
        search(f, m, order, depth + 1, spaces, chosen, out);
        chosen[t] = None;
    }
}

/// Subrepresentation dimensions common to several independent bricks;
/// the generic module has the fewest.
pub fn king_subs(ctx: &EulerContext, alpha: &[i64], seed: u64) -> Result<BTreeSet<DimVec>> {
    let mut common: Option<BTreeSet<DimVec>> = None;
    for k in 0..KING_SAMPLES {
        let m = brick_sample(ctx, alpha, seed.wrapping_add(k))?;
        let subs = subrep_dims(ctx, &m)?;
        common = Some(match common {
            None => subs,
            Some(c) => c.intersection(&subs).cloned().collect(),
        });
    }
    Ok(common.unwrap_or_default())
}

/// King's criterion for the weight <d, ->: <d, alpha> = 0 and <d, e> <= 0
/// on every subrepresentation dimension e.
pub fn king_semistable(ctx: &EulerContext, subs: &BTreeSet<DimVec>, alpha: &[i64], d: &[i64]) -> Result<bool> {
    if ctx.euler_form(d, alpha)? != 0 {
        return Ok(false);
    }
    for e in subs {
        if ctx.euler_form(d, e)? > 0 {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quiver::Quiver;

    #[test]
    fn subspace_counts() {
        let f = PrimeField::new(3);
        // Gaussian binomials at q = 3: 1 + 13 + 13 + 1
        assert_eq!(subspaces(&f, 3).len(), 28);
        assert_eq!(subspaces(&f, 0).len(), 1);
    }

    #[test]
    fn a2_projective_subs() {
        let c = EulerContext::build(Quiver::named("a2").unwrap()).unwrap();
        let m = brick_sample(&c, &[1, 1], 0).unwrap();
        let subs = subrep_dims(&c, &m).unwrap();
        let expect: BTreeSet<DimVec> = [vec![0, 0], vec![0, 1], vec![1, 1]].into_iter().collect();
        assert_eq!(subs, expect);
        assert_eq!(subs.iter().cloned().collect::<Vec<_>>(), c.generic_subs(&[1, 1]).unwrap());
    }
}
