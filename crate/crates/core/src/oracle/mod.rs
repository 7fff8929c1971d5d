//! Module-level ground truth: explicit representations over a prime field,
//! Hom and Ext by linear algebra, decomposition into indecomposables and
//! thick-closure relative simples.

mod closure;
mod decompose;
pub mod king;
pub mod poly;

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{invariant, Error, Result};
use crate::linalg::{self, Field, Mat, PrimeField};
use crate::quiver::{is_nonneg, DimVec, EulerContext};

pub use closure::relative_simples;
pub use decompose::{decompose, Piece};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleConfig {
    pub seed: u64,
    pub prime: u64,
    /// Random elements drawn from each hom-space in the closure step.
    pub combos: usize,
    pub retries: usize,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig { seed: 0, prime: 1_000_003, combos: 8, retries: 20 }
    }
}

impl OracleConfig {
    pub fn field(&self) -> PrimeField {
        PrimeField::new(self.prime)
    }
}

/// A representation over F_p; `mats[k]` is the map of arrow k, of shape
/// dims[target] x dims[source].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SampledRep {
    pub dims: DimVec,
    pub arrows: Vec<(usize, usize)>,
    pub mats: Vec<Mat<u64>>,
    /// Verified predictions, keyed by name.
    pub certificates: BTreeMap<String, i64>,
}

impl SampledRep {
    pub fn n(&self) -> usize {
        self.dims.len()
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().map(|&x| x as usize).sum()
    }

    pub fn zero(ctx: &EulerContext) -> Self {
        let n = ctx.n();
        SampledRep {
            dims: vec![0; n],
            arrows: ctx.quiver().arrows().to_vec(),
            mats: ctx
                .quiver()
                .arrows()
                .iter()
                .map(|_| Vec::new())
                .collect(),
            certificates: BTreeMap::new(),
        }
    }

    fn dim(&self, v: usize) -> usize {
        self.dims[v] as usize
    }
}

/// Deterministic stream for a (seed, dimension vector, attempt) triple.
pub(crate) fn rng_for(seed: u64, tag: &[i64], attempt: u64) -> ChaCha8Rng {
    let mut h: u64 = seed ^ 0x9e37_79b9_7f4a_7c15;
    for &x in tag {
        h = (h ^ (x as u64)).wrapping_mul(0x1000_0000_01b3).rotate_left(17);
    }
    h = (h ^ attempt).wrapping_mul(0xff51_afd7_ed55_8ccd);
    ChaCha8Rng::seed_from_u64(h)
}

pub fn sample_raw<R: Rng>(ctx: &EulerContext, d: &[i64], f: &PrimeField, rng: &mut R) -> Result<SampledRep> {
    ctx.check_len(d)?;
    if !is_nonneg(d) {
        return Err(Error::InvalidInput(format!("cannot sample negative dimension vector {d:?}")));
    }
    let arrows = ctx.quiver().arrows().to_vec();
    let mats = arrows
        .iter()
        .map(|&(s, t)| {
            (0..d[t])
                .map(|_| (0..d[s]).map(|_| rng.gen_range(0..f.p)).collect())
                .collect()
        })
        .collect();
    Ok(SampledRep { dims: d.to_vec(), arrows, mats, certificates: BTreeMap::new() })
}

/// Summand dimension vectors of the canonical decomposition, expanded by
/// multiplicity and sorted.
pub fn expected_summands(ctx: &EulerContext, d: &[i64]) -> Result<Vec<DimVec>> {
    let cd = ctx.canonical_decomposition(d)?;
    let mut out = Vec::new();
    for s in &cd.summands {
        for _ in 0..s.mult {
            out.push(s.root.clone());
        }
    }
    out.sort();
    Ok(out)
}

/// Predicted End dimension of a generic module with the given summands;
/// each summand is Schur, so the diagonal terms are 1.
pub fn predicted_end_dim(ctx: &EulerContext, summands: &[DimVec]) -> Result<i64> {
    let mut total = 0;
    for (i, a) in summands.iter().enumerate() {
        for (j, b) in summands.iter().enumerate() {
            total += if i == j { 1 } else { ctx.hom_generic(a, b)? };
        }
    }
    Ok(total)
}

/// Dimension vectors of the summands over the algebraic closure.
pub fn piece_dims(pieces: &[Piece]) -> Vec<DimVec> {
    let mut out = Vec::new();
    for p in pieces {
        let part: DimVec = p.rep.dims.iter().map(|x| x / p.split as i64).collect();
        for _ in 0..p.split {
            out.push(part.clone());
        }
    }
    out.sort();
    out
}

/// A sample whose decomposition and End dimension match the generic
/// predictions.
pub fn sample_generic(ctx: &EulerContext, d: &[i64], cfg: &OracleConfig, seed: u64) -> Result<SampledRep> {
    let f = cfg.field();
    let expected = expected_summands(ctx, d)?;
    let end = predicted_end_dim(ctx, &expected)?;
    for attempt in 0..cfg.retries as u64 {
        let mut rng = rng_for(seed, d, attempt);
        let mut m = sample_raw(ctx, d, &f, &mut rng)?;
        if module_hom_dim(&f, &m, &m) as i64 != end {
            continue;
        }
        let pieces = decompose(&f, &m, &mut rng)?;
        if piece_dims(&pieces) != expected {
            continue;
        }
        m.certificates.insert("end_dim".into(), end);
        m.certificates.insert("summands".into(), expected.len() as i64);
        return Ok(m);
    }
    Err(Error::Certification(format!(
        "no certified generic sample of dimension {d:?} after {} attempts",
        cfg.retries
    )))
}

/// Unknown layout for Hom(M, N): the block of vertex v starts at
/// offsets[v] and holds N_v x M_v entries row-major.
fn hom_offsets(m: &SampledRep, nrep: &SampledRep) -> (Vec<usize>, usize) {
    let mut offsets = Vec::with_capacity(m.n());
    let mut total = 0;
    for v in 0..m.n() {
        offsets.push(total);
        total += m.dim(v) * nrep.dim(v);
    }
    (offsets, total)
}

fn hom_system(f: &PrimeField, m: &SampledRep, nrep: &SampledRep) -> (Mat<u64>, Vec<usize>, usize) {
    let (off, cols) = hom_offsets(m, nrep);
    let mut rows: Mat<u64> = Vec::new();
    for (k, &(s, t)) in m.arrows.iter().enumerate() {
        let (ms, mt, ns, nt) = (m.dim(s), m.dim(t), nrep.dim(s), nrep.dim(t));
        // (N_a phi_s - phi_t M_a)[i][j] = 0 for i < nt, j < ms
        for i in 0..nt {
            for j in 0..ms {
                let mut row = vec![0u64; cols];
                for l in 0..ns {
                    let c = nrep.mats[k][i][l];
                    let idx = off[s] + l * ms + j;
                    row[idx] = f.add(&row[idx], &c);
                }
                for l in 0..mt {
                    let c = m.mats[k][l][j];
                    let idx = off[t] + i * mt + l;
                    row[idx] = f.sub(&row[idx], &c);
                }
                rows.push(row);
            }
        }
    }
    (rows, off, cols)
}

/// A homomorphism as one matrix per vertex (N_v x M_v).
pub type Hom = Vec<Mat<u64>>;

pub fn hom_basis(f: &PrimeField, m: &SampledRep, nrep: &SampledRep) -> Vec<Hom> {
    let (rows, off, cols) = hom_system(f, m, nrep);
    let null = if cols == 0 {
        Vec::new()
    } else if rows.is_empty() {
        (0..cols)
            .map(|c| {
                let mut v = vec![0; cols];
                v[c] = 1;
                v
            })
            .collect()
    } else {
        linalg::nullspace(f, &rows, cols)
    };
    null.into_iter()
        .map(|x| unflatten(m, nrep, &off, &x))
        .collect()
}

fn unflatten(m: &SampledRep, nrep: &SampledRep, off: &[usize], x: &[u64]) -> Hom {
    (0..m.n())
        .map(|v| {
            let (mv, nv) = (m.dim(v), nrep.dim(v));
            (0..nv)
                .map(|i| (0..mv).map(|j| x[off[v] + i * mv + j]).collect())
                .collect()
        })
        .collect()
}

pub fn module_hom_dim(f: &PrimeField, m: &SampledRep, nrep: &SampledRep) -> usize {
    let (rows, _, cols) = hom_system(f, m, nrep);
    if rows.is_empty() {
        return cols;
    }
    cols - linalg::rank(f, &rows, cols)
}

pub fn module_ext_dim(ctx: &EulerContext, f: &PrimeField, m: &SampledRep, nrep: &SampledRep) -> Result<i64> {
    let hom = module_hom_dim(f, m, nrep) as i64;
    let ext = hom - ctx.euler_form(&m.dims, &nrep.dims)?;
    invariant!(ext >= 0, "negative ext {ext} between samples {:?} and {:?}", m.dims, nrep.dims);
    Ok(ext)
}

pub fn random_combination<R: Rng>(f: &PrimeField, basis: &[Hom], rng: &mut R) -> Option<Hom> {
    let first = basis.first()?;
    let mut out: Hom = first.iter().map(|b| b.iter().map(|r| vec![0; r.len()]).collect()).collect();
    for phi in basis {
        let c = rng.gen_range(0..f.p);
        for (ov, pv) in out.iter_mut().zip(phi) {
            for (orow, prow) in ov.iter_mut().zip(pv) {
                for (o, p) in orow.iter_mut().zip(prow) {
                    *o = f.add(o, &f.mul(&c, p));
                }
            }
        }
    }
    Some(out)
}

/// Column basis (as vectors) of a subspace given by spanning vectors.
fn span_basis(f: &PrimeField, vecs: &[Vec<u64>], dim: usize) -> Vec<Vec<u64>> {
    if dim == 0 || vecs.is_empty() {
        return Vec::new();
    }
    let mut m: Mat<u64> = vecs.to_vec();
    let piv = linalg::rref(f, &mut m, dim);
    m.truncate(piv.len());
    m
}

fn mat_times_vec(f: &PrimeField, a: &Mat<u64>, x: &[u64]) -> Vec<u64> {
    a.iter()
        .map(|row| row.iter().zip(x).fold(0, |acc, (p, q)| f.add(&acc, &f.mul(p, q))))
        .collect()
}

/// Coordinates of x in the basis `basis` (vectors), which must span it.
fn coords(f: &PrimeField, basis: &[Vec<u64>], x: &[u64]) -> Option<Vec<u64>> {
    if basis.is_empty() {
        return if x.iter().all(|&v| v == 0) { Some(Vec::new()) } else { None };
    }
    let cols = basis.len();
    let a: Mat<u64> = (0..x.len()).map(|i| basis.iter().map(|b| b[i]).collect()).collect();
    linalg::solve(f, &a, x, cols)
}

/// The subrepresentation with per-vertex bases `sub[v]`; errors if the
/// spaces are not closed under the arrows.
pub fn restrict(f: &PrimeField, m: &SampledRep, sub: &[Vec<Vec<u64>>]) -> Result<SampledRep> {
    let dims: DimVec = sub.iter().map(|b| b.len() as i64).collect();
    let mut mats = Vec::with_capacity(m.arrows.len());
    for (k, &(s, t)) in m.arrows.iter().enumerate() {
        let mut cols = Vec::with_capacity(sub[s].len());
        for b in &sub[s] {
            let image = mat_times_vec(f, &m.mats[k], b);
            let c = coords(f, &sub[t], &image)
                .ok_or_else(|| Error::Invariant("subspace family is not a subrepresentation".into()))?;
            cols.push(c);
        }
        let mat: Mat<u64> = (0..sub[t].len())
            .map(|i| cols.iter().map(|c| c[i]).collect())
            .collect();
        mats.push(mat);
    }
    Ok(SampledRep { dims, arrows: m.arrows.clone(), mats, certificates: BTreeMap::new() })
}

/// M / U for a subrepresentation given by per-vertex bases.
pub fn quotient(f: &PrimeField, m: &SampledRep, sub: &[Vec<Vec<u64>>]) -> Result<SampledRep> {
    let n = m.n();
    // complements from standard vectors outside the pivots of U
    let mut full: Vec<Vec<Vec<u64>>> = Vec::with_capacity(n);
    let mut ksub = Vec::with_capacity(n);
    for v in 0..n {
        let dv = m.dim(v);
        let mut mat: Mat<u64> = sub[v].clone();
        let piv = if mat.is_empty() { Vec::new() } else { linalg::rref(f, &mut mat, dv) };
        let mut basis = sub[v].clone();
        ksub.push(basis.len());
        for c in (0..dv).filter(|c| !piv.contains(c)) {
            let mut e = vec![0; dv];
            e[c] = 1;
            basis.push(e);
        }
        full.push(basis);
    }
    let dims: DimVec = (0..n).map(|v| (m.dim(v) - ksub[v]) as i64).collect();
    let mut mats = Vec::with_capacity(m.arrows.len());
    for (k, &(s, t)) in m.arrows.iter().enumerate() {
        let mut cols = Vec::new();
        for b in &full[s][ksub[s]..] {
            let image = mat_times_vec(f, &m.mats[k], b);
            let c = coords(f, &full[t], &image)
                .ok_or_else(|| Error::Invariant("complement basis does not span".into()))?;
            cols.push(c[ksub[t]..].to_vec());
        }
        let rows = dims[t] as usize;
        let mat: Mat<u64> = (0..rows).map(|i| cols.iter().map(|c| c[i]).collect()).collect();
        mats.push(mat);
    }
    Ok(SampledRep { dims, arrows: m.arrows.clone(), mats, certificates: BTreeMap::new() })
}

pub fn kernel(f: &PrimeField, m: &SampledRep, phi: &Hom) -> Result<SampledRep> {
    let sub: Vec<Vec<Vec<u64>>> = (0..m.n())
        .map(|v| {
            let dv = m.dim(v);
            if phi[v].is_empty() {
                (0..dv)
                    .map(|c| {
                        let mut e = vec![0; dv];
                        e[c] = 1;
                        e
                    })
                    .collect()
            } else {
                linalg::nullspace(f, &phi[v], dv)
            }
        })
        .collect();
    restrict(f, m, &sub)
}

pub(super) fn image_spaces(f: &PrimeField, m: &SampledRep, nrep: &SampledRep, phi: &Hom) -> Vec<Vec<Vec<u64>>> {
    (0..m.n())
        .map(|v| {
            let cols: Vec<Vec<u64>> = (0..m.dim(v))
                .map(|j| (0..nrep.dim(v)).map(|i| phi[v][i][j]).collect())
                .collect();
            span_basis(f, &cols, nrep.dim(v))
        })
        .collect()
}

pub fn image(f: &PrimeField, m: &SampledRep, nrep: &SampledRep, phi: &Hom) -> Result<SampledRep> {
    restrict(f, nrep, &image_spaces(f, m, nrep, phi))
}

pub fn cokernel(f: &PrimeField, m: &SampledRep, nrep: &SampledRep, phi: &Hom) -> Result<SampledRep> {
    quotient(f, nrep, &image_spaces(f, m, nrep, phi))
}

pub fn is_injective(f: &PrimeField, m: &SampledRep, phi: &Hom) -> bool {
    (0..m.n()).all(|v| m.dim(v) == 0 || linalg::rank(f, &phi[v], m.dim(v)) == m.dim(v))
}

/// Minimum of the module Ext dimension over independent certified samples.
pub fn oracle_ext(ctx: &EulerContext, a: &[i64], b: &[i64], trials: usize, cfg: &OracleConfig) -> Result<i64> {
    let f = cfg.field();
    let mut best = i64::MAX;
    for t in 0..trials.max(1) as u64 {
        let x = sample_generic(ctx, a, cfg, cfg.seed.wrapping_add(2 * t))?;
        let y = sample_generic(ctx, b, cfg, cfg.seed.wrapping_add(2 * t + 1))?;
        best = best.min(module_ext_dim(ctx, &f, &x, &y)?);
    }
    Ok(best)
}

/// Module Hom dimension between independent certified samples.
pub fn oracle_hom(ctx: &EulerContext, a: &[i64], b: &[i64], cfg: &OracleConfig) -> Result<i64> {
    let f = cfg.field();
    let x = sample_generic(ctx, a, cfg, cfg.seed)?;
    let y = sample_generic(ctx, b, cfg, cfg.seed.wrapping_add(1))?;
    Ok(module_hom_dim(&f, &x, &y) as i64)
}

/// Samples reused across many queries; sample k of d is drawn from seed
/// cfg.seed + k. Raw banks skip certification, so their answers are
/// independent of every combinatorial prediction.
pub struct SampleBank<'a> {
    ctx: &'a EulerContext,
    cfg: OracleConfig,
    certified: bool,
    samples: std::collections::HashMap<(DimVec, u64), SampledRep>,
}

impl<'a> SampleBank<'a> {
    pub fn new(ctx: &'a EulerContext, cfg: OracleConfig) -> Self {
        SampleBank { ctx, cfg, certified: true, samples: Default::default() }
    }

    pub fn raw(ctx: &'a EulerContext, cfg: OracleConfig) -> Self {
        SampleBank { ctx, cfg, certified: false, samples: Default::default() }
    }

    pub fn field(&self) -> PrimeField {
        self.cfg.field()
    }

    pub fn sample(&mut self, d: &[i64], k: u64) -> Result<SampledRep> {
        let key = (d.to_vec(), k);
        if let Some(m) = self.samples.get(&key) {
            return Ok(m.clone());
        }
        let seed = self.cfg.seed.wrapping_add(k);
        let m = if self.certified {
            sample_generic(self.ctx, d, &self.cfg, seed)?
        } else {
            sample_raw(self.ctx, d, &self.field(), &mut rng_for(seed, d, 0))?
        };
        self.samples.insert(key, m.clone());
        Ok(m)
    }

    /// Minimum Ext dimension over `trials` pairs of independent samples.
    pub fn ext(&mut self, a: &[i64], b: &[i64], trials: u64) -> Result<i64> {
        let f = self.field();
        let mut best = i64::MAX;
        for t in 0..trials.max(1) {
            let x = self.sample(a, 2 * t)?;
            let y = self.sample(b, 2 * t + 1)?;
            best = best.min(module_ext_dim(self.ctx, &f, &x, &y)?);
        }
        Ok(best)
    }

    pub fn hom(&mut self, a: &[i64], b: &[i64]) -> Result<i64> {
        let f = self.field();
        let x = self.sample(a, 0)?;
        let y = self.sample(b, 1)?;
        Ok(module_hom_dim(&f, &x, &y) as i64)
    }

    /// Summand dimensions of sample k over the algebraic closure.
    pub fn summands(&mut self, d: &[i64], k: u64) -> Result<Vec<DimVec>> {
        let f = self.field();
        let m = self.sample(d, k)?;
        let mut rng = rng_for(self.cfg.seed ^ 0x5eed, d, k);
        Ok(piece_dims(&decompose(&f, &m, &mut rng)?))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quiver::Quiver;

    fn ctx(name: &str) -> EulerContext {
        EulerContext::build(Quiver::named(name).unwrap()).unwrap()
    }

    #[test]
    fn a2_hom_and_ext() {
        let c = ctx("a2");
        let cfg = OracleConfig::default();
        assert_eq!(oracle_hom(&c, &[0, 1], &[1, 1], &cfg).unwrap(), 1);
        assert_eq!(oracle_hom(&c, &[1, 1], &[0, 1], &cfg).unwrap(), 0);
        assert_eq!(oracle_ext(&c, &[1, 0], &[0, 1], 2, &cfg).unwrap(), 1);
        assert_eq!(oracle_ext(&c, &[0, 1], &[1, 1], 2, &cfg).unwrap(), 0);
    }

    #[test]
    fn generic_samples_decompose_as_predicted() {
        let cfg = OracleConfig::default();
        let f = cfg.field();
        for (name, d, expect) in [
            ("a2", vec![1, 2], vec![vec![0, 1], vec![1, 1]]),
            ("kronecker", vec![2, 2], vec![vec![1, 1], vec![1, 1]]),
            ("kronecker", vec![3, 1], vec![vec![1, 0], vec![2, 1]]),
            ("kronecker", vec![1, 1], vec![vec![1, 1]]),
        ] {
            let c = ctx(name);
            let m = sample_generic(&c, &d, &cfg, 7).unwrap();
            let mut rng = rng_for(1, &d, 0);
            assert_eq!(piece_dims(&decompose(&f, &m, &mut rng).unwrap()), expect, "{name} {d:?}");
        }
    }

    #[test]
    fn kernels_images_cokernels() {
        let c = ctx("a2");
        let cfg = OracleConfig::default();
        let f = cfg.field();
        let s2 = sample_generic(&c, &[0, 1], &cfg, 1).unwrap();
        let p1 = sample_generic(&c, &[1, 1], &cfg, 2).unwrap();
        let basis = hom_basis(&f, &s2, &p1);
        assert_eq!(basis.len(), 1);
        assert!(is_injective(&f, &s2, &basis[0]));
        assert_eq!(kernel(&f, &s2, &basis[0]).unwrap().dims, vec![0, 0]);
        assert_eq!(image(&f, &s2, &p1, &basis[0]).unwrap().dims, vec![0, 1]);
        assert_eq!(cokernel(&f, &s2, &p1, &basis[0]).unwrap().dims, vec![1, 0]);
    }
}
