//! Quivers, the Euler form and everything derived from it.

use std::collections::HashMap;
use std::sync::{Arc, OnceLock, RwLock};

use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{invariant, Error, Result};
use crate::linalg::{self, q_to_i64, q_vec, Rationals};

pub type DimVec = Vec<i64>;

pub const MAX_ENTRY: i64 = 1_000_000;

/// Vertices are 0-based internally and 1-based in every external format.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Quiver {
    n: usize,
    arrows: Vec<(usize, usize)>,
}

#[derive(Serialize, Deserialize)]
struct QuiverJson {
    vertices: usize,
    arrows: Vec<[usize; 2]>,
}

impl Quiver {
    /// Arrows are (source, target) pairs of 0-based vertices.
    pub fn new(n: usize, arrows: Vec<(usize, usize)>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidInput("a quiver needs at least one vertex".into()));
        }
        for &(s, t) in &arrows {
            if s >= n || t >= n {
                return Err(Error::InvalidInput(format!(
                    "arrow ({}, {}) references a vertex outside 1..{}",
                    s + 1,
                    t + 1,
                    n
                )));
            }
            if s == t {
                return Err(Error::InvalidInput(format!("loop at vertex {}", s + 1)));
            }
        }
        let q = Quiver { n, arrows };
        if q.topological_order().is_none() {
            return Err(Error::InvalidInput("quiver has an oriented cycle".into()));
        }
        Ok(q)
    }

    /// Builds from 1-based arrow pairs.
    pub fn from_one_based(n: usize, arrows: &[(usize, usize)]) -> Result<Self> {
        if arrows.iter().any(|&(s, t)| s == 0 || t == 0) {
            return Err(Error::InvalidInput("vertices are numbered from 1".into()));
        }
        Quiver::new(n, arrows.iter().map(|&(s, t)| (s - 1, t - 1)).collect())
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let raw: QuiverJson = serde_json::from_str(text)
            .map_err(|e| Error::InvalidInput(format!("quiver JSON: {e}")))?;
        let arrows: Vec<(usize, usize)> = raw.arrows.iter().map(|a| (a[0], a[1])).collect();
        Quiver::from_one_based(raw.vertices, &arrows)
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        let mut arrows: Vec<[usize; 2]> = self.arrows.iter().map(|&(s, t)| [s + 1, t + 1]).collect();
        arrows.sort();
        serde_json::to_value(QuiverJson { vertices: self.n, arrows }).expect("serializable")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn arrows(&self) -> &[(usize, usize)] {
        &self.arrows
    }

    pub fn topological_order(&self) -> Option<Vec<usize>> {
        let mut indeg = vec![0usize; self.n];
        for &(_, t) in &self.arrows {
            indeg[t] += 1;
        }
        let mut stack: Vec<usize> = (0..self.n).filter(|&v| indeg[v] == 0).rev().collect();
        let mut order = Vec::with_capacity(self.n);
        while let Some(v) = stack.pop() {
            order.push(v);
            for &(s, t) in &self.arrows {
                if s == v {
                    indeg[t] -= 1;
                    if indeg[t] == 0 {
                        stack.push(t);
                    }
                }
            }
        }
        (order.len() == self.n).then_some(order)
    }

    pub fn is_connected(&self) -> bool {
        let mut seen = vec![false; self.n];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for &(s, t) in &self.arrows {
                for (a, b) in [(s, t), (t, s)] {
                    if a == v && !seen[b] {
                        seen[b] = true;
                        stack.push(b);
                    }
                }
            }
        }
        seen.into_iter().all(|x| x)
    }

    /// Number of paths from i to j, trivial path included.
    pub fn path_counts(&self) -> Vec<Vec<i64>> {
        let order = self.topological_order().expect("acyclic by construction");
        let mut paths = vec![vec![0i64; self.n]; self.n];
        for i in 0..self.n {
            paths[i][i] = 1;
            for &v in &order {
                if paths[i][v] == 0 {
                    continue;
                }
                for &(s, t) in &self.arrows {
                    if s == v {
                        paths[i][t] += paths[i][v];
                    }
                }
            }
        }
        paths
    }

    pub fn named(name: &str) -> Option<Quiver> {
        let (n, arrows): (usize, Vec<(usize, usize)>) = match name {
            "a2" => (2, vec![(1, 2)]),
            "a3" => (3, vec![(1, 2), (2, 3)]),
            "kronecker" => (2, vec![(1, 2), (1, 2)]),
            "sq" => (4, vec![(1, 2), (2, 4), (1, 3), (3, 4)]),
            "sq-alt" => (4, vec![(2, 1), (2, 4), (3, 1), (3, 4)]),
            "sq-source" => (4, vec![(1, 2), (2, 4), (3, 1), (3, 4)]),
            "d4tilde" => (5, vec![(1, 5), (2, 5), (3, 5), (4, 5)]),
            "a2tilde21" => (3, vec![(2, 1), (3, 1), (3, 2)]),
            "a3tilde31" => (4, vec![(1, 2), (2, 3), (3, 4), (1, 4)]),
            "e6tilde" => (7, vec![(1, 2), (2, 3), (4, 3), (5, 4), (6, 3), (7, 6)]),
            _ => return None,
        };
        Quiver::from_one_based(n, &arrows).ok()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Class {
    Dynkin,
    Euclidean,
    Wild,
}

/// Immutable analysis context; the interior caches are pure memo tables.
pub struct EulerContext {
    quiver: Quiver,
    euler: Vec<Vec<i64>>,
    coxeter: Vec<Vec<i64>>,
    coxeter_inv: Vec<Vec<i64>>,
    class: Class,
    delta: Option<DimVec>,
    projectives: Vec<DimVec>,
    pub(crate) quotient_memo: RwLock<HashMap<DimVec, Arc<Vec<DimVec>>>>,
    pub(crate) ext_memo: RwLock<HashMap<(DimVec, DimVec), i64>>,
    pub(crate) regular: OnceLock<Arc<crate::regular::RegularStructure>>,
    pub(crate) scan_roots: OnceLock<Vec<DimVec>>,
    pub(crate) simples_memo: RwLock<HashMap<Vec<DimVec>, Vec<DimVec>>>,
    pub(crate) descriptor_memo: RwLock<HashMap<DimVec, crate::stability::SSDescriptor>>,
    oracle_config: crate::oracle::OracleConfig,
}

impl std::fmt::Debug for EulerContext {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("EulerContext")
            .field("quiver", &self.quiver)
            .field("class", &self.class)
            .field("delta", &self.delta)
            .finish()
    }
}

fn to_int_matrix(m: &[Vec<BigRational>]) -> Result<Vec<Vec<i64>>> {
    m.iter()
        .map(|row| {
            row.iter()
                .map(|x| q_to_i64(x).ok_or_else(|| Error::Invariant("non-integral Coxeter entry".into())))
                .collect()
        })
        .collect()
}

/// Positive semidefiniteness and rank of a symmetric integer matrix by
/// symmetric Gaussian elimination on positive diagonal pivots.
fn psd_rank(s: &[Vec<i64>]) -> (bool, usize) {
    let n = s.len();
    let mut m: Vec<Vec<BigRational>> = s.iter().map(|r| q_vec(r)).collect();
    let mut active: Vec<usize> = (0..n).collect();
    let mut rank = 0;
    loop {
        let Some(pos) = active.iter().position(|&i| m[i][i].is_positive()) else {
            break;
        };
        let i = active.remove(pos);
        let piv = m[i][i].clone();
        for &j in &active {
            for &k in &active {
                let t = &m[j][i] * &m[i][k] / &piv;
                m[j][k] = &m[j][k] - t;
            }
        }
        rank += 1;
    }
    for &j in &active {
        for &k in &active {
            if !m[j][k].is_zero() {
                return (false, rank);
            }
        }
    }
    (true, rank)
}

impl EulerContext {
    pub fn build(quiver: Quiver) -> Result<Self> {
        let n = quiver.n;
        let mut euler = vec![vec![0i64; n]; n];
        for (i, row) in euler.iter_mut().enumerate() {
            row[i] = 1;
        }
        for &(s, t) in &quiver.arrows {
            euler[s][t] -= 1;
        }
        let f = Rationals;
        let e_q: Vec<Vec<BigRational>> = euler.iter().map(|r| q_vec(r)).collect();
        let e_inv = linalg::inverse(&f, &e_q)
            .ok_or_else(|| Error::Invariant("Euler matrix is singular".into()))?;
        let e_t = linalg::transpose(&e_q, n, n);
        let mut c_q = linalg::mat_mul(&f, &e_inv, &e_t, n, n);
        for row in c_q.iter_mut() {
            for x in row.iter_mut() {
                *x = -x.clone();
            }
        }
        let coxeter = to_int_matrix(&c_q)?;
        let c_inv_q = linalg::inverse(&f, &c_q)
            .ok_or_else(|| Error::Invariant("Coxeter matrix is singular".into()))?;
        let coxeter_inv = to_int_matrix(&c_inv_q)?;

        let paths = quiver.path_counts();
        let e_inv_int = to_int_matrix(&e_inv)?;
        invariant!(
            paths == e_inv_int,
            "projective dimension vectors disagree with the inverse Euler matrix"
        );

        let sym: Vec<Vec<i64>> = (0..n)
            .map(|i| (0..n).map(|j| euler[i][j] + euler[j][i]).collect())
            .collect();
        let (psd, rank) = psd_rank(&sym);
        let class = if psd && rank == n {
            Class::Dynkin
        } else if psd && rank + 1 == n {
            Class::Euclidean
        } else {
            Class::Wild
        };
        let delta = if class == Class::Euclidean {
            let sym_q: Vec<Vec<BigRational>> = sym.iter().map(|r| q_vec(r)).collect();
            let kernel = linalg::nullspace(&f, &sym_q, n);
            invariant!(kernel.len() == 1, "radical of the quadratic form is not of rank one");
            let prim = linalg::primitive_integer(&kernel[0]);
            let mut d: Vec<i64> = prim
                .iter()
                .map(|x| i64::try_from(x.clone()).map_err(|_| Error::Invariant("null root overflow".into())))
                .collect::<Result<_>>()?;
            if d.iter().any(|&x| x < 0) {
                for x in d.iter_mut() {
                    *x = -*x;
                }
            }
            invariant!(d.iter().all(|&x| x >= 0), "radical generator has mixed signs");
            Some(d)
        } else {
            None
        };

        let ctx = EulerContext {
            projectives: paths,
            quiver,
            euler,
            coxeter,
            coxeter_inv,
            class,
            delta,
            quotient_memo: RwLock::new(HashMap::new()),
            ext_memo: RwLock::new(HashMap::new()),
            regular: OnceLock::new(),
            scan_roots: OnceLock::new(),
            simples_memo: RwLock::new(HashMap::new()),
            descriptor_memo: RwLock::new(HashMap::new()),
            oracle_config: crate::oracle::OracleConfig::default(),
        };
        ctx.check_coxeter_identity()?;
        Ok(ctx)
    }

    /// The defining identity <x,y> = -<y,Cx> on the standard basis.
    fn check_coxeter_identity(&self) -> Result<()> {
        let n = self.n();
        for i in 0..n {
            let x = unit(n, i);
            let cx = self.coxeter_apply(&x)?;
            for j in 0..n {
                let y = unit(n, j);
                invariant!(
                    self.euler_form(&x, &y)? == -self.euler_form(&y, &cx)?,
                    "Coxeter identity fails on basis pair ({}, {})",
                    i + 1,
                    j + 1
                );
            }
        }
        if let Some(d) = &self.delta {
            invariant!(self.coxeter_apply(d)? == *d, "Coxeter transformation moves the null root");
        }
        Ok(())
    }

    /// Seed and prime used whenever a descriptor needs the sampled-module
    /// closure. Clears memoized descriptors.
    pub fn set_oracle_config(&mut self, cfg: crate::oracle::OracleConfig) {
        self.oracle_config = cfg;
        self.simples_memo.write().expect("memo lock").clear();
        self.descriptor_memo.write().expect("memo lock").clear();
    }

    pub fn oracle_config(&self) -> &crate::oracle::OracleConfig {
        &self.oracle_config
    }

    pub fn quiver(&self) -> &Quiver {
        &self.quiver
    }

    pub fn n(&self) -> usize {
        self.quiver.n
    }

    pub fn euler_matrix(&self) -> &[Vec<i64>] {
        &self.euler
    }

    pub fn coxeter_matrix(&self) -> &[Vec<i64>] {
        &self.coxeter
    }

    pub fn class(&self) -> Class {
        self.class
    }

    pub fn delta(&self) -> Option<&DimVec> {
        self.delta.as_ref()
    }

    /// Dimension vector of the indecomposable projective at vertex i.
    pub fn projective(&self, i: usize) -> &DimVec {
        &self.projectives[i]
    }

    /// Length check plus the magnitude bound that keeps i64 arithmetic exact.
    pub fn check_len(&self, d: &[i64]) -> Result<()> {
        if d.len() != self.n() {
            return Err(Error::InvalidInput(format!(
                "vector of length {} for a quiver with {} vertices",
                d.len(),
                self.n()
            )));
        }
        if d.iter().any(|x| x.abs() > MAX_ENTRY) {
            return Err(Error::InvalidInput(format!("entries are limited to |x| <= {MAX_ENTRY}")));
        }
        Ok(())
    }

    pub fn euler_form(&self, d: &[i64], e: &[i64]) -> Result<i64> {
        self.check_len(d)?;
        self.check_len(e)?;
        Ok(self.euler_unchecked(d, e))
    }

    pub(crate) fn euler_unchecked(&self, d: &[i64], e: &[i64]) -> i64 {
        let mut s: i64 = d.iter().zip(e).map(|(a, b)| a * b).sum();
        for &(i, j) in &self.quiver.arrows {
            s -= d[i] * e[j];
        }
        s
    }

    pub fn quadratic_form(&self, d: &[i64]) -> Result<i64> {
        self.euler_form(d, d)
    }

    pub fn coxeter_apply(&self, d: &[i64]) -> Result<DimVec> {
        self.check_len(d)?;
        Ok(apply(&self.coxeter, d))
    }

    pub fn coxeter_inverse_apply(&self, d: &[i64]) -> Result<DimVec> {
        self.check_len(d)?;
        Ok(apply(&self.coxeter_inv, d))
    }

    pub fn defect(&self, d: &[i64]) -> Result<i64> {
        let delta = self
            .delta
            .as_ref()
            .ok_or_else(|| Error::Unsupported("defect requires a Euclidean quiver".into()))?;
        self.euler_form(delta, d)
    }

    /// Errors unless the quiver is connected Dynkin or Euclidean.
    pub fn require_tame(&self) -> Result<()> {
        if self.class == Class::Wild {
            return Err(Error::Unsupported("wild quiver".into()));
        }
        if !self.quiver.is_connected() {
            return Err(Error::Unsupported("disconnected quiver".into()));
        }
        Ok(())
    }

    pub fn require_euclidean(&self) -> Result<&DimVec> {
        self.require_tame()?;
        self.delta
            .as_ref()
            .ok_or_else(|| Error::Unsupported("operation requires a Euclidean quiver".into()))
    }
}

pub fn unit(n: usize, i: usize) -> DimVec {
    let mut v = vec![0; n];
    v[i] = 1;
    v
}

pub(crate) fn apply(m: &[Vec<i64>], d: &[i64]) -> DimVec {
    m.iter().map(|row| row.iter().zip(d).map(|(a, b)| a * b).sum()).collect()
}

pub fn is_nonneg(d: &[i64]) -> bool {
    d.iter().all(|&x| x >= 0)
}

pub fn leq(a: &[i64], b: &[i64]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

pub fn add(a: &[i64], b: &[i64]) -> DimVec {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn sub(a: &[i64], b: &[i64]) -> DimVec {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn scale(a: &[i64], k: i64) -> DimVec {
    a.iter().map(|x| x * k).collect()
}

/// All vectors v with 0 <= v <= bound, in lexicographic order.
pub fn box_iter(bound: &[i64]) -> impl Iterator<Item = DimVec> + '_ {
    let n = bound.len();
    let empty = bound.iter().any(|&b| b < 0);
    let mut cur: Option<DimVec> = if empty { None } else { Some(vec![0; n]) };
    std::iter::from_fn(move || {
        let out = cur.clone()?;
        let mut next = out.clone();
        let mut k = n;
        loop {
            if k == 0 {
                cur = None;
                break;
            }
            k -= 1;
            if next[k] < bound[k] {
                next[k] += 1;
                for x in next.iter_mut().skip(k + 1) {
                    *x = 0;
                }
                cur = Some(next);
                break;
            }
        }
        Some(out)
    })
}

pub fn fmt_vec(v: &[i64]) -> String {
    let parts: Vec<String> = v.iter().map(|x| x.to_string()).collect();
    format!("({})", parts.join(","))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx(name: &str) -> EulerContext {
        EulerContext::build(Quiver::named(name).unwrap()).unwrap()
    }

    #[test]
    fn kronecker_context() {
        let c = ctx("kronecker");
        assert_eq!(c.euler_matrix(), &[vec![1, -2], vec![0, 1]]);
        assert_eq!(c.class(), Class::Euclidean);
        assert_eq!(c.delta(), Some(&vec![1, 1]));
        assert_eq!(c.euler_form(&[1, 1], &[3, 1]).unwrap(), 2);
        assert_eq!(c.quadratic_form(&[2, 1]).unwrap(), 1);
    }

    #[test]
    fn a2_context() {
        let c = ctx("a2");
        assert_eq!(c.euler_matrix(), &[vec![1, -1], vec![0, 1]]);
        assert_eq!(c.class(), Class::Dynkin);
        assert!(c.delta().is_none());
        assert_eq!(c.euler_form(&[1, 1], &[0, 1]).unwrap(), 0);
        let mut v = vec![2, -5];
        let start = v.clone();
        for _ in 0..3 {
            v = c.coxeter_apply(&v).unwrap();
        }
        assert_eq!(v, start);
    }

    #[test]
    fn sq_context() {
        let c = ctx("sq");
        assert_eq!(c.class(), Class::Euclidean);
        assert_eq!(c.delta(), Some(&vec![1, 1, 1, 1]));
        assert_eq!(c.coxeter_apply(&[0, 1, 0, 0]).unwrap(), vec![1, 0, 1, 1]);
        assert_eq!(c.quadratic_form(&[1, 0, 0, 1]).unwrap(), 2);
        assert_eq!(c.defect(&[0, 0, 0, 1]).unwrap(), -1);
        assert_eq!(c.defect(&[1, 0, 0, 0]).unwrap(), 1);
        assert_eq!(c.defect(&[1, 1, 1, 1]).unwrap(), 0);
        assert_eq!(c.projective(0), &vec![1, 1, 1, 2]);
    }

    #[test]
    fn rejects_cycles_and_loops() {
        assert!(Quiver::from_one_based(2, &[(1, 2), (2, 1)]).is_err());
        assert!(Quiver::from_one_based(2, &[(1, 1)]).is_err());
        assert!(Quiver::from_one_based(2, &[(1, 3)]).is_err());
    }

    #[test]
    fn json_round_trip_sorts_arrows() {
        let q = Quiver::from_json(r#"{"vertices": 3, "arrows": [[2,3],[1,2]]}"#).unwrap();
        assert_eq!(
            q.to_json_value().to_string(),
            r#"{"arrows":[[1,2],[2,3]],"vertices":3}"#
        );
    }

    #[test]
    fn wild_three_arrow_kronecker() {
        let c = EulerContext::build(Quiver::from_one_based(2, &[(1, 2), (1, 2), (1, 2)]).unwrap()).unwrap();
        assert_eq!(c.class(), Class::Wild);
    }

    #[test]
    fn box_iteration_is_lexicographic() {
        let all: Vec<DimVec> = box_iter(&[1, 2]).collect();
        assert_eq!(all.len(), 6);
        assert_eq!(all[0], vec![0, 0]);
        assert_eq!(all[1], vec![0, 1]);
        assert_eq!(all[5], vec![1, 2]);
        assert_eq!(box_iter(&[-1]).count(), 0);
    }
}
