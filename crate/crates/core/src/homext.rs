//! Generic Hom and Ext between dimension vectors, root tests and bounded
//! root enumeration.
//!
//! The recursion works over generic quotient dimensions: `y` is a generic
//! quotient of `b` when `ext(b - y, y) = 0`, and `ext(a, b)` is the largest
//! value of `-<a, y>` over those quotients.

use std::sync::Arc;

use crate::error::{invariant, Error, Result};
use crate::quiver::{box_iter, is_nonneg, leq, sub, Class, DimVec, EulerContext};

impl EulerContext {
    fn check_dim(&self, d: &[i64]) -> Result<()> {
        self.check_len(d)?;
        if !is_nonneg(d) {
            return Err(Error::InvalidInput(format!(
                "expected a dimension vector, got {}",
                crate::quiver::fmt_vec(d)
            )));
        }
        Ok(())
    }

    /// Generic quotient dimensions of `b`, always containing 0 and `b`.
    pub(crate) fn quotients(&self, b: &[i64]) -> Arc<Vec<DimVec>> {
        if let Some(hit) = self.quotient_memo.read().expect("memo lock").get(b) {
            return hit.clone();
        }
        let mut out = Vec::new();
        for y in box_iter(b) {
            if self.is_generic_quotient(b, &y) {
                out.push(y);
            }
        }
        let out = Arc::new(out);
        self.quotient_memo
            .write()
            .expect("memo lock")
            .entry(b.to_vec())
            .or_insert(out)
            .clone()
    }

    fn is_generic_quotient(&self, b: &[i64], y: &[i64]) -> bool {
        let k = sub(b, y);
        if k.iter().all(|&x| x == 0) || y.iter().all(|&x| x == 0) {
            return true;
        }
        // Cheap necessary condition first: y itself is a quotient of y.
        if self.euler_unchecked(&k, y) < 0 {
            return false;
        }
        let qy = self.quotients(y);
        qy.iter().all(|z| self.euler_unchecked(&k, z) >= 0)
    }

    pub(crate) fn ext_unchecked(&self, a: &[i64], b: &[i64]) -> i64 {
        if a.iter().all(|&x| x == 0) || b.iter().all(|&x| x == 0) {
            return 0;
        }
        let key = (a.to_vec(), b.to_vec());
        if let Some(&v) = self.ext_memo.read().expect("memo lock").get(&key) {
            return v;
        }
        let qs = self.quotients(b);
        let v = qs
            .iter()
            .map(|y| -self.euler_unchecked(a, y))
            .max()
            .unwrap_or(0)
            .max(0);
        self.ext_memo.write().expect("memo lock").insert(key, v);
        v
    }

    pub fn ext_generic(&self, a: &[i64], b: &[i64]) -> Result<i64> {
        self.check_dim(a)?;
        self.check_dim(b)?;
        Ok(self.ext_unchecked(a, b))
    }

    pub fn hom_generic(&self, a: &[i64], b: &[i64]) -> Result<i64> {
        let e = self.ext_generic(a, b)?;
        let h = self.euler_unchecked(a, b) + e;
        invariant!(
            h >= 0,
            "negative generic hom between {} and {}",
            crate::quiver::fmt_vec(a),
            crate::quiver::fmt_vec(b)
        );
        Ok(h)
    }

    /// Generic subrepresentation dimensions of `a`, lexicographically sorted.
    pub fn generic_subs(&self, a: &[i64]) -> Result<Vec<DimVec>> {
        self.check_dim(a)?;
        let mut out: Vec<DimVec> = self.quotients(a).iter().map(|y| sub(a, y)).collect();
        out.sort();
        Ok(out)
    }

    pub fn is_real_root(&self, d: &[i64]) -> Result<bool> {
        self.check_len(d)?;
        Ok(is_nonneg(d) && d.iter().any(|&x| x != 0) && self.euler_unchecked(d, d) == 1)
    }

    pub fn is_schur_root(&self, d: &[i64]) -> Result<bool> {
        self.require_tame()?;
        let real = self.is_real_root(d)?;
        Ok(match (self.class(), self.delta()) {
            (Class::Euclidean, Some(delta)) => {
                if d == delta.as_slice() {
                    return Ok(true);
                }
                real && (self.euler_unchecked(delta, d) != 0 || leq(d, delta))
            }
            _ => real,
        })
    }

    /// Schur roots below `bound`; the only imaginary one admitted is delta.
    pub fn enumerate_real_schur_roots(&self, bound: &[i64]) -> Result<Vec<DimVec>> {
        self.require_tame()?;
        self.check_dim(bound)?;
        let mut out = Vec::new();
        for d in box_iter(bound) {
            if d.iter().any(|&x| x != 0) && self.is_schur_root(&d)? {
                out.push(d);
            }
        }
        Ok(out)
    }

    /// Dimension vectors of exceptional modules below `bound` (real Schur roots).
    pub fn exceptional_roots(&self, bound: &[i64]) -> Result<Vec<DimVec>> {
        let delta = self.delta().cloned();
        Ok(self
            .enumerate_real_schur_roots(bound)?
            .into_iter()
            .filter(|d| Some(d) != delta.as_ref())
            .collect())
    }

    /// Positive real roots with coordinate sum at most `l1`, grown upward
    /// from the simple roots by simple reflections, sorted by (sum, lex).
    pub fn real_roots_l1(&self, l1: i64) -> Vec<DimVec> {
        let n = self.n();
        let mut found: std::collections::BTreeSet<DimVec> = std::collections::BTreeSet::new();
        let mut queue: std::collections::VecDeque<DimVec> = (0..n).map(|i| crate::quiver::unit(n, i)).collect();
        while let Some(x) = queue.pop_front() {
            if x.iter().sum::<i64>() > l1 || !found.insert(x.clone()) {
                continue;
            }
            for i in 0..n {
                let e = crate::quiver::unit(n, i);
                let pairing = self.euler_unchecked(&x, &e) + self.euler_unchecked(&e, &x);
                let mut y = x.clone();
                y[i] -= pairing;
                if is_nonneg(&y) && y.iter().any(|&v| v != 0) && !found.contains(&y) {
                    queue.push_back(y);
                }
            }
        }
        let mut out: Vec<DimVec> = found.into_iter().collect();
        out.sort_by(|a, b| (a.iter().sum::<i64>(), a).cmp(&(b.iter().sum::<i64>(), b)));
        out
    }

    /// Real Schur roots with coordinate sum at most `l1`, sorted by
    /// (coordinate sum, lexicographic).
    pub fn exceptional_roots_l1(&self, l1: i64) -> Result<Vec<DimVec>> {
        self.require_tame()?;
        let mut out = Vec::new();
        for d in self.real_roots_l1(l1) {
            if self.is_schur_root(&d)? {
                out.push(d);
            }
        }
        Ok(out)
    }

    /// All positive roots of a Dynkin quiver.
    pub fn dynkin_positive_roots(&self) -> Result<Vec<DimVec>> {
        if self.class() != Class::Dynkin {
            return Err(Error::Unsupported("positive roots are finite only for Dynkin quivers".into()));
        }
        // Every positive root reduces to a simple root by unit steps, so the
        // maximal coordinate passes through every value below its maximum.
        let mut k = 1;
        loop {
            let roots: Vec<DimVec> = box_iter(&vec![k; self.n()])
                .filter(|d| d.iter().any(|&x| x != 0) && self.euler_unchecked(d, d) == 1)
                .collect();
            if !roots.iter().any(|d| d.iter().any(|&x| x == k)) {
                let mut roots: Vec<DimVec> = roots;
                roots.sort();
                return Ok(roots);
            }
            k += 1;
        }
    }
}
