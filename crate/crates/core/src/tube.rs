//! The nilpotent cyclic-quiver model of a stable tube of rank r.
//!
//! Vertices are Z/r with arrows i -> i+1. The arc (a, l) has basis v_0..v_{l-1}
//! with v_m at vertex a-m and v_m -> v_{m-1}, v_0 -> 0; its socle sits at a
//! and the AR translate shifts every index by +1.

use std::collections::{BTreeSet, HashMap};
use std::sync::{OnceLock, RwLock};

use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::linalg::{self, Mat, Rationals};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct ArcPos {
    pub socle: usize,
    pub len: usize,
}

impl ArcPos {
    pub fn new(r: usize, socle: usize, len: usize) -> Self {
        assert!(len >= 1, "arcs have positive length");
        ArcPos { socle: socle % r, len }
    }

    pub fn tau(&self, r: usize) -> ArcPos {
        ArcPos::new(r, self.socle + 1, self.len)
    }

    /// Quasi-simple indices from the socle upward.
    pub fn factors(&self, r: usize) -> Vec<usize> {
        (0..self.len).map(|m| (self.socle + r * self.len - m) % r).collect()
    }

    pub fn top(&self, r: usize) -> usize {
        (self.socle + r * self.len - (self.len - 1)) % r
    }
}

/// A finite-dimensional nilpotent representation with exact rational maps.
#[derive(Debug, Clone)]
pub struct CycRep {
    pub r: usize,
    pub dims: Vec<usize>,
    /// maps[i] : vertex i -> vertex i+1, shape dims[i+1] x dims[i].
    pub maps: Vec<Mat<BigRational>>,
}

fn zero_mat(rows: usize, cols: usize) -> Mat<BigRational> {
    vec![vec![BigRational::zero(); cols]; rows]
}

impl CycRep {
    pub fn arc(r: usize, arc: ArcPos) -> Self {
        let mut dims = vec![0; r];
        // position of v_m inside its vertex space
        let mut slot = Vec::with_capacity(arc.len);
        for m in 0..arc.len {
            let v = (arc.socle + r * arc.len - m) % r;
            slot.push((v, dims[v]));
            dims[v] += 1;
        }
        let mut maps: Vec<Mat<BigRational>> = (0..r).map(|i| zero_mat(dims[(i + 1) % r], dims[i])).collect();
        for m in 1..arc.len {
            let (v, s) = slot[m];
            let (w, t) = slot[m - 1];
            debug_assert_eq!((v + 1) % r, w);
            maps[v][t][s] = BigRational::one();
        }
        CycRep { r, dims, maps }
    }

    pub fn direct_sum(parts: &[CycRep]) -> Self {
        let r = parts[0].r;
        let dims: Vec<usize> = (0..r).map(|i| parts.iter().map(|p| p.dims[i]).sum()).collect();
        let mut maps: Vec<Mat<BigRational>> = (0..r).map(|i| zero_mat(dims[(i + 1) % r], dims[i])).collect();
        let mut off = vec![0usize; r];
        for p in parts {
            for i in 0..r {
                let j = (i + 1) % r;
                for (a, row) in p.maps[i].iter().enumerate() {
                    for (b, x) in row.iter().enumerate() {
                        maps[i][off[j] + a][off[i] + b] = x.clone();
                    }
                }
            }
            for i in 0..r {
                off[i] += p.dims[i];
            }
        }
        CycRep { r, dims, maps }
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().sum()
    }

    /// Composite of `m` arrows ending at vertex `a`.
    fn path_map(&self, m: usize, a: usize) -> Mat<BigRational> {
        let f = Rationals;
        let r = self.r;
        let start = (a + r * (m + 1) - m) % r;
        let mut acc = linalg::identity(&f, self.dims[start]);
        let mut v = start;
        for _ in 0..m {
            acc = linalg::mat_mul(&f, &self.maps[v], &acc, self.dims[v], self.dims[start]);
            v = (v + 1) % r;
        }
        acc
    }
}

/// A morphism is a matrix per vertex, shape dims_Y[i] x dims_X[i].
pub type Morphism = Vec<Mat<BigRational>>;

/// Basis of Hom(X, Y): nullspace of the intertwining system.
pub fn hom_basis(x: &CycRep, y: &CycRep) -> Vec<Morphism> {
    let r = x.r;
    let mut offsets = Vec::with_capacity(r);
    let mut total = 0;
    for i in 0..r {
        offsets.push(total);
        total += y.dims[i] * x.dims[i];
    }
    let var = |i: usize, row: usize, col: usize| offsets[i] + row * x.dims[i] + col;
    let mut eqs: Vec<Vec<BigRational>> = Vec::new();
    for i in 0..r {
        let j = (i + 1) % r;
        // (Y_i phi_i - phi_j X_i)[p][q] = 0 with p < dims_Y[j], q < dims_X[i].
        for p in 0..y.dims[j] {
            for q in 0..x.dims[i] {
                let mut row = vec![BigRational::zero(); total];
                for k in 0..y.dims[i] {
                    let c = &y.maps[i][p][k];
                    if !c.is_zero() {
                        row[var(i, k, q)] += c;
                    }
                }
                for k in 0..x.dims[j] {
                    let c = &x.maps[i][k][q];
                    if !c.is_zero() {
                        row[var(j, p, k)] -= c;
                    }
                }
                eqs.push(row);
            }
        }
    }
    let ns = if eqs.is_empty() {
        (0..total)
            .map(|t| (0..total).map(|s| if s == t { BigRational::one() } else { BigRational::zero() }).collect())
            .collect()
    } else {
        linalg::nullspace(&Rationals, &eqs, total)
    };
    ns.into_iter()
        .map(|v| {
            (0..r)
                .map(|i| {
                    (0..y.dims[i])
                        .map(|row| (0..x.dims[i]).map(|col| v[var(i, row, col)].clone()).collect())
                        .collect()
                })
                .collect()
        })
        .collect()
}

type HomKey = (usize, usize, usize, usize, usize);

fn hom_cache() -> &'static RwLock<HashMap<HomKey, usize>> {
    static CACHE: OnceLock<RwLock<HashMap<HomKey, usize>>> = OnceLock::new();
    CACHE.get_or_init(|| RwLock::new(HashMap::new()))
}

pub fn hom(r: usize, x: ArcPos, y: ArcPos) -> usize {
    let key = (r, x.socle, x.len, y.socle, y.len);
    if let Some(&v) = hom_cache().read().expect("cache lock").get(&key) {
        return v;
    }
    let v = hom_basis(&CycRep::arc(r, x), &CycRep::arc(r, y)).len();
    hom_cache().write().expect("cache lock").insert(key, v);
    v
}

/// Ext(X, Y) = D Hom(Y, tau X).
pub fn ext(r: usize, x: ArcPos, y: ArcPos) -> usize {
    hom(r, y, x.tau(r))
}

/// Column basis of a subspace, kept as a list of vectors.
type Subspace = Vec<Vec<BigRational>>;

fn span_rank(vectors: &Subspace, dim: usize) -> usize {
    if vectors.is_empty() || dim == 0 {
        return 0;
    }
    linalg::rank(&Rationals, vectors, dim)
}

fn apply(m: &Mat<BigRational>, v: &[BigRational]) -> Vec<BigRational> {
    linalg::mat_vec(&Rationals, m, v)
}

/// Arc multiplicities of the subquotient V/U of `amb`, from path-map ranks.
fn decompose_subquotient(amb: &CycRep, v: &[Subspace], u: &[Subspace]) -> BTreeSet<(ArcPos, usize)> {
    let r = amb.r;
    let total: usize = (0..r).map(|i| span_rank(&v[i], amb.dims[i]) - span_rank(&u[i], amb.dims[i])).sum();
    let rho = |m: usize, a: usize| -> usize {
        let a = a % r;
        let src = (a + r * (m + 1) - m) % r;
        let p = amb.path_map(m, a);
        let mut gens: Subspace = v[src].iter().map(|x| apply(&p, x)).collect();
        gens.extend(u[a].iter().cloned());
        span_rank(&gens, amb.dims[a]) - span_rank(&u[a], amb.dims[a])
    };
    let mut out = BTreeSet::new();
    let mut seen = 0;
    for a in 0..r {
        for l in 1..=total {
            let n = (rho(l - 1, a) + rho(l + 1, a + 1)) as i64 - (rho(l, a) + rho(l, a + 1)) as i64;
            assert!(n >= 0, "negative arc multiplicity");
            if n > 0 {
                out.insert((ArcPos::new(r, a, l), n as usize));
                seen += n as usize * l;
            }
        }
    }
    assert_eq!(seen, total, "arc decomposition misses dimensions");
    out
}

fn full_space(dim: usize) -> Subspace {
    (0..dim)
        .map(|t| (0..dim).map(|s| if s == t { BigRational::one() } else { BigRational::zero() }).collect())
        .collect()
}

pub fn kernel_arcs(x: &CycRep, phi: &Morphism) -> BTreeSet<(ArcPos, usize)> {
    let v: Vec<Subspace> = (0..x.r).map(|i| {
        if x.dims[i] == 0 { vec![] } else { linalg::nullspace(&Rationals, &phi[i], x.dims[i]) }
    }).collect();
    let u: Vec<Subspace> = vec![vec![]; x.r];
    decompose_subquotient(x, &v, &u)
}

fn image(x: &CycRep, phi: &Morphism) -> Vec<Subspace> {
    (0..x.r)
        .map(|i| full_space(x.dims[i]).iter().map(|e| apply(&phi[i], e)).collect())
        .collect()
}

pub fn image_arcs(x: &CycRep, y: &CycRep, phi: &Morphism) -> BTreeSet<(ArcPos, usize)> {
    decompose_subquotient(y, &image(x, phi), &vec![vec![]; y.r])
}

pub fn cokernel_arcs(x: &CycRep, y: &CycRep, phi: &Morphism) -> BTreeSet<(ArcPos, usize)> {
    let v: Vec<Subspace> = (0..y.r).map(|i| full_space(y.dims[i])).collect();
    decompose_subquotient(y, &v, &image(x, phi))
}

pub fn decompose(x: &CycRep) -> BTreeSet<(ArcPos, usize)> {
    let v: Vec<Subspace> = (0..x.r).map(|i| full_space(x.dims[i])).collect();
    decompose_subquotient(x, &v, &vec![vec![]; x.r])
}

/// Middle term of a non-split extension 0 -> Y -> E -> X -> 0, or None when
/// Ext(X, Y) = 0. The cocycle is the first elementary arrow matrix that is
/// not a coboundary.
pub fn extension_middle(x: &CycRep, y: &CycRep) -> Option<CycRep> {
    let r = x.r;
    let f = Rationals;
    // Coboundary map: (phi_i) -> (Y_i phi_i - phi_{i+1} X_i) on each arrow.
    let mut arrow_off = Vec::with_capacity(r);
    let mut arrow_total = 0;
    for i in 0..r {
        arrow_off.push(arrow_total);
        arrow_total += y.dims[(i + 1) % r] * x.dims[i];
    }
    if arrow_total == 0 {
        return None;
    }
    let mut image_cols: Subspace = Vec::new();
    for i in 0..r {
        for row in 0..y.dims[i] {
            for col in 0..x.dims[i] {
                let mut phi: Morphism = (0..r).map(|k| zero_mat(y.dims[k], x.dims[k])).collect();
                phi[i][row][col] = BigRational::one();
                let mut img = vec![BigRational::zero(); arrow_total];
                for a in 0..r {
                    let b = (a + 1) % r;
                    let left = linalg::mat_mul(&f, &y.maps[a], &phi[a], y.dims[a], x.dims[a]);
                    let right = linalg::mat_mul(&f, &phi[b], &x.maps[a], x.dims[b], x.dims[a]);
                    for p in 0..y.dims[b] {
                        for q in 0..x.dims[a] {
                            img[arrow_off[a] + p * x.dims[a] + q] = &left[p][q] - &right[p][q];
                        }
                    }
                }
                image_cols.push(img);
            }
        }
    }
    let base_rank = span_rank(&image_cols, arrow_total);
    if base_rank == arrow_total {
        return None;
    }
    let mut cocycle = None;
    for t in 0..arrow_total {
        let mut e = vec![BigRational::zero(); arrow_total];
        e[t] = BigRational::one();
        let mut trial = image_cols.clone();
        trial.push(e.clone());
        if span_rank(&trial, arrow_total) > base_rank {
            cocycle = Some(e);
            break;
        }
    }
    let eta = cocycle.expect("a non-coboundary elementary cocycle exists");
    let dims: Vec<usize> = (0..r).map(|i| y.dims[i] + x.dims[i]).collect();
    let maps: Vec<Mat<BigRational>> = (0..r)
        .map(|a| {
            let b = (a + 1) % r;
            let mut m = zero_mat(dims[b], dims[a]);
            for p in 0..y.dims[b] {
                for q in 0..y.dims[a] {
                    m[p][q] = y.maps[a][p][q].clone();
                }
                for q in 0..x.dims[a] {
                    m[p][y.dims[a] + q] = eta[arrow_off[a] + p * x.dims[a] + q].clone();
                }
            }
            for p in 0..x.dims[b] {
                for q in 0..x.dims[a] {
                    m[y.dims[b] + p][y.dims[a] + q] = x.maps[a][p][q].clone();
                }
            }
            m
        })
        .collect();
    Some(CycRep { r, dims, maps })
}

fn combine(basis: &[Morphism], coeffs: &[i64]) -> Morphism {
    let mut out = basis[0].clone();
    for (i, row) in out.iter_mut().enumerate() {
        for (p, line) in row.iter_mut().enumerate() {
            for (q, x) in line.iter_mut().enumerate() {
                *x = basis
                    .iter()
                    .zip(coeffs)
                    .map(|(b, &c)| &b[i][p][q] * BigRational::from_integer(c.into()))
                    .sum();
            }
        }
    }
    out
}

/// Fixed coefficient patterns used in place of random hom combinations.
fn combinations(k: usize) -> Vec<Vec<i64>> {
    let mut out: Vec<Vec<i64>> = (0..k).map(|i| (0..k).map(|j| (i == j) as i64).collect()).collect();
    if k > 1 {
        out.push((0..k).map(|j| j as i64 + 1).collect());
        out.push((0..k).map(|j| if j % 2 == 0 { 1 } else { -2 }).collect());
    }
    out
}

/// Whether the additive closure of `set` is closed under kernels, images,
/// cokernels and extensions. Maps are tested between objects that are sums
/// of at most two members.
pub fn is_thick(r: usize, set: &BTreeSet<ArcPos>) -> bool {
    let members: Vec<ArcPos> = set.iter().copied().collect();
    let inside = |arcs: &BTreeSet<(ArcPos, usize)>| arcs.iter().all(|(a, _)| set.contains(a));
    let mut objects: Vec<CycRep> = members.iter().map(|&a| CycRep::arc(r, a)).collect();
    for i in 0..members.len() {
        for j in i..members.len() {
            objects.push(CycRep::direct_sum(&[CycRep::arc(r, members[i]), CycRep::arc(r, members[j])]));
        }
    }
    let singles = members.len();
    for (xi, x) in objects.iter().enumerate() {
        for (yi, y) in objects.iter().enumerate() {
            if xi >= singles && yi >= singles {
                continue;
            }
            let basis = hom_basis(x, y);
            if basis.is_empty() {
                continue;
            }
            for c in combinations(basis.len()) {
                let phi = combine(&basis, &c);
                if !inside(&kernel_arcs(x, &phi)) || !inside(&image_arcs(x, y, &phi)) || !inside(&cokernel_arcs(x, y, &phi)) {
                    return false;
                }
            }
        }
    }
    for &a in &members {
        for &b in &members {
            if ext(r, a, b) > 0 {
                let mid = extension_middle(&CycRep::arc(r, a), &CycRep::arc(r, b)).expect("nonzero ext");
                if !inside(&decompose(&mid)) {
                    return false;
                }
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    fn arc(r: usize, a: usize, l: usize) -> ArcPos {
        ArcPos::new(r, a, l)
    }

    #[test]
    fn rank_two_values() {
        assert_eq!(hom(2, arc(2, 0, 1), arc(2, 0, 1)), 1);
        assert_eq!(ext(2, arc(2, 0, 1), arc(2, 0, 1)), 0);
        assert_eq!(ext(2, arc(2, 0, 2), arc(2, 0, 2)), 1);
        assert_eq!(hom(2, arc(2, 0, 1), arc(2, 1, 1)), 0);
        assert_eq!(ext(2, arc(2, 0, 1), arc(2, 1, 1)), 1);
    }

    #[test]
    fn exceptional_arcs() {
        for r in 2..=4 {
            for a in 0..r {
                for l in 1..=2 * r {
                    let x = arc(r, a, l);
                    if l < r {
                        assert_eq!((hom(r, x, x), ext(r, x, x)), (1, 0), "r={r} {x:?}");
                    } else {
                        assert!(ext(r, x, x) >= 1);
                    }
                }
            }
        }
    }

    #[test]
    fn decompositions_of_sums() {
        let r = 3;
        let parts = [CycRep::arc(r, arc(r, 1, 2)), CycRep::arc(r, arc(r, 2, 4)), CycRep::arc(r, arc(r, 1, 2))];
        let d = decompose(&CycRep::direct_sum(&parts));
        assert_eq!(d, [(arc(r, 1, 2), 2), (arc(r, 2, 4), 1)].into_iter().collect());
    }

    #[test]
    fn extension_of_adjacent_quasi_simples() {
        // 0 -> S_1 -> E -> S_0 -> 0 in rank 2: E is the arc with socle 1, top 0.
        let r = 2;
        let mid = extension_middle(&CycRep::arc(r, arc(r, 0, 1)), &CycRep::arc(r, arc(r, 1, 1))).unwrap();
        assert_eq!(decompose(&mid), [(arc(r, 1, 2), 1)].into_iter().collect());
        assert!(extension_middle(&CycRep::arc(r, arc(r, 0, 1)), &CycRep::arc(r, arc(r, 0, 1))).is_none());
    }

    #[test]
    fn kernel_image_cokernel() {
        // Socle embedding S_1 -> (1,2) in rank 3 with cokernel S_0.
        let r = 3;
        let x = CycRep::arc(r, arc(r, 1, 1));
        let y = CycRep::arc(r, arc(r, 1, 2));
        let basis = hom_basis(&x, &y);
        assert_eq!(basis.len(), 1);
        let phi = &basis[0];
        assert!(kernel_arcs(&x, phi).is_empty());
        assert_eq!(image_arcs(&x, &y, phi), [(arc(r, 1, 1), 1)].into_iter().collect());
        assert_eq!(cokernel_arcs(&x, &y, phi), [(arc(r, 0, 1), 1)].into_iter().collect());
        assert_eq!(hom(r, arc(r, 1, 1), arc(r, 2, 2)), 0);
    }

    #[test]
    fn thickness() {
        let r = 3;
        let single: BTreeSet<ArcPos> = [arc(r, 0, 1)].into_iter().collect();
        assert!(is_thick(r, &single));
        let adjacent: BTreeSet<ArcPos> = [arc(r, 0, 1), arc(r, 1, 1)].into_iter().collect();
        assert!(!is_thick(r, &adjacent));
        let wing: BTreeSet<ArcPos> = [arc(r, 0, 1), arc(r, 1, 1), arc(r, 1, 2)].into_iter().collect();
        assert!(is_thick(r, &wing));
        assert!(is_thick(r, &BTreeSet::new()));
    }
}
