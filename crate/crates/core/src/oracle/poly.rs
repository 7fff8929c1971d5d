//! Univariate polynomials over F_p, coefficients stored low degree first,
//! and the factoring steps needed to split endomorphisms.

use rand::Rng;

use crate::linalg::{Field, Mat, PrimeField};

pub type Poly = Vec<u64>;

pub fn trim(mut a: Poly) -> Poly {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

pub fn degree(a: &Poly) -> Option<usize> {
    if a.is_empty() {
        None
    } else {
        Some(a.len() - 1)
    }
}

pub fn sub(f: &PrimeField, a: &Poly, b: &Poly) -> Poly {
    let n = a.len().max(b.len());
    let out = (0..n)
        .map(|i| f.sub(a.get(i).unwrap_or(&0), b.get(i).unwrap_or(&0)))
        .collect();
    trim(out)
}

pub fn mul(f: &PrimeField, a: &Poly, b: &Poly) -> Poly {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if *x == 0 {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] = f.add(&out[i + j], &f.mul(x, y));
        }
    }
    trim(out)
}

/// Quotient and remainder; panics on a zero divisor.
pub fn divrem(f: &PrimeField, a: &Poly, b: &Poly) -> (Poly, Poly) {
    let db = degree(b).expect("division by the zero polynomial");
    let mut r = a.clone();
    if r.len() < b.len() {
        return (vec![], trim(r));
    }
    let inv = f.inv(&b[db]);
    let mut q = vec![0u64; r.len() - db];
    for k in (0..q.len()).rev() {
        let c = f.mul(&r[k + db], &inv);
        q[k] = c;
        if c != 0 {
            for (j, bj) in b.iter().enumerate() {
                r[k + j] = f.sub(&r[k + j], &f.mul(&c, bj));
            }
        }
    }
    (trim(q), trim(r))
}

pub fn monic(f: &PrimeField, a: &Poly) -> Poly {
    match a.last() {
        None => vec![],
        Some(lead) => {
            let inv = f.inv(lead);
            a.iter().map(|x| f.mul(x, &inv)).collect()
        }
    }
}

pub fn gcd(f: &PrimeField, a: &Poly, b: &Poly) -> Poly {
    let (mut x, mut y) = (trim(a.clone()), trim(b.clone()));
    while !y.is_empty() {
        let (_, r) = divrem(f, &x, &y);
        x = y;
        y = r;
    }
    monic(f, &x)
}

pub fn derivative(f: &PrimeField, a: &Poly) -> Poly {
    trim(
        a.iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| f.mul(c, &f.from_i64(i as i64)))
            .collect(),
    )
}

pub fn mulmod(f: &PrimeField, a: &Poly, b: &Poly, m: &Poly) -> Poly {
    divrem(f, &mul(f, a, b), m).1
}

pub fn powmod(f: &PrimeField, base: &Poly, mut e: u64, m: &Poly) -> Poly {
    let mut result: Poly = divrem(f, &vec![1], m).1;
    let mut b = divrem(f, base, m).1;
    while e > 0 {
        if e & 1 == 1 {
            result = mulmod(f, &result, &b, m);
        }
        b = mulmod(f, &b, &b, m);
        e >>= 1;
    }
    result
}

/// Product of the distinct monic irreducible factors; needs deg a < p.
pub fn squarefree_part(f: &PrimeField, a: &Poly) -> Poly {
    assert!(a.len() as u64 <= f.p, "degree too large for the characteristic");
    let g = gcd(f, a, &derivative(f, a));
    monic(f, &divrem(f, a, &g).0)
}

/// Distinct-degree factorization of a monic square-free polynomial.
pub fn distinct_degree(f: &PrimeField, a: &Poly) -> Vec<(Poly, usize)> {
    let mut out = Vec::new();
    let mut rest = a.clone();
    let x: Poly = vec![0, 1];
    let mut h = x.clone();
    let mut d = 0;
    while degree(&rest).unwrap_or(0) >= 2 * (d + 1) {
        d += 1;
        h = powmod(f, &h, f.p, &rest);
        let g = gcd(f, &sub(f, &h, &x), &rest);
        if degree(&g).unwrap_or(0) > 0 {
            out.push((g.clone(), d));
            rest = monic(f, &divrem(f, &rest, &g).0);
            h = divrem(f, &h, &rest).1;
        }
    }
    if degree(&rest).unwrap_or(0) > 0 {
        let deg = degree(&rest).unwrap();
        out.push((rest, deg));
    }
    out
}

/// Cantor–Zassenhaus splitting of a product of irreducibles of degree d
/// (odd p).
pub fn equal_degree<R: Rng>(f: &PrimeField, a: &Poly, d: usize, rng: &mut R) -> Vec<Poly> {
    let n = degree(a).unwrap_or(0);
    if n <= d {
        return vec![a.clone()];
    }
    loop {
        let r: Poly = trim((0..n).map(|_| rng.gen_range(0..f.p)).collect());
        if degree(&r).unwrap_or(0) == 0 {
            continue;
        }
        // r^((p^d - 1)/2) = (r * r^p * ... * r^(p^(d-1)))^((p-1)/2)
        let mut norm: Poly = vec![1];
        let mut frob = r.clone();
        for _ in 0..d {
            norm = mulmod(f, &norm, &frob, a);
            frob = powmod(f, &frob, f.p, a);
        }
        let t = powmod(f, &norm, (f.p - 1) / 2, a);
        let g = gcd(f, &sub(f, &t, &vec![1]), a);
        let dg = degree(&g).unwrap_or(0);
        if dg > 0 && dg < n {
            let h = monic(f, &divrem(f, a, &g).0);
            let mut out = equal_degree(f, &g, d, rng);
            out.extend(equal_degree(f, &h, d, rng));
            return out;
        }
    }
}

/// Distinct monic irreducible factors with their degrees.
pub fn irreducible_factors<R: Rng>(f: &PrimeField, a: &Poly, rng: &mut R) -> Vec<Poly> {
    let sf = squarefree_part(f, &monic(f, a));
    let mut out = Vec::new();
    for (g, d) in distinct_degree(f, &sf) {
        out.extend(equal_degree(f, &g, d, rng));
    }
    out.sort();
    out
}

/// Characteristic polynomial by Hessenberg reduction.
pub fn charpoly(f: &PrimeField, m: &Mat<u64>) -> Poly {
    let n = m.len();
    let mut h = m.clone();
    for k in 0..n.saturating_sub(2) {
        let Some(piv) = (k + 1..n).find(|&i| h[i][k] != 0) else { continue };
        if piv != k + 1 {
            h.swap(piv, k + 1);
            for row in h.iter_mut() {
                row.swap(piv, k + 1);
            }
        }
        let inv = f.inv(&h[k + 1][k]);
        for i in k + 2..n {
            let c = f.mul(&h[i][k], &inv);
            if c == 0 {
                continue;
            }
            // row_i -= c row_{k+1}; col_{k+1} += c col_i
            for j in 0..n {
                let t = f.mul(&c, &h[k + 1][j]);
                h[i][j] = f.sub(&h[i][j], &t);
            }
            for row in h.iter_mut() {
                let t = f.mul(&c, &row[i]);
                row[k + 1] = f.add(&row[k + 1], &t);
            }
        }
    }
    // p_m = (x - h_mm) p_{m-1} - sum_{i<m} h_im (prod_{j=i+1..m} h_{j,j-1}) p_{i-1}
    let mut polys: Vec<Poly> = vec![vec![1]];
    for mm in 0..n {
        let mut next = mul(f, &vec![f.neg(&h[mm][mm]), 1], &polys[mm]);
        let mut prod = 1u64;
        for i in (0..mm).rev() {
            prod = f.mul(&prod, &h[i + 1][i]);
            let coef = f.mul(&h[i][mm], &prod);
            if coef != 0 {
                let term: Poly = polys[i].iter().map(|c| f.mul(c, &coef)).collect();
                next = sub(f, &next, &term);
            }
        }
        polys.push(next);
    }
    polys.pop().expect("nonempty")
}

/// f(A) by Horner's rule.
pub fn eval_matrix(f: &PrimeField, poly: &Poly, a: &Mat<u64>) -> Mat<u64> {
    let n = a.len();
    let mut acc: Mat<u64> = vec![vec![0; n]; n];
    for c in poly.iter().rev() {
        acc = crate::linalg::mat_mul(f, &acc, a, n, n);
        for (i, row) in acc.iter_mut().enumerate() {
            row[i] = f.add(&row[i], c);
        }
    }
    acc
}
