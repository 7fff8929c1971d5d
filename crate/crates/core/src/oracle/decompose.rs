use rand::Rng;

use super::poly::{self, Poly};
use super::{hom_basis, random_combination, restrict, SampledRep};
use crate::error::{Error, Result};
use crate::linalg::{self, Mat, PrimeField};

/// An F_p-indecomposable summand. Over the algebraic closure it splits into
/// `split` Galois-conjugate summands of dimension dims / split.
#[derive(Debug, Clone)]
pub struct Piece {
    pub rep: SampledRep,
    pub split: usize,
}

const TRIES: usize = 4;

pub fn decompose<R: Rng>(f: &PrimeField, m: &SampledRep, rng: &mut R) -> Result<Vec<Piece>> {
    if m.total_dim() == 0 {
        return Ok(Vec::new());
    }
    let end = hom_basis(f, m, m);
    if end.len() == 1 {
        return Ok(vec![Piece { rep: m.clone(), split: 1 }]);
    }
    let mut residue_degree = 1;
    for _ in 0..TRIES {
        let phi = random_combination(f, &end, rng).expect("End contains the identity");
        let mut chi: Poly = vec![1];
        for (v, block) in phi.iter().enumerate() {
            if m.dims[v] > 0 {
                chi = poly::mul(f, &chi, &poly::charpoly(f, block));
            }
        }
        let factors = poly::irreducible_factors(f, &chi, rng);
        if factors.len() >= 2 {
            let mut out = Vec::new();
            for g in &factors {
                let sub: Vec<Vec<Vec<u64>>> = phi
                    .iter()
                    .enumerate()
                    .map(|(v, block)| generalized_kernel(f, g, block, m.dims[v] as usize))
                    .collect();
                let part = restrict(f, m, &sub)?;
                out.extend(decompose(f, &part, rng)?);
            }
            let total: usize = out.iter().map(|p| p.rep.total_dim()).sum();
            if total != m.total_dim() {
                return Err(Error::Invariant("generalized eigenspaces do not fill the module".into()));
            }
            return Ok(out);
        }
        residue_degree = residue_degree.max(poly::degree(&factors[0]).unwrap_or(1));
    }
    if m.dims.iter().any(|&x| x % residue_degree as i64 != 0) {
        return Err(Error::Certification(format!(
            "inconclusive decomposition of a module of dimension {:?}",
            m.dims
        )));
    }
    Ok(vec![Piece { rep: m.clone(), split: residue_degree }])
}

/// ker g(A)^dim as a list of basis vectors.
fn generalized_kernel(f: &PrimeField, g: &Poly, a: &Mat<u64>, dim: usize) -> Vec<Vec<u64>> {
    if dim == 0 {
        return Vec::new();
    }
    let base = poly::eval_matrix(f, g, a);
    let mut p = base.clone();
    for _ in 1..dim {
        p = linalg::mat_mul(f, &p, &base, dim, dim);
    }
    linalg::nullspace(f, &p, dim)
}
