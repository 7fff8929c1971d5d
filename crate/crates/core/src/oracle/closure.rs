use std::collections::BTreeMap;

use super::{
    cokernel, decompose, hom_basis, image, is_injective, kernel, quotient, random_combination, rng_for,
    sample_generic, Hom, OracleConfig, SampledRep,
};
use crate::error::{Error, Result};
use crate::linalg::PrimeField;
use crate::quiver::{leq, DimVec, EulerContext};

const MAX_MEMBERS: usize = 400;

/// Simples of the smallest subcategory containing the generators and
/// closed under kernels, cokernels and extensions.
pub fn relative_simples(ctx: &EulerContext, gens: &[DimVec], cfg: &OracleConfig) -> Result<Vec<DimVec>> {
    let f = cfg.field();
    let mut gens: Vec<DimVec> = gens.iter().filter(|g| g.iter().any(|&x| x != 0)).cloned().collect();
    gens.sort();
    gens.dedup();
    let mut members: BTreeMap<DimVec, SampledRep> = BTreeMap::new();
    let mut rng = rng_for(cfg.seed, &gens.concat(), 0);
    for (k, g) in gens.iter().enumerate() {
        let m = sample_generic(ctx, g, cfg, cfg.seed.wrapping_add(1000 + k as u64))?;
        for piece in decompose(&f, &m, &mut rng)? {
            members.entry(piece.rep.dims.clone()).or_insert(piece.rep);
        }
    }

    let mut done: std::collections::BTreeSet<(DimVec, DimVec)> = Default::default();
    loop {
        let keys: Vec<DimVec> = members.keys().cloned().collect();
        let mut fresh = Vec::new();
        for x in &keys {
            for y in &keys {
                if !done.insert((x.clone(), y.clone())) {
                    continue;
                }
                let (mx, my) = (&members[x], &members[y]);
                for phi in maps(&f, mx, my, cfg.combos, &mut rng) {
                    for obj in [kernel(&f, mx, &phi)?, image(&f, mx, my, &phi)?, cokernel(&f, mx, my, &phi)?] {
                        for piece in decompose(&f, &obj, &mut rng)? {
                            let d = piece.rep.dims.clone();
                            if !members.contains_key(&d) && !fresh.iter().any(|r: &SampledRep| r.dims == d) {
                                fresh.push(piece.rep);
                            }
                        }
                    }
                }
            }
        }
        if fresh.is_empty() {
            break;
        }
        for r in fresh {
            members.entry(r.dims.clone()).or_insert(r);
        }
        if members.len() > MAX_MEMBERS {
            return Err(Error::Certification("closure exceeded its member budget".into()));
        }
    }

    let simples: Vec<DimVec> = members
        .keys()
        .filter(|s| {
            !members.keys().any(|t| {
                t != *s && leq(t, s) && injects(&f, &members[t], &members[*s], cfg.combos, &mut rng)
            })
        })
        .cloned()
        .collect();
    for m in members.values() {
        refilter(&f, m, &simples, &members, cfg.combos, &mut rng)?;
    }
    Ok(simples)
}

fn maps<R: rand::Rng>(f: &PrimeField, x: &SampledRep, y: &SampledRep, combos: usize, rng: &mut R) -> Vec<Hom> {
    let basis = hom_basis(f, x, y);
    let mut out = basis.clone();
    if !basis.is_empty() {
        for _ in 0..combos {
            out.extend(random_combination(f, &basis, rng));
        }
    }
    out
}

fn injects<R: rand::Rng>(f: &PrimeField, x: &SampledRep, y: &SampledRep, combos: usize, rng: &mut R) -> bool {
    injection(f, x, y, combos, rng).is_some()
}

fn injection<R: rand::Rng>(f: &PrimeField, x: &SampledRep, y: &SampledRep, combos: usize, rng: &mut R) -> Option<Hom> {
    maps(f, x, y, combos, rng).into_iter().find(|phi| is_injective(f, x, phi))
}

/// Peels simple submodules off `m` until nothing is left.
fn refilter<R: rand::Rng>(
    f: &PrimeField,
    m: &SampledRep,
    simples: &[DimVec],
    members: &BTreeMap<DimVec, SampledRep>,
    combos: usize,
    rng: &mut R,
) -> Result<()> {
    let mut stack = vec![m.clone()];
    let mut steps = 0;
    while let Some(x) = stack.pop() {
        if x.total_dim() == 0 {
            continue;
        }
        steps += 1;
        if steps > 10_000 {
            return Err(Error::Certification("refiltration did not terminate".into()));
        }
        let mut peeled = false;
        for s in simples.iter().filter(|s| leq(s, &x.dims)) {
            let sm = &members[s];
            if let Some(phi) = injection(f, sm, &x, combos, rng) {
                let sub = image_space(f, sm, &x, &phi);
                let q = quotient(f, &x, &sub)?;
                for piece in decompose(f, &q, rng)? {
                    stack.push(piece.rep);
                }
                peeled = true;
                break;
            }
        }
        if !peeled {
            return Err(Error::Certification(format!(
                "closure member of dimension {:?} has no filtration by the simples {:?}",
                x.dims, simples
            )));
        }
    }
    Ok(())
}

fn image_space(f: &PrimeField, x: &SampledRep, y: &SampledRep, phi: &Hom) -> Vec<Vec<Vec<u64>>> {
    super::image_spaces(f, x, y, phi)
}
