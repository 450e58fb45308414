//! Seeded random instances: groups of order at most 256, symmetric sets
//! `X`, algebra seeds, and families of models and morphisms over a pipeline
//! instance.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{Error, Result};
use crate::group::{FiniteGroup, Group};
use crate::pipeline::{EquivalenceMode, PipelineConfig, PipelineInstance};
use crate::quasihom::Model;
use crate::subset::GSubset;

/// Largest group order produced.
pub const MAX_ORDER: usize = 256;

fn random_perm(rng: &mut impl Rng, n: usize) -> Vec<usize> {
    let mut p: Vec<usize> = (0..n).collect();
    p.shuffle(rng);
    p
}

fn random_matrix(rng: &mut impl Rng, p: u32, dim: usize) -> Vec<u32> {
    (0..dim * dim).map(|_| rng.gen_range(0..p)).collect()
}

/// A random group from the constructor families.
pub fn random_group(rng: &mut impl Rng) -> Group {
    loop {
        let g = match rng.gen_range(0..10) {
            0 => FiniteGroup::cyclic(rng.gen_range(2..=64)),
            1 => FiniteGroup::dihedral(rng.gen_range(3..=32)),
            2 => [FiniteGroup::symmetric(3), FiniteGroup::symmetric(4), FiniteGroup::alternating(4), FiniteGroup::quaternion()]
                .choose(rng)
                .expect("nonempty")
                .clone(),
            3 => FiniteGroup::direct_product(&FiniteGroup::cyclic(rng.gen_range(2..=8)), &FiniteGroup::cyclic(rng.gen_range(2..=8))),
            4 => FiniteGroup::direct_product(&FiniteGroup::symmetric(3), &FiniteGroup::cyclic(rng.gen_range(2..=6))),
            5 => FiniteGroup::direct_product(&FiniteGroup::dihedral(rng.gen_range(3..=6)), &FiniteGroup::cyclic(2)),
            6 => {
                let gens: Vec<Vec<usize>> = (0..2).map(|_| random_perm(rng, 5)).collect();
                match FiniteGroup::from_permutations(5, &gens) {
                    Ok(g) => g,
                    Err(_) => continue,
                }
            }
            7 => {
                let gens: Vec<Vec<u32>> = (0..2).map(|_| random_matrix(rng, 3, 2)).collect();
                match FiniteGroup::from_matrices(3, 2, &gens) {
                    Ok(g) => g,
                    Err(_) => continue,
                }
            }
            8 => FiniteGroup::direct_product(&FiniteGroup::quaternion(), &FiniteGroup::cyclic(rng.gen_range(2..=4))),
            _ => FiniteGroup::cyclic(rng.gen_range(65..=MAX_ORDER)),
        };
        if g.order() <= MAX_ORDER {
            return g;
        }
    }
}

/// `{e} ∪ S ∪ S^-1` for `k` random elements.
pub fn random_symmetric(rng: &mut impl Rng, g: &Group, k: usize) -> GSubset {
    let mut s = GSubset::identity(g);
    for _ in 0..k {
        let a = rng.gen_range(0..g.order());
        s.insert(a);
        s.insert(g.inv(a));
    }
    s
}

/// A random instance description: ambient group, `X` and configuration.
pub fn random_instance(rng: &mut impl Rng) -> (Group, GSubset, PipelineConfig) {
    let g = random_group(rng);
    let x = if rng.gen_bool(0.2) {
        let k = rng.gen_range(1..=(g.order() / 3).max(1));
        random_symmetric(rng, &g, k)
    } else {
        let k = rng.gen_range(1..=3);
        random_symmetric(rng, &g, k)
    };
    let span = x.generated_subgroup();
    let mut cfg = PipelineConfig::default();
    match rng.gen_range(0..4) {
        0 => {
            // A coset of a random subgroup of <X>.
            let elems = span.to_vec();
            let h = GSubset::from_elems(&g, [*elems.choose(rng).expect("nonempty")]).expect("in range").generated_subgroup();
            let t = *elems.choose(rng).expect("nonempty");
            cfg.extra_seeds.push(h.translate_left(t));
        }
        1 => {
            let mut seed = GSubset::empty(&g);
            for a in span.iter() {
                if rng.gen_bool(0.4) {
                    seed.insert(a);
                }
            }
            cfg.extra_seeds.push(seed);
        }
        _ => {}
    }
    if rng.gen_bool(0.25) {
        cfg.mode = EquivalenceMode::CoarseAtoms;
    }
    (g, x, cfg)
}

/// Build random instances until one succeeds (the atom budget can refuse).
pub fn random_pipeline(rng: &mut impl Rng) -> Result<PipelineInstance> {
    let mut last = None;
    for _ in 0..16 {
        let (g, x, cfg) = random_instance(rng);
        match PipelineInstance::build(&g, &x, &cfg) {
            Ok(inst) => return Ok(inst),
            Err(e) => last = Some(e),
        }
    }
    Err(last.expect("at least one attempt"))
}

/// `ncl(S)`: the normal subgroup generated by `S`.
pub fn normal_closure(s: &GSubset) -> GSubset {
    s.union(&GSubset::identity(s.group())).conjugation_closure().generated_subgroup()
}

/// A model `G -> G/N : π[T0]^3` perturbed inside `T0`.
pub fn perturbed_model(rng: &mut impl Rng, g: &Group, normal: &GSubset, t0: &GSubset) -> Result<(Model, Vec<usize>)> {
    let (target, proj) = g.quotient(normal)?;
    let t0v = t0.to_vec();
    let map: Vec<usize> = (0..g.order()).map(|a| proj[g.mul(a, *t0v.choose(rng).expect("e in T0"))]).collect();
    let img = GSubset::from_elems(&target, t0.iter().map(|a| proj[a]))?;
    let err = img.power(3);
    Ok((Model::new(g, &target, map, &err)?, proj))
}

/// A map `H1 -> H2` given by a natural projection `psi` times values in `T`.
pub fn perturbed_map(rng: &mut impl Rng, psi: &[usize], target: &Group, t: &GSubset) -> Vec<usize> {
    let tv = t.to_vec();
    psi.iter().map(|&p| target.mul(p, *tv.choose(rng).expect("e in T"))).collect()
}

/// Three models over a pipeline instance with a chain of kernels
/// `N ⊆ N1 ⊆ N2 ⊆ N3`, and candidate morphisms between them.
#[derive(Clone, Debug)]
pub struct MorphismFamily {
    pub inst: PipelineInstance,
    pub t0: GSubset,
    pub normals: Vec<GSubset>,
    pub models: Vec<Model>,
    /// `H1 -> H2`, and two perturbations of it.
    pub rho: Vec<usize>,
    pub rho_p: Vec<usize>,
    pub rho_pp: Vec<usize>,
    /// `H2 -> H3`, and a perturbation of it.
    pub delta: Vec<usize>,
    pub delta_p: Vec<usize>,
    /// Quotient of the instance to `H1`, perturbed.
    pub from_quotient: Vec<usize>,
}

/// A random family over a random atom-mode pipeline instance.
pub fn random_family(rng: &mut impl Rng) -> Result<MorphismFamily> {
    let inst = loop {
        let (g, x, mut cfg) = random_instance(rng);
        cfg.mode = EquivalenceMode::Atoms;
        if g.order() > 96 {
            continue;
        }
        if let Ok(inst) = PipelineInstance::build(&g, &x, &cfg) {
            break inst;
        }
    };
    family_over(rng, inst)
}

pub fn family_over(rng: &mut impl Rng, inst: PipelineInstance) -> Result<MorphismFamily> {
    let g = inst.group.clone();
    let e = g.identity();
    let n0 = inst.algebra.atom(inst.algebra.atom_of(e)).clone();
    if !(n0.is_closed_subgroup() && n0.is_normal()) {
        return Err(Error::NotDClosed);
    }
    let mut normals = Vec::new();
    let mut cur = n0.clone();
    for _ in 0..3 {
        if rng.gen_bool(0.5) {
            let mut s = cur.clone();
            s.insert(rng.gen_range(0..g.order()));
            cur = normal_closure(&s);
        }
        normals.push(cur.clone());
    }
    let t0 = if rng.gen_bool(0.2) {
        GSubset::identity(&g)
    } else {
        let k = rng.gen_range(1..=2);
        random_symmetric(rng, &g, k).conjugation_closure()
    };
    let mut models = Vec::new();
    let mut projs = Vec::new();
    for n in &normals {
        let (m, p) = perturbed_model(rng, &g, n, &t0)?;
        models.push(m);
        projs.push(p);
    }
    // Natural maps H_i -> H_{i+1}: send the coset of a to the coset of a.
    let natural = |from: usize, to: usize| -> Vec<usize> {
        let k = models[from].target.order();
        let mut m = vec![usize::MAX; k];
        for a in 0..g.order() {
            m[projs[from][a]] = projs[to][a];
        }
        m
    };
    let t_img = |i: usize| GSubset::from_elems(&models[i].target, t0.iter().map(|a| projs[i][a])).expect("in range");
    let psi12 = natural(0, 1);
    let psi23 = natural(1, 2);
    let rho = perturbed_map(rng, &psi12, &models[1].target, &t_img(1));
    let rho_p = perturbed_map(rng, &psi12, &models[1].target, &t_img(1));
    let rho_pp = perturbed_map(rng, &psi12, &models[1].target, &t_img(1));
    let delta = perturbed_map(rng, &psi23, &models[2].target, &t_img(2));
    let delta_p = perturbed_map(rng, &psi23, &models[2].target, &t_img(2));
    // Q -> H1 through any preimage under f; the kernel of f is N ⊆ N1.
    let fvals = inst.f_map();
    let q = inst.quotient().order();
    let mut nat_q = vec![usize::MAX; q];
    for a in 0..g.order() {
        nat_q[fvals[a]] = projs[0][a];
    }
    let from_quotient = perturbed_map(rng, &nat_q, &models[0].target, &t_img(0));
    Ok(MorphismFamily { inst, t0, normals, models, rho, rho_p, rho_pp, delta, delta_p, from_quotient })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn generated_groups_are_bounded() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..40 {
            let g = random_group(&mut rng);
            assert!(g.order() <= MAX_ORDER);
        }
    }

    #[test]
    fn families_are_models() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let fam = random_family(&mut rng).unwrap();
        assert_eq!(fam.models.len(), 3);
        assert!(fam.normals[0].is_subset(&fam.normals[1]));
        assert!(fam.normals[1].is_subset(&fam.normals[2]));
    }
}
