#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use robf::fuzzy::{FuzzyFocalElement, FuzzyMassFunction};
use robf::generate::{generate_random, FeasibleKind, RandomSpec};
use robf::model::binomial;
use robf::{Instance, MassFunction};

pub const PI1: [f64; 6] = [0.2, 0.5, 1.0, 0.7, 0.9, 0.3];
pub const PI2: [f64; 6] = [0.0, 0.3, 0.4, 1.0, 0.7, 0.4];

/// The two-element fuzzy mass with masses 0.4 and 0.6.
pub fn sample_fuzzy() -> FuzzyMassFunction {
    FuzzyMassFunction::new(
        6,
        vec![FuzzyFocalElement { pi: PI1.to_vec(), mass: 0.4 }, FuzzyFocalElement { pi: PI2.to_vec(), mass: 0.6 }],
    )
    .unwrap()
}

/// Crisp focal sets (1-based) and masses of the reduced sample, as tabulated.
pub const REDUCED_SAMPLE: [(&[usize], f64); 9] = [
    (&[1, 2, 3, 4, 5, 6], 0.08),
    (&[2, 3, 4, 5, 6], 0.22),
    (&[2, 3, 4, 5], 0.08),
    (&[3, 4, 5], 0.08),
    (&[3, 5], 0.08),
    (&[3], 0.04),
    (&[3, 4, 5, 6], 0.06),
    (&[4, 5], 0.18),
    (&[4], 0.18),
];

pub fn reduced_sample_mass() -> MassFunction {
    MassFunction::from_pairs(6, REDUCED_SAMPLE.iter().map(|(s, m)| (s.iter().map(|k| k - 1).collect(), *m))).unwrap()
}

fn distinct_sets(k: usize, max_size: usize) -> usize {
    (1..=max_size).map(|s| binomial(k, s).unwrap() as usize).sum()
}

/// Random instance with `K` in `1..=max_k`, at most `max_focal` focal sets
/// of size at most `max_size`, and dimension in `1..=max_n`.
pub fn random_instance(seed: u64, max_k: usize, max_focal: usize, max_size: usize, max_n: usize, kind: FeasibleKind, alpha: f64) -> Instance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
    let k = rng.gen_range(1..=max_k);
    let size = rng.gen_range(1..=max_size.min(k));
    let focal = rng.gen_range(1..=max_focal.min(distinct_sets(k, size)));
    let dim = rng.gen_range(1..=max_n);
    let p = rng.gen_range(1..=dim);
    let spec = RandomSpec { num_scenarios: k, dim, num_focal: focal, max_focal_size: size, feasible: kind, p, alpha };
    generate_random(&spec, seed).unwrap()
}

/// Random mass over `1..=max_k` scenarios with up to 10 focal sets.
pub fn random_mass(seed: u64, max_k: usize) -> MassFunction {
    let inst = random_instance(seed, max_k, 10, max_k, 1, FeasibleKind::Selection, 0.5);
    inst.mass.explicit().unwrap().into_owned()
}

pub fn subsets(k: usize) -> impl Iterator<Item = Vec<usize>> {
    (0u32..1 << k).map(move |mask| (0..k).filter(|&i| mask >> i & 1 == 1).collect())
}
