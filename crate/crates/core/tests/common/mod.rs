//! Test-only generators and brute-force reference computations.
//!
//! Everything here evaluates the network forward on explicit points of the
//! Boolean cube and never calls the oracle, so it stays independent of the
//! branch-and-bound search it is used to check.

#![allow(dead_code)]

pub mod smt;

use abdex::{Decision, DenseLayer, FeatureSchema, Instance, Model, PartialAssignment};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    use rand::SeedableRng;
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random ReLU network with weights and biases drawn from U[-2, 2].
pub fn random_model(rng: &mut impl Rng, n: usize, hidden: &[usize]) -> Model {
    let mut widths = vec![n];
    widths.extend_from_slice(hidden);
    widths.push(1);
    let layers = widths
        .windows(2)
        .map(|w| {
            let rows = (0..w[1])
                .map(|_| (0..w[0]).map(|_| rng.gen_range(-2.0..=2.0)).collect())
                .collect();
            let bias = (0..w[1]).map(|_| rng.gen_range(-2.0..=2.0)).collect();
            DenseLayer::new(rows, bias).unwrap()
        })
        .collect();
    Model::new(FeatureSchema::anonymous(n).unwrap(), layers).unwrap()
}

/// Up to two hidden layers of 1..=8 units (possibly none).
pub fn random_architecture(rng: &mut impl Rng) -> Vec<usize> {
    let depth = rng.gen_range(0..=2);
    (0..depth).map(|_| rng.gen_range(1..=8)).collect()
}

pub fn random_instance(rng: &mut impl Rng, n: usize) -> Instance {
    Instance::new((0..n).map(|_| rng.gen_bool(0.5)).collect())
}

pub fn random_partial(rng: &mut impl Rng, n: usize) -> PartialAssignment {
    let x = random_instance(rng, n);
    let p_free = rng.gen_range(0.0..=1.0);
    let fixed: Vec<usize> = (0..n).filter(|_| !rng.gen_bool(p_free)).collect();
    PartialAssignment::restrict(&x, fixed)
}

pub fn single(w: &[f64], b: f64) -> Model {
    let schema = FeatureSchema::anonymous(w.len()).unwrap();
    Model::new(schema, vec![DenseLayer::new(vec![w.to_vec()], vec![b]).unwrap()]).unwrap()
}

pub fn cube(n: usize) -> Vec<Instance> {
    (0..1u64 << n).map(|m| Instance::from_mask(m, n)).collect()
}

pub fn mask_of(x: &Instance) -> u64 {
    x.values()
        .iter()
        .enumerate()
        .fold(0, |m, (i, &b)| m | (u64::from(b) << i))
}

pub fn features_of(mask: u64, n: usize) -> Vec<usize> {
    (0..n).filter(|&i| mask >> i & 1 == 1).collect()
}

/// Forward-pass decision of every cube point, `None` inside the ambiguity margin.
pub fn decision_table(model: &Model) -> Vec<Option<Decision>> {
    let n = model.input_width();
    cube(n)
        .iter()
        .map(|y| {
            let logit = model.logit(y).unwrap();
            (logit.abs() >= 1e-9).then(|| Decision::from_logit(logit))
        })
        .collect()
}

/// Brute-force sufficiency of every feature subset (indexed by bitmask) for `x`.
/// `None` when `x` itself or any cube point is ambiguous.
pub fn sufficiency_lattice(model: &Model, table: &[Option<Decision>], x: &Instance) -> Option<Vec<bool>> {
    if table.iter().any(Option::is_none) {
        return None;
    }
    let n = model.input_width();
    let xm = mask_of(x);
    let d = table[xm as usize]?;
    let flips: Vec<u64> = (0..1u64 << n)
        .filter(|&y| table[y as usize] != Some(d))
        .map(|y| y ^ xm)
        .collect();
    Some(
        (0..1u64 << n)
            .map(|s| flips.iter().all(|&diff| diff & s != 0))
            .collect(),
    )
}

/// All minimal sufficient subsets (AXPs) as bitmasks.
pub fn all_axps(lattice: &[bool], n: usize) -> Vec<u64> {
    (0..1u64 << n)
        .filter(|&s| lattice[s as usize] && (0..n).all(|i| s >> i & 1 == 0 || !lattice[(s & !(1 << i)) as usize]))
        .collect()
}

/// Features shared by every AXP, as a bitmask.
pub fn axp_intersection(axps: &[u64], n: usize) -> u64 {
    axps.iter().fold((1u64 << n) - 1, |acc, &s| acc & s)
}

/// Reference flip query by enumerating the whole cube.
pub fn brute_flips(table: &[Option<Decision>], partial: &PartialAssignment, d: Decision) -> bool {
    let n = partial.len();
    cube(n)
        .iter()
        .enumerate()
        .any(|(i, y)| partial.is_completed_by(y) && matches!(table[i], Some(e) if e != d))
}

/// Random model over `n` inputs with a random architecture.
pub fn random_net(rng: &mut impl Rng, n: usize) -> Model {
    let hidden = random_architecture(rng);
    random_model(rng, n, &hidden)
}
