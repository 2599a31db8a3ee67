//! Ground truth by search: every (or a random sample of) nilpotent element of
//! `N(B)` over a small prime field, with its Jordan type.
//!
//! Candidates are indexed in base `p` with `4n` digits, most significant
//! first: `a_0, b_0, c_0, d_0`, then `a_1..a_{n-1}`, `b_1..`, `c_1..`, `d_1..`.
//! Keeping the constant block outermost lets the nilpotency test discard
//! whole ranges at once.

use std::collections::{BTreeMap, BTreeSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algebra::{Field, FieldSpec, Mat2Trunc, PrimeField, TruncatedPoly};
use crate::centralizer::{CentralizerElement, ElementJson};
use crate::enumerator::{enumerate, ConsistencyAlarm, FieldMode};
use crate::error::{Error, Result};
use crate::partition::Partition;
use crate::witness::{build, RecipeJson};

pub const DEFAULT_BUDGET: u64 = 1 << 30;

/// Every this many candidates the local rank path is compared with dense ranks.
const DENSE_CHECK_STRIDE: u64 = 1009;

const CHUNK: u64 = 1 << 12;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ScanOptions {
    pub budget: u64,
    /// Worker threads; `None` uses the global pool, `Some(1)` runs serially.
    pub threads: Option<usize>,
}

impl Default for ScanOptions {
    fn default() -> Self {
        ScanOptions { budget: DEFAULT_BUDGET, threads: None }
    }
}

/// Result of an exhaustive scan.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Scan {
    /// Each observed type with the lowest candidate index producing it.
    pub types: BTreeMap<Partition, u64>,
    pub candidates: u64,
    pub nilpotent: u64,
}

fn candidate_count(n: usize, p: u64) -> Option<u64> {
    p.checked_pow(u32::try_from(4 * n).ok()?)
}

/// The element with the given candidate index.
pub fn candidate(n: usize, p: u64, index: u64) -> Result<CentralizerElement<PrimeField>> {
    let field = PrimeField::new(p)?;
    let total = candidate_count(n, p).ok_or_else(|| Error::InvalidArgument("index space overflows".into()))?;
    if n == 0 || index >= total {
        return Err(Error::InvalidArgument(format!("candidate {index} out of range for n={n}, p={p}")));
    }
    let inner = total / p.pow(4);
    let prefix = index / inner;
    let digits = [prefix / (p * p * p), prefix / (p * p) % p, prefix / p % p, prefix % p];
    let mut coeffs: [Vec<u64>; 4] = digits.map(|d| vec![d]);
    fill_tail(&mut coeffs, n, p, index % inner);
    Ok(element(field, n, &coeffs))
}

/// Writes digits of `rest` into positions `1..n` of each coefficient vector.
fn fill_tail(coeffs: &mut [Vec<u64>; 4], n: usize, p: u64, mut rest: u64) {
    for v in coeffs.iter_mut() {
        v.resize(n, 0);
    }
    for entry in (0..4).rev() {
        for deg in (1..n).rev() {
            coeffs[entry][deg] = rest % p;
            rest /= p;
        }
    }
}

fn element(field: PrimeField, n: usize, coeffs: &[Vec<u64>; 4]) -> CentralizerElement<PrimeField> {
    let t = |v: &Vec<u64>| TruncatedPoly::new_truncating(field, n, v.clone());
    let mat = Mat2Trunc::new(t(&coeffs[0]), t(&coeffs[1]), t(&coeffs[2]), t(&coeffs[3]))
        .expect("entries share field and modulus");
    CentralizerElement::from_mat(mat)
}

fn nilpotent_block(field: PrimeField, [a, b, c, d]: [u64; 4]) -> bool {
    field.add(&a, &d) == 0 && field.sub(&field.mul(&a, &d), &field.mul(&b, &c)) == 0
}

fn scan_range(field: PrimeField, n: usize, block: [u64; 4], base: u64, lo: u64, hi: u64) -> BTreeMap<Partition, u64> {
    let p = field.modulus();
    let mut seen: BTreeMap<Partition, u64> = BTreeMap::new();
    let mut coeffs: [Vec<u64>; 4] = block.map(|d| vec![d]);
    for rest in lo..hi {
        fill_tail(&mut coeffs, n, p, rest);
        let e = element(field, n, &coeffs);
        let ty = e.jordan_type_local().expect("constant block is nilpotent");
        let index = base + rest;
        if index.is_multiple_of(DENSE_CHECK_STRIDE) {
            assert_eq!(ty, e.jordan_type().expect("nilpotent"), "local and dense ranks disagree at {index}");
        }
        seen.entry(ty).or_insert(index);
    }
    seen
}

fn merge(mut a: BTreeMap<Partition, u64>, b: BTreeMap<Partition, u64>) -> BTreeMap<Partition, u64> {
    for (k, v) in b {
        a.entry(k).and_modify(|x| *x = (*x).min(v)).or_insert(v);
    }
    a
}

/// Scans all of `F_p^{4n}`.
pub fn exhaustive_scan(n: usize, p: u64, opts: ScanOptions) -> Result<Scan> {
    let field = PrimeField::new(p)?;
    if n == 0 {
        return Err(Error::InvalidArgument("n must be positive".into()));
    }
    let total = candidate_count(n, p).filter(|&t| t <= opts.budget).ok_or(Error::BudgetExceeded {
        candidates: (p as u128).saturating_pow(4 * n as u32),
        budget: opts.budget as u128,
    })?;
    let inner = total / p.pow(4);
    let mut shards = Vec::new();
    for prefix in 0..p.pow(4) {
        let block = [prefix / (p * p * p), prefix / (p * p) % p, prefix / p % p, prefix % p];
        if !nilpotent_block(field, block) {
            continue;
        }
        let mut lo = 0;
        while lo < inner {
            let hi = (lo + CHUNK).min(inner);
            shards.push((block, prefix * inner, lo, hi));
            lo = hi;
        }
    }
    let nilpotent = shards.iter().map(|s| s.3 - s.2).sum();
    let run = |shards: &[([u64; 4], u64, u64, u64)]| {
        shards
            .par_iter()
            .map(|&(block, base, lo, hi)| scan_range(field, n, block, base, lo, hi))
            .reduce(BTreeMap::new, merge)
    };
    let types = match opts.threads {
        Some(1) => shards
            .iter()
            .map(|&(block, base, lo, hi)| scan_range(field, n, block, base, lo, hi))
            .fold(BTreeMap::new(), merge),
        Some(t) => rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build()
            .map_err(|e| Error::InvalidArgument(format!("thread pool: {e}")))?
            .install(|| run(&shards)),
        None => run(&shards),
    };
    Ok(Scan { types, candidates: total, nilpotent })
}

pub fn exhaustive_types(n: usize, p: u64) -> Result<BTreeSet<Partition>> {
    Ok(exhaustive_scan(n, p, ScanOptions::default())?.types.into_keys().collect())
}

/// Result of random sampling: each type with the first draw producing it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Sample {
    pub types: BTreeMap<Partition, CentralizerElement<PrimeField>>,
    pub draws: u64,
    pub nilpotent: u64,
}

/// Draws `count` uniform candidates from a ChaCha8 stream seeded with `seed`.
pub fn sample_scan(n: usize, p: u64, count: u64, seed: u64) -> Result<Sample> {
    let field = PrimeField::new(p)?;
    if n == 0 {
        return Err(Error::InvalidArgument("n must be positive".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut types = BTreeMap::new();
    let mut nilpotent = 0;
    for _ in 0..count {
        let coeffs: [Vec<u64>; 4] =
            std::array::from_fn(|_| (0..n).map(|_| rng.gen_range(0..p)).collect());
        if !nilpotent_block(field, [0, 1, 2, 3].map(|i| coeffs[i][0])) {
            continue;
        }
        nilpotent += 1;
        let e = element(field, n, &coeffs);
        let ty = e.jordan_type_local().expect("constant block is nilpotent");
        types.entry(ty).or_insert(e);
    }
    Ok(Sample { types, draws: count, nilpotent })
}

pub fn sample_types(n: usize, p: u64, count: u64, seed: u64) -> Result<BTreeSet<Partition>> {
    Ok(sample_scan(n, p, count, seed)?.types.into_keys().collect())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum OracleMode {
    Exhaustive,
    Sampled { count: u64, seed: u64 },
}

/// What the witness builder says about a P8/P9 class over the scanned field.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldDependentResolution {
    pub partition: Partition,
    pub observed: bool,
    /// The verified recipe, or `None` when the recipe family has no member here.
    pub witness: Option<RecipeJson>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub n: usize,
    pub field: FieldSpec,
    pub mode: OracleMode,
    pub candidates: u64,
    pub nilpotent: u64,
    pub observed: Vec<Partition>,
    pub enumerated_guaranteed: Vec<Partition>,
    pub enumerated_field_dependent: Vec<Partition>,
    /// Observed but not enumerated: contradicts the classification.
    pub extras: Vec<Partition>,
    /// Guaranteed but never observed (meaningful for exhaustive runs).
    pub missing_guaranteed: Vec<Partition>,
    /// One element for each extra type.
    pub reproducers: BTreeMap<String, ElementJson>,
    pub field_dependent: Vec<FieldDependentResolution>,
    pub alarms: Vec<ConsistencyAlarm>,
}

impl VerificationReport {
    pub fn sound(&self) -> bool {
        self.extras.is_empty()
    }

    pub fn complete(&self) -> bool {
        self.missing_guaranteed.is_empty()
    }

    /// Soundness always; completeness only when the scan was exhaustive.
    pub fn passed(&self) -> bool {
        self.sound() && (self.mode != OracleMode::Exhaustive || self.complete())
    }
}

pub fn cross_check(n: usize, p: u64, mode: OracleMode) -> Result<VerificationReport> {
    cross_check_with(n, p, mode, ScanOptions::default())
}

pub fn cross_check_with(n: usize, p: u64, mode: OracleMode, opts: ScanOptions) -> Result<VerificationReport> {
    let field = PrimeField::new(p)?;
    let (observed, candidates, nilpotent, witness_of): (BTreeSet<Partition>, u64, u64, Box<dyn Fn(&Partition) -> ElementJson>) =
        match mode {
            OracleMode::Exhaustive => {
                let scan = exhaustive_scan(n, p, opts)?;
                let idx = scan.types.clone();
                (
                    scan.types.keys().cloned().collect(),
                    scan.candidates,
                    scan.nilpotent,
                    Box::new(move |t| candidate(n, p, idx[t]).expect("index in range").to_json()),
                )
            }
            OracleMode::Sampled { count, seed } => {
                let sample = sample_scan(n, p, count, seed)?;
                let els = sample.types.clone();
                (
                    sample.types.keys().cloned().collect(),
                    sample.draws,
                    sample.nilpotent,
                    Box::new(move |t| els[t].to_json()),
                )
            }
        };
    let listing = enumerate(n, FieldMode::Finite(p))?;
    let enumerated = listing.partitions();
    let guaranteed: BTreeSet<Partition> = listing
        .classes
        .iter()
        .filter(|c| c.guaranteed)
        .map(|c| c.partition.clone())
        .collect();
    let extras: Vec<Partition> = observed.difference(&enumerated).cloned().collect();
    let missing_guaranteed = guaranteed.difference(&observed).cloned().collect();
    let reproducers = extras.iter().map(|t| (t.to_plain_string(), witness_of(t))).collect();
    let mut field_dependent = Vec::new();
    for class in listing.classes.iter().filter(|c| c.field_dependent) {
        let witness = build(n, class, field).ok().map(|w| w.recipe.to_json());
        field_dependent.push(FieldDependentResolution {
            partition: class.partition.clone(),
            observed: observed.contains(&class.partition),
            witness,
        });
    }
    let rev = |s: BTreeSet<Partition>| s.into_iter().rev().collect::<Vec<_>>();
    Ok(VerificationReport {
        n,
        field: field.spec(),
        mode,
        candidates,
        nilpotent,
        observed: rev(observed),
        enumerated_guaranteed: rev(guaranteed),
        enumerated_field_dependent: listing
            .classes
            .iter()
            .filter(|c| c.field_dependent)
            .map(|c| c.partition.clone())
            .collect(),
        extras,
        missing_guaranteed,
        reproducers,
        field_dependent,
        alarms: listing.alarms,
    })
}
