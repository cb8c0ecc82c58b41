//! Time-`t` distributions of the walk, started at the identity.
//!
//! Exact distributions come from Fourier inversion over the eigenvalue
//! table ([`distribution_at_time`]) or, independently, from repeated
//! class-algebra convolution ([`convolution_oracle`]). A seeded Monte Carlo
//! sampler gives an empirical check on both.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::characters::character;
use crate::error::{Error, Result};
use crate::exact::{factorial, format_rational, pow, rat, rat_int, rat_uint, to_f64};
use crate::partition::{class_size, dimension, enumerate_cycle_types, enumerate_partitions, CycleType};
use crate::spectrum::{build_table, TableOptions, WalkParams};

/// Largest `n` for exact distributions and the convolution oracle.
pub const DISTRIBUTION_CAP: usize = 8;
/// Largest `n` for which the oracle enumerates `S_n` directly.
const ENUMERATION_LIMIT: usize = 6;
/// Samples per Monte Carlo block; each block gets its own RNG stream.
pub const MC_BLOCK: usize = 4096;

/// A class function stored as per-element probabilities.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassDistribution {
    pub n: usize,
    pub probs: BTreeMap<CycleType, BigRational>,
}

impl ClassDistribution {
    pub fn point_mass_identity(n: usize) -> Self {
        let probs = enumerate_cycle_types(n)
            .into_iter()
            .map(|alpha| {
                let v = if alpha == CycleType::identity(n) {
                    BigRational::one()
                } else {
                    BigRational::zero()
                };
                (alpha, v)
            })
            .collect();
        ClassDistribution { n, probs }
    }

    pub fn uniform(n: usize) -> Self {
        let u = BigRational::new(BigInt::one(), BigInt::from(factorial(n)));
        let probs = enumerate_cycle_types(n).into_iter().map(|a| (a, u.clone())).collect();
        ClassDistribution { n, probs }
    }

    pub fn prob(&self, alpha: &CycleType) -> BigRational {
        self.probs.get(alpha).cloned().unwrap_or_else(BigRational::zero)
    }

    /// Total mass of a class, `|α| P(α)`.
    pub fn class_mass(&self, alpha: &CycleType) -> BigRational {
        rat_uint(class_size(alpha)) * self.prob(alpha)
    }

    pub fn total_mass(&self) -> BigRational {
        self.probs.keys().map(|a| self.class_mass(a)).sum()
    }

    /// `E χ_λ = Σ_α |α| P(α) χ_λ(α)`.
    pub fn expect_character(&self, lambda: &crate::partition::Partition) -> Result<BigRational> {
        let mut total = BigRational::zero();
        for alpha in self.probs.keys() {
            total += self.class_mass(alpha) * rat_int(character(lambda, alpha)?);
        }
        Ok(total)
    }

    /// Even-class mass minus odd-class mass.
    pub fn parity_gap(&self) -> BigRational {
        self.probs
            .keys()
            .map(|a| {
                let m = self.class_mass(a);
                if a.is_even() {
                    m
                } else {
                    -m
                }
            })
            .sum()
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("class,class_size,prob_num,prob_den,float_approx\n");
        for (alpha, prob) in &self.probs {
            out.push_str(&format!(
                "\"{}\",{},{},{},{:e}\n",
                alpha,
                class_size(alpha),
                prob.numer(),
                prob.denom(),
                to_f64(prob)
            ));
        }
        out
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        let probs: serde_json::Map<String, serde_json::Value> = self
            .probs
            .iter()
            .map(|(a, p)| (a.to_string(), serde_json::Value::String(format_rational(p))))
            .collect();
        serde_json::json!({ "n": self.n, "probs": probs })
    }
}

/// A product of disjoint transpositions, stored 1-based with `a < b`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Involution {
    pub n: usize,
    pub pairs: Vec<(usize, usize)>,
}

impl Involution {
    pub fn s(&self) -> usize {
        self.pairs.len()
    }

    pub fn cycle_type(&self) -> CycleType {
        CycleType::involution(self.n, self.s())
    }

    /// One-line notation, 0-based images.
    pub fn to_permutation(&self) -> Vec<usize> {
        let mut perm: Vec<usize> = (0..self.n).collect();
        for &(a, b) in &self.pairs {
            perm.swap(a - 1, b - 1);
        }
        perm
    }
}

pub fn generator_distribution(params: &WalkParams) -> ClassDistribution {
    let n = params.n();
    let mut dist = ClassDistribution {
        n,
        probs: enumerate_cycle_types(n).into_iter().map(|a| (a, BigRational::zero())).collect(),
    };
    for s in 0..=params.half() {
        let alpha = CycleType::involution(n, s);
        let per_element = params.involution_weight(s) / rat_uint(class_size(&alpha));
        dist.probs.insert(alpha, per_element);
    }
    dist
}

/// A Bernoulli trial with exact rational success probability when the
/// denominator fits in 64 bits.
fn bernoulli(rng: &mut impl Rng, p: &BigRational) -> bool {
    if p.is_zero() {
        return false;
    }
    if p.is_one() {
        return true;
    }
    match (p.numer().to_u64(), p.denom().to_u64()) {
        (Some(num), Some(den)) => rng.random_range(0..den) < num,
        _ => rng.random::<f64>() < to_f64(p),
    }
}

pub fn sample_generator_with(params: &WalkParams, rng: &mut impl Rng) -> Involution {
    let n = params.n();
    let mut points: Vec<usize> = (1..=n).collect();
    points.shuffle(rng);
    let discard = params.p();
    let mut pairs: Vec<(usize, usize)> = points
        .chunks_exact(2)
        .filter(|_| !bernoulli(rng, discard))
        .map(|c| (c[0].min(c[1]), c[0].max(c[1])))
        .collect();
    pairs.sort_unstable();
    Involution { n, pairs }
}

pub fn sample_generator(params: &WalkParams, seed: u64) -> Involution {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    sample_generator_with(params, &mut rng)
}

/// Cycle type of a permutation in 0-based one-line notation.
pub fn cycle_type_of(perm: &[usize]) -> CycleType {
    let mut seen = vec![false; perm.len()];
    let mut lengths = Vec::new();
    for start in 0..perm.len() {
        if seen[start] {
            continue;
        }
        let mut len = 0;
        let mut x = start;
        while !seen[x] {
            seen[x] = true;
            x = perm[x];
            len += 1;
        }
        lengths.push(len);
    }
    CycleType::from_cycle_lengths(&lengths)
}

fn check_cap(n: usize, cap: usize, what: &'static str) -> Result<()> {
    if n > cap {
        return Err(Error::CapExceeded { what, n, cap });
    }
    Ok(())
}

/// `P^{*t}(g) = (1/n!) Σ_λ d_λ ψ_λ^t χ_λ(g)`.
pub fn distribution_at_time(params: &WalkParams, t: usize) -> Result<ClassDistribution> {
    distribution_at_time_capped(params, t, DISTRIBUTION_CAP)
}

pub fn distribution_at_time_capped(params: &WalkParams, t: usize, cap: usize) -> Result<ClassDistribution> {
    check_cap(params.n(), cap, "exact distribution")?;
    if t == 0 {
        return Ok(ClassDistribution::point_mass_identity(params.n()));
    }
    Ok(FourierInverter::new(params, cap)?.at(t))
}

/// Precomputed `d_λ`, `ψ_λ` and `χ_λ(α)` for evaluating many time steps.
pub struct FourierInverter {
    n: usize,
    classes: Vec<CycleType>,
    /// `(d_λ / n!, ψ_λ, χ_λ(α) for each class)`.
    terms: Vec<(BigRational, BigRational, Vec<BigInt>)>,
}

impl FourierInverter {
    pub fn new(params: &WalkParams, cap: usize) -> Result<Self> {
        let n = params.n();
        check_cap(n, cap, "exact distribution")?;
        let table = build_table(params, TableOptions { cap: cap.max(n), verify_recursive: false })?;
        let classes = enumerate_cycle_types(n);
        let n_fact = rat_uint(factorial(n));
        let terms = table
            .iter()
            .map(|(lambda, psi)| {
                let chars = classes.iter().map(|a| character(lambda, a)).collect::<Result<Vec<_>>>()?;
                Ok((rat_uint(dimension(lambda)) / &n_fact, psi.clone(), chars))
            })
            .collect::<Result<_>>()?;
        Ok(FourierInverter { n, classes, terms })
    }

    pub fn at(&self, t: usize) -> ClassDistribution {
        let powers: Vec<BigRational> = self.terms.iter().map(|(d, psi, _)| d * pow(psi, t)).collect();
        let probs = self
            .classes
            .par_iter()
            .enumerate()
            .map(|(k, alpha)| {
                let mut total = BigRational::zero();
                for ((_, _, chars), w) in self.terms.iter().zip(&powers) {
                    if !chars[k].is_zero() && !w.is_zero() {
                        total += w * rat_int(chars[k].clone());
                    }
                }
                (alpha.clone(), total)
            })
            .collect();
        ClassDistribution { n: self.n, probs }
    }
}

/// Class-algebra structure constants `c[a][b][c]`: the number of ways to
/// write a fixed element of class `c` as `x y` with `x` in `a`, `y` in `b`.
/// Only rows for involution classes `a` are kept.
struct StructureConstants {
    classes: Vec<CycleType>,
    involutions: Vec<usize>,
    constants: Vec<Vec<Vec<BigRational>>>,
}

impl StructureConstants {
    fn compute(n: usize) -> Result<Self> {
        if n <= ENUMERATION_LIMIT {
            Ok(Self::by_enumeration(n))
        } else {
            Self::by_characters(n)
        }
    }

    fn skeleton(n: usize) -> (Vec<CycleType>, Vec<usize>) {
        let classes = enumerate_cycle_types(n);
        let involutions = classes
            .iter()
            .enumerate()
            .filter(|(_, a)| a.involution_count().is_some())
            .map(|(k, _)| k)
            .collect();
        (classes, involutions)
    }

    fn by_enumeration(n: usize) -> Self {
        let (classes, involutions) = Self::skeleton(n);
        let index: HashMap<CycleType, usize> =
            classes.iter().enumerate().map(|(k, a)| (a.clone(), k)).collect();
        let k = classes.len();
        let mut counts = vec![vec![vec![0u64; k]; k]; k];
        let elements = all_permutations(n);
        for (c, gamma) in classes.iter().enumerate() {
            let z = representative(gamma);
            for x in &elements {
                let a = index[&cycle_type_of(x)];
                if classes[a].involution_count().is_none() {
                    continue;
                }
                // y = x^{-1} z
                let mut inv = vec![0; n];
                for (i, &xi) in x.iter().enumerate() {
                    inv[xi] = i;
                }
                let y: Vec<usize> = (0..n).map(|i| inv[z[i]]).collect();
                counts[a][index[&cycle_type_of(&y)]][c] += 1;
            }
        }
        let constants = counts
            .into_iter()
            .map(|row| row.into_iter().map(|col| col.into_iter().map(rat_int).collect()).collect())
            .collect();
        StructureConstants {
            classes,
            involutions,
            constants,
        }
    }

    /// `c_{ab}^c = |a||b|/n! Σ_λ χ_λ(a) χ_λ(b) χ_λ(c) / d_λ`.
    fn by_characters(n: usize) -> Result<Self> {
        let (classes, involutions) = Self::skeleton(n);
        let k = classes.len();
        let partitions = enumerate_partitions(n);
        let mut chars = vec![vec![BigInt::zero(); k]; partitions.len()];
        for (l, lambda) in partitions.iter().enumerate() {
            for (a, alpha) in classes.iter().enumerate() {
                chars[l][a] = character(lambda, alpha)?;
            }
        }
        let dims: Vec<BigRational> = partitions.iter().map(|l| rat_uint(dimension(l))).collect();
        let sizes: Vec<BigRational> = classes.iter().map(|a| rat_uint(class_size(a))).collect();
        let n_fact = rat_uint(factorial(n));
        let mut constants = vec![vec![vec![BigRational::zero(); k]; k]; k];
        for &a in &involutions {
            for b in 0..k {
                for c in 0..k {
                    let sum: BigRational = (0..partitions.len())
                        .map(|l| rat_int(&chars[l][a] * &chars[l][b] * &chars[l][c]) / &dims[l])
                        .sum();
                    let value = &sizes[a] * &sizes[b] / &n_fact * sum;
                    if !value.is_integer() || value.is_negative() {
                        return Err(Error::IdentityFailed(format!(
                            "structure constant c[{}][{}][{}] = {} is not a count",
                            classes[a],
                            classes[b],
                            classes[c],
                            format_rational(&value)
                        )));
                    }
                    constants[a][b][c] = value;
                }
            }
        }
        Ok(StructureConstants {
            classes,
            involutions,
            constants,
        })
    }

    /// Per-element convolution `(g * μ)(z) = Σ_{a,b} g_a μ_b c_{ab}^{[z]}`.
    fn convolve(&self, generator: &[BigRational], current: &[BigRational]) -> Vec<BigRational> {
        let k = self.classes.len();
        (0..k)
            .map(|c| {
                let mut total = BigRational::zero();
                for &a in &self.involutions {
                    if generator[a].is_zero() {
                        continue;
                    }
                    for b in 0..k {
                        let coeff = &self.constants[a][b][c];
                        if !coeff.is_zero() && !current[b].is_zero() {
                            total += &generator[a] * &current[b] * coeff;
                        }
                    }
                }
                total
            })
            .collect()
    }
}

fn representative(alpha: &CycleType) -> Vec<usize> {
    let mut perm = Vec::with_capacity(alpha.n());
    let mut start = 0;
    for len in alpha.cycle_lengths() {
        for j in 0..len {
            perm.push(start + (j + 1) % len);
        }
        start += len;
    }
    perm
}

fn all_permutations(n: usize) -> Vec<Vec<usize>> {
    // Heap's algorithm.
    let mut perm: Vec<usize> = (0..n).collect();
    let mut out = vec![perm.clone()];
    let mut c = vec![0; n];
    let mut i = 0;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                perm.swap(0, i);
            } else {
                perm.swap(c[i], i);
            }
            out.push(perm.clone());
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    out
}

/// Exact time-`t` distribution by repeated convolution with the generator,
/// independent of the eigenvalue table.
pub fn convolution_oracle(params: &WalkParams, t: usize) -> Result<ClassDistribution> {
    convolution_oracle_capped(params, t, DISTRIBUTION_CAP)
}

pub fn convolution_oracle_capped(params: &WalkParams, t: usize, cap: usize) -> Result<ClassDistribution> {
    let n = params.n();
    check_cap(n, cap, "convolution oracle")?;
    if t == 0 {
        return Ok(ClassDistribution::point_mass_identity(n));
    }
    let sc = StructureConstants::compute(n)?;
    let gen = generator_distribution(params);
    let g: Vec<BigRational> = sc.classes.iter().map(|a| gen.prob(a)).collect();
    let mut current = g.clone();
    for _ in 1..t {
        current = sc.convolve(&g, &current);
    }
    Ok(ClassDistribution {
        n,
        probs: sc.classes.iter().cloned().zip(current).collect(),
    })
}

/// `(1/2) Σ_α |α| |P(α) - 1/n!|`.
pub fn total_variation(d: &ClassDistribution) -> BigRational {
    let u = BigRational::new(BigInt::one(), BigInt::from(factorial(d.n)));
    let total: BigRational = d
        .probs
        .iter()
        .map(|(alpha, p)| rat_uint(class_size(alpha)) * (p - &u).abs())
        .sum();
    total / rat(2, 1)
}

/// `max_g (1 - n! P(g))` and the class where it is attained. Ties go to the
/// cycle-lexicographically least class.
pub fn separation(d: &ClassDistribution) -> (BigRational, CycleType) {
    let n_fact = rat_uint(factorial(d.n));
    let mut best: Option<(BigRational, CycleType)> = None;
    for (alpha, p) in &d.probs {
        let value = BigRational::one() - &n_fact * p;
        let better = match &best {
            None => true,
            Some((v, a)) => match value.cmp(v) {
                Ordering::Greater => true,
                // Sorted order is cycle-lex descending, so a later tie is smaller.
                Ordering::Equal => alpha > a,
                Ordering::Less => false,
            },
        };
        if better {
            best = Some((value, alpha.clone()));
        }
    }
    best.expect("a distribution has at least one class")
}

#[derive(Clone, Debug, Serialize)]
pub struct MonteCarloClass {
    pub class: String,
    pub count: u64,
    pub frequency: f64,
    pub std_error: f64,
}

#[derive(Clone, Debug)]
pub struct MonteCarloEstimate {
    pub n: usize,
    pub t: usize,
    pub samples: u64,
    pub seed: u64,
    pub counts: BTreeMap<CycleType, u64>,
}

impl MonteCarloEstimate {
    /// Empirical class frequency, i.e. an estimate of the class mass.
    pub fn frequency(&self, alpha: &CycleType) -> f64 {
        *self.counts.get(alpha).unwrap_or(&0) as f64 / self.samples as f64
    }

    pub fn std_error(&self, alpha: &CycleType) -> f64 {
        let f = self.frequency(alpha);
        (f * (1.0 - f) / self.samples as f64).sqrt()
    }

    pub fn rows(&self) -> Vec<MonteCarloClass> {
        enumerate_cycle_types(self.n)
            .into_iter()
            .map(|alpha| MonteCarloClass {
                class: alpha.to_string(),
                count: *self.counts.get(&alpha).unwrap_or(&0),
                frequency: self.frequency(&alpha),
                std_error: self.std_error(&alpha),
            })
            .collect()
    }

    /// Largest deviation from the exact class masses in units of the exact
    /// binomial standard deviation. Classes with zero variance must match
    /// exactly or the result is infinite.
    pub fn max_sigma_deviation(&self, exact: &ClassDistribution) -> f64 {
        let mut worst: f64 = 0.0;
        for alpha in exact.probs.keys() {
            let m = to_f64(&exact.class_mass(alpha));
            let f = self.frequency(alpha);
            let sigma = (m * (1.0 - m) / self.samples as f64).sqrt();
            let dev = if sigma == 0.0 {
                if (f - m).abs() < 1e-12 {
                    0.0
                } else {
                    f64::INFINITY
                }
            } else {
                (f - m).abs() / sigma
            };
            worst = worst.max(dev);
        }
        worst
    }
}

/// Runs `samples` independent walks of length `t`. Block `k` uses the
/// ChaCha stream `k` of `seed`, so the result depends only on
/// `(seed, samples)`.
pub fn monte_carlo_estimate(params: &WalkParams, t: usize, samples: u64, seed: u64) -> Result<MonteCarloEstimate> {
    if samples == 0 {
        return Err(Error::Precondition("samples must be at least 1".into()));
    }
    let n = params.n();
    let blocks = samples.div_ceil(MC_BLOCK as u64);
    let counts = (0..blocks)
        .into_par_iter()
        .map(|block| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(block);
            let start = block * MC_BLOCK as u64;
            let len = (samples - start).min(MC_BLOCK as u64);
            let mut local: HashMap<CycleType, u64> = HashMap::new();
            let mut state = vec![0usize; n];
            for _ in 0..len {
                for (i, v) in state.iter_mut().enumerate() {
                    *v = i;
                }
                for _ in 0..t {
                    for (a, b) in sample_generator_with(params, &mut rng).pairs {
                        state.swap(a - 1, b - 1);
                    }
                }
                *local.entry(cycle_type_of(&state)).or_default() += 1;
            }
            local
        })
        .reduce(HashMap::new, |mut acc, part| {
            for (k, v) in part {
                *acc.entry(k).or_default() += v;
            }
            acc
        });
    Ok(MonteCarloEstimate {
        n,
        t,
        samples,
        seed,
        counts: counts.into_iter().collect(),
    })
}
