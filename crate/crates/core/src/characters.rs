//! Irreducible characters of `S_n`.
//!
//! Two independent routes are provided:
//!
//! * [`character`]: the Murnaghan–Nakayama rule. Involution classes use a
//!   table keyed by `(λ, s)` that strips 2-cycles first and finishes with the
//!   hook length formula once only fixed points remain. General classes strip
//!   cycles largest-first through a table keyed by [`CharacterKey`].
//! * [`character_involution_poly`]: the character polynomial in the numbers
//!   of fixed points and 2-cycles, which treats the first row specially and
//!   only ever removes dominoes from the rows below it.

use std::collections::{BTreeMap, HashMap};
use std::hash::Hash;
use std::sync::{OnceLock, RwLock};

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exact::{binomial, factorial, rat_int};
use crate::partition::{
    borderstrip_removals, dimension, rim_hook_removals, CycleType, Partition, RemovalKind,
};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CharacterKey {
    pub lambda: Partition,
    pub alpha: CycleType,
}

/// Insert-once memo table. Re-inserting a key is allowed only with the
/// value already stored, so concurrent workers may race on the same entry.
#[derive(Debug)]
pub struct MemoTable<K, V> {
    entries: RwLock<HashMap<K, V>>,
}

impl<K, V> Default for MemoTable<K, V> {
    fn default() -> Self {
        MemoTable {
            entries: RwLock::new(HashMap::new()),
        }
    }
}

impl<K: Eq + Hash + Clone + std::fmt::Debug, V: Clone + PartialEq> MemoTable<K, V> {
    pub fn new() -> Self {
        MemoTable {
            entries: RwLock::new(HashMap::new()),
        }
    }

    pub fn get(&self, key: &K) -> Option<V> {
        self.entries.read().expect("memo lock poisoned").get(key).cloned()
    }

    pub fn insert(&self, key: K, value: V) -> Result<()> {
        let mut guard = self.entries.write().expect("memo lock poisoned");
        match guard.get(&key) {
            Some(existing) if *existing != value => Err(Error::MemoConflict(format!("{key:?}"))),
            Some(_) => Ok(()),
            None => {
                guard.insert(key, value);
                Ok(())
            }
        }
    }

    pub fn len(&self) -> usize {
        self.entries.read().expect("memo lock poisoned").len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn snapshot(&self) -> Vec<(K, V)> {
        self.entries
            .read()
            .expect("memo lock poisoned")
            .iter()
            .map(|(k, v)| (k.clone(), v.clone()))
            .collect()
    }
}

#[derive(Debug, Default)]
pub struct CharacterEngine {
    involutions: MemoTable<(Partition, usize), BigInt>,
    general: MemoTable<CharacterKey, BigInt>,
}

impl CharacterEngine {
    pub fn new() -> Self {
        Self::default()
    }

    /// `χ_λ(α)` by Murnaghan–Nakayama.
    pub fn character(&self, lambda: &Partition, alpha: &CycleType) -> Result<BigInt> {
        if lambda.size() != alpha.n() {
            return Err(Error::SizeMismatch {
                left: lambda.size(),
                right: alpha.n(),
            });
        }
        if let Some(s) = alpha.involution_count() {
            return Ok(self.involution(lambda, s));
        }
        Ok(self.general_character(lambda, alpha))
    }

    /// `χ_λ(1^{n-2s}, 2^s)`.
    pub fn involution(&self, lambda: &Partition, s: usize) -> BigInt {
        assert!(2 * s <= lambda.size(), "too many 2-cycles for this partition");
        if s == 0 {
            return BigInt::from(dimension(lambda));
        }
        let key = (lambda.clone(), s);
        if let Some(v) = self.involutions.get(&key) {
            return v;
        }
        let mut total = BigInt::zero();
        for removal in borderstrip_removals(lambda, 2) {
            let term = match removal.kind {
                RemovalKind::HorizontalDomino => self.involution(&removal.result, s - 1),
                RemovalKind::VerticalDomino => -self.involution(&removal.result, s - 1),
                _ => continue,
            };
            total += term;
        }
        self.involutions
            .insert(key, total.clone())
            .expect("character values are deterministic");
        total
    }

    fn general_character(&self, lambda: &Partition, alpha: &CycleType) -> BigInt {
        let lengths = alpha.cycle_lengths();
        let largest = lengths.first().copied().unwrap_or(0);
        if largest <= 1 {
            return BigInt::from(dimension(lambda));
        }
        if let Some(s) = alpha.involution_count() {
            return self.involution(lambda, s);
        }
        let key = CharacterKey {
            lambda: lambda.clone(),
            alpha: alpha.clone(),
        };
        if let Some(v) = self.general.get(&key) {
            return v;
        }
        let rest = CycleType::from_cycle_lengths(&lengths[1..]);
        let mut total = BigInt::zero();
        for (rho, height) in rim_hook_removals(lambda, largest) {
            let v = self.general_character(&rho, &rest);
            if height % 2 == 0 {
                total += v;
            } else {
                total -= v;
            }
        }
        self.general
            .insert(key, total.clone())
            .expect("character values are deterministic");
        total
    }

    pub fn memo_len(&self) -> usize {
        self.involutions.len() + self.general.len()
    }

    /// Memo contents as `"λ|α" -> decimal` strings.
    pub fn dump(&self) -> BTreeMap<String, String> {
        let mut out = BTreeMap::new();
        for ((lambda, s), v) in self.involutions.snapshot() {
            let alpha = CycleType::involution(lambda.size(), s);
            out.insert(format!("{lambda}|{alpha}"), v.to_string());
        }
        for (key, v) in self.general.snapshot() {
            out.insert(format!("{}|{}", key.lambda, key.alpha), v.to_string());
        }
        out
    }

    pub fn dump_json(&self) -> String {
        serde_json::to_string_pretty(&self.dump()).expect("string map serializes")
    }

    /// Loads a dump. Entries already present must agree exactly.
    pub fn load(&self, entries: &BTreeMap<String, String>) -> Result<usize> {
        for (key, value) in entries {
            let (lambda, alpha) = key
                .split_once('|')
                .ok_or_else(|| Error::Parse(format!("memo key without '|': {key:?}")))?;
            let lambda: Partition = lambda.parse()?;
            let alpha = CycleType::parse(alpha, lambda.size())?;
            let value: BigInt = value
                .parse()
                .map_err(|_| Error::Parse(format!("bad integer {value:?}")))?;
            match alpha.involution_count() {
                Some(s) if s > 0 => self.involutions.insert((lambda, s), value)?,
                Some(_) => {
                    if value != BigInt::from(dimension(&lambda)) {
                        return Err(Error::MemoConflict(key.clone()));
                    }
                }
                None => self.general.insert(CharacterKey { lambda, alpha }, value)?,
            }
        }
        Ok(entries.len())
    }

    pub fn load_json(&self, json: &str) -> Result<usize> {
        let entries: BTreeMap<String, String> =
            serde_json::from_str(json).map_err(|e| Error::Parse(e.to_string()))?;
        self.load(&entries)
    }
}

fn engine() -> &'static CharacterEngine {
    static ENGINE: OnceLock<CharacterEngine> = OnceLock::new();
    ENGINE.get_or_init(CharacterEngine::new)
}

/// `χ_λ(α)` through the process-wide memo table.
pub fn character(lambda: &Partition, alpha: &CycleType) -> Result<BigInt> {
    engine().character(lambda, alpha)
}

/// `χ_λ(1^{n-2s}, 2^s)` through the process-wide memo table.
pub fn involution_character(lambda: &Partition, s: usize) -> BigInt {
    engine().involution(lambda, s)
}

pub fn shared_engine() -> &'static CharacterEngine {
    engine()
}

/// Murnaghan–Nakayama with border strips removed in exactly the given cycle
/// order, without memoization. Used to check independence of the order.
pub fn character_in_order(lambda: &Partition, cycles: &[usize]) -> BigInt {
    match cycles.split_first() {
        None => {
            if lambda.is_empty() {
                BigInt::one()
            } else {
                BigInt::zero()
            }
        }
        Some((&k, rest)) => rim_hook_removals(lambda, k)
            .into_iter()
            .map(|(rho, h)| {
                let v = character_in_order(&rho, rest);
                if h % 2 == 0 {
                    v
                } else {
                    -v
                }
            })
            .sum(),
    }
}

/// `q_μ(x) = d_{[x-|μ|, μ]}` continued polynomially in `x`.
///
/// With `m = |μ|` the hook length formula gives
/// `C(x, m) d_μ prod_{k<=μ_1} (x-m-k+1)/(x-m-k+μ'_k+1)`; every denominator
/// factor cancels against a numerator factor, leaving a degree-`m`
/// polynomial that is evaluated here without division by zero.
pub fn first_row_dimension_poly(mu: &Partition, x: i64) -> BigInt {
    let m = mu.size() as i64;
    let width = mu.part(1) as i64;
    let removed: Vec<i64> = (1..=width)
        .map(|k| mu.column_len(k as usize) as i64 - k + 1)
        .collect();
    let mut product = BigInt::one();
    for c in (1 - width)..=m {
        if !removed.contains(&c) {
            product *= x - m + c;
        }
    }
    product *= BigInt::from(dimension(mu));
    let denom = BigInt::from(factorial(mu.size()));
    debug_assert!((&product % &denom).is_zero(), "polynomial must be integer valued");
    product / denom
}

/// Signed sum over sequences of `j` domino removals from `mu`, weighted by
/// the first-row polynomial of the shape reached.
fn domino_sequences(mu: &Partition, j: usize, x: i64, memo: &mut HashMap<(Partition, usize), BigInt>) -> BigInt {
    if j == 0 {
        return first_row_dimension_poly(mu, x);
    }
    if let Some(v) = memo.get(&(mu.clone(), j)) {
        return v.clone();
    }
    let mut total = BigInt::zero();
    for removal in borderstrip_removals(mu, 2) {
        match removal.kind {
            RemovalKind::HorizontalDomino => total += domino_sequences(&removal.result, j - 1, x, memo),
            RemovalKind::VerticalDomino => total -= domino_sequences(&removal.result, j - 1, x, memo),
            _ => {}
        }
    }
    memo.insert((mu.clone(), j), total.clone());
    total
}

/// Character polynomial `q_ρ(n-2s, s)` for `χ_{[n-|ρ|, ρ]}` on involutions.
///
/// Errors when `[n-|ρ|, ρ]` is not a partition or `2s > n`.
pub fn character_poly_for_rest(rho: &Partition, n: usize, s: usize) -> Result<BigInt> {
    if n < rho.size() + rho.part(1) {
        return Err(Error::Precondition(format!(
            "first row n - |ρ| = {} is shorter than ρ_1 = {}",
            n as i64 - rho.size() as i64,
            rho.part(1)
        )));
    }
    if 2 * s > n {
        return Err(Error::Precondition(format!("s = {s} exceeds n/2 for n = {n}")));
    }
    let x = (n - 2 * s) as i64;
    let mut memo = HashMap::new();
    let mut total = BigInt::zero();
    for j in 0..=s.min(rho.size() / 2) {
        let weight = BigInt::from(binomial(s, j));
        total += weight * domino_sequences(rho, j, x, &mut memo);
    }
    Ok(total)
}

/// `χ_λ(1^{n-2s}, 2^s)` via the character polynomial of `ρ = λ/λ_1`.
pub fn character_involution_poly(lambda: &Partition, s: usize) -> Result<BigInt> {
    character_poly_for_rest(&lambda.without_first_row(), lambda.size(), s)
}

/// `χ_λ(τ)/d_λ` for a transposition `τ`, via Murnaghan–Nakayama.
pub fn transposition_character_ratio(lambda: &Partition) -> Result<BigRational> {
    if lambda.size() < 2 {
        return Err(Error::Precondition("transposition ratio needs n >= 2".into()));
    }
    let chi = involution_character(lambda, 1);
    Ok(BigRational::new(chi, BigInt::from(dimension(lambda))))
}

/// Frobenius' closed form `sum_i [C(λ_i,2) - C(λ'_i,2)] / C(n,2)`.
pub fn frobenius_transposition_ratio(lambda: &Partition) -> BigRational {
    let conj = lambda.conjugate();
    let pairs = |parts: &[usize]| -> BigUint { parts.iter().map(|&l| binomial(l, 2)).sum() };
    let top = BigInt::from(pairs(lambda.parts())) - BigInt::from(pairs(conj.parts()));
    rat_int(top) / rat_int(BigInt::from(binomial(lambda.size(), 2)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;
    use crate::partition::{class_size, enumerate_cycle_types, enumerate_partitions};

    fn p(parts: &[usize]) -> Partition {
        Partition::from_parts(parts.to_vec()).unwrap()
    }

    /// Brute-force trace oracle for S_4: `χ_λ` for the 2-row/hook shapes via
    /// fixed-point counts of permutation representations.
    #[test]
    fn s4_table_by_permutation_counting() {
        // Permutation character on 2-subsets of {1..4} is χ_[4] + χ_[3,1] + χ_[2,2].
        // Fixed 2-subsets of a permutation with cycle type α:
        //   C(a1, 2) + a2.
        for alpha in enumerate_cycle_types(4) {
            let fixed_points = alpha.mult(1) as i64;
            let fixed_pairs = (alpha.mult(1) * alpha.mult(1).saturating_sub(1) / 2 + alpha.mult(2)) as i64;
            let chi_31 = fixed_points - 1;
            let chi_22 = fixed_pairs - 1 - chi_31;
            assert_eq!(character(&p(&[3, 1]), &alpha).unwrap(), BigInt::from(chi_31));
            assert_eq!(character(&p(&[2, 2]), &alpha).unwrap(), BigInt::from(chi_22), "{alpha:?}");
        }
        let c = CycleType::from_cycle_lengths;
        assert_eq!(character(&p(&[2, 2]), &c(&[2, 2])).unwrap(), BigInt::from(2));
        assert_eq!(character(&p(&[2, 2]), &c(&[3, 1])).unwrap(), BigInt::from(-1));
    }

    #[test]
    fn standard_shapes_on_involutions() {
        for n in (2..=12).step_by(2) {
            for s in 0..=n / 2 {
                assert_eq!(
                    involution_character(&p(&[n - 1, 1]), s),
                    BigInt::from(n as i64 - 2 * s as i64 - 1)
                );
                let sign = if s % 2 == 0 { 1 } else { -1 };
                assert_eq!(involution_character(&Partition::column(n), s), BigInt::from(sign));
            }
        }
    }

    #[test]
    fn corrected_n_minus_2_one_one_polynomial() {
        // χ_{[n-2,1,1]}(1^{n-2s},2^s) = C(n-2s,2) - (n-2s) - s + 1.
        for n in (4..=14).step_by(2) {
            for s in 0..=n / 2 {
                let x = (n - 2 * s) as i64;
                let expected = x * (x - 1) / 2 - x - s as i64 + 1;
                assert_eq!(involution_character(&p(&[n - 2, 1, 1]), s), BigInt::from(expected));
            }
        }
    }

    #[test]
    fn polynomial_matches_mn_small() {
        assert_eq!(
            character_involution_poly(&p(&[4, 2]), 1).unwrap(),
            character(&p(&[4, 2]), &CycleType::involution(6, 1)).unwrap()
        );
        for n in (2..=10).step_by(2) {
            for lambda in enumerate_partitions(n) {
                for s in 0..=n / 2 {
                    assert_eq!(
                        character_involution_poly(&lambda, s).unwrap(),
                        involution_character(&lambda, s),
                        "λ={lambda:?} s={s}"
                    );
                }
            }
        }
    }

    #[test]
    fn hook_character_polynomial() {
        // χ_{[n-i,1^i]}(1^{n-2s},2^s) = sum_j C(s,j)(-1)^j C(n-2s-1, i-2j).
        use crate::exact::binomial_poly;
        for n in (2..=12).step_by(2) {
            for i in 0..n {
                for s in 0..=n / 2 {
                    let mut expected = BigInt::zero();
                    for j in 0..=s {
                        let term = BigInt::from(binomial(s, j))
                            * binomial_poly((n - 2 * s) as i64 - 1, i as i64 - 2 * j as i64);
                        if j % 2 == 0 {
                            expected += term;
                        } else {
                            expected -= term;
                        }
                    }
                    assert_eq!(involution_character(&Partition::hook(n, i), s), expected);
                }
            }
        }
    }

    #[test]
    fn poly_shape_precondition() {
        assert!(character_poly_for_rest(&p(&[3]), 5, 0).is_err());
        assert!(character_poly_for_rest(&p(&[2]), 4, 3).is_err());
        assert_eq!(character_poly_for_rest(&Partition::empty(), 8, 3).unwrap(), BigInt::one());
    }

    #[test]
    fn first_row_polynomial_values() {
        assert_eq!(first_row_dimension_poly(&p(&[1]), 5), BigInt::from(4));
        assert_eq!(first_row_dimension_poly(&p(&[2]), 6), BigInt::from(9));
        assert_eq!(first_row_dimension_poly(&p(&[2]), 3), BigInt::from(0));
        // C(x-1, 2) at x = 0 is +1.
        assert_eq!(first_row_dimension_poly(&p(&[1, 1]), 0), BigInt::from(1));
    }

    #[test]
    fn transposition_ratios() {
        for n in 2..=10 {
            assert_eq!(transposition_character_ratio(&Partition::row(n)).unwrap(), rat(1, 1));
            assert_eq!(transposition_character_ratio(&Partition::column(n)).unwrap(), rat(-1, 1));
            assert_eq!(
                transposition_character_ratio(&p(&[n - 1, 1])).unwrap(),
                rat(n as i64 - 3, n as i64 - 1)
            );
            for lambda in enumerate_partitions(n) {
                assert_eq!(
                    transposition_character_ratio(&lambda).unwrap(),
                    frobenius_transposition_ratio(&lambda)
                );
            }
        }
        assert!(transposition_character_ratio(&p(&[1])).is_err());
    }

    #[test]
    fn size_mismatch() {
        assert!(character(&p(&[2, 1]), &CycleType::identity(4)).is_err());
    }

    #[test]
    fn memo_roundtrip_and_conflicts() {
        let engine = CharacterEngine::new();
        for lambda in enumerate_partitions(6) {
            for alpha in enumerate_cycle_types(6) {
                engine.character(&lambda, &alpha).unwrap();
            }
        }
        let dump = engine.dump_json();
        let fresh = CharacterEngine::new();
        let loaded = fresh.load_json(&dump).unwrap();
        assert_eq!(loaded, engine.dump().len());
        assert_eq!(fresh.dump(), engine.dump());
        // Idempotent re-load.
        fresh.load_json(&dump).unwrap();
        let mut corrupt = engine.dump();
        let first_key = corrupt.keys().next().unwrap().clone();
        corrupt.insert(first_key, "999999".into());
        assert!(matches!(fresh.load(&corrupt), Err(Error::MemoConflict(_))));
    }

    #[test]
    fn memo_table_rejects_different_value() {
        let t: MemoTable<u32, u32> = MemoTable::new();
        t.insert(1, 5).unwrap();
        t.insert(1, 5).unwrap();
        assert!(t.insert(1, 6).is_err());
        assert_eq!(t.len(), 1);
    }

    #[test]
    fn row_orthogonality_small() {
        for n in 1..=6 {
            let classes = enumerate_cycle_types(n);
            let lambdas = enumerate_partitions(n);
            for a in &lambdas {
                for b in &lambdas {
                    let sum: BigInt = classes
                        .iter()
                        .map(|c| {
                            BigInt::from(class_size(c)) * character(a, c).unwrap() * character(b, c).unwrap()
                        })
                        .sum();
                    let expected = if a == b { BigInt::from(factorial(n)) } else { BigInt::zero() };
                    assert_eq!(sum, expected);
                }
            }
        }
    }
}
