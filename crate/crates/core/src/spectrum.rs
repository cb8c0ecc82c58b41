//! Eigenvalues `ψ_λ` of the involution walk.
//!
//! The generator picks a uniform perfect matching of `{1..n}` and discards
//! each of its `n/2` transpositions independently with probability `p`.
//! Three independent routes compute `ψ_λ`:
//!
//! * [`eigenvalue_direct`]: the weighted character-ratio sum over the
//!   `n/2 + 1` involution classes.
//! * [`eigenvalue_recursive`]: the two-box recursion onto walks of degree
//!   `n - 2` (horizontal dominoes weight 1, vertical dominoes `2p - 1`,
//!   disconnected pairs `2p`).
//! * [`eigenvalue_closed_form`]: closed forms for `[n]`, `[n-1,1]`,
//!   `[n-2,2]`, `[n-2,1,1]`, `[1^n]` and all hooks.

use std::collections::BTreeMap;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::ser::{SerializeMap, SerializeStruct};
use serde::{Serialize, Serializer};

use crate::characters::{involution_character, transposition_character_ratio, MemoTable};
use crate::error::{Error, Result};
use crate::exact::{
    binomial, binomial_poly, format_rational, is_probability, multinomial, parse_rational, pow,
    rat, rat_int, rat_uint,
};
use crate::partition::{
    borderstrip_removals, dimension, dimension_ratio, enumerate_partitions, majorization_leq,
    Majorization, Partition, RemovalKind,
};

/// Default largest `n` for full eigenvalue tables.
pub const DEFAULT_TABLE_CAP: usize = 20;
/// Largest `n` for single-partition queries.
pub const SINGLE_QUERY_CAP: usize = 40;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct WalkParams {
    n: usize,
    p: BigRational,
}

impl WalkParams {
    pub fn new(n: usize, p: BigRational) -> Result<Self> {
        if n < 2 || !n.is_multiple_of(2) {
            return Err(Error::OddDegree(n));
        }
        if !is_probability(&p) {
            return Err(Error::InvalidProbability(format_rational(&p)));
        }
        Ok(WalkParams { n, p })
    }

    /// Convenience constructor for `p = num/den`.
    pub fn with_ratio(n: usize, num: i64, den: i64) -> Result<Self> {
        WalkParams::new(n, rat(num, den))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn p(&self) -> &BigRational {
        &self.p
    }

    pub fn half(&self) -> usize {
        self.n / 2
    }

    /// The same laziness on `S_{n-2}`; `None` below `n = 4`.
    pub fn reduced(&self) -> Option<WalkParams> {
        (self.n >= 4).then(|| WalkParams {
            n: self.n - 2,
            p: self.p.clone(),
        })
    }

    /// Probability that the generator has exactly `s` two-cycles:
    /// `C(n/2, s) p^{n/2-s} (1-p)^s`.
    pub fn involution_weight(&self, s: usize) -> BigRational {
        let half = self.half();
        let q = BigRational::one() - &self.p;
        rat_uint(binomial(half, s)) * pow(&self.p, half - s) * pow(&q, s)
    }
}

fn check_size(lambda: &Partition, params: &WalkParams) -> Result<()> {
    if lambda.size() != params.n() {
        return Err(Error::SizeMismatch {
            left: lambda.size(),
            right: params.n(),
        });
    }
    Ok(())
}

pub fn eigenvalue_direct(lambda: &Partition, params: &WalkParams) -> Result<BigRational> {
    check_size(lambda, params)?;
    let d = rat_uint(dimension(lambda));
    let total: BigRational = (0..=params.half())
        .map(|s| params.involution_weight(s) * rat_int(involution_character(lambda, s)))
        .sum();
    Ok(total / d)
}

fn recursion_memo() -> &'static MemoTable<(Partition, BigRational), BigRational> {
    static MEMO: OnceLock<MemoTable<(Partition, BigRational), BigRational>> = OnceLock::new();
    MEMO.get_or_init(MemoTable::new)
}

pub fn eigenvalue_recursive(lambda: &Partition, params: &WalkParams) -> Result<BigRational> {
    check_size(lambda, params)?;
    Ok(recursive_value(lambda, params.p()))
}

fn recursive_value(lambda: &Partition, p: &BigRational) -> BigRational {
    let two_p = p * rat(2, 1);
    let vertical_weight = &two_p - BigRational::one();
    match lambda.size() {
        0 => return BigRational::one(),
        2 if lambda.len() == 1 => return BigRational::one(),
        2 => return vertical_weight,
        _ => {}
    }
    let key = (lambda.clone(), p.clone());
    if let Some(v) = recursion_memo().get(&key) {
        return v;
    }
    let mut total = BigRational::zero();
    for removal in borderstrip_removals(lambda, 2) {
        let weight = match removal.kind {
            RemovalKind::HorizontalDomino => BigRational::one(),
            RemovalKind::VerticalDomino => vertical_weight.clone(),
            RemovalKind::DisconnectedPair => two_p.clone(),
            RemovalKind::SingleBox => unreachable!("size-2 removals only"),
        };
        let psi_rho = recursive_value(&removal.result, p);
        total += weight * psi_rho * dimension_ratio(&removal.result, lambda);
    }
    recursion_memo()
        .insert(key, total.clone())
        .expect("recursion is deterministic");
    total
}

/// `ψ_{[n-i,1^i]}` by counting recursion paths down to `[2]` and `[1,1]`.
///
/// A path with `j` disconnected pairs and `v` vertical dominoes carries
/// weight `(2p)^j (2p-1)^v`, and the `[1,1]` base contributes one more
/// factor `2p-1`. All dimension ratios telescope to `1/C(n-1,i)`.
pub fn hook_eigenvalue_paths(n: usize, i: usize, p: &BigRational) -> BigRational {
    assert!(n.is_multiple_of(2) && n >= 2 && i < n, "hook eigenvalue needs even n and i < n");
    let steps = n / 2 - 1;
    let two_p = p * rat(2, 1);
    let vert = &two_p - BigRational::one();
    let mut total = BigRational::zero();
    for j in 0..=i {
        // Base [2]: n-i-2 row boxes and i column boxes removed.
        if (i - j).is_multiple_of(2) && n >= i + j + 2 && (n - i - j - 2).is_multiple_of(2) {
            let count = multinomial(steps, &[j, (i - j) / 2]);
            total += rat_uint(count) * pow(&two_p, j) * pow(&vert, (i - j) / 2);
        }
        // Base [1,1]: n-i-1 row boxes and i-1 column boxes removed.
        if i > j && (i - j - 1).is_multiple_of(2) && n > i + j && (n - i - j - 1).is_multiple_of(2) {
            let count = multinomial(steps, &[j, (i - j - 1) / 2]);
            total += rat_uint(count) * pow(&two_p, j) * pow(&vert, (i - j - 1) / 2 + 1);
        }
    }
    total / rat_uint(binomial(n - 1, i))
}

/// `ψ_{[n-i,1^i]}` from the hook character polynomial:
/// `C(n-1,i)^{-1} sum_{k,l} C(n/2; k,l) (-1)^l p^{n/2-k-l} (1-p)^{k+l} C(n-2k-2l-1, i-2l)`.
pub fn hook_eigenvalue_char_poly(n: usize, i: usize, p: &BigRational) -> BigRational {
    assert!(n.is_multiple_of(2) && n >= 2 && i < n, "hook eigenvalue needs even n and i < n");
    let half = n / 2;
    let q = BigRational::one() - p;
    let mut total = BigRational::zero();
    for k in 0..=half {
        for l in 0..=(half - k) {
            let chi = binomial_poly(n as i64 - 2 * (k + l) as i64 - 1, i as i64 - 2 * l as i64);
            if chi.is_zero() {
                continue;
            }
            let mut term = rat_uint(multinomial(half, &[k, l]))
                * pow(p, half - k - l)
                * pow(&q, k + l)
                * rat_int(chi);
            if l % 2 == 1 {
                term = -term;
            }
            total += term;
        }
    }
    total / rat_uint(binomial(n - 1, i))
}

/// Hook eigenvalue at `p = 1/2`: `C(n/2-1,i)/C(n-1,i)` for `i <= (n-1)/2`,
/// zero otherwise.
pub fn hook_eigenvalue_half(n: usize, i: usize) -> BigRational {
    if 2 * i > n - 1 {
        return BigRational::zero();
    }
    rat_uint(binomial(n / 2 - 1, i)) / rat_uint(binomial(n - 1, i))
}

/// `ψ_{[n-2,2]}` with the sign as originally printed, `p^2 - (1-p)^2/(n-3)`.
/// Kept only so the known misprint can be pinned as an expected failure.
pub fn printed_two_row_two(n: usize, p: &BigRational) -> BigRational {
    let q = BigRational::one() - p;
    p * p - &q * &q / rat(n as i64 - 3, 1)
}

/// `ψ_{[n-2,1,1]}` with the extra `-2/((n-1)(n-2))` term as originally
/// printed in the expectation formula. Expected to disagree with the oracle.
pub fn printed_n_minus_2_one_one(n: usize, p: &BigRational) -> BigRational {
    let n = n as i64;
    p * p - (BigRational::one() - p * p) / rat(n - 1, 1) - rat(2, (n - 1) * (n - 2))
}

pub fn eigenvalue_closed_form(lambda: &Partition, params: &WalkParams) -> Option<BigRational> {
    let n = params.n();
    if lambda.size() != n {
        return None;
    }
    let p = params.p();
    let q = BigRational::one() - p;
    let parts = lambda.parts();
    if parts == [n] {
        return Some(BigRational::one());
    }
    if lambda.len() == n {
        return Some(pow(&(p * rat(2, 1) - BigRational::one()), n / 2));
    }
    if parts == [n - 1, 1] {
        return Some(p - &q / rat(n as i64 - 1, 1));
    }
    if n >= 4 && parts == [n - 2, 2] {
        return Some(p * p + &q * &q / rat(n as i64 - 3, 1));
    }
    if n >= 4 && parts == [n - 2, 1, 1] {
        return Some(p * p - (BigRational::one() - p * p) / rat(n as i64 - 1, 1));
    }
    if lambda.is_hook() {
        let i = lambda.len() - 1;
        if *p == rat(1, 2) {
            return Some(hook_eigenvalue_half(n, i));
        }
        return Some(hook_eigenvalue_paths(n, i, p));
    }
    None
}

/// Sum of the recursion coefficients, checked against
/// `p + (1-p) χ_λ(τ)/d_λ`.
pub fn coefficient_sum(lambda: &Partition, p: &BigRational) -> Result<BigRational> {
    if lambda.size() < 2 {
        return Err(Error::Precondition("coefficient sum needs n >= 2".into()));
    }
    let two_p = p * rat(2, 1);
    let mut total = BigRational::zero();
    for removal in borderstrip_removals(lambda, 2) {
        let weight = match removal.kind {
            RemovalKind::HorizontalDomino => BigRational::one(),
            RemovalKind::VerticalDomino => &two_p - BigRational::one(),
            RemovalKind::DisconnectedPair => two_p.clone(),
            RemovalKind::SingleBox => unreachable!(),
        };
        total += weight * dimension_ratio(&removal.result, lambda);
    }
    let expected = p + (BigRational::one() - p) * transposition_character_ratio(lambda)?;
    if total != expected {
        return Err(Error::IdentityFailed(format!(
            "coefficient sum of {lambda:?}: {} != {}",
            format_rational(&total),
            format_rational(&expected)
        )));
    }
    Ok(total)
}

/// `E_{P^{*t}} χ_λ = d_λ ψ_λ^t`.
pub fn expected_character(lambda: &Partition, params: &WalkParams, t: usize) -> Result<BigRational> {
    let psi = eigenvalue_direct(lambda, params)?;
    Ok(rat_uint(dimension(lambda)) * pow(&psi, t))
}

#[derive(Clone, Copy, Debug)]
pub struct TableOptions {
    pub cap: usize,
    pub verify_recursive: bool,
}

impl Default for TableOptions {
    fn default() -> Self {
        TableOptions {
            cap: DEFAULT_TABLE_CAP,
            verify_recursive: false,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct EigenvalueTable {
    pub params: WalkParams,
    pub values: BTreeMap<Partition, BigRational>,
}

impl EigenvalueTable {
    pub fn get(&self, lambda: &Partition) -> Option<&BigRational> {
        self.values.get(lambda)
    }

    pub fn psi(&self, lambda: &Partition) -> &BigRational {
        self.values
            .get(lambda)
            .unwrap_or_else(|| panic!("no eigenvalue for {lambda:?} in table for n = {}", self.params.n()))
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Partition, &BigRational)> {
        self.values.iter()
    }

    /// Checks completeness, `ψ_[n] = 1` and `|ψ| <= 1`.
    pub fn validate(&self) -> Result<()> {
        let n = self.params.n();
        let expected = enumerate_partitions(n);
        if self.values.len() != expected.len() || expected.iter().any(|l| !self.values.contains_key(l)) {
            return Err(Error::Precondition(format!("eigenvalue table for n = {n} is incomplete")));
        }
        if self.values[&Partition::row(n)] != BigRational::one() {
            return Err(Error::Precondition("ψ_[n] must equal 1".into()));
        }
        if let Some((l, _)) = self.values.iter().find(|(_, v)| v.abs() > BigRational::one()) {
            return Err(Error::Precondition(format!("|ψ| exceeds 1 at {l:?}")));
        }
        Ok(())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("table serializes")
    }

    pub fn from_json(json: &str) -> Result<Self> {
        #[derive(serde::Deserialize)]
        struct Raw {
            n: usize,
            p: String,
            psi: BTreeMap<String, String>,
        }
        let raw: Raw = serde_json::from_str(json).map_err(|e| Error::Parse(e.to_string()))?;
        let params = WalkParams::new(raw.n, parse_rational(&raw.p)?)?;
        let mut values = BTreeMap::new();
        for (k, v) in raw.psi {
            let lambda: Partition = k.parse()?;
            if lambda.size() != raw.n {
                return Err(Error::SizeMismatch {
                    left: lambda.size(),
                    right: raw.n,
                });
            }
            values.insert(lambda, parse_rational(&v)?);
        }
        let table = EigenvalueTable { params, values };
        table.validate()?;
        Ok(table)
    }
}

impl Serialize for EigenvalueTable {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        struct Psi<'a>(&'a BTreeMap<Partition, BigRational>);
        impl Serialize for Psi<'_> {
            fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
                let mut map = serializer.serialize_map(Some(self.0.len()))?;
                for (k, v) in self.0 {
                    map.serialize_entry(&k.to_string(), &format_rational(v))?;
                }
                map.end()
            }
        }
        let mut s = serializer.serialize_struct("EigenvalueTable", 3)?;
        s.serialize_field("n", &self.params.n())?;
        s.serialize_field("p", &format_rational(self.params.p()))?;
        s.serialize_field("psi", &Psi(&self.values))?;
        s.end()
    }
}

/// Direct-method eigenvalues for every partition of `n`, optionally
/// cross-checked against the recursion.
pub fn build_table(params: &WalkParams, options: TableOptions) -> Result<EigenvalueTable> {
    if params.n() > options.cap {
        return Err(Error::CapExceeded {
            what: "eigenvalue table",
            n: params.n(),
            cap: options.cap,
        });
    }
    let partitions = enumerate_partitions(params.n());
    let computed: Vec<(Partition, BigRational)> = partitions
        .into_par_iter()
        .map(|lambda| {
            let direct = eigenvalue_direct(&lambda, params)?;
            if options.verify_recursive {
                let recursive = eigenvalue_recursive(&lambda, params)?;
                if recursive != direct {
                    return Err(Error::IdentityFailed(format!(
                        "direct and recursive ψ differ at {lambda:?}"
                    )));
                }
            }
            Ok((lambda, direct))
        })
        .collect::<Result<_>>()?;
    Ok(EigenvalueTable {
        params: params.clone(),
        values: computed.into_iter().collect(),
    })
}

/// One `ψ_larger >= ψ_smaller` comparison.
#[derive(Clone, Debug, Serialize)]
pub struct Comparison {
    #[serde(serialize_with = "ser_display")]
    pub larger: Partition,
    #[serde(serialize_with = "ser_display")]
    pub smaller: Partition,
    #[serde(serialize_with = "ser_rational")]
    pub larger_value: BigRational,
    #[serde(serialize_with = "ser_rational")]
    pub smaller_value: BigRational,
    pub holds: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckReport {
    pub name: String,
    pub passed: bool,
    pub comparisons: Vec<Comparison>,
}

impl CheckReport {
    fn from_comparisons(name: &str, comparisons: Vec<Comparison>) -> Self {
        CheckReport {
            name: name.to_string(),
            passed: comparisons.iter().all(|c| c.holds),
            comparisons,
        }
    }

    pub fn violations(&self) -> impl Iterator<Item = &Comparison> {
        self.comparisons.iter().filter(|c| !c.holds)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct MonotonicityReport {
    pub n: usize,
    #[serde(serialize_with = "ser_rational")]
    pub p: BigRational,
    /// `ψ_{[n-i,i]}` weakly decreasing in `i`.
    pub two_row_decreasing: CheckReport,
    /// `ψ_λ <= ψ_{[n-i,i]}` whenever `λ_1 = n - i`.
    pub two_row_dominates: CheckReport,
    /// `ψ_λ <= ψ_{[n/2,n/2]}` whenever `λ'_1 <= λ_1 < n/2`.
    pub balanced_dominates: CheckReport,
}

impl MonotonicityReport {
    pub fn all_passed(&self) -> bool {
        self.two_row_decreasing.passed && self.two_row_dominates.passed && self.balanced_dominates.passed
    }
}

fn compare(table: &EigenvalueTable, larger: &Partition, smaller: &Partition) -> Comparison {
    let lv = table.psi(larger).clone();
    let sv = table.psi(smaller).clone();
    Comparison {
        holds: lv >= sv,
        larger: larger.clone(),
        smaller: smaller.clone(),
        larger_value: lv,
        smaller_value: sv,
    }
}

/// Runs the three two-row monotonicity checks. Violations are reported,
/// never raised.
pub fn verify_monotonicity(params: &WalkParams) -> Result<MonotonicityReport> {
    let table = build_table(params, TableOptions::default())?;
    Ok(monotonicity_from_table(&table))
}

pub fn monotonicity_from_table(table: &EigenvalueTable) -> MonotonicityReport {
    let n = table.params.n();
    let half = n / 2;
    let two_row = |i: usize| Partition::two_row(n, i);

    let decreasing = (0..half).map(|i| compare(table, &two_row(i), &two_row(i + 1))).collect();

    let mut dominates = Vec::new();
    for (lambda, _) in table.iter() {
        let i = n - lambda.part(1);
        if i >= 1 && 2 * i <= n && *lambda != two_row(i) {
            dominates.push(compare(table, &two_row(i), lambda));
        }
    }

    let balanced = two_row(half);
    let mut below = Vec::new();
    for (lambda, _) in table.iter() {
        if lambda.column_len(1) <= lambda.part(1) && 2 * lambda.part(1) < n {
            below.push(compare(table, &balanced, lambda));
        }
    }

    MonotonicityReport {
        n,
        p: table.params.p().clone(),
        two_row_decreasing: CheckReport::from_comparisons("two-row-decreasing", decreasing),
        two_row_dominates: CheckReport::from_comparisons("two-row-dominates", dominates),
        balanced_dominates: CheckReport::from_comparisons("balanced-dominates", below),
    }
}

/// Pairs `(λ, μ)` with `μ` covering `λ` in majorization order.
pub fn majorization_covers(n: usize) -> Vec<(Partition, Partition)> {
    let all = enumerate_partitions(n);
    let below = |a: &Partition, b: &Partition| {
        a != b && majorization_leq(a, b).expect("same size") == Majorization::LessOrEqual
    };
    let mut covers = Vec::new();
    for lower in &all {
        for upper in &all {
            if below(lower, upper) && !all.iter().any(|mid| below(lower, mid) && below(mid, upper)) {
                covers.push((lower.clone(), upper.clone()));
            }
        }
    }
    covers
}

/// Coefficient sums never increase when moving down a majorization cover.
pub fn verify_coefficient_sum_majorization(n: usize, p: &BigRational) -> Result<CheckReport> {
    let mut sums = BTreeMap::new();
    for lambda in enumerate_partitions(n) {
        let s = coefficient_sum(&lambda, p)?;
        sums.insert(lambda, s);
    }
    let comparisons = majorization_covers(n)
        .into_iter()
        .map(|(lower, upper)| Comparison {
            holds: sums[&upper] >= sums[&lower],
            larger_value: sums[&upper].clone(),
            smaller_value: sums[&lower].clone(),
            larger: upper,
            smaller: lower,
        })
        .collect();
    Ok(CheckReport::from_comparisons("coefficient-sum-majorization", comparisons))
}

pub(crate) fn ser_rational<S: Serializer>(r: &BigRational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&format_rational(r))
}

pub(crate) fn ser_display<S: Serializer, T: std::fmt::Display>(v: &T, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

/// `3p^2 - 5p + 2`, whose root `2/3` is where `ψ_[3,1]` and `ψ_[2,2]` cross
/// on `S_4`.
pub fn n4_crossover_polynomial(p: &BigRational) -> BigRational {
    rat(3, 1) * p * p - rat(5, 1) * p + rat(2, 1)
}

pub fn is_positive_integer(value: &BigRational) -> bool {
    value.is_integer() && value.numer() > &BigInt::zero()
}
