//! Partitions, cycle types, and the combinatorics built on them: hook
//! lengths, dimensions, class sizes, size-1/2 border strips, majorization,
//! cycle-lexicographic order, and cycle detectors.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::One;

use crate::error::{Error, Result};
use crate::exact::{binomial, factorial, rat_uint};

/// A partition of `n` in canonical form: weakly decreasing positive parts.
///
/// `Ord` sorts by `n` first and then by descending lexicographic order of the
/// parts, so a sorted collection of partitions of one `n` starts at `[n]` and
/// ends at `[1^n]`.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Partition {
    parts: Vec<usize>,
}

impl Partition {
    /// Builds a partition, sorting the parts and dropping zeros.
    pub fn new(mut parts: Vec<usize>) -> Self {
        parts.retain(|&p| p > 0);
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Partition { parts }
    }

    /// Rejects sequences that are not already canonical.
    pub fn from_parts(parts: Vec<usize>) -> Result<Self> {
        if parts.contains(&0) || parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::Parse(format!(
                "parts must be positive and weakly decreasing: {parts:?}"
            )));
        }
        Ok(Partition { parts })
    }

    pub fn empty() -> Self {
        Partition { parts: Vec::new() }
    }

    pub fn row(n: usize) -> Self {
        Partition::new(vec![n])
    }

    pub fn column(n: usize) -> Self {
        Partition::new(vec![1; n])
    }

    /// `[n-i, 1^i]`.
    pub fn hook(n: usize, i: usize) -> Self {
        assert!(i < n, "hook [n-i,1^i] needs i < n");
        let mut parts = vec![n - i];
        parts.extend(std::iter::repeat_n(1, i));
        Partition { parts }
    }

    /// `[n-i, i]`; requires `i <= n/2`.
    pub fn two_row(n: usize, i: usize) -> Self {
        assert!(2 * i <= n, "two-row shape [n-i,i] needs i <= n/2");
        Partition::new(vec![n - i, i])
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    pub fn size(&self) -> usize {
        self.parts.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// Part `k` (1-based), zero past the last row.
    pub fn part(&self, k: usize) -> usize {
        if k == 0 {
            return 0;
        }
        self.parts.get(k - 1).copied().unwrap_or(0)
    }

    /// Length of column `k` (1-based), i.e. `λ'_k`.
    pub fn column_len(&self, k: usize) -> usize {
        if k == 0 {
            return 0;
        }
        self.parts.iter().take_while(|&&p| p >= k).count()
    }

    pub fn conjugate(&self) -> Self {
        let width = self.part(1);
        Partition {
            parts: (1..=width).map(|k| self.column_len(k)).collect(),
        }
    }

    /// The shape left after deleting the first row, `λ/λ_1`.
    pub fn without_first_row(&self) -> Self {
        Partition {
            parts: self.parts.iter().skip(1).copied().collect(),
        }
    }

    pub fn is_hook(&self) -> bool {
        self.parts.len() <= 1 || self.parts[1] == 1
    }

    /// Hook lengths row by row.
    pub fn hook_lengths(&self) -> Vec<Vec<usize>> {
        let conj = self.conjugate();
        self.parts
            .iter()
            .enumerate()
            .map(|(r, &len)| {
                (0..len)
                    .map(|c| (len - c - 1) + (conj.parts[c] - r - 1) + 1)
                    .collect()
            })
            .collect()
    }

    /// Corner boxes as 0-based `(row, column)`.
    pub fn corners(&self) -> Vec<(usize, usize)> {
        self.parts
            .iter()
            .enumerate()
            .filter(|&(r, &len)| self.part(r + 2) < len)
            .map(|(r, &len)| (r, len - 1))
            .collect()
    }

    fn decrement_rows(&self, rows: &[usize]) -> Partition {
        let mut parts = self.parts.clone();
        for &r in rows {
            parts[r] -= 1;
        }
        parts.retain(|&p| p > 0);
        Partition { parts }
    }

    fn remove_from_row(&self, row: usize, count: usize) -> Partition {
        let mut parts = self.parts.clone();
        parts[row] -= count;
        parts.retain(|&p| p > 0);
        Partition { parts }
    }
}

impl Ord for Partition {
    fn cmp(&self, other: &Self) -> Ordering {
        self.size()
            .cmp(&other.size())
            .then_with(|| other.parts.cmp(&self.parts))
    }
}

impl PartialOrd for Partition {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let joined: Vec<String> = self.parts.iter().map(|p| p.to_string()).collect();
        f.write_str(&joined.join(","))
    }
}

impl fmt::Debug for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{self}]")
    }
}

impl FromStr for Partition {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim().trim_start_matches('[').trim_end_matches(']');
        if s.is_empty() {
            return Ok(Partition::empty());
        }
        let parts = s
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<usize>()
                    .map_err(|_| Error::Parse(format!("bad partition part {t:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Partition::from_parts(parts)
    }
}

/// All partitions of `n` in descending lexicographic order.
pub fn enumerate_partitions(n: usize) -> Vec<Partition> {
    let mut out = Vec::new();
    let mut current = Vec::new();
    fill_partitions(n, n, &mut current, &mut out);
    out
}

fn fill_partitions(rest: usize, max_part: usize, current: &mut Vec<usize>, out: &mut Vec<Partition>) {
    if rest == 0 {
        out.push(Partition {
            parts: current.clone(),
        });
        return;
    }
    for part in (1..=max_part.min(rest)).rev() {
        current.push(part);
        fill_partitions(rest - part, part, current, out);
        current.pop();
    }
}

/// Dimension of the irreducible representation, `n! / prod(hooks)`.
pub fn dimension(lambda: &Partition) -> BigUint {
    let hooks: BigUint = lambda
        .hook_lengths()
        .into_iter()
        .flatten()
        .fold(BigUint::one(), |acc, h| acc * h as u64);
    factorial(lambda.size()) / hooks
}

/// `d_rho / d_lambda` as an exact rational.
pub fn dimension_ratio(rho: &Partition, lambda: &Partition) -> BigRational {
    rat_uint(dimension(rho)) / rat_uint(dimension(lambda))
}

/// A conjugacy class of `S_n`, stored as cycle multiplicities.
///
/// `Ord` sorts by `n` and then by cycle-lexicographic order *descending*, so
/// sorted collections start at the identity and end at the `n`-cycle.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CycleType {
    /// `mults[k-1]` is the number of `k`-cycles; length is `n`.
    mults: Vec<usize>,
}

impl CycleType {
    pub fn from_mults(mults: Vec<usize>) -> Result<Self> {
        let n = mults.len();
        let total: usize = mults.iter().enumerate().map(|(k, &a)| (k + 1) * a).sum();
        if total != n {
            return Err(Error::Precondition(format!(
                "cycle multiplicities sum to {total}, expected {n}"
            )));
        }
        Ok(CycleType { mults })
    }

    /// Builds from a multiset of cycle lengths; `n` is their sum.
    pub fn from_cycle_lengths(lengths: &[usize]) -> Self {
        let n: usize = lengths.iter().sum();
        let mut mults = vec![0; n];
        for &len in lengths {
            assert!(len > 0, "cycle lengths must be positive");
            mults[len - 1] += 1;
        }
        CycleType { mults }
    }

    pub fn from_partition(lambda: &Partition) -> Self {
        CycleType::from_cycle_lengths(lambda.parts())
    }

    pub fn identity(n: usize) -> Self {
        CycleType::from_cycle_lengths(&vec![1; n])
    }

    pub fn full_cycle(n: usize) -> Self {
        CycleType::from_cycle_lengths(&[n])
    }

    /// `(1^{n-2s}, 2^s)`.
    pub fn involution(n: usize, s: usize) -> Self {
        assert!(2 * s <= n, "an involution of S_n has at most n/2 two-cycles");
        let mut lengths = vec![2; s];
        lengths.extend(std::iter::repeat_n(1, n - 2 * s));
        CycleType::from_cycle_lengths(&lengths)
    }

    pub fn n(&self) -> usize {
        self.mults.len()
    }

    /// Multiplicity of `k`-cycles (1-based), zero past `n`.
    pub fn mult(&self, k: usize) -> usize {
        if k == 0 {
            return 0;
        }
        self.mults.get(k - 1).copied().unwrap_or(0)
    }

    pub fn mults(&self) -> &[usize] {
        &self.mults
    }

    pub fn num_cycles(&self) -> usize {
        self.mults.iter().sum()
    }

    /// Cycle lengths, largest first.
    pub fn cycle_lengths(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.num_cycles());
        for k in (1..=self.n()).rev() {
            out.extend(std::iter::repeat_n(k, self.mult(k)));
        }
        out
    }

    pub fn as_partition(&self) -> Partition {
        Partition {
            parts: self.cycle_lengths(),
        }
    }

    pub fn is_even(&self) -> bool {
        (self.n() - self.num_cycles()).is_multiple_of(2)
    }

    /// `+1` for even permutations, `-1` for odd ones.
    pub fn sign(&self) -> i32 {
        if self.is_even() {
            1
        } else {
            -1
        }
    }

    /// Number of 2-cycles if this is an involution class, else `None`.
    pub fn involution_count(&self) -> Option<usize> {
        if self.mults.iter().skip(2).any(|&a| a > 0) {
            None
        } else {
            Some(self.mult(2))
        }
    }
}

impl Ord for CycleType {
    fn cmp(&self, other: &Self) -> Ordering {
        self.n()
            .cmp(&other.n())
            .then_with(|| cycle_lex_order(other, self))
    }
}

impl PartialOrd for CycleType {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for CycleType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let joined: Vec<String> = self
            .mults
            .iter()
            .enumerate()
            .filter(|(_, &a)| a > 0)
            .map(|(k, a)| format!("{}:{}", k + 1, a))
            .collect();
        f.write_str(&joined.join(","))
    }
}

impl fmt::Debug for CycleType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({self})")
    }
}

impl CycleType {
    /// Parses the `"1:a1,2:a2,..."` form. `n` is required because zero
    /// multiplicities are omitted from the string.
    pub fn parse(s: &str, n: usize) -> Result<Self> {
        let mut mults = vec![0; n];
        let s = s.trim();
        if !s.is_empty() {
            for item in s.split(',') {
                let (k, a) = item
                    .split_once(':')
                    .ok_or_else(|| Error::Parse(format!("bad cycle entry {item:?}")))?;
                let k: usize = k
                    .trim()
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad cycle length {k:?}")))?;
                let a: usize = a
                    .trim()
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad multiplicity {a:?}")))?;
                if k == 0 || k > n {
                    return Err(Error::Parse(format!("cycle length {k} out of range for n = {n}")));
                }
                mults[k - 1] += a;
            }
        }
        CycleType::from_mults(mults)
    }
}

/// All cycle types of `S_n`, identity first.
pub fn enumerate_cycle_types(n: usize) -> Vec<CycleType> {
    let mut out: Vec<CycleType> = enumerate_partitions(n)
        .iter()
        .map(CycleType::from_partition)
        .collect();
    out.sort();
    out
}

/// Size of the conjugacy class: `n! / prod_k (k^{a_k} a_k!)`.
pub fn class_size(alpha: &CycleType) -> BigUint {
    let centralizer = (1..=alpha.n()).fold(BigUint::one(), |acc, k| {
        let a = alpha.mult(k);
        acc * BigUint::from(k).pow(a as u32) * factorial(a)
    });
    factorial(alpha.n()) / centralizer
}

/// Shape of a border strip removed from a partition.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RemovalKind {
    HorizontalDomino,
    VerticalDomino,
    DisconnectedPair,
    SingleBox,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BorderstripRemoval {
    pub result: Partition,
    pub kind: RemovalKind,
    pub height: usize,
}

/// Removals of one box (`size == 1`) or of two boxes (`size == 2`).
///
/// For two boxes the result lists horizontal dominoes (height 0), vertical
/// dominoes (height 1), and disconnected pairs: two corners, necessarily in
/// distinct rows and columns, each listed once.
pub fn borderstrip_removals(lambda: &Partition, size: usize) -> Vec<BorderstripRemoval> {
    assert!(size == 1 || size == 2, "only border strips of size 1 or 2 are supported");
    if lambda.size() < size {
        return Vec::new();
    }
    if size == 1 {
        return lambda
            .corners()
            .into_iter()
            .map(|(r, _)| BorderstripRemoval {
                result: lambda.decrement_rows(&[r]),
                kind: RemovalKind::SingleBox,
                height: 0,
            })
            .collect();
    }
    let mut out = Vec::new();
    for r in 0..lambda.len() {
        if lambda.part(r + 1) >= lambda.part(r + 2) + 2 {
            out.push(BorderstripRemoval {
                result: lambda.remove_from_row(r, 2),
                kind: RemovalKind::HorizontalDomino,
                height: 0,
            });
        }
    }
    for r in 0..lambda.len().saturating_sub(1) {
        let len = lambda.part(r + 1);
        if lambda.part(r + 2) == len && lambda.part(r + 3) < len {
            out.push(BorderstripRemoval {
                result: lambda.decrement_rows(&[r, r + 1]),
                kind: RemovalKind::VerticalDomino,
                height: 1,
            });
        }
    }
    let corners = lambda.corners();
    for (a, &(ra, _)) in corners.iter().enumerate() {
        for &(rb, _) in &corners[a + 1..] {
            out.push(BorderstripRemoval {
                result: lambda.decrement_rows(&[ra, rb]),
                kind: RemovalKind::DisconnectedPair,
                height: 0,
            });
        }
    }
    out
}

/// Whether an ordered two-step single-box path forms a domino.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PathShape {
    Connected,
    Disconnected,
}

/// Ordered paths `lambda -> gamma -> rho` removing one box at a time.
pub fn two_step_removals(lambda: &Partition) -> Vec<(Partition, Partition, PathShape)> {
    let mut out = Vec::new();
    for (r1, c1) in lambda.corners() {
        let gamma = lambda.decrement_rows(&[r1]);
        for (r2, c2) in gamma.corners() {
            let rho = gamma.decrement_rows(&[r2]);
            let adjacent = (r1 == r2 && c2 + 1 == c1) || (c1 == c2 && r2 + 1 == r1);
            let shape = if adjacent {
                PathShape::Connected
            } else {
                PathShape::Disconnected
            };
            out.push((gamma.clone(), rho, shape));
        }
    }
    out
}

/// Rim hooks of any size via beta-numbers: `(result, height)` pairs.
pub fn rim_hook_removals(lambda: &Partition, size: usize) -> Vec<(Partition, usize)> {
    let len = lambda.len();
    let beta: Vec<usize> = (0..len).map(|i| lambda.parts[i] + (len - 1 - i)).collect();
    let mut out = Vec::new();
    for (idx, &b) in beta.iter().enumerate() {
        if b < size {
            continue;
        }
        let target = b - size;
        if beta.contains(&target) {
            continue;
        }
        let height = beta.iter().filter(|&&x| x > target && x < b).count();
        let mut new_beta = beta.clone();
        new_beta[idx] = target;
        new_beta.sort_unstable_by(|a, b| b.cmp(a));
        let parts: Vec<usize> = new_beta
            .iter()
            .enumerate()
            .map(|(i, &x)| x - (len - 1 - i))
            .filter(|&p| p > 0)
            .collect();
        out.push((Partition { parts }, height));
    }
    out
}

/// Outcome of comparing two partitions in majorization order.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Majorization {
    /// Every partial sum of the left is at most that of the right.
    LessOrEqual,
    /// Not `LessOrEqual`, but every partial sum of the left is at least that
    /// of the right.
    GreaterOrEqualOnly,
    Incomparable,
}

pub fn majorization_leq(lambda: &Partition, mu: &Partition) -> Result<Majorization> {
    if lambda.size() != mu.size() {
        return Err(Error::SizeMismatch {
            left: lambda.size(),
            right: mu.size(),
        });
    }
    let rows = lambda.len().max(mu.len());
    let (mut sl, mut sm) = (0usize, 0usize);
    let (mut leq, mut geq) = (true, true);
    for k in 1..=rows {
        sl += lambda.part(k);
        sm += mu.part(k);
        leq &= sl <= sm;
        geq &= sl >= sm;
    }
    Ok(if leq {
        Majorization::LessOrEqual
    } else if geq {
        Majorization::GreaterOrEqualOnly
    } else {
        Majorization::Incomparable
    })
}

fn cycle_lex_order(alpha: &CycleType, beta: &CycleType) -> Ordering {
    (1..=alpha.n().max(beta.n()))
        .map(|k| alpha.mult(k).cmp(&beta.mult(k)))
        .find(|o| o.is_ne())
        .unwrap_or(Ordering::Equal)
}

/// Cycle-lexicographic comparison: at the smallest cycle length where the
/// multiplicities differ, more cycles means greater.
pub fn cycle_lex_compare(alpha: &CycleType, beta: &CycleType) -> Result<Ordering> {
    if alpha.n() != beta.n() {
        return Err(Error::SizeMismatch {
            left: alpha.n(),
            right: beta.n(),
        });
    }
    Ok(cycle_lex_order(alpha, beta))
}

/// Smallest cycle length at which two classes differ.
pub fn first_difference(alpha: &CycleType, beta: &CycleType) -> Option<usize> {
    (1..=alpha.n().max(beta.n())).find(|&k| alpha.mult(k) != beta.mult(k))
}

/// `λ_2 + λ'_1 - 2 >= i` and `λ_1 + λ'_2 - 2 >= i`.
pub fn is_i_cycle_detector(lambda: &Partition, i: usize) -> bool {
    let i = i as i64;
    let first = lambda.part(2) as i64 + lambda.column_len(1) as i64 - 2;
    let second = lambda.part(1) as i64 + lambda.column_len(2) as i64 - 2;
    first >= i && second >= i
}

#[derive(Clone, Debug)]
pub struct DimRatioReport {
    pub n: usize,
    pub i: usize,
    /// `(λ, d_{λ/λ_1} / d_λ)` for every λ with `λ_1 = n - i`.
    pub ratios: Vec<(Partition, BigRational)>,
    pub max_at: Vec<Partition>,
    pub predicted: BigRational,
    pub passed: bool,
}

/// Enumerates `λ` with `λ_1 = n - i` and checks that the largest
/// `d_{λ/λ_1} / d_λ` is attained at `[n-i, i]` and equals
/// `C(n,i)^{-1} (n-i+1)/(n-2i+1)`.
pub fn verify_dim_ratio_max(n: usize, i: usize) -> Result<DimRatioReport> {
    if i == 0 || 2 * i > n {
        return Err(Error::Precondition(format!("need 1 <= i <= n/2, got n = {n}, i = {i}")));
    }
    let ratios: Vec<(Partition, BigRational)> = enumerate_partitions(i)
        .into_iter()
        .map(|rest| {
            let mut parts = vec![n - i];
            parts.extend_from_slice(rest.parts());
            let lambda = Partition::new(parts);
            let ratio = dimension_ratio(&lambda.without_first_row(), &lambda);
            (lambda, ratio)
        })
        .collect();
    let max = ratios.iter().map(|(_, r)| r).max().cloned().expect("at least one partition");
    let max_at: Vec<Partition> = ratios
        .iter()
        .filter(|(_, r)| *r == max)
        .map(|(l, _)| l.clone())
        .collect();
    let predicted = BigRational::new(
        (n - i + 1).into(),
        (BigUint::from(n - 2 * i + 1) * binomial(n, i)).into(),
    );
    let passed = max == predicted && max_at.contains(&Partition::two_row(n, i));
    Ok(DimRatioReport {
        n,
        i,
        ratios,
        max_at,
        predicted,
        passed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(parts: &[usize]) -> Partition {
        Partition::from_parts(parts.to_vec()).unwrap()
    }

    #[test]
    fn enumeration_order_and_counts() {
        assert_eq!(enumerate_partitions(0), vec![Partition::empty()]);
        assert_eq!(
            enumerate_partitions(4),
            vec![p(&[4]), p(&[3, 1]), p(&[2, 2]), p(&[2, 1, 1]), p(&[1, 1, 1, 1])]
        );
        assert_eq!(enumerate_partitions(8).len(), 22);
        assert_eq!(enumerate_partitions(20).len(), 627);
        let mut sorted = enumerate_partitions(7);
        sorted.sort();
        assert_eq!(sorted, enumerate_partitions(7));
    }

    #[test]
    fn dimensions() {
        assert_eq!(dimension(&p(&[2, 2])), BigUint::from(2u32));
        for n in 2..12 {
            assert_eq!(dimension(&p(&[n - 1, 1])), BigUint::from(n - 1));
            assert_eq!(dimension(&Partition::row(n)), BigUint::one());
        }
        assert_eq!(dimension(&p(&[4, 2])), BigUint::from(9u32));
    }

    #[test]
    fn class_sizes() {
        assert_eq!(class_size(&CycleType::identity(6)), BigUint::one());
        assert_eq!(class_size(&CycleType::from_cycle_lengths(&[2, 1, 1])), BigUint::from(6u32));
        assert_eq!(class_size(&CycleType::from_cycle_lengths(&[2, 2])), BigUint::from(3u32));
    }

    #[test]
    fn removals_of_two_by_two() {
        let r = borderstrip_removals(&p(&[2, 2]), 2);
        assert_eq!(
            r,
            vec![
                BorderstripRemoval {
                    result: p(&[2]),
                    kind: RemovalKind::HorizontalDomino,
                    height: 0
                },
                BorderstripRemoval {
                    result: p(&[1, 1]),
                    kind: RemovalKind::VerticalDomino,
                    height: 1
                },
            ]
        );
    }

    #[test]
    fn removals_of_four_two() {
        let r = borderstrip_removals(&p(&[4, 2]), 2);
        let of_kind = |k| -> Vec<Partition> {
            r.iter().filter(|x| x.kind == k).map(|x| x.result.clone()).collect()
        };
        assert_eq!(of_kind(RemovalKind::HorizontalDomino), vec![p(&[2, 2]), p(&[4])]);
        assert!(of_kind(RemovalKind::VerticalDomino).is_empty());
        assert_eq!(of_kind(RemovalKind::DisconnectedPair), vec![p(&[3, 1])]);
        assert!(borderstrip_removals(&p(&[1]), 2).is_empty());
    }

    #[test]
    fn dominoes_agree_with_rim_hooks() {
        for n in 2..=10 {
            for lambda in enumerate_partitions(n) {
                let mut dominoes: Vec<(Partition, usize)> = borderstrip_removals(&lambda, 2)
                    .into_iter()
                    .filter(|r| r.kind != RemovalKind::DisconnectedPair)
                    .map(|r| (r.result, r.height))
                    .collect();
                let mut hooks = rim_hook_removals(&lambda, 2);
                dominoes.sort();
                hooks.sort();
                assert_eq!(dominoes, hooks, "{lambda:?}");
            }
        }
    }

    #[test]
    fn two_step_paths_split_into_dominoes_and_pairs() {
        // Every domino is reached by exactly one ordered path; every
        // disconnected pair by exactly two.
        for n in 2..=10 {
            for lambda in enumerate_partitions(n) {
                let paths = two_step_removals(&lambda);
                for r in borderstrip_removals(&lambda, 2) {
                    let count = paths.iter().filter(|(_, rho, _)| *rho == r.result).count();
                    match r.kind {
                        RemovalKind::DisconnectedPair => assert_eq!(count, 2),
                        _ => assert_eq!(count, 1),
                    }
                }
                let connected = paths.iter().filter(|x| x.2 == PathShape::Connected).count();
                let dominoes = borderstrip_removals(&lambda, 2)
                    .iter()
                    .filter(|r| r.kind != RemovalKind::DisconnectedPair)
                    .count();
                assert_eq!(connected, dominoes);
            }
        }
    }

    #[test]
    fn majorization_examples() {
        use Majorization::*;
        assert_eq!(majorization_leq(&p(&[2, 2]), &p(&[3, 1])).unwrap(), LessOrEqual);
        assert_eq!(majorization_leq(&p(&[3, 1, 1]), &p(&[2, 2, 1])).unwrap(), GreaterOrEqualOnly);
        assert_eq!(majorization_leq(&p(&[3, 3]), &p(&[4, 1, 1])).unwrap(), Incomparable);
        assert!(majorization_leq(&p(&[3]), &p(&[2, 2])).is_err());
    }

    #[test]
    fn cycle_lex_examples() {
        let c = CycleType::from_cycle_lengths;
        assert_eq!(cycle_lex_compare(&c(&[1, 1, 1, 1]), &c(&[2, 1, 1])).unwrap(), Ordering::Greater);
        assert_eq!(cycle_lex_compare(&c(&[3, 1]), &c(&[2, 2])).unwrap(), Ordering::Greater);
        for n in 2..=8 {
            let all = enumerate_cycle_types(n);
            assert_eq!(all.first(), Some(&CycleType::identity(n)));
            assert_eq!(all.last(), Some(&CycleType::full_cycle(n)));
        }
        assert!(cycle_lex_compare(&c(&[2]), &c(&[3])).is_err());
    }

    #[test]
    fn detectors() {
        for n in [6usize, 8, 10] {
            for i in 1..=n / 2 {
                assert!(is_i_cycle_detector(&Partition::two_row(n, i), i));
                assert!(!is_i_cycle_detector(&Partition::row(n), i));
            }
        }
        assert!(is_i_cycle_detector(&p(&[2, 2]), 1));
    }

    #[test]
    fn dim_ratio_examples() {
        let r = verify_dim_ratio_max(6, 2).unwrap();
        assert!(r.passed);
        assert_eq!(r.predicted, BigRational::new(1.into(), 9.into()));
        let r = verify_dim_ratio_max(9, 1).unwrap();
        assert_eq!(r.ratios.len(), 1);
        assert_eq!(r.predicted, BigRational::new(1.into(), 8.into()));
        let r = verify_dim_ratio_max(8, 4).unwrap();
        assert!(r.max_at.contains(&p(&[4, 4])));
        assert!(verify_dim_ratio_max(6, 4).is_err());
    }

    #[test]
    fn string_forms() {
        assert_eq!(p(&[5, 2, 1]).to_string(), "5,2,1");
        assert_eq!("5,2,1".parse::<Partition>().unwrap(), p(&[5, 2, 1]));
        assert!("1,2".parse::<Partition>().is_err());
        let c = CycleType::from_cycle_lengths(&[2, 2, 1]);
        assert_eq!(c.to_string(), "1:1,2:2");
        assert_eq!(CycleType::parse("1:1,2:2", 5).unwrap(), c);
        assert!(CycleType::parse("1:1,2:2", 6).is_err());
    }
}
