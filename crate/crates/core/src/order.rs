//! Likelihood orders of the walk and the separation-distance formula.

use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{binomial, format_rational, pow, rat, rat_uint, to_f64};
use crate::partition::{is_i_cycle_detector, CycleType, Partition};
use crate::spectrum::{
    build_table, eigenvalue_direct, hook_eigenvalue_char_poly, hook_eigenvalue_half, hook_eigenvalue_paths,
    ser_display, ser_rational, TableOptions, WalkParams,
};
use crate::walk::{separation, ClassDistribution, FourierInverter, DISTRIBUTION_CAP};

/// Default horizon for limiting-order sweeps.
pub const DEFAULT_T_MAX: usize = 64;

#[derive(Clone, Debug, Serialize)]
pub struct RankedClass {
    #[serde(serialize_with = "ser_display")]
    pub class: CycleType,
    #[serde(serialize_with = "ser_rational")]
    pub prob: BigRational,
}

#[derive(Clone, Debug, Serialize)]
pub struct LikelihoodOrder {
    pub t: usize,
    /// Most likely first; equal probabilities in cycle-lex descending order.
    pub ranked: Vec<RankedClass>,
    /// Groups of two or more classes with identical probability.
    #[serde(serialize_with = "ser_groups")]
    pub ties: Vec<Vec<CycleType>>,
}

fn ser_groups<S: serde::Serializer>(groups: &[Vec<CycleType>], s: S) -> std::result::Result<S::Ok, S::Error> {
    let strings: Vec<Vec<String>> = groups.iter().map(|g| g.iter().map(|a| a.to_string()).collect()).collect();
    strings.serialize(s)
}

impl LikelihoodOrder {
    pub fn from_distribution(d: &ClassDistribution, t: usize) -> Self {
        let mut ranked: Vec<RankedClass> = d
            .probs
            .iter()
            .map(|(a, p)| RankedClass {
                class: a.clone(),
                prob: p.clone(),
            })
            .collect();
        // CycleType's Ord is cycle-lex descending.
        ranked.sort_by(|x, y| y.prob.cmp(&x.prob).then_with(|| x.class.cmp(&y.class)));
        let mut ties: Vec<Vec<CycleType>> = Vec::new();
        for pair in ranked.windows(2) {
            if pair[0].prob == pair[1].prob {
                match ties.last_mut() {
                    Some(group) if group.last() == Some(&pair[0].class) => group.push(pair[1].class.clone()),
                    _ => ties.push(vec![pair[0].class.clone(), pair[1].class.clone()]),
                }
            }
        }
        LikelihoodOrder { t, ranked, ties }
    }

    pub fn classes(&self) -> Vec<CycleType> {
        self.ranked.iter().map(|r| r.class.clone()).collect()
    }

    /// Pairs `(α, β)` with `α` above `β` in cycle-lex order but strictly
    /// less likely.
    pub fn cycle_lex_violations(&self) -> Vec<(CycleType, CycleType)> {
        let mut out = Vec::new();
        for (k, hi) in self.ranked.iter().enumerate() {
            for lo in &self.ranked[k + 1..] {
                // hi is at least as likely as lo; flag when lo is cycle-lex greater.
                if hi.prob > lo.prob && lo.class < hi.class {
                    out.push((lo.class.clone(), hi.class.clone()));
                }
            }
        }
        out.sort();
        out
    }

    pub fn is_cycle_lex(&self) -> bool {
        self.cycle_lex_violations().is_empty()
    }
}

pub fn likelihood_order(params: &WalkParams, t: usize) -> Result<LikelihoodOrder> {
    let inverter = FourierInverter::new(params, DISTRIBUTION_CAP)?;
    Ok(LikelihoodOrder::from_distribution(&inverter.at(t), t))
}

#[derive(Clone, Debug, Serialize)]
pub struct ViolationsAt {
    pub t: usize,
    #[serde(serialize_with = "ser_pairs")]
    pub pairs: Vec<(CycleType, CycleType)>,
}

fn ser_pairs<S: serde::Serializer>(pairs: &[(CycleType, CycleType)], s: S) -> std::result::Result<S::Ok, S::Error> {
    let strings: Vec<[String; 2]> = pairs.iter().map(|(a, b)| [a.to_string(), b.to_string()]).collect();
    strings.serialize(s)
}

#[derive(Clone, Debug, Serialize)]
pub struct LimitingOrderReport {
    pub n: usize,
    #[serde(serialize_with = "ser_rational")]
    pub p: BigRational,
    pub t_max: usize,
    /// Smallest `t` with cycle-lex order at every step in `[t, t_max]`.
    pub t_star: Option<usize>,
    /// Cycle-lex order at every `t` in `1..=t_max`.
    pub holds_at_all_times: bool,
    pub violations: Vec<ViolationsAt>,
    /// Pairs still inverted at `t_max`.
    #[serde(serialize_with = "ser_pairs")]
    pub persistent_pairs: Vec<(CycleType, CycleType)>,
    /// Likelihood order at `t_max`.
    pub final_order: LikelihoodOrder,
    #[serde(serialize_with = "ser_display")]
    pub final_separation_class: CycleType,
    /// Whether the claim's `p >= 1/2` precondition holds.
    pub in_claimed_range: bool,
}

pub fn limiting_order_check(params: &WalkParams, t_max: usize) -> Result<LimitingOrderReport> {
    if t_max == 0 {
        return Err(Error::Precondition("t_max must be at least 1".into()));
    }
    let inverter = FourierInverter::new(params, DISTRIBUTION_CAP)?;
    let mut violations = Vec::new();
    let mut last = None;
    for t in 1..=t_max {
        let dist = inverter.at(t);
        let order = LikelihoodOrder::from_distribution(&dist, t);
        let pairs = order.cycle_lex_violations();
        if !pairs.is_empty() {
            violations.push(ViolationsAt { t, pairs });
        }
        if t == t_max {
            last = Some((order, separation(&dist).1));
        }
    }
    let (final_order, final_separation_class) = last.expect("t_max >= 1");
    let persistent_pairs = match violations.last() {
        Some(v) if v.t == t_max => v.pairs.clone(),
        _ => Vec::new(),
    };
    let t_star = match violations.last() {
        None => Some(1),
        Some(v) if v.t == t_max => None,
        Some(v) => Some(v.t + 1),
    };
    Ok(LimitingOrderReport {
        n: params.n(),
        p: params.p().clone(),
        t_max,
        t_star,
        holds_at_all_times: violations.is_empty(),
        violations,
        persistent_pairs,
        final_order,
        final_separation_class,
        in_claimed_range: *params.p() >= rat(1, 2),
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct DetectorRow {
    pub i: usize,
    #[serde(serialize_with = "ser_rational")]
    pub two_row_value: BigRational,
    #[serde(serialize_with = "ser_display")]
    pub max_detector: Partition,
    #[serde(serialize_with = "ser_rational")]
    pub max_value: BigRational,
    /// Detectors with `|ψ|` strictly above `|ψ_{[n-i,i]}|`.
    #[serde(serialize_with = "ser_partitions")]
    pub violators: Vec<Partition>,
    pub passed: bool,
}

fn ser_partitions<S: serde::Serializer>(ps: &[Partition], s: S) -> std::result::Result<S::Ok, S::Error> {
    let strings: Vec<String> = ps.iter().map(|p| p.to_string()).collect();
    strings.serialize(s)
}

#[derive(Clone, Debug, Serialize)]
pub struct DetectorReport {
    pub n: usize,
    #[serde(serialize_with = "ser_rational")]
    pub p: BigRational,
    pub rows: Vec<DetectorRow>,
    pub passed: bool,
}

/// For each `1 <= i <= n/2`, checks that `[n-i,i]` has the largest `|ψ|`
/// among all `i`-cycle detectors.
pub fn detector_dominance_check(params: &WalkParams) -> Result<DetectorReport> {
    let n = params.n();
    let table = build_table(params, TableOptions::default())?;
    let mut rows = Vec::new();
    for i in 1..=n / 2 {
        let two_row = Partition::two_row(n, i);
        let reference = table.psi(&two_row).abs();
        let mut max_detector = two_row.clone();
        let mut max_value = reference.clone();
        let mut violators = Vec::new();
        for (lambda, psi) in table.iter() {
            if !is_i_cycle_detector(lambda, i) {
                continue;
            }
            let v = psi.abs();
            if v > reference {
                violators.push(lambda.clone());
            }
            if v > max_value {
                max_value = v;
                max_detector = lambda.clone();
            }
        }
        rows.push(DetectorRow {
            i,
            two_row_value: reference,
            max_detector,
            max_value,
            passed: violators.is_empty(),
            violators,
        });
    }
    let passed = rows.iter().all(|r| r.passed);
    Ok(DetectorReport {
        n,
        p: params.p().clone(),
        rows,
        passed,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct HookIdentityRow {
    pub i: usize,
    #[serde(serialize_with = "ser_rational")]
    pub path_count: BigRational,
    #[serde(serialize_with = "ser_rational")]
    pub character_polynomial: BigRational,
    #[serde(serialize_with = "ser_rational")]
    pub direct: BigRational,
    pub agree: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct HookIdentityReport {
    pub n: usize,
    #[serde(serialize_with = "ser_rational")]
    pub p: BigRational,
    pub rows: Vec<HookIdentityRow>,
    pub passed: bool,
}

/// Three-way check of `ψ_{[n-i,1^i]}` for `1 <= i <= n-1`: recursion path
/// count, hook character polynomial, and the direct sum.
pub fn hook_eigenvalue_identity_check(n: usize, p: &BigRational) -> Result<HookIdentityReport> {
    let params = WalkParams::new(n, p.clone())?;
    let mut rows = Vec::new();
    for i in 1..n {
        let path_count = hook_eigenvalue_paths(n, i, p);
        let character_polynomial = hook_eigenvalue_char_poly(n, i, p);
        let direct = eigenvalue_direct(&Partition::hook(n, i), &params)?;
        rows.push(HookIdentityRow {
            i,
            agree: path_count == direct && character_polynomial == direct,
            path_count,
            character_polynomial,
            direct,
        });
    }
    let passed = rows.iter().all(|r| r.agree);
    Ok(HookIdentityReport {
        n,
        p: p.clone(),
        rows,
        passed,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct ConjectureValue {
    pub n: usize,
    pub t: usize,
    pub value: f64,
    #[serde(serialize_with = "ser_rational")]
    pub exact: BigRational,
    /// `C(n-i,i) (C(n/2-1,i)/C(n-1,i))^t` for `i = 1..`.
    #[serde(serialize_with = "ser_rational_vec")]
    pub term_magnitudes: Vec<BigRational>,
    pub terms_decreasing: bool,
}

fn ser_rational_vec<S: serde::Serializer>(v: &[BigRational], s: S) -> std::result::Result<S::Ok, S::Error> {
    let strings: Vec<String> = v.iter().map(format_rational).collect();
    strings.serialize(s)
}

/// `Σ_{i=1}^{⌊(n-1)/2⌋} (-1)^{i+1} C(n-i,i) (C(n/2-1,i)/C(n-1,i))^t` at `p = 1/2`.
pub fn conjectured_separation(n: usize, t: usize) -> Result<ConjectureValue> {
    if n < 2 || !n.is_multiple_of(2) {
        return Err(Error::OddDegree(n));
    }
    let term_magnitudes: Vec<BigRational> = (1..=(n - 1) / 2)
        .map(|i| rat_uint(binomial(n - i, i)) * pow(&hook_eigenvalue_half(n, i), t))
        .collect();
    let exact: BigRational = term_magnitudes
        .iter()
        .enumerate()
        .map(|(k, m)| if k % 2 == 0 { m.clone() } else { -m.clone() })
        .sum();
    let terms_decreasing = term_magnitudes.windows(2).all(|w| w[1] <= w[0]);
    Ok(ConjectureValue {
        n,
        t,
        value: to_f64(&exact),
        exact,
        term_magnitudes,
        terms_decreasing,
    })
}

/// `1 - n! P^{*t}(n-cycle) = Σ_{i=1}^{n-1} (-1)^{i+1} C(n-1,i) ψ_{[n-i,1^i]}^t`.
/// Only hooks see the `n`-cycle, each with character `(-1)^i`.
pub fn n_cycle_deficit(params: &WalkParams, t: usize) -> BigRational {
    let n = params.n();
    let mut total = BigRational::zero();
    for i in 1..n {
        let term = rat_uint(binomial(n - 1, i)) * pow(&hook_eigenvalue_paths(n, i, params.p()), t);
        if i % 2 == 1 {
            total += term;
        } else {
            total -= term;
        }
    }
    total
}

#[derive(Clone, Debug, Serialize)]
pub struct ConjectureRow {
    pub n: usize,
    pub t: usize,
    pub conjectured: f64,
    #[serde(serialize_with = "ser_rational")]
    pub conjectured_exact: BigRational,
    /// True separation distance.
    #[serde(serialize_with = "ser_rational")]
    pub exact: BigRational,
    #[serde(serialize_with = "ser_display")]
    pub argmax: CycleType,
    /// `1 - n! P(n-cycle)`.
    #[serde(serialize_with = "ser_rational")]
    pub n_cycle_deficit: BigRational,
    pub matches: bool,
    pub terms_decreasing: bool,
}

/// Compares the conjectured formula with the exact separation at `p = 1/2`.
pub fn conjecture_sweep(n: usize, ts: impl IntoIterator<Item = usize>) -> Result<Vec<ConjectureRow>> {
    let params = WalkParams::new(n, rat(1, 2))?;
    let inverter = FourierInverter::new(&params, DISTRIBUTION_CAP)?;
    ts.into_iter()
        .map(|t| {
            let conj = conjectured_separation(n, t)?;
            let (exact, argmax) = separation(&inverter.at(t));
            Ok(ConjectureRow {
                n,
                t,
                conjectured: conj.value,
                matches: conj.exact == exact,
                conjectured_exact: conj.exact,
                exact,
                argmax,
                n_cycle_deficit: n_cycle_deficit(&params, t),
                terms_decreasing: conj.terms_decreasing,
            })
        })
        .collect()
}

pub fn conjecture_csv(rows: &[ConjectureRow]) -> String {
    let mut out = String::from("n,t,conjectured,exact_num,exact_den,match\n");
    for r in rows {
        out.push_str(&format!(
            "{},{},{:e},{},{},{}\n",
            r.n,
            r.t,
            r.conjectured,
            r.exact.numer(),
            r.exact.denom(),
            r.matches
        ));
    }
    out
}

/// `⌈log₂(n-1)⌉`, the time from which the conjecture's terms should shrink.
pub fn conjecture_start_time(n: usize) -> usize {
    let m = n.saturating_sub(1).max(1);
    (usize::BITS - (m - 1).leading_zeros()) as usize
}

/// Checks that `ψ` is `0` for every hook `[n-i,1^i]` with `i >= n/2` at
/// `p = 1/2`.
pub fn half_hooks_vanish(n: usize) -> bool {
    (n / 2..n).all(|i| hook_eigenvalue_paths(n, i, &rat(1, 2)).is_zero())
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    fn params(n: usize, num: i64, den: i64) -> WalkParams {
        WalkParams::with_ratio(n, num, den).unwrap()
    }

    fn ct(s: &str, n: usize) -> CycleType {
        CycleType::parse(s, n).unwrap()
    }

    #[test]
    fn s4_order_at_twelve() {
        let order = likelihood_order(&params(4, 1, 2), 12).unwrap();
        let expected = vec![ct("1:4", 4), ct("2:2", 4), ct("1:2,2:1", 4), ct("4:1", 4), ct("1:1,3:1", 4)];
        assert_eq!(order.classes(), expected);
        assert!(!order.is_cycle_lex());
        assert!(order.ties.is_empty());
    }

    #[test]
    fn lazy_walk_ties() {
        let order = likelihood_order(&params(6, 1, 1), 3).unwrap();
        assert_eq!(order.ranked[0].class, CycleType::identity(6));
        assert_eq!(order.ranked[0].prob, rat(1, 1));
        assert_eq!(order.ties.len(), 1);
        assert_eq!(order.ties[0].len(), 10);
        assert!(order.is_cycle_lex());
    }

    #[test]
    fn s4_never_settles_at_half() {
        let r = limiting_order_check(&params(4, 1, 2), 64).unwrap();
        assert_eq!(r.t_star, None);
        assert!(r.persistent_pairs.contains(&(ct("1:1,3:1", 4), ct("4:1", 4))));
        for v in r.violations.iter().filter(|v| v.t >= 2) {
            assert!(v.pairs.contains(&(ct("1:1,3:1", 4), ct("4:1", 4))), "t = {}", v.t);
        }
    }

    #[test]
    fn s4_settles_at_three_quarters() {
        let r = limiting_order_check(&params(4, 3, 4), 64).unwrap();
        assert!(r.t_star.is_some());
        assert_eq!(r.final_separation_class, CycleType::full_cycle(4));
    }

    #[test]
    fn s6_settles() {
        let r = limiting_order_check(&params(6, 1, 2), 64).unwrap();
        let t_star = r.t_star.expect("finite t*");
        assert!(t_star <= 64);
        assert!(r.final_order.is_cycle_lex());
        assert_eq!(r.final_separation_class, CycleType::full_cycle(6));
    }

    #[test]
    fn detector_examples() {
        assert!(detector_dominance_check(&params(6, 1, 2)).unwrap().passed);
        let r = detector_dominance_check(&params(4, 1, 2)).unwrap();
        assert!(!r.passed);
        assert_eq!(r.rows[0].i, 1);
        assert_eq!(r.rows[0].violators, vec![Partition::two_row(4, 2)]);
        assert_eq!(r.rows[0].max_value, rat(1, 2));
        assert!(detector_dominance_check(&params(8, 3, 4)).unwrap().passed);
    }

    #[test]
    fn hook_identity_examples() {
        let r = hook_eigenvalue_identity_check(4, &rat(1, 2)).unwrap();
        assert!(r.passed);
        assert_eq!(r.rows[0].direct, rat(1, 3));
        let r = hook_eigenvalue_identity_check(6, &rat(1, 2)).unwrap();
        assert!(r.rows.iter().filter(|row| row.i >= 3).all(|row| row.direct.is_zero()));
        assert!(hook_eigenvalue_identity_check(8, &rat(2, 3)).unwrap().passed);
        assert!(half_hooks_vanish(10));
    }

    #[test]
    fn conjecture_values() {
        for t in 0..8 {
            assert_eq!(conjectured_separation(4, t).unwrap().exact, rat(3, 1) * pow(&rat(1, 3), t));
        }
        let c = conjectured_separation(6, 3).unwrap();
        assert_eq!(c.exact, rat(5 * 8, 125) - rat(6, 1000));
        assert!((c.value - 0.314).abs() < 1e-12);
        assert!(conjectured_separation(5, 3).is_err());
    }

    #[test]
    fn n_cycle_deficit_matches_distribution() {
        for (n, num, den) in [(4, 1, 2), (6, 1, 2), (6, 3, 4), (8, 1, 3)] {
            let w = params(n, num, den);
            let inv = FourierInverter::new(&w, 8).unwrap();
            for t in 0..6 {
                let d = inv.at(t);
                let direct = BigRational::one()
                    - rat_uint(crate::exact::factorial(n)) * d.prob(&CycleType::full_cycle(n));
                assert_eq!(n_cycle_deficit(&w, t), direct);
            }
        }
    }

    #[test]
    fn start_times() {
        assert_eq!(conjecture_start_time(4), 2);
        assert_eq!(conjecture_start_time(6), 3);
        assert_eq!(conjecture_start_time(8), 3);
        assert_eq!(conjecture_start_time(10), 4);
        assert_eq!(conjecture_start_time(2), 0);
    }

    #[test]
    fn csv_columns() {
        let rows = conjecture_sweep(6, 3..5).unwrap();
        let csv = conjecture_csv(&rows);
        assert!(csv.starts_with("n,t,conjectured,exact_num,exact_den,match\n"));
        assert!(!rows[0].matches);
        assert_eq!(rows[0].argmax, CycleType::full_cycle(6));
        assert_eq!(rows[0].exact, rows[0].n_cycle_deficit);
        assert_eq!(rows[0].exact, rat(31, 100));
    }
}
