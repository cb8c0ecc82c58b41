use std::str::FromStr;

use iwalk_core::bounds::verify_seaworld;
use iwalk_core::characters::character;
use iwalk_core::exact::{factorial, format_rational, rat};
use iwalk_core::order::{detector_dominance_check, half_hooks_vanish, hook_eigenvalue_identity_check};
use iwalk_core::partition::{class_size, enumerate_cycle_types, enumerate_partitions, Partition};
use iwalk_core::spectrum::{
    eigenvalue_closed_form, eigenvalue_direct, eigenvalue_recursive, monotonicity_from_table,
    printed_n_minus_2_one_one, printed_two_row_two, verify_coefficient_sum_majorization, CheckReport,
};
use iwalk_core::walk::{convolution_oracle_capped, distribution_at_time_capped};
use iwalk_core::{Error, WalkParams};
use num_bigint::BigInt;
use num_traits::Zero;
use serde_json::{json, Value};

use crate::output::{CliResult, Failure};
use crate::{cache, Settings};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    Recursion,
    ClosedForms,
    Deci,
    TwoPart,
    N2Bound,
    EigMaj,
    Seaworld,
    Hooks,
    Detectors,
    Orthogonality,
    Oracle,
}

impl Suite {
    pub const ALL: [Suite; 11] = [
        Suite::Recursion,
        Suite::ClosedForms,
        Suite::Deci,
        Suite::TwoPart,
        Suite::N2Bound,
        Suite::EigMaj,
        Suite::Seaworld,
        Suite::Hooks,
        Suite::Detectors,
        Suite::Orthogonality,
        Suite::Oracle,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Recursion => "recursion",
            Suite::ClosedForms => "closedforms",
            Suite::Deci => "deci",
            Suite::TwoPart => "twopart",
            Suite::N2Bound => "n2bound",
            Suite::EigMaj => "eigmaj",
            Suite::Seaworld => "seaworld",
            Suite::Hooks => "hooks",
            Suite::Detectors => "detectors",
            Suite::Orthogonality => "orthogonality",
            Suite::Oracle => "oracle",
        }
    }
}

impl FromStr for Suite {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Suite::ALL
            .into_iter()
            .find(|suite| suite.name() == s)
            .ok_or_else(|| {
                let names: Vec<&str> = Suite::ALL.iter().map(|s| s.name()).collect();
                format!("unknown suite {s:?}; expected one of {}", names.join(", "))
            })
    }
}

/// How a check's outcome affects the exit status.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Mode {
    /// The claim must hold.
    Asserted,
    /// A known anomaly: the claim must fail.
    ExpectedFail,
    /// Shown but never affects the exit status.
    ReportOnly,
}

impl Mode {
    fn name(self) -> &'static str {
        match self {
            Mode::Asserted => "asserted",
            Mode::ExpectedFail => "expected-fail",
            Mode::ReportOnly => "report-only",
        }
    }
}

struct Check {
    suite: Suite,
    name: String,
    mode: Mode,
    claim_holds: bool,
    detail: String,
}

impl Check {
    fn ok(&self) -> bool {
        match self.mode {
            Mode::Asserted => self.claim_holds,
            Mode::ExpectedFail => !self.claim_holds,
            Mode::ReportOnly => true,
        }
    }

    fn to_json(&self) -> Value {
        json!({
            "suite": self.suite.name(),
            "name": self.name,
            "mode": self.mode.name(),
            "claim_holds": self.claim_holds,
            "ok": self.ok(),
            "detail": self.detail,
        })
    }
}

struct Checks {
    suite: Suite,
    out: Vec<Check>,
}

impl Checks {
    fn push(&mut self, name: impl Into<String>, mode: Mode, claim_holds: bool, detail: impl Into<String>) {
        self.out.push(Check {
            suite: self.suite,
            name: name.into(),
            mode,
            claim_holds,
            detail: detail.into(),
        });
    }
}

pub struct VerifyReport {
    pub json: Value,
    pub passed: bool,
}

/// With `skip_capped`, a suite that would exceed a size cap is recorded as
/// skipped instead of aborting the run.
pub fn run(settings: &Settings, params: &WalkParams, suites: &[Suite], skip_capped: bool) -> CliResult<VerifyReport> {
    let mut checks = Vec::new();
    let mut summaries = Vec::new();
    for &suite in suites {
        let start = std::time::Instant::now();
        let mut c = Checks { suite, out: Vec::new() };
        match run_suite(settings, params, &mut c) {
            Err(Failure::Usage(reason)) if skip_capped && reason.contains("cap exceeded") => {
                c.out.clear();
                c.push("skipped", Mode::ReportOnly, false, format!("skipped: {reason}"));
            }
            other => other?,
        }
        settings.note(&format!("suite {} ({:.3} ms)", suite.name(), start.elapsed().as_secs_f64() * 1e3));
        let passed = c.out.iter().all(Check::ok);
        summaries.push(json!({ "name": suite.name(), "passed": passed, "checks": c.out.len() }));
        checks.extend(c.out);
    }
    let passed = checks.iter().all(Check::ok);
    let failures: Vec<String> = checks
        .iter()
        .filter(|c| !c.ok())
        .map(|c| format!("{}/{}", c.suite.name(), c.name))
        .collect();
    let json = json!({
        "command": "verify",
        "n": params.n(),
        "p": format_rational(params.p()),
        "all_passed": passed,
        "failures": failures,
        "suites": summaries,
        "checks": checks.iter().map(Check::to_json).collect::<Vec<_>>(),
    });
    Ok(VerifyReport { json, passed })
}

/// The claims about eigenvalue ordering are made for `p >= 1/2`, and fail
/// at `n = 4`; outside that range they are report-only.
fn monotonicity_mode(params: &WalkParams) -> Mode {
    if params.n() >= 6 && *params.p() >= rat(1, 2) {
        Mode::Asserted
    } else {
        Mode::ReportOnly
    }
}

fn anomaly_params() -> WalkParams {
    WalkParams::with_ratio(4, 1, 2).expect("valid parameters")
}

fn describe(report: &CheckReport) -> String {
    match report.violations().next() {
        None => format!("{} comparisons hold", report.comparisons.len()),
        Some(v) => format!(
            "{} of {} comparisons fail; first: psi[{}] = {} < psi[{}] = {}",
            report.violations().count(),
            report.comparisons.len(),
            v.larger,
            format_rational(&v.larger_value),
            v.smaller,
            format_rational(&v.smaller_value)
        ),
    }
}

fn cap(n: usize, cap: usize, what: &'static str) -> CliResult<()> {
    if n > cap {
        return Err(Error::CapExceeded { what, n, cap }.into());
    }
    Ok(())
}

fn run_suite(settings: &Settings, params: &WalkParams, c: &mut Checks) -> CliResult<()> {
    let n = params.n();
    match c.suite {
        Suite::Recursion => {
            cap(n, settings.caps.table, "eigenvalue table")?;
            let mismatches: Vec<String> = enumerate_partitions(n)
                .into_iter()
                .filter_map(|l| {
                    let d = eigenvalue_direct(&l, params).ok()?;
                    let r = eigenvalue_recursive(&l, params).ok()?;
                    (d != r).then(|| l.to_string())
                })
                .collect();
            let count = enumerate_partitions(n).len();
            c.push(
                "direct-equals-recursive",
                Mode::Asserted,
                mismatches.is_empty(),
                if mismatches.is_empty() {
                    format!("{count} partitions agree")
                } else {
                    format!("differ at {}", mismatches.join(" "))
                },
            );
        }
        Suite::ClosedForms => {
            let table = cache::table(settings, params)?;
            let mut matched = 0;
            let mut bad = Vec::new();
            for (lambda, psi) in table.iter() {
                if let Some(closed) = eigenvalue_closed_form(lambda, params) {
                    matched += 1;
                    if &closed != psi {
                        bad.push(lambda.to_string());
                    }
                }
            }
            c.push(
                "closed-forms-match-direct",
                Mode::Asserted,
                bad.is_empty(),
                if bad.is_empty() {
                    format!("{matched} closed-form shapes agree")
                } else {
                    format!("differ at {}", bad.join(" "))
                },
            );
            if n >= 4 {
                let printed = printed_two_row_two(n, params.p());
                let exact = table.psi(&Partition::two_row(n, 2));
                c.push(
                    "printed-two-row-two",
                    Mode::ReportOnly,
                    &printed == exact,
                    format!("printed {} vs exact {}", format_rational(&printed), format_rational(exact)),
                );
            }
            let w = anomaly_params();
            let exact = eigenvalue_direct(&Partition::two_row(4, 2), &w)?;
            let printed = printed_two_row_two(4, w.p());
            c.push(
                "printed-two-row-two-sign-at-n4",
                Mode::ExpectedFail,
                printed == exact,
                format!("printed {} vs exact {}", format_rational(&printed), format_rational(&exact)),
            );
            let exact = eigenvalue_direct(&Partition::hook(4, 2), &w)?;
            let printed = printed_n_minus_2_one_one(4, w.p());
            c.push(
                "printed-hook-two-extra-term-at-n4",
                Mode::ExpectedFail,
                printed == exact,
                format!("printed {} vs exact {}", format_rational(&printed), format_rational(&exact)),
            );
        }
        Suite::Deci | Suite::TwoPart | Suite::N2Bound => {
            let pick = |r: iwalk_core::spectrum::MonotonicityReport| match c.suite {
                Suite::Deci => r.two_row_decreasing,
                Suite::TwoPart => r.two_row_dominates,
                _ => r.balanced_dominates,
            };
            let table = cache::table(settings, params)?;
            let report = pick(monotonicity_from_table(&table));
            c.push(report.name.clone(), monotonicity_mode(params), report.passed, describe(&report));
            if c.suite == Suite::Deci {
                let table = cache::table(settings, &anomaly_params())?;
                let report = monotonicity_from_table(&table).two_row_decreasing;
                c.push("two-row-decreasing-at-n4", Mode::ExpectedFail, report.passed, describe(&report));
            }
        }
        Suite::EigMaj => {
            cap(n, settings.caps.table, "eigenvalue table")?;
            let report = verify_coefficient_sum_majorization(n, params.p())?;
            let mode = if *params.p() >= rat(1, 2) {
                Mode::Asserted
            } else {
                Mode::ReportOnly
            };
            c.push("coefficient-sum-monotone-on-covers", mode, report.passed, describe(&report));
        }
        Suite::Seaworld => {
            if params.p().is_zero() {
                c.push("insertion-identity", Mode::ReportOnly, false, "skipped: the identity needs p > 0");
            } else {
                let mut a_fail = Vec::new();
                let mut b_fail = Vec::new();
                for i in 0..=n / 2 {
                    let r = verify_seaworld(n, i, params.p())?;
                    if !r.variant_a_matches {
                        a_fail.push(i.to_string());
                    }
                    if !r.variant_b_matches {
                        b_fail.push(i.to_string());
                    }
                }
                let detail = |fails: &[String]| {
                    if fails.is_empty() {
                        format!("all {} values of i match", n / 2 + 1)
                    } else {
                        format!("fails at i = {}", fails.join(" "))
                    }
                };
                c.push("insertion-identity", Mode::Asserted, a_fail.is_empty(), detail(&a_fail));
                c.push("insertion-identity-alternate-binomial", Mode::ReportOnly, b_fail.is_empty(), detail(&b_fail));
            }
            let r = verify_seaworld(4, 2, &rat(1, 2))?;
            c.push(
                "alternate-binomial-at-n4-i2",
                Mode::ExpectedFail,
                r.variant_b_matches,
                format!(
                    "rhs {} vs alternate {}",
                    format_rational(&r.rhs),
                    format_rational(&r.variant_b)
                ),
            );
        }
        Suite::Hooks => {
            let r = hook_eigenvalue_identity_check(n, params.p())?;
            let bad: Vec<String> = r.rows.iter().filter(|row| !row.agree).map(|row| row.i.to_string()).collect();
            c.push(
                "hook-eigenvalue-three-ways",
                Mode::Asserted,
                r.passed,
                if bad.is_empty() {
                    format!("{} hooks agree", r.rows.len())
                } else {
                    format!("differ at i = {}", bad.join(" "))
                },
            );
            c.push(
                "half-laziness-long-hooks-vanish",
                Mode::Asserted,
                half_hooks_vanish(n),
                "psi[n-i,1^i] = 0 for i >= n/2 at p = 1/2",
            );
        }
        Suite::Detectors => {
            cap(n, settings.caps.table, "eigenvalue table")?;
            let detail = |r: &iwalk_core::order::DetectorReport| match r.rows.iter().find(|row| !row.passed) {
                None => format!("two-row shape dominates for all {} values of i", r.rows.len()),
                Some(row) => format!(
                    "i = {}: {} has |psi| = {} above {}",
                    row.i,
                    row.max_detector,
                    format_rational(&row.max_value),
                    format_rational(&row.two_row_value)
                ),
            };
            let r = detector_dominance_check(params)?;
            c.push("two-row-dominates-detectors", monotonicity_mode(params), r.passed, detail(&r));
            let r = detector_dominance_check(&anomaly_params())?;
            c.push("two-row-dominates-detectors-at-n4", Mode::ExpectedFail, r.passed, detail(&r));
        }
        Suite::Orthogonality => {
            cap(n, settings.caps.orthogonality, "orthogonality check")?;
            let parts = enumerate_partitions(n);
            let classes = enumerate_cycle_types(n);
            let order = BigInt::from(factorial(n));
            let rows: Vec<Vec<BigInt>> = parts
                .iter()
                .map(|l| classes.iter().map(|a| character(l, a)).collect::<iwalk_core::Result<_>>())
                .collect::<iwalk_core::Result<_>>()?;
            let sizes: Vec<BigInt> = classes.iter().map(|a| BigInt::from(class_size(a))).collect();
            let mut column_ok = true;
            for a in 0..classes.len() {
                for b in 0..classes.len() {
                    let sum: BigInt = rows.iter().map(|r| &r[a] * &r[b]).sum();
                    let expected = if a == b { &order / &sizes[a] } else { BigInt::zero() };
                    column_ok &= sum == expected;
                }
            }
            let mut row_ok = true;
            for x in 0..parts.len() {
                for y in 0..parts.len() {
                    let sum: BigInt = (0..classes.len()).map(|k| &sizes[k] * &rows[x][k] * &rows[y][k]).sum();
                    let expected = if x == y { order.clone() } else { BigInt::zero() };
                    row_ok &= sum == expected;
                }
            }
            c.push(
                "column-orthogonality",
                Mode::Asserted,
                column_ok,
                format!("{} classes", classes.len()),
            );
            c.push("row-orthogonality", Mode::Asserted, row_ok, format!("{} partitions", parts.len()));
        }
        Suite::Oracle => {
            cap(n, settings.caps.oracle, "convolution oracle")?;
            let mut differ = Vec::new();
            for t in 0..=6 {
                let fourier = distribution_at_time_capped(params, t, settings.caps.distribution)?;
                let direct = convolution_oracle_capped(params, t, settings.caps.oracle)?;
                if fourier != direct {
                    differ.push(t.to_string());
                }
            }
            c.push(
                "fourier-equals-convolution",
                Mode::Asserted,
                differ.is_empty(),
                if differ.is_empty() {
                    "exact equality for t = 0..6".to_string()
                } else {
                    format!("differ at t = {}", differ.join(" "))
                },
            );
        }
    }
    Ok(())
}

/// Parses a comma-separated suite list; `"all"` selects every suite.
pub fn parse_suites(spec: &str) -> CliResult<Vec<Suite>> {
    if spec.trim() == "all" {
        return Ok(Suite::ALL.to_vec());
    }
    let mut out = Vec::new();
    for part in spec.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let suite: Suite = part.parse().map_err(Failure::Usage)?;
        if !out.contains(&suite) {
            out.push(suite);
        }
    }
    if out.is_empty() {
        return Err(Failure::Usage("--suite needs at least one suite name".into()));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_names_roundtrip() {
        for s in Suite::ALL {
            assert_eq!(s.name().parse::<Suite>().unwrap(), s);
        }
        assert!("nope".parse::<Suite>().is_err());
        assert_eq!(parse_suites("oracle, recursion,oracle").unwrap(), vec![Suite::Oracle, Suite::Recursion]);
        assert_eq!(parse_suites("all").unwrap().len(), 11);
    }

    #[test]
    fn modes_decide_ok() {
        let check = |mode, holds| Check {
            suite: Suite::Deci,
            name: String::new(),
            mode,
            claim_holds: holds,
            detail: String::new(),
        };
        assert!(check(Mode::Asserted, true).ok());
        assert!(!check(Mode::Asserted, false).ok());
        assert!(check(Mode::ExpectedFail, false).ok());
        assert!(!check(Mode::ExpectedFail, true).ok());
        assert!(check(Mode::ReportOnly, false).ok());
    }
}
