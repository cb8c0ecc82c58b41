//! Upper and lower bounds on total variation, plus the eigenvalue bounds
//! behind the upper mixing-time estimate.
//!
//! Every exact-vs-bound comparison happens in rational arithmetic; floats
//! appear only in [`BoundReport::value`] and sweep output.

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{binomial, binomial_poly, format_rational, multinomial, pow, rat, rat_int, rat_uint, to_f64};
use crate::partition::{dimension, Partition};
use crate::spectrum::{build_table, ser_rational, TableOptions, WalkParams};
use crate::walk::{distribution_at_time, total_variation};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum BoundKind {
    DsUpper,
    AnalyticPsi,
    Invup,
    WilsonLower,
    ParityLower,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Hypothesis {
    pub name: String,
    pub satisfied: bool,
}

impl Hypothesis {
    fn new(name: &str, satisfied: bool) -> Self {
        Hypothesis {
            name: name.to_string(),
            satisfied,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct BoundReport {
    pub kind: BoundKind,
    pub value: f64,
    pub hypotheses: Vec<Hypothesis>,
    pub witnesses: serde_json::Map<String, serde_json::Value>,
}

impl BoundReport {
    fn new(kind: BoundKind, value: f64) -> Self {
        BoundReport {
            kind,
            value,
            hypotheses: Vec::new(),
            witnesses: serde_json::Map::new(),
        }
    }

    fn hypothesis(mut self, name: &str, satisfied: bool) -> Self {
        self.hypotheses.push(Hypothesis::new(name, satisfied));
        self
    }

    fn witness(mut self, name: &str, value: impl Into<serde_json::Value>) -> Self {
        self.witnesses.insert(name.to_string(), value.into());
        self
    }

    fn exact_witness(self, name: &str, value: &BigRational) -> Self {
        self.witness(name, format_rational(value))
    }

    pub fn hypotheses_hold(&self) -> bool {
        self.hypotheses.iter().all(|h| h.satisfied)
    }
}

/// `(1/4) Σ_{λ ≠ [n]} d_λ² ψ_λ^{2t}`, exact.
pub fn ds_upper_bound_exact(params: &WalkParams, t: usize) -> Result<BigRational> {
    let table = build_table(params, TableOptions::default())?;
    let trivial = Partition::row(params.n());
    let sum: BigRational = table
        .iter()
        .filter(|(lambda, _)| **lambda != trivial)
        .map(|(lambda, psi)| {
            let d = rat_uint(dimension(lambda));
            &d * &d * pow(psi, 2 * t)
        })
        .sum();
    Ok(sum / rat(4, 1))
}

pub fn ds_upper_bound(params: &WalkParams, t: usize) -> Result<BoundReport> {
    let exact = ds_upper_bound_exact(params, t)?;
    Ok(BoundReport::new(BoundKind::DsUpper, to_f64(&exact))
        .hypothesis("eigenvalue-table-available", true)
        .witness("t", t)
        .exact_witness("bound_on_tv_squared", &exact)
        .witness("bound_on_tv", to_f64(&exact).sqrt()))
}

fn log_contraction(p: f64) -> f64 {
    (2.0 / (1.0 + p)).ln()
}

/// Analytic bound on `ψ_λ` for `λ_1 = n - i` (`i < n/2`), or for every
/// `λ` with `λ_1 <= n/2` when `i = n/2`.
pub fn analytic_psi_bound(n: usize, i: usize, p: &BigRational) -> Result<f64> {
    if i == 0 || 2 * i > n {
        return Err(Error::Precondition(format!("need 1 <= i <= n/2, got n = {n}, i = {i}")));
    }
    let decay = log_contraction(to_f64(p));
    let (nf, fi) = (n as f64, i as f64);
    let e2 = std::f64::consts::E.powi(2);
    let exponent = if 2 * i == n {
        -(nf / 2.0) * decay + (nf.powf(1.5) * (nf + 2.0) * e2 / 8.0).ln()
    } else {
        -fi * decay + (e2 * (fi + 1.0) / 2f64.powf(2.5) * ((nf - fi) / (nf - 2.0 * fi)).powf(1.5)).ln()
    };
    Ok(exponent.exp())
}

/// Bound on `Σ_{j <= i, i-j even} (2p)^j C(n/2; j, (n-i-j)/2, (i-j)/2)` when
/// the top term dominates: `(2p)^i C(n/2, i) / (1 - i(i-1)/(2p²(n-2i+2)))`.
pub fn small_i_sum_bound(n: usize, i: usize, p: &BigRational) -> Result<BigRational> {
    if i == 0 || 2 * i > n {
        return Err(Error::Precondition(format!("need 1 <= i <= n/2, got n = {n}, i = {i}")));
    }
    let room = rat_int((n - 2 * i + 2) as i64);
    // i <= p sqrt(n - 2i + 2), squared to stay exact.
    if rat_int((i * i) as i64) > p * p * &room {
        return Err(Error::Precondition(format!(
            "small-i bound needs i <= p*sqrt(n-2i+2); fails at n = {n}, i = {i}, p = {}",
            format_rational(p)
        )));
    }
    let correction = BigRational::one() - rat_int((i * (i - 1)) as i64) / (rat(2, 1) * p * p * room);
    Ok(pow(&(p * rat(2, 1)), i) * rat_uint(binomial(n / 2, i)) / correction)
}

/// `C(n,i)^{-1} (n-i+1)/(n-2i+1)`, the largest `d_{λ/λ_1}/d_λ` over
/// `λ_1 = n - i`.
pub fn first_row_ratio_max(n: usize, i: usize) -> BigRational {
    rat((n - i + 1) as i64, (n - 2 * i + 1) as i64) / rat_uint(binomial(n, i))
}

/// The small-`i` sum bound turned into a bound on `ψ_{[n-i,i]}`.
pub fn small_i_psi_bound(n: usize, i: usize, p: &BigRational) -> Result<BigRational> {
    Ok(first_row_ratio_max(n, i) * small_i_sum_bound(n, i, p)?)
}

/// `Σ_{j <= i, i-j even} (2p)^j C(n/2; j, (n-i-j)/2, (i-j)/2)` itself.
pub fn first_row_insertion_sum(n: usize, i: usize, p: &BigRational) -> BigRational {
    let two_p = p * rat(2, 1);
    (0..=i)
        .filter(|j| (i - j).is_multiple_of(2) && n >= i + j)
        .map(|j| rat_uint(multinomial(n / 2, &[j, (i - j) / 2])) * pow(&two_p, j))
        .sum()
}

/// Largest `i` the small-`i` case covers at this `n` and `p`.
fn small_i_limit(n: usize, p: f64) -> i64 {
    (p * ((n as f64 + 2.0) / 2.0).sqrt() - 1.0).floor() as i64
}

/// Upper mixing estimate at `t = log_{2/(1+p)} n + c / log(2/(1+p))`.
/// The value `e^{-c/2}` is certified only when every hypothesis holds.
pub fn upper_mixing_bound(params: &WalkParams, c: f64) -> BoundReport {
    let n = params.n();
    let p = to_f64(params.p());
    let nf = n as f64;
    let decay = log_contraction(p);
    let t = if decay > 0.0 {
        (nf.ln() + c) / decay
    } else {
        f64::INFINITY
    };
    let decay_ok = 10.0 * (nf + 2.0).ln() / (((nf + 2.0) / 2.0).sqrt() - 1.0) <= decay;
    let size_ok = nf - 1.0 > (nf / 2.0).sqrt() * (1.0 + nf.ln());
    let i_max = small_i_limit(n, p);
    let case_two_ok = i_max < 1 || 2.0 / (nf - 2.0 * i_max as f64 + 1.0) <= p * p * decay * decay;
    let mut report = BoundReport::new(BoundKind::Invup, (-c / 2.0).exp())
        .hypothesis("p-at-least-half", *params.p() >= rat(1, 2))
        .hypothesis("eigenvalue-decay-dominates", decay_ok)
        .hypothesis("n-large-enough", size_ok)
        .hypothesis("small-i-case-condition", case_two_ok)
        .witness("c", c)
        .witness("log_contraction", decay)
        .witness("small_i_limit", i_max);
    report = report.witness(
        "t",
        if t.is_finite() {
            serde_json::json!(t)
        } else {
            serde_json::json!("inf")
        },
    );
    let certified = report.hypotheses_hold();
    report.witness("certified", certified)
}

#[derive(Clone, Debug, Serialize)]
pub struct WilsonBound {
    #[serde(serialize_with = "ser_rational")]
    pub mean: BigRational,
    #[serde(serialize_with = "ser_rational")]
    pub variance: BigRational,
    #[serde(serialize_with = "ser_rational")]
    pub sigma_squared: BigRational,
    #[serde(serialize_with = "ser_rational")]
    pub r_squared: BigRational,
    #[serde(serialize_with = "ser_rational")]
    pub value: BigRational,
}

/// Lower bound from the fixed-point statistic `χ_{[n-1,1]}`: with
/// `r² = E²/σ²`, TV is at least `r²/(4 + r²)`.
pub fn wilson_lower_bound_exact(params: &WalkParams, t: usize) -> Result<WilsonBound> {
    let n = params.n();
    if n < 4 {
        return Err(Error::Precondition(format!("fixed-point lower bound needs n >= 4, got {n}")));
    }
    let psi = |parts: Vec<usize>| -> Result<BigRational> {
        crate::spectrum::eigenvalue_direct(&Partition::new(parts), params)
    };
    let standard = pow(&psi(vec![n - 1, 1])?, t);
    let two_row = pow(&psi(vec![n - 2, 2])?, t);
    let hook = pow(&psi(vec![n - 2, 1, 1])?, t);
    let ni = n as i64;
    let mean = rat_int(ni - 1) * &standard;
    let second_moment = BigRational::one()
        + rat_int(ni - 1) * &standard
        + rat(ni * (ni - 3), 2) * two_row
        + rat((ni - 1) * (ni - 2), 2) * hook;
    let variance = second_moment - &mean * &mean;
    let sigma_squared = (&variance + BigRational::one()) / rat(2, 1);
    let r_squared = &mean * &mean / &sigma_squared;
    let value = &r_squared / (rat(4, 1) + &r_squared);
    Ok(WilsonBound {
        mean,
        variance,
        sigma_squared,
        r_squared,
        value,
    })
}

pub fn wilson_lower_bound(params: &WalkParams, t: usize) -> Result<BoundReport> {
    let w = wilson_lower_bound_exact(params, t)?;
    Ok(BoundReport::new(BoundKind::WilsonLower, to_f64(&w.value))
        .hypothesis("n-at-least-four", true)
        .hypothesis("p-at-least-half", *params.p() >= rat(1, 2))
        .witness("t", t)
        .exact_witness("mean", &w.mean)
        .exact_witness("variance", &w.variance)
        .exact_witness("sigma_squared", &w.sigma_squared)
        .exact_witness("value", &w.value))
}

#[derive(Clone, Debug, Serialize)]
pub struct ParityBound {
    /// `(1/2)(1-2p)^{tn/2}` for `p <= 1/2`, zero otherwise.
    #[serde(serialize_with = "ser_rational")]
    pub value: BigRational,
    /// Even mass minus odd mass, `(2p-1)^{tn/2}`.
    #[serde(serialize_with = "ser_rational")]
    pub parity_gap: BigRational,
}

pub fn parity_lower_bound_exact(params: &WalkParams, t: usize) -> Result<ParityBound> {
    if !t.is_multiple_of(2) {
        return Err(Error::Precondition(format!("parity bound needs even t, got {t}")));
    }
    let exponent = t * params.half();
    let two_p = params.p() * rat(2, 1);
    let parity_gap = pow(&(&two_p - BigRational::one()), exponent);
    let value = if *params.p() <= rat(1, 2) {
        pow(&(BigRational::one() - &two_p), exponent) / rat(2, 1)
    } else {
        BigRational::zero()
    };
    Ok(ParityBound { value, parity_gap })
}

pub fn parity_lower_bound(params: &WalkParams, t: usize) -> Result<BoundReport> {
    let b = parity_lower_bound_exact(params, t)?;
    Ok(BoundReport::new(BoundKind::ParityLower, to_f64(&b.value))
        .hypothesis("t-even", true)
        .hypothesis("p-at-most-half", *params.p() <= rat(1, 2))
        .witness("t", t)
        .exact_witness("value", &b.value)
        .exact_witness("parity_gap", &b.parity_gap))
}

pub fn analytic_psi_report(n: usize, i: usize, p: &BigRational) -> Result<BoundReport> {
    let value = analytic_psi_bound(n, i, p)?;
    Ok(BoundReport::new(BoundKind::AnalyticPsi, value)
        .hypothesis("i-in-range", true)
        .witness("n", n)
        .witness("i", i)
        .witness("p", format_rational(p)))
}

#[derive(Clone, Debug, Serialize)]
pub struct SeaworldReport {
    pub n: usize,
    pub i: usize,
    #[serde(serialize_with = "ser_rational")]
    pub p: BigRational,
    #[serde(serialize_with = "ser_rational")]
    pub rhs: BigRational,
    /// Trailing binomial `C(n-2j₁-2j₂, i-2j₂)`.
    #[serde(serialize_with = "ser_rational")]
    pub variant_a: BigRational,
    /// Trailing binomial `C(n-2j₁-2j₂, i-2j₁-2j₂)`.
    #[serde(serialize_with = "ser_rational")]
    pub variant_b: BigRational,
    pub variant_a_matches: bool,
    pub variant_b_matches: bool,
}

/// Compares the two-cycle insertion sum against the split-into-two-parts
/// count `Σ_j 2^j p^{-(n/2-j)} C(n/2; j, (n-i-j)/2, (i-j)/2)`.
pub fn verify_seaworld(n: usize, i: usize, p: &BigRational) -> Result<SeaworldReport> {
    if 2 * i > n || !n.is_multiple_of(2) {
        return Err(Error::Precondition(format!("need even n and 0 <= i <= n/2, got n = {n}, i = {i}")));
    }
    if p.is_zero() {
        return Err(Error::Precondition("insertion identity needs p > 0".into()));
    }
    let half = n / 2;
    let inv_p = p.recip();
    let ratio = (BigRational::one() - p) / p;
    let rhs: BigRational = (0..=i)
        .filter(|j| (i - j).is_multiple_of(2) && (n - i - j).is_multiple_of(2))
        .map(|j| {
            pow(&rat(2, 1), j) * pow(&inv_p, half - j) * rat_uint(multinomial(half, &[j, (n - i - j) / 2]))
        })
        .sum();
    let mut variant_a = BigRational::zero();
    let mut variant_b = BigRational::zero();
    for j1 in 0..=half {
        for j2 in 0..=(half - j1) {
            let weight = pow(&ratio, j1 + j2) * rat_uint(multinomial(half, &[j1, j2]));
            let top = (n - 2 * j1 - 2 * j2) as i64;
            let (i, j1, j2) = (i as i64, j1 as i64, j2 as i64);
            variant_a += &weight * rat_int(binomial_poly(top, i - 2 * j2));
            variant_b += &weight * rat_int(binomial_poly(top, i - 2 * j1 - 2 * j2));
        }
    }
    Ok(SeaworldReport {
        n,
        i,
        p: p.clone(),
        variant_a_matches: variant_a == rhs,
        variant_b_matches: variant_b == rhs,
        rhs,
        variant_a,
        variant_b,
    })
}

/// One cell of a bound sweep. `index` is `t` or `i` depending on the sweep.
#[derive(Clone, Debug, Serialize)]
pub struct SweepRow {
    pub n: usize,
    pub index: usize,
    #[serde(serialize_with = "ser_rational")]
    pub p: BigRational,
    pub exact: f64,
    pub bound: f64,
    pub satisfied: bool,
}

pub fn sweep_csv(rows: &[SweepRow], index_name: &str) -> String {
    let mut out = format!("n,{index_name},p,exact,bound,satisfied\n");
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{:e},{:e},{}\n",
            r.n,
            r.index,
            format_rational(&r.p),
            r.exact,
            r.bound,
            r.satisfied
        ));
    }
    out
}

/// `TV(t)²` against the DS bound for `t` in `ts`.
pub fn ds_sweep(params: &WalkParams, ts: impl IntoIterator<Item = usize>) -> Result<Vec<SweepRow>> {
    ts.into_iter()
        .map(|t| {
            let tv = total_variation(&distribution_at_time(params, t)?);
            let tv_sq = &tv * &tv;
            let bound = ds_upper_bound_exact(params, t)?;
            Ok(SweepRow {
                n: params.n(),
                index: t,
                p: params.p().clone(),
                exact: to_f64(&tv_sq),
                bound: to_f64(&bound),
                satisfied: bound >= tv_sq,
            })
        })
        .collect()
}

pub fn wilson_sweep(params: &WalkParams, ts: impl IntoIterator<Item = usize>) -> Result<Vec<SweepRow>> {
    ts.into_iter()
        .map(|t| {
            let tv = total_variation(&distribution_at_time(params, t)?);
            let bound = wilson_lower_bound_exact(params, t)?.value;
            Ok(SweepRow {
                n: params.n(),
                index: t,
                p: params.p().clone(),
                exact: to_f64(&tv),
                bound: to_f64(&bound),
                satisfied: bound <= tv,
            })
        })
        .collect()
}

pub fn parity_sweep(params: &WalkParams, ts: impl IntoIterator<Item = usize>) -> Result<Vec<SweepRow>> {
    ts.into_iter()
        .filter(|t| t % 2 == 0)
        .map(|t| {
            let tv = total_variation(&distribution_at_time(params, t)?);
            let bound = parity_lower_bound_exact(params, t)?.value;
            Ok(SweepRow {
                n: params.n(),
                index: t,
                p: params.p().clone(),
                exact: to_f64(&tv),
                bound: to_f64(&bound),
                satisfied: bound <= tv,
            })
        })
        .collect()
}

/// `|ψ_{[n-i,i]}|` against the analytic bound for `1 <= i <= n/2`. The
/// comparison is exact in the sense that the float bound is compared to the
/// correctly rounded eigenvalue; cells are reported, not asserted.
pub fn analytic_sweep(params: &WalkParams) -> Result<Vec<SweepRow>> {
    let n = params.n();
    (1..=n / 2)
        .map(|i| {
            let psi = crate::spectrum::eigenvalue_direct(&Partition::two_row(n, i), params)?.abs();
            let bound = analytic_psi_bound(n, i, params.p())?;
            let exact = to_f64(&psi);
            Ok(SweepRow {
                n,
                index: i,
                p: params.p().clone(),
                exact,
                bound,
                satisfied: bound >= exact,
            })
        })
        .collect()
}
