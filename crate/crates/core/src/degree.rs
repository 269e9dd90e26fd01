//! The R-infinity nilpotency degree of `BS(m, n)`: the least `c` such that
//! `BS(m, n) / gamma_{c+1}` has the R-infinity property.
//!
//! [`closed_form_degree`] evaluates the case table; [`search_degree`] finds
//! the least `c` for which `G_c(m, n)` has the property; [`cross_check`]
//! runs both and rejects any disagreement.

use std::sync::Arc;

use num_bigint::BigInt;
use rayon::prelude::*;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::gcgroup::{BsParams, GcGroup};
use crate::intlinalg::{self, IntMatrix};
use crate::twisted;

pub const DEFAULT_SWEEP_C_MAX: usize = 12;
pub const DEFAULT_QUERY_C_MAX: usize = 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum CaseLabel {
    #[serde(rename = "n_negative")]
    NNegative,
    #[serde(rename = "n_eq_minus_m")]
    NEqMinusM,
    #[serde(rename = "n_eq_m")]
    NEqM,
    #[serde(rename = "diff_eq_d")]
    DiffEqD,
    #[serde(rename = "diff_eq_2d")]
    DiffEq2d,
    #[serde(rename = "diff_ge_3d")]
    DiffGe3d,
}

impl CaseLabel {
    pub fn as_str(self) -> &'static str {
        match self {
            CaseLabel::NNegative => "n_negative",
            CaseLabel::NEqMinusM => "n_eq_minus_m",
            CaseLabel::NEqM => "n_eq_m",
            CaseLabel::DiffEqD => "diff_eq_d",
            CaseLabel::DiffEq2d => "diff_eq_2d",
            CaseLabel::DiffGe3d => "diff_ge_3d",
        }
    }

    pub fn of(params: &BsParams) -> Self {
        let BsParams { m, n, d, .. } = *params;
        if n == m {
            CaseLabel::NEqM
        } else if n == -m {
            CaseLabel::NEqMinusM
        } else if n < 0 {
            CaseLabel::NNegative
        } else if n - m == d {
            CaseLabel::DiffEqD
        } else if n - m == 2 * d {
            CaseLabel::DiffEq2d
        } else {
            CaseLabel::DiffGe3d
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DegreeKind {
    Exact { value: usize },
    Infinite,
    Interval { lower: usize, upper: usize },
}

impl std::fmt::Display for DegreeKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            DegreeKind::Exact { value } => write!(f, "{value}"),
            DegreeKind::Infinite => write!(f, "inf"),
            DegreeKind::Interval { lower, upper } => write!(f, "[{lower},{upper}]"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SearchOutcome {
    /// Least class bound at which `G_c` has the R-infinity property.
    Found { c: usize },
    NotFoundUpTo { c_max: usize },
}

impl std::fmt::Display for SearchOutcome {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            SearchOutcome::Found { c } => write!(f, "{c}"),
            SearchOutcome::NotFoundUpTo { c_max } => write!(f, ">{c_max}"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DegreeMethod {
    ClosedForm,
    Search,
    Both,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct DegreeResult {
    pub params: BsParams,
    /// The closed-form value. For `gcd(m, n) > 1` with `n - m = 2d` only an
    /// interval is known.
    pub kind: DegreeKind,
    pub case_label: CaseLabel,
    pub p: Option<u32>,
    pub method: DegreeMethod,
    /// Least `c <= c_max` with `G_c(m, n)` having the property. Equals the
    /// degree when `gcd(m, n) = 1`, otherwise an upper bound for it.
    pub gc_threshold: Option<SearchOutcome>,
}

/// Largest `p` with `2^p | 2 (m / d) + 2`.
pub fn p_exponent(m: i64, d: i64) -> Result<u32> {
    if d <= 0 || m % d != 0 || m / d < 1 {
        return Err(Error::NonDivisor { m, d });
    }
    let x = 2 * (m / d) + 2;
    Ok(x.trailing_zeros())
}

pub fn closed_form_degree(params: &BsParams) -> DegreeResult {
    let case_label = CaseLabel::of(params);
    let mut p = None;
    let kind = match case_label {
        CaseLabel::NNegative | CaseLabel::DiffGe3d => DegreeKind::Exact { value: 2 },
        CaseLabel::NEqMinusM | CaseLabel::NEqM | CaseLabel::DiffEqD => DegreeKind::Infinite,
        CaseLabel::DiffEq2d => {
            let pe = p_exponent(params.m, params.d).expect("d divides m for canonical params");
            p = Some(pe);
            let upper = pe as usize + 2;
            if params.d == 1 {
                DegreeKind::Exact { value: upper }
            } else {
                DegreeKind::Interval { lower: 2, upper }
            }
        }
    };
    DegreeResult { params: *params, kind, case_label, p, method: DegreeMethod::ClosedForm, gc_threshold: None }
}

/// Reidemeister number of `-id` on `Z^2`, the only automorphism needed to
/// see that `BS(1, 1) = Z^2` never acquires the property.
pub fn minus_identity_reidemeister_on_z2() -> Result<BigInt> {
    // R(-id) = |coker(id - (-id))| = |coker(2 id)|.
    let two_id = IntMatrix::diagonal(&[BigInt::from(2), BigInt::from(2)]);
    let s = intlinalg::snf(&two_id)?;
    if s.divisors.iter().any(Zero::is_zero) {
        return Err(Error::Inconsistency("2 id has a kernel on Z^2".into()));
    }
    Ok(s.divisors.iter().product())
}

/// Least `c <= c_max` such that `G_c(m, n)` has the R-infinity property.
///
/// `m = n = 1` is answered directly: every quotient is `Z^2`, on which `-id`
/// has finitely many twisted classes. Other `m = n` are rejected.
pub fn search_degree(params: &BsParams, c_max: usize, aut_cap: u64) -> Result<SearchOutcome> {
    if params.m == params.n {
        if params.m == 1 {
            let r = minus_identity_reidemeister_on_z2()?;
            debug_assert!(r > BigInt::one());
            return Ok(SearchOutcome::NotFoundUpTo { c_max });
        }
        return Err(Error::DegenerateParams(params.m));
    }
    for c in 1..=c_max {
        let g = Arc::new(GcGroup::build(*params, c)?);
        if twisted::gc_has_rinf(&g, aut_cap)?.has_rinf {
            return Ok(SearchOutcome::Found { c });
        }
    }
    Ok(SearchOutcome::NotFoundUpTo { c_max })
}

/// Whether a search outcome is compatible with the closed form.
pub fn consistent(closed: &DegreeResult, outcome: &SearchOutcome) -> bool {
    let coprime = closed.params.d == 1;
    match (closed.kind, *outcome) {
        (DegreeKind::Infinite, SearchOutcome::NotFoundUpTo { .. }) => true,
        (DegreeKind::Infinite, SearchOutcome::Found { .. }) => false,
        (DegreeKind::Exact { value }, SearchOutcome::Found { c }) => {
            if coprime {
                c == value
            } else {
                // Search bounds the degree from above and never succeeds at c = 1.
                c >= 2 && c <= value
            }
        }
        (DegreeKind::Exact { value }, SearchOutcome::NotFoundUpTo { c_max }) => c_max < value,
        (DegreeKind::Interval { lower, upper }, SearchOutcome::Found { c }) => lower <= c && c <= upper,
        (DegreeKind::Interval { upper, .. }, SearchOutcome::NotFoundUpTo { c_max }) => c_max < upper,
    }
}

/// Runs both routes. Parameters with `m = n > 1` have no finite model and
/// are answered by the closed form alone.
pub fn cross_check(params: &BsParams, c_max: usize, aut_cap: u64) -> Result<DegreeResult> {
    let mut result = closed_form_degree(params);
    if params.m == params.n && params.m != 1 {
        return Ok(result);
    }
    let outcome = search_degree(params, c_max, aut_cap)?;
    if !consistent(&result, &outcome) {
        return Err(Error::Inconsistency(format!(
            "BS({}, {}): closed form {} but search found {}",
            params.m, params.n, result.kind, outcome
        )));
    }
    result.method = DegreeMethod::Both;
    result.gc_threshold = Some(outcome);
    Ok(result)
}

/// Degree by the requested route.
pub fn degree(params: &BsParams, method: DegreeMethod, c_max: usize, aut_cap: u64) -> Result<DegreeResult> {
    match method {
        DegreeMethod::ClosedForm => Ok(closed_form_degree(params)),
        DegreeMethod::Both => cross_check(params, c_max, aut_cap),
        DegreeMethod::Search => {
            let mut result = closed_form_degree(params);
            result.method = DegreeMethod::Search;
            result.gc_threshold = Some(search_degree(params, c_max, aut_cap)?);
            Ok(result)
        }
    }
}

/// Canonical parameters `0 < m <= |n|` with `m <= m_max`, `|n| <= n_max`,
/// ordered by `(m, n)`.
pub fn canonical_pairs(m_max: i64, n_max: i64) -> Vec<BsParams> {
    let mut out = Vec::new();
    for m in 1..=m_max {
        for n in -n_max..=n_max {
            if n != 0 && n.abs() >= m {
                out.push(BsParams::new(m, n).expect("canonical by construction"));
            }
        }
    }
    out
}

/// [`cross_check`] over [`canonical_pairs`], computed in parallel and
/// returned in pair order.
pub fn sweep(m_max: i64, n_max: i64, c_max: usize, aut_cap: u64) -> Result<Vec<DegreeResult>> {
    canonical_pairs(m_max, n_max)
        .par_iter()
        .map(|p| cross_check(p, c_max, aut_cap))
        .collect()
}
