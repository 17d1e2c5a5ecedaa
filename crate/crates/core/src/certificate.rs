//! Constructive exponent selection for the boundedness argument.
//!
//! For an admissible `(n, α, l)` this module searches an auxiliary pair
//! `(θ, μ)` with `h(θ, μ) < 0`, derives the coefficients `A, B, C, D` of the
//! linear forms `f₁(q) = A q − B`, `f₂(q) = C q − D`, picks `(p, q)` inside
//! every strict bound and evaluates the interpolation exponents
//! `a₁..a₄, κ₁, κ₂` together with the sums `β₁ + γ₁` and `β₂ + γ₂`.
//!
//! Everything is generic over [`Scalar`]: run it on [`Rational`] for exact
//! verdicts, or on `f64` as a cheap pre-filter.

// Negated comparisons are deliberate: NaN must fail every range check.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::collections::BTreeMap;
use std::fmt::{self, Write as _};

use thiserror::Error;

use crate::exact::{format_rational, parse_rational, ParseRationalError, Rational, Scalar};

/// Default number of `(θ, μ)` pairs tried by [`find_theta_mu`].
pub const DEFAULT_SEARCH_BUDGET: usize = 64;

/// Maximum number of times [`choose_pq`] doubles `q` looking for a
/// nonempty `p` interval.
const MAX_Q_DOUBLINGS: usize = 64;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CertificateError {
    #[error("unsupported dimension n = {0} (need n >= 2)")]
    UnsupportedDimension(u32),
    #[error("constraint violation: {0}")]
    ConstraintViolation(String),
    #[error("search failure: no (theta, mu) with h < 0 within {budget} pairs")]
    SearchFailure { budget: usize },
    #[error("no q threshold: A - C = {0} is not negative")]
    NoThreshold(String),
    #[error("infeasible: p interval stayed empty after {attempts} enlargements of q")]
    Infeasible { attempts: usize },
    #[error("invalid certificate: {0}")]
    InvalidCertificate(String),
}

/// Auxiliary exponents `θ` (with conjugate `θ' = θ/(θ−1)`) and `μ` (with
/// conjugate `μ' = μ/(μ−1)`).
#[derive(Debug, Clone, PartialEq)]
pub struct AuxiliaryPair<S> {
    pub theta: S,
    pub mu: S,
}

impl<S: Scalar> AuxiliaryPair<S> {
    pub fn theta_conj(&self) -> Result<S, CertificateError> {
        div(self.theta.clone(), self.theta.clone() - S::from_int(1), "theta'")
    }

    pub fn mu_conj(&self) -> Result<S, CertificateError> {
        div(self.mu.clone(), self.mu.clone() - S::from_int(1), "mu'")
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientSet<S> {
    pub a: S,
    pub b: S,
    pub c: S,
    pub d: S,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExponentSet<S> {
    pub a1: S,
    pub a2: S,
    pub a3: S,
    pub a4: S,
    pub kappa1: S,
    pub kappa2: S,
    pub beta1: S,
    pub gamma1: S,
    pub beta2: S,
    pub gamma2: S,
}

impl<S: Scalar> ExponentSet<S> {
    pub fn first_sum(&self) -> S {
        self.beta1.clone() + self.gamma1.clone()
    }

    pub fn second_sum(&self) -> S {
        self.beta2.clone() + self.gamma2.clone()
    }

    /// `(name, value)` pairs in canonical order.
    pub fn named(&self) -> [(&'static str, &S); 10] {
        [
            ("a1", &self.a1),
            ("a2", &self.a2),
            ("a3", &self.a3),
            ("a4", &self.a4),
            ("kappa1", &self.kappa1),
            ("kappa2", &self.kappa2),
            ("beta1", &self.beta1),
            ("gamma1", &self.gamma1),
            ("beta2", &self.beta2),
            ("gamma2", &self.gamma2),
        ]
    }
}

/// A checkable witness `(θ, μ, p, q)` plus its derived exponents.
#[derive(Debug, Clone, PartialEq)]
pub struct Certificate<S> {
    pub n: u32,
    pub alpha: S,
    pub l: S,
    pub aux: AuxiliaryPair<S>,
    pub p: S,
    pub q: S,
    pub exponents: ExponentSet<S>,
}

fn int<S: Scalar>(v: i64) -> S {
    S::from_int(v)
}

fn div<S: Scalar>(num: S, den: S, what: &str) -> Result<S, CertificateError> {
    num.checked_div(den)
        .ok_or_else(|| CertificateError::ConstraintViolation(format!("zero denominator in {what}")))
}

fn check_dimension(n: u32) -> Result<(), CertificateError> {
    if n < 2 {
        Err(CertificateError::UnsupportedDimension(n))
    } else {
        Ok(())
    }
}

/// `n/(n−2)` for `n ≥ 3`; `None` when `θ` is unbounded above (`n = 2`).
pub fn theta_upper<S: Scalar>(n: u32) -> Option<S> {
    (n > 2).then(|| S::from_ratio(n as i64, n as i64 - 2))
}

fn check_aux_ranges<S: Scalar>(n: u32, aux: &AuxiliaryPair<S>) -> Result<(), CertificateError> {
    check_dimension(n)?;
    if !(aux.theta > int(1)) {
        return Err(CertificateError::ConstraintViolation(format!(
            "theta = {} is not > 1",
            aux.theta
        )));
    }
    if let Some(upper) = theta_upper::<S>(n) {
        if !(aux.theta < upper) {
            return Err(CertificateError::ConstraintViolation(format!(
                "theta = {} is not < n/(n-2) = {upper}",
                aux.theta
            )));
        }
    }
    let half_n = S::from_ratio(n as i64, 2);
    if !(aux.mu > half_n) {
        return Err(CertificateError::ConstraintViolation(format!(
            "mu = {} is not > n/2",
            aux.mu
        )));
    }
    Ok(())
}

/// `n(θ + 1 − 2αθ) + 2θ`; positive for every usable `θ`.
pub fn theta_numerator<S: Scalar>(n: u32, alpha: &S, theta: &S) -> S {
    let n = int::<S>(n as i64);
    n * (theta.clone() + int(1) - int::<S>(2) * alpha.clone() * theta.clone()) + int::<S>(2) * theta.clone()
}

/// `2nθ + n² − n²θ`, positive for `1 < θ < n/(n−2)`.
fn theta_denominator<S: Scalar>(n: u32, theta: &S) -> S {
    let n = int::<S>(n as i64);
    int::<S>(2) * n.clone() * theta.clone() + n.clone() * n.clone() - n.clone() * n * theta.clone()
}

/// `h(θ, μ) = l(2μ−1)/(4μ−n) − (n(θ+1−2αθ)+2θ)/(2nθ+n²−n²θ)`.
pub fn h_value<S: Scalar>(n: u32, alpha: &S, l: &S, aux: &AuxiliaryPair<S>) -> Result<S, CertificateError> {
    check_aux_ranges(n, aux)?;
    let nn = int::<S>(n as i64);
    let mu = aux.mu.clone();
    let first = div(
        l.clone() * (int::<S>(2) * mu.clone() - int(1)),
        int::<S>(4) * mu - nn,
        "l(2mu-1)/(4mu-n)",
    )?;
    let second = div(
        theta_numerator(n, alpha, &aux.theta),
        theta_denominator(n, &aux.theta),
        "theta fraction",
    )?;
    Ok(first - second)
}

/// `lim_{μ→∞} h(1, μ) = l/2 − 1 + α − 1/n`; negative exactly on the
/// theorem region's upper side.
pub fn h_limit<S: Scalar>(n: u32, alpha: &S, l: &S) -> S {
    l.clone() / int(2) - int(1) + alpha.clone() - S::from_ratio(1, n as i64)
}

/// The `k`-th auxiliary pair of the search: `θ = 1 + 2^{−k}` (kept below
/// `n/(n−2)`), `μ = n/2 + 2^k`.
pub fn search_pair<S: Scalar>(n: u32, k: usize) -> AuxiliaryPair<S> {
    let k = k.min(i32::MAX as usize) as i32;
    let mut theta = int::<S>(1) + S::pow2(-k);
    if let Some(upper) = theta_upper::<S>(n) {
        if !(theta < upper) {
            theta = (int::<S>(1) + upper) / int(2);
        }
    }
    AuxiliaryPair {
        theta,
        mu: S::from_ratio(n as i64, 2) + S::pow2(k),
    }
}

fn is_witness<S: Scalar>(n: u32, alpha: &S, l: &S, aux: &AuxiliaryPair<S>) -> bool {
    if !theta_numerator(n, alpha, &aux.theta).gt_strict(&int(0)) {
        return false;
    }
    matches!(h_value(n, alpha, l, aux), Ok(h) if h.lt_strict(&int(0)))
}

/// Walks the pairs of [`search_pair`] for `k = 1..=budget`, approaching the
/// corner `θ → 1⁺`, `μ → ∞`, and returns the first with `h < 0` and a
/// positive θ-numerator. In exact mode each candidate is screened in `f64`
/// before the exact confirmation.
pub fn find_theta_mu<S: Scalar>(n: u32, alpha: &S, l: &S, budget: usize) -> Result<AuxiliaryPair<S>, CertificateError> {
    check_dimension(n)?;
    let (alpha_f, l_f) = (alpha.as_f64(), l.as_f64());
    for k in 1..=budget {
        if S::EXACT {
            let rough = search_pair::<f64>(n, k);
            let hopeless = match h_value(n, &alpha_f, &l_f, &rough) {
                Ok(h) => h > 1e-9 * (1.0 + h.abs()),
                Err(_) => false,
            };
            if hopeless {
                continue;
            }
        }
        let aux = search_pair::<S>(n, k);
        if is_witness(n, alpha, l, &aux) {
            return Ok(aux);
        }
    }
    Err(CertificateError::SearchFailure { budget })
}

/// `A = 2l(2μ−1)/(4μ−n)`, `B = 2lμ(n−2)²/(n(4μ−n))`,
/// `C = (2n(θ+1−2αθ)+4θ)/(2nθ+n²−n²θ)`, `D = 2nθ(1−α)(n−2)/(2nθ+n²−n²θ)`.
pub fn coeffs_abcd<S: Scalar>(
    n: u32,
    alpha: &S,
    l: &S,
    aux: &AuxiliaryPair<S>,
) -> Result<CoefficientSet<S>, CertificateError> {
    check_aux_ranges(n, aux)?;
    let nn = int::<S>(n as i64);
    let nm2 = int::<S>(n as i64 - 2);
    let two = int::<S>(2);
    let (theta, mu) = (aux.theta.clone(), aux.mu.clone());
    let mu_den = int::<S>(4) * mu.clone() - nn.clone();
    let th_den = theta_denominator(n, &theta);

    let a = div(
        two.clone() * l.clone() * (two.clone() * mu.clone() - int(1)),
        mu_den.clone(),
        "A",
    )?;
    let b = div(
        two.clone() * l.clone() * mu * nm2.clone() * nm2.clone(),
        nn.clone() * mu_den,
        "B",
    )?;
    let c = div(two.clone() * theta_numerator(n, alpha, &theta), th_den.clone(), "C")?;
    let d = div(two * nn * theta * (int::<S>(1) - alpha.clone()) * nm2, th_den, "D")?;
    Ok(CoefficientSet { a, b, c, d })
}

/// `(f₁(q), f₂(q)) = (A q − B, C q − D)`.
pub fn p_interval<S: Scalar>(coeffs: &CoefficientSet<S>, q: &S) -> (S, S) {
    (
        coeffs.a.clone() * q.clone() - coeffs.b.clone(),
        coeffs.c.clone() * q.clone() - coeffs.d.clone(),
    )
}

/// `f₁(q)` in its expanded form `−2l(nq + μ(4 + n² − 2n(2+q)))/(n(4μ−n))`.
pub fn f1_expanded<S: Scalar>(n: u32, l: &S, aux: &AuxiliaryPair<S>, q: &S) -> Result<S, CertificateError> {
    let nn = int::<S>(n as i64);
    let mu = aux.mu.clone();
    let inner = nn.clone() * q.clone()
        + mu.clone() * (int::<S>(4) + nn.clone() * nn.clone() - int::<S>(2) * nn.clone() * (int::<S>(2) + q.clone()));
    div(
        -(int::<S>(2) * l.clone() * inner),
        nn.clone() * (int::<S>(4) * mu - nn),
        "f1",
    )
}

/// `f₂(q)` in its expanded form
/// `(q(2n(θ+1−2αθ)+4θ) + 2nθ(α−1)(n−2))/(2nθ+n²−n²θ)`.
pub fn f2_expanded<S: Scalar>(n: u32, alpha: &S, aux: &AuxiliaryPair<S>, q: &S) -> Result<S, CertificateError> {
    let nn = int::<S>(n as i64);
    let theta = aux.theta.clone();
    let num = q.clone() * int::<S>(2) * theta_numerator(n, alpha, &theta)
        + int::<S>(2) * nn * theta.clone() * (alpha.clone() - int(1)) * int::<S>(n as i64 - 2);
    div(num, theta_denominator(n, &theta), "f2")
}

/// Root `q_r = (B−D)/(A−C)` of `k(q) = A − C − (B−D)/q`, or `1` when
/// `B − D ≥ 0` (then `k < 0` for every `q`).
pub fn q_threshold<S: Scalar>(coeffs: &CoefficientSet<S>) -> Result<S, CertificateError> {
    let a_minus_c = coeffs.a.clone() - coeffs.c.clone();
    if !(a_minus_c < int(0)) {
        return Err(CertificateError::NoThreshold(a_minus_c.to_string()));
    }
    let b_minus_d = coeffs.b.clone() - coeffs.d.clone();
    if b_minus_d < int(0) {
        Ok(b_minus_d / a_minus_c)
    } else {
        Ok(int(1))
    }
}

/// The four strict lower bounds on `q`, in canonical order.
pub fn q_lower_bounds<S: Scalar>(n: u32, alpha: &S, l: &S, aux: &AuxiliaryPair<S>) -> Result<[S; 4], CertificateError> {
    let coeffs = coeffs_abcd(n, alpha, l, aux)?;
    let nn = int::<S>(n as i64);
    let theta = aux.theta.clone();
    let b1 = int::<S>(n as i64 - 2) * aux.theta_conj()? / nn.clone();
    let b2 = div(nn.clone(), int::<S>(2) * aux.mu_conj()?, "n/(2mu')")? + int(1);
    let b3 = div(
        int::<S>(2) * nn * theta.clone() * (alpha.clone() - int(1)) * int::<S>(2 - n as i64),
        int::<S>(2) * theta_numerator(n, alpha, &theta),
        "third q bound",
    )?;
    let b4 = q_threshold(&coeffs)?;
    Ok([b1, b2, b3, b4])
}

/// The three strict lower bounds on `p`, in canonical order.
pub fn p_lower_bounds<S: Scalar>(n: u32, alpha: &S, l: &S, aux: &AuxiliaryPair<S>) -> Result<[S; 3], CertificateError> {
    let nn = int::<S>(n as i64);
    let nm2 = int::<S>(n as i64 - 2);
    let theta = aux.theta.clone();
    let b1 = div(int(1), theta.clone(), "1/theta")? + int(2);
    let b2 = int::<S>(2) * nm2.clone() * l.clone() * aux.mu.clone() / nn.clone();
    let b3 = div(
        int::<S>(2) * theta.clone() * (alpha.clone() - int(1)) * nm2.clone(),
        nn - theta * nm2,
        "third p bound",
    )?;
    Ok([b1, b2, b3])
}

fn max_all<S: Scalar>(values: &[S]) -> S {
    values
        .iter()
        .cloned()
        .reduce(Scalar::max_of)
        .expect("bound lists are nonempty")
}

/// Picks `q = 1.25 · max(q bounds)`, then `p` at the midpoint of
/// `(max(p bounds, f₁(q)), f₂(q))`, doubling `q` while that interval is
/// empty.
pub fn choose_pq<S: Scalar>(n: u32, alpha: &S, l: &S, aux: &AuxiliaryPair<S>) -> Result<(S, S), CertificateError> {
    let h = h_value(n, alpha, l, aux)?;
    if !h.lt_strict(&int(0)) {
        return Err(CertificateError::ConstraintViolation(format!(
            "h(theta, mu) = {h} is not negative"
        )));
    }
    let coeffs = coeffs_abcd(n, alpha, l, aux)?;
    let q_floor = max_all(&q_lower_bounds(n, alpha, l, aux)?);
    let p_floor = max_all(&p_lower_bounds(n, alpha, l, aux)?);

    let mut q = q_floor * S::from_ratio(5, 4);
    for _ in 0..MAX_Q_DOUBLINGS {
        let (f1, f2) = p_interval(&coeffs, &q);
        let lo = p_floor.clone().max_of(f1);
        if lo.lt_strict(&f2) {
            let p = (lo + f2) / int(2);
            return Ok((p, q));
        }
        q = q * int(2);
    }
    Err(CertificateError::Infeasible {
        attempts: MAX_Q_DOUBLINGS,
    })
}

/// Evaluates the ten exponents without checking their ranges.
pub fn compute_exponents<S: Scalar>(
    n: u32,
    alpha: &S,
    l: &S,
    aux: &AuxiliaryPair<S>,
    p: &S,
    q: &S,
) -> Result<ExponentSet<S>, CertificateError> {
    let nn = int::<S>(n as i64);
    let one = int::<S>(1);
    let two = int::<S>(2);
    let half_n = S::from_ratio(n as i64, 2);
    let base = one.clone() - half_n.clone();
    let (p, q) = (p.clone(), q.clone());
    let (theta, mu) = (aux.theta.clone(), aux.mu.clone());

    let np_half = nn.clone() * p.clone() / two.clone();
    let a1 = div(
        np_half.clone()
            * (one.clone()
                - div(
                    one.clone(),
                    (p.clone() + two.clone() * alpha.clone() - two.clone()) * theta.clone(),
                    "a1",
                )?),
        base.clone() + np_half.clone(),
        "a1",
    )?;
    let q_den = base.clone() + q.clone();
    let a2 = div(
        nn.clone()
            * q.clone()
            * (div(one.clone(), nn.clone(), "a2")? - div(one.clone(), two.clone() * aux.theta_conj()?, "a2")?),
        q_den.clone(),
        "a2",
    )?;
    let np_2l = div(nn.clone() * p.clone(), two.clone() * l.clone(), "a3")?;
    let a3 = div(
        np_2l.clone() * (one.clone() - div(one.clone(), two.clone() * mu, "a3")?),
        base.clone() + np_2l,
        "a3",
    )?;
    let a4 = div(
        nn.clone()
            * q.clone()
            * (div(one.clone(), nn.clone(), "a4")?
                - div(
                    one.clone(),
                    two.clone() * (q.clone() - one.clone()) * aux.mu_conj()?,
                    "a4",
                )?),
        q_den.clone(),
        "a4",
    )?;
    let kappa1 = div(
        np_half.clone() * (one.clone() - div(one.clone(), p.clone(), "kappa1")?),
        base + np_half,
        "kappa1",
    )?;
    let kappa2 = div(q.clone() - half_n, q_den, "kappa2")?;

    let beta1 = div(
        p.clone() - two.clone() + two.clone() * alpha.clone(),
        p.clone(),
        "beta1",
    )? * a1.clone();
    let gamma1 = div(a2.clone(), q.clone(), "gamma1")?;
    let beta2 = div(two * l.clone(), p, "beta2")? * a3.clone();
    let gamma2 = div(q.clone() - one, q, "gamma2")? * a4.clone();
    Ok(ExponentSet {
        a1,
        a2,
        a3,
        a4,
        kappa1,
        kappa2,
        beta1,
        gamma1,
        beta2,
        gamma2,
    })
}

fn in_unit_interval<S: Scalar>(v: &S) -> bool {
    int::<S>(0).lt_strict(v) && v.lt_strict(&int(1))
}

/// Evaluates the exponents and requires each of `a₁..a₄, κ₁, κ₂` and both
/// sums to lie strictly inside `(0, 1)`.
pub fn exponent_set<S: Scalar>(
    n: u32,
    alpha: &S,
    l: &S,
    aux: &AuxiliaryPair<S>,
    p: &S,
    q: &S,
) -> Result<ExponentSet<S>, CertificateError> {
    let set = compute_exponents(n, alpha, l, aux, p, q)?;
    for (name, value) in set.named().iter().take(6) {
        if !in_unit_interval(*value) {
            return Err(CertificateError::InvalidCertificate(format!(
                "{name} = {value} is not in (0,1)"
            )));
        }
    }
    for (name, value) in [("beta1+gamma1", set.first_sum()), ("beta2+gamma2", set.second_sum())] {
        if !in_unit_interval(&value) {
            return Err(CertificateError::InvalidCertificate(format!(
                "{name} = {value} is not in (0,1)"
            )));
        }
    }
    Ok(set)
}

/// Closed form of `β₁ + γ₁ − 1`.
pub fn first_sum_minus_one<S: Scalar>(n: u32, alpha: &S, theta: &S, p: &S, q: &S) -> Result<S, CertificateError> {
    let nn = int::<S>(n as i64);
    let one = int::<S>(1);
    let two = int::<S>(2);
    let (a, th, p, q) = (alpha.clone(), theta.clone(), p.clone(), q.clone());
    let num = nn.clone()
        * nn.clone()
        * (two.clone() * (a.clone() - one.clone()) * th.clone() + p.clone() * (th.clone() - one.clone()))
        + two.clone()
            * nn.clone()
            * (q.clone() * (-(two.clone() * a.clone() * th.clone()) + th.clone() + one.clone())
                - th.clone() * (two.clone() * a + p.clone() - two.clone()))
        + int::<S>(4) * q.clone() * th.clone();
    let den = th * (nn.clone() * (p - one.clone()) + two.clone()) * (nn - two * (q + one));
    div(num, den, "first sum identity")
}

/// Closed form of `β₂ + γ₂ − 1`.
pub fn second_sum_minus_one<S: Scalar>(n: u32, l: &S, mu: &S, p: &S, q: &S) -> Result<S, CertificateError> {
    let nn = int::<S>(n as i64);
    let one = int::<S>(1);
    let two = int::<S>(2);
    let (l, mu, p, q) = (l.clone(), mu.clone(), p.clone(), q.clone());
    let num = nn.clone() * p.clone() * (nn.clone() - int::<S>(4) * mu.clone())
        - two.clone()
            * l.clone()
            * (mu.clone() * (nn.clone() * nn.clone() - two.clone() * nn.clone() * (q.clone() + two.clone()) + int(4))
                + nn.clone() * q.clone());
    let den = mu * (nn.clone() - two.clone() * (q + one)) * (l * int::<S>(n as i64 - 2) - nn * p);
    div(num, den, "second sum identity")
}

/// Runs the full search: `(θ, μ)`, then `(p, q)`, then the exponents.
pub fn certify<S: Scalar>(n: u32, alpha: &S, l: &S, budget: usize) -> Result<Certificate<S>, CertificateError> {
    let aux = find_theta_mu(n, alpha, l, budget)?;
    let (p, q) = choose_pq(n, alpha, l, &aux)?;
    let exponents = exponent_set(n, alpha, l, &aux, &p, &q)?;
    Ok(Certificate {
        n,
        alpha: alpha.clone(),
        l: l.clone(),
        aux,
        p,
        q,
        exponents,
    })
}

/// One named check of a [`VerificationReport`].
#[derive(Debug, Clone, PartialEq)]
pub struct CheckEntry {
    /// Stable machine-readable identifier.
    pub key: &'static str,
    /// The inequality or identity in readable form.
    pub label: &'static str,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct VerificationReport {
    pub checks: Vec<CheckEntry>,
}

impl VerificationReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckEntry> {
        self.checks.iter().filter(|c| !c.passed)
    }

    pub fn get(&self, key: &str) -> Option<&CheckEntry> {
        self.checks.iter().find(|c| c.key == key)
    }

    fn push(&mut self, key: &'static str, label: &'static str, passed: bool, detail: String) {
        self.checks.push(CheckEntry {
            key,
            label,
            passed,
            detail,
        });
    }

    fn push_result(&mut self, key: &'static str, label: &'static str, value: Result<(bool, String), CertificateError>) {
        match value {
            Ok((passed, detail)) => self.push(key, label, passed, detail),
            Err(e) => self.push(key, label, false, e.to_string()),
        }
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            writeln!(
                f,
                "[{}] {}  ({})",
                if c.passed { "pass" } else { "FAIL" },
                c.label,
                c.detail
            )?;
        }
        Ok(())
    }
}

fn strictly_greater<S: Scalar>(lhs: &S, rhs: &S) -> (bool, String) {
    (lhs.gt_strict(rhs), format!("{} vs {}", lhs.as_f64(), rhs.as_f64()))
}

/// Re-derives every constraint of the certificate from `(n, α, l, θ, μ, p,
/// q)` and records one entry per check. Never fails: problems become
/// failed entries.
pub fn verify_certificate<S: Scalar>(cert: &Certificate<S>) -> VerificationReport {
    let mut report = VerificationReport::default();
    let Certificate {
        n,
        alpha,
        l,
        aux,
        p,
        q,
        exponents,
    } = cert;
    let n = *n;
    let one = int::<S>(1);

    if n < 2 {
        report.push("dimension", "n >= 2", false, format!("n = {n}"));
        return report;
    }

    report.push(
        "theta_gt_1",
        "theta > 1",
        aux.theta.gt_strict(&one),
        format!("theta = {}", aux.theta.as_f64()),
    );
    match theta_upper::<S>(n) {
        Some(upper) => {
            let (ok, detail) = strictly_greater(&upper, &aux.theta);
            report.push("theta_lt_upper", "theta < n/(n-2)", ok, detail);
        }
        None => report.push("theta_lt_upper", "theta < n/(n-2)", true, "unbounded for n = 2".into()),
    }
    let (ok, detail) = strictly_greater(&aux.mu, &S::from_ratio(n as i64, 2));
    report.push("mu_gt_half_n", "mu > n/2", ok, detail);
    let (ok, detail) = strictly_greater(&theta_numerator(n, alpha, &aux.theta), &int(0));
    report.push(
        "theta_numerator_pos",
        "n(theta+1-2 alpha theta)+2 theta > 0",
        ok,
        detail,
    );

    let ranges_ok = check_aux_ranges(n, aux).is_ok();
    report.push_result(
        "h_negative",
        "h(theta,mu) < 0",
        h_value(n, alpha, l, aux).map(|h| (h.lt_strict(&int(0)), format!("h = {}", h.as_f64()))),
    );

    const Q_LABELS: [(&str, &str); 4] = [
        ("q_gt_theta_bound", "q > (n-2) theta'/n"),
        ("q_gt_mu_bound", "q > n/(2mu')+1"),
        (
            "q_gt_alpha_bound",
            "q > 2n theta(alpha-1)(2-n)/(2n(theta+1-2 alpha theta)+4 theta)",
        ),
        ("q_gt_threshold", "q > q_r"),
    ];
    const P_LABELS: [(&str, &str); 3] = [
        ("p_gt_theta_bound", "p > 2+1/theta"),
        ("p_gt_mu_bound", "p > 2(n-2) l mu/n"),
        ("p_gt_alpha_bound", "p > 2 theta(alpha-1)(n-2)/(n-theta(n-2))"),
    ];
    let q_bounds = if ranges_ok {
        q_lower_bounds(n, alpha, l, aux).map(Some)
    } else {
        Ok(None)
    };
    match q_bounds {
        Ok(Some(bounds)) => {
            for ((key, label), bound) in Q_LABELS.iter().zip(bounds.iter()) {
                let (ok, detail) = strictly_greater(q, bound);
                report.push(key, label, ok, detail);
            }
        }
        Ok(None) => Q_LABELS
            .iter()
            .for_each(|(key, label)| report.push(key, label, false, "theta/mu out of range".into())),
        Err(e) => Q_LABELS
            .iter()
            .for_each(|(key, label)| report.push(key, label, false, e.to_string())),
    }
    let p_bounds = if ranges_ok {
        p_lower_bounds(n, alpha, l, aux).map(Some)
    } else {
        Ok(None)
    };
    match p_bounds {
        Ok(Some(bounds)) => {
            for ((key, label), bound) in P_LABELS.iter().zip(bounds.iter()) {
                let (ok, detail) = strictly_greater(p, bound);
                report.push(key, label, ok, detail);
            }
        }
        Ok(None) => P_LABELS
            .iter()
            .for_each(|(key, label)| report.push(key, label, false, "theta/mu out of range".into())),
        Err(e) => P_LABELS
            .iter()
            .for_each(|(key, label)| report.push(key, label, false, e.to_string())),
    }

    match coeffs_abcd(n, alpha, l, aux) {
        Ok(coeffs) => {
            let (f1, f2) = p_interval(&coeffs, q);
            let (ok, detail) = strictly_greater(p, &f1);
            report.push("p_gt_f1", "f1(q) < p", ok, detail);
            let (ok, detail) = strictly_greater(&f2, p);
            report.push("p_lt_f2", "p < f2(q)", ok, detail);
        }
        Err(e) => {
            report.push("p_gt_f1", "f1(q) < p", false, e.to_string());
            report.push("p_lt_f2", "p < f2(q)", false, e.to_string());
        }
    }

    const EXPONENT_LABELS: [(&str, &str); 6] = [
        ("a1_unit", "a1 in (0,1)"),
        ("a2_unit", "a2 in (0,1)"),
        ("a3_unit", "a3 in (0,1)"),
        ("a4_unit", "a4 in (0,1)"),
        ("kappa1_unit", "kappa1 in (0,1)"),
        ("kappa2_unit", "kappa2 in (0,1)"),
    ];
    match compute_exponents(n, alpha, l, aux, p, q) {
        Ok(fresh) => {
            for ((key, label), (_, value)) in EXPONENT_LABELS.iter().zip(fresh.named().iter()) {
                report.push(key, label, in_unit_interval(*value), format!("{}", value.as_f64()));
            }
            let s1 = fresh.first_sum();
            let s2 = fresh.second_sum();
            report.push(
                "first_sum_unit",
                "beta1+gamma1 in (0,1)",
                in_unit_interval(&s1),
                format!("{}", s1.as_f64()),
            );
            report.push(
                "second_sum_unit",
                "beta2+gamma2 in (0,1)",
                in_unit_interval(&s2),
                format!("{}", s2.as_f64()),
            );

            report.push_result(
                "first_sum_identity",
                "beta1+gamma1-1 matches its closed form",
                first_sum_minus_one(n, alpha, &aux.theta, p, q).map(|closed| {
                    // Compared as sums: the difference itself cancels in f64.
                    let direct = s1.clone() - one.clone();
                    let agree = s1.same(&(closed.clone() + one.clone()));
                    (agree, format!("{} vs {}", direct.as_f64(), closed.as_f64()))
                }),
            );
            report.push_result(
                "second_sum_identity",
                "beta2+gamma2-1 matches its closed form",
                second_sum_minus_one(n, l, &aux.mu, p, q).map(|closed| {
                    let direct = s2.clone() - one.clone();
                    let agree = s2.same(&(closed.clone() + one.clone()));
                    (agree, format!("{} vs {}", direct.as_f64(), closed.as_f64()))
                }),
            );

            let mismatched: Vec<&str> = fresh
                .named()
                .iter()
                .zip(exponents.named().iter())
                .filter(|((_, a), (_, b))| !a.same(b))
                .map(|((name, _), _)| *name)
                .collect();
            report.push(
                "exponents_consistent",
                "stored exponents match recomputation",
                mismatched.is_empty(),
                if mismatched.is_empty() {
                    "all ten agree".into()
                } else {
                    format!("differs: {}", mismatched.join(", "))
                },
            );
        }
        Err(e) => {
            for (key, label) in EXPONENT_LABELS {
                report.push(key, label, false, e.to_string());
            }
            for (key, label) in [
                ("first_sum_unit", "beta1+gamma1 in (0,1)"),
                ("second_sum_unit", "beta2+gamma2 in (0,1)"),
                ("first_sum_identity", "beta1+gamma1-1 matches its closed form"),
                ("second_sum_identity", "beta2+gamma2-1 matches its closed form"),
                ("exponents_consistent", "stored exponents match recomputation"),
            ] {
                report.push(key, label, false, e.to_string());
            }
        }
    }
    report
}

/// Keys of the certificate document in the order they are written.
const PARAM_KEYS: [&str; 7] = ["n", "alpha", "l", "theta", "mu", "p", "q"];
const EXPONENT_KEYS: [&str; 10] = [
    "a1", "a2", "a3", "a4", "kappa1", "kappa2", "beta1", "gamma1", "beta2", "gamma2",
];

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DocumentError {
    #[error("line {line}: expected `key = value`")]
    Syntax { line: usize },
    #[error("line {line}: unknown key `{key}`")]
    UnknownKey { line: usize, key: String },
    #[error("line {line}: duplicate key `{key}`")]
    DuplicateKey { line: usize, key: String },
    #[error("missing key `{0}`")]
    MissingKey(&'static str),
    #[error("key `{key}`: {source}")]
    Number {
        key: String,
        #[source]
        source: ParseRationalError,
    },
    #[error("key `n`: expected an integer >= 2, got `{0}`")]
    Dimension(String),
}

impl Certificate<Rational> {
    /// Writes the flat `key = value` document, exponents included and the
    /// given report appended as `check.<key> = pass|fail` lines.
    pub fn to_document(&self, report: &VerificationReport) -> String {
        let mut out = String::new();
        out.push_str("# exponent certificate (exact values; decimals in comments)\n");
        let _ = writeln!(out, "n = {}", self.n);
        let params = [
            ("alpha", &self.alpha),
            ("l", &self.l),
            ("theta", &self.aux.theta),
            ("mu", &self.aux.mu),
            ("p", &self.p),
            ("q", &self.q),
        ];
        for (key, value) in params.into_iter().chain(self.exponents.named()) {
            let _ = writeln!(out, "{key} = {}  # {}", format_rational(value), Scalar::as_f64(value));
        }
        for c in &report.checks {
            let _ = writeln!(
                out,
                "check.{} = {}  # {}",
                c.key,
                if c.passed { "pass" } else { "fail" },
                c.label
            );
        }
        out
    }

    /// Parses a document produced by [`Certificate::to_document`] (possibly
    /// hand-edited). `check.*` lines are ignored; missing exponents are
    /// recomputed from `(θ, μ, p, q)`.
    pub fn from_document(text: &str) -> Result<Self, DocumentError> {
        let mut values: BTreeMap<&str, (usize, &str)> = BTreeMap::new();
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = match raw.find('#') {
                Some(pos) => &raw[..pos],
                None => raw,
            }
            .trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or(DocumentError::Syntax { line: line_no })?;
            let (key, value) = (key.trim(), value.trim());
            if key.starts_with("check.") {
                continue;
            }
            if !PARAM_KEYS.contains(&key) && !EXPONENT_KEYS.contains(&key) {
                return Err(DocumentError::UnknownKey {
                    line: line_no,
                    key: key.to_owned(),
                });
            }
            if values.insert(key, (line_no, value)).is_some() {
                return Err(DocumentError::DuplicateKey {
                    line: line_no,
                    key: key.to_owned(),
                });
            }
        }

        let raw_n = values.get("n").ok_or(DocumentError::MissingKey("n"))?.1;
        let n: u32 = raw_n
            .parse()
            .ok()
            .filter(|&n| (2..=1_000_000).contains(&n))
            .ok_or_else(|| DocumentError::Dimension(raw_n.to_owned()))?;
        let number = |key: &'static str| -> Result<Option<Rational>, DocumentError> {
            values
                .get(key)
                .map(|(_, v)| {
                    parse_rational(v).map_err(|source| DocumentError::Number {
                        key: key.to_owned(),
                        source,
                    })
                })
                .transpose()
        };
        let required = |key: &'static str| number(key)?.ok_or(DocumentError::MissingKey(key));

        let alpha = required("alpha")?;
        let l = required("l")?;
        let aux = AuxiliaryPair {
            theta: required("theta")?,
            mu: required("mu")?,
        };
        let p = required("p")?;
        let q = required("q")?;

        let mut stored: Vec<Option<Rational>> = Vec::with_capacity(EXPONENT_KEYS.len());
        for key in EXPONENT_KEYS {
            stored.push(number(key)?);
        }
        let exponents = if stored.iter().all(Option::is_some) {
            let mut it = stored.into_iter().flatten();
            let mut next = || it.next().expect("ten exponents");
            ExponentSet {
                a1: next(),
                a2: next(),
                a3: next(),
                a4: next(),
                kappa1: next(),
                kappa2: next(),
                beta1: next(),
                gamma1: next(),
                beta2: next(),
                gamma2: next(),
            }
        } else {
            // Degenerate inputs leave the exponents undefined; fall back to
            // zeros so verification reports the failure.
            compute_exponents(n, &alpha, &l, &aux, &p, &q).unwrap_or_else(|_| zero_exponents())
        };
        Ok(Certificate {
            n,
            alpha,
            l,
            aux,
            p,
            q,
            exponents,
        })
    }
}

fn zero_exponents() -> ExponentSet<Rational> {
    let z = || Rational::from_int(0);
    ExponentSet {
        a1: z(),
        a2: z(),
        a3: z(),
        a4: z(),
        kappa1: z(),
        kappa2: z(),
        beta1: z(),
        gamma1: z(),
        beta2: z(),
        gamma2: z(),
    }
}

impl<S: Scalar> Certificate<S> {
    pub fn to_f64(&self) -> Certificate<f64> {
        let e = &self.exponents;
        Certificate {
            n: self.n,
            alpha: self.alpha.as_f64(),
            l: self.l.as_f64(),
            aux: AuxiliaryPair {
                theta: self.aux.theta.as_f64(),
                mu: self.aux.mu.as_f64(),
            },
            p: self.p.as_f64(),
            q: self.q.as_f64(),
            exponents: ExponentSet {
                a1: e.a1.as_f64(),
                a2: e.a2.as_f64(),
                a3: e.a3.as_f64(),
                a4: e.a4.as_f64(),
                kappa1: e.kappa1.as_f64(),
                kappa2: e.kappa2.as_f64(),
                beta1: e.beta1.as_f64(),
                gamma1: e.gamma1.as_f64(),
                beta2: e.beta2.as_f64(),
                gamma2: e.gamma2.as_f64(),
            },
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::ratio;

    fn worked_aux() -> AuxiliaryPair<Rational> {
        AuxiliaryPair {
            theta: ratio(101, 100),
            mu: ratio(10, 1),
        }
    }

    fn worked_certificate() -> Certificate<Rational> {
        let (alpha, l, aux) = (ratio(1, 1), ratio(1, 2), worked_aux());
        let (p, q) = (ratio(3, 1), ratio(4, 1));
        let exponents = compute_exponents(2, &alpha, &l, &aux, &p, &q).unwrap();
        Certificate {
            n: 2,
            alpha,
            l,
            aux,
            p,
            q,
            exponents,
        }
    }

    #[test]
    fn h_on_worked_pair() {
        let h = h_value(2, &ratio(1, 1), &ratio(1, 2), &worked_aux()).unwrap();
        assert_eq!(h, ratio(-1, 4));
        assert_eq!(h_limit(2, &ratio(1, 1), &ratio(1, 2)), ratio(-1, 4));
    }

    #[test]
    fn h_negative_for_three_dimensional_example() {
        // Oracle: both fractions expanded by hand in exact arithmetic.
        let (alpha, l) = (ratio(2, 3), ratio(1, 10));
        let aux = AuxiliaryPair {
            theta: ratio(21, 20),
            mu: ratio(100, 1),
        };
        // l(2μ−1)/(4μ−n) = (1/10)(199)/(397)
        let first = ratio(199, 3970);
        // n(θ+1−2αθ)+2θ = 3(21/20 + 1 − 28/20) + 42/20 = 3·13/20 + 42/20 = 81/20
        // 2nθ+n²−n²θ = 126/20 + 9 − 189/20 = 117/20
        let second = ratio(81, 117);
        let h = h_value(3, &alpha, &l, &aux).unwrap();
        assert_eq!(h, first - second);
        assert!(h < ratio(0, 1));
    }

    #[test]
    fn h_rejects_out_of_range_pairs() {
        let (alpha, l) = (ratio(1, 1), ratio(1, 4));
        for aux in [
            AuxiliaryPair {
                theta: ratio(1, 1),
                mu: ratio(10, 1),
            },
            AuxiliaryPair {
                theta: ratio(3, 1),
                mu: ratio(10, 1),
            },
            AuxiliaryPair {
                theta: ratio(11, 10),
                mu: ratio(3, 2),
            },
        ] {
            assert!(matches!(
                h_value(3, &alpha, &l, &aux),
                Err(CertificateError::ConstraintViolation(_))
            ));
        }
    }

    #[test]
    fn coefficients_on_worked_pair() {
        let c = coeffs_abcd(2, &ratio(1, 1), &ratio(1, 2), &worked_aux()).unwrap();
        assert_eq!(c.a, ratio(1, 2));
        assert_eq!(c.b, ratio(0, 1));
        assert_eq!(c.c, ratio(1, 1));
        assert_eq!(c.d, ratio(0, 1));
        assert_eq!(p_interval(&c, &ratio(4, 1)), (ratio(2, 1), ratio(4, 1)));
        assert_eq!(p_interval(&c, &ratio(0, 1)), (-c.b.clone(), -c.d.clone()));
        assert_eq!(q_threshold(&c).unwrap(), ratio(1, 1));
    }

    #[test]
    fn coefficients_in_three_dimensions() {
        let (alpha, l) = (ratio(1, 1), ratio(1, 4));
        let aux = AuxiliaryPair {
            theta: ratio(21, 20),
            mu: ratio(50, 1),
        };
        let c = coeffs_abcd(3, &alpha, &l, &aux).unwrap();
        for v in [&c.a, &c.b, &c.c] {
            assert!(*v > ratio(0, 1), "{v}");
        }
        // D carries the factor (1 − α).
        assert_eq!(c.d, ratio(0, 1));
        let h = h_value(3, &alpha, &l, &aux).unwrap();
        assert_eq!(c.a.clone() - c.c.clone(), ratio(2, 1) * h);
        assert!(c.a < c.c);
        let c = coeffs_abcd(3, &ratio(9, 10), &l, &aux).unwrap();
        assert!(c.d > ratio(0, 1));
    }

    #[test]
    fn threshold_from_root_of_k() {
        let c = CoefficientSet {
            a: ratio(1, 2),
            b: ratio(-1, 1),
            c: ratio(1, 1),
            d: ratio(0, 1),
        };
        let qr = q_threshold(&c).unwrap();
        assert_eq!(qr, ratio(2, 1));
        // k(q) = A − C − (B − D)/q changes sign at q_r.
        let k = |q: Rational| c.a.clone() - c.c.clone() - (c.b.clone() - c.d.clone()) / q;
        assert!(k(ratio(19, 10)) > ratio(0, 1));
        assert!(k(ratio(21, 10)) < ratio(0, 1));
        let flat = CoefficientSet {
            a: ratio(1, 1),
            b: ratio(0, 1),
            c: ratio(1, 1),
            d: ratio(0, 1),
        };
        assert!(matches!(q_threshold(&flat), Err(CertificateError::NoThreshold(_))));
    }

    #[test]
    fn worked_bounds() {
        let (alpha, l, aux) = (ratio(1, 1), ratio(1, 2), worked_aux());
        let qb = q_lower_bounds(2, &alpha, &l, &aux).unwrap();
        assert_eq!(qb, [ratio(0, 1), ratio(19, 10), ratio(0, 1), ratio(1, 1)]);
        let pb = p_lower_bounds(2, &alpha, &l, &aux).unwrap();
        assert_eq!(pb, [ratio(302, 101), ratio(0, 1), ratio(0, 1)]);
    }

    #[test]
    fn worked_exponents() {
        let cert = worked_certificate();
        let e = &cert.exponents;
        // a1 = 1 − 1/3.03 = 203/303, a2 = 1 − 2/202 = 100/101
        assert_eq!(e.a1, ratio(203, 303));
        assert_eq!(e.a2, ratio(100, 101));
        assert_eq!(e.a3, ratio(19, 20));
        assert_eq!(e.a4, ratio(7, 10));
        assert_eq!(e.kappa1, ratio(2, 3));
        assert_eq!(e.kappa2, ratio(3, 4));
        assert!((Scalar::as_f64(&e.first_sum()) - 0.917_491_749).abs() < 1e-8);
        assert!((Scalar::as_f64(&e.second_sum()) - 0.841_666_667).abs() < 1e-8);
    }

    #[test]
    fn degenerate_kappas_vanish() {
        let (alpha, l, aux) = (ratio(1, 1), ratio(1, 2), worked_aux());
        let e = compute_exponents(2, &alpha, &l, &aux, &ratio(1, 1), &ratio(4, 1)).unwrap();
        assert_eq!(e.kappa1, ratio(0, 1));
        let e = compute_exponents(3, &alpha, &ratio(1, 4), &aux, &ratio(3, 1), &ratio(3, 2)).unwrap();
        assert_eq!(e.kappa2, ratio(0, 1));
    }

    #[test]
    fn worked_certificate_verifies() {
        let report = verify_certificate(&worked_certificate());
        assert!(report.all_passed(), "{report}");
        assert!(report.checks.len() >= 15);
    }

    #[test]
    fn verification_flags_bad_p_and_q() {
        let mut cert = worked_certificate();
        cert.p = ratio(5, 1);
        let report = verify_certificate(&cert);
        let entry = report.get("p_lt_f2").unwrap();
        assert!(!entry.passed);
        assert_eq!(entry.label, "p < f2(q)");

        let mut cert = worked_certificate();
        cert.q = ratio(1, 1);
        let report = verify_certificate(&cert);
        let entry = report.get("q_gt_mu_bound").unwrap();
        assert!(!entry.passed);
        assert_eq!(entry.label, "q > n/(2mu')+1");
    }

    #[test]
    fn verification_is_total_on_nonsense() {
        let mut cert = worked_certificate();
        cert.aux.theta = ratio(1, 1);
        cert.aux.mu = ratio(1, 2);
        let report = verify_certificate(&cert);
        assert!(!report.all_passed());
        assert!(report.checks.len() >= 15);
    }

    #[test]
    fn search_examples() {
        let aux = find_theta_mu(2, &ratio(1, 1), &ratio(1, 2), DEFAULT_SEARCH_BUDGET).unwrap();
        assert!(h_value(2, &ratio(1, 1), &ratio(1, 2), &aux).unwrap() < ratio(0, 1));

        let aux = find_theta_mu(3, &ratio(1, 1), &ratio(1, 4), DEFAULT_SEARCH_BUDGET).unwrap();
        assert!(h_value(3, &ratio(1, 1), &ratio(1, 4), &aux).unwrap() < ratio(0, 1));

        assert_eq!(
            find_theta_mu(2, &ratio(13, 10), &ratio(1, 2), 8),
            Err(CertificateError::SearchFailure { budget: 8 })
        );
    }

    #[test]
    fn worked_pq_choice_is_feasible() {
        let (alpha, l) = (ratio(1, 1), ratio(1, 2));
        let (p, q) = choose_pq(2, &alpha, &l, &worked_aux()).unwrap();
        let exponents = exponent_set(2, &alpha, &l, &worked_aux(), &p, &q).unwrap();
        let cert = Certificate {
            n: 2,
            alpha,
            l,
            aux: worked_aux(),
            p,
            q,
            exponents,
        };
        assert!(verify_certificate(&cert).all_passed());
    }

    #[test]
    fn float_mode_agrees_with_exact() {
        let exact = certify(3, &ratio(1, 1), &ratio(1, 4), DEFAULT_SEARCH_BUDGET).unwrap();
        let float = certify(3, &1.0f64, &0.25f64, DEFAULT_SEARCH_BUDGET).unwrap();
        assert!(verify_certificate(&float).all_passed());
        assert!((Scalar::as_f64(&exact.p) - float.p).abs() < 1e-9 * float.p);
        assert!((Scalar::as_f64(&exact.q) - float.q).abs() < 1e-9 * float.q);
    }

    #[test]
    fn document_round_trip() {
        let cert = certify(3, &ratio(1, 1), &ratio(1, 4), DEFAULT_SEARCH_BUDGET).unwrap();
        let report = verify_certificate(&cert);
        let doc = cert.to_document(&report);
        assert!(doc.contains("check.p_lt_f2 = pass"));
        let back = Certificate::from_document(&doc).unwrap();
        assert_eq!(back, cert);
    }

    #[test]
    fn document_errors() {
        assert!(matches!(
            Certificate::from_document("n = 2\nbogus = 1"),
            Err(DocumentError::UnknownKey { .. })
        ));
        assert!(matches!(
            Certificate::from_document("n 2"),
            Err(DocumentError::Syntax { line: 1 })
        ));
        assert!(matches!(
            Certificate::from_document("n = 2\nn = 3"),
            Err(DocumentError::DuplicateKey { .. })
        ));
        assert!(matches!(
            Certificate::from_document("n = 2"),
            Err(DocumentError::MissingKey("alpha"))
        ));
        assert!(matches!(
            Certificate::from_document("n = 1"),
            Err(DocumentError::Dimension(_))
        ));
        assert!(matches!(
            Certificate::from_document("n = 2\nalpha = x"),
            Err(DocumentError::Number { .. })
        ));
    }

    #[test]
    fn hand_edited_document_fails_verification() {
        let cert = worked_certificate();
        let doc = cert.to_document(&verify_certificate(&cert));
        let edited: String = doc
            .lines()
            .map(|line| {
                if line.starts_with("p = ") {
                    "p = 5".to_string()
                } else {
                    line.to_string()
                }
            })
            .collect::<Vec<_>>()
            .join("\n");
        let parsed = Certificate::from_document(&edited).unwrap();
        let report = verify_certificate(&parsed);
        assert!(!report.get("p_lt_f2").unwrap().passed);
    }
}
