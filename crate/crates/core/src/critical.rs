//! Critical bases for the alphabet `{0, 1, m}`.
//!
//! `P_m = 1 + sqrt(m/(m-1))` and `R_m = 1 + m/(m-1)` bracket the two
//! critical bases `p_m <= r_m`. On four intervals of `m` the base `r_m` is
//! the root of an explicit equation `π_q(c) = m - 1` or
//! `π_q(m^∞ - c) = 1`; elsewhere [`r_of_m`] reports `Unsupported`.
//!
//! The sign-identity suite at the bottom re-checks the algebra behind these
//! formulas numerically: every identity is evaluated once through digit sums
//! and once through its polynomial form.

use std::fmt;

use thiserror::Error;

use crate::real::Real;
use crate::seq::{self, EPSeq, SeqError, M, ONE};

/// Interval endpoints are widened by this much when dispatching on `m`, so
/// that rounded printed endpoints still select their branch.
pub const BRANCH_SNAP: f64 = 1e-5;

/// Final bracket width for root bisection.
pub const ROOT_WIDTH: f64 = 1e-12;

/// Number of sample intervals used to confirm a residual is monotone.
pub const MONOTONE_SAMPLES: usize = 32;

/// Distance from a sign crossover inside which a sign check is skipped.
pub const CROSSOVER_TOL: f64 = 1e-6;

const MAX_BISECTIONS: usize = 400;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CriticalError {
    #[error("m = {0} is outside every supported interval")]
    Unsupported(f64),
    #[error("residual has no sign change on [{lo}, {hi}]")]
    NoSignChange { lo: f64, hi: f64 },
    #[error("residual is not decreasing near q = {at}")]
    NotMonotone { at: f64 },
    #[error(transparent)]
    Seq(#[from] SeqError),
}

fn as_f64<T: Real>(x: T) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

/// `P_m = 1 + sqrt(m/(m-1))`.
pub fn p_bound<T: Real>(m: T) -> T {
    T::one() + (m / (m - T::one())).sqrt()
}

/// `R_m = 1 + m/(m-1)`.
pub fn r_bound<T: Real>(m: T) -> T {
    T::one() + m / (m - T::one())
}

/// The equation a branch sequence `c` defines.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RootForm {
    /// `π_q(c) = m - 1`.
    Plain,
    /// `π_q(m^∞ - c) = 1`.
    Complement,
}

/// Signed residual of the branch equation; strictly decreasing in `q`.
pub fn residual<T: Real>(c: &EPSeq, form: RootForm, m: T, q: T) -> Result<T, SeqError> {
    match form {
        RootForm::Plain => Ok(seq::pi_ternary(c, m, q)? - (m - T::one())),
        RootForm::Complement => Ok(seq::pi_complement(c, m, q)? - T::one()),
    }
}

fn width<T: Real>(lo: T, hi: T) -> T {
    T::lit(ROOT_WIDTH).max(T::epsilon() * T::lit(8.0) * lo.abs().max(hi.abs()))
}

/// Root of `f` on `[lo, hi]` given `f(lo)` and `f(hi)` of opposite signs.
pub fn bisect_root<T: Real, F>(f: F, lo: T, hi: T) -> Result<T, CriticalError>
where
    F: Fn(T) -> T,
{
    let (mut lo, mut hi) = (lo, hi);
    let (flo, fhi) = (f(lo), f(hi));
    if flo == T::zero() {
        return Ok(lo);
    }
    if fhi == T::zero() {
        return Ok(hi);
    }
    if !(flo.signum() != fhi.signum()) || flo.is_nan() || fhi.is_nan() {
        return Err(CriticalError::NoSignChange {
            lo: as_f64(lo),
            hi: as_f64(hi),
        });
    }
    let lo_positive = flo > T::zero();
    let two = T::lit(2.0);
    for _ in 0..MAX_BISECTIONS {
        if hi - lo <= width(lo, hi) {
            break;
        }
        let mid = (lo + hi) / two;
        if mid <= lo || mid >= hi {
            break;
        }
        let fm = f(mid);
        if fm == T::zero() {
            return Ok(mid);
        }
        if (fm > T::zero()) == lo_positive {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok((lo + hi) / two)
}

/// Root of a decreasing `f` on `[lo, hi]`. Monotonicity is checked on
/// [`MONOTONE_SAMPLES`] equal subintervals first.
pub fn bisect_decreasing<T: Real, F>(f: F, lo: T, hi: T) -> Result<T, CriticalError>
where
    F: Fn(T) -> T,
{
    let n = T::from_usize(MONOTONE_SAMPLES).unwrap_or_else(T::one);
    let mut prev = f(lo);
    for i in 1..=MONOTONE_SAMPLES {
        let x = lo + (hi - lo) * T::from_usize(i).unwrap_or_else(T::one) / n;
        let fx = f(x);
        let slack = T::epsilon() * T::lit(64.0) * (T::one() + prev.abs());
        if fx > prev + slack {
            return Err(CriticalError::NotMonotone { at: as_f64(x) });
        }
        prev = fx;
    }
    if f(lo) < T::zero() || f(hi) > T::zero() {
        return Err(CriticalError::NoSignChange {
            lo: as_f64(lo),
            hi: as_f64(hi),
        });
    }
    bisect_root(f, lo, hi)
}

/// Base `q` in `bracket` at which the residual of `c` vanishes.
pub fn solve_pi_root<T: Real>(
    c: &EPSeq,
    form: RootForm,
    m: T,
    bracket: (T, T),
) -> Result<T, CriticalError> {
    let (lo, hi) = bracket;
    seq::check_base(lo)?;
    residual(c, form, m, lo)?;
    bisect_decreasing(
        |q| residual(c, form, m, q).unwrap_or(T::nan()),
        lo,
        hi,
    )
}

/// The four intervals of `m` on which `r_m` has an explicit equation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Branch {
    Comp0Full,
    Comp10Left,
    Comp10Mid,
    Comp10Right,
}

impl Branch {
    pub const ALL: [Branch; 4] = [
        Branch::Comp0Full,
        Branch::Comp10Left,
        Branch::Comp10Mid,
        Branch::Comp10Right,
    ];

    pub fn label(&self) -> &'static str {
        match self {
            Branch::Comp0Full => "Comp0_full",
            Branch::Comp10Left => "Comp10_left",
            Branch::Comp10Mid => "Comp10_mid",
            Branch::Comp10Right => "Comp10_right",
        }
    }

    /// Defining sequence: `m1^∞`, `(1m)^∞`, `mm1(m11m)^∞`, `m(m1)^∞`.
    pub fn sequence(&self) -> EPSeq {
        let (pre, per) = match self {
            Branch::Comp0Full => (vec![M], vec![ONE]),
            Branch::Comp10Left => (vec![], vec![ONE, M]),
            Branch::Comp10Mid => (vec![M, M, ONE], vec![M, ONE, ONE, M]),
            Branch::Comp10Right => (vec![M], vec![M, ONE]),
        };
        EPSeq::from_symbols(pre, per).expect("nonempty period")
    }

    pub fn form(&self) -> RootForm {
        match self {
            Branch::Comp10Left => RootForm::Complement,
            _ => RootForm::Plain,
        }
    }

    /// Right-hand side of the defining equation.
    pub fn target<T: Real>(&self, m: T) -> T {
        match self.form() {
            RootForm::Plain => m - T::one(),
            RootForm::Complement => T::one(),
        }
    }

    /// `[2, 1+α]`, `[m_d, m_1]`, `[m_2, m_3]` or `[m_4, M_d]`.
    pub fn interval<T: Real>(&self) -> (T, T) {
        let c = T::constants();
        match self {
            Branch::Comp0Full => (T::lit(2.0), T::one() + c.alpha),
            Branch::Comp10Left => (c.m_d, c.m_1),
            Branch::Comp10Mid => (c.m_2, c.m_3),
            Branch::Comp10Right => (c.m_4, c.big_m_d),
        }
    }

    fn contains<T: Real>(&self, m: T) -> bool {
        let (lo, hi) = self.interval::<T>();
        let snap = T::lit(BRANCH_SNAP);
        let lo = if *self == Branch::Comp0Full { lo } else { lo - snap };
        m >= lo && m <= hi + snap
    }
}

impl fmt::Display for Branch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// Branch whose interval contains `m`, allowing [`BRANCH_SNAP`] slack.
pub fn branch_of<T: Real>(m: T) -> Option<Branch> {
    Branch::ALL.into_iter().find(|b| b.contains(m))
}

/// `(2m - 1 + sqrt(4m - 3)) / (2m - 2)`: root of `π_q(m1^∞) = m - 1`.
pub fn r_first_component<T: Real>(m: T) -> T {
    let two = T::lit(2.0);
    (two * m - T::one() + (T::lit(4.0) * m - T::lit(3.0)).sqrt()) / (two * m - two)
}

/// `(m - 1 + sqrt((m-1)^2 + 4)) / 2`: root of `π_q(m^∞ - (1m)^∞) = 1`.
pub fn r_alternating<T: Real>(m: T) -> T {
    let k = m - T::one();
    (k + (k * k + T::lit(4.0)).sqrt()) / T::lit(2.0)
}

/// Positive root of `(m-1) q^2 - m q - m = 0`, where `π_q((m1)^∞) = m - 1`.
pub fn p_prime<T: Real>(m: T) -> T {
    let a = m - T::one();
    (m + (m * m + T::lit(4.0) * a * m).sqrt()) / (T::lit(2.0) * a)
}

/// Root of the branch equation for `m`, whether or not `m` lies in the
/// branch interval.
pub fn branch_root<T: Real>(branch: Branch, m: T) -> Result<T, CriticalError> {
    match branch {
        Branch::Comp0Full => Ok(r_first_component(m)),
        Branch::Comp10Left => Ok(r_alternating(m)),
        _ => solve_pi_root(
            &branch.sequence(),
            branch.form(),
            m,
            (T::lit(2.0), r_bound(m)),
        ),
    }
}

/// The critical base `r_m` separating countable from uncountable `V'_{m,q}`.
pub fn r_of_m<T: Real>(m: T) -> Result<T, CriticalError> {
    match branch_of(m) {
        Some(b) => branch_root(b, m),
        None => Err(CriticalError::Unsupported(as_f64(m))),
    }
}

/// The critical base `p_m` separating finite from infinite `V'_{m,q}`.
pub fn p_of_m<T: Real>(m: T) -> Result<T, CriticalError> {
    let c = T::constants();
    let snap = T::lit(BRANCH_SNAP);
    if m >= T::lit(2.0) && m <= T::one() + c.alpha + snap {
        Ok(m)
    } else if m >= c.m_d - snap && m <= c.big_m_d + snap {
        Ok(m.sqrt().max(p_prime(m)))
    } else {
        Err(CriticalError::Unsupported(as_f64(m)))
    }
}

/// How a constant is obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Provenance {
    ClosedForm,
    Root,
    /// A published decimal with no defining equation.
    PublishedApproximate,
    DisplayOnly,
}

impl Provenance {
    pub fn tag(&self) -> &'static str {
        match self {
            Provenance::ClosedForm => "closed-form",
            Provenance::Root => "root",
            Provenance::PublishedApproximate => "published-approximate",
            Provenance::DisplayOnly => "display-only",
        }
    }
}

/// Interval endpoints and related constants.
///
/// `1 < alpha < phi < 2` and `2 < m_d < m_1 < m_2 < m_3 < m_4 < big_m_d`.
#[derive(Debug, Clone, PartialEq)]
pub struct Constants<T> {
    /// Real root of `x^3 - x - 1`.
    pub alpha: T,
    pub phi: T,
    /// `π_{P_m}((m1)^∞) = m - 1`.
    pub m_d: T,
    /// `π_{P_m}(m^∞ - (m1)^∞) = 1`.
    pub big_m_d: T,
    /// `1 + q_1 - 1/q_1`.
    pub m_1: T,
    /// Root in `(2, 3)` of `q^2 (q-1)(q^2-q-3) = 1`.
    pub q_1: T,
    pub m_2: T,
    /// Intersection of `π_q(mm1(m11m)^∞) = m - 1` with `π_q(m^∞ - (1mm1)^∞) = 1`.
    pub m_3: T,
    /// `(3 + sqrt 13) / 2`.
    pub m_4: T,
    /// `(1 + sqrt 13) / 2`.
    pub q_4: T,
    /// Komornik-Loreti constant, rounded.
    pub kl_q_prime: T,
}

/// The two published roundings of `m_3`.
pub const M3_PRINTED: [&str; 2] = ["3.10204", "3.10214"];

impl<T: Real> Constants<T> {
    /// Computes in `f64` and rounds to `T`.
    pub fn compute() -> Self {
        let c = compute_f64();
        let t = T::lit;
        Constants {
            alpha: t(c.alpha),
            phi: t(c.phi),
            m_d: t(c.m_d),
            big_m_d: t(c.big_m_d),
            m_1: t(c.m_1),
            q_1: t(c.q_1),
            m_2: t(c.m_2),
            m_3: t(c.m_3),
            m_4: t(c.m_4),
            q_4: t(c.q_4),
            kl_q_prime: t(c.kl_q_prime),
        }
    }

    /// Name, value and provenance of every constant, in interval order.
    pub fn entries(&self) -> Vec<(&'static str, T, Provenance)> {
        use Provenance::*;
        vec![
            ("alpha", self.alpha, Root),
            ("phi", self.phi, ClosedForm),
            ("m_d", self.m_d, Root),
            ("m_1", self.m_1, Root),
            ("q_1", self.q_1, Root),
            ("m_2", self.m_2, PublishedApproximate),
            ("m_3", self.m_3, Root),
            ("m_4", self.m_4, ClosedForm),
            ("q_4", self.q_4, ClosedForm),
            ("M_d", self.big_m_d, Root),
            ("kl_q_prime", self.kl_q_prime, DisplayOnly),
        ]
    }

    /// Which published rounding of `m_3` the computed value agrees with.
    pub fn m3_matches(&self) -> &'static str {
        let m3 = as_f64(self.m_3);
        let dist = |s: &str| (s.parse::<f64>().unwrap_or(f64::NAN) - m3).abs();
        if dist(M3_PRINTED[0]) <= dist(M3_PRINTED[1]) {
            M3_PRINTED[0]
        } else {
            M3_PRINTED[1]
        }
    }
}

fn compute_f64() -> Constants<f64> {
    let root = |f: &dyn Fn(f64) -> f64, lo: f64, hi: f64| {
        bisect_root(f, lo, hi).expect("constant bracket has a sign change")
    };
    let alpha = root(&|x| x * x * x - x - 1.0, 1.0, 2.0);
    let q_1 = root(&|q| q * q * (q - 1.0) * (q * q - q - 3.0) - 1.0, 2.0, 3.0);
    let alternating = Branch::Comp10Left.sequence().shift(1);
    let m_d = root(
        &|m| residual(&alternating, RootForm::Plain, m, p_bound(m)).unwrap_or(f64::NAN),
        2.5,
        3.5,
    );
    let big_m_d = root(
        &|m| {
            let p = p_bound(m);
            (m - 1.0) / (p * p - 1.0) - 1.0
        },
        3.5,
        5.0,
    );
    let sqrt13 = 13f64.sqrt();
    let mid = Branch::Comp10Mid.sequence();
    let block = EPSeq::from_symbols(vec![], vec![ONE, M, M, ONE]).expect("nonempty period");
    let m_3 = root(
        &|m| match solve_pi_root(&mid, RootForm::Plain, m, (2.0, r_bound(m))) {
            Ok(q) => residual(&block, RootForm::Complement, m, q).unwrap_or(f64::NAN),
            Err(_) => f64::NAN,
        },
        3.0,
        3.2,
    );
    Constants {
        alpha,
        phi: (1.0 + 5f64.sqrt()) / 2.0,
        m_d,
        big_m_d,
        m_1: 1.0 + q_1 - 1.0 / q_1,
        q_1,
        m_2: 2.992,
        m_3,
        m_4: (3.0 + sqrt13) / 2.0,
        q_4: (1.0 + sqrt13) / 2.0,
        kl_q_prime: 1.78723,
    }
}

/// The cached constants for `T`.
pub fn constants<T: Real>() -> &'static Constants<T> {
    T::constants()
}

// ---------------------------------------------------------------------------
// Sign-identity suite

/// One identity of the suite.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Identity {
    BracketRelations,
    FirstComponentP,
    FirstComponentBoundary,
    M1ClosedForm,
    M1BelowAtR,
    M1AtP,
    M1PeriodicRational,
    M1PeriodicAtP,
    M1PeriodicCubic,
    M1PeriodicComplementAtP,
    M1PeriodicComplementQuartic,
    AlternatingClosedForm,
    AlternatingBelowAtR,
    AlternatingAtP,
    Mm1Sign,
    MM1AtMMinusOne,
    MM1BelowAtR,
    MM1AtP,
}

/// Named sign crossovers in `m`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Crossover {
    OnePlusAlpha,
    MD,
    BigMD,
    M4,
}

impl Crossover {
    pub const ALL: [Crossover; 4] = [
        Crossover::OnePlusAlpha,
        Crossover::MD,
        Crossover::BigMD,
        Crossover::M4,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Crossover::OnePlusAlpha => "1+alpha",
            Crossover::MD => "m_d",
            Crossover::BigMD => "M_d",
            Crossover::M4 => "m_4",
        }
    }

    pub fn value<T: Real>(&self) -> T {
        let c = T::constants();
        match self {
            Crossover::OnePlusAlpha => T::one() + c.alpha,
            Crossover::MD => c.m_d,
            Crossover::BigMD => c.big_m_d,
            Crossover::M4 => c.m_4,
        }
    }
}

/// Range of `m` on which an identity is claimed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Domain<T> {
    pub lo: T,
    pub hi: T,
    /// `lo` itself is excluded.
    pub lo_open: bool,
}

impl<T: Real> Domain<T> {
    pub fn contains(&self, m: T) -> bool {
        (if self.lo_open { m > self.lo } else { m >= self.lo }) && m <= self.hi
    }

    /// `n` evenly spaced points; an open lower end is not sampled.
    pub fn grid(&self, n: usize) -> Vec<T> {
        let steps = T::from_usize(if self.lo_open { n } else { n.saturating_sub(1).max(1) })
            .unwrap_or_else(T::one);
        let offset = usize::from(self.lo_open);
        (0..n)
            .map(|i| {
                let k = T::from_usize(i + offset).unwrap_or_else(T::zero);
                self.lo + (self.hi - self.lo) * k / steps
            })
            .collect()
    }
}

enum Claim<T> {
    SameSign(T, T),
    Equal(T, T, f64),
    Negative(T),
    NonNegative(T),
}

fn sign<T: Real>(x: T) -> i8 {
    if x > T::zero() {
        1
    } else if x < T::zero() {
        -1
    } else {
        0
    }
}

impl<T: Real> Claim<T> {
    fn holds(&self) -> bool {
        match *self {
            Claim::SameSign(a, b) => !a.is_nan() && !b.is_nan() && sign(a) == sign(b),
            Claim::Equal(a, b, tol) => (a - b).abs() <= T::lit(tol),
            Claim::Negative(a) => a < T::zero(),
            Claim::NonNegative(a) => a >= -T::lit(1e-12),
        }
    }
}

/// Options for [`appendix_sign_suite_with`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SuiteOptions<T> {
    /// Added to `P_m` everywhere in the suite. Zero except to demonstrate
    /// that the suite detects a wrong `P_m`.
    pub p_offset: T,
}

impl<T: Real> Default for SuiteOptions<T> {
    fn default() -> Self {
        SuiteOptions { p_offset: T::zero() }
    }
}

struct Seqs {
    m1: EPSeq,
    m1_periodic: EPSeq,
    ones: EPSeq,
    alternating: EPSeq,
    mm1: EPSeq,
    m_m1: EPSeq,
}

impl Seqs {
    fn new() -> Self {
        let s = |pre: Vec<u8>, per: Vec<u8>| EPSeq::from_symbols(pre, per).expect("nonempty period");
        Seqs {
            m1: s(vec![M], vec![ONE]),
            m1_periodic: s(vec![], vec![M, ONE]),
            ones: s(vec![], vec![ONE]),
            alternating: s(vec![], vec![ONE, M]),
            mm1: s(vec![M, M], vec![ONE]),
            m_m1: s(vec![M], vec![M, ONE]),
        }
    }
}

impl Identity {
    pub const ALL: [Identity; 18] = [
        Identity::BracketRelations,
        Identity::FirstComponentP,
        Identity::FirstComponentBoundary,
        Identity::M1ClosedForm,
        Identity::M1BelowAtR,
        Identity::M1AtP,
        Identity::M1PeriodicRational,
        Identity::M1PeriodicAtP,
        Identity::M1PeriodicCubic,
        Identity::M1PeriodicComplementAtP,
        Identity::M1PeriodicComplementQuartic,
        Identity::AlternatingClosedForm,
        Identity::AlternatingBelowAtR,
        Identity::AlternatingAtP,
        Identity::Mm1Sign,
        Identity::MM1AtMMinusOne,
        Identity::MM1BelowAtR,
        Identity::MM1AtP,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Identity::BracketRelations => "bracket-relations",
            Identity::FirstComponentP => "first-component-p",
            Identity::FirstComponentBoundary => "first-component-boundary",
            Identity::M1ClosedForm => "m1-closed-form",
            Identity::M1BelowAtR => "m1-below-at-R",
            Identity::M1AtP => "m1-at-P",
            Identity::M1PeriodicRational => "m1-periodic-rational",
            Identity::M1PeriodicAtP => "m1-periodic-at-P",
            Identity::M1PeriodicCubic => "m1-periodic-cubic",
            Identity::M1PeriodicComplementAtP => "m1-periodic-complement-at-P",
            Identity::M1PeriodicComplementQuartic => "m1-periodic-complement-quartic",
            Identity::AlternatingClosedForm => "alternating-closed-form",
            Identity::AlternatingBelowAtR => "alternating-below-at-R",
            Identity::AlternatingAtP => "alternating-at-P",
            Identity::Mm1Sign => "mm1-sign",
            Identity::MM1AtMMinusOne => "m-m1-at-m-minus-one",
            Identity::MM1BelowAtR => "m-m1-below-at-R",
            Identity::MM1AtP => "m-m1-at-P",
        }
    }

    pub fn domain<T: Real>(&self) -> Domain<T> {
        let c = T::constants();
        let closed = |lo: T, hi: T| Domain {
            lo,
            hi,
            lo_open: false,
        };
        let (two, ten) = (T::lit(2.0), T::lit(10.0));
        match self {
            Identity::FirstComponentP => closed(two, T::one() + c.alpha),
            Identity::AlternatingBelowAtR => closed(c.m_d, c.m_1),
            Identity::AlternatingAtP => closed(c.m_d, ten),
            Identity::MM1AtMMinusOne => Domain {
                lo: two,
                hi: ten,
                lo_open: true,
            },
            Identity::MM1AtP => closed(two, c.big_m_d),
            _ => closed(two, ten),
        }
    }

    /// Points within [`CROSSOVER_TOL`] of these are skipped.
    pub fn crossovers(&self) -> &'static [Crossover] {
        match self {
            Identity::FirstComponentBoundary | Identity::M1AtP => &[Crossover::OnePlusAlpha],
            Identity::M1PeriodicAtP | Identity::M1PeriodicCubic | Identity::AlternatingAtP => {
                &[Crossover::MD]
            }
            Identity::M1PeriodicComplementAtP
            | Identity::M1PeriodicComplementQuartic
            | Identity::MM1AtP => &[Crossover::BigMD],
            Identity::MM1AtMMinusOne => &[Crossover::M4],
            _ => &[],
        }
    }

    fn claims<T: Real>(&self, s: &Seqs, m: T, p: T) -> Result<Vec<Claim<T>>, SeqError> {
        use Claim::*;
        let c = T::constants();
        let one = T::one();
        let two = T::lit(2.0);
        let k = m - one;
        let r = r_bound(m);
        let plain = |seq: &EPSeq, q: T| seq::pi_ternary(seq, m, q).map(|v| v - k);
        let comp = |seq: &EPSeq, q: T| seq::pi_complement(seq, m, q).map(|v| v - one);
        let cubic = p * p * p - two * p * p - p + one;
        let quartic = -p.powi(4) + two * p.powi(3) + p * p - two * p + one;
        Ok(match self {
            Identity::BracketRelations => vec![
                Equal(k * p * (p - two), one, 1e-12),
                Equal(k * (r - two), one, 1e-12),
            ],
            Identity::FirstComponentP => {
                let p_m = p_of_m(m).unwrap_or(T::nan());
                vec![Equal(p_m, m, 0.0), Equal(comp(&s.ones, m)?, T::zero(), 1e-12)]
            }
            Identity::FirstComponentBoundary => vec![SameSign(comp(&s.ones, p)?, m - p)],
            Identity::M1ClosedForm => {
                let mut v = vec![Equal(plain(&s.m1, r_first_component(m))?, T::zero(), 1e-10)];
                for q in [p, r] {
                    let poly = q - k * (q - one) * (q - one);
                    v.push(SameSign(plain(&s.m1, q)?, poly));
                }
                v
            }
            Identity::M1BelowAtR => vec![Negative(plain(&s.m1, r)?)],
            Identity::M1AtP => {
                let lhs = plain(&s.m1, p)?;
                let x = p - one;
                vec![
                    SameSign(lhs, one + c.alpha - m),
                    SameSign(lhs, x * x * x - x - one),
                ]
            }
            Identity::M1PeriodicRational => {
                let mut v = Vec::new();
                for q in [p, r, T::lit(2.5)] {
                    let rational = ((q + one) - k * (q * q - q - one)) / (q * q - one);
                    v.push(Equal(plain(&s.m1_periodic, q)?, rational, 1e-12));
                }
                v.push(Equal(plain(&s.m1_periodic, p_prime(m))?, T::zero(), 1e-10));
                v
            }
            Identity::M1PeriodicAtP => vec![SameSign(plain(&s.m1_periodic, p)?, cubic)],
            Identity::M1PeriodicCubic => vec![SameSign(cubic, c.m_d - m)],
            Identity::M1PeriodicComplementAtP => {
                vec![SameSign(comp(&s.m1_periodic, p)?, quartic)]
            }
            Identity::M1PeriodicComplementQuartic => vec![SameSign(quartic, m - c.big_m_d)],
            Identity::AlternatingClosedForm => {
                vec![Equal(comp(&s.alternating, r_alternating(m))?, T::zero(), 1e-10)]
            }
            Identity::AlternatingBelowAtR => {
                let lhs = comp(&s.alternating, r)?;
                let poly = -r * r * r + two * r * r + two * r - two;
                vec![Negative(lhs), SameSign(lhs, poly)]
            }
            Identity::AlternatingAtP => {
                let lhs = comp(&s.alternating, p)?;
                vec![NonNegative(lhs), SameSign(lhs, -cubic)]
            }
            Identity::Mm1Sign => {
                let mut v = Vec::new();
                for q in [p, r, (p + r) / two] {
                    let poly = one - k * (q - two + (q * q).recip());
                    v.push(SameSign(plain(&s.mm1, q)?, poly));
                }
                v
            }
            Identity::MM1AtMMinusOne => {
                let q = k;
                let lhs = plain(&s.m_m1, q)?;
                vec![
                    SameSign(lhs, c.m_4 - m),
                    SameSign(lhs, -q * (q * q - q - T::lit(3.0)) / (q * q - one)),
                ]
            }
            Identity::MM1BelowAtR => vec![Negative(plain(&s.m_m1, r)?)],
            Identity::MM1AtP => {
                let lhs = plain(&s.m_m1, p)?;
                vec![NonNegative(lhs), SameSign(lhs, -quartic)]
            }
        })
    }
}

impl fmt::Display for Identity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PointStatus {
    Pass,
    Fail,
    /// Within [`CROSSOVER_TOL`] of a crossover of this identity.
    Skipped,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PointResult<T> {
    pub identity: Identity,
    pub m: T,
    pub status: PointStatus,
}

/// A crossover located by bisection on a route independent of the one
/// used for [`Constants`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CrossoverResult<T> {
    pub crossover: Crossover,
    pub located: T,
    pub expected: T,
    pub ok: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Tally {
    pub pass: usize,
    pub fail: usize,
    pub skipped: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteReport<T> {
    pub points: Vec<PointResult<T>>,
    pub crossovers: Vec<CrossoverResult<T>>,
}

impl<T: Real> SuiteReport<T> {
    pub fn passed(&self) -> bool {
        self.points.iter().all(|p| p.status != PointStatus::Fail)
            && self.crossovers.iter().all(|c| c.ok)
    }

    pub fn failures(&self) -> impl Iterator<Item = &PointResult<T>> {
        self.points.iter().filter(|p| p.status == PointStatus::Fail)
    }

    /// Pass/fail/skip counts per identity, in suite order.
    pub fn tally(&self) -> Vec<(Identity, Tally)> {
        Identity::ALL
            .iter()
            .map(|&id| {
                let mut t = Tally::default();
                for p in self.points.iter().filter(|p| p.identity == id) {
                    match p.status {
                        PointStatus::Pass => t.pass += 1,
                        PointStatus::Fail => t.fail += 1,
                        PointStatus::Skipped => t.skipped += 1,
                    }
                }
                (id, t)
            })
            .collect()
    }
}

fn locate_crossovers<T: Real>(s: &Seqs, p_offset: T) -> Vec<CrossoverResult<T>> {
    let p = |m: T| p_bound(m) + p_offset;
    let one = T::one();
    let two = T::lit(2.0);
    let nan = T::nan();
    Crossover::ALL
        .iter()
        .map(|&crossover| {
            let located = match crossover {
                Crossover::OnePlusAlpha => bisect_root(
                    |m| seq::pi_ternary(&s.m1, m, p(m)).map_or(nan, |v| v - (m - one)),
                    T::lit(2.2),
                    T::lit(2.5),
                ),
                Crossover::MD => bisect_root(
                    |m| {
                        let p = p(m);
                        p * p * p - two * p * p - p + one
                    },
                    T::lit(2.5),
                    T::lit(3.5),
                ),
                Crossover::BigMD => bisect_root(
                    |m| {
                        let p = p(m);
                        -p.powi(4) + two * p.powi(3) + p * p - two * p + one
                    },
                    T::lit(3.5),
                    T::lit(5.0),
                ),
                Crossover::M4 => bisect_root(
                    |m| seq::pi_ternary(&s.m_m1, m, m - one).map_or(nan, |v| v - (m - one)),
                    T::lit(3.0),
                    T::lit(4.0),
                ),
            }
            .unwrap_or(nan);
            let expected = crossover.value::<T>();
            CrossoverResult {
                crossover,
                located,
                expected,
                ok: (located - expected).abs() <= T::lit(CROSSOVER_TOL),
            }
        })
        .collect()
}

fn evaluate<T: Real>(
    s: &Seqs,
    identity: Identity,
    m: T,
    options: &SuiteOptions<T>,
) -> PointResult<T> {
    let near = identity
        .crossovers()
        .iter()
        .any(|c| (m - c.value::<T>()).abs() <= T::lit(CROSSOVER_TOL));
    let status = if near {
        PointStatus::Skipped
    } else {
        let p = p_bound(m) + options.p_offset;
        match identity.claims(s, m, p) {
            Ok(claims) if claims.iter().all(Claim::holds) => PointStatus::Pass,
            _ => PointStatus::Fail,
        }
    };
    PointResult {
        identity,
        m,
        status,
    }
}

/// Evaluates every identity at each grid point inside its domain.
pub fn appendix_sign_suite<T: Real>(m_grid: &[T]) -> SuiteReport<T> {
    appendix_sign_suite_with(m_grid, &SuiteOptions::default())
}

pub fn appendix_sign_suite_with<T: Real>(m_grid: &[T], options: &SuiteOptions<T>) -> SuiteReport<T> {
    let s = Seqs::new();
    let mut points = Vec::new();
    for id in Identity::ALL {
        let domain = id.domain::<T>();
        for &m in m_grid.iter().filter(|&&m| domain.contains(m)) {
            points.push(evaluate(&s, id, m, options));
        }
    }
    SuiteReport {
        points,
        crossovers: locate_crossovers(&s, options.p_offset),
    }
}

/// Evaluates every identity on `n` evenly spaced points of its own domain.
pub fn appendix_sign_suite_on_domains<T: Real>(n: usize, options: &SuiteOptions<T>) -> SuiteReport<T> {
    let s = Seqs::new();
    let mut points = Vec::new();
    for id in Identity::ALL {
        for m in id.domain::<T>().grid(n) {
            points.push(evaluate(&s, id, m, options));
        }
    }
    SuiteReport {
        points,
        crossovers: locate_crossovers(&s, options.p_offset),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bounds_at_two() {
        assert!((p_bound(2.0) - (1.0 + 2f64.sqrt())).abs() < 1e-15);
        assert_eq!(r_bound(2.0), 3.0);
    }

    #[test]
    fn golden_root() {
        let seq = Branch::Comp0Full.sequence();
        let q = solve_pi_root(&seq, RootForm::Plain, 2.0f64, (2.0, 3.0)).unwrap();
        assert!((q - (3.0 + 5f64.sqrt()) / 2.0).abs() < 1e-11);
        assert!((r_of_m(2.0f64).unwrap() - 2.618034).abs() < 1e-6);
    }

    #[test]
    fn alternating_root() {
        let seq = Branch::Comp10Left.sequence();
        let q = solve_pi_root(&seq, RootForm::Complement, 2.85f64, (2.0, 3.0)).unwrap();
        assert!((q - r_alternating(2.85)).abs() < 1e-11);
        assert!((q - 2.2872133).abs() < 1e-6);
    }

    #[test]
    fn solver_errors() {
        let seq = Branch::Comp0Full.sequence();
        assert!(matches!(
            solve_pi_root(&seq, RootForm::Plain, 2.0, (2.7, 3.0)),
            Err(CriticalError::NoSignChange { .. })
        ));
        assert!(matches!(
            bisect_decreasing(|x: f64| (x - 2.5).powi(2) - 0.01, 2.0, 3.0),
            Err(CriticalError::NotMonotone { .. })
        ));
        assert!(solve_pi_root(&seq, RootForm::Plain, 2.0, (1.0, 3.0)).is_err());
    }

    #[test]
    fn p_examples() {
        assert_eq!(p_of_m(2.0).unwrap(), 2.0);
        assert!(matches!(p_of_m(9.0), Err(CriticalError::Unsupported(_))));
        let p3 = p_of_m(3.0).unwrap();
        assert!((p3 - (3.0 + 33f64.sqrt()) / 4.0).abs() < 1e-12);
        let c = Branch::Comp10Left.sequence().shift(1);
        assert!((seq::pi_ternary(&c, 3.0, p3).unwrap() - 2.0).abs() < 1e-9);
    }

    #[test]
    fn dispatch() {
        assert_eq!(branch_of(2.0), Some(Branch::Comp0Full));
        assert_eq!(branch_of(2.9), Some(Branch::Comp10Left));
        assert_eq!(branch_of(3.0), Some(Branch::Comp10Mid));
        assert_eq!(branch_of(4.0), Some(Branch::Comp10Right));
        assert_eq!(branch_of(4.54646), Some(Branch::Comp10Right));
        for m in [1.5, 2.6, 2.95, 3.2, 5.0] {
            assert_eq!(branch_of(m), None, "{m}");
            assert!(r_of_m(m).is_err());
        }
    }

    #[test]
    fn branch_polynomials() {
        let q = r_of_m(4.0f64).unwrap();
        assert!((3.0 * q.powi(3) - 4.0 * q * q - 7.0 * q + 3.0).abs() < 1e-9);
        let q = r_of_m(2.9f64).unwrap();
        assert!((1.9 * q - (q * q - 1.0)).abs() < 1e-12);
        let q = r_of_m(3.0f64).unwrap();
        let lhs = 2.0 * (q.powi(6) - 2.0 * q.powi(5) + q.powi(4) - q.powi(3) - q * q + 2.0 * q - 1.0);
        assert!((lhs - q.powi(5) - q.powi(3)).abs() < 1e-8);
    }

    #[test]
    fn constants_ordered() {
        let c = constants::<f64>();
        assert!(1.0 < c.alpha && c.alpha < c.phi && c.phi < 2.0);
        let chain = [2.0, c.m_d, c.m_1, c.m_2, c.m_3, c.m_4, c.big_m_d];
        assert!(chain.windows(2).all(|w| w[0] < w[1]), "{chain:?}");
        assert_eq!(c.m3_matches(), "3.10214");
        let f = constants::<f32>();
        assert!((f.m_d as f64 - c.m_d).abs() < 1e-6);
    }

    #[test]
    fn suite_default_grid_passes() {
        let grid: Vec<f64> = (0..=80).map(|i| 2.0 + 0.1 * i as f64).collect();
        let report = appendix_sign_suite(&grid);
        let failures: Vec<_> = report.failures().collect();
        assert!(failures.is_empty(), "{failures:?}");
        assert!(report.passed(), "{:?}", report.crossovers);
    }

    #[test]
    fn suite_detects_perturbed_p() {
        let grid = [2.0, 3.0, 5.0];
        let report = appendix_sign_suite_with(&grid, &SuiteOptions { p_offset: 1e-3 });
        assert!(!report.passed());
        assert!(report
            .failures()
            .any(|p| p.identity == Identity::BracketRelations));
    }

    #[test]
    fn open_domain_grid_skips_endpoint() {
        let d = Identity::MM1AtMMinusOne.domain::<f64>();
        let g = d.grid(4);
        assert_eq!(g.len(), 4);
        assert!(g[0] > 2.0 && (g[3] - 10.0).abs() < 1e-12);
        let d = Identity::BracketRelations.domain::<f64>();
        let g = d.grid(3);
        assert_eq!(g, vec![2.0, 6.0, 10.0]);
    }
}
