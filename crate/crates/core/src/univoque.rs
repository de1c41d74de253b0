//! Uniqueness verdicts for eventually periodic expansions.
//!
//! A sequence `c` over `a_1 < ... < a_J` is a unique expansion in base `q`
//! when, at every position `n`,
//!
//! * `Σ (c_{n+i} - a_1) q^{-i} < a_{j+1} - a_j` wherever `c_n = a_j < a_J`, and
//! * `Σ (a_J - c_{n+i}) q^{-i} < a_j - a_{j-1}` wherever `c_n = a_j > a_1`.
//!
//! For `q <= R_A = 1 + (a_J - a_1) / max gap` these conditions are also
//! necessary, so a failure there proves non-uniqueness. Above `R_A` a failure
//! proves nothing and the verdict is [`VerdictKind::Inconclusive`].
//!
//! Strict inequalities are decided with a margin `eps_cmp`: a condition holds
//! only if its slack exceeds the margin, and a slack within `±eps_cmp` is
//! flagged as a boundary case on the witness.

use thiserror::Error;

use crate::real::Real;
use crate::seq::{self, Alphabet, EPSeq, SeqError, Word, M, ONE};
use crate::subshift::Automaton;

/// Default comparison margin for strict inequalities.
pub const EPS_CMP: f64 = 1e-9;

/// Longest word [`scan_forbidden`] will enumerate.
pub const MAX_SCAN_LEN: usize = 16;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum UnivoqueError {
    #[error(transparent)]
    Seq(#[from] SeqError),
    #[error("base q = {q} outside the admissible range ({lo}, {hi}]")]
    BaseOutOfRange { q: f64, lo: f64, hi: f64 },
    #[error("m must be at least 2, got {0}")]
    BadM(f64),
    #[error("block {index} is empty")]
    EmptyBlock { index: usize },
    #[error("a family needs at least one block")]
    NoBlocks,
    #[error("words must be nonempty and use only the digits 1 and m")]
    BadWord,
    #[error("scan length {0} outside 1..={MAX_SCAN_LEN}")]
    ScanLength(usize),
    #[error("certification depth must be positive")]
    ZeroDepth,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VerdictKind {
    ProvenUnique,
    ProvenNotUnique,
    Inconclusive,
}

impl VerdictKind {
    pub fn name(&self) -> &'static str {
        match self {
            VerdictKind::ProvenUnique => "Unique",
            VerdictKind::ProvenNotUnique => "NotUnique",
            VerdictKind::Inconclusive => "Inconclusive",
        }
    }
}

/// Which of the two digit-gap conditions is meant.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Condition {
    /// The tail sum measured from the smallest digit stays below the gap to
    /// the next larger digit, so raising `c_n` cannot be compensated.
    Raise,
    /// The tail sum measured from the largest digit stays below the gap to
    /// the next smaller digit, so lowering `c_n` cannot be compensated.
    Lower,
}

impl Condition {
    pub fn name(&self) -> &'static str {
        match self {
            Condition::Raise => "raise",
            Condition::Lower => "lower",
        }
    }
}

/// One evaluated condition at a 1-based position `n`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Check<T> {
    pub position: usize,
    pub condition: Condition,
    pub sum: T,
    pub bound: T,
    /// `bound - sum`; the condition holds when this exceeds the margin.
    pub slack: T,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Witness<T> {
    pub position: usize,
    pub condition: Condition,
    pub slack: T,
    /// `|slack| <= eps_cmp`: the base sits on the boundary of this condition.
    pub boundary: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Verdict<T> {
    pub kind: VerdictKind,
    /// First failing condition; always present for `ProvenNotUnique`.
    pub witness: Option<Witness<T>>,
    pub checks: Vec<Check<T>>,
}

impl<T: Real> Verdict<T> {
    pub fn is_unique(&self) -> bool {
        self.kind == VerdictKind::ProvenUnique
    }

    pub fn min_slack(&self) -> Option<T> {
        self.checks.iter().map(|c| c.slack).reduce(T::min)
    }
}

/// A set `blocks^∞` of infinite concatenations of words over `{1, m}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FamilySpec {
    blocks: Vec<Word>,
}

impl FamilySpec {
    pub fn new(blocks: Vec<Word>) -> Result<Self, UnivoqueError> {
        if blocks.is_empty() {
            return Err(UnivoqueError::NoBlocks);
        }
        for (index, b) in blocks.iter().enumerate() {
            if b.is_empty() {
                return Err(UnivoqueError::EmptyBlock { index });
            }
            if !is_one_m_word(b.symbols()) {
                return Err(UnivoqueError::BadWord);
            }
        }
        Ok(FamilySpec { blocks })
    }

    pub fn blocks(&self) -> &[Word] {
        &self.blocks
    }

    /// Whether two blocks `u`, `v` with `uv != vu` exist. Only then does the
    /// family contain uncountably many sequences.
    pub fn generates_continuum(&self) -> bool {
        self.blocks.iter().enumerate().any(|(i, u)| {
            self.blocks[i + 1..]
                .iter()
                .any(|v| u.concat(v) != v.concat(u))
        })
    }

    fn symbol(&self, (b, o): (usize, usize)) -> u8 {
        self.blocks[b].symbols()[o]
    }

    fn successors(&self, (b, o): (usize, usize), out: &mut Vec<(usize, usize)>) {
        if o + 1 < self.blocks[b].len() {
            out.push((b, o + 1));
        } else {
            out.extend((0..self.blocks.len()).map(|nb| (nb, 0)));
        }
    }
}

/// Outcome of [`certify_family`].
#[derive(Debug, Clone, PartialEq)]
pub struct Certificate<T> {
    pub certified: bool,
    /// Largest upper bound on `π_q(tail)` over all tails following a digit 1.
    pub tail_bound: T,
    /// Largest upper bound on `π_q(m - tail)` over the same tails.
    pub complement_bound: T,
    /// Certified and the family has two non-commuting blocks.
    pub uncountable: bool,
}

/// Result of the forbidden-block test for a word `w` (the block is `1w`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlockTest<T> {
    pub forbidden: bool,
    /// The verdict was decided within the comparison margin.
    pub boundary: bool,
    /// `π_q(w 1^∞) - (m - 1)`.
    pub tail_excess: T,
    /// `π_q(m - w m^∞) - 1`.
    pub complement_excess: T,
}

/// Output of [`scan_forbidden`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ForbiddenScan {
    /// Minimal forbidden words, ordered by length then lexicographically.
    pub words: Vec<Word>,
    /// Those words of `words` whose test was decided within the margin.
    pub boundary: Vec<Word>,
}

/// Result of [`Margin::context_block_test`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContextTest<T> {
    /// The block labels at least one path of the automaton.
    pub occurs: bool,
    pub forbidden: bool,
    /// Lower bound on `π_q(tail) - (m - 1)` over admissible tails.
    pub tail_excess: T,
    /// Lower bound on `π_q(m - tail) - 1` over admissible tails.
    pub complement_excess: T,
}

fn is_one_m_word(symbols: &[u8]) -> bool {
    symbols.iter().all(|&s| s == ONE || s == M)
}

fn as_f64<T: Real>(x: T) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

/// `x <= limit` up to a few ulps, so that `R_m` computed by the caller
/// counts as inside `(2, R_m]`.
fn at_most<T: Real>(x: T, limit: T) -> bool {
    x <= limit + limit.abs() * T::epsilon() * T::lit(4.0)
}

/// `R_m = 1 + m / (m - 1)`.
fn r_m<T: Real>(m: T) -> T {
    T::one() + m / (m - T::one())
}

/// Comparison margin for strict inequalities, with the operations that
/// depend on it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Margin<T> {
    pub eps_cmp: T,
}

impl<T: Real> Default for Margin<T> {
    fn default() -> Self {
        Margin {
            eps_cmp: T::lit(EPS_CMP),
        }
    }
}

impl<T: Real> Margin<T> {
    pub fn new(eps_cmp: T) -> Self {
        Margin { eps_cmp }
    }

    fn conclude(&self, checks: Vec<Check<T>>, iff_regime: bool) -> Verdict<T> {
        let witness = checks
            .iter()
            .find(|c| c.slack <= self.eps_cmp)
            .map(|c| Witness {
                position: c.position,
                condition: c.condition,
                slack: c.slack,
                boundary: c.slack.abs() <= self.eps_cmp,
            });
        let kind = match witness {
            None => VerdictKind::ProvenUnique,
            Some(_) if iff_regime => VerdictKind::ProvenNotUnique,
            Some(_) => VerdictKind::Inconclusive,
        };
        Verdict {
            kind,
            witness,
            checks,
        }
    }

    /// Uniqueness of `c` as an expansion over an arbitrary alphabet.
    pub fn check_univoque_general(
        &self,
        c: &EPSeq,
        alphabet: &Alphabet<T>,
        q: T,
    ) -> Result<Verdict<T>, UnivoqueError> {
        seq::check_base(q)?;
        c.validate(alphabet)?;
        let (lo, hi) = (alphabet.min(), alphabet.max());
        let mut checks = Vec::new();
        for n in 1..=c.distinct_tails() {
            let digit = c.symbol_at(n - 1);
            let tail = c.shift(n);
            if let Some(gap) = alphabet.gap_above(digit) {
                let sum = seq::closed_form(&tail, q, |s| alphabet.digit(s) - lo);
                checks.push(Check {
                    position: n,
                    condition: Condition::Raise,
                    sum,
                    bound: gap,
                    slack: gap - sum,
                });
            }
            if let Some(gap) = alphabet.gap_below(digit) {
                let sum = seq::closed_form(&tail, q, |s| hi - alphabet.digit(s));
                checks.push(Check {
                    position: n,
                    condition: Condition::Lower,
                    sum,
                    bound: gap,
                    slack: gap - sum,
                });
            }
        }
        Ok(self.conclude(checks, at_most(q, alphabet.iff_threshold())))
    }

    /// Membership of a zero-free sequence in the set of unique expansions
    /// over `{0, 1, m}` that use only the digits 1 and m. Only positions
    /// holding a 1 carry conditions once `q > 2`.
    pub fn check_v_membership(&self, c: &EPSeq, m: T, q: T) -> Result<Verdict<T>, UnivoqueError> {
        check_m(m)?;
        seq::check_zero_free(c)?;
        if !(q > T::lit(2.0)) || !q.is_finite() {
            return Err(UnivoqueError::BaseOutOfRange {
                q: as_f64(q),
                lo: 2.0,
                hi: f64::INFINITY,
            });
        }
        let mut checks = Vec::new();
        for n in 1..=c.distinct_tails() {
            if c.symbol_at(n - 1) != ONE {
                continue;
            }
            let tail = c.shift(n);
            let sum = seq::pi_ternary(&tail, m, q)?;
            let bound = m - T::one();
            checks.push(Check {
                position: n,
                condition: Condition::Raise,
                sum,
                bound,
                slack: bound - sum,
            });
            let sum = seq::pi_complement(&tail, m, q)?;
            checks.push(Check {
                position: n,
                condition: Condition::Lower,
                sum,
                bound: T::one(),
                slack: T::one() - sum,
            });
        }
        Ok(self.conclude(checks, at_most(q, r_m(m))))
    }

    fn check_block_base(&self, m: T, q: T) -> Result<(), UnivoqueError> {
        check_m(m)?;
        let hi = r_m(m);
        if !(q > T::lit(2.0)) || !at_most(q, hi) {
            return Err(UnivoqueError::BaseOutOfRange {
                q: as_f64(q),
                lo: 2.0,
                hi: as_f64(hi),
            });
        }
        Ok(())
    }

    /// Tests whether the block `1w` is excluded from every zero-free unique
    /// expansion: either `π_q(w 1^∞) >= m - 1` or `π_q(w m^∞) <= m/(q-1) - 1`.
    pub fn forbidden_block_test(&self, w: &Word, m: T, q: T) -> Result<BlockTest<T>, UnivoqueError> {
        self.check_block_base(m, q)?;
        if w.is_empty() || !is_one_m_word(w.symbols()) {
            return Err(UnivoqueError::BadWord);
        }
        let low = EPSeq::constant(ONE).prepend(w.symbols());
        let high = EPSeq::constant(M).prepend(w.symbols());
        let tail_excess = seq::pi_ternary(&low, m, q)? - (m - T::one());
        let complement_excess = seq::pi_complement(&high, m, q)? - T::one();
        let eps = self.eps_cmp;
        let forbidden = tail_excess >= -eps || complement_excess >= -eps;
        let boundary = forbidden && tail_excess < eps && complement_excess < eps;
        Ok(BlockTest {
            forbidden,
            boundary,
            tail_excess,
            complement_excess,
        })
    }

    pub fn is_forbidden_block(&self, w: &Word, m: T, q: T) -> Result<bool, UnivoqueError> {
        Ok(self.forbidden_block_test(w, m, q)?.forbidden)
    }

    /// All minimal forbidden blocks `1w` with `|1w| <= lmax`.
    pub fn scan_forbidden(&self, m: T, q: T, lmax: usize) -> Result<ForbiddenScan, UnivoqueError> {
        self.check_block_base(m, q)?;
        if lmax == 0 || lmax > MAX_SCAN_LEN {
            return Err(UnivoqueError::ScanLength(lmax));
        }
        let mut words: Vec<Word> = Vec::new();
        let mut boundary = Vec::new();
        for len in 2..=lmax {
            let tail_len = len - 1;
            for bits in 0..(1u32 << tail_len) {
                // most significant bit first; 0 -> digit 1, 1 -> digit m
                let mut symbols = vec![ONE];
                symbols.extend(
                    (0..tail_len)
                        .rev()
                        .map(|i| if bits >> i & 1 == 1 { M } else { ONE }),
                );
                let block = Word::new(symbols);
                if words.iter().any(|f| block.contains_factor(f)) {
                    continue;
                }
                let w = Word::new(block.symbols()[1..].to_vec());
                let test = self.forbidden_block_test(&w, m, q)?;
                if test.forbidden {
                    if test.boundary {
                        boundary.push(block.clone());
                    }
                    words.push(block);
                }
            }
        }
        Ok(ForbiddenScan { words, boundary })
    }

    /// Tries to certify `blocks^∞ ⊆ V'_{m,q}`.
    ///
    /// For every digit 1 inside a block, the tails that can follow it are a
    /// suffix of that block followed by any element of the family. For
    /// `q > 2` the value `π_q` is increasing in the lexicographic order, so
    /// the supremum over these tails is bounded by the lexicographically
    /// largest `depth`-symbol prefix plus `m q^{-depth}/(q-1)`; the
    /// complement uses the smallest prefix. A `false` result only means the
    /// bounds were not small enough.
    pub fn certify_family(
        &self,
        family: &FamilySpec,
        m: T,
        q: T,
        depth: usize,
    ) -> Result<Certificate<T>, UnivoqueError> {
        check_m(m)?;
        if !(q > T::lit(2.0)) || !q.is_finite() {
            return Err(UnivoqueError::BaseOutOfRange {
                q: as_f64(q),
                lo: 2.0,
                hi: f64::INFINITY,
            });
        }
        if depth == 0 {
            return Err(UnivoqueError::ZeroDepth);
        }

        let mut starts: Vec<Vec<(usize, usize)>> = Vec::new();
        for (b, block) in family.blocks.iter().enumerate() {
            for (o, &s) in block.symbols().iter().enumerate() {
                if s == ONE {
                    let mut next = Vec::new();
                    family.successors((b, o), &mut next);
                    next.sort_unstable();
                    if !starts.contains(&next) {
                        starts.push(next);
                    }
                }
            }
        }

        let r = q.recip();
        let tail_weight = r.powi(depth as i32) / (q - T::one());
        let mut tail_bound = T::neg_infinity();
        let mut complement_bound = T::neg_infinity();
        for start in &starts {
            let hi = family_extremal_prefix(family, start, depth, true);
            let lo = family_extremal_prefix(family, start, depth, false);
            let upper = truncated_sum(&hi, q, |s| digit_value(s, m)) + m * tail_weight;
            let comp = truncated_sum(&lo, q, |s| m - digit_value(s, m))
                + (m - T::one()) * tail_weight;
            tail_bound = tail_bound.max(upper);
            complement_bound = complement_bound.max(comp);
        }
        if starts.is_empty() {
            tail_bound = T::zero();
            complement_bound = T::zero();
        }
        let certified = tail_bound < m - T::one() - self.eps_cmp
            && complement_bound < T::one() - self.eps_cmp;
        Ok(Certificate {
            certified,
            tail_bound,
            complement_bound,
            uncountable: certified && family.generates_continuum(),
        })
    }

    /// Forbidden-block test against the language of an automaton rather than
    /// against all of `{1, m}^∞`.
    ///
    /// If every admissible continuation of `1w` makes the tail after the 1
    /// violate one of the two membership conditions, the block cannot occur
    /// in any zero-free unique expansion that the automaton admits. The
    /// extremal continuations are found greedily to `depth` symbols and the
    /// rest is bounded by the digit range.
    pub fn context_block_test(
        &self,
        automaton: &Automaton,
        w: &Word,
        m: T,
        q: T,
        depth: usize,
    ) -> Result<ContextTest<T>, UnivoqueError> {
        self.check_block_base(m, q)?;
        if !is_one_m_word(w.symbols()) {
            return Err(UnivoqueError::BadWord);
        }
        let mut block = vec![ONE];
        block.extend_from_slice(w.symbols());
        let mut ends: Vec<usize> = (0..automaton.len())
            .filter_map(|s| automaton.run(s, &block))
            .collect();
        ends.sort_unstable();
        ends.dedup();
        if ends.is_empty() {
            return Ok(ContextTest {
                occurs: false,
                forbidden: true,
                tail_excess: T::infinity(),
                complement_excess: T::infinity(),
            });
        }
        let low = automaton_extremal_prefix(automaton, &ends, depth, false);
        let high = automaton_extremal_prefix(automaton, &ends, depth, true);
        let head = truncated_sum(w.symbols(), q, |s| digit_value(s, m));
        let scale = q.recip().powi(w.len() as i32);
        let rest = q.recip().powi(depth as i32) / (q - T::one());
        let tail_low = head + scale * (truncated_sum(&low, q, |s| digit_value(s, m)) + rest);
        let tail_high = head + scale * (truncated_sum(&high, q, |s| digit_value(s, m)) + m * rest);
        let tail_excess = tail_low - (m - T::one());
        let complement_excess = m / (q - T::one()) - tail_high - T::one();
        let forbidden = tail_excess >= -self.eps_cmp || complement_excess >= -self.eps_cmp;
        Ok(ContextTest {
            occurs: true,
            forbidden,
            tail_excess,
            complement_excess,
        })
    }
}

fn check_m<T: Real>(m: T) -> Result<(), UnivoqueError> {
    if m >= T::lit(2.0) && m.is_finite() {
        Ok(())
    } else {
        Err(UnivoqueError::BadM(as_f64(m)))
    }
}

fn digit_value<T: Real>(s: u8, m: T) -> T {
    if s == ONE {
        T::one()
    } else {
        m
    }
}

fn truncated_sum<T: Real>(symbols: &[u8], q: T, value: impl Fn(u8) -> T) -> T {
    let r = q.recip();
    let mut weight = T::one();
    let mut sum = T::zero();
    for &s in symbols {
        weight = weight * r;
        sum = sum + value(s) * weight;
    }
    sum
}

/// Lexicographically largest (or smallest) `depth`-prefix of the
/// concatenations that can start at any of the positions in `start`.
fn family_extremal_prefix(
    family: &FamilySpec,
    start: &[(usize, usize)],
    depth: usize,
    largest: bool,
) -> Vec<u8> {
    let mut current = start.to_vec();
    let mut out = Vec::with_capacity(depth);
    for _ in 0..depth {
        let symbols = current.iter().map(|&p| family.symbol(p));
        let pick = if largest { symbols.max() } else { symbols.min() }.expect("nonempty frontier");
        out.push(pick);
        let mut next = Vec::new();
        for &p in current.iter().filter(|&&p| family.symbol(p) == pick) {
            family.successors(p, &mut next);
        }
        next.sort_unstable();
        next.dedup();
        current = next;
    }
    out
}

/// Same as [`family_extremal_prefix`] but over the paths of a trimmed
/// automaton starting from any state in `start`.
fn automaton_extremal_prefix(a: &Automaton, start: &[usize], depth: usize, largest: bool) -> Vec<u8> {
    let order: [u8; 2] = if largest { [M, ONE] } else { [ONE, M] };
    let mut current = start.to_vec();
    let mut out = Vec::with_capacity(depth);
    for _ in 0..depth {
        let Some((sym, next)) = order.iter().find_map(|&sym| {
            let mut next: Vec<usize> = current.iter().filter_map(|&s| a.step(s, sym)).collect();
            next.sort_unstable();
            next.dedup();
            (!next.is_empty()).then_some((sym, next))
        }) else {
            break;
        };
        out.push(sym);
        current = next;
    }
    out
}

pub fn check_univoque_general<T: Real>(
    c: &EPSeq,
    alphabet: &Alphabet<T>,
    q: T,
) -> Result<Verdict<T>, UnivoqueError> {
    Margin::default().check_univoque_general(c, alphabet, q)
}

pub fn check_v_membership<T: Real>(c: &EPSeq, m: T, q: T) -> Result<Verdict<T>, UnivoqueError> {
    Margin::default().check_v_membership(c, m, q)
}

pub fn is_forbidden_block<T: Real>(w: &Word, m: T, q: T) -> Result<bool, UnivoqueError> {
    Margin::default().is_forbidden_block(w, m, q)
}

pub fn scan_forbidden<T: Real>(m: T, q: T, lmax: usize) -> Result<ForbiddenScan, UnivoqueError> {
    Margin::default().scan_forbidden(m, q, lmax)
}

pub fn certify_family<T: Real>(
    family: &FamilySpec,
    m: T,
    q: T,
    depth: usize,
) -> Result<Certificate<T>, UnivoqueError> {
    Margin::default().certify_family(family, m, q, depth)
}
