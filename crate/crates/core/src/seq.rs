//! Digit sequences over a finite real alphabet.
//!
//! Sequences are stored as symbol indices into an [`Alphabet`]; the numeric
//! value of a digit is only looked up when a sum is evaluated. Eventually
//! periodic sequences ([`EPSeq`]) are kept in canonical form so that two
//! sequences are equal exactly when their fields are equal.
//!
//! The textual notation is
//!
//! ```text
//! seq   := item* [item '^w']
//! item  := atom | '(' item+ ')' | item '^' count
//! atom  := one character per digit ('0', '1', 'm' for the ternary alphabet)
//! ```
//!
//! so `mm1(m11m)^w` is the sequence `m m 1 m 1 1 m m 1 1 m ...` and
//! `(1m^2)^w` is `(1mm)^∞`.

use std::cmp::Ordering;
use std::fmt;

use thiserror::Error;

use crate::real::Real;

/// Index of the digit `0` in a ternary alphabet `{0, 1, m}`.
pub const ZERO: u8 = 0;
/// Index of the digit `1` in a ternary alphabet.
pub const ONE: u8 = 1;
/// Index of the digit `m` in a ternary alphabet.
pub const M: u8 = 2;

/// Upper limit on the number of symbols a parsed string may expand to.
pub const MAX_EXPANDED_LEN: usize = 1 << 20;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("syntax error at byte {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error("unknown digit {ch:?} at byte {offset}")]
    UnknownDigit { offset: usize, ch: char },
    #[error("'^w' at byte {offset} must mark the final top-level item")]
    OmegaNotFinal { offset: usize },
    #[error("empty period at byte {offset}")]
    EmptyPeriod { offset: usize },
    #[error("sequence expands to more than {limit} symbols")]
    TooLong { limit: usize },
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SeqError {
    #[error("an alphabet needs at least two digits, got {0}")]
    TooFewDigits(usize),
    #[error("alphabet digits must be finite and strictly increasing")]
    NotIncreasing,
    #[error("alphabet needs one distinct display character per digit")]
    BadDigitChars,
    #[error("ternary alphabet requires m >= 2, got {0}")]
    BadTernaryM(f64),
    #[error("base must satisfy q > 1, got {0}")]
    BaseTooSmall(f64),
    #[error("symbol index {symbol} out of range for an alphabet of {len} digits")]
    SymbolOutOfRange { symbol: u8, len: usize },
    #[error("the period of an eventually periodic sequence cannot be empty")]
    EmptyPeriod,
    #[error("sequence must use only the digits 1 and m")]
    ZeroDigit,
}

/// A finite set of real digits `a_1 < ... < a_J` with a display character
/// for each digit.
#[derive(Debug, Clone, PartialEq)]
pub struct Alphabet<T> {
    digits: Vec<T>,
    chars: Vec<char>,
}

impl<T: Real> Alphabet<T> {
    /// Builds an alphabet with automatically chosen display characters:
    /// integral digits `0..=9` print as themselves, anything else gets a
    /// letter `a`, `b`, ... in increasing order.
    pub fn new(digits: Vec<T>) -> Result<Self, SeqError> {
        let mut next_letter = b'a';
        let chars = digits
            .iter()
            .map(|&d| {
                let as_int = d.to_f64().unwrap_or(f64::NAN);
                if as_int.fract() == 0.0 && (0.0..=9.0).contains(&as_int) {
                    char::from(b'0' + as_int as u8)
                } else {
                    let c = char::from(next_letter);
                    next_letter = next_letter.saturating_add(1);
                    c
                }
            })
            .collect();
        Self::with_chars(digits, chars)
    }

    pub fn with_chars(digits: Vec<T>, chars: Vec<char>) -> Result<Self, SeqError> {
        if digits.len() < 2 {
            return Err(SeqError::TooFewDigits(digits.len()));
        }
        if digits.len() > u8::MAX as usize {
            return Err(SeqError::BadDigitChars);
        }
        if digits.iter().any(|d| !d.is_finite()) || digits.windows(2).any(|w| w[0] >= w[1]) {
            return Err(SeqError::NotIncreasing);
        }
        let mut sorted = chars.clone();
        sorted.sort_unstable();
        sorted.dedup();
        if chars.len() != digits.len()
            || sorted.len() != chars.len()
            || chars.iter().any(|c| matches!(c, '(' | ')' | '^' | 'w') || c.is_whitespace())
        {
            return Err(SeqError::BadDigitChars);
        }
        Ok(Alphabet { digits, chars })
    }

    /// The alphabet `{0, 1, m}` with display characters `0`, `1`, `m`.
    pub fn ternary(m: T) -> Result<Self, SeqError> {
        if !(m >= T::lit(2.0)) || !m.is_finite() {
            return Err(SeqError::BadTernaryM(m.to_f64().unwrap_or(f64::NAN)));
        }
        Self::with_chars(vec![T::zero(), T::one(), m], vec!['0', '1', 'm'])
    }

    /// The two-letter alphabet `{0, 1}`.
    pub fn binary() -> Self {
        Alphabet {
            digits: vec![T::zero(), T::one()],
            chars: vec!['0', '1'],
        }
    }

    pub fn len(&self) -> usize {
        self.digits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.digits.is_empty()
    }

    pub fn digits(&self) -> &[T] {
        &self.digits
    }

    pub fn digit(&self, symbol: u8) -> T {
        self.digits[symbol as usize]
    }

    pub fn chars(&self) -> &[char] {
        &self.chars
    }

    pub fn char_of(&self, symbol: u8) -> char {
        self.chars[symbol as usize]
    }

    pub fn symbol_of(&self, ch: char) -> Option<u8> {
        self.chars.iter().position(|&c| c == ch).map(|i| i as u8)
    }

    pub fn min(&self) -> T {
        self.digits[0]
    }

    pub fn max(&self) -> T {
        self.digits[self.digits.len() - 1]
    }

    /// `a_{j+1} - a_j` for the digit with index `symbol`, if it is not the largest.
    pub fn gap_above(&self, symbol: u8) -> Option<T> {
        let j = symbol as usize;
        (j + 1 < self.digits.len()).then(|| self.digits[j + 1] - self.digits[j])
    }

    /// `a_j - a_{j-1}` for the digit with index `symbol`, if it is not the smallest.
    pub fn gap_below(&self, symbol: u8) -> Option<T> {
        let j = symbol as usize;
        (j > 0).then(|| self.digits[j] - self.digits[j - 1])
    }

    pub fn min_gap(&self) -> T {
        self.digits
            .windows(2)
            .map(|w| w[1] - w[0])
            .fold(T::infinity(), T::min)
    }

    pub fn max_gap(&self) -> T {
        self.digits
            .windows(2)
            .map(|w| w[1] - w[0])
            .fold(T::zero(), T::max)
    }

    /// Above this base every sequence is a unique expansion:
    /// `1 + (a_J - a_1) / min gap`.
    pub fn saturation_base(&self) -> T {
        T::one() + (self.max() - self.min()) / self.min_gap()
    }

    /// Up to this base the digit-gap conditions characterise uniqueness
    /// exactly: `R_A = 1 + (a_J - a_1) / max gap`.
    pub fn iff_threshold(&self) -> T {
        T::one() + (self.max() - self.min()) / self.max_gap()
    }

    /// `Some(m)` when this is the alphabet `{0, 1, m}` built by [`Alphabet::ternary`].
    pub fn ternary_m(&self) -> Option<T> {
        (self.chars == ['0', '1', 'm'] && self.digits[0] == T::zero() && self.digits[1] == T::one())
            .then(|| self.digits[2])
    }

    fn check_symbols(&self, symbols: &[u8]) -> Result<(), SeqError> {
        match symbols.iter().find(|&&s| s as usize >= self.digits.len()) {
            Some(&symbol) => Err(SeqError::SymbolOutOfRange {
                symbol,
                len: self.digits.len(),
            }),
            None => Ok(()),
        }
    }
}

/// A finite word of symbol indices.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word(Vec<u8>);

impl Word {
    pub fn new(symbols: Vec<u8>) -> Self {
        Word(symbols)
    }

    /// Reads a word over `{0, 1, m}` written with the characters `0`, `1`, `m`.
    pub fn parse_ternary(text: &str) -> Result<Self, ParseError> {
        text.char_indices()
            .map(|(offset, ch)| match ch {
                '0' => Ok(ZERO),
                '1' => Ok(ONE),
                'm' => Ok(M),
                _ => Err(ParseError::UnknownDigit { offset, ch }),
            })
            .collect::<Result<Vec<_>, _>>()
            .map(Word)
    }

    pub fn symbols(&self) -> &[u8] {
        &self.0
    }

    pub fn into_symbols(self) -> Vec<u8> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains_factor(&self, factor: &Word) -> bool {
        factor.is_empty() || self.0.windows(factor.len()).any(|w| w == factor.symbols())
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut symbols = self.0.clone();
        symbols.extend_from_slice(&other.0);
        Word(symbols)
    }

    /// Renders with the ternary characters `0`, `1`, `m`.
    pub fn to_ternary_string(&self) -> String {
        self.0
            .iter()
            .map(|&s| match s {
                ZERO => '0',
                ONE => '1',
                M => 'm',
                _ => '?',
            })
            .collect()
    }
}

impl From<Vec<u8>> for Word {
    fn from(symbols: Vec<u8>) -> Self {
        Word(symbols)
    }
}

/// An eventually periodic sequence `u v v v ...` (written `u v^∞`).
///
/// Always canonical: the period is primitive and the last preperiod symbol
/// differs from the last period symbol, so structural equality is equality
/// of infinite sequences.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct EPSeq {
    pre: Vec<u8>,
    per: Vec<u8>,
}

impl EPSeq {
    pub fn new(preperiod: Word, period: Word) -> Result<Self, SeqError> {
        Self::from_symbols(preperiod.0, period.0)
    }

    pub fn from_symbols(pre: Vec<u8>, per: Vec<u8>) -> Result<Self, SeqError> {
        if per.is_empty() {
            return Err(SeqError::EmptyPeriod);
        }
        let mut seq = EPSeq { pre, per };
        seq.canonicalize();
        Ok(seq)
    }

    /// The constant sequence `s^∞`.
    pub fn constant(symbol: u8) -> Self {
        EPSeq {
            pre: Vec::new(),
            per: vec![symbol],
        }
    }

    fn canonicalize(&mut self) {
        let len = self.per.len();
        let primitive = (1..=len)
            .filter(|d| len % d == 0)
            .find(|&d| (d..len).all(|i| self.per[i] == self.per[i - d]))
            .unwrap_or(len);
        self.per.truncate(primitive);
        while let (Some(&a), Some(&b)) = (self.pre.last(), self.per.last()) {
            if a != b {
                break;
            }
            self.pre.pop();
            self.per.rotate_right(1);
        }
    }

    pub fn preperiod(&self) -> &[u8] {
        &self.pre
    }

    pub fn period(&self) -> &[u8] {
        &self.per
    }

    /// Symbol at 0-based position `i`.
    pub fn symbol_at(&self, i: usize) -> u8 {
        if i < self.pre.len() {
            self.pre[i]
        } else {
            self.per[(i - self.pre.len()) % self.per.len()]
        }
    }

    pub fn prefix(&self, n: usize) -> Vec<u8> {
        (0..n).map(|i| self.symbol_at(i)).collect()
    }

    /// Number of positions after which every tail has already been seen.
    pub fn distinct_tails(&self) -> usize {
        self.pre.len() + self.per.len()
    }

    pub fn contains_symbol(&self, symbol: u8) -> bool {
        self.pre.contains(&symbol) || self.per.contains(&symbol)
    }

    /// The tail `(c_{n+i})_{i>=1}`.
    pub fn shift(&self, n: usize) -> EPSeq {
        if n <= self.pre.len() {
            let mut seq = EPSeq {
                pre: self.pre[n..].to_vec(),
                per: self.per.clone(),
            };
            seq.canonicalize();
            seq
        } else {
            let mut per = self.per.clone();
            per.rotate_left((n - self.pre.len()) % self.per.len());
            EPSeq {
                pre: Vec::new(),
                per,
            }
        }
    }

    /// `w` followed by this sequence.
    pub fn prepend(&self, word: &[u8]) -> EPSeq {
        let mut pre = word.to_vec();
        pre.extend_from_slice(&self.pre);
        let mut seq = EPSeq {
            pre,
            per: self.per.clone(),
        };
        seq.canonicalize();
        seq
    }

    /// Lexicographic comparison of the infinite sequences.
    pub fn lex_cmp(&self, other: &EPSeq) -> Ordering {
        lex_cmp(self, other)
    }

    pub fn validate<T: Real>(&self, alphabet: &Alphabet<T>) -> Result<(), SeqError> {
        alphabet.check_symbols(&self.pre)?;
        alphabet.check_symbols(&self.per)
    }
}

/// Result of [`parse_seq`]: a finite word or an infinite eventually periodic sequence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Parsed {
    Word(Word),
    Seq(EPSeq),
}

impl Parsed {
    pub fn into_seq(self) -> Option<EPSeq> {
        match self {
            Parsed::Seq(s) => Some(s),
            Parsed::Word(_) => None,
        }
    }

    pub fn into_word(self) -> Option<Word> {
        match self {
            Parsed::Word(w) => Some(w),
            Parsed::Seq(_) => None,
        }
    }
}

struct Parser<'a, T> {
    text: &'a str,
    pos: usize,
    alphabet: &'a Alphabet<T>,
}

enum Postfix {
    Done(Vec<u8>),
    /// The item carried `^w`; the offset of the `^` is kept for errors.
    Omega(Vec<u8>, usize),
}

impl<T: Real> Parser<'_, T> {
    fn peek(&self) -> Option<char> {
        self.text[self.pos..].chars().next()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += c.len_utf8();
        Some(c)
    }

    fn syntax(&self, offset: usize, message: &str) -> ParseError {
        ParseError::Syntax {
            offset,
            message: message.to_string(),
        }
    }

    fn primary(&mut self) -> Result<Vec<u8>, ParseError> {
        let start = self.pos;
        match self.bump() {
            Some('(') => {
                let mut body = Vec::new();
                loop {
                    match self.peek() {
                        Some(')') => {
                            self.bump();
                            break;
                        }
                        None => return Err(self.syntax(self.pos, "unclosed '('")),
                        Some(_) => match self.item()? {
                            Postfix::Done(symbols) => extend_checked(&mut body, &symbols)?,
                            Postfix::Omega(_, offset) => {
                                return Err(ParseError::OmegaNotFinal { offset })
                            }
                        },
                    }
                }
                if body.is_empty() {
                    if self.text[self.pos..].starts_with("^w") {
                        return Err(ParseError::EmptyPeriod { offset: start });
                    }
                    return Err(self.syntax(start, "empty group"));
                }
                Ok(body)
            }
            Some(ch @ (')' | '^')) => Err(self.syntax(start, &format!("unexpected {ch:?}"))),
            Some(ch) => self
                .alphabet
                .symbol_of(ch)
                .map(|s| vec![s])
                .ok_or(ParseError::UnknownDigit { offset: start, ch }),
            None => Err(self.syntax(start, "unexpected end of input")),
        }
    }

    fn item(&mut self) -> Result<Postfix, ParseError> {
        let mut symbols = self.primary()?;
        while self.peek() == Some('^') {
            let caret = self.pos;
            self.bump();
            if self.peek() == Some('w') {
                self.bump();
                if symbols.is_empty() {
                    return Err(ParseError::EmptyPeriod { offset: caret });
                }
                return Ok(Postfix::Omega(symbols, caret));
            }
            let digits_start = self.pos;
            while self.peek().is_some_and(|c| c.is_ascii_digit()) {
                self.bump();
            }
            let count: usize = self.text[digits_start..self.pos]
                .parse()
                .map_err(|_| self.syntax(digits_start, "expected a repetition count or 'w'"))?;
            if count == 0 {
                return Err(self.syntax(digits_start, "repetition count must be positive"));
            }
            if symbols.len().saturating_mul(count) > MAX_EXPANDED_LEN {
                return Err(ParseError::TooLong {
                    limit: MAX_EXPANDED_LEN,
                });
            }
            symbols = symbols.repeat(count);
        }
        Ok(Postfix::Done(symbols))
    }
}

fn extend_checked(target: &mut Vec<u8>, more: &[u8]) -> Result<(), ParseError> {
    if target.len() + more.len() > MAX_EXPANDED_LEN {
        return Err(ParseError::TooLong {
            limit: MAX_EXPANDED_LEN,
        });
    }
    target.extend_from_slice(more);
    Ok(())
}

/// Parses the sequence notation. A trailing `^w` yields an [`EPSeq`],
/// otherwise the text denotes a finite [`Word`].
pub fn parse_seq<T: Real>(text: &str, alphabet: &Alphabet<T>) -> Result<Parsed, ParseError> {
    let mut parser = Parser {
        text,
        pos: 0,
        alphabet,
    };
    let mut pre = Vec::new();
    while parser.peek().is_some() {
        match parser.item()? {
            Postfix::Done(symbols) => extend_checked(&mut pre, &symbols)?,
            Postfix::Omega(per, offset) => {
                if parser.peek().is_some() {
                    return Err(ParseError::OmegaNotFinal { offset });
                }
                let seq = EPSeq::from_symbols(pre, per)
                    .map_err(|_| ParseError::EmptyPeriod { offset })?;
                return Ok(Parsed::Seq(seq));
            }
        }
    }
    Ok(Parsed::Word(Word(pre)))
}

/// Parses text that must denote an infinite sequence (it must end in `^w`).
pub fn parse_infinite<T: Real>(text: &str, alphabet: &Alphabet<T>) -> Result<EPSeq, ParseError> {
    match parse_seq(text, alphabet)? {
        Parsed::Seq(seq) => Ok(seq),
        Parsed::Word(_) => Err(ParseError::Syntax {
            offset: text.len(),
            message: "expected an infinite sequence ending in '^w'".to_string(),
        }),
    }
}

pub fn format_word<T: Real>(word: &[u8], alphabet: &Alphabet<T>) -> String {
    word.iter().map(|&s| alphabet.char_of(s)).collect()
}

/// Renders a sequence in the notation accepted by [`parse_seq`].
pub fn format_seq<T: Real>(seq: &EPSeq, alphabet: &Alphabet<T>) -> String {
    let mut out = format_word(&seq.pre, alphabet);
    if seq.per.len() == 1 {
        out.push(alphabet.char_of(seq.per[0]));
    } else {
        out.push('(');
        out.push_str(&format_word(&seq.per, alphabet));
        out.push(')');
    }
    out.push_str("^w");
    out
}

impl fmt::Display for EPSeq {
    /// Ternary rendering (`0`, `1`, `m`).
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let pre = Word(self.pre.clone()).to_ternary_string();
        let per = Word(self.per.clone()).to_ternary_string();
        if self.per.len() == 1 {
            write!(f, "{pre}{per}^w")
        } else {
            write!(f, "{pre}({per})^w")
        }
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_ternary_string())
    }
}

pub fn lex_cmp(a: &EPSeq, b: &EPSeq) -> Ordering {
    let horizon = a.pre.len() + b.pre.len() + lcm(a.per.len(), b.per.len());
    (0..horizon)
        .map(|i| a.symbol_at(i).cmp(&b.symbol_at(i)))
        .find(|o| o.is_ne())
        .unwrap_or(Ordering::Equal)
}

pub fn shift(seq: &EPSeq, n: usize) -> EPSeq {
    seq.shift(n)
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn lcm(a: usize, b: usize) -> usize {
    a / gcd(a, b) * b
}

pub(crate) fn check_base<T: Real>(q: T) -> Result<(), SeqError> {
    if q > T::one() && q.is_finite() {
        Ok(())
    } else {
        Err(SeqError::BaseTooSmall(q.to_f64().unwrap_or(f64::NAN)))
    }
}

/// `Σ_{i<=|u|} u_i q^{-i} + q^{-|u|} (Σ_{j<=|v|} v_j q^{-j}) / (1 - q^{-|v|})`
/// with the digit values supplied by `value`.
pub(crate) fn closed_form<T: Real>(seq: &EPSeq, q: T, value: impl Fn(u8) -> T) -> T {
    let r = q.recip();
    let mut weight = T::one();
    let mut head = T::zero();
    for &s in &seq.pre {
        weight = weight * r;
        head = head + value(s) * weight;
    }
    let pre_weight = weight;
    let mut w = T::one();
    let mut period = T::zero();
    for &s in &seq.per {
        w = w * r;
        period = period + value(s) * w;
    }
    // 1 - q^{-L} without cancellation for q close to 1
    let len = T::from_usize(seq.per.len()).unwrap_or_else(T::one);
    let denom = -(-(len * q.ln())).exp_m1();
    head + pre_weight * period / denom
}

/// `π_q(c) = Σ c_i q^{-i}`, evaluated in closed form.
pub fn pi_eval<T: Real>(seq: &EPSeq, alphabet: &Alphabet<T>, q: T) -> Result<T, SeqError> {
    check_base(q)?;
    seq.validate(alphabet)?;
    Ok(closed_form(seq, q, |s| alphabet.digit(s)))
}

/// The first `n` terms of `π_q(c)`.
pub fn pi_eval_truncated<T: Real>(
    seq: &EPSeq,
    alphabet: &Alphabet<T>,
    q: T,
    n: usize,
) -> Result<T, SeqError> {
    check_base(q)?;
    seq.validate(alphabet)?;
    let r = q.recip();
    let mut weight = T::one();
    let mut sum = T::zero();
    for i in 0..n {
        weight = weight * r;
        sum = sum + alphabet.digit(seq.symbol_at(i)) * weight;
    }
    Ok(sum)
}

/// `π_q(m - c_i)` for a sequence over `{1, m}` (ternary symbol indices),
/// summed digitwise so that no digit outside the alphabet is formed.
pub fn pi_complement<T: Real>(seq: &EPSeq, m: T, q: T) -> Result<T, SeqError> {
    check_base(q)?;
    check_zero_free(seq)?;
    let m_minus_one = m - T::one();
    Ok(closed_form(seq, q, |s| if s == ONE { m_minus_one } else { T::zero() }))
}

/// `π_q(c)` for a sequence over `{1, m}` (ternary symbol indices).
pub fn pi_ternary<T: Real>(seq: &EPSeq, m: T, q: T) -> Result<T, SeqError> {
    check_base(q)?;
    check_zero_free(seq)?;
    Ok(closed_form(seq, q, |s| if s == ONE { T::one() } else { m }))
}

pub(crate) fn check_zero_free(seq: &EPSeq) -> Result<(), SeqError> {
    if seq.pre.iter().chain(&seq.per).all(|&s| s == ONE || s == M) {
        Ok(())
    } else {
        Err(SeqError::ZeroDigit)
    }
}

/// A computed value together with an absolute rounding-error bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Evaluated<T> {
    pub value: T,
    pub abs_err: T,
}

impl<T: Real> Evaluated<T> {
    /// Interval-aware `value < bound - margin`.
    pub fn surely_below(&self, bound: T, margin: T) -> bool {
        self.value + self.abs_err < bound - margin
    }
}

/// [`pi_eval`] with an a-priori bound on the accumulated rounding error.
pub fn pi_eval_bounded<T: Real>(
    seq: &EPSeq,
    alphabet: &Alphabet<T>,
    q: T,
) -> Result<Evaluated<T>, SeqError> {
    let value = pi_eval(seq, alphabet, q)?;
    let terms = T::from_usize(seq.distinct_tails() + 8).unwrap_or_else(T::one);
    let scale = alphabet.max().abs().max(alphabet.min().abs()) * q / (q - T::one());
    Ok(Evaluated {
        value,
        abs_err: T::lit(4.0) * terms * T::epsilon() * scale,
    })
}
