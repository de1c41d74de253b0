//! Unique expansions in non-integer bases over `{0, 1, m}`.
//!
//! * [`seq`]: alphabets, eventually periodic sequences, the `^w` notation
//!   and closed-form evaluation of `π_q(c) = Σ c_i q^{-i}`.
//! * [`univoque`]: uniqueness verdicts, forbidden blocks and certificates
//!   for block families.
//! * [`critical`]: the curves `P_m`, `R_m`, `p_m`, `r_m`, interval constants
//!   and a sign-identity self-check.
//! * [`subshift`]: automata for sequences avoiding a finite set of words and
//!   their growth classification.
//!
//! The numeric code is generic over [`Real`] (`f32` or `f64`); the aliases
//! below fix it to `f64`.

pub mod critical;
pub mod real;
pub mod seq;
pub mod subshift;
pub mod univoque;

pub use critical::{
    appendix_sign_suite, appendix_sign_suite_on_domains, appendix_sign_suite_with, branch_of,
    p_bound, p_of_m, r_bound, r_of_m, solve_pi_root, Branch, CriticalError, Identity, RootForm,
};
pub use real::Real;
pub use seq::{
    format_seq, lex_cmp, parse_infinite, parse_seq, pi_complement, pi_eval, pi_eval_truncated,
    shift, EPSeq, ParseError, Parsed, SeqError, Word,
};
pub use subshift::{
    build_safety_automaton, classify_growth, count_words, export_dot, Automaton, GrowthClass,
    GrowthKind, SubshiftError,
};
pub use univoque::{
    certify_family, check_univoque_general, check_v_membership, is_forbidden_block,
    scan_forbidden, Condition, FamilySpec, UnivoqueError, VerdictKind,
};

pub type Alphabet = seq::Alphabet<f64>;
pub type Verdict = univoque::Verdict<f64>;
pub type Witness = univoque::Witness<f64>;
pub type Certificate = univoque::Certificate<f64>;
pub type Margin = univoque::Margin<f64>;
pub type Constants = critical::Constants<f64>;
pub type SuiteReport = critical::SuiteReport<f64>;

/// Growth rate of an automaton's language in `f64`.
pub fn growth_rate(a: &Automaton) -> f64 {
    subshift::growth_rate::<f64>(a)
}
