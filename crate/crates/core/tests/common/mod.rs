#![allow(dead_code)]

use std::collections::HashMap;

use ternary_univoque::seq::{M, ONE};
use ternary_univoque::Word;

pub const SEVEN: [&str; 7] = ["111", "1mmm", "11m11", "11m1m1", "1mm1mm", "11m1mm1", "1mm1m1m"];
pub const EIGHTH: &str = "1mm1m11mm1";

pub fn words(list: &[&str]) -> Vec<Word> {
    list.iter().map(|w| Word::parse_ternary(w).unwrap()).collect()
}

pub fn seven() -> Vec<Word> {
    words(&SEVEN)
}

pub fn eight() -> Vec<Word> {
    let mut v = seven();
    v.extend(words(&[EIGHTH]));
    v
}

/// Nine-state diagram for the seven words, states A..I with A the start.
/// Each row is (on 1, on m).
pub fn figure_seven_words() -> Vec<[Option<usize>; 2]> {
    const A: usize = 0;
    const B: usize = 1;
    const C: usize = 2;
    const D: usize = 3;
    const E: usize = 4;
    const F: usize = 5;
    const G: usize = 6;
    const H: usize = 7;
    const I: usize = 8;
    vec![
        [Some(B), Some(A)],
        [Some(C), Some(D)],
        [None, Some(G)],
        [Some(B), Some(E)],
        [Some(F), None],
        [Some(C), Some(H)],
        [None, Some(E)],
        [Some(I), None],
        [Some(C), None],
    ]
}

/// Seven-state diagram for the eight words: the nine-state one without
/// H and I, and without the m-edge out of F.
pub fn figure_eight_words() -> Vec<[Option<usize>; 2]> {
    let mut t = figure_seven_words();
    t.truncate(7);
    t[5][1] = None;
    t
}

fn has_suffix_factor(buf: &[u8], forbidden: &[Vec<u8>]) -> bool {
    forbidden.iter().any(|f| buf.ends_with(f))
}

/// Whether `buf` (already free of forbidden factors) extends by `k` more
/// symbols without creating one. Only the last `keep` symbols matter.
fn extends(buf: &mut Vec<u8>, k: usize, forbidden: &[Vec<u8>], keep: usize, memo: &mut HashMap<(Vec<u8>, usize), bool>) -> bool {
    if k == 0 {
        return true;
    }
    let key = (buf[buf.len().saturating_sub(keep)..].to_vec(), k);
    if let Some(&v) = memo.get(&key) {
        return v;
    }
    let mut ok = false;
    for sym in [ONE, M] {
        buf.push(sym);
        let good = !has_suffix_factor(buf, forbidden) && extends(buf, k - 1, forbidden, keep, memo);
        buf.pop();
        if good {
            ok = true;
            break;
        }
    }
    memo.insert(key, ok);
    ok
}

/// Exhaustive count of length-`n` words that avoid every forbidden factor
/// and continue to an infinite sequence that still avoids them. A
/// continuation of `1 + Σ|f|` symbols is enough, since a longer one must
/// revisit a state of the prefix automaton.
pub fn brute_count(forbidden: &[Word], n: usize) -> u128 {
    let f: Vec<Vec<u8>> = forbidden.iter().map(|w| w.symbols().to_vec()).collect();
    let horizon = 1 + f.iter().map(Vec::len).sum::<usize>();
    let keep = f.iter().map(Vec::len).max().unwrap_or(1);
    let mut memo = HashMap::new();
    let mut count = 0u128;
    for bits in 0u32..(1 << n) {
        let mut buf = Vec::with_capacity(n + horizon);
        let mut clean = true;
        for i in (0..n).rev() {
            buf.push(if bits >> i & 1 == 1 { M } else { ONE });
            if has_suffix_factor(&buf, &f) {
                clean = false;
                break;
            }
        }
        if clean && extends(&mut buf, horizon, &f, keep, &mut memo) {
            count += 1;
        }
    }
    count
}

/// Words of length `n` with no forbidden factor, ignoring extendability.
pub fn brute_count_avoiding(forbidden: &[Word], n: usize) -> u128 {
    (0u32..(1 << n))
        .filter(|bits| {
            let w = Word::new((0..n).rev().map(|i| if bits >> i & 1 == 1 { M } else { ONE }).collect());
            !forbidden.iter().any(|f| w.contains_factor(f))
        })
        .count() as u128
}
