use proptest::prelude::*;

use ternary_univoque::seq::{self, Alphabet, EPSeq, Parsed, M, ONE};

fn ternary_seq() -> impl Strategy<Value = EPSeq> {
    (
        prop::collection::vec(0u8..3, 0..6),
        prop::collection::vec(0u8..3, 1..6),
    )
        .prop_map(|(pre, per)| EPSeq::from_symbols(pre, per).unwrap())
}

fn one_m_seq() -> impl Strategy<Value = EPSeq> {
    let sym = prop_oneof![Just(ONE), Just(M)];
    (
        prop::collection::vec(sym.clone(), 0..6),
        prop::collection::vec(sym, 1..6),
    )
        .prop_map(|(pre, per)| EPSeq::from_symbols(pre, per).unwrap())
}

/// Random text in the sequence notation: atoms, groups and repeat counts,
/// ending in an infinitely repeated item.
fn notation() -> impl Strategy<Value = String> {
    let atom = prop::sample::select(vec!["0", "1", "m"]);
    let item = (prop::collection::vec(atom, 1..4), 1u32..4, any::<bool>()).prop_map(|(atoms, count, group)| {
        let body = atoms.concat();
        let core = if group || atoms.len() > 1 { format!("({body})") } else { body };
        if count > 1 { format!("{core}^{count}") } else { core }
    });
    (prop::collection::vec(item.clone(), 0..3), item)
        .prop_map(|(head, tail)| format!("{}{tail}^w", head.concat()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn closed_form_matches_truncation(s in ternary_seq(), m in 2.0f64..5.0, q in 1.1f64..5.0) {
        let a = Alphabet::ternary(m).unwrap();
        let exact = seq::pi_eval(&s, &a, q).unwrap();
        let trunc = seq::pi_eval_truncated(&s, &a, q, 64).unwrap();
        let bound = m * q.powi(-64) / (q - 1.0) + 1e-12;
        prop_assert!((exact - trunc).abs() <= bound, "{exact} {trunc}");
    }

    #[test]
    fn lexicographic_order_is_monotone(a in one_m_seq(), b in one_m_seq(), m in 2.0f64..5.0, q in 2.001f64..5.0) {
        let (a, b) = match seq::lex_cmp(&a, &b) {
            std::cmp::Ordering::Less => (a, b),
            std::cmp::Ordering::Greater => (b, a),
            std::cmp::Ordering::Equal => return Ok(()),
        };
        let k = (0..).find(|&i| a.symbol_at(i) != b.symbol_at(i)).unwrap() as i32 + 1;
        // the first difference contributes at least this much
        let gap = (m - 1.0) * q.powi(-k) * (q - 2.0) / (q - 1.0);
        let pa = seq::pi_ternary(&a, m, q).unwrap();
        let pb = seq::pi_ternary(&b, m, q).unwrap();
        prop_assert!(pa <= pb);
        prop_assert!(pa < pb || gap < 1e-12 * (1.0 + pb));
    }

    #[test]
    fn shift_identity(s in ternary_seq(), m in 2.0f64..5.0, q in 1.1f64..5.0) {
        let a = Alphabet::ternary(m).unwrap();
        let whole = seq::pi_eval(&s, &a, q).unwrap();
        let tail = seq::pi_eval(&seq::shift(&s, 1), &a, q).unwrap();
        let first = a.digit(s.symbol_at(0));
        prop_assert!((whole - (first / q + tail / q)).abs() <= 1e-12 * (1.0 + whole));
    }

    #[test]
    fn format_round_trip(s in ternary_seq()) {
        let a = Alphabet::ternary(3.0).unwrap();
        let text = seq::format_seq(&s, &a);
        let back = seq::parse_infinite(&text, &a).unwrap();
        prop_assert_eq!(back, s);
    }

    #[test]
    fn notation_round_trip(text in notation()) {
        let a = Alphabet::ternary(2.5).unwrap();
        let parsed = match seq::parse_seq(&text, &a).unwrap() {
            Parsed::Seq(s) => s,
            Parsed::Word(w) => panic!("{text} parsed as word {w}"),
        };
        let again = seq::parse_infinite(&seq::format_seq(&parsed, &a), &a).unwrap();
        prop_assert_eq!(again, parsed);
    }

    #[test]
    fn complement_is_digitwise(s in one_m_seq(), m in 2.0f64..5.0, q in 1.1f64..5.0) {
        let direct = m / (q - 1.0) - seq::pi_ternary(&s, m, q).unwrap();
        let digitwise = seq::pi_complement(&s, m, q).unwrap();
        prop_assert!((direct - digitwise).abs() <= 1e-10 * (1.0 + m / (q - 1.0)));
    }

    #[test]
    fn f32_tracks_f64(s in ternary_seq(), m in 2.0f64..5.0, q in 1.5f64..5.0) {
        let wide = seq::pi_eval(&s, &Alphabet::ternary(m).unwrap(), q).unwrap();
        let narrow = seq::pi_eval(&s, &Alphabet::ternary(m as f32).unwrap(), q as f32).unwrap();
        prop_assert!((wide - narrow as f64).abs() <= 1e-4 * (1.0 + wide));
    }
}
