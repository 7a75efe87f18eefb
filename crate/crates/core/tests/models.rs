mod common;

use common::{OBall, OGroup, ALL_SPECS};
use proptest::prelude::*;
use spherescope::{build_ball, parse_presentation, relator_holds, Element, GroupModel, LetterMap};

fn model(spec: &str) -> GroupModel {
    GroupModel::from_spec(spec).unwrap()
}

#[test]
fn heisenberg_commutator_is_the_central_generator() {
    let m = model("heisenberg:xyz");
    let g = m.trace(&m.identity(), m.parse_word("x y x^-1 y^-1").unwrap());
    let z = m.apply_generator(&m.identity(), m.generator_by_name("z").unwrap());
    assert_eq!(m.key(&g), m.key(&z));

    let o = OGroup::for_spec("heisenberg:xyz");
    assert_eq!(o.trace(&[0, 2, 1, 3]), o.generator(4));
}

#[test]
fn heisenberg_relators_hold_in_the_matrix_group() {
    let p = parse_presentation("<x,y,z | x y x^-1 y^-1 z^-1, x z x^-1 z^-1, y z y^-1 z^-1>")
        .unwrap();
    let m = model("heisenberg:xyz");
    let map = LetterMap::by_name(&m, &p).unwrap();
    let o = OGroup::for_spec("heisenberg:xyz");
    for w in &p.relators {
        assert!(relator_holds(&m, &map, w).unwrap());
        let word = map.translate(&m, w).unwrap();
        assert_eq!(o.trace(&word), o.identity());
    }
}

#[test]
fn lamplighter_lights_two_lamps() {
    let m = model("lamplighter2");
    let g = m.trace(&m.identity(), m.parse_word("a t a t^-1").unwrap());
    let want = Element::Wreath {
        lamps: [([0, 0], 1), ([1, 0], 1)].into_iter().collect(),
        head: [0, 0],
    };
    assert_eq!(g, want);
    assert_eq!(m.multiply(&g, &g), m.identity());
    assert_eq!(m.invert(&g), g);
}

/// Library arithmetic agrees with the oracle on every element of `B_6`,
/// mapped across through BFS words.
#[test]
fn words_agree_with_oracle_arithmetic() {
    for spec in ALL_SPECS {
        let m = model(spec);
        let o = OBall::new(OGroup::for_spec(spec), 5);
        let lib = build_ball(&m, 5).unwrap();
        assert_eq!(lib.len(), o.len(), "{spec}");
        let mut seen = std::collections::HashSet::new();
        for (i, w) in o.word.iter().enumerate() {
            let g = m.trace(&m.identity(), w.iter().copied());
            let v = lib.lookup(&g).expect("oracle element is in the ball");
            assert_eq!(lib.length(v), o.length[i], "{spec} {w:?}");
            assert!(seen.insert(v), "{spec}: two oracle elements collide");
        }
    }
}

fn random_word(count: usize) -> impl Strategy<Value = Vec<usize>> {
    prop::collection::vec(0..count, 0..=8)
}

fn spec_strategy() -> impl Strategy<Value = &'static str> {
    prop::sample::select(ALL_SPECS.to_vec())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn multiplication_is_associative(
        spec in spec_strategy(),
        seeds in (random_word(5), random_word(5), random_word(5)),
    ) {
        let m = model(spec);
        let k = m.generator_count();
        let elem = |w: &[usize]| m.trace(&m.identity(), w.iter().map(|&i| i % k));
        let (g, h, f) = (elem(&seeds.0), elem(&seeds.1), elem(&seeds.2));
        prop_assert_eq!(
            m.multiply(&m.multiply(&g, &h), &f),
            m.multiply(&g, &m.multiply(&h, &f))
        );
    }

    #[test]
    fn keys_round_trip_and_inverses_cancel(spec in spec_strategy(), w in random_word(6)) {
        let m = model(spec);
        let k = m.generator_count();
        let g = m.trace(&m.identity(), w.iter().map(|&i| i % k));
        prop_assert_eq!(m.decode_key(&m.key(&g)).unwrap(), g.clone());
        prop_assert_eq!(m.multiply(&g, &m.invert(&g)), m.identity());
        let back = m.trace(&m.identity(), m.word_for(&g));
        prop_assert_eq!(back, g);
    }

    #[test]
    fn library_matches_oracle_on_random_words(spec in spec_strategy(), w in random_word(6)) {
        let m = model(spec);
        let o = OGroup::for_spec(spec);
        let k = m.generator_count();
        let w: Vec<usize> = w.iter().map(|&i| i % k).collect();
        let g = m.trace(&m.identity(), w.iter().copied());
        // equal elements in one model are equal in the other
        let h = m.trace(&m.identity(), m.word_for(&g));
        prop_assert_eq!(o.trace(&w), o.trace(&m.word_for(&h)));
    }
}

#[test]
fn distinct_oracle_elements_have_distinct_keys() {
    for spec in ALL_SPECS {
        let m = model(spec);
        let o = OBall::new(OGroup::for_spec(spec), 4);
        let keys: std::collections::HashSet<_> = o
            .word
            .iter()
            .map(|w| m.key(&m.trace(&m.identity(), w.iter().copied())))
            .collect();
        assert_eq!(keys.len(), o.len(), "{spec}");
    }
}
