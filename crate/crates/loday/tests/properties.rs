//! Property tests for the algebraic substrate: formal-sum laws, sign
//! multiplicativity, lift/corestriction inversion, shift round-trips and
//! parser round-trips.

use loday::algebra::build_truncated_free;
use loday::coalgebra::{coproduct, CoalgebraFlavor, Coderivation};
use loday::multimap::{shift_conjugate, MultiMap, ShiftDirection};
use loday::perm::{koszul_parity_is_odd, perm_parity_is_odd, permutations, unshuffles};
use loday::sampling;
use loday::scalar::{self, Scalar};
use loday::space::{BasisSymbol, Elem, PairSum, Space, Word};
use loday::specfile::{parse_spec, same_content, serialize};
use proptest::prelude::*;
use std::collections::BTreeMap;

fn small_space() -> Space {
    Space::new(vec![
        BasisSymbol::plain("e1", 0),
        BasisSymbol::plain("e2", 1),
        BasisSymbol::plain("e3", 2),
        BasisSymbol::plain("e4", -1),
    ])
    .unwrap()
}

fn arb_elem() -> impl Strategy<Value = Elem> {
    // words of length <= 3 over four symbols with small coefficients
    let word = prop::collection::vec(0u32..4, 1..=3);
    prop::collection::vec((word, -4i64..=4), 0..6).prop_map(|terms| {
        let mut e = Elem::zero();
        for (letters, c) in terms {
            let w = Word::new(letters.into_iter().map(loday::space::SymbolId).collect());
            e.add_word(w, scalar::from_int(c));
        }
        e
    })
}

proptest! {
    // formal sums form a commutative monoid with distributive scaling
    #[test]
    fn elem_addition_laws(a in arb_elem(), b in arb_elem(), c in arb_elem(), k in -3i64..=3) {
        let mut ab = a.clone(); ab.add(&b);
        let mut ba = b.clone(); ba.add(&a);
        prop_assert_eq!(&ab, &ba);
        let mut ab_c = ab.clone(); ab_c.add(&c);
        let mut bc = b.clone(); bc.add(&c);
        let mut a_bc = a.clone(); a_bc.add(&bc);
        prop_assert_eq!(&ab_c, &a_bc);
        let mut with_zero = a.clone(); with_zero.add(&Elem::zero());
        prop_assert_eq!(&with_zero, &a);
        // k(a + b) = ka + kb
        let k = scalar::from_int(k);
        let lhs = ab.scaled(&k);
        let mut rhs = a.scaled(&k); rhs.add(&b.scaled(&k));
        prop_assert_eq!(lhs, rhs);
    }

    // adding then subtracting returns the canonical original: canonical
    // form is stable under round trips
    #[test]
    fn canonical_form_is_stable(a in arb_elem(), b in arb_elem()) {
        let mut x = a.clone();
        x.add(&b);
        x.sub(&b);
        prop_assert_eq!(x, a);
    }

    // the Koszul parity is multiplicative under composition of
    // permutations (degrees transported along the first factor)
    #[test]
    fn koszul_parity_multiplicative(
        n in 1usize..=5,
        seed_a in 0u64..1000,
        seed_b in 0u64..1000,
        degs in prop::collection::vec(-2i64..=3, 5),
    ) {
        let perms = permutations(n);
        let pa = &perms[(seed_a as usize) % perms.len()];
        let pb = &perms[(seed_b as usize) % perms.len()];
        // compose: first apply pb, then pa: out[i] = pb[pa[i]]
        let composed: Vec<usize> = pa.iter().map(|&i| pb[i]).collect();
        let degrees: Vec<i64> = degs[..n].to_vec();
        // degrees seen by pa are those of the pb-arranged letters
        let transported: Vec<i64> = (0..n).map(|i| degrees[pb[i]]).collect();
        let lhs = koszul_parity_is_odd(&degrees, &composed);
        let rhs = koszul_parity_is_odd(&degrees, pb) ^ koszul_parity_is_odd(&transported, pa);
        prop_assert_eq!(lhs, rhs);
        // and the plain permutation sign is multiplicative too
        let lhs_sgn = perm_parity_is_odd(&composed);
        let rhs_sgn = perm_parity_is_odd(pa) ^ perm_parity_is_odd(pb);
        prop_assert_eq!(lhs_sgn, rhs_sgn);
    }

    // corestriction inverts the lift for every flavor and arity <= 4
    #[test]
    fn corestrict_inverts_lift(seed in 0u64..500, arity in 1usize..=4, degree in -1i64..=2) {
        let sp = small_space();
        let mut rng = sampling::rng(seed);
        let f = sampling::random_multimap(&sp, arity, degree, &mut rng).unwrap();
        for flavor in [CoalgebraFlavor::Deconcatenation, CoalgebraFlavor::DualLoday] {
            let lifted = Coderivation::lift(&sp, f.clone(), flavor).unwrap();
            let parts = lifted.corestrict();
            if f.is_zero() {
                prop_assert!(parts.is_empty());
            } else {
                prop_assert_eq!(parts.len(), 1);
                prop_assert_eq!(parts.get(&arity), Some(&f));
            }
        }
    }

    // suspension and desuspension are mutually inverse on operations
    #[test]
    fn shift_round_trip(seed in 0u64..500, arity in 1usize..=4, degree in -1i64..=2) {
        let sp = small_space();
        let mut rng = sampling::rng(seed);
        let f = sampling::random_multimap(&sp, arity, degree, &mut rng).unwrap();
        let (up_space, up) = shift_conjugate(&sp, &f, ShiftDirection::Up).unwrap();
        let (_, back) = shift_conjugate(&up_space, &up, ShiftDirection::Down).unwrap();
        prop_assert_eq!(&back, &f);
        let (dn_space, dn) = shift_conjugate(&sp, &f, ShiftDirection::Down).unwrap();
        let (_, back2) = shift_conjugate(&dn_space, &dn, ShiftDirection::Up).unwrap();
        prop_assert_eq!(&back2, &f);
    }

    // unshuffle enumeration: binomial count, monotone blocks, and the
    // anti-Koszul sign relation
    #[test]
    fn unshuffle_enumeration(p in 0usize..=4, q in 0usize..=4, degs in prop::collection::vec(-2i64..=3, 8)) {
        fn binomial(n: usize, k: usize) -> usize {
            (1..=k).fold(1usize, |acc, i| acc * (n - k + i) / i)
        }
        let all = unshuffles(p, q);
        prop_assert_eq!(all.len(), binomial(p + q, p));
        let degrees = &degs[..p + q];
        for u in &all {
            prop_assert!(u.left_block().windows(2).all(|w| w[0] < w[1]));
            prop_assert!(u.right_block().windows(2).all(|w| w[0] < w[1]));
            let eps = loday::perm::koszul_sign(u, degrees).unwrap();
            let chi = loday::perm::anti_koszul_sign(u, degrees).unwrap();
            prop_assert_eq!(chi, eps * scalar::from_int(u.sgn()));
        }
    }
}

// The coalgebra co-identities, exact on words up to length 5.  The
// deconcatenation coproduct is strictly coassociative.  The unshuffle
// coproducts are not ((e,e,e) splits once on the left but twice on the
// right); they satisfy the co-Leibniz identity
// `(1 (x) Delta) Delta = (Delta (x) 1) Delta + (tau (x) 1)(Delta (x) 1) Delta`
// with the graded swap tau.  The regularized mixed coproduct satisfies the
// regularization of that identity: tracking letter positions, its iterated
// coproduct is the order-preserving part of the unregularized one, and the
// co-Leibniz identity holds after discarding the triples that scramble the
// associative letters.
#[test]
fn coproducts_satisfy_their_co_identities() {
    type Triple = BTreeMap<(Word, Word, Word), Scalar>;
    fn add(m: &mut Triple, k: (Word, Word, Word), c: Scalar) {
        use std::collections::btree_map::Entry;
        if num::Zero::is_zero(&c) {
            return;
        }
        match m.entry(k) {
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if num::Zero::is_zero(o.get()) {
                    o.remove();
                }
            }
            Entry::Vacant(v) => {
                v.insert(c);
            }
        }
    }
    fn iterate(
        space: &Space,
        word: &Word,
        flavor: CoalgebraFlavor,
        left: bool,
        swap: bool,
    ) -> Triple {
        let mut out = Triple::new();
        let first: PairSum = coproduct(space, word, flavor).unwrap();
        for ((u, v), c) in first.terms() {
            if left {
                for ((u1, u2), cc) in coproduct(space, u, flavor).unwrap().terms() {
                    if swap {
                        let sign = scalar::sign_pow(space.word_degree(u1) * space.word_degree(u2));
                        add(&mut out, (u2.clone(), u1.clone(), v.clone()), c * cc * sign);
                    } else {
                        add(&mut out, (u1.clone(), u2.clone(), v.clone()), c * cc);
                    }
                }
            } else {
                for ((v1, v2), cc) in coproduct(space, v, flavor).unwrap().terms() {
                    add(&mut out, (u.clone(), v1.clone(), v2.clone()), c * cc);
                }
            }
        }
        out
    }

    // strict coassociativity for deconcatenation
    let plain = small_space();
    for word in plain.words_up_to(5) {
        let lhs = iterate(&plain, &word, CoalgebraFlavor::Deconcatenation, true, false);
        let rhs = iterate(
            &plain,
            &word,
            CoalgebraFlavor::Deconcatenation,
            false,
            false,
        );
        assert_eq!(lhs, rhs, "deconcatenation at {}", plain.render_word(&word));
    }

    // co-Leibniz for the unshuffle flavors
    let pair = Space::new(vec![
        BasisSymbol::in_component("x1", 1, loday::space::Component::LodayPart),
        BasisSymbol::in_component("x2", 0, loday::space::Component::LodayPart),
        BasisSymbol::in_component("a1", 1, loday::space::Component::AssocPart),
        BasisSymbol::in_component("a2", 2, loday::space::Component::AssocPart),
    ])
    .unwrap();
    for (space, flavor) in [
        (&plain, CoalgebraFlavor::DualLoday),
        (&pair, CoalgebraFlavor::MixedUnregularized),
    ] {
        for word in space.words_up_to(5) {
            let mut rhs = iterate(space, &word, flavor, true, false);
            for (k, c) in iterate(space, &word, flavor, true, true) {
                add(&mut rhs, k, c);
            }
            let lhs = iterate(space, &word, flavor, false, false);
            assert_eq!(
                lhs,
                rhs,
                "flavor {flavor:?} at {}",
                space.render_word(&word)
            );
        }
    }

    // the regularized mixed flavor: work over a position-tagged copy of the
    // word so the original order of associative letters stays observable
    for letters in pair.words_up_to(4).iter().map(|w| w.letters().to_vec()) {
        let tagged = Space::new(
            letters
                .iter()
                .enumerate()
                .map(|(i, &s)| {
                    BasisSymbol::in_component(format!("p{i}"), pair.degree(s), pair.component(s))
                })
                .collect(),
        )
        .unwrap();
        let word = Word::new(
            (0..letters.len() as u32)
                .map(loday::space::SymbolId)
                .collect(),
        );
        let order_ok = |t: &(Word, Word, Word)| -> bool {
            let mut last = None;
            for w in [&t.0, &t.1, &t.2] {
                for &s in w.letters() {
                    if tagged.component(s) == loday::space::Component::AssocPart {
                        if let Some(prev) = last {
                            if s.0 < prev {
                                return false;
                            }
                        }
                        last = Some(s.0);
                    }
                }
            }
            true
        };
        let reg = |m: Triple| -> Triple { m.into_iter().filter(|(k, _)| order_ok(k)).collect() };
        // iterated regularized = regularization of iterated unregularized
        for left in [true, false] {
            let reg_iter = iterate(
                &tagged,
                &word,
                CoalgebraFlavor::MixedRegularized,
                left,
                false,
            );
            let unreg_iter = iterate(
                &tagged,
                &word,
                CoalgebraFlavor::MixedUnregularized,
                left,
                false,
            );
            assert_eq!(
                reg_iter,
                reg(unreg_iter),
                "regularized iteration at {}",
                tagged.render_word(&word)
            );
        }
        // regularized co-Leibniz
        let lhs = iterate(
            &tagged,
            &word,
            CoalgebraFlavor::MixedRegularized,
            false,
            false,
        );
        let mut rhs = iterate(
            &tagged,
            &word,
            CoalgebraFlavor::MixedRegularized,
            true,
            false,
        );
        for (k, c) in reg(iterate(
            &tagged,
            &word,
            CoalgebraFlavor::MixedUnregularized,
            true,
            true,
        )) {
            add(&mut rhs, k, c);
        }
        assert_eq!(
            lhs,
            rhs,
            "regularized co-Leibniz at {}",
            tagged.render_word(&word)
        );
    }
}

// parse . serialize . parse = parse on every bundled sample
#[test]
fn sample_files_round_trip() {
    let dir = format!("{}/../../samples", env!("CARGO_MANIFEST_DIR"));
    let mut seen = 0;
    for entry in std::fs::read_dir(&dir).unwrap() {
        let path = entry.unwrap().path();
        if path.extension().and_then(|e| e.to_str()) != Some("alg") {
            continue;
        }
        seen += 1;
        let text = std::fs::read_to_string(&path).unwrap();
        let first = parse_spec(&text).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
        let canonical = serialize(&first);
        let second = parse_spec(&canonical)
            .unwrap_or_else(|e| panic!("{} (canonical): {e}", path.display()));
        assert!(
            same_content(&first, &second),
            "{} does not round-trip",
            path.display()
        );
        assert_eq!(
            canonical,
            serialize(&second),
            "canonical form is not a fixed point"
        );
    }
    assert!(seen >= 6, "expected the bundled samples, found {seen}");
}

// inner derivations of truncated free algebras never lower the weight;
// this is the fact that justifies the weight-bounded enumeration
#[test]
fn adjoint_derivations_are_weight_monotone() {
    let alg = build_truncated_free(&[("g1".into(), 1), ("g2".into(), 0)], 4).unwrap();
    let sp = alg.space();
    let mut rng = sampling::rng(77);
    for _ in 0..10 {
        let d = sampling::random_inner_derivation(&alg, &mut rng).unwrap();
        for (id, _) in sp.symbols() {
            let w_in = sp.weight(id).unwrap();
            for (w, _) in d.apply(id).terms() {
                assert!(sp.weight(w.letters()[0]).unwrap() >= w_in);
            }
        }
    }
}

// a multimap value whose weight drops is rejected at construction
#[test]
fn weight_violations_are_rejected() {
    let alg = build_truncated_free(&[("g1".into(), 0), ("g2".into(), 1)], 3).unwrap();
    let sp = alg.space();
    let heavy = sp.id("g1\u{b7}g1").unwrap();
    let light = sp.id("g2").unwrap();
    let mut values = BTreeMap::new();
    values.insert(vec![heavy], Elem::from_symbol(light));
    assert!(MultiMap::new(sp, 1, 1, values).is_err());
}
