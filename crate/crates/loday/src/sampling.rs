//! Seeded random instances for the test corpus.
//!
//! Everything here is deterministic for a fixed seed, so the property and
//! acceptance suites are reproducible run to run.

use crate::algebra::{inner_derivation, AlgebraSpec, Derivation};
use crate::multimap::MultiMap;
use crate::scalar::{self, Scalar};
use crate::space::{Component, Elem, Space, SymbolId};
use crate::Result;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeMap;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn small_coeff(rng: &mut ChaCha8Rng) -> Scalar {
    scalar::from_int(*[-2i64, -1, 1, 2].choose(rng).expect("nonempty"))
}

/// A random homogeneous multimap of the given arity and degree: on each
/// valid basis tuple, a sparse combination of the output symbols allowed by
/// degree, component and (if present) weight.
pub fn random_multimap(
    space: &Space,
    arity: usize,
    degree: i64,
    rng: &mut ChaCha8Rng,
) -> Result<MultiMap> {
    let mut values = BTreeMap::new();
    for tuple in space.tuples(arity) {
        let out_degree = space.tuple_degree(&tuple) + degree;
        let wants_assoc = space.is_pair()
            && tuple
                .iter()
                .any(|&s| space.component(s) == Component::AssocPart);
        let in_weight = space.tuple_weight(&tuple);
        let mut val = Elem::zero();
        for (id, sym) in space.symbols() {
            if sym.degree != out_degree {
                continue;
            }
            if space.is_pair() {
                let want = if wants_assoc {
                    Component::AssocPart
                } else {
                    Component::LodayPart
                };
                if sym.component != want {
                    continue;
                }
            }
            if let Some(w) = in_weight {
                if space.weight(id).expect("weighted") < w {
                    continue;
                }
            }
            if rng.gen_bool(0.5) {
                val.add_word(crate::space::Word::single(id), small_coeff(rng));
            }
        }
        if !val.is_zero() {
            values.insert(tuple, val);
        }
    }
    MultiMap::new(space, arity, degree, values)
}

/// A random homogeneous element of the given degree (zero if no basis
/// symbol has that degree).
pub fn random_homogeneous_elem(space: &Space, degree: i64, rng: &mut ChaCha8Rng) -> Elem {
    let mut out = Elem::zero();
    for (id, sym) in space.symbols() {
        if sym.degree == degree && rng.gen_bool(0.4) {
            out.add_word(crate::space::Word::single(id), small_coeff(rng));
        }
    }
    out
}

/// A random adjoint derivation by a homogeneous element of some degree
/// present in the basis; for pairs, the element is drawn from the Loday part.
pub fn random_inner_derivation(spec: &AlgebraSpec, rng: &mut ChaCha8Rng) -> Result<Derivation> {
    let space = spec.space();
    let mut degrees: Vec<i64> = space
        .symbols()
        .filter(|(_, s)| !space.is_pair() || s.component == Component::LodayPart)
        .map(|(_, s)| s.degree)
        .collect();
    degrees.sort();
    degrees.dedup();
    for _ in 0..16 {
        let degree = *degrees.choose(rng).expect("nonempty basis");
        let mut xi = Elem::zero();
        for (id, sym) in space.symbols() {
            if sym.degree != degree {
                continue;
            }
            if space.is_pair() && sym.component != Component::LodayPart {
                continue;
            }
            if rng.gen_bool(0.4) {
                xi.add_word(crate::space::Word::single(id), small_coeff(rng));
            }
        }
        if xi.is_zero() {
            continue;
        }
        let d = inner_derivation(spec, &xi)?;
        if !d.is_zero() {
            return Ok(d);
        }
    }
    Ok(Derivation::zero(0))
}

/// A random adjoint derivation of degree exactly `degree`; `None` when no
/// nonzero one shows up.
pub fn random_inner_derivation_of_degree(
    spec: &AlgebraSpec,
    degree: i64,
    rng: &mut ChaCha8Rng,
) -> Result<Option<Derivation>> {
    let space = spec.space();
    for _ in 0..24 {
        let mut xi = Elem::zero();
        for (id, sym) in space.symbols() {
            if sym.degree != degree {
                continue;
            }
            if space.is_pair() && sym.component != Component::LodayPart {
                continue;
            }
            if rng.gen_bool(0.4) {
                xi.add_word(crate::space::Word::single(id), small_coeff(rng));
            }
        }
        if xi.is_zero() {
            continue;
        }
        let d = inner_derivation(spec, &xi)?;
        if !d.is_zero() {
            return Ok(Some(d));
        }
    }
    Ok(None)
}

/// The degree-0 derivation scaling each occurrence of one generator:
/// `D(w) = (number of occurrences of g in w) * w` on the word basis.
pub fn scaling_derivation(spec: &AlgebraSpec, generator: SymbolId) -> Result<Derivation> {
    let mut gv = BTreeMap::new();
    gv.insert(generator, Elem::from_symbol(generator));
    Derivation::from_generator_values(spec, 0, &gv)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::build_truncated_free;

    #[test]
    fn sampling_is_deterministic_per_seed() {
        let alg = build_truncated_free(&[("g1".into(), 1), ("g2".into(), 0)], 3).unwrap();
        let a = random_multimap(alg.space(), 2, 0, &mut rng(7)).unwrap();
        let b = random_multimap(alg.space(), 2, 0, &mut rng(7)).unwrap();
        assert_eq!(a, b);
        let c = random_multimap(alg.space(), 2, 0, &mut rng(8)).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn scaling_derivation_counts_occurrences() {
        let alg = build_truncated_free(&[("g1".into(), 1), ("g2".into(), 0)], 3).unwrap();
        let sp = alg.space();
        let d = scaling_derivation(&alg, sp.id("g1").unwrap()).unwrap();
        let w = sp.id("g1\u{b7}g2\u{b7}g1").unwrap();
        assert_eq!(
            d.apply(w),
            Elem::from_word(crate::space::Word::single(w), scalar::from_int(2))
        );
        let v = sp.id("g2\u{b7}g2").unwrap();
        assert!(d.apply(v).is_zero());
    }
}
