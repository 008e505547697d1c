//! The derived higher operations and their packaging as strong homotopy
//! structures.
//!
//! For a derivation `D` of an algebra, the arity-`k` derived operator sends
//! `(o_1, ..., o_k)` to the left-nested product `[[...[[D o_1, o_2], o_3]...], o_k]`,
//! with `D` applied to the first slot only.  On an associative algebra this
//! is `(D o_1) * o_2 * ... * o_k`; on a Loday pair the nesting dispatches
//! through the bracket, the action and the product as the components of the
//! letters dictate (the input word keeps Loday letters first).
//!
//! Feeding in the coefficients `delta_0, ..., delta_T` of a square-zero
//! deformation produces the family `part_k := derived_operator(delta_{k-1}, k)`,
//! a degree `+1` coderivation family whose total square vanishes -- the
//! verification suites check exactly that.  All structures live on the
//! unsuspended side; the suspended-side operations with their alternating
//! sign tables are recovered through `shift_conjugate` and are cross-checked
//! against those tables in the tests, not trusted as input.

use crate::algebra::{AlgebraKind, AlgebraSpec, Deformation, Derivation};
use crate::coalgebra::{CoalgebraFlavor, Coderivation};
use crate::multimap::MultiMap;
use crate::scalar;
use crate::space::{BasisSymbol, Elem, Space, SymbolId, Word};
use crate::{Error, Result};
use std::collections::BTreeMap;

/// The arity-`k` derived operator of `D`: apply `D` to the first letter,
/// then multiply through from the left.  Materialized on the valid
/// (weight-bounded) basis tuples.
pub fn derived_operator(spec: &AlgebraSpec, d: &Derivation, arity: usize) -> Result<MultiMap> {
    if arity == 0 {
        return Err(Error::Arity {
            expected: 1,
            got: 0,
        });
    }
    let space = spec.space();
    let degree = d.degree();
    let mut values = BTreeMap::new();
    if !d.is_zero() {
        for tuple in space.tuples(arity) {
            let val = spec.nested_left(&d.apply(tuple[0]), &tuple[1..]);
            if !val.is_zero() {
                values.insert(tuple, val);
            }
        }
    }
    MultiMap::new(space, arity, degree, values)
}

/// An arity-indexed family of degree `+1` operations together with the
/// coalgebra flavor under which its total coderivation is meant to square
/// to zero.  Parts beyond `max_arity` are identically zero.
#[derive(Debug, Clone)]
pub struct ShStructure {
    coder: Coderivation,
    max_arity: usize,
}

impl ShStructure {
    pub fn from_parts(
        space: &Space,
        parts: Vec<MultiMap>,
        flavor: CoalgebraFlavor,
        max_arity: usize,
    ) -> Result<Self> {
        let coder = Coderivation::from_parts(space, parts, flavor, 1)?;
        Ok(ShStructure { coder, max_arity })
    }

    pub fn coder(&self) -> &Coderivation {
        &self.coder
    }

    pub fn flavor(&self) -> CoalgebraFlavor {
        self.coder.flavor()
    }

    pub fn part(&self, arity: usize) -> Option<&MultiMap> {
        self.coder.part(arity)
    }

    pub fn parts(&self) -> &BTreeMap<usize, MultiMap> {
        self.coder.corestrict()
    }

    pub fn max_arity(&self) -> usize {
        self.max_arity
    }
}

fn derived_structure(
    spec: &AlgebraSpec,
    def: &Deformation,
    flavor: CoalgebraFlavor,
) -> Result<ShStructure> {
    let mut parts = Vec::new();
    for (i, delta) in def.deltas().iter().enumerate() {
        if delta.is_zero() {
            continue;
        }
        if delta.degree() != 1 {
            return Err(Error::Degree(format!("delta_{i} must have degree 1")));
        }
        parts.push(derived_operator(spec, delta, i + 1)?);
    }
    ShStructure::from_parts(spec.space(), parts, flavor, def.t_order() + 1)
}

/// The derived products of a deformation on an associative algebra, as a
/// deconcatenation-flavored family `part_k = derived_operator(delta_{k-1}, k)`.
pub fn derived_product_structure(spec: &AlgebraSpec, def: &Deformation) -> Result<ShStructure> {
    if spec.kind() != AlgebraKind::Associative {
        return Err(Error::Invalid(
            "derived products need an associative algebra".into(),
        ));
    }
    derived_structure(spec, def, CoalgebraFlavor::Deconcatenation)
}

/// The derived brackets of a deformation on a Loday algebra, with the
/// dual-Loday flavor.
pub fn derived_loday_structure(spec: &AlgebraSpec, def: &Deformation) -> Result<ShStructure> {
    if spec.kind() != AlgebraKind::Loday {
        return Err(Error::Invalid(
            "derived Loday brackets need a Loday algebra".into(),
        ));
    }
    derived_structure(spec, def, CoalgebraFlavor::DualLoday)
}

/// The unified derived brackets of a deformation on a Loday pair, with the
/// regularized mixed flavor.  Restricted to pure Loday or pure associative
/// input these coincide with the two structures above.
pub fn derived_pair_structure(spec: &AlgebraSpec, def: &Deformation) -> Result<ShStructure> {
    if spec.kind() != AlgebraKind::LodayPair {
        return Err(Error::Invalid(
            "unified derived brackets need a Loday pair".into(),
        ));
    }
    derived_structure(spec, def, CoalgebraFlavor::MixedRegularized)
}

/// The binary derived multiplication on the suspended basis:
/// `(sa, sb) -> (-1)^{|a|} s (d(a) * b)`, a degree-0 product.  Constructing
/// the algebra runs the axiom check of the input's kind, so a successful
/// return *is* the verification that the derived multiplication satisfies
/// associativity (associative case), the Leibniz identity (Loday case), or
/// the pair axioms (pair case).
pub fn binary_derived_algebra(spec: &AlgebraSpec, d: &Derivation) -> Result<AlgebraSpec> {
    if d.degree() != 1 {
        return Err(Error::Degree(
            "binary derived multiplications need a degree +1 differential".into(),
        ));
    }
    let space = spec.space();
    let shifted = space.shifted(1);
    let mut values = BTreeMap::new();
    for pair in space.tuples(2) {
        let (a, b) = (pair[0], pair[1]);
        let val = spec.mul(&d.apply(a), &Elem::from_symbol(b));
        let val = val.scaled(&scalar::sign_pow(space.degree(a)));
        if !val.is_zero() {
            values.insert(pair, val);
        }
    }
    let product = MultiMap::new(&shifted, 2, 0, values)?;
    AlgebraSpec::new(shifted, spec.kind(), product)
}

/// The suspended-side view of a part: the operation on the shifted basis
/// recovered through the shift conjugation.
pub fn shifted_part(space: &Space, part: &MultiMap) -> Result<(Space, MultiMap)> {
    crate::multimap::shift_conjugate(space, part, crate::multimap::ShiftDirection::Up)
}

// ---------------------------------------------------------------------------
// component restrictions of a pair
// ---------------------------------------------------------------------------

/// One component of a Loday pair extracted as a standalone algebra, with
/// the symbol translation in both directions.
pub struct PairRestriction {
    pub algebra: AlgebraSpec,
    /// pair symbol -> sub symbol (None for the other component)
    pub to_sub: Vec<Option<SymbolId>>,
    /// sub symbol -> pair symbol
    pub from_sub: Vec<SymbolId>,
}

impl PairRestriction {
    pub fn map_tuple(&self, tuple: &[SymbolId]) -> Option<Vec<SymbolId>> {
        tuple.iter().map(|s| self.to_sub[s.index()]).collect()
    }

    pub fn map_elem_from_pair(&self, e: &Elem) -> Option<Elem> {
        let mut out = Elem::zero();
        for (w, c) in e.terms() {
            let letters: Option<Vec<SymbolId>> =
                w.letters().iter().map(|s| self.to_sub[s.index()]).collect();
            out.add_word(Word::new(letters?), c.clone());
        }
        Some(out)
    }

    /// Restricts a pair derivation to the component.
    pub fn restrict_derivation(&self, d: &Derivation) -> Result<Derivation> {
        let mut values = BTreeMap::new();
        for (i, &pair_id) in self.from_sub.iter().enumerate() {
            let val = self
                .map_elem_from_pair(&d.apply(pair_id))
                .ok_or_else(|| Error::Word("derivation does not preserve the component".into()))?;
            if !val.is_zero() {
                values.insert(vec![SymbolId(i as u32)], val);
            }
        }
        let map = MultiMap::new(self.algebra.space(), 1, d.degree(), values)?;
        Derivation::new(&self.algebra, map)
    }
}

/// Extracts the Loday part (as a Loday algebra) or the associative part (as
/// an associative algebra) of a pair.
pub fn pair_restriction(
    spec: &AlgebraSpec,
    component: crate::space::Component,
) -> Result<PairRestriction> {
    use crate::space::Component;
    if spec.kind() != AlgebraKind::LodayPair {
        return Err(Error::Invalid(
            "component restriction needs a Loday pair".into(),
        ));
    }
    if component == Component::Plain {
        return Err(Error::Invalid(
            "restrict to the Loday or the associative part".into(),
        ));
    }
    let space = spec.space();
    let mut to_sub = vec![None; space.len()];
    let mut from_sub = Vec::new();
    let mut symbols = Vec::new();
    let mut weights = Vec::new();
    for (id, s) in space.symbols() {
        if s.component == component {
            to_sub[id.index()] = Some(SymbolId(symbols.len() as u32));
            from_sub.push(id);
            symbols.push(BasisSymbol::plain(s.name.clone(), s.degree));
            if let Some(w) = space.weight(id) {
                weights.push(w);
            }
        }
    }
    let sub_space = if let Some(trunc) = space.truncation() {
        Space::with_weights(symbols, weights, trunc)?
    } else {
        Space::new(symbols)?
    };
    let mut values = BTreeMap::new();
    for (key, val) in spec.product().support() {
        if key.iter().all(|s| space.component(*s) == component) {
            let sub_key: Vec<SymbolId> = key
                .iter()
                .map(|s| to_sub[s.index()].expect("component symbol"))
                .collect();
            let mut sub_val = Elem::zero();
            for (w, c) in val.terms() {
                let letters: Vec<SymbolId> = w
                    .letters()
                    .iter()
                    .map(|s| to_sub[s.index()].expect("closed component"))
                    .collect();
                sub_val.add_word(Word::new(letters), c.clone());
            }
            values.insert(sub_key, sub_val);
        }
    }
    let product = MultiMap::new(&sub_space, 2, 0, values)?;
    let kind = if component == Component::LodayPart {
        AlgebraKind::Loday
    } else {
        AlgebraKind::Associative
    };
    let algebra = AlgebraSpec::new(sub_space, kind, product)?;
    Ok(PairRestriction {
        algebra,
        to_sub,
        from_sub,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{build_commutator_pair, build_truncated_free, inner_derivation};
    use crate::space::Component;

    fn gens2() -> Vec<(String, i64)> {
        vec![("g1".into(), 1), ("g2".into(), 0)]
    }

    #[test]
    fn arity_one_operator_is_the_derivation() {
        let alg = build_truncated_free(&gens2(), 3).unwrap();
        let d = inner_derivation(&alg, &Elem::from_symbol(alg.space().id("g1").unwrap())).unwrap();
        let m1 = derived_operator(&alg, &d, 1).unwrap();
        assert_eq!(&m1, d.map());
        let zero = derived_operator(&alg, &Derivation::zero(1), 3).unwrap();
        assert!(zero.is_zero());
    }

    #[test]
    fn arity_two_operator_matches_direct_expansion() {
        let alg = build_truncated_free(&gens2(), 3).unwrap();
        let sp = alg.space();
        let g1 = sp.id("g1").unwrap();
        let g2 = sp.id("g2").unwrap();
        let d = inner_derivation(&alg, &Elem::from_symbol(g1)).unwrap();
        let m2 = derived_operator(&alg, &d, 2).unwrap();
        // D g1 = g1*g1 - (-1)^{|g1||g1|} g1*g1 = 2 g1g1, then times g2
        let expected = alg.mul(&d.apply(g1), &Elem::from_symbol(g2));
        assert_eq!(m2.eval(&[g1, g2]), expected);
        assert!(!expected.is_zero());
    }

    #[test]
    fn pure_assoc_input_of_pair_operator_reduces_to_product_operator() {
        let pair = build_commutator_pair(&gens2(), 3).unwrap();
        let sp = pair.space();
        let x = sp.id("g1").unwrap();
        let d = inner_derivation(&pair, &Elem::from_symbol(x)).unwrap();
        let n2 = derived_operator(&pair, &d, 2).unwrap();
        // on a pure associative tuple the nesting is (D a1) * a2
        let a1 = sp.id("g2'").unwrap();
        let a2 = sp.id("g1'").unwrap();
        let expected = pair.mul(&d.apply(a1), &Elem::from_symbol(a2));
        assert_eq!(n2.eval(&[a1, a2]), expected);
        // and on the mixed tuple (x, a) it is [D x, a]
        let got = n2.eval(&[x, a1]);
        let expected_mixed = pair.mul(&d.apply(x), &Elem::from_symbol(a1));
        assert_eq!(got, expected_mixed);
    }

    #[test]
    fn suspended_binary_part_carries_the_expected_sign() {
        // part_2(a,b) = (delta a) * b upstairs becomes
        // m_2(sa, sb) = (-1)^{|a|} s((delta a) * b)
        let alg = build_truncated_free(&gens2(), 4).unwrap();
        let sp = alg.space();
        let xi = Elem::from_symbol(sp.id("g1\u{b7}g2").unwrap());
        let d = inner_derivation(&alg, &xi).unwrap();
        let p2 = derived_operator(&alg, &d, 2).unwrap();
        let (_shifted_space, m2) = shifted_part(sp, &p2).unwrap();
        for pair in sp.tuples(2) {
            let unshifted_degree = sp.degree(pair[0]);
            let expected = p2.eval(&pair).scaled(&scalar::sign_pow(unshifted_degree));
            assert_eq!(m2.eval(&pair), expected, "at {}", sp.render_tuple(&pair));
        }
        assert_eq!(m2.degree(), 0);
    }

    // The alternating sign tables for the suspended operations: exponent
    // |o_1| + |o_3| + ... for even arity, |o_2| + |o_4| + ... for odd arity,
    // in unsuspended degrees.  The shift conjugation must reproduce them.
    #[test]
    fn suspended_sign_tables_for_all_arities_up_to_five() {
        let alg = build_truncated_free(&gens2(), 5).unwrap();
        let sp = alg.space();
        let xi = Elem::from_symbol(sp.id("g1\u{b7}g2").unwrap());
        let d = inner_derivation(&alg, &xi).unwrap();
        for arity in 1..=5usize {
            let part = derived_operator(&alg, &d, arity).unwrap();
            let (_, up) = shifted_part(sp, &part).unwrap();
            for tuple in sp.tuples(arity) {
                let mut exponent = 0i64;
                for (idx, &s) in tuple.iter().enumerate() {
                    let position = idx + 1;
                    let wanted = if arity % 2 == 0 {
                        position % 2 == 1
                    } else {
                        position % 2 == 0
                    };
                    if wanted {
                        exponent += sp.degree(s);
                    }
                }
                let expected = part.eval(&tuple).scaled(&scalar::sign_pow(exponent));
                assert_eq!(
                    up.eval(&tuple),
                    expected,
                    "arity {arity} at {}",
                    sp.render_tuple(&tuple)
                );
            }
        }
    }

    #[test]
    fn pair_restrictions_recover_both_components() {
        let pair = build_commutator_pair(&gens2(), 3).unwrap();
        let l = pair_restriction(&pair, Component::LodayPart).unwrap();
        assert_eq!(l.algebra.kind(), AlgebraKind::Loday);
        let a = pair_restriction(&pair, Component::AssocPart).unwrap();
        assert_eq!(a.algebra.kind(), AlgebraKind::Associative);
        assert_eq!(l.algebra.space().len(), pair.space().len() / 2);
        let plain = build_truncated_free(&gens2(), 3).unwrap();
        assert_eq!(a.algebra.space().len(), plain.space().len());
    }
}
