//! Arity-k homogeneous multilinear operations given by their values on
//! basis tuples.
//!
//! A [`MultiMap`] stores, for each valid basis tuple in its support, a linear
//! element of the underlying space.  Values off the stored support are zero.
//! Construction validates homogeneity (every output has degree = sum of
//! input degrees + map degree), the component discipline of Loday pairs
//! (tuples containing an associative letter must map into the associative
//! part, pure Loday tuples into the Loday part), and -- on weight-graded
//! spaces -- weight monotonicity, which is what justifies sparse storage.
//!
//! The module also houses the suspension conjugation between an operation
//! on a space and the corresponding operation on the degree-shifted space.
//! All signs are computed from the Koszul rule for moving shift operators
//! past graded letters; the only closed-form ingredient is the mutual
//! crossing sign `(-1)^{i(i-1)/2}` of `i` odd shift operators.

use crate::perm::{koszul_parity_is_odd, perm_parity_is_odd, permutations};
use crate::scalar::{self, Scalar};
use crate::space::{Component, Elem, Space, SymbolId, Word};
use crate::{Error, Result};
use num::Zero;
use std::collections::BTreeMap;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiMap {
    arity: usize,
    degree: i64,
    values: BTreeMap<Vec<SymbolId>, Elem>,
}

impl MultiMap {
    /// Builds and validates a multimap from explicit values.
    pub fn new(
        space: &Space,
        arity: usize,
        degree: i64,
        values: BTreeMap<Vec<SymbolId>, Elem>,
    ) -> Result<Self> {
        if arity == 0 {
            return Err(Error::Arity {
                expected: 1,
                got: 0,
            });
        }
        let mut kept = BTreeMap::new();
        for (key, val) in values {
            if key.len() != arity {
                return Err(Error::Arity {
                    expected: arity,
                    got: key.len(),
                });
            }
            if val.is_zero() {
                continue;
            }
            if !space.tuple_is_valid(&key) {
                return Err(Error::Word(format!(
                    "tuple {} puts an associative letter before a Loday letter",
                    space.render_tuple(&key)
                )));
            }
            let in_degree = space.tuple_degree(&key);
            let out_degree = val.homogeneous_degree(space)?;
            if out_degree != Some(in_degree + degree) {
                return Err(Error::Degree(format!(
                    "value on {} has degree {:?}, expected {}",
                    space.render_tuple(&key),
                    out_degree,
                    in_degree + degree
                )));
            }
            let linear = val.linear_terms()?;
            if space.is_pair() {
                let wants = if key
                    .iter()
                    .any(|&s| space.component(s) == Component::AssocPart)
                {
                    Component::AssocPart
                } else {
                    Component::LodayPart
                };
                for (sym, _) in &linear {
                    if space.component(*sym) != wants {
                        return Err(Error::Word(format!(
                            "value on {} lands in the wrong component",
                            space.render_tuple(&key)
                        )));
                    }
                }
            }
            if let (Some(in_w), Some(trunc)) = (space.tuple_weight(&key), space.truncation()) {
                if in_w > trunc {
                    return Err(Error::Word(format!(
                        "value stored on tuple {} of weight {} beyond the truncation {}",
                        space.render_tuple(&key),
                        in_w,
                        trunc
                    )));
                }
                for (sym, _) in &linear {
                    let out_w = space.weight(*sym).expect("weighted space");
                    if out_w < in_w {
                        return Err(Error::Word(format!(
                            "weight drops from {} to {} on {}; weight-graded maps must be monotone",
                            in_w,
                            out_w,
                            space.render_tuple(&key)
                        )));
                    }
                }
            }
            kept.insert(key, val);
        }
        Ok(MultiMap {
            arity,
            degree,
            values: kept,
        })
    }

    pub fn zero(arity: usize, degree: i64) -> Self {
        MultiMap {
            arity,
            degree,
            values: BTreeMap::new(),
        }
    }

    /// Engine-internal constructor for values that are valid by
    /// construction (compositions and sums of validated maps).
    pub(crate) fn from_raw_parts(
        arity: usize,
        degree: i64,
        values: BTreeMap<Vec<SymbolId>, Elem>,
    ) -> Self {
        let mut m = MultiMap {
            arity,
            degree,
            values,
        };
        m.values.retain(|_, v| !v.is_zero());
        m
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn degree(&self) -> i64 {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.values.is_empty()
    }

    pub fn support(&self) -> impl Iterator<Item = (&Vec<SymbolId>, &Elem)> {
        self.values.iter()
    }

    pub fn eval(&self, tuple: &[SymbolId]) -> Elem {
        debug_assert_eq!(tuple.len(), self.arity);
        self.values.get(tuple).cloned().unwrap_or_else(Elem::zero)
    }

    pub fn eval_ref(&self, tuple: &[SymbolId]) -> Option<&Elem> {
        self.values.get(tuple)
    }

    /// Pointwise sum. The degrees must agree.
    pub fn checked_add(&self, other: &MultiMap) -> Result<MultiMap> {
        if self.arity != other.arity {
            return Err(Error::Arity {
                expected: self.arity,
                got: other.arity,
            });
        }
        if self.degree != other.degree {
            return Err(Error::Degree(format!(
                "cannot add maps of degrees {} and {}",
                self.degree, other.degree
            )));
        }
        let mut values = self.values.clone();
        for (k, v) in &other.values {
            let entry = values.entry(k.clone()).or_insert_with(Elem::zero);
            entry.add(v);
            if entry.is_zero() {
                values.remove(k);
            }
        }
        Ok(MultiMap {
            arity: self.arity,
            degree: self.degree,
            values,
        })
    }

    pub fn scaled(&self, factor: &Scalar) -> MultiMap {
        if factor.is_zero() {
            return MultiMap::zero(self.arity, self.degree);
        }
        let values = self
            .values
            .iter()
            .map(|(k, v)| (k.clone(), v.scaled(factor)))
            .collect();
        MultiMap {
            arity: self.arity,
            degree: self.degree,
            values,
        }
    }

    pub fn negated(&self) -> MultiMap {
        self.scaled(&scalar::from_int(-1))
    }

    pub fn checked_sub(&self, other: &MultiMap) -> Result<MultiMap> {
        self.checked_add(&other.negated())
    }

    /// The map as a single-part family evaluated on a word of matching length.
    pub fn eval_word(&self, word: &Word) -> Elem {
        self.eval(word.letters())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ShiftDirection {
    /// From an operation on `V` to the operation on the suspension `sV`.
    Up,
    /// From an operation on `sV` back to the operation on `V`.
    Down,
}

/// Conjugates `f` by the degree shift, returning the shifted space and the
/// conjugated operation on it.
///
/// Writing `i` for the arity, the exponent of the sign attached to a tuple
/// is `sum_k (i-k) * d_k` over the *target* degrees `d_k` of the letters,
/// plus -- in the upward direction only -- the crossing parity `i(i-1)/2` of
/// the `i` odd shift operators among themselves.  With these conventions
/// `down(up(f)) = f` and `up(down(f)) = f` exactly, for any degree of `f`.
pub fn shift_conjugate(
    space: &Space,
    f: &MultiMap,
    direction: ShiftDirection,
) -> Result<(Space, MultiMap)> {
    let offset = match direction {
        ShiftDirection::Up => 1,
        ShiftDirection::Down => -1,
    };
    let target = space.shifted(offset);
    let i = f.arity() as i64;
    let crossing = match direction {
        ShiftDirection::Up => i * (i - 1) / 2,
        ShiftDirection::Down => 0,
    };
    let mut values = BTreeMap::new();
    for (key, val) in f.support() {
        let mut exponent = crossing;
        for (k, &sym) in key.iter().enumerate() {
            let factor = i - 1 - k as i64;
            exponent += factor * target.degree(sym);
        }
        values.insert(key.clone(), val.scaled(&scalar::sign_pow(exponent)));
    }
    let degree = match direction {
        ShiftDirection::Up => f.degree() + 1 - i,
        ShiftDirection::Down => f.degree() - 1 + i,
    };
    let map = MultiMap::new(&target, f.arity(), degree, values)?;
    Ok((target, map))
}

/// First pair of tuples violating graded skew symmetry, if any.
pub fn skew_witness(space: &Space, f: &MultiMap) -> Option<(Vec<SymbolId>, Vec<SymbolId>)> {
    for (key, val) in f.support() {
        for p in 0..f.arity() - 1 {
            let mut swapped = key.clone();
            swapped.swap(p, p + 1);
            let du = space.degree(key[p]);
            let dv = space.degree(key[p + 1]);
            let mut expect = f.eval(&swapped).scaled(&scalar::sign_pow(1 + du * dv));
            expect.sub(val);
            if !expect.is_zero() {
                return Some((key.clone(), swapped));
            }
        }
    }
    None
}

/// Graded skew-symmetrization: averages `f` over all permutations with
/// anti-Koszul signs.  The result is graded skew symmetric.
pub fn skew_symmetrize(space: &Space, f: &MultiMap) -> Result<MultiMap> {
    let arity = f.arity();
    let perms = permutations(arity);
    let inv_count = Scalar::new(num::BigInt::from(1), num::BigInt::from(perms.len() as i64));
    let mut values: BTreeMap<Vec<SymbolId>, Elem> = BTreeMap::new();
    for tuple in space.tuples(arity) {
        let degrees: Vec<i64> = tuple.iter().map(|&s| space.degree(s)).collect();
        let mut acc = Elem::zero();
        for perm in &perms {
            let permuted: Vec<SymbolId> = perm.iter().map(|&p| tuple[p]).collect();
            let mut sign = 1i64;
            if perm_parity_is_odd(perm) {
                sign = -sign;
            }
            if koszul_parity_is_odd(&degrees, perm) {
                sign = -sign;
            }
            acc.add_scaled(&f.eval(&permuted), &scalar::from_int(sign));
        }
        if !acc.is_zero() {
            values.insert(tuple, acc.scaled(&inv_count));
        }
    }
    MultiMap::new(space, arity, f.degree(), values)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::BasisSymbol;

    fn space() -> Space {
        Space::new(vec![
            BasisSymbol::plain("a", 1),
            BasisSymbol::plain("b", 0),
            BasisSymbol::plain("c", 2),
        ])
        .unwrap()
    }

    fn binary_map(space: &Space) -> MultiMap {
        // f(a,b) = c requires degree |c| - |a| - |b| = 1
        let a = space.id("a").unwrap();
        let b = space.id("b").unwrap();
        let c = space.id("c").unwrap();
        let mut values = BTreeMap::new();
        values.insert(vec![a, b], Elem::from_symbol(c));
        MultiMap::new(space, 2, 1, values).unwrap()
    }

    #[test]
    fn homogeneity_enforced() {
        let sp = space();
        let a = sp.id("a").unwrap();
        let c = sp.id("c").unwrap();
        let mut values = BTreeMap::new();
        values.insert(vec![a, a], Elem::from_symbol(c)); // degree 2 vs expected 1+1+1
        assert!(MultiMap::new(&sp, 2, 1, values).is_err());
    }

    #[test]
    fn arity_one_shift_changes_nothing_but_degree_bookkeeping() {
        let sp = space();
        let a = sp.id("a").unwrap();
        let c = sp.id("c").unwrap();
        let mut values = BTreeMap::new();
        values.insert(vec![a], Elem::from_symbol(c));
        let f = MultiMap::new(&sp, 1, 1, values).unwrap();
        let (up_space, up) = shift_conjugate(&sp, &f, ShiftDirection::Up).unwrap();
        // single shift operators cancel with no crossings: same values
        assert_eq!(up.eval(&[a]), Elem::from_symbol(c));
        assert_eq!(up.degree(), 1);
        let (_, back) = shift_conjugate(&up_space, &up, ShiftDirection::Down).unwrap();
        assert_eq!(back, f);
    }

    #[test]
    fn round_trip_is_identity() {
        let sp = space();
        {
            let f = binary_map(&sp);
            let (s_up, up) = shift_conjugate(&sp, &f, ShiftDirection::Up).unwrap();
            let (_, down) = shift_conjugate(&s_up, &up, ShiftDirection::Down).unwrap();
            assert_eq!(down, f);
            let (s_dn, dn) = shift_conjugate(&sp, &f, ShiftDirection::Down).unwrap();
            let (_, up2) = shift_conjugate(&s_dn, &dn, ShiftDirection::Up).unwrap();
            assert_eq!(up2, f);
        }
    }

    #[test]
    fn skew_symmetrization_is_skew() {
        let sp = space();
        let f = binary_map(&sp);
        assert!(skew_witness(&sp, &f).is_some());
        let g = skew_symmetrize(&sp, &f).unwrap();
        assert!(skew_witness(&sp, &g).is_none());
        assert!(!g.is_zero());
    }
}
