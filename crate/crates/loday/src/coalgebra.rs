//! Tensor-coalgebra machinery: coproducts, coderivation lifts,
//! corestriction, commutators and the Gerstenhaber bracket.
//!
//! Three coalgebra flavors are exposed:
//!
//! * `Deconcatenation` -- the associative coalgebra on nonempty tensor
//!   words; the coproduct runs over the proper contiguous splits and a
//!   coderivation lift inserts its operation at every contiguous position
//!   with the prefix sign `(-1)^{|f| (|v_1|+...+|v_k|)}`.
//! * `DualLoday` -- the cofree nilpotent coalgebra whose coproduct keeps the
//!   last letter in the right factor and unshuffles the remaining letters
//!   with Koszul signs; lifts sum over `(k-i, i-1)`-unshuffles of the
//!   letters before a pinned one.
//! * `MixedRegularized` -- the same construction on a two-part (Loday pair)
//!   word space, keeping only the terms in which the associative letters
//!   retain their original relative order.
//!
//! `MixedUnregularized` is the mixed construction before discarding
//! order-violating terms; it exists as an intermediate for `regularize` and
//! for differential testing, not as a public verification surface.
//!
//! Coderivations are stored by their corestriction (the arity-indexed family
//! of multimaps) and lifted lazily during evaluation; the lift is never
//! materialized as a matrix.

use crate::multimap::MultiMap;
use crate::perm::{combinations, koszul_parity_is_odd};
use crate::report::{Cutoffs, VerificationReport, Witness};
use crate::scalar::{self, Scalar};
use crate::space::{Component, Elem, PairSum, Space, SymbolId, Word};
use crate::{Error, Result};
use std::collections::BTreeMap;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CoalgebraFlavor {
    Deconcatenation,
    DualLoday,
    MixedUnregularized,
    MixedRegularized,
}

impl CoalgebraFlavor {
    pub fn requires_pair(self) -> bool {
        matches!(
            self,
            CoalgebraFlavor::MixedUnregularized | CoalgebraFlavor::MixedRegularized
        )
    }

    fn check_space(self, space: &Space) -> Result<()> {
        if self.requires_pair() != space.is_pair() {
            return Err(Error::Flavor(format!(
                "flavor {:?} does not match a {} basis",
                self,
                if space.is_pair() {
                    "two-part"
                } else {
                    "single-part"
                }
            )));
        }
        Ok(())
    }
}

/// True when the associative letters appear in their original relative
/// order after rearranging the word as `arrangement`.
fn assoc_order_preserved(space: &Space, letters: &[SymbolId], arrangement: &[usize]) -> bool {
    let mut last: Option<usize> = None;
    for &pos in arrangement {
        if space.component(letters[pos]) == Component::AssocPart {
            if let Some(prev) = last {
                if pos < prev {
                    return false;
                }
            }
            last = Some(pos);
        }
    }
    true
}

/// The coproduct of a basis word in the given flavor.  Single letters map
/// to zero (the coalgebras are reduced).
pub fn coproduct(space: &Space, word: &Word, flavor: CoalgebraFlavor) -> Result<PairSum> {
    flavor.check_space(space)?;
    let letters = word.letters();
    if !space.tuple_is_valid(letters) {
        return Err(Error::Word(format!(
            "word {} puts an associative letter before a Loday letter",
            space.render_word(word)
        )));
    }
    let n = letters.len();
    let mut out = PairSum::zero();
    if n < 2 {
        return Ok(out);
    }
    match flavor {
        CoalgebraFlavor::Deconcatenation => {
            for i in 1..n {
                out.add_pair(
                    Word::new(letters[..i].to_vec()),
                    Word::new(letters[i..].to_vec()),
                    scalar::from_int(1),
                );
            }
        }
        CoalgebraFlavor::DualLoday
        | CoalgebraFlavor::MixedUnregularized
        | CoalgebraFlavor::MixedRegularized => {
            let degrees: Vec<i64> = letters.iter().map(|&s| space.degree(s)).collect();
            for left_size in 1..n {
                for sel in combinations(n - 1, left_size) {
                    let mut in_left = vec![false; n - 1];
                    for &i in &sel {
                        in_left[i] = true;
                    }
                    let mut arrangement = sel.clone();
                    arrangement.extend((0..n - 1).filter(|&i| !in_left[i]));
                    arrangement.push(n - 1);
                    if flavor == CoalgebraFlavor::MixedRegularized
                        && !assoc_order_preserved(space, letters, &arrangement)
                    {
                        continue;
                    }
                    let sign = if koszul_parity_is_odd(&degrees, &arrangement) {
                        -1
                    } else {
                        1
                    };
                    let left: Vec<SymbolId> = sel.iter().map(|&i| letters[i]).collect();
                    let right: Vec<SymbolId> = arrangement[left_size..]
                        .iter()
                        .map(|&i| letters[i])
                        .collect();
                    out.add_pair(Word::new(left), Word::new(right), scalar::from_int(sign));
                }
            }
        }
    }
    Ok(out)
}

/// A coderivation stored by its corestriction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Coderivation {
    parts: BTreeMap<usize, MultiMap>,
    flavor: CoalgebraFlavor,
    degree: i64,
}

impl Coderivation {
    /// The coderivation associated with a single operation.
    pub fn lift(space: &Space, f: MultiMap, flavor: CoalgebraFlavor) -> Result<Self> {
        flavor.check_space(space)?;
        let degree = f.degree();
        let mut parts = BTreeMap::new();
        if !f.is_zero() {
            parts.insert(f.arity(), f);
        }
        Ok(Coderivation {
            parts,
            flavor,
            degree,
        })
    }

    /// A coderivation with the given arity-indexed parts, all sharing one degree.
    pub fn from_parts(
        space: &Space,
        parts: Vec<MultiMap>,
        flavor: CoalgebraFlavor,
        degree: i64,
    ) -> Result<Self> {
        flavor.check_space(space)?;
        let mut map = BTreeMap::new();
        for p in parts {
            if p.degree() != degree {
                return Err(Error::Degree(format!(
                    "part of arity {} has degree {}, expected {}",
                    p.arity(),
                    p.degree(),
                    degree
                )));
            }
            if p.is_zero() {
                continue;
            }
            if map.insert(p.arity(), p).is_some() {
                return Err(Error::Invalid("two parts of the same arity".into()));
            }
        }
        Ok(Coderivation {
            parts: map,
            flavor,
            degree,
        }
        .normalized())
    }

    fn normalized(mut self) -> Self {
        self.parts.retain(|_, p| !p.is_zero());
        self
    }

    pub fn zero(flavor: CoalgebraFlavor, degree: i64) -> Self {
        Coderivation {
            parts: BTreeMap::new(),
            flavor,
            degree,
        }
    }

    pub fn flavor(&self) -> CoalgebraFlavor {
        self.flavor
    }

    pub fn degree(&self) -> i64 {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.parts.is_empty()
    }

    /// The corestriction: the arity-indexed family of operations.
    pub fn corestrict(&self) -> &BTreeMap<usize, MultiMap> {
        &self.parts
    }

    pub fn part(&self, arity: usize) -> Option<&MultiMap> {
        self.parts.get(&arity)
    }

    pub fn max_arity(&self) -> usize {
        self.parts.keys().next_back().copied().unwrap_or(0)
    }

    pub fn checked_add(&self, other: &Coderivation) -> Result<Coderivation> {
        if self.flavor != other.flavor {
            return Err(Error::Flavor(
                "cannot add coderivations of different flavors".into(),
            ));
        }
        if self.degree != other.degree && !self.is_zero() && !other.is_zero() {
            return Err(Error::Degree(format!(
                "cannot add coderivations of degrees {} and {}",
                self.degree, other.degree
            )));
        }
        let mut parts = self.parts.clone();
        for (arity, p) in &other.parts {
            match parts.remove(arity) {
                Some(existing) => {
                    let sum = existing.checked_add(p)?;
                    if !sum.is_zero() {
                        parts.insert(*arity, sum);
                    }
                }
                None => {
                    parts.insert(*arity, p.clone());
                }
            }
        }
        let degree = if self.is_zero() {
            other.degree
        } else {
            self.degree
        };
        Ok(Coderivation {
            parts,
            flavor: self.flavor,
            degree,
        })
    }

    pub fn scaled(&self, factor: &Scalar) -> Coderivation {
        let parts = self
            .parts
            .iter()
            .map(|(a, p)| (*a, p.scaled(factor)))
            .collect();
        Coderivation {
            parts,
            flavor: self.flavor,
            degree: self.degree,
        }
        .normalized()
    }

    pub fn negated(&self) -> Coderivation {
        self.scaled(&scalar::from_int(-1))
    }

    /// Evaluates the lifted coderivation on a basis word.
    pub fn eval_word(&self, space: &Space, word: &Word) -> Elem {
        let letters = word.letters();
        let n = letters.len();
        let mut out = Elem::zero();
        for (&arity, f) in &self.parts {
            if arity > n {
                continue;
            }
            match self.flavor {
                CoalgebraFlavor::Deconcatenation => {
                    self.eval_part_deconcatenation(space, f, letters, &mut out)
                }
                _ => self.eval_part_unshuffled(space, f, letters, &mut out),
            }
        }
        out
    }

    fn eval_part_deconcatenation(
        &self,
        space: &Space,
        f: &MultiMap,
        letters: &[SymbolId],
        out: &mut Elem,
    ) {
        let n = letters.len();
        let ar = f.arity();
        let mut prefix_degree = 0i64;
        for k in 0..=(n - ar) {
            if k > 0 {
                prefix_degree += space.degree(letters[k - 1]);
            }
            if let Some(val) = f.eval_ref(&letters[k..k + ar]) {
                let sign = scalar::sign_pow(f.degree() * prefix_degree);
                for (w, c) in val.terms() {
                    debug_assert_eq!(w.len(), 1);
                    let mut new_word = Vec::with_capacity(n - ar + 1);
                    new_word.extend_from_slice(&letters[..k]);
                    new_word.push(w.letters()[0]);
                    new_word.extend_from_slice(&letters[k + ar..]);
                    out.add_word(Word::new(new_word), c * &sign);
                }
            }
        }
    }

    fn eval_part_unshuffled(
        &self,
        space: &Space,
        f: &MultiMap,
        letters: &[SymbolId],
        out: &mut Elem,
    ) {
        let n = letters.len();
        let ar = f.arity();
        let degrees: Vec<i64> = letters.iter().map(|&s| space.degree(s)).collect();
        let regular_only = self.flavor == CoalgebraFlavor::MixedRegularized;
        for pinned in (ar - 1)..n {
            for sel in combinations(pinned, ar - 1) {
                let mut in_sel = vec![false; pinned];
                for &i in &sel {
                    in_sel[i] = true;
                }
                let prefix: Vec<usize> = (0..pinned).filter(|&i| !in_sel[i]).collect();
                let mut arrangement = Vec::with_capacity(n);
                arrangement.extend_from_slice(&prefix);
                arrangement.extend_from_slice(&sel);
                arrangement.push(pinned);
                arrangement.extend(pinned + 1..n);
                if regular_only && !assoc_order_preserved(space, letters, &arrangement) {
                    continue;
                }
                let mut args: Vec<SymbolId> = sel.iter().map(|&i| letters[i]).collect();
                args.push(letters[pinned]);
                let Some(val) = f.eval_ref(&args) else {
                    continue;
                };
                let mut exponent = f.degree() * prefix.iter().map(|&i| degrees[i]).sum::<i64>();
                if koszul_parity_is_odd(&degrees, &arrangement) {
                    exponent += 1;
                }
                let sign = scalar::sign_pow(exponent);
                for (w, c) in val.terms() {
                    debug_assert_eq!(w.len(), 1);
                    let mut new_word = Vec::with_capacity(n - ar + 1);
                    new_word.extend(prefix.iter().map(|&i| letters[i]));
                    new_word.push(w.letters()[0]);
                    new_word.extend_from_slice(&letters[pinned + 1..]);
                    debug_assert!(space.tuple_is_valid(&new_word));
                    out.add_word(Word::new(new_word), c * &sign);
                }
            }
        }
    }

    /// Linear extension of the evaluation to formal sums.
    pub fn eval_elem(&self, space: &Space, elem: &Elem) -> Elem {
        let mut out = Elem::zero();
        for (w, c) in elem.terms() {
            out.add_scaled(&self.eval_word(space, w), c);
        }
        out
    }

    /// The graded commutator `D1 D2 - (-1)^{|D1||D2|} D2 D1`, returned again
    /// as a coderivation of the same flavor via its corestriction parts.
    pub fn commutator(space: &Space, d1: &Coderivation, d2: &Coderivation) -> Result<Coderivation> {
        if d1.flavor != d2.flavor {
            return Err(Error::Flavor("commutator of different flavors".into()));
        }
        let degree = d1.degree + d2.degree;
        let mut parts: BTreeMap<usize, MultiMap> = BTreeMap::new();
        for f in d1.parts.values() {
            for g in d2.parts.values() {
                let bracket = gerstenhaber(space, f, g, d1.flavor)?;
                if bracket.is_zero() {
                    continue;
                }
                match parts.remove(&bracket.arity()) {
                    Some(existing) => {
                        let sum = existing.checked_add(&bracket)?;
                        if !sum.is_zero() {
                            parts.insert(sum.arity(), sum);
                        }
                    }
                    None => {
                        parts.insert(bracket.arity(), bracket);
                    }
                }
            }
        }
        Ok(Coderivation {
            parts,
            flavor: d1.flavor,
            degree,
        })
    }

    /// Discards every expansion term that permutes the relative order of
    /// associative letters.  Since evaluation is driven by the flavor tag,
    /// the parts themselves are unchanged.  Idempotent.
    pub fn regularize(&self) -> Result<Coderivation> {
        match self.flavor {
            CoalgebraFlavor::MixedUnregularized | CoalgebraFlavor::MixedRegularized => {
                Ok(Coderivation {
                    parts: self.parts.clone(),
                    flavor: CoalgebraFlavor::MixedRegularized,
                    degree: self.degree,
                })
            }
            other => Err(Error::Flavor(format!(
                "regularize expects a mixed coderivation, got {other:?}"
            ))),
        }
    }
}

/// The Gerstenhaber bracket of two operations: the corestriction of the
/// commutator of their lifts, materialized on the (weight-bounded) tuples
/// of arity `i+j-1`.
pub fn gerstenhaber(
    space: &Space,
    f: &MultiMap,
    g: &MultiMap,
    flavor: CoalgebraFlavor,
) -> Result<MultiMap> {
    flavor.check_space(space)?;
    let arity = f.arity() + g.arity() - 1;
    let degree = f.degree() + g.degree();
    let fc = Coderivation::lift(space, f.clone(), flavor)?;
    let gc = Coderivation::lift(space, g.clone(), flavor)?;
    let swap_sign = scalar::sign_pow(f.degree() * g.degree());
    let mut values = BTreeMap::new();
    for tuple in space.tuples(arity) {
        let word = Word::new(tuple.clone());
        let mut val = fc.eval_elem(space, &gc.eval_word(space, &word));
        val.add_scaled(
            &gc.eval_elem(space, &fc.eval_word(space, &word)),
            &-swap_sign.clone(),
        );
        if !val.is_zero() {
            values.insert(tuple, val);
        }
    }
    MultiMap::new(space, arity, degree, values)
}

/// Checks the coderivation rule `(D (x) 1) Delta + (1 (x) D) Delta = Delta D`
/// on every basis word of length up to `max_len`; for the regularized mixed
/// flavor both sides use the regularized coproduct.
pub fn verify_coderivation_rule(
    space: &Space,
    d: &Coderivation,
    max_len: usize,
) -> VerificationReport {
    let mut report =
        VerificationReport::new("coderivation-rule", Cutoffs::new(d.max_arity(), max_len, 0));
    for word in space.words_up_to(max_len) {
        let delta = coproduct(space, &word, d.flavor()).expect("flavor checked");
        let mut lhs = PairSum::zero();
        for ((u, v), c) in delta.terms() {
            let du = d.eval_word(space, u);
            for (u2, cu) in du.terms() {
                lhs.add_pair(u2.clone(), v.clone(), c * cu);
            }
            let interchange = scalar::sign_pow(d.degree() * space.word_degree(u));
            let dv = d.eval_word(space, v);
            for (v2, cv) in dv.terms() {
                lhs.add_pair(u.clone(), v2.clone(), c * cv * &interchange);
            }
        }
        let mut rhs = PairSum::zero();
        let dw = d.eval_word(space, &word);
        for (w2, c) in dw.terms() {
            let inner = coproduct(space, w2, d.flavor()).expect("flavor checked");
            for ((u, v), cc) in inner.terms() {
                rhs.add_pair(u.clone(), v.clone(), c * cc);
            }
        }
        let mut diff = lhs.clone();
        diff.sub(&rhs);
        report.record(if diff.is_zero() {
            None
        } else {
            Some(Witness {
                input: space.render_word(&word),
                lhs: lhs.render(space),
                rhs: rhs.render(space),
            })
        });
    }
    report
}
