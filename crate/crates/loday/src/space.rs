//! Graded basis, tensor words and formal sums.
//!
//! A [`Space`] is a finite list of named graded basis symbols.  A [`Word`]
//! is a nonempty tensor word of symbols; an [`Elem`] is a finite formal sum
//! of scalar-weighted words kept in canonical form (no zero coefficients,
//! words in one fixed total order, so equality is syntactic).
//!
//! For a Loday pair the basis splits into a Loday part and an associative
//! part, and a valid word puts every Loday letter before every associative
//! letter.  A space may carry a weight function together with a truncation
//! weight; weights are additive under the algebra product and let the
//! verification suites skip tuples whose every evaluation is forced to zero.

use crate::scalar::{self, Scalar};
use crate::{Error, Result};
use num::Zero;
use std::collections::{BTreeMap, HashMap};
use std::fmt;

/// Which tensor factor a basis symbol belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Component {
    /// Single-space algebras.
    Plain,
    /// The Loday part `L` of a pair.
    LodayPart,
    /// The associative part `A` of a pair.
    AssocPart,
}

/// A named graded basis symbol.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BasisSymbol {
    pub name: String,
    pub degree: i64,
    pub component: Component,
}

impl BasisSymbol {
    pub fn plain(name: impl Into<String>, degree: i64) -> Self {
        BasisSymbol {
            name: name.into(),
            degree,
            component: Component::Plain,
        }
    }

    pub fn in_component(name: impl Into<String>, degree: i64, component: Component) -> Self {
        BasisSymbol {
            name: name.into(),
            degree,
            component,
        }
    }
}

/// Index of a symbol within its space.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SymbolId(pub u32);

impl SymbolId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// A finite graded basis, optionally weight-graded with a truncation bound.
#[derive(Debug, Clone)]
pub struct Space {
    symbols: Vec<BasisSymbol>,
    by_name: HashMap<String, SymbolId>,
    weights: Option<Vec<u64>>,
    truncation: Option<u64>,
}

impl Space {
    pub fn new(symbols: Vec<BasisSymbol>) -> Result<Self> {
        let mut by_name = HashMap::new();
        for (i, s) in symbols.iter().enumerate() {
            if by_name.insert(s.name.clone(), SymbolId(i as u32)).is_some() {
                return Err(Error::DuplicateSymbol(s.name.clone()));
            }
        }
        Ok(Space {
            symbols,
            by_name,
            weights: None,
            truncation: None,
        })
    }

    /// A weight-graded space: `weights[i]` is the weight of symbol `i` and
    /// products of total weight above `truncation` vanish.
    pub fn with_weights(
        symbols: Vec<BasisSymbol>,
        weights: Vec<u64>,
        truncation: u64,
    ) -> Result<Self> {
        if weights.len() != symbols.len() {
            return Err(Error::Invalid(
                "weight table length differs from basis size".into(),
            ));
        }
        if weights.contains(&0) {
            return Err(Error::Invalid("symbol weights must be positive".into()));
        }
        let mut sp = Space::new(symbols)?;
        sp.weights = Some(weights);
        sp.truncation = Some(truncation);
        Ok(sp)
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn symbol(&self, id: SymbolId) -> &BasisSymbol {
        &self.symbols[id.index()]
    }

    pub fn symbols(&self) -> impl Iterator<Item = (SymbolId, &BasisSymbol)> {
        self.symbols
            .iter()
            .enumerate()
            .map(|(i, s)| (SymbolId(i as u32), s))
    }

    pub fn id(&self, name: &str) -> Result<SymbolId> {
        self.by_name
            .get(name)
            .copied()
            .ok_or_else(|| Error::UnknownSymbol(name.to_string()))
    }

    pub fn degree(&self, id: SymbolId) -> i64 {
        self.symbols[id.index()].degree
    }

    pub fn component(&self, id: SymbolId) -> Component {
        self.symbols[id.index()].component
    }

    pub fn weight(&self, id: SymbolId) -> Option<u64> {
        self.weights.as_ref().map(|w| w[id.index()])
    }

    pub fn truncation(&self) -> Option<u64> {
        self.truncation
    }

    /// True when the basis carries both parts of a Loday pair.
    pub fn is_pair(&self) -> bool {
        self.symbols.iter().any(|s| s.component != Component::Plain)
    }

    /// The same basis with every degree shifted by `offset` (suspension for
    /// `+1`, desuspension for `-1`). Names, components and weights carry over.
    pub fn shifted(&self, offset: i64) -> Space {
        let symbols = self
            .symbols
            .iter()
            .map(|s| BasisSymbol {
                name: s.name.clone(),
                degree: s.degree + offset,
                component: s.component,
            })
            .collect();
        Space {
            symbols,
            by_name: self.by_name.clone(),
            weights: self.weights.clone(),
            truncation: self.truncation,
        }
    }

    pub fn word_degree(&self, word: &Word) -> i64 {
        word.letters().iter().map(|&s| self.degree(s)).sum()
    }

    pub fn tuple_degree(&self, tuple: &[SymbolId]) -> i64 {
        tuple.iter().map(|&s| self.degree(s)).sum()
    }

    pub fn tuple_weight(&self, tuple: &[SymbolId]) -> Option<u64> {
        self.weights
            .as_ref()
            .map(|w| tuple.iter().map(|&s| w[s.index()]).sum())
    }

    /// Valid words keep every Loday letter before every associative letter.
    pub fn tuple_is_valid(&self, tuple: &[SymbolId]) -> bool {
        let mut seen_assoc = false;
        for &s in tuple {
            match self.component(s) {
                Component::AssocPart => seen_assoc = true,
                Component::LodayPart | Component::Plain => {
                    if seen_assoc {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// All valid tuples of exactly `len` letters, in canonical order.  When
    /// the space is weight-graded only tuples of total weight at most the
    /// truncation are produced: any multilinear evaluation built from
    /// weight-monotone maps vanishes on the rest.
    pub fn tuples(&self, len: usize) -> Vec<Vec<SymbolId>> {
        let mut out = Vec::new();
        let mut cur = Vec::with_capacity(len);
        self.tuples_rec(len, &mut cur, &mut out);
        out
    }

    fn tuples_rec(&self, len: usize, cur: &mut Vec<SymbolId>, out: &mut Vec<Vec<SymbolId>>) {
        if cur.len() == len {
            out.push(cur.clone());
            return;
        }
        for i in 0..self.symbols.len() {
            let id = SymbolId(i as u32);
            cur.push(id);
            let weight_ok = match (self.tuple_weight(cur), self.truncation) {
                (Some(w), Some(t)) => w + (len - cur.len()) as u64 <= t,
                _ => true,
            };
            if weight_ok && self.tuple_is_valid(cur) {
                self.tuples_rec(len, cur, out);
            }
            cur.pop();
        }
    }

    /// All valid words of length `1..=max_len`.
    pub fn words_up_to(&self, max_len: usize) -> Vec<Word> {
        let mut out = Vec::new();
        for len in 1..=max_len {
            out.extend(self.tuples(len).into_iter().map(Word::new));
        }
        out
    }

    pub fn render_tuple(&self, tuple: &[SymbolId]) -> String {
        tuple
            .iter()
            .map(|&s| self.symbol(s).name.as_str())
            .collect::<Vec<_>>()
            .join("\u{b7}")
    }

    pub fn render_word(&self, word: &Word) -> String {
        self.render_tuple(word.letters())
    }

    /// Canonical display order for words: lexicographic on letter names,
    /// then on length.  Used when rendering formal sums.
    pub fn word_display_key(&self, word: &Word) -> (Vec<&str>, usize) {
        let names: Vec<&str> = word
            .letters()
            .iter()
            .map(|&s| self.symbol(s).name.as_str())
            .collect();
        (names, word.len())
    }
}

/// A nonempty tensor word over a space's basis.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Word(Vec<SymbolId>);

impl Word {
    pub fn new(letters: Vec<SymbolId>) -> Self {
        debug_assert!(!letters.is_empty(), "words are nonempty");
        Word(letters)
    }

    pub fn single(letter: SymbolId) -> Self {
        Word(vec![letter])
    }

    pub fn letters(&self) -> &[SymbolId] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

/// A finite formal sum of scalar-weighted words in canonical form.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Elem {
    terms: BTreeMap<Word, Scalar>,
}

impl Elem {
    pub fn zero() -> Self {
        Elem::default()
    }

    pub fn from_word(word: Word, coeff: Scalar) -> Self {
        let mut e = Elem::zero();
        e.add_word(word, coeff);
        e
    }

    pub fn from_symbol(id: SymbolId) -> Self {
        Elem::from_word(Word::single(id), scalar::from_int(1))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &Scalar)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn add_word(&mut self, word: Word, coeff: Scalar) {
        use std::collections::btree_map::Entry;
        if coeff.is_zero() {
            return;
        }
        match self.terms.entry(word) {
            Entry::Occupied(mut o) => {
                *o.get_mut() += coeff;
                if o.get().is_zero() {
                    o.remove();
                }
            }
            Entry::Vacant(v) => {
                v.insert(coeff);
            }
        }
    }

    pub fn add_scaled(&mut self, other: &Elem, factor: &Scalar) {
        if factor.is_zero() {
            return;
        }
        for (w, c) in other.terms() {
            self.add_word(w.clone(), c * factor);
        }
    }

    pub fn add(&mut self, other: &Elem) {
        self.add_scaled(other, &scalar::from_int(1));
    }

    pub fn sub(&mut self, other: &Elem) {
        self.add_scaled(other, &scalar::from_int(-1));
    }

    pub fn scaled(&self, factor: &Scalar) -> Elem {
        let mut out = Elem::zero();
        out.add_scaled(self, factor);
        out
    }

    pub fn negated(&self) -> Elem {
        self.scaled(&scalar::from_int(-1))
    }

    /// Common degree of all words, if the element is homogeneous.
    /// `Ok(None)` for the zero element.
    pub fn homogeneous_degree(&self, space: &Space) -> Result<Option<i64>> {
        let mut deg = None;
        for (w, _) in self.terms() {
            let d = space.word_degree(w);
            match deg {
                None => deg = Some(d),
                Some(existing) if existing != d => {
                    return Err(Error::Degree(format!(
                        "inhomogeneous element: degrees {existing} and {d}"
                    )))
                }
                _ => {}
            }
        }
        Ok(deg)
    }

    /// The element viewed as a linear combination of single letters.
    /// Errors if any word is longer than one letter.
    pub fn linear_terms(&self) -> Result<Vec<(SymbolId, Scalar)>> {
        let mut out = Vec::with_capacity(self.terms.len());
        for (w, c) in self.terms() {
            if w.len() != 1 {
                return Err(Error::Word(format!(
                    "expected a linear element, found a word of length {}",
                    w.len()
                )));
            }
            out.push((w.letters()[0], c.clone()));
        }
        Ok(out)
    }

    /// Restriction to words of exactly `len` letters.
    pub fn component_of_length(&self, len: usize) -> Elem {
        let mut out = Elem::zero();
        for (w, c) in self.terms() {
            if w.len() == len {
                out.add_word(w.clone(), c.clone());
            }
        }
        out
    }

    pub fn render(&self, space: &Space) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut items: Vec<(&Word, &Scalar)> = self.terms.iter().collect();
        items.sort_by(|a, b| {
            space
                .word_display_key(a.0)
                .cmp(&space.word_display_key(b.0))
        });
        items
            .iter()
            .map(|(w, c)| format!("{} {}", scalar::render(c), space.render_word(w)))
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "w[{}]",
            self.0
                .iter()
                .map(|s| s.0.to_string())
                .collect::<Vec<_>>()
                .join(",")
        )
    }
}

/// A formal sum of word pairs: the target of a coproduct.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct PairSum {
    terms: BTreeMap<(Word, Word), Scalar>,
}

impl PairSum {
    pub fn zero() -> Self {
        PairSum::default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_pair(&mut self, left: Word, right: Word, coeff: Scalar) {
        use std::collections::btree_map::Entry;
        if coeff.is_zero() {
            return;
        }
        match self.terms.entry((left, right)) {
            Entry::Occupied(mut o) => {
                *o.get_mut() += coeff;
                if o.get().is_zero() {
                    o.remove();
                }
            }
            Entry::Vacant(v) => {
                v.insert(coeff);
            }
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(Word, Word), &Scalar)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn sub(&mut self, other: &PairSum) {
        for ((l, r), c) in other.terms() {
            self.add_pair(l.clone(), r.clone(), -c.clone());
        }
    }

    pub fn render(&self, space: &Space) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        self.terms
            .iter()
            .map(|((l, r), c)| {
                format!(
                    "{} ({})({})",
                    scalar::render(c),
                    space.render_word(l),
                    space.render_word(r)
                )
            })
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::from_int;

    fn abc() -> Space {
        Space::new(vec![
            BasisSymbol::plain("a", 1),
            BasisSymbol::plain("b", 0),
            BasisSymbol::plain("c", 2),
        ])
        .unwrap()
    }

    #[test]
    fn duplicate_names_rejected() {
        let err = Space::new(vec![BasisSymbol::plain("a", 0), BasisSymbol::plain("a", 1)]);
        assert!(matches!(err, Err(Error::DuplicateSymbol(_))));
    }

    #[test]
    fn zero_coefficients_never_stored() {
        let sp = abc();
        let a = sp.id("a").unwrap();
        let mut e = Elem::zero();
        e.add_word(Word::single(a), from_int(2));
        e.add_word(Word::single(a), from_int(-2));
        assert!(e.is_zero());
        assert_eq!(e.num_terms(), 0);
    }

    #[test]
    fn homogeneity_detected() {
        let sp = abc();
        let a = sp.id("a").unwrap();
        let b = sp.id("b").unwrap();
        let mut e = Elem::from_symbol(a);
        assert_eq!(e.homogeneous_degree(&sp).unwrap(), Some(1));
        e.add_word(Word::single(b), from_int(1));
        assert!(e.homogeneous_degree(&sp).is_err());
    }

    #[test]
    fn pair_words_keep_loday_letters_first() {
        let sp = Space::new(vec![
            BasisSymbol::in_component("x", 1, Component::LodayPart),
            BasisSymbol::in_component("a", 0, Component::AssocPart),
        ])
        .unwrap();
        let x = sp.id("x").unwrap();
        let a = sp.id("a").unwrap();
        assert!(sp.tuple_is_valid(&[x, x, a]));
        assert!(!sp.tuple_is_valid(&[a, x]));
        // enumeration only yields valid tuples
        for t in sp.tuples(3) {
            assert!(sp.tuple_is_valid(&t));
        }
        assert_eq!(sp.tuples(2).len(), 3); // xx, xa, aa
    }

    #[test]
    fn weight_bound_respected() {
        let sp = Space::with_weights(
            vec![BasisSymbol::plain("u", 0), BasisSymbol::plain("v", 1)],
            vec![1, 2],
            3,
        )
        .unwrap();
        for t in sp.tuples(2) {
            assert!(sp.tuple_weight(&t).unwrap() <= 3);
        }
        // (v,v) has weight 4 and is excluded
        assert_eq!(sp.tuples(2).len(), 3);
    }

    #[test]
    fn shifted_space_moves_degrees() {
        let sp = abc();
        let up = sp.shifted(1);
        assert_eq!(up.degree(up.id("a").unwrap()), 2);
        assert_eq!(up.degree(up.id("b").unwrap()), 1);
        let back = up.shifted(-1);
        assert_eq!(back.degree(back.id("a").unwrap()), 1);
    }

    #[test]
    fn render_orders_by_name_then_length() {
        let sp = abc();
        let a = sp.id("a").unwrap();
        let b = sp.id("b").unwrap();
        let mut e = Elem::zero();
        e.add_word(Word::new(vec![b, a]), from_int(1));
        e.add_word(Word::single(a), from_int(3));
        e.add_word(Word::new(vec![a, b]), from_int(-1));
        assert_eq!(e.render(&sp), "3 a + -1 a\u{b7}b + 1 b\u{b7}a");
    }
}
