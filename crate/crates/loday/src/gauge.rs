//! Gauge transformations of deformations and the induced coalgebra
//! isomorphisms.
//!
//! A gauge generator is a family `h_1, h_2, ...` of degree-0 derivations,
//! the coefficients of `h(t) = t h_1 + t^2 h_2 + ...` (no constant term).
//! Acting on a deformation `d` by `exp([-, h(t)])` produces a second
//! deformation order by order in `t`; every series here is a truncated
//! polynomial with explicit order, and each coefficient is exact.
//!
//! On the coalgebra side the generator turns into the degree-0 coderivation
//! with parts `arity i+1 -> derived_operator(h_i, i+1)`, and its exponential
//! is a coalgebra morphism: the series terminates on every fixed word
//! because each application strictly shortens words (no arity-1 part), so
//! the "infinite sum" is structurally finite.  The gauge suite checks that
//! conjugating the first structure's coderivation by the exponential
//! reproduces the transformed structure's coderivation word by word, that
//! the exponential is comultiplicative, and that the exponentials of `h`
//! and `-h` compose to the identity.

use crate::algebra::{AlgebraSpec, Deformation, Derivation};
use crate::coalgebra::{coproduct, CoalgebraFlavor, Coderivation};
use crate::derived::{derived_operator, ShStructure};
use crate::multimap::MultiMap;
use crate::report::{Cutoffs, VerificationReport, Witness};
use crate::scalar::{self, Scalar};
use crate::space::{Elem, PairSum, Space, Word};
use crate::{Error, Result};
use num::{BigInt, One};
use std::collections::BTreeMap;

/// The coefficients `h_1, h_2, ...` of a degree-0 gauge parameter with no
/// constant term.
#[derive(Debug, Clone)]
pub struct GaugeGenerator {
    hs: Vec<Derivation>,
}

impl GaugeGenerator {
    pub fn new(hs: Vec<Derivation>) -> Result<Self> {
        for (i, h) in hs.iter().enumerate() {
            if h.degree() != 0 && !h.is_zero() {
                return Err(Error::Degree(format!(
                    "gauge coefficient h_{} must have degree 0, got {}",
                    i + 1,
                    h.degree()
                )));
            }
        }
        Ok(GaugeGenerator { hs })
    }

    pub fn zero() -> Self {
        GaugeGenerator { hs: Vec::new() }
    }

    /// `h_i`, indexed from 1.
    pub fn coefficient(&self, i: usize) -> Option<&Derivation> {
        if i == 0 {
            return None;
        }
        self.hs.get(i - 1)
    }

    pub fn coefficients(&self) -> &[Derivation] {
        &self.hs
    }

    pub fn is_zero(&self) -> bool {
        self.hs.iter().all(|h| h.is_zero())
    }

    pub fn negated(&self, spec: &AlgebraSpec) -> Result<GaugeGenerator> {
        let hs = self
            .hs
            .iter()
            .map(|h| h.scaled(spec, &scalar::from_int(-1)))
            .collect::<Result<Vec<_>>>()?;
        GaugeGenerator::new(hs)
    }
}

// arity-1 map composition, the workhorse of the t-polynomial algebra
fn compose1(f: &MultiMap, g: &MultiMap) -> MultiMap {
    let mut values = BTreeMap::new();
    for (key, val) in g.support() {
        let mut out = Elem::zero();
        for (w, c) in val.terms() {
            out.add_scaled(&f.eval(&[w.letters()[0]]), c);
        }
        if !out.is_zero() {
            values.insert(key.clone(), out);
        }
    }
    MultiMap::from_raw_parts(1, f.degree() + g.degree(), values)
}

/// The gauge action `d' = exp([-, h(t)])(d)`, expanded order by order in
/// `t` and truncated at `t_order`.  The result is validated square zero up
/// to its truncation order.
pub fn gauge_transform(
    spec: &AlgebraSpec,
    def: &Deformation,
    h: &GaugeGenerator,
    t_order: usize,
) -> Result<Deformation> {
    // coefficient polynomials of d, zero-padded to the requested order
    let pad = |poly: &[MultiMap]| -> Vec<MultiMap> {
        let mut v = poly.to_vec();
        while v.len() <= t_order {
            v.push(MultiMap::zero(1, v.first().map_or(1, |m| m.degree())));
        }
        v.truncate(t_order + 1);
        v
    };
    let d_poly: Vec<MultiMap> = pad(&def
        .deltas()
        .iter()
        .map(|d| d.map().clone())
        .collect::<Vec<_>>());
    // [P, h(t)]: coefficient n = sum_{i+j=n, j>=1} (P_i h_j - h_j P_i)
    let bracket_with_h = |p: &[MultiMap]| -> Vec<MultiMap> {
        let mut out: Vec<MultiMap> = (0..=t_order)
            .map(|_| MultiMap::zero(1, p[0].degree()))
            .collect();
        for n in 0..=t_order {
            for j in 1..=n {
                let Some(hj) = h.coefficient(j) else { continue };
                if hj.is_zero() {
                    continue;
                }
                let pi = &p[n - j];
                if pi.is_zero() {
                    continue;
                }
                let mut term = compose1(pi, hj.map());
                term = term
                    .checked_sub(&compose1(hj.map(), pi))
                    .expect("degrees match");
                out[n] = out[n].checked_add(&term).expect("degrees match");
            }
        }
        out
    };
    let mut result = d_poly.clone();
    let mut current = d_poly;
    let mut factorial = BigInt::one();
    for m in 1..=t_order {
        current = bracket_with_h(&current);
        factorial *= m as i64;
        let inv = Scalar::new(BigInt::one(), factorial.clone());
        for n in 0..=t_order {
            result[n] = result[n]
                .checked_add(&current[n].scaled(&inv))
                .expect("degrees match");
        }
    }
    let deltas = result
        .into_iter()
        .map(|map| Derivation::new(spec, map))
        .collect::<Result<Vec<_>>>()?;
    Deformation::new(spec, deltas)
}

/// The coderivation of a gauge generator: parts `i+1 -> derived_operator(h_i, i+1)`,
/// degree 0, deconcatenation flavor.
pub fn gauge_coderivation(spec: &AlgebraSpec, h: &GaugeGenerator) -> Result<Coderivation> {
    let mut parts = Vec::new();
    for (idx, hi) in h.coefficients().iter().enumerate() {
        if hi.is_zero() {
            continue;
        }
        parts.push(derived_operator(spec, hi, idx + 2)?);
    }
    Coderivation::from_parts(spec.space(), parts, CoalgebraFlavor::Deconcatenation, 0)
}

/// The exponential of a length-decreasing degree-0 coderivation, as a
/// coalgebra morphism: `1 + G + G^2/2! + ...`, exact and finite on every
/// word.  The corestriction parts up to `max_arity` are materialized for
/// inspection; evaluation runs the series.
#[derive(Debug, Clone)]
pub struct CoalgebraMorphism {
    generator: Coderivation,
    parts: BTreeMap<usize, MultiMap>,
    max_arity: usize,
    t_order: usize,
}

pub fn exp_coderivation(
    space: &Space,
    generator: &Coderivation,
    max_arity: usize,
    t_order: usize,
) -> Result<CoalgebraMorphism> {
    if generator.part(1).is_some() {
        return Err(Error::NonTerminating(
            "the exponential of a coderivation with an arity-1 part does not terminate on fixed words".into(),
        ));
    }
    if generator.degree() != 0 && !generator.is_zero() {
        return Err(Error::Degree(
            "coalgebra morphisms are generated by degree-0 coderivations".into(),
        ));
    }
    let mut morphism = CoalgebraMorphism {
        generator: generator.clone(),
        parts: BTreeMap::new(),
        max_arity,
        t_order,
    };
    let mut parts = BTreeMap::new();
    for arity in 1..=max_arity {
        let mut values = BTreeMap::new();
        for tuple in space.tuples(arity) {
            let word = Word::new(tuple.clone());
            let val = morphism.eval_word(space, &word).component_of_length(1);
            if !val.is_zero() {
                values.insert(tuple, val);
            }
        }
        let part = MultiMap::new(space, arity, 0, values)?;
        if !part.is_zero() {
            parts.insert(arity, part);
        }
    }
    morphism.parts = parts;
    Ok(morphism)
}

impl CoalgebraMorphism {
    pub fn generator(&self) -> &Coderivation {
        &self.generator
    }

    /// Corestriction part at the given arity (arity 1 is the identity and
    /// is not stored).
    pub fn part(&self, arity: usize) -> Option<&MultiMap> {
        self.parts.get(&arity)
    }

    pub fn truncation(&self) -> (usize, usize) {
        (self.max_arity, self.t_order)
    }

    /// `exp(G)(word)`: the series terminates because every application of
    /// the generator shortens the word.
    pub fn eval_word(&self, space: &Space, word: &Word) -> Elem {
        let mut total = Elem::from_word(word.clone(), scalar::from_int(1));
        let mut current = total.clone();
        let mut factorial = BigInt::one();
        let mut m = 1i64;
        loop {
            current = self.generator.eval_elem(space, &current);
            if current.is_zero() {
                break;
            }
            factorial *= m;
            total.add_scaled(&current, &Scalar::new(BigInt::one(), factorial.clone()));
            m += 1;
        }
        total
    }

    pub fn eval_elem(&self, space: &Space, elem: &Elem) -> Elem {
        let mut out = Elem::zero();
        for (w, c) in elem.terms() {
            out.add_scaled(&self.eval_word(space, w), c);
        }
        out
    }

    /// The inverse morphism, generated by the negated coderivation.
    pub fn inverse(&self, space: &Space) -> Result<CoalgebraMorphism> {
        exp_coderivation(
            space,
            &self.generator.negated(),
            self.max_arity,
            self.t_order,
        )
    }
}

/// Comultiplicativity of a morphism: `Delta E = (E (x) E) Delta` on every
/// word up to `max_word_len` (both sides through the deconcatenation
/// coproduct; the morphism has degree 0, so no interchange signs appear).
pub fn verify_comultiplicativity(
    space: &Space,
    e: &CoalgebraMorphism,
    max_word_len: usize,
) -> VerificationReport {
    let (max_arity, t_order) = e.truncation();
    let mut report = VerificationReport::new(
        "comultiplicativity",
        Cutoffs::new(max_arity, max_word_len, t_order),
    );
    for word in space.words_up_to(max_word_len) {
        let mut lhs = PairSum::zero();
        for (w, c) in e.eval_word(space, &word).terms() {
            let inner =
                coproduct(space, w, CoalgebraFlavor::Deconcatenation).expect("plain flavor");
            for ((u, v), cc) in inner.terms() {
                lhs.add_pair(u.clone(), v.clone(), c * cc);
            }
        }
        let mut rhs = PairSum::zero();
        let outer =
            coproduct(space, &word, CoalgebraFlavor::Deconcatenation).expect("plain flavor");
        for ((u, v), c) in outer.terms() {
            let eu = e.eval_word(space, u);
            let ev = e.eval_word(space, v);
            for (u2, cu) in eu.terms() {
                for (v2, cv) in ev.terms() {
                    rhs.add_pair(u2.clone(), v2.clone(), c * cu * cv);
                }
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

/// The gauge equivalence suite: on every word up to `max_word_len`,
///
/// * the transformed structure's coderivation equals the conjugation
///   `exp(-G) . D . exp(G)` of the original one,
/// * the exponential is comultiplicative,
/// * the exponentials of the generator and its negation compose to the
///   identity.
///
/// The caller is responsible for building the transformed structure to a
/// `t`-order of at least `max_word_len - 1`: words of length `n` see the
/// arity-`n` part, i.e. the order `n-1` coefficient of the transformed
/// deformation.
pub fn verify_gauge(
    space: &Space,
    original: &ShStructure,
    transformed: &ShStructure,
    e: &CoalgebraMorphism,
    max_word_len: usize,
) -> VerificationReport {
    let (max_arity, t_order) = e.truncation();
    let mut report = VerificationReport::new(
        "gauge-equivalence",
        Cutoffs::new(max_arity, max_word_len, t_order),
    );
    let e_inv = match e.inverse(space) {
        Ok(inv) => inv,
        Err(err) => {
            report.record(Some(Witness {
                input: "inverse construction".into(),
                lhs: err.to_string(),
                rhs: String::new(),
            }));
            return report;
        }
    };
    for word in space.words_up_to(max_word_len) {
        // conjugation identity
        let lhs = transformed.coder().eval_word(space, &word);
        let rhs = e_inv.eval_elem(
            space,
            &original
                .coder()
                .eval_elem(space, &e.eval_word(space, &word)),
        );
        let mut diff = lhs.clone();
        diff.sub(&rhs);
        report.record(if diff.is_zero() {
            None
        } else {
            Some(Witness {
                input: format!("conjugation at {}", space.render_word(&word)),
                lhs: lhs.render(space),
                rhs: rhs.render(space),
            })
        });
        // two-sided inverse identity
        let round = e_inv.eval_elem(space, &e.eval_word(space, &word));
        let expected = Elem::from_word(word.clone(), scalar::from_int(1));
        report.record(if round == expected {
            None
        } else {
            Some(Witness {
                input: format!("inverse at {}", space.render_word(&word)),
                lhs: round.render(space),
                rhs: expected.render(space),
            })
        });
    }
    report.absorb(verify_comultiplicativity(space, e, max_word_len));
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{build_truncated_free, inner_derivation};
    use crate::derived::derived_product_structure;
    use crate::sampling;

    fn gens_01() -> Vec<(String, i64)> {
        vec![("g1".into(), 0), ("g2".into(), 1)]
    }

    fn setup() -> (AlgebraSpec, Deformation, GaugeGenerator) {
        let alg = build_truncated_free(&gens_01(), 4).unwrap();
        let sp = alg.space();
        let mut gv = BTreeMap::new();
        gv.insert(
            sp.id("g1").unwrap(),
            Elem::from_symbol(sp.id("g2").unwrap()),
        );
        let d1 = Derivation::from_generator_values(&alg, 1, &gv).unwrap();
        let def = Deformation::new(&alg, vec![Derivation::zero(1), d1]).unwrap();
        let h1 = inner_derivation(&alg, &Elem::from_symbol(sp.id("g1\u{b7}g1").unwrap())).unwrap();
        let h2 = sampling::scaling_derivation(&alg, sp.id("g1").unwrap()).unwrap();
        let h = GaugeGenerator::new(vec![h1, h2]).unwrap();
        (alg, def, h)
    }

    #[test]
    fn zero_gauge_is_the_identity() {
        let (alg, def, _) = setup();
        let out = gauge_transform(&alg, &def, &GaugeGenerator::zero(), 3).unwrap();
        for (i, d) in out.deltas().iter().enumerate() {
            match def.deltas().get(i) {
                Some(orig) => assert_eq!(d.map(), orig.map()),
                None => assert!(d.is_zero()),
            }
        }
    }

    // Independent oracle: conjugation by the operator exponential of the
    // t-polynomial h(t), computed coefficient by coefficient, must agree
    // with the bracket-series expansion used by gauge_transform.
    #[test]
    fn gauge_matches_operator_conjugation_series() {
        let (alg, def, h) = setup();
        let sp = alg.space();
        let order = 3usize;
        let out = gauge_transform(&alg, &def, &h, order).unwrap();
        // exp(s * h(t)) as a t-polynomial of arity-1 maps
        let exp_poly = |sign: i64| -> Vec<MultiMap> {
            let identity = {
                let mut values = BTreeMap::new();
                for (id, _) in sp.symbols() {
                    values.insert(vec![id], Elem::from_symbol(id));
                }
                MultiMap::new(sp, 1, 0, values).unwrap()
            };
            let mut acc: Vec<MultiMap> = (0..=order).map(|_| MultiMap::zero(1, 0)).collect();
            acc[0] = identity;
            // h(t) coefficients, signed
            let mut hp: Vec<MultiMap> = (0..=order).map(|_| MultiMap::zero(1, 0)).collect();
            for (i, hi) in h.coefficients().iter().enumerate() {
                if i < order {
                    hp[i + 1] = hi.map().scaled(&scalar::from_int(sign));
                }
            }
            let mut power: Vec<MultiMap> = acc.clone(); // h^0 = identity
            let mut factorial = BigInt::one();
            for m in 1..=order {
                // power := power * h(t)
                let mut next: Vec<MultiMap> = (0..=order).map(|_| MultiMap::zero(1, 0)).collect();
                for n in 0..=order {
                    for j in 1..=n {
                        if hp[j].is_zero() || power[n - j].is_zero() {
                            continue;
                        }
                        let term = compose1(&power[n - j], &hp[j]);
                        next[n] = next[n].checked_add(&term).unwrap();
                    }
                }
                power = next;
                factorial *= m as i64;
                let inv = Scalar::new(BigInt::one(), factorial.clone());
                for n in 0..=order {
                    acc[n] = acc[n].checked_add(&power[n].scaled(&inv)).unwrap();
                }
            }
            acc
        };
        let exp_minus = exp_poly(-1);
        let exp_plus = exp_poly(1);
        let d_poly: Vec<MultiMap> = {
            let mut v: Vec<MultiMap> = def.deltas().iter().map(|d| d.map().clone()).collect();
            while v.len() <= order {
                v.push(MultiMap::zero(1, 1));
            }
            v
        };
        // conj = exp(-h) . d . exp(h), coefficientwise
        let mut conj: Vec<MultiMap> = (0..=order).map(|_| MultiMap::zero(1, 1)).collect();
        for a in 0..=order {
            for b in 0..=order - a {
                for c in 0..=order - a - b {
                    if exp_minus[a].is_zero() || d_poly[b].is_zero() || exp_plus[c].is_zero() {
                        continue;
                    }
                    let term = compose1(&compose1(&exp_minus[a], &d_poly[b]), &exp_plus[c]);
                    conj[a + b + c] = conj[a + b + c].checked_add(&term).unwrap();
                }
            }
        }
        for (n, expected) in conj.iter().enumerate() {
            let got = out
                .deltas()
                .get(n)
                .map(|d| d.map().clone())
                .unwrap_or_else(|| MultiMap::zero(1, 1));
            assert_eq!(&got, expected, "coefficient {n}");
        }
        // and the displayed first-order formula: delta'_1 = delta_1 + [delta_0, h_1]
        // (here delta_0 = 0, so delta'_1 = delta_1)
        assert_eq!(out.deltas()[1].map(), def.deltas()[1].map());
    }

    #[test]
    fn first_order_coefficient_formula() {
        // with a nonzero delta_0: delta'_1 = delta_1 + [delta_0, h_1]
        let alg = build_truncated_free(&gens_01(), 4).unwrap();
        let sp = alg.space();
        let mut gv = BTreeMap::new();
        gv.insert(
            sp.id("g1").unwrap(),
            Elem::from_symbol(sp.id("g2").unwrap()),
        );
        let d0 = Derivation::from_generator_values(&alg, 1, &gv).unwrap();
        let def = Deformation::new(&alg, vec![d0.clone(), d0.clone()]).unwrap();
        let h1 = inner_derivation(&alg, &Elem::from_symbol(sp.id("g1\u{b7}g1").unwrap())).unwrap();
        let h = GaugeGenerator::new(vec![h1.clone()]).unwrap();
        let out = gauge_transform(&alg, &def, &h, 2).unwrap();
        let expected = d0
            .checked_add(&alg, &Derivation::commutator(&alg, &d0, &h1).unwrap())
            .unwrap();
        assert_eq!(out.deltas()[1].map(), expected.map());
        assert!(!Derivation::commutator(&alg, &d0, &h1).unwrap().is_zero());
    }

    #[test]
    fn gauge_round_trip_restores_the_deformation() {
        let (alg, def, h) = setup();
        let order = 3usize;
        let there = gauge_transform(&alg, &def, &h, order).unwrap();
        let back = gauge_transform(&alg, &there, &h.negated(&alg).unwrap(), order).unwrap();
        for n in 0..=order {
            let got = back
                .deltas()
                .get(n)
                .map(|d| d.map().clone())
                .unwrap_or_else(|| MultiMap::zero(1, 1));
            let want = def
                .deltas()
                .get(n)
                .map(|d| d.map().clone())
                .unwrap_or_else(|| MultiMap::zero(1, 1));
            assert_eq!(got, want, "coefficient {n}");
        }
    }

    #[test]
    fn exponential_small_cases() {
        let (alg, _, h) = setup();
        let sp = alg.space();
        // zero generator -> identity morphism
        let zero = Coderivation::zero(CoalgebraFlavor::Deconcatenation, 0);
        let id = exp_coderivation(sp, &zero, 3, 0).unwrap();
        for word in sp.words_up_to(3) {
            assert_eq!(
                id.eval_word(sp, &word),
                Elem::from_word(word.clone(), scalar::from_int(1))
            );
        }
        // the generator's corestriction: one part per gauge coefficient,
        // at arity index+1, equal to the derived operator of the coefficient
        let g = gauge_coderivation(&alg, &h).unwrap();
        assert_eq!(
            g.corestrict().keys().copied().collect::<Vec<_>>(),
            vec![2, 3]
        );
        for (idx, hi) in h.coefficients().iter().enumerate() {
            let direct = crate::derived::derived_operator(&alg, hi, idx + 2).unwrap();
            assert_eq!(g.part(idx + 2), Some(&direct));
        }
        // a one-coefficient generator has a single binary part
        let h1_only = GaugeGenerator::new(vec![h.coefficients()[0].clone()]).unwrap();
        let g1 = gauge_coderivation(&alg, &h1_only).unwrap();
        assert_eq!(g1.corestrict().keys().copied().collect::<Vec<_>>(), vec![2]);
        // on two-letter words only 1 + G contributes
        let e = exp_coderivation(sp, &g, 4, h.coefficients().len()).unwrap();
        for tuple in sp.tuples(2) {
            let word = Word::new(tuple);
            let mut expected = Elem::from_word(word.clone(), scalar::from_int(1));
            expected.add(&g.eval_word(sp, &word));
            assert_eq!(e.eval_word(sp, &word), expected);
        }
        // an arity-1 part is rejected
        let bad = Coderivation::lift(
            sp,
            sampling::scaling_derivation(&alg, sp.id("g1").unwrap())
                .unwrap()
                .map()
                .clone(),
            CoalgebraFlavor::Deconcatenation,
        )
        .unwrap();
        assert!(matches!(
            exp_coderivation(sp, &bad, 3, 1),
            Err(Error::NonTerminating(_))
        ));
    }

    #[test]
    fn full_gauge_suite_passes() {
        let (alg, def, h) = setup();
        let sp = alg.space();
        let max_word_len = 4usize;
        let transformed = gauge_transform(&alg, &def, &h, max_word_len - 1).unwrap();
        let s = derived_product_structure(&alg, &def).unwrap();
        let s2 = derived_product_structure(&alg, &transformed).unwrap();
        let g = gauge_coderivation(&alg, &h).unwrap();
        let e = exp_coderivation(sp, &g, max_word_len, h.coefficients().len()).unwrap();
        let report = verify_gauge(sp, &s, &s2, &e, max_word_len);
        assert!(report.passed(), "{report}");
        // negative control: an exponential built from a different generator
        let other = GaugeGenerator::new(vec![sampling::scaling_derivation(
            &alg,
            sp.id("g2").unwrap(),
        )
        .unwrap()])
        .unwrap();
        let g_bad = gauge_coderivation(&alg, &other).unwrap();
        let e_bad = exp_coderivation(sp, &g_bad, max_word_len, 1).unwrap();
        let report_bad = verify_gauge(sp, &s, &s2, &e_bad, max_word_len);
        assert!(!report_bad.passed());
        assert!(!report_bad.witnesses.is_empty());
    }
}
