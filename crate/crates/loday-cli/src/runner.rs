//! Suite orchestration: maps suite selections onto the library checks and
//! assembles one deterministic report.  Exit status is a pure function of
//! the report: 0 when every executed suite passed, 1 otherwise.

use loday::algebra::{inner_derivation, AlgebraKind, Derivation};
use loday::derived::{derived_loday_structure, derived_pair_structure, derived_product_structure};
use loday::gauge::{exp_coderivation, gauge_coderivation, gauge_transform, verify_gauge};
use loday::report::{Cutoffs, Status, VerificationReport, Witness};
use loday::space::{Component, Elem};
use loday::specfile::SpecFile;
use loday::verify::{
    verify_linfty_reduction, verify_operator_identity, verify_pair_restrictions, verify_sh,
    verify_subcomplex,
};
use loday::Error;
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Suite {
    AInfinity,
    ShLoday,
    LodayPair,
    OperatorIdentities,
    Subcomplex,
    Gauge,
    Linfty,
}

impl Suite {
    pub const ALL: [Suite; 7] = [
        Suite::AInfinity,
        Suite::ShLoday,
        Suite::LodayPair,
        Suite::OperatorIdentities,
        Suite::Subcomplex,
        Suite::Gauge,
        Suite::Linfty,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::AInfinity => "a-infinity",
            Suite::ShLoday => "sh-loday",
            Suite::LodayPair => "loday-pair",
            Suite::OperatorIdentities => "operator-identities",
            Suite::Subcomplex => "subcomplex",
            Suite::Gauge => "gauge",
            Suite::Linfty => "linfty",
        }
    }
}

/// Effective cutoffs: command-line flags override file options, which
/// override the defaults (5, 6, 3).
#[derive(Debug, Clone, Copy, Serialize)]
pub struct EffectiveCutoffs {
    pub max_arity: usize,
    pub max_word_len: usize,
    pub t_order: usize,
}

pub fn effective_cutoffs(
    file: &SpecFile,
    max_arity: Option<usize>,
    max_word_len: Option<usize>,
    t_order: Option<usize>,
) -> EffectiveCutoffs {
    EffectiveCutoffs {
        max_arity: max_arity.or(file.options.max_arity).unwrap_or(5),
        max_word_len: max_word_len.or(file.options.max_word_len).unwrap_or(6),
        t_order: t_order.or(file.options.t_order).unwrap_or(3),
    }
}

#[derive(Debug, Serialize)]
pub struct SkippedSuite {
    pub suite: &'static str,
    pub reason: String,
}

#[derive(Debug, Serialize)]
pub struct RunReport {
    pub input: String,
    pub kind: &'static str,
    pub cutoffs: EffectiveCutoffs,
    pub suites: Vec<VerificationReport>,
    pub skipped: Vec<SkippedSuite>,
    pub status: Status,
}

impl RunReport {
    pub fn exit_code(&self) -> i32 {
        match self.status {
            Status::Pass => 0,
            Status::Fail => 1,
        }
    }

    pub fn render_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("input: {} (kind {})\n", self.input, self.kind));
        for s in &self.suites {
            out.push_str(&s.render_text());
            out.push('\n');
        }
        for s in &self.skipped {
            out.push_str(&format!("{}: SKIPPED ({})\n", s.suite, s.reason));
        }
        out.push_str(match self.status {
            Status::Pass => "status: PASS\n",
            Status::Fail => "status: FAIL\n",
        });
        out
    }

    pub fn render_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }
}

fn failure_report(suite: &str, cutoffs: Cutoffs, error: &Error) -> VerificationReport {
    let mut report = VerificationReport::new(suite, cutoffs);
    report.record(Some(Witness {
        input: "construction".into(),
        lhs: error.to_string(),
        rhs: String::new(),
    }));
    report
}

/// Why a suite cannot run on this input, if it cannot.
fn applicability(file: &SpecFile, suite: Suite) -> Option<String> {
    let kind = file.algebra.kind();
    let needs = |want: AlgebraKind, name: &str| -> Option<String> {
        (kind != want).then(|| format!("needs a {name} input, file kind is {}", file.kind.as_str()))
    };
    match suite {
        Suite::AInfinity => needs(AlgebraKind::Associative, "associative").or_else(|| {
            file.deformation
                .is_none()
                .then(|| "needs a [deformation] section".to_string())
        }),
        Suite::ShLoday => needs(AlgebraKind::Loday, "Loday").or_else(|| {
            file.deformation
                .is_none()
                .then(|| "needs a [deformation] section".to_string())
        }),
        Suite::Linfty => needs(AlgebraKind::Loday, "Loday")
            .or_else(|| {
                file.deformation
                    .is_none()
                    .then(|| "needs a [deformation] section".to_string())
            })
            .or_else(|| {
                // the skew precondition, probed without running any words
                match derived_loday_structure(
                    &file.algebra,
                    file.deformation.as_ref().expect("checked"),
                )
                .and_then(|s| verify_linfty_reduction(file.algebra.space(), &s, 0))
                {
                    Ok(_) => None,
                    Err(e) => Some(e.to_string()),
                }
            }),
        Suite::LodayPair => needs(AlgebraKind::LodayPair, "Loday-pair").or_else(|| {
            file.deformation
                .is_none()
                .then(|| "needs a [deformation] section".to_string())
        }),
        Suite::OperatorIdentities => (derivation_corpus(file).is_empty())
            .then(|| "needs a [deformation] or [gauge] section".to_string()),
        Suite::Subcomplex => needs(AlgebraKind::Associative, "associative").or_else(|| {
            let trivial = file.deformation.as_ref().is_some_and(|d| {
                d.deltas().len() == 2 && d.deltas()[0].is_zero() && !d.deltas()[1].is_zero()
            });
            (!trivial)
                .then(|| "needs the two-coefficient deformation d = t d1 (d0 absent)".to_string())
        }),
        Suite::Gauge => needs(AlgebraKind::Associative, "associative")
            .or_else(|| {
                file.deformation
                    .is_none()
                    .then(|| "needs a [deformation] section".to_string())
            })
            .or_else(|| {
                file.gauge
                    .is_none()
                    .then(|| "needs a [gauge] section".to_string())
            }),
    }
}

/// The deterministic derivation corpus of a file: nonzero deformation
/// coefficients, then gauge coefficients, then the adjoints of the basis
/// generators (or of every basis element for explicit kinds).
fn derivation_corpus(file: &SpecFile) -> Vec<Derivation> {
    let mut out = Vec::new();
    if let Some(def) = &file.deformation {
        out.extend(def.deltas().iter().filter(|d| !d.is_zero()).cloned());
    }
    if let Some(gauge) = &file.gauge {
        out.extend(
            gauge
                .coefficients()
                .iter()
                .filter(|h| !h.is_zero())
                .cloned(),
        );
    }
    let space = file.algebra.space();
    let adjoint_sources: Vec<_> = match file.algebra.free_structure() {
        Some(free) => free.generators.clone(),
        None => space
            .symbols()
            .filter(|(_, s)| s.component != Component::AssocPart)
            .map(|(id, _)| id)
            .take(4)
            .collect(),
    };
    for id in adjoint_sources {
        if let Ok(d) = inner_derivation(&file.algebra, &Elem::from_symbol(id)) {
            if !d.is_zero() {
                out.push(d);
            }
        }
    }
    out
}

fn run_suite(file: &SpecFile, suite: Suite, cutoffs: EffectiveCutoffs) -> VerificationReport {
    let spec = &file.algebra;
    let space = spec.space();
    let rc = Cutoffs::new(cutoffs.max_arity, cutoffs.max_word_len, cutoffs.t_order);
    match suite {
        Suite::AInfinity => {
            match derived_product_structure(spec, file.deformation.as_ref().expect("checked")) {
                Ok(s) => {
                    let mut report = verify_sh(space, &s, cutoffs.max_arity, cutoffs.max_word_len);
                    report.suite = suite.name().to_string();
                    report
                }
                Err(e) => failure_report(suite.name(), rc, &e),
            }
        }
        Suite::ShLoday => {
            match derived_loday_structure(spec, file.deformation.as_ref().expect("checked")) {
                Ok(s) => {
                    let mut report = verify_sh(space, &s, cutoffs.max_arity, cutoffs.max_word_len);
                    report.suite = suite.name().to_string();
                    report
                }
                Err(e) => failure_report(suite.name(), rc, &e),
            }
        }
        Suite::LodayPair => run_pair_suite(file, cutoffs),
        Suite::OperatorIdentities => {
            let mut report = VerificationReport::new(suite.name(), rc);
            let corpus = derivation_corpus(file);
            let top = cutoffs.max_arity.min(4);
            for (i, d1) in corpus.iter().enumerate() {
                for d2 in corpus.iter().skip(i) {
                    for k in 1..=top {
                        for l in 1..=top {
                            report.absorb(verify_operator_identity(spec, d1, d2, k, l));
                        }
                    }
                }
            }
            report.suite = suite.name().to_string();
            report
        }
        Suite::Subcomplex => {
            let def = file.deformation.as_ref().expect("checked");
            let delta1 = &def.deltas()[1];
            let mut report = VerificationReport::new(suite.name(), rc);
            for d in derivation_corpus(file) {
                for i in 1..cutoffs.max_arity.max(2) {
                    report.absorb(verify_subcomplex(spec, delta1, &d, i));
                }
            }
            report.suite = suite.name().to_string();
            report
        }
        Suite::Gauge => {
            let def = file.deformation.as_ref().expect("checked");
            let h = file.gauge.as_ref().expect("checked");
            let run = || -> Result<VerificationReport, Error> {
                let order = cutoffs
                    .t_order
                    .max(cutoffs.max_word_len.saturating_sub(1))
                    .max(def.t_order());
                let transformed = gauge_transform(spec, def, h, order)?;
                let s = derived_product_structure(spec, def)?;
                let s2 = derived_product_structure(spec, &transformed)?;
                let generator = gauge_coderivation(spec, h)?;
                let e = exp_coderivation(space, &generator, cutoffs.max_word_len, order)?;
                Ok(verify_gauge(space, &s, &s2, &e, cutoffs.max_word_len))
            };
            let mut report = match run() {
                Ok(r) => r,
                Err(e) => failure_report(suite.name(), rc, &e),
            };
            report.suite = suite.name().to_string();
            report
        }
        Suite::Linfty => {
            match derived_loday_structure(spec, file.deformation.as_ref().expect("checked"))
                .and_then(|s| verify_linfty_reduction(space, &s, cutoffs.max_word_len))
            {
                Ok(mut report) => {
                    report.suite = suite.name().to_string();
                    report
                }
                Err(e) => failure_report(suite.name(), rc, &e),
            }
        }
    }
}

/// The pair suite: the homotopy relation of the unified structure, plus
/// the termwise coincidence of its pure-component restrictions with the
/// two one-component constructions.
fn run_pair_suite(file: &SpecFile, cutoffs: EffectiveCutoffs) -> VerificationReport {
    let spec = &file.algebra;
    let space = spec.space();
    let def = file.deformation.as_ref().expect("checked");
    let rc = Cutoffs::new(cutoffs.max_arity, cutoffs.max_word_len, cutoffs.t_order);
    let mut report = match derived_pair_structure(spec, def) {
        Ok(s) => {
            let mut report = verify_sh(space, &s, cutoffs.max_arity, cutoffs.max_word_len);
            report.absorb(verify_pair_restrictions(spec, def, &s, cutoffs.max_arity));
            report
        }
        Err(e) => failure_report("loday-pair", rc, &e),
    };
    report.suite = "loday-pair".to_string();
    report
}

/// Upper bound on the enumeration size a run may request; beyond it the
/// cutoffs are rejected as a usage error rather than ground through.
const MAX_ENUMERATED_TUPLES: f64 = 5e7;

fn enumeration_estimate(file: &SpecFile, cutoffs: EffectiveCutoffs) -> f64 {
    let space = file.algebra.space();
    let len = cutoffs.max_arity.max(cutoffs.max_word_len);
    if space.truncation().is_some() {
        // weight-bounded enumeration: tuples are compositions of the
        // truncation weight into generator words
        let gens = file
            .algebra
            .free_structure()
            .map(|f| f.generators.len())
            .unwrap_or(2) as f64;
        let t = space.truncation().unwrap_or(1) as f64;
        (2.0 * gens).powf(t)
    } else {
        (space.len() as f64).powi(len as i32)
    }
}

/// Executes the selected suites.  With an explicit selection an
/// inapplicable suite is an error (usage, exit 2); under `all`,
/// inapplicable suites are reported as skipped.
pub fn run(
    file: &SpecFile,
    input_name: &str,
    selection: &[Suite],
    all: bool,
    cutoffs: EffectiveCutoffs,
) -> Result<RunReport, String> {
    let estimate = enumeration_estimate(file, cutoffs);
    if estimate > MAX_ENUMERATED_TUPLES {
        return Err(format!(
            "cutoffs require on the order of {estimate:.1e} tuple evaluations, over the configured bound of {MAX_ENUMERATED_TUPLES:.0e}; lower --max-word-len or --max-arity"
        ));
    }
    let mut suites = Vec::new();
    let mut skipped = Vec::new();
    for &suite in selection {
        match applicability(file, suite) {
            Some(reason) if all => skipped.push(SkippedSuite {
                suite: suite.name(),
                reason,
            }),
            Some(reason) => {
                return Err(format!(
                    "suite {} is not applicable: {reason}",
                    suite.name()
                ))
            }
            None => suites.push(run_suite(file, suite, cutoffs)),
        }
    }
    let status = if suites.iter().all(|s| s.passed()) {
        Status::Pass
    } else {
        Status::Fail
    };
    Ok(RunReport {
        input: input_name.to_string(),
        kind: file.kind.as_str(),
        cutoffs,
        suites,
        skipped,
        status,
    })
}
