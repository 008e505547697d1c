//! Verification reports.
//!
//! Every suite answers with a [`VerificationReport`]: pass/fail, the number
//! of checks performed, the cutoffs under which the claim holds, and -- on
//! failure -- counterexample witnesses carrying both sides fully expanded so
//! that sign errors are diagnosable.  A pass is always a pass up to the
//! stated cutoffs.  Reports are deterministic for fixed inputs.

use serde::Serialize;

/// Witnesses kept per report; failures beyond this are counted, not stored.
const MAX_WITNESSES: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

/// The cutoffs a verification ran under.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Cutoffs {
    pub max_arity: usize,
    pub max_word_len: usize,
    pub t_order: usize,
}

impl Cutoffs {
    pub fn new(max_arity: usize, max_word_len: usize, t_order: usize) -> Self {
        Cutoffs {
            max_arity,
            max_word_len,
            t_order,
        }
    }
}

/// A failing check: the input it failed on and both sides fully expanded.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub input: String,
    pub lhs: String,
    pub rhs: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub suite: String,
    pub status: Status,
    pub checks: u64,
    pub failures: u64,
    pub witnesses: Vec<Witness>,
    pub cutoffs: Cutoffs,
}

impl std::fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.render_text())
    }
}

impl VerificationReport {
    pub fn new(suite: impl Into<String>, cutoffs: Cutoffs) -> Self {
        VerificationReport {
            suite: suite.into(),
            status: Status::Pass,
            checks: 0,
            failures: 0,
            witnesses: Vec::new(),
            cutoffs,
        }
    }

    /// Record one check; `witness` is `None` when the check held.
    pub fn record(&mut self, witness: Option<Witness>) {
        self.checks += 1;
        if let Some(w) = witness {
            self.failures += 1;
            self.status = Status::Fail;
            if self.witnesses.len() < MAX_WITNESSES {
                self.witnesses.push(w);
            }
        }
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    /// Merge another report into this one (same suite or a sub-check).
    pub fn absorb(&mut self, other: VerificationReport) {
        self.checks += other.checks;
        self.failures += other.failures;
        if other.status == Status::Fail {
            self.status = Status::Fail;
        }
        for w in other.witnesses {
            if self.witnesses.len() < MAX_WITNESSES {
                self.witnesses.push(w);
            }
        }
    }

    pub fn render_text(&self) -> String {
        let mut out = format!(
            "{}: {} (checks={}, max-arity={}, max-word-len={}, t-order={})",
            self.suite,
            match self.status {
                Status::Pass => "PASS",
                Status::Fail => "FAIL",
            },
            self.checks,
            self.cutoffs.max_arity,
            self.cutoffs.max_word_len,
            self.cutoffs.t_order,
        );
        if self.status == Status::Fail {
            out.push_str(&format!("\n  failures: {}", self.failures));
            for w in &self.witnesses {
                out.push_str(&format!(
                    "\n  at {}\n    lhs = {}\n    rhs = {}",
                    w.input, w.lhs, w.rhs
                ));
            }
        }
        out
    }
}
