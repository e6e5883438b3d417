//! Embedded reference tables and comparison of solved chains against them.
//!
//! The crate ships the coefficient tables of the published construction as
//! plain-text fixtures, one file per model and level.  This module provides:
//!
//! - [`FixtureTable`]: a parsed table with its model, level, and entries.
//! - [`builtin`] and [`table`]: access to the embedded tables.
//! - [`compare_chain`]: classify every published coefficient against a
//!   freshly solved chain, producing a [`DiffReport`].
//! - [`refute_entry`]: for a coefficient that disagrees with the solver,
//!   produce machine evidence that the published value cannot satisfy the
//!   defining conditions of the chain.
//!
//! Each table row carries a location token (such as `sec4:Psi_2_1`) so a
//! discrepancy can be traced back to the exact printed expression, and a
//! confidence grade: rows marked `low` are suspected misprints, and the
//! test suite requires a refutation for each of them.

use std::fmt;

use crate::algebra::model::{Model, ModelError, ModelSpec};
use crate::chain::JordanChain;
use crate::field::{divide_exact, parse_ratio, poly_lcm, ParamPoly, ParamRatio, ParseError};
use crate::vacuum::VacMonomial;

/// Name and raw text of every table shipped with the crate.
pub const TABLE_SOURCES: &[(&str, &str)] = &[
    ("harmonic_n1", include_str!("fixtures/harmonic_n1.table")),
    ("harmonic_n3", include_str!("fixtures/harmonic_n3.table")),
    ("quartic_n1", include_str!("fixtures/quartic_n1.table")),
    ("quartic_n2", include_str!("fixtures/quartic_n2.table")),
    ("quartic_n3", include_str!("fixtures/quartic_n3.table")),
    ("quartic_n4", include_str!("fixtures/quartic_n4.table")),
    ("quartic_n5", include_str!("fixtures/quartic_n5.table")),
    ("cubic_quartic_n1", include_str!("fixtures/cubic_quartic_n1.table")),
    ("cubic_quartic_n2", include_str!("fixtures/cubic_quartic_n2.table")),
    ("sextic_n1", include_str!("fixtures/sextic_n1.table")),
    ("sextic_n2", include_str!("fixtures/sextic_n2.table")),
];

/// How much trust a table row deserves before any computation is run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Confidence {
    /// Transcribed from a clean printed expression.
    High,
    /// The printed expression looks internally inconsistent (wrong
    /// dimensions, clashing repeats, damaged brackets nearby).
    Low,
}

/// One published coefficient: the value multiplying `Ap^i Bp^j |0>`.
#[derive(Debug, Clone)]
pub struct FixtureEntry {
    pub i: u32,
    pub j: u32,
    /// Published value with the table prefactor already multiplied in.
    pub value: ParamRatio,
    /// Location token identifying the printed expression.
    pub citation: String,
    pub confidence: Confidence,
}

/// All published coefficients of one associated function.
#[derive(Debug, Clone)]
pub struct FixtureState {
    /// Position in the chain; the eigenstate itself is `m = 0`.
    pub m: u32,
    pub entries: Vec<FixtureEntry>,
}

impl FixtureState {
    /// Look up the published entry at `Ap^i Bp^j`, if the table lists one.
    pub fn entry(&self, i: u32, j: u32) -> Option<&FixtureEntry> {
        self.entries.iter().find(|e| e.i == i && e.j == j)
    }
}

/// A parsed reference table: every published coefficient of one chain.
#[derive(Debug, Clone)]
pub struct FixtureTable {
    pub name: String,
    pub spec: ModelSpec,
    pub n: u32,
    pub states: Vec<FixtureState>,
}

impl FixtureTable {
    pub fn state(&self, m: u32) -> Option<&FixtureState> {
        self.states.iter().find(|s| s.m == m)
    }
}

/// Why a table file failed to parse.
#[derive(Debug, thiserror::Error)]
pub enum FixtureError {
    #[error("line {line}: {message}")]
    Malformed { line: usize, message: String },
    #[error("line {line}: bad coefficient expression: {source}")]
    BadCoefficient {
        line: usize,
        #[source]
        source: ParseError,
    },
    #[error("bad model directive: {0}")]
    BadModel(#[from] ModelError),
    #[error("missing `{0}` directive")]
    MissingDirective(&'static str),
}

fn malformed(line: usize, message: impl Into<String>) -> FixtureError {
    FixtureError::Malformed {
        line,
        message: message.into(),
    }
}

/// Parse one table file.  The format is line based: `model`, `n`, and
/// `prefactor` directives, then one row per published coefficient in the
/// shape `<m> <i> <j> <coefficient> <citation> <high|low>`.  `#` starts a
/// comment.
pub fn parse_table(name: &str, text: &str) -> Result<FixtureTable, FixtureError> {
    let mut spec: Option<ModelSpec> = None;
    let mut n: Option<u32> = None;
    let mut prefactor: Option<ParamRatio> = None;
    let mut states: Vec<FixtureState> = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = match raw.find('#') {
            Some(pos) => &raw[..pos],
            None => raw,
        };
        let tokens: Vec<&str> = line.split_whitespace().collect();
        if tokens.is_empty() {
            continue;
        }
        match tokens[0] {
            "model" => {
                let arg = tokens
                    .get(1)
                    .ok_or_else(|| malformed(lineno, "`model` needs a name"))?;
                spec = Some(ModelSpec::named(arg)?);
            }
            "n" => {
                let arg = tokens
                    .get(1)
                    .ok_or_else(|| malformed(lineno, "`n` needs a value"))?;
                n = Some(
                    arg.parse()
                        .map_err(|_| malformed(lineno, "`n` must be a nonnegative integer"))?,
                );
            }
            "prefactor" => {
                let arg = tokens
                    .get(1)
                    .ok_or_else(|| malformed(lineno, "`prefactor` needs an expression"))?;
                prefactor = Some(
                    parse_ratio(arg)
                        .map_err(|source| FixtureError::BadCoefficient { line: lineno, source })?,
                );
            }
            _ => {
                if tokens.len() != 6 {
                    return Err(malformed(
                        lineno,
                        "expected `<m> <i> <j> <coefficient> <citation> <high|low>`",
                    ));
                }
                let parse_index = |t: &str| -> Result<u32, FixtureError> {
                    t.parse()
                        .map_err(|_| malformed(lineno, "row must start with three integers"))
                };
                let m = parse_index(tokens[0])?;
                let i = parse_index(tokens[1])?;
                let j = parse_index(tokens[2])?;
                let raw_value = parse_ratio(tokens[3])
                    .map_err(|source| FixtureError::BadCoefficient { line: lineno, source })?;
                let confidence = match tokens[5] {
                    "high" => Confidence::High,
                    "low" => Confidence::Low,
                    other => {
                        return Err(malformed(lineno, format!("unknown confidence `{other}`")));
                    }
                };
                let pf = prefactor
                    .as_ref()
                    .ok_or_else(|| malformed(lineno, "row before `prefactor` directive"))?;
                let state = match states.iter_mut().find(|s| s.m == m) {
                    Some(s) => s,
                    None => {
                        states.push(FixtureState { m, entries: Vec::new() });
                        states.last_mut().expect("just pushed")
                    }
                };
                if state.entry(i, j).is_some() {
                    return Err(malformed(lineno, format!("duplicate entry ({i}, {j})")));
                }
                state.entries.push(FixtureEntry {
                    i,
                    j,
                    value: &raw_value * pf,
                    citation: tokens[4].to_string(),
                    confidence,
                });
            }
        }
    }

    let spec = spec.ok_or(FixtureError::MissingDirective("model"))?;
    let n = n.ok_or(FixtureError::MissingDirective("n"))?;
    if states.is_empty() {
        return Err(malformed(0, "no coefficient rows"));
    }
    for s in &states {
        if s.m > n {
            return Err(malformed(0, format!("state {} beyond level {n}", s.m)));
        }
    }
    Ok(FixtureTable {
        name: name.to_string(),
        spec,
        n,
        states,
    })
}

/// Every embedded table, parsed.
pub fn builtin() -> Vec<FixtureTable> {
    TABLE_SOURCES
        .iter()
        .map(|(name, text)| {
            parse_table(name, text).unwrap_or_else(|e| panic!("embedded table {name}: {e}"))
        })
        .collect()
}

/// Look up one embedded table by name.
pub fn table(name: &str) -> Option<FixtureTable> {
    TABLE_SOURCES
        .iter()
        .find(|(n, _)| *n == name)
        .map(|(n, text)| parse_table(n, text).unwrap_or_else(|e| panic!("embedded table {n}: {e}")))
}

/// Outcome of checking one published coefficient against the solver.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    /// Published and computed values agree exactly.
    Match,
    /// They differ exactly by an overall sign.
    SignFlip { computed: ParamRatio },
    /// They differ in a way a single misprint would explain: by a monomial
    /// factor, or in strictly fewer numerator terms than the value has.
    TypoCandidate { computed: ParamRatio },
    /// Structurally different values.
    Mismatch { computed: ParamRatio },
}

impl Verdict {
    pub fn is_match(&self) -> bool {
        matches!(self, Verdict::Match)
    }

    /// The solver value, when it differs from the published one.
    pub fn computed(&self) -> Option<&ParamRatio> {
        match self {
            Verdict::Match => None,
            Verdict::SignFlip { computed }
            | Verdict::TypoCandidate { computed }
            | Verdict::Mismatch { computed } => Some(computed),
        }
    }

    fn label(&self) -> &'static str {
        match self {
            Verdict::Match => "match",
            Verdict::SignFlip { .. } => "sign flip",
            Verdict::TypoCandidate { .. } => "typo candidate",
            Verdict::Mismatch { .. } => "mismatch",
        }
    }
}

/// Express `p` and `q` over their common denominator and return the two
/// numerators.
fn over_common_denominator(p: &ParamRatio, q: &ParamRatio) -> (ParamPoly, ParamPoly) {
    let lcm = poly_lcm(p.den(), q.den());
    let scale_p = divide_exact(&lcm, p.den()).expect("lcm divides");
    let scale_q = divide_exact(&lcm, q.den()).expect("lcm divides");
    (p.num().mul(&scale_p), q.num().mul(&scale_q))
}

fn classify(published: &ParamRatio, computed: &ParamRatio) -> Verdict {
    if published == computed {
        return Verdict::Match;
    }
    let computed_cl = computed.clone();
    if *published == -computed {
        return Verdict::SignFlip { computed: computed_cl };
    }
    if !computed.is_zero() {
        // Off by a bare rational factor, as when one digit of an integer
        // coefficient changed.
        if let Some(q) = published.checked_div(computed) {
            if q.num().as_constant().is_some() && q.den().as_constant().is_some() {
                return Verdict::TypoCandidate { computed: computed_cl };
            }
        }
        // Same numerator, so only the denominator was transcribed wrong.
        if published.num() == computed.num() {
            return Verdict::TypoCandidate { computed: computed_cl };
        }
        // Some numerator terms survive over a common denominator, so the
        // damage is confined to the others.
        let (p, c) = over_common_denominator(published, computed);
        let shared = p
            .terms()
            .filter(|(m, coeff)| c.terms().any(|(m2, c2)| m2 == *m && c2 == *coeff))
            .count();
        if shared > 0 {
            return Verdict::TypoCandidate { computed: computed_cl };
        }
    }
    Verdict::Mismatch { computed: computed_cl }
}

/// One published coefficient together with its verdict.
#[derive(Debug, Clone)]
pub struct DiffLine {
    pub m: u32,
    pub i: u32,
    pub j: u32,
    pub citation: String,
    pub confidence: Confidence,
    pub published: ParamRatio,
    pub verdict: Verdict,
}

impl fmt::Display for DiffLine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "m={} Ap^{} Bp^{} [{}]: {}",
            self.m,
            self.i,
            self.j,
            self.citation,
            self.verdict.label()
        )?;
        if let Some(computed) = self.verdict.computed() {
            write!(f, " (published {}, computed {})", self.published, computed)?;
        }
        Ok(())
    }
}

/// A nonzero solver coefficient the table does not list.
#[derive(Debug, Clone)]
pub struct ExtraEntry {
    pub m: u32,
    pub i: u32,
    pub j: u32,
    pub computed: ParamRatio,
}

/// Result of comparing a solved chain against one reference table.
#[derive(Debug, Clone)]
pub struct DiffReport {
    pub table: String,
    pub lines: Vec<DiffLine>,
    pub extra: Vec<ExtraEntry>,
}

impl DiffReport {
    /// True when every entry matches and the table misses nothing.
    pub fn is_clean(&self) -> bool {
        self.lines.iter().all(|l| l.verdict.is_match()) && self.extra.is_empty()
    }

    /// Lines whose verdict is anything but an exact match.
    pub fn disagreements(&self) -> impl Iterator<Item = &DiffLine> {
        self.lines.iter().filter(|l| !l.verdict.is_match())
    }

    /// One-line tally of the verdicts.
    pub fn summary(&self) -> String {
        let mut matches = 0usize;
        let mut flips = 0usize;
        let mut typos = 0usize;
        let mut other = 0usize;
        for l in &self.lines {
            match l.verdict {
                Verdict::Match => matches += 1,
                Verdict::SignFlip { .. } => flips += 1,
                Verdict::TypoCandidate { .. } => typos += 1,
                Verdict::Mismatch { .. } => other += 1,
            }
        }
        format!(
            "{}: {} entries, {} match, {} sign flips, {} typo candidates, {} mismatches, {} unlisted",
            self.table,
            self.lines.len(),
            matches,
            flips,
            typos,
            other,
            self.extra.len()
        )
    }
}

/// Check every published coefficient of `table` against `chain` and list
/// any nonzero computed coefficients the table omits.
///
/// # Panics
///
/// Panics when the chain was not built for the table's model and level.
pub fn compare_chain(table: &FixtureTable, chain: &JordanChain) -> DiffReport {
    assert_eq!(chain.spec(), &table.spec, "chain and table use the same model");
    assert_eq!(chain.level(), table.n, "chain and table use the same level");
    let mut lines = Vec::new();
    let mut extra = Vec::new();
    for state in &table.states {
        let computed_state = chain.state(state.m);
        for e in &state.entries {
            let computed = computed_state.coeff(&VacMonomial::new(e.i, e.j));
            lines.push(DiffLine {
                m: state.m,
                i: e.i,
                j: e.j,
                citation: e.citation.clone(),
                confidence: e.confidence,
                published: e.value.clone(),
                verdict: classify(&e.value, &computed),
            });
        }
        for (mono, coeff) in computed_state.terms() {
            if state.entry(mono.i, mono.j).is_none() && !coeff.is_zero() {
                extra.push(ExtraEntry {
                    m: state.m,
                    i: mono.i,
                    j: mono.j,
                    computed: coeff.clone(),
                });
            }
        }
    }
    DiffReport {
        table: table.name.clone(),
        lines,
        extra,
    }
}

/// Machine evidence that a claimed coefficient breaks the chain.
#[derive(Debug, Clone)]
pub enum Refutation {
    /// With the claimed value in place, `(H - E) state(m) - state(m-1)`
    /// (or `(H - E) state(0)` for the eigenstate) picks up this term.
    LadderResidual {
        monomial: VacMonomial,
        residual: ParamRatio,
    },
    /// The ladder condition survives, but a pairing comes out wrong.
    PairingViolation {
        with: u32,
        got: ParamRatio,
        expected: ParamRatio,
    },
}

impl fmt::Display for Refutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Refutation::LadderResidual { monomial, residual } => write!(
                f,
                "ladder residual picks up {} * {}",
                residual, monomial
            ),
            Refutation::PairingViolation { with, got, expected } => write!(
                f,
                "pairing with state {} gives {} instead of {}",
                with, got, expected
            ),
        }
    }
}

/// Substitute `claimed` for the coefficient of `Ap^i Bp^j |0>` in state `m`
/// of `chain` and report the first defining condition that breaks.  Returns
/// `None` when the tampered state still satisfies them all, which for a
/// correctly solved chain means `claimed` was the solver value already.
pub fn refute_entry(
    model: &Model,
    chain: &JordanChain,
    m: u32,
    i: u32,
    j: u32,
    claimed: &ParamRatio,
) -> Option<Refutation> {
    let mono = VacMonomial::new(i, j);
    let mut tampered = chain.state(m).clone();
    let old = tampered.coeff(&mono);
    tampered.add_term(mono, claimed - &old);

    let hamiltonian = model.hamiltonian_element();
    let shifted = model.apply(&hamiltonian, &tampered) - tampered.scale(chain.energy());
    let residual = match m {
        0 => shifted,
        _ => &shifted - chain.state(m - 1),
    };
    if let Some((monomial, coeff)) = residual.terms().next() {
        return Some(Refutation::LadderResidual {
            monomial: *monomial,
            residual: coeff.clone(),
        });
    }

    let inverse_norm = chain.c_squared().inverse();
    for with in 0..=chain.level() {
        let got = model.pairing(&tampered, chain.state(with));
        let expected = if m + with == chain.level() {
            inverse_norm.clone()
        } else {
            ParamRatio::zero()
        };
        if got != expected {
            return Some(Refutation::PairingViolation { with, got, expected });
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_embedded_table_parses() {
        let tables = builtin();
        assert_eq!(tables.len(), TABLE_SOURCES.len());
        for t in &tables {
            assert!(!t.states.is_empty(), "{} has states", t.name);
            for s in &t.states {
                assert!(s.m >= 1 && s.m <= t.n);
            }
        }
    }

    #[test]
    fn lookup_by_name() {
        let t = table("quartic_n2").unwrap();
        assert_eq!(t.n, 2);
        assert_eq!(t.spec, ModelSpec::quartic());
        let e = t.state(1).unwrap().entry(1, 1).unwrap();
        assert_eq!(e.value, parse_ratio("1/(32*a^2*b)").unwrap());
        assert!(table("quartic_n9").is_none());
    }

    #[test]
    fn prefactor_multiplies_into_rows() {
        let t = table("harmonic_n1").unwrap();
        let s = t.state(1).unwrap();
        assert_eq!(
            s.entry(1, 0).unwrap().value,
            parse_ratio("1/(16*a^2)").unwrap()
        );
        assert_eq!(
            s.entry(0, 1).unwrap().value,
            parse_ratio("-1/(16*a*b)").unwrap()
        );
    }

    #[test]
    fn rejects_rows_before_the_prefactor() {
        let text = "model quartic\nn 1\n1 1 0 b sec0:x high\n";
        match parse_table("bad", text) {
            Err(FixtureError::Malformed { line: 3, .. }) => {}
            other => panic!("unexpected: {other:?}"),
        }
    }

    #[test]
    fn rejects_duplicate_entries() {
        let text = "model quartic\nn 1\nprefactor 1\n1 1 0 b sec0:x high\n1 1 0 b sec0:x low\n";
        assert!(matches!(
            parse_table("bad", text),
            Err(FixtureError::Malformed { line: 5, .. })
        ));
    }

    #[test]
    fn classification_distinguishes_misprint_shapes() {
        let p = |s: &str| parse_ratio(s).unwrap();
        assert_eq!(classify(&p("b/a"), &p("b/a")), Verdict::Match);
        assert!(matches!(
            classify(&p("-b/a"), &p("b/a")),
            Verdict::SignFlip { .. }
        ));
        // Off by a monomial factor in the denominator.
        assert!(matches!(
            classify(&p("omega/(4*b^4)"), &p("omega/(4*b^8)")),
            Verdict::TypoCandidate { .. }
        ));
        // One numerator term out of several transcribed wrong.
        assert!(matches!(
            classify(
                &p("(9*omega^2+936*b^2*omega-16*b^4)/a"),
                &p("(9*omega^2+792*b^2*omega-16*b^4)/a")
            ),
            Verdict::TypoCandidate { .. }
        ));
        // Nothing in common.
        assert!(matches!(
            classify(&p("omega/a"), &p("b^2/(4*a^3)")),
            Verdict::Mismatch { .. }
        ));
    }
}
