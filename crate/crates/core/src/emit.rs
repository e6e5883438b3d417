//! Chain reports in machine and human formats.
//!
//! The JSON document round-trips: coefficients are written in the
//! canonical text form the field parser reads back, so an emitted chain
//! can be reconstructed and re-verified. The LaTeX form factors the
//! customary per-level constant out of every member, which makes visual
//! comparison against typeset tables straightforward.
//!
//! * [`ChainDocument`]: serializable image of a chain, with citations.
//! * [`chain_document`] / [`chain_json`] / [`document_from_json`].
//! * [`chain_latex`]: an `align*` block, one line per member.
//! * [`chain_text`]: terminal-friendly listing.

use std::fmt::Write as _;

use num::{BigInt, One};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::model::Model;
use crate::chain::{ChainError, JordanChain};
use crate::field::{parse_ratio, Monomial, ParamPoly, ParamRatio, ParseError, Var};
use crate::fixtures;
use crate::vacuum::{VacMonomial, VacuumVector};

/// One coefficient of `Ap^i Bp^j |0>` in canonical text form.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TermDocument {
    pub i: u32,
    pub j: u32,
    pub coeff: String,
}

/// One chain member.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StateDocument {
    pub m: u32,
    pub terms: Vec<TermDocument>,
}

/// Serializable image of a solved chain.
///
/// `citations` lists the location tokens of any embedded reference table
/// covering the same model and level, in table order; it is empty when no
/// table exists.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ChainDocument {
    pub model: String,
    pub n: u32,
    pub energy: String,
    pub c_squared: String,
    pub states: Vec<StateDocument>,
    pub citations: Vec<String>,
}

/// Why a document could not be turned back into a chain.
#[derive(Debug, Error)]
pub enum DocumentError {
    #[error("document names model `{document}` but the supplied model is `{model}`")]
    ModelMismatch { document: String, model: String },
    #[error("state {m}, coefficient at ({i}, {j}): {source}")]
    BadCoefficient { m: u32, i: u32, j: u32, source: ParseError },
    #[error("duplicate coefficient at ({i}, {j}) in state {m}")]
    DuplicateTerm { m: u32, i: u32, j: u32 },
    #[error("states are not the contiguous run 0..=n")]
    BadStateList,
    #[error(transparent)]
    Chain(#[from] ChainError),
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
}

/// Builds the serializable image of a chain.
pub fn chain_document(model: &Model, chain: &JordanChain) -> ChainDocument {
    let states = chain
        .states()
        .iter()
        .enumerate()
        .map(|(m, state)| StateDocument {
            m: m as u32,
            terms: state
                .terms()
                .map(|(mono, c)| TermDocument { i: mono.i, j: mono.j, coeff: c.to_string() })
                .collect(),
        })
        .collect();
    ChainDocument {
        model: model.name().to_string(),
        n: chain.level(),
        energy: chain.energy().to_string(),
        c_squared: chain.c_squared().to_string(),
        states,
        citations: citations_for(model, chain.level()),
    }
}

/// Location tokens of the embedded reference table for this model and
/// level, if one exists.
fn citations_for(model: &Model, n: u32) -> Vec<String> {
    let mut out = Vec::new();
    for table in fixtures::builtin() {
        if table.spec != *model.spec() || table.n != n {
            continue;
        }
        for state in &table.states {
            for entry in &state.entries {
                if !out.contains(&entry.citation) {
                    out.push(entry.citation.clone());
                }
            }
        }
    }
    out
}

/// The JSON report, pretty-printed with a trailing newline.
pub fn chain_json(model: &Model, chain: &JordanChain) -> String {
    let doc = chain_document(model, chain);
    let mut text = serde_json::to_string_pretty(&doc).expect("chain document serializes");
    text.push('\n');
    text
}

/// Parses a JSON report back into a document.
pub fn document_from_json(text: &str) -> Result<ChainDocument, DocumentError> {
    Ok(serde_json::from_str(text)?)
}

impl ChainDocument {
    /// Rebuilds the chain against the supplied model, reparsing every
    /// coefficient. The result still needs verification; parsing checks
    /// only shape, not the defining conditions.
    pub fn into_chain(&self, model: &Model) -> Result<JordanChain, DocumentError> {
        if self.model != model.name() {
            return Err(DocumentError::ModelMismatch {
                document: self.model.clone(),
                model: model.name().to_string(),
            });
        }
        let contiguous = self.states.len() == self.n as usize + 1
            && self.states.iter().enumerate().all(|(m, s)| s.m == m as u32);
        if !contiguous {
            return Err(DocumentError::BadStateList);
        }
        let mut states = Vec::with_capacity(self.states.len());
        for state in &self.states {
            let mut v = VacuumVector::zero();
            for term in &state.terms {
                let c = parse_ratio(&term.coeff).map_err(|source| {
                    DocumentError::BadCoefficient { m: state.m, i: term.i, j: term.j, source }
                })?;
                if !v.coeff(&VacMonomial::new(term.i, term.j)).is_zero() {
                    return Err(DocumentError::DuplicateTerm { m: state.m, i: term.i, j: term.j });
                }
                v.add_term(VacMonomial::new(term.i, term.j), c);
            }
            states.push(v);
        }
        Ok(JordanChain::from_parts(model, self.n, states)?)
    }
}

/// Renders a parameter name for LaTeX: Greek names get their control
/// words, trailing digits become subscripts.
fn latex_var(v: &Var) -> String {
    match v.name() {
        "omega" => "\\omega".to_string(),
        "epsilon" => "\\epsilon".to_string(),
        "pi" => "\\pi".to_string(),
        name => {
            let head: String = name.chars().take_while(|c| c.is_alphabetic()).collect();
            let tail: String = name.chars().skip_while(|c| c.is_alphabetic()).collect();
            if head.len() == 1 && tail.is_empty() {
                head
            } else if head.len() == 1 && tail.chars().all(|c| c.is_ascii_digit()) {
                format!("{head}_{{{tail}}}")
            } else {
                format!("\\mathrm{{{name}}}")
            }
        }
    }
}

fn latex_monomial(m: &Monomial, c: &BigInt) -> String {
    let mag = c.magnitude();
    let mut parts = Vec::new();
    if !mag.is_one() || m.is_one() {
        parts.push(mag.to_string());
    }
    for (v, e) in m.iter() {
        if e > 1 {
            parts.push(format!("{}^{{{e}}}", latex_var(v)));
        } else {
            parts.push(latex_var(v));
        }
    }
    parts.join(" ")
}

/// Signed sum of monomials, in the canonical display order.
fn latex_poly(p: &ParamPoly) -> String {
    use num::Signed;
    if p.is_zero() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (idx, (m, c)) in p.display_terms().into_iter().enumerate() {
        if idx == 0 {
            if c.is_negative() {
                out.push('-');
            }
        } else if c.is_negative() {
            out.push_str(" - ");
        } else {
            out.push_str(" + ");
        }
        out.push_str(&latex_monomial(m, c));
    }
    out
}

/// Magnitude of a field element as LaTeX; the sign is reported separately
/// so sums can join terms with the right separators. `grouped` tells the
/// caller whether the output is safe to juxtapose with an operator symbol
/// without extra brackets.
fn latex_magnitude(r: &ParamRatio) -> (bool, String, bool) {
    let negative = r.leading_negative();
    let mag = r.abs();
    if mag.den().is_one() {
        let grouped = mag.num().num_terms() == 1;
        (negative, latex_poly(mag.num()), grouped)
    } else {
        let text = format!("\\frac{{{}}}{{{}}}", latex_poly(mag.num()), latex_poly(mag.den()));
        (negative, text, true)
    }
}

fn latex_operator(i: u32, j: u32) -> String {
    let mut out = String::new();
    match i {
        0 => {}
        1 => out.push_str("A^{+}"),
        _ => {
            let _ = write!(out, "(A^{{+}})^{{{i}}}");
        }
    }
    match j {
        0 => {}
        1 => out.push_str("B^{+}"),
        _ => {
            let _ = write!(out, "(B^{{+}})^{{{j}}}");
        }
    }
    out
}

/// One chain member as the bracketed sum that multiplies the factored
/// constant.
fn latex_state(state: &VacuumVector, scale: &ParamRatio) -> String {
    if state.is_zero() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (idx, (mono, c)) in state.terms().enumerate() {
        let raw = c * scale;
        let (negative, body, grouped) = latex_magnitude(&raw);
        if idx == 0 {
            if negative {
                out.push('-');
            }
        } else if negative {
            out.push_str(" - ");
        } else {
            out.push_str(" + ");
        }
        let op = latex_operator(mono.i, mono.j);
        if op.is_empty() {
            out.push_str(&body);
        } else if raw.abs().is_one() {
            out.push_str(&op);
        } else if grouped {
            let _ = write!(out, "{body}\\,{op}");
        } else {
            let _ = write!(out, "\\bigl({body}\\bigr)\\,{op}");
        }
    }
    out
}

/// The LaTeX report: an `align*` block with one line per member, each
/// with the constant `c_{n,0} / (2^(n+3) a^n f2)` factored out.
pub fn chain_latex(model: &Model, chain: &JordanChain) -> String {
    let n = chain.level();
    let f2 = model
        .spec()
        .quadratic_coeff()
        .cloned()
        .unwrap_or_else(ParamRatio::one);
    let power = ParamRatio::from_poly(ParamPoly::constant(BigInt::from(2).pow(n + 3)));
    let a_n = ParamRatio::from_poly(ParamPoly::term(Monomial::var(Var::a(), n), 1.into()));
    let scale = &(&power * &a_n) * &f2;
    let (_, denominator, _) = latex_magnitude(&scale);
    let mut out = String::from("\\begin{align*}\n");
    for (m, state) in chain.states().iter().enumerate() {
        let _ = write!(
            out,
            "\\Psi_{{{n},{m}}} &= \\frac{{c_{{{n},0}}}}{{{denominator}}}\\Bigl[{}\\Bigr]\\Psi_0",
            latex_state(state, &scale)
        );
        if m < n as usize {
            out.push_str(" \\\\");
        }
        out.push('\n');
    }
    out.push_str("\\end{align*}\n");
    out
}

/// The plain-text report: header lines, then one member per line.
pub fn chain_text(model: &Model, chain: &JordanChain) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "model      {}", model.name());
    let _ = writeln!(out, "profile    {}", model.spec().profile_string());
    let _ = writeln!(out, "level      {}", chain.level());
    let _ = writeln!(out, "energy     {}", chain.energy());
    let _ = writeln!(out, "c_squared  {}", chain.c_squared());
    for (m, state) in chain.states().iter().enumerate() {
        let _ = writeln!(out, "Phi_{m} = {state}");
    }
    let citations = citations_for(model, chain.level());
    if !citations.is_empty() {
        let _ = writeln!(out, "citations  {}", citations.join(" "));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chain::solve_chain;
    use crate::verify::check_solved_chain;

    #[test]
    fn json_round_trip_reconstructs_the_chain() {
        let model = Model::quartic();
        let chain = solve_chain(&model, 2).unwrap();
        let text = chain_json(&model, &chain);
        let doc = document_from_json(&text).unwrap();
        let rebuilt = doc.into_chain(&model).unwrap();
        assert_eq!(rebuilt, chain);
        assert!(check_solved_chain(&model, &rebuilt).passed);
    }

    #[test]
    fn document_carries_citations_when_a_table_exists() {
        let model = Model::quartic();
        let chain = solve_chain(&model, 1).unwrap();
        let doc = chain_document(&model, &chain);
        assert!(doc.citations.iter().any(|c| c.contains("Psi_1_1")));
        let custom_spec =
            crate::algebra::model::ModelSpec::parse("bespoke", "2:b,4:omega/4").unwrap();
        let custom = Model::new(custom_spec);
        let chain = solve_chain(&custom, 1).unwrap();
        assert!(chain_document(&custom, &chain).citations.is_empty());
    }

    #[test]
    fn mismatched_model_is_rejected_on_reparse() {
        let model = Model::quartic();
        let chain = solve_chain(&model, 1).unwrap();
        let doc = chain_document(&model, &chain);
        let err = doc.into_chain(&Model::sextic()).unwrap_err();
        assert!(matches!(err, DocumentError::ModelMismatch { .. }));
    }

    #[test]
    fn latex_factors_the_level_constant() {
        let model = Model::quartic();
        let chain = solve_chain(&model, 1).unwrap();
        let latex = chain_latex(&model, &chain);
        assert!(latex.starts_with("\\begin{align*}"));
        assert!(latex.contains("\\frac{c_{1,0}}{16 a b}"), "got: {latex}");
        assert!(latex.contains("\\Psi_{1,1}"));
        assert!(latex.contains("(A^{+})^{3}"), "got: {latex}");
        assert!(latex.contains("B^{+}"), "got: {latex}");
        assert!(latex.trim_end().ends_with("\\end{align*}"));
    }

    #[test]
    fn latex_renders_greek_names_and_fractions() {
        let model = Model::quartic();
        let chain = solve_chain(&model, 2).unwrap();
        let latex = chain_latex(&model, &chain);
        assert!(latex.contains("\\omega"), "got: {latex}");
        assert!(latex.contains("\\frac{"), "got: {latex}");
        let escaped = latex
            .match_indices("omega")
            .all(|(at, _)| at > 0 && latex.as_bytes()[at - 1] == b'\\');
        assert!(escaped, "bare parameter name in: {latex}");
    }

    #[test]
    fn text_report_lists_every_member() {
        let model = Model::harmonic();
        let chain = solve_chain(&model, 1).unwrap();
        let text = chain_text(&model, &chain);
        assert!(text.contains("model      harmonic"));
        assert!(text.contains("energy     8*a"));
        assert!(text.contains("Phi_0 = "));
        assert!(text.contains("Phi_1 = "));
    }
}
