//! Named consistency checks for one model.
//!
//! Each check exercises a single identity the chain construction stands
//! on, and the full list is the contract behind a `verify` run. Checks
//! are exact throughout: algebraic sides stay in the free algebra,
//! analytic sides in the coordinate representation, and a failure
//! carries the first counterexample found.
//!
//! * [`CheckReport`]: one named pass/fail outcome.
//! * [`run_checks`]: every check for a model, chains up to a depth.

use crate::algebra::model::Model;
use crate::algebra::normal_order::normal_order;
use crate::algebra::{AlgebraElement, Generator, Word};
use crate::chain::{gram_matrix, harmonic_closed_form, jordan_matrix, solve_chain, JordanChain};
use crate::field::ParamRatio;
use crate::oracle::{
    apply_hamiltonian, element_is_hamiltonian, from_vacuum, pairing_integral, verify_commutator,
};
use crate::vacuum::{VacMonomial, VacuumVector};

/// Outcome of one named check.
#[derive(Clone, Debug)]
pub struct CheckReport {
    pub name: String,
    pub passed: bool,
    /// Empty on success, otherwise a short description of the failure.
    pub detail: String,
}

impl CheckReport {
    fn pass(name: impl Into<String>) -> Self {
        CheckReport { name: name.into(), passed: true, detail: String::new() }
    }

    fn fail(name: impl Into<String>, detail: impl Into<String>) -> Self {
        CheckReport { name: name.into(), passed: false, detail: detail.into() }
    }
}

const TRIALS: u32 = 20;
const MAX_DEGREE: u32 = 6;
const SEED: u64 = 0x5eed;

/// All commutators, rewritten in the free algebra, match the table the
/// model declares.
pub fn check_commutator_table(model: &Model) -> CheckReport {
    for x in Generator::ALL {
        for y in Generator::ALL {
            let direct = AlgebraElement::term(Word::from_letters(&[x, y]), ParamRatio::one())
                + AlgebraElement::term(Word::from_letters(&[y, x]), ParamRatio::int(-1));
            let lhs = normal_order(model, &direct);
            let rhs = normal_order(model, &model.commutator(x, y));
            if lhs != rhs {
                return CheckReport::fail(
                    "commutator-table",
                    format!("pair ({x}, {y}) rewrites to {lhs}, table says {rhs}"),
                );
            }
        }
    }
    CheckReport::pass("commutator-table")
}

/// All commutators act correctly as differential operators on random
/// polynomial prefactors.
pub fn check_commutator_oracle(model: &Model) -> CheckReport {
    for x in Generator::ALL {
        for y in Generator::ALL {
            if !verify_commutator(model, x, y, TRIALS, MAX_DEGREE, SEED) {
                return CheckReport::fail(
                    "commutator-oracle",
                    format!("pair ({x}, {y}) fails on a random prefactor"),
                );
            }
        }
    }
    CheckReport::pass("commutator-oracle")
}

/// The normal-ordered ladder form of the Hamiltonian agrees with its
/// second-order differential form on random polynomial prefactors.
pub fn check_hamiltonian_oracle(model: &Model) -> CheckReport {
    if element_is_hamiltonian(model, &model.hamiltonian_element(), TRIALS, MAX_DEGREE, SEED) {
        CheckReport::pass("hamiltonian-oracle")
    } else {
        CheckReport::fail("hamiltonian-oracle", "ladder form disagrees with the differential form")
    }
}

/// The Hamiltonian is symmetric for the bilinear pairing on a grid of
/// raising-word states.
pub fn check_hamiltonian_symmetry(model: &Model) -> CheckReport {
    let h = model.hamiltonian_element();
    let states: Vec<VacuumVector> = (0..=3u32)
        .flat_map(|i| (0..=3u32).map(move |j| VacuumVector::monomial(VacMonomial::new(i, j))))
        .collect();
    for x in &states {
        for y in &states {
            let left = model.pairing(&model.apply(&h, x), y);
            let right = model.pairing(x, &model.apply(&h, y));
            if left != right {
                return CheckReport::fail(
                    "hamiltonian-symmetry",
                    format!("a pairing moves the operator with {left} vs {right}"),
                );
            }
        }
    }
    CheckReport::pass("hamiltonian-symmetry")
}

/// The algebraic pairing and the weighted-integral pairing agree on all
/// monomial states of total degree at most `bound`.
pub fn check_pairing_equivalence(model: &Model, bound: u32) -> CheckReport {
    let mut monomials = Vec::new();
    for i in 0..=bound {
        for j in 0..=(bound - i) {
            monomials.push(VacMonomial::new(i, j));
        }
    }
    for x in &monomials {
        for y in &monomials {
            let vx = VacuumVector::monomial(*x);
            let vy = VacuumVector::monomial(*y);
            let algebraic = model.pairing(&vx, &vy);
            let analytic = pairing_integral(model, &from_vacuum(model, &vx), &from_vacuum(model, &vy));
            if algebraic != analytic {
                return CheckReport::fail(
                    "pairing-equivalence",
                    format!(
                        "states Ap^{} Bp^{} and Ap^{} Bp^{}: {algebraic} vs {analytic}",
                        x.i, x.j, y.i, y.j
                    ),
                );
            }
        }
    }
    CheckReport::pass("pairing-equivalence")
}

/// Solves the level-`n` chain and verifies both defining conditions plus
/// the analytic action of the Hamiltonian on every member.
pub fn check_chain(model: &Model, n: u32) -> CheckReport {
    match solve_chain(model, n) {
        Ok(chain) => check_solved_chain(model, &chain),
        Err(e) => CheckReport::fail(format!("chain-{n}"), format!("solve failed: {e}")),
    }
}

/// Verifies both defining conditions and the analytic Hamiltonian action
/// for a chain built elsewhere, for example one read back from a report.
pub fn check_solved_chain(model: &Model, chain: &JordanChain) -> CheckReport {
    let n = chain.level();
    let name = format!("chain-{n}");
    let h = model.hamiltonian_element();
    let energy = chain.energy().clone();
    for m in 0..=n {
        let mut expect = chain.state(m).scale(&energy);
        if m > 0 {
            expect = &expect + chain.state(m - 1);
        }
        if model.apply(&h, chain.state(m)) != expect {
            return CheckReport::fail(name, format!("ladder condition fails at step {m}"));
        }
        let analytic = apply_hamiltonian(model, &from_vacuum(model, chain.state(m)));
        if analytic != from_vacuum(model, &expect) {
            return CheckReport::fail(name, format!("differential action differs at step {m}"));
        }
    }
    let gram = gram_matrix(model, chain);
    for (m, row) in gram.iter().enumerate() {
        for (mp, value) in row.iter().enumerate() {
            let ok = if m + mp == n as usize { value.is_one() } else { value.is_zero() };
            if !ok {
                return CheckReport::fail(name, format!("pairing table entry ({m},{mp}) = {value}"));
            }
        }
    }
    let jordan = jordan_matrix(model, chain);
    for (m, row) in jordan.iter().enumerate() {
        for (mp, value) in row.iter().enumerate() {
            let expect = if m + mp == n as usize {
                energy.clone()
            } else if m + mp == n as usize + 1 {
                ParamRatio::one()
            } else {
                ParamRatio::zero()
            };
            if value != &expect {
                return CheckReport::fail(
                    name,
                    format!("block matrix entry ({m},{mp}) = {value}, expected {expect}"),
                );
            }
        }
    }
    CheckReport::pass(name)
}

/// For the oscillator profile the solver must land exactly on the closed
/// form for every level up to `depth`.
pub fn check_harmonic_closed_form(depth: u32) -> CheckReport {
    let model = Model::harmonic();
    for n in 1..=depth {
        let solved = match solve_chain(&model, n) {
            Ok(chain) => chain,
            Err(e) => {
                return CheckReport::fail("harmonic-closed-form", format!("solve failed: {e}"))
            }
        };
        let closed = harmonic_closed_form(n);
        for m in 0..=n {
            if solved.state(m) != closed.state(m) {
                return CheckReport::fail(
                    "harmonic-closed-form",
                    format!("level {n} step {m} differs from the closed form"),
                );
            }
        }
    }
    CheckReport::pass("harmonic-closed-form")
}

/// Runs every check for the model; chains are solved for each level from
/// one up to `depth`.
pub fn run_checks(model: &Model, depth: u32) -> Vec<CheckReport> {
    let mut out = vec![
        check_commutator_table(model),
        check_commutator_oracle(model),
        check_hamiltonian_oracle(model),
        check_hamiltonian_symmetry(model),
        check_pairing_equivalence(model, MAX_DEGREE),
    ];
    for n in 1..=depth {
        out.push(check_chain(model, n));
    }
    if model.name() == "harmonic" {
        out.push(check_harmonic_closed_form(depth.max(3)));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_check_passes_for_the_quartic_model() {
        for report in run_checks(&Model::quartic(), 2) {
            assert!(report.passed, "{}: {}", report.name, report.detail);
        }
    }

    #[test]
    fn the_harmonic_run_includes_the_closed_form_check() {
        let reports = run_checks(&Model::harmonic(), 2);
        assert!(reports.iter().any(|r| r.name == "harmonic-closed-form" && r.passed));
    }

    #[test]
    fn chain_check_reports_solver_errors() {
        let spec = crate::algebra::model::ModelSpec::parse("pure_quartic", "4:omega").unwrap();
        let report = check_chain(&Model::new(spec), 1);
        assert!(!report.passed);
        assert!(report.detail.contains("solve failed"));
    }
}
