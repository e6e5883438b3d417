//! Release acceptance gate: nine end-to-end checks, each printing a single
//! PASS or FAIL line (run with `--nocapture` to see the checklist).
//!
//! 1. Harmonic chains match the independent closed form through level 6.
//! 2. Quartic chains reproduce the reference tables for levels 1 to 3.
//! 3. Levels 4 and 5 match except the flagged lines, and every flagged
//!    published value is mechanically refuted.
//! 4. Cubic and sextic chains reproduce their level 1 and 2 tables.
//! 5. Ladder and bridge commutator identities hold algebraically and on
//!    random prefactors, for every profile.
//! 6. The algebraic pairing equals the integral pairing on all monomial
//!    states up to combined degree 6.
//! 7. Every solved chain has the anti-diagonal Gram identity and the
//!    Jordan block action.
//! 8. Eigenstates above the ground level are self-orthogonal and the
//!    vacuum carries the closed-form norm.
//! 9. The solver extends past the tables: quartic level 6 and a quintic
//!    profile pass the same structural checks.

use std::panic::{catch_unwind, resume_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use rand::rngs::StdRng;
use rand::SeedableRng;

use anharmonic_core::algebra::model::{zbar_element, Model, ModelSpec};
use anharmonic_core::algebra::normal_order::normal_order;
use anharmonic_core::algebra::{AlgebraElement, Generator, Word};
use anharmonic_core::chain::{
    gram_matrix, harmonic_closed_form, jordan_matrix, solve_chain, JordanChain,
};
use anharmonic_core::field::{parse_ratio, ParamRatio};
use anharmonic_core::fixtures::{self, Confidence};
use anharmonic_core::oracle::{
    apply_element, apply_hamiltonian, apply_letter, element_is_hamiltonian,
    pairing_integral_absolute, random_prefactor, verify_commutator, Prefactor,
};
use anharmonic_core::verify::{check_pairing_equivalence, check_solved_chain};

fn criterion(number: u32, what: &str, body: impl FnOnce()) {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(()) => println!("PASS criterion {number}: {what}"),
        Err(cause) => {
            println!("FAIL criterion {number}: {what}");
            resume_unwind(cause);
        }
    }
}

fn r(s: &str) -> ParamRatio {
    parse_ratio(s).expect("test constant parses")
}

fn gen(g: Generator) -> AlgebraElement {
    AlgebraElement::from_word(Word::letter(g))
}

fn presets() -> Vec<Model> {
    vec![
        Model::harmonic(),
        Model::quartic(),
        Model::cubic_quartic(),
        Model::sextic(),
    ]
}

/// The scaled Gram table must be the anti-diagonal identity.
fn assert_gram_pattern(model: &Model, chain: &JordanChain) {
    let n = chain.level() as usize;
    let gram = gram_matrix(model, chain);
    for (row, values) in gram.iter().enumerate() {
        for (col, value) in values.iter().enumerate() {
            let expected = if row + col == n {
                ParamRatio::one()
            } else {
                ParamRatio::zero()
            };
            assert_eq!(
                value, &expected,
                "{} level {n}: gram entry ({row}, {col})",
                model.name()
            );
        }
    }
}

/// The scaled H table must show the energy on the anti-diagonal and ones
/// immediately above it: the (n+1)-dimensional block action.
fn assert_jordan_pattern(model: &Model, chain: &JordanChain) {
    let n = chain.level() as usize;
    let jordan = jordan_matrix(model, chain);
    for (row, values) in jordan.iter().enumerate() {
        for (col, value) in values.iter().enumerate() {
            let expected = if row + col == n {
                chain.energy().clone()
            } else if row + col == n + 1 {
                ParamRatio::one()
            } else {
                ParamRatio::zero()
            };
            assert_eq!(
                value, &expected,
                "{} level {n}: action entry ({row}, {col})",
                model.name()
            );
        }
    }
}

/// Solve the chain a table refers to and require an exact, complete match.
fn assert_table_clean(model: &Model, name: &str) -> JordanChain {
    let table = fixtures::table(name).unwrap_or_else(|| panic!("missing table {name}"));
    let chain = solve_chain(model, table.n).expect("chain solves");
    let report = fixtures::compare_chain(&table, &chain);
    assert!(report.is_clean(), "{}", report.summary());
    chain
}

#[test]
fn criterion_1_harmonic_solver_matches_the_closed_form() {
    criterion(
        1,
        "harmonic chains equal the closed form for all levels up to 6 in under 10 s",
        || {
            let start = Instant::now();
            let model = Model::harmonic();
            for n in 0..=6 {
                let solved = solve_chain(&model, n).expect("harmonic chain solves");
                let closed = harmonic_closed_form(n);
                assert_eq!(solved.states(), closed.states(), "level {n}");
            }
            let elapsed = start.elapsed();
            assert!(elapsed < Duration::from_secs(10), "took {elapsed:?}");
        },
    );
}

#[test]
fn criterion_2_quartic_tables_match_through_level_3() {
    criterion(
        2,
        "quartic chains reproduce every reference coefficient for levels 1 to 3",
        || {
            let model = Model::quartic();
            for name in ["quartic_n1", "quartic_n2", "quartic_n3"] {
                assert_table_clean(&model, name);
            }
        },
    );
}

#[test]
fn criterion_3_deep_quartic_tables_match_except_refuted_lines() {
    criterion(
        3,
        "levels 4 and 5 match except flagged lines, each flagged value refuted, under 120 s",
        || {
            let model = Model::quartic();
            let start = Instant::now();
            let chain5 = solve_chain(&model, 5).expect("level 5 solves");
            assert!(check_solved_chain(&model, &chain5).passed);
            let deep_elapsed = start.elapsed();
            assert!(
                deep_elapsed < Duration::from_secs(120),
                "level 5 solve and verify took {deep_elapsed:?}"
            );

            let mut flagged = 0usize;
            for name in ["quartic_n4", "quartic_n5"] {
                let table = fixtures::table(name).expect("table exists");
                let chain = if table.n == 5 {
                    chain5.clone()
                } else {
                    solve_chain(&model, table.n).expect("chain solves")
                };
                assert!(check_solved_chain(&model, &chain).passed);
                let report = fixtures::compare_chain(&table, &chain);
                assert!(
                    report.extra.is_empty(),
                    "{name} misses solver terms: {}",
                    report.summary()
                );
                for line in &report.lines {
                    match line.confidence {
                        Confidence::High => {
                            assert!(line.verdict.is_match(), "{name}: {line}");
                        }
                        Confidence::Low => {
                            assert!(
                                !line.verdict.is_match(),
                                "{name}: flagged line unexpectedly matches: {line}"
                            );
                            flagged += 1;
                            let refutation = fixtures::refute_entry(
                                &model,
                                &chain,
                                line.m,
                                line.i,
                                line.j,
                                &line.published,
                            );
                            assert!(
                                refutation.is_some(),
                                "{name}: published value was not refuted: {line}"
                            );
                        }
                    }
                }
            }
            assert_eq!(flagged, 7, "flagged line census");
        },
    );
}

#[test]
fn criterion_4_cubic_and_sextic_tables_match() {
    criterion(
        4,
        "cubic and sextic chains reproduce their level 1 and 2 tables exactly",
        || {
            let cubic = Model::cubic_quartic();
            let chain = assert_table_clean(&cubic, "cubic_quartic_n1");
            assert_eq!(
                chain.state(1).coeff(&anharmonic_core::vacuum::VacMonomial::new(2, 0)),
                r("-epsilon/(8*a^3*b)"),
                "cubic level 1 coefficient of Ap^2"
            );
            assert_table_clean(&cubic, "cubic_quartic_n2");

            let sextic = Model::sextic();
            let chain = assert_table_clean(&sextic, "sextic_n1");
            assert_eq!(
                chain.state(1).coeff(&anharmonic_core::vacuum::VacMonomial::new(5, 0)),
                r("5*epsilon/(512*a^6*b)"),
                "sextic level 1 coefficient of Ap^5"
            );
            assert_table_clean(&sextic, "sextic_n2");
        },
    );
}

#[test]
fn criterion_5_operator_identities_hold_for_every_profile() {
    criterion(
        5,
        "ladder and bridge identities hold algebraically and on 20 random prefactors per profile",
        || {
            let four_a = r("4*a");
            let two = r("2");
            for model in presets() {
                let h = model.hamiltonian_element();
                let ap = gen(Generator::Ap);
                let am = gen(Generator::Am);
                let bp = gen(Generator::Bp);
                let bm = gen(Generator::Bm);
                let bb = model.bb_commutator().clone();

                // Exact normal-ordered identities.
                let no = |e: &AlgebraElement| normal_order(&model, e);
                assert_eq!(no(&h.commutator(&ap)), no(&ap.scale(&four_a)), "{}", model.name());
                assert_eq!(no(&h.commutator(&am)), no(&-&am.scale(&four_a)), "{}", model.name());
                assert_eq!(
                    no(&h.commutator(&bp)),
                    no(&(&bp.scale(&four_a) - &(&ap * &bb).scale(&two))),
                    "{}",
                    model.name()
                );
                assert_eq!(
                    no(&h.commutator(&bm)),
                    no(&(&(&bb * &am).scale(&two) - &bm.scale(&four_a))),
                    "{}",
                    model.name()
                );

                // The bridge commutator written out per profile.
                let zb = zbar_element();
                let zb2 = &zb * &zb;
                let base = AlgebraElement::scalar(r("-4*b"));
                let expected_bb = match model.name() {
                    "harmonic" => base,
                    "quartic" => &base + &zb2.scale(&r("-12*omega")),
                    "cubic_quartic" => {
                        &(&base + &zb.scale(&r("-8*epsilon"))) + &zb2.scale(&r("-12*omega"))
                    }
                    "sextic" => {
                        &(&base + &zb2.scale(&r("-12*omega")))
                            + &(&zb2 * &zb2).scale(&r("-20*epsilon"))
                    }
                    other => panic!("unexpected profile {other}"),
                };
                assert_eq!(no(&bm.commutator(&bp)), no(&expected_bb), "{}", model.name());

                // Differential form on random prefactors, fixed seed.
                let mut rng = StdRng::seed_from_u64(0xD1FF);
                for _ in 0..20 {
                    let p = random_prefactor(&mut rng, 6);
                    let hp = apply_hamiltonian(&model, &p);
                    let ap_p = apply_letter(&model, Generator::Ap, &p);
                    assert_eq!(
                        apply_hamiltonian(&model, &ap_p),
                        &apply_letter(&model, Generator::Ap, &hp) + &ap_p.scale(&four_a),
                        "{}: raising ladder",
                        model.name()
                    );
                    let am_p = apply_letter(&model, Generator::Am, &p);
                    assert_eq!(
                        apply_hamiltonian(&model, &am_p),
                        &apply_letter(&model, Generator::Am, &hp) - &am_p.scale(&four_a),
                        "{}: lowering ladder",
                        model.name()
                    );
                    let bp_p = apply_letter(&model, Generator::Bp, &p);
                    let bridge_p = apply_element(&model, &bb, &p);
                    assert_eq!(
                        apply_hamiltonian(&model, &bp_p),
                        &(&apply_letter(&model, Generator::Bp, &hp) + &bp_p.scale(&four_a))
                            - &apply_letter(&model, Generator::Ap, &bridge_p).scale(&two),
                        "{}: anharmonic raising",
                        model.name()
                    );
                    let bm_p = apply_letter(&model, Generator::Bm, &p);
                    let bridge_am = apply_element(&model, &bb, &apply_letter(&model, Generator::Am, &p));
                    assert_eq!(
                        apply_hamiltonian(&model, &bm_p),
                        &(&apply_letter(&model, Generator::Bm, &hp) - &bm_p.scale(&four_a))
                            + &bridge_am.scale(&two),
                        "{}: anharmonic lowering",
                        model.name()
                    );
                }

                // Every commutator table entry, differentially.
                let letters = [Generator::Ap, Generator::Am, Generator::Bp, Generator::Bm];
                for x in letters {
                    for y in letters {
                        assert!(
                            verify_commutator(&model, x, y, 20, 6, 0xC0),
                            "{}: [{x:?}, {y:?}]",
                            model.name()
                        );
                    }
                }

                // The quadratic ladder form of H, and the refutation of the
                // variant with flipped quadratic signs.
                assert!(element_is_hamiltonian(&model, &h, 20, 6, 0x8a));
                let flipped = AlgebraElement::term(
                    Word::from_letters(&[Generator::Ap, Generator::Bm]),
                    two.clone(),
                ) + AlgebraElement::term(
                    Word::from_letters(&[Generator::Bp, Generator::Am]),
                    two.clone(),
                ) + AlgebraElement::scalar(four_a.clone());
                assert!(
                    !element_is_hamiltonian(&model, &flipped, 20, 6, 0x8a),
                    "{}: sign-flipped form must fail",
                    model.name()
                );
            }
        },
    );
}

#[test]
fn criterion_6_pairings_agree_on_the_monomial_grid() {
    criterion(
        6,
        "algebraic and integral pairings agree on all monomial pairs to degree 6 in under 30 s",
        || {
            for model in presets() {
                let start = Instant::now();
                let report = check_pairing_equivalence(&model, 6);
                assert!(report.passed, "{}: {}", model.name(), report.detail);
                let elapsed = start.elapsed();
                assert!(
                    elapsed < Duration::from_secs(30),
                    "{} took {elapsed:?}",
                    model.name()
                );
            }
        },
    );
}

#[test]
fn criterion_7_every_solved_chain_has_the_block_structure() {
    criterion(
        7,
        "anti-diagonal Gram identity and Jordan block action for every solved chain",
        || {
            for model in presets() {
                let depth = match model.name() {
                    "harmonic" | "quartic" => 4,
                    _ => 3,
                };
                for n in 1..=depth {
                    let chain = solve_chain(&model, n).expect("chain solves");
                    assert_gram_pattern(&model, &chain);
                    assert_jordan_pattern(&model, &chain);
                }
            }
        },
    );
}

#[test]
fn criterion_8_self_orthogonality_and_the_vacuum_norm() {
    criterion(
        8,
        "eigenstates are self-orthogonal above level 0 and the vacuum norm is pi/(2a)",
        || {
            for model in presets() {
                for n in 0..=3 {
                    let chain = solve_chain(&model, n).expect("chain solves");
                    let gram = gram_matrix(&model, &chain);
                    let expected = if n == 0 {
                        ParamRatio::one()
                    } else {
                        ParamRatio::zero()
                    };
                    assert_eq!(
                        gram[0][0], expected,
                        "{} level {n}: eigenstate self-pairing",
                        model.name()
                    );
                }
                assert_eq!(
                    pairing_integral_absolute(&model, &Prefactor::one(), &Prefactor::one()),
                    r("pi/(2*a)"),
                    "{}: vacuum norm",
                    model.name()
                );
            }
        },
    );
}

#[test]
fn criterion_9_extension_past_the_reference_tables() {
    criterion(
        9,
        "quartic level 6 and a quintic profile pass the identity, pairing, and block checks",
        || {
            let quartic = Model::quartic();
            let chain6 = solve_chain(&quartic, 6).expect("level 6 solves");
            assert!(check_solved_chain(&quartic, &chain6).passed);
            assert_gram_pattern(&quartic, &chain6);
            assert_jordan_pattern(&quartic, &chain6);

            let quintic =
                Model::new(ModelSpec::parse("quintic", "2:b,5:c5").expect("profile parses"));
            let quintic_h = quintic.hamiltonian_element();
            assert!(element_is_hamiltonian(&quintic, &quintic_h, 20, 6, 0x95));
            let letters = [Generator::Ap, Generator::Am, Generator::Bp, Generator::Bm];
            for x in letters {
                for y in letters {
                    assert!(
                        verify_commutator(&quintic, x, y, 20, 6, 0x51),
                        "quintic: [{x:?}, {y:?}]"
                    );
                }
            }
            let start = Instant::now();
            let report = check_pairing_equivalence(&quintic, 6);
            assert!(report.passed, "quintic: {}", report.detail);
            assert!(start.elapsed() < Duration::from_secs(30));

            let chain = solve_chain(&quintic, 2).expect("quintic level 2 solves");
            assert!(check_solved_chain(&quintic, &chain).passed);
            assert_gram_pattern(&quintic, &chain);
            assert_jordan_pattern(&quintic, &chain);
        },
    );
}
