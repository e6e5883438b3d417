//! Coordinate-representation cross-checks.
//!
//! Every state in the vacuum module corresponds to a polynomial prefactor
//! multiplying the common weight; ladder letters act there as first-order
//! differential operators, and the bilinear pairing becomes a weighted
//! integral that reduces to factorial moments. Nothing in this module
//! reuses the commutator table or the vacuum action rules, so agreement
//! between the two representations is a genuine consistency check.
//!
//! * [`Prefactor`]: a polynomial in the coordinate and its conjugate.
//! * [`apply_letter`] / [`apply_element`]: ladder action by derivatives.
//! * [`apply_hamiltonian`]: the second-order operator applied directly.
//! * [`from_vacuum`]: prefactor of a vacuum-module state.
//! * [`pairing_integral`]: the pairing evaluated through moments.
//! * [`pairing_integral_absolute`]: the same with the angular factor kept.
//! * [`verify_commutator`] / [`element_is_hamiltonian`]: spot checks of
//!   operator identities on randomly drawn prefactors.

use std::collections::BTreeMap;
use std::fmt;

use num::BigInt;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use crate::algebra::model::Model;
use crate::algebra::{AlgebraElement, Generator};
use crate::field::{Monomial, ParamPoly, ParamRatio, Var};
use crate::vacuum::VacuumVector;

/// A polynomial in `z` and `zbar` with parameter-field coefficients.
/// The represented state is this polynomial times the weight
/// `exp(-a z zbar - F(zbar))`, which both lowering letters kill.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct Prefactor {
    terms: BTreeMap<(u32, u32), ParamRatio>,
}

impl Prefactor {
    pub fn zero() -> Self {
        Prefactor { terms: BTreeMap::new() }
    }

    pub fn one() -> Self {
        Prefactor::monomial(0, 0)
    }

    /// `z^m zbar^n`.
    pub fn monomial(m: u32, n: u32) -> Self {
        Prefactor::term(m, n, ParamRatio::one())
    }

    pub fn term(m: u32, n: u32, c: ParamRatio) -> Self {
        let mut p = Prefactor::zero();
        p.add_term(m, n, c);
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, m: u32, n: u32) -> ParamRatio {
        self.terms.get(&(m, n)).cloned().unwrap_or_else(ParamRatio::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(u32, u32), &ParamRatio)> {
        self.terms.iter()
    }

    pub fn add_term(&mut self, m: u32, n: u32, c: ParamRatio) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry((m, n)) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = e.get() + &c;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    pub fn scale(&self, c: &ParamRatio) -> Prefactor {
        let mut out = Prefactor::zero();
        for (&(m, n), coeff) in &self.terms {
            out.add_term(m, n, coeff * c);
        }
        out
    }

    pub fn mul(&self, other: &Prefactor) -> Prefactor {
        let mut out = Prefactor::zero();
        for (&(m1, n1), c1) in &self.terms {
            for (&(m2, n2), c2) in &other.terms {
                out.add_term(m1 + m2, n1 + n2, c1 * c2);
            }
        }
        out
    }

    /// Derivative in `z`.
    pub fn d_z(&self) -> Prefactor {
        let mut out = Prefactor::zero();
        for (&(m, n), c) in &self.terms {
            if m > 0 {
                out.add_term(m - 1, n, c * &ParamRatio::from_bigint(m.into()));
            }
        }
        out
    }

    /// Derivative in `zbar`.
    pub fn d_zbar(&self) -> Prefactor {
        let mut out = Prefactor::zero();
        for (&(m, n), c) in &self.terms {
            if n > 0 {
                out.add_term(m, n - 1, c * &ParamRatio::from_bigint(n.into()));
            }
        }
        out
    }

    /// Multiplication by `z^dm zbar^dn`.
    pub fn shift(&self, dm: u32, dn: u32) -> Prefactor {
        let mut out = Prefactor::zero();
        for (&(m, n), c) in &self.terms {
            out.add_term(m + dm, n + dn, c.clone());
        }
        out
    }

    /// Highest power of `z` present.
    pub fn max_z_degree(&self) -> u32 {
        self.terms.keys().map(|&(m, _)| m).max().unwrap_or(0)
    }
}

impl std::ops::Add for &Prefactor {
    type Output = Prefactor;

    fn add(self, rhs: &Prefactor) -> Prefactor {
        let mut out = self.clone();
        for (&(m, n), c) in &rhs.terms {
            out.add_term(m, n, c.clone());
        }
        out
    }
}

impl std::ops::Sub for &Prefactor {
    type Output = Prefactor;

    fn sub(self, rhs: &Prefactor) -> Prefactor {
        let mut out = self.clone();
        for (&(m, n), c) in &rhs.terms {
            out.add_term(m, n, -c);
        }
        out
    }
}

impl fmt::Display for Prefactor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (idx, (&(m, n), c)) in self.terms.iter().enumerate() {
            let negative = c.leading_negative();
            let mag = c.abs();
            if idx == 0 {
                if negative {
                    f.write_str("-")?;
                }
            } else if negative {
                f.write_str(" - ")?;
            } else {
                f.write_str(" + ")?;
            }
            let mono = match (m, n) {
                (0, 0) => String::from("1"),
                _ => {
                    let mut parts = Vec::new();
                    if m == 1 {
                        parts.push("z".to_string());
                    } else if m > 1 {
                        parts.push(format!("z^{m}"));
                    }
                    if n == 1 {
                        parts.push("zbar".to_string());
                    } else if n > 1 {
                        parts.push(format!("zbar^{n}"));
                    }
                    parts.join("*")
                }
            };
            if mag.is_one() && (m, n) != (0, 0) {
                write!(f, "{mono}")?;
            } else if (m, n) == (0, 0) {
                write!(f, "{mag}")?;
            } else if mag.den().is_one() && mag.num().num_terms() == 1 {
                write!(f, "{mag}*{mono}")?;
            } else {
                write!(f, "({mag})*{mono}")?;
            }
        }
        Ok(())
    }
}

/// `F'` as `zbar` powers with their coefficients.
fn profile_derivative(model: &Model) -> Vec<(u32, ParamRatio)> {
    model
        .spec()
        .coeffs()
        .map(|(k, f_k)| (k - 1, f_k * &ParamRatio::from_bigint(k.into())))
        .collect()
}

fn two_a() -> ParamRatio {
    ParamRatio::from_poly(ParamPoly::term(Monomial::var(Var::a(), 1), 2.into()))
}

/// Action of one ladder letter on a prefactor:
/// the lowering letters are plain derivatives, the raising letters pick
/// up the weight's logarithmic derivative a second time.
pub fn apply_letter(model: &Model, g: Generator, p: &Prefactor) -> Prefactor {
    match g {
        Generator::Am => p.d_z(),
        Generator::Bm => p.d_zbar(),
        Generator::Ap => &p.d_z() - &p.shift(0, 1).scale(&two_a()),
        Generator::Bp => {
            let mut out = &p.d_zbar() - &p.shift(1, 0).scale(&two_a());
            for (power, c) in profile_derivative(model) {
                out = &out - &p.shift(0, power).scale(&(&c * &ParamRatio::int(2)));
            }
            out
        }
    }
}

/// Action of an algebra element, words applied rightmost letter first.
pub fn apply_element(model: &Model, e: &AlgebraElement, p: &Prefactor) -> Prefactor {
    let mut out = Prefactor::zero();
    for (w, c) in e.terms() {
        let mut acc = p.clone();
        for &g in w.letters().iter().rev() {
            acc = apply_letter(model, g, &acc);
        }
        out = &out + &acc.scale(c);
    }
    out
}

/// The Hamiltonian applied directly in its second-order form
/// `-4 Dz Dzbar + (4 a^2 z zbar + 4 a zbar F'(zbar))`, where `Dz` and
/// `Dzbar` subtract the weight's logarithmic derivatives once.
pub fn apply_hamiltonian(model: &Model, p: &Prefactor) -> Prefactor {
    let a_ratio = ParamRatio::from_poly(ParamPoly::var(Var::a()));
    let d_zbar_w = |q: &Prefactor| -> Prefactor {
        // Dzbar = d/dzbar - (a z + F'(zbar)).
        let mut out = &q.d_zbar() - &q.shift(1, 0).scale(&a_ratio);
        for (power, c) in profile_derivative(model) {
            out = &out - &q.shift(0, power).scale(&c);
        }
        out
    };
    let d_z_w = |q: &Prefactor| -> Prefactor {
        // Dz = d/dz - a zbar.
        &q.d_z() - &q.shift(0, 1).scale(&a_ratio)
    };
    let second = d_z_w(&d_zbar_w(p)).scale(&ParamRatio::int(-4));
    let four_a_sq = ParamRatio::from_poly(ParamPoly::term(Monomial::var(Var::a(), 2), 4.into()));
    let mut potential = p.shift(1, 1).scale(&four_a_sq);
    let four_a = ParamRatio::from_poly(ParamPoly::term(Monomial::var(Var::a(), 1), 4.into()));
    for (power, c) in profile_derivative(model) {
        potential = &potential + &p.shift(0, power + 1).scale(&(&c * &four_a));
    }
    &second + &potential
}

/// Prefactor of a vacuum-module state, built by applying the raising
/// letters analytically to the constant prefactor.
pub fn from_vacuum(model: &Model, v: &VacuumVector) -> Prefactor {
    let mut out = Prefactor::zero();
    for (mono, c) in v.terms() {
        let mut acc = Prefactor::one();
        for _ in 0..mono.j {
            acc = apply_letter(model, Generator::Bp, &acc);
        }
        for _ in 0..mono.i {
            acc = apply_letter(model, Generator::Ap, &acc);
        }
        out = &out + &acc.scale(c);
    }
    out
}

/// Series of `exp(-2 F(zbar))` up to `zbar` degree `max_deg`, computed
/// from the differential recurrence for the exponential of a polynomial.
fn exp_minus_two_f(model: &Model, max_deg: u32) -> Vec<ParamRatio> {
    // P = -2F; E' = P' E gives k e_k = sum i p_i e_(k-i).
    let mut p = vec![ParamRatio::zero(); max_deg as usize + 1];
    for (k, f_k) in model.spec().coeffs() {
        if k <= max_deg {
            p[k as usize] = f_k * &ParamRatio::int(-2);
        }
    }
    let mut e = vec![ParamRatio::zero(); max_deg as usize + 1];
    e[0] = ParamRatio::one();
    for k in 1..=max_deg as usize {
        let mut acc = ParamRatio::zero();
        for i in 1..=k {
            if !p[i].is_zero() {
                acc = &acc + &(&(&p[i] * &e[k - i]) * &ParamRatio::from_bigint(i.into()));
            }
        }
        e[k] = acc
            .checked_div(&ParamRatio::from_bigint(k.into()))
            .expect("nonzero factorial index");
    }
    e
}

/// The bilinear pairing computed as a weighted integral, in units of the
/// vacuum normalization.
///
/// Only diagonal monomials survive the angular integration, with moment
/// `m! / (2a)^m` relative to the vacuum; the residual weight
/// `exp(-2 F(zbar))` is expanded far enough that every contributing
/// diagonal term is captured.
pub fn pairing_integral(model: &Model, p: &Prefactor, q: &Prefactor) -> ParamRatio {
    let product = p.mul(q);
    let cutoff = product.max_z_degree();
    let weight = exp_minus_two_f(model, cutoff);
    let factorial = |k: u32| -> BigInt { (1..=k).map(BigInt::from).product() };
    let mut out = ParamRatio::zero();
    for (&(m, n), c) in product.terms() {
        if n > m {
            continue;
        }
        let k = m - n;
        if k > cutoff || weight[k as usize].is_zero() {
            continue;
        }
        let moment = ParamRatio::new(
            ParamPoly::constant(factorial(m)),
            ParamPoly::term(Monomial::var(Var::a(), m), BigInt::from(2).pow(m)),
        );
        out = &out + &(&(c * &weight[k as usize]) * &moment);
    }
    out
}

/// The pairing as an honest area integral. The relative version divides
/// out the vacuum normalization `pi / (2a)`; this one keeps it, with the
/// circle constant carried as the formal symbol `pi` so the result stays
/// exact.
pub fn pairing_integral_absolute(model: &Model, p: &Prefactor, q: &Prefactor) -> ParamRatio {
    let vacuum_norm = ParamRatio::new(
        ParamPoly::var(Var::new("pi")),
        ParamPoly::term(Monomial::var(Var::a(), 1), 2.into()),
    );
    &pairing_integral(model, p, q) * &vacuum_norm
}

/// A pseudo-random prefactor: one to four monomials with both exponents at
/// most `max_deg` and small integer coefficients, never the zero polynomial.
pub fn random_prefactor(rng: &mut impl Rng, max_deg: u32) -> Prefactor {
    loop {
        let mut p = Prefactor::zero();
        for _ in 0..rng.gen_range(1..=4u32) {
            let m = rng.gen_range(0..=max_deg);
            let n = rng.gen_range(0..=max_deg);
            p.add_term(m, n, ParamRatio::int(rng.gen_range(-3..=3i64)));
        }
        if !p.is_zero() {
            return p;
        }
    }
}

/// Checks the commutator table entry for `(x, y)` against the difference
/// of compositions on `trials` random prefactors. The comparison is exact:
/// coefficients stay in the parameter field throughout.
pub fn verify_commutator(
    model: &Model,
    x: Generator,
    y: Generator,
    trials: u32,
    max_deg: u32,
    seed: u64,
) -> bool {
    let mut rng = StdRng::seed_from_u64(seed);
    let claimed = model.commutator(x, y);
    for _ in 0..trials {
        let p = random_prefactor(&mut rng, max_deg);
        let direct = &apply_letter(model, x, &apply_letter(model, y, &p))
            - &apply_letter(model, y, &apply_letter(model, x, &p));
        if direct != apply_element(model, &claimed, &p) {
            return false;
        }
    }
    true
}

/// Checks whether a ladder-word expression acts like the Hamiltonian on
/// `trials` random prefactors. Used both to confirm the normal-ordered
/// form and to reject plausible-looking sign variants of it.
pub fn element_is_hamiltonian(
    model: &Model,
    candidate: &AlgebraElement,
    trials: u32,
    max_deg: u32,
    seed: u64,
) -> bool {
    let mut rng = StdRng::seed_from_u64(seed);
    for _ in 0..trials {
        let p = random_prefactor(&mut rng, max_deg);
        if apply_element(model, candidate, &p) != apply_hamiltonian(model, &p) {
            return false;
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Word;
    use crate::chain::eigenstate;
    use crate::field::parse_ratio;
    use crate::vacuum::VacMonomial;

    fn r(s: &str) -> ParamRatio {
        parse_ratio(s).unwrap()
    }

    fn models() -> [Model; 4] {
        [Model::harmonic(), Model::quartic(), Model::cubic_quartic(), Model::sextic()]
    }

    /// Checks two linear operators agree on a grid of monomials.
    fn operators_agree(
        model: &Model,
        lhs: &dyn Fn(&Prefactor) -> Prefactor,
        rhs: &dyn Fn(&Prefactor) -> Prefactor,
        max_deg: u32,
    ) -> bool {
        for m in 0..=max_deg {
            for n in 0..=max_deg {
                let p = Prefactor::monomial(m, n);
                if lhs(&p) != rhs(&p) {
                    eprintln!("operators disagree on z^{m} zbar^{n} for {}", model.name());
                    return false;
                }
            }
        }
        true
    }

    #[test]
    fn eigen_prefactor_is_a_pure_power() {
        for model in models() {
            for n in 0..=4 {
                assert_eq!(
                    from_vacuum(&model, &eigenstate(n)),
                    Prefactor::monomial(0, n),
                    "level {n} for {}",
                    model.name()
                );
            }
        }
    }

    #[test]
    fn commutator_table_matches_the_analytic_commutators() {
        for model in models() {
            for x in Generator::ALL {
                for y in Generator::ALL {
                    let table = model.commutator(x, y);
                    let lhs = |p: &Prefactor| {
                        let xy = apply_letter(&model, x, &apply_letter(&model, y, p));
                        let yx = apply_letter(&model, y, &apply_letter(&model, x, p));
                        &xy - &yx
                    };
                    let rhs = |p: &Prefactor| apply_element(&model, &table, p);
                    assert!(
                        operators_agree(&model, &lhs, &rhs, 3),
                        "pair ({x}, {y}) for {}",
                        model.name()
                    );
                }
            }
        }
    }

    #[test]
    fn hamiltonian_ladder_form_matches_the_differential_form() {
        for model in models() {
            let h = model.hamiltonian_element();
            let lhs = |p: &Prefactor| apply_element(&model, &h, p);
            let rhs = |p: &Prefactor| apply_hamiltonian(&model, p);
            assert!(operators_agree(&model, &lhs, &rhs, 4), "model {}", model.name());
        }
    }

    #[test]
    fn weight_series_for_the_quartic_profile() {
        let e = exp_minus_two_f(&Model::quartic(), 4);
        assert_eq!(e[0], r("1"));
        assert_eq!(e[1], r("0"));
        assert_eq!(e[2], r("-2*b"));
        assert_eq!(e[3], r("0"));
        assert_eq!(e[4], r("2*b^2 - omega"));
    }

    #[test]
    fn integral_pairing_matches_the_vacuum_pairing() {
        for model in models() {
            let samples = [
                VacuumVector::vacuum(),
                VacuumVector::monomial(VacMonomial::new(1, 0)),
                VacuumVector::monomial(VacMonomial::new(0, 1)),
                VacuumVector::monomial(VacMonomial::new(2, 1)),
                VacuumVector::monomial(VacMonomial::new(0, 2)),
                &VacuumVector::monomial(VacMonomial::new(1, 2)).scale(&r("b"))
                    - &VacuumVector::monomial(VacMonomial::new(3, 0)).scale(&r("1/(2*a)")),
            ];
            for x in &samples {
                for y in &samples {
                    let algebraic = model.pairing(x, y);
                    let analytic =
                        pairing_integral(&model, &from_vacuum(&model, x), &from_vacuum(&model, y));
                    assert_eq!(algebraic, analytic, "model {}", model.name());
                }
            }
        }
    }

    #[test]
    fn vacuum_is_normalized_in_every_model() {
        for model in models() {
            assert_eq!(pairing_integral(&model, &Prefactor::one(), &Prefactor::one()), r("1"));
        }
    }

    #[test]
    fn derivative_and_shift_bookkeeping() {
        let p = Prefactor::term(2, 1, r("b"));
        assert_eq!(p.d_z(), Prefactor::term(1, 1, r("2*b")));
        assert_eq!(p.d_zbar(), Prefactor::term(2, 0, r("b")));
        assert_eq!(p.shift(1, 2).coeff(3, 3), r("b"));
        assert_eq!(p.to_string(), "b*z^2*zbar");
    }

    #[test]
    fn absolute_pairing_of_the_vacuum_is_half_pi_over_a() {
        for model in models() {
            assert_eq!(
                pairing_integral_absolute(&model, &Prefactor::one(), &Prefactor::one()),
                r("pi/(2*a)"),
                "model {}",
                model.name()
            );
        }
    }

    #[test]
    fn random_prefactor_checks_accept_the_true_operator_forms() {
        for model in models() {
            assert!(
                element_is_hamiltonian(&model, &model.hamiltonian_element(), 20, 6, 7),
                "ladder form rejected for {}",
                model.name()
            );
            for x in Generator::ALL {
                for y in Generator::ALL {
                    assert!(
                        verify_commutator(&model, x, y, 8, 5, 11),
                        "pair ({x}, {y}) rejected for {}",
                        model.name()
                    );
                }
            }
        }
    }

    /// The quadratic part of the ladder form carries minus signs. The
    /// variant with plus signs looks similar but already fails on the
    /// prefactor `zbar`, where the two differ by `4 Ap Bm (zbar) =
    /// -8a zbar`.
    #[test]
    fn flipping_the_quadratic_signs_breaks_the_ladder_form() {
        use Generator::*;
        for model in models() {
            let two = ParamRatio::int(2);
            let flipped = AlgebraElement::term(Word::from_letters(&[Ap, Bm]), two.clone())
                + AlgebraElement::term(Word::from_letters(&[Bp, Am]), two)
                + AlgebraElement::scalar(r("4*a"));
            let p = Prefactor::monomial(0, 1);
            assert_ne!(
                apply_element(&model, &flipped, &p),
                apply_hamiltonian(&model, &p),
                "model {}",
                model.name()
            );
            assert!(!element_is_hamiltonian(&model, &flipped, 20, 6, 7));
        }
    }

    #[test]
    fn random_prefactors_are_reproducible_and_degree_bounded() {
        let mut rng = StdRng::seed_from_u64(5);
        let first: Vec<Prefactor> = (0..6).map(|_| random_prefactor(&mut rng, 4)).collect();
        let mut rng = StdRng::seed_from_u64(5);
        let second: Vec<Prefactor> = (0..6).map(|_| random_prefactor(&mut rng, 4)).collect();
        assert_eq!(first, second);
        for p in &first {
            assert!(!p.is_zero());
            for (&(m, n), _) in p.terms() {
                assert!(m <= 4 && n <= 4);
            }
        }
    }
}
