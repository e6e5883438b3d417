//! Anharmonic profiles and the commutation rules they induce.
//!
//! A model is a polynomial profile `F(u) = sum f_k u^k` with `k >= 2`. All
//! ladder commutators are parameter-free scalars except `[Bm, Bp]`, which
//! equals `-2 F''` evaluated on the combination `(Am - Ap)/(2a)`; that one
//! element is computed once per model and cached.
//!
//! * [`ModelSpec`]: the profile coefficients and named presets.
//! * [`Model`]: a spec plus the cached `[Bm, Bp]` element.
//! * [`ModelError`]: rejection reasons for custom profiles.
//! * [`zbar_element`]: the combination `(Am - Ap)/(2a)`.

use std::collections::BTreeMap;
use std::fmt;

use num::integer::binomial;
use num::BigInt;
use thiserror::Error;

use crate::field::{parse_ratio, Monomial, ParamPoly, ParamRatio, ParseError, Var};

use super::{AlgebraElement, Generator, Word};

/// Why a profile was rejected.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum ModelError {
    /// Profile powers start at two; lower powers are absorbed by the
    /// harmonic part of the problem and are not accepted here.
    #[error("profile power {0} is below the minimum of 2")]
    PowerTooLow(u32),
    /// A `power:coefficient` entry could not be split.
    #[error("malformed profile entry {0:?}, expected power:coefficient")]
    MalformedEntry(String),
    #[error("bad power in profile entry: {0}")]
    BadPower(String),
    #[error("bad coefficient in profile entry: {0}")]
    BadCoefficient(#[from] ParseError),
    #[error("unknown model name {0:?}")]
    UnknownName(String),
}

/// Coefficients of the anharmonic profile `F`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ModelSpec {
    name: String,
    coeffs: BTreeMap<u32, ParamRatio>,
}

impl ModelSpec {
    /// Pure oscillator: `F(u) = b u^2`.
    pub fn harmonic() -> Self {
        ModelSpec::preset("harmonic", &[(2, "b")])
    }

    /// `F(u) = b u^2 + (omega/2) u^4`.
    pub fn quartic() -> Self {
        ModelSpec::preset("quartic", &[(2, "b"), (4, "omega/2")])
    }

    /// `F(u) = b u^2 + (2 epsilon/3) u^3 + (omega/2) u^4`.
    pub fn cubic_quartic() -> Self {
        ModelSpec::preset("cubic_quartic", &[(2, "b"), (3, "2*epsilon/3"), (4, "omega/2")])
    }

    /// `F(u) = b u^2 + (omega/2) u^4 + (epsilon/3) u^6`.
    pub fn sextic() -> Self {
        ModelSpec::preset("sextic", &[(2, "b"), (4, "omega/2"), (6, "epsilon/3")])
    }

    fn preset(name: &str, entries: &[(u32, &str)]) -> Self {
        let coeffs = entries
            .iter()
            .map(|(k, s)| (*k, parse_ratio(s).expect("preset coefficient parses")))
            .collect();
        ModelSpec { name: name.to_string(), coeffs }
    }

    /// A profile from explicit coefficients. Powers below two are
    /// rejected; zero coefficients are dropped.
    pub fn custom(name: &str, entries: Vec<(u32, ParamRatio)>) -> Result<Self, ModelError> {
        let mut coeffs = BTreeMap::new();
        for (k, c) in entries {
            if k < 2 {
                return Err(ModelError::PowerTooLow(k));
            }
            if !c.is_zero() {
                coeffs.insert(k, c);
            }
        }
        Ok(ModelSpec { name: name.to_string(), coeffs })
    }

    /// Parses a comma-separated list of `power:coefficient` entries, for
    /// example `"2:b,5:c5"`.
    pub fn parse(name: &str, input: &str) -> Result<Self, ModelError> {
        let mut entries = Vec::new();
        for part in input.split(',') {
            let part = part.trim();
            if part.is_empty() {
                continue;
            }
            let (k, c) = part
                .split_once(':')
                .ok_or_else(|| ModelError::MalformedEntry(part.to_string()))?;
            let k: u32 = k.trim().parse().map_err(|_| ModelError::BadPower(k.trim().to_string()))?;
            entries.push((k, parse_ratio(c)?));
        }
        ModelSpec::custom(name, entries)
    }

    /// The four built-in profiles by name.
    pub fn named(name: &str) -> Result<Self, ModelError> {
        match name {
            "harmonic" => Ok(ModelSpec::harmonic()),
            "quartic" => Ok(ModelSpec::quartic()),
            "cubic_quartic" => Ok(ModelSpec::cubic_quartic()),
            "sextic" => Ok(ModelSpec::sextic()),
            other => Err(ModelError::UnknownName(other.to_string())),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// `(power, coefficient)` pairs in increasing power order.
    pub fn coeffs(&self) -> impl Iterator<Item = (u32, &ParamRatio)> {
        self.coeffs.iter().map(|(k, c)| (*k, c))
    }

    /// Coefficient of the quadratic part, or `None` when the profile has
    /// no `u^2` term. The chain normalization divides by this.
    pub fn quadratic_coeff(&self) -> Option<&ParamRatio> {
        self.coeffs.get(&2)
    }

    /// Highest power in the profile; zero for an empty profile.
    pub fn degree(&self) -> u32 {
        self.coeffs.keys().next_back().copied().unwrap_or(0)
    }

    /// How far one application of `[Bm, Bp]` can shift the oscillator
    /// degree: the profile degree minus two.
    pub fn spread(&self) -> u32 {
        self.degree().saturating_sub(2)
    }

    /// Step of the degree lattice preserved by the problem: one when the
    /// profile has an odd power above two, else two.
    pub fn parity_step(&self) -> u32 {
        if self.coeffs.keys().any(|&k| k >= 3 && k % 2 == 1) {
            1
        } else {
            2
        }
    }

    /// The profile as the `power:coefficient` list [`ModelSpec::parse`]
    /// accepts, e.g. `2:b,4:omega/2`.
    pub fn profile_string(&self) -> String {
        self.coeffs
            .iter()
            .map(|(k, c)| format!("{k}:{c}"))
            .collect::<Vec<_>>()
            .join(",")
    }
}

impl fmt::Display for ModelSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} [", self.name)?;
        for (idx, (k, c)) in self.coeffs.iter().enumerate() {
            if idx > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{}:{}", k, c)?;
        }
        f.write_str("]")
    }
}

/// The combination `(Am - Ap)/(2a)` that reproduces multiplication by the
/// anti-holomorphic coordinate inside normal-ordered expressions.
pub fn zbar_element() -> AlgebraElement {
    let half = ParamRatio::new(ParamPoly::one(), two_a_pow(1));
    AlgebraElement::term(Word::letter(Generator::Am), half.clone())
        + AlgebraElement::term(Word::letter(Generator::Ap), -&half)
}

fn two_a_pow(p: u32) -> ParamPoly {
    ParamPoly::term(Monomial::var(Var::a(), p), BigInt::from(2).pow(p))
}

/// `((Am - Ap)/(2a))^p`, expanded directly into normal-ordered words.
/// `Ap` and `Am` commute, so the binomial theorem applies.
fn zbar_power(p: u32) -> AlgebraElement {
    let mut out = AlgebraElement::zero();
    for q in 0..=p {
        let mut letters = Vec::with_capacity(p as usize);
        letters.extend(std::iter::repeat(Generator::Ap).take((p - q) as usize));
        letters.extend(std::iter::repeat(Generator::Am).take(q as usize));
        let mut num = binomial(BigInt::from(p), BigInt::from(q));
        if (p - q) % 2 == 1 {
            num = -num;
        }
        let coeff = ParamRatio::new(ParamPoly::constant(num), two_a_pow(p));
        out.add_term(Word::from_letters(&letters), coeff);
    }
    out
}

/// A profile together with its cached `[Bm, Bp]` element and a memo table
/// for the vacuum action of `Bm` on pure `Bp` towers.
#[derive(Debug)]
pub struct Model {
    spec: ModelSpec,
    bb: AlgebraElement,
    pub(crate) lb_cache: std::sync::Mutex<BTreeMap<u32, crate::vacuum::VacuumVector>>,
}

impl Model {
    pub fn new(spec: ModelSpec) -> Self {
        // [Bm, Bp] = -2 F'' at zbar: sum over powers of
        // -2 k (k-1) f_k zbar^(k-2), already normal-ordered.
        let mut bb = AlgebraElement::zero();
        for (k, f_k) in spec.coeffs() {
            let factor = ParamRatio::from_bigint(BigInt::from(-2i64 * k as i64 * (k as i64 - 1)));
            bb = &bb + &zbar_power(k - 2).scale(&(&factor * f_k));
        }
        Model { spec, bb, lb_cache: std::sync::Mutex::new(BTreeMap::new()) }
    }

    pub fn harmonic() -> Self {
        Model::new(ModelSpec::harmonic())
    }

    pub fn quartic() -> Self {
        Model::new(ModelSpec::quartic())
    }

    pub fn cubic_quartic() -> Self {
        Model::new(ModelSpec::cubic_quartic())
    }

    pub fn sextic() -> Self {
        Model::new(ModelSpec::sextic())
    }

    pub fn spec(&self) -> &ModelSpec {
        &self.spec
    }

    pub fn name(&self) -> &str {
        self.spec.name()
    }

    /// The cached normal-ordered `[Bm, Bp]`, a polynomial in `Ap` and `Am`
    /// of degree `spread()`.
    pub fn bb_commutator(&self) -> &AlgebraElement {
        &self.bb
    }

    /// Commutator of two letters as a normal-ordered element.
    ///
    /// All pairs are scalars except `[Bm, Bp]`; the scalar values do not
    /// depend on the profile.
    pub fn commutator(&self, x: Generator, y: Generator) -> AlgebraElement {
        use Generator::*;
        let two_a = || ParamRatio::from_poly(ParamPoly::term(Monomial::var(Var::a(), 1), 2.into()));
        match (x, y) {
            (Ap, Bm) => AlgebraElement::scalar(two_a()),
            (Bm, Ap) => AlgebraElement::scalar(-&two_a()),
            (Am, Bp) => AlgebraElement::scalar(-&two_a()),
            (Bp, Am) => AlgebraElement::scalar(two_a()),
            (Bm, Bp) => self.bb.clone(),
            (Bp, Bm) => -&self.bb,
            _ => AlgebraElement::zero(),
        }
    }

    /// The Hamiltonian in normal-ordered ladder form:
    /// `-2 Ap Bm - 2 Bp Am + 4a`.
    pub fn hamiltonian_element(&self) -> AlgebraElement {
        use Generator::*;
        let m2 = ParamRatio::int(-2);
        AlgebraElement::term(Word::from_letters(&[Ap, Bm]), m2.clone())
            + AlgebraElement::term(Word::from_letters(&[Bp, Am]), m2)
            + AlgebraElement::scalar(Model::four_a())
    }

    fn four_a() -> ParamRatio {
        ParamRatio::from_poly(ParamPoly::term(Monomial::var(Var::a(), 1), 4.into()))
    }

    /// Eigenvalue of the level-`n` block: `4a(n + 1)`.
    pub fn energy(&self, n: u32) -> ParamRatio {
        ParamRatio::from_poly(ParamPoly::term(
            Monomial::var(Var::a(), 1),
            BigInt::from(4) * BigInt::from(n + 1),
        ))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::normal_order::normal_order;

    fn r(s: &str) -> ParamRatio {
        parse_ratio(s).unwrap()
    }

    #[test]
    fn presets_have_expected_profiles() {
        let s = ModelSpec::sextic();
        let entries: Vec<(u32, String)> = s.coeffs().map(|(k, c)| (k, c.to_string())).collect();
        assert_eq!(
            entries,
            vec![(2, "b".into()), (4, "omega/2".into()), (6, "epsilon/3".into())]
        );
        assert_eq!(s.degree(), 6);
        assert_eq!(s.spread(), 4);
        assert_eq!(s.parity_step(), 2);
        assert_eq!(ModelSpec::cubic_quartic().parity_step(), 1);
        assert_eq!(ModelSpec::harmonic().spread(), 0);
        assert_eq!(ModelSpec::quartic().spread(), 2);
    }

    #[test]
    fn parse_accepts_custom_profiles() {
        let s = ModelSpec::parse("quintic", "2:b,5:c5").unwrap();
        assert_eq!(s.degree(), 5);
        assert_eq!(s.parity_step(), 1);
        assert_eq!(s.quadratic_coeff(), Some(&r("b")));
        assert_eq!(ModelSpec::parse("bad", "1:b"), Err(ModelError::PowerTooLow(1)));
        assert!(matches!(ModelSpec::parse("bad", "2-b"), Err(ModelError::MalformedEntry(_))));
        assert!(matches!(ModelSpec::parse("bad", "x:b"), Err(ModelError::BadPower(_))));
        assert!(matches!(ModelSpec::parse("bad", "2:)"), Err(ModelError::BadCoefficient(_))));
    }

    #[test]
    fn commutators_are_antisymmetric() {
        let m = Model::cubic_quartic();
        for &x in &Generator::ALL {
            for &y in &Generator::ALL {
                assert_eq!(m.commutator(x, y), -&m.commutator(y, x));
            }
        }
    }

    #[test]
    fn oscillator_pairs_commute_with_their_partners() {
        use Generator::*;
        let m = Model::quartic();
        assert!(m.commutator(Am, Ap).is_zero());
        assert!(m.commutator(Ap, Bp).is_zero());
        assert!(m.commutator(Am, Bm).is_zero());
        assert_eq!(m.commutator(Ap, Bm), AlgebraElement::scalar(r("2*a")));
        assert_eq!(m.commutator(Am, Bp), AlgebraElement::scalar(r("-2*a")));
    }

    #[test]
    fn harmonic_bb_commutator_is_scalar() {
        assert_eq!(Model::harmonic().bb_commutator(), &AlgebraElement::scalar(r("-4*b")));
    }

    #[test]
    fn cubic_quartic_bb_commutator_matches_direct_expansion() {
        // -2 F'' at zbar = -4b - 8 epsilon zbar - 12 omega zbar^2, with the
        // square expanded through the rewriting machinery as a cross check.
        let m = Model::cubic_quartic();
        let zb = zbar_element();
        let raw = AlgebraElement::scalar(r("-4*b"))
            + zb.scale(&r("-8*epsilon"))
            + (&zb * &zb).scale(&r("-12*omega"));
        assert_eq!(normal_order(&m, &raw), *m.bb_commutator());
    }

    #[test]
    fn hamiltonian_and_energy_forms() {
        let m = Model::harmonic();
        assert_eq!(m.hamiltonian_element().to_string(), "-2*Ap*Bm - 2*Bp*Am + 4*a");
        assert_eq!(m.energy(0), r("4*a"));
        assert_eq!(m.energy(4), r("20*a"));
    }

    #[test]
    fn display_lists_profile_entries() {
        assert_eq!(
            ModelSpec::cubic_quartic().to_string(),
            "cubic_quartic [2:b, 3:2*epsilon/3, 4:omega/2]"
        );
    }
}
