//! Sparse multivariate polynomials with arbitrary-precision integer
//! coefficients.
//!
//! Provides:
//! * [`Var`]: a parameter name; the four standard oscillator parameters
//!   `a`, `b`, `omega`, `epsilon` sort ahead of any custom parameter.
//! * [`Monomial`]: an exponent vector, ordered graded-lexicographically.
//! * [`ParamPoly`]: a polynomial stored as a sorted term map, so equal
//!   polynomials always have identical representations.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num::bigint::Sign;
use num::{BigInt, BigRational, Integer, One, Signed, Zero};

/// A named scalar parameter of the oscillator family.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Var(Arc<str>);

impl Var {
    pub fn new(name: &str) -> Self {
        Var(Arc::from(name))
    }

    pub fn a() -> Self {
        Var::new("a")
    }

    pub fn b() -> Self {
        Var::new("b")
    }

    pub fn omega() -> Self {
        Var::new("omega")
    }

    pub fn epsilon() -> Self {
        Var::new("epsilon")
    }

    pub fn name(&self) -> &str {
        &self.0
    }

    /// Standard parameters come first, in a fixed order; custom parameters
    /// follow alphabetically. This keeps renderings stable no matter how a
    /// model was assembled.
    fn rank(&self) -> u8 {
        match &*self.0 {
            "a" => 0,
            "b" => 1,
            "omega" => 2,
            "epsilon" => 3,
            _ => 4,
        }
    }
}

impl Ord for Var {
    fn cmp(&self, other: &Self) -> Ordering {
        self.rank()
            .cmp(&other.rank())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Var {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// A power product of variables. Exponents are kept sorted by variable with
/// zero exponents removed, so the representation is canonical.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Monomial {
    exps: Vec<(Var, u32)>,
}

impl Monomial {
    pub fn one() -> Self {
        Monomial { exps: Vec::new() }
    }

    pub fn var(v: Var, exp: u32) -> Self {
        if exp == 0 {
            Monomial::one()
        } else {
            Monomial {
                exps: vec![(v, exp)],
            }
        }
    }

    pub fn is_one(&self) -> bool {
        self.exps.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.exps.iter().map(|(_, e)| *e).sum()
    }

    pub fn exponent(&self, v: &Var) -> u32 {
        self.exps
            .iter()
            .find(|(w, _)| w == v)
            .map(|(_, e)| *e)
            .unwrap_or(0)
    }

    pub fn vars(&self) -> impl Iterator<Item = &Var> {
        self.exps.iter().map(|(v, _)| v)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Var, u32)> {
        self.exps.iter().map(|(v, e)| (v, *e))
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut exps = Vec::with_capacity(self.exps.len() + other.exps.len());
        let (mut i, mut j) = (0, 0);
        while i < self.exps.len() && j < other.exps.len() {
            match self.exps[i].0.cmp(&other.exps[j].0) {
                Ordering::Less => {
                    exps.push(self.exps[i].clone());
                    i += 1;
                }
                Ordering::Greater => {
                    exps.push(other.exps[j].clone());
                    j += 1;
                }
                Ordering::Equal => {
                    exps.push((self.exps[i].0.clone(), self.exps[i].1 + other.exps[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        exps.extend_from_slice(&self.exps[i..]);
        exps.extend_from_slice(&other.exps[j..]);
        Monomial { exps }
    }

    /// Componentwise quotient, if `other` divides `self`.
    pub fn try_div(&self, other: &Monomial) -> Option<Monomial> {
        let mut exps = Vec::with_capacity(self.exps.len());
        let mut j = 0;
        for (v, e) in &self.exps {
            while j < other.exps.len() && other.exps[j].0 < *v {
                return None;
            }
            if j < other.exps.len() && other.exps[j].0 == *v {
                let oe = other.exps[j].1;
                j += 1;
                match e.cmp(&oe) {
                    Ordering::Less => return None,
                    Ordering::Equal => {}
                    Ordering::Greater => exps.push((v.clone(), e - oe)),
                }
            } else {
                exps.push((v.clone(), *e));
            }
        }
        if j < other.exps.len() {
            return None;
        }
        Some(Monomial { exps })
    }

    /// Componentwise minimum.
    pub fn gcd(&self, other: &Monomial) -> Monomial {
        let mut exps = Vec::new();
        for (v, e) in &self.exps {
            let oe = other.exponent(v);
            let m = (*e).min(oe);
            if m > 0 {
                exps.push((v.clone(), m));
            }
        }
        Monomial { exps }
    }

    pub fn without(&self, v: &Var) -> Monomial {
        Monomial {
            exps: self
                .exps
                .iter()
                .filter(|(w, _)| w != v)
                .cloned()
                .collect(),
        }
    }
}

impl Ord for Monomial {
    /// Graded lexicographic: total degree first, then the first variable (in
    /// canonical variable order) with differing exponent decides.
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| {
            let (mut i, mut j) = (0, 0);
            loop {
                match (self.exps.get(i), other.exps.get(j)) {
                    (None, None) => return Ordering::Equal,
                    // A missing variable is a zero exponent: whichever side
                    // has the earlier variable has the larger exponent there.
                    (Some(_), None) => return Ordering::Greater,
                    (None, Some(_)) => return Ordering::Less,
                    (Some((v, e)), Some((w, f))) => match v.cmp(w) {
                        Ordering::Less => return Ordering::Greater,
                        Ordering::Greater => return Ordering::Less,
                        Ordering::Equal => {
                            match e.cmp(f) {
                                Ordering::Equal => {}
                                ord => return ord,
                            }
                            i += 1;
                            j += 1;
                        }
                    },
                }
            }
        })
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Errors from numeric evaluation of polynomials and ratios.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EvalError {
    #[error("no value assigned for parameter `{0}`")]
    Unbound(String),
    #[error("denominator vanishes under the given assignment")]
    Pole,
}

/// A sparse multivariate polynomial over the integers.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct ParamPoly {
    terms: BTreeMap<Monomial, BigInt>,
}

impl ParamPoly {
    pub fn zero() -> Self {
        ParamPoly {
            terms: BTreeMap::new(),
        }
    }

    pub fn one() -> Self {
        ParamPoly::constant(BigInt::one())
    }

    pub fn constant(c: BigInt) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Monomial::one(), c);
        }
        ParamPoly { terms }
    }

    pub fn int(c: i64) -> Self {
        ParamPoly::constant(BigInt::from(c))
    }

    pub fn var(v: Var) -> Self {
        ParamPoly::term(Monomial::var(v, 1), BigInt::one())
    }

    pub fn term(m: Monomial, c: BigInt) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        ParamPoly { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.as_constant().map(|c| c.is_one()).unwrap_or(false)
    }

    /// Some(c) when the polynomial is a constant (including zero).
    pub fn as_constant(&self) -> Option<BigInt> {
        match self.terms.len() {
            0 => Some(BigInt::zero()),
            1 => {
                let (m, c) = self.terms.iter().next().unwrap();
                m.is_one().then(|| c.clone())
            }
            _ => None,
        }
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigInt)> {
        self.terms.iter()
    }

    pub fn degree(&self) -> u32 {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    pub fn degree_in(&self, v: &Var) -> u32 {
        self.terms.keys().map(|m| m.exponent(v)).max().unwrap_or(0)
    }

    pub fn vars(&self) -> Vec<Var> {
        let mut out: Vec<Var> = Vec::new();
        for m in self.terms.keys() {
            for v in m.vars() {
                if !out.contains(v) {
                    out.push(v.clone());
                }
            }
        }
        out.sort();
        out
    }

    /// Leading term under the graded lexicographic order.
    pub fn leading(&self) -> Option<(&Monomial, &BigInt)> {
        self.terms.iter().next_back()
    }

    /// True when the first term in display order carries a negative
    /// coefficient. Sign normalization flips on this so that canonical
    /// polynomials never render with a leading minus.
    pub fn leading_coeff_negative(&self) -> bool {
        let mut keys: Vec<&Monomial> = self.terms.keys().collect();
        keys.sort_by(|x, y| display_cmp(x, y));
        keys.first().map(|m| self.terms[m].is_negative()).unwrap_or(false)
    }

    fn add_term(&mut self, m: Monomial, c: BigInt) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn add(&self, other: &ParamPoly) -> ParamPoly {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &ParamPoly) -> ParamPoly {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }

    pub fn neg(&self) -> ParamPoly {
        ParamPoly {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), -c.clone()))
                .collect(),
        }
    }

    pub fn mul(&self, other: &ParamPoly) -> ParamPoly {
        let mut out = ParamPoly::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        out
    }

    pub fn scale(&self, c: &BigInt) -> ParamPoly {
        if c.is_zero() {
            return ParamPoly::zero();
        }
        ParamPoly {
            terms: self
                .terms
                .iter()
                .map(|(m, k)| (m.clone(), k * c))
                .collect(),
        }
    }

    pub fn mul_monomial(&self, m: &Monomial) -> ParamPoly {
        ParamPoly {
            terms: self
                .terms
                .iter()
                .map(|(k, c)| (k.mul(m), c.clone()))
                .collect(),
        }
    }

    pub fn pow(&self, exp: u32) -> ParamPoly {
        let mut out = ParamPoly::one();
        for _ in 0..exp {
            out = out.mul(self);
        }
        out
    }

    /// Positive gcd of all coefficients; zero for the zero polynomial.
    pub fn content(&self) -> BigInt {
        let mut g = BigInt::zero();
        for c in self.terms.values() {
            g = g.gcd(c);
            if g.is_one() {
                break;
            }
        }
        g
    }

    /// Componentwise-minimum monomial dividing every term.
    pub fn monomial_content(&self) -> Monomial {
        let mut it = self.terms.keys();
        let mut g = match it.next() {
            Some(m) => m.clone(),
            None => return Monomial::one(),
        };
        for m in it {
            if g.is_one() {
                break;
            }
            g = g.gcd(m);
        }
        g
    }

    pub fn divide_by_int(&self, c: &BigInt) -> ParamPoly {
        assert!(!c.is_zero(), "division of polynomial by zero integer");
        ParamPoly {
            terms: self
                .terms
                .iter()
                .map(|(m, k)| {
                    let (q, r) = k.div_rem(c);
                    debug_assert!(r.is_zero(), "inexact integer division in polynomial");
                    (m.clone(), q)
                })
                .collect(),
        }
    }

    /// View as a univariate polynomial in `v` with polynomial coefficients.
    pub fn as_univariate(&self, v: &Var) -> BTreeMap<u32, ParamPoly> {
        let mut out: BTreeMap<u32, ParamPoly> = BTreeMap::new();
        for (m, c) in &self.terms {
            let e = m.exponent(v);
            out.entry(e)
                .or_insert_with(ParamPoly::zero)
                .add_term(m.without(v), c.clone());
        }
        out
    }

    pub fn from_univariate(v: &Var, coeffs: &BTreeMap<u32, ParamPoly>) -> ParamPoly {
        let mut out = ParamPoly::zero();
        for (e, p) in coeffs {
            out = out.add(&p.mul_monomial(&Monomial::var(v.clone(), *e)));
        }
        out
    }

    /// Terms in the order `Display` prints them, so other renderers can
    /// match the canonical text layout.
    pub fn display_terms(&self) -> Vec<(&Monomial, &BigInt)> {
        let mut terms: Vec<(&Monomial, &BigInt)> = self.terms.iter().collect();
        terms.sort_by(|x, y| display_cmp(x.0, y.0));
        terms
    }

    pub fn eval(&self, assignment: &BTreeMap<Var, BigRational>) -> Result<BigRational, EvalError> {
        let mut acc = BigRational::zero();
        for (m, c) in &self.terms {
            let mut t = BigRational::from(c.clone());
            for (v, e) in m.iter() {
                let val = assignment
                    .get(v)
                    .ok_or_else(|| EvalError::Unbound(v.name().to_string()))?;
                for _ in 0..e {
                    t *= val;
                }
            }
            acc += t;
        }
        Ok(acc)
    }
}

/// Distinct comparator used only when printing: powers of `omega`, then
/// `epsilon`, then `b`, then `a` (and any custom parameters alphabetically)
/// descending, which reproduces the familiar ordering of anharmonic
/// corrections such as `9*omega^2 + 18*b^2*omega - 4*b^4`.
fn display_cmp(m1: &Monomial, m2: &Monomial) -> Ordering {
    let mut vars: Vec<Var> = vec![Var::omega(), Var::epsilon(), Var::b(), Var::a()];
    for m in [m1, m2] {
        for v in m.vars() {
            if !vars.contains(v) {
                vars.push(v.clone());
            }
        }
    }
    for v in &vars {
        match m1.exponent(v).cmp(&m2.exponent(v)) {
            Ordering::Equal => {}
            ord => return ord.reverse(),
        }
    }
    Ordering::Equal
}

fn write_monomial(f: &mut String, m: &Monomial, c: &BigInt) {
    let abs = c.magnitude();
    if m.is_one() {
        f.push_str(&abs.to_string());
        return;
    }
    let mut first = true;
    if !abs.is_one() {
        f.push_str(&abs.to_string());
        first = false;
    }
    for (v, e) in m.iter() {
        if !first {
            f.push('*');
        }
        first = false;
        f.push_str(v.name());
        if e > 1 {
            f.push('^');
            f.push_str(&e.to_string());
        }
    }
}

impl fmt::Display for ParamPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let terms = self.display_terms();
        let mut out = String::new();
        for (idx, (m, c)) in terms.iter().enumerate() {
            if idx == 0 {
                if c.sign() == Sign::Minus {
                    out.push('-');
                }
            } else if c.sign() == Sign::Minus {
                out.push_str(" - ");
            } else {
                out.push_str(" + ");
            }
            write_monomial(&mut out, m, c);
        }
        f.write_str(&out)
    }
}
