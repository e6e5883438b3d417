//! The vacuum module: states spanned by `Ap^i Bp^j |0>` and the bilinear
//! pairing between them.
//!
//! Every state the chain construction touches is a finite combination of
//! raising words applied to the vacuum. Lowering letters act by the
//! commutation rules: `Am` kills the vacuum outright, while `Bm` leaves a
//! tail produced by `[Bm, Bp]`, handled by a per-model memoized recursion.
//! The pairing is bilinear (no conjugation): the bra side is transposed,
//! letter by letter, and read off against the vacuum coefficient.
//!
//! * [`VacMonomial`]: one raising word applied to the vacuum.
//! * [`VacuumVector`]: a combination of such states.
//! * [`Model::apply`] / [`Model::apply_letter`]: operator action.
//! * [`Model::pairing`]: the bilinear form, normalized to one on the
//!   vacuum.

use std::collections::BTreeMap;
use std::fmt;

use num::BigInt;

use crate::algebra::model::Model;
use crate::algebra::{AlgebraElement, Generator, Word};
use crate::field::{Monomial, ParamPoly, ParamRatio, Var};

/// The state `Ap^i Bp^j |0>`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct VacMonomial {
    pub i: u32,
    pub j: u32,
}

impl VacMonomial {
    pub fn new(i: u32, j: u32) -> Self {
        VacMonomial { i, j }
    }

    pub fn vacuum() -> Self {
        VacMonomial { i: 0, j: 0 }
    }

    /// Total raising degree `i + j`.
    pub fn degree(&self) -> u32 {
        self.i + self.j
    }
}

impl Ord for VacMonomial {
    /// Graded order: total degree first, then the `Bp` exponent.
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.degree(), self.j).cmp(&(other.degree(), other.j))
    }
}

impl PartialOrd for VacMonomial {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for VacMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.i == 0 && self.j == 0 {
            return f.write_str("|0>");
        }
        write!(f, "{}|0>", Word::raising(self.i, self.j))
    }
}

/// A finite combination of vacuum monomials with field coefficients.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct VacuumVector {
    terms: BTreeMap<VacMonomial, ParamRatio>,
}

impl VacuumVector {
    pub fn zero() -> Self {
        VacuumVector { terms: BTreeMap::new() }
    }

    /// The vacuum itself, coefficient one.
    pub fn vacuum() -> Self {
        VacuumVector::monomial(VacMonomial::vacuum())
    }

    pub fn monomial(m: VacMonomial) -> Self {
        let mut v = VacuumVector::zero();
        v.add_term(m, ParamRatio::one());
        v
    }

    pub fn term(m: VacMonomial, c: ParamRatio) -> Self {
        let mut v = VacuumVector::zero();
        v.add_term(m, c);
        v
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&VacMonomial, &ParamRatio)> {
        self.terms.iter()
    }

    /// Coefficient of `m`, zero when absent.
    pub fn coeff(&self, m: &VacMonomial) -> ParamRatio {
        self.terms.get(m).cloned().unwrap_or_else(ParamRatio::zero)
    }

    /// Coefficient of the vacuum monomial, which is what the pairing
    /// ultimately reads off.
    pub fn vacuum_coeff(&self) -> ParamRatio {
        self.coeff(&VacMonomial::vacuum())
    }

    pub fn add_term(&mut self, m: VacMonomial, c: ParamRatio) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
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

    pub fn scale(&self, c: &ParamRatio) -> VacuumVector {
        if c.is_zero() {
            return VacuumVector::zero();
        }
        let mut out = VacuumVector::zero();
        for (m, coeff) in &self.terms {
            out.add_term(*m, coeff * c);
        }
        out
    }

    /// Shifts every monomial by `(di, dj)`, the effect of a raising word
    /// `Ap^di Bp^dj` applied in front.
    pub fn shifted(&self, di: u32, dj: u32) -> VacuumVector {
        let mut out = VacuumVector::zero();
        for (m, c) in &self.terms {
            out.add_term(VacMonomial::new(m.i + di, m.j + dj), c.clone());
        }
        out
    }

    /// Largest total raising degree present, `None` when zero.
    pub fn max_degree(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.degree()).max()
    }
}

impl std::ops::Add for &VacuumVector {
    type Output = VacuumVector;

    fn add(self, rhs: &VacuumVector) -> VacuumVector {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(*m, c.clone());
        }
        out
    }
}

impl std::ops::Sub for &VacuumVector {
    type Output = VacuumVector;

    fn sub(self, rhs: &VacuumVector) -> VacuumVector {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(*m, -c);
        }
        out
    }
}

impl std::ops::Neg for &VacuumVector {
    type Output = VacuumVector;

    fn neg(self) -> VacuumVector {
        let mut out = VacuumVector::zero();
        for (m, c) in &self.terms {
            out.add_term(*m, -c);
        }
        out
    }
}

impl std::ops::Add for VacuumVector {
    type Output = VacuumVector;
    fn add(self, rhs: VacuumVector) -> VacuumVector {
        &self + &rhs
    }
}

impl std::ops::Sub for VacuumVector {
    type Output = VacuumVector;
    fn sub(self, rhs: VacuumVector) -> VacuumVector {
        &self - &rhs
    }
}

impl fmt::Display for VacuumVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (idx, (m, c)) in self.terms.iter().enumerate() {
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
            if mag.is_one() {
                write!(f, "{}", m)?;
            } else if mag.den().is_one() && mag.num().num_terms() == 1 {
                write!(f, "{}*{}", mag, m)?;
            } else {
                write!(f, "({})*{}", mag, m)?;
            }
        }
        Ok(())
    }
}

fn minus_two_a(scale: u32) -> ParamRatio {
    ParamRatio::from_poly(ParamPoly::term(
        Monomial::var(Var::a(), 1),
        BigInt::from(-2) * BigInt::from(scale),
    ))
}

impl Model {
    /// `Bm Bp^j |0>`, memoized per model.
    ///
    /// Follows the recursion `Bm Bp^j = Bp (Bm Bp^(j-1)) + [Bm, Bp] Bp^(j-1)`
    /// on the vacuum; the commutator element involves only `Ap` and `Am`
    /// letters, whose action on a pure `Bp` tower is closed form.
    pub fn lb(&self, j: u32) -> VacuumVector {
        if j == 0 {
            return VacuumVector::zero();
        }
        if let Some(v) = self.lb_cache.lock().unwrap().get(&j) {
            return v.clone();
        }
        let prev = self.lb(j - 1);
        let mut out = prev.shifted(0, 1);
        for (w, c) in self.bb_commutator().terms() {
            let target = VacuumVector::term(VacMonomial::new(0, j - 1), c.clone());
            out = &out + &self.apply_word(w, &target);
        }
        self.lb_cache.lock().unwrap().insert(j, out.clone());
        out
    }

    /// Action of a single ladder letter.
    pub fn apply_letter(&self, g: Generator, v: &VacuumVector) -> VacuumVector {
        let mut out = VacuumVector::zero();
        for (m, c) in v.terms() {
            match g {
                Generator::Ap => out.add_term(VacMonomial::new(m.i + 1, m.j), c.clone()),
                Generator::Bp => out.add_term(VacMonomial::new(m.i, m.j + 1), c.clone()),
                Generator::Am => {
                    // Am commutes past Ap and picks up -2a per Bp.
                    if m.j > 0 {
                        out.add_term(VacMonomial::new(m.i, m.j - 1), c * &minus_two_a(m.j));
                    }
                }
                Generator::Bm => {
                    // Bm picks up -2a per Ap, plus the tower tail.
                    if m.i > 0 {
                        out.add_term(VacMonomial::new(m.i - 1, m.j), c * &minus_two_a(m.i));
                    }
                    let tail = self.lb(m.j).shifted(m.i, 0).scale(c);
                    out = &out + &tail;
                }
            }
        }
        out
    }

    /// Action of a word, rightmost letter first.
    pub fn apply_word(&self, w: &Word, v: &VacuumVector) -> VacuumVector {
        let mut out = v.clone();
        for &g in w.letters().iter().rev() {
            if out.is_zero() {
                return out;
            }
            out = self.apply_letter(g, &out);
        }
        out
    }

    /// Action of a general algebra element.
    pub fn apply(&self, e: &AlgebraElement, v: &VacuumVector) -> VacuumVector {
        let mut out = VacuumVector::zero();
        for (w, c) in e.terms() {
            out = &out + &self.apply_word(w, v).scale(c);
        }
        out
    }

    /// The bilinear pairing, in units of the vacuum norm.
    ///
    /// The bra side transposes its raising word: `Ap^i Bp^j` becomes
    /// `(-1)^(i+j) Bm^j Am^i`, which then acts on the ket and the vacuum
    /// coefficient is read off. The form is symmetric and conjugates
    /// nothing, so diagonal values can vanish.
    pub fn pairing(&self, x: &VacuumVector, y: &VacuumVector) -> ParamRatio {
        let mut out = ParamRatio::zero();
        for (m, c) in x.terms() {
            let mut lowered = y.clone();
            for _ in 0..m.i {
                lowered = self.apply_letter(Generator::Am, &lowered);
            }
            for _ in 0..m.j {
                lowered = self.apply_letter(Generator::Bm, &lowered);
            }
            if m.degree() % 2 == 1 {
                out = &out - &(c * &lowered.vacuum_coeff());
            } else {
                out = &out + &(c * &lowered.vacuum_coeff());
            }
        }
        out
    }
}
