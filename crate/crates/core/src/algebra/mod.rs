//! Free algebra over the four ladder generators.
//!
//! Operators are represented as finite linear combinations of words in the
//! generators `Ap`, `Bp`, `Bm`, `Am`, with coefficients in the parameter
//! field. Multiplication concatenates words; no commutation rules are
//! applied here. Rewriting into normal-ordered form lives in
//! [`normal_order`], and the commutation rules themselves are owned by the
//! [`model::Model`] since one of them depends on the anharmonic profile.
//!
//! * [`Generator`]: a single ladder letter, ordered by normal-order rank.
//! * [`Word`]: a product of letters.
//! * [`AlgebraElement`]: a linear combination of words.

pub mod model;
pub mod normal_order;

use std::collections::BTreeMap;
use std::fmt;

use crate::field::ParamRatio;

/// One ladder letter.
///
/// The derived order `Ap < Bp < Bm < Am` is the normal-order rank: raising
/// letters sort to the left, lowering letters to the right. A word is in
/// normal form exactly when its letters are nondecreasing in this order.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Generator {
    /// Raising letter of the oscillator pair.
    Ap,
    /// Raising letter of the anharmonic pair.
    Bp,
    /// Lowering letter of the anharmonic pair.
    Bm,
    /// Lowering letter of the oscillator pair.
    Am,
}

impl Generator {
    pub const ALL: [Generator; 4] = [Generator::Ap, Generator::Bp, Generator::Bm, Generator::Am];

    pub fn label(self) -> &'static str {
        match self {
            Generator::Ap => "Ap",
            Generator::Bp => "Bp",
            Generator::Bm => "Bm",
            Generator::Am => "Am",
        }
    }

    /// Partner letter under the formal transpose of the bilinear pairing.
    ///
    /// Each letter transposes to minus its partner; the sign is accounted
    /// for at the word level, where it accumulates to `(-1)^len`.
    pub fn transpose(self) -> Generator {
        match self {
            Generator::Ap => Generator::Am,
            Generator::Am => Generator::Ap,
            Generator::Bp => Generator::Bm,
            Generator::Bm => Generator::Bp,
        }
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// A product of ladder letters, leftmost letter acting last.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default)]
pub struct Word {
    letters: Vec<Generator>,
}

impl Word {
    /// The empty product.
    pub fn one() -> Self {
        Word { letters: Vec::new() }
    }

    pub fn letter(g: Generator) -> Self {
        Word { letters: vec![g] }
    }

    pub fn from_letters(letters: &[Generator]) -> Self {
        Word { letters: letters.to_vec() }
    }

    /// `Ap^i Bp^j`, the word whose action on the vacuum spans the ansatz.
    pub fn raising(i: u32, j: u32) -> Self {
        let mut letters = Vec::with_capacity((i + j) as usize);
        letters.extend(std::iter::repeat(Generator::Ap).take(i as usize));
        letters.extend(std::iter::repeat(Generator::Bp).take(j as usize));
        Word { letters }
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn letters(&self) -> &[Generator] {
        &self.letters
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut letters = Vec::with_capacity(self.letters.len() + other.letters.len());
        letters.extend_from_slice(&self.letters);
        letters.extend_from_slice(&other.letters);
        Word { letters }
    }

    /// True when the letters are nondecreasing in normal-order rank.
    pub fn is_normal_ordered(&self) -> bool {
        self.letters.windows(2).all(|w| w[0] <= w[1])
    }

    /// Indices `k` with `letters[k] > letters[k+1]`, the sites where a
    /// rewrite rule applies.
    pub fn inverted_sites(&self) -> Vec<usize> {
        (0..self.letters.len().saturating_sub(1))
            .filter(|&k| self.letters[k] > self.letters[k + 1])
            .collect()
    }

    /// Termination measure for the rewriting system: the number of `Bm`
    /// letters standing left of a `Bp`, then the total number of inverted
    /// letter pairs. Every rewrite strictly decreases this lexicographically.
    pub fn measure(&self) -> (usize, usize) {
        let mut bm_before_bp = 0;
        let mut inversions = 0;
        for i in 0..self.letters.len() {
            for j in (i + 1)..self.letters.len() {
                if self.letters[i] == Generator::Bm && self.letters[j] == Generator::Bp {
                    bm_before_bp += 1;
                }
                if self.letters[i] > self.letters[j] {
                    inversions += 1;
                }
            }
        }
        (bm_before_bp, inversions)
    }

    /// The word with letters `k` and `k+1` exchanged.
    pub fn swapped(&self, k: usize) -> Word {
        let mut letters = self.letters.clone();
        letters.swap(k, k + 1);
        Word { letters }
    }

    /// The word with letters `k` and `k+1` replaced by `replacement`.
    pub fn spliced(&self, k: usize, replacement: &Word) -> Word {
        let mut letters = Vec::with_capacity(self.letters.len() - 2 + replacement.len());
        letters.extend_from_slice(&self.letters[..k]);
        letters.extend_from_slice(&replacement.letters);
        letters.extend_from_slice(&self.letters[k + 2..]);
        Word { letters }
    }

    /// Reversed word of partner letters; the accompanying sign is
    /// `(-1)^len` and is applied by [`AlgebraElement::transpose`].
    pub fn transpose(&self) -> Word {
        Word {
            letters: self.letters.iter().rev().map(|g| g.transpose()).collect(),
        }
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return f.write_str("1");
        }
        let mut first = true;
        let mut run = 0usize;
        let mut current: Option<Generator> = None;
        let flush = |f: &mut fmt::Formatter<'_>, g: Generator, run: usize, first: &mut bool| {
            if !*first {
                f.write_str("*")?;
            }
            *first = false;
            if run == 1 {
                write!(f, "{}", g)
            } else {
                write!(f, "{}^{}", g, run)
            }
        };
        for &g in &self.letters {
            match current {
                Some(c) if c == g => run += 1,
                Some(c) => {
                    flush(f, c, run, &mut first)?;
                    current = Some(g);
                    run = 1;
                }
                None => {
                    current = Some(g);
                    run = 1;
                }
            }
        }
        if let Some(c) = current {
            flush(f, c, run, &mut first)?;
        }
        Ok(())
    }
}

/// A finite linear combination of words with parameter-field coefficients.
///
/// Zero coefficients are never stored, so equality of elements is equality
/// of the underlying maps.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct AlgebraElement {
    terms: BTreeMap<Word, ParamRatio>,
}

impl AlgebraElement {
    pub fn zero() -> Self {
        AlgebraElement { terms: BTreeMap::new() }
    }

    /// The multiplicative identity: the empty word with coefficient one.
    pub fn one() -> Self {
        AlgebraElement::scalar(ParamRatio::one())
    }

    pub fn scalar(c: ParamRatio) -> Self {
        let mut e = AlgebraElement::zero();
        e.add_term(Word::one(), c);
        e
    }

    pub fn generator(g: Generator) -> Self {
        AlgebraElement::from_word(Word::letter(g))
    }

    pub fn from_word(w: Word) -> Self {
        let mut e = AlgebraElement::zero();
        e.add_term(w, ParamRatio::one());
        e
    }

    pub fn term(w: Word, c: ParamRatio) -> Self {
        let mut e = AlgebraElement::zero();
        e.add_term(w, c);
        e
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &ParamRatio)> {
        self.terms.iter()
    }

    /// Coefficient of `w`, zero when absent.
    pub fn coeff(&self, w: &Word) -> ParamRatio {
        self.terms.get(w).cloned().unwrap_or_else(ParamRatio::zero)
    }

    /// Adds `c * w`, coalescing with an existing term and dropping the
    /// entry if the sum cancels.
    pub fn add_term(&mut self, w: Word, c: ParamRatio) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(w) {
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

    pub fn scale(&self, c: &ParamRatio) -> AlgebraElement {
        if c.is_zero() {
            return AlgebraElement::zero();
        }
        let mut out = AlgebraElement::zero();
        for (w, coeff) in &self.terms {
            out.add_term(w.clone(), coeff * c);
        }
        out
    }

    pub fn pow(&self, exp: u32) -> AlgebraElement {
        let mut out = AlgebraElement::one();
        for _ in 0..exp {
            out = &out * self;
        }
        out
    }

    /// Formal transpose: reverses every word, swaps each letter for its
    /// partner, and multiplies the coefficient by `(-1)^len`. This is an
    /// anti-automorphism and an involution.
    pub fn transpose(&self) -> AlgebraElement {
        let mut out = AlgebraElement::zero();
        for (w, c) in &self.terms {
            let sign = if w.len() % 2 == 1 { -c.clone() } else { c.clone() };
            out.add_term(w.transpose(), sign);
        }
        out
    }

    /// `self * other - other * self`, left unordered.
    pub fn commutator(&self, other: &AlgebraElement) -> AlgebraElement {
        &(self * other) - &(other * self)
    }
}

impl std::ops::Add for &AlgebraElement {
    type Output = AlgebraElement;

    fn add(self, rhs: &AlgebraElement) -> AlgebraElement {
        let mut out = self.clone();
        for (w, c) in &rhs.terms {
            out.add_term(w.clone(), c.clone());
        }
        out
    }
}

impl std::ops::Sub for &AlgebraElement {
    type Output = AlgebraElement;

    fn sub(self, rhs: &AlgebraElement) -> AlgebraElement {
        let mut out = self.clone();
        for (w, c) in &rhs.terms {
            out.add_term(w.clone(), -c);
        }
        out
    }
}

impl std::ops::Mul for &AlgebraElement {
    type Output = AlgebraElement;

    fn mul(self, rhs: &AlgebraElement) -> AlgebraElement {
        let mut out = AlgebraElement::zero();
        for (w1, c1) in &self.terms {
            for (w2, c2) in &rhs.terms {
                out.add_term(w1.concat(w2), c1 * c2);
            }
        }
        out
    }
}

impl std::ops::Neg for &AlgebraElement {
    type Output = AlgebraElement;

    fn neg(self) -> AlgebraElement {
        let mut out = AlgebraElement::zero();
        for (w, c) in &self.terms {
            out.add_term(w.clone(), -c);
        }
        out
    }
}

macro_rules! forward_owned {
    ($trait:ident, $method:ident) => {
        impl std::ops::$trait<AlgebraElement> for AlgebraElement {
            type Output = AlgebraElement;
            fn $method(self, rhs: AlgebraElement) -> AlgebraElement {
                (&self).$method(&rhs)
            }
        }
        impl std::ops::$trait<&AlgebraElement> for AlgebraElement {
            type Output = AlgebraElement;
            fn $method(self, rhs: &AlgebraElement) -> AlgebraElement {
                (&self).$method(rhs)
            }
        }
        impl std::ops::$trait<AlgebraElement> for &AlgebraElement {
            type Output = AlgebraElement;
            fn $method(self, rhs: AlgebraElement) -> AlgebraElement {
                self.$method(&rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl std::ops::Neg for AlgebraElement {
    type Output = AlgebraElement;

    fn neg(self) -> AlgebraElement {
        -&self
    }
}

impl fmt::Display for AlgebraElement {
    /// Longest words first, ties by word order; the scalar term comes last.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let mut entries: Vec<(&Word, &ParamRatio)> = self.terms.iter().collect();
        entries.sort_by(|x, y| y.0.len().cmp(&x.0.len()).then_with(|| x.0.cmp(y.0)));
        for (idx, (w, c)) in entries.iter().enumerate() {
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
            if w.is_empty() {
                write!(f, "{}", mag)?;
            } else if mag.is_one() {
                write!(f, "{}", w)?;
            } else if mag.den().is_one() && mag.num().num_terms() == 1 {
                write!(f, "{}*{}", mag, w)?;
            } else {
                write!(f, "({})*{}", mag, w)?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(s: &str) -> ParamRatio {
        crate::field::parse_ratio(s).unwrap()
    }

    #[test]
    fn letter_rank_matches_normal_order() {
        assert!(Generator::Ap < Generator::Bp);
        assert!(Generator::Bp < Generator::Bm);
        assert!(Generator::Bm < Generator::Am);
        assert!(Word::raising(2, 3).is_normal_ordered());
        assert!(!Word::from_letters(&[Generator::Bm, Generator::Bp]).is_normal_ordered());
    }

    #[test]
    fn measure_counts_inversions() {
        use Generator::*;
        let w = Word::from_letters(&[Bm, Am, Ap, Bp]);
        // Bm-before-Bp pairs: (0,3). Inversions: (Bm,Ap), (Bm,Bp),
        // (Am,Ap), (Am,Bp).
        assert_eq!(w.measure(), (1, 4));
        assert_eq!(w.inverted_sites(), vec![1]);
        assert_eq!(Word::raising(1, 2).measure(), (0, 0));
    }

    #[test]
    fn multiplication_concatenates() {
        use Generator::*;
        let x = AlgebraElement::term(Word::letter(Bm), r("2*a"));
        let y = AlgebraElement::term(Word::letter(Ap), r("b"));
        let p = &x * &y;
        assert_eq!(p.num_terms(), 1);
        assert_eq!(p.coeff(&Word::from_letters(&[Bm, Ap])), r("2*a*b"));
    }

    #[test]
    fn transpose_is_an_involutive_antihomomorphism() {
        use Generator::*;
        let x = AlgebraElement::term(Word::from_letters(&[Ap, Bm]), r("b"))
            + AlgebraElement::term(Word::letter(Am), r("1/2"));
        let y = AlgebraElement::term(Word::from_letters(&[Bp, Bp, Am]), r("omega"))
            + AlgebraElement::scalar(r("3"));
        assert_eq!(x.transpose().transpose(), x);
        assert_eq!((&x * &y).transpose(), &y.transpose() * &x.transpose());
        // Single letters pick up one sign each.
        assert_eq!(
            AlgebraElement::generator(Ap).transpose(),
            AlgebraElement::term(Word::letter(Am), r("-1"))
        );
    }

    #[test]
    fn display_orders_long_words_first() {
        use Generator::*;
        let h = AlgebraElement::term(Word::from_letters(&[Ap, Bm]), r("-2"))
            + AlgebraElement::term(Word::from_letters(&[Bp, Am]), r("-2"))
            + AlgebraElement::scalar(r("4*a"));
        assert_eq!(h.to_string(), "-2*Ap*Bm - 2*Bp*Am + 4*a");
        let t = AlgebraElement::term(Word::from_letters(&[Ap, Ap, Ap]), r("3*omega/(4*a^3)"));
        assert_eq!(t.to_string(), "(3*omega/(4*a^3))*Ap^3");
        assert_eq!(AlgebraElement::zero().to_string(), "0");
        assert_eq!(Word::raising(3, 2).to_string(), "Ap^3*Bp^2");
    }

    #[test]
    fn cancellation_removes_terms() {
        let x = AlgebraElement::term(Word::letter(Generator::Ap), r("b"));
        let y = AlgebraElement::term(Word::letter(Generator::Ap), r("-b"));
        assert!((&x + &y).is_zero());
        assert_eq!((&x - &x).num_terms(), 0);
    }
}
