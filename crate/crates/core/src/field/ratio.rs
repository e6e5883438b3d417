//! Reduced ratios of integer polynomials: the exact coefficient field.
//!
//! Every [`ParamRatio`] is kept in canonical form (numerator and denominator
//! coprime, denominator with positive leading coefficient, zero stored as
//! `0/1`), so structural equality is mathematical equality.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num::{BigInt, BigRational, One, Zero};

use super::gcd::{divide_exact, poly_gcd};
use super::poly::{EvalError, ParamPoly, Var};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParamRatio {
    num: ParamPoly,
    den: ParamPoly,
}

impl ParamRatio {
    /// Build and reduce. Panics on a zero denominator, which always
    /// indicates a caller bug; user-facing input goes through the parser,
    /// which rejects vanishing denominators before this is reached.
    pub fn new(num: ParamPoly, den: ParamPoly) -> Self {
        assert!(!den.is_zero(), "zero denominator in ParamRatio");
        let mut r = ParamRatio { num, den };
        r.reduce();
        r
    }

    fn reduce(&mut self) {
        if self.num.is_zero() {
            self.den = ParamPoly::one();
            return;
        }
        let g = poly_gcd(&self.num, &self.den);
        if !g.is_one() {
            self.num = divide_exact(&self.num, &g).expect("gcd divides numerator");
            self.den = divide_exact(&self.den, &g).expect("gcd divides denominator");
        }
        if self.den.leading_coeff_negative() {
            self.num = self.num.neg();
            self.den = self.den.neg();
        }
    }

    /// Constructor for numerator and denominator that are already coprime:
    /// only the zero form and the denominator sign need normalizing. The
    /// arithmetic below maintains coprimality itself so that gcds only ever
    /// run on the small reduced parts, never on products of products.
    fn from_coprime(num: ParamPoly, den: ParamPoly) -> Self {
        if num.is_zero() {
            return ParamRatio::zero();
        }
        if den.leading_coeff_negative() {
            ParamRatio {
                num: num.neg(),
                den: den.neg(),
            }
        } else {
            ParamRatio { num, den }
        }
    }

    /// Sum (or difference) of two reduced ratios in factored form: split
    /// the denominators by their gcd, combine over the least common
    /// multiple, and clear the one possible leftover factor. Every gcd
    /// argument is bounded by the inputs, not by their product.
    fn add_signed(&self, other: &ParamRatio, negate: bool) -> ParamRatio {
        let rhs = if negate {
            other.num.neg()
        } else {
            other.num.clone()
        };
        let g = poly_gcd(&self.den, &other.den);
        if g.is_one() {
            let num = self.num.mul(&other.den).add(&rhs.mul(&self.den));
            return ParamRatio::from_coprime(num, self.den.mul(&other.den));
        }
        let left = divide_exact(&self.den, &g).expect("gcd divides the denominator");
        let right = divide_exact(&other.den, &g).expect("gcd divides the denominator");
        let t = self.num.mul(&right).add(&rhs.mul(&left));
        if t.is_zero() {
            return ParamRatio::zero();
        }
        let h = poly_gcd(&t, &g);
        let num = divide_exact(&t, &h).expect("gcd divides the combined numerator");
        let den = left
            .mul(&right)
            .mul(&divide_exact(&g, &h).expect("gcd divides the shared factor"));
        ParamRatio::from_coprime(num, den)
    }

    pub fn zero() -> Self {
        ParamRatio {
            num: ParamPoly::zero(),
            den: ParamPoly::one(),
        }
    }

    pub fn one() -> Self {
        ParamRatio {
            num: ParamPoly::one(),
            den: ParamPoly::one(),
        }
    }

    pub fn int(c: i64) -> Self {
        ParamRatio {
            num: ParamPoly::int(c),
            den: ParamPoly::one(),
        }
    }

    pub fn ratio_int(p: i64, q: i64) -> Self {
        ParamRatio::new(ParamPoly::int(p), ParamPoly::int(q))
    }

    pub fn from_poly(p: ParamPoly) -> Self {
        ParamRatio {
            num: p,
            den: ParamPoly::one(),
        }
    }

    pub fn from_bigint(c: BigInt) -> Self {
        ParamRatio {
            num: ParamPoly::constant(c),
            den: ParamPoly::one(),
        }
    }

    pub fn from_rational(r: &BigRational) -> Self {
        ParamRatio::new(
            ParamPoly::constant(r.numer().clone()),
            ParamPoly::constant(r.denom().clone()),
        )
    }

    pub fn var(name: &str) -> Self {
        ParamRatio::from_poly(ParamPoly::var(Var::new(name)))
    }

    pub fn num(&self) -> &ParamPoly {
        &self.num
    }

    pub fn den(&self) -> &ParamPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    /// The polynomial itself when the denominator is one.
    pub fn into_poly(self) -> Option<ParamPoly> {
        self.den.is_one().then_some(self.num)
    }

    pub fn checked_div(&self, other: &ParamRatio) -> Option<ParamRatio> {
        if other.is_zero() {
            return None;
        }
        Some(self * &other.inverse())
    }

    pub fn inverse(&self) -> ParamRatio {
        assert!(!self.is_zero(), "inverse of zero ParamRatio");
        ParamRatio::from_coprime(self.den.clone(), self.num.clone())
    }

    pub fn pow(&self, exp: i64) -> ParamRatio {
        let base = if exp < 0 { self.inverse() } else { self.clone() };
        let mut out = ParamRatio::one();
        for _ in 0..exp.unsigned_abs() {
            out = &out * &base;
        }
        out
    }

    /// True when the printed form would start with a minus sign.
    pub fn leading_negative(&self) -> bool {
        self.num.leading_coeff_negative()
    }

    pub fn abs(&self) -> ParamRatio {
        if self.leading_negative() {
            -self
        } else {
            self.clone()
        }
    }

    pub fn eval_numeric(
        &self,
        assignment: &BTreeMap<Var, BigRational>,
    ) -> Result<BigRational, EvalError> {
        let d = self.den.eval(assignment)?;
        if d.is_zero() {
            return Err(EvalError::Pole);
        }
        Ok(self.num.eval(assignment)? / d)
    }

    /// Substitute one variable by a field element.
    pub fn substitute(&self, v: &Var, value: &ParamRatio) -> Result<ParamRatio, EvalError> {
        let num = substitute_poly(&self.num, v, value);
        let den = substitute_poly(&self.den, v, value);
        num.checked_div(&den).ok_or(EvalError::Pole)
    }
}

fn substitute_poly(p: &ParamPoly, v: &Var, value: &ParamRatio) -> ParamRatio {
    let mut out = ParamRatio::zero();
    for (e, coeff) in p.as_univariate(v) {
        out = &out + &(&ParamRatio::from_poly(coeff) * &value.pow(e as i64));
    }
    out
}

impl Add for &ParamRatio {
    type Output = ParamRatio;
    fn add(self, other: &ParamRatio) -> ParamRatio {
        self.add_signed(other, false)
    }
}

impl Sub for &ParamRatio {
    type Output = ParamRatio;
    fn sub(self, other: &ParamRatio) -> ParamRatio {
        self.add_signed(other, true)
    }
}

impl Mul for &ParamRatio {
    type Output = ParamRatio;
    fn mul(self, other: &ParamRatio) -> ParamRatio {
        if self.num.is_zero() || other.num.is_zero() {
            return ParamRatio::zero();
        }
        // Cross-cancel before multiplying; the four remaining parts are
        // pairwise coprime, so the product needs no further reduction.
        let g1 = poly_gcd(&self.num, &other.den);
        let g2 = poly_gcd(&other.num, &self.den);
        let num = divide_exact(&self.num, &g1)
            .expect("gcd divides")
            .mul(&divide_exact(&other.num, &g2).expect("gcd divides"));
        let den = divide_exact(&self.den, &g2)
            .expect("gcd divides")
            .mul(&divide_exact(&other.den, &g1).expect("gcd divides"));
        ParamRatio::from_coprime(num, den)
    }
}

impl Div for &ParamRatio {
    type Output = ParamRatio;
    fn div(self, other: &ParamRatio) -> ParamRatio {
        self.checked_div(other)
            .expect("division by zero ParamRatio")
    }
}

impl Neg for &ParamRatio {
    type Output = ParamRatio;
    fn neg(self) -> ParamRatio {
        ParamRatio {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }
}

macro_rules! forward_owned {
    ($trait:ident, $method:ident) => {
        impl $trait for ParamRatio {
            type Output = ParamRatio;
            fn $method(self, other: ParamRatio) -> ParamRatio {
                $trait::$method(&self, &other)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

impl Neg for ParamRatio {
    type Output = ParamRatio;
    fn neg(self) -> ParamRatio {
        -&self
    }
}

/// A denominator prints bare only when it is a single power of a single
/// variable or a plain integer, e.g. `b/a`, `-2*epsilon/a^2`, but
/// `3*omega/(4*a^3)` and `(3*omega - 4*b^2)/(4*a*b)`.
fn needs_parens_as_denominator(p: &ParamPoly) -> bool {
    if p.num_terms() != 1 {
        return true;
    }
    let (m, c) = p.leading().unwrap();
    if m.is_one() {
        return false;
    }
    !c.is_one() || m.vars().count() > 1
}

impl fmt::Display for ParamRatio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            return write!(f, "{}", self.num);
        }
        if self.num.num_terms() > 1 {
            write!(f, "({})", self.num)?;
        } else {
            write!(f, "{}", self.num)?;
        }
        if needs_parens_as_denominator(&self.den) {
            write!(f, "/({})", self.den)
        } else {
            write!(f, "/{}", self.den)
        }
    }
}

impl std::str::FromStr for ParamRatio {
    type Err = super::parse::ParseError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        super::parse::parse_ratio(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::parse_ratio;

    fn r(s: &str) -> ParamRatio {
        parse_ratio(s).unwrap()
    }

    #[test]
    fn reduction_to_canonical_form() {
        let x = ParamRatio::new(
            r("3*omega - 4*b^2").into_poly().unwrap().mul(&r("2*a*b").into_poly().unwrap()),
            r("8*a^2*b").into_poly().unwrap(),
        );
        assert_eq!(x, r("(3*omega - 4*b^2)/(4*a)"));
    }

    #[test]
    fn denominator_sign_is_normalized() {
        let x = ParamRatio::new(ParamPoly::var(Var::b()), ParamPoly::int(-2));
        assert_eq!(x.to_string(), "-b/2");
    }

    #[test]
    fn sum_with_distinct_denominators() {
        // b/a + (-2*epsilon/a^2) = (a*b - 2*epsilon)/a^2
        let x = &r("b/a") + &r("-2*epsilon/a^2");
        assert_eq!(x, r("(a*b - 2*epsilon)/a^2"));
        assert_eq!(x.to_string(), "(-2*epsilon + a*b)/a^2");
    }

    #[test]
    fn self_subtraction_is_canonical_zero() {
        let x = r("(3*omega - 4*b^2)/(4*a*b)");
        let z = &x - &x;
        assert!(z.is_zero());
        assert_eq!(z, ParamRatio::zero());
        assert_eq!(z.den(), &ParamPoly::one());
    }

    #[test]
    fn eval_at_unit_point() {
        let x = r("(3*omega - 4*b^2)/(4*a*b)");
        let mut assignment = BTreeMap::new();
        for v in ["a", "b", "omega"] {
            assignment.insert(Var::new(v), BigRational::one());
        }
        let got = x.eval_numeric(&assignment).unwrap();
        assert_eq!(got, BigRational::new(BigInt::from(-1), BigInt::from(4)));
    }

    #[test]
    fn eval_reports_poles_and_unbound() {
        let x = r("b/a");
        let mut assignment = BTreeMap::new();
        assignment.insert(Var::a(), BigRational::zero());
        assignment.insert(Var::b(), BigRational::one());
        assert_eq!(x.eval_numeric(&assignment), Err(EvalError::Pole));
        assignment.remove(&Var::b());
        assignment.insert(Var::a(), BigRational::one());
        assert!(matches!(
            x.eval_numeric(&assignment),
            Err(EvalError::Unbound(_))
        ));
    }

    #[test]
    fn substitution_specializes() {
        let x = r("(3*omega - 4*b^2)/(4*a*b)");
        let y = x.substitute(&Var::omega(), &ParamRatio::zero()).unwrap();
        assert_eq!(y, r("-b/a"));
    }

    #[test]
    fn rendering_matches_expected_forms() {
        assert_eq!(r("(3*omega - 4*b^2)/(4*a*b)").to_string(), "(3*omega - 4*b^2)/(4*a*b)");
        assert_eq!(r("3*omega/(4*a^3)").to_string(), "3*omega/(4*a^3)");
        assert_eq!(r("-2*epsilon/a^2").to_string(), "-2*epsilon/a^2");
        assert_eq!(r("b/a").to_string(), "b/a");
    }

    #[test]
    fn display_parse_round_trip() {
        for s in [
            "(3*omega - 4*b^2)/(4*a*b)",
            "-9*omega^2/(256*a^6*b)",
            "(3*omega*(3*omega + 4*b^2) + 32*b*epsilon^2)/(128*a^4*b^2)",
            "0",
            "-1/2",
        ] {
            let x = r(s);
            assert_eq!(parse_ratio(&x.to_string()).unwrap(), x);
        }
    }
}
