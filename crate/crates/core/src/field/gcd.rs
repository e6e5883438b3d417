//! Polynomial gcd and exact division over the integers.
//!
//! The gcd uses a primitive polynomial remainder sequence, recursing on the
//! number of variables. Before paying for a multivariate remainder sequence
//! the coprime case is filtered out by an evaluation homomorphism: all but
//! the main variable are sent to small integers and a univariate integer
//! gcd decides whether a common factor can exist at all. Random inputs are
//! almost always coprime, and the remainder sequence on coprime inputs is
//! exactly where the coefficient swell lives.

use std::collections::BTreeMap;

use num::{BigInt, Integer, One, Zero};

use super::poly::{ParamPoly, Var};

/// Exact quotient `p / q`, or `None` if `q` does not divide `p`.
///
/// Repeated leading-term division under the graded order: when the division
/// is exact this terminates with remainder zero, otherwise some leading term
/// fails to divide and we bail out.
pub fn divide_exact(p: &ParamPoly, q: &ParamPoly) -> Option<ParamPoly> {
    if q.is_zero() {
        return None;
    }
    if p.is_zero() {
        return Some(ParamPoly::zero());
    }
    let (qm, qc) = q.leading().unwrap();
    let qm = qm.clone();
    let qc = qc.clone();
    let mut rem = p.clone();
    let mut quot = ParamPoly::zero();
    while !rem.is_zero() {
        let (rm, rc) = rem.leading().unwrap();
        let m = rm.try_div(&qm)?;
        let (c, r) = rc.div_rem(&qc);
        if !r.is_zero() {
            return None;
        }
        let t = ParamPoly::term(m, c);
        rem = rem.sub(&t.mul(q));
        quot = quot.add(&t);
    }
    Some(quot)
}

/// Gcd of two polynomials, normalized to a positive leading coefficient.
pub fn poly_gcd(p: &ParamPoly, q: &ParamPoly) -> ParamPoly {
    let g = gcd_inner(p, q);
    if g.leading_coeff_negative() {
        g.neg()
    } else {
        g
    }
}

fn gcd_inner(p: &ParamPoly, q: &ParamPoly) -> ParamPoly {
    if p.is_zero() {
        return q.clone();
    }
    if q.is_zero() {
        return p.clone();
    }
    if let Some(c) = p.as_constant() {
        return ParamPoly::constant(c.gcd(&q.content()));
    }
    if let Some(c) = q.as_constant() {
        return ParamPoly::constant(c.gcd(&p.content()));
    }
    // Single-term fast path: the dominant case in practice, since chain
    // coefficients carry monomial denominators.
    if p.num_terms() == 1 && q.num_terms() == 1 {
        let c = p.content().gcd(&q.content());
        let m = p.monomial_content().gcd(&q.monomial_content());
        return ParamPoly::term(m, c);
    }
    let v = main_var(p, q);
    let pu = p.as_univariate(&v);
    let qu = q.as_univariate(&v);
    let cont_p = coeff_gcd(&pu);
    let cont_q = coeff_gcd(&qu);
    let cont = gcd_inner(&cont_p, &cont_q);
    let pp_p = divide_coeffs(&pu, &cont_p);
    let pp_q = divide_coeffs(&qu, &cont_q);
    let pp = if primitive_parts_are_coprime(&pp_p, &pp_q) {
        let mut unit = BTreeMap::new();
        unit.insert(0, ParamPoly::one());
        unit
    } else {
        prs_gcd(pp_p, pp_q)
    };
    cont.mul(&ParamPoly::from_univariate(&v, &pp))
}

/// Certifies that two primitive univariate polynomials (with polynomial
/// coefficients) have no common factor involving the main variable.
///
/// Evaluating the remaining variables at an integer point is a ring map, so
/// any common factor survives into the images; if the leading coefficient of
/// one input stays nonzero at the point, the common factor keeps its degree
/// there too. A degree-zero integer gcd at such a point therefore proves the
/// inputs coprime. A positive degree proves nothing (the point may be
/// unlucky), so the caller falls back to the real remainder sequence.
fn primitive_parts_are_coprime(
    f: &BTreeMap<u32, ParamPoly>,
    g: &BTreeMap<u32, ParamPoly>,
) -> bool {
    let mut others: Vec<Var> = Vec::new();
    for c in f.values().chain(g.values()) {
        others.extend(c.vars());
    }
    others.sort();
    others.dedup();
    const POINTS: [i64; 8] = [3, 5, 7, 11, 13, 17, 19, 23];
    for attempt in 0..3i64 {
        let at: BTreeMap<Var, BigInt> = others
            .iter()
            .enumerate()
            .map(|(k, v)| (v.clone(), BigInt::from(POINTS[k % POINTS.len()] + 10 * attempt)))
            .collect();
        let lead_f = f.values().next_back().expect("nonzero polynomial");
        let lead_g = g.values().next_back().expect("nonzero polynomial");
        if eval_at_ints(lead_f, &at).is_zero() && eval_at_ints(lead_g, &at).is_zero() {
            continue;
        }
        if int_gcd_degree(map_at_ints(f, &at), map_at_ints(g, &at)) == 0 {
            return true;
        }
    }
    false
}

fn eval_at_ints(p: &ParamPoly, at: &BTreeMap<Var, BigInt>) -> BigInt {
    let mut total = BigInt::zero();
    for (m, c) in p.terms() {
        let mut value = c.clone();
        for (v, e) in m.iter() {
            let point = at.get(v).expect("every variable is assigned");
            for _ in 0..e {
                value *= point;
            }
        }
        total += value;
    }
    total
}

fn map_at_ints(u: &BTreeMap<u32, ParamPoly>, at: &BTreeMap<Var, BigInt>) -> BTreeMap<u32, BigInt> {
    u.iter()
        .filter_map(|(e, c)| {
            let value = eval_at_ints(c, at);
            if value.is_zero() {
                None
            } else {
                Some((*e, value))
            }
        })
        .collect()
}

/// Degree of the gcd of two univariate integer polynomials, by a primitive
/// remainder sequence with the integer content stripped at every step.
fn int_gcd_degree(a: BTreeMap<u32, BigInt>, b: BTreeMap<u32, BigInt>) -> u32 {
    let int_deg = |u: &BTreeMap<u32, BigInt>| u.keys().next_back().copied().unwrap_or(0);
    let strip = |mut u: BTreeMap<u32, BigInt>| {
        let mut c = BigInt::zero();
        for v in u.values() {
            c = c.gcd(v);
            if c.is_one() {
                return u;
            }
        }
        if !c.is_zero() && !c.is_one() {
            for v in u.values_mut() {
                *v /= &c;
            }
        }
        u
    };
    if a.is_empty() {
        return int_deg(&b);
    }
    if b.is_empty() {
        return int_deg(&a);
    }
    let (mut r0, mut r1) = if int_deg(&a) >= int_deg(&b) { (a, b) } else { (b, a) };
    r0 = strip(r0);
    r1 = strip(r1);
    loop {
        let d0 = int_deg(&r0);
        let d1 = int_deg(&r1);
        let lead = r1[&d1].clone();
        let mut r2 = BTreeMap::new();
        for (e, c) in &r0 {
            let scaled = c * &lead;
            if !scaled.is_zero() {
                r2.insert(*e, scaled);
            }
        }
        let top = r0[&d0].clone();
        for (e, c) in &r1 {
            let shifted = e + d0 - d1;
            let sub = c * &top;
            match r2.entry(shifted) {
                std::collections::btree_map::Entry::Vacant(slot) => {
                    slot.insert(-sub);
                }
                std::collections::btree_map::Entry::Occupied(mut slot) => {
                    let s = slot.get() - sub;
                    if s.is_zero() {
                        slot.remove();
                    } else {
                        *slot.get_mut() = s;
                    }
                }
            }
        }
        if r2.is_empty() {
            return int_deg(&r1);
        }
        let r2 = strip(r2);
        if int_deg(&r2) >= d0 {
            // Degree did not drop (cancellation failed); should not happen,
            // but never loop forever on it.
            return 0;
        }
        if int_deg(&r2) == 0 {
            return 0;
        }
        if int_deg(&r2) < d1 {
            r0 = r1;
            r1 = r2;
        } else {
            r0 = r2;
        }
    }
}

/// The variable present in either polynomial that is smallest in canonical
/// order, used as the main variable for the recursion.
fn main_var(p: &ParamPoly, q: &ParamPoly) -> Var {
    let mut vars = p.vars();
    vars.extend(q.vars());
    vars.sort();
    vars[0].clone()
}

fn coeff_gcd(u: &BTreeMap<u32, ParamPoly>) -> ParamPoly {
    let mut g = ParamPoly::zero();
    for c in u.values() {
        g = gcd_inner(&g, c);
        if g.is_one() {
            break;
        }
    }
    g
}

fn divide_coeffs(u: &BTreeMap<u32, ParamPoly>, d: &ParamPoly) -> BTreeMap<u32, ParamPoly> {
    u.iter()
        .map(|(e, c)| {
            let q = divide_exact(c, d).expect("content must divide every coefficient");
            (*e, q)
        })
        .collect()
}

fn deg(u: &BTreeMap<u32, ParamPoly>) -> u32 {
    u.keys().next_back().copied().unwrap_or(0)
}

fn lead(u: &BTreeMap<u32, ParamPoly>) -> ParamPoly {
    u.values().next_back().cloned().unwrap_or_else(ParamPoly::zero)
}

fn primitive(u: BTreeMap<u32, ParamPoly>) -> BTreeMap<u32, ParamPoly> {
    let c = coeff_gcd(&u);
    if c.is_one() || c.is_zero() {
        return u;
    }
    divide_coeffs(&u, &c)
}

/// Primitive PRS on univariate polynomials with polynomial coefficients.
fn prs_gcd(
    f: BTreeMap<u32, ParamPoly>,
    g: BTreeMap<u32, ParamPoly>,
) -> BTreeMap<u32, ParamPoly> {
    let (mut r0, mut r1) = if deg(&f) >= deg(&g) { (f, g) } else { (g, f) };
    r0 = primitive(r0);
    r1 = primitive(r1);
    loop {
        let r2 = pseudo_rem(&r0, &r1);
        if r2.is_empty() {
            return r1;
        }
        if deg(&r2) == 0 && r2.len() == 1 {
            // Nonzero remainder free of the main variable: coprime parts.
            let mut one = BTreeMap::new();
            one.insert(0, ParamPoly::one());
            return one;
        }
        r0 = r1;
        r1 = primitive(r2);
    }
}

/// Pseudo-remainder of `f` by `g` with respect to the main variable.
fn pseudo_rem(
    f: &BTreeMap<u32, ParamPoly>,
    g: &BTreeMap<u32, ParamPoly>,
) -> BTreeMap<u32, ParamPoly> {
    let dg = deg(g);
    let lg = lead(g);
    let mut r = f.clone();
    while !r.is_empty() && deg(&r) >= dg {
        let dr = deg(&r);
        let lr = lead(&r);
        // r <- lg*r - lr*x^(dr-dg)*g
        let mut next: BTreeMap<u32, ParamPoly> = BTreeMap::new();
        for (e, c) in &r {
            insert_term(&mut next, *e, c.mul(&lg));
        }
        for (e, c) in g {
            insert_term(&mut next, e + dr - dg, c.mul(&lr).neg());
        }
        r = next;
    }
    r
}

fn insert_term(u: &mut BTreeMap<u32, ParamPoly>, e: u32, c: ParamPoly) {
    if c.is_zero() {
        return;
    }
    match u.entry(e) {
        std::collections::btree_map::Entry::Vacant(slot) => {
            slot.insert(c);
        }
        std::collections::btree_map::Entry::Occupied(mut slot) => {
            let s = slot.get().add(&c);
            if s.is_zero() {
                slot.remove();
            } else {
                *slot.get_mut() = s;
            }
        }
    }
}

/// Positive least common multiple.
pub fn poly_lcm(p: &ParamPoly, q: &ParamPoly) -> ParamPoly {
    if p.is_zero() || q.is_zero() {
        return ParamPoly::zero();
    }
    let g = poly_gcd(p, q);
    let l = p.mul(&divide_exact(q, &g).expect("gcd divides its arguments"));
    if l.leading_coeff_negative() {
        l.neg()
    } else {
        l
    }
}
