//! Rewriting of operator expressions into normal-ordered form.
//!
//! A word is rewritten by repeatedly replacing an adjacent inverted pair
//! `x y` (with `x > y` in normal-order rank) by `y x + [x, y]`. The
//! commutator injects the model's `[Bm, Bp]` element when the pair is a
//! `Bm` standing left of a `Bp`, and a scalar or nothing otherwise. Every
//! step strictly decreases [`Word::measure`], so the rewriting terminates;
//! the result is independent of which site is rewritten first, which
//! [`normal_order_with`] exposes for testing.
//!
//! * [`normal_order`]: deterministic leftmost-site rewriting.
//! * [`normal_order_with`]: caller-chosen rewrite sites.

use std::collections::BTreeMap;

use crate::field::ParamRatio;

use super::model::Model;
use super::{AlgebraElement, Word};

/// Rewrites `e` into normal-ordered form, always reducing the leftmost
/// inverted pair first.
pub fn normal_order(model: &Model, e: &AlgebraElement) -> AlgebraElement {
    normal_order_with(model, e, &mut |_| 0)
}

/// Rewrites `e` into normal-ordered form, letting `pick` choose which
/// inverted site to reduce: it receives the number of available sites and
/// returns an index into them. Any strategy yields the same result.
pub fn normal_order_with(
    model: &Model,
    e: &AlgebraElement,
    pick: &mut dyn FnMut(usize) -> usize,
) -> AlgebraElement {
    let mut out = AlgebraElement::zero();
    // Pending terms, coalesced by word so repeated intermediates are
    // rewritten once.
    let mut work: BTreeMap<Word, ParamRatio> = BTreeMap::new();
    for (w, c) in e.terms() {
        add_to(&mut work, w.clone(), c.clone());
    }
    while let Some((w, c)) = work.pop_first() {
        if c.is_zero() {
            continue;
        }
        let sites = w.inverted_sites();
        if sites.is_empty() {
            out.add_term(w, c);
            continue;
        }
        let k = sites[pick(sites.len()) % sites.len()];
        let x = w.letters()[k];
        let y = w.letters()[k + 1];
        let before = w.measure();

        let swapped = w.swapped(k);
        debug_assert!(swapped.measure() < before);
        add_to(&mut work, swapped, c.clone());

        for (cw, cc) in model.commutator(x, y).terms() {
            let spliced = w.spliced(k, cw);
            debug_assert!(spliced.measure() < before);
            add_to(&mut work, spliced, &c * cc);
        }
    }
    out
}

fn add_to(work: &mut BTreeMap<Word, ParamRatio>, w: Word, c: ParamRatio) {
    if c.is_zero() {
        return;
    }
    match work.entry(w) {
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
