//! Decorated-tree observables `D_tau`, their one-step recurrence, the
//! martingales built from them, and total-variation bounds between seeds.

mod discriminate;
mod embed;
mod martingale;
mod recurrence;

use std::collections::{BTreeSet, VecDeque};

pub use discriminate::{
    distinguishing_tau, exact_martingale_moments, exact_tv_sequence, tv_lower_bound, tv_lower_bound_exact,
};
pub use embed::{d_tau, d_tau_brute_force, d_tau_forest_brute_force, d_tau_pair, Host};
pub use martingale::{martingale_table, martingale_value, Arithmetic, ExactTable, FloatTable, MartingaleTable, Scalar};
pub use recurrence::{one_step_expectation, recurrence_coeffs, recurrence_rhs, RecurrenceCoeffs};

use crate::error::{guard, param, Result};
use crate::tree_core::{enumerate_abstract_trees, DecoratedTree};

/// `[k]_j = k (k-1) ... (k-j+1)`, with `[k]_0 = 1`.
pub fn falling_factorial(k: i64, j: i64) -> Result<u128> {
    if k < 0 || j < 0 {
        return Err(param(format!("falling factorial needs nonnegative arguments, got [{k}]_{j}")));
    }
    if j > k {
        return Ok(0);
    }
    (0..j).try_fold(1u128, |acc, i| acc.checked_mul((k - i) as u128)).ok_or_else(|| param("falling factorial overflows"))
}

/// Strict precedence: lighter and no larger, or equally heavy and smaller.
pub fn precedes(a: &DecoratedTree, b: &DecoratedTree) -> bool {
    let (wa, wb, sa, sb) = (a.weight(), b.weight(), a.size(), b.size());
    (wa < wb && sa <= sb) || (wa == wb && sa < sb)
}

/// Every decorated tree of bounded weight and size, once per isomorphism
/// class, sorted by (weight, size, code).
#[derive(Clone, Debug)]
pub struct DecoratedOrderUniverse {
    elements: Vec<DecoratedTree>,
}

impl DecoratedOrderUniverse {
    pub fn elements(&self) -> &[DecoratedTree] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn contains(&self, tau: &DecoratedTree) -> bool {
        self.elements.binary_search(tau).is_ok()
    }

    pub fn precedes(&self, i: usize, j: usize) -> bool {
        precedes(&self.elements[i], &self.elements[j])
    }

    /// Elements strictly below `tau`.
    pub fn below<'a>(&'a self, tau: &'a DecoratedTree) -> impl Iterator<Item = &'a DecoratedTree> + 'a {
        self.elements.iter().filter(move |s| precedes(s, tau))
    }
}

pub const UNIVERSE_GUARD: u32 = 6;

pub fn enumerate_decorated(w_max: u32, k_max: usize) -> Result<DecoratedOrderUniverse> {
    if w_max > UNIVERSE_GUARD || k_max > UNIVERSE_GUARD as usize {
        return Err(guard(format!("decorated universe limited to weight and size {UNIVERSE_GUARD}")));
    }
    enumerate_unchecked(w_max, k_max)
}

pub(crate) fn enumerate_unchecked(w_max: u32, k_max: usize) -> Result<DecoratedOrderUniverse> {
    let mut set = BTreeSet::new();
    for k in 1..=k_max.min(w_max as usize) {
        for tree in enumerate_abstract_trees(k)?.into_values() {
            let mut labels = vec![1u32; k];
            fill(&tree, &mut labels, 0, w_max - k as u32, &mut set)?;
        }
    }
    Ok(DecoratedOrderUniverse { elements: set.into_iter().collect() })
}

fn fill(
    tree: &crate::tree_core::Tree,
    labels: &mut [u32],
    at: usize,
    spare: u32,
    out: &mut BTreeSet<DecoratedTree>,
) -> Result<()> {
    if at == labels.len() {
        out.insert(DecoratedTree::new(tree.clone(), labels.to_vec())?);
        return Ok(());
    }
    for extra in 0..=spare {
        labels[at] = 1 + extra;
        fill(tree, labels, at + 1, spare - extra, out)?;
    }
    labels[at] = 1;
    Ok(())
}

/// `tau` and everything reachable from it through the recurrence, sorted;
/// `tau` comes last.
pub fn closure(tau: &DecoratedTree) -> Result<Vec<DecoratedTree>> {
    let mut seen = BTreeSet::from([tau.clone()]);
    let mut queue = VecDeque::from([tau.clone()]);
    while let Some(t) = queue.pop_front() {
        if t.weight() < 2 {
            continue;
        }
        for sigma in recurrence_coeffs(&t)?.linear.into_keys() {
            if seen.insert(sigma.clone()) {
                queue.push_back(sigma);
            }
        }
    }
    let out: Vec<_> = seen.into_iter().collect();
    debug_assert!(out.last() == Some(tau));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn falling_factorials() {
        assert_eq!(falling_factorial(5, 2).unwrap(), 20);
        assert_eq!(falling_factorial(7, 0).unwrap(), 1);
        assert_eq!(falling_factorial(0, 0).unwrap(), 1);
        assert_eq!(falling_factorial(1, 2).unwrap(), 0);
        assert!(falling_factorial(-1, 2).is_err());
    }

    #[test]
    fn small_universes() {
        let u = enumerate_decorated(1, 6).unwrap();
        assert_eq!(u.elements().iter().map(|t| t.code().to_string()).collect::<Vec<_>>(), vec!["(1)"]);
        let u = enumerate_decorated(2, 2).unwrap();
        let codes: BTreeSet<String> = u.elements().iter().map(|t| t.code().to_string()).collect();
        assert_eq!(codes, BTreeSet::from(["(1)".into(), "(2)".into(), "(1(1))".into()]));
        assert!(enumerate_decorated(7, 2).is_err());
    }

    #[test]
    fn closure_ends_with_tau() {
        let star = DecoratedTree::parse("(3(1)(1)(1))").unwrap();
        let c = closure(&star).unwrap();
        assert_eq!(c.last(), Some(&star));
        assert!(c.iter().take(c.len() - 1).all(|s| precedes(s, &star)));
    }
}
