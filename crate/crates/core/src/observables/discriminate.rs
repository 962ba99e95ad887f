use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use super::embed::Host;
use super::enumerate_unchecked;
use super::martingale::ExactTable;
use crate::error::{guard, param, structure, Result};
use crate::growth::{exact_step_distribution, exact_step_states};
use crate::tree_core::{DecoratedTree, PlaneTree, Tree};

/// Second-moment lower bound on the total variation distance between two
/// laws whose martingale values have the given means and variances.
pub fn tv_lower_bound(mean1: f64, var1: f64, mean2: f64, var2: f64) -> Result<f64> {
    if !(var1 >= 0.0 && var2 >= 0.0) {
        return Err(param("variances must be nonnegative"));
    }
    let gap = mean1 - mean2;
    if gap == 0.0 {
        return Ok(0.0);
    }
    let g2 = gap * gap;
    Ok(g2 / (2.0 * (var1 + var2) + g2))
}

pub fn tv_lower_bound_exact(
    mean1: &BigRational,
    var1: &BigRational,
    mean2: &BigRational,
    var2: &BigRational,
) -> Result<BigRational> {
    if var1.is_negative() || var2.is_negative() {
        return Err(param("variances must be nonnegative"));
    }
    let gap = mean1 - mean2;
    if gap.is_zero() {
        return Ok(BigRational::zero());
    }
    let g2 = &gap * &gap;
    let two = BigRational::from_integer(BigInt::from(2));
    Ok(&g2 / (two * (var1 + var2) + &g2))
}

/// Exact mean and variance of `M_tau(n)` for the chain started at `seed`.
pub fn exact_martingale_moments(table: &ExactTable, seed: &PlaneTree, n: usize) -> Result<(BigRational, BigRational)> {
    let mut mean = BigRational::zero();
    let mut second = BigRational::zero();
    for (t, p) in exact_step_states(seed, n)?.into_values() {
        let m = table.value_on_host(&Host::new(&t.to_tree()))?;
        second += &p * &m * &m;
        mean += p * m;
    }
    let var = second - &mean * &mean;
    Ok((mean, var))
}

/// Exact total variation between the two chains at every size from the
/// larger seed up to `n_max`.
pub fn exact_tv_sequence(s1: &PlaneTree, s2: &PlaneTree, n_max: usize) -> Result<Vec<(usize, BigRational)>> {
    let n0 = s1.num_vertices().max(s2.num_vertices());
    (n0..=n_max)
        .map(|n| Ok((n, exact_step_distribution(s1, n)?.total_variation(&exact_step_distribution(s2, n)?))))
        .collect()
}

/// Largest seed accepted by [`distinguishing_tau`].
pub const DISTINGUISH_GUARD: usize = 6;

/// A minimal decorated tree whose expected count differs between the two
/// seeds once both chains reach the larger seed's size.  Candidates are
/// scanned in (weight, size, code) order, which extends the precedence
/// order, so the first hit is minimal.
pub fn distinguishing_tau(s1: &Tree, s2: &Tree) -> Result<DecoratedTree> {
    if s1.num_vertices() < 3 || s2.num_vertices() < 3 {
        return Err(param("seeds need at least three vertices"));
    }
    if s1.canonical_code() == s2.canonical_code() {
        return Err(param("seeds are isomorphic"));
    }
    let n0 = s1.num_vertices().max(s2.num_vertices());
    if n0 > DISTINGUISH_GUARD {
        return Err(guard(format!("seed search limited to {DISTINGUISH_GUARD} vertices")));
    }
    let law = |s: &Tree| -> Result<Vec<(Host, BigRational)>> {
        Ok(exact_step_states(&PlaneTree::from_tree(s, 0)?, n0)?
            .into_values()
            .map(|(t, p)| (Host::new(&t.to_tree()), p))
            .collect())
    };
    let (l1, l2) = (law(s1)?, law(s2)?);
    let expect = |law: &[(Host, BigRational)], tau: &DecoratedTree| -> BigRational {
        law.iter().map(|(h, p)| p * BigRational::from_integer(BigInt::from(h.d_tau(tau)))).sum()
    };
    let universe = enumerate_unchecked(2 * (n0 as u32 - 1), n0)?;
    universe
        .elements()
        .iter()
        .find(|tau| expect(&l1, tau) != expect(&l2, tau))
        .cloned()
        .ok_or_else(|| structure("no decorated tree separates the seeds"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bound_examples() {
        assert_eq!(tv_lower_bound(1.0, 0.3, 1.0, 0.2).unwrap(), 0.0);
        assert_eq!(tv_lower_bound(2.0, 0.0, 0.0, 0.0).unwrap(), 1.0);
        assert!((tv_lower_bound(1.0, 0.5, 0.0, 0.5).unwrap() - 1.0 / 3.0).abs() < 1e-15);
        assert!(tv_lower_bound(1.0, -0.5, 0.0, 0.5).is_err());
    }

    #[test]
    fn path_vs_star() {
        let tau = distinguishing_tau(&Tree::path(4), &Tree::star(4)).unwrap();
        assert_eq!(tau.code(), "(2)");
        assert!(distinguishing_tau(&Tree::path(4), &Tree::path(4)).is_err());
        assert!(distinguishing_tau(&Tree::path(2), &Tree::path(4)).is_err());
    }
}
