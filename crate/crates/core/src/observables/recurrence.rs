use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;

use super::embed::{d_tau, Host};
use crate::error::{guard, param, Result};
use crate::tree_core::{DecoratedTree, Tree};

/// Lower-order terms of the one-step conditional expectation of `D_tau`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RecurrenceCoeffs {
    pub linear: BTreeMap<DecoratedTree, u64>,
    pub growth_weight: u32,
}

fn bump(map: &mut BTreeMap<DecoratedTree, u64>, key: DecoratedTree, by: u64) {
    if by > 0 {
        *map.entry(key).or_insert(0) += by;
    }
}

/// Coefficients `c(tau, tau')` with
/// `E[D_tau(T')|T] = (1 + w/(2n-2)) D_tau(T) + (1/(2n-2)) sum c(tau,tau') D_tau'(T)`.
pub fn recurrence_coeffs(tau: &DecoratedTree) -> Result<RecurrenceCoeffs> {
    if tau.weight() < 2 {
        return Err(param("the single vertex with label 1 has no recurrence"));
    }
    let mut linear = BTreeMap::new();
    let t = tau.tree();
    for w in 0..tau.size() {
        let l = tau.label(w);
        if l >= 2 {
            bump(&mut linear, tau.relabeled(w, l - 1)?, u64::from(l * (l - 1)));
        } else if tau.size() >= 2 && t.degree(w) == 1 {
            let a = t.neighbors(w)[0];
            let la = tau.label(a);
            bump(&mut linear, tau.without_leaf(w, Some(la + 1))?, 1);
            bump(&mut linear, tau.without_leaf(w, None)?, u64::from(2 * la));
            if la >= 2 {
                bump(&mut linear, tau.without_leaf(w, Some(la - 1))?, u64::from(la * (la - 1)));
            }
        }
    }
    Ok(RecurrenceCoeffs { linear, growth_weight: tau.weight() })
}

fn rat(x: u128) -> BigRational {
    BigRational::from_integer(BigInt::from(x))
}

/// Right-hand side of the recurrence evaluated on `t`.
pub fn recurrence_rhs(tau: &DecoratedTree, t: &Tree) -> Result<BigRational> {
    let coeffs = recurrence_coeffs(tau)?;
    let n = t.num_vertices();
    if n < 2 {
        return Err(param("recurrence needs at least two vertices"));
    }
    let host = Host::new(t);
    let scale = rat(2 * n as u128 - 2);
    let w = rat(u128::from(coeffs.growth_weight));
    let mut out = (BigRational::from_integer(1.into()) + w / &scale) * rat(host.d_tau(tau));
    for (sigma, c) in &coeffs.linear {
        out += rat(u128::from(*c)) * rat(host.d_tau(sigma)) / &scale;
    }
    Ok(out)
}

/// Exact `E[D_tau(T')]` after one degree-proportional attachment, by
/// expanding every attachment vertex.
pub fn one_step_expectation(tau: &DecoratedTree, t: &Tree) -> Result<BigRational> {
    let n = t.num_vertices();
    if n > 9 || tau.size() > 5 {
        return Err(guard("one-step expansion limited to 9 host and 5 pattern vertices"));
    }
    if n < 2 {
        return Err(param("attachment needs at least two vertices"));
    }
    let total = rat(2 * n as u128 - 2);
    let mut out = BigRational::from_integer(0.into());
    for v in 0..n {
        out += rat(t.degree(v) as u128) * rat(d_tau(tau, &t.with_leaf(v))) / &total;
    }
    Ok(out)
}
