use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use super::embed::Host;
use super::recurrence::recurrence_coeffs;
use super::{closure, precedes};
use crate::error::{param, Error, Result};
use crate::tree_core::{DecoratedTree, Tree};

/// Arithmetic used by the coefficient pipeline.
pub trait Scalar: Clone + fmt::Debug + PartialEq + Send + Sync {
    fn zero() -> Self;
    fn ratio(p: u128, q: u128) -> Self;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn div(&self, o: &Self) -> Self;
    fn is_zero(&self) -> bool;
    fn to_f64(&self) -> f64;

    fn one() -> Self {
        Self::ratio(1, 1)
    }

    fn count(x: u128) -> Self {
        Self::ratio(x, 1)
    }
}

impl Scalar for f64 {
    fn zero() -> Self {
        0.0
    }
    fn ratio(p: u128, q: u128) -> Self {
        p as f64 / q as f64
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn div(&self, o: &Self) -> Self {
        self / o
    }
    fn is_zero(&self) -> bool {
        *self == 0.0
    }
    fn to_f64(&self) -> f64 {
        *self
    }
}

impl Scalar for BigRational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn ratio(p: u128, q: u128) -> Self {
        BigRational::new(BigInt::from(p), BigInt::from(q))
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn div(&self, o: &Self) -> Self {
        self / o
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
}

/// Exact or floating coefficient tables.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Arithmetic {
    Exact,
    Float,
}

/// Normalizers and correction coefficients making
/// `M(n) = alpha_n (D_tau - sum a_n(tau, s) D_s)` a martingale, for every
/// `n` in `2..=n_max`.
///
/// `basis` holds every decorated tree reachable from `tau` through the
/// recurrence, sorted, with `tau` last; coefficient vectors are indexed by
/// position in `basis`.
#[derive(Clone, Debug)]
pub struct MartingaleTable<S> {
    tau: DecoratedTree,
    basis: Vec<DecoratedTree>,
    n_max: usize,
    alpha: Vec<S>,
    a: Vec<Vec<S>>,
    abar: Vec<Vec<S>>,
    b: Vec<Vec<((usize, usize), S)>>,
}

pub type ExactTable = MartingaleTable<BigRational>;
pub type FloatTable = MartingaleTable<f64>;

impl<S: Scalar> MartingaleTable<S> {
    pub fn tau(&self) -> &DecoratedTree {
        &self.tau
    }

    pub fn basis(&self) -> &[DecoratedTree] {
        &self.basis
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    fn row(&self, n: usize) -> Result<usize> {
        if n < 2 || n > self.n_max {
            return Err(Error::SizeMismatch(format!("table covers n in 2..={}, got {n}", self.n_max)));
        }
        Ok(n - 2)
    }

    pub fn alpha(&self, n: usize) -> Result<&S> {
        Ok(&self.alpha[self.row(n)?])
    }

    /// `a_n(tau, s)` for each basis element (zero on `tau` itself).
    pub fn a(&self, n: usize) -> Result<&[S]> {
        Ok(&self.a[self.row(n)?])
    }

    pub fn abar(&self, n: usize) -> Result<&[S]> {
        Ok(&self.abar[self.row(n)?])
    }

    /// Nonzero entries `((rho, s), b_n(rho, s))` of the inverse triangular
    /// system over the basis.
    pub fn b(&self, n: usize) -> Result<&[((usize, usize), S)]> {
        Ok(&self.b[self.row(n)?])
    }

    /// `n,tau_prime,a` rows.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("n,tau_prime,a\n");
        for (i, row) in self.a.iter().enumerate() {
            for (s, v) in row.iter().enumerate().take(self.basis.len() - 1) {
                out.push_str(&format!("{},{},{}\n", i + 2, self.basis[s].code(), v.to_f64()));
            }
        }
        out
    }

    /// `M_tau` from precomputed `D` values, one per basis element.
    pub fn value_from_counts(&self, n: usize, counts: &[u128]) -> Result<S> {
        let r = self.row(n)?;
        if counts.len() != self.basis.len() {
            return Err(Error::SizeMismatch(format!("{} counts for {} basis trees", counts.len(), self.basis.len())));
        }
        let last = self.basis.len() - 1;
        let mut inner = S::count(counts[last]);
        for (s, coef) in self.a[r].iter().enumerate().take(last) {
            if !coef.is_zero() {
                inner = inner.sub(&coef.mul(&S::count(counts[s])));
            }
        }
        Ok(self.alpha[r].mul(&inner))
    }

    pub fn counts(&self, host: &Host) -> Vec<u128> {
        self.basis.iter().map(|s| host.d_tau(s)).collect()
    }

    pub fn value_on_host(&self, host: &Host) -> Result<S> {
        self.value_from_counts(host.num_vertices(), &self.counts(host))
    }
}

fn alpha_start<S: Scalar>(w: u32) -> S {
    if w == 1 {
        S::ratio(1, 2)
    } else {
        S::one()
    }
}

/// Builds the coefficient tables for `tau` up to `n_max`.
pub fn martingale_table<S: Scalar>(tau: &DecoratedTree, n_max: usize) -> Result<MartingaleTable<S>> {
    if n_max < 2 {
        return Err(param("tables start at n = 2"));
    }
    let basis = closure(tau)?;
    let l = basis.len();
    let prec: Vec<Vec<bool>> = (0..l).map(|s| (0..l).map(|r| precedes(&basis[s], &basis[r])).collect()).collect();
    let weight: Vec<u32> = basis.iter().map(DecoratedTree::weight).collect();
    let mut c: Vec<Vec<(usize, S)>> = vec![Vec::new(); l];
    for r in 0..l {
        if weight[r] >= 2 {
            for (sigma, k) in recurrence_coeffs(&basis[r])?.linear {
                let s = basis.binary_search(&sigma).map_err(|_| param("recurrence left the basis"))?;
                c[r].push((s, S::count(u128::from(k))));
            }
        }
    }
    let mut alpha: Vec<S> = weight.iter().map(|&w| alpha_start(w)).collect();
    let mut abar = vec![vec![S::zero(); l]; l];
    let mut a = vec![vec![S::zero(); l]; l];
    let mut b = vec![vec![S::zero(); l]; l];
    let mut table = MartingaleTable {
        tau: tau.clone(),
        basis: basis.clone(),
        n_max,
        alpha: Vec::new(),
        a: Vec::new(),
        abar: Vec::new(),
        b: Vec::new(),
    };
    let top = l - 1;
    for n in 2..=n_max {
        for r in 0..l {
            for s in 0..r {
                if !prec[s][r] {
                    continue;
                }
                let mut v = abar[r][s].mul(&alpha[s]);
                for t in s + 1..r {
                    if prec[s][t] && prec[t][r] && !abar[r][t].is_zero() && !a[t][s].is_zero() {
                        v = v.sub(&abar[r][t].mul(&alpha[t]).mul(&a[t][s]));
                    }
                }
                a[r][s] = v.div(&alpha[r]);
            }
            for s in 0..r {
                if !prec[s][r] {
                    continue;
                }
                let mut v = a[r][s].clone();
                for k in s + 1..r {
                    if prec[s][k] && prec[k][r] && !a[r][k].is_zero() && !b[k][s].is_zero() {
                        v = v.add(&a[r][k].mul(&b[k][s]));
                    }
                }
                b[r][s] = v;
            }
        }
        table.alpha.push(alpha[top].clone());
        table.a.push(a[top].clone());
        table.abar.push(abar[top].clone());
        let mut nz = Vec::new();
        for (r, row) in b.iter().enumerate().take(l) {
            for (s, x) in row.iter().enumerate().take(r) {
                if !x.is_zero() {
                    nz.push(((r, s), x.clone()));
                }
            }
        }
        table.b.push(nz);
        if n == n_max {
            break;
        }
        // Advance the running sums and normalizers to n + 1.
        let two_n_2 = 2 * n as u128 - 2;
        for r in 0..l {
            if weight[r] < 2 {
                continue;
            }
            let step = S::ratio(1, two_n_2 + u128::from(weight[r]));
            for s in 0..r {
                if !prec[s][r] {
                    continue;
                }
                let mut inner = c[r].iter().find(|(k, _)| *k == s).map(|(_, v)| v.clone()).unwrap_or_else(S::zero);
                for (t, ct) in &c[r] {
                    if prec[s][*t] && !b[*t][s].is_zero() {
                        inner = inner.add(&ct.mul(&b[*t][s]));
                    }
                }
                if !inner.is_zero() {
                    let inc = step.mul(&inner).mul(&alpha[r]).div(&alpha[s]);
                    abar[r][s] = abar[r][s].add(&inc);
                }
            }
        }
        for r in 0..l {
            let w = u128::from(weight[r]);
            let factor = if w == 1 { S::ratio(two_n_2, two_n_2 + 2) } else { S::ratio(two_n_2, two_n_2 + w) };
            alpha[r] = alpha[r].mul(&factor);
        }
    }
    Ok(table)
}

/// `M_tau` at the size of `t`.
pub fn martingale_value<S: Scalar>(table: &MartingaleTable<S>, t: &Tree) -> Result<S> {
    table.value_on_host(&Host::new(t))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn base_case_is_constant() {
        let one = DecoratedTree::vertex(1).unwrap();
        let table: ExactTable = martingale_table(&one, 12).unwrap();
        for n in 2..=12 {
            assert_eq!(martingale_value(&table, &Tree::path(n)).unwrap(), <BigRational as Scalar>::one());
            assert_eq!(martingale_value(&table, &Tree::star(n)).unwrap(), <BigRational as Scalar>::one());
        }
    }

    #[test]
    fn alpha_at_three() {
        let tau = DecoratedTree::parse("(2)").unwrap();
        let table: ExactTable = martingale_table(&tau, 5).unwrap();
        assert_eq!(table.alpha(3).unwrap(), &<BigRational as Scalar>::ratio(1, 2));
        assert!(table.alpha(6).is_err());
    }

    #[test]
    fn one_step_identity_small() {
        for code in ["(2)", "(1(1))", "(3)", "(2(1))"] {
            let tau = DecoratedTree::parse(code).unwrap();
            let table: ExactTable = martingale_table(&tau, 8).unwrap();
            for t in [Tree::path(3), Tree::star(4), Tree::path(5)] {
                let n = t.num_vertices();
                let mut expect = <BigRational as Scalar>::zero();
                for v in 0..n {
                    let p = <BigRational as Scalar>::ratio(t.degree(v) as u128, 2 * n as u128 - 2);
                    expect += p * martingale_value(&table, &t.with_leaf(v)).unwrap();
                }
                assert_eq!(expect, martingale_value(&table, &t).unwrap(), "{code}");
            }
        }
    }
}
