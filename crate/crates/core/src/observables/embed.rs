use crate::tree_core::{DecoratedTree, Tree};

/// `[d]_l = d (d-1) ... (d-l+1)`.
#[inline]
pub(crate) fn ff(d: usize, l: u32) -> u128 {
    let l = l as usize;
    if l > d {
        return 0;
    }
    (0..l).map(|i| (d - i) as u128).product()
}

const OVERFLOW: &str = "embedding count exceeds u128";

#[inline]
fn mac(acc: u128, a: u128, b: u128) -> u128 {
    a.checked_mul(b).and_then(|p| acc.checked_add(p)).expect(OVERFLOW)
}

/// Host tree prepared for repeated embedding counts.
///
/// Arc `off[v] + i` stands for "image at `v`, parent image at the i-th
/// neighbor of `v`".
#[derive(Clone, Debug)]
pub struct Host {
    off: Vec<usize>,
    nb: Vec<u32>,
    rev: Vec<u32>,
}

impl Host {
    pub fn new(t: &Tree) -> Self {
        let n = t.num_vertices();
        let mut off = Vec::with_capacity(n + 1);
        off.push(0);
        for v in 0..n {
            off.push(off[v] + t.degree(v));
        }
        let nb: Vec<u32> = (0..n).flat_map(|v| t.neighbors(v).iter().map(|&u| u as u32)).collect();
        // rev[arc(v, k)] = position of v among the neighbors of nb[v][k].
        let mut incoming = vec![(0u32, 0u32); nb.len()];
        let mut cursor = off.clone();
        for w in 0..n {
            for (i, &u) in nb[off[w]..off[w + 1]].iter().enumerate() {
                let u = u as usize;
                incoming[cursor[u]] = (w as u32, i as u32);
                cursor[u] += 1;
            }
        }
        let mut rev = vec![0u32; nb.len()];
        let mut pos = vec![0u32; n];
        for u in 0..n {
            for (k, &w) in nb[off[u]..off[u + 1]].iter().enumerate() {
                pos[w as usize] = k as u32;
            }
            for &(w, i) in &incoming[off[u]..off[u + 1]] {
                rev[off[u] + pos[w as usize] as usize] = i;
            }
        }
        Host { off, nb, rev }
    }

    pub fn num_vertices(&self) -> usize {
        self.off.len() - 1
    }

    fn degree(&self, v: usize) -> usize {
        self.off[v + 1] - self.off[v]
    }

    /// `D_tau` by a dynamic program over oriented host edges, linear in the
    /// host size for a fixed pattern.
    ///
    /// # Panics
    /// If the count overflows `u128`.
    pub fn d_tau(&self, tau: &DecoratedTree) -> u128 {
        let pattern = tau.tree();
        let n = self.num_vertices();
        if pattern.num_vertices() > n {
            return 0;
        }
        let order = pattern.bfs_order(0);
        let parent = pattern.parents_from(0);
        let kids: Vec<Vec<usize>> = (0..pattern.num_vertices())
            .map(|x| pattern.neighbors(x).iter().copied().filter(|&c| parent[c] == x).collect())
            .collect();
        let mut vals: Vec<Vec<u128>> = vec![Vec::new(); pattern.num_vertices()];
        let mut total: u128 = 0;
        let mut coeff: Vec<u128> = Vec::new();
        let mut full: Vec<u128> = Vec::new();
        let mut quot: Vec<u128> = Vec::new();
        for &x in order.iter().rev() {
            let label = tau.label(x);
            let cs = &kids[x];
            let m = cs.len();
            let is_root = x == 0;
            let mut out = if is_root { Vec::new() } else { vec![0u128; self.nb.len()] };
            for v in 0..n {
                let dv = self.degree(v);
                let f = ff(dv, label);
                if f == 0 || dv < m + usize::from(!is_root) {
                    continue;
                }
                if m == 0 {
                    if is_root {
                        total = mac(total, f, 1);
                    } else {
                        out[self.off[v]..self.off[v + 1]].fill(f);
                    }
                    continue;
                }
                // coeff[k * m + j]: weight of sending child j to neighbor k.
                coeff.clear();
                for k in 0..dv {
                    let u = self.nb[self.off[v] + k] as usize;
                    let back = self.off[u] + self.rev[self.off[v] + k] as usize;
                    coeff.extend(cs.iter().map(|&c| vals[c][back]));
                }
                let size = 1usize << m;
                full.clear();
                full.resize(size, 0);
                full[0] = 1;
                for k in 0..dv {
                    let a = &coeff[k * m..(k + 1) * m];
                    for s in (1..size).rev() {
                        for (j, &aj) in a.iter().enumerate() {
                            if s >> j & 1 == 1 && aj != 0 {
                                full[s] = mac(full[s], aj, full[s ^ (1 << j)]);
                            }
                        }
                    }
                }
                if is_root {
                    total = mac(total, f, full[size - 1]);
                    continue;
                }
                // Remove neighbor k's factor to forbid the parent image.
                for k in 0..dv {
                    let a = &coeff[k * m..(k + 1) * m];
                    quot.clear();
                    quot.resize(size, 0);
                    quot[0] = 1;
                    for s in 1..size {
                        let mut q = full[s];
                        for (j, &aj) in a.iter().enumerate() {
                            if s >> j & 1 == 1 {
                                q -= aj * quot[s ^ (1 << j)];
                            }
                        }
                        quot[s] = q;
                    }
                    out[self.off[v] + k] = mac(0, f, quot[size - 1]);
                }
            }
            vals[x] = out;
        }
        total
    }
}

/// `D_tau(t)`: sum over injective homomorphisms `tau -> t` of the product of
/// falling factorials `[deg phi(u)]_{label(u)}`.
pub fn d_tau(tau: &DecoratedTree, t: &Tree) -> u128 {
    Host::new(t).d_tau(tau)
}

/// Backtracking count of injective homomorphisms of the disjoint union of
/// `parts` into `t`, weighted like `D_tau`.
pub fn d_tau_forest_brute_force(parts: &[&DecoratedTree], t: &Tree) -> u128 {
    // (label, index of the pattern parent in this list)
    let mut pattern: Vec<(u32, Option<usize>)> = Vec::new();
    for part in parts {
        let base = pattern.len();
        let order = part.tree().bfs_order(0);
        let parent = part.tree().parents_from(0);
        let mut at = vec![0usize; part.size()];
        for (i, &x) in order.iter().enumerate() {
            at[x] = base + i;
            let p = (x != 0).then(|| at[parent[x]]);
            pattern.push((part.label(x), p));
        }
    }
    let mut image = vec![usize::MAX; pattern.len()];
    let mut used = vec![false; t.num_vertices()];
    fn go(i: usize, pattern: &[(u32, Option<usize>)], t: &Tree, image: &mut [usize], used: &mut [bool]) -> u128 {
        if i == pattern.len() {
            return 1;
        }
        let (label, parent) = pattern[i];
        let candidates: Vec<usize> = match parent {
            Some(p) => t.neighbors(image[p]).to_vec(),
            None => (0..t.num_vertices()).collect(),
        };
        let mut sum = 0u128;
        for v in candidates {
            if used[v] {
                continue;
            }
            let f = ff(t.degree(v), label);
            if f == 0 {
                continue;
            }
            used[v] = true;
            image[i] = v;
            sum += f * go(i + 1, pattern, t, image, used);
            used[v] = false;
        }
        sum
    }
    go(0, &pattern, t, &mut image, &mut used)
}

pub fn d_tau_brute_force(tau: &DecoratedTree, t: &Tree) -> u128 {
    d_tau_forest_brute_force(&[tau], t)
}

/// Joint count over pairs of embeddings with disjoint images.
pub fn d_tau_pair(tau: &DecoratedTree, tau2: &DecoratedTree, t: &Tree) -> u128 {
    d_tau_forest_brute_force(&[tau, tau2], t)
}
