//! Brute-force isomorphism and isotopy searches on Cayley tables.
//!
//! They are independent of the affine description of
//! isotopy classes: they only look at the tables.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::permutation::Permutation;

use super::{left_nonsingular_elements, left_translation, principal_isotope, right_translation, CayleyTable};

/// Order limits for the exponential searches.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleBounds {
    /// Largest order accepted by [`isotopic_bruteforce`].
    pub brute: usize,
    /// Largest order accepted by [`isotopic_naive`].
    pub naive: usize,
}

impl Default for OracleBounds {
    fn default() -> Self {
        OracleBounds { brute: 9, naive: 5 }
    }
}

/// An isotopy `(f, g, h)` with `f(a) ∘₂ g(b) = h(a ∘₁ b)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IsotopyWitness {
    pub f: Permutation,
    pub g: Permutation,
    pub h: Permutation,
}

impl IsotopyWitness {
    pub fn validate(&self, t1: &CayleyTable, t2: &CayleyTable) -> bool {
        let n = t1.order();
        t2.order() == n
            && [&self.f, &self.g, &self.h].iter().all(|p| p.len() == n)
            && (0..n).all(|a| {
                (0..n).all(|b| t2.get(self.f.apply(a), self.g.apply(b)) == self.h.apply(t1.get(a, b)))
            })
    }
}

/// Isomorphism invariant: multiset of column cycle types, when every column is a bijection.
fn column_signature(t: &CayleyTable) -> Option<BTreeMap<Vec<usize>, usize>> {
    let mut sig = BTreeMap::new();
    for b in 0..t.order() {
        let mut lens = right_translation(t, b).ok()?.cycle_lengths();
        lens.sort_unstable();
        *sig.entry(lens).or_insert(0) += 1;
    }
    Some(sig)
}

struct IsoSearch<'a> {
    t1: &'a CayleyTable,
    t2: &'a CayleyTable,
    map: Vec<Option<u32>>,
    used: Vec<bool>,
    assigned: Vec<usize>,
}

impl<'a> IsoSearch<'a> {
    /// Assigns `x ↦ y` and closes under the operation. Returns false on conflict;
    /// everything pushed onto `assigned` past `mark` must then be undone.
    fn assign(&mut self, x: usize, y: usize) -> bool {
        let mut queue = vec![(x, y)];
        while let Some((x, y)) = queue.pop() {
            match self.map[x] {
                Some(prev) if prev as usize == y => continue,
                Some(_) => return false,
                None if self.used[y] => return false,
                None => {}
            }
            self.map[x] = Some(y as u32);
            self.used[y] = true;
            self.assigned.push(x);
            for i in 0..self.assigned.len() {
                let z = self.assigned[i];
                let hz = self.map[z].unwrap() as usize;
                queue.push((self.t1.get(x, z), self.t2.get(y, hz)));
                queue.push((self.t1.get(z, x), self.t2.get(hz, y)));
            }
        }
        true
    }

    fn undo_to(&mut self, mark: usize) {
        while self.assigned.len() > mark {
            let x = self.assigned.pop().unwrap();
            let y = self.map[x].take().unwrap() as usize;
            self.used[y] = false;
        }
    }

    fn run(&mut self) -> bool {
        let Some(x) = self.map.iter().position(Option::is_none) else {
            return true;
        };
        for y in 0..self.map.len() {
            if self.used[y] {
                continue;
            }
            let mark = self.assigned.len();
            if self.assign(x, y) && self.run() {
                return true;
            }
            self.undo_to(mark);
        }
        false
    }
}

/// Finds `h` with `h(a ∘₁ b) = h(a) ∘₂ h(b)`, or `None`.
///
/// Backtracks over images in index order. When both tables have a two-sided
/// identity the search is seeded with `h(e₁) = e₂`, and every assignment is
/// closed under the operation before branching again.
pub fn isomorphic(t1: &CayleyTable, t2: &CayleyTable) -> Result<Option<Permutation>> {
    let n = t1.order();
    if t2.order() != n {
        return Err(Error::OrderMismatch { left: n, right: t2.order() });
    }
    if column_signature(t1) != column_signature(t2) {
        return Ok(None);
    }
    let mut search = IsoSearch {
        t1,
        t2,
        map: vec![None; n],
        used: vec![false; n],
        assigned: Vec::with_capacity(n),
    };
    match (t1.identity_element(), t2.identity_element()) {
        (Some(e1), Some(e2)) => {
            if !search.assign(e1, e2) {
                return Ok(None);
            }
        }
        (None, None) => {}
        _ => return Ok(None),
    }
    if !search.run() {
        return Ok(None);
    }
    let images = search.map.into_iter().map(|y| y.unwrap()).collect();
    Ok(Some(Permutation::new(images).expect("search builds a bijection")))
}

/// Searches the principal isotopes of `t1` for one isomorphic to `t2`.
///
/// `α` runs over the left-nonsingular elements and `β` over all elements,
/// lexicographically; the first hit `φ: t1_{α,β} → t2` yields the isotopy
/// `(φ∘R_β, φ∘L_α, φ)` from `t1` to `t2`.
pub fn isotopic_bruteforce(
    t1: &CayleyTable,
    t2: &CayleyTable,
    bounds: OracleBounds,
) -> Result<Option<IsotopyWitness>> {
    let n = t1.order();
    if t2.order() != n {
        return Err(Error::OrderMismatch { left: n, right: t2.order() });
    }
    if n > bounds.brute {
        return Err(Error::AboveBound { n: n as u64, bound: bounds.brute as u64 });
    }
    for (t, name) in [(t1, "first"), (t2, "second")] {
        if !t.is_right_loop_anywhere() {
            return Err(Error::NotRightLoop(format!("{name} table")));
        }
    }
    for alpha in left_nonsingular_elements(t1) {
        let l_alpha = Permutation::new(left_translation(t1, alpha)?).expect("left nonsingular");
        for beta in 0..n {
            let iso = principal_isotope(t1, alpha, beta)?;
            if let Some(phi) = isomorphic(&iso, t2)? {
                let witness = IsotopyWitness {
                    f: phi.compose(&right_translation(t1, beta)?),
                    g: phi.compose(&l_alpha),
                    h: phi,
                };
                if !witness.validate(t1, t2) {
                    return Err(Error::Consistency(format!(
                        "reconstructed isotopy fails at α={alpha}, β={beta}"
                    )));
                }
                return Ok(Some(witness));
            }
        }
    }
    Ok(None)
}

/// Steps `p` to the next permutation in lexicographic order.
fn next_permutation(p: &mut [u32]) -> bool {
    let Some(i) = (1..p.len()).rev().find(|&i| p[i - 1] < p[i]) else {
        return false;
    };
    let j = (i..p.len()).rev().find(|&j| p[j] > p[i - 1]).unwrap();
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

/// Direct search over pairs `(f, g)` of bijections; `h` is then forced by
/// `h(a∘₁b) = f(a)∘₂g(b)` and only its consistency and bijectivity are checked.
pub fn isotopic_naive(t1: &CayleyTable, t2: &CayleyTable, bounds: OracleBounds) -> Result<bool> {
    let n = t1.order();
    if t2.order() != n {
        return Err(Error::OrderMismatch { left: n, right: t2.order() });
    }
    if n > bounds.naive {
        return Err(Error::AboveBound { n: n as u64, bound: bounds.naive as u64 });
    }
    let mut f: Vec<u32> = (0..n as u32).collect();
    loop {
        let mut g: Vec<u32> = (0..n as u32).collect();
        loop {
            if forced_h(t1, t2, &f, &g) {
                return Ok(true);
            }
            if !next_permutation(&mut g) {
                break;
            }
        }
        if !next_permutation(&mut f) {
            return Ok(false);
        }
    }
}

fn forced_h(t1: &CayleyTable, t2: &CayleyTable, f: &[u32], g: &[u32]) -> bool {
    let n = t1.order();
    let mut h = vec![u32::MAX; n];
    for (a, &fa) in f.iter().enumerate() {
        for (b, &gb) in g.iter().enumerate() {
            let c = t1.get(a, b);
            let v = t2.get(fa as usize, gb as usize) as u32;
            if h[c] == u32::MAX {
                h[c] = v;
            } else if h[c] != v {
                return false;
            }
        }
    }
    Permutation::new(h).is_ok()
}
