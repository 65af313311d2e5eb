//! Finite right loops as Cayley tables.
//!
//! A right loop is a groupoid in which every right translation
//! `R_b: x ↦ x∘b` is a bijection and which has a two-sided identity. The
//! loops studied here are `Z_n^A`, built from a subset `A ⊆ Z_n \ {0}` by
//!
//! ```text
//! a ∘_A b = a + b   if b ∉ A
//!         = b − a   if b ∈ A
//! ```
//!
//! The [`search`] submodule holds brute-force isomorphism and isotopy
//! searches used to cross-check the affine classification.

pub mod search;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::modular::Modulus;
use crate::permutation::Permutation;
use crate::subset::SubsetA;

pub use search::{
    isomorphic, isotopic_bruteforce, isotopic_naive, IsotopyWitness, OracleBounds,
};

/// An `n × n` multiplication table over `0..n`, `get(a, b) = a∘b`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CayleyTable {
    n: usize,
    cells: Vec<u32>,
    label: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    EntryOutOfRange { a: usize, b: usize },
    /// Column `b` repeats a value, so `R_b` is not a bijection.
    ColumnNotBijective { b: usize },
    /// `0∘b ≠ b`.
    LeftIdentity { b: usize },
    /// `a∘0 ≠ a`.
    RightIdentity { a: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::EntryOutOfRange { a, b } => write!(f, "entry ({a},{b}) out of range"),
            Violation::ColumnNotBijective { b } => {
                write!(f, "column {b}: right translation R_{b} is not a bijection")
            }
            Violation::LeftIdentity { b } => write!(f, "left identity fails: 0∘{b} ≠ {b}"),
            Violation::RightIdentity { a } => write!(f, "right identity fails: {a}∘0 ≠ {a}"),
        }
    }
}

impl CayleyTable {
    pub fn from_rows(rows: Vec<Vec<u32>>) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::Parse("empty table".into()));
        }
        let mut cells = Vec::with_capacity(n * n);
        for (a, row) in rows.into_iter().enumerate() {
            if row.len() != n {
                return Err(Error::Parse(format!("row {a} has {} entries, expected {n}", row.len())));
            }
            for (b, v) in row.into_iter().enumerate() {
                if v as usize >= n {
                    return Err(Error::Parse(format!("entry ({a},{b}) = {v} out of range")));
                }
                cells.push(v);
            }
        }
        Ok(CayleyTable { n, cells, label: None })
    }

    pub fn from_fn(n: usize, mut op: impl FnMut(usize, usize) -> usize) -> Self {
        let mut cells = Vec::with_capacity(n * n);
        for a in 0..n {
            for b in 0..n {
                let v = op(a, b);
                assert!(v < n, "entry ({a},{b}) = {v} out of range");
                cells.push(v as u32);
            }
        }
        CayleyTable { n, cells, label: None }
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn label(&self) -> Option<&str> {
        self.label.as_deref()
    }

    #[inline]
    pub fn get(&self, a: usize, b: usize) -> usize {
        self.cells[a * self.n + b] as usize
    }

    pub fn rows(&self) -> Vec<Vec<u32>> {
        self.cells.chunks(self.n).map(<[u32]>::to_vec).collect()
    }

    /// Same entries, ignoring labels.
    pub fn same_operation(&self, other: &CayleyTable) -> bool {
        self.n == other.n && self.cells == other.cells
    }

    /// The two-sided identity element, if any.
    pub fn identity_element(&self) -> Option<usize> {
        (0..self.n).find(|&e| (0..self.n).all(|x| self.get(e, x) == x && self.get(x, e) == x))
    }

    fn column_bijective(&self, b: usize) -> bool {
        let mut seen = vec![false; self.n];
        (0..self.n).all(|a| !std::mem::replace(&mut seen[self.get(a, b)], true))
    }

    /// Every right translation is a bijection.
    pub fn is_right_quasigroup(&self) -> bool {
        (0..self.n).all(|b| self.column_bijective(b))
    }

    /// A right quasigroup with some two-sided identity (not necessarily 0).
    pub fn is_right_loop_anywhere(&self) -> bool {
        self.is_right_quasigroup() && self.identity_element().is_some()
    }

    pub fn is_associative(&self) -> bool {
        (0..self.n).all(|a| {
            (0..self.n).all(|b| {
                (0..self.n).all(|c| self.get(self.get(a, b), c) == self.get(a, self.get(b, c)))
            })
        })
    }

    /// Plain-text form: `n` on the first line, then `n` rows of space-separated entries.
    pub fn to_text(&self) -> String {
        let mut out = format!("{}\n", self.n);
        for row in self.cells.chunks(self.n) {
            let line: Vec<String> = row.iter().map(u32::to_string).collect();
            out.push_str(&line.join(" "));
            out.push('\n');
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let n: usize = lines
            .next()
            .ok_or_else(|| Error::Parse("missing order line".into()))?
            .trim()
            .parse()
            .map_err(|e| Error::Parse(format!("order: {e}")))?;
        let rows = lines
            .map(|l| {
                l.split_whitespace()
                    .map(|v| v.parse::<u32>().map_err(|e| Error::Parse(format!("{v:?}: {e}"))))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        if rows.len() != n {
            return Err(Error::Parse(format!("expected {n} rows, found {}", rows.len())));
        }
        Self::from_rows(rows)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&TableJson {
            n: self.n,
            table: self.rows(),
            label: self.label.clone(),
        })
        .expect("table serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let raw: TableJson = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        if raw.table.len() != raw.n {
            return Err(Error::Parse(format!("n = {} but {} rows", raw.n, raw.table.len())));
        }
        let mut t = Self::from_rows(raw.table)?;
        t.label = raw.label;
        Ok(t)
    }
}

#[derive(Serialize, Deserialize)]
struct TableJson {
    n: usize,
    table: Vec<Vec<u32>>,
    label: Option<String>,
}

impl fmt::Display for CayleyTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

/// The Cayley table of `Z_n^A`.
pub fn build_zna(n: Modulus, a: &SubsetA) -> Result<CayleyTable> {
    if a.modulus() != n {
        return Err(Error::ModulusMismatch { left: n.get(), right: a.modulus().get() });
    }
    let size = n.as_usize();
    let table = CayleyTable::from_fn(size, |x, y| {
        if a.contains(y as u64) {
            (y + size - x) % size
        } else {
            (x + y) % size
        }
    });
    Ok(table.with_label(format!("Z_{n}^{a}")))
}

/// Recovers `A` when `t` is exactly the table of some `Z_n^A`.
///
/// For `n = 2` both subsets give the same table and `∅` is returned.
pub fn zna_subset_of(t: &CayleyTable) -> Option<SubsetA> {
    let n = Modulus::new(t.order() as u64).ok()?;
    let size = t.order();
    let reflected = (1..size).filter(|&b| t.get(1 % size, b) != (1 + b) % size).map(|b| b as u64);
    let a = SubsetA::from_elements(n, reflected).ok()?;
    build_zna(n, &a).ok()?.same_operation(t).then_some(a)
}

/// Checks the right-loop axioms with `0` as the identity.
pub fn check_right_loop(t: &CayleyTable) -> std::result::Result<(), Vec<Violation>> {
    let n = t.order();
    let mut violations = Vec::new();
    for a in 0..n {
        for b in 0..n {
            if t.get(a, b) >= n {
                violations.push(Violation::EntryOutOfRange { a, b });
            }
        }
    }
    if !violations.is_empty() {
        return Err(violations);
    }
    for b in 0..n {
        if !t.column_bijective(b) {
            violations.push(Violation::ColumnNotBijective { b });
        }
    }
    for b in 0..n {
        if t.get(0, b) != b {
            violations.push(Violation::LeftIdentity { b });
        }
    }
    for a in 0..n {
        if t.get(a, 0) != a {
            violations.push(Violation::RightIdentity { a });
        }
    }
    if violations.is_empty() {
        Ok(())
    } else {
        Err(violations)
    }
}

/// `R_β: x ↦ x∘β`.
pub fn right_translation(t: &CayleyTable, beta: usize) -> Result<Permutation> {
    check_index(t, beta)?;
    Permutation::new((0..t.order()).map(|x| t.get(x, beta) as u32).collect())
        .map_err(|_| Error::NotRightLoop(format!("column {beta} is not a bijection")))
}

/// Raw image array of `L_α: x ↦ α∘x`; may fail to be a bijection.
pub fn left_translation(t: &CayleyTable, alpha: usize) -> Result<Vec<u32>> {
    check_index(t, alpha)?;
    Ok((0..t.order()).map(|x| t.get(alpha, x) as u32).collect())
}

pub fn is_left_nonsingular(t: &CayleyTable, alpha: usize) -> bool {
    alpha < t.order() && {
        let mut seen = vec![false; t.order()];
        (0..t.order()).all(|x| !std::mem::replace(&mut seen[t.get(alpha, x)], true))
    }
}

pub fn left_nonsingular_elements(t: &CayleyTable) -> Vec<usize> {
    (0..t.order()).filter(|&a| is_left_nonsingular(t, a)).collect()
}

fn check_index(t: &CayleyTable, x: usize) -> Result<()> {
    if x >= t.order() {
        return Err(Error::ResidueOutOfRange { value: x as u64, modulus: t.order() as u64 });
    }
    Ok(())
}

/// The principal isotope `a ∘_{α,β} b = R_β⁻¹(a) ∘ L_α⁻¹(b)`. Its identity is `α∘β`.
pub fn principal_isotope(t: &CayleyTable, alpha: usize, beta: usize) -> Result<CayleyTable> {
    check_index(t, alpha)?;
    if !t.is_right_loop_anywhere() {
        return Err(Error::NotRightLoop(
            t.label().unwrap_or("table").to_string(),
        ));
    }
    if !is_left_nonsingular(t, alpha) {
        return Err(Error::NotLeftNonsingular(alpha));
    }
    let r_inv = right_translation(t, beta)?.inverse();
    let l_inv = Permutation::new(left_translation(t, alpha)?)
        .expect("left nonsingular")
        .inverse();
    let iso = CayleyTable::from_fn(t.order(), |a, b| t.get(r_inv.apply(a), l_inv.apply(b)));
    let base = t.label().unwrap_or("S");
    Ok(iso.with_label(format!("({base})_{{{alpha},{beta}}}")))
}
