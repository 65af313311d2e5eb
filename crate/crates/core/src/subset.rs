//! Subsets of `Z_n` as bit masks (bit `j` set iff `j` is a member).

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::modular::Modulus;

/// Widest modulus a mask-backed subset can hold.
pub const MAX_SUBSET_MODULUS: u64 = 128;

/// An arbitrary subset of `Z_n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ZnSet {
    n: Modulus,
    mask: u128,
}

impl ZnSet {
    pub fn empty(n: Modulus) -> Result<Self> {
        Self::from_mask(n, 0)
    }

    pub fn full(n: Modulus) -> Result<Self> {
        Self::check_width(n)?;
        Ok(ZnSet { n, mask: Self::full_mask(n) })
    }

    fn check_width(n: Modulus) -> Result<()> {
        if n.get() > MAX_SUBSET_MODULUS {
            return Err(Error::SubsetTooWide { n: n.get(), max: MAX_SUBSET_MODULUS });
        }
        Ok(())
    }

    fn full_mask(n: Modulus) -> u128 {
        if n.get() == 128 {
            u128::MAX
        } else {
            (1u128 << n.get()) - 1
        }
    }

    pub fn from_mask(n: Modulus, mask: u128) -> Result<Self> {
        Self::check_width(n)?;
        if mask & !Self::full_mask(n) != 0 {
            return Err(Error::ResidueOutOfRange {
                value: 127 - mask.leading_zeros() as u64,
                modulus: n.get(),
            });
        }
        Ok(ZnSet { n, mask })
    }

    pub fn from_elements(n: Modulus, elems: impl IntoIterator<Item = u64>) -> Result<Self> {
        let mut s = Self::empty(n)?;
        for e in elems {
            if e >= n.get() {
                return Err(Error::ResidueOutOfRange { value: e, modulus: n.get() });
            }
            s.insert(e);
        }
        Ok(s)
    }

    pub fn modulus(&self) -> Modulus {
        self.n
    }

    pub fn mask(&self) -> u128 {
        self.mask
    }

    pub fn contains(&self, x: u64) -> bool {
        x < self.n.get() && self.mask >> x & 1 == 1
    }

    /// Panics if `x` is out of range.
    pub fn insert(&mut self, x: u64) {
        assert!(x < self.n.get(), "{x} out of range for Z_{}", self.n);
        self.mask |= 1 << x;
    }

    pub fn len(&self) -> usize {
        self.mask.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.mask == 0
    }

    /// `Z_n \ self`.
    pub fn complement(&self) -> ZnSet {
        ZnSet { n: self.n, mask: !self.mask & Self::full_mask(self.n) }
    }

    /// `{x + t : x ∈ self}`.
    pub fn translate(&self, t: u64) -> ZnSet {
        let n = self.n.get();
        let mut out = ZnSet { n: self.n, mask: 0 };
        for x in self.iter() {
            out.insert((x + t % n) % n);
        }
        out
    }

    pub fn iter(&self) -> impl Iterator<Item = u64> + '_ {
        let mut rest = self.mask;
        std::iter::from_fn(move || {
            if rest == 0 {
                return None;
            }
            let j = rest.trailing_zeros() as u64;
            rest &= rest - 1;
            Some(j)
        })
    }

    pub fn to_vec(&self) -> Vec<u64> {
        self.iter().collect()
    }
}

impl fmt::Display for ZnSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, x) in self.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{x}")?;
        }
        f.write_str("}")
    }
}

/// A subset of `Z_n \ {0}`; it parametrizes one transversal and one right loop.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SubsetA(ZnSet);

impl SubsetA {
    pub fn new(set: ZnSet) -> Result<Self> {
        if set.contains(0) {
            return Err(Error::ZeroInSubset);
        }
        Ok(SubsetA(set))
    }

    pub fn empty(n: Modulus) -> Result<Self> {
        ZnSet::empty(n).map(SubsetA)
    }

    pub fn from_mask(n: Modulus, mask: u128) -> Result<Self> {
        Self::new(ZnSet::from_mask(n, mask)?)
    }

    pub fn from_elements(n: Modulus, elems: impl IntoIterator<Item = u64>) -> Result<Self> {
        Self::new(ZnSet::from_elements(n, elems)?)
    }

    /// Parses a comma-separated residue list; the empty string is `∅`.
    pub fn parse(n: Modulus, text: &str) -> Result<Self> {
        let text = text.trim();
        let text = text.strip_prefix('{').and_then(|t| t.strip_suffix('}')).unwrap_or(text);
        let mut elems = Vec::new();
        for part in text.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let v = u64::from_str(part).map_err(|e| Error::Parse(format!("{part:?}: {e}")))?;
            elems.push(v);
        }
        Self::from_elements(n, elems)
    }

    /// All `2^{n−1}` subsets of `Z_n \ {0}` in ascending mask order.
    pub fn all(n: Modulus) -> Result<impl Iterator<Item = SubsetA>> {
        ZnSet::check_width(n)?;
        if n.get() > 64 {
            return Err(Error::SubsetTooWide { n: n.get(), max: 64 });
        }
        Ok((0u128..1u128 << (n.get() - 1)).map(move |i| SubsetA(ZnSet { n, mask: i << 1 })))
    }

    pub fn as_set(&self) -> &ZnSet {
        &self.0
    }

    pub fn modulus(&self) -> Modulus {
        self.0.n
    }

    pub fn mask(&self) -> u128 {
        self.0.mask
    }

    pub fn contains(&self, x: u64) -> bool {
        self.0.contains(x)
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = u64> + '_ {
        self.0.iter()
    }

    pub fn to_vec(&self) -> Vec<u64> {
        self.0.to_vec()
    }
}

impl fmt::Display for SubsetA {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(n: u64) -> Modulus {
        Modulus::new(n).unwrap()
    }

    #[test]
    fn parse_lists() {
        let a = SubsetA::parse(m(5), "1,3").unwrap();
        assert_eq!(a.to_vec(), vec![1, 3]);
        assert!(SubsetA::parse(m(5), "").unwrap().is_empty());
        assert_eq!(SubsetA::parse(m(5), "{2, 4}").unwrap().to_vec(), vec![2, 4]);
        assert_eq!(SubsetA::parse(m(5), "0,1"), Err(Error::ZeroInSubset));
        assert!(matches!(SubsetA::parse(m(5), "7"), Err(Error::ResidueOutOfRange { .. })));
        assert!(matches!(SubsetA::parse(m(5), "x"), Err(Error::Parse(_))));
    }

    #[test]
    fn display_and_complement() {
        let s = ZnSet::from_elements(m(5), [1, 3]).unwrap();
        assert_eq!(s.to_string(), "{1,3}");
        assert_eq!(s.complement().to_vec(), vec![0, 2, 4]);
        assert_eq!(ZnSet::empty(m(5)).unwrap().to_string(), "{}");
        assert_eq!(s.translate(3).to_vec(), vec![1, 4]);
    }

    #[test]
    fn wide_moduli() {
        let full = ZnSet::full(m(128)).unwrap();
        assert_eq!(full.len(), 128);
        assert!(full.complement().is_empty());
        assert!(ZnSet::empty(m(129)).is_err());
        let s = ZnSet::from_elements(m(101), [100, 0]).unwrap();
        assert_eq!(s.to_vec(), vec![0, 100]);
    }

    #[test]
    fn enumerate_all() {
        let all: Vec<_> = SubsetA::all(m(5)).unwrap().collect();
        assert_eq!(all.len(), 16);
        assert!(all.iter().all(|a| !a.contains(0)));
        assert!(all.windows(2).all(|w| w[0].mask() < w[1].mask()));
    }
}
