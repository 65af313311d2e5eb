//! Arithmetic in `Z_n`, its unit group, and the affine maps `x ↦ νx + u`.
//!
//! Every [`Residue`] carries its [`Modulus`]; binary operations between
//! residues of different moduli are rejected with
//! [`Error::ModulusMismatch`] rather than coerced.

use std::fmt;

use num_integer::Integer;

use crate::error::{Error, Result};
use crate::subset::ZnSet;

/// The modulus `n ≥ 2` of the ring `Z_n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Modulus(u64);

impl Modulus {
    pub fn new(n: u64) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidModulus(n));
        }
        Ok(Modulus(n))
    }

    /// A modulus satisfying the odd `n > 1` hypothesis of the classification results.
    pub fn new_odd(n: u64) -> Result<Self> {
        let m = Self::new(n).map_err(|_| Error::EvenModulus(n))?;
        m.require_odd()?;
        Ok(m)
    }

    pub fn get(self) -> u64 {
        self.0
    }

    pub fn as_usize(self) -> usize {
        self.0 as usize
    }

    pub fn is_odd(self) -> bool {
        self.0 % 2 == 1
    }

    pub fn require_odd(self) -> Result<()> {
        if self.is_odd() {
            Ok(())
        } else {
            Err(Error::EvenModulus(self.0))
        }
    }

    pub fn residue(self, value: u64) -> Result<Residue> {
        Residue::new(value, self)
    }

    /// Reduces any signed integer into `[0, n)`.
    pub fn reduce(self, value: i128) -> Residue {
        Residue {
            value: value.rem_euclid(self.0 as i128) as u64,
            modulus: self,
        }
    }

    pub fn zero(self) -> Residue {
        Residue { value: 0, modulus: self }
    }

    pub fn one(self) -> Residue {
        Residue { value: 1, modulus: self }
    }

    /// All residues `0..n` in ascending order.
    pub fn elements(self) -> impl Iterator<Item = Residue> {
        (0..self.0).map(move |value| Residue { value, modulus: self })
    }
}

impl fmt::Display for Modulus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A fully reduced element of `Z_n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Residue {
    value: u64,
    modulus: Modulus,
}

impl Residue {
    pub fn new(value: u64, modulus: Modulus) -> Result<Self> {
        if value >= modulus.0 {
            return Err(Error::ResidueOutOfRange { value, modulus: modulus.0 });
        }
        Ok(Residue { value, modulus })
    }

    pub fn value(self) -> u64 {
        self.value
    }

    pub fn modulus(self) -> Modulus {
        self.modulus
    }

    fn check(self, other: Residue) -> Result<Modulus> {
        if self.modulus != other.modulus {
            return Err(Error::ModulusMismatch {
                left: self.modulus.0,
                right: other.modulus.0,
            });
        }
        Ok(self.modulus)
    }

    pub fn checked_add(self, other: Residue) -> Result<Residue> {
        let m = self.check(other)?;
        Ok(m.reduce(self.value as i128 + other.value as i128))
    }

    pub fn checked_sub(self, other: Residue) -> Result<Residue> {
        let m = self.check(other)?;
        Ok(m.reduce(self.value as i128 - other.value as i128))
    }

    pub fn checked_mul(self, other: Residue) -> Result<Residue> {
        let m = self.check(other)?;
        Ok(m.reduce(self.value as i128 * other.value as i128))
    }

    pub fn negate(self) -> Residue {
        self.modulus.reduce(-(self.value as i128))
    }

    pub fn is_unit(self) -> bool {
        self.value.gcd(&self.modulus.0) == 1
    }

    pub fn inverse(self) -> Result<Residue> {
        inv_mod(self.value, self.modulus.0)
            .map(|value| Residue { value, modulus: self.modulus })
            .ok_or(Error::NotUnit { value: self.value, modulus: self.modulus.0 })
    }
}

impl fmt::Display for Residue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

/// Inverse of `a` modulo `m` via the extended Euclidean algorithm, in `[0, m)`.
pub fn inv_mod(a: u64, m: u64) -> Option<u64> {
    let e = (a as i128 % m as i128).extended_gcd(&(m as i128));
    if e.gcd != 1 {
        return None;
    }
    Some(e.x.rem_euclid(m as i128) as u64)
}

/// Number of `k ∈ [1, n]` coprime to `n`.
pub fn euler_phi(n: u64) -> Result<u64> {
    if n == 0 {
        return Err(Error::ZeroArgument);
    }
    let mut rest = n;
    let mut phi = n;
    let mut p = 2;
    while p * p <= rest {
        if rest.is_multiple_of(p) {
            while rest.is_multiple_of(p) {
                rest /= p;
            }
            phi -= phi / p;
        }
        p += 1;
    }
    if rest > 1 {
        phi -= phi / rest;
    }
    Ok(phi)
}

/// All divisors of `m` in ascending order.
pub fn divisors(m: u64) -> Result<Vec<u64>> {
    if m == 0 {
        return Err(Error::ZeroArgument);
    }
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1;
    while d * d <= m {
        if m.is_multiple_of(d) {
            small.push(d);
            if d != m / d {
                large.push(m / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    Ok(small)
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// The unit group `U_n`, ascending.
pub fn units(n: Modulus) -> Vec<Residue> {
    n.elements().filter(|r| r.is_unit()).collect()
}

/// Multiplicative order of the unit `nu`.
pub fn multiplicative_order(nu: Residue) -> Result<u64> {
    if !nu.is_unit() {
        return Err(Error::NotUnit { value: nu.value, modulus: nu.modulus.0 });
    }
    let n = nu.modulus.0 as u128;
    let mut x = nu.value as u128 % n;
    let mut k = 1;
    while x != 1 % n {
        x = x * nu.value as u128 % n;
        k += 1;
    }
    Ok(k)
}

/// The affine map `x ↦ νx + u` on `Z_n` with `ν` a unit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AffineMap {
    nu: Residue,
    u: Residue,
}

impl AffineMap {
    pub fn new(nu: Residue, u: Residue) -> Result<Self> {
        nu.check(u)?;
        if !nu.is_unit() {
            return Err(Error::NotUnit { value: nu.value, modulus: nu.modulus.0 });
        }
        Ok(AffineMap { nu, u })
    }

    /// Convenience constructor from raw integers, reducing both into `Z_n`.
    pub fn from_raw(nu: i128, u: i128, n: Modulus) -> Result<Self> {
        Self::new(n.reduce(nu), n.reduce(u))
    }

    pub fn identity(n: Modulus) -> Self {
        AffineMap { nu: n.one(), u: n.zero() }
    }

    pub fn nu(self) -> Residue {
        self.nu
    }

    pub fn u(self) -> Residue {
        self.u
    }

    pub fn modulus(self) -> Modulus {
        self.nu.modulus
    }

    /// Applies the map to a raw value in `[0, n)`, skipping modulus checks.
    #[inline]
    pub fn apply_raw(self, x: u64) -> u64 {
        let n = self.nu.modulus.0 as u128;
        ((self.nu.value as u128 * x as u128 + self.u.value as u128) % n) as u64
    }

    /// The map as an image array over `0..n`.
    pub fn images(self) -> Vec<u32> {
        (0..self.modulus().get()).map(|x| self.apply_raw(x) as u32).collect()
    }

    /// Composition `self ∘ other` (apply `other` first).
    pub fn compose(self, other: AffineMap) -> Result<AffineMap> {
        let nu = self.nu.checked_mul(other.nu)?;
        let u = self.nu.checked_mul(other.u)?.checked_add(self.u)?;
        AffineMap::new(nu, u)
    }
}

impl fmt::Display for AffineMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.nu, self.u)
    }
}

pub fn affine_apply(f: AffineMap, x: Residue) -> Result<Residue> {
    f.nu.checked_mul(x)?.checked_add(f.u)
}

/// `(ν, u)⁻¹ = (ν⁻¹, −ν⁻¹u)`.
pub fn affine_invert(f: AffineMap) -> AffineMap {
    let inv = f.nu.inverse().expect("affine multiplier is a unit");
    let u = inv.checked_mul(f.u).expect("same modulus").negate();
    AffineMap { nu: inv, u }
}

/// `{x : f(x) ∈ s}`, computed as the image of `s` under `f⁻¹`.
pub fn affine_preimage(f: AffineMap, s: &ZnSet) -> Result<ZnSet> {
    if f.modulus() != s.modulus() {
        return Err(Error::ModulusMismatch {
            left: f.modulus().get(),
            right: s.modulus().get(),
        });
    }
    let g = affine_invert(f);
    let mut out = ZnSet::empty(s.modulus())?;
    for j in s.iter() {
        out.insert(g.apply_raw(j));
    }
    Ok(out)
}

/// Every element of `Aff(1, n)`, ordered by `(ν, u)`.
pub fn affine_maps(n: Modulus) -> Vec<AffineMap> {
    let mut maps = Vec::new();
    for nu in units(n) {
        for u in n.elements() {
            maps.push(AffineMap { nu, u });
        }
    }
    maps
}

/// The maximal ideal `J = pZ_{p²}` of `Z_{p²}` for an odd prime `p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MaximalIdealJ {
    p: u64,
}

impl MaximalIdealJ {
    pub fn new(p: u64) -> Result<Self> {
        if p.is_multiple_of(2) || !is_prime(p) {
            return Err(Error::NotOddPrime(p));
        }
        Ok(MaximalIdealJ { p })
    }

    pub fn p(self) -> u64 {
        self.p
    }

    pub fn ring(self) -> Modulus {
        Modulus(self.p * self.p)
    }

    pub fn contains(self, x: u64) -> bool {
        x.is_multiple_of(self.p)
    }

    /// `{0, p, 2p, …, (p−1)p}`.
    pub fn members(self) -> Vec<u64> {
        (0..self.p).map(|i| i * self.p).collect()
    }

    /// The coset `c + J`, ascending.
    pub fn coset(self, c: u64) -> Vec<u64> {
        let n = self.p * self.p;
        let mut v: Vec<u64> = self.members().into_iter().map(|j| (j + c) % n).collect();
        v.sort_unstable();
        v
    }
}
