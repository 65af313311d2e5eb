//! Cycle indices of the affine groups `Aff(1, n)` acting on `Z_n`.
//!
//! A [`CycleIndexPoly`] keeps, for each cycle type, the exact number of
//! group elements of that type, with the group order as common denominator.
//! Evaluating at `x_l = 2` for every `l` counts affine orbits on subsets of
//! `Z_n` (Burnside), and half of that is the number of isotopy classes of
//! the transversal right loops when `n` is odd.

pub mod prime_square;

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::modular::{affine_maps, euler_phi, AffineMap, Modulus};
use crate::permutation::Permutation;

pub use prime_square::{
    classify_affine_element_p2, closed_form_p2, closed_form_summands_at, fixed_points, lemma31_check,
    lemma32_check, AffineClassLabel, LemmaVerdict, DEFAULT_LEMMA_BOUND,
};

/// Cycle lengths with multiplicities, `(l, c_l)` sorted by `l`, all `c_l > 0`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CycleType(Vec<(u64, u64)>);

impl CycleType {
    /// Builds a type from `(length, count)` pairs, merging repeated lengths
    /// and dropping zero counts.
    pub fn from_pairs(pairs: impl IntoIterator<Item = (u64, u64)>) -> Self {
        let mut map = BTreeMap::new();
        for (l, c) in pairs {
            if c > 0 {
                *map.entry(l).or_insert(0) += c;
            }
        }
        CycleType(map.into_iter().collect())
    }

    pub fn pairs(&self) -> &[(u64, u64)] {
        &self.0
    }

    /// `Σ l·c_l`, the number of points moved around.
    pub fn degree(&self) -> u64 {
        self.0.iter().map(|&(l, c)| l * c).sum()
    }

    /// `Σ c_l`, the total number of cycles.
    pub fn cycle_count(&self) -> u64 {
        self.0.iter().map(|&(_, c)| c).sum()
    }

    /// The monomial `x1^a·x2^b·…`.
    pub fn monomial(&self) -> String {
        self.0.iter().map(|(l, c)| format!("x{l}^{c}")).collect::<Vec<_>>().join("·")
    }
}

impl fmt::Display for CycleType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, (l, c)) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "({l},{c})")?;
        }
        f.write_str("}")
    }
}

pub fn cycle_type(perm: &Permutation) -> CycleType {
    CycleType::from_pairs(perm.cycle_lengths().into_iter().map(|l| (l as u64, 1)))
}

/// Exact cycle index: element counts per cycle type over a common denominator.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CycleIndexPoly {
    degree: u64,
    group_order: BigUint,
    terms: BTreeMap<CycleType, BigUint>,
}

impl CycleIndexPoly {
    pub fn new(degree: u64, group_order: BigUint, terms: BTreeMap<CycleType, BigUint>) -> Result<Self> {
        let total: BigUint = terms.values().sum();
        if total != group_order {
            return Err(Error::Consistency(format!(
                "term counts sum to {total}, group order is {group_order}"
            )));
        }
        if let Some(bad) = terms.keys().find(|t| t.degree() != degree) {
            return Err(Error::Consistency(format!("cycle type {bad} does not cover {degree} points")));
        }
        Ok(CycleIndexPoly { degree, group_order, terms })
    }

    pub fn degree(&self) -> u64 {
        self.degree
    }

    pub fn group_order(&self) -> &BigUint {
        &self.group_order
    }

    pub fn terms(&self) -> &BTreeMap<CycleType, BigUint> {
        &self.terms
    }

    pub fn count_of(&self, t: &CycleType) -> BigUint {
        self.terms.get(t).cloned().unwrap_or_default()
    }

    /// `1/<order> * [ <count>·x1^a·… + … ]`, types in ascending order.
    pub fn to_text(&self) -> String {
        let body: Vec<String> = self
            .terms
            .iter()
            .map(|(t, c)| format!("{c}·{}", t.monomial()))
            .collect();
        format!("1/{} * [ {} ]", self.group_order, body.join(" + "))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.json_repr()).expect("poly serializes")
    }

    pub(crate) fn json_repr(&self) -> PolyJson {
        PolyJson {
            n: self.degree,
            order: self.group_order.to_string(),
            terms: self
                .terms
                .iter()
                .map(|(t, c)| TermJson { cycle_type: t.0.iter().map(|&(l, c)| [l, c]).collect(), count: c.to_string() })
                .collect(),
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Self::from_json_repr(serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?)
    }

    pub(crate) fn from_json_repr(raw: PolyJson) -> Result<Self> {
        let parse = |s: &str| s.parse::<BigUint>().map_err(|e| Error::Parse(format!("{s:?}: {e}")));
        let mut terms = BTreeMap::new();
        for term in raw.terms {
            let t = CycleType::from_pairs(term.cycle_type.into_iter().map(|[l, c]| (l, c)));
            if terms.insert(t.clone(), parse(&term.count)?).is_some() {
                return Err(Error::Parse(format!("duplicate cycle type {t}")));
            }
        }
        Self::new(raw.n, parse(&raw.order)?, terms)
    }
}

impl fmt::Display for CycleIndexPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

#[derive(Debug, Serialize, Deserialize, PartialEq, Eq)]
pub(crate) struct PolyJson {
    n: u64,
    order: String,
    terms: Vec<TermJson>,
}

#[derive(Debug, Serialize, Deserialize, PartialEq, Eq)]
pub(crate) struct TermJson {
    #[serde(rename = "type")]
    cycle_type: Vec<[u64; 2]>,
    count: String,
}

/// Every element of `Aff(1, n)` with its permutation of `Z_n`.
pub fn affine_group_elements(n: Modulus) -> impl Iterator<Item = (AffineMap, Permutation)> {
    affine_maps(n).into_iter().map(|f| {
        let p = Permutation::new(f.images()).expect("affine maps are bijections");
        (f, p)
    })
}

fn affine_order(n: Modulus) -> BigUint {
    BigUint::from(n.get()) * BigUint::from(euler_phi(n.get()).expect("n ≥ 2"))
}

/// Cycle index of `Aff(1, n)` by enumerating all `n·φ(n)` elements.
pub fn cycle_index_affine(n: Modulus) -> CycleIndexPoly {
    let mut terms: BTreeMap<CycleType, BigUint> = BTreeMap::new();
    for (_, p) in affine_group_elements(n) {
        *terms.entry(cycle_type(&p)).or_default() += 1u32;
    }
    CycleIndexPoly::new(n.get(), affine_order(n), terms).expect("enumeration is consistent")
}

/// Same result as [`cycle_index_affine`], with the per-element work spread over threads.
pub fn cycle_index_affine_parallel(n: Modulus) -> CycleIndexPoly {
    let maps = affine_maps(n);
    let terms = maps
        .par_iter()
        .map(|f| {
            let mut m = BTreeMap::new();
            m.insert(cycle_type(&Permutation::new(f.images()).expect("bijection")), BigUint::one());
            m
        })
        .reduce(BTreeMap::new, |mut acc, m| {
            for (t, c) in m {
                *acc.entry(t).or_default() += c;
            }
            acc
        });
    CycleIndexPoly::new(n.get(), affine_order(n), terms).expect("enumeration is consistent")
}

/// Evaluates with `x_l = values(l)` for each cycle length `l`.
pub fn evaluate_with(poly: &CycleIndexPoly, mut values: impl FnMut(u64) -> BigInt) -> BigRational {
    let mut sum = BigInt::zero();
    for (t, count) in &poly.terms {
        let mut mono = BigInt::from(count.clone());
        for &(l, c) in t.pairs() {
            mono *= num_traits::pow(values(l), c as usize);
        }
        sum += mono;
    }
    BigRational::new(sum, BigInt::from(poly.group_order.clone()))
}

/// Evaluates with every variable set to `value`.
pub fn evaluate_at(poly: &CycleIndexPoly, value: i64) -> BigRational {
    evaluate_with(poly, |_| BigInt::from(value))
}

/// Evaluation at `x_l = 2`: the number of orbits on the power set. The
/// division by the group order must be exact.
pub fn evaluate_at_two(poly: &CycleIndexPoly) -> Result<BigUint> {
    let mut sum = BigUint::zero();
    for (t, count) in &poly.terms {
        sum += count * (BigUint::one() << t.cycle_count());
    }
    let (q, r) = sum.div_rem(&poly.group_order);
    if !r.is_zero() {
        return Err(Error::InexactDivision(format!("{sum} / {}", poly.group_order)));
    }
    Ok(q)
}

/// Number of isotopy classes of transversals of an order-2 subgroup in `D_2n`.
pub fn itp_count(n: Modulus) -> Result<BigUint> {
    n.require_odd()?;
    itp_count_from(&cycle_index_affine(n))
}

/// As [`itp_count`], from an already computed cycle index.
pub fn itp_count_from(poly: &CycleIndexPoly) -> Result<BigUint> {
    let orbits = evaluate_at_two(poly)?;
    let (half, r) = orbits.div_rem(&BigUint::from(2u32));
    if !r.is_zero() {
        return Err(Error::InexactDivision(format!("{orbits} is odd")));
    }
    Ok(half)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(n: u64) -> Modulus {
        Modulus::new(n).unwrap()
    }

    fn ty(pairs: &[(u64, u64)]) -> CycleType {
        CycleType::from_pairs(pairs.iter().copied())
    }

    #[test]
    fn cycle_type_examples() {
        assert_eq!(cycle_type(&Permutation::identity(9)), ty(&[(1, 9)]));
        let shift = AffineMap::from_raw(1, 3, m(9)).unwrap();
        assert_eq!(cycle_type(&Permutation::new(shift.images()).unwrap()), ty(&[(3, 3)]));
        let neg = AffineMap::from_raw(8, 0, m(9)).unwrap();
        assert_eq!(cycle_type(&Permutation::new(neg.images()).unwrap()), ty(&[(1, 1), (2, 4)]));
    }

    #[test]
    fn element_counts() {
        assert_eq!(affine_group_elements(m(3)).count(), 6);
        assert_eq!(affine_group_elements(m(9)).count(), 54);
        assert_eq!(affine_group_elements(m(25)).count(), 500);
        // Aff(1,3) is all of S_3.
        let perms: std::collections::BTreeSet<_> =
            affine_group_elements(m(3)).map(|(_, p)| p.images().to_vec()).collect();
        assert_eq!(perms.len(), 6);
    }

    #[test]
    fn s3_cycle_index() {
        let poly = cycle_index_affine(m(3));
        let expect: BTreeMap<_, _> = [
            (ty(&[(1, 3)]), BigUint::from(1u32)),
            (ty(&[(1, 1), (2, 1)]), BigUint::from(3u32)),
            (ty(&[(3, 1)]), BigUint::from(2u32)),
        ]
        .into();
        assert_eq!(poly.terms(), &expect);
        assert_eq!(poly.to_text(), "1/6 * [ 3·x1^1·x2^1 + 1·x1^3 + 2·x3^1 ]");
    }

    #[test]
    fn aff9_term_counts() {
        let poly = cycle_index_affine(m(9));
        let counts = [
            (ty(&[(1, 9)]), 1u32),
            (ty(&[(3, 3)]), 2),
            (ty(&[(1, 1), (2, 4)]), 9),
            (ty(&[(1, 1), (2, 1), (6, 1)]), 18),
            (ty(&[(1, 3), (3, 2)]), 6),
            (ty(&[(9, 1)]), 18),
        ];
        assert_eq!(poly.terms().len(), counts.len());
        for (t, c) in counts {
            assert_eq!(poly.count_of(&t), BigUint::from(c), "{t}");
        }
    }

    #[test]
    fn evaluations() {
        assert_eq!(evaluate_at_two(&cycle_index_affine(m(3))).unwrap(), BigUint::from(4u32));
        assert_eq!(evaluate_at_two(&cycle_index_affine(m(9))).unwrap(), BigUint::from(22u32));
        assert_eq!(evaluate_at_two(&cycle_index_affine(m(25))).unwrap(), BigUint::from(67562u32));
        for n in 2..=50 {
            assert!(evaluate_at(&cycle_index_affine(m(n)), 1).is_one());
        }
    }

    #[test]
    fn per_variable_evaluation() {
        // x_l = l over S_3: (1·1 + 3·1·2 + 2·3) / 6 = 13/6
        let v = evaluate_with(&cycle_index_affine(m(3)), BigInt::from);
        assert_eq!(v, BigRational::new(13.into(), 6.into()));
    }

    #[test]
    fn itp_examples() {
        assert_eq!(itp_count(m(9)).unwrap(), BigUint::from(11u32));
        assert_eq!(itp_count(m(25)).unwrap(), BigUint::from(33781u32));
        assert_eq!(itp_count(m(5)).unwrap(), BigUint::from(3u32));
        assert_eq!(itp_count(m(10)), Err(Error::EvenModulus(10)));
    }

    #[test]
    fn inexact_division_detected() {
        let mut terms = BTreeMap::new();
        terms.insert(ty(&[(1, 2)]), BigUint::from(1u32));
        terms.insert(ty(&[(2, 1)]), BigUint::from(2u32));
        let poly = CycleIndexPoly::new(2, BigUint::from(3u32), terms).unwrap();
        // (4 + 2·2) / 3 is not an integer
        assert!(matches!(evaluate_at_two(&poly), Err(Error::InexactDivision(_))));
    }

    #[test]
    fn rejects_inconsistent_poly() {
        let mut terms = BTreeMap::new();
        terms.insert(ty(&[(1, 2)]), BigUint::from(1u32));
        assert!(CycleIndexPoly::new(2, BigUint::from(2u32), terms.clone()).is_err());
        assert!(CycleIndexPoly::new(3, BigUint::from(1u32), terms).is_err());
    }

    #[test]
    fn parallel_enumeration_matches() {
        for n in [9, 15, 25, 27] {
            assert_eq!(cycle_index_affine(m(n)), cycle_index_affine_parallel(m(n)));
        }
    }

    #[test]
    fn json_form() {
        let poly = cycle_index_affine(m(3));
        let json = poly.to_json();
        assert_eq!(
            json,
            r#"{"n":3,"order":"6","terms":[{"type":[[1,1],[2,1]],"count":"3"},{"type":[[1,3]],"count":"1"},{"type":[[3,1]],"count":"2"}]}"#
        );
        let back = CycleIndexPoly::from_json(&json).unwrap();
        assert_eq!(back, poly);
        assert_eq!(back.to_json(), json);
    }
}
