//! `Aff(1, p²)` for an odd prime `p`: the closed-form cycle index, the
//! fixed-point lemmas behind it, and the split of the group into the five
//! families `S0`–`S4`.
//!
//! With `J = pZ_{p²}`:
//!
//! | family | elements `x ↦ νx + t′`            | cycle type                                   |
//! |--------|-----------------------------------|----------------------------------------------|
//! | S0     | identity                          | `x1^{p²}`                                    |
//! | S1     | `ν = 1`, `t′ ∈ J \ {0}`           | `x_p^p`                                      |
//! | S2     | `ν ∉ 1 + J`, order `t ∣ p−1`      | `x1 · x_t^{(p²−1)/t}`                        |
//! | S2     | `ν ∉ 1 + J`, order `tp`           | `x1 · x_{tp}^{(p−1)/t} · x_t^{(p−1)/t}`      |
//! | S3     | `ν ∈ 1 + J \ {1}`, `t′ ∈ J`       | `x1^p · x_p^{p−1}`                           |
//! | S4     | `ν ∈ 1 + J`, `t′` a unit          | `x_{p²}`                                     |

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigUint;
use num_traits::One;

use crate::error::{Error, Result};
use crate::modular::{divisors, euler_phi, inv_mod, multiplicative_order, AffineMap, MaximalIdealJ, Modulus};

use super::{CycleIndexPoly, CycleType};

/// Default largest prime for the exhaustive lemma checks.
pub const DEFAULT_LEMMA_BOUND: u64 = 7;

/// Closed-form cycle index of `Aff(1, p²)`.
pub fn closed_form_p2(p: u64) -> Result<CycleIndexPoly> {
    let j = MaximalIdealJ::new(p)?;
    let p2 = p * p;
    let big = |x: u64| BigUint::from(x);
    let mut terms: BTreeMap<CycleType, BigUint> = BTreeMap::new();
    let mut add = |t: CycleType, c: BigUint| *terms.entry(t).or_default() += c;

    add(CycleType::from_pairs([(1, p2)]), BigUint::one());
    add(CycleType::from_pairs([(p, p)]), big(p - 1));
    for t in divisors(p - 1)?.into_iter().filter(|&t| t != 1) {
        add(CycleType::from_pairs([(1, 1), (t, (p2 - 1) / t)]), big(p2 * euler_phi(t)?));
        add(
            CycleType::from_pairs([(1, 1), (t * p, (p - 1) / t), (t, (p - 1) / t)]),
            big(p2 * euler_phi(t * p)?),
        );
    }
    add(CycleType::from_pairs([(1, p), (p, p - 1)]), big(p * (p - 1)));
    add(CycleType::from_pairs([(p2, 1)]), big(p * euler_phi(p2)?));

    let order = big(p2 * euler_phi(p2)?);
    debug_assert_eq!(j.ring().get(), p2);
    CycleIndexPoly::new(p2, order, terms)
}

/// The six summands of the closed form evaluated at `x_l = value`, in the
/// order S0, S1, S2 (order `t`, summed over `t`), S2 (order `tp`), S3, S4.
pub fn closed_form_summands_at(p: u64, value: u64) -> Result<[BigUint; 6]> {
    MaximalIdealJ::new(p)?;
    let p2 = p * p;
    let v = BigUint::from(value);
    let pow = |e: u64| num_traits::pow(v.clone(), e as usize);
    let mut order_t = BigUint::default();
    let mut order_tp = BigUint::default();
    for t in divisors(p - 1)?.into_iter().filter(|&t| t != 1) {
        order_t += BigUint::from(p2 * euler_phi(t)?) * pow(1 + (p2 - 1) / t);
        order_tp += BigUint::from(p2 * euler_phi(t * p)?) * pow(1 + 2 * (p - 1) / t);
    }
    Ok([
        pow(p2),
        BigUint::from(p - 1) * pow(p),
        order_t,
        order_tp,
        BigUint::from(p * (p - 1)) * pow(p + p - 1),
        BigUint::from(p * euler_phi(p2)?) * pow(1),
    ])
}

/// `{x : f(x) = x}`, ascending.
pub fn fixed_points(f: AffineMap) -> Vec<u64> {
    (0..f.modulus().get()).filter(|&x| f.apply_raw(x) == x).collect()
}

/// Outcome of an exhaustive lemma check.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct LemmaVerdict {
    pub cases: usize,
    pub counterexamples: Vec<String>,
}

impl LemmaVerdict {
    pub fn passed(&self) -> bool {
        self.counterexamples.is_empty()
    }
}

fn lemma_prime(p: u64, bound: u64) -> Result<MaximalIdealJ> {
    let j = MaximalIdealJ::new(p)?;
    if p > bound {
        return Err(Error::AboveBound { n: p, bound });
    }
    Ok(j)
}

/// For every unit `ν ∉ 1 + J` of `Z_{p²}`: `νx ≡ x` exactly when `x ≡ 0`.
pub fn lemma31_check(p: u64, bound: u64) -> Result<LemmaVerdict> {
    let j = lemma_prime(p, bound)?;
    let ring = j.ring();
    let mut verdict = LemmaVerdict::default();
    for nu in crate::modular::units(ring) {
        if j.contains(nu.value() + ring.get() - 1) {
            continue;
        }
        verdict.cases += 1;
        let f = AffineMap::new(nu, ring.zero())?;
        let fixed = fixed_points(f);
        if fixed != [0] {
            verdict.counterexamples.push(format!("ν={nu}: fixed points {fixed:?}"));
        }
    }
    Ok(verdict)
}

/// For `ν = 1 + kp` (`k ≠ 0`) and `t′ = lp`: the fixed points of
/// `x ↦ νx + t′` form the coset `−k′l + J`, where `k′k ≡ 1 (mod p)`.
pub fn lemma32_check(p: u64, bound: u64) -> Result<LemmaVerdict> {
    let j = lemma_prime(p, bound)?;
    let ring = j.ring();
    let mut verdict = LemmaVerdict::default();
    for k in 1..p {
        let k_inv = inv_mod(k, p).expect("p is prime");
        for l in 0..p {
            verdict.cases += 1;
            let f = AffineMap::new(ring.residue(1 + k * p)?, ring.residue(l * p)?)?;
            let offset = ring.reduce(-((k_inv * l) as i128)).value();
            let expected = j.coset(offset);
            let fixed = fixed_points(f);
            if fixed != expected {
                verdict
                    .counterexamples
                    .push(format!("k={k}, l={l}: fixed {fixed:?}, expected {expected:?}"));
            }
        }
    }
    Ok(verdict)
}

/// Which of the five families an element of `Aff(1, p²)` belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum AffineClassLabel {
    S0,
    S1,
    /// `t` divides `p − 1`; the element has order `t`, or `tp` when `with_p`.
    S2 { t: u64, with_p: bool },
    S3,
    S4,
}

impl fmt::Display for AffineClassLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AffineClassLabel::S0 => f.write_str("S0"),
            AffineClassLabel::S1 => f.write_str("S1"),
            AffineClassLabel::S2 { t, with_p: false } => write!(f, "S2(order {t})"),
            AffineClassLabel::S2 { t, with_p: true } => write!(f, "S2(order {t}p)"),
            AffineClassLabel::S3 => f.write_str("S3"),
            AffineClassLabel::S4 => f.write_str("S4"),
        }
    }
}

/// Labels `f` by family membership alone and returns the cycle type that
/// family predicts, without looking at the permutation itself.
pub fn classify_affine_element_p2(p: u64, f: AffineMap) -> Result<(AffineClassLabel, CycleType)> {
    let j = MaximalIdealJ::new(p)?;
    let ring: Modulus = j.ring();
    if f.modulus() != ring {
        return Err(Error::ModulusMismatch { left: ring.get(), right: f.modulus().get() });
    }
    let p2 = p * p;
    let nu = f.nu().value();
    let t_prime = f.u().value();
    let nu_in_1j = j.contains(nu + p2 - 1);

    let labelled = if nu == 1 && t_prime == 0 {
        (AffineClassLabel::S0, CycleType::from_pairs([(1, p2)]))
    } else if nu == 1 && j.contains(t_prime) {
        (AffineClassLabel::S1, CycleType::from_pairs([(p, p)]))
    } else if !nu_in_1j {
        let order = multiplicative_order(f.nu())?;
        if (p - 1).is_multiple_of(order) {
            let t = order;
            (AffineClassLabel::S2 { t, with_p: false }, CycleType::from_pairs([(1, 1), (t, (p2 - 1) / t)]))
        } else {
            let t = order / p;
            (
                AffineClassLabel::S2 { t, with_p: true },
                CycleType::from_pairs([(1, 1), (t * p, (p - 1) / t), (t, (p - 1) / t)]),
            )
        }
    } else if j.contains(t_prime) {
        (AffineClassLabel::S3, CycleType::from_pairs([(1, p), (p, p - 1)]))
    } else {
        (AffineClassLabel::S4, CycleType::from_pairs([(p2, 1)]))
    };
    Ok(labelled)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cycle_index::{cycle_index_affine, cycle_type, evaluate_at_two};
    use crate::modular::affine_maps;
    use crate::permutation::Permutation;

    fn map(n: u64, nu: i128, u: i128) -> AffineMap {
        AffineMap::from_raw(nu, u, Modulus::new(n).unwrap()).unwrap()
    }

    #[test]
    fn closed_form_matches_enumeration() {
        for p in [3, 5, 7, 11] {
            assert_eq!(closed_form_p2(p).unwrap(), cycle_index_affine(Modulus::new(p * p).unwrap()));
        }
    }

    #[test]
    fn closed_form_rejects_bad_p() {
        assert_eq!(closed_form_p2(9), Err(Error::NotOddPrime(9)));
        assert_eq!(closed_form_p2(2), Err(Error::NotOddPrime(2)));
    }

    #[test]
    fn summands_p3() {
        let s = closed_form_summands_at(3, 2).unwrap();
        let expect = [512u32, 16, 288, 144, 192, 36].map(BigUint::from);
        assert_eq!(s, expect);
        let total: BigUint = s.iter().sum();
        assert_eq!(total, BigUint::from(1188u32));
        assert_eq!(evaluate_at_two(&closed_form_p2(3).unwrap()).unwrap(), BigUint::from(22u32));
    }

    #[test]
    fn summands_p5() {
        let s = closed_form_summands_at(5, 2).unwrap();
        let two = |e: u32| BigUint::from(2u32).pow(e);
        let expect = [
            two(25),
            two(7),
            BigUint::from(25u32) * (two(13) + two(8)),
            BigUint::from(25u32) * (two(7) + two(6)),
            BigUint::from(5u32) * two(11),
            BigUint::from(25u32) * two(3),
        ];
        assert_eq!(s, expect);
        let total: BigUint = s.iter().sum();
        assert_eq!(total, BigUint::from(67562u32 * 500));
    }

    #[test]
    fn fixed_point_examples() {
        assert_eq!(fixed_points(map(9, 1, 0)), (0..9).collect::<Vec<_>>());
        assert_eq!(fixed_points(map(9, 2, 0)), vec![0]);
        assert_eq!(fixed_points(map(9, 4, 3)), vec![2, 5, 8]);
    }

    #[test]
    fn lemmas_hold() {
        for p in [3, 5, 7] {
            let v = lemma31_check(p, DEFAULT_LEMMA_BOUND).unwrap();
            assert!(v.passed(), "{v:?}");
            assert_eq!(v.cases as u64, p * (p - 1) - p);
            let v = lemma32_check(p, DEFAULT_LEMMA_BOUND).unwrap();
            assert!(v.passed(), "{v:?}");
            assert_eq!(v.cases as u64, (p - 1) * p);
        }
        assert!(lemma31_check(11, DEFAULT_LEMMA_BOUND).is_err());
        assert!(lemma31_check(9, 100).is_err());
    }

    #[test]
    fn label_examples() {
        let (l, t) = classify_affine_element_p2(3, map(9, 1, 3)).unwrap();
        assert_eq!((l, t), (AffineClassLabel::S1, CycleType::from_pairs([(3, 3)])));
        let (l, t) = classify_affine_element_p2(3, map(9, 4, 0)).unwrap();
        assert_eq!((l, t), (AffineClassLabel::S3, CycleType::from_pairs([(1, 3), (3, 2)])));
        let (l, t) = classify_affine_element_p2(3, map(9, 4, 1)).unwrap();
        assert_eq!((l, t), (AffineClassLabel::S4, CycleType::from_pairs([(9, 1)])));
        let (l, _) = classify_affine_element_p2(3, map(9, 2, 5)).unwrap();
        assert_eq!(l, AffineClassLabel::S2 { t: 2, with_p: true });
        assert!(classify_affine_element_p2(3, map(25, 1, 0)).is_err());
    }

    #[test]
    fn predictions_match_permutations() {
        for p in [3u64, 5, 7] {
            let ring = Modulus::new(p * p).unwrap();
            let mut family_sizes: BTreeMap<&str, u64> = BTreeMap::new();
            for f in affine_maps(ring) {
                let (label, predicted) = classify_affine_element_p2(p, f).unwrap();
                let actual = cycle_type(&Permutation::new(f.images()).unwrap());
                assert_eq!(predicted, actual, "p={p} f={f} {label}");
                let key = match label {
                    AffineClassLabel::S0 => "S0",
                    AffineClassLabel::S1 => "S1",
                    AffineClassLabel::S2 { .. } => "S2",
                    AffineClassLabel::S3 => "S3",
                    AffineClassLabel::S4 => "S4",
                };
                *family_sizes.entry(key).or_default() += 1;
            }
            let phi = p * (p - 1);
            assert_eq!(family_sizes["S0"], 1);
            assert_eq!(family_sizes["S1"], p - 1);
            assert_eq!(family_sizes["S2"], (phi - p) * p * p);
            assert_eq!(family_sizes["S3"], (p - 1) * p);
            assert_eq!(family_sizes["S4"], p * phi);
        }
    }
}
