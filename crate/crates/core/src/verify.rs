//! Self-checks behind the `verify` command.
//!
//! Each `check_*` function recomputes one family of claims from scratch and
//! reports pass/fail with a counterexample on failure. [`run_default`] runs
//! the full schedule; [`run_for_modulus`] runs the checks that make sense at
//! one chosen `n`.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::time::{Duration, Instant};

use num_bigint::BigUint;
use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::classify::{chi, classify_all, classify_for_subgroup, isotopic_by_chi, ClassifyOptions};
use crate::cycle_index::{
    classify_affine_element_p2, closed_form_p2, closed_form_summands_at, cycle_index_affine, cycle_type,
    evaluate_at, evaluate_at_two, itp_count, itp_count_from, lemma31_check, lemma32_check, DEFAULT_LEMMA_BOUND,
};
use crate::dihedral::{verify_identification, OrderTwoSubgroup};
use crate::error::Result;
use crate::modular::{affine_maps, Modulus};
use crate::permutation::Permutation;
use crate::right_loop::{
    build_zna, check_right_loop, isotopic_bruteforce, isotopic_naive, left_nonsingular_elements,
    principal_isotope, CayleyTable, OracleBounds,
};
use crate::subset::SubsetA;

const SEED: u64 = 0x5eed_20dd;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
}

#[derive(Debug, Clone)]
pub struct CheckResult {
    pub name: String,
    pub status: Status,
    pub elapsed: Duration,
    pub counterexample: Option<String>,
}

impl CheckResult {
    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

impl fmt::Display for CheckResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = if self.passed() { "PASS" } else { "FAIL" };
        write!(f, "{tag}  {:<60} {:>9.3}s", self.name, self.elapsed.as_secs_f64())?;
        if let Some(c) = &self.counterexample {
            write!(f, "\n      counterexample: {c}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Default)]
pub struct VerifyReport {
    pub checks: Vec<CheckResult>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(CheckResult::passed)
    }
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            writeln!(f, "{c}")?;
        }
        let failed = self.checks.iter().filter(|c| !c.passed()).count();
        write!(f, "{} checks, {} failed", self.checks.len(), failed)
    }
}

#[derive(Debug, Clone, Copy)]
#[derive(Default)]
pub struct VerifyConfig {
    pub classify: ClassifyOptions,
    pub bounds: OracleBounds,
    pub subgroup_k: u64,
}


/// Runs `body`, timing it. `Ok(None)` is a pass, `Ok(Some(msg))` a failure
/// with counterexample, and an error is a failure too.
pub fn timed(name: impl Into<String>, body: impl FnOnce() -> Result<Option<String>>) -> CheckResult {
    let start = Instant::now();
    let outcome = body();
    let elapsed = start.elapsed();
    let (status, counterexample) = match outcome {
        Ok(None) => (Status::Pass, None),
        Ok(Some(msg)) => (Status::Fail, Some(msg)),
        Err(e) => (Status::Fail, Some(format!("error: {e}"))),
    };
    CheckResult { name: name.into(), status, elapsed, counterexample }
}

fn m(n: u64) -> Modulus {
    Modulus::new(n).expect("schedule moduli are ≥ 2")
}

fn mismatch<T: PartialEq + fmt::Debug>(what: &str, got: T, want: T) -> Option<String> {
    (got != want).then(|| format!("{what}: got {got:?}, expected {want:?}"))
}

/// Class count from the affine sweep and from the cycle index, both equal to `expected`.
pub fn check_known_count(n: u64, expected: u64, config: &VerifyConfig) -> CheckResult {
    timed(format!("n={n} classes = {expected} (sweep and cycle index)"), || {
        let swept = classify_all(Modulus::new_odd(n)?, config.classify)?.count() as u64;
        let counted = itp_count(m(n))?;
        Ok(mismatch("sweep", swept, expected).or(mismatch("cycle index", counted, BigUint::from(expected))))
    })
}

/// Orbit count on subsets at `x_l = 2`.
pub fn check_orbit_count(n: u64, expected: u64) -> CheckResult {
    timed(format!("Aff(1,{n}) cycle index at 2 = {expected}"), || {
        Ok(mismatch("value", evaluate_at_two(&cycle_index_affine(m(n)))?, BigUint::from(expected)))
    })
}

/// Closed form for `Aff(1, p²)` against enumeration, term by term.
pub fn check_closed_form(primes: &[u64]) -> CheckResult {
    timed(format!("closed form = enumeration for Aff(1,p²), p ∈ {primes:?}"), || {
        for &p in primes {
            let closed = closed_form_p2(p)?;
            let enumerated = cycle_index_affine(m(p * p));
            if closed != enumerated {
                return Ok(Some(format!("p={p}: {closed} vs {enumerated}")));
            }
        }
        Ok(None)
    })
}

/// The p = 3 summands at 2 are 512+16+288+144+192+36 = 1188 = 54·22.
pub fn check_p3_summands() -> CheckResult {
    timed("p=3 summands 512+16+288+144+192+36 = 1188 = 54·22", || {
        let got: Vec<u64> = closed_form_summands_at(3, 2)?
            .iter()
            .map(|s| s.to_string().parse().expect("small"))
            .collect();
        let total: u64 = got.iter().sum();
        Ok(mismatch("summands", got, vec![512, 16, 288, 144, 192, 36])
            .or(mismatch("total", total, 1188))
            .or(mismatch("total / 54", (total % 54, total / 54), (0, 22))))
    })
}

/// Affine sweep count against the cycle-index count.
pub fn check_count_equality(moduli: &[u64], config: &VerifyConfig) -> CheckResult {
    timed(format!("sweep count = cycle-index count, n ∈ {moduli:?}"), || {
        for &n in moduli {
            let swept = classify_all(Modulus::new_odd(n)?, config.classify)?.count();
            let counted = itp_count(m(n))?;
            if BigUint::from(swept) != counted {
                return Ok(Some(format!("n={n}: sweep {swept}, cycle index {counted}")));
            }
        }
        Ok(None)
    })
}

fn all_tables(n: Modulus) -> Result<Vec<(SubsetA, CayleyTable)>> {
    SubsetA::all(n)?.map(|a| Ok((a, build_zna(n, &a)?))).collect()
}

/// `isotopic_by_chi` against the table-only brute-force search, all ordered pairs.
pub fn check_oracle_equivalence(moduli: &[u64], config: &VerifyConfig) -> CheckResult {
    timed(format!("χ criterion = brute-force isotopy, all pairs, n ∈ {moduli:?}"), || {
        for &n in moduli {
            let nm = Modulus::new_odd(n)?;
            let tables = all_tables(nm)?;
            let bad = tables
                .par_iter()
                .map(|(a, ta)| -> Result<Option<String>> {
                    for (c, tc) in &tables {
                        let by_chi = isotopic_by_chi(nm, a, c)?;
                        let by_tables = isotopic_bruteforce(ta, tc, config.bounds)?.is_some();
                        if by_chi != by_tables {
                            return Ok(Some(format!("n={n} A={a} C={c}: χ says {by_chi}, search says {by_tables}")));
                        }
                    }
                    Ok(None)
                })
                .collect::<Result<Vec<_>>>()?;
            if let Some(msg) = bad.into_iter().flatten().next() {
                return Ok(Some(msg));
            }
        }
        Ok(None)
    })
}

/// Naive triple search against the principal-isotope search, all ordered pairs.
pub fn check_naive_agreement(moduli: &[u64], config: &VerifyConfig) -> CheckResult {
    timed(format!("naive isotopy = brute-force isotopy, all pairs, n ∈ {moduli:?}"), || {
        for &n in moduli {
            let tables = all_tables(m(n))?;
            let bad = tables
                .par_iter()
                .map(|(a, ta)| -> Result<Option<String>> {
                    for (c, tc) in &tables {
                        let naive = isotopic_naive(ta, tc, config.bounds)?;
                        let brute = isotopic_bruteforce(ta, tc, config.bounds)?.is_some();
                        if naive != brute {
                            return Ok(Some(format!("n={n} A={a} C={c}: naive {naive}, brute {brute}")));
                        }
                    }
                    Ok(None)
                })
                .collect::<Result<Vec<_>>>()?;
            if let Some(msg) = bad.into_iter().flatten().next() {
                return Ok(Some(msg));
            }
        }
        Ok(None)
    })
}

fn random_subset(rng: &mut ChaCha8Rng, n: Modulus) -> Result<SubsetA> {
    let full = if n.get() == 128 { u128::MAX } else { (1u128 << n.get()) - 1 };
    SubsetA::from_mask(n, rng.gen::<u128>() & full & !1)
}

/// Induced transversal operation equals `Z_n^A`: every `A` for the listed
/// moduli, plus `samples` random subsets at `sampled`.
pub fn check_identification(exhaustive: &[u64], sampled: Option<(u64, usize)>, k: u64) -> CheckResult {
    let mut name = format!("T_A induced operation = Z_n^A, all A, n ∈ {exhaustive:?}");
    if let Some((n, s)) = sampled {
        name.push_str(&format!(", {s} random A at n={n}"));
    }
    if k != 0 {
        name.push_str(&format!(" (k={k})"));
    }
    timed(name, || {
        for &n in exhaustive {
            let nm = Modulus::new_odd(n)?;
            let h = OrderTwoSubgroup::new(nm.residue(k % n)?);
            for a in SubsetA::all(nm)? {
                if !verify_identification(nm, &a, h)? {
                    return Ok(Some(format!("n={n} A={a}")));
                }
            }
        }
        if let Some((n, samples)) = sampled {
            let nm = Modulus::new_odd(n)?;
            let h = OrderTwoSubgroup::new(nm.residue(k % n)?);
            let mut rng = ChaCha8Rng::seed_from_u64(SEED);
            for _ in 0..samples {
                let a = random_subset(&mut rng, nm)?;
                if !verify_identification(nm, &a, h)? {
                    return Ok(Some(format!("n={n} A={a}")));
                }
            }
        }
        Ok(None)
    })
}

/// Both fixed-point lemmas, exhaustively.
pub fn check_lemmas(primes: &[u64]) -> CheckResult {
    timed(format!("fixed-point lemmas for Z_{{p²}}, p ∈ {primes:?}"), || {
        for &p in primes {
            for (name, verdict) in [("unit", lemma31_check(p, DEFAULT_LEMMA_BOUND)?), ("coset", lemma32_check(p, DEFAULT_LEMMA_BOUND)?)] {
                if let Some(c) = verdict.counterexamples.first() {
                    return Ok(Some(format!("p={p} {name} lemma: {c}")));
                }
            }
        }
        Ok(None)
    })
}

/// Family labels S0–S4 predict the cycle type of every element of `Aff(1, p²)`.
pub fn check_family_predictions(primes: &[u64]) -> CheckResult {
    timed(format!("S0–S4 predicted cycle types = actual, p ∈ {primes:?}"), || {
        for &p in primes {
            let maps = affine_maps(m(p * p));
            let expected = p * p * crate::modular::euler_phi(p * p)?;
            if maps.len() as u64 != expected {
                return Ok(Some(format!("p={p}: {} elements, expected {expected}", maps.len())));
            }
            for f in maps {
                let (label, predicted) = classify_affine_element_p2(p, f)?;
                let actual = cycle_type(&Permutation::new(f.images())?);
                if predicted != actual {
                    return Ok(Some(format!("p={p} f={f} {label}: predicted {predicted}, actual {actual}")));
                }
            }
        }
        Ok(None)
    })
}

/// Right-loop axioms for `Z_n^A` at random `(n, A)` with `2 ≤ n ≤ max_n`.
pub fn check_random_right_loops(samples: usize, max_n: u64) -> CheckResult {
    timed(format!("Z_n^A is a right loop, {samples} random (n, A), n ≤ {max_n}"), || {
        let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 1);
        for _ in 0..samples {
            let n = m(rng.gen_range(2..=max_n));
            let a = random_subset(&mut rng, n)?;
            if let Err(v) = check_right_loop(&build_zna(n, &a)?) {
                return Ok(Some(format!("n={n} A={a}: {}", v[0])));
            }
        }
        Ok(None)
    })
}

/// Principal isotope `(α, β)` has identity `α∘β`, exhaustively.
pub fn check_isotope_identity(max_n: u64) -> CheckResult {
    timed(format!("principal isotope identity = α∘β, all n ≤ {max_n}"), || {
        for n in 2..=max_n {
            for (a, t) in all_tables(m(n))? {
                for alpha in left_nonsingular_elements(&t) {
                    for beta in 0..t.order() {
                        let iso = principal_isotope(&t, alpha, beta)?;
                        if iso.identity_element() != Some(t.get(alpha, beta)) {
                            return Ok(Some(format!("n={n} A={a} α={alpha} β={beta}")));
                        }
                    }
                }
            }
        }
        Ok(None)
    })
}

/// `C ∈ χ_A ⟺ A ∈ χ_C`, and `χ_C = χ_A` whenever `C ∈ χ_A`.
pub fn check_chi_closure(moduli: &[u64]) -> CheckResult {
    timed(format!("χ symmetric and transitive, n ∈ {moduli:?}"), || {
        for &n in moduli {
            let nm = Modulus::new_odd(n)?;
            let chis: HashMap<SubsetA, BTreeSet<SubsetA>> = SubsetA::all(nm)?
                .filter(|a| !a.is_empty())
                .map(|a| Ok((a, chi(nm, &a)?.members)))
                .collect::<Result<_>>()?;
            for (a, members) in &chis {
                if !members.contains(a) {
                    return Ok(Some(format!("n={n}: A={a} ∉ χ_A")));
                }
                for c in members {
                    if c.contains(0) {
                        return Ok(Some(format!("n={n}: χ_{a} contains {c} with 0")));
                    }
                    if chis[c] != *members {
                        return Ok(Some(format!("n={n}: C={c} ∈ χ_{a} but χ_C ≠ χ_A")));
                    }
                }
            }
            for (a, members) in &chis {
                for (c, other) in &chis {
                    if members.contains(c) != other.contains(a) {
                        return Ok(Some(format!("n={n}: asymmetric pair A={a} C={c}")));
                    }
                }
            }
        }
        Ok(None)
    })
}

/// `P(1, …, 1) = 1` for `Aff(1, n)`.
pub fn check_evaluate_at_one(max_n: u64) -> CheckResult {
    timed(format!("cycle index at 1 = 1, n ≤ {max_n}"), || {
        for n in 2..=max_n {
            let v = evaluate_at(&cycle_index_affine(m(n)), 1);
            if !v.is_one() {
                return Ok(Some(format!("n={n}: {v}")));
            }
        }
        Ok(None)
    })
}

/// Class counts through transversals of `{1, a b^k}` agree for every `k`.
pub fn check_subgroup_independence(moduli: &[u64], config: &VerifyConfig) -> CheckResult {
    timed(format!("class count independent of k, n ∈ {moduli:?}"), || {
        for &n in moduli {
            let nm = Modulus::new_odd(n)?;
            let base = classify_all(nm, config.classify)?;
            for k in 0..n {
                let other = classify_for_subgroup(nm, k, config.classify)?;
                if other != base {
                    return Ok(Some(format!("n={n} k={k}: {} vs {} classes", other.count(), base.count())));
                }
            }
        }
        Ok(None)
    })
}

/// Class count through transversals of `{1, a b^k}` at one `n`, against the cycle index.
pub fn check_subgroup_count(n: u64, k: u64, config: &VerifyConfig) -> CheckResult {
    timed(format!("n={n} k={k}: transversal class count = cycle-index count"), || {
        let nm = Modulus::new_odd(n)?;
        let swept = classify_for_subgroup(nm, k, config.classify)?.count();
        let counted = itp_count(nm)?;
        Ok((BigUint::from(swept) != counted).then(|| format!("sweep {swept}, cycle index {counted}")))
    })
}

/// Burnside count straight from per-element cycle counts, against the aggregated cycle index.
pub fn check_burnside_direct(moduli: &[u64]) -> CheckResult {
    timed(format!("direct Burnside sum = cycle index at 2, n ∈ {moduli:?}"), || {
        for &n in moduli {
            let maps = affine_maps(m(n));
            let total: BigUint = maps
                .iter()
                .map(|f| BigUint::one() << Permutation::new(f.images()).expect("bijection").cycle_count())
                .sum();
            let direct = &total / BigUint::from(maps.len());
            if direct.clone() * BigUint::from(maps.len()) != total {
                return Ok(Some(format!("n={n}: {total} not divisible by {}", maps.len())));
            }
            let poly = cycle_index_affine(m(n));
            let via_poly = evaluate_at_two(&poly)?;
            if direct != via_poly {
                return Ok(Some(format!("n={n}: direct {direct}, cycle index {via_poly}")));
            }
            if n % 2 == 1 {
                itp_count_from(&poly)?;
            }
        }
        Ok(None)
    })
}

/// The full schedule.
pub fn run_default(config: &VerifyConfig) -> VerifyReport {
    let mut checks = vec![
        check_known_count(9, 11, config),
        check_known_count(25, 33781, config),
        check_orbit_count(9, 22),
        check_orbit_count(25, 67562),
        check_closed_form(&[3, 5, 7]),
        check_p3_summands(),
        check_count_equality(&[3, 5, 7, 9, 11, 13, 15, 21, 25], config),
        check_oracle_equivalence(&[3, 5, 7], config),
        check_naive_agreement(&[3, 5], config),
        check_identification(&[3, 5, 7, 9, 11, 13, 15], Some((25, 100)), config.subgroup_k),
        check_lemmas(&[3, 5, 7]),
        check_family_predictions(&[3, 5, 7]),
        check_random_right_loops(200, 101),
        check_isotope_identity(9),
        check_chi_closure(&[3, 5, 7, 9]),
        check_evaluate_at_one(50),
        check_subgroup_independence(&[3, 5, 7, 9, 11, 13, 15], config),
    ];
    checks.push(check_burnside_direct(&(3..=25).collect::<Vec<_>>()));
    VerifyReport { checks }
}

/// Checks at a single odd `n`.
pub fn run_for_modulus(n: u64, config: &VerifyConfig) -> VerifyReport {
    let mut checks = Vec::new();
    let mut setup = timed(format!("n={n} satisfies n odd > 1"), || {
        Modulus::new_odd(n)?;
        Ok(None)
    });
    if !setup.passed() {
        setup.name = format!("n={n}: n must be odd > 1");
        return VerifyReport { checks: vec![setup] };
    }
    if n <= config.classify.bound {
        checks.push(check_count_equality(&[n], config));
        checks.push(check_subgroup_count(n, config.subgroup_k, config));
    }
    if n <= 15 {
        checks.push(check_identification(&[n], None, config.subgroup_k));
    } else {
        checks.push(check_identification(&[], Some((n, 100)), config.subgroup_k));
    }
    if n <= 7 {
        checks.push(check_oracle_equivalence(&[n], config));
        checks.push(check_chi_closure(&[n]));
    }
    checks.push(check_burnside_direct(&[n]));
    let p = (1..=n).find(|p| p * p == n);
    if let Some(p) = p.filter(|&p| crate::modular::is_prime(p)) {
        checks.push(check_closed_form(&[p]));
    }
    VerifyReport { checks }
}
