//! Isotopy classes of the right loops `Z_n^A` via affine orbits.
//!
//! For nonempty `A`, the class of `Z_n^A` is
//!
//! ```text
//! χ_A = { f⁻¹(A)        : f = (λ, t′) ∈ Aff(1, n), t′ ∉ A }
//!     ∪ { Z_n \ f⁻¹(A)  : f = (λ, t′) ∈ Aff(1, n), t′ ∈ A }
//! ```
//!
//! and `Z_n^∅ = (Z_n, +)` is alone in its class. [`classify_all`] sweeps all
//! `2^{n−1}` subsets and assigns class ids in ascending order of each class's
//! smallest mask.

use std::collections::BTreeSet;
use std::sync::atomic::{AtomicU32, Ordering};
use std::sync::Mutex;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::modular::{affine_maps, affine_preimage, Modulus};
use crate::dihedral::{build_transversal, induced_operation, OrderTwoSubgroup};
use crate::right_loop::zna_subset_of;
use crate::subset::SubsetA;

/// Default largest `n` accepted by [`classify_all`].
pub const DEFAULT_CLASSIFY_BOUND: u64 = 25;

/// Masks are held in a `u64`, with one `u32` class slot per subset.
const HARD_CLASSIFY_LIMIT: u64 = 33;

const UNASSIGNED: u32 = u32::MAX;

/// `χ_A` together with the subset it was computed from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChiSet {
    pub base: SubsetA,
    pub members: BTreeSet<SubsetA>,
}

impl ChiSet {
    pub fn contains(&self, c: &SubsetA) -> bool {
        self.members.contains(c)
    }
}

/// `χ_A`; empty when `A = ∅`.
pub fn chi(n: Modulus, a: &SubsetA) -> Result<ChiSet> {
    n.require_odd()?;
    if a.modulus() != n {
        return Err(Error::ModulusMismatch { left: n.get(), right: a.modulus().get() });
    }
    let mut members = BTreeSet::new();
    if !a.is_empty() {
        for f in affine_maps(n) {
            let pre = affine_preimage(f, a.as_set())?;
            let member = if a.contains(f.u().value()) { pre.complement() } else { pre };
            members.insert(SubsetA::new(member).map_err(|_| {
                Error::Consistency(format!("χ member from {f} contains 0"))
            })?);
        }
    }
    Ok(ChiSet { base: *a, members })
}

/// Isotopy of `T_A` and `T_C` read off from `χ_A`.
pub fn isotopic_by_chi(n: Modulus, a: &SubsetA, c: &SubsetA) -> Result<bool> {
    if a.is_empty() && c.is_empty() {
        n.require_odd()?;
        return Ok(true);
    }
    Ok(chi(n, a)?.contains(c))
}

/// Scheduling for [`classify_all`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClassifyMode {
    /// Single-threaded ascending seed scan.
    Reference,
    /// Seeds processed concurrently; ids reconciled afterwards by smallest member.
    Parallel,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ClassifyOptions {
    pub bound: u64,
    pub mode: ClassifyMode,
}

impl Default for ClassifyOptions {
    fn default() -> Self {
        ClassifyOptions { bound: DEFAULT_CLASSIFY_BOUND, mode: ClassifyMode::Reference }
    }
}

/// Every subset of `Z_n \ {0}` labelled with its isotopy class.
///
/// Subsets are indexed by `mask >> 1`; ids are contiguous from 0 and
/// `reps[id]` is the smallest mask in the class.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassPartition {
    n: Modulus,
    class_of: Vec<u32>,
    reps: Vec<u64>,
}

impl ClassPartition {
    pub fn modulus(&self) -> Modulus {
        self.n
    }

    pub fn count(&self) -> usize {
        self.reps.len()
    }

    pub fn class_of(&self, a: &SubsetA) -> usize {
        self.class_of[(a.mask() >> 1) as usize] as usize
    }

    pub fn rep(&self, id: usize) -> Result<SubsetA> {
        let mask = *self.reps.get(id).ok_or(Error::UnknownClass(id))?;
        SubsetA::from_mask(self.n, mask as u128)
    }

    pub fn reps(&self) -> impl Iterator<Item = SubsetA> + '_ {
        self.reps.iter().map(|&m| SubsetA::from_mask(self.n, m as u128).expect("valid rep"))
    }

    /// Members of class `id` in ascending mask order.
    pub fn class_members(&self, id: usize) -> Result<Vec<SubsetA>> {
        if id >= self.count() {
            return Err(Error::UnknownClass(id));
        }
        Ok(self
            .class_of
            .iter()
            .enumerate()
            .filter(|&(_, &c)| c as usize == id)
            .map(|(i, _)| SubsetA::from_mask(self.n, (i as u128) << 1).expect("valid mask"))
            .collect())
    }

    /// Members of every class at once, indexed by id.
    pub fn all_members(&self) -> Vec<Vec<SubsetA>> {
        let mut out = vec![Vec::new(); self.count()];
        for (i, &c) in self.class_of.iter().enumerate() {
            out[c as usize].push(SubsetA::from_mask(self.n, (i as u128) << 1).expect("valid mask"));
        }
        out
    }

    /// Class sizes indexed by id.
    pub fn class_sizes(&self) -> Vec<u64> {
        let mut sizes = vec![0u64; self.count()];
        for &c in &self.class_of {
            sizes[c as usize] += 1;
        }
        sizes
    }
}

/// `Aff(1, n)` laid out for the mask sweep: per map, the inverse image of
/// every point and the translation part `t′ = f(0)`.
struct AffineTable {
    inverse_images: Vec<Vec<u8>>,
    translations: Vec<u32>,
    full: u64,
}

impl AffineTable {
    fn new(n: Modulus) -> Self {
        let maps = affine_maps(n);
        let mut inverse_images = Vec::with_capacity(maps.len());
        let mut translations = Vec::with_capacity(maps.len());
        for f in maps {
            let mut inv = vec![0u8; n.as_usize()];
            for x in 0..n.get() {
                inv[f.apply_raw(x) as usize] = x as u8;
            }
            inverse_images.push(inv);
            translations.push(f.u().value() as u32);
        }
        AffineTable { inverse_images, translations, full: (1u64 << n.get()) - 1 }
    }

    /// Calls `visit` on every member of `χ_A` (with repetition).
    #[inline]
    fn for_each_member(&self, a: u64, mut visit: impl FnMut(u64)) {
        for (inv, &t) in self.inverse_images.iter().zip(&self.translations) {
            let mut pre = 0u64;
            let mut rest = a;
            while rest != 0 {
                pre |= 1 << inv[rest.trailing_zeros() as usize];
                rest &= rest - 1;
            }
            visit(if a >> t & 1 == 1 { !pre & self.full } else { pre });
        }
    }
}

fn check_classify_input(n: Modulus, bound: u64) -> Result<()> {
    n.require_odd()?;
    if n.get() > bound {
        return Err(Error::AboveBound { n: n.get(), bound });
    }
    if n.get() > HARD_CLASSIFY_LIMIT {
        return Err(Error::AboveBound { n: n.get(), bound: HARD_CLASSIFY_LIMIT });
    }
    Ok(())
}

/// Partitions all subsets of `Z_n \ {0}` into isotopy classes.
///
/// Memory is one `u32` per subset (`2^{n+1}` bytes; 64 MiB at `n = 25`).
/// Both modes fail with [`Error::Consistency`] if some `χ_A` overlaps an
/// already-built class without coinciding with it.
pub fn classify_all(n: Modulus, options: ClassifyOptions) -> Result<ClassPartition> {
    check_classify_input(n, options.bound)?;
    match options.mode {
        ClassifyMode::Reference => classify_reference(n),
        ClassifyMode::Parallel => classify_parallel(n),
    }
}

fn classify_reference(n: Modulus) -> Result<ClassPartition> {
    let table = AffineTable::new(n);
    let len = 1usize << (n.get() - 1);
    let mut class_of = vec![UNASSIGNED; len];
    let mut reps = Vec::new();

    class_of[0] = 0;
    reps.push(0);
    for seed in 1..len {
        if class_of[seed] != UNASSIGNED {
            continue;
        }
        let id = reps.len() as u32;
        let a = (seed as u64) << 1;
        reps.push(a);
        let mut clash = None;
        table.for_each_member(a, |c| {
            let slot = &mut class_of[(c >> 1) as usize];
            if *slot == UNASSIGNED {
                *slot = id;
            } else if *slot != id && clash.is_none() {
                clash = Some((c, *slot));
            }
        });
        if let Some((c, other)) = clash {
            return Err(Error::Consistency(format!(
                "χ of mask {a:#b} reaches mask {c:#b} already in class {other}"
            )));
        }
    }
    Ok(ClassPartition { n, class_of, reps })
}

fn classify_parallel(n: Modulus) -> Result<ClassPartition> {
    let table = AffineTable::new(n);
    let len = 1usize << (n.get() - 1);
    let rep_of: Vec<AtomicU32> = (0..len).map(|_| AtomicU32::new(UNASSIGNED)).collect();
    rep_of[0].store(0, Ordering::Relaxed);
    let clash: Mutex<Option<String>> = Mutex::new(None);

    (1..len).into_par_iter().with_min_len(1 << 10).for_each(|seed| {
        if rep_of[seed].load(Ordering::Relaxed) != UNASSIGNED {
            return;
        }
        let a = (seed as u64) << 1;
        let mut members = Vec::with_capacity(table.translations.len());
        table.for_each_member(a, |c| members.push((c >> 1) as u32));
        let rep = *members.iter().min().expect("χ_A is nonempty");
        for &c in &members {
            if let Err(existing) =
                rep_of[c as usize].compare_exchange(UNASSIGNED, rep, Ordering::Relaxed, Ordering::Relaxed)
            {
                if existing != rep {
                    clash.lock().unwrap().get_or_insert_with(|| {
                        format!("mask {:#b} claimed by classes with reps {existing} and {rep}", (c as u64) << 1)
                    });
                }
            }
        }
    });
    if let Some(msg) = clash.into_inner().unwrap() {
        return Err(Error::Consistency(msg));
    }

    // Reps never exceed their members, so an ascending pass can relabel in place.
    let mut class_of: Vec<u32> = rep_of.into_iter().map(AtomicU32::into_inner).collect();
    let mut reps = Vec::new();
    for i in 0..len {
        let r = class_of[i] as usize;
        if r == i {
            class_of[i] = reps.len() as u32;
            reps.push((i as u64) << 1);
        } else if r < i {
            class_of[i] = class_of[r];
        } else {
            return Err(Error::Consistency(format!("mask index {i} has larger rep {r}")));
        }
    }
    Ok(ClassPartition { n, class_of, reps })
}

/// Classification driven by the induced transversal tables of `H = {1, a b^k}`.
///
/// Each transversal table is identified back to a subset before the affine
/// sweep, so a mismatch between the dihedral construction and `Z_n^A`
/// surfaces as an error.
pub fn classify_for_subgroup(n: Modulus, k: u64, options: ClassifyOptions) -> Result<ClassPartition> {
    check_classify_input(n, options.bound)?;
    let partition = classify_all(n, options)?;
    let h = OrderTwoSubgroup::new(n.residue(k % n.get())?);
    let mut class_of = vec![UNASSIGNED; partition.class_of.len()];
    let mut reps: Vec<Option<u64>> = vec![None; partition.count()];
    for a in SubsetA::all(n)? {
        let table = induced_operation(&build_transversal(n, &a, h)?, h)?;
        let recovered = zna_subset_of(&table).ok_or_else(|| {
            Error::Consistency(format!("transversal table of {a} is not of the form Z_n^A"))
        })?;
        let id = partition.class_of(&recovered) as u32;
        class_of[(a.mask() >> 1) as usize] = id;
        reps[id as usize].get_or_insert(a.mask() as u64);
    }
    let reps = reps
        .into_iter()
        .map(|r| r.ok_or_else(|| Error::Consistency("empty class".into())))
        .collect::<Result<Vec<_>>>()?;
    Ok(ClassPartition { n, class_of, reps })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(n: u64) -> Modulus {
        Modulus::new(n).unwrap()
    }

    fn sub(n: u64, e: &[u64]) -> SubsetA {
        SubsetA::from_elements(m(n), e.iter().copied()).unwrap()
    }

    #[test]
    fn chi_n3() {
        let expect: BTreeSet<_> = [sub(3, &[1]), sub(3, &[2]), sub(3, &[1, 2])].into();
        assert_eq!(chi(m(3), &sub(3, &[1])).unwrap().members, expect);
        assert_eq!(chi(m(3), &sub(3, &[1, 2])).unwrap().members, expect);
        assert!(chi(m(3), &sub(3, &[])).unwrap().members.is_empty());
    }

    #[test]
    fn chi_rejects_even() {
        assert_eq!(chi(m(4), &sub(4, &[1])), Err(Error::EvenModulus(4)));
    }

    #[test]
    fn isotopic_by_chi_examples() {
        assert!(isotopic_by_chi(m(3), &sub(3, &[]), &sub(3, &[])).unwrap());
        assert!(!isotopic_by_chi(m(3), &sub(3, &[1]), &sub(3, &[])).unwrap());
        assert!(!isotopic_by_chi(m(3), &sub(3, &[]), &sub(3, &[1])).unwrap());
        for a in SubsetA::all(m(9)).unwrap().filter(|a| !a.is_empty()) {
            assert!(isotopic_by_chi(m(9), &a, &a).unwrap());
        }
    }

    #[test]
    fn small_partitions() {
        let p = classify_all(m(3), ClassifyOptions::default()).unwrap();
        assert_eq!(p.count(), 2);
        assert_eq!(p.class_members(0).unwrap(), vec![sub(3, &[])]);
        assert_eq!(p.class_members(1).unwrap(), vec![sub(3, &[1]), sub(3, &[2]), sub(3, &[1, 2])]);
        assert_eq!(p.class_sizes(), vec![1, 3]);
        assert_eq!(p.class_members(2), Err(Error::UnknownClass(2)));

        let p = classify_all(m(5), ClassifyOptions::default()).unwrap();
        assert_eq!(p.count(), 3);
        let sizes = p.class_sizes();
        assert_eq!(sizes[0], 1);
        assert_eq!(sizes[1] + sizes[2], 15);
    }

    #[test]
    fn partition_invariants() {
        for n in [3u64, 5, 7, 9, 11] {
            let p = classify_all(m(n), ClassifyOptions::default()).unwrap();
            assert_eq!(p.class_sizes().iter().sum::<u64>(), 1 << (n - 1));
            for a in SubsetA::all(m(n)).unwrap() {
                let id = p.class_of(&a);
                assert!(p.rep(id).unwrap().mask() <= a.mask());
            }
            assert!(p.reps.windows(2).all(|w| w[0] < w[1]));
        }
    }

    #[test]
    fn classes_are_chi_sets() {
        for n in [3u64, 5, 7, 9] {
            let p = classify_all(m(n), ClassifyOptions::default()).unwrap();
            for (id, members) in p.all_members().into_iter().enumerate() {
                let rep = p.rep(id).unwrap();
                if rep.is_empty() {
                    assert_eq!(members, vec![rep]);
                } else {
                    let chi_set: Vec<_> = chi(m(n), &rep).unwrap().members.into_iter().collect();
                    assert_eq!(members, chi_set);
                }
            }
        }
    }

    #[test]
    fn parallel_matches_reference() {
        for n in [3u64, 5, 7, 9, 11, 13, 15] {
            let r = classify_all(m(n), ClassifyOptions::default()).unwrap();
            let p = classify_all(m(n), ClassifyOptions { mode: ClassifyMode::Parallel, ..Default::default() })
                .unwrap();
            assert_eq!(r, p);
        }
    }

    #[test]
    fn classify_input_errors() {
        assert_eq!(classify_all(m(8), ClassifyOptions::default()), Err(Error::EvenModulus(8)));
        assert_eq!(
            classify_all(m(27), ClassifyOptions::default()),
            Err(Error::AboveBound { n: 27, bound: 25 })
        );
    }

    #[test]
    fn subgroup_choice_does_not_matter() {
        for n in [3u64, 5, 7, 9] {
            let base = classify_all(m(n), ClassifyOptions::default()).unwrap();
            for k in 0..n {
                assert_eq!(classify_for_subgroup(m(n), k, ClassifyOptions::default()).unwrap(), base);
            }
        }
    }
}
