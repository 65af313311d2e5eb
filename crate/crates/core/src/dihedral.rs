//! The dihedral group `D_2n = ⟨a, b : a² = bⁿ = 1, aba = b⁻¹⟩`, its order-2
//! subgroups `H = {1, a b^k}`, and the right loops induced on normalized
//! right transversals of `H`.
//!
//! For a subset `A ⊆ Z_n \ {0}` the transversal `T_A` picks `a b^k · b^j`
//! from the coset `H b^j` when `j ∈ A` and `b^j` otherwise. The induced
//! operation `x∘y` is the unique element of `T_A` in `H·xy`; indexing the
//! transversal by `j` turns it into a table over `Z_n`.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::modular::{Modulus, Residue};
use crate::right_loop::{build_zna, CayleyTable};
use crate::subset::SubsetA;

/// `a^eps · b^j` in canonical form.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct DihedralElement {
    reflection: bool,
    j: Residue,
}

impl DihedralElement {
    pub fn new(reflection: bool, j: Residue) -> Self {
        DihedralElement { reflection, j }
    }

    pub fn identity(n: Modulus) -> Self {
        Self::new(false, n.zero())
    }

    /// `b^j`.
    pub fn rotation(j: Residue) -> Self {
        Self::new(false, j)
    }

    /// `a b^j`.
    pub fn reflection(j: Residue) -> Self {
        Self::new(true, j)
    }

    pub fn is_reflection(self) -> bool {
        self.reflection
    }

    pub fn exponent(self) -> Residue {
        self.j
    }

    pub fn modulus(self) -> Modulus {
        self.j.modulus()
    }

    pub fn is_identity(self) -> bool {
        !self.reflection && self.j.value() == 0
    }

    /// Every element of `D_2n`: rotations first, then reflections.
    pub fn all(n: Modulus) -> impl Iterator<Item = DihedralElement> {
        [false, true]
            .into_iter()
            .flat_map(move |r| n.elements().map(move |j| DihedralElement::new(r, j)))
    }
}

impl fmt::Display for DihedralElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.reflection, self.j.value()) {
            (false, 0) => f.write_str("e"),
            (false, j) => write!(f, "b^{j}"),
            (true, j) => write!(f, "a b^{j}"),
        }
    }
}

impl Serialize for DihedralElement {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("DihedralElement", 2)?;
        st.serialize_field("eps", &(self.reflection as u8))?;
        st.serialize_field("j", &self.j.value())?;
        st.end()
    }
}

/// `a^{e1} b^{j1} · a^{e2} b^{j2} = a^{e1+e2} b^{(−1)^{e2} j1 + j2}`.
pub fn dihedral_mul(x: DihedralElement, y: DihedralElement) -> Result<DihedralElement> {
    let j1 = if y.reflection { x.j.negate() } else { x.j };
    Ok(DihedralElement::new(x.reflection ^ y.reflection, j1.checked_add(y.j)?))
}

/// `H = {1, a b^k}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OrderTwoSubgroup {
    k: Residue,
}

impl OrderTwoSubgroup {
    pub fn new(k: Residue) -> Self {
        OrderTwoSubgroup { k }
    }

    /// The default choice `x = a`.
    pub fn standard(n: Modulus) -> Self {
        Self::new(n.zero())
    }

    pub fn k(self) -> Residue {
        self.k
    }

    /// The involution `x = a b^k`.
    pub fn involution(self) -> DihedralElement {
        DihedralElement::reflection(self.k)
    }

    pub fn members(self) -> [DihedralElement; 2] {
        [DihedralElement::identity(self.k.modulus()), self.involution()]
    }

    /// Index `j` of the right coset `H b^j` containing `g`.
    pub fn coset_index(self, g: DihedralElement) -> Result<u64> {
        if g.reflection {
            // a b^m = (a b^k) b^{m−k}
            Ok(g.j.checked_sub(self.k)?.value())
        } else {
            Ok(g.j.value())
        }
    }
}

/// A normalized right transversal `T_A`, listed by coset index `j`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Transversal {
    #[serde(serialize_with = "serialize_subset")]
    a: SubsetA,
    elements: Vec<DihedralElement>,
}

fn serialize_subset<S: serde::Serializer>(a: &SubsetA, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(a.iter())
}

impl Transversal {
    pub fn subset(&self) -> &SubsetA {
        &self.a
    }

    pub fn elements(&self) -> &[DihedralElement] {
        &self.elements
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("transversal serializes")
    }
}

impl fmt::Display for Transversal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, e) in self.elements.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{e}")?;
        }
        f.write_str("]")
    }
}

pub fn build_transversal(n: Modulus, a: &SubsetA, h: OrderTwoSubgroup) -> Result<Transversal> {
    n.require_odd()?;
    if a.modulus() != n || h.k.modulus() != n {
        return Err(Error::ModulusMismatch { left: n.get(), right: a.modulus().get() });
    }
    if a.contains(0) {
        return Err(Error::ZeroInSubset);
    }
    let x = h.involution();
    let elements = n
        .elements()
        .map(|j| {
            let bj = DihedralElement::rotation(j);
            if a.contains(j.value()) {
                dihedral_mul(x, bj)
            } else {
                Ok(bj)
            }
        })
        .collect::<Result<Vec<_>>>()?;

    let mut hit = vec![false; n.as_usize()];
    for e in &elements {
        let c = h.coset_index(*e)? as usize;
        if std::mem::replace(&mut hit[c], true) {
            return Err(Error::Consistency(format!("coset H b^{c} met twice")));
        }
    }
    if !elements[0].is_identity() {
        return Err(Error::Consistency("t_0 is not the identity".into()));
    }
    Ok(Transversal { a: *a, elements })
}

/// The table of `{x∘y} = Hxy ∩ T` over transversal indices.
pub fn induced_operation(t: &Transversal, h: OrderTwoSubgroup) -> Result<CayleyTable> {
    let n = t.elements.len();
    let mut slot = vec![usize::MAX; n];
    for (idx, e) in t.elements.iter().enumerate() {
        slot[h.coset_index(*e)? as usize] = idx;
    }
    if slot.contains(&usize::MAX) {
        return Err(Error::Consistency("transversal misses a coset".into()));
    }
    let mut rows = Vec::with_capacity(n);
    for x in &t.elements {
        let mut row = Vec::with_capacity(n);
        for y in &t.elements {
            let c = h.coset_index(dihedral_mul(*x, *y)?)? as usize;
            row.push(slot[c] as u32);
        }
        rows.push(row);
    }
    Ok(CayleyTable::from_rows(rows)?.with_label(format!("T_{}", t.a)))
}

/// Whether the induced operation on `T_A` equals `Z_n^A` entrywise.
pub fn verify_identification(n: Modulus, a: &SubsetA, h: OrderTwoSubgroup) -> Result<bool> {
    let t = build_transversal(n, a, h)?;
    let induced = induced_operation(&t, h)?;
    Ok(induced.same_operation(&build_zna(n, a)?))
}
