//! Generators of the unified graded-commutative algebra.
//!
//! One packed word represents every kind of generator: base coordinates x^i,
//! parameters, jet coordinates φ^a_I, horizontal basis forms dx^i and contact
//! basis forms δφ^a_I. Treating the wedge factors as ring generators lets a
//! single multiplication routine own all Koszul signs.
//!
//! The u64 integer order IS the canonical order:
//!   x^i < parameters < jet coordinates < dx^i < contact forms,
//! with jet coordinates ordered by (field id, |I|, lexicographic I). The
//! generator's own parity and ghost number sit in the low bits (constant per
//! field, so they never disturb the order) and make grading computations
//! context-free.

use crate::error::AlgebraError;
use crate::grading::{Grading, Parity};
use std::fmt;

/// Hard cap on |I| imposed by the packed representation.
pub const MAX_ORDER: u8 = 8;
/// Hard cap on the base dimension imposed by nibble-packed multi-indices.
pub const MAX_DIM: u8 = 15;

const KIND_SHIFT: u32 = 61;
const FIELD_SHIFT: u32 = 47;
const LEN_SHIFT: u32 = 43;
const IDX_SHIFT: u32 = 11;
const PARITY_SHIFT: u32 = 10;
const GHOST_SHIFT: u32 = 3;
const GHOST_BIAS: i32 = 64;

pub const KIND_BASE: u8 = 0;
pub const KIND_PARAM: u8 = 1;
pub const KIND_JET: u8 = 2;
pub const KIND_DX: u8 = 3;
pub const KIND_CONTACT: u8 = 4;

/// Symmetric multi-index: a sorted multiset of base-coordinate indices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct MultiIndex {
    len: u8,
    idx: [u8; MAX_ORDER as usize],
}

impl MultiIndex {
    pub fn empty() -> Self {
        MultiIndex::default()
    }

    /// Builds from any ordering of indices; sorts into canonical form.
    pub fn from_slice(indices: &[u8]) -> Result<Self, AlgebraError> {
        if indices.len() > MAX_ORDER as usize {
            return Err(AlgebraError::OrderOverflow {
                requested: indices.len() as u8,
                max: MAX_ORDER,
            });
        }
        let mut idx = [0u8; MAX_ORDER as usize];
        idx[..indices.len()].copy_from_slice(indices);
        idx[..indices.len()].sort_unstable();
        Ok(MultiIndex { len: indices.len() as u8, idx })
    }

    pub fn order(&self) -> u8 {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn indices(&self) -> &[u8] {
        &self.idx[..self.len as usize]
    }

    /// Multiplicity of base index i.
    pub fn count(&self, i: u8) -> u8 {
        self.indices().iter().filter(|&&j| j == i).count() as u8
    }

    /// I + i, keeping the sorted invariant.
    pub fn push(&self, i: u8) -> Result<Self, AlgebraError> {
        if self.len >= MAX_ORDER {
            return Err(AlgebraError::OrderOverflow { requested: self.len + 1, max: MAX_ORDER });
        }
        let mut out = *self;
        let mut pos = out.len as usize;
        while pos > 0 && out.idx[pos - 1] > i {
            out.idx[pos] = out.idx[pos - 1];
            pos -= 1;
        }
        out.idx[pos] = i;
        out.len += 1;
        Ok(out)
    }

    /// I - i if i occurs, else None.
    pub fn remove(&self, i: u8) -> Option<Self> {
        let pos = self.indices().iter().position(|&j| j == i)?;
        let mut out = MultiIndex::default();
        out.len = self.len - 1;
        let mut k = 0;
        for (p, &j) in self.indices().iter().enumerate() {
            if p != pos {
                out.idx[k] = j;
                k += 1;
            }
        }
        Some(out)
    }

    fn pack(&self) -> u64 {
        let mut packed = 0u64;
        for (k, &i) in self.indices().iter().enumerate() {
            packed |= (i as u64) << (4 * (MAX_ORDER as usize - 1 - k));
        }
        packed
    }

    fn unpack(len: u8, packed: u64) -> Self {
        let mut out = MultiIndex::default();
        out.len = len;
        for k in 0..len as usize {
            out.idx[k] = ((packed >> (4 * (MAX_ORDER as usize - 1 - k))) & 0xF) as u8;
        }
        out
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in self.indices() {
            write!(f, "{i}")?;
        }
        Ok(())
    }
}

/// Identifier of a declared scalar field component.
pub type FieldId = u16;

/// A single generator, packed so that the integer order is the canonical
/// monomial-factor order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Gen(u64);

impl Gen {
    pub fn base(i: u8) -> Self {
        Gen(((KIND_BASE as u64) << KIND_SHIFT) | i as u64)
    }

    pub fn param(id: u16) -> Self {
        Gen(((KIND_PARAM as u64) << KIND_SHIFT) | id as u64)
    }

    pub fn dx(i: u8) -> Self {
        Gen(((KIND_DX as u64) << KIND_SHIFT) | i as u64)
    }

    fn jet_like(kind: u8, field: FieldId, idx: &MultiIndex, grading: Grading) -> Self {
        debug_assert!(field < (1 << 14));
        let gh = grading.ghost + GHOST_BIAS;
        debug_assert!((0..128).contains(&gh), "ghost number out of packable range");
        Gen(((kind as u64) << KIND_SHIFT)
            | ((field as u64) << FIELD_SHIFT)
            | ((idx.order() as u64) << LEN_SHIFT)
            | (idx.pack() << IDX_SHIFT)
            | ((grading.parity.bit() as u64) << PARITY_SHIFT)
            | ((gh as u64) << GHOST_SHIFT))
    }

    /// Jet coordinate φ^a_I; `grading` is the grading of the field itself.
    pub fn jet(field: FieldId, idx: &MultiIndex, grading: Grading) -> Self {
        Gen::jet_like(KIND_JET, field, idx, grading)
    }

    /// Contact form δφ^a_I; carries parity ε(φ)+1 and ghost gh(φ).
    pub fn contact(field: FieldId, idx: &MultiIndex, field_grading: Grading) -> Self {
        let grading = Grading::new(field_grading.parity + Parity::Odd, field_grading.ghost);
        Gen::jet_like(KIND_CONTACT, field, idx, grading)
    }

    pub fn kind(self) -> u8 {
        (self.0 >> KIND_SHIFT) as u8
    }

    pub fn is_jet(self) -> bool {
        self.kind() == KIND_JET
    }

    pub fn is_contact(self) -> bool {
        self.kind() == KIND_CONTACT
    }

    pub fn is_dx(self) -> bool {
        self.kind() == KIND_DX
    }

    /// True for x^i, parameters, and jet coordinates (may appear in
    /// coefficient polynomials).
    pub fn is_coefficient(self) -> bool {
        self.kind() <= KIND_JET
    }

    pub fn base_index(self) -> u8 {
        debug_assert!(self.kind() == KIND_BASE || self.kind() == KIND_DX);
        (self.0 & 0xFF) as u8
    }

    pub fn param_id(self) -> u16 {
        debug_assert_eq!(self.kind(), KIND_PARAM);
        (self.0 & 0xFFFF) as u16
    }

    pub fn field_id(self) -> FieldId {
        debug_assert!(self.is_jet() || self.is_contact());
        ((self.0 >> FIELD_SHIFT) & 0x3FFF) as FieldId
    }

    pub fn multi_index(self) -> MultiIndex {
        debug_assert!(self.is_jet() || self.is_contact());
        let len = ((self.0 >> LEN_SHIFT) & 0xF) as u8;
        MultiIndex::unpack(len, (self.0 >> IDX_SHIFT) & 0xFFFF_FFFF)
    }

    pub fn jet_order(self) -> u8 {
        if self.is_jet() || self.is_contact() {
            ((self.0 >> LEN_SHIFT) & 0xF) as u8
        } else {
            0
        }
    }

    pub fn parity(self) -> Parity {
        match self.kind() {
            KIND_BASE | KIND_PARAM => Parity::Even,
            KIND_DX => Parity::Odd,
            _ => Parity::from_bit(((self.0 >> PARITY_SHIFT) & 1) as u8),
        }
    }

    pub fn ghost(self) -> i32 {
        match self.kind() {
            KIND_BASE | KIND_PARAM | KIND_DX => 0,
            _ => (((self.0 >> GHOST_SHIFT) & 0x7F) as i32) - GHOST_BIAS,
        }
    }

    pub fn grading(self) -> Grading {
        Grading::new(self.parity(), self.ghost())
    }

    /// δφ^a_I for this jet coordinate.
    pub fn to_contact(self) -> Gen {
        debug_assert!(self.is_jet());
        Gen((self.0 & !(7 << KIND_SHIFT) | ((KIND_CONTACT as u64) << KIND_SHIFT))
            ^ (1 << PARITY_SHIFT))
    }

    /// φ^a_I underlying this contact form.
    pub fn to_jet(self) -> Gen {
        debug_assert!(self.is_contact());
        Gen((self.0 & !(7 << KIND_SHIFT) | ((KIND_JET as u64) << KIND_SHIFT))
            ^ (1 << PARITY_SHIFT))
    }

    /// Same kind of generator with multi-index I + i.
    pub fn append_index(self, i: u8) -> Result<Gen, AlgebraError> {
        let idx = self.multi_index().push(i)?;
        let keep = self.0 & ((1 << IDX_SHIFT) - 1); // parity + ghost bits
        Ok(Gen((self.0 >> KIND_SHIFT) << KIND_SHIFT
            | (self.0 & (0x3FFF << FIELD_SHIFT))
            | ((idx.order() as u64) << LEN_SHIFT)
            | (idx.pack() << IDX_SHIFT)
            | keep))
    }

    /// Same kind of generator with one occurrence of i removed from I.
    pub fn remove_index(self, i: u8) -> Option<Gen> {
        let idx = self.multi_index().remove(i)?;
        let keep = self.0 & ((1 << IDX_SHIFT) - 1);
        Some(Gen((self.0 >> KIND_SHIFT) << KIND_SHIFT
            | (self.0 & (0x3FFF << FIELD_SHIFT))
            | ((idx.order() as u64) << LEN_SHIFT)
            | (idx.pack() << IDX_SHIFT)
            | keep))
    }
}

/// Rendering hook: anything that can give generators their display names.
pub trait Names {
    fn coord_name(&self, i: u8) -> String;
    fn param_name(&self, id: u16) -> String;
    fn field_name(&self, id: FieldId) -> String;

    fn gen_name(&self, g: Gen) -> String {
        match g.kind() {
            KIND_BASE => self.coord_name(g.base_index()),
            KIND_PARAM => self.param_name(g.param_id()),
            KIND_DX => format!("d{}", self.coord_name(g.base_index())),
            KIND_JET | KIND_CONTACT => {
                let mut s = if g.is_contact() { "δ".to_string() } else { String::new() };
                s.push_str(&self.field_name(g.field_id()));
                let idx = g.multi_index();
                if !idx.is_empty() {
                    s.push('_');
                    for &i in idx.indices() {
                        s.push_str(&self.coord_name(i));
                    }
                }
                s
            }
            _ => unreachable!(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(gh: i32, odd: bool) -> Grading {
        Grading::new(if odd { Parity::Odd } else { Parity::Even }, gh)
    }

    #[test]
    fn kind_blocks_are_ordered() {
        let idx = MultiIndex::empty();
        let base = Gen::base(3);
        let param = Gen::param(7);
        let jet = Gen::jet(0, &idx, g(0, false));
        let dx = Gen::dx(0);
        let contact = Gen::contact(0, &idx, g(0, false));
        assert!(base < param && param < jet && jet < dx && dx < contact);
    }

    #[test]
    fn jets_order_by_field_then_order_then_lex() {
        let i02 = MultiIndex::from_slice(&[0, 2]).unwrap();
        let i11 = MultiIndex::from_slice(&[1, 1]).unwrap();
        let i3 = MultiIndex::from_slice(&[3]).unwrap();
        let grading = g(-2, false);
        // Different fields dominate.
        assert!(Gen::jet(0, &i11, grading) < Gen::jet(1, &MultiIndex::empty(), g(1, true)));
        // |I| dominates the entries.
        assert!(Gen::jet(0, &i3, grading) < Gen::jet(0, &i02, grading));
        // Equal |I|: lexicographic on the sorted entries.
        assert!(Gen::jet(0, &i02, grading) < Gen::jet(0, &i11, grading));
    }

    #[test]
    fn grading_round_trips_through_packing() {
        let idx = MultiIndex::from_slice(&[1, 1, 2]).unwrap();
        let jet = Gen::jet(42, &idx, g(-2, false));
        assert_eq!(jet.grading(), g(-2, false));
        assert_eq!(jet.field_id(), 42);
        assert_eq!(jet.multi_index(), idx);
        let contact = jet.to_contact();
        assert_eq!(contact.parity(), Parity::Odd);
        assert_eq!(contact.ghost(), -2);
        assert_eq!(contact.to_jet(), jet);
    }

    #[test]
    fn append_and_remove_are_inverse() {
        let idx = MultiIndex::from_slice(&[0, 2]).unwrap();
        let jet = Gen::jet(5, &idx, g(1, true));
        let up = jet.append_index(1).unwrap();
        assert_eq!(up.multi_index().indices(), &[0, 1, 2]);
        assert_eq!(up.remove_index(1).unwrap(), jet);
        assert_eq!(jet.remove_index(3), None);
        assert_eq!(jet.grading(), up.grading());
    }

    #[test]
    fn multi_index_sorts_and_caps() {
        let i = MultiIndex::from_slice(&[3, 0, 2]).unwrap();
        assert_eq!(i.indices(), &[0, 2, 3]);
        assert_eq!(i.count(2), 1);
        let full = MultiIndex::from_slice(&[0; 8]).unwrap();
        assert!(matches!(full.push(0), Err(AlgebraError::OrderOverflow { .. })));
    }
}
