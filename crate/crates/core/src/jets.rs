//! Jet-bundle contexts: declared fields, total derivatives, evolutionary
//! vector fields and their prolongations.
//!
//! A context owns the dictionary between abstract field families (possibly
//! carrying antisymmetric component indices and an intrinsic form degree) and
//! the flat table of scalar jet fields the ring works with. Derivative order
//! is bounded; operations that would exceed the bound report OrderOverflow
//! rather than silently truncating.

use crate::error::AlgebraError;
use crate::generator::{FieldId, Gen, MultiIndex, Names, MAX_DIM, MAX_ORDER};
use crate::grading::{Grading, Parity};
use crate::ring::GradedPoly;
use crate::scalar::Scalar;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// One extra component index slot of a field family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum IndexSlot {
    /// A single spacetime index a ∈ {0..n-1}.
    Vector,
    /// An antisymmetric pair a < b; access with swapped order is negated.
    AntisymPair,
}

/// Declaration of a field family.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FieldSpec {
    pub name: String,
    pub slots: Vec<IndexSlot>,
    /// Intrinsic horizontal form degree; a p-form-valued field expands into
    /// components carrying p antisymmetrized spacetime indices.
    pub form_degree: u8,
    pub grading: Grading,
}

impl FieldSpec {
    pub fn scalar(name: &str, grading: Grading) -> Self {
        FieldSpec { name: name.to_string(), slots: Vec::new(), form_degree: 0, grading }
    }

    pub fn form(name: &str, degree: u8, grading: Grading) -> Self {
        FieldSpec { name: name.to_string(), slots: Vec::new(), form_degree: degree, grading }
    }
}

pub type FamilyId = usize;

#[derive(Debug, Clone)]
struct Family {
    spec: FieldSpec,
    /// Canonical component keys (slot values then form indices) to field ids.
    comps: BTreeMap<(Vec<u8>, Vec<u8>), FieldId>,
}

#[derive(Debug, Clone)]
struct ScalarField {
    name: String,
    grading: Grading,
    family: FamilyId,
    slot_vals: Vec<u8>,
    form_idx: Vec<u8>,
}

#[derive(Debug, Clone)]
pub struct JetContext {
    dim: u8,
    max_jet_order: u8,
    coord_names: Vec<String>,
    params: Vec<String>,
    families: Vec<Family>,
    scalars: Vec<ScalarField>,
}

impl JetContext {
    pub fn new(dim: u8, max_jet_order: u8) -> Self {
        assert!(dim >= 1 && dim <= MAX_DIM, "dimension out of range");
        assert!(max_jet_order <= MAX_ORDER, "order bound exceeds representation cap");
        let coord_names = if dim == 1 {
            vec!["x".to_string()]
        } else {
            (0..dim).map(|i| format!("x{i}")).collect()
        };
        JetContext {
            dim,
            max_jet_order,
            coord_names,
            params: Vec::new(),
            families: Vec::new(),
            scalars: Vec::new(),
        }
    }

    pub fn dim(&self) -> u8 {
        self.dim
    }

    pub fn max_jet_order(&self) -> u8 {
        self.max_jet_order
    }

    /// Same declarations under a widened derivative-order bound.
    pub fn widened(&self, max_jet_order: u8) -> Self {
        let mut out = self.clone();
        assert!(max_jet_order <= MAX_ORDER);
        out.max_jet_order = max_jet_order;
        out
    }

    pub fn set_coord_names(&mut self, names: &[&str]) {
        assert_eq!(names.len(), self.dim as usize);
        self.coord_names = names.iter().map(|s| s.to_string()).collect();
    }

    pub fn coord_names(&self) -> &[String] {
        &self.coord_names
    }

    pub fn declare_param(&mut self, name: &str) -> Gen {
        let id = self.params.len() as u16;
        self.params.push(name.to_string());
        Gen::param(id)
    }

    pub fn params(&self) -> &[String] {
        &self.params
    }

    pub fn param_gen(&self, name: &str) -> Result<Gen, AlgebraError> {
        self.params
            .iter()
            .position(|p| p == name)
            .map(|i| Gen::param(i as u16))
            .ok_or_else(|| AlgebraError::UnknownName(name.to_string()))
    }

    /// Declares a family and expands it into scalar components.
    pub fn declare_field(&mut self, spec: FieldSpec) -> FamilyId {
        assert!(spec.form_degree <= self.dim, "form degree exceeds dimension");
        let family_id = self.families.len();
        let slot_tuples = enumerate_slots(&spec.slots, self.dim);
        let form_tuples = ascending_tuples(self.dim, spec.form_degree);
        let mut comps = BTreeMap::new();
        for slots in &slot_tuples {
            for form in &form_tuples {
                let id = self.scalars.len() as FieldId;
                let mut name = spec.name.clone();
                if !slots.is_empty() {
                    name.push('_');
                    name.extend(slots.iter().map(|d| char::from(b'0' + d)));
                }
                if !form.is_empty() {
                    name.push('_');
                    name.extend(form.iter().map(|d| char::from(b'0' + d)));
                }
                self.scalars.push(ScalarField {
                    name,
                    grading: spec.grading,
                    family: family_id,
                    slot_vals: slots.clone(),
                    form_idx: form.clone(),
                });
                comps.insert((slots.clone(), form.clone()), id);
            }
        }
        self.families.push(Family { spec, comps });
        family_id
    }

    pub fn num_fields(&self) -> usize {
        self.scalars.len()
    }

    pub fn field_ids(&self) -> impl Iterator<Item = FieldId> {
        0..self.scalars.len() as FieldId
    }

    pub fn field_grading(&self, f: FieldId) -> Grading {
        self.scalars[f as usize].grading
    }

    pub fn field_name(&self, f: FieldId) -> &str {
        &self.scalars[f as usize].name
    }

    pub fn field_by_name(&self, name: &str) -> Result<FieldId, AlgebraError> {
        self.scalars
            .iter()
            .position(|s| s.name == name)
            .map(|i| i as FieldId)
            .ok_or_else(|| AlgebraError::UnknownName(name.to_string()))
    }

    pub fn family_of(&self, f: FieldId) -> FamilyId {
        self.scalars[f as usize].family
    }

    pub fn family_spec(&self, fam: FamilyId) -> &FieldSpec {
        &self.families[fam].spec
    }

    pub fn num_families(&self) -> usize {
        self.families.len()
    }

    pub fn family_by_name(&self, name: &str) -> Result<FamilyId, AlgebraError> {
        self.families
            .iter()
            .position(|f| f.spec.name == name)
            .ok_or_else(|| AlgebraError::UnknownName(name.to_string()))
    }

    /// Component ids of a family in canonical enumeration order.
    pub fn family_components(&self, fam: FamilyId) -> Vec<FieldId> {
        self.families[fam].comps.values().copied().collect()
    }

    pub fn field_component_key(&self, f: FieldId) -> (&[u8], &[u8]) {
        let s = &self.scalars[f as usize];
        (&s.slot_vals, &s.form_idx)
    }

    /// Resolves a component with arbitrary index order to (canonical id, sign).
    /// None means the component vanishes by antisymmetry.
    pub fn component(
        &self,
        fam: FamilyId,
        slots: &[u8],
        form_idx: &[u8],
    ) -> Result<Option<(FieldId, i8)>, AlgebraError> {
        let family = &self.families[fam];
        let mut sign = 1i8;
        let mut canon_slots = Vec::with_capacity(slots.len());
        let mut pos = 0;
        for slot in &family.spec.slots {
            match slot {
                IndexSlot::Vector => {
                    let a = slots[pos];
                    self.check_index(a)?;
                    canon_slots.push(a);
                    pos += 1;
                }
                IndexSlot::AntisymPair => {
                    let (a, b) = (slots[pos], slots[pos + 1]);
                    self.check_index(a)?;
                    self.check_index(b)?;
                    pos += 2;
                    if a == b {
                        return Ok(None);
                    }
                    if a < b {
                        canon_slots.push(a);
                        canon_slots.push(b);
                    } else {
                        canon_slots.push(b);
                        canon_slots.push(a);
                        sign = -sign;
                    }
                }
            }
        }
        assert_eq!(pos, slots.len(), "slot index count mismatch");
        assert_eq!(form_idx.len(), family.spec.form_degree as usize);
        for &i in form_idx {
            self.check_index(i)?;
        }
        let Some((canon_form, s)) = sort_with_sign(form_idx) else {
            return Ok(None);
        };
        sign *= s;
        let id = family.comps[&(canon_slots, canon_form)];
        Ok(Some((id, sign)))
    }

    fn check_index(&self, i: u8) -> Result<(), AlgebraError> {
        if i >= self.dim {
            return Err(AlgebraError::IndexRange { index: i as usize, dim: self.dim as usize });
        }
        Ok(())
    }

    pub fn multi_index(&self, indices: &[u8]) -> Result<MultiIndex, AlgebraError> {
        for &i in indices {
            self.check_index(i)?;
        }
        if indices.len() > self.max_jet_order as usize {
            return Err(AlgebraError::OrderOverflow {
                requested: indices.len() as u8,
                max: self.max_jet_order,
            });
        }
        MultiIndex::from_slice(indices)
    }

    pub fn jet_gen(&self, f: FieldId, idx: &MultiIndex) -> Result<Gen, AlgebraError> {
        if idx.order() > self.max_jet_order {
            return Err(AlgebraError::OrderOverflow {
                requested: idx.order(),
                max: self.max_jet_order,
            });
        }
        Ok(Gen::jet(f, idx, self.field_grading(f)))
    }

    pub fn contact_gen(&self, f: FieldId, idx: &MultiIndex) -> Result<Gen, AlgebraError> {
        Ok(self.jet_gen(f, idx)?.to_contact())
    }

    /// φ^a_I as a polynomial; `idx` in any order.
    pub fn jet<C: Scalar>(&self, f: FieldId, idx: &[u8]) -> Result<GradedPoly<C>, AlgebraError> {
        Ok(GradedPoly::from_gen(self.jet_gen(f, &self.multi_index(idx)?)?))
    }

    pub fn x<C: Scalar>(&self, i: u8) -> GradedPoly<C> {
        assert!(i < self.dim);
        GradedPoly::from_gen(Gen::base(i))
    }

    /// Total derivative ∂_i on a coefficient polynomial.
    pub fn total_derivative<C: Scalar>(
        &self,
        p: &GradedPoly<C>,
        i: u8,
    ) -> Result<GradedPoly<C>, AlgebraError> {
        self.check_index(i)?;
        p.apply_derivation(Parity::Even, &mut |g| {
            use crate::generator::{KIND_BASE, KIND_JET, KIND_PARAM};
            match g.kind() {
                KIND_BASE => Ok(if g.base_index() == i {
                    GradedPoly::one()
                } else {
                    GradedPoly::zero()
                }),
                KIND_PARAM => Ok(GradedPoly::zero()),
                KIND_JET => {
                    let order = g.jet_order();
                    if order + 1 > self.max_jet_order {
                        return Err(AlgebraError::OrderOverflow {
                            requested: order + 1,
                            max: self.max_jet_order,
                        });
                    }
                    Ok(GradedPoly::from_gen(g.append_index(i)?))
                }
                _ => Err(AlgebraError::NotCoefficient),
            }
        })
    }

    /// ∂_I: iterated total derivative over a symmetric multi-index.
    pub fn total_derivative_multi<C: Scalar>(
        &self,
        p: &GradedPoly<C>,
        idx: &MultiIndex,
    ) -> Result<GradedPoly<C>, AlgebraError> {
        let mut out = p.clone();
        for &i in idx.indices() {
            out = self.total_derivative(&out, i)?;
        }
        Ok(out)
    }

    /// (-∂)_I = (-1)^{|I|} ∂_I.
    pub fn signed_total_derivative_multi<C: Scalar>(
        &self,
        p: &GradedPoly<C>,
        idx: &MultiIndex,
    ) -> Result<GradedPoly<C>, AlgebraError> {
        let d = self.total_derivative_multi(p, idx)?;
        Ok(if idx.order() % 2 == 1 { -d } else { d })
    }

    /// Total derivative along x^i with jets of odd fields differentiating to
    /// minus their prolongation. This even derivation is the one compatible
    /// with the horizontal differential once its dx factor is commuted to
    /// the right of the coefficient word; `total_derivative` is the plain
    /// product rule without the parity twist.
    pub fn graded_total_derivative<C: Scalar>(
        &self,
        p: &GradedPoly<C>,
        i: u8,
    ) -> Result<GradedPoly<C>, AlgebraError> {
        self.check_index(i)?;
        p.apply_derivation(Parity::Even, &mut |g| {
            use crate::generator::{KIND_BASE, KIND_JET, KIND_PARAM};
            match g.kind() {
                KIND_BASE => Ok(if g.base_index() == i {
                    GradedPoly::one()
                } else {
                    GradedPoly::zero()
                }),
                KIND_PARAM => Ok(GradedPoly::zero()),
                KIND_JET => {
                    let order = g.jet_order();
                    if order + 1 > self.max_jet_order {
                        return Err(AlgebraError::OrderOverflow {
                            requested: order + 1,
                            max: self.max_jet_order,
                        });
                    }
                    let img = GradedPoly::from_gen(g.append_index(i)?);
                    Ok(match g.parity() {
                        Parity::Even => img,
                        Parity::Odd => -img,
                    })
                }
                _ => Err(AlgebraError::NotCoefficient),
            }
        })
    }
}

impl Names for JetContext {
    fn coord_name(&self, i: u8) -> String {
        self.coord_names[i as usize].clone()
    }

    fn param_name(&self, id: u16) -> String {
        self.params[id as usize].clone()
    }

    fn field_name(&self, id: FieldId) -> String {
        self.scalars[id as usize].name.clone()
    }
}

fn enumerate_slots(slots: &[IndexSlot], dim: u8) -> Vec<Vec<u8>> {
    let mut tuples: Vec<Vec<u8>> = vec![Vec::new()];
    for slot in slots {
        let mut next = Vec::new();
        for t in &tuples {
            match slot {
                IndexSlot::Vector => {
                    for a in 0..dim {
                        let mut u = t.clone();
                        u.push(a);
                        next.push(u);
                    }
                }
                IndexSlot::AntisymPair => {
                    for a in 0..dim {
                        for b in a + 1..dim {
                            let mut u = t.clone();
                            u.push(a);
                            u.push(b);
                            next.push(u);
                        }
                    }
                }
            }
        }
        tuples = next;
    }
    tuples
}

/// All strictly ascending index tuples of the given length.
pub fn ascending_tuples(dim: u8, len: u8) -> Vec<Vec<u8>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(dim: u8, len: u8, start: u8, cur: &mut Vec<u8>, out: &mut Vec<Vec<u8>>) {
        if cur.len() == len as usize {
            out.push(cur.clone());
            return;
        }
        for i in start..dim {
            cur.push(i);
            rec(dim, len, i + 1, cur, out);
            cur.pop();
        }
    }
    rec(dim, len, 0, &mut cur, &mut out);
    out
}

/// Sorts indices ascending, tracking the permutation sign; None if repeated.
pub fn sort_with_sign(idx: &[u8]) -> Option<(Vec<u8>, i8)> {
    let mut v = idx.to_vec();
    let mut sign = 1i8;
    for i in 1..v.len() {
        let mut j = i;
        while j > 0 && v[j - 1] > v[j] {
            v.swap(j - 1, j);
            sign = -sign;
            j -= 1;
        }
    }
    for w in v.windows(2) {
        if w[0] == w[1] {
            return None;
        }
    }
    Some((v, sign))
}

/// A vertical vector field X^a_I ∂/∂φ^a_I determined by its sources X^a,
/// with components obtained by prolongation X^a_I = ∂_I X^a.
#[derive(Debug, Clone, PartialEq)]
pub struct EvolutionaryVectorField<C: Scalar> {
    sources: BTreeMap<FieldId, GradedPoly<C>>,
    grading: Grading,
}

impl<C: Scalar> EvolutionaryVectorField<C> {
    /// Builds from sources, inferring the field's grading from the first
    /// nonzero source and validating homogeneity of the rest.
    pub fn new(
        ctx: &JetContext,
        sources: BTreeMap<FieldId, GradedPoly<C>>,
    ) -> Result<Self, AlgebraError> {
        let mut grading: Option<Grading> = None;
        for (f, s) in &sources {
            if s.is_zero() {
                continue;
            }
            let gs = s.grading_of()?;
            let gf = ctx.field_grading(*f);
            let diff = Grading::new(gs.parity + gf.parity, gs.ghost - gf.ghost);
            match grading {
                None => grading = Some(diff),
                Some(g) if g == diff => {}
                Some(g) => {
                    return Err(AlgebraError::Grading(format!(
                        "source for {} gives field grading {}, expected {}",
                        ctx.field_name(*f),
                        diff,
                        g
                    )))
                }
            }
        }
        let grading = grading.ok_or_else(|| {
            AlgebraError::Grading(
                "cannot infer grading of a zero vector field; use with_grading".to_string(),
            )
        })?;
        Self::with_grading(ctx, sources, grading)
    }

    pub fn with_grading(
        ctx: &JetContext,
        sources: BTreeMap<FieldId, GradedPoly<C>>,
        grading: Grading,
    ) -> Result<Self, AlgebraError> {
        let mut clean = BTreeMap::new();
        for (f, s) in sources {
            if s.is_zero() {
                continue;
            }
            let gs = s.grading_of()?;
            let gf = ctx.field_grading(f);
            let expected = Grading::new(gf.parity + grading.parity, gf.ghost + grading.ghost);
            if gs != expected {
                return Err(AlgebraError::Grading(format!(
                    "source for {} has grading {}, expected {}",
                    ctx.field_name(f),
                    gs,
                    expected
                )));
            }
            if !s.is_coefficient_only() {
                return Err(AlgebraError::NotCoefficient);
            }
            clean.insert(f, s);
        }
        Ok(EvolutionaryVectorField { sources: clean, grading })
    }

    pub fn zero(grading: Grading) -> Self {
        EvolutionaryVectorField { sources: BTreeMap::new(), grading }
    }

    pub fn grading(&self) -> Grading {
        self.grading
    }

    pub fn parity(&self) -> Parity {
        self.grading.parity
    }

    pub fn is_zero(&self) -> bool {
        self.sources.is_empty()
    }

    pub fn sources(&self) -> impl Iterator<Item = (&FieldId, &GradedPoly<C>)> {
        self.sources.iter()
    }

    pub fn source(&self, f: FieldId) -> GradedPoly<C> {
        self.sources.get(&f).cloned().unwrap_or_else(GradedPoly::zero)
    }

    /// Prolonged component X^a_I = ∂_I X^a.
    pub fn component(
        &self,
        ctx: &JetContext,
        f: FieldId,
        idx: &MultiIndex,
    ) -> Result<GradedPoly<C>, AlgebraError> {
        let Some(s) = self.sources.get(&f) else {
            return Ok(GradedPoly::zero());
        };
        // Prolong with the graded derivative, once per index, flipping for
        // odd fields: this is the unique prolongation for which contraction
        // and the horizontal differential commute in the graded sense.
        let flip = ctx.field_grading(f).parity == Parity::Odd;
        let mut out = s.clone();
        for &i in idx.indices() {
            out = ctx.graded_total_derivative(&out, i)?;
            if flip {
                out = -out;
            }
        }
        Ok(out)
    }

    /// Action on coefficient polynomials: each jet factor is replaced by the
    /// matching prolonged component, with the usual prefix signs.
    pub fn apply(
        &self,
        ctx: &JetContext,
        p: &GradedPoly<C>,
    ) -> Result<GradedPoly<C>, AlgebraError> {
        p.apply_derivation(self.grading.parity, &mut |g| {
            if g.is_jet() {
                self.component(ctx, g.field_id(), &g.multi_index())
            } else if g.is_coefficient() {
                Ok(GradedPoly::zero())
            } else {
                Err(AlgebraError::NotCoefficient)
            }
        })
    }

    /// Graded commutator [X,Y]; again evolutionary, with source
    /// X(Y^a) - (-1)^{ε(X)ε(Y)} Y(X^a).
    pub fn commutator(
        &self,
        ctx: &JetContext,
        other: &EvolutionaryVectorField<C>,
    ) -> Result<EvolutionaryVectorField<C>, AlgebraError> {
        let sign = self.parity().koszul(other.parity());
        let mut sources = BTreeMap::new();
        let fields: std::collections::BTreeSet<FieldId> = self
            .sources
            .keys()
            .chain(other.sources.keys())
            .copied()
            .collect();
        for f in fields {
            let a = self.apply(ctx, &other.source(f))?;
            let b = other.apply(ctx, &self.source(f))?;
            let src = if sign < 0 { &a + &b } else { &a - &b };
            if !src.is_zero() {
                sources.insert(f, src);
            }
        }
        let grading = self.grading + other.grading;
        EvolutionaryVectorField::with_grading(ctx, sources, grading)
    }
}


impl JetContext {
    /// Convenience wrapper for tests and diagnostics.
    pub fn render_poly<C: Scalar>(&self, p: &GradedPoly<C>) -> String {
        p.render(self)
    }
}
