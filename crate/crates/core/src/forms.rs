//! Bigraded differential forms and the three derivations that act on them:
//! the horizontal differential `d`, the vertical differential `delta`, and
//! contractions/Lie derivatives along vector fields.
//!
//! A form is an element of the unified graded ring whose monomials mix
//! coefficient generators with dx and contact (δφ) factors; the bidegree
//! (horizontal, vertical) is read off per monomial. All Koszul signs are
//! produced by the ring's canonical-order merge, so the derivations here only
//! supply generator images.

use crate::error::AlgebraError;
use crate::generator::{Gen, Names, KIND_BASE, KIND_CONTACT, KIND_DX, KIND_JET, KIND_PARAM};
use crate::grading::{Grading, Parity};
use crate::jets::{EvolutionaryVectorField, JetContext};
use crate::ring::{GradedPoly, Monomial};
use crate::scalar::Scalar;
use std::collections::BTreeMap;
use std::ops::{Add, Neg, Sub};

/// A differential form in the unified ring.
#[derive(Debug, Clone, PartialEq)]
pub struct Form<C: Scalar>(GradedPoly<C>);

impl<C: Scalar> Form<C> {
    pub fn zero() -> Self {
        Form(GradedPoly::zero())
    }

    pub fn one() -> Self {
        Form(GradedPoly::one())
    }

    pub fn from_poly(p: GradedPoly<C>) -> Self {
        Form(p)
    }

    pub fn from_gen(g: Gen) -> Self {
        Form(GradedPoly::from_gen(g))
    }

    pub fn poly(&self) -> &GradedPoly<C> {
        &self.0
    }

    pub fn into_poly(self) -> GradedPoly<C> {
        self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn grading_of(&self) -> Result<Grading, AlgebraError> {
        self.0.grading_of()
    }

    pub fn bidegree_of(&self) -> Result<(u32, u32), AlgebraError> {
        self.0.bidegree_of()
    }

    pub fn expect_bidegree(&self, p: u32, q: u32) -> Result<(), AlgebraError> {
        let found = self.bidegree_of()?;
        if !self.is_zero() && found != (p, q) {
            return Err(AlgebraError::Bidegree {
                expected: format!("({p},{q})"),
                found: format!("({},{})", found.0, found.1),
            });
        }
        Ok(())
    }

    pub fn scale(&self, c: &C) -> Self {
        Form(self.0.scale(c))
    }

    /// Exterior product; the ring multiplication is already the wedge.
    pub fn wedge(&self, other: &Form<C>) -> Self {
        Form(self.0.mul(&other.0))
    }

    pub fn render(&self, names: &dyn Names) -> String {
        self.0.render(names)
    }

    /// Horizontal differential. Coordinates go to dx, jets pick up one more
    /// derivative contracted with dx, and contact factors differentiate
    /// against the sign that keeps d and delta anticommuting.
    pub fn d(&self, ctx: &JetContext) -> Result<Form<C>, AlgebraError> {
        let dim = ctx.dim();
        let max = ctx.max_jet_order();
        let out = self.0.apply_derivation(Parity::Odd, &mut |g| match g.kind() {
            KIND_BASE => Ok(GradedPoly::from_gen(Gen::dx(g.base_index()))),
            KIND_PARAM | KIND_DX => Ok(GradedPoly::zero()),
            KIND_JET | KIND_CONTACT => {
                if g.jet_order() + 1 > max {
                    return Err(AlgebraError::OrderOverflow {
                        requested: g.jet_order() + 1,
                        max,
                    });
                }
                let mut img = GradedPoly::zero();
                for j in 0..dim {
                    let piece = GradedPoly::from_gen(g.append_index(j)?)
                        .mul(&GradedPoly::from_gen(Gen::dx(j)));
                    img.add_assign(&piece);
                }
                if g.kind() == KIND_CONTACT {
                    img = -img;
                }
                Ok(img)
            }
            _ => unreachable!("packed generator kinds are exhaustive"),
        })?;
        Ok(Form(out))
    }

    /// Vertical differential: each jet factor goes to its contact partner.
    pub fn delta(&self) -> Form<C> {
        let out = self
            .0
            .apply_derivation(Parity::Odd, &mut |g| {
                Ok(if g.is_jet() {
                    GradedPoly::from_gen(g.to_contact())
                } else {
                    GradedPoly::zero()
                })
            })
            .expect("vertical images are total");
        Form(out)
    }

    /// The combined differential d + delta computed from its own generator
    /// images in one pass; used as an independent cross-check of `d` and
    /// `delta` and of the identities d² = δ² = dδ + δd = 0.
    pub fn total_differential(&self, ctx: &JetContext) -> Result<Form<C>, AlgebraError> {
        let dim = ctx.dim();
        let max = ctx.max_jet_order();
        let out = self.0.apply_derivation(Parity::Odd, &mut |g| match g.kind() {
            KIND_BASE => Ok(GradedPoly::from_gen(Gen::dx(g.base_index()))),
            KIND_PARAM | KIND_DX => Ok(GradedPoly::zero()),
            KIND_JET | KIND_CONTACT => {
                if g.jet_order() + 1 > max {
                    return Err(AlgebraError::OrderOverflow {
                        requested: g.jet_order() + 1,
                        max,
                    });
                }
                let mut img = GradedPoly::zero();
                for j in 0..dim {
                    let piece = GradedPoly::from_gen(g.append_index(j)?)
                        .mul(&GradedPoly::from_gen(Gen::dx(j)));
                    img.add_assign(&piece);
                }
                if g.kind() == KIND_CONTACT {
                    img = -img;
                } else {
                    img.add_assign(&GradedPoly::from_gen(g.to_contact()));
                }
                Ok(img)
            }
            _ => unreachable!("packed generator kinds are exhaustive"),
        })?;
        Ok(Form(out))
    }

    /// Contraction with an evolutionary vector field: δφ^a_I goes to the
    /// prolonged component ∂_I X^a, everything else to zero.
    pub fn contract(
        &self,
        ctx: &JetContext,
        x: &EvolutionaryVectorField<C>,
    ) -> Result<Form<C>, AlgebraError> {
        let op_parity = x.parity() + Parity::Odd;
        let out = self.0.apply_derivation(op_parity, &mut |g| {
            if g.is_contact() {
                x.component(ctx, g.field_id(), &g.multi_index())
            } else {
                Ok(GradedPoly::zero())
            }
        })?;
        Ok(Form(out))
    }

    /// Contraction with a horizontal vector field ξ^i ∂_i whose components
    /// are coefficient functions: dx^i goes to ξ^i.
    pub fn contract_horizontal(
        &self,
        ctx: &JetContext,
        xi: &[GradedPoly<C>],
    ) -> Result<Form<C>, AlgebraError> {
        assert_eq!(xi.len(), ctx.dim() as usize, "one component per coordinate");
        for comp in xi {
            if !comp.is_coefficient_only() {
                return Err(AlgebraError::NotCoefficient);
            }
            if comp.grading_of()? != Grading::even() {
                return Err(AlgebraError::Grading(
                    "horizontal components must be even with ghost number zero".to_string(),
                ));
            }
        }
        let out = self.0.apply_derivation(Parity::Odd, &mut |g| {
            Ok(if g.is_dx() {
                xi[g.base_index() as usize].clone()
            } else {
                GradedPoly::zero()
            })
        })?;
        Ok(Form(out))
    }

    /// Lie derivative along an evolutionary field, computed directly from
    /// generator images; agrees with i_X δ + (-1)^{ε(X)} δ i_X.
    pub fn lie(
        &self,
        ctx: &JetContext,
        x: &EvolutionaryVectorField<C>,
    ) -> Result<Form<C>, AlgebraError> {
        let flip = x.parity() == Parity::Odd;
        let out = self.0.apply_derivation(x.parity(), &mut |g| {
            if g.is_jet() {
                x.component(ctx, g.field_id(), &g.multi_index())
            } else if g.is_contact() {
                let comp = x.component(ctx, g.field_id(), &g.multi_index())?;
                let img = Form(comp).delta().into_poly();
                Ok(if flip { -img } else { img })
            } else {
                Ok(GradedPoly::zero())
            }
        })?;
        Ok(Form(out))
    }

    /// Lie derivative along a horizontal field via the Cartan formula
    /// d i_ξ + i_ξ d.
    pub fn lie_horizontal(
        &self,
        ctx: &JetContext,
        xi: &[GradedPoly<C>],
    ) -> Result<Form<C>, AlgebraError> {
        let a = self.contract_horizontal(ctx, xi)?.d(ctx)?;
        let b = self.d(ctx)?.contract_horizontal(ctx, xi)?;
        Ok(&a + &b)
    }
}

impl<C: Scalar> From<GradedPoly<C>> for Form<C> {
    fn from(p: GradedPoly<C>) -> Self {
        Form(p)
    }
}

impl<C: Scalar> Add for &Form<C> {
    type Output = Form<C>;
    fn add(self, rhs: &Form<C>) -> Form<C> {
        Form(&self.0 + &rhs.0)
    }
}

impl<C: Scalar> Sub for &Form<C> {
    type Output = Form<C>;
    fn sub(self, rhs: &Form<C>) -> Form<C> {
        Form(&self.0 - &rhs.0)
    }
}

impl<C: Scalar> Neg for Form<C> {
    type Output = Form<C>;
    fn neg(self) -> Form<C> {
        Form(-self.0)
    }
}

/// The coordinate volume form dx^0 ∧ … ∧ dx^{n-1}.
pub fn vol<C: Scalar>(ctx: &JetContext) -> Form<C> {
    let mut out = GradedPoly::one();
    for i in 0..ctx.dim() {
        out = out.mul(&GradedPoly::from_gen(Gen::dx(i)));
    }
    Form(out)
}

/// The ascending wedge of all dx except dx^i.
pub fn vol_without<C: Scalar>(ctx: &JetContext, skip: u8) -> Form<C> {
    let mut out = GradedPoly::one();
    for i in 0..ctx.dim() {
        if i != skip {
            out = out.mul(&GradedPoly::from_gen(Gen::dx(i)));
        }
    }
    Form(out)
}

/// A source form: one coefficient function per field, packaged as
/// Σ_a δφ^a ∧ (E_a · vol).
#[derive(Debug, Clone, PartialEq)]
pub struct SourceForm<C: Scalar> {
    sources: BTreeMap<crate::generator::FieldId, GradedPoly<C>>,
}

impl<C: Scalar> SourceForm<C> {
    pub fn new(sources: BTreeMap<crate::generator::FieldId, GradedPoly<C>>) -> Self {
        let sources = sources.into_iter().filter(|(_, p)| !p.is_zero()).collect();
        SourceForm { sources }
    }

    pub fn is_zero(&self) -> bool {
        self.sources.is_empty()
    }

    pub fn source(&self, f: crate::generator::FieldId) -> GradedPoly<C> {
        self.sources.get(&f).cloned().unwrap_or_else(GradedPoly::zero)
    }

    pub fn sources(&self) -> impl Iterator<Item = (&crate::generator::FieldId, &GradedPoly<C>)> {
        self.sources.iter()
    }

    pub fn to_form(&self, ctx: &JetContext) -> Result<Form<C>, AlgebraError> {
        let volume = vol::<C>(ctx);
        let mut out = Form::zero();
        for (&f, e) in &self.sources {
            let contact = Form::from_gen(ctx.contact_gen(f, &crate::generator::MultiIndex::empty())?);
            out = &out + &contact.wedge(&Form(e.clone())).wedge(&volume);
        }
        Ok(out)
    }
}

/// Euler–Lagrange source of a Lagrangian density: the normal form of its
/// vertical differential, δλ = Σ δφ^a ∧ E_a · vol + d(boundary). Computed
/// by the same integration-by-parts walk as `source_decompose`, so the
/// source is exactly the obstruction to δλ being a boundary.
pub fn euler_lagrange<C: Scalar>(
    ctx: &JetContext,
    lagrangian: &Form<C>,
) -> Result<SourceForm<C>, AlgebraError> {
    lagrangian.expect_bidegree(ctx.dim() as u32, 0)?;
    // The walk differentiates coefficient jets, so give it headroom.
    let wide = ctx.widened(crate::generator::MAX_ORDER);
    let (sources, _) = source_decompose(&wide, &lagrangian.delta())?;
    Ok(sources)
}

/// Decomposes a (1, n)-form as α = β + dγ with β a source form. The peel is
/// constructive: each contact factor of positive derivative order is lowered
/// by subtracting an exact term whose sign is read off numerically, so no
/// convention needs to be tracked by hand.
pub fn source_decompose<C: Scalar>(
    ctx: &JetContext,
    alpha: &Form<C>,
) -> Result<(SourceForm<C>, Form<C>), AlgebraError> {
    alpha.expect_bidegree(ctx.dim() as u32, 1)?;
    let mut rest = alpha.clone();
    let mut gamma = Form::zero();
    loop {
        // Highest-order contact factor still present.
        let target = rest
            .poly()
            .iter()
            .filter_map(|(m, c)| {
                let g = contact_factor(m)?;
                if g.jet_order() > 0 {
                    Some((m.clone(), c.clone(), g))
                } else {
                    None
                }
            })
            .max_by_key(|(m, _, g)| (g.jet_order(), *g, m.clone()));
        let Some((mono, coeff, g)) = target else { break };
        let i = *g.multi_index().indices().last().expect("order > 0");
        let lowered = g.remove_index(i).expect("index taken from the multi-index");
        // g_candidate = (coefficient part) ∧ vol_without(i) ∧ δφ_{I-i}; its
        // horizontal differential reproduces the target monomial with a sign
        // we read off rather than derive.
        let mut cand = GradedPoly::one();
        for &(h, e) in mono.factors() {
            if h.is_dx() || h == g {
                continue;
            }
            for _ in 0..e {
                cand = cand.mul(&GradedPoly::from_gen(h));
            }
        }
        let cand = Form(cand)
            .wedge(&vol_without::<C>(ctx, i))
            .wedge(&Form::from_gen(lowered));
        let d_cand = cand.d(ctx)?;
        let read = d_cand.poly().coeff_of(&mono);
        if read.is_zero() {
            return Err(AlgebraError::Grading(format!(
                "integration-by-parts step lost its target term (order {})",
                g.jet_order()
            )));
        }
        let factor = coeff.clone() / read;
        rest = &rest - &d_cand.scale(&factor);
        gamma = &gamma + &cand.scale(&factor);
    }
    // All contact factors now have derivative order zero; read off sources.
    let mut sources: BTreeMap<crate::generator::FieldId, GradedPoly<C>> = BTreeMap::new();
    for (m, c) in rest.poly().iter() {
        let g = contact_factor(m).expect("vertical degree one");
        debug_assert_eq!(g.jet_order(), 0);
        let mut coeff_mono = GradedPoly::one();
        for &(h, e) in m.factors() {
            if h.is_dx() || h == g {
                continue;
            }
            for _ in 0..e {
                coeff_mono = coeff_mono.mul(&GradedPoly::from_gen(h));
            }
        }
        // Orientation of δφ^a ∧ (P · vol) versus the stored monomial.
        let candidate = Form::from_gen(g)
            .wedge(&Form(coeff_mono.clone()))
            .wedge(&vol::<C>(ctx));
        let s = candidate.poly().coeff_of(m);
        assert!(!s.is_zero(), "readoff orientation cannot vanish");
        sources
            .entry(g.field_id())
            .or_insert_with(GradedPoly::zero)
            .add_assign(&coeff_mono.scale(&(c.clone() / s)));
    }
    Ok((SourceForm::new(sources), gamma))
}

fn contact_factor(m: &Monomial) -> Option<Gen> {
    m.factors().iter().map(|&(g, _)| g).find(|g| g.is_contact())
}
