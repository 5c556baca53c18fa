//! Bridging form-valued field families and graded forms.
//!
//! A p-form-valued family stores one scalar component per ascending index
//! tuple. These helpers materialize such a family (at fixed slot values) as
//! the horizontal form Σ_T φ_T dx^T, produce its contact companion
//! Σ_T δφ_T ∧ dx^T, and — in the other direction — read component
//! coefficients off a given horizontal form, which is how evolutionary
//! generators stated as form equations become per-component sources.

use std::collections::BTreeMap;

use crate::error::AlgebraError;
use crate::forms::Form;
use crate::generator::{FieldId, Gen};
use crate::jets::{ascending_tuples, FamilyId, JetContext};
use crate::ring::{GradedPoly, Monomial};
use crate::scalar::Scalar;

fn dx_monomial(indices: &[u8]) -> Monomial {
    let factors: Vec<(Gen, u32)> = indices.iter().map(|&i| (Gen::dx(i), 1)).collect();
    Monomial::from_factors(&factors).expect("ascending dx factors").0
}

/// dx^{μ₁} ∧ … ∧ dx^{μ_p} for an ascending tuple.
pub fn dx_block<C: Scalar>(indices: &[u8]) -> Form<C> {
    Form::from_poly(GradedPoly::term(dx_monomial(indices), crate::scalar::int(1)))
}

/// The component id of a family at the given slot values and ascending form
/// tuple; errors rather than silently skipping a missing component.
fn component_at(
    ctx: &JetContext,
    fam: FamilyId,
    slots: &[u8],
    tuple: &[u8],
) -> Result<FieldId, AlgebraError> {
    match ctx.component(fam, slots, tuple)? {
        Some((id, 1)) => Ok(id),
        Some(_) => unreachable!("ascending tuples are canonical"),
        None => Err(AlgebraError::UnknownName(format!(
            "{} has no component at slots {slots:?} tuple {tuple:?}",
            ctx.family_spec(fam).name
        ))),
    }
}

/// Σ_T φ_T dx^T at fixed slot values: the family as a horizontal form with
/// order-zero jet coefficients.
pub fn family_form<C: Scalar>(
    ctx: &JetContext,
    fam: FamilyId,
    slots: &[u8],
) -> Result<Form<C>, AlgebraError> {
    let degree = ctx.family_spec(fam).form_degree;
    let mut out = Form::zero();
    for tuple in ascending_tuples(ctx.dim(), degree) {
        let id = component_at(ctx, fam, slots, &tuple)?;
        let coeff = Form::from_poly(ctx.jet::<C>(id, &[])?);
        out = &out + &coeff.wedge(&dx_block(&tuple));
    }
    Ok(out)
}

/// Σ_T δφ_T ∧ dx^T at fixed slot values: the vertical differential of the
/// family form, with the contact factor on the left.
pub fn family_contact<C: Scalar>(
    ctx: &JetContext,
    fam: FamilyId,
    slots: &[u8],
) -> Result<Form<C>, AlgebraError> {
    Ok(family_form::<C>(ctx, fam, slots)?.delta())
}

/// Reads the dx^T coefficient of every ascending tuple off a horizontal
/// form of the family's degree, returning one coefficient polynomial per
/// component. Fails when the form has monomials outside degree p or with
/// contact factors — the callers state component sources, which are plain
/// coefficient data.
pub fn read_components<C: Scalar>(
    ctx: &JetContext,
    fam: FamilyId,
    slots: &[u8],
    value: &Form<C>,
) -> Result<BTreeMap<FieldId, GradedPoly<C>>, AlgebraError> {
    let degree = ctx.family_spec(fam).form_degree;
    let mut out: BTreeMap<FieldId, GradedPoly<C>> = BTreeMap::new();
    for tuple in ascending_tuples(ctx.dim(), degree) {
        let id = component_at(ctx, fam, slots, &tuple)?;
        out.insert(id, GradedPoly::zero());
    }
    for (m, a) in value.poly().iter() {
        let block: Vec<u8> = m
            .factors()
            .iter()
            .filter(|(g, _)| g.is_dx())
            .map(|(g, _)| g.base_index())
            .collect();
        if block.len() != degree as usize {
            return Err(AlgebraError::Bidegree {
                expected: format!("horizontal degree {degree}"),
                found: format!("monomial with {} dx factors", block.len()),
            });
        }
        let rest = crate::cohomology::pools::divide(m, &dx_monomial(&block))
            .expect("dx factors are a sub-word of their monomial");
        if !rest.is_coefficient_only() {
            return Err(AlgebraError::NotCoefficient);
        }
        // rest · dx_block = split · m fixes the Koszul sign of the readoff.
        let product = GradedPoly::<C>::term(rest.clone(), crate::scalar::int(1))
            .mul(&GradedPoly::term(dx_monomial(&block), crate::scalar::int(1)));
        let split = product.coeff_of(m);
        let id = component_at(ctx, fam, slots, &block)?;
        out.get_mut(&id)
            .expect("tuple enumerated above")
            .add_assign(&GradedPoly::term(rest, a.clone() * split));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grading::Grading;
    use crate::jets::FieldSpec;
    use num_rational::BigRational;

    #[test]
    fn family_form_and_readback_are_inverse() {
        let mut ctx = JetContext::new(3, 3);
        let a = ctx.declare_field(FieldSpec::form("A", 1, Grading::even()));
        let c = ctx.declare_field(FieldSpec::scalar("C", Grading::new(
            crate::grading::Parity::Odd,
            1,
        )));
        let c0 = ctx.family_components(c)[0];

        // A as a form, then its exterior derivative dC read back as sources
        // for the components of A.
        let c_form = family_form::<BigRational>(&ctx, c, &[]).unwrap();
        let dc = c_form.d(&ctx).unwrap();
        let sources = read_components(&ctx, a, &[], &dc).unwrap();
        assert_eq!(sources.len(), 3);
        for (id, src) in &sources {
            let (_, tuple) = ctx.field_component_key(*id);
            let expect = ctx.jet::<BigRational>(c0, &[tuple[0]]).unwrap();
            assert_eq!(src, &expect, "component {}", ctx.field_name(*id));
        }

        // Reassembling the sources over dx-blocks reproduces the form.
        let mut back = Form::zero();
        for (id, src) in &sources {
            let (_, tuple) = ctx.field_component_key(*id);
            back = &back + &Form::from_poly(src.clone()).wedge(&dx_block(tuple));
        }
        assert_eq!(back, dc);
    }

    #[test]
    fn contact_companion_is_the_vertical_differential() {
        let mut ctx = JetContext::new(2, 2);
        let a = ctx.declare_field(FieldSpec::form("A", 1, Grading::even()));
        let form = family_form::<BigRational>(&ctx, a, &[]).unwrap();
        let contact = family_contact::<BigRational>(&ctx, a, &[]).unwrap();
        assert_eq!(form.delta(), contact);
        assert_eq!(contact.bidegree_of().unwrap(), (1, 1));
    }

    #[test]
    fn readback_rejects_mixed_degree() {
        let mut ctx = JetContext::new(2, 2);
        let a = ctx.declare_field(FieldSpec::form("A", 1, Grading::even()));
        let bad = &family_form::<BigRational>(&ctx, a, &[]).unwrap()
            + &Form::from_poly(GradedPoly::one());
        assert!(read_components(&ctx, a, &[], &bad).is_err());
    }
}
