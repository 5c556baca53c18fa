//! Flat metric backgrounds: a diagonal signature, an orientation, and the
//! Hodge dual they induce on horizontal forms.
//!
//! The dual is fixed by α ∧ *β = ⟨α, β⟩ vol on coordinate blocks, with
//! ⟨·,·⟩ the inverse metric extended to forms and vol = dx⁰∧…∧dxⁿ⁻¹. On a
//! diagonal metric this reduces to
//!
//!   *(f · dx^{μ₁…μ_p}) = f · o · η^{μ₁μ₁}…η^{μ_pμ_p} · sgn(μ, μᶜ) · dx^{μᶜ}
//!
//! with o the orientation and sgn the permutation sign of the block followed
//! by its ascending complement. Construction runs the involution self-test
//! ** = ±1 on every coordinate block, so a geometry value that exists at all
//! computes duals consistently.

use crate::error::AlgebraError;
use crate::forms::Form;
use crate::generator::Gen;
use crate::jets::ascending_tuples;
use crate::ring::{GradedPoly, Monomial};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlatGeometry {
    signature: Vec<i8>,
    orientation: i8,
}

impl FlatGeometry {
    /// Diagonal metric with the given ±1 entries. Fails when an entry is not
    /// a sign, and panics only if the induced dual breaks its own involution
    /// law — which would be a bug in the dual, not in the caller's data.
    pub fn new(signature: &[i8], orientation: i8) -> Result<Self, AlgebraError> {
        if signature.is_empty() || signature.len() > crate::generator::MAX_DIM as usize {
            return Err(AlgebraError::Grading(format!(
                "metric dimension {} out of range",
                signature.len()
            )));
        }
        if signature.iter().any(|&s| s != 1 && s != -1) {
            return Err(AlgebraError::Grading("metric entries must be ±1".to_string()));
        }
        if orientation != 1 && orientation != -1 {
            return Err(AlgebraError::Grading("orientation must be ±1".to_string()));
        }
        let g = FlatGeometry { signature: signature.to_vec(), orientation };
        g.involution_self_test();
        Ok(g)
    }

    /// Mostly-minus Minkowski metric (+,−,…,−) with standard orientation.
    pub fn minkowski(dim: u8) -> Self {
        let mut sig = vec![-1i8; dim as usize];
        sig[0] = 1;
        FlatGeometry::new(&sig, 1).expect("valid signature")
    }

    pub fn euclidean(dim: u8) -> Self {
        FlatGeometry::new(&vec![1i8; dim as usize], 1).expect("valid signature")
    }

    pub fn dim(&self) -> u8 {
        self.signature.len() as u8
    }

    pub fn signature(&self) -> &[i8] {
        &self.signature
    }

    pub fn orientation(&self) -> i8 {
        self.orientation
    }

    /// Diagonal entry η_{μμ} = η^{μμ}.
    pub fn metric(&self, mu: u8) -> i8 {
        self.signature[mu as usize]
    }

    /// Sign of det η.
    pub fn det_sign(&self) -> i8 {
        self.signature.iter().product()
    }

    /// Totally antisymmetric symbol with upper indices, ε^{0…n−1} equal to
    /// the orientation. Zero on a repeated index.
    pub fn eps_upper(&self, idx: &[u8]) -> i8 {
        assert_eq!(idx.len(), self.signature.len(), "one index per dimension");
        match crate::jets::sort_with_sign(idx) {
            Some((_, s)) => s * self.orientation,
            None => 0,
        }
    }

    /// The symbol with all indices lowered: det η times the upper symbol.
    pub fn eps_lower(&self, idx: &[u8]) -> i8 {
        self.det_sign() * self.eps_upper(idx)
    }

    /// Oriented volume form dx⁰∧…∧dxⁿ⁻¹.
    pub fn vol<C: Scalar>(&self) -> Form<C> {
        let factors: Vec<(Gen, u32)> = (0..self.dim()).map(|i| (Gen::dx(i), 1)).collect();
        let (m, s) = Monomial::from_factors(&factors).expect("distinct odd factors");
        debug_assert_eq!(s, 1);
        Form::from_poly(GradedPoly::term(m, crate::scalar::int(1)))
    }

    /// Hodge dual acting on the dx-block of every monomial; coefficients
    /// (including any contact factors) ride along unchanged up to the sign
    /// of commuting the block to the end.
    pub fn hodge<C: Scalar>(&self, form: &Form<C>) -> Result<Form<C>, AlgebraError> {
        let n = self.dim();
        let mut out: GradedPoly<C> = GradedPoly::zero();
        for (m, a) in form.poly().iter() {
            let block: Vec<u8> = m
                .factors()
                .iter()
                .filter(|(g, _)| g.is_dx())
                .map(|(g, _)| g.base_index())
                .collect();
            if block.iter().any(|&i| i >= n) {
                return Err(AlgebraError::IndexRange {
                    index: *block.iter().max().unwrap() as usize,
                    dim: n as usize,
                });
            }
            let complement: Vec<u8> = (0..n).filter(|i| !block.contains(i)).collect();
            let dx_block = dx_monomial(&block);
            let dx_complement = dx_monomial(&complement);
            let rest = crate::cohomology::pools::divide(m, &dx_block)
                .expect("dx factors are a sub-word of their monomial");
            // Recover the Koszul sign of pulling the block out to the right:
            // rest · dx_block = split · m.
            let product = GradedPoly::<C>::term(rest.clone(), crate::scalar::int(1))
                .mul(&GradedPoly::term(dx_block, crate::scalar::int(1)));
            let split = product.coeff_of(m);
            debug_assert!(!split.is_zero(), "block split lost the monomial");
            let mut sign = self.orientation * permutation_sign(&block, &complement);
            for &mu in &block {
                sign *= self.metric(mu);
            }
            let coeff = a.clone() * split * crate::scalar::int::<C>(sign as i64);
            out.add_assign(
                &GradedPoly::term(rest, coeff)
                    .mul(&GradedPoly::term(dx_complement, crate::scalar::int(1))),
            );
        }
        Ok(Form::from_poly(out))
    }

    /// ** = (−1)^{p(n−p)} · sign(det η) on every coordinate block.
    fn involution_self_test(&self) {
        let n = self.dim();
        for p in 0..=n {
            for tuple in ascending_tuples(n, p) {
                let block: Form<num_rational::BigRational> =
                    Form::from_poly(GradedPoly::term(dx_monomial(&tuple), crate::scalar::int(1)));
                let twice = self
                    .hodge(&self.hodge(&block).expect("dual of a block"))
                    .expect("dual of a dual");
                let expect = (p as u32 * (n - p) as u32) % 2 == 0;
                let sign = if expect { self.det_sign() } else { -self.det_sign() };
                assert_eq!(
                    twice,
                    block.scale(&crate::scalar::int(sign as i64)),
                    "Hodge involution failed on block {tuple:?}"
                );
            }
        }
    }
}

fn dx_monomial(indices: &[u8]) -> Monomial {
    let factors: Vec<(Gen, u32)> = indices.iter().map(|&i| (Gen::dx(i), 1)).collect();
    let (m, s) = Monomial::from_factors(&factors).expect("distinct ascending dx factors");
    debug_assert_eq!(s, 1, "indices must be ascending");
    m
}

/// Parity of the permutation (left, right) of 0..n, as a sign.
fn permutation_sign(left: &[u8], right: &[u8]) -> i8 {
    let mut inversions = 0usize;
    let all: Vec<u8> = left.iter().chain(right.iter()).copied().collect();
    for i in 0..all.len() {
        for j in (i + 1)..all.len() {
            if all[i] > all[j] {
                inversions += 1;
            }
        }
    }
    if inversions % 2 == 0 {
        1
    } else {
        -1
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    type F = Form<BigRational>;

    fn dx_form(indices: &[u8]) -> F {
        Form::from_poly(GradedPoly::term(dx_monomial(indices), crate::scalar::int(1)))
    }

    #[test]
    fn mostly_minus_duals_in_four_dimensions() {
        let g = FlatGeometry::minkowski(4);
        // Scalar product of dx⁰∧dx¹ with itself is η⁰⁰η¹¹ = −1.
        assert_eq!(g.hodge(&dx_form(&[0, 1])).unwrap(), -dx_form(&[2, 3]));
        assert_eq!(g.hodge(&F::one()).unwrap(), g.vol());
        assert_eq!(g.hodge(&g.vol()).unwrap(), -F::one());
        // A purely spatial block keeps its sign positive: η²²η³³ = +1.
        assert_eq!(g.hodge(&dx_form(&[2, 3])).unwrap(), dx_form(&[0, 1]));
    }

    #[test]
    fn euclidean_duals_close_with_plus_one_in_odd_by_even_split() {
        let g = FlatGeometry::euclidean(3);
        assert_eq!(g.hodge(&dx_form(&[0])).unwrap(), dx_form(&[1, 2]));
        assert_eq!(g.hodge(&dx_form(&[1])).unwrap(), -dx_form(&[0, 2]));
        assert_eq!(g.hodge(&dx_form(&[2])).unwrap(), dx_form(&[0, 1]));
        assert_eq!(g.hodge(&g.hodge(&dx_form(&[0])).unwrap()).unwrap(), dx_form(&[0]));
    }

    #[test]
    fn orientation_reversal_flips_every_dual() {
        let plus = FlatGeometry::minkowski(4);
        let minus = FlatGeometry::new(plus.signature(), -1).unwrap();
        let block = dx_form(&[0, 2]);
        assert_eq!(minus.hodge(&block).unwrap(), -plus.hodge(&block).unwrap());
    }

    #[test]
    fn epsilon_symbols_track_signature() {
        let g = FlatGeometry::minkowski(4);
        assert_eq!(g.eps_upper(&[0, 1, 2, 3]), 1);
        assert_eq!(g.eps_upper(&[1, 0, 2, 3]), -1);
        assert_eq!(g.eps_upper(&[0, 0, 2, 3]), 0);
        assert_eq!(g.eps_lower(&[0, 1, 2, 3]), -1);
        let e = FlatGeometry::euclidean(4);
        assert_eq!(e.eps_lower(&[0, 1, 2, 3]), 1);
    }

    #[test]
    fn rejects_non_sign_entries() {
        assert!(FlatGeometry::new(&[1, 2], 1).is_err());
        assert!(FlatGeometry::new(&[], 1).is_err());
        assert!(FlatGeometry::new(&[1, -1], 0).is_err());
    }

    #[test]
    fn dual_passes_coefficients_through() {
        let g = FlatGeometry::minkowski(2);
        let mut ctx = crate::jets::JetContext::new(2, 2);
        let fam = ctx.declare_field(crate::jets::FieldSpec::scalar(
            "u",
            crate::grading::Grading::even(),
        ));
        let u = ctx.family_components(fam)[0];
        let f = Form::from_poly(ctx.jet::<BigRational>(u, &[0]).unwrap()).wedge(&dx_form(&[1]));
        // *(u_x dx¹) = u_x · η¹¹ · sgn(1,0) · dx⁰ = u_x dx⁰.
        let dual = g.hodge(&f).unwrap();
        let expect = Form::from_poly(ctx.jet::<BigRational>(u, &[0]).unwrap()).wedge(&dx_form(&[0]));
        assert_eq!(dual, expect);
    }
}
