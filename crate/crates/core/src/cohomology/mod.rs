//! Decision procedures for exactness and on-shell triviality.
//!
//! Three kinds of questions are answered here, all by exact rational linear
//! algebra over seeded monomial ansatzes:
//!
//! * `invert_d` / `is_d_exact` — is a form a horizontal differential, and of
//!   what; at top horizontal degree the answer is constructive and complete
//!   via the source decomposition, below it the search is bounded.
//! * `solve_delta_d` — split a form as δA + dB, preferring the δ part.
//! * `is_weakly_zero` — does a form vanish on the stationary surface modulo
//!   d-exact terms, witnessed by an explicit combination of shell generators.
//!
//! Every witness is re-substituted through the real operators before being
//! returned, so a successful answer is self-certifying. Failures report the
//! bounds that were exhausted; they are never claims of nonexistence unless
//! flagged definitive.

pub mod linsys;
pub mod pools;

pub use linsys::LinearSolver;
pub use pools::SolveBounds;

use crate::error::SolveError;
use crate::forms::{euler_lagrange, source_decompose, Form};
use crate::grading::Parity;
use crate::jets::{EvolutionaryVectorField, JetContext};
use crate::ring::{GradedPoly, Monomial};
use crate::scalar::Scalar;
use std::collections::{BTreeMap, BTreeSet};

/// Outcome of an exactness test.
#[derive(Debug, Clone)]
pub enum Exactness<C: Scalar> {
    /// A witness σ with dσ equal to the query.
    Exact(Form<C>),
    /// No witness; `definitive` distinguishes a proof of non-exactness (via
    /// closedness failure or a nonzero source obstruction) from an exhausted
    /// bounded search.
    No { definitive: bool, reason: String },
}

impl<C: Scalar> Exactness<C> {
    pub fn witness(&self) -> Option<&Form<C>> {
        match self {
            Exactness::Exact(w) => Some(w),
            Exactness::No { .. } => None,
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Exactness::Exact(_))
    }
}

/// Finds σ with dσ = α. Complete at top horizontal degree; bounded search
/// below it.
pub fn invert_d<C: Scalar>(
    ctx: &JetContext,
    bounds: &SolveBounds,
    alpha: &Form<C>,
) -> Result<Form<C>, SolveError> {
    if alpha.is_zero() {
        return Ok(Form::zero());
    }
    if !alpha.d(ctx)?.is_zero() {
        return Err(SolveError::NotClosed);
    }
    let (p, q) = alpha.bidegree_of()?;
    let n = ctx.dim() as u32;
    if p == 0 {
        return Err(SolveError::NoSolution(
            "a nonzero form of horizontal degree zero has no d-preimage".to_string(),
        ));
    }
    if p == n && q == 1 {
        let (beta, gamma) = source_decompose(ctx, alpha)?;
        if beta.is_zero() {
            debug_assert_eq!(&gamma.d(ctx)?, alpha);
            return Ok(gamma);
        }
        return Err(SolveError::NoSolution(
            "nonzero source obstruction: the form is not d-exact".to_string(),
        ));
    }
    if p == n && q >= 2 {
        // No normal-form reduction is implemented past vertical degree one;
        // fall back to the bounded search.
        return ansatz_invert_d(ctx, bounds, alpha);
    }
    if p == n {
        if !euler_lagrange(ctx, alpha)?.is_zero() {
            return Err(SolveError::NoSolution(
                "nonzero variational derivative: the density is not a total derivative"
                    .to_string(),
            ));
        }
        return invert_top_density(ctx, alpha);
    }
    ansatz_invert_d(ctx, bounds, alpha)
}

/// Per-monomial parity sign: each Grassmann-odd monomial picks up a minus.
fn parity_twist<C: Scalar>(p: &GradedPoly<C>) -> GradedPoly<C> {
    let mut out = GradedPoly::zero();
    for (m, c) in p.iter() {
        let c = match m.parity() {
            Parity::Even => c.clone(),
            Parity::Odd => -c.clone(),
        };
        out.add_term(m.clone(), c);
    }
    out
}

/// Constructive d-preimage of a top-degree density whose variational
/// derivative vanishes. Graded Euler's theorem writes each
/// field-homogeneous piece of the coefficient as (1/k) Σ φ^a_I · ∂G/∂φ^a_I,
/// and single-step integration by parts walks every proper derivative into
/// an explicit boundary; the zero-order residue is (1/k) Σ φ^a E_a(G),
/// which the precondition kills. Field-free terms integrate along the
/// first coordinate. No search is involved, so this is complete.
fn invert_top_density<C: Scalar>(
    ctx: &JetContext,
    alpha: &Form<C>,
) -> Result<Form<C>, SolveError> {
    // Derivatives pile up while walking them off the jets; work with a
    // relaxed order cap and let genuine overflows surface as errors.
    let wide = ctx.widened(crate::generator::MAX_ORDER);
    let vol_m = crate::forms::vol::<C>(ctx)
        .poly()
        .iter()
        .next()
        .expect("volume monomial")
        .0
        .clone();
    // Coefficient density: top-degree vertical-zero monomials are a
    // coefficient word times the full dx block, with no interleaving sign.
    let mut density: GradedPoly<C> = GradedPoly::zero();
    for (m, a) in alpha.poly().iter() {
        let rest = pools::divide(m, &vol_m)
            .expect("top-degree monomial carries the volume block");
        density.add_term(rest, a.clone());
    }
    let mut by_degree: BTreeMap<u32, GradedPoly<C>> = BTreeMap::new();
    for (m, a) in density.iter() {
        by_degree
            .entry(m.field_degree())
            .or_insert_with(GradedPoly::zero)
            .add_term(m.clone(), a.clone());
    }
    let n = ctx.dim();
    let mut pots: Vec<GradedPoly<C>> = vec![GradedPoly::zero(); n as usize];
    for (k, piece) in by_degree {
        if k == 0 {
            pots[0].add_assign(&antiderivative_in(&piece, 0));
            continue;
        }
        let inv_k = C::one() / crate::scalar::int::<C>(k as i64);
        let mut work: Vec<(crate::generator::Gen, GradedPoly<C>)> = piece
            .support()
            .filter(|g| g.is_jet())
            .map(|g| (g, piece.left_derivative(g).scale(&inv_k)))
            .collect();
        let mut residue = GradedPoly::zero();
        while let Some((g, w)) = work.pop() {
            if w.is_zero() {
                continue;
            }
            let idx = g.multi_index();
            if idx.order() == 0 {
                residue.add_assign(&GradedPoly::from_gen(g).mul(&w));
                continue;
            }
            let indices = idx.indices();
            let j = indices[0];
            let reduced = wide.multi_index(&indices[1..])?;
            let lower = wide.jet_gen(g.field_id(), &reduced)?;
            // Boundary and remainder signs follow the graded derivative 𝒟:
            // g·w = T_j(lower·twist(w)) − (−1)^{|lower|}·lower·𝒟_j(w) with
            // T_j = twist∘𝒟_j, so the twisted product goes into the
            // potential and the signed remainder continues the walk.
            pots[j as usize].add_assign(&GradedPoly::from_gen(lower).mul(&parity_twist(&w)));
            let step = wide.graded_total_derivative(&w, j)?;
            work.push((
                lower,
                match lower.parity() {
                    Parity::Even => -step,
                    Parity::Odd => step,
                },
            ));
        }
        assert!(
            residue.is_zero(),
            "zero-order residue survived despite a vanishing variational derivative"
        );
    }
    let mut out = Form::zero();
    for (j, pot) in pots.into_iter().enumerate() {
        if pot.is_zero() {
            continue;
        }
        let sign = crate::scalar::int::<C>(if j % 2 == 0 { 1 } else { -1 });
        out = &out
            + &Form::from_poly(pot.scale(&sign))
                .wedge(&crate::forms::vol_without(ctx, j as u8));
    }
    let check = out.d(&wide)?;
    assert_eq!(&check, alpha, "constructed potential failed re-substitution");
    Ok(out)
}

/// Constructive split at top horizontal degree via the field-scaling
/// vector field R: φ^a ↦ φ^a. R is even, so L_R = i_R δ + δ i_R, and L_R
/// multiplies a piece of total field degree k by k. Hence
/// Ξ = Σ_k i_R(T_k)/k satisfies δΞ = T − Σ_k i_R(δT_k)/k, and the
/// remainder is a pure boundary exactly when the target admits a vertical
/// generator at all; a surviving source in the remainder is a genuine
/// obstruction (the target is not a variational flow) and is reported
/// rather than searched past.
fn split_top_flow<C: Scalar>(
    ctx: &JetContext,
    target: &Form<C>,
) -> Result<(Form<C>, Form<C>), SolveError> {
    let mut scaling: BTreeMap<crate::generator::FieldId, GradedPoly<C>> = BTreeMap::new();
    for f in ctx.field_ids() {
        scaling.insert(f, ctx.jet::<C>(f, &[])?);
    }
    let r = EvolutionaryVectorField::new(ctx, scaling)?;
    let mut by_degree: BTreeMap<u32, GradedPoly<C>> = BTreeMap::new();
    for (m, a) in target.poly().iter() {
        by_degree
            .entry(m.field_degree())
            .or_insert_with(GradedPoly::zero)
            .add_term(m.clone(), a.clone());
    }
    let mut generator: Form<C> = Form::zero();
    for (k, piece) in by_degree {
        // Vertical degree ≥ 1 means every monomial carries a contact
        // factor, so k ≥ 1 here.
        let inv = C::one() / crate::scalar::int::<C>(k as i64);
        let contracted = Form::from_poly(piece).contract(ctx, &r)?;
        generator = &generator + &contracted.scale(&inv);
    }
    let residue = target - &generator.delta();
    let (obstruction, sigma) = source_decompose(ctx, &residue)?;
    if !obstruction.is_zero() {
        return Err(SolveError::NoSolution(
            "variational source obstruction: the flow has no vertical generator".to_string(),
        ));
    }
    let recon = &generator.delta() + &sigma.d(ctx)?;
    assert_eq!(&recon, target, "top-degree split failed re-substitution");
    Ok((generator, sigma))
}

/// Exact antiderivative of a field-free polynomial in the given coordinate.
fn antiderivative_in<C: Scalar>(p: &GradedPoly<C>, coord: u8) -> GradedPoly<C> {
    let x = crate::generator::Gen::base(coord);
    let mut out = GradedPoly::zero();
    for (m, a) in p.iter() {
        let e = m.exp_of(x);
        let mut factors: Vec<(crate::generator::Gen, u32)> =
            m.factors().iter().filter(|(g, _)| *g != x).copied().collect();
        factors.push((x, e + 1));
        let (raised, sign) = Monomial::from_factors(&factors).expect("even factor insert");
        debug_assert_eq!(sign, 1);
        out.add_term(raised, a.clone() / crate::scalar::int(e as i64 + 1));
    }
    out
}

fn ansatz_invert_d<C: Scalar>(
    ctx: &JetContext,
    bounds: &SolveBounds,
    alpha: &Form<C>,
) -> Result<Form<C>, SolveError> {
    let bounds = bounds.covering(alpha.poly().iter().map(|(m, _)| m));
    let mut pool: BTreeSet<Monomial> = BTreeSet::new();
    for (m, _) in alpha.poly().iter() {
        pool.extend(pools::d_preimage_candidates(ctx, m, &bounds));
    }
    let mut images: BTreeMap<Monomial, GradedPoly<C>> = BTreeMap::new();
    for _round in 0..bounds.rounds.max(1) {
        refresh_d_images(ctx, &pool, &mut images);
        let mut solver = LinearSolver::new();
        let mut cols: Vec<&Monomial> = Vec::new();
        for (m, img) in &images {
            if img.is_zero() {
                continue;
            }
            solver.add_column(img);
            cols.push(m);
        }
        if let Some(sol) = solver.solve(alpha.poly()) {
            let mut sigma = GradedPoly::zero();
            for (col, c) in sol {
                sigma.add_term(cols[col].clone(), c);
            }
            let sigma = Form::from_poly(sigma);
            let check = sigma.d(ctx)?;
            assert_eq!(&check, alpha, "witness failed re-substitution");
            return Ok(sigma);
        }
        // Expand the pool by the preimages of everything the current ansatz
        // produces; stop early when the pool saturates.
        let mut targets: BTreeSet<Monomial> =
            alpha.poly().iter().map(|(m, _)| m.clone()).collect();
        for img in images.values() {
            targets.extend(img.iter().map(|(m, _)| m.clone()));
        }
        let mut grew = false;
        for t in &targets {
            for cand in pools::d_preimage_candidates(ctx, t, &bounds) {
                grew |= pool.insert(cand);
            }
        }
        if !grew {
            break;
        }
    }
    Err(SolveError::NoSolution(format!(
        "no d-preimage found within bounds ({})",
        bounds.describe()
    )))
}

/// Differentiates pool entries not seen before; candidates whose differential
/// leaves the representable order range are dropped.
fn refresh_d_images<C: Scalar>(
    ctx: &JetContext,
    pool: &BTreeSet<Monomial>,
    images: &mut BTreeMap<Monomial, GradedPoly<C>>,
) {
    for m in pool {
        if images.contains_key(m) {
            continue;
        }
        let f = Form::from_poly(GradedPoly::term(m.clone(), C::one()));
        if let Ok(img) = f.d(ctx) {
            images.insert(m.clone(), img.into_poly());
        }
    }
}

/// Decides α ≃ 0, i.e. whether α is a horizontal differential.
pub fn is_d_exact<C: Scalar>(
    ctx: &JetContext,
    bounds: &SolveBounds,
    alpha: &Form<C>,
) -> Result<Exactness<C>, SolveError> {
    if alpha.is_zero() {
        return Ok(Exactness::Exact(Form::zero()));
    }
    let (p, q) = alpha.bidegree_of()?;
    let n = ctx.dim() as u32;
    if p == n {
        if q == 0 {
            let el = euler_lagrange(ctx, alpha)?;
            if !el.is_zero() {
                return Ok(Exactness::No {
                    definitive: true,
                    reason: "nonzero Euler-Lagrange source".to_string(),
                });
            }
            return Ok(Exactness::Exact(invert_top_density(ctx, alpha)?));
        }
        if q == 1 {
            let (beta, gamma) = source_decompose(ctx, alpha)?;
            if beta.is_zero() {
                debug_assert_eq!(&gamma.d(ctx)?, alpha);
                return Ok(Exactness::Exact(gamma));
            }
            return Ok(Exactness::No {
                definitive: true,
                reason: "nonzero source obstruction".to_string(),
            });
        }
        // Vertical degree two and higher at top horizontal degree: no
        // normal-form reduction implemented, use the bounded search.
    }
    if !alpha.d(ctx)?.is_zero() {
        return Ok(Exactness::No {
            definitive: true,
            reason: "not d-closed".to_string(),
        });
    }
    if p == 0 {
        return Ok(Exactness::No {
            definitive: true,
            reason: "nonzero form of horizontal degree zero".to_string(),
        });
    }
    match ansatz_invert_d(ctx, bounds, alpha) {
        Ok(w) => Ok(Exactness::Exact(w)),
        Err(SolveError::NoSolution(msg)) => Ok(Exactness::No { definitive: false, reason: msg }),
        Err(e) => Err(e),
    }
}

/// Splits τ = δA + dB, preferring the δ part; the returned pair re-substitutes
/// exactly.
pub fn solve_delta_d<C: Scalar>(
    ctx: &JetContext,
    bounds: &SolveBounds,
    target: &Form<C>,
) -> Result<(Form<C>, Form<C>), SolveError> {
    if target.is_zero() {
        return Ok((Form::zero(), Form::zero()));
    }
    let (p, q) = target.bidegree_of()?;
    if p == ctx.dim() as u32 && q == 1 {
        return split_top_flow(ctx, target);
    }
    let bounds = bounds.covering(target.poly().iter().map(|(m, _)| m));
    let mut delta_pool: BTreeSet<Monomial> = BTreeSet::new();
    let mut d_pool: BTreeSet<Monomial> = BTreeSet::new();
    for (m, _) in target.poly().iter() {
        delta_pool.extend(pools::delta_preimage_candidates(m, &bounds));
        d_pool.extend(pools::d_preimage_candidates(ctx, m, &bounds));
    }
    let mut delta_images: BTreeMap<Monomial, GradedPoly<C>> = BTreeMap::new();
    let mut d_images: BTreeMap<Monomial, GradedPoly<C>> = BTreeMap::new();
    for _round in 0..bounds.rounds.max(1) {
        for m in &delta_pool {
            if !delta_images.contains_key(m) {
                let f = Form::from_poly(GradedPoly::term(m.clone(), C::one()));
                delta_images.insert(m.clone(), f.delta().into_poly());
            }
        }
        refresh_d_images(ctx, &d_pool, &mut d_images);
        let mut solver = LinearSolver::new();
        enum Col<'a> {
            Delta(&'a Monomial),
            D(&'a Monomial),
        }
        let mut cols: Vec<Col> = Vec::new();
        for (m, img) in &delta_images {
            if !img.is_zero() {
                solver.add_column(img);
                cols.push(Col::Delta(m));
            }
        }
        for (m, img) in &d_images {
            if !img.is_zero() {
                solver.add_column(img);
                cols.push(Col::D(m));
            }
        }
        if let Some(sol) = solver.solve(target.poly()) {
            let mut a = GradedPoly::zero();
            let mut b = GradedPoly::zero();
            for (col, c) in sol {
                match cols[col] {
                    Col::Delta(m) => a.add_term(m.clone(), c),
                    Col::D(m) => b.add_term(m.clone(), c),
                }
            }
            let a = Form::from_poly(a);
            let b = Form::from_poly(b);
            let recon = &a.delta() + &b.d(ctx)?;
            assert_eq!(&recon, target, "split witness failed re-substitution");
            return Ok((a, b));
        }
        let mut targets: BTreeSet<Monomial> =
            target.poly().iter().map(|(m, _)| m.clone()).collect();
        for img in delta_images.values().chain(d_images.values()) {
            targets.extend(img.iter().map(|(m, _)| m.clone()));
        }
        let mut grew = false;
        for t in &targets {
            for cand in pools::delta_preimage_candidates(t, &bounds) {
                grew |= delta_pool.insert(cand);
            }
            for cand in pools::d_preimage_candidates(ctx, t, &bounds) {
                grew |= d_pool.insert(cand);
            }
        }
        if !grew {
            break;
        }
    }
    Err(SolveError::NoSolution(format!(
        "no vertical/horizontal split found within bounds ({})",
        bounds.describe()
    )))
}

/// Witness for on-shell triviality: α = dσ + Σ ρ_j ∧ i_Q β_j + Σ ρ'_j ∧ δ_Q γ_j.
/// The β and γ entries are single contact forms, so the ideal membership is
/// visible at a glance.
#[derive(Debug, Clone)]
pub struct WeakWitness<C: Scalar> {
    pub sigma: Form<C>,
    pub eom_terms: Vec<(Form<C>, Form<C>)>,
    pub delta_terms: Vec<(Form<C>, Form<C>)>,
}

impl<C: Scalar> WeakWitness<C> {
    pub fn empty() -> Self {
        WeakWitness { sigma: Form::zero(), eom_terms: Vec::new(), delta_terms: Vec::new() }
    }

    /// Rebuilds the right-hand side through the real operators.
    pub fn reconstruct(
        &self,
        ctx: &JetContext,
        q: &EvolutionaryVectorField<C>,
    ) -> Result<Form<C>, SolveError> {
        let mut out = self.sigma.d(ctx)?;
        for (rho, beta) in &self.eom_terms {
            out = &out + &rho.wedge(&beta.contract(ctx, q)?);
        }
        for (rho, gamma) in &self.delta_terms {
            out = &out + &rho.wedge(&gamma.lie(ctx, q)?);
        }
        Ok(out)
    }
}

/// Decides α ≈ 0 (zero on the stationary surface modulo d-exact terms) for
/// the shell cut out by the sources of Q. A `None` is only ever "no witness
/// within bounds".
pub fn is_weakly_zero<C: Scalar>(
    ctx: &JetContext,
    bounds: &SolveBounds,
    q: &EvolutionaryVectorField<C>,
    alpha: &Form<C>,
) -> Result<Option<WeakWitness<C>>, SolveError> {
    Ok(shell_solve(ctx, bounds, q, alpha, false)?.map(|(_, w)| w))
}

/// Splits τ = δA + (weakly zero remainder): the on-shell counterpart of
/// `solve_delta_d`, preferring the δ part over ideal and boundary terms.
pub fn solve_delta_modulo_shell<C: Scalar>(
    ctx: &JetContext,
    bounds: &SolveBounds,
    q: &EvolutionaryVectorField<C>,
    target: &Form<C>,
) -> Result<Option<(Form<C>, WeakWitness<C>)>, SolveError> {
    shell_solve(ctx, bounds, q, target, true)
}

fn shell_solve<C: Scalar>(
    ctx: &JetContext,
    bounds: &SolveBounds,
    q: &EvolutionaryVectorField<C>,
    alpha: &Form<C>,
    with_delta_columns: bool,
) -> Result<Option<(Form<C>, WeakWitness<C>)>, SolveError> {
    if alpha.is_zero() {
        return Ok(Some((Form::zero(), WeakWitness::empty())));
    }
    let bounds = bounds.covering(alpha.poly().iter().map(|(m, _)| m));
    // Basic shell generators: prolonged sources of Q paired with the contact
    // form whose contraction/Lie derivative produces them.
    struct Basic<C: Scalar> {
        contact: crate::generator::Gen,
        eom: GradedPoly<C>,
        delta_img: GradedPoly<C>,
    }
    let mut basics: Vec<Basic<C>> = Vec::new();
    for f in ctx.field_ids() {
        let src = q.source(f);
        if src.is_zero() {
            continue;
        }
        for idx in pools::multi_indices_up_to(ctx, bounds.max_jet_order) {
            // Generated through the field's own prolongation so the columns
            // match what `reconstruct` rebuilds via contraction.
            let Ok(comp) = q.component(ctx, f, &idx) else { continue };
            if comp.is_zero() || comp.max_jet_order() > bounds.max_jet_order {
                continue;
            }
            let Ok(contact) = ctx.contact_gen(f, &idx) else { continue };
            let delta_img = Form::<C>::from_gen(contact).lie(ctx, q)?.into_poly();
            basics.push(Basic { contact, eom: comp, delta_img });
        }
    }
    let mut vertical_pool: BTreeSet<Monomial> = BTreeSet::new();
    let mut sigma_pool: BTreeSet<Monomial> = BTreeSet::new();
    let mut eom_pairs: BTreeSet<(Monomial, usize)> = BTreeSet::new();
    let mut delta_pairs: BTreeSet<(Monomial, usize)> = BTreeSet::new();
    let mut targets: BTreeSet<Monomial> = alpha.poly().iter().map(|(m, _)| m.clone()).collect();
    let mut d_images: BTreeMap<Monomial, GradedPoly<C>> = BTreeMap::new();
    let mut vertical_images: BTreeMap<Monomial, GradedPoly<C>> = BTreeMap::new();
    for _round in 0..bounds.rounds.max(1) {
        for t in &targets {
            sigma_pool.extend(pools::d_preimage_candidates(ctx, t, &bounds));
            if with_delta_columns {
                vertical_pool.extend(pools::delta_preimage_candidates(t, &bounds));
            }
            for (bi, basic) in basics.iter().enumerate() {
                for (me, _) in basic.eom.iter() {
                    if let Some(rho) = pools::divide(t, me) {
                        if bounds.admits(&rho) {
                            eom_pairs.insert((rho, bi));
                        }
                    }
                }
                for (ms, _) in basic.delta_img.iter() {
                    if let Some(rho) = pools::divide(t, ms) {
                        if bounds.admits(&rho) {
                            delta_pairs.insert((rho, bi));
                        }
                    }
                }
            }
        }
        refresh_d_images(ctx, &sigma_pool, &mut d_images);
        for m in &vertical_pool {
            if !vertical_images.contains_key(m) {
                let f = Form::from_poly(GradedPoly::term(m.clone(), C::one()));
                vertical_images.insert(m.clone(), f.delta().into_poly());
            }
        }
        enum Col<'a> {
            Vertical(&'a Monomial),
            Eom(&'a Monomial, usize),
            Delta(&'a Monomial, usize),
            Sigma(&'a Monomial),
        }
        let mut solver = LinearSolver::new();
        let mut cols: Vec<Col> = Vec::new();
        for (m, img) in &vertical_images {
            if !img.is_zero() {
                solver.add_column(img);
                cols.push(Col::Vertical(m));
            }
        }
        for (rho, bi) in &eom_pairs {
            let img = GradedPoly::term(rho.clone(), C::one()).mul(&basics[*bi].eom);
            if !img.is_zero() {
                solver.add_column(&img);
                cols.push(Col::Eom(rho, *bi));
            }
        }
        for (rho, bi) in &delta_pairs {
            let img = GradedPoly::term(rho.clone(), C::one()).mul(&basics[*bi].delta_img);
            if !img.is_zero() {
                solver.add_column(&img);
                cols.push(Col::Delta(rho, *bi));
            }
        }
        for (m, img) in &d_images {
            if !img.is_zero() {
                solver.add_column(img);
                cols.push(Col::Sigma(m));
            }
        }
        if let Some(sol) = solver.solve(alpha.poly()) {
            let mut witness = WeakWitness::empty();
            let mut vertical = GradedPoly::zero();
            let mut sigma = GradedPoly::zero();
            for (col, c) in sol {
                match &cols[col] {
                    Col::Vertical(m) => vertical.add_term((*m).clone(), c),
                    Col::Eom(rho, bi) => witness.eom_terms.push((
                        Form::from_poly(GradedPoly::term((*rho).clone(), c)),
                        Form::from_gen(basics[*bi].contact),
                    )),
                    Col::Delta(rho, bi) => witness.delta_terms.push((
                        Form::from_poly(GradedPoly::term((*rho).clone(), c)),
                        Form::from_gen(basics[*bi].contact),
                    )),
                    Col::Sigma(m) => sigma.add_term((*m).clone(), c),
                }
            }
            witness.sigma = Form::from_poly(sigma);
            let vertical = Form::from_poly(vertical);
            let recon = &vertical.delta() + &witness.reconstruct(ctx, q)?;
            assert_eq!(&recon, alpha, "on-shell witness failed re-substitution");
            return Ok(Some((vertical, witness)));
        }
        let before = targets.len();
        for img in d_images.values().chain(vertical_images.values()) {
            targets.extend(img.iter().map(|(m, _)| m.clone()));
        }
        for (rho, bi) in eom_pairs.iter().chain(delta_pairs.iter()) {
            let rp = GradedPoly::term(rho.clone(), C::one());
            for img in [&basics[*bi].eom, &basics[*bi].delta_img] {
                targets.extend(rp.mul(img).iter().map(|(m, _)| m.clone()));
            }
        }
        if targets.len() == before {
            break;
        }
    }
    Ok(None)
}

/// Strong equivalence α ≃ β: their difference is d-exact.
pub fn equivalent_strong<C: Scalar>(
    ctx: &JetContext,
    bounds: &SolveBounds,
    alpha: &Form<C>,
    beta: &Form<C>,
) -> Result<Exactness<C>, SolveError> {
    is_d_exact(ctx, bounds, &(alpha - beta))
}

/// Weak equivalence α ≈ β: their difference vanishes on-shell modulo d.
pub fn equivalent_weak<C: Scalar>(
    ctx: &JetContext,
    bounds: &SolveBounds,
    q: &EvolutionaryVectorField<C>,
    alpha: &Form<C>,
    beta: &Form<C>,
) -> Result<Option<WeakWitness<C>>, SolveError> {
    is_weakly_zero(ctx, bounds, q, &(alpha - beta))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generator::Gen;
    use crate::grading::Grading;
    use crate::jets::FieldSpec;
    use num_rational::BigRational;

    type F = Form<BigRational>;
    type P = GradedPoly<BigRational>;

    fn line() -> (JetContext, crate::generator::FieldId) {
        let mut ctx = JetContext::new(1, 6);
        let fam = ctx.declare_field(FieldSpec::scalar("u", Grading::even()));
        (ctx.clone(), ctx.family_components(fam)[0])
    }

    #[test]
    fn inverts_a_total_derivative_density() {
        // (u u_xx + u_x²) dx = d(u u_x).
        let (ctx, u) = line();
        let uu: P = ctx.jet(u, &[]).unwrap();
        let ux: P = ctx.jet(u, &[0]).unwrap();
        let uxx: P = ctx.jet(u, &[0, 0]).unwrap();
        let alpha = Form::from_poly(&uu.mul(&uxx) + &ux.mul(&ux))
            .wedge(&F::from_gen(Gen::dx(0)));
        let sigma = invert_d(&ctx, &SolveBounds::default(), &alpha).unwrap();
        assert_eq!(sigma.d(&ctx).unwrap(), alpha);
        assert_eq!(sigma, Form::from_poly(uu.mul(&ux)));
    }

    #[test]
    fn inverts_the_simplest_density() {
        let (ctx, u) = line();
        let alpha = Form::from_poly(ctx.jet::<BigRational>(u, &[0]).unwrap())
            .wedge(&F::from_gen(Gen::dx(0)));
        let sigma = invert_d(&ctx, &SolveBounds::default(), &alpha).unwrap();
        assert_eq!(sigma, Form::from_poly(ctx.jet::<BigRational>(u, &[]).unwrap()));
    }

    #[test]
    fn rejects_non_closed_input() {
        let (ctx, u) = line();
        // A (0,1)-form that is not closed: u δu.
        let alpha = Form::from_poly(ctx.jet::<BigRational>(u, &[]).unwrap())
            .wedge(&F::from_gen(ctx.contact_gen(u, &ctx.multi_index(&[]).unwrap()).unwrap()));
        assert!(matches!(
            invert_d(&ctx, &SolveBounds::default(), &alpha),
            Err(SolveError::NotClosed)
        ));
    }

    #[test]
    fn source_forms_are_never_exact() {
        // u δu ∧ dx is a nonzero source form.
        let (ctx, u) = line();
        let alpha = Form::from_poly(ctx.jet::<BigRational>(u, &[]).unwrap())
            .wedge(&F::from_gen(ctx.contact_gen(u, &ctx.multi_index(&[]).unwrap()).unwrap()))
            .wedge(&F::from_gen(Gen::dx(0)));
        // Reorder to (1,1): ok — bidegree reads (1,1) either way.
        match is_d_exact(&ctx, &SolveBounds::default(), &alpha).unwrap() {
            Exactness::No { definitive, .. } => assert!(definitive),
            Exactness::Exact(_) => panic!("source form cannot be exact"),
        }
    }

    #[test]
    fn exactness_decision_is_constructive_at_top_degree() {
        let (ctx, u) = line();
        let du = F::from_gen(ctx.contact_gen(u, &ctx.multi_index(&[]).unwrap()).unwrap());
        let candidate = Form::from_poly(ctx.jet::<BigRational>(u, &[]).unwrap()).wedge(&du);
        let alpha = candidate.d(&ctx).unwrap();
        match is_d_exact(&ctx, &SolveBounds::default(), &alpha).unwrap() {
            Exactness::Exact(w) => assert_eq!(w.d(&ctx).unwrap(), alpha),
            Exactness::No { .. } => panic!("differential must be recognized as exact"),
        }
    }

    #[test]
    fn euler_lagrange_obstruction_is_definitive() {
        let (ctx, u) = line();
        // u u_x dx is exact (½u²)'; u² dx is not.
        let uu: P = ctx.jet(u, &[]).unwrap();
        let exact = Form::from_poly(uu.mul(&ctx.jet(u, &[0]).unwrap()))
            .wedge(&F::from_gen(Gen::dx(0)));
        assert!(is_d_exact(&ctx, &SolveBounds::default(), &exact).unwrap().is_exact());
        let not = Form::from_poly(uu.mul(&uu)).wedge(&F::from_gen(Gen::dx(0)));
        match is_d_exact(&ctx, &SolveBounds::default(), &not).unwrap() {
            Exactness::No { definitive, .. } => assert!(definitive),
            _ => panic!("u² dx has a nonzero source"),
        }
    }

    #[test]
    fn splits_into_vertical_and_horizontal_parts() {
        // τ = δ(u_x δu) + d(x δu): solvable split with the δ part preferred.
        let (ctx, u) = line();
        let du = F::from_gen(ctx.contact_gen(u, &ctx.multi_index(&[]).unwrap()).unwrap());
        let a0 = Form::from_poly(ctx.jet::<BigRational>(u, &[0]).unwrap()).wedge(&du);
        let b0 = Form::from_poly(ctx.x::<BigRational>(0)).wedge(&du);
        let tau = &a0.delta() + &b0.d(&ctx).unwrap();
        let (a, b) = solve_delta_d(&ctx, &SolveBounds::default(), &tau).unwrap();
        let recon = &a.delta() + &b.d(&ctx).unwrap();
        assert_eq!(recon, tau);
    }

    #[test]
    fn weak_zero_detects_multiples_of_the_source() {
        // Shell: Q^u = u_xx (even toy "equation of motion" with ghost grading
        // suppressed). α = u u_xx dx vanishes on-shell.
        let (ctx, u) = line();
        let q = EvolutionaryVectorField::with_grading(
            &ctx,
            std::collections::BTreeMap::from([(u, ctx.jet::<BigRational>(u, &[0, 0]).unwrap())]),
            Grading::even(),
        )
        .unwrap();
        let uu: P = ctx.jet(u, &[]).unwrap();
        let alpha = Form::from_poly(uu.mul(&ctx.jet(u, &[0, 0]).unwrap()))
            .wedge(&F::from_gen(Gen::dx(0)));
        let w = is_weakly_zero(&ctx, &SolveBounds::default(), &q, &alpha)
            .unwrap()
            .expect("multiple of the source is weakly zero");
        assert_eq!(w.reconstruct(&ctx, &q).unwrap(), alpha);
        assert!(!w.eom_terms.is_empty());
    }

    #[test]
    fn weak_zero_finds_non_obvious_boundary_witnesses() {
        // On the shell u_xx = 0, u dx = d(xu - ½x²u_x) + ½x²·u_xx dx; the
        // witness needs both the boundary and the ideal part.
        let (ctx, u) = line();
        let q = EvolutionaryVectorField::with_grading(
            &ctx,
            std::collections::BTreeMap::from([(u, ctx.jet::<BigRational>(u, &[0, 0]).unwrap())]),
            Grading::even(),
        )
        .unwrap();
        let alpha = Form::from_poly(ctx.jet::<BigRational>(u, &[]).unwrap())
            .wedge(&F::from_gen(Gen::dx(0)));
        let w = is_weakly_zero(&ctx, &SolveBounds::default(), &q, &alpha)
            .unwrap()
            .expect("linear densities die on the free shell");
        assert_eq!(w.reconstruct(&ctx, &q).unwrap(), alpha);
        assert!(!w.sigma.is_zero(), "a pure ideal combination cannot produce u dx");
    }

    #[test]
    fn weak_zero_is_not_fooled_by_fresh_vertical_forms() {
        let (ctx, u) = line();
        let q = EvolutionaryVectorField::with_grading(
            &ctx,
            std::collections::BTreeMap::from([(u, ctx.jet::<BigRational>(u, &[0, 0]).unwrap())]),
            Grading::even(),
        )
        .unwrap();
        // δu has field degree one; every shell ideal element of bidegree
        // (0,1) is at least quadratic or carries second derivatives.
        let alpha = F::from_gen(ctx.contact_gen(u, &ctx.multi_index(&[]).unwrap()).unwrap());
        assert!(is_weakly_zero(&ctx, &SolveBounds::default(), &q, &alpha)
            .unwrap()
            .is_none());
    }

    #[test]
    fn on_shell_delta_split_covers_mixed_targets() {
        // τ = δ(u u_x dx) + u·δ_Q(δu)∧dx on the shell u_xx = 0: a valid
        // split needs both the vertical part and the ideal part.
        let (ctx, u) = line();
        let q = EvolutionaryVectorField::with_grading(
            &ctx,
            std::collections::BTreeMap::from([(u, ctx.jet::<BigRational>(u, &[0, 0]).unwrap())]),
            Grading::even(),
        )
        .unwrap();
        let h = Form::from_poly(
            ctx.jet::<BigRational>(u, &[]).unwrap().mul(&ctx.jet(u, &[0]).unwrap()),
        )
        .wedge(&F::from_gen(Gen::dx(0)));
        let du = F::from_gen(ctx.contact_gen(u, &ctx.multi_index(&[]).unwrap()).unwrap());
        let ideal_piece = Form::from_poly(ctx.jet::<BigRational>(u, &[]).unwrap())
            .wedge(&du.lie(&ctx, &q).unwrap())
            .wedge(&F::from_gen(Gen::dx(0)));
        let tau = &h.delta() + &ideal_piece;
        let (a, w) = solve_delta_modulo_shell(&ctx, &SolveBounds::default(), &q, &tau)
            .unwrap()
            .expect("split exists by construction");
        let recon = &a.delta() + &w.reconstruct(&ctx, &q).unwrap();
        assert_eq!(recon, tau);
    }

    #[test]
    fn widening_bounds_is_monotone() {
        let (ctx, u) = line();
        let alpha = Form::from_poly(ctx.jet::<BigRational>(u, &[0]).unwrap())
            .wedge(&F::from_gen(Gen::dx(0)));
        let tight = SolveBounds { max_jet_order: 1, max_x_degree: 0, max_field_degree: 1, rounds: 1 };
        let sigma = invert_d(&ctx, &tight, &alpha).unwrap();
        let wide = SolveBounds { max_jet_order: 4, max_x_degree: 3, max_field_degree: 4, rounds: 3 };
        let sigma_wide = invert_d(&ctx, &wide, &alpha).unwrap();
        assert_eq!(sigma.d(&ctx).unwrap(), sigma_wide.d(&ctx).unwrap());
    }
}
