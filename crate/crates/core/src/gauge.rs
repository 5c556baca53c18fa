//! Gauge systems: a nilpotent odd evolutionary generator paired with a
//! presymplectic form on the top horizontal degree.
//!
//! The pair (Q, ω) fixes everything else in the module: descent towers for
//! the form and for conserved currents, Hamiltonian generators of
//! evolutionary fields, brackets between them, and the classification of
//! symmetries into trivial (gauge-exact) and genuine ones. All constructions
//! go through the bounded cohomology solvers, so every positive answer
//! carries a witness that is re-checked by substitution before being
//! returned.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::cohomology::{
    invert_d, is_d_exact, is_weakly_zero, pools, solve_delta_d, solve_delta_modulo_shell,
    LinearSolver, SolveBounds, WeakWitness,
};
use crate::error::{AlgebraError, SolveError};
use crate::forms::{euler_lagrange, Form};
use crate::generator::FieldId;
use crate::grading::{Grading, Parity};
use crate::jets::{EvolutionaryVectorField, JetContext};
use crate::ring::GradedPoly;
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GaugeError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),

    #[error(transparent)]
    Solve(#[from] SolveError),

    #[error("generator must be odd with ghost number one, found {0}")]
    GeneratorGrading(Grading),

    #[error("generator does not square to zero: [Q, Q] acts on {0}")]
    NotNilpotent(String),

    #[error("presymplectic form is not vertical-closed")]
    NotVerticallyClosed,

    #[error("vertical differential of the potential does not reproduce the form")]
    PotentialMismatch,

    #[error("descent stalled at level {level}: {reason}")]
    DescentStalled { level: usize, reason: String },

    #[error("the form's Q-variation is not a horizontal differential")]
    NotObservable,
}

/// A generator H for an evolutionary field X, in the sense that contracting
/// X into the presymplectic form gives δH up to a boundary and (when the
/// witness has ideal terms) contributions vanishing on the stationary
/// surface.
#[derive(Debug, Clone)]
pub struct HamiltonianPair<C: Scalar> {
    pub hamiltonian: Form<C>,
    pub witness: WeakWitness<C>,
}

impl<C: Scalar> HamiltonianPair<C> {
    /// True when the defining relation holds without using the stationary
    /// surface: i_X ω = δH + dσ exactly.
    pub fn is_strong(&self) -> bool {
        self.witness.eom_terms.is_empty() && self.witness.delta_terms.is_empty()
    }
}

#[derive(Debug, Clone)]
pub struct DescentLevel<C: Scalar> {
    pub omega: Form<C>,
    /// False when the level is weakly trivial (a boundary modulo the
    /// stationary surface), i.e. carries no invariant content.
    pub nontrivial: bool,
}

/// Tower ω = ω_0, dω_{k+1} = L_Q ω_k of forms of decreasing horizontal
/// degree.
#[derive(Debug, Clone)]
pub struct DescentChain<C: Scalar> {
    pub levels: Vec<DescentLevel<C>>,
}

impl<C: Scalar> DescentChain<C> {
    /// Largest level carrying a nontrivial form.
    pub fn length(&self) -> usize {
        self.levels
            .iter()
            .enumerate()
            .filter(|(_, l)| l.nontrivial)
            .map(|(k, _)| k)
            .max()
            .unwrap_or(0)
    }
}

/// Verdict on whether an evolutionary symmetry is gauge-exact.
#[derive(Debug, Clone)]
pub enum GaugeTriviality<C: Scalar> {
    /// X = [Q, Y] for the returned Y.
    Trivial(EvolutionaryVectorField<C>),
    /// No generator found. Definitive when X fails to commute with Q (a
    /// bracket with Q always commutes); otherwise only "not within bounds".
    Nontrivial { definitive: bool },
}

/// A level of the conserved-current tower: d(current) equals the character
/// contracted with Q, so the current is closed up to gauge directions.
#[derive(Debug, Clone)]
pub struct ConservationLaw<C: Scalar> {
    pub level: usize,
    pub current: Form<C>,
    pub character: Form<C>,
}

/// Current data for the generator itself: the top density with
/// i_Q ω = δ(density) + d(flux), and the improved level-one current whose
/// self-bracket closes on the stationary surface.
#[derive(Debug, Clone)]
pub struct CurrentDescent<C: Scalar> {
    pub density: Form<C>,
    pub flux: Form<C>,
    pub current: Form<C>,
    /// Boundary for the defining relation of the improved current:
    /// 2 i_Q ω₁ = δ(current) + d(improvement).
    pub improvement: Form<C>,
    /// Witness for the master identity: the level-one self-bracket of the
    /// current is weakly trivial.
    pub master: WeakWitness<C>,
}

/// Validates the generator grading and reports whether it squares to zero.
pub fn check_homological<C: Scalar>(
    ctx: &JetContext,
    q: &EvolutionaryVectorField<C>,
) -> Result<bool, GaugeError> {
    if q.grading() != Grading::new(Parity::Odd, 1) {
        return Err(GaugeError::GeneratorGrading(q.grading()));
    }
    Ok(q.commutator(ctx, q)?.is_zero())
}

#[derive(Debug, Clone)]
pub struct GaugeSystem<C: Scalar> {
    ctx: JetContext,
    q: EvolutionaryVectorField<C>,
    omega: Form<C>,
    theta: Option<Form<C>>,
    omega1: Form<C>,
}

impl<C: Scalar> GaugeSystem<C> {
    /// Builds and validates a gauge system. The generator must be odd with
    /// ghost one and square to zero; ω must be a vertical-closed two-form of
    /// top horizontal degree, invariant under Q up to the boundary term ω₁
    /// (computed here once and reused by the descent).
    pub fn new(
        ctx: JetContext,
        q: EvolutionaryVectorField<C>,
        omega: Form<C>,
        theta: Option<Form<C>>,
        bounds: &SolveBounds,
    ) -> Result<Self, GaugeError> {
        if q.grading() != Grading::new(Parity::Odd, 1) {
            return Err(GaugeError::GeneratorGrading(q.grading()));
        }
        let qq = q.commutator(&ctx, &q)?;
        if let Some((f, _)) = qq.sources().next() {
            return Err(GaugeError::NotNilpotent(ctx.field_name(*f).to_string()));
        }
        omega.expect_bidegree(ctx.dim() as u32, 2)?;
        if !omega.delta().is_zero() {
            return Err(GaugeError::NotVerticallyClosed);
        }
        if let Some(theta) = &theta {
            if &theta.delta() != &omega {
                return Err(GaugeError::PotentialMismatch);
            }
        }
        let flow = omega.lie(&ctx, &q)?;
        let omega1 = invert_d(&ctx, bounds, &flow)?;
        Ok(GaugeSystem { ctx, q, omega, theta, omega1 })
    }

    pub fn ctx(&self) -> &JetContext {
        &self.ctx
    }

    pub fn generator(&self) -> &EvolutionaryVectorField<C> {
        &self.q
    }

    pub fn omega(&self) -> &Form<C> {
        &self.omega
    }

    pub fn potential(&self) -> Option<&Form<C>> {
        self.theta.as_ref()
    }

    /// Boundary form with d(ω₁) = L_Q ω.
    pub fn omega1(&self) -> &Form<C> {
        &self.omega1
    }

    /// Finds a generator for X against ω: first the exact split
    /// i_X ω = δH + dσ, then, failing that, the same split modulo the
    /// stationary surface of Q.
    pub fn hamiltonian_of(
        &self,
        x: &EvolutionaryVectorField<C>,
        bounds: &SolveBounds,
    ) -> Result<HamiltonianPair<C>, GaugeError> {
        self.hamiltonian_against(&self.omega, x, bounds)
    }

    /// Same split against an arbitrary form (e.g. a descent level).
    pub fn hamiltonian_against(
        &self,
        omega: &Form<C>,
        x: &EvolutionaryVectorField<C>,
        bounds: &SolveBounds,
    ) -> Result<HamiltonianPair<C>, GaugeError> {
        let target = omega.contract(&self.ctx, x)?;
        match solve_delta_d(&self.ctx, bounds, &target) {
            Ok((h, sigma)) => {
                let mut witness = WeakWitness::empty();
                witness.sigma = sigma;
                Ok(HamiltonianPair { hamiltonian: h, witness })
            }
            Err(SolveError::NoSolution(_)) => {
                match solve_delta_modulo_shell(&self.ctx, bounds, &self.q, &target)? {
                    Some((h, witness)) => Ok(HamiltonianPair { hamiltonian: h, witness }),
                    None => Err(GaugeError::Solve(SolveError::NotHamiltonian(format!(
                        "no generator within bounds ({})",
                        bounds.describe()
                    )))),
                }
            }
            Err(e) => Err(e.into()),
        }
    }

    /// Bracket of two generators through their evolutionary fields:
    /// (-1)^{ε(X_A)} i_{X_A} i_{X_B} ω for the supplied level form.
    pub fn bracket_with(
        &self,
        omega: &Form<C>,
        xa: &EvolutionaryVectorField<C>,
        xb: &EvolutionaryVectorField<C>,
    ) -> Result<Form<C>, GaugeError> {
        let inner = omega.contract(&self.ctx, xb)?;
        let outer = inner.contract(&self.ctx, xa)?;
        Ok(if xa.parity() == Parity::Odd { -outer } else { outer })
    }

    pub fn bracket(
        &self,
        xa: &EvolutionaryVectorField<C>,
        xb: &EvolutionaryVectorField<C>,
    ) -> Result<Form<C>, GaugeError> {
        self.bracket_with(&self.omega, xa, xb)
    }

    /// A symmetry of the dynamics is an evolutionary field commuting with
    /// the generator.
    pub fn is_symmetry(&self, x: &EvolutionaryVectorField<C>) -> Result<bool, GaugeError> {
        Ok(self.q.commutator(&self.ctx, x)?.is_zero())
    }

    /// Classifies a symmetry as gauge-exact (X = [Q, Y]) or genuine. The
    /// search for Y is a bounded linear problem over coefficient monomials;
    /// a positive answer is re-checked through the commutator.
    pub fn is_gauge_symmetry(
        &self,
        x: &EvolutionaryVectorField<C>,
        bounds: &SolveBounds,
    ) -> Result<GaugeTriviality<C>, GaugeError> {
        let comm = self.q.commutator(&self.ctx, x)?;
        if !comm.is_zero() {
            // [Q, [Q, Y]] = 0 always, so a non-commuting X cannot be exact.
            return Ok(GaugeTriviality::Nontrivial { definitive: true });
        }
        let y_grading = Grading::new(
            x.grading().parity + self.q.grading().parity,
            x.grading().ghost - self.q.grading().ghost,
        );
        // Candidates for Y need at most one more field factor than X shows,
        // since the commutator with Q never lowers the field degree by more
        // than the degree of a Q source.
        let x_degree = x
            .sources()
            .flat_map(|(_, s)| s.iter().map(|(m, _)| m.field_degree()))
            .max()
            .unwrap_or(0);
        let derived = SolveBounds {
            max_field_degree: bounds.max_field_degree.min(x_degree + 1),
            ..*bounds
        };
        let mut truncated = false;
        let mut solver = LinearSolver::new();
        let mut columns: Vec<(FieldId, crate::ring::Monomial)> = Vec::new();
        for f in self.ctx.field_ids() {
            let target = self.ctx.field_grading(f) + y_grading;
            let (monos, t) = pools::enumerate_coefficient_monomials(&self.ctx, &derived, target);
            truncated |= t;
            for m in monos {
                let y_unit = EvolutionaryVectorField::with_grading(
                    &self.ctx,
                    BTreeMap::from([(f, GradedPoly::term(m.clone(), C::one()))]),
                    y_grading,
                )?;
                let img = self.encode(&self.q.commutator(&self.ctx, &y_unit)?);
                if !img.is_zero() {
                    solver.add_column(&img);
                    columns.push((f, m));
                }
            }
        }
        match solver.solve(&self.encode(x)) {
            Some(sol) => {
                let mut sources: BTreeMap<FieldId, GradedPoly<C>> = BTreeMap::new();
                for (col, c) in sol {
                    let (f, m) = &columns[col];
                    sources.entry(*f).or_insert_with(GradedPoly::zero).add_term(m.clone(), c);
                }
                let y = EvolutionaryVectorField::with_grading(&self.ctx, sources, y_grading)?;
                let check = self.q.commutator(&self.ctx, &y)?;
                assert!(x
                    .sources()
                    .all(|(f, s)| &check.source(*f) == s)
                    && check.sources().all(|(f, s)| &x.source(*f) == s),
                    "gauge generator failed re-substitution");
                Ok(GaugeTriviality::Trivial(y))
            }
            None => {
                let _ = truncated;
                Ok(GaugeTriviality::Nontrivial { definitive: false })
            }
        }
    }

    /// Injective linear encoding of an evolutionary field as a vertical
    /// one-form Σ_a X^a δφ^a, so field-spanning linear systems can reuse the
    /// monomial-row solver.
    fn encode(&self, x: &EvolutionaryVectorField<C>) -> GradedPoly<C> {
        let mut out = GradedPoly::zero();
        let empty = self.ctx.multi_index(&[]).expect("empty index");
        for (f, s) in x.sources() {
            let marker = self.ctx.contact_gen(*f, &empty).expect("order zero");
            out.add_assign(&s.mul(&GradedPoly::from_gen(marker)));
        }
        out
    }

    /// An observable is a horizontal form (no contact factors) whose
    /// Q-variation is a horizontal differential. At top horizontal degree
    /// this is decided exactly by the vanishing of the variational
    /// derivative; below top degree the decision defers to `is_d_exact`,
    /// whose closure test alone settles most negatives.
    pub fn is_observable(
        &self,
        alpha: &Form<C>,
        bounds: &SolveBounds,
    ) -> Result<bool, GaugeError> {
        if alpha.is_zero() {
            return Ok(true);
        }
        let n = self.ctx.dim() as u32;
        let (p, vertical) = alpha.bidegree_of()?;
        if vertical != 0 || p > n {
            return Err(GaugeError::Algebra(AlgebraError::Bidegree {
                expected: format!("horizontal form of degree at most {n}"),
                found: format!("({p}, {vertical})"),
            }));
        }
        let flow = alpha.lie(&self.ctx, &self.q)?;
        if flow.is_zero() {
            return Ok(true);
        }
        if p == n {
            return Ok(euler_lagrange(&self.ctx, &flow)?.is_zero());
        }
        Ok(is_d_exact(&self.ctx, bounds, &flow)?.is_exact())
    }

    /// Descent tower of the presymplectic form. Each step solves
    /// dω_{k+1} = L_Q ω_k; the walk stops when the flow vanishes or the next
    /// level is weakly trivial, and each recorded level is tagged with its
    /// nontriviality.
    pub fn descend(&self, bounds: &SolveBounds) -> Result<DescentChain<C>, GaugeError> {
        let mut levels: Vec<DescentLevel<C>> = Vec::new();
        let mut current = self.omega.clone();
        for level in 0..(self.ctx.dim() as usize + 2) {
            let nontrivial =
                is_weakly_zero(&self.ctx, bounds, &self.q, &current)?.is_none();
            levels.push(DescentLevel { omega: current.clone(), nontrivial });
            if !nontrivial {
                break;
            }
            let flow = current.lie(&self.ctx, &self.q)?;
            if flow.is_zero() {
                break;
            }
            current = if level == 0 {
                self.omega1.clone()
            } else {
                invert_d(&self.ctx, bounds, &flow).map_err(|e| GaugeError::DescentStalled {
                    level: level + 1,
                    reason: e.to_string(),
                })?
            };
        }
        Ok(DescentChain { levels })
    }

    /// Conserved-current tower of an observable: repeatedly writes the
    /// Q-variation as a total divergence, α_{k+1} with dα_{k+1} = L_Q α_k.
    /// Each level's current satisfies d(current) = i_Q(character) with
    /// character = δα_k, which is checked by substitution.
    pub fn conservation_descent(
        &self,
        alpha: &Form<C>,
        bounds: &SolveBounds,
    ) -> Result<Vec<ConservationLaw<C>>, GaugeError> {
        alpha.expect_bidegree(self.ctx.dim() as u32, 0)?;
        if !self.is_observable(alpha, bounds)? {
            return Err(GaugeError::NotObservable);
        }
        let mut laws = Vec::new();
        let mut current = alpha.clone();
        for level in 1..=(self.ctx.dim() as usize) {
            let flow = current.lie(&self.ctx, &self.q)?;
            if flow.is_zero() {
                break;
            }
            let next = invert_d(&self.ctx, bounds, &flow).map_err(|e| {
                GaugeError::DescentStalled { level, reason: e.to_string() }
            })?;
            let character = current.delta();
            let lhs = next.d(&self.ctx)?;
            let rhs = character.contract(&self.ctx, &self.q)?;
            assert_eq!(lhs, rhs, "conservation identity failed at level {level}");
            laws.push(ConservationLaw { level, current: next.clone(), character });
            current = next;
        }
        Ok(laws)
    }

    /// Current data of the generator: density and flux from
    /// i_Q ω = δ(density) + d(flux), the improved level-one current
    /// L₁' = L₁ + i_Q(flux) with i_Q ω₁ = δL₁ + d(·), and the witness that
    /// the level-one self-bracket of the current dies on the stationary
    /// surface.
    pub fn brst_current(&self, bounds: &SolveBounds) -> Result<CurrentDescent<C>, GaugeError> {
        let target = self.omega.contract(&self.ctx, &self.q)?;
        let (density, flux) = solve_delta_d(&self.ctx, bounds, &target)?;
        let target1 = self.omega1.contract(&self.ctx, &self.q)?;
        let (l1, _flux1) = solve_delta_d(&self.ctx, bounds, &target1)?;
        let current = &l1 + &flux.contract(&self.ctx, &self.q)?;
        // The improved current absorbs the flux so that it generates 2Q at
        // level one: 2 i_Q ω₁ − δ(current) must be a boundary.
        let residue = &target1.scale(&crate::scalar::int(2)) - &current.delta();
        let improvement = if residue.is_zero() {
            Form::zero()
        } else {
            invert_d(&self.ctx, bounds, &residue).map_err(|e| {
                SolveError::NoSolution(format!(
                    "improved current does not generate the level-one flow: {e}"
                ))
            })?
        };
        // Self-bracket at level one: (-1)^{ε}·i_{2Q} i_{2Q} ω₁ for the field
        // 2Q generated by the current.
        let inner = self.omega1.contract(&self.ctx, &self.q)?;
        let master_form = inner.contract(&self.ctx, &self.q)?.scale(&crate::scalar::int(-4));
        let master = is_weakly_zero(&self.ctx, bounds, &self.q, &master_form)?.ok_or_else(
            || {
                SolveError::NoSolution(format!(
                    "level-one self-bracket not weakly trivial within bounds ({})",
                    bounds.describe()
                ))
            },
        )?;
        Ok(CurrentDescent { density, flux, current, improvement, master })
    }

    /// Generators of X along the descent tower: level k solves
    /// i_X ω_k − L_Q σ_{k-1} = δH_k + dσ_k, threading the previous boundary
    /// through the Q-variation.
    pub fn hamiltonian_chain(
        &self,
        x: &EvolutionaryVectorField<C>,
        chain: &DescentChain<C>,
        bounds: &SolveBounds,
    ) -> Result<Vec<HamiltonianPair<C>>, GaugeError> {
        if !self.is_symmetry(x)? {
            return Err(GaugeError::Solve(SolveError::NotHamiltonian(
                "the field does not commute with the generator".to_string(),
            )));
        }
        let mut out = Vec::new();
        let mut prev_boundary = Form::zero();
        for level in &chain.levels {
            let contracted = level.omega.contract(&self.ctx, x)?;
            let carried = prev_boundary.lie(&self.ctx, &self.q)?;
            let target = &contracted - &carried;
            let (h, sigma) = solve_delta_d(&self.ctx, bounds, &target)?;
            let mut witness = WeakWitness::empty();
            witness.sigma = sigma.clone();
            out.push(HamiltonianPair { hamiltonian: h, witness });
            prev_boundary = sigma;
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forms::Form;
    use crate::jets::FieldSpec;
    use crate::scalar::ratio;
    use num_rational::BigRational;

    type F = Form<BigRational>;
    type P = GradedPoly<BigRational>;

    /// Contractible model on a line: an even field φ with ghost partner c
    /// and odd/even duals fs, cs. Q maps φ → c and cs → −fs, squares to
    /// zero, and ω pairs the variations so that L_Q ω = 0 on the nose.
    struct Toy {
        ctx: JetContext,
        phi: FieldId,
        c: FieldId,
        fs: FieldId,
        cs: FieldId,
        q: EvolutionaryVectorField<BigRational>,
        omega: F,
    }

    fn toy() -> Toy {
        let mut ctx = JetContext::new(1, 4);
        let phi = ctx.declare_field(FieldSpec::scalar("phi", Grading::even()));
        let c = ctx.declare_field(FieldSpec::scalar("c", Grading::new(Parity::Odd, 1)));
        let fs = ctx.declare_field(FieldSpec::scalar("fs", Grading::new(Parity::Odd, -1)));
        let cs = ctx.declare_field(FieldSpec::scalar("cs", Grading::new(Parity::Even, -2)));
        let (phi, c, fs, cs) = (
            ctx.family_components(phi)[0],
            ctx.family_components(c)[0],
            ctx.family_components(fs)[0],
            ctx.family_components(cs)[0],
        );
        let q = EvolutionaryVectorField::new(
            &ctx,
            BTreeMap::from([
                (phi, ctx.jet::<BigRational>(c, &[]).unwrap()),
                (cs, -ctx.jet::<BigRational>(fs, &[]).unwrap()),
            ]),
        )
        .unwrap();
        let contact = |ctx: &JetContext, f: FieldId| -> F {
            F::from_gen(ctx.contact_gen(f, &ctx.multi_index(&[]).unwrap()).unwrap())
        };
        let dx = F::from_gen(crate::generator::Gen::dx(0));
        let omega = &contact(&ctx, phi).wedge(&contact(&ctx, fs)).wedge(&dx)
            + &contact(&ctx, c).wedge(&contact(&ctx, cs)).wedge(&dx);
        Toy { ctx, phi, c, fs, cs, q, omega }
    }

    fn system(t: &Toy) -> GaugeSystem<BigRational> {
        GaugeSystem::new(
            t.ctx.clone(),
            t.q.clone(),
            t.omega.clone(),
            None,
            &SolveBounds::default(),
        )
        .unwrap()
    }

    #[test]
    fn toy_generator_is_homological_and_flow_invariant() {
        let t = toy();
        assert!(check_homological(&t.ctx, &t.q).unwrap());
        // L_Q ω vanishes identically for this pairing, so the boundary form
        // of the system is zero and descent stops at the top level. The
        // shell of Q sets every c and fs jet to zero, so ω itself is weakly
        // trivial: a contractible system carries no invariant content.
        let sys = system(&t);
        assert!(sys.omega1().is_zero());
        let chain = sys.descend(&SolveBounds::default()).unwrap();
        assert_eq!(chain.levels.len(), 1);
        assert!(!chain.levels[0].nontrivial);
        assert_eq!(chain.length(), 0);
    }

    #[test]
    fn rejects_wrong_generator_grading() {
        let t = toy();
        let even = EvolutionaryVectorField::with_grading(
            &t.ctx,
            BTreeMap::from([(t.phi, t.ctx.jet::<BigRational>(t.phi, &[]).unwrap())]),
            Grading::even(),
        )
        .unwrap();
        match GaugeSystem::new(t.ctx.clone(), even, t.omega.clone(), None, &SolveBounds::default())
        {
            Err(GaugeError::GeneratorGrading(_)) => {}
            other => panic!("expected grading rejection, got {other:?}"),
        }
    }

    #[test]
    fn rejects_non_nilpotent_generator() {
        // C → b, b → C·b: the square acts on C by C·b ≠ 0.
        let mut ctx = JetContext::new(1, 2);
        let cc = ctx.declare_field(FieldSpec::scalar("C", Grading::new(Parity::Odd, 1)));
        let b = ctx.declare_field(FieldSpec::scalar("b", Grading::new(Parity::Even, 2)));
        let (cc, b) = (ctx.family_components(cc)[0], ctx.family_components(b)[0]);
        let q = EvolutionaryVectorField::new(
            &ctx,
            BTreeMap::from([
                (cc, ctx.jet::<BigRational>(b, &[]).unwrap()),
                (b, ctx.jet::<BigRational>(cc, &[]).unwrap().mul(&ctx.jet(b, &[]).unwrap())),
            ]),
        )
        .unwrap();
        assert!(!check_homological(&ctx, &q).unwrap());
        let omega = F::zero();
        match GaugeSystem::new(ctx, q, omega, None, &SolveBounds::default()) {
            Err(GaugeError::NotNilpotent(name)) => assert_eq!(name, "C"),
            other => panic!("expected nilpotency rejection, got {other:?}"),
        }
    }

    #[test]
    fn rejects_mismatched_potential() {
        let t = toy();
        let bogus = F::from_poly(t.ctx.jet::<BigRational>(t.phi, &[]).unwrap());
        match GaugeSystem::new(
            t.ctx.clone(),
            t.q.clone(),
            t.omega.clone(),
            Some(bogus),
            &SolveBounds::default(),
        ) {
            Err(GaugeError::PotentialMismatch) => {}
            other => panic!("expected potential rejection, got {other:?}"),
        }
    }

    #[test]
    fn generator_of_q_is_strong_and_self_bracket_vanishes() {
        let t = toy();
        let sys = system(&t);
        let pair = sys.hamiltonian_of(&t.q, &SolveBounds::default()).unwrap();
        assert!(pair.is_strong());
        // i_Q ω = δH + dσ re-substitutes.
        let recon = &pair.hamiltonian.delta() + &pair.witness.sigma.d(&t.ctx).unwrap();
        assert_eq!(recon, sys.omega().contract(&t.ctx, &t.q).unwrap());
        // i_Q i_Q ω = 0 here, so the self-bracket vanishes identically.
        assert!(sys.bracket(&t.q, &t.q).unwrap().is_zero());
    }

    #[test]
    fn commutator_bracket_classification() {
        let t = toy();
        let sys = system(&t);
        // δ_Y φ = φ gives X = [Q, Y] with δ_X φ = c: a trivial symmetry the
        // search must recover.
        let x = EvolutionaryVectorField::new(
            &t.ctx,
            BTreeMap::from([(t.phi, t.ctx.jet::<BigRational>(t.c, &[]).unwrap())]),
        )
        .unwrap();
        assert!(sys.is_symmetry(&x).unwrap());
        match sys.is_gauge_symmetry(&x, &SolveBounds::default()).unwrap() {
            GaugeTriviality::Trivial(y) => {
                let back = t.q.commutator(&t.ctx, &y).unwrap();
                assert_eq!(back.source(t.phi), x.source(t.phi));
            }
            other => panic!("expected a trivial symmetry, got {other:?}"),
        }
        // A constant shift of c fails to commute with Q, which settles the
        // question definitively.
        let shift = EvolutionaryVectorField::with_grading(
            &t.ctx,
            BTreeMap::from([(t.c, P::constant(ratio(1, 1)))]),
            Grading::new(Parity::Odd, -1),
        )
        .unwrap();
        assert!(!sys.is_symmetry(&shift).unwrap());
        match sys.is_gauge_symmetry(&shift, &SolveBounds::default()).unwrap() {
            GaugeTriviality::Nontrivial { definitive } => assert!(definitive),
            other => panic!("expected nontrivial, got {other:?}"),
        }
        // The shift of cs commutes with Q and is exact: cs-shift = ±[Q, fs-shift].
        let cs_shift = EvolutionaryVectorField::with_grading(
            &t.ctx,
            BTreeMap::from([(t.cs, P::constant(ratio(1, 1)))]),
            Grading::new(Parity::Even, 2),
        )
        .unwrap();
        assert!(sys.is_symmetry(&cs_shift).unwrap());
        match sys.is_gauge_symmetry(&cs_shift, &SolveBounds::default()).unwrap() {
            GaugeTriviality::Trivial(y) => {
                assert!(!y.source(t.fs).is_zero());
            }
            other => panic!("expected a trivial symmetry, got {other:?}"),
        }
    }

    #[test]
    fn observables_by_variational_derivative() {
        let t = toy();
        let sys = system(&t);
        let dx = F::from_gen(crate::generator::Gen::dx(0));
        // c·fs is Q-invariant on the nose.
        let good = F::from_poly(
            t.ctx.jet::<BigRational>(t.c, &[]).unwrap().mul(&t.ctx.jet(t.fs, &[]).unwrap()),
        )
        .wedge(&dx);
        let bounds = SolveBounds::default();
        assert!(sys.is_observable(&good, &bounds).unwrap());
        // φ·fs varies into c·fs, whose variational derivative is nonzero.
        let bad = F::from_poly(
            t.ctx.jet::<BigRational>(t.phi, &[]).unwrap().mul(&t.ctx.jet(t.fs, &[]).unwrap()),
        )
        .wedge(&dx);
        assert!(!sys.is_observable(&bad, &bounds).unwrap());
        // A bare coordinate function is not horizontal-degree-n, but its
        // Q-variation (zero) still qualifies it.
        let x0 = F::from_gen(crate::generator::Gen::base(0));
        assert!(sys.is_observable(&x0, &bounds).unwrap());
        // φ at degree zero varies into the function c, which is not a
        // horizontal differential of anything.
        let phi0 = F::from_poly(t.ctx.jet::<BigRational>(t.phi, &[]).unwrap());
        assert!(!sys.is_observable(&phi0, &bounds).unwrap());
        // Its conservation tower is empty: the variation stops immediately.
        assert!(sys.conservation_descent(&good, &SolveBounds::default()).unwrap().is_empty());
    }

    #[test]
    fn current_descent_on_a_closed_system_degenerates() {
        let t = toy();
        let sys = system(&t);
        let current = sys.brst_current(&SolveBounds::default()).unwrap();
        let target = sys.omega().contract(&t.ctx, &t.q).unwrap();
        let recon = &current.density.delta() + &current.flux.d(&t.ctx).unwrap();
        assert_eq!(recon, target);
        // ω₁ = 0 collapses the level-one data.
        assert!(current.master.reconstruct(&t.ctx, &t.q).unwrap().is_zero());
    }

    #[test]
    fn hamiltonian_chain_threads_boundaries() {
        let t = toy();
        let sys = system(&t);
        let chain = sys.descend(&SolveBounds::default()).unwrap();
        let pairs = sys.hamiltonian_chain(&t.q, &chain, &SolveBounds::default()).unwrap();
        assert_eq!(pairs.len(), 1);
        let recon = &pairs[0].hamiltonian.delta() + &pairs[0].witness.sigma.d(&t.ctx).unwrap();
        assert_eq!(recon, sys.omega().contract(&t.ctx, &t.q).unwrap());
    }
}
