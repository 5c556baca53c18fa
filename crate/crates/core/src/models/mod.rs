//! Concrete gauge models over exact rationals.
//!
//! A model bundles a flat geometry, a jet context with form-valued field
//! families, the homological generator and presymplectic structure, a
//! dictionary of named forms and evolutionary fields, and a manifest of
//! identities to check. Every manifest record states a claim about named
//! data; running the manifest produces machine-checkable outcomes whose
//! positive answers were verified by substitution, never by trust.

pub mod expand;
pub mod geometry;
pub mod maxwell;

use std::collections::BTreeMap;

use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::cohomology::{is_d_exact, is_weakly_zero, Exactness, SolveBounds};
use crate::error::AlgebraError;
use crate::forms::Form;
use crate::gauge::{check_homological, DescentChain, GaugeError, GaugeSystem, GaugeTriviality};
use crate::jets::{EvolutionaryVectorField, JetContext};

use geometry::FlatGeometry;

pub type R = BigRational;

/// One row of the generator table: a named form generating a named field at
/// a descent level.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct NamedGenerator {
    pub name: String,
    pub form: String,
    pub field: String,
    pub level: usize,
}

/// The checkable claim of a manifest record. Names refer to the bundle's
/// form and field dictionaries.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CheckKind {
    /// The generator is odd, raises ghost number by one, and squares to
    /// zero.
    Homological,
    /// The structure form has bidegree (n, 2), is vertical-closed, and is
    /// the vertical differential of the declared potential, when present.
    Presymplectic,
    /// The descent tower of the structure form terminates; optionally pins
    /// its length (the largest level that is not weakly trivial).
    Descent { expect_length: Option<usize> },
    /// The engine's descent level agrees with a named form up to a total
    /// derivative.
    DescentMatches { level: usize, form: String },
    /// Two named forms are identical.
    Equal { lhs: String, rhs: String },
    /// A named form is a total derivative, with a recovered potential.
    TotalDerivative { form: String },
    /// Two named forms differ by a total derivative.
    EquivalentStrong { lhs: String, rhs: String },
    /// Two named forms agree modulo the stationary surface and boundaries.
    EquivalentWeak { lhs: String, rhs: String },
    /// A named form dies on the stationary surface modulo boundaries.
    WeaklyZero { form: String },
    /// A named form is annihilated by the generator on the nose.
    Invariant { form: String },
    /// Whether a named field commutes with the generator.
    Symmetry { field: String, expect: bool },
    /// Whether a named symmetry is generated by a commutator with Q.
    GaugeTriviality { field: String, expect_trivial: bool },
    /// Whether a named horizontal form has a Q-variation that is a total
    /// derivative.
    Observable { form: String, expect: bool },
    /// The conserved-current tower seeded by a named density has the given
    /// number of levels.
    ConservationChain { form: String, expect_levels: usize },
    /// A named form generates a named field against a named structure form,
    /// either exactly up to a boundary or modulo the stationary surface.
    Hamiltonian { omega: String, field: String, form: String, strong: bool },
    /// The generator tower of a named symmetry along the descent chain has
    /// the given number of levels, each re-substituted.
    HamiltonianChain { field: String, expect_levels: usize },
    /// The bracket of two generator-table rows at a level equals a named
    /// form exactly.
    Bracket { a: String, b: String, level: usize, expect: String },
    /// The improved current of the generator exists and its level-one
    /// self-bracket dies on the stationary surface.
    Master,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    /// Human-readable claim, echoed into certificates.
    pub statement: String,
    #[serde(flatten)]
    pub kind: CheckKind,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CheckOutcome {
    pub name: String,
    pub statement: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ModelReport {
    pub model: String,
    pub records: Vec<CheckOutcome>,
    pub all_passed: bool,
}

/// A fully materialized model: geometry, jet data, generator, structure
/// form, dictionaries, and its manifest.
#[derive(Debug, Clone)]
pub struct ModelBundle {
    pub name: String,
    pub geometry: FlatGeometry,
    pub ctx: JetContext,
    pub q: EvolutionaryVectorField<R>,
    pub omega: Form<R>,
    pub theta: Option<Form<R>>,
    pub bounds: SolveBounds,
    pub forms: BTreeMap<String, Form<R>>,
    pub fields: BTreeMap<String, EvolutionaryVectorField<R>>,
    pub generators: Vec<NamedGenerator>,
    /// Structure form per descent level, by name into `forms`.
    pub level_forms: BTreeMap<usize, String>,
    pub checks: Vec<Check>,
}

impl ModelBundle {
    pub fn form(&self, name: &str) -> Result<&Form<R>, AlgebraError> {
        self.forms.get(name).ok_or_else(|| AlgebraError::UnknownName(name.to_string()))
    }

    pub fn field(&self, name: &str) -> Result<&EvolutionaryVectorField<R>, AlgebraError> {
        self.fields.get(name).ok_or_else(|| AlgebraError::UnknownName(name.to_string()))
    }

    /// Constructs the gauge system, re-validating the generator and the
    /// structure form.
    pub fn system(&self) -> Result<GaugeSystem<R>, GaugeError> {
        GaugeSystem::new(
            self.ctx.clone(),
            self.q.clone(),
            self.omega.clone(),
            self.theta.clone(),
            &self.bounds,
        )
    }

    /// Runs the manifest in order. A failed homological record halts the
    /// run — nothing downstream of a non-squaring generator is meaningful.
    pub fn run_checks(&self) -> ModelReport {
        let mut records = Vec::new();
        let mut sys: Option<GaugeSystem<R>> = None;
        let mut chain: Option<DescentChain<R>> = None;
        for check in &self.checks {
            let (passed, detail) = match self.run_one(&check.kind, &mut sys, &mut chain) {
                Ok(pair) => pair,
                Err(e) => (false, e.to_string()),
            };
            records.push(CheckOutcome {
                name: check.name.clone(),
                statement: check.statement.clone(),
                passed,
                detail,
            });
            if !passed && matches!(check.kind, CheckKind::Homological) {
                break;
            }
        }
        let all_passed =
            records.len() == self.checks.len() && records.iter().all(|r| r.passed);
        ModelReport { model: self.name.clone(), records, all_passed }
    }

    fn get_system<'a>(
        &self,
        sys: &'a mut Option<GaugeSystem<R>>,
    ) -> Result<&'a GaugeSystem<R>, GaugeError> {
        if sys.is_none() {
            *sys = Some(self.system()?);
        }
        Ok(sys.as_ref().expect("just constructed"))
    }

    fn get_chain<'a>(
        &self,
        sys: &mut Option<GaugeSystem<R>>,
        chain: &'a mut Option<DescentChain<R>>,
    ) -> Result<&'a DescentChain<R>, GaugeError> {
        if chain.is_none() {
            let s = self.get_system(sys)?;
            *chain = Some(s.descend(&self.bounds)?);
        }
        Ok(chain.as_ref().expect("just constructed"))
    }

    fn strong_difference(&self, diff: &Form<R>) -> Result<(bool, String), GaugeError> {
        if diff.is_zero() {
            return Ok((true, "identical".to_string()));
        }
        match is_d_exact(&self.ctx, &self.bounds, diff)? {
            Exactness::Exact(w) => {
                assert_eq!(&w.d(&self.ctx)?, diff, "potential failed re-substitution");
                Ok((true, "equal up to a re-substituted total derivative".to_string()))
            }
            Exactness::No { definitive, reason } => Ok((
                false,
                if definitive {
                    format!("difference is not a total derivative: {reason}")
                } else {
                    format!("no potential within bounds: {reason}")
                },
            )),
        }
    }

    fn weak_difference(&self, diff: &Form<R>) -> Result<(bool, String), GaugeError> {
        if diff.is_zero() {
            return Ok((true, "identical".to_string()));
        }
        match is_weakly_zero(&self.ctx, &self.bounds, &self.q, diff)? {
            Some(w) => {
                assert_eq!(
                    &w.reconstruct(&self.ctx, &self.q)?,
                    diff,
                    "on-shell witness failed re-substitution"
                );
                Ok((true, "vanishes on the stationary surface modulo boundaries".to_string()))
            }
            None => Ok((false, "no on-shell witness within bounds".to_string())),
        }
    }

    fn run_one(
        &self,
        kind: &CheckKind,
        sys: &mut Option<GaugeSystem<R>>,
        chain: &mut Option<DescentChain<R>>,
    ) -> Result<(bool, String), GaugeError> {
        match kind {
            CheckKind::Homological => {
                let ok = check_homological(&self.ctx, &self.q)?;
                Ok(if ok {
                    (true, "generator is odd, raises ghost number by one, squares to zero"
                        .to_string())
                } else {
                    (false, "generator does not square to zero".to_string())
                })
            }
            CheckKind::Presymplectic => {
                let n = self.ctx.dim() as u32;
                self.omega.expect_bidegree(n, 2)?;
                if !self.omega.delta().is_zero() {
                    return Ok((false, "structure form is not vertical-closed".to_string()));
                }
                if let Some(theta) = &self.theta {
                    if &theta.delta() != &self.omega {
                        return Ok((
                            false,
                            "potential's vertical differential misses the form".to_string(),
                        ));
                    }
                }
                Ok((true, "vertical-closed with matching potential".to_string()))
            }
            CheckKind::Descent { expect_length } => {
                let chain = self.get_chain(sys, chain)?;
                let length = chain.length();
                let flags: Vec<String> = chain
                    .levels
                    .iter()
                    .enumerate()
                    .map(|(k, l)| {
                        format!("{k}:{}", if l.nontrivial { "nontrivial" } else { "trivial" })
                    })
                    .collect();
                let detail = format!("length {length}; levels {}", flags.join(", "));
                Ok((expect_length.map_or(true, |e| e == length), detail))
            }
            CheckKind::DescentMatches { level, form } => {
                let expect = self.form(form)?.clone();
                let chain = self.get_chain(sys, chain)?;
                if *level >= chain.levels.len() {
                    return Ok((false, format!("chain has {} levels", chain.levels.len())));
                }
                let diff = &chain.levels[*level].omega - &expect;
                self.strong_difference(&diff)
            }
            CheckKind::Equal { lhs, rhs } => {
                let ok = self.form(lhs)? == self.form(rhs)?;
                Ok((ok, if ok { "exact equality".to_string() } else { "forms differ".to_string() }))
            }
            CheckKind::TotalDerivative { form } => {
                let f = self.form(form)?;
                match is_d_exact(&self.ctx, &self.bounds, f)? {
                    Exactness::Exact(w) => {
                        assert_eq!(&w.d(&self.ctx)?, f, "potential failed re-substitution");
                        Ok((true, "potential recovered and re-substituted".to_string()))
                    }
                    Exactness::No { definitive, reason } => Ok((
                        false,
                        if definitive {
                            format!("not a total derivative: {reason}")
                        } else {
                            format!("no potential within bounds: {reason}")
                        },
                    )),
                }
            }
            CheckKind::EquivalentStrong { lhs, rhs } => {
                let diff = &self.form(lhs)?.clone() - self.form(rhs)?;
                self.strong_difference(&diff)
            }
            CheckKind::EquivalentWeak { lhs, rhs } => {
                let diff = &self.form(lhs)?.clone() - self.form(rhs)?;
                self.weak_difference(&diff)
            }
            CheckKind::WeaklyZero { form } => {
                let f = self.form(form)?.clone();
                self.weak_difference(&f)
            }
            CheckKind::Invariant { form } => {
                let ok = self.form(form)?.lie(&self.ctx, &self.q)?.is_zero();
                Ok((
                    ok,
                    if ok { "annihilated by the generator" } else { "variation is nonzero" }
                        .to_string(),
                ))
            }
            CheckKind::Symmetry { field, expect } => {
                let x = self.field(field)?;
                let actual = self.get_system(sys)?.is_symmetry(x)?;
                Ok((
                    actual == *expect,
                    format!(
                        "commutator with the generator {}",
                        if actual { "vanishes" } else { "is nonzero" }
                    ),
                ))
            }
            CheckKind::GaugeTriviality { field, expect_trivial } => {
                let x = self.field(field)?.clone();
                let (actual, detail) =
                    match self.get_system(sys)?.is_gauge_symmetry(&x, &self.bounds)? {
                        GaugeTriviality::Trivial(_) => {
                            (true, "trivializing field found and re-checked".to_string())
                        }
                        GaugeTriviality::Nontrivial { definitive } => (
                            false,
                            if definitive {
                                "not a symmetry of the generator (definitive)".to_string()
                            } else {
                                "no trivializing field within bounds".to_string()
                            },
                        ),
                    };
                Ok((actual == *expect_trivial, detail))
            }
            CheckKind::Observable { form, expect } => {
                let f = self.form(form)?;
                let actual = self.get_system(sys)?.is_observable(f, &self.bounds)?;
                Ok((
                    actual == *expect,
                    format!(
                        "Q-variation {} a total derivative",
                        if actual { "is" } else { "is not" }
                    ),
                ))
            }
            CheckKind::ConservationChain { form, expect_levels } => {
                let f = self.form(form)?.clone();
                let laws = self.get_system(sys)?.conservation_descent(&f, &self.bounds)?;
                let detail = format!("{} levels, each verified by substitution", laws.len());
                Ok((laws.len() == *expect_levels, detail))
            }
            CheckKind::Hamiltonian { omega, field, form, strong } => {
                let w = self.form(omega)?.clone();
                let h = self.form(form)?.clone();
                let x = self.field(field)?;
                let target = w.contract(&self.ctx, x)?;
                let diff = &target - &h.delta();
                if *strong {
                    self.strong_difference(&diff)
                } else {
                    self.weak_difference(&diff)
                }
            }
            CheckKind::HamiltonianChain { field, expect_levels } => {
                let x = self.field(field)?.clone();
                let chain = self.get_chain(sys, chain)?.clone();
                let pairs = self.get_system(sys)?.hamiltonian_chain(&x, &chain, &self.bounds)?;
                let kinds: Vec<&str> =
                    pairs.iter().map(|p| if p.is_strong() { "strong" } else { "weak" }).collect();
                let detail = format!("{} levels ({})", pairs.len(), kinds.join(", "));
                Ok((pairs.len() == *expect_levels, detail))
            }
            CheckKind::Bracket { a, b, level, expect } => {
                let row = |name: &str| -> Result<&NamedGenerator, GaugeError> {
                    self.generators
                        .iter()
                        .find(|g| g.name == name && g.level == *level)
                        .ok_or_else(|| {
                            GaugeError::Algebra(AlgebraError::UnknownName(format!(
                                "{name} at level {level}"
                            )))
                        })
                };
                let xa = self.field(&row(a)?.field)?.clone();
                let xb = self.field(&row(b)?.field)?.clone();
                let omega_name = self.level_forms.get(level).ok_or_else(|| {
                    GaugeError::Algebra(AlgebraError::UnknownName(format!(
                        "structure form at level {level}"
                    )))
                })?;
                let w = self.form(omega_name)?.clone();
                let value = self.get_system(sys)?.bracket_with(&w, &xa, &xb)?;
                let ok = &value == self.form(expect)?;
                Ok((
                    ok,
                    if ok { "bracket matches exactly" } else { "bracket differs from expectation" }
                        .to_string(),
                ))
            }
            CheckKind::Master => {
                let cur = self.get_system(sys)?.brst_current(&self.bounds)?;
                let detail = format!(
                    "improved current generates the level-one flow; self-bracket witness uses {} stationary terms",
                    cur.master.eom_terms.len() + cur.master.delta_terms.len()
                );
                Ok((true, detail))
            }
        }
    }
}
