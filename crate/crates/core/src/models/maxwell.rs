//! Free electromagnetism on four-dimensional Minkowski space, in first-order
//! homological form.
//!
//! Field content: a gauge potential A (1-form), its ghost C (0-form,
//! ghost +1), and the duals Astar (3-form, ghost −1) and Cstar (4-form,
//! ghost −2). The generator acts by
//!
//!   Q A = dC,  Q C = 0,  Q Astar = d*F,  Q Cstar = dAstar,
//!
//! with F = dA and *F the metric dual. The structure form pairs each
//! variation with its dual's variation; its descent tower has length two and
//! carries the charge content of the theory: the tower of the shift field Y
//! (which moves the ghost by a constant) reproduces the charge densities
//! Cstar, Astar, *F, and the tower of a translation reproduces the
//! energy-momentum current.

use std::collections::BTreeMap;


use crate::cohomology::{invert_d, SolveBounds};
use crate::forms::Form;
use crate::grading::{Grading, Parity};
use crate::jets::{EvolutionaryVectorField, FieldSpec, JetContext};
use crate::ring::GradedPoly;
use crate::scalar::{int, ratio};

use super::expand::{family_contact, family_form, read_components};
use super::geometry::FlatGeometry;
use super::{Check, CheckKind, ModelBundle, NamedGenerator, R};

type F = Form<R>;
type P = GradedPoly<R>;

fn check(name: &str, statement: &str, kind: CheckKind) -> Check {
    Check { name: name.to_string(), statement: statement.to_string(), kind }
}

/// Builds the model with its manifest.
pub fn maxwell() -> ModelBundle {
    let geometry = FlatGeometry::minkowski(4);
    let mut ctx = JetContext::new(4, 4);
    ctx.set_coord_names(&["x0", "x1", "x2", "x3"]);
    let a_fam = ctx.declare_field(FieldSpec::form("A", 1, Grading::even()));
    let c_fam = ctx.declare_field(FieldSpec::scalar("C", Grading::new(Parity::Odd, 1)));
    let astar_fam = ctx.declare_field(FieldSpec::form("Astar", 3, Grading::new(Parity::Odd, -1)));
    let cstar_fam = ctx.declare_field(FieldSpec::form("Cstar", 4, Grading::new(Parity::Even, -2)));

    let a: F = family_form(&ctx, a_fam, &[]).unwrap();
    let c: F = family_form(&ctx, c_fam, &[]).unwrap();
    let astar: F = family_form(&ctx, astar_fam, &[]).unwrap();
    let cstar: F = family_form(&ctx, cstar_fam, &[]).unwrap();
    let f = a.d(&ctx).unwrap();
    let ftilde = geometry.hodge(&f).unwrap();

    // Generator sources, read off the form equations component by component.
    let mut sources: BTreeMap<_, P> = BTreeMap::new();
    sources.extend(read_components(&ctx, a_fam, &[], &c.d(&ctx).unwrap()).unwrap());
    sources.extend(read_components(&ctx, astar_fam, &[], &ftilde.d(&ctx).unwrap()).unwrap());
    sources.extend(read_components(&ctx, cstar_fam, &[], &astar.d(&ctx).unwrap()).unwrap());
    let q = EvolutionaryVectorField::new(&ctx, sources).unwrap();

    let da: F = family_contact(&ctx, a_fam, &[]).unwrap();
    let dc: F = family_contact(&ctx, c_fam, &[]).unwrap();
    let dastar: F = family_contact(&ctx, astar_fam, &[]).unwrap();
    let dcstar: F = family_contact(&ctx, cstar_fam, &[]).unwrap();

    let omega = &da.wedge(&dastar) + &dc.wedge(&dcstar);
    let theta = &a.wedge(&astar.delta()) + &c.wedge(&cstar.delta());
    let omega1 = &dc.wedge(&dastar) + &da.wedge(&ftilde.delta());
    let omega2 = dc.wedge(&ftilde.delta());

    let lagrangian = &f.wedge(&ftilde).scale(&ratio(1, 2)) + &astar.wedge(&c.d(&ctx).unwrap());
    let l1 = c.wedge(&ftilde.d(&ctx).unwrap());

    let bounds = SolveBounds::default();

    // Shift field: moves the ghost by one, leaves everything else alone.
    let c0 = ctx.family_components(c_fam)[0];
    let y = EvolutionaryVectorField::new(&ctx, BTreeMap::from([(c0, P::one())])).unwrap();

    // Time translation acting on every component, and the broken variant
    // whose ghost shift depends on the potential.
    let translation: BTreeMap<_, P> = ctx
        .field_ids()
        .map(|fid| (fid, ctx.jet::<R>(fid, &[0]).unwrap()))
        .collect();
    let x = EvolutionaryVectorField::new(&ctx, translation).unwrap();
    let a0 = ctx.component(a_fam, &[], &[0]).unwrap().unwrap().0;
    let z = EvolutionaryVectorField::new(
        &ctx,
        BTreeMap::from([(c0, ctx.jet::<R>(a0, &[]).unwrap())]),
    )
    .unwrap();

    let xi_translation: Vec<P> = (0..4).map(|i| if i == 0 { P::one() } else { P::zero() }).collect();
    // The relative sign between the two blocks makes the Q-variation a
    // total derivative; with a plus the variation has a nonzero source.
    let xi = &astar.wedge(&a.lie_horizontal(&ctx, &xi_translation).unwrap())
        + &cstar.wedge(&c.lie_horizontal(&ctx, &xi_translation).unwrap());

    // Energy flux of the translation: the engine recovers a potential for
    // the Q-variation of its generator, compared below against the
    // symmetric-tensor expression.
    let lie_q_xi = xi.lie(&ctx, &q).unwrap();
    let energy_current = invert_d(&ctx, &bounds, &lie_q_xi).expect("translation current");
    let theta_oracle = (&f.wedge(&ftilde.contract_horizontal(&ctx, &xi_translation).unwrap())
        - &ftilde.wedge(&f.contract_horizontal(&ctx, &xi_translation).unwrap()))
        .scale(&ratio(1, 2));

    // Component stress tensor contracted with the translation:
    // T_{0ν} = −F_0{}^α F_{να} + ¼ η_{0ν} F^{αβ}F_{αβ}.
    let f_comp = |mu: u8, nu: u8| -> P {
        &ctx.jet::<R>(ctx.component(a_fam, &[], &[nu]).unwrap().unwrap().0, &[mu]).unwrap()
            - &ctx.jet::<R>(ctx.component(a_fam, &[], &[mu]).unwrap().unwrap().0, &[nu]).unwrap()
    };
    let mut f_squared = P::zero();
    for al in 0..4u8 {
        for be in 0..4u8 {
            let scale = int::<R>((geometry.metric(al) * geometry.metric(be)) as i64);
            f_squared.add_assign(&f_comp(al, be).mul(&f_comp(al, be)).scale(&scale));
        }
    }
    let mut stress_contraction = F::zero();
    for nu in 0..4u8 {
        let mut t = P::zero();
        for al in 0..4u8 {
            let scale = int::<R>(-(geometry.metric(al) as i64));
            t.add_assign(&f_comp(0, al).mul(&f_comp(nu, al)).scale(&scale));
        }
        if nu == 0 {
            t.add_assign(&f_squared.scale(&ratio(1, 4)));
        }
        stress_contraction =
            &stress_contraction + &F::from_poly(t).wedge(&super::expand::dx_block(&[nu]));
    }

    let flow_defect = &omega.contract(&ctx, &q).unwrap() - &lagrangian.delta();
    let theta1 = invert_d(&ctx, &bounds, &flow_defect).expect("boundary of the generator flow");
    let l1_improved = &l1 + &theta1.contract(&ctx, &q).unwrap();

    let mut forms: BTreeMap<String, F> = BTreeMap::new();
    for (name, value) in [
        ("A", a.clone()),
        ("C", c.clone()),
        ("Astar", astar.clone()),
        ("Cstar", cstar.clone()),
        ("F", f.clone()),
        ("Ftilde", ftilde.clone()),
        ("omega", omega.clone()),
        ("omega1", omega1.clone()),
        ("omega2", omega2.clone()),
        ("L", lagrangian.clone()),
        ("L1", l1.clone()),
        ("L1_twice", l1.scale(&int(2))),
        ("L1_improved", l1_improved),
        ("theta1", theta1),
        ("flow_defect", flow_defect),
        ("d_omega1", omega1.d(&ctx).unwrap()),
        ("d_omega2", omega2.d(&ctx).unwrap()),
        ("lieQ_omega", omega.lie(&ctx, &q).unwrap()),
        ("lieQ_omega1", omega1.lie(&ctx, &q).unwrap()),
        ("lieQ_L", lagrangian.lie(&ctx, &q).unwrap()),
        ("d_L1", l1.d(&ctx).unwrap()),
        ("lieQ_Cstar", cstar.lie(&ctx, &q).unwrap()),
        ("d_Astar", astar.d(&ctx).unwrap()),
        ("lieQ_Astar", astar.lie(&ctx, &q).unwrap()),
        ("d_Ftilde", ftilde.d(&ctx).unwrap()),
        ("iY_omega", omega.contract(&ctx, &y).unwrap()),
        ("delta_Cstar", cstar.delta()),
        ("iY_omega1", omega1.contract(&ctx, &y).unwrap()),
        ("delta_Astar", astar.delta()),
        ("iY_omega2", omega2.contract(&ctx, &y).unwrap()),
        ("delta_Ftilde", ftilde.delta()),
        ("Xi", xi.clone()),
        ("lieQ_Xi", lie_q_xi),
        ("Theta", energy_current.clone()),
        ("Theta_oracle", theta_oracle.clone()),
        ("star_Theta_oracle", geometry.hodge(&theta_oracle).unwrap()),
        ("stress_contraction", stress_contraction),
        ("zero", F::zero()),
    ] {
        forms.insert(name.to_string(), value);
    }

    let mut fields: BTreeMap<String, EvolutionaryVectorField<R>> = BTreeMap::new();
    fields.insert("Q".to_string(), q.clone());
    fields.insert("Y".to_string(), y);
    fields.insert("X".to_string(), x);
    fields.insert("Z".to_string(), z);

    let generators = vec![
        NamedGenerator {
            name: "L".into(),
            form: "L".into(),
            field: "Q".into(),
            level: 0,
        },
        NamedGenerator {
            name: "Xi".into(),
            form: "Xi".into(),
            field: "X".into(),
            level: 0,
        },
        NamedGenerator {
            name: "Cstar".into(),
            form: "Cstar".into(),
            field: "Y".into(),
            level: 0,
        },
        NamedGenerator {
            name: "Astar".into(),
            form: "Astar".into(),
            field: "Y".into(),
            level: 1,
        },
        NamedGenerator {
            name: "Ftilde".into(),
            form: "Ftilde".into(),
            field: "Y".into(),
            level: 2,
        },
    ];
    let level_forms =
        BTreeMap::from([(0, "omega".to_string()), (1, "omega1".to_string()), (2, "omega2".to_string())]);

    let checks = vec![
        check(
            "homological",
            "the generator is odd, raises ghost number by one, and squares to zero",
            CheckKind::Homological,
        ),
        check(
            "presymplectic",
            "the structure form is vertical-closed and descends from its potential",
            CheckKind::Presymplectic,
        ),
        check(
            "lagrangian-generates-flow",
            "contracting the generator into the structure form gives the variation of the Lagrangian up to a boundary",
            CheckKind::Hamiltonian {
                omega: "omega".into(),
                field: "Q".into(),
                form: "L".into(),
                strong: true,
            },
        ),
        check(
            "flow-defect-boundary",
            "the defect between the contracted flow and the Lagrangian variation is a total derivative",
            CheckKind::TotalDerivative { form: "flow_defect".into() },
        ),
        check(
            "descent-step-1",
            "the first descent form reproduces the Q-variation of the structure form through d",
            CheckKind::Equal { lhs: "d_omega1".into(), rhs: "lieQ_omega".into() },
        ),
        check(
            "descent-step-2",
            "the second descent form reproduces the Q-variation of the first through d",
            CheckKind::Equal { lhs: "d_omega2".into(), rhs: "lieQ_omega1".into() },
        ),
        check(
            "descent-top-invariant",
            "the last descent form is strictly invariant",
            CheckKind::Invariant { form: "omega2".into() },
        ),
        check(
            "descent-length",
            "the descent tower of the structure form has length two",
            CheckKind::Descent { expect_length: Some(2) },
        ),
        check(
            "descent-level-1-matches",
            "the engine's first descent level agrees with the declared form up to a boundary",
            CheckKind::DescentMatches { level: 1, form: "omega1".into() },
        ),
        check(
            "descent-level-2-matches",
            "the engine's second descent level agrees with the declared form up to a boundary",
            CheckKind::DescentMatches { level: 2, form: "omega2".into() },
        ),
        check(
            "level-one-density",
            "the first descent density closes the Lagrangian variation through d",
            CheckKind::Equal { lhs: "d_L1".into(), rhs: "lieQ_L".into() },
        ),
        check(
            "improved-current-doubles",
            "the improved level-one current equals twice the density up to a boundary",
            CheckKind::EquivalentStrong { lhs: "L1_improved".into(), rhs: "L1_twice".into() },
        ),
        check(
            "master",
            "the improved current exists and its level-one self-bracket dies on the stationary surface",
            CheckKind::Master,
        ),
        check(
            "charge-chain-top",
            "the dual of the ghost varies into the boundary of the dual potential",
            CheckKind::Equal { lhs: "lieQ_Cstar".into(), rhs: "d_Astar".into() },
        ),
        check(
            "charge-chain-middle",
            "the dual potential varies into the boundary of the dual field strength",
            CheckKind::Equal { lhs: "lieQ_Astar".into(), rhs: "d_Ftilde".into() },
        ),
        check(
            "charge-chain-bottom",
            "the dual field strength is strictly invariant",
            CheckKind::Invariant { form: "Ftilde".into() },
        ),
        check(
            "shift-is-symmetry",
            "the ghost shift commutes with the generator",
            CheckKind::Symmetry { field: "Y".into(), expect: true },
        ),
        check(
            "shift-not-gauge-trivial",
            "the ghost shift is not a commutator with the generator",
            CheckKind::GaugeTriviality { field: "Y".into(), expect_trivial: false },
        ),
        check(
            "shift-generated-exactly",
            "contracting the shift into the structure form gives exactly the variation of the ghost dual",
            CheckKind::Equal { lhs: "iY_omega".into(), rhs: "delta_Cstar".into() },
        ),
        check(
            "shift-level-1-exact",
            "contracting the shift into the first descent form gives exactly the variation of the dual potential",
            CheckKind::Equal { lhs: "iY_omega1".into(), rhs: "delta_Astar".into() },
        ),
        check(
            "shift-level-2-exact",
            "contracting the shift into the second descent form gives exactly the variation of the dual field strength",
            CheckKind::Equal { lhs: "iY_omega2".into(), rhs: "delta_Ftilde".into() },
        ),
        check(
            "shift-chain",
            "the generator tower of the shift spans all three descent levels",
            CheckKind::HamiltonianChain { field: "Y".into(), expect_levels: 3 },
        ),
        check(
            "generator-chain",
            "the generator tower of Q itself spans all three descent levels",
            CheckKind::HamiltonianChain { field: "Q".into(), expect_levels: 3 },
        ),
        check(
            "translation-is-symmetry",
            "the time translation commutes with the generator",
            CheckKind::Symmetry { field: "X".into(), expect: true },
        ),
        check(
            "field-dependent-shift-breaks",
            "shifting the ghost by a potential component is not a symmetry",
            CheckKind::Symmetry { field: "Z".into(), expect: false },
        ),
        check(
            "momentum-observable",
            "the momentum density is an observable",
            CheckKind::Observable { form: "Xi".into(), expect: true },
        ),
        check(
            "lagrangian-observable",
            "the Lagrangian is an observable",
            CheckKind::Observable { form: "L".into(), expect: true },
        ),
        check(
            "energy-current-boundary",
            "the Q-variation of the momentum density is a total derivative",
            CheckKind::TotalDerivative { form: "lieQ_Xi".into() },
        ),
        check(
            "energy-current-oracle",
            "the recovered energy current agrees on the stationary surface with the symmetric field-strength expression",
            CheckKind::EquivalentWeak { lhs: "Theta".into(), rhs: "Theta_oracle".into() },
        ),
        check(
            "stress-tensor-oracle",
            "the dual of the symmetric current equals the component stress tensor contracted with the translation",
            CheckKind::Equal { lhs: "star_Theta_oracle".into(), rhs: "stress_contraction".into() },
        ),
        check(
            "momentum-conservation-chain",
            "the conserved-current tower of the momentum density has one level",
            CheckKind::ConservationChain { form: "Xi".into(), expect_levels: 1 },
        ),
    ];

    ModelBundle {
        name: "maxwell".to_string(),
        geometry,
        ctx,
        q,
        omega,
        theta: Some(theta),
        bounds,
        forms,
        fields,
        generators,
        level_forms,
        checks,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bundle_builds_with_expected_gradings() {
        let m = maxwell();
        assert_eq!(m.ctx.num_fields(), 10);
        assert_eq!(m.omega.bidegree_of().unwrap(), (4, 2));
        assert_eq!(
            m.omega.grading_of().unwrap(),
            Grading::new(Parity::Odd, -1),
            "structure form carries ghost −1"
        );
        assert_eq!(m.form("omega1").unwrap().bidegree_of().unwrap(), (3, 2));
        assert_eq!(m.form("omega2").unwrap().bidegree_of().unwrap(), (2, 2));
        assert_eq!(m.form("L").unwrap().bidegree_of().unwrap(), (4, 0));
        assert!(crate::gauge::check_homological(&m.ctx, &m.q).unwrap());
    }

    #[test]
    fn structure_form_descends_from_potential() {
        let m = maxwell();
        assert_eq!(m.theta.as_ref().unwrap().delta(), m.omega);
        assert!(m.omega.delta().is_zero());
    }

    #[test]
    fn shift_tower_is_exact_on_the_nose() {
        let m = maxwell();
        assert_eq!(m.form("iY_omega").unwrap(), m.form("delta_Cstar").unwrap());
        assert_eq!(m.form("iY_omega1").unwrap(), m.form("delta_Astar").unwrap());
        assert_eq!(m.form("iY_omega2").unwrap(), m.form("delta_Ftilde").unwrap());
    }

    #[test]
    fn descent_identities_hold_exactly() {
        let m = maxwell();
        assert_eq!(m.form("d_omega1").unwrap(), m.form("lieQ_omega").unwrap());
        assert_eq!(m.form("d_omega2").unwrap(), m.form("lieQ_omega1").unwrap());
        assert!(m.form("omega2").unwrap().lie(&m.ctx, &m.q).unwrap().is_zero());
        assert_eq!(m.form("d_L1").unwrap(), m.form("lieQ_L").unwrap());
    }

    #[test]
    fn energy_density_is_a_sum_of_squares() {
        // The 00 component of the stress tensor is ½(E² + B²): all-plus
        // coefficients on the six independent first-derivative squares.
        let m = maxwell();
        let contraction = m.form("stress_contraction").unwrap();
        let dx0 = super::super::expand::dx_block::<R>(&[0]);
        // Pick out the dx⁰ coefficient by wedging with the spatial block.
        let spatial = super::super::expand::dx_block::<R>(&[1, 2, 3]);
        let density = contraction.wedge(&spatial);
        // E² = Σ F_{0i}², B² = Σ_{i<j} F_{ij}²; every square enters with +½.
        let a_fam = m.ctx.family_by_name("A").unwrap();
        let f_comp = |mu: u8, nu: u8| -> P {
            &m.ctx
                .jet::<R>(m.ctx.component(a_fam, &[], &[nu]).unwrap().unwrap().0, &[mu])
                .unwrap()
                - &m.ctx
                    .jet::<R>(m.ctx.component(a_fam, &[], &[mu]).unwrap().unwrap().0, &[nu])
                    .unwrap()
        };
        let mut expect = P::zero();
        for i in 1..4u8 {
            expect.add_assign(&f_comp(0, i).mul(&f_comp(0, i)).scale(&ratio(1, 2)));
        }
        for i in 1..4u8 {
            for j in (i + 1)..4u8 {
                expect.add_assign(&f_comp(i, j).mul(&f_comp(i, j)).scale(&ratio(1, 2)));
            }
        }
        let expect_form = F::from_poly(expect).wedge(&dx0).wedge(&spatial);
        assert_eq!(density, expect_form);
    }
#[test]
fn probe_descent_stall() {
    let m = maxwell();
    let sys = m.system().unwrap();
    let w1p = sys.omega1().clone();
    let w1 = m.form("omega1").unwrap().clone();
    let flow = m.omega.lie(&m.ctx, &m.q).unwrap();
    assert_eq!(&w1p.d(&m.ctx).unwrap(), &flow, "system omega1 re-subst");
    let diff = &w1p - &w1;
    println!("diff terms: {}", diff.poly().iter().count());
    let ld = diff.lie(&m.ctx, &m.q).unwrap();
    let dld = ld.d(&m.ctx).unwrap();
    println!("d(lie(diff)) zero: {}", dld.is_zero());
    // anticommutator per monomial of diff
    let mut bad = 0usize;
    for (mm, c) in diff.poly().iter() {
        let f = crate::forms::Form::from_poly(crate::ring::GradedPoly::term(mm.clone(), c.clone()));
        let ac = &f.lie(&m.ctx, &m.q).unwrap().d(&m.ctx).unwrap() + &f.d(&m.ctx).unwrap().lie(&m.ctx, &m.q).unwrap();
        if !ac.is_zero() {
            bad += 1;
            if bad <= 3 {
                println!("AC fails on {}", m.ctx.render_poly(&crate::ring::GradedPoly::term(mm.clone(), c.clone())));
                println!("  AC = {}", m.ctx.render_poly(ac.poly()));
            }
        }
    }
    println!("anticommutator failures: {bad} of {}", diff.poly().iter().count());
}

#[test]
fn probe_ac_generators() {
    let m = maxwell();
    let names: Vec<String> = vec![];
    let _ = names;
    let gens: Vec<crate::generator::Gen> = {
        let mut v = Vec::new();
        // contacts and jets appearing in the failing monomials, plus dx
        let a0 = m.ctx.field_by_name("A_0").unwrap();
        let a3 = m.ctx.field_by_name("A_3").unwrap();
        let c = m.ctx.field_by_name("C").unwrap();
        let e = m.ctx.multi_index(&[]).unwrap();
        let x0 = m.ctx.multi_index(&[0]).unwrap();
        v.push(m.ctx.contact_gen(a0, &e).unwrap());
        v.push(m.ctx.contact_gen(a3, &x0).unwrap());
        v.push(m.ctx.contact_gen(c, &e).unwrap());
        v.push(crate::generator::Gen::dx(0));
        v.push(m.ctx.jet_gen(a0, &e).unwrap());
        v
    };
    for g in gens {
        let f = crate::forms::Form::<num_rational::BigRational>::from_gen(g);
        let ac = &f.lie(&m.ctx, &m.q).unwrap().d(&m.ctx).unwrap()
            + &f.d(&m.ctx).unwrap().lie(&m.ctx, &m.q).unwrap();
        println!("AC({}) = {}", m.ctx.render_poly(f.poly()), m.ctx.render_poly(ac.poly()));
    }
    // two-факtor product of the two contacts without dx
    let a0 = m.ctx.field_by_name("A_0").unwrap();
    let a3 = m.ctx.field_by_name("A_3").unwrap();
    let e = m.ctx.multi_index(&[]).unwrap();
    let x0 = m.ctx.multi_index(&[0]).unwrap();
    let f = crate::forms::Form::<num_rational::BigRational>::from_gen(m.ctx.contact_gen(a0, &e).unwrap())
        .wedge(&crate::forms::Form::from_gen(m.ctx.contact_gen(a3, &x0).unwrap()));
    let ac = &f.lie(&m.ctx, &m.q).unwrap().d(&m.ctx).unwrap()
        + &f.d(&m.ctx).unwrap().lie(&m.ctx, &m.q).unwrap();
    println!("AC(two contacts) = {}", m.ctx.render_poly(ac.poly()));
}

#[test]
fn probe_ingredient_identities() {
    let m = maxwell();
    let a0 = m.ctx.field_by_name("A_0").unwrap();
    let e = m.ctx.multi_index(&[]).unwrap();
    type F = crate::forms::Form<num_rational::BigRational>;
    let forms: Vec<(&str, F)> = vec![
        ("A_0", F::from_gen(m.ctx.jet_gen(a0, &e).unwrap())),
        ("dA_0", F::from_gen(m.ctx.jet_gen(a0, &e).unwrap()).d(&m.ctx).unwrap()),
        ("δA_0", F::from_gen(m.ctx.contact_gen(a0, &e).unwrap())),
        ("dδA_0", F::from_gen(m.ctx.contact_gen(a0, &e).unwrap()).d(&m.ctx).unwrap()),
    ];
    for (n, f) in &forms {
        // [i_Q, d] = i_Q d − d i_Q  (even operator commutator, Q odd)
        let c1 = &f.d(&m.ctx).unwrap().contract(&m.ctx, &m.q).unwrap()
            - &f.contract(&m.ctx, &m.q).unwrap().d(&m.ctx).unwrap();
        // lie − (i_Q δ − δ i_Q)
        let c2 = &f.lie(&m.ctx, &m.q).unwrap()
            - &(&f.delta().contract(&m.ctx, &m.q).unwrap() - &f.contract(&m.ctx, &m.q).unwrap().delta());
        // {d, δ}
        let c3 = &f.d(&m.ctx).unwrap().delta() + &f.delta().d(&m.ctx).unwrap();
        println!(
            "{n}: [i_Q,d]={}  lie-[i_Q,δ]={}  {{d,δ}}={}",
            if c1.is_zero() { "0".to_string() } else { m.ctx.render_poly(c1.poly()) },
            if c2.is_zero() { "0".to_string() } else { m.ctx.render_poly(c2.poly()) },
            if c3.is_zero() { "0".to_string() } else { m.ctx.render_poly(c3.poly()) },
        );
    }
}

#[test]
fn dev_report() {
    let m = maxwell();
    let report = m.run_checks();
    for r in &report.records {
        println!("{} {}  {}", if r.passed { "PASS" } else { "FAIL" }, r.name, r.detail);
    }
    println!("all_passed: {}", report.all_passed);
}

}
