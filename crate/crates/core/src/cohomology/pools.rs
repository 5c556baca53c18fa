//! Ansatz pools for the bounded cohomology searches.
//!
//! Rather than enumerating every monomial form under the degree bounds (which
//! explodes for many-field contexts), pools are seeded from the query itself:
//! candidate preimages are obtained by structurally undoing one application of
//! the differential, and candidate ideal cofactors by exact monomial division.
//! Iterative closure rounds then widen the pool until the linear system
//! closes or stops growing, which keeps searches deterministic and monotone
//! under bound widening.

use crate::generator::Gen;
use crate::jets::JetContext;
use crate::ring::Monomial;
use std::collections::BTreeSet;

/// Degree bounds for ansatz generation. Parameters count toward the base
/// degree alongside coordinates; jets and contact factors count toward the
/// field degree.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SolveBounds {
    pub max_jet_order: u8,
    pub max_x_degree: u32,
    pub max_field_degree: u32,
    /// Closure rounds before reporting no solution.
    pub rounds: u8,
}

impl Default for SolveBounds {
    fn default() -> Self {
        SolveBounds { max_jet_order: 3, max_x_degree: 2, max_field_degree: 3, rounds: 3 }
    }
}

impl SolveBounds {
    pub fn admits(&self, m: &Monomial) -> bool {
        m.max_jet_order() <= self.max_jet_order
            && m.x_degree() <= self.max_x_degree
            && m.field_degree() <= self.max_field_degree
    }

    /// Widens the bounds to cover every monomial of the query, so a query is
    /// never excluded from its own ansatz.
    pub fn covering<'a, I: IntoIterator<Item = &'a Monomial>>(&self, monos: I) -> SolveBounds {
        let mut out = *self;
        for m in monos {
            out.max_jet_order = out.max_jet_order.max(m.max_jet_order());
            out.max_x_degree = out.max_x_degree.max(m.x_degree());
            out.max_field_degree = out.max_field_degree.max(m.field_degree());
        }
        out
    }

    pub fn describe(&self) -> String {
        format!(
            "jet order <= {}, base degree <= {}, field degree <= {}, rounds {}",
            self.max_jet_order, self.max_x_degree, self.max_field_degree, self.rounds
        )
    }
}

/// Monomials whose horizontal differential can reproduce `m`: for each dx^j
/// factor, either lower a j-derivative on some jet/contact factor, or trade
/// the dx^j for an extra x^j.
pub fn d_preimage_candidates(
    ctx: &JetContext,
    m: &Monomial,
    bounds: &SolveBounds,
) -> BTreeSet<Monomial> {
    let mut out = BTreeSet::new();
    let factors = m.factors();
    for (k, &(g, _)) in factors.iter().enumerate() {
        if !g.is_dx() {
            continue;
        }
        let j = g.base_index();
        // dx factors are odd, so the exponent is one; drop the factor.
        let mut rest: Vec<(Gen, u32)> = Vec::with_capacity(factors.len());
        rest.extend_from_slice(&factors[..k]);
        rest.extend_from_slice(&factors[k + 1..]);
        // Lower one j-derivative on any jet or contact factor.
        for (i, &(h, eh)) in rest.iter().enumerate() {
            if !(h.is_jet() || h.is_contact()) {
                continue;
            }
            if let Some(lowered) = h.remove_index(j) {
                let mut cand = rest.clone();
                if eh == 1 {
                    cand[i] = (lowered, 1);
                } else {
                    cand[i] = (h, eh - 1);
                    cand.push((lowered, 1));
                }
                push_candidate(&mut out, &cand, bounds);
            }
        }
        // Or absorb the dx^j into the base polynomial.
        let mut cand = rest.clone();
        cand.push((Gen::base(j), 1));
        push_candidate(&mut out, &cand, bounds);
    }
    let _ = ctx;
    out
}

/// Monomials whose vertical differential can reproduce `m`: one contact
/// factor reverted to its jet.
pub fn delta_preimage_candidates(m: &Monomial, bounds: &SolveBounds) -> BTreeSet<Monomial> {
    let mut out = BTreeSet::new();
    let factors = m.factors();
    for (k, &(g, e)) in factors.iter().enumerate() {
        if !g.is_contact() {
            continue;
        }
        let mut cand: Vec<(Gen, u32)> = factors.to_vec();
        if e == 1 {
            cand[k] = (g.to_jet(), 1);
        } else {
            cand[k] = (g, e - 1);
            cand.push((g.to_jet(), 1));
        }
        push_candidate(&mut out, &cand, bounds);
    }
    out
}

fn push_candidate(out: &mut BTreeSet<Monomial>, factors: &[(Gen, u32)], bounds: &SolveBounds) {
    if let Some((m, _)) = Monomial::from_factors(factors) {
        if bounds.admits(&m) {
            out.insert(m);
        }
    }
}

/// Exact monomial division: Some(q) when `m` = ±q·`divisor` in the graded
/// ring; the sign is irrelevant for ansatz seeding.
pub fn divide(m: &Monomial, divisor: &Monomial) -> Option<Monomial> {
    let mut quotient: Vec<(Gen, u32)> = Vec::new();
    let mut div_iter = divisor.factors().iter().peekable();
    for &(g, e) in m.factors() {
        let mut keep = e;
        if let Some(&&(dg, de)) = div_iter.peek() {
            if dg == g {
                if de > e {
                    return None;
                }
                keep = e - de;
                div_iter.next();
            } else if dg < g {
                // Divisor factor absent from m.
                return None;
            }
        }
        if keep > 0 {
            quotient.push((g, keep));
        }
    }
    if div_iter.next().is_some() {
        return None;
    }
    // Factors already canonical and distinct; no sign ambiguity in the word.
    Some(Monomial::from_factors(&quotient).expect("sub-multiset of a valid monomial").0)
}

/// Every coefficient monomial (no form factors) of the requested grading
/// within the degree bounds, in deterministic order. The boolean is true
/// when the hard candidate cap truncated the walk; a failed linear search
/// over a truncated pool is not conclusive.
pub fn enumerate_coefficient_monomials(
    ctx: &JetContext,
    bounds: &SolveBounds,
    grading: crate::grading::Grading,
) -> (Vec<Monomial>, bool) {
    const CAP: usize = 200_000;
    let mut gens: Vec<Gen> = (0..ctx.dim()).map(Gen::base).collect();
    for name in ctx.params() {
        gens.push(ctx.param_gen(name).expect("declared parameter"));
    }
    let order = bounds.max_jet_order.min(ctx.max_jet_order());
    for f in ctx.field_ids() {
        for idx in multi_indices_up_to(ctx, order) {
            gens.push(ctx.jet_gen(f, &idx).expect("order bounded above"));
        }
    }
    // Reachable ghost range per suffix: lets the walk abandon branches whose
    // remaining budget cannot close the ghost gap.
    let mut ghost_lo = vec![0i64; gens.len() + 1];
    let mut ghost_hi = vec![0i64; gens.len() + 1];
    for k in (0..gens.len()).rev() {
        let g = gens[k].grading().ghost as i64;
        ghost_lo[k] = ghost_lo[k + 1].min(if g < 0 { g } else { 0 });
        ghost_hi[k] = ghost_hi[k + 1].max(if g > 0 { g } else { 0 });
    }
    struct Walk<'a> {
        gens: &'a [Gen],
        bounds: &'a SolveBounds,
        target: crate::grading::Grading,
        ghost_lo: &'a [i64],
        ghost_hi: &'a [i64],
        stack: Vec<(Gen, u32)>,
        out: Vec<Monomial>,
        truncated: bool,
    }
    impl Walk<'_> {
        fn go(&mut self, k: usize, acc: crate::grading::Grading, xdeg: u32, fdeg: u32) {
            if self.truncated {
                return;
            }
            if k == self.gens.len() {
                if acc == self.target {
                    if self.out.len() >= CAP {
                        self.truncated = true;
                        return;
                    }
                    let (m, _) =
                        Monomial::from_factors(&self.stack).expect("no odd squares pushed");
                    self.out.push(m);
                }
                return;
            }
            let field_budget = (self.bounds.max_field_degree - fdeg) as i64;
            let gap = self.target.ghost as i64 - acc.ghost as i64;
            if gap < field_budget * self.ghost_lo[k] || gap > field_budget * self.ghost_hi[k] {
                return;
            }
            self.go(k + 1, acc, xdeg, fdeg);
            let g = self.gens[k];
            let max_e = if g.parity() == crate::grading::Parity::Odd {
                1
            } else if g.is_coefficient() && !g.is_jet() {
                self.bounds.max_x_degree.saturating_sub(xdeg)
            } else {
                self.bounds.max_field_degree.saturating_sub(fdeg)
            };
            let mut acc_e = acc;
            let (mut xe, mut fe) = (xdeg, fdeg);
            for e in 1..=max_e {
                if g.is_jet() {
                    fe += 1;
                    if fe > self.bounds.max_field_degree {
                        break;
                    }
                } else {
                    xe += 1;
                    if xe > self.bounds.max_x_degree {
                        break;
                    }
                }
                acc_e = acc_e + g.grading();
                self.stack.push((g, e));
                self.go(k + 1, acc_e, xe, fe);
                self.stack.pop();
            }
        }
    }
    let mut walk = Walk {
        gens: &gens,
        bounds,
        target: grading,
        ghost_lo: &ghost_lo,
        ghost_hi: &ghost_hi,
        stack: Vec::new(),
        out: Vec::new(),
        truncated: false,
    };
    walk.go(0, crate::grading::Grading::even(), 0, 0);
    (walk.out, walk.truncated)
}

/// All symmetric multi-indices over the context's coordinates with order at
/// most `max_order`, in deterministic order.
pub fn multi_indices_up_to(ctx: &JetContext, max_order: u8) -> Vec<crate::generator::MultiIndex> {
    let mut out = vec![crate::generator::MultiIndex::empty()];
    let mut frontier = vec![crate::generator::MultiIndex::empty()];
    for _ in 0..max_order {
        let mut next = Vec::new();
        for idx in &frontier {
            let start = idx.indices().last().copied().unwrap_or(0);
            for i in start..ctx.dim() {
                let grown = idx.push(i).expect("bounded by caller");
                next.push(grown.clone());
                out.push(grown);
            }
        }
        frontier = next;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grading::Grading;
    use crate::jets::FieldSpec;
    use crate::ring::GradedPoly;
    use num_rational::BigRational;

    fn ctx() -> (JetContext, crate::generator::FieldId) {
        let mut c = JetContext::new(1, 4);
        let fam = c.declare_field(FieldSpec::scalar("u", Grading::even()));
        (c.clone(), c.family_components(fam)[0])
    }

    #[test]
    fn coefficient_enumeration_respects_grading_and_budgets() {
        // x, u, u_x, c, c_x with x-degree <= 1 and field degree <= 2: the
        // ghost-one odd monomials are exactly one c-jet times an even
        // cofactor from {1, x, u, u_x, x u, x u_x}.
        let mut c = JetContext::new(1, 1);
        c.declare_field(FieldSpec::scalar("u", Grading::even()));
        c.declare_field(FieldSpec::scalar("c", Grading { parity: crate::grading::Parity::Odd, ghost: 1 }));
        let bounds = SolveBounds { max_jet_order: 1, max_x_degree: 1, max_field_degree: 2, rounds: 1 };
        let (odd, truncated) =
            enumerate_coefficient_monomials(&c, &bounds, Grading { parity: crate::grading::Parity::Odd, ghost: 1 });
        assert!(!truncated);
        assert_eq!(odd.len(), 12);
        for m in &odd {
            assert_eq!(m.grading(), Grading { parity: crate::grading::Parity::Odd, ghost: 1 });
            assert!(bounds.admits(m));
        }
        let (even, _) = enumerate_coefficient_monomials(&c, &bounds, Grading::even());
        assert!(even.contains(&Monomial::one()));
    }

    #[test]
    fn preimages_of_a_first_order_term() {
        // u_x dx: candidates are u (lowered) and x·u_x (base route).
        let (ctx, u) = ctx();
        let m = mono(&[
            (ctx.jet_gen(u, &ctx.multi_index(&[0]).unwrap()).unwrap(), 1),
            (Gen::dx(0), 1),
        ]);
        let got = d_preimage_candidates(&ctx, &m, &SolveBounds::default());
        let lowered = mono(&[(ctx.jet_gen(u, &ctx.multi_index(&[]).unwrap()).unwrap(), 1)]);
        let base_route = mono(&[
            (Gen::base(0), 1),
            (ctx.jet_gen(u, &ctx.multi_index(&[0]).unwrap()).unwrap(), 1),
        ]);
        assert!(got.contains(&lowered));
        assert!(got.contains(&base_route));
        assert_eq!(got.len(), 2);
    }

    #[test]
    fn delta_preimage_reverts_one_contact_factor() {
        let (ctx, u) = ctx();
        let du = ctx.contact_gen(u, &ctx.multi_index(&[]).unwrap()).unwrap();
        let ux = ctx.jet_gen(u, &ctx.multi_index(&[0]).unwrap()).unwrap();
        let m = mono(&[(ux, 1), (du, 1)]);
        let got = delta_preimage_candidates(&m, &SolveBounds::default());
        assert_eq!(got.len(), 1);
        let expected = mono(&[(ux, 1), (du.to_jet(), 1)]);
        assert!(got.contains(&expected));
    }

    #[test]
    fn division_matches_multiplication() {
        let (ctx, u) = ctx();
        let du = ctx.contact_gen(u, &ctx.multi_index(&[]).unwrap()).unwrap();
        let ux = ctx.jet_gen(u, &ctx.multi_index(&[0]).unwrap()).unwrap();
        let big = mono(&[(Gen::base(0), 2), (ux, 1), (du, 1)]);
        let div = mono(&[(ux, 1)]);
        let q = divide(&big, &div).unwrap();
        let prod = GradedPoly::<BigRational>::term(q, crate::scalar::int(1))
            .mul(&GradedPoly::term(div.clone(), crate::scalar::int(1)));
        let back: Vec<_> = prod.iter().collect();
        assert_eq!(back.len(), 1);
        assert_eq!(back[0].0, &big);
        // Missing factors fail.
        assert!(divide(&div, &big).is_none());
    }

    #[test]
    fn multi_index_enumeration_is_complete() {
        let ctx2 = JetContext::new(2, 4);
        let all = multi_indices_up_to(&ctx2, 2);
        // orders: 1 empty + 2 singles + 3 pairs (00,01,11).
        assert_eq!(all.len(), 6);
    }

    fn mono(factors: &[(Gen, u32)]) -> Monomial {
        Monomial::from_factors(factors).unwrap().0
    }
}
