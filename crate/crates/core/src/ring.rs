//! Graded-commutative polynomial algebra.
//!
//! Monomials are sorted factor lists over packed generators; the merge in
//! [`Monomial::mul`] is the single place Koszul signs are computed. Odd
//! generators square to zero and never carry an exponent above one, so every
//! expression has exactly one canonical representation.

use crate::error::AlgebraError;
use crate::generator::{Gen, Names};
use crate::grading::{Grading, Parity};
use crate::scalar::{int, Scalar};
use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::ops::{Add, Mul, Neg, Sub};

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Monomial {
    factors: Vec<(Gen, u32)>,
}

impl Monomial {
    pub fn one() -> Self {
        Monomial::default()
    }

    pub fn gen(g: Gen) -> Self {
        Monomial { factors: vec![(g, 1)] }
    }

    /// Builds from arbitrary factor order. Returns None when an odd generator
    /// appears twice (the monomial is zero).
    pub fn from_factors(factors: &[(Gen, u32)]) -> Option<(Monomial, i8)> {
        let mut acc = Monomial::one();
        let mut sign = 1i8;
        for &(g, e) in factors {
            for _ in 0..e {
                let (m, s) = acc.mul(&Monomial::gen(g))?;
                acc = m;
                sign *= s;
            }
        }
        Some((acc, sign))
    }

    pub fn is_one(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn factors(&self) -> &[(Gen, u32)] {
        &self.factors
    }

    pub fn exp_of(&self, g: Gen) -> u32 {
        self.factors
            .binary_search_by(|(h, _)| h.cmp(&g))
            .map(|k| self.factors[k].1)
            .unwrap_or(0)
    }

    /// Graded-commutative product with the Koszul sign, or None if zero.
    pub fn mul(&self, other: &Monomial) -> Option<(Monomial, i8)> {
        let mut out = Vec::with_capacity(self.factors.len() + other.factors.len());
        let mut sign = 1i8;
        // Odd factors of self not yet passed by the merge.
        let mut odd_tail =
            self.factors.iter().filter(|(g, _)| g.parity().is_odd()).count() as u32;
        let mut i = 0;
        let mut j = 0;
        while i < self.factors.len() || j < other.factors.len() {
            let take_other = match (self.factors.get(i), other.factors.get(j)) {
                (Some(&(ga, _)), Some(&(gb, _))) => gb < ga,
                (None, Some(_)) => true,
                (Some(_), None) => false,
                (None, None) => break,
            };
            if take_other {
                let (gb, eb) = other.factors[j];
                if gb.parity().is_odd() && odd_tail % 2 == 1 {
                    sign = -sign;
                }
                out.push((gb, eb));
                j += 1;
            } else if j < other.factors.len() && other.factors[j].0 == self.factors[i].0 {
                let (g, ea) = self.factors[i];
                let eb = other.factors[j].1;
                if g.parity().is_odd() {
                    return None; // odd generator squared
                }
                out.push((g, ea + eb));
                if g.parity().is_odd() {
                    unreachable!();
                }
                i += 1;
                j += 1;
            } else {
                let (ga, ea) = self.factors[i];
                if ga.parity().is_odd() {
                    odd_tail -= 1;
                }
                out.push((ga, ea));
                i += 1;
            }
        }
        Some((Monomial { factors: out }, sign))
    }

    pub fn grading(&self) -> Grading {
        let mut parity = Parity::Even;
        let mut ghost = 0i32;
        for &(g, e) in &self.factors {
            if e % 2 == 1 {
                parity = parity + g.parity();
            }
            ghost += g.ghost() * e as i32;
        }
        Grading::new(parity, ghost)
    }

    pub fn parity(&self) -> Parity {
        self.grading().parity
    }

    /// (horizontal, vertical) wedge degree.
    pub fn bidegree(&self) -> (u32, u32) {
        let mut h = 0;
        let mut v = 0;
        for &(g, e) in &self.factors {
            if g.is_dx() {
                h += e;
            } else if g.is_contact() {
                v += e;
            }
        }
        (h, v)
    }

    pub fn is_coefficient_only(&self) -> bool {
        self.factors.iter().all(|(g, _)| g.is_coefficient())
    }

    /// Largest |I| over jet and contact factors.
    pub fn max_jet_order(&self) -> u8 {
        self.factors.iter().map(|(g, _)| g.jet_order()).max().unwrap_or(0)
    }

    /// Total polynomial degree in base coordinates and parameters.
    pub fn x_degree(&self) -> u32 {
        use crate::generator::{KIND_BASE, KIND_PARAM};
        self.factors
            .iter()
            .filter(|(g, _)| g.kind() == KIND_BASE || g.kind() == KIND_PARAM)
            .map(|(_, e)| e)
            .sum()
    }

    /// Total polynomial degree in jet coordinates and contact factors.
    pub fn field_degree(&self) -> u32 {
        self.factors
            .iter()
            .filter(|(g, _)| g.is_jet() || g.is_contact())
            .map(|(_, e)| e)
            .sum()
    }

    /// Left derivative: (new monomial, sign, old exponent). None if g absent.
    pub fn left_derivative(&self, g: Gen) -> Option<(Monomial, i8, u32)> {
        let pos = self.factors.binary_search_by(|(h, _)| h.cmp(&g)).ok()?;
        let mut prefix_odd = 0u32;
        for &(h, e) in &self.factors[..pos] {
            if h.parity().is_odd() && e % 2 == 1 {
                prefix_odd += 1;
            }
        }
        let sign = if g.parity().is_odd() && prefix_odd % 2 == 1 { -1 } else { 1 };
        let e = self.factors[pos].1;
        let mut factors = self.factors.clone();
        if e == 1 {
            factors.remove(pos);
        } else {
            factors[pos].1 = e - 1;
        }
        Some((Monomial { factors }, sign, e))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradedPoly<C: Scalar> {
    terms: BTreeMap<Monomial, C>,
}

impl<C: Scalar> Default for GradedPoly<C> {
    fn default() -> Self {
        GradedPoly { terms: BTreeMap::new() }
    }
}

impl<C: Scalar> GradedPoly<C> {
    pub fn zero() -> Self {
        GradedPoly::default()
    }

    pub fn one() -> Self {
        GradedPoly::constant(C::one())
    }

    pub fn constant(c: C) -> Self {
        let mut p = GradedPoly::zero();
        p.add_term(Monomial::one(), c);
        p
    }

    pub fn from_gen(g: Gen) -> Self {
        let mut p = GradedPoly::zero();
        p.add_term(Monomial::gen(g), C::one());
        p
    }

    pub fn term(m: Monomial, c: C) -> Self {
        let mut p = GradedPoly::zero();
        p.add_term(m, c);
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Monomial, &C)> {
        self.terms.iter()
    }

    pub fn coeff_of(&self, m: &Monomial) -> C {
        self.terms.get(m).cloned().unwrap_or_else(C::zero)
    }

    pub fn add_term(&mut self, m: Monomial, c: C) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                let sum = e.get().clone() + c;
                if sum.is_zero() {
                    e.remove();
                } else {
                    e.insert(sum);
                }
            }
        }
    }

    pub fn add_assign(&mut self, other: &GradedPoly<C>) {
        for (m, c) in other.iter() {
            self.add_term(m.clone(), c.clone());
        }
    }

    pub fn scale(&self, c: &C) -> Self {
        if c.is_zero() {
            return GradedPoly::zero();
        }
        let mut out = GradedPoly::zero();
        for (m, a) in self.iter() {
            out.add_term(m.clone(), a.clone() * c.clone());
        }
        out
    }

    pub fn mul(&self, other: &GradedPoly<C>) -> Self {
        let mut out = GradedPoly::zero();
        for (ma, ca) in self.iter() {
            for (mb, cb) in other.iter() {
                if let Some((m, s)) = ma.mul(mb) {
                    let mut c = ca.clone() * cb.clone();
                    if s < 0 {
                        c = -c;
                    }
                    out.add_term(m, c);
                }
            }
        }
        out
    }

    /// Grading common to all terms, or the error naming two that disagree.
    /// The zero polynomial is reported as even, ghost 0.
    pub fn grading_of(&self) -> Result<Grading, AlgebraError> {
        let mut found: Option<Grading> = None;
        for (m, _) in self.iter() {
            let g = m.grading();
            match found {
                None => found = Some(g),
                Some(h) if h == g => {}
                Some(h) => {
                    return Err(AlgebraError::Inhomogeneous(h.to_string(), g.to_string()))
                }
            }
        }
        Ok(found.unwrap_or_else(Grading::even))
    }

    /// Bidegree common to all terms (for forms embedded in the unified ring).
    pub fn bidegree_of(&self) -> Result<(u32, u32), AlgebraError> {
        let mut found: Option<(u32, u32)> = None;
        for (m, _) in self.iter() {
            let b = m.bidegree();
            match found {
                None => found = Some(b),
                Some(h) if h == b => {}
                Some(h) => {
                    return Err(AlgebraError::Bidegree {
                        expected: format!("({},{})", h.0, h.1),
                        found: format!("({},{})", b.0, b.1),
                    })
                }
            }
        }
        Ok(found.unwrap_or((0, 0)))
    }

    pub fn is_coefficient_only(&self) -> bool {
        self.terms.keys().all(|m| m.is_coefficient_only())
    }

    pub fn max_jet_order(&self) -> u8 {
        self.terms.keys().map(|m| m.max_jet_order()).max().unwrap_or(0)
    }

    /// ∂_l/∂g: the left derivative by a single generator.
    pub fn left_derivative(&self, g: Gen) -> Self {
        let mut out = GradedPoly::zero();
        for (m, c) in self.iter() {
            if let Some((rest, sign, e)) = m.left_derivative(g) {
                let mut coeff = c.clone() * int::<C>(e as i64);
                if sign < 0 {
                    coeff = -coeff;
                }
                out.add_term(rest, coeff);
            }
        }
        out
    }

    /// Set of generators appearing anywhere in the polynomial.
    pub fn support(&self) -> impl Iterator<Item = Gen> + '_ {
        let mut seen = std::collections::BTreeSet::new();
        self.terms
            .keys()
            .flat_map(|m| m.factors().iter().map(|(g, _)| *g))
            .filter(move |g| seen.insert(*g))
    }

    /// Extends a graded derivation from generators to the whole algebra.
    ///
    /// `op_parity` is the parity of the operator itself; `image` gives its
    /// value on each generator (zero polynomial where it vanishes).
    pub fn apply_derivation(
        &self,
        op_parity: Parity,
        image: &mut dyn FnMut(Gen) -> Result<GradedPoly<C>, AlgebraError>,
    ) -> Result<GradedPoly<C>, AlgebraError> {
        let mut out = GradedPoly::zero();
        for (m, c) in self.iter() {
            let factors = m.factors();
            let mut prefix_parity = Parity::Even;
            for (k, &(g, e)) in factors.iter().enumerate() {
                let img = image(g)?;
                if !img.is_zero() {
                    // prefix * img * g^{e-1} * suffix, with the operator's
                    // sign for passing the prefix.
                    let mut piece = GradedPoly::term(
                        Monomial { factors: factors[..k].to_vec() },
                        c.clone() * int::<C>(e as i64),
                    );
                    if op_parity.koszul(prefix_parity) < 0 {
                        piece = -piece;
                    }
                    piece = piece.mul(&img);
                    if e > 1 {
                        piece = piece.mul(&GradedPoly::term(
                            Monomial { factors: vec![(g, e - 1)] },
                            C::one(),
                        ));
                    }
                    piece = piece.mul(&GradedPoly::term(
                        Monomial { factors: factors[k + 1..].to_vec() },
                        C::one(),
                    ));
                    out.add_assign(&piece);
                }
                if e % 2 == 1 {
                    prefix_parity = prefix_parity + g.parity();
                }
            }
        }
        Ok(out)
    }

    /// Canonical text form: deterministic term order, explicit signs.
    pub fn render(&self, names: &dyn Names) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (k, (m, c)) in self.iter().enumerate() {
            let neg = c.is_negative();
            let mag = c.abs();
            if k == 0 {
                if neg {
                    out.push('-');
                }
            } else if neg {
                out.push_str(" - ");
            } else {
                out.push_str(" + ");
            }
            let coeff_str = format!("{mag}");
            if m.is_one() {
                out.push_str(&coeff_str);
            } else {
                if coeff_str != "1" {
                    let _ = write!(out, "{coeff_str}*");
                }
                for (j, &(g, e)) in m.factors().iter().enumerate() {
                    if j > 0 {
                        out.push('*');
                    }
                    out.push_str(&names.gen_name(g));
                    if e > 1 {
                        let _ = write!(out, "^{e}");
                    }
                }
            }
        }
        out
    }
}

impl<C: Scalar> Add for &GradedPoly<C> {
    type Output = GradedPoly<C>;
    fn add(self, rhs: &GradedPoly<C>) -> GradedPoly<C> {
        let mut out = self.clone();
        out.add_assign(rhs);
        out
    }
}

impl<C: Scalar> Sub for &GradedPoly<C> {
    type Output = GradedPoly<C>;
    fn sub(self, rhs: &GradedPoly<C>) -> GradedPoly<C> {
        let mut out = self.clone();
        for (m, c) in rhs.iter() {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }
}

impl<C: Scalar> Neg for GradedPoly<C> {
    type Output = GradedPoly<C>;
    fn neg(self) -> GradedPoly<C> {
        let mut out = GradedPoly::zero();
        for (m, c) in self.terms {
            out.add_term(m, -c);
        }
        out
    }
}

impl<C: Scalar> Mul for &GradedPoly<C> {
    type Output = GradedPoly<C>;
    fn mul(self, rhs: &GradedPoly<C>) -> GradedPoly<C> {
        GradedPoly::mul(self, rhs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generator::MultiIndex;
    use crate::scalar::ratio;
    use num_rational::BigRational;
    use proptest::prelude::*;

    type P = GradedPoly<BigRational>;

    fn odd_gen(field: u16) -> Gen {
        Gen::jet(field, &MultiIndex::empty(), Grading::new(Parity::Odd, 1))
    }

    fn even_gen(field: u16) -> Gen {
        Gen::jet(field, &MultiIndex::empty(), Grading::new(Parity::Even, 0))
    }

    #[test]
    fn odd_generators_square_to_zero() {
        let t = P::from_gen(odd_gen(0));
        assert!(t.mul(&t).is_zero());
    }

    #[test]
    fn transposition_sign() {
        // θ1*θ2 = -θ2*θ1 once both are brought to canonical order.
        let t1 = P::from_gen(odd_gen(0));
        let t2 = P::from_gen(odd_gen(1));
        let a = t1.mul(&t2);
        let b = t2.mul(&t1);
        assert_eq!(a, -b);
        assert_eq!(a.len(), 1);
    }

    #[test]
    fn difference_of_squares_with_nilpotents() {
        // (u + θ1θ2)(u - θ1θ2) = u^2 since (θ1θ2)^2 = 0.
        let u = P::from_gen(even_gen(2));
        let t1 = P::from_gen(odd_gen(0));
        let t2 = P::from_gen(odd_gen(1));
        let tt = t1.mul(&t2);
        let lhs = (&(&u + &tt)).mul(&(&u - &tt));
        assert_eq!(lhs, u.mul(&u));
    }

    #[test]
    fn left_derivative_moves_past_odd_prefix() {
        // ∂_l(θ1 θ2)/∂θ2 = -θ1.
        let g1 = odd_gen(0);
        let g2 = odd_gen(1);
        let prod = P::from_gen(g1).mul(&P::from_gen(g2));
        assert_eq!(prod.left_derivative(g2), -P::from_gen(g1));
        assert_eq!(prod.left_derivative(g1), P::from_gen(g2));
    }

    #[test]
    fn left_derivative_of_powers() {
        let u = even_gen(2);
        let sq = P::from_gen(u).mul(&P::from_gen(u));
        assert_eq!(sq.left_derivative(u), P::from_gen(u).scale(&ratio(2, 1)));
    }

    #[test]
    fn grading_of_mixed_product() {
        // gh 1 odd times gh -2 even: odd, ghost -1.
        let c = Gen::jet(0, &MultiIndex::empty(), Grading::new(Parity::Odd, 1));
        let cstar = Gen::jet(1, &MultiIndex::empty(), Grading::new(Parity::Even, -2));
        let prod = P::from_gen(c).mul(&P::from_gen(cstar));
        assert_eq!(prod.grading_of().unwrap(), Grading::new(Parity::Odd, -1));
    }

    #[test]
    fn inhomogeneous_detected() {
        let c = P::from_gen(odd_gen(0));
        let u = P::from_gen(even_gen(2));
        assert!(matches!((&c + &u).grading_of(), Err(AlgebraError::Inhomogeneous(_, _))));
    }

    // Brute-force Koszul oracle: bubble-sort a word of generators counting
    // odd-odd transpositions.
    fn bubble_oracle(word: &[Gen]) -> Option<(Vec<Gen>, i8)> {
        let mut w = word.to_vec();
        let mut sign = 1i8;
        loop {
            let mut swapped = false;
            for k in 0..w.len().saturating_sub(1) {
                if w[k] > w[k + 1] {
                    if w[k].parity().is_odd() && w[k + 1].parity().is_odd() {
                        sign = -sign;
                    }
                    w.swap(k, k + 1);
                    swapped = true;
                }
            }
            if !swapped {
                break;
            }
        }
        for k in 0..w.len().saturating_sub(1) {
            if w[k] == w[k + 1] && w[k].parity().is_odd() {
                return None;
            }
        }
        Some((w, sign))
    }

    fn gen_pool() -> Vec<Gen> {
        let mut pool = vec![Gen::base(0), Gen::base(1), Gen::param(0), Gen::dx(0), Gen::dx(1)];
        for f in 0..3u16 {
            let grading = Grading::new(Parity::from_bit(f as u8), f as i32 - 1);
            pool.push(Gen::jet(f, &MultiIndex::empty(), grading));
            pool.push(Gen::jet(f, &MultiIndex::from_slice(&[0]).unwrap(), grading));
            pool.push(Gen::contact(f, &MultiIndex::empty(), grading));
        }
        pool
    }

    proptest! {
        #[test]
        fn product_matches_bubble_sort_oracle(
            pick_a in proptest::collection::vec(0usize..14, 0..5),
            pick_b in proptest::collection::vec(0usize..14, 0..5),
        ) {
            let pool = gen_pool();
            let word_a: Vec<Gen> = pick_a.iter().map(|&k| pool[k]).collect();
            let word_b: Vec<Gen> = pick_b.iter().map(|&k| pool[k]).collect();

            // Build each canonical monomial from its own word, tracking signs.
            let fac_a: Vec<(Gen, u32)> = word_a.iter().map(|&g| (g, 1)).collect();
            let fac_b: Vec<(Gen, u32)> = word_b.iter().map(|&g| (g, 1)).collect();
            let a = Monomial::from_factors(&fac_a);
            let b = Monomial::from_factors(&fac_b);
            let (Some((ma, sa)), Some((mb, sb))) = (a, b) else {
                return Ok(()); // an input word was itself zero
            };

            let concat: Vec<Gen> = word_a.iter().chain(word_b.iter()).copied().collect();
            let oracle = bubble_oracle(&concat);
            let product = ma.mul(&mb);
            match (oracle, product) {
                (None, None) => {}
                (Some((w, s)), Some((m, sp))) => {
                    let flat: Vec<Gen> = m
                        .factors()
                        .iter()
                        .flat_map(|&(g, e)| std::iter::repeat(g).take(e as usize))
                        .collect();
                    prop_assert_eq!(flat, w);
                    prop_assert_eq!(sa * sb * sp, s);
                }
                (o, p) => prop_assert!(false, "oracle {:?} vs product {:?}", o.is_some(), p.is_some()),
            }
        }

        #[test]
        fn anticommutation_via_oracle(
            pick_a in proptest::collection::vec(0usize..14, 0..4),
            pick_b in proptest::collection::vec(0usize..14, 0..4),
        ) {
            // a*b = (-1)^{ε(a)ε(b)} b*a whenever both sides are nonzero.
            let pool = gen_pool();
            let fac_a: Vec<(Gen, u32)> = pick_a.iter().map(|&k| (pool[k], 1)).collect();
            let fac_b: Vec<(Gen, u32)> = pick_b.iter().map(|&k| (pool[k], 1)).collect();
            let (Some((ma, _)), Some((mb, _))) =
                (Monomial::from_factors(&fac_a), Monomial::from_factors(&fac_b))
            else {
                return Ok(());
            };
            if let (Some((mab, sab)), Some((mba, sba))) = (ma.mul(&mb), mb.mul(&ma)) {
                prop_assert_eq!(&mab, &mba);
                let expected = ma.parity().koszul(mb.parity());
                prop_assert_eq!(sab, sba * expected);
            }
        }
    }
}
