//! Incremental exact linear solving over sparse columns keyed by monomials.
//!
//! Columns are added in a caller-chosen order and the solver keeps a reduced
//! echelon basis; solving expresses a target as a combination of the original
//! columns. Free columns never enter a solution, and among dependent ways of
//! writing the target the earliest-added columns win, so column order encodes
//! search preference. All pivoting is deterministic.

use crate::ring::{GradedPoly, Monomial};
use crate::scalar::Scalar;
use std::collections::{BTreeMap, BTreeSet};

struct Pivot<C> {
    row: usize,
    /// Normalized column: entry at `row` is one; zero at all older pivot rows.
    col: BTreeMap<usize, C>,
    /// The pivot column as a combination of original column ids.
    expr: BTreeMap<usize, C>,
}

pub struct LinearSolver<C: Scalar> {
    row_ids: BTreeMap<Monomial, usize>,
    pivots: Vec<Pivot<C>>,
    pivot_rows: BTreeSet<usize>,
    ncols: usize,
}

impl<C: Scalar> Default for LinearSolver<C> {
    fn default() -> Self {
        Self::new()
    }
}

impl<C: Scalar> LinearSolver<C> {
    pub fn new() -> Self {
        LinearSolver {
            row_ids: BTreeMap::new(),
            pivots: Vec::new(),
            pivot_rows: BTreeSet::new(),
            ncols: 0,
        }
    }

    pub fn num_columns(&self) -> usize {
        self.ncols
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    fn intern(&mut self, m: &Monomial) -> usize {
        if let Some(&id) = self.row_ids.get(m) {
            return id;
        }
        let id = self.row_ids.len();
        self.row_ids.insert(m.clone(), id);
        id
    }

    /// Adds a column and returns its id; dependent (or zero) columns are
    /// accepted but never become pivots.
    pub fn add_column(&mut self, p: &GradedPoly<C>) -> usize {
        let id = self.ncols;
        self.ncols += 1;
        let mut col: BTreeMap<usize, C> = BTreeMap::new();
        for (m, c) in p.iter() {
            col.insert(self.intern(m), c.clone());
        }
        let mut expr = BTreeMap::from([(id, C::one())]);
        for pivot in &self.pivots {
            if let Some(e) = col.remove(&pivot.row) {
                axpy(&mut col, &(-e.clone()), &pivot.col);
                col.remove(&pivot.row);
                axpy(&mut expr, &(-e), &pivot.expr);
            }
        }
        if col.is_empty() {
            return id;
        }
        let row = *col.keys().next().expect("nonempty");
        let lead = col[&row].clone();
        let inv = C::one() / lead;
        for v in col.values_mut() {
            *v = v.clone() * inv.clone();
        }
        for v in expr.values_mut() {
            *v = v.clone() * inv.clone();
        }
        self.pivot_rows.insert(row);
        self.pivots.push(Pivot { row, col, expr });
        id
    }

    /// Expresses the target as a combination of previously added columns;
    /// None when inconsistent.
    pub fn solve(&self, target: &GradedPoly<C>) -> Option<Vec<(usize, C)>> {
        let mut t: BTreeMap<usize, C> = BTreeMap::new();
        for (m, c) in target.iter() {
            match self.row_ids.get(m) {
                Some(&id) => {
                    t.insert(id, c.clone());
                }
                // A row no column touches cannot be matched.
                None => return None,
            }
        }
        let mut x: BTreeMap<usize, C> = BTreeMap::new();
        for pivot in &self.pivots {
            if let Some(e) = t.remove(&pivot.row) {
                axpy(&mut t, &(-e.clone()), &pivot.col);
                t.remove(&pivot.row);
                axpy(&mut x, &e, &pivot.expr);
            }
        }
        if !t.is_empty() {
            return None;
        }
        Some(x.into_iter().filter(|(_, c)| !c.is_zero()).collect())
    }
}

fn axpy<C: Scalar>(dst: &mut BTreeMap<usize, C>, e: &C, src: &BTreeMap<usize, C>) {
    for (k, v) in src {
        let next = match dst.get(k) {
            Some(old) => old.clone() + e.clone() * v.clone(),
            None => e.clone() * v.clone(),
        };
        if next.is_zero() {
            dst.remove(k);
        } else {
            dst.insert(*k, next);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generator::Gen;
    use crate::scalar::ratio;
    use num_rational::BigRational;

    type P = GradedPoly<BigRational>;

    fn var(i: u8) -> P {
        P::from_gen(Gen::base(i))
    }

    #[test]
    fn solves_and_prefers_early_columns() {
        let mut s = LinearSolver::<BigRational>::new();
        let a = s.add_column(&var(0));
        let _b = s.add_column(&var(0)); // duplicate, stays free
        let c = s.add_column(&var(1));
        let target = &var(0).scale(&ratio(3, 1)) + &var(1);
        let sol = s.solve(&target).unwrap();
        assert_eq!(sol, vec![(a, ratio(3, 1)), (c, ratio(1, 1))]);
    }

    #[test]
    fn reports_inconsistency() {
        let mut s = LinearSolver::<BigRational>::new();
        s.add_column(&var(0));
        assert!(s.solve(&var(1)).is_none());
        // Mixed reachable/unreachable rows is still inconsistent.
        assert!(s.solve(&(&var(0) + &var(2))).is_none());
    }

    #[test]
    fn solves_an_overlapping_system_exactly() {
        // c0 = x+y, c1 = y+z, c2 = x-z; target x + 2y + z = c0 + c1.
        let mut s = LinearSolver::<BigRational>::new();
        let c0 = s.add_column(&(&var(0) + &var(1)));
        let c1 = s.add_column(&(&var(1) + &var(2)));
        let _c2 = s.add_column(&(&var(0) - &var(2)));
        let target = &(&var(0) + &var(1).scale(&ratio(2, 1))) + &var(2);
        let sol = s.solve(&target).unwrap();
        assert_eq!(sol, vec![(c0, ratio(1, 1)), (c1, ratio(1, 1))]);
    }

    #[test]
    fn zero_target_has_empty_solution() {
        let mut s = LinearSolver::<BigRational>::new();
        s.add_column(&var(0));
        assert_eq!(s.solve(&P::zero()).unwrap(), vec![]);
    }
}
