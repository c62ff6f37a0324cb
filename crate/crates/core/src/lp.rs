//! Exact two-phase simplex over the rationals.
//!
//! Programs are stated in their natural form (free or lower-bounded
//! variables, `>=`/`<=`/`=` rows) and converted internally to
//! `min c'y, Ay = b, y >= 0, b >= 0`. Pivoting follows Bland's rule, so the
//! solver terminates on every input and its output depends only on the input.
//!
//! Every optimal outcome carries a dual certificate for the original program,
//! stated for the maximisation form `max s*c.x` (`s = 1` for [`Sense::Max`],
//! `s = -1` for [`Sense::Min`]):
//!
//! * `sum_i y_i a_i + sum_j w_j e_j = s*c`
//! * `y_i >= 0` on `<=` rows, `y_i <= 0` on `>=` rows, free on `=` rows
//! * `w_j <= 0` on lower-bounded variables, `w_j = 0` on free ones
//! * `b.y + l.w = s*value`
//!
//! Both the primal point and the dual are checked by substitution before
//! [`solve`] returns.

use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::numeric::{dot_unchecked, QVector, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Sense {
    Max,
    Min,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Relation {
    Ge,
    Le,
    Eq,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Constraint {
    pub row: QVector,
    pub relation: Relation,
    pub rhs: Rational,
}

impl Constraint {
    pub fn new(row: QVector, relation: Relation, rhs: Rational) -> Self {
        Constraint { row, relation, rhs }
    }

    pub fn holds_at(&self, x: &QVector) -> bool {
        let lhs = dot_unchecked(&self.row, x);
        match self.relation {
            Relation::Ge => lhs >= self.rhs,
            Relation::Le => lhs <= self.rhs,
            Relation::Eq => lhs == self.rhs,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearProgram {
    pub objective: QVector,
    pub sense: Sense,
    pub constraints: Vec<Constraint>,
    /// Per-variable lower bound; `None` means the variable is free.
    pub lower_bounds: Vec<Option<Rational>>,
}

impl LinearProgram {
    /// A program over `objective.dim()` free variables with no constraints.
    pub fn new(sense: Sense, objective: QVector) -> Self {
        let n = objective.dim();
        LinearProgram {
            objective,
            sense,
            constraints: Vec::new(),
            lower_bounds: vec![None; n],
        }
    }

    pub fn dim(&self) -> usize {
        self.objective.dim()
    }

    pub fn constrain(&mut self, row: QVector, relation: Relation, rhs: Rational) -> &mut Self {
        self.constraints.push(Constraint::new(row, relation, rhs));
        self
    }

    pub fn lower_bound(&mut self, var: usize, bound: Rational) -> &mut Self {
        self.lower_bounds[var] = Some(bound);
        self
    }

    pub fn nonnegative(&mut self, vars: impl IntoIterator<Item = usize>) -> &mut Self {
        for j in vars {
            self.lower_bounds[j] = Some(Rational::zero());
        }
        self
    }

    fn validate(&self) -> Result<()> {
        let n = self.dim();
        if self.lower_bounds.len() != n {
            return Err(Error::Dimension {
                expected: n,
                found: self.lower_bounds.len(),
            });
        }
        for c in &self.constraints {
            if c.row.dim() != n {
                return Err(Error::Dimension {
                    expected: n,
                    found: c.row.dim(),
                });
            }
        }
        Ok(())
    }

    /// True when `x` satisfies every constraint and bound exactly.
    pub fn is_feasible(&self, x: &QVector) -> bool {
        x.dim() == self.dim()
            && self.constraints.iter().all(|c| c.holds_at(x))
            && self
                .lower_bounds
                .iter()
                .zip(x.iter())
                .all(|(l, v)| l.as_ref().is_none_or(|l| v >= l))
    }

    fn max_form_sign(&self) -> Rational {
        match self.sense {
            Sense::Max => Rational::one(),
            Sense::Min => -Rational::one(),
        }
    }

    /// Checks a dual certificate against the conventions in the module docs.
    pub fn verify_dual(&self, value: &Rational, dual: &DualCertificate) -> bool {
        let n = self.dim();
        if dual.row_multipliers.len() != self.constraints.len() || dual.bound_multipliers.len() != n
        {
            return false;
        }
        let s = self.max_form_sign();
        let signs_ok = self
            .constraints
            .iter()
            .zip(&dual.row_multipliers)
            .all(|(c, y)| match c.relation {
                Relation::Le => !y.is_negative(),
                Relation::Ge => !y.is_positive(),
                Relation::Eq => true,
            })
            && self
                .lower_bounds
                .iter()
                .zip(&dual.bound_multipliers)
                .all(|(l, w)| match l {
                    Some(_) => !w.is_positive(),
                    None => w.is_zero(),
                });
        if !signs_ok {
            return false;
        }
        let stationary = (0..n).all(|j| {
            let combo = self
                .constraints
                .iter()
                .zip(&dual.row_multipliers)
                .fold(Rational::zero(), |acc, (c, y)| acc + &c.row[j] * y)
                + &dual.bound_multipliers[j];
            combo == &s * &self.objective[j]
        });
        let dual_value = self
            .constraints
            .iter()
            .zip(&dual.row_multipliers)
            .fold(Rational::zero(), |acc, (c, y)| acc + &c.rhs * y)
            + self
                .lower_bounds
                .iter()
                .zip(&dual.bound_multipliers)
                .filter_map(|(l, w)| l.as_ref().map(|l| l * w))
                .fold(Rational::zero(), |acc, t| acc + t);
        stationary && dual_value == s * value
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DualCertificate {
    pub row_multipliers: Vec<Rational>,
    pub bound_multipliers: Vec<Rational>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Solution {
    pub value: Rational,
    pub point: QVector,
    pub dual: DualCertificate,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LpOutcome {
    Optimal(Solution),
    Infeasible,
    Unbounded,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

impl LpOutcome {
    pub fn status(&self) -> LpStatus {
        match self {
            LpOutcome::Optimal(_) => LpStatus::Optimal,
            LpOutcome::Infeasible => LpStatus::Infeasible,
            LpOutcome::Unbounded => LpStatus::Unbounded,
        }
    }

    pub fn optimal(&self) -> Option<&Solution> {
        match self {
            LpOutcome::Optimal(s) => Some(s),
            _ => None,
        }
    }
}

/// How an original variable maps onto standard-form columns.
#[derive(Debug, Clone, Copy)]
enum VarMap {
    /// `x = l + y[col]`
    Shifted(usize),
    /// `x = y[pos] - y[neg]`
    Split(usize, usize),
}

struct Tableau {
    /// rows x (cols + 1); the last entry of each row is the right-hand side
    t: Vec<Vec<Rational>>,
    basis: Vec<usize>,
    cols: usize,
}

enum Pivoting {
    Optimal,
    Unbounded,
}

impl Tableau {
    fn rhs(&self, r: usize) -> &Rational {
        &self.t[r][self.cols]
    }

    fn pivot(&mut self, r: usize, e: usize) {
        let p = self.t[r][e].clone();
        for x in self.t[r].iter_mut() {
            *x /= &p;
        }
        let prow = self.t[r].clone();
        for (i, row) in self.t.iter_mut().enumerate() {
            if i == r || row[e].is_zero() {
                continue;
            }
            let f = row[e].clone();
            for (x, pv) in row.iter_mut().zip(&prow) {
                if !pv.is_zero() {
                    *x -= &f * pv;
                }
            }
        }
        self.basis[r] = e;
    }

    fn reduced_cost(&self, cost: &[Rational], j: usize) -> Rational {
        let mut r = cost[j].clone();
        for (i, &b) in self.basis.iter().enumerate() {
            if !cost[b].is_zero() && !self.t[i][j].is_zero() {
                r -= &cost[b] * &self.t[i][j];
            }
        }
        r
    }

    /// Bland's rule: lowest-index improving column enters; ratio ties go to the
    /// lowest-index basic variable.
    fn run(&mut self, cost: &[Rational], allowed: usize) -> Pivoting {
        loop {
            let entering = (0..allowed).find(|&j| self.reduced_cost(cost, j).is_negative());
            let Some(e) = entering else {
                return Pivoting::Optimal;
            };
            let mut leave: Option<(usize, Rational)> = None;
            for i in 0..self.t.len() {
                let a = &self.t[i][e];
                if !a.is_positive() {
                    continue;
                }
                let ratio = self.rhs(i) / a;
                let better = match &leave {
                    None => true,
                    Some((li, lr)) => {
                        ratio < *lr || (ratio == *lr && self.basis[i] < self.basis[*li])
                    }
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
            match leave {
                None => return Pivoting::Unbounded,
                Some((r, _)) => self.pivot(r, e),
            }
        }
    }

    fn objective(&self, cost: &[Rational]) -> Rational {
        self.basis
            .iter()
            .enumerate()
            .fold(Rational::zero(), |acc, (i, &b)| {
                acc + &cost[b] * self.rhs(i)
            })
    }
}

/// Solves `lp` exactly.
pub fn solve(lp: &LinearProgram) -> Result<LpOutcome> {
    lp.validate()?;
    let n = lp.dim();
    let m = lp.constraints.len();

    let mut maps = Vec::with_capacity(n);
    let mut ncols = 0;
    for l in &lp.lower_bounds {
        match l {
            Some(_) => {
                maps.push(VarMap::Shifted(ncols));
                ncols += 1;
            }
            None => {
                maps.push(VarMap::Split(ncols, ncols + 1));
                ncols += 2;
            }
        }
    }
    let mut slack_of = vec![None; m];
    for (i, c) in lp.constraints.iter().enumerate() {
        if c.relation != Relation::Eq {
            slack_of[i] = Some(ncols);
            ncols += 1;
        }
    }
    let first_art = ncols;
    let total = ncols + m;

    let shift: QVector = lp
        .lower_bounds
        .iter()
        .map(|l| l.clone().unwrap_or_else(Rational::zero))
        .collect();
    let mut sigma = vec![Rational::one(); m];
    let mut t = Vec::with_capacity(m);
    for (i, c) in lp.constraints.iter().enumerate() {
        let mut row = vec![Rational::zero(); total + 1];
        for (j, a) in c.row.iter().enumerate() {
            match maps[j] {
                VarMap::Shifted(k) => row[k] = a.clone(),
                VarMap::Split(p, q) => {
                    row[p] = a.clone();
                    row[q] = -a.clone();
                }
            }
        }
        if let Some(s) = slack_of[i] {
            row[s] = match c.relation {
                Relation::Le => Rational::one(),
                _ => -Rational::one(),
            };
        }
        let mut rhs = &c.rhs - dot_unchecked(&c.row, &shift);
        if rhs.is_negative() {
            for x in row.iter_mut() {
                *x = -x.clone();
            }
            rhs = -rhs;
            sigma[i] = -Rational::one();
        }
        row[first_art + i] = Rational::one();
        row[total] = rhs;
        t.push(row);
    }
    let mut tab = Tableau {
        t,
        basis: (first_art..total).collect(),
        cols: total,
    };

    // phase 1
    let mut phase1 = vec![Rational::zero(); total];
    for c in phase1.iter_mut().skip(first_art) {
        *c = Rational::one();
    }
    match tab.run(&phase1, total) {
        Pivoting::Optimal => {}
        Pivoting::Unbounded => unreachable!("phase 1 objective is bounded below by zero"),
    }
    if tab.objective(&phase1).is_positive() {
        return Ok(LpOutcome::Infeasible);
    }
    for r in 0..m {
        if tab.basis[r] >= first_art {
            if let Some(j) = (0..first_art).find(|&j| !tab.t[r][j].is_zero()) {
                tab.pivot(r, j);
            }
            // otherwise the row is redundant; the artificial stays basic at zero
        }
    }

    // phase 2, in the minimisation form of max s*c
    let s = lp.max_form_sign();
    let mut cost = vec![Rational::zero(); total];
    for (j, map) in maps.iter().enumerate() {
        let cj = -(&s * &lp.objective[j]);
        match *map {
            VarMap::Shifted(k) => cost[k] = cj,
            VarMap::Split(p, q) => {
                cost[q] = -cj.clone();
                cost[p] = cj;
            }
        }
    }
    if let Pivoting::Unbounded = tab.run(&cost, first_art) {
        return Ok(LpOutcome::Unbounded);
    }

    let mut y = vec![Rational::zero(); total];
    for (i, &b) in tab.basis.iter().enumerate() {
        y[b] = tab.rhs(i).clone();
    }
    let point: QVector = maps
        .iter()
        .zip(shift.iter())
        .map(|(map, l)| match *map {
            VarMap::Shifted(k) => l + &y[k],
            VarMap::Split(p, q) => &y[p] - &y[q],
        })
        .collect();
    let value = dot_unchecked(&lp.objective, &point);

    // pi = c_B B^-1, read off the artificial columns
    let pi: Vec<Rational> = (0..m)
        .map(|i| {
            tab.basis
                .iter()
                .enumerate()
                .fold(Rational::zero(), |acc, (r, &b)| {
                    acc + &cost[b] * &tab.t[r][first_art + i]
                })
        })
        .collect();
    let row_multipliers: Vec<Rational> = pi.iter().zip(&sigma).map(|(p, sg)| -(p * sg)).collect();
    let bound_multipliers: Vec<Rational> = maps
        .iter()
        .map(|map| match *map {
            VarMap::Shifted(k) => -tab.reduced_cost(&cost, k),
            VarMap::Split(..) => Rational::zero(),
        })
        .collect();
    let dual = DualCertificate {
        row_multipliers,
        bound_multipliers,
    };

    if !lp.is_feasible(&point) {
        return Err(Error::BadCertificate(
            "primal point violates a constraint".into(),
        ));
    }
    if !lp.verify_dual(&value, &dual) {
        return Err(Error::BadCertificate(
            "dual certificate does not close the gap".into(),
        ));
    }
    Ok(LpOutcome::Optimal(Solution { value, point, dual }))
}

/// A point satisfying every constraint and bound, or `None` when the system
/// is infeasible.
pub fn feasible_point(
    constraints: &[Constraint],
    lower_bounds: &[Option<Rational>],
) -> Result<Option<QVector>> {
    let n = lower_bounds.len();
    let lp = LinearProgram {
        objective: QVector::zeros(n),
        sense: Sense::Max,
        constraints: constraints.to_vec(),
        lower_bounds: lower_bounds.to_vec(),
    };
    Ok(match solve(&lp)? {
        LpOutcome::Optimal(s) => Some(s.point),
        LpOutcome::Infeasible => None,
        LpOutcome::Unbounded => unreachable!("zero objective cannot be unbounded"),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::{int, ratio};
    use proptest::prelude::*;

    fn v(x: &[i64]) -> QVector {
        QVector::from_ints(x)
    }

    #[test]
    fn bounded_max() {
        let mut lp = LinearProgram::new(Sense::Max, v(&[1]));
        lp.constrain(v(&[1]), Relation::Le, int(5)).nonnegative([0]);
        let out = solve(&lp).unwrap();
        let sol = out.optimal().unwrap();
        assert_eq!(sol.value, int(5));
        assert_eq!(sol.point, v(&[5]));
    }

    #[test]
    fn unbounded_max() {
        let mut lp = LinearProgram::new(Sense::Max, v(&[1]));
        lp.nonnegative([0]);
        assert_eq!(solve(&lp).unwrap(), LpOutcome::Unbounded);
    }

    #[test]
    fn infeasible_system() {
        let mut lp = LinearProgram::new(Sense::Max, v(&[0]));
        lp.constrain(v(&[1]), Relation::Ge, int(1))
            .constrain(v(&[1]), Relation::Le, int(0));
        assert_eq!(solve(&lp).unwrap(), LpOutcome::Infeasible);
        let cons = lp.constraints.clone();
        assert_eq!(feasible_point(&cons, &[None]).unwrap(), None);
    }

    #[test]
    fn segment_feasible_point() {
        let cons = vec![Constraint::new(v(&[1, 1]), Relation::Eq, int(1))];
        let p = feasible_point(&cons, &[Some(int(0)), Some(int(0))])
            .unwrap()
            .unwrap();
        assert_eq!(&p[0] + &p[1], int(1));
        assert!(!p[0].is_negative() && !p[1].is_negative());
    }

    #[test]
    fn dimension_mismatch_is_reported() {
        let mut lp = LinearProgram::new(Sense::Max, v(&[1, 1]));
        lp.constrain(v(&[1]), Relation::Le, int(1));
        assert!(matches!(solve(&lp), Err(Error::Dimension { .. })));
    }

    #[test]
    fn free_variables_and_min() {
        // min x + y, x - y = 1/2, x >= -3 (y free, bounded via x + y >= -1)
        let mut lp = LinearProgram::new(Sense::Min, v(&[1, 1]));
        lp.constrain(v(&[1, -1]), Relation::Eq, ratio(1, 2))
            .constrain(v(&[1, 1]), Relation::Ge, int(-1))
            .lower_bound(0, int(-3));
        let sol = solve(&lp).unwrap();
        assert_eq!(sol.optimal().unwrap().value, int(-1));
    }

    #[test]
    fn degenerate_cycling_example() {
        // Beale's classic cycling instance; Bland's rule must terminate.
        let mut lp = LinearProgram::new(
            Sense::Max,
            QVector::new(vec![ratio(3, 4), int(-150), ratio(1, 50), int(-6)]),
        );
        lp.constrain(
            QVector::new(vec![ratio(1, 4), int(-60), ratio(-1, 25), int(9)]),
            Relation::Le,
            int(0),
        )
        .constrain(
            QVector::new(vec![ratio(1, 2), int(-90), ratio(-1, 50), int(3)]),
            Relation::Le,
            int(0),
        )
        .constrain(v(&[0, 0, 1, 0]), Relation::Le, int(1))
        .nonnegative(0..4);
        let sol = solve(&lp).unwrap();
        assert_eq!(sol.optimal().unwrap().value, ratio(1, 20));
    }

    #[test]
    fn redundant_equalities() {
        let mut lp = LinearProgram::new(Sense::Max, v(&[1, 2]));
        lp.constrain(v(&[1, 1]), Relation::Eq, int(1))
            .constrain(v(&[2, 2]), Relation::Eq, int(2))
            .nonnegative(0..2);
        let sol = solve(&lp).unwrap();
        assert_eq!(sol.optimal().unwrap().value, int(2));
    }

    /// Enumerates vertices of {x >= 0, A x <= b} in two variables by brute force.
    fn brute_max_2d(c: &[i64], rows: &[(i64, i64, i64)]) -> Option<Rational> {
        let mut lines: Vec<(Rational, Rational, Rational)> = rows
            .iter()
            .map(|&(a, b, r)| (int(a), int(b), int(r)))
            .collect();
        lines.push((int(1), int(0), int(0)));
        lines.push((int(0), int(1), int(0)));
        let mut best: Option<Rational> = None;
        for i in 0..lines.len() {
            for j in i + 1..lines.len() {
                let (a1, b1, r1) = &lines[i];
                let (a2, b2, r2) = &lines[j];
                let det = a1 * b2 - a2 * b1;
                if det.is_zero() {
                    continue;
                }
                let x = (r1 * b2 - r2 * b1) / &det;
                let y = (a1 * r2 - a2 * r1) / &det;
                let ok = !x.is_negative()
                    && !y.is_negative()
                    && rows
                        .iter()
                        .all(|&(a, b, r)| int(a) * &x + int(b) * &y <= int(r));
                if ok {
                    let val = int(c[0]) * &x + int(c[1]) * &y;
                    if best.as_ref().is_none_or(|b| &val > b) {
                        best = Some(val);
                    }
                }
            }
        }
        best
    }

    proptest! {
        #[test]
        fn matches_brute_force_in_box(
            c0 in -4i64..=4, c1 in -4i64..=4,
            rows in proptest::collection::vec((-3i64..=3, -3i64..=3, 0i64..=6), 0..4)
        ) {
            let mut rows = rows;
            // keep the feasible region bounded
            rows.push((1, 0, 5));
            rows.push((0, 1, 5));
            let mut lp = LinearProgram::new(Sense::Max, v(&[c0, c1]));
            for &(a, b, r) in &rows {
                lp.constrain(v(&[a, b]), Relation::Le, int(r));
            }
            lp.nonnegative(0..2);
            let out = solve(&lp).unwrap();
            let sol = out.optimal().expect("origin is feasible and region bounded");
            prop_assert_eq!(Some(sol.value.clone()), brute_max_2d(&[c0, c1], &rows));
            prop_assert!(lp.verify_dual(&sol.value, &sol.dual));
        }

        #[test]
        fn solutions_verify_by_substitution(
            obj in proptest::collection::vec(-3i64..=3, 3),
            rows in proptest::collection::vec((proptest::collection::vec(-2i64..=2, 3), 0u8..3, -3i64..=3), 1..5),
        ) {
            let mut lp = LinearProgram::new(Sense::Min, v(&obj));
            for (r, rel, b) in &rows {
                let rel = [Relation::Ge, Relation::Le, Relation::Eq][*rel as usize];
                lp.constrain(v(r), rel, int(*b));
            }
            lp.nonnegative([0, 1]);
            match solve(&lp).unwrap() {
                LpOutcome::Optimal(s) => {
                    prop_assert!(lp.is_feasible(&s.point));
                    prop_assert!(lp.verify_dual(&s.value, &s.dual));
                }
                LpOutcome::Infeasible | LpOutcome::Unbounded => {}
            }
        }
    }
}
