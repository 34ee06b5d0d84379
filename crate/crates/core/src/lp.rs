//! Exact linear programming: a two-phase primal simplex over the rationals
//! with Bland's anti-cycling pivot rule. Problems are stated in equality form
//! (`Ax = b` with a per-variable nonnegativity mask); a small builder adds
//! inequality rows via explicit slacks.
//!
//! The solver is deterministic: identical inputs produce identical pivots and
//! therefore bit-identical witnesses.

use num_traits::{One, Signed, Zero};

use crate::linalg::dot_rat;
use crate::rational::Rational;

#[derive(Clone, Debug)]
pub struct LpProblem {
    /// Objective to maximize, one entry per variable.
    pub objective: Vec<Rational>,
    /// Equality constraint rows.
    pub rows: Vec<Vec<Rational>>,
    pub rhs: Vec<Rational>,
    /// `nonneg[j]` constrains variable `j` to `x_j >= 0`; unmasked variables
    /// are free (internally split into a difference of two nonnegatives).
    pub nonneg: Vec<bool>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Unbounded,
    Infeasible,
}

#[derive(Clone, Debug)]
pub struct LpResult {
    pub status: LpStatus,
    /// Optimal value when `Optimal`; zero otherwise.
    pub value: Rational,
    /// A feasible point: the optimizer when `Optimal`, some feasible point
    /// when `Unbounded`, absent when `Infeasible`.
    pub witness: Option<Vec<Rational>>,
}

struct Tableau {
    /// `m` rows, each of width `n_cols + 1` (rhs last).
    rows: Vec<Vec<Rational>>,
    basis: Vec<usize>,
    n_cols: usize,
}

impl Tableau {
    fn pivot(&mut self, r: usize, c: usize) {
        let inv = self.rows[r][c].clone();
        debug_assert!(!inv.is_zero());
        for x in self.rows[r].iter_mut() {
            *x /= &inv;
        }
        for i in 0..self.rows.len() {
            if i == r || self.rows[i][c].is_zero() {
                continue;
            }
            let f = self.rows[i][c].clone();
            for j in 0..=self.n_cols {
                let sub = &f * &self.rows[r][j];
                self.rows[i][j] -= sub;
            }
        }
        self.basis[r] = c;
    }

    /// Maximizes `cost` (indexed by column) from the current basic feasible
    /// solution using Bland's rule. Returns false when unbounded.
    fn optimize(&mut self, cost: &[Rational], allowed: &[bool]) -> bool {
        loop {
            // Reduced cost of column j: c_j - c_B . (current column j).
            let mut entering = None;
            'cols: for j in 0..self.n_cols {
                if !allowed[j] || self.basis.contains(&j) {
                    continue;
                }
                let mut red = cost[j].clone();
                for (i, &b) in self.basis.iter().enumerate() {
                    if !cost[b].is_zero() && !self.rows[i][j].is_zero() {
                        red -= &cost[b] * &self.rows[i][j];
                    }
                }
                if red.is_positive() {
                    entering = Some(j);
                    break 'cols;
                }
            }
            let Some(j) = entering else {
                return true;
            };
            // Ratio test; ties resolved toward the smallest basis index.
            let mut leave: Option<(usize, Rational)> = None;
            for i in 0..self.rows.len() {
                if !self.rows[i][j].is_positive() {
                    continue;
                }
                let ratio = &self.rows[i][self.n_cols] / &self.rows[i][j];
                match &leave {
                    None => leave = Some((i, ratio)),
                    Some((li, lr)) => {
                        if ratio < *lr || (ratio == *lr && self.basis[i] < self.basis[*li]) {
                            leave = Some((i, ratio));
                        }
                    }
                }
            }
            let Some((r, _)) = leave else {
                return false;
            };
            self.pivot(r, j);
        }
    }
}

pub fn lp_solve(p: &LpProblem) -> LpResult {
    let n = p.objective.len();
    assert_eq!(p.nonneg.len(), n);
    assert_eq!(p.rows.len(), p.rhs.len());
    for row in &p.rows {
        assert_eq!(row.len(), n);
    }

    // Column layout: one column per nonnegative variable, two (positive and
    // negative part) per free variable, then one artificial per row.
    let mut col_of: Vec<(usize, i8)> = Vec::new();
    for j in 0..n {
        col_of.push((j, 1));
        if !p.nonneg[j] {
            col_of.push((j, -1));
        }
    }
    let n_real = col_of.len();
    let m = p.rows.len();
    let n_cols = n_real + m;

    let mut rows: Vec<Vec<Rational>> = Vec::with_capacity(m);
    for (i, row) in p.rows.iter().enumerate() {
        let flip = p.rhs[i].is_negative();
        let mut t: Vec<Rational> = Vec::with_capacity(n_cols + 1);
        for &(j, sign) in &col_of {
            let mut v = row[j].clone();
            if sign < 0 {
                v = -v;
            }
            if flip {
                v = -v;
            }
            t.push(v);
        }
        for k in 0..m {
            t.push(if k == i { Rational::one() } else { Rational::zero() });
        }
        t.push(if flip { -p.rhs[i].clone() } else { p.rhs[i].clone() });
        rows.push(t);
    }

    let mut tab = Tableau {
        rows,
        basis: (n_real..n_cols).collect(),
        n_cols,
    };

    // Phase 1: drive the artificial variables to zero.
    if m > 0 {
        let mut cost1 = vec![Rational::zero(); n_cols];
        for c in cost1.iter_mut().skip(n_real) {
            *c = -Rational::one();
        }
        let allowed = vec![true; n_cols];
        let bounded = tab.optimize(&cost1, &allowed);
        debug_assert!(bounded, "phase-1 objective is bounded by construction");
        let infeas: Rational = tab
            .basis
            .iter()
            .enumerate()
            .filter(|(_, &b)| b >= n_real)
            .map(|(i, _)| tab.rows[i][tab.n_cols].clone())
            .sum();
        if !infeas.is_zero() {
            return LpResult {
                status: LpStatus::Infeasible,
                value: Rational::zero(),
                witness: None,
            };
        }
        // Pivot leftover artificials out of the basis; an all-zero row means
        // the original constraint was redundant and can be dropped.
        let mut i = 0;
        while i < tab.rows.len() {
            if tab.basis[i] >= n_real {
                if let Some(c) = (0..n_real).find(|&c| !tab.rows[i][c].is_zero()) {
                    tab.pivot(i, c);
                } else {
                    tab.rows.remove(i);
                    tab.basis.remove(i);
                    continue;
                }
            }
            i += 1;
        }
    }

    // Phase 2: the real objective; artificial columns are frozen out.
    let mut cost2 = vec![Rational::zero(); n_cols];
    let mut allowed = vec![false; n_cols];
    for (c, &(j, sign)) in col_of.iter().enumerate() {
        cost2[c] = if sign > 0 {
            p.objective[j].clone()
        } else {
            -p.objective[j].clone()
        };
        allowed[c] = true;
    }
    let bounded = tab.optimize(&cost2, &allowed);

    let mut x = vec![Rational::zero(); n];
    for (i, &b) in tab.basis.iter().enumerate() {
        if b < n_real {
            let (j, sign) = col_of[b];
            let v = tab.rows[i][tab.n_cols].clone();
            if sign > 0 {
                x[j] += v;
            } else {
                x[j] -= v;
            }
        }
    }

    if bounded {
        let value = dot_rat(&p.objective, &x);
        LpResult {
            status: LpStatus::Optimal,
            value,
            witness: Some(x),
        }
    } else {
        LpResult {
            status: LpStatus::Unbounded,
            value: Rational::zero(),
            witness: Some(x),
        }
    }
}

/// Convenience layer: states a problem over `n` base variables and appends
/// slack columns for inequality rows. The solved witness is truncated back to
/// the base variables.
#[derive(Clone, Debug)]
pub struct LpBuilder {
    n: usize,
    nonneg: Vec<bool>,
    objective: Vec<Rational>,
    rows: Vec<(Vec<Rational>, Option<i8>, Rational)>,
}

impl LpBuilder {
    /// All base variables start free with a zero objective.
    pub fn new(n: usize) -> Self {
        LpBuilder {
            n,
            nonneg: vec![false; n],
            objective: vec![Rational::zero(); n],
            rows: Vec::new(),
        }
    }

    pub fn set_nonneg(&mut self, j: usize) {
        self.nonneg[j] = true;
    }

    pub fn set_objective(&mut self, obj: Vec<Rational>) {
        assert_eq!(obj.len(), self.n);
        self.objective = obj;
    }

    /// Adds a single objective coefficient (keeps others unchanged).
    pub fn objective_coeff(&mut self, j: usize, c: Rational) {
        self.objective[j] = c;
    }

    pub fn add_eq(&mut self, coeffs: Vec<Rational>, rhs: Rational) {
        assert_eq!(coeffs.len(), self.n);
        self.rows.push((coeffs, None, rhs));
    }

    /// `coeffs . x >= rhs`.
    pub fn add_ge(&mut self, coeffs: Vec<Rational>, rhs: Rational) {
        assert_eq!(coeffs.len(), self.n);
        self.rows.push((coeffs, Some(-1), rhs));
    }

    /// `coeffs . x <= rhs`.
    pub fn add_le(&mut self, coeffs: Vec<Rational>, rhs: Rational) {
        assert_eq!(coeffs.len(), self.n);
        self.rows.push((coeffs, Some(1), rhs));
    }

    pub fn solve(&self) -> LpResult {
        let n_slack = self.rows.iter().filter(|(_, s, _)| s.is_some()).count();
        let total = self.n + n_slack;
        let mut rows = Vec::with_capacity(self.rows.len());
        let mut rhs = Vec::with_capacity(self.rows.len());
        let mut slack = self.n;
        for (coeffs, kind, b) in &self.rows {
            let mut row = coeffs.clone();
            row.resize(total, Rational::zero());
            if let Some(sign) = kind {
                row[slack] = if *sign > 0 {
                    Rational::one()
                } else {
                    -Rational::one()
                };
                slack += 1;
            }
            rows.push(row);
            rhs.push(b.clone());
        }
        let mut objective = self.objective.clone();
        objective.resize(total, Rational::zero());
        let mut nonneg = self.nonneg.clone();
        nonneg.resize(total, true);
        let mut res = lp_solve(&LpProblem {
            objective,
            rows,
            rhs,
            nonneg,
        });
        if let Some(w) = &mut res.witness {
            w.truncate(self.n);
        }
        res
    }
}
