//! Dense two-phase simplex over exact rational arithmetic.
//!
//! Pivot selection is Dantzig's rule with a permanent switch to Bland's
//! rule after a run of degenerate pivots, so the solver terminates on the
//! highly degenerate occupancy LPs without giving up iteration speed.

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Le,
    Ge,
    Eq,
}

#[derive(Debug, Clone)]
pub struct Constraint {
    /// Sparse coefficients (variable index, value).
    pub coeffs: Vec<(usize, BigRational)>,
    pub relation: Relation,
    pub rhs: BigRational,
}

#[derive(Debug, Clone)]
pub struct LpProblem {
    pub num_vars: usize,
    pub maximize: bool,
    /// Dense objective over the structural variables.
    pub objective: Vec<BigRational>,
    pub constraints: Vec<Constraint>,
}

#[derive(Debug)]
pub struct LpSolution {
    pub objective: BigRational,
    pub values: Vec<BigRational>,
}

#[derive(Debug)]
pub enum LpOutcome {
    Optimal(LpSolution),
    Infeasible,
    Unbounded,
}

const DEGENERATE_PIVOT_LIMIT: usize = 64;

struct Tableau {
    /// rows x (cols + 1); last column is the rhs
    rows: Vec<Vec<BigRational>>,
    reduced: Vec<BigRational>,
    objective_value: BigRational,
    basis: Vec<usize>,
    cols: usize,
    /// columns at index >= enter_limit (artificials) may not enter
    enter_limit: usize,
    bland: bool,
    degenerate_run: usize,
}

impl Tableau {
    fn pivot(&mut self, row: usize, col: usize) {
        let pivot = self.rows[row][col].clone();
        for v in self.rows[row].iter_mut() {
            *v /= pivot.clone();
        }
        for r in 0..self.rows.len() {
            if r == row || self.rows[r][col].is_zero() {
                continue;
            }
            let factor = self.rows[r][col].clone();
            for c in 0..=self.cols {
                let delta = factor.clone() * self.rows[row][c].clone();
                self.rows[r][c] -= delta;
            }
        }
        if !self.reduced[col].is_zero() {
            let factor = self.reduced[col].clone();
            for c in 0..self.cols {
                let delta = factor.clone() * self.rows[row][c].clone();
                self.reduced[c] -= delta;
            }
            // z moves by (reduced cost) * (entering variable's new value)
            self.objective_value += factor * self.rows[row][self.cols].clone();
        }
        self.basis[row] = col;
    }

    fn entering(&self) -> Option<usize> {
        if self.bland {
            (0..self.enter_limit).find(|&c| self.reduced[c].is_negative())
        } else {
            let mut best: Option<usize> = None;
            for c in 0..self.enter_limit {
                if self.reduced[c].is_negative()
                    && best.map_or(true, |b| self.reduced[c] < self.reduced[b])
                {
                    best = Some(c);
                }
            }
            best
        }
    }

    fn leaving(&self, col: usize) -> Option<usize> {
        let mut best: Option<(usize, BigRational)> = None;
        for r in 0..self.rows.len() {
            if !self.rows[r][col].is_positive() {
                continue;
            }
            let ratio = self.rows[r][self.cols].clone() / self.rows[r][col].clone();
            let better = match &best {
                None => true,
                Some((br, bratio)) => {
                    ratio < *bratio || (ratio == *bratio && self.basis[r] < self.basis[*br])
                }
            };
            if better {
                best = Some((r, ratio));
            }
        }
        best.map(|(r, _)| r)
    }

    /// Runs to optimality; returns false when unbounded.
    fn optimize(&mut self) -> bool {
        while let Some(col) = self.entering() {
            let Some(row) = self.leaving(col) else {
                return false;
            };
            if self.rows[row][self.cols].is_zero() {
                self.degenerate_run += 1;
                if self.degenerate_run > DEGENERATE_PIVOT_LIMIT {
                    self.bland = true;
                }
            } else {
                self.degenerate_run = 0;
            }
            self.pivot(row, col);
        }
        true
    }
}

pub fn solve(problem: &LpProblem) -> LpOutcome {
    let n = problem.num_vars;
    let m = problem.constraints.len();

    // Column layout: structural | slack/surplus | artificial.
    let mut slack_of = vec![None; m];
    let mut art_of = vec![None; m];
    let mut next = n;
    for (r, c) in problem.constraints.iter().enumerate() {
        let rhs_neg = c.rhs.is_negative();
        let rel = flip_if(c.relation, rhs_neg);
        if rel != Relation::Eq {
            slack_of[r] = Some(next);
            next += 1;
        }
        if rel != Relation::Le {
            art_of[r] = Some(next);
        }
    }
    let num_slack = next - n;
    let mut art_count = 0;
    for a in art_of.iter_mut() {
        if a.is_some() {
            *a = Some(next + art_count);
            art_count += 1;
        }
    }
    let cols = n + num_slack + art_count;

    let mut rows = Vec::with_capacity(m);
    let mut basis = Vec::with_capacity(m);
    for (r, c) in problem.constraints.iter().enumerate() {
        let mut row = vec![BigRational::zero(); cols + 1];
        let negate = c.rhs.is_negative();
        for (var, value) in &c.coeffs {
            let v = if negate { -value.clone() } else { value.clone() };
            row[*var] += v;
        }
        row[cols] = if negate { -c.rhs.clone() } else { c.rhs.clone() };
        let rel = flip_if(c.relation, negate);
        if let Some(s) = slack_of[r] {
            row[s] = match rel {
                Relation::Le => BigRational::one(),
                Relation::Ge => -BigRational::one(),
                Relation::Eq => unreachable!(),
            };
        }
        if let Some(a) = art_of[r] {
            row[a] = BigRational::one();
            basis.push(a);
        } else {
            basis.push(slack_of[r].expect("Le rows have a slack"));
        }
        rows.push(row);
    }

    // Phase 1: minimize the artificial sum, priced out over the initial
    // basis.
    let mut reduced = vec![BigRational::zero(); cols];
    let mut objective_value = BigRational::zero();
    for c in (n + num_slack)..cols {
        reduced[c] = BigRational::one();
    }
    for (r, row) in rows.iter().enumerate() {
        if art_of[r].is_some() {
            for c in 0..cols {
                let delta = row[c].clone();
                reduced[c] -= delta;
            }
            objective_value += row[cols].clone();
        }
    }

    let mut tab = Tableau {
        rows,
        reduced,
        objective_value,
        basis,
        cols,
        enter_limit: cols,
        bland: false,
        degenerate_run: 0,
    };
    if art_count > 0 {
        let bounded = tab.optimize();
        debug_assert!(bounded, "phase 1 is bounded below by zero");
        if !tab.objective_value.is_zero() {
            return LpOutcome::Infeasible;
        }
        // Drive leftover artificials out of the basis; drop rows that went
        // redundant.
        let art_start = n + num_slack;
        let mut r = 0;
        while r < tab.rows.len() {
            if tab.basis[r] >= art_start {
                if let Some(col) = (0..art_start).find(|&c| !tab.rows[r][c].is_zero()) {
                    tab.pivot(r, col);
                } else {
                    tab.rows.remove(r);
                    tab.basis.remove(r);
                    continue;
                }
            }
            r += 1;
        }
    }

    // Phase 2 with the real objective (internally minimized).
    let sign = if problem.maximize {
        -BigRational::one()
    } else {
        BigRational::one()
    };
    let mut cost = vec![BigRational::zero(); cols];
    for (i, c) in problem.objective.iter().enumerate() {
        cost[i] = sign.clone() * c.clone();
    }
    tab.reduced = cost.clone();
    tab.objective_value = BigRational::zero();
    for (r, &b) in tab.basis.iter().enumerate() {
        if cost[b].is_zero() {
            continue;
        }
        let factor = cost[b].clone();
        for c in 0..cols {
            let delta = factor.clone() * tab.rows[r][c].clone();
            tab.reduced[c] -= delta;
        }
        tab.objective_value += factor * tab.rows[r][cols].clone();
    }
    tab.enter_limit = n + num_slack;
    tab.bland = false;
    tab.degenerate_run = 0;
    if !tab.optimize() {
        return LpOutcome::Unbounded;
    }

    let mut values = vec![BigRational::zero(); n];
    for (r, &b) in tab.basis.iter().enumerate() {
        if b < n {
            values[b] = tab.rows[r][tab.cols].clone();
        }
    }
    let objective = if problem.maximize {
        -tab.objective_value.clone()
    } else {
        tab.objective_value.clone()
    };
    LpOutcome::Optimal(LpSolution { objective, values })
}

fn flip_if(rel: Relation, flip: bool) -> Relation {
    if !flip {
        return rel;
    }
    match rel {
        Relation::Le => Relation::Ge,
        Relation::Ge => Relation::Le,
        Relation::Eq => Relation::Eq,
    }
}
