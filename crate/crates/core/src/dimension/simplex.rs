//! Dense two-phase simplex for small linear programs.
//!
//! All variables are non-negative. Pivoting follows Bland's rule (lowest
//! eligible index enters, lowest basic index leaves on ratio ties), so a
//! given program always produces the same basic solution.

use thiserror::Error;

const TOL: f64 = 1e-9;
const FEAS_TOL: f64 = 1e-7;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RowKind {
    Le,
    Ge,
    Eq,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub coeffs: Vec<(usize, f64)>,
    pub kind: RowKind,
    pub rhs: f64,
    pub name: String,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct LinearProgram {
    pub var_names: Vec<String>,
    /// Minimized.
    pub objective: Vec<f64>,
    pub rows: Vec<Row>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LpSolution {
    pub x: Vec<f64>,
    pub objective: f64,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LpError {
    #[error("infeasible; conflicting constraints: {}", .conflicts.join(", "))]
    Infeasible { conflicts: Vec<String> },
    #[error("unbounded")]
    Unbounded,
}

impl LinearProgram {
    pub fn add_var(&mut self, name: impl Into<String>, cost: f64) -> usize {
        self.var_names.push(name.into());
        self.objective.push(cost);
        self.var_names.len() - 1
    }

    pub fn add_row(
        &mut self,
        name: impl Into<String>,
        coeffs: Vec<(usize, f64)>,
        kind: RowKind,
        rhs: f64,
    ) {
        self.rows.push(Row {
            coeffs,
            kind,
            rhs,
            name: name.into(),
        });
    }

    pub fn var_count(&self) -> usize {
        self.var_names.len()
    }

    /// Objective value of `x`.
    pub fn value(&self, x: &[f64]) -> f64 {
        self.objective.iter().zip(x).map(|(c, v)| c * v).sum()
    }

    /// Largest violation of any row or sign constraint by `x`.
    pub fn max_violation(&self, x: &[f64]) -> f64 {
        let mut worst = x.iter().map(|&v| (-v).max(0.0)).fold(0.0, f64::max);
        for r in &self.rows {
            let lhs: f64 = r.coeffs.iter().map(|&(j, a)| a * x[j]).sum();
            let v = match r.kind {
                RowKind::Le => (lhs - r.rhs).max(0.0),
                RowKind::Ge => (r.rhs - lhs).max(0.0),
                RowKind::Eq => (lhs - r.rhs).abs(),
            };
            worst = worst.max(v);
        }
        worst
    }

    pub fn solve(&self) -> Result<LpSolution, LpError> {
        Tableau::build(self).run(self)
    }
}

struct Tableau {
    /// rows x cols; last column is the right-hand side
    a: Vec<Vec<f64>>,
    basis: Vec<usize>,
    n_orig: usize,
    n_total: usize,
    artificial_start: usize,
    /// artificial column -> originating row
    artificial_row: Vec<usize>,
}

impl Tableau {
    fn build(lp: &LinearProgram) -> Tableau {
        let n = lp.var_count();
        let m = lp.rows.len();
        let mut slack_count = 0;
        let mut art_count = 0;
        let mut norm: Vec<(Vec<f64>, RowKind, f64)> = Vec::with_capacity(m);
        for r in &lp.rows {
            let mut dense = vec![0.0; n];
            for &(j, a) in &r.coeffs {
                dense[j] += a;
            }
            let (mut kind, mut rhs) = (r.kind, r.rhs);
            if rhs < 0.0 {
                dense.iter_mut().for_each(|v| *v = -*v);
                rhs = -rhs;
                kind = match kind {
                    RowKind::Le => RowKind::Ge,
                    RowKind::Ge => RowKind::Le,
                    RowKind::Eq => RowKind::Eq,
                };
            }
            match kind {
                RowKind::Le => slack_count += 1,
                RowKind::Ge => {
                    slack_count += 1;
                    art_count += 1
                }
                RowKind::Eq => art_count += 1,
            }
            norm.push((dense, kind, rhs));
        }
        let artificial_start = n + slack_count;
        let n_total = artificial_start + art_count;
        let mut a = vec![vec![0.0; n_total + 1]; m];
        let mut basis = vec![0; m];
        let mut artificial_row = Vec::with_capacity(art_count);
        let (mut s, mut t) = (n, artificial_start);
        for (i, (dense, kind, rhs)) in norm.into_iter().enumerate() {
            a[i][..n].copy_from_slice(&dense);
            a[i][n_total] = rhs;
            match kind {
                RowKind::Le => {
                    a[i][s] = 1.0;
                    basis[i] = s;
                    s += 1;
                }
                RowKind::Ge => {
                    a[i][s] = -1.0;
                    s += 1;
                    a[i][t] = 1.0;
                    basis[i] = t;
                    artificial_row.push(i);
                    t += 1;
                }
                RowKind::Eq => {
                    a[i][t] = 1.0;
                    basis[i] = t;
                    artificial_row.push(i);
                    t += 1;
                }
            }
        }
        Tableau {
            a,
            basis,
            n_orig: n,
            n_total,
            artificial_start,
            artificial_row,
        }
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let p = self.a[r][c];
        for v in self.a[r].iter_mut() {
            *v /= p;
        }
        let row = self.a[r].clone();
        for (i, other) in self.a.iter_mut().enumerate() {
            if i == r {
                continue;
            }
            let f = other[c];
            if f.abs() > 0.0 {
                for (o, &rv) in other.iter_mut().zip(&row) {
                    *o -= f * rv;
                }
                other[c] = 0.0;
            }
        }
        self.basis[r] = c;
    }

    /// Minimizes `cost` over columns `< limit`.
    fn optimize(&mut self, cost: &[f64], limit: usize) -> Result<(), LpError> {
        let rhs = self.n_total;
        loop {
            // reduced costs: c_j - c_B B^-1 A_j
            let mut entering = None;
            for j in 0..limit {
                if self.basis.contains(&j) {
                    continue;
                }
                let mut d = cost[j];
                for (i, &b) in self.basis.iter().enumerate() {
                    d -= cost[b] * self.a[i][j];
                }
                if d < -TOL {
                    entering = Some(j);
                    break;
                }
            }
            let Some(c) = entering else { return Ok(()) };
            let mut leave: Option<(usize, f64)> = None;
            for i in 0..self.a.len() {
                let v = self.a[i][c];
                if v > TOL {
                    let ratio = self.a[i][rhs] / v;
                    leave = match leave {
                        None => Some((i, ratio)),
                        Some((li, lr)) => {
                            if ratio < lr - TOL
                                || (ratio <= lr + TOL && self.basis[i] < self.basis[li])
                            {
                                Some((i, ratio))
                            } else {
                                Some((li, lr))
                            }
                        }
                    }
                }
            }
            let Some((r, _)) = leave else {
                return Err(LpError::Unbounded);
            };
            self.pivot(r, c);
        }
    }

    fn run(mut self, lp: &LinearProgram) -> Result<LpSolution, LpError> {
        let rhs = self.n_total;
        if self.artificial_start < self.n_total {
            let mut cost = vec![0.0; self.n_total];
            for c in cost.iter_mut().skip(self.artificial_start) {
                *c = 1.0;
            }
            self.optimize(&cost, self.n_total)?;
            let infeas: f64 = self
                .basis
                .iter()
                .enumerate()
                .filter(|(_, &b)| b >= self.artificial_start)
                .map(|(i, _)| self.a[i][rhs])
                .sum();
            if infeas > FEAS_TOL {
                let mut conflicts: Vec<String> = self
                    .basis
                    .iter()
                    .enumerate()
                    .filter(|(i, &b)| b >= self.artificial_start && self.a[*i][rhs] > FEAS_TOL)
                    .map(|(_, &b)| {
                        lp.rows[self.artificial_row[b - self.artificial_start]]
                            .name
                            .clone()
                    })
                    .collect();
                conflicts.sort();
                return Err(LpError::Infeasible { conflicts });
            }
            // drive remaining artificials out of the basis
            for i in 0..self.a.len() {
                if self.basis[i] < self.artificial_start {
                    continue;
                }
                if let Some(c) =
                    (0..self.artificial_start).find(|&j| self.a[i][j].abs() > TOL)
                {
                    self.pivot(i, c);
                }
            }
        }
        let mut cost = vec![0.0; self.n_total];
        cost[..self.n_orig].copy_from_slice(&lp.objective);
        self.optimize(&cost, self.artificial_start)?;
        let mut x = vec![0.0; self.n_orig];
        for (i, &b) in self.basis.iter().enumerate() {
            if b < self.n_orig {
                x[b] = snap(self.a[i][rhs]);
            }
        }
        let objective = lp.value(&x);
        Ok(LpSolution { x, objective })
    }
}

/// Rounds values within 1e-7 of an integer.
pub fn snap(v: f64) -> f64 {
    let r = v.round();
    if (v - r).abs() < FEAS_TOL {
        r + 0.0
    } else {
        v
    }
}
