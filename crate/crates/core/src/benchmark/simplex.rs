//! Dense two-phase simplex.
//!
//! Problems here are small (at most a few thousand variables), so a dense
//! tableau with Dantzig pricing is the simplest thing that works. Bland's
//! rule kicks in only after the objective stalls for more than `m`
//! consecutive pivots, which is the usual degeneracy symptom.

use crate::num::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Le,
    Eq,
    Ge,
}

/// `maximize objective . x` subject to the rows and `x >= 0`.
#[derive(Debug, Clone)]
pub struct LpProblem<S: Scalar> {
    pub n_vars: usize,
    pub objective: Vec<S>,
    pub rows: Vec<LpRow<S>>,
}

#[derive(Debug, Clone)]
pub struct LpRow<S: Scalar> {
    pub coeffs: Vec<(usize, S)>,
    pub sense: Sense,
    pub rhs: S,
}

impl<S: Scalar> LpProblem<S> {
    pub fn new(n_vars: usize, objective: Vec<S>) -> Self {
        assert_eq!(objective.len(), n_vars);
        Self { n_vars, objective, rows: Vec::new() }
    }

    pub fn push_row(&mut self, coeffs: Vec<(usize, S)>, sense: Sense, rhs: S) {
        debug_assert!(coeffs.iter().all(|&(j, _)| j < self.n_vars));
        self.rows.push(LpRow { coeffs, sense, rhs });
    }

    /// Objective value of a candidate point.
    pub fn objective_value(&self, x: &[S]) -> S {
        self.objective.iter().zip(x).map(|(&c, &v)| c * v).sum()
    }

    /// Largest constraint violation of a candidate point (0 if feasible).
    pub fn infeasibility(&self, x: &[S]) -> S {
        let mut worst = S::zero();
        for row in &self.rows {
            let lhs: S = row.coeffs.iter().map(|&(j, c)| c * x[j]).sum();
            let viol = match row.sense {
                Sense::Le => lhs - row.rhs,
                Sense::Ge => row.rhs - lhs,
                Sense::Eq => (lhs - row.rhs).abs(),
            };
            worst = worst.max(viol);
        }
        for &v in x {
            worst = worst.max(-v);
        }
        worst
    }
}

#[derive(Debug, Clone)]
pub struct LpSolution<S: Scalar> {
    pub value: S,
    pub x: Vec<S>,
    /// One multiplier per input row, oriented for the original senses.
    pub duals: Vec<S>,
    pub pivots: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
pub enum LpError {
    #[error("infeasible")]
    Infeasible,
    #[error("unbounded")]
    Unbounded,
    #[error("pivot limit reached")]
    IterationLimit,
}

struct Tableau<S: Scalar> {
    m: usize,
    ncols: usize,
    /// m rows, each ncols + 1 wide (rhs last).
    rows: Vec<Vec<S>>,
    /// reduced-cost rows for phase 1 and phase 2
    z1: Vec<S>,
    z2: Vec<S>,
    basis: Vec<usize>,
    n_structural: usize,
    art_start: usize,
    pivot_tol: S,
}

pub fn simplex_solve<S: Scalar>(lp: &LpProblem<S>) -> Result<LpSolution<S>, LpError> {
    let m = lp.rows.len();
    let n = lp.n_vars;
    let pivot_tol = S::lit(1e-10).max(S::epsilon() * S::lit(16.0));

    // normalize to rhs >= 0, remember flips for dual recovery
    let mut flipped = vec![false; m];
    let mut senses = Vec::with_capacity(m);
    for (i, row) in lp.rows.iter().enumerate() {
        let mut sense = row.sense;
        if row.rhs < S::zero() {
            flipped[i] = true;
            sense = match sense {
                Sense::Le => Sense::Ge,
                Sense::Ge => Sense::Le,
                Sense::Eq => Sense::Eq,
            };
        }
        senses.push(sense);
    }

    // column layout: structural | slacks/surplus | artificials
    let mut n_slack = 0;
    for s in &senses {
        if matches!(s, Sense::Le | Sense::Ge) {
            n_slack += 1;
        }
    }
    let mut n_art = 0;
    for s in &senses {
        if matches!(s, Sense::Ge | Sense::Eq) {
            n_art += 1;
        }
    }
    let art_start = n + n_slack;
    let ncols = n + n_slack + n_art;

    let mut rows: Vec<Vec<S>> = vec![vec![S::zero(); ncols + 1]; m];
    let mut basis = vec![0usize; m];
    let mut slack_col_of_row = vec![usize::MAX; m];
    let mut art_col_of_row = vec![usize::MAX; m];
    let mut next_slack = n;
    let mut next_art = art_start;
    for i in 0..m {
        let sgn = if flipped[i] { -S::one() } else { S::one() };
        for &(j, c) in &lp.rows[i].coeffs {
            rows[i][j] += sgn * c;
        }
        rows[i][ncols] = sgn * lp.rows[i].rhs;
        match senses[i] {
            Sense::Le => {
                rows[i][next_slack] = S::one();
                slack_col_of_row[i] = next_slack;
                basis[i] = next_slack;
                next_slack += 1;
            }
            Sense::Ge => {
                rows[i][next_slack] = -S::one();
                slack_col_of_row[i] = next_slack;
                next_slack += 1;
                rows[i][next_art] = S::one();
                art_col_of_row[i] = next_art;
                basis[i] = next_art;
                next_art += 1;
            }
            Sense::Eq => {
                rows[i][next_art] = S::one();
                art_col_of_row[i] = next_art;
                basis[i] = next_art;
                next_art += 1;
            }
        }
    }

    // phase-2 reduced costs start as the raw objective
    let mut z2 = vec![S::zero(); ncols + 1];
    z2[..n].copy_from_slice(&lp.objective);
    // phase-1 reduced costs: sum of rows with a basic artificial
    let mut z1 = vec![S::zero(); ncols + 1];
    let mut need_phase1 = false;
    for i in 0..m {
        if basis[i] >= art_start {
            need_phase1 = true;
            for k in 0..=ncols {
                z1[k] += rows[i][k];
            }
        }
    }
    for k in art_start..ncols {
        z1[k] = S::zero();
    }

    let mut t = Tableau { m, ncols, rows, z1, z2, basis, n_structural: n, art_start, pivot_tol };

    let max_pivots = 200 + 50 * (m + n);
    let mut pivots = 0usize;

    if need_phase1 {
        run_phase(&mut t, true, max_pivots, &mut pivots)?;
        let infeas = t.z1[t.ncols];
        if infeas.abs() > S::lit(1e-7) {
            return Err(LpError::Infeasible);
        }
        // pivot zero-level artificials out of the basis where possible
        for i in 0..t.m {
            if t.basis[i] >= t.art_start {
                if let Some(j) = (0..t.art_start).find(|&j| t.rows[i][j].abs() > t.pivot_tol) {
                    t.pivot(i, j);
                    pivots += 1;
                }
            }
        }
    }

    run_phase(&mut t, false, max_pivots, &mut pivots)?;

    let mut x = vec![S::zero(); n];
    for i in 0..t.m {
        if t.basis[i] < n {
            x[t.basis[i]] = t.rows[i][t.ncols];
        }
    }
    let value = lp.objective_value(&x);

    // duals off the reduced costs of each row's identity column
    let mut duals = vec![S::zero(); m];
    for i in 0..m {
        let y = match senses[i] {
            Sense::Le => -t.z2[slack_col_of_row[i]],
            Sense::Ge => t.z2[slack_col_of_row[i]],
            Sense::Eq => -t.z2[art_col_of_row[i]],
        };
        duals[i] = if flipped[i] { -y } else { y };
    }

    Ok(LpSolution { value, x, duals, pivots })
}

fn run_phase<S: Scalar>(
    t: &mut Tableau<S>,
    phase1: bool,
    max_pivots: usize,
    pivots: &mut usize,
) -> Result<(), LpError> {
    let rc_tol = S::lit(1e-9).max(S::epsilon() * S::lit(64.0));
    let mut stall = 0usize;
    let mut bland = false;
    loop {
        if *pivots > max_pivots {
            return Err(LpError::IterationLimit);
        }
        let enter = t.choose_entering(phase1, bland, rc_tol);
        let Some(enter) = enter else {
            return Ok(());
        };
        let Some(leave) = t.ratio_test(enter) else {
            return if phase1 { Ok(()) } else { Err(LpError::Unbounded) };
        };
        let before = if phase1 { t.z1[t.ncols] } else { t.z2[t.ncols] };
        t.pivot(leave, enter);
        *pivots += 1;
        let after = if phase1 { t.z1[t.ncols] } else { t.z2[t.ncols] };
        if (after - before).abs() > S::lit(1e-12) {
            stall = 0;
            bland = false;
        } else {
            stall += 1;
            if stall > t.m {
                bland = true;
            }
        }
    }
}

impl<S: Scalar> Tableau<S> {
    fn choose_entering(&self, phase1: bool, bland: bool, tol: S) -> Option<usize> {
        let z = if phase1 { &self.z1 } else { &self.z2 };
        let limit = if phase1 { self.ncols } else { self.art_start };
        if bland {
            (0..limit).find(|&j| z[j] > tol)
        } else {
            let mut best = None;
            let mut best_v = tol;
            for (j, &v) in z.iter().enumerate().take(limit) {
                if v > best_v {
                    best_v = v;
                    best = Some(j);
                }
            }
            best
        }
    }

    fn ratio_test(&self, enter: usize) -> Option<usize> {
        let mut best: Option<(S, usize, usize)> = None; // (ratio, basic var, row)
        for i in 0..self.m {
            let a = self.rows[i][enter];
            if a > self.pivot_tol {
                let r = self.rows[i][self.ncols] / a;
                let key = (r, self.basis[i], i);
                best = match best {
                    None => Some(key),
                    Some(cur) => {
                        if r < cur.0 - self.pivot_tol || (r < cur.0 + self.pivot_tol && key.1 < cur.1)
                        {
                            Some(key)
                        } else {
                            Some(cur)
                        }
                    }
                };
            }
        }
        best.map(|(_, _, i)| i)
    }

    fn pivot(&mut self, leave: usize, enter: usize) {
        let piv = self.rows[leave][enter];
        let inv = piv.recip();
        for v in self.rows[leave].iter_mut() {
            *v = *v * inv;
        }
        self.rows[leave][enter] = S::one(); // exactness at the pivot itself
        let prow = std::mem::take(&mut self.rows[leave]);
        for i in 0..self.m {
            if i != leave {
                let f = self.rows[i][enter];
                if f != S::zero() {
                    axpy(&mut self.rows[i], &prow, -f);
                    self.rows[i][enter] = S::zero();
                }
            }
        }
        let f1 = self.z1[enter];
        if f1 != S::zero() {
            axpy(&mut self.z1, &prow, -f1);
            self.z1[enter] = S::zero();
        }
        let f2 = self.z2[enter];
        if f2 != S::zero() {
            axpy(&mut self.z2, &prow, -f2);
            self.z2[enter] = S::zero();
        }
        self.rows[leave] = prow;
        self.basis[leave] = enter;
        let _ = self.n_structural;
    }
}

#[inline]
fn axpy<S: Scalar>(dst: &mut [S], src: &[S], f: S) {
    for (d, &s) in dst.iter_mut().zip(src) {
        *d += f * s;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lp(n: usize, obj: &[f64]) -> LpProblem<f64> {
        LpProblem::new(n, obj.to_vec())
    }

    #[test]
    fn single_variable_box() {
        // max x st x <= 1
        let mut p = lp(1, &[1.0]);
        p.push_row(vec![(0, 1.0)], Sense::Le, 1.0);
        let s = simplex_solve(&p).unwrap();
        assert!((s.value - 1.0).abs() < 1e-12);
        assert!((s.x[0] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn single_edge_matching_lp() {
        // max 0.5 x st 0.5 x <= 1, x <= 1
        let mut p = lp(1, &[0.5]);
        p.push_row(vec![(0, 0.5)], Sense::Le, 1.0);
        p.push_row(vec![(0, 1.0)], Sense::Le, 1.0);
        let s = simplex_solve(&p).unwrap();
        assert!((s.value - 0.5).abs() < 1e-12);
    }

    #[test]
    fn equality_and_ge_rows() {
        // max x + y st x + y = 1, x >= 0.25  ->  value 1
        let mut p = lp(2, &[1.0, 1.0]);
        p.push_row(vec![(0, 1.0), (1, 1.0)], Sense::Eq, 1.0);
        p.push_row(vec![(0, 1.0)], Sense::Ge, 0.25);
        let s = simplex_solve(&p).unwrap();
        assert!((s.value - 1.0).abs() < 1e-12);
        assert!(s.x[0] >= 0.25 - 1e-12);
    }

    #[test]
    fn detects_infeasible() {
        let mut p = lp(1, &[1.0]);
        p.push_row(vec![(0, 1.0)], Sense::Le, 1.0);
        p.push_row(vec![(0, 1.0)], Sense::Ge, 2.0);
        assert_eq!(simplex_solve(&p).unwrap_err(), LpError::Infeasible);
    }

    #[test]
    fn detects_unbounded() {
        let mut p = lp(2, &[1.0, 0.0]);
        p.push_row(vec![(1, 1.0)], Sense::Le, 1.0);
        assert_eq!(simplex_solve(&p).unwrap_err(), LpError::Unbounded);
    }

    #[test]
    fn degenerate_redundant_rows_terminate() {
        // redundant copies of the same constraint force degenerate pivots
        let mut p = lp(2, &[1.0, 1.0]);
        for _ in 0..6 {
            p.push_row(vec![(0, 1.0), (1, 1.0)], Sense::Le, 1.0);
        }
        p.push_row(vec![(0, 1.0)], Sense::Le, 1.0);
        p.push_row(vec![(1, 1.0)], Sense::Le, 1.0);
        let s = simplex_solve(&p).unwrap();
        assert!((s.value - 1.0).abs() < 1e-12);
    }

    #[test]
    fn duals_satisfy_complementary_slackness() {
        // max 3x + 2y st x + y <= 4, x + 3y <= 6
        let mut p = lp(2, &[3.0, 2.0]);
        p.push_row(vec![(0, 1.0), (1, 1.0)], Sense::Le, 4.0);
        p.push_row(vec![(0, 1.0), (1, 3.0)], Sense::Le, 6.0);
        let s = simplex_solve(&p).unwrap();
        // strong duality
        let dual_obj = s.duals[0] * 4.0 + s.duals[1] * 6.0;
        assert!((dual_obj - s.value).abs() < 1e-8);
        // dual feasibility: y  A >= c on used columns
        for j in 0..2 {
            let reduced = p.objective[j]
                - p.rows
                    .iter()
                    .zip(&s.duals)
                    .map(|(r, &y)| {
                        r.coeffs.iter().find(|&&(k, _)| k == j).map_or(0.0, |&(_, c)| c) * y
                    })
                    .sum::<f64>();
            if s.x[j] > 1e-9 {
                assert!(reduced.abs() < 1e-8);
            } else {
                assert!(reduced < 1e-8);
            }
        }
    }
}
