//! Dense two-phase simplex for small linear programs.
//!
//! Minimizes c^T x subject to A x <= b and x >= 0, where b may have any
//! sign (rows are flipped to >= form internally). Bland's rule is used
//! for both the entering and leaving choices, so the solver is
//! deterministic and cannot cycle. Problem sizes here are a few dozen
//! variables, so a dense tableau is the right tool.

/// One inequality a^T x <= rhs.
#[derive(Debug, Clone)]
pub struct Inequality {
    pub coeffs: Vec<f64>,
    pub rhs: f64,
}

/// Minimize objective . x subject to x >= 0 and the inequalities.
#[derive(Debug, Clone)]
pub struct LinearProgram {
    pub objective: Vec<f64>,
    pub constraints: Vec<Inequality>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
    IterationLimit,
}

#[derive(Debug, Clone)]
pub struct LpSolution {
    pub status: LpStatus,
    /// Decision variables (empty unless status is Optimal).
    pub x: Vec<f64>,
    pub objective: f64,
    pub pivots: usize,
}

const PIVOT_EPS: f64 = 1e-11;
const REDUCED_COST_EPS: f64 = 1e-9;
const PHASE1_TOL: f64 = 1e-9;

#[derive(Clone, Copy, PartialEq)]
enum Relation {
    LessEq,
    GreaterEq,
}

/// Solve the program with a pivot cap.
pub fn solve(lp: &LinearProgram, max_pivots: usize) -> LpSolution {
    let n = lp.objective.len();
    let m = lp.constraints.len();

    // Normalize to rhs >= 0.
    let mut rows: Vec<(Vec<f64>, f64, Relation)> = lp
        .constraints
        .iter()
        .map(|c| {
            debug_assert_eq!(c.coeffs.len(), n);
            if c.rhs < 0.0 {
                (
                    c.coeffs.iter().map(|v| -v).collect(),
                    -c.rhs,
                    Relation::GreaterEq,
                )
            } else {
                (c.coeffs.clone(), c.rhs, Relation::LessEq)
            }
        })
        .collect();

    let slack_count = rows.iter().filter(|r| r.2 == Relation::LessEq).count();
    let surplus_count = m - slack_count;
    let artificial_count = surplus_count;
    let total = n + slack_count + surplus_count + artificial_count;
    let rhs_col = total;

    let slack_off = n;
    let surplus_off = n + slack_count;
    let artificial_off = surplus_off + surplus_count;

    // Constraint rows plus one objective row.
    let mut tab = vec![vec![0.0; total + 1]; m + 1];
    let mut basis = vec![0usize; m];

    let (mut si, mut ui, mut ai) = (0usize, 0usize, 0usize);
    for (i, (coeffs, rhs, rel)) in rows.drain(..).enumerate() {
        tab[i][..n].copy_from_slice(&coeffs);
        tab[i][rhs_col] = rhs;
        match rel {
            Relation::LessEq => {
                let col = slack_off + si;
                si += 1;
                tab[i][col] = 1.0;
                basis[i] = col;
            }
            Relation::GreaterEq => {
                tab[i][surplus_off + ui] = -1.0;
                ui += 1;
                let col = artificial_off + ai;
                ai += 1;
                tab[i][col] = 1.0;
                basis[i] = col;
            }
        }
    }

    let mut pivots = 0usize;

    // Phase 1: minimize the sum of artificials.
    if artificial_count > 0 {
        for col in artificial_off..total {
            tab[m][col] = 1.0;
        }
        tab[m][rhs_col] = 0.0;
        canonicalize_objective(&mut tab, &basis, m, rhs_col);

        let status = iterate(&mut tab, &mut basis, max_pivots, &mut pivots, |col| {
            col < total
        });
        if status != LpStatus::Optimal {
            return LpSolution {
                status,
                x: Vec::new(),
                objective: f64::NAN,
                pivots,
            };
        }
        // Objective cell holds -f after canonicalization/pivots.
        let phase1 = -tab[m][rhs_col];
        if phase1 > PHASE1_TOL {
            return LpSolution {
                status: LpStatus::Infeasible,
                x: Vec::new(),
                objective: f64::NAN,
                pivots,
            };
        }
        // Pivot residual artificials out of the basis where possible.
        for row in 0..m {
            if basis[row] >= artificial_off {
                if let Some(col) = (0..artificial_off).find(|&c| tab[row][c].abs() > PIVOT_EPS) {
                    pivot(&mut tab, &mut basis, row, col, rhs_col);
                    pivots += 1;
                }
            }
        }
    }

    // Phase 2: real objective, artificials barred from entering.
    for col in 0..total {
        tab[m][col] = if col < n { lp.objective[col] } else { 0.0 };
    }
    tab[m][rhs_col] = 0.0;
    canonicalize_objective(&mut tab, &basis, m, rhs_col);

    let status = iterate(&mut tab, &mut basis, max_pivots, &mut pivots, |col| {
        col < artificial_off
    });
    if status != LpStatus::Optimal {
        return LpSolution {
            status,
            x: Vec::new(),
            objective: f64::NAN,
            pivots,
        };
    }

    let mut x = vec![0.0; n];
    for row in 0..m {
        if basis[row] < n {
            x[basis[row]] = tab[row][rhs_col];
        }
    }
    let objective = lp.objective.iter().zip(&x).map(|(c, v)| c * v).sum();
    LpSolution {
        status: LpStatus::Optimal,
        x,
        objective,
        pivots,
    }
}

/// Zero the reduced costs of basic variables by row elimination.
fn canonicalize_objective(tab: &mut [Vec<f64>], basis: &[usize], m: usize, rhs_col: usize) {
    for row in 0..m {
        let factor = tab[m][basis[row]];
        if factor.abs() > 0.0 {
            for col in 0..=rhs_col {
                let v = tab[row][col];
                tab[m][col] -= factor * v;
            }
        }
    }
}

fn pivot(tab: &mut [Vec<f64>], basis: &mut [usize], row: usize, col: usize, rhs_col: usize) {
    let pv = tab[row][col];
    for c in 0..=rhs_col {
        tab[row][c] /= pv;
    }
    let m = tab.len() - 1;
    for r in 0..=m {
        if r == row {
            continue;
        }
        let factor = tab[r][col];
        if factor.abs() > 0.0 {
            for c in 0..=rhs_col {
                let v = tab[row][c];
                tab[r][c] -= factor * v;
            }
        }
    }
    basis[row] = col;
}

/// Bland-rule simplex iterations on a canonical minimize tableau.
fn iterate<F: Fn(usize) -> bool>(
    tab: &mut [Vec<f64>],
    basis: &mut [usize],
    max_pivots: usize,
    pivots: &mut usize,
    allow_entering: F,
) -> LpStatus {
    let m = basis.len();
    let total = tab[0].len() - 1;
    let rhs_col = total;

    loop {
        // Entering: smallest column with negative reduced cost.
        let entering = (0..total)
            .find(|&col| allow_entering(col) && tab[m][col] < -REDUCED_COST_EPS);
        let Some(col) = entering else {
            return LpStatus::Optimal;
        };

        // Leaving: minimum ratio, ties to the smallest basis variable.
        let mut best: Option<(usize, f64)> = None;
        for row in 0..m {
            let a = tab[row][col];
            if a > PIVOT_EPS {
                let ratio = tab[row][rhs_col] / a;
                best = match best {
                    None => Some((row, ratio)),
                    Some((brow, bratio)) => {
                        if ratio < bratio - PIVOT_EPS
                            || ((ratio - bratio).abs() <= PIVOT_EPS
                                && basis[row] < basis[brow])
                        {
                            Some((row, ratio))
                        } else {
                            Some((brow, bratio))
                        }
                    }
                };
            }
        }
        let Some((row, _)) = best else {
            return LpStatus::Unbounded;
        };

        if *pivots >= max_pivots {
            return LpStatus::IterationLimit;
        }
        pivot(tab, basis, row, col, rhs_col);
        *pivots += 1;
    }
}
