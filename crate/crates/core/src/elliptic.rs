//! Matrix-free conjugate gradients for the Neumann problem
//! `(−Δ_h + I) v = g(u)`.

use crate::grid::{laplacian, Field, Grid};
use crate::model::Kinetics;
use crate::solver::SolverError;

/// Default relative residual tolerance.
pub const DEFAULT_TOL: f64 = 1e-10;

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// `out = (−Δ_h + I) w`.
pub fn apply_helmholtz(grid: &Grid, w: &[f64], out: &mut [f64]) {
    laplacian(grid, w, out);
    out.iter_mut().zip(w).for_each(|(o, &wi)| *o = wi - *o);
}

/// Outcome of a CG solve.
#[derive(Debug, Clone, PartialEq)]
pub struct CgReport {
    pub iterations: usize,
    /// Final `‖r‖₂ / ‖b‖₂`.
    pub relative_residual: f64,
}

/// Solves `(−Δ_h + I) x = rhs` starting from `guess`, stopping once
/// `‖r‖₂ ≤ tol ‖rhs‖₂`.
pub fn conjugate_gradient(
    grid: &Grid,
    rhs: &[f64],
    guess: Option<&[f64]>,
    tol: f64,
    max_iter: usize,
) -> Result<(Vec<f64>, CgReport), SolverError> {
    let n = rhs.len();
    let b_norm = dot(rhs, rhs).sqrt();
    if b_norm == 0.0 {
        return Ok((
            vec![0.0; n],
            CgReport {
                iterations: 0,
                relative_residual: 0.0,
            },
        ));
    }
    let mut x = guess.map_or_else(|| vec![0.0; n], <[f64]>::to_vec);
    let mut ap = vec![0.0; n];
    apply_helmholtz(grid, &x, &mut ap);
    let mut r: Vec<f64> = rhs.iter().zip(&ap).map(|(b, a)| b - a).collect();
    let mut p = r.clone();
    let mut rs = dot(&r, &r);
    let target = tol * b_norm;

    for iteration in 0..=max_iter {
        let r_norm = rs.sqrt();
        if r_norm <= target {
            return Ok((
                x,
                CgReport {
                    iterations: iteration,
                    relative_residual: r_norm / b_norm,
                },
            ));
        }
        if iteration == max_iter {
            break;
        }
        apply_helmholtz(grid, &p, &mut ap);
        let step = rs / dot(&p, &ap);
        x.iter_mut().zip(&p).for_each(|(xi, pi)| *xi += step * pi);
        r.iter_mut().zip(&ap).for_each(|(ri, ai)| *ri -= step * ai);
        let rs_next = dot(&r, &r);
        let beta = rs_next / rs;
        p.iter_mut().zip(&r).for_each(|(pi, ri)| *pi = ri + beta * *pi);
        rs = rs_next;
    }
    Err(SolverError::ConvergenceFailure {
        iterations: max_iter,
        relative_residual: rs.sqrt() / b_norm,
    })
}

/// Solves `0 = Δv − v + g(u)` on the grid of `u`, optionally warm-started.
///
/// The exact discrete solution is nonnegative (the operator is an
/// M-matrix); round-off level negatives left by the iteration are clipped.
pub fn solve_elliptic(
    u: &Field,
    kinetics: &dyn Kinetics,
    tol: f64,
    warm_start: Option<&Field>,
) -> Result<Field, SolverError> {
    let grid = *u.grid();
    if !u.is_finite() {
        return Err(SolverError::NumericalFailure(
            "non-finite density passed to elliptic solve".into(),
        ));
    }
    if u.min() < 0.0 {
        return Err(SolverError::NumericalFailure(
            "negative density passed to elliptic solve".into(),
        ));
    }
    let rhs: Vec<f64> = u.values().iter().map(|&s| kinetics.production(s)).collect();
    let max_iter = 20 * grid.len() + 100;
    let (mut v, _) = conjugate_gradient(&grid, &rhs, warm_start.map(Field::values), tol, max_iter)?;
    v.iter_mut().for_each(|x| *x = x.max(0.0));
    Ok(Field::new(grid, v).expect("solution has grid length"))
}
