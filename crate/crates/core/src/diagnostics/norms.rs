//! Weighted Sobolev norms `‖f‖_{𝓗^m} = Σ_{|α|≤m} ‖(⟨x⟩∇)^α f‖₂`.

use super::radial::{radial_d1, radial_l2};
use super::{DiagnosticsError, SOBOLEV_BUDGET};
use crate::grid::Grid3;

/// `⟨x⟩ = (1 + |x|²)^{1/2}`.
pub fn japanese(x: [f64; 3]) -> f64 {
    (1.0 + x[0] * x[0] + x[1] * x[1] + x[2] * x[2]).sqrt()
}

/// Sum over multi-indices `|α| ≤ m`. The factors `⟨x⟩∂ⱼ` do not commute,
/// so each term is the mean of `‖·‖₂` over the distinct orderings of `α`;
/// this keeps the norm invariant under the symmetries of the cube.
pub fn weighted_sobolev_norm(grid: &Grid3, f: &[f64], m: usize) -> Result<f64, DiagnosticsError> {
    Ok(weighted_sobolev_profile(grid, f, m)?[m])
}

/// `‖f‖_{𝓗^k}` for every `k ≤ m` from one traversal.
pub fn weighted_sobolev_profile(grid: &Grid3, f: &[f64], m: usize) -> Result<Vec<f64>, DiagnosticsError> {
    if m > SOBOLEV_BUDGET {
        return Err(DiagnosticsError::BudgetExceeded {
            order: m,
            budget: SOBOLEV_BUDGET,
        });
    }
    if f.len() != grid.len() {
        return Err(DiagnosticsError::Shape(format!("field has {} values, grid has {}", f.len(), grid.len())));
    }
    let weight = grid.build(|p| japanese(grid.point(p)));
    let mut by_order = vec![0.0; m + 1];
    walk(grid, &weight, f.to_vec(), [0; 3], m, &mut by_order);
    let mut acc = 0.0;
    Ok(by_order
        .into_iter()
        .map(|v| {
            acc += v;
            acc
        })
        .collect())
}

/// Distinct orderings of a multi-index.
fn orderings(alpha: [usize; 3]) -> f64 {
    let fact = |n: usize| (1..=n).product::<usize>() as f64;
    fact(alpha.iter().sum()) / alpha.iter().map(|&a| fact(a)).product::<f64>()
}

/// Visits every word in the axes of length at most `m`; `alpha` counts the
/// axes of the current word.
fn walk(grid: &Grid3, weight: &[f64], f: Vec<f64>, alpha: [usize; 3], m: usize, by_order: &mut [f64]) {
    let depth: usize = alpha.iter().sum();
    by_order[depth] += grid.l2(&f) / orderings(alpha);
    if depth == m {
        return;
    }
    for axis in 0..3 {
        let d = grid.d1(&f, axis);
        let next = grid.build(|p| weight[p] * d[p]);
        let mut a = alpha;
        a[axis] += 1;
        walk(grid, weight, next, a, m, by_order);
    }
}

/// Radial analogue on `r_i = i·dr` with nested `⟨r⟩∂_r`; `parity` is `+1`
/// for even and `−1` for odd extensions through the axis.
pub fn radial_weighted_sobolev_norm(dr: f64, f: &[f64], parity: f64, m: usize) -> Result<f64, DiagnosticsError> {
    Ok(radial_weighted_sobolev_profile(dr, f, parity, m)?[m])
}

pub fn radial_weighted_sobolev_profile(dr: f64, f: &[f64], parity: f64, m: usize) -> Result<Vec<f64>, DiagnosticsError> {
    if m > SOBOLEV_BUDGET {
        return Err(DiagnosticsError::BudgetExceeded {
            order: m,
            budget: SOBOLEV_BUDGET,
        });
    }
    let mut out = Vec::with_capacity(m + 1);
    let mut total = 0.0;
    let mut cur = f.to_vec();
    let mut par = parity;
    for k in 0..=m {
        total += radial_l2(dr, &cur);
        out.push(total);
        if k == m {
            break;
        }
        let d = radial_d1(&cur, dr, par);
        cur = d
            .iter()
            .enumerate()
            .map(|(i, v)| (1.0 + (i as f64 * dr).powi(2)).sqrt() * v)
            .collect();
        par = -par;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_and_order_zero() {
        let g = Grid3::new(2.0, 12).unwrap();
        assert_eq!(weighted_sobolev_norm(&g, &vec![0.0; g.len()], 3).unwrap(), 0.0);
        let f = g.sample(|x| (-x[0] * x[0]).exp());
        assert_eq!(weighted_sobolev_norm(&g, &f, 0).unwrap(), g.l2(&f));
        assert!(weighted_sobolev_norm(&g, &f, 5).is_err());
    }

    #[test]
    fn monotone_in_order() {
        let g = Grid3::new(3.0, 16).unwrap();
        let f = g.sample(|x| (-(x[0] * x[0] + 2.0 * x[1] * x[1] + x[2] * x[2])).exp());
        let mut last = 0.0;
        for m in 0..=3 {
            let v = weighted_sobolev_norm(&g, &f, m).unwrap();
            assert!(v >= last);
            last = v;
        }
    }
}
