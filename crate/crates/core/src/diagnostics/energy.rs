//! The energy form `e₀ = Σ_I e^I` of the wave operator perturbed by `γ`.

use super::DiagnosticsError;
use crate::grid::Slab;
use crate::system::NumericSystem;

/// `Σ_{I,J} [2 Σ_k γ^{IJ,0k} ∂₀u^I ∂_k u^J − Σ_{j,k} γ^{IJ,jk} ∂_j u^I ∂_k u^J]`
/// with all slots running over `0..4`.
fn perturbation_terms(du: &[[f64; 4]], gamma: &[f64]) -> f64 {
    let d = du.len();
    let mut acc = 0.0;
    for i in 0..d {
        for j in 0..d {
            let g = &gamma[(i * d + j) * 16..(i * d + j + 1) * 16];
            for k in 0..4 {
                acc += 2.0 * g[k] * du[i][0] * du[j][k];
            }
            for a in 0..4 {
                for b in 0..4 {
                    acc -= g[a * 4 + b] * du[i][a] * du[j][b];
                }
            }
        }
    }
    acc
}

/// `e₀` at one point from `du[I][a] = ∂_a u^I` and `γ` laid out as in
/// [`NumericSystem::metric_perturbation`].
pub fn energy_form_point(du: &[[f64; 4]], speeds: &[f64], gamma: &[f64]) -> f64 {
    let flat: f64 = du
        .iter()
        .zip(speeds)
        .map(|(g, c)| g[0] * g[0] + c * c * (g[1] * g[1] + g[2] * g[2] + g[3] * g[3]))
        .sum();
    flat + perturbation_terms(du, gamma)
}

/// `e₀ − ½ min_I min(1, c_I²) |∇_{t,x} u|²`, nonnegative whenever
/// `Σ|γ| ≤ ½ min_I min(1, c_I²)`.
pub fn positivity_margin_point(du: &[[f64; 4]], speeds: &[f64], gamma: &[f64]) -> f64 {
    let m = speeds.iter().map(|c| (c * c).min(1.0)).fold(f64::INFINITY, f64::min);
    let norm2: f64 = du.iter().flat_map(|g| g.iter()).map(|v| v * v).sum();
    energy_form_point(du, speeds, gamma) - 0.5 * m * norm2
}

#[derive(Debug, Clone, PartialEq)]
pub struct EnergyReport {
    /// Pointwise `e₀` at the center level.
    pub density: Vec<f64>,
    /// `E = (∫ e₀)^{1/2}`.
    pub energy: f64,
    /// Minimum over points of `e₀ − ½ min(1, c²) |∇_{t,x}u|²`.
    pub margin: f64,
    /// Points where `Σ|γ|` exceeds the smallness threshold.
    pub smallness_violations: usize,
}

/// Energy of the center level of `families`.
///
/// The spatial gradient in the unperturbed part is
/// `½((D⁺u)² + (D⁻u)²)` per axis, the quadratic form the leapfrog
/// update conserves; `γ` and its pairings use centered differences.
/// Without `γ` the accumulation is the same, so a vanishing `γ` gives a
/// bitwise identical result.
pub fn energy_form(families: &[Slab], sys: &NumericSystem, perturbed: bool) -> Result<EnergyReport, DiagnosticsError> {
    let d = sys.families();
    if families.len() != d {
        return Err(DiagnosticsError::Shape(format!("{} fields for {d} families", families.len())));
    }
    let grid = families[0].grid;
    let n = grid.n;
    let inv_h = 1.0 / grid.h;
    let time: Vec<Vec<f64>> = families
        .iter()
        .map(|s| s.partial(0).map(|p| p.center().to_vec()))
        .collect::<Result<_, _>>()?;
    let space: Vec<[Vec<f64>; 3]> = families.iter().map(|s| grid.gradient(s.center())).collect();
    // ½((D⁺u)² + (D⁻u)²) summed over axes
    let sbp: Vec<Vec<f64>> = families
        .iter()
        .map(|s| {
            let u = s.center();
            grid.build(|p| {
                let ijk = grid.ijk(p);
                let mut acc = 0.0;
                for a in 0..3 {
                    let st = grid.stride(a);
                    let i = ijk[a];
                    let fwd = (i + 1 < n).then(|| (u[p + st] - u[p]) * inv_h);
                    let bwd = (i > 0).then(|| (u[p] - u[p - st]) * inv_h);
                    acc += match (fwd, bwd) {
                        (Some(f), Some(b)) => 0.5 * (f * f + b * b),
                        (Some(v), None) | (None, Some(v)) => v * v,
                        (None, None) => 0.0,
                    };
                }
                acc
            })
        })
        .collect();
    let threshold = sys.smallness_threshold();
    let m = sys.speeds.iter().map(|c| (c * c).min(1.0)).fold(f64::INFINITY, f64::min);
    let per_point: Vec<(f64, f64, bool)> = {
        use rayon::prelude::*;
        (0..grid.len())
            .into_par_iter()
            .map(|p| {
                let mut density = 0.0;
                let mut norm2 = 0.0;
                for i in 0..d {
                    let ut = time[i][p];
                    density += ut * ut + sys.speeds[i] * sys.speeds[i] * sbp[i][p];
                    norm2 += ut * ut + sbp[i][p];
                }
                let mut violated = false;
                if perturbed {
                    let du: Vec<[f64; 4]> = (0..d)
                        .map(|i| [time[i][p], space[i][0][p], space[i][1][p], space[i][2][p]])
                        .collect();
                    let mut gamma = vec![0.0; d * d * 16];
                    sys.metric_perturbation(&du, &mut gamma);
                    violated = gamma.iter().map(|g| g.abs()).sum::<f64>() > threshold;
                    density += perturbation_terms(&du, &gamma);
                }
                (density, density - 0.5 * m * norm2, violated)
            })
            .collect()
    };
    let density: Vec<f64> = per_point.iter().map(|v| v.0).collect();
    let energy = grid.integrate(&density).max(0.0).sqrt();
    let margin = per_point.iter().map(|v| v.1).fold(f64::INFINITY, f64::min);
    let smallness_violations = per_point.iter().filter(|v| v.2).count();
    Ok(EnergyReport {
        density,
        energy,
        margin,
        smallness_violations,
    })
}

/// Unperturbed energy `(∫ Σ_I (∂₀u^I)² + c_I²|∇u^I|²)^{1/2}`.
pub fn flat_energy(families: &[Slab], sys: &NumericSystem) -> Result<f64, DiagnosticsError> {
    energy_form(families, sys, false).map(|r| r.energy)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unperturbed_form() {
        let du = [[1.0, 2.0, 0.0, -1.0]];
        assert_eq!(energy_form_point(&du, &[3.0], &[0.0; 16]), 1.0 + 9.0 * 5.0);
        assert_eq!(energy_form_point(&[[0.0; 4]], &[1.0], &[0.5; 16]), 0.0);
    }

    #[test]
    fn symmetric_mixed_terms_cancel() {
        // with γ^{0k} = γ^{k0} only γ^{00} and the spatial block survive
        let mut gamma = [0.0; 16];
        gamma[1] = 0.1;
        gamma[4] = 0.1;
        let du = [[1.0, 1.0, 0.0, 0.0]];
        assert!((energy_form_point(&du, &[1.0], &gamma) - 2.0).abs() < 1e-15);
    }
}
