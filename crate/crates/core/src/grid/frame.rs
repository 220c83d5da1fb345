use super::{Grid3, GridError, Slab};

/// Null directions `Y^± = (1, ±x/(c r))` and derivatives
/// `D^± = ½(∂ₜ ± c ∂_r)` for the speed-`c` cone.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NullFrame {
    pub c: f64,
}

impl NullFrame {
    pub fn y_minus(&self, x: [f64; 3]) -> [f64; 4] {
        let r = norm(x);
        [1.0, -x[0] / (self.c * r), -x[1] / (self.c * r), -x[2] / (self.c * r)]
    }

    pub fn y_plus(&self, x: [f64; 3]) -> [f64; 4] {
        let r = norm(x);
        [1.0, x[0] / (self.c * r), x[1] / (self.c * r), x[2] / (self.c * r)]
    }

    /// `Y₀²/c² − |Y⃗|²`, zero up to rounding for both frame vectors.
    pub fn cone_defect(&self, y: [f64; 4]) -> f64 {
        y[0] * y[0] / (self.c * self.c) - y[1] * y[1] - y[2] * y[2] - y[3] * y[3]
    }
}

pub(crate) fn norm(x: [f64; 3]) -> f64 {
    (x[0] * x[0] + x[1] * x[1] + x[2] * x[2]).sqrt()
}

/// `∂u = Y⁻ D⁻u + R u` at the center level of a slab.
#[derive(Debug, Clone, PartialEq)]
pub struct FrameDecomposition {
    pub d_minus: Vec<f64>,
    /// Components `a = 0..4` of `Y⁻ D⁻u`.
    pub good: [Vec<f64>; 4],
    /// Components of `R u`.
    pub remainder: [Vec<f64>; 4],
    /// Components of the discrete `∂u` the parts reconstruct.
    pub gradient: [Vec<f64>; 4],
    /// Points with `r < r_min` or `ct + r < r_min`, where all parts are zero.
    pub excluded: Vec<bool>,
    pub r_min: f64,
}

/// Splits `∂u` with
/// `R = −((ct−r)/(ct+r)) Y⁺D⁻ + (c/(ct+r)) Y⁺S − (0, (x/r²) × Ω)`.
///
/// `r_min` defaults to `2h` when `None`.
pub fn null_frame_decompose(
    slab: &Slab,
    c: f64,
    r_min: Option<f64>,
) -> Result<FrameDecomposition, GridError> {
    let g: Grid3 = slab.grid;
    let r_min = r_min.unwrap_or(2.0 * g.h);
    let ut = slab.partial(0)?.into_center();
    let u = slab.center();
    let grad = g.gradient(u);
    let t = slab.t;
    let frame = NullFrame { c };
    let len = g.len();
    let mut d_minus = vec![0.0; len];
    let mut good: [Vec<f64>; 4] = std::array::from_fn(|_| vec![0.0; len]);
    let mut remainder: [Vec<f64>; 4] = std::array::from_fn(|_| vec![0.0; len]);
    let gradient = [ut.clone(), grad[0].clone(), grad[1].clone(), grad[2].clone()];
    let mut excluded = vec![false; len];
    for idx in 0..len {
        let x = g.point(idx);
        let r = norm(x);
        if r < r_min || c * t + r < r_min {
            excluded[idx] = true;
            continue;
        }
        let du = [grad[0][idx], grad[1][idx], grad[2][idx]];
        let ur = (x[0] * du[0] + x[1] * du[1] + x[2] * du[2]) / r;
        let dm = 0.5 * (ut[idx] - c * ur);
        let s = t * ut[idx] + r * ur;
        // Ω = x × ∇u
        let om = [
            x[1] * du[2] - x[2] * du[1],
            x[2] * du[0] - x[0] * du[2],
            x[0] * du[1] - x[1] * du[0],
        ];
        let xo = [
            x[1] * om[2] - x[2] * om[1],
            x[2] * om[0] - x[0] * om[2],
            x[0] * om[1] - x[1] * om[0],
        ];
        let ym = frame.y_minus(x);
        let yp = frame.y_plus(x);
        let w_minus = -(c * t - r) / (c * t + r);
        let w_s = c / (c * t + r);
        d_minus[idx] = dm;
        for a in 0..4 {
            good[a][idx] = ym[a] * dm;
            let rot = if a == 0 { 0.0 } else { xo[a - 1] / (r * r) };
            remainder[a][idx] = w_minus * yp[a] * dm + w_s * yp[a] * s - rot;
        }
    }
    Ok(FrameDecomposition {
        d_minus,
        good,
        remainder,
        gradient,
        excluded,
        r_min,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn frame_vectors_are_null() {
        let f = NullFrame { c: 1.5 };
        let x = [0.3, -1.2, 2.0];
        assert!(f.cone_defect(f.y_minus(x)).abs() < 1e-14);
        assert!(f.cone_defect(f.y_plus(x)).abs() < 1e-14);
    }

    /// Largest `|D⁻u − want|` and `|Ru − ∂u|` (when `want` is zero) over
    /// points with `r ≥ 1`.
    fn phase_errors(n: usize, sign: f64) -> (f64, f64) {
        let g = Grid3::new(2.0, n).unwrap();
        let c = 2.0;
        let s = Slab::from_fn(g, 1.0, 0.01, 1, |t, x| t + sign * norm(x) / c);
        let dec = null_frame_decompose(&s, c, None).unwrap();
        let want = if sign < 0.0 { 1.0 } else { 0.0 };
        let (mut e_dm, mut e_r) = (0.0f64, 0.0f64);
        for i in 0..g.len() {
            if dec.excluded[i] || norm(g.point(i)) < 1.0 {
                continue;
            }
            e_dm = e_dm.max((dec.d_minus[i] - want).abs());
            if sign > 0.0 {
                for a in 0..4 {
                    e_r = e_r.max((dec.remainder[a][i] - dec.gradient[a][i]).abs());
                }
            }
        }
        (e_dm, e_r)
    }

    #[test]
    fn outgoing_and_incoming_phases() {
        let (coarse, _) = phase_errors(13, -1.0);
        let (fine, _) = phase_errors(25, -1.0);
        assert!(coarse < 2e-2 && fine < coarse / 3.0, "{coarse} {fine}");
        let (coarse, rc) = phase_errors(13, 1.0);
        let (fine, rf) = phase_errors(25, 1.0);
        assert!(coarse < 2e-2 && fine < coarse / 3.0, "{coarse} {fine}");
        assert!(rc < 2e-2 && rf < rc / 3.0, "{rc} {rf}");
    }

    #[test]
    fn parts_reconstruct_gradient() {
        let g = Grid3::new(3.0, 20).unwrap();
        let s = Slab::from_fn(g, 0.5, 0.05, 1, |t, x| {
            (-(x[0] - 0.5).powi(2) - x[1] * x[1] - (x[2] + t).powi(2)).exp()
        });
        let dec = null_frame_decompose(&s, 1.0, None).unwrap();
        for i in 0..g.len() {
            for a in 0..4 {
                let sum = dec.good[a][i] + dec.remainder[a][i];
                let want = if dec.excluded[i] { 0.0 } else { dec.gradient[a][i] };
                assert!((sum - want).abs() < 1e-12);
            }
        }
    }
}
