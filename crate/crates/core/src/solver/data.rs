//! Analytic initial data.

use serde::{Deserialize, Serialize};

/// Spatial shape of the data.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Profile {
    /// `exp(−|x − x₀|²/w²)`, treated as supported in `|x − x₀| ≤ 6w`.
    Gaussian,
    /// `(1 − |x − x₀|²/w²)^p` inside the ball of radius `w`.
    Bump { power: u32 },
    /// `x^e · (1 − |x − x₀|²/w²)^p` with `x` measured from the center.
    PolynomialBump { exponents: [u32; 3], power: u32 },
    /// `sin(k·(x − x₀))` times a Gaussian envelope of width `w`.
    PlaneWavePacket { wavevector: [f64; 3] },
    /// The unbounded travelling wave `sin(k·(x − x₀) − c|k|t)`; needs
    /// prescribed boundary values.
    PlaneWave { wavevector: [f64; 3] },
}

/// Which Cauchy slot the profile fills.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DataSlot {
    /// `u(0) = ε φ`, `∂ₜu(0) = 0`.
    Displacement,
    /// `u(0) = 0`, `∂ₜu(0) = ε φ`.
    Velocity,
    /// `u(0) = ε φ`, `∂ₜu(0) = −c ∂_r(r φ)/r`, the outgoing part of a
    /// radial free wave; for plane waves the exact travelling data.
    Travelling,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InitialData {
    pub profile: Profile,
    /// `ε`.
    pub amplitude: f64,
    pub width: f64,
    #[serde(default)]
    pub center: [f64; 3],
    pub slot: DataSlot,
    /// Per-family multipliers; empty means every family gets `1`.
    #[serde(default)]
    pub families: Vec<f64>,
}

impl InitialData {
    pub fn new(profile: Profile, amplitude: f64, width: f64, slot: DataSlot) -> Self {
        Self {
            profile,
            amplitude,
            width,
            center: [0.0; 3],
            slot,
            families: Vec::new(),
        }
    }

    pub fn zero() -> Self {
        Self::new(Profile::Gaussian, 0.0, 1.0, DataSlot::Displacement)
    }

    pub fn with_center(mut self, center: [f64; 3]) -> Self {
        self.center = center;
        self
    }

    pub fn with_families(mut self, weights: Vec<f64>) -> Self {
        self.families = weights;
        self
    }

    pub fn family_weight(&self, family: usize) -> f64 {
        if self.families.is_empty() {
            1.0
        } else {
            self.families.get(family).copied().unwrap_or(0.0)
        }
    }

    /// Radius (about `center`) outside which the data vanish, or `None`
    /// for unbounded profiles.
    pub fn support_radius(&self) -> Option<f64> {
        if self.amplitude == 0.0 {
            return Some(0.0);
        }
        match self.profile {
            Profile::Gaussian | Profile::PlaneWavePacket { .. } => Some(6.0 * self.width),
            Profile::Bump { .. } | Profile::PolynomialBump { .. } => Some(self.width),
            Profile::PlaneWave { .. } => None,
        }
    }

    /// `(φ, ∂_ρ φ)` of the shape along the offset `y = x − x₀`, ignoring
    /// amplitude.
    fn shape(&self, y: [f64; 3]) -> (f64, [f64; 3]) {
        let w = self.width;
        let r2 = y[0] * y[0] + y[1] * y[1] + y[2] * y[2];
        match &self.profile {
            Profile::Gaussian => {
                let g = (-r2 / (w * w)).exp();
                let k = -2.0 * g / (w * w);
                (g, [k * y[0], k * y[1], k * y[2]])
            }
            Profile::Bump { power } => bump(y, r2, w, *power),
            Profile::PolynomialBump { exponents, power } => {
                let (b, db) = bump(y, r2, w, *power);
                let mono = |skip: Option<usize>| -> f64 {
                    (0..3)
                        .map(|a| {
                            let e = exponents[a] as i32;
                            match skip {
                                Some(s) if s == a => {
                                    if e == 0 {
                                        0.0
                                    } else {
                                        e as f64 * y[a].powi(e - 1)
                                    }
                                }
                                _ => y[a].powi(e),
                            }
                        })
                        .product()
                };
                let p = mono(None);
                let grad = [0, 1, 2].map(|a| mono(Some(a)) * b + p * db[a]);
                (p * b, grad)
            }
            Profile::PlaneWavePacket { wavevector: k } => {
                let ph = k[0] * y[0] + k[1] * y[1] + k[2] * y[2];
                let g = (-r2 / (w * w)).exp();
                let s = ph.sin();
                let grad = [0, 1, 2].map(|a| k[a] * ph.cos() * g - 2.0 * y[a] / (w * w) * s * g);
                (s * g, grad)
            }
            Profile::PlaneWave { wavevector: k } => {
                let ph = k[0] * y[0] + k[1] * y[1] + k[2] * y[2];
                (ph.sin(), [k[0] * ph.cos(), k[1] * ph.cos(), k[2] * ph.cos()])
            }
        }
    }

    /// `(u(0, x), ∂ₜu(0, x))` for `family` with speed `c`.
    pub fn eval(&self, family: usize, c: f64, x: [f64; 3]) -> (f64, f64) {
        let amp = self.amplitude * self.family_weight(family);
        if amp == 0.0 {
            return (0.0, 0.0);
        }
        let y = [x[0] - self.center[0], x[1] - self.center[1], x[2] - self.center[2]];
        let (phi, grad) = self.shape(y);
        match self.slot {
            DataSlot::Displacement => (amp * phi, 0.0),
            DataSlot::Velocity => (0.0, amp * phi),
            DataSlot::Travelling => {
                if let Profile::PlaneWave { wavevector: k } = self.profile {
                    let kn = (k[0] * k[0] + k[1] * k[1] + k[2] * k[2]).sqrt();
                    let ph = k[0] * y[0] + k[1] * y[1] + k[2] * y[2];
                    return (amp * ph.sin(), -amp * c * kn * ph.cos());
                }
                // outgoing radial wave: (rφ)_t = −c (rφ)_r
                let r = (y[0] * y[0] + y[1] * y[1] + y[2] * y[2]).sqrt();
                let dr_phi = if r > 0.0 {
                    (y[0] * grad[0] + y[1] * grad[1] + y[2] * grad[2]) / r
                } else {
                    0.0
                };
                let ut = if r > 0.0 {
                    -c * (phi + r * dr_phi) / r
                } else {
                    0.0
                };
                (amp * phi, amp * ut)
            }
        }
    }

    /// Exact free solution for plane-wave data at time `t`.
    pub fn plane_wave_exact(&self, family: usize, c: f64, t: f64, x: [f64; 3]) -> Option<f64> {
        let Profile::PlaneWave { wavevector: k } = self.profile else {
            return None;
        };
        let amp = self.amplitude * self.family_weight(family);
        let kn = (k[0] * k[0] + k[1] * k[1] + k[2] * k[2]).sqrt();
        let y = [x[0] - self.center[0], x[1] - self.center[1], x[2] - self.center[2]];
        let ph = k[0] * y[0] + k[1] * y[1] + k[2] * y[2];
        Some(match self.slot {
            DataSlot::Travelling => amp * (ph - c * kn * t).sin(),
            DataSlot::Displacement => amp * ph.sin() * (c * kn * t).cos(),
            DataSlot::Velocity => amp * ph.sin() * (c * kn * t).sin() / (c * kn),
        })
    }
}

fn bump(y: [f64; 3], r2: f64, w: f64, power: u32) -> (f64, [f64; 3]) {
    let s = 1.0 - r2 / (w * w);
    if s <= 0.0 {
        return (0.0, [0.0; 3]);
    }
    let p = power as i32;
    let v = s.powi(p);
    let dv = if p == 0 { 0.0 } else { p as f64 * s.powi(p - 1) };
    let k = -2.0 * dv / (w * w);
    (v, [k * y[0], k * y[1], k * y[2]])
}
