//! Gauss–Legendre nodes and quadrature rules for the mean over the unit
//! sphere.

use std::f64::consts::PI;

/// Nodes and weights of the `n`-point Gauss–Legendre rule on `[−1, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1, "rule needs at least one node");
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 1.0;
        for _ in 0..100 {
            let (p, d) = legendre(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre(n, x);
        if d != 0.0 {
            dp = d;
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

/// `(P_n(x), P_n'(x))` by the three-term recurrence.
fn legendre(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Gauss–Legendre rule mapped to `[a, b]`.
pub fn gauss_on(n: usize, a: f64, b: f64) -> (Vec<f64>, Vec<f64>) {
    let (x, w) = gauss_legendre(n);
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    (
        x.iter().map(|xi| mid + half * xi).collect(),
        w.iter().map(|wi| half * wi).collect(),
    )
}

/// Points on the unit sphere with weights summing to one, so that
/// `Σ wᵢ f(pᵢ)` approximates the spherical mean of `f`.
#[derive(Debug, Clone, PartialEq)]
pub struct SphereRule {
    pub name: String,
    /// Highest polynomial degree integrated exactly.
    pub degree: usize,
    pub points: Vec<[f64; 3]>,
    pub weights: Vec<f64>,
}

impl SphereRule {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn mean<F: Fn([f64; 3]) -> f64>(&self, f: F) -> f64 {
        self.points
            .iter()
            .zip(&self.weights)
            .map(|(p, w)| w * f(*p))
            .sum()
    }
}

struct Builder {
    points: Vec<[f64; 3]>,
    weights: Vec<f64>,
}

impl Builder {
    fn push_orbit(&mut self, base: [f64; 3], w: f64) {
        let mut seen: Vec<[f64; 3]> = Vec::new();
        for perm in [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]] {
            for signs in 0..8 {
                let mut p = [0.0; 3];
                for k in 0..3 {
                    let s = if signs & (1 << k) != 0 { -1.0 } else { 1.0 };
                    p[k] = s * base[perm[k]];
                }
                let p = p.map(|v: f64| if v == 0.0 { 0.0 } else { v });
                if !seen.contains(&p) {
                    seen.push(p);
                }
            }
        }
        for p in seen {
            self.points.push(p);
            self.weights.push(w);
        }
    }
}

/// Lebedev rules with 6, 14, 26, 38 or 50 points.
pub fn lebedev(points: usize) -> Option<SphereRule> {
    let s2 = 0.5f64.sqrt();
    let s3 = (1.0f64 / 3.0).sqrt();
    let mut b = Builder {
        points: Vec::new(),
        weights: Vec::new(),
    };
    let degree = match points {
        6 => {
            b.push_orbit([1.0, 0.0, 0.0], 1.0 / 6.0);
            3
        }
        14 => {
            b.push_orbit([1.0, 0.0, 0.0], 1.0 / 15.0);
            b.push_orbit([s3, s3, s3], 3.0 / 40.0);
            5
        }
        26 => {
            b.push_orbit([1.0, 0.0, 0.0], 1.0 / 21.0);
            b.push_orbit([0.0, s2, s2], 4.0 / 105.0);
            b.push_orbit([s3, s3, s3], 9.0 / 280.0);
            7
        }
        38 => {
            b.push_orbit([1.0, 0.0, 0.0], 1.0 / 105.0);
            b.push_orbit([s3, s3, s3], 9.0 / 280.0);
            b.push_orbit([0.459_700_843_380_983_1, 0.888_073_833_977_115_3, 0.0], 1.0 / 35.0);
            9
        }
        50 => {
            let l = (1.0f64 / 11.0).sqrt();
            b.push_orbit([1.0, 0.0, 0.0], 4.0 / 315.0);
            b.push_orbit([0.0, s2, s2], 64.0 / 2835.0);
            b.push_orbit([s3, s3, s3], 27.0 / 1280.0);
            b.push_orbit([l, l, 3.0 * l], 14641.0 / 725_760.0);
            11
        }
        _ => return None,
    };
    Some(SphereRule {
        name: format!("lebedev-{points}"),
        degree,
        points: b.points,
        weights: b.weights,
    })
}

/// `m` Gauss–Legendre nodes in `cos θ` times `2m` equispaced angles in `φ`;
/// exact through degree `2m − 1`.
pub fn gauss_product(m: usize) -> SphereRule {
    let (z, wz) = gauss_legendre(m);
    let nphi = 2 * m;
    let mut points = Vec::with_capacity(m * nphi);
    let mut weights = Vec::with_capacity(m * nphi);
    for (zi, wi) in z.iter().zip(&wz) {
        let s = (1.0 - zi * zi).max(0.0).sqrt();
        for k in 0..nphi {
            let phi = 2.0 * PI * (k as f64 + 0.5) / nphi as f64;
            points.push([s * phi.cos(), s * phi.sin(), *zi]);
            weights.push(0.5 * wi / nphi as f64);
        }
    }
    SphereRule {
        name: format!("gauss-product-{m}x{nphi}"),
        degree: 2 * m - 1,
        points,
        weights,
    }
}

/// The refinement ladder used by the Kirchhoff oracle: Lebedev 26, 38, 50,
/// then product rules of growing order.
pub fn sphere_ladder() -> Vec<SphereRule> {
    let mut rules: Vec<SphereRule> = [26, 38, 50].iter().filter_map(|&n| lebedev(n)).collect();
    for m in [8, 12, 16, 24, 32, 48, 64, 96, 128] {
        rules.push(gauss_product(m));
    }
    rules
}
