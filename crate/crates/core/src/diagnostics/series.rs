//! Time series of diagnostics rows and the energy-inequality residual.

use std::io::Write;

use serde::{Deserialize, Serialize};

use super::Snapshot;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiagnosticsRow {
    #[serde(flatten)]
    pub snapshot: Snapshot,
    /// `(1 + t)·sup_gamma`.
    pub q0: f64,
    /// Trapezoidal `∫₀ᵗ ∫ ⟨x⟩⁻² Σ|Γ^α u'|²`.
    pub acc_du: f64,
    /// Trapezoidal `∫₀ᵗ ∫ ⟨x⟩⁻⁴ Σ|Γ^α u|²`.
    pub acc_u: f64,
    /// `max(dE/dt, 0) / (‖F‖₂ + E Σ‖∂γ‖_∞)`; filled by
    /// [`DiagnosticsSeries::finish`].
    pub cemp_energy: f64,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct DiagnosticsSeries {
    pub budget: usize,
    pub sobolev_order: usize,
    pub rows: Vec<DiagnosticsRow>,
    /// Times where `dE/dt` was positive while the bracket vanished.
    pub flagged: Vec<f64>,
}

impl DiagnosticsSeries {
    pub fn new(budget: usize, sobolev_order: usize) -> Self {
        Self {
            budget,
            sobolev_order,
            rows: Vec::new(),
            flagged: Vec::new(),
        }
    }

    /// Appends a row; times must increase.
    pub fn push(&mut self, snap: Snapshot) {
        let (acc_du, acc_u) = match self.rows.last() {
            Some(prev) => {
                let dt = snap.t - prev.snapshot.t;
                debug_assert!(dt > 0.0, "diagnostics times must increase");
                (
                    prev.acc_du + 0.5 * dt * (prev.snapshot.du_weighted + snap.du_weighted),
                    prev.acc_u + 0.5 * dt * (prev.snapshot.u_weighted + snap.u_weighted),
                )
            }
            None => (0.0, 0.0),
        };
        self.rows.push(DiagnosticsRow {
            q0: (1.0 + snap.t) * snap.sup_gamma,
            snapshot: snap,
            acc_du,
            acc_u,
            cemp_energy: 0.0,
        });
    }

    /// Computes the energy-inequality column from the perturbed energy.
    pub fn finish(&mut self, drift_tolerance: f64) {
        let t: Vec<f64> = self.rows.iter().map(|r| r.snapshot.t).collect();
        let e: Vec<f64> = self.rows.iter().map(|r| r.snapshot.e_pert).collect();
        let bracket: Vec<f64> = self
            .rows
            .iter()
            .map(|r| r.snapshot.force_norm + r.snapshot.e_pert * r.snapshot.dgamma_sup)
            .collect();
        let report = energy_inequality_residual(&t, &e, &bracket, drift_tolerance);
        for (row, c) in self.rows.iter_mut().zip(&report.ratio) {
            row.cemp_energy = *c;
        }
        self.flagged = report.flagged;
    }

    pub fn times(&self) -> Vec<f64> {
        self.rows.iter().map(|r| r.snapshot.t).collect()
    }

    pub fn header(&self) -> String {
        let mut cols = vec!["t".to_string(), "E_flat".into(), "E_pert".into()];
        cols.extend((1..=self.sobolev_order).map(|k| format!("H{k}")));
        cols.push(format!("supGamma_{}", self.budget));
        cols.extend(["Q0", "Q1", "acc_du", "acc_u", "Cemp_energy"].map(String::from));
        cols.join(",")
    }

    /// CSV with one header line; floats in shortest round-trip form.
    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "{}", self.header())?;
        for r in &self.rows {
            let s = &r.snapshot;
            let mut vals = vec![s.t, s.e_flat, s.e_pert];
            vals.extend(&s.sobolev);
            vals.extend([s.sup_gamma, r.q0, s.q1, r.acc_du, r.acc_u, r.cemp_energy]);
            let line: Vec<String> = vals.iter().map(|v| v.to_string()).collect();
            writeln!(w, "{}", line.join(","))?;
        }
        Ok(())
    }

    pub fn to_csv(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("ascii")
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResidualReport {
    pub de_dt: Vec<f64>,
    /// `C_emp(t)` per time.
    pub ratio: Vec<f64>,
    /// Times where `dE/dt > tolerance·E` but the bracket is below `10⁻³⁰`.
    pub flagged: Vec<f64>,
}

/// `C_emp(t) = max(dE/dt, 0) / bracket(t)` with `dE/dt` from centered
/// differences of the series (one-sided at the ends).
pub fn energy_inequality_residual(t: &[f64], e: &[f64], bracket: &[f64], drift_tolerance: f64) -> ResidualReport {
    let n = t.len();
    let de_dt: Vec<f64> = (0..n)
        .map(|k| {
            if n < 2 {
                0.0
            } else if k == 0 {
                (e[1] - e[0]) / (t[1] - t[0])
            } else if k == n - 1 {
                (e[k] - e[k - 1]) / (t[k] - t[k - 1])
            } else {
                (e[k + 1] - e[k - 1]) / (t[k + 1] - t[k - 1])
            }
        })
        .collect();
    let mut flagged = Vec::new();
    let ratio = (0..n)
        .map(|k| {
            let growth = de_dt[k].max(0.0);
            if bracket[k] < 1e-30 {
                if growth > drift_tolerance * e[k] {
                    flagged.push(t[k]);
                }
                0.0
            } else {
                growth / bracket[k]
            }
        })
        .collect();
    ResidualReport { de_dt, ratio, flagged }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn snap(t: f64, du: f64, u: f64) -> Snapshot {
        Snapshot {
            t,
            e_flat: 1.0,
            e_pert: 1.0,
            sobolev: vec![1.0, 2.0],
            sup_gamma: 0.5,
            q1: 1.0,
            du_weighted: du,
            u_weighted: u,
            force_norm: 0.0,
            dgamma_sup: 0.0,
            margin: 0.0,
            smallness_violations: 0,
        }
    }

    #[test]
    fn static_field_accumulates_linearly() {
        let mut s = DiagnosticsSeries::new(2, 2);
        for k in 0..=4 {
            s.push(snap(0.5 * k as f64, 3.0, 0.25));
        }
        let last = s.rows.last().unwrap();
        assert_eq!(last.acc_du, 6.0);
        assert_eq!(last.acc_u, 0.5);
        assert_eq!(last.q0, 1.5);
        assert!(s.rows.windows(2).all(|w| w[1].acc_du >= w[0].acc_du));
    }

    #[test]
    fn csv_layout() {
        let mut s = DiagnosticsSeries::new(2, 2);
        s.push(snap(0.0, 0.0, 0.0));
        s.push(snap(0.1, 0.0, 0.0));
        s.finish(1e-8);
        let csv = s.to_csv();
        let mut lines = csv.lines();
        assert_eq!(
            lines.next().unwrap(),
            "t,E_flat,E_pert,H1,H2,supGamma_2,Q0,Q1,acc_du,acc_u,Cemp_energy"
        );
        assert_eq!(lines.next().unwrap(), "0,1,1,1,2,0.5,0.5,1,0,0,0");
        let second: Vec<f64> = lines.next().unwrap().split(',').map(|v| v.parse().unwrap()).collect();
        assert_eq!(second[0], 0.1);
    }

    #[test]
    fn residual_flags_unexplained_growth() {
        let t = [0.0, 1.0, 2.0];
        let r = energy_inequality_residual(&t, &[1.0, 1.0, 1.0], &[0.0; 3], 1e-8);
        assert_eq!(r.ratio, vec![0.0; 3]);
        assert!(r.flagged.is_empty());
        let r = energy_inequality_residual(&t, &[1.0, 2.0, 3.0], &[0.0; 3], 1e-8);
        assert_eq!(r.flagged.len(), 3);
        let r = energy_inequality_residual(&t, &[1.0, 2.0, 3.0], &[2.0; 3], 1e-8);
        assert_eq!(r.ratio, vec![0.5; 3]);
    }
}
