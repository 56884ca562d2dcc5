#![allow(dead_code)]

use pvi_e6::hamiltonian::PhasePoint;
use pvi_e6::weyl::ParameterVector;

/// `(q1, p1, q2, p2, q3, p3)` start used by the covariance checks.
pub fn generic_start() -> (PhasePoint<f64>, ParameterVector<f64>) {
    (
        PhasePoint::new([0.4, 0.6, 0.45], [0.3, -0.2, 0.25], 0.3),
        ParameterVector([0.21, 0.13, 0.07, 0.01, 0.11, 0.17, 0.05]),
    )
}

/// Scalar sixth Painleve equation in Hamiltonian form,
/// `H = q(q-1)(q-s)p^2 - L(q) p + k q`, with hand-written partials.
pub struct ScalarPvi {
    pub b0: f64,
    pub b1: f64,
    pub b3: f64,
    pub b4: f64,
}

impl ScalarPvi {
    /// Parameters of the `(q1, p1)` block.
    pub fn first_block(alpha: &[f64; 7]) -> Self {
        ScalarPvi {
            b0: alpha[3],
            b1: 1.0 - alpha[1] - 2.0 * alpha[2] - 2.0 * alpha[3],
            b3: alpha[1],
            b4: alpha[3],
        }
    }

    fn rhs(&self, s: f64, q: f64, p: f64) -> [f64; 2] {
        let b2 = (1.0 - self.b0 - self.b1 - self.b3 - self.b4) / 2.0;
        let lin =
            (self.b1 - 1.0) * q * (q - 1.0) + self.b3 * q * (q - s) + self.b4 * (q - 1.0) * (q - s);
        let dlin = (self.b1 - 1.0) * (2.0 * q - 1.0)
            + self.b3 * (2.0 * q - s)
            + self.b4 * (2.0 * q - 1.0 - s);
        let cubic = q * (q - 1.0) * (q - s);
        let dcubic = 3.0 * q * q - 2.0 * (1.0 + s) * q + s;
        let h_p = 2.0 * cubic * p - lin;
        let h_q = dcubic * p * p - dlin * p + b2 * (self.b0 + b2);
        let den = s * (s - 1.0);
        [h_p / den, -h_q / den]
    }

    /// Classical fixed-step RK4; returns the states at every step.
    pub fn rk4(&self, s0: f64, q0: f64, p0: f64, s1: f64, steps: usize) -> Vec<(f64, f64, f64)> {
        let h = (s1 - s0) / steps as f64;
        let mut out = Vec::with_capacity(steps + 1);
        let (mut q, mut p) = (q0, p0);
        out.push((s0, q, p));
        for n in 0..steps {
            let s = s0 + n as f64 * h;
            let k1 = self.rhs(s, q, p);
            let k2 = self.rhs(s + h / 2.0, q + h / 2.0 * k1[0], p + h / 2.0 * k1[1]);
            let k3 = self.rhs(s + h / 2.0, q + h / 2.0 * k2[0], p + h / 2.0 * k2[1]);
            let k4 = self.rhs(s + h, q + h * k3[0], p + h * k3[1]);
            q += h / 6.0 * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0]);
            p += h / 6.0 * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1]);
            out.push((s0 + (n + 1) as f64 * h, q, p));
        }
        out
    }
}

/// Max deviation of the `(q1, p1)` components of a dense trajectory from the
/// scalar RK4 reference, over the RK4 grid.
pub fn decoupled_deviation(alpha: [f64; 7], q: [f64; 3], p1: f64, s0: f64, s1: f64) -> f64 {
    use pvi_e6::flow::{integrate, IntegratorConfig};
    let z0 = PhasePoint::new(q, [p1, 0.0, 0.0], s0);
    let cfg = IntegratorConfig {
        dense: true,
        ..IntegratorConfig::default()
    };
    let traj = integrate(&z0, &ParameterVector(alpha), s1, &cfg).expect("integrates");
    let reference = ScalarPvi::first_block(&alpha).rk4(s0, q[0], p1, s1, 40_000);
    reference
        .iter()
        .step_by(100)
        .map(|&(s, q1, p1)| {
            let y = traj
                .interpolate(s.clamp(s0.min(s1), s0.max(s1)))
                .expect("covered");
            (y[0] - q1).abs().max((y[1] - p1).abs())
        })
        .fold(0.0, f64::max)
}
