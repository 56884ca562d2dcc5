//! The scalar Painleve VI Hamiltonian, the coupled sixth-order Hamiltonian
//! and its vector field.
//!
//! Bracket convention: `{f, g} = sum_k (df/dp_k dg/dq_k - df/dq_k dg/dp_k)`,
//! so `{p_i, q_j} = delta_ij` and `{H, q_i} = dH/dp_i`.

use crate::dual::Dual;
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::weyl::ParameterVector;

/// Canonical coordinates plus the independent variable.
#[derive(Clone, Debug, PartialEq)]
pub struct PhasePoint<T> {
    pub q: [T; 3],
    pub p: [T; 3],
    pub s: T,
}

impl<T: Scalar> PhasePoint<T> {
    pub fn new(q: [T; 3], p: [T; 3], s: T) -> Self {
        PhasePoint { q, p, s }
    }

    /// Phase coordinates in the order `(q1, p1, q2, p2, q3, p3)`.
    pub fn coords(&self) -> [T; 6] {
        std::array::from_fn(|k| {
            if k % 2 == 0 {
                self.q[k / 2].clone()
            } else {
                self.p[k / 2].clone()
            }
        })
    }

    pub fn from_coords(c: &[T; 6], s: T) -> Self {
        PhasePoint {
            q: std::array::from_fn(|i| c[2 * i].clone()),
            p: std::array::from_fn(|i| c[2 * i + 1].clone()),
            s,
        }
    }

    pub fn map<U>(&self, f: impl Fn(&T) -> U) -> PhasePoint<U> {
        PhasePoint {
            q: std::array::from_fn(|i| f(&self.q[i])),
            p: std::array::from_fn(|i| f(&self.p[i])),
            s: f(&self.s),
        }
    }

    /// Lifts to dual numbers with `(q1, p1, q2, p2, q3, p3)` seeded in slots
    /// 0..6 and `s` held constant.
    pub fn seed_phase<const N: usize>(&self) -> PhasePoint<Dual<T, N>> {
        assert!(N >= 6);
        let c = self.coords();
        let seeded: [Dual<T, N>; 6] = std::array::from_fn(|k| Dual::variable(c[k].clone(), k));
        PhasePoint::from_coords(&seeded, Dual::constant(self.s.clone()))
    }
}

/// Partial derivatives of a Hamiltonian with respect to the phase variables.
#[derive(Clone, Debug, PartialEq)]
pub struct Gradient<T> {
    pub dq: [T; 3],
    pub dp: [T; 3],
}

/// `q(q-1)(q-s)p^2 - {(b1-1)q(q-1) + b3 q(q-s) + b4 (q-1)(q-s)} p + b2(b0+b2) q`
/// with `b2 = (1 - b0 - b1 - b3 - b4)/2`.
pub fn h_vi<T: Scalar>(p: &T, q: &T, s: &T, b0: &T, b1: &T, b3: &T, b4: &T) -> T {
    let one = T::one();
    let b2 = eliminated_beta2(b0, b1, b3, b4);
    let qm1 = q.clone() - one.clone();
    let qms = q.clone() - s.clone();
    let linear = (b1.clone() - one) * q.clone() * qm1.clone()
        + b3.clone() * q.clone() * qms.clone()
        + b4.clone() * qm1.clone() * qms.clone();
    q.clone() * qm1 * qms * p.square() - linear * p.clone()
        + b2.clone() * (b0.clone() + b2) * q.clone()
}

/// Solves `b0 + b1 + 2 b2 + b3 + b4 = 1` for `b2`.
pub fn eliminated_beta2<T: Scalar>(b0: &T, b1: &T, b3: &T, b4: &T) -> T {
    (T::one() - b0.clone() - b1.clone() - b3.clone() - b4.clone()) / T::from_i64(2)
}

/// `(b0, b1, b3, b4)` of the scalar block attached to `(q_i, p_i)`,
/// `i = 0, 1, 2`.
pub fn block_params<T: Scalar>(i: usize, alpha: &ParameterVector<T>) -> [T; 4] {
    let a = |k: usize| alpha.0[k].clone();
    let one = T::one();
    let two = T::from_i64(2);
    match i {
        0 => [
            a(3),
            one - a(1) - two.clone() * a(2) - two * a(3),
            a(1),
            a(3),
        ],
        1 => [
            a(3),
            one - two.clone() * a(3) - two * a(4) - a(5),
            a(5),
            a(3),
        ],
        2 => [
            a(3),
            one - a(0) - two.clone() * a(3) - two * a(6),
            a(0),
            a(3),
        ],
        _ => panic!("block index {i} out of range"),
    }
}

/// Index of the parameter `alpha_{2i}` paired with block `i` (alpha_2,
/// alpha_4, alpha_6).
pub const COUPLING_PARAM: [usize; 3] = [2, 4, 6];

/// `(q_i - 1) p_i + alpha_{2i}`.
pub fn coupling_factor<T: Scalar>(i: usize, z: &PhasePoint<T>, alpha: &ParameterVector<T>) -> T {
    (z.q[i].clone() - T::one()) * z.p[i].clone() + alpha.0[COUPLING_PARAM[i]].clone()
}

pub fn block_h<T: Scalar>(i: usize, z: &PhasePoint<T>, alpha: &ParameterVector<T>) -> T {
    let [b0, b1, b3, b4] = block_params(i, alpha);
    h_vi(&z.p[i], &z.q[i], &z.s, &b0, &b1, &b3, &b4)
}

/// `sum_{i<j} f_i f_j (q_i q_j + s)` with `f_i` the coupling factors.
pub fn coupling_term<T: Scalar>(z: &PhasePoint<T>, alpha: &ParameterVector<T>) -> T {
    let f: [T; 3] = std::array::from_fn(|i| coupling_factor(i, z, alpha));
    let mut acc = T::zero();
    for i in 0..3 {
        for j in i + 1..3 {
            acc =
                acc + f[i].clone() * f[j].clone() * (z.q[i].clone() * z.q[j].clone() + z.s.clone());
        }
    }
    acc
}

pub fn coupled_h<T: Scalar>(z: &PhasePoint<T>, alpha: &ParameterVector<T>) -> T {
    (0..3).fold(coupling_term(z, alpha), |acc, i| acc + block_h(i, z, alpha))
}

pub fn grad_h<T: Scalar>(z: &PhasePoint<T>, alpha: &ParameterVector<T>) -> Gradient<T> {
    let zd = z.seed_phase::<6>();
    let ad = alpha.map(|a| Dual::<T, 6>::constant(a.clone()));
    let h = coupled_h(&zd, &ad);
    Gradient {
        dq: std::array::from_fn(|i| h.eps[2 * i].clone()),
        dp: std::array::from_fn(|i| h.eps[2 * i + 1].clone()),
    }
}

/// Poisson bracket of two functions of the phase point. `s` is a constant.
pub fn poisson_bracket<T, F, G>(f: F, g: G, z: &PhasePoint<T>) -> T
where
    T: Scalar,
    F: Fn(&PhasePoint<Dual<T, 6>>) -> Dual<T, 6>,
    G: Fn(&PhasePoint<Dual<T, 6>>) -> Dual<T, 6>,
{
    let zd = z.seed_phase::<6>();
    let fd = f(&zd);
    let gd = g(&zd);
    (0..3).fold(T::zero(), |acc, i| {
        acc + fd.eps[2 * i + 1].clone() * gd.eps[2 * i].clone()
            - fd.eps[2 * i].clone() * gd.eps[2 * i + 1].clone()
    })
}

/// `ds`-derivatives in the order `(q1, p1, q2, p2, q3, p3)`:
/// `dq_i/ds = (dH/dp_i) / (s(s-1))`, `dp_i/ds = -(dH/dq_i) / (s(s-1))`.
pub fn vector_field<T: Scalar>(z: &PhasePoint<T>, alpha: &ParameterVector<T>) -> Result<[T; 6]> {
    if z.s.is_zero() || (z.s.clone() - T::one()).is_zero() {
        return Err(Error::SingularIndependentVariable(format!("{:?}", z.s)));
    }
    let denom = z.s.clone() * (z.s.clone() - T::one());
    let g = grad_h(z, alpha);
    Ok(std::array::from_fn(|k| {
        let i = k / 2;
        if k % 2 == 0 {
            g.dp[i].clone() / denom.clone()
        } else {
            -g.dq[i].clone() / denom.clone()
        }
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;
    use crate::weyl::normalization;

    fn q(n: i64, d: i64) -> Rational {
        Rational::from_ratio(n, d)
    }

    fn sample_alpha() -> ParameterVector<Rational> {
        ParameterVector::normalized_from([
            q(3, 5),
            q(-2, 7),
            q(1, 9),
            q(0, 1),
            q(4, 11),
            q(-5, 3),
            q(2, 13),
        ])
    }

    fn sample_point() -> PhasePoint<Rational> {
        PhasePoint::new(
            [q(2, 3), q(-5, 4), q(7, 2)],
            [q(1, 6), q(-3, 5), q(9, 7)],
            q(3, 8),
        )
    }

    /// Second evaluator: the scalar Hamiltonian expanded by hand in powers
    /// of p, with b2 written out from the constraint.
    fn h_vi_expanded(p: &Rational, x: &Rational, s: &Rational, b: [&Rational; 4]) -> Rational {
        let [b0, b1, b3, b4] = b;
        let one = q(1, 1);
        let two = q(2, 1);
        let b2 = (one.clone() - b0 - b1 - b3 - b4) / two;
        let x2 = x * x;
        let x3 = &x2 * x;
        let cubic = &x3 - (&one + s) * &x2 + s * x;
        let lin =
            (b1 + b3 + b4 - &one) * &x2 - ((b1 - &one) + b3 * s + b4 * (s + &one)) * x + b4 * s;
        cubic * p * p - lin * p + &b2 * (b0 + &b2) * x
    }

    #[test]
    fn p_zero_leaves_constant_term() {
        let (x, s) = (q(5, 3), q(2, 7));
        let b = [q(1, 2), q(1, 3), q(-1, 5), q(2, 9)];
        let b2 = eliminated_beta2(&b[0], &b[1], &b[2], &b[3]);
        let h = h_vi(&q(0, 1), &x, &s, &b[0], &b[1], &b[2], &b[3]);
        assert_eq!(h, b2.clone() * (b[0].clone() + b2) * x);
    }

    #[test]
    fn q_zero_leaves_beta4_term() {
        let (p, s) = (q(-4, 3), q(2, 7));
        let b = [q(1, 2), q(1, 3), q(-1, 5), q(2, 9)];
        let h = h_vi(&p, &q(0, 1), &s, &b[0], &b[1], &b[2], &b[3]);
        assert_eq!(h, -b[3].clone() * s * p);
    }

    #[test]
    fn scalar_matches_expanded_evaluator() {
        let vals = [
            q(1, 2),
            q(-3, 7),
            q(5, 4),
            q(2, 3),
            q(-1, 9),
            q(7, 5),
            q(3, 11),
        ];
        for shift in 0..5 {
            let v = |k: usize| vals[(k + shift) % vals.len()].clone();
            let (p, x, s) = (v(0), v(1), v(2));
            let b = [v(3), v(4), v(5), v(6)];
            assert_eq!(
                h_vi(&p, &x, &s, &b[0], &b[1], &b[2], &b[3]),
                h_vi_expanded(&p, &x, &s, [&b[0], &b[1], &b[2], &b[3]])
            );
        }
    }

    #[test]
    fn eliminated_beta2_equals_even_parameters() {
        // Symbolic check: beta_2 is affine in alpha, so agreement on the
        // zero vector and on every unit vector proves the identity.
        let mut probes = vec![[
            q(0, 1),
            q(0, 1),
            q(0, 1),
            q(0, 1),
            q(0, 1),
            q(0, 1),
            q(0, 1),
        ]];
        for k in 0..7 {
            let mut e = probes[0].clone();
            e[k] = q(1, 1);
            probes.push(e);
        }
        for a in probes {
            let alpha = ParameterVector(a);
            for (i, &even) in COUPLING_PARAM.iter().enumerate() {
                let [b0, b1, b3, b4] = block_params(i, &alpha);
                assert_eq!(eliminated_beta2(&b0, &b1, &b3, &b4), alpha.0[even]);
            }
        }
    }

    #[test]
    fn coupled_matches_independent_evaluator() {
        let alpha = sample_alpha();
        let z = sample_point();
        let a = &alpha.0;
        let blocks = [
            (
                &z.p[0],
                &z.q[0],
                [
                    a[3].clone(),
                    q(1, 1) - &a[1] - q(2, 1) * &a[2] - q(2, 1) * &a[3],
                    a[1].clone(),
                    a[3].clone(),
                ],
            ),
            (
                &z.p[1],
                &z.q[1],
                [
                    a[3].clone(),
                    q(1, 1) - q(2, 1) * &a[3] - q(2, 1) * &a[4] - &a[5],
                    a[5].clone(),
                    a[3].clone(),
                ],
            ),
            (
                &z.p[2],
                &z.q[2],
                [
                    a[3].clone(),
                    q(1, 1) - &a[0] - q(2, 1) * &a[3] - q(2, 1) * &a[6],
                    a[0].clone(),
                    a[3].clone(),
                ],
            ),
        ];
        let mut expect = q(0, 1);
        for (p, x, b) in &blocks {
            expect += h_vi_expanded(p, x, &z.s, [&b[0], &b[1], &b[2], &b[3]]);
        }
        let f = |i: usize, even: usize| (&z.q[i] - q(1, 1)) * &z.p[i] + &a[even];
        let (f1, f2, f3) = (f(0, 2), f(1, 4), f(2, 6));
        expect += &f1 * &f2 * (&z.q[0] * &z.q[1] + &z.s);
        expect += &f1 * &f3 * (&z.q[0] * &z.q[2] + &z.s);
        expect += &f2 * &f3 * (&z.q[1] * &z.q[2] + &z.s);
        assert_eq!(coupled_h(&z, &alpha), expect);
    }

    #[test]
    fn two_vanishing_factors_decouple() {
        let alpha = sample_alpha();
        let mut z = sample_point();
        for i in [1, 2] {
            z.p[i] = -alpha.0[COUPLING_PARAM[i]].clone() / (z.q[i].clone() - q(1, 1));
        }
        assert!(coupling_term(&z, &alpha).is_zero());
        let blocks = (0..3).fold(q(0, 1), |acc, i| acc + block_h(i, &z, &alpha));
        assert_eq!(coupled_h(&z, &alpha), blocks);
    }

    #[test]
    fn gradient_of_leading_monomial() {
        // Only q1(q1-1)(q1-s)p1^2 survives with zero parameters in block 1
        // apart from the linear p-term; compare d/dp1 against the monomial rule.
        let z = sample_point();
        let cubic = z.q[0].clone() * (z.q[0].clone() - q(1, 1)) * (z.q[0].clone() - z.s.clone());
        let zd = z.seed_phase::<6>();
        let mono = zd.q[0].clone()
            * (zd.q[0].clone() - Dual::one())
            * (zd.q[0].clone() - zd.s.clone())
            * zd.p[0].square();
        assert_eq!(mono.eps[1], q(2, 1) * cubic * z.p[0].clone());
    }

    #[test]
    fn gradient_at_zero_momenta_without_coupling() {
        let alpha = ParameterVector::normalized_from([
            q(1, 4),
            q(1, 5),
            q(0, 1),
            q(0, 1),
            q(0, 1),
            q(-1, 3),
            q(0, 1),
        ]);
        let z = PhasePoint::new(
            [q(2, 3), q(-5, 4), q(7, 2)],
            [q(0, 1), q(0, 1), q(0, 1)],
            q(3, 8),
        );
        let g = grad_h(&z, &alpha);
        for i in 0..3 {
            let [_, b1, b3, b4] = block_params(i, &alpha);
            let x = z.q[i].clone();
            let expect = -((b1 - q(1, 1)) * x.clone() * (x.clone() - q(1, 1))
                + b3 * x.clone() * (x.clone() - z.s.clone())
                + b4 * (x.clone() - q(1, 1)) * (x - z.s.clone()));
            assert_eq!(g.dp[i], expect);
        }
    }

    #[test]
    fn vector_field_is_scaled_gradient() {
        let alpha = sample_alpha();
        let z = sample_point();
        let v = vector_field(&z, &alpha).unwrap();
        let g = grad_h(&z, &alpha);
        let ss = z.s.clone() * (z.s.clone() - q(1, 1));
        for i in 0..3 {
            assert_eq!(v[2 * i].clone() * ss.clone(), g.dp[i]);
            assert_eq!(v[2 * i + 1].clone() * ss.clone(), -g.dq[i].clone());
        }
    }

    #[test]
    fn vector_field_rejects_fixed_singularities() {
        let alpha = sample_alpha();
        let mut z = sample_point();
        z.s = q(0, 1);
        assert!(matches!(
            vector_field(&z, &alpha),
            Err(Error::SingularIndependentVariable(_))
        ));
        z.s = q(1, 1);
        assert!(vector_field(&z, &alpha).is_err());
    }

    #[test]
    fn decoupled_block_reduces_to_scalar_system() {
        // alpha_2 = alpha_4 = alpha_6 = 0 and p2 = p3 = 0 kill every coupling factor except f1.
        let alpha = ParameterVector::normalized_from([
            q(1, 4),
            q(1, 5),
            q(0, 1),
            q(0, 1),
            q(0, 1),
            q(-1, 3),
            q(0, 1),
        ]);
        let z = PhasePoint::new(
            [q(2, 3), q(-5, 4), q(7, 2)],
            [q(5, 6), q(0, 1), q(0, 1)],
            q(3, 8),
        );
        let v = vector_field(&z, &alpha).unwrap();
        let [b0, b1, b3, b4] = block_params(0, &alpha);
        let scalar = |pp: &Dual<Rational, 2>, qq: &Dual<Rational, 2>| {
            let c = |x: &Rational| Dual::constant(x.clone());
            h_vi(pp, qq, &c(&z.s), &c(&b0), &c(&b1), &c(&b3), &c(&b4))
        };
        let h = scalar(
            &Dual::variable(z.p[0].clone(), 0),
            &Dual::variable(z.q[0].clone(), 1),
        );
        let ss = z.s.clone() * (z.s.clone() - q(1, 1));
        assert_eq!(v[0], h.eps[0].clone() / ss.clone());
        assert_eq!(v[1], -h.eps[1].clone() / ss);
        assert!(v[3].is_zero() && v[5].is_zero());
        assert_eq!(normalization(&alpha), q(1, 1));
    }

    #[test]
    fn bracket_of_coordinates() {
        let z = sample_point();
        for i in 0..3 {
            for j in 0..3 {
                let pq = poisson_bracket(|w| w.p[i].clone(), |w| w.q[j].clone(), &z);
                assert_eq!(pq, q(i64::from(i == j), 1));
                let pp = poisson_bracket(|w| w.p[i].clone(), |w| w.p[j].clone(), &z);
                let qq = poisson_bracket(|w| w.q[i].clone(), |w| w.q[j].clone(), &z);
                assert!(pp.is_zero() && qq.is_zero());
            }
        }
    }

    #[test]
    fn hamiltonian_bracket_gives_field() {
        let alpha = sample_alpha();
        let z = sample_point();
        let g = grad_h(&z, &alpha);
        let ad = alpha.map(|a| Dual::<Rational, 6>::constant(a.clone()));
        for i in 0..3 {
            let hq = poisson_bracket(|w| coupled_h(w, &ad), |w| w.q[i].clone(), &z);
            assert_eq!(hq, g.dp[i]);
            let hp = poisson_bracket(|w| coupled_h(w, &ad), |w| w.p[i].clone(), &z);
            assert_eq!(hp, -g.dq[i].clone());
        }
    }
}
