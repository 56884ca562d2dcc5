//! Birational canonical transformations of the coupled system.
//!
//! The maps are written in the coordinates
//!
//! ```text
//! phi0 = q3 - 1   phi1 = q1 - 1   phi2 = p1   phi3 = q1 q2 q3 - s
//! phi4 = p2       phi5 = q2 - 1   phi6 = p3
//! ```
//!
//! A reflection acts by `phi_j -> phi_j + (alpha_i / phi_i) {phi_i, phi_j}`
//! and an automorphism permutes the `phi_j`. Canonical coordinates are read
//! back from the six independent `phi`s; `phi3` is determined by the others
//! and only used as a coherence check. `s` is left unchanged.

use crate::dual::Dual;
use crate::error::{Error, Result};
use crate::hamiltonian::{poisson_bracket, PhasePoint};
use crate::scalar::Scalar;
use crate::weyl::{apply_generator_params, Generator, ParameterVector, WeylWord, RANK, SIGMA};

#[derive(Clone, Debug, PartialEq)]
pub struct PhiValues<T>(pub [T; RANK]);

/// A phase point together with the parameters it is paired with.
#[derive(Clone, Debug, PartialEq)]
pub struct TransformedState<T> {
    pub point: PhasePoint<T>,
    pub params: ParameterVector<T>,
}

impl<T: Scalar> TransformedState<T> {
    pub fn new(point: PhasePoint<T>, params: ParameterVector<T>) -> Self {
        TransformedState { point, params }
    }

    pub fn map<U>(&self, f: impl Fn(&T) -> U) -> TransformedState<U> {
        TransformedState {
            point: self.point.map(&f),
            params: self.params.map(&f),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BacklundOptions {
    /// Float-mode cutoff on `|phi_i|`; exact scalars test for zero instead.
    pub threshold: f64,
}

impl Default for BacklundOptions {
    fn default() -> Self {
        BacklundOptions { threshold: 1e-12 }
    }
}

pub fn phi_component<T: Scalar>(j: usize, z: &PhasePoint<T>) -> T {
    let one = T::one();
    match j {
        0 => z.q[2].clone() - one,
        1 => z.q[0].clone() - one,
        2 => z.p[0].clone(),
        3 => z.q[0].clone() * z.q[1].clone() * z.q[2].clone() - z.s.clone(),
        4 => z.p[1].clone(),
        5 => z.q[1].clone() - one,
        6 => z.p[2].clone(),
        _ => panic!("phi index {j} out of range"),
    }
}

pub fn phi<T: Scalar>(z: &PhasePoint<T>) -> PhiValues<T> {
    PhiValues(std::array::from_fn(|j| phi_component(j, z)))
}

/// `{phi_i, phi_j}` at `z`, with `s` held fixed.
pub fn poisson_phi<T: Scalar>(i: usize, j: usize, z: &PhasePoint<T>) -> T {
    poisson_bracket(|w| phi_component(i, w), |w| phi_component(j, w), z)
}

/// Rebuilds canonical coordinates from `phi0, phi1, phi2, phi4, phi5, phi6`.
pub fn reconstruct<T: Scalar>(phi: &PhiValues<T>, s: T) -> PhasePoint<T> {
    let one = T::one();
    let f = &phi.0;
    PhasePoint {
        q: [
            f[1].clone() + one.clone(),
            f[5].clone() + one.clone(),
            f[0].clone() + one,
        ],
        p: [f[2].clone(), f[4].clone(), f[6].clone()],
        s,
    }
}

/// The `phi` values a reflection produces, including the dependent `phi3`.
pub fn reflected_phi<T: Scalar>(
    i: usize,
    st: &TransformedState<T>,
    opts: &BacklundOptions,
) -> Result<PhiValues<T>> {
    let z = &st.point;
    let phi_i = phi_component(i, z);
    if phi_i.is_negligible(opts.threshold) {
        return Err(Error::SingularTransformation {
            generator: format!("r{i}"),
            phi_index: i,
            step: None,
        });
    }
    let shift = st.params.0[i].clone() / phi_i;
    Ok(PhiValues(std::array::from_fn(|j| {
        let b = poisson_phi(i, j, z);
        if b.is_zero() {
            phi_component(j, z)
        } else {
            phi_component(j, z) + shift.clone() * b
        }
    })))
}

pub fn apply_reflection<T: Scalar>(
    i: usize,
    st: &TransformedState<T>,
    opts: &BacklundOptions,
) -> Result<TransformedState<T>> {
    let new_phi = reflected_phi(i, st, opts)?;
    Ok(TransformedState {
        point: reconstruct(&new_phi, st.point.s.clone()),
        params: crate::weyl::reflect_params(i, &st.params),
    })
}

pub fn apply_automorphism<T: Scalar>(k: usize, st: &TransformedState<T>) -> TransformedState<T> {
    let sigma = &SIGMA[k - 1];
    let old = phi(&st.point);
    let new_phi = PhiValues(std::array::from_fn(|j| old.0[sigma[j]].clone()));
    TransformedState {
        point: reconstruct(&new_phi, st.point.s.clone()),
        params: crate::weyl::automorphism_params(k, &st.params),
    }
}

pub fn apply_generator<T: Scalar>(
    g: Generator,
    st: &TransformedState<T>,
    opts: &BacklundOptions,
) -> Result<TransformedState<T>> {
    match g {
        Generator::Reflection(i) => apply_reflection(i as usize, st, opts),
        Generator::Automorphism(k) => Ok(apply_automorphism(k as usize, st)),
    }
}

/// Applies a word left to right. A singular step is reported with its
/// zero-based position in the word.
pub fn apply_word<T: Scalar>(
    w: &WeylWord,
    st: &TransformedState<T>,
    opts: &BacklundOptions,
) -> Result<TransformedState<T>> {
    let mut cur = st.clone();
    for (step, &g) in w.iter().enumerate() {
        cur = apply_generator(g, &cur, opts).map_err(|e| match e {
            Error::SingularTransformation {
                generator,
                phi_index,
                ..
            } => Error::SingularTransformation {
                generator,
                phi_index,
                step: Some(step),
            },
            other => other,
        })?;
    }
    Ok(cur)
}

/// Derivatives of a generator map at a state.
#[derive(Clone, Debug, PartialEq)]
pub struct GeneratorDerivative<T> {
    /// The transformed state.
    pub image: TransformedState<T>,
    /// `jacobian[a][b] = d(out_a)/d(in_b)` in the order `(q1, p1, q2, p2, q3, p3)`.
    pub jacobian: [[T; 6]; 6],
    /// Explicit `s`-derivative of each output coordinate.
    pub ds: [T; 6],
}

/// Runs the generator over dual numbers seeded in the six phase variables
/// and `s`; parameters are constants.
pub fn generator_derivative<T: Scalar>(
    g: Generator,
    st: &TransformedState<T>,
    opts: &BacklundOptions,
) -> Result<GeneratorDerivative<T>> {
    let mut point: PhasePoint<Dual<T, 7>> = st.point.seed_phase::<7>();
    point.s = Dual::variable(st.point.s.clone(), 6);
    let lifted = TransformedState {
        point,
        params: st.params.map(|a| Dual::constant(a.clone())),
    };
    let out = apply_generator(g, &lifted, opts)?;
    let coords = out.point.coords();
    Ok(GeneratorDerivative {
        image: TransformedState {
            point: PhasePoint::from_coords(&coords.clone().map(|c| c.re), out.point.s.re.clone()),
            params: apply_generator_params(g, &st.params),
        },
        jacobian: std::array::from_fn(|a| std::array::from_fn(|b| coords[a].eps[b].clone())),
        ds: std::array::from_fn(|a| coords[a].eps[6].clone()),
    })
}

/// The canonical structure matrix `Omega[a][b] = {x_a, x_b}` in the order
/// `(q1, p1, q2, p2, q3, p3)`.
pub fn symplectic_form<T: Scalar>() -> [[T; 6]; 6] {
    std::array::from_fn(|a| {
        std::array::from_fn(|b| {
            if a / 2 != b / 2 || a == b {
                T::zero()
            } else if a % 2 == 0 {
                -T::one()
            } else {
                T::one()
            }
        })
    })
}

/// `J^T Omega J`.
pub fn pullback_form<T: Scalar>(j: &[[T; 6]; 6]) -> [[T; 6]; 6] {
    let omega = symplectic_form::<T>();
    std::array::from_fn(|a| {
        std::array::from_fn(|b| {
            let mut acc = T::zero();
            for c in 0..6 {
                for d in 0..6 {
                    if !omega[c][d].is_zero() && !j[c][a].is_zero() && !j[d][b].is_zero() {
                        acc = acc + j[c][a].clone() * omega[c][d].clone() * j[d][b].clone();
                    }
                }
            }
            acc
        })
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;
    use crate::weyl::{normalization, reflect_params};

    fn q(n: i64, d: i64) -> Rational {
        Rational::from_ratio(n, d)
    }

    fn state() -> TransformedState<Rational> {
        TransformedState::new(
            PhasePoint::new(
                [q(2, 3), q(-5, 4), q(7, 2)],
                [q(1, 6), q(-3, 5), q(9, 7)],
                q(3, 8),
            ),
            ParameterVector::normalized_from([
                q(3, 5),
                q(-2, 7),
                q(1, 9),
                q(0, 1),
                q(4, 11),
                q(-5, 3),
                q(2, 13),
            ]),
        )
    }

    fn opts() -> BacklundOptions {
        BacklundOptions::default()
    }

    #[test]
    fn phi_at_unit_q_and_zero_p() {
        let z = PhasePoint::new(
            [q(1, 1), q(1, 1), q(1, 1)],
            [q(0, 1), q(0, 1), q(0, 1)],
            q(2, 5),
        );
        let f = phi(&z);
        for j in [0, 1, 2, 4, 5, 6] {
            assert!(f.0[j].is_zero(), "phi{j}");
        }
        assert_eq!(f.0[3], q(3, 5));
    }

    #[test]
    fn phi3_is_determined_by_the_rest() {
        let z = state().point;
        let f = phi(&z);
        let one = q(1, 1);
        let rebuilt = (f.0[1].clone() + one.clone())
            * (f.0[5].clone() + one.clone())
            * (f.0[0].clone() + one)
            - z.s.clone();
        assert_eq!(f.0[3], rebuilt);
    }

    #[test]
    fn phi_bracket_values() {
        let z = state().point;
        assert_eq!(poisson_phi(2, 1, &z), q(1, 1));
        assert!(poisson_phi(1, 5, &z).is_zero());
        assert_eq!(poisson_phi(3, 2, &z), -(z.q[1].clone() * z.q[2].clone()));
        assert_eq!(poisson_phi(2, 3, &z), z.q[1].clone() * z.q[2].clone());
        for i in 0..RANK {
            for j in 0..RANK {
                assert_eq!(poisson_phi(i, j, &z), -poisson_phi(j, i, &z));
            }
        }
    }

    #[test]
    fn r2_shifts_q1_only() {
        let st = state();
        let out = apply_reflection(2, &st, &opts()).unwrap();
        let (z, w) = (&st.point, &out.point);
        let a2 = st.params.0[2].clone();
        assert_eq!(w.q[0], z.q[0].clone() + a2.clone() / z.p[0].clone());
        assert_eq!(w.p, z.p);
        assert_eq!(w.q[1..], z.q[1..]);
        assert_eq!(w.s, z.s);
        let phi3 = reflected_phi(2, &st, &opts()).unwrap().0[3].clone();
        let expect = phi_component(3, z) + a2 / z.p[0].clone() * z.q[1].clone() * z.q[2].clone();
        assert_eq!(phi3, expect);
        assert_eq!(phi_component(3, w), expect);
    }

    #[test]
    fn r3_moves_momenta_only() {
        let st = state();
        let out = apply_reflection(3, &st, &opts()).unwrap();
        let (z, w) = (&st.point, &out.point);
        let a3 = st.params.0[3].clone();
        let phi3 = phi_component(3, z);
        assert_eq!(w.q, z.q);
        let partial = [
            z.q[1].clone() * z.q[2].clone(),
            z.q[0].clone() * z.q[2].clone(),
            z.q[0].clone() * z.q[1].clone(),
        ];
        for (i, d) in partial.iter().enumerate() {
            assert_eq!(
                w.p[i],
                z.p[i].clone() - a3.clone() * d.clone() / phi3.clone()
            );
        }
    }

    #[test]
    fn zero_parameter_gives_identity() {
        let mut st = state();
        st.params.0[5] = q(0, 1);
        let out = apply_reflection(5, &st, &opts()).unwrap();
        assert_eq!(out.point, st.point);
        assert_eq!(out.params, reflect_params(5, &st.params));
    }

    #[test]
    fn singular_reflection_is_reported() {
        let mut st = state();
        st.point.p[0] = q(0, 1);
        let err = apply_reflection(2, &st, &opts()).unwrap_err();
        assert!(matches!(
            err,
            Error::SingularTransformation { phi_index: 2, .. }
        ));
        let w: WeylWord = "pi1,r2".parse().unwrap();
        // pi1 moves p1 into p3, so r2 now sees the generic old p3.
        assert!(apply_word(&w, &st, &opts()).is_ok());
        let w: WeylWord = "r0,r2".parse().unwrap();
        match apply_word(&w, &st, &opts()).unwrap_err() {
            Error::SingularTransformation { step, .. } => assert_eq!(step, Some(1)),
            e => panic!("unexpected {e:?}"),
        }
    }

    #[test]
    fn float_threshold() {
        let st = state().map(crate::scalar::rational_to_f64);
        let mut near = st.clone();
        near.point.p[0] = 1e-14;
        assert!(apply_reflection(2, &near, &opts()).is_err());
        assert!(apply_reflection(2, &near, &BacklundOptions { threshold: 1e-16 }).is_ok());
    }

    #[test]
    fn pi1_swaps_first_and_third_pairs() {
        let st = state();
        let out = apply_automorphism(1, &st);
        let (z, w) = (&st.point, &out.point);
        assert_eq!(w.q, [z.q[2].clone(), z.q[1].clone(), z.q[0].clone()]);
        assert_eq!(w.p, [z.p[2].clone(), z.p[1].clone(), z.p[0].clone()]);
        assert_eq!(phi_component(3, w), phi_component(3, z));
    }

    #[test]
    fn pi2_swaps_second_and_third_pairs() {
        let st = state();
        let out = apply_automorphism(2, &st);
        let (z, w) = (&st.point, &out.point);
        assert_eq!(w.q, [z.q[0].clone(), z.q[2].clone(), z.q[1].clone()]);
        assert_eq!(w.p, [z.p[0].clone(), z.p[2].clone(), z.p[1].clone()]);
        assert_eq!(apply_automorphism(2, &out), st);
    }

    #[test]
    fn words() {
        let st = state();
        assert_eq!(apply_word(&WeylWord::default(), &st, &opts()).unwrap(), st);
        for i in 0..RANK {
            let w = WeylWord(vec![Generator::Reflection(i as u8); 2]);
            assert_eq!(apply_word(&w, &st, &opts()).unwrap(), st, "r{i}^2");
        }
        let a: WeylWord = "pi1,pi2,pi1".parse().unwrap();
        let b: WeylWord = "pi2,pi1,pi2".parse().unwrap();
        assert_eq!(
            apply_word(&a, &st, &opts()).unwrap(),
            apply_word(&b, &st, &opts()).unwrap()
        );
    }

    #[test]
    fn phi3_coherence_for_every_reflection() {
        let st = state();
        for i in 0..RANK {
            let new_phi = reflected_phi(i, &st, &opts()).unwrap();
            let w = reconstruct(&new_phi, st.point.s.clone());
            assert_eq!(phi_component(3, &w), new_phi.0[3], "r{i}");
        }
    }

    #[test]
    fn parameters_stay_normalized() {
        let st = state();
        for g in Generator::all() {
            let out = apply_generator(g, &st, &opts()).unwrap();
            assert_eq!(normalization(&out.params), q(1, 1));
        }
    }

    #[test]
    fn jacobians_are_symplectic() {
        let st = state();
        let omega = symplectic_form::<Rational>();
        for g in Generator::all() {
            let d = generator_derivative(g, &st, &opts()).unwrap();
            assert_eq!(pullback_form(&d.jacobian), omega, "{g}");
            assert_eq!(d.image, apply_generator(g, &st, &opts()).unwrap());
        }
    }

    #[test]
    fn only_r3_depends_on_s() {
        let st = state();
        for g in Generator::all() {
            let d = generator_derivative(g, &st, &opts()).unwrap();
            let explicit = d.ds.iter().any(|x| !x.is_zero());
            assert_eq!(explicit, g == Generator::Reflection(3), "{g}");
        }
    }
}
