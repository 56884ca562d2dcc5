//! The (1,1,0,1,0,1,0) gradation, the grade-one elements `Λ1`, `Λ2` and
//! the graded centralizer of `Λ1`.

use num_traits::Zero;

use super::algebra::{int, AffineE6, Basis, LieElement};
use super::linalg;
use super::roots::FINITE_RANK;
use crate::error::{Error, Result};
use crate::scalar::Rational;
use crate::verify::{Counterexample, VerificationReport};

/// Target values `(ϑ | α_i^v)` for `i = 0..6`.
pub const GRADATION_TYPE: [i64; 7] = [1, 1, 0, 1, 0, 1, 0];

/// Expected centralizer dimensions in grades 1..=5.
pub const CENTRALIZER_DIMS: [usize; 5] = [2, 1, 0, 1, 2];

/// `(coefficient, nested word)` terms of `Λ1`.
pub const LAMBDA1_TERMS: &[(i64, &[usize])] = &[
    (1, &[1]),
    (2, &[3]),
    (1, &[5]),
    (1, &[2, 1]),
    (1, &[6, 0]),
    (1, &[2, 3]),
    (1, &[4, 3]),
    (1, &[6, 3]),
    (1, &[2, 3, 4]),
    (1, &[2, 3, 6]),
    (1, &[4, 3, 6]),
    (2, &[6, 2, 3, 4]),
];

pub const LAMBDA2_TERMS: &[(i64, &[usize])] = &[
    (2, &[0]),
    (-2, &[3]),
    (-2, &[5]),
    (-2, &[2, 1]),
    (-2, &[4, 5]),
    (2, &[2, 3]),
    (2, &[4, 3]),
    (-7, &[6, 3]),
    (-4, &[2, 3, 4]),
    (5, &[2, 3, 6]),
    (-4, &[4, 3, 6]),
    (-2, &[6, 2, 3, 4]),
];

/// Cartan element ϑ with zero `K` component.
#[derive(Clone, Debug, PartialEq)]
pub struct GradationTheta {
    /// Coefficients of `h_1..h_6`.
    pub coroot: [Rational; FINITE_RANK],
    /// Coefficient of `d`.
    pub derivation: Rational,
}

impl GradationTheta {
    pub fn solve(alg: &AffineE6) -> Result<Self> {
        let mut unknowns: Vec<LieElement> = (1..=FINITE_RANK).map(|i| alg.coroot(i)).collect();
        unknowns.push(alg.derivation());
        let a: Vec<Vec<Rational>> = (0..=FINITE_RANK)
            .map(|j| {
                unknowns
                    .iter()
                    .map(|u| alg.form(u, &alg.coroot(j)))
                    .collect()
            })
            .collect();
        let b: Vec<Rational> = GRADATION_TYPE.iter().map(|&x| int(x)).collect();
        let x = linalg::solve(&a, &b)
            .ok_or_else(|| Error::InvalidConfig("gradation system is singular".into()))?;
        Ok(GradationTheta {
            coroot: std::array::from_fn(|i| x[i].clone()),
            derivation: x[FINITE_RANK].clone(),
        })
    }

    pub fn element(&self) -> LieElement {
        let mut out = LieElement::zero();
        for (i, c) in self.coroot.iter().enumerate() {
            out.add_term(Basis::Coroot { i: i + 1, n: 0 }, c.clone());
        }
        out.add_term(Basis::Derivation, self.derivation.clone());
        out
    }

    /// ad-ϑ eigenvalue of a basis element.
    pub fn eigenvalue(&self, b: &Basis) -> Rational {
        match *b {
            Basis::Root { root, n } => {
                let mut pairing = self.derivation.clone() * int(i64::from(n));
                for (i, c) in self.coroot.iter().enumerate() {
                    let p = super::roots::inner(&super::roots::simple_root(i), &root);
                    pairing += c.clone() * int(i64::from(p));
                }
                pairing
            }
            Basis::Coroot { n, .. } => self.derivation.clone() * int(i64::from(n)),
            Basis::Central | Basis::Derivation => Rational::zero(),
        }
    }

    /// Integer `k` with `[ϑ, x] = k x`.
    pub fn grade(&self, x: &LieElement) -> Result<i64> {
        let mut grade: Option<Rational> = None;
        for (b, _) in x.terms() {
            let k = self.eigenvalue(b);
            match &grade {
                None => grade = Some(k),
                Some(g) if *g == k => {}
                Some(_) => return Err(Error::NotHomogeneous),
            }
        }
        let g = grade.ok_or(Error::NotHomogeneous)?;
        if !g.is_integer() {
            return Err(Error::NotHomogeneous);
        }
        i64::try_from(g.to_integer()).map_err(|_| Error::NotHomogeneous)
    }
}

/// Gradation data together with the algebra it lives in.
#[derive(Clone, Debug)]
pub struct Gradation {
    pub alg: AffineE6,
    pub theta: GradationTheta,
}

impl Gradation {
    pub fn new(alg: AffineE6) -> Result<Self> {
        let theta = GradationTheta::solve(&alg)?;
        Ok(Gradation { alg, theta })
    }

    pub fn grade(&self, x: &LieElement) -> Result<i64> {
        self.theta.grade(x)
    }

    /// Basis of the grade-`k` subspace inside the truncation, `K` and `d`
    /// excluded.
    pub fn graded_basis(&self, k: i64) -> Vec<Basis> {
        let target = int(k);
        self.alg
            .truncated_basis()
            .into_iter()
            .filter(|b| !matches!(b, Basis::Central | Basis::Derivation))
            .filter(|b| self.theta.eigenvalue(b) == target)
            .collect()
    }

    pub fn combination(&self, terms: &[(i64, &[usize])]) -> Result<LieElement> {
        let mut out = LieElement::zero();
        for (c, word) in terms {
            out = out.plus(&self.alg.nested_e(word)?.scale(&int(*c)));
        }
        Ok(out)
    }

    /// Evaluates text such as `2e_0 - 7e_{63} + e_{6234}`; every digit of a
    /// subscript is one node.
    pub fn parse_combination(&self, text: &str) -> Result<LieElement> {
        let mut out = LieElement::zero();
        for (c, word) in parse_terms(text)? {
            out = out.plus(&self.alg.nested_e(&word)?.scale(&int(c)));
        }
        Ok(out)
    }

    pub fn lambda1(&self) -> Result<LieElement> {
        self.combination(LAMBDA1_TERMS)
    }

    pub fn lambda2(&self) -> Result<LieElement> {
        self.combination(LAMBDA2_TERMS)
    }

    /// `dim {x ∈ g_k : [x, y] ∈ CK}`.
    pub fn centralizer_dimension(&self, k: i64, y: &LieElement) -> Result<usize> {
        let basis = self.graded_basis(k);
        let images = basis
            .iter()
            .map(|b| {
                Ok(self
                    .alg
                    .bracket(&LieElement::basis(*b), y)?
                    .without_central())
            })
            .collect::<Result<Vec<_>>>()?;
        let mut rows: Vec<Basis> = images
            .iter()
            .flat_map(|e| e.terms().map(|(b, _)| *b))
            .collect();
        rows.sort();
        rows.dedup();
        let matrix: Vec<Vec<Rational>> = rows
            .iter()
            .map(|r| images.iter().map(|e| e.coeff(r)).collect())
            .collect();
        Ok(basis.len() - linalg::rank(matrix))
    }
}

fn parse_terms(text: &str) -> Result<Vec<(i64, Vec<usize>)>> {
    let bad = || Error::Parse(format!("bad linear combination: {text:?}"));
    let compact: String = text
        .chars()
        .filter(|c| !c.is_whitespace() && *c != '{' && *c != '}')
        .collect();
    let mut terms = Vec::new();
    let mut rest = compact.as_str();
    while !rest.is_empty() {
        let (sign, body) = match rest.as_bytes()[0] {
            b'+' => (1, &rest[1..]),
            b'-' => (-1, &rest[1..]),
            _ if terms.is_empty() => (1, rest),
            _ => return Err(bad()),
        };
        let e = body.find('e').ok_or_else(bad)?;
        let coeff: i64 = if e == 0 {
            1
        } else {
            body[..e].parse().map_err(|_| bad())?
        };
        let after = body[e + 1..].strip_prefix('_').ok_or_else(bad)?;
        let len = after
            .find(|c: char| !c.is_ascii_digit())
            .unwrap_or(after.len());
        if len == 0 {
            return Err(bad());
        }
        let word = after[..len]
            .bytes()
            .map(|b| usize::from(b - b'0'))
            .collect();
        terms.push((sign * coeff, word));
        rest = &after[len..];
    }
    Ok(terms)
}

fn failure(note: String, lhs: Vec<String>, rhs: Vec<String>) -> VerificationReport {
    VerificationReport {
        claim: "heisenberg".into(),
        pass: false,
        trials: 1,
        seed: 0,
        counterexample: Some(Counterexample {
            trial: 0,
            state: None,
            lhs,
            rhs,
            note,
        }),
    }
}

/// Checks `[Λ1, Λ2] = 0` and the centralizer dimensions of `Λ1` in grades 1..=5.
pub fn check_heisenberg() -> Result<VerificationReport> {
    let grad = Gradation::new(AffineE6::default())?;
    let l1 = grad.lambda1()?;
    let l2 = grad.lambda2()?;
    for (name, x) in [("Lambda1", &l1), ("Lambda2", &l2)] {
        match grad.grade(x) {
            Ok(1) => {}
            Ok(k) => {
                return Ok(failure(
                    format!("grade({name}) = {k}"),
                    vec![k.to_string()],
                    vec!["1".into()],
                ))
            }
            Err(e) => {
                return Ok(failure(
                    format!("grade({name}): {e}"),
                    vec![],
                    vec!["1".into()],
                ))
            }
        }
    }
    let comm = grad.alg.bracket(&l1, &l2)?;
    if !comm.is_zero() {
        return Ok(failure(
            "[Lambda1, Lambda2] != 0".into(),
            comm.dump().lines().map(String::from).collect(),
            vec!["0".into()],
        ));
    }
    for (k, &expected) in (1..).zip(CENTRALIZER_DIMS.iter()) {
        let dim = grad.centralizer_dimension(k, &l1)?;
        if dim != expected {
            return Ok(failure(
                format!("centralizer of Lambda1 in grade {k} has dimension {dim}"),
                vec![dim.to_string()],
                vec![expected.to_string()],
            ));
        }
    }
    Ok(VerificationReport {
        claim: "heisenberg".into(),
        pass: true,
        trials: 1,
        seed: 0,
        counterexample: None,
    })
}
