//! The extended affine Weyl group of type E6(1) acting linearly on the
//! simple-root parameters.
//!
//! Node numbering: 1-2-3-4-5 is the long chain, 6 hangs off 3, and the
//! affine node 0 hangs off 6.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

pub const RANK: usize = 7;

/// Coefficients of the null root (equivalently of the canonical central
/// element) on the simple roots.
pub const MARKS: [i64; RANK] = [1, 1, 2, 3, 2, 1, 2];

/// Diagram automorphisms sigma_1 = (01)(26) and sigma_2 = (05)(46).
pub const SIGMA: [[usize; RANK]; 2] = [[1, 0, 6, 3, 4, 5, 2], [5, 1, 2, 3, 6, 0, 4]];

const CARTAN: [[i64; RANK]; RANK] = [
    [2, 0, 0, 0, 0, 0, -1],
    [0, 2, -1, 0, 0, 0, 0],
    [0, -1, 2, -1, 0, 0, 0],
    [0, 0, -1, 2, -1, 0, -1],
    [0, 0, 0, -1, 2, -1, 0],
    [0, 0, 0, 0, -1, 2, 0],
    [-1, 0, 0, -1, 0, 0, 2],
];

pub type IntMatrix = [[i64; RANK]; RANK];

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CartanMatrix(IntMatrix);

pub fn cartan_matrix() -> CartanMatrix {
    CartanMatrix(CARTAN)
}

impl CartanMatrix {
    pub fn entry(&self, i: usize, j: usize) -> i64 {
        self.0[i][j]
    }

    pub fn rows(&self) -> &IntMatrix {
        &self.0
    }

    pub fn is_symmetric(&self) -> bool {
        (0..RANK).all(|i| (0..RANK).all(|j| self.0[i][j] == self.0[j][i]))
    }

    /// `marks · A`, which vanishes for an affine matrix.
    pub fn marks_times_matrix(&self) -> [i64; RANK] {
        std::array::from_fn(|j| (0..RANK).map(|i| MARKS[i] * self.0[i][j]).sum())
    }
}

/// A generator of the extended affine Weyl group: a simple reflection
/// `r0..r6` or a diagram automorphism `pi1`, `pi2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Generator {
    Reflection(u8),
    Automorphism(u8),
}

impl Generator {
    pub fn reflection(i: usize) -> Result<Self> {
        if i < RANK {
            Ok(Generator::Reflection(i as u8))
        } else {
            Err(Error::InvalidGenerator(format!("r{i}")))
        }
    }

    pub fn automorphism(k: usize) -> Result<Self> {
        if k == 1 || k == 2 {
            Ok(Generator::Automorphism(k as u8))
        } else {
            Err(Error::InvalidGenerator(format!("pi{k}")))
        }
    }

    /// All nine generators in the order r0..r6, pi1, pi2.
    pub fn all() -> Vec<Generator> {
        (0..RANK as u8)
            .map(Generator::Reflection)
            .chain([Generator::Automorphism(1), Generator::Automorphism(2)])
            .collect()
    }

    /// Integer matrix `M` with `alpha' = M alpha`.
    pub fn matrix(self) -> IntMatrix {
        let mut m = [[0i64; RANK]; RANK];
        match self {
            Generator::Reflection(i) => {
                let i = i as usize;
                for j in 0..RANK {
                    m[j][j] = 1;
                    m[j][i] -= CARTAN[i][j];
                }
            }
            Generator::Automorphism(k) => {
                let sigma = &SIGMA[k as usize - 1];
                for j in 0..RANK {
                    m[j][sigma[j]] = 1;
                }
            }
        }
        m
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Generator::Reflection(i) => write!(f, "r{i}"),
            Generator::Automorphism(k) => write!(f, "pi{k}"),
        }
    }
}

impl FromStr for Generator {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        let bad = || Error::InvalidGenerator(t.to_string());
        if let Some(rest) = t.strip_prefix("pi") {
            Generator::automorphism(rest.parse().map_err(|_| bad())?)
        } else if let Some(rest) = t.strip_prefix('r') {
            Generator::reflection(rest.parse().map_err(|_| bad())?)
        } else {
            Err(bad())
        }
    }
}

/// A word in the generators. Words act on data left to right: `[g1, g2]`
/// applies `g1` first.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct WeylWord(pub Vec<Generator>);

impl WeylWord {
    pub fn new(symbols: Vec<Generator>) -> Self {
        WeylWord(symbols)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Generator> {
        self.0.iter()
    }

    /// Concatenation of `self` repeated `n` times.
    pub fn repeat(&self, n: usize) -> WeylWord {
        WeylWord(self.0.repeat(n))
    }

    /// Matrix of the whole word acting on parameters.
    pub fn matrix(&self) -> IntMatrix {
        self.0
            .iter()
            .fold(identity(), |acc, g| mat_mul(&g.matrix(), &acc))
    }
}

impl fmt::Display for WeylWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(ToString::to_string).collect();
        write!(f, "{}", parts.join(","))
    }
}

impl FromStr for WeylWord {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s.trim().is_empty() {
            return Ok(WeylWord::default());
        }
        s.split(',')
            .map(str::parse)
            .collect::<Result<Vec<_>>>()
            .map(WeylWord)
    }
}

pub fn identity() -> IntMatrix {
    std::array::from_fn(|i| std::array::from_fn(|j| i64::from(i == j)))
}

pub fn mat_mul(a: &IntMatrix, b: &IntMatrix) -> IntMatrix {
    std::array::from_fn(|i| std::array::from_fn(|j| (0..RANK).map(|k| a[i][k] * b[k][j]).sum()))
}

pub fn determinant(m: &IntMatrix) -> i64 {
    // Bareiss fraction-free elimination; exact for integer input.
    let mut a: Vec<Vec<i128>> = m
        .iter()
        .map(|r| r.iter().map(|&x| x as i128).collect())
        .collect();
    let n = RANK;
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n - 1 {
        if a[k][k] == 0 {
            match (k + 1..n).find(|&r| a[r][k] != 0) {
                Some(r) => {
                    a.swap(k, r);
                    sign = -sign;
                }
                None => return 0,
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
            }
        }
        prev = a[k][k];
    }
    (sign * a[n - 1][n - 1]) as i64
}

/// The seven parameters `alpha_0..alpha_6`.
#[derive(Clone, Debug, PartialEq)]
pub struct ParameterVector<T>(pub [T; RANK]);

impl<T: Scalar> ParameterVector<T> {
    pub fn new(alpha: [T; RANK]) -> Self {
        ParameterVector(alpha)
    }

    pub fn get(&self, i: usize) -> &T {
        &self.0[i]
    }

    pub fn map<U>(&self, f: impl Fn(&T) -> U) -> ParameterVector<U> {
        ParameterVector(std::array::from_fn(|i| f(&self.0[i])))
    }

    /// Solves the normalization for `alpha_3` given the other six entries.
    pub fn normalized_from(others: [T; RANK]) -> Self {
        let mut alpha = others;
        alpha[3] = T::zero();
        let rest = normalization(&ParameterVector(alpha.clone()));
        alpha[3] = (T::one() - rest) / T::from_i64(MARKS[3]);
        ParameterVector(alpha)
    }
}

/// `alpha_0 + alpha_1 + 2 alpha_2 + 3 alpha_3 + 2 alpha_4 + alpha_5 + 2 alpha_6`.
pub fn normalization<T: Scalar>(alpha: &ParameterVector<T>) -> T {
    alpha
        .0
        .iter()
        .zip(MARKS)
        .fold(T::zero(), |acc, (a, m)| acc + T::from_i64(m) * a.clone())
}

pub fn reflect_params<T: Scalar>(i: usize, alpha: &ParameterVector<T>) -> ParameterVector<T> {
    let ai = alpha.0[i].clone();
    ParameterVector(std::array::from_fn(|j| {
        alpha.0[j].clone() - T::from_i64(CARTAN[i][j]) * ai.clone()
    }))
}

pub fn automorphism_params<T: Scalar>(k: usize, alpha: &ParameterVector<T>) -> ParameterVector<T> {
    let sigma = &SIGMA[k - 1];
    ParameterVector(std::array::from_fn(|j| alpha.0[sigma[j]].clone()))
}

pub fn apply_generator_params<T: Scalar>(
    g: Generator,
    alpha: &ParameterVector<T>,
) -> ParameterVector<T> {
    match g {
        Generator::Reflection(i) => reflect_params(i as usize, alpha),
        Generator::Automorphism(k) => automorphism_params(k as usize, alpha),
    }
}

pub fn apply_word_params<T: Scalar>(
    w: &WeylWord,
    alpha: &ParameterVector<T>,
) -> ParameterVector<T> {
    w.iter()
        .fold(alpha.clone(), |acc, &g| apply_generator_params(g, &acc))
}

/// One defining relation of the extended group, stated as `lhs = rhs`
/// between words.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relation {
    /// r_i^2 = 1
    ReflectionInvolution(usize),
    /// (r_i r_j)^(2 - a_ij) = 1 for i < j
    Braid(usize, usize),
    /// pi_k^2 = 1
    AutomorphismInvolution(usize),
    /// (pi_1 pi_2)^3 = 1
    AutomorphismCube,
    /// pi_k r_j = r_{sigma_k(j)} pi_k
    Conjugation(usize, usize),
}

impl Relation {
    /// All 45 relations: 7 involutions, 21 braid relations, 2 + 1 for the
    /// automorphisms and 14 conjugations.
    pub fn all() -> Vec<Relation> {
        let mut out: Vec<Relation> = (0..RANK).map(Relation::ReflectionInvolution).collect();
        for i in 0..RANK {
            for j in i + 1..RANK {
                out.push(Relation::Braid(i, j));
            }
        }
        out.push(Relation::AutomorphismInvolution(1));
        out.push(Relation::AutomorphismInvolution(2));
        out.push(Relation::AutomorphismCube);
        for k in 1..=2 {
            for j in 0..RANK {
                out.push(Relation::Conjugation(k, j));
            }
        }
        out
    }

    pub fn words(&self) -> (WeylWord, WeylWord) {
        use Generator::{Automorphism as P, Reflection as R};
        let empty = WeylWord::default();
        match *self {
            Relation::ReflectionInvolution(i) => (WeylWord(vec![R(i as u8); 2]), empty),
            Relation::Braid(i, j) => {
                let order = (2 - CARTAN[i][j]) as usize;
                (WeylWord(vec![R(i as u8), R(j as u8)]).repeat(order), empty)
            }
            Relation::AutomorphismInvolution(k) => (WeylWord(vec![P(k as u8); 2]), empty),
            Relation::AutomorphismCube => (WeylWord(vec![P(1), P(2)]).repeat(3), empty),
            Relation::Conjugation(k, j) => (
                WeylWord(vec![P(k as u8), R(j as u8)]),
                WeylWord(vec![R(SIGMA[k - 1][j] as u8), P(k as u8)]),
            ),
        }
    }
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Relation::ReflectionInvolution(i) => write!(f, "r{i}^2=1"),
            Relation::Braid(i, j) => write!(f, "(r{i}r{j})^{}=1", 2 - CARTAN[i][j]),
            Relation::AutomorphismInvolution(k) => write!(f, "pi{k}^2=1"),
            Relation::AutomorphismCube => write!(f, "(pi1pi2)^3=1"),
            Relation::Conjugation(k, j) => write!(f, "pi{k}r{j}=r{}pi{k}", SIGMA[k - 1][j]),
        }
    }
}

/// Checks every relation as an exact integer matrix identity. Returns the
/// first failing relation, if any.
pub fn first_failing_matrix_relation() -> Option<Relation> {
    Relation::all().into_iter().find(|rel| {
        let (lhs, rhs) = rel.words();
        lhs.matrix() != rhs.matrix()
    })
}

/// Checks every relation exactly on the parameter matrices and on random
/// normalized rational parameter vectors.
pub fn verify_parameter_relations(
    cfg: &crate::verify::TrialConfig,
) -> Result<crate::verify::VerificationReport> {
    crate::verify::parameter_relations_report(cfg)
}
