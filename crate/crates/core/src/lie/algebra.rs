//! The affine algebra realized as the centrally extended loop algebra
//! `E6 ⊗ C[t, 1/t] ⊕ CK ⊕ Cd`, truncated to loop degrees `|n| <= N`.
//!
//! The finite part uses the Frenkel-Kac basis: root vectors `E_a` with
//! `[E_a, E_b] = eps(a, b) E_{a+b}`, `[E_a, E_{-a}] = -h_a`, and invariant
//! form `(E_a | E_{-a}) = -1`, where `eps` is the bimultiplicative sign on
//! the root lattice fixed by the node order. Chevalley generators are then
//! `e_i = E_{a_i}`, `f_i = -E_{-a_i}` for `i = 1..6`, and
//! `e_0 = -E_{-theta} t`, `f_0 = E_theta t^{-1}`, `alpha_0^v = K - h_theta`.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_traits::{One, Zero};

use super::roots::{add, inner, neg, simple_root, Root, RootSystem, FINITE_CARTAN, FINITE_RANK};
use crate::error::{Error, Result};
use crate::scalar::Rational;

pub const DEFAULT_TRUNCATION: i32 = 3;

pub(crate) fn int(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Basis {
    /// `E_root ⊗ t^n`
    Root {
        root: Root,
        n: i32,
    },
    /// `h_i ⊗ t^n` for finite node `i` in `1..=6`
    Coroot {
        i: usize,
        n: i32,
    },
    Central,
    Derivation,
}

impl Basis {
    pub fn loop_degree(&self) -> i32 {
        match *self {
            Basis::Root { n, .. } | Basis::Coroot { n, .. } => n,
            Basis::Central | Basis::Derivation => 0,
        }
    }
}

/// Sparse linear combination of basis elements with nonzero rational
/// coefficients.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct LieElement {
    terms: BTreeMap<Basis, Rational>,
}

impl LieElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn basis(b: Basis) -> Self {
        Self::term(b, Rational::one())
    }

    pub fn term(b: Basis, c: Rational) -> Self {
        let mut x = Self::zero();
        x.add_term(b, c);
        x
    }

    pub fn add_term(&mut self, b: Basis, c: Rational) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(b).or_insert_with(Rational::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&b);
        }
    }

    pub fn coeff(&self, b: &Basis) -> Rational {
        self.terms.get(b).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Basis, &Rational)> {
        self.terms.iter()
    }

    pub fn scale(&self, c: &Rational) -> Self {
        let mut out = Self::zero();
        for (b, x) in &self.terms {
            out.add_term(*b, x.clone() * c.clone());
        }
        out
    }

    pub fn plus(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (b, x) in &other.terms {
            out.add_term(*b, x.clone());
        }
        out
    }

    pub fn minus(&self, other: &Self) -> Self {
        self.plus(&other.scale(&-Rational::one()))
    }

    /// Same element with the `K` component dropped.
    pub fn without_central(&self) -> Self {
        let mut out = self.clone();
        out.terms.remove(&Basis::Central);
        out
    }

    /// Text dump, one line per term:
    /// `(root=[c1,..,c6], n=k) coeff`, `(coroot=i, n=k) coeff`, `K coeff`, `d coeff`.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for (b, c) in &self.terms {
            match b {
                Basis::Root { root, n } => {
                    let coords: Vec<String> = root.iter().map(ToString::to_string).collect();
                    let _ = writeln!(out, "(root=[{}], n={n}) {c}", coords.join(","));
                }
                Basis::Coroot { i, n } => {
                    let _ = writeln!(out, "(coroot={i}, n={n}) {c}");
                }
                Basis::Central => {
                    let _ = writeln!(out, "K {c}");
                }
                Basis::Derivation => {
                    let _ = writeln!(out, "d {c}");
                }
            }
        }
        out
    }
}

/// Bracket, invariant form and Chevalley generators of the truncated
/// affine algebra.
#[derive(Clone, Debug)]
pub struct AffineE6 {
    roots: RootSystem,
    truncation: i32,
}

impl Default for AffineE6 {
    fn default() -> Self {
        Self::new(DEFAULT_TRUNCATION)
    }
}

impl AffineE6 {
    pub fn new(truncation: i32) -> Self {
        AffineE6 {
            roots: RootSystem::e6(),
            truncation,
        }
    }

    pub fn roots(&self) -> &RootSystem {
        &self.roots
    }

    pub fn truncation(&self) -> i32 {
        self.truncation
    }

    /// Dimension of the finite algebra: roots plus Cartan.
    pub fn finite_dimension(&self) -> usize {
        self.roots.len() + FINITE_RANK
    }

    /// `eps(a, b) = (-1)^(sum_ij a_i b_j M_ij)` with `M_ii = 1` and
    /// `M_ij = 1` for `i < j` adjacent.
    pub fn epsilon(a: &Root, b: &Root) -> i32 {
        let mut parity = 0;
        for i in 0..FINITE_RANK {
            for j in i..FINITE_RANK {
                if i == j || FINITE_CARTAN[i][j] == -1 {
                    parity += a[i] * b[j];
                }
            }
        }
        if parity.rem_euclid(2) == 0 {
            1
        } else {
            -1
        }
    }

    fn check_degree(&self, n: i32) -> Result<i32> {
        if n.abs() > self.truncation {
            Err(Error::TruncationOverflow {
                degree: n,
                max: self.truncation,
            })
        } else {
            Ok(n)
        }
    }

    /// `h_a` for a root `a`, as a combination of the `h_i`.
    fn coroot_of(root: &Root, n: i32, c: &Rational, out: &mut LieElement) {
        for (k, &x) in root.iter().enumerate() {
            if x != 0 {
                out.add_term(Basis::Coroot { i: k + 1, n }, c.clone() * int(i64::from(x)));
            }
        }
    }

    pub fn bracket_basis(&self, x: &Basis, y: &Basis) -> Result<LieElement> {
        use Basis::*;
        let mut out = LieElement::zero();
        match (*x, *y) {
            (Central, _) | (_, Central) | (Derivation, Derivation) => {}
            (Derivation, b) => {
                let n = b.loop_degree();
                out.add_term(b, int(i64::from(n)));
            }
            (_, Derivation) => return Ok(self.bracket_basis(y, x)?.scale(&-Rational::one())),
            (Coroot { i, n: m }, Coroot { i: j, n }) => {
                if m + n == 0 && m != 0 {
                    let form = i64::from(FINITE_CARTAN[i - 1][j - 1]);
                    out.add_term(Central, int(i64::from(m) * form));
                }
            }
            (Coroot { i, n: m }, Root { root, n }) => {
                let deg = self.check_degree(m + n)?;
                let pairing = inner(&simple_root(i - 1), &root);
                out.add_term(Root { root, n: deg }, int(i64::from(pairing)));
            }
            (Root { .. }, Coroot { .. }) => {
                return Ok(self.bracket_basis(y, x)?.scale(&-Rational::one()))
            }
            (Root { root: a, n: m }, Root { root: b, n }) => {
                let sum = add(&a, &b);
                if sum.iter().all(|&c| c == 0) {
                    let deg = self.check_degree(m + n)?;
                    Self::coroot_of(&a, deg, &-Rational::one(), &mut out);
                    if deg == 0 && m != 0 {
                        // m * (E_a | E_{-a}) K
                        out.add_term(Central, int(-i64::from(m)));
                    }
                } else if self.roots.is_root(&sum) {
                    let deg = self.check_degree(m + n)?;
                    out.add_term(
                        Root { root: sum, n: deg },
                        int(i64::from(Self::epsilon(&a, &b))),
                    );
                }
            }
        }
        Ok(out)
    }

    pub fn bracket(&self, x: &LieElement, y: &LieElement) -> Result<LieElement> {
        let mut out = LieElement::zero();
        for (bx, cx) in x.terms() {
            for (by, cy) in y.terms() {
                let part = self.bracket_basis(bx, by)?;
                let c = cx.clone() * cy.clone();
                for (b, v) in part.terms() {
                    out.add_term(*b, v.clone() * c.clone());
                }
            }
        }
        Ok(out)
    }

    fn form_basis(x: &Basis, y: &Basis) -> Rational {
        use Basis::*;
        match (*x, *y) {
            (Central, Derivation) | (Derivation, Central) => Rational::one(),
            (Coroot { i, n: m }, Coroot { i: j, n }) if m + n == 0 => {
                int(i64::from(FINITE_CARTAN[i - 1][j - 1]))
            }
            (Root { root: a, n: m }, Root { root: b, n }) if m + n == 0 && a == neg(&b) => {
                -Rational::one()
            }
            _ => Rational::zero(),
        }
    }

    /// Normalized invariant bilinear form.
    pub fn form(&self, x: &LieElement, y: &LieElement) -> Rational {
        let mut acc = Rational::zero();
        for (bx, cx) in x.terms() {
            for (by, cy) in y.terms() {
                let f = Self::form_basis(bx, by);
                if !f.is_zero() {
                    acc += f * cx.clone() * cy.clone();
                }
            }
        }
        acc
    }

    pub fn central(&self) -> LieElement {
        LieElement::basis(Basis::Central)
    }

    pub fn derivation(&self) -> LieElement {
        LieElement::basis(Basis::Derivation)
    }

    /// Chevalley generator `e_i`, `i = 0..6`.
    pub fn e(&self, i: usize) -> LieElement {
        assert!(i <= FINITE_RANK, "node {i} out of range");
        if i == 0 {
            let theta = self.roots.highest_root();
            LieElement::term(
                Basis::Root {
                    root: neg(&theta),
                    n: 1,
                },
                -Rational::one(),
            )
        } else {
            LieElement::basis(Basis::Root {
                root: simple_root(i - 1),
                n: 0,
            })
        }
    }

    /// Chevalley generator `f_i`, `i = 0..6`.
    pub fn f(&self, i: usize) -> LieElement {
        assert!(i <= FINITE_RANK, "node {i} out of range");
        if i == 0 {
            LieElement::basis(Basis::Root {
                root: self.roots.highest_root(),
                n: -1,
            })
        } else {
            LieElement::term(
                Basis::Root {
                    root: neg(&simple_root(i - 1)),
                    n: 0,
                },
                -Rational::one(),
            )
        }
    }

    /// Simple coroot `alpha_i^v`, `i = 0..6`.
    pub fn coroot(&self, i: usize) -> LieElement {
        assert!(i <= FINITE_RANK, "node {i} out of range");
        if i == 0 {
            let mut out = self.central();
            Self::coroot_of(&self.roots.highest_root(), 0, &-Rational::one(), &mut out);
            out
        } else {
            LieElement::basis(Basis::Coroot { i, n: 0 })
        }
    }

    /// `e_{i1 i2 ... in j} = ad e_{i1} ad e_{i2} ... ad e_{in} (e_j)`.
    pub fn nested_e(&self, nodes: &[usize]) -> Result<LieElement> {
        let (&last, rest) = nodes
            .split_last()
            .ok_or_else(|| Error::InvalidConfig("empty nested bracket".into()))?;
        let mut acc = self.e(last);
        for &i in rest.iter().rev() {
            acc = self.bracket(&self.e(i), &acc)?;
        }
        Ok(acc)
    }

    /// Every basis element with loop degree inside the truncation.
    pub fn truncated_basis(&self) -> Vec<Basis> {
        let mut out = Vec::new();
        for n in -self.truncation..=self.truncation {
            for r in self.roots.roots() {
                out.push(Basis::Root { root: *r, n });
            }
            for i in 1..=FINITE_RANK {
                out.push(Basis::Coroot { i, n });
            }
        }
        out.push(Basis::Central);
        out.push(Basis::Derivation);
        out
    }
}
