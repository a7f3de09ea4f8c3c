//! Finite-dimensional Lie 2-algebras given by exact rational structure
//! constants, their morphisms and composition, and the correspondence with
//! Lie algebra crossed modules.
//!
//! A Lie 2-algebra is a two-term graded vector space `g = g_{-1} + g_0`
//! with a differential `l1 : g_{-1} -> g_0`, an antisymmetric pure bracket
//! `l2p` on `g_0`, a mixed bracket `l2m : g_{-1} x g_0 -> g_{-1}` stored
//! one-sided with `l2(x, a) = -l2m(a, x)`, and an alternating
//! `l3 : /\^3 g_0 -> g_{-1}`, subject to the six relations checked by
//! [`Lie2Algebra::verify_axioms`].
//!
//! Antisymmetric tensors are stored on strictly increasing index tuples;
//! accessors reconstruct arbitrary orderings with the permutation sign.
//! Verification reports carry the full symbolic defect vector for each
//! failing basis tuple, not just booleans.

use crate::linalg::{self, Mat};
use crate::ring::Rational;
use num_traits::{One, Zero};
use std::collections::BTreeMap;
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq, Clone)]
pub enum AlgebraError {
    #[error("unknown basis label '{0}'")]
    UnknownLabel(String),
    #[error("duplicate basis label '{0}'")]
    DuplicateLabel(String),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("{0}")]
    Invalid(String),
}

pub type QVec = Vec<Rational>;

pub(crate) fn zero_vec(n: usize) -> QVec {
    vec![Rational::zero(); n]
}

pub(crate) fn vec_add(a: &[Rational], b: &[Rational]) -> QVec {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub(crate) fn vec_sub(a: &[Rational], b: &[Rational]) -> QVec {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub(crate) fn vec_neg(a: &[Rational]) -> QVec {
    a.iter().map(|x| -x.clone()).collect()
}

pub(crate) fn vec_scale(a: &[Rational], c: &Rational) -> QVec {
    a.iter().map(|x| x * c).collect()
}

pub(crate) fn vec_is_zero(a: &[Rational]) -> bool {
    a.iter().all(|x| x.is_zero())
}

pub(crate) fn unit_vec(n: usize, i: usize) -> QVec {
    let mut v = zero_vec(n);
    v[i] = Rational::one();
    v
}

pub(crate) fn fmt_vec(a: &[Rational], labels: &[String]) -> String {
    let parts: Vec<String> = a
        .iter()
        .zip(labels)
        .filter(|(c, _)| !c.is_zero())
        .map(|(c, l)| {
            if c.is_one() {
                l.clone()
            } else {
                format!("{}*{}", c, l)
            }
        })
        .collect();
    if parts.is_empty() {
        "0".to_string()
    } else {
        parts.join(" + ")
    }
}

/// Sorted pair with sign; `None` on repeat.
pub(crate) fn pair_key(i: usize, j: usize) -> Option<((usize, usize), i32)> {
    match i.cmp(&j) {
        std::cmp::Ordering::Less => Some(((i, j), 1)),
        std::cmp::Ordering::Greater => Some(((j, i), -1)),
        std::cmp::Ordering::Equal => None,
    }
}

/// Sorted triple with sign; `None` on repeat.
pub(crate) fn triple_key(i: usize, j: usize, k: usize) -> Option<((usize, usize, usize), i32)> {
    let mut v = [i, j, k];
    let mut sign = 1i32;
    for a in 1..3 {
        let mut b = a;
        while b > 0 && v[b - 1] > v[b] {
            v.swap(b - 1, b);
            sign = -sign;
            b -= 1;
        }
    }
    if v[0] == v[1] || v[1] == v[2] {
        return None;
    }
    Some(((v[0], v[1], v[2]), sign))
}

/// A Lie 2-algebra by structure constants over the rationals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lie2Algebra {
    pub basis_m1: Vec<String>,
    pub basis_0: Vec<String>,
    /// `l1[a]` is the image in `g_0` coordinates of the a-th `g_{-1}` basis
    /// vector.
    l1: Vec<QVec>,
    /// `(i, j) -> l2p(x_i, x_j)` in `g_0` coordinates, `i < j`.
    l2p: BTreeMap<(usize, usize), QVec>,
    /// `(a, x) -> l2m(a_a, x_x)` in `g_{-1}` coordinates, stored with the
    /// `g_{-1}` argument first.
    l2m: BTreeMap<(usize, usize), QVec>,
    /// `(i, j, k) -> l3(x_i, x_j, x_k)` in `g_{-1}` coordinates, `i < j < k`.
    l3: BTreeMap<(usize, usize, usize), QVec>,
}

impl Lie2Algebra {
    pub fn new(basis_m1: Vec<String>, basis_0: Vec<String>) -> Result<Self, AlgebraError> {
        let mut seen = std::collections::BTreeSet::new();
        for l in basis_m1.iter().chain(basis_0.iter()) {
            if !seen.insert(l.clone()) {
                return Err(AlgebraError::DuplicateLabel(l.clone()));
            }
        }
        Ok(Lie2Algebra {
            l1: vec![zero_vec(basis_0.len()); basis_m1.len()],
            basis_m1,
            basis_0,
            l2p: BTreeMap::new(),
            l2m: BTreeMap::new(),
            l3: BTreeMap::new(),
        })
    }

    pub fn dim_m1(&self) -> usize {
        self.basis_m1.len()
    }

    pub fn dim_0(&self) -> usize {
        self.basis_0.len()
    }

    pub fn index_m1(&self, label: &str) -> Result<usize, AlgebraError> {
        self.basis_m1
            .iter()
            .position(|l| l == label)
            .ok_or_else(|| AlgebraError::UnknownLabel(label.to_string()))
    }

    pub fn index_0(&self, label: &str) -> Result<usize, AlgebraError> {
        self.basis_0
            .iter()
            .position(|l| l == label)
            .ok_or_else(|| AlgebraError::UnknownLabel(label.to_string()))
    }

    pub fn set_l1(&mut self, a: usize, image: QVec) -> Result<(), AlgebraError> {
        if image.len() != self.dim_0() {
            return Err(AlgebraError::Dimension("l1 image".into()));
        }
        self.l1[a] = image;
        Ok(())
    }

    pub fn set_l2p(&mut self, i: usize, j: usize, value: QVec) -> Result<(), AlgebraError> {
        if value.len() != self.dim_0() {
            return Err(AlgebraError::Dimension("l2p value".into()));
        }
        let Some((key, sign)) = pair_key(i, j) else {
            return Err(AlgebraError::Invalid("l2p on repeated index".into()));
        };
        let v = if sign < 0 { vec_neg(&value) } else { value };
        if vec_is_zero(&v) {
            self.l2p.remove(&key);
        } else {
            self.l2p.insert(key, v);
        }
        Ok(())
    }

    /// Set `l2m(a, x)`, the mixed bracket with the degree `-1` argument
    /// first.
    pub fn set_l2m(&mut self, a: usize, x: usize, value: QVec) -> Result<(), AlgebraError> {
        if value.len() != self.dim_m1() {
            return Err(AlgebraError::Dimension("l2m value".into()));
        }
        if vec_is_zero(&value) {
            self.l2m.remove(&(a, x));
        } else {
            self.l2m.insert((a, x), value);
        }
        Ok(())
    }

    pub fn set_l3(
        &mut self,
        i: usize,
        j: usize,
        k: usize,
        value: QVec,
    ) -> Result<(), AlgebraError> {
        if value.len() != self.dim_m1() {
            return Err(AlgebraError::Dimension("l3 value".into()));
        }
        let Some((key, sign)) = triple_key(i, j, k) else {
            return Err(AlgebraError::Invalid("l3 on repeated index".into()));
        };
        let v = if sign < 0 { vec_neg(&value) } else { value };
        if vec_is_zero(&v) {
            self.l3.remove(&key);
        } else {
            self.l3.insert(key, v);
        }
        Ok(())
    }

    /// `l1` applied to a `g_{-1}` coordinate vector.
    pub fn l1_of(&self, a: &[Rational]) -> QVec {
        let mut out = zero_vec(self.dim_0());
        for (idx, c) in a.iter().enumerate() {
            if !c.is_zero() {
                out = vec_add(&out, &vec_scale(&self.l1[idx], c));
            }
        }
        out
    }

    pub fn l1_column(&self, a: usize) -> &QVec {
        &self.l1[a]
    }

    /// Basis accessor for `l2p`, arbitrary index order.
    pub fn l2p_basis(&self, i: usize, j: usize) -> QVec {
        match pair_key(i, j) {
            None => zero_vec(self.dim_0()),
            Some((key, sign)) => match self.l2p.get(&key) {
                None => zero_vec(self.dim_0()),
                Some(v) if sign < 0 => vec_neg(v),
                Some(v) => v.clone(),
            },
        }
    }

    /// `l2p` on coordinate vectors.
    pub fn l2p_of(&self, x: &[Rational], y: &[Rational]) -> QVec {
        let mut out = zero_vec(self.dim_0());
        for (i, c1) in x.iter().enumerate() {
            if c1.is_zero() {
                continue;
            }
            for (j, c2) in y.iter().enumerate() {
                if c2.is_zero() {
                    continue;
                }
                out = vec_add(&out, &vec_scale(&self.l2p_basis(i, j), &(c1 * c2)));
            }
        }
        out
    }

    /// Basis accessor for `l2m(a, x)`.
    pub fn l2m_basis(&self, a: usize, x: usize) -> QVec {
        self.l2m
            .get(&(a, x))
            .cloned()
            .unwrap_or_else(|| zero_vec(self.dim_m1()))
    }

    /// `l2m(a, x)` on coordinate vectors, degree `-1` argument first.
    pub fn l2m_of(&self, a: &[Rational], x: &[Rational]) -> QVec {
        let mut out = zero_vec(self.dim_m1());
        for (ai, c1) in a.iter().enumerate() {
            if c1.is_zero() {
                continue;
            }
            for (xi, c2) in x.iter().enumerate() {
                if c2.is_zero() {
                    continue;
                }
                out = vec_add(&out, &vec_scale(&self.l2m_basis(ai, xi), &(c1 * c2)));
            }
        }
        out
    }

    /// Basis accessor for `l3`, arbitrary index order.
    pub fn l3_basis(&self, i: usize, j: usize, k: usize) -> QVec {
        match triple_key(i, j, k) {
            None => zero_vec(self.dim_m1()),
            Some((key, sign)) => match self.l3.get(&key) {
                None => zero_vec(self.dim_m1()),
                Some(v) if sign < 0 => vec_neg(v),
                Some(v) => v.clone(),
            },
        }
    }

    /// `l3` on coordinate vectors.
    pub fn l3_of(&self, x: &[Rational], y: &[Rational], z: &[Rational]) -> QVec {
        let mut out = zero_vec(self.dim_m1());
        for (i, c1) in x.iter().enumerate() {
            if c1.is_zero() {
                continue;
            }
            for (j, c2) in y.iter().enumerate() {
                if c2.is_zero() {
                    continue;
                }
                for (k, c3) in z.iter().enumerate() {
                    if c3.is_zero() {
                        continue;
                    }
                    let c = c1 * c2 * c3;
                    out = vec_add(&out, &vec_scale(&self.l3_basis(i, j, k), &c));
                }
            }
        }
        out
    }

    /// Matrix of `l1`, columns indexed by the `g_{-1}` basis.
    pub fn l1_matrix(&self) -> Mat {
        if self.dim_m1() == 0 {
            Mat::zeros(self.dim_0(), 0)
        } else {
            Mat::from_cols(self.l1.clone())
        }
    }

    pub(crate) fn unit_m1(&self, a: usize) -> QVec {
        unit_vec(self.dim_m1(), a)
    }

    pub(crate) fn unit_0(&self, i: usize) -> QVec {
        unit_vec(self.dim_0(), i)
    }

    pub fn l1_is_zero(&self) -> bool {
        self.l1.iter().all(|v| vec_is_zero(v))
    }

    pub fn l2_is_zero(&self) -> bool {
        self.l2p.is_empty() && self.l2m.is_empty()
    }

    pub fn l3_is_zero(&self) -> bool {
        self.l3.is_empty()
    }

    pub fn l2p_entries(&self) -> impl Iterator<Item = (&(usize, usize), &QVec)> {
        self.l2p.iter()
    }

    pub fn l2m_entries(&self) -> impl Iterator<Item = (&(usize, usize), &QVec)> {
        self.l2m.iter()
    }

    pub fn l3_entries(&self) -> impl Iterator<Item = (&(usize, usize, usize), &QVec)> {
        self.l3.iter()
    }

    /// Check the six defining relations on all basis tuples, reporting the
    /// symbolic defect vector for every failure.
    pub fn verify_axioms(&self) -> AxiomReport {
        let mut report = AxiomReport::new(&["R1", "R2", "R3", "R4", "R5", "R6"]);
        let n0 = self.dim_0();
        let nm = self.dim_m1();

        // R1: l1 vanishes on degree 0; structural in this encoding.

        // R2: l1(l2(x, a)) = l2p(x, l1(a)), with l2(x, a) = -l2m(a, x).
        for x in 0..n0 {
            for a in 0..nm {
                let lhs = vec_neg(&self.l1_of(&self.l2m_basis(a, x)));
                let rhs = self.l2p_of(&self.unit_0(x), &self.l1[a]);
                let defect = vec_sub(&lhs, &rhs);
                if !vec_is_zero(&defect) {
                    report.fail(
                        "R2",
                        format!("({}, {})", self.basis_0[x], self.basis_m1[a]),
                        fmt_vec(&defect, &self.basis_0),
                    );
                }
            }
        }

        // R3: l2(l1(a), b) = l2(a, l1(b)); -l2m(b, l1 a) = l2m(a, l1 b).
        for a in 0..nm {
            for b in a..nm {
                let lhs = vec_neg(&self.l2m_of(&self.unit_m1(b), &self.l1[a]));
                let rhs = self.l2m_of(&self.unit_m1(a), &self.l1[b]);
                let defect = vec_sub(&lhs, &rhs);
                if !vec_is_zero(&defect) {
                    report.fail(
                        "R3",
                        format!("({}, {})", self.basis_m1[a], self.basis_m1[b]),
                        fmt_vec(&defect, &self.basis_m1),
                    );
                }
            }
        }

        // R4: l1(l3(x,y,z)) + l2(l2(x,y),z) + l2(l2(y,z),x) + l2(l2(z,x),y) = 0.
        for x in 0..n0 {
            for y in x + 1..n0 {
                for z in y + 1..n0 {
                    let mut defect = self.l1_of(&self.l3_basis(x, y, z));
                    defect = vec_add(
                        &defect,
                        &self.l2p_of(&self.l2p_basis(x, y), &self.unit_0(z)),
                    );
                    defect = vec_add(
                        &defect,
                        &self.l2p_of(&self.l2p_basis(y, z), &self.unit_0(x)),
                    );
                    defect = vec_add(
                        &defect,
                        &self.l2p_of(&self.l2p_basis(z, x), &self.unit_0(y)),
                    );
                    if !vec_is_zero(&defect) {
                        report.fail(
                            "R4",
                            format!(
                                "({}, {}, {})",
                                self.basis_0[x], self.basis_0[y], self.basis_0[z]
                            ),
                            fmt_vec(&defect, &self.basis_0),
                        );
                    }
                }
            }
        }

        // R5: l3(l1(a),x,y) - l2m(a, l2p(x,y)) - l2m(l2m(a,y), x)
        //     + l2m(l2m(a,x), y) = 0.
        for a in 0..nm {
            for x in 0..n0 {
                for y in x + 1..n0 {
                    let ua = self.unit_m1(a);
                    let mut defect = self.l3_of(&self.l1[a], &self.unit_0(x), &self.unit_0(y));
                    defect = vec_sub(&defect, &self.l2m_of(&ua, &self.l2p_basis(x, y)));
                    defect = vec_sub(
                        &defect,
                        &self.l2m_of(&self.l2m_basis(a, y), &self.unit_0(x)),
                    );
                    defect = vec_add(
                        &defect,
                        &self.l2m_of(&self.l2m_basis(a, x), &self.unit_0(y)),
                    );
                    if !vec_is_zero(&defect) {
                        report.fail(
                            "R5",
                            format!(
                                "({}; {}, {})",
                                self.basis_m1[a], self.basis_0[x], self.basis_0[y]
                            ),
                            fmt_vec(&defect, &self.basis_m1),
                        );
                    }
                }
            }
        }

        // R6 on strictly increasing 4-tuples (both sides are alternating).
        for x in 0..n0 {
            for y in x + 1..n0 {
                for z in y + 1..n0 {
                    for t in z + 1..n0 {
                        let lhs = {
                            let mut v = self.l3_of(
                                &self.l2p_basis(x, y),
                                &self.unit_0(z),
                                &self.unit_0(t),
                            );
                            v = vec_sub(
                                &v,
                                &self.l3_of(
                                    &self.l2p_basis(x, z),
                                    &self.unit_0(y),
                                    &self.unit_0(t),
                                ),
                            );
                            v = vec_add(
                                &v,
                                &self.l3_of(
                                    &self.l2p_basis(x, t),
                                    &self.unit_0(y),
                                    &self.unit_0(z),
                                ),
                            );
                            v = vec_add(
                                &v,
                                &self.l3_of(
                                    &self.l2p_basis(y, z),
                                    &self.unit_0(x),
                                    &self.unit_0(t),
                                ),
                            );
                            v = vec_sub(
                                &v,
                                &self.l3_of(
                                    &self.l2p_basis(y, t),
                                    &self.unit_0(x),
                                    &self.unit_0(z),
                                ),
                            );
                            v = vec_add(
                                &v,
                                &self.l3_of(
                                    &self.l2p_basis(z, t),
                                    &self.unit_0(x),
                                    &self.unit_0(y),
                                ),
                            );
                            v
                        };
                        // RHS terms l2(b, t) = l2m(b, t) with b in g_{-1}.
                        let rhs = {
                            let mut v = self.l2m_of(&self.l3_basis(x, y, z), &self.unit_0(t));
                            v = vec_sub(
                                &v,
                                &self.l2m_of(&self.l3_basis(x, y, t), &self.unit_0(z)),
                            );
                            v = vec_add(
                                &v,
                                &self.l2m_of(&self.l3_basis(x, z, t), &self.unit_0(y)),
                            );
                            v = vec_sub(
                                &v,
                                &self.l2m_of(&self.l3_basis(y, z, t), &self.unit_0(x)),
                            );
                            v
                        };
                        let defect = vec_sub(&lhs, &rhs);
                        if !vec_is_zero(&defect) {
                            report.fail(
                                "R6",
                                format!(
                                    "({}, {}, {}, {})",
                                    self.basis_0[x],
                                    self.basis_0[y],
                                    self.basis_0[z],
                                    self.basis_0[t]
                                ),
                                fmt_vec(&defect, &self.basis_m1),
                            );
                        }
                    }
                }
            }
        }
        report
    }

    /// Classification flags computed by exact tensor contraction.
    pub fn classify(&self) -> AlgebraFlags {
        let skeletal = self.l1_is_zero();
        let strict = self.l3_is_zero();
        // g_0 is a Lie algebra iff l1 . l3 = 0
        let g0_is_lie = self.l3.values().all(|v| vec_is_zero(&self.l1_of(v)));
        // l3(l1(a), x, y) = 0 for all basis tuples
        let l3_vanishes_on_im_l1 = (0..self.dim_m1()).all(|a| {
            let im = &self.l1[a];
            (0..self.dim_0()).all(|x| {
                (x + 1..self.dim_0())
                    .all(|y| vec_is_zero(&self.l3_of(im, &self.unit_0(x), &self.unit_0(y))))
            })
        });
        AlgebraFlags {
            skeletal,
            strict,
            g0_is_lie,
            l3_vanishes_on_im_l1,
        }
    }

    /// Jacobiator of `l2p` on `g_0`; the classification flag `g0_is_lie`
    /// must agree with its vanishing.
    pub fn g0_jacobiator_vanishes(&self) -> bool {
        let n0 = self.dim_0();
        for x in 0..n0 {
            for y in x + 1..n0 {
                for z in y + 1..n0 {
                    let mut jac = self.l2p_of(&self.l2p_basis(x, y), &self.unit_0(z));
                    jac = vec_add(&jac, &self.l2p_of(&self.l2p_basis(y, z), &self.unit_0(x)));
                    jac = vec_add(&jac, &self.l2p_of(&self.l2p_basis(z, x), &self.unit_0(y)));
                    if !vec_is_zero(&jac) {
                        return false;
                    }
                }
            }
        }
        true
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AlgebraFlags {
    pub skeletal: bool,
    pub strict: bool,
    pub g0_is_lie: bool,
    pub l3_vanishes_on_im_l1: bool,
}

/// Result of checking a named family of relations on basis tuples.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AxiomReport {
    pub relations: Vec<RelationCheck>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelationCheck {
    pub name: String,
    pub failures: Vec<RelationFailure>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelationFailure {
    pub tuple: String,
    pub defect: String,
}

impl AxiomReport {
    pub fn new(names: &[&str]) -> Self {
        AxiomReport {
            relations: names
                .iter()
                .map(|n| RelationCheck {
                    name: n.to_string(),
                    failures: Vec::new(),
                })
                .collect(),
        }
    }

    pub fn fail(&mut self, name: &str, tuple: String, defect: String) {
        self.relations
            .iter_mut()
            .find(|r| r.name == name)
            .expect("known relation name")
            .failures
            .push(RelationFailure { tuple, defect });
    }

    pub fn passed(&self) -> bool {
        self.relations.iter().all(|r| r.failures.is_empty())
    }

    pub fn failing(&self) -> Vec<&RelationCheck> {
        self.relations
            .iter()
            .filter(|r| !r.failures.is_empty())
            .collect()
    }

    pub fn first_failure(&self, name: &str) -> Option<&RelationFailure> {
        self.relations
            .iter()
            .find(|r| r.name == name)
            .and_then(|r| r.failures.first())
    }

    pub fn merge(&mut self, other: AxiomReport) {
        self.relations.extend(other.relations);
    }
}

/// A morphism of Lie 2-algebras: `F = (F_{1,0}, F_{1,-1}, F_2)` with `F_2`
/// alternating on `g_0`, valued in the target's degree `-1` part.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lie2Morphism {
    pub source: Arc<Lie2Algebra>,
    pub target: Arc<Lie2Algebra>,
    /// Column per source `g_0` basis vector, in target `g_0` coordinates.
    pub f10: Vec<QVec>,
    /// Column per source `g_{-1}` basis vector, in target coordinates.
    pub f1m1: Vec<QVec>,
    /// `(i, j) -> F_2(x_i, x_j)`, `i < j`, in target `g_{-1}'` coordinates.
    pub f2: BTreeMap<(usize, usize), QVec>,
}

impl Lie2Morphism {
    pub fn identity(algebra: &Arc<Lie2Algebra>) -> Self {
        let n0 = algebra.dim_0();
        let nm = algebra.dim_m1();
        Lie2Morphism {
            source: algebra.clone(),
            target: algebra.clone(),
            f10: (0..n0).map(|i| unit_vec(n0, i)).collect(),
            f1m1: (0..nm).map(|i| unit_vec(nm, i)).collect(),
            f2: BTreeMap::new(),
        }
    }

    pub fn is_strict(&self) -> bool {
        self.f2.values().all(|v| vec_is_zero(v))
    }

    pub fn f10_of(&self, x: &[Rational]) -> QVec {
        let mut out = zero_vec(self.target.dim_0());
        for (i, c) in x.iter().enumerate() {
            if !c.is_zero() {
                out = vec_add(&out, &vec_scale(&self.f10[i], c));
            }
        }
        out
    }

    pub fn f1m1_of(&self, a: &[Rational]) -> QVec {
        let mut out = zero_vec(self.target.dim_m1());
        for (i, c) in a.iter().enumerate() {
            if !c.is_zero() {
                out = vec_add(&out, &vec_scale(&self.f1m1[i], c));
            }
        }
        out
    }

    pub fn f2_basis(&self, i: usize, j: usize) -> QVec {
        match pair_key(i, j) {
            None => zero_vec(self.target.dim_m1()),
            Some((key, sign)) => match self.f2.get(&key) {
                None => zero_vec(self.target.dim_m1()),
                Some(v) if sign < 0 => vec_neg(v),
                Some(v) => v.clone(),
            },
        }
    }

    pub fn f2_of(&self, x: &[Rational], y: &[Rational]) -> QVec {
        let mut out = zero_vec(self.target.dim_m1());
        for (i, c1) in x.iter().enumerate() {
            if c1.is_zero() {
                continue;
            }
            for (j, c2) in y.iter().enumerate() {
                if c2.is_zero() {
                    continue;
                }
                out = vec_add(&out, &vec_scale(&self.f2_basis(i, j), &(c1 * c2)));
            }
        }
        out
    }

    /// Check the morphism conditions (A1)-(A4) on all basis tuples.
    pub fn verify(&self) -> AxiomReport {
        let mut report = AxiomReport::new(&["A1", "A2", "A3", "A4"]);
        let src = &self.source;
        let tgt = &self.target;
        let n0 = src.dim_0();
        let nm = src.dim_m1();

        // A1: l1' . F_{1,-1} = F_{1,0} . l1
        for a in 0..nm {
            let defect = vec_sub(&tgt.l1_of(&self.f1m1[a]), &self.f10_of(src.l1_column(a)));
            if !vec_is_zero(&defect) {
                report.fail(
                    "A1",
                    src.basis_m1[a].clone(),
                    fmt_vec(&defect, &tgt.basis_0),
                );
            }
        }

        // A2: l1'(F_2(x,y)) = F_{1,0}(l2(x,y)) - l2'(F x, F y)
        for i in 0..n0 {
            for j in i + 1..n0 {
                let lhs = tgt.l1_of(&self.f2_basis(i, j));
                let rhs = vec_sub(
                    &self.f10_of(&src.l2p_basis(i, j)),
                    &tgt.l2p_of(&self.f10[i], &self.f10[j]),
                );
                let defect = vec_sub(&lhs, &rhs);
                if !vec_is_zero(&defect) {
                    report.fail(
                        "A2",
                        format!("({}, {})", src.basis_0[i], src.basis_0[j]),
                        fmt_vec(&defect, &tgt.basis_0),
                    );
                }
            }
        }

        // A3: F_{1,-1}(l2m(a,x)) = F_2(l1(a), x) + l2m'(F_{1,-1}(a), F_{1,0}(x))
        for a in 0..nm {
            for x in 0..n0 {
                let lhs = self.f1m1_of(&src.l2m_basis(a, x));
                let rhs = vec_add(
                    &self.f2_of(src.l1_column(a), &src.unit_0(x)),
                    &tgt.l2m_of(&self.f1m1[a], &self.f10[x]),
                );
                let defect = vec_sub(&lhs, &rhs);
                if !vec_is_zero(&defect) {
                    report.fail(
                        "A3",
                        format!("({}, {})", src.basis_m1[a], src.basis_0[x]),
                        fmt_vec(&defect, &tgt.basis_m1),
                    );
                }
            }
        }

        // A4: F_{1,-1}(l3(x,y,z)) + cyclic F_2(l2(x,y),z)
        //     = l3'(Fx,Fy,Fz) + cyclic l2'(F_{1,0}(x), F_2(y,z))
        // with l2'(x', b') = -l2m'(b', x').
        for i in 0..n0 {
            for j in i + 1..n0 {
                for k in j + 1..n0 {
                    let mut lhs = self.f1m1_of(&src.l3_basis(i, j, k));
                    lhs = vec_add(&lhs, &self.f2_of(&src.l2p_basis(i, j), &src.unit_0(k)));
                    lhs = vec_add(&lhs, &self.f2_of(&src.l2p_basis(j, k), &src.unit_0(i)));
                    lhs = vec_add(&lhs, &self.f2_of(&src.l2p_basis(k, i), &src.unit_0(j)));
                    let mut rhs = tgt.l3_of(&self.f10[i], &self.f10[j], &self.f10[k]);
                    rhs = vec_sub(&rhs, &tgt.l2m_of(&self.f2_basis(j, k), &self.f10[i]));
                    rhs = vec_sub(&rhs, &tgt.l2m_of(&self.f2_basis(k, i), &self.f10[j]));
                    rhs = vec_sub(&rhs, &tgt.l2m_of(&self.f2_basis(i, j), &self.f10[k]));
                    let defect = vec_sub(&lhs, &rhs);
                    if !vec_is_zero(&defect) {
                        report.fail(
                            "A4",
                            format!(
                                "({}, {}, {})",
                                src.basis_0[i], src.basis_0[j], src.basis_0[k]
                            ),
                            fmt_vec(&defect, &tgt.basis_m1),
                        );
                    }
                }
            }
        }
        report
    }
}

/// Composition `F' . F`, with `F_2'' = F_2' . (F_{1,0} x F_{1,0}) +
/// F_{1,-1}' . F_2`.
pub fn compose(fp: &Lie2Morphism, f: &Lie2Morphism) -> Result<Lie2Morphism, AlgebraError> {
    if fp.source.as_ref() != f.target.as_ref() {
        return Err(AlgebraError::Invalid(
            "composition chain mismatch: target of inner != source of outer".into(),
        ));
    }
    let f10 = f.f10.iter().map(|col| fp.f10_of(col)).collect::<Vec<_>>();
    let f1m1 = f.f1m1.iter().map(|col| fp.f1m1_of(col)).collect::<Vec<_>>();
    let n0 = f.source.dim_0();
    let mut f2 = BTreeMap::new();
    for i in 0..n0 {
        for j in i + 1..n0 {
            let part1 = fp.f2_of(&f.f10[i], &f.f10[j]);
            let part2 = fp.f1m1_of(&f.f2_basis(i, j));
            let v = vec_add(&part1, &part2);
            if !vec_is_zero(&v) {
                f2.insert((i, j), v);
            }
        }
    }
    Ok(Lie2Morphism {
        source: f.source.clone(),
        target: fp.target.clone(),
        f10,
        f1m1,
        f2,
    })
}

/// A Lie algebra given by structure constants.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LieAlgebra {
    pub basis: Vec<String>,
    /// `(i, j) -> [x_i, x_j]`, `i < j`.
    pub brackets: BTreeMap<(usize, usize), QVec>,
}

impl LieAlgebra {
    pub fn new(basis: Vec<String>) -> Self {
        LieAlgebra {
            basis,
            brackets: BTreeMap::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn set_bracket(&mut self, i: usize, j: usize, value: QVec) -> Result<(), AlgebraError> {
        if value.len() != self.dim() {
            return Err(AlgebraError::Dimension("bracket value".into()));
        }
        let Some((key, sign)) = pair_key(i, j) else {
            return Err(AlgebraError::Invalid("bracket on repeated index".into()));
        };
        let v = if sign < 0 { vec_neg(&value) } else { value };
        if vec_is_zero(&v) {
            self.brackets.remove(&key);
        } else {
            self.brackets.insert(key, v);
        }
        Ok(())
    }

    pub fn bracket_basis(&self, i: usize, j: usize) -> QVec {
        match pair_key(i, j) {
            None => zero_vec(self.dim()),
            Some((key, sign)) => match self.brackets.get(&key) {
                None => zero_vec(self.dim()),
                Some(v) if sign < 0 => vec_neg(v),
                Some(v) => v.clone(),
            },
        }
    }

    pub fn bracket_of(&self, x: &[Rational], y: &[Rational]) -> QVec {
        let mut out = zero_vec(self.dim());
        for (i, c1) in x.iter().enumerate() {
            if c1.is_zero() {
                continue;
            }
            for (j, c2) in y.iter().enumerate() {
                if c2.is_zero() {
                    continue;
                }
                out = vec_add(&out, &vec_scale(&self.bracket_basis(i, j), &(c1 * c2)));
            }
        }
        out
    }

    pub fn jacobi_holds(&self) -> bool {
        let n = self.dim();
        for i in 0..n {
            for j in i + 1..n {
                for k in j + 1..n {
                    let mut jac = self.bracket_of(&self.bracket_basis(i, j), &unit_vec(n, k));
                    jac = vec_add(
                        &jac,
                        &self.bracket_of(&self.bracket_basis(j, k), &unit_vec(n, i)),
                    );
                    jac = vec_add(
                        &jac,
                        &self.bracket_of(&self.bracket_basis(k, i), &unit_vec(n, j)),
                    );
                    if !vec_is_zero(&jac) {
                        return false;
                    }
                }
            }
        }
        true
    }
}

/// A Lie algebra crossed module `(g, h, tau, r)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CrossedModule {
    pub g: LieAlgebra,
    pub h: LieAlgebra,
    /// Column per `h` basis vector, in `g` coordinates.
    pub tau: Vec<QVec>,
    /// `r[x]` is the matrix of `r(x_x)` acting on `h` (columns per `h`
    /// basis vector).
    pub r: Vec<Vec<QVec>>,
}

impl CrossedModule {
    pub fn tau_of(&self, a: &[Rational]) -> QVec {
        let mut out = zero_vec(self.g.dim());
        for (i, c) in a.iter().enumerate() {
            if !c.is_zero() {
                out = vec_add(&out, &vec_scale(&self.tau[i], c));
            }
        }
        out
    }

    pub fn r_of(&self, x: &[Rational], a: &[Rational]) -> QVec {
        let mut out = zero_vec(self.h.dim());
        for (xi, cx) in x.iter().enumerate() {
            if cx.is_zero() {
                continue;
            }
            for (ai, ca) in a.iter().enumerate() {
                if ca.is_zero() {
                    continue;
                }
                out = vec_add(&out, &vec_scale(&self.r[xi][ai], &(cx * ca)));
            }
        }
        out
    }

    /// Check all crossed-module axioms: both structure maps are Lie algebra
    /// morphisms (`r` into derivations), plus the two compatibility
    /// identities.
    pub fn verify(&self) -> AxiomReport {
        let mut report = AxiomReport::new(&[
            "g Jacobi",
            "h Jacobi",
            "tau morphism",
            "r morphism",
            "r derivation",
            "tau(r(x)a) = [x, tau a]",
            "r(tau a)b = [a, b]",
        ]);
        let ng = self.g.dim();
        let nh = self.h.dim();
        if !self.g.jacobi_holds() {
            report.fail(
                "g Jacobi",
                "(basis triple)".into(),
                "nonzero Jacobiator".into(),
            );
        }
        if !self.h.jacobi_holds() {
            report.fail(
                "h Jacobi",
                "(basis triple)".into(),
                "nonzero Jacobiator".into(),
            );
        }
        // tau([a,b]_h) = [tau a, tau b]_g
        for a in 0..nh {
            for b in a + 1..nh {
                let lhs = self.tau_of(&self.h.bracket_basis(a, b));
                let rhs = self.g.bracket_of(&self.tau[a], &self.tau[b]);
                let defect = vec_sub(&lhs, &rhs);
                if !vec_is_zero(&defect) {
                    report.fail(
                        "tau morphism",
                        format!("({}, {})", self.h.basis[a], self.h.basis[b]),
                        fmt_vec(&defect, &self.g.basis),
                    );
                }
            }
        }
        // r([x,y]_g) = [r(x), r(y)]
        for x in 0..ng {
            for y in x + 1..ng {
                for a in 0..nh {
                    let lhs = self.r_of(&self.g.bracket_basis(x, y), &unit_vec(nh, a));
                    let rhs = vec_sub(
                        &self.r_of(
                            &unit_vec(ng, x),
                            &self.r_of(&unit_vec(ng, y), &unit_vec(nh, a)),
                        ),
                        &self.r_of(
                            &unit_vec(ng, y),
                            &self.r_of(&unit_vec(ng, x), &unit_vec(nh, a)),
                        ),
                    );
                    let defect = vec_sub(&lhs, &rhs);
                    if !vec_is_zero(&defect) {
                        report.fail(
                            "r morphism",
                            format!(
                                "([{}, {}], {})",
                                self.g.basis[x], self.g.basis[y], self.h.basis[a]
                            ),
                            fmt_vec(&defect, &self.h.basis),
                        );
                    }
                }
            }
        }
        // r(x) is a derivation of [.,.]_h
        for x in 0..ng {
            for a in 0..nh {
                for b in a + 1..nh {
                    let lhs = self.r_of(&unit_vec(ng, x), &self.h.bracket_basis(a, b));
                    let rhs = vec_add(
                        &self.h.bracket_of(
                            &self.r_of(&unit_vec(ng, x), &unit_vec(nh, a)),
                            &unit_vec(nh, b),
                        ),
                        &self.h.bracket_of(
                            &unit_vec(nh, a),
                            &self.r_of(&unit_vec(ng, x), &unit_vec(nh, b)),
                        ),
                    );
                    let defect = vec_sub(&lhs, &rhs);
                    if !vec_is_zero(&defect) {
                        report.fail(
                            "r derivation",
                            format!(
                                "({}; {}, {})",
                                self.g.basis[x], self.h.basis[a], self.h.basis[b]
                            ),
                            fmt_vec(&defect, &self.h.basis),
                        );
                    }
                }
            }
        }
        // tau(r(x)(a)) = [x, tau(a)]_g
        for x in 0..ng {
            for a in 0..nh {
                let lhs = self.tau_of(&self.r_of(&unit_vec(ng, x), &unit_vec(nh, a)));
                let rhs = self.g.bracket_of(&unit_vec(ng, x), &self.tau[a]);
                let defect = vec_sub(&lhs, &rhs);
                if !vec_is_zero(&defect) {
                    report.fail(
                        "tau(r(x)a) = [x, tau a]",
                        format!("({}, {})", self.g.basis[x], self.h.basis[a]),
                        fmt_vec(&defect, &self.g.basis),
                    );
                }
            }
        }
        // r(tau(a))(b) = [a,b]_h
        for a in 0..nh {
            for b in 0..nh {
                let lhs = self.r_of(&self.tau_of(&unit_vec(nh, a)), &unit_vec(nh, b));
                let rhs = self.h.bracket_of(&unit_vec(nh, a), &unit_vec(nh, b));
                let defect = vec_sub(&lhs, &rhs);
                if !vec_is_zero(&defect) {
                    report.fail(
                        "r(tau a)b = [a, b]",
                        format!("({}, {})", self.h.basis[a], self.h.basis[b]),
                        fmt_vec(&defect, &self.h.basis),
                    );
                }
            }
        }
        report
    }
}

/// Strict Lie 2-algebra to crossed module: `h = g_{-1}` with
/// `[a, b]_h = l2m(a, l1(b))`, `g = g_0`, `tau = l1`,
/// `r(x)(a) = l2m(x, a) = -l2m(a, x)`.
pub fn to_crossed_module(algebra: &Lie2Algebra) -> Result<CrossedModule, AlgebraError> {
    if !algebra.l3_is_zero() {
        return Err(AlgebraError::Invalid(
            "to_crossed_module requires a strict Lie 2-algebra (l3 = 0)".into(),
        ));
    }
    let ng = algebra.dim_0();
    let nm = algebra.dim_m1();
    let mut g = LieAlgebra::new(algebra.basis_0.clone());
    for i in 0..ng {
        for j in i + 1..ng {
            g.set_bracket(i, j, algebra.l2p_basis(i, j))?;
        }
    }
    let mut h = LieAlgebra::new(algebra.basis_m1.clone());
    for a in 0..nm {
        for b in a + 1..nm {
            let ua = algebra.unit_m1(a);
            h.set_bracket(a, b, algebra.l2m_of(&ua, algebra.l1_column(b)))?;
        }
    }
    let tau = (0..nm).map(|a| algebra.l1_column(a).clone()).collect();
    let r = (0..ng)
        .map(|x| {
            (0..nm)
                .map(|a| vec_neg(&algebra.l2m_basis(a, x)))
                .collect()
        })
        .collect();
    Ok(CrossedModule { g, h, tau, r })
}

/// Crossed module to strict Lie 2-algebra: `l1 = tau`,
/// `l2p = [.,.]_g`, `l2m(a, x) = -r(x)(a)`, `l3 = 0`.
pub fn from_crossed_module(cm: &CrossedModule) -> Result<Lie2Algebra, AlgebraError> {
    let report = cm.verify();
    if !report.passed() {
        let failing: Vec<String> = report.failing().iter().map(|r| r.name.clone()).collect();
        return Err(AlgebraError::Invalid(format!(
            "crossed module axioms fail: {}",
            failing.join(", ")
        )));
    }
    // h labels colliding with g labels (e.g. inner crossed modules) get a
    // prime appended so the two bases stay disjoint
    let mut h_labels = cm.h.basis.clone();
    for l in h_labels.iter_mut() {
        while cm.g.basis.contains(l) {
            l.push('\'');
        }
    }
    let mut algebra = Lie2Algebra::new(h_labels, cm.g.basis.clone())?;
    for (a, col) in cm.tau.iter().enumerate() {
        algebra.set_l1(a, col.clone())?;
    }
    for ((i, j), v) in &cm.g.brackets {
        algebra.set_l2p(*i, *j, v.clone())?;
    }
    let ng = cm.g.dim();
    let nh = cm.h.dim();
    for x in 0..ng {
        for a in 0..nh {
            algebra.set_l2m(a, x, vec_neg(&cm.r[x][a]))?;
        }
    }
    Ok(algebra)
}

/// Check a crossed module morphism `(Phi : h -> h', psi : g -> g')` and, as
/// the equivalence demands, also build the associated strict Lie 2-morphism
/// and report whether its verification agrees.
pub fn verify_crossed_module_morphism(
    phi: &[QVec],
    psi: &[QVec],
    cm: &CrossedModule,
    cm2: &CrossedModule,
) -> Result<(AxiomReport, bool), AlgebraError> {
    if phi.len() != cm.h.dim() || psi.len() != cm.g.dim() {
        return Err(AlgebraError::Dimension("morphism matrices".into()));
    }
    let mut report = AxiomReport::new(&[
        "Phi morphism",
        "psi morphism",
        "tau' . Phi = psi . tau",
        "Phi(r(x)a) = r'(psi x)(Phi a)",
    ]);
    let apply = |cols: &[QVec], v: &[Rational], out_dim: usize| -> QVec {
        let mut out = zero_vec(out_dim);
        for (i, c) in v.iter().enumerate() {
            if !c.is_zero() {
                out = vec_add(&out, &vec_scale(&cols[i], c));
            }
        }
        out
    };
    let nh = cm.h.dim();
    let ng = cm.g.dim();
    for a in 0..nh {
        for b in a + 1..nh {
            let lhs = apply(phi, &cm.h.bracket_basis(a, b), cm2.h.dim());
            let rhs = cm2.h.bracket_of(&phi[a], &phi[b]);
            let defect = vec_sub(&lhs, &rhs);
            if !vec_is_zero(&defect) {
                report.fail(
                    "Phi morphism",
                    format!("({}, {})", cm.h.basis[a], cm.h.basis[b]),
                    fmt_vec(&defect, &cm2.h.basis),
                );
            }
        }
    }
    for x in 0..ng {
        for y in x + 1..ng {
            let lhs = apply(psi, &cm.g.bracket_basis(x, y), cm2.g.dim());
            let rhs = cm2.g.bracket_of(&psi[x], &psi[y]);
            let defect = vec_sub(&lhs, &rhs);
            if !vec_is_zero(&defect) {
                report.fail(
                    "psi morphism",
                    format!("({}, {})", cm.g.basis[x], cm.g.basis[y]),
                    fmt_vec(&defect, &cm2.g.basis),
                );
            }
        }
    }
    for a in 0..nh {
        let lhs = cm2.tau_of(&phi[a]);
        let rhs = apply(psi, &cm.tau[a], cm2.g.dim());
        let defect = vec_sub(&lhs, &rhs);
        if !vec_is_zero(&defect) {
            report.fail(
                "tau' . Phi = psi . tau",
                cm.h.basis[a].clone(),
                fmt_vec(&defect, &cm2.g.basis),
            );
        }
    }
    for x in 0..ng {
        for a in 0..nh {
            let lhs = apply(phi, &cm.r_of(&unit_vec(ng, x), &unit_vec(nh, a)), cm2.h.dim());
            let rhs = cm2.r_of(&psi[x], &phi[a]);
            let defect = vec_sub(&lhs, &rhs);
            if !vec_is_zero(&defect) {
                report.fail(
                    "Phi(r(x)a) = r'(psi x)(Phi a)",
                    format!("({}, {})", cm.g.basis[x], cm.h.basis[a]),
                    fmt_vec(&defect, &cm2.h.basis),
                );
            }
        }
    }
    // The associated strict Lie 2-morphism must verify iff this does.
    let src = Arc::new(from_crossed_module(cm)?);
    let tgt = Arc::new(from_crossed_module(cm2)?);
    let morphism = Lie2Morphism {
        source: src,
        target: tgt,
        f10: psi.to_vec(),
        f1m1: phi.to_vec(),
        f2: BTreeMap::new(),
    };
    let strict_ok = morphism.verify().passed();
    Ok((report, strict_ok))
}

/// Kernel basis and pivot columns of `l1`, by one shared deterministic
/// elimination (smallest-index pivot preference).
pub fn l1_kernel_and_pivots(algebra: &Lie2Algebra) -> (Vec<QVec>, Vec<usize>) {
    let m = algebra.l1_matrix();
    let kernel = linalg::kernel_basis(&m);
    let (_, _, pivots) = linalg::rref_with_transform(&m);
    (kernel, pivots)
}

#[cfg(test)]
pub(crate) mod fixtures {
    use super::*;
    use crate::ring::int;

    /// The three-by-one Lie 2-algebra with `l1(a) = x2`,
    /// `l2(x1,x2) = -x2`, `l2(x1,x3) = x1`, `l2(a,x1) = a`,
    /// `l3(x1,x2,x3) = -a`.
    pub fn example_1a() -> Lie2Algebra {
        let mut g = Lie2Algebra::new(
            vec!["a".into()],
            vec!["x1".into(), "x2".into(), "x3".into()],
        )
        .unwrap();
        g.set_l1(0, vec![int(0), int(1), int(0)]).unwrap();
        g.set_l2p(0, 1, vec![int(0), int(-1), int(0)]).unwrap();
        g.set_l2p(0, 2, vec![int(1), int(0), int(0)]).unwrap();
        g.set_l2m(0, 0, vec![int(1)]).unwrap();
        g.set_l3(0, 1, 2, vec![int(-1)]).unwrap();
        g
    }

    /// Strict crossed-module algebra: `g_0 = <y,x,z>` with `[x,y] = x`,
    /// `g_{-1} = <b,c>`, `l1(b) = z`, `l2m(b,y) = c`.
    pub fn example_3b() -> Lie2Algebra {
        let mut g = Lie2Algebra::new(
            vec!["b".into(), "c".into()],
            vec!["y".into(), "x".into(), "z".into()],
        )
        .unwrap();
        g.set_l1(0, vec![int(0), int(0), int(1)]).unwrap();
        // [x, y] = x i.e. l2p(y, x) = -x
        g.set_l2p(0, 1, vec![int(0), int(-1), int(0)]).unwrap();
        g.set_l2m(0, 0, vec![int(0), int(1)]).unwrap();
        g
    }
}

#[cfg(test)]
mod tests {
    use super::fixtures::*;
    use super::*;
    use crate::ring::int;

    #[test]
    fn example_1a_satisfies_axioms() {
        let report = example_1a().verify_axioms();
        assert!(report.passed(), "{:?}", report.failing());
    }

    #[test]
    fn zero_brackets_pass() {
        let g = Lie2Algebra::new(vec!["a".into()], vec!["x".into(), "y".into()]).unwrap();
        assert!(g.verify_axioms().passed());
    }

    #[test]
    fn mutated_1a_fails_r4() {
        let mut g = example_1a();
        // change l2(x1, x3) from x1 to x3
        g.set_l2p(0, 2, vec![int(0), int(0), int(1)]).unwrap();
        let report = g.verify_axioms();
        assert!(!report.passed());
        let f = report.first_failure("R4").expect("R4 fails");
        assert_eq!(f.tuple, "(x1, x2, x3)");
    }

    #[test]
    fn classification_flags() {
        let g = example_1a();
        let flags = g.classify();
        assert!(!flags.skeletal);
        assert!(!flags.strict);
        assert!(!flags.g0_is_lie, "l1(l3(x1,x2,x3)) = -x2 != 0");
        let zero = Lie2Algebra::new(vec![], vec!["x".into()]).unwrap();
        let f = zero.classify();
        assert!(f.skeletal && f.strict && f.g0_is_lie && f.l3_vanishes_on_im_l1);
    }

    #[test]
    fn g0_is_lie_iff_jacobiator_vanishes() {
        // both directions on the fixtures
        for g in [example_1a(), example_3b()] {
            assert_eq!(g.classify().g0_is_lie, g.g0_jacobiator_vanishes());
        }
    }

    #[test]
    fn identity_morphism_verifies() {
        let g = Arc::new(example_1a());
        let id = Lie2Morphism::identity(&g);
        assert!(id.verify().passed());
        assert!(id.is_strict());
    }

    #[test]
    fn perturbed_morphism_fails_a2() {
        let g = Arc::new(example_1a());
        let mut f = Lie2Morphism::identity(&g);
        // send x3 to x3 + x2: not bracket preserving
        f.f10[2] = vec![int(0), int(1), int(1)];
        let report = f.verify();
        assert!(!report.passed());
        assert!(report.first_failure("A2").is_some());
    }

    #[test]
    fn compose_with_identity() {
        let g = Arc::new(example_1a());
        let id = Lie2Morphism::identity(&g);
        let f = Lie2Morphism {
            source: g.clone(),
            target: g.clone(),
            f10: id.f10.clone(),
            f1m1: id.f1m1.clone(),
            f2: BTreeMap::from([((0usize, 2usize), vec![int(2)])]),
        };
        let c = compose(&id, &f).unwrap();
        assert_eq!(c.f2, f.f2);
        assert_eq!(c.f10, f.f10);
    }

    #[test]
    fn compose_f2_formula_cross_check() {
        // Two morphisms with nonzero F2 between copies of 3b; compose and
        // evaluate both sides of the composition formula on all basis pairs.
        let g = Arc::new(example_3b());
        let mk = |scale: i64| {
            let mut f = Lie2Morphism::identity(&g);
            f.f2.insert((0, 2), vec![int(0), int(scale)]);
            f
        };
        let f = mk(1);
        let fp = mk(3);
        let c = compose(&fp, &f).unwrap();
        for i in 0..g.dim_0() {
            for j in 0..g.dim_0() {
                let ei = unit_vec(g.dim_0(), i);
                let ej = unit_vec(g.dim_0(), j);
                let direct = c.f2_of(&ei, &ej);
                let manual = vec_add(
                    &fp.f2_of(&f.f10_of(&ei), &f.f10_of(&ej)),
                    &fp.f1m1_of(&f.f2_of(&ei, &ej)),
                );
                assert_eq!(direct, manual);
            }
        }
    }

    #[test]
    fn compose_is_associative_on_basis_data() {
        let g = Arc::new(example_3b());
        let mut f1 = Lie2Morphism::identity(&g);
        f1.f2.insert((0, 1), vec![int(0), int(1)]);
        let mut f2m = Lie2Morphism::identity(&g);
        f2m.f2.insert((1, 2), vec![int(0), int(2)]);
        let mut f3 = Lie2Morphism::identity(&g);
        f3.f2.insert((0, 2), vec![int(0), int(-1)]);
        let left = compose(&compose(&f3, &f2m).unwrap(), &f1).unwrap();
        let right = compose(&f3, &compose(&f2m, &f1).unwrap()).unwrap();
        assert_eq!(left, right);
    }

    #[test]
    fn example_3b_crossed_module_round_trip() {
        let g = example_3b();
        assert!(g.verify_axioms().passed());
        let cm = to_crossed_module(&g).unwrap();
        assert!(cm.verify().passed());
        // tau(b) = z, r(y)(b) = -c with the stored sign convention
        assert_eq!(cm.tau[0], vec![int(0), int(0), int(1)]);
        assert_eq!(cm.r[0][0], vec![int(0), int(-1)]);
        let back = from_crossed_module(&cm).unwrap();
        assert_eq!(back, g);
        assert!(back.verify_axioms().passed());
    }

    #[test]
    fn non_strict_rejected_by_to_crossed_module() {
        assert!(to_crossed_module(&example_1a()).is_err());
    }

    #[test]
    fn inner_crossed_module_of_axplusb() {
        // (g, g, id, ad) for the two-dimensional nonabelian Lie algebra.
        let mut g = LieAlgebra::new(vec!["x".into(), "y".into()]);
        g.set_bracket(0, 1, vec![int(1), int(0)]).unwrap();
        let ng = g.dim();
        let r = (0..ng)
            .map(|x| {
                (0..ng)
                    .map(|a| g.bracket_of(&unit_vec(ng, x), &unit_vec(ng, a)))
                    .collect()
            })
            .collect();
        let cm = CrossedModule {
            g: g.clone(),
            h: g.clone(),
            tau: (0..ng).map(|i| unit_vec(ng, i)).collect(),
            r,
        };
        assert!(cm.verify().passed());
        let algebra = from_crossed_module(&cm).unwrap();
        assert!(algebra.verify_axioms().passed());
    }

    #[test]
    fn trivial_crossed_module() {
        let g = LieAlgebra::new(vec!["x".into()]);
        let h = LieAlgebra::new(vec!["a".into()]);
        let cm = CrossedModule {
            g,
            h,
            tau: vec![vec![int(0)]],
            r: vec![vec![vec![int(0)]]],
        };
        assert!(cm.verify().passed());
        let algebra = from_crossed_module(&cm).unwrap();
        assert!(algebra.l1_is_zero());
        assert!(algebra.verify_axioms().passed());
    }

    #[test]
    fn crossed_module_morphism_identity_and_equivalence() {
        let g = example_3b();
        let cm = to_crossed_module(&g).unwrap();
        let phi: Vec<QVec> = (0..cm.h.dim()).map(|i| unit_vec(cm.h.dim(), i)).collect();
        let psi: Vec<QVec> = (0..cm.g.dim()).map(|i| unit_vec(cm.g.dim(), i)).collect();
        let (report, strict_ok) = verify_crossed_module_morphism(&phi, &psi, &cm, &cm).unwrap();
        assert!(report.passed());
        assert!(strict_ok);
        // scaling only c breaks equivariance: Phi(r(y)(b)) = -2c but
        // r'(psi y)(Phi b) = -c; the induced strict morphism fails too
        let mut bad_phi = phi.clone();
        bad_phi[1] = vec![int(0), int(2)];
        let (report, strict_ok) =
            verify_crossed_module_morphism(&bad_phi, &psi, &cm, &cm).unwrap();
        assert!(!report.passed());
        assert!(!strict_ok);
    }
}
