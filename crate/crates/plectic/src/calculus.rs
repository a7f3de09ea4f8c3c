//! Multivector fields and differential forms over the exponential-polynomial
//! ring on a coordinate chart, with wedge product, multicontraction,
//! exterior derivative, multi Lie derivative and the Schouten bracket.
//!
//! Conventions, fixed once and not user-switchable:
//!
//! * multicontraction inserts the first factor of a decomposable multivector
//!   into the first slot of the form, `i_v(a) = i_{X_n} ... i_{X_1}(a)
//!   = a(X_1, ..., X_n, ...)`, and vanishes when the form degree is smaller
//!   than the multivector degree;
//! * the multi Lie derivative is `L_v(a) = d i_v(a) - (-1)^{|v|} i_v d(a)`;
//! * the Schouten bracket is supported on the degree pairs (1,1), (1,2) and
//!   (2,1), with `[Z, X ^ Y] = [Z,X] ^ Y + X ^ [Z,Y]` extended to arbitrary
//!   coefficient tables by `[X, f w] = (L_X f) w + f [X, w]`, and the (2,1)
//!   case defined by antisymmetry.

use crate::ring::{ExpPoly, Rational, RingError};
use num_traits::Zero;
use std::collections::BTreeMap;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq, Clone)]
pub enum CalcError {
    #[error("chart mismatch: dim {0} vs {1}")]
    ChartMismatch(usize, usize),
    #[error("degree mismatch: expected {expected}, got {got}")]
    DegreeMismatch { expected: usize, got: usize },
    #[error("unsupported Schouten degree pair ({0}, {1})")]
    UnsupportedSchouten(usize, usize),
    #[error("unsupported degree {0}")]
    UnsupportedDegree(usize),
    #[error(transparent)]
    Ring(#[from] RingError),
}

/// A coordinate chart: an open subset of R^m with global coordinates
/// `q1..qm`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct Chart {
    pub dim: usize,
}

impl Chart {
    pub fn new(dim: usize) -> Self {
        assert!(dim >= 1, "chart dimension must be positive");
        Chart { dim }
    }
}

/// Shared storage for alternating coefficient tables: strictly increasing
/// 1-based index tuples mapped to nonzero coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
struct Alternating {
    chart: Chart,
    degree: usize,
    coeffs: BTreeMap<Vec<usize>, ExpPoly>,
}

impl Alternating {
    fn zero(chart: Chart, degree: usize) -> Self {
        Alternating {
            chart,
            degree,
            coeffs: BTreeMap::new(),
        }
    }

    fn insert(&mut self, indices: Vec<usize>, coeff: ExpPoly) {
        debug_assert_eq!(indices.len(), self.degree);
        debug_assert!(indices.windows(2).all(|w| w[0] < w[1]));
        debug_assert!(indices.iter().all(|&i| 1 <= i && i <= self.chart.dim));
        if coeff.is_zero() {
            return;
        }
        match self.coeffs.entry(indices) {
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = e.get().add(&coeff).expect("same chart");
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(coeff);
            }
        }
    }

    /// Insert with an arbitrary (possibly unsorted, possibly repeating)
    /// tuple; sorts and applies the permutation sign.
    fn insert_unsorted(&mut self, indices: &[usize], coeff: ExpPoly) {
        let Some((sorted, sign)) = sort_with_sign(indices) else {
            return;
        };
        let c = if sign < 0 { coeff.neg() } else { coeff };
        self.insert(sorted, c);
    }

    fn add(&self, other: &Self) -> Result<Self, CalcError> {
        if self.chart != other.chart {
            return Err(CalcError::ChartMismatch(self.chart.dim, other.chart.dim));
        }
        if self.degree != other.degree && !(self.coeffs.is_empty() || other.coeffs.is_empty()) {
            return Err(CalcError::DegreeMismatch {
                expected: self.degree,
                got: other.degree,
            });
        }
        let mut out = self.clone();
        if out.coeffs.is_empty() {
            out.degree = other.degree;
        }
        for (k, v) in &other.coeffs {
            out.insert(k.clone(), v.clone());
        }
        Ok(out)
    }

    fn neg(&self) -> Self {
        let mut out = self.clone();
        for v in out.coeffs.values_mut() {
            *v = v.neg();
        }
        out
    }

    fn scale(&self, f: &ExpPoly) -> Result<Self, CalcError> {
        if f.dim() != self.chart.dim {
            return Err(CalcError::ChartMismatch(self.chart.dim, f.dim()));
        }
        let mut out = Alternating::zero(self.chart, self.degree);
        for (k, v) in &self.coeffs {
            out.insert(k.clone(), v.mul(f)?);
        }
        Ok(out)
    }

    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    fn wedge(&self, other: &Self) -> Result<Self, CalcError> {
        if self.chart != other.chart {
            return Err(CalcError::ChartMismatch(self.chart.dim, other.chart.dim));
        }
        let mut out = Alternating::zero(self.chart, self.degree + other.degree);
        if out.degree > self.chart.dim {
            return Ok(out);
        }
        for (k1, c1) in &self.coeffs {
            for (k2, c2) in &other.coeffs {
                let mut joined = k1.clone();
                joined.extend_from_slice(k2);
                out.insert_unsorted(&joined, c1.mul(c2)?);
            }
        }
        Ok(out)
    }
}

/// Sort an index tuple, returning the permutation sign; `None` on repeats.
fn sort_with_sign(indices: &[usize]) -> Option<(Vec<usize>, i32)> {
    let mut v = indices.to_vec();
    let mut sign = 1i32;
    // insertion sort, counting swaps
    for i in 1..v.len() {
        let mut j = i;
        while j > 0 && v[j - 1] > v[j] {
            v.swap(j - 1, j);
            sign = -sign;
            j -= 1;
        }
    }
    if v.windows(2).any(|w| w[0] == w[1]) {
        return None;
    }
    Some((v, sign))
}

macro_rules! graded_wrapper {
    ($name:ident, $basis_fmt:literal) => {
        #[derive(Clone, PartialEq, Eq)]
        pub struct $name(Alternating);

        impl $name {
            pub fn zero(chart: Chart, degree: usize) -> Self {
                $name(Alternating::zero(chart, degree))
            }

            pub fn chart(&self) -> Chart {
                self.0.chart
            }

            pub fn degree(&self) -> usize {
                self.0.degree
            }

            pub fn is_zero(&self) -> bool {
                self.0.is_zero()
            }

            /// Build from `(increasing index tuple, coefficient)` terms;
            /// unsorted tuples are normalised with the permutation sign.
            pub fn from_terms(
                chart: Chart,
                degree: usize,
                terms: impl IntoIterator<Item = (Vec<usize>, ExpPoly)>,
            ) -> Result<Self, CalcError> {
                let mut a = Alternating::zero(chart, degree);
                for (idx, c) in terms {
                    if idx.len() != degree {
                        return Err(CalcError::DegreeMismatch {
                            expected: degree,
                            got: idx.len(),
                        });
                    }
                    if c.dim() != chart.dim {
                        return Err(CalcError::ChartMismatch(chart.dim, c.dim()));
                    }
                    if idx.iter().any(|&i| i == 0 || i > chart.dim) {
                        return Err(CalcError::Ring(RingError::IndexOutOfRange(
                            *idx.iter().max().unwrap_or(&0),
                            chart.dim,
                        )));
                    }
                    a.insert_unsorted(&idx, c);
                }
                Ok($name(a))
            }

            pub fn coeff(&self, indices: &[usize]) -> ExpPoly {
                let Some((sorted, sign)) = sort_with_sign(indices) else {
                    return ExpPoly::zero(self.0.chart.dim);
                };
                match self.0.coeffs.get(&sorted) {
                    Some(c) if sign < 0 => c.neg(),
                    Some(c) => c.clone(),
                    None => ExpPoly::zero(self.0.chart.dim),
                }
            }

            pub fn terms(&self) -> impl Iterator<Item = (&[usize], &ExpPoly)> {
                self.0.coeffs.iter().map(|(k, v)| (k.as_slice(), v))
            }

            pub fn add(&self, other: &Self) -> Result<Self, CalcError> {
                Ok($name(self.0.add(&other.0)?))
            }

            pub fn sub(&self, other: &Self) -> Result<Self, CalcError> {
                Ok($name(self.0.add(&other.0.neg())?))
            }

            pub fn neg(&self) -> Self {
                $name(self.0.neg())
            }

            pub fn scale(&self, f: &ExpPoly) -> Result<Self, CalcError> {
                Ok($name(self.0.scale(f)?))
            }

            pub fn scale_rat(&self, c: &Rational) -> Self {
                if c.is_zero() {
                    return Self::zero(self.chart(), self.degree());
                }
                let mut out = self.clone();
                for v in out.0.coeffs.values_mut() {
                    *v = v.scale(c);
                }
                out
            }

            pub fn wedge(&self, other: &Self) -> Result<Self, CalcError> {
                Ok($name(self.0.wedge(&other.0)?))
            }

            /// True when every coefficient is a rational constant.
            pub fn is_constant(&self) -> bool {
                self.0.coeffs.values().all(|c| c.as_constant().is_some())
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                if self.is_zero() {
                    return write!(f, "0");
                }
                // distribute each scalar term over its basis monomial so
                // the output stays inside the literal grammar
                let dim = self.0.chart.dim;
                let mut first = true;
                for (idx, c) in &self.0.coeffs {
                    let basis: Vec<String> =
                        idx.iter().map(|i| format!($basis_fmt, i)).collect();
                    let basis = basis.join("^");
                    for (lin, mono, coeff) in c.terms() {
                        let single = ExpPoly::from_terms(
                            dim,
                            [(coeff.clone(), mono.to_vec(), lin.to_vec())],
                        )
                        .expect("single term");
                        let text = single.to_string();
                        let (negative, body) = match text.strip_prefix('-') {
                            Some(rest) => (true, rest.to_string()),
                            None => (false, text),
                        };
                        if first {
                            if negative {
                                write!(f, "-")?;
                            }
                            first = false;
                        } else if negative {
                            write!(f, " - ")?;
                        } else {
                            write!(f, " + ")?;
                        }
                        if idx.is_empty() {
                            write!(f, "{}", body)?;
                        } else if body == "1" {
                            write!(f, "{}", basis)?;
                        } else {
                            write!(f, "{}*{}", body, basis)?;
                        }
                    }
                }
                Ok(())
            }
        }

        impl fmt::Debug for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                write!(f, "{} (deg {} on R^{})", self, self.0.degree, self.0.chart.dim)
            }
        }
    };
}

graded_wrapper!(MultiVectorField, "e{}");
graded_wrapper!(DifferentialForm, "dq{}");

impl MultiVectorField {
    /// The coordinate multivector `e_{i1} ^ ... ^ e_{ik}`.
    pub fn basis(chart: Chart, indices: &[usize]) -> Result<Self, CalcError> {
        Self::from_terms(
            chart,
            indices.len(),
            [(indices.to_vec(), ExpPoly::one(chart.dim))],
        )
    }

    /// Function scalars are degree-0 multivector fields.
    pub fn scalar(chart: Chart, f: ExpPoly) -> Result<Self, CalcError> {
        Self::from_terms(chart, 0, [(vec![], f)])
    }

    /// Apply a vector field to a function: `X(f) = sum X^i d_i f`.
    pub fn apply_to_function(&self, f: &ExpPoly) -> Result<ExpPoly, CalcError> {
        if self.degree() != 1 {
            return Err(CalcError::UnsupportedDegree(self.degree()));
        }
        let mut out = ExpPoly::zero(self.chart().dim);
        for (idx, c) in self.terms() {
            out = out.add(&c.mul(&f.partial(idx[0])?)?)?;
        }
        Ok(out)
    }
}

impl DifferentialForm {
    pub fn basis(chart: Chart, indices: &[usize]) -> Result<Self, CalcError> {
        Self::from_terms(
            chart,
            indices.len(),
            [(indices.to_vec(), ExpPoly::one(chart.dim))],
        )
    }

    pub fn scalar(chart: Chart, f: ExpPoly) -> Result<Self, CalcError> {
        Self::from_terms(chart, 0, [(vec![], f)])
    }

    /// The degree-0 coefficient, when this form is a function.
    pub fn as_scalar(&self) -> Option<ExpPoly> {
        if self.degree() != 0 {
            return None;
        }
        Some(self.coeff(&[]))
    }
}

/// Multicontraction `i_v(a)`: insertion of the first factor of `v` into the
/// first slot of `a`, extended by coefficient linearity. Returns the zero
/// function when the form degree is smaller than the multivector degree.
pub fn contract(v: &MultiVectorField, a: &DifferentialForm) -> Result<DifferentialForm, CalcError> {
    if v.chart() != a.chart() {
        return Err(CalcError::ChartMismatch(v.chart().dim, a.chart().dim));
    }
    let chart = a.chart();
    let (n, p) = (v.degree(), a.degree());
    if p < n {
        return Ok(DifferentialForm::zero(chart, 0));
    }
    let mut out = Alternating::zero(chart, p - n);
    for (vi, vc) in v.terms() {
        for (aj, ac) in a.terms() {
            // successively insert e_{i1}, e_{i2}, ... into the leading slot
            let mut remaining = aj.to_vec();
            let mut sign = 1i32;
            let mut dead = false;
            for &i in vi {
                match remaining.iter().position(|&j| j == i) {
                    Some(pos) => {
                        if pos % 2 == 1 {
                            sign = -sign;
                        }
                        remaining.remove(pos);
                    }
                    None => {
                        dead = true;
                        break;
                    }
                }
            }
            if dead {
                continue;
            }
            let mut c = vc.mul(ac)?;
            if sign < 0 {
                c = c.neg();
            }
            out.insert(remaining, c);
        }
    }
    Ok(DifferentialForm(out))
}

/// Exterior derivative `d`, coordinate formula via partial derivatives.
pub fn exterior_derivative(a: &DifferentialForm) -> Result<DifferentialForm, CalcError> {
    let chart = a.chart();
    let mut out = Alternating::zero(chart, a.degree() + 1);
    for (idx, c) in a.terms() {
        for i in 1..=chart.dim {
            let dc = c.partial(i)?;
            if dc.is_zero() {
                continue;
            }
            let mut joined = vec![i];
            joined.extend_from_slice(idx);
            out.insert_unsorted(&joined, dc);
        }
    }
    Ok(DifferentialForm(out))
}

/// Multi Lie derivative `L_v(a) = d i_v(a) - (-1)^{|v|} i_v d(a)`.
pub fn lie_derivative(
    v: &MultiVectorField,
    a: &DifferentialForm,
) -> Result<DifferentialForm, CalcError> {
    let left = exterior_derivative(&contract(v, a)?)?;
    let right = contract(v, &exterior_derivative(a)?)?;
    if v.degree() % 2 == 0 {
        left.sub(&right)
    } else {
        left.add(&right)
    }
}

/// Lie derivative of a function by a vector field, `L_X f = X(f)`.
pub fn lie_derivative_fn(v: &MultiVectorField, f: &ExpPoly) -> Result<ExpPoly, CalcError> {
    v.apply_to_function(f)
}

/// Schouten bracket on the supported degree pairs (1,1), (1,2), (2,1).
pub fn schouten(
    u: &MultiVectorField,
    w: &MultiVectorField,
) -> Result<MultiVectorField, CalcError> {
    if u.chart() != w.chart() {
        return Err(CalcError::ChartMismatch(u.chart().dim, w.chart().dim));
    }
    match (u.degree(), w.degree()) {
        (1, 1) => commutator(u, w),
        (1, 2) => vector_bivector(u, w),
        (2, 1) => Ok(vector_bivector(w, u)?.neg()),
        (a, b) => Err(CalcError::UnsupportedSchouten(a, b)),
    }
}

/// Commutator of vector fields.
fn commutator(
    x: &MultiVectorField,
    y: &MultiVectorField,
) -> Result<MultiVectorField, CalcError> {
    let chart = x.chart();
    let mut out = Alternating::zero(chart, 1);
    for (xi, xc) in x.terms() {
        for (yj, yc) in y.terms() {
            // [f d_i, g d_j] = f (d_i g) d_j - g (d_j f) d_i
            let fg = xc.mul(&yc.partial(xi[0])?)?;
            out.insert(yj.to_vec(), fg);
            let gf = yc.mul(&xc.partial(yj[0])?)?;
            out.insert(xi.to_vec(), gf.neg());
        }
    }
    Ok(MultiVectorField(out))
}

/// `[X, w]` for a vector field `X` and bivector field `w`, via the Leibniz
/// rule over basis decomposables and the derivation rule on coefficients.
fn vector_bivector(
    x: &MultiVectorField,
    w: &MultiVectorField,
) -> Result<MultiVectorField, CalcError> {
    let chart = x.chart();
    let mut out = MultiVectorField::zero(chart, 2);
    for (wi, wc) in w.terms() {
        // [X, c e_i ^ e_j] = (L_X c) e_i ^ e_j + c [X, e_i] ^ e_j + c e_i ^ [X, e_j]
        let lxc = x.apply_to_function(wc)?;
        out = out.add(&MultiVectorField::from_terms(
            chart,
            2,
            [(wi.to_vec(), lxc)],
        )?)?;
        let ei = MultiVectorField::basis(chart, &wi[..1])?;
        let ej = MultiVectorField::basis(chart, &wi[1..])?;
        let xei = commutator(x, &ei)?.scale(wc)?;
        let xej = commutator(x, &ej)?.scale(wc)?;
        out = out.add(&xei.wedge(&ej)?)?;
        out = out.add(&ei.wedge(&xej)?)?;
    }
    Ok(out)
}

/// Deterministic splittable PRNG; stable across platforms and versions.
#[derive(Debug, Clone)]
pub struct SplitMix64(u64);

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64(seed)
    }

    pub fn next_u64(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9E3779B97F4A7C15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58476D1CE4E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D049BB133111EB);
        z ^ (z >> 31)
    }

    /// Uniform in `0..n`.
    pub fn below(&mut self, n: u64) -> u64 {
        self.next_u64() % n
    }

    /// Small signed integer in `-2..=2`.
    fn small(&mut self) -> i64 {
        (self.below(5) as i64) - 2
    }
}

/// Seeded generator of bounded-complexity fields and forms: monomial degree
/// at most two, at most one exponential factor with coefficients in
/// `-2..=2`, rational coefficients in `-2..=2`.
pub struct FieldSampler {
    pub chart: Chart,
    rng: SplitMix64,
}

impl FieldSampler {
    pub fn new(chart: Chart, seed: u64) -> Self {
        FieldSampler {
            chart,
            rng: SplitMix64::new(seed),
        }
    }

    pub fn exppoly(&mut self) -> ExpPoly {
        let dim = self.chart.dim;
        let mut terms = Vec::new();
        let nterms = 1 + self.rng.below(2);
        for _ in 0..nterms {
            let mut c = self.rng.small();
            if c == 0 {
                c = 1;
            }
            let mut mono = vec![0u32; dim];
            for _ in 0..self.rng.below(3) {
                mono[self.rng.below(dim as u64) as usize] += 1;
            }
            let mut lin = vec![Rational::zero(); dim];
            if self.rng.below(2) == 0 {
                let mut l = self.rng.small();
                if l == 0 {
                    l = -1;
                }
                lin[self.rng.below(dim as u64) as usize] = crate::ring::int(l);
            }
            terms.push((crate::ring::int(c), mono, lin));
        }
        ExpPoly::from_terms(dim, terms).expect("sampler terms well-formed")
    }

    pub fn vector_field(&mut self) -> MultiVectorField {
        let mut out = MultiVectorField::zero(self.chart, 1);
        for _ in 0..1 + self.rng.below(2) {
            let i = 1 + self.rng.below(self.chart.dim as u64) as usize;
            let c = self.exppoly();
            out = out
                .add(&MultiVectorField::from_terms(self.chart, 1, [(vec![i], c)]).unwrap())
                .unwrap();
        }
        out
    }

    pub fn bivector_field(&mut self) -> MultiVectorField {
        let dim = self.chart.dim as u64;
        let mut out = MultiVectorField::zero(self.chart, 2);
        for _ in 0..1 + self.rng.below(2) {
            let i = 1 + self.rng.below(dim) as usize;
            let mut j = 1 + self.rng.below(dim) as usize;
            if i == j {
                j = if i == self.chart.dim { 1 } else { i + 1 };
            }
            let c = self.exppoly();
            out = out
                .add(&MultiVectorField::from_terms(self.chart, 2, [(vec![i, j], c)]).unwrap())
                .unwrap();
        }
        out
    }

    pub fn form(&mut self, degree: usize) -> DifferentialForm {
        let dim = self.chart.dim;
        assert!(degree <= dim);
        let mut out = DifferentialForm::zero(self.chart, degree);
        for _ in 0..1 + self.rng.below(2) {
            let mut idx: Vec<usize> = (1..=dim).collect();
            // deterministic partial shuffle, then take a prefix
            for k in (1..idx.len()).rev() {
                let j = self.rng.below((k + 1) as u64) as usize;
                idx.swap(k, j);
            }
            idx.truncate(degree);
            let c = self.exppoly();
            out = out
                .add(&DifferentialForm::from_terms(self.chart, degree, [(idx, c)]).unwrap())
                .unwrap();
        }
        out
    }
}

/// Test-harness hooks: deliberately broken variants of the operators, used
/// to demonstrate that the self-checks detect defects.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Mutation {
    #[default]
    None,
    /// Flip the sign of every multicontraction.
    FlipContraction,
    /// Flip the sign of the mixed endomorphism bracket.
    FlipTau2m,
}

/// Outcome of a randomized identity check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SelfCheckReport {
    pub trials: usize,
    pub failures: Vec<IdentityFailure>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdentityFailure {
    pub identity: String,
    pub trial: usize,
    pub witness: String,
}

impl SelfCheckReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Check the seven Cartan commutation identities on seeded random data.
///
/// Per trial, draws `X, Y` vector fields, `v` a bivector field and `a` a
/// form of degree 1..=3 and asserts, exactly:
///
/// 1. `i_X i_Y + i_Y i_X = 0`
/// 2. `i_X i_v - i_v i_X = 0`
/// 3. `L_X i_Y - i_Y L_X = i_[X,Y]`
/// 4. `L_X i_v - i_v L_X = i_[X,v]`
/// 5. `L_X L_Y - L_Y L_X = L_[X,Y]`
/// 6. `L_v L_X - L_X L_v = L_[v,X]`
/// 7. the three expressions for `L_{X^Y}` agree with `L_{X^Y}` itself.
pub fn cartan_selfcheck(
    dim: usize,
    seed: u64,
    trials: usize,
    mutation: Mutation,
) -> SelfCheckReport {
    assert!(dim >= 3, "Cartan self-check needs dim >= 3");
    let chart = Chart::new(dim);
    let mut sampler = FieldSampler::new(chart, seed);
    let mut failures = Vec::new();

    let iota = |v: &MultiVectorField, a: &DifferentialForm| -> DifferentialForm {
        let c = contract(v, a).expect("same chart");
        if mutation == Mutation::FlipContraction {
            c.neg()
        } else {
            c
        }
    };
    let lie = |v: &MultiVectorField, a: &DifferentialForm| -> DifferentialForm {
        let left = exterior_derivative(&iota(v, a)).expect("d");
        let right = iota(v, &exterior_derivative(a).expect("d"));
        if v.degree() % 2 == 0 {
            left.sub(&right).expect("grading")
        } else {
            left.add(&right).expect("grading")
        }
    };

    for trial in 0..trials {
        let x = sampler.vector_field();
        let y = sampler.vector_field();
        let v = sampler.bivector_field();
        let deg = 1 + (trial % 3).min(dim - 1);
        let a = sampler.form(deg);

        let mut check = |name: &str, lhs: &DifferentialForm, rhs: &DifferentialForm| {
            let defect = lhs.sub(rhs).ok().filter(|d| !d.is_zero());
            if let Some(d) = defect {
                failures.push(IdentityFailure {
                    identity: name.to_string(),
                    trial,
                    witness: format!("defect {} on X={}, Y={}, v={}, a={}", d, x, y, v, a),
                });
            }
        };

        // 1
        let lhs = iota(&x, &iota(&y, &a)).add(&iota(&y, &iota(&x, &a))).unwrap();
        check("iota_X iota_Y + iota_Y iota_X = 0", &lhs, &DifferentialForm::zero(chart, lhs.degree()));
        // 2
        let lhs = iota(&x, &iota(&v, &a)).sub(&iota(&v, &iota(&x, &a))).unwrap();
        check("iota_X iota_v - iota_v iota_X = 0", &lhs, &DifferentialForm::zero(chart, lhs.degree()));
        // 3
        let xy = schouten(&x, &y).unwrap();
        let lhs = lie(&x, &iota(&y, &a)).sub(&iota(&y, &lie(&x, &a))).unwrap();
        check("L_X iota_Y - iota_Y L_X = iota_[X,Y]", &lhs, &iota(&xy, &a));
        // 4
        let xv = schouten(&x, &v).unwrap();
        let lhs = lie(&x, &iota(&v, &a)).sub(&iota(&v, &lie(&x, &a))).unwrap();
        check("L_X iota_v - iota_v L_X = iota_[X,v]", &lhs, &iota(&xv, &a));
        // 5
        let lhs = lie(&x, &lie(&y, &a)).sub(&lie(&y, &lie(&x, &a))).unwrap();
        check("L_X L_Y - L_Y L_X = L_[X,Y]", &lhs, &lie(&xy, &a));
        // 6
        let vx = schouten(&v, &x).unwrap();
        let lhs = lie(&v, &lie(&x, &a)).sub(&lie(&x, &lie(&v, &a))).unwrap();
        check("L_v L_X - L_X L_v = L_[v,X]", &lhs, &lie(&vx, &a));
        // 7: all three displayed expressions for L_{X^Y}
        let wedge_lie = lie(&x.wedge(&y).unwrap(), &a);
        let e1 = lie(&y, &iota(&x, &a)).sub(&iota(&y, &lie(&x, &a))).unwrap();
        let e2 = iota(&x, &lie(&y, &a))
            .sub(&iota(&y, &lie(&x, &a)))
            .unwrap()
            .sub(&iota(&xy, &a))
            .unwrap();
        let e3 = lie(&y, &iota(&x, &a))
            .sub(&lie(&x, &iota(&y, &a)))
            .unwrap()
            .add(&iota(&xy, &a))
            .unwrap();
        check("L_{X^Y} = L_Y iota_X - iota_Y L_X", &wedge_lie, &e1);
        check("L_{X^Y} = iota_X L_Y - iota_Y L_X - iota_[X,Y]", &wedge_lie, &e2);
        check("L_{X^Y} = L_Y iota_X - L_X iota_Y + iota_[X,Y]", &wedge_lie, &e3);
    }
    SelfCheckReport { trials, failures }
}

/// An element of the naive observable space `C^inf(M) + Omega^1(M)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ObservablePair {
    pub f: ExpPoly,
    pub alpha: DifferentialForm,
}

impl ObservablePair {
    pub fn new(f: ExpPoly, alpha: DifferentialForm) -> Result<Self, CalcError> {
        if f.dim() != alpha.chart().dim {
            return Err(CalcError::ChartMismatch(f.dim(), alpha.chart().dim));
        }
        if alpha.degree() != 1 && !alpha.is_zero() {
            return Err(CalcError::DegreeMismatch {
                expected: 1,
                got: alpha.degree(),
            });
        }
        Ok(ObservablePair { f, alpha })
    }
}

/// Image of an observable pair under the endomorphism representation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EndoImage {
    /// Degree-1 input `X` acts as `(L_X, L_X)` on both components.
    Pair(ObservablePair),
    /// Degree-2 input acts through `Hom(Omega^1, C^inf)`; only the 1-form
    /// component contributes.
    Function(ExpPoly),
}

/// Action of a vector or bivector field on an observable pair.
pub fn endo_action(v: &MultiVectorField, obs: &ObservablePair) -> Result<EndoImage, CalcError> {
    match v.degree() {
        1 => Ok(EndoImage::Pair(ObservablePair {
            f: lie_derivative_fn(v, &obs.f)?,
            alpha: lie_derivative(v, &obs.alpha)?,
        })),
        2 => {
            let la = lie_derivative(v, &obs.alpha)?;
            Ok(EndoImage::Function(la.as_scalar().unwrap_or_else(|| {
                ExpPoly::zero(v.chart().dim)
            })))
        }
        d => Err(CalcError::UnsupportedDegree(d)),
    }
}

/// Verify on seeded samples that `X -> (L_X, L_X)`, `X ^ Y -> L_{X^Y}`,
/// `F_2 = 0` is a morphism of Lie 2-algebras into the endomorphism algebra
/// of the observable pairs: conditions (A1)-(A4), with (A2) checked on both
/// components and (A3) through the mixed endomorphism bracket
/// `tau_2^m(phi, (s,t)) = phi . t - s . phi`.
pub fn verify_endo_morphism(
    dim: usize,
    seed: u64,
    trials: usize,
    mutation: Mutation,
) -> SelfCheckReport {
    assert!(dim >= 3);
    let chart = Chart::new(dim);
    let mut sampler = FieldSampler::new(chart, seed);
    let mut failures = Vec::new();
    for trial in 0..trials {
        let x = sampler.vector_field();
        let y = sampler.vector_field();
        let v = sampler.bivector_field();
        let obs = ObservablePair {
            f: sampler.exppoly(),
            alpha: sampler.form(1),
        };

        // (A1): tau_1 . F_{1,-1} = F_{1,0} . nu_1, both sides zero maps.
        // Nothing to evaluate; recorded as structurally true.

        // (A2) on both components: [L_X, L_Y] = L_[X,Y]
        let xy = schouten(&x, &y).unwrap();
        let f_part = lie_derivative_fn(&x, &lie_derivative_fn(&y, &obs.f).unwrap())
            .unwrap()
            .sub(&lie_derivative_fn(&y, &lie_derivative_fn(&x, &obs.f).unwrap()).unwrap())
            .unwrap()
            .sub(&lie_derivative_fn(&xy, &obs.f).unwrap())
            .unwrap();
        let a_part = lie_derivative(&x, &lie_derivative(&y, &obs.alpha).unwrap())
            .unwrap()
            .sub(&lie_derivative(&y, &lie_derivative(&x, &obs.alpha).unwrap()).unwrap())
            .unwrap()
            .sub(&lie_derivative(&xy, &obs.alpha).unwrap())
            .unwrap();
        if !f_part.is_zero() || !a_part.is_zero() {
            failures.push(IdentityFailure {
                identity: "A2: [L_X, L_Y] = L_[X,Y]".into(),
                trial,
                witness: format!("defect ({}, {}) on X={}, Y={}", f_part, a_part, x, y),
            });
        }

        // (A3): L_[v,X] = tau_2^m(L_v, (L_X, L_X)) = L_v . L_X - L_X . L_v
        // as maps Omega^1 -> C^inf, evaluated on the sampled 1-form.
        let vx = schouten(&v, &x).unwrap();
        let lhs = lie_derivative(&vx, &obs.alpha)
            .unwrap()
            .as_scalar()
            .unwrap_or_else(|| ExpPoly::zero(dim));
        let first = lie_derivative(&v, &lie_derivative(&x, &obs.alpha).unwrap())
            .unwrap()
            .as_scalar()
            .unwrap_or_else(|| ExpPoly::zero(dim));
        let second = lie_derivative_fn(
            &x,
            &lie_derivative(&v, &obs.alpha)
                .unwrap()
                .as_scalar()
                .unwrap_or_else(|| ExpPoly::zero(dim)),
        )
        .unwrap();
        let rhs = if mutation == Mutation::FlipTau2m {
            second.sub(&first).unwrap()
        } else {
            first.sub(&second).unwrap()
        };
        let defect = lhs.sub(&rhs).unwrap();
        if !defect.is_zero() {
            failures.push(IdentityFailure {
                identity: "A3: L_[v,X] = [L_v, L_X]".into(),
                trial,
                witness: format!("defect {} on v={}, X={}, a={}", defect, v, x, obs.alpha),
            });
        }

        // (A4): with F_2 = 0 and tau_3 = 0 = nu_3 both sides vanish
        // identically; nothing to evaluate.
    }
    SelfCheckReport { trials, failures }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chart3() -> Chart {
        Chart::new(3)
    }

    fn ep(s: &str, dim: usize) -> ExpPoly {
        ExpPoly::parse(s, dim).unwrap()
    }

    fn mv(chart: Chart, deg: usize, terms: &[(&[usize], &str)]) -> MultiVectorField {
        MultiVectorField::from_terms(
            chart,
            deg,
            terms
                .iter()
                .map(|(idx, c)| (idx.to_vec(), ep(c, chart.dim))),
        )
        .unwrap()
    }

    fn df(chart: Chart, deg: usize, terms: &[(&[usize], &str)]) -> DifferentialForm {
        DifferentialForm::from_terms(
            chart,
            deg,
            terms
                .iter()
                .map(|(idx, c)| (idx.to_vec(), ep(c, chart.dim))),
        )
        .unwrap()
    }

    #[test]
    fn wedge_basis_vectors() {
        let c = chart3();
        let e1 = MultiVectorField::basis(c, &[1]).unwrap();
        let e2 = MultiVectorField::basis(c, &[2]).unwrap();
        assert_eq!(e1.wedge(&e2).unwrap(), MultiVectorField::basis(c, &[1, 2]).unwrap());
        assert!(e1.wedge(&e1).unwrap().is_zero());
    }

    #[test]
    fn wedge_transposition_sign() {
        let c = chart3();
        // (q1 dq2) ^ dq1 = -q1 dq1^dq2
        let a = df(c, 1, &[(&[2], "q1")]);
        let b = df(c, 1, &[(&[1], "1")]);
        assert_eq!(a.wedge(&b).unwrap(), df(c, 2, &[(&[1, 2], "-q1")]));
    }

    /// Independent oracle: evaluate a form on basis vectors as an
    /// alternating multilinear function via full antisymmetrization.
    fn contract_oracle(
        v_indices: &[usize],
        a: &DifferentialForm,
    ) -> DifferentialForm {
        let chart = a.chart();
        let p = a.degree();
        let n = v_indices.len();
        if p < n {
            return DifferentialForm::zero(chart, 0);
        }
        let mut out = DifferentialForm::zero(chart, p - n);
        for (aj, ac) in a.terms() {
            // a = ac * dq_{j1} ^ ... ^ dq_{jp}; evaluate slots 1..n on
            // e_{v1}..e_{vn} by summing over position assignments.
            let positions: Vec<usize> = (0..p).collect();
            fn assignments(
                avail: &[usize],
                k: usize,
                cur: &mut Vec<usize>,
                all: &mut Vec<Vec<usize>>,
            ) {
                if cur.len() == k {
                    all.push(cur.clone());
                    return;
                }
                for &p in avail {
                    if !cur.contains(&p) {
                        cur.push(p);
                        assignments(avail, k, cur, all);
                        cur.pop();
                    }
                }
            }
            let mut all = Vec::new();
            assignments(&positions, n, &mut Vec::new(), &mut all);
            for assign in all {
                // slot i gets dq_{j(assign_i)} applied to e_{v_i}
                if assign
                    .iter()
                    .zip(v_indices)
                    .any(|(&pos, &vi)| aj[pos] != vi)
                {
                    continue;
                }
                let rest: Vec<usize> = (0..p).filter(|q| !assign.contains(q)).map(|q| aj[q]).collect();
                // sign of the permutation sending (assign, rest-positions) to 0..p
                let mut perm: Vec<usize> = assign.clone();
                perm.extend((0..p).filter(|q| !assign.contains(q)));
                let mut sign = 1i32;
                let mut pv = perm.clone();
                for i in 1..pv.len() {
                    let mut j = i;
                    while j > 0 && pv[j - 1] > pv[j] {
                        pv.swap(j - 1, j);
                        sign = -sign;
                        j -= 1;
                    }
                }
                let term = DifferentialForm::from_terms(
                    chart,
                    p - n,
                    [(
                        rest,
                        if sign < 0 { ac.neg() } else { ac.clone() },
                    )],
                )
                .unwrap();
                out = out.add(&term).unwrap();
            }
        }
        out
    }

    #[test]
    fn contract_single_insertion() {
        let c = chart3();
        let vol = df(c, 3, &[(&[1, 2, 3], "1")]);
        let e1 = MultiVectorField::basis(c, &[1]).unwrap();
        assert_eq!(contract(&e1, &vol).unwrap(), df(c, 2, &[(&[2, 3], "1")]));
    }

    #[test]
    fn contract_bivector_matches_determinant_oracle() {
        let c = chart3();
        let vol = df(c, 3, &[(&[1, 2, 3], "1")]);
        let e12 = MultiVectorField::basis(c, &[1, 2]).unwrap();
        let got = contract(&e12, &vol).unwrap();
        assert_eq!(got, contract_oracle(&[1, 2], &vol));
        assert_eq!(got, df(c, 1, &[(&[3], "1")]));
        // and on a messier form
        let a = df(c, 2, &[(&[1, 3], "q2"), (&[2, 3], "exp(q1)")]);
        for pair in [[1usize, 2], [1, 3], [2, 3]] {
            let v = MultiVectorField::basis(c, &pair).unwrap();
            assert_eq!(contract(&v, &a).unwrap(), contract_oracle(&pair, &a));
        }
    }

    #[test]
    fn contract_low_degree_is_zero() {
        let c = chart3();
        let dq1 = df(c, 1, &[(&[1], "1")]);
        let e12 = MultiVectorField::basis(c, &[1, 2]).unwrap();
        assert!(contract(&e12, &dq1).unwrap().is_zero());
    }

    #[test]
    fn exterior_derivative_examples() {
        let c = chart3();
        assert_eq!(
            exterior_derivative(&df(c, 1, &[(&[3], "q2")])).unwrap(),
            df(c, 2, &[(&[2, 3], "1")])
        );
        assert_eq!(
            exterior_derivative(&df(c, 1, &[(&[2], "exp(q1)")])).unwrap(),
            df(c, 2, &[(&[1, 2], "exp(q1)")])
        );
        assert!(exterior_derivative(&df(c, 1, &[(&[1], "1")])).unwrap().is_zero());
    }

    #[test]
    fn d_squared_zero_on_samples() {
        let c = chart3();
        let mut s = FieldSampler::new(c, 99);
        for deg in 0..=2 {
            for _ in 0..20 {
                let a = s.form(deg);
                assert!(exterior_derivative(&exterior_derivative(&a).unwrap())
                    .unwrap()
                    .is_zero());
            }
        }
    }

    /// Classical coordinate formula for the Lie derivative of a 1-form,
    /// used as an independent oracle for |v| = 1.
    fn lie_oracle_vector_oneform(
        x: &MultiVectorField,
        a: &DifferentialForm,
    ) -> DifferentialForm {
        let chart = a.chart();
        let dim = chart.dim;
        let mut comps = vec![ExpPoly::zero(dim); dim];
        let xc: Vec<ExpPoly> = (1..=dim)
            .map(|i| x.coeff(&[i]))
            .collect();
        let ac: Vec<ExpPoly> = (1..=dim).map(|j| a.coeff(&[j])).collect();
        for j in 0..dim {
            for i in 0..dim {
                comps[j] = comps[j]
                    .add(&xc[i].mul(&ac[j].partial(i + 1).unwrap()).unwrap())
                    .unwrap();
                comps[j] = comps[j]
                    .add(&ac[i].mul(&xc[i].partial(j + 1).unwrap()).unwrap())
                    .unwrap();
            }
        }
        DifferentialForm::from_terms(
            chart,
            1,
            comps.into_iter().enumerate().map(|(j, c)| (vec![j + 1], c)),
        )
        .unwrap()
    }

    #[test]
    fn lie_derivative_matches_classical_formula() {
        let c = chart3();
        let x = mv(c, 1, &[(&[1], "1")]);
        let a = df(c, 1, &[(&[2], "q1")]);
        let got = lie_derivative(&x, &a).unwrap();
        assert_eq!(got, df(c, 1, &[(&[2], "1")]));
        assert_eq!(got, lie_oracle_vector_oneform(&x, &a));
        let mut s = FieldSampler::new(c, 12345);
        for _ in 0..25 {
            let x = s.vector_field();
            let a = s.form(1);
            assert_eq!(lie_derivative(&x, &a).unwrap(), lie_oracle_vector_oneform(&x, &a));
        }
    }

    #[test]
    fn lie_derivative_bivector_example() {
        let c = chart3();
        let v = MultiVectorField::basis(c, &[1, 2]).unwrap();
        let a = df(c, 2, &[(&[1, 2], "q1*q2")]);
        assert_eq!(
            lie_derivative(&v, &a).unwrap(),
            df(c, 1, &[(&[1], "q2"), (&[2], "q1")])
        );
        assert!(lie_derivative(&v, &DifferentialForm::zero(c, 2)).unwrap().is_zero());
    }

    #[test]
    fn schouten_constant_fields_commute() {
        let c = chart3();
        let e1 = MultiVectorField::basis(c, &[1]).unwrap();
        let e2 = MultiVectorField::basis(c, &[2]).unwrap();
        assert!(schouten(&e1, &e2).unwrap().is_zero());
    }

    #[test]
    fn schouten_leibniz_examples() {
        let c = chart3();
        // [q1 e2, e1 ^ e3] = -e2 ^ e3
        let x = mv(c, 1, &[(&[2], "q1")]);
        let w = MultiVectorField::basis(c, &[1, 3]).unwrap();
        assert_eq!(schouten(&x, &w).unwrap(), mv(c, 2, &[(&[2, 3], "-1")]));
        // [e1, q1 e1 ^ e2] = e1 ^ e2
        let x = MultiVectorField::basis(c, &[1]).unwrap();
        let w = mv(c, 2, &[(&[1, 2], "q1")]);
        assert_eq!(schouten(&x, &w).unwrap(), mv(c, 2, &[(&[1, 2], "1")]));
        // antisymmetry of the (2,1) case
        assert_eq!(
            schouten(&w, &x).unwrap(),
            schouten(&x, &w).unwrap().neg()
        );
    }

    #[test]
    fn schouten_rejects_unsupported_degrees() {
        let c = chart3();
        let v = MultiVectorField::basis(c, &[1, 2]).unwrap();
        assert_eq!(
            schouten(&v, &v),
            Err(CalcError::UnsupportedSchouten(2, 2))
        );
    }

    #[test]
    fn schouten_jacobi_for_bivectors() {
        // [v,[X,Y]] = [[v,X],Y] - [[v,Y],X] on random fields (relation R5
        // of the multivector Lie 2-algebra), plus Jacobi on vector fields.
        let c = chart3();
        let mut s = FieldSampler::new(c, 777);
        for _ in 0..15 {
            let x = s.vector_field();
            let y = s.vector_field();
            let z = s.vector_field();
            let v = s.bivector_field();
            let jac = schouten(&x, &schouten(&y, &z).unwrap())
                .unwrap()
                .add(&schouten(&y, &schouten(&z, &x).unwrap()).unwrap())
                .unwrap()
                .add(&schouten(&z, &schouten(&x, &y).unwrap()).unwrap())
                .unwrap();
            assert!(jac.is_zero(), "vector field Jacobi failed");
            let lhs = schouten(&schouten(&x, &y).unwrap(), &v).unwrap().neg();
            let m1 = schouten(&schouten(&y, &v).unwrap(), &x).unwrap();
            let m2 = schouten(&schouten(&v, &x).unwrap(), &y).unwrap();
            let total = lhs.add(&m1.neg()).unwrap().add(&m2.neg()).unwrap();
            assert!(total.is_zero(), "mixed Jacobi failed");
        }
    }

    #[test]
    fn contract_is_linear_in_the_multivector() {
        let c = chart3();
        let mut s = FieldSampler::new(c, 31);
        for _ in 0..10 {
            let v = s.bivector_field();
            let w = s.bivector_field();
            let f = s.exppoly();
            let a = s.form(2);
            let lhs = contract(&v.scale(&f).unwrap().add(&w).unwrap(), &a).unwrap();
            let rhs = contract(&v, &a)
                .unwrap()
                .scale(&f)
                .unwrap()
                .add(&contract(&w, &a).unwrap())
                .unwrap();
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn cartan_selfcheck_passes() {
        let report = cartan_selfcheck(3, 42, 30, Mutation::None);
        assert!(report.passed(), "failures: {:?}", report.failures);
    }

    #[test]
    fn cartan_selfcheck_zero_trials_is_empty() {
        let report = cartan_selfcheck(3, 42, 0, Mutation::None);
        assert!(report.passed());
        assert_eq!(report.trials, 0);
    }

    #[test]
    fn cartan_selfcheck_detects_flipped_contraction() {
        let report = cartan_selfcheck(3, 42, 10, Mutation::FlipContraction);
        assert!(!report.passed());
        assert!(report
            .failures
            .iter()
            .any(|f| f.identity.contains("iota_[X,v]")));
    }

    #[test]
    fn endo_action_examples() {
        let c = chart3();
        let e1 = MultiVectorField::basis(c, &[1]).unwrap();
        let obs = ObservablePair::new(ep("q1", 3), df(c, 1, &[(&[3], "q2")])).unwrap();
        match endo_action(&e1, &obs).unwrap() {
            EndoImage::Pair(p) => {
                assert_eq!(p.f, ExpPoly::one(3));
                assert!(p.alpha.is_zero());
            }
            _ => panic!("expected pair"),
        }
        // e1 ^ e2 acting on q1 dq2: L_{e1^e2}(q1 dq2) = -iota(d(q1 dq2)) = -1
        let e12 = MultiVectorField::basis(c, &[1, 2]).unwrap();
        let obs = ObservablePair::new(ExpPoly::zero(3), df(c, 1, &[(&[2], "q1")])).unwrap();
        match endo_action(&e12, &obs).unwrap() {
            EndoImage::Function(f) => assert_eq!(f, ep("-1", 3)),
            _ => panic!("expected function"),
        }
        // zero observable maps to zero
        let zero = ObservablePair::new(ExpPoly::zero(3), DifferentialForm::zero(c, 1)).unwrap();
        match endo_action(&e1, &zero).unwrap() {
            EndoImage::Pair(p) => {
                assert!(p.f.is_zero());
                assert!(p.alpha.is_zero());
            }
            _ => panic!(),
        }
    }

    #[test]
    fn endo_morphism_verification() {
        let report = verify_endo_morphism(3, 7, 25, Mutation::None);
        assert!(report.passed(), "failures: {:?}", report.failures);
        let broken = verify_endo_morphism(3, 7, 10, Mutation::FlipTau2m);
        assert!(!broken.passed());
        assert!(broken.failures.iter().any(|f| f.identity.starts_with("A3")));
    }

    #[test]
    fn display_parse_round_trip() {
        let c = chart3();
        let mut sampler = FieldSampler::new(c, 31337);
        for _ in 0..25 {
            let a = sampler.form(2);
            assert_eq!(
                crate::defs::parse_form(&a.to_string(), c, Some(2)).unwrap(),
                a
            );
            let v = sampler.bivector_field();
            assert_eq!(
                crate::defs::parse_field(&v.to_string(), c, Some(2)).unwrap(),
                v
            );
        }
    }
}
