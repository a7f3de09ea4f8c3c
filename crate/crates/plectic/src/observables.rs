//! 2-plectic structures on a chart and the observable Lie 2-algebras they
//! carry: Hamiltonian forms, Hamiltonian pairs, the two-kernel, the
//! bracket structures on the graded observable spaces, and the morphisms
//! between them (the inclusion of the form-only observables, the projection
//! back, and the gradient onto multivector fields).
//!
//! A 2-plectic form here is a degree-3 form with constant rational
//! coefficients; every worked example lives on such a chart, closedness is
//! automatic, and Hamiltonian solving becomes an exact constant-matrix
//! linear system with `ExpPoly` right-hand sides. Non-constant forms are
//! rejected.

use crate::calculus::{
    contract, exterior_derivative, schouten, CalcError, Chart, DifferentialForm,
    MultiVectorField,
};
use crate::linalg::{kernel_basis, Mat, Solver};
use crate::ring::{ExpPoly, Rational};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq, Clone)]
pub enum PlecticError {
    #[error("the 2-plectic form must have degree 3, got {0}")]
    WrongDegree(usize),
    #[error("the 2-plectic form must have constant rational coefficients")]
    NonConstant,
    #[error("the form is degenerate (rank {rank} < {dim})")]
    Degenerate { rank: usize, dim: usize },
    #[error("the 1-form is not Hamiltonian: the contraction system is inconsistent")]
    NotHamiltonianForm,
    #[error("the function is not Hamiltonian: the contraction system is inconsistent")]
    NotHamiltonianFunction,
    #[error("not a Hamiltonian pair: d f != -i_v omega")]
    InvalidPair,
    #[error("Hamiltonian vector field mismatch: d alpha != -i_X omega")]
    InvalidVectorField,
    #[error("gradient correction map violates its defining conditions: {0}")]
    InvalidPsi2(String),
    #[error(transparent)]
    Calc(#[from] CalcError),
}

/// Increasing pairs `(i, j)`, 1-based, in lexicographic order; the row
/// space of the contraction matrices.
fn pairs(dim: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for i in 1..=dim {
        for j in i + 1..=dim {
            out.push((i, j));
        }
    }
    out
}

/// A constant-coefficient 2-plectic (closed nondegenerate 3-)form, with the
/// exact contraction systems prepared for repeated Hamiltonian solves.
#[derive(Debug, Clone)]
pub struct PlecticForm {
    pub chart: Chart,
    pub omega: DifferentialForm,
    /// `i_X omega` as a matrix: rows over increasing pairs, columns over
    /// coordinates.
    vec_matrix: Mat,
    vec_solver: Solver,
    /// `i_v omega` for bivectors: rows over coordinates, columns over
    /// increasing pairs.
    biv_matrix: Mat,
    biv_solver: Solver,
}

impl PlecticForm {
    /// Accept any constant degree-3 form; nondegeneracy is reported by
    /// [`PlecticForm::check`], not required for construction (degenerate
    /// forms still have a two-kernel worth computing).
    pub fn new(omega: DifferentialForm) -> Result<Self, PlecticError> {
        if omega.degree() != 3 {
            return Err(PlecticError::WrongDegree(omega.degree()));
        }
        if !omega.is_constant() {
            return Err(PlecticError::NonConstant);
        }
        let chart = omega.chart();
        let dim = chart.dim;
        let prs = pairs(dim);
        let mut vec_matrix = Mat::zeros(prs.len(), dim);
        for i in 1..=dim {
            let contraction = contract(&MultiVectorField::basis(chart, &[i])?, &omega)?;
            for (row, &(a, b)) in prs.iter().enumerate() {
                if let Some(c) = contraction.coeff(&[a, b]).as_constant() {
                    vec_matrix[(row, i - 1)] = c;
                }
            }
        }
        let mut biv_matrix = Mat::zeros(dim, prs.len());
        for (col, &(a, b)) in prs.iter().enumerate() {
            let contraction = contract(&MultiVectorField::basis(chart, &[a, b])?, &omega)?;
            for k in 1..=dim {
                if let Some(c) = contraction.coeff(&[k]).as_constant() {
                    biv_matrix[(k - 1, col)] = c;
                }
            }
        }
        let vec_solver = Solver::new(&vec_matrix);
        let biv_solver = Solver::new(&biv_matrix);
        Ok(PlecticForm {
            chart,
            omega,
            vec_matrix,
            vec_solver,
            biv_matrix,
            biv_solver,
        })
    }

    pub fn parse(text: &str, dim: usize) -> Result<Self, PlecticError> {
        let omega = crate::defs::parse_form(text, Chart::new(dim), Some(3))
            .map_err(PlecticError::Calc)?;
        Self::new(omega)
    }

    /// Closedness (automatic for constant coefficients, still computed) and
    /// exact injectivity of `X -> i_X omega`; the kernel basis is reported
    /// when degenerate.
    pub fn check(&self) -> PlecticCheck {
        let closed = exterior_derivative(&self.omega)
            .map(|d| d.is_zero())
            .unwrap_or(false);
        let rank = self.vec_solver.rank();
        let kernel: Vec<MultiVectorField> = kernel_basis(&self.vec_matrix)
            .into_iter()
            .map(|v| constant_vector(self.chart, &v))
            .collect();
        PlecticCheck {
            closed,
            rank,
            dim: self.chart.dim,
            degenerate_kernel: kernel,
        }
    }

    pub fn is_nondegenerate(&self) -> bool {
        self.vec_solver.rank() == self.chart.dim
    }

    /// Basis of the two-kernel `{ u : i_u omega = 0 }` inside the constant
    /// bivectors.
    pub fn kernel2(&self) -> Vec<MultiVectorField> {
        kernel_basis(&self.biv_matrix)
            .into_iter()
            .map(|v| constant_bivector(self.chart, &v))
            .collect()
    }

    /// Contraction `i_X omega` of a vector field with `ExpPoly`
    /// coefficients, through the exact matrix.
    pub fn contract_vector(&self, x: &MultiVectorField) -> Result<DifferentialForm, CalcError> {
        contract(x, &self.omega)
    }

    /// Solve `i_X omega = beta` for `X`; `None` when inconsistent.
    fn solve_vector_contraction(
        &self,
        beta: &DifferentialForm,
    ) -> Result<Option<MultiVectorField>, CalcError> {
        let dim = self.chart.dim;
        let prs = pairs(dim);
        let rhs: Vec<ExpPoly> = prs.iter().map(|&(a, b)| beta.coeff(&[a, b])).collect();
        let Some(coeffs) = self
            .vec_solver
            .solve_with_zero(&rhs, &ExpPoly::zero(dim))
        else {
            return Ok(None);
        };
        MultiVectorField::from_terms(
            self.chart,
            1,
            coeffs
                .into_iter()
                .enumerate()
                .map(|(i, c)| (vec![i + 1], c)),
        )
        .map(Some)
    }

    /// Solve `i_v omega = beta` for a bivector `v` (pseudo-solve with free
    /// variables zero); `None` when inconsistent.
    fn solve_bivector_contraction(
        &self,
        beta: &DifferentialForm,
    ) -> Result<Option<MultiVectorField>, CalcError> {
        let dim = self.chart.dim;
        let rhs: Vec<ExpPoly> = (1..=dim).map(|k| beta.coeff(&[k])).collect();
        let Some(coeffs) = self
            .biv_solver
            .solve_with_zero(&rhs, &ExpPoly::zero(dim))
        else {
            return Ok(None);
        };
        let prs = pairs(dim);
        MultiVectorField::from_terms(
            self.chart,
            2,
            coeffs
                .into_iter()
                .enumerate()
                .map(|(c, v)| (vec![prs[c].0, prs[c].1], v)),
        )
        .map(Some)
    }
}

fn constant_vector(chart: Chart, coords: &[Rational]) -> MultiVectorField {
    MultiVectorField::from_terms(
        chart,
        1,
        coords
            .iter()
            .enumerate()
            .map(|(i, c)| (vec![i + 1], ExpPoly::constant(chart.dim, c.clone()))),
    )
    .expect("constant vector")
}

fn constant_bivector(chart: Chart, coords: &[Rational]) -> MultiVectorField {
    let prs = pairs(chart.dim);
    MultiVectorField::from_terms(
        chart,
        2,
        coords.iter().enumerate().map(|(c, v)| {
            (
                vec![prs[c].0, prs[c].1],
                ExpPoly::constant(chart.dim, v.clone()),
            )
        }),
    )
    .expect("constant bivector")
}

#[derive(Debug, Clone)]
pub struct PlecticCheck {
    pub closed: bool,
    pub rank: usize,
    pub dim: usize,
    pub degenerate_kernel: Vec<MultiVectorField>,
}

impl PlecticCheck {
    pub fn nondegenerate(&self) -> bool {
        self.rank == self.dim
    }
}

/// A Hamiltonian 1-form with its Hamiltonian vector field:
/// `d alpha = -i_X omega`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HamiltonianForm {
    pub alpha: DifferentialForm,
    pub x_alpha: MultiVectorField,
}

impl HamiltonianForm {
    /// Solve for the Hamiltonian vector field, unique by nondegeneracy.
    /// Degenerate forms are rejected up front rather than producing a
    /// non-unique answer.
    pub fn solve(alpha: DifferentialForm, omega: &PlecticForm) -> Result<Self, PlecticError> {
        if !omega.is_nondegenerate() {
            return Err(PlecticError::Degenerate {
                rank: omega.check().rank,
                dim: omega.chart.dim,
            });
        }
        let target = exterior_derivative(&alpha)?.neg();
        match omega.solve_vector_contraction(&target)? {
            Some(x_alpha) => Ok(HamiltonianForm { alpha, x_alpha }),
            None => Err(PlecticError::NotHamiltonianForm),
        }
    }

    /// Accept a stated vector field after checking `d alpha = -i_X omega`.
    pub fn with_vector_field(
        alpha: DifferentialForm,
        x_alpha: MultiVectorField,
        omega: &PlecticForm,
    ) -> Result<Self, PlecticError> {
        let lhs = exterior_derivative(&alpha)?;
        let rhs = omega.contract_vector(&x_alpha)?.neg();
        if lhs.sub(&rhs)?.is_zero() {
            Ok(HamiltonianForm { alpha, x_alpha })
        } else {
            Err(PlecticError::InvalidVectorField)
        }
    }

    pub fn zero(chart: Chart) -> Self {
        HamiltonianForm {
            alpha: DifferentialForm::zero(chart, 1),
            x_alpha: MultiVectorField::zero(chart, 1),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self, PlecticError> {
        Ok(HamiltonianForm {
            alpha: self.alpha.add(&other.alpha)?,
            x_alpha: self.x_alpha.add(&other.x_alpha)?,
        })
    }

    pub fn scale_rat(&self, c: &Rational) -> Self {
        HamiltonianForm {
            alpha: self.alpha.scale_rat(c),
            x_alpha: self.x_alpha.scale_rat(c),
        }
    }

    pub fn neg(&self) -> Self {
        HamiltonianForm {
            alpha: self.alpha.neg(),
            x_alpha: self.x_alpha.neg(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.alpha.is_zero() && self.x_alpha.is_zero()
    }
}

/// A Hamiltonian pair `(f, v)` with `d f = -i_v omega`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HamiltonianPair {
    pub f: ExpPoly,
    pub v: MultiVectorField,
}

impl HamiltonianPair {
    /// Solve `d f = -i_v omega` for a particular bivector `v` by the
    /// deterministic pseudo-solve; the full solution set is `v` plus the
    /// two-kernel. Degenerate forms are rejected up front.
    pub fn solve(f: ExpPoly, omega: &PlecticForm) -> Result<Self, PlecticError> {
        if !omega.is_nondegenerate() {
            return Err(PlecticError::Degenerate {
                rank: omega.check().rank,
                dim: omega.chart.dim,
            });
        }
        let chart = omega.chart;
        let df = exterior_derivative(&DifferentialForm::scalar(chart, f.clone())?)?;
        match omega.solve_bivector_contraction(&df.neg())? {
            Some(v) => Ok(HamiltonianPair { f, v }),
            None => Err(PlecticError::NotHamiltonianFunction),
        }
    }

    /// Accept a stated pair after checking its defining identity.
    pub fn checked(
        f: ExpPoly,
        v: MultiVectorField,
        omega: &PlecticForm,
    ) -> Result<Self, PlecticError> {
        let pair = HamiltonianPair { f, v };
        if pair.is_valid(omega)? {
            Ok(pair)
        } else {
            Err(PlecticError::InvalidPair)
        }
    }

    pub fn is_valid(&self, omega: &PlecticForm) -> Result<bool, PlecticError> {
        let chart = omega.chart;
        let df = exterior_derivative(&DifferentialForm::scalar(chart, self.f.clone())?)?;
        let rhs = contract(&self.v, &omega.omega)?.neg();
        Ok(df.sub(&rhs)?.is_zero())
    }

    pub fn zero(chart: Chart) -> Self {
        HamiltonianPair {
            f: ExpPoly::zero(chart.dim),
            v: MultiVectorField::zero(chart, 2),
        }
    }
}

/// An element of the graded observable space: degree `-1` elements are
/// `(f~, (f, v))` with a Hamiltonian pair, degree 0 elements are
/// Hamiltonian forms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Observable {
    DegreeM1(ObsM1),
    Degree0(HamiltonianForm),
}

/// The degree `-1` component `(f~, (f, v))`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ObsM1 {
    pub f_tilde: ExpPoly,
    pub pair: HamiltonianPair,
}

impl ObsM1 {
    pub fn zero(chart: Chart) -> Self {
        ObsM1 {
            f_tilde: ExpPoly::zero(chart.dim),
            pair: HamiltonianPair::zero(chart),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.f_tilde.is_zero() && self.pair.f.is_zero() && self.pair.v.is_zero()
    }

    pub fn add(&self, other: &Self) -> Result<Self, PlecticError> {
        Ok(ObsM1 {
            f_tilde: self.f_tilde.add(&other.f_tilde).map_err(CalcError::from)?,
            pair: HamiltonianPair {
                f: self.pair.f.add(&other.pair.f).map_err(CalcError::from)?,
                v: self.pair.v.add(&other.pair.v)?,
            },
        })
    }

    pub fn neg(&self) -> Self {
        ObsM1 {
            f_tilde: self.f_tilde.neg(),
            pair: HamiltonianPair {
                f: self.pair.f.neg(),
                v: self.pair.v.neg(),
            },
        }
    }

    pub fn sub(&self, other: &Self) -> Result<Self, PlecticError> {
        self.add(&other.neg())
    }

    pub fn scale_rat(&self, c: &Rational) -> Self {
        ObsM1 {
            f_tilde: self.f_tilde.scale(c),
            pair: HamiltonianPair {
                f: self.pair.f.scale(c),
                v: self.pair.v.scale_rat(c),
            },
        }
    }
}

/// `l1` of the extended observable algebra: `(f~, (f, v)) -> d f~` with the
/// zero Hamiltonian vector field.
pub fn d2t_l1(obs: &ObsM1, omega: &PlecticForm) -> Result<HamiltonianForm, PlecticError> {
    let chart = omega.chart;
    let alpha = exterior_derivative(&DifferentialForm::scalar(chart, obs.f_tilde.clone())?)?;
    Ok(HamiltonianForm {
        alpha,
        x_alpha: MultiVectorField::zero(chart, 1),
    })
}

/// Pure bracket: `l2p(a, b) = i_{X_a ^ X_b} omega`, whose Hamiltonian
/// vector field is the commutator of the two fields.
pub fn d2t_l2p(
    a: &HamiltonianForm,
    b: &HamiltonianForm,
    omega: &PlecticForm,
) -> Result<HamiltonianForm, PlecticError> {
    let alpha = contract(&a.x_alpha.wedge(&b.x_alpha)?, &omega.omega)?;
    let x = schouten(&a.x_alpha, &b.x_alpha)?;
    HamiltonianForm::with_vector_field(alpha, x, omega)
}

/// Mixed bracket with the degree `-1` argument first:
/// `l2m((f~, (f, v)), alpha) = (0, (i_{v ^ X_alpha} omega, [v, X_alpha]))`.
/// The output is itself a valid Hamiltonian pair; this is checked.
pub fn d2t_l2m(
    obs: &ObsM1,
    alpha: &HamiltonianForm,
    omega: &PlecticForm,
) -> Result<ObsM1, PlecticError> {
    let chart = omega.chart;
    let f = contract(&obs.pair.v.wedge(&alpha.x_alpha)?, &omega.omega)?
        .as_scalar()
        .unwrap_or_else(|| ExpPoly::zero(chart.dim));
    let v = schouten(&obs.pair.v, &alpha.x_alpha)?;
    let pair = HamiltonianPair::checked(f, v, omega)?;
    Ok(ObsM1 {
        f_tilde: ExpPoly::zero(chart.dim),
        pair,
    })
}

/// `l3(alpha, beta, gamma) = (-i_{X^X^X} omega, (0, 0))`.
pub fn d2t_l3(
    a: &HamiltonianForm,
    b: &HamiltonianForm,
    c: &HamiltonianForm,
    omega: &PlecticForm,
) -> Result<ObsM1, PlecticError> {
    let chart = omega.chart;
    let triple = a.x_alpha.wedge(&b.x_alpha)?.wedge(&c.x_alpha)?;
    let f_tilde = contract(&triple, &omega.omega)?
        .as_scalar()
        .unwrap_or_else(|| ExpPoly::zero(chart.dim))
        .neg();
    Ok(ObsM1 {
        f_tilde,
        pair: HamiltonianPair::zero(chart),
    })
}

/// Projection onto the function-pair observable view: the bivector is
/// forgotten, keeping `(f~, f)`. The mixed-bracket function component does
/// not depend on the choice of bivector, so this view carries the same
/// bracket values.
pub fn d2_project(obs: &ObsM1) -> (ExpPoly, ExpPoly) {
    (obs.f_tilde.clone(), obs.pair.f.clone())
}

/// Brackets of the form-only observable algebra: `l1(f) = d f`,
/// `l2(a, b) = i_{X_a ^ X_b} omega`, `l3(a, b, c) = -i_{X^X^X} omega`.
pub fn l2r_l1(f: &ExpPoly, omega: &PlecticForm) -> Result<HamiltonianForm, PlecticError> {
    d2t_l1(
        &ObsM1 {
            f_tilde: f.clone(),
            pair: HamiltonianPair::zero(omega.chart),
        },
        omega,
    )
}

pub fn l2r_l2(
    a: &HamiltonianForm,
    b: &HamiltonianForm,
    omega: &PlecticForm,
) -> Result<HamiltonianForm, PlecticError> {
    d2t_l2p(a, b, omega)
}

pub fn l2r_l3(
    a: &HamiltonianForm,
    b: &HamiltonianForm,
    c: &HamiltonianForm,
    omega: &PlecticForm,
) -> Result<ExpPoly, PlecticError> {
    Ok(d2t_l3(a, b, c, omega)?.f_tilde)
}

/// An element of the form-only observable algebra.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum L2Element {
    DegreeM1(ExpPoly),
    Degree0(HamiltonianForm),
}

/// Inclusion of the form-only observables: identity in degree 0,
/// `f~ -> (f~, (0, 0))` in degree `-1`.
pub fn morphism_i(x: &L2Element, chart: Chart) -> Observable {
    match x {
        L2Element::DegreeM1(f) => Observable::DegreeM1(ObsM1 {
            f_tilde: f.clone(),
            pair: HamiltonianPair::zero(chart),
        }),
        L2Element::Degree0(h) => Observable::Degree0(h.clone()),
    }
}

/// Projection back onto the form-only observables: identity in degree 0,
/// first projection in degree `-1`. `morphism_phi . morphism_i = id`.
pub fn morphism_phi(x: &Observable) -> L2Element {
    match x {
        Observable::DegreeM1(o) => L2Element::DegreeM1(o.f_tilde.clone()),
        Observable::Degree0(h) => L2Element::Degree0(h.clone()),
    }
}

/// Optional correction term for the gradient: an alternating table on
/// sampled pairs of Hamiltonian forms.
#[derive(Debug, Clone)]
pub struct Psi2Samples {
    /// `(alpha, beta) -> Psi_2(alpha, beta)` sample triples.
    pub samples: Vec<(HamiltonianForm, HamiltonianForm, MultiVectorField)>,
}

impl Psi2Samples {
    fn lookup(&self, a: &HamiltonianForm, b: &HamiltonianForm) -> Option<MultiVectorField> {
        for (x, y, v) in &self.samples {
            if x == a && y == b {
                return Some(v.clone());
            }
            if x == b && y == a {
                return Some(v.neg());
            }
        }
        None
    }

    /// The correction must kill exact forms and satisfy the cyclic bracket
    /// compatibility on every sample triple it covers.
    pub fn validate(&self, omega: &PlecticForm) -> Result<(), PlecticError> {
        for (a, _, _) in &self.samples {
            // Psi_2(d f~, alpha) = 0 whenever the first argument is exact,
            // detected here by a vanishing Hamiltonian vector field.
            if a.x_alpha.is_zero() {
                for (x, y, v) in &self.samples {
                    if x == a && !v.is_zero() {
                        return Err(PlecticError::InvalidPsi2(format!(
                            "Psi_2 must vanish on exact first arguments, got {} on ({}, {})",
                            v, x.alpha, y.alpha
                        )));
                    }
                }
            }
        }
        // cyclic condition on sample triples that are fully covered
        let forms: Vec<&HamiltonianForm> = self
            .samples
            .iter()
            .flat_map(|(a, b, _)| [a, b])
            .collect();
        for a in &forms {
            for b in &forms {
                for c in &forms {
                    let (Some(pab), Some(pbc), Some(pca)) = (
                        self.lookup(a, b),
                        self.lookup(b, c),
                        self.lookup(c, a),
                    ) else {
                        continue;
                    };
                    let lab = d2t_l2p(a, b, omega)?;
                    let lbc = d2t_l2p(b, c, omega)?;
                    let lca = d2t_l2p(c, a, omega)?;
                    let (Some(t1), Some(t2), Some(t3)) = (
                        self.lookup(&lab, c),
                        self.lookup(&lbc, a),
                        self.lookup(&lca, b),
                    ) else {
                        continue;
                    };
                    let lhs = t1.add(&t2)?.add(&t3)?;
                    let rhs = schouten(&a.x_alpha, &pbc)?
                        .add(&schouten(&b.x_alpha, &pca)?)?
                        .add(&schouten(&c.x_alpha, &pab)?)?;
                    if !lhs.sub(&rhs)?.is_zero() {
                        return Err(PlecticError::InvalidPsi2(format!(
                            "cyclic bracket condition fails on ({}, {}, {})",
                            a.alpha, b.alpha, c.alpha
                        )));
                    }
                }
            }
        }
        Ok(())
    }
}

/// The gradient onto multivector fields: degree `-1` observables map to
/// their stored bivector, degree 0 observables to their Hamiltonian vector
/// field. Strict (no correction term) unless `psi2` is supplied, in which
/// case the samples are validated first.
pub fn gradient_psi(
    x: &Observable,
    psi2: Option<&Psi2Samples>,
    omega: &PlecticForm,
) -> Result<MultiVectorField, PlecticError> {
    if let Some(table) = psi2 {
        table.validate(omega)?;
    }
    Ok(match x {
        Observable::DegreeM1(o) => o.pair.v.clone(),
        Observable::Degree0(h) => h.x_alpha.clone(),
    })
}

/// `L_v omega = 0`, equivalently `d i_v omega = 0` for closed `omega`.
pub fn is_multisymplectic(
    v: &MultiVectorField,
    omega: &PlecticForm,
) -> Result<bool, PlecticError> {
    let contraction = contract(v, &omega.omega)?;
    Ok(exterior_derivative(&contraction)?.is_zero())
}
