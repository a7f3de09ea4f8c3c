//! 2-actions: morphisms from a finite-dimensional Lie 2-algebra into the
//! multivector-field Lie 2-algebra of a chart, given as finite tables over
//! the algebra basis and extended by linearity.
//!
//! Verification checks the four defining conditions on all basis tuples
//! with exact field arithmetic; reports carry the symbolic defect field for
//! each failure. The classification records which structure tables vanish,
//! and the 2-plectic classification tests `d(i omega) = 0` on every image
//! field.

use crate::calculus::{
    contract, exterior_derivative, schouten, CalcError, Chart, MultiVectorField,
};
use crate::defs::{parse_field, split_pair, ActionFile, DefError};
use crate::lie2::{pair_key, unit_vec, AxiomReport, Lie2Algebra};
use crate::observables::PlecticForm;
use crate::ring::Rational;
use crate::skeletal::SkeletalizationResult;
use num_traits::Zero;
use std::collections::BTreeMap;
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ActionError {
    #[error(transparent)]
    Calc(#[from] CalcError),
    #[error(transparent)]
    Def(#[from] DefError),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
}

/// A 2-action of a Lie 2-algebra on a chart.
#[derive(Debug, Clone)]
pub struct TwoAction {
    pub algebra: Arc<Lie2Algebra>,
    pub chart: Chart,
    /// Vector field per degree-0 basis element.
    pub rho10: Vec<MultiVectorField>,
    /// Bivector field per degree `-1` basis element.
    pub rho1m1: Vec<MultiVectorField>,
    /// Bivector field per increasing pair of degree-0 basis elements.
    pub rho2: BTreeMap<(usize, usize), MultiVectorField>,
}

impl TwoAction {
    pub fn zero(algebra: Arc<Lie2Algebra>, chart: Chart) -> Self {
        TwoAction {
            rho10: vec![MultiVectorField::zero(chart, 1); algebra.dim_0()],
            rho1m1: vec![MultiVectorField::zero(chart, 2); algebra.dim_m1()],
            rho2: BTreeMap::new(),
            algebra,
            chart,
        }
    }

    pub fn from_file(
        file: &ActionFile,
        base_dir: Option<&std::path::Path>,
    ) -> Result<Self, ActionError> {
        let algebra = Arc::new(file.algebra.load(base_dir)?);
        let chart = Chart::new(file.chart_dim);
        let mut action = TwoAction::zero(algebra.clone(), chart);
        for (label, literal) in &file.rho10 {
            let i = algebra.index_0(label).map_err(DefError::Algebra)?;
            action.rho10[i] = parse_field(literal, chart, Some(1))?;
        }
        for (label, literal) in &file.rho1m1 {
            let a = algebra.index_m1(label).map_err(DefError::Algebra)?;
            action.rho1m1[a] = parse_field(literal, chart, Some(2))?;
        }
        for (key, literal) in &file.rho2 {
            let (first, second) = split_pair(key)?;
            let i = algebra.index_0(&first).map_err(DefError::Algebra)?;
            let j = algebra.index_0(&second).map_err(DefError::Algebra)?;
            let field = parse_field(literal, chart, Some(2))?;
            action.set_rho2(i, j, field)?;
        }
        Ok(action)
    }

    pub fn set_rho2(
        &mut self,
        i: usize,
        j: usize,
        field: MultiVectorField,
    ) -> Result<(), ActionError> {
        let Some((key, sign)) = pair_key(i, j) else {
            return Err(ActionError::Dimension("rho2 on a repeated label".into()));
        };
        let v = if sign < 0 { field.neg() } else { field };
        if v.is_zero() {
            self.rho2.remove(&key);
        } else {
            self.rho2.insert(key, v);
        }
        Ok(())
    }

    /// `rho10` extended linearly to coordinate vectors.
    pub fn rho10_of(&self, x: &[Rational]) -> MultiVectorField {
        let mut out = MultiVectorField::zero(self.chart, 1);
        for (i, c) in x.iter().enumerate() {
            if !c.is_zero() {
                out = out.add(&self.rho10[i].scale_rat(c)).expect("same chart");
            }
        }
        out
    }

    pub fn rho1m1_of(&self, a: &[Rational]) -> MultiVectorField {
        let mut out = MultiVectorField::zero(self.chart, 2);
        for (i, c) in a.iter().enumerate() {
            if !c.is_zero() {
                out = out.add(&self.rho1m1[i].scale_rat(c)).expect("same chart");
            }
        }
        out
    }

    pub fn rho2_basis(&self, i: usize, j: usize) -> MultiVectorField {
        match pair_key(i, j) {
            None => MultiVectorField::zero(self.chart, 2),
            Some((key, sign)) => match self.rho2.get(&key) {
                None => MultiVectorField::zero(self.chart, 2),
                Some(v) if sign < 0 => v.neg(),
                Some(v) => v.clone(),
            },
        }
    }

    pub fn rho2_of(&self, x: &[Rational], y: &[Rational]) -> MultiVectorField {
        let mut out = MultiVectorField::zero(self.chart, 2);
        for (i, c1) in x.iter().enumerate() {
            if c1.is_zero() {
                continue;
            }
            for (j, c2) in y.iter().enumerate() {
                if c2.is_zero() {
                    continue;
                }
                out = out
                    .add(&self.rho2_basis(i, j).scale_rat(&(c1 * c2)))
                    .expect("same chart");
            }
        }
        out
    }

    /// Check (A1)-(A4) on all basis tuples.
    pub fn verify(&self) -> Result<AxiomReport, ActionError> {
        let mut report = AxiomReport::new(&["A1", "A2", "A3", "A4"]);
        let g = &self.algebra;
        let n0 = g.dim_0();
        let nm = g.dim_m1();

        // A1: rho10(l1(a)) = 0
        for a in 0..nm {
            let img = self.rho10_of(g.l1_column(a));
            if !img.is_zero() {
                report.fail("A1", g.basis_m1[a].clone(), img.to_string());
            }
        }

        // A2: rho10(l2p(x,y)) = [rho10(x), rho10(y)]
        for i in 0..n0 {
            for j in i + 1..n0 {
                let lhs = self.rho10_of(&g.l2p_basis(i, j));
                let rhs = schouten(&self.rho10[i], &self.rho10[j])?;
                let defect = lhs.sub(&rhs)?;
                if !defect.is_zero() {
                    report.fail(
                        "A2",
                        format!("({}, {})", g.basis_0[i], g.basis_0[j]),
                        defect.to_string(),
                    );
                }
            }
        }

        // A3: rho1m1(l2m(a,x)) = [rho1m1(a), rho10(x)] + rho2(l1(a), x)
        for a in 0..nm {
            for x in 0..n0 {
                let lhs = self.rho1m1_of(&g.l2m_basis(a, x));
                let bracket = schouten(&self.rho1m1[a], &self.rho10[x])?;
                let corr = self.rho2_of(g.l1_column(a), &unit_vec(n0, x));
                let defect = lhs.sub(&bracket)?.sub(&corr)?;
                if !defect.is_zero() {
                    report.fail(
                        "A3",
                        format!("({}, {})", g.basis_m1[a], g.basis_0[x]),
                        defect.to_string(),
                    );
                }
            }
        }

        // A4: (rho2(l2p(x,y),z) + c.p.) + rho1m1(l3(x,y,z))
        //     = [rho10(x), rho2(y,z)] + c.p.
        for i in 0..n0 {
            for j in i + 1..n0 {
                for k in j + 1..n0 {
                    let mut lhs = self.rho2_of(&g.l2p_basis(i, j), &unit_vec(n0, k));
                    lhs = lhs.add(&self.rho2_of(&g.l2p_basis(j, k), &unit_vec(n0, i)))?;
                    lhs = lhs.add(&self.rho2_of(&g.l2p_basis(k, i), &unit_vec(n0, j)))?;
                    lhs = lhs.add(&self.rho1m1_of(&g.l3_basis(i, j, k)))?;
                    let mut rhs = schouten(&self.rho10[i], &self.rho2_basis(j, k))?;
                    rhs = rhs.add(&schouten(&self.rho10[j], &self.rho2_basis(k, i))?)?;
                    rhs = rhs.add(&schouten(&self.rho10[k], &self.rho2_basis(i, j))?)?;
                    let defect = lhs.sub(&rhs)?;
                    if !defect.is_zero() {
                        report.fail(
                            "A4",
                            format!(
                                "({}, {}, {})",
                                g.basis_0[i], g.basis_0[j], g.basis_0[k]
                            ),
                            defect.to_string(),
                        );
                    }
                }
            }
        }
        Ok(report)
    }

    /// Structure flags of the action tables.
    pub fn classify(&self) -> ActionFlags {
        let rho10_zero = self.rho10.iter().all(|v| v.is_zero());
        let rho1m1_zero = self.rho1m1.iter().all(|v| v.is_zero());
        let rho2_zero = self.rho2.values().all(|v| v.is_zero());
        ActionFlags {
            rho10_zero,
            rho1m1_zero,
            rho2_zero,
        }
    }
}

/// Vanishing pattern of the three action tables, printed in the `T`
/// shorthand (`T1`/`T2` for `rho10` nonzero/zero, `T3`/`T4` for `rho1m1`,
/// `T5`/`T6` for `rho2`).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ActionFlags {
    pub rho10_zero: bool,
    pub rho1m1_zero: bool,
    pub rho2_zero: bool,
}

impl ActionFlags {
    pub fn strict(&self) -> bool {
        self.rho2_zero
    }

    pub fn t_string(&self) -> String {
        format!(
            "T{}{}{}",
            if self.rho10_zero { 2 } else { 1 },
            if self.rho1m1_zero { 4 } else { 3 },
            if self.rho2_zero { 6 } else { 5 }
        )
    }
}

/// Classification against a 2-plectic form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PlecticClass {
    TwoPlectic,
    QuasiTwoPlectic,
    Neither,
}

impl PlecticClass {
    pub fn as_str(&self) -> &'static str {
        match self {
            PlecticClass::TwoPlectic => "two_plectic",
            PlecticClass::QuasiTwoPlectic => "quasi_two_plectic",
            PlecticClass::Neither => "neither",
        }
    }
}

/// A non-closed contraction witnessing the failure of invariance.
#[derive(Debug, Clone)]
pub struct PlecticWitness {
    pub component: String,
    pub derivative: String,
}

/// Exact `L_v omega = 0` tests on every image field of the action; the
/// witnesses list each component whose contraction fails to be closed.
pub fn plectic_class(
    action: &TwoAction,
    omega: &PlecticForm,
) -> Result<(PlecticClass, Vec<PlecticWitness>), ActionError> {
    let g = &action.algebra;
    let mut witnesses = Vec::new();
    let mut closed = |label: String, v: &MultiVectorField| -> Result<bool, ActionError> {
        let d = exterior_derivative(&contract(v, &omega.omega)?)?;
        if d.is_zero() {
            Ok(true)
        } else {
            witnesses.push(PlecticWitness {
                component: label,
                derivative: d.to_string(),
            });
            Ok(false)
        }
    };
    let mut quasi = true;
    for (i, v) in action.rho10.iter().enumerate() {
        quasi &= closed(format!("rho10({})", g.basis_0[i]), v)?;
    }
    for (a, v) in action.rho1m1.iter().enumerate() {
        quasi &= closed(format!("rho1m1({})", g.basis_m1[a]), v)?;
    }
    let mut full = quasi;
    for (&(i, j), v) in &action.rho2 {
        full &= closed(
            format!("rho2({}, {})", g.basis_0[i], g.basis_0[j]),
            v,
        )?;
    }
    let class = if quasi && full {
        PlecticClass::TwoPlectic
    } else if quasi {
        PlecticClass::QuasiTwoPlectic
    } else {
        PlecticClass::Neither
    };
    Ok((class, witnesses))
}

/// Outcome of trying to push an action forward along a skeletalization.
#[derive(Debug)]
pub enum Pushforward {
    /// The induced action on the skeletal algebra, verified against the
    /// compatibility conditions.
    Success {
        action: TwoAction,
        verified: AxiomReport,
    },
    /// No induced action exists; the witness is a degree `-1` basis element
    /// annihilated by the projection but acted on nontrivially.
    Obstructed {
        witness_label: String,
        rho_value: MultiVectorField,
    },
}

/// Attempt to define an action of the skeletal algebra making the
/// compatibility triangle commute: `rho10 = rho10-bar . F`,
/// `rho1m1 = rho1m1-bar . F`, `rho2 = rho2-bar . (F x F) + rho1m1-bar . F_2`.
pub fn pushforward_along_skeletal(
    action: &TwoAction,
    skel: &SkeletalizationResult,
) -> Result<Pushforward, ActionError> {
    assert_eq!(
        skel.f.source.as_ref(),
        action.algebra.as_ref(),
        "skeletalization must be of the action's algebra"
    );
    let chart = action.chart;
    let s = &skel.skeletal;
    let nq = s.dim_0();
    let nk = s.dim_m1();

    // rho1m1-bar on the kernel basis; compatibility requires the original
    // rho1m1 to vanish wherever the projection does.
    let mut bar = TwoAction::zero(s.clone(), chart);
    for k in 0..nk {
        bar.rho1m1[k] = action.rho1m1_of(&skel.kernel[k]);
    }
    for a in 0..action.algebra.dim_m1() {
        let reconstructed = bar.rho1m1_of(&skel.f.f1m1[a]);
        let defect = action.rho1m1[a].sub(&reconstructed)?;
        if !defect.is_zero() {
            return Ok(Pushforward::Obstructed {
                witness_label: action.algebra.basis_m1[a].clone(),
                rho_value: action.rho1m1[a].clone(),
            });
        }
    }

    // rho10-bar through the section; well-defined because rho10 kills
    // im(l1) for verified actions, and checked against all basis vectors.
    for q in 0..nq {
        bar.rho10[q] = action.rho10_of(&skel.section_of(&unit_vec(nq, q)));
    }
    for x in 0..action.algebra.dim_0() {
        let reconstructed = bar.rho10_of(&skel.f.f10[x]);
        let defect = action.rho10[x].sub(&reconstructed)?;
        if !defect.is_zero() {
            return Ok(Pushforward::Obstructed {
                witness_label: action.algebra.basis_0[x].clone(),
                rho_value: action.rho10[x].clone(),
            });
        }
    }

    // rho2-bar(qi, qj) = rho2(section qi, section qj)
    //                    - rho1m1-bar(F_2(section qi, section qj))
    for i in 0..nq {
        for j in i + 1..nq {
            let si = skel.section_of(&unit_vec(nq, i));
            let sj = skel.section_of(&unit_vec(nq, j));
            let f2 = skel.f.f2_of(&si, &sj);
            let v = action.rho2_of(&si, &sj).sub(&bar.rho1m1_of(&f2))?;
            bar.set_rho2(i, j, v)?;
        }
    }
    // full compatibility on all basis pairs
    for x in 0..action.algebra.dim_0() {
        for y in x + 1..action.algebra.dim_0() {
            let lhs = action.rho2_basis(x, y);
            let rhs = bar
                .rho2_of(&skel.f.f10[x], &skel.f.f10[y])
                .add(&bar.rho1m1_of(&skel.f.f2_basis(x, y)))?;
            let defect = lhs.sub(&rhs)?;
            if !defect.is_zero() {
                return Ok(Pushforward::Obstructed {
                    witness_label: format!(
                        "rho2({}, {})",
                        action.algebra.basis_0[x], action.algebra.basis_0[y]
                    ),
                    rho_value: defect,
                });
            }
        }
    }
    let verified = bar.verify()?;
    Ok(Pushforward::Success {
        action: bar,
        verified,
    })
}

#[cfg(test)]
pub(crate) mod fixtures {
    use super::*;
    use crate::lie2::fixtures::example_1a;

    /// Sub example 1 of the first catalog entry: `rho10(x3) = e3`,
    /// `rho1m1(a) = rho2(x2, x1) = e2^e3`.
    pub fn action_1a_sub1() -> TwoAction {
        let algebra = Arc::new(example_1a());
        let chart = Chart::new(3);
        let mut action = TwoAction::zero(algebra, chart);
        action.rho10[2] = parse_field("e3", chart, Some(1)).unwrap();
        action.rho1m1[0] = parse_field("e2^e3", chart, Some(2)).unwrap();
        action
            .set_rho2(1, 0, parse_field("e2^e3", chart, Some(2)).unwrap())
            .unwrap();
        action
    }
}

#[cfg(test)]
mod tests {
    use super::fixtures::action_1a_sub1;
    use super::*;
    use crate::lie2::fixtures::example_1a;

    #[test]
    fn action_1a_sub1_verifies() {
        let action = action_1a_sub1();
        let report = action.verify().unwrap();
        assert!(report.passed(), "{:?}", report.failing());
        assert_eq!(action.classify().t_string(), "T135");
    }

    #[test]
    fn zero_action_verifies() {
        let action = TwoAction::zero(Arc::new(example_1a()), Chart::new(3));
        assert!(action.verify().unwrap().passed());
        let flags = action.classify();
        assert_eq!(flags.t_string(), "T246");
        assert!(flags.strict());
    }

    #[test]
    fn dropping_rho2_breaks_a3() {
        // with rho2 = 0 but rho1m1 != 0 the third condition fails,
        // so nonzero rho1m1 forces nonzero rho2 for this algebra
        let mut action = action_1a_sub1();
        action.rho2.clear();
        let report = action.verify().unwrap();
        assert!(!report.passed());
        assert!(report.first_failure("A3").is_some());
    }

    #[test]
    fn exponential_variant_of_1a() {
        // rho10(x1) = exp(-q1) e2, rho10(x3) = e1,
        // rho1m1(a) = rho2(x2,x1) = e2^e3
        let algebra = Arc::new(example_1a());
        let chart = Chart::new(3);
        let mut action = TwoAction::zero(algebra, chart);
        action.rho10[0] = parse_field("exp(-q1)*e2", chart, Some(1)).unwrap();
        action.rho10[2] = parse_field("e1", chart, Some(1)).unwrap();
        action.rho1m1[0] = parse_field("e2^e3", chart, Some(2)).unwrap();
        action
            .set_rho2(1, 0, parse_field("e2^e3", chart, Some(2)).unwrap())
            .unwrap();
        let report = action.verify().unwrap();
        assert!(report.passed(), "{:?}", report.failing());
        // and it is 2-plectic on the volume chart: every contraction of
        // the image fields into the volume form is closed
        let omega = PlecticForm::parse("dq1^dq2^dq3", 3).unwrap();
        let (class, witnesses) = plectic_class(&action, &omega).unwrap();
        assert!(witnesses.is_empty());
        assert_eq!(class, PlecticClass::TwoPlectic);
    }

    #[test]
    fn constant_action_is_two_plectic() {
        let omega = PlecticForm::parse("dq1^dq2^dq3", 3).unwrap();
        let (class, w) = plectic_class(&action_1a_sub1(), &omega).unwrap();
        assert_eq!(class, PlecticClass::TwoPlectic);
        assert!(w.is_empty());
    }

    #[test]
    fn matched_exponential_action_is_neither() {
        // a lone matched-index exponential field: d(i omega) != 0
        let algebra = Arc::new(
            crate::lie2::Lie2Algebra::new(vec![], vec!["x".into()]).unwrap(),
        );
        let chart = Chart::new(3);
        let mut action = TwoAction::zero(algebra, chart);
        action.rho10[0] = parse_field("exp(-q1)*e1", chart, Some(1)).unwrap();
        assert!(action.verify().unwrap().passed());
        let omega = PlecticForm::parse("dq1^dq2^dq3", 3).unwrap();
        let (class, w) = plectic_class(&action, &omega).unwrap();
        assert_eq!(class, PlecticClass::Neither);
        assert_eq!(w.len(), 1);
        assert!(w[0].component.contains("rho10(x)"));
    }

    #[test]
    fn pushforward_obstructed_for_1a_sub1() {
        // the skeletal degree -1 part is zero but rho1m1(a) != 0
        let action = action_1a_sub1();
        let skel = crate::skeletal::skeletalize(&action.algebra).unwrap();
        match pushforward_along_skeletal(&action, &skel).unwrap() {
            Pushforward::Obstructed {
                witness_label,
                rho_value,
            } => {
                assert_eq!(witness_label, "a");
                assert!(!rho_value.is_zero());
            }
            _ => panic!("expected an obstruction"),
        }
    }

    #[test]
    fn pushforward_succeeds_on_kernel_supported_action() {
        // g_0 = <x, w> abelian, g_{-1} = <a, k>, l1(a) = w;
        // the action is supported on the kernel element k
        let mut g = crate::lie2::Lie2Algebra::new(
            vec!["a".into(), "k".into()],
            vec!["x".into(), "w".into()],
        )
        .unwrap();
        g.set_l1(0, vec![crate::ring::int(0), crate::ring::int(1)])
            .unwrap();
        let algebra = Arc::new(g);
        let chart = Chart::new(3);
        let mut action = TwoAction::zero(algebra.clone(), chart);
        action.rho10[0] = parse_field("e1", chart, Some(1)).unwrap();
        action.rho1m1[1] = parse_field("e2^e3", chart, Some(2)).unwrap();
        assert!(action.verify().unwrap().passed());
        let skel = crate::skeletal::skeletalize(&algebra).unwrap();
        match pushforward_along_skeletal(&action, &skel).unwrap() {
            Pushforward::Success { action: bar, verified } => {
                assert!(verified.passed());
                assert_eq!(bar.rho1m1.len(), 1);
                assert!(!bar.rho1m1[0].is_zero());
            }
            Pushforward::Obstructed { witness_label, .. } => {
                panic!("unexpected obstruction at {}", witness_label)
            }
        }
    }

    #[test]
    fn pushforward_of_skeletal_input_is_identity_shaped() {
        let algebra = Arc::new({
            let mut g = crate::lie2::Lie2Algebra::new(
                vec!["a".into()],
                vec!["x".into(), "y".into()],
            )
            .unwrap();
            g.set_l2p(0, 1, vec![crate::ring::int(1), crate::ring::int(0)])
                .unwrap();
            g
        });
        let chart = Chart::new(3);
        let mut action = TwoAction::zero(algebra.clone(), chart);
        action.rho1m1[0] = parse_field("e1^e2", chart, Some(2)).unwrap();
        // check the algebra action laws hold before pushing forward
        assert!(action.verify().unwrap().passed());
        let skel = crate::skeletal::skeletalize(&algebra).unwrap();
        match pushforward_along_skeletal(&action, &skel).unwrap() {
            Pushforward::Success { action: bar, verified } => {
                assert!(verified.passed());
                assert_eq!(bar.rho1m1[0], action.rho1m1[0]);
            }
            _ => panic!("skeletal input must push forward"),
        }
    }

    #[test]
    fn action_file_round_trip() {
        let text = r#"{
            "kind": "action",
            "algebra": {
                "basis_gm1": ["a"],
                "basis_g0": ["x1", "x2", "x3"],
                "l1": [{"in": ["a"], "out": {"x2": "1"}}],
                "l2p": [
                    {"in": ["x1", "x2"], "out": {"x2": "-1"}},
                    {"in": ["x1", "x3"], "out": {"x1": "1"}}
                ],
                "l2m": [{"in": ["a", "x1"], "out": {"a": "1"}}],
                "l3": [{"in": ["x1", "x2", "x3"], "out": {"a": "-1"}}]
            },
            "chart_dim": 3,
            "rho10": {"x3": "e3"},
            "rho1m1": {"a": "e2^e3"},
            "rho2": {"x2,x1": "e2^e3"}
        }"#;
        let file: ActionFile = serde_json::from_str(text).unwrap();
        let action = TwoAction::from_file(&file, None).unwrap();
        assert!(action.verify().unwrap().passed());
        assert_eq!(action.rho2_basis(1, 0), action_1a_sub1().rho2_basis(1, 0));
    }
}
