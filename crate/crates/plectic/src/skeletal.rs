//! Skeletalization: the constructive quasi-isomorphism from any
//! finite-dimensional Lie 2-algebra onto a skeletal one (`l1 = 0`).
//!
//! The decompositions `g_{-1} = ker(l1) + C` and `g_0 = im(l1) + C'` are
//! chosen deterministically: reduced-row-echelon elimination with
//! smallest-index pivot preference, complements spanned by standard basis
//! vectors (the pivot columns of `l1` for `C`, the non-leading coordinates
//! of `im(l1)` for `C'`). The section sends each quotient class to its
//! non-leading-coordinate representative. Identical inputs therefore give
//! bit-identical outputs.

use crate::lie2::{
    unit_vec, vec_add, vec_is_zero, vec_neg, vec_sub, AlgebraError, AxiomReport, Lie2Algebra,
    Lie2Morphism, QVec,
};
use crate::linalg::{kernel_basis, leading_coordinates, rref_with_transform, Mat};
use crate::ring::Rational;
use num_traits::Zero;
use std::collections::BTreeMap;
use std::sync::Arc;

/// Output of [`skeletalize`]: the skeletal algebra, the quasi-isomorphism
/// onto it, and the deterministic splitting data.
#[derive(Debug, Clone)]
pub struct SkeletalizationResult {
    pub skeletal: Arc<Lie2Algebra>,
    /// The morphism from the input onto the skeletal algebra.
    pub f: Lie2Morphism,
    /// Basis of `ker(l1)` in input `g_{-1}` coordinates; this is the basis
    /// that the skeletal degree `-1` part is expressed in.
    pub kernel: Vec<QVec>,
    /// Standard-basis indices of `g_{-1}` spanning the complement `C`.
    pub complement_m1: Vec<usize>,
    /// Standard-basis indices of `g_0` spanning the complement `C'`.
    pub complement_0: Vec<usize>,
    /// The section of the quotient map: column per skeletal `g_0` basis
    /// vector, in input `g_0` coordinates.
    pub section: Mat,
    /// For each input `g_0` basis vector `y`, the element `c` of `C` (in
    /// `g_{-1}` coordinates) with `y = l1(c) + section part`.
    pub c_parts: Vec<QVec>,
}

impl SkeletalizationResult {
    /// Section applied to a skeletal `g_0` coordinate vector.
    pub fn section_of(&self, xbar: &[Rational]) -> QVec {
        self.section.apply(xbar)
    }
}

fn invert(m: &Mat) -> Mat {
    let (r, e, pivots) = rref_with_transform(m);
    assert_eq!(pivots.len(), m.rows, "matrix must be invertible");
    debug_assert_eq!(r, Mat::identity(m.rows));
    e
}

/// Produce the skeletal Lie 2-algebra and the quasi-isomorphism onto it.
pub fn skeletalize(algebra: &Arc<Lie2Algebra>) -> Result<SkeletalizationResult, AlgebraError> {
    let nm = algebra.dim_m1();
    let n0 = algebra.dim_0();
    let l1 = algebra.l1_matrix();

    let kernel = kernel_basis(&l1);
    let (_, _, l1_pivots) = rref_with_transform(&l1);
    let complement_m1 = l1_pivots.clone();

    let im_cols: Vec<QVec> = complement_m1.iter().map(|&p| l1.col(p)).collect();
    let leading = leading_coordinates(&im_cols, n0);
    let complement_0: Vec<usize> = (0..n0).filter(|i| !leading.contains(i)).collect();

    // F_{1,-1}: projection onto ker(l1) along C, as the top block of the
    // inverse of the basis change [kernel | C standard vectors].
    let f1m1_rows = if nm == 0 {
        Mat::zeros(0, 0)
    } else {
        let mut cols: Vec<QVec> = kernel.clone();
        cols.extend(complement_m1.iter().map(|&p| unit_vec(nm, p)));
        let inv = invert(&Mat::from_cols(cols));
        let mut top = Mat::zeros(kernel.len(), nm);
        for i in 0..kernel.len() {
            for j in 0..nm {
                top[(i, j)] = inv[(i, j)].clone();
            }
        }
        top
    };

    // Basis change on g_0: [im basis | C' standard vectors]; the top block
    // gives the im-coordinates, the bottom block the quotient map.
    let (im_coords, f10_rows) = {
        let mut cols: Vec<QVec> = im_cols.clone();
        cols.extend(complement_0.iter().map(|&c| unit_vec(n0, c)));
        let inv = invert(&Mat::from_cols(cols));
        let rank = im_cols.len();
        let mut top = Mat::zeros(rank, n0);
        for i in 0..rank {
            for j in 0..n0 {
                top[(i, j)] = inv[(i, j)].clone();
            }
        }
        let mut bottom = Mat::zeros(complement_0.len(), n0);
        for i in 0..complement_0.len() {
            for j in 0..n0 {
                bottom[(i, j)] = inv[(rank + i, j)].clone();
            }
        }
        (top, bottom)
    };

    // y = l1(c_part(y)) + section(quotient(y)), with c_part valued in C.
    let c_parts: Vec<QVec> = (0..n0)
        .map(|j| {
            let coords = im_coords.apply(&unit_vec(n0, j));
            let mut c = crate::lie2::zero_vec(nm);
            for (s, coeff) in coords.iter().enumerate() {
                if !coeff.is_zero() {
                    c[complement_m1[s]] = coeff.clone();
                }
            }
            c
        })
        .collect();

    let proj_m1 = |a: &[Rational]| -> QVec {
        if kernel.is_empty() {
            Vec::new()
        } else {
            f1m1_rows.apply(a)
        }
    };
    let proj_0 = |x: &[Rational]| -> QVec { f10_rows.apply(x) };

    // F_2(e_i, e_j) = F_{1,-1}( l2(e_i, c_j) - l2(c'_j, c_i) ), with
    // l2(x, a) = -l2m(a, x); antisymmetric by R3.
    let section_part = |j: usize| -> QVec {
        let q = proj_0(&unit_vec(n0, j));
        let mut out = crate::lie2::zero_vec(n0);
        for (s, coeff) in q.iter().enumerate() {
            if !coeff.is_zero() {
                out[complement_0[s]] = coeff.clone();
            }
        }
        out
    };
    let mut f2 = BTreeMap::new();
    for i in 0..n0 {
        for j in i + 1..n0 {
            let term1 = vec_neg(&algebra.l2m_of(&c_parts[j], &unit_vec(n0, i)));
            let term2 = vec_neg(&algebra.l2m_of(&c_parts[i], &section_part(j)));
            let v = proj_m1(&vec_sub(&term1, &term2));
            if !vec_is_zero(&v) {
                f2.insert((i, j), v);
            }
        }
    }

    // Skeletal basis labels: quotient classes keep their representative's
    // label; kernel vectors keep their label when they are standard basis
    // vectors and get fresh `k<n>` names otherwise.
    let label_0: Vec<String> = complement_0
        .iter()
        .map(|&c| algebra.basis_0[c].clone())
        .collect();
    let mut label_m1: Vec<String> = Vec::new();
    for (n, k) in kernel.iter().enumerate() {
        let std_idx = (0..nm).find(|&i| *k == unit_vec(nm, i));
        let mut label = match std_idx {
            Some(i) => algebra.basis_m1[i].clone(),
            None => format!("k{}", n + 1),
        };
        while label_0.contains(&label) || label_m1.contains(&label) {
            label.push('\'');
        }
        label_m1.push(label);
    }

    let mut skeletal = Lie2Algebra::new(label_m1, label_0)?;

    // l2p on the quotient through the section.
    let nq = complement_0.len();
    for i in 0..nq {
        for j in i + 1..nq {
            let v = algebra.l2p_basis(complement_0[i], complement_0[j]);
            skeletal.set_l2p(i, j, proj_0(&v))?;
        }
    }

    // l2m restricted to the kernel, through the section.
    let nk = kernel.len();
    for a in 0..nk {
        for x in 0..nq {
            let v = algebra.l2m_of(&kernel[a], &unit_vec(n0, complement_0[x]));
            skeletal.set_l2m(a, x, proj_m1(&v))?;
        }
    }

    // l3 on lifts, corrected by F_2 and the quotient mixed bracket:
    // l3bar = F(l3) + cyclic F_2(l2(x,y), z) + cyclic l2m-bar(F_2(y,z), xbar).
    let f2_of = |x: &[Rational], y: &[Rational]| -> QVec {
        let mut out = crate::lie2::zero_vec(nk);
        for (i, c1) in x.iter().enumerate() {
            if c1.is_zero() {
                continue;
            }
            for (j, c2) in y.iter().enumerate() {
                if c2.is_zero() {
                    continue;
                }
                let v = match crate::lie2::pair_key(i, j) {
                    None => continue,
                    Some((key, sign)) => match f2.get(&key) {
                        None => continue,
                        Some(v) => {
                            if sign < 0 {
                                vec_neg(v)
                            } else {
                                v.clone()
                            }
                        }
                    },
                };
                out = vec_add(&out, &crate::lie2::vec_scale(&v, &(c1 * c2)));
            }
        }
        out
    };
    for i in 0..nq {
        for j in i + 1..nq {
            for k in j + 1..nq {
                let (ci, cj, ck) = (complement_0[i], complement_0[j], complement_0[k]);
                let (ui, uj, uk) = (unit_vec(n0, ci), unit_vec(n0, cj), unit_vec(n0, ck));
                let mut v = proj_m1(&algebra.l3_basis(ci, cj, ck));
                v = vec_add(&v, &f2_of(&algebra.l2p_basis(ci, cj), &uk));
                v = vec_add(&v, &f2_of(&algebra.l2p_basis(cj, ck), &ui));
                v = vec_add(&v, &f2_of(&algebra.l2p_basis(ck, ci), &uj));
                // + l2m-bar(F_2(y, z), x-bar) and cyclic
                for ((a, b), xq) in [((j, k), i), ((k, i), j), ((i, j), k)] {
                    let f2v = f2_of(
                        &unit_vec(n0, complement_0[a]),
                        &unit_vec(n0, complement_0[b]),
                    );
                    v = vec_add(&v, &skeletal.l2m_of(&f2v, &unit_vec(nq, xq)));
                }
                skeletal.set_l3(i, j, k, v)?;
            }
        }
    }

    let skeletal = Arc::new(skeletal);
    let f = Lie2Morphism {
        source: algebra.clone(),
        target: skeletal.clone(),
        f10: (0..n0).map(|j| proj_0(&unit_vec(n0, j))).collect(),
        f1m1: (0..nm).map(|a| proj_m1(&unit_vec(nm, a))).collect(),
        f2,
    };
    let section = if nq == 0 {
        Mat::zeros(n0, 0)
    } else {
        Mat::from_cols(complement_0.iter().map(|&c| unit_vec(n0, c)).collect())
    };
    Ok(SkeletalizationResult {
        skeletal,
        f,
        kernel,
        complement_m1,
        complement_0,
        section,
        c_parts,
    })
}

/// Structural checks that the result is a quasi-isomorphism onto a valid
/// skeletal Lie 2-algebra: rank equalities for the cohomology of the
/// two-term complexes, injectivity of `F_{1,-1}` on the kernel, the
/// skeletal axioms and the morphism conditions.
pub fn check_quasi_iso(result: &SkeletalizationResult) -> AxiomReport {
    let mut report = AxiomReport::new(&[
        "dim ker l1 = dim skeletal g_{-1}",
        "dim coker l1 = dim skeletal g_0",
        "F_{1,-1} restricted to ker l1 is the identity chart",
        "skeletal axioms",
        "skeletal flag",
    ]);
    let input = &result.f.source;
    let l1 = input.l1_matrix();
    let rank = crate::linalg::rank(&l1);
    let dim_ker = input.dim_m1() - rank;
    if dim_ker != result.skeletal.dim_m1() {
        report.fail(
            "dim ker l1 = dim skeletal g_{-1}",
            String::new(),
            format!("{} vs {}", dim_ker, result.skeletal.dim_m1()),
        );
    }
    let dim_coker = input.dim_0() - rank;
    if dim_coker != result.skeletal.dim_0() {
        report.fail(
            "dim coker l1 = dim skeletal g_0",
            String::new(),
            format!("{} vs {}", dim_coker, result.skeletal.dim_0()),
        );
    }
    for (n, k) in result.kernel.iter().enumerate() {
        let img = result.f.f1m1_of(k);
        if img != unit_vec(result.kernel.len(), n) {
            report.fail(
                "F_{1,-1} restricted to ker l1 is the identity chart",
                format!("kernel vector {}", n + 1),
                crate::lie2::fmt_vec(&img, &result.skeletal.basis_m1),
            );
        }
    }
    let ax = result.skeletal.verify_axioms();
    if !ax.passed() {
        report.fail(
            "skeletal axioms",
            String::new(),
            format!("{} failing relations", ax.failing().len()),
        );
    }
    if !result.skeletal.l1_is_zero() {
        report.fail("skeletal flag", String::new(), "l1 != 0".into());
    }
    let mut out = report;
    out.merge(result.f.verify());
    out
}

/// Formal Chevalley-Eilenberg differential of `F_2`, acting through the
/// quotient map on arguments and the skeletal mixed bracket on values. For
/// strict inputs `l3bar = -(formal d F_2)` componentwise.
pub fn formal_df2(result: &SkeletalizationResult) -> BTreeMap<(usize, usize, usize), QVec> {
    let input = &result.f.source;
    let skeletal = &result.skeletal;
    let n0 = input.dim_0();
    let mut out = BTreeMap::new();
    for x in 0..n0 {
        for y in x + 1..n0 {
            for z in y + 1..n0 {
                // first sum: act(x_i)(F_2(rest)) with act(x)(b) =
                // -l2m-bar(b, qx)
                let act = |xi: usize, b: &QVec| -> QVec {
                    vec_neg(&skeletal.l2m_of(b, &result.f.f10[xi]))
                };
                let mut v = act(x, &result.f.f2_basis(y, z));
                v = vec_sub(&v, &act(y, &result.f.f2_basis(x, z)));
                v = vec_add(&v, &act(z, &result.f.f2_basis(x, y)));
                // second sum: (-1)^{i+j} F_2(l2(x_i, x_j), rest)
                let uz = unit_vec(n0, z);
                let uy = unit_vec(n0, y);
                let ux = unit_vec(n0, x);
                v = vec_sub(&v, &result.f.f2_of(&input.l2p_basis(x, y), &uz));
                v = vec_add(&v, &result.f.f2_of(&input.l2p_basis(x, z), &uy));
                v = vec_sub(&v, &result.f.f2_of(&input.l2p_basis(y, z), &ux));
                if !vec_is_zero(&v) {
                    out.insert((x, y, z), v);
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie2::fixtures::{example_1a, example_3b};
    use crate::ring::int;

    #[test]
    fn golden_skeletalization_of_1a() {
        let g = Arc::new(example_1a());
        let result = skeletalize(&g).unwrap();
        let s = &result.skeletal;
        assert_eq!(s.dim_m1(), 0);
        assert_eq!(s.basis_0, vec!["x1".to_string(), "x3".to_string()]);
        // l2bar(x1bar, x3bar) = x1bar
        assert_eq!(s.l2p_basis(0, 1), vec![int(1), int(0)]);
        assert!(s.l3_is_zero());
        assert!(result.f.f2.is_empty());
        // F_{1,0}: x1 -> x1bar, x2 -> 0, x3 -> x3bar
        assert_eq!(result.f.f10[0], vec![int(1), int(0)]);
        assert_eq!(result.f.f10[1], vec![int(0), int(0)]);
        assert_eq!(result.f.f10[2], vec![int(0), int(1)]);
        assert!(result.f.verify().passed());
        assert!(s.verify_axioms().passed());
        // bit-identical rerun
        let again = skeletalize(&g).unwrap();
        assert_eq!(again.skeletal.as_ref(), s.as_ref());
        assert_eq!(again.f, result.f);
    }

    #[test]
    fn skeletal_input_is_fixed() {
        let mut g = Lie2Algebra::new(vec!["a".into()], vec!["x".into(), "y".into()]).unwrap();
        g.set_l2p(0, 1, vec![int(1), int(0)]).unwrap();
        // l1 = 0 and l3 = 0: already skeletal
        let g = Arc::new(g);
        let result = skeletalize(&g).unwrap();
        assert_eq!(result.skeletal.as_ref(), g.as_ref());
        assert!(result.f.is_strict());
        assert!(result.f.verify().passed());
    }

    #[test]
    fn skeletalization_is_idempotent_on_structure_constants() {
        for g in [example_1a(), example_3b()] {
            let first = skeletalize(&Arc::new(g)).unwrap();
            let second = skeletalize(&first.skeletal).unwrap();
            assert_eq!(second.skeletal.as_ref(), first.skeletal.as_ref());
        }
    }

    #[test]
    fn quasi_iso_checks_pass() {
        for g in [example_1a(), example_3b()] {
            let result = skeletalize(&Arc::new(g)).unwrap();
            let report = check_quasi_iso(&result);
            assert!(report.passed(), "{:?}", report.failing());
        }
    }

    #[test]
    fn skeletalization_of_3b() {
        let g = Arc::new(example_3b());
        let result = skeletalize(&g).unwrap();
        let s = &result.skeletal;
        // ker l1 = <c>, quotient basis = (y, x)
        assert_eq!(s.basis_m1, vec!["c".to_string()]);
        assert_eq!(s.basis_0, vec!["y".to_string(), "x".to_string()]);
        // F_2(y, z) = -c-bar
        assert_eq!(result.f.f2_basis(0, 2), vec![int(-1)]);
        assert!(result.f.verify().passed());
        assert!(s.verify_axioms().passed());
    }

    #[test]
    fn strict_input_l3bar_is_minus_formal_df2() {
        // 4-dim nilpotent g_0 with h = <b, k>, tau(b) = x4, r(x1)(b) = k,
        // r(x2)(b) = k: the skeletalization has nonzero l3bar equal to
        // minus the formal differential of F_2.
        let mut g0 = crate::lie2::LieAlgebra::new(vec![
            "x1".into(),
            "x2".into(),
            "x3".into(),
            "x4".into(),
        ]);
        g0.set_bracket(0, 1, vec![int(0), int(0), int(1), int(0)])
            .unwrap();
        g0.set_bracket(0, 2, vec![int(0), int(0), int(0), int(1)])
            .unwrap();
        let h = crate::lie2::LieAlgebra::new(vec!["b".into(), "k".into()]);
        let zero2 = vec![int(0), int(0)];
        let k_vec = vec![int(0), int(1)];
        let cm = crate::lie2::CrossedModule {
            g: g0,
            h,
            tau: vec![vec![int(0), int(0), int(0), int(1)], vec![int(0); 4]],
            r: vec![
                vec![k_vec.clone(), zero2.clone()],
                vec![k_vec.clone(), zero2.clone()],
                vec![zero2.clone(), zero2.clone()],
                vec![zero2.clone(), zero2.clone()],
            ],
        };
        assert!(cm.verify().passed(), "{:?}", cm.verify().failing());
        let algebra = Arc::new(crate::lie2::from_crossed_module(&cm).unwrap());
        assert!(algebra.verify_axioms().passed());
        let result = skeletalize(&algebra).unwrap();
        assert!(result.f.verify().passed(), "{:?}", result.f.verify().failing());
        assert!(result.skeletal.verify_axioms().passed());
        assert!(!result.skeletal.l3_is_zero(), "this example has l3bar != 0");
        // componentwise: l3bar(F x, F y, F z) = -(formal d F_2)(x, y, z)
        let df2 = formal_df2(&result);
        let n0 = algebra.dim_0();
        for x in 0..n0 {
            for y in x + 1..n0 {
                for z in y + 1..n0 {
                    let lhs = result.skeletal.l3_of(
                        &result.f.f10[x],
                        &result.f.f10[y],
                        &result.f.f10[z],
                    );
                    let rhs = vec_neg(
                        &df2.get(&(x, y, z))
                            .cloned()
                            .unwrap_or_else(|| crate::lie2::zero_vec(result.kernel.len())),
                    );
                    assert_eq!(lhs, rhs, "at ({}, {}, {})", x, y, z);
                }
            }
        }
    }

    #[test]
    fn kernel_respecting_labels() {
        // l1(b1) = y4; kernel = <a1, c1, c2, c3>, all standard vectors
        let mut g = Lie2Algebra::new(
            vec![
                "a1".into(),
                "b1".into(),
                "c1".into(),
                "c2".into(),
                "c3".into(),
            ],
            vec!["y1".into(), "y2".into(), "y3".into(), "y4".into()],
        )
        .unwrap();
        g.set_l1(1, vec![int(0), int(0), int(0), int(1)]).unwrap();
        let result = skeletalize(&Arc::new(g)).unwrap();
        assert_eq!(
            result.skeletal.basis_m1,
            vec!["a1".to_string(), "c1".into(), "c2".into(), "c3".into()]
        );
        // F_{1,-1}(b1) = 0
        assert!(vec_is_zero(&result.f.f1m1[1]));
    }
}
