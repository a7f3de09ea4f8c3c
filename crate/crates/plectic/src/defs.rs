//! Definition-file schemas and the literal syntax for fields and forms.
//!
//! All file IO is UTF-8 JSON. Scalars use the chart expression grammar
//! (see [`crate::ring::ExpPoly::parse`]); multivector and form literals
//! extend it with basis chains: `e1^e2` for coordinate multivectors and
//! `dq1^dq3` for coordinate forms, each term optionally scaled by a scalar
//! product, e.g. `-1/2*q1*exp(-3*q2)*dq1^dq3 + q3*dq2`.

use crate::calculus::{CalcError, Chart, DifferentialForm, MultiVectorField};
use crate::lie2::{AlgebraError, Lie2Algebra, Lie2Morphism, QVec};
use crate::ring::{ExpPoly, Rational, RingError};
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::str::FromStr;
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum DefError {
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("{path}: {msg}")]
    Field { path: String, msg: String },
    #[error(transparent)]
    Ring(#[from] RingError),
    #[error(transparent)]
    Calc(#[from] CalcError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("cannot determine the file kind; expected algebra, morphism, action or comoment")]
    UnknownKind,
}

fn field_err(path: impl Into<String>, msg: impl Into<String>) -> DefError {
    DefError::Field {
        path: path.into(),
        msg: msg.into(),
    }
}

/// Parse a bit-exact rational string such as `-1/2`.
pub fn parse_rational(s: &str) -> Result<Rational, DefError> {
    Rational::from_str(s.trim())
        .map_err(|e| field_err(s.to_string(), format!("bad rational: {}", e)))
}

enum BasisKind {
    Vector,
    Form,
}

struct Literal {
    degree: Option<usize>,
    terms: Vec<(Vec<usize>, ExpPoly)>,
}

/// Shared parser for field and form literals.
fn parse_literal(
    input: &str,
    chart: Chart,
    kind: BasisKind,
    expected_degree: Option<usize>,
) -> Result<Literal, CalcError> {
    use crate::ring::parse::Cursor;
    let dim = chart.dim;
    let mut cur = Cursor::new(input);
    let mut terms: Vec<(Vec<usize>, ExpPoly)> = Vec::new();
    let mut degree: Option<usize> = expected_degree;
    let mut sign = Rational::from_integer(1.into());
    loop {
        match cur.peek() {
            Some(b'-') => {
                cur.bump();
                sign = -sign;
                continue;
            }
            Some(b'+') => {
                cur.bump();
                continue;
            }
            Some(_) => {}
            None => {
                if terms.is_empty() {
                    return Err(CalcError::Ring(cur.error("unexpected end of input")));
                }
                break;
            }
        }
        // one term: scalar factors and at most one basis chain
        let mut coeff = Rational::from_integer(1.into());
        let mut mono = vec![0u32; dim];
        let mut lin = vec![Rational::zero(); dim];
        let mut basis: Option<Vec<usize>> = None;
        loop {
            if cur.starts_ident("exp") {
                cur.pos += 3;
                cur.expect(b'(').map_err(CalcError::Ring)?;
                parse_linform(&mut cur, dim, &mut lin)?;
                cur.expect(b')').map_err(CalcError::Ring)?;
            } else {
                match cur.peek() {
                    Some(b'd') if matches!(kind, BasisKind::Form) => {
                        basis = Some(parse_chain(&mut cur, dim, true)?);
                    }
                    Some(b'e') if matches!(kind, BasisKind::Vector) => {
                        basis = Some(parse_chain(&mut cur, dim, false)?);
                    }
                    Some(b'q') => {
                        let idx = cur.coord_index(dim).map_err(CalcError::Ring)?;
                        let power = if cur.eat(b'^') {
                            let n = cur.integer().map_err(CalcError::Ring)?;
                            n.to_string()
                                .parse::<u32>()
                                .map_err(|_| CalcError::Ring(cur.error("exponent too large")))?
                        } else {
                            1
                        };
                        mono[idx - 1] += power;
                    }
                    Some(c) if c.is_ascii_digit() => {
                        let r = cur.rational().map_err(CalcError::Ring)?;
                        coeff *= r;
                    }
                    _ => {
                        return Err(CalcError::Ring(
                            cur.error("expected factor, basis chain, or end of term"),
                        ))
                    }
                }
            }
            if !cur.eat(b'*') {
                break;
            }
        }
        let scalar = ExpPoly::from_terms(dim, [(coeff * &sign, mono, lin)])?;
        sign = Rational::from_integer(1.into());
        let idx = basis.unwrap_or_default();
        if !scalar.is_zero() {
            match degree {
                None => degree = Some(idx.len()),
                Some(d) if d != idx.len() => {
                    return Err(CalcError::DegreeMismatch {
                        expected: d,
                        got: idx.len(),
                    })
                }
                _ => {}
            }
        }
        terms.push((idx, scalar));
        match cur.peek() {
            Some(b'+') | Some(b'-') => continue,
            Some(_) => return Err(CalcError::Ring(cur.error("trailing input"))),
            None => break,
        }
    }
    Ok(Literal { degree, terms })
}

fn parse_chain(
    cur: &mut crate::ring::parse::Cursor,
    dim: usize,
    form: bool,
) -> Result<Vec<usize>, CalcError> {
    let mut out = Vec::new();
    loop {
        if form {
            cur.expect(b'd').map_err(CalcError::Ring)?;
            let idx = cur.coord_index(dim).map_err(CalcError::Ring)?;
            out.push(idx);
        } else {
            cur.expect(b'e').map_err(CalcError::Ring)?;
            let n = cur.integer().map_err(CalcError::Ring)?;
            let idx: usize = n
                .to_string()
                .parse()
                .map_err(|_| CalcError::Ring(cur.error("basis index too large")))?;
            if idx == 0 || idx > dim {
                return Err(CalcError::Ring(cur.error(&format!(
                    "basis vector e{} out of range 1..={}",
                    idx, dim
                ))));
            }
            out.push(idx);
        }
        if !cur.eat(b'^') {
            return Ok(out);
        }
        // a chain may continue with either another basis element or not;
        // '^' inside a chain always precedes one
    }
}

fn parse_linform(
    cur: &mut crate::ring::parse::Cursor,
    dim: usize,
    lin: &mut [Rational],
) -> Result<(), CalcError> {
    loop {
        let mut sign = Rational::from_integer(1.into());
        loop {
            match cur.peek() {
                Some(b'-') => {
                    cur.bump();
                    sign = -sign;
                }
                Some(b'+') => {
                    cur.bump();
                }
                _ => break,
            }
        }
        let mut c = sign;
        if matches!(cur.peek(), Some(d) if d.is_ascii_digit()) {
            c *= cur.rational().map_err(CalcError::Ring)?;
            cur.eat(b'*');
        }
        let idx = cur.coord_index(dim).map_err(CalcError::Ring)?;
        lin[idx - 1] += c;
        match cur.peek() {
            Some(b'+') | Some(b'-') => continue,
            _ => return Ok(()),
        }
    }
}

/// Parse a multivector field literal such as `e2^e3`, `exp(-q1)*e1`, or `0`.
pub fn parse_field(
    input: &str,
    chart: Chart,
    expected_degree: Option<usize>,
) -> Result<MultiVectorField, CalcError> {
    let lit = parse_literal(input, chart, BasisKind::Vector, expected_degree)?;
    let degree = lit.degree.unwrap_or(0);
    MultiVectorField::from_terms(
        chart,
        degree,
        lit.terms.into_iter().filter(|(i, _)| i.len() == degree),
    )
}

/// Parse a differential form literal such as `q1*dq2 + dq3`, or `0`.
pub fn parse_form(
    input: &str,
    chart: Chart,
    expected_degree: Option<usize>,
) -> Result<DifferentialForm, CalcError> {
    let lit = parse_literal(input, chart, BasisKind::Form, expected_degree)?;
    let degree = lit.degree.unwrap_or(0);
    DifferentialForm::from_terms(
        chart,
        degree,
        lit.terms.into_iter().filter(|(i, _)| i.len() == degree),
    )
}

/// One multi-linear tensor entry: basis labels in, label-to-rational out.
/// Omitted entries are zero.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct TensorEntry {
    #[serde(rename = "in")]
    pub input: Vec<String>,
    pub out: BTreeMap<String, String>,
}

/// The algebra definition schema.
#[derive(Debug, Clone, Serialize, Deserialize, Default)]
pub struct AlgebraFile {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kind: Option<String>,
    pub basis_gm1: Vec<String>,
    pub basis_g0: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub l1: Vec<TensorEntry>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub l2p: Vec<TensorEntry>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub l2m: Vec<TensorEntry>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub l3: Vec<TensorEntry>,
}

fn out_vec(
    out: &BTreeMap<String, String>,
    labels: &[String],
    context: &str,
) -> Result<QVec, DefError> {
    let mut v = vec![Rational::zero(); labels.len()];
    for (label, value) in out {
        let idx = labels
            .iter()
            .position(|l| l == label)
            .ok_or_else(|| field_err(context.to_string(), format!("unknown label '{}'", label)))?;
        v[idx] = parse_rational(value)?;
    }
    Ok(v)
}

/// Build the exact algebra from its definition file.
pub fn build_algebra(file: &AlgebraFile) -> Result<Lie2Algebra, DefError> {
    let mut algebra = Lie2Algebra::new(file.basis_gm1.clone(), file.basis_g0.clone())?;
    for entry in &file.l1 {
        if entry.input.len() != 1 {
            return Err(field_err("l1", "entries take one input label"));
        }
        let a = algebra.index_m1(&entry.input[0])?;
        let v = out_vec(&entry.out, &algebra.basis_0.clone(), "l1.out")?;
        algebra.set_l1(a, v)?;
    }
    for entry in &file.l2p {
        if entry.input.len() != 2 {
            return Err(field_err("l2p", "entries take two input labels"));
        }
        let i = algebra.index_0(&entry.input[0])?;
        let j = algebra.index_0(&entry.input[1])?;
        let v = out_vec(&entry.out, &algebra.basis_0.clone(), "l2p.out")?;
        let existing = algebra.l2p_basis(i, j);
        let v = crate::lie2::vec_add(&existing, &v);
        algebra.set_l2p(i, j, v)?;
    }
    for entry in &file.l2m {
        if entry.input.len() != 2 {
            return Err(field_err("l2m", "entries take two input labels"));
        }
        // the degree -1 argument may come first or second
        let (a, x, flip) = match (
            algebra.index_m1(&entry.input[0]),
            algebra.index_0(&entry.input[1]),
        ) {
            (Ok(a), Ok(x)) => (a, x, false),
            _ => {
                let x = algebra.index_0(&entry.input[0])?;
                let a = algebra.index_m1(&entry.input[1])?;
                (a, x, true)
            }
        };
        let mut v = out_vec(&entry.out, &algebra.basis_m1.clone(), "l2m.out")?;
        if flip {
            v = crate::lie2::vec_neg(&v);
        }
        let existing = algebra.l2m_basis(a, x);
        algebra.set_l2m(a, x, crate::lie2::vec_add(&existing, &v))?;
    }
    for entry in &file.l3 {
        if entry.input.len() != 3 {
            return Err(field_err("l3", "entries take three input labels"));
        }
        let i = algebra.index_0(&entry.input[0])?;
        let j = algebra.index_0(&entry.input[1])?;
        let k = algebra.index_0(&entry.input[2])?;
        let v = out_vec(&entry.out, &algebra.basis_m1.clone(), "l3.out")?;
        let existing = algebra.l3_basis(i, j, k);
        algebra.set_l3(i, j, k, crate::lie2::vec_add(&existing, &v))?;
    }
    Ok(algebra)
}

/// Emit an algebra back into the file schema, deterministically.
pub fn algebra_to_file(algebra: &Lie2Algebra) -> AlgebraFile {
    let rat_map = |v: &QVec, labels: &[String]| -> BTreeMap<String, String> {
        v.iter()
            .zip(labels)
            .filter(|(c, _)| !c.is_zero())
            .map(|(c, l)| (l.clone(), c.to_string()))
            .collect()
    };
    let mut file = AlgebraFile {
        kind: Some("algebra".into()),
        basis_gm1: algebra.basis_m1.clone(),
        basis_g0: algebra.basis_0.clone(),
        ..Default::default()
    };
    for a in 0..algebra.dim_m1() {
        let col = algebra.l1_column(a);
        if !crate::lie2::vec_is_zero(col) {
            file.l1.push(TensorEntry {
                input: vec![algebra.basis_m1[a].clone()],
                out: rat_map(col, &algebra.basis_0),
            });
        }
    }
    for (&(i, j), v) in algebra.l2p_entries() {
        file.l2p.push(TensorEntry {
            input: vec![algebra.basis_0[i].clone(), algebra.basis_0[j].clone()],
            out: rat_map(v, &algebra.basis_0),
        });
    }
    for (&(a, x), v) in algebra.l2m_entries() {
        file.l2m.push(TensorEntry {
            input: vec![algebra.basis_m1[a].clone(), algebra.basis_0[x].clone()],
            out: rat_map(v, &algebra.basis_m1),
        });
    }
    for (&(i, j, k), v) in algebra.l3_entries() {
        file.l3.push(TensorEntry {
            input: vec![
                algebra.basis_0[i].clone(),
                algebra.basis_0[j].clone(),
                algebra.basis_0[k].clone(),
            ],
            out: rat_map(v, &algebra.basis_m1),
        });
    }
    file
}

/// Reference to an algebra: inline or by path relative to the referring
/// file.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum AlgebraRef {
    Path { path: String },
    Inline(AlgebraFile),
}

impl AlgebraRef {
    pub fn load(&self, base_dir: Option<&std::path::Path>) -> Result<Lie2Algebra, DefError> {
        match self {
            AlgebraRef::Inline(file) => build_algebra(file),
            AlgebraRef::Path { path } => {
                let full = match base_dir {
                    Some(dir) => dir.join(path),
                    None => std::path::PathBuf::from(path),
                };
                let text = std::fs::read_to_string(full)?;
                let file: AlgebraFile = serde_json::from_str(&text)?;
                build_algebra(&file)
            }
        }
    }
}

/// Column map of a linear map between labelled bases.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MapEntry {
    #[serde(rename = "in")]
    pub input: String,
    pub out: BTreeMap<String, String>,
}

/// The morphism definition schema.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MorphismFile {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kind: Option<String>,
    pub source: AlgebraRef,
    pub target: AlgebraRef,
    #[serde(default, rename = "F10")]
    pub f10: Vec<MapEntry>,
    #[serde(default, rename = "F1m1")]
    pub f1m1: Vec<MapEntry>,
    #[serde(default, rename = "F2")]
    pub f2: Vec<TensorEntry>,
}

pub fn build_morphism(
    file: &MorphismFile,
    base_dir: Option<&std::path::Path>,
) -> Result<Lie2Morphism, DefError> {
    let source = Arc::new(file.source.load(base_dir)?);
    let target = Arc::new(file.target.load(base_dir)?);
    let mut f10 = vec![vec![Rational::zero(); target.dim_0()]; source.dim_0()];
    for entry in &file.f10 {
        let i = source.index_0(&entry.input)?;
        f10[i] = out_vec(&entry.out, &target.basis_0, "F10.out")?;
    }
    let mut f1m1 = vec![vec![Rational::zero(); target.dim_m1()]; source.dim_m1()];
    for entry in &file.f1m1 {
        let a = source.index_m1(&entry.input)?;
        f1m1[a] = out_vec(&entry.out, &target.basis_m1, "F1m1.out")?;
    }
    let mut f2 = BTreeMap::new();
    for entry in &file.f2 {
        if entry.input.len() != 2 {
            return Err(field_err("F2", "entries take two input labels"));
        }
        let i = source.index_0(&entry.input[0])?;
        let j = source.index_0(&entry.input[1])?;
        let v = out_vec(&entry.out, &target.basis_m1, "F2.out")?;
        match crate::lie2::pair_key(i, j) {
            Some((key, sign)) => {
                let v = if sign < 0 {
                    crate::lie2::vec_neg(&v)
                } else {
                    v
                };
                f2.insert(key, v);
            }
            None => return Err(field_err("F2", "repeated input label")),
        }
    }
    Ok(Lie2Morphism {
        source,
        target,
        f10,
        f1m1,
        f2,
    })
}

/// The action definition schema: per-basis-label field literals.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ActionFile {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kind: Option<String>,
    pub algebra: AlgebraRef,
    pub chart_dim: usize,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub rho10: BTreeMap<String, String>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub rho1m1: BTreeMap<String, String>,
    /// Keys are comma-separated label pairs such as `"x2,x1"`.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub rho2: BTreeMap<String, String>,
}

/// Split a `"x,y"` pair key.
pub fn split_pair(key: &str) -> Result<(String, String), DefError> {
    let mut it = key.split(',').map(str::trim);
    let a = it.next().filter(|s| !s.is_empty());
    let b = it.next().filter(|s| !s.is_empty());
    match (a, b, it.next()) {
        (Some(a), Some(b), None) => Ok((a.to_string(), b.to_string())),
        _ => Err(field_err(key.to_string(), "expected a 'label,label' pair")),
    }
}

/// Observable serialization: `{"ftilde": expr, "f": expr, "v": literal}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ObsFile {
    #[serde(default = "zero_string")]
    pub ftilde: String,
    #[serde(default = "zero_string")]
    pub f: String,
    #[serde(default = "zero_string")]
    pub v: String,
}

fn zero_string() -> String {
    "0".into()
}

/// A Hamiltonian 1-form literal with an optional explicit vector field
/// (solved when absent).
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum FormObsFile {
    Literal(String),
    WithField {
        alpha: String,
        #[serde(rename = "X", skip_serializing_if = "Option::is_none")]
        x: Option<String>,
    },
}

/// The comomentum definition schema.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ComomentFile {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kind: Option<String>,
    pub action: ActionRef,
    pub omega: String,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub lambda10: BTreeMap<String, FormObsFile>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub lambda1m1: BTreeMap<String, ObsFile>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub lambda2: BTreeMap<String, ObsFile>,
    /// Optional gradient-correction samples; strict gradient when absent.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub psi2: Vec<Psi2SampleFile>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Psi2SampleFile {
    pub alpha: String,
    pub beta: String,
    pub value: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ActionRef {
    Path { path: String },
    Inline(Box<ActionFile>),
}

impl ActionRef {
    pub fn load(&self, base_dir: Option<&std::path::Path>) -> Result<ActionFile, DefError> {
        match self {
            ActionRef::Inline(file) => Ok(file.as_ref().clone()),
            ActionRef::Path { path } => {
                let full = match base_dir {
                    Some(dir) => dir.join(path),
                    None => std::path::PathBuf::from(path),
                };
                let text = std::fs::read_to_string(full)?;
                Ok(serde_json::from_str(&text)?)
            }
        }
    }
}

/// Kinds of definition files the verifier dispatches on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FileKind {
    Algebra,
    Morphism,
    Action,
    Comoment,
}

/// Determine the file kind from the explicit `kind` field or, failing
/// that, from the fields present.
pub fn detect_kind(value: &serde_json::Value) -> Result<FileKind, DefError> {
    if let Some(kind) = value.get("kind").and_then(|v| v.as_str()) {
        return match kind {
            "algebra" => Ok(FileKind::Algebra),
            "morphism" => Ok(FileKind::Morphism),
            "action" => Ok(FileKind::Action),
            "comoment" => Ok(FileKind::Comoment),
            _ => Err(DefError::UnknownKind),
        };
    }
    let has = |k: &str| value.get(k).is_some();
    if has("lambda10") || has("lambda1m1") || has("lambda2") || (has("omega") && has("action")) {
        Ok(FileKind::Comoment)
    } else if has("rho10") || has("rho1m1") || has("rho2") || has("chart_dim") {
        Ok(FileKind::Action)
    } else if has("F10") || (has("source") && has("target")) {
        Ok(FileKind::Morphism)
    } else if has("basis_gm1") && has("basis_g0") {
        Ok(FileKind::Algebra)
    } else {
        Err(DefError::UnknownKind)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::int;

    #[test]
    fn field_literals_parse() {
        let c = Chart::new(3);
        let v = parse_field("e2^e3", c, None).unwrap();
        assert_eq!(v, MultiVectorField::basis(c, &[2, 3]).unwrap());
        let w = parse_field("-1*e1^e2 + exp(-q1)*e3", c, None);
        assert!(w.is_err(), "mixed degrees rejected");
        let x = parse_field("exp(-q1)*e1", c, None).unwrap();
        assert_eq!(x.coeff(&[1]), ExpPoly::parse("exp(-q1)", 3).unwrap());
        let zero = parse_field("0", c, Some(2)).unwrap();
        assert!(zero.is_zero());
        assert_eq!(zero.degree(), 2);
    }

    #[test]
    fn form_literals_parse() {
        let c = Chart::new(3);
        let a = parse_form("-1/2*q1^2*exp(-3*q2)*dq1^dq3 + q3*dq2^dq3", c, None).unwrap();
        assert_eq!(a.degree(), 2);
        assert!(parse_form("q1*dq2 + dq1^dq2", c, None).is_err());
        // unsorted chains normalise with sign
        let b = parse_form("dq2^dq1", c, None).unwrap();
        assert_eq!(b, parse_form("-1*dq1^dq2", c, None).unwrap());
        // scalar literals are degree zero
        let s = parse_form("q1 + q2", c, None).unwrap();
        assert_eq!(s.degree(), 0);
    }

    #[test]
    fn algebra_file_round_trip() {
        let text = r#"{
            "basis_gm1": ["a"],
            "basis_g0": ["x1", "x2", "x3"],
            "l1": [{"in": ["a"], "out": {"x2": "1"}}],
            "l2p": [
                {"in": ["x1", "x2"], "out": {"x2": "-1"}},
                {"in": ["x1", "x3"], "out": {"x1": "1"}}
            ],
            "l2m": [{"in": ["a", "x1"], "out": {"a": "1"}}],
            "l3": [{"in": ["x1", "x2", "x3"], "out": {"a": "-1"}}]
        }"#;
        let file: AlgebraFile = serde_json::from_str(text).unwrap();
        let algebra = build_algebra(&file).unwrap();
        assert_eq!(algebra, crate::lie2::fixtures::example_1a());
        let emitted = algebra_to_file(&algebra);
        let back = build_algebra(&emitted).unwrap();
        assert_eq!(back, algebra);
    }

    #[test]
    fn l2m_reversed_order_flips_sign() {
        let text = r#"{
            "basis_gm1": ["a"],
            "basis_g0": ["x"],
            "l2m": [{"in": ["x", "a"], "out": {"a": "1"}}]
        }"#;
        let file: AlgebraFile = serde_json::from_str(text).unwrap();
        let algebra = build_algebra(&file).unwrap();
        // l2m(x, a) = a means l2m(a, x) = -a
        assert_eq!(algebra.l2m_basis(0, 0), vec![int(-1)]);
    }

    #[test]
    fn unknown_labels_are_reported_with_paths() {
        let text = r#"{
            "basis_gm1": [],
            "basis_g0": ["x"],
            "l2p": [{"in": ["x", "y"], "out": {}}]
        }"#;
        let file: AlgebraFile = serde_json::from_str(text).unwrap();
        let err = build_algebra(&file).unwrap_err();
        assert!(err.to_string().contains("y"));
    }

    #[test]
    fn kind_detection() {
        let v: serde_json::Value =
            serde_json::from_str(r#"{"basis_gm1": [], "basis_g0": []}"#).unwrap();
        assert_eq!(detect_kind(&v).unwrap(), FileKind::Algebra);
        let v: serde_json::Value =
            serde_json::from_str(r#"{"algebra": {"path": "x"}, "chart_dim": 3}"#).unwrap();
        assert_eq!(detect_kind(&v).unwrap(), FileKind::Action);
        let v: serde_json::Value = serde_json::from_str(r#"{"kind": "comoment"}"#).unwrap();
        assert_eq!(detect_kind(&v).unwrap(), FileKind::Comoment);
        let v: serde_json::Value = serde_json::from_str(r#"{"foo": 1}"#).unwrap();
        assert!(detect_kind(&v).is_err());
    }

    #[test]
    fn pair_keys_split() {
        assert_eq!(
            split_pair("x2, x1").unwrap(),
            ("x2".to_string(), "x1".to_string())
        );
        assert!(split_pair("x2").is_err());
        assert!(split_pair("a,b,c").is_err());
    }
}
