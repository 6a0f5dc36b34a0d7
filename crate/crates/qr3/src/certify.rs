//! Construction and independent verification of rank-3 certificates: lists
//! of rank-3 quadrics spanning I(C)₂, built by the pencil-determinant method
//! at the elliptic base and a three-cone recursion above it, plus the
//! two-point subspace checker and the brute-force enumeration oracle.

use serde::{Deserialize, Serialize};

use crate::binform::det_pencil;
use crate::curve::{canonical_sections, sample_points, CurveModel, CurvePoint, SectionSpace};
use crate::error::{Error, Result};
use crate::field::{FieldSpec, Scalar};
use crate::ideal::{
    expected_i2_dim, generated_in_degree_3, quadric_space, singular_quartic_generators,
    sym2_image_matrix, vanishes_via_image, Degree3Report, QuadraticForm,
};
use crate::matrix::{Matrix, Span};

/// Version string stamped into certificates.
pub const ENGINE_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Provenance tree of a certificate: how each quadric was obtained.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type")]
pub enum TraceNode {
    /// Genus-0 base: the single conic of a 3-dimensional section space.
    ConicBase,
    /// Singular quartic base: the explicit generator pair.
    ExplicitSingular,
    /// Elliptic base: one rational root (λ:μ) of the pencil determinant.
    PencilRoot { root: String },
    /// Recursion step: quadrics pulled back from the cone over a point.
    ConePullback {
        point: String,
        child_index: usize,
        children: Vec<TraceNode>,
    },
}

/// An independently verifiable list of rank-3 quadrics spanning I(C)₂.
#[derive(Debug, Clone)]
pub struct Qr3Certificate {
    pub engine_version: String,
    pub field: FieldSpec,
    pub curve: CurveModel,
    pub degree: usize,
    pub ambient_dim: usize,
    pub target_dim: usize,
    pub quadrics: Vec<QuadraticForm>,
    pub trace: Vec<TraceNode>,
}

/// Row-major matrix in the portable scalar-string encoding.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct WireMatrix {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<String>,
}

pub fn matrix_to_wire(m: &Matrix) -> WireMatrix {
    let mut entries = Vec::with_capacity(m.rows * m.cols);
    for i in 0..m.rows {
        for j in 0..m.cols {
            entries.push(m.at(i, j).to_string());
        }
    }
    WireMatrix { rows: m.rows, cols: m.cols, entries }
}

pub fn matrix_from_wire(w: &WireMatrix, field: FieldSpec) -> Result<Matrix> {
    let n = w
        .rows
        .checked_mul(w.cols)
        .ok_or_else(|| Error::Parse("matrix dimensions overflow".into()))?;
    if n != w.entries.len() {
        return Err(Error::Parse(format!(
            "matrix claims {}x{} but carries {} entries",
            w.rows,
            w.cols,
            w.entries.len()
        )));
    }
    let mut m = Matrix::zeros(field, w.rows, w.cols);
    for (k, s) in w.entries.iter().enumerate() {
        m.set(k / w.cols, k % w.cols, Scalar::parse(s, field)?);
    }
    Ok(m)
}

#[derive(Serialize, Deserialize)]
struct CertificateWire {
    engine_version: String,
    field: String,
    curve: String,
    degree: usize,
    ambient_dim: usize,
    target_dim: usize,
    quadrics: Vec<WireMatrix>,
    ranks: Vec<usize>,
    trace: Vec<TraceNode>,
}

impl Qr3Certificate {
    pub fn ranks(&self) -> Vec<usize> {
        self.quadrics.iter().map(|q| q.rank()).collect()
    }

    pub fn to_json(&self) -> serde_json::Value {
        let wire = CertificateWire {
            engine_version: self.engine_version.clone(),
            field: self.field.to_string(),
            curve: self.curve.to_string(),
            degree: self.degree,
            ambient_dim: self.ambient_dim,
            target_dim: self.target_dim,
            quadrics: self.quadrics.iter().map(|q| matrix_to_wire(&q.gram)).collect(),
            ranks: self.ranks(),
            trace: self.trace.clone(),
        };
        serde_json::to_value(wire).expect("certificate serialization cannot fail")
    }

    /// Canonical pretty-printed JSON; byte-identical across runs for
    /// identical inputs.
    pub fn to_json_string(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.to_json())
            .expect("certificate serialization cannot fail");
        s.push('\n');
        s
    }

    pub fn from_json_str(s: &str) -> Result<Qr3Certificate> {
        let wire: CertificateWire =
            serde_json::from_str(s).map_err(|e| Error::Parse(format!("certificate JSON: {e}")))?;
        let field = FieldSpec::parse(&wire.field)?;
        let curve = CurveModel::parse(&wire.curve, field)?;
        if curve.degree() != wire.degree {
            return Err(Error::Parse(format!(
                "certificate degree {} disagrees with curve spec {}",
                wire.degree, wire.curve
            )));
        }
        let mut quadrics = Vec::with_capacity(wire.quadrics.len());
        for w in &wire.quadrics {
            let m = matrix_from_wire(w, field)?;
            quadrics.push(QuadraticForm::new(m)?);
        }
        Ok(Qr3Certificate {
            engine_version: wire.engine_version,
            field,
            curve,
            degree: wire.degree,
            ambient_dim: wire.ambient_dim,
            target_dim: wire.target_dim,
            quadrics,
            trace: wire.trace,
        })
    }
}

/// Pull quadrics of the child embedding (sections vanishing at `pt`) back
/// to cones in the parent coordinates: Gram ↦ K·Gram·Kᵀ for the kernel
/// inclusion K. Ranks are preserved; parent membership is re-checked.
pub fn cone_pullback(
    parent: &SectionSpace,
    pt: &CurvePoint,
    child_forms: &[QuadraticForm],
) -> Result<Vec<QuadraticForm>> {
    let image = sym2_image_matrix(parent);
    let (_, k) = parent.project_at(pt)?;
    cone_pullback_with_image(parent, &image, &k, child_forms)
}

/// Positive primitive rescaling of a Gram matrix over ℚ; identity over 𝔽ₚ.
fn primitive_gram(gram: Matrix) -> Matrix {
    if gram.field != FieldSpec::Rationals {
        return gram;
    }
    let (r, c) = (gram.rows, gram.cols);
    let mut entries = Vec::with_capacity(r * c);
    for i in 0..r {
        for j in 0..c {
            entries.push(gram.at(i, j).clone());
        }
    }
    let entries = crate::field::primitive_part(&entries);
    let mut out = Matrix::zeros(gram.field, r, c);
    for (k, s) in entries.into_iter().enumerate() {
        out.set(k / c, k % c, s);
    }
    out
}

fn cone_pullback_with_image(
    parent: &SectionSpace,
    parent_image: &Matrix,
    k: &Matrix,
    child_forms: &[QuadraticForm],
) -> Result<Vec<QuadraticForm>> {
    let out = pullback_forms(parent.dim(), k, child_forms)?;
    for pulled in &out {
        if !vanishes_via_image(parent_image, pulled) {
            return Err(Error::InclusionMismatch);
        }
    }
    Ok(out)
}

/// The raw congruence step of the pullback, without the vanishing
/// re-check. The recursion uses this directly: re-checking every pulled
/// quadric at every node costs more than the whole rest of the build, and
/// the final quadrics are checked against the root curve anyway (once
/// when the certificate is assembled, and again — independently — by
/// verification).
fn pullback_forms(
    parent_dim: usize,
    k: &Matrix,
    child_forms: &[QuadraticForm],
) -> Result<Vec<QuadraticForm>> {
    let kt = k.transpose();
    let mut out = Vec::with_capacity(child_forms.len());
    for q in child_forms {
        if q.dim() != parent_dim - 1 {
            return Err(Error::DimensionMismatch { expected: parent_dim - 1, got: q.dim() });
        }
        let gram = primitive_gram(k.mul(&q.gram).mul(&kt));
        let pulled = match q.cached_rank() {
            // congruence with a full-column-rank inclusion, then a positive
            // scaling: both preserve rank
            Some(r) => QuadraticForm::with_known_rank(gram, r)?,
            None => QuadraticForm::new(gram)?,
        };
        out.push(pulled);
    }
    Ok(out)
}

/// The elliptic base case: I₂ is a pencil; rational roots of its quartic
/// determinant give rank-3 members, two of which span.
fn pencil_forms(space: &SectionSpace) -> Result<(Vec<QuadraticForm>, Vec<TraceNode>)> {
    if space.dim() != 4 {
        return Err(Error::NotAPencil { dim: space.dim() });
    }
    let i2 = quadric_space(space)?;
    if i2.dim() != 2 {
        return Err(Error::NotAPencil { dim: i2.dim() });
    }
    let det = det_pencil(&i2.basis[0].gram, &i2.basis[1].gram);
    if det.is_zero() {
        return Err(Error::Unsupported(
            "pencil determinant vanishes identically".into(),
        ));
    }
    let roots = det.roots()?;
    let mut span = Span::new(space.field, 10);
    let mut kept = Vec::new();
    let mut trace = Vec::new();
    for ((l, u), _) in &roots {
        let q = QuadraticForm::pencil_member(l, &i2.basis[0], u, &i2.basis[1]);
        let rank = q.rank();
        if rank != 3 {
            return Err(Error::UnexpectedRank { rank, root: format!("({l}:{u})") });
        }
        if span.insert(&q.flatten()) {
            kept.push(q);
            trace.push(TraceNode::PencilRoot { root: format!("({l}:{u})") });
        }
        if span.rank() == 2 {
            break;
        }
    }
    if kept.len() < 2 {
        return Err(Error::InsufficientRationalRoots { found: roots.len(), at_point: None });
    }
    Ok((kept, trace))
}

/// Standalone pencil certificate for a degree-4 elliptic embedding.
pub fn pencil_certificate(space: &SectionSpace) -> Result<Qr3Certificate> {
    if !space.divisor.is_empty() || space.twist != 1 {
        return Err(Error::Unsupported(
            "pencil certificates are issued for untrimmed embeddings".into(),
        ));
    }
    let (quadrics, trace) = pencil_forms(space)?;
    Ok(Qr3Certificate {
        engine_version: ENGINE_VERSION.to_string(),
        field: space.field,
        curve: space.model.clone(),
        degree: space.model.degree(),
        ambient_dim: space.dim(),
        target_dim: 2,
        quadrics,
        trace,
    })
}

/// Pick the three recursion points for a node. ℙ¹ models prefer points the
/// node's divisor has touched least (ties broken by supply order), so small
/// fields can reuse parameters at higher vanishing multiplicity.
/// Weierstrass models require three unused points.
fn choose_points(space: &SectionSpace, supply: &[CurvePoint]) -> Result<Vec<CurvePoint>> {
    if space.model.is_p1_parameterized() {
        if supply.len() < 3 {
            return Err(Error::InsufficientPoints { needed: 3, available: supply.len() });
        }
        let mut idx: Vec<usize> = (0..supply.len()).collect();
        idx.sort_by_key(|&i| (space.multiplicity_at(&supply[i]), i));
        Ok(idx[..3].iter().map(|&i| supply[i].clone()).collect())
    } else {
        let fresh: Vec<CurvePoint> = supply
            .iter()
            .filter(|p| space.multiplicity_at(p) == 0)
            .take(3)
            .cloned()
            .collect();
        if fresh.len() < 3 {
            return Err(Error::InsufficientPoints { needed: 3, available: fresh.len() });
        }
        Ok(fresh)
    }
}

fn certify_space(
    space: &SectionSpace,
    supply: &[CurvePoint],
) -> Result<(Vec<QuadraticForm>, Vec<TraceNode>)> {
    let genus = space.model.arithmetic_genus();
    let m = space.dim();

    // base cases
    if matches!(space.model, CurveModel::QuarticNodal | CurveModel::QuarticCuspidal) && m == 4 {
        assert!(space.divisor.is_empty(), "singular quartic base below the root");
        let gens = singular_quartic_generators(&space.model, space.field)?;
        let image = sym2_image_matrix(space);
        for g in &gens {
            assert!(vanishes_via_image(&image, g), "explicit generator off the curve");
            assert_eq!(g.rank(), 3);
        }
        return Ok((gens, vec![TraceNode::ExplicitSingular]));
    }
    if genus == 0 && m == 3 {
        let i2 = quadric_space(space)?;
        assert_eq!(i2.dim(), 1, "three sections of a rational curve carry one conic");
        let conic = i2.basis.into_iter().next().unwrap();
        let rank = conic.rank();
        if rank != 3 {
            return Err(Error::UnexpectedRank { rank, root: "conic base".into() });
        }
        return Ok((vec![conic], vec![TraceNode::ConicBase]));
    }
    if genus == 1 && m == 4 {
        return pencil_forms(space);
    }
    assert!(m > genus + 3, "recursion reached an unexpected dimension");

    let picks = choose_points(space, supply)?;
    let target = expected_i2_dim(m, genus);
    let flat_len = m * (m + 1) / 2;

    let mut groups: Vec<Vec<QuadraticForm>> = Vec::with_capacity(3);
    let mut trace = Vec::with_capacity(3);
    for (i, pt) in picks.iter().enumerate() {
        let (child, k) = space.project_at(pt)?;
        let (child_forms, child_trace) = certify_space(&child, supply).map_err(|e| match e {
            // tag the failing branch so diagnostics name a concrete point
            Error::InsufficientRationalRoots { found, at_point: None } => {
                Error::InsufficientRationalRoots { found, at_point: Some(pt.to_string()) }
            }
            other => other,
        })?;
        let pulled = pullback_forms(m, &k, &child_forms)?;
        groups.push(pulled);
        trace.push(TraceNode::ConePullback {
            point: pt.to_string(),
            child_index: i,
            children: child_trace,
        });
    }

    // the structural identity behind the recursion: any two cones span a
    // hyperplane of I₂, and all three span it entirely
    let mut pair_dims = Vec::with_capacity(3);
    for (a, b) in [(0, 1), (0, 2), (1, 2)] {
        let mut sp = Span::new(space.field, flat_len);
        for q in groups[a].iter().chain(groups[b].iter()) {
            sp.insert(&q.flatten());
        }
        pair_dims.push(sp.rank());
    }
    let mut sp = Span::new(space.field, flat_len);
    let mut kept = Vec::new();
    for group in &groups {
        for q in group {
            if sp.insert(&q.flatten()) {
                kept.push(q.clone());
            }
        }
    }
    let got = sp.rank();
    if got != target || pair_dims.iter().any(|&d| d + 1 != target) {
        return Err(Error::SpanningFailure { got, want: target, pair_dims, space_dim: m });
    }
    Ok((kept, trace))
}

/// Build a rank-3 spanning certificate for the model's embedding.
///
/// Points are drawn from `sample_points(model, field, …, seed)` unless an
/// explicit supply is given (useful over ℚ when the default integer scan
/// finds no rational points).
pub fn build_certificate(
    model: &CurveModel,
    field: FieldSpec,
    seed: u64,
    points_override: Option<&[CurvePoint]>,
) -> Result<Qr3Certificate> {
    model.validate(field)?;
    if let CurveModel::EllipticSmooth { degree, .. } = model {
        if *degree < 4 {
            return Err(Error::DegreeTooSmall(
                "elliptic certification needs degree >= 4".into(),
            ));
        }
    }
    let root = canonical_sections(model, field)?;
    let supply: Vec<CurvePoint> = match points_override {
        Some(pts) => {
            for (i, p) in pts.iter().enumerate() {
                if pts[..i].contains(p) {
                    return Err(Error::PointsNotDistinct);
                }
            }
            pts.to_vec()
        }
        None => sample_points(model, field, root.dim() + 8, seed)?.points,
    };
    let (quadrics, trace) = certify_space(&root, &supply)?;

    let i2 = quadric_space(&root)?;
    let target_dim = i2.dim();
    assert_eq!(
        target_dim,
        expected_i2_dim(root.dim(), model.arithmetic_genus()),
        "kernel dimension disagrees with the closed formula"
    );
    let root_image = sym2_image_matrix(&root);
    for q in &quadrics {
        assert!(
            vanishes_via_image(&root_image, q),
            "certified quadric does not vanish on the curve"
        );
    }
    let mut sp = Span::new(field, root.dim() * (root.dim() + 1) / 2);
    for q in &quadrics {
        sp.insert(&q.flatten());
    }
    assert_eq!(sp.rank(), target_dim, "certified span escaped its target");

    Ok(Qr3Certificate {
        engine_version: ENGINE_VERSION.to_string(),
        field,
        curve: model.clone(),
        degree: model.degree(),
        ambient_dim: root.dim(),
        target_dim,
        quadrics,
        trace,
    })
}

/// Independent re-check of a certificate; shares no state with construction.
#[derive(Debug, Clone, Serialize)]
pub struct VerificationReport {
    /// Per-quadric: vanishes identically on the curve (exact, via the
    /// multiplication map).
    pub membership: Vec<bool>,
    pub ranks: Vec<usize>,
    pub ranks_ok: bool,
    pub span_dim: usize,
    pub target_dim: usize,
    pub span_deficit: usize,
    pub span_ok: bool,
    pub degree3: Degree3Report,
    pub degree3_generation: bool,
    pub passed: bool,
}

pub fn verify_certificate(cert: &Qr3Certificate) -> Result<VerificationReport> {
    let field = cert.field;
    cert.curve.validate(field)?;
    let root = canonical_sections(&cert.curve, field)?;
    let m = root.dim();
    for q in &cert.quadrics {
        if q.dim() != m {
            return Err(Error::DimensionMismatch { expected: m, got: q.dim() });
        }
    }
    let image = sym2_image_matrix(&root);
    let membership: Vec<bool> = cert
        .quadrics
        .iter()
        .map(|q| vanishes_via_image(&image, q))
        .collect();
    let ranks: Vec<usize> = cert.quadrics.iter().map(|q| q.rank()).collect();
    let ranks_ok = !ranks.is_empty() && ranks.iter().all(|&r| r == 3);

    let target_dim = quadric_space(&root)?.dim();
    let mut sp = Span::new(field, m * (m + 1) / 2);
    for q in &cert.quadrics {
        sp.insert(&q.flatten());
    }
    let span_dim = sp.rank();
    let span_ok = span_dim == target_dim && cert.target_dim == target_dim;

    let degree3 = generated_in_degree_3(&root, &cert.quadrics)?;
    let degree3_generation = degree3.generated;
    let passed = membership.iter().all(|&b| b) && ranks_ok && span_ok && degree3_generation;
    Ok(VerificationReport {
        membership,
        ranks,
        ranks_ok,
        span_dim,
        target_dim,
        span_deficit: target_dim.saturating_sub(span_dim),
        span_ok,
        degree3,
        degree3_generation,
        passed,
    })
}

/// Two-point subspace analysis: the cones over two points meet exactly in
/// the quadrics of the doubly-projected curve, and together they fill a
/// hyperplane of I(C)₂.
#[derive(Debug, Clone, Serialize)]
pub struct LemmaReport {
    pub dim_c0: usize,
    pub dim_s1: usize,
    pub dim_s2: usize,
    pub dim_sum: usize,
    pub dim_intersection: usize,
    pub dim_t: usize,
    pub sum_is_codim_1: bool,
    pub intersection_equals_t: bool,
    pub formulas_match: bool,
    pub holds: bool,
}

pub fn lemma22_check(
    model: &CurveModel,
    field: FieldSpec,
    p1: &CurvePoint,
    p2: &CurvePoint,
) -> Result<LemmaReport> {
    model.validate(field)?;
    if p1 == p2 {
        return Err(Error::PointsNotDistinct);
    }
    let g = model.arithmetic_genus();
    let d = model.degree();
    if d < 2 * g + 3 {
        return Err(Error::DegreeTooSmall(format!(
            "two-point analysis needs degree >= {}",
            2 * g + 3
        )));
    }
    let root = canonical_sections(model, field)?;
    let m = root.dim();
    let flat_len = m * (m + 1) / 2;
    let i2 = quadric_space(&root)?;
    let image = sym2_image_matrix(&root);

    let (child1, k1) = root.project_at(p1)?;
    let (child2, k2) = root.project_at(p2)?;
    let cone1 = cone_pullback_with_image(&root, &image, &k1, &quadric_space(&child1)?.basis)?;
    let cone2 = cone_pullback_with_image(&root, &image, &k2, &quadric_space(&child2)?.basis)?;

    // T = the doubly-projected curve; its quadrics pull back through child1
    let (grandchild, kg) = child1.project_at(p2)?;
    let t_child = cone_pullback_with_image(
        &child1,
        &sym2_image_matrix(&child1),
        &kg,
        &quadric_space(&grandchild)?.basis,
    )?;
    let t_forms = cone_pullback_with_image(&root, &image, &k1, &t_child)?;

    let mut span1 = Span::new(field, flat_len);
    for q in &cone1 {
        span1.insert(&q.flatten());
    }
    let mut span2 = Span::new(field, flat_len);
    for q in &cone2 {
        span2.insert(&q.flatten());
    }
    let mut sum = Span::new(field, flat_len);
    for q in cone1.iter().chain(cone2.iter()) {
        sum.insert(&q.flatten());
    }
    let mut span_t = Span::new(field, flat_len);
    for q in &t_forms {
        span_t.insert(&q.flatten());
    }

    let (dim_s1, dim_s2) = (span1.rank(), span2.rank());
    let dim_sum = sum.rank();
    let dim_intersection = dim_s1 + dim_s2 - dim_sum;
    let dim_t = span_t.rank();
    // T ⊆ S₁ ∩ S₂ always; equality iff the dimensions agree
    let t_inside = t_forms
        .iter()
        .all(|q| span1.contains(&q.flatten()) && span2.contains(&q.flatten()));
    let intersection_equals_t = t_inside && dim_t == dim_intersection;
    let sum_is_codim_1 = dim_sum + 1 == i2.dim();
    let c2 = |n: usize| n * n.saturating_sub(1) / 2;
    let formulas_match = i2.dim() == c2(d - g) - g
        && dim_s1 == c2(d - g - 1) - g
        && dim_s2 == c2(d - g - 1) - g
        && dim_t == c2(d - g - 2) - g;
    Ok(LemmaReport {
        dim_c0: i2.dim(),
        dim_s1,
        dim_s2,
        dim_sum,
        dim_intersection,
        dim_t,
        sum_is_codim_1,
        intersection_equals_t,
        formulas_match,
        holds: sum_is_codim_1 && intersection_equals_t && formulas_match,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct HistogramEntry {
    pub rank: usize,
    pub count: u64,
}

/// Brute-force ground truth over 𝔽ₚ: every projective class of I₂ gets its
/// rank computed; reports whether the rank-≤3 classes span.
#[derive(Debug, Clone, Serialize)]
pub struct OracleReport {
    pub classes: u128,
    pub histogram: Vec<HistogramEntry>,
    pub rank_le3: u64,
    pub dim_i2: usize,
    pub span_dim: usize,
    pub spans: bool,
}

pub fn oracle_rank3_span(
    model: &CurveModel,
    field: FieldSpec,
    cap: u128,
) -> Result<OracleReport> {
    let p = match field {
        FieldSpec::Prime(p) => p as u128,
        FieldSpec::Rationals => {
            return Err(Error::Unsupported(
                "exhaustive enumeration needs a finite field".into(),
            ))
        }
    };
    let root = canonical_sections(model, field)?;
    let i2 = quadric_space(&root)?;
    let k = i2.dim();
    if k == 0 {
        return Ok(OracleReport {
            classes: 0,
            histogram: vec![],
            rank_le3: 0,
            dim_i2: 0,
            span_dim: 0,
            spans: true,
        });
    }
    let mut classes: u128 = 0;
    for _ in 0..k {
        classes = classes
            .saturating_mul(p)
            .saturating_add(1);
    }
    if classes > cap {
        return Err(Error::CapExceeded { classes, cap });
    }

    let m = i2.ambient_dim;
    let flat_len = m * (m + 1) / 2;
    let mut histogram: std::collections::BTreeMap<usize, u64> = Default::default();
    let mut span = Span::new(field, flat_len);
    let mut rank_le3 = 0u64;
    // canonical representatives: first nonzero coefficient is 1, scanned
    // with the trailing coefficients as an ascending base-p counter
    let mut coeffs = vec![field.zero(); k];
    for lead in 0..k {
        let free = k - lead - 1;
        let mut digits = vec![0u64; free];
        loop {
            for c in coeffs.iter_mut() {
                *c = field.zero();
            }
            coeffs[lead] = field.one();
            for (t, &dg) in digits.iter().enumerate() {
                coeffs[lead + 1 + t] = field.from_i64(dg as i64);
            }
            let mut gram = Matrix::zeros(field, m, m);
            for (c, b) in coeffs.iter().zip(&i2.basis) {
                if c.is_zero() {
                    continue;
                }
                for r in 0..m {
                    for s in 0..m {
                        let v = gram.at(r, s).add(&c.mul(b.gram.at(r, s)));
                        gram.set(r, s, v);
                    }
                }
            }
            let q = QuadraticForm::new(gram)?;
            let rank = q.rank();
            *histogram.entry(rank).or_insert(0) += 1;
            if rank <= 3 {
                rank_le3 += 1;
                span.insert(&q.flatten());
            }
            // increment the base-p counter, most significant digit first
            let mut t = free;
            loop {
                if t == 0 {
                    break;
                }
                t -= 1;
                digits[t] += 1;
                if digits[t] < p as u64 {
                    break;
                }
                digits[t] = 0;
            }
            if digits.iter().all(|&d| d == 0) {
                break;
            }
        }
    }
    let total: u64 = histogram.values().sum();
    assert_eq!(total as u128, classes, "enumeration missed classes");
    let span_dim = span.rank();
    Ok(OracleReport {
        classes,
        histogram: histogram
            .into_iter()
            .map(|(rank, count)| HistogramEntry { rank, count })
            .collect(),
        rank_le3,
        dim_i2: k,
        span_dim,
        spans: span_dim == k,
    })
}
