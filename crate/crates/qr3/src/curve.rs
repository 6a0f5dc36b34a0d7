//! Curve models, their section spaces, and the operations the certifier
//! needs: canonical bases, products, evaluation, vanishing subspaces, and
//! deterministic point sampling.
//!
//! Models come in two flavours. The ℙ¹-parameterized ones (rational normal
//! curves and the two singular quartics) represent sections as binary forms
//! in the parameter. Smooth Weierstrass models y² = x³ + ax + b represent a
//! section of O(n·P∞) as A(x) + B(x)·y and reduce y² on multiplication.

use crate::binform::{normalize_p1, BinaryForm, P1Point};
use crate::error::{Error, Result};
use crate::field::{FieldSpec, Scalar};
use crate::matrix::Matrix;

#[derive(Debug, Clone, PartialEq)]
pub enum CurvePoint {
    /// A parameter value on a ℙ¹-parameterized model, normalized so the
    /// first nonzero coordinate is 1.
    Param { s: Scalar, t: Scalar },
    /// An affine point (x, y) of a Weierstrass model.
    Affine { x: Scalar, y: Scalar },
    /// The point at infinity of a Weierstrass model.
    Infinity,
}

impl CurvePoint {
    pub fn param(s: Scalar, t: Scalar) -> CurvePoint {
        let (s, t) = normalize_p1(s, t);
        CurvePoint::Param { s, t }
    }

    /// Parse "(s:t)", "(x,y)", or "inf".
    pub fn parse(input: &str, field: FieldSpec) -> Result<CurvePoint> {
        let s = input.trim();
        if s == "inf" {
            return Ok(CurvePoint::Infinity);
        }
        let inner = s
            .strip_prefix('(')
            .and_then(|r| r.strip_suffix(')'))
            .ok_or_else(|| Error::Parse(format!("bad point {input:?}")))?;
        if let Some((a, b)) = inner.split_once(':') {
            let s0 = Scalar::parse(a, field)?;
            let t0 = Scalar::parse(b, field)?;
            if s0.is_zero() && t0.is_zero() {
                return Err(Error::Parse("(0:0) is not a projective point".into()));
            }
            return Ok(CurvePoint::param(s0, t0));
        }
        if let Some((a, b)) = inner.split_once(',') {
            return Ok(CurvePoint::Affine {
                x: Scalar::parse(a, field)?,
                y: Scalar::parse(b, field)?,
            });
        }
        Err(Error::Parse(format!("bad point {input:?}")))
    }
}

impl std::fmt::Display for CurvePoint {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CurvePoint::Param { s, t } => write!(f, "({s}:{t})"),
            CurvePoint::Affine { x, y } => write!(f, "({x},{y})"),
            CurvePoint::Infinity => write!(f, "inf"),
        }
    }
}

/// Hard ceiling on embedding degrees; the algorithms are polynomial but
/// the Sym³ matrices grow fast enough that anything larger is a typo.
pub const MAX_DEGREE: usize = 512;

#[derive(Debug, Clone, PartialEq)]
pub enum CurveModel {
    /// The rational normal curve of degree d in ℙ^d.
    RationalNormal { degree: usize },
    /// A smooth Weierstrass cubic y² = x³ + ax + b embedded by O(d·P∞).
    EllipticSmooth { a: Scalar, b: Scalar, degree: usize },
    /// The rational quartic in ℙ³ with one node.
    QuarticNodal,
    /// The rational quartic in ℙ³ with one cusp.
    QuarticCuspidal,
}

impl CurveModel {
    /// Parse "rnc:<d>", "elliptic:a=<a>,b=<b>,d=<n>", "nodal4", or "cusp4".
    pub fn parse(spec: &str, field: FieldSpec) -> Result<CurveModel> {
        let s = spec.trim();
        if let Some(d) = s.strip_prefix("rnc:") {
            let degree: usize = d
                .parse()
                .map_err(|_| Error::Parse(format!("bad degree in curve spec {spec:?}")))?;
            let m = CurveModel::RationalNormal { degree };
            m.validate(field)?;
            return Ok(m);
        }
        if let Some(args) = s.strip_prefix("elliptic:") {
            let (mut a, mut b, mut d) = (None, None, None);
            for part in args.split(',') {
                match part.split_once('=') {
                    Some(("a", v)) => a = Some(Scalar::parse(v, field)?),
                    Some(("b", v)) => b = Some(Scalar::parse(v, field)?),
                    Some(("d", v)) => {
                        d = Some(v.parse::<usize>().map_err(|_| {
                            Error::Parse(format!("bad degree in curve spec {spec:?}"))
                        })?)
                    }
                    _ => return Err(Error::Parse(format!("bad curve spec {spec:?}"))),
                }
            }
            let (a, b, d) = match (a, b, d) {
                (Some(a), Some(b), Some(d)) => (a, b, d),
                _ => {
                    return Err(Error::Parse(format!(
                        "curve spec {spec:?} needs a=, b=, and d="
                    )))
                }
            };
            let m = CurveModel::EllipticSmooth { a, b, degree: d };
            m.validate(field)?;
            return Ok(m);
        }
        match s {
            "nodal4" => {
                let m = CurveModel::QuarticNodal;
                m.validate(field)?;
                Ok(m)
            }
            "cusp4" => {
                let m = CurveModel::QuarticCuspidal;
                m.validate(field)?;
                Ok(m)
            }
            _ => Err(Error::Parse(format!("unknown curve spec {spec:?}"))),
        }
    }

    pub fn validate(&self, field: FieldSpec) -> Result<()> {
        match self {
            CurveModel::RationalNormal { degree } => {
                if *degree < 2 {
                    return Err(Error::DegreeTooSmall(
                        "rational normal curves need degree >= 2".into(),
                    ));
                }
                if *degree > MAX_DEGREE {
                    return Err(Error::Unsupported(format!(
                        "degree {degree} exceeds the supported bound {MAX_DEGREE}"
                    )));
                }
            }
            CurveModel::EllipticSmooth { a, b, degree } => {
                if field.is_char_3() {
                    return Err(Error::Unsupported(
                        "Weierstrass models need characteristic != 2, 3".into(),
                    ));
                }
                if a.field() != field || b.field() != field {
                    return Err(Error::FieldMismatch(
                        a.field().to_string(),
                        field.to_string(),
                    ));
                }
                if *degree < 3 {
                    return Err(Error::DegreeTooSmall(
                        "Weierstrass embeddings need degree >= 3".into(),
                    ));
                }
                if *degree > MAX_DEGREE {
                    return Err(Error::Unsupported(format!(
                        "degree {degree} exceeds the supported bound {MAX_DEGREE}"
                    )));
                }
                // 4a^3 + 27b^2 = 0 would make the cubic singular
                let disc = field
                    .from_i64(4)
                    .mul(&a.pow(3))
                    .add(&field.from_i64(27).mul(&b.pow(2)));
                if disc.is_zero() {
                    return Err(Error::Unsupported(
                        "singular Weierstrass model: 4a^3 + 27b^2 = 0".into(),
                    ));
                }
            }
            CurveModel::QuarticNodal | CurveModel::QuarticCuspidal => {
                if field.is_char_3() {
                    // keep the singular quartics off char 3 as well: their
                    // certificates use half-integer Gram entries tested
                    // against rank tables derived away from tiny fields
                    return Err(Error::Unsupported(
                        "singular quartic models need characteristic != 2, 3".into(),
                    ));
                }
            }
        }
        Ok(())
    }

    /// Number of coordinates of the embedding = h⁰ of the embedding bundle.
    pub fn embedding_dim(&self) -> usize {
        match self {
            CurveModel::RationalNormal { degree } => degree + 1,
            CurveModel::EllipticSmooth { degree, .. } => *degree,
            CurveModel::QuarticNodal | CurveModel::QuarticCuspidal => 4,
        }
    }

    pub fn degree(&self) -> usize {
        match self {
            CurveModel::RationalNormal { degree } => *degree,
            CurveModel::EllipticSmooth { degree, .. } => *degree,
            CurveModel::QuarticNodal | CurveModel::QuarticCuspidal => 4,
        }
    }

    pub fn arithmetic_genus(&self) -> usize {
        match self {
            CurveModel::RationalNormal { .. } => 0,
            _ => 1,
        }
    }

    pub fn is_p1_parameterized(&self) -> bool {
        !matches!(self, CurveModel::EllipticSmooth { .. })
    }

    /// Parameters a ℙ¹ model maps to its singular point; never sampled and
    /// rejected by vanishing_subspace.
    pub fn excluded_params(&self, field: FieldSpec) -> Vec<P1Point> {
        match self {
            CurveModel::QuarticCuspidal => vec![(field.one(), field.zero())],
            CurveModel::QuarticNodal => vec![
                (field.one(), field.zero()),
                (field.one(), field.from_i64(-1)),
            ],
            _ => vec![],
        }
    }

    /// The coordinate forms of the parameterization φ: ℙ¹ → ℙ³ of the
    /// singular quartics, as degree-4 binary forms.
    fn quartic_parameterization(&self, field: FieldSpec) -> Vec<BinaryForm> {
        let c = |v: &[i64]| BinaryForm::new(v.iter().map(|&n| field.from_i64(n)).collect());
        match self {
            // (u²v², u⁴, -v⁴, uv³)
            CurveModel::QuarticCuspidal => vec![
                c(&[0, 0, 1, 0, 0]),
                c(&[1, 0, 0, 0, 0]),
                c(&[0, 0, 0, 0, -1]),
                c(&[0, 0, 0, 1, 0]),
            ],
            // (u²v(u+v), u⁴, -v²(u+v)², uv²(u+v))
            CurveModel::QuarticNodal => vec![
                c(&[0, 1, 1, 0, 0]),
                c(&[1, 0, 0, 0, 0]),
                c(&[0, 0, -1, -2, -1]),
                c(&[0, 0, 1, 1, 0]),
            ],
            _ => panic!("quartic parameterization of a non-quartic model"),
        }
    }
}

impl std::fmt::Display for CurveModel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CurveModel::RationalNormal { degree } => write!(f, "rnc:{degree}"),
            CurveModel::EllipticSmooth { a, b, degree } => {
                write!(f, "elliptic:a={a},b={b},d={degree}")
            }
            CurveModel::QuarticNodal => write!(f, "nodal4"),
            CurveModel::QuarticCuspidal => write!(f, "cusp4"),
        }
    }
}

/// A section in the ambient representation of its model.
#[derive(Debug, Clone, PartialEq)]
pub enum SectionElt {
    /// ℙ¹ models: a binary form in the parameter.
    Form(BinaryForm),
    /// Weierstrass models: fx(x) + fy(x)·y, coefficients ascending in x.
    Weier { fx: Vec<Scalar>, fy: Vec<Scalar> },
}

/// A space of sections of L^twist(−D) for the model's embedding bundle L
/// and the recorded divisor D, with a concrete ambient basis.
#[derive(Debug, Clone)]
pub struct SectionSpace {
    pub model: CurveModel,
    pub field: FieldSpec,
    pub twist: usize,
    pub basis: Vec<SectionElt>,
    /// Imposed vanishing conditions with multiplicities; repeats are only
    /// meaningful on ℙ¹ models.
    pub divisor: Vec<(CurvePoint, usize)>,
}

/// The full section space of the embedding: coordinates of the model.
pub fn canonical_sections(model: &CurveModel, field: FieldSpec) -> Result<SectionSpace> {
    SectionSpace::canonical(model, field, 1)
}

impl SectionSpace {
    /// The untrimmed space of the k-th twist, in its canonical basis.
    pub fn canonical(model: &CurveModel, field: FieldSpec, twist: usize) -> Result<SectionSpace> {
        model.validate(field)?;
        assert!(twist >= 1);
        let basis = match model {
            CurveModel::RationalNormal { degree } => {
                let d = degree * twist;
                (0..=d)
                    .map(|i| SectionElt::Form(BinaryForm::monomial(field, d, i)))
                    .collect()
            }
            CurveModel::EllipticSmooth { degree, .. } => {
                let n = degree * twist;
                // pole orders 0, 2, 3, ..., n at P∞; even order 2i ↦ xⁱ,
                // odd order 2i+3 ↦ xⁱy
                let mut basis = Vec::with_capacity(n);
                for o in std::iter::once(0).chain(2..=n) {
                    basis.push(weier_unit(field, o));
                }
                basis
            }
            CurveModel::QuarticNodal | CurveModel::QuarticCuspidal => {
                if twist == 1 {
                    model
                        .quartic_parameterization(field)
                        .into_iter()
                        .map(SectionElt::Form)
                        .collect()
                } else {
                    let d = 4 * twist;
                    (0..=d)
                        .map(|i| SectionElt::Form(BinaryForm::monomial(field, d, i)))
                        .collect()
                }
            }
        };
        Ok(SectionSpace {
            model: model.clone(),
            field,
            twist,
            basis,
            divisor: Vec::new(),
        })
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Dimension of the canonical target space products of `self` live in.
    pub fn ambient_dim_of_twist(&self, twist: usize) -> usize {
        match &self.model {
            CurveModel::RationalNormal { degree } => degree * twist + 1,
            CurveModel::EllipticSmooth { degree, .. } => degree * twist,
            CurveModel::QuarticNodal | CurveModel::QuarticCuspidal => 4 * twist + 1,
        }
    }

    /// Multiplicity the divisor already carries at `pt`.
    pub fn multiplicity_at(&self, pt: &CurvePoint) -> usize {
        self.divisor
            .iter()
            .find(|(q, _)| q == pt)
            .map(|(_, m)| *m)
            .unwrap_or(0)
    }

    /// Values of the evaluation functional at `pt` on each basis element.
    ///
    /// On ℙ¹ models the functional is multiplicity-aware: if the divisor
    /// already imposes vanishing to order m at `pt`, each section is
    /// deflated m times before evaluating, so the functional cuts out
    /// vanishing to order m+1. On Weierstrass models `pt` must not be in
    /// the divisor.
    pub fn eval_functional(&self, pt: &CurvePoint) -> Result<Vec<Scalar>> {
        match (&self.model, pt) {
            (m, CurvePoint::Param { s, t }) if m.is_p1_parameterized() => {
                if m.excluded_params(self.field).iter().any(|(a, b)| a == s && b == t) {
                    return Err(Error::SingularPoint(format!(
                        "parameter {pt} maps to the singular point of {m}"
                    )));
                }
                let mult = self.multiplicity_at(pt);
                let mut vals = Vec::with_capacity(self.dim());
                for elt in &self.basis {
                    let SectionElt::Form(form) = elt else { unreachable!() };
                    let mut g = form.clone();
                    for _ in 0..mult {
                        g = g.deflate(&(s.clone(), t.clone()));
                    }
                    vals.push(g.eval(s, t));
                }
                Ok(vals)
            }
            (CurveModel::EllipticSmooth { a, b, .. }, CurvePoint::Affine { x, y }) => {
                let lhs = y.mul(y);
                let rhs = x.pow(3).add(&a.mul(x)).add(b);
                if lhs != rhs {
                    return Err(Error::PointNotOnCurve(format!(
                        "({x},{y}) does not satisfy y^2 = x^3 + ({a})x + ({b})"
                    )));
                }
                Ok(self
                    .basis
                    .iter()
                    .map(|elt| {
                        let SectionElt::Weier { fx, fy } = elt else { unreachable!() };
                        poly_eval(self.field, fx, x).add(&poly_eval(self.field, fy, x).mul(y))
                    })
                    .collect())
            }
            (CurveModel::EllipticSmooth { .. }, CurvePoint::Infinity) => {
                // trivialized value at P∞ = coefficient of the maximal pole
                // order in the canonical twist basis
                Ok(self
                    .basis
                    .iter()
                    .map(|elt| {
                        let coords = section_coords(&self.model, self.field, self.twist, elt);
                        coords.last().unwrap().clone()
                    })
                    .collect())
            }
            _ => Err(Error::WrongModel),
        }
    }

    /// The subspace of sections vanishing at `pt` (to one order higher than
    /// the divisor already imposes, on ℙ¹ models).
    pub fn vanishing_subspace(&self, pt: &CurvePoint) -> Result<SectionSpace> {
        Ok(self.project_at(pt)?.0)
    }

    /// The one-point subspace together with the dim × (dim − 1) inclusion
    /// matrix expressing its basis in the coordinates of `self`. Anything
    /// that needs both must take them from a single call; the column
    /// scaling is deterministic but tied to the basis built alongside it.
    pub(crate) fn project_at(&self, pt: &CurvePoint) -> Result<(SectionSpace, Matrix)> {
        if self.dim() <= 3 {
            return Err(Error::DimensionFloor { dim: self.dim() });
        }
        if !self.model.is_p1_parameterized() && self.multiplicity_at(pt) > 0 {
            return Err(Error::Unsupported(
                "repeated vanishing at one point is only supported on P^1-parameterized models"
                    .into(),
            ));
        }
        let (ker, basis) = inclusion_kernel(self, pt)?;
        let mut divisor = self.divisor.clone();
        match divisor.iter_mut().find(|(q, _)| q == pt) {
            Some(entry) => entry.1 += 1,
            None => divisor.push((pt.clone(), 1)),
        }
        Ok((
            SectionSpace {
                model: self.model.clone(),
                field: self.field,
                twist: self.twist,
                basis,
                divisor,
            },
            ker,
        ))
    }
}

/// The inclusion of the sections vanishing at `pt`: a dim × (dim − 1)
/// matrix whose columns are a kernel basis of the evaluation functional,
/// scaled to primitive integer form over ℚ, paired with the subspace
/// basis the columns describe. Everything that maps between a space and
/// its one-point subspace must use this single construction, or the
/// coordinates of the two spaces fall out of step.
fn inclusion_kernel(space: &SectionSpace, pt: &CurvePoint) -> Result<(Matrix, Vec<SectionElt>)> {
    let row = space.eval_functional(pt)?;
    let ker = Matrix::from_rows(space.field, vec![row]).kernel_basis();
    assert_eq!(
        ker.cols,
        space.dim() - 1,
        "evaluation functional vanished identically"
    );
    let mut out = Matrix::zeros(space.field, ker.rows, ker.cols);
    let mut basis = Vec::with_capacity(ker.cols);
    for j in 0..ker.cols {
        let col: Vec<Scalar> = (0..ker.rows).map(|i| ker.at(i, j).clone()).collect();
        let col = crate::field::primitive_part(&col);
        basis.push(combine(&space.model, space.field, &space.basis, &col));
        for (i, s) in col.into_iter().enumerate() {
            out.set(i, j, s);
        }
    }
    Ok((out, basis))
}

/// Linear combination Σ cᵢ·basisᵢ in the ambient representation.
pub fn combine(
    model: &CurveModel,
    field: FieldSpec,
    basis: &[SectionElt],
    coeffs: &[Scalar],
) -> SectionElt {
    assert_eq!(basis.len(), coeffs.len());
    if model.is_p1_parameterized() {
        let deg = match &basis[0] {
            SectionElt::Form(f) => f.degree(),
            _ => unreachable!(),
        };
        let mut acc = BinaryForm::zero(field, deg);
        for (elt, c) in basis.iter().zip(coeffs) {
            let SectionElt::Form(f) = elt else { unreachable!() };
            acc = acc.add(&f.scale(c));
        }
        SectionElt::Form(acc)
    } else {
        let mut fx = vec![];
        let mut fy = vec![];
        for (elt, c) in basis.iter().zip(coeffs) {
            let SectionElt::Weier { fx: ax, fy: ay } = elt else { unreachable!() };
            fx = poly_add(field, &fx, &poly_scale(ax, c));
            fy = poly_add(field, &fy, &poly_scale(ay, c));
        }
        SectionElt::Weier { fx, fy }
    }
}

/// Product of two sections, in the ambient representation of the summed
/// twist. Weierstrass products reduce y² to x³ + ax + b.
pub fn section_product(model: &CurveModel, a: &SectionElt, b: &SectionElt) -> SectionElt {
    match (model, a, b) {
        (CurveModel::EllipticSmooth { a: ca, b: cb, .. },
         SectionElt::Weier { fx: a1, fy: b1 },
         SectionElt::Weier { fx: a2, fy: b2 }) => {
            let field = ca.field();
            // (A₁ + B₁y)(A₂ + B₂y) = A₁A₂ + B₁B₂(x³+ax+b) + (A₁B₂+B₁A₂)y
            let wf = vec![cb.clone(), ca.clone(), field.zero(), field.one()];
            let fx = poly_add(
                field,
                &poly_mul(field, a1, a2),
                &poly_mul(field, &poly_mul(field, b1, b2), &wf),
            );
            let fy = poly_add(
                field,
                &poly_mul(field, a1, b2),
                &poly_mul(field, b1, a2),
            );
            SectionElt::Weier { fx, fy }
        }
        (_, SectionElt::Form(f), SectionElt::Form(g)) => SectionElt::Form(f.mul(g)),
        _ => panic!("section_product: representation does not match model"),
    }
}

/// Coordinates of a section in the canonical basis of its twist space.
pub fn section_coords(
    model: &CurveModel,
    field: FieldSpec,
    twist: usize,
    elt: &SectionElt,
) -> Vec<Scalar> {
    match (model, elt) {
        (CurveModel::EllipticSmooth { degree, .. }, SectionElt::Weier { fx, fy }) => {
            let n = degree * twist;
            let mut out = Vec::with_capacity(n);
            for o in std::iter::once(0).chain(2..=n) {
                let c = if o % 2 == 0 {
                    fx.get(o / 2).cloned()
                } else {
                    fy.get((o - 3) / 2).cloned()
                };
                out.push(c.unwrap_or_else(|| field.zero()));
            }
            // anything beyond pole order n would be a representation bug
            assert!(fx.iter().skip(n / 2 + 1).all(|c| c.is_zero()));
            assert!(fy.len() <= 1 || fy.iter().skip((n.saturating_sub(3)) / 2 + 1).all(|c| c.is_zero()));
            out
        }
        (_, SectionElt::Form(f)) => {
            assert_eq!(f.degree(), model.degree() * twist);
            f.coeffs.clone()
        }
        _ => panic!("section_coords: representation does not match model"),
    }
}

/// Raw evaluation of one section at a point. Weierstrass sections have
/// poles at infinity, so evaluation there goes through
/// `SectionSpace::eval_functional`, which knows the trivialization.
pub fn eval_section(model: &CurveModel, elt: &SectionElt, pt: &CurvePoint) -> Result<Scalar> {
    match (elt, pt) {
        (SectionElt::Form(f), CurvePoint::Param { s, t }) => {
            let _ = model;
            Ok(f.eval(s, t))
        }
        (SectionElt::Weier { fx, fy }, CurvePoint::Affine { x, y }) => {
            let field = x.field();
            Ok(poly_eval(field, fx, x).add(&poly_eval(field, fy, x).mul(y)))
        }
        (SectionElt::Weier { .. }, CurvePoint::Infinity) => Err(Error::PointAtInfinity),
        _ => Err(Error::WrongModel),
    }
}

fn weier_unit(field: FieldSpec, pole_order: usize) -> SectionElt {
    let mut fx = vec![];
    let mut fy = vec![];
    if pole_order % 2 == 0 {
        fx = vec![field.zero(); pole_order / 2 + 1];
        *fx.last_mut().unwrap() = field.one();
    } else {
        assert!(pole_order >= 3);
        fy = vec![field.zero(); (pole_order - 3) / 2 + 1];
        *fy.last_mut().unwrap() = field.one();
    }
    SectionElt::Weier { fx, fy }
}

fn poly_add(field: FieldSpec, a: &[Scalar], b: &[Scalar]) -> Vec<Scalar> {
    let n = a.len().max(b.len());
    let z = field.zero();
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        out.push(a.get(i).unwrap_or(&z).add(b.get(i).unwrap_or(&z)));
    }
    while out.len() > 0 && out.last().unwrap().is_zero() {
        out.pop();
    }
    out
}

fn poly_scale(a: &[Scalar], c: &Scalar) -> Vec<Scalar> {
    a.iter().map(|x| x.mul(c)).collect()
}

fn poly_mul(field: FieldSpec, a: &[Scalar], b: &[Scalar]) -> Vec<Scalar> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![field.zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            if !y.is_zero() {
                out[i + j] = out[i + j].add(&x.mul(y));
            }
        }
    }
    while out.len() > 0 && out.last().unwrap().is_zero() {
        out.pop();
    }
    out
}

fn poly_eval(field: FieldSpec, a: &[Scalar], x: &Scalar) -> Scalar {
    let mut acc = field.zero();
    for c in a.iter().rev() {
        acc = acc.mul(x).add(c);
    }
    acc
}

/// Deterministically sampled points of a model.
#[derive(Debug, Clone)]
pub struct PointSample {
    pub points: Vec<CurvePoint>,
    /// True when the model's supply ran out before `count` points.
    pub shortfall: bool,
}

/// Sample `count` points in the canonical enumeration order:
/// ℙ¹ models walk (1:0), (0:1), (1:1), (1:2), … (skipping parameters that
/// map to a singular point); Weierstrass models walk affine points by
/// ascending x, square roots in ascending order. Over a finite supply the
/// seed rotates the enumeration; over an unbounded one it offsets it.
pub fn sample_points(
    model: &CurveModel,
    field: FieldSpec,
    count: usize,
    seed: u64,
) -> Result<PointSample> {
    model.validate(field)?;
    match (model, field) {
        (m, FieldSpec::Prime(p)) if m.is_p1_parameterized() => {
            let excluded = m.excluded_params(field);
            let mut supply = Vec::with_capacity(p as usize + 1);
            for (s, t) in p1_enumeration(field).take(p as usize + 1) {
                if !excluded.iter().any(|(a, b)| *a == s && *b == t) {
                    supply.push(CurvePoint::Param { s, t });
                }
            }
            Ok(rotated(supply, count, seed))
        }
        (m, FieldSpec::Rationals) if m.is_p1_parameterized() => {
            let excluded = m.excluded_params(field);
            let points = p1_enumeration(field)
                .filter(|(s, t)| !excluded.iter().any(|(a, b)| a == s && b == t))
                .skip(seed as usize)
                .take(count)
                .map(|(s, t)| CurvePoint::Param { s, t })
                .collect();
            Ok(PointSample { points, shortfall: false })
        }
        (CurveModel::EllipticSmooth { a, b, .. }, FieldSpec::Prime(p)) => {
            let mut supply = Vec::new();
            for xv in 0..p {
                let x = field.from_i64(xv as i64);
                let r = x.pow(3).add(&a.mul(&x)).add(b);
                for y in r.fp_sqrt() {
                    supply.push(CurvePoint::Affine { x: x.clone(), y });
                }
            }
            Ok(rotated(supply, count, seed))
        }
        (CurveModel::EllipticSmooth { a, b, .. }, FieldSpec::Rationals) => {
            // integer x scan; certificates over ℚ only need small points,
            // and callers can pass explicit points when they don't
            const X_BOUND: i64 = 255;
            let mut supply = Vec::new();
            for xv in 0..=X_BOUND {
                let x = field.from_i64(xv);
                let r = x.pow(3).add(&a.mul(&x)).add(b);
                if r.is_zero() {
                    supply.push(CurvePoint::Affine { x, y: field.zero() });
                } else if let Some(y) = r.q_sqrt() {
                    supply.push(CurvePoint::Affine { x: x.clone(), y: y.neg() });
                    supply.push(CurvePoint::Affine { x, y });
                }
            }
            Ok(rotated(supply, count, seed))
        }
        _ => unreachable!(),
    }
}

/// (1:0), (0:1), (1:1), (1:2), … — over 𝔽ₚ the (1:c) tail wraps at p.
fn p1_enumeration(field: FieldSpec) -> impl Iterator<Item = P1Point> {
    let head = vec![(field.one(), field.zero()), (field.zero(), field.one())];
    head.into_iter()
        .chain((1i64..).map(move |c| (field.one(), field.from_i64(c))))
}

fn rotated(supply: Vec<CurvePoint>, count: usize, seed: u64) -> PointSample {
    if supply.is_empty() {
        return PointSample { points: vec![], shortfall: count > 0 };
    }
    let n = supply.len();
    let start = (seed as usize) % n;
    let points: Vec<CurvePoint> = supply
        .iter()
        .cycle()
        .skip(start)
        .take(n.min(count))
        .cloned()
        .collect();
    PointSample { shortfall: count > n, points }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fp(p: u64) -> FieldSpec {
        FieldSpec::prime(p).unwrap()
    }

    #[test]
    fn parse_and_display_points() {
        let q = FieldSpec::Rationals;
        let p = CurvePoint::parse("(2:4)", q).unwrap();
        assert_eq!(p.to_string(), "(1:2)");
        let p = CurvePoint::parse("(0:5)", q).unwrap();
        assert_eq!(p.to_string(), "(0:1)");
        let p = CurvePoint::parse("(3,-1/2)", q).unwrap();
        assert_eq!(p.to_string(), "(3,-1/2)");
        assert_eq!(CurvePoint::parse("inf", q).unwrap(), CurvePoint::Infinity);
        assert!(CurvePoint::parse("(0:0)", q).is_err());
        assert!(CurvePoint::parse("nope", q).is_err());
    }

    #[test]
    fn parse_and_display_models() {
        let q = FieldSpec::Rationals;
        let m = CurveModel::parse("rnc:4", q).unwrap();
        assert_eq!(m.embedding_dim(), 5);
        assert_eq!(m.to_string(), "rnc:4");
        let m = CurveModel::parse("elliptic:a=0,b=1,d=5", q).unwrap();
        assert_eq!(m.embedding_dim(), 5);
        assert_eq!(m.to_string(), "elliptic:a=0,b=1,d=5");
        assert!(CurveModel::parse("rnc:1", q).is_err());
        // discriminant zero: y² = x³ - 3x + 2 = (x-1)²(x+2)
        assert!(CurveModel::parse("elliptic:a=-3,b=2,d=5", q).is_err());
        assert!(CurveModel::parse("elliptic:a=1,b=1,d=5", fp(3)).is_err());
        assert_eq!(CurveModel::parse("cusp4", q).unwrap().embedding_dim(), 4);
    }

    #[test]
    fn canonical_dims() {
        let q = FieldSpec::Rationals;
        let rnc = CurveModel::parse("rnc:4", q).unwrap();
        assert_eq!(canonical_sections(&rnc, q).unwrap().dim(), 5);
        assert_eq!(SectionSpace::canonical(&rnc, q, 2).unwrap().dim(), 9);

        let ell = CurveModel::parse("elliptic:a=0,b=1,d=5", q).unwrap();
        let s = canonical_sections(&ell, q).unwrap();
        assert_eq!(s.dim(), 5);
        assert_eq!(SectionSpace::canonical(&ell, q, 2).unwrap().dim(), 10);

        let cusp = CurveModel::parse("cusp4", q).unwrap();
        assert_eq!(canonical_sections(&cusp, q).unwrap().dim(), 4);
        assert_eq!(SectionSpace::canonical(&cusp, q, 2).unwrap().dim(), 9);
    }

    #[test]
    fn weier_products_reduce_y_squared() {
        let q = FieldSpec::Rationals;
        let ell = CurveModel::parse("elliptic:a=0,b=1,d=5", q).unwrap();
        let s = canonical_sections(&ell, q).unwrap();
        // basis order: 1, x, y, x², xy — pole orders 0,2,3,4,5
        let y = &s.basis[2];
        let y2 = section_product(&ell, y, y);
        // y² = x³ + 1
        assert_eq!(
            y2,
            SectionElt::Weier {
                fx: vec![q.one(), q.zero(), q.zero(), q.one()],
                fy: vec![],
            }
        );
        let coords = section_coords(&ell, q, 2, &y2);
        assert_eq!(coords.len(), 10);
        // 1 has pole order 0 (index 0), x³ pole order 6 (index 5)
        assert!(coords[0].is_one());
        assert!(coords[5].is_one());
        assert_eq!(coords.iter().filter(|c| !c.is_zero()).count(), 2);
    }

    #[test]
    fn eval_functional_and_infinity() {
        let f13 = fp(13);
        let ell = CurveModel::parse("elliptic:a=0,b=1,d=5", f13).unwrap();
        let s = canonical_sections(&ell, f13).unwrap();
        let pt = CurvePoint::parse("(2,3)", f13).unwrap();
        let vals = s.eval_functional(&pt).unwrap();
        // 1, x, y, x², xy at (2,3) = 1, 2, 3, 4, 6
        let expect: Vec<Scalar> = [1, 2, 3, 4, 6].iter().map(|&v| f13.from_i64(v)).collect();
        assert_eq!(vals, expect);

        let vals = s.eval_functional(&CurvePoint::Infinity).unwrap();
        assert!(vals[..4].iter().all(|v| v.is_zero()));
        assert!(vals[4].is_one());

        let off = CurvePoint::parse("(2,4)", f13).unwrap();
        assert!(matches!(
            s.eval_functional(&off),
            Err(Error::PointNotOnCurve(_))
        ));
    }

    #[test]
    fn vanishing_drops_dimension_by_one() {
        let q = FieldSpec::Rationals;
        let rnc = CurveModel::parse("rnc:5", q).unwrap();
        let s = canonical_sections(&rnc, q).unwrap();
        let pt = CurvePoint::parse("(1:2)", q).unwrap();
        let v = s.vanishing_subspace(&pt).unwrap();
        assert_eq!(v.dim(), 5);
        assert_eq!(v.multiplicity_at(&pt), 1);
        for elt in &v.basis {
            assert!(eval_section(&rnc, elt, &pt).unwrap().is_zero());
        }
        // imposing the same point again forces one more vanishing order
        let vv = v.vanishing_subspace(&pt).unwrap();
        assert_eq!(vv.dim(), 4);
        for elt in &vv.basis {
            let SectionElt::Form(f) = elt else { unreachable!() };
            assert!(f.order_at(&(q.one(), q.from_i64(2))) >= 2);
        }
        // floor: dim 3 spaces cannot shrink further
        let v3 = vv.vanishing_subspace(&CurvePoint::parse("(1:7)", q).unwrap()).unwrap();
        assert_eq!(v3.dim(), 3);
        assert!(matches!(
            v3.vanishing_subspace(&CurvePoint::parse("(1:8)", q).unwrap()),
            Err(Error::DimensionFloor { dim: 3 })
        ));
    }

    #[test]
    fn weierstrass_rejects_reuse_but_takes_infinity() {
        let f13 = fp(13);
        let ell = CurveModel::parse("elliptic:a=0,b=1,d=6", f13).unwrap();
        let s = canonical_sections(&ell, f13).unwrap();
        let pt = CurvePoint::parse("(0,1)", f13).unwrap();
        let v = s.vanishing_subspace(&pt).unwrap();
        assert_eq!(v.dim(), 5);
        assert!(matches!(v.vanishing_subspace(&pt), Err(Error::Unsupported(_))));
        let vi = v.vanishing_subspace(&CurvePoint::Infinity).unwrap();
        assert_eq!(vi.dim(), 4);
    }

    #[test]
    fn singular_param_rejected() {
        let q = FieldSpec::Rationals;
        let node = CurveModel::parse("nodal4", q).unwrap();
        let s = canonical_sections(&node, q).unwrap();
        for bad in ["(1:0)", "(1:-1)"] {
            let pt = CurvePoint::parse(bad, q).unwrap();
            assert!(matches!(
                s.vanishing_subspace(&pt),
                Err(Error::SingularPoint(_))
            ));
        }
        let ok = CurvePoint::parse("(1:1)", q).unwrap();
        assert_eq!(s.vanishing_subspace(&ok).unwrap().dim(), 3);
    }

    #[test]
    fn sampling_enumeration_and_seeds() {
        let f7 = fp(7);
        let rnc = CurveModel::parse("rnc:3", f7).unwrap();
        let s = sample_points(&rnc, f7, 4, 0).unwrap();
        assert!(!s.shortfall);
        let strs: Vec<String> = s.points.iter().map(|p| p.to_string()).collect();
        assert_eq!(strs, ["(1:0)", "(0:1)", "(1:1)", "(1:2)"]);

        // a seed rotates the finite supply (8 points of P¹(F₇))
        let s = sample_points(&rnc, f7, 3, 7).unwrap();
        let strs: Vec<String> = s.points.iter().map(|p| p.to_string()).collect();
        assert_eq!(strs, ["(1:6)", "(1:0)", "(0:1)"]);
        assert!(sample_points(&rnc, f7, 9, 0).unwrap().shortfall);

        // over Q the seed is an offset into the unbounded enumeration
        let q = FieldSpec::Rationals;
        let rncq = CurveModel::parse("rnc:3", q).unwrap();
        let s = sample_points(&rncq, q, 2, 3).unwrap();
        let strs: Vec<String> = s.points.iter().map(|p| p.to_string()).collect();
        assert_eq!(strs, ["(1:2)", "(1:3)"]);

        // nodal quartic skips both preimages of the node
        let node = CurveModel::parse("nodal4", f7).unwrap();
        let s = sample_points(&node, f7, 8, 0).unwrap();
        assert!(s.shortfall);
        assert_eq!(s.points.len(), 6);
        assert!(!s.points.iter().any(|p| p.to_string() == "(1:0)"));
        assert!(!s.points.iter().any(|p| p.to_string() == "(1:6)"));
    }

    #[test]
    fn sampling_weierstrass_points() {
        let f13 = fp(13);
        let ell = CurveModel::parse("elliptic:a=0,b=1,d=5", f13).unwrap();
        let s = sample_points(&ell, f13, 100, 0).unwrap();
        assert!(s.shortfall);
        let strs: Vec<String> = s.points.iter().map(|p| p.to_string()).collect();
        assert_eq!(
            strs,
            [
                "(0,1)", "(0,12)", "(2,3)", "(2,10)", "(4,0)", "(5,3)", "(5,10)",
                "(6,3)", "(6,10)", "(10,0)", "(12,0)"
            ]
        );
        // every sampled point satisfies the equation
        let space = canonical_sections(&ell, f13).unwrap();
        for p in &s.points {
            space.eval_functional(p).unwrap();
        }

        let ellq = CurveModel::parse("elliptic:a=0,b=1,d=5", FieldSpec::Rationals).unwrap();
        let s = sample_points(&ellq, FieldSpec::Rationals, 4, 0).unwrap();
        let strs: Vec<String> = s.points.iter().map(|p| p.to_string()).collect();
        assert_eq!(strs, ["(0,-1)", "(0,1)", "(2,-3)", "(2,3)"]);
    }
}
