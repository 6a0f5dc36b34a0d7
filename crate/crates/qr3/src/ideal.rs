//! The degree-2 and degree-3 graded pieces of a curve's homogeneous ideal,
//! computed exactly as kernels of multiplication maps on section products.
//! Interpolation at sampled points is never used: small fields cannot supply
//! enough distinct points, while the kernel formulation is exact.

use std::cell::OnceCell;
use std::collections::HashMap;

use crate::curve::{section_coords, section_product, CurveModel, SectionSpace};
use crate::error::{Error, Result};
use crate::field::{FieldSpec, Scalar};
use crate::matrix::{Matrix, Span};

/// Upper-triangle index pairs (i ≤ j) in row-major order: the coordinate
/// convention for flattened quadrics.
pub fn sym_pairs(m: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::with_capacity(m * (m + 1) / 2);
    for i in 0..m {
        for j in i..m {
            out.push((i, j));
        }
    }
    out
}

/// Index triples (i ≤ j ≤ k) in lexicographic order: the coordinate
/// convention for cubics.
pub fn sym_triples(m: usize) -> Vec<(usize, usize, usize)> {
    let mut out = Vec::new();
    for i in 0..m {
        for j in i..m {
            for k in j..m {
                out.push((i, j, k));
            }
        }
    }
    out
}

/// A quadric on ℙ^(m−1) as a symmetric Gram matrix, with its rank computed
/// on demand and cached.
#[derive(Debug, Clone)]
pub struct QuadraticForm {
    pub gram: Matrix,
    rank: OnceCell<usize>,
}

impl PartialEq for QuadraticForm {
    fn eq(&self, other: &Self) -> bool {
        self.gram == other.gram
    }
}

impl QuadraticForm {
    pub fn new(gram: Matrix) -> Result<QuadraticForm> {
        if gram.rows != gram.cols || !gram.is_symmetric() {
            return Err(Error::NonSymmetric);
        }
        Ok(QuadraticForm { gram, rank: OnceCell::new() })
    }

    /// Number of variables.
    pub fn dim(&self) -> usize {
        self.gram.rows
    }

    pub fn field(&self) -> FieldSpec {
        self.gram.field
    }

    pub fn is_zero(&self) -> bool {
        (0..self.dim()).all(|i| (0..self.dim()).all(|j| self.gram.at(i, j).is_zero()))
    }

    /// Monomial coefficients (xᵢxⱼ for i ≤ j): diagonal Gram entries as-is,
    /// off-diagonal entries doubled.
    pub fn flatten(&self) -> Vec<Scalar> {
        let m = self.dim();
        let two = self.field().from_i64(2);
        sym_pairs(m)
            .into_iter()
            .map(|(i, j)| {
                if i == j {
                    self.gram.at(i, i).clone()
                } else {
                    two.mul(self.gram.at(i, j))
                }
            })
            .collect()
    }

    /// Inverse of `flatten`: off-diagonal coefficients are halved into the
    /// Gram matrix (characteristic ≠ 2 throughout).
    pub fn from_flat(field: FieldSpec, m: usize, coeffs: &[Scalar]) -> QuadraticForm {
        assert_eq!(coeffs.len(), m * (m + 1) / 2);
        let half = field.half();
        let mut gram = Matrix::zeros(field, m, m);
        for ((i, j), c) in sym_pairs(m).into_iter().zip(coeffs) {
            if i == j {
                gram.set(i, i, c.clone());
            } else {
                let h = c.mul(&half);
                gram.set(i, j, h.clone());
                gram.set(j, i, h);
            }
        }
        QuadraticForm { gram, rank: OnceCell::new() }
    }

    /// Rank of the Gram matrix, via congruence diagonalization; cached.
    pub fn rank(&self) -> usize {
        *self.rank.get_or_init(|| {
            let (r, _) = self.gram.symmetric_rank().expect("Gram matrices are symmetric");
            r
        })
    }

    /// Seed the cache when the rank is known by construction (congruence
    /// with a full-column-rank matrix preserves it).
    pub fn with_known_rank(gram: Matrix, rank: usize) -> Result<QuadraticForm> {
        let q = QuadraticForm::new(gram)?;
        let _ = q.rank.set(rank);
        Ok(q)
    }

    /// The cached rank, if one has been computed or seeded.
    pub fn cached_rank(&self) -> Option<usize> {
        self.rank.get().copied()
    }

    /// Value vᵀ·G·v at a coordinate vector.
    pub fn eval(&self, v: &[Scalar]) -> Scalar {
        assert_eq!(v.len(), self.dim());
        let f = self.field();
        let mut acc = f.zero();
        for i in 0..self.dim() {
            if v[i].is_zero() {
                continue;
            }
            for j in 0..self.dim() {
                if !v[j].is_zero() {
                    acc = acc.add(&self.gram.at(i, j).mul(&v[i]).mul(&v[j]));
                }
            }
        }
        acc
    }

    /// c₁·q₁ + c₂·q₂ on the same variables.
    pub fn pencil_member(c1: &Scalar, q1: &QuadraticForm, c2: &Scalar, q2: &QuadraticForm) -> QuadraticForm {
        assert_eq!(q1.dim(), q2.dim());
        let m = q1.dim();
        let mut gram = Matrix::zeros(q1.field(), m, m);
        for i in 0..m {
            for j in 0..m {
                gram.set(i, j, c1.mul(q1.gram.at(i, j)).add(&c2.mul(q2.gram.at(i, j))));
            }
        }
        QuadraticForm { gram, rank: OnceCell::new() }
    }
}

/// A space of quadrics on a fixed ambient ℙ^(m−1) with a distinguished
/// basis; the output type of `quadric_space`.
#[derive(Debug, Clone)]
pub struct QuadricSpace {
    /// What the space was computed from, for reports.
    pub source: String,
    pub field: FieldSpec,
    pub ambient_dim: usize,
    pub basis: Vec<QuadraticForm>,
}

impl QuadricSpace {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn ranks(&self) -> Vec<usize> {
        self.basis.iter().map(|q| q.rank()).collect()
    }

    /// Stable fingerprint for golden tests: dimension plus the rank list.
    pub fn checksum(&self) -> String {
        let ranks: Vec<String> = self.ranks().iter().map(|r| r.to_string()).collect();
        format!("dim={};ranks={}", self.dim(), ranks.join(","))
    }
}

/// The matrix of the multiplication map Sym²V → H⁰(L²): row (i, j) holds
/// the coordinates of the product sᵢ·sⱼ in the canonical degree-2 basis.
pub fn sym2_image_matrix(space: &SectionSpace) -> Matrix {
    let m = space.dim();
    let target_twist = 2 * space.twist;
    let mut rows = Vec::with_capacity(m * (m + 1) / 2);
    for (i, j) in sym_pairs(m) {
        let prod = section_product(&space.model, &space.basis[i], &space.basis[j]);
        rows.push(section_coords(&space.model, space.field, target_twist, &prod));
    }
    Matrix::from_rows(space.field, rows)
}

/// I(C)₂ for the embedding the space describes: the kernel of the
/// multiplication map, with the canonical kernel basis.
pub fn quadric_space(space: &SectionSpace) -> Result<QuadricSpace> {
    let m = space.dim();
    let a = sym2_image_matrix(space);
    let ker = a.transpose().kernel_basis();
    let mut basis = Vec::with_capacity(ker.cols);
    for c in 0..ker.cols {
        let coeffs: Vec<Scalar> = (0..ker.rows).map(|r| ker.at(r, c).clone()).collect();
        basis.push(QuadraticForm::from_flat(space.field, m, &coeffs));
    }
    Ok(QuadricSpace {
        source: space_source(space),
        field: space.field,
        ambient_dim: m,
        basis,
    })
}

fn space_source(space: &SectionSpace) -> String {
    let mut s = space.model.to_string();
    for (pt, mult) in &space.divisor {
        if *mult == 1 {
            s.push_str(&format!(" - {pt}"));
        } else {
            s.push_str(&format!(" - {mult}*{pt}"));
        }
    }
    s
}

/// True iff `q` lies in the span of the space's basis.
pub fn membership(q: &QuadraticForm, qs: &QuadricSpace) -> Result<bool> {
    if q.dim() != qs.ambient_dim {
        return Err(Error::DimensionMismatch { expected: qs.ambient_dim, got: q.dim() });
    }
    let mut span = Span::new(qs.field, qs.ambient_dim * (qs.ambient_dim + 1) / 2);
    for b in &qs.basis {
        span.insert(&b.flatten());
    }
    Ok(span.contains(&q.flatten()))
}

/// True iff `q` vanishes identically on the curve the space embeds, checked
/// exactly through the multiplication map (no sampling).
pub fn vanishes_on_curve(space: &SectionSpace, q: &QuadraticForm) -> bool {
    vanishes_via_image(&sym2_image_matrix(space), q)
}

/// Same check against a precomputed `sym2_image_matrix`.
pub fn vanishes_via_image(image: &Matrix, q: &QuadraticForm) -> bool {
    let flat = q.flatten();
    assert_eq!(flat.len(), image.rows);
    for c in 0..image.cols {
        let mut acc = image.field.zero();
        for (r, coeff) in flat.iter().enumerate() {
            if !coeff.is_zero() {
                acc = acc.add(&coeff.mul(image.at(r, c)));
            }
        }
        if !acc.is_zero() {
            return false;
        }
    }
    true
}

/// dim I(C)₃, from the rank of the cubic multiplication map Sym³V → H⁰(L³).
pub fn cubic_kernel_dim(space: &SectionSpace) -> usize {
    let m = space.dim();
    let target_twist = 3 * space.twist;
    let mut rows = Vec::new();
    for (i, j, k) in sym_triples(m) {
        let prod = section_product(
            &space.model,
            &section_product(&space.model, &space.basis[i], &space.basis[j]),
            &space.basis[k],
        );
        rows.push(section_coords(&space.model, space.field, target_twist, &prod));
    }
    let n_triples = rows.len();
    n_triples - Matrix::from_rows(space.field, rows).rank()
}

#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct Degree3Report {
    pub dim_i3: usize,
    pub span_dim: usize,
    pub deficit: usize,
    pub generated: bool,
}

/// Does V·I₂ exhaust I₃? Compares dim I₃ against the span of xₗ·Q for all
/// coordinates xₗ and all given quadrics Q.
pub fn generated_in_degree_3(
    space: &SectionSpace,
    quadrics: &[QuadraticForm],
) -> Result<Degree3Report> {
    let m = space.dim();
    for q in quadrics {
        if q.dim() != m {
            return Err(Error::DimensionMismatch { expected: m, got: q.dim() });
        }
    }
    let dim_i3 = cubic_kernel_dim(space);
    let triples = sym_triples(m);
    let pos: HashMap<(usize, usize, usize), usize> =
        triples.iter().copied().zip(0..).collect();
    let mut span = Span::new(space.field, triples.len());
    for q in quadrics {
        let flat = q.flatten();
        for l in 0..m {
            let mut v = vec![space.field.zero(); triples.len()];
            for ((i, j), c) in sym_pairs(m).into_iter().zip(&flat) {
                if c.is_zero() {
                    continue;
                }
                let mut t = [l, i, j];
                t.sort_unstable();
                let idx = pos[&(t[0], t[1], t[2])];
                v[idx] = v[idx].add(c);
            }
            span.insert(&v);
        }
    }
    let span_dim = span.rank();
    assert!(span_dim <= dim_i3, "degree-3 span escaped the cubic kernel");
    Ok(Degree3Report {
        dim_i3,
        span_dim,
        deficit: dim_i3 - span_dim,
        generated: span_dim == dim_i3,
    })
}

/// Closed formula for dim I(C)₂ of a linearly normal embedding with
/// section space of the given dimension: C(m−1, 2) − genus.
pub fn expected_i2_dim(embedding_dim: usize, genus: usize) -> usize {
    let n = embedding_dim - 1;
    n * (n - 1) / 2 - genus
}

/// The explicit rank-3 generator pair for the singular quartic models:
/// x₀² + x₁x₂ together with x₃² + x₀x₂ (cusp) or x₃² + x₀x₂ + x₀x₃ (node).
pub fn singular_quartic_generators(
    model: &CurveModel,
    field: FieldSpec,
) -> Result<Vec<QuadraticForm>> {
    model.validate(field)?;
    // coefficient positions in sym_pairs(4) order:
    // (00) (01) (02) (03) (11) (12) (13) (22) (23) (33)
    let mut q1 = vec![field.zero(); 10];
    q1[0] = field.one(); // x₀²
    q1[5] = field.one(); // x₁x₂
    let mut q2 = vec![field.zero(); 10];
    q2[9] = field.one(); // x₃²
    q2[2] = field.one(); // x₀x₂
    match model {
        CurveModel::QuarticCuspidal => {}
        CurveModel::QuarticNodal => {
            q2[3] = field.one(); // x₀x₃
        }
        _ => return Err(Error::WrongModel),
    }
    Ok(vec![
        QuadraticForm::from_flat(field, 4, &q1),
        QuadraticForm::from_flat(field, 4, &q2),
    ])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::{canonical_sections, sample_points};

    fn fp(p: u64) -> FieldSpec {
        FieldSpec::prime(p).unwrap()
    }

    fn space(spec: &str, field: FieldSpec) -> SectionSpace {
        let model = CurveModel::parse(spec, field).unwrap();
        canonical_sections(&model, field).unwrap()
    }

    #[test]
    fn conic_kernel_is_the_determinantal_quadric() {
        let q = FieldSpec::Rationals;
        let i2 = quadric_space(&space("rnc:2", q)).unwrap();
        assert_eq!(i2.dim(), 1);
        let conic = &i2.basis[0];
        assert_eq!(conic.rank(), 3);
        // the canonical kernel normalization (free coordinate = 1) lands on
        // x₁² − x₀x₂; the line is the classical determinantal conic
        let flat = conic.flatten();
        let expect: Vec<Scalar> = ["0", "0", "-1", "1", "0", "0"]
            .iter()
            .map(|s| Scalar::parse(s, q).unwrap())
            .collect();
        assert_eq!(flat, expect);
    }

    #[test]
    fn dimension_formula_small_cases() {
        let q = FieldSpec::Rationals;
        let f13 = fp(13);
        for d in 2..=6usize {
            let i2 = quadric_space(&space(&format!("rnc:{d}"), q)).unwrap();
            assert_eq!(i2.dim(), d * (d - 1) / 2, "rnc:{d}");
            assert_eq!(i2.dim(), expected_i2_dim(d + 1, 0));
        }
        for d in 4..=6usize {
            let i2 =
                quadric_space(&space(&format!("elliptic:a=0,b=1,d={d}"), f13)).unwrap();
            assert_eq!(i2.dim(), d * (d - 3) / 2, "elliptic d={d}");
            assert_eq!(i2.dim(), expected_i2_dim(d, 1));
        }
        for m in ["nodal4", "cusp4"] {
            let i2 = quadric_space(&space(m, q)).unwrap();
            assert_eq!(i2.dim(), 2, "{m}");
        }
    }

    #[test]
    fn kernel_quadrics_vanish_at_sampled_points() {
        let f7 = fp(7);
        for spec in ["rnc:4", "nodal4", "cusp4"] {
            let s = space(spec, f7);
            let i2 = quadric_space(&s).unwrap();
            let pts = sample_points(&s.model, f7, 8, 0).unwrap().points;
            assert!(!pts.is_empty());
            for p in &pts {
                let v = s.eval_functional(p).unwrap();
                for q in &i2.basis {
                    assert!(q.eval(&v).is_zero(), "{spec}: {q:?} at {p}");
                }
            }
        }
        let f13 = fp(13);
        let s = space("elliptic:a=0,b=1,d=5", f13);
        let i2 = quadric_space(&s).unwrap();
        let mut pts = sample_points(&s.model, f13, 64, 0).unwrap().points;
        pts.push(crate::curve::CurvePoint::Infinity);
        for p in &pts {
            let v = s.eval_functional(p).unwrap();
            for q in &i2.basis {
                assert!(q.eval(&v).is_zero());
            }
        }
    }

    #[test]
    fn no_kernel_quadric_has_rank_below_3() {
        let q = FieldSpec::Rationals;
        let f7 = fp(7);
        for spec in ["rnc:3", "rnc:4", "rnc:5", "nodal4", "cusp4"] {
            for field in [q, f7] {
                let i2 = quadric_space(&space(spec, field)).unwrap();
                assert!(i2.ranks().iter().all(|&r| r >= 3), "{spec}/{field}");
            }
        }
        let i2 = quadric_space(&space("elliptic:a=0,b=1,d=5", fp(13))).unwrap();
        assert!(i2.ranks().iter().all(|&r| r >= 3));
    }

    #[test]
    fn membership_examples() {
        let q = FieldSpec::Rationals;
        let s = space("rnc:3", q);
        let i2 = quadric_space(&s).unwrap();
        assert_eq!(i2.dim(), 3);
        for b in &i2.basis {
            assert!(membership(b, &i2).unwrap());
        }
        let zero = QuadraticForm::new(Matrix::zeros(q, 4, 4)).unwrap();
        assert!(membership(&zero, &i2).unwrap());
        // x₀² restricts to s⁶ ≠ 0
        let mut flat = vec![q.zero(); 10];
        flat[0] = q.one();
        let x0sq = QuadraticForm::from_flat(q, 4, &flat);
        assert!(!membership(&x0sq, &i2).unwrap());
        assert!(!vanishes_on_curve(&s, &x0sq));
        // the hyperbolic quadric x₀x₃ − x₁x₂ is a member, with rank 4
        let mut flat = vec![q.zero(); 10];
        flat[3] = q.one();
        flat[5] = q.from_i64(-1);
        let hyp = QuadraticForm::from_flat(q, 4, &flat);
        assert!(membership(&hyp, &i2).unwrap());
        assert!(vanishes_on_curve(&s, &hyp));
        assert_eq!(hyp.rank(), 4);

        let wrong = QuadraticForm::new(Matrix::zeros(q, 3, 3)).unwrap();
        assert!(matches!(
            membership(&wrong, &i2),
            Err(Error::DimensionMismatch { expected: 4, got: 3 })
        ));
    }

    #[test]
    fn flatten_round_trip() {
        let f7 = fp(7);
        let mut gram = Matrix::zeros(f7, 3, 3);
        gram.set(0, 0, f7.from_i64(2));
        gram.set(0, 1, f7.from_i64(3));
        gram.set(1, 0, f7.from_i64(3));
        gram.set(1, 2, f7.from_i64(5));
        gram.set(2, 1, f7.from_i64(5));
        let q = QuadraticForm::new(gram.clone()).unwrap();
        let back = QuadraticForm::from_flat(f7, 3, &q.flatten());
        assert_eq!(back.gram, gram);
    }

    #[test]
    fn singular_generators_match_the_kernel() {
        let q = FieldSpec::Rationals;
        for spec in ["nodal4", "cusp4"] {
            let s = space(spec, q);
            let model = s.model.clone();
            let gens = singular_quartic_generators(&model, q).unwrap();
            assert_eq!(gens.len(), 2);
            let i2 = quadric_space(&s).unwrap();
            for g in &gens {
                assert_eq!(g.rank(), 3, "{spec}");
                assert!(membership(g, &i2).unwrap(), "{spec}");
            }
            // the two explicit forms span all of I₂
            let mut span = Span::new(q, 10);
            for g in &gens {
                span.insert(&g.flatten());
            }
            assert_eq!(span.rank(), 2);
        }
        let rnc = CurveModel::parse("rnc:4", q).unwrap();
        assert!(matches!(
            singular_quartic_generators(&rnc, q),
            Err(Error::WrongModel)
        ));
    }

    #[test]
    fn degree_3_generation_small_cases() {
        let q = FieldSpec::Rationals;
        let expected_i3 = [(3usize, 10usize), (4, 22), (5, 40)];
        for (d, dim_i3) in expected_i3 {
            let s = space(&format!("rnc:{d}"), q);
            let i2 = quadric_space(&s).unwrap();
            let rep = generated_in_degree_3(&s, &i2.basis).unwrap();
            assert_eq!(rep.dim_i3, dim_i3, "rnc:{d}");
            assert_eq!(rep.deficit, 0);
            assert!(rep.generated);
        }
        let f13 = fp(13);
        let s = space("elliptic:a=0,b=1,d=4", f13);
        let i2 = quadric_space(&s).unwrap();
        let rep = generated_in_degree_3(&s, &i2.basis).unwrap();
        assert_eq!((rep.dim_i3, rep.span_dim), (8, 8));
        // dropping one of the two pencil generators leaves a deficit
        let rep = generated_in_degree_3(&s, &i2.basis[..1]).unwrap();
        assert!(!rep.generated);
        assert!(rep.deficit > 0);
    }

    #[test]
    fn checksum_is_stable() {
        let q = FieldSpec::Rationals;
        let i2 = quadric_space(&space("rnc:3", q)).unwrap();
        assert_eq!(i2.checksum(), format!("dim=3;ranks={}", i2.ranks()
            .iter().map(|r| r.to_string()).collect::<Vec<_>>().join(",")));
        assert!(i2.checksum().starts_with("dim=3;ranks="));
    }
}
