//! Randomized invariants: the exact linear algebra, the primitive
//! rescaling, section products, projections, and pullbacks.

use proptest::prelude::*;
use qr3::curve::eval_section;
use qr3::{
    build_certificate, canonical_sections, cone_pullback, quadric_space, sample_points,
    vanishes_on_curve, BinaryForm, CurveModel, FieldSpec, Matrix, Scalar, Span,
};

fn fp(p: u64) -> FieldSpec {
    FieldSpec::prime(p).unwrap()
}

fn mat(field: FieldSpec, rows: &[Vec<i64>]) -> Matrix {
    Matrix::from_rows(
        field,
        rows.iter()
            .map(|r| r.iter().map(|&x| field.from_i64(x)).collect())
            .collect(),
    )
}

fn small_prime() -> impl Strategy<Value = u64> {
    prop::sample::select(vec![3u64, 5, 7, 11, 13])
}

fn entries(n: usize) -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(-6i64..=6, n)
}

proptest! {
    /// Congruence by an invertible matrix preserves symmetric rank. The
    /// invertible factor is built as unit-lower times unit-upper, so no
    /// filtering is needed.
    #[test]
    fn congruence_preserves_symmetric_rank(
        p in small_prime(),
        n in 2usize..=4,
        sym in entries(16),
        lower in entries(16),
        upper in entries(16),
    ) {
        let f = fp(p);
        let mut s = Matrix::zeros(f, n, n);
        let mut l = Matrix::identity(f, n);
        let mut u = Matrix::identity(f, n);
        let mut k = 0;
        for i in 0..n {
            for j in i..n {
                let v = f.from_i64(sym[k]);
                s.set(i, j, v.clone());
                s.set(j, i, v);
                if i != j {
                    l.set(j, i, f.from_i64(lower[k]));
                    u.set(i, j, f.from_i64(upper[k]));
                }
                k += 1;
            }
        }
        let pm = l.mul(&u);
        prop_assert_eq!(pm.rank(), n);
        let conj = pm.transpose().mul(&s).mul(&pm);
        prop_assert_eq!(
            conj.symmetric_rank().unwrap().0,
            s.symmetric_rank().unwrap().0
        );
    }

    /// The kernel basis annihilates the matrix, has cols − rank columns,
    /// and reduction is idempotent.
    #[test]
    fn kernel_and_rref_shape(
        p in prop::option::of(small_prime()),
        rows in 1usize..=4,
        cols in 1usize..=5,
        data in entries(20),
    ) {
        let f = p.map_or(FieldSpec::Rationals, fp);
        let rs: Vec<Vec<i64>> = (0..rows)
            .map(|i| data[i * cols..(i + 1) * cols].to_vec())
            .collect();
        let a = mat(f, &rs);
        let r = a.rref();
        prop_assert_eq!(r.matrix.rref().matrix, r.matrix.clone());
        let k = a.kernel_basis();
        prop_assert_eq!(k.cols, cols - r.rank);
        for j in 0..k.cols {
            let img = a.apply(&k.col(j));
            prop_assert!(img.iter().all(|s| s.is_zero()));
        }
    }

    /// The incremental span agrees with matrix rank, contains what it was
    /// fed, and contains any small linear combination of it.
    #[test]
    fn span_agrees_with_matrix_rank(
        p in prop::option::of(small_prime()),
        dim in 1usize..=5,
        count in 1usize..=5,
        data in entries(25),
        combo in entries(5),
    ) {
        let f = p.map_or(FieldSpec::Rationals, fp);
        let vecs: Vec<Vec<Scalar>> = (0..count)
            .map(|i| data[i * dim..(i + 1) * dim].iter().map(|&x| f.from_i64(x)).collect())
            .collect();
        let mut sp = Span::new(f, dim);
        for v in &vecs {
            sp.insert(v);
        }
        let a = mat(
            f,
            &(0..count)
                .map(|i| data[i * dim..(i + 1) * dim].to_vec())
                .collect::<Vec<_>>(),
        );
        prop_assert_eq!(sp.rank(), a.rank());
        for v in &vecs {
            prop_assert!(sp.contains(v));
        }
        let mut mix = vec![f.zero(); dim];
        for (c, v) in combo.iter().zip(&vecs) {
            let c = f.from_i64(*c);
            for (m, x) in mix.iter_mut().zip(v) {
                *m = m.add(&c.mul(x));
            }
        }
        prop_assert!(sp.contains(&mix));
    }

    /// `primitive_part` keeps the oriented projective class: the output is
    /// an integer vector, a positive multiple of the input, with content 1.
    #[test]
    fn primitive_part_is_a_positive_primitive_rescaling(
        nums in entries(6),
        dens in prop::collection::vec(1i64..=9, 6),
        len in 1usize..=6,
    ) {
        let f = FieldSpec::Rationals;
        let v: Vec<Scalar> = (0..len)
            .map(|i| f.from_i64(nums[i]).div(&f.from_i64(dens[i])))
            .collect();
        let w = qr3::field::primitive_part(&v);
        prop_assert_eq!(w.len(), v.len());
        let mut content = num_bigint::BigInt::from(0);
        for (a, b) in v.iter().zip(&w) {
            prop_assert_eq!(a.is_zero(), b.is_zero());
            // b = λ·a with one positive λ for the whole vector:
            // cross-products agree and orientation is kept
            match b {
                Scalar::Q(r) => {
                    prop_assert!(r.is_integer());
                    content = num_integer::Integer::gcd(&content, r.numer());
                }
                _ => prop_assert!(false, "field changed"),
            }
        }
        if v.iter().any(|s| !s.is_zero()) {
            prop_assert_eq!(content, num_bigint::BigInt::from(1));
        }
        for i in 0..len {
            for j in 0..len {
                prop_assert_eq!(v[i].mul(&w[j]), v[j].mul(&w[i]));
            }
            // orientation: a and λ·a never have opposite signs
            let prod = v[i].mul(&w[i]);
            if let Scalar::Q(r) = &prod {
                prop_assert!(!num_traits::Signed::is_negative(r));
            }
        }
        prop_assert_eq!(qr3::field::primitive_part(&w), w.clone());
    }

    /// Binary form products commute and evaluation is multiplicative.
    #[test]
    fn form_products_commute_and_eval_multiplies(
        p in prop::option::of(small_prime()),
        fc in entries(4),
        gc in entries(3),
        s in -4i64..=4,
        t in -4i64..=4,
    ) {
        let f = p.map_or(FieldSpec::Rationals, fp);
        let lhs = BinaryForm::new(fc.iter().map(|&x| f.from_i64(x)).collect());
        let rhs = BinaryForm::new(gc.iter().map(|&x| f.from_i64(x)).collect());
        prop_assert_eq!(lhs.mul(&rhs), rhs.mul(&lhs));
        let (sv, tv) = (f.from_i64(s), f.from_i64(t));
        prop_assert_eq!(
            lhs.mul(&rhs).eval(&sv, &tv),
            lhs.eval(&sv, &tv).mul(&rhs.eval(&sv, &tv))
        );
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    /// Projecting away from a point drops the dimension by exactly one and
    /// every section of the subspace vanishes at the point.
    #[test]
    fn projection_drops_dimension_and_vanishes(
        p in small_prime(),
        d in 3usize..=6,
        seed in 0u64..8,
        pick in 0usize..4,
    ) {
        let f = fp(p);
        let model = CurveModel::parse(&format!("rnc:{d}"), f).unwrap();
        let space = canonical_sections(&model, f).unwrap();
        let pts = sample_points(&model, f, 4, seed).unwrap().points;
        let pt = &pts[pick.min(pts.len() - 1)];
        let child = space.vanishing_subspace(pt).unwrap();
        prop_assert_eq!(child.dim(), space.dim() - 1);
        for sec in &child.basis {
            prop_assert!(eval_section(&model, sec, pt).unwrap().is_zero());
        }
    }

    /// Pulled-back quadrics of a one-point subspace vanish on the parent
    /// curve and keep their rank. (The builder no longer re-checks this on
    /// every node, so it is pinned here.)
    #[test]
    fn pullbacks_vanish_on_the_parent_curve(
        p in small_prime(),
        d in 4usize..=6,
        seed in 0u64..4,
    ) {
        let f = fp(p);
        let model = CurveModel::parse(&format!("rnc:{d}"), f).unwrap();
        let root = canonical_sections(&model, f).unwrap();
        let pt = sample_points(&model, f, 1, seed).unwrap().points.remove(0);
        let child = root.vanishing_subspace(&pt).unwrap();
        let child_i2 = quadric_space(&child).unwrap();
        let pulled = cone_pullback(&root, &pt, &child_i2.basis).unwrap();
        prop_assert_eq!(pulled.len(), child_i2.basis.len());
        for (q, c) in pulled.iter().zip(&child_i2.basis) {
            prop_assert!(vanishes_on_curve(&root, q));
            prop_assert_eq!(q.rank(), c.rank());
        }
    }

    /// Same model, same field, same seed: byte-identical certificates.
    #[test]
    fn builds_are_reproducible(seed in 0u64..16) {
        let f = fp(7);
        let model = CurveModel::parse("rnc:4", f).unwrap();
        let a = build_certificate(&model, f, seed, None).unwrap();
        let b = build_certificate(&model, f, seed, None).unwrap();
        prop_assert_eq!(a.to_json_string(), b.to_json_string());
    }
}
