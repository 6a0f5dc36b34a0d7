//! Binary forms f(s,t) = Σ cᵢ s^(d−i) t^i, the pencil determinant, and
//! rational root extraction over 𝔽ₚ (exhaustive) and ℚ (divisor search).

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::field::{FieldSpec, Scalar};
use crate::matrix::Matrix;

/// A homogeneous binary form of degree `coeffs.len() - 1`; index i holds
/// the coefficient of s^(d−i) t^i.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BinaryForm {
    pub coeffs: Vec<Scalar>,
}

/// A point of ℙ¹ in normalized coordinates (first nonzero entry = 1).
pub type P1Point = (Scalar, Scalar);

pub fn normalize_p1(s: Scalar, t: Scalar) -> P1Point {
    assert!(!(s.is_zero() && t.is_zero()), "(0:0) is not a point of P^1");
    if !s.is_zero() {
        let inv = s.inv();
        (s.field().one(), t.mul(&inv))
    } else {
        (s.field().zero(), s.field().one())
    }
}

impl BinaryForm {
    pub fn new(coeffs: Vec<Scalar>) -> BinaryForm {
        assert!(!coeffs.is_empty(), "a form needs at least one coefficient");
        BinaryForm { coeffs }
    }

    pub fn zero(field: FieldSpec, degree: usize) -> BinaryForm {
        BinaryForm::new(vec![field.zero(); degree + 1])
    }

    /// Monomial basis vector s^(d−i) t^i.
    pub fn monomial(field: FieldSpec, degree: usize, i: usize) -> BinaryForm {
        let mut f = BinaryForm::zero(field, degree);
        f.coeffs[i] = field.one();
        f
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn field(&self) -> FieldSpec {
        self.coeffs[0].field()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn add(&self, other: &BinaryForm) -> BinaryForm {
        assert_eq!(self.degree(), other.degree(), "degree mismatch in form sum");
        BinaryForm::new(
            self.coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a.add(b))
                .collect(),
        )
    }

    pub fn scale(&self, s: &Scalar) -> BinaryForm {
        BinaryForm::new(self.coeffs.iter().map(|c| c.mul(s)).collect())
    }

    pub fn mul(&self, other: &BinaryForm) -> BinaryForm {
        let f = self.field();
        let mut out = vec![f.zero(); self.degree() + other.degree() + 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    out[i + j] = out[i + j].add(&a.mul(b));
                }
            }
        }
        BinaryForm::new(out)
    }

    pub fn eval(&self, s: &Scalar, t: &Scalar) -> Scalar {
        let f = self.field();
        let d = self.degree();
        let mut spow = vec![f.one()];
        let mut tpow = vec![f.one()];
        for k in 1..=d {
            spow.push(spow[k - 1].mul(s));
            tpow.push(tpow[k - 1].mul(t));
        }
        let mut acc = f.zero();
        for (i, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                acc = acc.add(&c.mul(&spow[d - i].mul(&tpow[i])));
            }
        }
        acc
    }

    /// Divide by the linear form vanishing at `pt` (which must be a root).
    ///
    /// For (0:1) the linear form is s, for (1:c) it is t − c·s; either way
    /// the quotient's coefficients come out of a synthetic division of the
    /// dehomogenization.
    pub fn deflate(&self, pt: &P1Point) -> BinaryForm {
        let f = self.field();
        let d = self.degree();
        assert!(d >= 1, "cannot deflate a constant");
        let (s0, t0) = pt;
        if s0.is_zero() {
            // root (0:1): f divisible by s <=> leading coefficient c_d of t^d is...
            // index d is the t^d coefficient; divisibility by s means c_d = 0
            assert!(self.coeffs[d].is_zero(), "deflation at a non-root (0:1)");
            return BinaryForm::new(self.coeffs[..d].to_vec());
        }
        let c = t0.div(s0);
        // dehomogenize at s=1: coefficients ascending in t are self.coeffs
        // as-is; divide by (t - c) top-down
        let mut out = vec![f.zero(); d];
        let mut carry = f.zero();
        for i in (1..=d).rev() {
            carry = if i == d {
                self.coeffs[i].clone()
            } else {
                self.coeffs[i].add(&c.mul(&carry))
            };
            out[i - 1] = carry.clone();
        }
        let rem = self.coeffs[0].add(&c.mul(&out[0]));
        assert!(rem.is_zero(), "deflation at a non-root");
        BinaryForm::new(out)
    }

    /// Vanishing order at a point (0 if the form does not vanish there).
    pub fn order_at(&self, pt: &P1Point) -> usize {
        let mut f = self.clone();
        let mut ord = 0;
        while f.degree() >= 1 && f.eval(&pt.0, &pt.1).is_zero() {
            f = f.deflate(pt);
            ord += 1;
        }
        if f.degree() == 0 && ord == 0 && f.coeffs[0].is_zero() {
            // zero constant: callers must not ask for orders of the zero form
            panic!("order_at on the zero form");
        }
        ord
    }

    /// All field-rational projective roots with multiplicities.
    ///
    /// Over 𝔽ₚ: exhaustive scan of the p+1 points of ℙ¹(𝔽ₚ), multiplicity
    /// by repeated deflation. Over ℚ: rational-root search on the
    /// content-normalized dehomogenization, divisor enumeration bounded by
    /// trial-division factorization. Count may be less than the degree.
    pub fn roots(&self) -> Result<Vec<(P1Point, usize)>> {
        if self.is_zero() {
            return Err(Error::ZeroForm);
        }
        match self.field() {
            FieldSpec::Prime(p) => Ok(self.roots_fp(p)),
            FieldSpec::Rationals => self.roots_q(),
        }
    }

    fn roots_fp(&self, p: u64) -> Vec<(P1Point, usize)> {
        let f = self.field();
        let mut pts: Vec<P1Point> = vec![(f.one(), f.zero()), (f.zero(), f.one())];
        for c in 1..p {
            pts.push((f.one(), f.from_i64(c as i64)));
        }
        let mut out = Vec::new();
        for pt in pts {
            if !self.eval(&pt.0, &pt.1).is_zero() {
                continue;
            }
            out.push((pt.clone(), self.order_at(&pt)));
        }
        out
    }

    fn roots_q(&self) -> Result<Vec<(P1Point, usize)>> {
        let f = self.field();
        let mut out = Vec::new();
        let mut g = self.clone();
        // (1:0): multiplicity = index of the first nonzero coefficient
        let lead_mult = g.coeffs.iter().position(|c| !c.is_zero()).unwrap();
        if lead_mult > 0 {
            let pt = (f.one(), f.zero());
            out.push((pt.clone(), lead_mult));
            for _ in 0..lead_mult {
                g = g.deflate(&pt);
            }
        }
        // (0:1): multiplicity = number of trailing zero coefficients
        let tail_mult = g.coeffs.iter().rev().position(|c| !c.is_zero()).unwrap();
        if tail_mult > 0 {
            let pt = (f.zero(), f.one());
            out.push((pt.clone(), tail_mult));
            for _ in 0..tail_mult {
                g = g.deflate(&pt);
            }
        }
        if g.degree() == 0 {
            out.sort_by(|a, b| p1_sort_key(&a.0).cmp(&p1_sort_key(&b.0)));
            return Ok(out);
        }
        // remaining roots are (1:n/d) with n | constant, d | leading
        // coefficient of the content-normalized integer polynomial in t
        let ints = q_clear_denominators(&g.coeffs);
        let lead = ints.last().unwrap().abs();
        let konst = ints.first().unwrap().abs();
        let (num_divs, den_divs) = (divisors(&konst)?, divisors(&lead)?);
        let mut cands: Vec<BigRational> = Vec::new();
        for n in &num_divs {
            for d in &den_divs {
                if n.gcd(d).is_one() {
                    cands.push(BigRational::new(n.clone(), d.clone()));
                    cands.push(BigRational::new(-n.clone(), d.clone()));
                }
            }
        }
        cands.sort();
        cands.dedup();
        for c in cands {
            let pt = (f.one(), Scalar::Q(c));
            if g.eval(&pt.0, &pt.1).is_zero() {
                out.push((pt.clone(), g.order_at(&pt)));
            }
        }
        out.sort_by(|a, b| p1_sort_key(&a.0).cmp(&p1_sort_key(&b.0)));
        Ok(out)
    }
}

impl std::fmt::Display for BinaryForm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let d = self.degree();
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({c})")?;
            if d - i > 0 {
                write!(f, "s^{}", d - i)?;
            }
            if i > 0 {
                write!(f, "t^{i}")?;
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// Sort key so root lists come out in the enumeration order (1:0), (0:1),
/// then ascending (1:c).
fn p1_sort_key(pt: &P1Point) -> (u8, String) {
    if pt.1.is_zero() {
        (0, String::new())
    } else if pt.0.is_zero() {
        (1, String::new())
    } else {
        // stringly ordering is fine: only used for output stability, with
        // padding to keep numeric order within one field
        (2, format!("{:>40}", pt.1))
    }
}

fn q_clear_denominators(coeffs: &[Scalar]) -> Vec<BigInt> {
    let rats: Vec<&BigRational> = coeffs
        .iter()
        .map(|c| match c {
            Scalar::Q(r) => r,
            _ => unreachable!(),
        })
        .collect();
    let mut lcm = BigInt::one();
    for r in &rats {
        lcm = lcm.lcm(r.denom());
    }
    let ints: Vec<BigInt> = rats.iter().map(|r| (*r * &lcm).to_integer()).collect();
    let mut content = BigInt::zero();
    for c in &ints {
        content = content.gcd(c);
    }
    ints.iter().map(|c| c / &content).collect()
}

/// All positive divisors, via trial division. Bails out rather than loop
/// forever on adversarial inputs; the pencil determinants in scope have
/// small entries.
fn divisors(n: &BigInt) -> Result<Vec<BigInt>> {
    const TRIAL_BOUND: u64 = 1 << 22;
    let mut n = n.abs();
    if n.is_zero() {
        // divisor set of 0 is unbounded; callers strip zero roots first
        panic!("divisors of zero");
    }
    let mut primes: Vec<(BigInt, u32)> = Vec::new();
    let mut d = BigInt::from(2u64);
    while &d * &d <= n {
        if d > BigInt::from(TRIAL_BOUND) {
            return Err(Error::Unsupported(
                "rational root search: coefficient factorization exceeds trial bound".into(),
            ));
        }
        if (&n % &d).is_zero() {
            let mut e = 0u32;
            while (&n % &d).is_zero() {
                n /= &d;
                e += 1;
            }
            primes.push((d.clone(), e));
        }
        d += 1;
    }
    if n > BigInt::one() {
        primes.push((n, 1));
    }
    let mut divs = vec![BigInt::one()];
    for (p, e) in primes {
        let mut next = Vec::new();
        for d in &divs {
            let mut pk = BigInt::one();
            for _ in 0..=e {
                next.push(d * &pk);
                pk *= &p;
            }
        }
        divs = next;
    }
    divs.sort();
    Ok(divs)
}

/// det(λ·q1 + μ·q2) of two symmetric 4×4 Gram matrices, as a degree-4
/// binary form in (λ, μ). Computed by exact expansion over the 24
/// permutations — interpolation would need 5 points of ℙ¹ and 𝔽₃ has
/// only 4.
pub fn det_pencil(q1: &Matrix, q2: &Matrix) -> BinaryForm {
    assert!(q1.rows == 4 && q1.cols == 4 && q2.rows == 4 && q2.cols == 4,
            "det_pencil expects 4x4 Gram matrices");
    assert!(q1.is_symmetric() && q2.is_symmetric(), "det_pencil expects symmetric matrices");
    assert!(q1.field == q2.field, "det_pencil field mismatch");
    let f = q1.field;
    let n = 4usize;
    let mut out = BinaryForm::zero(f, n);
    let mut perm = [0usize, 1, 2, 3];
    loop {
        let sign = permutation_sign(&perm);
        // product of n linear forms (q1[r][perm[r]] λ + q2[r][perm[r]] μ)
        let mut term = BinaryForm::new(vec![f.one()]);
        for (r, &pc) in perm.iter().enumerate() {
            let lin = BinaryForm::new(vec![q1.at(r, pc).clone(), q2.at(r, pc).clone()]);
            term = term.mul(&lin);
        }
        for i in 0..=n {
            let v = if sign { term.coeffs[i].clone() } else { term.coeffs[i].neg() };
            out.coeffs[i] = out.coeffs[i].add(&v);
        }
        if !next_permutation(&mut perm) {
            break;
        }
    }
    out
}

fn permutation_sign(perm: &[usize]) -> bool {
    let mut p = perm.to_vec();
    let mut even = true;
    for i in 0..p.len() {
        while p[i] != i {
            let j = p[i];
            p.swap(i, j);
            even = !even;
        }
    }
    even
}

fn next_permutation(p: &mut [usize]) -> bool {
    let n = p.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && p[i - 1] >= p[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while p[j] <= p[i - 1] {
        j -= 1;
    }
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}
