//! Exact scalars over ℚ or a prime field 𝔽ₚ (p an odd prime).
//!
//! Every scalar carries its field; mixing fields in arithmetic is a
//! programming error and panics. Rational scalars are kept reduced with a
//! positive denominator so equality is plain representation equality.

use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, Sign};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// The working field: ℚ or 𝔽ₚ with p an odd prime.
///
/// Characteristic 2 is always rejected — symmetric rank theory needs 2
/// invertible, and every construction here leans on Gram matrices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FieldSpec {
    Rationals,
    Prime(u64),
}

impl FieldSpec {
    pub fn rationals() -> Self {
        FieldSpec::Rationals
    }

    pub fn prime(p: u64) -> Result<Self> {
        if p == 2 {
            return Err(Error::InvalidField("2 is not allowed (char != 2 required)".into()));
        }
        if !is_prime_u64(p) {
            return Err(Error::InvalidField(format!("{p} is not prime")));
        }
        Ok(FieldSpec::Prime(p))
    }

    pub fn characteristic(&self) -> u64 {
        match self {
            FieldSpec::Rationals => 0,
            FieldSpec::Prime(p) => *p,
        }
    }

    pub fn is_char_3(&self) -> bool {
        self.characteristic() == 3
    }

    pub fn zero(&self) -> Scalar {
        self.from_i64(0)
    }

    pub fn one(&self) -> Scalar {
        self.from_i64(1)
    }

    pub fn from_i64(&self, n: i64) -> Scalar {
        match self {
            FieldSpec::Rationals => Scalar::Q(BigRational::from_integer(BigInt::from(n))),
            FieldSpec::Prime(p) => Scalar::Fp {
                v: (n as i128).rem_euclid(*p as i128) as u64,
                p: *p,
            },
        }
    }

    /// Multiplicative inverse of 2; needed for Gram off-diagonal entries.
    pub fn half(&self) -> Scalar {
        self.from_i64(1).div(&self.from_i64(2))
    }

    /// Parse "Q" or "Fp:<p>".
    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "Q" {
            return Ok(FieldSpec::Rationals);
        }
        if let Some(rest) = s.strip_prefix("Fp:") {
            let p: u64 = rest
                .parse()
                .map_err(|_| Error::Parse(format!("bad prime in field spec {s:?}")))?;
            return FieldSpec::prime(p);
        }
        Err(Error::Parse(format!("bad field spec {s:?} (expected \"Q\" or \"Fp:<p>\")")))
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldSpec::Rationals => write!(f, "Q"),
            FieldSpec::Prime(p) => write!(f, "Fp:{p}"),
        }
    }
}

/// An exact field element.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Scalar {
    Q(BigRational),
    Fp { v: u64, p: u64 },
}

impl Scalar {
    pub fn field(&self) -> FieldSpec {
        match self {
            Scalar::Q(_) => FieldSpec::Rationals,
            Scalar::Fp { p, .. } => FieldSpec::Prime(*p),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Q(r) => r.is_zero(),
            Scalar::Fp { v, .. } => *v == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Q(r) => r.is_one(),
            Scalar::Fp { v, .. } => *v == 1,
        }
    }

    fn check_same_field(&self, other: &Scalar) {
        let (a, b) = (self.field(), other.field());
        assert!(a == b, "mixed-field arithmetic: {a} vs {b}");
    }

    pub fn add(&self, other: &Scalar) -> Scalar {
        self.check_same_field(other);
        match (self, other) {
            // integer-integer fast path: the generic rational addition runs
            // an lcm, a gcd, and a re-reduction per call, which dominates
            // whole-program time on the (overwhelmingly integer) towers
            (Scalar::Q(a), Scalar::Q(b)) if a.is_integer() && b.is_integer() => {
                Scalar::Q(BigRational::from_integer(a.numer() + b.numer()))
            }
            (Scalar::Q(a), Scalar::Q(b)) => Scalar::Q(a + b),
            (Scalar::Fp { v: a, p }, Scalar::Fp { v: b, .. }) => Scalar::Fp {
                v: ((*a as u128 + *b as u128) % *p as u128) as u64,
                p: *p,
            },
            _ => unreachable!(),
        }
    }

    pub fn sub(&self, other: &Scalar) -> Scalar {
        self.check_same_field(other);
        match (self, other) {
            (Scalar::Q(a), Scalar::Q(b)) if a.is_integer() && b.is_integer() => {
                Scalar::Q(BigRational::from_integer(a.numer() - b.numer()))
            }
            (Scalar::Q(a), Scalar::Q(b)) => Scalar::Q(a - b),
            (Scalar::Fp { .. }, Scalar::Fp { .. }) => self.add(&other.neg()),
            _ => unreachable!(),
        }
    }

    pub fn mul(&self, other: &Scalar) -> Scalar {
        self.check_same_field(other);
        match (self, other) {
            // see `add`: skip the two gcds of general rational multiplication
            (Scalar::Q(a), Scalar::Q(b)) if a.is_integer() && b.is_integer() => {
                Scalar::Q(BigRational::from_integer(a.numer() * b.numer()))
            }
            (Scalar::Q(a), Scalar::Q(b)) => Scalar::Q(a * b),
            (Scalar::Fp { v: a, p }, Scalar::Fp { v: b, .. }) => Scalar::Fp {
                v: ((*a as u128 * *b as u128) % *p as u128) as u64,
                p: *p,
            },
            _ => unreachable!(),
        }
    }

    pub fn neg(&self) -> Scalar {
        match self {
            Scalar::Q(a) => Scalar::Q(-a),
            Scalar::Fp { v, p } => Scalar::Fp {
                v: if *v == 0 { 0 } else { p - v },
                p: *p,
            },
        }
    }

    /// Multiplicative inverse. Panics on zero (callers guard).
    pub fn inv(&self) -> Scalar {
        assert!(!self.is_zero(), "inverse of zero");
        match self {
            Scalar::Q(a) => Scalar::Q(a.recip()),
            Scalar::Fp { v, p } => Scalar::Fp {
                v: mod_pow(*v, *p - 2, *p),
                p: *p,
            },
        }
    }

    pub fn div(&self, other: &Scalar) -> Scalar {
        self.mul(&other.inv())
    }

    pub fn pow(&self, mut e: u64) -> Scalar {
        let mut base = self.clone();
        let mut acc = self.field().one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    /// Parse a scalar in the field's text encoding: over ℚ "num/den" with
    /// the denominator omitted when 1; over 𝔽ₚ an integer (optionally
    /// signed or with "/den"), reduced to the canonical residue.
    pub fn parse(s: &str, field: FieldSpec) -> Result<Scalar> {
        let s = s.trim();
        if s.is_empty() {
            return Err(Error::Parse("empty scalar".into()));
        }
        let (num_s, den_s) = match s.split_once('/') {
            Some((n, d)) => (n, Some(d)),
            None => (s, None),
        };
        let num = BigInt::from_str(num_s)
            .map_err(|_| Error::Parse(format!("bad scalar {s:?}")))?;
        let den = match den_s {
            Some(d) => BigInt::from_str(d).map_err(|_| Error::Parse(format!("bad scalar {s:?}")))?,
            None => BigInt::one(),
        };
        if den.is_zero() {
            return Err(Error::Parse(format!("zero denominator in {s:?}")));
        }
        match field {
            FieldSpec::Rationals => Ok(Scalar::Q(BigRational::new(num, den))),
            FieldSpec::Prime(p) => {
                let n = bigint_mod_u64(&num, p);
                let d = bigint_mod_u64(&den, p);
                if d == 0 {
                    return Err(Error::Parse(format!("denominator of {s:?} vanishes mod {p}")));
                }
                Ok(Scalar::Fp { v: n, p }.mul(&Scalar::Fp { v: d, p }.inv()))
            }
        }
    }

    /// Square roots over 𝔽ₚ in ascending residue order (0, 1, or 2 results).
    pub fn fp_sqrt(&self) -> Vec<Scalar> {
        let (v, p) = match self {
            Scalar::Fp { v, p } => (*v, *p),
            Scalar::Q(_) => panic!("fp_sqrt on a rational"),
        };
        if v == 0 {
            return vec![Scalar::Fp { v: 0, p }];
        }
        // Euler criterion, then Tonelli–Shanks (p = 3 mod 4 shortcut first).
        if mod_pow(v, (p - 1) / 2, p) != 1 {
            return vec![];
        }
        let r = if p % 4 == 3 {
            mod_pow(v, (p + 1) / 4, p)
        } else {
            tonelli_shanks(v, p)
        };
        let other = p - r;
        let (lo, hi) = if r < other { (r, other) } else { (other, r) };
        if lo == hi {
            vec![Scalar::Fp { v: lo, p }]
        } else {
            vec![Scalar::Fp { v: lo, p }, Scalar::Fp { v: hi, p }]
        }
    }

    /// Exact square root over ℚ when it exists.
    pub fn q_sqrt(&self) -> Option<Scalar> {
        let r = match self {
            Scalar::Q(r) => r,
            Scalar::Fp { .. } => panic!("q_sqrt on a prime-field scalar"),
        };
        if r.is_negative() {
            return None;
        }
        let ns = r.numer().sqrt();
        let ds = r.denom().sqrt();
        if &(&ns * &ns) == r.numer() && &(&ds * &ds) == r.denom() {
            Some(Scalar::Q(BigRational::new(ns, ds)))
        } else {
            None
        }
    }
}

/// Scale a rational vector by the positive rational that clears every
/// denominator and divides out the numerator content. The span, the zero
/// pattern, and all signs are unchanged; prime-field vectors pass through.
/// Deep exact-arithmetic recursions depend on this to keep coefficient
/// sizes from compounding level over level.
pub fn primitive_part(v: &[Scalar]) -> Vec<Scalar> {
    use num_integer::Integer;
    if !matches!(v.first(), Some(Scalar::Q(_))) {
        return v.to_vec();
    }
    fn rat(s: &Scalar) -> &BigRational {
        match s {
            Scalar::Q(r) => r,
            Scalar::Fp { .. } => panic!("mixed-field vector"),
        }
    }
    // all-integer vectors are the overwhelmingly common case; handle them
    // with a bare content scan (bailing out as soon as the gcd reaches 1)
    // instead of the general clear-denominators path
    if v.iter().all(|s| rat(s).is_integer()) {
        let mut content = BigInt::zero();
        for s in v {
            content = content.gcd(rat(s).numer());
            if content.is_one() {
                return v.to_vec();
            }
        }
        if content.is_zero() {
            return v.to_vec();
        }
        return v
            .iter()
            .map(|s| Scalar::Q(BigRational::from_integer(rat(s).numer() / &content)))
            .collect();
    }
    let mut den = BigInt::one();
    for s in v {
        den = den.lcm(rat(s).denom());
    }
    let mut content = BigInt::zero();
    for s in v {
        let r = rat(s);
        content = content.gcd(&(r.numer() * &den / r.denom()));
    }
    if content.is_zero() {
        return v.to_vec();
    }
    let scale = BigRational::new(den, content);
    v.iter().map(|s| Scalar::Q(rat(s).clone() * &scale)).collect()
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Q(r) => {
                if r.denom().is_one() {
                    write!(f, "{}", r.numer())
                } else {
                    write!(f, "{}/{}", r.numer(), r.denom())
                }
            }
            Scalar::Fp { v, .. } => write!(f, "{v}"),
        }
    }
}

fn bigint_mod_u64(n: &BigInt, p: u64) -> u64 {
    let m = n % BigInt::from(p);
    let m = if m.sign() == Sign::Minus { m + BigInt::from(p) } else { m };
    let (_, digits) = m.to_u64_digits();
    digits.first().copied().unwrap_or(0)
}

fn mod_pow(b: u64, mut e: u64, m: u64) -> u64 {
    let mm = m as u128;
    let mut acc: u128 = 1;
    let mut bb = b as u128 % mm;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * bb % mm;
        }
        bb = bb * bb % mm;
        e >>= 1;
    }
    acc as u64
}

fn tonelli_shanks(n: u64, p: u64) -> u64 {
    // p is an odd prime, n a known quadratic residue, p = 1 mod 4 here.
    let mut q = p - 1;
    let mut s = 0u32;
    while q % 2 == 0 {
        q /= 2;
        s += 1;
    }
    // smallest quadratic non-residue; scanning is fine at our sizes
    let mut z = 2;
    while mod_pow(z, (p - 1) / 2, p) != p - 1 {
        z += 1;
    }
    let mut m = s;
    let mut c = mod_pow(z, q, p);
    let mut t = mod_pow(n, q, p);
    let mut r = mod_pow(n, (q + 1) / 2, p);
    while t != 1 {
        let mut i = 0u32;
        let mut t2 = t;
        while t2 != 1 {
            t2 = (t2 as u128 * t2 as u128 % p as u128) as u64;
            i += 1;
        }
        let b = mod_pow(c, 1 << (m - i - 1), p);
        m = i;
        c = (b as u128 * b as u128 % p as u128) as u64;
        t = (t as u128 * c as u128 % p as u128) as u64;
        r = (r as u128 * b as u128 % p as u128) as u64;
    }
    r
}

/// Deterministic Miller–Rabin, valid for all u64.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for q in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == q {
            return true;
        }
        if n % q == 0 {
            return false;
        }
    }
    let mut d = n - 1;
    let mut s = 0u32;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = mod_pow(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 0..s - 1 {
            x = (x as u128 * x as u128 % n as u128) as u64;
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}
