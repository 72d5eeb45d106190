//! Dense univariate polynomials over the integers.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::SturmChain;

/// Polynomial with arbitrary-precision integer coefficients, lowest degree first.
///
/// Trailing zero coefficients are always trimmed, so the zero polynomial has an
/// empty coefficient vector and every other polynomial has a nonzero leading
/// coefficient.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntPolynomial {
    coeffs: Vec<BigInt>,
}

impl IntPolynomial {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn from_i64s(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(BigInt::one())
    }

    pub fn constant(c: BigInt) -> Self {
        Self::new(vec![c])
    }

    /// The monomial `c·x^k`.
    pub fn monomial(c: BigInt, k: usize) -> Self {
        let mut coeffs = vec![BigInt::zero(); k + 1];
        coeffs[k] = c;
        Self::new(coeffs)
    }

    /// `x - r`.
    pub fn linear_root(r: i64) -> Self {
        Self::from_i64s(&[-r, 1])
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&BigInt> {
        self.coeffs.last()
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_some_and(One::is_one)
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn coeff(&self, k: usize) -> BigInt {
        self.coeffs.get(k).cloned().unwrap_or_default()
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        self.coeffs
            .iter()
            .rev()
            .fold(BigInt::zero(), |acc, c| acc * x + c)
    }

    /// Sign of `p(q)` for a rational `q`, computed exactly.
    pub fn sign_at(&self, q: &BigRational) -> i8 {
        // d^deg · p(n/d) = Σ a_i n^i d^(deg - i), same sign as p(n/d) since d > 0.
        let Some(deg) = self.degree() else { return 0 };
        let (num, den) = (q.numer(), q.denom());
        let mut acc = BigInt::zero();
        let mut den_pow = BigInt::one();
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if i < deg {
                den_pow *= den;
            }
            acc = acc * num + c * &den_pow;
        }
        sign_of(&acc)
    }

    /// Sign as `x → +∞`.
    pub fn sign_at_pos_inf(&self) -> i8 {
        self.leading().map_or(0, sign_of)
    }

    /// Sign as `x → -∞`.
    pub fn sign_at_neg_inf(&self) -> i8 {
        match self.degree() {
            None => 0,
            Some(d) => {
                let s = self.sign_at_pos_inf();
                if d % 2 == 0 {
                    s
                } else {
                    -s
                }
            }
        }
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigInt::from(i))
                .collect(),
        )
    }

    pub fn add(&self, other: &Self) -> Self {
        let len = self.coeffs.len().max(other.coeffs.len());
        Self::new((0..len).map(|i| self.coeff(i) + other.coeff(i)).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        let len = self.coeffs.len().max(other.coeffs.len());
        Self::new((0..len).map(|i| self.coeff(i) - other.coeff(i)).collect())
    }

    pub fn neg(&self) -> Self {
        Self::new(self.coeffs.iter().map(|c| -c).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        Self::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn pow(&self, e: usize) -> Self {
        (0..e).fold(Self::one(), |acc, _| acc.mul(self))
    }

    /// Divides every coefficient by `c`; `None` unless all divisions are exact.
    pub fn div_scalar(&self, c: &BigInt) -> Option<Self> {
        let mut out = Vec::with_capacity(self.coeffs.len());
        for a in &self.coeffs {
            let (q, r) = a.div_rem(c);
            if !r.is_zero() {
                return None;
            }
            out.push(q);
        }
        Some(Self::new(out))
    }

    /// Non-negative gcd of the coefficients (0 for the zero polynomial).
    pub fn content(&self) -> BigInt {
        self.coeffs
            .iter()
            .fold(BigInt::zero(), |acc, c| acc.gcd(c))
    }

    /// Primitive part with a positive leading coefficient.
    pub fn primitive_part(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut c = self.content();
        if self.sign_at_pos_inf() < 0 {
            c = -c;
        }
        self.div_scalar(&c).expect("content divides every coefficient")
    }

    /// Pseudo-remainder: `lc(b)^(deg a - deg b + 1) · a mod b`.
    pub fn pseudo_rem(&self, b: &Self) -> Self {
        let db = b.degree().expect("pseudo-division by the zero polynomial");
        let Some(da) = self.degree() else { return Self::zero() };
        if da < db {
            return self.clone();
        }
        let lb = b.leading().unwrap().clone();
        let mut r = self.clone();
        let mut e = da - db + 1;
        while let Some(dr) = r.degree() {
            if dr < db {
                break;
            }
            let lr = r.leading().unwrap().clone();
            r = r.scale(&lb).sub(&b.mul(&Self::monomial(lr, dr - db)));
            e -= 1;
        }
        r.scale(&num_traits::pow(lb, e))
    }

    /// Exact quotient `self / b` over the integers; `None` when `b` does not
    /// divide `self` in `Z[x]`.
    pub fn exact_div(&self, b: &Self) -> Option<Self> {
        let db = b.degree()?;
        let Some(da) = self.degree() else { return Some(Self::zero()) };
        if da < db {
            return None;
        }
        let lb = b.leading().unwrap();
        let mut r = self.clone();
        let mut q = vec![BigInt::zero(); da - db + 1];
        while let Some(dr) = r.degree() {
            if dr < db {
                return None;
            }
            let (c, rem) = r.leading().unwrap().div_rem(lb);
            if !rem.is_zero() {
                return None;
            }
            r = r.sub(&b.mul(&Self::monomial(c.clone(), dr - db)));
            q[dr - db] = c;
        }
        Some(Self::new(q))
    }

    /// Primitive gcd with positive leading coefficient, computed with the
    /// subresultant pseudo-remainder sequence. `gcd(0, 0) = 0`.
    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = if self.degree() >= other.degree() {
            (self.primitive_part(), other.primitive_part())
        } else {
            (other.primitive_part(), self.primitive_part())
        };
        if b.is_zero() {
            return a;
        }
        let mut g = BigInt::one();
        let mut h = BigInt::one();
        loop {
            let delta = a.degree().unwrap() - b.degree().unwrap();
            let r = a.pseudo_rem(&b);
            if r.is_zero() {
                return b.primitive_part();
            }
            if r.degree() == Some(0) {
                return Self::one();
            }
            a = b;
            let divisor = &g * num_traits::pow(h.clone(), delta);
            b = r
                .div_scalar(&divisor)
                .expect("subresultant division is exact");
            g = a.leading().unwrap().clone();
            // h ← g^δ / h^(δ-1)
            h = match delta {
                0 => h,
                d => {
                    let num = num_traits::pow(g.clone(), d);
                    let den = num_traits::pow(h, d - 1);
                    num / den
                }
            };
        }
    }

    /// Square-free decomposition by Yun's algorithm: returns `(f_i, m_i)` with
    /// each `f_i` primitive, square-free, pairwise coprime and with positive
    /// leading coefficient, such that `p = c · Π f_i^{m_i}` for the signed
    /// content `c` of `p`.
    pub fn square_free_decomposition(&self) -> Vec<(IntPolynomial, usize)> {
        let f = self.primitive_part();
        if f.is_constant() {
            return Vec::new();
        }
        let df = f.derivative();
        let a0 = f.gcd(&df);
        let mut b = f.exact_div(&a0).expect("gcd divides f");
        let c = df.exact_div(&a0).expect("gcd divides f'");
        let mut d = c.sub(&b.derivative());
        let mut out = Vec::new();
        let mut mult = 1;
        while !b.is_constant() {
            let a = b.gcd(&d);
            let next_b = b.exact_div(&a).expect("gcd divides b");
            let c = d.exact_div(&a).expect("gcd divides d");
            if !a.is_constant() {
                out.push((a, mult));
            }
            d = c.sub(&next_b.derivative());
            b = next_b;
            mult += 1;
        }
        out
    }

    /// All integer roots, ascending.
    ///
    /// The real roots are isolated by bisecting the root bound on integer
    /// endpoints with a Sturm chain of the square-free part; every unit
    /// interval `[z, z + 1)` that holds a root is checked by evaluating at `z`.
    /// This avoids factoring the constant term, which can be huge.
    pub fn integer_roots(&self) -> Vec<BigInt> {
        if self.degree().unwrap_or(0) == 0 {
            return Vec::new();
        }
        let sf = self.exact_div(&self.gcd(&self.derivative())).expect("gcd divides p");
        let chain = SturmChain::new(&sf);
        let below = |z: &BigInt| chain.count_below(&BigRational::from_integer(z.clone()));
        let b = self.root_bound() + 1u32;
        let mut roots = Vec::new();
        let mut stack = vec![(-b.clone(), b + 1u32)];
        while let Some((lo, hi)) = stack.pop() {
            if below(&hi) == below(&lo) {
                continue;
            }
            if &hi - &lo == BigInt::one() {
                if sf.eval(&lo).is_zero() {
                    roots.push(lo);
                }
                continue;
            }
            let mid = (&lo + &hi).div_floor(&BigInt::from(2));
            stack.push((lo, mid.clone()));
            stack.push((mid, hi));
        }
        roots.sort();
        roots
    }

    /// An integer `B` with `|r| ≤ B` for every complex root `r`.
    ///
    /// Uses `|r| ≤ 2·max_k |a_{d-k} / a_d|^{1/k}` with `|a_d| ≥ 1`.
    pub fn root_bound(&self) -> BigInt {
        let Some(deg) = self.degree() else { return BigInt::zero() };
        let lead = self.coeffs[deg].abs();
        let mut best = BigInt::zero();
        for k in 1..=deg {
            let a = self.coeffs[deg - k].abs();
            if a.is_zero() {
                continue;
            }
            // ceil(|a| / |lead|) bounds the ratio; the k-th root is rounded up.
            let ratio = (&a + &lead - 1u32) / &lead;
            let r = ratio.nth_root(k as u32) + 1u32;
            if r > best {
                best = r;
            }
        }
        best * 2u32
    }
}

pub(crate) fn sign_of(x: &BigInt) -> i8 {
    if x.is_positive() {
        1
    } else if x.is_negative() {
        -1
    } else {
        0
    }
}

impl fmt::Debug for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let abs = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            let show_coeff = i == 0 || !abs.is_one();
            if show_coeff {
                write!(f, "{abs}")?;
            }
            match i {
                0 => {}
                1 => write!(f, "x")?,
                _ => write!(f, "x^{i}")?,
            }
        }
        Ok(())
    }
}
