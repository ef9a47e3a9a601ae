//! Working-precision numerics: arbitrary-precision binary floats, the complex
//! type built on them, and exact-rational conversions.
//!
//! Every floating value in this crate carries an explicit precision in bits.
//! Operations inherit the larger operand precision, so values constructed
//! through [`Ctx`] stay at the context precision throughout a computation.

use dashu_base::{EstimatedLog2, Sign};
use dashu_float::{round::mode::HalfEven, FBig};
use dashu_int::{IBig, UBig};
use dashu_ratio::RBig;
use rand_core::RngCore;
use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

/// Arbitrary-precision binary float with round-half-to-even.
pub type Real = FBig<HalfEven, 2>;

/// Zero test for [`Real`] (value comparison, precision-independent).
pub trait RealExt {
    fn is_zero(&self) -> bool;
}

impl RealExt for Real {
    fn is_zero(&self) -> bool {
        *self == Real::ZERO
    }
}

/// Precision context: constructs values at a fixed precision in bits.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Ctx {
    bits: usize,
}

impl Ctx {
    pub fn new(bits: usize) -> Self {
        assert!(bits >= 2, "precision must be at least 2 bits");
        Ctx { bits }
    }

    pub fn bits(&self) -> usize {
        self.bits
    }

    pub fn zero(&self) -> Real {
        Real::ZERO.with_precision(self.bits).value()
    }

    pub fn one(&self) -> Real {
        Real::ONE.with_precision(self.bits).value()
    }

    pub fn from_i64(&self, v: i64) -> Real {
        Real::from(v).with_precision(self.bits).value()
    }

    pub fn from_f64(&self, v: f64) -> Real {
        Real::try_from(v)
            .expect("finite f64")
            .with_precision(self.bits)
            .value()
    }

    /// Round a rational to this precision.
    pub fn from_rbig(&self, r: &RBig) -> Real {
        r.to_float(self.bits).value()
    }

    pub fn real(&self, v: Real) -> Real {
        v.with_precision(self.bits).value()
    }

    /// 2^-(bits-k): unit roundoff scaled by 2^k.
    pub fn epsilon_scaled(&self, k: i64) -> Real {
        let exp = k - self.bits as i64;
        pow2(exp, self.bits)
    }

    /// Uniform draw from [1, 2) filling the full mantissa.
    pub fn random_unit_interval(&self, rng: &mut dyn RngCore) -> Real {
        let words = self.bits.div_ceil(64);
        let mut num = UBig::ONE;
        for _ in 0..words {
            num <<= 64;
            num += UBig::from(rng.next_u64());
        }
        let den = UBig::ONE << (64 * words);
        self.from_rbig(&RBig::from_parts(IBig::from(num), den))
    }
}

/// 2^exp at the given precision.
pub fn pow2(exp: i64, bits: usize) -> Real {
    let one = Real::ONE.with_precision(bits).value();
    if exp >= 0 {
        one << exp as isize
    } else {
        one >> (-exp) as isize
    }
}

/// Exact value of a dyadic float as a rational.
pub fn real_to_rbig(x: &Real) -> RBig {
    let (signif, exp) = x.repr().clone().into_parts();
    if exp >= 0 {
        RBig::from(signif << exp as usize)
    } else {
        RBig::from_parts(signif, UBig::ONE << (-exp) as usize)
    }
}

/// ceil(log2(x)) for positive rationals, exact.
pub fn ceil_log2_rbig(x: &RBig) -> i64 {
    assert!(x > &RBig::ZERO);
    let (lo, hi) = x.log2_bounds();
    let lo = lo.floor() as i64 - 1;
    let hi = hi.ceil() as i64 + 1;
    // Resolve the estimate by exact comparison with powers of two.
    let mut k = lo;
    while k < hi {
        // x <= 2^k ?
        let p = pow2_rbig(k);
        if x <= &p {
            return k;
        }
        k += 1;
    }
    hi
}

fn pow2_rbig(k: i64) -> RBig {
    if k >= 0 {
        RBig::from(IBig::from(UBig::ONE << k as usize))
    } else {
        RBig::from_parts(IBig::ONE, UBig::ONE << (-k) as usize)
    }
}

/// Parse a plain decimal string (optional sign, optional fraction, optional
/// `e`/`E` exponent) into an exact rational.
pub fn parse_decimal(text: &str) -> Option<RBig> {
    let s = text.trim();
    let (sign, rest) = match s.strip_prefix('-') {
        Some(r) => (Sign::Negative, r),
        None => (Sign::Positive, s.strip_prefix('+').unwrap_or(s)),
    };
    let (mantissa, exp_part) = match rest.find(['e', 'E']) {
        Some(i) => (&rest[..i], Some(&rest[i + 1..])),
        None => (rest, None),
    };
    let (int_part, frac_part) = match mantissa.find('.') {
        Some(i) => (&mantissa[..i], &mantissa[i + 1..]),
        None => (mantissa, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.chars().all(|c| c.is_ascii_digit())
        || !frac_part.chars().all(|c| c.is_ascii_digit())
    {
        return None;
    }
    let digits = format!("{int_part}{frac_part}");
    let num: UBig = if digits.is_empty() {
        UBig::ZERO
    } else {
        digits.parse().ok()?
    };
    let mut value = RBig::from_parts(
        IBig::from_parts(sign, num),
        UBig::from(10u8).pow(frac_part.len()),
    );
    if let Some(e) = exp_part {
        let e: i64 = e.parse().ok()?;
        let ten = RBig::from(10);
        if e >= 0 {
            value *= ten.pow(e as isize);
        } else {
            value /= ten.pow((-e) as isize);
        }
    }
    Some(value)
}

/// Complex number at working precision.
#[derive(Debug, Clone, PartialEq)]
pub struct Complex {
    pub re: Real,
    pub im: Real,
}

impl Complex {
    pub fn new(re: Real, im: Real) -> Self {
        Complex { re, im }
    }

    pub fn from_real(re: Real) -> Self {
        let im = Real::ZERO.with_precision(re.precision()).value();
        Complex { re, im }
    }

    pub fn zero(ctx: &Ctx) -> Self {
        Complex::new(ctx.zero(), ctx.zero())
    }

    pub fn one(ctx: &Ctx) -> Self {
        Complex::new(ctx.one(), ctx.zero())
    }

    pub fn i(ctx: &Ctx) -> Self {
        Complex::new(ctx.zero(), ctx.one())
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        Complex::new(self.re.clone(), -self.im.clone())
    }

    pub fn norm_sqr(&self) -> Real {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn abs(&self) -> Real {
        let n = self.norm_sqr();
        if n.is_zero() {
            // sqrt(exact 0) would lose the precision tag
            return Real::ZERO
                .with_precision(self.re.precision().max(1))
                .value();
        }
        n.sqrt()
    }

    pub fn scale(&self, s: &Real) -> Self {
        Complex::new(&self.re * s, &self.im * s)
    }

    pub fn div(&self, rhs: &Complex) -> Self {
        let d = rhs.norm_sqr();
        let re = (&self.re * &rhs.re + &self.im * &rhs.im) / &d;
        let im = (&self.im * &rhs.re - &self.re * &rhs.im) / &d;
        Complex::new(re, im)
    }

    pub fn recip(&self) -> Self {
        let d = self.norm_sqr();
        Complex::new(&self.re / &d, -(&self.im / &d))
    }

    /// Nonnegative integer power by repeated squaring.
    pub fn powu(&self, mut e: u32) -> Self {
        let prec = self.re.precision().max(2);
        let ctx = Ctx::new(prec.max(2));
        let mut base = self.clone();
        let mut acc = Complex::one(&ctx);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn to_f64_pair(&self) -> (f64, f64) {
        (self.re.to_f64().value(), self.im.to_f64().value())
    }
}

impl fmt::Display for Complex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (re, im) = self.to_f64_pair();
        if im >= 0.0 {
            write!(f, "{re}+{im}i")
        } else {
            write!(f, "{re}{im}i")
        }
    }
}

impl Add for &Complex {
    type Output = Complex;
    fn add(self, rhs: &Complex) -> Complex {
        Complex::new(&self.re + &rhs.re, &self.im + &rhs.im)
    }
}

impl Sub for &Complex {
    type Output = Complex;
    fn sub(self, rhs: &Complex) -> Complex {
        Complex::new(&self.re - &rhs.re, &self.im - &rhs.im)
    }
}

impl Mul for &Complex {
    type Output = Complex;
    fn mul(self, rhs: &Complex) -> Complex {
        let re = &self.re * &rhs.re - &self.im * &rhs.im;
        let im = &self.re * &rhs.im + &self.im * &rhs.re;
        Complex::new(re, im)
    }
}

impl Neg for &Complex {
    type Output = Complex;
    fn neg(self) -> Complex {
        Complex::new(-self.re.clone(), -self.im.clone())
    }
}

impl AddAssign<&Complex> for Complex {
    fn add_assign(&mut self, rhs: &Complex) {
        self.re += &rhs.re;
        self.im += &rhs.im;
    }
}

impl SubAssign<&Complex> for Complex {
    fn sub_assign(&mut self, rhs: &Complex) {
        self.re -= &rhs.re;
        self.im -= &rhs.im;
    }
}

/// Total order on reals (used for deterministic max/sort of magnitudes).
pub fn cmp_real(a: &Real, b: &Real) -> Ordering {
    a.partial_cmp(b).expect("reals are totally ordered")
}

/// Deterministic splitmix64 stream derivation for per-task RNG seeds.
pub fn derive_seed(seed: u64, index: u64) -> u64 {
    let mut z = seed ^ index.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}
