//! Exact ordered fields: the rationals and real quadratic extensions `Q(√d)`.

use std::cmp::Ordering;
use std::fmt;
use std::hash::Hash;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type Rational = BigRational;

/// An exact, totally ordered field.
///
/// Everything downstream (matrices, polynomials, forms) is generic over this
/// trait, so that signs and ranks are decided without any tolerance.
pub trait Scalar:
    Clone
    + fmt::Debug
    + fmt::Display
    + Eq
    + Ord
    + Hash
    + Send
    + Sync
    + Zero
    + One
    + Neg<Output = Self>
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + AddAssign
    + SubAssign
    + MulAssign
    + for<'a> Add<&'a Self, Output = Self>
    + for<'a> Sub<&'a Self, Output = Self>
    + for<'a> Mul<&'a Self, Output = Self>
    + 'static
{
    fn from_rational(q: Rational) -> Self;

    fn from_i64(n: i64) -> Self {
        Self::from_rational(Rational::from_integer(BigInt::from(n)))
    }

    fn from_frac(n: i64, d: i64) -> Self {
        Self::from_rational(Rational::new(BigInt::from(n), BigInt::from(d)))
    }

    fn inv(&self) -> Self;

    /// A square root inside the field, if one exists (the nonnegative one).
    fn sqrt_exact(&self) -> Option<Self>;

    /// `√d` for the adjoined radical, `None` for the rationals.
    fn radical() -> Option<Self>;

    /// The `d` of `Q(√d)`, 0 for the rationals.
    fn radicand() -> i64;

    fn to_f64(&self) -> f64;

    /// Rational part and `√d` part.
    fn parts(&self) -> (Rational, Rational);

    fn sign(&self) -> i8 {
        match self.cmp(&Self::zero()) {
            Ordering::Less => -1,
            Ordering::Equal => 0,
            Ordering::Greater => 1,
        }
    }

    fn field_name() -> String {
        match Self::radicand() {
            0 => "Q".to_string(),
            d => format!("Q(sqrt{d})"),
        }
    }
}

fn rational_sqrt(q: &Rational) -> Option<Rational> {
    if q.is_negative() {
        return None;
    }
    let n = q.numer();
    let d = q.denom();
    let rn = n.sqrt();
    let rd = d.sqrt();
    if &(&rn * &rn) == n && &(&rd * &rd) == d {
        Some(Rational::new(rn, rd))
    } else {
        None
    }
}

fn rational_to_f64(q: &Rational) -> f64 {
    ToPrimitive::to_f64(q).unwrap_or_else(|| {
        // huge numerators: scale down both sides
        let shift = q.numer().bits().max(q.denom().bits()).saturating_sub(1000);
        let n = ToPrimitive::to_f64(&(q.numer() >> shift)).unwrap_or(f64::NAN);
        let d = ToPrimitive::to_f64(&(q.denom() >> shift)).unwrap_or(f64::NAN);
        n / d
    })
}

impl Scalar for Rational {
    fn from_rational(q: Rational) -> Self {
        q
    }

    fn inv(&self) -> Self {
        self.recip()
    }

    fn sqrt_exact(&self) -> Option<Self> {
        rational_sqrt(self)
    }

    fn radical() -> Option<Self> {
        None
    }

    fn radicand() -> i64 {
        0
    }

    fn to_f64(&self) -> f64 {
        rational_to_f64(self)
    }

    fn parts(&self) -> (Rational, Rational) {
        (self.clone(), Rational::zero())
    }
}

/// `a + b√D` with rational `a`, `b`; `D` is a square-free positive integer.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct QuadExt<const D: i64> {
    pub a: Rational,
    pub b: Rational,
}

pub type Q2 = QuadExt<2>;
pub type Q3 = QuadExt<3>;
pub type Q5 = QuadExt<5>;

impl<const D: i64> QuadExt<D> {
    pub fn new(a: Rational, b: Rational) -> Self {
        QuadExt { a, b }
    }

    pub fn conj(&self) -> Self {
        QuadExt { a: self.a.clone(), b: -self.b.clone() }
    }

    pub fn norm(&self) -> Rational {
        &self.a * &self.a - &self.b * &self.b * Rational::from_integer(BigInt::from(D))
    }
}

impl<const D: i64> Zero for QuadExt<D> {
    fn zero() -> Self {
        QuadExt { a: Rational::zero(), b: Rational::zero() }
    }
    fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }
}

impl<const D: i64> One for QuadExt<D> {
    fn one() -> Self {
        QuadExt { a: Rational::one(), b: Rational::zero() }
    }
}

impl<const D: i64> Add for QuadExt<D> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        QuadExt { a: self.a + o.a, b: self.b + o.b }
    }
}

impl<const D: i64> Add<&QuadExt<D>> for QuadExt<D> {
    type Output = Self;
    fn add(self, o: &Self) -> Self {
        QuadExt { a: self.a + &o.a, b: self.b + &o.b }
    }
}

impl<const D: i64> Sub for QuadExt<D> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        QuadExt { a: self.a - o.a, b: self.b - o.b }
    }
}

impl<const D: i64> Sub<&QuadExt<D>> for QuadExt<D> {
    type Output = Self;
    fn sub(self, o: &Self) -> Self {
        QuadExt { a: self.a - &o.a, b: self.b - &o.b }
    }
}

impl<const D: i64> Mul<&QuadExt<D>> for QuadExt<D> {
    type Output = Self;
    fn mul(self, o: &Self) -> Self {
        if self.b.is_zero() && o.b.is_zero() {
            return QuadExt { a: self.a * &o.a, b: Rational::zero() };
        }
        let d = Rational::from_integer(BigInt::from(D));
        let a = &self.a * &o.a + &self.b * &o.b * d;
        let b = &self.a * &o.b + &self.b * &o.a;
        QuadExt { a, b }
    }
}

impl<const D: i64> Mul for QuadExt<D> {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        self * &o
    }
}

impl<const D: i64> Div for QuadExt<D> {
    type Output = Self;
    fn div(self, o: Self) -> Self {
        self * &o.inv()
    }
}

impl<const D: i64> Neg for QuadExt<D> {
    type Output = Self;
    fn neg(self) -> Self {
        QuadExt { a: -self.a, b: -self.b }
    }
}

impl<const D: i64> AddAssign for QuadExt<D> {
    fn add_assign(&mut self, o: Self) {
        self.a += o.a;
        self.b += o.b;
    }
}

impl<const D: i64> SubAssign for QuadExt<D> {
    fn sub_assign(&mut self, o: Self) {
        self.a -= o.a;
        self.b -= o.b;
    }
}

impl<const D: i64> MulAssign for QuadExt<D> {
    fn mul_assign(&mut self, o: Self) {
        let lhs = std::mem::replace(self, Self::zero());
        *self = lhs * &o;
    }
}

fn sign_of<const D: i64>(x: &QuadExt<D>) -> Ordering {
    let sa = x.a.cmp(&Rational::zero());
    let sb = x.b.cmp(&Rational::zero());
    if sb == Ordering::Equal {
        return sa;
    }
    if sa == Ordering::Equal || sa == sb {
        return sb;
    }
    // opposite signs: the larger of a^2 and d b^2 wins
    let a2 = &x.a * &x.a;
    let db2 = &x.b * &x.b * Rational::from_integer(BigInt::from(D));
    match a2.cmp(&db2) {
        Ordering::Greater => sa,
        Ordering::Less => sb,
        Ordering::Equal => Ordering::Equal,
    }
}

impl<const D: i64> Ord for QuadExt<D> {
    fn cmp(&self, o: &Self) -> Ordering {
        sign_of(&(self.clone() - o))
    }
}

impl<const D: i64> PartialOrd for QuadExt<D> {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

impl<const D: i64> fmt::Debug for QuadExt<D> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl<const D: i64> fmt::Display for QuadExt<D> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            write!(f, "{}", self.a)
        } else if self.a.is_zero() {
            write!(f, "{}*sqrt{}", self.b, D)
        } else {
            write!(f, "{}+{}*sqrt{}", self.a, self.b, D)
        }
    }
}

impl<const D: i64> Scalar for QuadExt<D> {
    fn from_rational(q: Rational) -> Self {
        QuadExt { a: q, b: Rational::zero() }
    }

    fn inv(&self) -> Self {
        assert!(!self.is_zero(), "inverse of zero");
        let n = self.norm();
        QuadExt { a: &self.a / &n, b: -(&self.b / &n) }
    }

    fn sqrt_exact(&self) -> Option<Self> {
        if self.is_negative_elem() {
            return None;
        }
        let d = Rational::from_integer(BigInt::from(D));
        if self.b.is_zero() {
            if let Some(r) = rational_sqrt(&self.a) {
                return Some(Self::from_rational(r));
            }
            // a = d q^2 gives q sqrt(d)
            return rational_sqrt(&(&self.a / &d)).map(|q| QuadExt { a: Rational::zero(), b: q });
        }
        // (x + y sqrt d)^2 = a + b sqrt d  =>  x^2 = (a +- sqrt(norm)) / 2
        let n = rational_sqrt(&self.norm())?;
        let two = Rational::from_integer(BigInt::from(2));
        for cand in [(&self.a + &n) / &two, (&self.a - &n) / &two] {
            if let Some(x) = rational_sqrt(&cand) {
                if x.is_zero() {
                    continue;
                }
                let y = &self.b / (&two * &x);
                let r = QuadExt { a: x, b: y };
                let r = if r.is_negative_elem() { -r } else { r };
                if r.clone() * &r == *self {
                    return Some(r);
                }
            }
        }
        None
    }

    fn radical() -> Option<Self> {
        Some(QuadExt { a: Rational::zero(), b: Rational::one() })
    }

    fn radicand() -> i64 {
        D
    }

    fn to_f64(&self) -> f64 {
        rational_to_f64(&self.a) + rational_to_f64(&self.b) * (D as f64).sqrt()
    }

    fn parts(&self) -> (Rational, Rational) {
        (self.a.clone(), self.b.clone())
    }
}

impl<const D: i64> QuadExt<D> {
    fn is_negative_elem(&self) -> bool {
        sign_of(self) == Ordering::Less
    }
}

/// Render a rational compactly for reports.
pub fn rational_string(q: &Rational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// `(a, b)` rendered as `a+b*sqrt(d)` for reports.
pub fn scalar_string<F: Scalar>(x: &F) -> String {
    let (a, b) = x.parts();
    if b.is_zero() {
        return rational_string(&a);
    }
    let d = F::radicand();
    if a.is_zero() {
        return format!("{}*sqrt({d})", rational_string(&b));
    }
    let op = if b.is_negative() { "-" } else { "+" };
    format!("{}{}{}*sqrt({d})", rational_string(&a), op, rational_string(&b.abs()))
}

fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            (!d.is_zero()).then(|| Rational::new(n, d))
        }
        None => s.parse::<BigInt>().ok().map(Rational::from_integer),
    }
}

/// Parse `a`, `a/b`, `b*sqrt(d)` and `a+b*sqrt(d)` (the format of
/// [`scalar_string`]). A radical other than the field's is rejected.
pub fn parse_scalar<F: Scalar>(text: &str) -> Option<F> {
    let t: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    let Some(root_at) = t.find("sqrt(") else {
        return parse_rational(&t).map(F::from_rational);
    };
    let close = t[root_at..].find(')')? + root_at;
    if close + 1 != t.len() {
        return None;
    }
    let d: i64 = t[root_at + 5..close].parse().ok()?;
    let radical = F::radical().filter(|_| F::radicand() == d)?;
    let head = &t[..root_at];
    let head = head.strip_suffix('*').unwrap_or(head);
    // split the rational part from the coefficient at the last sign not in front
    let split = head.char_indices().skip(1).filter(|&(_, c)| c == '+' || c == '-').map(|(i, _)| i).last();
    let (a, b) = match split {
        Some(i) => (parse_rational(&head[..i])?, &head[i..]),
        None => (Rational::zero(), head),
    };
    let b = match b {
        "" | "+" => Rational::one(),
        "-" => -Rational::one(),
        b => parse_rational(b.strip_prefix('+').unwrap_or(b))?,
    };
    Some(F::from_rational(a) + radical * F::from_rational(b))
}
