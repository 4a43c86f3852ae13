//! Exact arithmetic in the real quadratic field Q(sqrt 5).
//!
//! Every sign decision in the pentagonal geometry — point versus line, radius
//! bounds, polygon clipping — reduces to the sign of some `a + b*sqrt5` with
//! rational `a, b`, which is decidable by comparing `a^2` against `5 b^2`.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num::bigint::BigInt;
use num::{BigRational, One, Signed, ToPrimitive, Zero};
use serde::de::Error as DeError;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// `a + b*sqrt5` with rational coefficients.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Q5 {
    pub a: BigRational,
    pub b: BigRational,
}

fn rat_i64(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

impl Q5 {
    pub fn new(a: BigRational, b: BigRational) -> Self {
        Q5 { a, b }
    }

    pub fn from_int(n: i64) -> Self {
        Q5::new(rat_i64(n, 1), BigRational::zero())
    }

    pub fn from_rat(a: BigRational) -> Self {
        Q5::new(a, BigRational::zero())
    }

    /// `(p + q*sqrt5) / d` — the shape all pentagon constants take.
    pub fn parts(p: i64, q: i64, d: i64) -> Self {
        Q5::new(rat_i64(p, d), rat_i64(q, d))
    }

    pub fn zero() -> Self {
        Q5::from_int(0)
    }

    pub fn one() -> Self {
        Q5::from_int(1)
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    /// Sign of the real number, in {-1, 0, 1}.
    ///
    /// Mixed-sign case: `a` and `-b*sqrt5` compete; since sqrt5 is irrational,
    /// `a^2 == 5 b^2` with `b != 0` is impossible over Q, so the comparison is
    /// always strict.
    pub fn sign(&self) -> i8 {
        let (sa, sb) = (q_sign(&self.a), q_sign(&self.b));
        match (sa, sb) {
            (0, 0) => 0,
            _ if sa >= 0 && sb >= 0 => 1,
            _ if sa <= 0 && sb <= 0 => -1,
            _ => {
                let a2 = &self.a * &self.a;
                let b2 = &self.b * &self.b * rat_i64(5, 1);
                debug_assert!(a2 != b2, "sqrt5 cannot be rational");
                if a2 > b2 {
                    sa
                } else {
                    sb
                }
            }
        }
    }

    pub fn is_positive(&self) -> bool {
        self.sign() > 0
    }

    /// Galois conjugate `a - b*sqrt5`; `x * x.conj()` is the rational norm.
    pub fn conj(&self) -> Self {
        Q5::new(self.a.clone(), -self.b.clone())
    }

    pub fn inverse(&self) -> Self {
        let n = &self.a * &self.a - &self.b * &self.b * rat_i64(5, 1);
        assert!(!n.is_zero(), "division by zero in Q(sqrt5)");
        Q5::new(&self.a / &n, -&self.b / &n)
    }

    /// Exact floor. For irrational values (b != 0) a dyadic enclosure of
    /// sqrt5 is refined until both ends agree on the integer part; this
    /// terminates because the value is never an integer then.
    pub fn floor_big(&self) -> BigInt {
        if self.b.is_zero() {
            return self.a.floor().to_integer();
        }
        let mut bits: u32 = 32;
        loop {
            let scale: BigInt = BigInt::one() << bits;
            let lo_num = (BigInt::from(5u32) << (2 * bits)).sqrt();
            let lo = BigRational::new(lo_num.clone(), scale.clone());
            let hi = BigRational::new(lo_num + BigInt::one(), scale);
            let v1 = &self.a + &self.b * &lo;
            let v2 = &self.a + &self.b * &hi;
            let (flo, fhi) = if v1 <= v2 { (v1, v2) } else { (v2, v1) };
            let fl = flo.floor().to_integer();
            if fl == fhi.floor().to_integer() {
                return fl;
            }
            bits *= 2;
        }
    }

    pub fn floor_i64(&self) -> i64 {
        self.floor_big().to_i64().expect("floor out of i64 range")
    }

    /// Float image, for prefilters only; every accepted decision is re-made
    /// exactly.
    pub fn approx(&self) -> f64 {
        self.a.to_f64().unwrap_or(f64::NAN) + self.b.to_f64().unwrap_or(f64::NAN) * 5f64.sqrt()
    }
}

fn q_sign(r: &BigRational) -> i8 {
    if r.is_zero() {
        0
    } else if r.is_positive() {
        1
    } else {
        -1
    }
}

macro_rules! q5_binop {
    ($trait:ident, $fn:ident, |$l:ident, $r:ident| $body:expr) => {
        impl $trait for &Q5 {
            type Output = Q5;
            fn $fn(self, rhs: &Q5) -> Q5 {
                let ($l, $r) = (self, rhs);
                $body
            }
        }
        impl $trait for Q5 {
            type Output = Q5;
            fn $fn(self, rhs: Q5) -> Q5 {
                $trait::$fn(&self, &rhs)
            }
        }
    };
}

q5_binop!(Add, add, |l, r| Q5::new(&l.a + &r.a, &l.b + &r.b));
q5_binop!(Sub, sub, |l, r| Q5::new(&l.a - &r.a, &l.b - &r.b));
q5_binop!(Mul, mul, |l, r| Q5::new(
    &l.a * &r.a + &l.b * &r.b * rat_i64(5, 1),
    &l.a * &r.b + &l.b * &r.a
));
q5_binop!(Div, div, |l, r| l * &r.inverse());

impl Neg for &Q5 {
    type Output = Q5;
    fn neg(self) -> Q5 {
        Q5::new(-self.a.clone(), -self.b.clone())
    }
}

impl Neg for Q5 {
    type Output = Q5;
    fn neg(self) -> Q5 {
        -&self
    }
}

impl fmt::Debug for Q5 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({} + {}*sqrt5)", self.a, self.b)
    }
}

impl Serialize for Q5 {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        (self.a.to_string(), self.b.to_string()).serialize(s)
    }
}

impl<'de> Deserialize<'de> for Q5 {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let (a, b) = <(String, String)>::deserialize(d)?;
        let pa = a
            .parse::<BigRational>()
            .map_err(|e| D::Error::custom(format!("bad rational {a:?}: {e}")))?;
        let pb = b
            .parse::<BigRational>()
            .map_err(|e| D::Error::custom(format!("bad rational {b:?}: {e}")))?;
        Ok(Q5::new(pa, pb))
    }
}
