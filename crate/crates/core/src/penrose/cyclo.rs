//! The cyclotomic plane: rational combinations of the fifth roots of unity.
//!
//! A point is `sum c_j zeta^j` with rational `c_j` and `zeta = exp(2 pi i/5)`.
//! Because `1 + zeta + ... + zeta^4 = 0` the tuple is redundant; the canonical
//! form eliminates `c_4`, making equality coefficientwise. The subgroup P of
//! translations is the set of *integer* zero-sum combinations; its coordinate
//! tuple is unique and is the currency of every piece translation.

use num::bigint::BigInt;
use num::{BigRational, ToPrimitive, Zero};
use serde::de::Error as DeError;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{CoreError, Result};
use crate::penrose::q5::Q5;

/// A point of Q(zeta_5), canonicalized so that the `zeta^4` coefficient is 0.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Cyclo {
    c: [BigRational; 5],
}

fn rat(n: i64) -> BigRational {
    BigRational::from(BigInt::from(n))
}

impl Cyclo {
    /// Canonicalize by subtracting `c_4 * (1 + zeta + ... + zeta^4) = 0`.
    pub fn new(c: [BigRational; 5]) -> Self {
        let last = c[4].clone();
        let mut out = c;
        for x in out.iter_mut() {
            *x -= &last;
        }
        Cyclo { c: out }
    }

    pub fn zero() -> Self {
        Cyclo::new(Default::default())
    }

    pub fn one() -> Self {
        Cyclo::from_int(1)
    }

    pub fn from_int(n: i64) -> Self {
        let mut c: [BigRational; 5] = Default::default();
        c[0] = rat(n);
        Cyclo::new(c)
    }

    pub fn zeta(j: usize) -> Self {
        let mut c: [BigRational; 5] = Default::default();
        c[j % 5] = rat(1);
        Cyclo::new(c)
    }

    /// `sum n_j zeta^j` from an integer tuple (not necessarily zero-sum).
    pub fn from_coords(n: &[i64; 5]) -> Self {
        let mut c: [BigRational; 5] = Default::default();
        for (x, v) in c.iter_mut().zip(n) {
            *x = rat(*v);
        }
        Cyclo::new(c)
    }

    pub fn coeffs(&self) -> &[BigRational; 5] {
        &self.c
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(|x| x.is_zero())
    }

    pub fn add(&self, o: &Cyclo) -> Cyclo {
        let mut c: [BigRational; 5] = Default::default();
        for j in 0..5 {
            c[j] = &self.c[j] + &o.c[j];
        }
        Cyclo { c }
    }

    pub fn sub(&self, o: &Cyclo) -> Cyclo {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Cyclo {
        let mut c: [BigRational; 5] = Default::default();
        for j in 0..5 {
            c[j] = -self.c[j].clone();
        }
        Cyclo { c }
    }

    pub fn scale(&self, t: &BigRational) -> Cyclo {
        let mut c: [BigRational; 5] = Default::default();
        for j in 0..5 {
            c[j] = &self.c[j] * t;
        }
        Cyclo { c }
    }

    /// Product in Z[zeta]: convolution of exponents mod 5, then recanonicalize.
    pub fn mul(&self, o: &Cyclo) -> Cyclo {
        let mut c: [BigRational; 5] = Default::default();
        for a in 0..5 {
            if self.c[a].is_zero() {
                continue;
            }
            for b in 0..5 {
                if o.c[b].is_zero() {
                    continue;
                }
                c[(a + b) % 5] += &self.c[a] * &o.c[b];
            }
        }
        Cyclo::new(c)
    }

    /// Complex conjugation `zeta^j -> zeta^(5-j)`.
    pub fn conj(&self) -> Cyclo {
        let mut c: [BigRational; 5] = Default::default();
        for j in 0..5 {
            c[(5 - j) % 5] = self.c[j].clone();
        }
        Cyclo::new(c)
    }

    /// Squared modulus as an exact element of Q(sqrt5).
    pub fn norm2(&self) -> Q5 {
        let (re, im) = self.re_im();
        let s = sin72_sq();
        &(&re * &re) + &(&s * &(&im * &im))
    }

    /// Exact planar coordinates `(X, Y)`: the real part in Q(sqrt5) and the
    /// imaginary part *in units of sin 72deg* (so that it, too, lies in
    /// Q(sqrt5)). `x = X + i Y sin72`.
    pub fn re_im(&self) -> (Q5, Q5) {
        // cos72 = (sqrt5-1)/4, cos144 = -(sqrt5+1)/4
        let c1 = Q5::parts(-1, 1, 4);
        let c2 = Q5::parts(-1, -1, 4);
        // sin144/sin72 = (sqrt5-1)/2
        let s2 = Q5::parts(-1, 1, 2);
        let q = |j: usize| Q5::from_rat(self.c[j].clone());
        let re = &(&q(0) + &(&(&q(1) + &q(4)) * &c1)) + &(&(&q(2) + &q(3)) * &c2);
        let im = &(&q(1) - &q(4)) + &(&(&q(2) - &q(3)) * &s2);
        (re, im)
    }

    /// The unique zero-sum integer tuple `n` with `self = sum n_j zeta^j`,
    /// i.e. membership in the translation subgroup P.
    pub fn p_coords(&self) -> Result<[i64; 5]> {
        let mut n = [0i64; 5];
        let mut sum = BigRational::zero();
        for j in 0..4 {
            if !self.c[j].is_integer() {
                return Err(CoreError::NotInP(format!(
                    "coefficient of zeta^{j} is not an integer: {}",
                    self.c[j]
                )));
            }
            sum += &self.c[j];
        }
        let five = rat(5);
        let u = &sum / &five;
        if !u.is_integer() {
            return Err(CoreError::NotInP(format!(
                "coefficient sum {sum} is not divisible by 5"
            )));
        }
        for j in 0..4 {
            let k = &self.c[j] - &u;
            n[j] = k
                .to_integer()
                .to_i64()
                .ok_or_else(|| CoreError::BadInput("P-coordinate exceeds i64".into()))?;
        }
        n[4] = -(&u)
            .to_integer()
            .to_i64()
            .ok_or_else(|| CoreError::BadInput("P-coordinate exceeds i64".into()))?;
        debug_assert_eq!(n.iter().sum::<i64>(), 0);
        Ok(n)
    }

    pub fn in_p(&self) -> bool {
        self.p_coords().is_ok()
    }

    pub fn approx(&self) -> (f64, f64) {
        let (re, im) = self.re_im();
        (re.approx(), im.approx() * SIN72)
    }
}

/// sin^2(72deg) = (10 + 2 sqrt5)/16, the conversion factor between the stored
/// imaginary unit and true length.
pub fn sin72_sq() -> Q5 {
    Q5::parts(10, 2, 16)
}

/// Inverse of `re_im`: the unique cyclotomic point with the given exact
/// coordinates. The coordinate map is a rational-linear bijection between
/// canonical tuples and pairs `(a + b sqrt5, a' + b' sqrt5)`.
pub fn cyclo_from_xy(x: &Q5, y: &Q5) -> Cyclo {
    let two = rat(2);
    let four = rat(4);
    let c1 = &y.a + &y.b;
    let s23 = &c1 - &(&four * &x.b); // c2 + c3
    let d23 = &two * &y.b; // c2 - c3
    let c2 = (&s23 + &d23) / &two;
    let c3 = (&s23 - &d23) / &two;
    let c0 = &x.a + &(&(&c1 + &s23) / &four);
    Cyclo::new([c0, c1, c2, c3, BigRational::zero()])
}

pub const SIN72: f64 = 0.9510565162951535;

impl Serialize for Cyclo {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let strs: Vec<String> = self.c.iter().map(|x| x.to_string()).collect();
        strs.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Cyclo {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let strs = <Vec<String>>::deserialize(d)?;
        if strs.len() != 5 {
            return Err(D::Error::custom(format!(
                "expected 5 rational strings, got {}",
                strs.len()
            )));
        }
        let mut c: [BigRational; 5] = Default::default();
        for (x, s) in c.iter_mut().zip(&strs) {
            *x = s
                .parse::<BigRational>()
                .map_err(|e| D::Error::custom(format!("bad rational {s:?}: {e}")))?;
        }
        Ok(Cyclo::new(c))
    }
}
