use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num::{One, Zero};

use super::{ArithError, Poly, Rational};

/// Reduced rational function over Q: `num/den` with gcd(num, den) = 1 and a
/// monic denominator, so structural equality is field equality.
#[derive(Clone, PartialEq, Eq)]
pub struct RatFunc {
    num: Poly,
    den: Poly,
}

impl RatFunc {
    pub fn new(num: Poly, den: Poly) -> Result<Self, ArithError> {
        if den.is_zero() {
            return Err(ArithError::ZeroDenominator);
        }
        if num.is_zero() {
            return Ok(RatFunc { num, den: Poly::one() });
        }
        let g = Poly::gcd(&num, &den).expect("nonzero inputs");
        let mut num = num.exact_div(&g);
        let mut den = den.exact_div(&g);
        let lc = den.leading_coeff().expect("nonzero denominator").recip();
        num = num.scale(&lc);
        den = den.scale(&lc);
        Ok(RatFunc { num, den })
    }

    pub fn from_poly(p: Poly) -> Self {
        RatFunc { num: p, den: Poly::one() }
    }

    pub fn from_rational(c: Rational) -> Self {
        RatFunc::from_poly(Poly::constant(c))
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    pub fn as_poly(&self) -> Option<&Poly> {
        self.is_polynomial().then_some(&self.num)
    }

    /// In reduced form the denominator vanishes exactly at the poles.
    pub fn is_regular_at(&self, a: &Rational) -> bool {
        !self.den.eval(a).is_zero()
    }

    pub fn eval_at(&self, a: &Rational) -> Result<Rational, ArithError> {
        let d = self.den.eval(a);
        if d.is_zero() {
            return Err(ArithError::PoleAtPoint(a.clone()));
        }
        Ok(self.num.eval(a) / d)
    }

    pub fn inv(&self) -> Option<RatFunc> {
        if self.is_zero() {
            return None;
        }
        Some(RatFunc::new(self.den.clone(), self.num.clone()).expect("nonzero numerator"))
    }
}

impl Zero for RatFunc {
    fn zero() -> Self {
        RatFunc::from_poly(Poly::zero())
    }
    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
}

impl One for RatFunc {
    fn one() -> Self {
        RatFunc::from_poly(Poly::one())
    }
    fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }
}

impl<'a> Add for &'a RatFunc {
    type Output = RatFunc;
    fn add(self, rhs: &'a RatFunc) -> RatFunc {
        let num = &(&self.num * &rhs.den) + &(&rhs.num * &self.den);
        RatFunc::new(num, &self.den * &rhs.den).expect("nonzero denominators")
    }
}

impl<'a> Sub for &'a RatFunc {
    type Output = RatFunc;
    fn sub(self, rhs: &'a RatFunc) -> RatFunc {
        let num = &(&self.num * &rhs.den) - &(&rhs.num * &self.den);
        RatFunc::new(num, &self.den * &rhs.den).expect("nonzero denominators")
    }
}

impl<'a> Mul for &'a RatFunc {
    type Output = RatFunc;
    fn mul(self, rhs: &'a RatFunc) -> RatFunc {
        RatFunc::new(&self.num * &rhs.num, &self.den * &rhs.den).expect("nonzero denominators")
    }
}

impl<'a> Div for &'a RatFunc {
    type Output = RatFunc;
    fn div(self, rhs: &'a RatFunc) -> RatFunc {
        let inv = rhs.inv().expect("division by zero rational function");
        self * &inv
    }
}

impl Neg for &RatFunc {
    type Output = RatFunc;
    fn neg(self) -> RatFunc {
        RatFunc {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

macro_rules! forward_value_ops {
    ($($trait:ident::$method:ident),*) => {$(
        impl $trait for RatFunc {
            type Output = RatFunc;
            fn $method(self, rhs: RatFunc) -> RatFunc {
                $trait::$method(&self, &rhs)
            }
        }
    )*};
}
forward_value_ops!(Add::add, Sub::sub, Mul::mul, Div::div);

impl Neg for RatFunc {
    type Output = RatFunc;
    fn neg(self) -> RatFunc {
        -&self
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

impl fmt::Debug for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RatFunc({self})")
    }
}

#[cfg(test)]
mod tests {
    use super::super::{rat, rat_int};
    use super::*;

    fn t() -> Poly {
        Poly::var()
    }

    #[test]
    fn reduction_examples() {
        // t^2 / t reduces to t
        let f = RatFunc::new(t().pow(2), t()).unwrap();
        assert_eq!(f, RatFunc::from_poly(t()));
        // 2t / 2 reduces to t
        let f = RatFunc::new(t().scale(&rat_int(2)), Poly::from_int(2)).unwrap();
        assert_eq!(f, RatFunc::from_poly(t()));
        // (t^2 - 1) / (t^2 - 2t + 1) = (t + 1)/(t - 1)
        let num = &t().pow(2) - &Poly::one();
        let den = Poly::new(vec![rat_int(1), rat_int(-2), rat_int(1)]);
        let f = RatFunc::new(num, den).unwrap();
        assert_eq!(f.num(), &(&t() + &Poly::one()));
        assert_eq!(f.den(), &(&t() - &Poly::one()));
    }

    #[test]
    fn denominator_kept_monic() {
        let f = RatFunc::new(Poly::one(), t().scale(&rat_int(3))).unwrap();
        assert!(f.den().is_monic());
        assert_eq!(f.num(), &Poly::constant(rat(1, 3)));
    }

    #[test]
    fn zero_denominator_rejected() {
        assert_eq!(
            RatFunc::new(Poly::one(), Poly::zero()),
            Err(ArithError::ZeroDenominator)
        );
    }

    #[test]
    fn eval_and_poles() {
        let f = RatFunc::new(&t() + &Poly::one(), &t() - &Poly::one()).unwrap();
        assert_eq!(f.eval_at(&rat_int(0)).unwrap(), rat_int(-1));
        assert_eq!(
            f.eval_at(&rat_int(1)),
            Err(ArithError::PoleAtPoint(rat_int(1)))
        );
        assert!(f.is_regular_at(&rat_int(2)));
        assert!(!f.is_regular_at(&rat_int(1)));
        let g = RatFunc::from_poly(t());
        assert_eq!(g.eval_at(&rat_int(0)).unwrap(), rat_int(0));
        let inv_t = RatFunc::new(Poly::one(), t()).unwrap();
        assert_eq!(
            inv_t.eval_at(&rat_int(0)),
            Err(ArithError::PoleAtPoint(rat_int(0)))
        );
    }

    #[test]
    fn field_identities() {
        let f = RatFunc::new(&t() + &Poly::one(), t()).unwrap();
        let g = RatFunc::new(t().pow(2), &t() - &Poly::one()).unwrap();
        assert_eq!(&(&f + &g) - &g, f);
        assert_eq!(&(&f * &g) / &g, f);
        assert!((&f * &f.inv().unwrap()).is_one());
        assert!(RatFunc::zero().inv().is_none());
    }
}
