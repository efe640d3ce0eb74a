use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num::{BigInt, One, Signed, ToPrimitive, Zero};

use super::{parse_rational, ArithError, Rational};

/// Dense univariate polynomial over Q in the variable `t`.
///
/// Coefficients are stored in ascending degree with trailing zeros stripped;
/// the zero polynomial is the empty list.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct Poly {
    coeffs: Vec<Rational>,
}

impl Poly {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn constant(c: Rational) -> Self {
        Poly::new(vec![c])
    }

    pub fn from_int(n: i64) -> Self {
        Poly::constant(super::rat_int(n))
    }

    /// The polynomial `t`.
    pub fn var() -> Self {
        Poly::monomial(Rational::one(), 1)
    }

    pub fn monomial(c: Rational, deg: usize) -> Self {
        if c.is_zero() {
            return Poly::default();
        }
        let mut coeffs = vec![Rational::zero(); deg + 1];
        coeffs[deg] = c;
        Poly { coeffs }
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    /// Coefficient of `t^k`, zero beyond the stored length.
    pub fn coeff(&self, k: usize) -> Rational {
        self.coeffs.get(k).cloned().unwrap_or_else(Rational::zero)
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading_coeff(&self) -> Option<&Rational> {
        self.coeffs.last()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn as_constant(&self) -> Option<Rational> {
        match self.coeffs.len() {
            0 => Some(Rational::zero()),
            1 => Some(self.coeffs[0].clone()),
            _ => None,
        }
    }

    pub fn is_monic(&self) -> bool {
        self.leading_coeff().is_some_and(One::is_one)
    }

    /// Horner evaluation at a rational point.
    pub fn eval(&self, a: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * a + c;
        }
        acc
    }

    pub fn scale(&self, c: &Rational) -> Poly {
        if c.is_zero() {
            return Poly::default();
        }
        Poly::new(self.coeffs.iter().map(|x| x * c).collect())
    }

    pub fn make_monic(&self) -> Poly {
        match self.leading_coeff() {
            None => Poly::default(),
            Some(lc) => self.scale(&lc.recip()),
        }
    }

    pub fn pow(&self, mut k: usize) -> Poly {
        let mut base = self.clone();
        let mut acc = Poly::one();
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &base;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Euclidean division. Panics on a zero divisor; callers check first.
    pub fn div_rem(&self, d: &Poly) -> (Poly, Poly) {
        assert!(!d.is_zero(), "polynomial division by zero");
        let dd = d.degree().unwrap();
        let lc_inv = d.leading_coeff().unwrap().recip();
        let mut rem = self.coeffs.clone();
        let mut quo = vec![Rational::zero(); self.coeffs.len().saturating_sub(dd)];
        while rem.len() > dd {
            let k = rem.len() - 1 - dd;
            let q = &rem[rem.len() - 1] * &lc_inv;
            if !q.is_zero() {
                for (j, c) in d.coeffs.iter().enumerate() {
                    let upd = &rem[k + j] - &(c * &q);
                    rem[k + j] = upd;
                }
            }
            quo[k] = q;
            rem.pop();
            while rem.last().is_some_and(Zero::is_zero) {
                rem.pop();
            }
        }
        (Poly::new(quo), Poly::new(rem))
    }

    /// Quotient of an exact division; debug-asserts the remainder vanishes.
    pub fn exact_div(&self, d: &Poly) -> Poly {
        let (q, r) = self.div_rem(d);
        debug_assert!(r.is_zero(), "division was not exact");
        q
    }

    /// Monic gcd by the Euclidean algorithm. Errors if both inputs are zero.
    pub fn gcd(a: &Poly, b: &Poly) -> Result<Poly, ArithError> {
        if a.is_zero() && b.is_zero() {
            return Err(ArithError::BothZero);
        }
        let mut x = a.make_monic();
        let mut y = b.make_monic();
        while !y.is_zero() {
            let r = x.div_rem(&y).1.make_monic();
            x = y;
            y = r;
        }
        Ok(x)
    }

    /// Extended gcd: `(g, x, y)` with `self * x + other * y = g` and `g`
    /// the monic gcd (zero only when both inputs are zero). Remainders are
    /// rescaled to monic form at every step, with the cofactors scaled
    /// alongside, so coefficients stay small.
    pub fn xgcd(&self, other: &Poly) -> (Poly, Poly, Poly) {
        let (mut r0, mut r1) = (self.clone(), other.clone());
        let (mut x0, mut x1) = (Poly::one(), Poly::zero());
        let (mut y0, mut y1) = (Poly::zero(), Poly::one());
        while !r1.is_zero() {
            let (q, r) = r0.div_rem(&r1);
            let mut nx = &x0 - &(&q * &x1);
            let mut ny = &y0 - &(&q * &y1);
            let mut nr = r;
            if let Some(lc) = nr.leading_coeff() {
                let c = lc.recip();
                nr = nr.scale(&c);
                nx = nx.scale(&c);
                ny = ny.scale(&c);
            }
            r0 = std::mem::replace(&mut r1, nr);
            x0 = std::mem::replace(&mut x1, nx);
            y0 = std::mem::replace(&mut y1, ny);
        }
        if let Some(lc) = r0.leading_coeff() {
            if !lc.is_one() {
                let c = lc.recip();
                r0 = r0.scale(&c);
                x0 = x0.scale(&c);
                y0 = y0.scale(&c);
            }
        }
        (r0, x0, y0)
    }

    /// Exact square root, if one exists. The zero polynomial has root zero;
    /// the returned root has a positive leading coefficient.
    pub fn exact_sqrt(&self) -> Option<Poly> {
        if self.is_zero() {
            return Some(Poly::default());
        }
        let deg = self.degree().unwrap();
        if deg % 2 != 0 {
            return None;
        }
        let lc = self.leading_coeff().unwrap();
        let lead_root = rational_sqrt(lc)?;
        let half = deg / 2;
        let mut root = vec![Rational::zero(); half + 1];
        root[half] = lead_root;
        // Descending coefficient recursion: coefficient of t^(deg-k) in
        // root^2 must match; each step solves for root[half-k] linearly.
        for k in 1..=half {
            let target = self.coeff(deg - k);
            let mut acc = Rational::zero();
            for j in 1..k {
                acc += &root[half - j] * &root[half - (k - j)];
            }
            let denom = Rational::from(BigInt::from(2)) * &root[half];
            root[half - k] = (target - acc) / denom;
        }
        let candidate = Poly::new(root);
        if &(&candidate * &candidate) == self {
            Some(candidate)
        } else {
            None
        }
    }

    /// Splits off all rational roots with multiplicity by repeated division
    /// by `t - a`, candidates taken from divisors of the outer integer
    /// coefficients of the primitive part.
    pub fn rational_roots(&self) -> RootSplit {
        let mut roots: Vec<(Rational, usize)> = Vec::new();
        let mut rest = self.clone();
        if rest.is_zero() {
            return RootSplit { roots, remainder: rest, exhaustive: true };
        }
        // t^k factor first so the constant term below is nonzero.
        let mut mult0 = 0;
        while !rest.is_zero() && rest.coeff(0).is_zero() {
            rest = rest.exact_div(&Poly::var());
            mult0 += 1;
        }
        if mult0 > 0 {
            roots.push((Rational::zero(), mult0));
        }
        if rest.is_constant() {
            return RootSplit { roots, remainder: rest, exhaustive: true };
        }
        let ints = integer_primitive_coeffs(&rest);
        let lead = ints.last().unwrap().clone();
        let cons = ints.first().unwrap().clone();
        let (ps, qs) = match (divisors(&cons), divisors(&lead)) {
            (Some(p), Some(q)) => (p, q),
            _ => {
                return RootSplit { roots, remainder: rest, exhaustive: false };
            }
        };
        let mut candidates: Vec<Rational> = Vec::new();
        for p in &ps {
            for q in &qs {
                let c = Rational::new(p.clone(), q.clone());
                if !candidates.contains(&c) {
                    candidates.push(c);
                }
            }
        }
        for base in candidates {
            for cand in [base.clone(), -base] {
                if rest.is_constant() {
                    break;
                }
                let mut mult = 0;
                while rest.eval(&cand).is_zero() {
                    let lin = Poly::new(vec![-cand.clone(), Rational::one()]);
                    rest = rest.exact_div(&lin);
                    mult += 1;
                }
                if mult > 0 {
                    roots.push((cand, mult));
                }
            }
        }
        roots.sort_by(|a, b| a.0.cmp(&b.0));
        RootSplit { roots, remainder: rest, exhaustive: true }
    }

    pub fn to_coeff_strings(&self) -> Vec<String> {
        self.coeffs.iter().map(|c| c.to_string()).collect()
    }

    pub fn from_coeff_strings<S: AsRef<str>>(coeffs: &[S]) -> Result<Poly, ArithError> {
        let parsed = coeffs
            .iter()
            .map(|s| parse_rational(s.as_ref()))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Poly::new(parsed))
    }
}

/// Result of rational root extraction: the roots with multiplicities, the
/// unfactored remainder, and whether the candidate search was exhaustive.
#[derive(Debug, Clone)]
pub struct RootSplit {
    pub roots: Vec<(Rational, usize)>,
    pub remainder: Poly,
    pub exhaustive: bool,
}

fn rational_sqrt(x: &Rational) -> Option<Rational> {
    if x.is_negative() {
        return None;
    }
    let n = x.numer().sqrt();
    let d = x.denom().sqrt();
    if &(&n * &n) == x.numer() && &(&d * &d) == x.denom() {
        Some(Rational::new(n, d))
    } else {
        None
    }
}

/// Coefficients cleared to integers and divided by their content.
fn integer_primitive_coeffs(p: &Poly) -> Vec<BigInt> {
    let mut lcm = BigInt::one();
    for c in p.coeffs() {
        lcm = num::integer::lcm(lcm, c.denom().clone());
    }
    let mut ints: Vec<BigInt> = p
        .coeffs()
        .iter()
        .map(|c| c.numer() * (&lcm / c.denom()))
        .collect();
    let mut content = BigInt::zero();
    for c in &ints {
        content = num::integer::gcd(content, c.clone());
    }
    if !content.is_zero() && !content.is_one() {
        for c in &mut ints {
            *c = &*c / &content;
        }
    }
    ints
}

/// Positive divisors by trial division; `None` when the value is too large
/// to enumerate (callers then report a non-exhaustive search).
fn divisors(n: &BigInt) -> Option<Vec<BigInt>> {
    const LIMIT: u128 = 1_000_000_000_000;
    let mag = n.abs().to_u128()?;
    if mag == 0 || mag > LIMIT {
        return None;
    }
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1u128;
    while d * d <= mag {
        if mag % d == 0 {
            small.push(BigInt::from(d));
            if d * d != mag {
                large.push(BigInt::from(mag / d));
            }
        }
        d += 1;
    }
    large.reverse();
    small.extend(large);
    Some(small)
}

impl Zero for Poly {
    fn zero() -> Self {
        Poly::default()
    }
    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
}

impl One for Poly {
    fn one() -> Self {
        Poly::constant(Rational::one())
    }
    fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }
}

impl<'a> Add for &'a Poly {
    type Output = Poly;
    fn add(self, rhs: &'a Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for k in 0..n {
            out.push(self.coeff(k) + rhs.coeff(k));
        }
        Poly::new(out)
    }
}

impl<'a> Sub for &'a Poly {
    type Output = Poly;
    fn sub(self, rhs: &'a Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for k in 0..n {
            out.push(self.coeff(k) - rhs.coeff(k));
        }
        Poly::new(out)
    }
}

impl<'a> Mul for &'a Poly {
    type Output = Poly;
    fn mul(self, rhs: &'a Poly) -> Poly {
        if self.is_zero() || rhs.is_zero() {
            return Poly::default();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    out[i + j] += a * b;
                }
            }
        }
        Poly::new(out)
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

macro_rules! forward_value_ops {
    ($($trait:ident::$method:ident),*) => {$(
        impl $trait for Poly {
            type Output = Poly;
            fn $method(self, rhs: Poly) -> Poly {
                $trait::$method(&self, &rhs)
            }
        }
    )*};
}
forward_value_ops!(Add::add, Sub::sub, Mul::mul);

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        -&self
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (deg, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
                first = false;
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            match deg {
                0 => write!(f, "{mag}")?,
                _ => {
                    if !mag.is_one() {
                        write!(f, "{mag}*")?;
                    }
                    if deg == 1 {
                        write!(f, "t")?;
                    } else {
                        write!(f, "t^{deg}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly({self})")
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
    fn trailing_zeros_stripped() {
        let p = Poly::new(vec![rat_int(1), rat_int(0), rat_int(0)]);
        assert_eq!(p.coeffs().len(), 1);
        assert_eq!(Poly::new(vec![rat_int(0)]), Poly::zero());
        assert_eq!(Poly::zero().degree(), None);
    }

    #[test]
    fn eval_examples() {
        let t2 = t().pow(2);
        assert_eq!(t2.eval(&rat_int(0)), rat_int(0));
        assert_eq!(t2.eval(&rat_int(2)), rat_int(4));
        // 3t - 1 at 1/3
        let p = Poly::new(vec![rat_int(-1), rat_int(3)]);
        assert_eq!(p.eval(&rat(1, 3)), rat_int(0));
        assert_eq!(Poly::zero().eval(&rat_int(5)), rat_int(0));
    }

    #[test]
    fn div_rem_recombines() {
        let a = Poly::new(vec![rat_int(2), rat_int(0), rat_int(1), rat_int(1)]);
        let b = Poly::new(vec![rat_int(1), rat_int(1)]);
        let (q, r) = a.div_rem(&b);
        assert_eq!(&(&q * &b) + &r, a);
        assert!(r.degree() < b.degree());
    }

    #[test]
    fn gcd_examples() {
        let t2 = t().pow(2);
        let t3 = t().pow(3);
        assert_eq!(Poly::gcd(&t2, &t3).unwrap(), t2);
        // gcd(t^2 - 1, t - 1) = t - 1
        let a = &t2 - &Poly::one();
        let b = &t() - &Poly::one();
        assert_eq!(Poly::gcd(&a, &b).unwrap(), b);
        assert_eq!(Poly::gcd(&t(), &Poly::one()).unwrap(), Poly::one());
        assert_eq!(Poly::gcd(&t(), &Poly::zero()).unwrap(), t());
        assert_eq!(Poly::gcd(&Poly::zero(), &Poly::zero()), Err(ArithError::BothZero));
        // gcd is monic even for non-monic input
        let a = Poly::new(vec![rat_int(0), rat_int(4)]);
        assert_eq!(Poly::gcd(&a, &Poly::zero()).unwrap(), t());
    }

    #[test]
    fn xgcd_bezout_identity() {
        let cases = vec![
            (t().pow(2), t().pow(3)),
            (&t().pow(2) - &Poly::one(), &t() - &Poly::one()),
            (t(), Poly::one()),
            (t(), Poly::zero()),
            (Poly::zero(), &t() + &Poly::one()),
            (Poly::new(vec![rat_int(2), rat_int(4)]), Poly::new(vec![rat_int(3)])),
            (Poly::zero(), Poly::zero()),
        ];
        for (a, b) in cases {
            let (g, x, y) = a.xgcd(&b);
            assert_eq!(&(&a * &x) + &(&b * &y), g, "bezout identity");
            if a.is_zero() && b.is_zero() {
                assert!(g.is_zero());
            } else {
                assert_eq!(g, Poly::gcd(&a, &b).unwrap());
                assert!(g.is_monic());
            }
        }
    }

    #[test]
    fn exact_sqrt_finds_even_powers() {
        assert_eq!(t().pow(2).exact_sqrt().unwrap(), t());
        assert_eq!(Poly::one().exact_sqrt().unwrap(), Poly::one());
        assert_eq!(Poly::zero().exact_sqrt().unwrap(), Poly::zero());
        let sq = (&t() + &Poly::one()).pow(2);
        assert_eq!(sq.exact_sqrt().unwrap(), &t() + &Poly::one());
        assert!(t().exact_sqrt().is_none());
        assert!(t().pow(3).exact_sqrt().is_none());
        let tt1 = &t() * &(&t() - &Poly::one());
        assert!(tt1.exact_sqrt().is_none());
    }

    #[test]
    fn rational_roots_of_products() {
        // t^2 * (t - 1) * (2t + 3)
        let p = &(&t().pow(2) * &(&t() - &Poly::one()))
            * &Poly::new(vec![rat_int(3), rat_int(2)]);
        let split = p.rational_roots();
        assert!(split.exhaustive);
        assert!(split.remainder.is_constant());
        assert_eq!(
            split.roots,
            vec![(rat(-3, 2), 1), (rat_int(0), 2), (rat_int(1), 1)]
        );
    }

    #[test]
    fn rational_roots_leaves_irreducible_part() {
        // t * (t^2 + 1)
        let p = &t() * &Poly::new(vec![rat_int(1), rat_int(0), rat_int(1)]);
        let split = p.rational_roots();
        assert!(split.exhaustive);
        assert_eq!(split.roots, vec![(rat_int(0), 1)]);
        assert_eq!(split.remainder.degree(), Some(2));
    }

    #[test]
    fn coeff_string_round_trip() {
        let p = Poly::new(vec![rat(-1, 2), rat_int(0), rat_int(3)]);
        let strs = p.to_coeff_strings();
        assert_eq!(strs, vec!["-1/2", "0", "3"]);
        assert_eq!(Poly::from_coeff_strings(&strs).unwrap(), p);
        assert!(Poly::from_coeff_strings(&["1/0"]).is_err());
        assert_eq!(Poly::from_coeff_strings::<&str>(&[]).unwrap(), Poly::zero());
    }

    #[test]
    fn display_is_readable() {
        let p = Poly::new(vec![rat(1, 2), rat_int(-2), rat_int(1)]);
        assert_eq!(p.to_string(), "t^2 - 2*t + 1/2");
        assert_eq!(Poly::zero().to_string(), "0");
        assert_eq!((-t()).to_string(), "-t");
    }
}
