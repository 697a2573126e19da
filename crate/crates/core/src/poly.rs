//! Integer polynomials with exact Sturm-sequence root counting and isolation.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Polynomial {
    /// Ascending: `coeffs[i]` multiplies `t^i`. No trailing zeros.
    coeffs: Vec<BigInt>,
}

impl Polynomial {
    pub fn from_ascending(c: &[i64]) -> Polynomial {
        let mut coeffs: Vec<BigInt> = c.iter().map(|&x| BigInt::from(x)).collect();
        trim(&mut coeffs);
        Polynomial { coeffs }
    }

    /// Coefficients from the leading term down, as polynomials are usually written.
    pub fn from_descending(c: &[i64]) -> Polynomial {
        let mut v = c.to_vec();
        v.reverse();
        Polynomial::from_ascending(&v)
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn leading(&self) -> &BigInt {
        self.coeffs.last().expect("nonzero polynomial")
    }

    pub fn mul(&self, other: &Polynomial) -> Polynomial {
        let mut out = vec![BigInt::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        trim(&mut out);
        Polynomial { coeffs: out }
    }

    pub fn product(factors: &[Polynomial]) -> Polynomial {
        factors
            .iter()
            .fold(Polynomial::from_ascending(&[1]), |acc, f| acc.mul(f))
    }

    pub fn eval_f64(&self, t: f64) -> f64 {
        self.coeffs
            .iter()
            .rev()
            .fold(0.0, |acc, c| acc * t + c.to_f64().unwrap_or(f64::NAN))
    }

    pub fn eval_exact(&self, t: &BigRational) -> BigRational {
        self.coeffs
            .iter()
            .rev()
            .fold(BigRational::zero(), |acc, c| acc * t + BigRational::from_integer(c.clone()))
    }

    fn as_rational(&self) -> Vec<BigRational> {
        self.coeffs
            .iter()
            .map(|c| BigRational::from_integer(c.clone()))
            .collect()
    }

    /// Sturm chain `p, p', -rem(p, p'), ...`.
    pub fn sturm_chain(&self) -> SturmChain {
        let p0 = self.as_rational();
        let mut chain = vec![p0.clone()];
        let p1 = derivative(&p0);
        if !p1.is_empty() {
            chain.push(p1);
        }
        while chain.len() >= 2 {
            let r = rem(&chain[chain.len() - 2], &chain[chain.len() - 1]);
            if r.is_empty() {
                break;
            }
            chain.push(r.into_iter().map(|c| -c).collect());
        }
        SturmChain { chain }
    }

    /// Cauchy bound: every real root lies in `(-B, B)`.
    pub fn root_bound(&self) -> BigRational {
        let lead = BigRational::from_integer(self.leading().abs());
        let max = self.coeffs[..self.coeffs.len() - 1]
            .iter()
            .map(|c| BigRational::from_integer(c.abs()))
            .fold(BigRational::zero(), |a, b| if b > a { b } else { a });
        BigRational::one() + max / lead
    }

    /// Number of distinct real roots.
    pub fn count_real_roots(&self) -> usize {
        let s = self.sturm_chain();
        s.variations_at_neg_inf() - s.variations_at_pos_inf()
    }

    /// Number of distinct real roots in `(a, b]`.
    pub fn count_roots_in(&self, a: &BigRational, b: &BigRational) -> usize {
        let s = self.sturm_chain();
        s.variations(a) - s.variations(b)
    }

    /// Number of distinct real roots `<= b`.
    pub fn count_roots_at_most(&self, b: &BigRational) -> usize {
        let s = self.sturm_chain();
        s.variations_at_neg_inf() - s.variations(b)
    }

    /// Disjoint intervals `(a, b]`, each holding exactly one distinct real
    /// root, of width at most `width`, ascending.
    pub fn isolate_real_roots(&self, width: &BigRational) -> Vec<(BigRational, BigRational)> {
        let s = self.sturm_chain();
        let b = self.root_bound();
        let mut out = Vec::new();
        let mut stack = vec![(-b.clone(), b)];
        while let Some((lo, hi)) = stack.pop() {
            let c = s.variations(&lo) - s.variations(&hi);
            if c == 0 {
                continue;
            }
            if c == 1 && &(&hi - &lo) <= width {
                out.push((lo, hi));
                continue;
            }
            let mid = (&lo + &hi) / BigRational::from_integer(2.into());
            stack.push((mid.clone(), hi));
            stack.push((lo, mid));
        }
        out.sort_by(|x, y| x.0.cmp(&y.0));
        out
    }
}

fn trim(c: &mut Vec<BigInt>) {
    while c.len() > 1 && c.last().is_some_and(Zero::is_zero) {
        c.pop();
    }
}

fn trim_r(c: &mut Vec<BigRational>) {
    while c.last().is_some_and(Zero::is_zero) {
        c.pop();
    }
}

fn derivative(p: &[BigRational]) -> Vec<BigRational> {
    let mut d: Vec<BigRational> = p
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| c * BigRational::from_integer(BigInt::from(i)))
        .collect();
    trim_r(&mut d);
    d
}

/// Remainder of `a` divided by `b` (both ascending, `b` nonzero).
fn rem(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let mut r = a.to_vec();
    let db = b.len() - 1;
    let lead = b[db].clone();
    while r.len() > db && !r.is_empty() {
        let shift = r.len() - 1 - db;
        let f = r[r.len() - 1].clone() / &lead;
        for (i, c) in b.iter().enumerate() {
            let x = &r[i + shift] - &f * c;
            r[i + shift] = x;
        }
        r.pop();
        trim_r(&mut r);
    }
    r
}

#[derive(Debug, Clone)]
pub struct SturmChain {
    chain: Vec<Vec<BigRational>>,
}

impl SturmChain {
    pub fn len(&self) -> usize {
        self.chain.len()
    }

    pub fn is_empty(&self) -> bool {
        self.chain.is_empty()
    }

    fn count(signs: impl Iterator<Item = i8>) -> usize {
        let mut prev = 0i8;
        let mut v = 0;
        for s in signs.filter(|&s| s != 0) {
            if prev != 0 && s != prev {
                v += 1;
            }
            prev = s;
        }
        v
    }

    pub fn variations(&self, t: &BigRational) -> usize {
        Self::count(self.chain.iter().map(|p| {
            let v = p
                .iter()
                .rev()
                .fold(BigRational::zero(), |acc, c| acc * t + c);
            sign(&v)
        }))
    }

    pub fn variations_at_pos_inf(&self) -> usize {
        Self::count(self.chain.iter().map(|p| sign(p.last().expect("nonzero"))))
    }

    pub fn variations_at_neg_inf(&self) -> usize {
        Self::count(self.chain.iter().map(|p| {
            let s = sign(p.last().expect("nonzero"));
            if (p.len() - 1) % 2 == 1 {
                -s
            } else {
                s
            }
        }))
    }
}

fn sign(x: &BigRational) -> i8 {
    if x.is_positive() {
        1
    } else if x.is_negative() {
        -1
    } else {
        0
    }
}

/// Exact rational from a decimal literal such as `-2.406`.
pub fn decimal(s: &str) -> BigRational {
    let neg = s.starts_with('-');
    let body = s.trim_start_matches(['-', '+']);
    let (int, frac) = body.split_once('.').unwrap_or((body, ""));
    let digits: BigInt = format!("{int}{frac}").parse().expect("decimal literal");
    let den = BigInt::from(10).pow(frac.len() as u32);
    let r = BigRational::new(digits, den);
    if neg {
        -r
    } else {
        r
    }
}

pub fn to_f64(x: &BigRational) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

/// Real-root certificate for one polynomial.
#[derive(Debug, Clone, Serialize)]
pub struct Certificate {
    pub name: &'static str,
    pub degree: usize,
    pub real_roots: usize,
    /// Isolating intervals `(a, b]`, one per distinct real root.
    pub intervals: Vec<(f64, f64)>,
    pub claim: String,
    pub holds: bool,
}

pub struct NamedPolynomial {
    pub name: &'static str,
    pub poly: Polynomial,
}

/// Degree-12 bound polynomial of the cubic lower-bound argument.
pub fn cubic_f() -> Polynomial {
    Polynomial::from_descending(&[1, -4, -15, 64, 88, -364, -284, 840, 527, -584, -245, -16, 280])
}

/// Degree-15 polynomial whose sign decides the cubic lower bound.
pub fn cubic_g() -> Polynomial {
    Polynomial::from_descending(&[
        1, -4, -14, 74, 17, -510, 700, 1708, -4853, -3716, 12026, 6770, -8061, -3474, -40, 3984,
    ])
}

pub fn cubic_aux() -> Polynomial {
    Polynomial::from_descending(&[1, -2, 5])
}

/// Degree-8 coefficient polynomial of the quartic lower-bound argument.
pub fn quartic_f() -> Polynomial {
    Polynomial::from_descending(&[-1, 8, -12, -36, 27, 236, 254, -1056, -636])
}

pub fn quartic_g() -> Polynomial {
    Polynomial::from_descending(&[
        1, -8, -4, 148, -103, -1020, 714, 3024, -960, -2464, 1024, 0, 3712,
    ])
}

/// Degree-17 polynomial whose sign decides the quartic lower bound.
pub fn quartic_h() -> Polynomial {
    Polynomial::from_descending(&[
        1, -10, 10, 188, -494, -1236, 4124, 5136, -6907, -34850, -66910, 162036, 356704, -185984,
        -329408, 192576, 126592, 532608,
    ])
}

pub fn quartic_aux() -> Polynomial {
    Polynomial::from_descending(&[1, -4, 6, -4, 49])
}

/// `(t - 3)(t^2 - t - 8)(t + 1)^2`.
pub fn cubic_limit_polynomial() -> Polynomial {
    Polynomial::product(&[
        Polynomial::from_descending(&[1, -3]),
        Polynomial::from_descending(&[1, -1, -8]),
        Polynomial::from_descending(&[1, 1]),
        Polynomial::from_descending(&[1, 1]),
    ])
}

/// `(t - 2)(t - 3)(t - 4)(t^2 - 2t - 12)(t + 1)^2`.
pub fn quartic_limit_polynomial() -> Polynomial {
    Polynomial::product(&[
        Polynomial::from_descending(&[1, -2]),
        Polynomial::from_descending(&[1, -3]),
        Polynomial::from_descending(&[1, -4]),
        Polynomial::from_descending(&[1, -2, -12]),
        Polynomial::from_descending(&[1, 1]),
        Polynomial::from_descending(&[1, 1]),
    ])
}

fn certify(name: &'static str, p: &Polynomial, claim: String, check: impl Fn(&Polynomial, usize) -> bool) -> Certificate {
    let real_roots = p.count_real_roots();
    let width = decimal("0.000001");
    let intervals = p
        .isolate_real_roots(&width)
        .iter()
        .map(|(a, b)| (to_f64(a), to_f64(b)))
        .collect();
    Certificate {
        name,
        degree: p.degree(),
        real_roots,
        intervals,
        holds: check(p, real_roots),
        claim,
    }
}

/// Sturm certificates for the positivity and unique-root facts behind the two lower bounds.
pub fn polynomial_certificates() -> Vec<Certificate> {
    let none = |_: &Polynomial, k: usize| k == 0;
    let one_above = |b: &'static str| {
        move |p: &Polynomial, k: usize| k == 1 && p.count_roots_at_most(&decimal(b)) == 0
    };
    vec![
        certify("cubic f", &cubic_f(), "no real roots".into(), none),
        certify("t^2-2t+5", &cubic_aux(), "no real roots".into(), none),
        certify("cubic g", &cubic_g(), "exactly one real root, > -2.406".into(), one_above("-2.406")),
        certify(
            "quartic f",
            &quartic_f(),
            "smallest real root > -2.034".into(),
            |p: &Polynomial, k: usize| k > 0 && p.count_roots_at_most(&decimal("-2.034")) == 0,
        ),
        certify("quartic g", &quartic_g(), "no real roots".into(), none),
        certify("t^4-4t^3+6t^2-4t+49", &quartic_aux(), "no real roots".into(), none),
        certify("quartic h", &quartic_h(), "exactly one real root, > -2.71".into(), one_above("-2.71")),
    ]
}

/// The unique root of `p` in the open window `(lo, hi)`, by bisection on
/// the sign of `p` to absolute width `tol`. The window must hold exactly one
/// sign change.
pub fn bisect_root(p: &Polynomial, lo: f64, hi: f64, tol: f64) -> f64 {
    let (mut a, mut b) = (lo, hi);
    let sa = p.eval_f64(a).signum();
    while b - a > tol {
        let mid = 0.5 * (a + b);
        let sm = p.eval_f64(mid).signum();
        if sm == 0.0 {
            return mid;
        }
        if sm == sa {
            a = mid;
        } else {
            b = mid;
        }
    }
    0.5 * (a + b)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn degrees_and_golden_coefficients() {
        assert_eq!(cubic_f().degree(), 12);
        assert_eq!(cubic_g().degree(), 15);
        assert_eq!(quartic_f().degree(), 8);
        assert_eq!(quartic_g().degree(), 12);
        assert_eq!(quartic_h().degree(), 17);
        assert_eq!(cubic_g().coeffs()[0], BigInt::from(3984));
        assert_eq!(quartic_h().coeffs()[0], BigInt::from(532608));
        assert_eq!(*quartic_f().leading(), BigInt::from(-1));
        assert_eq!(quartic_g().coeffs()[1], BigInt::zero());
    }

    #[test]
    fn sturm_counts_on_simple_cases() {
        let p = Polynomial::from_descending(&[1, 0, -2]);
        assert_eq!(p.count_real_roots(), 2);
        let iv = p.isolate_real_roots(&decimal("0.001"));
        assert_eq!(iv.len(), 2);
        assert!(to_f64(&iv[1].0) < 2f64.sqrt() && 2f64.sqrt() <= to_f64(&iv[1].1));
        assert_eq!(Polynomial::from_descending(&[1, 0, 1]).count_real_roots(), 0);
        // repeated roots are counted once
        let sq = Polynomial::product(&[p.clone(), p.clone()]);
        assert_eq!(sq.count_real_roots(), 2);
        assert_eq!(p.count_roots_in(&decimal("0"), &decimal("2")), 1);
    }

    #[test]
    fn decimal_literals() {
        assert_eq!(decimal("-2.406"), BigRational::new((-2406).into(), 1000.into()));
        assert_eq!(decimal("3"), BigRational::from_integer(3.into()));
    }

    #[test]
    fn limit_roots() {
        let c = bisect_root(&cubic_limit_polynomial(), -3.0, -5f64.sqrt(), 1e-14);
        assert!((c - (1.0 - 33f64.sqrt()) / 2.0).abs() < 1e-13);
        let q = bisect_root(&quartic_limit_polynomial(), -4.0, -(1.0 + 17f64.sqrt()) / 2.0, 1e-14);
        assert!((q - (1.0 - 13f64.sqrt())).abs() < 1e-13);
    }

    #[test]
    fn certificates_hold() {
        for c in polynomial_certificates() {
            assert!(c.holds, "{} fails: {} real roots {:?}", c.name, c.real_roots, c.intervals);
        }
    }
}
