use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::NumberFieldError;

/// Dense integer polynomial, leading coefficient first
/// (`x^2 - x - 1` is `[1, -1, -1]`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Polynomial {
    coeffs: Vec<BigInt>,
}

impl Polynomial {
    /// Leading zeros are stripped; the zero polynomial is rejected.
    pub fn new(coeffs: Vec<BigInt>) -> Result<Self, NumberFieldError> {
        let first = coeffs
            .iter()
            .position(|c| !c.is_zero())
            .ok_or_else(|| NumberFieldError::Parse("zero polynomial".into()))?;
        Ok(Self {
            coeffs: coeffs[first..].to_vec(),
        })
    }

    pub fn from_i64(coeffs: &[i64]) -> Result<Self, NumberFieldError> {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Coefficients, leading first.
    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn leading(&self) -> &BigInt {
        &self.coeffs[0]
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs[0].is_one()
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        use num_traits::ToPrimitive;
        self.coeffs
            .iter()
            .fold(0.0, |acc, c| acc * x + c.to_f64().unwrap_or(f64::NAN))
    }

    fn to_rational(&self) -> RatPoly {
        RatPoly(
            self.coeffs
                .iter()
                .map(|c| BigRational::from_integer(c.clone()))
                .collect(),
        )
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let deg = self.degree();
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let power = deg - i;
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { "-" } else { "+" })?;
            }
            first = false;
            let show_coeff = power == 0 || !mag.is_one();
            if show_coeff {
                write!(f, "{mag}")?;
            }
            match power {
                0 => {}
                1 => f.write_str("x")?,
                _ => write!(f, "x^{power}")?,
            }
        }
        Ok(())
    }
}

impl FromStr for Polynomial {
    type Err = NumberFieldError;

    /// Accepts `x^2-x-1` style expressions in `x` or a coefficient list
    /// `[1, -1, -1]` (constant term last).
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || NumberFieldError::Parse(s.to_string());
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if t.is_empty() {
            return Err(err());
        }
        if t.starts_with('[') {
            let inner = t
                .strip_prefix('[')
                .and_then(|r| r.strip_suffix(']'))
                .ok_or_else(err)?;
            let coeffs = inner
                .split(',')
                .map(|c| BigInt::from_str(c).map_err(|_| err()))
                .collect::<Result<Vec<_>, _>>()?;
            return Polynomial::new(coeffs);
        }

        let bytes = t.as_bytes();
        let mut pos = 0;
        let mut terms: Vec<(usize, BigInt)> = Vec::new();
        while pos < bytes.len() {
            let mut sign = BigInt::one();
            if bytes[pos] == b'+' || bytes[pos] == b'-' {
                if bytes[pos] == b'-' {
                    sign = -sign;
                }
                pos += 1;
            } else if !terms.is_empty() {
                return Err(err());
            }
            let start = pos;
            while pos < bytes.len() && bytes[pos].is_ascii_digit() {
                pos += 1;
            }
            let coeff = if pos > start {
                BigInt::from_str(&t[start..pos]).map_err(|_| err())?
            } else {
                BigInt::one()
            };
            let had_digits = pos > start;
            if pos < bytes.len() && bytes[pos] == b'*' {
                if !had_digits {
                    return Err(err());
                }
                pos += 1;
                if pos >= bytes.len() || bytes[pos] != b'x' {
                    return Err(err());
                }
            }
            let power = if pos < bytes.len() && bytes[pos] == b'x' {
                pos += 1;
                if pos < bytes.len() && bytes[pos] == b'^' {
                    pos += 1;
                    let ps = pos;
                    while pos < bytes.len() && bytes[pos].is_ascii_digit() {
                        pos += 1;
                    }
                    t[ps..pos].parse::<usize>().map_err(|_| err())?
                } else {
                    1
                }
            } else if had_digits {
                0
            } else {
                return Err(err());
            };
            terms.push((power, sign * coeff));
        }
        let deg = terms.iter().map(|(p, _)| *p).max().ok_or_else(err)?;
        let mut coeffs = vec![BigInt::zero(); deg + 1];
        for (p, c) in terms {
            coeffs[deg - p] += c;
        }
        Polynomial::new(coeffs)
    }
}

/// Rational polynomial, leading coefficient first, no leading zeros
/// (the zero polynomial is empty).
#[derive(Debug, Clone, PartialEq)]
struct RatPoly(Vec<BigRational>);

impl RatPoly {
    fn trim(mut self) -> Self {
        let first = self.0.iter().position(|c| !c.is_zero()).unwrap_or(self.0.len());
        self.0.drain(..first);
        self
    }

    fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    fn degree(&self) -> usize {
        self.0.len() - 1
    }

    fn derivative(&self) -> RatPoly {
        let d = self.degree();
        RatPoly(
            self.0[..d]
                .iter()
                .enumerate()
                .map(|(i, c)| c * BigRational::from_integer(BigInt::from(d - i)))
                .collect(),
        )
        .trim()
    }

    fn rem(&self, divisor: &RatPoly) -> RatPoly {
        let mut r = self.0.clone();
        let dl = divisor.0.len();
        while r.len() >= dl {
            let q = &r[0] / &divisor.0[0];
            for (i, d) in divisor.0.iter().enumerate() {
                let v = &r[i] - &q * d;
                r[i] = v;
            }
            r.remove(0);
            let first = r.iter().position(|c| !c.is_zero()).unwrap_or(r.len());
            r.drain(..first);
        }
        RatPoly(r)
    }

    fn neg(&self) -> RatPoly {
        RatPoly(self.0.iter().map(|c| -c).collect())
    }

    /// Signs at -inf and +inf.
    fn signs_at_infinity(&self) -> (i32, i32) {
        let lead = if self.0[0].is_positive() { 1 } else { -1 };
        let at_neg = if self.degree().is_multiple_of(2) { lead } else { -lead };
        (at_neg, lead)
    }
}

fn sign_changes(signs: impl IntoIterator<Item = i32>) -> usize {
    let mut count = 0;
    let mut prev = 0;
    for s in signs {
        if s == 0 {
            continue;
        }
        if prev != 0 && s != prev {
            count += 1;
        }
        prev = s;
    }
    count
}

/// Real and complex embedding counts: `n = s + 2t`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Signature {
    pub n: usize,
    pub s: usize,
    pub t: usize,
}

/// Counts real roots with a Sturm sequence.
pub fn signature(f: &Polynomial) -> Result<Signature, NumberFieldError> {
    let n = f.degree();
    if n == 0 {
        return Err(NumberFieldError::ZeroDegree);
    }
    let mut seq = vec![f.to_rational(), f.to_rational().derivative()];
    loop {
        let len = seq.len();
        let r = seq[len - 2].rem(&seq[len - 1]).neg();
        if r.is_zero() {
            break;
        }
        seq.push(r);
    }
    if seq.last().map_or(0, RatPoly::degree) > 0 {
        return Err(NumberFieldError::NotSquarefree);
    }
    let at_neg = sign_changes(seq.iter().map(|p| p.signs_at_infinity().0));
    let at_pos = sign_changes(seq.iter().map(|p| p.signs_at_infinity().1));
    let s = at_neg - at_pos;
    Ok(Signature { n, s, t: (n - s) / 2 })
}

/// Hirsch length of `O_F ⋊ U_F`: `n` for the additive group plus the unit
/// rank `s + t - 1`.
pub fn predicted_hirsch(f: &Polynomial) -> Result<usize, NumberFieldError> {
    let sig = signature(f)?;
    Ok(sig.n + sig.s + sig.t - 1)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Polynomial {
        s.parse().unwrap()
    }

    #[test]
    fn parses_string_and_list_forms() {
        assert_eq!(p("x^2-x-1"), Polynomial::from_i64(&[1, -1, -1]).unwrap());
        assert_eq!(p("[1, -1, -1]"), p("x^2 - x - 1"));
        assert_eq!(p("x^9-7x^3-1").coeffs().len(), 10);
        assert_eq!(p("x^9-7*x^3-1"), p("x^9-7x^3-1"));
        assert_eq!(p("x-1"), Polynomial::from_i64(&[1, -1]).unwrap());
        assert_eq!(p("-x^2+3"), Polynomial::from_i64(&[-1, 0, 3]).unwrap());
        assert_eq!(p("1-x+x^2"), p("x^2-x+1"));
        for bad in ["", "x^", "2**x", "y+1", "x--1", "[1,,2]", "0", "[0,0]", "x 2"] {
            assert!(bad.parse::<Polynomial>().is_err(), "{bad:?}");
        }
    }

    #[test]
    fn display_round_trips() {
        for s in ["x^2-x-1", "x^11-3x^3-1", "x-1", "-2x^3+x", "x^5-x^3-1", "7"] {
            assert_eq!(p(s).to_string(), s);
            assert_eq!(p(&p(s).to_string()), p(s));
        }
    }

    #[test]
    fn signatures() {
        assert_eq!(signature(&p("x^2-x-1")).unwrap(), Signature { n: 2, s: 2, t: 0 });
        assert_eq!(signature(&p("x^5-x^3-1")).unwrap(), Signature { n: 5, s: 1, t: 2 });
        assert_eq!(signature(&p("x-1")).unwrap(), Signature { n: 1, s: 1, t: 0 });
        assert_eq!(signature(&p("x^2+1")).unwrap(), Signature { n: 2, s: 0, t: 1 });
        assert_eq!(
            signature(&p("x^3-3x+1")).unwrap(),
            Signature { n: 3, s: 3, t: 0 }
        );
        assert_eq!(signature(&p("x^2-2x+1")), Err(NumberFieldError::NotSquarefree));
        assert_eq!(signature(&p("x^3")), Err(NumberFieldError::NotSquarefree));
        assert_eq!(signature(&p("5")), Err(NumberFieldError::ZeroDegree));
    }

    #[test]
    fn hirsch_predictions() {
        assert_eq!(predicted_hirsch(&p("x^2-x-1")).unwrap(), 3);
        assert_eq!(predicted_hirsch(&p("x^9-7x^3-1")).unwrap(), 14);
        assert_eq!(predicted_hirsch(&p("x^11-x^3-1")).unwrap(), 16);
        assert_eq!(predicted_hirsch(&p("x^7-x^3-1")).unwrap(), 10);
    }
}
