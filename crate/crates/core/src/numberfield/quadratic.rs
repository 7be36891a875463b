use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::semidirect::IntMatrix;
use super::{NumberFieldError, Polynomial};

/// A rational (degree 1) or real quadratic field with its maximal order
/// `Z[ω]` and fundamental unit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuadraticFieldData {
    pub polynomial: Polynomial,
    /// Squarefree part of the discriminant; `None` for degree 1.
    pub d: Option<i64>,
    /// `ε = p + q ω`; `None` for degree 1.
    pub fundamental_unit: Option<(BigInt, BigInt)>,
    /// Order of the torsion units `±1`.
    pub torsion_order: u32,
}

/// Largest number of continued-fraction steps tried before giving up.
const MAX_CF_STEPS: usize = 10_000_000;

/// Largest discriminant magnitude whose squarefree part is found by trial
/// division.
const MAX_DISCRIMINANT: u64 = 1 << 50;

impl QuadraticFieldData {
    pub fn from_polynomial(f: &Polynomial) -> Result<Self, NumberFieldError> {
        match f.degree() {
            0 => Err(NumberFieldError::ZeroDegree),
            1 => Ok(Self {
                polynomial: f.clone(),
                d: None,
                fundamental_unit: None,
                torsion_order: 2,
            }),
            2 => {
                let c = f.coeffs();
                let disc: BigInt = &c[1] * &c[1] - BigInt::from(4) * &c[0] * &c[2];
                if disc.is_zero() {
                    return Err(NumberFieldError::NotSquarefree);
                }
                let mag = disc
                    .abs()
                    .to_u64()
                    .filter(|m| *m <= MAX_DISCRIMINANT)
                    .ok_or(NumberFieldError::DiscriminantTooLarge)?;
                let core = squarefree_part(mag) as i64;
                let d = if disc.is_negative() { -core } else { core };
                if d == 1 {
                    return Err(NumberFieldError::Reducible);
                }
                if d < 0 {
                    return Err(NumberFieldError::NotRealQuadratic(d));
                }
                let mut data = Self {
                    polynomial: f.clone(),
                    d: Some(d),
                    fundamental_unit: None,
                    torsion_order: 2,
                };
                data.fundamental_unit = Some(fundamental_unit(&data)?);
                Ok(data)
            }
            n => Err(NumberFieldError::UnsupportedDegree(n)),
        }
    }

    pub fn degree(&self) -> usize {
        if self.d.is_some() {
            2
        } else {
            1
        }
    }

    /// Whether `ω = (1 + √d)/2` (as opposed to `ω = √d`).
    pub fn half_integral(&self) -> bool {
        self.d.is_some_and(|d| d.rem_euclid(4) == 1)
    }

    /// Field norm of `p + q ω`.
    pub fn norm(&self, p: &BigInt, q: &BigInt) -> BigInt {
        let d = BigInt::from(self.d.expect("quadratic field"));
        if self.half_integral() {
            // ω^2 = ω + (d - 1)/4
            p * p + p * q - q * q * ((d - 1) / 4)
        } else {
            p * p - d * q * q
        }
    }
}

fn squarefree_part(mut m: u64) -> u64 {
    let mut out = 1;
    let mut p = 2u64;
    while p * p <= m {
        let mut k = 0;
        while m.is_multiple_of(p) {
            m /= p;
            k += 1;
        }
        if k % 2 == 1 {
            out *= p;
        }
        p += if p == 2 { 1 } else { 2 };
    }
    out * m
}

/// Fundamental unit `ε = p + q ω > 1` of the maximal order.
///
/// A unit `ε > 1` has conjugate `p + q ω'` of absolute value `1/ε`, so
/// `p/q` approximates `-ω'` closely enough to be one of its continued
/// fraction convergents. The first convergent of norm `±1` is therefore the
/// smallest unit above 1.
pub fn fundamental_unit(data: &QuadraticFieldData) -> Result<(BigInt, BigInt), NumberFieldError> {
    let d = data
        .d
        .filter(|d| *d > 1)
        .ok_or(NumberFieldError::NotRealQuadratic(data.d.unwrap_or(0)))?;
    let d128 = d as i128;
    let root = isqrt(d as u64) as i128;
    // -ω' = (P + √d) / Q
    let (mut big_p, mut big_q): (i128, i128) = if data.half_integral() { (-1, 2) } else { (0, 1) };
    let (mut p_prev, mut p_cur) = (BigInt::zero(), BigInt::one());
    let (mut q_prev, mut q_cur) = (BigInt::one(), BigInt::zero());
    for _ in 0..MAX_CF_STEPS {
        debug_assert!(big_q > 0);
        let a = num_integer::Integer::div_floor(&(big_p + root), &big_q);
        let a_big = BigInt::from(a);
        let p_next = &a_big * &p_cur + &p_prev;
        let q_next = &a_big * &q_cur + &q_prev;
        p_prev = std::mem::replace(&mut p_cur, p_next);
        q_prev = std::mem::replace(&mut q_cur, q_next);
        let n = data.norm(&p_cur, &q_cur);
        if n.abs().is_one() {
            return Ok((p_cur, q_cur));
        }
        big_p = a * big_q - big_p;
        big_q = (d128 - big_p * big_p) / big_q;
    }
    Err(NumberFieldError::InvalidUnit(format!(
        "no unit found for d = {d} within {MAX_CF_STEPS} continued-fraction steps"
    )))
}

fn isqrt(v: u64) -> u64 {
    let mut r = (v as f64).sqrt() as u64;
    while r * r > v {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= v {
        r += 1;
    }
    r
}

/// Matrix of multiplication by `ε` on the basis `(1, ω)` (row `i` is the
/// image of basis vector `i`) together with its integer inverse.
pub fn unit_action_matrices(
    data: &QuadraticFieldData,
) -> Result<(IntMatrix, IntMatrix), NumberFieldError> {
    let d = BigInt::from(data.d.ok_or(NumberFieldError::NotRealQuadratic(0))?);
    let (p, q) = data
        .fundamental_unit
        .clone()
        .ok_or_else(|| NumberFieldError::InvalidUnit("fundamental unit unknown".into()))?;
    // 1·ε = p + qω; ω·ε = pω + qω²
    let m = if data.half_integral() {
        vec![
            vec![p.clone(), q.clone()],
            vec![&q * ((&d - 1) / 4), &p + &q],
        ]
    } else {
        vec![vec![p.clone(), q.clone()], vec![&q * &d, p.clone()]]
    };
    let det = &m[0][0] * &m[1][1] - &m[0][1] * &m[1][0];
    if !det.abs().is_one() {
        return Err(NumberFieldError::InvalidUnit(format!("determinant {det}")));
    }
    let inv = vec![
        vec![&m[1][1] * &det, -&m[0][1] * &det],
        vec![-&m[1][0] * &det, &m[0][0] * &det],
    ];
    Ok((IntMatrix::new(m), IntMatrix::new(inv)))
}
