use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use super::{signature, NumberFieldError, Polynomial, QuadraticFieldData};
use crate::int::Int;
use crate::presentation::{GeneratorWord, Letter, Meta, PcPresentation, RelOrder, Sign};

/// Square integer matrix; row `i` is the image of basis vector `i` under
/// right multiplication.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntMatrix {
    rows: Vec<Vec<BigInt>>,
}

impl IntMatrix {
    pub fn new(rows: Vec<Vec<BigInt>>) -> Self {
        Self { rows }
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        Self::new(
            rows.iter()
                .map(|r| r.iter().map(|&v| BigInt::from(v)).collect())
                .collect(),
        )
    }

    pub fn identity(dim: usize) -> Self {
        Self::new(
            (0..dim)
                .map(|i| {
                    (0..dim)
                        .map(|j| if i == j { BigInt::one() } else { BigInt::zero() })
                        .collect()
                })
                .collect(),
        )
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Vec<BigInt>] {
        &self.rows
    }

    fn is_square(&self) -> bool {
        self.rows.iter().all(|r| r.len() == self.rows.len())
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity(self.dim())
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        let n = self.dim();
        let m = other.rows.first().map_or(0, Vec::len);
        let mut out = vec![vec![BigInt::zero(); m]; n];
        for (i, row) in self.rows.iter().enumerate() {
            for (k, a) in row.iter().enumerate() {
                if a.is_zero() {
                    continue;
                }
                for (j, b) in other.rows[k].iter().enumerate() {
                    out[i][j] += a * b;
                }
            }
        }
        IntMatrix::new(out)
    }

    pub fn scale(&self, c: &BigInt) -> IntMatrix {
        IntMatrix::new(
            self.rows
                .iter()
                .map(|r| r.iter().map(|v| v * c).collect())
                .collect(),
        )
    }

    pub fn add(&self, other: &IntMatrix) -> IntMatrix {
        IntMatrix::new(
            self.rows
                .iter()
                .zip(&other.rows)
                .map(|(a, b)| a.iter().zip(b).map(|(x, y)| x + y).collect())
                .collect(),
        )
    }

    /// Exact inverse over the rationals, `None` if singular or not integral.
    pub fn integer_inverse(&self) -> Option<IntMatrix> {
        let n = self.dim();
        let mut a: Vec<Vec<BigRational>> = self
            .rows
            .iter()
            .enumerate()
            .map(|(i, r)| {
                let mut row: Vec<BigRational> =
                    r.iter().map(|v| BigRational::from_integer(v.clone())).collect();
                row.extend((0..n).map(|j| {
                    if i == j {
                        BigRational::one()
                    } else {
                        BigRational::zero()
                    }
                }));
                row
            })
            .collect();
        for col in 0..n {
            let pivot = (col..n).find(|&r| !a[r][col].is_zero())?;
            a.swap(col, pivot);
            let inv = a[col][col].recip();
            for v in a[col].iter_mut() {
                *v *= &inv;
            }
            for r in 0..n {
                if r != col && !a[r][col].is_zero() {
                    let factor = a[r][col].clone();
                    for c in 0..2 * n {
                        let sub = &factor * &a[col][c];
                        a[r][c] -= sub;
                    }
                }
            }
        }
        let rows = a
            .into_iter()
            .map(|r| {
                r[n..]
                    .iter()
                    .map(|v| v.is_integer().then(|| v.to_integer()))
                    .collect::<Option<Vec<_>>>()
            })
            .collect::<Option<Vec<_>>>()?;
        Some(IntMatrix::new(rows))
    }
}

fn row_word(row: &[BigInt], first_gen: usize) -> GeneratorWord {
    GeneratorWord::from_letters(row.iter().enumerate().map(|(k, v)| Letter {
        gen: first_gen + k,
        exp: Int::from(v),
    }))
}

/// Presentation of `Z^dim ⋊ (<ε_1, ..., ε_r> × <-1>)` where the unit
/// generators act by the given commuting unimodular matrices.
///
/// Generating sequence: `u_1, ..., u_r, τ, x_1, ..., x_dim` with `u_i` the
/// units (infinite order), `τ` the torsion unit `-1` (order 2) and `x_j` the
/// additive basis. Relations: `x_j^{u_i}` is row `j` of `M_i`, `x_j^{u_i^{-1}}`
/// row `j` of `M_i^{-1}`, `x_j^τ = x_j^{-1}`, `τ^2 = 1`, everything else
/// commutes. The inverse conjugates by `τ` are left implicit.
pub fn build_from_unit_action(
    dim: usize,
    units: &[IntMatrix],
    meta: Meta,
) -> Result<PcPresentation, NumberFieldError> {
    if dim == 0 {
        return Err(NumberFieldError::ZeroDegree);
    }
    let mut inverses = Vec::with_capacity(units.len());
    for (i, m) in units.iter().enumerate() {
        if m.dim() != dim || !m.is_square() {
            return Err(NumberFieldError::InvalidUnit(format!(
                "unit {} is not a {dim}x{dim} matrix",
                i + 1
            )));
        }
        if m.is_identity() || m.scale(&BigInt::from(-1)).is_identity() {
            return Err(NumberFieldError::InvalidUnit(format!(
                "unit {} is a torsion unit",
                i + 1
            )));
        }
        let inv = m.integer_inverse().ok_or_else(|| {
            NumberFieldError::InvalidUnit(format!("unit {} is not invertible over Z", i + 1))
        })?;
        inverses.push(inv);
    }
    for i in 0..units.len() {
        for j in i + 1..units.len() {
            if units[i].mul(&units[j]) != units[j].mul(&units[i]) {
                return Err(NumberFieldError::InvalidUnit(format!(
                    "units {} and {} do not commute",
                    i + 1,
                    j + 1
                )));
            }
        }
    }

    let r = units.len();
    let tau = r;
    let x0 = r + 1;
    let n = r + 1 + dim;
    let mut orders = vec![RelOrder::Infinite; n];
    orders[tau] = RelOrder::Finite(2);
    let single = |g: usize, e: i64| GeneratorWord::from_pairs(&[(g, e)]);

    let mut b = PcPresentation::builder(orders);
    for i in 0..r {
        for j in i + 1..=tau {
            b = b.conj(i, j, Sign::Pos, single(j, 1));
            b = b.conj(i, j, Sign::Neg, single(j, 1));
        }
        for j in 0..dim {
            b = b.conj(i, x0 + j, Sign::Pos, row_word(&units[i].rows()[j], x0));
            b = b.conj(i, x0 + j, Sign::Neg, row_word(&inverses[i].rows()[j], x0));
        }
    }
    for j in 0..dim {
        b = b.conj(tau, x0 + j, Sign::Pos, single(x0 + j, -1));
    }
    for i in 0..dim {
        for j in i + 1..dim {
            b = b.conj(x0 + i, x0 + j, Sign::Pos, single(x0 + j, 1));
            b = b.conj(x0 + i, x0 + j, Sign::Neg, single(x0 + j, 1));
        }
    }
    b = b.power(tau, GeneratorWord::new());

    let mut names: Vec<String> = (1..=r).map(|i| format!("u{i}")).collect();
    names.push("tau".into());
    names.extend((1..=dim).map(|j| format!("x{j}")));
    let mut meta = meta;
    meta.extra.insert("generators".into(), serde_json::json!(names));
    b.meta(meta)
        .build()
        .map_err(|e| NumberFieldError::InvalidUnit(e.to_string()))
}

fn meta_for(f: &Polynomial, construction: &str) -> Meta {
    let mut extra = BTreeMap::new();
    extra.insert("construction".to_string(), serde_json::json!(construction));
    Meta {
        source_polynomial: Some(f.to_string()),
        extra,
    }
}

/// `O_F ⋊ U_F` for a degree-1 or real quadratic field.
pub fn build_semidirect_presentation(
    data: &QuadraticFieldData,
) -> Result<PcPresentation, NumberFieldError> {
    match data.degree() {
        1 => build_from_unit_action(
            1,
            &[],
            meta_for(&data.polynomial, "Z ⋊ {±1}"),
        ),
        _ => {
            let (m, _) = super::unit_action_matrices(data)?;
            let (p, q) = data.fundamental_unit.clone().expect("real quadratic");
            let d = data.d.expect("real quadratic");
            let omega = if data.half_integral() {
                format!("(1+sqrt({d}))/2")
            } else {
                format!("sqrt({d})")
            };
            build_from_unit_action(
                2,
                &[m],
                meta_for(
                    &data.polynomial,
                    &format!("Z[w] ⋊ <eps> × {{±1}}, w = {omega}, eps = {p} + {q}w"),
                ),
            )
        }
    }
}

/// Matrix of multiplication by `Σ coords[i] θ^i` on the power basis
/// `(1, θ, ..., θ^{n-1})` of `Z[θ]`, where `f(θ) = 0` and `f` is monic.
pub fn power_basis_unit_matrix(
    f: &Polynomial,
    coords: &[BigInt],
) -> Result<IntMatrix, NumberFieldError> {
    if !f.is_monic() {
        return Err(NumberFieldError::NotMonic);
    }
    let n = f.degree();
    if coords.len() != n {
        return Err(NumberFieldError::InvalidUnit(format!(
            "expected {n} power-basis coordinates, got {}",
            coords.len()
        )));
    }
    // θ·θ^i = θ^{i+1}; θ^n = -(c_{n-1} θ^{n-1} + ... + c_0)
    let mut companion = vec![vec![BigInt::zero(); n]; n];
    for i in 0..n - 1 {
        companion[i][i + 1] = BigInt::one();
    }
    let c = f.coeffs();
    for k in 0..n {
        companion[n - 1][k] = -&c[n - k];
    }
    let companion = IntMatrix::new(companion);
    let mut power = IntMatrix::identity(n);
    let mut acc = IntMatrix::new(vec![vec![BigInt::zero(); n]; n]);
    for a in coords {
        acc = acc.add(&power.scale(a));
        power = power.mul(&companion);
    }
    Ok(acc)
}

/// `Z[θ] ⋊ (<units> × {±1})` for a monic squarefree `f` of any degree, with
/// the units given by power-basis coordinates.
///
/// Exactly `s + t - 1` multiplicatively independent units are required, so
/// the Hirsch length matches [`super::predicted_hirsch`]. Whether they
/// generate the full unit group, and whether `Z[θ]` is the maximal order, is
/// the caller's responsibility.
pub fn build_from_power_basis_units(
    f: &Polynomial,
    units: &[Vec<BigInt>],
) -> Result<PcPresentation, NumberFieldError> {
    let sig = signature(f)?;
    let rank = sig.s + sig.t - 1;
    if units.len() != rank {
        return Err(NumberFieldError::InvalidUnit(format!(
            "unit rank is {rank} but {} units were given",
            units.len()
        )));
    }
    let matrices = units
        .iter()
        .map(|u| power_basis_unit_matrix(f, u))
        .collect::<Result<Vec<_>, _>>()?;
    if rank > 0 && !units_independent(f, sig.s, units) {
        return Err(NumberFieldError::InvalidUnit(
            "units are multiplicatively dependent".into(),
        ));
    }
    let mut meta = meta_for(f, "Z[theta] ⋊ <units> × {±1}, units in the power basis");
    let coords: Vec<Vec<Int>> = units
        .iter()
        .map(|u| u.iter().map(Int::from).collect())
        .collect();
    meta.extra.insert("units".into(), serde_json::json!(coords));
    build_from_unit_action(f.degree(), &matrices, meta)
}

/// Log-embedding regulator test: the `r x r` minor of `log|σ_j(u_i)|` over
/// the real embeddings and one embedding per complex pair must not vanish.
fn units_independent(f: &Polynomial, s: usize, units: &[Vec<BigInt>]) -> bool {
    let roots = complex_roots(f);
    let mut real: Vec<(f64, f64)> = Vec::new();
    let mut upper: Vec<(f64, f64)> = Vec::new();
    for &(re, im) in &roots {
        if im.abs() < 1e-9 * (1.0 + re.abs()) {
            real.push((re, 0.0));
        } else if im > 0.0 {
            upper.push((re, im));
        }
    }
    if real.len() != s {
        return false;
    }
    let embeddings: Vec<(f64, f64)> = real.into_iter().chain(upper).collect();
    let r = units.len();
    let mut m: Vec<Vec<f64>> = units
        .iter()
        .map(|u| {
            embeddings[..r]
                .iter()
                .map(|&(re, im)| {
                    let (mut acc_re, mut acc_im) = (0.0, 0.0);
                    let (mut p_re, mut p_im) = (1.0, 0.0);
                    for a in u {
                        let a = a.to_f64().unwrap_or(f64::NAN);
                        acc_re += a * p_re;
                        acc_im += a * p_im;
                        (p_re, p_im) = (p_re * re - p_im * im, p_re * im + p_im * re);
                    }
                    (acc_re.hypot(acc_im)).ln()
                })
                .collect()
        })
        .collect();
    // Gaussian elimination with partial pivoting for |det|
    let mut det = 1.0f64;
    for c in 0..r {
        let p = (c..r)
            .max_by(|&a, &b| m[a][c].abs().total_cmp(&m[b][c].abs()))
            .expect("non-empty");
        if m[p][c].abs() < 1e-8 {
            return false;
        }
        m.swap(c, p);
        det *= m[c][c];
        for row in c + 1..r {
            let factor = m[row][c] / m[c][c];
            for col in c..r {
                m[row][col] -= factor * m[c][col];
            }
        }
    }
    det.abs() > 1e-6
}

/// All complex roots by Durand-Kerner iteration.
fn complex_roots(f: &Polynomial) -> Vec<(f64, f64)> {
    let lead = f.leading().to_f64().unwrap_or(1.0);
    let coeffs: Vec<f64> = f
        .coeffs()
        .iter()
        .map(|c| c.to_f64().unwrap_or(f64::NAN) / lead)
        .collect();
    let n = f.degree();
    let eval = |re: f64, im: f64| {
        let (mut a, mut b) = (0.0, 0.0);
        for &c in &coeffs {
            (a, b) = (a * re - b * im + c, a * im + b * re);
        }
        (a, b)
    };
    let mut z: Vec<(f64, f64)> = (0..n)
        .map(|k| {
            let angle = 0.4 + 2.0 * std::f64::consts::PI * k as f64 / n as f64;
            (0.9 * angle.cos(), 0.9 * angle.sin())
        })
        .collect();
    for _ in 0..2000 {
        let mut delta = 0.0f64;
        for i in 0..n {
            let (num_re, num_im) = eval(z[i].0, z[i].1);
            let (mut den_re, mut den_im) = (1.0, 0.0);
            for j in 0..n {
                if i != j {
                    let (dr, di) = (z[i].0 - z[j].0, z[i].1 - z[j].1);
                    (den_re, den_im) = (den_re * dr - den_im * di, den_re * di + den_im * dr);
                }
            }
            let norm = den_re * den_re + den_im * den_im;
            let (q_re, q_im) = (
                (num_re * den_re + num_im * den_im) / norm,
                (num_im * den_re - num_re * den_im) / norm,
            );
            z[i] = (z[i].0 - q_re, z[i].1 - q_im);
            delta = delta.max(q_re.hypot(q_im));
        }
        if delta < 1e-14 {
            break;
        }
    }
    z
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::check_consistency;

    fn poly(s: &str) -> Polynomial {
        s.parse().unwrap()
    }

    #[test]
    fn degree_one_is_infinite_dihedral() {
        let data = QuadraticFieldData::from_polynomial(&poly("x-1")).unwrap();
        let p = build_semidirect_presentation(&data).unwrap();
        assert_eq!(p.orders(), &[RelOrder::Finite(2), RelOrder::Infinite]);
        assert_eq!(
            p.conj(0, 1, Sign::Pos),
            Some(&GeneratorWord::from_pairs(&[(1, -1)]))
        );
        assert_eq!(p.hirsch_length(), 1);
        assert!(check_consistency(&p).is_pass());
    }

    #[test]
    fn golden_ratio_relations() {
        let data = QuadraticFieldData::from_polynomial(&poly("x^2-x-1")).unwrap();
        let p = build_semidirect_presentation(&data).unwrap();
        assert_eq!(
            p.orders(),
            &[
                RelOrder::Infinite,
                RelOrder::Finite(2),
                RelOrder::Infinite,
                RelOrder::Infinite
            ]
        );
        assert_eq!(p.conj(0, 2, Sign::Pos), Some(&GeneratorWord::from_pairs(&[(3, 1)])));
        assert_eq!(
            p.conj(0, 3, Sign::Pos),
            Some(&GeneratorWord::from_pairs(&[(2, 1), (3, 1)]))
        );
        assert_eq!(p.hirsch_length(), 3);
        assert_eq!(p.meta().source_polynomial.as_deref(), Some("x^2-x-1"));
        assert!(check_consistency(&p).is_pass());
    }

    #[test]
    fn plastic_number_cubic() {
        let f = poly("x^3-x-1");
        let m = power_basis_unit_matrix(&f, &[0.into(), 1.into(), 0.into()]).unwrap();
        assert_eq!(m, IntMatrix::from_i64(&[&[0, 1, 0], &[0, 0, 1], &[1, 1, 0]]));
        let p = build_from_power_basis_units(&f, &[vec![0.into(), 1.into(), 0.into()]]).unwrap();
        assert_eq!(p.hirsch_length(), 4);
        assert!(check_consistency(&p).is_pass());
    }

    #[test]
    fn power_basis_checks() {
        let f = poly("x^3-x-1");
        // θ^2 is a unit but θ and θ^2 are dependent
        let theta = vec![BigInt::from(0), BigInt::from(1), BigInt::from(0)];
        let theta2 = vec![BigInt::from(0), BigInt::from(0), BigInt::from(1)];
        assert!(build_from_power_basis_units(&f, &[theta.clone(), theta2.clone()]).is_err());
        assert!(units_independent(&f, 1, &[theta2]));
        // 2 is not a unit
        let two = vec![BigInt::from(2), BigInt::from(0), BigInt::from(0)];
        assert!(build_from_power_basis_units(&f, &[two]).is_err());
        assert_eq!(
            power_basis_unit_matrix(&poly("2x^3-1"), &theta),
            Err(NumberFieldError::NotMonic)
        );
    }

    #[test]
    fn rejects_non_commuting_units() {
        let a = IntMatrix::from_i64(&[&[1, 1], &[0, 1]]);
        let b = IntMatrix::from_i64(&[&[1, 0], &[1, 1]]);
        assert!(build_from_unit_action(2, &[a, b], Meta::default()).is_err());
        let neg = IntMatrix::from_i64(&[&[-1, 0], &[0, -1]]);
        assert!(build_from_unit_action(2, &[neg], Meta::default()).is_err());
    }

    #[test]
    fn integer_inverse() {
        let m = IntMatrix::from_i64(&[&[2, 1], &[1, 1]]);
        assert_eq!(m.integer_inverse(), Some(IntMatrix::from_i64(&[&[1, -1], &[-1, 2]])));
        assert_eq!(IntMatrix::from_i64(&[&[2, 0], &[0, 1]]).integer_inverse(), None);
    }
}
