use num_bigint::BigUint;
use num_complex::Complex64;
use num_traits::{One, Zero};
use serde::Serialize;

use super::AnalysisError;
use crate::geom::{Mode, Point, Scalar, UnitRotation};
use crate::rules::InflationRule;

pub const SPECTRAL_TOLERANCE: f64 = 1e-10;
pub const SPECTRAL_MAX_ITERATIONS: usize = 100_000;

/// `a[j][k]` = number of children of type `j` in `F(P_k)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SubstitutionMatrix {
    pub a: Vec<Vec<u64>>,
}

impl SubstitutionMatrix {
    pub fn size(&self) -> usize {
        self.a.len()
    }

    pub fn column_sums(&self) -> Vec<u64> {
        (0..self.size()).map(|k| self.a.iter().map(|row| row[k]).sum()).collect()
    }

    pub fn to_big(&self) -> Vec<Vec<BigUint>> {
        self.a.iter().map(|row| row.iter().map(|&x| BigUint::from(x)).collect()).collect()
    }

    pub fn to_complex(&self) -> Vec<Vec<Complex64>> {
        self.a.iter().map(|row| row.iter().map(|&x| Complex64::new(x as f64, 0.0)).collect()).collect()
    }

    /// `A^r` in exact integers.
    pub fn power(&self, r: u32) -> Vec<Vec<BigUint>> {
        let n = self.size();
        let mut acc: Vec<Vec<BigUint>> =
            (0..n).map(|i| (0..n).map(|j| if i == j { BigUint::one() } else { BigUint::zero() }).collect()).collect();
        let base = self.to_big();
        for _ in 0..r {
            acc = big_mul(&base, &acc);
        }
        acc
    }

    /// `A^r e_k`.
    pub fn column_power(&self, k: usize, r: u32) -> Vec<BigUint> {
        let n = self.size();
        let mut v: Vec<BigUint> = (0..n).map(|j| if j == k { BigUint::one() } else { BigUint::zero() }).collect();
        let base = self.to_big();
        for _ in 0..r {
            v = (0..n).map(|i| (0..n).map(|j| &base[i][j] * &v[j]).sum()).collect();
        }
        v
    }

    /// Some power of `A` is entrywise positive. By Wielandt's bound it
    /// suffices to look at `(n−1)² + 1`.
    pub fn is_primitive(&self) -> bool {
        let n = self.size();
        let pattern: Vec<Vec<bool>> = self.a.iter().map(|row| row.iter().map(|&x| x > 0).collect()).collect();
        let mut p = pattern.clone();
        for _ in 1..(n - 1) * (n - 1) + 1 {
            p = bool_mul(&pattern, &p);
        }
        p.iter().flatten().all(|&b| b)
    }

    /// `Σ_j A_jk · area(P_j) = λ⁻² · area(P_k)` for every `k`.
    pub fn column_area_identity(&self, rule: &InflationRule) -> bool {
        let l2 = &rule.lambda * &rule.lambda;
        (0..self.size()).all(|k| {
            let lhs = (0..self.size()).fold(Scalar::zero(), |acc, j| {
                &acc + &(&Scalar::int(self.a[j][k] as i64) * &rule.prototiles[j].shape.area())
            });
            (&(&lhs * &l2) - &rule.prototiles[k].shape.area()).is_zero()
        })
    }
}

fn big_mul(a: &[Vec<BigUint>], b: &[Vec<BigUint>]) -> Vec<Vec<BigUint>> {
    let n = a.len();
    (0..n).map(|i| (0..n).map(|j| (0..n).map(|k| &a[i][k] * &b[k][j]).sum()).collect()).collect()
}

fn bool_mul(a: &[Vec<bool>], b: &[Vec<bool>]) -> Vec<Vec<bool>> {
    let n = a.len();
    (0..n).map(|i| (0..n).map(|j| (0..n).any(|k| a[i][k] && b[k][j])).collect()).collect()
}

pub fn substitution_matrix(rule: &InflationRule) -> SubstitutionMatrix {
    let n = rule.type_count();
    let mut a = vec![vec![0u64; n]; n];
    for (k, cs) in rule.children.iter().enumerate() {
        for c in cs {
            a[c.child_type][k] += 1;
        }
    }
    SubstitutionMatrix { a }
}

/// Rotation parts of the child poses, `entries[j][k]` listing the children
/// of type `j` in `F(P_k)`. A child pose is read as a rotation composed with
/// the fixed reflection `z ↦ z̄` when its flag is set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AngleTable {
    pub entries: Vec<Vec<Vec<UnitRotation>>>,
}

impl AngleTable {
    pub fn from_rule(rule: &InflationRule) -> AngleTable {
        let n = rule.type_count();
        let mut entries = vec![vec![Vec::new(); n]; n];
        for (k, cs) in rule.children.iter().enumerate() {
            for c in cs {
                entries[c.child_type][k].push(c.pose.rot.clone());
            }
        }
        AngleTable { entries }
    }

    pub fn direct_count(&self, j: usize, k: usize) -> usize {
        self.entries[j][k].iter().filter(|u| !u.reflects()).count()
    }

    pub fn reflected_count(&self, j: usize, k: usize) -> usize {
        self.entries[j][k].iter().filter(|u| u.reflects()).count()
    }
}

/// How reflected children enter `A[m]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TwistConvention {
    /// Every child contributes `e^{i m a}`.
    Plain,
    /// Reflected children contribute `e^{−i m a}`.
    ConjugateReflected,
}

pub const TWIST_CONVENTIONS: [TwistConvention; 2] = [TwistConvention::Plain, TwistConvention::ConjugateReflected];

#[derive(Clone, Debug, PartialEq)]
pub struct TwistedMatrix {
    pub m: i64,
    pub convention: TwistConvention,
    pub entries: Vec<Vec<Complex64>>,
}

/// `u^m` as a double-precision complex number; exact until the last step
/// when `u` is exact.
pub fn unit_power(u: &Point, m: i64) -> Complex64 {
    if u.mode() == Some(Mode::Exact) && m.unsigned_abs() <= 64 {
        let base = if m < 0 { u.conj() } else { u.clone() };
        let (x, y) = base.cpow(m.unsigned_abs() as u32).to_f64();
        return Complex64::new(x, y);
    }
    let (x, y) = u.to_f64();
    Complex64::from_polar(1.0, m as f64 * y.atan2(x))
}

pub fn twisted_matrix(rule: &InflationRule, m: i64, convention: TwistConvention) -> TwistedMatrix {
    let table = AngleTable::from_rule(rule);
    let n = rule.type_count();
    let entries = (0..n)
        .map(|j| {
            (0..n)
                .map(|k| {
                    table.entries[j][k]
                        .iter()
                        .map(|u| {
                            let sign =
                                if u.reflects() && convention == TwistConvention::ConjugateReflected { -1 } else { 1 };
                            unit_power(u.value(), sign * m)
                        })
                        .sum()
                })
                .collect()
        })
        .collect();
    TwistedMatrix { m, convention, entries }
}

/// Twisted matrix on `2n` states, tile type and handedness: rows and
/// columns `0..n` are direct, `n..2n` reflected. A reflected child
/// conjugates the angles of everything below it, so the Weyl sum over
/// `F^r(P_k)` is `Σ_{j<n} (B^r (e_k + e_{n+k}))_j / |F^r(P_k)|` for every
/// rule, with or without reflections.
pub fn handedness_matrix(rule: &InflationRule, m: i64) -> Vec<Vec<Complex64>> {
    let n = rule.type_count();
    let mut b = vec![vec![Complex64::zero(); 2 * n]; 2 * n];
    for (k, cs) in rule.children.iter().enumerate() {
        for c in cs {
            let t = c.child_type;
            let (same, flipped) = if c.pose.rot.reflects() { (n + t, t) } else { (t, n + t) };
            b[same][k] += unit_power(c.pose.rot.value(), m);
            b[flipped][n + k] += unit_power(c.pose.rot.value(), -m);
        }
    }
    b
}

/// `Σ_{j<n} (B^r (e_k + e_{n+k}))_j` for a [`handedness_matrix`] `B`.
pub fn handedness_sum(b: &[Vec<Complex64>], k: usize, r: u32) -> Complex64 {
    let n = b.len() / 2;
    let mut v: Vec<Complex64> =
        (0..2 * n).map(|j| if j == k || j == n + k { Complex64::one() } else { Complex64::zero() }).collect();
    for _ in 0..r {
        v = mat_vec(b, &v);
    }
    v[..n].iter().sum()
}

pub fn mat_vec(m: &[Vec<Complex64>], x: &[Complex64]) -> Vec<Complex64> {
    m.iter().map(|row| row.iter().zip(x).map(|(a, b)| a * b).sum()).collect()
}

/// `1ᵀ M^r e_k`.
pub fn sum_of_column_power(m: &[Vec<Complex64>], k: usize, r: u32) -> Complex64 {
    let mut v: Vec<Complex64> =
        (0..m.len()).map(|j| if j == k { Complex64::one() } else { Complex64::zero() }).collect();
    for _ in 0..r {
        v = mat_vec(m, &v);
    }
    v.iter().sum()
}

fn norm2(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Largest eigenvalue modulus.
///
/// Power iteration runs first: it stops when successive estimates agree to
/// [`SPECTRAL_TOLERANCE`] (relative, floored at 1). When several dominant
/// eigenvalues share a modulus the estimate oscillates instead, and the
/// eigenvalues are read off a complex Schur decomposition.
pub fn spectral_radius(m: &[Vec<Complex64>]) -> Result<f64, AnalysisError> {
    match power_iteration(m) {
        Ok(rho) => Ok(rho),
        Err(stalled) => schur_radius(m).ok_or(stalled),
    }
}

fn power_iteration(m: &[Vec<Complex64>]) -> Result<f64, AnalysisError> {
    let n = m.len();
    if n == 0 {
        return Ok(0.0);
    }
    // A fixed start with distinct complex components, so it is not
    // orthogonal to the dominant eigenvector of any of the small matrices
    // this is used on.
    let mut x: Vec<Complex64> = (0..n).map(|i| Complex64::new(1.0 + 0.37 * i as f64, 0.11 * (i + 1) as f64)).collect();
    let s = norm2(&x);
    x.iter_mut().for_each(|z| *z /= s);
    let mut prev = f64::NAN;
    let mut est = 0.0;
    for _ in 0..SPECTRAL_MAX_ITERATIONS {
        let y = mat_vec(m, &x);
        est = norm2(&y);
        if est == 0.0 {
            return Ok(0.0);
        }
        x = y.into_iter().map(|z| z / est).collect();
        if (est - prev).abs() <= SPECTRAL_TOLERANCE * est.max(1.0) {
            return Ok(est);
        }
        prev = est;
    }
    Err(AnalysisError::SpectralNoConverge { last: est, iterations: SPECTRAL_MAX_ITERATIONS })
}

fn schur_radius(m: &[Vec<Complex64>]) -> Option<f64> {
    let n = m.len();
    let dm = nalgebra::DMatrix::from_fn(n, n, |j, k| m[j][k]);
    let schur = nalgebra::linalg::Schur::try_new(dm, 1e-14, SPECTRAL_MAX_ITERATIONS)?;
    let t = schur.unpack().1;
    Some((0..n).map(|i| t[(i, i)].norm()).fold(0.0, f64::max))
}

/// Positive eigenvector of a primitive matrix, normalized to sum 1.
pub fn perron_vector(a: &SubstitutionMatrix) -> Result<Vec<f64>, AnalysisError> {
    let n = a.size();
    let mut x = vec![1.0 / n as f64; n];
    for _ in 0..SPECTRAL_MAX_ITERATIONS {
        let y: Vec<f64> = a.a.iter().map(|row| row.iter().zip(&x).map(|(&p, q)| p as f64 * q).sum()).collect();
        let s: f64 = y.iter().sum();
        let y: Vec<f64> = y.into_iter().map(|v| v / s).collect();
        let delta: f64 = y.iter().zip(&x).map(|(p, q)| (p - q).abs()).sum();
        x = y;
        if delta <= SPECTRAL_TOLERANCE * 1e-2 {
            return Ok(x);
        }
    }
    Err(AnalysisError::SpectralNoConverge { last: f64::NAN, iterations: SPECTRAL_MAX_ITERATIONS })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rules::{builtin, folded_pinwheel, Builtin};

    #[test]
    fn builtin_matrices() {
        let sq = substitution_matrix(&builtin(Builtin::Square));
        assert_eq!(sq.a, vec![vec![4]]);
        let pw = substitution_matrix(&builtin(Builtin::Pinwheel));
        assert_eq!(pw.column_sums(), vec![5, 5]);
        assert!(pw.column_area_identity(&builtin(Builtin::Pinwheel)));
        assert!(pw.is_primitive());
        assert_eq!(substitution_matrix(&folded_pinwheel()).a, vec![vec![5]]);
    }

    #[test]
    fn powers() {
        let a = SubstitutionMatrix { a: vec![vec![1, 1], vec![1, 0]] };
        assert_eq!(a.power(10)[0][0], BigUint::from(89u32));
        assert_eq!(a.column_power(1, 10), vec![BigUint::from(55u32), BigUint::from(34u32)]);
        assert!(a.is_primitive());
        assert!(!SubstitutionMatrix { a: vec![vec![0, 1], vec![1, 0]] }.is_primitive());
        assert!(!SubstitutionMatrix { a: vec![vec![1, 1], vec![0, 1]] }.is_primitive());
    }

    #[test]
    fn spectral_radius_small_cases() {
        let c = |x: f64| Complex64::new(x, 0.0);
        assert!((spectral_radius(&[vec![c(4.0)]]).unwrap() - 4.0).abs() < 1e-12);
        assert_eq!(spectral_radius(&[vec![c(0.0)]]).unwrap(), 0.0);
        // [[2,1],[1,2]] has eigenvalues 3 and 1.
        let m = vec![vec![c(2.0), c(1.0)], vec![c(1.0), c(2.0)]];
        assert!((spectral_radius(&m).unwrap() - 3.0).abs() < 1e-9);
        // A rotation by 90°: both eigenvalues have modulus 1.
        let r = vec![vec![c(0.0), c(-1.0)], vec![c(1.0), c(0.0)]];
        assert!((spectral_radius(&r).unwrap() - 1.0).abs() < 1e-12);
        // Eigenvalues 1 and -1 of a non-normal matrix: the power iterates cycle.
        let t = vec![vec![c(1.0), c(2.0)], vec![c(0.0), c(-1.0)]];
        assert!(power_iteration(&t).is_err());
        assert!((spectral_radius(&t).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn perron_vector_of_symmetric_matrix() {
        let v = perron_vector(&SubstitutionMatrix { a: vec![vec![2, 3], vec![3, 2]] }).unwrap();
        assert!((v[0] - 0.5).abs() < 1e-12 && (v[1] - 0.5).abs() < 1e-12);
    }

    #[test]
    fn unit_powers() {
        let i = Point::int(0, 1);
        assert!((unit_power(&i, 2) - Complex64::new(-1.0, 0.0)).norm() < 1e-15);
        assert!((unit_power(&i, -1) - Complex64::new(0.0, -1.0)).norm() < 1e-15);
        let a = Point::approx(0.6, 0.8);
        assert!((unit_power(&a, 3) - Complex64::new(0.6, 0.8).powi(3)).norm() < 1e-12);
    }
}
