//! Arithmetic over the epsilon-complex numbers (ordinary complex numbers for
//! epsilon = -1, split-complex for epsilon = +1) and validity checks for
//! epsilon-quaternionic endomorphism triples.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{EkError, Result};

/// The sign selecting complex (-1) or para-complex (+1) geometry.
/// Carried as runtime data so one code path serves both.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "i8", into = "i8")]
pub struct Epsilon(i8);

impl Epsilon {
    pub const MINUS: Epsilon = Epsilon(-1);
    pub const PLUS: Epsilon = Epsilon(1);

    pub fn new(v: i8) -> Result<Epsilon> {
        match v {
            -1 | 1 => Ok(Epsilon(v)),
            _ => Err(EkError::InvalidSpec(format!("epsilon must be -1 or 1, got {v}"))),
        }
    }

    pub fn i8(self) -> i8 {
        self.0
    }

    pub fn f64(self) -> f64 {
        self.0 as f64
    }
}

impl TryFrom<i8> for Epsilon {
    type Error = String;
    fn try_from(v: i8) -> std::result::Result<Self, String> {
        Epsilon::new(v).map_err(|e| e.to_string())
    }
}

impl From<Epsilon> for i8 {
    fn from(e: Epsilon) -> i8 {
        e.0
    }
}

/// A scalar in the epsilon-complex plane: re + i_eps * im with (i_eps)^2 = eps.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EpsilonComplex {
    pub re: f64,
    pub im: f64,
    pub epsilon: Epsilon,
}

impl EpsilonComplex {
    pub fn new(re: f64, im: f64, epsilon: Epsilon) -> Self {
        EpsilonComplex { re, im, epsilon }
    }

    /// Modulus squared N(z) = re^2 - eps * im^2. Multiplicative; vanishes on
    /// the light cone of zero divisors in the para-complex case.
    pub fn modulus_sq(&self) -> f64 {
        self.re * self.re - self.epsilon.f64() * self.im * self.im
    }
}

/// Componentwise product (a1 b1 + eps a2 b2, a1 b2 + a2 b1).
pub fn ec_mul(a: EpsilonComplex, b: EpsilonComplex) -> Result<EpsilonComplex> {
    if a.epsilon != b.epsilon {
        return Err(EkError::EpsilonMismatch(a.epsilon.i8(), b.epsilon.i8()));
    }
    let eps = a.epsilon.f64();
    Ok(EpsilonComplex::new(
        a.re * b.re + eps * a.im * b.im,
        a.re * b.im + a.im * b.re,
        a.epsilon,
    ))
}

/// The epsilon-exponential: e^x (cos y + i sin y) for eps = -1 and
/// e^x (cosh y + i sinh y) for eps = +1.
pub fn ec_exp(z: EpsilonComplex) -> EpsilonComplex {
    let ex = z.re.exp();
    let (c, s) = match z.epsilon {
        Epsilon::MINUS => (z.im.cos(), z.im.sin()),
        _ => (z.im.cosh(), z.im.sinh()),
    };
    EpsilonComplex::new(ex * c, ex * s, z.epsilon)
}

/// Admissible signs for a quaternionic triple of endomorphisms.
/// Only the two triples used in the theory are constructible.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "[i8; 3]", into = "[i8; 3]")]
pub enum QuatSignature {
    /// (-1, -1, -1): pseudo-quaternionic.
    PseudoQuaternion,
    /// (-1, 1, 1): para-quaternionic.
    ParaQuaternion,
}

impl QuatSignature {
    pub fn eps(self) -> [f64; 3] {
        match self {
            QuatSignature::PseudoQuaternion => [-1.0, -1.0, -1.0],
            QuatSignature::ParaQuaternion => [-1.0, 1.0, 1.0],
        }
    }
}

impl TryFrom<[i8; 3]> for QuatSignature {
    type Error = String;
    fn try_from(v: [i8; 3]) -> std::result::Result<Self, String> {
        match v {
            [-1, -1, -1] => Ok(QuatSignature::PseudoQuaternion),
            [-1, 1, 1] => Ok(QuatSignature::ParaQuaternion),
            _ => Err(format!("inadmissible signature triple {v:?}")),
        }
    }
}

impl From<QuatSignature> for [i8; 3] {
    fn from(s: QuatSignature) -> [i8; 3] {
        match s {
            QuatSignature::PseudoQuaternion => [-1, -1, -1],
            QuatSignature::ParaQuaternion => [-1, 1, 1],
        }
    }
}

/// Residuals of the defining relations of a quaternionic triple.
#[derive(Clone, Debug)]
pub struct QuatTripleReport {
    /// max-abs of J_a^2 - eps_a Id, per a
    pub square_residuals: [f64; 3],
    /// max-abs of J1 J2 - J3
    pub product_residual: f64,
    /// max-abs of g(J_a X, Y) + g(X, J_a Y), per a
    pub skew_residuals: [f64; 3],
    pub max_residual: f64,
}

impl QuatTripleReport {
    pub fn passes(&self, tol: f64) -> bool {
        self.max_residual <= tol
    }
}

fn max_abs(m: &DMatrix<f64>) -> f64 {
    m.iter().fold(0.0f64, |a, &x| a.max(x.abs()))
}

/// Check J_a^2 = eps_a, J1 J2 = J3 and metric skewness over the chosen basis.
pub fn quat_triple_check(
    j: [&DMatrix<f64>; 3],
    sig: QuatSignature,
    g: &DMatrix<f64>,
) -> Result<QuatTripleReport> {
    let n = g.nrows();
    if g.ncols() != n {
        return Err(EkError::DimensionMismatch { expected: n, got: g.ncols() });
    }
    for ja in &j {
        if ja.nrows() != n || ja.ncols() != n {
            return Err(EkError::DimensionMismatch { expected: n, got: ja.nrows() });
        }
    }
    if n % 4 != 0 {
        return Err(EkError::InvalidSpec(format!(
            "quaternionic dimension must be divisible by 4, got {n}"
        )));
    }
    if !g.clone().lu().is_invertible() {
        return Err(EkError::NearDegenerateMetric { cond: f64::INFINITY });
    }
    let eps = sig.eps();
    let id = DMatrix::identity(n, n);
    let mut square = [0.0; 3];
    let mut skew = [0.0; 3];
    for a in 0..3 {
        square[a] = max_abs(&(j[a] * j[a] - &id * eps[a]));
        skew[a] = max_abs(&(j[a].transpose() * g + g * j[a]));
    }
    let product = max_abs(&(j[0] * j[1] - j[2]));
    let max_residual = square
        .iter()
        .chain(skew.iter())
        .fold(product, |acc, &x| acc.max(x));
    Ok(QuatTripleReport { square_residuals: square, product_residual: product, skew_residuals: skew, max_residual })
}

/// The standard quaternionic triple on R^4 (left multiplication by i, j, k
/// in the basis 1, i, j, k), skew with respect to the Euclidean metric.
pub fn pseudo_quaternion_block() -> [DMatrix<f64>; 3] {
    let li = DMatrix::from_row_slice(4, 4, &[
        0.0, -1.0, 0.0, 0.0,
        1.0, 0.0, 0.0, 0.0,
        0.0, 0.0, 0.0, -1.0,
        0.0, 0.0, 1.0, 0.0,
    ]);
    let lj = DMatrix::from_row_slice(4, 4, &[
        0.0, 0.0, -1.0, 0.0,
        0.0, 0.0, 0.0, 1.0,
        1.0, 0.0, 0.0, 0.0,
        0.0, -1.0, 0.0, 0.0,
    ]);
    let lk = DMatrix::from_row_slice(4, 4, &[
        0.0, 0.0, 0.0, -1.0,
        0.0, 0.0, -1.0, 0.0,
        0.0, 1.0, 0.0, 0.0,
        1.0, 0.0, 0.0, 0.0,
    ]);
    [li, lj, lk]
}

/// A para-quaternionic triple on R^4, skew with respect to diag(1,1,-1,-1):
/// J1^2 = -1, J2^2 = J3^2 = +1, J1 J2 = J3.
pub fn para_quaternion_block() -> [DMatrix<f64>; 3] {
    let j1 = DMatrix::from_row_slice(4, 4, &[
        0.0, -1.0, 0.0, 0.0,
        1.0, 0.0, 0.0, 0.0,
        0.0, 0.0, 0.0, -1.0,
        0.0, 0.0, 1.0, 0.0,
    ]);
    let j2 = DMatrix::from_row_slice(4, 4, &[
        0.0, 0.0, 1.0, 0.0,
        0.0, 0.0, 0.0, -1.0,
        1.0, 0.0, 0.0, 0.0,
        0.0, -1.0, 0.0, 0.0,
    ]);
    let j3 = DMatrix::from_row_slice(4, 4, &[
        0.0, 0.0, 0.0, -1.0,
        0.0, 0.0, -1.0, 0.0,
        0.0, 1.0, 0.0, 0.0,
        1.0, 0.0, 0.0, 0.0,
    ]);
    [j1, j2, j3]
}

/// Standard flat triple on R^(4n), block-diagonal, together with a compatible
/// metric. For the pseudo case the metric is blockwise +-I4 with `pos`
/// positive blocks and n - pos negative ones; for the para case each block
/// carries diag(1,1,-1,-1).
pub fn standard_triple(
    sig: QuatSignature,
    n: usize,
    pos: usize,
) -> Result<([DMatrix<f64>; 3], DMatrix<f64>)> {
    if n == 0 || pos > n {
        return Err(EkError::InvalidSpec(format!("bad block counts n={n}, pos={pos}")));
    }
    let d = 4 * n;
    let block = match sig {
        QuatSignature::PseudoQuaternion => pseudo_quaternion_block(),
        QuatSignature::ParaQuaternion => para_quaternion_block(),
    };
    let mut js = [DMatrix::zeros(d, d), DMatrix::zeros(d, d), DMatrix::zeros(d, d)];
    let mut g = DMatrix::zeros(d, d);
    for blk in 0..n {
        let off = 4 * blk;
        for a in 0..3 {
            for r in 0..4 {
                for c in 0..4 {
                    js[a][(off + r, off + c)] = block[a][(r, c)];
                }
            }
        }
        for r in 0..4 {
            let s = match sig {
                QuatSignature::PseudoQuaternion => {
                    if blk < pos {
                        1.0
                    } else {
                        -1.0
                    }
                }
                QuatSignature::ParaQuaternion => {
                    if r < 2 {
                        1.0
                    } else {
                        -1.0
                    }
                }
            };
            g[(off + r, off + r)] = s;
        }
    }
    Ok((js, g))
}
