//! Truncated multivariate Taylor arithmetic (forward-mode jets).
//!
//! A [`Jet`] holds the Taylor coefficients of a smooth quantity at a base
//! point, in `nvars` variables up to total degree `order`. Arithmetic on
//! jets propagates derivatives exactly, so curvature formulas evaluated in
//! jet arithmetic carry exact partials of the metric with no
//! finite-difference noise. Order 4 covers two covariant derivatives of the
//! curvature tensor (fourth metric derivatives).
//!
//! Charts declare which coordinates their metric actually depends on, so the
//! jet dimension stays small (two variables for the plane-wave-type models)
//! and higher orders remain cheap.

use std::collections::HashMap;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, Mutex, OnceLock};

/// Highest supported truncation order.
pub const MAX_ORDER: usize = 4;

/// Monomial basis for a fixed (nvars, order): exponent tuples of total degree
/// <= order, sorted by degree then lexicographically. The basis of a lower
/// order is always a prefix of the basis of a higher order.
struct Basis {
    exps: Vec<Vec<u8>>,
    index: HashMap<Vec<u8>, usize>,
    /// count of monomials of degree <= k, for k = 0..=order
    cum: Vec<usize>,
    /// (i, j, k) with monomial_i * monomial_j = monomial_k
    prods: Vec<(u32, u32, u32)>,
}

fn enumerate(nvars: usize, order: usize) -> Vec<Vec<u8>> {
    let mut out: Vec<Vec<u8>> = vec![];
    let mut cur = vec![0u8; nvars];
    fn rec(cur: &mut Vec<u8>, pos: usize, left: usize, out: &mut Vec<Vec<u8>>) {
        if pos == cur.len() {
            out.push(cur.clone());
            return;
        }
        for d in 0..=left {
            cur[pos] = d as u8;
            rec(cur, pos + 1, left - d, out);
        }
        cur[pos] = 0;
    }
    for deg in 0..=order {
        let mut level: Vec<Vec<u8>> = vec![];
        rec(&mut cur, 0, deg, &mut level);
        level.retain(|e| e.iter().map(|&x| x as usize).sum::<usize>() == deg);
        level.sort();
        out.extend(level);
    }
    out
}

fn build_basis(nvars: usize, order: usize) -> Basis {
    let exps = enumerate(nvars, order);
    let mut index = HashMap::new();
    for (i, e) in exps.iter().enumerate() {
        index.insert(e.clone(), i);
    }
    let deg = |e: &Vec<u8>| e.iter().map(|&x| x as usize).sum::<usize>();
    let mut cum = vec![0usize; order + 1];
    for e in &exps {
        for k in deg(e)..=order {
            cum[k] += 1;
        }
    }
    let mut prods = vec![];
    for (i, a) in exps.iter().enumerate() {
        for (j, b) in exps.iter().enumerate() {
            if deg(a) + deg(b) <= order {
                let sum: Vec<u8> = a.iter().zip(b).map(|(x, y)| x + y).collect();
                prods.push((i as u32, j as u32, index[&sum] as u32));
            }
        }
    }
    Basis { exps, index, cum, prods }
}

fn basis(nvars: usize, order: usize) -> Arc<Basis> {
    static CACHE: OnceLock<Mutex<HashMap<(usize, usize), Arc<Basis>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let mut map = cache.lock().unwrap();
    map.entry((nvars, order))
        .or_insert_with(|| Arc::new(build_basis(nvars, order)))
        .clone()
}

/// Truncated Taylor polynomial in `nvars` variables.
#[derive(Clone)]
pub struct Jet {
    nvars: usize,
    order: usize,
    c: Vec<f64>,
    b: Arc<Basis>,
}

impl std::fmt::Debug for Jet {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Jet(n={}, ord={}, val={}, c={:?})", self.nvars, self.order, self.value(), self.c)
    }
}

impl Jet {
    pub fn constant(nvars: usize, order: usize, v: f64) -> Jet {
        assert!(order <= MAX_ORDER);
        let b = basis(nvars, order);
        let mut c = vec![0.0; b.exps.len()];
        c[0] = v;
        Jet { nvars, order, c, b }
    }

    /// The jet of the i-th coordinate function at value `v`.
    pub fn variable(nvars: usize, order: usize, i: usize, v: f64) -> Jet {
        let mut j = Jet::constant(nvars, order, v);
        if order >= 1 {
            j.c[1 + i] = 1.0;
        }
        j
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn value(&self) -> f64 {
        self.c[0]
    }

    /// First-order coefficient in direction i (the partial derivative value).
    pub fn grad(&self, i: usize) -> f64 {
        if self.order == 0 {
            0.0
        } else {
            self.c[1 + i]
        }
    }

    fn truncated(&self, order: usize) -> Jet {
        if order == self.order {
            return self.clone();
        }
        assert!(order < self.order);
        let b = basis(self.nvars, order);
        let n = b.exps.len();
        Jet { nvars: self.nvars, order, c: self.c[..n].to_vec(), b }
    }

    /// Partial derivative: a jet of one order less.
    pub fn partial(&self, i: usize) -> Jet {
        assert!(self.order >= 1, "cannot differentiate an order-0 jet");
        let nb = basis(self.nvars, self.order - 1);
        let mut c = vec![0.0; nb.exps.len()];
        for (k, e) in nb.exps.iter().enumerate() {
            let mut up = e.clone();
            up[i] += 1;
            let src = self.b.index[&up];
            c[k] = self.c[src] * (up[i] as f64);
        }
        Jet { nvars: self.nvars, order: self.order - 1, c, b: nb }
    }

    /// Coefficient of a monomial given by exponents (without factorials).
    pub fn coeff(&self, exps: &[u8]) -> f64 {
        match self.b.index.get(&exps.to_vec()) {
            Some(&i) => self.c[i],
            None => 0.0,
        }
    }

    /// The partial derivative value d^|a| f / dx^a (coefficient times a!).
    pub fn deriv(&self, exps: &[u8]) -> f64 {
        let fact: f64 = exps
            .iter()
            .map(|&k| (1..=k as u64).product::<u64>() as f64)
            .product();
        self.coeff(exps) * fact
    }

    pub fn scale(&self, s: f64) -> Jet {
        let mut out = self.clone();
        for x in &mut out.c {
            *x *= s;
        }
        out
    }

    fn bin(&self, rhs: &Jet, f: impl Fn(f64, f64) -> f64) -> Jet {
        assert_eq!(self.nvars, rhs.nvars, "jet variable-count mismatch");
        let order = self.order.min(rhs.order);
        let a = self.truncated(order);
        let b = rhs.truncated(order);
        let c = a.c.iter().zip(&b.c).map(|(&x, &y)| f(x, y)).collect();
        Jet { nvars: self.nvars, order, c, b: a.b }
    }

    pub fn mul_jet(&self, rhs: &Jet) -> Jet {
        assert_eq!(self.nvars, rhs.nvars, "jet variable-count mismatch");
        let order = self.order.min(rhs.order);
        let a = self.truncated(order);
        let bb = rhs.truncated(order);
        let mut c = vec![0.0; a.b.exps.len()];
        for &(i, j, k) in &a.b.prods {
            c[k as usize] += a.c[i as usize] * bb.c[j as usize];
        }
        Jet { nvars: self.nvars, order, c, b: a.b }
    }

    /// Compose with a univariate function given its derivatives at the value:
    /// `derivs[k]` = f^(k)(value), k = 0..=order.
    pub fn compose(&self, derivs: &[f64]) -> Jet {
        let order = self.order;
        assert!(derivs.len() > order);
        let mut h = self.clone();
        h.c[0] = 0.0;
        let mut fact = 1.0;
        let coef: Vec<f64> = (0..=order)
            .map(|k| {
                if k > 0 {
                    fact *= k as f64;
                }
                derivs[k] / fact
            })
            .collect();
        let mut r = Jet::constant(self.nvars, order, coef[order]);
        for k in (0..order).rev() {
            r = r.mul_jet(&h);
            r.c[0] += coef[k];
        }
        r
    }

    pub fn recip(&self) -> Jet {
        let v = self.value();
        assert!(v != 0.0, "jet reciprocal at zero");
        let mut d = vec![0.0; self.order + 1];
        let mut cur = 1.0 / v;
        let mut fact = 1.0;
        for (k, slot) in d.iter_mut().enumerate() {
            // d^k(1/x) = (-1)^k k! / x^(k+1)
            *slot = cur * fact;
            cur *= -1.0 / v;
            fact *= (k + 1) as f64;
        }
        self.compose(&d)
    }

    pub fn div(&self, rhs: &Jet) -> Jet {
        self.mul_jet(&rhs.recip())
    }

    pub fn sqrt(&self) -> Jet {
        let v = self.value();
        assert!(v > 0.0, "jet sqrt of non-positive value");
        // d^k sqrt(v) = (1/2)(1/2 - 1)...(1/2 - k + 1) v^(1/2 - k)
        let mut d = vec![0.0; self.order + 1];
        let mut falling = 1.0;
        for (k, slot) in d.iter_mut().enumerate() {
            if k > 0 {
                falling *= 0.5 - (k as f64 - 1.0);
            }
            *slot = falling * v.powf(0.5 - k as f64);
        }
        self.compose(&d)
    }

    pub fn exp(&self) -> Jet {
        let e = self.value().exp();
        let d = vec![e; self.order + 1];
        self.compose(&d)
    }

    pub fn sin(&self) -> Jet {
        let (s, c) = self.value().sin_cos();
        let cycle = [s, c, -s, -c];
        let d: Vec<f64> = (0..=self.order).map(|k| cycle[k % 4]).collect();
        self.compose(&d)
    }

    pub fn cos(&self) -> Jet {
        let (s, c) = self.value().sin_cos();
        let cycle = [c, -s, -c, s];
        let d: Vec<f64> = (0..=self.order).map(|k| cycle[k % 4]).collect();
        self.compose(&d)
    }

    pub fn sinh(&self) -> Jet {
        let (s, c) = (self.value().sinh(), self.value().cosh());
        let d: Vec<f64> = (0..=self.order).map(|k| if k % 2 == 0 { s } else { c }).collect();
        self.compose(&d)
    }

    pub fn cosh(&self) -> Jet {
        let (s, c) = (self.value().sinh(), self.value().cosh());
        let d: Vec<f64> = (0..=self.order).map(|k| if k % 2 == 0 { c } else { s }).collect();
        self.compose(&d)
    }

    pub fn powi(&self, n: i32) -> Jet {
        if n == 0 {
            return Jet::constant(self.nvars, self.order, 1.0);
        }
        let neg = n < 0;
        let mut r = self.clone();
        for _ in 1..n.abs() {
            r = r.mul_jet(self);
        }
        if neg {
            r.recip()
        } else {
            r
        }
    }
}

impl Add for &Jet {
    type Output = Jet;
    fn add(self, rhs: &Jet) -> Jet {
        self.bin(rhs, |a, b| a + b)
    }
}
impl Sub for &Jet {
    type Output = Jet;
    fn sub(self, rhs: &Jet) -> Jet {
        self.bin(rhs, |a, b| a - b)
    }
}
impl Mul for &Jet {
    type Output = Jet;
    fn mul(self, rhs: &Jet) -> Jet {
        self.mul_jet(rhs)
    }
}
impl Neg for &Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        self.scale(-1.0)
    }
}
impl Add for Jet {
    type Output = Jet;
    fn add(self, rhs: Jet) -> Jet {
        &self + &rhs
    }
}
impl Sub for Jet {
    type Output = Jet;
    fn sub(self, rhs: Jet) -> Jet {
        &self - &rhs
    }
}
impl Mul for Jet {
    type Output = Jet;
    fn mul(self, rhs: Jet) -> Jet {
        &self * &rhs
    }
}
impl Mul<f64> for &Jet {
    type Output = Jet;
    fn mul(self, rhs: f64) -> Jet {
        self.scale(rhs)
    }
}

/// Solve the n x n jet linear system A X = B (column-major blocks of B),
/// by Gaussian elimination with partial pivoting on the value parts.
pub fn solve_linear(a: &[Jet], b: &[Jet], n: usize, m: usize) -> Option<Vec<Jet>> {
    assert_eq!(a.len(), n * n);
    assert_eq!(b.len(), n * m);
    let mut aa: Vec<Jet> = a.to_vec();
    let mut bb: Vec<Jet> = b.to_vec();
    for col in 0..n {
        let piv = (col..n)
            .max_by(|&r1, &r2| {
                aa[r1 * n + col]
                    .value()
                    .abs()
                    .partial_cmp(&aa[r2 * n + col].value().abs())
                    .unwrap()
            })
            .unwrap();
        if aa[piv * n + col].value().abs() < 1e-300 {
            return None;
        }
        if piv != col {
            for k in 0..n {
                aa.swap(col * n + k, piv * n + k);
            }
            for k in 0..m {
                bb.swap(col * m + k, piv * m + k);
            }
        }
        let inv = aa[col * n + col].recip();
        for r in 0..n {
            if r == col {
                continue;
            }
            let f = aa[r * n + col].mul_jet(&inv);
            for k in col..n {
                let t = f.mul_jet(&aa[col * n + k]);
                aa[r * n + k] = &aa[r * n + k] - &t;
            }
            for k in 0..m {
                let t = f.mul_jet(&bb[col * m + k]);
                bb[r * m + k] = &bb[r * m + k] - &t;
            }
        }
    }
    let mut x = Vec::with_capacity(n * m);
    for r in 0..n {
        let inv = aa[r * n + r].recip();
        for k in 0..m {
            x.push(bb[r * m + k].mul_jet(&inv));
        }
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn product_and_chain_rule() {
        // f(x, y) = exp(x) * sin(y) at (0.3, 0.7)
        let x = Jet::variable(2, 3, 0, 0.3);
        let y = Jet::variable(2, 3, 1, 0.7);
        let f = x.exp().mul_jet(&y.sin());
        assert_abs_diff_eq!(f.value(), 0.3f64.exp() * 0.7f64.sin(), epsilon = 1e-14);
        assert_abs_diff_eq!(f.deriv(&[1, 0]), 0.3f64.exp() * 0.7f64.sin(), epsilon = 1e-13);
        assert_abs_diff_eq!(f.deriv(&[0, 1]), 0.3f64.exp() * 0.7f64.cos(), epsilon = 1e-13);
        assert_abs_diff_eq!(f.deriv(&[2, 1]), 0.3f64.exp() * 0.7f64.cos(), epsilon = 1e-13);
        assert_abs_diff_eq!(f.deriv(&[0, 3]), -(0.3f64.exp()) * 0.7f64.cos(), epsilon = 1e-13);
    }

    #[test]
    fn rational_third_derivative() {
        // f = 1/(x^2+y^2): at (1,0) d3f/dx3 = -24
        let x = Jet::variable(2, 3, 0, 1.0);
        let y = Jet::variable(2, 3, 1, 0.0);
        let n = &x.mul_jet(&x) + &y.mul_jet(&y);
        let f = n.recip();
        assert_abs_diff_eq!(f.value(), 1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(f.deriv(&[1, 0]), -2.0, epsilon = 1e-12);
        assert_abs_diff_eq!(f.deriv(&[2, 0]), 6.0, epsilon = 1e-12);
        assert_abs_diff_eq!(f.deriv(&[3, 0]), -24.0, epsilon = 1e-11);
        assert_abs_diff_eq!(f.deriv(&[0, 2]), -2.0, epsilon = 1e-12);
    }

    #[test]
    fn partial_drops_order() {
        let x = Jet::variable(2, 3, 0, 2.0);
        let f = x.powi(4); // truncated at order 3: coeffs of x^4 lost, fine
        let fx = f.partial(0);
        assert_eq!(fx.order(), 2);
        assert_abs_diff_eq!(fx.value(), 32.0, epsilon = 1e-12); // 4 x^3
        assert_abs_diff_eq!(fx.deriv(&[1, 0]), 48.0, epsilon = 1e-12); // 12 x^2
    }

    #[test]
    fn division_and_sqrt() {
        let x = Jet::variable(1, 4, 0, 2.0);
        let one = Jet::constant(1, 4, 1.0);
        let g = (&one + &x.mul_jet(&x)).sqrt(); // sqrt(1+x^2)
        let back = g.mul_jet(&g);
        assert_abs_diff_eq!(back.value(), 5.0, epsilon = 1e-13);
        assert_abs_diff_eq!(back.deriv(&[1]), 4.0, epsilon = 1e-12);
        assert_abs_diff_eq!(back.deriv(&[2]), 2.0, epsilon = 1e-12);
        assert_abs_diff_eq!(back.deriv(&[3]), 0.0, epsilon = 1e-11);
        let q = x.div(&g);
        assert_abs_diff_eq!(q.value(), 2.0 / 5.0f64.sqrt(), epsilon = 1e-13);
    }

    #[test]
    fn hyperbolic_and_trig() {
        let x = Jet::variable(1, 4, 0, 0.5);
        let s = x.sinh();
        let c = x.cosh();
        let id = &c.mul_jet(&c) - &s.mul_jet(&s);
        assert_abs_diff_eq!(id.value(), 1.0, epsilon = 1e-13);
        for k in 1..=4u8 {
            assert_abs_diff_eq!(id.deriv(&[k]), 0.0, epsilon = 1e-11);
        }
        let t = x.sin();
        assert_abs_diff_eq!(t.deriv(&[3]), -0.5f64.cos(), epsilon = 1e-12);
    }

    #[test]
    fn jet_linear_solve_inverts() {
        // A = [[1, x], [0, 1+x^2]] over jets; check A * A^{-1} = I
        let x = Jet::variable(1, 3, 0, 0.4);
        let one = Jet::constant(1, 3, 1.0);
        let zero = Jet::constant(1, 3, 0.0);
        let a = vec![
            one.clone(),
            x.clone(),
            zero.clone(),
            &one + &x.mul_jet(&x),
        ];
        let idm = vec![one.clone(), zero.clone(), zero.clone(), one.clone()];
        let inv = solve_linear(&a, &idm, 2, 2).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                let mut s = Jet::constant(1, 3, 0.0);
                for k in 0..2 {
                    s = &s + &a[i * 2 + k].mul_jet(&inv[k * 2 + j]);
                }
                let want = if i == j { 1.0 } else { 0.0 };
                assert_abs_diff_eq!(s.value(), want, epsilon = 1e-13);
                assert_abs_diff_eq!(s.deriv(&[1]), 0.0, epsilon = 1e-12);
                assert_abs_diff_eq!(s.deriv(&[2]), 0.0, epsilon = 1e-11);
            }
        }
    }
}
