//! Dense helpers: rank-revealing spans and null spaces via SVD, condition
//! numbers, and pseudo-orthonormalization with respect to an indefinite form.

use nalgebra::{DMatrix, DVector};

/// 2-norm condition number.
pub fn condition_number(a: &DMatrix<f64>) -> f64 {
    let sv = a.clone().singular_values();
    let max = sv.iter().fold(0.0f64, |m, &x| m.max(x));
    let min = sv.iter().fold(f64::INFINITY, |m, &x| m.min(x));
    if min == 0.0 {
        f64::INFINITY
    } else {
        max / min
    }
}

/// Orthonormal basis of the span of the given vectors, discarding singular
/// values below `rel_cutoff` times the largest.
pub fn spanning_basis(vecs: &[DVector<f64>], rel_cutoff: f64) -> Vec<DVector<f64>> {
    if vecs.is_empty() {
        return vec![];
    }
    let n = vecs[0].len();
    let m = vecs.len();
    let mut a = DMatrix::zeros(m, n);
    for (i, v) in vecs.iter().enumerate() {
        a.set_row(i, &v.transpose());
    }
    let svd = a.svd(false, true);
    let vt = svd.v_t.unwrap();
    let smax = svd.singular_values.iter().fold(0.0f64, |a, &x| a.max(x));
    if smax == 0.0 {
        return vec![];
    }
    let mut out = vec![];
    for (i, &s) in svd.singular_values.iter().enumerate() {
        if s > rel_cutoff * smax {
            out.push(vt.row(i).transpose());
        }
    }
    out
}

/// Orthonormal basis of the null space of `a`, discarding directions whose
/// singular value exceeds `rel_cutoff` times the largest.
pub fn null_space(a: &DMatrix<f64>, rel_cutoff: f64) -> Vec<DVector<f64>> {
    let (m, n) = a.shape();
    // pad to at least square so the thin SVD exposes the full V
    let a = if m < n {
        let mut p = DMatrix::zeros(n, n);
        p.view_mut((0, 0), (m, n)).copy_from(a);
        p
    } else {
        a.clone()
    };
    let svd = a.svd(false, true);
    let vt = svd.v_t.unwrap();
    let smax = svd.singular_values.iter().fold(0.0f64, |a, &x| a.max(x));
    let mut out = vec![];
    for i in 0..vt.nrows() {
        let s = if i < svd.singular_values.len() {
            svd.singular_values[i]
        } else {
            0.0
        };
        if smax == 0.0 || s <= rel_cutoff * smax {
            out.push(vt.row(i).transpose());
        }
    }
    out
}

/// Coordinates of `v` in the span of orthonormal `basis` rows plus the
/// residual norm of the projection.
pub fn coords_in_span(v: &DVector<f64>, basis: &[DVector<f64>]) -> (Vec<f64>, f64) {
    let mut coords = Vec::with_capacity(basis.len());
    let mut rem = v.clone();
    for b in basis {
        let c = v.dot(b);
        coords.push(c);
        rem -= b * c;
    }
    (coords, rem.norm())
}

/// Does `v` lie in the span of the (orthonormal) basis, up to `tol`
/// relative to the vector's own norm?
pub fn in_span(v: &DVector<f64>, basis: &[DVector<f64>], tol: f64) -> bool {
    let n = v.norm();
    if n == 0.0 {
        return true;
    }
    let (_, r) = coords_in_span(v, basis);
    r <= tol * n
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn span_and_null_dimensions() {
        let v1 = DVector::from_vec(vec![1.0, 0.0, 0.0]);
        let v2 = DVector::from_vec(vec![1.0, 1.0, 0.0]);
        let v3 = DVector::from_vec(vec![2.0, 1.0, 0.0]);
        let b = spanning_basis(&[v1, v2, v3], 1e-12);
        assert_eq!(b.len(), 2);

        let a = DMatrix::from_row_slice(1, 3, &[1.0, 0.0, 0.0]);
        let ns = null_space(&a, 1e-12);
        assert_eq!(ns.len(), 2);
        for v in &ns {
            assert!(v[0].abs() < 1e-12);
        }
    }

    #[test]
    fn condition_of_identity() {
        let id = DMatrix::<f64>::identity(4, 4);
        assert!((condition_number(&id) - 1.0).abs() < 1e-12);
    }
}
