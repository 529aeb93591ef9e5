//! Dense row-major matrix products backed by `matrixmultiply`.

/// `out = a · b` with `a` of shape `m×k` and `b` of shape `k×n`.
pub(crate) fn matmul(m: usize, k: usize, n: usize, a: &[f64], b: &[f64], out: &mut [f64]) {
    assert_eq!(a.len(), m * k);
    assert_eq!(b.len(), k * n);
    assert_eq!(out.len(), m * n);
    // SAFETY: slice lengths checked above match the dimensions and strides.
    unsafe {
        matrixmultiply::dgemm(
            m,
            k,
            n,
            1.0,
            a.as_ptr(),
            k as isize,
            1,
            b.as_ptr(),
            n as isize,
            1,
            0.0,
            out.as_mut_ptr(),
            n as isize,
            1,
        );
    }
}

/// `out = a · bᵀ` with `a` of shape `m×k` and `b` of shape `n×k`.
pub(crate) fn matmul_bt(m: usize, k: usize, n: usize, a: &[f64], b: &[f64], out: &mut [f64]) {
    assert_eq!(a.len(), m * k);
    assert_eq!(b.len(), n * k);
    assert_eq!(out.len(), m * n);
    // SAFETY: as above; bᵀ is addressed through swapped strides.
    unsafe {
        matrixmultiply::dgemm(
            m,
            k,
            n,
            1.0,
            a.as_ptr(),
            k as isize,
            1,
            b.as_ptr(),
            1,
            k as isize,
            0.0,
            out.as_mut_ptr(),
            n as isize,
            1,
        );
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_products() {
        let a = [1.0, 2.0, 3.0, 4.0, 5.0, 6.0]; // 2x3
        let b = [1.0, 0.0, 0.0, 1.0, 1.0, 1.0]; // 3x2
        let mut out = [0.0; 4];
        matmul(2, 3, 2, &a, &b, &mut out);
        assert_eq!(out, [4.0, 5.0, 10.0, 11.0]);

        let bt = [1.0, 0.0, 1.0, 0.0, 1.0, 1.0]; // 2x3, transpose of b
        matmul_bt(2, 3, 2, &a, &bt, &mut out);
        assert_eq!(out, [4.0, 5.0, 10.0, 11.0]);
    }
}
