//! Dense binary64 helpers: cyclic Jacobi eigenvalue iteration for symmetric
//! matrices and the spectral quantities built on it.
//!
//! The Jacobi sweep is the crate's one numeric eigensolver; it is applied to
//! `MᵀM` for singular values and to realified Hermitian matrices for
//! eigenvalues. Absolute accuracy is driven well below `1e-9`, the run
//! tolerance used by callers.

/// Eigenvalues of a symmetric `n×n` matrix (row-major), descending.
///
/// Cyclic Jacobi rotations until the off-diagonal Frobenius mass drops below
/// `1e-24` relative to the matrix scale (at most 64 sweeps).
pub fn symmetric_eigenvalues(a: &[f64], n: usize) -> Vec<f64> {
    assert_eq!(a.len(), n * n);
    let mut m = a.to_vec();
    let scale: f64 = m.iter().map(|x| x * x).sum::<f64>().sqrt().max(1.0);
    for _sweep in 0..64 {
        let mut off = 0.0;
        for p in 0..n {
            for q in (p + 1)..n {
                off += m[p * n + q] * m[p * n + q];
            }
        }
        if off.sqrt() <= 1e-24 * scale {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = m[p * n + q];
                if apq.abs() <= 1e-300 {
                    continue;
                }
                let app = m[p * n + p];
                let aqq = m[q * n + q];
                let theta = (aqq - app) / (2.0 * apq);
                let t = if theta >= 0.0 {
                    1.0 / (theta + (1.0 + theta * theta).sqrt())
                } else {
                    -1.0 / (-theta + (1.0 + theta * theta).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = m[k * n + p];
                    let akq = m[k * n + q];
                    m[k * n + p] = c * akp - s * akq;
                    m[k * n + q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = m[p * n + k];
                    let aqk = m[q * n + k];
                    m[p * n + k] = c * apk - s * aqk;
                    m[q * n + k] = s * apk + c * aqk;
                }
            }
        }
    }
    let mut eig: Vec<f64> = (0..n).map(|i| m[i * n + i]).collect();
    eig.sort_by(|x, y| y.partial_cmp(x).unwrap());
    eig
}

/// Largest singular value of an `rows×cols` matrix (row-major), computed as
/// the square root of the top eigenvalue of `MᵀM`.
pub fn largest_singular_value(m: &[f64], rows: usize, cols: usize) -> f64 {
    assert_eq!(m.len(), rows * cols);
    if rows == 0 || cols == 0 {
        return 0.0;
    }
    let mut mtm = vec![0.0; cols * cols];
    for i in 0..cols {
        for j in i..cols {
            let mut acc = 0.0;
            for r in 0..rows {
                acc += m[r * cols + i] * m[r * cols + j];
            }
            mtm[i * cols + j] = acc;
            mtm[j * cols + i] = acc;
        }
    }
    symmetric_eigenvalues(&mtm, cols)[0].max(0.0).sqrt()
}

/// Realifies a complex `d×d` Hermitian matrix `(re, im)` into the symmetric
/// `2d×2d` block matrix `[[Re, -Im], [Im, Re]]`. Its spectrum is the complex
/// spectrum with every eigenvalue doubled.
pub fn realify_hermitian(re: &[f64], im: &[f64], d: usize) -> Vec<f64> {
    assert_eq!(re.len(), d * d);
    assert_eq!(im.len(), d * d);
    let n = 2 * d;
    let mut out = vec![0.0; n * n];
    for i in 0..d {
        for j in 0..d {
            out[i * n + j] = re[i * d + j];
            out[i * n + (d + j)] = -im[i * d + j];
            out[(d + i) * n + j] = im[i * d + j];
            out[(d + i) * n + (d + j)] = re[i * d + j];
        }
    }
    out
}

/// Eigenvalues of a complex Hermitian matrix, descending.
pub fn hermitian_eigenvalues(re: &[f64], im: &[f64], d: usize) -> Vec<f64> {
    let doubled = symmetric_eigenvalues(&realify_hermitian(re, im, d), 2 * d);
    // Every eigenvalue appears twice; take every other entry.
    doubled.into_iter().step_by(2).collect()
}

/// Trace norm `‖H‖₁ = Σ|λᵢ|` of a complex Hermitian matrix.
pub fn trace_norm_hermitian(re: &[f64], im: &[f64], d: usize) -> f64 {
    hermitian_eigenvalues(re, im, d)
        .iter()
        .map(|l| l.abs())
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eigenvalues_of_diagonal() {
        let a = [3.0, 0.0, 0.0, 0.0, -1.0, 0.0, 0.0, 0.0, 2.0];
        let e = symmetric_eigenvalues(&a, 3);
        assert!((e[0] - 3.0).abs() < 1e-12);
        assert!((e[1] - 2.0).abs() < 1e-12);
        assert!((e[2] + 1.0).abs() < 1e-12);
    }

    #[test]
    fn eigenvalues_of_2x2_match_closed_form() {
        // [[2, 1], [1, 2]] has eigenvalues 3, 1.
        let a = [2.0, 1.0, 1.0, 2.0];
        let e = symmetric_eigenvalues(&a, 2);
        assert!((e[0] - 3.0).abs() < 1e-12);
        assert!((e[1] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn singular_value_of_single_entry() {
        // [[0, 2], [0, 0]] has sigma_max = 2.
        let m = [0.0, 2.0, 0.0, 0.0];
        assert!((largest_singular_value(&m, 2, 2) - 2.0).abs() < 1e-12);
    }

    #[test]
    fn hermitian_with_imaginary_part() {
        // Pauli Y = [[0, -i], [i, 0]]: eigenvalues ±1.
        let re = [0.0, 0.0, 0.0, 0.0];
        let im = [0.0, -1.0, 1.0, 0.0];
        let e = hermitian_eigenvalues(&re, &im, 2);
        assert!((e[0] - 1.0).abs() < 1e-12);
        assert!((e[1] + 1.0).abs() < 1e-12);
        assert!((trace_norm_hermitian(&re, &im, 2) - 2.0).abs() < 1e-12);
    }
}
