//! Dense row-major kernels: product, Gauss–Jordan inverse and null vectors.
//!
//! Elimination uses complete pivoting. A pivot whose magnitude falls below
//! `rel_tol · ‖A‖_F` ends the elimination and fixes the numerical rank.

pub(crate) fn matmul(a: &[f64], b: &[f64], n: usize) -> Vec<f64> {
    let mut c = vec![0.0; n * n];
    for i in 0..n {
        for k in 0..n {
            let aik = a[i * n + k];
            if aik == 0.0 {
                continue;
            }
            for j in 0..n {
                c[i * n + j] += aik * b[k * n + j];
            }
        }
    }
    c
}

fn frobenius(a: &[f64]) -> f64 {
    a.iter().map(|v| v * v).sum::<f64>().sqrt()
}

struct Reduced {
    /// Reduced matrix (columns permuted by `perm`).
    m: Vec<f64>,
    /// Row operations applied to the identity, when requested.
    aug: Option<Vec<f64>>,
    /// Column k of `m` is column `perm[k]` of the input.
    perm: Vec<usize>,
    rank: usize,
}

fn gauss_jordan(a: &[f64], n: usize, rel_tol: f64, with_aug: bool) -> Reduced {
    let mut m = a.to_vec();
    let mut aug = with_aug.then(|| {
        let mut id = vec![0.0; n * n];
        (0..n).for_each(|i| id[i * n + i] = 1.0);
        id
    });
    let mut perm: Vec<usize> = (0..n).collect();
    let threshold = rel_tol * frobenius(a);
    let mut rank = 0;

    for k in 0..n {
        let (mut pi, mut pj, mut best) = (k, k, -1.0);
        for i in k..n {
            for j in k..n {
                let v = m[i * n + j].abs();
                if v > best {
                    (pi, pj, best) = (i, j, v);
                }
            }
        }
        if best <= threshold || best == 0.0 {
            break;
        }
        if pi != k {
            for j in 0..n {
                m.swap(k * n + j, pi * n + j);
            }
            if let Some(b) = aug.as_mut() {
                for j in 0..n {
                    b.swap(k * n + j, pi * n + j);
                }
            }
        }
        if pj != k {
            for i in 0..n {
                m.swap(i * n + k, i * n + pj);
            }
            perm.swap(k, pj);
        }
        let p = m[k * n + k];
        for j in 0..n {
            m[k * n + j] /= p;
        }
        if let Some(b) = aug.as_mut() {
            for j in 0..n {
                b[k * n + j] /= p;
            }
        }
        for i in 0..n {
            if i == k {
                continue;
            }
            let f = m[i * n + k];
            if f == 0.0 {
                continue;
            }
            for j in 0..n {
                m[i * n + j] -= f * m[k * n + j];
            }
            if let Some(b) = aug.as_mut() {
                for j in 0..n {
                    b[i * n + j] -= f * b[k * n + j];
                }
            }
        }
        rank += 1;
    }
    Reduced { m, aug, perm, rank }
}

/// Inverse of an n×n matrix, or `None` when elimination finds a pivot below threshold.
pub(crate) fn invert(a: &[f64], n: usize, rel_tol: f64) -> Option<Vec<f64>> {
    let r = gauss_jordan(a, n, rel_tol, true);
    if r.rank < n {
        return None;
    }
    // R·A·P = I  ⇒  A⁻¹ = P·R
    let b = r.aug.expect("augmented block requested");
    let mut inv = vec![0.0; n * n];
    for (k, &row) in r.perm.iter().enumerate() {
        inv[row * n..(row + 1) * n].copy_from_slice(&b[k * n..(k + 1) * n]);
    }
    Some(inv)
}

/// Unit vector spanning one direction of the numerical null space, if rank < n.
pub(crate) fn null_vector(a: &[f64], n: usize, rel_tol: f64) -> Option<Vec<f64>> {
    let r = gauss_jordan(a, n, rel_tol, false);
    if r.rank == n {
        return None;
    }
    // reduced form is [I F; 0 0]; take the first free column
    let free = r.rank;
    let mut y = vec![0.0; n];
    y[free] = 1.0;
    for (i, yi) in y.iter_mut().enumerate().take(r.rank) {
        *yi = -r.m[i * n + free];
    }
    let mut v = vec![0.0; n];
    for (k, &col) in r.perm.iter().enumerate() {
        v[col] = y[k];
    }
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    v.iter_mut().for_each(|x| *x /= norm);
    Some(v)
}
