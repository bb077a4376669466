//! Dense symmetric eigensolver: Householder reduction to tridiagonal form
//! followed by the implicit QL iteration with Wilkinson-type shifts.

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Iteration cap per eigenvalue of the QL sweep.
pub const MAX_QL_ITERATIONS: usize = 100;

/// Eigen-decomposition of a symmetric matrix.
#[derive(Debug, Clone)]
pub struct SymmetricEigen<T> {
    /// Eigenvalues in ascending order.
    pub values: Vec<T>,
    /// Row `j` is the unit eigenvector of `values[j]`.
    pub vectors: Option<Vec<Vec<T>>>,
}

/// Eigen-decomposition of the row-major symmetric `n × n` matrix `a`.
///
/// Only the lower triangle is read. Ties are ordered by their position on
/// the diagonal after the QL sweep, which is deterministic.
pub fn symmetric_eigen<T: Real>(a: &[T], n: usize, with_vectors: bool) -> Result<SymmetricEigen<T>> {
    if a.len() != n * n {
        return Err(Error::precondition(
            "symmetric_eigen",
            format!("expected {} entries, got {}", n * n, a.len()),
        ));
    }
    if n == 0 {
        return Ok(SymmetricEigen {
            values: Vec::new(),
            vectors: with_vectors.then(Vec::new),
        });
    }
    let mut v = a.to_vec();
    let mut d = vec![T::zero(); n];
    let mut e = vec![T::zero(); n];
    tridiagonalize(&mut v, n, &mut d, &mut e, with_vectors);
    let mut w = if with_vectors { Some(transpose(&v, n)) } else { None };
    drop(v);
    ql_implicit(n, &mut d, &mut e, w.as_deref_mut())?;

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| d[i].partial_cmp(&d[j]).unwrap_or(std::cmp::Ordering::Equal).then(i.cmp(&j)));
    let values = order.iter().map(|&i| d[i]).collect();
    let vectors = w.map(|w| order.iter().map(|&i| w[i * n..(i + 1) * n].to_vec()).collect());
    Ok(SymmetricEigen { values, vectors })
}

fn transpose<T: Real>(v: &[T], n: usize) -> Vec<T> {
    let mut t = vec![T::zero(); n * n];
    for i in 0..n {
        for j in 0..n {
            t[j * n + i] = v[i * n + j];
        }
    }
    t
}

/// Householder reduction. On return `d` holds the diagonal, `e[1..]` the
/// subdiagonal and, when requested, `v` the accumulated orthogonal transform.
fn tridiagonalize<T: Real>(v: &mut [T], n: usize, d: &mut [T], e: &mut [T], accumulate: bool) {
    let at = |i: usize, j: usize| i * n + j;
    for j in 0..n {
        d[j] = v[at(n - 1, j)];
    }
    for i in (1..n).rev() {
        let mut scale = T::zero();
        let mut h = T::zero();
        for dk in d.iter().take(i) {
            scale += dk.abs();
        }
        if scale == T::zero() {
            e[i] = d[i - 1];
            for j in 0..i {
                d[j] = v[at(i - 1, j)];
                v[at(i, j)] = T::zero();
                v[at(j, i)] = T::zero();
            }
        } else {
            for dk in d.iter_mut().take(i) {
                *dk /= scale;
                h += *dk * *dk;
            }
            let f = d[i - 1];
            let mut g = h.sqrt();
            if f > T::zero() {
                g = -g;
            }
            e[i] = scale * g;
            h -= f * g;
            d[i - 1] = f - g;
            for ej in e.iter_mut().take(i) {
                *ej = T::zero();
            }
            for j in 0..i {
                let f = d[j];
                v[at(j, i)] = f;
                let mut g = e[j] + v[at(j, j)] * f;
                for k in j + 1..i {
                    g += v[at(k, j)] * d[k];
                    e[k] += v[at(k, j)] * f;
                }
                e[j] = g;
            }
            let mut f = T::zero();
            for j in 0..i {
                e[j] /= h;
                f += e[j] * d[j];
            }
            let hh = f / (h + h);
            for j in 0..i {
                e[j] -= hh * d[j];
            }
            for j in 0..i {
                let f = d[j];
                let g = e[j];
                for k in j..i {
                    v[at(k, j)] -= f * e[k] + g * d[k];
                }
                d[j] = v[at(i - 1, j)];
                v[at(i, j)] = T::zero();
            }
        }
        d[i] = h;
    }

    if !accumulate {
        for (j, dj) in d.iter_mut().enumerate() {
            *dj = v[at(j, j)];
        }
        e[0] = T::zero();
        return;
    }
    for i in 0..n - 1 {
        v[at(n - 1, i)] = v[at(i, i)];
        v[at(i, i)] = T::one();
        let h = d[i + 1];
        if h != T::zero() {
            for k in 0..=i {
                d[k] = v[at(k, i + 1)] / h;
            }
            for j in 0..=i {
                let mut g = T::zero();
                for k in 0..=i {
                    g += v[at(k, i + 1)] * v[at(k, j)];
                }
                for k in 0..=i {
                    v[at(k, j)] -= g * d[k];
                }
            }
        }
        for k in 0..=i {
            v[at(k, i + 1)] = T::zero();
        }
    }
    for j in 0..n {
        d[j] = v[at(n - 1, j)];
        v[at(n - 1, j)] = T::zero();
    }
    v[at(n - 1, n - 1)] = T::one();
    e[0] = T::zero();
}

/// Implicit QL on the tridiagonal `(d, e)`. `w`, when present, holds the
/// transform with eigenvector `j` stored contiguously as row `j`.
fn ql_implicit<T: Real>(n: usize, d: &mut [T], e: &mut [T], mut w: Option<&mut [T]>) -> Result<()> {
    for i in 1..n {
        e[i - 1] = e[i];
    }
    e[n - 1] = T::zero();
    let eps = T::eps();
    let mut f = T::zero();
    let mut tst1 = T::zero();
    for l in 0..n {
        tst1 = tst1.max(d[l].abs() + e[l].abs());
        let mut m = l;
        while m < n {
            if e[m].abs() <= eps * tst1 {
                break;
            }
            m += 1;
        }
        if m > l {
            let mut iter = 0;
            loop {
                iter += 1;
                if iter > MAX_QL_ITERATIONS {
                    return Err(Error::Convergence {
                        op: "symmetric_eigen",
                        iterations: MAX_QL_ITERATIONS,
                        index: l,
                    });
                }
                let g = d[l];
                let mut p = (d[l + 1] - g) / (T::lit(2.0) * e[l]);
                let mut r = p.hypot(T::one());
                if p < T::zero() {
                    r = -r;
                }
                d[l] = e[l] / (p + r);
                d[l + 1] = e[l] * (p + r);
                let dl1 = d[l + 1];
                let mut h = g - d[l];
                for di in d.iter_mut().skip(l + 2) {
                    *di -= h;
                }
                f += h;

                p = d[m];
                let mut c = T::one();
                let mut c2 = c;
                let mut c3 = c;
                let el1 = e[l + 1];
                let mut s = T::zero();
                let mut s2 = T::zero();
                for i in (l..m).rev() {
                    c3 = c2;
                    c2 = c;
                    s2 = s;
                    let g = c * e[i];
                    h = c * p;
                    r = p.hypot(e[i]);
                    e[i + 1] = s * r;
                    s = e[i] / r;
                    c = p / r;
                    p = c * d[i] - s * g;
                    d[i + 1] = h + s * (c * g + s * d[i]);
                    if let Some(w) = w.as_deref_mut() {
                        let (head, tail) = w.split_at_mut((i + 1) * n);
                        let row_i = &mut head[i * n..];
                        let row_next = &mut tail[..n];
                        for (a, b) in row_i.iter_mut().zip(row_next.iter_mut()) {
                            let hk = *b;
                            *b = s * *a + c * hk;
                            *a = c * *a - s * hk;
                        }
                    }
                }
                p = -s * s2 * c3 * el1 * e[l] / dl1;
                e[l] = s * p;
                d[l] = c * p;
                if e[l].abs() <= eps * tst1 {
                    break;
                }
            }
        }
        d[l] += f;
        e[l] = T::zero();
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_symmetric(n: usize, rng: &mut ChaCha8Rng) -> Vec<f64> {
        let mut a = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..=i {
                let x = rng.gen_range(-1.0..1.0);
                a[i * n + j] = x;
                a[j * n + i] = x;
            }
        }
        a
    }

    #[test]
    fn small_examples() {
        let e = symmetric_eigen(&[2.0f64, 1.0, 1.0, 2.0], 2, true).unwrap();
        assert!((e.values[0] - 1.0).abs() < 1e-14 && (e.values[1] - 3.0).abs() < 1e-14);
        let e = symmetric_eigen(&[0.0, 1.0, 0.0, 1.0, 0.0, 1.0, 0.0, 1.0, 0.0], 3, false).unwrap();
        let s = 2f64.sqrt();
        for (got, want) in e.values.iter().zip([-s, 0.0, s]) {
            assert!((got - want).abs() < 1e-14);
        }
        let id: Vec<f64> = (0..16).map(|i| if i % 5 == 0 { 1.0 } else { 0.0 }).collect();
        assert_eq!(symmetric_eigen(&id, 4, true).unwrap().values, vec![1.0; 4]);
    }

    #[test]
    fn residuals_and_orthonormality() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for n in [1, 2, 7, 40] {
            let a = random_symmetric(n, &mut rng);
            let e = symmetric_eigen(&a, n, true).unwrap();
            let vecs = e.vectors.unwrap();
            for (lam, v) in e.values.iter().zip(&vecs) {
                for i in 0..n {
                    let av: f64 = (0..n).map(|j| a[i * n + j] * v[j]).sum();
                    assert!((av - lam * v[i]).abs() < 1e-12);
                }
            }
            for p in 0..n {
                for q in 0..n {
                    let dot: f64 = vecs[p].iter().zip(&vecs[q]).map(|(x, y)| x * y).sum();
                    let want = if p == q { 1.0 } else { 0.0 };
                    assert!((dot - want).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn values_agree_with_and_without_vectors() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let a = random_symmetric(30, &mut rng);
        let x = symmetric_eigen(&a, 30, true).unwrap().values;
        let y = symmetric_eigen(&a, 30, false).unwrap().values;
        for (p, q) in x.iter().zip(&y) {
            assert!((p - q).abs() < 1e-12);
        }
    }

    #[test]
    fn rejects_bad_shape() {
        assert!(symmetric_eigen(&[1.0, 2.0, 3.0], 2, false).is_err());
    }
}
