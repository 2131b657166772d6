//! Dense least squares via Householder QR with column equilibration.

use crate::error::{Error, Result};
use crate::num::{c, Real};

#[derive(Debug, Clone)]
pub struct LeastSquares<T> {
    pub coefficients: Vec<T>,
    /// Residual sum of squares.
    pub rss: T,
}

/// Solves `min ‖A·x − b‖²` for a row-major `rows × cols` matrix `a`.
///
/// Fails when `rows < cols` or when the equilibrated matrix is numerically
/// rank deficient.
pub fn least_squares<T: Real>(a: &[T], rows: usize, cols: usize, b: &[T]) -> Result<LeastSquares<T>> {
    assert_eq!(a.len(), rows * cols, "matrix shape");
    assert_eq!(b.len(), rows, "rhs length");
    if cols == 0 {
        return Ok(LeastSquares { coefficients: vec![], rss: b.iter().map(|v| *v * *v).sum() });
    }
    if rows < cols {
        return Err(Error::Fit(format!("underdetermined system: {rows} equations, {cols} unknowns")));
    }

    // Column-major working copy, columns scaled to unit norm.
    let mut m: Vec<Vec<T>> = (0..cols).map(|j| (0..rows).map(|i| a[i * cols + j]).collect()).collect();
    let mut scale = vec![T::one(); cols];
    for (j, col) in m.iter_mut().enumerate() {
        let norm = col.iter().map(|v| *v * *v).sum::<T>().sqrt();
        if norm == T::zero() {
            return Err(Error::Fit(format!("rank-deficient system: column {j} is zero")));
        }
        scale[j] = norm;
        col.iter_mut().for_each(|v| *v /= norm);
    }
    let mut rhs = b.to_vec();
    let tol = T::epsilon() * T::from_usize_lossy(rows.max(cols)) * c(100.0);

    for k in 0..cols {
        let alpha_norm = m[k][k..].iter().map(|v| *v * *v).sum::<T>().sqrt();
        if alpha_norm <= tol {
            return Err(Error::Fit(format!("rank-deficient system at column {k}")));
        }
        let alpha = if m[k][k] > T::zero() { -alpha_norm } else { alpha_norm };
        let mut v: Vec<T> = m[k][k..].to_vec();
        v[0] -= alpha;
        let vnorm2: T = v.iter().map(|x| *x * *x).sum();
        if vnorm2 > T::zero() {
            for col in m.iter_mut().skip(k) {
                reflect(&v, vnorm2, &mut col[k..]);
            }
            reflect(&v, vnorm2, &mut rhs[k..]);
        }
        m[k][k] = alpha;
    }

    // Back substitution on the upper triangle.
    let mut x = vec![T::zero(); cols];
    for i in (0..cols).rev() {
        let mut s = rhs[i];
        for j in i + 1..cols {
            s -= m[j][i] * x[j];
        }
        x[i] = s / m[i][i];
    }
    let rss = rhs[cols..].iter().map(|v| *v * *v).sum();
    for (xi, s) in x.iter_mut().zip(&scale) {
        *xi /= *s;
    }
    Ok(LeastSquares { coefficients: x, rss })
}

fn reflect<T: Real>(v: &[T], vnorm2: T, y: &mut [T]) {
    let dot: T = v.iter().zip(y.iter()).map(|(a, b)| *a * *b).sum();
    let f = c::<T>(2.0) * dot / vnorm2;
    for (yi, vi) in y.iter_mut().zip(v) {
        *yi -= f * *vi;
    }
}

/// Total QR sweeps allowed across all eigenvalues of one companion matrix.
pub const ROOT_ITERATION_CAP: usize = 500;

/// Roots of the monic polynomial `z^n + c[0]·z^(n-1) + … + c[n-1]`.
///
/// Eigenvalues of the balanced companion matrix by shifted Hessenberg QR.
/// Returned as `(re, im)` pairs in no particular order.
pub fn monic_roots<T: Real>(c_tail: &[T]) -> Result<Vec<(T, T)>> {
    let n = c_tail.len();
    if n == 0 {
        return Ok(vec![]);
    }
    if c_tail.iter().any(|v| !v.is_finite()) {
        return Err(Error::Extraction("non-finite polynomial coefficient".into()));
    }
    // 1-based (n+1)×(n+1) storage.
    let w = n + 1;
    let mut a = vec![T::zero(); w * w];
    for k in 1..=n {
        a[w + k] = -c_tail[k - 1];
    }
    for j in 2..=n {
        a[j * w + j - 1] = T::one();
    }
    balance(&mut a, n);
    hqr(&mut a, n)
}

fn balance<T: Real>(a: &mut [T], n: usize) {
    let w = n + 1;
    let radix: T = c(2.0);
    let sqrdx = radix * radix;
    let mut done = false;
    while !done {
        done = true;
        for i in 1..=n {
            let (mut col, mut row) = (T::zero(), T::zero());
            for j in 1..=n {
                if j != i {
                    col += a[j * w + i].abs();
                    row += a[i * w + j].abs();
                }
            }
            if col == T::zero() || row == T::zero() {
                continue;
            }
            let s = col + row;
            let mut f = T::one();
            let mut g = row / radix;
            while col < g {
                f *= radix;
                col *= sqrdx;
            }
            g = row * radix;
            while col > g {
                f /= radix;
                col /= sqrdx;
            }
            if (col + row) / f < c::<T>(0.95) * s {
                done = false;
                let gi = T::one() / f;
                for j in 1..=n {
                    a[i * w + j] *= gi;
                }
                for j in 1..=n {
                    a[j * w + i] *= f;
                }
            }
        }
    }
}

fn sign<T: Real>(a: T, b: T) -> T {
    if b >= T::zero() {
        a.abs()
    } else {
        -a.abs()
    }
}

#[allow(clippy::many_single_char_names)]
fn hqr<T: Real>(a: &mut [T], n: usize) -> Result<Vec<(T, T)>> {
    let w = n + 1;
    let at = |i: usize, j: usize| i * w + j;
    let mut wr = vec![T::zero(); n + 1];
    let mut wi = vec![T::zero(); n + 1];
    let mut anorm = T::zero();
    for i in 1..=n {
        for j in i.saturating_sub(1).max(1)..=n {
            anorm += a[at(i, j)].abs();
        }
    }
    let mut nn = n;
    let mut t = T::zero();
    let mut total = 0usize;
    while nn >= 1 {
        let mut its = 0;
        loop {
            let mut l = nn;
            while l >= 2 {
                let mut s = a[at(l - 1, l - 1)].abs() + a[at(l, l)].abs();
                if s == T::zero() {
                    s = anorm;
                }
                if a[at(l, l - 1)].abs() + s == s {
                    a[at(l, l - 1)] = T::zero();
                    break;
                }
                l -= 1;
            }
            let mut x = a[at(nn, nn)];
            if l == nn {
                wr[nn] = x + t;
                wi[nn] = T::zero();
                nn -= 1;
                break;
            }
            let mut y = a[at(nn - 1, nn - 1)];
            let mut ww = a[at(nn, nn - 1)] * a[at(nn - 1, nn)];
            if l == nn - 1 {
                let p = c::<T>(0.5) * (y - x);
                let q = p * p + ww;
                let mut z = q.abs().sqrt();
                x += t;
                if q >= T::zero() {
                    z = p + sign(z, p);
                    wr[nn - 1] = x + z;
                    wr[nn] = x + z;
                    if z != T::zero() {
                        wr[nn] = x - ww / z;
                    }
                    wi[nn - 1] = T::zero();
                    wi[nn] = T::zero();
                } else {
                    wr[nn - 1] = x + p;
                    wr[nn] = x + p;
                    wi[nn - 1] = -z;
                    wi[nn] = z;
                }
                nn = nn.saturating_sub(2);
                break;
            }
            total += 1;
            if total > ROOT_ITERATION_CAP {
                return Err(Error::Extraction(format!(
                    "root finder did not converge within {ROOT_ITERATION_CAP} iterations"
                )));
            }
            if its == 10 || its == 20 {
                t += x;
                for i in 1..=nn {
                    a[at(i, i)] -= x;
                }
                let s = a[at(nn, nn - 1)].abs() + a[at(nn - 1, nn - 2)].abs();
                x = c::<T>(0.75) * s;
                y = x;
                ww = c::<T>(-0.4375) * s * s;
            }
            its += 1;
            let (mut p, mut q, mut r);
            let mut m = nn - 2;
            loop {
                let z = a[at(m, m)];
                r = x - z;
                let s = y - z;
                p = (r * s - ww) / a[at(m + 1, m)] + a[at(m, m + 1)];
                q = a[at(m + 1, m + 1)] - z - r - s;
                r = a[at(m + 2, m + 1)];
                let s = p.abs() + q.abs() + r.abs();
                p /= s;
                q /= s;
                r /= s;
                if m == l {
                    break;
                }
                let u = a[at(m, m - 1)].abs() * (q.abs() + r.abs());
                let v = p.abs() * (a[at(m - 1, m - 1)].abs() + z.abs() + a[at(m + 1, m + 1)].abs());
                if u + v == v {
                    break;
                }
                m -= 1;
            }
            for i in (m + 2)..=nn {
                a[at(i, i - 2)] = T::zero();
                if i != m + 2 {
                    a[at(i, i - 3)] = T::zero();
                }
            }
            let mut k = m;
            while k < nn {
                if k != m {
                    p = a[at(k, k - 1)];
                    q = a[at(k + 1, k - 1)];
                    r = T::zero();
                    if k != nn - 1 {
                        r = a[at(k + 2, k - 1)];
                    }
                    x = p.abs() + q.abs() + r.abs();
                    if x != T::zero() {
                        p /= x;
                        q /= x;
                        r /= x;
                    }
                }
                let s = sign((p * p + q * q + r * r).sqrt(), p);
                if s != T::zero() {
                    if k == m {
                        if l != m {
                            a[at(k, k - 1)] = -a[at(k, k - 1)];
                        }
                    } else {
                        a[at(k, k - 1)] = -s * x;
                    }
                    p += s;
                    x = p / s;
                    y = q / s;
                    let z = r / s;
                    q /= p;
                    r /= p;
                    for j in k..=nn {
                        p = a[at(k, j)] + q * a[at(k + 1, j)];
                        if k != nn - 1 {
                            p += r * a[at(k + 2, j)];
                            a[at(k + 2, j)] -= p * z;
                        }
                        a[at(k + 1, j)] -= p * y;
                        a[at(k, j)] -= p * x;
                    }
                    let mmin = if nn < k + 3 { nn } else { k + 3 };
                    for i in l..=mmin {
                        p = x * a[at(i, k)] + y * a[at(i, k + 1)];
                        if k != nn - 1 {
                            p += z * a[at(i, k + 2)];
                            a[at(i, k + 2)] -= p * r;
                        }
                        a[at(i, k + 1)] -= p * q;
                        a[at(i, k)] -= p;
                    }
                }
                k += 1;
            }
            if l >= nn - 1 {
                break;
            }
        }
    }
    if wr.iter().chain(&wi).any(|v| !v.is_finite()) {
        return Err(Error::Extraction("root finder produced non-finite values".into()));
    }
    Ok((1..=n).map(|i| (wr[i], wi[i])).collect())
}
