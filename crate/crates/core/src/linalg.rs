//! Dense linear algebra for tiny matrices (n <= 6): determinants, singular
//! values and real-matrix eigenvalues.

use alloc::vec::Vec;

/// Square or rectangular matrix stored row-major with inline capacity.
pub const CAP: usize = 6;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Mat {
    pub rows: usize,
    pub cols: usize,
    pub a: [[f64; CAP]; CAP],
}

impl Mat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(rows <= CAP && cols <= CAP);
        Mat {
            rows,
            cols,
            a: [[0.0; CAP]; CAP],
        }
    }

    /// Matrix whose columns are the given slices.
    pub fn from_columns(cols: &[&[f64]]) -> Self {
        let rows = cols.first().map_or(0, |c| c.len());
        let mut m = Mat::zeros(rows, cols.len());
        for (j, c) in cols.iter().enumerate() {
            for (i, x) in c.iter().enumerate() {
                m.a[i][j] = *x;
            }
        }
        m
    }
}

/// Determinant by Gaussian elimination with partial pivoting.
pub fn determinant(m: &Mat) -> f64 {
    assert_eq!(m.rows, m.cols, "determinant of a non-square matrix");
    let n = m.rows;
    let mut a = m.a;
    let mut det = 1.0;
    for k in 0..n {
        let p = (k..n)
            .max_by(|&i, &j| a[i][k].abs().total_cmp(&a[j][k].abs()))
            .unwrap();
        if a[p][k] == 0.0 {
            return 0.0;
        }
        if p != k {
            a.swap(p, k);
            det = -det;
        }
        det *= a[k][k];
        for i in k + 1..n {
            let f = a[i][k] / a[k][k];
            for j in k..n {
                a[i][j] -= f * a[k][j];
            }
        }
    }
    det
}

/// Singular values, descending, by one-sided Jacobi rotations.
///
/// One-sided Jacobi keeps small singular values accurate relative to the
/// column scaling, which the rank tests rely on.
pub fn singular_values(m: &Mat) -> Vec<f64> {
    let (rows, cols) = (m.rows, m.cols);
    let mut a = m.a;
    for _sweep in 0..60 {
        let mut rotated = false;
        for i in 0..cols {
            for j in i + 1..cols {
                let (mut alpha, mut beta, mut gamma) = (0.0, 0.0, 0.0);
                for k in 0..rows {
                    alpha += a[k][i] * a[k][i];
                    beta += a[k][j] * a[k][j];
                    gamma += a[k][i] * a[k][j];
                }
                if gamma == 0.0 || gamma.abs() <= 1e-17 * libm::sqrt(alpha * beta) {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (2.0 * gamma);
                let t = libm::copysign(1.0, zeta) / (zeta.abs() + libm::sqrt(1.0 + zeta * zeta));
                let c = 1.0 / libm::sqrt(1.0 + t * t);
                let s = c * t;
                for row in a.iter_mut().take(rows) {
                    let (x, y) = (row[i], row[j]);
                    row[i] = c * x - s * y;
                    row[j] = s * x + c * y;
                }
            }
        }
        if !rotated {
            break;
        }
    }
    let mut sv: Vec<f64> = (0..cols)
        .map(|j| libm::sqrt((0..rows).map(|k| a[k][j] * a[k][j]).sum::<f64>()))
        .collect();
    sv.sort_by(|x, y| y.total_cmp(x));
    sv
}

/// A complex number, as returned by [`eigenvalues`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Complex {
    pub re: f64,
    pub im: f64,
}

/// Eigenvalues of a real upper-Hessenberg matrix (balanced first), by the
/// shifted double-step QR iteration. Returns `None` if the iteration fails
/// to converge.
pub fn hessenberg_eigenvalues(m: &Mat) -> Option<Vec<Complex>> {
    assert_eq!(m.rows, m.cols);
    let n = m.rows;
    // The iteration below is written with 1-based indices; row/column 0 is unused.
    let mut a = [[0.0f64; CAP + 1]; CAP + 1];
    for i in 0..n {
        for j in 0..n {
            a[i + 1][j + 1] = m.a[i][j];
        }
    }
    balance(&mut a, n);
    let mut wr = [0.0; CAP + 1];
    let mut wi = [0.0; CAP + 1];

    let mut anorm = 0.0;
    for i in 1..=n {
        for j in (i.max(2) - 1)..=n {
            anorm += a[i][j].abs();
        }
    }
    let mut nn = n;
    let mut t = 0.0;
    while nn >= 1 {
        let mut its = 0;
        loop {
            let mut l = nn;
            while l >= 2 {
                let mut s = a[l - 1][l - 1].abs() + a[l][l].abs();
                if s == 0.0 {
                    s = anorm;
                }
                if a[l][l - 1].abs() + s == s {
                    a[l][l - 1] = 0.0;
                    break;
                }
                l -= 1;
            }
            let mut x = a[nn][nn];
            if l == nn {
                wr[nn] = x + t;
                wi[nn] = 0.0;
                nn -= 1;
            } else {
                let mut y = a[nn - 1][nn - 1];
                let mut w = a[nn][nn - 1] * a[nn - 1][nn];
                if l == nn - 1 {
                    let p = 0.5 * (y - x);
                    let q = p * p + w;
                    let mut z = libm::sqrt(q.abs());
                    x += t;
                    if q >= 0.0 {
                        z = p + libm::copysign(z, p);
                        wr[nn - 1] = x + z;
                        wr[nn] = x + z;
                        if z != 0.0 {
                            wr[nn] = x - w / z;
                        }
                        wi[nn - 1] = 0.0;
                        wi[nn] = 0.0;
                    } else {
                        wr[nn - 1] = x + p;
                        wr[nn] = x + p;
                        wi[nn - 1] = -z;
                        wi[nn] = z;
                    }
                    nn -= 2;
                } else {
                    if its >= 120 {
                        return None;
                    }
                    if its > 0 && its % 10 == 0 {
                        // exceptional shift
                        t += x;
                        for i in 1..=nn {
                            a[i][i] -= x;
                        }
                        let s = a[nn][nn - 1].abs() + a[nn - 1][nn - 2].abs();
                        x = 0.75 * s;
                        y = x;
                        w = -0.4375 * s * s;
                    }
                    its += 1;
                    let (mut p, mut q, mut r);
                    let mut m = nn - 2;
                    loop {
                        let z = a[m][m];
                        let rr = x - z;
                        let ss = y - z;
                        p = (rr * ss - w) / a[m + 1][m] + a[m][m + 1];
                        q = a[m + 1][m + 1] - z - rr - ss;
                        r = a[m + 2][m + 1];
                        let s = p.abs() + q.abs() + r.abs();
                        p /= s;
                        q /= s;
                        r /= s;
                        if m == l {
                            break;
                        }
                        let u = a[m][m - 1].abs() * (q.abs() + r.abs());
                        let v = p.abs() * (a[m - 1][m - 1].abs() + z.abs() + a[m + 1][m + 1].abs());
                        if u + v == v {
                            break;
                        }
                        m -= 1;
                    }
                    for i in m + 2..=nn {
                        a[i][i - 2] = 0.0;
                        if i != m + 2 {
                            a[i][i - 3] = 0.0;
                        }
                    }
                    let mut k = m;
                    while k < nn {
                        if k != m {
                            p = a[k][k - 1];
                            q = a[k + 1][k - 1];
                            r = 0.0;
                            if k != nn - 1 {
                                r = a[k + 2][k - 1];
                            }
                            x = p.abs() + q.abs() + r.abs();
                            if x != 0.0 {
                                p /= x;
                                q /= x;
                                r /= x;
                            }
                        }
                        let s = libm::copysign(libm::sqrt(p * p + q * q + r * r), p);
                        if s != 0.0 {
                            if k == m {
                                if l != m {
                                    a[k][k - 1] = -a[k][k - 1];
                                }
                            } else {
                                a[k][k - 1] = -s * x;
                            }
                            p += s;
                            x = p / s;
                            y = q / s;
                            let z = r / s;
                            q /= p;
                            r /= p;
                            for j in k..=nn {
                                let mut pp = a[k][j] + q * a[k + 1][j];
                                if k != nn - 1 {
                                    pp += r * a[k + 2][j];
                                    a[k + 2][j] -= pp * z;
                                }
                                a[k + 1][j] -= pp * y;
                                a[k][j] -= pp * x;
                            }
                            let mmin = if nn < k + 3 { nn } else { k + 3 };
                            for i in l..=mmin {
                                let mut pp = x * a[i][k] + y * a[i][k + 1];
                                if k != nn - 1 {
                                    pp += z * a[i][k + 2];
                                    a[i][k + 2] -= pp * r;
                                }
                                a[i][k + 1] -= pp * q;
                                a[i][k] -= pp;
                            }
                        }
                        k += 1;
                    }
                }
            }
            if nn < 1 || l + 1 >= nn {
                break;
            }
        }
    }
    Some(
        (1..=n)
            .map(|i| Complex {
                re: wr[i],
                im: wi[i],
            })
            .collect(),
    )
}

fn balance(a: &mut [[f64; CAP + 1]; CAP + 1], n: usize) {
    const RADIX: f64 = 2.0;
    let sqrdx = RADIX * RADIX;
    let mut done = false;
    while !done {
        done = true;
        for i in 1..=n {
            let (mut r, mut c) = (0.0, 0.0);
            for j in 1..=n {
                if j != i {
                    c += a[j][i].abs();
                    r += a[i][j].abs();
                }
            }
            if c != 0.0 && r != 0.0 {
                let mut g = r / RADIX;
                let mut f = 1.0;
                let s = c + r;
                while c < g {
                    f *= RADIX;
                    c *= sqrdx;
                }
                g = r * RADIX;
                while c > g {
                    f /= RADIX;
                    c /= sqrdx;
                }
                if (c + r) / f < 0.95 * s {
                    done = false;
                    let g = 1.0 / f;
                    for j in 1..=n {
                        a[i][j] *= g;
                    }
                    for j in 1..=n {
                        a[j][i] *= f;
                    }
                }
            }
        }
    }
}

/// Roots of `sum_k coeffs[k] x^k` via the eigenvalues of the companion matrix.
///
/// Leading coefficients that are exactly zero are dropped. Returns an empty
/// list for constant polynomials.
pub fn polynomial_roots(coeffs: &[f64]) -> Option<Vec<Complex>> {
    let mut deg = coeffs.len();
    while deg > 0 && coeffs[deg - 1] == 0.0 {
        deg -= 1;
    }
    if deg <= 1 {
        return Some(Vec::new());
    }
    let d = deg - 1;
    let lead = coeffs[d];
    let mut m = Mat::zeros(d, d);
    for k in 0..d {
        m.a[0][k] = -coeffs[d - 1 - k] / lead;
    }
    for k in 1..d {
        m.a[k][k - 1] = 1.0;
    }
    hessenberg_eigenvalues(&m)
}
