//! Spectral kernels: singular values by one-sided Jacobi rotations and
//! eigenvalues by balancing, Householder reduction to Hessenberg form and the
//! Francis double-shift QR iteration.

use crate::error::{Error, Result};

use super::matrix::SquareMatrix;

/// A (possibly complex) eigenvalue.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Eigenvalue {
    pub re: f64,
    pub im: f64,
}

impl Eigenvalue {
    pub fn modulus(&self) -> f64 {
        self.re.hypot(self.im)
    }
}

/// Singular values sorted non-increasing.
pub fn singular_values(g: &SquareMatrix) -> Vec<f64> {
    let d = g.dim();
    if d == 2 {
        let m = g.as_slice();
        let p = (m[0] + m[3]).hypot(m[1] - m[2]);
        let q = (m[0] - m[3]).hypot(m[1] + m[2]);
        return vec![0.5 * (p + q), 0.5 * (p - q).abs()];
    }
    let scale = g.max_abs();
    if scale == 0.0 {
        return vec![0.0; d];
    }
    // column-major copy, scaled into a safe range
    let mut cols: Vec<Vec<f64>> = (0..d).map(|j| g.column(j).iter().map(|x| x / scale).collect()).collect();
    for _sweep in 0..60 {
        let mut rotated = false;
        for p in 0..d {
            for q in p + 1..d {
                let alpha: f64 = cols[p].iter().map(|x| x * x).sum();
                let beta: f64 = cols[q].iter().map(|x| x * x).sum();
                let gamma: f64 = cols[p].iter().zip(&cols[q]).map(|(a, b)| a * b).sum();
                if gamma == 0.0 || gamma.abs() <= f64::EPSILON * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (2.0 * gamma);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                let (left, right) = cols.split_at_mut(q);
                for (a, b) in left[p].iter_mut().zip(right[0].iter_mut()) {
                    let (x, y) = (*a, *b);
                    *a = c * x - s * y;
                    *b = s * x + c * y;
                }
            }
        }
        if !rotated {
            break;
        }
    }
    let mut sv: Vec<f64> = cols.iter().map(|c| scale * c.iter().map(|x| x * x).sum::<f64>().sqrt()).collect();
    sv.sort_by(|a, b| b.total_cmp(a));
    sv
}

/// Largest singular value (the euclidean operator norm).
pub fn top_singular_value(g: &SquareMatrix) -> f64 {
    singular_values(g)[0]
}

/// All eigenvalues of `g`, in no particular order.
pub fn eigenvalues(g: &SquareMatrix) -> Result<Vec<Eigenvalue>> {
    let n = g.dim();
    match n {
        1 => return Ok(vec![Eigenvalue { re: g.get(0, 0), im: 0.0 }]),
        2 => return Ok(eigenvalues_2x2(g)),
        _ => {}
    }
    let mut a = g.as_slice().to_vec();
    balance(&mut a, n);
    hessenberg(&mut a, n);
    hqr(&mut a, n)
}

fn eigenvalues_2x2(g: &SquareMatrix) -> Vec<Eigenvalue> {
    let tr = g.trace();
    let det = g.det();
    let disc = tr * tr - 4.0 * det;
    if disc >= 0.0 {
        let r = disc.sqrt();
        let big = 0.5 * (tr + if tr >= 0.0 { r } else { -r });
        let small = if big != 0.0 { det / big } else { 0.5 * (tr - r) };
        vec![Eigenvalue { re: big, im: 0.0 }, Eigenvalue { re: small, im: 0.0 }]
    } else {
        let im = 0.5 * (-disc).sqrt();
        vec![Eigenvalue { re: 0.5 * tr, im }, Eigenvalue { re: 0.5 * tr, im: -im }]
    }
}

/// Eigenvalue moduli sorted non-increasing; ties keep the solver's order.
pub fn eigenvalue_moduli(g: &SquareMatrix) -> Result<Vec<f64>> {
    let mut m: Vec<f64> = eigenvalues(g)?.iter().map(Eigenvalue::modulus).collect();
    m.sort_by(|a, b| b.total_cmp(a));
    Ok(m)
}

/// Diagonal similarity by powers of two so rows and columns have comparable norms.
fn balance(a: &mut [f64], n: usize) {
    const RADIX: f64 = 2.0;
    let sqrdx = RADIX * RADIX;
    let mut done = false;
    while !done {
        done = true;
        for i in 0..n {
            let mut r = 0.0;
            let mut c = 0.0;
            for j in 0..n {
                if j != i {
                    c += a[j * n + i].abs();
                    r += a[i * n + j].abs();
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
                    for j in 0..n {
                        a[i * n + j] *= g;
                    }
                    for j in 0..n {
                        a[j * n + i] *= f;
                    }
                }
            }
        }
    }
}

/// Householder reduction to upper Hessenberg form, in place.
fn hessenberg(a: &mut [f64], n: usize) {
    if n < 3 {
        return;
    }
    let mut v = vec![0.0; n];
    for k in 0..n - 2 {
        let m = n - k - 1;
        let norm = (0..m).map(|i| a[(k + 1 + i) * n + k].powi(2)).sum::<f64>().sqrt();
        if norm == 0.0 {
            continue;
        }
        for i in 0..m {
            v[i] = a[(k + 1 + i) * n + k];
        }
        v[0] += if v[0] >= 0.0 { norm } else { -norm };
        let vv: f64 = v[..m].iter().map(|x| x * x).sum();
        if vv == 0.0 {
            continue;
        }
        for j in 0..n {
            let s: f64 = (0..m).map(|i| v[i] * a[(k + 1 + i) * n + j]).sum();
            let f = 2.0 * s / vv;
            for i in 0..m {
                a[(k + 1 + i) * n + j] -= f * v[i];
            }
        }
        for i in 0..n {
            let s: f64 = (0..m).map(|j| a[i * n + k + 1 + j] * v[j]).sum();
            let f = 2.0 * s / vv;
            for j in 0..m {
                a[i * n + k + 1 + j] -= f * v[j];
            }
        }
        for i in k + 2..n {
            a[i * n + k] = 0.0;
        }
    }
}

#[inline]
fn sign(a: f64, b: f64) -> f64 {
    if b >= 0.0 {
        a.abs()
    } else {
        -a.abs()
    }
}

/// Francis double-shift QR on an upper Hessenberg matrix (destroys `h`).
fn hqr(h: &mut [f64], n: usize) -> Result<Vec<Eigenvalue>> {
    let idx = |i: isize, j: isize| (i as usize) * n + j as usize;
    let mut wr = vec![0.0; n];
    let mut wi = vec![0.0; n];
    let mut anorm = 0.0;
    for i in 0..n {
        for j in i.saturating_sub(1)..n {
            anorm += h[i * n + j].abs();
        }
    }
    let mut nn = n as isize - 1;
    let mut t = 0.0;
    while nn >= 0 {
        let mut its = 0;
        loop {
            let mut l = nn;
            while l >= 1 {
                let mut s = h[idx(l - 1, l - 1)].abs() + h[idx(l, l)].abs();
                if s == 0.0 {
                    s = anorm;
                }
                if h[idx(l, l - 1)].abs() + s == s {
                    h[idx(l, l - 1)] = 0.0;
                    break;
                }
                l -= 1;
            }
            let mut x = h[idx(nn, nn)];
            if l == nn {
                wr[nn as usize] = x + t;
                wi[nn as usize] = 0.0;
                nn -= 1;
            } else {
                let mut y = h[idx(nn - 1, nn - 1)];
                let mut w = h[idx(nn, nn - 1)] * h[idx(nn - 1, nn)];
                if l == nn - 1 {
                    let p = 0.5 * (y - x);
                    let q = p * p + w;
                    let z = q.abs().sqrt();
                    x += t;
                    let (a, b) = ((nn - 1) as usize, nn as usize);
                    if q >= 0.0 {
                        let z = p + sign(z, p);
                        wr[a] = x + z;
                        wr[b] = x + z;
                        if z != 0.0 {
                            wr[b] = x - w / z;
                        }
                        wi[a] = 0.0;
                        wi[b] = 0.0;
                    } else {
                        wr[a] = x + p;
                        wr[b] = x + p;
                        wi[a] = -z;
                        wi[b] = z;
                    }
                    nn -= 2;
                } else {
                    if its == 60 {
                        return Err(Error::NoConvergence);
                    }
                    if its % 10 == 0 && its > 0 {
                        // exceptional shift
                        t += x;
                        for i in 0..=nn {
                            h[idx(i, i)] -= x;
                        }
                        let s = h[idx(nn, nn - 1)].abs() + h[idx(nn - 1, nn - 2)].abs();
                        x = 0.75 * s;
                        y = x;
                        w = -0.4375 * s * s;
                    }
                    its += 1;
                    let mut m = nn - 2;
                    let (mut p, mut q, mut r, mut z);
                    loop {
                        z = h[idx(m, m)];
                        r = x - z;
                        let s = y - z;
                        p = (r * s - w) / h[idx(m + 1, m)] + h[idx(m, m + 1)];
                        q = h[idx(m + 1, m + 1)] - z - r - s;
                        r = h[idx(m + 2, m + 1)];
                        let s = p.abs() + q.abs() + r.abs();
                        p /= s;
                        q /= s;
                        r /= s;
                        if m == l {
                            break;
                        }
                        let u = h[idx(m, m - 1)].abs() * (q.abs() + r.abs());
                        let v = p.abs() * (h[idx(m - 1, m - 1)].abs() + z.abs() + h[idx(m + 1, m + 1)].abs());
                        if u + v == v {
                            break;
                        }
                        m -= 1;
                    }
                    for i in m + 2..=nn {
                        h[idx(i, i - 2)] = 0.0;
                        if i != m + 2 {
                            h[idx(i, i - 3)] = 0.0;
                        }
                    }
                    let mut k = m;
                    while k < nn {
                        if k != m {
                            p = h[idx(k, k - 1)];
                            q = h[idx(k + 1, k - 1)];
                            r = 0.0;
                            if k != nn - 1 {
                                r = h[idx(k + 2, k - 1)];
                            }
                            x = p.abs() + q.abs() + r.abs();
                            if x != 0.0 {
                                p /= x;
                                q /= x;
                                r /= x;
                            }
                        }
                        let s = sign((p * p + q * q + r * r).sqrt(), p);
                        if s != 0.0 {
                            if k == m {
                                if l != m {
                                    h[idx(k, k - 1)] = -h[idx(k, k - 1)];
                                }
                            } else {
                                h[idx(k, k - 1)] = -s * x;
                            }
                            p += s;
                            x = p / s;
                            y = q / s;
                            z = r / s;
                            q /= p;
                            r /= p;
                            for j in k..=nn {
                                p = h[idx(k, j)] + q * h[idx(k + 1, j)];
                                if k != nn - 1 {
                                    p += r * h[idx(k + 2, j)];
                                    h[idx(k + 2, j)] -= p * z;
                                }
                                h[idx(k + 1, j)] -= p * y;
                                h[idx(k, j)] -= p * x;
                            }
                            let mmin = if nn < k + 3 { nn } else { k + 3 };
                            for i in l..=mmin {
                                p = x * h[idx(i, k)] + y * h[idx(i, k + 1)];
                                if k != nn - 1 {
                                    p += z * h[idx(i, k + 2)];
                                    h[idx(i, k + 2)] -= p * r;
                                }
                                h[idx(i, k + 1)] -= p * q;
                                h[idx(i, k)] -= p;
                            }
                        }
                        k += 1;
                    }
                }
            }
            if l >= nn - 1 {
                break;
            }
        }
    }
    Ok(wr.into_iter().zip(wi).map(|(re, im)| Eigenvalue { re, im }).collect())
}
