//! Dense eigen-decomposition of real square matrices.
//!
//! General matrices go through Householder reduction to upper Hessenberg
//! form followed by the Francis double-shift QR iteration and back
//! substitution on the quasi-triangular Schur factor, following the
//! EISPACK `orthes`/`hqr2` procedures. Exactly symmetric input is routed
//! to the symmetric solver, which returns an orthonormal real basis.
//!
//! Complex pairs come back as (`λ`, `conj(λ)`) with eigenvectors that are
//! exact conjugates of each other.

use nalgebra::{Complex, DMatrix, SymmetricEigen};

use crate::error::{Error, Result};

pub type C64 = Complex<f64>;

const EPS: f64 = f64::EPSILON;
const MAX_SWEEPS_PER_EIGENVALUE: usize = 60;

/// Raw solver output, columns in solver order (unnormalized).
#[derive(Debug, Clone)]
pub struct RawEigen {
    pub values: Vec<C64>,
    pub vectors: DMatrix<C64>,
}

pub fn is_symmetric(a: &DMatrix<f64>) -> bool {
    let n = a.nrows();
    (0..n).all(|i| (0..i).all(|j| a[(i, j)] == a[(j, i)]))
}

/// Eigenvalues and eigenvectors of a real square matrix.
pub fn eigen(a: &DMatrix<f64>) -> Result<RawEigen> {
    let n = a.nrows();
    if n != a.ncols() {
        return Err(Error::NonSquare {
            rows: n,
            cols: a.ncols(),
        });
    }
    if n == 0 {
        return Ok(RawEigen {
            values: Vec::new(),
            vectors: DMatrix::zeros(0, 0),
        });
    }
    if is_symmetric(a) {
        let se = SymmetricEigen::new(a.clone());
        return Ok(RawEigen {
            values: se.eigenvalues.iter().map(|&v| C64::new(v, 0.0)).collect(),
            vectors: se.eigenvectors.map(|v| C64::new(v, 0.0)),
        });
    }
    let mut solver = Hqr::new(a);
    solver.orthes();
    solver.hqr2(true)?;
    Ok(solver.into_complex())
}

/// Eigenvalues only; cheaper than [`eigen`].
pub fn eigenvalues(a: &DMatrix<f64>) -> Result<Vec<C64>> {
    let n = a.nrows();
    if n != a.ncols() {
        return Err(Error::NonSquare {
            rows: n,
            cols: a.ncols(),
        });
    }
    if n == 0 {
        return Ok(Vec::new());
    }
    if is_symmetric(a) {
        let vals = SymmetricEigen::new(a.clone()).eigenvalues;
        return Ok(vals.iter().map(|&v| C64::new(v, 0.0)).collect());
    }
    let mut solver = Hqr::new(a);
    solver.orthes();
    solver.hqr2(false)?;
    Ok(solver
        .d
        .iter()
        .zip(&solver.e)
        .map(|(&re, &im)| C64::new(re, im))
        .collect())
}

struct Hqr {
    n: usize,
    h: DMatrix<f64>,
    v: DMatrix<f64>,
    d: Vec<f64>,
    e: Vec<f64>,
}

impl Hqr {
    fn new(a: &DMatrix<f64>) -> Self {
        let n = a.nrows();
        Self {
            n,
            h: a.clone(),
            v: DMatrix::identity(n, n),
            d: vec![0.0; n],
            e: vec![0.0; n],
        }
    }

    /// Householder reduction to Hessenberg form, accumulating the
    /// orthogonal similarity in `v`.
    fn orthes(&mut self) {
        let n = self.n;
        let h = &mut self.h;
        let v = &mut self.v;
        let high = n - 1;
        let mut ort = vec![0.0; n];

        for m in 1..high {
            let scale: f64 = (m..=high).map(|i| h[(i, m - 1)].abs()).sum();
            if scale == 0.0 {
                continue;
            }
            let mut hh = 0.0;
            for i in (m..=high).rev() {
                ort[i] = h[(i, m - 1)] / scale;
                hh += ort[i] * ort[i];
            }
            let mut g = hh.sqrt();
            if ort[m] > 0.0 {
                g = -g;
            }
            hh -= ort[m] * g;
            ort[m] -= g;

            for j in m..n {
                let mut f = 0.0;
                for i in (m..=high).rev() {
                    f += ort[i] * h[(i, j)];
                }
                f /= hh;
                for i in m..=high {
                    h[(i, j)] -= f * ort[i];
                }
            }
            for i in 0..=high {
                let mut f = 0.0;
                for j in (m..=high).rev() {
                    f += ort[j] * h[(i, j)];
                }
                f /= hh;
                for j in m..=high {
                    h[(i, j)] -= f * ort[j];
                }
            }
            ort[m] *= scale;
            h[(m, m - 1)] = scale * g;
        }

        for m in (1..high).rev() {
            if h[(m, m - 1)] == 0.0 {
                continue;
            }
            for i in m + 1..=high {
                ort[i] = h[(i, m - 1)];
            }
            for j in m..=high {
                let mut g = 0.0;
                for i in m..=high {
                    g += ort[i] * v[(i, j)];
                }
                // double division avoids underflow
                g = (g / ort[m]) / h[(m, m - 1)];
                for i in m..=high {
                    v[(i, j)] += g * ort[i];
                }
            }
        }
    }

    /// Shifted QR on the Hessenberg matrix. With `vectors`, also back
    /// substitutes for the eigenvectors and maps them through `v`.
    fn hqr2(&mut self, vectors: bool) -> Result<()> {
        let nn = self.n;
        let h = &mut self.h;
        let vm = &mut self.v;
        let d = &mut self.d;
        let e = &mut self.e;
        let low = 0usize;
        let high = nn - 1;

        let mut norm = 0.0;
        for i in 0..nn {
            for j in i.saturating_sub(1)..nn {
                norm += h[(i, j)].abs();
            }
        }

        let mut exshift = 0.0;
        let (mut p, mut q): (f64, f64);
        let (mut r, mut s, mut z) = (0.0, 0.0, 0.0);
        let (mut w, mut x, mut y);
        let mut iter = 0usize;
        let mut total_sweeps = 0usize;
        let max_sweeps = MAX_SWEEPS_PER_EIGENVALUE * nn.max(1);

        // signed so the loop can run down past zero
        let mut n = nn as isize - 1;
        while n >= low as isize {
            let nu = n as usize;
            // look for a single small subdiagonal element
            let mut l = nu;
            while l > low {
                s = h[(l - 1, l - 1)].abs() + h[(l, l)].abs();
                if s == 0.0 {
                    s = norm;
                }
                if h[(l, l - 1)].abs() < EPS * s {
                    break;
                }
                l -= 1;
            }

            if l == nu {
                // one root
                h[(nu, nu)] += exshift;
                d[nu] = h[(nu, nu)];
                e[nu] = 0.0;
                n -= 1;
                iter = 0;
            } else if l + 1 == nu {
                // two roots
                w = h[(nu, nu - 1)] * h[(nu - 1, nu)];
                p = (h[(nu - 1, nu - 1)] - h[(nu, nu)]) / 2.0;
                q = p * p + w;
                z = q.abs().sqrt();
                h[(nu, nu)] += exshift;
                h[(nu - 1, nu - 1)] += exshift;
                x = h[(nu, nu)];

                if q >= 0.0 {
                    z = if p >= 0.0 { p + z } else { p - z };
                    d[nu - 1] = x + z;
                    d[nu] = d[nu - 1];
                    if z != 0.0 {
                        d[nu] = x - w / z;
                    }
                    e[nu - 1] = 0.0;
                    e[nu] = 0.0;
                    x = h[(nu, nu - 1)];
                    s = x.abs() + z.abs();
                    p = x / s;
                    q = z / s;
                    r = (p * p + q * q).sqrt();
                    p /= r;
                    q /= r;

                    for j in nu - 1..nn {
                        z = h[(nu - 1, j)];
                        h[(nu - 1, j)] = q * z + p * h[(nu, j)];
                        h[(nu, j)] = q * h[(nu, j)] - p * z;
                    }
                    for i in 0..=nu {
                        z = h[(i, nu - 1)];
                        h[(i, nu - 1)] = q * z + p * h[(i, nu)];
                        h[(i, nu)] = q * h[(i, nu)] - p * z;
                    }
                    for i in low..=high {
                        z = vm[(i, nu - 1)];
                        vm[(i, nu - 1)] = q * z + p * vm[(i, nu)];
                        vm[(i, nu)] = q * vm[(i, nu)] - p * z;
                    }
                } else {
                    d[nu - 1] = x + p;
                    d[nu] = x + p;
                    e[nu - 1] = z;
                    e[nu] = -z;
                }
                n -= 2;
                iter = 0;
            } else {
                // no convergence yet
                total_sweeps += 1;
                if total_sweeps > max_sweeps {
                    return Err(Error::NoConvergence {
                        iterations: total_sweeps,
                    });
                }
                x = h[(nu, nu)];
                y = 0.0;
                w = 0.0;
                if l < nu {
                    y = h[(nu - 1, nu - 1)];
                    w = h[(nu, nu - 1)] * h[(nu - 1, nu)];
                }

                // exceptional shifts
                if iter == 10 {
                    exshift += x;
                    for i in low..=nu {
                        h[(i, i)] -= x;
                    }
                    s = h[(nu, nu - 1)].abs() + h[(nu - 1, nu - 2)].abs();
                    x = 0.75 * s;
                    y = x;
                    w = -0.4375 * s * s;
                }
                if iter == 30 {
                    s = (y - x) / 2.0;
                    s = s * s + w;
                    if s > 0.0 {
                        s = s.sqrt();
                        if y < x {
                            s = -s;
                        }
                        s = x - w / ((y - x) / 2.0 + s);
                        for i in low..=nu {
                            h[(i, i)] -= s;
                        }
                        exshift += s;
                        x = 0.964;
                        y = x;
                        w = x;
                    }
                }
                iter += 1;

                // look for two consecutive small subdiagonal elements
                let mut m = nu - 2;
                loop {
                    z = h[(m, m)];
                    r = x - z;
                    s = y - z;
                    p = (r * s - w) / h[(m + 1, m)] + h[(m, m + 1)];
                    q = h[(m + 1, m + 1)] - z - r - s;
                    r = h[(m + 2, m + 1)];
                    s = p.abs() + q.abs() + r.abs();
                    p /= s;
                    q /= s;
                    r /= s;
                    if m == l {
                        break;
                    }
                    if h[(m, m - 1)].abs() * (q.abs() + r.abs())
                        < EPS
                            * (p.abs()
                                * (h[(m - 1, m - 1)].abs() + z.abs() + h[(m + 1, m + 1)].abs()))
                    {
                        break;
                    }
                    m -= 1;
                }

                for i in m + 2..=nu {
                    h[(i, i - 2)] = 0.0;
                    if i > m + 2 {
                        h[(i, i - 3)] = 0.0;
                    }
                }

                // double QR step on rows l..=n, columns m..=n
                let mut k = m;
                while k < nu {
                    let notlast = k != nu - 1;
                    if k != m {
                        p = h[(k, k - 1)];
                        q = h[(k + 1, k - 1)];
                        r = if notlast { h[(k + 2, k - 1)] } else { 0.0 };
                        x = p.abs() + q.abs() + r.abs();
                        if x == 0.0 {
                            k += 1;
                            continue;
                        }
                        p /= x;
                        q /= x;
                        r /= x;
                    }
                    s = (p * p + q * q + r * r).sqrt();
                    if p < 0.0 {
                        s = -s;
                    }
                    if s != 0.0 {
                        if k != m {
                            h[(k, k - 1)] = -s * x;
                        } else if l != m {
                            h[(k, k - 1)] = -h[(k, k - 1)];
                        }
                        p += s;
                        x = p / s;
                        y = q / s;
                        z = r / s;
                        q /= p;
                        r /= p;

                        for j in k..nn {
                            p = h[(k, j)] + q * h[(k + 1, j)];
                            if notlast {
                                p += r * h[(k + 2, j)];
                                h[(k + 2, j)] -= p * z;
                            }
                            h[(k, j)] -= p * x;
                            h[(k + 1, j)] -= p * y;
                        }
                        for i in 0..=nu.min(k + 3) {
                            p = x * h[(i, k)] + y * h[(i, k + 1)];
                            if notlast {
                                p += z * h[(i, k + 2)];
                                h[(i, k + 2)] -= p * r;
                            }
                            h[(i, k)] -= p;
                            h[(i, k + 1)] -= p * q;
                        }
                        for i in low..=high {
                            p = x * vm[(i, k)] + y * vm[(i, k + 1)];
                            if notlast {
                                p += z * vm[(i, k + 2)];
                                vm[(i, k + 2)] -= p * r;
                            }
                            vm[(i, k)] -= p;
                            vm[(i, k + 1)] -= p * q;
                        }
                    }
                    k += 1;
                }
            }
        }

        if !vectors || norm == 0.0 {
            return Ok(());
        }

        // back substitution on the quasi-triangular factor
        for n in (0..nn).rev() {
            p = d[n];
            q = e[n];

            if q == 0.0 {
                let mut l = n;
                h[(n, n)] = 1.0;
                for i in (0..n).rev() {
                    w = h[(i, i)] - p;
                    r = 0.0;
                    for j in l..=n {
                        r += h[(i, j)] * h[(j, n)];
                    }
                    if e[i] < 0.0 {
                        z = w;
                        s = r;
                    } else {
                        l = i;
                        if e[i] == 0.0 {
                            h[(i, n)] = if w != 0.0 { -r / w } else { -r / (EPS * norm) };
                        } else {
                            x = h[(i, i + 1)];
                            y = h[(i + 1, i)];
                            q = (d[i] - p) * (d[i] - p) + e[i] * e[i];
                            let t = (x * s - z * r) / q;
                            h[(i, n)] = t;
                            h[(i + 1, n)] = if x.abs() > z.abs() {
                                (-r - w * t) / x
                            } else {
                                (-s - y * t) / z
                            };
                        }
                        let t = h[(i, n)].abs();
                        if (EPS * t) * t > 1.0 {
                            for j in i..=n {
                                h[(j, n)] /= t;
                            }
                        }
                    }
                }
            } else if q < 0.0 {
                let mut l = n - 1;
                if h[(n, n - 1)].abs() > h[(n - 1, n)].abs() {
                    h[(n - 1, n - 1)] = q / h[(n, n - 1)];
                    h[(n - 1, n)] = -(h[(n, n)] - p) / h[(n, n - 1)];
                } else {
                    let c = cdiv(0.0, -h[(n - 1, n)], h[(n - 1, n - 1)] - p, q);
                    h[(n - 1, n - 1)] = c.re;
                    h[(n - 1, n)] = c.im;
                }
                h[(n, n - 1)] = 0.0;
                h[(n, n)] = 1.0;
                for i in (0..n.saturating_sub(1)).rev() {
                    let mut ra = 0.0;
                    let mut sa = 0.0;
                    for j in l..=n {
                        ra += h[(i, j)] * h[(j, n - 1)];
                        sa += h[(i, j)] * h[(j, n)];
                    }
                    w = h[(i, i)] - p;

                    if e[i] < 0.0 {
                        z = w;
                        r = ra;
                        s = sa;
                    } else {
                        l = i;
                        if e[i] == 0.0 {
                            let c = cdiv(-ra, -sa, w, q);
                            h[(i, n - 1)] = c.re;
                            h[(i, n)] = c.im;
                        } else {
                            x = h[(i, i + 1)];
                            y = h[(i + 1, i)];
                            let mut vr = (d[i] - p) * (d[i] - p) + e[i] * e[i] - q * q;
                            let vi = (d[i] - p) * 2.0 * q;
                            if vr == 0.0 && vi == 0.0 {
                                vr = EPS * norm * (w.abs() + q.abs() + x.abs() + y.abs() + z.abs());
                            }
                            let c = cdiv(
                                x * r - z * ra + q * sa,
                                x * s - z * sa - q * ra,
                                vr,
                                vi,
                            );
                            h[(i, n - 1)] = c.re;
                            h[(i, n)] = c.im;
                            if x.abs() > z.abs() + q.abs() {
                                h[(i + 1, n - 1)] =
                                    (-ra - w * h[(i, n - 1)] + q * h[(i, n)]) / x;
                                h[(i + 1, n)] = (-sa - w * h[(i, n)] - q * h[(i, n - 1)]) / x;
                            } else {
                                let c = cdiv(-r - y * h[(i, n - 1)], -s - y * h[(i, n)], z, q);
                                h[(i + 1, n - 1)] = c.re;
                                h[(i + 1, n)] = c.im;
                            }
                        }
                        let t = h[(i, n - 1)].abs().max(h[(i, n)].abs());
                        if (EPS * t) * t > 1.0 {
                            for j in i..=n {
                                h[(j, n - 1)] /= t;
                                h[(j, n)] /= t;
                            }
                        }
                    }
                }
            }
        }

        // back transformation
        for j in (low..nn).rev() {
            for i in low..=high {
                let mut acc = 0.0;
                for k in low..=j.min(high) {
                    acc += vm[(i, k)] * h[(k, j)];
                }
                vm[(i, j)] = acc;
            }
        }
        Ok(())
    }

    /// Repackage the real-form result: a pair `(d ± i e)` occupies two
    /// adjacent columns holding the real and imaginary parts of the
    /// eigenvector for the `+` member.
    fn into_complex(self) -> RawEigen {
        let n = self.n;
        let mut values = Vec::with_capacity(n);
        let mut vectors = DMatrix::<C64>::zeros(n, n);
        let mut j = 0;
        while j < n {
            if self.e[j] == 0.0 {
                values.push(C64::new(self.d[j], 0.0));
                for i in 0..n {
                    vectors[(i, j)] = C64::new(self.v[(i, j)], 0.0);
                }
                j += 1;
            } else {
                let lam = C64::new(self.d[j], self.e[j]);
                values.push(lam);
                values.push(lam.conj());
                for i in 0..n {
                    let z = C64::new(self.v[(i, j)], self.v[(i, j + 1)]);
                    vectors[(i, j)] = z;
                    vectors[(i, j + 1)] = z.conj();
                }
                j += 2;
            }
        }
        RawEigen { values, vectors }
    }
}

fn cdiv(xr: f64, xi: f64, yr: f64, yi: f64) -> C64 {
    if yr.abs() > yi.abs() {
        let r = yi / yr;
        let d = yr + r * yi;
        C64::new((xr + r * xi) / d, (xi - r * xr) / d)
    } else {
        let r = yr / yi;
        let d = yi + r * yr;
        C64::new((r * xr + xi) / d, (r * xi - xr) / d)
    }
}
