//! Minimal dense linear algebra: a complex Hessenberg QR eigenvalue
//! iteration (enough for companion matrices of modest degree) and a real
//! partial-pivot LU solve for the Nystrom system.

use num_complex::Complex64;

use crate::error::{PanelError, Result};

type C64 = Complex64;

/// Eigenvalues of an upper Hessenberg complex matrix by the shifted QR
/// iteration with Givens rotations. Row-major `n x n` storage.
pub fn hessenberg_eigenvalues(mut h: Vec<C64>, n: usize) -> Result<Vec<C64>> {
    assert_eq!(h.len(), n * n);
    let at = |h: &Vec<C64>, i: usize, j: usize| h[i * n + j];
    let mut eigs = Vec::with_capacity(n);
    let mut m = n;
    let mut iters_since_deflate = 0usize;
    let eps = f64::EPSILON;
    while m > 0 {
        if m == 1 {
            eigs.push(at(&h, 0, 0));
            m = 0;
            continue;
        }
        // deflate a negligible subdiagonal closest to the bottom
        let mut deflated = false;
        for k in (1..m).rev() {
            let sub = at(&h, k, k - 1).norm();
            let scale = at(&h, k, k).norm() + at(&h, k - 1, k - 1).norm();
            if sub <= eps * scale.max(1e-300) {
                if k == m - 1 {
                    eigs.push(at(&h, m - 1, m - 1));
                    m -= 1;
                    deflated = true;
                    iters_since_deflate = 0;
                    break;
                }
                // split: lower-right block [k..m) decouples; process it by
                // recursion on the trailing block
                let bn = m - k;
                let mut block = vec![C64::new(0.0, 0.0); bn * bn];
                for i in 0..bn {
                    for j in 0..bn {
                        block[i * bn + j] = at(&h, k + i, k + j);
                    }
                }
                let mut sub_eigs = hessenberg_eigenvalues(block, bn)?;
                eigs.append(&mut sub_eigs);
                m = k;
                deflated = true;
                iters_since_deflate = 0;
                break;
            }
        }
        if deflated {
            continue;
        }
        iters_since_deflate += 1;
        if iters_since_deflate > 40 * n {
            return Err(PanelError::EigenNoConvergence);
        }
        // Wilkinson shift from the trailing 2x2 of the active block
        let a = at(&h, m - 2, m - 2);
        let b = at(&h, m - 2, m - 1);
        let c = at(&h, m - 1, m - 2);
        let d = at(&h, m - 1, m - 1);
        let tr = a + d;
        let det = a * d - b * c;
        let disc = (tr * tr - 4.0 * det).sqrt();
        let mu1 = (tr + disc) * 0.5;
        let mu2 = (tr - disc) * 0.5;
        let mut mu = if (mu1 - d).norm() < (mu2 - d).norm() { mu1 } else { mu2 };
        // occasional exceptional shift breaks symmetry stalls
        if iters_since_deflate % 13 == 0 {
            mu += C64::new(0.371, 0.519) * at(&h, m - 1, m - 2).norm();
        }
        for i in 0..m {
            h[i * n + i] -= mu;
        }
        // QR by Givens on the subdiagonal, then RQ
        let mut rots: Vec<(C64, C64)> = Vec::with_capacity(m - 1);
        for k in 0..m - 1 {
            let x = at(&h, k, k);
            let y = at(&h, k + 1, k);
            let r = (x.norm_sqr() + y.norm_sqr()).sqrt();
            if r == 0.0 {
                rots.push((C64::new(1.0, 0.0), C64::new(0.0, 0.0)));
                continue;
            }
            let cs = x / r;
            let sn = y / r;
            rots.push((cs, sn));
            // G^H acts on rows k, k+1: [conj(cs) conj(sn); -sn cs]
            for j in k..m {
                let hk = at(&h, k, j);
                let hk1 = at(&h, k + 1, j);
                h[k * n + j] = cs.conj() * hk + sn.conj() * hk1;
                h[(k + 1) * n + j] = -sn * hk + cs * hk1;
            }
        }
        for (k, (cs, sn)) in rots.iter().enumerate() {
            // right-multiply by G: columns k, k+1
            for i in 0..(k + 2).min(m) {
                let hik = at(&h, i, k);
                let hik1 = at(&h, i, k + 1);
                h[i * n + k] = hik * cs + hik1 * sn;
                h[i * n + k + 1] = -hik * sn.conj() + hik1 * cs.conj();
            }
        }
        for i in 0..m {
            h[i * n + i] += mu;
        }
    }
    Ok(eigs)
}

/// All roots of the monic polynomial with the given monomial coefficients
/// (constant term first, leading coefficient last and nonzero) via the
/// companion matrix.
pub fn companion_roots(coeffs: &[C64]) -> Result<Vec<C64>> {
    let d = coeffs.len() - 1;
    if d == 0 {
        return Err(PanelError::DegenerateRoots);
    }
    let lead = coeffs[d];
    if d == 1 {
        return Ok(vec![-coeffs[0] / lead]);
    }
    if d == 2 {
        let a = coeffs[2];
        let b = coeffs[1];
        let c = coeffs[0];
        let disc = (b * b - 4.0 * a * c).sqrt();
        // stable pairing: pick the larger-magnitude numerator first
        let q = if (b + disc).norm() >= (b - disc).norm() {
            -(b + disc) * 0.5
        } else {
            -(b - disc) * 0.5
        };
        if q.norm() == 0.0 {
            return Ok(vec![C64::new(0.0, 0.0); 2]);
        }
        return Ok(vec![q / a, c / q]);
    }
    let zero = C64::new(0.0, 0.0);
    let mut h = vec![zero; d * d];
    for i in 1..d {
        h[i * d + i - 1] = C64::new(1.0, 0.0);
    }
    for i in 0..d {
        h[i * d + d - 1] = -coeffs[i] / lead;
    }
    hessenberg_eigenvalues(h, d)
}

/// Solve the real dense system `A x = b` by partial-pivot LU, in place.
pub fn lu_solve(a: &mut [f64], n: usize, b: &mut [f64]) -> Result<()> {
    assert_eq!(a.len(), n * n);
    assert_eq!(b.len(), n);
    for k in 0..n {
        let mut piv = k;
        let mut best = a[k * n + k].abs();
        for i in k + 1..n {
            let v = a[i * n + k].abs();
            if v > best {
                best = v;
                piv = i;
            }
        }
        if best == 0.0 {
            return Err(PanelError::SingularSystem);
        }
        if piv != k {
            for j in 0..n {
                a.swap(k * n + j, piv * n + j);
            }
            b.swap(k, piv);
        }
        let akk = a[k * n + k];
        for i in k + 1..n {
            let l = a[i * n + k] / akk;
            a[i * n + k] = l;
            for j in k + 1..n {
                a[i * n + j] -= l * a[k * n + j];
            }
            b[i] -= l * b[k];
        }
    }
    for i in (0..n).rev() {
        let mut s = b[i];
        for j in i + 1..n {
            s -= a[i * n + j] * b[j];
        }
        b[i] = s / a[i * n + i];
    }
    Ok(())
}
