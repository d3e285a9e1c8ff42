//! Eigenvalues of a real 3x3 matrix from its characteristic cubic.

use num_complex::Complex64;

type Mat3 = [[f64; 3]; 3];

const POLISH_STEPS: usize = 30;

/// Eigenvalues sorted by decreasing real part, then decreasing imaginary part.
///
/// One real root of the characteristic cubic is bracketed and bisected, the
/// remaining two come from the deflated quadratic, and every root is then
/// refined by Newton steps on `det(A - xi I)` evaluated from the matrix
/// entries, which avoids the cancellation hidden in the cubic's coefficients.
pub fn eigenvalues3(a: &Mat3) -> [Complex64; 3] {
    let trace = a[0][0] + a[1][1] + a[2][2];
    let minors = principal_minor_sum(a);
    let det = det3(a);
    // xi^3 + c2 xi^2 + c1 xi + c0
    let (c2, c1, c0) = (-trace, minors, -det);

    let r = real_root(c2, c1, c0);
    let q1 = c2 + r;
    let q0 = if r != 0.0 && (c1 + r * q1).abs() < 1e-8 * c1.abs() { -c0 / r } else { c1 + r * q1 };
    let [s1, s2] = quadratic_roots(q1, q0);

    let mut roots = [Complex64::new(r, 0.0), s1, s2].map(|z| polish(a, z));
    // Keep conjugate pairs exactly conjugate and real roots exactly real.
    if s1.im != 0.0 {
        roots[2] = roots[1].conj();
    } else {
        roots[1].im = 0.0;
        roots[2].im = 0.0;
    }
    roots[0].im = 0.0;
    roots.sort_by(|x, y| y.re.total_cmp(&x.re).then(y.im.total_cmp(&x.im)));
    roots
}

pub(crate) fn det3(a: &Mat3) -> f64 {
    a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1]) - a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0])
        + a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0])
}

fn principal_minor_sum(a: &Mat3) -> f64 {
    (a[0][0] * a[1][1] - a[0][1] * a[1][0])
        + (a[0][0] * a[2][2] - a[0][2] * a[2][0])
        + (a[1][1] * a[2][2] - a[1][2] * a[2][1])
}

fn cubic(c2: f64, c1: f64, c0: f64, x: f64) -> f64 {
    ((x + c2) * x + c1) * x + c0
}

fn real_root(c2: f64, c1: f64, c0: f64) -> f64 {
    // Fujiwara bound on the modulus of every root.
    let bound = 2.0 * c2.abs().max(c1.abs().sqrt()).max((0.5 * c0.abs()).cbrt());
    if bound == 0.0 {
        return 0.0;
    }
    let (mut lo, mut hi) = (-bound, bound);
    loop {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            return mid;
        }
        let v = cubic(c2, c1, c0, mid);
        if v == 0.0 {
            return mid;
        }
        if v < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
}

/// Roots of `xi^2 + b xi + c`.
fn quadratic_roots(b: f64, c: f64) -> [Complex64; 2] {
    let disc = b * b - 4.0 * c;
    if disc >= 0.0 {
        let s = disc.sqrt();
        let q = -0.5 * (b + b.signum() * s);
        if q == 0.0 {
            return [Complex64::new(0.0, 0.0); 2];
        }
        [Complex64::new(q, 0.0), Complex64::new(c / q, 0.0)]
    } else {
        let re = -0.5 * b;
        let im = 0.5 * (-disc).sqrt();
        [Complex64::new(re, im), Complex64::new(re, -im)]
    }
}

/// `det(A - xi I)` and its derivative in `xi`.
fn char_det(a: &Mat3, xi: Complex64) -> (Complex64, Complex64) {
    let m = |i: usize, j: usize| {
        if i == j {
            Complex64::new(a[i][j], 0.0) - xi
        } else {
            Complex64::new(a[i][j], 0.0)
        }
    };
    let minor = |i: usize, j: usize, k: usize, l: usize| m(i, k) * m(j, l) - m(i, l) * m(j, k);
    let det = m(0, 0) * minor(1, 2, 1, 2) - m(0, 1) * (m(1, 0) * m(2, 2) - m(1, 2) * m(2, 0))
        + m(0, 2) * (m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0));
    let deriv = -(minor(1, 2, 1, 2) + minor(0, 2, 0, 2) + minor(0, 1, 0, 1));
    (det, deriv)
}

fn polish(a: &Mat3, z0: Complex64) -> Complex64 {
    let scale = a.iter().flatten().fold(0.0_f64, |m, v| m.max(v.abs())).max(1.0);
    let (mut z, mut best) = (z0, char_det(a, z0).0.norm());
    for _ in 0..POLISH_STEPS {
        let (f, df) = char_det(a, z);
        if f.norm() == 0.0 || df.norm() == 0.0 {
            break;
        }
        let next = z - f / df;
        // Newton may wander off near multiple roots; only accept improvements
        // that stay local.
        if (next - z0).norm() > 1e-3 * scale {
            break;
        }
        let value = char_det(a, next).0.norm();
        if value > best {
            break;
        }
        let done = (next - z).norm() <= 4.0 * f64::EPSILON * next.norm().max(1.0);
        z = next;
        best = value;
        if done {
            break;
        }
    }
    z
}
