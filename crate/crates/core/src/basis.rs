//! Tensor-product orthonormal Legendre basis on the reference square
//! [-1,1]^2 and Gauss-Legendre / Gauss-Lobatto quadrature rules.
//!
//! The 1D building block is phi_m(x) = sqrt((2m+1)/2) * P_m(x), normalized so
//! that the L2 norm of phi_m over [-1,1] is one. The 2D basis is
//! psi_i(r,s) = phi_m(r) * phi_n(s) with the row-major mode ordering
//! i = m*(N+1) + n. In particular psi_0 = 1/2, so a cell mean and the
//! constant-mode coefficient are related by mean = Q_0 * 1/2.

use crate::error::{Error, Result};

/// Highest per-direction polynomial degree supported by the solver.
pub const MAX_ORDER: usize = 4;

/// Value of the constant basis function psi_0 on the reference square.
/// cell mean = Q_0 * PSI0.
pub const PSI0: f64 = 0.5;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QuadKind {
    Gauss,
    GaussLobatto,
}

/// One-dimensional quadrature rule on [-1,1].
#[derive(Debug, Clone)]
pub struct QuadratureRule {
    pub kind: QuadKind,
    pub points: Vec<f64>,
    pub weights: Vec<f64>,
}

impl QuadratureRule {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Integrate a function over [-1,1].
    pub fn integrate(&self, mut f: impl FnMut(f64) -> f64) -> f64 {
        self.points
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(x))
            .sum()
    }
}

/// Legendre polynomial P_n(x) by the three-term recurrence.
pub fn legendre(n: usize, x: f64) -> f64 {
    match n {
        0 => 1.0,
        1 => x,
        _ => {
            let mut pm1 = 1.0;
            let mut p = x;
            for k in 1..n {
                let next = ((2 * k + 1) as f64 * x * p - k as f64 * pm1) / (k + 1) as f64;
                pm1 = p;
                p = next;
            }
            p
        }
    }
}

/// First derivative P_n'(x) via the recurrence P'_{k+1} = (2k+1) P_k + P'_{k-1}.
pub fn legendre_deriv(n: usize, x: f64) -> f64 {
    match n {
        0 => 0.0,
        1 => 1.0,
        _ => {
            let mut dm1 = 0.0; // P'_0
            let mut d = 1.0; // P'_1
            let mut pm1 = x; // P_1
            let mut pm2 = 1.0; // P_0
            for k in 1..n {
                let dnext = (2 * k + 1) as f64 * pm1 + dm1;
                let pnext = ((2 * k + 1) as f64 * x * pm1 - k as f64 * pm2) / (k + 1) as f64;
                dm1 = d;
                d = dnext;
                pm2 = pm1;
                pm1 = pnext;
            }
            d
        }
    }
}

/// Second derivative from the Legendre ODE,
/// (1-x^2) P'' = 2x P' - n(n+1) P; only valid away from the endpoints.
fn legendre_deriv2(n: usize, x: f64) -> f64 {
    (2.0 * x * legendre_deriv(n, x) - (n * (n + 1)) as f64 * legendre(n, x)) / (1.0 - x * x)
}

/// Orthonormal 1D Legendre basis phi_m(x) = sqrt((2m+1)/2) P_m(x).
pub fn phi(m: usize, x: f64) -> f64 {
    (((2 * m + 1) as f64) / 2.0).sqrt() * legendre(m, x)
}

/// Derivative of the orthonormal 1D basis.
pub fn phi_deriv(m: usize, x: f64) -> f64 {
    (((2 * m + 1) as f64) / 2.0).sqrt() * legendre_deriv(m, x)
}

/// Gauss-Legendre rule with `n` points (1 <= n <= 10), exact to degree 2n-1.
pub fn gauss_rule(n: usize) -> Result<QuadratureRule> {
    if n == 0 || n > 10 {
        return Err(Error::UnsupportedQuadrature(n));
    }
    let mut points = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n {
        // Initial guess: Chebyshev-like approximation to the i-th root.
        let mut x = (std::f64::consts::PI * (4.0 * i as f64 + 3.0) / (4.0 * n as f64 + 2.0)).cos();
        for _ in 0..100 {
            let f = legendre(n, x);
            let df = legendre_deriv(n, x);
            let dx = f / df;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let df = legendre_deriv(n, x);
        points[i] = x;
        weights[i] = 2.0 / ((1.0 - x * x) * df * df);
    }
    points.reverse();
    weights.reverse();
    // Clean up symmetric pairs so the rule is exactly antisymmetric.
    for i in 0..n / 2 {
        let a = 0.5 * (points[n - 1 - i] - points[i]);
        points[i] = -a;
        points[n - 1 - i] = a;
        let w = 0.5 * (weights[i] + weights[n - 1 - i]);
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        points[n / 2] = 0.0;
    }
    Ok(QuadratureRule { kind: QuadKind::Gauss, points, weights })
}

/// Gauss-Lobatto rule with `n` points (2 <= n <= 10), exact to degree 2n-3.
/// Endpoints are included; interior nodes are the roots of P'_{n-1}.
pub fn gauss_lobatto_rule(n: usize) -> Result<QuadratureRule> {
    if n < 2 || n > 10 {
        return Err(Error::UnsupportedQuadrature(n));
    }
    let m = n - 1;
    let mut points = vec![0.0; n];
    points[0] = -1.0;
    points[n - 1] = 1.0;
    for i in 1..m {
        // Interior roots of P'_m, seeded between Chebyshev-Lobatto nodes.
        let mut x = 0.5
            * ((std::f64::consts::PI * i as f64 / m as f64).cos()
                + (std::f64::consts::PI * (i as f64 + 1.0) / (m as f64 + 1.0)).cos());
        for _ in 0..100 {
            let f = legendre_deriv(m, x);
            let df = legendre_deriv2(m, x);
            let dx = f / df;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        points[m - i] = x;
    }
    for i in 0..n / 2 {
        let a = 0.5 * (points[n - 1 - i] - points[i]);
        points[i] = -a;
        points[n - 1 - i] = a;
    }
    if n % 2 == 1 {
        points[n / 2] = 0.0;
    }
    let weights: Vec<f64> = points
        .iter()
        .map(|&x| {
            let p = legendre(m, x);
            2.0 / ((m * n) as f64 * p * p)
        })
        .collect();
    Ok(QuadratureRule { kind: QuadKind::GaussLobatto, points, weights })
}

/// Tensor-product orthonormal Legendre basis of per-direction degree N on
/// [-1,1]^2, with Np = (N+1)^2 modes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModalBasis {
    order: usize,
    np: usize,
}

impl ModalBasis {
    pub fn new(order: usize) -> Result<Self> {
        if order < 1 || order > MAX_ORDER {
            return Err(Error::UnsupportedOrder(order));
        }
        Ok(Self { order, np: (order + 1) * (order + 1) })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// Number of modes, (N+1)^2.
    pub fn np(&self) -> usize {
        self.np
    }

    /// Flat index of the tensor mode with r-degree `m` and s-degree `n`.
    pub fn mode(&self, m: usize, n: usize) -> usize {
        m * (self.order + 1) + n
    }

    /// Evaluate all modes at (r,s) into `out` (length Np).
    pub fn eval_into(&self, r: f64, s: f64, out: &mut [f64]) {
        debug_assert_eq!(out.len(), self.np);
        let k = self.order + 1;
        let mut pr = [0.0; MAX_ORDER + 1];
        let mut ps = [0.0; MAX_ORDER + 1];
        for m in 0..k {
            pr[m] = phi(m, r);
            ps[m] = phi(m, s);
        }
        for m in 0..k {
            for n in 0..k {
                out[m * k + n] = pr[m] * ps[n];
            }
        }
    }

    /// Evaluate the reference-space gradient of all modes at (r,s).
    pub fn grad_into(&self, r: f64, s: f64, out_r: &mut [f64], out_s: &mut [f64]) {
        debug_assert_eq!(out_r.len(), self.np);
        debug_assert_eq!(out_s.len(), self.np);
        let k = self.order + 1;
        let mut pr = [0.0; MAX_ORDER + 1];
        let mut ps = [0.0; MAX_ORDER + 1];
        let mut dr = [0.0; MAX_ORDER + 1];
        let mut ds = [0.0; MAX_ORDER + 1];
        for m in 0..k {
            pr[m] = phi(m, r);
            ps[m] = phi(m, s);
            dr[m] = phi_deriv(m, r);
            ds[m] = phi_deriv(m, s);
        }
        for m in 0..k {
            for n in 0..k {
                out_r[m * k + n] = dr[m] * ps[n];
                out_s[m * k + n] = pr[m] * ds[n];
            }
        }
    }

    /// Convenience allocating variant of [`eval_into`](Self::eval_into).
    pub fn eval(&self, r: f64, s: f64) -> Vec<f64> {
        let mut out = vec![0.0; self.np];
        self.eval_into(r, s, &mut out);
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    /// Bisection root finder used as an independent oracle for Gauss nodes.
    fn bisect_root(mut f: impl FnMut(f64) -> f64, mut a: f64, mut b: f64) -> f64 {
        let mut fa = f(a);
        assert!(fa * f(b) < 0.0, "no sign change on [{a}, {b}]");
        for _ in 0..200 {
            let m = 0.5 * (a + b);
            let fm = f(m);
            if fm == 0.0 {
                return m;
            }
            if fa * fm < 0.0 {
                b = m;
            } else {
                a = m;
                fa = fm;
            }
        }
        0.5 * (a + b)
    }

    #[test]
    fn gauss_two_point() {
        let q = gauss_rule(2).unwrap();
        let r = 1.0 / 3.0_f64.sqrt();
        assert_abs_diff_eq!(q.points[0], -r, epsilon = 1e-15);
        assert_abs_diff_eq!(q.points[1], r, epsilon = 1e-15);
        assert_abs_diff_eq!(q.weights[0], 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(q.weights[1], 1.0, epsilon = 1e-15);
    }

    #[test]
    fn gauss_one_point_is_midpoint() {
        let q = gauss_rule(1).unwrap();
        assert_eq!(q.points, vec![0.0]);
        assert_abs_diff_eq!(q.weights[0], 2.0, epsilon = 1e-15);
    }

    #[test]
    fn gauss_four_matches_bisection_oracle() {
        let q = gauss_rule(4).unwrap();
        // Roots of P_4 found independently by bisection on bracketing intervals.
        let r1 = bisect_root(|x| legendre(4, x), 0.2, 0.6);
        let r2 = bisect_root(|x| legendre(4, x), 0.7, 0.95);
        assert_abs_diff_eq!(q.points[2], r1, epsilon = 1e-13);
        assert_abs_diff_eq!(q.points[3], r2, epsilon = 1e-13);
        assert_abs_diff_eq!(q.points[2], 0.3399810435848563, epsilon = 1e-12);
        assert_abs_diff_eq!(q.points[3], 0.8611363115940526, epsilon = 1e-12);
        assert_abs_diff_eq!(q.points[0], -q.points[3], epsilon = 0.0);
        assert_abs_diff_eq!(q.points[1], -q.points[2], epsilon = 0.0);
    }

    #[test]
    fn lobatto_small_rules() {
        let q2 = gauss_lobatto_rule(2).unwrap();
        assert_eq!(q2.points, vec![-1.0, 1.0]);
        assert_abs_diff_eq!(q2.weights[0], 1.0, epsilon = 1e-15);

        let q3 = gauss_lobatto_rule(3).unwrap();
        assert_abs_diff_eq!(q3.points[1], 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(q3.weights[0], 1.0 / 3.0, epsilon = 1e-14);
        assert_abs_diff_eq!(q3.weights[1], 4.0 / 3.0, epsilon = 1e-14);
        assert_abs_diff_eq!(q3.weights[2], 1.0 / 3.0, epsilon = 1e-14);

        // Interior nodes of the 4-point rule are the roots of P_3', i.e. +-1/sqrt(5).
        let q4 = gauss_lobatto_rule(4).unwrap();
        let r = 1.0 / 5.0_f64.sqrt();
        assert_abs_diff_eq!(q4.points[0], -1.0, epsilon = 0.0);
        assert_abs_diff_eq!(q4.points[1], -r, epsilon = 1e-14);
        assert_abs_diff_eq!(q4.points[2], r, epsilon = 1e-14);
        assert_abs_diff_eq!(q4.points[3], 1.0, epsilon = 0.0);
    }

    #[test]
    fn quadrature_sums_and_exactness() {
        // Exact monomial integrals over [-1,1]: 0 for odd k, 2/(k+1) for even k.
        let exact = |k: u32| if k % 2 == 1 { 0.0 } else { 2.0 / (k as f64 + 1.0) };
        for n in 1..=10 {
            let q = gauss_rule(n).unwrap();
            assert_abs_diff_eq!(q.weights.iter().sum::<f64>(), 2.0, epsilon = 1e-13);
            for k in 0..=(2 * n as u32 - 1) {
                let got = q.integrate(|x| x.powi(k as i32));
                assert_abs_diff_eq!(got, exact(k), epsilon = 1e-13);
            }
        }
        for n in 2..=10 {
            let q = gauss_lobatto_rule(n).unwrap();
            assert_abs_diff_eq!(q.weights.iter().sum::<f64>(), 2.0, epsilon = 1e-13);
            for k in 0..=(2 * n as u32 - 3) {
                let got = q.integrate(|x| x.powi(k as i32));
                assert_abs_diff_eq!(got, exact(k), epsilon = 1e-13);
            }
        }
    }

    #[test]
    fn unsupported_sizes_error() {
        assert!(gauss_rule(0).is_err());
        assert!(gauss_rule(11).is_err());
        assert!(gauss_lobatto_rule(1).is_err());
        assert!(gauss_lobatto_rule(11).is_err());
        assert!(ModalBasis::new(0).is_err());
        assert!(ModalBasis::new(5).is_err());
    }

    #[test]
    fn constant_mode_normalization() {
        let b = ModalBasis::new(1).unwrap();
        let v = b.eval(0.0, 0.0);
        assert_abs_diff_eq!(v[0], 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(v[0], PSI0, epsilon = 1e-15);
    }

    #[test]
    fn corner_values_n1() {
        // phi_0(1) = 1/sqrt(2), phi_1(1) = sqrt(3/2).
        let b = ModalBasis::new(1).unwrap();
        let v = b.eval(1.0, 1.0);
        let s32 = (3.0_f64 / 2.0).sqrt();
        let s12 = (1.0_f64 / 2.0).sqrt();
        assert_abs_diff_eq!(v[b.mode(0, 0)], s12 * s12, epsilon = 1e-15);
        assert_abs_diff_eq!(v[b.mode(0, 1)], s12 * s32, epsilon = 1e-15);
        assert_abs_diff_eq!(v[b.mode(1, 0)], s32 * s12, epsilon = 1e-15);
        assert_abs_diff_eq!(v[b.mode(1, 1)], s32 * s32, epsilon = 1e-15);
    }

    #[test]
    fn parity_symmetry() {
        for order in 1..=MAX_ORDER {
            let b = ModalBasis::new(order).unwrap();
            for &(r, s) in &[(0.3, -0.7), (0.9, 0.1), (-0.55, -0.2)] {
                let a = b.eval(r, s);
                let c = b.eval(-r, -s);
                for m in 0..=order {
                    for n in 0..=order {
                        let sign = if (m + n) % 2 == 0 { 1.0 } else { -1.0 };
                        assert_abs_diff_eq!(c[b.mode(m, n)], sign * a[b.mode(m, n)], epsilon = 1e-13);
                    }
                }
            }
        }
    }

    #[test]
    fn orthonormality_under_gauss() {
        for order in 1..=MAX_ORDER {
            let b = ModalBasis::new(order).unwrap();
            let q = gauss_rule(order + 1).unwrap();
            let np = b.np();
            let mut gram = vec![0.0; np * np];
            for (&r, &wr) in q.points.iter().zip(&q.weights) {
                for (&s, &ws) in q.points.iter().zip(&q.weights) {
                    let v = b.eval(r, s);
                    for i in 0..np {
                        for j in 0..np {
                            gram[i * np + j] += wr * ws * v[i] * v[j];
                        }
                    }
                }
            }
            for i in 0..np {
                for j in 0..np {
                    let want = if i == j { 1.0 } else { 0.0 };
                    assert_abs_diff_eq!(gram[i * np + j], want, epsilon = 1e-12);
                }
            }
        }
    }

    #[test]
    fn projection_round_trip() {
        // Project an arbitrary member of the space and recover its coefficients.
        use rand::{rngs::StdRng, Rng, SeedableRng};
        let mut rng = StdRng::seed_from_u64(7);
        for order in 1..=MAX_ORDER {
            let b = ModalBasis::new(order).unwrap();
            let q = gauss_rule(order + 1).unwrap();
            let np = b.np();
            let coeffs: Vec<f64> = (0..np).map(|_| rng.gen_range(-2.0..2.0)).collect();
            let f = |r: f64, s: f64| -> f64 {
                b.eval(r, s).iter().zip(&coeffs).map(|(p, c)| p * c).sum()
            };
            let mut recovered = vec![0.0; np];
            for (&r, &wr) in q.points.iter().zip(&q.weights) {
                for (&s, &ws) in q.points.iter().zip(&q.weights) {
                    let v = b.eval(r, s);
                    let val = f(r, s);
                    for i in 0..np {
                        recovered[i] += wr * ws * val * v[i];
                    }
                }
            }
            for i in 0..np {
                assert_abs_diff_eq!(recovered[i], coeffs[i], epsilon = 1e-12);
            }
        }
    }
}
