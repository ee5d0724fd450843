//! Conserved-variable algebra for the 2D Euler equations.
//!
//! State vector Q = (rho, rho*u, rho*v, E), pressure closure
//! p = (gamma-1)(E - rho(u^2+v^2)/2) with gamma = 1.4, and fluxes
//! F(Q) = u*Q + (0, p, 0, p*u), G(Q) = v*Q + (0, 0, p, p*v).

use crate::error::{Error, Result};

/// Ratio of specific heats (diatomic ideal gas).
pub const GAMMA: f64 = 1.4;

/// Plain 4-vector used for fluxes, residuals and characteristic variables.
pub type Vec4 = [f64; 4];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConservedState {
    pub rho: f64,
    pub rho_u: f64,
    pub rho_v: f64,
    pub energy: f64,
}

/// x- and y-direction flux vectors of a state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FluxPair {
    pub f: Vec4,
    pub g: Vec4,
}

/// Numerical flux selector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum FluxKind {
    /// Local Lax-Friedrichs (Rusanov).
    #[default]
    Llf,
    /// HLLC with PVRS pressure-based wave-speed estimates.
    Hllc,
}

impl std::str::FromStr for FluxKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "llf" => Ok(FluxKind::Llf),
            "hllc" => Ok(FluxKind::Hllc),
            other => Err(Error::Config(format!("unknown flux '{other}' (expected llf|hllc)"))),
        }
    }
}

impl ConservedState {
    pub fn new(rho: f64, rho_u: f64, rho_v: f64, energy: f64) -> Self {
        Self { rho, rho_u, rho_v, energy }
    }

    /// Build from primitive variables (rho, u, v, p).
    pub fn from_primitive(rho: f64, u: f64, v: f64, p: f64) -> Self {
        Self {
            rho,
            rho_u: rho * u,
            rho_v: rho * v,
            energy: p / (GAMMA - 1.0) + 0.5 * rho * (u * u + v * v),
        }
    }

    pub fn as_array(&self) -> Vec4 {
        [self.rho, self.rho_u, self.rho_v, self.energy]
    }

    pub fn from_array(a: Vec4) -> Self {
        Self { rho: a[0], rho_u: a[1], rho_v: a[2], energy: a[3] }
    }

    pub fn velocity(&self) -> (f64, f64) {
        (self.rho_u / self.rho, self.rho_v / self.rho)
    }

    /// Pressure; errors on non-positive density or pressure so that a
    /// blown-up solution surfaces instead of being clipped.
    pub fn pressure(&self) -> Result<f64> {
        if !(self.rho > 0.0) || !self.rho.is_finite() {
            return Err(Error::InvalidState {
                reason: "non-positive density",
                rho: self.rho,
                p: f64::NAN,
            });
        }
        let p = self.pressure_raw();
        if !(p > 0.0) || !p.is_finite() {
            return Err(Error::InvalidState { reason: "non-positive pressure", rho: self.rho, p });
        }
        Ok(p)
    }

    #[inline]
    pub fn pressure_raw(&self) -> f64 {
        (GAMMA - 1.0)
            * (self.energy - 0.5 * (self.rho_u * self.rho_u + self.rho_v * self.rho_v) / self.rho)
    }

    pub fn sound_speed(&self) -> Result<f64> {
        Ok((GAMMA * self.pressure()? / self.rho).sqrt())
    }

    /// F(Q) and G(Q).
    pub fn flux(&self) -> Result<FluxPair> {
        let p = self.pressure()?;
        let (u, v) = self.velocity();
        Ok(FluxPair {
            f: [
                self.rho * u,
                self.rho_u * u + p,
                self.rho_v * u,
                (self.energy + p) * u,
            ],
            g: [
                self.rho * v,
                self.rho_u * v,
                self.rho_v * v + p,
                (self.energy + p) * v,
            ],
        })
    }

    /// Directional flux nx*F + ny*G together with |u.n| + c, the fastest
    /// signal speed through a face with unit normal n.
    #[inline]
    pub fn normal_flux_and_speed(&self, nx: f64, ny: f64) -> Result<(Vec4, f64)> {
        let p = self.pressure()?;
        let (u, v) = self.velocity();
        let un = u * nx + v * ny;
        let c = (GAMMA * p / self.rho).sqrt();
        Ok((
            [
                self.rho * un,
                self.rho_u * un + p * nx,
                self.rho_v * un + p * ny,
                (self.energy + p) * un,
            ],
            un.abs() + c,
        ))
    }
}

#[inline]
pub fn vec4_sub(a: Vec4, b: Vec4) -> Vec4 {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2], a[3] - b[3]]
}

#[inline]
pub fn vec4_add(a: Vec4, b: Vec4) -> Vec4 {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2], a[3] + b[3]]
}

#[inline]
pub fn vec4_scale(a: Vec4, c: f64) -> Vec4 {
    [c * a[0], c * a[1], c * a[2], c * a[3]]
}

/// Local Lax-Friedrichs numerical flux through a face with unit normal n.
///
/// 0.5 * (Fn(qL) + Fn(qR) - lambda (qR - qL)) with lambda = max(|u.n| + c).
/// Consistent (qL = qR reproduces the exact normal flux) and antisymmetric
/// under (qL, qR, n) -> (qR, qL, -n).
pub fn llf_flux(ql: &ConservedState, qr: &ConservedState, nx: f64, ny: f64) -> Result<Vec4> {
    let (fl, sl) = ql.normal_flux_and_speed(nx, ny)?;
    let (fr, sr) = qr.normal_flux_and_speed(nx, ny)?;
    let lambda = sl.max(sr);
    let dl = vec4_sub(qr.as_array(), ql.as_array());
    Ok([
        0.5 * (fl[0] + fr[0] - lambda * dl[0]),
        0.5 * (fl[1] + fr[1] - lambda * dl[1]),
        0.5 * (fl[2] + fr[2] - lambda * dl[2]),
        0.5 * (fl[3] + fr[3] - lambda * dl[3]),
    ])
}

/// HLLC numerical flux with PVRS-based pressure estimate for wave speeds.
pub fn hllc_flux(ql: &ConservedState, qr: &ConservedState, nx: f64, ny: f64) -> Result<Vec4> {
    let pl = ql.pressure()?;
    let pr = qr.pressure()?;
    let (ul, vl) = ql.velocity();
    let (ur, vr) = qr.velocity();
    let unl = ul * nx + vl * ny;
    let unr = ur * nx + vr * ny;
    let cl = (GAMMA * pl / ql.rho).sqrt();
    let cr = (GAMMA * pr / qr.rho).sqrt();

    // PVRS pressure estimate.
    let rho_bar = 0.5 * (ql.rho + qr.rho);
    let c_bar = 0.5 * (cl + cr);
    let p_star = (0.5 * (pl + pr) - 0.5 * (unr - unl) * rho_bar * c_bar).max(0.0);

    let qfac = |p_k: f64| -> f64 {
        if p_star <= p_k {
            1.0
        } else {
            (1.0 + (GAMMA + 1.0) / (2.0 * GAMMA) * (p_star / p_k - 1.0)).sqrt()
        }
    };
    let s_l = unl - cl * qfac(pl);
    let s_r = unr + cr * qfac(pr);
    let s_m = (pr - pl + ql.rho * unl * (s_l - unl) - qr.rho * unr * (s_r - unr))
        / (ql.rho * (s_l - unl) - qr.rho * (s_r - unr));

    let flux_of = |q: &ConservedState, p: f64, un: f64| -> Vec4 {
        [
            q.rho * un,
            q.rho_u * un + p * nx,
            q.rho_v * un + p * ny,
            (q.energy + p) * un,
        ]
    };
    let star_state = |q: &ConservedState, p: f64, un: f64, s_k: f64| -> Vec4 {
        let fac = q.rho * (s_k - un) / (s_k - s_m);
        let (u, v) = q.velocity();
        [
            fac,
            fac * (u + (s_m - un) * nx),
            fac * (v + (s_m - un) * ny),
            fac * (q.energy / q.rho + (s_m - un) * (s_m + p / (q.rho * (s_k - un)))),
        ]
    };

    if s_l >= 0.0 {
        Ok(flux_of(ql, pl, unl))
    } else if s_m >= 0.0 {
        let f = flux_of(ql, pl, unl);
        let d = vec4_sub(star_state(ql, pl, unl, s_l), ql.as_array());
        Ok(vec4_add(f, vec4_scale(d, s_l)))
    } else if s_r >= 0.0 {
        let f = flux_of(qr, pr, unr);
        let d = vec4_sub(star_state(qr, pr, unr, s_r), qr.as_array());
        Ok(vec4_add(f, vec4_scale(d, s_r)))
    } else {
        Ok(flux_of(qr, pr, unr))
    }
}

/// Numerical flux dispatch.
#[inline]
pub fn numerical_flux(
    kind: FluxKind,
    ql: &ConservedState,
    qr: &ConservedState,
    nx: f64,
    ny: f64,
) -> Result<Vec4> {
    match kind {
        FluxKind::Llf => llf_flux(ql, qr, nx, ny),
        FluxKind::Hllc => hllc_flux(ql, qr, nx, ny),
    }
}

/// Characteristic decomposition of the flux Jacobian in a given unit
/// direction, evaluated at a reference state. `to_char` multiplies by the
/// left-eigenvector matrix, `from_char` by the right-eigenvector matrix;
/// the two compose to the identity.
#[derive(Debug, Clone)]
pub struct CharDecomp {
    left: [[f64; 4]; 4],
    right: [[f64; 4]; 4],
}

impl CharDecomp {
    pub fn new(reference: &ConservedState, nx: f64, ny: f64) -> Result<Self> {
        let p = reference.pressure()?;
        let (u, v) = reference.velocity();
        let c = (GAMMA * p / reference.rho).sqrt();
        if !(c > 0.0) {
            return Err(Error::InvalidState { reason: "degenerate sound speed", rho: reference.rho, p });
        }
        let un = u * nx + v * ny;
        let ut = -u * ny + v * nx;
        let ke = 0.5 * (u * u + v * v);
        let h = (reference.energy + p) / reference.rho;
        let b1 = (GAMMA - 1.0) / (c * c);
        let b2 = b1 * ke;

        let right = [
            [1.0, u - c * nx, v - c * ny, h - c * un],
            [1.0, u, v, ke],
            [0.0, -ny, nx, ut],
            [1.0, u + c * nx, v + c * ny, h + c * un],
        ];
        let left = [
            [
                0.5 * (b2 + un / c),
                0.5 * (-b1 * u - nx / c),
                0.5 * (-b1 * v - ny / c),
                0.5 * b1,
            ],
            [1.0 - b2, b1 * u, b1 * v, -b1],
            [-ut, -ny, nx, 0.0],
            [
                0.5 * (b2 - un / c),
                0.5 * (-b1 * u + nx / c),
                0.5 * (-b1 * v + ny / c),
                0.5 * b1,
            ],
        ];
        // `right` above lists eigenvectors as rows; transpose on use.
        Ok(Self { left, right })
    }

    /// w = L q.
    #[inline]
    pub fn to_char(&self, q: Vec4) -> Vec4 {
        let l = &self.left;
        [
            l[0][0] * q[0] + l[0][1] * q[1] + l[0][2] * q[2] + l[0][3] * q[3],
            l[1][0] * q[0] + l[1][1] * q[1] + l[1][2] * q[2] + l[1][3] * q[3],
            l[2][0] * q[0] + l[2][1] * q[1] + l[2][2] * q[2] + l[2][3] * q[3],
            l[3][0] * q[0] + l[3][1] * q[1] + l[3][2] * q[2] + l[3][3] * q[3],
        ]
    }

    /// q = R w.
    #[inline]
    pub fn from_char(&self, w: Vec4) -> Vec4 {
        let r = &self.right;
        [
            r[0][0] * w[0] + r[1][0] * w[1] + r[2][0] * w[2] + r[3][0] * w[3],
            r[0][1] * w[0] + r[1][1] * w[1] + r[2][1] * w[2] + r[3][1] * w[3],
            r[0][2] * w[0] + r[1][2] * w[1] + r[2][2] * w[2] + r[3][2] * w[3],
            r[0][3] * w[0] + r[1][3] * w[1] + r[2][3] * w[2] + r[3][3] * w[3],
        ]
    }

    /// Eigenvalues (un - c, un, un, un + c) at the reference state.
    pub fn eigenvalues(reference: &ConservedState, nx: f64, ny: f64) -> Result<Vec4> {
        let c = reference.sound_speed()?;
        let (u, v) = reference.velocity();
        let un = u * nx + v * ny;
        Ok([un - c, un, un, un + c])
    }
}

/// Transform a list of states to characteristic variables around a reference
/// state (and back with [`inverse_characteristic_transform`]).
pub fn characteristic_transform(
    values: &[ConservedState],
    reference: &ConservedState,
    nx: f64,
    ny: f64,
) -> Result<Vec<Vec4>> {
    let dec = CharDecomp::new(reference, nx, ny)?;
    Ok(values.iter().map(|q| dec.to_char(q.as_array())).collect())
}

pub fn inverse_characteristic_transform(
    values: &[Vec4],
    reference: &ConservedState,
    nx: f64,
    ny: f64,
) -> Result<Vec<ConservedState>> {
    let dec = CharDecomp::new(reference, nx, ny)?;
    Ok(values.iter().map(|w| ConservedState::from_array(dec.from_char(*w))).collect())
}
