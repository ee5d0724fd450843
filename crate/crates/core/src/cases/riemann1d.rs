//! Exact solver for the 1D Riemann problem of the Euler equations
//! (two-branch pressure function with Newton iteration, then self-similar
//! sampling), used only to produce reference solutions.

use crate::error::{Error, Result};
use crate::euler::GAMMA;

/// Primitive 1D state (rho, u, p).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Pstate {
    pub rho: f64,
    pub u: f64,
    pub p: f64,
}

impl Pstate {
    pub fn new(rho: f64, u: f64, p: f64) -> Self {
        Self { rho, u, p }
    }

    pub fn sound_speed(&self) -> f64 {
        (GAMMA * self.p / self.rho).sqrt()
    }
}

/// Star-region pressure and velocity.
#[derive(Debug, Clone, Copy)]
pub struct StarRegion {
    pub p: f64,
    pub u: f64,
}

// f_K(p) and its derivative: shock branch for p > p_K, rarefaction otherwise.
fn branch(p: f64, st: &Pstate) -> (f64, f64) {
    let c = st.sound_speed();
    if p > st.p {
        let a = 2.0 / ((GAMMA + 1.0) * st.rho);
        let b = (GAMMA - 1.0) / (GAMMA + 1.0) * st.p;
        let sq = (a / (p + b)).sqrt();
        let f = (p - st.p) * sq;
        let df = sq * (1.0 - 0.5 * (p - st.p) / (p + b));
        (f, df)
    } else {
        let ex = (GAMMA - 1.0) / (2.0 * GAMMA);
        let f = 2.0 * c / (GAMMA - 1.0) * ((p / st.p).powf(ex) - 1.0);
        let df = (p / st.p).powf(-(GAMMA + 1.0) / (2.0 * GAMMA)) / (st.rho * c);
        (f, df)
    }
}

/// Newton solve for the star state.
pub fn solve(left: &Pstate, right: &Pstate) -> Result<StarRegion> {
    let du = right.u - left.u;
    let (cl, cr) = (left.sound_speed(), right.sound_speed());
    if 2.0 * (cl + cr) / (GAMMA - 1.0) <= du {
        return Err(Error::Config("vacuum generated by the Riemann data".into()));
    }
    // PVRS initial guess, floored away from zero.
    let mut p = (0.5 * (left.p + right.p)
        - 0.125 * du * (left.rho + right.rho) * (cl + cr))
        .max(1e-8 * (left.p + right.p));
    for _ in 0..100 {
        let (fl, dfl) = branch(p, left);
        let (fr, dfr) = branch(p, right);
        let f = fl + fr + du;
        let dp = f / (dfl + dfr);
        p -= dp;
        if p <= 0.0 {
            p = 1e-10;
        }
        if dp.abs() < 1e-14 * (1.0 + p) {
            break;
        }
    }
    let (fl, _) = branch(p, left);
    let (fr, _) = branch(p, right);
    let u = 0.5 * (left.u + right.u) + 0.5 * (fr - fl);
    Ok(StarRegion { p, u })
}

/// Sample the self-similar solution at xi = x/t.
pub fn sample(left: &Pstate, right: &Pstate, star: &StarRegion, xi: f64) -> Pstate {
    let g = GAMMA;
    if xi <= star.u {
        // Left of the contact.
        let c = left.sound_speed();
        if star.p > left.p {
            // Left shock.
            let ratio = star.p / left.p;
            let sl = left.u - c * ((g + 1.0) / (2.0 * g) * ratio + (g - 1.0) / (2.0 * g)).sqrt();
            if xi <= sl {
                *left
            } else {
                let rho = left.rho * (ratio + (g - 1.0) / (g + 1.0))
                    / ((g - 1.0) / (g + 1.0) * ratio + 1.0);
                Pstate::new(rho, star.u, star.p)
            }
        } else {
            // Left rarefaction.
            let rho_star = left.rho * (star.p / left.p).powf(1.0 / g);
            let c_star = (g * star.p / rho_star).sqrt();
            let head = left.u - c;
            let tail = star.u - c_star;
            if xi <= head {
                *left
            } else if xi >= tail {
                Pstate::new(rho_star, star.u, star.p)
            } else {
                let u = 2.0 / (g + 1.0) * (c + (g - 1.0) / 2.0 * left.u + xi);
                let cfan = 2.0 / (g + 1.0) * (c + (g - 1.0) / 2.0 * (left.u - xi));
                let rho = left.rho * (cfan / c).powf(2.0 / (g - 1.0));
                let p = left.p * (cfan / c).powf(2.0 * g / (g - 1.0));
                Pstate::new(rho, u, p)
            }
        }
    } else {
        // Right of the contact (mirror).
        let c = right.sound_speed();
        if star.p > right.p {
            let ratio = star.p / right.p;
            let sr = right.u + c * ((g + 1.0) / (2.0 * g) * ratio + (g - 1.0) / (2.0 * g)).sqrt();
            if xi >= sr {
                *right
            } else {
                let rho = right.rho * (ratio + (g - 1.0) / (g + 1.0))
                    / ((g - 1.0) / (g + 1.0) * ratio + 1.0);
                Pstate::new(rho, star.u, star.p)
            }
        } else {
            let rho_star = right.rho * (star.p / right.p).powf(1.0 / g);
            let c_star = (g * star.p / rho_star).sqrt();
            let head = right.u + c;
            let tail = star.u + c_star;
            if xi >= head {
                *right
            } else if xi <= tail {
                Pstate::new(rho_star, star.u, star.p)
            } else {
                let u = 2.0 / (g + 1.0) * (-c + (g - 1.0) / 2.0 * right.u + xi);
                let cfan = 2.0 / (g + 1.0) * (c - (g - 1.0) / 2.0 * (right.u - xi));
                let rho = right.rho * (cfan / c).powf(2.0 / (g - 1.0));
                let p = right.p * (cfan / c).powf(2.0 * g / (g - 1.0));
                Pstate::new(rho, u, p)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn sod_star_state_matches_published_values() {
        // Classical configuration (Toro, Ch. 4, Test 1).
        let l = Pstate::new(1.0, 0.0, 1.0);
        let r = Pstate::new(0.125, 0.0, 0.1);
        let star = solve(&l, &r).unwrap();
        assert_abs_diff_eq!(star.p, 0.30313, epsilon = 1e-4);
        assert_abs_diff_eq!(star.u, 0.92745, epsilon = 1e-4);
        // Densities on both sides of the contact.
        let dl = sample(&l, &r, &star, star.u - 1e-9);
        let dr = sample(&l, &r, &star, star.u + 1e-9);
        assert_abs_diff_eq!(dl.rho, 0.42632, epsilon = 1e-4);
        assert_abs_diff_eq!(dr.rho, 0.26557, epsilon = 1e-4);
    }

    #[test]
    fn sampling_far_field_returns_inputs() {
        let l = Pstate::new(1.0, 0.0, 1.0);
        let r = Pstate::new(0.125, 0.0, 0.1);
        let star = solve(&l, &r).unwrap();
        assert_eq!(sample(&l, &r, &star, -10.0), l);
        assert_eq!(sample(&l, &r, &star, 10.0), r);
    }

    #[test]
    fn equal_states_are_preserved() {
        let s = Pstate::new(0.7, 0.4, 1.3);
        let star = solve(&s, &s).unwrap();
        assert_abs_diff_eq!(star.p, 1.3, epsilon = 1e-10);
        assert_abs_diff_eq!(star.u, 0.4, epsilon = 1e-10);
        let mid = sample(&s, &s, &star, 0.4);
        assert_abs_diff_eq!(mid.rho, 0.7, epsilon = 1e-9);
    }

    #[test]
    fn lax_problem_solves() {
        let l = Pstate::new(0.445, 0.698, 3.528);
        let r = Pstate::new(0.5, 0.0, 0.571);
        let star = solve(&l, &r).unwrap();
        assert!(star.p > 0.0 && star.p < 3.528);
        // Right-going shock (star pressure above the right state's).
        assert!(star.p > 0.571);
    }
}
