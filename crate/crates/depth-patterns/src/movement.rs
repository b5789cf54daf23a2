//! The biased (anti)persistent random-walk family.
//!
//! A walk takes exponential step lengths and turning angles drawn from a
//! von Mises distribution whose location blends the previous heading
//! (weight `r * (1 - beta)`, with `r = -1` flipping it) with the bearing
//! toward a fixed center (weight `beta`). Concentration `kappa = 0`
//! degenerates to uniform angles, the plain random walk.

use crate::geom::Point2;
use crate::patterns::Trajectory;
use crate::{Error, Result};
use rand::Rng;
use std::f64::consts::{PI, TAU};

/// Initial heading of a walk.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum InitialHeading {
    Fixed(f64),
    /// Drawn uniformly on `[0, 2*pi)` when the walk starts.
    UniformRandom,
}

/// Parameters of one walk.
#[derive(Debug, Clone, PartialEq)]
pub struct WalkParams {
    /// Step-length rate; mean step is `1 / lambda`.
    pub lambda: f64,
    /// Persistence sign: `+1` keeps the previous heading, `-1` reverses it.
    pub r: i8,
    /// Bias weight toward the center, in `[0, 1]`.
    pub beta: f64,
    /// Von Mises concentration of the turning angle.
    pub kappa: f64,
    /// Bias target.
    pub center: Point2,
    pub n_steps: usize,
    /// Initial position.
    pub x0: Point2,
    pub a0: InitialHeading,
}

impl WalkParams {
    /// Walk starting at the center `(0, 0)` with a uniform initial heading.
    pub fn new(lambda: f64, r: i8, beta: f64, kappa: f64, n_steps: usize) -> Self {
        WalkParams {
            lambda,
            r,
            beta,
            kappa,
            center: Point2::new(0.0, 0.0),
            n_steps,
            x0: Point2::new(0.0, 0.0),
            a0: InitialHeading::UniformRandom,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.lambda > 0.0 && self.lambda.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "lambda",
                value: self.lambda,
                requirement: "> 0",
            });
        }
        if self.r != 1 && self.r != -1 {
            return Err(Error::InvalidParameter {
                name: "r",
                value: self.r as f64,
                requirement: "+1 or -1",
            });
        }
        if !(0.0..=1.0).contains(&self.beta) {
            return Err(Error::InvalidParameter {
                name: "beta",
                value: self.beta,
                requirement: "in [0, 1]",
            });
        }
        if !(self.kappa >= 0.0 && self.kappa.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "kappa",
                value: self.kappa,
                requirement: ">= 0 and finite",
            });
        }
        if self.n_steps == 0 {
            return Err(Error::InvalidParameter {
                name: "n_steps",
                value: 0.0,
                requirement: ">= 1",
            });
        }
        self.center.ensure_finite("walk center")?;
        self.x0.ensure_finite("walk start")?;
        if let InitialHeading::Fixed(a) = self.a0 {
            if !a.is_finite() {
                return Err(Error::NonFinite {
                    context: "initial heading",
                });
            }
        }
        Ok(())
    }
}

/// Draws from the von Mises distribution with location `mu` and
/// concentration `kappa`, in `[0, 2*pi)`.
///
/// `kappa = 0` is the uniform distribution; otherwise the Best-Fisher
/// rejection scheme with a wrapped-Cauchy envelope.
pub fn sample_von_mises<R: Rng + ?Sized>(mu: f64, kappa: f64, rng: &mut R) -> Result<f64> {
    if !(kappa >= 0.0 && kappa.is_finite()) {
        return Err(Error::InvalidParameter {
            name: "kappa",
            value: kappa,
            requirement: ">= 0 and finite",
        });
    }
    if !mu.is_finite() {
        return Err(Error::NonFinite {
            context: "von Mises location",
        });
    }
    if kappa == 0.0 {
        return Ok(rng.gen::<f64>() * TAU);
    }
    let tau = 1.0 + (1.0 + 4.0 * kappa * kappa).sqrt();
    let rho = (tau - (2.0 * tau).sqrt()) / (2.0 * kappa);
    let r = (1.0 + rho * rho) / (2.0 * rho);
    loop {
        let u1: f64 = rng.gen();
        let z = (PI * u1).cos();
        let f = ((1.0 + r * z) / (r + z)).clamp(-1.0, 1.0);
        let c = kappa * (r - f);
        let u2: f64 = rng.gen();
        if c * (2.0 - c) - u2 > 0.0 || (c / u2).ln() + 1.0 - c >= 0.0 {
            let u3: f64 = rng.gen();
            let theta = if u3 < 0.5 { mu - f.acos() } else { mu + f.acos() };
            return Ok(theta.rem_euclid(TAU));
        }
    }
}

/// Exponential step length `-ln(u) / lambda`.
pub fn sample_step_length<R: Rng + ?Sized>(lambda: f64, rng: &mut R) -> Result<f64> {
    if !(lambda > 0.0 && lambda.is_finite()) {
        return Err(Error::InvalidParameter {
            name: "lambda",
            value: lambda,
            requirement: "> 0",
        });
    }
    let u = rng.gen::<f64>().max(f64::MIN_POSITIVE);
    Ok(-u.ln() / lambda)
}

/// Bearing from `x` toward `center`: the angle of the ray from `x` to
/// `center`, in `(-pi, pi]`. A coincident pair has no bearing; the angle is
/// reported as 0 with the degeneracy flag set.
pub fn bearing(x: Point2, center: Point2) -> (f64, bool) {
    bearing_of_offset(center - x)
}

/// Bearing along the offset vector `center - x`.
fn bearing_of_offset(to_center: Point2) -> (f64, bool) {
    if to_center.x1 == 0.0 && to_center.x2 == 0.0 {
        (0.0, true)
    } else {
        (to_center.x2.atan2(to_center.x1), false)
    }
}

/// Von Mises location for the next turning angle: the direction of
/// `r * (1 - beta) * unit(a_prev) + beta * unit(b)`. Exact antipodal
/// cancellation has no direction; the bearing is returned with the
/// degeneracy flag set.
pub fn turning_location(a_prev: f64, b: f64, r: i8, beta: f64) -> (f64, bool) {
    let w = r as f64 * (1.0 - beta);
    let d1 = w * a_prev.cos() + beta * b.cos();
    let d2 = w * a_prev.sin() + beta * b.sin();
    if d1 == 0.0 && d2 == 0.0 {
        (b, true)
    } else {
        (d2.atan2(d1), false)
    }
}

/// Simulates one walk, returning the `n_steps + 1` visited positions.
///
/// Iterates `b(t) = bearing(x(t), c)`, `mu(t) = turning_location(a(t-1),
/// b(t), r, beta)`, `a(t) ~ VonMises(mu(t), kappa)`, `L(t) ~ Exp(lambda)`,
/// `x(t+1) = x(t) + L(t) * (cos a(t), sin a(t))`. Positions are tracked
/// relative to the center, so translating `x0` and `center` together
/// translates the whole path.
pub fn simulate_walk<R: Rng + ?Sized>(params: &WalkParams, rng: &mut R) -> Result<Trajectory> {
    params.validate()?;
    let mut positions = Vec::with_capacity(params.n_steps + 1);
    positions.push(params.x0);
    let mut rel = params.x0 - params.center;
    let mut a_prev = match params.a0 {
        InitialHeading::Fixed(a) => a,
        InitialHeading::UniformRandom => rng.gen::<f64>() * TAU,
    };
    for _ in 0..params.n_steps {
        let (b, _) = bearing_of_offset(Point2::new(-rel.x1, -rel.x2));
        let (mu, _) = turning_location(a_prev, b, params.r, params.beta);
        let a = sample_von_mises(mu, params.kappa, rng)?;
        let step = sample_step_length(params.lambda, rng)?;
        rel = rel + Point2::new(step * a.cos(), step * a.sin());
        positions.push(params.center + rel);
        a_prev = a;
    }
    Trajectory::new("walk", positions)
}
