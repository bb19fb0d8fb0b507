//! Two-ball free-fall micro-domain: closed-form trajectories and energies
//! for real balls, and the pseudo ball built by subtracting their energies.
//! Everything here is exact, which makes it the oracle for the real/pseudo
//! distinction that the machine entities mirror.

use crate::error::{Error, Result};

/// A ball in its own uniform gravitational field, released from rest.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Ball {
    /// Mass, kg.
    pub mass: f64,
    /// Gravitational acceleration felt by this ball, m/s².
    pub gravity: f64,
    /// Release height, m.
    pub initial_height: f64,
}

impl Ball {
    pub fn new(mass: f64, gravity: f64, initial_height: f64) -> Result<Self> {
        if !mass.is_finite() || mass <= 0.0 {
            return Err(Error::invariant("mass > 0", format!("mass = {mass}")));
        }
        if !gravity.is_finite() || gravity <= 0.0 {
            return Err(Error::invariant("gravity > 0", format!("gravity = {gravity}")));
        }
        if !initial_height.is_finite() || initial_height < 0.0 {
            return Err(Error::invariant(
                "initial height >= 0",
                format!("h0 = {initial_height}"),
            ));
        }
        Ok(Self {
            mass,
            gravity,
            initial_height,
        })
    }

    /// Ground impact ends the validity window: `sqrt(2·h0/g)`.
    pub fn impact_time(&self) -> f64 {
        (2.0 * self.initial_height / self.gravity).sqrt()
    }
}

/// State of a falling ball; velocity is positive downward.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BallState {
    pub t: f64,
    pub height: f64,
    pub velocity: f64,
}

/// Kinetic, potential and total energy of one entity at one instant, J.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergyTriple {
    pub ke: f64,
    pub pe: f64,
    pub total: f64,
}

/// Relative motion against the stationary ground reference: with the ground
/// fixed it reduces to the ball's own state, plus the net force on the ball.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RelativeBallMotion {
    pub height: f64,
    pub velocity: f64,
    /// Net downward force, N.
    pub force: f64,
}

/// Closed-form state at time `t`: `v = g·t`, `h = h0 - g·t²/2`. States past
/// the impact time are rejected.
pub fn ball_state(ball: &Ball, t: f64) -> Result<BallState> {
    let t_impact = ball.impact_time();
    if !(0.0..=t_impact).contains(&t) {
        return Err(Error::OutsideWindow { t, t_impact });
    }
    Ok(BallState {
        t,
        height: ball.initial_height - 0.5 * ball.gravity * t * t,
        velocity: ball.gravity * t,
    })
}

/// Newtonian energy of a real ball: `KE = m·v²/2`, `PE = m·g·h`.
pub fn ball_energy(ball: &Ball, state: &BallState) -> EnergyTriple {
    let ke = 0.5 * ball.mass * state.velocity * state.velocity;
    let pe = ball.mass * ball.gravity * state.height;
    EnergyTriple {
        ke,
        pe,
        total: ke + pe,
    }
}

/// The ball's motion expressed against the stationary ground.
pub fn relative_motion(ball: &Ball, state: &BallState) -> RelativeBallMotion {
    RelativeBallMotion {
        height: state.height,
        velocity: state.velocity,
        force: ball.mass * ball.gravity,
    }
}

/// Energy of the pseudo ball: componentwise subtraction of two real-ball
/// energies. The result has no mass, trajectory or force behind it.
pub fn pseudo_ball(e1: &EnergyTriple, e2: &EnergyTriple) -> EnergyTriple {
    EnergyTriple {
        ke: e1.ke - e2.ke,
        pe: e1.pe - e2.pe,
        total: e1.total - e2.total,
    }
}

/// The bundled demonstration pair: 1.0 kg at 9.8 m/s² and 0.5 kg at
/// 6.0 m/s², both released from 8.0 m.
pub fn demo_pair() -> (Ball, Ball) {
    (
        Ball {
            mass: 1.0,
            gravity: 9.8,
            initial_height: 8.0,
        },
        Ball {
            mass: 0.5,
            gravity: 6.0,
            initial_height: 8.0,
        },
    )
}
