//! Inter-agent benefit abstraction and the formation-level objectives built on it.
//!
//! Agents are indexed `0..=n`; agent 0 is the leader, pinned at the origin.
//! Follower `i` flies at lateral offset `y_i = -i * beta` and its longitudinal
//! position `x_i` is the only decision variable. Every agent collects benefit
//! from the agents at most [`NEIGHBOR_HOPS`] positions away in the chain.

use crate::error::{invalid, Error, Result};
use crate::wake::WakeParams;

/// Interaction radius of the chain, in hops.
pub const NEIGHBOR_HOPS: usize = 2;

/// Benefit `f(x, y)` that one agent receives from another at relative
/// position `(x, y)` (receiver minus emitter).
///
/// Implementations must be laterally symmetric, `f(x, y) == f(x, -y)`.
pub trait BenefitFunction: Send + Sync {
    fn value(&self, x: f64, y: f64) -> f64;

    /// `∂f/∂x`. Returns [`Error::DerivativeDomain`] where the derivative
    /// does not exist.
    fn deriv_x(&self, x: f64, y: f64) -> Result<f64>;

    /// Whether [`BenefitFunction::deriv_x`] is defined at `(x, y)`.
    fn deriv_defined(&self, _x: f64, _y: f64) -> bool {
        true
    }

    /// The wake parameters when this benefit is the fixed-wing wake model.
    /// Lets checkers switch to exact closed-form arguments.
    fn wake_params(&self) -> Option<&WakeParams> {
        None
    }
}

impl<B: BenefitFunction + ?Sized> BenefitFunction for &B {
    fn value(&self, x: f64, y: f64) -> f64 {
        (**self).value(x, y)
    }
    fn deriv_x(&self, x: f64, y: f64) -> Result<f64> {
        (**self).deriv_x(x, y)
    }
    fn deriv_defined(&self, x: f64, y: f64) -> bool {
        (**self).deriv_defined(x, y)
    }
    fn wake_params(&self) -> Option<&WakeParams> {
        (**self).wake_params()
    }
}

impl<B: BenefitFunction + ?Sized> BenefitFunction for Box<B> {
    fn value(&self, x: f64, y: f64) -> f64 {
        (**self).value(x, y)
    }
    fn deriv_x(&self, x: f64, y: f64) -> Result<f64> {
        (**self).deriv_x(x, y)
    }
    fn deriv_defined(&self, x: f64, y: f64) -> bool {
        (**self).deriv_defined(x, y)
    }
    fn wake_params(&self) -> Option<&WakeParams> {
        (**self).wake_params()
    }
}

/// Leader at the origin plus `n` followers in a left echelon.
#[derive(Debug, Clone, PartialEq)]
pub struct FormationState {
    followers: Vec<f64>,
    beta: f64,
}

impl FormationState {
    /// `followers[k]` is the longitudinal position of follower `k + 1`.
    pub fn new(followers: Vec<f64>, beta: f64) -> Result<Self> {
        if followers.is_empty() {
            return Err(invalid("followers", "need at least one follower"));
        }
        if !(beta > 0.0) || !beta.is_finite() {
            return Err(invalid("beta", format!("lateral spacing must be positive, got {beta}")));
        }
        if let Some(x) = followers.iter().find(|x| !x.is_finite()) {
            return Err(invalid("followers", format!("non-finite position {x}")));
        }
        Ok(FormationState { followers, beta })
    }

    /// Build a state from neighbor gaps `x_i - x_{i-1}`, i = 1..=n.
    pub fn from_gaps(gaps: &[f64], beta: f64) -> Result<Self> {
        let followers = gaps
            .iter()
            .scan(0.0, |x, g| {
                *x += g;
                Some(*x)
            })
            .collect();
        FormationState::new(followers, beta)
    }

    pub fn followers(&self) -> usize {
        self.followers.len()
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn positions(&self) -> &[f64] {
        &self.followers
    }

    /// Longitudinal position of agent `i` (0 = leader).
    pub fn x(&self, i: usize) -> f64 {
        if i == 0 {
            0.0
        } else {
            self.followers[i - 1]
        }
    }

    /// Lateral position of agent `i`.
    pub fn y(&self, i: usize) -> f64 {
        -(i as f64) * self.beta
    }

    /// `x_i - x_{i-1}` for each follower.
    pub fn gaps(&self) -> Vec<f64> {
        (1..=self.followers()).map(|i| self.x(i) - self.x(i - 1)).collect()
    }

    pub fn with_position(&self, i: usize, x: f64) -> Self {
        let mut s = self.clone();
        s.followers[i - 1] = x;
        s
    }

    fn relative(&self, i: usize, j: usize) -> (f64, f64) {
        (self.x(i) - self.x(j), self.y(i) - self.y(j))
    }

    fn check_agent(&self, i: usize) -> Result<()> {
        if i > self.followers() {
            Err(Error::AgentIndex {
                index: i,
                followers: self.followers(),
            })
        } else {
            Ok(())
        }
    }
}

/// Indices of the agents within [`NEIGHBOR_HOPS`] of agent `i` in a chain
/// of `n` followers plus the leader.
pub fn neighbors(i: usize, n: usize) -> impl Iterator<Item = usize> {
    let lo = i.saturating_sub(NEIGHBOR_HOPS);
    let hi = (i + NEIGHBOR_HOPS).min(n);
    (lo..=hi).filter(move |&j| j != i)
}

/// Benefit collected by agent `i` from its neighbors.
pub fn per_agent_benefit<B: BenefitFunction + ?Sized>(state: &FormationState, f: &B, i: usize) -> Result<f64> {
    state.check_agent(i)?;
    Ok(neighbors(i, state.followers())
        .map(|j| {
            let (x, y) = state.relative(i, j);
            f.value(x, y)
        })
        .sum())
}

/// Group benefit `J`: sum of every agent's benefit, leader included.
pub fn total_benefit<B: BenefitFunction + ?Sized>(state: &FormationState, f: &B) -> f64 {
    (0..=state.followers())
        .map(|i| per_agent_benefit(state, f, i).expect("index in range"))
        .sum()
}

/// `∂f^{(i)}/∂x_i` for each follower; the zero vector is the first-order
/// condition of a Nash equilibrium in longitudinal positions.
pub fn ne_stationarity_residual<B: BenefitFunction + ?Sized>(state: &FormationState, f: &B) -> Result<Vec<f64>> {
    (1..=state.followers())
        .map(|i| {
            neighbors(i, state.followers())
                .map(|j| {
                    let (x, y) = state.relative(i, j);
                    f.deriv_x(x, y)
                })
                .sum()
        })
        .collect()
}

/// Gradient of the group benefit `J` with respect to each follower position.
///
/// Agent `i` moves both the pair term it receives (`f(p_ij)`) and the one
/// it emits (`f(p_ji)`), the latter with opposite sign in `x`.
pub fn ce_gradient<B: BenefitFunction + ?Sized>(state: &FormationState, f: &B) -> Result<Vec<f64>> {
    (1..=state.followers())
        .map(|i| {
            neighbors(i, state.followers())
                .map(|j| {
                    let (xij, yij) = state.relative(i, j);
                    Ok(f.deriv_x(xij, yij)? - f.deriv_x(-xij, -yij)?)
                })
                .sum()
        })
        .collect()
}

/// `f ≡ c`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConstantBenefit(pub f64);

impl BenefitFunction for ConstantBenefit {
    fn value(&self, _x: f64, _y: f64) -> f64 {
        self.0
    }
    fn deriv_x(&self, _x: f64, _y: f64) -> Result<f64> {
        Ok(0.0)
    }
}

/// Longitudinal factor `g(x)` of a [`SeparableBenefit`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LongitudinalProfile {
    /// `|x|`, derivative undefined at 0.
    Abs,
    /// `x²`.
    Square,
    /// `1/x²`, undefined at 0.
    InverseSquare,
    /// `exp(-(x - center)² / (2 width²))`; even only for `center == 0`.
    Gaussian { center: f64, width: f64 },
}

impl LongitudinalProfile {
    pub fn value(&self, x: f64) -> f64 {
        match *self {
            LongitudinalProfile::Abs => x.abs(),
            LongitudinalProfile::Square => x * x,
            LongitudinalProfile::InverseSquare => 1.0 / (x * x),
            LongitudinalProfile::Gaussian { center, width } => (-(x - center).powi(2) / (2.0 * width * width)).exp(),
        }
    }

    pub fn deriv(&self, x: f64) -> Option<f64> {
        match *self {
            LongitudinalProfile::Abs => (x != 0.0).then(|| x.signum()),
            LongitudinalProfile::Square => Some(2.0 * x),
            LongitudinalProfile::InverseSquare => (x != 0.0).then(|| -2.0 / (x * x * x)),
            LongitudinalProfile::Gaussian { center, width } => Some(-(x - center) / (width * width) * self.value(x)),
        }
    }
}

/// Lateral factor `h(y)`: positive and even.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LateralProfile {
    Constant(f64),
    /// `exp(-y² / width²)`.
    Bell {
        width: f64,
    },
}

impl LateralProfile {
    pub fn value(&self, y: f64) -> f64 {
        match *self {
            LateralProfile::Constant(c) => c,
            LateralProfile::Bell { width } => (-(y * y) / (width * width)).exp(),
        }
    }
}

/// `f(x, y) = g(x) h(y)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeparableBenefit {
    pub g: LongitudinalProfile,
    pub h: LateralProfile,
}

impl SeparableBenefit {
    pub fn new(g: LongitudinalProfile, h: LateralProfile) -> Self {
        SeparableBenefit { g, h }
    }

    /// `x²` with unit lateral factor.
    pub fn quadratic() -> Self {
        SeparableBenefit::new(LongitudinalProfile::Square, LateralProfile::Constant(1.0))
    }
}

impl BenefitFunction for SeparableBenefit {
    fn value(&self, x: f64, y: f64) -> f64 {
        self.g.value(x) * self.h.value(y)
    }

    fn deriv_x(&self, x: f64, y: f64) -> Result<f64> {
        self.g
            .deriv(x)
            .map(|d| d * self.h.value(y))
            .ok_or(Error::DerivativeDomain { x, y })
    }

    fn deriv_defined(&self, x: f64, _y: f64) -> bool {
        self.g.deriv(x).is_some()
    }
}
