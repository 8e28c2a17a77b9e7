//! Photon-number and two-mode quadrature observables of the amplified
//! vacuum truncated at order `q`.
//!
//! With `x = (g − 1)/g = tanh²φ` the truncated vacuum is
//! `Σ_{l≤q} c_l |l,l⟩`, `c_l = tanhˡφ/√g`, and
//!
//! ```text
//! ⟨N⟩_q  = Σ_{l≤q} 2l c_l² = 2(g − 1)(1 − (q + 1)xᵠ + q x^{q+1})
//! ⟨N⟩_∞  = 2(g − 1)
//! ```
//!
//! The two-mode quadratures are `X(θ) = e^{−iθ}a + e^{iθ}b†` and
//! `Y(θ) = ie^{iθ}a† + ie^{−iθ}b`, so that
//! `X X† = 1 + N + e^{2iθ}a†b† + e^{−2iθ}ab`. On real amplitudes the phase
//! terms combine to `2cos(2θ)·⟨a†b†⟩`.
//!
//! Two state conventions are offered. The primary functions follow the
//! unnormalised sums (`⟨N⟩_q` above and `⟨a†b†⟩_q = Σ_{l≤q}(l + 1)c_{l+1}c_l`).
//! The `_renormalized` variants evaluate expectation values on the unit
//! vector `Σ_{l≤q} c_l|l,l⟩ / √(1 − x^{q+1})`, whose `⟨a†b†⟩` sum stops at
//! `l = q − 1`.

use std::fmt;
use std::str::FromStr;

use crate::devices::ParametricAmplifier;
use crate::error::{Error, Result};
use crate::fock::{Ladder, SparseOperator, TruncationPolicy};
use crate::C64;

/// Truncation order of the amplifier.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Order {
    Finite(u32),
    Infinite,
}

impl fmt::Display for Order {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Order::Finite(q) => write!(f, "{q}"),
            Order::Infinite => f.write_str("inf"),
        }
    }
}

impl FromStr for Order {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "inf" | "infinity" | "∞" => Ok(Order::Infinite),
            t => t.parse().map(Order::Finite).map_err(|_| Error::Parse {
                line: 0,
                message: format!("expected a non-negative order or \"inf\", got {s:?}"),
            }),
        }
    }
}

/// `x = (g − 1)/g`, computed directly so that dyadic gains stay exact.
fn ratio_x(g: f64) -> Result<f64> {
    ParametricAmplifier::new(g)?;
    Ok((g - 1.0) / g)
}

/// `⟨N⟩_q` in closed form.
pub fn mean_photons(g: f64, order: Order) -> Result<f64> {
    let x = ratio_x(g)?;
    Ok(match order {
        Order::Infinite => 2.0 * (g - 1.0),
        Order::Finite(q) => {
            let (qi, qf) = (q as i32, f64::from(q));
            2.0 * (g - 1.0) * (1.0 - (qf + 1.0) * x.powi(qi) + qf * x.powi(qi + 1))
        }
    })
}

/// `⟨N⟩_q / ⟨N⟩_∞ = 1 − (1 + q)xᵠ + q x^{q+1}`. At `g = 1` the ratio is
/// `0/0` and is defined as `1`.
pub fn mean_photons_ratio(g: f64, order: Order) -> Result<f64> {
    let x = ratio_x(g)?;
    if g == 1.0 {
        return Ok(1.0);
    }
    Ok(match order {
        Order::Infinite => 1.0,
        Order::Finite(q) => {
            let (qi, qf) = (q as i32, f64::from(q));
            1.0 - (1.0 + qf) * x.powi(qi) + qf * x.powi(qi + 1)
        }
    })
}

/// `⟨X(θ)X(θ)†⟩_q` from the unnormalised sums:
///
/// ```text
/// 1 + ⟨N⟩_q + 2cos(2θ)·[ (1/g)·√x·(1 − x^{q+1})/(1 − x) + (√x/2)·⟨N⟩_q ]
/// ```
pub fn quadrature_fluctuation(g: f64, q: u32, theta: f64) -> Result<f64> {
    let x = ratio_x(g)?;
    let n_q = mean_photons(g, Order::Finite(q))?;
    let t = x.sqrt();
    // 1 − x = 1/g, so the geometric term is t·(1 − x^{q+1}).
    let pair = t * (1.0 - x.powi(q as i32 + 1)) + t / 2.0 * n_q;
    Ok(1.0 + n_q + 2.0 * (2.0 * theta).cos() * pair)
}

/// `⟨N⟩` on the renormalised truncated vacuum, `⟨N⟩_q / (1 − x^{q+1})`.
pub fn mean_photons_renormalized(g: f64, q: u32) -> Result<f64> {
    let x = ratio_x(g)?;
    Ok(mean_photons(g, Order::Finite(q))? / (1.0 - x.powi(q as i32 + 1)))
}

/// `⟨X(θ)X(θ)†⟩` on the renormalised truncated vacuum.
pub fn quadrature_fluctuation_renormalized(g: f64, q: u32, theta: f64) -> Result<f64> {
    let x = ratio_x(g)?;
    let norm = 1.0 - x.powi(q as i32 + 1);
    let n_q = mean_photons(g, Order::Finite(q))?;
    // Σ_{l<q} (l+1)xˡ = (1 − (q+1)xᵠ + q x^{q+1})/(1 − x)², and (1 − x) = 1/g.
    let qf = f64::from(q);
    let weighted = (1.0 - (qf + 1.0) * x.powi(q as i32) + qf * x.powi(q as i32 + 1)) * g * g;
    let pair = weighted * x.sqrt() / g;
    Ok(1.0 + (n_q + 2.0 * (2.0 * theta).cos() * pair) / norm)
}

/// Two-mode quadratures `X(θ)` and `Y(θ) = iX(θ)†` on a truncated basis.
pub fn two_mode_quadratures(theta: f64, policy: TruncationPolicy) -> (SparseOperator, SparseOperator) {
    let phase = C64::from_polar(1.0, theta);
    let a = SparseOperator::ladder(Ladder::A, policy);
    let ad = SparseOperator::ladder(Ladder::ADag, policy);
    let b = SparseOperator::ladder(Ladder::B, policy);
    let bd = SparseOperator::ladder(Ladder::BDag, policy);
    let x = &a.scaled(phase.conj()) + &bd.scaled(phase);
    let y = &ad.scaled(C64::i() * phase) + &b.scaled(C64::i() * phase.conj());
    (x, y)
}

/// Single-mode quadrature `X_a(θ) = e^{−iθ}a + e^{iθ}a†`.
pub fn single_mode_quadrature(theta: f64, policy: TruncationPolicy) -> SparseOperator {
    let phase = C64::from_polar(1.0, theta);
    let a = SparseOperator::ladder(Ladder::A, policy);
    let ad = SparseOperator::ladder(Ladder::ADag, policy);
    &a.scaled(phase.conj()) + &ad.scaled(phase)
}
