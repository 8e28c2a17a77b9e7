//! Matrix-element duality between the amplifier and the beam splitter.
//!
//! For `g ≥ 1` and `η = 1/g`:
//!
//! ```text
//! ⟨l,s|U_PDC^g|n,m⟩ = (1/√g) ⟨l,m|U_BS^{1/g}|n,s⟩
//! ```
//!
//! The left side comes from the disentangled amplifier series and the right
//! side from sector exponentials of `J_y`; the two share no code beyond the
//! Fock-state type. Note the exchange of `s` and `m` between the sides, which
//! maps fixed-imbalance lines onto fixed-total lines.

use crate::devices::{bs_sector_unitary, pdc_amplitude, BeamSplitter, ParametricAmplifier};
use crate::error::{Error, Result};
use crate::fock::FockState2;
use crate::{C64, TRUNCATION_TOL};

/// `η = 1/g`. Gains below one are outside the unitary regime and rejected.
pub fn wick_map(g: f64) -> Result<f64> {
    if !g.is_finite() || g < 1.0 {
        return Err(Error::InvalidGain(g));
    }
    Ok(1.0 / g)
}

/// One evaluated instance of the duality relation.
#[derive(Debug, Clone, PartialEq)]
pub struct DualityInstance {
    pub g: f64,
    pub l: u32,
    pub s: u32,
    pub n: u32,
    pub m: u32,
    /// `⟨l,s|U_PDC^g|n,m⟩`
    pub lhs: C64,
    /// `(1/√g) ⟨l,m|U_BS^{1/g}|n,s⟩`
    pub rhs: C64,
    /// `|lhs − rhs|`
    pub residual: f64,
    /// Set when the sides disagree but `lhs ≈ −rhs`, i.e. equality holds only
    /// up to sign.
    pub sign_flip: bool,
}

impl DualityInstance {
    fn new(g: f64, [l, s, n, m]: [u32; 4], lhs: C64, rhs: C64) -> Self {
        let residual = (lhs - rhs).norm();
        let sign_flip = residual > TRUNCATION_TOL && (lhs + rhs).norm() <= TRUNCATION_TOL;
        Self {
            g,
            l,
            s,
            n,
            m,
            lhs,
            rhs,
            residual,
            sign_flip,
        }
    }

    pub fn indices(&self) -> [u32; 4] {
        [self.l, self.s, self.n, self.m]
    }
}

/// Evaluates both sides of the relation for one index tuple.
pub fn check_duality(g: f64, l: u32, s: u32, n: u32, m: u32) -> Result<DualityInstance> {
    let eta = wick_map(g)?;
    let pa = ParametricAmplifier::new(g)?;
    let bs = BeamSplitter::new(eta)?;
    let lhs = pdc_amplitude(pa, FockState2::new(n, m), FockState2::new(l, s));
    let rhs = if l + m == n + s {
        bs_sector_unitary(bs, n + s)[(l as usize, n as usize)] / g.sqrt()
    } else {
        C64::default()
    };
    Ok(DualityInstance::new(g, [l, s, n, m], lhs, rhs))
}

/// Summary of a sweep at one gain.
#[derive(Debug, Clone, PartialEq)]
pub struct GainReport {
    pub g: f64,
    pub checked: usize,
    pub worst: DualityInstance,
    pub sign_flips: Vec<DualityInstance>,
}

/// All instances with `l, s, n, m ≤ max_total` at one gain, in lexicographic
/// `(l, s, n, m)` order.
pub fn duality_instances(g: f64, max_total: u32) -> Result<Vec<DualityInstance>> {
    let eta = wick_map(g)?;
    let pa = ParametricAmplifier::new(g)?;
    let bs = BeamSplitter::new(eta)?;
    let sectors: Vec<_> = (0..=2 * max_total).map(|t| bs_sector_unitary(bs, t)).collect();
    let omega = 1.0 / g.sqrt();

    let mut out = Vec::with_capacity(((max_total + 1) as usize).pow(4));
    for l in 0..=max_total {
        for s in 0..=max_total {
            for n in 0..=max_total {
                for m in 0..=max_total {
                    let lhs = pdc_amplitude(pa, FockState2::new(n, m), FockState2::new(l, s));
                    let rhs = if l + m == n + s {
                        sectors[(n + s) as usize][(l as usize, n as usize)] * omega
                    } else {
                        C64::default()
                    };
                    out.push(DualityInstance::new(g, [l, s, n, m], lhs, rhs));
                }
            }
        }
    }
    Ok(out)
}

/// Exhaustive check over a gain grid; one report per gain, in grid order.
pub fn duality_sweep(g_grid: &[f64], max_total: u32) -> Result<Vec<GainReport>> {
    g_grid
        .iter()
        .map(|&g| {
            let instances = duality_instances(g, max_total)?;
            let sign_flips = instances.iter().filter(|i| i.sign_flip).cloned().collect();
            let worst = instances
                .iter()
                .max_by(|a, b| a.residual.total_cmp(&b.residual))
                .cloned()
                .expect("at least the vacuum instance");
            Ok(GainReport {
                g,
                checked: instances.len(),
                worst,
                sign_flips,
            })
        })
        .collect()
}
