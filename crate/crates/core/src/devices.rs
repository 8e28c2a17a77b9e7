//! Beam splitter and parametric amplifier.
//!
//! Both devices are defined as group exponentials of the fock-core
//! generators:
//!
//! ```text
//! U_BS  = exp(2iθ J_y),  cos²θ  = η
//! U_PDC = exp(2iφ K_y),  cosh²φ = g
//! ```
//!
//! The beam splitter is exactly block-diagonal in total photon number and is
//! evaluated sector by sector. The amplifier is evaluated through the normal
//! ordered factorisation
//!
//! ```text
//! U_PDC = exp(tanhφ K₊) (1/coshφ)^{2K_z} exp(−tanhφ K₋)
//! ```
//!
//! whose `K₋` series terminates on any Fock state, so a single matrix element
//! is a finite sum.

use std::collections::BTreeMap;

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::fock::{generator, sector_states, FockState2, Generator, Truncated, TruncationPolicy, TwoModeVector};
use crate::linalg::{expm, max_abs_diff};
use crate::C64;

/// Lossless beam splitter of transmittance `η`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BeamSplitter {
    eta: f64,
    theta: f64,
}

impl BeamSplitter {
    pub fn new(eta: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&eta) {
            return Err(Error::InvalidTransmittance(eta));
        }
        Ok(Self {
            eta,
            theta: eta.sqrt().acos(),
        })
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }

    /// Mixing angle `θ = arccos√η` in `[0, π/2]`.
    pub fn theta(&self) -> f64 {
        self.theta
    }

    /// `cosθ = √η`, taken from `η` directly to avoid a round trip through `θ`.
    pub fn cos(&self) -> f64 {
        self.eta.sqrt()
    }

    /// `sinθ = √(1 − η)`.
    pub fn sin(&self) -> f64 {
        (1.0 - self.eta).sqrt()
    }
}

/// Two-mode parametric amplifier of gain `g`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParametricAmplifier {
    g: f64,
    phi: f64,
}

impl ParametricAmplifier {
    pub fn new(g: f64) -> Result<Self> {
        if !g.is_finite() || g < 1.0 {
            return Err(Error::InvalidGain(g));
        }
        Ok(Self {
            g,
            phi: g.sqrt().acosh(),
        })
    }

    pub fn g(&self) -> f64 {
        self.g
    }

    /// Squeezing angle `φ = arccosh√g`.
    pub fn phi(&self) -> f64 {
        self.phi
    }

    /// `coshφ = √g`.
    pub fn cosh(&self) -> f64 {
        self.g.sqrt()
    }

    /// `sinhφ = √(g − 1)`.
    pub fn sinh(&self) -> f64 {
        (self.g - 1.0).sqrt()
    }

    /// `tanhφ = √((g − 1)/g)`.
    pub fn tanh(&self) -> f64 {
        ((self.g - 1.0) / self.g).sqrt()
    }
}

/// Either device, for code that treats both uniformly.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Device {
    Bs(BeamSplitter),
    Pdc(ParametricAmplifier),
}

impl Device {
    /// Anti-Hermitian exponent `2iθJ_y` or `2iφK_y` on the truncated basis.
    pub fn exponent(&self, policy: TruncationPolicy) -> crate::fock::SparseOperator {
        match self {
            Device::Bs(bs) => generator(Generator::Jy, policy).scaled(C64::new(0.0, 2.0 * bs.theta())),
            Device::Pdc(pa) => generator(Generator::Ky, policy).scaled(C64::new(0.0, 2.0 * pa.phi())),
        }
    }

    /// Quantity conserved by the device: total photon number for the beam
    /// splitter, imbalance for the amplifier.
    pub fn conserved(&self, s: FockState2) -> i64 {
        match self {
            Device::Bs(_) => s.total() as i64,
            Device::Pdc(_) => s.imbalance(),
        }
    }
}

/// `exp(2iθJ_y)` restricted to the sector of total photon number `total`,
/// indexed by the mode-`a` occupation `0..=total`.
pub fn bs_sector_unitary(bs: BeamSplitter, total: u32) -> DMatrix<C64> {
    let policy = TruncationPolicy::new(total);
    let states: Vec<_> = sector_states(total).collect();
    let block = Device::Bs(bs).exponent(policy).block(&states);
    expm(&block)
}

/// `⟨out|U_BS|in⟩`.
pub fn bs_amplitude(bs: BeamSplitter, input: FockState2, out: FockState2) -> C64 {
    if input.total() != out.total() {
        return C64::default();
    }
    bs_sector_unitary(bs, input.total())[(out.n as usize, input.n as usize)]
}

/// Vacuum expansion coefficients `c_l = tanhˡφ / √g` for `l = 0..=q`, so
/// that `U_PDC|0,0⟩ = Σ c_l |l,l⟩`.
pub fn pdc_vacuum_coefficients(pa: ParametricAmplifier, q: u32) -> Vec<f64> {
    let t = pa.tanh();
    let mut c = 1.0 / pa.cosh();
    (0..=q)
        .map(|_| {
            let out = c;
            c *= t;
            out
        })
        .collect()
}

/// Applies the amplifier through its disentangled form.
///
/// The `K₋` series terminates and the `K_z` factor is diagonal, so the only
/// loss comes from the `K₊` series running past `n_max`. Since the device is
/// unitary, the reported loss is `√(‖v‖² − ‖U v‖²)`.
pub fn pdc_apply(pa: ParametricAmplifier, v: &TwoModeVector) -> Truncated<TwoModeVector> {
    let policy = v.policy();
    let t = pa.tanh();
    let inv_cosh = 1.0 / pa.cosh();

    // exp(−t K₋) followed by (1/coshφ)^{n+m+1}.
    let mut middle: BTreeMap<FockState2, C64> = BTreeMap::new();
    for (s, amp) in v.iter() {
        let mut coeff = 1.0;
        for k in 0..=s.n.min(s.m) {
            let target = FockState2::new(s.n - k, s.m - k);
            let damp = inv_cosh.powi(target.total() as i32 + 1);
            *middle.entry(target).or_default() += amp * coeff * damp;
            // (ab)|n−k, m−k⟩ = √((n−k)(m−k)) |n−k−1, m−k−1⟩
            coeff *= -t / (k + 1) as f64 * (((s.n - k) * (s.m - k)) as f64).sqrt();
        }
    }

    // exp(t K₊), cut at n_max.
    let mut pairs = Vec::new();
    for (s, amp) in middle {
        let mut coeff = 1.0;
        let mut k = 0u32;
        while s.total() + 2 * k <= policy.n_max() {
            pairs.push((FockState2::new(s.n + k, s.m + k), amp * coeff));
            coeff *= t / (k + 1) as f64 * (((s.n + k + 1) * (s.m + k + 1)) as f64).sqrt();
            k += 1;
        }
    }
    let out = TwoModeVector::from_pairs(policy, pairs).expect("images stay inside the policy");

    let leak = (v.norm_sqr() - out.norm_sqr()).max(0.0).sqrt();
    Truncated {
        value: out,
        dropped_norm: leak,
    }
}

/// `⟨out|U_PDC|in⟩`, evaluated with a cutoff large enough that the element is
/// truncation-exact.
pub fn pdc_amplitude(pa: ParametricAmplifier, input: FockState2, out: FockState2) -> C64 {
    if input.imbalance() != out.imbalance() {
        return C64::default();
    }
    let policy = TruncationPolicy::new(input.total().max(out.total()) + 2);
    let v = TwoModeVector::basis_state(input, policy).expect("cutoff covers the input");
    pdc_apply(pa, &v).value.amplitude(out)
}

/// Closed-form amplitudes used as independent references.
pub mod analytic {
    use super::*;

    fn factorial(n: u32) -> f64 {
        (1..=n).map(f64::from).product()
    }

    fn binomial(n: u32, k: u32) -> f64 {
        (0..k).map(|i| f64::from(n - i) / f64::from(i + 1)).product()
    }

    /// `⟨out|U_BS|in⟩` from the binomial expansion of the transformed
    /// creation operators `a† → cosθ a† − sinθ b†`, `b† → cosθ b† + sinθ a†`.
    pub fn bs_binomial(bs: BeamSplitter, input: FockState2, out: FockState2) -> f64 {
        if input.total() != out.total() {
            return 0.0;
        }
        let (c, s) = (bs.cos(), bs.sin());
        let (n, m) = (input.n, input.m);
        let shift = out.n as i64 - n as i64;
        let mut sum = 0.0;
        for j in 0..=n {
            let k = j as i64 + shift;
            if k < 0 || k > m as i64 {
                continue;
            }
            let k = k as u32;
            let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
            sum += sign * binomial(n, j) * binomial(m, k) * c.powi((n - j + m - k) as i32) * s.powi((j + k) as i32);
        }
        sum * (factorial(out.n) * factorial(out.m) / (factorial(n) * factorial(m))).sqrt()
    }

    /// Diagonal elements tabulated for both devices.
    #[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
    pub enum TableRow {
        /// `|0,0⟩ → |0,0⟩`
        Vacuum,
        /// `|0,1⟩ → |0,1⟩`
        SinglePhoton,
        /// `|1,1⟩ → |1,1⟩`
        PhotonPair,
    }

    impl TableRow {
        pub const ALL: [TableRow; 3] = [TableRow::Vacuum, TableRow::SinglePhoton, TableRow::PhotonPair];

        pub fn state(self) -> FockState2 {
            match self {
                TableRow::Vacuum => FockState2::new(0, 0),
                TableRow::SinglePhoton => FockState2::new(0, 1),
                TableRow::PhotonPair => FockState2::new(1, 1),
            }
        }
    }

    /// `1`, `√η`, `2η − 1`.
    pub fn bs_table(bs: BeamSplitter, row: TableRow) -> f64 {
        let eta = bs.eta();
        match row {
            TableRow::Vacuum => 1.0,
            TableRow::SinglePhoton => eta.sqrt(),
            TableRow::PhotonPair => 2.0 * eta - 1.0,
        }
    }

    /// `1/√g`, `1/g`, `(2 − g)/g^{3/2}`.
    pub fn pdc_table(pa: ParametricAmplifier, row: TableRow) -> f64 {
        let g = pa.g();
        match row {
            TableRow::Vacuum => 1.0 / g.sqrt(),
            TableRow::SinglePhoton => 1.0 / g,
            TableRow::PhotonPair => (2.0 - g) / g.powf(1.5),
        }
    }

    /// Closed form for a PDC element when one is available: the tabulated
    /// diagonal elements and the vacuum expansion `⟨l,l|U|0,0⟩`.
    pub fn pdc_closed_form(pa: ParametricAmplifier, input: FockState2, out: FockState2) -> Option<f64> {
        if input.imbalance() != out.imbalance() {
            return Some(0.0);
        }
        if input == FockState2::VACUUM {
            return Some(pa.tanh().powi(out.n as i32) / pa.cosh());
        }
        TableRow::ALL
            .into_iter()
            .find(|r| r.state() == input && r.state() == out)
            .map(|r| pdc_table(pa, r))
    }
}

/// How [`exponential_oracle`] exponentiates the generator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum OracleMode {
    /// One exponential per conserved-quantity block.
    #[default]
    Blocked,
    /// A single exponential of the full truncated matrix.
    Dense,
}

/// Brute-force exponential of the device generator on a truncated basis.
#[derive(Debug, Clone)]
pub struct ExponentialOracle {
    policy: TruncationPolicy,
    blocks: Vec<(Vec<FockState2>, DMatrix<C64>)>,
    position: BTreeMap<FockState2, (usize, usize)>,
}

impl ExponentialOracle {
    pub fn policy(&self) -> TruncationPolicy {
        self.policy
    }

    /// `⟨out|exp(X)|in⟩` on the truncated space; zero outside it.
    pub fn element(&self, out: FockState2, input: FockState2) -> C64 {
        match (self.position.get(&out), self.position.get(&input)) {
            (Some(&(bo, ro)), Some(&(bi, ci))) if bo == bi => self.blocks[bo].1[(ro, ci)],
            _ => C64::default(),
        }
    }

    pub fn to_dense(&self) -> DMatrix<C64> {
        let dim = self.policy.dim();
        let mut dense = DMatrix::zeros(dim, dim);
        for (states, block) in &self.blocks {
            for (r, &o) in states.iter().enumerate() {
                for (c, &i) in states.iter().enumerate() {
                    let ro = self.policy.index_of(o).expect("block states respect the policy");
                    let ci = self.policy.index_of(i).expect("block states respect the policy");
                    dense[(ro, ci)] = block[(r, c)];
                }
            }
        }
        dense
    }
}

pub fn exponential_oracle(device: Device, policy: TruncationPolicy) -> ExponentialOracle {
    exponential_oracle_with(device, policy, OracleMode::Blocked)
}

pub fn exponential_oracle_with(device: Device, policy: TruncationPolicy, mode: OracleMode) -> ExponentialOracle {
    let exponent = device.exponent(policy);
    let groups: Vec<Vec<FockState2>> = match mode {
        OracleMode::Dense => vec![policy.basis().collect()],
        OracleMode::Blocked => {
            let mut by_key: BTreeMap<i64, Vec<FockState2>> = BTreeMap::new();
            for s in policy.basis() {
                by_key.entry(device.conserved(s)).or_default().push(s);
            }
            by_key.into_values().collect()
        }
    };
    let mut position = BTreeMap::new();
    let blocks = groups
        .into_iter()
        .enumerate()
        .map(|(b, states)| {
            for (i, &s) in states.iter().enumerate() {
                position.insert(s, (b, i));
            }
            let u = expm(&exponent.block(&states));
            (states, u)
        })
        .collect();
    ExponentialOracle {
        policy,
        blocks,
        position,
    }
}

/// Oracle element at cutoff `n_max`, accepted only if doubling the cutoff
/// moves it by at most `tol`. Returns the doubled-cutoff value.
pub fn converged_element(device: Device, out: FockState2, input: FockState2, n_max: u32, tol: f64) -> Result<C64> {
    let coarse = exponential_oracle(device, TruncationPolicy::new(n_max)).element(out, input);
    let doubled = 2 * n_max.max(1);
    let fine = exponential_oracle(device, TruncationPolicy::new(doubled)).element(out, input);
    let change = (fine - coarse).norm();
    if change > tol {
        return Err(Error::NonConvergence {
            out,
            input,
            n_max,
            doubled,
            change,
        });
    }
    Ok(fine)
}

/// Largest deviation between the blocked and dense oracles.
pub fn oracle_mode_discrepancy(device: Device, policy: TruncationPolicy) -> f64 {
    let blocked = exponential_oracle_with(device, policy, OracleMode::Blocked).to_dense();
    let dense = exponential_oracle_with(device, policy, OracleMode::Dense).to_dense();
    max_abs_diff(&blocked, &dense)
}

#[cfg(test)]
mod tests {
    use super::analytic::*;
    use super::*;
    use crate::linalg::unitarity_defect;
    use proptest::prelude::*;

    const GAINS: [f64; 7] = [1.0, 1.25, 1.5, 2.0, 3.0, 4.0, 8.0];

    fn pdc(g: f64) -> ParametricAmplifier {
        ParametricAmplifier::new(g).unwrap()
    }

    fn bs(eta: f64) -> BeamSplitter {
        BeamSplitter::new(eta).unwrap()
    }

    fn st(n: u32, m: u32) -> FockState2 {
        FockState2::new(n, m)
    }

    #[test]
    fn parameter_validation() {
        assert!(BeamSplitter::new(-0.1).is_err());
        assert!(BeamSplitter::new(1.5).is_err());
        assert!(BeamSplitter::new(f64::NAN).is_err());
        assert!(ParametricAmplifier::new(0.5).is_err());
        assert!(ParametricAmplifier::new(f64::INFINITY).is_err());
        for eta in [0.0, 0.3, 0.5, 1.0] {
            assert!((bs(eta).theta().cos().powi(2) - eta).abs() < 1e-15);
        }
        for g in GAINS {
            assert!((pdc(g).phi().cosh().powi(2) - g).abs() < 1e-12 * g);
        }
    }

    #[test]
    fn single_photon_sector_by_hand() {
        // 2iθJ_y on {|0,1>, |1,0>} is θ[[0, −1], [1, 0]].
        let b = bs(0.3);
        let u = bs_sector_unitary(b, 1);
        assert!((u[(0, 0)].re - b.cos()).abs() < 1e-15);
        assert!((u[(1, 0)].re - b.sin()).abs() < 1e-15);
        assert!((u[(0, 1)].re + b.sin()).abs() < 1e-15);
        assert!((bs_amplitude(b, st(0, 1), st(1, 0)).re - 0.7f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn vacuum_sector_is_trivial() {
        let u = bs_sector_unitary(bs(0.2), 0);
        assert_eq!(u.shape(), (1, 1));
        assert!((u[(0, 0)] - C64::new(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn hom_dip() {
        assert!(bs_amplitude(bs(0.5), st(1, 1), st(1, 1)).norm() < 1e-15);
        assert!(pdc_amplitude(pdc(2.0), st(1, 1), st(1, 1)).norm() < 1e-15);
    }

    #[test]
    fn table_rows() {
        for g in GAINS {
            let (p, b) = (pdc(g), bs(1.0 / g));
            for row in TableRow::ALL {
                let s = row.state();
                assert!(
                    (pdc_amplitude(p, s, s).re - pdc_table(p, row)).abs() < 1e-12,
                    "g={g} {row:?}"
                );
                assert!(
                    (bs_amplitude(b, s, s).re - bs_table(b, row)).abs() < 1e-12,
                    "g={g} {row:?}"
                );
            }
            let s = st(2, 0);
            assert!((pdc_amplitude(p, s, s).re - g.powf(-1.5)).abs() < 1e-12);
        }
    }

    #[test]
    fn vacuum_coefficients() {
        assert_eq!(pdc_vacuum_coefficients(pdc(1.0), 3), vec![1.0, 0.0, 0.0, 0.0]);
        let c = pdc_vacuum_coefficients(pdc(4.0), 2);
        assert!((c[0] - 0.5).abs() < 1e-15);
        assert!((c[1] - 3f64.sqrt() / 4.0).abs() < 1e-15);
        let policy = TruncationPolicy::new(12);
        let out = pdc_apply(
            pdc(4.0),
            &TwoModeVector::basis_state(FockState2::VACUUM, policy).unwrap(),
        );
        for (l, cl) in pdc_vacuum_coefficients(pdc(4.0), 6).into_iter().enumerate() {
            let l = l as u32;
            assert!((out.value.amplitude(st(l, l)).re - cl).abs() < 1e-15);
        }
        let tail: f64 = pdc_vacuum_coefficients(pdc(4.0), 200)[7..].iter().map(|c| c * c).sum();
        assert!((out.dropped_norm.powi(2) - tail).abs() < 1e-12);
    }

    #[test]
    fn identity_gain() {
        let policy = TruncationPolicy::new(5);
        let v = TwoModeVector::from_pairs(policy, [(st(2, 1), C64::new(0.6, 0.0)), (st(0, 3), C64::new(0.0, 0.8))])
            .unwrap();
        let out = pdc_apply(pdc(1.0), &v);
        assert_eq!(out.value, v);
        assert_eq!(out.dropped_norm, 0.0);
    }

    #[test]
    fn oracle_modes_agree() {
        for device in [Device::Bs(bs(0.35)), Device::Pdc(pdc(3.0))] {
            assert!(oracle_mode_discrepancy(device, TruncationPolicy::new(8)) < 1e-12);
        }
    }

    #[test]
    fn bs_oracle_matches_sector_blocks() {
        let b = bs(0.27);
        let policy = TruncationPolicy::new(7);
        let oracle = exponential_oracle_with(Device::Bs(b), policy, OracleMode::Dense);
        for total in 0..=7 {
            let u = bs_sector_unitary(b, total);
            for o in sector_states(total) {
                for i in sector_states(total) {
                    let diff = oracle.element(o, i) - u[(o.n as usize, i.n as usize)];
                    assert!(diff.norm() < 1e-10);
                }
            }
        }
        assert!(unitarity_defect(&oracle.to_dense()) < 1e-12);
    }

    #[test]
    fn pdc_oracle_identity_at_unit_gain() {
        let oracle = exponential_oracle(Device::Pdc(pdc(1.0)), TruncationPolicy::new(6));
        let dim = oracle.policy().dim();
        assert!(max_abs_diff(&oracle.to_dense(), &DMatrix::identity(dim, dim)) < 1e-15);
    }

    #[test]
    fn pdc_oracle_convergence() {
        let device = Device::Pdc(pdc(4.0));
        let c1 = converged_element(device, st(1, 1), st(0, 0), 48, 1e-8).unwrap();
        assert!((c1.re - 3f64.sqrt() / 4.0).abs() < 1e-9);
        let err = converged_element(device, st(1, 1), st(0, 0), 12, 1e-8).unwrap_err();
        assert!(matches!(err, Error::NonConvergence { .. }));
    }

    #[test]
    fn disentangled_matches_oracle_on_window() {
        for g in [1.5, 4.0, 8.0] {
            let oracle = exponential_oracle(Device::Pdc(pdc(g)), TruncationPolicy::new(128));
            let window = TruncationPolicy::new(6);
            for i in window.basis() {
                for o in window.basis() {
                    let diff = pdc_amplitude(pdc(g), i, o) - oracle.element(o, i);
                    assert!(diff.norm() < 1e-8, "g={g} {i}->{o}: {diff}");
                }
            }
        }
    }

    #[test]
    fn amplifier_is_mode_symmetric() {
        let p = pdc(2.7);
        for i in TruncationPolicy::new(5).basis() {
            for o in TruncationPolicy::new(5).basis() {
                let d = pdc_amplitude(p, i, o) - pdc_amplitude(p, i.swapped(), o.swapped());
                assert!(d.norm() < 1e-14);
            }
        }
    }

    #[test]
    fn pdc_column_norms_approach_one_monotonically() {
        let p = pdc(3.0);
        let input = st(2, 1);
        let mut partial = 0.0;
        for k in 0..140u32 {
            let next = partial + pdc_amplitude(p, input, st(1 + k, k)).norm_sqr();
            assert!(next >= partial);
            partial = next;
        }
        assert!((partial - 1.0).abs() < 1e-10);
    }

    #[test]
    fn selection_rules() {
        let p = pdc(2.5);
        let b = bs(0.4);
        let policy = TruncationPolicy::new(8);
        for i in policy.basis() {
            for o in policy.basis() {
                if i.total() != o.total() {
                    assert_eq!(bs_amplitude(b, i, o), C64::default());
                }
                if i.imbalance() != o.imbalance() {
                    assert_eq!(pdc_amplitude(p, i, o), C64::default());
                }
            }
        }
    }

    #[test]
    fn pair_creation_profile_broadens_with_gain() {
        let mut last_ratio = 0.0;
        for g in [1.25, 1.5, 2.0, 3.0, 4.0, 8.0] {
            let c = pdc_vacuum_coefficients(pdc(g), 10);
            assert!(c.windows(2).all(|w| w[1] * w[1] < w[0] * w[0]));
            let ratio = (c[1] / c[0]).powi(2);
            assert!(ratio > last_ratio);
            last_ratio = ratio;
        }
    }

    #[test]
    fn closed_form_lookup() {
        let p = pdc(4.0);
        assert_eq!(pdc_closed_form(p, st(1, 0), st(2, 0)), Some(0.0));
        assert!((pdc_closed_form(p, st(0, 0), st(1, 1)).unwrap() - 3f64.sqrt() / 4.0).abs() < 1e-15);
        assert_eq!(pdc_closed_form(p, st(2, 1), st(3, 2)), None);
    }

    proptest! {
        #[test]
        fn sector_unitaries_are_unitary_and_real(eta in 0.0f64..=1.0, total in 0u32..=10) {
            let u = bs_sector_unitary(bs(eta), total);
            prop_assert!(unitarity_defect(&u) < 1e-12);
            prop_assert!(u.iter().all(|z| z.im.abs() < 1e-14));
        }

        #[test]
        fn sector_matches_binomial(eta in 0.0f64..=1.0, total in 0u32..=8) {
            let b = bs(eta);
            for i in sector_states(total) {
                for o in sector_states(total) {
                    let d = (bs_amplitude(b, i, o).re - bs_binomial(b, i, o)).abs();
                    prop_assert!(d < 1e-11, "{} -> {}: {}", i, o, d);
                }
            }
        }

        #[test]
        fn pdc_apply_never_gains_norm(g in 1.0f64..10.0, n in 0u32..4, m in 0u32..4, n_max in 7u32..20) {
            let policy = TruncationPolicy::new(n_max);
            let v = TwoModeVector::basis_state(st(n, m), policy).unwrap();
            let out = pdc_apply(pdc(g), &v);
            prop_assert!(out.value.norm_sqr() <= 1.0 + 1e-12);
            prop_assert!((out.value.norm_sqr() + out.dropped_norm.powi(2) - 1.0).abs() < 1e-12);
        }
    }
}
