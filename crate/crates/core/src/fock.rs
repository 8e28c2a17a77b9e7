//! Truncated two-mode Fock space.
//!
//! States `|n, m⟩` carry `n` photons in mode `a` and `m` in mode `b`. The
//! space is truncated by total photon number `n + m ≤ n_max`; the basis is
//! ordered by ascending total, then ascending `n`, so a total-number sector is
//! a contiguous index range.
//!
//! Operators are stored sparsely and built from exact (untruncated) basis
//! actions, with only the final image clipped to the policy. Products of
//! truncated operators are therefore exact only on an interior set of rows and
//! columns; [`Algebra::interior`] gives that cutoff for the two generator
//! families.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Sub};
use std::str::FromStr;

use nalgebra::{DMatrix, DVector, Matrix3, Vector3};

use crate::error::{Error, Result};
use crate::C64;

const I: C64 = C64::new(0.0, 1.0);

/// Occupation numbers of the two modes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FockState2 {
    pub n: u32,
    pub m: u32,
}

impl FockState2 {
    pub const VACUUM: FockState2 = FockState2 { n: 0, m: 0 };

    pub const fn new(n: u32, m: u32) -> Self {
        Self { n, m }
    }

    pub const fn total(self) -> u32 {
        self.n + self.m
    }

    pub const fn imbalance(self) -> i64 {
        self.n as i64 - self.m as i64
    }

    /// Exchanges the two modes.
    pub const fn swapped(self) -> Self {
        Self { n: self.m, m: self.n }
    }
}

impl Ord for FockState2 {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.total(), self.n).cmp(&(other.total(), other.n))
    }
}

impl PartialOrd for FockState2 {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for FockState2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "|{},{}>", self.n, self.m)
    }
}

impl FromStr for FockState2 {
    type Err = Error;

    /// Accepts `n,m`, `(n,m)` or `|n,m>`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse {
            line: 0,
            message: format!("expected an occupation pair like 1,0; got {s:?}"),
        };
        let trimmed = s.trim().trim_start_matches(['(', '|']).trim_end_matches([')', '>']);
        let (n, m) = trimmed.split_once(',').ok_or_else(bad)?;
        let n = n.trim().parse().map_err(|_| bad())?;
        let m = m.trim().parse().map_err(|_| bad())?;
        Ok(Self { n, m })
    }
}

/// Keeps all states with `n + m ≤ n_max`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct TruncationPolicy {
    n_max: u32,
}

impl TruncationPolicy {
    pub const fn new(n_max: u32) -> Self {
        Self { n_max }
    }

    pub const fn n_max(self) -> u32 {
        self.n_max
    }

    /// Number of retained basis states, `(n_max + 1)(n_max + 2) / 2`.
    pub const fn dim(self) -> usize {
        let n = self.n_max as usize;
        (n + 1) * (n + 2) / 2
    }

    pub const fn contains(self, state: FockState2) -> bool {
        state.total() <= self.n_max
    }

    pub fn index_of(self, state: FockState2) -> Option<usize> {
        self.contains(state)
            .then(|| sector_offset(state.total()) + state.n as usize)
    }

    pub fn state_at(self, index: usize) -> Option<FockState2> {
        if index >= self.dim() {
            return None;
        }
        let mut total = 0u32;
        while sector_offset(total + 1) <= index {
            total += 1;
        }
        let n = (index - sector_offset(total)) as u32;
        Some(FockState2::new(n, total - n))
    }

    /// All retained states in basis order.
    pub fn basis(self) -> impl Iterator<Item = FockState2> {
        (0..=self.n_max).flat_map(sector_states)
    }

    /// Index range of the fixed-total sector `total`.
    pub fn sector_range(self, total: u32) -> std::ops::Range<usize> {
        let start = sector_offset(total);
        start..start + total as usize + 1
    }
}

const fn sector_offset(total: u32) -> usize {
    let t = total as usize;
    t * (t + 1) / 2
}

/// States of fixed total photon number, ascending in `n`.
pub fn sector_states(total: u32) -> impl Iterator<Item = FockState2> {
    (0..=total).map(move |n| FockState2::new(n, total - n))
}

/// A value together with the norm discarded by truncation while producing it.
#[derive(Debug, Clone, PartialEq)]
pub struct Truncated<T> {
    pub value: T,
    pub dropped_norm: f64,
}

/// Sparse amplitude map over the truncated basis.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoModeVector {
    amplitudes: BTreeMap<FockState2, C64>,
    policy: TruncationPolicy,
}

impl TwoModeVector {
    pub fn zero(policy: TruncationPolicy) -> Self {
        Self {
            amplitudes: BTreeMap::new(),
            policy,
        }
    }

    pub fn basis_state(state: FockState2, policy: TruncationPolicy) -> Result<Self> {
        Self::from_pairs(policy, [(state, C64::new(1.0, 0.0))])
    }

    /// Builds a vector from `(state, amplitude)` pairs; repeated states add up.
    pub fn from_pairs(policy: TruncationPolicy, pairs: impl IntoIterator<Item = (FockState2, C64)>) -> Result<Self> {
        let mut v = Self::zero(policy);
        for (state, amp) in pairs {
            if !policy.contains(state) {
                return Err(Error::OutsideTruncation {
                    state,
                    n_max: policy.n_max(),
                });
            }
            v.accumulate(state, amp);
        }
        v.amplitudes.retain(|_, a| *a != C64::new(0.0, 0.0));
        Ok(v)
    }

    pub fn from_dense(policy: TruncationPolicy, dense: &DVector<C64>) -> Self {
        assert_eq!(dense.len(), policy.dim(), "dense vector has the wrong length");
        let mut v = Self::zero(policy);
        for (i, &amp) in dense.iter().enumerate() {
            if amp != C64::new(0.0, 0.0) {
                v.accumulate(policy.state_at(i).expect("index within policy"), amp);
            }
        }
        v
    }

    pub fn policy(&self) -> TruncationPolicy {
        self.policy
    }

    pub fn amplitude(&self, state: FockState2) -> C64 {
        self.amplitudes.get(&state).copied().unwrap_or_default()
    }

    /// Non-zero entries in basis order.
    pub fn iter(&self) -> impl Iterator<Item = (FockState2, C64)> + '_ {
        self.amplitudes.iter().map(|(&s, &a)| (s, a))
    }

    pub fn support_len(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.values().map(|a| a.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &Self) -> C64 {
        self.amplitudes
            .iter()
            .map(|(s, a)| a.conj() * other.amplitude(*s))
            .sum()
    }

    pub fn scaled(&self, factor: C64) -> Self {
        Self {
            amplitudes: self.amplitudes.iter().map(|(&s, &a)| (s, a * factor)).collect(),
            policy: self.policy,
        }
    }

    /// Returns the unit vector, or `None` for the zero vector.
    pub fn normalized(&self) -> Option<Self> {
        let norm = self.norm();
        (norm > 0.0).then(|| self.scaled(C64::new(1.0 / norm, 0.0)))
    }

    /// Sum of two vectors; the result uses the larger of the two policies.
    pub fn plus(&self, other: &Self) -> Self {
        let policy = if self.policy.n_max() >= other.policy.n_max() {
            self.policy
        } else {
            other.policy
        };
        let mut out = Self {
            amplitudes: self.amplitudes.clone(),
            policy,
        };
        for (s, a) in other.iter() {
            out.accumulate(s, a);
        }
        out.amplitudes.retain(|_, a| *a != C64::new(0.0, 0.0));
        out
    }

    /// Keeps only the entries satisfying `keep`.
    pub fn filtered(&self, keep: impl Fn(FockState2) -> bool) -> Self {
        Self {
            amplitudes: self
                .amplitudes
                .iter()
                .filter(|(s, _)| keep(**s))
                .map(|(&s, &a)| (s, a))
                .collect(),
            policy: self.policy,
        }
    }

    /// Moves the vector to another policy, reporting what falls outside.
    pub fn retruncate(&self, policy: TruncationPolicy) -> Truncated<Self> {
        let mut dropped = 0.0;
        let mut out = Self::zero(policy);
        for (s, a) in self.iter() {
            if policy.contains(s) {
                out.accumulate(s, a);
            } else {
                dropped += a.norm_sqr();
            }
        }
        Truncated {
            value: out,
            dropped_norm: dropped.sqrt(),
        }
    }

    pub fn to_dense(&self) -> DVector<C64> {
        let mut dense = DVector::zeros(self.policy.dim());
        for (s, a) in self.iter() {
            dense[self.policy.index_of(s).expect("entries respect the policy")] = a;
        }
        dense
    }

    fn accumulate(&mut self, state: FockState2, amp: C64) {
        *self.amplitudes.entry(state).or_default() += amp;
    }
}

/// Single-mode ladder operators.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Ladder {
    A,
    B,
    ADag,
    BDag,
}

/// Exact action of a ladder operator on a basis state, or `None` when it
/// annihilates the state.
pub fn ladder_action(which: Ladder, s: FockState2) -> Option<(FockState2, f64)> {
    match which {
        Ladder::A => (s.n > 0).then(|| (FockState2::new(s.n - 1, s.m), (s.n as f64).sqrt())),
        Ladder::B => (s.m > 0).then(|| (FockState2::new(s.n, s.m - 1), (s.m as f64).sqrt())),
        Ladder::ADag => Some((FockState2::new(s.n + 1, s.m), ((s.n + 1) as f64).sqrt())),
        Ladder::BDag => Some((FockState2::new(s.n, s.m + 1), ((s.m + 1) as f64).sqrt())),
    }
}

/// Exact action of a product of ladder operators; the rightmost factor acts
/// first, as in the written operator product.
fn ladder_word(word: &[Ladder], s: FockState2) -> Option<(FockState2, f64)> {
    word.iter().rev().try_fold((s, 1.0), |(state, coeff), &op| {
        ladder_action(op, state).map(|(next, c)| (next, coeff * c))
    })
}

/// Applies a ladder operator, dropping amplitude pushed above `n_max`.
pub fn apply_ladder(which: Ladder, v: &TwoModeVector) -> Truncated<TwoModeVector> {
    let policy = v.policy();
    let mut out = TwoModeVector::zero(policy);
    let mut dropped = 0.0;
    for (s, a) in v.iter() {
        if let Some((next, c)) = ladder_action(which, s) {
            let amp = a * c;
            if policy.contains(next) {
                out.accumulate(next, amp);
            } else {
                dropped += amp.norm_sqr();
            }
        }
    }
    Truncated {
        value: out,
        dropped_norm: dropped.sqrt(),
    }
}

/// Sparse operator on the truncated basis, keyed by `(out, in)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseOperator {
    entries: BTreeMap<(FockState2, FockState2), C64>,
    policy: TruncationPolicy,
}

impl SparseOperator {
    pub fn zero(policy: TruncationPolicy) -> Self {
        Self {
            entries: BTreeMap::new(),
            policy,
        }
    }

    pub fn identity(policy: TruncationPolicy) -> Self {
        Self::from_action(policy, |s| vec![(s, C64::new(1.0, 0.0))])
    }

    /// Builds the operator column by column from an exact basis action.
    /// Images outside the policy are discarded.
    pub fn from_action<F>(policy: TruncationPolicy, action: F) -> Self
    where
        F: Fn(FockState2) -> Vec<(FockState2, C64)>,
    {
        let mut op = Self::zero(policy);
        for input in policy.basis() {
            for (out, c) in action(input) {
                if policy.contains(out) && c != C64::new(0.0, 0.0) {
                    *op.entries.entry((out, input)).or_default() += c;
                }
            }
        }
        op
    }

    pub fn ladder(which: Ladder, policy: TruncationPolicy) -> Self {
        Self::from_action(policy, |s| {
            ladder_action(which, s)
                .map(|(t, c)| vec![(t, C64::new(c, 0.0))])
                .unwrap_or_default()
        })
    }

    /// Linear combination of ladder words, each evaluated exactly before
    /// truncation, e.g. `[(1, [ADag, B]), (-1, [A, BDag])]`.
    pub fn from_words(policy: TruncationPolicy, terms: &[(C64, &[Ladder])]) -> Self {
        Self::from_action(policy, |s| {
            terms
                .iter()
                .filter_map(|(coeff, word)| ladder_word(word, s).map(|(t, c)| (t, coeff * c)))
                .collect()
        })
    }

    pub fn policy(&self) -> TruncationPolicy {
        self.policy
    }

    pub fn get(&self, out: FockState2, input: FockState2) -> C64 {
        self.entries.get(&(out, input)).copied().unwrap_or_default()
    }

    /// Stored entries as `((out, in), value)`.
    pub fn iter(&self) -> impl Iterator<Item = ((FockState2, FockState2), C64)> + '_ {
        self.entries.iter().map(|(&k, &v)| (k, v))
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn apply(&self, v: &TwoModeVector) -> TwoModeVector {
        let mut out = TwoModeVector::zero(self.policy);
        for (&(o, i), &c) in &self.entries {
            let a = v.amplitude(i);
            if a != C64::new(0.0, 0.0) {
                out.accumulate(o, c * a);
            }
        }
        out
    }

    pub fn adjoint(&self) -> Self {
        Self {
            entries: self.entries.iter().map(|(&(o, i), &c)| ((i, o), c.conj())).collect(),
            policy: self.policy,
        }
    }

    /// Truncated product `self · rhs`.
    pub fn matmul(&self, rhs: &Self) -> Self {
        let mut by_row: BTreeMap<FockState2, Vec<(FockState2, C64)>> = BTreeMap::new();
        for (&(o, i), &c) in &rhs.entries {
            by_row.entry(o).or_default().push((i, c));
        }
        let mut out = Self::zero(self.policy);
        for (&(o, k), &c) in &self.entries {
            if let Some(row) = by_row.get(&k) {
                for &(i, d) in row {
                    *out.entries.entry((o, i)).or_default() += c * d;
                }
            }
        }
        out.entries.retain(|_, v| *v != C64::new(0.0, 0.0));
        out
    }

    pub fn commutator(&self, rhs: &Self) -> Self {
        &self.matmul(rhs) - &rhs.matmul(self)
    }

    pub fn scaled(&self, factor: C64) -> Self {
        Self {
            entries: self.entries.iter().map(|(&k, &v)| (k, v * factor)).collect(),
            policy: self.policy,
        }
    }

    pub fn to_dense(&self) -> DMatrix<C64> {
        let mut dense = DMatrix::zeros(self.policy.dim(), self.policy.dim());
        for (&(o, i), &c) in &self.entries {
            let r = self.policy.index_of(o).expect("entries respect the policy");
            let col = self.policy.index_of(i).expect("entries respect the policy");
            dense[(r, col)] = c;
        }
        dense
    }

    /// Dense sub-block on an ordered list of states (rows and columns alike).
    pub fn block(&self, states: &[FockState2]) -> DMatrix<C64> {
        DMatrix::from_fn(states.len(), states.len(), |r, c| self.get(states[r], states[c]))
    }

    /// Largest entrywise `|self − other|` over pairs accepted by `keep`.
    pub fn max_abs_diff_where(&self, other: &Self, keep: impl Fn(FockState2, FockState2) -> bool) -> f64 {
        let diff = self - other;
        diff.entries
            .iter()
            .filter(|((o, i), _)| keep(*o, *i))
            .map(|(_, v)| v.norm())
            .fold(0.0, f64::max)
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.max_abs_diff_where(other, |_, _| true)
    }

    /// Largest deviation from Hermiticity, `max |A − A†|`.
    pub fn hermiticity_defect(&self) -> f64 {
        self.max_abs_diff(&self.adjoint())
    }

    /// Frobenius inner product `tr(self† · other)` over pairs accepted by `keep`.
    fn frobenius_where(&self, other: &Self, keep: &impl Fn(FockState2, FockState2) -> bool) -> C64 {
        self.entries
            .iter()
            .filter(|((o, i), _)| keep(*o, *i))
            .map(|(&(o, i), c)| c.conj() * other.get(o, i))
            .sum()
    }

    fn merge(&self, rhs: &Self, sign: f64) -> Self {
        let mut out = self.clone();
        for (&k, &v) in &rhs.entries {
            *out.entries.entry(k).or_default() += v * sign;
        }
        out.entries.retain(|_, v| *v != C64::new(0.0, 0.0));
        out
    }
}

impl Add for &SparseOperator {
    type Output = SparseOperator;
    fn add(self, rhs: Self) -> SparseOperator {
        self.merge(rhs, 1.0)
    }
}

impl Sub for &SparseOperator {
    type Output = SparseOperator;
    fn sub(self, rhs: Self) -> SparseOperator {
        self.merge(rhs, -1.0)
    }
}

impl Mul for &SparseOperator {
    type Output = SparseOperator;
    fn mul(self, rhs: Self) -> SparseOperator {
        self.matmul(rhs)
    }
}

/// Jordan–Schwinger generators and their raising/lowering combinations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Generator {
    Jx,
    Jy,
    Jz,
    Kx,
    Ky,
    Kz,
    /// `J₊ = a†b`
    JPlus,
    /// `J₋ = ab†`
    JMinus,
    /// `K₊ = a†b†`
    KPlus,
    /// `K₋ = ab`
    KMinus,
}

/// Matrix realisation of a generator on the truncated basis.
///
/// ```text
/// Jx = (a†b + ab†)/2     Kx = (a†b† + ab)/2
/// Jy = (a†b − ab†)/2i    Ky = (a†b† − ab)/2i
/// Jz = (a†a − b†b)/2     Kz = (a†a + b†b + 1)/2
/// ```
pub fn generator(which: Generator, policy: TruncationPolicy) -> SparseOperator {
    use Ladder::*;
    let half = C64::new(0.5, 0.0);
    let half_over_i = C64::new(0.0, -0.5);
    match which {
        Generator::Jx => SparseOperator::from_words(policy, &[(half, &[ADag, B]), (half, &[A, BDag])]),
        Generator::Jy => SparseOperator::from_words(policy, &[(half_over_i, &[ADag, B]), (-half_over_i, &[A, BDag])]),
        Generator::Jz => SparseOperator::from_action(policy, |s| vec![(s, C64::new(s.imbalance() as f64 / 2.0, 0.0))]),
        Generator::Kx => SparseOperator::from_words(policy, &[(half, &[ADag, BDag]), (half, &[A, B])]),
        Generator::Ky => SparseOperator::from_words(policy, &[(half_over_i, &[ADag, BDag]), (-half_over_i, &[A, B])]),
        Generator::Kz => {
            SparseOperator::from_action(policy, |s| vec![(s, C64::new((s.total() as f64 + 1.0) / 2.0, 0.0))])
        }
        Generator::JPlus => SparseOperator::from_words(policy, &[(C64::new(1.0, 0.0), &[ADag, B])]),
        Generator::JMinus => SparseOperator::from_words(policy, &[(C64::new(1.0, 0.0), &[A, BDag])]),
        Generator::KPlus => SparseOperator::from_words(policy, &[(C64::new(1.0, 0.0), &[ADag, BDag])]),
        Generator::KMinus => SparseOperator::from_words(policy, &[(C64::new(1.0, 0.0), &[A, B])]),
    }
}

/// Quadratic Casimir elements.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Casimir {
    /// su(2): `(N/2)(N/2 + 1)` with `N = n + m`.
    J2,
    /// su(1,1), lattice-selection-rule form: `(d/2)(d/2 + 1)` with `d = n − m`.
    K2,
}

pub fn casimir_eigenvalue(which: Casimir, s: FockState2) -> f64 {
    let half = match which {
        Casimir::J2 => s.total() as f64 / 2.0,
        Casimir::K2 => s.imbalance() as f64 / 2.0,
    };
    half * (half + 1.0)
}

/// Diagonal Casimir operator on the truncated basis.
pub fn casimir(which: Casimir, policy: TruncationPolicy) -> SparseOperator {
    SparseOperator::from_action(policy, |s| vec![(s, C64::new(casimir_eigenvalue(which, s), 0.0))])
}

/// The two Lie algebras realised on two bosonic modes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Algebra {
    Su2,
    Su11,
}

impl Algebra {
    /// `[x, y, z]` generators of the algebra.
    pub fn generators(self) -> [Generator; 3] {
        match self {
            Algebra::Su2 => [Generator::Jx, Generator::Jy, Generator::Jz],
            Algebra::Su11 => [Generator::Kx, Generator::Ky, Generator::Kz],
        }
    }

    /// Largest total photon number on which a product of two generators is
    /// truncation-exact.
    pub fn interior(self, policy: TruncationPolicy) -> u32 {
        let reach = match self {
            Algebra::Su2 => 1,
            Algebra::Su11 => 2,
        };
        policy.n_max().saturating_sub(reach)
    }
}

/// Casimir assembled from generator products: `Jx² + Jy² + Jz²` for su(2) and
/// `Kz² − Kx² − Ky²` for su(1,1). Exact on [`Algebra::interior`].
pub fn assembled_casimir(algebra: Algebra, policy: TruncationPolicy) -> SparseOperator {
    let [x, y, z] = algebra.generators().map(|g| generator(g, policy));
    let (x2, y2, z2) = (&x * &x, &y * &y, &z * &z);
    match algebra {
        Algebra::Su2 => &(&x2 + &y2) + &z2,
        Algebra::Su11 => &(&z2 - &x2) - &y2,
    }
}

/// Structure constants `[G_a, G_b] = Σ_c f[a][b][c] G_c`, fitted numerically
/// on the truncation interior.
#[derive(Debug, Clone, PartialEq)]
pub struct CommutatorTable {
    pub algebra: Algebra,
    pub coefficients: [[[C64; 3]; 3]; 3],
    /// Largest entrywise fit residual over all pairs.
    pub residual: f64,
}

impl CommutatorTable {
    pub fn coefficient(&self, a: usize, b: usize, c: usize) -> C64 {
        self.coefficients[a][b][c]
    }

    /// Applies the substitution `Kx → iJx, Ky → iJy, Kz → Jz` to an su(1,1)
    /// table, yielding the su(2) table it predicts.
    pub fn wick_rotated(&self) -> CommutatorTable {
        assert_eq!(self.algebra, Algebra::Su11, "Wick rotation maps su(1,1) to su(2)");
        let w = [I, I, C64::new(1.0, 0.0)];
        let mut coefficients = [[[C64::default(); 3]; 3]; 3];
        for a in 0..3 {
            for b in 0..3 {
                for c in 0..3 {
                    coefficients[a][b][c] = self.coefficients[a][b][c] * w[c] / (w[a] * w[b]);
                }
            }
        }
        CommutatorTable {
            algebra: Algebra::Su2,
            coefficients,
            residual: self.residual,
        }
    }

    pub fn max_difference(&self, other: &Self) -> f64 {
        let mut worst = 0.0f64;
        for a in 0..3 {
            for b in 0..3 {
                for c in 0..3 {
                    worst = worst.max((self.coefficients[a][b][c] - other.coefficients[a][b][c]).norm());
                }
            }
        }
        worst
    }
}

/// Numerically assembles the commutator table of an algebra.
pub fn commutator_table(algebra: Algebra, policy: TruncationPolicy) -> CommutatorTable {
    let gens = algebra.generators().map(|g| generator(g, policy));
    let cut = algebra.interior(policy);
    let keep = move |o: FockState2, i: FockState2| o.total() <= cut && i.total() <= cut;

    let gram = Matrix3::from_fn(|r, c| gens[r].frobenius_where(&gens[c], &keep));
    let gram_lu = gram.lu();

    let mut coefficients = [[[C64::default(); 3]; 3]; 3];
    let mut residual = 0.0f64;
    for a in 0..3 {
        for b in 0..3 {
            let comm = gens[a].commutator(&gens[b]);
            let rhs = Vector3::from_fn(|r, _| gens[r].frobenius_where(&comm, &keep));
            let fit = gram_lu.solve(&rhs).unwrap_or_else(Vector3::zeros);
            let mut model = SparseOperator::zero(policy);
            for c in 0..3 {
                coefficients[a][b][c] = fit[c];
                model = &model + &gens[c].scaled(fit[c]);
            }
            residual = residual.max(comm.max_abs_diff_where(&model, keep));
        }
    }
    CommutatorTable {
        algebra,
        coefficients,
        residual,
    }
}
