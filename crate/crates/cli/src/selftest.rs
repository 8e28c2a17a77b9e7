//! Quick consistency checks runnable without a test harness. Each check prints
//! one `PASS`/`FAIL` line; any failure makes the command exit with 1.

use bspdc::devices::analytic::{bs_table, pdc_table, TableRow};
use bspdc::devices::{bs_amplitude, pdc_amplitude, pdc_vacuum_coefficients, BeamSplitter, ParametricAmplifier};
use bspdc::duality::duality_sweep;
use bspdc::fock::FockState2;
use bspdc::observables::{mean_photons_ratio, Order};
use bspdc::qpdc::{run_qpdc, QpdcSpec, RunMode};
use bspdc::qubit::{bell_postselect, prepare_epr, BellState, QubitState};
use bspdc::C64;

use crate::commands::DEFAULT_GAINS;
use crate::failure::{Failure, Outcome};

type Check = (&'static str, fn() -> bspdc::Result<(bool, String)>);

fn tables() -> bspdc::Result<(bool, String)> {
    let mut worst = 0.0f64;
    for g in DEFAULT_GAINS {
        let pa = ParametricAmplifier::new(g)?;
        let bs = BeamSplitter::new(1.0 / g)?;
        for row in TableRow::ALL {
            let s = row.state();
            worst = worst.max((pdc_amplitude(pa, s, s) - pdc_table(pa, row)).norm());
            worst = worst.max((bs_amplitude(bs, s, s) - bs_table(bs, row)).norm());
        }
    }
    Ok((worst < 1e-10, format!("worst deviation {worst:.2e}")))
}

fn duality() -> bspdc::Result<(bool, String)> {
    let worst = duality_sweep(&DEFAULT_GAINS, 4)?
        .iter()
        .map(|r| r.worst.residual)
        .fold(0.0, f64::max);
    Ok((worst < 1e-8, format!("worst residual {worst:.2e} over indices <= 4")))
}

fn hom_dip() -> bspdc::Result<(bool, String)> {
    let pair = FockState2::new(1, 1);
    let spec = QpdcSpec::new(2.0, 1, pair, RunMode::Exact)?;
    let p = run_qpdc(&spec)?
        .into_iter()
        .find(|r| r.output == pair)
        .map_or(f64::NAN, |r| r.probability);
    Ok((p.abs() < 1e-10, format!("P(1,1 -> 1,1) at g = 2 is {p:.2e}")))
}

fn teleportation() -> bspdc::Result<(bool, String)> {
    let psi = QubitState::from_amplitudes(vec![C64::new(0.6, 0.2), C64::new(-0.1, 0.77)])?;
    let reg = psi.tensor(&QubitState::zero(2));
    let reg = prepare_epr(&reg, 1, 2)?;
    let r = bell_postselect(&reg, 0, 1, BellState::PhiPlus)?;
    let fidelity = r.post_state.as_ref().map_or(0.0, |s| s.inner(&psi).norm_sqr());
    let ok = (r.probability - 0.25).abs() < 1e-15 && (fidelity - 1.0).abs() < 1e-12;
    Ok((ok, format!("probability {} fidelity {fidelity}", r.probability)))
}

fn pair_profile() -> bspdc::Result<(bool, String)> {
    let mut worst = 0.0f64;
    let mut monotone = true;
    for g in [1.25, 2.0, 4.0] {
        let c = pdc_vacuum_coefficients(ParametricAmplifier::new(g)?, 40);
        let p: Vec<f64> = c.iter().map(|x| x * x).collect();
        monotone &= p[..=10].windows(2).all(|w| w[1] < w[0]);
        // Geometric weights: the first 41 sum to 1 − x^41 with x = (g − 1)/g.
        let tail = ((g - 1.0) / g).powi(41);
        worst = worst.max((p.iter().sum::<f64>() - (1.0 - tail)).abs());
    }
    Ok((
        monotone && worst < 1e-12,
        format!("monotone {monotone}, tail deviation {worst:.2e}"),
    ))
}

fn ratio() -> bspdc::Result<(bool, String)> {
    let r = mean_photons_ratio(2.0, Order::Finite(2))?;
    Ok((r == 0.5, format!("ratio(g = 2, q = 2) = {r}")))
}

pub fn run() -> Outcome {
    let checks: [Check; 6] = [
        ("table", tables),
        ("duality", duality),
        ("hom-dip", hom_dip),
        ("teleportation", teleportation),
        ("pair-profile", pair_profile),
        ("ratio", ratio),
    ];
    let mut failed = Vec::new();
    for (name, check) in checks {
        let (ok, detail) = check().unwrap_or_else(|e| (false, e.to_string()));
        println!("{} {name}: {detail}", if ok { "PASS" } else { "FAIL" });
        if !ok {
            failed.push(name);
        }
    }
    if failed.is_empty() {
        Ok(())
    } else {
        Err(Failure::Check(failed.join(", ")))
    }
}
