//! Subcommand arguments and their CSV tables.

use std::f64::consts::PI;
use std::path::Path;
use std::thread;

use bspdc::devices::{
    analytic, bs_amplitude, exponential_oracle, pdc_amplitude, BeamSplitter, Device, ParametricAmplifier,
};
use bspdc::duality::{duality_sweep, GainReport};
use bspdc::fock::{FockState2, TruncationPolicy};
use bspdc::observables::{
    mean_photons, mean_photons_ratio, quadrature_fluctuation, quadrature_fluctuation_renormalized, Order,
};
use bspdc::qpdc::{qpdc_amplitudes, run_qpdc, QpdcSpec, RunMode};
use bspdc::C64;
use clap::{Args, Subcommand, ValueEnum};

use crate::failure::{Failure, Outcome};
use crate::grid::{self, Range};
use crate::output::{num, Metadata, Table};

pub const DEFAULT_GAINS: [f64; 7] = [1.0, 1.25, 1.5, 2.0, 3.0, 4.0, 8.0];

fn fmt_c(z: C64) -> [String; 2] {
    [num(z.re), num(z.im)]
}

fn join<T: ToString>(xs: &[T]) -> String {
    xs.iter().map(T::to_string).collect::<Vec<_>>().join(",")
}

fn join_num(xs: &[f64]) -> String {
    xs.iter().map(|&x| num(x)).collect::<Vec<_>>().join(",")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    /// Closed form (binomial expansion or tabulated element).
    Analytic,
    /// Beam-splitter sector exponential.
    Sector,
    /// Disentangled amplifier series.
    Disentangled,
    /// Truncated brute-force exponential with a cutoff-doubling check.
    Oracle,
}

impl Method {
    fn label(self) -> &'static str {
        match self {
            Method::Analytic => "analytic",
            Method::Sector => "sector",
            Method::Disentangled => "disentangled",
            Method::Oracle => "oracle",
        }
    }
}

#[derive(Debug, Args)]
#[group(id = "device", required = true, multiple = false)]
pub struct DeviceChoice {
    /// Parametric amplifier, parameterised by `--g`.
    #[arg(long)]
    pub pdc: bool,
    /// Beam splitter, parameterised by `--eta`.
    #[arg(long)]
    pub bs: bool,
}

#[derive(Debug, Args)]
pub struct AmplitudeArgs {
    #[command(flatten)]
    pub device: DeviceChoice,
    /// Amplifier gain, at least 1.
    #[arg(long)]
    pub g: Option<f64>,
    /// Beam-splitter transmittance in [0, 1].
    #[arg(long)]
    pub eta: Option<f64>,
    /// Input state `n,m`.
    #[arg(long = "in", value_name = "N,M")]
    pub input: FockState2,
    /// Output state `l,s`.
    #[arg(long = "out", value_name = "L,S")]
    pub out: FockState2,
    /// Evaluation route; every applicable route when omitted.
    #[arg(long, value_enum)]
    pub method: Option<Method>,
    /// Total-photon cutoff of the oracle; its row holds the doubled-cutoff
    /// value.
    #[arg(long, default_value_t = 48)]
    pub n_max: u32,
    /// Largest allowed oracle change under cutoff doubling; the value is
    /// reported in `cutoff_change` and larger changes exit with 1.
    #[arg(long, default_value_t = bspdc::TRUNCATION_TOL)]
    pub oracle_tolerance: f64,
}

pub fn amplitude(args: &AmplitudeArgs, path: Option<&Path>) -> Outcome {
    let (device, param, value) = match (args.device.pdc, args.g, args.eta) {
        (true, Some(g), None) => (Device::Pdc(ParametricAmplifier::new(g)?), "g", g),
        (false, None, Some(eta)) => (Device::Bs(BeamSplitter::new(eta)?), "eta", eta),
        (true, ..) => return Err(Failure::Usage("--pdc takes --g only".into())),
        (false, ..) => return Err(Failure::Usage("--bs takes --eta only".into())),
    };
    let (input, out) = (args.input, args.out);
    let applicable = match device {
        Device::Bs(_) => [Method::Analytic, Method::Sector, Method::Oracle],
        Device::Pdc(_) => [Method::Analytic, Method::Disentangled, Method::Oracle],
    };
    let methods: Vec<Method> = match args.method {
        Some(m) if applicable.contains(&m) => vec![m],
        Some(m) => {
            return Err(Failure::Usage(format!(
                "method {} does not apply to this device",
                m.label()
            )))
        }
        None => applicable.to_vec(),
    };

    let mut rows = Vec::new();
    for method in methods {
        let z = match (method, device) {
            (Method::Analytic, Device::Bs(bs)) => C64::from(analytic::bs_binomial(bs, input, out)),
            (Method::Analytic, Device::Pdc(pa)) => match analytic::pdc_closed_form(pa, input, out) {
                Some(v) => C64::from(v),
                None if args.method.is_some() => {
                    return Err(Failure::Usage(format!("no closed form for <{out}|U|{input}>")));
                }
                None => continue,
            },
            (Method::Sector, Device::Bs(bs)) => bs_amplitude(bs, input, out),
            (Method::Disentangled, Device::Pdc(pa)) => pdc_amplitude(pa, input, out),
            (Method::Oracle, _) => {
                let n_max = args.n_max.max(input.total()).max(out.total());
                let coarse = exponential_oracle(device, TruncationPolicy::new(n_max)).element(out, input);
                let fine = exponential_oracle(device, TruncationPolicy::new(2 * n_max.max(1))).element(out, input);
                rows.push((method, fine, (fine - coarse).norm()));
                continue;
            }
            _ => unreachable!("filtered by applicability"),
        };
        rows.push((method, z, 0.0));
    }

    let meta = Metadata::new("amplitude")
        .field("device", if args.device.pdc { "pdc" } else { "bs" })
        .field(param, num(value))
        .field("n_max", args.n_max)
        .field("oracle_tolerance", num(args.oracle_tolerance));
    let mut t = Table::create(
        path,
        &meta,
        &[
            "device",
            "param",
            "value",
            "input",
            "output",
            "method",
            "re",
            "im",
            "abs",
            "cutoff_change",
        ],
    )?;
    let device_label = if args.device.pdc { "pdc" } else { "bs" };
    let mut unconverged = None;
    for (method, z, change) in rows {
        if change > args.oracle_tolerance {
            unconverged = Some(change);
        }
        let [re, im] = fmt_c(z);
        t.row([
            device_label.to_string(),
            param.to_string(),
            num(value),
            input.to_string(),
            out.to_string(),
            method.label().to_string(),
            re,
            im,
            num(z.norm()),
            num(change),
        ])?;
    }
    t.finish()?;
    match unconverged {
        Some(change) => Err(Failure::Check(format!(
            "oracle moved by {change:.3e} when the cutoff doubled from {}",
            args.n_max
        ))),
        None => Ok(()),
    }
}

#[derive(Debug, Args)]
pub struct DualityArgs {
    /// Gain grid.
    #[arg(long, value_delimiter = ',', default_values_t = DEFAULT_GAINS)]
    pub g: Vec<f64>,
    /// Largest index among `l, s, n, m`.
    #[arg(long, default_value_t = 6)]
    pub max_total: u32,
    /// Largest accepted residual.
    #[arg(long, default_value_t = bspdc::TRUNCATION_TOL)]
    pub tolerance: f64,
}

pub fn duality(args: &DualityArgs, path: Option<&Path>) -> Outcome {
    for &g in &args.g {
        bspdc::duality::wick_map(g)?;
    }
    // One sweep per gain; results are collected in grid order.
    let reports: Vec<GainReport> = thread::scope(|s| {
        let handles: Vec<_> = args
            .g
            .iter()
            .map(|&g| s.spawn(move || duality_sweep(&[g], args.max_total)))
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("sweep thread panicked").map(|mut r| r.remove(0)))
            .collect::<bspdc::Result<_>>()
    })?;

    let meta = Metadata::new("duality-check")
        .field("g", join_num(&args.g))
        .field("max_total", args.max_total)
        .field("tolerance", num(args.tolerance));
    let mut t = Table::create(
        path,
        &meta,
        &[
            "g",
            "eta",
            "checked",
            "worst_residual",
            "l",
            "s",
            "n",
            "m",
            "lhs_re",
            "lhs_im",
            "rhs_re",
            "rhs_im",
            "sign_flips",
            "pass",
        ],
    )?;
    let mut failing = Vec::new();
    for r in &reports {
        let w = &r.worst;
        let pass = w.residual <= args.tolerance;
        if !pass {
            failing.push(r.g);
        }
        let [lr, li] = fmt_c(w.lhs);
        let [rr, ri] = fmt_c(w.rhs);
        t.row([
            num(r.g),
            num(1.0 / r.g),
            r.checked.to_string(),
            num(w.residual),
            w.l.to_string(),
            w.s.to_string(),
            w.n.to_string(),
            w.m.to_string(),
            lr,
            li,
            rr,
            ri,
            r.sign_flips.len().to_string(),
            pass.to_string(),
        ])?;
    }
    t.finish()?;
    if failing.is_empty() {
        Ok(())
    } else {
        Err(Failure::Check(format!(
            "residual above {:?} at g = {}",
            args.tolerance,
            join_num(&failing)
        )))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum QpdcPath {
    /// Qubit circuit built from beam-splitter rotations.
    Circuit,
    /// Direct amplifier amplitudes over the same outputs.
    Amplitude,
}

#[derive(Debug, Args)]
pub struct QpdcArgs {
    /// Input state `n,m`.
    #[arg(long, value_name = "N,M", default_value = "1,1")]
    pub input: FockState2,
    /// Gain list.
    #[arg(long, value_delimiter = ',', conflicts_with = "g_range")]
    pub g: Vec<f64>,
    /// Gain range `start:stop:step`; `1:4:0.1` when no gain is given.
    #[arg(long, value_name = "START:STOP:STEP")]
    pub g_range: Option<Range>,
    /// Truncation order.
    #[arg(long, default_value_t = 1)]
    pub q: u32,
    /// Post-selected exact evaluation (the default).
    #[arg(long, conflicts_with = "shots")]
    pub exact: bool,
    /// Sample this many shots per gain instead.
    #[arg(long)]
    pub shots: Option<u64>,
    /// Root seed; gain `k` of the grid samples from stream `k`.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum, default_value_t = QpdcPath::Circuit)]
    pub path: QpdcPath,
}

pub fn qpdc(args: &QpdcArgs, path: Option<&Path>) -> Outcome {
    let gains = grid::resolve(&args.g, args.g_range, || {
        Range {
            start: 1.0,
            stop: 4.0,
            step: 0.1,
        }
        .points()
    });
    if args.shots.is_some() && args.path == QpdcPath::Amplitude {
        return Err(Failure::Usage("--shots requires --path circuit".into()));
    }
    let specs = gains
        .iter()
        .enumerate()
        .map(|(k, &g)| {
            let mode = match args.shots {
                Some(shots) => RunMode::Shots {
                    shots,
                    seed: args.seed,
                    stream: k as u64,
                },
                None => RunMode::Exact,
            };
            QpdcSpec::new(g, args.q, args.input, mode)
        })
        .collect::<bspdc::Result<Vec<_>>>()?;

    let mut rows = Vec::new();
    for spec in &specs {
        match args.path {
            QpdcPath::Circuit => {
                for r in run_qpdc(spec)? {
                    rows.push((spec.g(), r.output, r.probability, r.stderr, r.raw));
                }
            }
            QpdcPath::Amplitude => {
                for (out, p) in qpdc_amplitudes(spec) {
                    rows.push((spec.g(), out, p, 0.0, p));
                }
            }
        }
    }

    let (mode, shots, seed) = match args.shots {
        Some(n) => ("shots", n.to_string(), args.seed.to_string()),
        None => ("exact", "0".to_string(), String::new()),
    };
    let mut meta = Metadata::new("qpdc")
        .field("input", args.input)
        .field("q", args.q)
        .field("path", format!("{:?}", args.path).to_lowercase())
        .field("mode", mode)
        .field("shots", &shots);
    if args.shots.is_some() {
        meta = meta.field("seed", args.seed).field("stream", "grid-index");
    }
    let mut t = Table::create(
        path,
        &meta,
        &[
            "g",
            "input",
            "output",
            "probability",
            "stderr",
            "mode",
            "shots",
            "seed",
            "raw_frequency",
        ],
    )?;
    for (g, out, p, err, raw) in rows {
        t.row([
            num(g),
            args.input.to_string(),
            out.to_string(),
            num(p),
            num(err),
            mode.to_string(),
            shots.clone(),
            seed.clone(),
            num(raw),
        ])?;
    }
    t.finish()?;
    Ok(())
}

#[derive(Debug, Subcommand)]
pub enum ObservablesCommand {
    /// Mean photon number of the truncated amplifier relative to the full one.
    Ratio(RatioArgs),
    /// Two-mode quadrature fluctuation against the quadrature angle.
    Fluctuation(FluctuationArgs),
}

#[derive(Debug, Args)]
pub struct RatioArgs {
    /// Gain list.
    #[arg(long, value_delimiter = ',', conflicts_with = "g_range")]
    pub g: Vec<f64>,
    /// Gain range; `1:8:0.1` when no gain is given.
    #[arg(long, value_name = "START:STOP:STEP")]
    pub g_range: Option<Range>,
    /// Orders; `inf` selects the untruncated amplifier.
    #[arg(long, value_delimiter = ',', default_value = "1,2,3,4,5,6")]
    pub q: Vec<Order>,
}

#[derive(Debug, Args)]
pub struct FluctuationArgs {
    /// Gain list.
    #[arg(long, value_delimiter = ',', default_value = "2")]
    pub g: Vec<f64>,
    /// Orders.
    #[arg(long, value_delimiter = ',', default_value = "1,2,4,8")]
    pub q: Vec<u32>,
    /// Angle list in radians.
    #[arg(long, value_delimiter = ',', conflicts_with = "theta_range")]
    pub theta: Vec<f64>,
    /// Angle range; `kπ/32` for `k = 0..=32` when no angle is given.
    #[arg(long, value_name = "START:STOP:STEP")]
    pub theta_range: Option<Range>,
}

pub fn observables(cmd: &ObservablesCommand, path: Option<&Path>) -> Outcome {
    match cmd {
        ObservablesCommand::Ratio(a) => {
            let gains = grid::resolve(&a.g, a.g_range, || {
                Range {
                    start: 1.0,
                    stop: 8.0,
                    step: 0.1,
                }
                .points()
            });
            let meta = Metadata::new("observables-ratio").field("q", join(&a.q));
            let mut rows = Vec::new();
            for &g in &gains {
                let full = mean_photons(g, Order::Infinite)?;
                for &q in &a.q {
                    rows.push([
                        num(g),
                        q.to_string(),
                        num(mean_photons_ratio(g, q)?),
                        num(mean_photons(g, q)?),
                        num(full),
                    ]);
                }
            }
            let mut t = Table::create(path, &meta, &["g", "q", "ratio", "mean_photons", "mean_photons_full"])?;
            for r in rows {
                t.row(r)?;
            }
            t.finish()?;
        }
        ObservablesCommand::Fluctuation(a) => {
            let thetas = grid::resolve(&a.theta, a.theta_range, || {
                (0..=32).map(|k| k as f64 * PI / 32.0).collect()
            });
            let meta = Metadata::new("observables-fluctuation")
                .field("g", join_num(&a.g))
                .field("q", join(&a.q));
            let mut rows = Vec::new();
            for &g in &a.g {
                for &q in &a.q {
                    for &theta in &thetas {
                        rows.push([
                            num(g),
                            q.to_string(),
                            num(theta),
                            num(quadrature_fluctuation(g, q, theta)?),
                            num(quadrature_fluctuation_renormalized(g, q, theta)?),
                        ]);
                    }
                }
            }
            let mut t = Table::create(
                path,
                &meta,
                &["g", "q", "theta", "fluctuation", "fluctuation_renormalized"],
            )?;
            for r in rows {
                t.row(r)?;
            }
            t.finish()?;
        }
    }
    Ok(())
}
