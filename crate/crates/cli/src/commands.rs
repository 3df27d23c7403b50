//! Subcommand drivers. Each returns its resolved config and a table; the
//! binary renders and writes them.

use crate::record::{AccuracyFailure, Format, RunConfig, Table};
use anyhow::{bail, Context, Result};
use clap::{Args, Subcommand, ValueEnum};
use cuelab_core::euler::power_sum_secondary_term;
use cuelab_core::exact::{exact_moment, theorem3_prediction, MixedMomentSpec};
use cuelab_core::hybrid::{
    hybrid_moment_mc, s_m_closed_form, assembled_prediction, theorem13_prediction, FxTable, HybridParams,
};
use cuelab_core::rmt::{mixed_moment_mc_with, RngSeed, Sampler};
use cuelab_core::zeta::{
    generate_zeros, landau_empirical, load_zeros, p_x_power_sum_over_zeros, write_zeros, ResultCache,
    ZeroDataset, ZetaDerivativeTable, ZetaEvalConfig,
};
use cuelab_core::Complex64;
use serde_json::json;
use std::path::PathBuf;

/// Outcome of a driver: what ran, what it produced, and whether a checked
/// quantity missed its tolerance.
pub struct Run {
    pub config: RunConfig,
    pub table: Table,
    pub failure: Option<AccuracyFailure>,
}

#[derive(Args, Clone, Debug)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Output file; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SamplerArg {
    Ginibre,
    Verblunsky,
}

impl From<SamplerArg> for Sampler {
    fn from(s: SamplerArg) -> Self {
        match s {
            SamplerArg::Ginibre => Sampler::Ginibre,
            SamplerArg::Verblunsky => Sampler::Verblunsky,
        }
    }
}

#[derive(Args, Clone, Debug)]
pub struct RmtArgs {
    /// Number of derivative factors; must equal the length of --orders.
    #[arg(long)]
    pub k: usize,
    #[arg(long, value_delimiter = ',', required = true)]
    pub orders: Vec<u32>,
    #[arg(long, value_delimiter = ',', default_value = "25,50,100")]
    pub n: Vec<usize>,
    #[arg(long, default_value_t = 100_000)]
    pub samples: usize,
    #[arg(long, default_value_t = 7)]
    pub seed: u64,
    #[arg(long, value_enum, default_value_t = SamplerArg::Verblunsky)]
    pub sampler: SamplerArg,
    #[command(flatten)]
    pub output: OutputArgs,
}

fn re_im(z: Complex64) -> [crate::record::Cell; 2] {
    [z.re.into(), z.im.into()]
}

fn join<T: ToString>(v: &[T]) -> String {
    v.iter().map(T::to_string).collect::<Vec<_>>().join(",")
}

pub fn cmd_rmt(args: &RmtArgs) -> Result<Run> {
    if args.k != args.orders.len() {
        return Err(cuelab_core::Error::InvalidArgument(format!(
            "--k {} does not match {} orders",
            args.k,
            args.orders.len()
        ))
        .into());
    }
    if args.n.is_empty() {
        return Err(cuelab_core::Error::InvalidArgument("--n needs at least one size".into()).into());
    }
    let mut config = RunConfig::new("rmt", args.output.format);
    config
        .set("k", args.k)
        .set("orders", &args.orders)
        .set("n", &args.n)
        .set("samples", args.samples)
        .set("seed", args.seed)
        .set("sampler", format!("{:?}", args.sampler).to_lowercase());
    let mut table = Table::new(&[
        "n",
        "orders",
        "mc_re",
        "mc_im",
        "std_error",
        "exact_re",
        "exact_im",
        "prediction_re",
        "prediction_im",
        "mc_over_exact_re",
        "mc_over_exact_im",
        "exact_over_prediction_re",
        "exact_over_prediction_im",
    ]);
    for (i, &n) in args.n.iter().enumerate() {
        let spec = MixedMomentSpec::new(n, args.orders.clone())?;
        let seed = RngSeed::new(args.seed.wrapping_add(i as u64), 0);
        let mc = mixed_moment_mc_with(&spec, args.samples, seed, args.sampler.into())?;
        let exact = exact_moment(&spec).to_complex();
        let prediction = theorem3_prediction(&spec);
        let mut row = vec![n.into(), join(&args.orders).into()];
        row.extend(re_im(mc.mean));
        row.push(mc.std_error.into());
        row.extend(re_im(exact));
        row.extend(re_im(prediction));
        row.extend(re_im(mc.mean / exact));
        row.extend(re_im(exact / prediction));
        table.push(row);
    }
    Ok(Run { config, table, failure: None })
}

#[derive(Subcommand, Clone, Debug)]
pub enum HybridCommand {
    /// Fourier coefficients s_m of k·F_X, quadrature against closed form.
    Smcheck(SmcheckArgs),
    /// Monte Carlo moment of Z'_{N,X} at eigenvalues against the prediction.
    T13(T13Args),
}

#[derive(Args, Clone, Debug)]
pub struct SmcheckArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub logx: f64,
    #[arg(long)]
    pub y: f64,
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    pub k: f64,
    /// Quadrature nodes for F_X.
    #[arg(long, default_value_t = 4096)]
    pub nodes: usize,
    #[arg(long, default_value_t = 1e-6)]
    pub tolerance: f64,
    #[command(flatten)]
    pub output: OutputArgs,
}

/// Largest |s_m numeric − s_m closed| over 0 ≤ m ≤ 2⌈log X⌉, with the rows.
pub fn smcheck_rows(params: &HybridParams, k: Complex64, nodes: usize) -> Result<Vec<(i64, Complex64, Complex64)>> {
    let table = FxTable::build(params, nodes)?;
    let top = 2 * params.log_x().ceil() as i64;
    (0..=top)
        .map(|m| Ok((m, table.s_m(k, m), s_m_closed_form(params, k, m)?)))
        .collect()
}

pub fn cmd_smcheck(args: &SmcheckArgs) -> Result<Run> {
    let mut config = RunConfig::new("hybrid smcheck", args.output.format);
    config
        .set("logx", args.logx)
        .set("y", args.y)
        .set("k", args.k)
        .set("nodes", args.nodes)
        .set("tolerance", args.tolerance);
    let params = HybridParams::from_log_x(args.logx, args.y, 1)?;
    let rows = smcheck_rows(&params, Complex64::new(args.k, 0.0), args.nodes)?;
    let mut table =
        Table::new(&["m", "numeric_re", "numeric_im", "closed_re", "closed_im", "abs_diff"]);
    let mut worst: f64 = 0.0;
    for (m, numeric, closed) in rows {
        let diff = (numeric - closed).norm();
        worst = worst.max(diff);
        let mut row = vec![m.into()];
        row.extend(re_im(numeric));
        row.extend(re_im(closed));
        row.push(diff.into());
        table.push(row);
    }
    eprintln!("max |Δs_m| = {worst:.3e}");
    let failure = (worst > args.tolerance)
        .then(|| AccuracyFailure(format!("max |Δs_m| = {worst:e} exceeds {:e}", args.tolerance)));
    Ok(Run { config, table, failure })
}

#[derive(Args, Clone, Debug)]
pub struct T13Args {
    #[arg(long, allow_hyphen_values = true)]
    pub k: f64,
    #[arg(long, default_value_t = 100)]
    pub n: usize,
    #[arg(long, default_value_t = 100_000)]
    pub samples: usize,
    #[arg(long, default_value_t = 3.0, allow_hyphen_values = true)]
    pub logx: f64,
    #[arg(long, default_value_t = 10.0)]
    pub y: f64,
    #[arg(long, default_value_t = 7)]
    pub seed: u64,
    #[command(flatten)]
    pub output: OutputArgs,
}

pub fn cmd_t13(args: &T13Args) -> Result<Run> {
    let mut config = RunConfig::new("hybrid t13", args.output.format);
    config
        .set("k", args.k)
        .set("n", args.n)
        .set("samples", args.samples)
        .set("logx", args.logx)
        .set("y", args.y)
        .set("seed", args.seed);
    let k = Complex64::new(args.k, 0.0);
    let params = HybridParams::from_log_x(args.logx, args.y, args.n)?;
    let prediction = theorem13_prediction(k, args.n)?;
    let assembled = assembled_prediction(&params, k)?;
    let mc = hybrid_moment_mc(&params, k, args.samples, RngSeed::new(args.seed, 0))?;
    let mut table = Table::new(&[
        "k",
        "n",
        "logx",
        "mc_re",
        "mc_im",
        "std_error",
        "unstable_variance",
        "prediction_re",
        "prediction_im",
        "assembled_re",
        "assembled_im",
        "ratio_re",
        "ratio_im",
    ]);
    let mut row = vec![args.k.into(), args.n.into(), args.logx.into()];
    row.extend(re_im(mc.mean));
    row.push(mc.std_error.into());
    row.push(mc.unstable_variance.into());
    row.extend(re_im(prediction));
    row.extend(re_im(assembled));
    row.extend(re_im(mc.mean / prediction));
    table.push(row);
    Ok(Run { config, table, failure: None })
}

#[derive(Subcommand, Clone, Debug)]
pub enum ZetaCommand {
    /// Discrete moments of ζ derivatives over zeros at zero-count checkpoints.
    Moments(MomentsArgs),
    /// Σ m^{−ρ} over zeros against −(T/2π)Λ(m)/m.
    Landau(LandauArgs),
    /// Normalized Σ P_X(ρ)^k over zeros.
    Px(PxArgs),
    /// Writes the first ordinates found by Gram-block sign counting.
    GenZeros(GenZerosArgs),
}

#[derive(Args, Clone, Debug)]
pub struct ZerosArgs {
    /// Zeros file, one ordinate per line.
    #[arg(long)]
    pub zeros: Option<PathBuf>,
    /// Read at most this many ordinates.
    #[arg(long)]
    pub limit: Option<usize>,
}

impl ZerosArgs {
    pub fn load(&self) -> Result<ZeroDataset> {
        let Some(path) = &self.zeros else {
            return Err(cuelab_core::Error::InvalidArgument("--zeros <path> is required".into()).into());
        };
        let d = load_zeros(path, self.limit).with_context(|| format!("reading {}", path.display()))?;
        if d.is_empty() {
            return Err(cuelab_core::Error::InvalidArgument(format!("{} holds no ordinates", path.display())).into());
        }
        d.check_standard_start()?;
        Ok(d)
    }
}

#[derive(Args, Clone, Debug)]
pub struct MomentsArgs {
    #[arg(long, value_delimiter = ',', required = true)]
    pub orders: Vec<u32>,
    #[command(flatten)]
    pub zeros: ZerosArgs,
    /// Zero counts at which to report.
    #[arg(long, value_delimiter = ',', default_value = "1000,10000,100000")]
    pub checkpoints: Vec<usize>,
    /// JSON-lines result cache keyed by dataset hash and parameters.
    #[arg(long)]
    pub cache: Option<PathBuf>,
    #[command(flatten)]
    pub output: OutputArgs,
}

pub fn cmd_moments(args: &MomentsArgs) -> Result<Run> {
    if args.orders.is_empty() || args.orders.contains(&0) {
        return Err(cuelab_core::Error::InvalidArgument("orders must be positive integers".into()).into());
    }
    let dataset = args.zeros.load()?;
    let hash = dataset.content_hash();
    let mut config = RunConfig::new("zeta moments", args.output.format);
    config.set("orders", &args.orders).set("checkpoints", &args.checkpoints).set("dataset_hash", &hash);
    let top = *args.checkpoints.iter().max().context("no checkpoints")?;
    if top > dataset.count {
        return Err(cuelab_core::Error::InvalidArgument(format!(
            "checkpoint {top} exceeds the {} zeros available",
            dataset.count
        ))
        .into());
    }
    let eval = ZetaEvalConfig::bulk();
    let max_order = *args.orders.iter().max().expect("nonempty");
    let compute = || -> cuelab_core::Result<Vec<_>> {
        let table = ZetaDerivativeTable::new(&dataset, top, max_order, &eval)?;
        args.checkpoints.iter().map(|&c| table.report(&args.orders, c)).collect()
    };
    let reports = match &args.cache {
        Some(path) => {
            let params = json!({"orders": args.orders, "checkpoints": args.checkpoints, "eval": format!("{eval:?}")});
            ResultCache::new(path).get_or_compute(&hash, "zeta moments", &params, compute)?
        }
        None => compute()?,
    };
    let mut table = Table::new(&[
        "checkpoint",
        "t",
        "count_formula",
        "sum_re",
        "sum_im",
        "normalized_re",
        "normalized_im",
        "prediction_re",
        "prediction_im",
        "ratio_re",
        "ratio_im",
        "prediction_log_t_re",
        "prediction_log_t_im",
        "ratio_log_t_re",
        "ratio_log_t_im",
    ]);
    for r in &reports {
        let mut row = vec![r.count.into(), r.t.into(), r.count_formula.into()];
        for z in [r.sum, r.normalized, r.prediction, r.ratio, r.prediction_log_t, r.ratio_log_t] {
            row.extend(re_im(z));
        }
        table.push(row);
    }
    Ok(Run { config, table, failure: None })
}

#[derive(Args, Clone, Debug)]
pub struct LandauArgs {
    #[arg(long)]
    pub m: u64,
    #[command(flatten)]
    pub zeros: ZerosArgs,
    /// Zero count fixing T; the whole dataset when absent.
    #[arg(long)]
    pub checkpoint: Option<usize>,
    #[command(flatten)]
    pub output: OutputArgs,
}

pub fn cmd_landau(args: &LandauArgs) -> Result<Run> {
    let dataset = args.zeros.load()?;
    let count = args.checkpoint.unwrap_or(dataset.count);
    let t = dataset.checkpoint_height(count)?;
    let mut config = RunConfig::new("zeta landau", args.output.format);
    config.set("m", args.m).set("checkpoint", count).set("dataset_hash", dataset.content_hash());
    let r = landau_empirical(&dataset, args.m, t)?;
    let mut table = Table::new(&["m", "checkpoint", "t", "empirical_re", "empirical_im", "predicted", "relative_deviation"]);
    let mut row = vec![r.m.into(), r.count.into(), r.t.into()];
    row.extend(re_im(r.empirical));
    row.push(r.predicted.into());
    row.push(if r.predicted == 0.0 { f64::NAN } else { r.relative_deviation() }.into());
    table.push(row);
    Ok(Run { config, table, failure: None })
}

#[derive(Args, Clone, Debug)]
pub struct PxArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub k: f64,
    /// Cutoff X, or `auto` for X = log T at each checkpoint.
    #[arg(long, default_value = "auto")]
    pub x: String,
    #[command(flatten)]
    pub zeros: ZerosArgs,
    #[arg(long, value_delimiter = ',')]
    pub checkpoints: Option<Vec<usize>>,
    #[command(flatten)]
    pub output: OutputArgs,
}

pub fn cmd_px(args: &PxArgs) -> Result<Run> {
    let fixed_x = match args.x.as_str() {
        "auto" => None,
        s => Some(s.parse::<f64>().map_err(|_| {
            cuelab_core::Error::InvalidArgument(format!("--x must be a number or `auto`, got {s:?}"))
        })?),
    };
    let dataset = args.zeros.load()?;
    let checkpoints = args.checkpoints.clone().unwrap_or_else(|| vec![dataset.count]);
    let mut config = RunConfig::new("zeta px", args.output.format);
    config
        .set("k", args.k)
        .set("x", &args.x)
        .set("checkpoints", &checkpoints)
        .set("dataset_hash", dataset.content_hash());
    let mut table = Table::new(&[
        "checkpoint",
        "t",
        "x",
        "k",
        "sum_re",
        "sum_im",
        "normalized_re",
        "normalized_im",
        "with_secondary_term",
    ]);
    for &c in &checkpoints {
        let t = dataset.checkpoint_height(c)?;
        let x = fixed_x.unwrap_or_else(|| t.ln());
        let sum = p_x_power_sum_over_zeros(&dataset, x, Complex64::new(args.k, 0.0), t)?;
        let normalized = sum / c as f64;
        let refined = 1.0 + power_sum_secondary_term(x, args.k, t)? / c as f64;
        let mut row = vec![c.into(), t.into(), x.into(), args.k.into()];
        row.extend(re_im(sum));
        row.extend(re_im(normalized));
        row.push(refined.into());
        table.push(row);
    }
    Ok(Run { config, table, failure: None })
}

#[derive(Args, Clone, Debug)]
pub struct GenZerosArgs {
    #[arg(long, default_value_t = 100_000)]
    pub count: usize,
    #[arg(long)]
    pub out: PathBuf,
}

pub fn cmd_gen_zeros(args: &GenZerosArgs) -> Result<()> {
    if args.count == 0 {
        bail!(cuelab_core::Error::InvalidArgument("--count must be positive".into()));
    }
    let zeros = generate_zeros(args.count)?;
    write_zeros(&args.out, &zeros)?;
    eprintln!("wrote {} ordinates up to {:.6} to {}", zeros.len(), zeros[zeros.len() - 1], args.out.display());
    Ok(())
}
