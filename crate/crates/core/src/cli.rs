//! Command-line front end: parameter scans to CSV and single-state checks.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Deserialize;

use crate::criteria::{
    entropic_from_distributions, entropy_half_width, full_srur_with, srur_from_marginal, CatMarginals, Channel, Criterion,
    LocalGrid, LocalParams, QuadratureDistributions, Verdict, BNS_ROWS, PNES_ROWS,
};
use crate::error::{Error, Result};
use crate::fock::read_state_file;
use crate::states::{beam_split_number, cat_auto_cutoff, dephased_cat_parts, pnes, PnesParams};
use crate::weyl::level_twice;

#[derive(Parser, Debug)]
#[command(name = "srur", version, about = "Moment-matrix entanglement tests for two-mode bosonic states")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Dephased cat over an (alpha, p) grid: marginal SRUR and entropic columns.
    ScanCat(ScanArgs),
    /// Beam-split number states B|n,m⟩: four-observable submatrix.
    ScanBns(ScanArgs),
    /// Truncated photon-number-entangled states: five-observable submatrix.
    ScanPnes(ScanArgs),
    /// Run one criterion on a JSON state file. Exit 0: not detected, 1: detected, 2: error.
    Check(CheckArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CriterionName {
    SrurMarginal,
    SrurFull,
    Entropic,
    Simon,
    Duan,
}

#[derive(Args, Debug, Default)]
pub struct CommonArgs {
    /// JSON config file; flags override its values.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Hierarchy level J (0.5, 1 or 1.5).
    #[arg(long = "j")]
    pub j: Option<f64>,
    /// Local rotation of mode A in radians.
    #[arg(long, allow_hyphen_values = true)]
    pub theta1: Option<f64>,
    /// Local rotation of mode B in radians.
    #[arg(long, allow_hyphen_values = true)]
    pub theta2: Option<f64>,
    /// Local squeezing of mode A.
    #[arg(long, allow_hyphen_values = true)]
    pub r1: Option<f64>,
    /// Local squeezing of mode B.
    #[arg(long, allow_hyphen_values = true)]
    pub r2: Option<f64>,
    /// Marginal channel, xm-pp or xp-pm.
    #[arg(long)]
    pub channel: Option<String>,
}

#[derive(Args, Debug, Default)]
pub struct ScanArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Per-mode Fock cutoff (default: chosen per state).
    #[arg(long)]
    pub cutoff: Option<usize>,
    /// Output CSV path (default: stdout).
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct CheckArgs {
    /// JSON state file.
    pub state: PathBuf,
    #[command(flatten)]
    pub common: CommonArgs,
    #[arg(long, value_enum)]
    pub criterion: Option<CriterionName>,
    /// Comma-separated row subset of the two-mode basis (srur-full only).
    #[arg(long, value_delimiter = ',')]
    pub rows: Option<Vec<usize>>,
}

/// Inclusive linear range with `steps` points.
#[derive(Clone, Copy, Debug, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Range {
    pub min: f64,
    pub max: f64,
    pub steps: usize,
}

impl Range {
    pub fn new(min: f64, max: f64, steps: usize) -> Self {
        Self { min, max, steps }
    }

    pub fn values(&self) -> Vec<f64> {
        if self.steps == 1 {
            return vec![self.min];
        }
        (0..self.steps)
            .map(|i| self.min + (self.max - self.min) * i as f64 / (self.steps - 1) as f64)
            .collect()
    }

    fn validate(&self, name: &str) -> Result<()> {
        if self.steps == 0 || !self.min.is_finite() || !self.max.is_finite() || self.max < self.min {
            return Err(Error::InvalidParameter(format!("{name}: invalid range {self:?}")));
        }
        Ok(())
    }
}

/// Inclusive integer range.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IntRange {
    pub min: usize,
    pub max: usize,
}

/// Scan configuration after merging defaults, the config file and flags.
#[derive(Clone, Debug, PartialEq, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ScanConfig {
    pub alpha: Range,
    pub p: Range,
    pub n: IntRange,
    pub m: IntRange,
    /// Steps of both `c0` and `c1` over `[0, 1]`.
    pub c_steps: usize,
    pub criterion: Option<CriterionName>,
    pub j: f64,
    /// Local parameter grid; the most negative witness over it is reported.
    pub theta1: Vec<f64>,
    pub theta2: Vec<f64>,
    pub r1: Vec<f64>,
    pub r2: Vec<f64>,
    pub channel: String,
    pub cutoff: Option<usize>,
    pub out: Option<PathBuf>,
}

impl Default for ScanConfig {
    fn default() -> Self {
        Self {
            alpha: Range::new(0.05, 2.0, 40),
            p: Range::new(0.05, 1.0, 20),
            n: IntRange { min: 1, max: 5 },
            m: IntRange { min: 0, max: 8 },
            c_steps: 20,
            criterion: None,
            j: 1.0,
            theta1: vec![0.0],
            theta2: vec![0.0],
            r1: vec![0.0],
            r2: vec![0.0],
            channel: Channel::default().to_string(),
            cutoff: None,
            out: None,
        }
    }
}

impl ScanConfig {
    /// Loads `path` over the defaults.
    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Ok(serde_json::from_str(&text)?)
    }

    fn apply_common(&mut self, c: &CommonArgs) {
        if let Some(j) = c.j {
            self.j = j;
        }
        if let Some(t) = c.theta1 {
            self.theta1 = vec![t];
        }
        if let Some(t) = c.theta2 {
            self.theta2 = vec![t];
        }
        if let Some(r) = c.r1 {
            self.r1 = vec![r];
        }
        if let Some(r) = c.r2 {
            self.r2 = vec![r];
        }
        if let Some(ch) = &c.channel {
            self.channel = ch.clone();
        }
    }

    pub fn from_scan_args(args: &ScanArgs) -> Result<Self> {
        let mut cfg = match &args.common.config {
            Some(p) => Self::from_file(p)?,
            None => Self::default(),
        };
        cfg.apply_common(&args.common);
        if args.cutoff.is_some() {
            cfg.cutoff = args.cutoff;
        }
        if args.out.is_some() {
            cfg.out = args.out.clone();
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        level_twice(self.j)?;
        if !(0.5..=1.5).contains(&self.j) {
            return Err(Error::InvalidParameter(format!("J = {} (expected 0.5, 1 or 1.5)", self.j)));
        }
        self.alpha.validate("alpha")?;
        self.p.validate("p")?;
        if self.p.min < 0.0 || self.p.max > 1.0 {
            return Err(Error::InvalidParameter("p must lie in [0, 1]".into()));
        }
        if self.n.max < self.n.min || self.m.max < self.m.min {
            return Err(Error::InvalidParameter("empty n or m range".into()));
        }
        if self.c_steps == 0 {
            return Err(Error::InvalidParameter("c_steps must be at least 1".into()));
        }
        if self.local_grid().points().is_empty() {
            return Err(Error::InvalidParameter("empty local parameter grid".into()));
        }
        self.channel()?;
        Ok(())
    }

    pub fn channel(&self) -> Result<Channel> {
        self.channel.parse()
    }

    pub fn local_grid(&self) -> LocalGrid {
        LocalGrid {
            theta1: self.theta1.clone(),
            theta2: self.theta2.clone(),
            r1: self.r1.clone(),
            r2: self.r2.clone(),
        }
    }
}

fn num(v: f64) -> String {
    format!("{v:.8e}")
}

fn best(verdicts: Vec<Verdict>) -> Verdict {
    verdicts
        .into_iter()
        .reduce(|a, b| if b.witness_value < a.witness_value { b } else { a })
        .expect("non-empty grid")
}

/// CSV of the dephased-cat scan.
pub fn scan_cat_csv(cfg: &ScanConfig) -> Result<String> {
    cfg.validate()?;
    let channel = cfg.channel()?;
    let points = cfg.local_grid().points();
    let alphas = cfg.alpha.values();
    let ps = cfg.p.values();
    let blocks: Vec<String> = alphas
        .par_iter()
        .map(|&alpha| -> Result<String> {
            let cutoff = cfg.cutoff.unwrap_or_else(|| cat_auto_cutoff(alpha, cfg.j));
            let (d, c) = dephased_cat_parts(alpha, cutoff)?;
            let (trace_d, trace_c) = (d.trace().re, c.trace().re);
            let mut parts = Vec::with_capacity(points.len());
            for params in &points {
                let marg = CatMarginals::new(&d, &c, params, channel)?;
                let width = entropy_half_width(2.0 * alpha * alpha * (2.0 * (params.r1.abs().max(params.r2.abs()))).exp());
                let qd = QuadratureDistributions::from_operator(&d, params, width)?;
                let qc = QuadratureDistributions::from_operator(&c, params, width)?;
                parts.push((*params, marg, qd, qc));
            }
            let mut out = String::new();
            for &p in &ps {
                let mut mm = Vec::with_capacity(parts.len());
                let mut ent = Vec::with_capacity(parts.len());
                for (params, marg, qd, qc) in &parts {
                    mm.push(srur_from_marginal(&marg.at(p)?, cfg.j, channel, *params)?);
                    let norm = trace_d - p * trace_c;
                    let dist = qd.combine(1.0 / norm, qc, -p / norm)?;
                    ent.push(entropic_from_distributions(&dist, *params)?);
                }
                let (mm, ent) = (best(mm), best(ent));
                let ev = &mm.evidence;
                writeln!(
                    out,
                    "{},{},{},{},{},{},{},{}",
                    num(alpha),
                    num(p),
                    num(ev.value("det_M_half").unwrap_or(f64::NAN)),
                    num(ev.value("det_M_1_given_half").unwrap_or(f64::NAN)),
                    num(mm.witness_value),
                    num(ent.witness_value),
                    mm.detected,
                    ent.detected
                )
                .expect("write to string");
            }
            Ok(out)
        })
        .collect::<Result<_>>()?;
    let mut csv = String::from("alpha,p,det_M_half,det_M_1_given_half,min_eig,entropic_slack,detected_mm,detected_entropy\n");
    blocks.iter().for_each(|b| csv.push_str(b));
    Ok(csv)
}

fn require_level_one(cfg: &ScanConfig) -> Result<()> {
    if cfg.j != 1.0 {
        return Err(Error::InvalidParameter(
            "submatrix scans select rows of the J = 1 basis; use --j 1".into(),
        ));
    }
    Ok(())
}

fn scan_points(state: &crate::fock::TwoModeState, rows: &[usize], points: &[LocalParams]) -> Result<Verdict> {
    let verdicts = points
        .iter()
        .map(|p| full_srur_with(state, *p, 1.0, Some(rows)))
        .collect::<Result<Vec<_>>>()?;
    Ok(best(verdicts))
}

/// CSV of the beam-split number state scan.
pub fn scan_bns_csv(cfg: &ScanConfig) -> Result<String> {
    cfg.validate()?;
    require_level_one(cfg)?;
    let points = cfg.local_grid().points();
    let pairs: Vec<(usize, usize)> = (cfg.n.min..=cfg.n.max)
        .flat_map(|n| (cfg.m.min..=cfg.m.max).map(move |m| (n, m)))
        .collect();
    let rows: Vec<String> = pairs
        .par_iter()
        .map(|&(n, m)| -> Result<String> {
            let cutoff = cfg.cutoff.unwrap_or(n + m + 2);
            let state = beam_split_number(n, m, cutoff)?;
            let v = scan_points(&state, &BNS_ROWS, &points)?;
            let det = v.evidence.value("det").unwrap_or(f64::NAN);
            Ok(format!("{n},{m},{},{},{}\n", num(det), num(v.witness_value), v.detected))
        })
        .collect::<Result<_>>()?;
    Ok(format!("n,m,submatrix_det,min_eig,detected\n{}", rows.concat()))
}

/// CSV of the truncated photon-number-entangled state scan over the simplex.
pub fn scan_pnes_csv(cfg: &ScanConfig) -> Result<String> {
    cfg.validate()?;
    require_level_one(cfg)?;
    let points = cfg.local_grid().points();
    let cs = Range::new(0.0, 1.0, cfg.c_steps).values();
    let mut grid = Vec::new();
    for &c0 in &cs {
        for &c1 in &cs {
            if c0 * c0 + c1 * c1 <= 1.0 + 1e-12 {
                grid.push((c0, c1));
            }
        }
    }
    let cutoff = cfg.cutoff.unwrap_or(4);
    let rows: Vec<String> = grid
        .par_iter()
        .map(|&(c0, c1)| -> Result<String> {
            let params = PnesParams::from_c0_c1(c0, c1)?;
            let state = pnes(params, cutoff)?;
            let v = scan_points(&state, &PNES_ROWS, &points)?;
            let det = v.evidence.value("det").unwrap_or(f64::NAN);
            Ok(format!("{},{},{},{},{}\n", num(c0), num(c1), num(params.c2), num(det), v.detected))
        })
        .collect::<Result<_>>()?;
    Ok(format!("c0,c1,c2,submatrix_det,detected\n{}", rows.concat()))
}

fn emit(csv: &str, out: Option<&Path>) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, csv)?,
        None => print!("{csv}"),
    }
    Ok(())
}

/// Runs `check` and returns the verdict.
pub fn check(args: &CheckArgs) -> Result<Verdict> {
    let mut cfg = match &args.common.config {
        Some(p) => ScanConfig::from_file(p)?,
        None => ScanConfig::default(),
    };
    cfg.apply_common(&args.common);
    if args.criterion.is_some() {
        cfg.criterion = args.criterion;
    }
    cfg.validate()?;
    let state = read_state_file(&args.state)?;
    let criterion = match cfg.criterion.unwrap_or(CriterionName::SrurMarginal) {
        CriterionName::SrurMarginal => Criterion::MarginalSrur {
            level: cfg.j,
            channel: cfg.channel()?,
        },
        CriterionName::SrurFull => Criterion::FullSrur {
            level: cfg.j,
            rows: args.rows.clone(),
        },
        CriterionName::Entropic => Criterion::Entropic,
        CriterionName::Simon => Criterion::Simon,
        CriterionName::Duan => Criterion::Duan,
    };
    if args.rows.is_some() && !matches!(criterion, Criterion::FullSrur { .. }) {
        return Err(Error::InvalidParameter("--rows applies to srur-full only".into()));
    }
    crate::criteria::scan_local_params(&state, &criterion, &cfg.local_grid())
}

/// Parses `args` and runs; returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let outcome = match &cli.command {
        Command::ScanCat(a) => ScanConfig::from_scan_args(a)
            .and_then(|c| scan_cat_csv(&c).and_then(|csv| emit(&csv, c.out.as_deref())))
            .map(|_| 0),
        Command::ScanBns(a) => ScanConfig::from_scan_args(a)
            .and_then(|c| scan_bns_csv(&c).and_then(|csv| emit(&csv, c.out.as_deref())))
            .map(|_| 0),
        Command::ScanPnes(a) => ScanConfig::from_scan_args(a)
            .and_then(|c| scan_pnes_csv(&c).and_then(|csv| emit(&csv, c.out.as_deref())))
            .map(|_| 0),
        Command::Check(a) => check(a).map(|v| {
            print!("{v}");
            i32::from(v.detected)
        }),
    };
    match outcome {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn range_values() {
        assert_eq!(Range::new(0.0, 1.0, 3).values(), vec![0.0, 0.5, 1.0]);
        assert_eq!(Range::new(0.3, 0.3, 1).values(), vec![0.3]);
        assert!(Range::new(1.0, 0.0, 3).validate("x").is_err());
        assert!(Range::new(0.0, 1.0, 0).validate("x").is_err());
    }

    #[test]
    fn config_merging() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("cfg.json");
        std::fs::write(&path, r#"{"alpha": {"min": 0.5, "max": 1.0, "steps": 2}, "j": 1.5, "channel": "xp-pm"}"#).unwrap();
        let args = ScanArgs {
            common: CommonArgs {
                config: Some(path.clone()),
                j: Some(1.0),
                ..CommonArgs::default()
            },
            cutoff: Some(12),
            out: None,
        };
        let cfg = ScanConfig::from_scan_args(&args).unwrap();
        assert_eq!(cfg.alpha, Range::new(0.5, 1.0, 2));
        assert_eq!(cfg.j, 1.0);
        assert_eq!(cfg.channel().unwrap(), Channel::XpPm);
        assert_eq!(cfg.cutoff, Some(12));
        std::fs::write(&path, r#"{"alpha_max": 3}"#).unwrap();
        assert!(ScanConfig::from_file(&path).is_err());
    }

    #[test]
    fn invalid_level_rejected() {
        let cfg = ScanConfig {
            j: 2.0,
            ..ScanConfig::default()
        };
        assert!(cfg.validate().is_err());
        let cfg = ScanConfig {
            j: 0.5,
            ..ScanConfig::default()
        };
        assert!(scan_bns_csv(&cfg).is_err());
    }

    #[test]
    fn small_cat_scan() {
        let cfg = ScanConfig {
            alpha: Range::new(0.3, 1.0, 2),
            p: Range::new(0.5, 1.0, 2),
            ..ScanConfig::default()
        };
        let csv = scan_cat_csv(&cfg).unwrap();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines.len(), 5);
        assert!(lines[1].starts_with("3.00000000e-1,5.00000000e-1,"));
        assert!(lines.iter().skip(1).all(|l| l.contains(",true,")));
        assert_eq!(csv, scan_cat_csv(&cfg).unwrap());
    }
}
