//! Subcommand execution: merge flags over the config file, run, emit.

use std::f64::consts::FRAC_PI_2;
use std::fs;
use std::io::Write;
use std::path::PathBuf;

use charged_drop::charges::{self, uniformity_stats, validate, OptimizeOptions, UniformityStats, Violation};
use charged_drop::regime::{self, classify, ClassifierConstants, RegimeCell, SweepGrid};
use charged_drop::two_charge::{minimize, TwoChargeConfig, TwoChargeSolution};
use charged_drop::unduloid::{sample_profile, sample_profile_between, write_profile_csv, CaseKind, ProfileSample};
use rayon::prelude::*;
use serde::Serialize;

use crate::args::{
    BoundaryArgs, ChargesCommand, Cli, Command, ConvergeArgs, Format, MapArgs, NondimArgs, OptimizeArgs, PlotMode,
    RegimeCommand, SolveArgs, SweepArgs, TwoCommand,
};
use crate::config::{OneOrMany, RunConfig};
use crate::nondim::{nondimensionalize, PhysicalParams};
use crate::plot::{emit_plot, PlotKind, Series};
use crate::{CliError, OUT_DIR_ENV};

type Result<T> = std::result::Result<T, CliError>;

struct Context<'a> {
    format: Option<Format>,
    plot: bool,
    out_dir: PathBuf,
    pool: rayon::ThreadPool,
    out: &'a mut dyn Write,
    err: &'a mut dyn Write,
}

impl Context<'_> {
    /// Creates the output directory and checks that it accepts files.
    fn prepare_out_dir(&self) -> Result<()> {
        let dir = &self.out_dir;
        fs::create_dir_all(dir)
            .map_err(|e| CliError::Usage(format!("cannot create output directory {}: {e}", dir.display())))?;
        let probe = dir.join(".charged-drop-write-check");
        fs::write(&probe, b"")
            .and_then(|_| fs::remove_file(&probe))
            .map_err(|e| CliError::Usage(format!("output directory {} is not writable: {e}", dir.display())))
    }

    fn write_file(&mut self, name: &str, bytes: &[u8]) -> Result<PathBuf> {
        let path = self.out_dir.join(name);
        fs::write(&path, bytes)?;
        writeln!(self.err, "wrote {}", path.display())?;
        Ok(path)
    }

    fn plot(&mut self, kind: PlotKind, name: &str, series: &[Series]) -> Result<()> {
        let path = self.out_dir.join(name);
        emit_plot(kind, series, &path)?;
        writeln!(self.err, "wrote {}", path.display())?;
        Ok(())
    }

    fn table_format(&self) -> Format {
        self.format.unwrap_or(Format::Csv)
    }

    fn record_format(&self) -> Format {
        self.format.unwrap_or(Format::Json)
    }

    fn par<T, R, F>(&self, items: &[T], f: F) -> Result<Vec<R>>
    where
        T: Sync,
        R: Send,
        F: Fn(&T) -> Result<R> + Sync + Send,
    {
        self.pool.install(|| items.par_iter().map(f).collect())
    }
}

pub(crate) fn execute(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<()> {
    let cfg = match &cli.config {
        Some(p) => RunConfig::load(p)?,
        None => RunConfig::default(),
    };
    let out_dir = std::env::var_os(OUT_DIR_ENV)
        .filter(|v| !v.is_empty())
        .map(PathBuf::from)
        .or(cli.out_dir.clone())
        .or(cfg.output.out_dir.clone())
        .unwrap_or_else(|| PathBuf::from("."));
    let threads = cli.threads.or(cfg.output.threads).unwrap_or(0);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| CliError::Usage(format!("cannot start {threads} threads: {e}")))?;
    let mut ctx = Context {
        format: cli.format.or(cfg.output.format),
        plot: cli.plot.or(cfg.output.plot) == Some(PlotMode::Svg),
        out_dir,
        pool,
        out,
        err,
    };
    match cli.command {
        Command::Two(TwoCommand::Solve(a)) => two_solve(&mut ctx, &cfg, a),
        Command::Two(TwoCommand::Sweep(a)) => two_sweep(&mut ctx, &cfg, a),
        Command::Two(TwoCommand::Boundary(a)) => two_boundary(&mut ctx, &cfg, a),
        Command::Charges(ChargesCommand::Optimize(a)) => charges_optimize(&mut ctx, &cfg, a),
        Command::Charges(ChargesCommand::Converge(a)) => charges_converge(&mut ctx, &cfg, a),
        Command::Regime(RegimeCommand::Map(a)) => regime_map(&mut ctx, &cfg, a),
        Command::Nondim(a) => nondim(&mut ctx, &cfg, a),
    }
}

fn need<T>(v: Option<T>, flag: &str) -> Result<T> {
    v.ok_or_else(|| CliError::Usage(format!("missing --{flag} (flag or config file)")))
}

fn single<T: Clone>(flag: Option<T>, file: Option<&OneOrMany<T>>, name: &str) -> Result<T> {
    if let Some(v) = flag {
        return Ok(v);
    }
    match file.map(OneOrMany::to_vec).as_deref() {
        Some([v]) => Ok(v.clone()),
        Some(_) => Err(CliError::Usage(format!("`{name}` must be a single value for this command"))),
        None => need(None, name),
    }
}

fn list<T: Clone>(flag: Vec<T>, file: Option<&OneOrMany<T>>, name: &str) -> Result<Vec<T>> {
    let v = if flag.is_empty() { file.map(OneOrMany::to_vec).unwrap_or_default() } else { flag };
    if v.is_empty() {
        return Err(CliError::Usage(format!("missing --{name} (flag or config file)")));
    }
    Ok(v)
}

fn positive(v: f64, name: &str) -> Result<f64> {
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(CliError::Domain(format!("{name} must be positive and finite, got {v}")))
    }
}

fn sorted_unique(mut v: Vec<f64>) -> Vec<f64> {
    v.sort_by(f64::total_cmp);
    v.dedup();
    v
}

fn json_bytes<T: Serialize + ?Sized>(v: &T) -> Result<Vec<u8>> {
    let mut s = serde_json::to_string_pretty(v).map_err(|e| CliError::Domain(e.to_string()))?;
    s.push('\n');
    Ok(s.into_bytes())
}

fn num(v: f64) -> String {
    format!("{v:.16e}")
}

const SOLUTION_HEADER: &str =
    "eps,gamma,exists,case,h_star,c_star,L_star,E_perimeter,E_coulomb,E_total,h_asym,L_asym,E_asym";

fn solution_row(s: &TwoChargeSolution) -> String {
    let nums = [
        s.h_star,
        s.c_star,
        s.l_star,
        s.energy.perimeter,
        s.energy.coulomb,
        s.energy.total,
        s.asymptotic.h,
        s.asymptotic.l,
        s.asymptotic.e,
    ];
    let tail: Vec<String> = nums.iter().map(|&v| num(v)).collect();
    format!("{},{},{},{},{}", num(s.eps), num(s.gamma), s.exists, s.kind.as_str(), tail.join(","))
}

fn solutions_csv(sols: &[TwoChargeSolution]) -> Vec<u8> {
    let mut s = String::from(SOLUTION_HEADER);
    s.push('\n');
    for sol in sols {
        s.push_str(&solution_row(sol));
        s.push('\n');
    }
    s.into_bytes()
}

/// The drop's free surface: between the two contacts for case 1, one full
/// period of the generating unduloid otherwise.
fn solution_profile(sol: &TwoChargeSolution, n: usize) -> Result<Vec<ProfileSample>> {
    let s = &sol.section;
    let samples = match s.case_kind {
        CaseKind::Case1 if s.t0 > FRAC_PI_2 => sample_profile_between(s.a, s.c, std::f64::consts::PI - s.t0, s.t0, n)?,
        _ => sample_profile(s.a, s.c, n)?,
    };
    Ok(samples)
}

fn two_solve(ctx: &mut Context, cfg: &RunConfig, a: SolveArgs) -> Result<()> {
    let eps = positive(single(a.eps, cfg.two_charge.eps.as_ref(), "eps")?, "eps")?;
    let gamma = positive(single(a.gamma, cfg.two_charge.gamma.as_ref(), "gamma")?, "gamma")?;
    let profile = a.profile.or(cfg.two_charge.profile);
    if profile.is_some() {
        ctx.prepare_out_dir()?;
    }
    let sol = minimize(eps, gamma)?;
    if !sol.exists {
        writeln!(ctx.err, "no classical minimizer at ε = {eps}, γ = {gamma}: two separate balls have lower energy")?;
    } else if sol.locally_convex == Some(false) {
        writeln!(ctx.err, "warning: energy is not locally convex at the reported minimizer")?;
    }
    let format = ctx.record_format();
    let bytes = match format {
        Format::Json => json_bytes(&sol)?,
        Format::Csv => solutions_csv(std::slice::from_ref(&sol)),
    };
    ctx.out.write_all(&bytes)?;
    if let Some(n) = profile {
        let samples = solution_profile(&sol, n)?;
        let bytes = match format {
            Format::Json => json_bytes(&samples)?,
            Format::Csv => {
                let mut buf = Vec::new();
                write_profile_csv(&mut buf, &samples)?;
                buf
            }
        };
        ctx.write_file(ext("profile", format), &bytes)?;
        if ctx.plot {
            let pts = samples.iter().map(|p| (p.x, p.z)).collect();
            ctx.plot(PlotKind::Profile, "profile.svg", &[Series::new("profile", pts)])?;
        }
    }
    Ok(())
}

fn ext(stem: &str, format: Format) -> &'static str {
    // the handful of file names used by the commands
    match (stem, format) {
        ("profile", Format::Csv) => "profile.csv",
        ("profile", Format::Json) => "profile.json",
        ("two_sweep", Format::Csv) => "two_sweep.csv",
        ("two_sweep", Format::Json) => "two_sweep.json",
        ("boundary", Format::Csv) => "boundary.csv",
        ("boundary", Format::Json) => "boundary.json",
        ("uniformity", Format::Csv) => "uniformity.csv",
        ("uniformity", Format::Json) => "uniformity.json",
        ("regime_map", Format::Csv) => "regime_map.csv",
        ("regime_map", Format::Json) => "regime_map.json",
        _ => unreachable!("unknown output stem {stem}"),
    }
}

fn two_sweep(ctx: &mut Context, cfg: &RunConfig, a: SweepArgs) -> Result<()> {
    let eps = sorted_unique(list(a.eps, cfg.two_charge.eps.as_ref(), "eps")?);
    let gamma = sorted_unique(list(a.gamma, cfg.two_charge.gamma.as_ref(), "gamma")?);
    for &e in &eps {
        positive(e, "eps")?;
    }
    for &g in &gamma {
        positive(g, "gamma")?;
    }
    ctx.prepare_out_dir()?;
    let grid: Vec<(f64, f64)> = eps.iter().flat_map(|&e| gamma.iter().map(move |&g| (e, g))).collect();
    let sols = ctx.par(&grid, |&(e, g)| Ok(minimize(e, g)?))?;
    let format = ctx.table_format();
    let bytes = match format {
        Format::Json => json_bytes(&sols)?,
        Format::Csv => solutions_csv(&sols),
    };
    ctx.write_file(ext("two_sweep", format), &bytes)?;
    Ok(())
}

fn two_boundary(ctx: &mut Context, cfg: &RunConfig, a: BoundaryArgs) -> Result<()> {
    let eps = list(a.eps, cfg.two_charge.eps.as_ref(), "eps")?;
    for &e in &eps {
        positive(e, "eps")?;
    }
    ctx.prepare_out_dir()?;
    let config = TwoChargeConfig::default();
    let points = ctx.par(&eps, |&e| Ok(regime::boundary_point(e, &config)?))?;
    let format = ctx.table_format();
    let bytes = match format {
        Format::Json => json_bytes(&points)?,
        Format::Csv => {
            let mut buf = Vec::new();
            regime::write_boundary_csv(&mut buf, &points)?;
            buf
        }
    };
    ctx.write_file(ext("boundary", format), &bytes)?;
    if ctx.plot {
        let pts = points.iter().map(|p| (p.eps, p.gamma_c_eps)).collect();
        ctx.plot(PlotKind::BoundaryCurve, "boundary.svg", &[Series::new("γ_c · ε", pts)])?;
    }
    Ok(())
}

struct ChargeParams {
    eps: f64,
    radius: f64,
    seed: u64,
    opts: OptimizeOptions,
}

fn charge_params(cfg: &RunConfig, o: &crate::args::ChargeOptions) -> Result<ChargeParams> {
    let c = &cfg.charges;
    let defaults = OptimizeOptions::default();
    let eps = positive(need(o.eps.or(c.eps), "eps")?, "eps")?;
    let radius = positive(o.radius.or(c.radius).unwrap_or(1.0), "R")?;
    let tol = positive(o.tol.or(c.tol).unwrap_or(defaults.tol), "tol")?;
    let restarts = o.restarts.or(c.restarts).unwrap_or(defaults.restarts);
    let seed = o.seed.or(c.seed).unwrap_or(0);
    Ok(ChargeParams { eps, radius, seed, opts: OptimizeOptions { restarts, tol, ..defaults } })
}

fn charges_optimize(ctx: &mut Context, cfg: &RunConfig, a: OptimizeArgs) -> Result<()> {
    let n = single(a.n, cfg.charges.n.as_ref(), "n")?;
    let p = charge_params(cfg, &a.opts)?;
    let rep = charges::optimize_report(n, p.eps, p.radius, p.seed, &p.opts)?;
    writeln!(
        ctx.err,
        "riesz sum {:.12e}, projected gradient {:.3e}, start {} of {}",
        rep.riesz_sum,
        rep.projected_gradient,
        rep.best_start + 1,
        p.opts.restarts
    )?;
    if rep.projected_gradient > p.opts.tol {
        writeln!(ctx.err, "warning: projected gradient above tolerance {:e}", p.opts.tol)?;
    }
    for v in validate(&rep.config) {
        if matches!(v, Violation::Overlap { .. }) {
            writeln!(ctx.err, "warning: {v}")?;
        }
    }
    let bytes = match ctx.record_format() {
        Format::Json => json_bytes(&rep.config)?,
        Format::Csv => {
            let mut s = String::from("x,y,z\n");
            for c in &rep.config.centers {
                s.push_str(&format!("{},{},{}\n", num(c[0]), num(c[1]), num(c[2])));
            }
            s.into_bytes()
        }
    };
    ctx.out.write_all(&bytes)?;
    Ok(())
}

#[derive(Serialize)]
struct UniformityRow {
    n: usize,
    #[serde(flatten)]
    stats: UniformityStats,
}

fn charges_converge(ctx: &mut Context, cfg: &RunConfig, a: ConvergeArgs) -> Result<()> {
    let mut ns = list(a.n, cfg.charges.n.as_ref(), "n")?;
    ns.sort_unstable();
    ns.dedup();
    let p = charge_params(cfg, &a.opts)?;
    let shell_delta = a.shell_delta.or(cfg.charges.shell_delta).unwrap_or(1e-9);
    if !(shell_delta >= 0.0) {
        return Err(CliError::Domain(format!("shell_delta must be non-negative, got {shell_delta}")));
    }
    ctx.prepare_out_dir()?;
    let rows = ctx.par(&ns, |&n| {
        let config = charges::optimize(n, p.eps, p.radius, p.seed, &p.opts)?;
        Ok((n, uniformity_stats(&config, shell_delta)?))
    })?;
    let format = ctx.table_format();
    let bytes = match format {
        Format::Json => {
            let v: Vec<UniformityRow> = rows.iter().map(|&(n, stats)| UniformityRow { n, stats }).collect();
            json_bytes(&v)?
        }
        Format::Csv => {
            let mut buf = Vec::new();
            charges::write_uniformity_csv(&mut buf, &rows)?;
            buf
        }
    };
    ctx.write_file(ext("uniformity", format), &bytes)?;
    if ctx.plot {
        let gap = rows.iter().map(|(n, s)| (*n as f64, s.riesz_gap)).collect();
        let cap = rows.iter().map(|(n, s)| (*n as f64, s.cap_discrepancy)).collect();
        ctx.plot(
            PlotKind::Uniformity,
            "uniformity.svg",
            &[Series::new("riesz gap |F_N − 1|", gap), Series::new("cap discrepancy", cap)],
        )?;
    }
    Ok(())
}

fn regime_map(ctx: &mut Context, cfg: &RunConfig, a: MapArgs) -> Result<()> {
    let r = &cfg.regime;
    let grid = SweepGrid {
        eps: list(a.eps, r.eps.as_ref(), "eps")?,
        gamma: list(a.gamma, r.gamma.as_ref(), "gamma")?,
        n: list(a.n, r.n.as_ref(), "n")?,
    };
    for &e in &grid.eps {
        positive(e, "eps")?;
    }
    for &g in &grid.gamma {
        positive(g, "gamma")?;
    }
    if grid.n.contains(&0) {
        return Err(CliError::Domain("n must be at least 1".into()));
    }
    let d = ClassifierConstants::default();
    let constants = ClassifierConstants {
        c_threshold: a.c_threshold.or(r.c_threshold).unwrap_or(d.c_threshold),
        gamma0: a.gamma0.or(r.gamma0).unwrap_or(d.gamma0),
        delta0: a.delta0.or(r.delta0).unwrap_or(d.delta0),
    };
    constants.validate()?;
    ctx.prepare_out_dir()?;
    let points = grid.points();
    let cells: Vec<RegimeCell> = ctx.par(&points, |&(e, g, n)| Ok(classify(e, g, n, &constants)))?;
    let format = ctx.table_format();
    let bytes = match format {
        Format::Json => json_bytes(&cells)?,
        Format::Csv => {
            let mut buf = Vec::new();
            regime::write_cells_csv(&mut buf, &cells)?;
            buf
        }
    };
    ctx.write_file(ext("regime_map", format), &bytes)?;
    Ok(())
}

fn nondim(ctx: &mut Context, cfg: &RunConfig, a: NondimArgs) -> Result<()> {
    let c = &cfg.nondim;
    let p = PhysicalParams {
        r0: need(a.r0.or(c.r0), "r0")?,
        r_sigma: need(a.rsigma.or(c.rsigma), "rsigma")?,
        r_b: need(a.rb.or(c.rb), "rb")?,
    };
    let v = nondimensionalize(p)?;
    let bytes = match ctx.record_format() {
        Format::Json => json_bytes(&v)?,
        Format::Csv => format!("rho,lambda,gamma\n{},{},{}\n", num(v.rho), num(v.lambda), num(v.gamma)).into_bytes(),
    };
    ctx.out.write_all(&bytes)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_value_rules() {
        assert_eq!(single(Some(2.0), Some(&OneOrMany::Many(vec![1.0, 3.0])), "eps").unwrap(), 2.0);
        assert_eq!(single(None, Some(&OneOrMany::Many(vec![1.0])), "eps").unwrap(), 1.0);
        assert!(matches!(single::<f64>(None, Some(&OneOrMany::Many(vec![1.0, 3.0])), "eps"), Err(CliError::Usage(_))));
        assert!(matches!(single::<f64>(None, None, "eps"), Err(CliError::Usage(_))));
    }

    #[test]
    fn lists_prefer_flags() {
        assert_eq!(list(vec![1, 2], Some(&OneOrMany::One(5)), "n").unwrap(), vec![1, 2]);
        assert_eq!(list(vec![], Some(&OneOrMany::One(5)), "n").unwrap(), vec![5]);
        assert!(list::<usize>(vec![], Some(&OneOrMany::Many(vec![])), "n").is_err());
    }

    #[test]
    fn csv_header_matches_json_keys() {
        let sol = minimize(1e-2, 100.0).unwrap();
        let v = serde_json::to_value(&sol).unwrap();
        for key in SOLUTION_HEADER.split(',') {
            assert!(v.get(key).is_some(), "{key}");
        }
        assert_eq!(v.as_object().unwrap().len(), SOLUTION_HEADER.split(',').count());
    }
}
