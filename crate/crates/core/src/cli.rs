//! The `implicit-series` command line.
//!
//! Exit status is 0 on success, 1 when a solver rejects its input (domain,
//! condition, convergence, failed reproduction check) and 2 on usage or
//! expression syntax errors. Every error is a single line
//! `error[<code>]: <message>` on stderr.

use std::ffi::OsString;
use std::io::Write;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde_json::json;

use crate::analytic::{self, AnalyticProblem};
use crate::error::{Error, Result};
use crate::expr;
use crate::implicit::{self, ImplicitProblem, SolveOptions, Variant};
use crate::lagrange::{self, RevertibleSeries};
use crate::rat::Rat;
use crate::reproduce;
use crate::series::{serial, MultiIndex, Vars, WSeries, ZWSeries};
use crate::universal;

#[derive(Debug, Parser)]
#[command(name = "implicit-series", version, about = "Exact power-series solutions of z = G(z, w)")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve z = G(z, w), or F(z, w) = 0 via G = z − γ·F.
    Solve(SolveArgs),
    /// Invert f(z) = w in one variable.
    Invert(InvertArgs),
    /// Tabulate plane-forest counts by type.
    Universal(UniversalArgs),
    /// Check a solution numerically at concrete points w.
    Analytic(AnalyticArgs),
    /// Regenerate the worked examples and compare with the tabulated values.
    Reproduce(ReproduceArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    /// One line per term: `w^[α] z^k : num/den`.
    Text,
    /// JSON Lines series records.
    Records,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum VariantArg {
    Finite,
    Integer,
    Contraction,
    Recurrence,
}

impl From<VariantArg> for Variant {
    fn from(v: VariantArg) -> Variant {
        match v {
            VariantArg::Finite => Variant::Finite,
            VariantArg::Integer => Variant::Integer,
            VariantArg::Contraction => Variant::Contraction,
            VariantArg::Recurrence => Variant::Recurrence,
        }
    }
}

#[derive(Debug, Args)]
pub struct SeriesOpts {
    /// Comma-separated w-variable names.
    #[arg(long, default_value = "w", value_delimiter = ',')]
    pub vars: Vec<String>,
    /// Total degree in the w-variables.
    #[arg(long, default_value_t = 8)]
    pub order: u32,
    /// Degree in z kept while elaborating expressions [default: order; 40 for analytic].
    #[arg(long)]
    pub zorder: Option<u32>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
}

impl SeriesOpts {
    fn vars(&self) -> Result<Vars> {
        let mut seen = std::collections::BTreeSet::new();
        for v in &self.vars {
            let ok = v.chars().next().is_some_and(|c| c.is_ascii_alphabetic())
                && v.chars().all(|c| c.is_ascii_alphanumeric() || c == '_');
            if !ok || v == "z" || expr::Builtin::from_name(v).is_some() || !seen.insert(v) {
                return Err(usage(format!("invalid w-variable name {v:?}")));
            }
        }
        Ok(Vars::new(self.vars.iter().cloned()))
    }

    fn zorder(&self) -> u32 {
        self.zorder.unwrap_or(self.order)
    }
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    /// G(z, w) with G(0, 0) = 0.
    #[arg(long = "G", conflicts_with_all = ["f", "gamma"], required_unless_present = "f")]
    pub g: Option<String>,
    /// F(z, w) with F(0, 0) = 0; needs --gamma.
    #[arg(long = "F", requires = "gamma")]
    pub f: Option<String>,
    /// γ(z, w) with γ(0, 0) ≠ 0, giving G = z − γ·F.
    #[arg(long)]
    pub gamma: Option<String>,
    /// Print H(φ(w), w) instead of φ.
    #[arg(long = "H")]
    pub h: Option<String>,
    #[arg(long, value_enum, default_value_t = VariantArg::Finite)]
    pub variant: VariantArg,
    /// Divide out (dG/dz)(0,0) before the finite sums.
    #[arg(long)]
    pub normalize: bool,
    /// Decimal exponent of the contraction stopping tolerance.
    #[arg(long, default_value_t = -12, allow_hyphen_values = true)]
    pub tol_exp: i32,
    #[command(flatten)]
    pub series: SeriesOpts,
}

#[derive(Debug, Args)]
pub struct InvertArgs {
    /// f(z) with f(0) = 0 and f'(0) ≠ 0.
    #[arg(long = "f")]
    pub f: String,
    /// Print h(f^{-1}(w)) instead of f^{-1}(w).
    #[arg(long = "H")]
    pub h: Option<String>,
    #[arg(long, default_value_t = 8)]
    pub order: u32,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct UniversalArgs {
    /// Number of trees in the forest.
    #[arg(long, default_value_t = 1)]
    pub ell: u32,
    /// Largest vertex count tabulated.
    #[arg(long, default_value_t = 5)]
    pub vertices: u32,
    /// Count by explicit enumeration instead of the closed form.
    #[arg(long)]
    pub enumerate: bool,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct AnalyticArgs {
    /// G(z, w) with G(0, 0) = 0.
    #[arg(long = "G")]
    pub g: String,
    /// Test function H(z, w) for the contour integral.
    #[arg(long = "H", default_value = "z")]
    pub h: String,
    /// Point w, one complex number per w-variable, e.g. `0.1` or `0.1+0.05i`;
    /// repeat for several points.
    #[arg(long = "at", required = true, value_delimiter = ',', action = clap::ArgAction::Append, allow_hyphen_values = true)]
    pub at: Vec<String>,
    /// Contour radius [default: chosen automatically].
    #[arg(long)]
    pub rho: Option<f64>,
    #[arg(long, default_value_t = analytic::DEFAULT_QPOINTS)]
    pub qpoints: usize,
    /// Number of series terms summed for comparison.
    #[arg(long, default_value_t = 40)]
    pub terms: usize,
    #[command(flatten)]
    pub series: SeriesOpts,
}

#[derive(Debug, Args)]
pub struct ReproduceArgs {
    /// Order of the coefficient sign check.
    #[arg(long, default_value_t = 30)]
    pub nonneg_order: u32,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
}

fn usage(msg: String) -> Error {
    Error::Usage(msg)
}

/// Exit status for a library error.
pub fn exit_code(e: &Error) -> i32 {
    match e.root() {
        Error::Syntax { .. } | Error::UnknownIdentifier { .. } | Error::Usage(_) => 2,
        _ => 1,
    }
}

fn error_line(e: &Error) -> String {
    format!("error[{}]: {}", e.code(), e.to_string().replace('\n', " "))
}

/// Parses `args` (program name first), runs the command and returns the
/// exit status.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(out, "{e}");
                return 0;
            }
            let text = e.to_string();
            let first = text.lines().next().unwrap_or("invalid arguments");
            let _ = writeln!(err, "error[usage]: {}", first.trim_start_matches("error: "));
            return 2;
        }
    };
    match execute(&cli.command) {
        Ok((text, status)) => {
            let _ = out.write_all(text.as_bytes());
            status
        }
        Err(e) => {
            let _ = writeln!(err, "{}", error_line(&e));
            exit_code(&e)
        }
    }
}

/// Runs a parsed command, returning its output and exit status.
pub fn execute(command: &Command) -> Result<(String, i32)> {
    match command {
        Command::Solve(a) => solve(a).map(|s| (s, 0)),
        Command::Invert(a) => invert(a).map(|s| (s, 0)),
        Command::Universal(a) => universal_table(a).map(|s| (s, 0)),
        Command::Analytic(a) => analytic_check(a).map(|s| (s, 0)),
        Command::Reproduce(a) => {
            let report = reproduce::reproduce_all(a.nonneg_order)?;
            let status = if report.all_passed() { 0 } else { 1 };
            Ok((render_reproduce(&report, a.format), status))
        }
    }
}

fn solve(a: &SolveArgs) -> Result<String> {
    let opts = &a.series;
    let vars = opts.vars()?;
    let (zo, n) = (opts.zorder(), opts.order);
    let p = match (&a.g, &a.f, &a.gamma) {
        (Some(g), None, None) => ImplicitProblem::new(expr::series(g, &vars, zo, n)?)?,
        (None, Some(f), Some(gamma)) => {
            let f = expr::series(f, &vars, zo, n)?;
            let gamma = expr::series(gamma, &vars, zo, n)?;
            ImplicitProblem::from_implicit(&f, &gamma)?
        }
        _ => return Err(usage("give either --G or both --F and --gamma".into())),
    };
    let h = a.h.as_deref().map(|h| expr::series(h, &vars, zo.max(n), n)).transpose()?;
    let solve_opts = SolveOptions {
        variant: a.variant.into(),
        normalize: a.normalize,
        h,
        tol_exp: a.tol_exp,
    };
    let report = implicit::solve(&p, &solve_opts)?;
    let series = report.h.as_ref().unwrap_or(&report.phi);
    let mut text = render_w(series, opts.format);
    if let (Some(num), Format::Text) = (&report.numeric, opts.format) {
        text.push_str(&format!(
            "# contraction sums: max |float - exact| = {:e} (tolerance 1e{})\n",
            num.max_deviation, num.tol_exp
        ));
    }
    Ok(text)
}

fn invert(a: &InvertArgs) -> Result<String> {
    let vars = Vars::w();
    let f = RevertibleSeries::new(&expr::series(&a.f, &vars, a.order, 0)?)?;
    let series = match &a.h {
        None => lagrange::revert(&f, a.order),
        Some(h) => lagrange::revert_compose(&f, &expr::series(h, &vars, a.order, 0)?, a.order)?,
    };
    Ok(render_w(&series, a.format))
}

fn universal_table(a: &UniversalArgs) -> Result<String> {
    let rows: Vec<(universal::ForestType, String)> = if a.enumerate {
        let mut rows = Vec::new();
        for v in 0..=a.vertices {
            for (t, c) in universal::enumerate_forests(a.ell, v)? {
                rows.push((t, c.to_string()));
            }
        }
        rows
    } else {
        if a.vertices > 40 {
            return Err(Error::Resource(format!("{} vertices is more than the table allows (40)", a.vertices)));
        }
        universal::universal_table(a.ell, a.vertices)
            .into_iter()
            .map(|(t, c)| (t, c.to_string()))
            .collect()
    };
    let mut out = String::new();
    match a.format {
        Format::Text => {
            for (t, c) in rows {
                out.push_str(&format!("{t} : {c}\n"));
            }
        }
        Format::Csv => {
            out.push_str("ell,k,count\n");
            for (t, c) in rows {
                let k: Vec<String> = t.k().iter().map(u32::to_string).collect();
                out.push_str(&format!("{},{},{c}\n", t.ell, k.join(";")));
            }
        }
        Format::Records => {
            for (t, c) in rows {
                out.push_str(&json!({"ell": t.ell, "k": t.k(), "count": c}).to_string());
                out.push('\n');
            }
        }
    }
    Ok(out)
}

fn parse_complex(s: &str) -> Result<Complex64> {
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    t.replace('j', "i")
        .parse::<Complex64>()
        .ok()
        .filter(|c| c.is_finite())
        .ok_or_else(|| usage(format!("not a complex number: {s:?}")))
}

fn analytic_check(a: &AnalyticArgs) -> Result<String> {
    let opts = &a.series;
    let vars = opts.vars()?;
    let zo = opts.zorder.unwrap_or(40);
    let g = expr::series(&a.g, &vars, zo, opts.order)?;
    let h = expr::series(&a.h, &vars, zo, opts.order)?;
    let values = a.at.iter().map(|s| parse_complex(s)).collect::<Result<Vec<_>>>()?;
    if values.len() % vars.len() != 0 {
        return Err(usage(format!(
            "--at needs {} complex components per point, got {}",
            vars.len(),
            values.len()
        )));
    }
    let mut rows = Vec::new();
    for w in values.chunks(vars.len()) {
        let p = match a.rho {
            Some(rho) => AnalyticProblem::new(&g, w.to_vec(), rho, a.qpoints, analytic::DEFAULT_ITER_TOL)?,
            None => AnalyticProblem::with_auto_radius(&g, w.to_vec(), a.qpoints, analytic::DEFAULT_ITER_TOL)?,
        };
        let rouche = analytic::check_rouche(&p);
        let fp = analytic::fixed_point_iterate(&p, Complex64::new(0.0, 0.0))?;
        let contour = analytic::contour_coefficients(&p, &h, a.terms)?;
        let series_sum: Complex64 = contour.terms.iter().sum();
        let h_at_fp = h.eval_complex(fp.value, w);
        rows.push((w.to_vec(), rouche, fp, contour.total, series_sum, h_at_fp));
    }
    let fmt_c = |c: Complex64| format!("{:.15e}{:+.15e}i", c.re, c.im);
    let mut out = String::new();
    match opts.format {
        Format::Text => {
            for (w, r, fp, total, sum, hfp) in &rows {
                let ws: Vec<String> = w.iter().map(|c| fmt_c(*c)).collect();
                out.push_str(&format!("w = ({})\n", ws.join(", ")));
                out.push_str(&format!("  rho = {}, margin = {:e}, rouche = {}\n", r.rho, r.min_margin, r.satisfied));
                out.push_str(&format!(
                    "  fixed point = {} ({} iterations, residual {:e})\n",
                    fmt_c(fp.value),
                    fp.iterations,
                    fp.residual
                ));
                out.push_str(&format!("  H at fixed point = {}\n", fmt_c(*hfp)));
                out.push_str(&format!("  contour integral = {}\n", fmt_c(*total)));
                out.push_str(&format!("  series terms m <= {} = {}\n", a.terms, fmt_c(*sum)));
                out.push_str(&format!(
                    "  max difference = {:e}\n",
                    (*hfp - total).norm().max((*hfp - sum).norm()).max((*total - sum).norm())
                ));
            }
        }
        Format::Csv => {
            out.push_str("point,rho,margin,fixed_re,fixed_im,contour_re,contour_im,series_re,series_im\n");
            for (i, (_, r, _, total, sum, hfp)) in rows.iter().enumerate() {
                out.push_str(&format!(
                    "{i},{},{:e},{:e},{:e},{:e},{:e},{:e},{:e}\n",
                    r.rho, r.min_margin, hfp.re, hfp.im, total.re, total.im, sum.re, sum.im
                ));
            }
        }
        Format::Records => {
            for (w, r, fp, total, sum, hfp) in &rows {
                let pair = |c: &Complex64| json!([c.re, c.im]);
                let rec = json!({
                    "w": w.iter().map(pair).collect::<Vec<_>>(),
                    "rho": r.rho,
                    "margin": r.min_margin,
                    "fixedPoint": pair(&fp.value),
                    "iterations": fp.iterations,
                    "hAtFixedPoint": pair(hfp),
                    "contour": pair(total),
                    "series": pair(sum),
                });
                out.push_str(&rec.to_string());
                out.push('\n');
            }
        }
    }
    Ok(out)
}

fn render_reproduce(report: &reproduce::ReproduceReport, format: Format) -> String {
    match format {
        Format::Text => report.to_string(),
        Format::Csv => {
            let mut out = String::from("check,status,detail\n");
            for c in &report.checks {
                let status = if c.passed { "PASS" } else { "FAIL" };
                out.push_str(&format!("{},{status},\"{}\"\n", c.name, c.detail.replace('"', "'")));
            }
            out
        }
        Format::Records => {
            let mut out = String::new();
            for c in &report.checks {
                out.push_str(&json!({"check": c.name, "passed": c.passed, "detail": c.detail}).to_string());
                out.push('\n');
            }
            for (name, value) in &report.observations {
                out.push_str(&json!({"observation": name, "value": value}).to_string());
                out.push('\n');
            }
            out
        }
    }
}

fn term_line(alpha: &MultiIndex, k: u32, c: &Rat) -> String {
    format!("w^{alpha} z^{k} : {}/{}", c.numer(), c.denom())
}

/// Renders a w-series in the chosen format. Text and csv list the nonzero
/// terms in graded-lex order of the exponent.
pub fn render_w(s: &WSeries, format: Format) -> String {
    match format {
        Format::Records => serial::write_w(s),
        _ => render_zw(&ZWSeries::from_w(s, 0), format),
    }
}

/// Renders a series in `z` and `w`; terms are sorted by `(α, k)`.
pub fn render_zw(s: &ZWSeries, format: Format) -> String {
    let mut terms: Vec<(&MultiIndex, u32, &Rat)> =
        s.terms().filter(|(_, _, c)| !c.is_zero()).map(|(k, a, c)| (a, k, c)).collect();
    terms.sort_by(|x, y| (x.0, x.1).cmp(&(y.0, y.1)));
    let mut out = String::new();
    match format {
        Format::Text => {
            for (a, k, c) in terms {
                out.push_str(&term_line(a, k, c));
                out.push('\n');
            }
        }
        Format::Csv => {
            out.push_str("z,");
            for v in s.vars().names() {
                out.push_str(v);
                out.push(',');
            }
            out.push_str("num,den\n");
            for (a, k, c) in terms {
                out.push_str(&format!("{k},"));
                for e in a.exponents() {
                    out.push_str(&format!("{e},"));
                }
                out.push_str(&format!("{},{}\n", c.numer(), c.denom()));
            }
        }
        Format::Records => out = serial::write_zw(s),
    }
    out
}
