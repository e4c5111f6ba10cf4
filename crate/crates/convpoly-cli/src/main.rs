//! Command-line front end for the convolution-polynomial toolkit.
//!
//! Exit status: 0 on success / all checks PASS, 1 when a verification
//! reports FAIL, 2 on usage errors (bad flags, unknown family names,
//! invalid orders).

use std::process::ExitCode;
use std::str::FromStr;

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use num_traits::{One, Zero};

use convpoly::asympt;
use convpoly::family::{self, Family};
use convpoly::rng::SplitMix64;
use convpoly::triangle::{self, ConvolutionTriangle};
use convpoly::{Rat, Series};

#[derive(Parser)]
#[command(
    name = "convpoly",
    about = "Convolution polynomial families: triangles, identities, iteration, reversion, asymptotics",
    version
)]
struct Cli {
    /// Output format for tabular data
    #[arg(long, global = true, value_enum, default_value_t = Format::Tsv)]
    format: Format,

    /// Seed for randomized verification
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Format {
    Tsv,
    Json,
}

/// Family source for commands where it is optional (rothe and lah need
/// no family; duality and inverse default to the Stirling pair).
#[derive(Args, Clone)]
#[command(group(ArgGroup::new("optsource").args(["family", "f"])))]
struct OptionalSource {
    /// Catalog family name
    #[arg(long)]
    family: Option<String>,

    /// Exponential coefficients f1,f2,...
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    f: Option<Vec<String>>,

    /// Parameter for catalan-t / s-step
    #[arg(long, allow_hyphen_values = true)]
    t: Option<String>,
}

impl OptionalSource {
    fn to_source(&self) -> Option<Source> {
        if self.family.is_none() && self.f.is_none() {
            None
        } else {
            Some(Source {
                family: self.family.clone(),
                f: self.f.clone(),
                t: self.t.clone(),
            })
        }
    }
}

/// Family source: a catalog name (with optional parameter) or an explicit
/// list of exponential coefficients f1,f2,...
#[derive(Args, Clone)]
#[command(group(ArgGroup::new("source").required(true).args(["family", "f"])))]
struct Source {
    /// Catalog family name (exp, binomial, rising, catalan-t, s-step,
    /// tree, tree-poly, idempotent, bell, arcsin, central-factorial,
    /// stirling-poly, exp-minus-one, log-geometric, lah)
    #[arg(long)]
    family: Option<String>,

    /// Exponential coefficients f1,f2,... of f(z) = f1 z + f2 z^2/2! + ...
    /// (rationals "p/q"; unspecified tail is zero)
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    f: Option<Vec<String>>,

    /// Parameter for catalan-t (the t in B_t) and s-step (the step)
    #[arg(long, allow_hyphen_values = true)]
    t: Option<String>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Print the convolution matrix f_{nk} = n! [x^k] F_n(x), rows 1..N
    Triangle {
        #[command(flatten)]
        source: Source,
        #[arg(short = 'N', value_parser = clap::value_parser!(u32).range(1..))]
        order: u32,
    },
    /// Print family rows (same numbers as `triangle`, via the polynomials)
    Family {
        #[command(flatten)]
        source: Source,
        #[arg(short = 'N', value_parser = clap::value_parser!(u32).range(1..))]
        order: u32,
    },
    /// Compose two sources and print the triangle of g(f(z))
    /// (the matrix product F G)
    Compose {
        #[command(flatten)]
        source: Source,
        /// Outer catalog family g
        #[arg(long)]
        family2: Option<String>,
        /// Outer explicit coefficients g1,g2,...
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        f2: Option<Vec<String>>,
        /// Parameter for the outer family
        #[arg(long, allow_hyphen_values = true)]
        t2: Option<String>,
        #[arg(short = 'N', value_parser = clap::value_parser!(u32).range(1..))]
        order: u32,
    },
    /// Print the iterate `f^[q]` (ordinary coefficients 0..N)
    Iterate {
        #[command(flatten)]
        source: Source,
        /// Iteration parameter (rational, e.g. 1/2 or -1)
        #[arg(short = 'q', allow_hyphen_values = true)]
        q: String,
        #[arg(short = 'N', value_parser = clap::value_parser!(u32).range(1..))]
        order: u32,
        /// Re-compose the iterate and verify it returns f (PASS/FAIL)
        #[arg(long)]
        check: bool,
    },
    /// Print the compositional inverse g with g(f(z)) = z
    Revert {
        #[command(flatten)]
        source: Source,
        #[arg(short = 'N', value_parser = clap::value_parser!(u32).range(1..))]
        order: u32,
        /// Verify g(f(z)) = z (PASS/FAIL)
        #[arg(long)]
        check: bool,
    },
    /// Verify identities at random rational points (exact residuals)
    Verify {
        /// convolution | derived | t-shift | rothe | duality | lah |
        /// inverse | all
        identity: String,
        #[command(flatten)]
        source: OptionalSource,
        #[arg(short = 'n', short_alias = 'N', default_value_t = 6, value_parser = clap::value_parser!(u32).range(1..))]
        order: u32,
        /// Number of random instances per identity
        #[arg(long, default_value_t = 40)]
        trials: u32,
        /// Corrupt one coefficient first (negative control; must FAIL)
        #[arg(long)]
        tamper: bool,
    },
    /// Saddle-point comparison table for (n, x) pairs
    Asymp {
        #[command(flatten)]
        source: Source,
        /// Values of n (comma separated)
        #[arg(short = 'n', value_delimiter = ',')]
        n: Vec<usize>,
        /// Values of x (comma separated)
        #[arg(short = 'x', value_delimiter = ',')]
        x: Vec<f64>,
        /// Series truncation order (default: enough for the requested n)
        #[arg(short = 'N')]
        order: Option<u32>,
    },
    /// Print the extended-entry polynomial f_{y(y-k)} in y
    Extend {
        #[command(flatten)]
        source: Source,
        /// Diagonal offset k
        #[arg(short = 'k')]
        k: u32,
    },
    /// Print the Stirling polynomial sigma_n(x)
    Sigma {
        #[arg(short = 'n', value_parser = clap::value_parser!(u32).range(1..))]
        n: u32,
    },
}

fn parse_rat(s: &str) -> Result<Rat, String> {
    Rat::from_str(s.trim()).map_err(|e| format!("bad rational '{s}': {e}"))
}

fn log_series_from(source: &Source, order: usize) -> Result<(Series, Option<String>), String> {
    match (&source.family, &source.f) {
        (Some(name), None) => {
            let t = match &source.t {
                Some(raw) => Some(parse_rat(raw)?),
                None => None,
            };
            let f =
                family::catalog_log_series(name, order, t.as_ref()).map_err(|e| e.to_string())?;
            Ok((f, Some(name.clone())))
        }
        (None, Some(list)) => {
            let mut exp = vec![Rat::zero()];
            for s in list {
                exp.push(parse_rat(s)?);
            }
            exp.resize(order + 1, Rat::zero());
            exp.truncate(order + 1);
            Ok((Series::from_exp_coeffs(exp), None))
        }
        _ => Err("exactly one of --family or --f is required".into()),
    }
}

fn print_triangle(t: &ConvolutionTriangle, format: Format) {
    match format {
        Format::Tsv => println!("{}", t.to_tsv()),
        Format::Json => println!("{}", t.to_json()),
    }
}

fn run(cli: Cli) -> Result<i32, String> {
    match cli.cmd {
        Cmd::Triangle { source, order } => {
            let n_max = order as usize;
            let (f, _) = log_series_from(&source, n_max)?;
            let t = ConvolutionTriangle::from_series(&f, n_max).map_err(|e| e.to_string())?;
            print_triangle(&t, cli.format);
            Ok(0)
        }
        Cmd::Family { source, order } => {
            let n_max = order as usize;
            let (f, name) = log_series_from(&source, n_max)?;
            let mut fam = Family::from_log_series(&f).map_err(|e| e.to_string())?;
            if let Some(name) = name {
                fam = fam.with_name(&name);
            }
            match cli.format {
                Format::Tsv => println!("{}", fam.to_tsv()),
                Format::Json => println!("{}", fam.to_json()),
            }
            Ok(0)
        }
        Cmd::Compose {
            source,
            family2,
            f2,
            t2,
            order,
        } => {
            let n_max = order as usize;
            let (f, _) = log_series_from(&source, n_max)?;
            let outer = Source {
                family: family2,
                f: f2,
                t: t2,
            };
            if outer.family.is_none() && outer.f.is_none() {
                return Err("compose needs --family2 or --f2 for the outer series".into());
            }
            let (g, _) = log_series_from(&outer, n_max)?;
            let composed = g.compose(&f).map_err(|e| e.to_string())?;
            let t =
                ConvolutionTriangle::from_series(&composed, n_max).map_err(|e| e.to_string())?;
            print_triangle(&t, cli.format);
            Ok(0)
        }
        Cmd::Iterate {
            source,
            q,
            order,
            check,
        } => {
            let n_max = order as usize;
            let (f, _) = log_series_from(&source, n_max)?;
            let q = parse_rat(&q)?;
            let iterated = triangle::iterate_series(&f, &q, n_max).map_err(|e| e.to_string())?;
            match cli.format {
                Format::Tsv => println!("{iterated}"),
                Format::Json => println!("{}", iterated.to_json()),
            }
            if check {
                let ok = check_iterate(&f, &iterated, &q, n_max)?;
                println!("{}", if ok { "PASS" } else { "FAIL" });
                return Ok(if ok { 0 } else { 1 });
            }
            Ok(0)
        }
        Cmd::Revert {
            source,
            order,
            check,
        } => {
            let n_max = order as usize;
            let (f, _) = log_series_from(&source, n_max)?;
            let g = triangle::revert(&f).map_err(|e| e.to_string())?;
            match cli.format {
                Format::Tsv => println!("{g}"),
                Format::Json => println!("{}", g.to_json()),
            }
            if check {
                let ok = g.compose(&f).map_err(|e| e.to_string())? == Series::z(n_max);
                println!("{}", if ok { "PASS" } else { "FAIL" });
                return Ok(if ok { 0 } else { 1 });
            }
            Ok(0)
        }
        Cmd::Verify {
            identity,
            source,
            order,
            trials,
            tamper,
        } => {
            let src = source.to_source();
            verify(
                &identity,
                src.as_ref(),
                order as usize,
                trials as usize,
                tamper,
                cli.seed,
            )
        }
        Cmd::Asymp {
            source,
            n,
            x,
            order,
        } => {
            if n.is_empty() || x.is_empty() {
                return Err("asymp needs at least one -n and one -x value".into());
            }
            let max_n = *n.iter().max().unwrap();
            let needed = max_n.max(13);
            let n_max = match order {
                Some(o) if (o as usize) < needed => {
                    return Err(format!("-N must be at least max(n, 13) = {needed}"));
                }
                Some(o) => o as usize,
                // default: a guard band past the minimum so the truncated
                // series evaluates the saddle quantities to full precision
                None => needed + 24,
            };
            let (f, _) = log_series_from(&source, n_max)?;
            let mut rows = Vec::new();
            for &ni in &n {
                for &xi in &x {
                    if ni as f64 / xi > 0.5 {
                        eprintln!(
                            "warning: y = n/x = {} exceeds 1/2; the approximation degrades",
                            ni as f64 / xi
                        );
                    }
                    let report = asympt::compare(&f, ni, xi).map_err(|e| e.to_string())?;
                    rows.push(report);
                }
            }
            match cli.format {
                Format::Tsv => {
                    println!("{}", asympt::SaddleReport::tsv_header());
                    for r in rows {
                        println!("{}", r.to_tsv_row());
                    }
                }
                Format::Json => {
                    let body: Vec<String> = rows.iter().map(|r| r.to_json()).collect();
                    println!("[{}]", body.join(", "));
                }
            }
            Ok(0)
        }
        Cmd::Extend { source, k } => {
            let k = k as usize;
            let (f, _) = log_series_from(&source, k + 1)?;
            let e = triangle::extended_entry(&f, k).map_err(|e| e.to_string())?;
            match cli.format {
                Format::Tsv => println!("{}", e.poly),
                Format::Json => {
                    let cs: Vec<String> = if e.poly.is_zero() {
                        vec!["\"0\"".into()]
                    } else {
                        e.poly.coeffs().iter().map(|c| format!("\"{c}\"")).collect()
                    };
                    println!(
                        "{{\"offset\": {}, \"coeffs\": [{}]}}",
                        e.offset,
                        cs.join(", ")
                    );
                }
            }
            Ok(0)
        }
        Cmd::Sigma { n } => {
            let sigma = triangle::stirling_polynomial(n as usize).map_err(|e| e.to_string())?;
            match cli.format {
                Format::Tsv => println!("{sigma}"),
                Format::Json => {
                    let cs: Vec<String> =
                        sigma.coeffs().iter().map(|c| format!("\"{c}\"")).collect();
                    println!("{{\"n\": {n}, \"coeffs\": [{}]}}", cs.join(", "));
                }
            }
            Ok(0)
        }
    }
}

/// Verify `r = f^[q]` by integer recomposition: with `q = a/b` in lowest
/// terms, `r` composed with itself `b` times must equal `f` composed `a`
/// times (negative `a` through the reversion).
fn check_iterate(f: &Series, r: &Series, q: &Rat, order: usize) -> Result<bool, String> {
    let self_compose = |s: &Series, times: i64| -> Result<Series, String> {
        let base = if times < 0 {
            triangle::revert(s).map_err(|e| e.to_string())?
        } else {
            s.clone()
        };
        let mut acc = Series::z(order);
        for _ in 0..times.unsigned_abs() {
            acc = base.compose(&acc).map_err(|e| e.to_string())?;
        }
        Ok(acc)
    };
    let a: i64 = q
        .numer()
        .try_into()
        .map_err(|_| "q numerator too large".to_string())?;
    let b: i64 = q
        .denom()
        .try_into()
        .map_err(|_| "q denominator too large".to_string())?;
    Ok(self_compose(r, b)? == self_compose(f, a)?)
}

struct VerifyOutcome {
    passed: bool,
}

fn report_line(name: &str, pass: bool, detail: &str) -> bool {
    if pass {
        println!("PASS {name}: {detail}");
    } else {
        println!("FAIL {name}: {detail}");
    }
    pass
}

fn verify(
    identity: &str,
    source: Option<&Source>,
    order: usize,
    trials: usize,
    tamper: bool,
    seed: u64,
) -> Result<i32, String> {
    let mut rng = SplitMix64::new(seed);
    let fam = match source {
        Some(src) => {
            let (f, name) = log_series_from(src, order)?;
            let mut fam = Family::from_log_series(&f).map_err(|e| e.to_string())?;
            if let Some(name) = name {
                fam = fam.with_name(&name);
            }
            if tamper {
                fam = fam.tampered();
            }
            Some(fam)
        }
        None => None,
    };
    let need_family = |fam: &Option<Family>| -> Result<Family, String> {
        fam.clone()
            .ok_or_else(|| "this identity needs --family or --f".to_string())
    };

    let mut all = true;
    let mut ran_any = false;
    if identity == "convolution" || identity == "all" {
        let fam = need_family(&fam)?;
        let mut failures = 0;
        for _ in 0..trials {
            let n = rng.next_below(order as u64 + 1) as usize;
            let x = rng.next_rat(9, 5);
            let y = rng.next_rat(9, 5);
            if !family::check_convolution(&fam, n, &x, &y).is_zero() {
                failures += 1;
            }
        }
        all &= report_line(
            "convolution",
            failures == 0,
            &format!("{trials} random instances, {failures} nonzero residuals"),
        );
        ran_any = true;
    }
    if identity == "derived" || identity == "all" {
        let fam = need_family(&fam)?;
        let mut failures = 0;
        for _ in 0..trials {
            let n = rng.next_below(order as u64 + 1) as usize;
            let x = rng.next_rat(9, 5);
            let y = rng.next_rat(9, 5);
            if !family::check_derived_convolution(&fam, n, &x, &y).is_zero() {
                failures += 1;
            }
        }
        all &= report_line(
            "derived",
            failures == 0,
            &format!("{trials} random instances, {failures} nonzero residuals"),
        );
        ran_any = true;
    }
    if identity == "t-shift" || identity == "all" {
        let fam = need_family(&fam)?;
        let mut failures = 0;
        let mut done = 0;
        while done < trials {
            let n = rng.next_below(order as u64 + 1) as usize;
            let t = rng.next_rat(6, 4);
            let x = rng.next_rat_nonzero(9, 5);
            let y = rng.next_rat_nonzero(9, 5);
            let (Some(r1), Some(r2)) = (
                family::check_t_identity_sum(&fam, &t, n, &x, &y),
                family::check_t_identity_weighted(&fam, &t, n, &x, &y),
            ) else {
                continue;
            };
            if !r1.is_zero() || !r2.is_zero() {
                failures += 1;
            }
            done += 1;
        }
        all &= report_line(
            "t-shift",
            failures == 0,
            &format!("{trials} random instances, {failures} nonzero residuals"),
        );
        ran_any = true;
    }
    if identity == "rothe" || identity == "all" {
        let mut failures = 0;
        for _ in 0..trials {
            let n = rng.next_below(order.min(8) as u64 + 1) as usize;
            let t = rng.next_rat(6, 4);
            let x = rng.next_rat(9, 5);
            let y = rng.next_rat(9, 5);
            if !family::rothe_residual(&t, &x, &y, n).is_zero() {
                failures += 1;
            }
        }
        all &= report_line(
            "rothe",
            failures == 0,
            &format!("{trials} random instances, {failures} nonzero residuals"),
        );
        ran_any = true;
    }
    if identity == "duality" || identity == "all" {
        // f_{nk} = (-1)^{n-k} g_{(-k)(-n)} for the source (default: the
        // Stirling pair)
        let f = match &fam {
            Some(fam) => fam.log_series().truncated(order),
            None => {
                family::catalog_log_series("stirling2", order, None).map_err(|e| e.to_string())?
            }
        };
        let outcome = duality_check(&f, order.min(6)).map_err(|e| e.to_string())?;
        all &= report_line(
            "duality",
            outcome.passed,
            &format!(
                "extended-matrix identity on 0 <= k <= n <= {}",
                order.min(6)
            ),
        );
        ran_any = true;
    }
    if identity == "lah" || identity == "all" {
        let f = family::catalog_log_series("lah", order + 2, None).map_err(|e| e.to_string())?;
        let t = ConvolutionTriangle::from_series(&f, order).map_err(|e| e.to_string())?;
        let mut pass = true;
        for n in 1..=order {
            for k in 1..=n {
                let e = triangle::extended_entry(&f, n - k).map_err(|e| e.to_string())?;
                if t.entry(n, k) != e.eval(&-Rat::from_integer(k.into())) {
                    pass = false;
                }
            }
        }
        all &= report_line("lah", pass, &format!("|n k| = |-k -n| through n = {order}"));
        ran_any = true;
    }
    if identity == "inverse" || identity == "all" {
        let f = match &fam {
            Some(fam) => fam.log_series().truncated(order),
            None => {
                family::catalog_log_series("stirling2", order, None).map_err(|e| e.to_string())?
            }
        };
        let t = ConvolutionTriangle::from_series(&f, order).map_err(|e| e.to_string())?;
        let g = triangle::lagrange_inverse_triangle(&f, order).map_err(|e| e.to_string())?;
        let pass = g.matmul(&t) == ConvolutionTriangle::identity(order);
        all &= report_line(
            "inverse",
            pass,
            "Lagrange inverse times matrix is the identity",
        );
        ran_any = true;
    }
    if !ran_any {
        return Err(format!(
            "unknown identity '{identity}' (expected convolution, derived, t-shift, rothe, duality, lah, inverse, all)"
        ));
    }
    Ok(if all { 0 } else { 1 })
}

fn duality_check(f: &Series, n_max: usize) -> convpoly::Result<VerifyOutcome> {
    let g = triangle::revert(f)?;
    let t = ConvolutionTriangle::from_series(f, n_max)?;
    let mut passed = true;
    for n in 1..=n_max {
        for k in 1..=n {
            let e = triangle::extended_entry(&g, n - k)?;
            let sign = if (n - k) % 2 == 0 {
                Rat::one()
            } else {
                -Rat::one()
            };
            if t.entry(n, k) != sign * e.eval(&-Rat::from_integer(k.into())) {
                passed = false;
            }
        }
    }
    Ok(VerifyOutcome { passed })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
