use std::io::{self, Write};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use sto_twocenter::error::Error;
use sto_twocenter::format::sig17;
use sto_twocenter::integrals::{analytic, IntegralKind, IntegralSpec, StoParams};
use sto_twocenter::legendre::{legendre_eval, legendre_oracle};
use sto_twocenter::oracle::{quad_integral, QuadratureConfig};
use sto_twocenter::product::{build_expansion, eval_direct, eval_expansion, EllipsoidalPoint};
use sto_twocenter::validate::{run_validation, sweep_specs, ValidateOptions};

#[derive(Parser, Debug)]
#[command(name = "sto2c", version, about = "Two-center integrals over Slater-type orbitals")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Normalized associated Legendre function P̄_lm(x)
    Legendre {
        #[arg(long)]
        l: u32,
        #[arg(long)]
        m: u32,
        #[arg(long, allow_hyphen_values = true)]
        x: f64,
        #[arg(long, value_enum, default_value_t = LegendreMethod::Closed)]
        method: LegendreMethod,
    },
    /// Dump the expansion table of P̄_lλ(cos θ_a) P̄_l'λ(cos θ_b)
    ProductTable {
        #[arg(long)]
        l: u32,
        #[arg(long)]
        lp: u32,
        #[arg(long)]
        lambda: u32,
        #[arg(long, value_enum, default_value_t = TableFormat::Csv)]
        format: TableFormat,
    },
    /// Evaluate the product at one (mu, nu) by expansion and directly
    ProductEval {
        #[arg(long)]
        l: u32,
        #[arg(long)]
        lp: u32,
        #[arg(long)]
        lambda: u32,
        #[arg(long)]
        mu: f64,
        #[arg(long, allow_hyphen_values = true)]
        nu: f64,
    },
    /// Overlap or nuclear-attraction integral
    Integral {
        #[arg(long, value_enum)]
        kind: KindArg,
        #[arg(long)]
        na: f64,
        #[arg(long)]
        la: u32,
        #[arg(long)]
        za: f64,
        #[arg(long)]
        nb: f64,
        #[arg(long)]
        lb: u32,
        #[arg(long)]
        zb: f64,
        #[arg(long, default_value_t = 0)]
        lambda: u32,
        #[arg(long)]
        r: f64,
        /// Also evaluate by quadrature (required for noninteger n)
        #[arg(long)]
        oracle: bool,
    },
    /// Run the property suites and print a JSON report
    Validate {
        #[arg(long, default_value_t = 8)]
        lmax: u32,
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Largest l in the digit-loss report
        #[arg(long, default_value_t = 15)]
        report_lmax: u32,
    },
    /// Time table builds and evaluations; CSV on stdout
    Bench {
        #[arg(long, default_value_t = 8)]
        lmax: u32,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum LegendreMethod {
    Closed,
    Recurrence,
    Both,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum TableFormat {
    Csv,
    Json,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum KindArg {
    Overlap,
    NaA,
    NaB,
}

impl From<KindArg> for IntegralKind {
    fn from(k: KindArg) -> Self {
        match k {
            KindArg::Overlap => IntegralKind::Overlap,
            KindArg::NaA => IntegralKind::NuclearAttractionA,
            KindArg::NaB => IntegralKind::NuclearAttractionB,
        }
    }
}

enum Failure {
    Lib(Error),
    Io(io::Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let stdout = io::stdout();
    let mut out = stdout.lock();
    let result = run(cli.command, &mut out);
    let flushed = out.flush();
    match (result, flushed) {
        (Ok(code), Ok(())) => ExitCode::from(code),
        // a closed pipe (e.g. `| head`) is not an error
        (Err(Failure::Io(e)), _) | (Ok(_), Err(e)) if e.kind() == io::ErrorKind::BrokenPipe => ExitCode::SUCCESS,
        (Err(Failure::Io(e)), _) | (Ok(_), Err(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
        (Err(Failure::Lib(e)), _) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn io_err(e: io::Error) -> Failure {
    Failure::Io(e)
}

fn run(command: Command, out: &mut impl Write) -> std::result::Result<u8, Failure> {
    match command {
        Command::Legendre { l, m, x, method } => {
            match method {
                LegendreMethod::Closed => writeln!(out, "{}", sig17(legendre_eval(l, m, x)?)),
                LegendreMethod::Recurrence => writeln!(out, "{}", sig17(legendre_oracle(l, m, x)?)),
                LegendreMethod::Both => {
                    let c = legendre_eval(l, m, x)?;
                    let r = legendre_oracle(l, m, x)?;
                    writeln!(out, "closed: {}\nrecurrence: {}\ndiff: {}", sig17(c), sig17(r), sig17(c - r))
                }
            }
            .map_err(io_err)?;
        }
        Command::ProductTable { l, lp, lambda, format } => {
            let table = build_expansion(l, lambda, lp)?;
            match format {
                TableFormat::Csv => {
                    writeln!(out, "k,kp,u,s,rat_num,rat_den,radicand_num,radicand_den,coeff_float,pow_plus,pow_minus")
                        .map_err(io_err)?;
                    for t in table.terms() {
                        let c = &t.coeff;
                        writeln!(
                            out,
                            "{},{},{},{},{},{},{},{},{},{},{}",
                            t.k,
                            t.kp,
                            t.u,
                            t.s,
                            c.rat().numer(),
                            c.rat().denom(),
                            c.radicand().numer(),
                            c.radicand().denom(),
                            sig17(t.coeff_f64),
                            t.pow_plus,
                            t.pow_minus
                        )
                        .map_err(io_err)?;
                    }
                }
                TableFormat::Json => {
                    let terms: Vec<_> = table
                        .terms()
                        .iter()
                        .map(|t| {
                            let c = &t.coeff;
                            json!({
                                "k": t.k, "kp": t.kp, "u": t.u, "s": t.s,
                                "rat_num": c.rat().numer().to_string(),
                                "rat_den": c.rat().denom().to_string(),
                                "radicand_num": c.radicand().numer().to_string(),
                                "radicand_den": c.radicand().denom().to_string(),
                                "coeff_float": t.coeff_f64,
                                "pow_plus": t.pow_plus,
                                "pow_minus": t.pow_minus,
                            })
                        })
                        .collect();
                    let doc = json!({"l": l, "lambda": lambda, "lp": lp, "terms": terms});
                    writeln!(out, "{}", serde_json::to_string_pretty(&doc).expect("json")).map_err(io_err)?;
                }
            }
        }
        Command::ProductEval { l, lp, lambda, mu, nu } => {
            let pt = EllipsoidalPoint::new(mu, nu)?;
            let table = build_expansion(l, lambda, lp)?;
            let e = eval_expansion(&table, &pt);
            let d = eval_direct(l, lambda, lp, &pt)?;
            writeln!(out, "expansion: {}\ndirect: {}\ndiff: {}", sig17(e), sig17(d), sig17(e - d)).map_err(io_err)?;
        }
        Command::Integral {
            kind,
            na,
            la,
            za,
            nb,
            lb,
            zb,
            lambda,
            r,
            oracle,
        } => {
            let a = StoParams::new(na, la, lambda, za)?;
            let b = StoParams::new(nb, lb, lambda, zb)?;
            let spec = IntegralSpec::new(a, b, r, kind.into())?;
            let exact = match analytic(&spec) {
                Ok(v) => Some(v),
                Err(Error::Unsupported(_)) if oracle => None,
                Err(Error::Unsupported(msg)) => {
                    return Err(Error::Unsupported(format!("{msg} (pass --oracle)")).into());
                }
                Err(e) => return Err(e.into()),
            };
            let quad = if oracle {
                Some(quad_integral(&spec, &QuadratureConfig::default())?)
            } else {
                None
            };
            let primary = exact.or(quad).expect("one path ran");
            writeln!(
                out,
                "value: {}\nmethod: {}\nest_error: {}",
                sig17(primary.value),
                primary.method,
                sig17(primary.est_error)
            )
            .map_err(io_err)?;
            if let (Some(e), Some(q)) = (exact, quad) {
                let rel = (e.value - q.value).abs() / q.value.abs().max(1e-300);
                writeln!(
                    out,
                    "oracle_value: {}\noracle_est_error: {}\nrel_diff: {}",
                    sig17(q.value),
                    sig17(q.est_error),
                    sig17(rel)
                )
                .map_err(io_err)?;
            }
        }
        Command::Validate {
            lmax,
            samples,
            tol,
            seed,
            report_lmax,
        } => {
            let opts = ValidateOptions {
                lmax,
                samples,
                tol,
                seed,
                digit_loss_lmax: report_lmax,
                ..Default::default()
            };
            let report = run_validation(&opts)?;
            writeln!(out, "{}", serde_json::to_string_pretty(&report).expect("json")).map_err(io_err)?;
            return Ok(if report.passed() { 0 } else { 1 });
        }
        Command::Bench { lmax } => bench(lmax, out)?,
    }
    Ok(0)
}

fn bench(lmax: u32, out: &mut impl Write) -> std::result::Result<(), Failure> {
    const POINTS: usize = 64;
    let points: Vec<EllipsoidalPoint> = (0..POINTS)
        .map(|i| {
            let t = (i as f64 + 0.5) / POINTS as f64;
            EllipsoidalPoint::new(1.01 + 9.0 * t, -0.99 + 1.98 * ((7.0 * t) % 1.0)).expect("inside the domain")
        })
        .collect();
    writeln!(out, "l,lp,lambda,terms,build_us,eval_ns").map_err(io_err)?;
    for l in 0..=lmax {
        for lp in 0..=lmax {
            for lambda in 0..=l.min(lp) {
                let start = Instant::now();
                let table = build_expansion(l, lambda, lp)?;
                let build_us = start.elapsed().as_secs_f64() * 1e6;
                let start = Instant::now();
                let mut sink = 0.0;
                for pt in &points {
                    sink += eval_expansion(&table, pt);
                }
                let eval_ns = start.elapsed().as_secs_f64() * 1e9 / POINTS as f64;
                std::hint::black_box(sink);
                writeln!(out, "{l},{lp},{lambda},{},{build_us:.1},{eval_ns:.1}", table.len()).map_err(io_err)?;
            }
        }
    }
    // the integral timing goes to stderr so stdout stays one CSV table
    let specs: Vec<IntegralSpec> = sweep_specs(3).into_iter().step_by(97).take(100).collect();
    let start = Instant::now();
    for s in &specs {
        std::hint::black_box(analytic(s)?);
    }
    let total = start.elapsed();
    eprintln!(
        "{} analytic integrals: {:.1} us total, {:.2} us each",
        specs.len(),
        total.as_secs_f64() * 1e6,
        total.as_secs_f64() * 1e6 / specs.len() as f64
    );
    Ok(())
}
