//! Command-line front end: argument handling and JSON/text rendering.

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use planefol::cuspidal::{
    build_cuspidal, classify_cuspidal, cuspidal_gsv, cuspidal_same_reduction, pullback_order, CuspidalSpec,
};
use planefol::formparse::ParseContext;
use planefol::newton::{newton_second_type_test, support_form, NewtonPolygon};
use planefol::reduction::{reduce, verdict, DEFAULT_MAX_DEPTH};
use planefol::Error;

pub const SCHEMA: u32 = 1;

pub const EXIT_OK: i32 = 0;
pub const EXIT_OTHER: i32 = 1;
pub const EXIT_DICRITICAL: i32 = 2;
pub const EXIT_DEPTH: i32 = 3;
pub const EXIT_PARSE: i32 = 4;
pub const EXIT_MISMATCH: i32 = 5;

#[derive(Parser, Debug)]
#[command(name = "planefol", version, about = "Second-type and generalized-curve tests for plane foliations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Newton polygon of a 1-form
    Polygon {
        #[arg(long, allow_hyphen_values = true)]
        form: String,
        #[arg(long, value_enum, default_value = "json")]
        format: PolygonFormat,
        #[arg(long = "alg")]
        alg: Vec<String>,
    },
    /// Second-type and generalized-curve verdicts
    Classify {
        #[arg(long, allow_hyphen_values = true)]
        form: String,
        #[arg(long, allow_hyphen_values = true)]
        separatrix: Option<String>,
        #[arg(long, default_value_t = DEFAULT_MAX_DEPTH)]
        max_depth: u32,
        #[arg(long = "alg")]
        alg: Vec<String>,
    },
    /// Reduction of singularities
    Reduce {
        #[arg(long, allow_hyphen_values = true)]
        form: String,
        #[arg(long, value_enum, default_value = "json")]
        format: TreeFormat,
        #[arg(long, default_value_t = DEFAULT_MAX_DEPTH)]
        max_depth: u32,
        #[arg(long = "alg")]
        alg: Vec<String>,
    },
    /// The cuspidal foliation d(y^p - x^q) + Δ(p x dy - q y dx)
    Cuspidal {
        #[arg(long)]
        p: u32,
        #[arg(long)]
        q: u32,
        #[arg(long, default_value = "0", allow_hyphen_values = true)]
        delta: String,
        #[arg(long = "alg")]
        alg: Vec<String>,
        /// Confirm with the blow-up reduction
        #[arg(long)]
        oracle: bool,
    },
    /// GSV index of a cuspidal foliation along y^p - x^q
    Gsv {
        #[arg(long)]
        p: u32,
        #[arg(long)]
        q: u32,
        #[arg(long, default_value = "0", allow_hyphen_values = true)]
        delta: String,
        #[arg(long = "alg")]
        alg: Vec<String>,
    },
    /// Order of the pull-back of a 1-form along a parameterized curve
    Pullback {
        #[arg(long, allow_hyphen_values = true)]
        form: String,
        #[arg(long, allow_hyphen_values = true)]
        gamma: String,
        #[arg(long = "alg")]
        alg: Vec<String>,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum PolygonFormat {
    Json,
    Ascii,
    Svg,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum TreeFormat {
    Json,
    Dot,
}

/// A failed run: exit code plus the error document.
#[derive(Debug)]
struct Failure {
    code: i32,
    kind: &'static str,
    message: String,
    position: Option<usize>,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let (code, kind) = match &e {
            Error::Parse(_) => (EXIT_PARSE, "parse"),
            Error::Dicritical => (EXIT_DICRITICAL, "dicritical"),
            Error::DepthExceeded(_) => (EXIT_DEPTH, "depth-exceeded"),
            Error::OracleMismatch(_) => (EXIT_MISMATCH, "oracle-mismatch"),
            Error::Num(_) => (EXIT_OTHER, "number-field"),
            Error::ZeroForm => (EXIT_OTHER, "zero-form"),
            Error::NotSaturated(_) => (EXIT_OTHER, "not-saturated"),
            Error::NotInvariant => (EXIT_OTHER, "not-invariant"),
            Error::EmptySupport => (EXIT_OTHER, "empty-support"),
            Error::Truncated => (EXIT_DICRITICAL, "dicritical"),
            Error::UndefinedIndex(_) => (EXIT_OTHER, "undefined-index"),
            Error::NotSingular => (EXIT_OTHER, "not-singular"),
            Error::Invalid(_) => (EXIT_OTHER, "invalid"),
        };
        let position = match &e {
            Error::Parse(p) => Some(p.position()),
            _ => None,
        };
        Failure {
            code,
            kind,
            message: e.to_string(),
            position,
        }
    }
}

impl Failure {
    fn to_json(&self) -> Value {
        let mut v = json!({
            "schema": SCHEMA,
            "error": self.kind,
            "message": self.message,
        });
        if let Some(p) = self.position {
            v["position"] = json!(p);
        }
        v
    }
}

fn context(alg: &[String]) -> Result<ParseContext, Error> {
    let mut ctx = ParseContext::new();
    for decl in alg {
        ctx.declare(decl)?;
    }
    Ok(ctx)
}

fn with_schema(mut v: Value) -> Value {
    v["schema"] = json!(SCHEMA);
    v
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

fn cuspidal_spec(p: u32, q: u32, delta: &str, alg: &[String]) -> Result<CuspidalSpec, Error> {
    if p < 2 || q < 2 {
        return Err(Error::Invalid("p and q must be at least 2".into()));
    }
    let ctx = context(alg)?;
    CuspidalSpec::new(p, q, ctx.parse_poly(delta)?)
}

fn execute(cmd: Command) -> Result<String, Failure> {
    match cmd {
        Command::Polygon { form, format, alg } => {
            let w = context(&alg)?.parse_oneform(&form)?;
            let support = support_form(&w);
            let poly = NewtonPolygon::of_form(&w)?;
            Ok(match format {
                PolygonFormat::Ascii => poly.render_ascii(&support),
                PolygonFormat::Svg => poly.render_svg(&support),
                PolygonFormat::Json => pretty(&with_schema(json!({
                    "support": support.iter().map(|m| [m.i, m.j]).collect::<Vec<_>>(),
                    "vertices": poly.to_json(),
                    "compact_sides": poly.compact_sides,
                    "ascii": poly.render_ascii(&support),
                }))),
            })
        }
        Command::Classify {
            form,
            separatrix,
            max_depth,
            alg,
        } => {
            let ctx = context(&alg)?;
            let w = ctx.parse_oneform(&form)?;
            let f = separatrix.as_deref().map(|s| ctx.parse_poly(s)).transpose()?;
            let tree = reduce(&w, max_depth)?;
            if tree.dicritical {
                return Err(Error::Dicritical.into());
            }
            let v = verdict(&tree)?;
            let mut out = json!({
                "second_type": v.second_type,
                "generalized_curve": v.generalized_curve,
                "blowups": tree.blowup_count,
            });
            if let Some(f) = f {
                let equal = newton_second_type_test(&w, &f)?;
                if equal != v.second_type {
                    return Err(Error::OracleMismatch(format!(
                        "Newton test says {equal}, reduction says {}",
                        v.second_type
                    ))
                    .into());
                }
                out["newton_equal"] = json!(equal);
            }
            Ok(pretty(&with_schema(out)))
        }
        Command::Reduce {
            form,
            format,
            max_depth,
            alg,
        } => {
            let w = context(&alg)?.parse_oneform(&form)?;
            let tree = reduce(&w, max_depth)?;
            if tree.dicritical {
                return Err(Error::Dicritical.into());
            }
            Ok(match format {
                TreeFormat::Dot => tree.to_dot(),
                TreeFormat::Json => pretty(&with_schema(tree.to_json())),
            })
        }
        Command::Cuspidal {
            p,
            q,
            delta,
            alg,
            oracle,
        } => {
            let spec = cuspidal_spec(p, q, &delta, &alg)?;
            let w = build_cuspidal(&spec)?;
            let v = classify_cuspidal(&spec, oracle)?;
            let same = cuspidal_same_reduction(&spec)?;
            Ok(pretty(&with_schema(json!({
                "p": p,
                "q": q,
                "form": w.to_string(),
                "ph": v.ph,
                "intersection": v.intersection,
                "second_type": v.second_type,
                "generalized_curve": v.generalized_curve,
                "same_reduction": same,
                "method": v.method,
            }))))
        }
        Command::Gsv { p, q, delta, alg } => {
            let spec = cuspidal_spec(p, q, &delta, &alg)?;
            let g = cuspidal_gsv(&spec)?;
            Ok(pretty(&with_schema(json!({
                "p": p,
                "q": q,
                "per_branch": g.per_branch,
                "pairs": g.pairs,
                "total": g.total,
            }))))
        }
        Command::Pullback { form, gamma, alg } => {
            let ctx = context(&alg)?;
            let w = ctx.parse_oneform(&form)?;
            let g = ctx.parse_parameterization(&gamma)?;
            let order = pullback_order(&g, &w)?;
            Ok(pretty(&with_schema(json!({
                "gamma": g.to_string(),
                "order": order,
            }))))
        }
    }
}

/// Runs the tool on `argv` (program name first). Returns the exit code and
/// the text for stdout on success, or the JSON error document for stderr.
pub fn run<I, T>(argv: I) -> (i32, String)
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => (EXIT_OK, e.to_string()),
                _ => {
                    let f = Failure {
                        code: EXIT_PARSE,
                        kind: "usage",
                        message: e.render().to_string().trim_end().to_string(),
                        position: None,
                    };
                    (f.code, pretty(&f.to_json()))
                }
            };
        }
    };
    match execute(cli.command) {
        Ok(s) => (EXIT_OK, s),
        Err(f) => (f.code, pretty(&f.to_json())),
    }
}
