//! Command-line flags, optional config file, and the merged job description.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Deserialize;

use koornwinder::exact::{parse_rational, Rational};
use koornwinder::weights::DominantWeight;

use crate::CliError;

#[derive(Parser, Debug)]
#[command(
    name = "koorn",
    version,
    about = "Koornwinder polynomials, torus orthogonality and reflection-equation checks"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Build and verify eigenfunctions P_λ.
    Poly(Flags),
    /// Eigenvalues and the diagonal of the operator matrix.
    Spectrum(Flags),
    /// Torus Gram matrix of P_λ with a self-convergence check.
    Gram(Flags),
    /// Reflection-equation, Yang-Baxter and Hecke residuals.
    Reflect(Flags),
    /// Parameter map and Casimir/eigenvalue correspondence for a Grassmannian.
    Grassmann(Flags),
}

impl Command {
    pub fn flags(&self) -> &Flags {
        match self {
            Command::Poly(f)
            | Command::Spectrum(f)
            | Command::Gram(f)
            | Command::Reflect(f)
            | Command::Grassmann(f) => f,
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Csv,
    Pretty,
}

#[derive(Args, Debug, Default)]
pub struct Flags {
    /// Number of variables.
    #[arg(long)]
    pub l: Option<usize>,
    /// Weight as a comma list, e.g. 2,1 (repeatable).
    #[arg(long = "lambda", allow_hyphen_values = true)]
    pub lambda: Vec<String>,
    #[arg(long)]
    pub q: Option<String>,
    #[arg(long)]
    pub t: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub a: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub b: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub c: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub d: Option<String>,
    /// Rank of the ambient general linear group.
    #[arg(long)]
    pub n: Option<usize>,
    /// s = q^σ.
    #[arg(long)]
    pub s: Option<String>,
    /// u = q^τ.
    #[arg(long)]
    pub u: Option<String>,
    /// Pochhammer truncation N.
    #[arg(long)]
    pub trunc: Option<usize>,
    /// Grid points per torus dimension M.
    #[arg(long)]
    pub grid: Option<usize>,
    /// Write the report here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Polynomial cache directory (KOORN_CACHE takes precedence).
    #[arg(long)]
    pub cache: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// TOML or JSON file with defaults for any of the flags above.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Include the restricted polynomials in the grassmann report.
    #[arg(long)]
    pub polys: bool,
}

/// A number given either as text ("3/5", "0.6") or as a bare number.
#[derive(Deserialize, Debug, Clone)]
#[serde(untagged)]
enum NumberLike {
    Text(String),
    Int(i64),
    Float(f64),
}

impl NumberLike {
    fn into_text(self) -> String {
        match self {
            NumberLike::Text(s) => s,
            NumberLike::Int(i) => i.to_string(),
            NumberLike::Float(x) => x.to_string(),
        }
    }
}

#[derive(Deserialize, Debug, Clone)]
#[serde(untagged)]
enum WeightLike {
    Parts(Vec<i64>),
    Text(String),
}

#[derive(Deserialize, Debug, Default)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    l: Option<usize>,
    lambda: Option<Vec<WeightLike>>,
    q: Option<NumberLike>,
    t: Option<NumberLike>,
    a: Option<NumberLike>,
    b: Option<NumberLike>,
    c: Option<NumberLike>,
    d: Option<NumberLike>,
    n: Option<usize>,
    s: Option<NumberLike>,
    u: Option<NumberLike>,
    trunc: Option<usize>,
    grid: Option<usize>,
    out: Option<PathBuf>,
    cache: Option<PathBuf>,
    format: Option<Format>,
}

fn read_config(path: &Path) -> Result<FileConfig, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
    let is_json = path
        .extension()
        .is_some_and(|e| e.eq_ignore_ascii_case("json"));
    if is_json {
        serde_json::from_str(&text)
            .map_err(|e| CliError::Usage(format!("bad config {}: {e}", path.display())))
    } else {
        toml::from_str(&text)
            .map_err(|e| CliError::Usage(format!("bad config {}: {e}", path.display())))
    }
}

pub fn parse_weight(text: &str) -> Result<DominantWeight, CliError> {
    let inner = text.trim().trim_start_matches('(').trim_end_matches(')');
    let parts = inner
        .split(',')
        .map(|p| p.trim().parse::<i64>())
        .collect::<Result<Vec<_>, _>>()
        .map_err(|_| CliError::Usage(format!("cannot parse weight '{text}'")))?;
    DominantWeight::new(parts).map_err(|e| CliError::Usage(format!("weight '{text}': {e}")))
}

fn parse_number(name: &str, text: &str) -> Result<Rational, CliError> {
    parse_rational(text).map_err(|e| CliError::Usage(format!("--{name}: {e}")))
}

/// Flags merged over the optional config file.
#[derive(Debug, Default)]
pub struct JobConfig {
    pub l: Option<usize>,
    pub lambdas: Vec<DominantWeight>,
    pub q: Option<Rational>,
    pub t: Option<Rational>,
    pub a: Option<Rational>,
    pub b: Option<Rational>,
    pub c: Option<Rational>,
    pub d: Option<Rational>,
    pub n: Option<usize>,
    pub s: Option<Rational>,
    pub u: Option<Rational>,
    pub trunc: Option<usize>,
    pub grid: Option<usize>,
    pub out: Option<PathBuf>,
    pub cache: Option<PathBuf>,
    pub format: Format,
    pub polys: bool,
}

impl JobConfig {
    pub fn resolve(flags: &Flags, env_cache: Option<PathBuf>) -> Result<Self, CliError> {
        let file = match &flags.config {
            Some(p) => read_config(p)?,
            None => FileConfig::default(),
        };
        let num = |name: &str, flag: &Option<String>, fallback: Option<NumberLike>| {
            flag.clone()
                .or_else(|| fallback.map(NumberLike::into_text))
                .map(|t| parse_number(name, &t))
                .transpose()
        };
        let lambdas = if !flags.lambda.is_empty() {
            flags
                .lambda
                .iter()
                .map(|s| parse_weight(s))
                .collect::<Result<_, _>>()?
        } else {
            file.lambda
                .unwrap_or_default()
                .into_iter()
                .map(|w| match w {
                    WeightLike::Parts(p) => DominantWeight::new(p.clone())
                        .map_err(|e| CliError::Usage(format!("weight {p:?}: {e}"))),
                    WeightLike::Text(s) => parse_weight(&s),
                })
                .collect::<Result<_, _>>()?
        };
        Ok(JobConfig {
            l: flags.l.or(file.l),
            lambdas,
            q: num("q", &flags.q, file.q)?,
            t: num("t", &flags.t, file.t)?,
            a: num("a", &flags.a, file.a)?,
            b: num("b", &flags.b, file.b)?,
            c: num("c", &flags.c, file.c)?,
            d: num("d", &flags.d, file.d)?,
            n: flags.n.or(file.n),
            s: num("s", &flags.s, file.s)?,
            u: num("u", &flags.u, file.u)?,
            trunc: flags.trunc.or(file.trunc),
            grid: flags.grid.or(file.grid),
            out: flags.out.clone().or(file.out),
            cache: env_cache.or_else(|| flags.cache.clone()).or(file.cache),
            format: flags.format.or(file.format).unwrap_or(Format::Json),
            polys: flags.polys,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use koornwinder::exact::rat;

    #[test]
    fn weights_parse_with_or_without_parentheses() {
        assert_eq!(parse_weight("2,1").unwrap().parts(), &[2, 1]);
        assert_eq!(parse_weight("(3, 0)").unwrap().parts(), &[3, 0]);
        assert!(parse_weight("1,2").is_err());
        assert!(parse_weight("x").is_err());
    }

    #[test]
    fn flags_override_config_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("job.toml");
        std::fs::write(
            &path,
            "q = \"1/2\"\nt = 0.25\nl = 2\nlambda = [[1, 0], \"1,1\"]\n",
        )
        .unwrap();
        let flags = Flags {
            q: Some("1/3".into()),
            config: Some(path),
            ..Flags::default()
        };
        let job = JobConfig::resolve(&flags, None).unwrap();
        assert_eq!(job.q, Some(rat(1, 3)));
        assert_eq!(job.t, Some(rat(1, 4)));
        assert_eq!(job.l, Some(2));
        assert_eq!(job.lambdas.len(), 2);
        assert_eq!(job.format, Format::Json);
    }

    #[test]
    fn env_cache_wins() {
        let flags = Flags {
            cache: Some("flag-dir".into()),
            ..Flags::default()
        };
        let job = JobConfig::resolve(&flags, Some("env-dir".into())).unwrap();
        assert_eq!(job.cache, Some(PathBuf::from("env-dir")));
    }

    #[test]
    fn unknown_config_keys_are_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("job.json");
        std::fs::write(&path, r#"{"qq": 1}"#).unwrap();
        let flags = Flags {
            config: Some(path),
            ..Flags::default()
        };
        assert!(matches!(
            JobConfig::resolve(&flags, None),
            Err(CliError::Usage(_))
        ));
    }
}
