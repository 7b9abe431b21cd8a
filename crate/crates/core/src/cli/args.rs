use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Parser)]
#[command(name = "qkrylov", version, about = "Global quaternion Krylov solvers for A X = B and A X + X B = C")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve A X = B from a MatrixMarket A0 or a random dense problem.
    Solve(CommonArgs),
    /// Solve A X + X B = C with a tridiagonal quaternion B.
    Sylvester(CommonArgs),
    /// Blur a colour image and restore it.
    Deblur(DeblurArgs),
    /// Run several methods on one problem and tabulate them.
    Bench(CommonArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Glqfom,
    Glqgmres,
    GlfomReal,
    GlgmresReal,
    QfomStacked,
    QgmresStacked,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::Glqfom => "glqfom",
            Method::Glqgmres => "glqgmres",
            Method::GlfomReal => "glfom-real",
            Method::GlgmresReal => "glgmres-real",
            Method::QfomStacked => "qfom-stacked",
            Method::QgmresStacked => "qgmres-stacked",
        }
    }
}

/// `n=INT m=INT` (either order; `m` may be omitted).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RandomSpec {
    pub n: usize,
    pub m: Option<usize>,
}

impl RandomSpec {
    pub fn parse(tokens: &[String]) -> Result<Self> {
        let mut n = None;
        let mut m = None;
        for t in tokens.iter().flat_map(|t| t.split_whitespace()) {
            let (key, value) = t
                .split_once('=')
                .ok_or_else(|| Error::InvalidArgument(format!("--random expects key=INT, got `{t}`")))?;
            let v: usize = value
                .parse()
                .map_err(|_| Error::InvalidArgument(format!("--random: `{value}` is not an integer")))?;
            match key {
                "n" => n = Some(v),
                "m" => m = Some(v),
                _ => return Err(Error::InvalidArgument(format!("--random: unknown key `{key}`"))),
            }
        }
        let n = n.ok_or_else(|| Error::InvalidArgument("--random needs n=INT".into()))?;
        if n == 0 || m == Some(0) {
            return Err(Error::InvalidArgument("--random sizes must be positive".into()));
        }
        Ok(RandomSpec { n, m })
    }
}

/// `uniform:s=INT`, `gaussian:r=INT,sigma=FLOAT` or `multichannel`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum BlurArg {
    Uniform { s: usize },
    Gaussian { r: usize, sigma: f64 },
    Multichannel,
}

impl FromStr for BlurArg {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let (kind, rest) = s.split_once(':').unwrap_or((s, ""));
        let mut params = std::collections::HashMap::new();
        for kv in rest.split(',').filter(|t| !t.is_empty()) {
            let (k, v) = kv.split_once('=').ok_or_else(|| format!("expected key=value, got `{kv}`"))?;
            params.insert(k.trim(), v.trim());
        }
        let get = |k: &str| params.get(k).copied().ok_or_else(|| format!("{kind} blur needs `{k}`"));
        let int = |k: &str| get(k)?.parse::<usize>().map_err(|e| format!("{k}: {e}"));
        match kind {
            "uniform" => Ok(BlurArg::Uniform { s: int("s")? }),
            "gaussian" => Ok(BlurArg::Gaussian {
                r: int("r")?,
                sigma: get("sigma")?.parse().map_err(|e| format!("sigma: {e}"))?,
            }),
            "multichannel" if rest.is_empty() => Ok(BlurArg::Multichannel),
            _ => Err(format!("unknown blur `{s}`; use uniform:s=INT, gaussian:r=INT,sigma=FLOAT or multichannel")),
        }
    }
}

#[derive(Clone, Debug, Args)]
pub struct CommonArgs {
    /// MatrixMarket file holding the real A0.
    #[arg(long, conflicts_with = "random")]
    pub matrix: Option<PathBuf>,
    /// Random dense problem, e.g. `--random n=8 m=2`.
    #[arg(long, num_args = 1..=2, value_name = "n=INT m=INT")]
    pub random: Option<Vec<String>>,
    /// Method, or a comma-separated list for `bench`.
    #[arg(long, value_enum, value_delimiter = ',', default_value = "glqgmres")]
    pub method: Vec<Method>,
    /// Number of right-hand-side columns.
    #[arg(long = "m", default_value_t = 1)]
    pub m: usize,
    #[arg(long, default_value_t = 1e-6)]
    pub tol: f64,
    #[arg(long, default_value_t = 3000)]
    pub maxit: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// JSON report (CSV table for `bench`); stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// CSV residual history.
    #[arg(long)]
    pub history: Option<PathBuf>,
    /// Run bench methods concurrently; timings are then not comparable.
    #[arg(long)]
    pub parallel: bool,
}

#[derive(Clone, Debug, Args)]
pub struct DeblurArgs {
    /// 8-bit RGB PNG; a synthetic 32x32 image is used when absent.
    #[arg(long)]
    pub image: Option<PathBuf>,
    #[arg(long, default_value = "uniform:s=4")]
    pub blur: BlurArg,
    #[arg(long, value_enum, default_value = "glqgmres")]
    pub method: Method,
    #[arg(long, default_value_t = 1e-6)]
    pub tol: f64,
    #[arg(long, default_value_t = 3000)]
    pub maxit: usize,
    /// Side length of the synthetic image.
    #[arg(long, default_value_t = 32)]
    pub size: usize,
    /// JSON report; the restored PNG is written next to it.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// CSV residual history.
    #[arg(long)]
    pub history: Option<PathBuf>,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn random_spec() {
        let s = |v: &[&str]| RandomSpec::parse(&v.iter().map(|t| t.to_string()).collect::<Vec<_>>());
        assert_eq!(s(&["n=8", "m=2"]).unwrap(), RandomSpec { n: 8, m: Some(2) });
        assert_eq!(s(&["m=2 n=8"]).unwrap(), RandomSpec { n: 8, m: Some(2) });
        assert_eq!(s(&["n=5"]).unwrap(), RandomSpec { n: 5, m: None });
        assert!(s(&["m=2"]).is_err());
        assert!(s(&["n=x"]).is_err());
        assert!(s(&["q=1"]).is_err());
        assert!(s(&["n=0"]).is_err());
    }

    #[test]
    fn blur_arg() {
        assert_eq!("uniform:s=4".parse::<BlurArg>().unwrap(), BlurArg::Uniform { s: 4 });
        assert_eq!(
            "gaussian:r=35,sigma=10".parse::<BlurArg>().unwrap(),
            BlurArg::Gaussian { r: 35, sigma: 10.0 }
        );
        assert_eq!("multichannel".parse::<BlurArg>().unwrap(), BlurArg::Multichannel);
        assert!("uniform".parse::<BlurArg>().is_err());
        assert!("box:s=2".parse::<BlurArg>().is_err());
    }

    #[test]
    fn clap_definition_is_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
        let cli = Cli::try_parse_from(["qkrylov", "bench", "--random", "n=4", "m=2", "--method", "glqgmres,glgmres-real"])
            .unwrap();
        match cli.command {
            Command::Bench(a) => assert_eq!(a.method, vec![Method::Glqgmres, Method::GlgmresReal]),
            _ => unreachable!(),
        }
    }
}
