//! Command-line grammar.

use std::f64::consts::PI;

use clap::{Args, Parser, Subcommand, ValueEnum};
use potentia_core::Complex64;

#[derive(Debug, Parser)]
#[command(
    name = "potentia",
    version,
    about = "Green's functions, Hardy norms, Phragmén–Lindelöf checks, product identities and Brownian occupation times"
)]
pub struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Table, global = true)]
    pub format: Format,
    /// Omit wall-clock timing so identical runs give identical output.
    #[arg(long, global = true)]
    pub deterministic: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Csv,
    Json,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Green's functions of the disk.
    #[command(subcommand)]
    Greens(GreensCommand),
    /// Integral means, Hardy-norm dichotomy and star-like domain geometry.
    #[command(subcommand)]
    Hardy(HardyCommand),
    /// Phragmén–Lindelöf checks on wedges.
    #[command(subcommand)]
    Pl(PlCommand),
    /// Infinite product identities.
    #[command(subcommand)]
    Products(ProductsCommand),
    /// Monte Carlo occupation times.
    #[command(subcommand)]
    Mc(McCommand),
}

#[derive(Debug, Subcommand)]
pub enum GreensCommand {
    /// Closed form ln|(1 − āz)/(a − z)|.
    Closed {
        #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
        a: Complex64,
        #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
        z: Complex64,
    },
    /// Covering-map series with tail bound, compared against the closed form.
    Series {
        #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
        a: Complex64,
        #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
        z: Complex64,
        #[arg(long, default_value_t = 10_000)]
        terms: usize,
    },
    /// Series values at z = r → 0 against the limit ln(1/|a|).
    Probe {
        #[arg(long, value_parser = parse_complex, allow_hyphen_values = true, default_value = "0.3")]
        a: Complex64,
        #[arg(long, value_delimiter = ',', default_values_t = vec![1e-2, 1e-4, 1e-6])]
        radii: Vec<f64>,
        #[arg(long, default_value_t = 10_000)]
        terms: usize,
        #[arg(long, default_value_t = 1e-4)]
        tolerance: f64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MapKind {
    Identity,
    Koebe,
    Wedge,
}

#[derive(Debug, Clone, Args)]
pub struct MapArgs {
    #[arg(long, value_enum, default_value_t = MapKind::Koebe)]
    pub map: MapKind,
    /// Wedge opening (accepts forms such as `pi/2` or `1.5`).
    #[arg(long, value_parser = parse_real, default_value = "pi/2")]
    pub alpha: f64,
}

#[derive(Debug, Subcommand)]
pub enum HardyCommand {
    /// Integral mean (1/2π)∫|φ(re^{iθ})|^p dθ.
    Mean {
        #[command(flatten)]
        map: MapArgs,
        #[arg(long)]
        p: f64,
        #[arg(long)]
        r: f64,
        /// Quadrature nodes per arc between boundary singularities.
        #[arg(long, default_value_t = 1024)]
        nodes: usize,
    },
    /// Converging/diverging verdict from means on the radii 1 − 10^{−j}.
    Threshold {
        #[command(flatten)]
        map: MapArgs,
        #[arg(long)]
        p: f64,
        #[arg(long, value_delimiter = ',', default_values_t = vec![3, 4, 5, 6])]
        ladder: Vec<i32>,
        #[arg(long, default_value_t = 2048)]
        nodes: usize,
    },
    /// Largest arc of a star-like domain and its finiteness threshold.
    Arc {
        #[arg(long, value_enum, default_value_t = DomainKind::Wedge)]
        domain: DomainKind,
        #[arg(long, value_parser = parse_real, default_value = "pi/2")]
        alpha: f64,
        /// Spiral order σ.
        #[arg(long, value_parser = parse_real, default_value = "0", allow_hyphen_values = true)]
        sigma: f64,
        #[arg(long, default_value_t = 1.0)]
        r: f64,
        #[arg(long, default_value_t = 1e6)]
        r_max: f64,
        #[arg(long, default_value_t = 100_000)]
        grid: usize,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DomainKind {
    Wedge,
    Plane,
    /// ρ(θ) = 1 + cos(θ)/2.
    Limacon,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FunctionKind {
    /// exp(z^{π/α}).
    ExpPower,
    Exp,
    /// 1/(1 + z).
    Inverse,
    Identity,
    /// z² + 1.
    Poly,
}

#[derive(Debug, Clone, Args)]
pub struct FunctionArgs {
    #[arg(long, value_enum, default_value_t = FunctionKind::ExpPower)]
    pub function: FunctionKind,
    /// Opening of the wedge the function lives on.
    #[arg(long, value_parser = parse_real, default_value = "pi/2")]
    pub alpha: f64,
}

#[derive(Debug, Clone, Args)]
pub struct RayArgs {
    #[arg(long, value_parser = parse_real, default_value = "0", allow_hyphen_values = true)]
    pub ray: f64,
    #[arg(long, default_value_t = 1.5)]
    pub r_min: f64,
    #[arg(long, default_value_t = 100.0)]
    pub r_max: f64,
    #[arg(long, default_value_t = 40)]
    pub count: usize,
}

#[derive(Debug, Subcommand)]
pub enum PlCommand {
    /// max |f| over the wedge boundary truncated at --cap.
    Boundary {
        #[command(flatten)]
        function: FunctionArgs,
        #[arg(long, default_value_t = 2000)]
        samples: usize,
        #[arg(long, default_value_t = 10.0)]
        cap: f64,
    },
    /// Growth order fitted along a ray.
    Growth {
        #[command(flatten)]
        function: FunctionArgs,
        #[command(flatten)]
        ray: RayArgs,
    },
    /// Boundary bound, growth fit and three-valued verdict.
    Verdict {
        #[command(flatten)]
        function: FunctionArgs,
        #[command(flatten)]
        ray: RayArgs,
        #[arg(long, default_value_t = 2000)]
        samples: usize,
        #[arg(long, value_delimiter = ',', default_values_t = vec![5.0, 10.0, 20.0])]
        caps: Vec<f64>,
        #[arg(long, default_value_t = 0.05)]
        margin: f64,
        /// Relative growth of the boundary sup, per cap, that signals K = ∞.
        #[arg(long, default_value_t = 0.01)]
        rel_growth: f64,
        /// Interior samples are taken inside this radius.
        #[arg(long, default_value_t = 10.0)]
        interior_radius: f64,
    },
    /// exp(z^{π/α}) on the wedge of opening α.
    Sharpness {
        #[arg(long, value_parser = parse_real, default_value = "pi/2")]
        alpha: f64,
        #[arg(long, default_value_t = 4000)]
        samples: usize,
        #[arg(long, default_value_t = 20.0)]
        cap: f64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Identity {
    Sinh,
    Cosh,
    Sin,
    Cos,
    Mirror,
}

#[derive(Debug, Subcommand)]
pub enum ProductsCommand {
    /// Truncated, tail-corrected product against the closed form.
    Check {
        #[arg(long, value_enum)]
        identity: Identity,
        #[arg(long, value_parser = parse_real, default_value = "1", allow_hyphen_values = true)]
        r: f64,
        /// Second radius of the mirror identity.
        #[arg(long, value_parser = parse_real, default_value = "1")]
        c: f64,
        /// Angle of the mirror identity.
        #[arg(long, value_parser = parse_real, default_value = "pi", allow_hyphen_values = true)]
        b: f64,
        #[arg(long, default_value_t = 100_000)]
        terms: usize,
    },
}

#[derive(Debug, Clone, Args)]
pub struct McArgs {
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true, default_value = "0")]
    pub start: Complex64,
    #[arg(long, default_value_t = 20_000)]
    pub paths: usize,
    #[arg(long, default_value_t = 1e-4)]
    pub dt: f64,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
}

#[derive(Debug, Subcommand)]
pub enum McCommand {
    /// Mean occupation time of f before the exit time.
    Occupation {
        #[command(flatten)]
        mc: McArgs,
        /// `unit`, `zero`, or `disk:<radius>` (indicator of |z| < radius).
        #[arg(long, default_value = "unit")]
        f: String,
        /// Relative tolerance added to three standard errors.
        #[arg(long)]
        tolerance: Option<f64>,
    },
    /// Fit of the constant linking occupation times to the Green's function.
    Fit {
        #[command(flatten)]
        mc: McArgs,
        #[arg(long, default_value_t = 0.05)]
        tolerance: f64,
    },
}

/// `re` or `re,im`.
pub fn parse_complex(s: &str) -> Result<Complex64, String> {
    let mut parts = s.split(',');
    let re = parse_real(parts.next().unwrap_or_default())?;
    let im = match parts.next() {
        Some(p) => parse_real(p)?,
        None => 0.0,
    };
    if parts.next().is_some() {
        return Err(format!("expected `re` or `re,im`, got `{s}`"));
    }
    Ok(Complex64::new(re, im))
}

/// A float, or a rational multiple of π such as `pi`, `-pi/3`, `3pi/2`.
pub fn parse_real(s: &str) -> Result<f64, String> {
    let t = s.trim();
    if let Ok(x) = t.parse::<f64>() {
        return Ok(x);
    }
    let (negative, body) = match t.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, t),
    };
    let (numerator, denominator) = match body.split_once('/') {
        Some((n, d)) => (n, d.parse::<f64>().map_err(|_| format!("bad denominator in `{s}`"))?),
        None => (body, 1.0),
    };
    let factor = match numerator.strip_suffix("pi") {
        Some("") => 1.0,
        Some(k) => k
            .trim_end_matches('*')
            .parse::<f64>()
            .map_err(|_| format!("bad multiple of pi in `{s}`"))?,
        None => return Err(format!("expected a number or multiple of pi, got `{s}`")),
    };
    let x = factor * PI / denominator;
    Ok(if negative { -x } else { x })
}
