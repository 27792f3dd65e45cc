//! Run configuration: command-line flags over a JSON config file over
//! built-in defaults. No environment variables are read.

use std::f64::consts::PI;
use std::path::{Path, PathBuf};

use clap::{Args, ValueEnum};
use heralded_cat::detection::DetectorModel;
use heralded_cat::phasespace::PhaseSpaceGrid;
use serde::Deserialize;

use crate::error::{CliError, CliResult};

pub const DEFAULT_KAPPA: f64 = 0.75;
pub const DEFAULT_T2: f64 = 0.8;
pub const DEFAULT_DIODES: usize = 10;
pub const DEFAULT_ETA: f64 = 0.8;
/// Quadrature axis when no grid is given: x ∈ [−6, 6] at 601 points.
pub const DEFAULT_QUADRATURE: (f64, f64, usize) = (-6.0, 6.0, 601);

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

/// Parameters shared by every physics subcommand.
#[derive(Debug, Clone, Default, Args)]
pub struct Params {
    /// Squeezing parameter |κ| = tanh|ξ|, in [0, 1).
    #[arg(long, allow_hyphen_values = true)]
    pub kappa: Option<f64>,
    /// Beam-splitter transmittance |T|², in (0, 1].
    #[arg(long)]
    pub t2: Option<f64>,
    /// Effective α = |T|²κ directly (pure states only; excludes --kappa/--t2).
    #[arg(long, allow_hyphen_values = true, conflicts_with_all = ["kappa", "t2"])]
    pub alpha: Option<f64>,
    /// Transmittance phase φ_T (radians).
    #[arg(long = "phi-t", allow_hyphen_values = true, value_parser = parse_angle)]
    pub phi_t: Option<f64>,
    /// Reflectance phase φ_R (radians); changes only the global phase.
    #[arg(long = "phi-r", allow_hyphen_values = true, value_parser = parse_angle)]
    pub phi_r: Option<f64>,
    /// Squeezing phase φ_ξ (radians).
    #[arg(long = "phi-xi", allow_hyphen_values = true, value_parser = parse_angle)]
    pub phi_xi: Option<f64>,
    /// Photon number counted by an ideal detector (pure-state mode).
    #[arg(long)]
    pub m: Option<usize>,
    /// Coincidences recorded by the multiplexed detector (detected mode).
    #[arg(long)]
    pub k: Option<usize>,
    /// Number of on/off diodes N.
    #[arg(long)]
    pub diodes: Option<usize>,
    /// Detection efficiency η, in (0, 1].
    #[arg(long)]
    pub eta: Option<f64>,
    /// Quadrature phase; repeatable. Accepts numbers or forms like pi/2, 3pi/4.
    #[arg(long = "phi", allow_hyphen_values = true, value_parser = parse_angle)]
    pub phi: Vec<f64>,
    /// Phase-space grid xmin,xmax,pmin,pmax,nx,np.
    #[arg(long, allow_hyphen_values = true)]
    pub grid: Option<String>,
    /// Output directory.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Table format.
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// JSON file with any of the above fields; flags take precedence.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
enum Angle {
    Number(f64),
    Text(String),
}

impl Angle {
    fn value(&self) -> CliResult<f64> {
        match self {
            Angle::Number(v) => Ok(*v),
            Angle::Text(t) => parse_angle(t).map_err(CliError::Config),
        }
    }
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileParams {
    kappa: Option<f64>,
    t2: Option<f64>,
    alpha: Option<f64>,
    phi_t: Option<Angle>,
    phi_r: Option<Angle>,
    phi_xi: Option<Angle>,
    m: Option<usize>,
    k: Option<usize>,
    diodes: Option<usize>,
    eta: Option<f64>,
    phi: Option<Vec<Angle>>,
    grid: Option<String>,
    out: Option<PathBuf>,
    format: Option<Format>,
}

fn opt_angle(a: Option<Angle>) -> CliResult<Option<f64>> {
    a.map(|a| a.value()).transpose()
}

impl FileParams {
    fn load(path: &Path) -> CliResult<Params> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        let f: FileParams = serde_json::from_str(&text)
            .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        if f.alpha.is_some() && (f.kappa.is_some() || f.t2.is_some()) {
            return Err(CliError::Config(format!(
                "{}: alpha excludes kappa/t2",
                path.display()
            )));
        }
        let phi = f
            .phi
            .unwrap_or_default()
            .iter()
            .map(Angle::value)
            .collect::<CliResult<Vec<_>>>()?;
        Ok(Params {
            kappa: f.kappa,
            t2: f.t2,
            alpha: f.alpha,
            phi_t: opt_angle(f.phi_t)?,
            phi_r: opt_angle(f.phi_r)?,
            phi_xi: opt_angle(f.phi_xi)?,
            m: f.m,
            k: f.k,
            diodes: f.diodes,
            eta: f.eta,
            phi,
            grid: f.grid,
            out: f.out,
            format: f.format,
            config: None,
        })
    }
}

/// Angle in radians: a number, or `[a]pi[/b]` such as `pi/2`, `-3pi/4`, `2pi`.
pub fn parse_angle(text: &str) -> Result<f64, String> {
    let t = text.trim();
    if let Ok(v) = t.parse::<f64>() {
        return if v.is_finite() {
            Ok(v)
        } else {
            Err(format!("angle {t} is not finite"))
        };
    }
    let lower = t.to_ascii_lowercase();
    let Some(at) = lower.find("pi") else {
        return Err(format!("cannot read angle {t:?}"));
    };
    let head = lower[..at].trim_end_matches('*');
    let tail = &lower[at + 2..];
    let factor = match head {
        "" => 1.0,
        "-" => -1.0,
        h => h.parse::<f64>().map_err(|_| format!("cannot read angle {t:?}"))?,
    };
    let divisor = match tail {
        "" => 1.0,
        d => d
            .strip_prefix('/')
            .and_then(|d| d.parse::<f64>().ok())
            .filter(|d| *d != 0.0)
            .ok_or_else(|| format!("cannot read angle {t:?}"))?,
    };
    Ok(factor * PI / divisor)
}

pub fn parse_grid(text: &str) -> CliResult<PhaseSpaceGrid> {
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    if parts.len() != 6 {
        return Err(CliError::Config(format!(
            "grid {text:?} needs xmin,xmax,pmin,pmax,nx,np"
        )));
    }
    let num = |s: &str| {
        s.parse::<f64>()
            .map_err(|_| CliError::Config(format!("grid entry {s:?} is not a number")))
    };
    let count = |s: &str| {
        s.parse::<usize>()
            .map_err(|_| CliError::Config(format!("grid size {s:?} is not a count")))
    };
    PhaseSpaceGrid::new(
        num(parts[0])?,
        num(parts[1])?,
        num(parts[2])?,
        num(parts[3])?,
        count(parts[4])?,
        count(parts[5])?,
    )
    .map_err(|e| CliError::Config(e.to_string()))
}

/// How the state was specified.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Setup {
    Physical {
        kappa: f64,
        t2: f64,
        phi_t: f64,
        phi_r: f64,
        phi_xi: f64,
    },
    Alpha(f64),
}

impl Setup {
    /// |α| with its sign for real setups (a negative κ is not offered).
    pub fn alpha(&self) -> f64 {
        match *self {
            Setup::Physical { kappa, t2, .. } => kappa * t2,
            Setup::Alpha(a) => a,
        }
    }

    /// Phase of the effective complex α.
    pub fn alpha_phase(&self) -> f64 {
        match *self {
            Setup::Physical { phi_t, phi_xi, .. } => phi_xi + 2.0 * phi_t,
            Setup::Alpha(_) => 0.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Mode {
    Pure { m: usize },
    Detected { k: usize, detector: DetectorModel },
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub setup: Setup,
    pub mode: Mode,
    pub grid: PhaseSpaceGrid,
    /// Whether the grid came from the user (it then also sets the quadrature axis).
    pub grid_given: bool,
    pub phases: Vec<f64>,
    pub out: PathBuf,
    pub format: Format,
}

impl RunConfig {
    /// Quadrature sample points.
    pub fn quadrature_xs(&self) -> Vec<f64> {
        if self.grid_given {
            self.grid.xs()
        } else {
            let (lo, hi, n) = DEFAULT_QUADRATURE;
            (0..n)
                .map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
                .collect()
        }
    }

    /// `key=value` pairs echoed at the top of every output file.
    pub fn echo(&self, command: &str) -> Vec<(String, String)> {
        let mut e = vec![("command".to_string(), command.to_string())];
        let mut push = |k: &str, v: String| e.push((k.to_string(), v));
        match self.setup {
            Setup::Physical {
                kappa,
                t2,
                phi_t,
                phi_r,
                phi_xi,
            } => {
                push("kappa", kappa.to_string());
                push("t2", t2.to_string());
                push("phi_t", phi_t.to_string());
                push("phi_r", phi_r.to_string());
                push("phi_xi", phi_xi.to_string());
                push("alpha", (kappa * t2).to_string());
            }
            Setup::Alpha(a) => push("alpha", a.to_string()),
        }
        match self.mode {
            Mode::Pure { m } => push("m", m.to_string()),
            Mode::Detected { k, detector } => {
                push("k", k.to_string());
                push("diodes", detector.n_diodes().to_string());
                push("eta", detector.efficiency().to_string());
            }
        }
        let g = &self.grid;
        push(
            "grid",
            format!(
                "{},{},{},{},{},{}",
                g.x_min, g.x_max, g.p_min, g.p_max, g.nx, g.np
            ),
        );
        let phases: Vec<String> = self.phases.iter().map(|p| p.to_string()).collect();
        push("phi", phases.join(","));
        e
    }
}

fn layer<T>(cli: Option<T>, file: Option<T>) -> Option<T> {
    cli.or(file)
}

/// Resolve flags, the optional config file and defaults into a run.
pub fn resolve(cli: &Params) -> CliResult<RunConfig> {
    let file = match &cli.config {
        Some(path) => FileParams::load(path)?,
        None => Params::default(),
    };
    // a flag on either side of the alpha / (kappa, t2) choice overrides
    // the file's choice entirely
    let cli_alpha = cli.alpha.is_some();
    let cli_physical = cli.kappa.is_some() || cli.t2.is_some();
    let (alpha, kappa, t2) = if cli_alpha {
        (cli.alpha, None, None)
    } else if cli_physical {
        (None, layer(cli.kappa, file.kappa), layer(cli.t2, file.t2))
    } else {
        (file.alpha, file.kappa, file.t2)
    };
    let phi_t = layer(cli.phi_t, file.phi_t);
    let phi_r = layer(cli.phi_r, file.phi_r);
    let phi_xi = layer(cli.phi_xi, file.phi_xi);

    let setup = match alpha {
        Some(a) => {
            if phi_t.is_some() || phi_r.is_some() || phi_xi.is_some() {
                return Err(CliError::Config(
                    "phases apply to kappa/t2 setups, not to a bare alpha".into(),
                ));
            }
            if !(a.is_finite() && a.abs() < 1.0) {
                return Err(CliError::Config(format!("|alpha| = {a} must be below 1")));
            }
            Setup::Alpha(a)
        }
        None => {
            let kappa = kappa.unwrap_or(DEFAULT_KAPPA);
            let t2 = t2.unwrap_or(DEFAULT_T2);
            if !(0.0..1.0).contains(&kappa) {
                return Err(CliError::Config(format!("kappa = {kappa} outside [0, 1)")));
            }
            if !(t2 > 0.0 && t2 <= 1.0) {
                return Err(CliError::Config(format!("t2 = {t2} outside (0, 1]")));
            }
            Setup::Physical {
                kappa,
                t2,
                phi_t: phi_t.unwrap_or(0.0),
                phi_r: phi_r.unwrap_or(0.0),
                phi_xi: phi_xi.unwrap_or(0.0),
            }
        }
    };

    let m = layer(cli.m, file.m);
    let k = layer(cli.k, file.k);
    let diodes = layer(cli.diodes, file.diodes);
    let eta = layer(cli.eta, file.eta);
    let mode = match (m, k) {
        (Some(_), Some(_)) => {
            return Err(CliError::Config("give either m (pure) or k (detected), not both".into()))
        }
        (Some(m), None) => {
            if diodes.is_some() || eta.is_some() {
                return Err(CliError::Config(
                    "detector settings (diodes, eta) need detected mode (k)".into(),
                ));
            }
            Mode::Pure { m }
        }
        (None, Some(k)) => {
            if matches!(setup, Setup::Alpha(_)) {
                return Err(CliError::Config(
                    "detected mode needs kappa and t2 for the photon-number prior".into(),
                ));
            }
            let detector = DetectorModel::new(
                diodes.unwrap_or(DEFAULT_DIODES),
                eta.unwrap_or(DEFAULT_ETA),
            )
            .map_err(|e| CliError::Config(e.to_string()))?;
            if k > detector.n_diodes() {
                return Err(CliError::Config(format!(
                    "k = {k} exceeds {} diodes",
                    detector.n_diodes()
                )));
            }
            Mode::Detected { k, detector }
        }
        (None, None) => {
            if diodes.is_some() || eta.is_some() {
                return Err(CliError::Config(
                    "detector settings (diodes, eta) need detected mode (k)".into(),
                ));
            }
            Mode::Pure { m: 1 }
        }
    };

    let grid_text = layer(cli.grid.clone(), file.grid);
    let grid = match &grid_text {
        Some(t) => parse_grid(t)?,
        None => PhaseSpaceGrid::default(),
    };
    let phases = if !cli.phi.is_empty() {
        cli.phi.clone()
    } else if !file.phi.is_empty() {
        file.phi
    } else {
        vec![0.0, PI / 2.0]
    };
    Ok(RunConfig {
        setup,
        mode,
        grid,
        grid_given: grid_text.is_some(),
        phases,
        out: layer(cli.out.clone(), file.out).unwrap_or_else(|| PathBuf::from(".")),
        format: layer(cli.format, file.format).unwrap_or(Format::Csv),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn angles() {
        assert_eq!(parse_angle("0.5").unwrap(), 0.5);
        assert_eq!(parse_angle("pi/2").unwrap(), PI / 2.0);
        assert_eq!(parse_angle("-3pi/4").unwrap(), -3.0 * PI / 4.0);
        assert_eq!(parse_angle("2*pi").unwrap(), 2.0 * PI);
        assert!(parse_angle("pi/0").is_err());
        assert!(parse_angle("half").is_err());
    }

    #[test]
    fn grids() {
        let g = parse_grid("-5,5,-4,4,11,21").unwrap();
        assert_eq!((g.nx, g.np, g.p_min), (11, 21, -4.0));
        assert!(parse_grid("-5,5,-5,5,1,10").is_err());
        assert!(parse_grid("-5,5,-5,5,10").is_err());
    }

    #[test]
    fn defaults_and_modes() {
        let run = resolve(&Params::default()).unwrap();
        assert_eq!(run.mode, Mode::Pure { m: 1 });
        assert!((run.setup.alpha() - 0.6).abs() < 1e-15);
        assert_eq!(run.grid, PhaseSpaceGrid::default());
        assert_eq!(run.quadrature_xs().len(), 601);

        let both = Params {
            m: Some(1),
            k: Some(1),
            ..Params::default()
        };
        assert!(matches!(resolve(&both), Err(CliError::Config(_))));
        let pure_with_detector = Params {
            m: Some(1),
            eta: Some(0.5),
            ..Params::default()
        };
        assert!(matches!(resolve(&pure_with_detector), Err(CliError::Config(_))));
        let detected_alpha = Params {
            k: Some(1),
            alpha: Some(0.6),
            ..Params::default()
        };
        assert!(matches!(resolve(&detected_alpha), Err(CliError::Config(_))));
        let detected = Params {
            k: Some(2),
            ..Params::default()
        };
        let run = resolve(&detected).unwrap();
        assert!(matches!(run.mode, Mode::Detected { k: 2, .. }));
    }

    #[test]
    fn flags_override_file() {
        let dir = std::env::temp_dir().join(format!("hc-config-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("run.json");
        std::fs::write(&path, r#"{"alpha": 0.3, "m": 4, "phi": ["pi/2"], "format": "json"}"#).unwrap();
        let from_file = resolve(&Params {
            config: Some(path.clone()),
            ..Params::default()
        })
        .unwrap();
        assert_eq!(from_file.setup, Setup::Alpha(0.3));
        assert_eq!(from_file.mode, Mode::Pure { m: 4 });
        assert_eq!(from_file.phases, vec![PI / 2.0]);
        assert_eq!(from_file.format, Format::Json);

        let overridden = resolve(&Params {
            config: Some(path.clone()),
            kappa: Some(0.5),
            m: Some(2),
            ..Params::default()
        })
        .unwrap();
        assert!(matches!(overridden.setup, Setup::Physical { kappa, .. } if kappa == 0.5));
        assert_eq!(overridden.mode, Mode::Pure { m: 2 });

        std::fs::write(&path, r#"{"alpha": 0.3, "kappa": 0.5}"#).unwrap();
        assert!(matches!(
            resolve(&Params {
                config: Some(path.clone()),
                ..Params::default()
            }),
            Err(CliError::Config(_))
        ));
        std::fs::write(&path, r#"{"colour": 1}"#).unwrap();
        assert!(matches!(
            resolve(&Params {
                config: Some(path),
                ..Params::default()
            }),
            Err(CliError::Config(_))
        ));
        std::fs::remove_dir_all(dir).unwrap();
    }
}
