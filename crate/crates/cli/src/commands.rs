//! Subcommand drivers: build the state or mixture, evaluate, write files.

use std::path::PathBuf;

use heralded_cat::detection::{
    coincidence_prior, default_m_max, fringe_amplitude, posterior_mixture, purity, MixtureEvaluator,
    PosteriorMixture,
};
use heralded_cat::phasespace::{
    component_husimi, component_husimi_peak, count_local_maxima, husimi_closed,
    photon_number_distribution, quadrature_closed, wigner_closed, wigner_of_component,
    EvalContext, PhaseSpaceGrid,
};
use heralded_cat::states::{
    component_norm_closed, component_state, component_truncation, conditional_coefficients,
    event_probability, superposition_constant, ComponentState, ConditionalState, FockVector,
};
use heralded_cat::quad::integrate;
use heralded_cat::verify::{self, VerifyOptions};
use heralded_cat::Error;
use rayon::prelude::*;
use serde::Serialize;

use crate::config::{Mode, RunConfig, Setup};
use crate::error::{CliError, CliResult};
use crate::output::{trapezoid, trapezoid_2d, write_summary, write_table, Cell, Echo, Table};

/// The state a run describes.
pub enum Prepared {
    Pure(ConditionalState),
    Mixed(PosteriorMixture),
}

pub fn prepare(run: &RunConfig) -> CliResult<Prepared> {
    match (run.mode, run.setup) {
        (Mode::Pure { m }, Setup::Alpha(alpha)) => Ok(Prepared::Pure(ConditionalState::new(alpha, m)?)),
        (
            Mode::Pure { m },
            Setup::Physical {
                kappa,
                t2,
                phi_t,
                phi_xi,
                ..
            },
        ) => {
            if event_probability(kappa, t2, m)? <= 0.0 {
                return Err(Error::ZeroProbability(format!(
                    "counting {m} photons has probability 0 for kappa = {kappa}, t2 = {t2}"
                ))
                .into());
            }
            Ok(Prepared::Pure(ConditionalState::from_setup(kappa, t2, phi_t, phi_xi, m)?))
        }
        (Mode::Detected { k, detector }, Setup::Physical { kappa, t2, .. }) => {
            let m_max = default_m_max(kappa, t2, k)?;
            let mix = posterior_mixture(&detector, kappa, t2, k, m_max)?;
            Ok(Prepared::Mixed(mix.with_rotation(run.setup.alpha_phase() / 2.0)))
        }
        (Mode::Detected { .. }, Setup::Alpha(_)) => Err(CliError::Config(
            "detected mode needs kappa and t2".into(),
        )),
    }
}

enum Evaluator {
    Pure(EvalContext),
    Mixed(MixtureEvaluator),
}

impl Evaluator {
    fn new(prepared: &Prepared) -> CliResult<Self> {
        Ok(match prepared {
            Prepared::Pure(s) => Evaluator::Pure(EvalContext::new(s)?),
            Prepared::Mixed(mix) => Evaluator::Mixed(mix.evaluator()?),
        })
    }

    fn wigner(&self, x: f64, p: f64) -> f64 {
        match self {
            Evaluator::Pure(ctx) => wigner_closed(ctx, x, p),
            Evaluator::Mixed(e) => e.wigner(x, p),
        }
    }

    fn husimi(&self, x: f64, p: f64) -> f64 {
        match self {
            Evaluator::Pure(ctx) => husimi_closed(ctx, x, p),
            Evaluator::Mixed(e) => e.husimi(x, p),
        }
    }

    fn quadrature(&self, phi: f64, x: f64) -> f64 {
        match self {
            Evaluator::Pure(ctx) => quadrature_closed(ctx, phi, x),
            Evaluator::Mixed(e) => e.quadrature(phi, x),
        }
    }
}

/// Values over an x-major grid, evaluated in parallel, in order.
fn grid_values<F: Fn(f64, f64) -> f64 + Sync>(grid: &PhaseSpaceGrid, f: F) -> Vec<f64> {
    grid.points().par_iter().map(|&(x, p)| f(x, p)).collect()
}

fn grid_table(grid: &PhaseSpaceGrid, values: &[f64]) -> Table {
    let mut t = Table::new(vec!["x", "p", "value"]);
    for ((x, p), v) in grid.points().into_iter().zip(values) {
        t.push(vec![Cell::Float(x), Cell::Float(p), Cell::Float(*v)]);
    }
    t
}

#[derive(Serialize)]
struct GridSummary {
    trapezoid_integral: f64,
    min: f64,
    max: f64,
    value_at_origin: f64,
}

fn grid_summary(grid: &PhaseSpaceGrid, values: &[f64], origin: f64) -> GridSummary {
    GridSummary {
        trapezoid_integral: trapezoid_2d(values, grid.nx, grid.np, grid.dx(), grid.dp()),
        min: values.iter().copied().fold(f64::INFINITY, f64::min),
        max: values.iter().copied().fold(f64::NEG_INFINITY, f64::max),
        value_at_origin: origin,
    }
}

fn amplitude_table(v: &FockVector) -> Table {
    let mut t = Table::new(vec!["n", "re_amplitude", "im_amplitude", "probability"]);
    for (n, a) in v.amplitudes().iter().enumerate() {
        t.push(vec![
            Cell::Int(n as i64),
            Cell::Float(a.re),
            Cell::Float(a.im),
            Cell::Float(a.norm_sqr()),
        ]);
    }
    t
}

#[derive(Serialize)]
struct MixtureComponent {
    m: usize,
    weight: f64,
}

#[derive(Serialize)]
struct MixtureFile {
    k: usize,
    prior_prob: f64,
    components: Vec<MixtureComponent>,
    truncation: usize,
}

fn mixture_file(mix: &PosteriorMixture) -> MixtureFile {
    MixtureFile {
        k: mix.k(),
        prior_prob: mix.prior_prob(),
        components: mix
            .components()
            .map(|(weight, s)| MixtureComponent { m: s.m(), weight })
            .collect(),
        truncation: mix.m_max(),
    }
}

/// `state.csv` for a pure state, `mixture.json` for a detected run.
pub fn cmd_state(run: &RunConfig) -> CliResult<Vec<PathBuf>> {
    let echo = run.echo("state");
    match prepare(run)? {
        Prepared::Pure(s) => Ok(vec![write_table(
            &run.out,
            "state",
            &echo,
            &amplitude_table(&s.fock_vector()),
            run.format,
        )?]),
        Prepared::Mixed(mix) => Ok(vec![write_summary(
            &run.out,
            "mixture.json",
            &echo,
            &mixture_file(&mix),
        )?]),
    }
}

pub fn cmd_photon_dist(run: &RunConfig) -> CliResult<Vec<PathBuf>> {
    let probs = match prepare(run)? {
        Prepared::Pure(s) => photon_number_distribution(&s),
        Prepared::Mixed(mix) => mix.photon_number_distribution(),
    };
    let mut t = Table::new(vec!["n", "P"]);
    for (n, p) in probs.iter().enumerate() {
        t.push(vec![Cell::Int(n as i64), Cell::Float(*p)]);
    }
    Ok(vec![write_table(&run.out, "photon_dist", &run.echo("photon-dist"), &t, run.format)?])
}

#[derive(Serialize)]
struct QuadratureCurve {
    phi: f64,
    file: String,
    trapezoid_integral: f64,
    /// Probability inside the sampled window, by adaptive quadrature; at wide
    /// quadratures the tails beyond the window are not negligible.
    window_mass: f64,
    local_maxima: usize,
    two_peaked: bool,
    oscillatory: bool,
}

#[derive(Serialize)]
struct QuadratureSummary {
    curves: Vec<QuadratureCurve>,
}

pub fn quadrature_stem(phi: f64) -> String {
    format!("quadrature_phi{phi:.6}")
}

pub fn cmd_quadrature(run: &RunConfig) -> CliResult<Vec<PathBuf>> {
    let eval = Evaluator::new(&prepare(run)?)?;
    let echo = run.echo("quadrature");
    let xs = run.quadrature_xs();
    let h = xs[1] - xs[0];
    let mut files = Vec::new();
    let mut curves = Vec::new();
    for &phi in &run.phases {
        let values: Vec<f64> = xs.par_iter().map(|&x| eval.quadrature(phi, x)).collect();
        let mut t = Table::new(vec!["x", "p_of_x"]);
        for (x, v) in xs.iter().zip(&values) {
            t.push(vec![Cell::Float(*x), Cell::Float(*v)]);
        }
        let stem = quadrature_stem(phi);
        let path = write_table(&run.out, &stem, &echo, &t, run.format)?;
        let maxima = count_local_maxima(&values);
        curves.push(QuadratureCurve {
            phi,
            file: path.file_name().unwrap().to_string_lossy().into_owned(),
            trapezoid_integral: trapezoid(&values, h),
            window_mass: integrate(|x| eval.quadrature(phi, x), xs[0], xs[xs.len() - 1], 1e-12).value,
            local_maxima: maxima,
            two_peaked: maxima == 2,
            oscillatory: maxima >= 3,
        });
        files.push(path);
    }
    files.push(write_summary(
        &run.out,
        "quadrature_summary.json",
        &echo,
        &QuadratureSummary { curves },
    )?);
    Ok(files)
}

pub fn cmd_wigner(run: &RunConfig) -> CliResult<Vec<PathBuf>> {
    let eval = Evaluator::new(&prepare(run)?)?;
    let echo = run.echo("wigner");
    let values = grid_values(&run.grid, |x, p| eval.wigner(x, p));
    let summary = grid_summary(&run.grid, &values, eval.wigner(0.0, 0.0));
    Ok(vec![
        write_table(&run.out, "wigner", &echo, &grid_table(&run.grid, &values), run.format)?,
        write_summary(&run.out, "wigner_summary.json", &echo, &summary)?,
    ])
}

pub fn cmd_husimi(run: &RunConfig) -> CliResult<Vec<PathBuf>> {
    let eval = Evaluator::new(&prepare(run)?)?;
    let echo = run.echo("husimi");
    let values = grid_values(&run.grid, |x, p| eval.husimi(x, p));
    let summary = grid_summary(&run.grid, &values, eval.husimi(0.0, 0.0));
    Ok(vec![
        write_table(&run.out, "husimi", &echo, &grid_table(&run.grid, &values), run.format)?,
        write_summary(&run.out, "husimi_summary.json", &echo, &summary)?,
    ])
}

#[derive(Serialize)]
struct ComponentSummary {
    sign: i8,
    alpha: f64,
    m: usize,
    component_norm: f64,
    superposition_constant: f64,
    reconstruction_residual: f64,
    point_reflection_residual: f64,
    point_reflection_verified: bool,
    husimi_peak: [f64; 2],
    wigner_min: f64,
}

fn component_pair(alpha: f64, m: usize) -> CliResult<(ComponentState, ComponentState, usize)> {
    let n_max = component_truncation(alpha, m)?;
    Ok((
        component_state(1, alpha, m, n_max)?,
        component_state(-1, alpha, m, n_max)?,
        n_max,
    ))
}

pub fn cmd_component(run: &RunConfig, sign: i8) -> CliResult<Vec<PathBuf>> {
    let Mode::Pure { m } = run.mode else {
        return Err(CliError::Config("component states need pure mode (m)".into()));
    };
    let alpha = run.setup.alpha();
    if run.setup.alpha_phase() != 0.0 || !(alpha > 0.0) {
        return Err(CliError::Config(
            "component states need a real, positive alpha".into(),
        ));
    }
    if let Setup::Physical { kappa, t2, .. } = run.setup {
        if event_probability(kappa, t2, m)? <= 0.0 {
            return Err(Error::ZeroProbability(format!(
                "counting {m} photons has probability 0 for kappa = {kappa}, t2 = {t2}"
            ))
            .into());
        }
    }
    let echo = {
        let mut e = run.echo("component");
        e.push(("sign".into(), if sign > 0 { "+" } else { "-" }.into()));
        e
    };
    let (plus, minus, n_max) = component_pair(alpha, m)?;
    let a = superposition_constant(alpha, m)?;
    let state = conditional_coefficients(alpha, m, n_max)?;
    let rebuilt = FockVector::new(
        (0..=n_max)
            .map(|n| a * (plus.coefficients().get(n) + minus.coefficients().get(n)))
            .collect(),
    );
    let residual = rebuilt.max_abs_diff(state.coefficients());
    let (this, other) = if sign > 0 { (&plus, &minus) } else { (&minus, &plus) };

    let grid = &run.grid;
    let wigner = grid_values(grid, |x, p| wigner_of_component(this, x, p));
    let husimi = grid_values(grid, |x, p| component_husimi(this, x, p));
    // the other sign at reflected points, on a coarse subset of the grid
    let stride_x = (grid.nx / 20).max(1);
    let stride_p = (grid.np / 20).max(1);
    let points = grid.points();
    let reflection = (0..grid.nx)
        .step_by(stride_x)
        .flat_map(|i| (0..grid.np).step_by(stride_p).map(move |j| (i, j)))
        .map(|(i, j)| {
            let (x, p) = points[i * grid.np + j];
            (wigner[i * grid.np + j] - wigner_of_component(other, -x, -p)).abs()
        })
        .fold(0.0, f64::max);
    let peak = component_husimi_peak(this);
    let summary = ComponentSummary {
        sign,
        alpha,
        m,
        component_norm: component_norm_closed(alpha, m)?,
        superposition_constant: a,
        reconstruction_residual: residual,
        point_reflection_residual: reflection,
        point_reflection_verified: reflection < 1e-10,
        husimi_peak: [peak.0, peak.1],
        wigner_min: wigner.iter().copied().fold(f64::INFINITY, f64::min),
    };
    Ok(vec![
        write_table(&run.out, "component_state", &echo, &amplitude_table(this.coefficients()), run.format)?,
        write_table(&run.out, "component_wigner", &echo, &grid_table(grid, &wigner), run.format)?,
        write_table(&run.out, "component_husimi", &echo, &grid_table(grid, &husimi), run.format)?,
        write_summary(&run.out, "component_summary.json", &echo, &summary)?,
    ])
}

#[derive(Serialize)]
struct DetectSummary {
    purity: f64,
    even_weight: f64,
    odd_weight: f64,
    fringe_amplitude: f64,
}

/// Coincidence priors for every k, the posterior mixture for the requested
/// k, and a short summary of how mixed it is.
pub fn cmd_detect(run: &RunConfig) -> CliResult<Vec<PathBuf>> {
    let (Mode::Detected { detector, .. }, Setup::Physical { kappa, t2, .. }) = (run.mode, run.setup) else {
        return Err(CliError::Config("detect needs k (and kappa/t2)".into()));
    };
    let echo = run.echo("detect");
    let m_max = default_m_max(kappa, t2, detector.n_diodes())?;
    let mut t = Table::new(vec!["k", "prior_prob"]);
    for j in 0..=detector.n_diodes() {
        t.push(vec![
            Cell::Int(j as i64),
            Cell::Float(coincidence_prior(&detector, kappa, t2, j, m_max)?),
        ]);
    }
    let priors = write_table(&run.out, "priors", &echo, &t, run.format)?;
    let Prepared::Mixed(mix) = prepare(run)? else {
        unreachable!("detected mode prepares a mixture")
    };
    let even: f64 = mix.weights().iter().step_by(2).sum();
    let summary = DetectSummary {
        purity: purity(&mix),
        even_weight: even,
        odd_weight: 1.0 - even,
        fringe_amplitude: fringe_amplitude(&mix)?,
    };
    Ok(vec![
        write_summary(&run.out, "mixture.json", &echo, &mixture_file(&mix))?,
        priors,
        write_summary(&run.out, "detect_summary.json", &echo, &summary)?,
    ])
}

/// Run the cross-check suite; writes `verify.json` and fails if any check does.
pub fn cmd_verify(out: &std::path::Path, perturb: bool) -> CliResult<(PathBuf, verify::Report)> {
    let report = verify::run(VerifyOptions { perturb })?;
    let echo: Echo = vec![
        ("command".into(), "verify".into()),
        ("perturb".into(), perturb.to_string()),
    ];
    let path = write_summary(out, "verify.json", &echo, &report)?;
    Ok((path, report))
}
