//! Command execution: resolved configs in, plain-data artifacts out.

use stable_limits::{
    deep_recursion, estimate_stability, ks_against_prediction, sample, sample_deep,
    sample_shallow_ensemble, sample_surface, shallow_limit, survival_asymptote, tail_scan,
    CheckResult, EnsembleConfig, LayerLaw, LayerScaleSequence, LimitPrediction, NetworkConfig,
    Scaling, StableParams, TailRow, VerificationReport,
};

use crate::config::{Command, NetworkSection, RunConfig};

/// Everything a run can produce; each variant renders to JSON and CSV.
pub enum Artifact {
    /// Layer-by-layer laws plus the output limit.
    Prediction {
        layers: LayerScaleSequence,
        output_law: LimitPrediction,
    },
    /// One number per replication (`simulate`) or per draw (`sample`).
    Values(Vec<f64>),
    Report(VerificationReport),
    TailTable(Vec<TailRow>),
    /// `values[i]` is the fixed network evaluated at `t[i] · input_x`.
    Surface {
        t: Vec<f64>,
        values: Vec<f64>,
    },
}

/// Runs a resolved config. Library errors bubble up; pass/fail is the
/// caller's to read off a `Report` artifact.
pub fn execute(config: &RunConfig) -> Result<Artifact, stable_limits::Error> {
    match config.command {
        Command::Predict => predict(config),
        Command::Simulate => Ok(Artifact::Values(simulate(config)?)),
        Command::Verify => verify(config),
        Command::Tailscan => tailscan(config),
        Command::Surface => surface(config),
        Command::Sample => sample_stable(config),
    }
}

fn network(config: &RunConfig) -> &NetworkSection {
    config
        .network
        .as_ref()
        .expect("resolve() already required the network section")
}

fn activation(network: &NetworkSection) -> stable_limits::ActivationSpec {
    network
        .activation_spec()
        .expect("resolve() already validated the activation")
}

fn to_network_config(section: &NetworkSection) -> Result<NetworkConfig, stable_limits::Error> {
    NetworkConfig::new(
        section.alpha,
        section.sigma_w,
        section.sigma_b,
        section
            .input()
            .expect("resolve() already required input_x")
            .to_vec(),
        section.depth_l,
        activation(section),
        section.bias_regime,
        section.scaling,
    )
}

fn ensemble_config(config: &RunConfig) -> EnsembleConfig {
    EnsembleConfig::new(
        config.ensemble.width_n,
        config.ensemble.replications,
        config.ensemble.seed,
        config.ensemble.growth_mode,
    )
}

/// The predicted layer sequence and output law for either network form.
fn prediction_for(
    section: &NetworkSection,
) -> Result<(LayerScaleSequence, LimitPrediction), stable_limits::Error> {
    let spec = activation(section);
    let layers = match section
        .hidden_override()
        .expect("resolve() validated the override")
    {
        Some((hidden_alpha, hidden_sigma)) => {
            let output = shallow_limit(
                hidden_alpha,
                hidden_sigma,
                section.alpha,
                section.sigma_w,
                &spec,
            )?;
            LayerScaleSequence {
                layers: vec![
                    LayerLaw {
                        stability: hidden_alpha,
                        sigma: hidden_sigma,
                    },
                    LayerLaw {
                        stability: output.stability,
                        sigma: output.scale,
                    },
                ],
            }
        }
        None => deep_recursion(
            section.alpha,
            section.sigma_w,
            section.sigma_b,
            section.input().expect("resolve() already required input_x"),
            section.depth_l,
            &spec,
        )?,
    };
    let out = *layers.output();
    let output_law = LimitPrediction {
        stability: out.stability,
        scale: out.sigma,
        scaling_exponent: out.stability,
        log_correction: section.scaling == Scaling::NLogN,
        centering: 0.0,
    };
    Ok((layers, output_law))
}

fn predict(config: &RunConfig) -> Result<Artifact, stable_limits::Error> {
    let (layers, output_law) = prediction_for(network(config))?;
    Ok(Artifact::Prediction { layers, output_law })
}

fn simulate(config: &RunConfig) -> Result<Vec<f64>, stable_limits::Error> {
    let section = network(config);
    match section
        .hidden_override()
        .expect("resolve() validated the override")
    {
        Some((hidden_alpha, hidden_sigma)) => sample_shallow_ensemble(
            config.ensemble.width_n,
            hidden_alpha,
            hidden_sigma,
            section.alpha,
            section.sigma_w,
            &activation(section),
            section.scaling,
            config.ensemble.seed,
            config.ensemble.replications,
        ),
        None => sample_deep(&to_network_config(section)?, &ensemble_config(config)),
    }
}

fn verify(config: &RunConfig) -> Result<Artifact, stable_limits::Error> {
    let (_, predicted) = prediction_for(network(config))?;
    let values = simulate(config)?;
    let (alpha_hat, sigma_hat) = estimate_stability(&values)?;
    let ks_distance = ks_against_prediction(&values, &predicted)?;

    let tolerance = |name: &str| {
        *config
            .tolerances
            .get(name)
            .expect("resolve() filled every tolerance default")
    };
    let check = |name: &str, observed: f64| CheckResult {
        name: name.to_string(),
        tolerance: tolerance(name),
        observed,
        pass: observed <= tolerance(name),
    };
    let checks = vec![
        check("ks", ks_distance),
        check("alpha", (alpha_hat - predicted.stability).abs()),
        check("sigma", (sigma_hat / predicted.scale - 1.0).abs()),
    ];

    Ok(Artifact::Report(VerificationReport {
        alpha_hat,
        sigma_hat,
        ks_distance,
        tail_table: Vec::new(),
        checks,
        sample_count: config.ensemble.replications,
        width: config.ensemble.width_n,
        seed: config.ensemble.seed,
    }))
}

fn tailscan(config: &RunConfig) -> Result<Artifact, stable_limits::Error> {
    let (_, predicted) = prediction_for(network(config))?;
    let values = simulate(config)?;
    let asymptote = survival_asymptote(&StableParams::symmetric(
        predicted.stability,
        predicted.scale,
    )?)?;
    let levels = &config
        .tailscan
        .as_ref()
        .expect("resolve() materialized the tailscan section")
        .levels;
    Ok(Artifact::TailTable(tail_scan(&values, &asymptote, levels)?))
}

fn surface(config: &RunConfig) -> Result<Artifact, stable_limits::Error> {
    let section = network(config);
    let grid_spec = config
        .surface
        .as_ref()
        .expect("resolve() materialized the surface section");
    let input = section.input().expect("resolve() already required input_x");
    let t: Vec<f64> = (0..grid_spec.points)
        .map(|i| {
            let frac = i as f64 / (grid_spec.points - 1) as f64;
            -grid_spec.span + 2.0 * grid_spec.span * frac
        })
        .collect();
    let grid: Vec<Vec<f64>> = t
        .iter()
        .map(|&ti| input.iter().map(|&x| ti * x).collect())
        .collect();
    let values = sample_surface(
        &to_network_config(section)?,
        &grid,
        config.ensemble.width_n,
        config.ensemble.seed,
    )?;
    Ok(Artifact::Surface { t, values })
}

fn sample_stable(config: &RunConfig) -> Result<Artifact, stable_limits::Error> {
    let stable = config
        .stable
        .as_ref()
        .expect("resolve() materialized the stable section");
    let params = StableParams::new(stable.alpha, stable.beta, stable.sigma, stable.mu)?;
    Ok(Artifact::Values(sample(
        &params,
        config.ensemble.replications,
        config.ensemble.seed,
    )))
}
