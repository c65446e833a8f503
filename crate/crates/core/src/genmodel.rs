//! Data generation under H0 and H1 in two provenance modes: parameters drawn
//! from the prior, or fixed by the experimenter. Also evaluates prior
//! densities and tail masses where closed forms exist.

use std::collections::BTreeMap;

use rand::Rng;
use rand_distr::{Distribution, Gamma, StandardNormal};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bayes::GdScheme;
use crate::special::std_normal_tail;

/// Which hypothesis a replicate is generated under.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Hypothesis {
    H0,
    H1,
}

impl Hypothesis {
    pub fn label(self) -> &'static str {
        match self {
            Hypothesis::H0 => "H0",
            Hypothesis::H1 => "H1",
        }
    }
}

/// Whether parameter values came from the prior or were set by hand.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    FromPrior,
    Fixed,
}

/// The model families the laboratory can simulate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModelFamily {
    NormalKnownVar,
    NormalJeffreysVar,
    Jzs,
    GPriorRegression,
    Bernoulli,
    Contingency,
}

/// The four-way prior taxonomy: group-invariant nuisance priors (0), proper
/// design-independent defaults (I), proper design-dependent defaults (II),
/// and stopping-rule-dependent or otherwise improper non-invariant priors
/// (III). Type III cases are documented but never instantiated by a built-in
/// family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum TypeClass {
    Type0,
    TypeI,
    TypeII,
    TypeIII,
}

/// Prior specification for one family, carrying its shape parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum PriorSpec {
    /// μ ~ N(0, 1) under H1, observation noise σ = 1 known.
    NormalKnownVar,
    /// μ | σ ~ N(0, σ²) under H1, Jeffreys' 1/σ on the scale in both models.
    NormalJeffreysVar,
    /// Effect size (μ − μ₀)/σ ~ Cauchy(0, r) under H1, Jeffreys' 1/σ shared.
    Jzs { r: f64, mu0: f64 },
    /// β | g, σ ~ N(0, g σ² n (X'X)⁻¹), g ~ IG(1/2, √2/8), 1/σ on (μ, σ).
    GPriorRegression,
    /// θ ~ Beta(1/2, 1/2) under H1 against the point null θ = θ₀.
    BernoulliJeffreys { theta0: f64 },
    /// Conjugate contingency-table priors, see [`crate::bayes::GdScheme`].
    ContingencyGd { scheme: GdScheme, a: f64 },
}

impl PriorSpec {
    pub fn family(&self) -> ModelFamily {
        match self {
            PriorSpec::NormalKnownVar => ModelFamily::NormalKnownVar,
            PriorSpec::NormalJeffreysVar => ModelFamily::NormalJeffreysVar,
            PriorSpec::Jzs { .. } => ModelFamily::Jzs,
            PriorSpec::GPriorRegression => ModelFamily::GPriorRegression,
            PriorSpec::BernoulliJeffreys { .. } => ModelFamily::Bernoulli,
            PriorSpec::ContingencyGd { .. } => ModelFamily::Contingency,
        }
    }

    /// Taxonomy class of the prior on the parameter of interest. For the
    /// t-test the Cauchy on the effect size is Type I while the shared 1/σ
    /// nuisance component is the Type 0 part.
    pub fn type_class(&self) -> TypeClass {
        match self {
            PriorSpec::NormalKnownVar => TypeClass::TypeI,
            PriorSpec::NormalJeffreysVar => TypeClass::Type0,
            PriorSpec::Jzs { .. } => TypeClass::TypeI,
            PriorSpec::GPriorRegression => TypeClass::TypeII,
            PriorSpec::BernoulliJeffreys { .. } => TypeClass::TypeII,
            PriorSpec::ContingencyGd { .. } => TypeClass::TypeII,
        }
    }

    pub fn validate(&self) -> Result<(), GenError> {
        match self {
            PriorSpec::Jzs { r, mu0 } => {
                if !(r.is_finite() && *r > 0.0) {
                    return Err(GenError::InvalidArgument(format!(
                        "Cauchy scale must be positive, got {r}"
                    )));
                }
                if !mu0.is_finite() {
                    return Err(GenError::InvalidArgument("null mean must be finite".into()));
                }
            }
            PriorSpec::BernoulliJeffreys { theta0 } => {
                if !(*theta0 > 0.0 && *theta0 < 1.0) {
                    return Err(GenError::InvalidArgument(format!(
                        "null parameter must lie in (0, 1), got {theta0}"
                    )));
                }
            }
            PriorSpec::ContingencyGd { a, .. } if !(a.is_finite() && *a > 0.0) => {
                return Err(GenError::InvalidArgument(format!(
                    "prior concentration must be positive, got {a}"
                )));
            }
            _ => {}
        }
        Ok(())
    }
}

/// A realized parameter set for one replicate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParameterDraw {
    pub family: ModelFamily,
    pub hypothesis: Hypothesis,
    pub values: BTreeMap<String, f64>,
    pub provenance: Provenance,
}

impl ParameterDraw {
    pub fn get(&self, name: &str) -> Option<f64> {
        self.values.get(name).copied()
    }

    fn require(&self, name: &str) -> Result<f64, GenError> {
        self.get(name).ok_or_else(|| GenError::MissingParameter {
            name: name.to_string(),
            family: self.family,
        })
    }

    /// Scales must be positive, probabilities must live in [0, 1], and
    /// everything must be finite.
    pub fn validate(&self) -> Result<(), GenError> {
        for (name, value) in &self.values {
            if !value.is_finite() {
                return Err(GenError::InvalidArgument(format!(
                    "parameter '{name}' is not finite"
                )));
            }
            if name == "sigma" && *value <= 0.0 {
                return Err(GenError::InvalidArgument(format!(
                    "sigma must be positive, got {value}"
                )));
            }
            if (name == "theta" || name.starts_with("theta_") || name == "phi")
                && !(0.0..=1.0).contains(value)
            {
                return Err(GenError::InvalidArgument(format!(
                    "'{name}' must lie in [0, 1], got {value}"
                )));
            }
        }
        Ok(())
    }
}

/// Covariate levels of a fixed regression design.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DesignMatrix {
    pub x_values: Vec<f64>,
}

impl DesignMatrix {
    pub fn new(x_values: Vec<f64>) -> Result<Self, GenError> {
        if x_values.is_empty() {
            return Err(GenError::InvalidArgument("design must be nonempty".into()));
        }
        if x_values.iter().any(|x| !x.is_finite()) {
            return Err(GenError::InvalidArgument("design values must be finite".into()));
        }
        let first = x_values[0];
        if x_values.iter().all(|&x| x == first) {
            return Err(GenError::InvalidArgument(
                "design is singular: all covariate levels equal".into(),
            ));
        }
        Ok(Self { x_values })
    }

    /// The fertilizer-dose ladder: doses 0.1, 0.2, …, 2.0, repeated row by
    /// row for designs larger than twenty pots.
    pub fn dose_ladder(n: usize) -> Self {
        let x_values = (0..n).map(|i| 0.1 * ((i % 20) + 1) as f64).collect();
        Self { x_values }
    }

    pub fn len(&self) -> usize {
        self.x_values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.x_values.is_empty()
    }

    /// Raw (uncentered) Σxᵢ², the 1-covariate Gram entry used by the β prior.
    pub fn sum_sq(&self) -> f64 {
        self.x_values.iter().map(|x| x * x).sum()
    }

    /// Centered Σ(xᵢ − x̄)², the Gram entry after removing the intercept.
    pub fn centered_sum_sq(&self) -> f64 {
        let mean = self.x_values.iter().sum::<f64>() / self.len() as f64;
        self.x_values.iter().map(|x| (x - mean) * (x - mean)).sum()
    }
}

/// How each replicate obtains its parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GenerationMode {
    /// Sample proper components from the prior. Improper components (the 1/σ
    /// scale, the flat regression intercept) must be supplied in `fixed`.
    FromPrior {
        #[serde(default)]
        fixed: BTreeMap<String, f64>,
    },
    /// All parameters pinned per hypothesis.
    Fixed {
        h0: BTreeMap<String, f64>,
        h1: BTreeMap<String, f64>,
    },
}

/// Generation failures.
#[derive(Debug, Clone, Error)]
pub enum GenError {
    #[error("improper prior on '{component}': cannot sample it; supply a fixed value")]
    ImproperPrior { component: &'static str },
    #[error("missing parameter '{name}' for family {family:?}")]
    MissingParameter { name: String, family: ModelFamily },
    #[error("unsupported sampling request: {0}")]
    Unsupported(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

fn std_normal<R: Rng>(rng: &mut R) -> f64 {
    StandardNormal.sample(rng)
}

/// Inverse-CDF Cauchy draw: x = loc + scale · tan(π(u − 1/2)).
fn cauchy_draw<R: Rng>(rng: &mut R, loc: f64, scale: f64) -> f64 {
    let u: f64 = rng.gen();
    loc + scale * (std::f64::consts::PI * (u - 0.5)).tan()
}

/// Inverse-CDF arcsine draw for Beta(1/2, 1/2): θ = sin²(πu/2).
fn beta_half_draw<R: Rng>(rng: &mut R) -> f64 {
    let u: f64 = rng.gen();
    let s = (std::f64::consts::FRAC_PI_2 * u).sin();
    s * s
}

/// IG(1/2, b) via the χ²₁ identity: 1/X ~ Gamma(1/2, rate b), so X = 2b/Z².
fn inv_gamma_half_draw<R: Rng>(rng: &mut R, b: f64) -> f64 {
    loop {
        let z = std_normal(rng);
        if z != 0.0 {
            return 2.0 * b / (z * z);
        }
    }
}

fn beta_draw<R: Rng>(rng: &mut R, a: f64, b: f64) -> f64 {
    let ga = Gamma::new(a, 1.0).expect("positive shape");
    let gb = Gamma::new(b, 1.0).expect("positive shape");
    let x = ga.sample(rng);
    let y = gb.sample(rng);
    x / (x + y)
}

fn dirichlet4_draw<R: Rng>(rng: &mut R, a: f64) -> [f64; 4] {
    let g = Gamma::new(a, 1.0).expect("positive shape");
    let mut draws = [0.0f64; 4];
    let mut total = 0.0;
    for d in &mut draws {
        *d = g.sample(rng);
        total += *d;
    }
    for d in &mut draws {
        *d /= total;
    }
    draws
}

fn fixed_lookup(map: &BTreeMap<String, f64>, name: &str) -> Option<f64> {
    map.get(name).copied()
}

/// Draw a replicate's parameters under the given mode.
///
/// In `FromPrior` mode the proper components are sampled and improper
/// components are taken from the mode's `fixed` map; asking to sample an
/// improper component without a fixed value is the improper-prior error.
/// The design is consulted only by the regression family, whose β prior
/// depends on it.
pub fn draw_parameters<R: Rng>(
    prior: &PriorSpec,
    hypothesis: Hypothesis,
    mode: &GenerationMode,
    design: Option<&DesignMatrix>,
    rng: &mut R,
) -> Result<ParameterDraw, GenError> {
    prior.validate()?;
    match mode {
        GenerationMode::FromPrior { fixed } => {
            draw_from_prior(prior, hypothesis, fixed, design, rng)
        }
        GenerationMode::Fixed { h0, h1 } => {
            let params = match hypothesis {
                Hypothesis::H0 => h0,
                Hypothesis::H1 => h1,
            };
            assemble_fixed(prior, hypothesis, params)
        }
    }
}

/// Prior sampling with no fixed nuisance values; improper components error.
pub fn sample_parameters<R: Rng>(
    prior: &PriorSpec,
    hypothesis: Hypothesis,
    rng: &mut R,
) -> Result<ParameterDraw, GenError> {
    draw_from_prior(prior, hypothesis, &BTreeMap::new(), None, rng)
}

fn draw_from_prior<R: Rng>(
    prior: &PriorSpec,
    hypothesis: Hypothesis,
    fixed: &BTreeMap<String, f64>,
    design: Option<&DesignMatrix>,
    rng: &mut R,
) -> Result<ParameterDraw, GenError> {
    let mut values = BTreeMap::new();
    match prior {
        PriorSpec::NormalKnownVar => {
            let mu = match hypothesis {
                Hypothesis::H0 => 0.0,
                Hypothesis::H1 => std_normal(rng),
            };
            values.insert("mu".into(), mu);
        }
        PriorSpec::NormalJeffreysVar => {
            let sigma = fixed_lookup(fixed, "sigma")
                .ok_or(GenError::ImproperPrior { component: "sigma" })?;
            let mu = match hypothesis {
                Hypothesis::H0 => 0.0,
                Hypothesis::H1 => sigma * std_normal(rng),
            };
            values.insert("sigma".into(), sigma);
            values.insert("mu".into(), mu);
        }
        PriorSpec::Jzs { r, mu0 } => {
            let sigma = fixed_lookup(fixed, "sigma")
                .ok_or(GenError::ImproperPrior { component: "sigma" })?;
            let delta = match hypothesis {
                Hypothesis::H0 => 0.0,
                Hypothesis::H1 => cauchy_draw(rng, 0.0, *r),
            };
            values.insert("sigma".into(), sigma);
            values.insert("delta".into(), delta);
            values.insert("mu".into(), mu0 + delta * sigma);
        }
        PriorSpec::GPriorRegression => {
            let sigma = fixed_lookup(fixed, "sigma")
                .ok_or(GenError::ImproperPrior { component: "sigma" })?;
            let mu = fixed_lookup(fixed, "mu").unwrap_or(0.0);
            values.insert("sigma".into(), sigma);
            values.insert("mu".into(), mu);
            match hypothesis {
                Hypothesis::H0 => {
                    values.insert("beta".into(), 0.0);
                }
                Hypothesis::H1 => {
                    let design = design.ok_or_else(|| {
                        GenError::InvalidArgument(
                            "sampling β from the g-prior requires the design".into(),
                        )
                    })?;
                    let g = inv_gamma_half_draw(rng, crate::bayes::G_HYPER_SCALE);
                    let var = g * sigma * sigma * design.len() as f64 / design.sum_sq();
                    let beta = var.sqrt() * std_normal(rng);
                    values.insert("g".into(), g);
                    values.insert("beta".into(), beta);
                }
            }
        }
        PriorSpec::BernoulliJeffreys { theta0 } => {
            let theta = match hypothesis {
                Hypothesis::H0 => *theta0,
                Hypothesis::H1 => beta_half_draw(rng),
            };
            values.insert("theta".into(), theta);
        }
        PriorSpec::ContingencyGd { scheme, a } => {
            if *scheme != GdScheme::JointMultinomial {
                return Err(GenError::Unsupported(
                    "prior-predictive sampling with a fixed replicate length is only \
                     defined for the joint-multinomial scheme"
                        .into(),
                ));
            }
            match hypothesis {
                Hypothesis::H0 => {
                    let theta = beta_draw(rng, *a, *a); // P(outcome 1), shared
                    let phi = beta_draw(rng, *a, *a); // P(group 1)
                    values.insert("theta".into(), theta);
                    values.insert("phi".into(), phi);
                    values.insert("p1".into(), (1.0 - theta) * phi);
                    values.insert("p2".into(), (1.0 - theta) * (1.0 - phi));
                    values.insert("p3".into(), theta * phi);
                    values.insert("p4".into(), theta * (1.0 - phi));
                }
                Hypothesis::H1 => {
                    let p = dirichlet4_draw(rng, *a);
                    values.insert("p1".into(), p[0]);
                    values.insert("p2".into(), p[1]);
                    values.insert("p3".into(), p[2]);
                    values.insert("p4".into(), p[3]);
                }
            }
        }
    }
    Ok(ParameterDraw {
        family: prior.family(),
        hypothesis,
        values,
        provenance: Provenance::FromPrior,
    })
}

fn assemble_fixed(
    prior: &PriorSpec,
    hypothesis: Hypothesis,
    params: &BTreeMap<String, f64>,
) -> Result<ParameterDraw, GenError> {
    let family = prior.family();
    let mut values = params.clone();
    let missing = |name: &str| GenError::MissingParameter {
        name: name.to_string(),
        family,
    };
    match prior {
        PriorSpec::NormalKnownVar | PriorSpec::NormalJeffreysVar => {
            if matches!(prior, PriorSpec::NormalJeffreysVar) && !values.contains_key("sigma") {
                return Err(missing("sigma"));
            }
            if !values.contains_key("mu") {
                match hypothesis {
                    Hypothesis::H0 => {
                        values.insert("mu".into(), 0.0);
                    }
                    Hypothesis::H1 => return Err(missing("mu")),
                }
            }
        }
        PriorSpec::Jzs { mu0, .. } => {
            let sigma = values.get("sigma").copied().ok_or_else(|| missing("sigma"))?;
            let mu = match (values.get("mu").copied(), values.get("delta").copied()) {
                (Some(mu), _) => mu,
                (None, Some(delta)) => mu0 + delta * sigma,
                (None, None) => match hypothesis {
                    Hypothesis::H0 => *mu0,
                    Hypothesis::H1 => return Err(missing("mu (or delta)")),
                },
            };
            values.insert("mu".into(), mu);
            values.insert("delta".into(), (mu - mu0) / sigma);
        }
        PriorSpec::GPriorRegression => {
            if !values.contains_key("sigma") {
                return Err(missing("sigma"));
            }
            values.entry("mu".into()).or_insert(0.0);
            if !values.contains_key("beta") {
                match hypothesis {
                    Hypothesis::H0 => {
                        values.insert("beta".into(), 0.0);
                    }
                    Hypothesis::H1 => return Err(missing("beta")),
                }
            }
        }
        PriorSpec::BernoulliJeffreys { theta0 } => {
            if !values.contains_key("theta") {
                match hypothesis {
                    Hypothesis::H0 => {
                        values.insert("theta".into(), *theta0);
                    }
                    Hypothesis::H1 => return Err(missing("theta")),
                }
            }
        }
        PriorSpec::ContingencyGd { .. } => {
            for key in ["theta_g1", "theta_g2"] {
                if !values.contains_key(key) {
                    return Err(missing(key));
                }
            }
        }
    }
    let draw = ParameterDraw {
        family,
        hypothesis,
        values,
        provenance: Provenance::Fixed,
    };
    draw.validate()?;
    Ok(draw)
}

/// One sequential increment of data, shaped by the family.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum StepUnit {
    /// A single real observation.
    One(f64),
    /// A single Bernoulli observation.
    Binary(u8),
    /// One observation per group: (group-1 outcome, group-2 outcome).
    PerGroup(u8, u8),
    /// One jointly sampled individual landing in cell 0..4.
    Cell(u8),
    /// One regression row.
    Row { x: f64, y: f64 },
}

/// Sample the data increment for step `index` (0-based).
pub fn sample_step<R: Rng>(
    draw: &ParameterDraw,
    design: Option<&DesignMatrix>,
    index: usize,
    rng: &mut R,
) -> Result<StepUnit, GenError> {
    match draw.family {
        ModelFamily::NormalKnownVar => {
            let mu = draw.require("mu")?;
            Ok(StepUnit::One(mu + std_normal(rng)))
        }
        ModelFamily::NormalJeffreysVar | ModelFamily::Jzs => {
            let mu = draw.require("mu")?;
            let sigma = draw.require("sigma")?;
            Ok(StepUnit::One(mu + sigma * std_normal(rng)))
        }
        ModelFamily::GPriorRegression => {
            let design = design.ok_or_else(|| {
                GenError::InvalidArgument("regression sampling requires a design".into())
            })?;
            if index >= design.len() {
                return Err(GenError::InvalidArgument(format!(
                    "step {index} beyond the design of size {}",
                    design.len()
                )));
            }
            let x = design.x_values[index];
            let mu = draw.require("mu")?;
            let beta = draw.require("beta")?;
            let sigma = draw.require("sigma")?;
            Ok(StepUnit::Row {
                x,
                y: mu + beta * x + sigma * std_normal(rng),
            })
        }
        ModelFamily::Bernoulli => {
            let theta = draw.require("theta")?;
            let u: f64 = rng.gen();
            Ok(StepUnit::Binary(u8::from(u < theta)))
        }
        ModelFamily::Contingency => {
            if let Some(p1) = draw.get("p1") {
                let p2 = draw.require("p2")?;
                let p3 = draw.require("p3")?;
                let u: f64 = rng.gen();
                let cell = if u < p1 {
                    0
                } else if u < p1 + p2 {
                    1
                } else if u < p1 + p2 + p3 {
                    2
                } else {
                    3
                };
                Ok(StepUnit::Cell(cell))
            } else {
                let t1 = draw.require("theta_g1")?;
                let t2 = draw.require("theta_g2")?;
                let u1: f64 = rng.gen();
                let u2: f64 = rng.gen();
                Ok(StepUnit::PerGroup(u8::from(u1 < t1), u8::from(u2 < t2)))
            }
        }
    }
}

/// Sample `n` increments in a row.
pub fn sample_data<R: Rng>(
    draw: &ParameterDraw,
    design: Option<&DesignMatrix>,
    n: usize,
    rng: &mut R,
) -> Result<Vec<StepUnit>, GenError> {
    if n == 0 {
        return Err(GenError::InvalidArgument("need at least one step".into()));
    }
    (0..n).map(|i| sample_step(draw, design, i, rng)).collect()
}

/// Mass that a family's proper interest-parameter prior places on a finite
/// union of intervals, by exact CDF arithmetic.
///
/// Intervals may reach ±∞ and are assumed disjoint; the mass is additive over
/// them.
pub fn prior_tail_mass(prior: &PriorSpec, region: &[(f64, f64)]) -> Result<f64, GenError> {
    for &(lo, hi) in region {
        if lo.is_nan() || hi.is_nan() || lo > hi {
            return Err(GenError::InvalidArgument(format!(
                "bad interval ({lo}, {hi})"
            )));
        }
    }
    let cdf: Box<dyn Fn(f64) -> f64> = match prior {
        PriorSpec::NormalKnownVar => Box::new(|x| 1.0 - std_normal_tail(x)),
        PriorSpec::Jzs { r, .. } => {
            let r = *r;
            Box::new(move |x| 0.5 + (x / r).atan() / std::f64::consts::PI)
        }
        PriorSpec::BernoulliJeffreys { .. } => Box::new(|x| {
            let clamped = x.clamp(0.0, 1.0);
            2.0 / std::f64::consts::PI * clamped.sqrt().asin()
        }),
        PriorSpec::GPriorRegression => Box::new(|x| {
            if x <= 0.0 {
                0.0
            } else {
                statrs::function::erf::erfc(
                    (crate::bayes::G_HYPER_SCALE / x).sqrt(),
                )
            }
        }),
        PriorSpec::NormalJeffreysVar => {
            return Err(GenError::ImproperPrior { component: "sigma" })
        }
        PriorSpec::ContingencyGd { .. } => {
            return Err(GenError::Unsupported(
                "contingency priors have no scalar interest marginal".into(),
            ))
        }
    };
    let eval = |x: f64| -> f64 {
        if x == f64::NEG_INFINITY {
            0.0
        } else if x == f64::INFINITY {
            1.0
        } else {
            cdf(x)
        }
    };
    Ok(region.iter().map(|&(lo, hi)| eval(hi) - eval(lo)).sum())
}

/// Density at `beta` of the conditional g-prior N(0, g σ² n / Σxᵢ²) for a
/// single-covariate design.
pub fn gprior_beta_density(
    beta: f64,
    g: f64,
    sigma: f64,
    design: &DesignMatrix,
) -> Result<f64, GenError> {
    if !(g.is_finite() && g > 0.0) || !(sigma.is_finite() && sigma > 0.0) {
        return Err(GenError::InvalidArgument(
            "g and sigma must be positive and finite".into(),
        ));
    }
    let sum_sq = design.sum_sq();
    if sum_sq == 0.0 {
        return Err(GenError::InvalidArgument(
            "design is singular: Σxᵢ² = 0".into(),
        ));
    }
    let var = g * sigma * sigma * design.len() as f64 / sum_sq;
    Ok((-0.5 * beta * beta / var).exp() / (2.0 * std::f64::consts::PI * var).sqrt())
}
