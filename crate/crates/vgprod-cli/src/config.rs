//! Job configuration: a TOML file with nested sections, plus the flag
//! overrides (--tol, --seed, --out), which win over the file.

use serde::Deserialize;

use vgprod::product::ProductSpec;
use vgprod::special_cases::{CorrelatedNormalSpec, LaplaceProductSpec, MixedNormalLaplaceSpec};
use vgprod::VgParams;

pub const TOL_ENV: &str = "VGPROD_TOL";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Quantity {
    Pdf,
    Cdf,
    Cf,
    Tail,
    Quantile,
    ProbNonpositive,
    Sample,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Spacing {
    Linear,
    Log,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JobFile {
    pub quantity: Quantity,
    pub tol: Option<f64>,
    pub seed: Option<u64>,
    pub spec: SpecSection,
    pub grid: GridSection,
    #[serde(default)]
    pub output: OutputSection,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpecSection {
    pub kind: String,
    pub factors: Option<Vec<[f64; 3]>>,
    pub pairs: Option<Vec<[f64; 2]>>,
    pub sigmas: Option<Vec<f64>>,
    pub alphas: Option<Vec<f64>>,
    pub blocks: Option<Vec<[f64; 3]>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSection {
    pub start: f64,
    pub stop: f64,
    pub count: usize,
    #[serde(default = "default_spacing")]
    pub spacing: Spacing,
}

fn default_spacing() -> Spacing {
    Spacing::Linear
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSection {
    pub path: Option<String>,
    pub format: Option<Format>,
}

/// The distribution described by the `[spec]` config section, keeping the
/// family identity so the reduced special-case evaluators can be used.
pub enum FamilySpec {
    Generic(ProductSpec),
    Laplace(LaplaceProductSpec),
    NormalLaplace(MixedNormalLaplaceSpec),
    CorrelatedNormal(CorrelatedNormalSpec),
}

impl FamilySpec {
    pub fn embedded(&self) -> ProductSpec {
        match self {
            FamilySpec::Generic(s) => s.clone(),
            FamilySpec::Laplace(s) => s.embed(),
            FamilySpec::NormalLaplace(s) => s.embed(),
            FamilySpec::CorrelatedNormal(s) => s.embed(),
        }
    }
}

/// Fully validated job ready to run.
pub struct Job {
    pub quantity: Quantity,
    pub tol: f64,
    pub seed: u64,
    pub spec: FamilySpec,
    pub grid: Vec<f64>,
    pub out_path: Option<String>,
    pub format: Format,
}

pub fn build_spec(section: &SpecSection) -> Result<FamilySpec, String> {
    match section.kind.as_str() {
        "generic" => {
            let factors = section
                .factors
                .as_ref()
                .ok_or("generic spec needs `factors = [[m, alpha, beta], ...]`")?;
            let parsed: Result<Vec<VgParams>, _> = factors
                .iter()
                .map(|&[m, a, b]| VgParams::new(m, a, b))
                .collect();
            let spec = ProductSpec::new(parsed.map_err(|e| e.to_string())?)
                .map_err(|e| e.to_string())?;
            Ok(FamilySpec::Generic(spec))
        }
        "laplace" => {
            let pairs = section
                .pairs
                .as_ref()
                .ok_or("laplace spec needs `pairs = [[alpha, beta], ...]`")?;
            let spec =
                LaplaceProductSpec::new(pairs.iter().map(|&[a, b]| (a, b)).collect())
                    .map_err(|e| e.to_string())?;
            Ok(FamilySpec::Laplace(spec))
        }
        "normal-laplace" => {
            let sigmas = section.sigmas.clone().unwrap_or_default();
            let alphas = section.alphas.clone().unwrap_or_default();
            let spec =
                MixedNormalLaplaceSpec::new(sigmas, alphas).map_err(|e| e.to_string())?;
            Ok(FamilySpec::NormalLaplace(spec))
        }
        "correlated-normal" => {
            let blocks = section
                .blocks
                .as_ref()
                .ok_or("correlated-normal spec needs `blocks = [[s1, s2, rho], ...]`")?;
            let spec =
                CorrelatedNormalSpec::new(blocks.iter().map(|&[a, b, r]| (a, b, r)).collect())
                    .map_err(|e| e.to_string())?;
            Ok(FamilySpec::CorrelatedNormal(spec))
        }
        other => Err(format!(
            "unknown spec kind '{other}'; expected generic | laplace | normal-laplace | correlated-normal"
        )),
    }
}

/// Merges the file with the flag overrides and validates every invariant.
pub fn build_job(
    file: JobFile,
    tol_flag: Option<f64>,
    seed_flag: Option<u64>,
    out_flag: Option<String>,
    force_quantity: Option<Quantity>,
) -> Result<Job, String> {
    let env_tol = std::env::var(TOL_ENV)
        .ok()
        .and_then(|s| s.parse::<f64>().ok());
    let tol = tol_flag
        .or(file.tol)
        .or(env_tol)
        .unwrap_or(vgprod::meijer::DEFAULT_TOL);
    if !(1e-14..=1e-2).contains(&tol) {
        return Err(format!("tol must lie in [1e-14, 1e-2], got {tol}"));
    }
    if file.grid.count < 1 {
        return Err("grid count must be >= 1".into());
    }
    let quantity = force_quantity.unwrap_or(file.quantity);
    if file.grid.spacing == Spacing::Log && (file.grid.start <= 0.0 || file.grid.stop <= 0.0) {
        return Err("log spacing requires positive grid endpoints".into());
    }
    if quantity == Quantity::Quantile
        && !(file.grid.start > 0.0 && file.grid.stop < 1.0)
    {
        return Err("quantile grids must lie inside (0, 1)".into());
    }
    let spec = build_spec(&file.spec)?;
    let grid = vgprod::grid::linspace(
        file.grid.start,
        file.grid.stop,
        file.grid.count,
        file.grid.spacing == Spacing::Log,
    );
    Ok(Job {
        quantity,
        tol,
        seed: seed_flag.or(file.seed).unwrap_or(0),
        spec,
        grid,
        out_path: out_flag.or(file.output.path),
        format: file.output.format.unwrap_or(Format::Csv),
    })
}
