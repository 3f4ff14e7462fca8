//! Run configuration: presets, command-line overrides and JSON persistence.

use std::path::PathBuf;

use clap::ValueEnum;
use ngramsvm_core::{
    derive_seed, EnsembleConfig, Fusion, SelfTrainConfig, SvmParams, Unit, ViewConfig,
};
use serde::{Deserialize, Serialize};

use crate::cli::ModelArgs;
use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Preset {
    /// Word unigrams, 20k most frequent.
    #[value(name = "baseline-20k")]
    Baseline20k,
    /// Word unigrams, 40k most frequent.
    #[value(name = "baseline-40k")]
    Baseline40k,
    /// baseline-20k trained together with --extra-train data.
    #[value(name = "baseline-aug")]
    BaselineAug,
    /// baseline-aug views, intended for the self-train command.
    Selftrain,
    /// Word 1-2 grams plus character 3-6 grams.
    Ensemble,
}

impl Preset {
    pub fn views(self) -> Vec<ViewConfig> {
        let unigrams = |cap| vec![ViewConfig::word_ngrams(1, 1).with_max_features(Some(cap))];
        match self {
            Preset::Baseline20k | Preset::BaselineAug | Preset::Selftrain => unigrams(20_000),
            Preset::Baseline40k => unigrams(40_000),
            Preset::Ensemble => EnsembleConfig::word_and_char().views,
        }
    }
}

/// Every tunable of a run. A run is reproducible from this plus its input files.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub preset: Option<Preset>,
    pub views: Vec<ViewConfig>,
    pub fusion: Fusion,
    pub svm: SvmParams,
    pub self_train: SelfTrainConfig,
    pub folds: usize,
    pub stratified: bool,
    pub seed: u64,
    #[serde(default)]
    pub extra_train: Vec<PathBuf>,
}

impl RunConfig {
    pub fn from_preset(preset: Preset) -> Self {
        RunConfig {
            preset: Some(preset),
            views: preset.views(),
            fusion: Fusion::MeanConfidence,
            svm: SvmParams::default(),
            self_train: SelfTrainConfig::default(),
            folds: 10,
            stratified: true,
            seed: 0,
            extra_train: Vec::new(),
        }
    }

    pub fn ensemble(&self) -> EnsembleConfig {
        EnsembleConfig {
            views: self.views.clone(),
            fusion: self.fusion,
        }
    }

    /// Solver parameters with the seed derived from the root seed.
    pub fn svm_params(&self) -> SvmParams {
        SvmParams {
            seed: derive_seed(self.seed, 0),
            ..self.svm
        }
    }

    pub fn fold_seed(&self) -> u64 {
        derive_seed(self.seed, 1)
    }

    /// Builds the effective configuration: `--config` file (or preset),
    /// then explicit flags on top.
    pub fn resolve(args: &ModelArgs) -> Result<Self, CliError> {
        let mut config = match &args.config {
            Some(path) => {
                let text = std::fs::read_to_string(path).map_err(|e| {
                    CliError::Usage(format!("cannot read config {}: {e}", path.display()))
                })?;
                serde_json::from_str(&text).map_err(|e| {
                    CliError::Usage(format!("invalid config {}: {e}", path.display()))
                })?
            }
            None => RunConfig::from_preset(args.preset.unwrap_or(Preset::Ensemble)),
        };
        if args.config.is_some() {
            if let Some(preset) = args.preset {
                config.preset = Some(preset);
                config.views = preset.views();
            }
        }

        if args.word_ngrams.is_some() || args.char_ngrams.is_some() {
            let cap_for = |unit: Unit| {
                config
                    .views
                    .iter()
                    .find(|v| v.unit == unit)
                    .and_then(|v| v.max_features)
            };
            let mut views = Vec::new();
            if let Some(NgramRange(lo, hi)) = args.word_ngrams {
                views.push(ViewConfig::word_ngrams(lo, hi).with_max_features(cap_for(Unit::Word)));
            }
            if let Some(NgramRange(lo, hi)) = args.char_ngrams {
                views.push(
                    ViewConfig::char_ngrams(lo, hi).with_max_features(cap_for(Unit::Character)),
                );
            }
            config.views = views;
        }
        if args.max_features.len() > config.views.len() {
            return Err(CliError::Usage(format!(
                "{} --max-features values given for {} views",
                args.max_features.len(),
                config.views.len()
            )));
        }
        for (view, cap) in config.views.iter_mut().zip(&args.max_features) {
            view.max_features = cap.0;
        }
        for view in &config.views {
            view.validate()
                .map_err(|e| CliError::Usage(e.to_string()))?;
        }

        if let Some(fusion) = args.fusion {
            config.fusion = match fusion {
                FusionArg::Mean => Fusion::MeanConfidence,
                FusionArg::Vote => Fusion::MajorityVote,
            };
        }
        if let Some(c) = args.c {
            config.svm.c = c;
        }
        if let Some(tol) = args.tol {
            config.svm.tol = tol;
        }
        if let Some(iters) = args.max_iter {
            config.svm.max_outer_iters = iters;
        }
        if let Some(seed) = args.seed {
            config.seed = seed;
        }
        if !args.extra_train.is_empty() {
            config.extra_train = args.extra_train.clone();
        }
        config
            .svm
            .validate()
            .map_err(|e| CliError::Usage(e.to_string()))?;
        Ok(config)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FusionArg {
    Mean,
    Vote,
}

/// `MIN..MAX` or a single `N`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NgramRange(pub usize, pub usize);

impl std::str::FromStr for NgramRange {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parse = |t: &str| {
            t.trim()
                .parse::<usize>()
                .map_err(|_| format!("invalid n-gram bound {t:?}"))
        };
        let (lo, hi) = match s.split_once("..") {
            Some((a, b)) => (parse(a)?, parse(b.trim_start_matches('='))?),
            None => {
                let n = parse(s)?;
                (n, n)
            }
        };
        if lo == 0 || lo > hi {
            return Err(format!("n-gram range {s:?} must satisfy 1 <= MIN <= MAX"));
        }
        Ok(NgramRange(lo, hi))
    }
}

/// A vocabulary cap: a positive integer or `unlimited`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FeatureCap(pub Option<usize>);

impl std::str::FromStr for FeatureCap {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s.eq_ignore_ascii_case("unlimited") {
            return Ok(FeatureCap(None));
        }
        match s.parse::<usize>() {
            Ok(0) | Err(_) => Err(format!(
                "expected a positive integer or 'unlimited', got {s:?}"
            )),
            Ok(n) => Ok(FeatureCap(Some(n))),
        }
    }
}
