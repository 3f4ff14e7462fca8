use std::fs::OpenOptions;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use ngramsvm_core::model_file::{self, TrainingMetadata};
use ngramsvm_core::{
    cross_validate_augmented, load_jsonl, self_train, train_ensemble, Corpus, CvOptions,
    EnsembleModel, Error, EvalReport, Label, Unit, NUM_CLASSES,
};
use serde::Serialize;

use crate::cli::{Command, ModelArgs};
use crate::config::RunConfig;
use crate::CliError;

pub fn run(command: Command) -> Result<(), CliError> {
    match command {
        Command::Train {
            train,
            output,
            model,
        } => cmd_train(&train, &output, &model),
        Command::Predict {
            model,
            input,
            output,
        } => cmd_predict(&model, &input, output.as_deref()),
        Command::Evaluate {
            model,
            labeled,
            confusion_csv,
        } => cmd_evaluate(&model, &labeled, confusion_csv.as_deref()),
        Command::Cv {
            labeled,
            folds,
            no_stratify,
            model,
        } => cmd_cv(&labeled, folds, no_stratify, &model),
        Command::SelfTrain {
            labeled,
            unlabeled,
            output,
            report,
            eval,
            transductive,
            confidence_threshold,
            max_adopted_fraction,
            rounds,
            model,
        } => {
            let mut config = RunConfig::resolve(&model)?;
            if let Some(t) = confidence_threshold {
                config.self_train.confidence_threshold = t;
            }
            if let Some(f) = max_adopted_fraction {
                config.self_train.max_adopted_fraction = f;
            }
            if let Some(r) = rounds {
                config.self_train.rounds = r;
            }
            config
                .self_train
                .validate()
                .map_err(|e| CliError::Usage(e.to_string()))?;
            cmd_self_train(SelfTrainJob {
                labeled: &labeled,
                unlabeled: &unlabeled,
                output: &output,
                report: &report,
                eval: eval.as_deref(),
                transductive,
                config,
                save_config: model.save_config.as_deref(),
            })
        }
    }
}

/// Fails with a usage error unless `path` can be created or overwritten.
/// Leaves no file behind when it did not exist before.
fn check_writable(path: &Path) -> Result<(), CliError> {
    let unwritable =
        |why: String| CliError::Usage(format!("cannot write {}: {why}", path.display()));
    if path.is_dir() {
        return Err(unwritable("is a directory".into()));
    }
    if path.exists() {
        OpenOptions::new()
            .append(true)
            .open(path)
            .map_err(|e| unwritable(e.to_string()))?;
    } else {
        OpenOptions::new()
            .write(true)
            .create_new(true)
            .open(path)
            .map_err(|e| unwritable(e.to_string()))?;
        let _ = std::fs::remove_file(path);
    }
    Ok(())
}

fn write_file(path: &Path, contents: &[u8]) -> Result<(), CliError> {
    model_file::write_atomic(path, contents).map_err(CliError::from)
}

fn save_config(path: Option<&Path>, config: &RunConfig) -> Result<(), CliError> {
    if let Some(path) = path {
        let mut json = serde_json::to_string_pretty(config).expect("config serializes");
        json.push('\n');
        write_file(path, json.as_bytes())?;
    }
    Ok(())
}

fn load_extra(config: &RunConfig) -> Result<Corpus, CliError> {
    let mut extra = Corpus::default();
    for path in &config.extra_train {
        extra.extend(load_jsonl(path, true)?)?;
    }
    Ok(extra)
}

fn load_labeled(path: &Path) -> Result<Corpus, CliError> {
    let corpus = load_jsonl(path, false)?;
    if let Some(doc) = corpus.iter().find(|d| d.label.is_none()) {
        return Err(Error::Unlabeled(doc.id.clone()).into());
    }
    Ok(corpus)
}

fn summarize(model: &EnsembleModel, elapsed: std::time::Duration) {
    for member in model.members() {
        let view = member.vocabulary().view();
        let unit = match view.unit {
            Unit::Word => "word",
            Unit::Character => "char",
        };
        let converged = member.classes().iter().filter(|c| c.converged).count();
        let epochs = member
            .classes()
            .iter()
            .map(|c| c.outer_iters_used)
            .max()
            .unwrap_or(0);
        eprintln!(
            "{unit} {}..{}: {} features, {converged}/{NUM_CLASSES} classifiers converged (max {epochs} epochs)",
            view.n_min,
            view.n_max,
            member.vocabulary().len(),
        );
    }
    eprintln!("trained in {:.2}s", elapsed.as_secs_f64());
}

fn cmd_train(train: &Path, output: &Path, args: &ModelArgs) -> Result<(), CliError> {
    let config = RunConfig::resolve(args)?;
    check_writable(output)?;
    if let Some(path) = &args.save_config {
        check_writable(path)?;
    }
    let mut corpus = load_labeled(train)?;
    corpus.extend(load_extra(&config)?)?;

    let start = Instant::now();
    let params = config.svm_params();
    let model = train_ensemble(&corpus, &config.ensemble(), &params)?;
    summarize(&model, start.elapsed());

    let mut meta = TrainingMetadata::new(&corpus, &params);
    meta.seed = config.seed;
    model_file::save_model(output, &model, &meta)?;
    save_config(args.save_config.as_deref(), &config)
}

#[derive(Serialize)]
struct PredictionRecord<'a> {
    id: &'a str,
    predicted_label: Label,
    confidences: [f64; NUM_CLASSES],
}

fn cmd_predict(model_path: &Path, input: &Path, output: Option<&Path>) -> Result<(), CliError> {
    if let Some(path) = output {
        check_writable(path)?;
    }
    let (model, _) = model_file::load_model(model_path)?;
    let corpus = load_jsonl(input, false)?;
    let predictions = model.predict_corpus(&corpus);

    let mut buf = Vec::new();
    for (doc, p) in corpus.iter().zip(&predictions) {
        let record = PredictionRecord {
            id: &doc.id,
            predicted_label: p.label,
            confidences: p.confidences,
        };
        serde_json::to_writer(&mut buf, &record).expect("prediction serializes");
        buf.push(b'\n');
    }
    match output {
        Some(path) => write_file(path, &buf),
        None => emit_stdout(&buf),
    }
}

fn emit_stdout(bytes: &[u8]) -> Result<(), CliError> {
    let mut out = BufWriter::new(io::stdout().lock());
    out.write_all(bytes)
        .and_then(|_| out.flush())
        .map_err(|e| CliError::Runtime(format!("writing stdout: {e}")))
}

fn print_json<T: Serialize>(value: &T) -> Result<(), CliError> {
    let mut json = serde_json::to_string_pretty(value).expect("report serializes");
    json.push('\n');
    emit_stdout(json.as_bytes())
}

fn evaluate(model: &EnsembleModel, corpus: &Corpus) -> Result<EvalReport, CliError> {
    let pred: Vec<Label> = model
        .predict_corpus(corpus)
        .iter()
        .map(|p| p.label)
        .collect();
    let gold: Vec<Label> = corpus.iter().filter_map(|d| d.label).collect();
    Ok(EvalReport::new(&gold, &pred)?)
}

fn cmd_evaluate(
    model_path: &Path,
    labeled: &Path,
    confusion_csv: Option<&Path>,
) -> Result<(), CliError> {
    if let Some(path) = confusion_csv {
        check_writable(path)?;
    }
    let (model, _) = model_file::load_model(model_path)?;
    let corpus = load_labeled(labeled)?;
    let report = evaluate(&model, &corpus)?;
    if let Some(path) = confusion_csv {
        write_file(path, report.confusion_csv().as_bytes())?;
    }
    print_json(&report)
}

fn cmd_cv(
    labeled: &Path,
    folds: Option<u64>,
    no_stratify: bool,
    args: &ModelArgs,
) -> Result<(), CliError> {
    let mut config = RunConfig::resolve(args)?;
    if let Some(k) = folds {
        config.folds = k as usize;
    }
    if no_stratify {
        config.stratified = false;
    }
    if let Some(path) = &args.save_config {
        check_writable(path)?;
    }
    let corpus = load_labeled(labeled)?;
    if config.folds < 2 || config.folds > corpus.len() {
        return Err(CliError::Usage(format!(
            "--folds must be between 2 and the corpus size ({}), got {}",
            corpus.len(),
            config.folds
        )));
    }
    let extra = load_extra(&config)?;
    let options = CvOptions {
        k: config.folds,
        seed: config.fold_seed(),
        stratified: config.stratified,
    };
    let summary = cross_validate_augmented(
        &corpus,
        &extra,
        &config.ensemble(),
        &config.svm_params(),
        &options,
    )?;
    save_config(args.save_config.as_deref(), &config)?;
    print_json(&summary)
}

struct SelfTrainJob<'a> {
    labeled: &'a Path,
    unlabeled: &'a Path,
    output: &'a Path,
    report: &'a Path,
    eval: Option<&'a Path>,
    transductive: bool,
    config: RunConfig,
    save_config: Option<&'a Path>,
}

fn same_file(a: &Path, b: &Path) -> bool {
    let canon = |p: &Path| std::fs::canonicalize(p).unwrap_or_else(|_| PathBuf::from(p));
    canon(a) == canon(b)
}

fn cmd_self_train(job: SelfTrainJob<'_>) -> Result<(), CliError> {
    let config = &job.config;
    if let Some(eval) = job.eval {
        if same_file(eval, job.unlabeled) && !job.transductive {
            return Err(CliError::Usage(format!(
                "--eval {} is the unlabeled pool; pass --transductive to evaluate on it",
                eval.display()
            )));
        }
    }
    check_writable(job.output)?;
    check_writable(job.report)?;
    if let Some(path) = job.save_config {
        check_writable(path)?;
    }

    let mut labeled = load_labeled(job.labeled)?;
    labeled.extend(load_extra(config)?)?;
    let unlabeled = load_jsonl(job.unlabeled, false)?;
    let eval_path = job.eval.or(job.transductive.then_some(job.unlabeled));
    let eval_corpus = eval_path.map(load_labeled).transpose()?;

    let start = Instant::now();
    let params = config.svm_params();
    let outcome = self_train(
        &labeled,
        &unlabeled,
        &config.ensemble(),
        &params,
        &config.self_train,
    )?;
    summarize(&outcome.model, start.elapsed());
    eprintln!(
        "adopted {} of {} unlabeled documents",
        outcome.report.len(),
        unlabeled.len()
    );

    let mut meta = TrainingMetadata::new(&outcome.pool, &params);
    meta.seed = config.seed;
    meta.self_training = Some(config.self_train);
    model_file::save_model(job.output, &outcome.model, &meta)?;

    let mut report = Vec::new();
    outcome
        .report
        .write_jsonl(&mut report)
        .map_err(|e| CliError::Runtime(e.to_string()))?;
    write_file(job.report, &report)?;
    save_config(job.save_config, config)?;

    if let Some(corpus) = eval_corpus {
        print_json(&evaluate(&outcome.model, &corpus)?)?;
    }
    Ok(())
}
