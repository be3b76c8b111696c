use std::fmt::Write as _;
use std::fs;

use serde::Serialize;

use rgi_analysis::{detect_cycles, mine_errors, pca_project, pump_errors, render_pca_svg};
use rgi_automata::{compile_dfa, Alphabet, Dfa};
use rgi_datagen::{generate_dataset, load_dataset, save_dataset, Dataset};
use rgi_extraction::{extract, Extraction, ExtractionReport};
use rgi_rnn::{forward, load_params, save_params, train, RnnParams};

use crate::config::{derive_seed, ExperimentConfig};
use crate::error::CliError;

fn truth_dfa(config: &ExperimentConfig) -> Result<Dfa, CliError> {
    let alphabet = Alphabet::new(config.alphabet.clone())?;
    Ok(compile_dfa(&config.regex, &alphabet)?)
}

/// Report JSONs carry the experiment identity, so an artifact directory is
/// interpretable on its own.
#[derive(Serialize)]
struct WithContext<T: Serialize> {
    regex: String,
    master_seed: u64,
    stage: &'static str,
    #[serde(flatten)]
    body: T,
}

fn write_report<T: Serialize>(
    config: &ExperimentConfig,
    name: &str,
    stage: &'static str,
    body: T,
) -> Result<(), CliError> {
    let wrapped = WithContext {
        regex: config.regex.clone(),
        master_seed: config.master_seed,
        stage,
        body,
    };
    let json = serde_json::to_string_pretty(&wrapped).expect("report serializes");
    fs::write(config.out_dir.join(name), json + "\n")?;
    Ok(())
}

/// Generate the corpus: three split TSVs, metadata, and the ground-truth
/// automaton as DOT.
pub fn cmd_generate(config: &ExperimentConfig) -> Result<Dataset, CliError> {
    config.validate()?;
    let alphabet = Alphabet::new(config.alphabet.clone())?;
    let truth = compile_dfa(&config.regex, &alphabet)?;
    let mut gen_config = config.gen_config.clone();
    gen_config.seed = derive_seed(config.master_seed, "datagen");
    let dataset = generate_dataset(&config.regex, &alphabet, &gen_config)?;
    debug_assert_eq!(dataset.audit(&truth), 0);
    fs::create_dir_all(&config.out_dir)?;
    save_dataset(&dataset, &config.out_dir)?;
    fs::write(config.out_dir.join("truth.dot"), truth.to_dot(None))?;
    println!(
        "generated {} / {} / {} strings for {}",
        dataset.train.len(),
        dataset.validation.len(),
        dataset.test.len(),
        config.regex
    );
    Ok(dataset)
}

/// Train the classifier on an existing corpus; write parameters and history.
pub fn cmd_train(config: &ExperimentConfig) -> Result<RnnParams, CliError> {
    config.validate()?;
    let dataset = load_dataset(&config.out_dir)?;
    let mut train_config = config.train_config.clone();
    train_config.seed = derive_seed(config.master_seed, "train");
    let (params, history) = train(&dataset, &train_config)?;
    save_params(&params, &config.out_dir.join("params.txt"))?;
    let history_json = serde_json::to_string_pretty(&history).expect("history serializes");
    fs::write(config.out_dir.join("history.json"), history_json + "\n")?;
    let final_val = history.last().map(|h| h.val_accuracy).unwrap_or(0.0);
    let best_val = history
        .iter()
        .map(|h| h.val_accuracy)
        .fold(0.0f64, f64::max);
    println!(
        "trained {} epochs, validation accuracy {final_val:.4} (best {best_val:.4})",
        history.len()
    );
    Ok(params)
}

/// Extract, minimize, and report. On a failed K search the report (with the
/// fidelity curve) is still written before the error propagates.
pub fn cmd_extract(config: &ExperimentConfig) -> Result<Extraction, CliError> {
    config.validate()?;
    let dataset = load_dataset(&config.out_dir)?;
    let params = load_params(&config.out_dir.join("params.txt"))?;
    let mut options = config.extraction.clone();
    options.seed = derive_seed(config.master_seed, "extraction");
    let strings: Vec<Vec<usize>> = dataset
        .validation
        .iter()
        .map(|s| s.tokens.clone())
        .collect();

    let extraction = match extract(&params, &strings, &options) {
        Ok(extraction) => extraction,
        Err(error) => {
            if let Some(report) = ExtractionReport::from_failure(&error) {
                write_report(config, "extraction_report.json", "extract", report)?;
            }
            return Err(error.into());
        }
    };

    let test_correct = dataset
        .test
        .iter()
        .filter(|s| extraction.minimized.accepts_indices(&s.tokens) == s.label)
        .count();
    let test_accuracy = test_correct as f64 / dataset.test.len() as f64;

    let mut report = ExtractionReport::from_extraction(&extraction);
    report.dfa_test_accuracy = Some(test_accuracy);
    write_report(config, "extraction_report.json", "extract", report)?;
    fs::write(
        config.out_dir.join("dfa.dot"),
        extraction.minimized.to_dot(None),
    )?;
    fs::write(
        config.out_dir.join("transitions.tsv"),
        extraction.minimized.to_table(),
    )?;
    println!(
        "extracted K={} ({} states minimized), fidelity {:.4}, test accuracy {test_accuracy:.4}",
        extraction.k,
        extraction.minimized.state_count(),
        extraction.fidelity.match_rate
    );
    Ok(extraction)
}

/// Analysis artifacts: cycle report, PCA projection (CSV + SVG), error
/// report, augmentation TSV.
pub fn cmd_analyze(config: &ExperimentConfig) -> Result<(), CliError> {
    config.validate()?;
    let dataset = load_dataset(&config.out_dir)?;
    let params = load_params(&config.out_dir.join("params.txt"))?;
    let extracted = Dfa::from_table(&fs::read_to_string(config.out_dir.join("transitions.tsv"))?)?;
    let truth = truth_dfa(config)?;

    // cycles over the validation traces
    let traces: Vec<_> = dataset
        .validation
        .iter()
        .map(|s| forward(&params, &s.tokens))
        .collect::<Result<_, _>>()?;
    let cycles = detect_cycles(&traces, config.eps_cycle, config.max_cycle_detail);
    write_report(config, "cycles.json", "analyze", &cycles)?;

    // the clustering is reproduced deterministically from the stage seed
    let mut options = config.extraction.clone();
    options.seed = derive_seed(config.master_seed, "extraction");
    let strings: Vec<Vec<usize>> = dataset
        .validation
        .iter()
        .map(|s| s.tokens.clone())
        .collect();
    let extraction = extract(&params, &strings, &options)?;
    write_pca_artifacts(config, &extraction)?;

    // exact errors of the minimized automaton against ground truth
    let errors = mine_errors(
        &extracted,
        &truth,
        &dataset.test,
        config.max_error_len,
        config.max_errors_per_class,
    )?;
    write_report(config, "errors.json", "analyze", &errors)?;

    // pump the shortest pumpable misclassified string into an augmentation set
    let alphabet = extracted.alphabet().clone();
    let mut lines = String::new();
    let _ = writeln!(
        lines,
        "# regex={} seed={} split=augmentation method=pump",
        config.regex, config.master_seed
    );
    let mut variants = 0usize;
    for listed in errors.false_accepts.iter().chain(&errors.false_rejects) {
        let base = alphabet.encode(listed)?;
        match pump_errors(&extracted, &truth, &base, config.pump_count) {
            Ok(set) if !set.variants.is_empty() => {
                for (tokens, label) in &set.variants {
                    let _ = writeln!(lines, "{}\t{}", u8::from(*label), alphabet.decode(tokens));
                }
                variants = set.variants.len();
                break;
            }
            // loop-free runs cannot be pumped; try the next error
            Ok(_) | Err(rgi_analysis::AnalysisError::NotPumpable) => {}
            Err(e) => return Err(e.into()),
        }
    }
    fs::write(config.out_dir.join("augmentation.tsv"), lines)?;

    println!(
        "analyzed: {} strings with repeated states, {} disagreement(s) listed, {variants} pumped variants",
        cycles.strings_with_repeats,
        errors.false_accepts.len() + errors.false_rejects.len()
    );
    Ok(())
}

fn write_pca_artifacts(config: &ExperimentConfig, extraction: &Extraction) -> Result<(), CliError> {
    let collection = &extraction.collection;
    let clustering = &extraction.clustering;
    let pca = pca_project(&collection.points, 2)?;

    let mut csv = String::from("x,y,cluster_id,is_final,network_decision\n");
    for (idx, coords) in pca.projection.iter().enumerate() {
        let provenance = &collection.provenance[idx];
        let string_len = collection.strings[provenance.string].len();
        let is_final = provenance.position == string_len;
        let decision = collection.network_accepts(provenance.string);
        let _ = writeln!(
            csv,
            "{},{},{},{},{}",
            coords[0],
            coords[1],
            clustering.assignment[idx],
            u8::from(is_final),
            u8::from(decision)
        );
    }
    fs::write(config.out_dir.join("pca.csv"), csv)?;

    let points2d: Vec<(f64, f64)> = pca.projection.iter().map(|row| (row[0], row[1])).collect();
    // cluster c maps to automaton state c + 1
    let accepting: Vec<bool> = (0..clustering.k)
        .map(|c| extraction.raw.dfa.is_accepting(c + 1))
        .collect();
    let origin = pca.project_point(&vec![0.0; collection.points[0].len()]);
    let svg = render_pca_svg(
        &points2d,
        &clustering.assignment,
        &accepting,
        Some((origin[0], origin[1])),
    );
    fs::write(config.out_dir.join("pca.svg"), svg)?;
    Ok(())
}

/// Everything the run produced, in one machine-readable record. Contains no
/// paths, so identical configurations give byte-identical summaries.
#[derive(Debug, Serialize)]
pub struct Summary {
    pub regex: String,
    pub alphabet: Vec<String>,
    pub master_seed: u64,
    pub val_accuracy: f64,
    pub epochs_ran: usize,
    pub selected_k: usize,
    pub raw_state_count: usize,
    pub minimized_state_count: usize,
    pub dfa_test_accuracy: f64,
    pub equivalent_to_truth: bool,
    pub shortest_counterexample: Option<String>,
    pub transition_conflict_rate: f64,
    pub accept_conflict_rate: f64,
    pub accepting_clusters: usize,
    pub cycle_traces: usize,
    pub cycle_strings_with_repeats: usize,
    pub cycle_total_pairs: usize,
    pub cycle_exact_repeats: usize,
}

/// The whole pipeline: generate, train, extract, analyze, summarize.
pub fn cmd_run_all(config: &ExperimentConfig) -> Result<Summary, CliError> {
    cmd_generate(config)?;
    cmd_train(config)?;
    let extraction = cmd_extract(config)?;
    cmd_analyze(config)?;

    // assemble the summary from the stage artifacts
    let dataset = load_dataset(&config.out_dir)?;
    let history: Vec<rgi_rnn::EpochStats> =
        serde_json::from_str(&fs::read_to_string(config.out_dir.join("history.json"))?)
            .map_err(|e| CliError::Usage(format!("history.json: {e}")))?;
    let truth = truth_dfa(config)?;
    let counterexample = extraction.minimized.equivalent(&truth)?;
    let cycles: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(config.out_dir.join("cycles.json"))?)
            .map_err(|e| CliError::Usage(format!("cycles.json: {e}")))?;

    let test_correct = dataset
        .test
        .iter()
        .filter(|s| extraction.minimized.accepts_indices(&s.tokens) == s.label)
        .count();
    let summary = Summary {
        regex: config.regex.clone(),
        alphabet: config.alphabet.clone(),
        master_seed: config.master_seed,
        val_accuracy: history
            .iter()
            .map(|h| h.val_accuracy)
            .fold(0.0f64, f64::max),
        epochs_ran: history.len(),
        selected_k: extraction.k,
        raw_state_count: extraction.raw.dfa.state_count(),
        minimized_state_count: extraction.minimized.state_count(),
        dfa_test_accuracy: test_correct as f64 / dataset.test.len() as f64,
        equivalent_to_truth: counterexample.is_none(),
        shortest_counterexample: counterexample
            .map(|tokens| extraction.minimized.alphabet().decode(&tokens)),
        transition_conflict_rate: extraction.raw.transition_conflict_rate,
        accept_conflict_rate: extraction.raw.accept_conflict_rate,
        accepting_clusters: extraction.raw.accepting_cluster_count(),
        cycle_traces: cycles["traces"].as_u64().unwrap_or(0) as usize,
        cycle_strings_with_repeats: cycles["strings_with_repeats"].as_u64().unwrap_or(0) as usize,
        cycle_total_pairs: cycles["total_pairs"].as_u64().unwrap_or(0) as usize,
        cycle_exact_repeats: cycles["total_exact_repeats"].as_u64().unwrap_or(0) as usize,
    };
    let json = serde_json::to_string_pretty(&summary).expect("summary serializes");
    fs::write(config.out_dir.join("summary.json"), json + "\n")?;
    println!(
        "run complete: equivalent_to_truth={}, test accuracy {:.4}",
        summary.equivalent_to_truth, summary.dfa_test_accuracy
    );
    Ok(summary)
}

/// Evaluate stored artifacts on one split (network, and the automaton when
/// present).
pub fn cmd_eval(config: &ExperimentConfig, split: &str) -> Result<(), CliError> {
    config.validate()?;
    let dataset = load_dataset(&config.out_dir)?;
    let items = dataset
        .split(split)
        .ok_or_else(|| CliError::Usage(format!("unknown split \"{split}\"")))?;

    let params_path = config.out_dir.join("params.txt");
    if params_path.exists() {
        let params = load_params(&params_path)?;
        let accuracy = rgi_rnn::evaluate(&params, items)?;
        println!("network accuracy on {split}: {accuracy:.4}");
    }
    let table_path = config.out_dir.join("transitions.tsv");
    if table_path.exists() {
        let dfa = Dfa::from_table(&fs::read_to_string(&table_path)?)?;
        let correct = items
            .iter()
            .filter(|s| dfa.accepts_indices(&s.tokens) == s.label)
            .count();
        println!(
            "automaton accuracy on {split}: {:.4}",
            correct as f64 / items.len() as f64
        );
    }
    if !params_path.exists() && !table_path.exists() {
        return Err(CliError::Usage(
            "nothing to evaluate: train or extract first".into(),
        ));
    }
    Ok(())
}
