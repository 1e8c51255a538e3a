use std::fmt::Write as _;
use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::Path;

use ocdmst::boundary::{sigmoid_factor, ThresholdParams};
use ocdmst::data::{LabelColumn, MissingPolicy};
use ocdmst::eval::{gamma_range, ParamGrid};
use ocdmst::report::{read_runs, summary_table, write_runs, Experiment};
use ocdmst::uci;
use ocdmst::{
    fit, grid_search, load_csv, run_cv, ClassifierConfig, CsvSchema, CvProtocol, FeatureMatrix, LabeledData,
    OneClassData, Variant,
};

use crate::args::{DataArgs, EvalArgs, GridArgs, LogisticArgs, ModelArgs, PredictArgs, ProtocolArgs, SummarizeArgs, ThresholdArgs};
use crate::Failure;

type Result<T> = std::result::Result<T, Failure>;

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}

fn write_output(path: &Path, body: impl FnOnce(&mut dyn Write) -> Result<()>) -> Result<()> {
    let file = File::create(path).map_err(|e| Failure::Runtime(format!("{}: {}", path.display(), e)))?;
    let mut out = BufWriter::new(file);
    body(&mut out)?;
    out.flush().map_err(|e| Failure::Runtime(format!("{}: {}", path.display(), e)))
}

fn io_failure(e: std::io::Error) -> Failure {
    Failure::Runtime(e.to_string())
}

fn list_benchmarks() {
    for b in &uci::BENCHMARKS {
        println!("{:<18} {} ({}), target labels {:?}", b.key(), b.spec().title, b.spec().file_name(), b.target_labels);
    }
}

fn label_column(spec: &Option<String>) -> LabelColumn {
    match spec {
        None => LabelColumn::Last,
        Some(s) => match s.parse::<usize>() {
            Ok(i) => LabelColumn::Index(i),
            Err(_) => LabelColumn::Name(s.clone()),
        },
    }
}

fn schema(args: &DataArgs) -> Result<CsvSchema> {
    let mut schema = match &args.preset {
        Some(key) => uci::dataset(key).ok_or_else(|| usage(format!("unknown preset {:?}", key)))?.schema(),
        None => CsvSchema::default(),
    };
    schema.label_column = label_column(&args.label_column);
    if args.reject_missing {
        schema.missing = MissingPolicy::Reject;
    }
    Ok(schema)
}

/// The labeled table plus the target labels to use with it.
fn load_labeled(args: &DataArgs) -> Result<(String, LabeledData, Vec<String>)> {
    if let Some(key) = &args.benchmark {
        let b = uci::benchmark(key)?;
        let data = b.spec().load(&args.data_dir)?;
        let targets = b.target_labels.iter().map(|s| s.to_string()).collect();
        return Ok((b.key(), data, targets));
    }
    let path = args.data.as_ref().ok_or_else(|| usage("give --benchmark or --data"))?;
    let data = load_csv(path, &schema(args)?)?;
    let stem = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    let name = if args.target.is_empty() { stem } else { format!("{}-{}", stem, args.target.join("+")) };
    Ok((name, data, args.target.clone()))
}

fn load_one_class(args: &DataArgs) -> Result<(String, OneClassData)> {
    let (name, data, targets) = load_labeled(args)?;
    if targets.is_empty() {
        return Err(usage("--target is required with --data"));
    }
    Ok((name, data.one_class(&targets)?))
}

fn protocol(args: &ProtocolArgs) -> CvProtocol {
    CvProtocol {
        n_folds: args.folds,
        n_repeats: args.repeats,
        seed: args.cv_seed,
    }
}

fn with_jobs<T: Send>(jobs: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T> {
    match jobs {
        None => Ok(f()),
        Some(0) => Err(usage("--jobs must be at least 1")),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| Failure::Runtime(e.to_string()))?;
            Ok(pool.install(f))
        }
    }
}

fn threshold_params(t: &ThresholdArgs, k: f64, beta: f64) -> ThresholdParams {
    ThresholdParams {
        alpha: t.alpha,
        k,
        beta,
        n_random_groups: t.groups,
        rng_seed: t.seed,
    }
}

fn classifier_config(m: &ModelArgs) -> Result<ClassifierConfig> {
    let gamma = match (m.variant, m.gamma) {
        (Variant::MstCd, _) => 0,
        (_, Some(g)) => g,
        (v, None) => return Err(usage(format!("--gamma is required for {}", v))),
    };
    let depth = if m.variant == Variant::Ocdmst { m.depth } else { 0 };
    Ok(ClassifierConfig {
        variant: m.variant,
        gamma,
        depth,
        threshold: threshold_params(&m.threshold, m.k, m.beta),
    })
}

fn confusion_lines(experiments: &[Experiment]) -> String {
    let mut out = String::new();
    for e in experiments {
        let c = e.report.pooled_confusion();
        let _ = writeln!(out, "{} {} pooled confusion (rows predicted, columns actual):", e.dataset, e.report.config.variant);
        let _ = writeln!(out, "             target  outlier");
        let _ = writeln!(out, "  target   {:>8} {:>8}", c.tp, c.fp);
        let _ = writeln!(out, "  outlier  {:>8} {:>8}", c.fn_, c.tn);
    }
    out
}

pub fn eval(args: EvalArgs) -> Result<()> {
    if args.data.list_benchmarks {
        list_benchmarks();
        return Ok(());
    }
    let (name, data) = load_one_class(&args.data)?;
    let config = classifier_config(&args.model)?;
    let protocol = protocol(&args.protocol);
    let report = with_jobs(args.protocol.jobs, || run_cv(&data, &config, &protocol))??;
    let experiments = [Experiment::new(name, protocol, report)];
    if let Some(path) = &args.out {
        write_output(path, |w| Ok(write_runs(w, &experiments)?))?;
    }
    print!("{}", summary_table(&experiments));
    print!("{}", confusion_lines(&experiments));
    Ok(())
}

pub fn grid(args: GridArgs, sweep: bool) -> Result<()> {
    if args.data.list_benchmarks {
        list_benchmarks();
        return Ok(());
    }
    let (name, data) = load_one_class(&args.data)?;
    let protocol = protocol(&args.protocol);
    let gammas = if args.gammas.is_empty() {
        gamma_range(data.target_indices().len(), args.gamma_steps)
    } else {
        args.gammas.clone()
    };
    let grid = ParamGrid {
        gammas,
        depths: args.depths.clone(),
        ks: args.ks.clone(),
        betas: args.betas.clone(),
    };
    let base = threshold_params(&args.threshold, args.ks.first().copied().unwrap_or(5.0), args.betas.first().copied().unwrap_or(1.5));
    let result = with_jobs(args.protocol.jobs, || grid_search(&data, args.variant, &grid, &base, &protocol))??;

    if sweep {
        let mut gammas: Vec<usize> = result.surface.iter().map(|p| p.gamma).collect();
        gammas.dedup();
        let mut depths: Vec<usize> = result.surface.iter().map(|p| p.depth).collect();
        depths.sort_unstable();
        depths.dedup();
        let mut csv = String::from("depth");
        for g in &gammas {
            let _ = write!(csv, ",gamma={}", g);
        }
        csv.push('\n');
        for d in &depths {
            let _ = write!(csv, "{}", d);
            for g in &gammas {
                let cell = result.surface.iter().find(|p| p.gamma == *g && p.depth == *d);
                let _ = write!(csv, ",{}", cell.map(|p| format!("{:.6}", p.mcc_mean)).unwrap_or_default());
            }
            csv.push('\n');
        }
        if let Some(path) = &args.out {
            write_output(path, |w| w.write_all(csv.as_bytes()).map_err(io_failure))?;
        }
        print!("{}", csv);
        return Ok(());
    }

    let experiments: Vec<Experiment> = result
        .ranked
        .into_iter()
        .map(|r| Experiment::new(name.clone(), protocol, r))
        .collect();
    if let Some(path) = &args.out {
        write_output(path, |w| Ok(write_runs(w, &experiments)?))?;
    }
    let shown = if args.top == 0 { experiments.len() } else { args.top.min(experiments.len()) };
    print!("{}", summary_table(&experiments[..shown]));
    if shown < experiments.len() {
        println!("({} of {} configurations shown)", shown, experiments.len());
    }
    Ok(())
}

pub fn predict(args: PredictArgs) -> Result<()> {
    let (_, labeled, targets) = load_labeled(&args.data)?;
    let train: FeatureMatrix = if targets.is_empty() {
        labeled.features.clone()
    } else {
        let data = labeled.one_class(&targets)?;
        data.features().select(&data.target_indices())
    };
    let query_schema = CsvSchema {
        label_column: match &args.query_label_column {
            Some(_) => label_column(&args.query_label_column),
            None => LabelColumn::None,
        },
        ..CsvSchema::default()
    };
    let queries = load_csv(&args.queries, &query_schema)?;
    let config = classifier_config(&args.model)?;
    config.validate(train.n_samples())?;
    let model = fit(&train, &config)?;

    let mut text = String::from("row,label,distance,threshold,sigma_hat,sigma_rg,degenerate\n");
    for (i, row) in queries.features.rows().enumerate() {
        let v = model.predict_stream(row, i as u64)?;
        let (sigma_hat, sigma_rg) = match v.diagnostics {
            Some(d) => (d.sigma_hat.to_string(), d.sigma_rg.to_string()),
            None => (String::new(), String::new()),
        };
        let _ = writeln!(
            text,
            "{},{},{},{},{},{},{}",
            i,
            v.label as u8,
            v.distance,
            v.threshold,
            sigma_hat,
            sigma_rg,
            v.degenerate
        );
    }
    if let Some(path) = &args.out {
        write_output(path, |w| w.write_all(text.as_bytes()).map_err(io_failure))?;
    }
    print!("{}", text);
    Ok(())
}

pub fn validate_data(args: DataArgs) -> Result<()> {
    if args.list_benchmarks {
        list_benchmarks();
        return Ok(());
    }
    let (name, data, targets) = load_labeled(&args)?;
    println!("{}: {} rows x {} features", name, data.features.n_samples(), data.features.n_features());
    if data.dropped_rows > 0 {
        println!("dropped {} rows with missing values", data.dropped_rows);
    }
    for (label, count) in data.label_counts() {
        let mark = if targets.iter().any(|t| t == label) { " (target)" } else { "" };
        println!("  {:<20} {}{}", label, count, mark);
    }
    if !targets.is_empty() {
        data.one_class(&targets)?;
    }
    Ok(())
}

pub fn summarize(args: SummarizeArgs) -> Result<()> {
    let file = File::open(&args.file).map_err(|e| Failure::Data(format!("{}: {}", args.file.display(), e)))?;
    let experiments = read_runs(BufReader::new(file))?;
    print!("{}", summary_table(&experiments));
    if args.confusion {
        print!("{}", confusion_lines(&experiments));
    }
    Ok(())
}

pub fn logistic(args: LogisticArgs) -> Result<()> {
    if args.points < 2 {
        return Err(usage("--points must be at least 2"));
    }
    let mut text = String::from("sigma_hat");
    for k in &args.ks {
        let _ = write!(text, ",K={}", k);
    }
    text.push('\n');
    for i in 0..args.points {
        let s = i as f64 / (args.points - 1) as f64;
        let _ = write!(text, "{:.4}", s);
        for &k in &args.ks {
            let _ = write!(text, ",{:.6}", sigmoid_factor(s, args.sigma_rg, k, args.beta));
        }
        text.push('\n');
    }
    if let Some(path) = &args.out {
        write_output(path, |w| w.write_all(text.as_bytes()).map_err(io_failure))?;
    }
    print!("{}", text);
    Ok(())
}
