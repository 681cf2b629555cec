//! Command-line front end and artifact writing.

use std::fs;
use std::io::Write;
use std::path::{Path as FsPath, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::analysis::{
    exact_tomography, expected_verdict, hom_scan, qber, reconstruct, simulate_tomography,
    CoincidenceClass,
};
use crate::circuits::{ghz_circuit, standard_bsm, symmetric_bsm, CircuitSpec, SCHEMA_VERSION};
use crate::density::DensityMatrix;
use crate::detection::{
    heralded_state, measure, verdict_probabilities, BsmVerdict, Scheme as DetScheme,
};
use crate::inputs::{BellState, InputSpec};
use crate::optics::DelayModel;

/// Environment variable naming the default output directory.
pub const OUTPUT_DIR_ENV: &str = "LOBSIM_OUTPUT_DIR";

pub const EXIT_OK: i32 = 0;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_RUNTIME: i32 = 3;

#[derive(Debug, Clone, PartialEq)]
pub enum CliError {
    Config(String),
    Runtime(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => EXIT_CONFIG,
            CliError::Runtime(_) => EXIT_RUNTIME,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Config(m) => write!(f, "config error: {m}"),
            CliError::Runtime(m) => write!(f, "error: {m}"),
        }
    }
}

fn runtime(e: impl std::fmt::Display) -> CliError {
    CliError::Runtime(e.to_string())
}

fn config(e: impl std::fmt::Display) -> CliError {
    CliError::Config(e.to_string())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Subcommand)]
#[serde(rename_all = "kebab-case")]
pub enum Experiment {
    /// Outcome table of a Bell-state measurement
    Bsm,
    /// Coincidence classes versus optical delay, with visibilities
    HomScan,
    /// Heralded state preparation, optionally followed by tomography
    Prepare,
    /// Heralded state preparation with simulated tomography
    Tomography,
    /// N-party GHZ analyzer or preparation
    Ghz,
}

impl Experiment {
    fn slug(self) -> &'static str {
        match self {
            Experiment::Bsm => "bsm",
            Experiment::HomScan => "hom-scan",
            Experiment::Prepare => "prepare",
            Experiment::Tomography => "tomography",
            Experiment::Ghz => "ghz",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum SchemeArg {
    Standard,
    Symmetric,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Format {
    Csv,
    Json,
}

/// Fully resolved experiment configuration.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub struct ExperimentConfig {
    pub experiment: Experiment,
    pub scheme: SchemeArg,
    pub input: String,
    pub gamma: Option<f64>,
    pub delay: Option<f64>,
    pub lc: f64,
    pub delays: String,
    pub class: Vec<String>,
    pub parties: usize,
    pub tomography: bool,
    pub shots: u64,
    pub seed: u64,
    pub output: PathBuf,
    pub format: Format,
}

/// Keys accepted in a JSON config file; same names as the long flags.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct FileConfig {
    pub experiment: Option<Experiment>,
    pub scheme: Option<SchemeArg>,
    pub input: Option<String>,
    pub gamma: Option<f64>,
    pub delay: Option<f64>,
    pub lc: Option<f64>,
    pub delays: Option<String>,
    pub class: Option<Vec<String>>,
    pub parties: Option<usize>,
    pub tomography: Option<bool>,
    pub shots: Option<u64>,
    pub seed: Option<u64>,
    pub output: Option<PathBuf>,
    pub format: Option<Format>,
}

/// Every configuration key, in help order.
pub const CONFIG_KEYS: [&str; 14] = [
    "experiment",
    "scheme",
    "input",
    "gamma",
    "delay",
    "lc",
    "delays",
    "class",
    "parties",
    "tomography",
    "shots",
    "seed",
    "output",
    "format",
];

#[derive(Debug, Parser)]
#[command(
    name = "lobsim",
    version,
    about = "Simulate linear-optical Bell-state measurement and preparation circuits",
    after_help = "Flags override values from --config. The default output directory is taken from LOBSIM_OUTPUT_DIR, then the current directory.\nExit codes: 0 success, 2 configuration error, 3 runtime error."
)]
pub struct Cli {
    #[command(subcommand)]
    pub experiment: Option<Experiment>,

    /// JSON config file with keys experiment, scheme, input, gamma, delay, lc, delays, class, parties, tomography, shots, seed, output, format
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,

    /// BSM scheme [default: symmetric]
    #[arg(long, global = true, value_enum)]
    pub scheme: Option<SchemeArg>,

    /// Input state: phi+, phi-, psi+, psi-, ghz+, ghz-, a product such as DD or DA, or amplitudes such as HH=1,VV=-1
    #[arg(long, global = true)]
    pub input: Option<String>,

    /// Wavepacket overlap of the delayed photon, bypassing the delay model
    #[arg(long, global = true)]
    pub gamma: Option<f64>,

    /// Single optical delay l, converted to an overlap with --lc
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub delay: Option<f64>,

    /// Coherence length l_c of the Gaussian delay model [default: 0.085]
    #[arg(long, global = true)]
    pub lc: Option<f64>,

    /// Delay grid START:STOP:COUNT for hom-scan [default: -0.4:0.4:81]
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub delays: Option<String>,

    /// Coincidence class for hom-scan, e.g. D13+D24 or D11; repeatable
    #[arg(long, global = true)]
    pub class: Vec<String>,

    /// Number of parties for ghz [default: 3]
    #[arg(long, global = true, visible_alias = "n")]
    pub parties: Option<usize>,

    /// Run simulated tomography on the heralded state (prepare)
    #[arg(long, global = true)]
    pub tomography: bool,

    /// Shots per tomography setting; 0 uses exact probabilities [default: 1000]
    #[arg(long, global = true)]
    pub shots: Option<u64>,

    /// Seed for tomography sampling [default: 1]
    #[arg(long, global = true)]
    pub seed: Option<u64>,

    /// Output directory
    #[arg(long, global = true, value_name = "DIR")]
    pub output: Option<PathBuf>,

    /// Format of table artifacts; metrics are always JSON [default: csv]
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
}

impl Cli {
    /// Merges flags over the optional config file and fills defaults.
    pub fn resolve(&self, env_output: Option<PathBuf>) -> Result<ExperimentConfig, CliError> {
        let file = match &self.config {
            Some(path) => {
                let text = fs::read_to_string(path)
                    .map_err(|e| config(format!("cannot read {}: {e}", path.display())))?;
                serde_json::from_str::<FileConfig>(&text)
                    .map_err(|e| config(format!("{}: {e}", path.display())))?
            }
            None => FileConfig::default(),
        };
        let experiment = self.experiment.or(file.experiment).ok_or_else(|| {
            config("no experiment given (bsm, hom-scan, prepare, tomography, ghz)")
        })?;
        let default_input = match experiment {
            Experiment::Bsm => "phi+",
            Experiment::HomScan => "phi-",
            Experiment::Prepare | Experiment::Tomography => "DD",
            Experiment::Ghz => "ghz+",
        };
        let class = if !self.class.is_empty() {
            self.class.clone()
        } else {
            file.class.unwrap_or_default()
        };
        let cfg = ExperimentConfig {
            experiment,
            scheme: self.scheme.or(file.scheme).unwrap_or(SchemeArg::Symmetric),
            input: self
                .input
                .clone()
                .or(file.input)
                .unwrap_or_else(|| default_input.to_owned()),
            gamma: self.gamma.or(file.gamma),
            delay: self.delay.or(file.delay),
            lc: self.lc.or(file.lc).unwrap_or(0.085),
            delays: self
                .delays
                .clone()
                .or(file.delays)
                .unwrap_or_else(|| "-0.4:0.4:81".to_owned()),
            class,
            parties: self.parties.or(file.parties).unwrap_or(3),
            tomography: self.tomography
                || file.tomography.unwrap_or(false)
                || experiment == Experiment::Tomography,
            shots: self.shots.or(file.shots).unwrap_or(1000),
            seed: self.seed.or(file.seed).unwrap_or(1),
            output: self
                .output
                .clone()
                .or(file.output)
                .or(env_output)
                .unwrap_or_else(|| PathBuf::from(".")),
            format: self.format.or(file.format).unwrap_or(Format::Csv),
        };
        cfg.validate()?;
        Ok(cfg)
    }
}

/// `START:STOP:COUNT`, inclusive of both ends.
pub fn parse_grid(s: &str) -> Result<Vec<f64>, CliError> {
    let parts: Vec<&str> = s.split(':').collect();
    let bad = || config(format!("delay grid must be START:STOP:COUNT, got {s:?}"));
    if parts.len() != 3 {
        return Err(bad());
    }
    let start: f64 = parts[0].trim().parse().map_err(|_| bad())?;
    let stop: f64 = parts[1].trim().parse().map_err(|_| bad())?;
    let count: usize = parts[2].trim().parse().map_err(|_| bad())?;
    match count {
        0 => Err(config("delay grid is empty")),
        1 => Ok(vec![start]),
        n => Ok((0..n)
            .map(|i| start + (stop - start) * i as f64 / (n - 1) as f64)
            .collect()),
    }
}

impl ExperimentConfig {
    fn validate(&self) -> Result<(), CliError> {
        self.input.parse::<InputSpec>().map_err(config)?;
        if self.experiment == Experiment::Ghz && self.parties < 2 {
            return Err(config(format!(
                "ghz needs at least 2 parties, got {}",
                self.parties
            )));
        }
        if let Some(g) = self.gamma {
            if !(0.0..=1.0).contains(&g) {
                return Err(config(format!("gamma {g} outside [0, 1]")));
            }
        }
        DelayModel::new(self.lc).map_err(config)?;
        if self.experiment == Experiment::HomScan {
            parse_grid(&self.delays)?;
            for c in &self.class {
                CoincidenceClass::parse(c).map_err(config)?;
            }
        }
        Ok(())
    }

    fn circuit(&self) -> Result<CircuitSpec, CliError> {
        let spec = match (self.experiment, self.scheme) {
            (Experiment::Ghz, _) => ghz_circuit(self.parties),
            (_, SchemeArg::Standard) => standard_bsm(),
            (_, SchemeArg::Symmetric) => symmetric_bsm(),
        }
        .map_err(config)?;
        Ok(spec)
    }

    fn overlap(&self) -> Result<f64, CliError> {
        match (self.gamma, self.delay) {
            (Some(g), _) => Ok(g),
            (None, Some(l)) => Ok(DelayModel::new(self.lc).map_err(config)?.overlap(l)),
            (None, None) => Ok(1.0),
        }
    }
}

/// Artifacts produced by one run, written only after every computation succeeded.
#[derive(Debug, Default)]
pub struct Artifacts {
    pub files: Vec<(String, String)>,
    pub summary: Vec<String>,
}

impl Artifacts {
    fn add(&mut self, name: impl Into<String>, body: String) {
        self.files.push((name.into(), body));
    }
}

fn json_text(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

fn density_csv(rho: &DensityMatrix) -> String {
    let mut out = format!("# schema_version: {SCHEMA_VERSION}\nrow,col,re,im\n");
    for r in 0..rho.dim() {
        for c in 0..rho.dim() {
            let v = rho.get(r, c);
            out.push_str(&format!("{r},{c},{:.12},{:.12}\n", v.re, v.im));
        }
    }
    out
}

fn density_json(rho: &DensityMatrix) -> Value {
    let rows: Vec<Vec<[f64; 2]>> = (0..rho.dim())
        .map(|r| {
            (0..rho.dim())
                .map(|c| [rho.get(r, c).re, rho.get(r, c).im])
                .collect()
        })
        .collect();
    json!({"schema_version": SCHEMA_VERSION, "qubits": rho.qubits(), "matrix": rows})
}

fn ghz_vector(qubits: usize, minus: bool) -> Vec<Complex64> {
    let dim = 1 << qubits;
    let r = std::f64::consts::FRAC_1_SQRT_2;
    let mut v = vec![Complex64::new(0.0, 0.0); dim];
    v[0] = Complex64::new(r, 0.0);
    v[dim - 1] = Complex64::new(if minus { -r } else { r }, 0.0);
    v
}

/// Best-matching maximally entangled target: Bell states for two qubits, GHZ± otherwise.
fn best_target(rho: &DensityMatrix) -> (String, Vec<Complex64>) {
    let candidates: Vec<(String, Vec<Complex64>)> = if rho.qubits() == 2 {
        BellState::ALL
            .iter()
            .map(|b| (b.to_string(), b.qubit_vector().to_vec()))
            .collect()
    } else {
        vec![
            ("ghz+".to_owned(), ghz_vector(rho.qubits(), false)),
            ("ghz-".to_owned(), ghz_vector(rho.qubits(), true)),
        ]
    };
    candidates
        .into_iter()
        .max_by(|a, b| rho.fidelity(&a.1).total_cmp(&rho.fidelity(&b.1)))
        .expect("non-empty")
}

fn verdict_json(v: &std::collections::BTreeMap<BsmVerdict, f64>) -> Value {
    let map: serde_json::Map<String, Value> =
        v.iter().map(|(k, p)| (k.to_string(), json!(p))).collect();
    Value::Object(map)
}

/// Computes every artifact of the configured experiment without touching the filesystem.
pub fn compute(cfg: &ExperimentConfig) -> Result<Artifacts, CliError> {
    let base = cfg.circuit()?;
    let input = cfg
        .input
        .parse::<InputSpec>()
        .map_err(config)?
        .build(base.inputs())
        .map_err(config)?;
    let gamma = cfg.overlap()?;
    let spec = base.with_overlap(gamma).map_err(config)?;
    let ext = match cfg.format {
        Format::Csv => "csv",
        Format::Json => "json",
    };
    let mut art = Artifacts::default();
    art.add("circuit.json", json_text(&spec.topology_json()));
    let mut metrics = json!({
        "schema_version": SCHEMA_VERSION,
        "experiment": cfg.experiment.slug(),
        "circuit": spec.name(),
        "input": cfg.input,
        "overlap": gamma,
    });

    match cfg.experiment {
        Experiment::Bsm | Experiment::Ghz => {
            let scheme = DetScheme::of(&spec);
            let dist = measure(&spec.run(&input), &spec).map_err(runtime)?;
            let verdicts = verdict_probabilities(&dist, scheme);
            let conclusive: f64 = verdicts
                .iter()
                .filter(|(v, _)| **v != BsmVerdict::Inconclusive)
                .map(|(_, p)| p)
                .sum();
            metrics["conclusive_probability"] = json!(conclusive);
            metrics["verdicts"] = verdict_json(&verdicts);
            if expected_verdict(&base, &input).is_ok() {
                metrics["qber"] = json!(qber(&base, &input, gamma).map_err(runtime)?);
            }
            for (p, prob) in dist.iter() {
                art.summary.push(format!("{p}\t{prob:.6}"));
            }
            let table = match cfg.format {
                Format::Csv => dist.to_csv(),
                Format::Json => json_text(&dist.to_json()),
            };
            art.add(format!("outcomes.{ext}"), table);
            if cfg.experiment == Experiment::Ghz && input.photon_number() as usize == spec.parties()
            {
                let h = heralded_state(&input, &spec).map_err(runtime)?;
                metrics["heralding_probability"] = json!(h.probability);
                if let Some(rho) = h.state {
                    let (name, target) = best_target(&rho);
                    metrics["heralded_target"] = json!(name);
                    metrics["heralded_fidelity"] = json!(rho.fidelity(&target));
                }
            }
        }
        Experiment::HomScan => {
            let model = DelayModel::new(cfg.lc).map_err(config)?;
            let delays = parse_grid(&cfg.delays)?;
            let names: Vec<String> = if !cfg.class.is_empty() {
                cfg.class.clone()
            } else if matches!(
                cfg.input.parse::<InputSpec>(),
                Ok(InputSpec::Bell(BellState::PsiPlus | BellState::PsiMinus))
            ) && cfg.scheme == SchemeArg::Symmetric
            {
                vec!["D11".into(), "D24".into()]
            } else {
                match cfg.scheme {
                    SchemeArg::Symmetric => vec!["D13+D24".into(), "D14+D23".into()],
                    SchemeArg::Standard => vec!["D12+D34".into(), "D14+D23".into()],
                }
            };
            let classes = names
                .iter()
                .map(|c| CoincidenceClass::parse(c))
                .collect::<Result<Vec<_>, _>>()
                .map_err(config)?;
            let scan = hom_scan(&base, &input, &model, &delays, &classes).map_err(runtime)?;
            metrics["coherence_length"] = json!(cfg.lc);
            metrics["visibilities"] =
                serde_json::to_value(&scan.visibilities).expect("serializable");
            for v in &scan.visibilities {
                art.summary.push(format!(
                    "{}\t{:?}\tvisibility {:.6}\t(C0 {:.6}, Cfar {:.6})",
                    v.class, v.kind, v.value, v.at_zero_delay, v.far
                ));
            }
            let table = match cfg.format {
                Format::Csv => scan.to_csv(),
                Format::Json => json_text(&scan.to_json()),
            };
            art.add(format!("hom_scan.{ext}"), table);
        }
        Experiment::Prepare | Experiment::Tomography => {
            let h = heralded_state(&input, &spec).map_err(runtime)?;
            metrics["heralding_probability"] = json!(h.probability);
            art.summary
                .push(format!("heralding probability\t{:.6}", h.probability));
            let Some(rho) = h.state else {
                metrics["heralded"] = json!(false);
                art.summary.push("no heralded events".to_owned());
                art.add("metrics.json", json_text(&metrics));
                return Ok(art);
            };
            let (name, target) = best_target(&rho);
            let f = rho.fidelity(&target);
            metrics["target"] = json!(name);
            metrics["fidelity"] = json!(f);
            art.summary.push(format!("fidelity to {name}\t{f:.6}"));
            if rho.qubits() == 2 {
                let c = rho.concurrence().map_err(runtime)?;
                metrics["concurrence"] = json!(c);
                art.summary.push(format!("concurrence\t{c:.6}"));
            }
            let table = match cfg.format {
                Format::Csv => density_csv(&rho),
                Format::Json => json_text(&density_json(&rho)),
            };
            art.add(format!("density.{ext}"), table);
            if cfg.tomography {
                let counts = if cfg.shots == 0 {
                    exact_tomography(&rho)
                } else {
                    simulate_tomography(&rho, cfg.shots, cfg.seed)
                }
                .map_err(runtime)?;
                let recon = reconstruct(&counts).map_err(runtime)?;
                let rf = recon.fidelity(&target);
                let rc = recon.concurrence().map_err(runtime)?;
                metrics["tomography"] = json!({
                    "shots_per_setting": cfg.shots,
                    "seed": cfg.seed,
                    "fidelity": rf,
                    "concurrence": rc,
                    "trace_distance": recon.trace_distance(&rho),
                });
                art.summary.push(format!("reconstructed fidelity\t{rf:.6}"));
                art.summary
                    .push(format!("reconstructed concurrence\t{rc:.6}"));
                let table = match cfg.format {
                    Format::Csv => counts.to_csv(),
                    Format::Json => json_text(&json!({
                        "schema_version": SCHEMA_VERSION,
                        "counts": counts,
                    })),
                };
                art.add(format!("tomography_counts.{ext}"), table);
                let table = match cfg.format {
                    Format::Csv => density_csv(&recon),
                    Format::Json => json_text(&density_json(&recon)),
                };
                art.add(format!("reconstructed.{ext}"), table);
            }
        }
    }
    art.add("metrics.json", json_text(&metrics));
    Ok(art)
}

fn write_atomic(dir: &FsPath, name: &str, body: &str) -> std::io::Result<()> {
    let target = dir.join(name);
    let tmp = dir.join(format!(".{name}.tmp-{}", std::process::id()));
    {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(body.as_bytes())?;
        f.sync_all()?;
    }
    fs::rename(&tmp, &target).inspect_err(|_| {
        let _ = fs::remove_file(&tmp);
    })
}

/// Computes the experiment and writes its artifacts into `cfg.output`.
pub fn run(cfg: &ExperimentConfig) -> Result<Artifacts, CliError> {
    let art = compute(cfg)?;
    fs::create_dir_all(&cfg.output)
        .map_err(|e| runtime(format!("cannot create {}: {e}", cfg.output.display())))?;
    for (name, body) in &art.files {
        write_atomic(&cfg.output, name, body).map_err(|e| {
            runtime(format!(
                "cannot write {}: {e}",
                cfg.output.join(name).display()
            ))
        })?;
    }
    Ok(art)
}

/// Entry point used by the binary; returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) if e.use_stderr() => {
            let text = e.to_string();
            eprintln!(
                "lobsim: {}",
                text.lines().next().unwrap_or("invalid arguments")
            );
            return EXIT_CONFIG;
        }
        Err(e) => {
            let _ = e.print();
            return EXIT_OK;
        }
    };
    let env_output = std::env::var_os(OUTPUT_DIR_ENV).map(PathBuf::from);
    let result = cli.resolve(env_output).and_then(|cfg| run(&cfg));
    match result {
        Ok(art) => {
            for line in art.summary {
                println!("{line}");
            }
            EXIT_OK
        }
        Err(e) => {
            eprintln!("lobsim: {e}");
            e.exit_code()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(args: &[&str]) -> Cli {
        Cli::try_parse_from(std::iter::once("lobsim").chain(args.iter().copied())).unwrap()
    }

    #[test]
    fn grid_parsing() {
        assert_eq!(parse_grid("-1:1:3").unwrap(), vec![-1.0, 0.0, 1.0]);
        assert_eq!(parse_grid("0.5:2:1").unwrap(), vec![0.5]);
        assert!(parse_grid("0:1").is_err());
        assert!(parse_grid("0:1:0").is_err());
        assert_eq!(parse_grid("-0.4:0.4:81").unwrap().len(), 81);
    }

    #[test]
    fn defaults_and_overrides() {
        let cfg = parse(&["bsm"]).resolve(None).unwrap();
        assert_eq!(cfg.input, "phi+");
        assert_eq!(cfg.scheme, SchemeArg::Symmetric);
        assert_eq!(cfg.output, PathBuf::from("."));
        let cfg = parse(&["bsm", "--input", "psi-", "--scheme", "standard"])
            .resolve(Some(PathBuf::from("/tmp/x")))
            .unwrap();
        assert_eq!(cfg.input, "psi-");
        assert_eq!(cfg.output, PathBuf::from("/tmp/x"));
        assert!(parse(&["tomography"]).resolve(None).unwrap().tomography);
    }

    #[test]
    fn config_errors() {
        assert!(matches!(
            parse(&["bsm", "--input", "nope"]).resolve(None),
            Err(CliError::Config(_))
        ));
        assert!(matches!(
            parse(&["ghz", "--parties", "1"]).resolve(None),
            Err(CliError::Config(_))
        ));
        assert!(matches!(parse(&[]).resolve(None), Err(CliError::Config(_))));
        assert!(matches!(
            parse(&["bsm", "--gamma", "2"]).resolve(None),
            Err(CliError::Config(_))
        ));
    }

    #[test]
    fn help_lists_every_key() {
        let help = <Cli as clap::CommandFactory>::command()
            .render_long_help()
            .to_string();
        for key in CONFIG_KEYS.iter().filter(|k| **k != "experiment") {
            assert!(help.contains(&format!("--{key}")), "missing --{key}");
        }
        assert!(help.contains("keys experiment,"));
    }
}
