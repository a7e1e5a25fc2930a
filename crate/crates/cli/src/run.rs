use std::path::{Path, PathBuf};
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use rayon::prelude::*;
use serde::Serialize;
use serde_json::Value;

use omnisurf::analysis::{
    evaluate_model, model_consistency, radiation_pattern, ModelKind, ModelValue, PatternMethod, RegionBoundaries,
};
use omnisurf::channel::Side;

use crate::error::CliError;
use crate::output::{append_manifest, fmt12, sha256_hex, Emitted, Manifest, OutputRecord, Table, Versions};
use crate::scenario::{from_value, parse_scenario_in, Model, Scenario};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Command {
    /// One gain row per (receiver, model).
    Gain,
    /// Normalized power pattern over both half-spaces.
    Pattern,
    /// Gain rows over the scenario's sweep block.
    Sweep,
    /// Cross-model consistency report.
    Compare,
    /// Field-region boundaries and receiver classification.
    Regions,
    /// Parse and check the scenario only.
    Validate,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Gain => "gain",
            Command::Pattern => "pattern",
            Command::Sweep => "sweep",
            Command::Compare => "compare",
            Command::Regions => "regions",
            Command::Validate => "validate",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Flags {
    pub out: PathBuf,
    /// Overrides the scenario's `channel_models`.
    pub models: Option<Vec<String>>,
    /// Pattern resolution, degrees.
    pub resolution_deg: Option<f64>,
    pub workers: Option<usize>,
}

impl Flags {
    pub fn new(out: impl Into<PathBuf>) -> Self {
        Flags { out: out.into(), models: None, resolution_deg: None, workers: None }
    }
}

pub const GAIN_CSV: &str = "gain.csv";
pub const SWEEP_CSV: &str = "sweep.csv";
pub const PATTERN_REFLECT_CSV: &str = "pattern_reflect.csv";
pub const PATTERN_TRANSMIT_CSV: &str = "pattern_transmit.csv";
pub const CONSISTENCY_CSV: &str = "consistency.csv";
pub const CONSISTENCY_JSON: &str = "consistency.json";
pub const REGIONS_JSON: &str = "regions.json";

pub const GAIN_HEADER: [&str; 6] = ["scenario_digest", "model", "receiver", "sweep_value", "gain_db", "phase_rad"];
pub const PATTERN_HEADER: [&str; 3] = ["theta_rad", "phi_rad", "power_db"];
pub const CONSISTENCY_HEADER: [&str; 6] =
    ["scenario_digest", "receiver", "model_a", "model_b", "deviation_db", "deviation_rad"];

pub const DEFAULT_RESOLUTION_DEG: f64 = 1.0;

/// Runs one command end to end, appends the run manifest and returns the
/// process exit status.
pub fn run(command: Command, scenario_path: &Path, flags: &Flags) -> i32 {
    let started = Instant::now();
    let started_unix_ms = SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_millis());
    let mut digest = None;
    let mut input_sha = None;
    let mut workers = rayon::current_num_threads();

    let result = (|| {
        let text = std::fs::read(scenario_path)
            .map_err(|e| CliError::config(format!("{}: {e}", scenario_path.display())))?;
        input_sha = Some(sha256_hex(&text));
        let text = String::from_utf8(text)
            .map_err(|_| CliError::config(format!("{}: not valid UTF-8", scenario_path.display())))?;
        let base = scenario_path.parent().unwrap_or(Path::new("."));
        let mut scenario = parse_scenario_in(&text, base)?;
        if let Some(m) = &flags.models {
            scenario.channel_models = m.clone();
            scenario.build(base)?;
        }
        digest = Some(scenario.digest());
        let pool = thread_pool(flags.workers)?;
        workers = pool.current_num_threads();
        pool.install(|| execute(command, &scenario, base, flags))
    })();

    let (code, error, emitted) = match result {
        Ok(e) => (0, None, e),
        Err(e) => {
            let code = if command == Command::Validate { 1 } else { e.exit_code() };
            eprintln!("error: {e}");
            (code, Some(e.to_string()), Emitted::default())
        }
    };
    let outputs = emitted
        .files
        .iter()
        .map(|p| OutputRecord {
            path: p.display().to_string(),
            sha256: std::fs::read(p).map(|b| sha256_hex(&b)).unwrap_or_default(),
        })
        .collect();
    let manifest = Manifest {
        command: command.name().into(),
        scenario_path: scenario_path.display().to_string(),
        scenario_digest: digest,
        input_sha256: input_sha,
        models: flags.models.clone(),
        resolution_deg: flags.resolution_deg,
        workers,
        versions: Versions::current(),
        seeds: Vec::new(),
        outputs,
        exit_code: code,
        error,
        started_unix_ms,
        wall_time_ms: started.elapsed().as_secs_f64() * 1e3,
    };
    if let Err(e) = append_manifest(&flags.out, &manifest) {
        log::warn!("could not append run manifest in {}: {e}", flags.out.display());
    }
    code
}

fn thread_pool(workers: Option<usize>) -> Result<rayon::ThreadPool, CliError> {
    if workers == Some(0) {
        return Err(CliError::config("worker count must be positive"));
    }
    rayon::ThreadPoolBuilder::new()
        .num_threads(workers.unwrap_or(0))
        .build()
        .map_err(|e| CliError::config(format!("thread pool: {e}")))
}

/// Executes a command on an already validated scenario.
pub fn execute(command: Command, scenario: &Scenario, base: &Path, flags: &Flags) -> Result<Emitted, CliError> {
    let mut emitted = Emitted::default();
    let out = &flags.out;
    match command {
        Command::Validate => {
            let m = scenario.build(base)?;
            println!(
                "valid: {}×{} elements, {} receiver(s), models {}; digest {}",
                m.geometry.nx,
                m.geometry.ny,
                m.receivers.len(),
                names(&m.models).join(","),
                scenario.digest()
            );
        }
        Command::Gain => {
            let m = scenario.build(base)?;
            let rows = gain_rows(&m, None)?;
            emitted.write(out, GAIN_CSV, &gain_table(&scenario.digest(), &rows).to_bytes())?;
        }
        Command::Sweep => {
            let rows = sweep_rows(scenario, base)?;
            emitted.write(out, SWEEP_CSV, &gain_table(&scenario.digest(), &rows).to_bytes())?;
        }
        Command::Pattern => {
            let m = scenario.build(base)?;
            let method = pattern_method(&m.models)?;
            let res = flags.resolution_deg.unwrap_or(DEFAULT_RESOLUTION_DEG);
            if !(res > 0.0 && res <= 1.0) {
                return Err(CliError::config(format!("resolution must be in (0, 1] degrees, got {res}")));
            }
            let p = radiation_pattern(&m.geometry, &m.coeffs, &m.source, res.to_radians(), method)?;
            for (side, name) in [(Side::Reflect, PATTERN_REFLECT_CSV), (Side::Transmit, PATTERN_TRANSMIT_CSV)] {
                let h = p.side(side);
                if h.empty {
                    log::warn!("no power reaches the {} half-space", side.name());
                }
                let mut t = Table::new(&PATTERN_HEADER);
                for (it, theta) in h.thetas.iter().enumerate() {
                    for (ip, phi) in h.phis.iter().enumerate() {
                        t.push(vec![fmt12(*theta), fmt12(*phi), fmt12(h.power_db[[it, ip]])]);
                    }
                }
                emitted.write(out, name, &t.to_bytes())?;
            }
        }
        Command::Compare => {
            let m = scenario.build(base)?;
            let digest = scenario.digest();
            let (report, table) = compare(&m, &digest)?;
            emitted.write_json(out, CONSISTENCY_JSON, &report)?;
            emitted.write(out, CONSISTENCY_CSV, &table.to_bytes())?;
        }
        Command::Regions => {
            let m = scenario.build(base)?;
            emitted.write_json(out, REGIONS_JSON, &regions(&m, &scenario.digest())?)?;
        }
    }
    Ok(emitted)
}

fn names(models: &[ModelKind]) -> Vec<String> {
    models.iter().map(|m| m.name().to_string()).collect()
}

fn pattern_method(models: &[ModelKind]) -> Result<PatternMethod, CliError> {
    let first = models[0];
    first.name().parse::<PatternMethod>().map_err(|_| {
        CliError::config(format!(
            "pattern uses the first channel model, which must be one of {}; got {}",
            PatternMethod::ALL.iter().map(|m| m.name()).collect::<Vec<_>>().join(", "),
            first.name()
        ))
    })
}

/// One evaluated (sweep value, receiver, model) triple.
#[derive(Debug, Clone, PartialEq)]
pub struct GainRow {
    pub sweep_value: Option<f64>,
    pub receiver: String,
    pub model: ModelKind,
    pub gain_db: f64,
    /// Absent for the circuit model, which reports a power ratio.
    pub phase_rad: Option<f64>,
}

fn gain_rows(m: &Model, sweep_value: Option<f64>) -> Result<Vec<GainRow>, CliError> {
    let jobs: Vec<(usize, ModelKind)> =
        (0..m.receivers.len()).flat_map(|r| m.models.iter().map(move |&k| (r, k))).collect();
    jobs.par_iter()
        .map(|&(r, kind)| {
            let rx = &m.receivers[r];
            let value = evaluate_model(&m.consistency_scenario(r, vec![kind]), kind)
                .map_err(|e| CliError::from(e).context(format!("receiver '{}', model {}", rx.id, kind.name())))?;
            let (gain_db, phase_rad) = match value {
                ModelValue::Gain(g) => (g.power_gain_db, Some(g.phase())),
                ModelValue::Power { received, source } => (10.0 * (received / source).log10(), None),
            };
            Ok(GainRow { sweep_value, receiver: rx.id.clone(), model: kind, gain_db, phase_rad })
        })
        .collect()
}

fn gain_table(digest: &str, rows: &[GainRow]) -> Table {
    let mut t = Table::new(&GAIN_HEADER);
    for r in rows {
        t.push(vec![
            digest.to_string(),
            r.model.name().to_string(),
            r.receiver.clone(),
            r.sweep_value.map(fmt12).unwrap_or_default(),
            fmt12(r.gain_db),
            r.phase_rad.map(fmt12).unwrap_or_default(),
        ]);
    }
    t
}

/// Sets the number at a dotted path, creating intermediate objects.
pub fn set_path(doc: &mut Value, path: &str, x: f64) -> Result<(), CliError> {
    let mut cur = doc;
    for seg in path.split('.') {
        if seg.is_empty() {
            return Err(CliError::config(format!("sweep.parameter '{path}' has an empty segment")));
        }
        cur = match cur {
            Value::Object(map) => map.entry(seg).or_insert_with(|| Value::Object(Default::default())),
            Value::Array(items) => {
                let i: usize = seg
                    .parse()
                    .map_err(|_| CliError::config(format!("sweep.parameter '{path}': '{seg}' is not an index")))?;
                let n = items.len();
                items
                    .get_mut(i)
                    .ok_or_else(|| CliError::config(format!("sweep.parameter '{path}': index {i} out of {n}")))?
            }
            _ => return Err(CliError::config(format!("sweep.parameter '{path}' does not name a field"))),
        };
    }
    *cur = if x.fract() == 0.0 && x.abs() < 9e15 {
        Value::from(x as i64)
    } else {
        serde_json::Number::from_f64(x).map(Value::Number).ok_or_else(|| CliError::config("sweep value is not finite"))?
    };
    Ok(())
}

fn sweep_rows(scenario: &Scenario, base: &Path) -> Result<Vec<GainRow>, CliError> {
    let sweep = scenario.sweep.as_ref().ok_or_else(|| CliError::config("the sweep command needs a sweep block"))?;
    let values = sweep.values()?;
    let mut doc = serde_json::to_value(scenario).expect("scenario serializes");
    if let Value::Object(map) = &mut doc {
        map.remove("sweep");
    }
    let per_point: Vec<Vec<GainRow>> = values
        .par_iter()
        .map(|&x| {
            let at = || format!("{} = {}", sweep.parameter, fmt12(x));
            let mut d = doc.clone();
            set_path(&mut d, &sweep.parameter, x)?;
            let s = from_value(d).map_err(|e| e.context(at()))?;
            let m = s.build(base).map_err(|e| e.context(at()))?;
            gain_rows(&m, Some(x)).map_err(|e| e.context(at()))
        })
        .collect::<Result<_, _>>()?;
    Ok(per_point.into_iter().flatten().collect())
}

#[derive(Debug, Serialize)]
pub struct CompareReport {
    pub scenario_digest: String,
    pub wavelength_m: f64,
    pub models: Vec<String>,
    pub receivers: Vec<ReceiverComparison>,
}

#[derive(Debug, Serialize)]
pub struct ReceiverComparison {
    pub id: String,
    pub side: &'static str,
    pub distance_m: f64,
    pub region: &'static str,
    pub reactive_boundary_m: f64,
    pub fraunhofer_boundary_m: f64,
    pub outcomes: Vec<OutcomeRecord>,
    /// `null` where either model produced no channel gain.
    pub deviation_db: Vec<Vec<Option<f64>>>,
    pub deviation_rad: Vec<Vec<Option<f64>>>,
    pub max_deviation_db: f64,
    pub max_deviation_rad: f64,
}

#[derive(Debug, Serialize)]
pub struct OutcomeRecord {
    pub model: String,
    pub gain_db: Option<f64>,
    pub phase_rad: Option<f64>,
    pub received_power_w: Option<f64>,
    pub source_power_w: Option<f64>,
    pub valid: bool,
    pub note: Option<String>,
    pub error: Option<String>,
}

fn finite(x: f64) -> Option<f64> {
    x.is_finite().then_some(x)
}

fn compare(m: &Model, digest: &str) -> Result<(CompareReport, Table), CliError> {
    let reports = (0..m.receivers.len())
        .into_par_iter()
        .map(|r| model_consistency(&m.consistency_scenario(r, m.models.clone())).map(|c| c.with_digest(digest)))
        .collect::<Result<Vec<_>, _>>()?;
    let mut table = Table::new(&CONSISTENCY_HEADER);
    let mut receivers = Vec::with_capacity(reports.len());
    for (rx, rep) in m.receivers.iter().zip(&reports) {
        for o in rep.outcomes.iter().filter_map(|o| o.value.as_ref().err().map(|e| (o.model, e))) {
            log::warn!("receiver '{}': {} failed: {}", rx.id, o.0.name(), o.1);
        }
        let n = rep.outcomes.len();
        for i in 0..n {
            for j in i + 1..n {
                table.push(vec![
                    digest.to_string(),
                    rx.id.clone(),
                    rep.outcomes[i].model.name().to_string(),
                    rep.outcomes[j].model.name().to_string(),
                    finite(rep.deviation_db[[i, j]]).map(fmt12).unwrap_or_default(),
                    finite(rep.deviation_rad[[i, j]]).map(fmt12).unwrap_or_default(),
                ]);
            }
        }
        let grid = |a: &ndarray::Array2<f64>| a.outer_iter().map(|row| row.iter().map(|&v| finite(v)).collect()).collect();
        let (max_db, max_rad) = rep.max_deviation();
        receivers.push(ReceiverComparison {
            id: rx.id.clone(),
            side: rx.side.name(),
            distance_m: rep.distance,
            region: rep.region.kind.name(),
            reactive_boundary_m: rep.region.reactive_boundary,
            fraunhofer_boundary_m: rep.region.fraunhofer_boundary,
            outcomes: rep
                .outcomes
                .iter()
                .map(|o| {
                    let mut rec = OutcomeRecord {
                        model: o.model.name().into(),
                        gain_db: None,
                        phase_rad: None,
                        received_power_w: None,
                        source_power_w: None,
                        valid: o.valid,
                        note: o.note.clone(),
                        error: o.value.as_ref().err().cloned(),
                    };
                    match &o.value {
                        Ok(ModelValue::Gain(g)) => {
                            rec.gain_db = finite(g.power_gain_db);
                            rec.phase_rad = finite(g.phase());
                        }
                        Ok(ModelValue::Power { received, source }) => {
                            rec.received_power_w = Some(*received);
                            rec.source_power_w = Some(*source);
                        }
                        Err(_) => {}
                    }
                    rec
                })
                .collect(),
            deviation_db: grid(&rep.deviation_db),
            deviation_rad: grid(&rep.deviation_rad),
            max_deviation_db: max_db,
            max_deviation_rad: max_rad,
        });
    }
    let report = CompareReport {
        scenario_digest: digest.to_string(),
        wavelength_m: m.wavelength.meters(),
        models: names(&m.models),
        receivers,
    };
    Ok((report, table))
}

#[derive(Debug, Serialize)]
pub struct RegionsReport {
    pub scenario_digest: String,
    pub wavelength_m: f64,
    pub aperture_diagonal_m: f64,
    pub reactive_boundary_m: f64,
    pub fraunhofer_boundary_m: f64,
    pub receivers: Vec<ReceiverRegion>,
}

#[derive(Debug, Serialize)]
pub struct ReceiverRegion {
    pub id: String,
    pub distance_m: f64,
    pub region: &'static str,
}

fn regions(m: &Model, digest: &str) -> Result<RegionsReport, CliError> {
    let b = RegionBoundaries::new(&m.geometry, m.wavelength);
    let receivers = m
        .receivers
        .iter()
        .map(|r| {
            let d = r.position.distance(&m.geometry.origin);
            Ok(ReceiverRegion { id: r.id.clone(), distance_m: d, region: b.classify(d)?.kind.name() })
        })
        .collect::<Result<_, CliError>>()?;
    Ok(RegionsReport {
        scenario_digest: digest.to_string(),
        wavelength_m: m.wavelength.meters(),
        aperture_diagonal_m: m.geometry.diagonal(),
        reactive_boundary_m: b.reactive,
        fraunhofer_boundary_m: b.fraunhofer,
        receivers,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn set_path_creates_and_overwrites() {
        let mut v = serde_json::json!({"source": {"plane_wave": {"theta_deg": 0}}});
        set_path(&mut v, "source.plane_wave.theta_deg", 12.5).unwrap();
        set_path(&mut v, "surface.nx", 4.0).unwrap();
        assert_eq!(v["source"]["plane_wave"]["theta_deg"], 12.5);
        assert_eq!(v["surface"]["nx"], 4);
    }

    #[test]
    fn set_path_rejects_scalars_midway() {
        let mut v = serde_json::json!({"wavelength": 0.01});
        assert!(set_path(&mut v, "wavelength.x", 1.0).is_err());
        assert!(set_path(&mut v, "a..b", 1.0).is_err());
    }
}
