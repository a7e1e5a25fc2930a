//! Scenario documents.
//!
//! A scenario is a JSON object; every block is optional and falls back to a
//! 10×10 surface at half-wavelength pitch, 28 GHz, lit by a broadside plane
//! wave, with every element splitting power equally between reflection and
//! transmission. Complex numbers are `[re, im]` pairs. Per-element values are
//! a single value applied to all elements or one value per element in
//! element order (`m = iy·nx + ix`).

use std::path::{Path, PathBuf};

use ndarray::Array2;
use num_complex::Complex64 as C;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use omnisurf::analysis::{ConsistencyScenario, ModelKind};
use omnisurf::channel::{build_port_network, PortNetwork, Side};
use omnisurf::geometry::{Position3D, SurfaceGeometry, Wavelength};
use omnisurf::hardware::{
    coefficients_from_gstc, coefficients_from_impedance, coefficients_from_phase_shift, linear_phase_gradient_profile,
    CoefficientTable, ControlMode, ElementCoefficients, ImpedanceProfile, PhaseShiftProfile, SusceptibilityProfile,
};
use omnisurf::source::{incident_on_elements, PlaneWaveSource, PointSource, Source};

use crate::error::CliError;

pub const DEFAULT_FREQUENCY_HZ: f64 = 28e9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    /// Free-space wavelength, m. Mutually exclusive with `frequency`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wavelength: Option<f64>,
    /// Hz. Defaults to 28 GHz when neither is given.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub frequency: Option<f64>,
    #[serde(default)]
    pub surface: SurfaceSpec,
    #[serde(default)]
    pub hardware: HardwareSpec,
    /// Restricts every element to the nearest entry of a finite table.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coupled_pin_table: Option<TableSpec>,
    #[serde(default)]
    pub source: SourceSpec,
    #[serde(default)]
    pub receivers: Vec<ReceiverSpec>,
    #[serde(default = "default_models")]
    pub channel_models: Vec<String>,
    /// Aperture samples per element for the wave models; `λ/4` pitch when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub samples_per_element: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub circuit: Option<CircuitSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep: Option<SweepSpec>,
}

impl Default for Scenario {
    fn default() -> Self {
        serde_json::from_str("{}").expect("empty document is valid")
    }
}

fn default_models() -> Vec<String> {
    ModelKind::WAVE.iter().map(|m| m.name().to_string()).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SurfaceSpec {
    #[serde(default = "ten")]
    pub nx: usize,
    #[serde(default = "ten")]
    pub ny: usize,
    /// Element pitch, m. Half a wavelength when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dx: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dy: Option<f64>,
    #[serde(default)]
    pub origin: [f64; 3],
}

impl Default for SurfaceSpec {
    fn default() -> Self {
        SurfaceSpec { nx: 10, ny: 10, dx: None, dy: None, origin: [0.0; 3] }
    }
}

fn ten() -> usize {
    10
}

/// One value for every element, or one per element.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PerElement<T> {
    Uniform(T),
    Each(Vec<T>),
}

impl<T: Clone> PerElement<T> {
    fn expand(&self, n: usize, what: &str) -> Result<Vec<T>, CliError> {
        match self {
            PerElement::Uniform(v) => Ok(vec![v.clone(); n]),
            PerElement::Each(v) if v.len() == n => Ok(v.clone()),
            PerElement::Each(v) => {
                Err(CliError::config(format!("{what}: expected 1 or {n} values, got {}", v.len())))
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HardwareSpec {
    PhaseShift(PhaseShiftSpec),
    Impedance(ImpedanceSpec),
    Gstc(GstcSpec),
    CoefficientTable(CoefficientTableSpec),
}

impl Default for HardwareSpec {
    fn default() -> Self {
        HardwareSpec::PhaseShift(PhaseShiftSpec::default())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PhaseShiftSpec {
    #[serde(default = "half_power")]
    pub beta_r: PerElement<f64>,
    #[serde(default = "half_power")]
    pub beta_t: PerElement<f64>,
    /// rad
    #[serde(default = "zero")]
    pub phi_r: PerElement<f64>,
    #[serde(default = "zero")]
    pub phi_t: PerElement<f64>,
    /// Adds a linear phase gradient steering a normally incident wave to this
    /// angle (degrees, measured in the xz plane).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub steer_reflect_deg: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub steer_transmit_deg: Option<f64>,
}

impl Default for PhaseShiftSpec {
    fn default() -> Self {
        PhaseShiftSpec {
            beta_r: half_power(),
            beta_t: half_power(),
            phi_r: zero(),
            phi_t: zero(),
            steer_reflect_deg: None,
            steer_transmit_deg: None,
        }
    }
}

fn half_power() -> PerElement<f64> {
    PerElement::Uniform(std::f64::consts::FRAC_1_SQRT_2)
}

fn zero() -> PerElement<f64> {
    PerElement::Uniform(0.0)
}

/// Electric sheet admittance `ye` (S) and magnetic sheet impedance `zm` (Ω).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ImpedanceSpec {
    pub ye: PerElement<[f64; 2]>,
    pub zm: PerElement<[f64; 2]>,
}

/// Electric and magnetic surface susceptibilities (m), constant over each element.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GstcSpec {
    pub chi_ee: PerElement<[f64; 2]>,
    pub chi_mm: PerElement<[f64; 2]>,
    /// Fine-grid samples per element along each axis.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TableEntry {
    pub r: [f64; 2],
    pub t: [f64; 2],
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TableSpec {
    pub bits: u32,
    pub entries: Vec<TableEntry>,
}

impl TableSpec {
    fn table(&self) -> Result<CoefficientTable<f64>, CliError> {
        let e = self.entries.iter().map(|e| (complex(e.r), complex(e.t))).collect();
        Ok(CoefficientTable::new(e, self.bits)?)
    }
}

/// Elements pick table entries by index.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoefficientTableSpec {
    pub bits: u32,
    pub entries: Vec<TableEntry>,
    pub states: PerElement<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SourceSpec {
    PlaneWave(PlaneWaveSpec),
    Point(PointSpec),
}

impl Default for SourceSpec {
    fn default() -> Self {
        SourceSpec::PlaneWave(PlaneWaveSpec::default())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlaneWaveSpec {
    #[serde(default = "unit")]
    pub amplitude: [f64; 2],
    /// Angle of the propagation direction from +z, degrees.
    #[serde(default)]
    pub theta_deg: f64,
    #[serde(default)]
    pub phi_deg: f64,
}

impl Default for PlaneWaveSpec {
    fn default() -> Self {
        PlaneWaveSpec { amplitude: unit(), theta_deg: 0.0, phi_deg: 0.0 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PointSpec {
    pub position: [f64; 3],
    #[serde(default = "unit")]
    pub amplitude: [f64; 2],
}

fn unit() -> [f64; 2] {
    [1.0, 0.0]
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SideTag {
    Reflect,
    Transmit,
}

impl From<SideTag> for Side {
    fn from(s: SideTag) -> Side {
        match s {
            SideTag::Reflect => Side::Reflect,
            SideTag::Transmit => Side::Transmit,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReceiverSpec {
    /// Defaults to `rx<index>`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub id: Option<String>,
    pub position: [f64; 3],
    /// Must agree with the sign of z; inferred when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub side: Option<SideTag>,
}

/// Port-network options for the equivalent-circuit model.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CircuitSpec {
    /// m; `λ/8` when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dipole_length: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub self_impedance: Option<[f64; 2]>,
    /// JSON file `{"re": [[..]], "im": [[..]]}` replacing the built-in
    /// coupling matrix; ports are the elements followed by the receivers.
    /// Relative paths resolve against the scenario's directory.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matrix_file: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub element_loads: Option<PerElement<[f64; 2]>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub receiver_loads: Option<PerElement<[f64; 2]>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepScale {
    #[default]
    Linear,
    Log,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    /// Dotted path of a numeric scenario field, e.g. `source.plane_wave.theta_deg`.
    pub parameter: String,
    pub start: f64,
    pub stop: f64,
    pub count: usize,
    #[serde(default)]
    pub scale: SweepScale,
}

impl SweepSpec {
    pub fn values(&self) -> Result<Vec<f64>, CliError> {
        if self.count < 2 {
            return Err(CliError::config(format!("sweep.count must be at least 2, got {}", self.count)));
        }
        if !self.start.is_finite() || !self.stop.is_finite() {
            return Err(CliError::config("sweep bounds must be finite"));
        }
        let n = (self.count - 1) as f64;
        Ok(match self.scale {
            SweepScale::Linear => (0..self.count)
                .map(|i| if i + 1 == self.count { self.stop } else { self.start + (self.stop - self.start) * i as f64 / n })
                .collect(),
            SweepScale::Log => {
                if !(self.start > 0.0 && self.stop > 0.0) {
                    return Err(CliError::config("logarithmic sweep bounds must be positive"));
                }
                let (a, b) = (self.start.ln(), self.stop.ln());
                (0..self.count)
                    .map(|i| if i + 1 == self.count { self.stop } else { (a + (b - a) * i as f64 / n).exp() })
                    .collect()
            }
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Receiver {
    pub id: String,
    pub position: Position3D<f64>,
    pub side: Side,
}

/// A scenario resolved into library types.
#[derive(Debug, Clone)]
pub struct Model {
    pub wavelength: Wavelength<f64>,
    pub geometry: SurfaceGeometry<f64>,
    pub coeffs: ElementCoefficients<f64>,
    pub source: Source<f64>,
    pub receivers: Vec<Receiver>,
    pub models: Vec<ModelKind>,
    pub samples_per_element: Option<usize>,
    pub port_network: Option<PortNetwork<f64>>,
}

impl Model {
    pub fn consistency_scenario(&self, receiver: usize, models: Vec<ModelKind>) -> ConsistencyScenario<f64> {
        let rx = &self.receivers[receiver];
        ConsistencyScenario {
            geometry: self.geometry,
            coeffs: self.coeffs.clone(),
            source: self.source,
            receiver: rx.position,
            side: rx.side,
            models,
            samples_per_element: self.samples_per_element,
            port_network: self.port_network.clone(),
            circuit_receiver: receiver,
        }
    }
}

fn complex(v: [f64; 2]) -> C {
    C::new(v[0], v[1])
}

fn position(v: [f64; 3]) -> Position3D<f64> {
    Position3D::new(v[0], v[1], v[2])
}

/// Parses and validates a scenario; file references resolve against the
/// working directory.
pub fn parse_scenario(text: &str) -> Result<Scenario, CliError> {
    parse_scenario_in(text, Path::new("."))
}

/// Parses and validates a scenario whose file references resolve against `base`.
pub fn parse_scenario_in(text: &str, base: &Path) -> Result<Scenario, CliError> {
    let scenario = from_json(text)?;
    scenario.build(base)?;
    Ok(scenario)
}

/// Schema check only.
pub fn from_json(text: &str) -> Result<Scenario, CliError> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        CliError::config(format!("at '{path}': {}", e.into_inner()))
    })
}

pub fn from_value(value: serde_json::Value) -> Result<Scenario, CliError> {
    serde_path_to_error::deserialize(value).map_err(|e| {
        let path = e.path().to_string();
        CliError::config(format!("at '{path}': {}", e.into_inner()))
    })
}

impl Scenario {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("scenario serializes")
    }

    /// SHA-256 of the compact serialization, hex.
    pub fn digest(&self) -> String {
        let text = serde_json::to_string(self).expect("scenario serializes");
        Sha256::digest(text.as_bytes()).iter().map(|b| format!("{b:02x}")).collect()
    }

    pub fn wavelength(&self) -> Result<Wavelength<f64>, CliError> {
        match (self.wavelength, self.frequency) {
            (Some(_), Some(_)) => Err(CliError::config("give either wavelength or frequency, not both")),
            (Some(l), None) => Ok(Wavelength::new(l)?),
            (None, Some(f)) => Ok(Wavelength::from_frequency(f)?),
            (None, None) => Ok(Wavelength::from_frequency(DEFAULT_FREQUENCY_HZ)?),
        }
    }

    pub fn geometry(&self) -> Result<SurfaceGeometry<f64>, CliError> {
        let half = self.wavelength()?.meters() / 2.0;
        let s = &self.surface;
        SurfaceGeometry::new(s.nx, s.ny, s.dx.unwrap_or(half), s.dy.unwrap_or(half), position(s.origin))
            .map_err(|e| CliError::from(e).context("surface"))
    }

    pub fn models(&self) -> Result<Vec<ModelKind>, CliError> {
        parse_models(&self.channel_models)
    }

    /// Resolves every block and checks all physical invariants.
    pub fn build(&self, base: &Path) -> Result<Model, CliError> {
        let w = self.wavelength()?;
        let geometry = self.geometry()?;
        let coeffs = self.coefficients(&geometry, w)?;
        let source = self.source(w)?;
        let receivers = self.receivers()?;
        let models = self.models()?;
        if let Some(n) = self.samples_per_element {
            if n == 0 {
                return Err(CliError::config("samples_per_element must be positive"));
            }
        }
        if let Some(s) = &self.sweep {
            s.values()?;
            if s.parameter.starts_with("sweep") {
                return Err(CliError::config("sweep.parameter cannot refer to the sweep block"));
            }
        }
        let port_network = if models.contains(&ModelKind::EquivalentCircuit) || self.circuit.is_some() {
            Some(self.port_network(&geometry, &receivers, &source, w, base)?)
        } else {
            None
        };
        Ok(Model {
            wavelength: w,
            geometry,
            coeffs,
            source,
            receivers,
            models,
            samples_per_element: self.samples_per_element,
            port_network,
        })
    }

    fn coefficients(&self, g: &SurfaceGeometry<f64>, w: Wavelength<f64>) -> Result<ElementCoefficients<f64>, CliError> {
        let n = g.element_count();
        let coeffs = match &self.hardware {
            HardwareSpec::PhaseShift(p) => {
                let mut phi_r = p.phi_r.expand(n, "hardware.phase_shift.phi_r")?;
                let mut phi_t = p.phi_t.expand(n, "hardware.phase_shift.phi_t")?;
                let ramp = |target: f64, reflect: bool| {
                    let (tr, tt, br, bt) = if reflect { (target, 0.0, 1.0, 0.0) } else { (0.0, target, 0.0, 1.0) };
                    linear_phase_gradient_profile(g, w, tr.to_radians(), tt.to_radians(), br, bt)
                        .map_err(|e| CliError::from(e).context("hardware.phase_shift"))
                };
                if let Some(a) = p.steer_reflect_deg {
                    phi_r.iter_mut().zip(&ramp(a, true)?.phi_r).for_each(|(x, d)| *x += d);
                }
                if let Some(a) = p.steer_transmit_deg {
                    phi_t.iter_mut().zip(&ramp(a, false)?.phi_t).for_each(|(x, d)| *x += d);
                }
                let profile = PhaseShiftProfile::new(
                    p.beta_r.expand(n, "hardware.phase_shift.beta_r")?,
                    p.beta_t.expand(n, "hardware.phase_shift.beta_t")?,
                    phi_r,
                    phi_t,
                )
                .map_err(|e| CliError::from(e).context("hardware.phase_shift"))?;
                coefficients_from_phase_shift(&profile)?
            }
            HardwareSpec::Impedance(p) => {
                let ye = p.ye.expand(n, "hardware.impedance.ye")?.into_iter().map(complex).collect();
                let zm = p.zm.expand(n, "hardware.impedance.zm")?.into_iter().map(complex).collect();
                let profile =
                    ImpedanceProfile::new(ye, zm).map_err(|e| CliError::from(e).context("hardware.impedance"))?;
                coefficients_from_impedance(&profile).map_err(|e| CliError::from(e).context("hardware.impedance"))?
            }
            HardwareSpec::Gstc(p) => {
                let ee: Vec<C> = p.chi_ee.expand(n, "hardware.gstc.chi_ee")?.into_iter().map(complex).collect();
                let mm: Vec<C> = p.chi_mm.expand(n, "hardware.gstc.chi_mm")?.into_iter().map(complex).collect();
                let samples = p.samples.unwrap_or(omnisurf::hardware::MIN_SAMPLES_PER_ELEMENT);
                let at = |v: &[C], q: Position3D<f64>| g.element_at(q.x, q.y).map_or(C::new(0.0, 0.0), |m| v[m]);
                let profile = SusceptibilityProfile::sample(g, samples, |q| at(&ee, q), |q| at(&mm, q))?;
                coefficients_from_gstc(&profile, g, w).map_err(|e| CliError::from(e).context("hardware.gstc"))?
            }
            HardwareSpec::CoefficientTable(p) => {
                let table = TableSpec { bits: p.bits, entries: p.entries.clone() }
                    .table()
                    .map_err(|e| e.context("hardware.coefficient_table"))?;
                let states = p.states.expand(n, "hardware.coefficient_table.states")?;
                table.coefficients_from_indices(&states).map_err(|e| CliError::from(e).context("hardware.coefficient_table"))?
            }
        };
        let mode = match &self.coupled_pin_table {
            Some(t) => ControlMode::CoupledPin(t.table().map_err(|e| e.context("coupled_pin_table"))?),
            None => ControlMode::Independent,
        };
        Ok(mode.apply(coeffs))
    }

    fn source(&self, w: Wavelength<f64>) -> Result<Source<f64>, CliError> {
        let s = match &self.source {
            SourceSpec::PlaneWave(p) => {
                PlaneWaveSource::from_angles(complex(p.amplitude), p.theta_deg.to_radians(), p.phi_deg.to_radians(), w)
                    .map(Source::from)
            }
            SourceSpec::Point(p) => PointSource::new(position(p.position), complex(p.amplitude), w).map(Source::from),
        };
        s.map_err(|e| CliError::from(e).context("source"))
    }

    fn receivers(&self) -> Result<Vec<Receiver>, CliError> {
        let mut out: Vec<Receiver> = Vec::with_capacity(self.receivers.len());
        for (i, r) in self.receivers.iter().enumerate() {
            let id = r.id.clone().unwrap_or_else(|| format!("rx{i}"));
            let p = position(r.position);
            if !p.is_finite() {
                return Err(CliError::config(format!("receiver '{id}': position must be finite")));
            }
            let side = match (Side::of(&p), r.side) {
                (None, _) => return Err(CliError::physics(format!("receiver '{id}' lies on the surface plane"))),
                (Some(s), None) => s,
                (Some(s), Some(tag)) if Side::from(tag) == s => s,
                (Some(s), Some(tag)) => {
                    return Err(CliError::physics(format!(
                        "receiver '{id}' is tagged {} but z = {} is on the {} side",
                        Side::from(tag).name(),
                        p.z,
                        s.name()
                    )))
                }
            };
            if out.iter().any(|o| o.id == id) {
                return Err(CliError::config(format!("duplicate receiver id '{id}'")));
            }
            out.push(Receiver { id, position: p, side });
        }
        Ok(out)
    }

    fn port_network(
        &self,
        g: &SurfaceGeometry<f64>,
        receivers: &[Receiver],
        source: &Source<f64>,
        w: Wavelength<f64>,
        base: &Path,
    ) -> Result<PortNetwork<f64>, CliError> {
        let spec = self.circuit.clone().unwrap_or_default();
        let ell = spec.dipole_length.unwrap_or(w.meters() / 8.0);
        let rx: Vec<Position3D<f64>> = receivers.iter().map(|r| r.position).collect();
        let built = build_port_network(g, &rx, w, spec.self_impedance.map(complex), Some(ell))
            .map_err(|e| CliError::from(e).context("circuit"))?;
        let mut net = match &spec.matrix_file {
            None => built,
            Some(f) => {
                let z = read_matrix(&resolve(base, f))?;
                PortNetwork::new(
                    z,
                    built.source_voltages().to_vec(),
                    built.element_loads().to_vec(),
                    built.receiver_loads().to_vec(),
                )
                .map_err(|e| CliError::from(e).context(format!("circuit.matrix_file '{f}'")))?
            }
        };
        // open-circuit EMF of a short dipole in the incident field
        let mut v: Vec<C> = incident_on_elements(source, g).into_iter().map(|e| e * ell).collect();
        v.resize(g.element_count() + receivers.len(), C::new(0.0, 0.0));
        net = net.with_source_voltages(v)?;
        if let Some(l) = &spec.element_loads {
            let l = l.expand(g.element_count(), "circuit.element_loads")?.into_iter().map(complex).collect();
            net = net.with_element_loads(l).map_err(|e| CliError::from(e).context("circuit.element_loads"))?;
        }
        if let Some(l) = &spec.receiver_loads {
            let l = l.expand(receivers.len(), "circuit.receiver_loads")?.into_iter().map(complex).collect();
            net = net.with_receiver_loads(l).map_err(|e| CliError::from(e).context("circuit.receiver_loads"))?;
        }
        Ok(net)
    }
}

pub fn parse_models(names: &[String]) -> Result<Vec<ModelKind>, CliError> {
    if names.is_empty() {
        return Err(CliError::config("no channel models selected"));
    }
    let mut out: Vec<ModelKind> = Vec::with_capacity(names.len());
    for n in names {
        let m: ModelKind = n.trim().parse()?;
        if !out.contains(&m) {
            out.push(m);
        }
    }
    Ok(out)
}

fn resolve(base: &Path, file: &str) -> PathBuf {
    let p = Path::new(file);
    if p.is_absolute() {
        p.to_path_buf()
    } else {
        base.join(p)
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct MatrixFile {
    re: Vec<Vec<f64>>,
    im: Vec<Vec<f64>>,
}

/// Reads a square complex matrix stored as separate real and imaginary parts.
pub fn read_matrix(path: &Path) -> Result<Array2<C>, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::config(format!("{}: {e}", path.display())))?;
    let m: MatrixFile = serde_json::from_str(&text).map_err(|e| CliError::config(format!("{}: {e}", path.display())))?;
    let n = m.re.len();
    let square = |rows: &Vec<Vec<f64>>| rows.len() == n && rows.iter().all(|r| r.len() == n);
    if n == 0 || !square(&m.re) || !square(&m.im) {
        return Err(CliError::config(format!("{}: re and im must be equal-size square matrices", path.display())));
    }
    Ok(Array2::from_shape_fn((n, n), |(i, j)| C::new(m.re[i][j], m.im[i][j])))
}

