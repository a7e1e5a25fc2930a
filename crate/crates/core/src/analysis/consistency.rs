use ndarray::Array2;
use rayon::prelude::*;

use super::regions::{classify_field_region, FieldRegion, RegionKind};
use crate::channel::{
    angular_spectrum_gain, equivalent_circuit_power, fresnel_kirchhoff_gain, illuminated_aperture,
    quarter_wave_samples, ray_tracing_gain, rayleigh_sommerfeld_gain, ChannelGain, PortNetwork, RsBoundary, Side,
};
use crate::geometry::{Position3D, SurfaceGeometry};
use crate::hardware::ElementCoefficients;
use crate::scalar::wrap_signed;
use crate::source::Source;
use crate::{Error, Result, Scalar};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ModelKind {
    RayTracing,
    FresnelKirchhoff,
    RayleighSommerfeld,
    RayleighSommerfeldNeumann,
    AngularSpectrum,
    EquivalentCircuit,
}

impl ModelKind {
    pub const ALL: [ModelKind; 6] = [
        ModelKind::RayTracing,
        ModelKind::FresnelKirchhoff,
        ModelKind::RayleighSommerfeld,
        ModelKind::RayleighSommerfeldNeumann,
        ModelKind::AngularSpectrum,
        ModelKind::EquivalentCircuit,
    ];

    /// Models compared by default: the four far-field wave models.
    pub const WAVE: [ModelKind; 4] = [
        ModelKind::RayTracing,
        ModelKind::FresnelKirchhoff,
        ModelKind::RayleighSommerfeld,
        ModelKind::AngularSpectrum,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ModelKind::RayTracing => "ray_tracing",
            ModelKind::FresnelKirchhoff => "fresnel_kirchhoff",
            ModelKind::RayleighSommerfeld => "rayleigh_sommerfeld",
            ModelKind::RayleighSommerfeldNeumann => "rayleigh_sommerfeld_neumann",
            ModelKind::AngularSpectrum => "angular_spectrum",
            ModelKind::EquivalentCircuit => "equivalent_circuit",
        }
    }
}

impl std::str::FromStr for ModelKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        ModelKind::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| Error::UnknownMethod(s.to_string()))
    }
}

/// Everything the channel models need for one source/receiver pair.
#[derive(Debug, Clone)]
pub struct ConsistencyScenario<T> {
    pub geometry: SurfaceGeometry<T>,
    pub coeffs: ElementCoefficients<T>,
    pub source: Source<T>,
    pub receiver: Position3D<T>,
    pub side: Side,
    pub models: Vec<ModelKind>,
    /// Aperture samples per element; `None` picks a `λ/4` pitch.
    pub samples_per_element: Option<usize>,
    /// Required for [`ModelKind::EquivalentCircuit`].
    pub port_network: Option<PortNetwork<T>>,
    /// Receiver port (0-based among receivers) reported by the circuit model.
    pub circuit_receiver: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub enum ModelValue<T> {
    Gain(ChannelGain<T>),
    /// Circuit model: power in the receiver load and power from the sources, W.
    Power { received: T, source: T },
}

#[derive(Debug, Clone, PartialEq)]
pub struct ModelOutcome<T> {
    pub model: ModelKind,
    /// Failure message when the model could not be evaluated.
    pub value: std::result::Result<ModelValue<T>, String>,
    /// False when the scenario lies outside the model's range of validity.
    pub valid: bool,
    pub note: Option<String>,
}

impl<T: Scalar> ModelOutcome<T> {
    pub fn gain(&self) -> Option<&ChannelGain<T>> {
        match &self.value {
            Ok(ModelValue::Gain(g)) => Some(g),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConsistencyReport<T> {
    pub region: FieldRegion<T>,
    pub distance: T,
    pub outcomes: Vec<ModelOutcome<T>>,
    /// `|dB_i - dB_j|`; NaN where either model has no channel gain.
    pub deviation_db: Array2<T>,
    /// Wrapped phase difference magnitude, rad; NaN as above.
    pub deviation_rad: Array2<T>,
    /// Caller-supplied identifier of the scenario.
    pub digest: String,
}

impl<T: Scalar> ConsistencyReport<T> {
    pub fn with_digest(mut self, digest: impl Into<String>) -> Self {
        self.digest = digest.into();
        self
    }

    /// Largest pairwise deviation `(dB, rad)` among the models that produced
    /// a channel gain.
    pub fn max_deviation(&self) -> (T, T) {
        let fold = |a: &Array2<T>| a.iter().filter(|v| !v.is_nan()).fold(T::zero(), |m, &v| m.max(v));
        (fold(&self.deviation_db), fold(&self.deviation_rad))
    }
}

/// Evaluates one model on the scenario.
pub fn evaluate_model<T: Scalar>(s: &ConsistencyScenario<T>, model: ModelKind) -> Result<ModelValue<T>> {
    let w = s.source.wavelength();
    let aperture = || {
        let n = s.samples_per_element.unwrap_or_else(|| quarter_wave_samples(&s.geometry, w));
        illuminated_aperture(&s.source, &s.geometry, &s.coeffs, s.side, n)
    };
    let gain = match model {
        ModelKind::RayTracing => ray_tracing_gain(&s.source, &s.receiver, &s.geometry, &s.coeffs, s.side)?,
        ModelKind::FresnelKirchhoff => fresnel_kirchhoff_gain(&s.source, &s.receiver, &aperture()?)?,
        ModelKind::RayleighSommerfeld => {
            rayleigh_sommerfeld_gain(&s.source, &s.receiver, &aperture()?, RsBoundary::Dirichlet)?
        }
        ModelKind::RayleighSommerfeldNeumann => {
            rayleigh_sommerfeld_gain(&s.source, &s.receiver, &aperture()?, RsBoundary::Neumann)?
        }
        ModelKind::AngularSpectrum => angular_spectrum_gain(&s.source, &s.receiver, &aperture()?)?,
        ModelKind::EquivalentCircuit => {
            let net = s
                .port_network
                .as_ref()
                .ok_or_else(|| Error::InvalidArgument("equivalent circuit needs a port network".into()))?;
            let sol = equivalent_circuit_power(net)?;
            let received = *sol.received_power.get(s.circuit_receiver).ok_or_else(|| {
                Error::InvalidArgument(format!(
                    "receiver port {} out of range ({} receivers)",
                    s.circuit_receiver,
                    sol.received_power.len()
                ))
            })?;
            return Ok(ModelValue::Power { received, source: sol.source_power });
        }
    };
    Ok(ModelValue::Gain(gain))
}

/// Runs every requested model on the same scenario and tabulates pairwise
/// deviations. Model failures are recorded per model; the equivalent
/// circuit is skipped when no port network is given.
pub fn model_consistency<T: Scalar>(scenario: &ConsistencyScenario<T>) -> Result<ConsistencyReport<T>> {
    let w = scenario.source.wavelength();
    let distance = scenario.receiver.distance(&scenario.geometry.origin);
    let region = classify_field_region(distance, &scenario.geometry, w)?;
    let models: Vec<ModelKind> = scenario
        .models
        .iter()
        .copied()
        .filter(|m| *m != ModelKind::EquivalentCircuit || scenario.port_network.is_some())
        .collect();
    let outcomes: Vec<ModelOutcome<T>> = models
        .par_iter()
        .map(|&model| {
            let value = evaluate_model(scenario, model).map_err(|e| e.to_string());
            let (valid, note) = match model {
                ModelKind::RayTracing if region.kind != RegionKind::FarField => {
                    (false, Some(format!("ray tracing assumes the far field; receiver is in the {}", region.kind.name())))
                }
                _ => (true, None),
            };
            ModelOutcome { model, value, valid, note }
        })
        .collect();

    let n = outcomes.len();
    let mut db = Array2::from_elem((n, n), T::nan());
    let mut rad = Array2::from_elem((n, n), T::nan());
    for i in 0..n {
        db[[i, i]] = T::zero();
        rad[[i, i]] = T::zero();
        for j in 0..i {
            if let (Some(a), Some(b)) = (outcomes[i].gain(), outcomes[j].gain()) {
                let d = (a.power_gain_db - b.power_gain_db).abs();
                let p = wrap_signed(a.phase() - b.phase()).abs();
                db[[i, j]] = d;
                db[[j, i]] = d;
                rad[[i, j]] = p;
                rad[[j, i]] = p;
            }
        }
    }
    Ok(ConsistencyReport { region, distance, outcomes, deviation_db: db, deviation_rad: rad, digest: String::new() })
}
