//! Field regions, radiation patterns, beam-steering checks and cross-model
//! comparison.

mod consistency;
mod pattern;
mod regions;
mod steering;

pub use consistency::{evaluate_model, model_consistency, ConsistencyReport, ConsistencyScenario, ModelKind, ModelOutcome, ModelValue};
pub use pattern::{radiation_pattern, HemispherePattern, PatternMethod, RadiationPattern, PATTERN_RADIUS_FACTOR};
pub use regions::{
    classify_field_region, fraunhofer_distance, reactive_near_field_boundary, FieldRegion, RegionBoundaries,
    RegionKind, FRAUNHOFER_COEFFICIENT, REACTIVE_COEFFICIENT,
};
pub use steering::{predicted_steering_angle, verify_steering, SteeringReport};
