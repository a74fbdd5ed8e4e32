use crate::protocols::{Protocol, RoutingParams, DEFAULT_TTL_HOPS};

use super::SimError;

/// Full description of one simulation run.
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioConfig {
    pub area_width: f64,
    pub area_height: f64,
    pub node_count: usize,
    /// Nominal speed (m/s); each leg draws from `[0.5, 1.5] * speed`.
    pub speed: f64,
    pub radio_range: f64,
    /// Step length and HELLO period (s).
    pub delta_t: f64,
    pub duration: f64,
    pub seed: u64,
    pub protocol: Protocol,
    /// Seconds between packets emitted by the source.
    pub traffic_period: f64,
    /// Share of mobile nodes that follow a fixed loop.
    pub regular_fraction: f64,
    /// Number of static hotspot nodes.
    pub fixed_count: usize,
    pub ttl_hops: u32,
    pub routing: RoutingParams,
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        Self {
            area_width: 500.0,
            area_height: 500.0,
            node_count: 30,
            speed: 10.0,
            radio_range: 100.0,
            delta_t: 1.0,
            duration: 600.0,
            seed: 1,
            protocol: Protocol::Orion,
            traffic_period: 5.0,
            regular_fraction: 0.5,
            fixed_count: 0,
            ttl_hops: DEFAULT_TTL_HOPS,
            routing: RoutingParams::default(),
        }
    }
}

fn steps_of(span: f64, delta_t: f64) -> Option<u64> {
    let k = (span / delta_t).round();
    ((k * delta_t - span).abs() <= 1e-9 * span.abs().max(1.0) && k >= 1.0).then_some(k as u64)
}

impl ScenarioConfig {
    pub fn validate(&self) -> Result<(), SimError> {
        let bad = |msg: String| Err(SimError::InvalidConfig(msg));
        let positive = [
            ("area_width", self.area_width),
            ("area_height", self.area_height),
            ("speed", self.speed),
            ("delta_t", self.delta_t),
            ("duration", self.duration),
            ("traffic_period", self.traffic_period),
        ];
        for (name, v) in positive {
            if !(v.is_finite() && v > 0.0) {
                return bad(format!("{name} must be positive, got {v}"));
            }
        }
        if !(self.radio_range.is_finite() && self.radio_range >= 0.0) {
            return bad(format!("radio_range must be non-negative, got {}", self.radio_range));
        }
        if self.node_count < 2 {
            return bad(format!("node_count must be at least 2, got {}", self.node_count));
        }
        if self.fixed_count > self.node_count {
            return bad("fixed_count exceeds node_count".into());
        }
        if !(0.0..=1.0).contains(&self.regular_fraction) {
            return bad(format!("regular_fraction must lie in [0, 1], got {}", self.regular_fraction));
        }
        if steps_of(self.duration, self.delta_t).is_none() {
            return bad("delta_t must divide duration".into());
        }
        if steps_of(self.traffic_period, self.delta_t).is_none() {
            return bad("traffic_period must be a multiple of delta_t".into());
        }
        if self.ttl_hops == 0 {
            return bad("ttl_hops must be positive".into());
        }
        let o = &self.routing.orion;
        if !(0.0..=1.0).contains(&o.weight_speed) || !(o.confidence_k > 0.0) {
            return bad("orion.weight_speed must lie in [0, 1] and orion.confidence_k be positive".into());
        }
        let p = &self.routing.prophet;
        let unit = |v: f64| v > 0.0 && v < 1.0;
        if !unit(p.l_encounter) || !unit(p.gamma) || !unit(p.beta) || !(p.time_unit > 0.0) {
            return bad("prophet parameters must lie in (0, 1) with a positive time unit".into());
        }
        Ok(())
    }

    pub fn total_steps(&self) -> u64 {
        steps_of(self.duration, self.delta_t).unwrap_or(0)
    }

    pub fn traffic_period_steps(&self) -> u64 {
        steps_of(self.traffic_period, self.delta_t).unwrap_or(1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_are_valid() {
        let c = ScenarioConfig::default();
        c.validate().unwrap();
        assert_eq!(c.total_steps(), 600);
        assert_eq!(c.traffic_period_steps(), 5);
    }

    #[test]
    fn rejects_bad_values() {
        let cases: Vec<Box<dyn Fn(&mut ScenarioConfig)>> = vec![
            Box::new(|c| c.node_count = 1),
            Box::new(|c| c.delta_t = 0.7),
            Box::new(|c| c.area_width = 0.0),
            Box::new(|c| c.radio_range = -1.0),
            Box::new(|c| c.regular_fraction = 1.5),
            Box::new(|c| c.traffic_period = 2.5),
            Box::new(|c| c.routing.prophet.gamma = 1.0),
        ];
        for mutate in cases {
            let mut c = ScenarioConfig::default();
            mutate(&mut c);
            assert!(c.validate().is_err(), "{c:?}");
        }
    }
}
