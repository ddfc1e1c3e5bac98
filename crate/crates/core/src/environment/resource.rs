//! Consumable resource pools with constant inflow and proportional outflow.

#[derive(Debug, Clone, PartialEq)]
pub struct ResourcePool {
    pub concentration: f64,
    /// Units added per update.
    pub inflow: f64,
    /// Fraction of the concentration removed per update.
    pub outflow_fraction: f64,
    /// Largest fraction of the concentration a single event may take.
    pub max_consume_fraction: f64,
}

impl Default for ResourcePool {
    fn default() -> Self {
        ResourcePool {
            concentration: 0.0,
            inflow: 100.0,
            outflow_fraction: 0.01,
            max_consume_fraction: 0.0025,
        }
    }
}

impl ResourcePool {
    /// A pool already sitting at its unconsumed equilibrium.
    pub fn at_equilibrium() -> Self {
        let mut pool = ResourcePool::default();
        pool.concentration = pool.equilibrium();
        pool
    }

    pub fn equilibrium(&self) -> f64 {
        self.inflow / self.outflow_fraction
    }

    /// One update of inflow and outflow.
    pub fn step(&mut self) {
        let c = self.concentration;
        self.concentration = (c + self.inflow - self.outflow_fraction * c).max(0.0);
    }

    /// Takes up to `requested` units, capped at the per-event fraction.
    pub fn consume(&mut self, requested: f64) -> f64 {
        let granted = requested.max(0.0).min(self.max_consume_fraction * self.concentration);
        self.concentration -= granted;
        granted
    }
}
