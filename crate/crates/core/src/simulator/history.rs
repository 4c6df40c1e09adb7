//! Ring buffer of past prey fields for the delayed terms.

/// Holds the prey field at the most recent `capacity` step indices.
/// Indices before 0 resolve to the initial field, which is constant on
/// the history interval `[−τ, 0]`.
#[derive(Debug, Clone)]
pub struct HistoryBuffer {
    initial: Vec<f64>,
    slots: Vec<Vec<f64>>,
    steps: Vec<i64>,
}

impl HistoryBuffer {
    pub fn new(initial: Vec<f64>, capacity: usize) -> Self {
        let capacity = capacity.max(1);
        HistoryBuffer {
            slots: vec![initial.clone(); capacity],
            steps: vec![i64::MIN; capacity],
            initial,
        }
    }

    pub fn capacity(&self) -> usize {
        self.slots.len()
    }

    /// Bytes held by the snapshots.
    pub fn memory_bytes(&self) -> usize {
        self.slots.len() * self.initial.len() * std::mem::size_of::<f64>()
    }

    pub fn push(&mut self, step: i64, field: &[f64]) {
        let slot = step.rem_euclid(self.slots.len() as i64) as usize;
        self.slots[slot].copy_from_slice(field);
        self.steps[slot] = step;
    }

    /// Field at the given step index. Panics if the step has already been
    /// evicted or was never stored, since that would be an extrapolation.
    pub fn get(&self, step: i64) -> &[f64] {
        if step < 0 {
            return &self.initial;
        }
        let slot = step.rem_euclid(self.slots.len() as i64) as usize;
        assert_eq!(
            self.steps[slot], step,
            "history lookup at step {step} is outside the stored window"
        );
        &self.slots[slot]
    }
}
