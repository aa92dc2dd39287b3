use crate::error::{OpfError, Result};

/// A finite, non-empty sequence of observations of a single indicator.
///
/// Positions are 1-based in every public accessor: `value(1)` is the first
/// observation and `value(len())` the last.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeSeries {
    values: Vec<f64>,
    id: Option<String>,
}

impl TimeSeries {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(OpfError::input(
                "time series must contain at least one value",
            ));
        }
        if let Some(pos) = values.iter().position(|v| !v.is_finite()) {
            return Err(OpfError::input(format!(
                "non-finite value {} at position {}",
                values[pos],
                pos + 1
            )));
        }
        Ok(TimeSeries { values, id: None })
    }

    pub fn with_id(mut self, id: impl Into<String>) -> Self {
        self.id = Some(id.into());
        self
    }

    pub fn id(&self) -> Option<&str> {
        self.id.as_deref()
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Observation at 1-based position `pos`.
    #[inline]
    pub fn value(&self, pos: usize) -> f64 {
        self.values[pos - 1]
    }

    /// Window of length `m` ending at 1-based position `end`.
    pub fn window(&self, end: usize, m: usize) -> &[f64] {
        &self.values[end - m..end]
    }

    /// Concatenates the series with itself `times` times.
    pub fn replicate(&self, times: usize) -> Result<TimeSeries> {
        if times == 0 {
            return Err(OpfError::config("replication factor must be at least 1"));
        }
        let mut values = Vec::with_capacity(self.values.len() * times);
        for _ in 0..times {
            values.extend_from_slice(&self.values);
        }
        Ok(TimeSeries {
            values,
            id: self.id.clone(),
        })
    }
}
