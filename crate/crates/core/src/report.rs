/// Result of scanning one input for end-of-match positions.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct MatchReport {
    /// Ascending end positions, in code points.
    pub positions: Vec<usize>,
    /// Number of input characters examined.
    pub chars_read: usize,
    /// Loop iterations; equal to `chars_read` for both matchers.
    pub iterations: usize,
    /// Every index read, in read order. Only filled by the tracking scans.
    pub read_indices: Option<Vec<usize>>,
}

impl MatchReport {
    /// Fraction of the input that was never examined.
    pub fn skip_fraction(&self, input_len: usize) -> f64 {
        if input_len == 0 {
            0.0
        } else {
            1.0 - self.chars_read as f64 / input_len as f64
        }
    }
}
