/// A scalar objective to be minimized.
///
/// Implementations must be pure: the same input always yields the same value
/// and no shared state is mutated, so independent runs may evaluate in
/// parallel.
pub trait Objective: Sync {
    fn evaluate(&self, x: &[f64]) -> f64;
}

impl<F> Objective for F
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    fn evaluate(&self, x: &[f64]) -> f64 {
        self(x)
    }
}
