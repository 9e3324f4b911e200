use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ModelError {
    /// A parameter or argument is outside the model's admissible domain; the
    /// payload names the violated inequality.
    #[error("domain error: {0} does not hold")]
    Domain(&'static str),

    #[error("{what}: root finder residual {residual:e} after {iterations} iterations")]
    Convergence {
        what: &'static str,
        residual: f64,
        iterations: usize,
    },

    #[error("fixed point did not converge after {iterations} iterations (last step {last_step:e})")]
    NonConvergence { iterations: usize, last_step: f64 },
}
