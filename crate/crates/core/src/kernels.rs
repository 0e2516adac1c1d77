//! Kernel functions, Gram matrices, centering, and the empirical
//! Hilbert-Schmidt independence criterion.

use crate::error::{Error, Result};
use crate::sample::{Sample, SequenceSample};
use ndarray::Array2;
use rayon::prelude::*;
use std::fmt;

/// Kernel kinds usable on scores, explanation-mode outputs, and raw samples.
#[derive(Debug, Clone, PartialEq)]
pub enum KernelSpec {
    /// Gaussian kernel `exp(−‖x−y‖² / (2σ²))`.
    Rbf { sigma: f64 },
    /// Plain dot product.
    Linear,
    /// 1 if the operands are equal, 0 otherwise.
    Delta,
    /// Weighted-degree string kernel: weighted count of matching positional
    /// substrings up to length `degree`.
    WeightedDegree { degree: usize },
}

impl KernelSpec {
    pub fn rbf(sigma: f64) -> Result<Self> {
        if !(sigma.is_finite() && sigma > 0.0) {
            return Err(Error::InvalidParam {
                name: "sigma",
                reason: format!("bandwidth must be positive, got {sigma}"),
            });
        }
        Ok(KernelSpec::Rbf { sigma })
    }

    pub fn weighted_degree(degree: usize) -> Result<Self> {
        if degree == 0 {
            return Err(Error::InvalidParam {
                name: "degree",
                reason: "weighted-degree kernel needs degree >= 1".into(),
            });
        }
        Ok(KernelSpec::WeightedDegree { degree })
    }

    pub(crate) fn validate(&self) -> Result<()> {
        match self {
            KernelSpec::Rbf { sigma } if !(sigma.is_finite() && *sigma > 0.0) => {
                Err(Error::InvalidParam {
                    name: "sigma",
                    reason: format!("bandwidth must be positive, got {sigma}"),
                })
            }
            KernelSpec::WeightedDegree { degree } if *degree == 0 => Err(Error::InvalidParam {
                name: "degree",
                reason: "weighted-degree kernel needs degree >= 1".into(),
            }),
            _ => Ok(()),
        }
    }

    fn incompatible(&self, operand: &str) -> Error {
        Error::IncompatibleKernel {
            kernel: self.to_string(),
            operand: operand.to_string(),
        }
    }
}

impl fmt::Display for KernelSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            KernelSpec::Rbf { sigma } => write!(f, "rbf(sigma={sigma})"),
            KernelSpec::Linear => f.write_str("linear"),
            KernelSpec::Delta => f.write_str("delta"),
            KernelSpec::WeightedDegree { degree } => write!(f, "wd(degree={degree})"),
        }
    }
}

/// `exp(−‖x−y‖² / (2σ²))`; 1 iff `x = y`.
pub fn rbf_eval(x: &[f64], y: &[f64], sigma: f64) -> Result<f64> {
    if x.len() != y.len() {
        return Err(Error::DimensionMismatch {
            left: x.len(),
            right: y.len(),
        });
    }
    if !(sigma.is_finite() && sigma > 0.0) {
        return Err(Error::InvalidParam {
            name: "sigma",
            reason: format!("bandwidth must be positive, got {sigma}"),
        });
    }
    let sq_dist: f64 = x
        .iter()
        .zip(y)
        .map(|(a, b)| (a - b) * (a - b))
        .sum();
    Ok((-sq_dist / (2.0 * sigma * sigma)).exp())
}

/// Dot product of equal-length vectors.
pub fn linear_eval(x: &[f64], y: &[f64]) -> Result<f64> {
    if x.len() != y.len() {
        return Err(Error::DimensionMismatch {
            left: x.len(),
            right: y.len(),
        });
    }
    Ok(x.iter().zip(y).map(|(a, b)| a * b).sum())
}

/// 1 if the operands compare equal, 0 otherwise.
pub fn delta_eval<T: PartialEq + ?Sized>(a: &T, b: &T) -> f64 {
    if a == b {
        1.0
    } else {
        0.0
    }
}

/// Substring weights of the weighted-degree kernel,
/// `β_d = 2(D−d+1) / (D(D+1))` for d = 1..=D.
pub fn wd_weights(degree: usize) -> Vec<f64> {
    let d = degree as f64;
    (1..=degree)
        .map(|sub| 2.0 * (d - sub as f64 + 1.0) / (d * (d + 1.0)))
        .collect()
}

/// Total weight contributed by a maximal run of `run` matching characters:
/// `Σ_{d=1..min(run,D)} β_d · (run − d + 1)`, tabulated for run = 0..=max_run.
fn wd_run_weights(degree: usize, max_run: usize) -> Vec<f64> {
    let beta = wd_weights(degree);
    let mut table = vec![0.0; max_run + 1];
    for run in 1..=max_run {
        let mut total = 0.0;
        for (d, b) in beta.iter().enumerate().take(run.min(degree)) {
            total += b * (run - d) as f64; // run − (d+1) + 1
        }
        table[run] = total;
    }
    table
}

/// Weighted-degree kernel between two equal-length sequences:
/// `Σ_{d=1..D} β_d · #{i : x_{i:i+d} = y_{i:i+d}}`.
///
/// Computed from the maximal runs of the per-position match mask, which gives
/// the same totals as enumerating every substring.
pub fn wd_eval(x: &SequenceSample, y: &SequenceSample, degree: usize) -> Result<f64> {
    if x.len() != y.len() {
        return Err(Error::LengthMismatch {
            left: x.len(),
            right: y.len(),
        });
    }
    let len = x.len();
    if degree == 0 || degree > len {
        return Err(Error::InvalidParam {
            name: "degree",
            reason: format!("degree must be in 1..={len}, got {degree}"),
        });
    }
    let table = wd_run_weights(degree, len);
    Ok(wd_eval_with_table(x.indices(), y.indices(), &table))
}

fn wd_eval_with_table(x: &[u8], y: &[u8], run_table: &[f64]) -> f64 {
    let mut total = 0.0;
    let mut run = 0usize;
    for (a, b) in x.iter().zip(y) {
        if a == b {
            run += 1;
        } else {
            total += run_table[run];
            run = 0;
        }
    }
    total + run_table[run]
}

/// Operand collections a Gram matrix can be built over.
pub enum KernelOperands<'a> {
    /// Real scalars, e.g. predictor scores or single feature values.
    Scalars(&'a [f64]),
    /// Real vectors, e.g. flattened images or explanation-mode outputs.
    Vectors(&'a [Vec<f64>]),
    /// Discrete sequences (weighted-degree or delta kernels).
    Sequences(&'a [SequenceSample]),
}

impl KernelOperands<'_> {
    pub fn len(&self) -> usize {
        match self {
            KernelOperands::Scalars(s) => s.len(),
            KernelOperands::Vectors(v) => v.len(),
            KernelOperands::Sequences(s) => s.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn kind(&self) -> &'static str {
        match self {
            KernelOperands::Scalars(_) => "scalar",
            KernelOperands::Vectors(_) => "vector",
            KernelOperands::Sequences(_) => "sequence",
        }
    }
}

/// A symmetric kernel matrix `entries[i][j] = k(samples[i], samples[j])`.
#[derive(Debug, Clone)]
pub struct GramMatrix {
    entries: Array2<f64>,
    kernel: KernelSpec,
    centered: bool,
}

impl GramMatrix {
    pub fn n(&self) -> usize {
        self.entries.nrows()
    }

    pub fn entries(&self) -> &Array2<f64> {
        &self.entries
    }

    pub fn kernel(&self) -> &KernelSpec {
        &self.kernel
    }

    pub fn is_centered(&self) -> bool {
        self.centered
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[(i, j)]
    }

    /// Largest asymmetry `|G_ij − G_ji|`.
    pub fn asymmetry(&self) -> f64 {
        let n = self.n();
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in i + 1..n {
                worst = worst.max((self.entries[(i, j)] - self.entries[(j, i)]).abs());
            }
        }
        worst
    }
}

/// Builds the Gram matrix of a kernel over homogeneous operands.
///
/// Entries are computed independently per pair (parallel over rows) and each
/// written exactly once, so the result does not depend on worker count.
pub fn gram(operands: &KernelOperands<'_>, kernel: &KernelSpec) -> Result<GramMatrix> {
    kernel.validate()?;
    let n = operands.len();
    if n == 0 {
        return Err(Error::EmptySampleSet);
    }

    let eval: Box<dyn Fn(usize, usize) -> Result<f64> + Sync> = match (operands, kernel) {
        (KernelOperands::Scalars(xs), KernelSpec::Rbf { sigma }) => {
            let (xs, sigma) = (*xs, *sigma);
            Box::new(move |i, j| rbf_eval(&[xs[i]], &[xs[j]], sigma))
        }
        (KernelOperands::Scalars(xs), KernelSpec::Linear) => {
            let xs = *xs;
            Box::new(move |i, j| Ok(xs[i] * xs[j]))
        }
        (KernelOperands::Scalars(xs), KernelSpec::Delta) => {
            let xs = *xs;
            Box::new(move |i, j| Ok(delta_eval(&xs[i], &xs[j])))
        }
        (KernelOperands::Vectors(xs), KernelSpec::Rbf { sigma }) => {
            let (xs, sigma) = (*xs, *sigma);
            Box::new(move |i, j| rbf_eval(&xs[i], &xs[j], sigma))
        }
        (KernelOperands::Vectors(xs), KernelSpec::Linear) => {
            let xs = *xs;
            Box::new(move |i, j| linear_eval(&xs[i], &xs[j]))
        }
        (KernelOperands::Vectors(xs), KernelSpec::Delta) => {
            let xs = *xs;
            Box::new(move |i, j| Ok(delta_eval(xs[i].as_slice(), xs[j].as_slice())))
        }
        (KernelOperands::Sequences(xs), KernelSpec::WeightedDegree { degree }) => {
            let (xs, degree) = (*xs, *degree);
            let len = xs[0].len();
            if degree > len {
                return Err(Error::InvalidParam {
                    name: "degree",
                    reason: format!("degree must be in 1..={len}, got {degree}"),
                });
            }
            let table = wd_run_weights(degree, len);
            Box::new(move |i, j| {
                if xs[i].len() != xs[j].len() {
                    return Err(Error::LengthMismatch {
                        left: xs[i].len(),
                        right: xs[j].len(),
                    });
                }
                Ok(wd_eval_with_table(xs[i].indices(), xs[j].indices(), &table))
            })
        }
        (KernelOperands::Sequences(xs), KernelSpec::Delta) => {
            let xs = *xs;
            Box::new(move |i, j| Ok(delta_eval(xs[i].indices(), xs[j].indices())))
        }
        (ops, kernel) => return Err(kernel.incompatible(ops.kind())),
    };

    let rows: Vec<Result<Vec<f64>>> = (0..n)
        .into_par_iter()
        .map(|i| (i..n).map(|j| eval(i, j)).collect())
        .collect();

    let mut entries = Array2::<f64>::zeros((n, n));
    for (i, row) in rows.into_iter().enumerate() {
        for (off, v) in row?.into_iter().enumerate() {
            let j = i + off;
            entries[(i, j)] = v;
            entries[(j, i)] = v;
        }
    }

    Ok(GramMatrix {
        entries,
        kernel: kernel.clone(),
        centered: false,
    })
}

/// Kernel evaluation between two raw samples, used by kernel machines.
pub fn kernel_eval_samples(kernel: &KernelSpec, a: &Sample, b: &Sample) -> Result<f64> {
    kernel.validate()?;
    match (kernel, a, b) {
        (KernelSpec::Rbf { sigma }, Sample::Image(x), Sample::Image(y)) => {
            rbf_eval(x.flat(), y.flat(), *sigma)
        }
        (KernelSpec::Linear, Sample::Image(x), Sample::Image(y)) => {
            linear_eval(x.flat(), y.flat())
        }
        (KernelSpec::WeightedDegree { degree }, Sample::Sequence(x), Sample::Sequence(y)) => {
            wd_eval(x, y, *degree)
        }
        (KernelSpec::Delta, Sample::Sequence(x), Sample::Sequence(y)) => {
            Ok(delta_eval(x.indices(), y.indices()))
        }
        (KernelSpec::Delta, Sample::Image(x), Sample::Image(y)) => {
            Ok(delta_eval(x.flat(), y.flat()))
        }
        (kernel, a, _) => Err(kernel.incompatible(&a.shape().to_string())),
    }
}

/// Doubly centers a Gram matrix: `H G H` with `H = I − (1/n)·11ᵀ`.
///
/// Row and column sums of the result vanish; centering twice is a no-op.
pub fn center_gram(g: &GramMatrix) -> GramMatrix {
    let n = g.n();
    let entries = g.entries();
    let nf = n as f64;
    let row_means: Vec<f64> = (0..n)
        .map(|i| entries.row(i).sum() / nf)
        .collect();
    let grand_mean = row_means.iter().sum::<f64>() / nf;
    let mut centered = Array2::<f64>::zeros((n, n));
    for i in 0..n {
        for j in 0..n {
            centered[(i, j)] = entries[(i, j)] - row_means[i] - row_means[j] + grand_mean;
        }
    }
    GramMatrix {
        entries: centered,
        kernel: g.kernel.clone(),
        centered: true,
    }
}

/// Empirical HSIC between the variables behind two Gram matrices:
/// `tr(K H L H) / (n−1)²`, evaluated as the elementwise product of the two
/// centered matrices. Inputs are centered on the fly if needed; 0 for n < 2.
pub fn hsic(g_k: &GramMatrix, g_l: &GramMatrix) -> Result<f64> {
    let n = g_k.n();
    if g_l.n() != n {
        return Err(Error::DimensionMismatch {
            left: n,
            right: g_l.n(),
        });
    }
    if n < 2 {
        return Ok(0.0);
    }
    let kc;
    let k_ref = if g_k.centered {
        g_k
    } else {
        kc = center_gram(g_k);
        &kc
    };
    let lc;
    let l_ref = if g_l.centered {
        g_l
    } else {
        lc = center_gram(g_l);
        &lc
    };
    let trace: f64 = k_ref
        .entries
        .iter()
        .zip(l_ref.entries.iter())
        .map(|(a, b)| a * b)
        .sum();
    Ok(trace / ((n - 1) as f64 * (n - 1) as f64))
}
