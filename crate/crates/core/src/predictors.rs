//! Concrete predictors: kernel machines with a closed-form ridge trainer,
//! model file round-tripping, and a line-protocol client for external
//! predictor processes.

use crate::error::{Error, Result};
use crate::kernels::{self, KernelSpec};
use crate::linalg::cholesky_solve;
use crate::predictor::Predictor;
use crate::sample::{ImageSample, Sample, SampleSet, SampleShape, SequenceSample};
use ndarray::{Array1, Array2};
use std::fmt::Write as _;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;
use std::process::{Child, ChildStdin, Command, Stdio};
use std::sync::mpsc::{self, Receiver, RecvTimeoutError};
use std::sync::Mutex;
use std::time::Duration;

const MODEL_VERSION: u32 = 1;

/// Decimal format with 18 significant digits; parses back bit-exactly.
pub(crate) fn fmt_f64(v: f64) -> String {
    format!("{v:.17e}")
}

/// A kernel expansion `s(x) = Σ_i α_i·k(x_i, x) + b`.
#[derive(Debug, Clone)]
pub struct KernelMachineModel {
    support: SampleSet,
    alphas: Vec<f64>,
    bias: f64,
    kernel: KernelSpec,
}

impl KernelMachineModel {
    pub fn new(
        support: SampleSet,
        alphas: Vec<f64>,
        bias: f64,
        kernel: KernelSpec,
    ) -> Result<Self> {
        kernel.validate()?;
        if alphas.len() != support.len() {
            return Err(Error::LabelCountMismatch {
                labels: alphas.len(),
                samples: support.len(),
            });
        }
        if !bias.is_finite() || alphas.iter().any(|a| !a.is_finite()) {
            return Err(Error::InvalidParam {
                name: "alphas",
                reason: "coefficients and bias must be finite".into(),
            });
        }
        Ok(Self {
            support,
            alphas,
            bias,
            kernel,
        })
    }

    pub fn support(&self) -> &SampleSet {
        &self.support
    }

    pub fn alphas(&self) -> &[f64] {
        &self.alphas
    }

    pub fn bias(&self) -> f64 {
        self.bias
    }

    pub fn kernel(&self) -> &KernelSpec {
        &self.kernel
    }

    pub fn shape(&self) -> SampleShape {
        self.support.shape()
    }
}

impl Predictor for KernelMachineModel {
    fn score(&self, x: &Sample) -> Result<f64> {
        if x.shape() != self.support.shape() {
            return Err(Error::ShapeMismatch {
                expected: self.support.shape().to_string(),
                actual: x.shape().to_string(),
            });
        }
        let mut acc = 0.0;
        for (alpha, sv) in self.alphas.iter().zip(self.support.iter()) {
            acc += alpha * kernels::kernel_eval_samples(&self.kernel, sv, x)?;
        }
        Ok(acc + self.bias)
    }
}

/// Trains a least-squares kernel machine: `α` solves `(G + λI)·α = y` on the
/// training Gram matrix, bias 0.
///
/// The ridge `λ > 0` keeps the system positive definite for any PSD kernel,
/// so the solve cannot fail on valid input.
pub fn train_ls(
    train: &SampleSet,
    labels: &[f64],
    kernel: &KernelSpec,
    lambda: f64,
) -> Result<KernelMachineModel> {
    if labels.len() != train.len() {
        return Err(Error::LabelCountMismatch {
            labels: labels.len(),
            samples: train.len(),
        });
    }
    if !(lambda.is_finite() && lambda > 0.0) {
        return Err(Error::InvalidParam {
            name: "lambda",
            reason: format!("ridge must be positive, got {lambda}"),
        });
    }
    if labels.iter().any(|y| !y.is_finite()) {
        return Err(Error::InvalidParam {
            name: "labels",
            reason: "labels must be finite".into(),
        });
    }
    let gram = gram_over_set(train, kernel)?;
    let n = train.len();
    let mut system = gram.entries().clone();
    for i in 0..n {
        system[(i, i)] += lambda;
    }
    let y = Array1::from(labels.to_vec());
    let alphas = cholesky_solve(&system, &y)?;
    KernelMachineModel::new(train.clone(), alphas.to_vec(), 0.0, kernel.clone())
}

/// Gram matrix of a kernel over a whole sample set.
pub fn gram_over_set(set: &SampleSet, kernel: &KernelSpec) -> Result<kernels::GramMatrix> {
    match set.shape() {
        SampleShape::Sequence { .. } => {
            let seqs: Vec<SequenceSample> = set
                .iter()
                .map(|s| s.as_sequence().expect("homogeneous set").clone())
                .collect();
            kernels::gram(&kernels::KernelOperands::Sequences(&seqs), kernel)
        }
        SampleShape::Image { .. } => {
            let vecs: Vec<Vec<f64>> = set
                .iter()
                .map(|s| s.as_image().expect("homogeneous set").flat().to_vec())
                .collect();
            kernels::gram(&kernels::KernelOperands::Vectors(&vecs), kernel)
        }
    }
}

// ---------------------------------------------------------------------------
// model file round trip
// ---------------------------------------------------------------------------

/// Writes a model as structured text; the round trip restores every field
/// bit-exactly.
pub fn save_model(model: &KernelMachineModel, path: &Path) -> Result<()> {
    let mut out = String::new();
    writeln!(out, "version {MODEL_VERSION}").expect("string write");
    match model.kernel() {
        KernelSpec::Rbf { sigma } => {
            writeln!(out, "kernel rbf\nparams sigma={}", fmt_f64(*sigma)).unwrap()
        }
        KernelSpec::Linear => writeln!(out, "kernel linear\nparams -").unwrap(),
        KernelSpec::Delta => writeln!(out, "kernel delta\nparams -").unwrap(),
        KernelSpec::WeightedDegree { degree } => {
            writeln!(out, "kernel wd\nparams degree={degree}").unwrap()
        }
    }
    writeln!(out, "bias {}", fmt_f64(model.bias())).unwrap();
    writeln!(out, "alphas {}", model.alphas().len()).unwrap();
    for a in model.alphas() {
        writeln!(out, "{}", fmt_f64(*a)).unwrap();
    }
    let support = model.support();
    match support.shape() {
        SampleShape::Sequence { len } => {
            let alphabet: String = support
                .alphabet()
                .expect("sequence set has alphabet")
                .symbols()
                .iter()
                .collect();
            writeln!(
                out,
                "support sequence {} len={len} alphabet={alphabet} seed={}",
                support.len(),
                support.seed()
            )
            .unwrap();
            for s in support.iter() {
                writeln!(out, "{}", s.as_sequence().unwrap().as_string()).unwrap();
            }
        }
        SampleShape::Image { rows, cols } => {
            writeln!(
                out,
                "support image {} rows={rows} cols={cols} seed={}",
                support.len(),
                support.seed()
            )
            .unwrap();
            for s in support.iter() {
                let line: Vec<String> = s
                    .as_image()
                    .unwrap()
                    .flat()
                    .iter()
                    .map(|v| fmt_f64(*v))
                    .collect();
                writeln!(out, "{}", line.join(",")).unwrap();
            }
        }
    }
    std::fs::write(path, out)?;
    Ok(())
}

struct ModelLines<'a> {
    path: &'a Path,
    lines: std::iter::Enumerate<std::str::Lines<'a>>,
}

impl<'a> ModelLines<'a> {
    fn next_line(&mut self) -> Result<(usize, &'a str)> {
        self.lines
            .next()
            .map(|(i, l)| (i + 1, l))
            .ok_or_else(|| self.malformed(0, "unexpected end of file"))
    }

    fn malformed(&self, line: usize, reason: &str) -> Error {
        Error::MalformedFile {
            path: self.path.display().to_string(),
            line,
            reason: reason.to_string(),
        }
    }

    /// Consumes a `key value` line, erroring if the key differs.
    fn field(&mut self, key: &str) -> Result<(usize, String)> {
        let (no, line) = self.next_line()?;
        match line.split_once(' ') {
            Some((k, v)) if k == key => Ok((no, v.to_string())),
            _ => Err(self.malformed(no, &format!("expected field '{key}'"))),
        }
    }
}

fn parse_f64(text: &str, path: &Path, line: usize, what: &str) -> Result<f64> {
    text.trim().parse::<f64>().map_err(|_| Error::MalformedFile {
        path: path.display().to_string(),
        line,
        reason: format!("cannot parse {what} from {text:?}"),
    })
}

/// Reads a model saved by [`save_model`].
pub fn load_model(path: &Path) -> Result<KernelMachineModel> {
    let text = std::fs::read_to_string(path)?;
    let mut r = ModelLines {
        path,
        lines: text.lines().enumerate(),
    };

    let (vno, version) = r.field("version")?;
    if version.trim() != MODEL_VERSION.to_string() {
        let _ = vno;
        return Err(Error::VersionMismatch {
            found: version.trim().to_string(),
            supported: MODEL_VERSION.to_string(),
        });
    }
    let (kno, kind) = r.field("kernel")?;
    let (pno, params) = r.field("params")?;
    let kernel = match kind.trim() {
        "rbf" => {
            let sigma = params
                .trim()
                .strip_prefix("sigma=")
                .ok_or_else(|| r.malformed(pno, "expected sigma=<value>"))?;
            KernelSpec::Rbf {
                sigma: parse_f64(sigma, path, pno, "sigma")?,
            }
        }
        "linear" => KernelSpec::Linear,
        "delta" => KernelSpec::Delta,
        "wd" => {
            let degree = params
                .trim()
                .strip_prefix("degree=")
                .ok_or_else(|| r.malformed(pno, "expected degree=<value>"))?;
            KernelSpec::WeightedDegree {
                degree: degree.trim().parse().map_err(|_| {
                    r.malformed(pno, &format!("cannot parse degree from {degree:?}"))
                })?,
            }
        }
        other => return Err(r.malformed(kno, &format!("unknown kernel kind {other:?}"))),
    };

    let (bno, bias_text) = r.field("bias")?;
    let bias = parse_f64(&bias_text, path, bno, "bias")?;

    let (ano, count_text) = r.field("alphas")?;
    let alpha_count: usize = count_text
        .trim()
        .parse()
        .map_err(|_| r.malformed(ano, "cannot parse alpha count"))?;
    let mut alphas = Vec::with_capacity(alpha_count);
    for _ in 0..alpha_count {
        let (no, line) = r.next_line()?;
        alphas.push(parse_f64(line, path, no, "alpha")?);
    }

    let (sno, header) = r.field("support")?;
    let mut parts = header.split_whitespace();
    let kind = parts
        .next()
        .ok_or_else(|| r.malformed(sno, "empty support header"))?;
    let count: usize = parts
        .next()
        .and_then(|c| c.parse().ok())
        .ok_or_else(|| r.malformed(sno, "cannot parse support count"))?;
    let attrs: std::collections::HashMap<&str, &str> = parts
        .filter_map(|p| p.split_once('='))
        .collect();
    let seed: u64 = attrs
        .get("seed")
        .and_then(|s| s.parse().ok())
        .ok_or_else(|| r.malformed(sno, "missing support seed"))?;

    let support = match kind {
        "sequence" => {
            let len: usize = attrs
                .get("len")
                .and_then(|s| s.parse().ok())
                .ok_or_else(|| r.malformed(sno, "missing sequence len"))?;
            let alphabet = attrs
                .get("alphabet")
                .ok_or_else(|| r.malformed(sno, "missing alphabet"))?;
            let alphabet = std::sync::Arc::new(crate::alphabet::AlphabetSpec::from_str_symbols(
                alphabet,
            )?);
            let mut seqs = Vec::with_capacity(count);
            for _ in 0..count {
                let (no, line) = r.next_line()?;
                let seq = SequenceSample::new(line.trim(), alphabet.clone())?;
                if seq.len() != len {
                    return Err(r.malformed(no, "sequence length differs from header"));
                }
                seqs.push(seq);
            }
            SampleSet::from_sequences(seqs, seed)?
        }
        "image" => {
            let rows: usize = attrs
                .get("rows")
                .and_then(|s| s.parse().ok())
                .ok_or_else(|| r.malformed(sno, "missing rows"))?;
            let cols: usize = attrs
                .get("cols")
                .and_then(|s| s.parse().ok())
                .ok_or_else(|| r.malformed(sno, "missing cols"))?;
            let mut images = Vec::with_capacity(count);
            for _ in 0..count {
                let (no, line) = r.next_line()?;
                let values: Result<Vec<f64>> = line
                    .split(',')
                    .map(|v| parse_f64(v, path, no, "pixel"))
                    .collect();
                let values = values?;
                if values.len() != rows * cols {
                    return Err(r.malformed(no, "pixel count differs from header"));
                }
                let pixels = Array2::from_shape_vec((rows, cols), values)
                    .map_err(|e| r.malformed(no, &e.to_string()))?;
                images.push(ImageSample::new(pixels)?);
            }
            SampleSet::from_images(images, seed)?
        }
        other => return Err(r.malformed(sno, &format!("unknown support kind {other:?}"))),
    };

    KernelMachineModel::new(support, alphas, bias, kernel)
}

// ---------------------------------------------------------------------------
// external predictor
// ---------------------------------------------------------------------------

/// How samples are put on the wire for an external predictor.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WireFormat {
    /// One raw character string per line.
    SequenceString,
    /// One image per line: row-major intensities, comma-separated.
    ImageCsvRow,
}

/// Launch description of an external predictor process.
///
/// Protocol: one serialized sample per request line on stdin, one decimal
/// score per response line on stdout, a blank line ends the session.
#[derive(Debug, Clone)]
pub struct ExternalPredictorSpec {
    pub command: Vec<String>,
    pub timeout: Duration,
    pub serialization: WireFormat,
}

impl ExternalPredictorSpec {
    pub fn new(command: Vec<String>, timeout: Duration, serialization: WireFormat) -> Result<Self> {
        if command.is_empty() || command[0].is_empty() {
            return Err(Error::InvalidParam {
                name: "command",
                reason: "external predictor command must be non-empty".into(),
            });
        }
        if timeout.is_zero() {
            return Err(Error::InvalidParam {
                name: "timeout",
                reason: "timeout must be positive".into(),
            });
        }
        Ok(Self {
            command,
            timeout,
            serialization,
        })
    }
}

struct ExternalSession {
    child: Child,
    stdin: ChildStdin,
    responses: Receiver<std::io::Result<String>>,
}

/// A running external predictor. One process serves one session; concurrent
/// callers are serialized on an internal lock so request and response lines
/// stay paired.
pub struct ExternalPredictor {
    spec: ExternalPredictorSpec,
    session: Mutex<ExternalSession>,
}

impl ExternalPredictor {
    pub fn spawn(spec: ExternalPredictorSpec) -> Result<Self> {
        let mut child = Command::new(&spec.command[0])
            .args(&spec.command[1..])
            .stdin(Stdio::piped())
            .stdout(Stdio::piped())
            .stderr(Stdio::null())
            .spawn()
            .map_err(|e| Error::ProcessFailure(format!("spawn {:?}: {e}", spec.command[0])))?;
        let stdin = child.stdin.take().expect("stdin piped");
        let stdout = child.stdout.take().expect("stdout piped");
        let (tx, responses) = mpsc::channel();
        std::thread::spawn(move || {
            let reader = BufReader::new(stdout);
            for line in reader.lines() {
                if tx.send(line).is_err() {
                    break;
                }
            }
        });
        Ok(Self {
            spec,
            session: Mutex::new(ExternalSession {
                child,
                stdin,
                responses,
            }),
        })
    }

    fn serialize(&self, x: &Sample) -> Result<String> {
        match (self.spec.serialization, x) {
            (WireFormat::SequenceString, Sample::Sequence(s)) => Ok(s.as_string()),
            (WireFormat::ImageCsvRow, Sample::Image(im)) => Ok(im
                .flat()
                .iter()
                .map(|v| fmt_f64(*v))
                .collect::<Vec<_>>()
                .join(",")),
            (fmt, sample) => Err(Error::InvalidParam {
                name: "serialization",
                reason: format!("{fmt:?} cannot carry {} samples", sample.shape()),
            }),
        }
    }
}

impl Predictor for ExternalPredictor {
    fn score(&self, x: &Sample) -> Result<f64> {
        let request = self.serialize(x)?;
        let mut session = self.session.lock().expect("session lock");
        session
            .stdin
            .write_all(request.as_bytes())
            .and_then(|_| session.stdin.write_all(b"\n"))
            .and_then(|_| session.stdin.flush())
            .map_err(|e| Error::ProcessFailure(format!("write request: {e}")))?;
        let line = match session.responses.recv_timeout(self.spec.timeout) {
            Ok(Ok(line)) => line,
            Ok(Err(e)) => return Err(Error::ProcessFailure(format!("read response: {e}"))),
            Err(RecvTimeoutError::Timeout) => {
                return Err(Error::Timeout {
                    seconds: self.spec.timeout.as_secs_f64(),
                })
            }
            Err(RecvTimeoutError::Disconnected) => {
                return Err(Error::ProcessFailure(
                    "predictor process closed its output".into(),
                ))
            }
        };
        line.trim()
            .parse::<f64>()
            .map_err(|_| Error::UnparseableResponse { line })
    }
}

impl Drop for ExternalPredictor {
    fn drop(&mut self) {
        if let Ok(session) = self.session.get_mut() {
            // blank line terminates the session per protocol
            let _ = session.stdin.write_all(b"\n");
            let _ = session.stdin.flush();
            std::thread::sleep(Duration::from_millis(20));
            let _ = session.child.kill();
            let _ = session.child.wait();
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::alphabet::AlphabetSpec;
    use ndarray::array;

    fn seq_set(seqs: &[&str], seed: u64) -> SampleSet {
        let a = AlphabetSpec::dna();
        SampleSet::from_sequences(
            seqs.iter()
                .map(|s| SequenceSample::new(s, a.clone()).unwrap())
                .collect(),
            seed,
        )
        .unwrap()
    }

    fn image(rows: &[[f64; 2]]) -> Sample {
        let arr = Array2::from_shape_vec(
            (rows.len(), 2),
            rows.iter().flatten().copied().collect(),
        )
        .unwrap();
        Sample::Image(ImageSample::new(arr).unwrap())
    }

    #[test]
    fn zero_alphas_score_the_bias() {
        let set = seq_set(&["ACGT", "TTTT"], 0);
        let model =
            KernelMachineModel::new(set, vec![0.0, 0.0], 2.5, KernelSpec::Delta).unwrap();
        let x = Sample::Sequence(SequenceSample::new("GGGG", AlphabetSpec::dna()).unwrap());
        assert_eq!(model.score(&x).unwrap(), 2.5);
    }

    #[test]
    fn single_support_rbf_is_kernel_value() {
        let img = image(&[[0.25, 0.75]]);
        let set = SampleSet::new(vec![img.clone()], 0).unwrap();
        let model =
            KernelMachineModel::new(set, vec![1.0], 0.0, KernelSpec::Rbf { sigma: 1.0 }).unwrap();
        assert_eq!(model.score(&img).unwrap(), 1.0);
        let other = image(&[[0.25, 0.5]]);
        let expected = (-(0.25f64 * 0.25) / 2.0).exp();
        assert!((model.score(&other).unwrap() - expected).abs() < 1e-15);
    }

    #[test]
    fn three_support_linear_matches_hand_sum() {
        let imgs = vec![image(&[[1.0, 0.0]]), image(&[[0.0, 1.0]]), image(&[[0.5, 0.5]])];
        let set = SampleSet::new(imgs, 0).unwrap();
        let model =
            KernelMachineModel::new(set, vec![2.0, -1.0, 4.0], 0.5, KernelSpec::Linear).unwrap();
        let x = image(&[[0.2, 0.6]]);
        // 2·(0.2) − 1·(0.6) + 4·(0.4) + 0.5
        let want = 2.0 * 0.2 - 1.0 * 0.6 + 4.0 * (0.5 * 0.2 + 0.5 * 0.6) + 0.5;
        assert!((model.score(&x).unwrap() - want).abs() < 1e-15);
    }

    #[test]
    fn score_is_linear_in_alphas() {
        let set = seq_set(&["ACGT", "ACGA", "TCGA"], 0);
        let a1 = vec![0.3, -0.2, 0.9];
        let a2 = vec![-1.1, 0.4, 0.05];
        let sum: Vec<f64> = a1.iter().zip(&a2).map(|(x, y)| x + y).collect();
        let kernel = KernelSpec::WeightedDegree { degree: 2 };
        let x = Sample::Sequence(SequenceSample::new("ACGG", AlphabetSpec::dna()).unwrap());
        let m1 = KernelMachineModel::new(set.clone(), a1, 0.0, kernel.clone()).unwrap();
        let m2 = KernelMachineModel::new(set.clone(), a2, 0.0, kernel.clone()).unwrap();
        let ms = KernelMachineModel::new(set, sum, 0.0, kernel).unwrap();
        let lhs = ms.score(&x).unwrap();
        let rhs = m1.score(&x).unwrap() + m2.score(&x).unwrap();
        assert!((lhs - rhs).abs() < 1e-12);
    }

    #[test]
    fn shape_mismatch_is_rejected() {
        let set = seq_set(&["ACGT"], 0);
        let model = KernelMachineModel::new(set, vec![1.0], 0.0, KernelSpec::Delta).unwrap();
        let x = Sample::Sequence(SequenceSample::new("ACG", AlphabetSpec::dna()).unwrap());
        assert!(matches!(
            model.score(&x),
            Err(Error::ShapeMismatch { .. })
        ));
    }

    #[test]
    fn train_one_sample_solves_by_hand() {
        // G = [[1]], y = (1), λ = 1: (1+1)·α = 1 → α = 0.5
        let set = seq_set(&["ACGT"], 0);
        let model = train_ls(&set, &[1.0], &KernelSpec::Delta, 1.0).unwrap();
        assert!((model.alphas()[0] - 0.5).abs() < 1e-12);
        assert_eq!(model.bias(), 0.0);
    }

    #[test]
    fn delta_kernel_interpolates_as_ridge_vanishes() {
        let set = seq_set(&["ACGT", "TTTT", "GGCC"], 0);
        let model = train_ls(&set, &[1.0, 1.0, 1.0], &KernelSpec::Delta, 1e-9).unwrap();
        for s in set.iter() {
            assert!((model.score(s).unwrap() - 1.0).abs() < 1e-6);
        }
    }

    #[test]
    fn training_is_sign_equivariant() {
        let set = seq_set(&["ACGT", "ACGA", "TCGA", "TTAA"], 0);
        let y = [1.0, -1.0, 1.0, -1.0];
        let neg: Vec<f64> = y.iter().map(|v| -v).collect();
        let kernel = KernelSpec::WeightedDegree { degree: 3 };
        let m_pos = train_ls(&set, &y, &kernel, 1e-3).unwrap();
        let m_neg = train_ls(&set, &neg, &kernel, 1e-3).unwrap();
        for (a, b) in m_pos.alphas().iter().zip(m_neg.alphas()) {
            assert!((a + b).abs() < 1e-12);
        }
    }

    #[test]
    fn training_residual_is_tiny() {
        let set = seq_set(&["ACGT", "AGGT", "TCGA", "TTAA", "CCGG"], 0);
        let y = [1.0, 1.0, -1.0, -1.0, 1.0];
        for kernel in [
            KernelSpec::WeightedDegree { degree: 2 },
            KernelSpec::Delta,
        ] {
            let model = train_ls(&set, &y, &kernel, 1e-3).unwrap();
            let g = gram_over_set(&set, &kernel).unwrap();
            let mut worst = 0.0f64;
            for i in 0..set.len() {
                let mut lhs = 1e-3 * model.alphas()[i];
                for j in 0..set.len() {
                    lhs += g.get(i, j) * model.alphas()[j];
                }
                worst = worst.max((lhs - y[i]).abs());
            }
            assert!(worst <= 1e-8, "residual {worst} too large for {kernel}");
        }
    }

    #[test]
    fn model_round_trip_is_bit_exact() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("model.txt");
        let set = seq_set(&["ACGT", "TGCA"], 99);
        let model = KernelMachineModel::new(
            set,
            vec![0.1 + 0.2, -1.0 / 3.0],
            std::f64::consts::PI,
            KernelSpec::Rbf {
                sigma: 0.123456789,
            },
        )
        .unwrap();
        save_model(&model, &path).unwrap();
        let loaded = load_model(&path).unwrap();
        assert_eq!(loaded.alphas(), model.alphas());
        assert_eq!(loaded.bias().to_bits(), model.bias().to_bits());
        assert_eq!(loaded.kernel(), model.kernel());
        assert_eq!(loaded.support().seed(), 99);
        assert_eq!(
            loaded.support().get(1).unwrap().as_sequence().unwrap().as_string(),
            "TGCA"
        );
    }

    #[test]
    fn image_model_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("model.txt");
        let imgs = vec![
            ImageSample::new(array![[0.0, 0.5], [1.0, 0.25]]).unwrap(),
            ImageSample::new(array![[0.1, 0.9], [0.3, 0.7]]).unwrap(),
        ];
        let set = SampleSet::from_images(imgs, 5).unwrap();
        let model =
            KernelMachineModel::new(set, vec![1.5, -2.5], 0.0, KernelSpec::Linear).unwrap();
        save_model(&model, &path).unwrap();
        let loaded = load_model(&path).unwrap();
        assert_eq!(loaded.support().get(0), model.support().get(0));
        assert_eq!(loaded.alphas(), model.alphas());
    }

    #[test]
    fn missing_alphas_field_is_malformed() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("model.txt");
        std::fs::write(
            &path,
            "version 1\nkernel linear\nparams -\nbias 0e0\nsupport sequence 0 len=1 alphabet=AC seed=0\n",
        )
        .unwrap();
        let err = load_model(&path).unwrap_err();
        assert!(matches!(err, Error::MalformedFile { .. }));
        assert!(err.to_string().contains("alphas"));
    }

    #[test]
    fn unsupported_version_is_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("model.txt");
        std::fs::write(&path, "version 7\nkernel linear\n").unwrap();
        assert!(matches!(
            load_model(&path).unwrap_err(),
            Error::VersionMismatch { .. }
        ));
    }

    // -- external predictor ---------------------------------------------------

    fn sh(script: &str) -> ExternalPredictorSpec {
        ExternalPredictorSpec::new(
            vec!["sh".into(), "-c".into(), script.into()],
            Duration::from_secs(5),
            WireFormat::SequenceString,
        )
        .unwrap()
    }

    fn dna_sample(s: &str) -> Sample {
        Sample::Sequence(SequenceSample::new(s, AlphabetSpec::dna()).unwrap())
    }

    #[test]
    fn echo_style_process_scores_zero() {
        let p = ExternalPredictor::spawn(sh(
            "while IFS= read -r line; do if [ -z \"$line\" ]; then exit 0; fi; echo 0.0; done",
        ))
        .unwrap();
        assert_eq!(p.score(&dna_sample("ACGT")).unwrap(), 0.0);
    }

    #[test]
    fn unparseable_response_is_reported() {
        let p = ExternalPredictor::spawn(sh(
            "while IFS= read -r line; do if [ -z \"$line\" ]; then exit 0; fi; echo abc; done",
        ))
        .unwrap();
        assert!(matches!(
            p.score(&dna_sample("ACGT")),
            Err(Error::UnparseableResponse { .. })
        ));
    }

    #[test]
    fn batch_preserves_request_order() {
        // score = sequence length in characters, distinguishable per request
        let spec = ExternalPredictorSpec::new(
            vec![
                "sh".into(),
                "-c".into(),
                "i=0; while IFS= read -r line; do if [ -z \"$line\" ]; then exit 0; fi; i=$((i+1)); echo \"$i\"; done"
                    .into(),
            ],
            Duration::from_secs(5),
            WireFormat::SequenceString,
        )
        .unwrap();
        let p = ExternalPredictor::spawn(spec).unwrap();
        let scores: Vec<f64> = (0..5)
            .map(|_| p.score(&dna_sample("ACGT")).unwrap())
            .collect();
        assert_eq!(scores, vec![1.0, 2.0, 3.0, 4.0, 5.0]);
    }

    #[test]
    fn shuffled_batch_unshuffles_to_same_scores() {
        // deterministic per-input score: the sequence length
        let script =
            "while IFS= read -r line; do if [ -z \"$line\" ]; then exit 0; fi; echo \"${#line}\"; done";
        let p = ExternalPredictor::spawn(sh(script)).unwrap();
        let a = AlphabetSpec::dna();
        let samples: Vec<Sample> = ["A", "AC", "ACG", "ACGT", "ACGTA"]
            .iter()
            .map(|s| Sample::Sequence(SequenceSample::new(s, a.clone()).unwrap()))
            .collect();
        let direct: Vec<f64> = samples.iter().map(|s| p.score(s).unwrap()).collect();

        let order = [3usize, 0, 4, 1, 2];
        let mut unshuffled = vec![0.0; samples.len()];
        for &idx in &order {
            unshuffled[idx] = p.score(&samples[idx]).unwrap();
        }
        assert_eq!(direct, unshuffled);
    }

    #[test]
    fn dead_process_is_a_failure() {
        let p = ExternalPredictor::spawn(sh("exit 0")).unwrap();
        std::thread::sleep(Duration::from_millis(50));
        assert!(matches!(
            p.score(&dna_sample("ACGT")),
            Err(Error::ProcessFailure(_)) | Err(Error::Timeout { .. })
        ));
    }
}
