//! Dataset ingestion: CSV files, the seeded random-instance generator, and
//! the bundled tennis corpus.
//!
//! CSV schema: the first column is `dmu`, every other column is `in:<name>`
//! or `out:<name>`. Membership defaults to candidate; names listed in
//! [`LoadOptions::fixed`] become fixed variables instead.

mod tennis_data;

use std::fs::File;
use std::io::{Read, Write};
use std::path::Path;

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};
use thiserror::Error;

use crate::dea::{Dataset, DatasetError, Membership, VarRole, VariableDef};

#[derive(Debug, Error)]
pub enum LoadError {
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("bad header: {0}")]
    Header(String),
    #[error("line {line}, column `{column}`: {message}")]
    Cell { line: usize, column: String, message: String },
    #[error("duplicate DMU name `{0}`")]
    DuplicateDmu(String),
    #[error("`--fixed` names unknown variable `{0}`")]
    UnknownFixed(String),
    #[error(transparent)]
    Dataset(#[from] DatasetError),
}

#[derive(Clone, Debug, Default)]
pub struct LoadOptions {
    /// Variable names to mark fixed instead of candidate.
    pub fixed: Vec<String>,
    /// Append the implicit constant input (value 1 for every DMU).
    pub constant_input: bool,
}

pub fn load_csv(path: impl AsRef<Path>, options: &LoadOptions) -> Result<Dataset, LoadError> {
    load_csv_reader(File::open(path)?, options)
}

pub fn load_csv_reader<R: Read>(reader: R, options: &LoadOptions) -> Result<Dataset, LoadError> {
    let mut rdr = csv::ReaderBuilder::new().has_headers(true).from_reader(reader);
    let headers = rdr.headers()?.clone();
    if headers.is_empty() || headers.get(0) != Some("dmu") {
        return Err(LoadError::Header("first column must be `dmu`".into()));
    }
    let mut variables = Vec::new();
    for header in headers.iter().skip(1) {
        let (role, name) = if let Some(name) = header.strip_prefix("in:") {
            (VarRole::Input, name)
        } else if let Some(name) = header.strip_prefix("out:") {
            (VarRole::Output, name)
        } else {
            return Err(LoadError::Header(format!(
                "column `{header}` must be prefixed `in:` or `out:`"
            )));
        };
        if name.is_empty() {
            return Err(LoadError::Header(format!("column `{header}` has an empty name")));
        }
        variables.push(VariableDef::new(name, role, Membership::Candidate));
    }
    for fixed in &options.fixed {
        let var = variables
            .iter_mut()
            .find(|v| &v.name == fixed)
            .ok_or_else(|| LoadError::UnknownFixed(fixed.clone()))?;
        var.membership = Membership::Fixed;
    }

    let mut dmu_names: Vec<String> = Vec::new();
    let mut values: Vec<f64> = Vec::new();
    for (idx, record) in rdr.records().enumerate() {
        let record = record?;
        let line = idx + 2; // 1-based, after the header line
        if record.len() != variables.len() + 1 {
            return Err(LoadError::Cell {
                line,
                column: "<record>".into(),
                message: format!(
                    "expected {} fields, found {}",
                    variables.len() + 1,
                    record.len()
                ),
            });
        }
        let name = record.get(0).unwrap().to_string();
        if dmu_names.contains(&name) {
            return Err(LoadError::DuplicateDmu(name));
        }
        for (j, cell) in record.iter().skip(1).enumerate() {
            let column = variables[j].name.clone();
            let value: f64 = cell.trim().parse().map_err(|_| LoadError::Cell {
                line,
                column: column.clone(),
                message: format!("`{cell}` is not a number"),
            })?;
            if !value.is_finite() || value < 0.0 {
                return Err(LoadError::Cell {
                    line,
                    column,
                    message: format!("value {value} must be finite and non-negative"),
                });
            }
            values.push(value);
        }
        dmu_names.push(name);
    }
    Ok(Dataset::new(dmu_names, variables, values, options.constant_input)?)
}

/// Writes a dataset back in the input schema. Values use Rust's shortest
/// round-trip float formatting, so `load(save(ds))` reproduces them exactly.
pub fn write_csv<W: Write>(dataset: &Dataset, writer: W) -> Result<(), LoadError> {
    let mut wtr = csv::Writer::from_writer(writer);
    let mut header = vec!["dmu".to_string()];
    for var in dataset.variables() {
        let prefix = match var.role {
            VarRole::Input => "in:",
            VarRole::Output => "out:",
        };
        header.push(format!("{prefix}{}", var.name));
    }
    wtr.write_record(&header)?;
    for (d, name) in dataset.dmu_names().iter().enumerate() {
        let mut record = vec![name.clone()];
        for j in 0..dataset.variables().len() {
            record.push(format!("{}", dataset.value(d, j)));
        }
        wtr.write_record(&record)?;
    }
    wtr.flush()?;
    Ok(())
}

pub fn save_csv(dataset: &Dataset, path: impl AsRef<Path>) -> Result<(), LoadError> {
    write_csv(dataset, File::create(path)?)
}

/// Which generated variables are candidates for selection.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum CandidatePolicy {
    /// Every input and output is a candidate.
    AllCandidate,
    /// Inputs are fixed; only outputs are candidates. No subset can then
    /// lose all inputs, so every non-empty mask yields a solvable LP.
    #[default]
    OutputsCandidate,
}

#[derive(Clone, Debug)]
pub struct GeneratorConfig {
    pub n_dmus: usize,
    pub n_inputs: usize,
    pub n_outputs: usize,
    pub value_range: (f64, f64),
    pub seed: u64,
    pub candidate_policy: CandidatePolicy,
}

impl Default for GeneratorConfig {
    fn default() -> Self {
        Self {
            n_dmus: 25,
            n_inputs: 1,
            n_outputs: 5,
            value_range: (50.0, 100.0),
            seed: 0,
            candidate_policy: CandidatePolicy::default(),
        }
    }
}

impl GeneratorConfig {
    pub fn validate(&self) -> Result<(), DatasetError> {
        if self.n_dmus == 0 {
            return Err(DatasetError::Empty);
        }
        if self.n_inputs + self.n_outputs < 2 || self.n_outputs == 0 {
            return Err(DatasetError::Dimension(
                "generator needs at least two variables including an output".into(),
            ));
        }
        let (lo, hi) = self.value_range;
        if !(lo.is_finite() && hi.is_finite() && lo < hi && lo >= 0.0) {
            return Err(DatasetError::Dimension(format!(
                "value range [{lo}, {hi}] must be finite, ordered, and non-negative"
            )));
        }
        Ok(())
    }
}

/// Random dataset with values i.i.d. uniform on `[low, high)`.
///
/// The stream is a ChaCha8 keystream seeded from `config.seed`; each value
/// takes the top 53 bits of one `u64` draw, so identical configurations
/// produce bitwise-identical datasets on every platform.
pub fn generate_random(config: &GeneratorConfig) -> Result<Dataset, DatasetError> {
    config.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut uniform = |lo: f64, hi: f64| {
        let u = (rng.next_u64() >> 11) as f64 * (1.0 / 9007199254740992.0);
        lo + u * (hi - lo)
    };
    let n_vars = config.n_inputs + config.n_outputs;
    let input_membership = match config.candidate_policy {
        CandidatePolicy::AllCandidate => Membership::Candidate,
        CandidatePolicy::OutputsCandidate => Membership::Fixed,
    };
    let mut variables = Vec::with_capacity(n_vars);
    for i in 0..config.n_inputs {
        variables.push(VariableDef::new(format!("x{}", i + 1), VarRole::Input, input_membership));
    }
    for r in 0..config.n_outputs {
        variables.push(VariableDef::new(
            format!("y{}", r + 1),
            VarRole::Output,
            Membership::Candidate,
        ));
    }
    let (lo, hi) = config.value_range;
    let mut dmu_names = Vec::with_capacity(config.n_dmus);
    let mut values = Vec::with_capacity(config.n_dmus * n_vars);
    for d in 0..config.n_dmus {
        dmu_names.push(format!("dmu{:03}", d + 1));
        for _ in 0..n_vars {
            values.push(uniform(lo, hi));
        }
    }
    Dataset::new(dmu_names, variables, values, false)
}

/// The bundled corpus: 46 ATP players from the 2014 season with nine
/// game-performance outputs, evaluated against a single constant input.
///
/// Outputs, in order: `y1` first-serve percentage, `y2` first-serve points
/// won, `y3` second-serve points won, `y4` service games won, `y5` break
/// points saved, `y6` points won returning first serve, `y7` points won
/// returning second serve, `y8` break points converted, `y9` return games
/// won (all percentages).
pub fn tennis_dataset() -> Dataset {
    let variables: Vec<VariableDef> = (1..=9)
        .map(|r| VariableDef::new(format!("y{r}"), VarRole::Output, Membership::Candidate))
        .collect();
    let mut dmu_names = Vec::with_capacity(tennis_data::ATP_2014.len());
    let mut values = Vec::with_capacity(tennis_data::ATP_2014.len() * 9);
    for (name, row) in tennis_data::ATP_2014.iter() {
        dmu_names.push((*name).to_string());
        values.extend_from_slice(row);
    }
    Dataset::new(dmu_names, variables, values, true)
        .expect("bundled corpus satisfies the dataset invariants")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fnv1a(bytes: &[u8]) -> u64 {
        let mut hash: u64 = 0xcbf29ce484222325;
        for &b in bytes {
            hash ^= b as u64;
            hash = hash.wrapping_mul(0x100000001b3);
        }
        hash
    }

    #[test]
    fn loads_minimal_csv() {
        let ds = load_csv_reader("dmu,in:x,out:y\nA,1,2\n".as_bytes(), &LoadOptions::default())
            .unwrap();
        assert_eq!(ds.n_dmus(), 1);
        assert_eq!(ds.q(), 2);
        assert_eq!(ds.value(0, 0), 1.0);
        assert_eq!(ds.value(0, 1), 2.0);
    }

    #[test]
    fn rejects_negative_cell_with_location() {
        let err = load_csv_reader(
            "dmu,in:x,out:y\nA,1,2\nB,-1,3\n".as_bytes(),
            &LoadOptions::default(),
        )
        .unwrap_err();
        match err {
            LoadError::Cell { line, column, .. } => {
                assert_eq!(line, 3);
                assert_eq!(column, "x");
            }
            other => panic!("expected a located cell error, got {other}"),
        }
    }

    #[test]
    fn rejects_malformed_number_and_bad_header() {
        let err = load_csv_reader(
            "dmu,in:x,out:y\nA,one,2\n".as_bytes(),
            &LoadOptions::default(),
        )
        .unwrap_err();
        assert!(matches!(err, LoadError::Cell { line: 2, .. }));
        let err =
            load_csv_reader("dmu,x,out:y\nA,1,2\n".as_bytes(), &LoadOptions::default()).unwrap_err();
        assert!(matches!(err, LoadError::Header(_)));
    }

    #[test]
    fn fixed_option_applies_and_unknown_name_errors() {
        let opts = LoadOptions { fixed: vec!["x".into()], constant_input: false };
        let ds = load_csv_reader("dmu,in:x,out:y\nA,1,2\n".as_bytes(), &opts).unwrap();
        assert_eq!(ds.q(), 1);
        let opts = LoadOptions { fixed: vec!["z".into()], constant_input: false };
        let err = load_csv_reader("dmu,in:x,out:y\nA,1,2\n".as_bytes(), &opts).unwrap_err();
        assert!(matches!(err, LoadError::UnknownFixed(_)));
    }

    #[test]
    fn round_trip_is_bit_exact() {
        let config = GeneratorConfig { n_dmus: 7, n_inputs: 2, n_outputs: 3, ..Default::default() };
        let ds = generate_random(&config).unwrap();
        let mut buf = Vec::new();
        write_csv(&ds, &mut buf).unwrap();
        let opts = LoadOptions { fixed: vec!["x1".into(), "x2".into()], constant_input: false };
        let loaded = load_csv_reader(buf.as_slice(), &opts).unwrap();
        assert_eq!(loaded.n_dmus(), ds.n_dmus());
        for d in 0..ds.n_dmus() {
            for j in 0..ds.variables().len() {
                assert_eq!(loaded.value(d, j).to_bits(), ds.value(d, j).to_bits());
            }
        }
    }

    #[test]
    fn generator_is_deterministic_and_in_range() {
        let config = GeneratorConfig { n_dmus: 25, n_outputs: 9, seed: 7, ..Default::default() };
        let a = generate_random(&config).unwrap();
        let b = generate_random(&config).unwrap();
        for d in 0..25 {
            for j in 0..10 {
                assert_eq!(a.value(d, j).to_bits(), b.value(d, j).to_bits());
                assert!((50.0..100.0).contains(&a.value(d, j)));
            }
        }
        let other = generate_random(&GeneratorConfig { seed: 8, ..config }).unwrap();
        assert_ne!(a.value(0, 0).to_bits(), other.value(0, 0).to_bits());
    }

    #[test]
    fn generator_uniformity_kolmogorov_smirnov() {
        // One-sample KS against U[50,100) on 2000 draws; the alpha = 0.01
        // critical value is 1.628/sqrt(n).
        let config = GeneratorConfig {
            n_dmus: 200,
            n_inputs: 1,
            n_outputs: 9,
            seed: 20140101,
            ..Default::default()
        };
        let ds = generate_random(&config).unwrap();
        let mut sample: Vec<f64> = (0..200)
            .flat_map(|d| (0..10).map(move |j| (d, j)))
            .map(|(d, j)| ds.value(d, j))
            .collect();
        sample.sort_by(f64::total_cmp);
        let n = sample.len() as f64;
        let mut d_stat = 0.0f64;
        for (i, &x) in sample.iter().enumerate() {
            let cdf = (x - 50.0) / 50.0;
            d_stat = d_stat.max((i as f64 + 1.0) / n - cdf).max(cdf - i as f64 / n);
        }
        let critical = 1.628 / n.sqrt();
        assert!(d_stat < critical, "KS statistic {d_stat} exceeds {critical}");
    }

    #[test]
    fn tennis_dimensions_and_spot_rows() {
        let ds = tennis_dataset();
        assert_eq!(ds.n_dmus(), 46);
        assert_eq!(ds.q(), 9);
        assert!(ds.constant_input_mode());
        let djokovic = ds.dmu_names().iter().position(|n| n == "Novak Djokovic").unwrap();
        let expected = [67.0, 75.0, 56.0, 88.0, 63.0, 33.0, 58.0, 45.0, 33.0];
        for (j, &v) in expected.iter().enumerate() {
            assert_eq!(ds.value(djokovic, j), v);
        }
        let isner = ds.dmu_names().iter().position(|n| n == "John Isner").unwrap();
        let expected = [68.0, 79.0, 57.0, 93.0, 75.0, 24.0, 42.0, 24.0, 9.0];
        for (j, &v) in expected.iter().enumerate() {
            assert_eq!(ds.value(isner, j), v);
        }
    }

    #[test]
    fn tennis_corpus_hash_is_pinned() {
        let ds = tennis_dataset();
        let mut canonical = String::new();
        for (d, name) in ds.dmu_names().iter().enumerate() {
            canonical.push_str(name);
            for j in 0..9 {
                canonical.push_str(&format!(",{}", ds.value(d, j)));
            }
            canonical.push('\n');
        }
        assert_eq!(fnv1a(canonical.as_bytes()), 0x512aeb9552743ea5);
    }
}
