//! JSON and CSV encodings of solutions, reports, catalogs and braces.
//!
//! Points are 0-based everywhere: a permutation is the array of its images.

use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};
use ybe_core::enumerate::{ClassificationReport, InvariantChecks};
use ybe_core::{Analysis, CatalogRecord, FiniteBrace, Solution, ValidationReport};

#[derive(Debug, thiserror::Error)]
pub enum FormatError {
    #[error("{context}: line {line}, column {column}: {message}")]
    Json {
        context: String,
        line: usize,
        column: usize,
        message: String,
    },
    #[error("{context}: {source}")]
    Structure {
        context: String,
        source: ybe_core::Error,
    },
    #[error("{context}: {message}")]
    Invalid { context: String, message: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

fn json_error(context: &str, e: serde_json::Error) -> FormatError {
    FormatError::Json {
        context: context.to_string(),
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    }
}

/// `{"n": 3, "sigma": [[1,2,0], [1,2,0], [1,2,0]]}`
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolutionJson {
    pub n: usize,
    pub sigma: Vec<Vec<usize>>,
}

impl SolutionJson {
    pub fn from_solution(s: &Solution) -> Self {
        SolutionJson {
            n: s.n(),
            sigma: s.rows(),
        }
    }

    pub fn to_solution(&self, context: &str) -> Result<Solution, FormatError> {
        if self.sigma.len() != self.n {
            return Err(FormatError::Invalid {
                context: context.to_string(),
                message: format!("n is {} but sigma has {} rows", self.n, self.sigma.len()),
            });
        }
        if let Some(x) = self.sigma.iter().position(|row| row.len() != self.n) {
            return Err(FormatError::Invalid {
                context: context.to_string(),
                message: format!(
                    "sigma[{x}] has {} entries, expected {}",
                    self.sigma[x].len(),
                    self.n
                ),
            });
        }
        Solution::from_rows(self.sigma.clone()).map_err(|source| FormatError::Structure {
            context: context.to_string(),
            source,
        })
    }
}

/// Parses a solution document. `context` names the source in diagnostics.
pub fn parse_solution(text: &str, context: &str) -> Result<Solution, FormatError> {
    let doc: SolutionJson = serde_json::from_str(text).map_err(|e| json_error(context, e))?;
    doc.to_solution(context)
}

pub fn solution_to_json(s: &Solution) -> String {
    serde_json::to_string(&SolutionJson::from_solution(s)).expect("plain data serializes")
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationJson {
    pub valid: bool,
    pub involutive: bool,
    pub nondegenerate: bool,
    pub braid: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub involutive_counterexample: Option<[usize; 2]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub nondegenerate_counterexample: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub braid_counterexample: Option<[usize; 3]>,
}

impl From<&ValidationReport> for ValidationJson {
    fn from(r: &ValidationReport) -> Self {
        ValidationJson {
            valid: r.passes(),
            involutive: r.involutive,
            nondegenerate: r.nondegenerate,
            braid: r.braid,
            involutive_counterexample: r.involutive_counterexample.map(|(x, y)| [x, y]),
            nondegenerate_counterexample: r.nondegenerate_counterexample,
            braid_counterexample: r.braid_counterexample.map(|(x, y, z)| [x, y, z]),
        }
    }
}

/// One catalog line.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RecordJson {
    pub n: usize,
    pub sigma: Vec<Vec<usize>>,
    pub indecomposable: bool,
    pub irretractable: bool,
    pub primitive: bool,
    pub mpl: Option<usize>,
    pub group_order: usize,
    pub brace_trivial: bool,
}

impl From<&CatalogRecord> for RecordJson {
    fn from(r: &CatalogRecord) -> Self {
        RecordJson {
            n: r.n(),
            sigma: r.solution.rows(),
            indecomposable: r.indecomposable,
            irretractable: r.irretractable,
            primitive: r.primitive,
            mpl: r.mpl,
            group_order: r.group_order,
            brace_trivial: r.brace_trivial,
        }
    }
}

impl RecordJson {
    /// Rebuilds the record, rejecting tables that are not in canonical form.
    pub fn to_record(&self, context: &str) -> Result<CatalogRecord, FormatError> {
        let solution = SolutionJson {
            n: self.n,
            sigma: self.sigma.clone(),
        }
        .to_solution(context)?;
        let structure = |source| FormatError::Structure {
            context: context.to_string(),
            source,
        };
        if !solution.validate().passes() {
            return Err(structure(ybe_core::Error::InvalidSolution));
        }
        if solution.canonical_form().map_err(structure)? != solution {
            return Err(FormatError::Invalid {
                context: context.to_string(),
                message: "sigma table is not in canonical form".into(),
            });
        }
        Ok(CatalogRecord {
            solution,
            indecomposable: self.indecomposable,
            irretractable: self.irretractable,
            primitive: self.primitive,
            mpl: self.mpl,
            group_order: self.group_order,
            brace_trivial: self.brace_trivial,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChecksJson {
    pub lambda_equivariance: bool,
    pub brace_axiom: bool,
    pub additive_identities: bool,
    pub lambda_action: bool,
    pub socle_is_lambda_kernel: bool,
    pub socle_is_ideal: bool,
    pub sigma_classes_invariant: bool,
    pub group_solvable: bool,
    pub associated_solution_valid: bool,
    pub permutational_isomorphism: Option<bool>,
    pub all_pass: bool,
}

impl From<&InvariantChecks> for ChecksJson {
    fn from(c: &InvariantChecks) -> Self {
        ChecksJson {
            lambda_equivariance: c.lambda_equivariance,
            brace_axiom: c.brace_axiom,
            additive_identities: c.additive_identities,
            lambda_action: c.lambda_action,
            socle_is_lambda_kernel: c.socle_is_lambda_kernel,
            socle_is_ideal: c.socle_is_ideal,
            sigma_classes_invariant: c.sigma_classes_invariant,
            group_solvable: c.group_solvable,
            associated_solution_valid: c.associated_solution_valid,
            permutational_isomorphism: c.permutational_isomorphism,
            all_pass: c.all_pass(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnalysisJson {
    pub validation: ValidationJson,
    pub record: Option<RecordJson>,
    pub checks: Option<ChecksJson>,
}

impl From<&Analysis> for AnalysisJson {
    fn from(a: &Analysis) -> Self {
        AnalysisJson {
            validation: (&a.validation).into(),
            record: a.record.as_ref().map(Into::into),
            checks: a.checks.as_ref().map(Into::into),
        }
    }
}

/// First line of a catalog file.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CatalogHeader {
    pub tool: String,
    pub version: String,
    pub n: usize,
    pub classes: usize,
    pub allow_large: bool,
    pub budget_secs: Option<f64>,
    pub threads: usize,
    pub group_cap: usize,
    pub brace_cap: usize,
}

#[derive(Serialize, Deserialize)]
struct HeaderLine {
    header: CatalogHeader,
}

pub fn write_catalog<W: Write>(
    mut w: W,
    header: &CatalogHeader,
    records: &[CatalogRecord],
) -> Result<(), FormatError> {
    serde_json::to_writer(
        &mut w,
        &HeaderLine {
            header: header.clone(),
        },
    )
    .map_err(|e| json_error("catalog header", e))?;
    writeln!(w)?;
    for r in records {
        serde_json::to_writer(&mut w, &RecordJson::from(r))
            .map_err(|e| json_error("catalog record", e))?;
        writeln!(w)?;
    }
    w.flush()?;
    Ok(())
}

/// Reads a catalog written by [`write_catalog`]. Every record must match
/// the header's `n` and the record count must match `classes`.
pub fn read_catalog<R: BufRead>(r: R) -> Result<(CatalogHeader, Vec<CatalogRecord>), FormatError> {
    let mut lines = r.lines().enumerate();
    let header = match lines.next() {
        Some((_, line)) => {
            let line = line?;
            serde_json::from_str::<HeaderLine>(&line)
                .map_err(|e| json_error("catalog line 1", e))?
                .header
        }
        None => {
            return Err(FormatError::Invalid {
                context: "catalog".into(),
                message: "empty file".into(),
            })
        }
    };
    let mut records = Vec::new();
    for (i, line) in lines {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let context = format!("catalog line {}", i + 1);
        let rec: RecordJson = serde_json::from_str(&line).map_err(|e| json_error(&context, e))?;
        if rec.n != header.n {
            return Err(FormatError::Invalid {
                context,
                message: format!("record has n = {}, header has n = {}", rec.n, header.n),
            });
        }
        records.push(rec.to_record(&context)?);
    }
    if records.len() != header.classes {
        return Err(FormatError::Invalid {
            context: "catalog".into(),
            message: format!(
                "header announces {} classes, file has {}",
                header.classes,
                records.len()
            ),
        });
    }
    Ok((header, records))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BraceJson {
    pub order: usize,
    pub elements: Vec<Vec<usize>>,
    pub mul: Vec<Vec<usize>>,
    pub add: Vec<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda: Option<Vec<Vec<usize>>>,
}

impl BraceJson {
    pub fn from_brace(b: &FiniteBrace, with_lambda: bool) -> Self {
        let k = b.order();
        let table = |row: &dyn Fn(usize) -> Vec<usize>| (0..k).map(row).collect::<Vec<_>>();
        BraceJson {
            order: k,
            elements: b.elements().iter().map(|p| p.images().to_vec()).collect(),
            mul: table(&|a| b.mul_row(a).collect()),
            add: table(&|a| b.add_row(a).collect()),
            lambda: with_lambda.then(|| table(&|a| b.lambda_row(a).collect())),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassificationRowJson {
    pub n: usize,
    pub classes: usize,
    pub primitive_count: usize,
    pub primitive: Vec<SolutionJson>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassificationJson {
    pub shape_check: bool,
    pub rows: Vec<ClassificationRowJson>,
}

impl From<&ClassificationReport> for ClassificationJson {
    fn from(r: &ClassificationReport) -> Self {
        ClassificationJson {
            shape_check: true,
            rows: r
                .rows
                .iter()
                .map(|row| ClassificationRowJson {
                    n: row.n,
                    classes: row.classes,
                    primitive_count: row.primitive.len(),
                    primitive: row
                        .primitive
                        .iter()
                        .map(SolutionJson::from_solution)
                        .collect(),
                })
                .collect(),
        }
    }
}

#[derive(Serialize)]
struct CsvRow<'a> {
    n: usize,
    classes: usize,
    primitive_count: usize,
    representatives: &'a str,
}

/// One row per size; representatives are `;`-separated solution JSON.
pub fn write_classification_csv<W: Write>(
    w: W,
    report: &ClassificationReport,
) -> Result<(), FormatError> {
    let mut out = csv::Writer::from_writer(w);
    for row in &report.rows {
        let reps: Vec<String> = row.primitive.iter().map(solution_to_json).collect();
        out.serialize(CsvRow {
            n: row.n,
            classes: row.classes,
            primitive_count: row.primitive.len(),
            representatives: &reps.join(";"),
        })?;
    }
    out.flush()?;
    Ok(())
}
