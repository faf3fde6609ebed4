//! JSON documents for distributions, statistics and constraints; CSV samples.
//!
//! Distribution documents look like
//!
//! ```json
//! { "axes": [ { "name": "x", "labels": ["0", "1"] } ], "probs": [0.5, 0.5] }
//! ```
//!
//! with `probs` flattened row-major. Probabilities are written as shortest
//! round-trip decimals, so a document read back reproduces every value bit for bit.

use std::collections::HashMap;
use std::io::Read;

use serde::ser::SerializeMap;
use serde::{Deserialize, Serialize, Serializer};
use serde_json::value::RawValue;
use thiserror::Error;

use crate::dist::{Axis, JointDistribution};
use crate::error::Error;
use crate::maxent::MomentConstraint;
use crate::partition::Partition;
use crate::statistic::Statistic;

#[derive(Debug, Error)]
pub enum IngestError {
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("{source} (at byte {offset})")]
    Invalid {
        offset: usize,
        #[source]
        source: Error,
    },

    #[error(transparent)]
    Core(#[from] Error),

    #[error("row {row}, column `{column}`: unknown label `{label}`")]
    UnknownLabel {
        row: usize,
        column: String,
        label: String,
    },

    #[error("sample table has no rows")]
    EmptyTable,

    #[error("csv: {0}")]
    Csv(String),
}

impl IngestError {
    /// The validation error behind this failure, if it is one.
    pub fn core(&self) -> Option<&Error> {
        match self {
            IngestError::Invalid { source, .. } | IngestError::Core(source) => Some(source),
            _ => None,
        }
    }
}

impl From<serde_json::Error> for IngestError {
    fn from(e: serde_json::Error) -> Self {
        IngestError::Parse {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        }
    }
}

impl From<csv::Error> for IngestError {
    fn from(e: csv::Error) -> Self {
        IngestError::Csv(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, IngestError>;

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct AxisDoc {
    name: String,
    labels: Vec<String>,
}

impl From<&Axis> for AxisDoc {
    fn from(a: &Axis) -> Self {
        AxisDoc {
            name: a.name().to_string(),
            labels: a.labels().to_vec(),
        }
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct DistributionIn<'a> {
    #[serde(borrow)]
    axes: &'a RawValue,
    #[serde(borrow)]
    probs: &'a RawValue,
}

#[derive(Serialize)]
struct DistributionOut<'a> {
    axes: Vec<AxisDoc>,
    probs: &'a [f64],
}

fn offset_of(text: &str, raw: &RawValue) -> usize {
    raw.get().as_ptr() as usize - text.as_ptr() as usize
}

fn build_axes(docs: Vec<AxisDoc>) -> std::result::Result<Vec<Axis>, Error> {
    docs.into_iter()
        .map(|a| Axis::new(a.name, a.labels))
        .collect()
}

/// Parses and validates a distribution document. Validation failures carry
/// the byte offset of the offending field.
pub fn parse_distribution(text: &str) -> Result<JointDistribution> {
    let doc: DistributionIn = serde_json::from_str(text)?;
    let axes_offset = offset_of(text, doc.axes);
    let probs_offset = offset_of(text, doc.probs);
    let axes: Vec<AxisDoc> = serde_json::from_str(doc.axes.get())?;
    let probs: Vec<f64> = serde_json::from_str(doc.probs.get())?;
    let axes = build_axes(axes).map_err(|source| IngestError::Invalid {
        offset: axes_offset,
        source,
    })?;
    JointDistribution::new(axes, probs).map_err(|source| {
        let offset = match source {
            Error::AxisNameCollision(_) => axes_offset,
            _ => probs_offset,
        };
        IngestError::Invalid { offset, source }
    })
}

pub fn serialize_distribution(dist: &JointDistribution) -> String {
    let doc = DistributionOut {
        axes: dist.axes().iter().map(AxisDoc::from).collect(),
        probs: dist.probs(),
    };
    let mut out = serde_json::to_string_pretty(&doc).expect("distribution serializes");
    out.push('\n');
    out
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct StatisticIn {
    block: Vec<usize>,
    output: AxisDoc,
    map: HashMap<String, String>,
}

struct OrderedMap<'a>(&'a [(String, String)]);

impl Serialize for OrderedMap<'_> {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(Some(self.0.len()))?;
        for (k, v) in self.0 {
            map.serialize_entry(k, v)?;
        }
        map.end()
    }
}

#[derive(Serialize)]
struct StatisticOut<'a> {
    block: &'a [usize],
    output: AxisDoc,
    map: OrderedMap<'a>,
}

/// Parses a statistic document against the axes it will act on. Map keys
/// are the block's input labels joined by commas, in block order.
pub fn parse_statistic(text: &str, axes: &[Axis]) -> Result<Statistic> {
    let doc: StatisticIn = serde_json::from_str(text)?;
    let output = Axis::new(doc.output.name, doc.output.labels)?;
    Ok(Statistic::from_labels(axes, doc.block, output, &doc.map)?)
}

/// Writes a statistic with map entries in row-major input order.
pub fn serialize_statistic(stat: &Statistic, axes: &[Axis]) -> String {
    let pairs = stat.label_map(axes);
    let doc = StatisticOut {
        block: stat.block(),
        output: AxisDoc::from(stat.output()),
        map: OrderedMap(&pairs),
    };
    let mut out = serde_json::to_string_pretty(&doc).expect("statistic serializes");
    out.push('\n');
    out
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConstraintDoc {
    values: Vec<f64>,
    target: f64,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum ConstraintsIn {
    Many(Vec<ConstraintDoc>),
    One(ConstraintDoc),
}

/// Reads a constraint document, or a JSON array of them.
pub fn parse_constraints(text: &str) -> Result<Vec<MomentConstraint>> {
    let docs = match serde_json::from_str(text)? {
        ConstraintsIn::Many(v) => v,
        ConstraintsIn::One(c) => vec![c],
    };
    Ok(docs
        .into_iter()
        .map(|c| MomentConstraint::new(c.values, c.target))
        .collect::<std::result::Result<_, _>>()?)
}

pub fn serialize_constraints(constraints: &[MomentConstraint]) -> String {
    let docs: Vec<ConstraintDoc> = constraints
        .iter()
        .map(|c| ConstraintDoc {
            values: c.values().to_vec(),
            target: c.target(),
        })
        .collect();
    let mut out = serde_json::to_string_pretty(&docs).expect("constraints serialize");
    out.push('\n');
    out
}

#[derive(Deserialize)]
#[serde(untagged)]
enum AxesIn {
    List(Vec<AxisDoc>),
    Wrapped { axes: Vec<AxisDoc> },
}

/// Reads axis declarations: a JSON array of `{"name", "labels"}` objects or
/// an object with an `"axes"` array.
pub fn parse_axes(text: &str) -> Result<Vec<Axis>> {
    let docs = match serde_json::from_str(text)? {
        AxesIn::List(v) | AxesIn::Wrapped { axes: v } => v,
    };
    Ok(build_axes(docs)?)
}

/// Partition text grammar `"0,1|2|3"`.
pub fn parse_partition(text: &str, axis_count: usize) -> std::result::Result<Partition, Error> {
    Partition::parse(text, axis_count)
}

/// Raw sample rows under named columns; labels are kept as strings.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SampleTable {
    pub column_names: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl SampleTable {
    /// Reads an RFC 4180 CSV whose first row names the columns.
    pub fn from_csv<R: Read>(reader: R) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new()
            .has_headers(true)
            .from_reader(reader);
        let column_names = rdr.headers()?.iter().map(str::to_string).collect();
        let rows = rdr
            .records()
            .map(|r| r.map(|rec| rec.iter().map(str::to_string).collect()))
            .collect::<std::result::Result<Vec<Vec<String>>, _>>()?;
        Ok(SampleTable { column_names, rows })
    }
}

/// Plug-in estimate `(count + s) / (total + s * cells)` over the declared axes.
///
/// Columns are matched to axes by name; their order in the table is free.
pub fn estimate_from_samples(
    table: &SampleTable,
    axes: &[Axis],
    smoothing: f64,
) -> Result<JointDistribution> {
    if !(smoothing >= 0.0 && smoothing.is_finite()) {
        return Err(Error::OutOfRange(format!(
            "smoothing {smoothing} must be a nonnegative number"
        ))
        .into());
    }
    if table.rows.is_empty() {
        return Err(IngestError::EmptyTable);
    }
    let columns: Vec<usize> = axes
        .iter()
        .map(|a| {
            table
                .column_names
                .iter()
                .position(|c| c == a.name())
                .ok_or_else(|| IngestError::Csv(format!("no column named `{}`", a.name())))
        })
        .collect::<Result<_>>()?;
    if table.column_names.len() != axes.len() {
        return Err(IngestError::Csv(format!(
            "{} columns for {} declared axes",
            table.column_names.len(),
            axes.len()
        )));
    }
    let lookup: Vec<HashMap<&str, usize>> = axes
        .iter()
        .map(|a| {
            a.labels()
                .iter()
                .enumerate()
                .map(|(i, l)| (l.as_str(), i))
                .collect()
        })
        .collect();
    let cards: Vec<usize> = axes.iter().map(Axis::cardinality).collect();
    let cells: usize = cards.iter().product();
    let mut counts = vec![0u64; cells];
    for (r, row) in table.rows.iter().enumerate() {
        if row.len() != table.column_names.len() {
            return Err(IngestError::Csv(format!(
                "row {} has {} fields",
                r + 1,
                row.len()
            )));
        }
        let mut cell = 0;
        for (k, &col) in columns.iter().enumerate() {
            let label = &row[col];
            let pos = *lookup[k]
                .get(label.as_str())
                .ok_or_else(|| IngestError::UnknownLabel {
                    row: r + 1,
                    column: axes[k].name().to_string(),
                    label: label.clone(),
                })?;
            cell = cell * cards[k] + pos;
        }
        counts[cell] += 1;
    }
    let denom = table.rows.len() as f64 + smoothing * cells as f64;
    let probs = counts
        .iter()
        .map(|&c| (c as f64 + smoothing) / denom)
        .collect();
    Ok(JointDistribution::new(axes.to_vec(), probs)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    const TABLE: &str = r#"{"axes":[{"name":"x","labels":["0","1"]},{"name":"y","labels":["0","1"]}],"probs":[0.4,0.1,0.1,0.4]}"#;

    #[test]
    fn parse_examples() {
        let one = parse_distribution(r#"{"axes":[{"name":"u","labels":["only"]}],"probs":[1.0]}"#)
            .unwrap();
        assert_eq!(one.probs(), &[1.0]);
        let t = parse_distribution(TABLE).unwrap();
        let axes = vec![
            Axis::indexed("x", 2).unwrap(),
            Axis::indexed("y", 2).unwrap(),
        ];
        assert_eq!(
            t,
            JointDistribution::new(axes, vec![0.4, 0.1, 0.1, 0.4]).unwrap()
        );
    }

    #[test]
    fn shape_mismatch_carries_offset() {
        let text = r#"{"axes":[{"name":"x","labels":["0","1"]}], "probs":[1.0]}"#;
        match parse_distribution(text) {
            Err(IngestError::Invalid {
                offset,
                source:
                    Error::ShapeMismatch {
                        expected: 2,
                        found: 1,
                    },
            }) => {
                assert_eq!(&text[offset..offset + 5], "[1.0]");
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn malformed_documents() {
        assert!(matches!(
            parse_distribution("{"),
            Err(IngestError::Parse { .. })
        ));
        assert!(matches!(
            parse_distribution(r#"{"axes":[],"probs":[1.0],"extra":1}"#),
            Err(IngestError::Parse { .. })
        ));
        assert!(matches!(
            parse_distribution(r#"{"axes":[{"name":"x","labels":["a","a"]}],"probs":[0.5,0.5]}"#),
            Err(IngestError::Invalid {
                source: Error::DuplicateLabel { .. },
                ..
            })
        ));
    }

    #[test]
    fn serialize_round_trip() {
        let t = parse_distribution(TABLE).unwrap();
        let text = serialize_distribution(&t);
        assert_eq!(parse_distribution(&text).unwrap(), t);
        assert!(text.contains("0.4"));
    }

    #[test]
    fn statistic_documents() {
        let t = parse_distribution(TABLE).unwrap();
        let text = r#"{"block":[0,1],"output":{"name":"f","labels":["even","odd"]},
            "map":{"0,0":"even","0,1":"odd","1,0":"odd","1,1":"even"}}"#;
        let s = parse_statistic(text, t.axes()).unwrap();
        assert_eq!(s.table(), &[0, 1, 1, 0]);
        let again = parse_statistic(&serialize_statistic(&s, t.axes()), t.axes()).unwrap();
        assert_eq!(again, s);
        let missing = r#"{"block":[0],"output":{"name":"f","labels":["a"]},"map":{"0":"a"}}"#;
        assert!(matches!(
            parse_statistic(missing, t.axes()),
            Err(IngestError::Core(Error::IncompleteMap(_)))
        ));
    }

    #[test]
    fn constraint_documents() {
        let one = parse_constraints(r#"{"values":[0,1],"target":0.7}"#).unwrap();
        assert_eq!(one.len(), 1);
        assert_eq!(one[0].target(), 0.7);
        let many = parse_constraints(&serialize_constraints(&one)).unwrap();
        assert_eq!(many, one);
        assert!(parse_constraints("[]").unwrap().is_empty());
    }

    #[test]
    fn axes_documents() {
        let a = parse_axes(r#"[{"name":"x","labels":["0","1"]}]"#).unwrap();
        let b = parse_axes(r#"{"axes":[{"name":"x","labels":["0","1"]}]}"#).unwrap();
        assert_eq!(a, b);
    }

    fn axes2() -> Vec<Axis> {
        vec![
            Axis::indexed("x", 2).unwrap(),
            Axis::indexed("y", 2).unwrap(),
        ]
    }

    #[test]
    fn estimation_examples() {
        let uniform = SampleTable::from_csv("x,y\n0,0\n0,1\n1,0\n1,1\n".as_bytes()).unwrap();
        assert_eq!(
            estimate_from_samples(&uniform, &axes2(), 0.0)
                .unwrap()
                .probs(),
            &[0.25; 4]
        );

        let mut csv = String::from("y,x\n");
        for (x, y, n) in [(0, 0, 8), (1, 1, 8), (0, 1, 2), (1, 0, 2)] {
            for _ in 0..n {
                csv.push_str(&format!("{y},{x}\n"));
            }
        }
        let t = SampleTable::from_csv(csv.as_bytes()).unwrap();
        assert_eq!(
            estimate_from_samples(&t, &axes2(), 0.0).unwrap().probs(),
            &[0.4, 0.1, 0.1, 0.4]
        );
        let smoothed = estimate_from_samples(&t, &axes2(), 1.0).unwrap();
        assert_eq!(smoothed.probs()[0], 9.0 / 24.0);

        let empty = SampleTable::from_csv("x,y\n".as_bytes()).unwrap();
        assert!(matches!(
            estimate_from_samples(&empty, &axes2(), 0.0),
            Err(IngestError::EmptyTable)
        ));
        let unknown = SampleTable::from_csv("x,y\n0,2\n".as_bytes()).unwrap();
        assert!(matches!(
            estimate_from_samples(&unknown, &axes2(), 0.0),
            Err(IngestError::UnknownLabel { row: 1, .. })
        ));
    }
}
