//! Canonical CSV edge list: `source,target,kind,tweet_id,timestamp`.
//!
//! With a header row the columns may appear in any order and extra columns
//! are ignored. Without one the five columns are positional. Original tweets
//! are self-loops with kind `tweet`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::io::{Read, Write};

use chrono::{DateTime, NaiveDate, NaiveDateTime, SecondsFormat, Utc};
use thiserror::Error;

use crate::graph::{
    GraphError, Interaction, InteractionFault, InteractionKind, TemporalGraph, UserId,
};

pub const CSV_HEADER: [&str; 5] = ["source", "target", "kind", "tweet_id", "timestamp"];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CsvOptions {
    pub delimiter: u8,
    pub header: bool,
    /// Skip bad rows with a diagnostic instead of failing.
    pub lenient: bool,
}

impl Default for CsvOptions {
    fn default() -> Self {
        CsvOptions {
            delimiter: b',',
            header: true,
            lenient: true,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Severity {
    /// The row was skipped.
    Error,
    /// The row was accepted with an assumption.
    Warning,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagnostic {
    pub line: usize,
    pub severity: Severity,
    pub message: String,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let level = match self.severity {
            Severity::Error => "error",
            Severity::Warning => "warning",
        };
        write!(f, "line {}: {level}: {}", self.line, self.message)
    }
}

#[derive(Debug, Error)]
pub enum IngestError {
    #[error("cannot read input: {0}")]
    Io(#[from] std::io::Error),
    #[error("malformed CSV: {0}")]
    Csv(#[from] csv::Error),
    #[error("header lacks required column {0:?}")]
    MissingColumn(&'static str),
    #[error("line {line}: {reason}")]
    Row { line: usize, reason: String },
}

#[derive(Debug, Clone)]
pub struct ParseOutcome {
    pub graph: TemporalGraph,
    pub diagnostics: Vec<Diagnostic>,
    /// Normalized handles reached from more than one raw spelling.
    pub collisions: BTreeMap<UserId, BTreeSet<String>>,
    pub data_rows: usize,
}

impl ParseOutcome {
    /// Rows skipped in lenient mode.
    pub fn rejected(&self) -> usize {
        self.diagnostics
            .iter()
            .filter(|d| d.severity == Severity::Error)
            .count()
    }
}

struct Columns([usize; 5]);

impl Columns {
    fn from_header(header: &csv::StringRecord) -> Result<Self, IngestError> {
        let mut idx = [0; 5];
        for (slot, name) in idx.iter_mut().zip(CSV_HEADER) {
            *slot = header
                .iter()
                .position(|h| h.trim().eq_ignore_ascii_case(name))
                .ok_or(IngestError::MissingColumn(name))?;
        }
        Ok(Columns(idx))
    }

    fn get<'r>(&self, record: &'r csv::StringRecord, col: usize) -> Option<&'r str> {
        record.get(self.0[col]).map(str::trim)
    }
}

struct Row {
    interaction: Interaction,
    spellings: [(String, UserId); 2],
    warning: Option<String>,
}

fn parse_timestamp(raw: &str) -> Result<(DateTime<Utc>, bool), String> {
    if let Ok(t) = DateTime::parse_from_rfc3339(raw) {
        return Ok((t.with_timezone(&Utc), false));
    }
    for fmt in [
        "%Y-%m-%dT%H:%M:%S%.f",
        "%Y-%m-%d %H:%M:%S%.f",
        "%Y-%m-%dT%H:%M",
        "%Y-%m-%d %H:%M",
    ] {
        if let Ok(t) = NaiveDateTime::parse_from_str(raw, fmt) {
            return Ok((t.and_utc(), true));
        }
    }
    if let Ok(d) = NaiveDate::parse_from_str(raw, "%Y-%m-%d") {
        return Ok((d.and_hms_opt(0, 0, 0).unwrap().and_utc(), true));
    }
    Err(format!("unparseable timestamp {raw:?}"))
}

fn parse_row(cols: &Columns, record: &csv::StringRecord, strict: bool) -> Result<Row, String> {
    let field = |i: usize| cols.get(record, i).unwrap_or("");
    let user = |i: usize| UserId::new(field(i)).map_err(|_| format!("empty {}", CSV_HEADER[i]));
    let source = user(0)?;
    let target = user(1)?;
    let kind: InteractionKind = field(2)
        .parse()
        .map_err(|_| format!("unknown kind {:?}", field(2)))?;
    let tweet_id = Some(field(3).to_string()).filter(|s| !s.is_empty());
    let (timestamp, naive) = parse_timestamp(field(4))?;
    if strict && kind == InteractionKind::Retweet && tweet_id.is_none() {
        return Err(InteractionFault::RetweetWithoutTweetId.to_string());
    }
    let spellings = [
        (field(0).to_string(), source.clone()),
        (field(1).to_string(), target.clone()),
    ];
    let interaction =
        Interaction::new(source, target, kind, tweet_id, timestamp).map_err(|e| match e {
            GraphError::InvalidInteraction { fault, .. } => fault.to_string(),
            other => other.to_string(),
        })?;
    Ok(Row {
        interaction,
        spellings,
        warning: naive.then(|| "timestamp has no timezone; interpreted as UTC".to_string()),
    })
}

/// Reads an edge list. In strict mode the first bad row aborts with its line
/// number and retweets must carry a tweet id; in lenient mode bad rows are
/// skipped and reported. Identical rows are all kept.
pub fn parse_csv<R: Read>(input: R, options: &CsvOptions) -> Result<ParseOutcome, IngestError> {
    let mut reader = csv::ReaderBuilder::new()
        .delimiter(options.delimiter)
        .has_headers(options.header)
        .flexible(true)
        .from_reader(input);
    let cols = if options.header {
        Columns::from_header(reader.headers()?)?
    } else {
        Columns([0, 1, 2, 3, 4])
    };
    let strict = !options.lenient;

    let mut accepted = Vec::new();
    let mut diagnostics = Vec::new();
    let mut spellings: BTreeMap<UserId, BTreeSet<String>> = BTreeMap::new();
    let mut data_rows = 0;
    for record in reader.records() {
        let record = record?;
        data_rows += 1;
        let line = record.position().map_or(data_rows, |p| p.line() as usize);
        match parse_row(&cols, &record, strict) {
            Ok(row) => {
                if let Some(message) = row.warning {
                    diagnostics.push(Diagnostic {
                        line,
                        severity: Severity::Warning,
                        message,
                    });
                }
                for (raw, id) in row.spellings {
                    spellings.entry(id).or_default().insert(raw);
                }
                accepted.push(row.interaction);
            }
            Err(reason) if strict => {
                return Err(IngestError::Row { line, reason });
            }
            Err(message) => diagnostics.push(Diagnostic {
                line,
                severity: Severity::Error,
                message,
            }),
        }
    }

    let mut graph = if strict {
        TemporalGraph::strict()
    } else {
        TemporalGraph::new()
    };
    graph
        .extend(accepted)
        .expect("rows were validated individually");
    let collisions = spellings
        .into_iter()
        .filter(|(_, raw)| raw.len() > 1)
        .collect();
    Ok(ParseOutcome {
        graph,
        diagnostics,
        collisions,
        data_rows,
    })
}

/// Writes the graph in canonical form, in graph order.
pub fn write_csv<W: Write>(g: &TemporalGraph, out: W) -> Result<(), IngestError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER)?;
    for i in g.interactions() {
        w.write_record([
            i.source().as_str(),
            i.target().as_str(),
            i.kind().as_str(),
            i.tweet_id().unwrap_or(""),
            &i.timestamp().to_rfc3339_opts(SecondsFormat::Secs, true),
        ])?;
    }
    w.flush()?;
    Ok(())
}
