//! CSV reader and writer (RFC 4180, header row required).

use crate::error::{Error, Result};
use crate::log::{ColumnMapping, EventLog, LogFormat, SourceMeta, Timestamp};

/// Parse a CSV document using `mapping` to locate the case, activity, and
/// timestamp columns. Row numbers in errors count the header as row 1.
pub fn parse_csv(bytes: &[u8], mapping: &ColumnMapping) -> Result<EventLog> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(false)
        .from_reader(bytes);

    let headers = reader
        .headers()
        .map_err(|e| Error::CsvRow {
            row: 1,
            message: e.to_string(),
        })?
        .clone();

    let col = |name: &str| -> Result<usize> {
        headers
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| Error::CsvColumn { name: name.into() })
    };
    let case_col = col(&mapping.case)?;
    let activity_col = col(&mapping.activity)?;
    let timestamp_col = col(&mapping.timestamp)?;

    let mut records = Vec::new();
    for (i, row) in reader.records().enumerate() {
        let row_no = i + 2;
        let row = row.map_err(|e| Error::CsvRow {
            row: row_no,
            message: e.to_string(),
        })?;
        let field = |idx: usize| -> Result<&str> {
            row.get(idx).ok_or(Error::CsvRow {
                row: row_no,
                message: format!("missing field {idx}"),
            })
        };
        let case_id = field(case_col)?.to_string();
        let activity = field(activity_col)?.to_string();
        if activity.is_empty() {
            return Err(Error::EmptyActivity {
                case: case_id,
                row: row_no,
            });
        }
        let raw_ts = field(timestamp_col)?;
        let timestamp = Timestamp::parse(raw_ts).ok_or_else(|| Error::Timestamp {
            case: case_id.clone(),
            value: raw_ts.to_string(),
            row: row_no,
        })?;
        records.push((case_id, activity, timestamp));
    }

    Ok(EventLog::from_records(
        records,
        SourceMeta {
            format: LogFormat::Csv,
            columns: mapping.clone(),
        },
    ))
}

/// Serialize a log as CSV with the given column names.
pub fn to_csv_bytes(log: &EventLog, mapping: &ColumnMapping) -> Result<Vec<u8>> {
    let mut writer = csv::Writer::from_writer(Vec::new());
    writer
        .write_record([&mapping.case, &mapping.activity, &mapping.timestamp])
        .map_err(csv_io_err)?;
    for trace in &log.traces {
        for event in &trace.events {
            writer
                .write_record([
                    trace.case_id.as_str(),
                    event.activity.as_str(),
                    &event.timestamp.to_csv_string(),
                ])
                .map_err(csv_io_err)?;
        }
    }
    writer
        .into_inner()
        .map_err(|e| Error::Io(std::io::Error::other(e.to_string())))
}

fn csv_io_err(e: csv::Error) -> Error {
    Error::Io(std::io::Error::other(e.to_string()))
}
