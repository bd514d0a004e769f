//! XES subset reader and writer.
//!
//! Reads `<trace>` and `<event>` elements, the trace-level
//! `<string key="concept:name">` case identifier, and the event-level
//! `concept:name` / `time:timestamp` attributes. Everything else
//! (extensions, globals, classifiers, other attributes) is ignored.

use quick_xml::events::{BytesDecl, BytesStart, Event as XmlEvent};
use quick_xml::{Reader, Writer};

use crate::error::{Error, Result};
use crate::log::{EventLog, LogFormat, SourceMeta, Timestamp};

#[derive(Debug, Default)]
struct RawEvent {
    activity: Option<String>,
    timestamp: Option<String>,
    line: usize,
}

#[derive(Debug, Default)]
struct RawTrace {
    case_id: Option<String>,
    events: Vec<RawEvent>,
    line: usize,
}

/// Which element the parser is currently inside.
#[derive(Debug, Clone, Copy, PartialEq)]
enum Ctx {
    Trace,
    Event,
    Other,
}

fn line_at(bytes: &[u8], offset: usize) -> usize {
    let end = offset.min(bytes.len());
    1 + bytes[..end].iter().filter(|&&b| b == b'\n').count()
}

fn attr_of(start: &BytesStart, name: &[u8]) -> Option<String> {
    for attr in start.attributes().flatten() {
        if attr.key.as_ref() == name {
            return attr.unescape_value().ok().map(|v| v.into_owned());
        }
    }
    None
}

/// Parse an XES document from memory.
pub fn parse_xes(bytes: &[u8]) -> Result<EventLog> {
    let mut reader = Reader::from_reader(bytes);
    reader.config_mut().trim_text(true);

    let mut stack: Vec<Ctx> = Vec::new();
    let mut traces: Vec<RawTrace> = Vec::new();

    loop {
        match reader.read_event() {
            Err(e) => {
                return Err(Error::XmlParse {
                    line: line_at(bytes, reader.buffer_position() as usize),
                    message: e.to_string(),
                })
            }
            Ok(XmlEvent::Eof) => break,
            Ok(XmlEvent::Start(start)) => {
                let line = line_at(bytes, reader.buffer_position() as usize);
                let ctx = enter(&mut traces, &stack, &start, line);
                stack.push(ctx);
            }
            Ok(XmlEvent::Empty(start)) => {
                let line = line_at(bytes, reader.buffer_position() as usize);
                enter(&mut traces, &stack, &start, line);
            }
            Ok(XmlEvent::End(_)) => {
                stack.pop();
            }
            Ok(_) => {}
        }
    }

    let mut records = Vec::new();
    for trace in traces {
        let case_id = trace.case_id.ok_or(Error::XesTraceWithoutId {
            line: trace.line,
        })?;
        for event in trace.events {
            let activity = event.activity.ok_or_else(|| Error::XesEventAttribute {
                case: case_id.clone(),
                attribute: "concept:name",
            })?;
            let raw_ts = event.timestamp.ok_or_else(|| Error::XesEventAttribute {
                case: case_id.clone(),
                attribute: "time:timestamp",
            })?;
            let timestamp = Timestamp::parse(&raw_ts).ok_or_else(|| Error::Timestamp {
                case: case_id.clone(),
                value: raw_ts.clone(),
                row: event.line,
            })?;
            if activity.is_empty() {
                return Err(Error::EmptyActivity {
                    case: case_id.clone(),
                    row: event.line,
                });
            }
            records.push((case_id.clone(), activity, timestamp));
        }
    }

    Ok(EventLog::from_records(
        records,
        SourceMeta {
            format: LogFormat::Xes,
            columns: Default::default(),
        },
    ))
}

/// Handle one opening (or empty) element; returns the context it opens.
fn enter(
    traces: &mut Vec<RawTrace>,
    stack: &[Ctx],
    start: &BytesStart,
    line: usize,
) -> Ctx {
    let here = stack.last().copied();
    match start.name().as_ref() {
        b"trace" if here.is_none() || here == Some(Ctx::Other) => {
            traces.push(RawTrace {
                line,
                ..Default::default()
            });
            Ctx::Trace
        }
        b"event" if here == Some(Ctx::Trace) => {
            if let Some(trace) = traces.last_mut() {
                trace.events.push(RawEvent {
                    line,
                    ..Default::default()
                });
            }
            Ctx::Event
        }
        b"string" | b"date" => {
            let key = attr_of(start, b"key");
            let value = attr_of(start, b"value");
            match (here, key.as_deref()) {
                (Some(Ctx::Trace), Some("concept:name")) => {
                    if let Some(trace) = traces.last_mut() {
                        trace.case_id = value;
                    }
                }
                (Some(Ctx::Event), Some("concept:name")) => {
                    if let Some(event) = traces.last_mut().and_then(|t| t.events.last_mut()) {
                        event.activity = value;
                    }
                }
                (Some(Ctx::Event), Some("time:timestamp")) => {
                    if let Some(event) = traces.last_mut().and_then(|t| t.events.last_mut()) {
                        event.timestamp = value;
                    }
                }
                _ => {}
            }
            Ctx::Other
        }
        _ => Ctx::Other,
    }
}

/// Serialize a log as XES.
pub fn to_xes_bytes(log: &EventLog) -> Result<Vec<u8>> {
    let mut writer = Writer::new_with_indent(Vec::new(), b' ', 2);
    writer
        .write_event(XmlEvent::Decl(BytesDecl::new("1.0", Some("UTF-8"), None)))
        .map_err(io_err)?;

    let mut root = BytesStart::new("log");
    root.push_attribute(("xes.version", "1.0"));
    root.push_attribute(("xes.features", ""));
    writer.write_event(XmlEvent::Start(root)).map_err(io_err)?;

    for (name, prefix, uri) in [
        ("Concept", "concept", "http://www.xes-standard.org/concept.xesext"),
        ("Time", "time", "http://www.xes-standard.org/time.xesext"),
    ] {
        let mut ext = BytesStart::new("extension");
        ext.push_attribute(("name", name));
        ext.push_attribute(("prefix", prefix));
        ext.push_attribute(("uri", uri));
        writer.write_event(XmlEvent::Empty(ext)).map_err(io_err)?;
    }

    for trace in &log.traces {
        writer
            .write_event(XmlEvent::Start(BytesStart::new("trace")))
            .map_err(io_err)?;
        write_attr(&mut writer, "string", "concept:name", &trace.case_id)?;
        for event in &trace.events {
            writer
                .write_event(XmlEvent::Start(BytesStart::new("event")))
                .map_err(io_err)?;
            write_attr(&mut writer, "string", "concept:name", &event.activity)?;
            write_attr(
                &mut writer,
                "date",
                "time:timestamp",
                &event.timestamp.to_xes_string(),
            )?;
            writer
                .write_event(XmlEvent::End(BytesStart::new("event").to_end()))
                .map_err(io_err)?;
        }
        writer
            .write_event(XmlEvent::End(BytesStart::new("trace").to_end()))
            .map_err(io_err)?;
    }

    writer
        .write_event(XmlEvent::End(BytesStart::new("log").to_end()))
        .map_err(io_err)?;
    let mut bytes = writer.into_inner();
    bytes.push(b'\n');
    Ok(bytes)
}

fn write_attr(
    writer: &mut Writer<Vec<u8>>,
    tag: &str,
    key: &str,
    value: &str,
) -> Result<()> {
    let mut el = BytesStart::new(tag);
    el.push_attribute(("key", key));
    el.push_attribute(("value", value));
    writer.write_event(XmlEvent::Empty(el)).map_err(io_err)?;
    Ok(())
}

fn io_err(e: std::io::Error) -> Error {
    Error::Io(e)
}
