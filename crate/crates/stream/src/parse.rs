//! The line-oriented stream format.
//!
//! ```text
//! # comment
//! + <u> <label_u> <v> <label_v> <label_e>
//! - <u> <v>
//! ```

use std::io::BufRead;

use evofreq_core::StreamEvent;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("line {line}, column {column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

#[derive(Debug, thiserror::Error)]
pub enum ReadError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("reading stream: {0}")]
    Io(#[from] std::io::Error),
}

/// Parses one line. Blank and `#` lines give `Ok(None)`. `line_no` is only
/// used in errors; `seq` becomes the event index.
pub fn parse_event(line: &str, line_no: usize, seq: u64) -> Result<Option<StreamEvent>, ParseError> {
    let err = |column: usize, message: String| ParseError {
        line: line_no,
        column,
        message,
    };
    let trimmed = line.trim_start();
    if trimmed.is_empty() || trimmed.starts_with('#') {
        return Ok(None);
    }
    let tokens: Vec<(usize, &str)> = tokens_with_columns(line);
    let (op_col, op) = tokens[0];
    let arity = match op {
        "+" => 5,
        "-" => 2,
        _ => return Err(err(op_col, format!("expected '+' or '-', found '{op}'"))),
    };
    let fields = &tokens[1..];
    if fields.len() < arity {
        let column = line.trim_end().chars().count() + 1;
        return Err(err(column, format!("expected {arity} fields after '{op}', found {}", fields.len())));
    }
    if let Some(&(col, extra)) = fields.get(arity) {
        return Err(err(col, format!("unexpected trailing field '{extra}'")));
    }
    let id = |i: usize| -> Result<u64, ParseError> {
        let (col, tok) = fields[i];
        tok.parse::<u64>()
            .map_err(|_| err(col, format!("'{tok}' is not an unsigned integer id")))
    };
    let label = |i: usize| -> Result<u32, ParseError> {
        let (col, tok) = fields[i];
        tok.parse::<u32>()
            .map_err(|_| err(col, format!("'{tok}' is not an unsigned integer label")))
    };
    let event = if op == "+" {
        StreamEvent::add(seq, id(0)?, label(1)?, id(2)?, label(3)?, label(4)?)
    } else {
        StreamEvent::delete(seq, id(0)?, id(1)?)
    };
    if event.u == event.v {
        let col = if op == "+" { fields[2].0 } else { fields[1].0 };
        return Err(err(col, format!("self-loop on vertex {}", event.u)));
    }
    Ok(Some(event))
}

/// Whitespace-separated tokens with their 1-based character columns.
fn tokens_with_columns(line: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start: Option<(usize, usize)> = None;
    for (col, (byte, ch)) in line.char_indices().enumerate() {
        match (ch.is_whitespace(), start) {
            (false, None) => start = Some((col + 1, byte)),
            (true, Some((c, b))) => {
                out.push((c, &line[b..byte]));
                start = None;
            }
            _ => {}
        }
    }
    if let Some((c, b)) = start {
        out.push((c, &line[b..]));
    }
    out
}

/// Reads a whole stream, numbering events from 0.
pub fn read_stream<R: BufRead>(reader: R) -> Result<Vec<StreamEvent>, ReadError> {
    let mut events = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        if let Some(ev) = parse_event(&line, i + 1, events.len() as u64)? {
            events.push(ev);
        }
    }
    Ok(events)
}

/// Parses an in-memory stream.
pub fn parse_stream(text: &str) -> Result<Vec<StreamEvent>, ParseError> {
    let mut events = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if let Some(ev) = parse_event(line, i + 1, events.len() as u64)? {
            events.push(ev);
        }
    }
    Ok(events)
}

/// One event per line in the wire format.
pub fn write_stream<W: std::io::Write>(mut out: W, events: &[StreamEvent]) -> std::io::Result<()> {
    for ev in events {
        writeln!(out, "{ev}")?;
    }
    Ok(())
}
