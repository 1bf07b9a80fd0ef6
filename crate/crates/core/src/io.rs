//! JSON and CSV schemas for state batches and data registers.
//!
//! JSON floats use the shortest representation that round-trips; CSV floats
//! are written with 17 significant digits. Both are canonical, so exporting
//! the same value twice yields identical bytes.

use std::collections::BTreeMap;
use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::register::{BlochCoord, DataRegister, QubitOrder, TreeCoord};
use crate::state::{StateBatch, StateVector};

const ORDER_PREFIX: &str = "# order:";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
}

impl Format {
    /// Picks the format from a file extension (`.json` or `.csv`).
    pub fn from_path(path: &Path) -> Result<Self> {
        match path
            .extension()
            .and_then(|e| e.to_str())
            .map(str::to_ascii_lowercase)
        {
            Some(e) if e == "json" => Ok(Format::Json),
            Some(e) if e == "csv" => Ok(Format::Csv),
            _ => Err(Error::parse(
                path.display().to_string(),
                "cannot infer format, expected .json or .csv extension",
            )),
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RegisterDoc {
    n_qubits: usize,
    n_samples: usize,
    order: Vec<usize>,
    nodes: Vec<NodeDoc>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct NodeDoc {
    coord: String,
    theta: Vec<f64>,
    phi: Vec<f64>,
}

/// Input state file, optionally carrying a Schmidt order (used by the HTTP API).
#[derive(Serialize, Deserialize)]
struct StatesDoc {
    n_qubits: usize,
    states: Vec<Vec<[f64; 2]>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    order: Option<Vec<usize>>,
}

fn fmt_float(x: f64) -> String {
    format!("{x:.16e}")
}

fn json_error(e: serde_json::Error) -> Error {
    Error::parse(format!("line {} column {}", e.line(), e.column()), e)
}

fn csv_context(pos: Option<&csv::Position>) -> String {
    pos.map(|p| format!("line {}", p.line()))
        .unwrap_or_else(|| "csv".into())
}

fn parse_float(field: &str, context: &str, name: &str) -> Result<f64> {
    field
        .trim()
        .parse::<f64>()
        .map_err(|e| Error::parse(format!("{context}, field {name}"), e))
}

fn parse_index(field: &str, context: &str, name: &str) -> Result<usize> {
    field
        .trim()
        .parse::<usize>()
        .map_err(|e| Error::parse(format!("{context}, field {name}"), e))
}

/// Serializes a register. Nodes appear in `(depth, lexicographic)` order.
pub fn export_register(register: &DataRegister, format: Format) -> Vec<u8> {
    match format {
        Format::Json => {
            let doc = RegisterDoc {
                n_qubits: register.n_qubits(),
                n_samples: register.n_samples(),
                order: register.order().as_slice().to_vec(),
                nodes: register
                    .iter()
                    .map(|(coord, coords)| NodeDoc {
                        coord: coord.as_str().to_owned(),
                        theta: coords.iter().map(|c| c.theta).collect(),
                        phi: coords.iter().map(|c| c.phi).collect(),
                    })
                    .collect(),
            };
            let mut out = serde_json::to_vec_pretty(&doc).expect("register serializes");
            out.push(b'\n');
            out
        }
        Format::Csv => {
            let order = register
                .order()
                .as_slice()
                .iter()
                .map(|q| q.to_string())
                .collect::<Vec<_>>()
                .join(",");
            let mut out = format!("{ORDER_PREFIX} {order}\n").into_bytes();
            let mut w = csv::Writer::from_writer(&mut out);
            w.write_record(["coord", "sample", "theta", "phi"])
                .expect("in-memory write");
            for (coord, coords) in register.iter() {
                for (i, c) in coords.iter().enumerate() {
                    w.write_record([
                        coord.as_str().to_owned(),
                        i.to_string(),
                        fmt_float(c.theta),
                        fmt_float(c.phi),
                    ])
                    .expect("in-memory write");
                }
            }
            w.flush().expect("in-memory flush");
            drop(w);
            out
        }
    }
}

/// Parses a register and validates the complete-tree and range invariants.
pub fn parse_register(bytes: &[u8], format: Format) -> Result<DataRegister> {
    match format {
        Format::Json => parse_register_json(bytes),
        Format::Csv => parse_register_csv(bytes),
    }
}

fn parse_register_json(bytes: &[u8]) -> Result<DataRegister> {
    let doc: RegisterDoc = serde_json::from_slice(bytes).map_err(json_error)?;
    let order = QubitOrder::new(doc.order).map_err(|e| Error::Invariant(format!("order: {e}")))?;
    let mut records = Vec::with_capacity(doc.nodes.len());
    for (i, node) in doc.nodes.into_iter().enumerate() {
        let coord = TreeCoord::new(&node.coord)
            .map_err(|e| Error::parse(format!("nodes[{i}].coord"), e))?;
        if node.theta.len() != doc.n_samples || node.phi.len() != doc.n_samples {
            return Err(Error::Invariant(format!(
                "node {:?} has {}/{} theta/phi entries, expected {}",
                node.coord,
                node.theta.len(),
                node.phi.len(),
                doc.n_samples
            )));
        }
        let coords = node
            .theta
            .iter()
            .zip(&node.phi)
            .map(|(&theta, &phi)| BlochCoord { theta, phi })
            .collect();
        records.push((coord, coords));
    }
    DataRegister::from_nodes(doc.n_qubits, order, records)
}

/// Splits the optional `# order:` preamble from CSV content.
fn split_order_preamble(bytes: &[u8]) -> Result<(Option<QubitOrder>, &[u8], u64)> {
    let text = std::str::from_utf8(bytes).map_err(|e| Error::parse("csv", e))?;
    if let Some(rest) = text.strip_prefix(ORDER_PREFIX) {
        let (line, body) = rest.split_once('\n').unwrap_or((rest, ""));
        let order = line
            .trim()
            .parse::<QubitOrder>()
            .map_err(|e| Error::parse("line 1 (order)", e))?;
        let offset = bytes.len() - body.len();
        Ok((Some(order), &bytes[offset..], 1))
    } else {
        Ok((None, bytes, 0))
    }
}

fn csv_reader<'a>(
    body: &'a [u8],
    expected: &[&str],
    line_offset: u64,
) -> Result<csv::Reader<&'a [u8]>> {
    let mut r = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_reader(body);
    let headers = r
        .headers()
        .map_err(|e| Error::parse(format!("line {}", 1 + line_offset), e))?;
    let got: Vec<&str> = headers.iter().map(str::trim).collect();
    if got != expected {
        return Err(Error::parse(
            format!("line {} (header)", 1 + line_offset),
            format!(
                "expected header {:?}, found {:?}",
                expected.join(","),
                got.join(",")
            ),
        ));
    }
    Ok(r)
}

fn parse_register_csv(bytes: &[u8]) -> Result<DataRegister> {
    let (order, body, line_offset) = split_order_preamble(bytes)?;
    let mut reader = csv_reader(body, &["coord", "sample", "theta", "phi"], line_offset)?;
    let mut nodes: BTreeMap<(usize, String), Vec<(usize, BlochCoord)>> = BTreeMap::new();
    for rec in reader.records() {
        let rec = rec.map_err(|e| Error::parse(csv_context(e.position()), &e))?;
        let line = rec.position().map(|p| p.line() + line_offset);
        let ctx = line
            .map(|l| format!("line {l}"))
            .unwrap_or_else(|| "csv".into());
        if rec.len() != 4 {
            return Err(Error::parse(
                ctx,
                format!("expected 4 fields, found {}", rec.len()),
            ));
        }
        let coord = TreeCoord::new(rec[0].trim())
            .map_err(|e| Error::parse(format!("{ctx}, field coord"), e))?;
        let sample = parse_index(&rec[1], &ctx, "sample")?;
        let theta = parse_float(&rec[2], &ctx, "theta")?;
        let phi = parse_float(&rec[3], &ctx, "phi")?;
        nodes
            .entry((coord.depth(), coord.as_str().to_owned()))
            .or_default()
            .push((sample, BlochCoord { theta, phi }));
    }
    let max_depth = nodes.keys().map(|(d, _)| *d).max();
    let n_qubits = match (&order, max_depth) {
        (Some(o), _) => o.len(),
        (None, Some(d)) => d + 1,
        (None, None) => return Err(Error::Invariant("register has no nodes".into())),
    };
    let order = order.unwrap_or_else(|| QubitOrder::identity(n_qubits));
    let mut records = Vec::with_capacity(nodes.len());
    for ((_, bits), mut entries) in nodes {
        entries.sort_by_key(|(s, _)| *s);
        if entries.iter().enumerate().any(|(i, (s, _))| i != *s) {
            return Err(Error::Invariant(format!(
                "node {bits:?} sample indices are not 0..{}",
                entries.len()
            )));
        }
        let coord = TreeCoord::new(&bits)?;
        records.push((coord, entries.into_iter().map(|(_, c)| c).collect()));
    }
    DataRegister::from_nodes(n_qubits, order, records)
}

/// Serializes a state batch in the input schema.
pub fn export_states(batch: &StateBatch, format: Format) -> Vec<u8> {
    match format {
        Format::Json => {
            let doc = StatesDoc {
                n_qubits: batch.n_qubits(),
                states: batch
                    .iter()
                    .map(|s| s.amplitudes().iter().map(|a| [a.re, a.im]).collect())
                    .collect(),
                order: None,
            };
            let mut out = serde_json::to_vec(&doc).expect("states serialize");
            out.push(b'\n');
            out
        }
        Format::Csv => {
            let mut out = Vec::new();
            let mut w = csv::Writer::from_writer(&mut out);
            w.write_record(["sample", "index", "re", "im"])
                .expect("in-memory write");
            for (i, s) in batch.iter().enumerate() {
                for (k, a) in s.amplitudes().iter().enumerate() {
                    w.write_record([
                        i.to_string(),
                        k.to_string(),
                        fmt_float(a.re),
                        fmt_float(a.im),
                    ])
                    .expect("in-memory write");
                }
            }
            w.flush().expect("in-memory flush");
            drop(w);
            out
        }
    }
}

/// Parses a state batch. Rejects non-power-of-two lengths and zero-norm samples.
pub fn parse_states(bytes: &[u8], format: Format) -> Result<StateBatch> {
    match format {
        Format::Json => parse_states_request(bytes).map(|(b, _)| b),
        Format::Csv => parse_states_csv(bytes),
    }
}

/// Parses the JSON state schema together with its optional `"order"` array.
pub fn parse_states_request(bytes: &[u8]) -> Result<(StateBatch, Option<QubitOrder>)> {
    let doc: StatesDoc = serde_json::from_slice(bytes).map_err(json_error)?;
    let expected = 1usize
        .checked_shl(doc.n_qubits as u32)
        .filter(|_| doc.n_qubits >= 1 && doc.n_qubits < 31)
        .ok_or_else(|| Error::Shape(format!("invalid n_qubits {}", doc.n_qubits)))?;
    if let Some((i, s)) = doc
        .states
        .iter()
        .enumerate()
        .find(|(_, s)| s.len() != expected)
    {
        return Err(Error::Shape(format!(
            "sample {i} has {} amplitudes, expected {expected} for {} qubits",
            s.len(),
            doc.n_qubits
        )));
    }
    let samples = doc
        .states
        .into_iter()
        .map(|s| {
            s.into_iter()
                .map(|[re, im]| Complex64::new(re, im))
                .collect()
        })
        .collect();
    let batch = StateBatch::from_amplitudes(samples)?;
    let order = doc.order.map(QubitOrder::new).transpose()?;
    if let Some(o) = &order {
        if o.len() != batch.n_qubits() {
            return Err(Error::Shape(format!(
                "order has length {}, states have {} qubits",
                o.len(),
                batch.n_qubits()
            )));
        }
    }
    Ok((batch, order))
}

fn parse_states_csv(bytes: &[u8]) -> Result<StateBatch> {
    let mut reader = csv_reader(bytes, &["sample", "index", "re", "im"], 0)?;
    let mut samples: BTreeMap<usize, Vec<(usize, Complex64)>> = BTreeMap::new();
    for rec in reader.records() {
        let rec = rec.map_err(|e| Error::parse(csv_context(e.position()), &e))?;
        let ctx = csv_context(rec.position());
        if rec.len() != 4 {
            return Err(Error::parse(
                ctx,
                format!("expected 4 fields, found {}", rec.len()),
            ));
        }
        let sample = parse_index(&rec[0], &ctx, "sample")?;
        let index = parse_index(&rec[1], &ctx, "index")?;
        let re = parse_float(&rec[2], &ctx, "re")?;
        let im = parse_float(&rec[3], &ctx, "im")?;
        samples
            .entry(sample)
            .or_default()
            .push((index, Complex64::new(re, im)));
    }
    if samples.keys().enumerate().any(|(i, &s)| i != s) {
        return Err(Error::Shape(
            "sample indices are not contiguous from 0".into(),
        ));
    }
    let vectors = samples
        .into_iter()
        .map(|(s, mut amps)| {
            amps.sort_by_key(|(k, _)| *k);
            if amps.iter().enumerate().any(|(i, (k, _))| i != *k) {
                return Err(Error::Shape(format!(
                    "sample {s}: amplitude indices are not 0..{}",
                    amps.len()
                )));
            }
            Ok(amps.into_iter().map(|(_, a)| a).collect())
        })
        .collect::<Result<Vec<Vec<Complex64>>>>()?;
    StateBatch::from_amplitudes(vectors)
}

/// Convenience for tests and callers that hold a single state.
pub fn export_state(state: &StateVector, format: Format) -> Vec<u8> {
    export_states(&StateBatch::single(state.clone()), format)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decompose::decompose;

    fn bell_register() -> DataRegister {
        let s = StateVector::from_real(&[1.0, 0.0, 0.0, 1.0]).unwrap();
        decompose(&StateBatch::single(s), &QubitOrder::identity(2)).unwrap()
    }

    #[test]
    fn bell_json_has_three_nodes() {
        let bytes = export_register(&bell_register(), Format::Json);
        let v: serde_json::Value = serde_json::from_slice(&bytes).unwrap();
        let coords: Vec<&str> = v["nodes"]
            .as_array()
            .unwrap()
            .iter()
            .map(|n| n["coord"].as_str().unwrap())
            .collect();
        assert_eq!(coords, ["", "0", "1"]);
        assert_eq!(v["n_qubits"], 2);
        assert_eq!(v["n_samples"], 1);
    }

    #[test]
    fn csv_layout() {
        let text = String::from_utf8(export_register(&bell_register(), Format::Csv)).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "# order: 0,1");
        assert_eq!(lines[1], "coord,sample,theta,phi");
        assert_eq!(lines[2], ",0,1.5707963267948966e0,0.0000000000000000e0");
        assert_eq!(lines.len(), 5);
    }

    #[test]
    fn missing_node_is_invariant_error() {
        let doc = r#"{"n_qubits":2,"n_samples":1,"order":[0,1],"nodes":[
            {"coord":"","theta":[0.0],"phi":[0.0]},
            {"coord":"0","theta":[0.0],"phi":[0.0]}]}"#;
        assert!(matches!(
            parse_register(doc.as_bytes(), Format::Json),
            Err(Error::Invariant(_))
        ));
    }

    #[test]
    fn out_of_range_theta_is_invariant_error() {
        let doc = r#"{"n_qubits":1,"n_samples":1,"order":[0],"nodes":[
            {"coord":"","theta":[3.5],"phi":[0.0]}]}"#;
        assert!(matches!(
            parse_register(doc.as_bytes(), Format::Json),
            Err(Error::Invariant(_))
        ));
        let csv = "coord,sample,theta,phi\n,0,3.5,0\n";
        assert!(matches!(
            parse_register(csv.as_bytes(), Format::Csv),
            Err(Error::Invariant(_))
        ));
    }

    #[test]
    fn parse_errors_carry_location() {
        let err = parse_register(b"{\"n_qubits\": 2,\n \"nodes\": [}", Format::Json).unwrap_err();
        assert!(matches!(err, Error::Parse { ref context, .. } if context.starts_with("line 2")));
        let csv = "coord,sample,theta,phi\n,0,1.0,0\n0,zero,1.0,0\n";
        let err = parse_register(csv.as_bytes(), Format::Csv).unwrap_err();
        assert!(
            matches!(err, Error::Parse { ref context, .. } if context.contains("line 3") && context.contains("sample"))
        );
    }

    #[test]
    fn states_json() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let doc = format!(r#"{{"n_qubits":2,"states":[[[{h},0],[0,0],[0,0],[{h},0]]]}}"#);
        let b = parse_states(doc.as_bytes(), Format::Json).unwrap();
        assert_eq!(b.len(), 1);
        assert_eq!(b.states()[0].len(), 4);

        let bad = r#"{"n_qubits":2,"states":[[[1,0],[0,0],[0,0]]]}"#;
        assert!(matches!(
            parse_states(bad.as_bytes(), Format::Json),
            Err(Error::Shape(_))
        ));
        let zero = r#"{"n_qubits":1,"states":[[[1,0],[0,0]],[[0,0],[0,0]]]}"#;
        assert!(matches!(
            parse_states(zero.as_bytes(), Format::Json),
            Err(Error::ZeroState { sample: 1, .. })
        ));
    }

    #[test]
    fn states_csv() {
        let csv = "sample,index,re,im\n0,0,1,0\n0,1,0,1\n1,1,1,0\n1,0,0,0\n";
        let b = parse_states(csv.as_bytes(), Format::Csv).unwrap();
        assert_eq!(b.len(), 2);
        assert_eq!(b.states()[0].amplitudes()[1], Complex64::new(0.0, 1.0));
        assert_eq!(b.states()[1].amplitudes()[1], Complex64::new(1.0, 0.0));

        let three = "sample,index,re,im\n0,0,1,0\n0,1,0,0\n0,2,0,0\n";
        assert!(matches!(
            parse_states(three.as_bytes(), Format::Csv),
            Err(Error::Shape(_))
        ));
        let zero = "sample,index,re,im\n0,0,0,0\n0,1,0,0\n";
        assert!(matches!(
            parse_states(zero.as_bytes(), Format::Csv),
            Err(Error::ZeroState { .. })
        ));
        let header = "s,i,re,im\n0,0,1,0\n";
        assert!(matches!(
            parse_states(header.as_bytes(), Format::Csv),
            Err(Error::Parse { .. })
        ));
    }

    #[test]
    fn request_order_must_match() {
        let doc = r#"{"n_qubits":1,"states":[[[1,0],[0,0]]],"order":[0,1]}"#;
        assert!(parse_states_request(doc.as_bytes()).is_err());
        let doc = r#"{"n_qubits":2,"states":[[[1,0],[0,0],[0,0],[0,0]]],"order":[1,0]}"#;
        let (_, order) = parse_states_request(doc.as_bytes()).unwrap();
        assert_eq!(order.unwrap().as_slice(), &[1, 0]);
    }

    #[test]
    fn format_from_extension() {
        assert_eq!(
            Format::from_path(Path::new("a/b.JSON")).unwrap(),
            Format::Json
        );
        assert_eq!(Format::from_path(Path::new("x.csv")).unwrap(), Format::Csv);
        assert!(Format::from_path(Path::new("x.txt")).is_err());
    }
}
