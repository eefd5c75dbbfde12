use apery_core::exact::format_rational;
use apery_core::{BigRational, HPReal, Precision};
use serde_json::{Map, Value};

pub type Row = Map<String, Value>;

/// One command's output. Key order is fixed by insertion, so serialization is
/// byte-stable for a given configuration.
pub struct Report {
    pub command: &'static str,
    pub z: Option<BigRational>,
    pub bits: u32,
    pub summary: Option<Row>,
    pub rows: Vec<Row>,
    pub verdicts: Vec<Row>,
}

impl Report {
    pub fn new(command: &'static str, z: Option<&BigRational>, p: Precision) -> Self {
        Report { command, z: z.cloned(), bits: p.bits(), summary: None, rows: Vec::new(), verdicts: Vec::new() }
    }

    pub fn all_passed(&self) -> bool {
        self.verdicts.iter().all(|v| v.get("passed") == Some(&Value::Bool(true)))
    }

    pub fn to_json(&self) -> String {
        let mut m = Map::new();
        m.insert("command".into(), self.command.into());
        m.insert("z".into(), self.z.as_ref().map_or(Value::Null, |z| format_rational(z).into()));
        m.insert("bits".into(), self.bits.into());
        m.insert("version".into(), env!("CARGO_PKG_VERSION").into());
        if let Some(s) = &self.summary {
            m.insert("summary".into(), Value::Object(s.clone()));
        }
        m.insert("rows".into(), self.rows.iter().cloned().map(Value::Object).collect());
        m.insert("verdicts".into(), self.verdicts.iter().cloned().map(Value::Object).collect());
        let mut s = serde_json::to_string_pretty(&Value::Object(m)).expect("json");
        s.push('\n');
        s
    }

    /// The row table (or the verdicts when there are no rows), header first.
    pub fn to_csv(&self) -> String {
        let table = if self.rows.is_empty() { &self.verdicts } else { &self.rows };
        let mut w = csv::Writer::from_writer(Vec::new());
        if let Some(first) = table.first() {
            w.write_record(first.keys()).expect("csv");
        }
        for row in table {
            w.write_record(row.values().map(cell)).expect("csv");
        }
        String::from_utf8(w.into_inner().expect("csv")).expect("utf8")
    }
}

fn cell(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => String::new(),
        other => other.to_string(),
    }
}

pub fn real(x: &HPReal, p: Precision) -> Value {
    x.to_decimal_string(p.report_digits()).into()
}

pub fn short(x: &HPReal) -> Value {
    if x.is_zero() {
        "0".into()
    } else {
        x.to_sci_string(6).into()
    }
}

pub fn rational(x: &BigRational) -> Value {
    format_rational(x).into()
}

pub fn verdict(name: &str, measured: Value, tolerance: Value, passed: bool) -> Row {
    let mut v = Row::new();
    v.insert("name".into(), name.into());
    v.insert("measured".into(), measured);
    v.insert("tolerance".into(), tolerance);
    v.insert("passed".into(), passed.into());
    v
}
