use std::fs;
use std::io::Write;
use std::path::Path;

use serde_json::{Number, Value};

use crate::Failure;

/// 17 significant digits; `inf`, `-inf` and `nan` for non-finite values.
pub fn fmt17(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.16e}")
    } else if v.is_nan() {
        "nan".into()
    } else if v > 0.0 {
        "inf".into()
    } else {
        "-inf".into()
    }
}

/// A JSON number carrying all 17 digits; non-finite values become strings.
pub fn num(v: f64) -> Value {
    if v.is_finite() {
        Value::Number(fmt17(v).parse::<Number>().expect("formatted float parses"))
    } else {
        Value::String(fmt17(v))
    }
}

pub fn opt_num(v: Option<f64>) -> Value {
    v.map_or(Value::Null, num)
}

pub fn nums(v: &[f64]) -> Value {
    Value::Array(v.iter().map(|&x| num(x)).collect())
}

pub fn opt_cell(v: Option<f64>) -> String {
    v.map_or(String::new(), fmt17)
}

/// Write to `path`, or stdout when `None`.
pub fn emit(path: Option<&Path>, content: &str) -> Result<(), Failure> {
    match path {
        Some(p) => fs::write(p, content)
            .map_err(|e| Failure::Usage(format!("{}: {e}", p.display()))),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(content.as_bytes())?;
            Ok(())
        }
    }
}

pub fn emit_json(path: Option<&Path>, v: &Value) -> Result<(), Failure> {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values serialize");
    s.push('\n');
    emit(path, &s)
}

/// CSV text with a `# mlpr <schema> v1` comment line ahead of the header.
pub struct Csv {
    w: csv::Writer<Vec<u8>>,
    schema: &'static str,
}

impl Csv {
    pub fn new(schema: &'static str, header: &[&str]) -> Self {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(header).expect("writing to memory");
        Self { w, schema }
    }

    pub fn row<I, S>(&mut self, cells: I)
    where
        I: IntoIterator<Item = S>,
        S: AsRef<[u8]>,
    {
        self.w.write_record(cells).expect("writing to memory");
    }

    pub fn finish(self) -> String {
        let body = self.w.into_inner().expect("flushing to memory");
        format!(
            "# mlpr {} v1\n{}",
            self.schema,
            String::from_utf8(body).expect("CSV is UTF-8")
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seventeen_digits() {
        assert_eq!(fmt17(0.1), "1.0000000000000001e-1");
        assert_eq!(fmt17(f64::INFINITY), "inf");
        assert_eq!(num(0.1).to_string(), "1.0000000000000001e-1");
        assert_eq!(num(f64::NAN), Value::String("nan".into()));
    }

    #[test]
    fn csv_has_schema_line() {
        let mut c = Csv::new("test", &["a", "b"]);
        c.row(["1", ""]);
        assert_eq!(c.finish(), "# mlpr test v1\na,b\n1,\n");
    }
}
