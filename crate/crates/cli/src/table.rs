//! Fixed-schema rows rendered as CSV or JSON.

use serde_json::{Map, Number, Value};

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Text(String),
    Bool(bool),
    /// Absent value: empty CSV field, JSON null.
    Missing,
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Num(v)
    }
}

impl From<Option<f64>> for Cell {
    fn from(v: Option<f64>) -> Self {
        v.map_or(Cell::Missing, Cell::Num)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Bool(v)
    }
}

#[derive(Debug, Clone)]
pub struct Table {
    columns: &'static [&'static str],
    rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: &'static [&'static str]) -> Self {
        Table {
            columns,
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        assert_eq!(
            row.len(),
            self.columns.len(),
            "row width must match the schema"
        );
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> String {
        let mut out = self.columns.join(",");
        out.push('\n');
        for row in &self.rows {
            let fields: Vec<String> = row
                .iter()
                .map(|cell| match cell {
                    Cell::Num(v) => format_sig12(*v),
                    Cell::Text(s) => s.clone(),
                    Cell::Bool(b) => b.to_string(),
                    Cell::Missing => String::new(),
                })
                .collect();
            out.push_str(&fields.join(","));
            out.push('\n');
        }
        out
    }

    pub fn to_json(&self) -> String {
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|row| {
                let mut obj = Map::new();
                for (col, cell) in self.columns.iter().zip(row) {
                    let value = match cell {
                        // round through the CSV formatting so both outputs agree
                        Cell::Num(v) => format_sig12(*v)
                            .parse::<f64>()
                            .ok()
                            .and_then(Number::from_f64)
                            .map_or(Value::Null, Value::Number),
                        Cell::Text(s) => Value::String(s.clone()),
                        Cell::Bool(b) => Value::Bool(*b),
                        Cell::Missing => Value::Null,
                    };
                    obj.insert((*col).to_string(), value);
                }
                Value::Object(obj)
            })
            .collect();
        let mut out =
            serde_json::to_string_pretty(&Value::Array(rows)).expect("JSON values serialize");
        out.push('\n');
        out
    }
}

/// Twelve significant digits, `%.12g` style: fixed notation for moderate
/// exponents, scientific otherwise, trailing zeros removed.
pub fn format_sig12(v: f64) -> String {
    if v == 0.0 {
        return "0".to_string();
    }
    if v.is_nan() {
        return "nan".to_string();
    }
    if v.is_infinite() {
        return if v > 0.0 { "inf" } else { "-inf" }.to_string();
    }
    let sci = format!("{v:.11e}");
    let (mantissa, exp) = sci
        .split_once('e')
        .expect("scientific format has an exponent");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-4..12).contains(&exp) {
        let decimals = (11 - exp).max(0) as usize;
        trim_zeros(&format!("{v:.decimals$}"))
    } else {
        format!("{}e{}", trim_zeros(mantissa), exp)
    }
}

fn trim_zeros(s: &str) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s.to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sig12_formatting() {
        assert_eq!(format_sig12(0.0), "0");
        assert_eq!(format_sig12(1.0), "1");
        assert_eq!(format_sig12(0.5), "0.5");
        assert_eq!(format_sig12(-2.25), "-2.25");
        assert_eq!(format_sig12(0.082_572_282_384_477_04), "0.0825722823845");
        assert_eq!(format_sig12(1000.0), "1000");
        assert_eq!(format_sig12(5e-5), "5e-5");
        assert_eq!(format_sig12(2.5e-4), "0.00025");
        assert_eq!(format_sig12(1.234e-7), "1.234e-7");
        assert_eq!(format_sig12(6.02214076e23), "6.02214076e23");
        assert_eq!(format_sig12(std::f64::consts::PI), "3.14159265359");
        // rounding carries into the next decade
        assert_eq!(format_sig12(9.9999999999996), "10");
        assert_eq!(format_sig12(f64::NAN), "nan");
    }

    #[test]
    fn csv_and_json_share_columns() {
        let mut t = Table::new(&["x", "label", "ok", "maybe"]);
        t.push(vec![0.25.into(), "a".into(), true.into(), None.into()]);
        assert_eq!(t.to_csv(), "x,label,ok,maybe\n0.25,a,true,\n");
        let json: Value = serde_json::from_str(&t.to_json()).unwrap();
        let row = &json[0];
        assert_eq!(row["x"], 0.25);
        assert_eq!(row["label"], "a");
        assert_eq!(row["ok"], true);
        assert!(row["maybe"].is_null());
        let keys: Vec<&String> = row.as_object().unwrap().keys().collect();
        assert_eq!(keys, ["x", "label", "ok", "maybe"]);
    }
}
