//! Fixed-width number rendering shared by the CSV and JSON writers.

use pointscatter::Complex64;
use serde_json::{Map, Value};

/// 15 significant digits in scientific notation; non-finite values render empty.
pub fn num(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.14e}")
    } else {
        String::new()
    }
}

/// JSON number rounded to 15 significant digits; non-finite values become null.
pub fn jnum(x: f64) -> Value {
    if !x.is_finite() {
        return Value::Null;
    }
    let rounded: f64 = format!("{x:.14e}").parse().expect("formatted float parses");
    serde_json::Number::from_f64(rounded).map_or(Value::Null, Value::Number)
}

/// A complex number as a two-element [re, im] array.
pub fn jcx(z: Complex64) -> Value {
    Value::Array(vec![jnum(z.re), jnum(z.im)])
}

/// CSV with a header row and `\n` line ends. Cells are pre-rendered.
pub struct Csv {
    out: String,
    width: usize,
}

impl Csv {
    pub fn new(header: &[&str]) -> Self {
        let mut out = header.join(",");
        out.push('\n');
        Self {
            out,
            width: header.len(),
        }
    }

    pub fn row(&mut self, cells: &[String]) {
        debug_assert_eq!(cells.len(), self.width);
        self.out.push_str(&cells.join(","));
        self.out.push('\n');
    }

    pub fn finish(self) -> String {
        self.out
    }
}

/// Builds a JSON object; keys come out sorted, so output order is stable.
#[derive(Default)]
pub struct Obj(Map<String, Value>);

impl Obj {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn set(mut self, key: &str, value: Value) -> Self {
        self.0.insert(key.to_owned(), value);
        self
    }

    pub fn value(self) -> Value {
        Value::Object(self.0)
    }
}

pub fn render_json(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values serialize");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fifteen_significant_digits() {
        assert_eq!(num(-0.1877372), "-1.87737200000000e-1");
        assert_eq!(num(f64::NAN), "");
        assert_eq!(jnum(1.0 / 3.0), serde_json::json!(0.333333333333333));
        assert_eq!(jnum(f64::INFINITY), Value::Null);
    }

    #[test]
    fn object_keys_are_sorted() {
        let v = Obj::new().set("b", jnum(1.0)).set("a", jnum(2.0)).value();
        assert_eq!(serde_json::to_string(&v).unwrap(), r#"{"a":2.0,"b":1.0}"#);
    }
}
