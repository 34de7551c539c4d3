//! Byte-stable CSV/JSON assembly.
//!
//! Floats are always printed with 17 significant digits (`{:.16e}`), object
//! keys appear in insertion order, and nothing depends on hash ordering or
//! locale, so identical inputs, config, and seed reproduce identical bytes.
//! JSON is hand-assembled: the output grammar here is a few fixed shapes,
//! and owning the formatting is what makes the golden-diff guarantee hold.

/// One float with 17 significant digits; non-finite values print as
/// `inf` / `-inf` / `nan` (the CSV spelling — JSON wraps them in strings).
pub fn float(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else if x.is_nan() {
        "nan".to_string()
    } else if x > 0.0 {
        "inf".to_string()
    } else {
        "-inf".to_string()
    }
}

/// A float as a JSON value: a bare number when finite, a quoted string
/// otherwise (JSON has no literal for infinities).
pub fn json_float(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        format!("\"{}\"", float(x))
    }
}

/// A quoted, escaped JSON string.
pub fn json_string(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            '\t' => out.push_str("\\t"),
            c if (c as u32) < 0x20 => out.push_str(&format!("\\u{:04x}", c as u32)),
            c => out.push(c),
        }
    }
    out.push('"');
    out
}

/// A compact JSON array of pre-rendered values: `[a,b,c]`.
pub fn json_array(items: &[String]) -> String {
    format!("[{}]", items.join(","))
}

/// A multi-line JSON array of pre-rendered values, for embedding inside a
/// [`JsonObject::pretty`] rendering at the given indent depth. Empty arrays
/// stay compact.
pub fn json_array_pretty(items: &[String], indent: usize) -> String {
    if items.is_empty() {
        return "[]".to_string();
    }
    let inner = "  ".repeat(indent + 1);
    let outer = "  ".repeat(indent);
    let mut out = String::from("[\n");
    for (i, item) in items.iter().enumerate() {
        out.push_str(&inner);
        out.push_str(item);
        if i + 1 < items.len() {
            out.push(',');
        }
        out.push('\n');
    }
    out.push_str(&outer);
    out.push(']');
    out
}

/// An ordered JSON object under construction; values are pre-rendered.
#[derive(Debug, Default)]
pub struct JsonObject {
    fields: Vec<(&'static str, String)>,
}

impl JsonObject {
    /// An empty object.
    pub fn new() -> Self {
        Self::default()
    }

    /// Appends a float field.
    pub fn float(mut self, key: &'static str, x: f64) -> Self {
        self.fields.push((key, json_float(x)));
        self
    }

    /// Appends an integer field.
    pub fn int(mut self, key: &'static str, v: u64) -> Self {
        self.fields.push((key, v.to_string()));
        self
    }

    /// Appends a string field.
    pub fn str(mut self, key: &'static str, s: &str) -> Self {
        self.fields.push((key, json_string(s)));
        self
    }

    /// Appends a boolean field.
    pub fn bool(mut self, key: &'static str, b: bool) -> Self {
        self.fields.push((key, if b { "true" } else { "false" }.to_string()));
        self
    }

    /// Appends a `null` field.
    pub fn null(mut self, key: &'static str) -> Self {
        self.fields.push((key, "null".to_string()));
        self
    }

    /// Appends an already-rendered JSON value.
    pub fn raw(mut self, key: &'static str, value: String) -> Self {
        self.fields.push((key, value));
        self
    }

    /// Single-line rendering: `{"k":v,"k2":v2}`.
    pub fn compact(&self) -> String {
        let body: Vec<String> = self
            .fields
            .iter()
            .map(|(k, v)| format!("{}:{v}", json_string(k)))
            .collect();
        format!("{{{}}}", body.join(","))
    }

    /// Multi-line rendering with two-space indentation, one field per line.
    pub fn pretty(&self) -> String {
        if self.fields.is_empty() {
            return "{}".to_string();
        }
        let mut out = String::from("{\n");
        for (i, (k, v)) in self.fields.iter().enumerate() {
            out.push_str("  ");
            out.push_str(&json_string(k));
            out.push_str(": ");
            out.push_str(v);
            if i + 1 < self.fields.len() {
                out.push(',');
            }
            out.push('\n');
        }
        out.push('}');
        out
    }
}
