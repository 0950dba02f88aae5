use serde_json::{Map, Value};

/// An ordered key/value report, printed as `key=value` lines or as one JSON
/// object with the same keys.
#[derive(Debug, Default)]
pub struct Report {
    fields: Vec<(String, Value)>,
    /// Replaces the key/value lines in plain mode.
    plain_body: Option<String>,
}

impl Report {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn field(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.fields.push((key.to_string(), value.into()));
        self
    }

    pub fn plain_body(mut self, body: String) -> Self {
        self.plain_body = Some(body);
        self
    }

    pub fn render(&self, json: bool) -> String {
        if json {
            let object: Map<String, Value> = self.fields.iter().cloned().collect();
            let mut out = serde_json::to_string_pretty(&Value::Object(object)).expect("serializable");
            out.push('\n');
            return out;
        }
        if let Some(body) = &self.plain_body {
            return body.clone();
        }
        self.fields.iter().map(|(k, v)| format!("{k}={}\n", plain(v))).collect()
    }
}

fn plain(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Array(items) => items.iter().map(plain).collect::<Vec<_>>().join(","),
        Value::Null => String::new(),
        other => other.to_string(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn plain_and_json_share_keys() {
        let r = Report::new().field("nu", 4).field("orientable", true).field("lengths", vec![4, 8]);
        assert_eq!(r.render(false), "nu=4\norientable=true\nlengths=4,8\n");
        assert_eq!(
            r.render(true),
            "{\n  \"nu\": 4,\n  \"orientable\": true,\n  \"lengths\": [\n    4,\n    8\n  ]\n}\n"
        );
    }
}
