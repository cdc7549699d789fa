use std::fmt::Write as _;

use serde_json::{Map, Value};

pub const SCHEMA: &str = "unipotent-lab.report/1";

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Text,
    Json,
}

/// Whether the command established (0) or refuted (1) its property.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Outcome {
    Verified,
    Refuted,
}

impl Outcome {
    pub fn from_bool(ok: bool) -> Outcome {
        if ok {
            Outcome::Verified
        } else {
            Outcome::Refuted
        }
    }

    pub fn exit_code(self) -> u8 {
        match self {
            Outcome::Verified => 0,
            Outcome::Refuted => 1,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Field {
    Text(String),
    Int(i128),
    Bool(bool),
    List(Vec<String>),
}

impl From<&str> for Field {
    fn from(s: &str) -> Field {
        Field::Text(s.to_string())
    }
}

impl From<String> for Field {
    fn from(s: String) -> Field {
        Field::Text(s)
    }
}

impl From<bool> for Field {
    fn from(b: bool) -> Field {
        Field::Bool(b)
    }
}

macro_rules! int_field {
    ($($t:ty),*) => {$(
        impl From<$t> for Field {
            fn from(x: $t) -> Field {
                Field::Int(x as i128)
            }
        }
    )*};
}
int_field!(u32, u64, usize, i64, u128);

impl<T: ToString> From<Vec<T>> for Field {
    fn from(v: Vec<T>) -> Field {
        Field::List(v.iter().map(ToString::to_string).collect())
    }
}

impl Field {
    fn to_json(&self) -> Value {
        match self {
            Field::Text(s) => Value::String(s.clone()),
            Field::Int(x) => i64::try_from(*x).map(Value::from).unwrap_or_else(|_| Value::String(x.to_string())),
            Field::Bool(b) => Value::Bool(*b),
            Field::List(v) => Value::Array(v.iter().cloned().map(Value::String).collect()),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Report {
    pub verb: String,
    pub echo: Vec<String>,
    pub outcome: Outcome,
    pub fields: Vec<(String, Field)>,
    pub elapsed: Option<f64>,
}

impl Report {
    pub fn new(verb: &str) -> Report {
        Report { verb: verb.into(), echo: Vec::new(), outcome: Outcome::Verified, fields: Vec::new(), elapsed: None }
    }

    pub fn field(&mut self, key: &str, value: impl Into<Field>) -> &mut Report {
        self.fields.push((key.into(), value.into()));
        self
    }

    pub fn outcome(&mut self, o: Outcome) -> &mut Report {
        self.outcome = o;
        self
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Text => self.render_text(),
            Format::Json => self.render_json(),
        }
    }

    fn header(&self) -> Vec<(String, Field)> {
        vec![
            ("schema".into(), Field::from(SCHEMA)),
            ("version".into(), Field::from(env!("CARGO_PKG_VERSION"))),
            ("command".into(), Field::Text(shlex::try_join(self.echo.iter().map(String::as_str)).unwrap_or_default())),
            ("verb".into(), Field::from(self.verb.as_str())),
            ("exit".into(), Field::from(self.outcome.exit_code() as u32)),
        ]
    }

    fn render_text(&self) -> String {
        let mut out = String::new();
        let mut line = |k: &str, v: &Field| match v {
            Field::Text(s) => writeln!(out, "{k}: {s}").unwrap(),
            Field::Int(x) => writeln!(out, "{k}: {x}").unwrap(),
            Field::Bool(b) => writeln!(out, "{k}: {b}").unwrap(),
            Field::List(items) => {
                writeln!(out, "{k}.count: {}", items.len()).unwrap();
                for (i, s) in items.iter().enumerate() {
                    writeln!(out, "{k}.{}: {s}", i + 1).unwrap();
                }
            }
        };
        for (k, v) in self.header().iter().chain(&self.fields) {
            line(k, v);
        }
        if let Some(t) = self.elapsed {
            line("elapsed_seconds", &Field::Text(format!("{t:.3}")));
        }
        out
    }

    fn render_json(&self) -> String {
        let mut top = Map::new();
        for (k, v) in self.header() {
            top.insert(k, v.to_json());
        }
        top.insert("argv".into(), Value::Array(self.echo.iter().cloned().map(Value::String).collect()));
        let mut body = Map::new();
        for (k, v) in &self.fields {
            body.insert(k.clone(), v.to_json());
        }
        top.insert("report".into(), Value::Object(body));
        if let Some(t) = self.elapsed {
            top.insert("elapsed_seconds".into(), Value::from(t));
        }
        let mut s = serde_json::to_string_pretty(&Value::Object(top)).expect("json");
        s.push('\n');
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn text_lists_are_indexed() {
        let mut r = Report::new("demo");
        r.echo = vec!["demo".into(), "--word".into(), "[x1, x2]".into()];
        r.field("images", vec!["1,1;0,1", "1,0;0,1"]).field("ok", true);
        let t = r.render(Format::Text);
        assert!(t.contains("command: demo --word '[x1, x2]'\n"));
        assert!(t.contains("images.count: 2\nimages.1: 1,1;0,1\nimages.2: 1,0;0,1\nok: true\n"));
    }

    #[test]
    fn json_keeps_field_order() {
        let mut r = Report::new("demo");
        r.field("zeta", 1u32).field("alpha", "x");
        let v: Value = serde_json::from_str(&r.render(Format::Json)).unwrap();
        let keys: Vec<&String> = v["report"].as_object().unwrap().keys().collect();
        assert_eq!(keys, ["zeta", "alpha"]);
        assert_eq!(v["schema"], SCHEMA);
    }
}
