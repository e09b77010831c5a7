use kdv5::expr::{expr_to_json, to_latex, to_text, Expr};
use serde_json::{json, Value as Json};

use crate::config::Format;

#[derive(Clone, Debug)]
pub enum Value {
    Expr(Expr),
    Exprs(Vec<Expr>),
    Text(String),
    Lines(Vec<String>),
    Flag(bool),
    Count(usize),
}

#[derive(Clone, Debug)]
pub struct Section {
    pub title: String,
    pub entries: Vec<(String, Value)>,
}

impl Section {
    pub fn new(title: impl Into<String>) -> Self {
        Section { title: title.into(), entries: Vec::new() }
    }

    pub fn expr(&mut self, key: &str, e: &Expr) -> &mut Self {
        self.entries.push((key.to_string(), Value::Expr(e.clone())));
        self
    }

    pub fn exprs(&mut self, key: &str, es: Vec<Expr>) -> &mut Self {
        self.entries.push((key.to_string(), Value::Exprs(es)));
        self
    }

    pub fn text(&mut self, key: &str, s: impl Into<String>) -> &mut Self {
        self.entries.push((key.to_string(), Value::Text(s.into())));
        self
    }

    pub fn lines(&mut self, key: &str, ls: Vec<String>) -> &mut Self {
        self.entries.push((key.to_string(), Value::Lines(ls)));
        self
    }

    pub fn flag(&mut self, key: &str, b: bool) -> &mut Self {
        self.entries.push((key.to_string(), Value::Flag(b)));
        self
    }

    pub fn count(&mut self, key: &str, n: usize) -> &mut Self {
        self.entries.push((key.to_string(), Value::Count(n)));
        self
    }
}

/// Output of a command plus the residuals that must vanish for success.
#[derive(Clone, Debug, Default)]
pub struct Report {
    pub command: String,
    pub sections: Vec<Section>,
    pub residuals: Vec<Expr>,
}

impl Report {
    pub fn new(command: &str) -> Self {
        Report { command: command.to_string(), ..Report::default() }
    }

    pub fn push(&mut self, s: Section) {
        self.sections.push(s);
    }

    pub fn require_zero(&mut self, e: &Expr) {
        self.residuals.push(e.clone());
    }

    pub fn ok(&self) -> bool {
        self.residuals.iter().all(Expr::is_zero)
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => {
                let mut s = serde_json::to_string_pretty(&self.to_json()).expect("json values serialize");
                s.push('\n');
                s
            }
            Format::Text => self.render_lines(to_text),
            Format::Latex => self.render_lines(to_latex),
        }
    }

    fn render_lines(&self, show: fn(&Expr) -> String) -> String {
        let mut out = String::new();
        for s in &self.sections {
            out.push_str(&format!("== {}\n", s.title));
            for (k, v) in &s.entries {
                match v {
                    Value::Expr(e) => out.push_str(&format!("{k}: {}\n", show(e))),
                    Value::Exprs(es) => {
                        out.push_str(&format!("{k}: {} item(s)\n", es.len()));
                        for e in es {
                            out.push_str(&format!("  {}\n", show(e)));
                        }
                    }
                    Value::Text(t) => out.push_str(&format!("{k}: {t}\n")),
                    Value::Lines(ls) => {
                        out.push_str(&format!("{k}:\n"));
                        for l in ls {
                            out.push_str(&format!("  {l}\n"));
                        }
                    }
                    Value::Flag(b) => out.push_str(&format!("{k}: {b}\n")),
                    Value::Count(n) => out.push_str(&format!("{k}: {n}\n")),
                }
            }
        }
        out.push_str(&format!("status: {}\n", if self.ok() { "ok" } else { "nonzero residual" }));
        out
    }

    pub fn to_json(&self) -> Json {
        let sections: Vec<Json> = self
            .sections
            .iter()
            .map(|s| {
                let entries: Vec<Json> = s
                    .entries
                    .iter()
                    .map(|(k, v)| {
                        let value = match v {
                            Value::Expr(e) => expr_to_json(e),
                            Value::Exprs(es) => Json::Array(es.iter().map(expr_to_json).collect()),
                            Value::Text(t) => json!(t),
                            Value::Lines(ls) => json!(ls),
                            Value::Flag(b) => json!(b),
                            Value::Count(n) => json!(n),
                        };
                        json!({ "key": k, "value": value })
                    })
                    .collect();
                json!({ "title": s.title, "entries": entries })
            })
            .collect();
        json!({
            "command": self.command,
            "sections": sections,
            "status": if self.ok() { "ok" } else { "nonzero residual" },
        })
    }
}
