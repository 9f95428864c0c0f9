use serde::Serialize;

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    /// `null` in JSON when the deviation is not finite.
    pub max_deviation: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl Check {
    pub fn within(name: impl Into<String>, max_deviation: f64, tolerance: f64) -> Self {
        Self {
            name: name.into(),
            max_deviation,
            tolerance,
            pass: max_deviation <= tolerance,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub command: &'static str,
    pub params: serde_json::Value,
    pub checks: Vec<Check>,
    pub pass: bool,
}

impl Report {
    pub fn new(command: &'static str, params: impl Serialize, checks: Vec<Check>) -> Self {
        let pass = checks.iter().all(|c| c.pass);
        Self {
            command,
            params: serde_json::to_value(params).expect("parameters serialize"),
            checks,
            pass,
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    /// `name,max_deviation,tolerance,pass` table.
    pub fn checks_csv(&self) -> String {
        let mut out = String::from("name,max_deviation,tolerance,pass\n");
        for c in &self.checks {
            out.push_str(&format!("{},{:?},{:?},{}\n", c.name, c.max_deviation, c.tolerance, c.pass));
        }
        out
    }
}

/// A command's report plus its tabular output, if it has one.
pub struct Outcome {
    pub report: Report,
    pub csv: Option<String>,
}

impl Outcome {
    pub fn csv(&self) -> String {
        self.csv.clone().unwrap_or_else(|| self.report.checks_csv())
    }
}
