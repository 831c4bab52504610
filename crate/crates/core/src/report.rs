//! Check reports and relation listings, with JSON and LaTeX output.

use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub witness: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Relation {
    pub lhs: String,
    pub rhs: String,
    pub latex: String,
}

impl Relation {
    pub fn new(lhs: impl Into<String>, rhs: impl Into<String>) -> Relation {
        let (lhs, rhs) = (lhs.into(), rhs.into());
        let latex = format!("{} = {}", latex_of(&lhs), latex_of(&rhs));
        Relation { lhs, rhs, latex }
    }
}

/// Plain rendering to LaTeX: tensor signs, Greek letters and inverse markers.
pub fn latex_of(s: &str) -> String {
    s.replace(" ⊗ ", " \\otimes ").replace('⊗', "\\otimes ").replace('λ', "\\lambda ").replace('Δ', "\\Delta ")
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub relations: Vec<Relation>,
    pub checks: Vec<Check>,
}

impl Report {
    pub fn new() -> Report {
        Report::default()
    }

    pub fn check(&mut self, name: impl Into<String>, witness: Option<String>) {
        let status = if witness.is_some() { Status::Fail } else { Status::Pass };
        self.checks.push(Check { name: name.into(), status, witness });
    }

    pub fn relation(&mut self, lhs: impl Into<String>, rhs: impl Into<String>) {
        self.relations.push(Relation::new(lhs, rhs));
    }

    pub fn extend(&mut self, other: Report) {
        self.relations.extend(other.relations);
        self.checks.extend(other.checks);
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.status == Status::Pass)
    }

    pub fn failures(&self) -> Vec<&Check> {
        self.checks.iter().filter(|c| c.status == Status::Fail).collect()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialises")
    }

    /// An `align*` block of the relations followed by the check list as a comment.
    pub fn to_latex(&self) -> String {
        let mut out = String::from("\\begin{align*}\n");
        for (i, r) in self.relations.iter().enumerate() {
            let lhs = latex_of(&r.lhs);
            let rhs = latex_of(&r.rhs);
            let sep = if i + 1 < self.relations.len() { " \\\\" } else { "" };
            out.push_str(&format!("  {lhs} &= {rhs}{sep}\n"));
        }
        out.push_str("\\end{align*}\n");
        for c in &self.checks {
            let st = match c.status {
                Status::Pass => "pass",
                Status::Fail => "FAIL",
            };
            out.push_str(&format!("% {}: {}\n", c.name, st));
        }
        out
    }
}
