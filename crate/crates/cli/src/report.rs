use nsa_core::regress::CheckReport;
use serde::Serialize;

/// The outcome of one command, in the form printed as text or JSON.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Report {
    pub command: String,
    pub instances: u64,
    pub failures: Vec<String>,
    pub details: Vec<String>,
}

impl Report {
    pub fn new(command: &str) -> Report {
        Report {
            command: command.to_string(),
            ..Report::default()
        }
    }

    /// Merge battery reports; each failure and summary is prefixed by its
    /// battery name.
    pub fn from_checks(command: &str, checks: &[CheckReport]) -> Report {
        let mut r = Report::new(command);
        for c in checks {
            r.instances += c.instances;
            r.failures.extend(c.failures.iter().map(|f| format!("{}: {f}", c.name)));
            let status = if c.passed() { "pass" } else { "FAIL" };
            r.details.push(format!(
                "{}: {} instances, {} failures, {status}",
                c.name,
                c.instances,
                c.failures.len()
            ));
            r.details.extend(c.details.iter().map(|d| format!("{}: {d}", c.name)));
            if c.instances == 0 {
                r.failures.push(format!("{}: no instances ran", c.name));
            }
        }
        r
    }

    pub fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.instances += 1;
        if !ok {
            self.failures.push(what());
        }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for d in &self.details {
            out.push_str(d);
            out.push('\n');
        }
        for f in &self.failures {
            out.push_str("failure: ");
            out.push_str(f);
            out.push('\n');
        }
        out.push_str(&format!(
            "{}: {} instances, {} failures\n{}\n",
            self.command,
            self.instances,
            self.failures.len(),
            if self.passed() { "PASS" } else { "FAIL" }
        ));
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }
}
