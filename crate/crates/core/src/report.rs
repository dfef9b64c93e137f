//! Check reports: one verdict per instance, deterministic ordering, text and
//! JSON renderings.

use std::fmt;

use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Outcome {
    Pass,
    Fail,
    Inconclusive,
}

impl Outcome {
    pub fn as_str(self) -> &'static str {
        match self {
            Outcome::Pass => "pass",
            Outcome::Fail => "fail",
            Outcome::Inconclusive => "inconclusive",
        }
    }

    /// Fail dominates inconclusive, which dominates pass.
    pub fn combine(self, other: Outcome) -> Outcome {
        use Outcome::*;
        match (self, other) {
            (Fail, _) | (_, Fail) => Fail,
            (Inconclusive, _) | (_, Inconclusive) => Inconclusive,
            _ => Pass,
        }
    }
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl From<bool> for Outcome {
    fn from(ok: bool) -> Self {
        if ok {
            Outcome::Pass
        } else {
            Outcome::Fail
        }
    }
}

/// Enumeration bounds: variables, formula depth, premise count.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct Bounds {
    pub nvars: usize,
    pub depth: usize,
    pub premises: usize,
}

impl Bounds {
    pub const fn new(nvars: usize, depth: usize, premises: usize) -> Self {
        Bounds {
            nvars,
            depth,
            premises,
        }
    }
}

impl Default for Bounds {
    fn default() -> Self {
        Bounds::new(2, 3, 2)
    }
}

impl fmt::Display for Bounds {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "nvars={} depth={} premises={}",
            self.nvars, self.depth, self.premises
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Entry {
    pub check: String,
    pub instance: String,
    pub verdict: Outcome,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct Summary {
    pub pass: usize,
    pub fail: usize,
    pub inconclusive: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Report {
    pub check: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bounds: Option<Bounds>,
    pub verdicts: Vec<Entry>,
    pub summary: Summary,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl Report {
    pub fn new(check: impl Into<String>) -> Self {
        Report {
            check: check.into(),
            bounds: None,
            verdicts: Vec::new(),
            summary: Summary::default(),
            notes: Vec::new(),
        }
    }

    pub fn with_bounds(mut self, b: Bounds) -> Self {
        self.bounds = Some(b);
        self
    }

    pub fn push(&mut self, instance: impl Into<String>, verdict: Outcome, witness: Option<String>) {
        self.push_as(self.check.clone(), instance, verdict, witness);
    }

    /// Adds an entry attributed to a sub-check.
    pub fn push_as(
        &mut self,
        check: impl Into<String>,
        instance: impl Into<String>,
        verdict: Outcome,
        witness: Option<String>,
    ) {
        match verdict {
            Outcome::Pass => self.summary.pass += 1,
            Outcome::Fail => self.summary.fail += 1,
            Outcome::Inconclusive => self.summary.inconclusive += 1,
        }
        self.verdicts.push(Entry {
            check: check.into(),
            instance: instance.into(),
            verdict,
            witness,
        });
    }

    pub fn pass(&mut self, instance: impl Into<String>) {
        self.push(instance, Outcome::Pass, None);
    }

    pub fn fail(&mut self, instance: impl Into<String>, witness: impl Into<String>) {
        self.push(instance, Outcome::Fail, Some(witness.into()));
    }

    pub fn inconclusive(&mut self, instance: impl Into<String>, why: impl Into<String>) {
        self.push(instance, Outcome::Inconclusive, Some(why.into()));
    }

    pub fn note(&mut self, text: impl Into<String>) {
        self.notes.push(text.into());
    }

    /// Appends every entry and note of `other`, keeping its check names.
    pub fn absorb(&mut self, other: Report) {
        for e in other.verdicts {
            self.push_as(e.check, e.instance, e.verdict, e.witness);
        }
        self.notes.extend(other.notes);
    }

    pub fn outcome(&self) -> Outcome {
        if self.summary.fail > 0 {
            Outcome::Fail
        } else if self.summary.inconclusive > 0 {
            Outcome::Inconclusive
        } else {
            Outcome::Pass
        }
    }

    pub fn passed(&self) -> bool {
        self.outcome() == Outcome::Pass
    }

    pub fn first_failure(&self) -> Option<&Entry> {
        self.verdicts.iter().find(|e| e.verdict == Outcome::Fail)
    }

    pub fn entries_for<'a>(&'a self, check: &'a str) -> impl Iterator<Item = &'a Entry> + 'a {
        self.verdicts.iter().filter(move |e| e.check == check)
    }

    /// Sorts entries by (check, instance) for schedule-independent output.
    pub fn sorted(mut self) -> Self {
        self.verdicts
            .sort_by(|a, b| (&a.check, &a.instance).cmp(&(&b.check, &b.instance)));
        self
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.check, self.outcome())?;
        if let Some(b) = &self.bounds {
            write!(f, " [{b}]")?;
        }
        writeln!(
            f,
            " ({} pass, {} fail, {} inconclusive)",
            self.summary.pass, self.summary.fail, self.summary.inconclusive
        )?;
        for e in &self.verdicts {
            let tag = if e.check == self.check {
                String::new()
            } else {
                format!("{} ", e.check)
            };
            write!(f, "  {:<12} {tag}{}", e.verdict.as_str(), e.instance)?;
            if let Some(w) = &e.witness {
                write!(f, " -- {w}")?;
            }
            writeln!(f)?;
        }
        for n in &self.notes {
            writeln!(f, "  note: {n}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn summary_tracks_entries() {
        let mut r = Report::new("demo");
        r.pass("a");
        r.inconclusive("b", "unknown");
        assert_eq!(r.outcome(), Outcome::Inconclusive);
        r.fail("c", "x0");
        assert_eq!(r.outcome(), Outcome::Fail);
        assert_eq!(
            r.summary,
            Summary {
                pass: 1,
                fail: 1,
                inconclusive: 1
            }
        );
        assert_eq!(r.first_failure().unwrap().instance, "c");
    }

    #[test]
    fn json_shape() {
        let mut r = Report::new("demo").with_bounds(Bounds::default());
        r.pass("a");
        let v: serde_json::Value = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(v["verdicts"][0]["verdict"], "pass");
        assert_eq!(v["verdicts"][0]["check"], "demo");
        assert!(v["verdicts"][0].get("witness").is_none());
        assert_eq!(v["bounds"]["depth"], 3);
    }
}
