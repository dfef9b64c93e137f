//! Bundled demo suites over the embedded fixtures.

use crate::report::Report;
use crate::workbench::{load_str, BoundsOverride, Workbench, WorkbenchError};

pub const CLASSICAL: &str = include_str!("../fixtures/classical.lwb");
pub const GLIVENKO: &str = include_str!("../fixtures/glivenko.lwb");

#[derive(Debug, Clone, Copy)]
pub enum Fixture {
    Classical,
    Glivenko,
}

impl Fixture {
    pub fn load(self) -> Result<Workbench, WorkbenchError> {
        match self {
            Fixture::Classical => load_str(CLASSICAL, "classical.lwb"),
            Fixture::Glivenko => load_str(GLIVENKO, "glivenko.lwb"),
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct Criterion {
    pub number: usize,
    pub statement: &'static str,
    pub fixture: Fixture,
    pub check: &'static str,
}

pub const CRITERIA: [Criterion; 10] = [
    Criterion {
        number: 1,
        statement: "presentations of classical logic are stably Morita equivalent",
        fixture: Fixture::Classical,
        check: "cor-3-11",
    },
    Criterion {
        number: 2,
        statement: "the two presentations are not strictly isomorphic",
        fixture: Fixture::Classical,
        check: "no-strict-iso",
    },
    Criterion {
        number: 3,
        statement: "the Boolean reflector is the least congruence with Boolean quotient",
        fixture: Fixture::Classical,
        check: "reflector",
    },
    Criterion {
        number: 4,
        statement: "Lindenbaum-Tarski algebras of classical logic are free Boolean algebras",
        fixture: Fixture::Classical,
        check: "lindenbaum-quotient",
    },
    Criterion {
        number: 5,
        statement: "classical logic is algebraizable by its equivalence formulas",
        fixture: Fixture::Classical,
        check: "bp-conditions",
    },
    Criterion {
        number: 6,
        statement: "reduct functors restrict to quasivarieties with a natural epimorphism",
        fixture: Fixture::Classical,
        check: "reduct-functors",
    },
    Criterion {
        number: 7,
        statement: "translations and reduct functors correspond",
        fixture: Fixture::Classical,
        check: "roundtrip",
    },
    Criterion {
        number: 8,
        statement: "Glivenko: Heyting algebras reflect onto Boolean algebras",
        fixture: Fixture::Glivenko,
        check: "prop-3-12b",
    },
    Criterion {
        number: 9,
        statement: "reducts along dense morphisms are full, faithful and injective on objects",
        fixture: Fixture::Classical,
        check: "full-faithful",
    },
    Criterion {
        number: 10,
        statement: "the quotient-logic construction is Lindenbaum algebraizable",
        fixture: Fixture::Classical,
        check: "quotient-logic",
    },
];

pub const SUITES: [&str; 3] = ["acceptance", "negative-controls", "list"];

pub fn run_criterion(c: &Criterion) -> Result<Report, WorkbenchError> {
    c.fixture.load()?.run(c.check, BoundsOverride::default())
}

pub fn demo(suite: &str) -> Result<Report, WorkbenchError> {
    match suite {
        "acceptance" => {
            let classical = Fixture::Classical.load()?;
            let glivenko = Fixture::Glivenko.load()?;
            let mut report = Report::new("acceptance");
            for c in &CRITERIA {
                let wb = match c.fixture {
                    Fixture::Classical => &classical,
                    Fixture::Glivenko => &glivenko,
                };
                let r = wb.run(c.check, BoundsOverride::default())?;
                report.note(format!(
                    "criterion {}: {} ({})",
                    c.number,
                    c.statement,
                    r.outcome().as_str()
                ));
                for e in r.verdicts {
                    report.push_as(
                        format!("criterion {:02} / {}", c.number, e.check),
                        e.instance,
                        e.verdict,
                        e.witness,
                    );
                }
            }
            Ok(report)
        }
        "negative-controls" => {
            let mut r = Fixture::Classical.load()?.run("negative-controls", BoundsOverride::default())?;
            r.check = "negative-controls".into();
            Ok(r)
        }
        "list" => {
            let mut r = Report::new("list");
            for s in SUITES {
                r.note(s);
            }
            Ok(r)
        }
        other => Err(WorkbenchError::UnknownCheck(other.to_string())),
    }
}
