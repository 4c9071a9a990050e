//! Verification reports and their `starring-report/1` JSON form.

use std::fmt::Write as _;

use serde::Serialize;
use serde_json::Value;

use crate::harness::{GeneratorSpec, Mode};
use crate::matrix::Matrix;
use crate::theorems::{EntryKind, LemmaVerdict, TheoremEntry, Verdict};

pub const SCHEMA: &str = "starring-report/1";

/// A matrix as rows of scalar strings.
pub type ElementRows = Vec<Vec<String>>;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct SpecEcho {
    pub mode: Mode,
    pub ring: String,
    pub field: String,
    pub dim: usize,
    pub sample_count: usize,
    pub seed: u64,
}

impl From<&GeneratorSpec> for SpecEcho {
    fn from(spec: &GeneratorSpec) -> Self {
        SpecEcho {
            mode: spec.mode,
            ring: spec.field.short_name(),
            field: spec.field.to_string(),
            dim: spec.dim,
            sample_count: spec.count,
            seed: spec.seed,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Totals {
    pub generated: usize,
    pub in_rdag: usize,
    pub in_rsharp: usize,
    pub in_both: usize,
    pub sep: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct TheoremTally {
    pub id: String,
    pub kind: EntryKind,
    pub gated: bool,
    pub checked: usize,
    pub consistent: usize,
    pub condition_true: usize,
    pub counterexamples: Vec<ElementRows>,
}

impl TheoremTally {
    pub fn new(entry: &TheoremEntry) -> Self {
        TheoremTally {
            id: entry.id.to_string(),
            kind: entry.kind(),
            gated: entry.gated,
            checked: 0,
            consistent: 0,
            condition_true: 0,
            counterexamples: Vec::new(),
        }
    }

    pub fn record(&mut self, condition_holds: bool, verdict: Verdict, a: &Matrix) {
        self.checked += 1;
        self.condition_true += condition_holds as usize;
        match verdict {
            Verdict::Consistent => self.consistent += 1,
            Verdict::Counterexample => self.counterexamples.push(a.to_string_rows()),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct LemmaTally {
    pub checked: usize,
    pub holds: usize,
    pub vacuous: usize,
    /// Offending pairs as `[first, second]`.
    pub violations: Vec<Vec<ElementRows>>,
}

impl LemmaTally {
    pub fn record(&mut self, v: LemmaVerdict, pair: impl FnOnce() -> Vec<ElementRows>) {
        self.checked += 1;
        match v {
            LemmaVerdict::Holds => self.holds += 1,
            LemmaVerdict::Vacuous => self.vacuous += 1,
            LemmaVerdict::Violated => self.violations.push(pair()),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Lemmas {
    #[serde(rename = "lemma3_1")]
    pub lemma_3_1: LemmaTally,
    #[serde(rename = "lemma2_8")]
    pub lemma_2_8: LemmaTally,
}

/// Ground-truth checks that must never fail on a correct build.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Oracles {
    pub penrose_checked: usize,
    pub group_checked: usize,
    pub inverse_failures: Vec<ElementRows>,
    pub closed_form_checked: usize,
    pub closed_form_mismatches: Vec<ElementRows>,
    /// Elements on which `C2.7` and `C2.10` were both evaluated.
    pub duplicate_checked: usize,
    pub duplicate_disagreements: Vec<ElementRows>,
}

impl Oracles {
    pub fn sort(&mut self) {
        self.inverse_failures.sort();
        self.closed_form_mismatches.sort();
        self.duplicate_disagreements.sort();
    }

    pub fn is_clean(&self) -> bool {
        self.inverse_failures.is_empty()
            && self.closed_form_mismatches.is_empty()
            && self.duplicate_disagreements.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct VerificationReport {
    pub schema: &'static str,
    pub spec: SpecEcho,
    pub entries: Vec<String>,
    pub totals: Totals,
    pub per_theorem: Vec<TheoremTally>,
    pub lemmas: Lemmas,
    pub oracles: Oracles,
    pub wall_time: f64,
}

impl VerificationReport {
    #[allow(clippy::too_many_arguments)]
    pub(crate) fn new(
        spec: SpecEcho,
        entries: Vec<String>,
        totals: Totals,
        per_theorem: Vec<TheoremTally>,
        lemma_3_1: LemmaTally,
        lemma_2_8: LemmaTally,
        oracles: Oracles,
        wall_time: f64,
    ) -> Self {
        VerificationReport {
            schema: SCHEMA,
            spec,
            entries,
            totals,
            per_theorem,
            lemmas: Lemmas {
                lemma_3_1,
                lemma_2_8,
            },
            oracles,
            wall_time,
        }
    }

    pub fn tally(&self, id: &str) -> Option<&TheoremTally> {
        self.per_theorem.iter().find(|t| t.id == id)
    }

    /// Counterexamples on gated entries.
    pub fn gated_counterexamples(&self) -> usize {
        self.per_theorem
            .iter()
            .filter(|t| t.gated)
            .map(|t| t.counterexamples.len())
            .sum()
    }

    /// No gated counterexample, lemma violation or oracle failure.
    pub fn is_clean(&self) -> bool {
        self.gated_counterexamples() == 0
            && self.lemmas.lemma_3_1.violations.is_empty()
            && self.lemmas.lemma_2_8.violations.is_empty()
            && self.oracles.is_clean()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let s = &self.spec;
        let _ = writeln!(
            out,
            "{} over {} (n={}, count={}, seed={})",
            s.mode, s.field, s.dim, s.sample_count, s.seed
        );
        let t = &self.totals;
        let _ = writeln!(
            out,
            "generated {}  R† {}  R# {}  R#∩R† {}  SEP {}",
            t.generated, t.in_rdag, t.in_rsharp, t.in_both, t.sep
        );
        for tally in &self.per_theorem {
            let _ = writeln!(
                out,
                "{:<6} {:<4} checked {:>6}  condition {:>6}  counterexamples {}{}",
                tally.id,
                if tally.counterexamples.is_empty() {
                    "ok"
                } else {
                    "FAIL"
                },
                tally.checked,
                tally.condition_true,
                tally.counterexamples.len(),
                if tally.gated { "" } else { "  (informational)" },
            );
            for c in &tally.counterexamples {
                let _ = writeln!(out, "    {}", inline(c));
            }
        }
        for (name, l) in [
            ("lemma 3.1", &self.lemmas.lemma_3_1),
            ("lemma 2.8", &self.lemmas.lemma_2_8),
        ] {
            let _ = writeln!(
                out,
                "{name}: checked {}  holds {}  vacuous {}  violations {}",
                l.checked,
                l.holds,
                l.vacuous,
                l.violations.len()
            );
        }
        let o = &self.oracles;
        let _ = writeln!(
            out,
            "oracles: penrose {}  group {}  closed forms {}  C2.7/C2.10 {}  failures {}",
            o.penrose_checked,
            o.group_checked,
            o.closed_form_checked,
            o.duplicate_checked,
            o.inverse_failures.len()
                + o.closed_form_mismatches.len()
                + o.duplicate_disagreements.len()
        );
        let _ = writeln!(
            out,
            "result: {}",
            if self.is_clean() {
                "clean"
            } else {
                "COUNTEREXAMPLES FOUND"
            }
        );
        out
    }
}

fn inline(rows: &ElementRows) -> String {
    rows.iter()
        .map(|r| r.join(" "))
        .collect::<Vec<_>>()
        .join("; ")
}

/// Drops the `wallTime` field so two runs can be compared.
pub fn without_wall_time(json: &str) -> Value {
    let mut v: Value = serde_json::from_str(json).expect("valid JSON");
    if let Some(obj) = v.as_object_mut() {
        obj.remove("wallTime");
    }
    v
}

/// Structural check of a `starring-report/1` document.
pub fn validate_report_json(v: &Value) -> Result<(), String> {
    fn field<'a>(v: &'a Value, key: &str) -> Result<&'a Value, String> {
        v.get(key).ok_or_else(|| format!("missing field {key}"))
    }
    fn count(v: &Value, key: &str) -> Result<u64, String> {
        field(v, key)?
            .as_u64()
            .ok_or_else(|| format!("{key} is not a count"))
    }
    fn matrices(v: &Value, key: &str) -> Result<(), String> {
        let list = field(v, key)?
            .as_array()
            .ok_or_else(|| format!("{key} is not a list"))?;
        list.iter().try_for_each(is_matrix)
    }
    fn is_matrix(m: &Value) -> Result<(), String> {
        let rows = m.as_array().ok_or("matrix is not a list of rows")?;
        let n = rows.len();
        for r in rows {
            let r = r.as_array().ok_or("row is not a list")?;
            if r.len() != n || !r.iter().all(Value::is_string) {
                return Err("matrix rows must be square lists of scalar strings".into());
            }
        }
        Ok(())
    }

    if field(v, "schema")?.as_str() != Some(SCHEMA) {
        return Err(format!("schema must be {SCHEMA}"));
    }
    let spec = field(v, "spec")?;
    for key in ["mode", "ring", "field"] {
        field(spec, key)?
            .as_str()
            .ok_or(format!("spec.{key} is not a string"))?;
    }
    for key in ["dim", "sampleCount", "seed"] {
        count(spec, key)?;
    }
    field(v, "entries")?
        .as_array()
        .ok_or("entries is not a list")?;
    let totals = field(v, "totals")?;
    let generated = count(totals, "generated")?;
    let in_both = count(totals, "inBoth")?;
    for key in ["inRdag", "inRsharp", "sep"] {
        if count(totals, key)? > generated {
            return Err(format!("totals.{key} exceeds generated"));
        }
    }
    for t in field(v, "perTheorem")?
        .as_array()
        .ok_or("perTheorem is not a list")?
    {
        field(t, "id")?.as_str().ok_or("id is not a string")?;
        let kind = field(t, "kind")?.as_str().ok_or("kind is not a string")?;
        field(t, "gated")?.as_bool().ok_or("gated is not a bool")?;
        let checked = count(t, "checked")?;
        let consistent = count(t, "consistent")?;
        count(t, "conditionTrue")?;
        let cex = field(t, "counterexamples")?
            .as_array()
            .ok_or("counterexamples is not a list")?;
        matrices(t, "counterexamples")?;
        if consistent + cex.len() as u64 != checked {
            return Err("checked must equal consistent + counterexamples".into());
        }
        if kind == "biconditional-with-sep" && checked != in_both {
            return Err("SEP-kind entries must be checked on every element of R# ∩ R†".into());
        }
    }
    let lemmas = field(v, "lemmas")?;
    for key in ["lemma3_1", "lemma2_8"] {
        let l = field(lemmas, key)?;
        let checked = count(l, "checked")?;
        let parts = count(l, "holds")? + count(l, "vacuous")?;
        let violations = field(l, "violations")?
            .as_array()
            .ok_or("violations is not a list")?;
        if parts + violations.len() as u64 != checked {
            return Err(format!("{key} tallies do not add up"));
        }
    }
    let oracles = field(v, "oracles")?;
    for key in [
        "penroseChecked",
        "groupChecked",
        "closedFormChecked",
        "duplicateChecked",
    ] {
        count(oracles, key)?;
    }
    for key in [
        "inverseFailures",
        "closedFormMismatches",
        "duplicateDisagreements",
    ] {
        matrices(oracles, key)?;
    }
    field(v, "wallTime")?
        .as_f64()
        .ok_or("wallTime is not a number")?;
    Ok(())
}
