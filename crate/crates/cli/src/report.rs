use std::fmt::Write as _;

use serde::Serialize;
use serde_json::Value;
use sepchoice::linalg::FeasibilityResult;
use sepchoice::rational::{self, Rational};
use sepchoice::separability::{
    chsh_expression_text, joint_column_rules, Bound, Certificate, ChshViolation, Classification,
    CorrelatorTable, MarginalityViolation, TensorViolation, Verdict,
};
use sepchoice::space::describe_rule;
use sepchoice::{ChoiceSpace, JointChoiceRule};

#[derive(Debug, Serialize)]
pub struct InputInfo {
    pub path: String,
    pub sha256: String,
}

#[derive(Debug, Serialize)]
pub struct ChshSection {
    pub correlators: CorrelatorTable,
    #[serde(serialize_with = "ser_rationals")]
    pub values: Vec<Rational>,
    pub verdict: Verdict<ChshViolation>,
}

#[derive(Debug, Serialize)]
pub struct ExtensionSection {
    pub k: usize,
    pub on_average: bool,
    pub result: FeasibilityResult,
}

#[derive(Debug, Serialize)]
pub struct RunReport {
    pub input: InputInfo,
    pub classification: Classification,
    pub marginality: Verdict<MarginalityViolation>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub chsh: Option<ChshSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub extension: Option<ExtensionSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<std::collections::BTreeMap<String, f64>>,
}

fn ser_rationals<S: serde::Serializer>(v: &[Rational], s: S) -> Result<S::Ok, S::Error> {
    rational::serde_rational_vec::serialize(v, s)
}

/// Pretty JSON with keys sorted at every level.
pub fn to_sorted_json<T: Serialize>(value: &T) -> String {
    let v: Value = serde_json::to_value(value).expect("report serializes");
    let mut s = serde_json::to_string_pretty(&sort_keys(v)).expect("value serializes");
    s.push('\n');
    s
}

fn sort_keys(v: Value) -> Value {
    match v {
        Value::Object(map) => {
            let sorted: std::collections::BTreeMap<String, Value> =
                map.into_iter().map(|(k, v)| (k, sort_keys(v))).collect();
            Value::Object(sorted.into_iter().collect())
        }
        Value::Array(a) => Value::Array(a.into_iter().map(sort_keys).collect()),
        other => other,
    }
}

fn fmt_vec(v: &[Rational]) -> String {
    let parts: Vec<String> = v.iter().map(rational::format).collect();
    format!("[{}]", parts.join(", "))
}

pub fn describe_marginality(space: &ChoiceSpace, v: &MarginalityViolation) -> String {
    let fixed: Vec<String> = v
        .fixed
        .iter()
        .map(|f| {
            format!(
                "DM {} picks {} from {}",
                f.dm + 1,
                space.label(f.dm, f.menu, f.position),
                space.menu_display(f.dm, f.menu)
            )
        })
        .collect();
    format!(
        "with {}, DM {}'s choice mass from {} is {} but from {} is {}",
        fixed.join(", "),
        v.dm + 1,
        space.menu_display(v.dm, v.menus.0),
        rational::format(&v.lhs),
        space.menu_display(v.dm, v.menus.1),
        rational::format(&v.rhs)
    )
}

fn describe_tensor(v: &TensorViolation) -> String {
    let factors: Vec<String> = v.factors.iter().map(|f| fmt_vec(f)).collect();
    format!(
        "row {} of the Kronecker product ({}) evaluates to {} < 0",
        v.row,
        factors.join(" ⊗ "),
        rational::format(&v.value)
    )
}

pub fn describe_chsh(space: &ChoiceSpace, v: &ChshViolation) -> String {
    let (op, bound) = match v.bound {
        Bound::Upper => (">", "2"),
        Bound::Lower => ("<", "-2"),
    };
    format!(
        "S{} = {} = {} {} {}",
        v.expression,
        chsh_expression_text(space, v.expression),
        rational::format(&v.value),
        op,
        bound
    )
}

fn write_evidence(out: &mut String, rule: &JointChoiceRule, c: &Classification) {
    let space = rule.space();
    match &c.evidence {
        Certificate::Invalid { message } => {
            let _ = writeln!(out, "  {message}");
        }
        Certificate::Marginality { violation } => {
            let _ = writeln!(out, "  marginality fails: {}", describe_marginality(space, violation));
        }
        Certificate::Tensor { violation } => {
            let _ = writeln!(out, "  restriction fails: {}", describe_tensor(violation));
        }
        Certificate::Mixture { nu } => {
            let _ = writeln!(out, "  mixture of joint deterministic rules:");
            for (col, w) in nu.iter().enumerate().filter(|(_, w)| **w != rational::zero()) {
                let rules = joint_column_rules(space, &c.allowed, col);
                let parts: Vec<String> = rules
                    .iter()
                    .enumerate()
                    .map(|(t, &r)| format!("DM {} [{}]", t + 1, describe_rule(space, t, r)))
                    .collect();
                let _ = writeln!(out, "    {}  {}", rational::format(w), parts.join("; "));
            }
        }
        Certificate::Farkas { y } => {
            let yb = rational::dot(y, &rule.joint_vector());
            let _ = writeln!(
                out,
                "  no mixture exists: y·A <= 0 on every joint deterministic rule, y·rho = {}",
                rational::format(&yb)
            );
            let _ = writeln!(out, "    y = {}", fmt_vec(y));
        }
    }
}

pub fn render_text(rule: &JointChoiceRule, report: &RunReport) -> String {
    let space = rule.space();
    let mut out = String::new();
    let _ = writeln!(out, "input: {} (sha256 {})", report.input.path, report.input.sha256);
    let _ = writeln!(out, "label: {}", report.classification.label);
    write_evidence(&mut out, rule, &report.classification);
    match &report.marginality {
        Verdict::Holds => {
            let _ = writeln!(out, "marginality: holds");
        }
        Verdict::Violated(v) => {
            let _ = writeln!(out, "marginality: violated; {}", describe_marginality(space, v));
        }
    }
    if let Some(ch) = &report.chsh {
        let _ = writeln!(out, "correlators:");
        for j0 in 0..2 {
            for j1 in 0..2 {
                let _ = writeln!(
                    out,
                    "  E[{},{}] = {}",
                    space.menu_display(0, j0),
                    space.menu_display(1, j1),
                    rational::format(&ch.correlators.e[j0][j1])
                );
            }
        }
        for (k, v) in ch.values.iter().enumerate() {
            let _ = writeln!(
                out,
                "  S{} = {} = {}",
                k + 1,
                chsh_expression_text(space, k + 1),
                rational::format(v)
            );
        }
        match &ch.verdict {
            Verdict::Holds => {
                let _ = writeln!(out, "CHSH: all four expressions within [-2, 2]");
            }
            Verdict::Violated(v) => {
                let _ = writeln!(out, "CHSH: violated; {}", describe_chsh(space, v));
            }
        }
    }
    if let Some(ext) = &report.extension {
        let mode = if ext.on_average { "on average" } else { "every replica" };
        let status = if ext.result.is_feasible() { "feasible" } else { "infeasible" };
        let _ = writeln!(out, "extension to {} replicas ({}): {}", ext.k, mode, status);
    }
    if let Some(t) = &report.timing_ms {
        for (k, v) in t {
            let _ = writeln!(out, "time {k}: {v:.3} ms");
        }
    }
    out
}
