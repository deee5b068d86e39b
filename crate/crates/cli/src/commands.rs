use std::collections::BTreeMap;
use std::fs;
use std::path::Path;
use std::time::Instant;

use serde_json::Value;
use sha2::{Digest, Sha256};
use sepchoice::cone::{v_to_h_irredundant, v_to_h_with_cap};
use sepchoice::format::{parse_rule, rule_to_json, LoadedRule, SpaceFile};
use sepchoice::rational::{self, Rational};
use sepchoice::scenarios::{
    frodo_sam_space, gen_dominance_space, gen_mixture, gen_product, gen_table1,
};
use sepchoice::separability::{
    check_chsh_with, check_k_marginalizable, check_marginality, chsh_values, classify,
    correlators_with, extension_system, Classification, Label, Pairing, Verdict,
};
use sepchoice::space::{describe_rule, type_matrix_for};
use sepchoice::{ChoiceSpace, JointChoiceRule};

use crate::args::{
    CertifyArgs, CheckArgs, ChshArgs, GenerateArgs, HrepArgs, Scenario, ValidateArgs,
};
use crate::report::{
    describe_chsh, render_text, to_sorted_json, ChshSection, ExtensionSection, InputInfo,
    RunReport,
};
use crate::Failure;

const MAX_EXTENSION_K: usize = 4;

pub fn exit_code(label: Label) -> u8 {
    match label {
        Label::Separable => 0,
        Label::Invalid => 2,
        Label::Entangled => 3,
        Label::Signaling => 4,
        Label::RestrictedViolation => 5,
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::input(format!("{}: {e}", path.display())))
}

fn digest(text: &str) -> String {
    hex::encode(Sha256::digest(text.as_bytes()))
}

fn load_rule(path: &Path) -> Result<(LoadedRule, String), Failure> {
    let text = read(path)?;
    let loaded = parse_rule(&text).map_err(|e| Failure::input(format!("{}: {e}", path.display())))?;
    Ok((loaded, text))
}

/// A space file, or the space embedded in a rule file.
fn load_space(path: &Path) -> Result<ChoiceSpace, Failure> {
    let text = read(path)?;
    let value: Value =
        serde_json::from_str(&text).map_err(|e| Failure::input(format!("{}: {e}", path.display())))?;
    let space_value = if value.get("rule").is_some() {
        value.get("space").cloned().unwrap_or(Value::Null)
    } else {
        value
    };
    let file: SpaceFile = serde_json::from_value(space_value)
        .map_err(|e| Failure::input(format!("{}: {e}", path.display())))?;
    Ok(file.to_space()?)
}

fn parse_index_list(text: &str, what: &str) -> Result<Vec<usize>, Failure> {
    text.split(',')
        .map(|p| {
            let n: usize = p
                .trim()
                .parse()
                .map_err(|_| Failure::input(format!("{what}: {p:?} is not a positive integer")))?;
            n.checked_sub(1)
                .ok_or_else(|| Failure::input(format!("{what}: numbering starts at 1")))
        })
        .collect()
}

/// `DM:LIST` with both parts 1-based.
fn parse_dm_prefixed(text: &str, what: &str) -> Result<(usize, Vec<usize>), Failure> {
    let (dm, rest) = text
        .split_once(':')
        .ok_or_else(|| Failure::input(format!("{what}: expected DM:..., got {text:?}")))?;
    let dm = parse_index_list(dm, what)?;
    Ok((dm[0], parse_index_list(rest, what)?))
}

fn allowed_from_flags(
    flags: &[String],
    space: &ChoiceSpace,
    from_file: Vec<Option<Vec<usize>>>,
) -> Result<Vec<Option<Vec<usize>>>, Failure> {
    if flags.is_empty() {
        return Ok(from_file);
    }
    let mut allowed = vec![None; space.dm_count()];
    for f in flags {
        let (dm, rules) = parse_dm_prefixed(f, "--allowed")?;
        if dm >= space.dm_count() {
            return Err(Failure::input(format!(
                "--allowed: DM {} does not exist ({} DMs)",
                dm + 1,
                space.dm_count()
            )));
        }
        allowed[dm] = Some(rules);
    }
    Ok(allowed)
}

fn pairing_from_flags(flags: &[String]) -> Result<Pairing, Failure> {
    let mut p = Pairing::default();
    for f in flags {
        let (dm, menus) = parse_dm_prefixed(f, "--flip")?;
        for m in menus {
            if dm > 1 || m > 1 {
                return Err(Failure::input(format!("--flip {f}: DM and menu must be 1 or 2")));
            }
            p.flip[dm][m] = !p.flip[dm][m];
        }
    }
    Ok(p)
}

pub fn validate(a: &ValidateArgs) -> Result<u8, Failure> {
    let text = read(&a.file)?;
    let value: Value =
        serde_json::from_str(&text).map_err(|e| Failure::input(format!("{}: {e}", a.file.display())))?;
    let space = if value.get("rule").is_some() {
        let loaded = parse_rule(&text).map_err(|e| Failure::input(format!("{}: {e}", a.file.display())))?;
        type_matrices_ok(loaded.rule.space(), &loaded.allowed)?;
        println!("valid rule file");
        loaded.rule.space().clone()
    } else {
        let space = load_space(&a.file)?;
        println!("valid space file");
        space
    };
    for t in 0..space.dm_count() {
        let menus: Vec<String> = (0..space.menu_count(t)).map(|j| space.menu_display(t, j)).collect();
        println!(
            "DM {}: menus {} ({} deterministic rules)",
            t + 1,
            menus.join(" "),
            space.rule_count(t)
        );
        if space.rule_count(t) <= 16 {
            for r in 0..space.rule_count(t) {
                println!("  rule {}: {}", r + 1, describe_rule(&space, t, r));
            }
        }
    }
    println!("{} menu paths", space.menu_path_count());
    Ok(0)
}

fn type_matrices_ok(space: &ChoiceSpace, allowed: &[Option<Vec<usize>>]) -> Result<(), Failure> {
    if allowed.len() > space.dm_count() {
        return Err(Failure::input(format!(
            "{} allowed sets for {} DMs",
            allowed.len(),
            space.dm_count()
        )));
    }
    for (t, a) in allowed.iter().enumerate() {
        type_matrix_for(space, t, a.as_deref())?;
    }
    Ok(())
}

fn is_chsh_space(space: &ChoiceSpace) -> bool {
    space.dm_count() == 2 && (0..2).all(|t| space.menu_sizes(t) == [2, 2])
}

fn chsh_section(rule: &JointChoiceRule, pairing: Pairing) -> Result<ChshSection, Failure> {
    let table = correlators_with(rule, pairing)?;
    Ok(ChshSection {
        values: chsh_values(&table).to_vec(),
        verdict: check_chsh_with(rule, pairing)?,
        correlators: table,
    })
}

pub fn check(a: &CheckArgs) -> Result<u8, Failure> {
    let (loaded, text) = load_rule(&a.file)?;
    let rule = &loaded.rule;
    let allowed = allowed_from_flags(&a.allowed, rule.space(), loaded.allowed.clone())?;
    let pairing = pairing_from_flags(&a.flip)?;
    if let Some(k) = a.extension_k {
        if k == 0 {
            return Err(Failure::input("--extension-k must be at least 1"));
        }
        if k > MAX_EXTENSION_K && !a.allow_large_k {
            return Err(Failure::input(format!(
                "--extension-k {k} exceeds {MAX_EXTENSION_K}; the LP grows exponentially in k (use --allow-large-k)"
            )));
        }
    }
    let mut timing = BTreeMap::new();
    let mut timed = |name: &str, t: Instant| {
        timing.insert(name.to_string(), t.elapsed().as_secs_f64() * 1e3);
    };

    let t = Instant::now();
    let classification = classify(rule, &allowed);
    timed("classify", t);
    if let Some(msg) = match &classification.evidence {
        sepchoice::separability::Certificate::Invalid { message } => Some(message.clone()),
        _ => None,
    } {
        if classification.label == Label::Invalid {
            return Err(Failure::input(msg));
        }
    }
    let marginality = check_marginality(rule);
    let chsh = if a.chsh || is_chsh_space(rule.space()) {
        let t = Instant::now();
        let s = chsh_section(rule, pairing)?;
        timed("chsh", t);
        Some(s)
    } else {
        None
    };
    let extension = match a.extension_k {
        Some(k) => {
            let t = Instant::now();
            let result = check_k_marginalizable(rule, k, a.avg)?;
            timed("extension", t);
            Some(ExtensionSection {
                k,
                on_average: a.avg,
                result,
            })
        }
        None => None,
    };
    let report = RunReport {
        input: InputInfo {
            path: a.file.display().to_string(),
            sha256: digest(&text),
        },
        classification,
        marginality,
        chsh,
        extension,
        timing_ms: a.timing.then_some(timing),
    };
    if a.json {
        print!("{}", to_sorted_json(&report));
    } else {
        print!("{}", render_text(rule, &report));
    }
    Ok(exit_code(report.classification.label))
}

pub fn chsh(a: &ChshArgs) -> Result<u8, Failure> {
    let (loaded, _) = load_rule(&a.file)?;
    let rule = &loaded.rule;
    let section = chsh_section(rule, pairing_from_flags(&a.flip)?)?;
    let violated = !section.verdict.holds();
    if a.json {
        print!("{}", to_sorted_json(&section));
    } else {
        let space = rule.space();
        for (k, v) in section.values.iter().enumerate() {
            println!(
                "S{} = {} = {}",
                k + 1,
                sepchoice::separability::chsh_expression_text(space, k + 1),
                rational::format(v)
            );
        }
        match &section.verdict {
            Verdict::Holds => println!("all four expressions within [-2, 2]"),
            Verdict::Violated(v) => println!("violated: {}", describe_chsh(space, v)),
        }
    }
    Ok(if violated { 3 } else { 0 })
}

pub fn hrep(a: &HrepArgs) -> Result<u8, Failure> {
    let space = load_space(&a.file)?;
    let t = a
        .dm
        .checked_sub(1)
        .filter(|&t| t < space.dm_count())
        .ok_or_else(|| Failure::input(format!("--dm {} out of range 1..={}", a.dm, space.dm_count())))?;
    let allowed = match &a.allowed {
        Some(s) => Some(parse_index_list(s, "--allowed")?),
        None => None,
    };
    let m = type_matrix_for(&space, t, allowed.as_deref())?;
    let h = if a.irredundant {
        v_to_h_irredundant(&m, a.cap)?
    } else {
        v_to_h_with_cap(&m, a.cap)?
    };
    let rows: Vec<Vec<String>> = h
        .to_rows()
        .iter()
        .map(|r| r.iter().map(rational::format).collect())
        .collect();
    let out = serde_json::json!({
        "dm": a.dm,
        "allowed": allowed.map(|v| v.iter().map(|i| i + 1).collect::<Vec<_>>()),
        "pairs": (0..space.menu_count(t))
            .flat_map(|j| (0..space.menu_size(t, j)).map(move |i| (j, i)))
            .map(|(j, i)| format!("{},{}", space.label(t, j, i), space.menu_display(t, j)))
            .collect::<Vec<_>>(),
        "rows": rows,
    });
    print!("{}", to_sorted_json(&out));
    Ok(0)
}

fn parse_rational(text: &str, what: &str) -> Result<Rational, Failure> {
    rational::parse(text.trim()).map_err(|_| Failure::input(format!("{what}: invalid rational {text:?}")))
}

fn space_or_default(path: &Option<std::path::PathBuf>) -> Result<ChoiceSpace, Failure> {
    match path {
        Some(p) => load_space(p),
        None => Ok(frodo_sam_space()),
    }
}

pub fn generate(a: &GenerateArgs) -> Result<u8, Failure> {
    let (rule, allowed) = match &a.scenario {
        Scenario::Table1 { alpha } => (gen_table1(&parse_rational(alpha, "--alpha")?)?, None),
        Scenario::Uniform => (JointChoiceRule::uniform(frodo_sam_space()), None),
        Scenario::Product { pcr, space } => {
            let space = space_or_default(space)?;
            let pcrs = pcr
                .iter()
                .map(|s| s.split(',').map(|x| parse_rational(x, "--pcr")).collect())
                .collect::<Result<Vec<Vec<Rational>>, Failure>>()?;
            (gen_product(&space, &pcrs)?, None)
        }
        Scenario::Mixture { weight, space } => {
            let space = space_or_default(space)?;
            let mut weights = BTreeMap::new();
            for w in weight {
                let (key, p) = w
                    .split_once('=')
                    .ok_or_else(|| Failure::input(format!("--weight: expected RULES=P, got {w:?}")))?;
                weights.insert(parse_index_list(key, "--weight")?, parse_rational(p, "--weight")?);
            }
            (gen_mixture(&space, &weights)?, None)
        }
        Scenario::Dominance => {
            let (space, allowed) = gen_dominance_space();
            (JointChoiceRule::uniform(space), Some(allowed))
        }
    };
    print!("{}", rule_to_json(&rule, allowed));
    Ok(0)
}

/// Accepts a run report (uses its classification and extension sections) or a
/// bare classification.
pub fn certify(a: &CertifyArgs) -> Result<u8, Failure> {
    let (loaded, text) = load_rule(&a.rule)?;
    let rule = &loaded.rule;
    let cert_text = read(&a.certificate)?;
    let value: Value = serde_json::from_str(&cert_text)
        .map_err(|e| Failure::input(format!("{}: {e}", a.certificate.display())))?;
    let class_value = value.get("classification").cloned().unwrap_or_else(|| value.clone());
    let classification: Classification = serde_json::from_value(class_value)
        .map_err(|e| Failure::input(format!("{}: not a certificate: {e}", a.certificate.display())))?;
    if let Some(d) = value.pointer("/input/sha256").and_then(Value::as_str) {
        if d != digest(&text) {
            println!("note: report digest differs from the rule file; checking contents anyway");
        }
    }
    let mut ok = classification.verify(rule)?;
    let mut checked = vec![format!("{} evidence", classification.label)];
    if let Some(ext) = value.get("extension") {
        let k = ext.get("k").and_then(Value::as_u64);
        let avg = ext.get("on_average").and_then(Value::as_bool);
        let result = ext
            .get("result")
            .cloned()
            .map(serde_json::from_value::<sepchoice::linalg::FeasibilityResult>);
        match (k, avg, result) {
            (Some(k), Some(avg), Some(Ok(result))) => {
                let sys = extension_system(rule, k as usize, avg)?;
                ok &= result.verify(&sys.matrix, &sys.rhs);
                checked.push(format!("extension certificate (k = {k})"));
            }
            _ => return Err(Failure::input("malformed extension section")),
        }
    }
    if ok {
        println!("accepted: {}", checked.join(", "));
        Ok(0)
    } else {
        println!("rejected: {} does not hold for this rule", checked.join(", "));
        Ok(6)
    }
}

