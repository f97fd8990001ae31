//! Text formats: derivation files, algebra files and elimination traces.
//!
//! Lines starting with `#` are comments everywhere. Derivation files look
//! like
//!
//! ```text
//! premise: p0
//! 1. p0 ; premise 1
//! 2. p0 -> []p0 ; axiom Ax1
//! 3. []p0 ; mp 1 2
//! ```
//!
//! with steps numbered from 1, premises numbered from 1 in the order given,
//! and substitutions written `[p0:=<formula>; p1:=<formula>]`.

use std::fmt::Write as _;

use km_core::algebra::{BoxTable, FiniteHeytingAlgebra};
use km_core::eliminate::EliminationTrace;
use km_core::formula::parse;
use km_core::{AxiomId, Derivation, Formula, Justification, Step, Substitution};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("line {line}: {message}")]
pub struct FormatError {
    pub line: usize,
    pub message: String,
}

fn err(line: usize, message: impl Into<String>) -> FormatError {
    FormatError {
        line,
        message: message.into(),
    }
}

fn formula(line: usize, text: &str) -> Result<Formula, FormatError> {
    parse(text.trim()).map_err(|e| err(line, format!("{} at column {}", e.message, e.position + 1)))
}

/// Content lines with their 1-based line numbers.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

/// Parses `[p0:=A; p1:=B]`, or nothing for the empty substitution.
pub fn parse_substitution(line: usize, text: &str) -> Result<Substitution, FormatError> {
    let text = text.trim();
    if text.is_empty() {
        return Ok(Substitution::new());
    }
    let inner = text
        .strip_prefix('[')
        .and_then(|t| t.strip_suffix(']'))
        .ok_or_else(|| err(line, "substitution must be enclosed in [ ]"))?;
    let mut s = Substitution::new();
    for part in inner.split(';').map(str::trim).filter(|p| !p.is_empty()) {
        let (var, image) = part
            .split_once(":=")
            .ok_or_else(|| err(line, "expected p<n>:=<formula>"))?;
        let v = match formula(line, var)? {
            Formula::Var(v) => v,
            _ => return Err(err(line, "substitution target must be a variable")),
        };
        if s.insert(v, formula(line, image)?).is_some() {
            return Err(err(line, format!("p{v} bound twice")));
        }
    }
    Ok(s)
}

fn index(line: usize, text: &str, what: &str) -> Result<usize, FormatError> {
    match text.parse::<usize>() {
        Ok(n) if n >= 1 => Ok(n - 1),
        _ => Err(err(line, format!("expected a {what} number, found {text:?}"))),
    }
}

fn justification(line: usize, text: &str) -> Result<Justification, FormatError> {
    let text = text.trim();
    let (kw, rest) = text.split_once(char::is_whitespace).unwrap_or((text, ""));
    let rest = rest.trim();
    let head_and_subst = |rest: &str| -> (String, String) {
        let (a, b) = rest.split_once(char::is_whitespace).unwrap_or((rest, ""));
        (a.to_string(), b.to_string())
    };
    match kw {
        "axiom" => {
            let (id, s) = head_and_subst(rest);
            let id = AxiomId::from_name(&id).ok_or_else(|| err(line, format!("unknown axiom {id:?}")))?;
            Ok(Justification::Axiom {
                id,
                subst: parse_substitution(line, &s)?,
            })
        }
        "premise" => {
            let (k, s) = head_and_subst(rest);
            Ok(Justification::Premise {
                index: index(line, &k, "premise")?,
                subst: parse_substitution(line, &s)?,
            })
        }
        "mp" => {
            let parts: Vec<&str> = rest.split_whitespace().collect();
            match parts.as_slice() {
                [i, j] => Ok(Justification::ModusPonens {
                    minor: index(line, i, "step")?,
                    major: index(line, j, "step")?,
                }),
                _ => Err(err(line, "mp takes two step numbers")),
            }
        }
        "subst" => {
            let (i, s) = head_and_subst(rest);
            Ok(Justification::Subst {
                source: index(line, &i, "step")?,
                subst: parse_substitution(line, &s)?,
            })
        }
        other => Err(err(line, format!("unknown justification {other:?}"))),
    }
}

/// Parses a derivation file. Only syntax is checked; use
/// [`km_core::calculus::verify`] for the step rules.
pub fn parse_derivation(text: &str) -> Result<Derivation, FormatError> {
    let mut d = Derivation::default();
    for (line, l) in content_lines(text) {
        if let Some(p) = l.strip_prefix("premise:") {
            if !d.steps.is_empty() {
                return Err(err(line, "premises must precede the steps"));
            }
            d.premises.push(formula(line, p)?);
            continue;
        }
        let (num, rest) = l
            .split_once('.')
            .ok_or_else(|| err(line, "expected <n>. <formula> ; <justification>"))?;
        let n = index(line, num.trim(), "step")?;
        if n != d.steps.len() {
            return Err(err(
                line,
                format!("step numbers must be consecutive, expected {}", d.steps.len() + 1),
            ));
        }
        let (f, j) = rest
            .split_once(';')
            .ok_or_else(|| err(line, "missing ; before the justification"))?;
        d.steps.push(Step {
            formula: formula(line, f)?,
            justification: justification(line, j)?,
        });
    }
    if d.steps.is_empty() {
        return Err(err(text.lines().count().max(1), "no steps"));
    }
    Ok(d)
}

fn write_subst(out: &mut String, s: &Substitution) {
    if !s.is_empty() {
        let _ = write!(out, " {s}");
    }
}

/// Prints a derivation, preceded by `header` lines as comments.
pub fn print_derivation(d: &Derivation, header: &[String]) -> String {
    let mut out = String::new();
    for h in header {
        let _ = writeln!(out, "# {h}");
    }
    for p in &d.premises {
        let _ = writeln!(out, "premise: {p}");
    }
    for (i, st) in d.steps.iter().enumerate() {
        let _ = write!(out, "{}. {} ; ", i + 1, st.formula);
        match &st.justification {
            Justification::Axiom { id, subst } => {
                let _ = write!(out, "axiom {id}");
                write_subst(&mut out, subst);
            }
            Justification::Premise { index, subst } => {
                let _ = write!(out, "premise {}", index + 1);
                write_subst(&mut out, subst);
            }
            Justification::ModusPonens { minor, major } => {
                let _ = write!(out, "mp {} {}", minor + 1, major + 1);
            }
            Justification::Subst { source, subst } => {
                let _ = write!(out, "subst {}", source + 1);
                write_subst(&mut out, subst);
            }
        }
        out.push('\n');
    }
    out
}

/// Values read from the header comments of a derivation file:
/// `# key: value` lines before the first content line.
pub fn header_value<'a>(text: &'a str, key: &str) -> Option<&'a str> {
    text.lines()
        .map(str::trim)
        .take_while(|l| l.is_empty() || l.starts_with('#'))
        .filter_map(|l| l.strip_prefix('#'))
        .filter_map(|l| l.trim().split_once(':'))
        .find(|(k, _)| k.trim() == key)
        .map(|(_, v)| v.trim())
}

/// An algebra file: the algebra in canonical numbering and an optional box
/// table, renumbered accordingly.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlgebraFile {
    pub algebra: FiniteHeytingAlgebra,
    pub box_table: Option<BoxTable>,
}

pub fn parse_algebra(text: &str) -> Result<AlgebraFile, FormatError> {
    let mut lines = content_lines(text);
    let (line, l) = lines.next().ok_or_else(|| err(1, "empty algebra file"))?;
    let n: usize = l
        .strip_prefix("size:")
        .and_then(|s| s.trim().parse().ok())
        .filter(|&n| n > 0)
        .ok_or_else(|| err(line, "expected size: <n>"))?;
    let (line, l) = lines.next().ok_or_else(|| err(line, "expected order:"))?;
    let first = l
        .strip_prefix("order:")
        .ok_or_else(|| err(line, "expected order:"))?
        .trim();
    let mut row_texts: Vec<(usize, String)> = Vec::new();
    if !first.is_empty() {
        row_texts.push((line, first.to_string()));
    }
    while row_texts.len() < n {
        let (line, l) = lines
            .next()
            .ok_or_else(|| err(line, format!("expected {n} order rows")))?;
        row_texts.push((line, l.to_string()));
    }
    let mut rows = Vec::with_capacity(n);
    for (line, r) in &row_texts {
        let row: Vec<bool> = r
            .split_whitespace()
            .map(|c| match c {
                "0" => Ok(false),
                "1" => Ok(true),
                _ => Err(err(*line, format!("order entries are 0 or 1, found {c:?}"))),
            })
            .collect::<Result<_, _>>()?;
        if row.len() != n {
            return Err(err(*line, format!("order row has {} entries, expected {n}", row.len())));
        }
        rows.push(row);
    }
    let (algebra, new_index) =
        FiniteHeytingAlgebra::from_order(&rows).map_err(|e| err(row_texts[0].0, e.to_string()))?;
    let mut box_table = None;
    if let Some((line, l)) = lines.next() {
        let b = l
            .strip_prefix("box:")
            .ok_or_else(|| err(line, "expected box: or end of file"))?;
        let vals: Vec<usize> = b
            .split_whitespace()
            .map(|x| x.parse::<usize>().ok().filter(|&x| x < n))
            .collect::<Option<_>>()
            .ok_or_else(|| err(line, format!("box entries are element indices below {n}")))?;
        if vals.len() != n {
            return Err(err(line, format!("box has {} entries, expected {n}", vals.len())));
        }
        let mut t = vec![0; n];
        for (a, &v) in vals.iter().enumerate() {
            t[new_index[a]] = new_index[v];
        }
        box_table = Some(BoxTable(t));
        if let Some((line, _)) = lines.next() {
            return Err(err(line, "unexpected content after box:"));
        }
    }
    Ok(AlgebraFile { algebra, box_table })
}

pub fn print_algebra(alg: &FiniteHeytingAlgebra, box_table: Option<&BoxTable>) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "size: {}", alg.size());
    out.push_str("order:\n");
    for row in alg.order_rows() {
        let cells: Vec<&str> = row.iter().map(|&b| if b { "1" } else { "0" }).collect();
        let _ = writeln!(out, "{}", cells.join(" "));
    }
    if let Some(b) = box_table {
        let cells: Vec<String> = b.0.iter().map(usize::to_string).collect();
        let _ = writeln!(out, "box: {}", cells.join(" "));
    }
    out
}

/// The trace report of one elimination step.
pub fn print_trace(t: &EliminationTrace) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "chosen box: {}", t.chosen_box);
    let _ = writeln!(out, "ax3 instances: {}", t.ax3_instances.len());
    for a in &t.ax3_instances {
        let _ = writeln!(out, "  {a}");
    }
    let _ = writeln!(out, "delta: {}", t.delta);
    out.push_str("cases:\n");
    for (i, tag) in t.case_tags.iter().enumerate() {
        let _ = writeln!(out, "  {} {tag}", i + 1);
    }
    let _ = writeln!(out, "rank: {} -> {}", t.input_rank, t.output_rank);
    out
}

/// One-line summary of a trace, for file headers.
pub fn trace_summary(t: &EliminationTrace) -> String {
    format!(
        "eliminated {} delta {} rank {} -> {}",
        t.chosen_box, t.delta, t.input_rank, t.output_rank
    )
}
