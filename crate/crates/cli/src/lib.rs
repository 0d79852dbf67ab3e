//! The `eldef` command line: definability queries, entailment checks, explanations,
//! classification and generation of the nested test family.
//!
//! Exit codes: 0 definable or entailed, 3 not definable or not entailed, 2 caps hit with
//! no definition left, 1 usage, input or internal error.

use std::ffi::OsString;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use eldef_core::definability::{define_with, generate_family, DefineOptions, DefinitionResult, LabelLimits};
use eldef_core::reasoner::{classify, proofs, render_proof, InferenceLog, ProofLimits};
use eldef_core::{
    parse_axiom, parse_concept, parse_ontology, saturate, signature_of, Axiom, Concept, Error, Inclusion, Ontology, Serialize, Signature,
    Symbol, System,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_TRUNCATED: i32 = 2;
pub const EXIT_NEGATIVE: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "eldef", version, about = "Definitions of EL concepts over a target signature")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compute every definition of a concept over the target signature.
    Define(DefineArgs),
    /// Decide whether the ontology entails an axiom.
    Entails(EntailsArgs),
    /// Show why a computed definition is equivalent to the concept.
    Explain(ExplainArgs),
    /// List the entailed inclusions between concept names.
    Classify(ClassifyArgs),
    /// Print the nested family ontology of depth n.
    Generate(GenerateArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Calculus {
    /// The basic calculus.
    A,
    /// The proof-tracing calculus used for label propagation.
    B,
}

impl From<Calculus> for System {
    fn from(c: Calculus) -> Self {
        match c {
            Calculus::A => System::A,
            Calculus::B => System::B,
        }
    }
}

#[derive(Debug, Args)]
pub struct QueryArgs {
    /// Ontology file in functional syntax.
    #[arg(long)]
    pub ontology: PathBuf,
    /// The concept to define, e.g. `A` or `ObjectIntersectionOf(A B)`.
    #[arg(long)]
    pub concept: String,
    /// Comma-separated target symbols. Kinds are taken from the ontology; `role:` or
    /// `class:` fixes the kind of a symbol that does not occur in it.
    #[arg(long, value_delimiter = ',', conflicts_with = "exclude")]
    pub signature: Vec<String>,
    /// Comma-separated symbols the definitions must avoid; the target signature is every
    /// other symbol of the ontology.
    #[arg(long, value_delimiter = ',', num_args = 0..)]
    pub exclude: Option<Vec<String>>,
    /// Add every role of the ontology to the target signature.
    #[arg(long)]
    pub all_roles: bool,
    /// Largest definition kept, counted in names, constants and restrictions.
    #[arg(long)]
    pub max_concept_size: Option<usize>,
    /// Keep one smallest definition per class of definitions equivalent wrt the ontology.
    #[arg(long)]
    pub semantic_dedup: bool,
}

#[derive(Debug, Args)]
pub struct DefineArgs {
    #[command(flatten)]
    pub query: QueryArgs,
    /// Number of definitions printed.
    #[arg(long, env = "ELDEF_MAX_DEFINITIONS")]
    pub max_definitions: Option<usize>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Print proofs of both inclusions for every printed definition.
    #[arg(long)]
    pub explain: bool,
}

#[derive(Debug, Args)]
pub struct ExplainArgs {
    #[command(flatten)]
    pub query: QueryArgs,
    /// Position of the definition in the output of `define`, starting at 1.
    #[arg(long, default_value_t = 1)]
    pub index: usize,
}

#[derive(Debug, Args)]
pub struct EntailsArgs {
    #[arg(long)]
    pub ontology: PathBuf,
    /// A `SubClassOf` or `EquivalentClasses` axiom.
    pub axiom: String,
    /// Print a proof of every entailed inclusion.
    #[arg(long)]
    pub explain: bool,
    #[arg(long, value_enum, default_value_t = Calculus::A)]
    pub system: Calculus,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct ClassifyArgs {
    #[arg(long)]
    pub ontology: PathBuf,
    #[arg(long, value_enum, default_value_t = Calculus::A)]
    pub system: Calculus,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    /// Nesting depth, at least 1.
    #[arg(value_parser = clap::value_parser!(u16).range(1..))]
    pub n: u16,
}

#[derive(Debug)]
enum CliError {
    Usage(String),
    Core(Error),
    Io(io::Error),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Io(e)
    }
}

type Outcome = Result<i32, CliError>;

/// Parses `args` and runs the command, writing results to `out` and diagnostics to `err`.
/// Returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let shown = matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion);
            return if shown {
                let _ = write!(out, "{e}");
                EXIT_OK
            } else {
                let _ = write!(err, "{e}");
                EXIT_ERROR
            };
        }
    };
    let result = match &cli.command {
        Command::Define(a) => cmd_define(a, out, err),
        Command::Entails(a) => cmd_entails(a, out),
        Command::Explain(a) => cmd_explain(a, out, err),
        Command::Classify(a) => cmd_classify(a, out),
        Command::Generate(a) => cmd_generate(a, out),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            let code = match &e {
                CliError::Core(Error::ResourceLimit { .. }) => EXIT_TRUNCATED,
                _ => EXIT_ERROR,
            };
            let _ = match e {
                CliError::Usage(m) => writeln!(err, "error: {m}"),
                CliError::Core(e) => writeln!(err, "error: {e}"),
                CliError::Io(e) => writeln!(err, "error: {e}"),
            };
            code
        }
    }
}

fn read_ontology(path: &Path) -> Result<Ontology, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
    parse_ontology(&text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
}

fn read_concept(text: &str) -> Result<Concept, CliError> {
    parse_concept(text).map_err(|e| CliError::Usage(format!("concept `{text}`: {e}")))
}

/// One `--signature`/`--exclude` entry as symbols.
fn resolve_symbol(item: &str, known: &Signature, err: &mut dyn Write) -> Result<Vec<Symbol>, CliError> {
    let (kind, name) = match item.split_once(':') {
        Some(("role", n)) => (Some(true), n),
        Some(("class", n)) => (Some(false), n),
        _ => (None, item),
    };
    if !matches!(parse_concept(name), Ok(Concept::Name(ref n)) if n.as_ref() == name) {
        return Err(CliError::Usage(format!("`{item}` is not a symbol name")));
    }
    Ok(match kind {
        Some(true) => vec![Symbol::role(name)],
        Some(false) => vec![Symbol::concept(name)],
        None => {
            let found: Vec<Symbol> = known.iter().filter(|s| s.name.as_ref() == name).cloned().collect();
            if found.is_empty() {
                writeln!(err, "warning: `{name}` does not occur in the ontology; treating it as a concept name")?;
                vec![Symbol::concept(name)]
            } else {
                found
            }
        }
    })
}

fn effective_signature(q: &QueryArgs, o: &Ontology, c: &Concept, err: &mut dyn Write) -> Result<Signature, CliError> {
    let known = signature_of(o).union(&signature_of(c));
    let items = |list: &[String], err: &mut dyn Write| -> Result<Vec<Symbol>, CliError> {
        let mut out = Vec::new();
        for item in list.iter().map(|s| s.trim()).filter(|s| !s.is_empty()) {
            out.extend(resolve_symbol(item, &known, err)?);
        }
        Ok(out)
    };
    let mut sigma: Signature = match &q.exclude {
        Some(list) => {
            let drop = items(list, err)?;
            signature_of(o).iter().filter(|s| !drop.contains(s)).cloned().collect()
        }
        None => items(&q.signature, err)?.into_iter().collect(),
    };
    if q.all_roles {
        for r in signature_of(o).roles() {
            sigma.insert(r.clone());
        }
    }
    Ok(sigma)
}

struct Query {
    ontology: Ontology,
    concept: Concept,
    sigma: Signature,
    result: DefinitionResult,
}

fn run_query(q: &QueryArgs, err: &mut dyn Write) -> Result<Query, CliError> {
    let ontology = read_ontology(&q.ontology)?;
    let concept = read_concept(&q.concept)?;
    let sigma = effective_signature(q, &ontology, &concept, err)?;
    let mut limits = LabelLimits::default();
    if let Some(size) = q.max_concept_size {
        limits.max_concept_size = size;
    }
    let result = define_with(&ontology, &concept, &sigma, &DefineOptions { limits, semantic_dedup: q.semantic_dedup })?;
    Ok(Query { ontology, concept, sigma, result })
}

/// A proof of `lhs ⊑ rhs` from `log`, or of `lhs ⊑ ⊥` when that is how the inclusion follows.
fn render_inclusion(log: &InferenceLog, lhs: &Concept, rhs: &Concept) -> String {
    let first = |goal: Inclusion| proofs(log, &goal, ProofLimits { max_proofs: 1 }).into_iter().next();
    if let Some(p) = first(Inclusion::new(lhs.clone(), rhs.clone())) {
        return render_proof(&p);
    }
    match first(Inclusion::new(lhs.clone(), Concept::Bottom)) {
        Some(p) => format!("{} is unsatisfiable:\n{}", lhs.serialize(), render_proof(&p)),
        None => "no proof found\n".to_string(),
    }
}

/// Proofs of `c ⊑ d` and `d ⊑ c`.
fn explain_definition(o: &Ontology, c: &Concept, d: &Concept) -> Result<(String, String), CliError> {
    let log = saturate(o, &[c.clone(), d.clone()], System::A)?;
    Ok((render_inclusion(&log, c, d), render_inclusion(&log, d, c)))
}

fn indent(text: &str) -> String {
    text.lines().map(|l| format!("  {l}\n")).collect()
}

#[derive(serde::Serialize)]
struct DefineStats {
    conclusions: usize,
    inferences: usize,
    inferences_visited: usize,
    label_size: usize,
    definitions_total: usize,
}

#[derive(serde::Serialize)]
struct Explanation {
    definition: String,
    concept_below: String,
    concept_above: String,
}

#[derive(serde::Serialize)]
struct DefineReport {
    format: u32,
    definable: bool,
    definitions: Vec<String>,
    truncated: bool,
    stats: DefineStats,
    #[serde(skip_serializing_if = "Option::is_none")]
    explanations: Option<Vec<Explanation>>,
}

fn cmd_define(a: &DefineArgs, out: &mut dyn Write, err: &mut dyn Write) -> Outcome {
    let q = run_query(&a.query, err)?;
    let r = &q.result;
    let shown = &r.definitions[..a.max_definitions.unwrap_or(usize::MAX).min(r.definitions.len())];
    let mut explanations = Vec::new();
    if a.explain {
        for d in shown {
            let (below, above) = explain_definition(&q.ontology, &q.concept, d)?;
            explanations.push(Explanation { definition: d.serialize(), concept_below: below, concept_above: above });
        }
    }
    match a.format {
        Format::Json => {
            let report = DefineReport {
                format: 1,
                definable: r.definable,
                definitions: shown.iter().map(Serialize::serialize).collect(),
                truncated: r.truncated,
                stats: DefineStats {
                    conclusions: r.stats.conclusions,
                    inferences: r.stats.inferences,
                    inferences_visited: r.stats.inferences_visited,
                    label_size: r.stats.label_size,
                    definitions_total: r.definitions.len(),
                },
                explanations: a.explain.then_some(explanations),
            };
            let text = serde_json::to_string_pretty(&report).map_err(io::Error::from)?;
            writeln!(out, "{text}")?;
        }
        Format::Text if a.explain => {
            for e in &explanations {
                writeln!(out, "{}", e.definition)?;
                write!(out, "{}", indent(&format!("proof of {} ⊑ definition:\n{}", q.concept.serialize(), indent(&e.concept_below))))?;
                write!(out, "{}", indent(&format!("proof of definition ⊑ {}:\n{}", q.concept.serialize(), indent(&e.concept_above))))?;
            }
        }
        Format::Text => {
            for d in shown {
                writeln!(out, "{}", d.serialize())?;
            }
        }
    }
    if !r.definable {
        writeln!(err, "no definition of {} over {{{}}} exists", q.concept.serialize(), signature_list(&q.sigma))?;
        return Ok(EXIT_NEGATIVE);
    }
    if shown.len() < r.definitions.len() {
        writeln!(err, "note: {} more definition(s) not shown", r.definitions.len() - shown.len())?;
    }
    if r.truncated {
        writeln!(err, "warning: a label cap was reached; further definitions may exist")?;
    }
    Ok(EXIT_OK)
}

fn signature_list(sigma: &Signature) -> String {
    sigma.iter().map(|s| s.name.to_string()).collect::<Vec<_>>().join(", ")
}

fn cmd_explain(a: &ExplainArgs, out: &mut dyn Write, err: &mut dyn Write) -> Outcome {
    let q = run_query(&a.query, err)?;
    if !q.result.definable {
        writeln!(err, "no definition of {} over {{{}}} exists", q.concept.serialize(), signature_list(&q.sigma))?;
        return Ok(EXIT_NEGATIVE);
    }
    let count = q.result.definitions.len();
    let d = a
        .index
        .checked_sub(1)
        .and_then(|i| q.result.definitions.get(i))
        .ok_or_else(|| CliError::Usage(format!("index {} is out of range: there are {count} definition(s)", a.index)))?;
    let (below, above) = explain_definition(&q.ontology, &q.concept, d)?;
    writeln!(out, "definition {}: {}", a.index, d.serialize())?;
    writeln!(out, "\nproof of {} ⊑ {}:", q.concept.serialize(), d.serialize())?;
    write!(out, "{}", indent(&below))?;
    writeln!(out, "\nproof of {} ⊑ {}:", d.serialize(), q.concept.serialize())?;
    write!(out, "{}", indent(&above))?;
    Ok(EXIT_OK)
}

#[derive(serde::Serialize)]
struct EntailsReport {
    format: u32,
    entailed: bool,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    proofs: Vec<String>,
}

fn cmd_entails(a: &EntailsArgs, out: &mut dyn Write) -> Outcome {
    let o = read_ontology(&a.ontology)?;
    let axiom = parse_axiom(&a.axiom).map_err(|e| CliError::Usage(format!("axiom `{}`: {e}", a.axiom)))?;
    let (l, r) = axiom.sides();
    let log = saturate(&o, &[l.clone(), r.clone()], a.system.into())?;
    let mut directions = vec![(l, r)];
    if matches!(axiom, Axiom::EquivalentClasses(..)) {
        directions.push((r, l));
    }
    let entailed = directions.iter().all(|(x, y)| log.entails(x, y));
    let proofs: Vec<String> =
        if a.explain && entailed { directions.iter().map(|(x, y)| render_inclusion(&log, x, y)).collect() } else { Vec::new() };
    match a.format {
        Format::Json => {
            let text = serde_json::to_string_pretty(&EntailsReport { format: 1, entailed, proofs }).map_err(io::Error::from)?;
            writeln!(out, "{text}")?;
        }
        Format::Text => {
            writeln!(out, "{}", if entailed { "entailed" } else { "not entailed" })?;
            for p in &proofs {
                write!(out, "{p}")?;
            }
        }
    }
    Ok(if entailed { EXIT_OK } else { EXIT_NEGATIVE })
}

fn cmd_classify(a: &ClassifyArgs, out: &mut dyn Write) -> Outcome {
    let o = read_ontology(&a.ontology)?;
    let inclusions = classify(&o, a.system.into())?;
    let lines: Vec<String> = inclusions.iter().map(|i| Axiom::SubClassOf(i.lhs.clone(), i.rhs.clone()).serialize()).collect();
    match a.format {
        Format::Json => {
            let text = serde_json::to_string_pretty(&serde_json::json!({ "format": 1, "inclusions": lines })).map_err(io::Error::from)?;
            writeln!(out, "{text}")?;
        }
        Format::Text => {
            for l in &lines {
                writeln!(out, "{l}")?;
            }
        }
    }
    Ok(EXIT_OK)
}

fn cmd_generate(a: &GenerateArgs, out: &mut dyn Write) -> Outcome {
    let (o, _, _) = generate_family(a.n.into());
    writeln!(out, "{}", o.serialize())?;
    Ok(EXIT_OK)
}
