//! Batch command-line front end.
//!
//! Exit codes: 0 on success (including "no interpretations"), 1 when a
//! document loads but fails validation, 2 on I/O, parse and usage errors.

use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

use crate::activity::{compile_constraints, Description, EventTypeRef};
use crate::formats::{load_episode, load_library, FormatError};
use crate::grounding::{resolve_forces, select_objects, Stronger, Tendency};
use crate::interval::DEFAULT_EPS;
use crate::ontology::Ontology;
use crate::parser::{ActivityParser, Episode};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 1;
pub const EXIT_ERROR: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "soma-kit", version, about = "Activity knowledge toolkit: validate libraries, parse episodes, query plans")]
struct Cli {
    /// Report style: human-readable text or key=value lines.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Machine,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Load a library and report validation issues.
    Validate { library: PathBuf },
    /// Parse an episode against the plans of a library.
    Parse {
        library: PathBuf,
        episode: PathBuf,
        /// Tolerance in seconds for point widening and endpoint comparison.
        #[arg(long, default_value_t = DEFAULT_EPS)]
        eps: f64,
        /// Print only the best N interpretations.
        #[arg(long)]
        top: Option<usize>,
    },
    /// Print the propagated relation between two phases of a plan.
    Query { library: PathBuf, plan: String, phase_a: String, phase_b: String },
    /// List scene objects that can fill each role of a task.
    Select {
        library: PathBuf,
        episode: PathBuf,
        task: String,
        #[arg(long, default_value_t = DEFAULT_EPS)]
        eps: f64,
    },
    /// Resolve a force-dynamic configuration to Motion or Rest.
    Force {
        /// Intrinsic tendency of the agonist: motion or rest.
        #[arg(long)]
        tendency: Tendency,
        /// Which side is stronger: agonist or antagonist.
        #[arg(long)]
        stronger: Stronger,
    },
}

struct Failure {
    code: i32,
    lines: Vec<String>,
}

impl Failure {
    fn usage(msg: impl Into<String>) -> Failure {
        Failure { code: EXIT_ERROR, lines: vec![msg.into()] }
    }
}

impl From<FormatError> for Failure {
    fn from(e: FormatError) -> Failure {
        match e {
            FormatError::ValidationFailed(issues) => Failure { code: EXIT_INVALID, lines: issues },
            e if e.is_validation() => Failure { code: EXIT_INVALID, lines: vec![e.to_string()] },
            e => Failure { code: EXIT_ERROR, lines: vec![e.to_string()] },
        }
    }
}

type Report = Result<Vec<String>, Failure>;

/// Runs one invocation. `args` includes the program name.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_ERROR } else { EXIT_OK };
            let target: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(target, "{}", e.render());
            return code;
        }
    };
    let machine = cli.format == Format::Machine;
    let result = match cli.command {
        Command::Validate { library } => validate(&library, machine),
        Command::Parse { library, episode, eps, top } => parse(&library, &episode, eps, top, machine),
        Command::Query { library, plan, phase_a, phase_b } => query(&library, &plan, &phase_a, &phase_b, machine),
        Command::Select { library, episode, task, eps } => select(&library, &episode, &task, eps, machine),
        Command::Force { tendency, stronger } => {
            let outcome = resolve_forces(tendency, stronger);
            Ok(vec![if machine { format!("outcome={outcome}") } else { outcome.to_string() }])
        }
    };
    match result {
        Ok(lines) => {
            for l in lines {
                let _ = writeln!(out, "{l}");
            }
            EXIT_OK
        }
        Err(f) => {
            if f.code == EXIT_INVALID && machine {
                let _ = writeln!(out, "issues={}", f.lines.len());
                for l in &f.lines {
                    let _ = writeln!(out, "issue={l}");
                }
            } else {
                for l in &f.lines {
                    let _ = writeln!(err, "error: {l}");
                }
            }
            f.code
        }
    }
}

fn validate(path: &PathBuf, machine: bool) -> Report {
    let (store, descriptions) = load_library(path)?;
    Ok(if machine {
        vec!["issues=0".into(), format!("concepts={}", store.concepts().count()), format!("descriptions={}", descriptions.len())]
    } else {
        vec![format!("ok: {} concepts, {} descriptions", store.concepts().count(), descriptions.len())]
    })
}

fn load_both(library: &PathBuf, episode: &PathBuf, eps: f64) -> Result<(Vec<Description>, Episode, Ontology), Failure> {
    if !eps.is_finite() || eps <= 0.0 {
        return Err(Failure::usage(format!("--eps must be a positive number of seconds, got {eps}")));
    }
    let (store, descriptions) = load_library(library)?;
    let (episode, store) = load_episode(episode, eps, &store)?;
    Ok((descriptions, episode, store))
}

fn parse(library: &PathBuf, episode: &PathBuf, eps: f64, top: Option<usize>, machine: bool) -> Report {
    let (descriptions, episode, store) = load_both(library, episode, eps)?;
    let parser = ActivityParser::new(&descriptions, &store, eps).map_err(|e| Failure { code: EXIT_INVALID, lines: vec![e.to_string()] })?;
    let all = parser.parse(&episode);
    let shown = &all[..top.unwrap_or(all.len()).min(all.len())];

    let mut lines = Vec::new();
    if machine {
        lines.push(format!("episode={}", episode.id));
        lines.push(format!("tokens={}", episode.tokens.len()));
        lines.push(format!("interpretations={}", all.len()));
        for (k, i) in shown.iter().enumerate() {
            let k = k + 1;
            lines.push(format!(
                "rank={k} plan={} coverage={:.6} phases={} earliest_start={}",
                i.plan, i.coverage, i.score.phases, i.score.earliest_start
            ));
            for (phase, token) in &i.phase_grounding {
                lines.push(format!("rank={k} phase={phase} token={token}"));
            }
            for (slot, entity) in &i.role_grounding {
                lines.push(format!("rank={k} role={slot} entity={entity}"));
            }
        }
    } else {
        lines.push(format!(
            "episode {}: {} token(s), {} interpretation(s)",
            episode.id,
            episode.tokens.len(),
            all.len()
        ));
        for (k, i) in shown.iter().enumerate() {
            lines.push(format!(
                "#{} {} coverage {:.3} ({} phases, starts at {})",
                k + 1,
                i.plan,
                i.coverage,
                i.score.phases,
                i.score.earliest_start
            ));
            for (phase, token) in &i.phase_grounding {
                let t = episode.token(token).expect("grounded token");
                lines.push(format!(
                    "  {phase} <- {token} {} [{}, {}] {}",
                    t.type_tag,
                    t.interval.start,
                    t.interval.end,
                    t.participants.join(",")
                ));
            }
            for (slot, entity) in &i.role_grounding {
                lines.push(format!("  {slot} = {entity}"));
            }
        }
    }
    Ok(lines)
}

/// Matches a user-supplied name against an id, a concept id, or a concept
/// name, in that order of preference.
fn resolve<'a, T>(
    items: &[&'a T],
    key: &str,
    id: impl Fn(&T) -> &str,
    concept: impl Fn(&T) -> &str,
    store: &Ontology,
    what: &str,
) -> Result<&'a T, Failure>
where
    T: 'a,
{
    if let Some(x) = items.iter().find(|x| id(x) == key) {
        return Ok(x);
    }
    let by_concept: Vec<&T> = items
        .iter()
        .copied()
        .filter(|x| concept(x) == key || store.concept(concept(x)).is_ok_and(|c| c.name == key))
        .collect();
    match by_concept.as_slice() {
        [one] => Ok(one),
        [] => Err(Failure::usage(format!("no {what} matches `{key}`"))),
        many => Err(Failure::usage(format!(
            "`{key}` is ambiguous: {}",
            many.iter().map(|x| id(x)).collect::<Vec<_>>().join(", ")
        ))),
    }
}

fn query(library: &PathBuf, plan: &str, a: &str, b: &str, machine: bool) -> Report {
    let (store, descriptions) = load_library(library)?;
    let d = resolve(&descriptions.iter().collect::<Vec<_>>(), plan, |d| d.id(), |d| d.concept(), &store, "description")?;
    let Some(structure) = d.structure() else {
        return Err(Failure::usage(format!("`{}` has no phases", d.id())));
    };
    let event_types: Vec<&EventTypeRef> = structure.event_types().collect();
    let phase_a = resolve(&event_types, a, |e| &e.id, |e| &e.concept, &store, "phase")?;
    let phase_b = resolve(&event_types, b, |e| &e.id, |e| &e.concept, &store, "phase")?;
    let net = compile_constraints(d).map_err(|e| Failure { code: EXIT_INVALID, lines: vec![e.to_string()] })?;
    let rel = net.query_by_name(&phase_a.id, &phase_b.id).map_err(|e| Failure::usage(e.to_string()))?;
    Ok(vec![if machine {
        format!("plan={} left={} right={} relation={rel}", d.id(), phase_a.id, phase_b.id)
    } else {
        rel.to_string()
    }])
}

fn select(library: &PathBuf, episode: &PathBuf, task: &str, eps: f64, machine: bool) -> Report {
    let (descriptions, episode, store) = load_both(library, episode, eps)?;
    let event_types: Vec<&EventTypeRef> =
        descriptions.iter().filter_map(|d| d.structure()).flat_map(|s| s.event_types()).collect();
    let et = resolve(&event_types, task, |e| &e.id, |e| &e.concept, &store, "task")?;
    let roles = select_objects(et, &episode.scene, &store).map_err(|e| Failure::usage(e.to_string()))?;
    Ok(roles
        .iter()
        .map(|(role, objs)| {
            let objs = objs.iter().cloned().collect::<Vec<_>>().join(",");
            if machine {
                format!("task={} role={role} candidates={objs}", et.id)
            } else {
                format!("{role}: {}", if objs.is_empty() { "-".to_string() } else { objs })
            }
        })
        .collect())
}
