//! Command-line front end. [`run`] is pure: it parses arguments and returns an
//! exit code with the rendered document, so tests can drive it in-process.

mod commands;
mod render;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::Value;

pub use commands::{CommandError, Output};

pub const EXIT_OK: i32 = 0;
pub const EXIT_REFUTED: i32 = 1;
pub const EXIT_INCONCLUSIVE: i32 = 2;
pub const EXIT_USAGE: i32 = 64;
pub const EXIT_FAILURE: i32 = 70;

/// Version of the JSON documents and of `schema/report.schema.json`.
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Parser, Debug, Clone, Serialize)]
#[command(name = "choiceless-lab", version, about = "Counts, witnesses, model builds and diagram checks over atom universes")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Write the document here instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Replay seed for every randomized step.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Format {
    Json,
    Text,
}

#[derive(Subcommand, Debug, Clone, Serialize)]
#[serde(tag = "command", rename_all = "kebab-case")]
pub enum Command {
    /// Sizes of the object kinds over k atoms.
    Count(CountArgs),
    /// Run one of the constructive procedures.
    Witness(WitnessArgs),
    /// Build a finite stage of a model.
    ModelBuild(ModelArgs),
    /// Check every edge of a model's diagram.
    Verify(VerifyArgs),
    /// Orbit of an object under the pointwise stabilizer of a finite set.
    Orbit(OrbitArgs),
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct CountArgs {
    /// `all` or a comma-separated list such as `pairs,square,fin,iseq,seq`.
    #[arg(long, default_value = "all")]
    pub kinds: String,
    #[arg(long, default_value_t = 5)]
    pub k: u64,
    /// Last ground size of the table; defaults to `k`.
    #[arg(long)]
    pub to: Option<u64>,
    /// Length cap for `seq`.
    #[arg(long, default_value_t = 3)]
    pub maxlen: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum WitnessKind {
    LemmaN,
    LemmaC,
    FinToOne,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct WitnessArgs {
    #[arg(value_enum)]
    pub kind: WitnessKind,
    /// Atoms to extract.
    #[arg(long, default_value_t = 64)]
    pub n: usize,
    /// Oracle table as JSON instead of a seeded random oracle (lemma-n only).
    #[arg(long)]
    pub oracle: Option<PathBuf>,
    /// Ground size for fin-to-one.
    #[arg(long, default_value_t = 6)]
    pub k: u64,
    #[arg(long, default_value_t = 3)]
    pub maxlen: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ModelKind {
    N,
    Z,
    Rn,
    Rc,
    Rz,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct ModelArgs {
    #[arg(long, value_enum)]
    pub model: ModelKind,
    #[arg(long, default_value_t = 1)]
    pub stages: usize,
    #[arg(long, default_value_t = 3)]
    pub size_bound: usize,
    #[arg(long, default_value_t = 4)]
    pub triples: u64,
    /// Base atoms of the flip tower.
    #[arg(long, default_value_t = 3)]
    pub k: u64,
    /// Rational points of the window.
    #[arg(long, default_value_t = 9)]
    pub points: u64,
    /// Include the full model, not only its summary.
    #[arg(long)]
    pub full: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum VerifyModel {
    N,
    Z,
    Rn,
    Rc,
    Rz,
    Empty,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct VerifyArgs {
    #[arg(long, value_enum)]
    pub model: VerifyModel,
    #[arg(long, default_value_t = 4)]
    pub triples: u64,
    /// Ground size for counting edges.
    #[arg(long, default_value_t = 5)]
    pub k: u64,
    /// Support size added to the counting codomain.
    #[arg(long, default_value_t = 3)]
    pub extra: u64,
    #[arg(long, default_value_t = 1)]
    pub stages: usize,
    /// Length cap of candidate sequences.
    #[arg(long, default_value_t = 2)]
    pub maxlen: u64,
    #[arg(long, default_value_t = 9)]
    pub points: u64,
    /// Random candidate tables drawn per edge.
    #[arg(long, default_value_t = 16)]
    pub samples: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum GroupKind {
    Free,
    Rc,
    Rn,
    Rz,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct OrbitArgs {
    #[arg(long, value_enum)]
    pub model: GroupKind,
    /// The object in its JSON form.
    #[arg(long)]
    pub object: String,
    /// JSON array of atoms to fix.
    #[arg(long, default_value = "[]")]
    pub fix: String,
    /// Free atoms, flip-tower base atoms or rational points, by model.
    #[arg(long, default_value_t = 4)]
    pub k: u64,
    #[arg(long, default_value_t = 3)]
    pub triples: u64,
    #[arg(long, default_value_t = 1)]
    pub stages: u32,
    #[arg(long, default_value_t = 10_000)]
    pub size_bound: usize,
}

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I) -> (i32, String)
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_USAGE,
            };
            return (code, e.render().to_string());
        }
    };
    run_cli(&cli)
}

pub fn run_cli(cli: &Cli) -> (i32, String) {
    match commands::execute(cli) {
        Ok(out) => {
            let text = match cli.format {
                Format::Json => {
                    let mut s = serde_json::to_string_pretty(&out.document).expect("documents serialize");
                    s.push('\n');
                    s
                }
                Format::Text => render::text(&cli.command, &out.document),
            };
            match &cli.out {
                Some(path) => match std::fs::write(path, text) {
                    Ok(()) => (out.code, String::new()),
                    Err(e) => (EXIT_FAILURE, format!("error: cannot write {}: {e}\n", path.display())),
                },
                None => (out.code, text),
            }
        }
        Err(CommandError::Usage(msg)) => (EXIT_USAGE, format!("error: {msg}\n")),
        Err(CommandError::Failed(msg)) => (EXIT_FAILURE, format!("error: {msg}\n")),
    }
}

/// The envelope shared by every command except `verify`.
pub(crate) fn envelope(cli: &Cli, result: Value) -> Value {
    serde_json::json!({
        "version": SCHEMA_VERSION,
        "command": cli.command,
        "seed": cli.seed,
        "result": result,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn go(args: &str) -> (i32, String) {
        run(std::iter::once("choiceless-lab").chain(args.split_whitespace()))
    }

    #[test]
    fn count_row_and_verdict() {
        let (code, text) = go("count --kinds all --k 5");
        assert_eq!(code, EXIT_OK);
        let row: Vec<&str> = text.lines().nth(1).unwrap().split_whitespace().collect();
        assert_eq!(row[..5], ["5", "10", "25", "32", "326"]);
        assert!(text.contains("strict chain holds"));
        let (_, json) = go("count --k 4 --format json");
        let doc: Value = serde_json::from_str(&json).unwrap();
        assert_eq!(doc["result"]["verdict"], "strict chain fails");
        assert_eq!(doc["seed"], 0);
    }

    #[test]
    fn usage_errors() {
        assert_eq!(go("witness lemma-n --n 0").0, EXIT_USAGE);
        assert_eq!(go("verify --model nope").0, EXIT_USAGE);
        assert_eq!(go("count --kinds fin,bogus").0, EXIT_USAGE);
        assert_eq!(go("orbit --model free --object nope").0, EXIT_USAGE);
        assert_eq!(go("--help").0, EXIT_OK);
    }

    #[test]
    fn verify_exit_codes() {
        let (code, json) = go("verify --model rc --triples 4 --format json");
        assert_eq!(code, EXIT_OK);
        let doc: Value = serde_json::from_str(&json).unwrap();
        assert_eq!(doc.as_array().unwrap().len(), 7);
        assert_eq!(go("verify --model empty").0, EXIT_INCONCLUSIVE);
    }

    #[test]
    fn text_is_a_projection() {
        let (_, json) = go("witness lemma-n --n 6 --seed 3 --format json");
        let (_, text) = go("witness lemma-n --n 6 --seed 3");
        let doc: Value = serde_json::from_str(&json).unwrap();
        assert!(text.contains(&format!("replayed: {}", doc["result"]["replayed"])));
        assert_eq!(doc["command"]["kind"], "lemma-n");
    }
}
