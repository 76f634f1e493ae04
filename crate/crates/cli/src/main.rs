//! Command-line front end: file I/O in the automaton text formats,
//! corpus generators, and one subcommand per decider or construction.
//!
//! Boolean deciders exit 0 for true and 1 for false so the tool
//! composes in shell pipelines; usage and parse errors exit 2.
//! Human-readable output goes to stdout, counterexamples and errors to
//! stderr. `--json` switches reports to a machine-readable form with
//! stable key order.

mod json;
mod report;

use std::io::Read;
use std::process::ExitCode;

use resta::corpus::{gen_an, gen_aprime_n, gen_named, NamedLanguage};
use resta::format::{
    parse_automaton, parse_stream_tokens, write_automaton, write_bottom_up, write_top_down,
    AnyAutomaton,
};
use resta::residuals_down::{canonical_down_rfta, is_down_rfta};
use resta::residuals_up::{canonical_up_rfta, is_bottom_up_rfta, is_canonical_up_rfta, isomorphic};
use resta::trees::parse_term;
use resta::Error;

const USAGE: &str = "\
usage: resta <command> [options]

commands:
  accepts AUT TERM          decide membership of TERM (exit 0/1)
  accepts AUT --streaming   read preorder `SYMBOL ARITY` tokens on stdin
  determinize AUT           emit the subset-construction automaton
  minimize AUT              emit the minimal deterministic automaton
  trim AUT                  emit the trimmed automaton
  equiv AUT1 AUT2           decide language equality (exit 0/1)
  residuals AUT --direction up|down    residual report
  primes AUT --direction up|down       prime-residual report
  canonical AUT --direction up|down    emit the canonical residual automaton
  is-rfta AUT               every state language a residual? (exit 0/1)
  is-canonical AUT          canonical residual automaton? (exit 0/1)
  classify AUT [--verify]   classification report for the language
  gen NAME [N]              emit a corpus automaton
                            (example1 | Lprime | fab_fba | An N | Aprime N)

options:
  --json        machine-readable reports
  --direction   up (bottom-up residuals) or down (top-down residuals)
  --verify      cross-check the report against the enumeration oracle;
                RESTA_MAX_HEIGHT overrides the bounds
  AUT           path to an automaton file, or `-` for stdin
";

fn main() -> ExitCode {
    let args: Vec<String> = std::env::args().skip(1).collect();
    match run(&args) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("resta: {e}");
            ExitCode::from(2)
        }
    }
}

struct Parsed {
    command: String,
    positional: Vec<String>,
    json: bool,
    streaming: bool,
    verify: bool,
    direction: Option<String>,
}

fn parse_args(args: &[String]) -> Result<Parsed, Error> {
    let mut it = args.iter();
    let command = it
        .next()
        .ok_or_else(|| Error::InvalidParameter("missing command".into()))?
        .clone();
    let mut parsed = Parsed {
        command,
        positional: Vec::new(),
        json: false,
        streaming: false,
        verify: false,
        direction: None,
    };
    while let Some(arg) = it.next() {
        match arg.as_str() {
            "--json" => parsed.json = true,
            "--streaming" => parsed.streaming = true,
            "--verify" => parsed.verify = true,
            "--direction" => {
                let value = it.next().ok_or_else(|| {
                    Error::InvalidParameter("--direction needs a value".into())
                })?;
                parsed.direction = Some(value.clone());
            }
            other if other.starts_with("--") => {
                return Err(Error::InvalidParameter(format!("unknown flag `{other}`")));
            }
            other => parsed.positional.push(other.to_string()),
        }
    }
    Ok(parsed)
}

fn read_automaton(path: &str) -> Result<AnyAutomaton, Error> {
    let text = if path == "-" {
        let mut buf = String::new();
        std::io::stdin()
            .read_to_string(&mut buf)
            .map_err(|e| Error::InvalidParameter(format!("cannot read stdin: {e}")))?;
        buf
    } else {
        std::fs::read_to_string(path)
            .map_err(|e| Error::InvalidParameter(format!("cannot read `{path}`: {e}")))?
    };
    parse_automaton(&text)
}

fn positional<'a>(parsed: &'a Parsed, index: usize, name: &str) -> Result<&'a str, Error> {
    parsed
        .positional
        .get(index)
        .map(String::as_str)
        .ok_or_else(|| Error::InvalidParameter(format!("missing {name} argument")))
}

fn direction(parsed: &Parsed) -> Result<bool, Error> {
    match parsed.direction.as_deref() {
        Some("up") => Ok(true),
        Some("down") => Ok(false),
        Some(other) => Err(Error::InvalidParameter(format!(
            "--direction must be `up` or `down`, found `{other}`"
        ))),
        None => Err(Error::InvalidParameter(
            "this command needs --direction up|down".into(),
        )),
    }
}

fn bool_exit(value: bool) -> ExitCode {
    if value {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn run(args: &[String]) -> Result<ExitCode, Error> {
    if args.is_empty() || args[0] == "--help" || args[0] == "help" {
        print!("{USAGE}");
        return Ok(if args.is_empty() {
            ExitCode::from(2)
        } else {
            ExitCode::SUCCESS
        });
    }
    let parsed = parse_args(args)?;
    match parsed.command.as_str() {
        "accepts" => {
            let automaton = read_automaton(positional(&parsed, 0, "AUT")?)?;
            let accepted = if parsed.streaming {
                let mut buf = String::new();
                std::io::stdin()
                    .read_to_string(&mut buf)
                    .map_err(|e| Error::InvalidParameter(format!("cannot read stdin: {e}")))?;
                let tokens = parse_stream_tokens(&buf);
                match &automaton {
                    AnyAutomaton::Up(a) => a.accepts_stream(tokens)?,
                    AnyAutomaton::Down(a) => a.accepts_stream(tokens)?,
                }
            } else {
                let term = parse_term(
                    automaton.alphabet(),
                    positional(&parsed, 1, "TERM")?,
                )?;
                match &automaton {
                    AnyAutomaton::Up(a) => a.accepts(&term)?,
                    AnyAutomaton::Down(a) => a.accepts(&term)?,
                }
            };
            println!("{}", if accepted { "accepted" } else { "rejected" });
            Ok(bool_exit(accepted))
        }
        "determinize" | "minimize" | "trim" => {
            let automaton = read_automaton(positional(&parsed, 0, "AUT")?)?;
            let AnyAutomaton::Up(a) = automaton else {
                return Err(Error::InvalidParameter(format!(
                    "`{}` expects a bottom-up automaton",
                    parsed.command
                )));
            };
            let result = match parsed.command.as_str() {
                "determinize" => a.determinize().into_automaton(),
                "minimize" => a.determinize().minimize()?.into_automaton(),
                _ => a.trim(),
            };
            print!("{}", write_bottom_up(&result));
            Ok(ExitCode::SUCCESS)
        }
        "equiv" => {
            let left = read_automaton(positional(&parsed, 0, "AUT1")?)?.to_bottom_up();
            let right = read_automaton(positional(&parsed, 1, "AUT2")?)?.to_bottom_up();
            let equal = left.equivalent(&right)?;
            println!("{}", if equal { "equivalent" } else { "inequivalent" });
            Ok(bool_exit(equal))
        }
        "residuals" => {
            let language = read_automaton(positional(&parsed, 0, "AUT")?)?.to_bottom_up();
            if direction(&parsed)? {
                report::residuals_up(&language, parsed.json);
            } else {
                report::residuals_down(&language, parsed.json);
            }
            Ok(ExitCode::SUCCESS)
        }
        "primes" => {
            let language = read_automaton(positional(&parsed, 0, "AUT")?)?.to_bottom_up();
            if direction(&parsed)? {
                report::primes_up(&language, parsed.json);
            } else {
                report::primes_down(&language, parsed.json);
            }
            Ok(ExitCode::SUCCESS)
        }
        "canonical" => {
            let language = read_automaton(positional(&parsed, 0, "AUT")?)?.to_bottom_up();
            if direction(&parsed)? {
                print!("{}", write_bottom_up(&canonical_up_rfta(&language)));
            } else {
                print!("{}", write_top_down(&canonical_down_rfta(&language)));
            }
            Ok(ExitCode::SUCCESS)
        }
        "is-rfta" => {
            let automaton = read_automaton(positional(&parsed, 0, "AUT")?)?;
            let verdict = match &automaton {
                AnyAutomaton::Up(a) => is_bottom_up_rfta(a),
                AnyAutomaton::Down(a) => is_down_rfta(a),
            };
            println!(
                "{}",
                if verdict {
                    "every state language is a residual"
                } else {
                    "some state language is not a residual"
                }
            );
            Ok(bool_exit(verdict))
        }
        "is-canonical" => {
            let automaton = read_automaton(positional(&parsed, 0, "AUT")?)?;
            let verdict = match &automaton {
                AnyAutomaton::Up(a) => is_canonical_up_rfta(a),
                AnyAutomaton::Down(a) => {
                    // top-down isomorphism is bottom-up isomorphism of
                    // the rule reversals
                    let canonical = canonical_down_rfta(&a.to_bottom_up());
                    isomorphic(&a.to_bottom_up(), &canonical.to_bottom_up())
                }
            };
            println!(
                "{}",
                if verdict {
                    "canonical residual automaton"
                } else {
                    "not the canonical residual automaton"
                }
            );
            Ok(bool_exit(verdict))
        }
        "classify" => {
            let language = read_automaton(positional(&parsed, 0, "AUT")?)?.to_bottom_up();
            let classification = report::classify(&language, parsed.json);
            if parsed.verify {
                let agreed = report::verify_classification(&language, &classification);
                if !agreed {
                    eprintln!("verification against the enumeration oracle failed");
                    return Ok(ExitCode::from(1));
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        "gen" => {
            let name = positional(&parsed, 0, "NAME")?;
            let output = match name {
                "An" | "Aprime" => {
                    let n: usize = positional(&parsed, 1, "N")?
                        .parse()
                        .map_err(|_| Error::InvalidParameter("N must be a number".into()))?;
                    if name == "An" {
                        write_bottom_up(&gen_an(n)?)
                    } else {
                        write_top_down(&gen_aprime_n(n)?)
                    }
                }
                other => {
                    let named: NamedLanguage = other.parse()?;
                    write_automaton(&AnyAutomaton::Up(gen_named(named)))
                }
            };
            print!("{output}");
            Ok(ExitCode::SUCCESS)
        }
        other => Err(Error::InvalidParameter(format!(
            "unknown command `{other}`; run `resta help`"
        ))),
    }
}
