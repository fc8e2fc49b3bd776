//! `desiree`: check, reason about, query and export requirement models.

mod diagnostics;
mod export;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use desiree_core::model::{load_model_with, stats, LoadOptions, LoadedModel, ModelStore, Severity};
use desiree_core::query::{eval_query_lenient, QueryMatch};
use desiree_core::reasoner::{check_consistency, element_entails, Interpretation, ReasonerConfig, Witness};
use desiree_core::syntax::{parse_description_str, parse_model_file, render_model_file, ParsedFile};
use desiree_core::{ElementKind, Reasoner, Verdict, Verdict3};
use serde_json::{json, Value};

use diagnostics::{sort, Diagnostic};

#[derive(Parser)]
#[command(name = "desiree", version, about = "Check, reason about and query requirement models")]
struct Cli {
    /// Machine-readable output.
    #[arg(long, global = true)]
    json: bool,
    /// Include query matches the reasoner could not decide, marked tentative.
    #[arg(long, global = true)]
    lenient: bool,
    /// Largest number of disjuncts in a normal form.
    #[arg(long, global = true, value_name = "N", default_value_t = ReasonerConfig::default().max_dnf)]
    max_dnf: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse, validate, verify strengths and check consistency.
    Check { file: PathBuf },
    /// Whether the first element entails the second.
    Entail { file: PathBuf, left: String, right: String },
    /// Elements and terms matching a description-shaped query.
    Query { file: PathBuf, query: String },
    /// Element counts per kind.
    Stats { file: PathBuf },
    /// Write the model as JSON or Graphviz.
    Export {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Rewrite the file in canonical layout.
    Fmt {
        file: PathBuf,
        /// Print instead of rewriting.
        #[arg(long)]
        stdout: bool,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Dot,
}

/// Failure that ends the run with exit code 2.
struct Fatal(String);

struct Session {
    json: bool,
    lenient: bool,
    color: bool,
    config: ReasonerConfig,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let session = Session {
        json: cli.json,
        lenient: cli.lenient,
        color: std::env::var("DESIREE_COLOR").is_ok_and(|v| v == "1"),
        config: ReasonerConfig {
            max_dnf: cli.max_dnf.max(1),
            ..ReasonerConfig::default()
        },
    };
    let result = match &cli.command {
        Command::Check { file } => session.check(file),
        Command::Entail { file, left, right } => session.entail(file, left, right),
        Command::Query { file, query } => session.query(file, query),
        Command::Stats { file } => session.stats(file),
        Command::Export { file, format } => session.export(file, *format),
        Command::Fmt { file, stdout } => session.fmt(file, *stdout),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(Fatal(msg)) => {
            eprintln!("desiree: {msg}");
            ExitCode::from(2)
        }
    }
}

fn read(file: &Path) -> Result<(String, ParsedFile), Fatal> {
    let text = fs::read_to_string(file).map_err(|e| Fatal(format!("cannot read {}: {e}", file.display())))?;
    let parsed = parse_model_file(&text);
    Ok((text, parsed))
}

impl Session {
    fn load(&self, parsed: &ParsedFile) -> LoadedModel {
        load_model_with(&parsed.ast, &LoadOptions { reasoner: self.config })
    }

    /// A model that parsed and loaded without errors, or exit 2.
    fn strict_model(&self, file: &Path) -> Result<ModelStore, Fatal> {
        let (_, parsed) = read(file)?;
        if let Some(e) = parsed.errors.first() {
            return Err(Fatal(format!("{}:{e}", file.display())));
        }
        let loaded = self.load(&parsed);
        if let Some(e) = loaded.errors.first() {
            return Err(Fatal(format!("{}:{e}", file.display())));
        }
        Ok(loaded.store)
    }

    fn check(&self, file: &Path) -> Result<u8, Fatal> {
        let (_, parsed) = read(file)?;
        let mut diags: Vec<Diagnostic> = parsed.errors.iter().map(Diagnostic::from_parse).collect();
        let loaded = self.load(&parsed);
        diags.extend(loaded.errors.iter().map(Diagnostic::from_load));
        for a in &loaded.store.applications {
            // Dangling references are already reported by the loader.
            for i in a.issues.iter().filter(|i| i.code != "E-REF") {
                diags.push(Diagnostic::from_issue(&a.id, a.span, i));
            }
        }
        sort(&mut diags);
        let clashes = check_consistency(&loaded.store);
        diags.extend(clashes.iter().map(Diagnostic::from_clash));

        let count = |s: Severity| diags.iter().filter(|d| d.severity == s).count();
        let (errors, warnings) = (count(Severity::Error), count(Severity::Warning));
        let verdicts: Vec<(Verdict, usize)> = [Verdict::Verified, Verdict::Asserted, Verdict::Violated, Verdict::Unknown]
            .into_iter()
            .map(|v| (v, loaded.store.applications.iter().filter(|a| a.verdict == v).count()))
            .collect();
        let name = file.display().to_string();
        if self.json {
            let summary = json!({
                "errors": errors,
                "warnings": warnings,
                "elements": loaded.store.len(),
                "applications": loaded.store.applications.len(),
                "verdicts": verdicts.iter().map(|(v, n)| (v.to_string(), json!(n))).collect::<serde_json::Map<_, _>>(),
                "clashes": clashes.len(),
            });
            let diags: Vec<Value> = diags.iter().map(Diagnostic::to_json).collect();
            print_json(&json!({"file": name, "diagnostics": diags, "summary": summary}));
        } else {
            for d in &diags {
                println!("{}", d.render(&name, self.color));
            }
            let verdicts: Vec<String> = verdicts.iter().map(|(v, n)| format!("{n} {v}")).collect();
            let (n, apps) = (loaded.store.len(), loaded.store.applications.len());
            println!(
                "{n} element{}, {apps} application{} ({})",
                plural(n),
                plural(apps),
                verdicts.join(", ")
            );
            match clashes.len() {
                0 => println!("consistency: no clashes"),
                1 => println!("consistency: 1 clash"),
                n => println!("consistency: {n} clashes"),
            }
            println!("{errors} error{}, {warnings} warning{}", plural(errors), plural(warnings));
        }
        Ok(u8::from(errors > 0))
    }

    fn entail(&self, file: &Path, left: &str, right: &str) -> Result<u8, Fatal> {
        let m = self.strict_model(file)?;
        let get = |id: &str| m.get(id).ok_or_else(|| Fatal(format!("unknown element `{id}`")));
        let (l, r) = (get(left)?, get(right)?);
        let reasoner = Reasoner::from_model(&m, self.config);
        let v = element_entails(&reasoner, &[l], r);
        if self.json {
            let mut out = json!({"left": left, "right": right, "verdict": v.label()});
            match &v {
                Verdict3::Disproved(w) => out["witness"] = witness_json(w),
                Verdict3::Unknown(why) => out["reason"] = json!(why),
                Verdict3::Proved => {}
            }
            print_json(&out);
        } else {
            match &v {
                Verdict3::Proved => println!("proved: {left} entails {right}"),
                Verdict3::Disproved(w) => println!("disproved: {left} does not entail {right}\nwitness: {w}"),
                Verdict3::Unknown(why) => println!("unknown: {why}"),
            }
        }
        Ok(0)
    }

    fn query(&self, file: &Path, query: &str) -> Result<u8, Fatal> {
        let q = parse_description_str(query).map_err(|e| Fatal(format!("query: {e}")))?;
        let m = self.strict_model(file)?;
        let hits: Vec<QueryMatch> = eval_query_lenient(&m, &q)
            .map_err(|e| Fatal(format!("query: {e}")))?
            .into_iter()
            .filter(|h| self.lenient || !h.tentative)
            .collect();
        if self.json {
            let hits: Vec<Value> = hits.iter().map(|h| json!({"id": h.id, "tentative": h.tentative})).collect();
            print_json(&json!({"query": query, "matches": hits}));
        } else {
            for h in hits {
                if h.tentative {
                    println!("{} (tentative)", h.id);
                } else {
                    println!("{}", h.id);
                }
            }
        }
        Ok(0)
    }

    fn stats(&self, file: &Path) -> Result<u8, Fatal> {
        let m = self.strict_model(file)?;
        let s = stats(&m);
        if self.json {
            let kinds: serde_json::Map<String, Value> = ElementKind::ALL
                .iter()
                .map(|k| {
                    let c = s.per_kind.get(k).copied().unwrap_or_default();
                    (k.keyword().to_string(), json!({"active": c.active, "dropped": c.dropped}))
                })
                .collect();
            print_json(&json!({
                "kinds": kinds,
                "total": {"active": s.total.active, "dropped": s.total.dropped},
                "applications": s.applications,
                "axioms": s.axioms,
                "conflicts": s.conflicts,
            }));
        } else {
            println!("{:<6} {:>6} {:>7}", "kind", "active", "dropped");
            for k in ElementKind::ALL {
                let c = s.per_kind.get(&k).copied().unwrap_or_default();
                println!("{:<6} {:>6} {:>7}", k.keyword(), c.active, c.dropped);
            }
            println!("{:<6} {:>6} {:>7}", "total", s.total.active, s.total.dropped);
            println!("applications {}", s.applications);
            println!("axioms {}", s.axioms);
            println!("conflicts {}", s.conflicts);
        }
        Ok(0)
    }

    fn export(&self, file: &Path, format: Format) -> Result<u8, Fatal> {
        let m = self.strict_model(file)?;
        match format {
            Format::Json => print_json(&export::to_json(&m)),
            Format::Dot => print!("{}", export::to_dot(&m)),
        }
        Ok(0)
    }

    fn fmt(&self, file: &Path, stdout: bool) -> Result<u8, Fatal> {
        let (text, parsed) = read(file)?;
        if !parsed.errors.is_empty() {
            let name = file.display().to_string();
            for e in &parsed.errors {
                eprintln!("{}", Diagnostic::from_parse(e).render(&name, self.color));
            }
            return Ok(1);
        }
        let out = render_model_file(&parsed.ast);
        if stdout {
            print!("{out}");
        } else if out != text {
            fs::write(file, out).map_err(|e| Fatal(format!("cannot write {}: {e}", file.display())))?;
        }
        Ok(0)
    }
}

fn plural(n: usize) -> &'static str {
    if n == 1 {
        ""
    } else {
        "s"
    }
}

fn print_json(v: &Value) {
    println!("{}", serde_json::to_string_pretty(v).expect("serializable"));
}

fn interpretation_json(i: &Interpretation) -> Value {
    let members = |mask: u64| -> Vec<usize> { (0..i.size).filter(|x| mask >> x & 1 == 1).collect() };
    json!({
        "size": i.size,
        "individuals": i.individuals,
        "values": i.values.iter().map(|(k, v)| (k.to_string(), json!(v.to_string()))).collect::<serde_json::Map<_, _>>(),
        "concepts": i.concepts.iter().map(|(k, m)| (k.clone(), json!(members(*m)))).collect::<serde_json::Map<_, _>>(),
        "roles": i.roles,
    })
}

fn witness_json(w: &Witness) -> Value {
    match w {
        Witness::Model { interp, element } => json!({"model": interpretation_json(interp), "element": element}),
        Witness::Population {
            position,
            size,
            satisfying,
            held,
            required,
        } => json!({
            "population": {
                "position": position,
                "size": size,
                "satisfying": satisfying,
                "held": held.to_string(),
                "required": required.to_string(),
            }
        }),
    }
}
