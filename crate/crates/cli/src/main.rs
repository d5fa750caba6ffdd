mod input;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use ig_core::group::Subgroup;
use ig_core::harness::{apply_fault, chain_to_json, cross_validate, run_report, structure_report, Fault, RunConfig};
use ig_core::theta::{dclass_census, green, green_dual, ig_equal, schutzenberger};
use ig_core::words::{Caps, Decision, Rel, Verdict};

use input::{input_err, load, parse_element, Failure, Loaded};

/// Free idempotent generated semigroups: word problem, Green's relations,
/// Schützenberger groups and D-class census through contact automata.
#[derive(Parser)]
#[command(name = "ig-lab", version, about)]
struct Cli {
    #[command(flatten)]
    caps: CapArgs,
    /// Seed for every sampled quantity.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct CapArgs {
    /// Longest word any search may visit.
    #[arg(long, global = true)]
    max_word_len: Option<usize>,
    /// States per rewrite-class search.
    #[arg(long, global = true)]
    max_bfs_states: Option<usize>,
    /// Longest multiplier tried when searching for Green's witnesses.
    #[arg(long, global = true)]
    witness_len: Option<usize>,
    #[arg(long, global = true)]
    max_group_order: Option<usize>,
}

impl CapArgs {
    fn caps(&self) -> Caps {
        let d = Caps::default();
        Caps {
            max_word_len: self.max_word_len.unwrap_or(d.max_word_len),
            max_bfs_states: self.max_bfs_states.unwrap_or(d.max_bfs_states),
            witness_len: self.witness_len.unwrap_or(d.witness_len),
            max_group_order: self.max_group_order.unwrap_or(d.max_group_order),
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
    Dot,
}

/// INPUT is a JSON file (semigroup table, abstract biorder, or synthetic
/// models), `corpus:NAME` or `fixture:NAME`. Elements are words of labels
/// (`e,f,e`) for natural inputs and chains (`0:0:(12):1/1:0:0:0` or the JSON
/// block list printed in reports) for synthetic ones.
#[derive(Subcommand)]
enum Command {
    /// Check the input and print the full analysis.
    Validate { input: String },
    /// Print the D-class models.
    Models { input: String },
    /// Print the contact automaton between two models.
    Contact {
        input: String,
        #[arg(long)]
        d1: usize,
        #[arg(long)]
        d2: usize,
        /// Emit Graphviz DOT instead of JSON.
        #[arg(long)]
        dot: bool,
    },
    /// Decide whether two elements are equal.
    WordEq { input: String, u: String, v: String },
    /// Decide a Green's relation (R, L, H, D or J) between two elements.
    Green { input: String, rel: Rel, u: String, v: String },
    /// The Schützenberger group of an element's H-class.
    Schutz { input: String, x: String },
    /// Class counts and sizes for an element's D-class.
    Census { input: String, x: String },
    /// Compare the algebraic equality test with the rewriting oracle.
    CrossValidate {
        input: String,
        #[arg(long, default_value_t = 4)]
        exhaustive_len: usize,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        #[arg(long, default_value_t = 6)]
        sample_len: usize,
        /// Keep every sampled record in the report.
        #[arg(long)]
        record_all: bool,
        /// Perturb the structure before validating, e.g.
        /// '{"kind":"sandwich","model":0,"lambda":0,"i":0,"value":null}'.
        #[arg(long)]
        fault: Vec<String>,
    },
}

struct Output {
    json: Value,
    text: String,
    dot: Option<String>,
    /// Set when the result itself shows an internal inconsistency.
    internal: Option<String>,
}

impl Output {
    fn new(json: Value, text: String) -> Self {
        Output { json, text, dot: None, internal: None }
    }
}

fn subgroup_names(h: &Subgroup) -> Vec<String> {
    h.elements().iter().map(|&x| h.group().name(x)).collect()
}

fn decision_str(d: Decision) -> &'static str {
    match d {
        Decision::Holds => "holds",
        Decision::Fails => "fails",
        Decision::Unknown => "unknown",
    }
}

fn run(cli: &Cli) -> Result<Output, Failure> {
    let caps = cli.caps.caps();
    let cfg = RunConfig { caps, seed: cli.seed, ..RunConfig::default() };
    match &cli.command {
        Command::Validate { input } => {
            let loaded = load(input, caps)?;
            loaded.structure().validate()?;
            let (report, text) = match &loaded {
                Loaded::Natural(nat) => {
                    let failed: Vec<String> = nat.failures.iter().map(|f| f.error.to_string()).collect();
                    let mut text = format!(
                        "{}: {} idempotents, {} models built",
                        nat.structure.name,
                        nat.oracle.biorder().len(),
                        nat.structure.models.len()
                    );
                    for f in &failed {
                        text.push_str(&format!("\n  {f}"));
                    }
                    (run_report(nat, &cfg), text)
                }
                Loaded::Synthetic(st) => {
                    (structure_report(st), format!("{}: {} models, valid", st.name, st.models.len()))
                }
            };
            let mut json = json!({"valid": true});
            json["report"] = report;
            Ok(Output::new(json, text))
        }
        Command::Models { input } => {
            let loaded = load(input, caps)?;
            let st = loaded.structure();
            let mut json = json!({"name": st.name, "models": structure_report(st)["models"].clone()});
            let mut text = String::new();
            for (k, m) in st.models.iter().enumerate() {
                text.push_str(&format!(
                    "model {k} {}: {}x{} over a group of order {}\n",
                    m.label,
                    m.rows,
                    m.cols,
                    m.group.order()
                ));
            }
            if let Loaded::Natural(nat) = &loaded {
                json["failures"] = run_report(nat, &cfg)["failures"].clone();
                for f in &nat.failures {
                    text.push_str(&format!("D-class {}: {}\n", f.dclass, f.error));
                }
            }
            Ok(Output::new(json, text.trim_end().into()))
        }
        Command::Contact { input, d1, d2, dot } => {
            let loaded = load(input, caps)?;
            let st = loaded.structure();
            let a = st
                .automaton(*d1, *d2)
                .ok_or_else(|| Failure::Input(format!("no models {d1} and {d2}; there are {}", st.models.len())))?;
            let report = structure_report(st)["automata"]
                .as_array()
                .and_then(|v| v.iter().find(|x| x["source"] == *d1 && x["target"] == *d2).cloned())
                .unwrap_or(Value::Null);
            let gr = &a.graph;
            let text = format!("contact automaton {d1} -> {d2}: {} vertices, {} edges", gr.vertex_count(), gr.edges().len());
            let mut out = Output::new(report, text);
            if *dot || cli.format == Format::Dot {
                out.dot = Some(gr.to_dot(&format!("{}_{d1}_{d2}", st.name)));
            }
            Ok(out)
        }
        Command::WordEq { input, u, v } => {
            let mut loaded = load(input, caps)?;
            let (cu, wu) = parse_element(&mut loaded, u)?;
            let (cv, wv) = parse_element(&mut loaded, v)?;
            let st = loaded.structure();
            let d = ig_equal(st, &cu, &cv)?;
            let mut json = json!({
                "u": chain_to_json(st, &cu),
                "v": chain_to_json(st, &cv),
                "equal": d.equal,
                "decision": serde_json::to_value(&d).map_err(input_err)?,
            });
            let mut text = format!("{} ({:?})", if d.equal { "equal" } else { "distinct" }, d.reason);
            let mut internal = None;
            if let (Loaded::Natural(nat), Some(wu), Some(wv)) = (&mut loaded, wu, wv) {
                let o = nat.oracle.equal(&wu, &wv);
                let conflict = match o.status {
                    Verdict::Equal => !d.equal,
                    Verdict::Distinct => d.equal,
                    Verdict::Unknown => false,
                };
                if conflict {
                    internal = Some(format!("algebraic test says {} but the oracle says {:?}", d.equal, o.status));
                }
                text.push_str(&format!("; oracle {:?}", o.status));
                json["oracle"] = serde_json::to_value(&o).map_err(input_err)?;
            }
            let mut out = Output::new(json, text);
            out.internal = internal;
            Ok(out)
        }
        Command::Green { input, rel, u, v } => {
            let mut loaded = load(input, caps)?;
            let (cu, wu) = parse_element(&mut loaded, u)?;
            let (cv, wv) = parse_element(&mut loaded, v)?;
            let st = loaded.structure();
            let holds = green(st, &cu, &cv, *rel)?;
            let dual = green_dual(st, &cu, &cv, *rel)?;
            let mut internal = (holds != dual).then(|| format!("{rel:?}: theta gives {holds}, theta-bar gives {dual}"));
            let mut json = json!({"relation": format!("{rel:?}"), "holds": holds, "dual": dual});
            let mut text = format!("{rel:?}: {}", if holds { "holds" } else { "fails" });
            if let (Loaded::Natural(nat), Some(wu), Some(wv)) = (&mut loaded, wu, wv) {
                let o = nat.oracle.relation(*rel, &wu, &wv);
                if o.definite().is_some_and(|x| x != holds) {
                    internal.get_or_insert(format!("{rel:?}: algebraic {holds}, witness search {}", decision_str(o)));
                }
                json["witness_search"] = json!(decision_str(o));
                text.push_str(&format!("; witness search {}", decision_str(o)));
            }
            let mut out = Output::new(json, text);
            out.internal = internal;
            Ok(out)
        }
        Command::Schutz { input, x } => {
            let mut loaded = load(input, caps)?;
            let (cx, _) = parse_element(&mut loaded, x)?;
            let st = loaded.structure();
            let s = schutzenberger(st, &cx)?;
            let q = &s.quotient;
            let json = json!({
                "x": chain_to_json(st, &cx),
                "ambient_model": s.ambient_model,
                "k": subgroup_names(&s.k),
                "l": subgroup_names(&s.l),
                "order": s.order(),
                "quotient_cayley": q.cayley(),
                "quotient_abelian": q.is_abelian(),
                "dual": {
                    "ambient_model": s.dual_ambient_model,
                    "k": subgroup_names(&s.dual_k),
                    "l": subgroup_names(&s.dual_l),
                    "order": s.dual_quotient_order,
                },
            });
            let text = format!("|K| = {}, |L| = {}, Schützenberger group of order {}", s.k.order(), s.l.order(), s.order());
            Ok(Output::new(json, text))
        }
        Command::Census { input, x } => {
            let mut loaded = load(input, caps)?;
            let (cx, _) = parse_element(&mut loaded, x)?;
            let st = loaded.structure();
            let c = dclass_census(st, &cx)?;
            let text = format!(
                "R-classes {}, L-classes {}, |H| {}, |R| {}, |L| {}, |D| {}",
                c.r_classes, c.l_classes, c.h_class_size, c.r_class_size, c.l_class_size, c.d_class_size
            );
            let mut json = serde_json::to_value(c).map_err(input_err)?;
            json["x"] = chain_to_json(st, &cx);
            Ok(Output::new(json, text))
        }
        Command::CrossValidate { input, exhaustive_len, samples, sample_len, record_all, fault } => {
            let Loaded::Natural(mut nat) = load(input, caps)? else {
                return Err(Failure::Input("cross-validation needs a semigroup or biorder input".into()));
            };
            for f in fault {
                let f: Fault = serde_json::from_str(f).map_err(|e| Failure::Input(format!("fault: {e}")))?;
                apply_fault(&mut nat.structure, &f).map_err(input_err)?;
            }
            let cfg = RunConfig {
                exhaustive_len: *exhaustive_len,
                samples: *samples,
                sample_len: *sample_len,
                record_all: *record_all,
                ..cfg
            };
            let r = cross_validate(&mut nat, &cfg);
            let text = format!(
                "{}: exhaustive {}/{} agreed ({} unknown), sampled {}/{} agreed ({} unknown), {} disagreements{}",
                r.name,
                r.exhaustive.agreed,
                r.exhaustive.pairs,
                r.exhaustive.unknown,
                r.sampled.agreed,
                r.sampled.pairs,
                r.sampled.unknown,
                r.disagreements.len(),
                r.structure_error.as_deref().map(|e| format!("; structure invalid: {e}")).unwrap_or_default()
            );
            let mut out = Output::new(serde_json::to_value(&r).map_err(input_err)?, text);
            if let Some(e) = &r.structure_error {
                out.internal = Some(format!("structure no longer valid: {e}"));
            } else if !r.passed() {
                out.internal = Some("algebraic and oracle verdicts disagree".into());
            }
            Ok(out)
        }
    }
}

fn main() {
    let cli = Cli::parse();
    if cli.format == Format::Dot && !matches!(cli.command, Command::Contact { .. }) {
        eprintln!("error: --format dot is only available for contact");
        std::process::exit(1);
    }
    match run(&cli) {
        Ok(out) => {
            match (cli.format, &out.dot) {
                (_, Some(dot)) => print!("{dot}"),
                (Format::Text, _) => println!("{}", out.text),
                _ => println!("{}", serde_json::to_string_pretty(&out.json).expect("serializable")),
            }
            if let Some(msg) = out.internal {
                eprintln!("internal consistency failure: {msg}");
                std::process::exit(2);
            }
        }
        Err(f) => {
            eprintln!("error: {}", f.message());
            std::process::exit(f.code());
        }
    }
}
