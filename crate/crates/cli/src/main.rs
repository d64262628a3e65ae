use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use knotmosaic::complement::{
    check_complement, compute_complement, eliminate_outermost_arc, enumerate_complements, outermost_arc,
    reduce_to_trivial, ComplementDecomposition, PipelineTrace, Policy, Reduction,
};
use knotmosaic::diagram::analyze;
use knotmosaic::error::Error;
use knotmosaic::families::{gen_knot, gen_link};
use knotmosaic::grid::{Geometry, Setting};
use knotmosaic::io;
use knotmosaic::mosaic::Mosaic;
use knotmosaic::render;
use knotmosaic::search::{search_max_knot, SearchMode};
use knotmosaic::tiles::enumerate_catalog;
use knotmosaic::verify::verify_claims;

#[derive(Parser)]
#[command(name = "knotmosaic", version, about = "Rectangular and hexagonal knot mosaics")]
struct Cli {
    /// Print machine-readable JSON instead of text
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Exhaustive,
    Smoothing,
    Random,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Svg,
    Ascii,
}

#[derive(Clone, Copy, ValueEnum)]
enum PolicyArg {
    Canonical,
    Greedy,
}

#[derive(Subcommand)]
enum Cmd {
    /// List the tile classes of a geometry
    Catalog {
        #[arg(long, default_value = "hex")]
        geometry: Geometry,
    },
    /// Write the saturated link, or its knot, for a board
    Gen {
        #[arg(long)]
        setting: Setting,
        #[arg(short)]
        r: usize,
        /// Emit the reduced alternating knot instead of the link
        #[arg(long)]
        knot: bool,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Check that every connection point is matched
    Validate { file: PathBuf },
    /// Components, crossings, alternation, nugatory crossings
    Analyze { file: PathBuf },
    /// Complement arcs and loops of a mosaic
    Complement {
        file: PathBuf,
        #[arg(long, value_enum, default_value = "greedy")]
        policy: PolicyArg,
        /// List every complement instead, up to this many tile choices
        #[arg(long)]
        enumerate: Option<usize>,
    },
    /// Remove the outermost complement arc of a knot
    Eliminate {
        file: PathBuf,
        /// Directory for the stage mosaics
        #[arg(long)]
        stages: Option<PathBuf>,
    },
    /// Eliminate complement loops and arcs until none remain
    Reduce {
        file: PathBuf,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Check closed forms against the generators
    Verify {
        #[arg(long, default_value_t = 2)]
        r_min: usize,
        #[arg(long, default_value_t = 8)]
        r_max: usize,
        /// Settings to check; all when omitted
        #[arg(long)]
        setting: Vec<Setting>,
    },
    /// Largest knot reachable on a board
    Search {
        #[arg(long)]
        setting: Setting,
        #[arg(short)]
        r: usize,
        #[arg(long, value_enum, default_value = "random")]
        mode: ModeArg,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 10_000)]
        samples: u64,
        /// Crossings that may be smoothed away from saturation
        #[arg(long, default_value_t = 3)]
        budget: usize,
        /// Write the witness knot here
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Draw a mosaic
    Render {
        file: PathBuf,
        #[arg(long, value_enum, default_value = "svg")]
        format: FormatArg,
        /// Overlay the complement (svg only)
        #[arg(long)]
        complement: bool,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
}

/// Exit status plus what to print.
struct Outcome {
    ok: bool,
    text: String,
    json: Value,
}

fn done(ok: bool, text: String, json: Value) -> Result<Outcome, Error> {
    Ok(Outcome { ok, text, json })
}

fn emit(text: String, out: Option<&PathBuf>) -> Result<String, Error> {
    match out {
        Some(p) => {
            std::fs::write(p, text)?;
            Ok(format!("wrote {}", p.display()))
        }
        None => Ok(text.trim_end().to_string()),
    }
}

fn comp_json(c: &ComplementDecomposition) -> Value {
    json!({
        "s": c.s(),
        "w": c.w(),
        "choices": c.choices,
        "components": c.components,
    })
}

fn trace_json(t: &PipelineTrace) -> Value {
    json!({
        "arc": t.partition.arc,
        "stages": {
            "k1": io::write(&t.k1),
            "l1": io::write(&t.l1),
            "l2": io::write(&t.l2),
            "k2": io::write(&t.k2),
            "k3": io::write(&t.k3),
        },
        "crossings": t.crossings,
        "components": t.components,
        "closure_choices": t.closure_choices,
        "lr_alignment": t.lr_alignment.map(|(s, k)| json!({"setting": s, "rotation": k})),
        "n": t.n,
        "j": t.j,
        "actions": t.actions,
        "before": t.before,
        "after": t.after,
    })
}

fn reduction_json(red: &Reduction) -> Value {
    json!({
        "history": red.history,
        "merges": red.merges,
        "steps": red.traces.iter().map(trace_json).collect::<Vec<_>>(),
        "knot": io::write(&red.knot),
    })
}

fn history_text(h: &[(usize, usize)]) -> String {
    h.iter()
        .map(|(s, w)| format!("({s},{w})"))
        .collect::<Vec<_>>()
        .join(" -> ")
}

fn run(cmd: Cmd) -> Result<Outcome, Error> {
    match cmd {
        Cmd::Catalog { geometry } => {
            let classes = enumerate_catalog(geometry);
            let mut text = format!("{} classes\n", classes.len());
            for c in classes {
                let alias = c.alias.map_or("-".to_string(), |a| a.to_string());
                text += &format!(
                    "{:>3}  #{:<3} x{:<2} {}\n",
                    c.class_id, alias, c.orbit_size, c.canonical_face
                );
            }
            done(true, text, json!(classes))
        }
        Cmd::Gen { setting, r, knot, out } => {
            let m = if knot {
                gen_knot(r, setting)?.0
            } else {
                gen_link(r, setting)?
            };
            let text = io::write(&m);
            let msg = emit(text.clone(), out.as_ref())?;
            done(true, msg, json!({ "mosaic": text }))
        }
        Cmd::Validate { file } => {
            let m = io::read_file(&file)?;
            let v = m.validate();
            let mut text = if v.is_empty() {
                "valid".to_string()
            } else {
                format!("{} violation(s)", v.len())
            };
            for x in &v {
                text += &format!("\n  {x}");
            }
            done(v.is_empty(), text, json!({ "valid": v.is_empty(), "violations": v }))
        }
        Cmd::Analyze { file } => {
            let m = io::read_file(&file)?;
            let a = analyze(&m)?;
            let text = format!(
                "components: {}\ncrossings: {}\nalternating: {}\nreduced: {}\nnugatory: {:?}\ncrossing number: {}\ngauss: {}",
                a.components, a.crossings, a.alternating, a.reduced, a.nugatory, a.crossing_number, a.gauss_code
            );
            done(true, text, json!(a))
        }
        Cmd::Complement {
            file,
            policy,
            enumerate,
        } => {
            let m = io::load(&std::fs::read_to_string(&file)?)?;
            if let Some(limit) = enumerate {
                let all = enumerate_complements(&m, limit)?;
                let mut text = format!("{} complements", all.len());
                for c in &all {
                    text += &format!("\n  (s,w) = ({},{})  choices {:?}", c.s(), c.w(), c.choices);
                }
                return done(true, text, json!(all.iter().map(comp_json).collect::<Vec<_>>()));
            }
            let policy = match policy {
                PolicyArg::Canonical => Policy::Canonical,
                PolicyArg::Greedy => Policy::Greedy,
            };
            let c = compute_complement(&m, policy)?;
            let check = check_complement(&m, &c);
            let mut text = format!("(s,w) = ({},{})", c.s(), c.w());
            for (i, k) in c.components.iter().enumerate() {
                let kind = if k.closed { "loop" } else { "arc" };
                text += &format!("\n  {i}: {kind} through {} tile(s)", k.pieces.len());
            }
            if !check.is_ok() {
                text += &format!("\nill-formed: {check:?}");
            }
            let mut j = comp_json(&c);
            j["check"] = json!(check);
            done(check.is_ok(), text, j)
        }
        Cmd::Eliminate { file, stages } => {
            let m = io::load(&std::fs::read_to_string(&file)?)?;
            let c = compute_complement(&m, Policy::Greedy)?;
            if outermost_arc(&m, &c).is_none() {
                return done(true, "no complement arc to eliminate".into(), json!(null));
            }
            let t = eliminate_outermost_arc(&m, &c)?;
            if let Some(dir) = &stages {
                std::fs::create_dir_all(dir)?;
                for (name, s) in [
                    ("k1", &t.k1),
                    ("l1", &t.l1),
                    ("l2", &t.l2),
                    ("k2", &t.k2),
                    ("k3", &t.k3),
                ] {
                    io::write_file(s, dir.join(format!("{name}.hexmo")))?;
                }
            }
            let text = format!(
                "arc {}: (s,w) {:?} -> {:?}\ncrossings  K1 L1 L2 K2 K3 = {:?}\ncomponents K1 L1 L2 K2 K3 = {:?}\nactions: {}",
                t.partition.arc,
                t.before,
                t.after,
                t.crossings,
                t.components,
                t.actions.len()
            );
            done(true, text, trace_json(&t))
        }
        Cmd::Reduce { file, out } => {
            let m = io::load(&std::fs::read_to_string(&file)?)?;
            match reduce_to_trivial(&m) {
                Ok(red) => {
                    let mut text = format!(
                        "{}\nmerges: {}, eliminations: {}",
                        history_text(&red.history),
                        red.merges,
                        red.traces.len()
                    );
                    if let Some(p) = &out {
                        io::write_file(&red.knot, p)?;
                        text += &format!("\nwrote {}", p.display());
                    }
                    done(true, text, reduction_json(&red))
                }
                Err(f) => {
                    let text = format!("{}\nstopped: {}", history_text(&f.partial.history), f.error);
                    let mut j = reduction_json(&f.partial);
                    j["error"] = json!(f.error.to_string());
                    done(false, text, j)
                }
            }
        }
        Cmd::Verify { r_min, r_max, setting } => {
            let settings = if setting.is_empty() {
                Setting::ALL.to_vec()
            } else {
                setting
            };
            let rep = verify_claims(r_min..=r_max, &settings);
            let mut text = String::new();
            for row in &rep.rows {
                text += &format!(
                    "{} {:<26} r={} {:<18} expected {:<16} observed {:<16} [{}]\n",
                    if row.pass { "PASS" } else { "FAIL" },
                    row.claim,
                    row.r,
                    row.setting,
                    row.expected,
                    row.observed,
                    row.anchor
                );
            }
            for (r, s) in &rep.skipped {
                text += &format!("SKIP r={r} {s}: no generator\n");
            }
            text += &format!("{} passed, {} failed", rep.passed, rep.failed);
            done(rep.all_pass(), text, json!(rep))
        }
        Cmd::Search {
            setting,
            r,
            mode,
            seed,
            samples,
            budget,
            out,
        } => {
            let mode = match mode {
                ModeArg::Exhaustive => SearchMode::Exhaustive,
                ModeArg::Smoothing => SearchMode::SaturatedSmoothing { max_smoothings: budget },
                ModeArg::Random => SearchMode::Randomized { seed, samples },
            };
            let rec = search_max_knot(r, setting, mode)?;
            let mut text = format!(
                "mosaics: {}\nknots: {}\nmax crossing number: {}\nbound: {}\nexceeded bound: {}",
                rec.mosaics,
                rec.knots,
                rec.max_crossings,
                rec.bound.map_or("-".into(), |b| b.to_string()),
                rec.exceeded_bound
            );
            if rec.failed_draws > 0 {
                text += &format!("\nfailed draws: {}", rec.failed_draws);
            }
            if let (Some(p), Some(w)) = (&out, &rec.witness) {
                io::write_file(w, p)?;
                text += &format!("\nwrote {}", p.display());
            }
            let j = json!({
                "setting": setting,
                "r": r,
                "mode": mode,
                "mosaics": rec.mosaics,
                "knots": rec.knots,
                "failed_draws": rec.failed_draws,
                "max_crossings": rec.max_crossings,
                "bound": rec.bound,
                "exceeded_bound": rec.exceeded_bound,
                "witness": rec.witness.as_ref().map(io::write),
                "witness_analysis": rec.witness_analysis,
            });
            done(!rec.exceeded_bound, text, j)
        }
        Cmd::Render {
            file,
            format,
            complement,
            out,
        } => {
            let m: Mosaic = io::load(&std::fs::read_to_string(&file)?)?;
            let doc = match format {
                FormatArg::Ascii => render::ascii(&m),
                FormatArg::Svg => {
                    let c = if complement {
                        Some(compute_complement(&m, Policy::Greedy)?)
                    } else {
                        None
                    };
                    render::svg(&m, c.as_ref())
                }
            };
            let msg = emit(doc.clone(), out.as_ref())?;
            done(true, msg, json!({ "document": doc }))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let json = cli.json;
    match run(cli.cmd) {
        Ok(o) => {
            if json {
                println!("{}", serde_json::to_string_pretty(&o.json).unwrap());
            } else {
                println!("{}", o.text);
            }
            if o.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            if let Error::Invalid(v) = &e {
                for x in v {
                    eprintln!("  {x}");
                }
            }
            match e {
                Error::Unsupported(_) | Error::TooLarge(_) | Error::InvalidBoard(_) => ExitCode::from(2),
                _ => ExitCode::from(1),
            }
        }
    }
}
