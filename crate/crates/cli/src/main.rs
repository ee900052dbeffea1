use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use wallpaper_core::catalog::{entries, entry, WallpaperClass};
use wallpaper_core::cohomology::h2_of_point_group;
use wallpaper_core::covering::{classified_subgroups, covering_hasse, covers, CoverDecision, DEFAULT_MAX_INDEX};
use wallpaper_core::fibration::{fibration_structures, fibres_over_circle, invariant_directions};
use wallpaper_core::holonomy::PointGroupClass;
use wallpaper_core::seifert::{justifications, GeometryTag};
use wallpaper_core::verify::{self, overall, Status, Suite};
use wallpaper_core::{affine, recognition, Error};

const EXIT_USAGE: u8 = 64;
const EXIT_PARSE: u8 = 65;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    /// Graphviz; `hasse` only.
    Dot,
}

#[derive(Parser)]
#[command(name = "wallpaper", version, about = "Exact computations with the 17 wallpaper groups")]
struct Cli {
    #[arg(long, global = true, value_enum, default_value = "text")]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List the seventeen classes with their orbifold names.
    List,
    /// Catalog entry of one class.
    Show { id: String },
    /// Identify the group generated by the affine maps in a file.
    Identify { file: PathBuf },
    /// Second cohomology of a holonomy class (e.g. `D2_axes`).
    H2 { label: String },
    /// Conjugacy classes of subgroups up to an index, identified.
    Subgroups {
        id: String,
        #[arg(long, default_value_t = 4)]
        max_index: usize,
    },
    /// Decide whether the first orbifold covers the second.
    Covers {
        cover: String,
        base: String,
        #[arg(long, default_value_t = DEFAULT_MAX_INDEX)]
        max_index: usize,
    },
    /// Minimal coverings among the seventeen classes.
    Hasse {
        #[arg(long, default_value_t = DEFAULT_MAX_INDEX)]
        max_index: usize,
    },
    /// Fibrations over S1 and the reflector interval.
    Fibrations { id: String },
    /// Bases of Seifert fibrations for a geometry.
    Seifert { geometry: String },
    /// Run claim suites.
    Verify {
        #[arg(long, default_value = "all")]
        suite: String,
    },
}

struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        let code = match e {
            Error::Parse { .. } => EXIT_PARSE,
            Error::UnknownName(_) => EXIT_USAGE,
            _ => 1,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

type Outcome = Result<u8, Failure>;

fn class(name: &str) -> Result<WallpaperClass, Failure> {
    Ok(name.parse::<WallpaperClass>()?)
}

/// Pretty JSON with keys in a stable (sorted) order.
fn to_json<T: Serialize>(v: &T) -> String {
    let value = serde_json::to_value(v).expect("serializable");
    serde_json::to_string_pretty(&value).expect("serializable")
}

fn group_string(factors: &[u64]) -> String {
    if factors.is_empty() {
        return "0".into();
    }
    let mut parts: Vec<String> = Vec::new();
    let mut i = 0;
    while i < factors.len() {
        let n = factors[i..].iter().take_while(|f| **f == factors[i]).count();
        parts.push(match n {
            1 => format!("Z/{}", factors[i]),
            _ => format!("(Z/{})^{n}", factors[i]),
        });
        i += n;
    }
    parts.join(" + ")
}

fn run(cli: Cli) -> Outcome {
    let fmt = cli.format;
    if fmt == Format::Dot && !matches!(cli.command, Command::Hasse { .. }) {
        return Err(Failure {
            code: EXIT_USAGE,
            message: "--format dot applies to `hasse` only".into(),
        });
    }
    let json = fmt == Format::Json;
    match cli.command {
        Command::List => {
            if json {
                #[derive(Serialize)]
                struct Row {
                    id: &'static str,
                    orbifold: &'static str,
                    orbifold_unicode: &'static str,
                    holonomy_class: &'static str,
                }
                let rows: Vec<Row> = entries()
                    .iter()
                    .map(|e| Row {
                        id: e.class.symbol(),
                        orbifold: e.class.orbifold_ascii(),
                        orbifold_unicode: e.class.orbifold_unicode(),
                        holonomy_class: e.holonomy_class.label(),
                    })
                    .collect();
                println!("{}", to_json(&rows));
            } else {
                for e in entries() {
                    println!(
                        "{:<5} {:<15} {:<13} {}",
                        e.class.symbol(),
                        e.class.orbifold_ascii(),
                        e.holonomy_class.label(),
                        e.abelianization
                    );
                }
            }
            Ok(0)
        }
        Command::Show { id } => {
            let e = entry(class(&id)?);
            if json {
                println!("{}", to_json(e));
            } else {
                println!("{} = {} ({})", e.class.symbol(), e.class.orbifold_ascii(), e.class.orbifold_unicode());
                println!("holonomy      {} {}", e.holonomy_class.label(), e.holonomy_class.generator_notation());
                println!("extension     {:?}", e.extension_coordinates);
                for (n, g) in &e.affine_generators {
                    println!("  {n} = {g}");
                }
                println!("presentation  {}", e.presentation_extension.text);
                println!("orbifold      {}", e.presentation_orbifold.text);
                println!("abelianization {}", e.abelianization);
                println!("euler char    {}", e.signature.euler_characteristic());
                for n in &e.notes {
                    println!("note: {n}");
                }
            }
            Ok(0)
        }
        Command::Identify { file } => {
            let text = std::fs::read_to_string(&file).map_err(|e| Failure {
                code: EXIT_PARSE,
                message: format!("{}: {e}", file.display()),
            })?;
            let gens: Vec<_> = affine::parse_generators(&text)?.into_iter().map(|(_, g)| g).collect();
            let group = affine::group_from_generators(&gens)?;
            let r = recognition::identify(&group)?;
            if json {
                println!("{}", to_json(&r));
            } else {
                println!("{} ({})", r.class.symbol(), r.class.orbifold_ascii());
                println!("holonomy {}; abelianization {}; extension {:?}", r.holonomy_class.label(), r.abelianization, r.extension_coordinates);
            }
            Ok(0)
        }
        Command::H2 { label } => {
            let pc = PointGroupClass::ALL
                .into_iter()
                .find(|c| c.label().eq_ignore_ascii_case(&label) || c.generator_notation() == label)
                .ok_or_else(|| Failure::from(Error::UnknownName(label.clone())))?;
            let h2 = h2_of_point_group(&pc.representative());
            if json {
                #[derive(Serialize)]
                struct Out<'a> {
                    holonomy_class: &'a str,
                    invariant_factors: &'a [u64],
                    order: u64,
                }
                println!(
                    "{}",
                    to_json(&Out {
                        holonomy_class: pc.label(),
                        invariant_factors: &h2.invariant_factors,
                        order: h2.order(),
                    })
                );
            } else {
                println!("H2({} = {}) = {}", pc.label(), pc.generator_notation(), group_string(&h2.invariant_factors));
            }
            Ok(0)
        }
        Command::Subgroups { id, max_index } => {
            let subs = classified_subgroups(class(&id)?, max_index);
            if json {
                println!("{}", to_json(&*subs));
            } else {
                for s in subs.iter() {
                    println!("{:>3}  {:<5} <{}>", s.index, s.class.symbol(), s.words.join(", "));
                }
            }
            Ok(0)
        }
        Command::Covers { cover, base, max_index } => {
            let d = covers(class(&cover)?, class(&base)?, max_index);
            if json {
                println!("{}", to_json(&d));
            } else {
                match &d {
                    CoverDecision::Yes(w) => println!("Yes: index {} subgroup <{}>", w.index, w.words.join(", ")),
                    CoverDecision::No(c) => println!("No: {c}"),
                    CoverDecision::Unknown { max_index } => println!("Unknown: no subgroup up to index {max_index}"),
                }
            }
            Ok(match d {
                CoverDecision::Yes(_) => 0,
                CoverDecision::No(_) => 1,
                CoverDecision::Unknown { .. } => 2,
            })
        }
        Command::Hasse { max_index } => {
            let h = covering_hasse(max_index);
            if json {
                println!("{}", to_json(&h));
            } else {
                print!("{}", h.to_dot());
            }
            Ok(0)
        }
        Command::Fibrations { id } => {
            let c = class(&id)?;
            let orbits = invariant_directions(c);
            let structures = fibration_structures(c);
            if json {
                #[derive(Serialize)]
                struct Out<'a> {
                    id: &'a str,
                    fibres_over_circle: bool,
                    direction_orbits: &'a wallpaper_core::fibration::DirectionOrbits,
                    structures: &'a [wallpaper_core::fibration::FibrationStructure],
                }
                println!(
                    "{}",
                    to_json(&Out {
                        id: c.symbol(),
                        fibres_over_circle: fibres_over_circle(c),
                        direction_orbits: &orbits,
                        structures: &structures,
                    })
                );
            } else {
                println!("{}: fibres over S1: {}", c.symbol(), fibres_over_circle(c));
                for s in &structures {
                    println!(
                        "  direction {}  base {}  fibre {}  singular [{}]  boundary [{}]",
                        s.direction,
                        s.base,
                        s.general_fibre,
                        s.singular_fibres.join("; "),
                        s.boundary_fibres.join("; ")
                    );
                }
                if structures.is_empty() {
                    println!("  no invariant direction");
                }
            }
            Ok(0)
        }
        Command::Seifert { geometry } => {
            let g: GeometryTag = geometry.parse()?;
            let rows = justifications(g);
            if json {
                println!("{}", to_json(&rows));
            } else {
                for j in &rows {
                    let tag = if j.computed { "computed" } else { "authored" };
                    println!("{:<5} [{tag}] {}", j.class.symbol(), j.reason);
                }
            }
            Ok(0)
        }
        Command::Verify { suite } => {
            let suites: Vec<Suite> = if suite == "all" {
                Suite::ALL.to_vec()
            } else {
                vec![suite.parse::<Suite>()?]
            };
            let reports: Vec<_> = suites.into_iter().map(verify::run).collect();
            let status = overall(reports.iter().map(|r| r.status));
            if json {
                println!("{}", to_json(&reports));
            } else {
                for r in &reports {
                    println!("== {} : {}", r.suite, r.status);
                    for c in &r.claims {
                        println!("  {:<22} {:<38} {}", c.status.to_string(), c.id, c.detail);
                    }
                }
                println!("overall: {status}");
            }
            Ok(match status {
                Status::Pass => 0,
                Status::Fail => 1,
                Status::ConsistentUnverified => 2,
            })
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE } else { 0 });
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
