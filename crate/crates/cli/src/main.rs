//! `tropmap`: command-line access to degree-3 tropical map combinatorics.
//!
//! Exit status is 0 on success, 1 on domain errors and 2 on malformed input.
//! Errors carry a stable reason code.

mod input;

use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use num_traits::Signed;
use serde::Serialize;
use serde_json::{json, Value};

use tropmap_core::compact::{classify_stratum, face_lattice, BoundaryStratum};
use tropmap_core::hurwitz::{fiber, BranchConfiguration, HurwitzFiber};
use tropmap_core::moduli::{
    automorphisms, curve_automorphisms, degenerate, map_automorphisms, stratum, weighted_curve,
};
use tropmap_core::rational::format_rational;
use tropmap_core::relu::{map_to_network, network_to_map, symmetry_report};
use tropmap_core::tropical::tropicalize_rational;
use tropmap_core::types::{canonical_type, enumerate_types};
use tropmap_core::{AutGroup, Error, Extended, Label, ModuliPoint, SlopeSequence};

use input::PointSource;

#[derive(Parser)]
#[command(
    name = "tropmap",
    version,
    about = "Exact combinatorics of tropical rational maps"
)]
struct Cli {
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct InputArg {
    /// JSON input file, or `-` for standard input.
    input: PathBuf,
}

#[derive(Subcommand)]
enum Command {
    /// List the combinatorial types of a degree.
    Types {
        #[arg(long)]
        degree: u32,
        #[arg(long)]
        max_breaks: Option<usize>,
    },
    /// Classify a map, or a point of the compactified cube.
    Classify {
        #[command(flatten)]
        input: InputArg,
        #[arg(long, default_value_t = 3)]
        degree: u32,
    },
    /// Evaluate a map at a rational point or at ±inf.
    Eval {
        #[command(flatten)]
        input: InputArg,
        #[arg(long, allow_hyphen_values = true)]
        at: String,
    },
    /// Automorphism group of a moduli point or map.
    Aut(InputArg),
    /// Symmetry stratum of a moduli point or map.
    Stratum(InputArg),
    /// Collide two adjacent break points.
    Degenerate {
        #[command(flatten)]
        input: InputArg,
        /// 1-based index of the gap to shrink.
        #[arg(long)]
        merge: usize,
    },
    /// The weighted tropical curve of a moduli point or map.
    Curve(InputArg),
    /// Fiber of the branch map over four branch points.
    Hurwitz {
        #[arg(long, allow_hyphen_values = true, conflicts_with = "distances")]
        branch: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        distances: Option<String>,
    },
    /// The 27 faces of the compactified cube over a four-break type.
    Strata {
        #[arg(long = "type", conflicts_with = "slopes")]
        label: Option<String>,
        #[arg(long)]
        slopes: Option<String>,
    },
    /// Boundary stratum of a point of the compactified cube.
    ClassifyCompact(InputArg),
    /// Convert a ReLU network to a map.
    FromRelu(InputArg),
    /// Canonical ReLU network of a map.
    ToRelu(InputArg),
    /// Dead units, type and automorphisms of a ReLU network.
    Symmetry(InputArg),
    /// Tropicalize a rational function from coefficient valuations.
    Tropicalize {
        /// Numerator coefficients by exponent, e.g. `0,-inf,-inf,0`.
        #[arg(long, allow_hyphen_values = true)]
        num: String,
        #[arg(long, allow_hyphen_values = true, default_value = "0")]
        den: String,
    },
}

#[derive(Debug)]
pub enum CliError {
    Core(Error),
    Malformed { code: &'static str, message: String },
}

impl CliError {
    pub fn malformed(code: &'static str, message: impl Into<String>) -> Self {
        CliError::Malformed {
            code,
            message: message.into(),
        }
    }

    pub fn io(what: &str, e: std::io::Error) -> Self {
        Self::malformed("io", format!("{what}: {e}"))
    }

    pub fn json(e: serde_json::Error) -> Self {
        Self::malformed("malformed-json", e.to_string())
    }

    fn code(&self) -> &'static str {
        match self {
            CliError::Core(e) => e.code(),
            CliError::Malformed { code, .. } => code,
        }
    }

    fn message(&self) -> String {
        match self {
            CliError::Core(e) => e.to_string(),
            CliError::Malformed { message, .. } => message.clone(),
        }
    }

    fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(e) if !e.is_malformed_input() => 1,
            _ => 2,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

/// A result ready to print: JSON value plus its text rendering.
struct Output {
    json: Value,
    text: String,
}

fn out<T: Serialize>(value: &T, text: String) -> Output {
    Output {
        json: serde_json::to_value(value).expect("serializable"),
        text,
    }
}

fn tuple<T: ToString>(xs: &[T]) -> String {
    let parts: Vec<String> = xs.iter().map(T::to_string).collect();
    format!("({})", parts.join(","))
}

fn rationals(xs: &[tropmap_core::Rational]) -> String {
    let parts: Vec<String> = xs.iter().map(format_rational).collect();
    format!("({})", parts.join(","))
}

fn aut_text(aut: &AutGroup) -> String {
    match aut {
        AutGroup::Trivial => "Aut trivial".into(),
        AutGroup::Z2 {
            center,
            target_shift,
        } => format!(
            "Aut Z/2: x -> -x + {}, y -> -y + {}",
            format_rational(&(center * tropmap_core::rational::int(2))),
            format_rational(target_shift)
        ),
    }
}

fn point_aut(src: &PointSource) -> Result<AutGroup, CliError> {
    Ok(match src {
        PointSource::Point(p) => automorphisms(p),
        PointSource::Map(m, _) => map_automorphisms(m)?,
    })
}

fn point_text(p: &ModuliPoint) -> String {
    format!(
        "slopes {} gaps {} position {}",
        p.seq(),
        rationals(p.gaps()),
        format_rational(p.position())
    )
}

fn stratum_text(s: &BoundaryStratum) -> String {
    let states: Vec<&str> = s
        .states
        .iter()
        .map(|c| match c {
            tropmap_core::compact::CoordState::Zero => "0",
            tropmap_core::compact::CoordState::Open => "open",
            tropmap_core::compact::CoordState::Infinite => "inf",
        })
        .collect();
    let mut line = format!("[{}] codim {}", states.join(", "), s.codimension);
    for c in &s.collisions {
        let kind = match c.kind {
            tropmap_core::compact::MergeKind::ValidMerge => "valid-merge",
            tropmap_core::compact::MergeKind::ReducedVariation => "reduced-variation",
        };
        let _ = write!(line, " D{} {kind}", c.index);
    }
    for i in &s.infinities {
        let _ = write!(line, " l{i}=inf");
    }
    if s.is_collision_face() {
        let _ = write!(
            line,
            " limit {} variation {}{}",
            tuple(&s.limit_seq),
            s.limit_variation,
            if s.in_moduli { "" } else { " (outside moduli)" }
        );
        if let Some(l) = s.limit_label {
            let _ = write!(line, " type {l}");
        }
    }
    line
}

fn fiber_text(f: &HurwitzFiber) -> String {
    let mut text = format!(
        "geometric count {}, weighted count {}\n",
        f.geometric_count, f.weighted_count
    );
    for e in &f.elements {
        let _ = writeln!(
            text,
            "{:<4} {:<12} gaps {} multiplicity {}",
            e.label.as_str(),
            e.seq.to_string(),
            rationals(&e.gaps),
            e.multiplicity
        );
    }
    text.trim_end().to_string()
}

fn run(cmd: Command) -> Result<Output, CliError> {
    match cmd {
        Command::Types { degree, max_breaks } => {
            let types = enumerate_types(degree, max_breaks);
            let mut rows = Vec::new();
            let mut text = String::new();
            for t in &types {
                let mut row = serde_json::Map::new();
                if let Some(l) = t.label {
                    row.insert("label".into(), json!(l));
                }
                row.insert("slopes".into(), json!(t.representative.slopes()));
                row.insert("palindromic".into(), json!(t.palindromic));
                row.insert("k".into(), json!(t.k()));
                rows.push(Value::Object(row));
                let _ = writeln!(
                    text,
                    "{:<4} k={}  {:<14} {}",
                    t.label.map_or("-", Label::as_str),
                    t.k(),
                    t.representative.to_string(),
                    if t.palindromic { "palindromic" } else { "" }
                );
            }
            let _ = write!(text, "{} types", types.len());
            Ok(Output {
                json: Value::Array(rows),
                text,
            })
        }
        Command::Classify { input, degree } => {
            let v = input::read_json(&input.input)?;
            if v.get("breaks").is_none() {
                let p = input::parse_compact(v)?;
                let s = classify_stratum(&p);
                let text = stratum_text(&s);
                return Ok(out(&s, text));
            }
            let m = input::parse_map(v)?;
            let ram = m.ramification();
            let adm = m.admissibility(degree);
            let mut value = json!({
                "map": m,
                "ramification": ram,
                "admissibility": adm,
            });
            let mut text = format!(
                "{m}\nramification {} total {}\n{adm}",
                tuple(&ram.weights),
                ram.total
            );
            if adm.admissible {
                let seq = SlopeSequence::new(degree, m.slopes().to_vec())?;
                let t = canonical_type(&seq);
                let obj = value.as_object_mut().expect("object");
                obj.insert("canonical".into(), json!(t.canonical.slopes()));
                obj.insert("palindromic".into(), json!(t.palindromic));
                if let Some(l) = t.label {
                    obj.insert("label".into(), json!(l));
                    let _ = write!(text, "\ntype {l} {}", t.canonical);
                } else {
                    let _ = write!(text, "\ntype {}", t.canonical);
                }
            }
            Ok(Output { json: value, text })
        }
        Command::Eval { input, at } => {
            let m = input::parse_map(input::read_json(&input.input)?)?;
            let x: Extended = at.parse()?;
            let y = m.evaluate_extended(&x);
            Ok(out(&json!({ "x": x, "value": y }), y.to_string()))
        }
        Command::Aut(input) => {
            let src = input::parse_point_or_map(input::read_json(&input.input)?)?;
            let aut = point_aut(&src)?;
            let text = aut_text(&aut);
            Ok(out(&aut, text))
        }
        Command::Stratum(input) => {
            let src = input::parse_point_or_map(input::read_json(&input.input)?)?;
            let s = stratum(src.point());
            let text = format!(
                "{} (Aut {}, cell dimension {})",
                s.label, s.aut, s.cell_dimension
            );
            Ok(out(&s, text))
        }
        Command::Degenerate { input, merge } => {
            let src = input::parse_point_or_map(input::read_json(&input.input)?)?;
            let q = degenerate(src.point(), merge)?;
            let label = Label::of(q.seq());
            let mut text = point_text(&q);
            if let Some(l) = label {
                let _ = write!(text, "\ntype {l}");
            }
            Ok(out(&json!({ "point": q, "label": label }), text))
        }
        Command::Curve(input) => {
            let src = input::parse_point_or_map(input::read_json(&input.input)?)?;
            let c = weighted_curve(src.point());
            let aut = curve_automorphisms(&c);
            let mut text = String::new();
            for v in &c.vertices {
                let _ = writeln!(
                    text,
                    "vertex at {} weight {}",
                    format_rational(&v.position),
                    v.weight
                );
            }
            for e in &c.edges {
                let _ = writeln!(
                    text,
                    "edge length {} dilation {}",
                    format_rational(&e.length),
                    e.dilation
                );
            }
            let _ = write!(
                text,
                "leaves {} and {}, Aut {aut}",
                c.leaf_dilations[0], c.leaf_dilations[1]
            );
            Ok(out(&json!({ "curve": c, "aut": aut }), text))
        }
        Command::Hurwitz { branch, distances } => {
            let b = match (branch, distances) {
                (Some(list), None) => {
                    BranchConfiguration::from_branch_points(input::rational_list::<4>(&list)?)?
                }
                (None, Some(list)) => {
                    BranchConfiguration::from_distances(input::rational_list::<3>(&list)?)?
                }
                _ => {
                    return Err(CliError::malformed(
                        "usage",
                        "give exactly one of --branch or --distances",
                    ))
                }
            };
            let f = fiber(&b)?;
            let text = fiber_text(&f);
            Ok(out(&f, text))
        }
        Command::Strata { label, slopes } => {
            let seq = match (label, slopes) {
                (Some(l), None) => l.parse::<Label>()?.sequence(),
                (None, Some(s)) => SlopeSequence::new(3, input::slope_list(&s)?)?,
                _ => {
                    return Err(CliError::malformed(
                        "usage",
                        "give exactly one of --type or --slopes",
                    ))
                }
            };
            let faces = face_lattice(&seq)?;
            let lines: Vec<String> = faces.iter().map(stratum_text).collect();
            Ok(out(&faces, lines.join("\n")))
        }
        Command::ClassifyCompact(input) => {
            let p = input::parse_compact(input::read_json(&input.input)?)?;
            let s = classify_stratum(&p);
            let text = stratum_text(&s);
            Ok(out(&s, text))
        }
        Command::FromRelu(input) => {
            let net = input::parse_network(input::read_json(&input.input)?)?;
            let c = network_to_map(&net);
            let mut text = match &c.map {
                Some(m) => m.to_string(),
                None => format!(
                    "breaks {} slopes {} (non-integer slopes)",
                    rationals(&c.function.breaks),
                    rationals(&c.function.slopes)
                ),
            };
            if let Some(a) = &c.report.admissibility {
                let _ = write!(text, "\n{a}");
            }
            Ok(out(&c, text))
        }
        Command::ToRelu(input) => {
            let m = input::parse_map(input::read_json(&input.input)?)?;
            let net = map_to_network(&m);
            let mut text = format!(
                "f(x) = {}x + {}",
                format_rational(&net.base_slope),
                format_rational(&net.base_bias)
            );
            for u in &net.units {
                let _ = write!(
                    text,
                    "\n  {} {}·max(0, {}x {} {})",
                    if u.a.is_negative() { "-" } else { "+" },
                    format_rational(&u.a.abs()),
                    format_rational(&u.w),
                    if u.b.is_negative() { "-" } else { "+" },
                    format_rational(&u.b.abs())
                );
            }
            Ok(out(&net, text))
        }
        Command::Symmetry(input) => {
            let net = input::parse_network(input::read_json(&input.input)?)?;
            let r = symmetry_report(&net);
            let mut text = format!("{} live units", r.live_units);
            for d in &r.dead_units {
                let _ = write!(text, "\nunit {} dead: {:?}", d.index, d.reason);
            }
            match (&r.label, &r.aut) {
                (Some(l), Some(aut)) => {
                    let _ = write!(text, "\ntype {l}\n{}", aut_text(aut));
                }
                _ => text.push_str("\nnot an admissible degree-3 map"),
            }
            if let Some(g) = &r.gap_condition {
                let _ = write!(
                    text,
                    "\nl1 = {}, l3 = {}: {}",
                    format_rational(&g.first),
                    format_rational(&g.last),
                    if g.holds {
                        "symmetric"
                    } else {
                        "not symmetric"
                    }
                );
            }
            Ok(out(&r, text))
        }
        Command::Tropicalize { num, den } => {
            let p = input::polynomial(&num)?;
            let q = input::polynomial(&den)?;
            let m = tropicalize_rational(&p, &q);
            let text = m.to_string();
            Ok(out(&m, text))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(o) => {
            if cli.json {
                println!("{}", o.json);
            } else {
                println!("{}", o.text);
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            if cli.json {
                println!(
                    "{}",
                    json!({ "error": { "code": e.code(), "message": e.message() } })
                );
            } else {
                eprintln!("error[{}]: {}", e.code(), e.message());
            }
            ExitCode::from(e.exit_code())
        }
    }
}
