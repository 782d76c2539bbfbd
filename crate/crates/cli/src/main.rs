//! Command-line interface: link invariants from grid diagrams.

use clap::{Parser, Subcommand, ValueEnum};
use gridkh_core::complex::{build_complex, Ring};
use gridkh_core::eights::{build_figure_eights, enumerate_generators, Waist};
use gridkh_core::error::Error;
use gridkh_core::gradings::{auxiliary_gradings, gradings_jp};
use gridkh_core::grid::GridDiagram;
use gridkh_core::invariants::{
    component_sign, jones_bigelow_in, jones_euler_reduced, jones_state_sum_in,
};
use gridkh_core::reduction::{reduce_in, HomotopyMode, ReduceOptions};
use gridkh_core::states::StateSpace;
use gridkh_core::verify::{verify_suite, VerifyOptions};
use serde::Serialize;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "gridkh",
    about = "Jones polynomial and Khovanov homology from grid diagrams",
    version
)]
struct Cli {
    /// Grid description, e.g. "n=5; X=3,4,5,1,2; O=1,2,3,4,5".
    #[arg(long, global = true)]
    grid: Option<String>,
    /// File holding the grid, either in the text format or as JSON
    /// {"size":n,"x":[...],"o":[...]}.
    #[arg(long, global = true)]
    file: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = FormatArg::Text)]
    format: FormatArg,
    /// Waist position of the figure-eight curves.
    #[arg(long, global = true, value_enum, default_value_t = WaistArg::High)]
    waist: WaistArg,
    /// Coefficient ring for homology and reduction.
    #[arg(long, global = true, value_enum, default_value_t = RingArg::Z)]
    ring: RingArg,
    /// Contracting homotopy used by the reduction.
    #[arg(long, global = true, value_enum, default_value_t = HomotopyArg::Single)]
    homotopy: HomotopyArg,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Crossings, writhe, rotation number and component count.
    Info,
    /// Every generator with its gradings.
    Generators,
    /// The Jones polynomial, by default through all three routes.
    Jones {
        #[arg(long, value_enum)]
        route: Option<RouteArg>,
    },
    /// Khovanov homology of the full complex.
    Khovanov,
    /// Reduce onto the generators; print the differential and homology.
    Reduce,
    /// Run the identity suite against the diagram.
    Verify {
        /// Cap on 2^crossings * 2^size.
        #[arg(long, default_value_t = 1 << 20)]
        cap: u128,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FormatArg {
    Text,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum WaistArg {
    High,
    Low,
}

#[derive(Clone, Copy, ValueEnum)]
enum RingArg {
    Z,
    Q,
}

#[derive(Clone, Copy, ValueEnum)]
enum HomotopyArg {
    Single,
    Average,
}

#[derive(Clone, Copy, ValueEnum)]
enum RouteArg {
    Bigelow,
    Statesum,
    Euler,
}

fn exit_code_for(err: &Error) -> ExitCode {
    match err {
        Error::SizeTooSmall(_)
        | Error::NotAPermutation(_)
        | Error::PunctureCollision { .. }
        | Error::InvalidFormat(_) => ExitCode::from(1),
        Error::TooLarge { .. } => ExitCode::from(3),
        _ => ExitCode::from(2),
    }
}

fn load_diagram(cli: &Cli) -> Result<GridDiagram, Error> {
    let text = match (&cli.grid, &cli.file) {
        (Some(g), None) => g.clone(),
        (None, Some(path)) => std::fs::read_to_string(path)
            .map_err(|e| Error::InvalidFormat(format!("cannot read {}: {}", path.display(), e)))?,
        _ => {
            return Err(Error::InvalidFormat(
                "provide exactly one of --grid or --file".into(),
            ))
        }
    };
    let trimmed = text.trim();
    if trimmed.starts_with('{') {
        serde_json::from_str(trimmed).map_err(|e| Error::InvalidFormat(e.to_string()))
    } else {
        GridDiagram::parse(trimmed)
    }
}

fn emit<T: Serialize>(format: FormatArg, value: &T, text: impl FnOnce() -> String) {
    match format {
        FormatArg::Json => println!("{}", serde_json::to_string_pretty(value).unwrap()),
        FormatArg::Text => println!("{}", text()),
    }
}

#[derive(Serialize)]
struct GeneratorRow {
    points: Vec<(usize, usize, char)>,
    p: i64,
    j: i64,
    t: i64,
    q: i64,
    j1: i64,
    j2: i64,
    j3: i64,
}

#[derive(Serialize)]
struct JonesOutput {
    bigelow: gridkh_core::LaurentPolynomial,
    state_sum: gridkh_core::LaurentPolynomial,
    reduced_euler: gridkh_core::LaurentPolynomial,
    component_sign: i64,
    /// state_sum scaled by the component sign; equals `bigelow`.
    state_sum_adjusted: gridkh_core::LaurentPolynomial,
}

#[derive(Serialize)]
struct ReduceOutput {
    ring: Ring,
    basis: Vec<ReducedBasisRow>,
    /// Differential as (source, target, coefficient) triples.
    differential: Vec<(usize, usize, String)>,
    homology: gridkh_core::HomologyTable,
}

#[derive(Serialize)]
struct ReducedBasisRow {
    index: usize,
    points: Vec<(usize, usize, char)>,
    i: i64,
    j: i64,
}

fn side_char(side: gridkh_core::Side) -> char {
    match side {
        gridkh_core::Side::Left => 'L',
        gridkh_core::Side::Right => 'R',
    }
}

fn run(cli: &Cli) -> Result<ExitCode, Error> {
    let diagram = load_diagram(cli)?;
    let waist = match cli.waist {
        WaistArg::High => Waist::High,
        WaistArg::Low => Waist::Low,
    };
    let ring = match cli.ring {
        RingArg::Z => Ring::Z,
        RingArg::Q => Ring::Q,
    };
    let mode = match cli.homotopy {
        HomotopyArg::Single => HomotopyMode::SingleSplit,
        HomotopyArg::Average => HomotopyMode::CanonicalAverage,
    };

    match &cli.command {
        Command::Info => {
            let data = diagram.diagram_data();
            emit(cli.format, &data, || {
                let mut out = format!("diagram: {}\n", diagram.text());
                out += &format!(
                    "crossings ({}): {}\n",
                    data.crossings.len(),
                    data.crossings
                        .iter()
                        .map(|c| format!("({}, {}, {:+})", c.column, c.row, c.sign))
                        .collect::<Vec<_>>()
                        .join(" ")
                );
                out += &format!(
                    "n+ = {}, n- = {}, writhe = {}\n",
                    data.n_plus, data.n_minus, data.writhe
                );
                out += &format!("rot = {}, components = {}", data.rot, data.components);
                out
            });
        }
        Command::Generators => {
            let space = StateSpace::new(&diagram);
            let eights = build_figure_eights(&diagram, waist);
            let mut rows = Vec::new();
            for g in enumerate_generators(&diagram, &eights) {
                let gg = gradings_jp(&space, &eights, &g)?;
                let aux = auxiliary_gradings(&space, &g)?;
                rows.push(GeneratorRow {
                    points: g
                        .points
                        .iter()
                        .map(|z| (z.column, z.row, side_char(z.side)))
                        .collect(),
                    p: gg.p,
                    j: gg.j,
                    t: gg.t,
                    q: gg.q,
                    j1: aux.j1,
                    j2: aux.j2,
                    j3: aux.j3,
                });
            }
            emit(cli.format, &rows, || {
                let mut out = String::new();
                for (k, r) in rows.iter().enumerate() {
                    let pts = r
                        .points
                        .iter()
                        .map(|(c, row, s)| format!("({},{},{})", c, row, s))
                        .collect::<Vec<_>>()
                        .join(" ");
                    out += &format!(
                        "g{:<3} {}  P={:<3} J={:<3} T={:<3} Q={:<3} j1={:<3} j2={:<3} j3={}\n",
                        k, pts, r.p, r.j, r.t, r.q, r.j1, r.j2, r.j3
                    );
                }
                out.pop();
                out
            });
        }
        Command::Jones { route } => {
            let space = StateSpace::new(&diagram);
            let bigelow = jones_bigelow_in(&space, waist)?;
            let state_sum = jones_state_sum_in(&space);
            let reduced = jones_euler_reduced(&space, waist)?;
            let sign = component_sign(&diagram);
            match route {
                Some(RouteArg::Bigelow) => emit(cli.format, &bigelow, || bigelow.to_string()),
                Some(RouteArg::Statesum) => {
                    emit(cli.format, &state_sum, || state_sum.to_string())
                }
                Some(RouteArg::Euler) => emit(cli.format, &reduced, || reduced.to_string()),
                None => {
                    let out = JonesOutput {
                        state_sum_adjusted: state_sum.scale(sign),
                        bigelow,
                        state_sum,
                        reduced_euler: reduced,
                        component_sign: sign,
                    };
                    emit(cli.format, &out, || {
                        format!(
                            "generator route:     {}\nstate sum:           {}\nreduced euler char.: {}\nsign-adjusted sum:   {}  (component sign {:+})",
                            out.bigelow,
                            out.state_sum,
                            out.reduced_euler,
                            out.state_sum_adjusted,
                            out.component_sign
                        )
                    });
                }
            }
        }
        Command::Khovanov => {
            let space = StateSpace::new(&diagram);
            let mut complex = build_complex(&space);
            complex.ring = ring;
            let table = complex.homology()?;
            emit(cli.format, &table, || table.to_string().trim_end().to_string());
        }
        Command::Reduce => {
            let space = StateSpace::new(&diagram);
            let red = reduce_in(
                &space,
                ReduceOptions {
                    ring,
                    mode,
                    waist,
                    verify_steps: false,
                },
            )?;
            let homology = red.complex.homology()?;
            let basis = red
                .complex
                .basis
                .iter()
                .enumerate()
                .map(|(index, e)| {
                    let points = match &e.label {
                        gridkh_core::Label::Generator(g) => g
                            .points
                            .iter()
                            .map(|z| (z.column, z.row, side_char(z.side)))
                            .collect(),
                        _ => Vec::new(),
                    };
                    ReducedBasisRow {
                        index,
                        points,
                        i: e.i,
                        j: e.j,
                    }
                })
                .collect();
            let differential = red
                .complex
                .entries()
                .map(|(s, d, v)| (s, d, v.to_string()))
                .collect();
            let out = ReduceOutput {
                ring,
                basis,
                differential,
                homology,
            };
            emit(cli.format, &out, || {
                let mut text = String::new();
                for row in &out.basis {
                    let pts = row
                        .points
                        .iter()
                        .map(|(c, r, s)| format!("({},{},{})", c, r, s))
                        .collect::<Vec<_>>()
                        .join(" ");
                    text += &format!(
                        "g{:<3} {}  (i, j) = ({}, {})\n",
                        row.index, pts, row.i, row.j
                    );
                }
                if out.differential.is_empty() {
                    text += "differential: 0\n";
                } else {
                    text += "differential:\n";
                    for (s, d, v) in &out.differential {
                        text += &format!("  g{} -> g{}: {}\n", s, d, v);
                    }
                }
                text += "homology:\n";
                text += &out.homology.to_string();
                text.trim_end().to_string()
            });
        }
        Command::Verify { cap } => {
            let report = verify_suite(
                &diagram,
                VerifyOptions {
                    waist,
                    cap: *cap,
                    corruption: None,
                },
            )?;
            emit(cli.format, &report, || {
                let mut out = String::new();
                for c in &report.checks {
                    let mark = if c.pass { "[ok]  " } else { "[FAIL]" };
                    if c.detail.is_empty() {
                        out += &format!("{} {}\n", mark, c.name);
                    } else {
                        out += &format!("{} {} ({})\n", mark, c.name, c.detail);
                    }
                }
                // The generator <-> state correspondence.
                let space = StateSpace::new(&diagram);
                let eights = build_figure_eights(&diagram, waist);
                out += "bijection (generator <-> enhanced state):\n";
                for g in enumerate_generators(&diagram, &eights) {
                    let state = gridkh_core::states::phi(&space, &g);
                    let pts = g
                        .points
                        .iter()
                        .map(|z| format!("({},{},{})", z.column, z.row, side_char(z.side)))
                        .collect::<Vec<_>>()
                        .join(" ");
                    let bits = state
                        .resolution
                        .iter()
                        .map(|&b| if b { '1' } else { '0' })
                        .collect::<String>();
                    let orients = state
                        .orientations
                        .iter()
                        .map(|&s| if s > 0 { "ccw" } else { "cw" })
                        .collect::<Vec<_>>()
                        .join(",");
                    out += &format!("  {}  <->  r={} circles=[{}]\n", pts, bits, orients);
                }
                out += &format!("jones (state sum):  {}\n", report.invariants.jones);
                out += &format!(
                    "jones (generators): {}\n",
                    report.invariants.jones_generators
                );
                out += "khovanov homology:\n";
                out += &report.invariants.homology.to_string();
                out.trim_end().to_string()
            });
            if !report.all_pass() {
                return Ok(ExitCode::from(2));
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {}", e);
            exit_code_for(&e)
        }
    }
}
