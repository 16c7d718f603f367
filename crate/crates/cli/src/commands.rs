use std::fs;
use std::io::{self, Write};
use std::path::Path;

use anyhow::{bail, Context};
use serde::Serialize;

use planar_cover::electrical::ElectricalSystem;
use planar_cover::experiments::{run_grid_scaling, run_identity_suite, run_separation_pipeline, ExperimentSpec};
use planar_cover::graph::GraphFile;
use planar_cover::packing::{compute_packing, default_outer_face, diagnostics, PackingFile};
use planar_cover::separation::{select_separated, verify_separation, SeparationConfig};
use planar_cover::walks::{hitting_times_exact, matthews_bounds, simulate_cover_time};
use planar_cover::{generate, triangulate, Error, Family, PlanarGraph, Triangulation, VERSION};

use crate::{Command, GraphSource, Output};

pub enum Outcome {
    Pass,
    Fail(String),
}

/// Input problems map to 2, solver failures to 3.
pub fn exit_code(e: &anyhow::Error) -> u8 {
    match e.downcast_ref::<Error>() {
        Some(Error::NoConvergence { .. } | Error::SolveFailure { .. } | Error::CoincidentCenters(..) | Error::ZeroEnergy) => 3,
        _ => 2,
    }
}

fn parse_family(name: &str) -> anyhow::Result<Family> {
    Ok(name.parse::<Family>()?)
}

fn read_graph(path: &Path) -> anyhow::Result<PlanarGraph> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    Ok(GraphFile::from_json(&text)?.into_planar()?)
}

fn load(source: &GraphSource) -> anyhow::Result<PlanarGraph> {
    match (&source.graph, &source.family) {
        (Some(path), _) => read_graph(path),
        (None, Some(name)) => Ok(generate(parse_family(name)?)?),
        (None, None) => bail!("either --graph or --family is required"),
    }
}

fn sink(out: &Output) -> anyhow::Result<Box<dyn Write>> {
    Ok(match &out.out {
        Some(path) => Box::new(io::BufWriter::new(
            fs::File::create(path).with_context(|| format!("creating {}", path.display()))?,
        )),
        None => Box::new(io::BufWriter::new(io::stdout().lock())),
    })
}

fn write_json<T: Serialize>(out: &Output, value: &T) -> anyhow::Result<()> {
    let mut w = sink(out)?;
    serde_json::to_writer_pretty(&mut w, value)?;
    writeln!(w)?;
    w.flush()?;
    Ok(())
}

fn write_csv<T: Serialize>(out: &Output, rows: &[T]) -> anyhow::Result<()> {
    let mut w = csv::Writer::from_writer(sink(out)?);
    for row in rows {
        w.serialize(row)?;
    }
    w.flush()?;
    Ok(())
}

fn parse_pair(text: &str) -> anyhow::Result<(usize, usize)> {
    let (u, v) = text
        .split_once('-')
        .with_context(|| format!("pair `{text}` is not of the form u-v"))?;
    Ok((u.trim().parse()?, v.trim().parse()?))
}

fn sized_spec(family: &str, sizes: Vec<usize>) -> anyhow::Result<ExperimentSpec> {
    let family = parse_family(family)?;
    if family.size().is_some() && sizes.is_empty() {
        bail!("--sizes is required for family `{}`", family.name());
    }
    Ok(ExperimentSpec::new(family, sizes))
}

#[derive(Serialize)]
struct ResistanceRow {
    u: usize,
    v: usize,
    resistance: f64,
    solver_tol: f64,
    version: &'static str,
}

#[derive(Serialize)]
struct HittingRow {
    vertex: usize,
    target: usize,
    hitting_time: f64,
    solver_tol: f64,
    version: &'static str,
}

#[derive(Serialize)]
struct CoverRow {
    n: usize,
    edges: usize,
    start: usize,
    trials: usize,
    seed: u64,
    mean: f64,
    std_error: f64,
    min_steps: u64,
    max_steps: u64,
    six_n_sq: f64,
    degree_bound: f64,
    upper_ok: bool,
    version: &'static str,
}

#[derive(Serialize)]
struct SuiteRow {
    graph: String,
    n: usize,
    edges: usize,
    additivity: f64,
    commute: f64,
    tetali: f64,
    triangle: f64,
    ordering: f64,
    tolerance: f64,
    solver_tol: f64,
    passes: bool,
    version: &'static str,
}

#[derive(Serialize)]
struct Report<'a, T: Serialize> {
    version: &'static str,
    #[serde(flatten)]
    params: serde_json::Value,
    result: &'a T,
}

fn report<'a, T: Serialize>(params: serde_json::Value, result: &'a T) -> Report<'a, T> {
    Report {
        version: VERSION,
        params,
        result,
    }
}

fn as_triangulation(g: PlanarGraph, path: &Path) -> anyhow::Result<Triangulation> {
    Triangulation::from_planar(g).with_context(|| format!("{} is not a triangulation", path.display()))
}

pub fn run(command: Command) -> anyhow::Result<Outcome> {
    match command {
        Command::Gen {
            family,
            triangulate: tri,
            out,
        } => {
            let g = generate(parse_family(&family)?)?;
            let g = if tri { triangulate(&g)?.graph().clone() } else { g };
            write_json(&out, &g.to_file())?;
            Ok(Outcome::Pass)
        }
        Command::Pack {
            source,
            outer,
            tol,
            triangulate: tri,
            out,
        } => {
            let g = load(&source)?;
            let t = if tri { triangulate(&g)? } else { Triangulation::from_planar(g)? };
            let outer = match outer.as_deref() {
                None => default_outer_face(&t),
                Some(&[a, b, c]) => [a, b, c],
                Some(_) => bail!("--outer takes exactly three vertices"),
            };
            let p = compute_packing(&t, outer, tol)?;
            log::info!("packing: {} sweeps, ring ratio {}", p.iterations(), diagnostics(&p, &t).ring_ratio);
            write_json(&out, &p.to_file())?;
            Ok(Outcome::Pass)
        }
        Command::Resist {
            source,
            pairs,
            all_pairs,
            tol,
            out,
        } => {
            let g = load(&source)?;
            let sys = ElectricalSystem::new(&g).with_tolerance(tol);
            let mut rows = Vec::new();
            if all_pairs {
                let r = sys.resistance_matrix()?;
                for u in 0..g.n() {
                    for v in u + 1..g.n() {
                        rows.push((u, v, r.at(u, v)));
                    }
                }
            } else {
                if pairs.is_empty() {
                    bail!("give --pairs or --all-pairs");
                }
                for text in &pairs {
                    let (u, v) = parse_pair(text)?;
                    rows.push((u, v, sys.effective_resistance(u, v)?));
                }
            }
            let rows: Vec<_> = rows
                .into_iter()
                .map(|(u, v, resistance)| ResistanceRow {
                    u,
                    v,
                    resistance,
                    solver_tol: tol,
                    version: VERSION,
                })
                .collect();
            write_csv(&out, &rows)?;
            Ok(Outcome::Pass)
        }
        Command::Hit {
            source,
            target,
            tol,
            out,
        } => {
            let g = load(&source)?;
            let h = hitting_times_exact(&ElectricalSystem::new(&g).with_tolerance(tol), target)?;
            let rows: Vec<_> = h
                .iter()
                .enumerate()
                .map(|(vertex, &hitting_time)| HittingRow {
                    vertex,
                    target,
                    hitting_time,
                    solver_tol: tol,
                    version: VERSION,
                })
                .collect();
            write_csv(&out, &rows)?;
            Ok(Outcome::Pass)
        }
        Command::Cover {
            source,
            start,
            trials,
            seed,
            out,
        } => {
            let g = load(&source)?;
            let est = simulate_cover_time(&g, start, trials, seed)?;
            let n = g.n() as f64;
            let degree_bound = g.average_degree() * n * (n - 1.0);
            let slack = 3.0 * est.std_error;
            let upper_ok = est.mean < 6.0 * n * n + slack && est.mean < degree_bound + slack;
            write_csv(
                &out,
                &[CoverRow {
                    n: g.n(),
                    edges: g.edge_count(),
                    start,
                    trials,
                    seed,
                    mean: est.mean,
                    std_error: est.std_error,
                    min_steps: est.min_steps,
                    max_steps: est.max_steps,
                    six_n_sq: 6.0 * n * n,
                    degree_bound,
                    upper_ok,
                    version: VERSION,
                }],
            )?;
            Ok(if upper_ok {
                Outcome::Pass
            } else {
                Outcome::Fail(format!("cover time {} exceeds the planar bound", est.mean))
            })
        }
        Command::Matthews {
            source,
            subset,
            tol,
            out,
        } => {
            let g = load(&source)?;
            let m = matthews_bounds(&ElectricalSystem::new(&g).with_tolerance(tol), subset.as_deref())?;
            write_json(&out, &report(serde_json::json!({ "solver_tol": tol, "n": g.n() }), &m))?;
            Ok(Outcome::Pass)
        }
        Command::Select {
            graph,
            packing,
            subset,
            s,
            tol,
            out,
        } => {
            let t = as_triangulation(read_graph(&graph)?, &graph)?;
            let text = fs::read_to_string(&packing).with_context(|| format!("reading {}", packing.display()))?;
            let p = PackingFile::from_json(&text)?.into_packing()?;
            let w: Vec<usize> = if subset.trim() == "all" {
                (0..t.graph().n()).collect()
            } else {
                subset
                    .split(',')
                    .map(|v| v.trim().parse::<usize>())
                    .collect::<Result<_, _>>()
                    .context("--subset must be `all` or a comma-separated vertex list")?
            };
            let config = SeparationConfig { s, resistance_tol: tol };
            let sel = select_separated(&p, &t, &w, &config)?;
            write_json(&out, &report(serde_json::json!({ "s": s, "solver_tol": tol }), &sel))?;
            Ok(Outcome::Pass)
        }
        Command::Verify {
            source,
            subset,
            threshold,
            tol,
            out,
        } => {
            let g = load(&source)?;
            let rep = verify_separation(&ElectricalSystem::new(&g).with_tolerance(tol), &subset, threshold)?;
            write_json(&out, &report(serde_json::json!({ "solver_tol": tol, "subset": subset }), &rep))?;
            Ok(if rep.passes {
                Outcome::Pass
            } else {
                Outcome::Fail(format!("min resistance {} below threshold {threshold}", rep.min_resistance))
            })
        }
        Command::Suite {
            family,
            sizes,
            tol,
            solver_tol,
            out,
        } => {
            let mut spec = sized_spec(&family, sizes)?;
            spec.solver_tol = solver_tol;
            let rep = run_identity_suite(&spec, tol)?;
            let rows: Vec<_> = rep
                .rows
                .iter()
                .map(|r| SuiteRow {
                    graph: r.name.clone(),
                    n: r.n,
                    edges: r.edges,
                    additivity: r.additivity,
                    commute: r.commute,
                    tetali: r.tetali,
                    triangle: r.triangle,
                    ordering: r.ordering,
                    tolerance: tol,
                    solver_tol,
                    passes: r.max_violation() <= tol,
                    version: VERSION,
                })
                .collect();
            write_csv(&out, &rows)?;
            Ok(if rep.passes() {
                Outcome::Pass
            } else {
                Outcome::Fail(format!("an identity is violated beyond {tol}"))
            })
        }
        Command::Scaling {
            family,
            sizes,
            trials,
            seed,
            start,
            tol,
            no_matthews,
            json,
            out,
        } => {
            let mut spec = sized_spec(&family, sizes)?;
            spec.trials = trials;
            spec.seed = seed;
            spec.start = start;
            spec.solver_tol = tol;
            spec.skip_matthews = no_matthews;
            let rep = run_grid_scaling(&spec)?;
            if json {
                write_json(&out, &rep)?;
            } else {
                write_csv(&out, &rep.rows)?;
            }
            Ok(if !rep.all_upper_ok() {
                Outcome::Fail("a cover-time estimate exceeds the planar upper bound".into())
            } else if !rep.all_matthews_ok() {
                Outcome::Fail("a cover-time estimate falls outside the Matthews bracket".into())
            } else {
                Outcome::Pass
            })
        }
        Command::Pipeline {
            family,
            sizes,
            s,
            tol,
            packing_tol,
            out,
        } => {
            let mut spec = sized_spec(&family, sizes)?;
            spec.s = s;
            spec.solver_tol = tol;
            spec.packing_tol = packing_tol;
            let rep = run_separation_pipeline(&spec)?;
            write_json(&out, &rep)?;
            Ok(if rep.all_verified() {
                Outcome::Pass
            } else {
                Outcome::Fail("separation verification failed".into())
            })
        }
    }
}
