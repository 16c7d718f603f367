//! Acceptance criteria, run in order with one PASS/FAIL line each. The
//! process exits non-zero when any criterion fails.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::Command;
use std::time::{Duration, Instant};

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use planar_cover::electrical::{log_map_lower_bound, ElectricalSystem, SolveMethod};
use planar_cover::experiments::{
    identity_row, run_grid_scaling, run_separation_pipeline, scaling_row, ExperimentSpec, ScalingRow,
};
use planar_cover::graph::enumerate::{connected_graphs, labelled_connected_graphs, random_connected};
use planar_cover::packing::{compute_packing, default_outer_face};
use planar_cover::walks::{exact_cover_time, hitting_times_exact, simulate_cover_time};
use planar_cover::{generate, triangulate, Family, Graph};

type Outcome = Result<String, String>;
type Criterion = (&'static str, Box<dyn Fn(&mut Option<Runs>) -> Outcome>);

fn check(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn spec(family: Family, sizes: Vec<usize>, trials: usize) -> ExperimentSpec {
    let mut spec = ExperimentSpec::new(family, sizes);
    spec.trials = trials;
    spec
}

/// Monte Carlo rows shared by several criteria.
struct Runs {
    cycles: Vec<ScalingRow>,
    grids: Vec<ScalingRow>,
    grid16_time: Duration,
    paths: Vec<ScalingRow>,
    others: Vec<ScalingRow>,
}

impl Runs {
    fn compute() -> Runs {
        let cycles = run_grid_scaling(&spec(Family::Cycle(3), (3..=64).collect(), 10_000))
            .expect("cycle runs")
            .rows;
        let mut grids = run_grid_scaling(&spec(Family::Grid(2), vec![2, 4, 8], 10_000))
            .expect("grid runs")
            .rows;
        let started = Instant::now();
        let g16 = generate(Family::Grid(16)).unwrap();
        grids.push(scaling_row(&g16, &Family::Grid(16), &spec(Family::Grid(16), vec![16], 10_000)).unwrap());
        let grid16_time = started.elapsed();
        let paths = run_grid_scaling(&spec(Family::Path(16), vec![16, 64, 256], 10_000))
            .expect("path runs")
            .rows;
        let mut others = Vec::new();
        for family in [Family::Tetrahedron, Family::Octahedron, Family::Bipyramid, Family::BinaryTree(4)] {
            let g = generate(family).unwrap();
            others.push(scaling_row(&g, &family, &spec(family, vec![], 10_000)).unwrap());
        }
        for m in [2, 4] {
            let t = triangulate(&generate(Family::Grid(m)).unwrap()).unwrap();
            let mut row = scaling_row(t.graph(), &Family::Grid(m), &spec(Family::Grid(m), vec![m], 10_000)).unwrap();
            row.family = "triangulated_grid".into();
            others.push(row);
        }
        Runs {
            cycles,
            grids,
            grid16_time,
            paths,
            others,
        }
    }

    fn all(&self) -> impl Iterator<Item = &ScalingRow> {
        self.cycles
            .iter()
            .chain(&self.grids)
            .chain(&self.paths)
            .chain(&self.others)
    }
}

fn within_3se(mean: f64, se: f64, exact: f64) -> bool {
    (mean - exact).abs() <= 3.0 * se
}

fn c1_identity_suite() -> Outcome {
    let started = Instant::now();
    let mut corpus: Vec<(String, Graph)> = Vec::new();
    for n in 2..=6 {
        for (i, g) in connected_graphs(n).into_iter().enumerate() {
            corpus.push((format!("class{n}.{i}"), g));
        }
    }
    let exhaustive = corpus.len();
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for i in 0..200 {
        let n = 7 + i % 2;
        let p = rng.random_range(0.05..0.6);
        corpus.push((format!("random{n}.{i}"), random_connected(n, p, &mut rng)));
    }
    let families = (2..=4)
        .map(Family::Grid)
        .chain((3..=12).map(Family::Cycle))
        .chain((2..=20).map(Family::Path));
    for f in families {
        corpus.push((f.to_string(), generate(f).unwrap().graph().clone()));
    }
    let mut worst = (0.0f64, String::new());
    for (name, g) in &corpus {
        let row = identity_row(name, g, 1e-12).map_err(|e| format!("{name}: {e}"))?;
        if row.max_violation() > worst.0 {
            worst = (row.max_violation(), name.clone());
        }
    }
    let elapsed = started.elapsed();
    check(worst.0 <= 1e-7, || format!("violation {:.3e} on {}", worst.0, worst.1))?;
    check(elapsed < Duration::from_secs(120), || format!("took {elapsed:?}"))?;
    Ok(format!(
        "{} graphs ({exhaustive} isomorphism classes n<=6, 200 random n in 7..8, families); worst violation {:.2e} on {}; {:.1?}",
        corpus.len(),
        worst.0,
        worst.1,
        elapsed
    ))
}

fn laplacian_pinv(g: &Graph) -> DMatrix<f64> {
    let n = g.n();
    let mut l = DMatrix::zeros(n, n);
    for &(u, v) in g.edges() {
        l[(u, u)] += 1.0;
        l[(v, v)] += 1.0;
        l[(u, v)] -= 1.0;
        l[(v, u)] -= 1.0;
    }
    let j = DMatrix::from_element(n, n, 1.0 / n as f64);
    (l + &j).try_inverse().unwrap() - j
}

fn hitting_oracle(g: &Graph, target: usize) -> Vec<f64> {
    let n = g.n();
    let mut a = DMatrix::<f64>::identity(n, n);
    let mut b = DVector::from_element(n, 1.0);
    b[target] = 0.0;
    for u in (0..n).filter(|&u| u != target) {
        for &w in g.neighbors(u) {
            a[(u, w)] -= 1.0 / g.degree(u) as f64;
        }
    }
    a.lu().solve(&b).unwrap().iter().copied().collect()
}

fn c2_oracle_equivalence() -> Outcome {
    let mut worst = 0.0f64;
    let mut graphs = 0;
    for n in 2..=5 {
        for g in labelled_connected_graphs(n) {
            let lp = laplacian_pinv(&g);
            for method in [SolveMethod::Dense, SolveMethod::ConjugateGradient] {
                let sys = ElectricalSystem::new(&g).with_method(method);
                let r = sys.resistance_matrix().map_err(|e| e.to_string())?;
                for u in 0..n {
                    for v in 0..n {
                        let oracle = lp[(u, u)] + lp[(v, v)] - 2.0 * lp[(u, v)];
                        worst = worst.max((r.at(u, v) - oracle).abs());
                    }
                }
                for target in 0..n {
                    let h = hitting_times_exact(&sys, target).map_err(|e| e.to_string())?;
                    let oracle = hitting_oracle(&g, target);
                    for u in 0..n {
                        worst = worst.max((h[u] - oracle[u]).abs());
                    }
                }
            }
            graphs += 1;
        }
    }
    check(worst <= 1e-9, || format!("dense oracle mismatch {worst:.3e}"))?;

    let mut instances: Vec<(String, Graph)> = Vec::new();
    for f in (3..=9)
        .map(Family::Cycle)
        .chain((2..=9).map(Family::Path))
        .chain([Family::Tetrahedron, Family::Octahedron, Family::Bipyramid, Family::BinaryTree(2), Family::Grid(1)])
    {
        instances.push((f.to_string(), generate(f).unwrap().graph().clone()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    for i in 0..5 {
        let n = 5 + i;
        instances.push((format!("random{n}"), random_connected(n, 0.3, &mut rng)));
    }
    let mut worst_z = 0.0f64;
    for (name, g) in &instances {
        let exact = exact_cover_time(g, 0).map_err(|e| e.to_string())?;
        let est = simulate_cover_time(g, 0, 100_000, 1).map_err(|e| e.to_string())?;
        let z = if est.std_error > 0.0 {
            (est.mean - exact).abs() / est.std_error
        } else {
            (est.mean - exact).abs() * f64::INFINITY
        };
        check(within_3se(est.mean, est.std_error, exact), || {
            format!("{name}: MC {} vs exact {exact} (se {})", est.mean, est.std_error)
        })?;
        worst_z = worst_z.max(if z.is_nan() { 0.0 } else { z });
    }
    Ok(format!(
        "{graphs} labelled graphs n<=5 within {worst:.1e} (dense and CG); {} DP/MC pairs at 1e5 trials, worst |z| = {worst_z:.2}",
        instances.len()
    ))
}

fn c3_closed_forms(runs: &Runs) -> Outcome {
    let mut worst_h = 0.0f64;
    for len in 1..=20usize {
        let g = generate(Family::Path(len + 1)).unwrap();
        let h = hitting_times_exact(&ElectricalSystem::new(&g), len).map_err(|e| e.to_string())?;
        worst_h = worst_h.max((h[0] - (len * len) as f64).abs());
    }
    check(worst_h <= 1e-7, || format!("path hitting error {worst_h:.3e}"))?;
    let mut worst_dp = 0.0f64;
    for n in 3..=9 {
        let g = generate(Family::Cycle(n)).unwrap();
        let exact = exact_cover_time(&g, 0).map_err(|e| e.to_string())?;
        worst_dp = worst_dp.max((exact - (n * (n - 1)) as f64 / 2.0).abs());
    }
    check(worst_dp <= 1e-7, || format!("cycle DP error {worst_dp:.3e}"))?;
    let mut worst_z = 0.0f64;
    for row in &runs.cycles {
        let exact = (row.n * (row.n - 1)) as f64 / 2.0;
        check(within_3se(row.mean, row.std_error, exact), || {
            format!("cycle({}): MC {} vs {exact} (se {})", row.n, row.mean, row.std_error)
        })?;
        worst_z = worst_z.max((row.mean - exact).abs() / row.std_error);
    }
    let k4 = generate(Family::Tetrahedron).unwrap();
    let r = ElectricalSystem::new(&k4).effective_resistance(0, 1).map_err(|e| e.to_string())?;
    check((r - 0.5).abs() <= 1e-12, || format!("K4 resistance {r}"))?;
    Ok(format!(
        "path H error {worst_h:.1e}; cycle DP error {worst_dp:.1e}; cycles 3..64 MC worst |z| = {worst_z:.2}; K4 R = {r}"
    ))
}

fn c4_packing() -> Outcome {
    // Descartes: three unit circles and an inner one with curvature 3 + 2 sqrt(3)
    let descartes = 1.0 / (3.0 + 2.0 * (3.0f64).sqrt());
    let t = triangulate(&generate(Family::Tetrahedron).unwrap()).unwrap();
    let outer = default_outer_face(&t);
    let p = compute_packing(&t, outer, 1e-10).map_err(|e| e.to_string())?;
    let inner = (0..4).find(|v| !outer.contains(v)).unwrap();
    let err = (p.radius(inner) - descartes).abs();
    check(err <= 1e-6, || format!("K4 inner radius {} vs {descartes}", p.radius(inner)))?;
    let mut worst = 0.0f64;
    for m in 2..=8 {
        let t = triangulate(&generate(Family::Grid(m)).unwrap()).unwrap();
        let p = compute_packing(&t, default_outer_face(&t), 1e-10).map_err(|e| format!("grid({m}): {e}"))?;
        let residual = t
            .graph()
            .edges()
            .iter()
            .map(|&(u, v)| {
                let (a, b) = (p.center(u), p.center(v));
                ((a[0] - b[0]).hypot(a[1] - b[1]) - p.radius(u) - p.radius(v)).abs()
            })
            .fold(0.0, f64::max);
        check(residual < 1e-8, || format!("grid({m}) tangency residual {residual:.3e}"))?;
        check(p.max_overlap(&t) < 1e-8, || format!("grid({m}) disks overlap"))?;
        worst = worst.max(residual);
    }
    let t = triangulate(&generate(Family::Grid(4)).unwrap()).unwrap();
    let a = compute_packing(&t, default_outer_face(&t), 1e-10).unwrap();
    let b = compute_packing(&t, default_outer_face(&t), 1e-10).unwrap();
    check(a == b, || "repeated packings differ".into())?;
    Ok(format!(
        "K4 inner radius error {err:.1e}; worst tangency residual on grid(2..8) {worst:.2e}; repeat run bit-identical"
    ))
}

fn c5_variational() -> Outcome {
    let t = triangulate(&generate(Family::Grid(8)).unwrap()).unwrap();
    let g = t.graph();
    let p = compute_packing(&t, default_outer_face(&t), 1e-10).map_err(|e| e.to_string())?;
    let sys = ElectricalSystem::new(g);
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let (mut worst, mut informative) = (f64::NEG_INFINITY, 0);
    for _ in 0..100 {
        let u = rng.random_range(0..g.n());
        let w = loop {
            let w = rng.random_range(0..g.n());
            if w != u {
                break w;
            }
        };
        let bound = log_map_lower_bound(&p, g, u, w).map_err(|e| e.to_string())?;
        let r = sys.effective_resistance(u, w).map_err(|e| e.to_string())?;
        check(bound.value <= r + 1e-7, || format!("bound {} exceeds R({u},{w}) = {r}", bound.value))?;
        worst = worst.max(bound.value - r);
        if bound.value > 0.0 {
            informative += 1;
        }
    }
    Ok(format!("100 pairs, {informative} with a positive bound; max(bound - R) = {worst:.3e}"))
}

fn c6_upper_bound(runs: &Runs) -> Outcome {
    let mut count = 0;
    let mut worst = 0.0f64;
    for row in runs.all() {
        let n = row.n as f64;
        check(row.mean < 6.0 * n * n, || format!("{}({:?}): mean {} >= 6n^2", row.family, row.size, row.mean))?;
        check(row.mean < row.degree_bound + 3.0 * row.std_error, || {
            format!("{}({:?}): mean {} above d n(n-1) = {}", row.family, row.size, row.mean, row.degree_bound)
        })?;
        worst = worst.max(row.mean / row.degree_bound);
        count += 1;
    }
    check(runs.grid16_time < Duration::from_secs(600), || format!("grid(16) took {:?}", runs.grid16_time))?;
    Ok(format!(
        "{count} instances; max mean / (d n(n-1)) = {worst:.3}; grid(16) at 1e4 trials in {:.1?}",
        runs.grid16_time
    ))
}

fn spread(ratios: &[f64]) -> f64 {
    let lo = ratios.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = ratios.iter().copied().fold(0.0, f64::max);
    hi / lo
}

fn c7_scaling(runs: &Runs) -> Outcome {
    let grid: Vec<f64> = runs.grids.iter().map(|r| r.ratio_n_log_n_sq).collect();
    let path: Vec<f64> = runs.paths.iter().map(|r| r.ratio_n_sq).collect();
    let (sg, sp) = (spread(&grid), spread(&path));
    check(sg <= 3.0, || format!("grid ratios {grid:?} spread {sg}"))?;
    check(sp <= 2.0, || format!("path ratios {path:?} spread {sp}"))?;
    Ok(format!(
        "grid m=2,4,8,16 E C/(n log^2 n) = {:.3?} (spread {sg:.2}); path n=16,64,256 E C/n^2 = {:.3?} (spread {sp:.2})",
        grid, path
    ))
}

fn c8_pipeline() -> Outcome {
    let rep = run_separation_pipeline(&spec(Family::Grid(2), vec![2, 4, 8], 1)).map_err(|e| e.to_string())?;
    let mut parts = Vec::new();
    for row in &rep.rows {
        let label = format!("grid({})", row.size.unwrap());
        check(row.verified, || format!("{label}: verification failed"))?;
        let floor = (row.w_size as f64).powf(1.0 - 5.0 * rep.s) / 2.0;
        check(row.selected_size as f64 >= floor, || {
            format!("{label}: |V'| = {} < {floor}", row.selected_size)
        })?;
        let r = row.empirical_r.ok_or_else(|| format!("{label}: no empirical r"))?;
        check(r >= 0.01, || format!("{label}: empirical r = {r}"))?;
        // recheck with the other solver on the triangulation
        let t = triangulate(&generate(Family::Grid(row.size.unwrap())).unwrap()).unwrap();
        let sys = ElectricalSystem::new(t.graph()).with_method(SolveMethod::ConjugateGradient);
        let matrix = sys.resistances_among(&row.selected).map_err(|e| e.to_string())?;
        let floor_r = r * (row.w_size as f64).ln();
        for i in 0..row.selected.len() {
            for j in i + 1..row.selected.len() {
                check(matrix.at(i, j) >= floor_r * (1.0 - 1e-7), || {
                    format!("{label}: R = {} below {floor_r}", matrix.at(i, j))
                })?;
            }
        }
        parts.push(format!(
            "{label}: |W|={} |V'|={} (floor {floor:.2}) r={r:.4} c={:.3}",
            row.w_size,
            row.selected_size,
            row.empirical_c.unwrap_or(f64::NAN)
        ));
    }
    Ok(parts.join("; "))
}

fn c9_matthews(runs: &Runs) -> Outcome {
    let mut count = 0;
    for row in runs.all() {
        let (lo, hi) = (row.matthews_lower.unwrap(), row.matthews_upper.unwrap());
        let slack = 3.0 * row.std_error;
        check(row.mean >= lo - slack && row.mean <= hi + slack, || {
            format!("{}({:?}): mean {} outside [{lo}, {hi}]", row.family, row.size, row.mean)
        })?;
        count += 1;
    }
    Ok(format!("{count} instances inside the bracket"))
}

fn c10_reproducible() -> Outcome {
    let bin = env!("CARGO_BIN_EXE_planar-cover");
    let runs: Vec<Vec<String>> = vec![
        ["scaling", "--family", "grid", "--sizes", "1,2,3", "--trials", "3000", "--seed", "42"]
            .map(String::from)
            .to_vec(),
        ["pipeline", "--family", "grid", "--sizes", "2,3"].map(String::from).to_vec(),
    ];
    for args in &runs {
        let once = Command::new(bin).args(args).output().map_err(|e| e.to_string())?;
        let twice = Command::new(bin).args(args).output().map_err(|e| e.to_string())?;
        check(once.status.success() && twice.status.success(), || format!("{args:?} failed"))?;
        check(!once.stdout.is_empty() && once.stdout == twice.stdout, || format!("{args:?} output differs"))?;
    }
    Ok("scaling and pipeline outputs byte-identical across runs".into())
}

fn main() {
    let started = Instant::now();
    let mut runs = None;
    let mut failures = 0;
    let criteria: Vec<Criterion> = vec![
        ("identity suite", Box::new(|_| c1_identity_suite())),
        ("oracle equivalence", Box::new(|_| c2_oracle_equivalence())),
        ("closed forms", Box::new(|r| c3_closed_forms(r.get_or_insert_with(Runs::compute)))),
        ("packing correctness", Box::new(|_| c4_packing())),
        ("variational soundness", Box::new(|_| c5_variational())),
        ("planar upper bound", Box::new(|r| c6_upper_bound(r.get_or_insert_with(Runs::compute)))),
        ("lower-bound scaling", Box::new(|r| c7_scaling(r.get_or_insert_with(Runs::compute)))),
        ("separated-set pipeline", Box::new(|_| c8_pipeline())),
        ("Matthews sandwich", Box::new(|r| c9_matthews(r.get_or_insert_with(Runs::compute)))),
        ("reproducibility", Box::new(|_| c10_reproducible())),
    ];
    for (i, (name, run)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(|| run(&mut runs)))
            .unwrap_or_else(|panic| Err(format!("panicked: {:?}", panic.downcast_ref::<String>())));
        match outcome {
            Ok(detail) => println!("criterion {:>2} PASS {name} [{:.1?}]: {detail}", i + 1, t.elapsed()),
            Err(detail) => {
                failures += 1;
                println!("criterion {:>2} FAIL {name} [{:.1?}]: {detail}", i + 1, t.elapsed());
            }
        }
    }
    println!(
        "acceptance: {} passed, {failures} failed in {:.1?}",
        criteria.len() - failures,
        started.elapsed()
    );
    if failures > 0 {
        std::process::exit(1);
    }
}
