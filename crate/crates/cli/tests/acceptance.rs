//! Acceptance criteria 1-9. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any fails. Run with `cargo test -p lipgraph-cli --test acceptance`.

use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use lipgraph::cube_l1::{build_model, certify_4_bilipschitz};
use lipgraph::expander::{augment, certify_isometric_copy, cheeger_exact, lambda2, plant, random_regular};
use lipgraph::families::{hamming, lattice, level_inclusion, RecursiveGraph, Recursion};
use lipgraph::gadget::{certify_sandwich, transform, GadgetParams};
use lipgraph::rational::{frac, int};
use lipgraph::witness::{
    build_martingale, certify_divergence, extract_delta_tree, extract_semitree, kuratowski_embed, normalize_embedding,
    WitnessSemitree, WitnessTree,
};
use lipgraph::{apsp, is_isometric, Graph, Norm, PointSet, Rational, DEFAULT_VERTEX_CAP};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Every combinatorial and rational comparison below is exact.
const EXACT: &str = "exact (tolerance 0)";
/// Agreement required between two eigen-solvers for reported lambda2.
const LAMBDA2_TOL: f64 = 1e-9;
const SANDWICH_LIMIT: Duration = Duration::from_secs(10);
const CUBE_LIMIT: Duration = Duration::from_secs(60);
const WITNESS_LIMIT: Duration = Duration::from_secs(60);
const PERTURBATION_RUNS: usize = 100;

type Outcome = Result<String, String>;

fn k(n: usize) -> Graph {
    Graph::simple(n, (0..n).flat_map(|i| ((i + 1)..n).map(move |j| (i, j)))).unwrap()
}

fn cycle(n: usize) -> Graph {
    Graph::simple(n, (0..n).map(|i| (i, (i + 1) % n))).unwrap()
}

fn sandwich_inputs() -> Vec<(&'static str, Graph)> {
    vec![
        ("K2", k(2)),
        ("C4", cycle(4)),
        ("K4", k(4)),
        ("H2", hamming(2, DEFAULT_VERTEX_CAP).unwrap()),
        ("H3", hamming(3, DEFAULT_VERTEX_CAP).unwrap()),
        ("lattice(2,2)", lattice(2, 2, DEFAULT_VERTEX_CAP).unwrap()),
    ]
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let mut count = 0;
    for (name, g) in sandwich_inputs() {
        for eps in [int(1), frac(1, 2)] {
            let params = GadgetParams::choose(g.max_degree(), eps.clone()).map_err(|e| e.to_string())?;
            let res = transform(&g, &params).map_err(|e| e.to_string())?;
            let rep = certify_sandwich(&g, &res).map_err(|e| e.to_string())?;
            if !rep.ok {
                return Err(format!("{name} eps={eps}: sandwich violated at {:?}", rep.violation));
            }
            count += 1;
        }
    }
    let t = start.elapsed();
    if t > SANDWICH_LIMIT {
        return Err(format!("{count} instances ok but took {t:.2?} (limit {SANDWICH_LIMIT:?})"));
    }
    Ok(format!("{count} instances, l*d_G <= d_M <= (l+2r)*d_G, {EXACT}, {t:.2?} (limit {SANDWICH_LIMIT:?})"))
}

fn criterion_2() -> Outcome {
    let mut inputs = sandwich_inputs();
    inputs.push(("D2", lipgraph::families::diamond(2).unwrap().unweighted()));
    inputs.push(("L2", lipgraph::families::laakso(2).unwrap().unweighted()));
    inputs.push(("lattice(2,3)", lattice(2, 3, DEFAULT_VERTEX_CAP).unwrap()));
    inputs.push(("K9", k(9)));
    let mut vertices = 0;
    for (name, g) in &inputs {
        for eps in [int(1), frac(1, 2), frac(1, 5)] {
            let params = GadgetParams::choose(g.max_degree(), eps.clone()).map_err(|e| e.to_string())?;
            let res = transform(g, &params).map_err(|e| e.to_string())?;
            let degrees = res.graph.degrees();
            vertices += degrees.len();
            if let Some((v, d)) = degrees.iter().enumerate().find(|(_, &d)| d > 3) {
                return Err(format!("{name} eps={eps}: vertex {v} has degree {d}"));
            }
        }
    }
    Ok(format!("{} outputs, {vertices} vertices audited, max degree <= 3, {EXACT}", inputs.len() * 3))
}

fn criterion_3() -> Outcome {
    let mut parts = Vec::new();
    for n in 1..=3 {
        let start = Instant::now();
        let model = build_model(n, int(1)).map_err(|e| e.to_string())?;
        let rep = certify_4_bilipschitz(&model).map_err(|e| e.to_string())?;
        let t = start.elapsed();
        if !rep.edges_unit {
            return Err(format!("n={n}: edge {:?} is not l1-unit", model.non_unit_edge()));
        }
        if !rep.ok || !rep.exhaustive {
            return Err(format!("n={n}: bilipschitz bound violated at {:?}", rep.violation));
        }
        if t > CUBE_LIMIT {
            return Err(format!("n={n}: took {t:.2?} (limit {CUBE_LIMIT:?})"));
        }
        parts.push(format!("n={n}: {} pairs in {t:.2?}", rep.pairs_checked));
    }
    Ok(format!("unit edges, |x-y|_1 <= d <= 4|x-y|_1, {EXACT}; {}", parts.join(", ")))
}

fn criterion_4() -> Outcome {
    for n in 0..=6 {
        let d = RecursiveGraph::build(Recursion::Diamond, n, DEFAULT_VERTEX_CAP).map_err(|e| e.to_string())?;
        let expected = 4usize.pow(n as u32);
        if d.graph().edge_count() != expected {
            return Err(format!("|E(D_{n})| = {} != {expected}", d.graph().edge_count()));
        }
    }
    for n in 0..=5 {
        let l = RecursiveGraph::build(Recursion::Laakso, n, DEFAULT_VERTEX_CAP).map_err(|e| e.to_string())?;
        let expected = 6usize.pow(n as u32);
        if l.graph().edge_count() != expected {
            return Err(format!("|E(L_{n})| = {} != {expected}", l.graph().edge_count()));
        }
    }
    for (kind, top) in [(Recursion::Diamond, 4), (Recursion::Laakso, 3)] {
        for n in 1..=top {
            let small = apsp(RecursiveGraph::build(kind, n - 1, DEFAULT_VERTEX_CAP).unwrap().graph()).unwrap();
            let big = apsp(RecursiveGraph::build(kind, n, DEFAULT_VERTEX_CAP).unwrap().graph()).unwrap();
            let f = level_inclusion(kind, n - 1).map_err(|e| e.to_string())?;
            if let Some(pair) = is_isometric(&f, &small, &big).map_err(|e| e.to_string())? {
                return Err(format!("{kind:?} inclusion {}->{n} moves pair {pair:?}", n - 1));
            }
        }
    }
    Ok(format!("|E(D_n)| = 4^n (n <= 6), |E(L_n)| = 6^n (n <= 5), inclusions isometric (D n <= 4, L n <= 3), {EXACT}"))
}

/// Independent brute force over subsets, in rationals.
fn cheeger_oracle(g: &Graph) -> Rational {
    let n = g.n();
    let mut best: Option<Rational> = None;
    for mask in 1u64..(1 << n) {
        let size = mask.count_ones() as i64;
        if size as usize > n / 2 {
            continue;
        }
        let inside = |v: usize| mask >> v & 1 == 1;
        let cut = g.edges().iter().filter(|&&(u, v)| inside(u) != inside(v)).count() as i64;
        let h = frac(cut, size);
        if best.as_ref().map_or(true, |b| &h < b) {
            best = Some(h);
        }
    }
    best.unwrap()
}

/// Second largest eigenvalue by cyclic Jacobi rotations.
fn lambda2_oracle(g: &Graph) -> f64 {
    let n = g.n();
    let deg = g.degrees();
    let mut a = vec![vec![0.0f64; n]; n];
    for &(u, v) in g.edges() {
        let w = 1.0 / ((deg[u] * deg[v]) as f64).sqrt();
        a[u][v] += w;
        a[v][u] += w;
    }
    for &v in g.loops() {
        a[v][v] += 1.0 / deg[v] as f64;
    }
    for _ in 0..100 {
        let off: f64 = (0..n).flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j))).map(|(i, j)| a[i][j] * a[i][j]).sum();
        if off < 1e-30 {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                if a[p][q].abs() < 1e-300 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let (akp, akq) = (a[k][p], a[k][q]);
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let (apk, aqk) = (a[p][k], a[q][k]);
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
            }
        }
    }
    let mut eig: Vec<f64> = (0..n).map(|i| a[i][i]).collect();
    eig.sort_by(|x, y| y.total_cmp(x));
    eig[1]
}

fn check_plant(k: &Graph, copy: &lipgraph::VertexMap, m: &Graph, d: usize) -> Result<(), String> {
    if let Some((v, deg)) = k.degrees().into_iter().enumerate().find(|&(_, deg)| deg != d + 3) {
        return Err(format!("vertex {v} has degree {deg}, expected {}", d + 3));
    }
    if let Some(pair) = certify_isometric_copy(k, copy, m).map_err(|e| e.to_string())? {
        return Err(format!("copy not isometric at {pair:?}"));
    }
    Ok(())
}

fn criterion_5() -> Outcome {
    let d = 3;
    let mut notes = Vec::new();
    let mut failures = Vec::new();

    // small instances: exact Cheeger comparison and lambda2 cross-check
    let path3 = Graph::simple(3, [(0, 1), (1, 2)]).unwrap();
    let star = Graph::simple(4, [(0, 1), (0, 2), (0, 3)]).unwrap();
    let (mut small, mut tried) = (0, 0);
    let mut worst_lambda = 0.0f64;
    for (name, m) in [("K2", k(2)), ("P3", path3), ("K1,3", star)] {
        for n in [6, 8, 10, 12] {
            for seed in 0..4 {
                let base = random_regular(n, d, seed).map_err(|e| e.to_string())?;
                tried += 1;
                let aug = match augment(&base, &m) {
                    Ok(a) => a,
                    Err(_) => continue,
                };
                check_plant(&aug.graph, &aug.copy_map, &m, d).map_err(|e| format!("{name} in n={n} seed={seed}: {e}"))?;
                let (hb, ha) = (cheeger_exact(&base).unwrap(), cheeger_exact(&aug.graph).unwrap());
                if hb != cheeger_oracle(&base) || ha != cheeger_oracle(&aug.graph) {
                    return Err(format!("{name} in n={n} seed={seed}: Cheeger disagrees with the oracle"));
                }
                if ha < hb {
                    return Err(format!("{name} in n={n} seed={seed}: h(K) = {ha} < h(G) = {hb}"));
                }
                for g in [&base, &aug.graph] {
                    worst_lambda = worst_lambda.max((lambda2(g).unwrap() - lambda2_oracle(g)).abs());
                }
                small += 1;
            }
        }
    }
    if worst_lambda > LAMBDA2_TOL {
        return Err(format!("lambda2 solvers disagree by {worst_lambda:e} (tolerance {LAMBDA2_TOL:e})"));
    }
    notes.push(format!("{small} of {tried} small bases had a separated set; those plants with n <= 12: h(K) >= h(G), lambda2 within {LAMBDA2_TOL:e}"));

    // gadget-transformed K2 and D2
    let d2 = lipgraph::families::diamond(2).unwrap().unweighted();
    for (name, g) in [("gadget(K2)", k(2)), ("gadget(D2)", d2)] {
        let params = GadgetParams::choose(g.max_degree(), int(1)).unwrap();
        let m = transform(&g, &params).unwrap().graph;
        let diam = apsp(&m).unwrap().diameter();
        let mut planted = 0;
        for seed in 0..3 {
            match plant(1024, d, seed, &m, 10) {
                Ok(p) => {
                    check_plant(&p.augmented.graph, &p.augmented.copy_map, &m, d).map_err(|e| format!("{name} seed={seed}: {e}"))?;
                    planted += 1;
                    if seed == 0 {
                        notes.push(format!("{name} ({} vertices, diam {diam}) planted in n={}", m.n(), p.base.n()));
                    }
                }
                Err(e) => {
                    let probe = random_regular(1 << 20, d, seed).unwrap();
                    let ecc = probe.adjacency().bfs(0).into_iter().max().unwrap();
                    failures.push(format!(
                        "{name} ({} vertices, diam {diam}) seed={seed}: {e}; a random {d}-regular graph on 2^20 vertices has eccentricity {ecc} from vertex 0, so no two vertices are {diam} apart",
                        m.n()
                    ));
                    break;
                }
            }
        }
        if planted == 3 {
            notes.push(format!("{name}: 3 seeds regular and isometric"));
        }
    }
    if failures.is_empty() {
        Ok(format!("{}, {EXACT}", notes.join("; ")))
    } else {
        Err(format!("{}; passed: {}", failures.join("; "), notes.join("; ")))
    }
}

fn kuratowski(kind: Recursion, level: usize) -> (RecursiveGraph, PointSet, lipgraph::witness::EmbeddingCertificate) {
    let g = RecursiveGraph::build(kind, level, DEFAULT_VERTEX_CAP).unwrap();
    let m = apsp(g.graph()).unwrap();
    let (f, cert) = normalize_embedding(&kuratowski_embed(&m), &m).unwrap();
    (g, f, cert)
}

fn criterion_6() -> Outcome {
    let start = Instant::now();
    for n in 1..=5 {
        let (g, f, cert) = kuratowski(Recursion::Diamond, n);
        if cert.delta != int(1) {
            return Err(format!("D_{n}: Kuratowski delta = {}", cert.delta));
        }
        let t = extract_delta_tree(&f, &g, &cert).map_err(|e| e.to_string())?;
        if t.nodes.len() != WitnessTree::node_count(n) || t.nodes.len() != (1 << (n + 1)) - 1 {
            return Err(format!("D_{n}: {} nodes", t.nodes.len()));
        }
        t.check(&int(1)).map_err(|v| format!("D_{n}: {v:?}"))?;
    }
    for n in 1..=3 {
        let (g, f, cert) = kuratowski(Recursion::Laakso, n);
        if cert.delta != int(1) {
            return Err(format!("L_{n}: Kuratowski delta = {}", cert.delta));
        }
        let st = extract_semitree(&f, &g, &cert).map_err(|e| e.to_string())?;
        if st.nodes.len() != WitnessSemitree::node_count(n) {
            return Err(format!("L_{n}: {} nodes", st.nodes.len()));
        }
        st.check(&int(2)).map_err(|v| format!("L_{n} at separation 2: {v:?}"))?;
    }
    let t = start.elapsed();
    if t > WITNESS_LIMIT {
        return Err(format!("took {t:.2?} (limit {WITNESS_LIMIT:?})"));
    }
    Ok(format!("D_1..D_5 trees at delta 1, L_1..L_3 semitrees at separation 2, {EXACT}, {t:.2?} (limit {WITNESS_LIMIT:?})"))
}

fn criterion_7() -> Outcome {
    let (g, f, cert) = kuratowski(Recursion::Laakso, 3);
    let st = extract_semitree(&f, &g, &cert).map_err(|e| e.to_string())?;
    let mg = build_martingale(&st);
    if let Some((level, cell)) = mg.averaging_violation() {
        return Err(format!("averaging fails at level {level} cell {cell}"));
    }
    let rep = certify_divergence(&mg, &cert.delta);
    let fractions: Vec<String> = rep.levels.iter().map(|l| format!("{}", l.measure_fraction)).collect();
    if !rep.ok || rep.levels.len() != 3 {
        return Err(format!("divergence fractions {fractions:?}, ok = {}", rep.ok));
    }
    Ok(format!("averaging exact on 4 levels, measure of gaps >= delta/4 per step: [{}] >= 1/2, {EXACT}", fractions.join(", ")))
}

fn criterion_8() -> Outcome {
    let g = RecursiveGraph::build(Recursion::Diamond, 3, DEFAULT_VERTEX_CAP).unwrap();
    let m = apsp(g.graph()).unwrap();
    let base = kuratowski_embed(&m);
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut deltas = Vec::new();
    for run in 0..PERTURBATION_RUNS {
        let norm = if run % 2 == 0 { Norm::Linf } else { Norm::L1 };
        // perturbations stay below half the smallest distance 1/8
        let denom = 64 * rng.random_range(1..=16i64);
        let points = base
            .iter()
            .map(|(id, x)| (id, x.iter().map(|c| c + frac(rng.random_range(-3..=3), denom)).collect()))
            .collect();
        let f = PointSet::new(base.dim(), norm, points).unwrap();
        let (f, cert) = normalize_embedding(&f, &m).map_err(|e| format!("run {run}: {e}"))?;
        let t = extract_delta_tree(&f, &g, &cert).map_err(|e| format!("run {run}: {e}"))?;
        t.check(&cert.delta).map_err(|v| format!("run {run} (delta {}): {v:?}", cert.delta))?;
        deltas.push(lipgraph::rational::to_f64(&cert.delta));
    }
    let lo = deltas.iter().copied().fold(f64::INFINITY, f64::min);
    Ok(format!("{PERTURBATION_RUNS} perturbed D_3 embeddings (l_inf and l1) pass at their own delta (min {lo:.4}), {EXACT}"))
}

fn cli(dir: &Path, args: &[&str]) -> Result<(), String> {
    let out = Command::new(env!("CARGO_BIN_EXE_lipgraph")).current_dir(dir).args(args).output().map_err(|e| e.to_string())?;
    if out.status.success() {
        Ok(())
    } else {
        Err(format!("`lipgraph {}` exited {:?}: {}", args.join(" "), out.status.code(), String::from_utf8_lossy(&out.stderr)))
    }
}

fn pipeline(dir: &Path) -> Result<(), String> {
    let steps: &[&[&str]] = &[
        &["generate", "--family", "diamond", "--level", "3", "--out", "d3.json", "--inclusion", "inc.json", "--manifest", "m1.json"],
        &["generate", "--family", "laakso", "--level", "2", "--out", "l2.json"],
        &["generate", "--family", "hamming", "--level", "3", "--out", "h3.json"],
        &["transform", "--in", "h3.json", "--epsilon", "1/2", "--out", "s3.json", "--map", "f.json", "--certify", "--report", "sandwich.json", "--manifest", "m2.json"],
        &["cube-l1", "--n", "2", "--certify", "--out", "cube.json", "--report", "cube_report.json"],
        &["transform", "--in", "l2.json", "--unweighted", "--out", "target.json"],
        &["expander", "random", "--n", "64", "--seed", "5", "--out", "base.json"],
        &["generate", "--family", "tree3", "--level", "1", "--out", "t.json"],
        &["expander", "plant", "--base-n", "64", "--d", "3", "--seed", "7", "--target", "t.json", "--out", "k.json", "--map", "copy.json", "--report", "plant.json", "--manifest", "m3.json"],
        &["embed", "--in", "l2.json", "--out", "emb.json"],
        &["extract", "--family", "laakso", "--level", "2", "--embedding", "emb.json", "--normalize", "--certify", "--out", "st.json"],
        &["martingale", "--semitree", "st.json", "--certify", "--levels", "levels.json", "--out", "div.json"],
        &["report", "--in", "h3.json", "--out", "bundle.json"],
    ];
    for s in steps {
        cli(dir, s)?;
    }
    Ok(())
}

fn criterion_9() -> Outcome {
    let a = tempfile::tempdir().map_err(|e| e.to_string())?;
    let b = tempfile::tempdir().map_err(|e| e.to_string())?;
    pipeline(a.path())?;
    pipeline(b.path())?;
    let mut names: Vec<_> = std::fs::read_dir(a.path()).unwrap().map(|e| e.unwrap().file_name()).collect();
    names.sort();
    for name in &names {
        let x = std::fs::read(a.path().join(name)).unwrap();
        let y = std::fs::read(b.path().join(name)).map_err(|_| format!("{name:?} missing in the second run"))?;
        if x != y {
            return Err(format!("{name:?} differs between runs"));
        }
    }
    Ok(format!("{} artifacts byte-identical across two runs with fixed seeds", names.len()))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("gadget sandwich", criterion_1),
        ("degree bound", criterion_2),
        ("cube l1 model", criterion_3),
        ("family counts and isometries", criterion_4),
        ("expander corollary", criterion_5),
        ("witness extraction", criterion_6),
        ("martingale divergence", criterion_7),
        ("robustness under perturbation", criterion_8),
        ("determinism", criterion_9),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("acceptance {} PASS {name}: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("acceptance {} FAIL {name}: {detail}", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
