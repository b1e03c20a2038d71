use anyhow::{bail, Context, Result};
use lipgraph::cube_l1::{build_model, certify_4_bilipschitz, certify_4_bilipschitz_sampled, certify_cube_embedding};
use lipgraph::expander::{certify_isometric_copy, expansion_report, plant, random_regular};
use lipgraph::families::{level_inclusion, FamilySpec, RecursiveGraph, Recursion};
use lipgraph::gadget::{certify_sandwich, transform, GadgetParams};
use lipgraph::io::{self, CubeModelDocument, WitnessDocument};
use lipgraph::points::Norm;
use lipgraph::rational::{parse_rational, Rational};
use lipgraph::witness::{
    build_martingale, certify_divergence, extract_delta_tree, extract_semitree, kuratowski_embed, normalize_embedding,
    EmbeddingCertificate, Witness,
};
use lipgraph::{apsp, distortion, embedding_distortion, Graph, DEFAULT_VERTEX_CAP};
use serde::Serialize;
use serde_json::json;

use crate::run::Run;
use crate::*;

pub fn dispatch(cli: Cli, argv: Vec<String>) -> Result<bool> {
    let mut run = Run::new(argv);
    match cli.command {
        Command::Generate(a) => generate(&mut run, a)?,
        Command::Transform(a) => transform_cmd(&mut run, a)?,
        Command::CubeL1(a) => cube(&mut run, a)?,
        Command::Expander { command: ExpanderCommand::Random(a) } => random(&mut run, a)?,
        Command::Expander { command: ExpanderCommand::Plant(a) } => plant_cmd(&mut run, a)?,
        Command::Expander { command: ExpanderCommand::Spectrum(a) } => spectrum(&mut run, a)?,
        Command::Embed(a) => embed(&mut run, a)?,
        Command::Extract(a) => extract(&mut run, a)?,
        Command::Martingale(a) => martingale(&mut run, a)?,
        Command::Verify { command: VerifyCommand::Witness(a) } => verify_witness(&mut run, a)?,
        Command::Verify { command: VerifyCommand::Distortion(a) } => verify_distortion(&mut run, a)?,
        Command::Verify { command: VerifyCommand::Embedding(a) } => verify_embedding(&mut run, a)?,
        Command::Verify { command: VerifyCommand::CubeL1(a) } => verify_cube(&mut run, a)?,
        Command::Report(a) => report(&mut run, a)?,
    }
    run.finish(cli.manifest.as_deref())
}

fn rational_arg(name: &str, text: &str) -> Result<Rational> {
    parse_rational(text).with_context(|| format!("--{name}: expected \"p\" or \"p/q\", got {text:?}"))
}

fn sink(flag: &Option<Option<String>>) -> Option<&str> {
    flag.as_ref().map(|p| p.as_deref().unwrap_or("-"))
}

fn recursion(f: Recursive) -> Recursion {
    match f {
        Recursive::Diamond => Recursion::Diamond,
        Recursive::Laakso => Recursion::Laakso,
    }
}

fn norm(n: NormArg) -> Norm {
    match n {
        NormArg::L1 => Norm::L1,
        NormArg::L2 => Norm::L2,
        NormArg::Linf => Norm::Linf,
    }
}

fn generate(run: &mut Run, a: GenerateArgs) -> Result<()> {
    run.param("family", format!("{:?}", a.family).to_lowercase());
    run.param("level", a.level);
    let spec = match a.family {
        Family::Diamond => FamilySpec::Diamond { level: a.level },
        Family::Laakso => FamilySpec::Laakso { level: a.level },
        Family::Hamming => FamilySpec::Hamming { dim: a.level },
        Family::Lattice => {
            run.param("side", a.side);
            FamilySpec::Lattice { side: a.side, dim: a.level }
        }
        Family::Tree3 => FamilySpec::Tree3 { depth: a.level },
        Family::BinaryTree => FamilySpec::BinaryTree { depth: a.level },
    };
    let g = spec.generate(DEFAULT_VERTEX_CAP)?;
    run.write(&a.out, &io::write_graph(&g)?)?;
    if let Some(path) = a.inclusion {
        let kind = match a.family {
            Family::Diamond => Recursion::Diamond,
            Family::Laakso => Recursion::Laakso,
            _ => bail!("--inclusion applies to diamond and laakso only"),
        };
        if a.level == 0 {
            bail!("--inclusion needs --level >= 1");
        }
        run.write(&path, &io::write_map(&level_inclusion(kind, a.level - 1)?)?)?;
    }
    Ok(())
}

fn transform_cmd(run: &mut Run, a: TransformArgs) -> Result<()> {
    let eps = rational_arg("epsilon", &a.epsilon)?;
    run.param("epsilon", &a.epsilon);
    let mut g = run.graph(&a.input)?;
    if a.unweighted {
        g = g.unweighted();
    }
    let params = GadgetParams::choose(g.max_degree().max(1), eps)?;
    run.param("r", params.r);
    run.param("l", params.l);
    let res = transform(&g, &params).with_context(|| format!("{}: cannot transform", a.input))?;
    run.write(&a.out, &io::write_graph(&res.graph)?)?;
    if let Some(path) = &a.map {
        run.write(path, &io::write_map(&res.map)?)?;
    }
    if a.certify || a.report.is_some() {
        let rep = certify_sandwich(&g, &res)?;
        if a.certify {
            run.verdict("sandwich", rep.ok);
            run.verdict("max_degree_3", res.graph.max_degree() <= 3);
        }
        if let Some(path) = sink(&a.report) {
            run.write_json(path, &rep)?;
        }
    }
    Ok(())
}

fn cube(run: &mut Run, a: CubeArgs) -> Result<()> {
    let eps = rational_arg("epsilon", &a.epsilon)?;
    run.param("n", a.n);
    run.param("epsilon", &a.epsilon);
    let model = build_model(a.n, eps)?;
    run.write(&a.out, &io::write_cube_model(&CubeModelDocument::from_model(&model))?)?;
    if a.certify || a.report.is_some() {
        let bilip = match a.sample {
            Some(k) => {
                run.manifest.seed = Some(a.seed);
                run.param("sample", k);
                certify_4_bilipschitz_sampled(&model, k, a.seed)?
            }
            None => certify_4_bilipschitz(&model)?,
        };
        let cube = certify_cube_embedding(&model)?;
        if a.certify {
            run.verdict("unit_edges", bilip.edges_unit);
            run.verdict("bilipschitz_4", bilip.ok);
        }
        if let Some(path) = sink(&a.report) {
            run.write_json(path, &json!({ "bilipschitz": bilip, "cube_embedding": cube }))?;
        }
    }
    Ok(())
}

fn random(run: &mut Run, a: RandomArgs) -> Result<()> {
    run.manifest.seed = Some(a.seed);
    run.param("n", a.n);
    run.param("d", a.d);
    let g = random_regular(a.n, a.d, a.seed)?;
    run.write(&a.out, &io::write_graph(&g)?)
}

#[derive(Serialize)]
struct PlantReport {
    base_n: usize,
    attempts: usize,
    base_degree: usize,
    separation: u32,
    overlay_edges: usize,
    overlay_already_present: usize,
    max_degree_before_loops: usize,
    regular: bool,
    isometric_copy: bool,
    violation: Option<(usize, usize)>,
    base: Option<lipgraph::expander::SpectralReport>,
    augmented: Option<lipgraph::expander::SpectralReport>,
}

fn plant_cmd(run: &mut Run, a: PlantArgs) -> Result<()> {
    run.manifest.seed = Some(a.seed);
    run.param("base_n", a.base_n);
    run.param("d", a.d);
    run.param("max_doublings", a.max_doublings);
    let m = run.graph(&a.target)?;
    let planted = plant(a.base_n, a.d, a.seed, &m, a.max_doublings)?;
    let k = &planted.augmented.graph;
    let degrees = k.degrees();
    let regular = degrees.iter().all(|&d| d == a.d + 3);
    let violation = certify_isometric_copy(k, &planted.augmented.copy_map, &m)?;
    run.verdict("regular", regular);
    run.verdict("isometric_copy", violation.is_none());
    run.write(&a.out, &io::write_graph(k)?)?;
    if let Some(path) = &a.map {
        run.write(path, &io::write_map(&planted.augmented.copy_map)?)?;
    }
    if let Some(path) = sink(&a.report) {
        let aug = &planted.augmented;
        let rep = PlantReport {
            base_n: planted.base.n(),
            attempts: planted.attempts,
            base_degree: aug.base_degree,
            separation: aug.separation,
            overlay_edges: aug.overlay_edges,
            overlay_already_present: aug.overlay_already_present,
            max_degree_before_loops: aug.max_degree_before_loops,
            regular,
            isometric_copy: violation.is_none(),
            violation,
            base: expansion_report(&planted.base).ok(),
            augmented: expansion_report(k).ok(),
        };
        run.write_json(path, &rep)?;
    }
    Ok(())
}

fn spectrum(run: &mut Run, a: SpectrumArgs) -> Result<()> {
    let g = run.graph(&a.input)?;
    let rep = expansion_report(&g)?;
    run.write_json(&a.out, &rep)
}

fn embed(run: &mut Run, a: EmbedArgs) -> Result<()> {
    let g = run.graph(&a.input)?;
    let m = apsp(&g)?;
    run.write(&a.out, &io::write_points(&kuratowski_embed(&m))?)
}

fn extract(run: &mut Run, a: ExtractArgs) -> Result<()> {
    run.param("family", format!("{:?}", a.family).to_lowercase());
    run.param("level", a.level);
    let family = RecursiveGraph::build(recursion(a.family), a.level, DEFAULT_VERTEX_CAP)?;
    let mut f = run.points(&a.embedding)?;
    if let Some(n) = a.norm {
        f = f.with_norm(norm(n));
    }
    run.param("norm", f.norm());
    let m = apsp(family.graph())?;
    let (f, cert) = if a.normalize {
        normalize_embedding(&f, &m)?
    } else {
        let cert = EmbeddingCertificate::measure(&f, &m)?;
        if !cert.is_normalized() {
            bail!(
                "{}: upper Lipschitz constant is {}, expected at most 1; pass --normalize to rescale",
                a.embedding,
                lipgraph::rational::format_rational(&cert.lip)
            );
        }
        (f, cert)
    };
    let witness = match a.family {
        Recursive::Diamond => Witness::Tree(extract_delta_tree(&f, &family, &cert)?),
        Recursive::Laakso => Witness::Semitree(extract_semitree(&f, &family, &cert)?),
    };
    if a.certify {
        run.verdict("witness", witness.check(&cert.delta).is_ok());
    }
    run.write(&a.out, &io::write_witness(&WitnessDocument { witness, certificate: cert })?)
}

fn martingale(run: &mut Run, a: MartingaleArgs) -> Result<()> {
    let doc = run.witness(&a.semitree)?;
    let Witness::Semitree(st) = &doc.witness else {
        bail!("{}: expected a semitree witness", a.semitree);
    };
    let mg = build_martingale(st);
    let rep = certify_divergence(&mg, &doc.certificate.delta);
    if a.certify {
        run.verdict("divergence", rep.ok);
    }
    if let Some(path) = &a.levels {
        let levels: Vec<Vec<Vec<String>>> = mg
            .levels
            .iter()
            .map(|l| l.iter().map(|x| x.iter().map(lipgraph::rational::format_rational).collect()).collect())
            .collect();
        run.write_json(path, &json!({ "norm": mg.norm, "levels": levels }))?;
    }
    run.write_json(&a.out, &rep)
}

fn verify_witness(run: &mut Run, a: VerifyWitnessArgs) -> Result<()> {
    let doc = run.witness(&a.input)?;
    let delta = match &a.delta {
        Some(d) => rational_arg("delta", d)?,
        None => doc.certificate.delta.clone(),
    };
    let outcome = doc.witness.check(&delta);
    run.verdict("witness", outcome.is_ok());
    run.write_json(
        &a.out,
        &json!({
            "ok": outcome.is_ok(),
            "delta": lipgraph::rational::format_rational(&delta),
            "violation": outcome.err(),
        }),
    )
}

fn bound_ok(distortion: &Rational, squared: bool, max: &Option<String>) -> Result<Option<bool>> {
    let Some(max) = max else { return Ok(None) };
    let max = rational_arg("max", max)?;
    let max = if squared { &max * &max } else { max };
    Ok(Some(distortion <= &max))
}

fn verify_distortion(run: &mut Run, a: VerifyDistortionArgs) -> Result<()> {
    let f = run.map(&a.map)?;
    let source = apsp(&run.graph(&a.source)?)?;
    let target = apsp(&run.graph(&a.target)?)?;
    let rep = distortion(&f, &source, &target)?;
    if let Some(ok) = bound_ok(&rep.distortion, rep.squared, &a.max)? {
        run.verdict("distortion_bound", ok);
    }
    run.write_json(&a.out, &rep)
}

fn verify_embedding(run: &mut Run, a: VerifyEmbeddingArgs) -> Result<()> {
    let points = run.points(&a.points)?;
    let m = apsp(&run.graph(&a.graph)?)?;
    let rep = embedding_distortion(&points, &m)?;
    if let Some(ok) = bound_ok(&rep.distortion, rep.squared, &a.max)? {
        run.verdict("distortion_bound", ok);
    }
    run.write_json(&a.out, &rep)
}

fn verify_cube(run: &mut Run, a: VerifyCubeArgs) -> Result<()> {
    let doc = run.cube_model(&a.input)?;
    if doc.coords.norm() != Norm::L1 {
        bail!("{}: coords.norm must be l1", a.input);
    }
    let one = Rational::from_integer(1.into());
    let mut bad_edge = None;
    for &(u, v) in doc.graph.edges() {
        if doc.coords.difference(u, v).map(|x| Norm::L1.measure(&x) != one).unwrap_or(true) {
            bad_edge = Some((u, v));
            break;
        }
    }
    let m = apsp(&doc.graph)?;
    let rep = embedding_distortion(&doc.coords, &m)?;
    let upper_ok = rep.upper <= one;
    let lower_ok = &rep.lower * Rational::from_integer(4.into()) >= one;
    run.verdict("unit_edges", bad_edge.is_none() && doc.graph.unit() == &one);
    run.verdict("bilipschitz_4", upper_ok && lower_ok);
    run.write_json(&a.out, &json!({ "non_unit_edge": bad_edge, "lower_ok": lower_ok, "upper_ok": upper_ok, "distortion": rep }))
}

fn summary(g: &Graph) -> serde_json::Value {
    let connected = g.is_connected();
    let diameter = if connected { apsp(g).ok().map(|m| m.diameter()) } else { None };
    json!({
        "n": g.n(),
        "edges": g.edge_count(),
        "loops": g.loops().len(),
        "unit": lipgraph::rational::format_rational(g.unit()),
        "max_degree": g.max_degree(),
        "connected": connected,
        "diameter": diameter,
    })
}

fn report(run: &mut Run, a: ReportArgs) -> Result<()> {
    let eps = rational_arg("epsilon", &a.epsilon)?;
    run.param("epsilon", &a.epsilon);
    let g = run.graph(&a.input)?;
    let unit = g.without_loops().unweighted();
    let params = GadgetParams::choose(unit.max_degree().max(1), eps)?;
    let gadget = transform(&unit, &params)?;
    let sandwich = certify_sandwich(&unit, &gadget)?;
    run.verdict("sandwich", sandwich.ok);
    run.verdict("max_degree_3", gadget.graph.max_degree() <= 3);
    let m = apsp(&g)?;
    let kuratowski = embedding_distortion(&kuratowski_embed(&m), &m)?;
    run.verdict("kuratowski_isometry", kuratowski.is_isometry());
    let bundle = json!({
        "graph": summary(&g),
        "gadget": { "r": params.r, "l": params.l, "vertices": gadget.graph.n(), "max_degree": gadget.graph.max_degree() },
        "sandwich": sandwich,
        "kuratowski": kuratowski,
        "spectrum": expansion_report(&g).ok(),
    });
    run.write_json(&a.out, &bundle)
}
