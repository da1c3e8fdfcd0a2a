use std::collections::BTreeMap;
use std::fmt::Write as _;

use anyhow::{bail, Result};
use rayon::prelude::*;
use serde_json::{json, Value};
use zonotile::audit::{self, AuditOptions};
use zonotile::export;
use zonotile::formulas;
use zonotile::hypertri::{cross_section, hypertri_diameters, reduced_cross_section};
use zonotile::oracle::commutation_class_count;
use zonotile::regularity::{classify, classify_all};
use zonotile::secondary::{
    diameter_report, modified_potential, potential, potential_value, skeleton, SkeletonMode, Threshold,
};
use zonotile::{binomial, Extreme, FlipGraph, PointConfig, Subset, Tiling};

use crate::output::{header, points_line, pretty, Artifacts};
use crate::{Cli, Command, Format, Global};

/// Runs the command; `Ok(false)` means a check failed under `--strict`.
pub fn run(cli: &Cli) -> Result<bool> {
    let g = &cli.global;
    let ok = match &cli.command {
        Command::Enumerate => enumerate(g)?,
        Command::Classify => classify_cmd(g)?,
        Command::Diameters => diameters(g)?,
        Command::Hypertri { tiling } => hypertri(g, *tiling)?,
        Command::Potential { reference } => potential_cmd(g, *reference)?,
        Command::Chains { samples } => chains(g, *samples)?,
        Command::Render { tiling } => render(g, *tiling)?,
        Command::OracleCount => oracle_count(g)?,
        Command::Verify { quick } => verify(g, *quick)?,
    };
    Ok(ok || !g.strict)
}

fn graph_for(g: &Global) -> Result<(PointConfig, FlipGraph)> {
    let c = g.config()?;
    let graph = FlipGraph::enumerate(&c, g.cap)?;
    Ok((c, graph))
}

fn emit(g: &Global, text: &str, json: &Value, dot: Option<&str>) -> Result<()> {
    match g.format {
        Format::Text => print!("{text}"),
        Format::Json => print!("{}", pretty(json)),
        Format::Dot => match dot {
            Some(d) => print!("{d}"),
            None => bail!("this command has no DOT output"),
        },
        Format::Svg => bail!("only `render` produces SVG"),
    }
    Ok(())
}

fn mark(ok: bool) -> &'static str {
    if ok {
        "ok"
    } else {
        "MISMATCH"
    }
}

fn enumerate(g: &Global) -> Result<bool> {
    let (c, graph) = graph_for(g)?;
    let mut j = header("enumerate", &c);
    j.insert("count".into(), graph.len().into());
    j.insert("edge_count".into(), graph.edge_count().into());
    let body = export::graph_json(&graph, &c);
    j.insert("nodes".into(), body["nodes"].clone());
    j.insert("edges".into(), body["edges"].clone());
    let j = Value::Object(j);
    let dot = export::graph_dot(&graph, &c);

    let art = Artifacts::new(g.out.as_deref())?;
    art.json("graph.json", &j)?;
    art.write("graph.dot", &dot)?;

    let mut ok = true;
    let mut text = format!("{} tilings, {} flips\n{}\n", graph.len(), graph.edge_count(), points_line(&c));
    if g.strict {
        let oracle = commutation_class_count(c.n());
        ok = oracle == graph.len();
        writeln!(text, "commutation classes: {oracle} ({})", mark(ok))?;
    }
    emit(g, &text, &j, Some(&dot))?;
    Ok(ok)
}

fn classify_cmd(g: &Global) -> Result<bool> {
    let (c, graph) = graph_for(g)?;
    let certs: Vec<_> = graph.tilings().par_iter().map(|t| classify(&c, t)).collect();
    let regular = certs.iter().filter(|x| x.regular).count();
    let width = graph.circuit_count().div_ceil(4).max(1);
    let rows: Vec<Value> = certs
        .iter()
        .enumerate()
        .map(|(id, cert)| {
            let mut v = cert.to_json();
            v["id"] = json!(id);
            v["key"] = json!(format!("{:0width$x}", graph.key(id as u32)));
            v
        })
        .collect();
    let extremes_ok = certs[graph.min_id() as usize].regular && certs[graph.max_id() as usize].regular;
    let mut j = header("classify", &c);
    j.insert("count".into(), graph.len().into());
    j.insert("regular".into(), regular.into());
    j.insert("irregular".into(), (graph.len() - regular).into());
    j.insert("t_min_heights".into(), "a_i^2 (convex)".into());
    j.insert("t_max_heights".into(), "-a_i^2 (concave)".into());
    j.insert("tilings".into(), rows.into());
    let j = Value::Object(j);
    Artifacts::new(g.out.as_deref())?.json("classify.json", &j)?;

    let text = format!(
        "{} tilings: {regular} regular, {} irregular\n{}\nT_min from heights a_i^2, T_max from -a_i^2: {}\n",
        graph.len(),
        graph.len() - regular,
        points_line(&c),
        if extremes_ok { "both regular" } else { "NOT both regular" }
    );
    emit(g, &text, &j, None)?;
    Ok(extremes_ok)
}

fn diameters(g: &Global) -> Result<bool> {
    let (c, graph) = graph_for(g)?;
    let levels = g.levels(c.n())?;
    let regular = classify_all(&graph, &c);
    let art = Artifacts::new(g.out.as_deref())?;
    let mut ok = true;
    let mut reports = Vec::new();
    let mut dots = String::new();
    let mut text = format!("{}\n", points_line(&c));
    writeln!(
        text,
        "{:>3} | {:>8} {:>5} {:>7} | {:>8} {:>5} {:>7} | {:>7} {:>7}",
        "k", "Σ_k cls", "diam", "formula", "Σ+Σ cls", "diam", "formula", "duality", "vert_k"
    )?;
    for &k in &levels {
        let r = diameter_report(&graph, &c, &regular, k)?;
        ok &= r.all_ok();
        writeln!(
            text,
            "{:>3} | {:>8} {:>5} {:>7} | {:>8} {:>5} {:>7} | {:>7} {:>7}",
            k,
            r.sigma_k.classes,
            r.sigma_k.diameter,
            r.sigma_k.formula,
            r.sigma_k_plus_prev.classes,
            r.sigma_k_plus_prev.diameter,
            r.sigma_k_plus_prev.formula,
            mark(r.duality_ok),
            mark(r.vertk_distinct_ok)
        )?;
        if !r.regular_paths_agree {
            writeln!(text, "    k={k}: classes through regular tilings only differ")?;
        }
        for mode in [SkeletonMode::SigmaK, SkeletonMode::SigmaKPlusPrev] {
            let s = skeleton(&graph, k, mode, Some(&regular))?;
            let d = export::skeleton_dot(&s);
            art.write(&format!("{}_k{k}.dot", mode.name()), &d)?;
            dots.push_str(&d);
        }
        reports.push(r.to_json());
    }
    writeln!(text, "all statements hold: {ok}")?;
    let mut j = header("diameters", &c);
    j.insert("reports".into(), reports.into());
    let j = Value::Object(j);
    art.json("diameters.json", &j)?;
    emit(g, &text, &j, Some(&dots))?;
    Ok(ok)
}

fn s(labels: &[usize]) -> Subset {
    Subset::from_labels(labels.iter().copied())
}

fn hypertri(g: &Global, tiling: Option<u32>) -> Result<bool> {
    let (c, graph) = graph_for(g)?;
    let levels = g.levels(c.n())?;
    let mut ok = true;
    let mut reports = Vec::new();
    let mut text = format!("{}\n", points_line(&c));
    writeln!(text, "{:>3} | {:>9} {:>7} | {:>9} {:>7} | structure", "k", "lifting", "formula", "reduced", "formula")?;
    for &k in &levels {
        let r = hypertri_diameters(&graph, k)?;
        ok &= r.all_ok();
        writeln!(
            text,
            "{:>3} | {:>9} {:>7} | {:>9} {:>7} | {}",
            k,
            r.lifting.diameter,
            r.lifting.formula,
            r.reduced.diameter,
            r.reduced.formula,
            mark(r.path_quotient_ok && r.vertex_change_ok && r.triple_ok && r.reduced_distinct_ok)
        )?;
        reports.push(r.to_json());
    }

    let mut paths = Vec::new();
    if let Some(id) = tiling {
        if id as usize >= graph.len() {
            bail!("no tiling {id}; there are {}", graph.len());
        }
        for &k in &levels {
            let p = cross_section(graph.tiling(id), k)?;
            let r = reduced_cross_section(&graph, id, k)?;
            writeln!(text, "tiling {id}, level {k}: {}; reduced at level {}: {}", p.compact(), k + 1, r.compact())?;
            paths.push(p.to_json());
            paths.push(r.to_json());
        }
    }

    let g4 = FlipGraph::enumerate(&PointConfig::standard(4)?, 4)?;
    let lifting = [s(&[1, 2]), s(&[1, 3]), s(&[1, 4]), s(&[3, 4])];
    let crossing = [s(&[1, 2]), s(&[1, 3]), s(&[1, 4]), s(&[2, 4]), s(&[3, 4])];
    let lifting_hits = audit::tilings_with_path(&g4, 2, &lifting).len();
    let crossing_hits = audit::tilings_with_path(&g4, 2, &crossing).len();
    let (reduced_ok, reduced_note) = audit::reduced_fixture();
    let fixtures_ok = lifting_hits > 0 && crossing_hits == 0 && reduced_ok;
    ok &= fixtures_ok;
    writeln!(text, "fixture n=4 path 12-13-14-34: {lifting_hits} tilings ({})", mark(lifting_hits > 0))?;
    writeln!(text, "fixture n=4 path 12-13-14-24-34: {crossing_hits} tilings ({})", mark(crossing_hits == 0))?;
    writeln!(text, "fixture points -2..2: {reduced_note} ({})", mark(reduced_ok))?;

    let mut j = header("hypertri", &c);
    j.insert("reports".into(), reports.into());
    j.insert("paths".into(), paths.into());
    j.insert(
        "fixtures".into(),
        json!({
            "lifting_path_tilings": lifting_hits,
            "crossing_path_tilings": crossing_hits,
            "reduced_fixture_ok": reduced_ok,
            "reduced_fixture": reduced_note,
        }),
    );
    let j = Value::Object(j);
    Artifacts::new(g.out.as_deref())?.json("hypertri.json", &j)?;
    emit(g, &text, &j, None)?;
    Ok(ok)
}

fn potential_cmd(g: &Global, reference: u32) -> Result<bool> {
    let (c, graph) = graph_for(g)?;
    if reference as usize >= graph.len() {
        bail!("no tiling {reference}; there are {}", graph.len());
    }
    let n = c.n();
    let levels = g.levels(n)?;
    let tmin = Tiling::extremal(&c, Extreme::Min);
    let tmax = Tiling::extremal(&c, Extreme::Max);
    let mut ok = true;
    let mut rows = Vec::new();
    let mut text = format!("{}\nreference tiling {reference}\n", points_line(&c));
    writeln!(
        text,
        "{:>3} {:>10} | {:>6} {:>10} | {:>18} {:>7}",
        "k", "threshold", "max|ΔP|", "max|ΔP̃| off-k", "P_min(T_max)", "formula"
    )?;
    for &k in &levels {
        for th in [Threshold::Definition, Threshold::Shifted] {
            let p = potential(&graph, reference, k, th);
            let m = modified_potential(&graph, reference, k, th);
            let extreme = potential_value(&tmin, &tmax, k, th, false);
            let formula = formulas::sigma_k_plus_prev_diameter(n, k);
            if th == Threshold::Definition {
                ok &= p.max_edge_delta <= 1 && m.max_off_level_delta == 0 && m.max_edge_delta <= 1;
            }
            writeln!(
                text,
                "{:>3} {:>10} | {:>6} {:>10} | {:>18} {:>7}",
                k,
                th.name(),
                p.max_edge_delta,
                m.max_off_level_delta,
                extreme,
                formula
            )?;
            rows.push(json!({
                "k": k,
                "threshold": th.name(),
                "potential": p.to_json(),
                "modified": m.to_json(),
                "t_min_to_t_max": extreme,
                "formula": formula,
            }));
        }
    }
    let mut j = header("potential", &c);
    j.insert("reference".into(), reference.into());
    j.insert("levels".into(), rows.into());
    let j = Value::Object(j);
    Artifacts::new(g.out.as_deref())?.json("potential.json", &j)?;
    emit(g, &text, &j, None)?;
    Ok(ok)
}

fn chains(g: &Global, samples: usize) -> Result<bool> {
    let (c, graph) = graph_for(g)?;
    let n = c.n();
    let want: Vec<usize> = (1..=n.saturating_sub(2))
        .map(|k| formulas::chain_level_count(n, k) as usize)
        .collect();
    let outcomes: Vec<_> = (0..samples)
        .into_par_iter()
        .map(|i| graph.sample_chain(g.seed.wrapping_add(i as u64)))
        .collect();
    let mut tally: BTreeMap<String, usize> = BTreeMap::new();
    let mut stuck = 0;
    for o in &outcomes {
        match o {
            Ok(chain) => *tally.entry(format!("{:?}", chain.level_census(n))).or_default() += 1,
            Err(_) => stuck += 1,
        }
    }
    let expected = format!("{want:?}");
    let matching = tally.get(&expected).copied().unwrap_or(0);
    let ok = stuck == 0 && matching == samples;
    let mut text = format!("{}\n", points_line(&c));
    writeln!(text, "{samples} greedy chains from seed {}, {stuck} stuck", g.seed)?;
    writeln!(text, "expected census k(n-k-1) by level: {expected}, total C(n,3) = {}", binomial(n, 3))?;
    for (census, count) in &tally {
        writeln!(text, "  {census}: {count}")?;
    }
    let mut j = header("chains", &c);
    j.insert("samples".into(), samples.into());
    j.insert("seed".into(), g.seed.into());
    j.insert("stuck".into(), stuck.into());
    j.insert("expected".into(), json!(want));
    j.insert("censuses".into(), json!(tally));
    let j = Value::Object(j);
    Artifacts::new(g.out.as_deref())?.json("chains.json", &j)?;
    emit(g, &text, &j, None)?;
    Ok(ok)
}

fn render(g: &Global, id: u32) -> Result<bool> {
    let (c, graph) = graph_for(g)?;
    if id as usize >= graph.len() {
        bail!("no tiling {id}; there are {}", graph.len());
    }
    let t = graph.tiling(id);
    let svg = export::tiling_svg(&c, t);
    let mut j = header("render", &c);
    j.insert("id".into(), id.into());
    j.insert("tiling".into(), t.to_json());
    let j = Value::Object(j);
    let art = Artifacts::new(g.out.as_deref())?;
    art.write(&format!("tiling_{id}.svg"), &svg)?;
    art.json(&format!("tiling_{id}.json"), &j)?;
    match g.format {
        Format::Json => print!("{}", pretty(&j)),
        Format::Dot => bail!("`render` produces SVG or JSON"),
        Format::Text | Format::Svg => print!("{svg}"),
    }
    Ok(true)
}

fn oracle_count(g: &Global) -> Result<bool> {
    let c = g.config()?;
    let n = c.n();
    let count = commutation_class_count(n);
    let mut text = format!("commutation classes of reduced words of the longest element of S_{n}: {count}\n");
    let mut ok = true;
    let mut j = header("oracle-count", &c);
    j.insert("oracle".into(), count.into());
    if n <= g.cap {
        let graph = FlipGraph::enumerate(&c, g.cap)?;
        ok = graph.len() == count;
        writeln!(text, "flip-graph enumeration: {} ({})", graph.len(), mark(ok))?;
        j.insert("enumerated".into(), graph.len().into());
    }
    j.insert("match".into(), ok.into());
    let j = Value::Object(j);
    Artifacts::new(g.out.as_deref())?.json("oracle.json", &j)?;
    emit(g, &text, &j, None)?;
    Ok(ok)
}

fn verify(g: &Global, quick: bool) -> Result<bool> {
    let opts = AuditOptions {
        seed: g.seed,
        with_n7: !quick,
        ..AuditOptions::default()
    };
    let results = audit::run_all(&opts);
    let ok = results.iter().all(|r| r.pass);
    let mut text = String::new();
    for r in &results {
        writeln!(text, "{}", r.line())?;
    }
    writeln!(
        text,
        "{}/{} criteria pass",
        results.iter().filter(|r| r.pass).count(),
        results.len()
    )?;
    let rows: Vec<Value> = results
        .iter()
        .map(|r| json!({ "id": r.id, "name": r.name, "pass": r.pass, "detail": r.detail }))
        .collect();
    let j = json!({ "command": "verify", "seed": g.seed, "criteria": rows, "all_pass": ok });
    Artifacts::new(g.out.as_deref())?.json("verify.json", &j)?;
    emit(g, &text, &j, None)?;
    Ok(ok)
}
