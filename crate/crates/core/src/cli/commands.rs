use std::collections::HashMap;
use std::fs;
use std::io::Write;
use std::path::Path;

use super::output::{emit, Cell, Format, Table};
use super::{Cli, Command, GraphArgs, ScorerArgs, TrainArgs};
use crate::analogy::{
    axis_spectrum, axis_stability, build_analogy_graph,
    discipline_pair_analogy_suite, AuthorIndex, CycleRule, SuiteOptions,
};
use crate::baselines::{
    build_periodical_citation_matrix, pagerank_scores, CitationVectors, JaccardModel, PageRankConfig,
    PeriodicalCitationMatrix,
};
use crate::corpus::{
    generate_synthetic_authorship, generate_synthetic_graph, generate_trail_corpus, load_citation_graph,
    write_trails, AuthorshipSpec, PaperGraph, SyntheticSpec,
};
use crate::evaluation::{
    citation_weight_f1, element_centric_similarity, kmeans, pair_group_report, parse_rankings,
    predict_discipline_knn, rank_evaluation, venue_prediction_eval, CandidateRanker, DisciplineCatalog,
    DisciplineRanker, F1Report, ModelRanker, Scorer, INTERDISCIPLINE,
};
use crate::model::{compare_ids, VectorModel};
use crate::sgns::{train, TrainConfig};
use crate::vectorspace::{build_axis, project_on_axis, VectorStore};
use crate::{Error, Result};

fn write_file(path: &Path, contents: &str) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    }
    fs::write(path, contents).map_err(|e| Error::io(path, e))
}

fn create_dir(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))
}

fn load_graph(g: &GraphArgs) -> Result<PaperGraph> {
    let (graph, report) = load_citation_graph(&g.edges, &g.papers)?;
    if report.self_loops_dropped > 0 {
        log::warn!("dropped {} self-citations", report.self_loops_dropped);
    }
    Ok(graph)
}

/// The scorers requested on the command line, with their inputs loaded.
struct Scorers {
    p2v: Option<VectorStore>,
    graph: Option<PaperGraph>,
    matrix: Option<PeriodicalCitationMatrix>,
    cv: Option<CitationVectors>,
    jac: Option<JaccardModel>,
}

impl Scorers {
    fn load(args: &ScorerArgs) -> Result<Self> {
        let has_graph = args.graph.edges.is_some();
        let wanted: Vec<&str> = if args.scorers.is_empty() {
            let mut w = Vec::new();
            if args.model.is_some() {
                w.push("p2v");
            }
            if has_graph {
                w.extend(["cv", "jac"]);
            }
            w
        } else {
            args.scorers.iter().map(String::as_str).collect()
        };
        if wanted.is_empty() {
            return Err(Error::Config("no scorer available: give --model and/or --edges with --papers".into()));
        }
        let p2v = match (wanted.contains(&"p2v"), &args.model) {
            (false, _) => None,
            (true, Some(m)) => Some(VectorStore::load(m, None)?),
            (true, None) => return Err(Error::Config("the p2v scorer needs --model".into())),
        };
        let graph = match (&args.graph.edges, &args.graph.papers) {
            (Some(e), Some(p)) => Some(load_graph(&GraphArgs { edges: e.clone(), papers: p.clone() })?),
            _ => None,
        };
        let matrix = graph.as_ref().map(build_periodical_citation_matrix);
        let needs_graph = wanted.iter().any(|w| *w != "p2v");
        if needs_graph && matrix.is_none() {
            return Err(Error::Config("the cv and jac scorers need --edges and --papers".into()));
        }
        let cv = wanted.contains(&"cv").then(|| CitationVectors::new(matrix.as_ref().unwrap()));
        let jac = wanted
            .contains(&"jac")
            .then(|| JaccardModel::new(matrix.as_ref().unwrap(), !args.jac_exclude_diagonal));
        Ok(Scorers { p2v, graph, matrix, cv, jac })
    }

    fn models(&self) -> Vec<&dyn VectorModel> {
        let mut v: Vec<&dyn VectorModel> = Vec::new();
        if let Some(m) = &self.p2v {
            v.push(m);
        }
        if let Some(m) = &self.cv {
            v.push(m);
        }
        if let Some(m) = &self.jac {
            v.push(m);
        }
        v
    }

    fn pair_scorers(&self) -> Vec<Scorer<'_>> {
        let mut v = Vec::new();
        if let Some(m) = &self.p2v {
            v.push(Scorer::Cosine(m));
        }
        if let Some(m) = &self.cv {
            v.push(Scorer::Cosine(m));
        }
        if let Some(m) = &self.jac {
            v.push(Scorer::Jaccard(m));
        }
        v
    }

    fn pagerank(&self) -> Result<Option<HashMap<String, f64>>> {
        let Some(c) = &self.matrix else { return Ok(None) };
        let scores = pagerank_scores(c, &PageRankConfig::default())?;
        Ok(Some(c.names().iter().cloned().zip(scores).collect()))
    }
}

fn load_store(model: &Path, periodicals: Option<&Path>) -> Result<VectorStore> {
    VectorStore::load(model, periodicals)
}

fn neighbor_table(store: &VectorStore, neighbors: Vec<crate::vectorspace::Neighbor>) -> Table {
    let with_names = store.catalog.is_some();
    let mut t = if with_names { Table::new(&["rank", "id", "score", "name"]) } else { Table::new(&["rank", "id", "score"]) };
    for (i, n) in neighbors.into_iter().enumerate() {
        let mut row: Vec<Cell> = vec![(i + 1).into(), n.id.clone().into(), n.score.into()];
        if let Some(cat) = &store.catalog {
            row.push(cat.name(&n.id).unwrap_or("").into());
        }
        t.push(row);
    }
    t
}

pub(crate) fn similar_table(store: &VectorStore, id: &str, top_n: usize) -> Result<Table> {
    Ok(neighbor_table(store, store.most_similar(id, top_n, &[])?))
}

pub(crate) fn analogy_table(store: &VectorStore, a: &str, b: &str, c: &str, top_n: usize) -> Result<Table> {
    Ok(neighbor_table(store, store.analogy_query(a, b, c, top_n)?))
}

fn f1_row(t: &mut Table, r: &F1Report) {
    t.push(vec![
        r.method.clone().into(),
        r.macro_f1.mean.into(),
        r.macro_f1.half_width.into(),
        r.micro_f1.mean.into(),
        r.micro_f1.half_width.into(),
    ]);
}

fn refs(v: &[String]) -> Vec<&str> {
    v.iter().map(String::as_str).collect()
}

fn train_config(a: &TrainArgs, seed: u64) -> TrainConfig {
    TrainConfig {
        window: a.window,
        dim: a.dim,
        negatives: a.negatives,
        min_count: a.min_count,
        epochs: a.epochs,
        initial_lr: a.initial_lr,
        final_lr: a.final_lr,
        subsample: a.subsample,
        shrink_window: !a.fixed_window,
        noise_exponent: a.noise_exponent,
        seed,
    }
}

pub(crate) fn execute(cli: &Cli, out: &mut dyn Write) -> Result<()> {
    let fmt: Format = cli.format;
    let seed = cli.seed;
    match &cli.command {
        Command::Synth {
            out_dir,
            disciplines,
            papers_per_discipline,
            periodicals_per_discipline,
            sub_disciplines,
            within_probability,
            cross_probability,
            citations_per_paper,
            sub_discipline_affinity,
            self_venue_probability,
            cross_partner_share,
            specialty,
        } => {
            let spec = SyntheticSpec {
                disciplines: *disciplines,
                papers_per_discipline: *papers_per_discipline,
                periodicals_per_discipline: *periodicals_per_discipline,
                within_probability: *within_probability,
                cross_probability: *cross_probability,
                citations_per_paper: *citations_per_paper,
                sub_disciplines: *sub_disciplines,
                sub_discipline_affinity: *sub_discipline_affinity,
                self_venue_probability: *self_venue_probability,
                cross_partner_share: *cross_partner_share,
                specialty: *specialty,
                seed,
            };
            let net = generate_synthetic_graph(&spec)?;
            let authors = generate_synthetic_authorship(&net, &AuthorshipSpec { seed, ..Default::default() })?;
            create_dir(out_dir)?;
            let g = &net.graph;
            let mut edges = String::new();
            for (a, b) in g.edges() {
                edges.push_str(&format!("{}\t{}\n", g.paper_id(a), g.paper_id(b)));
            }
            write_file(&out_dir.join("edges.tsv"), &edges)?;
            let mut papers = String::new();
            for p in 0..g.paper_count() {
                papers.push_str(&format!("{}\t{}\n", g.paper_id(p), g.periodical_name(g.venue(p))));
            }
            write_file(&out_dir.join("papers.tsv"), &papers)?;
            net.catalog().save(out_dir.join("periodicals.tsv"))?;
            let mut rows = String::new();
            for (p, a) in &authors {
                rows.push_str(&format!("{p}\t{a}\n"));
            }
            write_file(&out_dir.join("authorship.tsv"), &rows)?;
            let mut t = Table::new(&["papers", "periodicals", "edges", "authorship_rows"]);
            t.push(vec![g.paper_count().into(), g.periodical_count().into(), g.edge_count().into(), authors.len().into()]);
            emit(out, &t, fmt, None, "synth")
        }
        Command::Ingest { graph, out_dir } => {
            let (g, report) = load_citation_graph(&graph.edges, &graph.papers)?;
            create_dir(out_dir)?;
            let mut counts = vec![0usize; g.periodical_count()];
            for v in g.venues() {
                counts[v.index()] += 1;
            }
            let mut ids = Table::new(&["dense_id", "periodical", "papers"]);
            for (i, name) in g.periodical_names().iter().enumerate() {
                ids.push(vec![i.into(), name.clone().into(), counts[i].into()]);
            }
            write_file(&out_dir.join("periodical_ids.tsv"), &ids.render(Format::Tsv))?;
            let dead_ends = (0..g.paper_count()).filter(|&p| g.out_degree(p) == 0).count();
            let mut t = Table::new(&["papers", "periodicals", "edges", "self_loops_dropped", "dead_ends"]);
            t.push(vec![
                report.papers.into(),
                report.periodicals.into(),
                report.edges.into(),
                report.self_loops_dropped.into(),
                dead_ends.into(),
            ]);
            write_file(&out_dir.join("summary.tsv"), &t.render(Format::Tsv))?;
            emit(out, &t, fmt, None, "ingest")
        }
        Command::Walk { graph, n, out: path } => {
            let g = load_graph(graph)?;
            let corpus = generate_trail_corpus(&g, *n, seed, cli.workers)?;
            write_trails(&corpus, path)?;
            let mut t = Table::new(&["trails", "tokens"]);
            t.push(vec![corpus.len().into(), corpus.token_count().into()]);
            emit(out, &t, fmt, None, "walk")
        }
        Command::Train(args) => {
            let cfg = train_config(args, seed);
            let m = train(&args.corpus, &cfg, cli.workers)?;
            m.save(&args.out)?;
            if let Some(p) = &args.out_context {
                m.save_output(p)?;
            }
            let mut t = Table::new(&["vocabulary", "dim"]);
            t.push(vec![m.len().into(), m.dim().into()]);
            emit(out, &t, fmt, None, "train")
        }
        Command::QuerySimilar { model, periodicals, id, top_n } => {
            let store = load_store(model, periodicals.as_deref())?;
            emit(out, &similar_table(&store, id, *top_n)?, fmt, None, "similar")
        }
        Command::QueryAnalogy { model, periodicals, a, b, c, top_n } => {
            let store = load_store(model, periodicals.as_deref())?;
            emit(out, &analogy_table(&store, a, b, c, *top_n)?, fmt, None, "analogy")
        }
        Command::Axis { model, positive, negative, ids } => {
            let store = load_store(model, None)?;
            let axis = build_axis(&store, &refs(positive), &refs(negative))?;
            let mut scores: Vec<(String, f64)> = if ids.is_empty() {
                store
                    .names()
                    .iter()
                    .map(|id| Ok((id.clone(), project_on_axis(&store, id, &axis)?)))
                    .collect::<Result<_>>()?
            } else {
                ids.iter().map(|id| Ok((id.clone(), project_on_axis(&store, id, &axis)?))).collect::<Result<_>>()?
            };
            if ids.is_empty() {
                scores.sort_by(|a, b| b.1.total_cmp(&a.1).then_with(|| compare_ids(&a.0, &b.0)));
            }
            let mut t = Table::new(&["id", "score"]);
            for (id, s) in scores {
                t.push(vec![id.into(), s.into()]);
            }
            emit(out, &t, fmt, None, "axis")
        }
        Command::Spectrum { model, periodicals, positive, negative, results_dir } => {
            let store = load_store(model, None)?;
            let catalog = DisciplineCatalog::load(periodicals)?;
            let r = axis_spectrum(&store, &catalog, &refs(positive), &refs(negative))?;
            let mut t = Table::new(&["discipline", "mean", "periodicals"]);
            for d in &r.disciplines {
                t.push(vec![d.discipline.clone().into(), d.mean.into(), d.count.into()]);
            }
            if let Some(dir) = results_dir {
                let mut s = Table::new(&["id", "score"]);
                for (id, x) in &r.scores {
                    s.push(vec![id.clone().into(), (*x).into()]);
                }
                emit(&mut std::io::sink(), &s, Format::Tsv, Some(dir), "spectrum_scores")?;
            }
            emit(out, &t, fmt, results_dir.as_deref(), "spectrum")
        }
        Command::Baseline { graph, out_dir, damping } => {
            let g = load_graph(graph)?;
            let c = build_periodical_citation_matrix(&g);
            create_dir(out_dir)?;
            c.save(out_dir.join("citation_matrix.tsv"))?;
            write_file(&out_dir.join("matrix_periodicals.txt"), &(c.names().join("\n") + "\n"))?;
            let pr = pagerank_scores(&c, &PageRankConfig { damping: *damping, ..Default::default() })?;
            let mut prt = Table::new(&["id", "pagerank"]);
            for (name, s) in c.names().iter().zip(&pr) {
                prt.push(vec![name.clone().into(), (*s).into()]);
            }
            write_file(&out_dir.join("pagerank.tsv"), &prt.render(Format::Tsv))?;
            let cells: usize = (0..c.len()).map(|i| c.row(i).len()).sum();
            let mut t = Table::new(&["periodicals", "nonzero_cells", "citations"]);
            t.push(vec![c.len().into(), cells.into(), (c.total() as usize).into()]);
            emit(out, &t, fmt, None, "baseline")
        }
        Command::EvalPairs { scorers, periodicals, pairs, results_dir } => {
            let s = Scorers::load(scorers)?;
            let catalog = DisciplineCatalog::load(periodicals)?;
            let mut t = Table::new(&["scorer", "group", "pairs", "mean", "kl_from_random"]);
            for scorer in s.pair_scorers() {
                let r = pair_group_report(scorer, &catalog, *pairs, seed)?;
                for g in &r.groups {
                    t.push(vec![
                        r.scorer.clone().into(),
                        g.group.name().into(),
                        g.scores.len().into(),
                        g.mean.into(),
                        g.kl_from_random.into(),
                    ]);
                }
            }
            emit(out, &t, fmt, results_dir.as_deref(), "eval_pairs")
        }
        Command::EvalKnn { scorers, periodicals, k, folds, results_dir } => {
            let s = Scorers::load(scorers)?;
            let catalog = DisciplineCatalog::load(periodicals)?;
            let mut t = Table::new(&["method", "macro_f1", "macro_ci", "micro_f1", "micro_ci"]);
            for m in s.models() {
                f1_row(&mut t, &predict_discipline_knn(m, &catalog, *k, *folds, seed)?);
            }
            if let Some(c) = &s.matrix {
                f1_row(&mut t, &citation_weight_f1(c, &catalog, *folds, seed)?);
            }
            emit(out, &t, fmt, results_dir.as_deref(), "eval_knn")
        }
        Command::EvalCluster { model, periodicals, k, restarts, alpha, results_dir } => {
            let store = load_store(model, None)?;
            let catalog = DisciplineCatalog::load(periodicals)?;
            let members: Vec<(usize, &str)> = (0..store.names().len())
                .filter_map(|r| catalog.discipline(&store.names()[r]).map(|d| (r, d)))
                .filter(|(_, d)| *d != INTERDISCIPLINE)
                .collect();
            let disciplines: Vec<&str> = {
                let mut d: Vec<&str> = members.iter().map(|m| m.1).collect();
                d.sort();
                d.dedup();
                d
            };
            let k = k.unwrap_or(disciplines.len());
            let points: Vec<&[f64]> = members.iter().map(|&(r, _)| store.vector(r)).collect();
            let clusters = kmeans(&points, k, *restarts, seed)?;
            let truth: Vec<usize> = members.iter().map(|m| disciplines.binary_search(&m.1).unwrap()).collect();
            let ecs = element_centric_similarity(&clusters.assignments, &truth, *alpha)?;
            if let Some(dir) = results_dir {
                let mut a = Table::new(&["id", "cluster", "discipline", "agreement"]);
                for (i, &(r, d)) in members.iter().enumerate() {
                    a.push(vec![
                        store.names()[r].clone().into(),
                        clusters.assignments[i].into(),
                        d.into(),
                        ecs.scores[i].into(),
                    ]);
                }
                emit(&mut std::io::sink(), &a, Format::Tsv, Some(dir), "eval_cluster_assignments")?;
            }
            let mut t = Table::new(&["periodicals", "k", "inertia", "ecs_mean"]);
            t.push(vec![members.len().into(), k.into(), clusters.inertia.into(), ecs.mean.into()]);
            emit(out, &t, fmt, results_dir.as_deref(), "eval_cluster")
        }
        Command::EvalRank { scorers, rankings, periodicals, agreement_threshold, results_dir } => {
            let s = Scorers::load(scorers)?;
            let refs_ = parse_rankings(rankings)?;
            let model_rankers: Vec<ModelRanker> = s.models().into_iter().map(ModelRanker).collect();
            let mut rankers: Vec<&dyn CandidateRanker> = model_rankers.iter().map(|r| r as &dyn CandidateRanker).collect();
            let catalog = periodicals.as_ref().map(DisciplineCatalog::load).transpose()?;
            let pagerank = s.pagerank()?;
            let discipline_of = |id: &str| catalog.as_ref().and_then(|c| c.discipline(id).map(String::from));
            let disc_ranker = match (&catalog, &pagerank) {
                (Some(_), Some(pr)) => Some(DisciplineRanker { discipline_of: &discipline_of, pagerank: pr }),
                _ => None,
            };
            if let Some(r) = &disc_ranker {
                rankers.push(r);
            }
            let results = rank_evaluation(&refs_, &rankers, *agreement_threshold, seed)?;
            let mut t = Table::new(&["scorer", "mean_tau", "ci", "targets"]);
            for r in results {
                t.push(vec![r.scorer.into(), r.tau.mean.into(), r.tau.half_width.into(), r.tau.n.into()]);
            }
            emit(out, &t, fmt, results_dir.as_deref(), "eval_rank")
        }
        Command::EvalVenue { scorers, sample, repeats, results_dir } => {
            let s = Scorers::load(scorers)?;
            let g = s.graph.as_ref().ok_or_else(|| Error::Config("venue prediction needs --edges and --papers".into()))?;
            let r = venue_prediction_eval(g, &s.models(), *sample, *repeats, seed)?;
            let mut t = Table::new(&["model", "accuracy", "ci", "repeats", "sample"]);
            for a in &r.accuracies {
                t.push(vec![
                    a.model.clone().into(),
                    a.accuracy.mean.into(),
                    a.accuracy.half_width.into(),
                    r.repeats.into(),
                    r.sample.into(),
                ]);
            }
            emit(out, &t, fmt, results_dir.as_deref(), "eval_venue")
        }
        Command::AnalogyGraph { scorers, pole_a, pole_b, start, depth, same_discipline, periodicals, out_json } => {
            let s = Scorers::load(scorers)?;
            let model = s.models()[0];
            let catalog = periodicals.as_ref().map(DisciplineCatalog::load).transpose()?;
            let filter = if *same_discipline { catalog.as_ref() } else { None };
            let g = build_analogy_graph(model, pole_a, pole_b, start, *depth, filter)?;
            if let Some(p) = out_json {
                write_file(p, &(g.to_json() + "\n"))?;
            }
            match fmt {
                Format::Json => out.write_all((g.to_json() + "\n").as_bytes()).map_err(|e| Error::io("<stdout>", e)),
                Format::Tsv => {
                    let mut t = Table::new(&["src", "dst", "direction"]);
                    for e in &g.edges {
                        t.push(vec![e.src.clone().into(), e.dst.clone().into(), e.direction.as_str().into()]);
                    }
                    emit(out, &t, fmt, None, "analogy_graph")
                }
            }
        }
        Command::AnalogySuite {
            scorers,
            periodicals,
            authorship,
            d1,
            d2,
            top,
            depth,
            same_discipline,
            two_cycles_only,
            results_dir,
        } => {
            let s = Scorers::load(scorers)?;
            let g = s.graph.as_ref().ok_or_else(|| Error::Config("the analogy suite needs --edges and --papers".into()))?;
            let pagerank = s.pagerank()?.expect("graph implies matrix");
            let catalog = DisciplineCatalog::load(periodicals)?;
            let idx = AuthorIndex::load(authorship, g)?;
            let pairs: Vec<(String, String)> = match (d1, d2) {
                (Some(a), Some(b)) => vec![(a.clone(), b.clone())],
                _ => {
                    let ds = catalog.disciplines();
                    let mut v = Vec::new();
                    for i in 0..ds.len() {
                        for j in i + 1..ds.len() {
                            v.push((ds[i].clone(), ds[j].clone()));
                        }
                    }
                    v
                }
            };
            let opts = SuiteOptions {
                top: *top,
                max_depth: *depth,
                same_discipline: *same_discipline,
                cycle_rule: if *two_cycles_only { CycleRule::TwoCycles } else { CycleRule::AnyCycle },
            };
            let mut t = Table::new(&["scorer", "d1", "d2", "graphs", "defined", "mean_fraction", "ci"]);
            let mut dist = Table::new(&["scorer", "d1", "d2", "fraction"]);
            for m in s.models() {
                for (a, b) in &pairs {
                    let r = discipline_pair_analogy_suite(m, &catalog, &idx, a, b, &pagerank, opts)?;
                    t.push(vec![
                        r.model.clone().into(),
                        a.clone().into(),
                        b.clone().into(),
                        r.graphs.into(),
                        r.fractions.len().into(),
                        r.mean.mean.into(),
                        r.mean.half_width.into(),
                    ]);
                    for f in &r.fractions {
                        dist.push(vec![r.model.clone().into(), a.clone().into(), b.clone().into(), (*f).into()]);
                    }
                }
            }
            if let Some(dir) = results_dir {
                emit(&mut std::io::sink(), &dist, Format::Tsv, Some(dir), "analogy_suite_fractions")?;
            }
            emit(out, &t, fmt, results_dir.as_deref(), "analogy_suite")
        }
        Command::AxisStability { model, periodicals, positive, negative, sizes, repeats, results_dir } => {
            let store = load_store(model, None)?;
            let catalog = DisciplineCatalog::load(periodicals)?;
            let pts = axis_stability(&store, &catalog, &refs(positive), &refs(negative), sizes, *repeats, seed)?;
            let mut t = Table::new(&["size", "mean_rho", "ci", "repeats", "degenerate"]);
            for p in pts {
                t.push(vec![p.size.into(), p.rho.mean.into(), p.rho.half_width.into(), p.rho.n.into(), p.degenerate.into()]);
            }
            emit(out, &t, fmt, results_dir.as_deref(), "axis_stability")
        }
        Command::Repl { model, periodicals, axes } => {
            let store = load_store(model, periodicals.as_deref())?;
            let stdin = std::io::stdin();
            let stderr = std::io::stderr();
            super::repl::run_repl(&store, axes.as_deref(), &mut stdin.lock(), out, &mut stderr.lock(), fmt)
        }
    }
}
