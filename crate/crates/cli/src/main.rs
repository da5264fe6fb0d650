//! Command-line front end: fiber classification, gap analysis, table
//! verification and conic-bundle queries, with text and JSON output.

use clap::{Parser, Subcommand};
use resurf_core::conic::{
    admissible_types, classify_conic_fiber, graph_from_json, is_conic_class, RnrfExtras,
};
use resurf_core::gaps::{
    classify_1_gap, gap_density, verify_290_witnesses, GapEngine, OneGapPath, Verdict,
};
use resurf_core::kodaira::{validate_configuration, FiberConfiguration, FiberType};
use resurf_core::mwl::{bounds, minimal_norm, qx_form, Dataset, MWCase, Provenance};
use resurf_core::rational::{format_rational, rat};
use resurf_core::weierstrass::{classify_fiber, minimize_at, model_from_json, Place};
use resurf_core::{Error, RationalMatrix};
use serde_json::{json, Value};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "resurf",
    version,
    about = "Exact computations on rational elliptic surfaces"
)]
struct Cli {
    /// Emit machine-readable JSON instead of text
    #[arg(long, global = true)]
    json: bool,
    /// Path to a classification dataset overriding the embedded one
    #[arg(long, global = true)]
    data: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Classify the fibers of a Weierstrass model at the given places
    ClassifyWeierstrass {
        /// JSON file with coefficient lists a1..a6 ("p/q" strings)
        model: PathBuf,
        /// Comma-separated places: rationals and "inf"
        #[arg(long)]
        places: String,
    },
    /// Combinatorial data of one Kodaira fiber type
    FiberInfo {
        /// A fiber symbol such as I4, I2*, II, IV*
        fiber: String,
    },
    /// One row of the classification with its derived quantities
    CaseInfo {
        #[arg(long)]
        case: usize,
    },
    /// Gap verdicts for k = 0..max-k
    Gaps {
        #[arg(long)]
        case: usize,
        #[arg(long, default_value_t = 20)]
        max_k: usize,
    },
    /// Exact density of gap numbers among 1..max-n
    Density {
        #[arg(long)]
        case: usize,
        #[arg(long, default_value_t = 1000)]
        max_n: usize,
    },
    /// k = 1 verdict for every case, with the decision path
    OneGapReport,
    /// Which conic-bundle fiber types a configuration admits
    ConicAdmissible {
        /// Comma-separated fiber symbols, e.g. "II*,II"
        #[arg(long)]
        fibers: String,
        /// Generic Mordell-Weil rank of the configuration
        #[arg(long)]
        rank: u8,
    },
    /// Classify a divisor intersection graph from JSON
    ConicClassify { graph: PathBuf },
    /// Re-derive the quoted table data and fail loudly on mismatch
    VerifyTables,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::DataIntegrity(_) => ExitCode::from(2),
                _ => ExitCode::from(1),
            }
        }
    }
}

fn load_dataset(cli: &Cli) -> Result<Dataset, Error> {
    match &cli.data {
        Some(path) => Dataset::from_path(path),
        None => Dataset::embedded(),
    }
}

fn run(cli: &Cli) -> Result<(), Error> {
    match &cli.command {
        Command::ClassifyWeierstrass { model, places } => classify_weierstrass(cli, model, places),
        Command::FiberInfo { fiber } => fiber_info(cli, fiber),
        Command::CaseInfo { case } => case_info(cli, *case),
        Command::Gaps { case, max_k } => gaps_cmd(cli, *case, *max_k),
        Command::Density { case, max_n } => density_cmd(cli, *case, *max_n),
        Command::OneGapReport => one_gap_report(cli),
        Command::ConicAdmissible { fibers, rank } => conic_admissible(cli, fibers, *rank),
        Command::ConicClassify { graph } => conic_classify(cli, graph),
        Command::VerifyTables => verify_tables(cli),
    }
}

fn read_json(path: &PathBuf) -> Result<Value, Error> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::domain(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Error::domain(format!("invalid JSON: {e}")))
}

fn classify_weierstrass(cli: &Cli, model: &PathBuf, places: &str) -> Result<(), Error> {
    let w = model_from_json(&read_json(model)?)?;
    let places: Result<Vec<Place>, Error> = places.split(',').map(Place::parse).collect();
    let places = places?;
    let mut rows = Vec::new();
    for place in &places {
        let minimal = minimize_at(&w, place)?;
        let fiber = classify_fiber(&minimal, place)?;
        rows.push((place.clone(), fiber));
    }
    let config = resurf_core::weierstrass::classify_surface(&w, &places)?;
    let euler = config.euler_sum();
    if cli.json {
        let out = json!({
            "fibers": rows.iter().map(|(p, f)| json!({
                "place": p.to_string(),
                "type": f.to_string(),
                "euler": f.euler_number(),
            })).collect::<Vec<_>>(),
            "configuration": config.fibers.iter().map(|f| f.to_string()).collect::<Vec<_>>(),
            "euler_sum": euler,
        });
        println!("{out}");
    } else {
        let parts: Vec<String> = rows.iter().map(|(p, f)| format!("{p}: {f}")).collect();
        println!("{}", parts.join(", "));
        println!(
            "configuration ({}), euler sum {euler}",
            config
                .fibers
                .iter()
                .map(|f| f.to_string())
                .collect::<Vec<_>>()
                .join(", ")
        );
    }
    Ok(())
}

fn fiber_info(cli: &Cli, fiber: &str) -> Result<(), Error> {
    let f: FiberType = fiber.parse()?;
    let t = f.t_lattice();
    let t_name = t.as_ref().map(|b| format!("{b:?}"));
    if cli.json {
        let out = json!({
            "type": f.to_string(),
            "components": f.component_count(),
            "euler": f.euler_number(),
            "reducible": f.is_reducible(),
            "nonreduced": f.is_nonreduced(),
            "t_lattice": t_name,
            "multiplicities": f.component_multiplicities(),
            "quadratic_base_change": f.quadratic_base_change().to_string(),
        });
        println!("{out}");
    } else {
        println!("type {f}");
        println!("  components      {}", f.component_count());
        println!("  euler number    {}", f.euler_number());
        println!("  reducible       {}", f.is_reducible());
        println!("  nonreduced      {}", f.is_nonreduced());
        match t {
            Some(b) => println!("  T_v block       {b:?}"),
            None => println!("  T_v block       none (irreducible)"),
        }
        println!("  multiplicities  {:?}", f.component_multiplicities());
        println!("  base change     {}", f.quadratic_base_change());
    }
    Ok(())
}

fn gram_to_json(m: &RationalMatrix) -> Value {
    Value::Array(
        (0..m.rows())
            .map(|i| {
                Value::Array(
                    (0..m.cols())
                        .map(|j| Value::String(format_rational(&m[(i, j)])))
                        .collect(),
                )
            })
            .collect(),
    )
}

fn case_info(cli: &Cli, case_no: usize) -> Result<(), Error> {
    let dataset = load_dataset(cli)?;
    let case = dataset.get(case_no)?;
    let (c_max, c_min, delta) = bounds(case)?;
    let mu = minimal_norm(case)?;
    let qx = qx_form(case)?;
    let torsion: Vec<String> = case.torsion.iter().map(|t| format!("Z/{t}")).collect();
    if cli.json {
        let out = json!({
            "case": case.case_no,
            "T": case.t_name(),
            "rank": case.rank,
            "torsion": case.torsion,
            "provenance": provenance_str(case),
            "c_max": format_rational(&c_max),
            "c_min": format_rational(&c_min),
            "delta": format_rational(&delta),
            "mu": format_rational(&mu),
            "narrow_det": case.narrow_det().to_string(),
            "EK_free_gram": gram_to_json(case.mw_free.gram()),
            "EK_narrow_gram": gram_to_json(case.mw_narrow.gram()),
            "Q_X": gram_to_json(&qx),
        });
        println!("{out}");
    } else {
        println!("case {} ({})", case.case_no, provenance_str(case));
        println!("  T        {}", case.t_name());
        println!("  rank     {}", case.rank);
        println!(
            "  torsion  {}",
            if torsion.is_empty() {
                "trivial".into()
            } else {
                torsion.join(" x ")
            }
        );
        println!("  c_max    {}", format_rational(&c_max));
        println!("  c_min    {}", format_rational(&c_min));
        println!("  delta    {}", format_rational(&delta));
        println!("  mu       {}", format_rational(&mu));
        println!("  det E0   {}", case.narrow_det());
        println!("  Q_X      {}", matrix_line(&qx));
    }
    Ok(())
}

fn matrix_line(m: &RationalMatrix) -> String {
    let rows: Vec<String> = (0..m.rows())
        .map(|i| {
            let cells: Vec<String> = (0..m.cols()).map(|j| format_rational(&m[(i, j)])).collect();
            format!("[{}]", cells.join(", "))
        })
        .collect();
    format!("[{}]", rows.join(", "))
}

fn provenance_str(case: &MWCase) -> &'static str {
    match case.provenance {
        Provenance::Paper => "PAPER",
        Provenance::OguisoShioda => "OS",
    }
}

fn verdict_str(v: Verdict) -> &'static str {
    match v {
        Verdict::Gap => "gap",
        Verdict::NotGap => "ok",
        Verdict::Unknown => "unknown",
    }
}

fn gaps_cmd(cli: &Cli, case_no: usize, max_k: usize) -> Result<(), Error> {
    let dataset = load_dataset(cli)?;
    let case = dataset.get(case_no)?;
    let engine = GapEngine::new(case)?;
    let mut json_rows = Vec::new();
    let mut gap_list = Vec::new();
    for k in 0..=max_k {
        let v = engine.decide_best(k)?;
        let (rule, witness) = match (&v.witness, &v.refutation) {
            (Some(w), _) => (w.rule_id().to_string(), w.describe()),
            (None, Some(r)) => ("necessary".to_string(), r.clone()),
            (None, None) => ("-".to_string(), "-".to_string()),
        };
        if v.verdict == Verdict::Gap {
            gap_list.push(k);
        }
        if cli.json {
            json_rows.push(json!({
                "k": k,
                "verdict": verdict_str(v.verdict),
                "rule": rule,
                "witness": witness,
            }));
        } else {
            println!(
                "k={k} verdict={} rule={rule} witness={witness}",
                verdict_str(v.verdict)
            );
        }
    }
    if cli.json {
        println!(
            "{}",
            json!({ "case": case_no, "rows": json_rows, "gaps": gap_list })
        );
    } else {
        println!(
            "gaps up to {max_k}: {}",
            if gap_list.is_empty() {
                "none".to_string()
            } else {
                gap_list
                    .iter()
                    .map(usize::to_string)
                    .collect::<Vec<_>>()
                    .join(", ")
            }
        );
    }
    Ok(())
}

fn density_cmd(cli: &Cli, case_no: usize, max_n: usize) -> Result<(), Error> {
    let dataset = load_dataset(cli)?;
    let case = dataset.get(case_no)?;
    let (lower, upper) = gap_density(case, max_n)?;
    if cli.json {
        println!(
            "{}",
            json!({
                "case": case_no,
                "n": max_n,
                "lower": format_rational(&lower),
                "upper": format_rational(&upper),
            })
        );
    } else if lower == upper {
        println!(
            "gap density of case {case_no} over 1..{max_n}: {}",
            format_rational(&lower)
        );
    } else {
        println!(
            "gap density of case {case_no} over 1..{max_n}: between {} and {}",
            format_rational(&lower),
            format_rational(&upper)
        );
    }
    Ok(())
}

fn one_gap_path_str(p: &OneGapPath) -> &'static str {
    match p {
        OneGapPath::NarrowNormFour => "norm-4 vector in the narrow lattice",
        OneGapPath::NarrowNormTwoTorsion => "norm-2 vector with torsion",
        OneGapPath::RankOneCriterion => "rank-1 criterion",
        OneGapPath::IntervalSquare => "interval square",
        OneGapPath::SpecialWitness => "special witness",
    }
}

fn one_gap_report(cli: &Cli) -> Result<(), Error> {
    let dataset = load_dataset(cli)?;
    let entries = classify_1_gap(&dataset)?;
    let mut rows = Vec::new();
    for e in &entries {
        let path = e.path.as_ref().map(one_gap_path_str).unwrap_or("-");
        let witness = e
            .witness
            .as_ref()
            .map(|w| w.describe())
            .unwrap_or_else(|| "-".into());
        if cli.json {
            rows.push(json!({
                "case": e.case_no,
                "verdict": verdict_str(e.verdict),
                "path": path,
                "witness": witness,
            }));
        } else {
            println!(
                "case {:>2}: {:<7} via {path} ({witness})",
                e.case_no,
                verdict_str(e.verdict)
            );
        }
    }
    let gaps: Vec<usize> = entries
        .iter()
        .filter(|e| e.verdict == Verdict::Gap)
        .map(|e| e.case_no)
        .collect();
    if cli.json {
        println!("{}", json!({ "rows": rows, "one_gap_cases": gaps }));
    } else {
        println!(
            "cases with a 1-gap: {}",
            gaps.iter()
                .map(usize::to_string)
                .collect::<Vec<_>>()
                .join(", ")
        );
    }
    Ok(())
}

fn parse_fibers(s: &str) -> Result<Vec<FiberType>, Error> {
    s.split(',').map(|p| p.trim().parse()).collect()
}

fn conic_admissible(cli: &Cli, fibers: &str, rank: u8) -> Result<(), Error> {
    let fibers = parse_fibers(fibers)?;
    let config = FiberConfiguration::new(fibers, Some(rank))?;
    let report = validate_configuration(&config);
    let adm = admissible_types(&config)?;
    let mut allowed = vec!["0".to_string()];
    if adm.a2 {
        allowed.push("A2".into());
    }
    if adm.a_n {
        allowed.push("A_n (n>=3)".into());
    }
    if adm.d3 {
        allowed.push("D3".into());
    }
    if adm.d_m {
        allowed.push("D_m (m>=4)".into());
    }
    let rnrf = resurf_core::conic::rnrf_available(&config, &RnrfExtras::default())?;
    if cli.json {
        println!(
            "{}",
            json!({
                "euler_sum": report.euler_sum,
                "admissible": { "A2": adm.a2, "An": adm.a_n, "D3": adm.d3, "Dm": adm.d_m },
                "allowed": allowed,
                "rnrf_from_configuration_alone": rnrf,
            })
        );
    } else {
        println!("euler sum {}", report.euler_sum);
        println!(
            "admissible conic-bundle fiber types: {}",
            allowed.join(", ")
        );
        println!("RNRF conic bundle from the configuration alone: {rnrf}");
    }
    Ok(())
}

fn conic_classify(cli: &Cli, graph: &PathBuf) -> Result<(), Error> {
    let g = graph_from_json(&read_json(graph)?)?;
    let check = is_conic_class(&g);
    if !check.is_conic_class {
        return Err(Error::domain(format!(
            "not a conic class: {}",
            check.diagnostic.unwrap_or_default()
        )));
    }
    let t = classify_conic_fiber(&g)?;
    if cli.json {
        println!("{}", json!({ "conic_class": true, "type": t.to_string() }));
    } else {
        println!("conic class of type {t}");
    }
    Ok(())
}

/// Re-derive every quoted datum; exit code 2 on any integrity mismatch.
fn verify_tables(cli: &Cli) -> Result<(), Error> {
    let dataset = load_dataset(cli)?;
    let mut checks: Vec<(String, bool)> = Vec::new();
    let mut notes: Vec<String> = Vec::new();

    // bounds tables
    let delta_two = [24usize, 38, 53, 57, 58, 61];
    let delta_more: [(usize, (i64, i64)); 4] =
        [(41, (13, 6)), (42, (5, 2)), (59, (13, 6)), (60, (5, 2))];
    for no in delta_two {
        let (c_max, c_min, delta) = bounds(dataset.get(no)?)?;
        checks.push((
            format!("case {no}: (c_max, c_min, delta) = (5/2, 1/2, 2)"),
            c_max == rat(5, 2) && c_min == rat(1, 2) && delta == rat(2, 1),
        ));
    }
    for (no, (dn, dd)) in delta_more {
        let (_, c_min, delta) = bounds(dataset.get(no)?)?;
        checks.push((
            format!("case {no}: delta = {dn}/{dd} with c_min = 1/2"),
            delta == rat(dn, dd) && c_min == rat(1, 2),
        ));
    }
    {
        use resurf_core::LatticeBlock::A;
        let (c_max, c_min, _) = resurf_core::mwl::bounds_of_blocks(&[A(3), A(2), A(1)])?;
        checks.push((
            "worked example A3+A2+A1 gives (13/6, 1/2)".into(),
            c_max == rat(13, 6) && c_min == rat(1, 2),
        ));
    }

    // minimal norms quoted in the tables
    for (no, (n, d)) in [
        (20usize, (1i64, 6i64)),
        (27, (2, 3)),
        (29, (1, 6)),
        (31, (2, 15)),
        (37, (1, 12)),
        (40, (1, 6)),
        (43, (1, 2)),
        (53, (1, 6)),
        (55, (1, 20)),
        (59, (1, 12)),
        (61, (1, 6)),
    ] {
        let mu = minimal_norm(dataset.get(no)?)?;
        checks.push((format!("case {no}: mu = {n}/{d}"), mu == rat(n, d)));
    }

    // interval squares used in the 1-gap proof
    for (no, n) in [
        (20usize, 4i64),
        (27, 2),
        (29, 4),
        (31, 4),
        (37, 5),
        (40, 4),
        (53, 3),
        (61, 3),
    ] {
        let engine = GapEngine::new(dataset.get(no)?)?;
        let w = engine.sufficient_check(1)?;
        let ok = matches!(
            &w,
            Some(resurf_core::gaps::WitnessData::IntervalSquare { n: m })
                if *m == resurf_core::Int::from(n)
        );
        checks.push((format!("case {no}: k=1 interval square {n}^2"), ok));
    }

    // first gaps of the torsion-free rank-1 rows
    for (no, pair) in [
        (43usize, [1usize, 4]),
        (46, [2, 5]),
        (49, [3, 7]),
        (50, [6, 11]),
    ] {
        let (gaps, _) = resurf_core::gaps::gap_numbers_up_to(dataset.get(no)?, 15)?;
        checks.push((format!("case {no}: first gaps {pair:?}"), gaps[..2] == pair));
    }
    for (no, published, computed) in [
        (45usize, [8usize, 11], [4usize, 8]),
        (47, [12, 16], [7, 12]),
        (55, [16, 20], [10, 16]),
        (56, [22, 27], [15, 22]),
    ] {
        let case = dataset.get(no)?;
        let engine = GapEngine::new(case)?;
        let (gaps, _) = resurf_core::gaps::gap_numbers_up_to(case, 30)?;
        let published_are_gaps = engine.r1_torsion_free_is_gap(published[0])?
            && engine.r1_torsion_free_is_gap(published[1])?;
        checks.push((
            format!("case {no}: published pair {published:?} are gaps"),
            published_are_gaps,
        ));
        checks.push((
            format!("case {no}: first gaps {computed:?}"),
            gaps[..2] == computed,
        ));
        notes.push(format!(
            "case {no}: published first gaps {published:?} omit the earlier gap {} \
             (the integrality side condition excludes the square at the interval edge)",
            computed[0]
        ));
    }

    // 290 witness table
    match verify_290_witnesses() {
        Ok(rows) => checks.push((
            format!("290 table: {} rows verified", rows.len()),
            rows.len() == 29,
        )),
        Err(e) => checks.push((format!("290 table: {e}"), false)),
    }

    // 1-gap classification
    let entries = classify_1_gap(&dataset)?;
    let gap_cases: Vec<usize> = entries
        .iter()
        .filter(|e| e.verdict == Verdict::Gap)
        .map(|e| e.case_no)
        .collect();
    checks.push((
        "1-gap classification: exactly case 43".into(),
        gap_cases == vec![43],
    ));
    let unknowns = entries
        .iter()
        .filter(|e| e.verdict == Verdict::Unknown)
        .count();
    checks.push((
        "1-gap classification: no unknown verdicts".into(),
        unknowns == 0,
    ));

    // duality and Q_X integrality across the dataset
    let mut all_dual = true;
    for case in dataset.cases() {
        if qx_form(case).is_err() {
            all_dual = false;
        }
    }
    checks.push((
        "all rows: free = dual of narrow, Q_X integral".into(),
        all_dual,
    ));

    let failed: Vec<&(String, bool)> = checks.iter().filter(|(_, ok)| !ok).collect();
    if cli.json {
        println!(
            "{}",
            json!({
                "checks": checks.iter().map(|(name, ok)| json!({
                    "check": name,
                    "ok": ok,
                })).collect::<Vec<_>>(),
                "notes": notes,
                "failed": failed.len(),
            })
        );
    } else {
        for (name, ok) in &checks {
            println!("{} {name}", if *ok { "ok  " } else { "FAIL" });
        }
        for n in &notes {
            println!("note: {n}");
        }
        println!("{} checks, {} failed", checks.len(), failed.len());
    }
    if !failed.is_empty() {
        return Err(Error::DataIntegrity(format!(
            "{} table checks failed",
            failed.len()
        )));
    }
    Ok(())
}
