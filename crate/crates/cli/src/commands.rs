use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use ghfp::code::GhCode;
use ghfp::extension::{equivalence, expected_profile, fh_intersection_profile, transversal_is_rds, RdsParams};
use ghfp::gh_matrix::{gen_sylvester, is_gh, Matrix};
use ghfp::group::ElementOrder;
use ghfp::monomial::{automorphisms_from_star, regular_row_action_check, CheckMode, AUT_SAMPLES};
use ghfp::planar::{self, CellStatus, PlanarParams, Table1Cell, BIG_BUDGET, DEFAULT_BUDGET};
use ghfp::{io, Cocycle, Error, Field, GhMatrix, Group, PropelinearCode, Result};
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::output::{Out, RunRecord};
use crate::{BuildArgs, Cli, Command, Construction, Format, Order};

/// Columns of the planar table.
const TABLE1_B: [u32; 4] = [3, 5, 7, 9];

/// Runs one command and prints its output; `Ok(false)` when a requested
/// check failed.
pub fn run(cli: &Cli) -> Result<bool> {
    let name = match &cli.command {
        Command::Build(_) => "build",
        Command::Verify { .. } => "verify",
        Command::Code { .. } => "code",
        Command::Propelinear { .. } => "propelinear",
        Command::Rds { .. } => "rds",
        Command::Autcheck { .. } => "autcheck",
        Command::Table1 { .. } => "table1",
        Command::Report { .. } => "report",
    };
    let mut rec = RunRecord::new(name, cli.seed);
    let mut out = Out::new();
    let seed = cli.seed;
    match &cli.command {
        Command::Build(args) => {
            if !build(args, &mut rec, &mut out)? {
                return Ok(true);
            }
        }
        Command::Verify { file } => verify(&load(file, &mut rec)?, &mut out),
        Command::Code { file, rank, kernel, p_kernel, min_distance } => {
            let all = !(*rank || *kernel || *p_kernel || *min_distance);
            let code = GhCode::new(load(file, &mut rec)?.gh()?)?;
            code_report(&code, seed, all || *rank, all || *kernel, all || *p_kernel, all || *min_distance, &mut out);
        }
        Command::Propelinear { file, pi_table, group_structure, verify } => {
            let all = !(*pi_table || *group_structure || *verify);
            let psi = load(file, &mut rec)?.cocycle()?;
            let p = PropelinearCode::ghfp_from_cocycle(&psi)?;
            if all || *group_structure {
                structure(&p, &mut out)?;
            }
            if all || *verify {
                verify_propelinear(&p, seed, &mut out);
            }
            if all || *pi_table {
                pis(&p, psi.group(), &mut out);
            }
        }
        Command::Rds { file, profile } => {
            let psi = load(file, &mut rec)?.cocycle()?;
            rds(&psi, &mut out)?;
            if *profile {
                intersection_profile(&PropelinearCode::ghfp_from_cocycle(&psi)?, &mut out);
            }
        }
        Command::Autcheck { file, full, expanded } => {
            let psi = load(file, &mut rec)?.cocycle()?;
            autcheck(&PropelinearCode::ghfp_from_cocycle(&psi)?, seed, *full, *expanded, &mut out)?;
        }
        Command::Table1 { a_min, a_max } => table1(*a_min, *a_max, cli.big, seed, &mut out),
        Command::Report { file } => report(&load(file, &mut rec)?, seed, &mut out)?,
    }
    if cli.json {
        println!("{}", serde_json::to_string_pretty(&rec.to_json(&out)).expect("JSON values serialize"));
    } else {
        print!("{}", out.text());
    }
    Ok(out.ok)
}

enum Input {
    Coc(Cocycle),
    Ghm(Matrix),
}

impl Input {
    fn matrix(&self) -> Matrix {
        match self {
            Input::Coc(psi) => psi.matrix(),
            Input::Ghm(m) => m.clone(),
        }
    }

    fn gh(&self) -> Result<GhMatrix> {
        is_gh(&self.matrix())
    }

    fn cocycle(self) -> Result<Cocycle> {
        match self {
            Input::Coc(psi) => Ok(psi),
            Input::Ghm(_) => Err(Error::DomainMismatch("this command needs a cocycle (.coc) file".into())),
        }
    }
}

/// Relative paths missing from the working directory are looked up in
/// `$GHFP_DATA_DIR`.
fn resolve(path: &Path) -> PathBuf {
    if path.is_relative() && !path.exists() {
        if let Some(dir) = std::env::var_os("GHFP_DATA_DIR") {
            let alt = Path::new(&dir).join(path);
            if alt.exists() {
                return alt;
            }
        }
    }
    path.to_path_buf()
}

fn read(path: &Path, rec: &mut RunRecord) -> Result<String> {
    let bytes = fs::read(path).map_err(|e| Error::Io(format!("cannot read {}: {e}", path.display())))?;
    rec.add_input(path, &bytes);
    String::from_utf8(bytes).map_err(|_| Error::Parse { line: 1, column: 1, message: format!("{} is not UTF-8", path.display()) })
}

fn load(path: &Path, rec: &mut RunRecord) -> Result<Input> {
    let path = resolve(path);
    let text = read(&path, rec)?;
    match path.extension().and_then(|e| e.to_str()) {
        Some("coc") => {
            let dir = path.parent().map(Path::to_path_buf).unwrap_or_default();
            let psi = io::parse_coc_with(&text, &|rel| io::read_cay(&dir.join(rel)))?;
            Ok(Input::Coc(psi))
        }
        Some("ghm") => Ok(Input::Ghm(io::parse_ghm(&text)?)),
        _ => Err(Error::DomainMismatch(format!("{}: expected a .coc or .ghm file", path.display()))),
    }
}

fn need(v: Option<u32>, flag: &str) -> Result<u32> {
    v.ok_or_else(|| Error::DomainMismatch(format!("--{flag} is required for this construction")))
}

fn field(p: u32, m: u32, poly: &Option<String>) -> Result<Field> {
    match poly {
        None => Field::with_default(p, m),
        Some(s) => {
            let cs: std::result::Result<Vec<u32>, _> = s.split(',').map(|c| c.trim().parse()).collect();
            let cs = cs.map_err(|_| Error::DomainMismatch(format!("bad polynomial `{s}`")))?;
            Field::new(p, m, &cs)
        }
    }
}

/// `q = p^m` with `p` prime.
fn prime_power(q: u32) -> Result<(u32, u32)> {
    let p = (2..=q).find(|d| q.is_multiple_of(*d)).ok_or(Error::NotPrime(q as u64))?;
    let (mut n, mut m) = (q, 0);
    while n % p == 0 {
        n /= p;
        m += 1;
    }
    if n != 1 {
        return Err(Error::NotPrime(q as u64));
    }
    Ok((p, m))
}

fn load_cocycle(path: &Option<PathBuf>, flag: &str, rec: &mut RunRecord) -> Result<Cocycle> {
    let path = path.as_ref().ok_or_else(|| Error::DomainMismatch(format!("--{flag} is required")))?;
    load(path, rec)?.cocycle()
}

fn construct(args: &BuildArgs, rec: &mut RunRecord) -> Result<Cocycle> {
    match args.construction {
        Construction::Sylvester => {
            let f = field(need(args.p, "p")?, args.m.unwrap_or(1), &args.poly)?;
            let order = match args.order {
                Order::Encoding => ElementOrder::Encoding,
                Order::Primitive => ElementOrder::PrimitivePower,
            };
            Ok(Cocycle::multiplication(&f, order))
        }
        Construction::SylvesterPower => {
            let (p, m) = prime_power(need(args.q, "q")?)?;
            let f = field(p, m, &args.poly)?;
            let s = Cocycle::multiplication(&f, ElementOrder::Encoding);
            let mut psi = s.clone();
            for _ in 1..need(args.t, "t")?.max(1) {
                psi = s.tensor(&psi)?;
            }
            Ok(psi)
        }
        Construction::GenSylvester => {
            let (p, m, k) = (need(args.p, "p")?, args.m.unwrap_or(1), need(args.k, "k")?);
            let h = gen_sylvester(p, m, k)?;
            // x·y is bilinear, hence a cocycle on Z_p^{mk}
            Cocycle::check(Group::elementary_abelian(p, m * k)?, h.field().clone(), h.data().to_vec())
        }
        Construction::Planar => {
            let (a, b) = (need(args.a, "a")?, need(args.b, "b")?);
            let params = if args.unrestricted { PlanarParams::unrestricted(a, b)? } else { PlanarParams::new(a, b)? };
            let f = match args.poly {
                Some(_) => field(3, a, &args.poly)?,
                None => planar::planar_field(a)?,
            };
            planar::planar_coboundary(params, &f)
        }
        Construction::Kronecker => {
            let left = load_cocycle(&args.left, "left", rec)?;
            let right = load_cocycle(&args.right, "right", rec)?;
            left.tensor(&right)
        }
    }
}

/// Writes the built object; returns whether a report should be printed
/// (the file itself goes to stdout otherwise).
fn build(args: &BuildArgs, rec: &mut RunRecord, out: &mut Out) -> Result<bool> {
    let psi = construct(args, rec)?;
    // every built object passes the GH verifier before it is written
    let h = is_gh(&psi.matrix())?;
    let format = match &args.out {
        Some(path) => match path.extension().and_then(|e| e.to_str()) {
            Some("coc") => Format::Coc,
            Some("ghm") => Format::Ghm,
            _ => return Err(Error::DomainMismatch("--out must end in .coc or .ghm".into())),
        },
        None => args.format,
    };
    let mut written = Vec::new();
    let content = match format {
        Format::Ghm => io::write_ghm(&h.to_matrix()),
        Format::Coc => match io::write_coc(&psi, None) {
            Ok(s) => s,
            Err(_) => {
                // a non-lexicographic group travels in a companion .cay
                let path = args.out.as_ref().ok_or_else(|| {
                    Error::DomainMismatch("this group needs a .cay file; use --out to write both".into())
                })?;
                let cay = path.with_extension("cay");
                let name = cay.file_name().and_then(|n| n.to_str()).expect("path has a file name").to_string();
                write_file(&cay, &io::write_cay(psi.group()))?;
                written.push(cay.display().to_string());
                io::write_coc(&psi, Some(&name))?
            }
        },
    };
    let Some(path) = &args.out else {
        print!("{content}");
        return Ok(false);
    };
    write_file(path, &content)?;
    written.push(path.display().to_string());
    out.line(format!("GH({},{}) OK", h.field().q(), h.lambda()));
    out.json("q", h.field().q());
    out.json("lambda", h.lambda());
    out.kv("v", h.order());
    out.kv("wrote", Value::from(written));
    Ok(true)
}

fn write_file(path: &Path, content: &str) -> Result<()> {
    fs::write(path, content).map_err(|e| Error::Io(format!("cannot write {}: {e}", path.display())))
}

fn verify(input: &Input, out: &mut Out) {
    match input.gh() {
        Ok(h) => {
            out.line(format!("GH({},{}) OK", h.field().q(), h.lambda()));
            out.json("gh", true);
            out.json("q", h.field().q());
            out.json("lambda", h.lambda());
            let t = is_gh(&h.to_matrix().transpose()).is_ok();
            out.check("transpose_gh", t);
        }
        Err(e) => {
            out.ok = false;
            out.line(format!("not GH: {e}"));
            out.json("gh", false);
            out.json("witness", e.to_string());
        }
    }
}

fn code_report(code: &GhCode, seed: u64, rank: bool, kernel: bool, p_kernel: bool, dist: bool, out: &mut Out) {
    out.kv("q", code.field().q());
    out.kv("v", code.length());
    let r = rank.then(|| code.rank());
    if let Some(r) = r {
        out.kv("rank", r);
    }
    let k = kernel.then(|| code.kernel(seed));
    if let Some(k) = &k {
        out.kv("kernel", k.dim);
        out.kv("kernel_seed", k.seed);
    }
    if p_kernel {
        let pk = code.p_kernel(seed);
        let bound = 1.0 + code.p_valuation() as f64 / pk.e as f64;
        out.kv("p_kernel", pk.fp_dim);
        out.kv("p_kernel_q_dim", pk.q_dim());
        out.kv("p_kernel_bound", bound);
        let above = k.as_ref().is_none_or(|k| k.dim as f64 <= pk.q_dim() + 1e-9);
        out.check("p_kernel_bound_holds", above && pk.q_dim() <= bound + 1e-9);
    }
    if dist {
        let d = code.min_distance();
        out.kv("min_distance", d.value);
        out.kv("min_distance_mode", d.mode.as_str());
        out.check("min_distance_is_v_minus_lambda", d.value == code.theoretical_distance());
    }
    if let (Some(r), Some(k)) = (r, &k) {
        out.kv("linear", code.is_linear(r, k.dim));
    }
}

fn structure(p: &PropelinearCode, out: &mut Out) -> Result<()> {
    out.kv("group", structure_value(&p.group_structure()));
    out.kv("pi_group", structure_value(&p.pi_group_structure()?));
    Ok(())
}

fn structure_value(s: &ghfp::GroupStructure) -> Value {
    match s.invariants() {
        Some(inv) => json!(inv),
        None => Value::String(s.to_string()),
    }
}

fn verify_propelinear(p: &PropelinearCode, seed: u64, out: &mut Out) {
    let rep = p.verify_full_propelinear(seed);
    for item in &rep.items {
        out.check(&format!("check.{}", item.name), item.passed);
        if let Some(w) = &item.witness {
            out.kv(&format!("witness.{}", item.name), w.as_str());
        }
    }
    out.kv("verify_mode", if rep.exhaustive { "exhaustive" } else { "sampled" });
    out.kv("verify_seed", rep.seed);
}

/// One line per coset, labelled by the group element of its row of H.
fn pis(p: &PropelinearCode, g: &Group, out: &mut Out) {
    let table = p.pi_table();
    for (r, cycle) in table.iter().enumerate() {
        out.line(format!("pi[{}]={cycle}", g.label(r)));
    }
    out.json("pi_table", table);
}

fn rds(psi: &Cocycle, out: &mut Out) -> Result<()> {
    let v = psi.order();
    let q = psi.field().q();
    let params = RdsParams::cocyclic(v, q);
    out.kv("rds_params", json!([params.v, params.m, params.k, params.lambda]));
    let eq = equivalence(psi)?;
    out.kv("orthogonal", eq.orthogonal);
    out.kv("gh", eq.gh);
    out.kv("rds", eq.rds);
    out.check("agree", eq.agree());
    let rep = transversal_is_rds(psi)?;
    out.kv("hits_on_z", rep.hits_on_z);
    out.kv("counts_off_z", json!(rep.counts_off_z));
    if let Some((e, c)) = rep.witness {
        out.kv("witness", json!([e, c]));
    }
    Ok(())
}

fn intersection_profile(p: &PropelinearCode, out: &mut Out) {
    let profile = fh_intersection_profile(p);
    let mut hist = BTreeMap::new();
    for &x in &profile {
        *hist.entry(x).or_insert(0usize) += 1;
    }
    for (value, count) in &hist {
        out.line(format!("profile[{value}]={count}"));
    }
    out.json("profile", json!(hist.iter().map(|(v, c)| json!([v, c])).collect::<Vec<_>>()));
    let ok = profile.iter().enumerate().all(|(x, &n)| n == expected_profile(p, x));
    out.check("profile_ok", ok);
}

fn autcheck(p: &PropelinearCode, seed: u64, full: bool, expanded: bool, out: &mut Out) -> Result<()> {
    let mode = if full || p.len() <= ghfp::propelinear::EXHAUSTIVE_CODE_LIMIT {
        CheckMode::Full
    } else {
        CheckMode::Sampled { count: AUT_SAMPLES, seed }
    };
    let rep = automorphisms_from_star(p, mode)?;
    out.kv("aut_mode", if rep.exhaustive { "full" } else { "sampled" });
    if !rep.exhaustive {
        out.kv("aut_seed", seed);
    }
    out.kv("aut_verified", rep.verified);
    out.check("aut_homomorphism", rep.homomorphism);
    out.check("aut_transitive", rep.transitive);
    out.check("aut_scalar_pairs", rep.scalar_pairs);
    if expanded {
        out.check("expanded_regular", regular_row_action_check(p)?);
    }
    Ok(())
}

fn table1(a_min: u32, a_max: u32, big: bool, seed: u64, out: &mut Out) {
    let budget = if big { BIG_BUDGET } else { DEFAULT_BUDGET };
    let jobs: Vec<(u32, u32)> = (a_min..=a_max).flat_map(|a| TABLE1_B.iter().map(move |&b| (a, b))).collect();
    let cells: Vec<Table1Cell> = jobs
        .par_iter()
        .map(|&(a, b)| {
            let status = match planar::table1_cell(a, b, budget, seed) {
                Ok(cell) => cell.status,
                Err(Error::BudgetExceeded(_)) => CellStatus::SkippedBudget,
                Err(_) => CellStatus::Inadmissible,
            };
            Table1Cell { a, b, status }
        })
        .collect();
    out.line("a b v rank kernel conjecture_r match seconds");
    let mut rows = Vec::new();
    for c in &cells {
        if matches!(c.status, CellStatus::Inadmissible) && c.b >= c.a {
            // outside the 3 ≤ b ≤ a-1 range entirely: not a table cell
            continue;
        }
        out.line(c.to_string());
        rows.push(cell_json(c));
    }
    out.json("cells", rows);
    let computed: Vec<_> = cells
        .iter()
        .filter_map(|c| match c.status {
            CellStatus::Computed { rank, kernel, .. } => Some((c, rank, kernel)),
            _ => None,
        })
        .collect();
    out.kv("computed", computed.len());
    out.kv("budget_a_max", budget);
    out.check("kernel_all_one", computed.iter().all(|&(_, _, k)| k == 1));
    out.check("conjecture_all_match", computed.iter().all(|&(c, r, _)| r == c.conjecture()));
}

fn cell_json(c: &Table1Cell) -> Value {
    let mut j = json!({ "a": c.a, "b": c.b, "v": c.v(), "conjecture_r": c.conjecture() });
    match c.status {
        CellStatus::Computed { rank, kernel, seconds } => {
            j["rank"] = json!(rank);
            j["kernel"] = json!(kernel);
            j["match"] = json!(rank == c.conjecture());
            j["seconds"] = json!(seconds);
        }
        CellStatus::Inadmissible => j["status"] = json!("inadmissible"),
        CellStatus::SkippedBudget => j["status"] = json!("skipped(budget)"),
    }
    j
}

fn report(input: &Input, seed: u64, out: &mut Out) -> Result<()> {
    let start = Instant::now();
    let h = match input.gh() {
        Ok(h) => h,
        Err(e @ Error::NotGeneralizedHadamard { .. }) => {
            out.ok = false;
            out.line(format!("not GH: {e}"));
            out.json("gh", false);
            if let Input::Coc(psi) = input {
                out.kv("orthogonal", psi.is_orthogonal()?);
            }
            return Ok(());
        }
        Err(e) => return Err(e),
    };
    out.line(format!("GH({},{}) OK", h.field().q(), h.lambda()));
    out.json("gh", true);
    let code = GhCode::new(h)?;
    code_report(&code, seed, true, true, true, true, out);
    if let Input::Coc(psi) = input {
        out.check("orthogonal", psi.is_orthogonal()?);
        let p = PropelinearCode::ghfp_from_cocycle(psi)?;
        structure(&p, out)?;
        let rep = p.verify_full_propelinear(seed);
        out.check("propelinear", rep.passed());
        for item in rep.items.iter().filter(|i| !i.passed) {
            out.kv(&format!("witness.{}", item.name), item.witness.clone().unwrap_or_default());
        }
        out.kv("verify_mode", if rep.exhaustive { "exhaustive" } else { "sampled" });
        let eq = equivalence(psi)?;
        out.check("rds", eq.rds);
        out.check("equivalence_agree", eq.agree());
        let profile = fh_intersection_profile(&p);
        let ok = profile.iter().enumerate().all(|(x, &n)| n == expected_profile(&p, x));
        out.check("profile_ok", ok);
    }
    out.json("seconds", start.elapsed().as_secs_f64());
    Ok(())
}
